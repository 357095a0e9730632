//! Read-only static file service for a build directory.

use std::fs;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::thread;

use anyhow::{anyhow, bail, Result};
use tiny_http::{Header, Method, Response, Server};

const WORKERS: usize = 4;

pub fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => "application/json",
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("map") | Some("txt") => "text/plain; charset=utf-8",
        _ => "application/octet-stream",
    }
}

/// File under `root` for a request path, refusing anything that climbs out.
fn resolve(root: &Path, url: &str) -> Option<PathBuf> {
    let path = url.split(['?', '#']).next().unwrap_or("");
    let rel = Path::new(path.trim_start_matches('/'));
    if rel.components().any(|c| !matches!(c, Component::Normal(_))) {
        return None;
    }
    let mut full = root.join(rel);
    if path.ends_with('/') || rel.as_os_str().is_empty() {
        full = full.join("index.html");
    }
    full.is_file().then_some(full)
}

pub fn serve(dir: &Path, port: u16) -> Result<()> {
    if !dir.join("manifest.json").is_file() {
        bail!("no manifest.json in {}", dir.display());
    }
    let server = Server::http(("127.0.0.1", port)).map_err(|e| anyhow!("cannot listen on port {port}: {e}"))?;
    let addr = server.server_addr().to_ip().ok_or_else(|| anyhow!("not an IP listener"))?;
    println!("serving {} on http://{addr}/", dir.display());
    let server = Arc::new(server);
    let root = Arc::new(dir.to_path_buf());
    let workers: Vec<_> = (0..WORKERS)
        .map(|_| {
            let (server, root) = (Arc::clone(&server), Arc::clone(&root));
            thread::spawn(move || {
                for req in server.incoming_requests() {
                    let resp = if !matches!(req.method(), Method::Get | Method::Head) {
                        Response::from_string("method not allowed").with_status_code(405).boxed()
                    } else {
                        match resolve(&root, req.url()).and_then(|p| fs::read(&p).ok().map(|b| (p, b))) {
                            Some((p, body)) => {
                                let ct = Header::from_bytes("Content-Type", content_type(&p)).expect("valid header");
                                Response::from_data(body).with_header(ct).with_chunked_threshold(usize::MAX).boxed()
                            }
                            None => Response::from_string("not found").with_status_code(404).boxed(),
                        }
                    };
                    let _ = req.respond(resp);
                }
            })
        })
        .collect();
    for w in workers {
        let _ = w.join();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_inside_root_only() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("manifest.json"), "{}").unwrap();
        fs::write(dir.path().join("index.html"), "").unwrap();
        assert_eq!(resolve(dir.path(), "/manifest.json?x=1"), Some(dir.path().join("manifest.json")));
        assert_eq!(resolve(dir.path(), "/"), Some(dir.path().join("index.html")));
        assert_eq!(resolve(dir.path(), "/../etc/passwd"), None);
        assert_eq!(resolve(dir.path(), "/missing"), None);
        assert_eq!(content_type(Path::new("a/manifest.json")), "application/json");
        assert_eq!(content_type(Path::new("level-1.svg")), "image/svg+xml");
    }
}
