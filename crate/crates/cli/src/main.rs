mod input;
mod serve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use graphmaps_core::manifest::{BuildConfig, Construction, Manifest, Metrics};
use graphmaps_core::mesh::TieRule;
use graphmaps_core::pipeline::build;
use graphmaps_core::zoom::TileMode;

#[derive(Parser)]
#[command(name = "graphmaps", version, about = "Build and inspect multi-level graph maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Horizontal,
    Vertical,
    LowerIndex,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshKind {
    Sim,
    Fast,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline and write manifest.json plus one SVG per level.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// Node table for non-JSON input: `id x y [rank]`, tab-separated.
        #[arg(long)]
        positions: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Node quota per tile, or `auto` for the smallest that works.
        #[arg(long, default_value = "auto")]
        quota: String,
        /// Minimum angle between rails, degrees.
        #[arg(long)]
        alpha: Option<f64>,
        /// Minimum vertex-rail clearance.
        #[arg(long)]
        beta: Option<f64>,
        /// Faces narrower than this are merged into a neighbour.
        #[arg(long)]
        thin_face: Option<f64>,
        #[arg(long)]
        median_iters: Option<usize>,
        #[arg(long)]
        port_radius: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "2d")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "horizontal")]
        tie_rule: Tie,
        #[arg(long, value_enum, default_value = "sim")]
        mesh: MeshKind,
        /// Keep hidden nodes as obstacles when straightening upper levels.
        #[arg(long)]
        keep_hidden: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report metrics recomputed from a manifest's geometry.
    Metrics {
        manifest: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Render one level of a manifest as SVG.
    Svg {
        manifest: PathBuf,
        #[arg(long)]
        level: usize,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve a build directory over HTTP.
    Serve {
        dir: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn load(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Manifest::from_json(&text)?)
}

fn parse_quota(s: &str) -> Result<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse() {
        Ok(q) => Ok(Some(q)),
        Err(_) => bail!("quota must be `auto` or a non-negative integer, got {s:?}"),
    }
}

fn report(m: &Metrics, levels: &[(usize, usize, usize)]) -> String {
    let mut s = String::new();
    s += &format!("quota               {}\n", m.quota);
    s += &format!("objective F         {}\n", m.objective);
    s += &format!("mesh stretch        {:.7}\n", m.stretch);
    s += &format!("max route dilation  {:.7}\n", m.max_route_dilation);
    s += &format!("rank violations     {}\n", m.rank_violations);
    s += "level  nodes  edges  ink           tile-nodes  viewport-nodes  tile-rails\n";
    for (i, &(lv, nodes, edges)) in levels.iter().enumerate() {
        s += &format!(
            "{:<6} {:<6} {:<6} {:<13.4} {:<11} {:<15} {}\n",
            lv, nodes, edges, m.ink[i], m.max_tile_nodes[i], m.max_viewport_nodes[i], m.max_tile_rails[i]
        );
    }
    let hist: Vec<String> = m.junction_degrees.iter().map(|[d, c]| format!("{d}:{c}")).collect();
    s += &format!("junction degrees    {}\n", hist.join(" "));
    s
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Build {
            input,
            positions,
            levels,
            quota,
            alpha,
            beta,
            thin_face,
            median_iters,
            port_radius,
            seed,
            mode,
            tie_rule,
            mesh,
            keep_hidden,
            out,
        } => {
            let g = input::read_graph(&input, positions.as_deref())?;
            let cfg = BuildConfig {
                levels,
                quota: parse_quota(&quota)?,
                mode: match mode {
                    Mode::OneD => TileMode::OneD,
                    Mode::TwoD => TileMode::TwoD,
                },
                seed,
                tie_rule: match tie_rule {
                    Tie::Horizontal => TieRule::HorizontalWins,
                    Tie::Vertical => TieRule::VerticalWins,
                    Tie::LowerIndex => TieRule::LowerIndexWins,
                },
                construction: match mesh {
                    MeshKind::Sim => Construction::Sim,
                    MeshKind::Fast => Construction::Fast,
                },
                alpha,
                beta,
                thin_width: thin_face,
                median_iters,
                port_radius,
                keep_hidden_nodes: keep_hidden,
            };
            let m = build(&g, &cfg)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            fs::write(out.join("manifest.json"), m.to_json())?;
            for l in &m.levels {
                let (svg, _) = m.level_svg(l.level)?;
                fs::write(out.join(format!("level-{}.svg", l.level)), svg)?;
            }
            println!(
                "built {} levels, quota {}, F {}, stretch {:.4} -> {}",
                m.levels.len(),
                m.metrics.quota,
                m.metrics.objective,
                m.metrics.stretch,
                out.display()
            );
        }
        Cmd::Metrics { manifest, json } => {
            let m = load(&manifest)?;
            let fresh = m.recompute_metrics()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&fresh)?);
            } else {
                let rows: Vec<_> = m.levels.iter().map(|l| (l.level, l.nodes.len(), l.edges.len())).collect();
                print!("{}", report(&fresh, &rows));
            }
            if !fresh.approx_eq(&m.metrics, 1e-9) {
                bail!("stored metrics disagree with the manifest geometry");
            }
        }
        Cmd::Svg { manifest, level, out } => {
            let m = load(&manifest)?;
            let (svg, _) = m.level_svg(level)?;
            match out {
                Some(p) => fs::write(&p, svg).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{svg}"),
            }
        }
        Cmd::Serve { dir, port } => serve::serve(&dir, port)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
