//! Minimal SVG writer used for debug dumps and level renderings.

use std::fmt::Write;

use crate::geom::{Point, Rect};

/// SVG document in layout coordinates. The y axis is flipped so that larger
/// y values are drawn higher, matching the layout convention.
pub struct SvgDoc {
    body: String,
    view: Rect,
    scale: f64,
    elements: usize,
}

impl SvgDoc {
    /// `view` is padded by 5% so boundary geometry stays visible.
    pub fn new(view: Rect) -> Self {
        let pad = 0.05 * view.diagonal().max(1e-9);
        let view = Rect::new(
            Point::new(view.min.x - pad, view.min.y - pad),
            Point::new(view.max.x + pad, view.max.y + pad),
        );
        SvgDoc { body: String::new(), view, scale: view.diagonal(), elements: 0 }
    }

    /// A length expressed as a fraction of the view diagonal.
    pub fn rel(&self, frac: f64) -> f64 {
        frac * self.scale
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (p.x - self.view.min.x, self.view.max.y - p.y)
    }

    pub fn line(&mut self, a: Point, b: Point, stroke: &str, width: f64) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" stroke-width="{width}" stroke-linecap="round"/>"#
        );
        self.elements += 1;
    }

    pub fn circle(&mut self, c: Point, r: f64, fill: &str, title: Option<&str>) {
        let (cx, cy) = self.map(c);
        match title {
            Some(t) => {
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}"><title>{}</title></circle>"#,
                    escape(t)
                );
            }
            None => {
                let _ = writeln!(self.body, r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}"/>"#);
            }
        }
        self.elements += 1;
    }

    /// Number of drawn elements (lines and circles).
    pub fn element_count(&self) -> usize {
        self.elements
    }

    pub fn finish(self) -> String {
        let (w, h) = (self.view.width().max(1e-9), self.view.height().max(1e-9));
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
