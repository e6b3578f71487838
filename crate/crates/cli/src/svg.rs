//! Minimal SVG 1.1 output: rectangles and polylines only.

use std::fmt::Write as _;

pub struct Canvas {
    width: f64,
    height: f64,
    /// data window `(x0, x1, y0, y1)`
    window: (f64, f64, f64, f64),
    body: String,
}

impl Canvas {
    pub fn new(width: f64, height: f64, window: (f64, f64, f64, f64)) -> Self {
        Canvas {
            width,
            height,
            window,
            body: String::new(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.window;
        (
            (x - x0) / (x1 - x0) * self.width,
            self.height - (y - y0) / (y1 - y0) * self.height,
        )
    }

    /// Axis-aligned rectangle given by two data-space corners.
    pub fn rect(&mut self, a: (f64, f64), b: (f64, f64), fill: &str) {
        let (ax, ay) = self.map(a.0, a.1);
        let (bx, by) = self.map(b.0, b.1);
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
            ax.min(bx),
            ay.min(by),
            (bx - ax).abs(),
            (by - ay).abs()
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, closed: bool) {
        let mut s = String::new();
        for &(x, y) in pts {
            let (px, py) = self.map(x, y);
            let _ = write!(s, "{px:.3},{py:.3} ");
        }
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            s.trim_end()
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.body
        )
    }
}
