//! Minimal deterministic SVG plots of the complex plane.

use std::fmt::Write;

use polyspectra_core::pseudospectrum::GridSpec;
use polyspectra_core::Complex64;

const WIDTH: f64 = 800.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub fn layer_color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

pub struct Plot {
    window: GridSpec,
    height: f64,
    body: String,
    legend: Vec<(String, &'static str)>,
}

impl Plot {
    pub fn new(window: GridSpec) -> Self {
        let aspect = (window.y_max - window.y_min) / (window.x_max - window.x_min);
        Self {
            window,
            height: (WIDTH * aspect).clamp(100.0, 2400.0),
            body: String::new(),
            legend: Vec::new(),
        }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let w = &self.window;
        (
            (z.re - w.x_min) / (w.x_max - w.x_min) * WIDTH,
            (w.y_max - z.im) / (w.y_max - w.y_min) * self.height,
        )
    }

    fn path_data(&self, points: &[Complex64], closed: bool) -> String {
        let mut d = String::new();
        for (k, &z) in points.iter().enumerate() {
            let (x, y) = self.map(z);
            let _ = write!(d, "{}{x:.3} {y:.3}", if k == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }

    pub fn polyline(&mut self, points: &[Complex64], closed: bool, color: &str, width: f64) {
        if points.len() < 2 {
            return;
        }
        let d = self.path_data(points, closed);
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}"/>"#
        );
    }

    /// Eigenvalue marker drawn as "+".
    pub fn plus(&mut self, z: Complex64, color: &str) {
        let (x, y) = self.map(z);
        let s = 6.0;
        let _ = writeln!(
            self.body,
            r#"<path d="M{:.3} {y:.3} L{:.3} {y:.3} M{x:.3} {:.3} L{x:.3} {:.3}" stroke="{color}" stroke-width="1.5"/>"#,
            x - s,
            x + s,
            y - s,
            y + s
        );
    }

    pub fn dot(&mut self, z: Complex64, radius: f64, color: &str) {
        let (x, y) = self.map(z);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}" fill="{color}"/>"#);
    }

    pub fn legend(&mut self, label: String, color: &'static str) {
        self.legend.push((label, color));
    }

    fn axes(&self) -> String {
        let w = &self.window;
        let mut s = String::new();
        if w.x_min < 0.0 && w.x_max > 0.0 {
            let (x, _) = self.map(Complex64::new(0.0, 0.0));
            let _ = writeln!(
                s,
                r##"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{:.3}" stroke="#cccccc" stroke-width="0.5"/>"##,
                self.height
            );
        }
        if w.y_min < 0.0 && w.y_max > 0.0 {
            let (_, y) = self.map(Complex64::new(0.0, 0.0));
            let _ = writeln!(
                s,
                r##"<line x1="0" y1="{y:.3}" x2="{WIDTH}" y2="{y:.3}" stroke="#cccccc" stroke-width="0.5"/>"##
            );
        }
        s
    }

    pub fn render(&self) -> String {
        let w = &self.window;
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(s, "<!-- polyspectra {} -->", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h:.0}" viewBox="0 0 {WIDTH} {h:.3}">"#,
            h = self.height
        );
        let _ = writeln!(
            s,
            "<desc>window [{}, {}] x [{}, {}]</desc>",
            w.x_min, w.x_max, w.y_min, w.y_max
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        s.push_str(&self.axes());
        s.push_str(&self.body);
        for (k, (label, color)) in self.legend.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="10" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{label}</text>"#,
                18 + 16 * k
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_corners_and_renders_markers() {
        let g = GridSpec::new(-1.0, 1.0, -0.5, 0.5, 2, 2).unwrap();
        let mut p = Plot::new(g);
        assert_eq!(p.map(Complex64::new(-1.0, 0.5)), (0.0, 0.0));
        assert_eq!(p.map(Complex64::new(1.0, -0.5)), (800.0, 400.0));
        p.plus(Complex64::new(0.0, 0.0), "black");
        p.polyline(&[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)], false, "red", 1.0);
        let svg = p.render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("M394.000 200.000 L406.000 200.000"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
