//! Static three-panel plot: the boundary curve, `τ(x) − x`, and `v₀`.

use std::fmt::Write as _;

use num_complex::Complex64;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 300.0;
const PANEL: f64 = 300.0;
const PAD: f64 = 30.0;

pub struct Plot<'a> {
    pub boundary: &'a [Complex64],
    /// Points drawn as crosses, e.g. ellipse foci.
    pub markers: &'a [Complex64],
    pub nodes: &'a [f64],
    pub tau: &'a [f64],
    pub v0: &'a [f64],
}

struct Frame {
    x0: f64,
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Frame {
    fn new(panel: usize, lo: (f64, f64), hi: (f64, f64)) -> Self {
        Self {
            x0: panel as f64 * PANEL,
            lo,
            hi,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let span = PANEL - 2.0 * PAD;
        let sx = self.x0 + PAD + span * (x - self.lo.0) / (self.hi.0 - self.lo.0);
        let sy = HEIGHT - PAD - span * (y - self.lo.1) / (self.hi.1 - self.lo.1);
        (sx, sy)
    }
}

/// Range padded to a nonzero width so constant data plots as a centered line.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    let half = (0.5 * (hi - lo)).max(1e-9 * lo.abs().max(hi.abs())).max(1e-12);
    let mid = 0.5 * (lo + hi);
    (mid - 1.1 * half, mid + 1.1 * half)
}

fn polyline(out: &mut String, frame: &Frame, pts: impl Iterator<Item = (f64, f64)>, closed: bool) {
    let tag = if closed { "polygon" } else { "polyline" };
    out.push_str(&format!(
        "<{tag} fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\""
    ));
    for (i, (x, y)) in pts.enumerate() {
        let (sx, sy) = frame.map(x, y);
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{sx:.3},{sy:.3}").expect("write to string");
    }
    out.push_str("\"/>\n");
}

fn panel_frame(out: &mut String, index: usize, title: &str) {
    let x = index as f64 * PANEL;
    writeln!(
        out,
        "<rect x=\"{:.1}\" y=\"0.5\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#999\"/>",
        x + 0.5,
        PANEL - 1.0,
        HEIGHT - 1.0
    )
    .expect("write to string");
    writeln!(
        out,
        "<text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{title}</text>",
        x + PANEL / 2.0
    )
    .expect("write to string");
}

pub fn render(plot: &Plot) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .expect("write to string");
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Equal aspect for the curve.
    panel_frame(&mut out, 0, "boundary");
    let all = plot.boundary.iter().chain(plot.markers);
    let (xl, xh) = range(all.clone().map(|z| z.re));
    let (yl, yh) = range(all.map(|z| z.im));
    let half = 0.5 * (xh - xl).max(yh - yl);
    let (cx, cy) = (0.5 * (xl + xh), 0.5 * (yl + yh));
    let frame = Frame::new(0, (cx - half, cy - half), (cx + half, cy + half));
    polyline(&mut out, &frame, plot.boundary.iter().map(|z| (z.re, z.im)), true);
    if let Some(base) = plot.boundary.first() {
        let (sx, sy) = frame.map(base.re, base.im);
        writeln!(
            out,
            "<circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"4\" fill=\"#c0392b\"/>"
        )
        .expect("write to string");
    }
    for m in plot.markers {
        let (sx, sy) = frame.map(m.re, m.im);
        writeln!(
            out,
            "<path d=\"M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}\" stroke=\"#2d7d46\" stroke-width=\"1.5\"/>",
            sx - 4.0,
            sy - 4.0,
            sx + 4.0,
            sy + 4.0,
            sx - 4.0,
            sy + 4.0,
            sx + 4.0,
            sy - 4.0
        )
        .expect("write to string");
    }

    panel_frame(&mut out, 1, "tau(x) - x");
    let diff: Vec<f64> = plot.nodes.iter().zip(plot.tau).map(|(x, t)| t - x).collect();
    let frame = Frame::new(
        1,
        (0.0, range(diff.iter().copied()).0),
        (std::f64::consts::TAU, range(diff.iter().copied()).1),
    );
    polyline(
        &mut out,
        &frame,
        plot.nodes.iter().copied().zip(diff.iter().copied()),
        false,
    );

    panel_frame(&mut out, 2, "v0");
    let (vl, vh) = range(plot.v0.iter().copied());
    let frame = Frame::new(2, (0.0, vl), (std::f64::consts::TAU, vh));
    polyline(
        &mut out,
        &frame,
        plot.nodes.iter().copied().zip(plot.v0.iter().copied()),
        false,
    );

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_plot_has_flat_lift_and_round_curve() {
        let n = 32;
        let nodes: Vec<f64> = (0..n)
            .map(|j| std::f64::consts::TAU * j as f64 / n as f64)
            .collect();
        let boundary: Vec<Complex64> = nodes.iter().map(|&t| Complex64::cis(t)).collect();
        let ones = vec![1.0; n];
        let svg = render(&Plot {
            boundary: &boundary,
            markers: &[],
            nodes: &nodes,
            tau: &nodes,
            v0: &ones,
        });
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("width=\"900\" height=\"300\""));
        assert_eq!(svg.matches("<rect x=").count(), 3);
        // The flat graphs sit on the vertical middle of their panels.
        let lines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 2);
        for l in lines {
            assert!(l
                .split(' ')
                .filter(|p| p.contains(','))
                .all(|p| p.trim_end_matches("\"/>").ends_with(",150.000")));
        }
    }
}
