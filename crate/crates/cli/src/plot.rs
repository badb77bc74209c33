//! Minimal static SVG emission: margin-vs-exponent curves, per-check
//! margin bars, and eigenvalue staircase plots.

/// Chart canvas constants shared by all plots.
const W: f64 = 720.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn from_ranges(xs: (f64, f64), ys: (f64, f64)) -> Frame {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs().max(1e-12);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x0, x1) = pad(xs.0, xs.1);
        let (y0, y1) = pad(ys.0, ys.1);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        ML + (x - self.x0) / (self.x1 - self.x0) * (W - ML - MR)
    }

    fn py(&self, y: f64) -> f64 {
        H - MB - (y - self.y0) / (self.y1 - self.y0) * (H - MT - MB)
    }
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        esc(title)
    )
}

fn axes(f: &Frame, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB,
        H - MB
    ));
    for k in 0..=4 {
        let x = f.x0 + (f.x1 - f.x0) * k as f64 / 4.0;
        let y = f.y0 + (f.y1 - f.y0) * k as f64 / 4.0;
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{:.3}</text>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{:.2e}</text>\n",
            f.px(x),
            H - MB + 18.0,
            x,
            ML - 6.0,
            f.py(y) + 4.0,
            y
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        esc(xlabel),
        H / 2.0,
        H / 2.0,
        esc(ylabel)
    ));
    // Zero line when the vertical range straddles it.
    if f.y0 < 0.0 && f.y1 > 0.0 {
        s.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{}\" y2=\"{:.1}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
            f.py(0.0),
            W - MR,
            f.py(0.0)
        ));
    }
    s
}

/// Signed-margin curve over an exponent grid; positive points (broken
/// inequalities) are marked in red.
pub fn margin_curve(title: &str, points: &[(f64, f64)]) -> String {
    let xs = points.iter().map(|p| p.0);
    let ys = points.iter().map(|p| p.1);
    let f = Frame::from_ranges(
        (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max)),
        (
            ys.clone().fold(0.0_f64, f64::min),
            points.iter().map(|p| p.1).fold(0.0_f64, f64::max),
        ),
    );
    let mut s = header(title);
    s.push_str(&axes(&f, "exponent p", "worst signed margin"));
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.1},{:.1}", f.px(x), f.py(y)))
        .collect();
    s.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
        path.join(" ")
    ));
    for &(x, y) in points {
        let color = if y > 0.0 { "crimson" } else { "steelblue" };
        s.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>\n",
            f.px(x),
            f.py(y)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// One horizontal bar per check: the worst signed relative violation.
pub fn margin_bars(title: &str, rows: &[(String, f64)]) -> String {
    let h = (MT + MB + 22.0 * rows.len() as f64).max(160.0);
    let lo = rows.iter().map(|r| r.1).fold(0.0_f64, f64::min);
    let hi = rows.iter().map(|r| r.1).fold(0.0_f64, f64::max);
    let span = (hi - lo).max(1e-12);
    let px = |v: f64| 220.0 + (v - lo) / span * (W - 240.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{h}\" \
         viewBox=\"0 0 {W} {h}\" font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        esc(title)
    );
    s.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{MT}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
        px(0.0),
        px(0.0),
        h - MB
    ));
    for (i, (name, v)) in rows.iter().enumerate() {
        let y = MT + 22.0 * i as f64 + 6.0;
        let (x0, x1) = if *v >= 0.0 { (px(0.0), px(*v)) } else { (px(*v), px(0.0)) };
        let color = if *v > 0.0 { "crimson" } else { "steelblue" };
        s.push_str(&format!(
            "<text x=\"214\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n\
             <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"12\" fill=\"{color}\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\">{:.2e}</text>\n",
            y + 10.0,
            esc(name),
            x0,
            y,
            (x1 - x0).max(1.0),
            px(hi) + 6.0,
            y + 10.0,
            v
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Staircase of cumulative log-eigenvalue sums for two spectra (the
/// prefix products a majorization check compares).
pub fn eigen_staircase(title: &str, lhs: &[f64], rhs: &[f64]) -> String {
    let cum = |eigs: &[f64]| -> Vec<(f64, f64)> {
        let mut acc = 0.0;
        let mut out = vec![(0.0, 0.0)];
        for (i, &l) in eigs.iter().enumerate() {
            acc += l.max(1e-300).ln();
            out.push((i as f64 + 1.0, acc));
        }
        out
    };
    let (la, lb) = (cum(lhs), cum(rhs));
    let ymin = la.iter().chain(&lb).map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = la.iter().chain(&lb).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let f = Frame::from_ranges((0.0, lhs.len() as f64), (ymin, ymax));
    let mut s = header(title);
    s.push_str(&axes(&f, "prefix length k", "cumulative log-eigenvalue sum"));
    for (pts, color, label, ly) in [(&la, "steelblue", "lhs", MT + 14.0), (&lb, "crimson", "rhs", MT + 30.0)] {
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            if i == 0 {
                d.push_str(&format!("M {:.1} {:.1} ", f.px(x), f.py(y)));
            } else {
                // Horizontal-then-vertical step.
                d.push_str(&format!("H {:.1} V {:.1} ", f.px(x), f.py(y)));
            }
        }
        s.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n\
             <text x=\"{:.1}\" y=\"{ly:.1}\" fill=\"{color}\">{label}</text>\n",
            W - MR - 40.0
        ));
    }
    s.push_str("</svg>\n");
    s
}
