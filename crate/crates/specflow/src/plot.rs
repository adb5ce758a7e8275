//! Minimal self-contained SVG plots: phase trajectories as polylines and
//! mu-invariants as step functions. No external assets; axes and labels are
//! baked into the file.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn from_bounds(xs: (f64, f64), ys: (f64, f64)) -> Frame {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs().max(1e-9);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x0, x1) = pad(xs.0, xs.1);
        let (y0, y1) = pad(ys.0, ys.1);
        Frame { x0, x1, y0, y1 }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT
            - MARGIN_B
            - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=5).map(|i| lo + (hi - lo) * i as f64 / 5.0).collect()
}

fn open_svg(title: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>
"#,
        WIDTH / 2.0,
        title
    );
    s
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (left, bottom) = (MARGIN_L, HEIGHT - MARGIN_B);
    let (right, top) = (WIDTH - MARGIN_R, MARGIN_T);
    let _ = write!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>
"#,
        right - left,
        bottom - top
    );
    for t in ticks(f.x0, f.x1) {
        let (px, _) = f.map(t, f.y0);
        let _ = write!(
            s,
            r#"<line x1="{px}" y1="{bottom}" x2="{px}" y2="{}" stroke="black"/>
<text x="{px}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{t:.3}</text>
"#,
            bottom + 5.0,
            bottom + 18.0
        );
    }
    for t in ticks(f.y0, f.y1) {
        let (_, py) = f.map(f.x0, t);
        let _ = write!(
            s,
            r#"<line x1="{}" y1="{py}" x2="{left}" y2="{py}" stroke="black"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{t:.3}</text>
"#,
            left - 5.0,
            left - 8.0,
            py + 4.0
        );
    }
    let _ = write!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{xlabel}</text>
<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{ylabel}</text>
"#,
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0
    );
}

fn bounds(points: impl Iterator<Item = (f64, f64)>) -> ((f64, f64), (f64, f64)) {
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in points {
        xs = (xs.0.min(x), xs.1.max(x));
        ys = (ys.0.min(y), ys.1.max(y));
    }
    if !xs.0.is_finite() {
        xs = (0.0, 1.0);
        ys = (0.0, 1.0);
    }
    (xs, ys)
}

/// Polyline plot of several named series sharing the x axis.
pub fn polyline_plot(
    series: &[(String, Vec<(f64, f64)>)],
    title: &str,
    xlabel: &str,
    ylabel: &str,
) -> String {
    let (xs, ys) = bounds(series.iter().flat_map(|s| s.1.iter().copied()));
    let f = Frame::from_bounds(xs, ys);
    let mut s = open_svg(title);
    axes(&mut s, &f, xlabel, ylabel);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (px, py) = f.map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = write!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"><title>{name}</title></polyline>
"#,
            path.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Step plot of piecewise-constant data given as `(start, end, value)`.
pub fn step_plot(pieces: &[(f64, f64, f64)], title: &str, xlabel: &str, ylabel: &str) -> String {
    let (xs, ys) = bounds(
        pieces
            .iter()
            .flat_map(|&(a, b, v)| [(a, v), (b, v)].into_iter()),
    );
    let f = Frame::from_bounds(xs, ys);
    let mut s = open_svg(title);
    axes(&mut s, &f, xlabel, ylabel);
    let color = PALETTE[0];
    for (i, &(a, b, v)) in pieces.iter().enumerate() {
        let (x1, y) = f.map(a, v);
        let (x2, _) = f.map(b, v);
        let _ = write!(
            s,
            r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>
"#
        );
        if i + 1 < pieces.len() {
            let (_, y_next) = f.map(b, pieces[i + 1].2);
            let _ = write!(
                s,
                r#"<line x1="{x2:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y_next:.2}" stroke="{color}" stroke-width="1" stroke-dasharray="3,3"/>
"#
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
