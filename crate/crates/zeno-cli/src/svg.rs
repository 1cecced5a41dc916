//! Minimal SVG line chart for the primary CSV columns. A convenience
//! artifact: linear axes, one polyline per series.

pub struct Series<'a> {
    pub label: &'a str,
    pub values: Vec<f64>,
}

const W: f64 = 800.0;
const H: f64 = 500.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn line_chart(x_label: &str, x: &[f64], series: &[Series<'_>]) -> String {
    let finite = |v: &f64| v.is_finite();
    let xs: Vec<f64> = x.iter().copied().filter(finite).collect();
    let mut ys: Vec<f64> = Vec::new();
    for s in series {
        ys.extend(s.values.iter().copied().filter(finite));
    }
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |v: f64| H - MARGIN - (v - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        r = W - MARGIN,
        t = MARGIN,
        b = H - MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 18.0,
        escape(x_label)
    ));
    for (idx, s) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut path = String::new();
        for (&vx, &vy) in x.iter().zip(&s.values) {
            if vx.is_finite() && vy.is_finite() {
                if path.is_empty() {
                    path.push('M');
                } else {
                    path.push('L');
                }
                path.push_str(&format!("{:.2} {:.2}", px(vx), py(vy)));
            }
        }
        out.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - MARGIN - 150.0,
            MARGIN + 16.0 * (idx as f64 + 1.0),
            escape(s.label)
        ));
    }
    // axis extrema labels
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\">{:.4e}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4e}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4e}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.4e}</text>\n",
        MARGIN,
        H - MARGIN + 16.0,
        x0,
        W - MARGIN,
        H - MARGIN + 16.0,
        x1,
        MARGIN - 4.0,
        H - MARGIN,
        y0,
        MARGIN - 4.0,
        MARGIN + 4.0,
        y1,
    ));
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in v {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
