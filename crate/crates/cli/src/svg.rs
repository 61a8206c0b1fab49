//! Minimal SVG emission: log-scale line plots and scan heat maps.

/// One named polyline.
pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 30.0;
const MB: f64 = 50.0;

fn finite_bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in it.filter(|x| x.is_finite()) {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Line plot; with `log_y` the y values are plotted as log10(max(y, 1e-18)).
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    let ty = |y: f64| if log_y { (y.max(1e-18)).log10() } else { y };
    let (x0, x1) = finite_bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = finite_bounds(series.iter().flat_map(|s| s.points.iter().map(|p| ty(p.1))));
    let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR
    ));
    out.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB
    ));
    // axis labels and end ticks
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{x_label}</text>\n",
        (ML + W - MR) / 2.0,
        H - 12.0
    ));
    let y_name = if log_y { format!("log10 {y_label}") } else { y_label.to_string() };
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {0})\">{y_name}</text>\n",
        (MT + H - MB) / 2.0
    ));
    for (v, x, y, anchor) in [
        (x0, px(x0), H - MB + 16.0, "middle"),
        (x1, px(x1), H - MB + 16.0, "middle"),
        (y0, ML - 6.0, py(y0) + 4.0, "end"),
        (y1, ML - 6.0, py(y1) + 4.0, "end"),
    ] {
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"10\">{v:.3}</text>\n"
        ));
    }
    // polylines + legend
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(ty(y))))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            s.color,
            pts.join(" ")
        ));
        let ly = MT + 14.0 * k as f64;
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{2}\" stroke-width=\"2\"/>\n",
            W - MR - 110.0,
            W - MR - 90.0,
            s.color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            W - MR - 84.0,
            ly + 4.0,
            s.name
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Grid heat map; `cells[j][i]` is the fill color for column i (x axis),
/// row j (y axis, increasing upward). `legend` pairs colors with labels.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    cells: &[Vec<&str>],
    legend: &[(&str, String)],
) -> String {
    let ny = cells.len();
    let nx = cells.first().map(|r| r.len()).unwrap_or(0);
    let cw = (W - ML - MR - 130.0) / nx.max(1) as f64;
    let ch = (H - MT - MB) / ny.max(1) as f64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    for (j, row) in cells.iter().enumerate() {
        for (i, color) in row.iter().enumerate() {
            let x = ML + i as f64 * cw;
            let y = H - MB - (j + 1) as f64 * ch;
            out.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cw:.2}\" height=\"{ch:.2}\" fill=\"{color}\"/>\n"
            ));
        }
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{x_label}</text>\n",
        ML + nx as f64 * cw / 2.0,
        H - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {0})\">{y_label}</text>\n",
        (MT + H - MB) / 2.0
    ));
    for (k, (color, label)) in legend.iter().enumerate() {
        let y = MT + 18.0 * k as f64;
        out.push_str(&format!(
            "<rect x=\"{0}\" y=\"{y}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
            W - 120.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
            W - 104.0,
            y + 10.0
        ));
    }
    out.push_str("</svg>\n");
    out
}
