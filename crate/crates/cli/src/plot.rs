//! SVG renderings of command output. Purely presentational.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::table::Rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    UtilityCurve,
    WelfareCurve,
    RegionBand,
    KhatCurve,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] =
        [PlotKind::UtilityCurve, PlotKind::WelfareCurve, PlotKind::RegionBand, PlotKind::KhatCurve];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::UtilityCurve => "utility-curve",
            PlotKind::WelfareCurve => "welfare-curve",
            PlotKind::RegionBand => "region-band",
            PlotKind::KhatCurve => "khat-curve",
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        PlotKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = PlotKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown plot kind {s:?} (expected one of {})", names.join(", "))
        })
    }
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 48.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Groups rows by the label columns that are present, keeping first-seen order.
fn group(rows: &Rows, x: &str, y: &str, by: &[&str]) -> Result<Vec<Series>, String> {
    let (xi, yi) = (rows.index(x)?, rows.index(y)?);
    let label_cols: Vec<(usize, &str)> =
        by.iter().filter_map(|name| rows.index(name).ok().map(|i| (i, *name))).collect();
    let mut out: Vec<Series> = Vec::new();
    for i in 0..rows.records.len() {
        let (Some(px), Some(py)) = (rows.num(i, xi)?, rows.num(i, yi)?) else { continue };
        let label = label_cols
            .iter()
            .map(|&(c, name)| format!("{name}={}", rows.records[i][c]))
            .collect::<Vec<_>>()
            .join(" ");
        match out.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((px, py)),
            None => out.push(Series { label, points: vec![(px, py)] }),
        }
    }
    if out.is_empty() {
        return Err(format!("no rows with numeric {x} and {y}"));
    }
    Ok(out)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn open(svg: &mut String, frame: &Frame, xlabel: &str, ylabel: &str) {
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    let (x0, x1) = (LEFT, W - RIGHT);
    let (y0, y1) = (H - BOTTOM, TOP);
    writeln!(svg, r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let fx = frame.x.0 + (frame.x.1 - frame.x.0) * i as f64 / 4.0;
        let fy = frame.y.0 + (frame.y.1 - frame.y.0) * i as f64 / 4.0;
        let (sx, sy) = (frame.px(fx), frame.py(fy));
        writeln!(svg, r#"<line x1="{sx:.1}" y1="{y0}" x2="{sx:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 4.0).unwrap();
        writeln!(svg, r#"<text x="{sx:.1}" y="{:.1}" text-anchor="middle">{fx:.3}</text>"#, y0 + 16.0).unwrap();
        writeln!(svg, r#"<line x1="{:.1}" y1="{sy:.1}" x2="{x0}" y2="{sy:.1}" stroke="black"/>"#, x0 - 4.0).unwrap();
        writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{fy:.3}</text>"#, x0 - 6.0, sy + 4.0).unwrap();
    }
    writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#, (x0 + x1) / 2.0, H - 10.0)
        .unwrap();
    writeln!(
        svg,
        r#"<text transform="translate(14,{:.1}) rotate(-90)" text-anchor="middle">{ylabel}</text>"#,
        (y0 + y1) / 2.0
    )
    .unwrap();
}

fn legend(svg: &mut String, i: usize, label: &str) {
    let y = TOP + 14.0 * i as f64 + 6.0;
    let x = W - RIGHT + 12.0;
    let color = COLORS[i % COLORS.len()];
    writeln!(svg, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#, x + 16.0).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, x + 20.0, y + 4.0, escape(label)).unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn line_chart(series: &[Series], xlabel: &str, ylabel: &str, hline: Option<f64>) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        xl = xl.min(x);
        xh = xh.max(x);
        yl = yl.min(y);
        yh = yh.max(y);
    }
    if let Some(h) = hline {
        yl = yl.min(h);
        yh = yh.max(h);
    }
    let frame = Frame { x: if xh > xl { (xl, xh) } else { padded(xl, xh) }, y: padded(yl, yh) };
    let mut svg = String::new();
    open(&mut svg, &frame, xlabel, ylabel);
    if let Some(h) = hline {
        let y = frame.py(h);
        writeln!(
            svg,
            r#"<line x1="{LEFT}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="gray" stroke-dasharray="4 3"/>"#,
            W - RIGHT
        )
        .unwrap();
    }
    for (i, s) in series.iter().enumerate() {
        let d: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            d.join(" "),
            COLORS[i % COLORS.len()]
        )
        .unwrap();
        if !s.label.is_empty() {
            legend(&mut svg, i, &s.label);
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn region_bands(rows: &Rows) -> Result<String, String> {
    let (lo, hi, p) = (rows.index("lower")?, rows.index("upper")?, rows.index("p")?);
    let keys: Vec<usize> = ["theta", "r"].iter().filter_map(|n| rows.index(n).ok()).collect();
    let mut lanes: Vec<String> = Vec::new();
    let mut bands = Vec::new();
    for i in 0..rows.records.len() {
        let lane = keys
            .iter()
            .map(|&c| format!("{}={}", rows.columns[c], rows.records[i][c]))
            .chain(std::iter::once(format!("P={}", rows.records[i][p])))
            .collect::<Vec<_>>()
            .join(" ");
        let idx = lanes.iter().position(|l| *l == lane).unwrap_or_else(|| {
            lanes.push(lane);
            lanes.len() - 1
        });
        if let (Some(a), Some(b)) = (rows.num(i, lo)?, rows.num(i, hi)?) {
            bands.push((idx, a, b));
        }
    }
    if lanes.is_empty() {
        return Err("no rows".into());
    }
    let n = lanes.len() as f64;
    let frame = Frame { x: (0.0, 1.0), y: (0.0, n) };
    let mut svg = String::new();
    open(&mut svg, &frame, "initial similarity x0", "");
    let lane_h = (H - TOP - BOTTOM) / n;
    for (i, lane) in lanes.iter().enumerate() {
        let y = frame.py(n - i as f64 - 0.5);
        writeln!(svg, r#"<text x="{}" y="{:.1}">{}</text>"#, W - RIGHT + 8.0, y + 4.0, escape(lane)).unwrap();
    }
    for &(i, a, b) in &bands {
        let y = frame.py(n - i as f64) + 0.2 * lane_h;
        writeln!(
            svg,
            r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            frame.px(a),
            frame.px(b) - frame.px(a),
            0.6 * lane_h,
            COLORS[i % COLORS.len()]
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders `rows` as an SVG document of the given kind.
pub fn emit_plot(rows: &Rows, kind: PlotKind) -> Result<String, String> {
    match kind {
        PlotKind::UtilityCurve => {
            Ok(line_chart(&group(rows, "k", "utility", &["theta", "r", "x0"])?, "effort k", "utility U(k)", Some(0.0)))
        }
        PlotKind::WelfareCurve => Ok(line_chart(
            &group(rows, "theta", "welfare", &["density", "r"])?,
            "threshold theta",
            "total improvement",
            None,
        )),
        PlotKind::KhatCurve => {
            Ok(line_chart(&group(rows, "x0", "k_hat", &[])?, "initial similarity x0", "effort cap", Some(0.35)))
        }
        PlotKind::RegionBand => region_bands(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(text: &str) -> Rows {
        Rows::parse(text).unwrap()
    }

    #[test]
    fn kinds_parse() {
        for k in PlotKind::ALL {
            assert_eq!(k.name().parse::<PlotKind>().unwrap(), k);
        }
        assert!("pie-chart".parse::<PlotKind>().is_err());
    }

    #[test]
    fn draws_each_kind() {
        let u = rows("theta,r,x0,k,utility\n0.9,0.1,0.5,0,0\n0.9,0.1,0.5,0.5,0.1\n");
        assert!(emit_plot(&u, PlotKind::UtilityCurve).unwrap().contains("<polyline"));
        let w = rows("density,r,theta,welfare\n\"beta:2,2\",0.1,0.5,0.01\n\"beta:2,2\",0.1,0.6,0.02\n");
        assert!(emit_plot(&w, PlotKind::WelfareCurve).unwrap().contains("beta:2,2"));
        let b = rows("theta,r,p,interval,lower,upper\n0.995,0.1,0,0,0.364,0.995\n0.953,0.01,0.1,,,\n");
        let svg = emit_plot(&b, PlotKind::RegionBand).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        let k = rows("x0,k_hat\n0.1,0.09\n0.9,0.3\n");
        assert!(emit_plot(&k, PlotKind::KhatCurve).unwrap().contains("stroke-dasharray"));
    }

    #[test]
    fn missing_column_is_an_error() {
        assert!(emit_plot(&rows("a,b\n1,2\n"), PlotKind::KhatCurve).is_err());
    }
}
