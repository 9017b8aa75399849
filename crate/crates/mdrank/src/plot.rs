//! ROC curve rendering: a standalone SVG file plus a plain-text fallback
//! for terminals.
//!
//! Sensitivity runs up the vertical axis against specificity on the
//! horizontal axis (full specificity at the left edge, so better curves
//! hug the top left). The sensitivity band [0.95, 1.0] is shaded.

use std::fmt::Write as _;
use std::path::Path;

use crate::curves::RocCurve;
use crate::error::{Error, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;
const LEGEND_WIDTH: f64 = 180.0;
const MARGIN_RIGHT: f64 = LEGEND_WIDTH + 30.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Highlighted sensitivity band (the high-sensitivity region).
pub const BAND_LO: f64 = 0.95;

fn plot_w() -> f64 {
    WIDTH - MARGIN_LEFT - MARGIN_RIGHT
}

fn plot_h() -> f64 {
    HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
}

/// Pixel x of a specificity value (1.0 at the left edge).
pub(crate) fn map_x(specificity: f64) -> f64 {
    MARGIN_LEFT + (1.0 - specificity) * plot_w()
}

/// Pixel y of a sensitivity value (1.0 at the top edge).
pub(crate) fn map_y(sensitivity: f64) -> f64 {
    MARGIN_TOP + (1.0 - sensitivity) * plot_h()
}

fn fmt_px(v: f64) -> String {
    format!("{:.1}", v)
}

/// Renders labelled curves as a self-contained SVG document.
pub fn render_roc_svg(curves: &[(String, RocCurve)]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::EmptyCurveList);
    }
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // High-sensitivity band.
    let band_top = map_y(1.0);
    let band_height = map_y(BAND_LO) - band_top;
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#dff0d8\"/>",
        fmt_px(MARGIN_LEFT),
        fmt_px(band_top),
        fmt_px(plot_w()),
        fmt_px(band_height)
    );

    // Grid, ticks, and labels at steps of 0.2.
    for i in 0..=5 {
        let v = i as f64 * 0.2;
        let x = map_x(1.0 - v);
        let y = map_y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>",
            fmt_px(x),
            fmt_px(map_y(0.0)),
            fmt_px(x),
            fmt_px(map_y(1.0))
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>",
            fmt_px(map_x(1.0)),
            fmt_px(y),
            fmt_px(map_x(0.0)),
            fmt_px(y)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:.1}</text>",
            fmt_px(x),
            fmt_px(map_y(0.0) + 18.0),
            1.0 - v
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.1}</text>",
            fmt_px(MARGIN_LEFT - 8.0),
            fmt_px(y + 4.0),
            v
        );
    }

    // Axis frame and titles.
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        fmt_px(MARGIN_LEFT),
        fmt_px(MARGIN_TOP),
        fmt_px(plot_w()),
        fmt_px(plot_h())
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">Specificity</text>",
        fmt_px(MARGIN_LEFT + plot_w() / 2.0),
        fmt_px(HEIGHT - 16.0)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">Sensitivity</text>",
        fmt_px(MARGIN_TOP + plot_h() / 2.0),
        fmt_px(MARGIN_TOP + plot_h() / 2.0)
    );

    // Curves.
    for (idx, (_, curve)) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<String> = curve
            .points()
            .iter()
            .map(|p| format!("{},{}", fmt_px(map_x(p.specificity())), fmt_px(map_y(p.sensitivity()))))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            points.join(" ")
        );
    }

    // Legend.
    let legend_x = WIDTH - MARGIN_RIGHT + 16.0;
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#555555\">SE 95-100% band shaded</text>",
        fmt_px(legend_x),
        fmt_px(MARGIN_TOP + 12.0)
    );
    for (idx, (name, _)) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let y = MARGIN_TOP + 36.0 + idx as f64 * 20.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"3\"/>",
            fmt_px(legend_x),
            fmt_px(y),
            fmt_px(legend_x + 24.0),
            fmt_px(y)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>",
            fmt_px(legend_x + 32.0),
            fmt_px(y + 4.0),
            xml_escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes [`render_roc_svg`] output to a file.
pub fn write_roc_svg(curves: &[(String, RocCurve)], path: impl AsRef<Path>) -> Result<()> {
    let svg = render_roc_svg(curves)?;
    std::fs::write(path.as_ref(), svg).map_err(|source| Error::Io {
        path: path.as_ref().display().to_string(),
        source,
    })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plain-text fallback: a character grid with one digit per curve and the
/// high-sensitivity band marked on the left axis.
pub fn render_roc_text(curves: &[(String, RocCurve)], cols: usize, rows: usize) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::EmptyCurveList);
    }
    let cols = cols.max(20);
    let rows = rows.max(10);
    let mut grid = vec![vec![' '; cols]; rows];

    // Walk each curve's polyline densely so steps stay connected.
    for (idx, (_, curve)) in curves.iter().enumerate() {
        let mark = char::from_digit((idx as u32 + 1) % 10, 10).unwrap_or('*');
        let pts: Vec<(f64, f64)> = curve
            .points()
            .iter()
            .map(|p| (p.specificity(), p.sensitivity()))
            .collect();
        for pair in pts.windows(2) {
            let steps = 2 * cols;
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                let sp = pair[0].0 + t * (pair[1].0 - pair[0].0);
                let se = pair[0].1 + t * (pair[1].1 - pair[0].1);
                let col = ((1.0 - sp) * (cols - 1) as f64).round() as usize;
                let row = ((1.0 - se) * (rows - 1) as f64).round() as usize;
                grid[row.min(rows - 1)][col.min(cols - 1)] = mark;
            }
        }
    }

    let band_rows = ((1.0 - BAND_LO) * (rows - 1) as f64).ceil() as usize;
    let mut out = String::new();
    out.push_str("SE 1.0 ");
    out.push_str(&grid[0].iter().collect::<String>());
    out.push('\n');
    for (r, row) in grid.iter().enumerate().skip(1) {
        let prefix = if r <= band_rows { "    |  " } else { "       " };
        out.push_str(prefix);
        out.push_str(&row.iter().collect::<String>());
        out.push('\n');
    }
    out.push_str("SE 0.0 ");
    out.push_str(&"-".repeat(cols));
    out.push('\n');
    out.push_str(&format!(
        "       SP 1.0{}SP 0.0   (| marks SE >= {BAND_LO})\n",
        " ".repeat(cols.saturating_sub(12)),
    ));
    let mut legend = String::new();
    for (idx, (name, _)) in curves.iter().enumerate() {
        let mark = char::from_digit((idx as u32 + 1) % 10, 10).unwrap_or('*');
        let _ = write!(legend, "  {mark}={name}");
    }
    out.push_str(&format!("      {legend}\n"));
    Ok(out)
}
