//! Render ROC curves: an SVG file with the high-sensitivity band shaded,
//! plus the plain-text terminal fallback.
//!
//! ```bash
//! cargo run -p mdrank --example roc_plot
//! ```

use mdrank::plot::{render_roc_text, write_roc_svg};
use mdrank::{binormal_scores, roc_curve, BinormalSpec};

fn main() -> mdrank::Result<()> {
    let strong = binormal_scores(&BinormalSpec {
        n_pos: 75,
        n_neg: 304,
        mu: 1.8,
        sigma: 1.0,
        seed: 3,
    })?;
    let weak = binormal_scores(&BinormalSpec {
        n_pos: 75,
        n_neg: 304,
        mu: 0.8,
        sigma: 1.6,
        seed: 4,
    })?;
    let curves = vec![
        ("strong system".to_string(), roc_curve(&strong)),
        ("weak system".to_string(), roc_curve(&weak)),
    ];

    let path = std::env::temp_dir().join("mdrank-roc.svg");
    write_roc_svg(&curves, &path)?;
    println!("wrote {}\n", path.display());

    println!("{}", render_roc_text(&curves, 64, 24)?);
    Ok(())
}
