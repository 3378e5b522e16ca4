use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cosine_similarity, Embedder, EvalError};
use crate::imagecore::Image;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub gen_style: f64,
    pub gen_content: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub method: String,
    pub embedder: String,
    pub rows: Vec<ReportRow>,
}

const STYLE_HEADER: &str = "Generated & Style Img";
const CONTENT_HEADER: &str = "Generated & Content Img";

impl SimilarityReport {
    /// Builds a report from `(style, content)` score pairs labelled
    /// `Img1`, `Img2`, ...
    pub fn from_scores(method: &str, embedder: &str, scores: &[(f64, f64)]) -> Self {
        Self {
            method: method.into(),
            embedder: embedder.into(),
            rows: scores
                .iter()
                .enumerate()
                .map(|(i, &(s, c))| ReportRow {
                    label: format!("Img{}", i + 1),
                    gen_style: s,
                    gen_content: c,
                })
                .collect(),
        }
    }

    /// Aligned plain-text table, scores at four decimals, method name as
    /// the caption.
    pub fn render_table(&self) -> String {
        let lw = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
        let (sw, cw) = (STYLE_HEADER.len(), CONTENT_HEADER.len());
        let rule = "-".repeat(lw + sw + cw + 4);
        let mut out = String::new();
        writeln!(out, "{rule}").unwrap();
        writeln!(out, "{:lw$}  {STYLE_HEADER:^sw$}  {CONTENT_HEADER:^cw$}", "").unwrap();
        writeln!(out, "{rule}").unwrap();
        for r in &self.rows {
            writeln!(out, "{:<lw$}  {:^sw$}  {:^cw$}", r.label, format!("{:.4}", r.gen_style), format!("{:.4}", r.gen_content)).unwrap();
        }
        writeln!(out, "{rule}").unwrap();
        writeln!(out, "{} ({})", self.method, self.embedder).unwrap();
        out
    }
}

/// Scores every generated image against its style and content image.
/// Images are embedded concurrently; row order follows the input order.
pub fn similarity_report<E: Embedder + ?Sized>(
    method: &str,
    generated: &[Image],
    styles: &[Image],
    contents: &[Image],
    embedder: &E,
) -> Result<SimilarityReport, EvalError> {
    let n = generated.len();
    if n == 0 || styles.len() != n || contents.len() != n {
        return Err(EvalError::LengthMismatch {
            generated: n,
            styles: styles.len(),
            contents: contents.len(),
        });
    }
    let scores: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let g = embedder.embed(&generated[i])?;
            let s = embedder.embed(&styles[i])?;
            let c = embedder.embed(&contents[i])?;
            Ok((cosine_similarity(&g, &s)?, cosine_similarity(&g, &c)?))
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(SimilarityReport::from_scores(method, &embedder.tag(), &scores))
}
