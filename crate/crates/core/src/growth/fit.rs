//! Least-squares growth models for `phi` tables.
//!
//! Samples are the dyadic points `n = 2^j` in the upper half (by `j`) of the
//! table. The power model fits `log phi = c + alpha log n`; the `n log n`
//! model fits `log phi = c + log(n ln n)`. The model with the smaller residual
//! sum of squares is selected.

use serde::Serialize;

use crate::error::{input, Result};
use crate::semigroup::CountTable;

/// Shortest table `fit_growth` accepts.
pub const MIN_FIT_N: u64 = 256;
/// Half-width of the reported exponent band.
pub const BAND: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Power,
    NLogN,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthModel {
    pub selected: ModelKind,
    /// Fitted power-law exponent.
    pub exponent: f64,
    pub band: [f64; 2],
    pub power_intercept: f64,
    pub power_rss: f64,
    /// Fitted `c` in `phi ≈ c n ln n`.
    pub nlogn_coefficient: f64,
    pub nlogn_rss: f64,
    pub sample_points: Vec<u64>,
}

impl GrowthModel {
    pub fn summary_line(&self) -> String {
        format!(
            "model: {:?} (alpha = {:.4}, band [{:.4}, {:.4}], power rss {:.3e}, n log n rss {:.3e}, {} samples)",
            self.selected,
            self.exponent,
            self.band[0],
            self.band[1],
            self.power_rss,
            self.nlogn_rss,
            self.sample_points.len()
        )
    }
}

pub fn fit_growth(table: &CountTable) -> Result<GrowthModel> {
    let n_max = table.n_max();
    if n_max < MIN_FIT_N {
        return input(format!("fit needs a table up to n >= {MIN_FIT_N}, got {n_max}"));
    }
    let top = 63 - n_max.leading_zeros();
    let low = top.div_ceil(2);
    let samples: Vec<(u64, f64, f64)> = (low..=top)
        .map(|j| 1u64 << j)
        .filter_map(|n| {
            let phi = table.phi(n)?;
            (phi > 0).then(|| (n, (n as f64).ln(), (phi as f64).ln()))
        })
        .collect();
    if samples.len() < 3 {
        return input("fewer than three dyadic samples with phi > 0");
    }
    let m = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.1).sum::<f64>() / m;
    let mean_y = samples.iter().map(|s| s.2).sum::<f64>() / m;
    let sxx: f64 = samples.iter().map(|s| (s.1 - mean_x).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|s| (s.1 - mean_x) * (s.2 - mean_y)).sum();
    let exponent = sxy / sxx;
    let power_intercept = mean_y - exponent * mean_x;
    let power_rss: f64 =
        samples.iter().map(|s| (s.2 - power_intercept - exponent * s.1).powi(2)).sum();

    // log phi - log(n ln n) = log c
    let offsets: Vec<f64> = samples.iter().map(|s| s.2 - (s.1 + s.1.ln())).collect();
    let log_c = offsets.iter().sum::<f64>() / m;
    let nlogn_rss: f64 = offsets.iter().map(|o| (o - log_c).powi(2)).sum();

    let selected = if nlogn_rss < power_rss { ModelKind::NLogN } else { ModelKind::Power };
    Ok(GrowthModel {
        selected,
        exponent,
        band: [exponent - BAND, exponent + BAND],
        power_intercept,
        power_rss,
        nlogn_coefficient: log_c.exp(),
        nlogn_rss,
        sample_points: samples.iter().map(|s| s.0).collect(),
    })
}
