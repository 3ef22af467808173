use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Reported as `t` when every difference is the same non-zero value.
pub const T_SENTINEL: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    /// Two-sided.
    pub p: f64,
    pub mean_diff: f64,
    pub sd_diff: f64,
    /// Set when `t` is the signed [`T_SENTINEL`] standing in for an
    /// infinite statistic.
    pub infinite: bool,
}

/// Paired-samples t-test on `d = a - b`.
///
/// All-zero differences give `t = 0, p = 1`. Constant non-zero differences
/// give `t = ±T_SENTINEL`, `p = 0` and `infinite = true`.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!("paired samples differ in length: {} vs {}", a.len(), b.len())));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidInput("paired t-test needs at least 2 pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite difference".into()));
    }
    let nf = n as f64;
    let mean = d.iter().sum::<f64>() / nf;
    let sd = (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    let df = n - 1;
    if d.iter().all(|&v| v == 0.0) {
        return Ok(TTest { t: 0.0, df, p: 1.0, mean_diff: 0.0, sd_diff: 0.0, infinite: false });
    }
    if sd == 0.0 {
        return Ok(TTest {
            t: T_SENTINEL.copysign(mean),
            df,
            p: 0.0,
            mean_diff: mean,
            sd_diff: 0.0,
            infinite: true,
        });
    }
    let t = mean / (sd / nf.sqrt());
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TTest { t, df, p, mean_diff: mean, sd_diff: sd, infinite: false })
}
