//! Location parameters of a measurement series: arithmetic mean, population
//! standard deviation (divisor n), median and the linearly interpolated
//! 0.75/0.95 quantiles.

use alloc::vec::Vec;
use core::fmt;

/// Statistics requested of an empty series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptySeries;

impl fmt::Display for EmptySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "statistics of an empty series")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EmptySeries {}

pub fn mean(xs: &[f64]) -> Result<f64, EmptySeries> {
    if xs.is_empty() {
        return Err(EmptySeries);
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Population standard deviation (divisor n, not n-1).
pub fn std_dev(xs: &[f64]) -> Result<f64, EmptySeries> {
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64;
    Ok(libm::sqrt(var))
}

/// Median: element (n-1)/2 of the sorted series for odd n, the mean of the
/// two middle elements for even n.
pub fn median(xs: &[f64]) -> Result<f64, EmptySeries> {
    if xs.is_empty() {
        return Err(EmptySeries);
    }
    let sorted = sorted_copy(xs);
    let n = sorted.len();
    if n % 2 == 1 {
        Ok(sorted[(n - 1) / 2])
    } else {
        Ok((sorted[(n - 2) / 2] + sorted[n / 2]) / 2.0)
    }
}

/// Quantile by linear interpolation between closest ranks at position
/// `h = (n - 1) * q`.
pub fn quantile(xs: &[f64], q: f64) -> Result<f64, EmptySeries> {
    debug_assert!((0.0..=1.0).contains(&q));
    if xs.is_empty() {
        return Err(EmptySeries);
    }
    let sorted = sorted_copy(xs);
    let n = sorted.len();
    let h = (n - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        Ok(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]))
    } else {
        Ok(sorted[lo])
    }
}

fn sorted_copy(xs: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = xs.into();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in measurement series"));
    v
}

/// The five location parameters of one series plus its failure count.
/// Failures never enter the parameters; they are only counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub average: f64,
    pub std_dev: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub n_success: usize,
    pub n_failure: usize,
}

impl SummaryStats {
    pub fn from_series(successes: &[f64], n_failure: usize) -> Result<Self, EmptySeries> {
        Ok(SummaryStats {
            average: mean(successes)?,
            std_dev: std_dev(successes)?,
            median: median(successes)?,
            q75: quantile(successes, 0.75)?,
            q95: quantile(successes, 0.95)?,
            n_success: successes.len(),
            n_failure,
        })
    }
}
