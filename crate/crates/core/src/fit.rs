//! Least-squares fits of the two analytic handshake-duration models: the
//! affine law in the per-packet delay and the hyperbolic law in the
//! transmission rate (duration = m/x + c).

use alloc::vec::Vec;
use core::fmt;

/// Which model a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    AffineInDelay,
    HyperbolicInRate,
}

/// Fit parameters and goodness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    pub model: FitModel,
    /// Slope for the affine model, m_eff for the hyperbola.
    pub slope: f64,
    /// Intercept for the affine model, the rate-independent floor c for the
    /// hyperbola.
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fit rejected: fewer than three points or no x-variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerateInput;

impl fmt::Display for DegenerateInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fit needs at least 3 points with distinct x values")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DegenerateInput {}

fn least_squares(points: &[(f64, f64)]) -> Result<(f64, f64, f64), DegenerateInput> {
    if points.len() < 3 {
        return Err(DegenerateInput);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(DegenerateInput);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((slope, intercept, r_squared))
}

/// Fits `median_ms = slope * delay_ms + intercept`. The slope reads as the
/// number of one-way trips on the critical path.
pub fn fit_affine(points: &[(f64, f64)]) -> Result<FitReport, DegenerateInput> {
    let (slope, intercept, r_squared) = least_squares(points)?;
    Ok(FitReport {
        model: FitModel::AffineInDelay,
        slope,
        intercept,
        r_squared,
    })
}

/// Fits `median_ms = m_eff / rate_mbps + c` by regressing on 1/x. With the
/// duration in ms and the rate in Mbps, `m_eff / 1000` is the effective
/// rate-limited payload in bits.
pub fn fit_hyperbola(points: &[(f64, f64)]) -> Result<FitReport, DegenerateInput> {
    if points.iter().any(|p| p.0 <= 0.0) {
        return Err(DegenerateInput);
    }
    let inverted: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (1.0 / x, y)).collect();
    let (slope, intercept, r_squared) = least_squares(&inverted)?;
    Ok(FitReport {
        model: FitModel::HyperbolicInRate,
        slope,
        intercept,
        r_squared,
    })
}
