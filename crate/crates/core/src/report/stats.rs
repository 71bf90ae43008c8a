// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "series lengths differ ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "series contain non-finite values".into(),
        ));
    }
    Ok(())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Centered sums `(Sxx, Syy, Sxy)` and means.
fn moments(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64, f64) {
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (mx, my, sxx, syy, sxy)
}

/// Pearson product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    let (_, _, sxx, syy, sxy) = moments(xs, ys);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a series is constant"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Ordinary least squares fit of `ys` on `xs`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    check_pair(xs, ys)?;
    let (mx, my, sxx, _, sxy) = moments(xs, ys);
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression("all x values are equal"));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Determiner-versus-noun relevance analysis.
///
/// Fits `r(Det) = m·r(N) + k`, so that `r(Det, N) = (1 + m)·r(N) + k`. The
/// noun-phrase relevance has the opposite sign of `r(N)` between 0 and
/// `k / −(1 + m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetNounRegression {
    pub det_on_noun: LinearFit,
    pub rho: f64,
    /// `(1 + m, k)`: the fit for `r(Det, N)` as a function of `r(N)`.
    pub combined: LinearFit,
    /// Open interval of `r(N)` values where `r(Det, N)` and `r(N)` differ in sign.
    pub sign_flip_interval: Option<(f64, f64)>,
    /// Percentage of points whose `r(N)` lies in that interval.
    pub sign_flip_rate: Option<f64>,
    pub points: usize,
}

pub fn det_noun_regression(noun: &[f64], det: &[f64]) -> Result<DetNounRegression> {
    let fit = linear_regression(noun, det)?;
    let rho = pearson(noun, det)?;
    let combined = LinearFit {
        slope: 1.0 + fit.slope,
        intercept: fit.intercept,
    };
    let sign_flip_interval = if combined.slope != 0.0 && combined.intercept != 0.0 {
        let root = combined.intercept / -combined.slope;
        Some((root.min(0.0), root.max(0.0)))
    } else {
        None
    };
    let sign_flip_rate = sign_flip_interval.map(|(lo, hi)| {
        let inside = noun.iter().filter(|&&x| x > lo && x < hi).count();
        100.0 * inside as f64 / noun.len() as f64
    });
    Ok(DetNounRegression {
        det_on_noun: fit,
        rho,
        combined,
        sign_flip_interval,
        sign_flip_rate,
        points: noun.len(),
    })
}
