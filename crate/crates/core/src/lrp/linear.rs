// SPDX-License-Identifier: MIT OR Apache-2.0

//! The proportional-credit split of a linear sum.
//!
//! Given output units `z_j = Σ_k term_k[j]` carrying relevance `R_j`, each term
//! receives `R_j · term_k[j] / (z_j + ε·sign(z_j))`. Matrix-vector terms are
//! split one level further, across the products `W_jk x_k`, and summed per
//! input element `k`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::tensor::Matrix;

#[derive(Clone, Debug)]
pub enum Contribution<'a> {
    /// One value per output unit. Relevance comes back per output unit.
    Elementwise(&'a [f64]),
    /// `weights[rows] · input`. Relevance comes back per input element.
    Product {
        weights: &'a Matrix,
        rows: Range<usize>,
        input: &'a [f64],
    },
}

impl Contribution<'_> {
    fn output_len(&self) -> usize {
        match self {
            Contribution::Elementwise(v) => v.len(),
            Contribution::Product { rows, .. } => rows.len(),
        }
    }

    fn relevance_len(&self) -> usize {
        match self {
            Contribution::Elementwise(v) => v.len(),
            Contribution::Product { input, .. } => input.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term<'a> {
    pub name: &'a str,
    pub contribution: Contribution<'a>,
}

impl<'a> Term<'a> {
    pub fn elementwise(name: &'a str, values: &'a [f64]) -> Self {
        Self {
            name,
            contribution: Contribution::Elementwise(values),
        }
    }

    pub fn product(
        name: &'a str,
        weights: &'a Matrix,
        rows: Range<usize>,
        input: &'a [f64],
    ) -> Self {
        Self {
            name,
            contribution: Contribution::Product {
                weights,
                rows,
                input,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSplit {
    /// One vector per term, in the order the terms were given.
    pub relevance: Vec<Vec<f64>>,
    /// Relevance absorbed by the stabilizer: `Σ_j R_j · ε·sign(z_j) / (z_j + ε·sign(z_j))`.
    pub leak: f64,
}

/// `sign` with `sign(0) = +1`.
#[inline]
pub fn stabilized(denominator: f64, epsilon: f64) -> f64 {
    if denominator >= 0.0 {
        denominator + epsilon
    } else {
        denominator - epsilon
    }
}

/// Splits `r_out` across `terms` in proportion to each term's share of `denominator`.
///
/// `denominator` must be the elementwise sum of all contributions (including any
/// bias term). Output units with zero relevance distribute nothing.
pub fn lrp_linear(
    r_out: &[f64],
    terms: &[Term<'_>],
    denominator: &[f64],
    epsilon: f64,
) -> Result<LinearSplit> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "stabilizer must be non-negative, got {epsilon}"
        )));
    }
    let n = r_out.len();
    if denominator.len() != n {
        return Err(Error::InvalidArgument(format!(
            "relevance has {n} units but denominator has {}",
            denominator.len()
        )));
    }
    for t in terms {
        if t.contribution.output_len() != n {
            return Err(Error::InvalidArgument(format!(
                "term `{}` covers {} units, expected {n}",
                t.name,
                t.contribution.output_len()
            )));
        }
        if let Contribution::Product {
            weights,
            rows,
            input,
        } = &t.contribution
        {
            if rows.end > weights.rows() || weights.cols() != input.len() {
                return Err(Error::InvalidArgument(format!(
                    "term `{}`: rows {rows:?} / input {} do not fit a {}×{} matrix",
                    t.name,
                    input.len(),
                    weights.rows(),
                    weights.cols()
                )));
            }
        }
    }

    let mut relevance: Vec<Vec<f64>> = terms
        .iter()
        .map(|t| vec![0.0; t.contribution.relevance_len()])
        .collect();
    let mut leak = 0.0;

    for j in 0..n {
        let r = r_out[j];
        if r == 0.0 {
            continue;
        }
        let z = stabilized(denominator[j], epsilon);
        let factor = r / z;
        if !factor.is_finite() {
            let stage = terms.iter().map(|t| t.name).collect::<Vec<_>>().join("+");
            return Err(Error::NonFiniteRelevance {
                stage,
                index: j,
                denominator: denominator[j],
            });
        }
        leak += factor * (z - denominator[j]);
        for (t, out) in terms.iter().zip(relevance.iter_mut()) {
            match &t.contribution {
                Contribution::Elementwise(v) => out[j] = v[j] * factor,
                Contribution::Product {
                    weights,
                    rows,
                    input,
                } => {
                    let row = weights.row(rows.start + j);
                    for ((o, w), x) in out.iter_mut().zip(row).zip(input.iter()) {
                        *o += w * x * factor;
                    }
                }
            }
        }
    }
    Ok(LinearSplit { relevance, leak })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_split_without_stabilizer() {
        let terms = [
            Term::elementwise("wx", &[6.0]),
            Term::elementwise("b", &[1.0]),
        ];
        let s = lrp_linear(&[7.0], &terms, &[7.0], 0.0).unwrap();
        assert_eq!(s.relevance, vec![vec![6.0], vec![1.0]]);
        assert_eq!(s.leak, 0.0);
    }

    #[test]
    fn stabilized_split_hand_values() {
        let terms = [
            Term::elementwise("wx", &[6.0]),
            Term::elementwise("b", &[1.0]),
        ];
        let s = lrp_linear(&[7.0], &terms, &[7.0], 0.001).unwrap();
        let tol = 1e-15;
        assert!((s.relevance[0][0] - 6.0 * 7.0 / 7.001).abs() < tol);
        assert!((s.relevance[1][0] - 1.0 * 7.0 / 7.001).abs() < tol);
        assert!((s.leak - 7.0 * 0.001 / 7.001).abs() < tol);
        let total = s.relevance[0][0] + s.relevance[1][0] + s.leak;
        assert!((total - 7.0).abs() < 1e-14);
    }

    #[test]
    fn single_term_passes_relevance_unchanged() {
        let v = [0.3, -2.5, 1e-3];
        let r = [1.25, -7.0, 3.0];
        let s = lrp_linear(&r, &[Term::elementwise("only", &v)], &v, 0.0).unwrap();
        assert_eq!(s.relevance[0], r.to_vec());
    }

    #[test]
    fn negative_denominator_stabilizer_matches_sign() {
        assert_eq!(stabilized(-2.0, 0.5), -2.5);
        assert_eq!(stabilized(0.0, 0.5), 0.5);
        let s = lrp_linear(&[1.0], &[Term::elementwise("a", &[-2.0])], &[-2.0], 0.5).unwrap();
        assert!((s.relevance[0][0] - 0.8).abs() < 1e-15);
        assert!((s.leak - 0.2).abs() < 1e-15);
    }

    #[test]
    fn product_term_splits_per_input_element() {
        // z = [1·2 + 3·(-1)] + b = -1 + 0.5 = -0.5
        let w = Matrix::from_rows(&[vec![9.0, 9.0], vec![1.0, 3.0]]);
        let x = [2.0, -1.0];
        let b = [0.5];
        let terms = [Term::product("w", &w, 1..2, &x), Term::elementwise("b", &b)];
        let s = lrp_linear(&[1.0], &terms, &[-0.5], 0.0).unwrap();
        assert_eq!(s.relevance[0], vec![2.0 / -0.5, -3.0 / -0.5]);
        assert_eq!(s.relevance[1], vec![0.5 / -0.5]);
    }

    #[test]
    fn zero_denominator_without_stabilizer_errors() {
        let terms = [
            Term::elementwise("a", &[1.0, 1.0]),
            Term::elementwise("b", &[2.0, -1.0]),
        ];
        let err = lrp_linear(&[1.0, 1.0], &terms, &[3.0, 0.0], 0.0).unwrap_err();
        assert!(
            matches!(err, Error::NonFiniteRelevance { index: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn zero_relevance_distributes_nothing() {
        let terms = [
            Term::elementwise("a", &[1.0]),
            Term::elementwise("b", &[-1.0]),
        ];
        let s = lrp_linear(&[0.0], &terms, &[0.0], 0.0).unwrap();
        assert_eq!(s.relevance, vec![vec![0.0], vec![0.0]]);
    }
}
