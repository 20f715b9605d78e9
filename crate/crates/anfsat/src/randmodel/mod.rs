//! The exact-uniform random model: closed-form expectations, threshold
//! constants, analytic curves and the instance generator.
//!
//! In an exact-uniform α-random problem every variable occurs exactly
//! `3α/2` times positively and `3α/2` times negatively, so `m = αn`.

mod curves;
mod generator;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

pub use curves::{
    m_alpha_curve, observed_m_alpha, solution_decay_curve, write_curve_csv, AnalyticCurve,
    CurvePoint, DecayCurve, DecayStep, TrajectoryCurve, TrajectoryDraws, TrajectoryPoint,
};
pub use generator::{
    audit_exact_uniform, feasible_alpha, gen_exact_uniform, GenError, GenSpec, REPAIR_ATTEMPTS,
};

/// Usual random-3-SAT threshold reported in the experimental literature.
pub const LITERATURE_USUAL_THRESHOLD: f64 = 4.258;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("index {i} is outside 3..={n}")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("need at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("alpha must be positive")]
    NonPositiveAlpha,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Expected number of clauses whose highest variable is `x_i`:
/// `(i-1)(i-2) / ((n-1)(n-2)) · 3α`.
pub fn m_alpha(i: usize, n: usize, alpha: &BigRational) -> Result<BigRational, ModelError> {
    if n < 3 {
        return Err(ModelError::TooFewVariables(n));
    }
    if i < 3 || i > n {
        return Err(ModelError::IndexOutOfRange { i, n });
    }
    let num = int((i - 1) * (i - 2));
    let den = int((n - 1) * (n - 2));
    Ok(num / den * int(3) * alpha)
}

/// Floating-point `m_α(x)` for real-valued indices, as used along
/// trajectories.
pub fn m_alpha_f64(x: f64, n: usize, alpha: f64) -> f64 {
    let n = n as f64;
    (x - 1.0) * (x - 2.0) / ((n - 1.0) * (n - 2.0)) * 3.0 * alpha
}

/// Expected size of `V(x_i)`: two co-occurring variables per clause.
pub fn expected_v_size(i: usize, n: usize, alpha: &BigRational) -> Result<BigRational, ModelError> {
    Ok(m_alpha(i, n, alpha)? * int(2))
}

/// `7 · (7/4)^(n-3) · (7/8)^(m-n+2)`, exactly.
pub fn expected_solutions(n: usize, m: usize) -> Result<BigRational, ModelError> {
    if n < 3 {
        return Err(ModelError::TooFewVariables(n));
    }
    let grow = ratio(7, 4).pow((n - 3) as u32);
    let e = m as i64 - n as i64 + 2;
    let shrink = if e >= 0 {
        ratio(7, 8).pow(e as u32)
    } else {
        ratio(8, 7).pow((-e) as u32)
    };
    Ok(int(7) * grow * shrink)
}

/// `log2` of the expected solution count, for large `n`.
pub fn expected_solutions_log2(n: usize, m: usize) -> f64 {
    7f64.log2() + (n as f64 - 3.0) * (7.0f64 / 4.0).log2() + (m as f64 - n as f64 + 2.0) * (7.0f64 / 8.0).log2()
}

/// Range `[0, 6 · 2^(n-3) - m + n - 1]` stated for the final solution count.
pub fn solution_count_bounds(n: usize, m: usize) -> Result<(BigInt, BigInt), ModelError> {
    if n < 3 {
        return Err(ModelError::TooFewVariables(n));
    }
    let upper = BigInt::from(6) * (BigInt::one() << (n - 3)) - BigInt::from(m) + BigInt::from(n) - 1;
    Ok((BigInt::zero(), upper))
}

/// Clause-to-variable ratio at which the expected solution count equals 1
/// for a given `n` (continuous in `m`).
pub fn expected_solutions_crossing(n: usize) -> f64 {
    let n = n as f64;
    let excess = (7f64.ln() + (n - 3.0) * (7.0f64 / 4.0).ln()) / (8.0f64 / 7.0).ln();
    (excess + n - 2.0) / n
}

/// `-ln 2 / ln(7/8)`, the ratio where `2^n (7/8)^m` crosses 1.
pub fn threshold_exact() -> f64 {
    -std::f64::consts::LN_2 / (7.0f64 / 8.0).ln()
}

/// Variance factor `6/π` of the folded-normal occurrence imbalance.
pub const FOLDED_NORMAL_FACTOR: f64 = 6.0 / std::f64::consts::PI;

/// `3α - sqrt((6/π) α)`: literal occurrences per variable in the usual
/// random model once the expected polarity imbalance is removed.
pub fn usual_alpha_correction(alpha: f64) -> f64 {
    3.0 * alpha - (FOLDED_NORMAL_FACTOR * alpha).sqrt()
}

/// The usual-model ratio matching an exact-uniform ratio: the correction
/// divided by 3.
pub fn corrected_threshold(alpha: f64) -> f64 {
    usual_alpha_correction(alpha) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_alpha_sums_to_clause_count() {
        for n in [3usize, 10, 57] {
            for alpha in [ratio(2, 1), ratio(16, 3)] {
                let mut total = BigRational::zero();
                for i in 3..=n {
                    total += m_alpha(i, n, &alpha).unwrap();
                }
                assert_eq!(total, alpha.clone() * int(n));
            }
        }
    }

    #[test]
    fn m_alpha_at_top_is_three_alpha() {
        assert_eq!(m_alpha(50, 50, &ratio(4, 1)).unwrap(), int(12));
        assert_eq!(expected_v_size(50, 50, &ratio(4, 1)).unwrap(), int(24));
        assert!(m_alpha(2, 50, &ratio(4, 1)).is_err());
        assert!(m_alpha(51, 50, &ratio(4, 1)).is_err());
    }

    #[test]
    fn two_clause_expectation() {
        assert_eq!(expected_solutions(4, 2).unwrap(), ratio(49, 4));
        assert_eq!(expected_solutions(3, 1).unwrap(), int(7));
        assert_eq!(expected_solutions(5, 1).unwrap(), int(28));
    }

    #[test]
    fn log_form_matches_exact() {
        let exact = expected_solutions(20, 60).unwrap();
        let f = exact.numer().to_string().parse::<f64>().unwrap()
            / exact.denom().to_string().parse::<f64>().unwrap();
        assert!((f.log2() - expected_solutions_log2(20, 60)).abs() < 1e-9);
    }

    #[test]
    fn constants() {
        assert!((threshold_exact() - 5.19089307).abs() < 1e-6);
        assert!((corrected_threshold(5.19) - 4.14135).abs() < 1e-3);
        assert!((FOLDED_NORMAL_FACTOR - 1.9098).abs() < 1e-4);
    }

    #[test]
    fn bounds_shape() {
        let (lo, hi) = solution_count_bounds(4, 2).unwrap();
        assert_eq!(lo, BigInt::zero());
        assert_eq!(hi, BigInt::from(13));
    }
}
