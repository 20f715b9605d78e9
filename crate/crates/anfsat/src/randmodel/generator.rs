use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Clause, Lit, Problem};

/// Swap attempts allowed per shuffle before starting over.
pub const REPAIR_ATTEMPTS: usize = 10_000;
const RESHUFFLES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("3α/2 must be a positive integer, got α = {0}")]
    InvalidAlpha(Rational64),
    #[error("αn = {alpha} · {n} is not an integer")]
    FractionalClauseCount { alpha: Rational64, n: usize },
    #[error("need at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("no valid clause assignment found after {0} repair attempts")]
    RepairFailed(usize),
    #[error("variable {var} occurs {pos} times positive and {neg} times negative, expected {expected} each")]
    PolarityCount { var: u32, pos: usize, neg: usize, expected: usize },
    #[error("{got} clauses, expected {expected}")]
    ClauseCount { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub alpha: Rational64,
    pub seed: u64,
}

impl GenSpec {
    /// Occurrences per polarity per variable, `3α/2`.
    pub fn per_polarity(&self) -> Result<usize, GenError> {
        let k = self.alpha * Rational64::from_integer(3) / Rational64::from_integer(2);
        if !k.is_integer() || *k.numer() <= 0 {
            return Err(GenError::InvalidAlpha(self.alpha));
        }
        Ok(*k.numer() as usize)
    }

    pub fn clause_count(&self) -> Result<usize, GenError> {
        self.per_polarity()?;
        let m = self.alpha * Rational64::from_integer(self.n as i64);
        if !m.is_integer() {
            return Err(GenError::FractionalClauseCount {
                alpha: self.alpha,
                n: self.n,
            });
        }
        Ok(*m.numer() as usize)
    }
}

/// Feasible ratio closest to `target` for `n` variables: `α = 2k/3` with
/// `k ≥ 1` and `αn` integral. Ties go to the smaller ratio.
pub fn feasible_alpha(n: usize, target: f64) -> Rational64 {
    let mut best: Option<(f64, Rational64)> = None;
    let k_max = (target * 1.5).ceil() as i64 + 3;
    for k in 1..=k_max.max(1) {
        if (2 * k * n as i64) % 3 != 0 {
            continue;
        }
        let a = Rational64::new(2 * k, 3);
        let d = (2.0 * k as f64 / 3.0 - target).abs();
        if best.is_none_or(|(bd, _)| d < bd - 1e-12) {
            best = Some((d, a));
        }
    }
    best.map(|(_, a)| a).expect("k = 3 is always feasible")
}

fn repeats(c: &[Lit]) -> usize {
    (c[0].var == c[1].var) as usize + (c[0].var == c[2].var) as usize + (c[1].var == c[2].var) as usize
}

/// Builds the exact literal multiset, shuffles it, cuts it into triples and
/// repairs triples with a repeated variable by random swaps that never
/// increase the number of repeats.
pub fn gen_exact_uniform(spec: &GenSpec) -> Result<Problem, GenError> {
    if spec.n < 3 {
        return Err(GenError::TooFewVariables(spec.n));
    }
    let k = spec.per_polarity()?;
    let m = spec.clause_count()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut lits = Vec::with_capacity(3 * m);
    for v in 1..=spec.n as u32 {
        for _ in 0..k {
            lits.push(Lit::pos(v));
            lits.push(Lit::neg(v));
        }
    }
    for _ in 0..RESHUFFLES {
        lits.shuffle(&mut rng);
        if repair(&mut lits, m, &mut rng) {
            let clauses = lits
                .chunks(3)
                .map(|c| Clause::new([c[0], c[1], c[2]]).expect("repaired"))
                .collect();
            return Ok(Problem::new(spec.n, clauses).expect("variables in range"));
        }
    }
    Err(GenError::RepairFailed(REPAIR_ATTEMPTS))
}

fn repair(lits: &mut [Lit], m: usize, rng: &mut ChaCha8Rng) -> bool {
    let mut bad: Vec<usize> = (0..m).filter(|&c| repeats(&lits[3 * c..3 * c + 3]) > 0).collect();
    let mut attempts = 0;
    while let Some(&b) = bad.last() {
        let rb = repeats(&lits[3 * b..3 * b + 3]);
        if rb == 0 {
            bad.pop();
            continue;
        }
        if attempts == REPAIR_ATTEMPTS || m < 2 {
            return false;
        }
        attempts += 1;
        let o = loop {
            let o = rng.random_range(0..m);
            if o != b {
                break o;
            }
        };
        let pb = 3 * b + rng.random_range(0..3);
        let po = 3 * o + rng.random_range(0..3);
        let before = rb + repeats(&lits[3 * o..3 * o + 3]);
        lits.swap(pb, po);
        let after_o = repeats(&lits[3 * o..3 * o + 3]);
        let after = repeats(&lits[3 * b..3 * b + 3]) + after_o;
        if after > before {
            lits.swap(pb, po);
        } else if after_o > 0 {
            bad.insert(0, o);
        }
    }
    true
}

/// Checks exact polarity counts, clause count `αn` (clauses never repeat a
/// variable by construction of [`Clause`]).
pub fn audit_exact_uniform(p: &Problem, alpha: Rational64) -> Result<(), GenError> {
    let spec = GenSpec {
        n: p.n(),
        alpha,
        seed: 0,
    };
    let k = spec.per_polarity()?;
    let m = spec.clause_count()?;
    if p.m() != m {
        return Err(GenError::ClauseCount { got: p.m(), expected: m });
    }
    for (i, &(pos, neg)) in p.polarity_counts().iter().enumerate() {
        if pos != k || neg != k {
            return Err(GenError::PolarityCount {
                var: i as u32 + 1,
                pos,
                neg,
                expected: k,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let spec = GenSpec {
            n: 3,
            alpha: Rational64::new(8, 3),
            seed: 1,
        };
        let p = gen_exact_uniform(&spec).unwrap();
        assert_eq!(p.m(), 8);
        audit_exact_uniform(&p, spec.alpha).unwrap();
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = GenSpec {
            n: 30,
            alpha: Rational64::from_integer(4),
            seed: 9,
        };
        assert_eq!(gen_exact_uniform(&spec).unwrap(), gen_exact_uniform(&spec).unwrap());
        let other = GenSpec { seed: 10, ..spec };
        assert_ne!(gen_exact_uniform(&spec).unwrap(), gen_exact_uniform(&other).unwrap());
    }

    #[test]
    fn rejects_bad_ratios() {
        let spec = GenSpec {
            n: 10,
            alpha: Rational64::new(1, 2),
            seed: 0,
        };
        assert!(matches!(gen_exact_uniform(&spec), Err(GenError::InvalidAlpha(_))));
        let spec = GenSpec {
            n: 10,
            alpha: Rational64::new(2, 3),
            seed: 0,
        };
        assert!(matches!(
            gen_exact_uniform(&spec),
            Err(GenError::FractionalClauseCount { .. })
        ));
    }

    #[test]
    fn feasible_rounding() {
        assert_eq!(feasible_alpha(4, 1.0), Rational64::from_integer(2));
        assert_eq!(feasible_alpha(6, 1.0), Rational64::new(2, 3));
        assert_eq!(feasible_alpha(175, 4.3), Rational64::from_integer(4));
        assert_eq!(feasible_alpha(9, 5.12), Rational64::new(16, 3));
    }
}
