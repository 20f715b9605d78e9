//! Exhaustive reference answers for small problems.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::{Clause, Problem};
use crate::tmatrix::ENUMERATION_CUTOFF;

/// Largest `n` for which `brute_force` also returns the model set.
pub const MODEL_SET_CUTOFF: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} variables exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded { n: usize, cutoff: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub satisfiable: bool,
    pub count: u64,
    /// Models as codes (bit `i - 1` is `x_i`), for `n ≤ MODEL_SET_CUTOFF`.
    pub models: Option<BTreeSet<u64>>,
}

/// Live assignments of `x_1..x_n`, one bit each, with clauses removing their
/// falsifying cylinders.
struct Alive {
    n: usize,
    bits: Vec<u64>,
    count: u64,
}

impl Alive {
    fn new(n: usize) -> Self {
        let total = 1u64 << n;
        let mut bits = vec![u64::MAX; (total as usize).div_ceil(64)];
        if total < 64 {
            bits[0] = (1u64 << total) - 1;
        }
        Alive {
            n,
            bits,
            count: total,
        }
    }

    fn remove_falsifying(&mut self, c: &Clause) {
        let mut mask = 0u64;
        let mut pat = 0u64;
        for l in c.lits() {
            let b = 1u64 << (l.var - 1);
            mask |= b;
            if !l.positive {
                pat |= b;
            }
        }
        let limit = 1u64 << self.n;
        let mut x = pat;
        loop {
            let (w, b) = ((x / 64) as usize, x % 64);
            if self.bits[w] >> b & 1 == 1 {
                self.bits[w] &= !(1 << b);
                self.count -= 1;
            }
            // Next code with the same bits under `mask`.
            x = (((x | mask) + 1) & !mask) | pat;
            if x >= limit {
                break;
            }
        }
    }

    fn codes(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for (wi, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.insert(wi as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }
}

fn check(n: usize) -> Result<(), OracleError> {
    if n > ENUMERATION_CUTOFF {
        return Err(OracleError::CutoffExceeded {
            n,
            cutoff: ENUMERATION_CUTOFF,
        });
    }
    Ok(())
}

pub fn brute_force(p: &Problem) -> Result<BruteForce, OracleError> {
    check(p.n())?;
    let mut alive = Alive::new(p.n());
    for c in p.clauses() {
        alive.remove_falsifying(c);
    }
    Ok(BruteForce {
        satisfiable: alive.count > 0,
        count: alive.count,
        models: (p.n() <= MODEL_SET_CUTOFF).then(|| alive.codes()),
    })
}

/// Model counts over `x_1..x_n` after each clause prefix.
pub fn prefix_counts(p: &Problem) -> Result<Vec<u64>, OracleError> {
    check(p.n())?;
    let mut alive = Alive::new(p.n());
    Ok(p
        .clauses()
        .iter()
        .map(|c| {
            alive.remove_falsifying(c);
            alive.count
        })
        .collect())
}
