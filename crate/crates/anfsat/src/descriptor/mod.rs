//! Functional descriptors: triangular families `h_1..h_n` of GF(2)
//! polynomials, `h_t` over `α_1..α_t`, describing a set of assignments.
//!
//! Assignments are produced sequentially: `x_t = h_t(x_1, .., x_{t-1}, α_t)`
//! for a free parameter `α_t`. Position `t` therefore allows, after a
//! prefix, the values `{h_t(prefix, 0), h_t(prefix, 1)}`, which is never
//! empty; a descriptor always describes a non-empty set, and
//! unsatisfiability is the separate [`Descriptor::Unsat`] state.
//!
//! Descriptors built here are normalized: at every prefix `h_t` either
//! passes `α_t` through (the variable is free) or is constant (forced).

mod merge;
mod solve;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::anf::AnfPoly;
use crate::cnf::{Clause, Lit};
use crate::tmatrix::{Cell, MatrixError, Row, TernaryMatrix, ENUMERATION_CUTOFF};

pub use merge::{merge, DontCare, MergeOutcome, MergeStats, Merger, DEFAULT_STEP_CEILING};
pub use solve::{
    complexity_estimate, solve, write_trace_csv, Decision, SolveOptions, SolveOutcome,
    TraceRecord,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("h_{t} mentions α_{var}, beyond its own position")]
    NotTriangular { t: usize, var: u32 },
    #[error("descriptors range over {0} and {1} variables")]
    LengthMismatch(usize, usize),
    #[error("clause variable {var} exceeds n = {n}")]
    ClauseOutOfRange { var: u32, n: usize },
    #[error("{n} variables exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded { n: usize, cutoff: usize },
    #[error("constraint propagation exceeded {0} steps")]
    StepCeiling(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorVector {
    h: Vec<AnfPoly>,
}

/// A descriptor or the explicit "no solution" state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Sat(DescriptorVector),
    Unsat { n: usize },
}

impl Descriptor {
    pub fn n(&self) -> usize {
        match self {
            Descriptor::Sat(d) => d.n(),
            Descriptor::Unsat { n } => *n,
        }
    }

    pub fn as_sat(&self) -> Option<&DescriptorVector> {
        match self {
            Descriptor::Sat(d) => Some(d),
            Descriptor::Unsat { .. } => None,
        }
    }

    pub fn enumerate(&self) -> Result<BTreeSet<u64>, DescriptorError> {
        match self {
            Descriptor::Sat(d) => d.enumerate(),
            Descriptor::Unsat { .. } => Ok(BTreeSet::new()),
        }
    }
}

impl DescriptorVector {
    /// Checks that each `h_t` only mentions `α_1..α_t`.
    pub fn new(h: Vec<AnfPoly>) -> Result<Self, DescriptorError> {
        for (i, p) in h.iter().enumerate() {
            if let Some(v) = p.highest_var() {
                if v as usize > i + 1 {
                    return Err(DescriptorError::NotTriangular { t: i + 1, var: v });
                }
            }
        }
        Ok(DescriptorVector { h })
    }

    /// `h_t = α_t` for every `t`: all assignments.
    pub fn identity(n: usize) -> Self {
        DescriptorVector {
            h: (1..=n as u32).map(AnfPoly::var).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// `h_t`, 1-based.
    pub fn h(&self, t: usize) -> &AnfPoly {
        &self.h[t - 1]
    }

    pub fn polys(&self) -> &[AnfPoly] {
        &self.h
    }

    pub(crate) fn into_polys(self) -> Vec<AnfPoly> {
        self.h
    }

    pub fn lens(&self) -> Vec<usize> {
        self.h.iter().map(AnfPoly::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.h.iter().map(AnfPoly::len).max().unwrap_or(0)
    }

    /// True when no `h_t` is anti-identity at any prefix, i.e. there is no
    /// prefix with `h_t(., 0) = 1` and `h_t(., 1) = 0`.
    pub fn is_normalized(&self) -> bool {
        self.h
            .iter()
            .enumerate()
            .all(|(i, p)| normalizer(p, i as u32 + 1).is_zero())
    }

    /// Rewrites anti-identity prefixes to identity. The allowed values at
    /// every prefix, and so the described set, are unchanged.
    pub fn normalized(&self) -> Self {
        DescriptorVector {
            h: self
                .h
                .iter()
                .enumerate()
                .map(|(i, p)| p + &normalizer(p, i as u32 + 1))
                .collect(),
        }
    }

    /// Maps a parameter vector to its assignment: `x_t = h_t(x_<t, α_t)`.
    pub fn image(&self, alpha: &[bool]) -> Vec<bool> {
        let n = self.n();
        let mut words = vec![0u64; n.div_ceil(64).max(1)];
        let mut x = Vec::with_capacity(n);
        for t in 1..=n {
            let bit = t - 1;
            set_bit(&mut words, bit, alpha[bit]);
            let v = self.h[bit].eval_packed(&words);
            set_bit(&mut words, bit, v);
            x.push(v);
        }
        x
    }

    /// The assignment reached with every parameter at 0.
    pub fn witness(&self) -> Vec<bool> {
        self.image(&vec![false; self.n()])
    }

    /// Values `x_t` may take after the prefix held in `words` (bits below
    /// `t - 1`), as (value at α_t = 0, value at α_t = 1).
    fn branches(&self, t: usize, words: &mut [u64]) -> (bool, bool) {
        let bit = t - 1;
        set_bit(words, bit, false);
        let v0 = self.h[bit].eval_packed(words);
        set_bit(words, bit, true);
        let v1 = self.h[bit].eval_packed(words);
        set_bit(words, bit, false);
        (v0, v1)
    }

    /// Visits every described assignment once, as packed words, in
    /// depth-first order.
    pub fn for_each_model<F: FnMut(&[u64])>(&self, mut f: F) {
        let mut words = vec![0u64; self.n().div_ceil(64).max(1)];
        self.dfs(1, &mut words, &mut f);
    }

    fn dfs<F: FnMut(&[u64])>(&self, t: usize, words: &mut [u64], f: &mut F) {
        if t > self.n() {
            f(words);
            return;
        }
        let (v0, v1) = self.branches(t, words);
        for v in [false, true] {
            if v == v0 || v == v1 {
                set_bit(words, t - 1, v);
                self.dfs(t + 1, words, f);
            }
        }
        set_bit(words, t - 1, false);
    }

    fn check_cutoff(&self) -> Result<(), DescriptorError> {
        if self.n() > ENUMERATION_CUTOFF {
            return Err(DescriptorError::CutoffExceeded {
                n: self.n(),
                cutoff: ENUMERATION_CUTOFF,
            });
        }
        Ok(())
    }

    /// Described assignments as codes (bit `i - 1` is `x_i`).
    pub fn enumerate(&self) -> Result<BTreeSet<u64>, DescriptorError> {
        self.check_cutoff()?;
        let mut out = BTreeSet::new();
        self.for_each_model(|w| {
            out.insert(w[0]);
        });
        Ok(out)
    }

    pub fn count_models(&self) -> Result<u64, DescriptorError> {
        self.check_cutoff()?;
        let mut count = 0u64;
        self.for_each_model(|_| count += 1);
        Ok(count)
    }
}

fn set_bit(words: &mut [u64], bit: usize, v: bool) {
    if v {
        words[bit / 64] |= 1 << (bit % 64);
    } else {
        words[bit / 64] &= !(1 << (bit % 64));
    }
}

/// `F0 (1 + F1)` for `F_b = h|α_t=b`: 1 exactly at anti-identity prefixes.
fn normalizer(h: &AnfPoly, t: u32) -> AnfPoly {
    if !h.depends_on(t) {
        return AnfPoly::zero();
    }
    let f0 = h.restrict(t, false);
    let f1 = h.restrict(t, true);
    &f0 * &(&f1 + &AnfPoly::one())
}

/// The factor that is 1 exactly when the literal is false.
fn falsifier(l: Lit) -> AnfPoly {
    if l.positive {
        AnfPoly::var_plus_one(l.var)
    } else {
        AnfPoly::var(l.var)
    }
}

/// Descriptor of a single clause over `x_1..x_n`: with variables `r < s < t`,
/// `h_t = F_r F_s F_t + α_t` where `F` is the literal's falsifying factor,
/// and every other position is the identity.
pub fn clause_descriptor(c: &Clause, n: usize) -> Result<DescriptorVector, DescriptorError> {
    let [r, s, t] = c.sorted_lits();
    if t.var as usize > n {
        return Err(DescriptorError::ClauseOutOfRange { var: t.var, n });
    }
    let mut d = DescriptorVector::identity(n);
    let prod = &(&falsifier(r) * &falsifier(s)) * &falsifier(t);
    d.h[t.var as usize - 1] = &prod + &AnfPoly::var(t.var);
    Ok(d)
}

/// Descriptor of the set denoted by a matrix, built by splitting rows on
/// each variable in turn: if both halves are non-empty the variable is free
/// and later positions blend the two halves' descriptors, otherwise it is
/// forced to the side that remains.
pub fn descriptor_from_matrix(a: &TernaryMatrix, n: usize) -> Result<Descriptor, DescriptorError> {
    let vars: Vec<u32> = (1..=n as u32).collect();
    let full = a.extend(&vars)?;
    if full.is_empty() {
        return Ok(Descriptor::Unsat { n });
    }
    let rows: Vec<&Row> = full.rows().iter().collect();
    Ok(Descriptor::Sat(DescriptorVector {
        h: split_build(&rows, 0, n),
    }))
}

fn split_build(rows: &[&Row], k: usize, n: usize) -> Vec<AnfPoly> {
    if k == n {
        return Vec::new();
    }
    let var = k as u32 + 1;
    if rows.iter().all(|r| r[k] == Cell::Neutral) {
        let mut out = vec![AnfPoly::var(var)];
        out.extend(split_build(rows, k + 1, n));
        return out;
    }
    let half0: Vec<&Row> = rows.iter().copied().filter(|r| r[k] != Cell::One).collect();
    let half1: Vec<&Row> = rows.iter().copied().filter(|r| r[k] != Cell::Zero).collect();
    let mut out = Vec::with_capacity(n - k);
    match (half0.is_empty(), half1.is_empty()) {
        (false, true) => {
            out.push(AnfPoly::zero());
            out.extend(split_build(&half0, k + 1, n));
        }
        (true, false) => {
            out.push(AnfPoly::one());
            out.extend(split_build(&half1, k + 1, n));
        }
        _ => {
            out.push(AnfPoly::var(var));
            let f = split_build(&half0, k + 1, n);
            let g = split_build(&half1, k + 1, n);
            let a = AnfPoly::var(var);
            for (fi, gi) in f.into_iter().zip(g) {
                if fi == gi {
                    out.push(fi);
                } else {
                    let diff = &fi + &gi;
                    out.push(&fi + &(&a * &diff));
                }
            }
        }
    }
    out
}

/// Replaces every `h_k` mentioning `α_j` by its restriction whenever `h_j`
/// is a constant. The sequential image is unchanged, since `x_j` always
/// takes that constant.
pub(crate) fn substitute_constants(h: &mut [AnfPoly]) {
    for j in 0..h.len() {
        if let Some(b) = h[j].as_constant() {
            let var = j as u32 + 1;
            for hk in &mut h[j + 1..] {
                if hk.depends_on(var) {
                    *hk = hk.restrict(var, b);
                }
            }
        }
    }
}
