//! Multilinear polynomials over GF(2) in algebraic normal form.
//!
//! A polynomial is a set of monomials; a monomial is a set of variable
//! indices (1-based). Addition is symmetric difference of monomial sets and
//! multiplication distributes with `x * x = x` and pairwise cancellation.

mod mobius;
mod monomial;
mod text;

use std::ops::{Add, Mul};

use thiserror::Error;

pub use mobius::TruthTable;
pub use monomial::Monomial;

/// Joint support size up to which products go through truth tables.
pub(crate) const TABLE_VARS: usize = 20;
/// Product size (in monomial pairs) above which the table route is tried.
const TABLE_PAIRS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnfError {
    #[error("variable index must be at least 1")]
    ZeroVariable,
    #[error("assignment has {len} bits but variable {var} is referenced")]
    ShortAssignment { var: u32, len: usize },
    #[error("truth table over {0} variables is too large")]
    TableTooLarge(usize),
    #[error("variable {0} is not in the table's variable list")]
    VariableNotInTable(u32),
    #[error("cannot parse polynomial term `{0}`")]
    Parse(String),
}

/// A GF(2) polynomial kept in canonical form: monomials strictly ascending
/// by (degree, lexicographic index sequence), no duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnfPoly {
    terms: Vec<Monomial>,
}

impl AnfPoly {
    pub fn zero() -> Self {
        AnfPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        AnfPoly {
            terms: vec![Monomial::one()],
        }
    }

    pub fn constant(b: bool) -> Self {
        if b {
            Self::one()
        } else {
            Self::zero()
        }
    }

    /// The polynomial `α_i`.
    pub fn var(i: u32) -> Self {
        AnfPoly {
            terms: vec![Monomial::var(i)],
        }
    }

    /// The polynomial `α_i + 1`.
    pub fn var_plus_one(i: u32) -> Self {
        AnfPoly {
            terms: vec![Monomial::one(), Monomial::var(i)],
        }
    }

    /// Builds a polynomial from any multiset of monomials; repeated monomials
    /// cancel in pairs.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }

    pub(crate) fn from_unsorted(mut terms: Vec<Monomial>) -> Self {
        terms.sort_unstable();
        let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
        for m in terms {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        AnfPoly { terms: out }
    }

    /// Wraps an already strictly ascending monomial list.
    pub(crate) fn from_sorted_unchecked(terms: Vec<Monomial>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        AnfPoly { terms }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.terms
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`AnfPoly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    /// `Some(b)` when the polynomial is the constant `b`.
    pub fn as_constant(&self) -> Option<bool> {
        match self.terms.as_slice() {
            [] => Some(false),
            [m] if m.is_one() => Some(true),
            _ => None,
        }
    }

    /// True when the polynomial is exactly `α_i`.
    pub fn is_var(&self, i: u32) -> bool {
        self.terms.len() == 1 && self.terms[0].degree() == 1 && self.terms[0].contains(i)
    }

    /// Sorted list of variables occurring in some monomial.
    pub fn support(&self) -> Vec<u32> {
        let mut acc = Monomial::one();
        for m in &self.terms {
            acc = acc.union(m);
        }
        acc.vars().collect()
    }

    pub fn highest_var(&self) -> Option<u32> {
        self.terms.iter().filter_map(Monomial::max_var).max()
    }

    pub fn depends_on(&self, i: u32) -> bool {
        self.terms.iter().any(|m| m.contains(i))
    }

    pub fn add(&self, other: &AnfPoly) -> AnfPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        AnfPoly { terms: out }
    }

    pub fn mul(&self, other: &AnfPoly) -> AnfPoly {
        if self.is_zero() || other.is_zero() {
            return AnfPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.len() * other.len() > TABLE_PAIRS {
            let vars = union_support(&[self, other]);
            if vars.len() <= TABLE_VARS {
                return self.mul_via_tables(other, &vars);
            }
        }
        self.mul_direct(other)
    }

    /// Term-by-term product followed by pairwise cancellation.
    pub fn mul_direct(&self, other: &AnfPoly) -> AnfPoly {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.union(b));
            }
        }
        AnfPoly::from_unsorted(terms)
    }

    /// Product computed pointwise on truth tables over `vars`, which must
    /// cover both supports.
    pub(crate) fn mul_via_tables(&self, other: &AnfPoly, vars: &[u32]) -> AnfPoly {
        let mut t = TruthTable::from_poly(self, vars).expect("support covered");
        let u = TruthTable::from_poly(other, vars).expect("support covered");
        t.and_assign(&u);
        t.to_poly()
    }

    /// Substitutes the constant `b` for `α_i`.
    pub fn restrict(&self, i: u32, b: bool) -> AnfPoly {
        if !self.depends_on(i) {
            return self.clone();
        }
        if b {
            AnfPoly::from_unsorted(self.terms.iter().map(|m| m.without(i)).collect())
        } else {
            AnfPoly {
                terms: self.terms.iter().filter(|m| !m.contains(i)).cloned().collect(),
            }
        }
    }

    /// Evaluates at `a`, where `a[i - 1]` is the value of `α_i`.
    pub fn eval(&self, a: &[bool]) -> Result<bool, AnfError> {
        if let Some(v) = self.highest_var() {
            if v as usize > a.len() {
                return Err(AnfError::ShortAssignment { var: v, len: a.len() });
            }
        }
        let words = pack_bits(a);
        Ok(self.eval_packed(&words))
    }

    /// Evaluates at a packed assignment: bit `i - 1` of the word array is `α_i`.
    /// Variables beyond the array read as 0.
    pub fn eval_packed(&self, words: &[u64]) -> bool {
        let mut acc = false;
        for m in &self.terms {
            if m.is_satisfied_by(words) {
                acc = !acc;
            }
        }
        acc
    }
}

/// Packs a bool slice into words with bit `i` of the array holding `a[i]`.
pub fn pack_bits(a: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; a.len().div_ceil(64)];
    for (i, &b) in a.iter().enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Sorted union of the supports of several polynomials.
pub fn union_support(polys: &[&AnfPoly]) -> Vec<u32> {
    let mut acc = Monomial::one();
    for p in polys {
        for m in &p.terms {
            acc = acc.union(m);
        }
    }
    acc.vars().collect()
}

impl Add for &AnfPoly {
    type Output = AnfPoly;
    fn add(self, rhs: &AnfPoly) -> AnfPoly {
        AnfPoly::add(self, rhs)
    }
}

impl Add for AnfPoly {
    type Output = AnfPoly;
    fn add(self, rhs: AnfPoly) -> AnfPoly {
        AnfPoly::add(&self, &rhs)
    }
}

impl Mul for &AnfPoly {
    type Output = AnfPoly;
    fn mul(self, rhs: &AnfPoly) -> AnfPoly {
        AnfPoly::mul(self, rhs)
    }
}

impl Mul for AnfPoly {
    type Output = AnfPoly;
    fn mul(self, rhs: AnfPoly) -> AnfPoly {
        AnfPoly::mul(&self, &rhs)
    }
}
