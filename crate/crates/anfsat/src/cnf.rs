//! Literals, 3-clauses and problems, plus the remap/flip record that links a
//! transformed problem back to the one it was derived from.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("literal 0 is not a variable")]
    ZeroLiteral,
    #[error("variable {0} appears twice in one clause")]
    RepeatedVariable(u32),
    #[error("variable {var} exceeds the declared count {n}")]
    VariableOutOfRange { var: u32, n: usize },
    #[error("model has {got} values, expected {expected}")]
    ModelLength { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn from_dimacs(x: i32) -> Result<Self, CnfError> {
        if x == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        Ok(Lit {
            var: x.unsigned_abs(),
            positive: x > 0,
        })
    }

    pub fn to_dimacs(self) -> i32 {
        if self.positive {
            self.var as i32
        } else {
            -(self.var as i32)
        }
    }

    pub fn is_satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

/// Three literals over distinct variables, kept in the order given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: [Lit; 3],
}

impl Clause {
    pub fn new(lits: [Lit; 3]) -> Result<Self, CnfError> {
        for l in &lits {
            if l.var == 0 {
                return Err(CnfError::ZeroLiteral);
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if lits[i].var == lits[j].var {
                    return Err(CnfError::RepeatedVariable(lits[i].var));
                }
            }
        }
        Ok(Clause { lits })
    }

    pub fn from_dimacs(x: [i32; 3]) -> Result<Self, CnfError> {
        Clause::new([
            Lit::from_dimacs(x[0])?,
            Lit::from_dimacs(x[1])?,
            Lit::from_dimacs(x[2])?,
        ])
    }

    pub fn lits(&self) -> &[Lit; 3] {
        &self.lits
    }

    /// Literals ordered by ascending variable.
    pub fn sorted_lits(&self) -> [Lit; 3] {
        let mut l = self.lits;
        l.sort_by_key(|x| x.var);
        l
    }

    pub fn highest(&self) -> Lit {
        self.sorted_lits()[2]
    }

    pub fn max_var(&self) -> u32 {
        self.highest().var
    }

    pub fn contains_var(&self, v: u32) -> bool {
        self.lits.iter().any(|l| l.var == v)
    }

    /// `model[i - 1]` is the value of `x_i`.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| l.is_satisfied_by(model[l.var as usize - 1]))
    }

    /// Satisfaction test on a packed assignment (bit `i - 1` is `x_i`).
    pub fn is_satisfied_by_code(&self, code: u64) -> bool {
        self.lits
            .iter()
            .any(|l| l.is_satisfied_by(code >> (l.var - 1) & 1 == 1))
    }

    pub fn map_vars<F: FnMut(Lit) -> Lit>(&self, f: F) -> Clause {
        Clause {
            lits: self.lits.map(f),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.lits;
        write!(f, "{} {} {}", a.to_dimacs(), b.to_dimacs(), c.to_dimacs())
    }
}

/// A conjunction of 3-clauses over `x_1..x_n`.
///
/// `remap` and `flips` describe how this problem's variables relate to the
/// problem it was derived from: original variable `i` became variable
/// `remap[i - 1]` here, with polarity inverted when `flips[i - 1]` is set.
/// A freshly built problem carries the identity record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    n: usize,
    clauses: Vec<Clause>,
    remap: Vec<u32>,
    flips: Vec<bool>,
}

impl Problem {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for c in &clauses {
            for l in c.lits() {
                if l.var as usize > n {
                    return Err(CnfError::VariableOutOfRange { var: l.var, n });
                }
            }
        }
        Ok(Problem {
            n,
            clauses,
            remap: (1..=n as u32).collect(),
            flips: vec![false; n],
        })
    }

    pub fn from_dimacs_clauses(n: usize, clauses: &[[i32; 3]]) -> Result<Self, CnfError> {
        let cs = clauses
            .iter()
            .map(|&c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>, _>>()?;
        Problem::new(n, cs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn remap(&self) -> &[u32] {
        &self.remap
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    /// Replaces the clause list and composes a further relabeling on top of
    /// the existing record: variable `v` of this problem becomes
    /// `relabel[v - 1]`, inverted when `flip[v - 1]`.
    pub(crate) fn transformed(&self, relabel: &[u32], flip: &[bool], clauses: Vec<Clause>) -> Problem {
        let remap = self.remap.iter().map(|&v| relabel[v as usize - 1]).collect();
        let flips = self
            .remap
            .iter()
            .zip(&self.flips)
            .map(|(&v, &f)| f ^ flip[v as usize - 1])
            .collect();
        Problem {
            n: self.n,
            clauses,
            remap,
            flips,
        }
    }

    /// Forgets the remap/flip record, making this problem its own origin.
    pub fn detached(&self) -> Problem {
        Problem::new(self.n, self.clauses.clone()).expect("already validated")
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(model))
    }

    pub fn is_satisfied_by_code(&self, code: u64) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by_code(code))
    }

    /// Occurrences of each variable as (positive, negative), indexed `v - 1`.
    pub fn polarity_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.n];
        for c in &self.clauses {
            for l in c.lits() {
                let e = &mut counts[l.var as usize - 1];
                if l.positive {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        counts
    }
}

/// Packs a model into a code with bit `i - 1` holding `x_i` (requires n ≤ 64).
pub fn model_to_code(model: &[bool]) -> u64 {
    model
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (b as u64) << i)
}

pub fn code_to_model(code: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| code >> i & 1 == 1).collect()
}
