//! Satisfiability-preserving rewrites that shrink descriptor growth:
//! occurrence relabeling with polarity flips and clause sorting, and the
//! trajectory permutation pass that separates joining trajectories.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Lit, Problem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("model has {got} values, expected {expected}")]
    ModelLength { got: usize, expected: usize },
    #[error("line {line}: expected `var_map: <orig>-><new>, flip: 0|1`")]
    MalformedVarMap { line: usize },
    #[error("var_map does not describe a permutation of 1..={n}")]
    NotAPermutation { n: usize },
}

/// Stable clause order: ascending highest variable, negative highest
/// literal first.
fn sort_clauses(clauses: &mut [Clause]) {
    clauses.sort_by_key(|c| {
        let h = c.highest();
        (h.var, h.positive)
    });
}

/// Relabels variables by decreasing occurrence (ties by index), flips each
/// variable with more positive than negative occurrences, then sorts the
/// clauses. The result records how to map its models back.
pub fn sort_problem(p: &Problem) -> Problem {
    let n = p.n();
    let counts = p.polarity_counts();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.sort_by_key(|&v| {
        let (a, b) = counts[v as usize - 1];
        std::cmp::Reverse(a + b)
    });
    let mut relabel = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        relabel[old as usize - 1] = new as u32 + 1;
    }
    let flip: Vec<bool> = counts.iter().map(|&(pos, neg)| pos > neg).collect();
    let mut clauses: Vec<Clause> = p
        .clauses()
        .iter()
        .map(|c| {
            c.map_vars(|l| Lit {
                var: relabel[l.var as usize - 1],
                positive: l.positive ^ flip[l.var as usize - 1],
            })
        })
        .collect();
    sort_clauses(&mut clauses);
    p.transformed(&relabel, &flip, clauses)
}

/// Maps a model of a transformed problem to a model of its origin:
/// `x_i = y_{remap[i]} XOR flips[i]`.
pub fn apply_model_back(p: &Problem, model: &[bool]) -> Result<Vec<bool>, PreprocessError> {
    if model.len() != p.n() {
        return Err(PreprocessError::ModelLength {
            got: model.len(),
            expected: p.n(),
        });
    }
    Ok(p
        .remap()
        .iter()
        .zip(p.flips())
        .map(|(&v, &f)| model[v as usize - 1] ^ f)
        .collect())
}

/// One step of a trajectory: from the visited index to the highest index of
/// its accumulated support, after moving past indices owned by others.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    /// Starting index of the trajectory this hop extends.
    pub trajectory: u32,
    pub from: u32,
    pub to: u32,
    /// Label swaps `j ↔ j − 1` performed to reach `to`.
    pub swaps: u32,
    /// `to` already belonged to a trajectory (only below the threshold).
    pub merged: bool,
}

/// Per-index co-occurrence sets and trajectory bookkeeping. Vectors are
/// indexed by variable, with slot 0 unused.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrajectoryState {
    /// Lower variables sharing a clause in which `x_t` is highest and positive.
    pub v_plus: Vec<BTreeSet<u32>>,
    /// The same for negative highest literals.
    pub v_minus: Vec<BTreeSet<u32>>,
    /// Accumulated trajectory support.
    pub w: Vec<BTreeSet<u32>>,
    /// Owning trajectory of each marked index.
    pub marked: Vec<Option<u32>>,
    pub hops: Vec<Hop>,
    /// `ceil(m / n)`.
    pub alpha: u32,
    /// Joins below `3 α` are left merged.
    pub threshold: u32,
}

impl TrajectoryState {
    pub fn v(&self, t: usize) -> BTreeSet<u32> {
        self.v_plus[t].union(&self.v_minus[t]).copied().collect()
    }

    /// Number of indices owned by each trajectory, keyed by its start.
    pub fn trajectory_sizes(&self) -> Vec<(u32, usize)> {
        let mut sizes: Vec<(u32, usize)> = Vec::new();
        for owner in self.marked.iter().flatten() {
            match sizes.iter_mut().find(|(t, _)| t == owner) {
                Some(e) => e.1 += 1,
                None => sizes.push((*owner, 1)),
            }
        }
        sizes.sort();
        sizes
    }
}

pub fn compute_v(p: &Problem) -> TrajectoryState {
    let n = p.n();
    let mut st = TrajectoryState {
        v_plus: vec![BTreeSet::new(); n + 1],
        v_minus: vec![BTreeSet::new(); n + 1],
        w: vec![BTreeSet::new(); n + 1],
        marked: vec![None; n + 1],
        hops: Vec::new(),
        alpha: if n == 0 { 0 } else { p.m().div_ceil(n) as u32 },
        threshold: 0,
    };
    st.threshold = 3 * st.alpha;
    for c in p.clauses() {
        let [a, b, h] = c.sorted_lits();
        let set = if h.positive {
            &mut st.v_plus[h.var as usize]
        } else {
            &mut st.v_minus[h.var as usize]
        };
        set.insert(a.var);
        set.insert(b.var);
    }
    st
}

/// Clauses indexed by the variables they contain, so label swaps touch
/// only the affected clauses.
struct Labeled {
    clauses: Vec<Clause>,
    by_var: Vec<Vec<usize>>,
}

impl Labeled {
    fn new(p: &Problem) -> Self {
        let mut by_var = vec![Vec::new(); p.n() + 1];
        for (i, c) in p.clauses().iter().enumerate() {
            for l in c.lits() {
                by_var[l.var as usize].push(i);
            }
        }
        Labeled {
            clauses: p.clauses().to_vec(),
            by_var,
        }
    }

    fn v(&self, t: u32) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for &i in &self.by_var[t as usize] {
            let c = &self.clauses[i];
            if c.max_var() == t {
                out.extend(c.lits().iter().map(|l| l.var).filter(|&v| v != t));
            }
        }
        out
    }

    fn swap(&mut self, a: u32, b: u32) {
        let touched: BTreeSet<usize> = self.by_var[a as usize]
            .iter()
            .chain(&self.by_var[b as usize])
            .copied()
            .collect();
        for i in touched {
            self.clauses[i] = self.clauses[i].map_vars(|l| Lit {
                var: if l.var == a {
                    b
                } else if l.var == b {
                    a
                } else {
                    l.var
                },
                ..l
            });
        }
        self.by_var.swap(a as usize, b as usize);
    }
}

/// Runs the permutation pass and returns the relabeled, re-sorted problem
/// with the final bookkeeping.
///
/// Visiting `p = n, n−1, …, 3`, the support `W(p)` is `V(p)` (joined to the
/// inherited support when `p` is already marked). Its highest index `j`
/// below `p` is the next hop; while `j` is owned by another trajectory and
/// `j ≥ 3α`, the labels `j` and `j − 1` are exchanged and `j` decreases. Marks and supports
/// stay attached to indices, not to the variables moved through them.
pub fn permute_trajectories_with_state(p: &Problem) -> (Problem, TrajectoryState) {
    let n = p.n();
    let mut st = compute_v(p);
    let mut cur = Labeled::new(p);
    // Variable `v` of the input currently carries label `label[v - 1]`.
    let mut label: Vec<u32> = (1..=n as u32).collect();
    let mut holder: Vec<u32> = (0..=n as u32).collect();

    for pv in (3..=n as u32).rev() {
        let v = cur.v(pv);
        let owner = match st.marked[pv as usize] {
            Some(o) => {
                st.w[pv as usize].extend(v);
                o
            }
            None => {
                st.w[pv as usize] = v;
                pv
            }
        };
        let Some(&start) = st.w[pv as usize].range(..pv).next_back() else {
            continue;
        };
        let mut j = start;
        let mut swaps = 0;
        while st.marked[j as usize].is_some() && j >= st.threshold && j > 1 {
            cur.swap(j, j - 1);
            let (x, y) = (holder[j as usize], holder[j as usize - 1]);
            holder.swap(j as usize, j as usize - 1);
            label[x as usize - 1] = j - 1;
            label[y as usize - 1] = j;
            j -= 1;
            swaps += 1;
        }
        let merged = st.marked[j as usize].is_some();
        let support = st.w[pv as usize].clone();
        if merged {
            st.w[j as usize].extend(support);
        } else {
            st.w[j as usize] = support;
            st.marked[j as usize] = Some(owner);
        }
        st.hops.push(Hop {
            trajectory: owner,
            from: pv,
            to: j,
            swaps,
            merged,
        });
    }

    let mut clauses = cur.clauses;
    sort_clauses(&mut clauses);
    let out = p.transformed(&label, &vec![false; n], clauses);
    let fresh = compute_v(&out);
    st.v_plus = fresh.v_plus;
    st.v_minus = fresh.v_minus;
    (out, st)
}

pub fn permute_trajectories(p: &Problem) -> Problem {
    permute_trajectories_with_state(p).0
}

/// One `var_map: orig->new, flip: 0|1` line per original variable.
pub fn write_var_map(p: &Problem) -> String {
    let mut s = String::new();
    for (i, (&v, &f)) in p.remap().iter().zip(p.flips()).enumerate() {
        let _ = writeln!(s, "var_map: {}->{}, flip: {}", i + 1, v, f as u8);
    }
    s
}

/// Parses a sidecar into `(remap, flips)` indexed by original variable.
pub fn parse_var_map(text: &str) -> Result<(Vec<u32>, Vec<bool>), PreprocessError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let bad = || PreprocessError::MalformedVarMap { line };
        let rest = t.strip_prefix("var_map:").ok_or_else(bad)?;
        let (pair, flip) = rest.split_once(',').ok_or_else(bad)?;
        let (orig, new) = pair.trim().split_once("->").ok_or_else(bad)?;
        let orig: u32 = orig.trim().parse().map_err(|_| bad())?;
        let new: u32 = new.trim().parse().map_err(|_| bad())?;
        let flip = match flip.trim().strip_prefix("flip:").map(str::trim) {
            Some("0") => false,
            Some("1") => true,
            _ => return Err(bad()),
        };
        entries.push((orig, new, flip));
    }
    let n = entries.len();
    let mut remap = vec![0u32; n];
    let mut flips = vec![false; n];
    let mut hit = vec![false; n];
    for (o, v, f) in entries {
        let (o, v) = (o as usize, v as usize);
        if o == 0 || o > n || v == 0 || v > n || remap[o - 1] != 0 || hit[v - 1] {
            return Err(PreprocessError::NotAPermutation { n });
        }
        remap[o - 1] = v as u32;
        flips[o - 1] = f;
        hit[v - 1] = true;
    }
    Ok((remap, flips))
}
