//! Conjunction of two descriptors.
//!
//! Positions are merged from `n` down to 1. At position `t`, with
//! `F_b = f_t|α_t=b` and `G_b = g_t|α_t=b`, the merged polynomial is
//!
//! ```text
//! h_t = (α_t + 1) [ (F0 + G0) F1 G1 + F0 G0 ]
//!     +  α_t      [ (F1 + G1)(F0 + G0) + (F1 + G1) F0 G0 + F1 G1 ]
//! ```
//!
//! and the conflict polynomial `c = (F0 + G0)(F1 + G1)` marks the prefixes
//! where one side forces a value the other side forbids. Such prefixes must
//! be excluded, which is a constraint `c = 0` on lower variables. A
//! constraint whose highest variable is `j` is met at position `j` by
//! merging `h_j` with
//!
//! ```text
//! g*_j = α_j (1 + c0 + c1) + c0 (1 + c1),   c_b = c|α_j=b
//! ```
//!
//! (forcing `x_j` away from the offending value), while `c0 c1`, the part
//! that no choice of `x_j` avoids, is passed further down. A constraint
//! reaching the constant 1 means there is no solution.

use std::collections::BTreeMap;

use crate::anf::{union_support, AnfPoly, TruthTable, TABLE_VARS};

use super::{substitute_constants, Descriptor, DescriptorError, DescriptorVector};

pub const DEFAULT_STEP_CEILING: usize = 1_000_000;

/// What to place at prefixes that end up excluded by a conflict. Any value
/// is correct there, since those prefixes are never reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DontCare {
    /// Keep the merge formula's own value, `α_t`.
    Formula,
    /// Choose among the formula value, the left input and the right input,
    /// whichever gives the fewest monomials (ties in that order).
    #[default]
    Shortest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeStats {
    /// Constraint merges (`h_j ∧ g*_j`) performed.
    pub recursive_calls: usize,
    /// Position merges performed, including constraint merges.
    pub position_merges: usize,
    /// Sum of `len(f) * len(g)` over performed position merges.
    pub work: u64,
    /// Position merges with a non-zero conflict polynomial.
    pub conflicts: usize,
}

impl MergeStats {
    pub fn absorb(&mut self, other: &MergeStats) {
        self.recursive_calls += other.recursive_calls;
        self.position_merges += other.position_merges;
        self.work += other.work;
        self.conflicts += other.conflicts;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub descriptor: Descriptor,
    pub stats: MergeStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Merger {
    pub step_ceiling: usize,
    pub dont_care: DontCare,
    /// Substitute constant positions into later ones after merging.
    pub substitute_constants: bool,
    /// Force the symbolic route even where truth tables would apply.
    pub symbolic_only: bool,
}

impl Default for Merger {
    fn default() -> Self {
        Merger {
            step_ceiling: DEFAULT_STEP_CEILING,
            dont_care: DontCare::Shortest,
            substitute_constants: true,
            symbolic_only: false,
        }
    }
}

/// Merges with the default settings.
pub fn merge(a: &DescriptorVector, b: &DescriptorVector) -> Result<MergeOutcome, DescriptorError> {
    Merger::default().merge(a, b)
}

pub(crate) struct Position {
    pub(crate) h: AnfPoly,
    pub(crate) conflict: AnfPoly,
}

impl Merger {
    pub fn merge(
        &self,
        a: &DescriptorVector,
        b: &DescriptorVector,
    ) -> Result<MergeOutcome, DescriptorError> {
        if a.n() != b.n() {
            return Err(DescriptorError::LengthMismatch(a.n(), b.n()));
        }
        let a = if a.is_normalized() { a.clone() } else { a.normalized() };
        let b = if b.is_normalized() { b.clone() } else { b.normalized() };
        self.merge_normalized(a, &b)
    }

    /// Merge for inputs already known to be normalized.
    pub(crate) fn merge_normalized(
        &self,
        a: DescriptorVector,
        b: &DescriptorVector,
    ) -> Result<MergeOutcome, DescriptorError> {
        let n = a.n();
        let mut h = a.into_polys();
        let mut stats = MergeStats::default();
        let mut pending: BTreeMap<u32, AnfPoly> = BTreeMap::new();

        for t in (1..=n as u32).rev() {
            let i = t as usize - 1;
            let g = b.h(t as usize);
            if !g.is_var(t) && *g != h[i] {
                let pos = self.merge_position(t, &h[i], g, &mut stats)?;
                h[i] = pos.h;
                if !push_constraint(&mut pending, pos.conflict) {
                    return Ok(unsat(n, stats));
                }
            }
            if let Some(c) = pending.remove(&t) {
                stats.recursive_calls += 1;
                let c0 = c.restrict(t, false);
                let c1 = c.restrict(t, true);
                let one = AnfPoly::one();
                let free = &(&one + &c0) + &c1;
                let forced = &c0 * &(&one + &c1);
                let gstar = &(&AnfPoly::var(t) * &free) + &forced;
                let pos = self.merge_position(t, &h[i], &gstar, &mut stats)?;
                h[i] = pos.h;
                if !push_constraint(&mut pending, pos.conflict)
                    || !push_constraint(&mut pending, &c0 * &c1)
                {
                    return Ok(unsat(n, stats));
                }
            }
        }
        if self.substitute_constants {
            substitute_constants(&mut h);
        }
        Ok(MergeOutcome {
            descriptor: Descriptor::Sat(DescriptorVector::new(h).expect("merge keeps triangularity")),
            stats,
        })
    }

    fn merge_position(
        &self,
        t: u32,
        f: &AnfPoly,
        g: &AnfPoly,
        stats: &mut MergeStats,
    ) -> Result<Position, DescriptorError> {
        stats.position_merges += 1;
        if stats.position_merges > self.step_ceiling {
            return Err(DescriptorError::StepCeiling(self.step_ceiling));
        }
        stats.work += (f.len() * g.len()) as u64;
        if f.is_var(t) || f == g {
            return Ok(Position {
                h: g.clone(),
                conflict: AnfPoly::zero(),
            });
        }
        let mut vars = union_support(&[f, g]);
        if let Err(k) = vars.binary_search(&t) {
            vars.insert(k, t);
        }
        let pos = if !self.symbolic_only && vars.len() <= TABLE_VARS {
            merge_position_tables(t, f, g, &vars, self.dont_care)
        } else {
            merge_position_symbolic(t, f, g, self.dont_care)
        };
        if !pos.conflict.is_zero() {
            stats.conflicts += 1;
        }
        Ok(pos)
    }
}

fn unsat(n: usize, stats: MergeStats) -> MergeOutcome {
    MergeOutcome {
        descriptor: Descriptor::Unsat { n },
        stats,
    }
}

/// Files `c = 0` under its highest variable, OR-ing with what is already
/// there. Returns false when the constraint is the constant 1.
fn push_constraint(pending: &mut BTreeMap<u32, AnfPoly>, c: AnfPoly) -> bool {
    match c.highest_var() {
        None => c.is_zero(),
        Some(j) => {
            let slot = pending.entry(j).or_default();
            let both = &*slot * &c;
            *slot = &(&*slot + &c) + &both;
            true
        }
    }
}

/// The merge formula evaluated with polynomial arithmetic.
pub(crate) fn merge_position_symbolic(t: u32, f: &AnfPoly, g: &AnfPoly, dc: DontCare) -> Position {
    let f0 = f.restrict(t, false);
    let f1 = f.restrict(t, true);
    let g0 = g.restrict(t, false);
    let g1 = g.restrict(t, true);
    let s0 = &f0 + &g0;
    let s1 = &f1 + &g1;
    let p0 = &f0 * &g0;
    let p1 = &f1 * &g1;
    let at0 = &(&s0 * &p1) + &p0;
    let at1 = &(&(&s1 * &s0) + &(&s1 * &p0)) + &p1;
    let a = AnfPoly::var(t);
    let h = &at0 + &(&a * &(&at0 + &at1));
    let conflict = &s0 * &s1;
    if conflict.is_zero() || dc == DontCare::Formula {
        return Position { h, conflict };
    }
    let keep_f = &h + &(&conflict * &(&a + f));
    let keep_g = &h + &(&conflict * &(&a + g));
    Position {
        h: shortest([h, keep_f, keep_g]),
        conflict,
    }
}

/// The same formula evaluated pointwise on truth tables over `vars`.
pub(crate) fn merge_position_tables(
    t: u32,
    f: &AnfPoly,
    g: &AnfPoly,
    vars: &[u32],
    dc: DontCare,
) -> Position {
    let ft = TruthTable::from_poly(f, vars).expect("support covered");
    let gt = TruthTable::from_poly(g, vars).expect("support covered");
    let bit = 1usize << vars.binary_search(&t).expect("t in vars");
    let mut h = TruthTable::zeros(vars).expect("size checked");
    let mut keep_f = h.clone();
    let mut keep_g = h.clone();
    let mut conflict = h.clone();
    let mut any_conflict = false;
    for p in (0..ft.points()).filter(|p| p & bit == 0) {
        let q = p | bit;
        let (f0, f1, g0, g1) = (ft.get(p), ft.get(q), gt.get(p), gt.get(q));
        let (s0, s1) = (f0 ^ g0, f1 ^ g1);
        let h0 = (s0 & f1 & g1) ^ (f0 & g0);
        let h1 = (s1 & s0) ^ (s1 & f0 & g0) ^ (f1 & g1);
        let c = s0 & s1;
        h.set(p, h0);
        h.set(q, h1);
        if c {
            any_conflict = true;
            conflict.set(p, true);
            conflict.set(q, true);
            keep_f.set(p, f0);
            keep_f.set(q, f1);
            keep_g.set(p, g0);
            keep_g.set(q, g1);
        } else {
            keep_f.set(p, h0);
            keep_f.set(q, h1);
            keep_g.set(p, h0);
            keep_g.set(q, h1);
        }
    }
    let hp = h.to_poly();
    if !any_conflict {
        return Position {
            h: hp,
            conflict: AnfPoly::zero(),
        };
    }
    let conflict = conflict.to_poly();
    if dc == DontCare::Formula {
        return Position { h: hp, conflict };
    }
    Position {
        h: shortest([hp, keep_f.to_poly(), keep_g.to_poly()]),
        conflict,
    }
}

fn shortest(candidates: [AnfPoly; 3]) -> AnfPoly {
    let [a, b, c] = candidates;
    let mut best = a;
    for x in [b, c] {
        if x.len() < best.len() {
            best = x;
        }
    }
    best
}
