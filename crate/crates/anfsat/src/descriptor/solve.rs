//! Clause-by-clause solving with per-step instrumentation.

use std::io::Write;

use crate::cnf::{Clause, Problem};

use super::merge::{MergeStats, Merger};
use super::{clause_descriptor, Descriptor, DescriptorError, DescriptorVector};

/// Snapshot after merging one clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    /// 1-based clause position.
    pub step: usize,
    pub clause: Clause,
    /// `(t, len(h_t))` for every position that is not the identity.
    pub lens: Vec<(usize, usize)>,
    /// `max_t len(h_t)`, 0 once unsatisfiable.
    pub max_len: usize,
    /// Number of solutions of the clauses merged so far, when computed.
    pub models: Option<u64>,
    pub stats: MergeStats,
    pub unsat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Sat(DescriptorVector),
    /// Unsatisfiable, detected while merging clause `step` (1-based).
    Unsat { step: usize },
}

impl Decision {
    pub fn is_sat(&self) -> bool {
        matches!(self, Decision::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub decision: Decision,
    pub trace: Vec<TraceRecord>,
    pub stats: MergeStats,
}

impl SolveOutcome {
    /// Largest `len(h_t)` seen at any step.
    pub fn max_len(&self) -> usize {
        self.trace.iter().map(|r| r.max_len).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub merger: Merger,
    /// Solution counts are recorded per step when `n` is at most this.
    pub count_cutoff: usize,
}

/// Merges the clause descriptors in clause order, starting from the
/// identity descriptor, and stops at the first unsatisfiable step.
pub fn solve(p: &Problem, opts: &SolveOptions) -> Result<SolveOutcome, DescriptorError> {
    let n = p.n();
    let mut d = DescriptorVector::identity(n);
    let mut trace = Vec::with_capacity(p.m());
    let mut total = MergeStats::default();
    let counting = n <= opts.count_cutoff;
    for (i, c) in p.clauses().iter().enumerate() {
        let step = i + 1;
        let cd = clause_descriptor(c, n)?;
        let out = opts.merger.merge_normalized(d, &cd)?;
        total.absorb(&out.stats);
        match out.descriptor {
            Descriptor::Unsat { .. } => {
                trace.push(TraceRecord {
                    step,
                    clause: *c,
                    lens: Vec::new(),
                    max_len: 0,
                    models: counting.then_some(0),
                    stats: out.stats,
                    unsat: true,
                });
                return Ok(SolveOutcome {
                    decision: Decision::Unsat { step },
                    trace,
                    stats: total,
                });
            }
            Descriptor::Sat(next) => {
                let lens = next
                    .polys()
                    .iter()
                    .enumerate()
                    .filter(|(k, h)| !h.is_var(*k as u32 + 1))
                    .map(|(k, h)| (k + 1, h.len()))
                    .collect();
                let models = if counting {
                    Some(next.count_models()?)
                } else {
                    None
                };
                trace.push(TraceRecord {
                    step,
                    clause: *c,
                    lens,
                    max_len: next.max_len(),
                    models,
                    stats: out.stats,
                    unsat: false,
                });
                d = next;
            }
        }
    }
    Ok(SolveOutcome {
        decision: Decision::Sat(d),
        trace,
        stats: total,
    })
}

/// Writes `step,clause,t,len,max_len,models`: one row per non-identity
/// position of each step, then a summary row for the step with `t` and
/// `len` left empty. The clause column holds its DIMACS literals.
pub fn write_trace_csv<W: Write>(records: &[TraceRecord], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["step", "clause", "t", "len", "max_len", "models"])?;
    for r in records {
        let step = r.step.to_string();
        let clause = r.clause.to_string();
        let max_len = r.max_len.to_string();
        let models = r.models.map(|m| m.to_string()).unwrap_or_default();
        for &(t, len) in &r.lens {
            out.write_record([
                step.as_str(),
                clause.as_str(),
                &t.to_string(),
                &len.to_string(),
                max_len.as_str(),
                models.as_str(),
            ])?;
        }
        out.write_record([step.as_str(), clause.as_str(), "", "", max_len.as_str(), models.as_str()])?;
    }
    out.flush()?;
    Ok(())
}

/// Operation-count estimate `m · n² · max_len`.
pub fn complexity_estimate(m: usize, n: usize, max_len: usize) -> u128 {
    m as u128 * (n as u128).pow(2) * max_len as u128
}
