use std::io::Write;

use num_rational::Rational64;
use rayon::prelude::*;

use super::generator::{gen_exact_uniform, GenError, GenSpec};
use super::m_alpha_f64;
use crate::cnf::Problem;
use crate::oracle::{prefix_counts, OracleError};

/// How many lower variables one constraint call draws at index `x` when the
/// next trajectory index is taken as the expected maximum of the draws.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrajectoryDraws {
    /// `2 m_α(x)`, the expected size of `V(x)`.
    ExpectedSupport,
    /// `4 m_α(x)`: the support of both merged sides.
    #[default]
    TwiceExpectedSupport,
}

impl TrajectoryDraws {
    fn count(self, m_alpha: f64) -> f64 {
        match self {
            TrajectoryDraws::ExpectedSupport => 2.0 * m_alpha,
            TrajectoryDraws::TwiceExpectedSupport => 4.0 * m_alpha,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub k: usize,
    /// `n^(k)`.
    pub index: f64,
    /// `M_α(n^(k)) = 2 Σ_{j≤k} m_α(n^(j)) − (k − 1)`.
    pub m_sum: f64,
    /// `min(M_α(n^(k)), n^(k))`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryCurve {
    pub n: usize,
    pub alpha: f64,
    pub draws: TrajectoryDraws,
    pub points: Vec<TrajectoryPoint>,
}

impl TrajectoryCurve {
    /// Point with the largest `M_α`; the earliest one on ties.
    pub fn peak(&self) -> Option<&TrajectoryPoint> {
        self.points
            .iter()
            .fold(None, |best: Option<&TrajectoryPoint>, p| match best {
                Some(b) if b.m_sum >= p.m_sum => Some(b),
                _ => Some(p),
            })
    }

    pub fn m_sum_curve(&self) -> AnalyticCurve {
        self.project(|p| p.m_sum)
    }

    pub fn bound_curve(&self) -> AnalyticCurve {
        self.project(|p| p.bound)
    }

    pub fn index_curve(&self) -> AnalyticCurve {
        self.project(|p| p.index)
    }

    fn project(&self, f: impl Fn(&TrajectoryPoint) -> f64) -> AnalyticCurve {
        AnalyticCurve {
            n: self.n,
            alpha: self.alpha,
            points: self.points.iter().map(|p| CurvePoint::new(p.k as f64, f(p))).collect(),
        }
    }
}

/// Follows `n^(k) = d/(d+1) · (n^(k−1) − 1)` from `n^(0) = start`, where `d`
/// is the draw count at `n^(k−1)`, while `n^(k) ≥ 3`.
pub fn m_alpha_curve(n: usize, alpha: f64, start: usize, draws: TrajectoryDraws) -> TrajectoryCurve {
    let mut points = Vec::new();
    let mut x = start.min(n) as f64;
    let mut sum = 0.0;
    let mut k = 0;
    while x >= 3.0 {
        let m = m_alpha_f64(x, n, alpha);
        sum += m;
        let m_sum = 2.0 * sum - (k as f64 - 1.0);
        points.push(TrajectoryPoint {
            k,
            index: x,
            m_sum,
            bound: m_sum.min(x),
        });
        let d = draws.count(m);
        x = d / (d + 1.0) * (x - 1.0);
        k += 1;
    }
    TrajectoryCurve {
        n,
        alpha,
        draws,
        points,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub value: f64,
    pub observed: Option<f64>,
    pub stderr: Option<f64>,
}

impl CurvePoint {
    pub fn new(x: f64, value: f64) -> Self {
        CurvePoint {
            x,
            value,
            observed: None,
            stderr: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticCurve {
    pub n: usize,
    pub alpha: f64,
    /// Strictly increasing in `x`.
    pub points: Vec<CurvePoint>,
}

impl AnalyticCurve {
    /// `m_α(i)` for `i = 3..=n`.
    pub fn m_alpha_profile(n: usize, alpha: f64) -> Self {
        AnalyticCurve {
            n,
            alpha,
            points: (3..=n)
                .map(|i| CurvePoint::new(i as f64, m_alpha_f64(i as f64, n, alpha)))
                .collect(),
        }
    }
}

/// Writes `x,value`, plus `observed,stderr` when any point carries them.
pub fn write_curve_csv<W: Write>(curve: &AnalyticCurve, w: W) -> csv::Result<()> {
    let extended = curve.points.iter().any(|p| p.observed.is_some() || p.stderr.is_some());
    let mut out = csv::Writer::from_writer(w);
    if extended {
        out.write_record(["x", "value", "observed", "stderr"])?;
    } else {
        out.write_record(["x", "value"])?;
    }
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for p in &curve.points {
        if extended {
            out.write_record([p.x.to_string(), p.value.to_string(), opt(p.observed), opt(p.stderr)])?;
        } else {
            out.write_record([p.x.to_string(), p.value.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `m_α(i)` against the mean number of clauses whose highest variable is
/// `x_i` over `samples` generated instances (seeds `seed..seed+samples`).
pub fn observed_m_alpha(
    n: usize,
    alpha: Rational64,
    samples: usize,
    seed: u64,
) -> Result<AnalyticCurve, GenError> {
    let counts: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let p = gen_exact_uniform(&GenSpec {
                n,
                alpha,
                seed: seed.wrapping_add(s),
            })?;
            let mut c = vec![0.0; n + 1];
            for cl in p.clauses() {
                c[cl.max_var() as usize] += 1.0;
            }
            Ok(c)
        })
        .collect::<Result<_, GenError>>()?;
    let a = *alpha.numer() as f64 / *alpha.denom() as f64;
    let k = samples as f64;
    let points = (3..=n)
        .map(|i| {
            let mean = counts.iter().map(|c| c[i]).sum::<f64>() / k;
            let var = if samples > 1 {
                counts.iter().map(|c| (c[i] - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            CurvePoint {
                x: i as f64,
                value: m_alpha_f64(i as f64, n, a),
                observed: Some(mean),
                stderr: Some((var / k).sqrt()),
            }
        })
        .collect();
    Ok(AnalyticCurve { n, alpha: a, points })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayStep {
    /// 1-based clause count of the prefix.
    pub step: usize,
    /// Distinct variables in the prefix.
    pub seen: usize,
    /// Variables first introduced by this clause.
    pub new_vars: usize,
    /// Models of the prefix over its own variables.
    pub observed: u64,
    /// `2^seen · (7/8)^step`.
    pub theoretical: f64,
    pub lower: u64,
    pub upper: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayCurve {
    pub n: usize,
    pub steps: Vec<DecayStep>,
}

impl DecayCurve {
    /// `x` is the step, `value` the theoretical count, `observed` the model
    /// count.
    pub fn to_curve(&self, alpha: f64) -> AnalyticCurve {
        AnalyticCurve {
            n: self.n,
            alpha,
            points: self
                .steps
                .iter()
                .map(|s| CurvePoint {
                    observed: Some(s.observed as f64),
                    ..CurvePoint::new(s.step as f64, s.theoretical)
                })
                .collect(),
        }
    }
}

/// Model count after each clause prefix, over the variables seen so far,
/// with the expected value and interval bounds that hold for any signs.
///
/// A clause bringing `k` new variables onto `s` seen ones multiplies the
/// space by `2^k` and removes between 0 and `2^(s+k−3)` of its points; with
/// `k = 3` it removes exactly one eighth.
pub fn solution_decay_curve(p: &Problem) -> Result<DecayCurve, OracleError> {
    let counts = prefix_counts(p)?;
    let mut seen_vars = vec![false; p.n() + 1];
    let (mut seen, mut lower, mut upper) = (0usize, 1u64, 1u64);
    let mut steps = Vec::with_capacity(p.m());
    for (j, (c, &count)) in p.clauses().iter().zip(&counts).enumerate() {
        let mut k = 0;
        for l in c.lits() {
            if !seen_vars[l.var as usize] {
                seen_vars[l.var as usize] = true;
                k += 1;
            }
        }
        if k == 3 {
            lower *= 7;
            upper *= 7;
        } else {
            lower = (lower << k).saturating_sub(1u64 << (seen + k - 3));
            upper <<= k;
        }
        seen += k;
        let step = j + 1;
        steps.push(DecayStep {
            step,
            seen,
            new_vars: k,
            observed: count >> (p.n() - seen),
            theoretical: 2f64.powi(seen as i32) * (7.0f64 / 8.0).powi(step as i32),
            lower,
            upper,
        });
    }
    Ok(DecayCurve { n: p.n(), steps })
}
