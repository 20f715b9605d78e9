use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anfsat::descriptor::{solve as run_solver, write_trace_csv, Decision, DescriptorError, SolveOptions};
use anfsat::dimacs::{emit_dimacs, parse_dimacs, DimacsDocument, DimacsError};
use anfsat::oracle::{brute_force, OracleError};
use anfsat::preprocess::{
    apply_model_back, permute_trajectories, sort_problem, write_var_map, PreprocessError,
};
use anfsat::randmodel::{
    corrected_threshold, expected_solutions_crossing, expected_solutions_log2, feasible_alpha,
    gen_exact_uniform, m_alpha_curve, observed_m_alpha, solution_decay_curve, threshold_exact,
    write_curve_csv, AnalyticCurve, CurvePoint, GenError, GenSpec, TrajectoryDraws,
    LITERATURE_USUAL_THRESHOLD,
};
use anfsat::Problem;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::{
    AnalyzeArgs, CheckArgs, Draws, GenArgs, Preprocess, SolveArgs, TraceArgs, EXIT_SAT, EXIT_UNSAT,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Dimacs { path: PathBuf, source: DimacsError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error("writing {path}: {message}")]
    Write { path: PathBuf, message: String },
    #[error("{0} disagreements with brute force")]
    CheckFailed(usize),
    #[error("witness does not satisfy the input problem")]
    BadWitness,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_err<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Write {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn read_problem(path: &Path) -> Result<Problem, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_dimacs(&text)
        .map(|d| d.problem)
        .map_err(|source| CliError::Dimacs {
            path: path.to_path_buf(),
            source,
        })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

/// Parses `P/Q`, an integer, or a finite decimal into an exact ratio.
pub fn parse_ratio(s: &str) -> Result<Rational64, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a ratio (use P/Q, an integer or a decimal)"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: i64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(Rational64::new(digits, 10i64.pow(frac.len() as u32)))
}

fn transform(p: &Problem, how: Preprocess) -> Problem {
    match how {
        Preprocess::None => p.clone(),
        Preprocess::Sort => sort_problem(p),
        Preprocess::SortPermute => permute_trajectories(&sort_problem(p)),
    }
}

fn preprocess_name(how: Preprocess) -> &'static str {
    match how {
        Preprocess::None => "none",
        Preprocess::Sort => "sort",
        Preprocess::SortPermute => "sort+permute",
    }
}

#[derive(Debug, Serialize)]
struct RunReport {
    decision: &'static str,
    n: usize,
    m: usize,
    preprocess: &'static str,
    /// DIMACS literals of the witness, in the input's variables.
    witness: Option<Vec<i32>>,
    /// Clause (1-based, in solving order) at which unsatisfiability showed.
    unsat_step: Option<usize>,
    max_len: usize,
    trace: Option<PathBuf>,
    wall_ms: f64,
}

fn literals(model: &[bool]) -> Vec<i32> {
    model
        .iter()
        .enumerate()
        .map(|(i, &b)| if b { i as i32 + 1 } else { -(i as i32 + 1) })
        .collect()
}

pub fn solve(a: &SolveArgs) -> Result<u8, CliError> {
    let p = read_problem(&a.input)?;
    let q = transform(&p, a.preprocess);
    if let Some(path) = &a.emit_transformed {
        let doc = DimacsDocument {
            comments: vec![format!("preprocessed with {}", preprocess_name(a.preprocess))],
            problem: q.detached(),
        };
        write_text(path, &emit_dimacs(&doc))?;
        let mut sidecar = path.clone().into_os_string();
        sidecar.push(".var_map");
        write_text(Path::new(&sidecar), &write_var_map(&q))?;
    }

    let start = Instant::now();
    let opts = SolveOptions {
        count_cutoff: a.count_cutoff,
        ..SolveOptions::default()
    };
    let out = run_solver(&q, &opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &a.trace {
        write_trace_csv(&out.trace, create(path)?).map_err(write_err(path))?;
    }
    let (witness, unsat_step) = match &out.decision {
        Decision::Sat(d) => {
            let model = apply_model_back(&q, &d.witness())?;
            if !p.is_satisfied_by(&model) {
                return Err(CliError::BadWitness);
            }
            (Some(model), None)
        }
        Decision::Unsat { step } => (None, Some(*step)),
    };
    let sat = witness.is_some();
    let report = RunReport {
        decision: if sat { "SAT" } else { "UNSAT" },
        n: p.n(),
        m: p.m(),
        preprocess: preprocess_name(a.preprocess),
        witness: witness.as_deref().filter(|_| a.witness).map(literals),
        unsat_step,
        max_len: out.max_len(),
        trace: a.trace.clone(),
        wall_ms,
    };
    if a.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        println!("{text}");
    } else {
        println!("c anfsat n={} m={} preprocess={}", report.n, report.m, report.preprocess);
        println!("c max_len {}", report.max_len);
        if let Some(step) = report.unsat_step {
            println!("c unsat_step {step}");
        }
        if let Some(t) = &report.trace {
            println!("c trace {}", t.display());
        }
        println!("c wall_ms {:.3}", report.wall_ms);
        println!("s {}", if sat { "SATISFIABLE" } else { "UNSATISFIABLE" });
        if let Some(lits) = &report.witness {
            let body: Vec<String> = lits.iter().map(i32::to_string).collect();
            println!("v {} 0", body.join(" "));
        }
    }
    Ok(if sat { EXIT_SAT } else { EXIT_UNSAT })
}

pub fn gen(a: &GenArgs) -> Result<u8, CliError> {
    let alpha = parse_ratio(&a.alpha)?;
    let spec = GenSpec {
        n: a.n,
        alpha,
        seed: a.seed,
    };
    let problem = gen_exact_uniform(&spec)?;
    let doc = DimacsDocument {
        comments: vec![
            "exact-uniform random 3-CNF".to_string(),
            format!("n = {} alpha = {} seed = {}", a.n, alpha, a.seed),
        ],
        problem,
    };
    write_text(&a.out, &emit_dimacs(&doc))?;
    println!("c wrote {} (n={}, m={})", a.out.display(), doc.problem.n(), doc.problem.m());
    Ok(EXIT_SAT)
}

fn write_curve(dir: &Path, name: &str, curve: &AnalyticCurve) -> Result<(), CliError> {
    let path = dir.join(name);
    write_curve_csv(curve, create(&path)?).map_err(write_err(&path))
}

pub fn analyze(a: &AnalyzeArgs) -> Result<u8, CliError> {
    if a.n < 3 {
        return Err(CliError::Usage(format!("--n must be at least 3, got {}", a.n)));
    }
    if !(a.alpha.is_finite() && a.alpha > 0.0) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {}", a.alpha)));
    }
    let start = a.start.unwrap_or(a.n);
    if start > a.n {
        return Err(CliError::Usage(format!("--start {start} exceeds --n {}", a.n)));
    }
    let dir = &a.out_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let profile = if a.samples > 0 {
        observed_m_alpha(a.n, feasible_alpha(a.n, a.alpha), a.samples, a.seed)?
    } else {
        AnalyticCurve::m_alpha_profile(a.n, a.alpha)
    };
    write_curve(dir, "m_alpha.csv", &profile)?;

    let draws = match a.draws {
        Draws::ExpectedSupport => TrajectoryDraws::ExpectedSupport,
        Draws::TwiceExpectedSupport => TrajectoryDraws::TwiceExpectedSupport,
    };
    let curve = m_alpha_curve(a.n, a.alpha, start, draws);
    write_curve(dir, "m_alpha_curve.csv", &curve.m_sum_curve())?;
    write_curve(dir, "m_alpha_bound.csv", &curve.bound_curve())?;
    write_curve(dir, "trajectory.csv", &curve.index_curve())?;

    // log2 E[#S] along m = r·n for ratios r = 0.05, 0.10, .., 8.00.
    let points = (1..=160)
        .map(|i| {
            let m = ((i as f64 * 0.05) * a.n as f64).round() as usize;
            (m, m as f64 / a.n as f64)
        })
        .filter(|&(m, _)| m >= 1)
        .fold(Vec::<CurvePoint>::new(), |mut acc, (m, r)| {
            if acc.last().is_none_or(|p| p.x < r) {
                acc.push(CurvePoint::new(r, expected_solutions_log2(a.n, m)));
            }
            acc
        });
    let expected = AnalyticCurve {
        n: a.n,
        alpha: a.alpha,
        points,
    };
    write_curve(dir, "expected_solutions_log2.csv", &expected)?;

    let exact = threshold_exact();
    let thresholds = format!(
        "x,value\nthreshold_exact,{exact}\ncorrected_threshold,{}\nliterature_usual_threshold,{}\nexpected_solutions_crossing,{}\n",
        corrected_threshold(exact),
        LITERATURE_USUAL_THRESHOLD,
        expected_solutions_crossing(a.n),
    );
    write_text(&dir.join("thresholds.csv"), &thresholds)?;

    if let Some(peak) = curve.peak() {
        println!("c peak M_alpha {:.1} at k={} (n^(k) = {:.1})", peak.m_sum, peak.k, peak.index);
    }
    println!("c threshold_exact {exact:.8}");
    println!("c wrote {}", dir.display());
    Ok(EXIT_SAT)
}

pub fn trace(a: &TraceArgs) -> Result<u8, CliError> {
    let p = read_problem(&a.input)?;
    let decay = solution_decay_curve(&p)?;
    let alpha = if p.n() == 0 { 0.0 } else { p.m() as f64 / p.n() as f64 };
    write_curve_csv(&decay.to_curve(alpha), create(&a.out)?).map_err(write_err(&a.out))?;
    println!("c wrote {} ({} steps)", a.out.display(), decay.steps.len());
    Ok(EXIT_SAT)
}

/// Outcome of one checked instance: `Some(description)` on disagreement.
fn check_one(spec: &GenSpec, how: Preprocess) -> Result<(bool, Option<String>), CliError> {
    let p = gen_exact_uniform(spec)?;
    let truth = brute_force(&p)?;
    let q = transform(&p, how);
    let out = run_solver(&q, &SolveOptions::default())?;
    let fail = |what: &str| Ok((truth.satisfiable, Some(format!("seed {}: {what}", spec.seed))));
    if out.decision.is_sat() != truth.satisfiable {
        return fail("decision differs");
    }
    if let Decision::Sat(d) = &out.decision {
        let model = apply_model_back(&q, &d.witness())?;
        if !p.is_satisfied_by(&model) {
            return fail("witness fails");
        }
        if p.n() <= 20 && d.count_models()? != truth.count {
            return fail("model count differs");
        }
    }
    Ok((truth.satisfiable, None))
}

pub fn check(a: &CheckArgs) -> Result<u8, CliError> {
    let alpha = feasible_alpha(a.n, a.alpha);
    let results: Vec<(bool, Option<String>)> = (0..a.count as u64)
        .into_par_iter()
        .map(|i| {
            let spec = GenSpec {
                n: a.n,
                alpha,
                seed: a.seed.wrapping_add(i),
            };
            check_one(&spec, a.preprocess)
        })
        .collect::<Result<_, _>>()?;
    let sat = results.iter().filter(|r| r.0).count();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    for f in &failures {
        println!("c disagreement {f}");
    }
    println!(
        "c checked {} instances (n={}, alpha={}, {} sat), {} disagreements",
        a.count,
        a.n,
        alpha,
        sat,
        failures.len()
    );
    if failures.is_empty() {
        Ok(EXIT_SAT)
    } else {
        Err(CliError::CheckFailed(failures.len()))
    }
}
