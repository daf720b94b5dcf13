//! Subcommand execution. Every subcommand yields a JSON-ready result and a
//! list of named checks; the caller turns failed checks into exit code 1.

use std::cmp::Ordering;
use std::fmt::Display;

use bcfmop::alpha::AlphaSequence;
use bcfmop::bcf::{bcf_coefficients, positivity_certificate, verify_euler_gauss, HypergeometricParams};
use bcfmop::exact::{int, parse_rational, parse_rational_list, to_f64, RatMatrix, Rational};
use bcfmop::lattice::{weight_sums_from, DEFAULT_CAP};
use bcfmop::mop::{
    constant_case_params, derivative_shift_check, jacobi_pineiro_params, ode_check, orthogonality_report, polys_explicit,
    polys_via_recurrence, recurrence_coeffs,
};
use bcfmop::production::{output_matrix, production_bidiagonal, production_closed_form};
use bcfmop::sampling::random_alphas;
use bcfmop::sr::{sr_dp, verify_factorization, SrKind};
use bcfmop::suite::{run_suite, CheckOutcome, Status, SuiteOptions};
use bcfmop::tp::{is_oscillation, is_totally_positive, is_totally_positive_neville, tp_report, TpVerdict};
use bcfmop::zeros::asymptotics::{mehler_heine_check, recurrence_limit_report, zero_distribution_check};
use bcfmop::zeros::{charpoly_hessenberg, hessenberg_zeros, ZeroSet};
use bcfmop::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters: exit 2.
    Usage(String),
    /// A computation that could not be completed: exit 1.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Pole { .. }
            | Error::CapExceeded { .. }
            | Error::SizeExceeded { .. }
            | Error::InvalidRegime { .. }
            | Error::WindowViolation { .. }
            | Error::InvalidParams(_) => CliError::Usage(err.to_string()),
            _ => CliError::Failed(err.to_string()),
        }
    }
}

fn usage(msg: impl Display) -> CliError {
    CliError::Usage(msg.to_string())
}

pub struct JobOutput {
    pub result: Value,
    pub checks: Vec<CheckOutcome>,
    /// Rows for `--format csv`, header first.
    pub table: Option<Vec<Vec<String>>>,
}

impl JobOutput {
    fn new(result: Value) -> Self {
        Self { result, checks: Vec::new(), table: None }
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub config: &'a JobConfig,
    pub result: &'a Value,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub checks: &'a [CheckOutcome],
}

fn check(name: &str, outcome: Result<(), String>) -> CheckOutcome {
    CheckOutcome {
        check: name.to_string(),
        status: if outcome.is_ok() { Status::Pass } else { Status::Fail },
        witness: outcome.err(),
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn parse_list(values: &[String]) -> Result<Vec<Rational>, CliError> {
    parse_rational_list(&values.join(",")).map_err(|e| usage(e))
}

pub fn build_alphas(args: &AlphaArgs) -> Result<AlphaSequence, CliError> {
    if args.m == 0 {
        return Err(usage("--m must be positive"));
    }
    if !args.alphas.is_empty() {
        return Ok(AlphaSequence::from_values(args.m, parse_list(&args.alphas)?));
    }
    Ok(match args.alpha {
        AlphaPreset::Ones => AlphaSequence::constant(args.m, int(1)),
        AlphaPreset::Catalan if args.m != 1 => return Err(usage("the catalan preset needs --m 1")),
        AlphaPreset::Catalan => AlphaSequence::constant(1, int(1)),
        AlphaPreset::ConstantR => constant_case_params(args.m).alpha_sequence(),
        AlphaPreset::Random => random_alphas(args.m, args.seed),
    })
}

pub fn build_params(args: &ParamArgs) -> Result<HypergeometricParams, CliError> {
    let params = match args.preset {
        Some(ParamPreset::ConstantR1) => constant_case_params(1),
        Some(ParamPreset::ConstantR2) => constant_case_params(2),
        Some(ParamPreset::ConstantR3) => constant_case_params(3),
        Some(ParamPreset::JpR2) => jacobi_pineiro_params(&[parse_rational("1/2")?, parse_rational("3/4")?])?,
        None => {
            let (Some(r), Some(s)) = (args.r, args.s) else {
                return Err(usage("give --r and --s, or a --preset"));
            };
            let a = parse_list(&args.a)?;
            let b = parse_list(&args.b)?;
            if b.len() != s {
                return Err(usage(format!("--b needs {s} values, got {}", b.len())));
            }
            if a.len() == r {
                HypergeometricParams::with_unit_last(r, s, args.lambda.clone(), a, b)?
            } else if a.len() == r + 1 {
                HypergeometricParams::new(r, s, args.lambda.clone(), a, b)?
            } else {
                return Err(usage(format!("--a needs {r} or {} values, got {}", r + 1, a.len())));
            }
        }
    };
    Ok(if args.plain_first { params.plain_first() } else { params })
}

pub fn execute(job: &JobConfig) -> Result<JobOutput, CliError> {
    match &job.command {
        Command::Srpoly(args) => srpoly(args),
        Command::Prodmat(args) => prodmat(args),
        Command::Bcf(args) => bcf(args),
        Command::Mop(args) => mop(args),
        Command::Zeros(args) => zeros(args),
        Command::Tp(args) => tp(args),
        Command::Verify(args) => verify(args),
        Command::Replay(_) => Err(usage("replay cannot be nested")),
    }
}

fn require_size(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(usage("--n must be positive"))
    } else {
        Ok(())
    }
}

fn srpoly(args: &SrpolyArgs) -> Result<JobOutput, CliError> {
    require_size(args.n)?;
    let m = args.alpha.m;
    let alphas = build_alphas(&args.alpha)?;
    let tables = sr_dp(m, &alphas, args.n)?;
    if args.j > m {
        return Err(usage(format!("--j must be at most m = {m}")));
    }
    let matrices = match args.kind {
        Some(SrKindArg::Generalized) => vec![tables.generalized()],
        Some(SrKindArg::Modified) => vec![tables.modified()],
        Some(SrKindArg::TypeJ) => vec![tables.type_j(args.j)],
        None => vec![tables.generalized(), tables.type_j(args.j), tables.modified()],
    };
    let mut table = vec![["kind", "j", "row", "column", "value"].map(String::from).to_vec()];
    for sr in &matrices {
        let (kind, j) = match sr.kind {
            SrKind::Generalized => ("generalized".to_string(), 0),
            SrKind::TypeJ(j) => ("type-j".to_string(), j),
            SrKind::Modified => ("modified".to_string(), 0),
        };
        for (i, row) in sr.entries.to_rows().into_iter().enumerate() {
            for (col, value) in row.into_iter().enumerate() {
                table.push(vec![kind.clone(), j.to_string(), i.to_string(), col.to_string(), value.to_string()]);
            }
        }
    }
    let result = match matrices.as_slice() {
        [single] => to_value(single),
        _ => Value::Array(matrices.iter().map(to_value).collect()),
    };
    let mut out = JobOutput::new(result);
    out.table = Some(table);
    if args.verify {
        let report = verify_factorization(m, &alphas, args.n)?;
        out.checks.push(check("factorization", if report.holds { Ok(()) } else { Err(format!("{:?}", report.first_mismatch)) }));
        let len = ((m + 1) * (args.n - 1)).min(DEFAULT_CAP);
        let sums = weight_sums_from(m, (0, 0), len, &alphas, DEFAULT_CAP)?;
        let mismatch = (0..=len)
            .flat_map(|x| (0..=x).map(move |h| (x, h)))
            .find(|&(x, h)| sums.get(&(x, h)).cloned().unwrap_or_default() != tables.paths_to(x, h));
        out.checks.push(check("lattice-oracle", mismatch.map_or(Ok(()), |e| Err(format!("endpoint {e:?}")))));
    }
    Ok(out)
}

fn prodmat(args: &ProdmatArgs) -> Result<JobOutput, CliError> {
    require_size(args.n)?;
    let m = args.alpha.m;
    let alphas = build_alphas(&args.alpha)?;
    let closed = production_closed_form(m, &alphas, args.n)?;
    let h = match args.form {
        ProductionForm::ClosedForm => closed.clone(),
        ProductionForm::Bidiagonal => production_bidiagonal(m, &alphas, args.n)?,
    };
    let bands: Vec<Vec<String>> = (0..=m).map(|k| rationals(h.diagonal(k))).collect();
    let mut result = json!({ "m": m, "n": args.n, "bands": bands, "matrix": h.to_dense() });
    if args.output {
        result["output"] = to_value(output_matrix(&h, args.n));
    }
    let mut out = JobOutput::new(result);
    if args.verify {
        let bidiagonal = production_bidiagonal(m, &alphas, args.n)?;
        out.checks.push(check("bidiagonal", if closed == bidiagonal { Ok(()) } else { Err("closed form differs".into()) }));
        let s = sr_dp(m, &alphas, args.n)?.generalized().entries;
        let diff = output_matrix(&closed, args.n).max_abs_diff(&s);
        out.checks.push(check("output-matrix", if diff == Rational::default() { Ok(()) } else { Err(format!("max entry difference {diff}")) }));
    }
    Ok(out)
}

fn bcf(args: &BcfArgs) -> Result<JobOutput, CliError> {
    let p = build_params(&args.params)?;
    let alpha = bcf_coefficients(&p, args.count)?;
    let positivity = positivity_certificate(&p).ok();
    let mut out = JobOutput::new(json!({
        "params": p,
        "first_index": p.m(),
        "alpha": rationals(&alpha),
        "positivity": positivity,
    }));
    if args.verify || args.action == Some(BcfAction::Verify) {
        let report = verify_euler_gauss(&p, args.max_k, args.order)?;
        let witness = report.first_failure.map(|(k, power)| format!("k={k}, coefficient of t^{power}"));
        out.checks.push(check("euler-gauss", witness.map_or(Ok(()), Err)));
    }
    Ok(out)
}

fn mop(args: &MopArgs) -> Result<JobOutput, CliError> {
    let p = build_params(&args.params)?;
    let n = args.n;
    let rc = recurrence_coeffs(&p, n)?;
    let polys = polys_via_recurrence(&rc, n);
    let explicit = polys_explicit(&p, n)?;
    let mut out = JobOutput::new(json!({ "params": p, "recurrence": rc, "polys": polys }));

    let h = production_closed_form(p.m(), &p.alpha_sequence(), n)?.to_dense();
    let cross = (0..=n).find(|&d| polys.get(d) != explicit.get(d) || &charpoly_hessenberg(&h.truncate(d, d)) != explicit.get(d));
    out.checks.push(check("cross-construction", cross.map_or(Ok(()), |d| Err(format!("degree {d}")))));

    let wants = |c: MopCheck| args.check == c || args.check == MopCheck::All;
    if wants(MopCheck::Ortho) {
        let report = orthogonality_report(&p, &explicit, n)?;
        let witness = report.failures.first().map(|(d, ell, k)| format!("n={d}, ℓ={ell}, k={k}"));
        out.checks.push(check("orthogonality", witness.map_or(Ok(()), Err)));
    }
    if wants(MopCheck::Ode) {
        let ode = (0..=n).map(|d| ode_check(&p, d).map(|ok| (d, ok))).collect::<Result<Vec<_>, _>>()?;
        let bad = ode.iter().find(|(_, ok)| !ok).map(|(d, _)| format!("n={d}"));
        out.checks.push(check("ode", bad.map_or(Ok(()), Err)));
        let shift = (0..=n).map(|d| derivative_shift_check(&p, d).map(|ok| (d, ok))).collect::<Result<Vec<_>, _>>()?;
        let bad = shift.iter().find(|(_, ok)| !ok).map(|(d, _)| format!("n={d}"));
        out.checks.push(check("derivative-shift", bad.map_or(Ok(()), Err)));
    }
    if wants(MopCheck::Dual) {
        let t = explicit.coefficient_matrix();
        let s = sr_dp(p.m(), &p.alpha_sequence(), n + 1)?.generalized().entries;
        let identity = RatMatrix::identity(n + 1);
        let diff = (&t * &s).max_abs_diff(&identity);
        out.checks.push(check("duality", if diff == Rational::default() { Ok(()) } else { Err(format!("T·S - I has entry {diff}")) }));
    }
    Ok(out)
}

fn zero_checks(p: &HypergeometricParams, set: &ZeroSet, n: usize) -> Vec<CheckOutcome> {
    let zero = Rational::default();
    let mut checks = vec![check("real-simple", if set.len() == n { Ok(()) } else { Err(format!("{} real zeros of {n}", set.len())) })];
    let positive = set.is_empty() || set.compare_root(0, &zero) == Ordering::Greater;
    checks.push(check("positive", if positive { Ok(()) } else { Err(format!("smallest zero near {}", set.midpoints[0])) }));
    if p.r == p.s {
        let inside = set.all_within(&zero, &int(1));
        checks.push(check("unit-interval", if inside { Ok(()) } else { Err("a zero lies outside (0,1)".into()) }));
    }
    checks
}

fn zeros(args: &ZerosArgs) -> Result<JobOutput, CliError> {
    require_size(args.n)?;
    let p = build_params(&args.params)?;
    let tol = parse_rational(&args.tol)?;
    if tol <= Rational::default() {
        return Err(usage("--tol must be positive"));
    }
    let h = production_closed_form(p.m(), &p.alpha_sequence(), args.n)?.to_dense();
    let set = hessenberg_zeros(&h, &tol)?;
    let mut result = json!({ "params": p, "n": args.n, "zeros": set });
    let mut checks = Vec::new();
    if positivity_certificate(&p).is_ok_and(|c| c.is_positive()) {
        checks.extend(zero_checks(&p, &set, args.n));
    }
    if let Some(tolerance) = args.dist {
        let report = zero_distribution_check(&p, args.n, tolerance)?;
        let witness = format!("KS distance {} exceeds {tolerance}", report.ks);
        checks.push(check("zero-distribution", if report.passed { Ok(()) } else { Err(witness) }));
        result["distribution"] = to_value(report);
    }
    if let Some(z) = &args.mh {
        let report = mehler_heine_check(&p, &parse_rational(z)?, &args.mh_degrees)?;
        checks.push(check("mehler-heine", if report.decreasing { Ok(()) } else { Err("errors do not decrease".into()) }));
        result["mehler_heine"] = to_value(report);
    }
    if args.limits {
        let rc = recurrence_coeffs(&p, args.n + 1)?;
        result["limits"] = to_value(recurrence_limit_report(&p, &rc, args.n)?);
    }
    let mut table = vec![vec!["index".into(), "lower".into(), "upper".into(), "midpoint".into()]];
    for (i, ((lo, hi), mid)) in set.intervals.iter().zip(&set.midpoints).enumerate() {
        table.push(vec![(i + 1).to_string(), to_f64(lo).to_string(), to_f64(hi).to_string(), mid.to_string()]);
    }
    Ok(JobOutput { result, checks, table: Some(table) })
}

fn read_matrix(path: &str) -> Result<RatMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    let rows: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
    let rows = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    Value::String(s) => parse_rational(&s).map_err(usage),
                    Value::Number(x) if x.is_i64() => Ok(int(x.as_i64().unwrap_or_default())),
                    other => Err(usage(format!("matrix entries must be integers or \"p/q\" strings, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let size = rows.len();
    if size == 0 || rows.iter().any(|r| r.len() != size) {
        return Err(usage("the matrix must be square and nonempty"));
    }
    Ok(RatMatrix::from_rows(rows))
}

fn tp(args: &TpArgs) -> Result<JobOutput, CliError> {
    let matrix = read_matrix(&args.input)?;
    let mut report = match (args.method, args.max_order) {
        (TpMethodArg::Neville, _) => is_totally_positive_neville(&matrix),
        (TpMethodArg::Minors, order) | (TpMethodArg::Auto, order @ Some(_)) => {
            is_totally_positive(&matrix, order.unwrap_or(matrix.rows()))?
        }
        (TpMethodArg::Auto, None) => tp_report(&matrix),
    };
    if args.oscillation && report.oscillation.is_none() {
        report.oscillation = Some(is_oscillation(&matrix));
    }
    let mut checks = vec![check(
        "total-positivity",
        match &report.verdict {
            TpVerdict::Tp => Ok(()),
            TpVerdict::NotTp { witness } => Err(format!("rows {:?} cols {:?} minor {}", witness.rows, witness.cols, witness.value)),
        },
    )];
    if args.oscillation {
        let verdict = report.oscillation.clone().expect("computed above");
        checks.push(check("oscillation", if verdict.holds() { Ok(()) } else { Err(format!("{verdict:?}")) }));
    }
    Ok(JobOutput { result: to_value(&report), checks, table: None })
}

fn verify(args: &VerifyArgs) -> Result<JobOutput, CliError> {
    if args.size == Some(0) {
        return Err(usage("--size must be positive"));
    }
    let options = SuiteOptions { quick: args.quick, size: args.size, seed: args.seed };
    let checks = run_suite(&options);
    let passed = checks.iter().filter(|c| c.passed()).count();
    Ok(JobOutput { result: json!({ "passed": passed, "failed": checks.len() - passed }), checks, table: None })
}
