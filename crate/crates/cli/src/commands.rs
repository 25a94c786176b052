//! One function per subcommand. Each returns the files it wrote.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use dtnbif_core::experiments::{
    asymptotics_fit, delta_sweep, empirical_delta_bar, f_separation_check, oracle_1d, AsymptoticTarget, OracleForm,
    SolutionClass, SweepOptions, WeightFamily,
};
use dtnbif_core::solve::{continue_branch, minimize_nehari, nonexistence_probe, LambdaWindow, ProbeOutcome};
use dtnbif_core::spectral;
use dtnbif_core::{DomainKind, Form, ProblemSpec};

use crate::config::{DomainChoice, FormChoice, RunConfig};
use crate::output::{branch_csv, diagram_csv, num, nums, write_file, Report};
use crate::CliError;

pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub verbose: bool,
}

impl Context {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn echo(&self, command: &str) -> Result<PathBuf, CliError> {
        write_file(&self.out, &format!("{command}.toml"), &self.config.to_toml())
    }

    fn spec(&self) -> Result<ProblemSpec, CliError> {
        let spec = self.config.build_spec()?;
        self.log(format!("λ₁(g) = {:e}, ∫g = {:e}", spec.lambda1(), spec.weight_integral()));
        Ok(spec)
    }

    /// Writes a JSON report; an incomplete report becomes an error after it is written.
    fn finish(&self, name: &str, report: &Report, mut files: Vec<PathBuf>) -> Result<Vec<PathBuf>, CliError> {
        files.push(write_file(&self.out, name, &report.render())?);
        if report.incomplete() {
            Err(CliError::Incomplete { files, errors: report.errors.clone() })
        } else {
            Ok(files)
        }
    }
}

fn scaled(fractions: &[f64], scale: f64) -> Vec<f64> {
    fractions.iter().map(|f| f * scale).collect()
}

pub fn eig(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let files = vec![ctx.echo("eig")?];
    let cfg = &ctx.config;
    let mut report = Report::new("eig", cfg);
    let d = cfg.build_domain();
    let g = cfg.build_weight(&d, &cfg.weight);
    let pair = match spectral::principal_eigenvalue(&d, &g) {
        Ok(pair) => pair,
        Err(e) => {
            report.fail(&e);
            return ctx.finish("eig.json", &report, files);
        }
    };
    let integral = d.boundary_integral(&g)?;
    let lambda1 = pair.value;
    println!("lambda1 = {lambda1:.16e}");
    report.verdict.insert("lambda1".into(), num(lambda1));
    report.verdict.insert("weight_integral".into(), num(integral));
    if integral >= 0.0 {
        let note = "boundary integral of g is nonnegative, so lambda1 is 0 by convention";
        println!("note: {note}");
        report.verdict.insert("note".into(), json!(note));
    }
    if d.kind() == DomainKind::Interval && integral < 0.0 {
        let (g0, g1) = (g.as_slice()[0], g.as_slice()[1]);
        let closed = (g0 + g1) / (g0 * g1);
        println!("closed form (g0+g1)/(g0 g1) = {closed:.16e}");
        report.verdict.insert("closed_form".into(), num(closed));
        report.verdict.insert("closed_form_difference".into(), num((lambda1 - closed).abs()));
    }
    let grid = match &cfg.lambda.values {
        Some(v) => v.clone(),
        None if lambda1 > 0.0 => scaled(&[0.0, 0.25, 0.5, 0.75, 1.0, 1.5], lambda1),
        None => vec![0.0],
    };
    println!("lambda,sigma1");
    for lambda in grid {
        let sigma = spectral::sigma1(&d, &g, lambda);
        match &sigma {
            Ok(s) => println!("{lambda:.16e},{:.16e}", s.value),
            Err(e) => {
                println!("{lambda:.16e},error: {e}");
                report.fail(format!("sigma1 at λ = {lambda}: {e}"));
            }
        }
        report.records.push(json!({
            "lambda": num(lambda),
            "sigma1": sigma.as_ref().map(|s| num(s.value)).unwrap_or(Value::Null),
            "residual": sigma.as_ref().map(|s| num(s.residual)).unwrap_or(Value::Null),
        }));
    }
    ctx.finish("eig.json", &report, files)
}

pub fn solve(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let mut files = vec![ctx.echo("solve")?];
    let spec = ctx.spec()?;
    let lambdas = ctx.config.lambda.values.clone().unwrap_or_else(|| scaled(&[0.25, 0.5, 0.75], spec.lambda1()));
    let mut points = Vec::new();
    let mut failure = None;
    for lambda in lambdas {
        ctx.log(format!("minimizing J on the Nehari set at λ = {lambda:e}"));
        match minimize_nehari(&spec, lambda, None) {
            Ok(pt) => points.push(pt),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    files.push(write_file(&ctx.out, "solve.csv", &branch_csv(&spec, &points))?);
    println!("{} solution(s) written", points.len());
    match failure {
        Some(e) => Err(CliError::Solver(e)),
        None => Ok(files),
    }
}

/// `(λ, sup)` of the quantity natural to the form: `u = 1 + w/λ` for the
/// logistic form, `v = λ^{-1/(p-1)} w` for the sppr form, `w` otherwise.
fn diagram_rows(spec: &ProblemSpec, branch: &dtnbif_core::Branch) -> Vec<(f64, f64)> {
    let p = spec.p();
    branch
        .points
        .iter()
        .filter_map(|pt| match spec.form() {
            Form::Logistic if pt.lambda > 0.0 => {
                Some((pt.lambda, pt.w.as_slice().iter().map(|w| (1.0 + w / pt.lambda).abs()).fold(0.0, f64::max)))
            }
            Form::SpprForm if pt.lambda > 0.0 => Some((pt.lambda, pt.lambda.powf(-1.0 / (p - 1.0)) * pt.sup_norm)),
            Form::Logistic | Form::SpprForm => None,
            _ => Some((pt.lambda, pt.sup_norm)),
        })
        .collect()
}

pub fn branch(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let mut files = vec![ctx.echo("branch")?];
    let cfg = &ctx.config;
    let spec = ctx.spec()?;
    let standard = LambdaWindow::standard(&spec);
    let window = LambdaWindow { lo: cfg.lambda.lo.unwrap_or(standard.lo), hi: cfg.lambda.hi.unwrap_or(standard.hi) };
    let mut opts = cfg.step_options(&spec);
    opts.targets = cfg.lambda.values.clone().unwrap_or_default();
    let branch = continue_branch(&spec, window, &opts)?;
    let (lo, hi) = branch.lambda_range();
    println!(
        "{} points, λ in [{lo:.6e}, {hi:.6e}], {:?}, terminated by {:?}",
        branch.points.len(),
        branch.direction,
        branch.termination
    );
    files.push(write_file(&ctx.out, "branch.csv", &branch_csv(&spec, &branch.points))?);
    files.push(write_file(&ctx.out, "diagram.csv", &diagram_csv(&diagram_rows(&spec, &branch)))?);
    Ok(files)
}

fn monotone(xs: &[f64], cmp: impl Fn(f64, f64) -> bool) -> bool {
    xs.windows(2).all(|w| cmp(w[0], w[1]))
}

pub fn sweep(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let files = vec![ctx.echo("sweep")?];
    let cfg = &ctx.config;
    if cfg.sweep.deltas.is_empty() {
        return Err(CliError::Config("sweep needs a nonempty sweep.deltas list".into()));
    }
    let mut report = Report::new("sweep", cfg);
    let d = cfg.build_domain();
    let g = cfg.build_weight(&d, &cfg.weight);
    let family = match WeightFamily::new(&d, &g) {
        Ok(f) => f,
        Err(e) => {
            report.fail(&e);
            return ctx.finish("sweep.json", &report, files);
        }
    };
    let opts = SweepOptions {
        lambda_fractions: cfg.sweep.lambda_fractions.clone(),
        multistart: cfg.sweep.multistart,
        seed: cfg.run.seed,
        with_stability: cfg.sweep.with_stability,
    };
    report.verdict.insert("delta0".into(), num(family.delta0));
    report.verdict.insert("separation_check".into(), json!("closure separation of {g > 0} and {g < 0} on the nodes"));
    report.verdict.insert("separated".into(), json!(f_separation_check(&d, &g)?));
    ctx.log(format!("δ₀ = {:e}; sweeping {} values", family.delta0, cfg.sweep.deltas.len()));
    let result = match delta_sweep(&d, &family, &cfg.sweep.deltas, cfg.problem.p, &opts) {
        Ok(r) => r,
        Err(e) => {
            report.fail(&e);
            return ctx.finish("sweep.json", &report, files);
        }
    };
    let mut ok = Vec::new();
    for (delta, rec) in &result {
        match rec {
            Ok(r) => {
                report.records.push(json!({
                    "delta": num(*delta),
                    "lambda1": num(r.lambda1),
                    "c_delta": num(r.c_delta),
                    "m_delta": num(r.m_delta),
                    "phi1_flatness": num(r.phi1_flatness),
                    "uniqueness": r.uniqueness.iter().map(|u| json!({
                        "lambda": num(u.lambda),
                        "distinct_positive": u.distinct_positive,
                    })).collect::<Vec<_>>(),
                    "branch_points": r.branch.points.len(),
                    "termination": r.branch.termination,
                }));
                ok.push(r);
            }
            Err(e) => {
                report.records.push(json!({ "delta": num(*delta), "error": e.to_string() }));
                report.fail(format!("δ = {delta}: {e}"));
            }
        }
    }
    let l1: Vec<f64> = ok.iter().map(|r| r.lambda1).collect();
    let c: Vec<f64> = ok.iter().map(|r| r.c_delta).collect();
    let m: Vec<f64> = ok.iter().map(|r| r.m_delta).collect();
    let tail = &ok[ok.len().saturating_sub(2)..];
    let v = &mut report.verdict;
    v.insert("empirical_delta_bar".into(), empirical_delta_bar(&result, cfg.problem.p).map_or(Value::Null, num));
    v.insert("lambda1_decreasing".into(), json!(monotone(&l1, |a, b| b < a)));
    v.insert("c_delta_decreasing".into(), json!(monotone(&c, |a, b| b < a)));
    v.insert("m_delta_nondecreasing".into(), json!(monotone(&m, |a, b| b >= a)));
    v.insert("m_delta_exceeds_p_at_two_smallest".into(), json!(tail.iter().all(|r| r.m_delta > cfg.problem.p)));
    v.insert("unique_at_two_smallest".into(), json!(tail.iter().all(|r| r.max_distinct() == 1)));
    println!("swept {} δ values ({} failed)", result.len(), result.len() - ok.len());
    ctx.finish("sweep.json", &report, files)
}

const CLASSES: [SolutionClass; 8] = [
    SolutionClass::Zero,
    SolutionClass::ConstantOne,
    SolutionClass::PositiveBelowOne,
    SolutionClass::PositiveAboveOne,
    SolutionClass::PositiveCrossingOne,
    SolutionClass::Positive,
    SolutionClass::SignChanging,
    SolutionClass::NotPositive,
];

fn class_name(c: SolutionClass) -> Value {
    serde_json::to_value(c).expect("class serializes")
}

pub fn oracle1d(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let cfg = &ctx.config;
    if cfg.domain.kind != DomainChoice::Interval {
        return Err(CliError::Config("oracle1d runs on the interval only".into()));
    }
    let v = cfg.weight.values.clone().unwrap_or_default();
    let form = match cfg.problem.form {
        FormChoice::Logistic => OracleForm::Logistic { r0: v[0], r1: v[1] },
        FormChoice::W | FormChoice::Sppr => OracleForm::WForm { g0: v[0], g1: v[1], p: cfg.problem.p },
        FormChoice::F => return Err(CliError::Config("oracle1d supports the w, sppr and logistic forms".into())),
    };
    let files = vec![ctx.echo("oracle1d")?];
    let mut report = Report::new("oracle1d", cfg);
    let lambdas = match (&cfg.lambda.values, form) {
        (Some(v), _) => v.clone(),
        (None, OracleForm::Logistic { .. }) => vec![0.01, 0.1, 1.0],
        (None, OracleForm::WForm { .. }) => match cfg.build_spec() {
            Ok(spec) => scaled(&[0.25, 0.5, 0.75], spec.lambda1()),
            Err(e) => {
                report.fail(&e);
                return ctx.finish("oracle1d.json", &report, files);
            }
        },
    };
    let mut crossing = 0;
    for lambda in lambdas {
        let rep = match oracle_1d(form, lambda) {
            Ok(r) => r,
            Err(e) => {
                report.records.push(json!({ "lambda": num(lambda), "error": e.to_string() }));
                report.fail(format!("λ = {lambda}: {e}"));
                continue;
            }
        };
        crossing += rep.count(SolutionClass::PositiveCrossingOne);
        let mut counts = Map::new();
        for c in CLASSES {
            counts.insert(class_name(c).as_str().unwrap_or_default().to_string(), json!(rep.count(c)));
        }
        let mut record = json!({
            "lambda": num(lambda),
            "counts": counts,
            "solutions": rep.solutions.iter().map(|s| json!({
                "class": class_name(s.class),
                "left": num(s.left()),
                "right": num(s.right()),
                "defect": num(s.defect),
            })).collect::<Vec<_>>(),
        });
        if let OracleForm::Logistic { .. } = form {
            let rows: Vec<Value> = rep
                .of_class(SolutionClass::PositiveAboveOne)
                .map(|s| nums(&[lambda * s.left(), lambda * s.right()]))
                .collect();
            record["lambda_u"] = Value::Array(rows);
        }
        println!("λ = {lambda:.6e}: {} real solution(s)", rep.solutions.len());
        report.records.push(record);
    }
    report.verdict.insert("crossing_one_total".into(), json!(crossing));
    ctx.finish("oracle1d.json", &report, files)
}

pub fn asympt(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let files = vec![ctx.echo("asympt")?];
    let cfg = &ctx.config;
    let mut report = Report::new("asympt", cfg);
    let spec = match cfg.build_spec() {
        Ok(s) => s,
        Err(e) => {
            report.fail(&e);
            return ctx.finish("asympt.json", &report, files);
        }
    };
    let (lo, hi) = (cfg.lambda.lo.unwrap_or(1e-3), cfg.lambda.hi.unwrap_or(1e-1));
    if !(lo > 0.0) {
        return Err(CliError::Config("the asymptotic window needs lambda.lo > 0".into()));
    }
    let n = cfg.lambda.samples.unwrap_or(12).max(2);
    let targets: Vec<f64> = (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect();
    let mut opts = cfg.step_options(&spec);
    opts.targets = targets;
    let target = if spec.form() == Form::Logistic { AsymptoticTarget::LogisticU } else { AsymptoticTarget::SpprV };
    let fit = continue_branch(&spec, LambdaWindow::standard(&spec), &opts)
        .and_then(|branch| asymptotics_fit(&spec, &branch, (lo, hi), target));
    match fit {
        Ok(fit) => {
            for (l, s) in fit.lambdas.iter().zip(&fit.sup_norms) {
                report.records.push(json!({ "lambda": num(*l), "sup_norm": num(*s) }));
            }
            let expected = -1.0 / (spec.p() - 1.0);
            let v = &mut report.verdict;
            v.insert("slope".into(), num(fit.slope));
            v.insert("intercept".into(), num(fit.intercept));
            v.insert("fit_residual".into(), num(fit.residual));
            v.insert("expected_slope".into(), num(expected));
            v.insert("within_tolerance".into(), json!((fit.slope - expected).abs() <= 0.05));
            println!("slope {:.6} (expected {expected:.6})", fit.slope);
        }
        Err(e) => report.fail(&e),
    }
    ctx.finish("asympt.json", &report, files)
}

const OUTCOMES: [ProbeOutcome; 7] = [
    ProbeOutcome::Converged,
    ProbeOutcome::CollapsedToZero,
    ProbeOutcome::LeftPositiveCone,
    ProbeOutcome::DampingExhausted,
    ProbeOutcome::SingularJacobian,
    ProbeOutcome::MaxIterations,
    ProbeOutcome::Other,
];

pub fn probe(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let files = vec![ctx.echo("probe")?];
    let cfg = &ctx.config;
    let mut report = Report::new("probe", cfg);
    let spec = match cfg.build_spec() {
        Ok(s) => s,
        Err(e) => {
            report.fail(&e);
            return ctx.finish("probe.json", &report, files);
        }
    };
    let l1 = spec.lambda1();
    let lambdas = match &cfg.lambda.values {
        Some(v) => v.clone(),
        None if l1 > 0.0 => scaled(&[1.0, 1.1, 2.0], l1),
        None => vec![0.1, 0.5, 1.0, 3.0],
    };
    let mut total = 0;
    for lambda in lambdas {
        ctx.log(format!("probing λ = {lambda:e} with {} starts", cfg.probe.inits));
        let rep = nonexistence_probe(&spec, lambda, cfg.probe.inits, cfg.run.seed);
        total += rep.findings.len();
        let mut outcomes = Map::new();
        for o in OUTCOMES {
            let name = serde_json::to_value(o).expect("outcome serializes");
            outcomes.insert(name.as_str().unwrap_or_default().into(), json!(rep.outcomes.iter().filter(|x| **x == o).count()));
        }
        report.records.push(json!({
            "lambda": num(lambda),
            "findings": rep.findings.iter().map(|f| nums(f.as_slice())).collect::<Vec<_>>(),
            "outcomes": outcomes,
        }));
        println!("λ = {lambda:.6e}: {} positive solution(s)", rep.findings.len());
    }
    report.verdict.insert("total_findings".into(), json!(total));
    report.verdict.insert("empty".into(), json!(total == 0));
    ctx.finish("probe.json", &report, files)
}

pub fn default_out(config: &RunConfig) -> PathBuf {
    config.run.out.clone().unwrap_or_else(|| Path::new("out").to_path_buf())
}
