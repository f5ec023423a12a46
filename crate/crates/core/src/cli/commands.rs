use std::fs::File;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::*;
use crate::constraint::{
    average_check, density_weights, jensen_check, mu_average, ConstraintVerdict, ContactModel,
    GridExpr, GridFunction, DEFAULT_TOL,
};
use crate::flows::{
    bump_cutoff, contact_vector_field, flow_f, flow_h, liouville_flow_cotangent, ode, pullback_form,
    sample_points, verify_conformal_factor, volume_flow, ConformalFlowSpec, HamiltonianSpec,
    ScalarProfile, DEFAULT_FD_STEP,
};
use crate::obstruction::{
    check_flow, find_fixed_points, Conclusion, CriterionConfig, Metric, SeedOutcome,
    DEFAULT_POINT_TOL,
};
use crate::rotation::{
    birkhoff_sums, build_liouville_theta, coboundary_residual, coboundary_solve,
    counterexample_pair, gottschalk_hedlund_test, minimum_precision_bits, regularity_report,
    FourierSeries, GhVerdict, RotationNumber, DEFAULT_DENOM_FLOOR,
};

type CmdResult = Result<Outcome, CliError>;

const DEFAULT_SOLVE_TOL: f64 = 1e-10;
const DEFAULT_NEWTON_TOL: f64 = 1e-10;

pub(super) fn dispatch(group: Group) -> (CmdResult, Common) {
    match group {
        Group::Rotation(cmd) => match cmd {
            RotationCmd::Solve { series, denom_floor, samples, common } => {
                (solve(&series, denom_floor, samples, &common), common)
            }
            RotationCmd::Birkhoff { series, x0, k, common } => (birkhoff(&series, x0, k, &common), common),
            RotationCmd::GhTest { series, x0, k, bound, common } => {
                (gh_test(&series, x0, k, bound, &common), common)
            }
            RotationCmd::Counterexample { j, precision_bits, common } => {
                (counterexample(j, precision_bits), common)
            }
            RotationCmd::Regularity { series, eval_at, common } => {
                (regularity(&series, eval_at.as_deref(), &common), common)
            }
        },
        Group::Flows(cmd) => match cmd {
            FlowsCmd::Verify { flow, samples, fd, common } => (verify(&flow, samples, fd, &common), common),
            FlowsCmd::Integrate { flow, point, steps, r_inner, r_outer, common } => {
                (integrate(&flow, point.as_deref(), steps, r_inner, r_outer), common)
            }
        },
        Group::Obstruction(cmd) => match cmd {
            ObstructionCmd::FindFixed { flow, seeds, max_iter, common } => {
                (find_fixed(&flow, seeds, max_iter, &common), common)
            }
            ObstructionCmd::Check { flow, point, m, factor_tol, metric, common } => {
                (check(&flow, point.as_deref(), m, factor_tol, metric, &common), common)
            }
        },
        Group::Constraint(cmd) => match cmd {
            ConstraintCmd::Average { grid, common } => (average(&grid, &common), common),
            ConstraintCmd::Jensen { grid, common } => (jensen(&grid, &common), common),
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn csv_table<R, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse {what} component {c:?}")))
        })
        .collect()
}

fn parse_theta(s: &str) -> Result<RotationNumber, CliError> {
    if s == "golden" {
        return Ok(RotationNumber::golden());
    }
    let value: f64 = s
        .parse()
        .map_err(|_| CliError::Usage(format!("theta must be a number or `golden`, got {s:?}")))?;
    Ok(RotationNumber::from_f64(value)?)
}

/// Real zero-mean trigonometric polynomial with coefficients uniform in the unit
/// square, scaled by `1/n`.
pub fn random_series(max_freq: u32, seed: u64) -> FourierSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FourierSeries::real_from_positive((1..=max_freq as i64).map(|n| {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-1.0..1.0);
        (n, Complex64::new(re, im) / n as f64)
    }))
}

fn load_series(args: &SeriesArgs, seed: u64) -> Result<FourierSeries, CliError> {
    let base = if let Some(path) = &args.series {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
        serde_json::from_reader(file)
            .map_err(|e| CliError::Usage(format!("bad series file {}: {e}", path.display())))?
    } else if let Some(terms) = &args.terms {
        let mut half = Vec::new();
        for term in terms.split(',') {
            let fields: Vec<&str> = term.trim().split(':').collect();
            let bad = || CliError::Usage(format!("terms are n:re:im with n > 0, got {term:?}"));
            if fields.len() != 3 {
                return Err(bad());
            }
            let n: i64 = fields[0].parse().map_err(|_| bad())?;
            let re: f64 = fields[1].parse().map_err(|_| bad())?;
            let im: f64 = fields[2].parse().map_err(|_| bad())?;
            if n <= 0 {
                return Err(bad());
            }
            half.push((n, Complex64::new(re, im)));
        }
        FourierSeries::real_from_positive(half)
    } else {
        random_series(args.max_freq, seed)
    };
    Ok(if args.mean != 0.0 {
        base.add(&FourierSeries::constant(args.mean))
    } else {
        base
    })
}

fn solve(args: &SeriesArgs, denom_floor: f64, samples: usize, common: &Common) -> CmdResult {
    let f = load_series(args, common.seed)?;
    let theta = parse_theta(&args.theta)?;
    let g = coboundary_solve(&f, &theta, denom_floor)?;
    let residual = coboundary_residual(&f, &g, &theta, samples)?;
    let tol = common.tol.unwrap_or(DEFAULT_SOLVE_TOL);
    let pass = residual <= tol;
    let csv = csv_table(
        &["n", "re", "im"],
        g.coeffs().map(|(n, c)| [n.to_string(), format!("{:e}", c.re), format!("{:e}", c.im)]),
    );
    Ok(Outcome {
        json: json!({
            "theta": to_json(&theta.summary()),
            "f": to_json(&f),
            "g": to_json(&g),
            "samples": samples,
            "residual": residual,
            "tol": tol,
            "pass": pass,
        }),
        csv: Some(csv),
        summary: format!("coboundary solved: {} coefficients, residual {residual:e}", g.len()),
        exit: if pass { EXIT_OK } else { EXIT_NUMERICAL },
    })
}

fn birkhoff(args: &SeriesArgs, x0: f64, k: usize, common: &Common) -> CmdResult {
    let f = load_series(args, common.seed)?;
    let theta = parse_theta(&args.theta)?;
    let trace = birkhoff_sums(&f, &theta, x0, k)?;
    let mut buf = Vec::new();
    trace
        .write_csv(&mut buf)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(Outcome {
        json: json!({
            "theta": theta.to_f64(),
            "K": k,
            "max_abs": trace.max_abs(),
            "trace": to_json(&trace),
        }),
        csv: Some(String::from_utf8(buf).expect("CSV is UTF-8")),
        summary: format!(
            "{k} Birkhoff sums, max |S_k| = {:e}, slope {:e}",
            trace.max_abs(),
            trace.growth_fit.slope
        ),
        exit: EXIT_OK,
    })
}

fn gh_test(args: &SeriesArgs, x0: f64, k: usize, bound: Option<f64>, common: &Common) -> CmdResult {
    let f = load_series(args, common.seed)?;
    let theta = parse_theta(&args.theta)?;
    let bound = match bound {
        Some(b) => b,
        None => {
            let zero_mean = f.add(&FourierSeries::constant(-f.mean().re));
            let g = coboundary_solve(&zero_mean, &theta, DEFAULT_DENOM_FLOOR)?;
            2.0 * regularity_report(&g).c0_majorant + 1e-8
        }
    };
    let report = gottschalk_hedlund_test(&f, &theta, x0, k, bound)?;
    Ok(Outcome {
        json: json!({ "theta": theta.to_f64(), "x0": x0, "report": to_json(&report) }),
        csv: None,
        summary: format!(
            "{:?}: max |S_k| = {:e} against bound {:e}, slope {:e} +- {:e}",
            report.verdict, report.max_abs, bound, report.growth_fit.slope, report.growth_fit.residual
        ),
        exit: if report.verdict == GhVerdict::LinearGrowth { EXIT_NEGATIVE } else { EXIT_OK },
    })
}

fn counterexample(levels: u32, precision_bits: Option<u64>) -> CmdResult {
    let bits = precision_bits.unwrap_or_else(|| minimum_precision_bits(levels.max(1)));
    let (theta, ladder) = build_liouville_theta(levels, bits)?;
    let (f, g) = counterexample_pair(&ladder, &theta, levels as usize)?;
    let identity_exact = g
        .coeffs()
        .filter(|&(n, _)| n > 0)
        .all(|(n, c)| f.coeff(n) == c * theta.small_divisor(n));
    let rungs: Vec<Value> = ladder
        .entries()
        .iter()
        .map(|&(j, n)| json!({ "j": j, "n": n, "frac_n_theta": theta.frac_mul(n) }))
        .collect();
    let csv = csv_table(
        &["j", "n", "frac_n_theta", "g_abs", "f_abs"],
        ladder.entries().iter().map(|&(j, n)| {
            [
                j.to_string(),
                n.to_string(),
                format!("{:e}", theta.frac_mul(n)),
                format!("{:e}", g.coeff(n).norm()),
                format!("{:e}", f.coeff(n).norm()),
            ]
        }),
    );
    let (rf, rg) = (regularity_report(&f), regularity_report(&g));
    let summary = format!(
        "J = {levels}: C^1 majorant of g {:.6}, of f {:.3e}; identity exact: {identity_exact}",
        rg.c1_majorant, rf.c1_majorant
    );
    Ok(Outcome {
        json: json!({
            "J": levels,
            "theta": to_json(&theta.summary()),
            "ladder": rungs,
            "f": to_json(&f),
            "g": to_json(&g),
            "regularity": { "f": to_json(&rf), "g": to_json(&rg) },
            "coefficient_identity_exact": identity_exact,
        }),
        csv: Some(csv),
        summary,
        exit: if identity_exact { EXIT_OK } else { EXIT_NUMERICAL },
    })
}

fn regularity(args: &SeriesArgs, eval_at: Option<&str>, common: &Common) -> CmdResult {
    let s = load_series(args, common.seed)?;
    let report = regularity_report(&s);
    let angles = match eval_at {
        Some(list) => parse_list(list, "angle")?,
        None => Vec::new(),
    };
    let values = s.evaluate_many(&angles)?;
    let csv = csv_table(
        &["n", "abs_coeff"],
        s.coeffs().map(|(n, c)| [n.to_string(), format!("{:e}", c.norm())]),
    );
    Ok(Outcome {
        json: json!({
            "report": to_json(&report),
            "values": angles.iter().zip(&values).map(|(t, v)| [t, v]).collect::<Vec<_>>(),
        }),
        csv: Some(csv),
        summary: format!(
            "C^0 majorant {:e}, C^1 majorant {:e}",
            report.c0_majorant, report.c1_majorant
        ),
        exit: EXIT_OK,
    })
}

fn lookup_flow(args: &FlowArgs) -> Result<ConformalFlowSpec, CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    ConformalFlowSpec::by_name(&args.flow, args.n).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown flow {:?}; expected H, F, liouville, volume or reeb",
            args.flow
        ))
    })
}

fn point_or_origin(point: Option<&str>, dim: usize) -> Result<Vec<f64>, CliError> {
    let p = match point {
        Some(s) => parse_list(s, "point")?,
        None => vec![0.0; dim],
    };
    if p.len() != dim {
        return Err(FlowError::DimensionMismatch { expected: dim, got: p.len() }.into());
    }
    Ok(p)
}

fn verify(args: &FlowArgs, samples: usize, fd: bool, common: &Common) -> CmdResult {
    let mut flow = lookup_flow(args)?;
    if fd {
        flow = flow.finite_difference();
    }
    let report = verify_conformal_factor(&flow, args.t, samples, common.seed, common.tol)?;
    Ok(Outcome {
        json: to_json(&report),
        csv: None,
        summary: format!(
            "{}: {}, max residual {:e} (tol {:e})",
            report.factor_checked,
            if report.pass { "pass" } else { "FAIL" },
            report.max_residual,
            report.tolerance
        ),
        exit: if report.pass { EXIT_OK } else { EXIT_NUMERICAL },
    })
}

fn integrate(
    args: &FlowArgs,
    point: Option<&str>,
    steps: Option<usize>,
    r_inner: f64,
    r_outer: f64,
) -> CmdResult {
    let mut flow = lookup_flow(args)?;
    let (n, t) = (args.n, args.t);
    let p = point_or_origin(point, flow.ambient_dim)?;
    if steps.is_some() && flow.name != "volume" {
        return Err(CliError::Usage("--steps applies to the volume flow only".into()));
    }
    let mut extra = serde_json::Map::new();
    let (image, factor, field) = match flow.name.as_str() {
        "H" => (
            flow_h(t, &p),
            t,
            contact_vector_field(&HamiltonianSpec::expanding_h(n), &p)?,
        ),
        "F" => (
            flow_f(t, &p),
            2.0 * t,
            contact_vector_field(&HamiltonianSpec::expanding_f(n), &p)?,
        ),
        "liouville" => {
            let (q, pp) = liouville_flow_cotangent(t, &p[..n], &p[n..]);
            ([q, pp].concat(), t, flow.vector_field(&p))
        }
        "volume" => {
            let chi = bump_cutoff(r_inner, r_outer)?;
            let rho = ScalarProfile::cut_off_linear_radii(n, r_inner, r_outer)?;
            let steps = steps.unwrap_or_else(|| ode::required_steps(t));
            let (image, factor) = volume_flow(t, &p, &rho, steps)?;
            extra.insert("steps".into(), json!(steps));
            extra.insert(
                "cutoff".into(),
                json!(p.iter().map(|x| chi.value(x.abs())).collect::<Vec<_>>()),
            );
            flow = ConformalFlowSpec::volume(n, rho);
            (image, factor, flow.vector_field(&p))
        }
        _ => {
            let factor = flow.expected_factor(t, &p).unwrap_or(f64::NAN);
            (flow.map(t, &p), factor, flow.vector_field(&p))
        }
    };
    let pullback = pullback_form(&flow, t, &p, DEFAULT_FD_STEP)?;
    let mut json = serde_json::Map::new();
    json.insert("flow".into(), json!(flow.name));
    json.insert("t".into(), json!(t));
    json.insert("point".into(), json!(p));
    json.insert("image".into(), json!(image));
    json.insert("factor".into(), json!(factor));
    json.insert("vector_field".into(), json!(field));
    json.insert(
        "pullback".into(),
        json!({ "kind": pullback.kind(), "components": pullback.components() }),
    );
    json.extend(extra);
    Ok(Outcome {
        json: Value::Object(json),
        csv: None,
        summary: format!("{} flow at t = {t}: factor {factor:e}", flow.name),
        exit: EXIT_OK,
    })
}

fn find_fixed(args: &FlowArgs, seeds: usize, max_iter: usize, common: &Common) -> CmdResult {
    let flow = lookup_flow(args)?;
    let t = args.t;
    let starts = sample_points(flow.ambient_dim, seeds, common.seed);
    let tol = common.tol.unwrap_or(DEFAULT_NEWTON_TOL);
    let search = find_fixed_points(|p| flow.map(t, p), &starts, tol, max_iter);
    let all_failed = !search.outcomes.is_empty()
        && search
            .outcomes
            .iter()
            .all(|o| matches!(o, SeedOutcome::NoConvergence { .. }));
    Ok(Outcome {
        json: json!({
            "flow": flow.name,
            "t": t,
            "tol": tol,
            "seeds": starts,
            "points": search.points,
            "outcomes": to_json(&search.outcomes),
            "converged": search.converged_count(),
            "singular": search.singular_count(),
        }),
        csv: None,
        summary: format!(
            "{} distinct fixed points; {} of {seeds} seeds converged, {} singular",
            search.points.len(),
            search.converged_count(),
            search.singular_count()
        ),
        exit: if all_failed { EXIT_NUMERICAL } else { EXIT_OK },
    })
}

fn check(
    args: &FlowArgs,
    point: Option<&str>,
    m: usize,
    factor_tol: f64,
    metric: Option<MetricArg>,
    common: &Common,
) -> CmdResult {
    let flow = lookup_flow(args)?;
    let p = point_or_origin(point, flow.ambient_dim)?;
    let metric = match metric {
        Some(MetricArg::Torus) => Metric::Torus,
        Some(MetricArg::Euclidean) => Metric::Euclidean,
        None if flow.name == "reeb" => Metric::Torus,
        None => Metric::Euclidean,
    };
    let config = CriterionConfig {
        point_tol: common.tol.unwrap_or(DEFAULT_POINT_TOL),
        factor_tol,
        metric,
    };
    let verdict = check_flow(&flow, args.t, &p, m, &config)
        .ok_or_else(|| CliError::Usage(format!("flow {} has no conformal factor", flow.name)))?;
    let mut json = to_json(&verdict);
    if let Value::Object(map) = &mut json {
        map.insert("flow".into(), json!(flow.name));
        map.insert("t".into(), json!(args.t));
    }
    Ok(Outcome {
        json,
        csv: None,
        summary: format!(
            "{:?}: orbit residual {:e}, factor sum {:e}",
            verdict.conclusion, verdict.residual, verdict.factor_sum
        ),
        exit: if verdict.conclusion == Conclusion::NoInvariantTensor { EXIT_NEGATIVE } else { EXIT_OK },
    })
}

fn load_grid(args: &GridArgs) -> Result<(GridFunction, ContactModel), CliError> {
    let f = match (&args.grid, &args.expr) {
        (Some(path), _) => GridFunction::from_csv(open(path)?)?,
        (None, expr) => {
            let expr: GridExpr = expr.as_deref().unwrap_or("zero").parse()?;
            expr.sample([args.resolution; 3])?
        }
    };
    let model = match args.form {
        FormArg::Torus => ContactModel::torus(),
        FormArg::Dz => ContactModel::exact_dz(),
    };
    Ok((f, model))
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))
}

fn verdict_exit(v: ConstraintVerdict) -> i32 {
    match v {
        ConstraintVerdict::NecessaryConditionHolds => EXIT_OK,
        ConstraintVerdict::Violated => EXIT_NEGATIVE,
    }
}

fn average(args: &GridArgs, common: &Common) -> CmdResult {
    let (f, model) = load_grid(args)?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let weights = density_weights(&model, f.resolution())?;
    let report = average_check(&f, &model, tol)?;
    let avg_f = mu_average(&f, &model)?;
    let (lo, hi) = weights
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    Ok(Outcome {
        json: json!({
            "A": report.a,
            "avg_f": avg_f,
            "resolution": f.resolution(),
            "tol": tol,
            "density": { "min_abs": lo, "max_abs": hi },
            "verdicts": { "average": to_json(&report.verdict) },
        }),
        csv: None,
        summary: format!("A = {:.15} (|A - 1| = {:e}): {:?}", report.a, (report.a - 1.0).abs(), report.verdict),
        exit: verdict_exit(report.verdict),
    })
}

fn jensen(args: &GridArgs, common: &Common) -> CmdResult {
    let (f, model) = load_grid(args)?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let report = jensen_check(&f, &model, tol)?;
    let a = average_check(&f, &model, tol)?.a;
    Ok(Outcome {
        json: json!({
            "A": a,
            "avg_f": report.avg_f,
            "max_f": report.max_f,
            "min_f": report.min_f,
            "resolution": f.resolution(),
            "tol": tol,
            "clauses": {
                "positive_average": report.positive_average,
                "nonpositive_and_negative_somewhere": report.nonpositive_and_negative_somewhere,
            },
            "verdicts": { "jensen": to_json(&report.verdict) },
        }),
        csv: None,
        summary: format!("avg f = {:e}, f in [{:e}, {:e}]: {:?}", report.avg_f, report.min_f, report.max_f, report.verdict),
        exit: verdict_exit(report.verdict),
    })
}
