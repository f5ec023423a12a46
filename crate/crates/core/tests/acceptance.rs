//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use confdyn::constraint::{
    average_check, jensen_check, ConstraintVerdict, ContactModel, GridExpr, GridFunction,
};
use confdyn::flows::{
    central_jacobian, flow_f, flow_h, sample_points, verify_conformal_factor, volume_flow, ode,
    ConformalFlowSpec, ScalarProfile,
};
use confdyn::obstruction::{check_flow, find_fixed_points, Conclusion, CriterionConfig, Metric};
use confdyn::rotation::{
    birkhoff_sums, build_liouville_theta, coboundary_solve, counterexample_pair,
    gottschalk_hedlund_test, minimum_precision_bits, regularity_report, FourierSeries, GhVerdict,
    RotationNumber, GOLDEN_THETA,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let pass = parts.iter().all(|p| p.pass);
    let detail = parts
        .iter()
        .map(|p| if p.pass { p.detail.clone() } else { format!("[failed] {}", p.detail) })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    all(vec![out, check(elapsed < limit, format!("{:.3}s < {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))])
}

/// `alpha = dz - sum y_i dx_i` as `(-y, 0, 1)`.
fn contact_covector(p: &[f64]) -> Vec<f64> {
    let n = (p.len() - 1) / 2;
    let mut a = vec![0.0; p.len()];
    for i in 0..n {
        a[i] = -p[n + i];
    }
    a[2 * n] = 1.0;
    a
}

/// Hand-derived pullback `D phi^T alpha(phi p)` for diagonal linear flows.
fn diagonal_pullback(diag: &[f64], image: &[f64]) -> Vec<f64> {
    contact_covector(image).iter().zip(diag).map(|(a, d)| a * d).collect()
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn contact_protocol(name: &str, flow_map: fn(f64, &[f64]) -> Vec<f64>, rate_z: f64, rate_xy: [f64; 2], factor: f64) -> Outcome {
    let mut parts = Vec::new();
    let mut worst_lib: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for n in [1usize, 2] {
        let flow = ConformalFlowSpec::by_name(name, n).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let report = verify_conformal_factor(&flow, t, 100, 0, Some(1e-9)).unwrap();
            worst_lib = worst_lib.max(report.max_residual);
            let mut diag = vec![(rate_xy[0] * t).exp(); n];
            diag.extend(vec![(rate_xy[1] * t).exp(); n]);
            diag.push((rate_z * t).exp());
            for p in sample_points(2 * n + 1, 100, 0) {
                let pulled = diagonal_pullback(&diag, &flow_map(t, &p));
                let expected: Vec<f64> = contact_covector(&p).iter().map(|a| (factor * t).exp() * a).collect();
                worst_oracle = worst_oracle.max(sup_gap(&pulled, &expected));
            }
        }
    }
    parts.push(check(worst_lib <= 1e-9, format!("library residual {worst_lib:.2e} <= 1e-9")));
    parts.push(check(worst_oracle <= 1e-9, format!("diagonal oracle residual {worst_oracle:.2e}")));
    all(parts)
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(1), || contact_protocol("H", flow_h, 1.0, [1.0, 0.0], 1.0))
}

fn criterion_2() -> Outcome {
    let factor = contact_protocol("F", flow_f, 2.0, [1.0, 1.0], 2.0);
    let seeds = sample_points(3, 10, 11);
    let search = find_fixed_points(|p| flow_f(1.0, p), &seeds, 1e-10, 50);
    let worst = search
        .points
        .iter()
        .map(|p| p.iter().fold(0.0f64, |m, c| m.max(c.abs())))
        .fold(0.0, f64::max);
    all(vec![
        factor,
        check(
            search.converged_count() == 10 && search.points.len() == 1 && worst <= 1e-10,
            format!(
                "{}/10 Newton starts converged to {} point(s), |x*| = {worst:.1e}",
                search.converged_count(),
                search.points.len()
            ),
        ),
    ])
}

fn criterion_3() -> Outcome {
    let config = CriterionConfig::default();
    let h = check_flow(&ConformalFlowSpec::contact_h(1), 1.0, &[0.0, 0.7, 0.0], 1, &config).unwrap();
    let f = check_flow(&ConformalFlowSpec::contact_f(1), 1.0, &[0.0, 0.0, 0.0], 1, &config).unwrap();
    // t = 1 at z = 0 moves x by exactly one period, so the point is 1-periodic.
    let torus = CriterionConfig { metric: Metric::Torus, ..config };
    let reeb = check_flow(&ConformalFlowSpec::reeb_torus(), 1.0, &[0.3, 0.4, 0.0], 1, &torus).unwrap();
    all(vec![
        check(
            h.conclusion == Conclusion::NoInvariantTensor && h.factor_sum == 1.0,
            format!("H at (0,0.7,0): {:?}, factor_sum {}", h.conclusion, h.factor_sum),
        ),
        check(
            f.conclusion == Conclusion::NoInvariantTensor && f.factor_sum == 2.0,
            format!("F at origin: {:?}, factor_sum {}", f.conclusion, f.factor_sum),
        ),
        check(
            reeb.conclusion == Conclusion::Inconclusive && reeb.residual <= 1e-12 && reeb.factor_sum == 0.0,
            format!("Reeb periodic point (residual {:.1e}): {:?}", reeb.residual, reeb.conclusion),
        ),
    ])
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for n in [1usize, 2, 3] {
        let rho = ScalarProfile::cut_off_linear(n);
        let (_, f1) = volume_flow(1.0, &vec![0.0; n], &rho, ode::required_steps(1.0)).unwrap();
        parts.push(check((f1 - 1.0).abs() <= 1e-8, format!("n={n}: |f_1(0) - 1| = {:.1e}", (f1 - 1.0).abs())));
    }
    let n = 2;
    let rho = ScalarProfile::cut_off_linear(n);
    let steps = |t: f64| ode::required_steps(t);
    let mut det_gap: f64 = 0.0;
    let mut cocycle_gap: f64 = 0.0;
    for x in sample_points(n, 50, 5) {
        let map = |p: &[f64]| volume_flow(1.0, p, &rho, steps(1.0)).unwrap().0;
        let det = central_jacobian(map, &x, 1e-5).determinant();
        let (_, f1) = volume_flow(1.0, &x, &rho, steps(1.0)).unwrap();
        det_gap = det_gap.max((det - f1.exp()).abs());
        let (y, f_t) = volume_flow(0.7, &x, &rho, steps(0.7)).unwrap();
        let (_, f_s) = volume_flow(0.3, &y, &rho, steps(0.3)).unwrap();
        cocycle_gap = cocycle_gap.max((f1 - f_t - f_s).abs());
    }
    parts.push(check(det_gap <= 1e-5, format!("|det D phi_1 - e^f_1| = {det_gap:.1e} at 50 points")));
    parts.push(check(cocycle_gap <= 1e-8, format!("cocycle gap {cocycle_gap:.1e}")));
    all(parts)
}

/// Random real zero-mean polynomial as explicit positive-frequency coefficients.
fn random_half(rng: &mut ChaCha8Rng, max_freq: i64) -> Vec<(i64, Complex64)> {
    (1..=max_freq)
        .map(|n| (n, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) / n as f64))
        .collect()
}

/// `sum_{n>0} 2 Re(c_n e^{2 pi i n x})`, evaluated directly.
fn eval_half(half: &[(i64, Complex64)], x: f64) -> f64 {
    half.iter()
        .map(|&(n, c)| 2.0 * (c * Complex64::from_polar(1.0, TAU * n as f64 * x)).re)
        .sum()
}

fn criterion_5() -> Outcome {
    timed(Duration::from_secs(1), || {
        let theta = RotationNumber::golden();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let degree = rng.random_range(1..=32);
            let half = random_half(&mut rng, degree);
            let f = FourierSeries::real_from_positive(half.clone());
            let g = coboundary_solve(&f, &theta, 1e-12).unwrap();
            let g_half: Vec<(i64, Complex64)> = g.coeffs().filter(|&(n, _)| n > 0).collect();
            for i in 0..1024 {
                let x = i as f64 / 1024.0;
                let lhs = eval_half(&g_half, x) - eval_half(&g_half, x + GOLDEN_THETA);
                worst = worst.max((lhs - eval_half(&half, x)).abs());
            }
        }
        check(worst <= 1e-10, format!("max residual {worst:.2e} over 50 polynomials x 1024 points"))
    })
}

fn criterion_6() -> Outcome {
    let theta = RotationNumber::golden();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bounded = true;
    let mut worst_margin = f64::INFINITY;
    let mut slope_gap: f64 = 0.0;
    let mut growth_verdicts = true;
    for _ in 0..10 {
        let g_half = random_half(&mut rng, 16);
        let f_half: Vec<(i64, Complex64)> = g_half
            .iter()
            .map(|&(n, c)| (n, c * (1.0 - Complex64::from_polar(1.0, TAU * n as f64 * GOLDEN_THETA))))
            .collect();
        // Sup of g from a fine grid plus the derivative bound on the gap between nodes.
        let grid = 1 << 16;
        let c1: f64 = g_half.iter().map(|&(n, c)| 2.0 * TAU * n as f64 * c.norm()).sum();
        let sup_g = (0..grid).map(|i| eval_half(&g_half, i as f64 / grid as f64).abs()).fold(0.0, f64::max)
            + c1 / (2.0 * grid as f64);
        let f = FourierSeries::real_from_positive(f_half);
        let trace = birkhoff_sums(&f, &theta, 0.0, 10_000).unwrap();
        let bound = 2.0 * sup_g + 1e-8;
        bounded &= trace.max_abs() <= bound;
        worst_margin = worst_margin.min(bound - trace.max_abs());
        let shifted = f.add(&FourierSeries::constant(0.1));
        let report = gottschalk_hedlund_test(&shifted, &theta, 0.0, 10_000, bound).unwrap();
        slope_gap = slope_gap.max((report.growth_fit.slope - 0.1).abs());
        growth_verdicts &= report.verdict == GhVerdict::LinearGrowth;
    }
    all(vec![
        check(bounded, format!("max|S_k| <= 2|g|_inf + 1e-8 for 10 coboundaries (min margin {worst_margin:.3})")),
        check(slope_gap <= 0.005, format!("mean 0.1 slope error {slope_gap:.1e} <= 0.005")),
        check(growth_verdicts, "mean 0.1 inputs classified LinearGrowth"),
    ])
}

fn criterion_7() -> Outcome {
    let levels = 8u32;
    let (theta, ladder) = build_liouville_theta(levels, minimum_precision_bits(levels)).unwrap();
    let (theta_hi, ladder_hi) = build_liouville_theta(levels, 2 * minimum_precision_bits(levels)).unwrap();
    let mut parts = Vec::new();
    // Exact recomputation of {n theta} from the stored fraction, at both precisions.
    let mut certified = ladder.entries() == ladder_hi.entries();
    for t in [&theta, &theta_hi] {
        let (num, den) = (t.numerator(), t.denominator());
        for &(j, n) in ladder.entries() {
            let residue = (num * BigInt::from(n)).mod_floor(den);
            certified &= n >= 1 << j;
            certified &= residue.is_positive();
            certified &= (residue << n as usize) <= *den;
        }
    }
    parts.push(check(certified, "n_j >= 2^j and 0 < {n_j theta} <= 2^-n_j, exact at two precisions"));

    let (f, g) = counterexample_pair(&ladder, &theta, levels as usize).unwrap();
    let mut identity = true;
    let mut oracle_gap: f64 = 0.0;
    let den = theta.denominator();
    for &(j, n) in ladder.entries() {
        let weight = 1.0 / (j * j) as f64;
        identity &= g.coeff(n) == Complex64::new(weight, 0.0);
        identity &= f.coeff(n) == g.coeff(n) * theta.small_divisor(n);
        // |1 - e^{2 pi i x}| = 2 sin(pi x) with x from the exact residue, scaled into f64 range.
        let residue = (theta.numerator() * BigInt::from(n)).mod_floor(den);
        let x = ratio_small(&residue, den);
        let expected = weight * 2.0 * (PI * x).sin();
        oracle_gap = oracle_gap.max((f.coeff(n).norm() - expected).abs() / expected);
    }
    parts.push(check(identity, "f(n) = (1 - e^{2 pi i n theta}) g(n) exactly"));
    parts.push(check(oracle_gap <= 1e-12, format!("independent |f(n_j)| relative gap {oracle_gap:.1e}")));
    let (rf, rg) = (regularity_report(&f), regularity_report(&g));
    let lower = 2.0 * 256.0 / 64.0;
    parts.push(check(rg.c1_majorant >= lower, format!("C^1 majorant of g {:.3} >= {lower}", rg.c1_majorant)));
    parts.push(check(rf.c1_majorant <= 4.0 * PI, format!("C^1 majorant of f {:.2e} <= 4 pi", rf.c1_majorant)));
    let decay_ok = ladder.entries().iter().all(|&(j, n)| {
        f.coeff(n).norm() <= TAU / (j * j) as f64 * 2f64.powi(-(n as i32))
    });
    parts.push(check(decay_ok, "|f(n_j)| <= (2 pi / j^2) 2^-n_j for every j"));
    all(parts)
}

/// `r / d` for `0 < r < d`, keeping 60 significant bits even when the ratio is tiny.
fn ratio_small(r: &BigInt, d: &BigInt) -> f64 {
    let shift = d.bits() as i64 - r.bits() as i64;
    let scaled = (r << (shift.max(0) as usize + 60)) / d;
    scaled.to_f64().unwrap() * 2f64.powi(-(shift.max(0) as i32 + 60))
}

fn criterion_8() -> Outcome {
    let model = ContactModel::torus();
    let r32 = [32, 32, 32];
    let zero = average_check(&GridFunction::constant(r32, 0.0).unwrap(), &model, 1e-8).unwrap();
    let tenth = average_check(&GridFunction::constant(r32, 0.1).unwrap(), &model, 1e-8).unwrap();
    let neg = jensen_check(&GridExpr::NegBump(0.3).sample(r32).unwrap(), &model, 1e-8).unwrap();
    let smooth = |p: [f64; 3]| 0.2 * (TAU * p[0]).sin() * (TAU * p[1]).cos() + 0.1 * (TAU * p[2]).cos();
    let a16 = average_check(&GridFunction::from_fn([16; 3], smooth).unwrap(), &model, 1e-8).unwrap().a;
    let a32 = average_check(&GridFunction::from_fn(r32, smooth).unwrap(), &model, 1e-8).unwrap().a;
    all(vec![
        check((zero.a - 1.0).abs() <= 1e-12, format!("f = 0: |A - 1| = {:.1e}", (zero.a - 1.0).abs())),
        check(
            (tenth.a - 0.2f64.exp()).abs() <= 1e-10 && tenth.verdict == ConstraintVerdict::Violated,
            format!("f = 0.1: |A - e^0.2| = {:.1e}, {:?}", (tenth.a - 0.2f64.exp()).abs(), tenth.verdict),
        ),
        check(
            neg.nonpositive_and_negative_somewhere && neg.verdict == ConstraintVerdict::Violated,
            format!("f <= 0, min {:.2}: nonpositive clause fires", neg.min_f),
        ),
        check((a16 - a32).abs() <= 1e-10, format!("16^3 vs 32^3: {:.1e}", (a16 - a32).abs())),
    ])
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut codes_ok = true;
    let mut identical = true;
    let mut notes = Vec::new();
    for (i, (line, code)) in common::SCRIPT.iter().enumerate() {
        let a = dir.path().join(format!("a{i}"));
        let b = dir.path().join(format!("b{i}"));
        let (ca, _) = common::run(&common::argv(line, &a));
        let (cb, _) = common::run(&common::argv(line, &b));
        if ca != *code || cb != *code {
            codes_ok = false;
            notes.push(format!("`{line}` exited {ca}/{cb}, expected {code}"));
        }
        if std::fs::read(&a).ok() != std::fs::read(&b).ok() {
            identical = false;
            notes.push(format!("`{line}` artifacts differ"));
        }
    }
    let scripted = common::covered_subcommands().len();
    all(vec![
        check(codes_ok, format!("exit codes honoured over {} runs{}", common::SCRIPT.len(), notes.join(", "))),
        check(identical, "repeated runs byte-identical"),
        check(scripted == 11, format!("{scripted}/11 subcommands scripted")),
    ])
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 9] = [
        (1, "contact flow H factor e^t", criterion_1),
        (2, "contact flow F factor e^2t and fixed point", criterion_2),
        (3, "obstruction verdicts", criterion_3),
        (4, "volume flow factor", criterion_4),
        (5, "coboundary round trip", criterion_5),
        (6, "Birkhoff growth dichotomy", criterion_6),
        (7, "Liouville counterexample", criterion_7),
        (8, "compact contact average constraint", criterion_8),
        (9, "CLI determinism and exit codes", criterion_9),
    ];
    let mut failures = 0;
    for (id, name, f) in criteria {
        let out = f();
        if !out.pass {
            failures += 1;
        }
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id}: {name} ({})", out.detail);
    }
    let total = start.elapsed();
    let fast = total < Duration::from_secs(60);
    if !fast {
        failures += 1;
    }
    println!(
        "{} suite runtime {:.2}s < 60s",
        if fast { "PASS" } else { "FAIL" },
        total.as_secs_f64()
    );
    if failures > 0 {
        println!("{failures} acceptance check(s) failed");
        std::process::exit(1);
    }
}
