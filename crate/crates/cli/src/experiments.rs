//! Named reproducible experiments. Each returns a JSON report with a `passed`
//! flag, the seed and the execution mode.

use std::f64::consts::{E, TAU};

use clap::ValueEnum;
use framelab::exec::{run_trials, Mode};
use framelab::frames::{
    canonical_parseval, coherence, equiangular_tight_angle, frame_bounds, frame_operator, gaussian_frame,
    harmonic_frame, is_equiangular, is_parseval, random_parseval_with, simplex_etf, welch_bound, Frame,
};
use framelab::gleason::{
    cos_counterexample, degree_ladder_experiment, epsilon_1d_counterexample, exp_norm, fit_quadratic,
    quadratic_gleason, quadratic_zero_count_s1, shifted, verify_onb_gleason, verify_parseval_gleason, Sampling,
    ZeroCount,
};
use framelab::linalg::{trace, Field, Matrix, Vector, C64};
use framelab::povm::{
    born_probabilities, check_generalized_measure, frame_from_povm, povm_from_frame, povm_from_frame_grouped,
    random_density, random_grouped_povm, DensityOperator,
};
use framelab::rng::{gaussian, random_hermitian, seeded, trial_rng};
use framelab::waveforms::{ambiguity, bjorck, bjorck_ambiguity_bound, gabor_coherence, gabor_frame, is_cazac};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    WeightTrace,
    CanonicalParseval,
    PovmRoundtrip,
    EtfWelch,
    Harmonic,
    Counterexamples,
    DegreeSeparation,
    DegreeLadder,
    Busch,
    Cazac,
}

impl Experiment {
    pub fn name(self) -> String {
        self.to_possible_value().expect("named").get_name().to_string()
    }
}

pub struct Settings {
    pub seed: u64,
    pub trials: Option<usize>,
    pub mode: Mode,
}

pub fn run(exp: Experiment, s: &Settings) -> Result<Value, CliError> {
    let mut report = match exp {
        Experiment::WeightTrace => weight_trace(s),
        Experiment::CanonicalParseval => canonical(s)?,
        Experiment::PovmRoundtrip => povm_roundtrip(s)?,
        Experiment::EtfWelch => etf_welch()?,
        Experiment::Harmonic => harmonic()?,
        Experiment::Counterexamples => counterexamples(s)?,
        Experiment::DegreeSeparation => degree_separation(s)?,
        Experiment::DegreeLadder => ladder(s)?,
        Experiment::Busch => busch(s)?,
        Experiment::Cazac => cazac()?,
    };
    let obj = report.as_object_mut().expect("object report");
    obj.insert("experiment".into(), json!(exp.name()));
    obj.insert("seed".into(), json!(s.seed));
    obj.insert("mode".into(), serde_json::to_value(s.mode)?);
    Ok(report)
}

fn weight_trace(s: &Settings) -> Value {
    let trials = s.trials.unwrap_or(1000);
    let devs = run_trials(trials, s.mode, |t| {
        let mut rng = trial_rng(s.seed, t as u64);
        let d = 2 + t % 5;
        let n = d + (t / 5) % 7;
        let field = if t % 2 == 0 { Field::Complex } else { Field::Real };
        let a = random_hermitian(&mut rng, d, field);
        let f = random_parseval_with(&mut rng, d, n, field).expect("N >= d");
        let sum: C64 = f.vectors().iter().map(|x| a.quadratic_form(x).expect("dims")).sum();
        (sum - trace(&a).expect("square")).norm()
    });
    let max = devs.iter().cloned().fold(0.0, f64::max);
    json!({"trials": trials, "max_deviation": max, "tolerance": 1e-9, "passed": max <= 1e-9})
}

fn canonical(s: &Settings) -> Result<Value, CliError> {
    let trials = s.trials.unwrap_or(200);
    let devs = run_trials(trials, s.mode, |t| -> Result<f64, CliError> {
        let mut rng = trial_rng(s.seed, t as u64);
        let d = 2 + t % 5;
        let n = d + (t / 5) % 7;
        let f = gaussian_frame(&mut rng, d, n, Field::Complex);
        let b = frame_bounds(&canonical_parseval(&f, 1e-10)?)?;
        Ok((b.lower - 1.0).abs().max((b.upper - 1.0).abs()))
    });
    let mut max = 0.0_f64;
    for d in devs {
        max = max.max(d?);
    }
    Ok(json!({"trials": trials, "max_bound_deviation": max, "tolerance": 1e-10, "passed": max <= 1e-10}))
}

fn povm_roundtrip(s: &Settings) -> Result<Value, CliError> {
    let trials = s.trials.unwrap_or(100);
    let tol = 1e-10;
    let rows = run_trials(trials, s.mode, |t| -> Result<(f64, f64, f64), CliError> {
        let mut rng = trial_rng(s.seed, t as u64);
        let d = 2 + t % 4;
        let n = d + rng.gen_range(0..5);
        let field = if t % 2 == 0 { Field::Complex } else { Field::Real };
        let frame = random_parseval_with(&mut rng, d, n, field)?;
        let povm = povm_from_frame(&frame, tol)?;
        let sum_dev = povm.identity_deviation();
        let back = frame_from_povm(&povm, tol, false)?;
        let b = frame_bounds(&back.frame)?;
        let parseval_dev = (b.lower - 1.0).abs().max((b.upper - 1.0).abs());

        let groups = 1 + rng.gen_range(0..n);
        let grouped = random_grouped_povm(&mut rng, d, n, groups, field, tol)?;
        let split = frame_from_povm(&grouped, tol, false)?;
        let rebuilt = povm_from_frame_grouped(&split.frame, &split.partition, 1e-9)?;
        let effect_dev = grouped
            .effects()
            .iter()
            .zip(rebuilt.effects())
            .map(|(a, b)| a.matrix().max_diff(b.matrix()))
            .fold(0.0, f64::max);
        Ok((sum_dev, parseval_dev, effect_dev))
    });
    let (mut sum_dev, mut parseval_dev, mut effect_dev) = (0.0_f64, 0.0_f64, 0.0_f64);
    for r in rows {
        let (a, b, c) = r?;
        sum_dev = sum_dev.max(a);
        parseval_dev = parseval_dev.max(b);
        effect_dev = effect_dev.max(c);
    }
    let passed = sum_dev <= 1e-10 && parseval_dev <= 1e-10 && effect_dev <= 1e-9;
    Ok(json!({
        "trials": trials,
        "max_identity_deviation": sum_dev,
        "max_parseval_deviation": parseval_dev,
        "max_grouped_effect_deviation": effect_dev,
        "passed": passed,
    }))
}

fn etf_welch() -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let mut passed = true;
    for d in 2..=8 {
        let f = simplex_etf(d)?;
        let mu = coherence(&f, 1e-12)?;
        let w = welch_bound(d + 1, d)?;
        let eq = is_equiangular(&f, 1e-12)?;
        let b = frame_bounds(&f)?;
        let alpha = equiangular_tight_angle(b.upper, d + 1, d);
        let ok = (mu - w).abs() <= 1e-12 && eq.equiangular && eq.alpha.is_some_and(|a| (a - alpha).abs() <= 1e-12);
        passed &= ok;
        rows.push(json!({"dim": d, "coherence": mu, "welch_bound": w, "alpha": eq.alpha, "ok": ok}));
    }
    Ok(json!({"cases": rows, "passed": passed}))
}

fn harmonic() -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let mut passed = true;
    for (d, n) in [(2, 3), (2, 5), (3, 7), (4, 9)] {
        let sel: Vec<usize> = (1..=d).collect();
        let f = harmonic_frame(d, n, &sel)?;
        let parseval = is_parseval(&f, 1e-10)?;
        let target = (d as f64 / n as f64).sqrt();
        let norm_dev = f
            .vectors()
            .iter()
            .map(|x| (x.norm() - target).abs())
            .fold(0.0, f64::max);
        let ok = parseval && norm_dev <= 1e-12;
        passed &= ok;
        rows.push(json!({"dim": d, "n": n, "parseval": parseval, "max_norm_deviation": norm_dev, "ok": ok}));
    }
    Ok(json!({"cases": rows, "passed": passed}))
}

/// Number of sign changes of `a x^2 + b x y + c y^2` around a cyclic grid on
/// the unit circle.
pub fn grid_zero_count(a: f64, b: f64, c: f64, points: usize) -> u32 {
    let q = |i: usize| {
        let t = TAU * (i as f64 + 0.5) / points as f64;
        let (x, y) = (t.cos(), t.sin());
        a * x * x + b * x * y + c * y * y
    };
    let mut changes = 0;
    let mut prev = q(points - 1);
    for i in 0..points {
        let cur = q(i);
        if (prev < 0.0) != (cur < 0.0) {
            changes += 1;
        }
        prev = cur;
    }
    changes
}

fn counterexamples(s: &Settings) -> Result<Value, CliError> {
    let fit2 = fit_quadratic(&cos_counterexample(2)?, s.seed);
    let fit2_ok = fit2.residual <= 1e-9 && fit2.operator.max_diff(&Matrix::from_diag(&[2.0, 0.0])) <= 1e-9;
    let mut higher = Vec::new();
    let mut higher_ok = true;
    for n in [6, 10, -6] {
        let fit = fit_quadratic(&cos_counterexample(n)?, s.seed);
        higher_ok &= fit.residual >= 0.1;
        higher.push(json!({"n": n, "residual": fit.residual}));
    }
    let forms = s.trials.unwrap_or(200);
    let grid = 20_000;
    let mut rng = seeded(s.seed);
    let mut agree = 0;
    for _ in 0..forms {
        let (a, b, c) = (gaussian(&mut rng), gaussian(&mut rng), gaussian(&mut rng));
        let want = grid_zero_count(a, b, c, grid);
        if quadratic_zero_count_s1(a, b, c) == ZeroCount::Finite(want) {
            agree += 1;
        }
    }
    Ok(json!({
        "cos2d_2": {"residual": fit2.residual, "operator": fit2.operator, "ok": fit2_ok},
        "cos2d_higher": higher,
        "zero_count": {"forms": forms, "grid_points": grid, "agreements": agree},
        "passed": fit2_ok && higher_ok && agree == forms,
    }))
}

fn degree_separation(s: &Settings) -> Result<Value, CliError> {
    let mut cases = Vec::new();
    let mut passed = true;
    for d in [2, 3] {
        let g = exp_norm(d, Field::Complex);
        let onb = verify_onb_gleason(
            &g,
            &Sampling {
                trials: 200,
                seed: s.seed,
                tol: 1e-12,
                mode: s.mode,
            },
        );
        let weight = d as f64 * (E - 1.0);
        let onb_ok = onb.passed && (onb.mean_weight - C64::new(weight, 0.0)).norm() <= 1e-12;
        let par = verify_parseval_gleason(
            &g,
            d + 1,
            &Sampling {
                trials: 200,
                seed: s.seed,
                tol: 1e-9,
                mode: s.mode,
            },
        )?;
        let gap = par.witness.as_ref().map_or(0.0, |w| (w.high.sum - w.low.sum).norm());
        let ok = onb_ok && !par.passed && gap >= 0.1;
        passed &= ok;
        cases.push(json!({"dim": d, "onb_weight": onb.mean_weight.re, "onb_passed": onb.passed, "parseval_passed": par.passed, "witness_gap": gap, "ok": ok}));
    }
    let eps = 0.2;
    let g = epsilon_1d_counterexample(eps, Field::Complex)?;
    let trials = s.trials.unwrap_or(10_000);
    let two = verify_parseval_gleason(
        &g,
        2,
        &Sampling {
            trials,
            seed: s.seed,
            tol: 1e-12,
            mode: s.mode,
        },
    )?;
    let two_ok = two.passed && (two.mean_weight - C64::new(1.0, 0.0)).norm() <= 1e-12;
    let v = |x: f64| Vector::real(&[x]);
    let three = Frame::from_vectors(vec![v(eps.sqrt()), v(eps.sqrt()), v((1.0 - 2.0 * eps).sqrt())])?;
    let sum3 = g.sum_over(&three).re;
    let three_ok = (sum3 - (3.0 - 4.0 * eps)).abs() <= 1e-12;
    passed &= two_ok && three_ok;
    Ok(json!({
        "expnorm": cases,
        "epsilon1d": {"eps": eps, "degree2_trials": two.trials, "degree2_weight": two.mean_weight.re, "degree2_passed": two.passed, "three_element_sum": sum3},
        "passed": passed,
    }))
}

fn ladder(s: &Settings) -> Result<Value, CliError> {
    let c = 0.5;
    let mut cases = Vec::new();
    let mut passed = true;
    for d in [2, 3] {
        let a = random_hermitian(&mut seeded(s.seed), d, Field::Complex);
        let g = shifted(quadratic_gleason(a, Field::Complex)?, c);
        let sampling = Sampling {
            trials: s.trials.unwrap_or(50),
            seed: s.seed,
            tol: 1e-9,
            mode: s.mode,
        };
        let rep = degree_ladder_experiment(&g, d + 2, d + 6, &sampling)?;
        let steps_ok = rep.steps.len() == 4
            && rep
                .steps
                .iter()
                .all(|st| (st.increment - C64::new(c, 0.0)).norm() <= 1e-9);
        passed &= rep.passed && steps_ok;
        cases.push(json!({"dim": d, "report": rep}));
    }
    Ok(json!({"constant": c, "cases": cases, "passed": passed}))
}

fn busch(s: &Settings) -> Result<Value, CliError> {
    let densities = 50;
    let mut max_dev = 0.0_f64;
    for i in 0..densities {
        let d = 2 + i % 3;
        let field = if i % 2 == 0 { Field::Complex } else { Field::Real };
        let rho = random_density(&mut trial_rng(s.seed, i as u64), d, field);
        let v = move |e: &Matrix| rho.expectation(e).re;
        let rep = check_generalized_measure(&v, d, field, d + 2, s.trials.unwrap_or(20), s.seed, 1e-9, s.mode)?;
        max_dev = max_dev
            .max(rep.max_additivity_deviation)
            .max(rep.unit_deviation)
            .max(rep.max_range_violation);
    }
    let pairs = 500;
    let mut rng = seeded(s.seed ^ 0xb0c4);
    let (mut min_p, mut max_sum_dev) = (f64::INFINITY, 0.0_f64);
    for i in 0..pairs {
        let d = 2 + i % 4;
        let rho: DensityOperator = random_density(&mut rng, d, Field::Complex);
        let n = d + rng.gen_range(0..4);
        let groups = 1 + rng.gen_range(0..n);
        let povm = random_grouped_povm(&mut rng, d, n, groups, Field::Complex, 1e-10)?;
        let p = born_probabilities(&rho, &povm)?;
        min_p = p.iter().cloned().fold(min_p, f64::min);
        max_sum_dev = max_sum_dev.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    let passed = max_dev <= 1e-9 && min_p >= -1e-10 && max_sum_dev <= 1e-10;
    Ok(json!({
        "densities": densities,
        "max_measure_deviation": max_dev,
        "born_pairs": pairs,
        "min_probability": min_p,
        "max_probability_sum_deviation": max_sum_dev,
        "passed": passed,
    }))
}

fn cazac() -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let mut passed = true;
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29] {
        let u = bjorck(p)?;
        let rep = is_cazac(&u, 1e-10);
        let max_amb = ambiguity(&u).max_off_origin();
        let bound = bjorck_ambiguity_bound(p);
        let f = gabor_frame(&u)?;
        let tight_dev = frame_operator(&f).max_diff(&Matrix::identity(p as usize).scale_real(p as f64));
        let gab = gabor_coherence(&u);
        let ok =
            rep.passed && max_amb <= bound && max_amb <= 3.0 / (p as f64).sqrt() && tight_dev <= 1e-9 && gab.within;
        passed &= ok;
        rows.push(json!({
            "p": p,
            "zac_residual": rep.zac_residual,
            "max_ambiguity": max_amb,
            "bound": bound,
            "tightness_deviation": tight_dev,
            "coherence": gab.coherence,
            "ok": ok,
        }));
    }
    Ok(json!({"primes": rows, "passed": passed}))
}
