use std::f64::consts::TAU;

use framelab::frames::{
    canonical_parseval, coherence, frame_bounds, frame_operator, frame_potential, gaussian_frame, random_parseval,
    welch_bound, Frame,
};
use framelab::gleason::{
    fit_quadratic, homogeneity_check, quadratic_gleason, quadratic_zero_count_s1, verify_onb_gleason, Sampling,
    ZeroCount,
};
use framelab::linalg::{hermitian_eig, outer, trace, Field, Matrix, Vector, C64};
use framelab::povm::{born_probabilities, frame_from_povm, povm_from_frame, random_density, random_grouped_povm};
use framelab::rng::{gaussian_vector, random_hermitian, seeded, sphere_point};
use framelab::waveforms::{ambiguity, autocorrelation, gabor_frame, is_cazac, quadratic_phase, Sequence};
use proptest::prelude::*;

fn field_of(real: bool) -> Field {
    if real {
        Field::Real
    } else {
        Field::Complex
    }
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), d in 1usize..7, real in any::<bool>()) {
        let field = field_of(real);
        let m = random_hermitian(&mut seeded(seed), d, field);
        let eig = hermitian_eig(&m, 1e-12).unwrap();
        prop_assert!(eig.reconstruct().max_diff(&m) <= 1e-10 * (1.0 + m.max_abs()));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = Matrix::from_columns(&(0..d).map(|k| eig.eigenvector(k)).collect::<Vec<_>>());
        prop_assert!(v.adjoint().mul(&v).unwrap().max_diff(&Matrix::identity(d)) <= 1e-10);
        if real {
            prop_assert!(eig.eigenvectors.is_real(0.0));
        }
    }

    #[test]
    fn trace_is_linear_and_outer_trace_is_inner(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = seeded(seed);
        let a = random_hermitian(&mut rng, d, Field::Complex);
        let b = random_hermitian(&mut rng, d, Field::Complex);
        let s = C64::new(0.3, -1.2);
        let lhs = trace(&a.add(&b.scale(s)).unwrap()).unwrap();
        let rhs = trace(&a).unwrap() + s * trace(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        let x = gaussian_vector(&mut rng, d, Field::Complex);
        let y = gaussian_vector(&mut rng, d, Field::Complex);
        prop_assert!((trace(&outer(&x, &y).unwrap()).unwrap() - x.inner(&y)).norm() <= 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn parseval_frames_have_short_vectors_and_potential_d(
        seed in any::<u64>(), d in 1usize..6, extra in 0usize..5, real in any::<bool>()
    ) {
        let f = random_parseval(d, d + extra, field_of(real), seed).unwrap();
        prop_assert!(f.vectors().iter().all(|x| x.norm() <= 1.0 + 1e-12));
        prop_assert!((frame_potential(&f) - d as f64).abs() <= 1e-10);
        prop_assert!(frame_operator(&f).max_diff(&Matrix::identity(d)) <= 1e-12);
    }

    #[test]
    fn canonical_parseval_has_unit_bounds(seed in any::<u64>(), d in 1usize..6, extra in 0usize..5) {
        let f = gaussian_frame(&mut seeded(seed), d, d + extra + 1, Field::Complex);
        if let Ok(p) = canonical_parseval(&f, 1e-6) {
            let b = frame_bounds(&p).unwrap();
            prop_assert!((b.lower - 1.0).abs() <= 1e-9 && (b.upper - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn welch_bound_holds(seed in any::<u64>(), d in 1usize..5, extra in 1usize..6, real in any::<bool>()) {
        let field = field_of(real);
        let mut rng = seeded(seed);
        let n = d + extra;
        let vectors: Vec<Vector> = (0..n).map(|_| sphere_point(&mut rng, d, field)).collect();
        let f = Frame::new(d, field, vectors).unwrap();
        prop_assert!(coherence(&f, 1e-9).unwrap() >= welch_bound(n, d).unwrap() - 1e-12);
    }

    #[test]
    fn povm_roundtrip_is_parseval(seed in any::<u64>(), d in 1usize..5, extra in 0usize..4, groups in 1usize..4) {
        let mut rng = seeded(seed);
        let f = random_parseval(d, d + extra, Field::Complex, seed).unwrap();
        let povm = povm_from_frame(&f, 1e-10).unwrap();
        prop_assert!(povm.identity_deviation() <= 1e-12);
        let back = frame_from_povm(&povm, 1e-10, false).unwrap();
        prop_assert!(frame_operator(&back.frame).max_diff(&Matrix::identity(d)) <= 1e-10);

        let grouped = random_grouped_povm(&mut rng, d, d + extra, groups, Field::Complex, 1e-10).unwrap();
        let rho = random_density(&mut rng, d, Field::Complex);
        let p = born_probabilities(&rho, &grouped).unwrap();
        prop_assert!(p.iter().all(|&x| x >= -1e-12));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn quadratic_forms_are_gleason_and_recoverable(seed in any::<u64>(), d in 1usize..5, real in any::<bool>()) {
        let field = field_of(real);
        let a = random_hermitian(&mut seeded(seed), d, field);
        let tr = trace(&a).unwrap();
        let g = quadratic_gleason(a.clone(), field).unwrap();
        let rep = verify_onb_gleason(&g, &Sampling::new(20, seed, 1e-9));
        prop_assert!(rep.passed && (rep.mean_weight - tr).norm() <= 1e-9);
        for extra in 0..3 {
            let f = random_parseval(d, d + extra, field, seed ^ extra as u64).unwrap();
            prop_assert!((g.sum_over(&f) - tr).norm() <= 1e-10);
        }
        let fit = fit_quadratic(&g, seed);
        prop_assert!(fit.operator.max_diff(&a) <= 1e-10 && fit.operator.is_hermitian(0.0));
        prop_assert!(homogeneity_check(&g, 50, seed, 1e-10).passed);
    }

    #[test]
    fn zero_count_matches_sign_changes(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let disc = b * b - 4.0 * a * c;
        // near-double roots are below any grid resolution
        prop_assume!(disc.abs() > 1e-3 && c.abs() > 1e-3);
        let points = 100_000;
        let q = |i: usize| {
            let t = TAU * (i as f64 + 0.5) / points as f64;
            let (x, y) = (t.cos(), t.sin());
            a * x * x + b * x * y + c * y * y
        };
        let mut prev = q(points - 1) < 0.0;
        let mut changes = 0;
        for i in 0..points {
            let cur = q(i) < 0.0;
            changes += (cur != prev) as u32;
            prev = cur;
        }
        prop_assert_eq!(quadratic_zero_count_s1(a, b, c), ZeroCount::Finite(changes));
    }

    #[test]
    fn unimodular_ambiguity_is_normalized(seed in any::<u64>(), d in 1usize..24) {
        let mut rng = seeded(seed);
        let phases: Vec<C64> = (0..d).map(|_| C64::from_polar(1.0, rand::Rng::gen_range(&mut rng, 0.0..TAU))).collect();
        let u = Sequence::new(phases).unwrap();
        let table = ambiguity(&u);
        prop_assert!((table.get(0, 0) - C64::new(1.0, 0.0)).norm() <= 1e-12);
        for m in 0..d {
            prop_assert!((table.get(m, 0) - autocorrelation(&u, m)).norm() <= 1e-14);
        }
        let f = gabor_frame(&u).unwrap();
        let target = Matrix::identity(d).scale_real(d as f64);
        prop_assert!(frame_operator(&f).max_diff(&target) <= 1e-9);
    }

    #[test]
    fn modulated_cazac_stays_cazac(k in 0usize..8, n in -20i64..20) {
        let u = quadratic_phase(2 * k + 3).unwrap();
        prop_assert!(is_cazac(&u.modulate(n), 1e-10).passed);
    }
}
