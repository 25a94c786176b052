use nalgebra::DVector;
use proptest::prelude::*;

use dtnbif_core::experiments::{oracle_1d_grid, oracle_1d_resultant, OracleForm, SolutionClass};
use dtnbif_core::solve::{functionals, j_gradient, nehari_project, Membership};
use dtnbif_core::spectral;
use dtnbif_core::{assemble_dtn, assemble_helmholtz_dtn, BoundaryFunction, Domain, FourierCoefficients, ProblemSpec};

/// `m = 2` stands for the interval.
fn domain_for(m: usize) -> Domain {
    if m == 2 {
        Domain::interval()
    } else {
        Domain::disk(m).unwrap()
    }
}

/// Sign-changing weight with negative mean built from a few random modes.
fn weight(d: &Domain, coeffs: &[f64], shift: f64) -> BoundaryFunction {
    if d.is_interval() {
        return BoundaryFunction::new(vec![coeffs[0].abs() + 0.1, -(coeffs[0].abs() + 0.1) - shift]);
    }
    let g = d.sample(|t| {
        coeffs.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).cos()).sum::<f64>() + 0.3 * t.sin()
    });
    let mean = d.boundary_integral(&g).unwrap() / d.weights().iter().sum::<f64>();
    g.map(|x| x - mean - shift * g.sup_norm())
}

fn positive_trace(d: &Domain, seeds: &[f64]) -> BoundaryFunction {
    if d.is_interval() {
        return BoundaryFunction::new(vec![seeds[0].exp(), seeds[1].exp()]);
    }
    d.sample(|t| (seeds[0] + seeds[1] * t.cos() + seeds[2] * (2.0 * t).sin()).exp())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dtn_is_symmetric_and_kills_constants(m in prop_oneof![Just(2usize), (4usize..24).prop_map(|k| 2 * k)], frac in -20.0f64..0.9) {
        let d = domain_for(m);
        let s = frac * d.first_dirichlet_eigenvalue();
        let op = assemble_helmholtz_dtn(&d, s).unwrap();
        let a = op.matrix();
        let scale = a.amax();
        prop_assert!((a - a.transpose()).amax() <= 1e-12 * scale);

        let lap = assemble_dtn(&d);
        let ones = DVector::from_element(d.len(), 1.0);
        prop_assert!((lap.matrix() * &ones).amax() <= 1e-12 * lap.matrix().amax().max(1.0));
        let min_eig = lap.matrix().clone().symmetric_eigen().eigenvalues.min();
        prop_assert!(min_eig >= -1e-12 * lap.matrix().amax().max(1.0));
        if s <= 0.0 {
            let min_eig = a.clone().symmetric_eigen().eigenvalues.min();
            prop_assert!(min_eig >= -1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn normal_derivative_has_zero_mean(m in prop_oneof![Just(2usize), (4usize..20).prop_map(|k| 2 * k)], vals in prop::collection::vec(-3.0f64..3.0, 40)) {
        let d = domain_for(m);
        let w = BoundaryFunction::new(vals[..d.len()].to_vec());
        let flux = assemble_dtn(&d).apply(&w).unwrap();
        let scale = flux.sup_norm().max(w.sup_norm());
        prop_assert!(d.boundary_integral(&flux).unwrap().abs() <= 1e-12 * scale * d.len() as f64);
    }

    #[test]
    fn fourier_round_trip(m in (4usize..20).prop_map(|k| 2 * k), raw in prop::collection::vec(-2.0f64..2.0, 42)) {
        let d = Domain::disk(m).unwrap();
        let half = m / 2;
        let cos = raw[..=half].to_vec();
        let mut sin = raw[21..22 + half].to_vec();
        sin[0] = 0.0;
        sin[half] = 0.0;
        let coeffs = FourierCoefficients { cos, sin };
        let trace = BoundaryFunction::from_fourier(&d, &coeffs);
        let back = trace.fourier(&d).unwrap().unwrap();
        let again = BoundaryFunction::from_fourier(&d, &back);
        prop_assert!((trace.values() - again.values()).amax() <= 1e-12 * (1.0 + trace.sup_norm()));
    }

    #[test]
    fn gradient_matches_finite_differences(
        m in prop_oneof![Just(2usize), (4usize..12).prop_map(|k| 2 * k)],
        coeffs in prop::collection::vec(-1.0f64..1.0, 3),
        seeds in prop::collection::vec(-1.0f64..1.0, 3),
        dir in prop::collection::vec(-1.0f64..1.0, 24),
        p in 1.5f64..4.0,
        frac in -0.5f64..1.5,
    ) {
        let d = domain_for(m);
        let spec = ProblemSpec::new(d.clone(), weight(&d, &coeffs, 0.2), p).unwrap();
        let lambda = frac * spec.lambda1();
        let w = positive_trace(&d, &seeds);
        let v = DVector::from_column_slice(&dir[..d.len()]);
        prop_assume!(v.norm() > 1e-3);
        let t = 1e-4 * w.sup_norm() / v.amax();
        let j = |x: DVector<f64>| functionals(&spec, lambda, &BoundaryFunction::from_vector(x)).j;
        let fd = (j(w.values() + &v * t) - j(w.values() - &v * t)) / (2.0 * t);
        let grad = j_gradient(&spec, lambda, &w);
        prop_assert!((fd - grad.dot(&v)).abs() <= 1e-6 * grad.norm() * v.norm());
    }

    #[test]
    fn projection_lands_on_n_minus(
        m in prop_oneof![Just(2usize), (4usize..12).prop_map(|k| 2 * k)],
        coeffs in prop::collection::vec(-1.0f64..1.0, 3),
        seeds in prop::collection::vec(-1.0f64..1.0, 3),
        p in 1.5f64..4.0,
        frac in 0.0f64..0.95,
    ) {
        let d = domain_for(m);
        let spec = ProblemSpec::new(d.clone(), weight(&d, &coeffs, 0.2), p).unwrap();
        let lambda = frac * spec.lambda1();
        let w = positive_trace(&d, &seeds);
        let before = functionals(&spec, lambda, &w);
        prop_assume!(before.e > 0.0 && before.g_val > 0.0);
        let proj = nehari_project(&spec, lambda, &w).unwrap();
        let after = functionals(&spec, lambda, &proj);
        prop_assert_eq!(after.membership, Membership::NMinus);
        prop_assert!(after.j > 0.0);
        // the projection maximizes the fibering map
        for t in [0.9, 0.99, 1.01, 1.1] {
            prop_assert!(functionals(&spec, lambda, &proj.scale(t)).j <= after.j * (1.0 + 1e-12));
        }
    }

    #[test]
    fn principal_eigenvalue_scales_inversely(
        m in prop_oneof![Just(2usize), (4usize..16).prop_map(|k| 2 * k)],
        coeffs in prop::collection::vec(-1.0f64..1.0, 3),
        c in 0.1f64..10.0,
    ) {
        let d = domain_for(m);
        let g = weight(&d, &coeffs, 0.2);
        let l1 = spectral::principal_eigenvalue(&d, &g).unwrap().value;
        let lc = spectral::principal_eigenvalue(&d, &g.scale(c)).unwrap().value;
        prop_assert!(l1 > 0.0);
        prop_assert!((lc * c - l1).abs() <= 1e-9 * l1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The grid search and the elimination quartic find the same logistic solutions.
    #[test]
    fn logistic_enumerations_agree(r0 in 0.2f64..5.0, r1 in 0.2f64..5.0, flip in any::<bool>(), log_l in -2.0f64..1.0) {
        let (r0, r1) = if flip { (r0, -r1) } else { (-r0, r1) };
        let lambda = 10f64.powf(log_l);
        let form = OracleForm::Logistic { r0, r1 };
        let grid = oracle_1d_grid(form, lambda).unwrap();
        let elim = oracle_1d_resultant(form, lambda).unwrap();
        prop_assert_eq!(grid.solutions.len(), elim.solutions.len());
        for s in &grid.solutions {
            let scale = 1.0f64.max(s.left().abs()).max(s.right().abs());
            let found = elim.solutions.iter().any(|e| {
                e.class == s.class
                    && (e.left() - s.left()).abs() <= 1e-8 * scale
                    && (e.right() - s.right()).abs() <= 1e-8 * scale
            });
            prop_assert!(found);
        }
        prop_assert_eq!(grid.count(SolutionClass::PositiveCrossingOne), 0);
        prop_assert_eq!(grid.count(SolutionClass::Zero), 1);
        prop_assert_eq!(grid.count(SolutionClass::ConstantOne), 1);
    }
}
