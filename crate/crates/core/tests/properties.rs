//! Property-based invariants of the perspective construction: algebraic
//! laws that must hold for every admissible input, probed over
//! proptest-driven seeds, dimensions, and scales.

use proptest::prelude::*;

use perspec_core::funclib::ScalarFn;
use perspec_core::majorization::weak_log_majorize;
use perspec_core::perspective::{mean_sigma, perspective};
use perspec_core::randgen::{rand_spd, TrialSpec, TrialStructure};
use perspec_core::SymMatrix;

fn spd(seed: u64, trial: u64, dim: usize, cond: f64) -> SymMatrix {
    rand_spd(&TrialSpec {
        master_seed: seed,
        trial_index: trial,
        dim,
        cond_target: cond,
        structure: TrialStructure::GenericPd,
    })
}

fn rel_diff(x: &SymMatrix, y: &SymMatrix) -> f64 {
    let num = x.sub(y).unwrap().op_norm().unwrap();
    num / (1.0 + x.op_norm().unwrap().max(y.op_norm().unwrap()))
}

fn sample_funcs() -> Vec<ScalarFn> {
    vec![
        ScalarFn::power(0.5),
        ScalarFn::power(-0.5),
        ScalarFn::weighted_arith(0.3).unwrap(),
        ScalarFn::weighted_harm(0.5).unwrap(),
        ScalarFn::log_mean(),
        ScalarFn::half_sum(0.2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// P_f(cA, cB) = c P_f(A, B): the perspective is homogeneous of
    /// degree one.
    #[test]
    fn perspective_is_homogeneous(
        seed in any::<u64>(),
        dim in 2usize..=5,
        cond in 1.5f64..50.0,
        c in 0.05f64..20.0,
    ) {
        let a = spd(seed, 0, dim, cond);
        let b = spd(seed, 1, dim, cond);
        for f in sample_funcs() {
            let lhs = perspective(&f, &a.scale(c), &b.scale(c)).unwrap();
            let rhs = perspective(&f, &a, &b).unwrap().scale(c);
            prop_assert!(
                rel_diff(&lhs, &rhs) < 1e-9,
                "homogeneity broken for {f} at c={c}: {}",
                rel_diff(&lhs, &rhs)
            );
        }
    }

    /// P_f(A, A) = f(1) A = A for normalized f.
    #[test]
    fn perspective_on_equal_arguments_is_identity_scaling(
        seed in any::<u64>(),
        dim in 2usize..=5,
        cond in 1.5f64..100.0,
    ) {
        let a = spd(seed, 0, dim, cond);
        for f in sample_funcs() {
            let p = perspective(&f, &a, &a).unwrap();
            prop_assert!(
                rel_diff(&p, &a) < 1e-9,
                "P_f(A,A) != A for {f}: {}",
                rel_diff(&p, &a)
            );
        }
    }

    /// The arithmetic-mean function makes mean_sigma the literal
    /// weighted arithmetic mean.
    #[test]
    fn arithmetic_mean_is_literal(
        seed in any::<u64>(),
        dim in 2usize..=5,
        w in 0.05f64..0.95,
    ) {
        let a = spd(seed, 0, dim, 10.0);
        let b = spd(seed, 1, dim, 10.0);
        let h = ScalarFn::weighted_arith(w).unwrap();
        let m = mean_sigma(&h, &a, &b).unwrap();
        let lit = a.scale(1.0 - w).add(&b.scale(w)).unwrap();
        prop_assert!(rel_diff(&m, &lit) < 1e-10);
    }

    /// Function descriptors round-trip through the parser grammar.
    #[test]
    fn descriptor_roundtrip(
        alpha in -3.0f64..3.0,
        w in 0.05f64..0.95,
        t in 0.01f64..100.0,
    ) {
        let funcs = vec![
            ScalarFn::power(alpha),
            ScalarFn::weighted_arith(w).unwrap(),
            ScalarFn::half_sum(w),
            ScalarFn::t_pow_times(2, ScalarFn::power(alpha.abs().min(1.0))).unwrap(),
        ];
        for f in funcs {
            let back = ScalarFn::parse(&f.to_string()).unwrap();
            let (x, y) = (f.eval(t).unwrap(), back.eval(t).unwrap());
            prop_assert!(
                (x - y).abs() <= 1e-12 * (1.0 + x.abs()),
                "roundtrip mismatch for {f} at t={t}: {x} vs {y}"
            );
        }
    }

    /// Log-majorization is reflexive and invariant under joint scaling.
    #[test]
    fn weak_log_majorization_reflexive_and_scale_invariant(
        seed in any::<u64>(),
        dim in 2usize..=5,
        c in 0.1f64..10.0,
    ) {
        let a = spd(seed, 0, dim, 50.0);
        prop_assert!(weak_log_majorize(&a, &a).unwrap().holds);
        prop_assert!(weak_log_majorize(&a.scale(c), &a.scale(c)).unwrap().holds);
        // A ≺_wlog 2A strictly.
        prop_assert!(weak_log_majorize(&a, &a.scale(2.0)).unwrap().holds);
    }
}
