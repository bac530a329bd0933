mod common;

use std::sync::Arc;

use common::modal_value;
use proptest::prelude::*;
use rand::Rng;
use svkit_core::meshpart::{build_mesh, build_partition, FluxCoefficient, SvVariant, TieBreak};
use svkit_core::metrics::{convergence_orders, z_points};
use svkit_core::polyfield::{broken_error, broken_norm, interpolate, InterpKind, NodalToModal, Norm, PiecewisePoly};
use svkit_core::quadrule::{make_rule, RuleKind};

fn rule_kind() -> impl Strategy<Value = RuleKind> {
    prop_oneof![Just(RuleKind::Gauss), Just(RuleKind::RadauRight), Just(RuleKind::RadauLeft)]
}

proptest! {
    #[test]
    fn nodal_modal_round_trip(kind in rule_kind(), k in 1usize..=8, seed in any::<u64>()) {
        let rule = make_rule(kind, k).unwrap();
        let nodes = &rule.points()[1..=k + 1];
        let mut rng = common::rng(seed);
        let values: Vec<f64> = (0..=k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut coeffs = values.clone();
        NodalToModal::new(nodes).unwrap().apply(&mut coeffs);
        for (s, v) in nodes.iter().zip(&values) {
            prop_assert!((modal_value(&coeffs, *s) - v).abs() < 1e-11);
        }
    }

    #[test]
    fn norms_are_absolutely_homogeneous(k in 1usize..=4, n in 2usize..20, c in -50.0f64..50.0, seed in any::<u64>()) {
        let mesh = Arc::new(build_mesh(n, 0.2, seed).unwrap());
        let u = common::random_poly(&mut common::rng(seed), &mesh, k);
        let mut scaled = u.clone();
        scaled.scale(c);
        for norm in [Norm::L2, Norm::Linf] {
            let (a, b) = (broken_norm(&scaled, norm), c.abs() * broken_norm(&u, norm));
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }

    #[test]
    fn z_points_interlace(mut y in prop::collection::vec(-10.0f64..10.0, 2..8)) {
        y.sort_by(f64::total_cmp);
        y.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(y.len() >= 2);
        let z = z_points(&y);
        prop_assert_eq!(z.len(), y.len() - 1);
        for (gap, zj) in y.windows(2).zip(&z) {
            prop_assert!(gap[0] < *zj && *zj < gap[1]);
        }
    }

    #[test]
    fn orders_of_power_laws_are_exact(p in 0.5f64..8.0, c in 1e-3f64..1e3, levels in 2usize..6) {
        let errors: Vec<(usize, f64)> = (0..levels)
            .map(|l| {
                let n = 8usize << l;
                (n, c * (n as f64).powf(-p))
            })
            .collect();
        for order in convergence_orders(&errors).unwrap() {
            prop_assert!((order - p).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials(k in 1usize..=4, n in 4usize..24, variant_rsv in any::<bool>(), seed in any::<u64>()) {
        let variant = if variant_rsv { SvVariant::Rsv } else { SvVariant::Lsv };
        let mesh = Arc::new(build_mesh(n, 0.25, seed).unwrap());
        let coeff = FluxCoefficient::new(f64::sin, &mesh);
        let partition = build_partition(&mesh, k, variant, &coeff, TieBreak::Sign).unwrap();
        let p = |x: f64| (0..=k).map(|d| (x - 3.0).powi(d as i32) / (d + 1) as f64).sum::<f64>();
        let u: PiecewisePoly = interpolate(p, &partition, InterpKind::Auto, &coeff).unwrap();
        let err = broken_error(&u, p, Norm::Linf);
        prop_assert!(err < 1e-12 * 5f64.powi(k as i32));
    }
}
