#![allow(clippy::needless_range_loop)]

use contactgeo::constructions::{build_conformal_change, cosymplectic_r3, sasakian_r3};
use contactgeo::expr::{BinOp, Expr, Func};
use contactgeo::manifold::PointSample;
use contactgeo::riemann::{d_1form, d_2form};
use contactgeo::structure::ClassId;
use contactgeo::{AcmStructure, Jet2, Sampling, ScalarFieldExpr, Verdict, Witness};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn coords() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(Expr::Num),
        (-100.0f64..0.0).prop_map(Expr::Num),
        prop::sample::select(VARS.to_vec()).prop_map(|v| Expr::Var(v.into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

/// Cubic polynomial in x, y, z from 20 coefficients.
fn cubic(c: &[f64]) -> String {
    let mut mons = vec!["1".to_string()];
    for i in 0..3 {
        mons.push(VARS[i].into());
        for j in i..3 {
            mons.push(format!("{}*{}", VARS[i], VARS[j]));
            for k in j..3 {
                mons.push(format!("{}*{}*{}", VARS[i], VARS[j], VARS[k]));
            }
        }
    }
    mons.iter()
        .zip(c)
        .map(|(m, c)| format!("({c:?})*{m}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn seeded(p: &[f64]) -> Vec<Jet2> {
    p.iter()
        .enumerate()
        .map(|(i, &x)| Jet2::variable(x, i, p.len()))
        .collect()
}

fn verdict(s: &AcmStructure, c: ClassId) -> Verdict {
    let sm = Sampling {
        points: 6,
        vectors: 3,
        ..Sampling::default()
    };
    s.classify(c, &sm).unwrap().verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_is_a_parse_fixed_point(e in arb_expr()) {
        let printed = e.to_string();
        let parsed = ScalarFieldExpr::parse(&printed).unwrap();
        prop_assert_eq!(parsed.to_string(), printed.clone());
        let again = ScalarFieldExpr::parse(&parsed.to_string()).unwrap();
        prop_assert_eq!(again.ast(), parsed.ast());
        let original = ScalarFieldExpr::from_ast(e);
        let p = [0.3, -0.7, 1.1];
        let a = original.compile(&coords()).unwrap().eval_f64(&p);
        let b = parsed.compile(&coords()).unwrap().eval_f64(&p);
        match (a, b) {
            (Ok(a), Ok(b)) if a.is_finite() => prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} vs {}", a, b),
            (Ok(_), Ok(_)) | (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?} for {}", a, b, printed),
        }
    }

    #[test]
    fn jets_match_finite_differences(c in prop::collection::vec(-2.0f64..2.0, 20), p in prop::array::uniform3(-1.0f64..1.0)) {
        let f = ScalarFieldExpr::parse(&cubic(&c)).unwrap().compile(&coords()).unwrap();
        let j = f.eval(&seeded(&p)).unwrap();
        let h = 1e-4;
        for i in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[i] += h;
            pm[i] -= h;
            let fd = (f.eval_f64(&pp).unwrap() - f.eval_f64(&pm).unwrap()) / (2.0 * h);
            prop_assert!((j.grad(i) - fd).abs() < 1e-6, "grad {}: {} vs {}", i, j.grad(i), fd);
            let gp = f.eval(&seeded(&pp)).unwrap();
            let gm = f.eval(&seeded(&pm)).unwrap();
            for k in 0..3 {
                let fd = (gp.grad(k) - gm.grad(k)) / (2.0 * h);
                prop_assert!((j.hess(i, k) - fd).abs() < 1e-6, "hess {}{}: {} vs {}", i, k, j.hess(i, k), fd);
            }
        }
    }

    #[test]
    fn d_of_d_vanishes(c in prop::collection::vec(-2.0f64..2.0, 60), p in prop::array::uniform3(-1.0f64..1.0)) {
        let eta: Vec<Jet2> = (0..3)
            .map(|i| ScalarFieldExpr::parse(&cubic(&c[20 * i..20 * i + 20])).unwrap().compile(&coords()).unwrap().eval(&seeded(&p)).unwrap())
            .collect();
        let dd = d_2form(&d_1form(&eta), 3);
        for v in dd {
            prop_assert!(v.value().abs() < 1e-12);
        }
    }

    #[test]
    fn residual_serde_round_trips(r in prop_oneof![any::<f64>(), Just(f64::INFINITY), Just(f64::NEG_INFINITY), Just(f64::NAN)]) {
        let w = Witness { point_index: 3, point: vec![0.5, -0.25], vectors: vec![vec![1.0, 0.0]], residual: r };
        let text = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&text).unwrap();
        if r.is_nan() {
            prop_assert!(back.residual.is_nan());
        } else {
            prop_assert_eq!(back.residual.to_bits(), r.to_bits());
        }
    }

    #[test]
    fn verdict_thresholds_are_ordered(x in 0.0f64..1.0, tol in 1e-12f64..1e-3) {
        let v = Verdict::from_residual(x, tol);
        prop_assert_eq!(v == Verdict::Holds, x < tol);
        prop_assert_eq!(v == Verdict::Fails, x > 100.0 * tol);
        prop_assert_eq!(Verdict::from_residual(f64::INFINITY, tol), Verdict::Fails);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conformal_change_inverts(a in -1.0f64..1.0, b in -1.0f64..1.0, k in -1.0f64..1.0) {
        let rho = ScalarFieldExpr::parse(&format!("({a:?})*a + ({b:?})*b*c + ({k:?})*sin(c)")).unwrap();
        let minus = ScalarFieldExpr::parse(&format!("-({rho})")).unwrap();
        let src = build_conformal_change(&cosymplectic_r3().unwrap(), &rho).unwrap();
        let back = build_conformal_change(&src, &minus).unwrap();
        let orig = cosymplectic_r3().unwrap();
        let p = PointSample::at(vec![0.2, -0.4, 0.6]);
        let (d0, d1) = (orig.point_data(&p).unwrap(), back.point_data(&p).unwrap());
        for (x, y) in d0.g.iter().zip(&d1.g).chain(d0.xi.iter().zip(&d1.xi)).chain(d0.eta.iter().zip(&d1.eta)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!(back.check_invariants(8, 1).unwrap() < 1e-12);
    }

    #[test]
    fn class_hierarchy_is_nested(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, base in 0usize..2) {
        let (s0, v) = if base == 0 { (sasakian_r3().unwrap(), VARS) } else { (cosymplectic_r3().unwrap(), ["a", "b", "c"]) };
        let rho = ScalarFieldExpr::parse(&format!("({a:?})*{} + ({b:?})*{} + ({c:?})*{}", v[0], v[1], v[2])).unwrap();
        let s = build_conformal_change(&s0, &rho).unwrap();
        let pairs = [
            (ClassId::Cosymplectic, ClassId::AlmostCosymplectic),
            (ClassId::Cosymplectic, ClassId::LcCosymplectic),
            (ClassId::LcCosymplectic, ClassId::LcAlmostCosymplectic),
            (ClassId::AlmostCosymplectic, ClassId::LcAlmostCosymplectic),
            (ClassId::AlphaSasakian, ClassId::QuasiSasakian),
            (ClassId::QuasiSasakian, ClassId::LcAlmostQuasiSasakian),
        ];
        for (small, big) in pairs {
            if verdict(&s, small) == Verdict::Holds {
                prop_assert_ne!(verdict(&s, big), Verdict::Fails, "{} holds but {} fails", small, big);
            }
        }
        // Conformal changes keep φ, so lc classes survive.
        if base == 1 {
            prop_assert_eq!(verdict(&s, ClassId::LcCosymplectic), Verdict::Holds);
        }
    }
}
