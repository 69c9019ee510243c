use contactgeo::constructions::{
    build_c12_model, build_conformal_change, build_product, build_warped, c12_model, cosymplectic_r3, flat_kahler_r4,
    hopf_like_r5_to_r4, warped_s4,
};
use contactgeo::manifold::PointSample;
use contactgeo::structure::ClassId;
use contactgeo::{AcmStructure, Sampling, ScalarFieldExpr, SubmersionError, SubmersionSpec, Verdict};

const TOL: f64 = 1e-12;

fn close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() <= tol, "component {k}: {x} vs {y} (all {a:?} vs {b:?})");
    }
}

fn e(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
}

fn class(s: &AcmStructure, c: ClassId) -> Verdict {
    s.classify(c, &Sampling::default()).unwrap().verdict
}

#[test]
fn hopf_split_and_lifts() {
    // η = ½(dz − y1 dx1 − y2 dx2), vertical = span{∂z}, horizontal = ker η.
    let s = hopf_like_r5_to_r4().unwrap();
    let p = [0.3, -0.4, 0.2, 0.5, 0.1];
    let lift = s.horizontal_lift(&p, &[1.0, 0.0, 0.0, 0.0]).unwrap();
    close(&lift, &[1.0, 0.0, 0.0, 0.0, -0.4], TOL);
    let lift = s.horizontal_lift(&p, &[0.0, 0.0, 1.0, 0.0]).unwrap();
    close(&lift, &[0.0, 0.0, 1.0, 0.0, 0.5], TOL);

    let d = s.point_data(&PointSample::at(p.to_vec())).unwrap();
    assert_eq!((d.half, d.r), (2, 0));
    assert_eq!(d.vframe.len(), 1);
    assert_eq!(d.hframe.len(), 4);
    // |∂z|² = ¼, so the unit vertical vector is ±2∂z.
    let u = &d.vframe[0];
    close(&u[..4], &[0.0; 4], TOL);
    assert!((u[4].abs() - 2.0).abs() < TOL);
}

#[test]
fn projector_invariants() {
    let s = warped_s4().unwrap();
    let p = [0.2, -0.1, 0.4, 0.3, -0.6];
    let d = s.point_data(&PointSample::at(p.to_vec())).unwrap();
    let n = d.n;
    for i in 0..n {
        let x = e(n, i);
        let vx = d.vert(&x);
        close(&d.vert(&vx), &vx, TOL);
        close(&d.hor(&vx), &vec![0.0; n], TOL);
        for j in 0..n {
            let y = e(n, j);
            assert!(d.total.g_xy(&vx, &d.hor(&y)).abs() < TOL);
        }
    }
    for (a, u) in d.vframe.iter().enumerate() {
        for (b, w) in d.vframe.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((d.total.g_xy(u, w) - want).abs() < TOL);
        }
    }
    // ξ is the last vertical vector.
    close(d.vframe.last().unwrap(), &d.total.xi, TOL);
}

#[test]
fn split_frames_have_jets() {
    let s = warped_s4().unwrap();
    let sp = s.split(&[0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
    assert_eq!(sp.vertical_frame.len(), 3);
    assert_eq!(sp.horizontal_frame.len(), 2);
    assert_eq!(sp.lifts.len(), 2);
    assert_eq!(sp.v.len(), 25);
    // ξ = e^{-u}∂c: the last vertical vector carries ∂_u ξ^c = −e^{-u}.
    let xi_c = &sp.vertical_frame[2][4];
    assert!((xi_c.value() - (-0.1f64).exp()).abs() < TOL);
    assert!((xi_c.grad(0) + (-0.1f64).exp()).abs() < 1e-10);
}

#[test]
fn rank_deficient_projection_is_rejected() {
    let s = warped_s4().unwrap();
    let bad = vec![
        ScalarFieldExpr::parse("u").unwrap(),
        ScalarFieldExpr::parse("2*u").unwrap(),
    ];
    let r = SubmersionSpec::new(s.total().clone(), s.base().clone(), bad).and_then(|sp| sp.validate(8, 1).map(|_| sp));
    assert!(r.is_err(), "rank-deficient projection accepted");
}

#[test]
fn projection_shape_is_checked() {
    let s = warped_s4().unwrap();
    let short = vec![ScalarFieldExpr::parse("u").unwrap()];
    let r = SubmersionSpec::new(s.total().clone(), s.base().clone(), short);
    assert!(matches!(r, Err(SubmersionError::Shape(_))));
}

#[test]
fn warped_t_is_minus_g_grad_log_f() {
    // g = du² + dv² + e^{2u}(da² + db² + dc²), grad log f = ∂u, so
    // T(∂a, ∂a) = −e^{2u}∂u, T(∂a, ∂b) = 0, T(ξ, ξ) = −∂u.
    let s = warped_s4().unwrap();
    for &u in &[0.0, 0.35, -0.7] {
        let p = [u, 0.2, -0.3, 0.1, 0.4];
        let t = s.oneill_t(&p, &e(5, 2), &e(5, 2)).unwrap();
        close(&t, &[-(2.0 * u).exp(), 0.0, 0.0, 0.0, 0.0], 1e-12);
        let t = s.oneill_t(&p, &e(5, 2), &e(5, 3)).unwrap();
        close(&t, &[0.0; 5], 1e-12);
        let xi = [0.0, 0.0, 0.0, 0.0, (-u).exp()];
        let t = s.oneill_t(&p, &xi, &xi).unwrap();
        close(&t, &[-1.0, 0.0, 0.0, 0.0, 0.0], 1e-12);
        // Horizontal arguments in the first slot give zero.
        close(&s.oneill_t(&p, &e(5, 0), &e(5, 2)).unwrap(), &[0.0; 5], 1e-12);
    }
}

#[test]
fn warped_a_vanishes() {
    let s = warped_s4().unwrap();
    let p = [0.3, -0.2, 0.1, 0.5, -0.4];
    for i in 0..5 {
        for j in 0..5 {
            close(&s.oneill_a(&p, &e(5, i), &e(5, j)).unwrap(), &[0.0; 5], 1e-12);
        }
    }
    // Mean curvature of the fibres: N = Σ T(e_a, e_a) = −3∂u.
    close(&s.mean_curvature(&p).unwrap(), &[-3.0, 0.0, 0.0, 0.0, 0.0], 1e-12);
}

#[test]
fn hopf_a_on_lifts() {
    // [∂x1 + y1∂z, ∂y1] = −∂z, A = ½v[X, Y].
    let s = hopf_like_r5_to_r4().unwrap();
    let p = [0.1, 0.2, -0.3, 0.4, 0.0];
    let x = s.horizontal_lift(&p, &[1.0, 0.0, 0.0, 0.0]).unwrap();
    let y = s.horizontal_lift(&p, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    close(&s.oneill_a(&p, &x, &y).unwrap(), &[0.0, 0.0, 0.0, 0.0, -0.5], 1e-12);
    close(&s.oneill_a(&p, &y, &x).unwrap(), &[0.0, 0.0, 0.0, 0.0, 0.5], 1e-12);
    // 1-dimensional geodesic fibres: T = 0.
    let xi = [0.0, 0.0, 0.0, 0.0, 2.0];
    close(&s.oneill_t(&p, &xi, &xi).unwrap(), &[0.0; 5], 1e-12);
}

#[test]
fn oneill_tensors_are_tensorial() {
    let s = hopf_like_r5_to_r4().unwrap();
    let p = [0.3, 0.1, -0.2, 0.25, 0.6];
    let e1 = [0.3, -1.0, 0.2, 0.7, 1.1];
    let e2 = [-0.5, 0.4, 1.0, -0.2, 0.3];
    let f = [0.9, 0.1, -0.6, 0.4, -0.8];
    let lam = 2.75;
    let scaled: Vec<f64> = e1.iter().map(|x| lam * x).collect();
    let sum: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| a + b).collect();
    for op in [SubmersionSpec::oneill_a, SubmersionSpec::oneill_t] {
        let base = op(&s, &p, &e1, &f).unwrap();
        let want: Vec<f64> = base.iter().map(|x| lam * x).collect();
        close(&op(&s, &p, &scaled, &f).unwrap(), &want, 1e-12);
        close(
            &op(&s, &p, &f, &scaled).unwrap(),
            &op(&s, &p, &f, &e1).unwrap().iter().map(|x| lam * x).collect::<Vec<_>>(),
            1e-12,
        );
        let b2 = op(&s, &p, &e2, &f).unwrap();
        let want: Vec<f64> = base.iter().zip(&b2).map(|(a, b)| a + b).collect();
        close(&op(&s, &p, &sum, &f).unwrap(), &want, 1e-12);
    }
}

#[test]
fn fibre_structure_of_warped_product() {
    let s = warped_s4().unwrap();
    let u0 = 0.4;
    let f = s.fibre_structure(&[u0, -0.2]).unwrap();
    assert_eq!(f.dim(), 3);
    assert_eq!(f.chart().coords(), ["a", "b", "c"]);
    let g = f.chart().metric_at(&[0.1, 0.2, 0.3]).unwrap().values();
    let k = (2.0 * u0).exp();
    close(&g, &[k, 0.0, 0.0, 0.0, k, 0.0, 0.0, 0.0, k], 1e-12);
    let d = f.point_data(&PointSample::at(vec![0.1, 0.2, 0.3])).unwrap();
    close(&d.xi, &[0.0, 0.0, (-u0).exp()], 1e-12);
    assert_eq!(class(&f, ClassId::C12), Verdict::Holds);
    assert_eq!(class(&f, ClassId::Cosymplectic), Verdict::Holds);
}

#[test]
fn one_dimensional_fibres_have_no_structure() {
    let s = hopf_like_r5_to_r4().unwrap();
    assert_eq!(s.r(), 0);
    assert!(matches!(
        s.fibre_structure(&[0.0; 4]),
        Err(SubmersionError::NoFibreStructure)
    ));
}

#[test]
fn product_scales_eta_and_xi() {
    // n = 2, r = 1: η = ⅓ dc, ξ = 3∂c, fibre metric (⅓)²δ.
    let s = build_product(&flat_kahler_r4().unwrap(), &cosymplectic_r3().unwrap()).unwrap();
    let p = vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
    let d = s.total().point_data(&PointSample::at(p)).unwrap();
    close(&d.xi, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0], 1e-12);
    close(&d.eta, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 3.0], 1e-12);
    assert!((d.g[6 * 7 + 6] - 1.0 / 9.0).abs() < 1e-12);
    assert!((d.g[0] - 1.0).abs() < 1e-12);
    s.validate(16, 3).unwrap();
}

#[test]
fn trivial_warping_is_cosymplectic() {
    let base = warped_s4().unwrap().base().clone();
    let s = build_warped(
        &base,
        &cosymplectic_r3().unwrap(),
        &ScalarFieldExpr::parse("1").unwrap(),
    )
    .unwrap();
    assert_eq!(class(s.total(), ClassId::Cosymplectic), Verdict::Holds);
    let s = warped_s4().unwrap();
    assert_eq!(class(s.total(), ClassId::Cosymplectic), Verdict::Fails);
    assert_eq!(class(s.total(), ClassId::LcCosymplectic), Verdict::Holds);
}

#[test]
fn warping_needs_positive_function() {
    let base = warped_s4().unwrap().base().clone();
    let r = build_warped(
        &base,
        &cosymplectic_r3().unwrap(),
        &ScalarFieldExpr::parse("u").unwrap(),
    );
    assert!(r.is_err());
}

#[test]
fn conformal_change_of_cosymplectic() {
    let s = build_conformal_change(&cosymplectic_r3().unwrap(), &ScalarFieldExpr::parse("a").unwrap()).unwrap();
    assert_eq!(class(&s, ClassId::LcCosymplectic), Verdict::Holds);
    assert_eq!(class(&s, ClassId::Cosymplectic), Verdict::Fails);
    // dΦ̃ = 2dρ∧Φ̃ = −2ω∧Φ̃, so ω = −dρ = −da.
    let d = s.point_data(&PointSample::at(vec![0.2, 0.1, -0.3])).unwrap();
    close(&d.omega, &[-1.0, 0.0, 0.0], 1e-12);
}

#[test]
fn c12_model_geodesic_reeb_lines() {
    // f = f(t): the t-lines are geodesics, T_ξξ = 0.
    let f = ScalarFieldExpr::parse("exp(t)").unwrap();
    let s = build_c12_model(&flat_kahler_r4().unwrap(), "t", &f, (-1.0, 1.0)).unwrap();
    let p = [0.1, -0.2, 0.3, 0.4, 0.5];
    let xi = [0.0, 0.0, 0.0, 0.0, (-0.5f64).exp()];
    close(&s.oneill_t(&p, &xi, &xi).unwrap(), &[0.0; 5], 1e-12);
    assert_eq!(class(s.total(), ClassId::C12), Verdict::Holds);
}

#[test]
fn c12_model_reeb_acceleration() {
    // f = e^{x1}: T_ξξ = −h grad log f = −∂x1.
    let s = c12_model().unwrap();
    let p = [0.3, -0.2, 0.1, 0.4, -0.5];
    let xi = [0.0, 0.0, 0.0, 0.0, (-0.3f64).exp()];
    close(&s.oneill_t(&p, &xi, &xi).unwrap(), &[-1.0, 0.0, 0.0, 0.0, 0.0], 1e-12);
    assert_eq!(class(s.total(), ClassId::C12), Verdict::Holds);
    assert_eq!(class(s.total(), ClassId::C4C6C7), Verdict::Fails);
}

#[test]
fn c12_model_needs_kahler_base() {
    let kt = contactgeo::constructions::kodaira_thurston().unwrap();
    let f = ScalarFieldExpr::parse("1").unwrap();
    assert!(build_c12_model(&kt, "t", &f, (-1.0, 1.0)).is_err());
}
