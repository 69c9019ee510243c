//! Registry of submersion identities and the sampled verifier.
//!
//! Every record is evaluated on tuples `X, Y, Z` (horizontal), `U, V, W`
//! (vertical) and `E = X + U`, `F = Y + V` drawn at each sample point. Class
//! preconditions are decided on the total space with the same points and
//! seeds that [`AcmStructure::classify`](crate::structure::AcmStructure::classify) uses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::riemann::contract as c;
use crate::sampling::{
    draw_tuples, draw_tuples_from, par_points, scalar_residual, vector_residual, Extras, MaxTracker, Sampling, Verdict,
    Witness,
};
use crate::structure::{classify_acm, ClassId, ClassReport};
use crate::submersion::{SubPointData, SubmersionError, SubmersionSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Submersion(#[from] SubmersionError),
    #[error("unknown identity `{id}`; valid ids: {}", valid.join(", "))]
    UnknownIdentity { id: String, valid: Vec<String> },
    #[error("sampling needs at least one point")]
    NoSamples,
}

/// Sample vectors at one point.
#[derive(Debug, Clone)]
pub struct Tup {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
}

/// Run-level constants available to evaluators.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ctx {
    /// Fitted `α` of the total space, when the precondition provides one.
    pub alpha: f64,
}

type PointFn = fn(&Ctx, &SubPointData, &Tup) -> f64;

#[derive(Clone, Copy)]
pub enum Eval {
    /// Residual per sample.
    Point(PointFn),
    /// Two conditions, each a residual that vanishes when it holds; the
    /// record holds when both sides get the same verdict.
    Equiv(PointFn, PointFn),
    /// Premise and conclusion residuals; vacuous when the premise fails.
    Implies(PointFn, PointFn),
}

#[derive(Clone, Copy)]
pub struct IdentityRecord {
    pub id: &'static str,
    pub statement: &'static str,
    /// Class the total space must hold.
    pub precondition: Option<ClassId>,
    /// Smallest `r` (fibre dimension `2r + 1`).
    pub min_r: usize,
    /// Smallest `n` (base dimension `2n`).
    pub min_n: usize,
    /// Smallest total dimension.
    pub min_dim: usize,
    pub eval: Eval,
}

impl std::fmt::Debug for IdentityRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityRecord")
            .field("id", &self.id)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub statement: String,
    pub precondition: Option<String>,
    pub verdict: Verdict,
    /// `None` when not applicable.
    #[serde(with = "crate::sampling::residual_serde::option")]
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub points: usize,
    pub vectors: usize,
    pub samples: usize,
    pub seed: u64,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
    pub extras: Extras,
}

// ---- evaluation helpers -------------------------------------------------

fn phi(d: &SubPointData, x: &[f64]) -> Vec<f64> {
    d.total.phi_x(x)
}
fn eta(d: &SubPointData, x: &[f64]) -> f64 {
    d.total.eta_x(x)
}
fn om(d: &SubPointData, x: &[f64]) -> f64 {
    d.total.omega_x(x)
}
fn g(d: &SubPointData, x: &[f64], y: &[f64]) -> f64 {
    d.total.g_xy(x, y)
}
fn bphi(d: &SubPointData, x: &[f64], y: &[f64]) -> f64 {
    d.total.big_phi(x, y)
}
fn nphi(d: &SubPointData, x: &[f64], y: &[f64]) -> Vec<f64> {
    d.total.nabla_phi_xy(x, y)
}
fn xi(d: &SubPointData) -> &[f64] {
    &d.total.xi
}
fn lee(d: &SubPointData) -> &[f64] {
    &d.total.lee_vector
}
fn ta(d: &SubPointData, e: &[f64], f: &[f64]) -> Vec<f64> {
    d.t_ef(e, f)
}
fn aa(d: &SubPointData, e: &[f64], f: &[f64]) -> Vec<f64> {
    d.a_ef(e, f)
}
fn vr(d: &SubPointData, l: &[f64], r: &[f64]) -> f64 {
    vector_residual(&d.total.g, l, r)
}
fn zero_res(d: &SubPointData, l: &[f64]) -> f64 {
    vr(d, l, &vec![0.0; l.len()])
}
fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    c::sub(a, b)
}
fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    c::add(a, b)
}
fn sc(s: f64, a: &[f64]) -> Vec<f64> {
    c::scale(s, a)
}
fn t_xi_xi(d: &SubPointData) -> Vec<f64> {
    ta(d, xi(d), xi(d))
}
fn pushed(d: &SubPointData, t: &Tup) -> Vec<Vec<f64>> {
    vec![d.push(&t.x), d.push(&t.y), d.push(&t.z)]
}
fn fibre_tuple(d: &SubPointData, t: &Tup) -> Vec<Vec<f64>> {
    vec![d.to_fibre(&t.u), d.to_fibre(&t.v), d.to_fibre(&t.w)]
}
fn fibre(d: &SubPointData) -> &crate::structure::AcmPointData {
    d.fibre.as_ref().expect("min_r ≥ 1 checked before evaluation")
}

// Shared right-hand sides.

fn rhs15(d: &SubPointData, t: &Tup) -> Vec<f64> {
    let (x, u) = (&t.x, &t.u);
    let axi = aa(d, x, xi(d));
    c::combo(&[
        (om(d, u), &phi(d, x)),
        (-om(d, &phi(d, u)), x),
        (-eta(d, u), &phi(d, &axi)),
    ])
}

fn rhs18(d: &SubPointData, t: &Tup) -> Vec<f64> {
    let (x, u) = (&t.x, &t.u);
    let txi = ta(d, xi(d), x);
    c::combo(&[(-eta(d, u), &phi(d, &txi)), (-g(d, &txi, &phi(d, u)), xi(d))])
}

fn nabla_u_phi_zero(d: &SubPointData, t: &Tup) -> f64 {
    zero_res(d, &nphi(d, &t.u, &t.e))
}

fn t_zero(d: &SubPointData, t: &Tup) -> f64 {
    zero_res(d, &ta(d, &t.u, &t.v)).max(zero_res(d, &ta(d, &t.u, &t.x)))
}

fn a_zero(d: &SubPointData, t: &Tup) -> f64 {
    zero_res(d, &aa(d, &t.x, &t.y)).max(zero_res(d, &aa(d, &t.x, &t.u)))
}

fn umbilic_res(d: &SubPointData, t: &Tup) -> f64 {
    let k = 1.0 / (2.0 * d.r as f64 + 1.0);
    vr(d, &ta(d, &t.u, &t.v), &sc(k * g(d, &t.u, &t.v), &d.mean_curvature()))
}

fn base_vres(d: &SubPointData, l: &[f64], r: &[f64]) -> f64 {
    vector_residual(&d.base.g, l, r)
}

fn base_kahler(d: &SubPointData, t: &Tup) -> f64 {
    d.base.res_kahler(&pushed(d, t))
}

fn fibre_cosymplectic(d: &SubPointData, t: &Tup) -> f64 {
    fibre(d).res_parallel_phi(&fibre_tuple(d, t))
}

/// `(∇'_X Ω)(Y,Z) = β(Y)Ω(X,Z) − β(Z)Ω(X,Y) + β(JY)g'(X,Z) − β(JZ)g'(X,Y)`.
fn base_lc_kahler(d: &SubPointData, t: &Tup) -> f64 {
    let b = &d.base;
    let v = pushed(d, t);
    let (x, y, z) = (&v[0], &v[1], &v[2]);
    let lhs = c::form2(&c::first_slot(&b.nabla_fundamental, x), y, z);
    let rhs = b.beta_x(y) * b.omega_form(x, z) - b.beta_x(z) * b.omega_form(x, y)
        + b.beta_x(&b.j_x(y)) * c::inner(&b.g, x, z)
        - b.beta_x(&b.j_x(z)) * c::inner(&b.g, x, y);
    scalar_residual(lhs, rhs)
}

macro_rules! rec {
    ($id:expr, $st:expr, $pre:expr, $r:expr, $n:expr, $dim:expr, $eval:expr) => {
        IdentityRecord {
            id: $id,
            statement: $st,
            precondition: $pre,
            min_r: $r,
            min_n: $n,
            min_dim: $dim,
            eval: $eval,
        }
    };
}

use ClassId as K;
use Eval::{Equiv, Implies, Point};

const LCAQS: Option<ClassId> = Some(K::LcAlmostQuasiSasakian);

static REGISTRY: &[IdentityRecord] = &[
    // O'Neill tensors in general
    rec!(
        "O.Tsym",
        "T_UV = T_VU",
        None,
        0,
        0,
        0,
        Point(|_, d, t| vr(d, &ta(d, &t.u, &t.v), &ta(d, &t.v, &t.u)))
    ),
    rec!(
        "O.Aalt",
        "A_XY = −A_YX",
        None,
        0,
        0,
        0,
        Point(|_, d, t| vr(d, &aa(d, &t.x, &t.y), &sc(-1.0, &aa(d, &t.y, &t.x))))
    ),
    rec!(
        "O.Abracket",
        "2A_XY = v[X,Y] for basic X, Y",
        None,
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &sc(2.0, &aa(d, &t.x, &t.y)), &d.vert(&d.basic_bracket(&t.x, &t.y))) })
    ),
    // first-order identities of lc almost quasi-Sasakian total spaces
    rec!(
        "P2.1.deta",
        "δη = 0",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, _| scalar_residual(d.total.delta_eta, 0.0))
    ),
    rec!(
        "P2.1.omega_xi",
        "ω(ξ) = 0",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, _| scalar_residual(om(d, xi(d)), 0.0))
    ),
    rec!(
        "P2.1.AXYphiU",
        "g(A_XY, φU) = ω(U)g(X, φY)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            scalar_residual(
                g(d, &aa(d, &t.x, &t.y), &phi(d, &t.u)),
                om(d, &t.u) * g(d, &t.x, &phi(d, &t.y)),
            )
        })
    ),
    rec!(
        "P2.1.AXU",
        "A_XU = η(U)A_Xξ − ω(φU)φX",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let rhs = c::combo(&[
                (eta(d, &t.u), &aa(d, &t.x, xi(d))),
                (-om(d, &phi(d, &t.u)), &phi(d, &t.x)),
            ]);
            vr(d, &aa(d, &t.x, &t.u), &rhs)
        })
    ),
    rec!(
        "P2.1.AXY",
        "A_XY = η(A_XY)ξ + Φ(X,Y)v(φB)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let axy = aa(d, &t.x, &t.y);
            let rhs = c::combo(&[(eta(d, &axy), xi(d)), (bphi(d, &t.x, &t.y), &d.vert(&phi(d, lee(d))))]);
            vr(d, &axy, &rhs)
        })
    ),
    rec!(
        "P2.1.Aphi",
        "A_{φX}U − φ(A_XU) = η(U)(A_{φX}ξ − φ(A_Xξ)); A_XY − A_{φX}φY = η(A_XY − A_{φX}φY)ξ",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, y, u) = (&t.x, &t.y, &t.u);
            let px = phi(d, x);
            let l1 = sub(&aa(d, &px, u), &phi(d, &aa(d, x, u)));
            let r1 = sc(eta(d, u), &sub(&aa(d, &px, xi(d)), &phi(d, &aa(d, x, xi(d)))));
            let l2 = sub(&aa(d, x, y), &aa(d, &px, &phi(d, y)));
            let r2 = sc(eta(d, &l2), xi(d));
            vr(d, &l1, &r1).max(vr(d, &l2, &r2))
        })
    ),
    rec!(
        "P2.2.deta",
        "δ̂η̂ = 0 on the fibres",
        LCAQS,
        1,
        0,
        0,
        Point(|_, d, _| scalar_residual(fibre(d).delta_eta, 0.0))
    ),
    rec!(
        "P2.2.lee",
        "r ≥ 2: ω̂ = ω|TF; r = 1: ω̂(U) = (∇_ξη)U",
        LCAQS,
        1,
        0,
        0,
        Point(|_, d, t| {
            let lhs = fibre(d).omega_x(&d.to_fibre(&t.u));
            let rhs = if d.r >= 2 {
                om(d, &t.u)
            } else {
                d.total.nabla_eta_xy(xi(d), &t.u)
            };
            scalar_residual(lhs, rhs)
        })
    ),
    rec!(
        "P2.2.dPhi",
        "dΦ̂ = −2ω̂∧Φ̂ on the fibres",
        LCAQS,
        1,
        0,
        0,
        Point(|_, d, t| fibre(d).res_lc_phi(&fibre_tuple(d, t)))
    ),
    rec!(
        "P2.3.beta",
        "β(π_*X) = ω(X)",
        LCAQS,
        0,
        2,
        0,
        Point(|_, d, t| scalar_residual(d.base.beta_x(&d.push(&t.x)), om(d, &t.x)))
    ),
    rec!(
        "P2.3.new1",
        "4(n−1)β(X') = 3 Σ_i dΩ(e'_i, Je'_i, X')",
        LCAQS,
        0,
        2,
        0,
        Point(|_, d, t| {
            let b = &d.base;
            let xp = d.push(&t.x);
            let s: f64 = b.frame.iter().map(|e| b.d_omega(e, &b.j_x(e), &xp)).sum();
            scalar_residual(4.0 * (b.half as f64 - 1.0) * b.beta_x(&xp), 3.0 * s)
        })
    ),
    rec!(
        "P2.3.W2W4",
        "dΩ = −2β∧Ω on the base",
        LCAQS,
        0,
        2,
        0,
        Point(|_, d, t| d.base.res_w2w4(&pushed(d, t)))
    ),
    rec!(
        "P2.3.dOmega",
        "dΩ(π_*X, π_*Y, π_*Z) = dΦ(X,Y,Z)",
        None,
        0,
        0,
        0,
        Point(|_, d, t| {
            let p = pushed(d, t);
            scalar_residual(d.base.d_omega(&p[0], &p[1], &p[2]), d.total.d_big_phi(&t.x, &t.y, &t.z))
        })
    ),
    // second-order identities
    rec!(
        "P2.4.h1",
        "h((∇_Xφ)U) = ω(U)φX − ω(φU)X − η(U)φ(A_Xξ)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &d.hor(&nphi(d, &t.x, &t.u)), &rhs15(d, t)) })
    ),
    rec!(
        "P2.4.h2",
        "h((∇_Uφ)X) = η(U)(A_{φX}ξ − φ(A_Xξ))",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let rhs = sc(eta(d, u), &sub(&aa(d, &phi(d, x), xi(d)), &phi(d, &aa(d, x, xi(d)))));
            vr(d, &d.hor(&nphi(d, u, x)), &rhs)
        })
    ),
    rec!(
        "P2.4.sum",
        "(∇_Xφ)U = (right side for h) + (right side for v)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &nphi(d, &t.x, &t.u), &add(&rhs15(d, t), &rhs18(d, t))) })
    ),
    rec!(
        "P2.5.v1",
        "v((∇_Xφ)U) = −η(U)φ(T_ξX) − g(T_ξX, φU)ξ",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &d.vert(&nphi(d, &t.x, &t.u)), &rhs18(d, t)) })
    ),
    rec!(
        "P2.5.v2",
        "v((∇_Uφ)X) = η(U)(T_ξφX − φ(T_ξX)) + ω(X)φU + ω(φX)φ²U + ½N_φ(X, φU)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let (px, pu) = (phi(d, x), phi(d, u));
            let rhs = c::combo(&[
                (eta(d, u), &sub(&ta(d, xi(d), &px), &phi(d, &ta(d, xi(d), x)))),
                (om(d, x), &pu),
                (om(d, &px), &phi(d, &pu)),
                (0.5, &d.total.nijenhuis_xy(x, &pu)),
            ]);
            vr(d, &d.vert(&nphi(d, u, x)), &rhs)
        })
    ),
    rec!(
        "P2.5.T",
        "T_UφV − T_{φU}V = η(U)T_{φV}ξ − η(V)T_{φU}ξ + 2Φ(U,V)h(B)",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let (u, v) = (&t.u, &t.v);
            let (pu, pv) = (phi(d, u), phi(d, v));
            let lhs = sub(&ta(d, u, &pv), &ta(d, &pu, v));
            let rhs = c::combo(&[
                (eta(d, u), &ta(d, &pv, xi(d))),
                (-eta(d, v), &ta(d, &pu, xi(d))),
                (2.0 * bphi(d, u, v), &d.hor(lee(d))),
            ]);
            vr(d, &lhs, &rhs)
        })
    ),
    rec!(
        "P2.5.xi",
        "v(∇_Xξ) = T_ξX − η(T_ξX)ξ",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, t| {
            let txi = ta(d, xi(d), &t.x);
            vr(
                d,
                &d.vert(&d.total.nabla_xi_x(&t.x)),
                &sub(&txi, &sc(eta(d, &txi), xi(d))),
            )
        })
    ),
    rec!(
        "C2.1.N",
        "N = Σ T_{u_i}u_i = 2r h(B) + T_ξξ",
        LCAQS,
        0,
        0,
        0,
        Point(|_, d, _| {
            let rhs = add(&sc(2.0 * d.r as f64, &d.hor(lee(d))), &t_xi_xi(d));
            vr(d, &d.mean_curvature(), &rhs)
        })
    ),
    // almost cosymplectic total space
    rec!(
        "T3.1.A",
        "A = 0",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| a_zero(d, t))
    ),
    rec!(
        "T3.1.Txi",
        "T_ξ = 0",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| { zero_res(d, &ta(d, xi(d), &t.u)).max(zero_res(d, &ta(d, xi(d), &t.x))) })
    ),
    rec!(
        "T3.1.minimal",
        "N = 0",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, _| zero_res(d, &d.mean_curvature()))
    ),
    rec!(
        "T3.1.nablaXU",
        "(∇_Xφ)U = 0",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| zero_res(d, &nphi(d, &t.x, &t.u)))
    ),
    rec!(
        "T3.1.nablaUX",
        "(∇_Uφ)X = ½N_φ(X, φU)",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| {
            vr(
                d,
                &nphi(d, &t.u, &t.x),
                &sc(0.5, &d.total.nijenhuis_xy(&t.x, &phi(d, &t.u))),
            )
        })
    ),
    rec!(
        "T3.1.base",
        "dΩ = 0 on the base",
        Some(K::AlmostCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| d.base.res_almost_kahler(&pushed(d, t)))
    ),
    rec!(
        "T3.1.fibre",
        "dΦ̂ = 0, dη̂ = 0 on the fibres",
        Some(K::AlmostCosymplectic),
        1,
        0,
        0,
        Point(|_, d, t| {
            let v = fibre_tuple(d, t);
            fibre(d).res_closed_phi(&v).max(fibre(d).res_closed_eta(&v))
        })
    ),
    // quasi-Sasakian total space
    rec!(
        "T3.2.base",
        "∇'J = 0",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| base_kahler(d, t))
    ),
    rec!(
        "T3.2.minimal",
        "N = 0",
        Some(K::QuasiSasakian),
        1,
        0,
        0,
        Point(|_, d, _| zero_res(d, &d.mean_curvature()))
    ),
    rec!(
        "T3.2.fibre",
        "fibres quasi-Sasakian: dΦ̂ = 0, N_φ̂ + 2dη̂⊗ξ̂ = 0",
        Some(K::QuasiSasakian),
        1,
        0,
        0,
        Point(|_, d, t| {
            let v = fibre_tuple(d, t);
            fibre(d).res_closed_phi(&v).max(fibre(d).res_normal(&v))
        })
    ),
    rec!(
        "T3.2.A",
        "A_{φX}U = φ(A_XU) = η(U)A_{φX}ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let px = phi(d, x);
            let pa = phi(d, &aa(d, x, u));
            vr(d, &aa(d, &px, u), &pa).max(vr(d, &pa, &sc(eta(d, u), &aa(d, &px, xi(d)))))
        })
    ),
    rec!(
        "T3.2.AXphiU",
        "A_XφU − φ(A_XU) = −η(U)A_{φX}ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let lhs = sub(&aa(d, x, &phi(d, u)), &phi(d, &aa(d, x, u)));
            vr(d, &lhs, &sc(-eta(d, u), &aa(d, &phi(d, x), xi(d))))
        })
    ),
    rec!(
        "T3.2.Axiphi",
        "φ(A_Xξ) = A_{φX}ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &phi(d, &aa(d, &t.x, xi(d))), &aa(d, &phi(d, &t.x), xi(d))) })
    ),
    rec!(
        "T3.2.Txi",
        "T_ξ∘φ = φ∘T_ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &ta(d, xi(d), &phi(d, &t.e)), &phi(d, &ta(d, xi(d), &t.e))) })
    ),
    rec!(
        "T3.2.TUphiV",
        "T_UφV − φ(T_UV) = −η(V)T_ξ(φU)",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (u, v) = (&t.u, &t.v);
            let lhs = sub(&ta(d, u, &phi(d, v)), &phi(d, &ta(d, u, v)));
            vr(d, &lhs, &sc(-eta(d, v), &ta(d, xi(d), &phi(d, u))))
        })
    ),
    rec!(
        "T3.2.nablaUX",
        "(∇_Uφ)X = g(T_ξφU, X)ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            vr(d, &nphi(d, u, x), &sc(g(d, &ta(d, xi(d), &phi(d, u)), x), xi(d)))
        })
    ),
    rec!(
        "T3.2.nablaXU",
        "(∇_Xφ)U = −η(U)(φ(A_Xξ + T_ξX) − g(φ(T_ξX), U)ξ)",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let txi = ta(d, xi(d), x);
            let inner = sub(
                &phi(d, &add(&aa(d, x, xi(d)), &txi)),
                &sc(g(d, &phi(d, &txi), u), xi(d)),
            );
            vr(d, &nphi(d, x, u), &sc(-eta(d, u), &inner))
        })
    ),
    rec!(
        "T3.2.vnablaXphi",
        "v((∇_Xφ)U) = −η(U)φ(T_ξX) + g(φ(T_ξU), X)ξ",
        Some(K::QuasiSasakian),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            let rhs = c::combo(&[
                (-eta(d, u), &phi(d, &ta(d, xi(d), x))),
                (g(d, &phi(d, &ta(d, xi(d), u)), x), xi(d)),
            ]);
            vr(d, &d.vert(&nphi(d, x, u)), &rhs)
        })
    ),
    // α-Sasakian total space
    rec!(
        "T3.6.base",
        "∇'J = 0",
        Some(K::AlphaSasakian),
        0,
        0,
        0,
        Point(|_, d, t| base_kahler(d, t))
    ),
    rec!(
        "T3.6.minimal",
        "N = 0",
        Some(K::AlphaSasakian),
        1,
        0,
        0,
        Point(|_, d, _| zero_res(d, &d.mean_curvature()))
    ),
    rec!(
        "T3.6.fibre",
        "fibres α-Sasakian with the same α",
        Some(K::AlphaSasakian),
        1,
        0,
        0,
        Point(|cx, d, t| { fibre(d).res_c6(&fibre_tuple(d, t), cx.alpha) })
    ),
    rec!(
        "T3.6.A",
        "A_XY = −αΦ(X,Y)ξ",
        Some(K::AlphaSasakian),
        0,
        0,
        0,
        Point(|cx, d, t| { vr(d, &aa(d, &t.x, &t.y), &sc(-cx.alpha * bphi(d, &t.x, &t.y), xi(d))) })
    ),
    rec!(
        "T3.6.T",
        "T_U∘φ = φ∘T_U",
        Some(K::AlphaSasakian),
        0,
        0,
        0,
        Point(|_, d, t| { vr(d, &ta(d, &t.u, &phi(d, &t.e)), &phi(d, &ta(d, &t.u, &t.e))) })
    ),
    // C12 total space
    rec!(
        "T3.3.base",
        "∇'J = 0",
        Some(K::C12),
        0,
        0,
        0,
        Point(|_, d, t| base_kahler(d, t))
    ),
    rec!("T3.3.A", "A = 0", Some(K::C12), 0, 0, 0, Point(|_, d, t| a_zero(d, t))),
    rec!(
        "T3.3.fibre",
        "fibres are C12",
        Some(K::C12),
        1,
        0,
        0,
        Point(|_, d, t| fibre(d).res_c12(&fibre_tuple(d, t)))
    ),
    rec!(
        "T3.3.TUphiV",
        "T_UφV = φ(T_UV) − η(U)η(V)φ(T_ξξ)",
        Some(K::C12),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (u, v) = (&t.u, &t.v);
            let rhs = sub(&phi(d, &ta(d, u, v)), &sc(eta(d, u) * eta(d, v), &phi(d, &t_xi_xi(d))));
            vr(d, &ta(d, u, &phi(d, v)), &rhs)
        })
    ),
    rec!(
        "T3.3.Tsum",
        "T_UV + T_{φU}φV = η(U)η(V)T_ξξ",
        Some(K::C12),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (u, v) = (&t.u, &t.v);
            let lhs = add(&ta(d, u, v), &ta(d, &phi(d, u), &phi(d, v)));
            vr(d, &lhs, &sc(eta(d, u) * eta(d, v), &t_xi_xi(d)))
        })
    ),
    rec!(
        "T3.3.nablaUphi",
        "(∇_Uφ)X = −η(U)g(T_ξξ, φX)ξ",
        Some(K::C12),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (x, u) = (&t.x, &t.u);
            vr(
                d,
                &nphi(d, u, x),
                &sc(-eta(d, u) * g(d, &t_xi_xi(d), &phi(d, x)), xi(d)),
            )
        })
    ),
    rec!(
        "T3.3.nablaXphiU",
        "(∇_Xφ)U = 0",
        Some(K::C12),
        0,
        0,
        0,
        Point(|_, d, t| zero_res(d, &nphi(d, &t.x, &t.u)))
    ),
    rec!(
        "T3.3.umbilic",
        "umbilic fibres (T_UV = ĝ(U,V)N/(2r+1)) ⇒ T = 0",
        Some(K::C12),
        1,
        0,
        0,
        Implies(|_, d, t| umbilic_res(d, t), |_, d, t| t_zero(d, t))
    ),
    // lc almost cosymplectic total space
    rec!(
        "S4A.A",
        "A_XY = Φ(X,Y)v(φB)",
        Some(K::LcAlmostCosymplectic),
        0,
        0,
        5,
        Point(|_, d, t| {
            vr(
                d,
                &aa(d, &t.x, &t.y),
                &sc(bphi(d, &t.x, &t.y), &d.vert(&phi(d, lee(d)))),
            )
        })
    ),
    rec!(
        "S4A.B",
        "B = ∇_ξξ, ω = ∇_ξη",
        Some(K::LcAlmostCosymplectic),
        0,
        0,
        5,
        Point(|_, d, t| {
            let nx = d.total.nabla_xi_x(xi(d));
            vr(d, &nx, lee(d)).max(scalar_residual(om(d, &t.e), d.total.nabla_eta_xy(xi(d), &t.e)))
        })
    ),
    rec!(
        "S4A.hB",
        "h(B) = T_ξξ",
        Some(K::LcAlmostCosymplectic),
        0,
        0,
        5,
        Point(|_, d, _| vr(d, &d.hor(lee(d)), &t_xi_xi(d)))
    ),
    rec!(
        "S4A.mean",
        "N = (2r+1)T_ξξ",
        Some(K::LcAlmostCosymplectic),
        0,
        0,
        5,
        Point(|_, d, _| { vr(d, &d.mean_curvature(), &sc(2.0 * d.r as f64 + 1.0, &t_xi_xi(d))) })
    ),
    rec!(
        "S4A.fibre",
        "r ≥ 2: fibres lc almost cosymplectic; r = 1: δ̂η̂ = 0, δ̂Φ̂(ξ̂) = 0",
        Some(K::LcAlmostCosymplectic),
        1,
        0,
        5,
        Point(|_, d, t| {
            let f = fibre(d);
            if d.r >= 2 {
                let v = fibre_tuple(d, t);
                f.res_lc_phi(&v).max(f.res_deta_lc(&v))
            } else {
                scalar_residual(f.delta_eta, 0.0).max(scalar_residual(c::form1(&f.delta_fundamental, &f.xi), 0.0))
            }
        })
    ),
    rec!(
        "S4A.base",
        "dΩ = −2β∧Ω, dβ = 0",
        Some(K::LcAlmostCosymplectic),
        0,
        2,
        5,
        Point(|_, d, t| {
            let p = pushed(d, t);
            d.base
                .res_w2w4(&p)
                .max(scalar_residual(c::form2(&d.base.d_beta, &p[0], &p[1]), 0.0))
        })
    ),
    rec!(
        "S4A.superminimal",
        "∇_Uφ = 0 ⇔ fibres cosymplectic and T_UφV = φ(T_UV)",
        Some(K::LcAlmostCosymplectic),
        1,
        0,
        5,
        Equiv(
            |_, d, t| nabla_u_phi_zero(d, t),
            |_, d, t| fibre_cosymplectic(d, t).max(vr(d, &ta(d, &t.u, &phi(d, &t.v)), &phi(d, &ta(d, &t.u, &t.v)))),
        )
    ),
    // lc cosymplectic total space
    rec!(
        "S4B.T",
        "T_ξU = η(U)T_ξξ, T_ξX = −ω(X)ξ",
        Some(K::LcCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| {
            let l1 = ta(d, xi(d), &t.u);
            let l2 = ta(d, xi(d), &t.x);
            vr(d, &l1, &sc(eta(d, &t.u), &t_xi_xi(d))).max(vr(d, &l2, &sc(-om(d, &t.x), xi(d))))
        })
    ),
    rec!(
        "S4B.fibre",
        "r ≥ 2: fibres lc cosymplectic; r = 1: fibres C12",
        Some(K::LcCosymplectic),
        1,
        0,
        0,
        Point(|_, d, t| {
            let v = fibre_tuple(d, t);
            if d.r >= 2 {
                fibre(d).res_lc_cosymplectic_nabla(&v)
            } else {
                fibre(d).res_c12(&v)
            }
        })
    ),
    rec!(
        "S4B.base",
        "(∇'_XΩ)(Y,Z) = β(Y)Ω(X,Z) − β(Z)Ω(X,Y) + β(JY)g'(X,Z) − β(JZ)g'(X,Y)",
        Some(K::LcCosymplectic),
        0,
        2,
        0,
        Point(|_, d, t| base_lc_kahler(d, t))
    ),
    rec!(
        "S4B.TUphiV",
        "T_UφV − φ(T_UV) = Φ(U,V)T_ξξ − g(U,V)φ(T_ξξ)",
        Some(K::LcCosymplectic),
        0,
        0,
        0,
        Point(|_, d, t| {
            let (u, v) = (&t.u, &t.v);
            let lhs = sub(&ta(d, u, &phi(d, v)), &phi(d, &ta(d, u, v)));
            let txx = t_xi_xi(d);
            let rhs = c::combo(&[(bphi(d, u, v), &txx), (-g(d, u, v), &phi(d, &txx))]);
            vr(d, &lhs, &rhs)
        })
    ),
    rec!(
        "S4B.superminimal",
        "∇_Uφ = 0 ⇔ fibres minimal and cosymplectic",
        Some(K::LcCosymplectic),
        1,
        0,
        0,
        Equiv(
            |_, d, t| nabla_u_phi_zero(d, t),
            |_, d, t| zero_res(d, &d.mean_curvature()).max(fibre_cosymplectic(d, t)),
        )
    ),
    // C4 ⊕ C6 ⊕ C7 total space
    rec!(
        "S4C.base",
        "n ≥ 2: base W4; n = 1: base Kähler",
        Some(K::C4C6C7),
        0,
        0,
        5,
        Point(|_, d, t| {
            let p = pushed(d, t);
            if d.half >= 2 {
                d.base.res_w2w4(&p).max(d.base.res_integrable(&p))
            } else {
                d.base.res_kahler(&p)
            }
        })
    ),
    rec!(
        "S4C.NJ",
        "N_J(π_*X, π_*Y) = π_*(N_φ(X,Y) + 2dη(X,Y)ξ)",
        Some(K::C4C6C7),
        0,
        0,
        5,
        Point(|_, d, t| {
            let (x, y) = (&t.x, &t.y);
            let lhs = c::vector_2(&d.base.nijenhuis, &d.push(x), &d.push(y));
            let full = add(&d.total.nijenhuis_xy(x, y), &sc(2.0 * d.total.d_eta_xy(x, y), xi(d)));
            base_vres(d, &lhs, &d.push(&full))
        })
    ),
    rec!(
        "S4C.A",
        "A_{φX}U = φ(A_XU), A_XY = A_{φX}φY",
        Some(K::C4C6C7),
        0,
        0,
        5,
        Point(|_, d, t| {
            let (x, y, u) = (&t.x, &t.y, &t.u);
            let px = phi(d, x);
            vr(d, &aa(d, &px, u), &phi(d, &aa(d, x, u))).max(vr(d, &aa(d, x, y), &aa(d, &px, &phi(d, y))))
        })
    ),
    rec!(
        "S4C.Txi",
        "T_ξ∘φ = φ∘T_ξ",
        Some(K::C4C6C7),
        0,
        0,
        5,
        Point(|_, d, t| { vr(d, &ta(d, xi(d), &phi(d, &t.e)), &phi(d, &ta(d, xi(d), &t.e))) })
    ),
    rec!(
        "S4C.nablaxi",
        "φ(∇_Eξ) = ∇_{φE}ξ",
        Some(K::C4C6C7),
        0,
        0,
        5,
        Point(|_, d, t| {
            vr(
                d,
                &phi(d, &d.total.nabla_xi_x(&t.e)),
                &d.total.nabla_xi_x(&phi(d, &t.e)),
            )
        })
    ),
    rec!(
        "S4C.fibre",
        "r ≥ 2: fibres C4 ⊕ C6 ⊕ C7; r = 1: fibres C6 with α̂ = δ̂Φ̂(ξ̂)/2",
        Some(K::C4C6C7),
        1,
        0,
        5,
        Point(|_, d, t| {
            let f = fibre(d);
            let v = fibre_tuple(d, t);
            if d.r >= 2 {
                f.res_c4c6c7_nabla(&v)
            } else {
                f.res_c6(&v, c::form1(&f.delta_fundamental, &f.xi) / 2.0)
            }
        })
    ),
    rec!(
        "S4C.umbilic",
        "umbilic fibres ⇒ T = 0, h(B) = 0 and ∇'J = 0",
        Some(K::C4C6C7),
        1,
        0,
        5,
        Implies(
            |_, d, t| umbilic_res(d, t),
            |_, d, t| t_zero(d, t).max(zero_res(d, &d.hor(lee(d)))).max(base_kahler(d, t)),
        )
    ),
    // fibre tests without class hypotheses
    rec!(
        "umbilic",
        "T_UV = ĝ(U,V)N/(2r+1)",
        None,
        1,
        0,
        0,
        Point(|_, d, t| umbilic_res(d, t))
    ),
    rec!(
        "superminimal",
        "∇_Uφ = 0",
        None,
        1,
        0,
        0,
        Point(|_, d, t| nabla_u_phi_zero(d, t))
    ),
];

pub fn registry() -> &'static [IdentityRecord] {
    REGISTRY
}

pub fn identity_ids() -> Vec<String> {
    REGISTRY.iter().map(|r| r.id.to_string()).collect()
}

/// Resolves `all`, exact ids and `prefix.*` patterns, keeping registry order.
pub fn select(patterns: &[&str]) -> Result<Vec<&'static IdentityRecord>, VerifyError> {
    let mut keep = vec![false; REGISTRY.len()];
    for p in patterns {
        let p = p.trim();
        let hit: Vec<usize> = if p == "all" || p == "*" {
            (0..REGISTRY.len()).collect()
        } else if let Some(prefix) = p.strip_suffix('*') {
            (0..REGISTRY.len())
                .filter(|&i| REGISTRY[i].id.starts_with(prefix))
                .collect()
        } else {
            (0..REGISTRY.len()).filter(|&i| REGISTRY[i].id == p).collect()
        };
        if hit.is_empty() {
            return Err(VerifyError::UnknownIdentity {
                id: p.to_string(),
                valid: identity_ids(),
            });
        }
        for i in hit {
            keep[i] = true;
        }
    }
    Ok(REGISTRY.iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect())
}

/// Sampled data shared by all identities of one run.
pub struct Verifier<'a> {
    spec: &'a SubmersionSpec,
    sampling: Sampling,
    data: Vec<SubPointData>,
    tuples: Vec<Vec<Tup>>,
    classes: BTreeMap<ClassId, ClassReport>,
}

impl<'a> Verifier<'a> {
    pub fn new(spec: &'a SubmersionSpec, sampling: Sampling) -> Result<Self, VerifyError> {
        if sampling.points == 0 {
            return Err(VerifyError::NoSamples);
        }
        let points = spec.total().chart().sample_points(sampling.points, sampling.seed);
        let data = par_points(&points, |p| spec.point_data(p))?;
        let tuples = data
            .iter()
            .map(|d| {
                let p = &d.total.point;
                let hs = draw_tuples_from(&mut p.stream(1), &d.hframe, sampling.vectors);
                let vs = draw_tuples_from(&mut p.stream(2), &d.vframe, sampling.vectors);
                hs.into_iter()
                    .zip(vs)
                    .map(|(h, v)| Tup {
                        e: c::add(&h[0], &v[0]),
                        f: c::add(&h[1], &v[1]),
                        x: h[0].clone(),
                        y: h[1].clone(),
                        z: h[2].clone(),
                        u: v[0].clone(),
                        v: v[1].clone(),
                        w: v[2].clone(),
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            spec,
            sampling,
            data,
            tuples,
            classes: BTreeMap::new(),
        })
    }

    pub fn data(&self) -> &[SubPointData] {
        &self.data
    }

    /// Class report of the total space, as `classify` would produce it.
    pub fn class_report(&mut self, class: ClassId) -> &ClassReport {
        let (data, sampling) = (&self.data, &self.sampling);
        self.classes.entry(class).or_insert_with(|| {
            let total: Vec<_> = data.iter().map(|d| d.total.clone()).collect();
            let tuples: Vec<_> = total
                .iter()
                .map(|t| draw_tuples(&t.point, &t.frame, sampling.vectors))
                .collect();
            classify_acm(class, &total, &tuples, sampling)
        })
    }

    fn report(&self, r: &IdentityRecord) -> VerificationReport {
        VerificationReport {
            identity: r.id.to_string(),
            statement: r.statement.to_string(),
            precondition: r.precondition.map(|c| c.as_str().to_string()),
            verdict: Verdict::NotApplicable,
            max_residual: None,
            tolerance: self.sampling.tol,
            points: self.sampling.points,
            vectors: self.sampling.vectors,
            samples: 0,
            seed: self.sampling.seed,
            witness: None,
            reason: None,
            extras: Extras::new(),
        }
    }

    fn track(&self, cx: &Ctx, f: PointFn) -> MaxTracker {
        let mut tr = MaxTracker::default();
        for (d, ts) in self.data.iter().zip(&self.tuples) {
            for t in ts {
                let vectors = [&t.x, &t.y, &t.z, &t.u, &t.v, &t.w].map(|v| v.clone());
                tr.observe(f(cx, d, t), &d.total.point, &vectors);
            }
        }
        tr
    }

    pub fn verify(&mut self, r: &IdentityRecord) -> VerificationReport {
        let mut out = self.report(r);
        let (rr, nn, dim) = (self.spec.r(), self.spec.base().half_dim(), self.spec.total().dim());
        let unmet = if rr < r.min_r {
            Some(format!("needs r ≥ {} (fibre dimension 2r+1), here r = {rr}", r.min_r))
        } else if nn < r.min_n {
            Some(format!("needs base dimension ≥ {}, here {}", 2 * r.min_n, 2 * nn))
        } else if dim < r.min_dim {
            Some(format!("needs total dimension ≥ {}, here {dim}", r.min_dim))
        } else {
            None
        };
        if unmet.is_some() {
            out.reason = unmet;
            return out;
        }
        let mut cx = Ctx::default();
        if let Some(class) = r.precondition {
            let tol = self.sampling.tol;
            let rep = self.class_report(class);
            if rep.verdict != Verdict::Holds {
                out.reason = Some(format!(
                    "requires {class}: {} with residual {:e} (tolerance {tol:e})",
                    rep.verdict.as_str(),
                    rep.max_residual
                ));
                return out;
            }
            if let Some(&a) = rep.extras.get("alpha") {
                cx.alpha = a;
                out.extras.insert("alpha".into(), a);
            }
        }
        let tol = self.sampling.tol;
        let tracker = match r.eval {
            Point(f) => self.track(&cx, f),
            Equiv(lhs, rhs) => {
                let (l, rt) = (self.track(&cx, lhs), self.track(&cx, rhs));
                out.extras.insert("lhs_max_residual".into(), l.max);
                out.extras.insert("rhs_max_residual".into(), rt.max);
                let agree = (l.max < tol) == (rt.max < tol);
                if agree {
                    MaxTracker {
                        max: 0.0,
                        witness: None,
                        samples: l.samples,
                    }
                } else {
                    let mut m = l;
                    m.merge(rt);
                    m
                }
            }
            Implies(premise, conclusion) => {
                let p = self.track(&cx, premise);
                out.extras.insert("premise_max_residual".into(), p.max);
                if p.max < tol {
                    self.track(&cx, conclusion)
                } else {
                    out.reason = Some("premise does not hold; implication is vacuous".into());
                    MaxTracker {
                        max: 0.0,
                        witness: None,
                        samples: p.samples,
                    }
                }
            }
        };
        out.verdict = Verdict::from_residual(tracker.max, tol);
        out.max_residual = Some(tracker.max);
        out.samples = tracker.samples;
        out.witness = tracker.witness;
        out
    }
}

/// Verifies the identities matched by `patterns`.
pub fn verify(
    spec: &SubmersionSpec,
    patterns: &[&str],
    sampling: &Sampling,
) -> Result<Vec<VerificationReport>, VerifyError> {
    let records = select(patterns)?;
    let mut v = Verifier::new(spec, *sampling)?;
    Ok(records.into_iter().map(|r| v.verify(r)).collect())
}

pub fn verify_identity(
    spec: &SubmersionSpec,
    id: &str,
    sampling: &Sampling,
) -> Result<VerificationReport, VerifyError> {
    Ok(verify(spec, &[id], sampling)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let ids = identity_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn patterns_resolve() {
        assert_eq!(select(&["all"]).unwrap().len(), REGISTRY.len());
        let t31 = select(&["T3.1.*"]).unwrap();
        assert!(t31.len() >= 5 && t31.iter().all(|r| r.id.starts_with("T3.1.")));
        assert!(matches!(
            select(&["bogus.id"]),
            Err(VerifyError::UnknownIdentity { .. })
        ));
    }
}
