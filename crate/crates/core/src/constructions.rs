//! Builders for products, warped products, conformal changes and the
//! `C12` model, plus the named catalog used by tests and the CLI.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{BinOp, Expr, ScalarFieldExpr};
use crate::manifold::{ChartManifold, CovectorField, EndoField, VectorField};
use crate::sampling::Verdict;
use crate::structure::{AcmStructure, AhStructure, ClassId, StructureError};
use crate::submersion::{SubmersionError, SubmersionSpec};

/// Positivity of warping functions is checked on this many points.
const POSITIVITY_POINTS: usize = 64;

fn literal(e: &ScalarFieldExpr) -> Option<f64> {
    match e.ast() {
        Expr::Num(x) => Some(*x),
        _ => None,
    }
}

/// `a·b` with literal zeros and ones folded.
pub fn times(a: &ScalarFieldExpr, b: &ScalarFieldExpr) -> ScalarFieldExpr {
    match (literal(a), literal(b)) {
        (Some(0.0), _) | (_, Some(0.0)) => ScalarFieldExpr::constant(0.0),
        (Some(x), Some(y)) => ScalarFieldExpr::constant(x * y),
        (Some(1.0), _) => b.clone(),
        (_, Some(1.0)) => a.clone(),
        _ => ScalarFieldExpr::from_ast(Expr::Bin(
            BinOp::Mul,
            Box::new(a.ast().clone()),
            Box::new(b.ast().clone()),
        )),
    }
}

fn call(f: crate::expr::Func, e: &ScalarFieldExpr) -> ScalarFieldExpr {
    ScalarFieldExpr::from_ast(Expr::Call(f, Box::new(e.ast().clone())))
}

fn neg(e: &ScalarFieldExpr) -> ScalarFieldExpr {
    match literal(e) {
        Some(x) => ScalarFieldExpr::constant(-x),
        None => ScalarFieldExpr::from_ast(Expr::Neg(Box::new(e.ast().clone()))),
    }
}

fn zero() -> ScalarFieldExpr {
    ScalarFieldExpr::constant(0.0)
}

/// Block-diagonal `dim(a)+dim(b)` square matrix of expressions.
fn block_diag(a: &[ScalarFieldExpr], na: usize, b: &[ScalarFieldExpr], nb: usize) -> Vec<ScalarFieldExpr> {
    let n = na + nb;
    (0..n * n)
        .map(|idx| {
            let (k, l) = (idx / n, idx % n);
            if k < na && l < na {
                a[k * na + l].clone()
            } else if k >= na && l >= na {
                b[(k - na) * nb + (l - na)].clone()
            } else {
                zero()
            }
        })
        .collect()
}

fn padded(front: usize, v: &[ScalarFieldExpr]) -> Vec<ScalarFieldExpr> {
    (0..front).map(|_| zero()).chain(v.iter().cloned()).collect()
}

fn check_disjoint(base: &ChartManifold, fibre: &ChartManifold) -> Result<(), SubmersionError> {
    if let Some(c) = fibre.coords().iter().find(|c| base.coords().contains(c)) {
        return Err(SubmersionError::Shape(format!(
            "coordinate `{c}` appears in both factors"
        )));
    }
    Ok(())
}

fn identity_projection(base: &AhStructure) -> Vec<ScalarFieldExpr> {
    base.chart()
        .coords()
        .iter()
        .map(|c| ScalarFieldExpr::from_ast(Expr::Var(c.clone())))
        .collect()
}

/// Builds `M′ ×_w F` with `φ = J ⊕ φ̂`, `η = s·η̂`, `ξ = ξ̂/s` and `g = g′ ⊕ s²ĝ`.
fn twisted_product(
    base: &AhStructure,
    fibre: &AcmStructure,
    s: &ScalarFieldExpr,
) -> Result<SubmersionSpec, SubmersionError> {
    let (bc, fc) = (base.chart(), fibre.chart());
    check_disjoint(bc, fc)?;
    let (nb, nf) = (bc.dim(), fc.dim());
    let s2 = times(s, s);
    let fmetric: Vec<ScalarFieldExpr> = fc.metric_exprs().iter().map(|e| times(&s2, e)).collect();
    let metric = block_diag(bc.metric_exprs(), nb, &fmetric, nf);
    let coords: Vec<String> = bc.coords().iter().chain(fc.coords()).cloned().collect();
    let domain = bc.domain().iter().chain(fc.domain()).copied().collect();
    let chart = ChartManifold::new(coords, Some(domain), metric)?;
    let phi = EndoField {
        dim: nb + nf,
        components: block_diag(&base.j().components, nb, &fibre.phi().components, nf),
    };
    let inv_s = match literal(s) {
        Some(x) => ScalarFieldExpr::constant(1.0 / x),
        None => ScalarFieldExpr::from_ast(Expr::Bin(
            BinOp::Div,
            Box::new(Expr::Num(1.0)),
            Box::new(s.ast().clone()),
        )),
    };
    let xi = VectorField {
        components: padded(
            nb,
            &fibre
                .xi()
                .components
                .iter()
                .map(|e| times(&inv_s, e))
                .collect::<Vec<_>>(),
        ),
    };
    let eta = CovectorField {
        components: padded(
            nb,
            &fibre.eta().components.iter().map(|e| times(s, e)).collect::<Vec<_>>(),
        ),
    };
    let total = AcmStructure::new(chart, phi, xi, eta)?;
    SubmersionSpec::new(total, base.clone(), identity_projection(base))
}

/// Product `M′ × F` with the factors `r/(n+r)`:
/// `φ = (J, φ̂)`, `η = (r/(n+r))η̂`, `ξ = ((n+r)/r)ξ̂`, `g = g′ ⊕ (r/(n+r))²ĝ`.
pub fn build_product(base: &AhStructure, fibre: &AcmStructure) -> Result<SubmersionSpec, SubmersionError> {
    let (n, r) = (base.half_dim(), fibre.m());
    if r == 0 {
        return Err(SubmersionError::NoFibreStructure);
    }
    let k = r as f64 / (n + r) as f64;
    twisted_product(base, fibre, &ScalarFieldExpr::constant(k))
}

/// Warped product `g_f = g′ ⊕ f²ĝ` over a surface with `η = fη̂`, `ξ = ξ̂/f`.
pub fn build_warped(
    base: &AhStructure,
    fibre: &AcmStructure,
    f: &ScalarFieldExpr,
) -> Result<SubmersionSpec, SubmersionError> {
    if base.dim() != 2 {
        return Err(SubmersionError::Shape(format!(
            "warped products need a 2-dimensional base, got {}",
            base.dim()
        )));
    }
    check_positive(base.chart(), f, "warping function")?;
    twisted_product(base, fibre, f)
}

fn check_positive(chart: &ChartManifold, f: &ScalarFieldExpr, what: &str) -> Result<(), SubmersionError> {
    let compiled = f.compile(chart.coords())?;
    for p in chart.sample_points(POSITIVITY_POINTS, 0) {
        let v = compiled.eval_f64(&p.point)?;
        if !(v > 0.0) {
            return Err(StructureError::Precondition(format!("{what} is {v} ≤ 0 at {:?}", p.point)).into());
        }
    }
    Ok(())
}

/// `φ̃ = φ`, `ξ̃ = e^{−ρ}ξ`, `η̃ = e^{ρ}η`, `g̃ = e^{2ρ}g`.
pub fn build_conformal_change(s: &AcmStructure, rho: &ScalarFieldExpr) -> Result<AcmStructure, StructureError> {
    use crate::expr::Func;
    let e = call(Func::Exp, rho);
    let e_inv = call(Func::Exp, &neg(rho));
    let two_rho = times(&ScalarFieldExpr::constant(2.0), rho);
    let e2 = call(Func::Exp, &two_rho);
    let chart = s.chart();
    let metric = chart.metric_exprs().iter().map(|g| times(&e2, g)).collect();
    let chart = ChartManifold::new(chart.coords().to_vec(), Some(chart.domain().to_vec()), metric)?;
    let xi = VectorField {
        components: s.xi().components.iter().map(|c| times(&e_inv, c)).collect(),
    };
    let eta = CovectorField {
        components: s.eta().components.iter().map(|c| times(&e, c)).collect(),
    };
    AcmStructure::new(chart, s.phi().clone(), xi, eta)
}

/// `I ×_f M′`: `g_f = f²dt² + g′`, `ξ = (1/f)∂_t`, `η = f dt`, `φ = J` on the
/// base and `φ∂_t = 0`, projected onto `M′`. The base must be Kähler.
pub fn build_c12_model(
    base: &AhStructure,
    t: &str,
    f: &ScalarFieldExpr,
    t_range: (f64, f64),
) -> Result<SubmersionSpec, SubmersionError> {
    let kahler = base.classify(ClassId::Kahler, &Default::default())?;
    if kahler.verdict != Verdict::Holds {
        return Err(StructureError::Precondition(format!(
            "C12 model needs a Kähler base (residual {:e})",
            kahler.max_residual
        ))
        .into());
    }
    let (bc, nb) = (base.chart(), base.dim());
    if bc.coords().iter().any(|c| c == t) {
        return Err(SubmersionError::Shape(format!("coordinate `{t}` appears in the base")));
    }
    let coords: Vec<String> = bc.coords().iter().cloned().chain([t.to_string()]).collect();
    let domain: Vec<(f64, f64)> = bc.domain().iter().copied().chain([t_range]).collect();
    let probe = ChartManifold::new(coords.clone(), Some(domain.clone()), flat_metric(nb + 1))?;
    check_positive(&probe, f, "C12 warping function")?;
    let metric = block_diag(bc.metric_exprs(), nb, &[times(f, f)], 1);
    let chart = ChartManifold::new(coords, Some(domain), metric)?;
    let phi = EndoField {
        dim: nb + 1,
        components: block_diag(&base.j().components, nb, &[zero()], 1),
    };
    let inv_f = ScalarFieldExpr::from_ast(Expr::Bin(
        BinOp::Div,
        Box::new(Expr::Num(1.0)),
        Box::new(f.ast().clone()),
    ));
    let xi = VectorField {
        components: padded(nb, &[inv_f]),
    };
    let eta = CovectorField {
        components: padded(nb, std::slice::from_ref(f)),
    };
    let total = AcmStructure::new(chart, phi, xi, eta)?;
    SubmersionSpec::new(total, base.clone(), identity_projection(base))
}

fn parse_all(src: &[&str]) -> Result<Vec<ScalarFieldExpr>, StructureError> {
    Ok(src
        .iter()
        .map(|s| ScalarFieldExpr::parse(s))
        .collect::<Result<_, _>>()?)
}

fn flat_metric(n: usize) -> Vec<ScalarFieldExpr> {
    (0..n * n)
        .map(|k| ScalarFieldExpr::constant(if k / n == k % n { 1.0 } else { 0.0 }))
        .collect()
}

fn chart(coords: &[&str], metric: Vec<ScalarFieldExpr>) -> Result<ChartManifold, StructureError> {
    Ok(ChartManifold::new(
        coords.iter().map(|s| s.to_string()).collect(),
        None,
        metric,
    )?)
}

/// `J∂_{x_i} = s·∂_{y_i}`, `J∂_{y_i} = −s·∂_{x_i}` on `(x_1, y_1, …)`, padded with zero rows and columns.
fn standard_phi(pairs: usize, pad: usize, s: f64) -> EndoField {
    let n = 2 * pairs + pad;
    let mut comps = vec![0.0; n * n];
    for i in 0..pairs {
        let (x, y) = (2 * i, 2 * i + 1);
        comps[y * n + x] = s;
        comps[x * n + y] = -s;
    }
    EndoField {
        dim: n,
        components: comps.into_iter().map(ScalarFieldExpr::constant).collect(),
    }
}

fn unit(n: usize, i: usize) -> Vec<ScalarFieldExpr> {
    (0..n)
        .map(|k| ScalarFieldExpr::constant(if k == i { 1.0 } else { 0.0 }))
        .collect()
}

pub fn flat_kahler_r4() -> Result<AhStructure, StructureError> {
    AhStructure::new(
        chart(&["x1", "y1", "x2", "y2"], flat_metric(4))?,
        standard_phi(2, 0, 1.0),
    )
}

pub fn conformal_kahler_r4() -> Result<AhStructure, StructureError> {
    let e = ScalarFieldExpr::parse("exp(2*x1)")?;
    let metric = flat_metric(4).iter().map(|g| times(&e, g)).collect();
    AhStructure::new(chart(&["x1", "y1", "x2", "y2"], metric)?, standard_phi(2, 0, 1.0))
}

/// Left-invariant model on `R^4`: coframe `dx1, dx2, dx3 − x1 dx2, dx4`,
/// `Jε1 = ε3`, `Jε2 = ε4` on the dual frame `ε2 = ∂2 + x1∂3`.
pub fn kodaira_thurston() -> Result<AhStructure, StructureError> {
    let metric = parse_all(&[
        "1", "0", "0", "0", //
        "0", "1 + x1^2", "-x1", "0", //
        "0", "-x1", "1", "0", //
        "0", "0", "0", "1",
    ])?;
    let j = EndoField::parse(&[
        &["0", "x1", "-1", "0"],
        &["0", "0", "0", "-1"],
        &["1", "0", "0", "-x1"],
        &["0", "1", "0", "0"],
    ])?;
    AhStructure::new(chart(&["x1", "x2", "x3", "x4"], metric)?, j)
}

fn cosymplectic(coords: &[&str]) -> Result<AcmStructure, StructureError> {
    let n = coords.len();
    AcmStructure::new(
        chart(coords, flat_metric(n))?,
        standard_phi((n - 1) / 2, 1, 1.0),
        VectorField {
            components: unit(n, n - 1),
        },
        CovectorField {
            components: unit(n, n - 1),
        },
    )
}

pub fn cosymplectic_r3() -> Result<AcmStructure, StructureError> {
    cosymplectic(&["a", "b", "c"])
}

pub fn cosymplectic_r5() -> Result<AcmStructure, StructureError> {
    cosymplectic(&["a1", "b1", "a2", "b2", "c"])
}

/// `η = ½(dz − y1 dx1)`, `ξ = 2∂z`, `g = η⊗η + ¼(dx1² + dy1²)`.
pub fn sasakian_r3() -> Result<AcmStructure, StructureError> {
    let metric = parse_all(&[
        "0.25 + 0.25*y^2",
        "0",
        "-0.25*y", //
        "0",
        "0.25",
        "0", //
        "-0.25*y",
        "0",
        "0.25",
    ])?;
    AcmStructure::new(
        chart(&["x", "y", "z"], metric)?,
        EndoField::parse(&[&["0", "1", "0"], &["-1", "0", "0"], &["0", "y", "0"]])?,
        VectorField::parse(&["0", "0", "2"])?,
        CovectorField::parse(&["-0.5*y", "0", "0.5"])?,
    )
}

/// `η = ½(dz − y1 dx1 − y2 dx2)`, `ξ = 2∂z`, `g = η⊗η + ¼Σ(dxi² + dyi²)`,
/// `φ∂xi = −∂yi`, `φ∂yi = ∂xi + yi ∂z`.
pub fn sasakian_r5() -> Result<AcmStructure, StructureError> {
    let metric = parse_all(&[
        "0.25 + 0.25*y1^2",
        "0",
        "0.25*y1*y2",
        "0",
        "-0.25*y1", //
        "0",
        "0.25",
        "0",
        "0",
        "0", //
        "0.25*y1*y2",
        "0",
        "0.25 + 0.25*y2^2",
        "0",
        "-0.25*y2", //
        "0",
        "0",
        "0",
        "0.25",
        "0", //
        "-0.25*y1",
        "0",
        "-0.25*y2",
        "0",
        "0.25",
    ])?;
    AcmStructure::new(
        chart(&["x1", "y1", "x2", "y2", "z"], metric)?,
        EndoField::parse(&[
            &["0", "1", "0", "0", "0"],
            &["-1", "0", "0", "0", "0"],
            &["0", "0", "0", "1", "0"],
            &["0", "0", "-1", "0", "0"],
            &["0", "y1", "0", "y2", "0"],
        ])?,
        VectorField::parse(&["0", "0", "0", "0", "2"])?,
        CovectorField::parse(&["-0.5*y1", "0", "-0.5*y2", "0", "0.5"])?,
    )
}

/// `sasakian_r5 → R^4`, `(x1, y1, x2, y2, z) ↦ (x1, y1, x2, y2)`, base metric `¼δ`.
pub fn hopf_like_r5_to_r4() -> Result<SubmersionSpec, SubmersionError> {
    let metric = flat_metric(4)
        .iter()
        .map(|g| times(&ScalarFieldExpr::constant(0.25), g))
        .collect();
    let base = AhStructure::new(chart(&["x1", "y1", "x2", "y2"], metric)?, standard_phi(2, 0, -1.0))?;
    SubmersionSpec::new(sasakian_r5()?, base.clone(), identity_projection(&base))
}

pub fn warped_s4() -> Result<SubmersionSpec, SubmersionError> {
    let base = AhStructure::new(chart(&["u", "v"], flat_metric(2))?, standard_phi(1, 0, 1.0))?;
    build_warped(&base, &cosymplectic_r3()?, &ScalarFieldExpr::parse("exp(u)")?)
}

/// `e^{2 x1}` times the flat product `ℝ⁴ × ℝ³` over `conformal_kahler_r4`.
pub fn conformal_product_r7() -> Result<SubmersionSpec, SubmersionError> {
    let p = build_product(&flat_kahler_r4()?, &cosymplectic_r3()?)?;
    let total = build_conformal_change(p.total(), &ScalarFieldExpr::parse("x1")?)?;
    SubmersionSpec::new(total, conformal_kahler_r4()?, p.projection().to_vec())
}

pub fn c12_model() -> Result<SubmersionSpec, SubmersionError> {
    build_c12_model(
        &flat_kahler_r4()?,
        "t",
        &ScalarFieldExpr::parse("exp(x1)")?,
        (-1.0, 1.0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogKind {
    Acm,
    Ah,
    Submersion,
}

#[derive(Debug, Clone)]
pub enum CatalogObject {
    Acm(AcmStructure),
    Ah(AhStructure),
    Submersion(SubmersionSpec),
}

impl CatalogObject {
    pub fn kind(&self) -> CatalogKind {
        match self {
            CatalogObject::Acm(_) => CatalogKind::Acm,
            CatalogObject::Ah(_) => CatalogKind::Ah,
            CatalogObject::Submersion(_) => CatalogKind::Submersion,
        }
    }
}

/// A named structure with the class verdicts it is known to have. For
/// submersions the classes refer to the total space.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub object: CatalogObject,
    pub expected_classes: Vec<(ClassId, Verdict)>,
}

impl CatalogEntry {
    pub fn kind(&self) -> CatalogKind {
        self.object.kind()
    }
}

pub const CATALOG_NAMES: [&str; 16] = [
    "flat_kahler_r4",
    "conformal_kahler_r4",
    "kodaira_thurston",
    "cosymplectic_r3",
    "cosymplectic_r5",
    "sasakian_r3",
    "sasakian_r5",
    "hopf_like_r5_to_r4",
    "example31_flat",
    "example31_kt",
    "example31_kt3",
    "example32_qs",
    "warped_s4",
    "c12_model",
    "conformal_warped_s4",
    "conformal_product_r7",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("unknown catalog entry `{name}`; known entries: {}", CATALOG_NAMES.join(", "))]
    Unknown { name: String },
    #[error(transparent)]
    Submersion(#[from] SubmersionError),
}

impl From<crate::expr::ExprError> for ConstructionError {
    fn from(e: crate::expr::ExprError) -> Self {
        ConstructionError::Submersion(e.into())
    }
}

impl From<StructureError> for ConstructionError {
    fn from(e: StructureError) -> Self {
        ConstructionError::Submersion(e.into())
    }
}

use ClassId as K;
use Verdict::{Fails as F, Holds as H};

fn acm_table(holds: &[ClassId]) -> Vec<(ClassId, Verdict)> {
    ClassId::ACM
        .iter()
        .map(|&c| (c, if holds.contains(&c) { H } else { F }))
        .collect()
}

fn ah_table(holds: &[ClassId]) -> Vec<(ClassId, Verdict)> {
    ClassId::AH
        .iter()
        .map(|&c| (c, if holds.contains(&c) { H } else { F }))
        .collect()
}

/// Every class holds for a parallel `φ`.
const COSYMPLECTIC: [ClassId; 10] = ClassId::ACM;
/// `C6`: closed `Φ`, normal, zero Lee form, inside `C4 ⊕ C6 ⊕ C7`.
const SASAKIAN: [ClassId; 5] = [
    K::LcAlmostQuasiSasakian,
    K::QuasiSasakian,
    K::AlphaSasakian,
    K::C4C6C7,
    K::Normality,
];
/// Almost-Kähler base times a cosymplectic fibre: `dΦ = 0`, `dη = 0`, `ω = 0`, `N_φ ≠ 0`.
const KT_PRODUCT: [ClassId; 3] = [K::LcAlmostQuasiSasakian, K::AlmostCosymplectic, K::LcAlmostCosymplectic];

pub fn catalog(name: &str) -> Result<CatalogEntry, ConstructionError> {
    let (description, object, expected_classes) = match name {
        "flat_kahler_r4" => (
            "flat Kähler R^4",
            CatalogObject::Ah(flat_kahler_r4()?),
            ah_table(&ClassId::AH),
        ),
        "conformal_kahler_r4" => (
            "R^4 with e^{2 x1}·flat metric, standard J (locally conformal Kähler)",
            CatalogObject::Ah(conformal_kahler_r4()?),
            ah_table(&[K::W2W4, K::W4]),
        ),
        "kodaira_thurston" => (
            "Kodaira–Thurston chart model, almost Kähler and not integrable",
            CatalogObject::Ah(kodaira_thurston()?),
            ah_table(&[K::AlmostKahler, K::W2W4]),
        ),
        "cosymplectic_r3" => (
            "flat cosymplectic R^3",
            CatalogObject::Acm(cosymplectic_r3()?),
            acm_table(&COSYMPLECTIC),
        ),
        "cosymplectic_r5" => (
            "flat cosymplectic R^5",
            CatalogObject::Acm(cosymplectic_r5()?),
            acm_table(&COSYMPLECTIC),
        ),
        "sasakian_r3" => (
            "Sasakian R^3, Darboux model",
            CatalogObject::Acm(sasakian_r3()?),
            acm_table(&SASAKIAN),
        ),
        "sasakian_r5" => (
            "Sasakian R^5, Darboux model",
            CatalogObject::Acm(sasakian_r5()?),
            acm_table(&SASAKIAN),
        ),
        "hopf_like_r5_to_r4" => (
            "Sasakian R^5 over R^4 with metric ¼δ, 1-dimensional fibres",
            CatalogObject::Submersion(hopf_like_r5_to_r4()?),
            acm_table(&SASAKIAN),
        ),
        "example31_flat" => (
            "flat Kähler R^4 × cosymplectic R^3 with the r/(n+r) factors",
            CatalogObject::Submersion(build_product(&flat_kahler_r4()?, &cosymplectic_r3()?)?),
            acm_table(&COSYMPLECTIC),
        ),
        "example31_kt" => (
            "Kodaira–Thurston × cosymplectic R^5 (n = 2, r = 2)",
            CatalogObject::Submersion(build_product(&kodaira_thurston()?, &cosymplectic_r5()?)?),
            acm_table(&KT_PRODUCT),
        ),
        "example31_kt3" => (
            "Kodaira–Thurston × cosymplectic R^3 (n = 2, r = 1)",
            CatalogObject::Submersion(build_product(&kodaira_thurston()?, &cosymplectic_r3()?)?),
            acm_table(&KT_PRODUCT),
        ),
        "example32_qs" => (
            "flat Kähler R^4 × Sasakian R^3, quasi-Sasakian and not α-Sasakian",
            CatalogObject::Submersion(build_product(&flat_kahler_r4()?, &sasakian_r3()?)?),
            acm_table(&[K::LcAlmostQuasiSasakian, K::QuasiSasakian, K::C4C6C7, K::Normality]),
        ),
        "warped_s4" => (
            "R^2 ×_f cosymplectic R^3 with f = exp(u)",
            CatalogObject::Submersion(warped_s4()?),
            acm_table(&[K::LcAlmostQuasiSasakian, K::LcAlmostCosymplectic, K::LcCosymplectic]),
        ),
        "c12_model" => (
            "I ×_f flat Kähler R^4 with f = exp(x1), projected onto R^4",
            CatalogObject::Submersion(c12_model()?),
            // C12: ∇φ = η⊗(…), so δΦ∘φ = −∇_ξη and δη = 0, hence ω = 0; dη = η∧∇_ξη ≠ 0
            acm_table(&[K::LcAlmostQuasiSasakian, K::C12]),
        ),
        "conformal_warped_s4" => {
            let warped = warped_s4()?;
            let s = build_conformal_change(warped.total(), &ScalarFieldExpr::parse("-u")?)?;
            (
                "warped_s4 total space after the conformal change with ρ = −log f",
                CatalogObject::Acm(s),
                acm_table(&COSYMPLECTIC),
            )
        }
        "conformal_product_r7" => (
            "flat R^4 × cosymplectic R^3 rescaled by e^{2 x1}, over conformal_kahler_r4",
            CatalogObject::Submersion(conformal_product_r7()?),
            acm_table(&[K::LcAlmostQuasiSasakian, K::LcAlmostCosymplectic, K::LcCosymplectic]),
        ),
        _ => return Err(ConstructionError::Unknown { name: name.to_string() }),
    };
    Ok(CatalogEntry {
        name: CATALOG_NAMES.iter().find(|n| **n == name).expect("matched above"),
        description,
        object,
        expected_classes,
    })
}
