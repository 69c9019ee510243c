//! Almost contact metric and almost Hermitian structures on a chart,
//! their fundamental forms and Lee forms, and sampled class tests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::ExprError;
use crate::jet::{Jet2, JetError};
use crate::manifold::{ChartManifold, Components, CovectorField, EndoField, ManifoldError, PointSample, VectorField};
use crate::riemann::{self, contract as c, PointGeometry};
use crate::sampling::{
    draw_tuples, par_points, scalar_residual, vector_residual, Extras, MaxTracker, Sampling, Verdict, Witness,
};

/// Absolute tolerance for structure invariants.
pub const INVARIANT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error("structure invariant `{check}` violated at {point:?}: residual {residual:e}")]
    Invariant {
        check: String,
        point: Vec<f64>,
        residual: f64,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("sampling needs at least one point")]
    NoSamples,
}

impl From<ExprError> for StructureError {
    fn from(e: ExprError) -> Self {
        StructureError::Manifold(e.into())
    }
}

impl From<JetError> for StructureError {
    fn from(e: JetError) -> Self {
        StructureError::Manifold(e.into())
    }
}

/// Class identifiers accepted by [`AcmStructure::classify`] and [`AhStructure::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    LcAlmostQuasiSasakian,
    AlmostCosymplectic,
    QuasiSasakian,
    AlphaSasakian,
    Cosymplectic,
    C12,
    LcAlmostCosymplectic,
    LcCosymplectic,
    C4C6C7,
    Normality,
    Kahler,
    AlmostKahler,
    W2W4,
    W4,
}

impl ClassId {
    pub const ACM: [ClassId; 10] = [
        ClassId::LcAlmostQuasiSasakian,
        ClassId::AlmostCosymplectic,
        ClassId::QuasiSasakian,
        ClassId::AlphaSasakian,
        ClassId::Cosymplectic,
        ClassId::C12,
        ClassId::LcAlmostCosymplectic,
        ClassId::LcCosymplectic,
        ClassId::C4C6C7,
        ClassId::Normality,
    ];
    pub const AH: [ClassId; 4] = [ClassId::Kahler, ClassId::AlmostKahler, ClassId::W2W4, ClassId::W4];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassId::LcAlmostQuasiSasakian => "lc_almost_quasi_sasakian",
            ClassId::AlmostCosymplectic => "almost_cosymplectic",
            ClassId::QuasiSasakian => "quasi_sasakian",
            ClassId::AlphaSasakian => "alpha_sasakian",
            ClassId::Cosymplectic => "cosymplectic",
            ClassId::C12 => "C12",
            ClassId::LcAlmostCosymplectic => "lc_almost_cosymplectic",
            ClassId::LcCosymplectic => "lc_cosymplectic",
            ClassId::C4C6C7 => "C4_C6_C7",
            ClassId::Normality => "normality",
            ClassId::Kahler => "kahler",
            ClassId::AlmostKahler => "almost_kahler",
            ClassId::W2W4 => "W2_W4",
            ClassId::W4 => "W4",
        }
    }

    pub fn is_acm(self) -> bool {
        Self::ACM.contains(&self)
    }

    /// Defining identity, as tested.
    pub fn statement(self) -> &'static str {
        match self {
            ClassId::LcAlmostQuasiSasakian => "dΦ = −2 ω∧Φ",
            ClassId::AlmostCosymplectic => "dΦ = 0, dη = 0",
            ClassId::QuasiSasakian => "dΦ = 0, N_φ + 2dη⊗ξ = 0; dim ≥ 5: (∇_XΦ)(Y,Z) = η(Y)(∇_{φX}η)Z + η(Z)(∇_Yη)φX",
            ClassId::AlphaSasakian => "(∇_Xφ)Y = α(g(X,Y)ξ − η(Y)X), α fitted at the first point",
            ClassId::Cosymplectic => "∇φ = 0",
            ClassId::C12 => "(∇_Xφ)Y = −η(X)((∇_ξη)(φY)ξ + η(Y)φ(∇_ξξ))",
            ClassId::LcAlmostCosymplectic => "dΦ = −2 ω∧Φ, dη = η∧ω",
            ClassId::LcCosymplectic => "(∇_XΦ)(Y,Z) = ω(Y)Φ(X,Z) − ω(Z)Φ(X,Y) + ω(φY)g(X,Z) − ω(φZ)g(X,Y)",
            ClassId::C4C6C7 => {
                "(∇_XΦ)(Y,Z) = ω(Y)Φ(X,Z) − ω(Z)Φ(X,Y) + ω(φY)g(φX,φZ) − ω(φZ)g(φX,φY) + η(Y)(∇_{φX}η)Z + η(Z)(∇_Yη)φX"
            }
            ClassId::Normality => "N_φ + 2dη⊗ξ = 0",
            ClassId::Kahler => "∇J = 0",
            ClassId::AlmostKahler => "dΩ = 0",
            ClassId::W2W4 => "dΩ = −2 β∧Ω",
            ClassId::W4 => "dΩ = −2 β∧Ω, N_J = 0",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassId {
    type Err = StructureError;
    fn from_str(s: &str) -> Result<Self, StructureError> {
        if s == "C6" {
            return Ok(ClassId::AlphaSasakian);
        }
        Self::ACM
            .iter()
            .chain(Self::AH.iter())
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| StructureError::UnknownClass(s.to_string()))
    }
}

/// Outcome of one sampled class test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class_id: String,
    pub statement: String,
    pub verdict: Verdict,
    #[serde(with = "crate::sampling::residual_serde")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub points: usize,
    pub vectors: usize,
    pub samples: usize,
    pub seed: u64,
    pub witness: Option<Witness>,
    pub extras: Extras,
}

impl ClassReport {
    fn new(class: ClassId, sampling: &Sampling, tracker: MaxTracker, extras: Extras) -> Self {
        Self {
            class_id: class.as_str().to_string(),
            statement: class.statement().to_string(),
            verdict: Verdict::from_residual(tracker.max, sampling.tol),
            max_residual: tracker.max,
            tolerance: sampling.tol,
            points: sampling.points,
            vectors: sampling.vectors,
            samples: tracker.samples,
            seed: sampling.seed,
            witness: tracker.witness,
            extras,
        }
    }
}

/// `(φ, ξ, η)` component jets.
pub type RawJets = (Vec<Jet2>, Vec<Jet2>, Vec<Jet2>);

/// An almost contact metric structure `(φ, ξ, η, g)` on a chart of dimension `2m+1`.
#[derive(Debug, Clone)]
pub struct AcmStructure {
    chart: ChartManifold,
    phi: EndoField,
    xi: VectorField,
    eta: CovectorField,
    phi_c: Components,
    xi_c: Components,
    eta_c: Components,
}

/// Jet-level tensors of an ACM structure at one point.
#[derive(Debug, Clone)]
pub struct AcmJets {
    pub geo: PointGeometry,
    pub phi: Vec<Jet2>,
    pub xi: Vec<Jet2>,
    pub eta: Vec<Jet2>,
    pub fundamental: Vec<Jet2>,
    pub nabla_phi: Vec<Jet2>,
    pub nabla_fundamental: Vec<Jet2>,
    pub nabla_eta: Vec<Jet2>,
    pub nabla_xi: Vec<Jet2>,
    pub delta_eta: Jet2,
    pub delta_fundamental: Vec<Jet2>,
    pub omega: Vec<Jet2>,
}

/// Value-level tensors of an ACM structure at one point, ready for contraction.
#[derive(Debug, Clone)]
pub struct AcmPointData {
    pub n: usize,
    pub m: usize,
    pub point: PointSample,
    pub g: Vec<f64>,
    pub phi: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub fundamental: Vec<f64>,
    pub nabla_phi: Vec<f64>,
    pub nabla_fundamental: Vec<f64>,
    pub nabla_eta: Vec<f64>,
    pub nabla_xi: Vec<f64>,
    pub d_fundamental: Vec<f64>,
    pub d_eta: Vec<f64>,
    pub delta_eta: f64,
    pub delta_fundamental: Vec<f64>,
    pub omega: Vec<f64>,
    pub lee_vector: Vec<f64>,
    pub d_omega: Vec<f64>,
    pub nijenhuis: Vec<f64>,
    /// Value-level orthonormal frame, one vector per row.
    pub frame: Vec<Vec<f64>>,
}

impl AcmStructure {
    pub fn new(
        chart: ChartManifold,
        phi: EndoField,
        xi: VectorField,
        eta: CovectorField,
    ) -> Result<Self, StructureError> {
        let n = chart.dim();
        if n < 3 || n.is_multiple_of(2) {
            return Err(StructureError::Precondition(format!(
                "almost contact metric structures need odd dimension ≥ 3, got {n}"
            )));
        }
        let phi_c = chart.compile_endo(&phi)?;
        let xi_c = chart.compile_vector(&xi)?;
        let eta_c = chart.compile_covector(&eta)?;
        Ok(Self {
            chart,
            phi,
            xi,
            eta,
            phi_c,
            xi_c,
            eta_c,
        })
    }

    pub fn chart(&self) -> &ChartManifold {
        &self.chart
    }

    pub fn phi(&self) -> &EndoField {
        &self.phi
    }

    pub fn xi(&self) -> &VectorField {
        &self.xi
    }

    pub fn eta(&self) -> &CovectorField {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `m` with `dim = 2m + 1`.
    pub fn m(&self) -> usize {
        (self.dim() - 1) / 2
    }

    /// `(φ, ξ, η)` components seeded on all coordinates.
    pub fn raw_jets(&self, point: &[f64]) -> Result<RawJets, StructureError> {
        self.chart.contains(point)?;
        let inputs = self.chart.seeded(point);
        Ok((
            self.phi_c.eval(&inputs)?,
            self.xi_c.eval(&inputs)?,
            self.eta_c.eval(&inputs)?,
        ))
    }

    pub fn jets(&self, point: &[f64]) -> Result<AcmJets, StructureError> {
        let geo = PointGeometry::new(&self.chart, point)?;
        let (phi, xi, eta) = self.raw_jets(point)?;
        Ok(AcmJets::assemble(geo, phi, xi, eta, self.m()))
    }

    pub fn point_data(&self, p: &PointSample) -> Result<AcmPointData, StructureError> {
        let jets = self.jets(&p.point)?;
        let frame = self.chart.orthonormal_frame(p, &[])?;
        Ok(AcmPointData::from_jets(&jets, p.clone(), self.m(), &frame))
    }

    /// `Φ(X, Y) = g(X, φY)`.
    pub fn fundamental_form(&self, point: &[f64], x: &[f64], y: &[f64]) -> Result<f64, StructureError> {
        let j = self.jets(point)?;
        Ok(c::form2(&c::values(&j.fundamental), x, y))
    }

    /// `ω(X)` for the Lee form.
    pub fn lee_form(&self, point: &[f64], x: &[f64]) -> Result<f64, StructureError> {
        let j = self.jets(point)?;
        Ok(c::form1(&c::values(&j.omega), x))
    }

    /// Checks `φ² = −I + η⊗ξ`, `η(ξ) = 1`, `φξ = 0`, `η∘φ = 0` and
    /// `g(φX, φY) = g(X, Y) − η(X)η(Y)`; returns the largest residual.
    pub fn check_invariants(&self, points: usize, seed: u64) -> Result<f64, StructureError> {
        let samples = self.chart.sample_points(points, seed);
        let worst = par_points(&samples, |p| self.invariants_at(p))?;
        Ok(worst.into_iter().fold(0.0, f64::max))
    }

    fn invariants_at(&self, p: &PointSample) -> Result<f64, StructureError> {
        let n = self.dim();
        let g = self.chart.checked_metric_at(&p.point)?.values();
        let (phi, xi, eta) = self.raw_jets(&p.point)?;
        let (phi, xi, eta) = (c::values(&phi), c::values(&xi), c::values(&eta));
        let fail = |check: &str, residual: f64| -> Result<f64, StructureError> {
            if residual.is_finite() && residual <= INVARIANT_TOL {
                Ok(residual)
            } else {
                Err(StructureError::Invariant {
                    check: check.to_string(),
                    point: p.point.clone(),
                    residual,
                })
            }
        };
        let mut worst = 0.0f64;
        let mut r = 0.0f64;
        for k in 0..n {
            for j in 0..n {
                let sq: f64 = (0..n).map(|l| phi[k * n + l] * phi[l * n + j]).sum();
                let want = if k == j { -1.0 } else { 0.0 } + xi[k] * eta[j];
                r = r.max((sq - want).abs());
            }
        }
        worst = worst.max(fail("φ² = −I + η⊗ξ", r)?);
        worst = worst.max(fail("η(ξ) = 1", (c::form1(&eta, &xi) - 1.0).abs())?);
        let phixi = c::endo(&phi, &xi);
        worst = worst.max(fail("φξ = 0", phixi.iter().fold(0.0, |a, v| a.max(v.abs())))?);
        let mut r = 0.0f64;
        for j in 0..n {
            let v: f64 = (0..n).map(|k| eta[k] * phi[k * n + j]).sum();
            r = r.max(v.abs());
        }
        worst = worst.max(fail("η∘φ = 0", r)?);
        let frame = self.chart.orthonormal_frame(p, &[])?;
        let frame: Vec<Vec<f64>> = frame.iter().map(|e| c::values(e)).collect();
        let mut r = 0.0f64;
        for t in draw_tuples(p, &frame, 4) {
            let (x, y) = (&t[0], &t[1]);
            let lhs = c::inner(&g, &c::endo(&phi, x), &c::endo(&phi, y));
            let rhs = c::inner(&g, x, y) - c::form1(&eta, x) * c::form1(&eta, y);
            r = r.max((lhs - rhs).abs());
        }
        worst = worst.max(fail("g(φX, φY) = g(X, Y) − η(X)η(Y)", r)?);
        Ok(worst)
    }

    pub fn classify(&self, class: ClassId, sampling: &Sampling) -> Result<ClassReport, StructureError> {
        Ok(self.classify_many(&[class], sampling)?.remove(0))
    }

    pub fn classify_all(&self, sampling: &Sampling) -> Result<Vec<ClassReport>, StructureError> {
        self.classify_many(&ClassId::ACM, sampling)
    }

    pub fn classify_many(&self, classes: &[ClassId], sampling: &Sampling) -> Result<Vec<ClassReport>, StructureError> {
        if let Some(bad) = classes.iter().find(|c| !c.is_acm()) {
            return Err(StructureError::Precondition(format!(
                "`{bad}` is not an almost contact metric class"
            )));
        }
        if sampling.points == 0 {
            return Err(StructureError::NoSamples);
        }
        let points = self.chart.sample_points(sampling.points, sampling.seed);
        let data = par_points(&points, |p| self.point_data(p))?;
        let tuples: Vec<_> = data
            .iter()
            .map(|d| draw_tuples(&d.point, &d.frame, sampling.vectors))
            .collect();
        Ok(classes
            .iter()
            .map(|&class| classify_acm(class, &data, &tuples, sampling))
            .collect())
    }
}

impl AcmJets {
    pub fn assemble(geo: PointGeometry, phi: Vec<Jet2>, xi: Vec<Jet2>, eta: Vec<Jet2>, m: usize) -> Self {
        let n = geo.n;
        let fundamental = riemann::fundamental_form(&geo.g, &phi);
        let nabla_phi = geo.nabla_endo(&phi);
        let nabla_fundamental = geo.nabla_2tensor(&fundamental);
        let nabla_eta = geo.nabla_covector(&eta);
        let nabla_xi = geo.nabla_vector(&xi);
        let delta_eta = geo.codifferential_1form(&nabla_eta);
        let delta_fundamental = geo.codifferential_2form(&nabla_fundamental);
        let omega = lee_form_jets(n, m, &phi, &xi, &eta, &nabla_eta, delta_eta, &delta_fundamental);
        Self {
            geo,
            phi,
            xi,
            eta,
            fundamental,
            nabla_phi,
            nabla_fundamental,
            nabla_eta,
            nabla_xi,
            delta_eta,
            delta_fundamental,
            omega,
        }
    }
}

/// `ω = −1/(2(m−1)) (δΦ∘φ + ∇_ξη) + (δη/2m) η` for `m ≥ 2`, `ω = ∇_ξη + (δη/2) η` for `m = 1`.
#[allow(clippy::too_many_arguments)]
pub fn lee_form_jets(
    n: usize,
    m: usize,
    phi: &[Jet2],
    xi: &[Jet2],
    eta: &[Jet2],
    nabla_eta: &[Jet2],
    delta_eta: Jet2,
    delta_fundamental: &[Jet2],
) -> Vec<Jet2> {
    let nabla_xi_eta = |k: usize| -> Jet2 { (0..n).map(|i| xi[i] * nabla_eta[i * n + k]).sum() };
    (0..n)
        .map(|k| {
            if m == 1 {
                nabla_xi_eta(k) + delta_eta * eta[k] * 0.5
            } else {
                let dphi: Jet2 = (0..n).map(|l| delta_fundamental[l] * phi[l * n + k]).sum();
                (dphi + nabla_xi_eta(k)) * (-1.0 / (2.0 * (m as f64 - 1.0)))
                    + delta_eta * eta[k] * (1.0 / (2.0 * m as f64))
            }
        })
        .collect()
}

impl AcmPointData {
    pub fn from_jets(j: &AcmJets, point: PointSample, m: usize, frame: &[Vec<Jet2>]) -> Self {
        let n = j.geo.n;
        let lee_vector = j.geo.sharp(&j.omega);
        Self {
            n,
            m,
            point,
            g: j.geo.g_values(),
            phi: c::values(&j.phi),
            xi: c::values(&j.xi),
            eta: c::values(&j.eta),
            fundamental: c::values(&j.fundamental),
            nabla_phi: c::values(&j.nabla_phi),
            nabla_fundamental: c::values(&j.nabla_fundamental),
            nabla_eta: c::values(&j.nabla_eta),
            nabla_xi: c::values(&j.nabla_xi),
            d_fundamental: c::values(&riemann::d_2form(&j.fundamental, n)),
            d_eta: c::values(&riemann::d_1form(&j.eta)),
            delta_eta: j.delta_eta.value(),
            delta_fundamental: c::values(&j.delta_fundamental),
            omega: c::values(&j.omega),
            lee_vector: c::values(&lee_vector),
            d_omega: c::values(&riemann::d_1form(&j.omega)),
            nijenhuis: c::values(&riemann::nijenhuis(&j.phi, n)),
            frame: frame.iter().map(|e| c::values(e)).collect(),
        }
    }

    pub fn phi_x(&self, x: &[f64]) -> Vec<f64> {
        c::endo(&self.phi, x)
    }

    pub fn eta_x(&self, x: &[f64]) -> f64 {
        c::form1(&self.eta, x)
    }

    pub fn omega_x(&self, x: &[f64]) -> f64 {
        c::form1(&self.omega, x)
    }

    pub fn g_xy(&self, x: &[f64], y: &[f64]) -> f64 {
        c::inner(&self.g, x, y)
    }

    /// `Φ(X, Y) = g(X, φY)`.
    pub fn big_phi(&self, x: &[f64], y: &[f64]) -> f64 {
        c::form2(&self.fundamental, x, y)
    }

    /// `(∇_X φ)Y`.
    pub fn nabla_phi_xy(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        c::nabla_endo(&self.nabla_phi, x, y)
    }

    /// `(∇_X Φ)(Y, Z)`.
    pub fn nabla_big_phi(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        c::form3(&self.nabla_fundamental, x, y, z)
    }

    /// `(∇_X η)Y`.
    pub fn nabla_eta_xy(&self, x: &[f64], y: &[f64]) -> f64 {
        c::form2(&self.nabla_eta, x, y)
    }

    /// `∇_X ξ`.
    pub fn nabla_xi_x(&self, x: &[f64]) -> Vec<f64> {
        c::nabla_vec(&self.nabla_xi, x)
    }

    pub fn d_big_phi(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        c::form3(&self.d_fundamental, x, y, z)
    }

    pub fn d_eta_xy(&self, x: &[f64], y: &[f64]) -> f64 {
        c::form2(&self.d_eta, x, y)
    }

    /// `(ω∧Φ)(X, Y, Z)`.
    pub fn omega_wedge_phi(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        (self.omega_x(x) * self.big_phi(y, z)
            + self.omega_x(y) * self.big_phi(z, x)
            + self.omega_x(z) * self.big_phi(x, y))
            / 3.0
    }

    /// `(η∧ω)(X, Y)`.
    pub fn eta_wedge_omega(&self, x: &[f64], y: &[f64]) -> f64 {
        0.5 * (self.eta_x(x) * self.omega_x(y) - self.eta_x(y) * self.omega_x(x))
    }

    pub fn nijenhuis_xy(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        c::vector_2(&self.nijenhuis, x, y)
    }

    pub fn vres(&self, l: &[f64], r: &[f64]) -> f64 {
        vector_residual(&self.g, l, r)
    }

    /// Residual of `dΦ = −2ω∧Φ`.
    pub fn res_lc_phi(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        scalar_residual(self.d_big_phi(x, y, z), -2.0 * self.omega_wedge_phi(x, y, z))
    }

    pub fn res_closed_phi(&self, v: &[Vec<f64>]) -> f64 {
        scalar_residual(self.d_big_phi(&v[0], &v[1], &v[2]), 0.0)
    }

    pub fn res_closed_eta(&self, v: &[Vec<f64>]) -> f64 {
        scalar_residual(self.d_eta_xy(&v[0], &v[1]), 0.0)
    }

    /// Residual of `N_φ(X,Y) + 2dη(X,Y)ξ = 0`.
    pub fn res_normal(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y) = (&v[0], &v[1]);
        let lhs = c::combo(&[(1.0, &self.nijenhuis_xy(x, y)), (2.0 * self.d_eta_xy(x, y), &self.xi)]);
        self.vres(&lhs, &vec![0.0; self.n])
    }

    /// Residual of `(∇_XΦ)(Y,Z) = η(Y)(∇_{φX}η)Z + η(Z)(∇_Yη)φX`.
    pub fn res_quasi_sasakian_nabla(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let px = self.phi_x(x);
        let rhs = self.eta_x(y) * self.nabla_eta_xy(&px, z) + self.eta_x(z) * self.nabla_eta_xy(y, &px);
        scalar_residual(self.nabla_big_phi(x, y, z), rhs)
    }

    /// `g(X,Y)ξ − η(Y)X`.
    pub fn c6_direction(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        c::combo(&[(self.g_xy(x, y), &self.xi), (-self.eta_x(y), x)])
    }

    pub fn res_c6(&self, v: &[Vec<f64>], alpha: f64) -> f64 {
        let (x, y) = (&v[0], &v[1]);
        self.vres(&self.nabla_phi_xy(x, y), &c::scale(alpha, &self.c6_direction(x, y)))
    }

    pub fn res_parallel_phi(&self, v: &[Vec<f64>]) -> f64 {
        self.vres(&self.nabla_phi_xy(&v[0], &v[1]), &vec![0.0; self.n])
    }

    /// Residual of `(∇_Xφ)Y = −η(X)((∇_ξη)(φY)ξ + η(Y)φ(∇_ξξ))`.
    pub fn res_c12(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y) = (&v[0], &v[1]);
        let a = self.nabla_eta_xy(&self.xi, &self.phi_x(y));
        let pn = self.phi_x(&self.nabla_xi_x(&self.xi));
        let rhs = c::combo(&[(-self.eta_x(x) * a, &self.xi), (-self.eta_x(x) * self.eta_x(y), &pn)]);
        self.vres(&self.nabla_phi_xy(x, y), &rhs)
    }

    /// Residual of `dη = η∧ω`.
    pub fn res_deta_lc(&self, v: &[Vec<f64>]) -> f64 {
        scalar_residual(self.d_eta_xy(&v[0], &v[1]), self.eta_wedge_omega(&v[0], &v[1]))
    }

    /// Residual of the locally conformal cosymplectic form of `∇Φ`.
    pub fn res_lc_cosymplectic_nabla(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let rhs = self.omega_x(y) * self.big_phi(x, z) - self.omega_x(z) * self.big_phi(x, y)
            + self.omega_x(&self.phi_x(y)) * self.g_xy(x, z)
            - self.omega_x(&self.phi_x(z)) * self.g_xy(x, y);
        scalar_residual(self.nabla_big_phi(x, y, z), rhs)
    }

    /// Residual of the `C4⊕C6⊕C7` form of `∇Φ`.
    pub fn res_c4c6c7_nabla(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let (px, py, pz) = (self.phi_x(x), self.phi_x(y), self.phi_x(z));
        let rhs = self.omega_x(y) * self.big_phi(x, z) - self.omega_x(z) * self.big_phi(x, y)
            + self.omega_x(&py) * self.g_xy(&px, &pz)
            - self.omega_x(&pz) * self.g_xy(&px, &py)
            + self.eta_x(y) * self.nabla_eta_xy(&px, z)
            + self.eta_x(z) * self.nabla_eta_xy(y, &px);
        scalar_residual(self.nabla_big_phi(x, y, z), rhs)
    }

    /// Least-squares `α` over the given tuples, with the denominator.
    pub fn alpha_fit(&self, tuples: &[Vec<Vec<f64>>]) -> (f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for t in tuples {
            let a = self.nabla_phi_xy(&t[0], &t[1]);
            let b = self.c6_direction(&t[0], &t[1]);
            num += self.g_xy(&a, &b);
            den += self.g_xy(&b, &b);
        }
        (if den > 0.0 { num / den } else { 0.0 }, den)
    }
}

fn track(
    data: &[AcmPointData],
    tuples: &[Vec<Vec<Vec<f64>>>],
    arity: usize,
    f: impl Fn(&AcmPointData, &[Vec<f64>]) -> f64,
) -> MaxTracker {
    let mut tr = MaxTracker::default();
    for (d, ts) in data.iter().zip(tuples) {
        for t in ts {
            tr.observe(f(d, t), &d.point, &t[..arity]);
        }
    }
    tr
}

pub(crate) fn classify_acm(
    class: ClassId,
    data: &[AcmPointData],
    tuples: &[Vec<Vec<Vec<f64>>>],
    sampling: &Sampling,
) -> ClassReport {
    let mut extras = Extras::new();
    let dim5 = data[0].n >= 5;
    let tracker = match class {
        ClassId::LcAlmostQuasiSasakian => {
            let (mut de, mut ox, mut dw) = (0.0f64, 0.0f64, 0.0f64);
            for (d, ts) in data.iter().zip(tuples) {
                de = de.max(d.delta_eta.abs());
                ox = ox.max(d.omega_x(&d.xi).abs());
                for t in ts {
                    dw = dw.max(c::form2(&d.d_omega, &t[0], &t[1]).abs());
                }
            }
            extras.insert("max_abs_delta_eta".into(), de);
            extras.insert("max_abs_omega_xi".into(), ox);
            extras.insert("max_abs_d_omega".into(), dw);
            track(data, tuples, 3, |d, v| d.res_lc_phi(v))
        }
        ClassId::AlmostCosymplectic => track(data, tuples, 3, |d, v| d.res_closed_phi(v).max(d.res_closed_eta(v))),
        ClassId::QuasiSasakian => track(data, tuples, 3, |d, v| {
            let r = d.res_closed_phi(v).max(d.res_normal(v));
            if dim5 {
                r.max(d.res_quasi_sasakian_nabla(v))
            } else {
                r
            }
        }),
        ClassId::AlphaSasakian => {
            let (alpha, _) = data[0].alpha_fit(&tuples[0]);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (d, ts) in data.iter().zip(tuples) {
                let (a, den) = d.alpha_fit(ts);
                if den > 0.0 {
                    lo = lo.min(a);
                    hi = hi.max(a);
                }
            }
            let d0 = &data[0];
            extras.insert("alpha".into(), alpha);
            extras.insert("alpha_spread".into(), if hi >= lo { hi - lo } else { 0.0 });
            extras.insert(
                "alpha_from_codifferential".into(),
                c::form1(&d0.delta_fundamental, &d0.xi) / (2.0 * d0.m as f64),
            );
            track(data, tuples, 2, |d, v| d.res_c6(v, alpha))
        }
        ClassId::Cosymplectic => track(data, tuples, 2, |d, v| d.res_parallel_phi(v)),
        ClassId::C12 => track(data, tuples, 2, |d, v| d.res_c12(v)),
        ClassId::LcAlmostCosymplectic => track(data, tuples, 3, |d, v| d.res_lc_phi(v).max(d.res_deta_lc(v))),
        ClassId::LcCosymplectic => track(data, tuples, 3, |d, v| d.res_lc_cosymplectic_nabla(v)),
        ClassId::C4C6C7 => track(data, tuples, 3, |d, v| d.res_c4c6c7_nabla(v)),
        ClassId::Normality => track(data, tuples, 2, |d, v| d.res_normal(v)),
        _ => unreachable!("checked by caller"),
    };
    ClassReport::new(class, sampling, tracker, extras)
}

/// An almost Hermitian structure `(J, g)` on a chart of dimension `2n`.
#[derive(Debug, Clone)]
pub struct AhStructure {
    chart: ChartManifold,
    j: EndoField,
    j_c: Components,
}

/// Jet-level tensors of an AH structure at one point.
#[derive(Debug, Clone)]
pub struct AhJets {
    pub geo: PointGeometry,
    pub j: Vec<Jet2>,
    pub fundamental: Vec<Jet2>,
    pub nabla_j: Vec<Jet2>,
    pub nabla_fundamental: Vec<Jet2>,
    pub delta_fundamental: Vec<Jet2>,
    /// `None` when `n = 1`.
    pub beta: Option<Vec<Jet2>>,
}

/// Value-level tensors of an AH structure at one point.
#[derive(Debug, Clone)]
pub struct AhPointData {
    pub n: usize,
    pub half: usize,
    pub point: PointSample,
    pub g: Vec<f64>,
    pub j: Vec<f64>,
    pub fundamental: Vec<f64>,
    pub nabla_j: Vec<f64>,
    pub nabla_fundamental: Vec<f64>,
    pub d_fundamental: Vec<f64>,
    pub beta: Vec<f64>,
    pub d_beta: Vec<f64>,
    pub nijenhuis: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
}

impl AhStructure {
    pub fn new(chart: ChartManifold, j: EndoField) -> Result<Self, StructureError> {
        let n = chart.dim();
        if n < 2 || n % 2 == 1 {
            return Err(StructureError::Precondition(format!(
                "almost Hermitian structures need even dimension ≥ 2, got {n}"
            )));
        }
        let j_c = chart.compile_endo(&j)?;
        Ok(Self { chart, j, j_c })
    }

    pub fn chart(&self) -> &ChartManifold {
        &self.chart
    }

    pub fn j(&self) -> &EndoField {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `n` with `dim = 2n`.
    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn raw_jets(&self, point: &[f64]) -> Result<Vec<Jet2>, StructureError> {
        self.chart.contains(point)?;
        Ok(self.j_c.eval(&self.chart.seeded(point))?)
    }

    pub fn jets(&self, point: &[f64]) -> Result<AhJets, StructureError> {
        let geo = PointGeometry::new(&self.chart, point)?;
        let j = self.raw_jets(point)?;
        Ok(AhJets::assemble(geo, j))
    }

    pub fn point_data(&self, p: &PointSample) -> Result<AhPointData, StructureError> {
        let jets = self.jets(&p.point)?;
        let frame = self.chart.orthonormal_frame(p, &[])?;
        Ok(AhPointData::from_jets(&jets, p.clone(), &frame))
    }

    /// `Ω(X, Y) = g(X, JY)`.
    pub fn fundamental_form(&self, point: &[f64], x: &[f64], y: &[f64]) -> Result<f64, StructureError> {
        let j = self.jets(point)?;
        Ok(c::form2(&c::values(&j.fundamental), x, y))
    }

    /// `β(X)`; rejected for `n = 1`.
    pub fn lee_form(&self, point: &[f64], x: &[f64]) -> Result<f64, StructureError> {
        let j = self.jets(point)?;
        match &j.beta {
            Some(b) => Ok(c::form1(&c::values(b), x)),
            None => Err(StructureError::Precondition(
                "the Lee form needs real dimension ≥ 4".into(),
            )),
        }
    }

    /// Checks `J² = −I` and `g(JX, JY) = g(X, Y)`.
    pub fn check_invariants(&self, points: usize, seed: u64) -> Result<f64, StructureError> {
        let samples = self.chart.sample_points(points, seed);
        let worst = par_points(&samples, |p| self.invariants_at(p))?;
        Ok(worst.into_iter().fold(0.0, f64::max))
    }

    fn invariants_at(&self, p: &PointSample) -> Result<f64, StructureError> {
        let n = self.dim();
        let g = self.chart.checked_metric_at(&p.point)?.values();
        let j = c::values(&self.raw_jets(&p.point)?);
        let mut r = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                let sq: f64 = (0..n).map(|l| j[k * n + l] * j[l * n + i]).sum();
                r = r.max((sq + if k == i { 1.0 } else { 0.0 }).abs());
            }
        }
        let err = |check: &str, residual: f64| StructureError::Invariant {
            check: check.to_string(),
            point: p.point.clone(),
            residual,
        };
        if !(r <= INVARIANT_TOL) {
            return Err(err("J² = −I", r));
        }
        let frame = self.chart.orthonormal_frame(p, &[])?;
        let frame: Vec<Vec<f64>> = frame.iter().map(|e| c::values(e)).collect();
        let mut s = 0.0f64;
        for t in draw_tuples(p, &frame, 4) {
            let lhs = c::inner(&g, &c::endo(&j, &t[0]), &c::endo(&j, &t[1]));
            s = s.max((lhs - c::inner(&g, &t[0], &t[1])).abs());
        }
        if !(s <= INVARIANT_TOL) {
            return Err(err("g(JX, JY) = g(X, Y)", s));
        }
        Ok(r.max(s))
    }

    pub fn classify(&self, class: ClassId, sampling: &Sampling) -> Result<ClassReport, StructureError> {
        Ok(self.classify_many(&[class], sampling)?.remove(0))
    }

    pub fn classify_all(&self, sampling: &Sampling) -> Result<Vec<ClassReport>, StructureError> {
        self.classify_many(&ClassId::AH, sampling)
    }

    pub fn classify_many(&self, classes: &[ClassId], sampling: &Sampling) -> Result<Vec<ClassReport>, StructureError> {
        if let Some(bad) = classes.iter().find(|c| c.is_acm()) {
            return Err(StructureError::Precondition(format!(
                "`{bad}` is not an almost Hermitian class"
            )));
        }
        if sampling.points == 0 {
            return Err(StructureError::NoSamples);
        }
        let points = self.chart.sample_points(sampling.points, sampling.seed);
        let data = par_points(&points, |p| self.point_data(p))?;
        let tuples: Vec<_> = data
            .iter()
            .map(|d| draw_tuples(&d.point, &d.frame, sampling.vectors))
            .collect();
        Ok(classes
            .iter()
            .map(|&class| classify_ah(class, &data, &tuples, sampling))
            .collect())
    }
}

impl AhJets {
    /// `β = −1/(2(n−1)) δΩ∘J` is only formed for `n ≥ 2`.
    pub fn assemble(geo: PointGeometry, j: Vec<Jet2>) -> Self {
        let dim = geo.n;
        let half = dim / 2;
        let fundamental = riemann::fundamental_form(&geo.g, &j);
        let nabla_j = geo.nabla_endo(&j);
        let nabla_fundamental = geo.nabla_2tensor(&fundamental);
        let delta_fundamental = geo.codifferential_2form(&nabla_fundamental);
        let beta = (half >= 2).then(|| {
            let s = -1.0 / (2.0 * (half as f64 - 1.0));
            (0..dim)
                .map(|k| (0..dim).map(|l| delta_fundamental[l] * j[l * dim + k]).sum::<Jet2>() * s)
                .collect()
        });
        Self {
            geo,
            j,
            fundamental,
            nabla_j,
            nabla_fundamental,
            delta_fundamental,
            beta,
        }
    }
}

impl AhPointData {
    pub fn from_jets(j: &AhJets, point: PointSample, frame: &[Vec<Jet2>]) -> Self {
        let n = j.geo.n;
        Self {
            n,
            half: n / 2,
            point,
            g: j.geo.g_values(),
            j: c::values(&j.j),
            fundamental: c::values(&j.fundamental),
            nabla_j: c::values(&j.nabla_j),
            nabla_fundamental: c::values(&j.nabla_fundamental),
            d_fundamental: c::values(&riemann::d_2form(&j.fundamental, n)),
            beta: j.beta.as_ref().map_or(vec![0.0; n], |b| c::values(b)),
            d_beta: j
                .beta
                .as_ref()
                .map_or(vec![0.0; n * n], |b| c::values(&riemann::d_1form(b))),
            nijenhuis: c::values(&riemann::nijenhuis(&j.j, n)),
            frame: frame.iter().map(|e| c::values(e)).collect(),
        }
    }

    pub fn j_x(&self, x: &[f64]) -> Vec<f64> {
        c::endo(&self.j, x)
    }

    pub fn omega_form(&self, x: &[f64], y: &[f64]) -> f64 {
        c::form2(&self.fundamental, x, y)
    }

    pub fn d_omega(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        c::form3(&self.d_fundamental, x, y, z)
    }

    pub fn beta_x(&self, x: &[f64]) -> f64 {
        c::form1(&self.beta, x)
    }

    /// `(β∧Ω)(X, Y, Z)`.
    pub fn beta_wedge_omega(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        (self.beta_x(x) * self.omega_form(y, z)
            + self.beta_x(y) * self.omega_form(z, x)
            + self.beta_x(z) * self.omega_form(x, y))
            / 3.0
    }

    pub fn res_kahler(&self, v: &[Vec<f64>]) -> f64 {
        vector_residual(&self.g, &c::nabla_endo(&self.nabla_j, &v[0], &v[1]), &vec![0.0; self.n])
    }

    pub fn res_almost_kahler(&self, v: &[Vec<f64>]) -> f64 {
        scalar_residual(self.d_omega(&v[0], &v[1], &v[2]), 0.0)
    }

    pub fn res_w2w4(&self, v: &[Vec<f64>]) -> f64 {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        scalar_residual(self.d_omega(x, y, z), -2.0 * self.beta_wedge_omega(x, y, z))
    }

    pub fn res_integrable(&self, v: &[Vec<f64>]) -> f64 {
        vector_residual(&self.g, &c::vector_2(&self.nijenhuis, &v[0], &v[1]), &vec![0.0; self.n])
    }

    /// Orthonormal frame `e₁, Je₁, e₂, Je₂, …` built from the coordinate fields.
    pub fn unitary_frame(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            if frame.len() == n {
                break;
            }
            let mut w = vec![0.0; n];
            w[i] = 1.0;
            let orig = c::norm(&self.g, &w);
            for e in &frame {
                let k = c::inner(&self.g, &w, e);
                w = c::combo(&[(1.0, &w), (-k, e)]);
            }
            let nw = c::norm(&self.g, &w);
            if nw < 1e-6 * orig {
                continue;
            }
            let e = c::scale(1.0 / nw, &w);
            let je = self.j_x(&e);
            let nje = c::norm(&self.g, &je);
            frame.push(e);
            frame.push(c::scale(1.0 / nje, &je));
        }
        frame
    }

    /// Largest `‖N_J(e_a, e_b)‖` over a unitary frame.
    pub fn nijenhuis_witness_norm(&self) -> f64 {
        let f = self.unitary_frame();
        let mut best = 0.0f64;
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                best = best.max(c::norm(&self.g, &c::vector_2(&self.nijenhuis, &f[a], &f[b])));
            }
        }
        best
    }
}

pub(crate) fn classify_ah(
    class: ClassId,
    data: &[AhPointData],
    tuples: &[Vec<Vec<Vec<f64>>>],
    sampling: &Sampling,
) -> ClassReport {
    let run = |arity: usize, f: &dyn Fn(&AhPointData, &[Vec<f64>]) -> f64| {
        let mut tr = MaxTracker::default();
        for (d, ts) in data.iter().zip(tuples) {
            for t in ts {
                tr.observe(f(d, t), &d.point, &t[..arity]);
            }
        }
        tr
    };
    let mut extras = Extras::new();
    let tracker = match class {
        ClassId::Kahler => {
            extras.insert("nijenhuis_witness_norm".into(), data[0].nijenhuis_witness_norm());
            run(2, &|d, v| d.res_kahler(v))
        }
        ClassId::AlmostKahler => run(3, &|d, v| d.res_almost_kahler(v)),
        ClassId::W2W4 => run(3, &|d, v| d.res_w2w4(v)),
        ClassId::W4 => run(3, &|d, v| d.res_w2w4(v).max(d.res_integrable(v))),
        _ => unreachable!("checked by caller"),
    };
    ClassReport::new(class, sampling, tracker, extras)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosymplectic_r3() -> AcmStructure {
        let chart = ChartManifold::from_strs(&["a", "b", "c"], &["1", "0", "0", "0", "1", "0", "0", "0", "1"]).unwrap();
        AcmStructure::new(
            chart,
            EndoField::parse(&[&["0", "-1", "0"], &["1", "0", "0"], &["0", "0", "0"]]).unwrap(),
            VectorField::parse(&["0", "0", "1"]).unwrap(),
            CovectorField::parse(&["0", "0", "1"]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fundamental_form_of_flat_structure() {
        let s = cosymplectic_r3();
        let v = s
            .fundamental_form(&[0.1, 0.2, 0.3], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])
            .unwrap();
        assert_eq!(v, -1.0);
        let v = s
            .fundamental_form(&[0.1, 0.2, 0.3], &[0.0, 0.0, 1.0], &[0.3, -0.7, 0.2])
            .unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(s.lee_form(&[0.0; 3], &[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn class_names_round_trip() {
        for c in ClassId::ACM.iter().chain(ClassId::AH.iter()) {
            assert_eq!(c.as_str().parse::<ClassId>().unwrap(), *c);
        }
        assert_eq!("C6".parse::<ClassId>().unwrap(), ClassId::AlphaSasakian);
        assert!("bogus".parse::<ClassId>().is_err());
    }

    #[test]
    fn zero_points_rejected() {
        let s = cosymplectic_r3();
        let sampling = Sampling {
            points: 0,
            ..Sampling::default()
        };
        assert_eq!(
            s.classify(ClassId::Cosymplectic, &sampling),
            Err(StructureError::NoSamples)
        );
    }

    #[test]
    fn corrupted_phi_fails_invariants() {
        let chart = ChartManifold::from_strs(&["a", "b", "c"], &["1", "0", "0", "0", "1", "0", "0", "0", "1"]).unwrap();
        let s = AcmStructure::new(
            chart,
            EndoField::parse(&[&["0", "-2", "0"], &["1", "0", "0"], &["0", "0", "0"]]).unwrap(),
            VectorField::parse(&["0", "0", "1"]).unwrap(),
            CovectorField::parse(&["0", "0", "1"]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            s.check_invariants(4, 1),
            Err(StructureError::Invariant { .. })
        ));
    }
}
