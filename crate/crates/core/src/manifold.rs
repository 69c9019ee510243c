//! Single-chart manifolds, tensor fields stored as expressions, sampling,
//! frames and brackets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{CompiledExpr, ExprError, ScalarFieldExpr};
use crate::jet::{gram_schmidt, Jet2, JetError, JetMatrix, MAX_VARS};

/// Value-level tolerance for metric symmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManifoldError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("coordinate `{coord}` = {value} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain {
        coord: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("metric not symmetric at {point:?}: |g{i}{j} - g{j}{i}| = {residual:e}")]
    NotSymmetric {
        point: Vec<f64>,
        i: usize,
        j: usize,
        residual: f64,
    },
    #[error("metric not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },
    #[error("degenerate frame input: {0}")]
    Degenerate(String),
}

/// A coordinate point drawn from the sampling box.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    pub index: usize,
    pub point: Vec<f64>,
    pub rng_seed: u64,
}

impl PointSample {
    pub fn at(point: Vec<f64>) -> Self {
        Self {
            index: 0,
            point,
            rng_seed: 0,
        }
    }

    /// Generator for vector draws at this point, independent of other points.
    pub fn rng(&self) -> ChaCha8Rng {
        self.stream(0)
    }

    /// Independent generator number `k` at this point.
    pub fn stream(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed ^ 0x9e37_79b9_7f4a_7c15);
        rng.set_stream(k);
        rng
    }
}

/// Compiled component expressions of a field.
#[derive(Debug, Clone)]
pub struct Components {
    exprs: Vec<CompiledExpr>,
}

impl Components {
    pub fn compile(exprs: &[ScalarFieldExpr], coords: &[String]) -> Result<Self, ExprError> {
        Ok(Self {
            exprs: exprs.iter().map(|e| e.compile(coords)).collect::<Result<_, _>>()?,
        })
    }

    pub fn eval(&self, inputs: &[Jet2]) -> Result<Vec<Jet2>, ExprError> {
        self.exprs.iter().map(|e| e.eval(inputs)).collect()
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }
}

fn check_len(what: &str, got: usize, want: usize) -> Result<(), ManifoldError> {
    if got != want {
        return Err(ManifoldError::Shape(format!(
            "{what} has {got} components, expected {want}"
        )));
    }
    Ok(())
}

/// A vector field `Σ X^i ∂_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub components: Vec<ScalarFieldExpr>,
}

/// A 1-form `Σ η_i dx^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovectorField {
    pub components: Vec<ScalarFieldExpr>,
}

/// A (1,1) tensor, row-major: entry `(i, j)` is the `i`-th component of the image of `∂_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoField {
    pub dim: usize,
    pub components: Vec<ScalarFieldExpr>,
}

impl VectorField {
    pub fn parse(src: &[&str]) -> Result<Self, ExprError> {
        Ok(Self {
            components: src
                .iter()
                .map(|s| ScalarFieldExpr::parse(s))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl CovectorField {
    pub fn parse(src: &[&str]) -> Result<Self, ExprError> {
        Ok(Self {
            components: src
                .iter()
                .map(|s| ScalarFieldExpr::parse(s))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl EndoField {
    pub fn parse(rows: &[&[&str]]) -> Result<Self, ExprError> {
        let dim = rows.len();
        let mut components = Vec::with_capacity(dim * dim);
        for row in rows {
            for s in *row {
                components.push(ScalarFieldExpr::parse(s)?);
            }
        }
        Ok(Self { dim, components })
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarFieldExpr {
        &self.components[i * self.dim + j]
    }
}

/// A manifold covered by one chart, with a metric given by expressions.
#[derive(Debug, Clone)]
pub struct ChartManifold {
    coords: Vec<String>,
    domain: Vec<(f64, f64)>,
    metric: Vec<ScalarFieldExpr>,
    metric_c: Components,
}

impl ChartManifold {
    /// `metric` is row-major `dim × dim`; `domain` defaults to `[-1, 1]` per coordinate.
    pub fn new(
        coords: Vec<String>,
        domain: Option<Vec<(f64, f64)>>,
        metric: Vec<ScalarFieldExpr>,
    ) -> Result<Self, ManifoldError> {
        let dim = coords.len();
        if dim == 0 {
            return Err(ManifoldError::Shape("dimension must be positive".into()));
        }
        if dim > MAX_VARS {
            return Err(JetError::TooManyVars(dim).into());
        }
        for (k, c) in coords.iter().enumerate() {
            if coords[..k].contains(c) {
                return Err(ManifoldError::Shape(format!("duplicate coordinate `{c}`")));
            }
        }
        check_len("metric", metric.len(), dim * dim)?;
        let domain = domain.unwrap_or_else(|| vec![(-1.0, 1.0); dim]);
        check_len("domain", domain.len(), dim)?;
        for (c, &(lo, hi)) in coords.iter().zip(&domain) {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(ManifoldError::Shape(format!("bad domain [{lo}, {hi}] for `{c}`")));
            }
        }
        let metric_c = Components::compile(&metric, &coords)?;
        Ok(Self {
            coords,
            domain,
            metric,
            metric_c,
        })
    }

    /// Convenience constructor from expression strings.
    pub fn from_strs(coords: &[&str], metric: &[&str]) -> Result<Self, ManifoldError> {
        let metric = metric
            .iter()
            .map(|s| ScalarFieldExpr::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coords.iter().map(|s| s.to_string()).collect(), None, metric)
    }

    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Result<Self, ManifoldError> {
        check_len("domain", domain.len(), self.dim())?;
        self.domain = domain;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn metric_exprs(&self) -> &[ScalarFieldExpr] {
        &self.metric
    }

    pub fn compile(&self, exprs: &[ScalarFieldExpr]) -> Result<Components, ExprError> {
        Components::compile(exprs, &self.coords)
    }

    pub fn compile_vector(&self, v: &VectorField) -> Result<Components, ManifoldError> {
        check_len("vector field", v.components.len(), self.dim())?;
        Ok(self.compile(&v.components)?)
    }

    pub fn compile_covector(&self, v: &CovectorField) -> Result<Components, ManifoldError> {
        check_len("covector field", v.components.len(), self.dim())?;
        Ok(self.compile(&v.components)?)
    }

    pub fn compile_endo(&self, e: &EndoField) -> Result<Components, ManifoldError> {
        check_len("endomorphism field", e.components.len(), self.dim() * self.dim())?;
        Ok(self.compile(&e.components)?)
    }

    pub fn contains(&self, point: &[f64]) -> Result<(), ManifoldError> {
        check_len("point", point.len(), self.dim())?;
        for ((c, &(lo, hi)), &x) in self.coords.iter().zip(&self.domain).zip(point) {
            if !(x >= lo && x <= hi) {
                return Err(ManifoldError::OutsideDomain {
                    coord: c.clone(),
                    value: x,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    /// Coordinate jets at `point`, every coordinate seeded.
    pub fn seeded(&self, point: &[f64]) -> Vec<Jet2> {
        let n = self.dim();
        point
            .iter()
            .enumerate()
            .map(|(i, &x)| Jet2::variable(x, i, n))
            .collect()
    }

    /// Deterministic sample points; each point carries its own derived seed.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<PointSample> {
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|index| {
                let rng_seed: u64 = master.random();
                let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                let point = self
                    .domain
                    .iter()
                    .map(|&(lo, hi)| if lo == hi { lo } else { rng.random_range(lo..=hi) })
                    .collect();
                PointSample { index, point, rng_seed }
            })
            .collect()
    }

    /// Metric as a jet matrix seeded on all coordinates.
    pub fn metric_at(&self, point: &[f64]) -> Result<JetMatrix, ManifoldError> {
        self.contains(point)?;
        let n = self.dim();
        let vals = self.metric_c.eval(&self.seeded(point))?;
        Ok(JetMatrix::from_fn(n, n, |i, j| vals[i * n + j]))
    }

    /// Metric with symmetry and positive-definiteness checked at the value level.
    pub fn checked_metric_at(&self, point: &[f64]) -> Result<JetMatrix, ManifoldError> {
        let g = self.metric_at(point)?;
        check_metric_values(&g, point)?;
        Ok(g)
    }

    /// Evaluates field components; `order` 0 drops derivatives.
    pub fn eval_field(&self, field: &Components, p: &PointSample, order: u8) -> Result<Vec<Jet2>, ManifoldError> {
        self.contains(&p.point)?;
        let inputs = if order == 0 {
            p.point.iter().map(|&x| Jet2::constant(x)).collect()
        } else {
            self.seeded(&p.point)
        };
        Ok(field
            .eval(&inputs)?
            .into_iter()
            .map(|j| j.truncate(order.min(2)))
            .collect())
    }

    /// Orthonormal jet frame; `preferred` fields come first, then coordinate
    /// fields fill the remaining slots.
    pub fn orthonormal_frame(&self, p: &PointSample, preferred: &[Vec<Jet2>]) -> Result<Vec<Vec<Jet2>>, ManifoldError> {
        let g = self.checked_metric_at(&p.point)?;
        let n = self.dim();
        let coordinate: Vec<Vec<Jet2>> = (0..n).map(|i| unit_vector(n, i)).collect();
        complete_frame(preferred, &coordinate, &g, n)
    }
}

/// Constant jet vector `∂_i`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Jet2> {
    (0..n).map(|k| Jet2::constant(if k == i { 1.0 } else { 0.0 })).collect()
}

/// Value-level symmetry and Cholesky check.
pub fn check_metric_values(g: &JetMatrix, point: &[f64]) -> Result<(), ManifoldError> {
    let n = g.rows();
    for i in 0..n {
        for j in i + 1..n {
            let r = (g[(i, j)].value() - g[(j, i)].value()).abs();
            if !(r <= SYMMETRY_TOL) {
                return Err(ManifoldError::NotSymmetric {
                    point: point.to_vec(),
                    i,
                    j,
                    residual: r,
                });
            }
        }
    }
    if cholesky(&g.values(), n).is_none() {
        return Err(ManifoldError::NotPositiveDefinite { point: point.to_vec() });
    }
    Ok(())
}

/// Lower Cholesky factor of a row-major SPD matrix.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Some(l)
}

/// Gram–Schmidt on `preferred`, then on candidates until `total` vectors.
///
/// At each step the candidate with the largest residual (relative to its own
/// length) is taken, lowest index first on ties, so nearly dependent
/// candidates are never picked while better ones remain.
pub fn complete_frame(
    preferred: &[Vec<Jet2>],
    candidates: &[Vec<Jet2>],
    g: &JetMatrix,
    total: usize,
) -> Result<Vec<Vec<Jet2>>, ManifoldError> {
    let mut frame = gram_schmidt(preferred, g).map_err(|e| ManifoldError::Degenerate(e.to_string()))?;
    let mut used = vec![false; candidates.len()];
    while frame.len() < total {
        let mut best: Option<(usize, f64)> = None;
        for (k, c) in candidates.iter().enumerate() {
            if used[k] {
                continue;
            }
            let ratio = residual_ratio(c, &frame, g);
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some((k, ratio));
            }
        }
        let Some((k, _)) = best else {
            return Err(ManifoldError::Degenerate(format!(
                "only {} of {total} frame vectors available",
                frame.len()
            )));
        };
        used[k] = true;
        let mut input = frame.clone();
        input.push(candidates[k].clone());
        let mut out = gram_schmidt(&input, g).map_err(|e| ManifoldError::Degenerate(e.to_string()))?;
        frame.push(out.pop().expect("non-empty"));
    }
    Ok(frame)
}

fn residual_ratio(c: &[Jet2], frame: &[Vec<Jet2>], g: &JetMatrix) -> f64 {
    let n = c.len();
    let gv = g.values();
    let ip = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * gv[i * n + j] * b[j];
            }
        }
        s
    };
    let c0: Vec<f64> = c.iter().map(Jet2::value).collect();
    let mut w = c0.clone();
    for e in frame {
        let e0: Vec<f64> = e.iter().map(Jet2::value).collect();
        let k = ip(&w, &e0);
        for i in 0..n {
            w[i] -= k * e0[i];
        }
    }
    let orig = ip(&c0, &c0).max(0.0).sqrt();
    if orig == 0.0 {
        return 0.0;
    }
    ip(&w, &w).max(0.0).sqrt() / orig
}

/// `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i` for jet-valued components.
pub fn lie_bracket_jets(x: &[Jet2], y: &[Jet2]) -> Vec<Jet2> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut acc = Jet2::zero();
            for j in 0..n {
                acc += x[j] * y[i].partial(j) - y[j] * x[i].partial(j);
            }
            acc
        })
        .collect()
}

/// Bracket of two vector fields at a point.
pub fn lie_bracket(
    chart: &ChartManifold,
    x: &Components,
    y: &Components,
    p: &PointSample,
) -> Result<Vec<Jet2>, ManifoldError> {
    let xs = chart.eval_field(x, p, 2)?;
    let ys = chart.eval_field(y, p, 2)?;
    Ok(lie_bracket_jets(&xs, &ys))
}

/// Uniform `[-1, 1]` coefficients in `frame`, evaluated at the value level.
pub fn random_vector(rng: &mut impl Rng, frame: &[Vec<Jet2>]) -> Vec<f64> {
    let n = frame.first().map_or(0, Vec::len);
    let mut v = vec![0.0; n];
    for e in frame {
        let c: f64 = rng.random_range(-1.0..=1.0);
        for i in 0..n {
            v[i] += c * e[i].value();
        }
    }
    v
}
