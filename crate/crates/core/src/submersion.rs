//! Riemannian submersions `π: M^{2m+1} → M'^{2n}` of contact-complex type
//! in adapted coordinates: the first `2n` total coordinates are the base
//! coordinates and `π` is the projection onto them.
//!
//! O'Neill tensors are computed from the vertical projector `v` and the
//! Christoffel symbols. For a coordinate field `∂_q`,
//! `∇_i(v∂_q)^l = ∂_i v^l_q + Γ^l_{ij} v^j_q` and
//! `∇_i(h∂_q)^l = Γ^l_{iq} − ∇_i(v∂_q)^l`, which gives
//!
//! ```text
//! T_E F = h ∇_{vE}(vF) + v ∇_{vE}(hF)
//! A_E F = v ∇_{hE}(hF) + h ∇_{hE}(vF)
//! ```
//!
//! at the value level, tensorial in both slots.

use thiserror::Error;

use crate::expr::ScalarFieldExpr;
use crate::jet::{Jet2, JetMatrix};
use crate::manifold::{
    complete_frame, lie_bracket_jets, unit_vector, ChartManifold, Components, CovectorField, EndoField, ManifoldError,
    PointSample, VectorField,
};
use crate::riemann::contract as c;
use crate::sampling::par_points;
use crate::structure::{AcmPointData, AcmStructure, AhPointData, AhStructure, StructureError, INVARIANT_TOL};

/// Tolerance for the adapted-coordinates check.
pub const ADAPTED_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubmersionError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("projection has rank {rank} < {want} at {point:?}")]
    RankDeficient { point: Vec<f64>, rank: usize, want: usize },
    #[error("coordinates not adapted at {point:?}: residual {residual:e}")]
    NotAdapted { point: Vec<f64>, residual: f64 },
    #[error("submersion invariant `{check}` violated at {point:?}: residual {residual:e}")]
    Invariant {
        check: String,
        point: Vec<f64>,
        residual: f64,
    },
    #[error("fibres are 1-dimensional; no induced almost contact metric structure")]
    NoFibreStructure,
}

impl From<ManifoldError> for SubmersionError {
    fn from(e: ManifoldError) -> Self {
        SubmersionError::Structure(e.into())
    }
}

impl From<crate::expr::ExprError> for SubmersionError {
    fn from(e: crate::expr::ExprError) -> Self {
        SubmersionError::Structure(e.into())
    }
}

impl From<crate::jet::JetError> for SubmersionError {
    fn from(e: crate::jet::JetError) -> Self {
        SubmersionError::Structure(e.into())
    }
}

#[derive(Debug, Clone)]
pub struct SubmersionSpec {
    total: AcmStructure,
    base: AhStructure,
    projection: Vec<ScalarFieldExpr>,
    proj_c: Components,
}

/// Jet-level splitting at one point.
#[derive(Debug, Clone)]
pub struct SplitAtPoint {
    /// Orthonormal vertical frame, `ξ` last.
    pub vertical_frame: Vec<Vec<Jet2>>,
    pub horizontal_frame: Vec<Vec<Jet2>>,
    /// Horizontal lifts `L_i = ∂_i − Σ_a c^a_i ∂_a` of the base coordinate fields.
    pub lifts: Vec<Vec<Jet2>>,
    /// Vertical projector, `[k*n + l]`.
    pub v: Vec<Jet2>,
}

/// Value-level data of a submersion at one total point.
#[derive(Debug, Clone)]
pub struct SubPointData {
    pub n: usize,
    /// Base complex dimension.
    pub half: usize,
    /// Fibre dimension is `2r + 1`.
    pub r: usize,
    pub total: AcmPointData,
    pub base: AhPointData,
    pub fibre: Option<AcmPointData>,
    pub v: Vec<f64>,
    pub h: Vec<f64>,
    /// `T(∂_p, ∂_q)^k` at `[(k*n + p)*n + q]`.
    pub t: Vec<f64>,
    /// `A(∂_p, ∂_q)^k` at `[(k*n + p)*n + q]`.
    pub a: Vec<f64>,
    pub hframe: Vec<Vec<f64>>,
    pub vframe: Vec<Vec<f64>>,
    pub lifts: Vec<Vec<f64>>,
    /// `[L_i, L_j]` at `[i*2n + j]`.
    pub lift_brackets: Vec<Vec<f64>>,
}

impl SubmersionSpec {
    pub fn new(
        total: AcmStructure,
        base: AhStructure,
        projection: Vec<ScalarFieldExpr>,
    ) -> Result<Self, SubmersionError> {
        let (m, b) = (total.dim(), base.dim());
        if projection.len() != b {
            return Err(SubmersionError::Shape(format!(
                "projection has {} components, base dimension is {b}",
                projection.len()
            )));
        }
        if b >= m {
            return Err(SubmersionError::Shape(format!(
                "base dimension {b} must be below total dimension {m}"
            )));
        }
        if total.chart().coords()[..b] != *base.chart().coords() {
            return Err(SubmersionError::Shape(
                "adapted coordinates: the base coordinates must be the leading total coordinates".into(),
            ));
        }
        let proj_c = total.chart().compile(&projection)?;
        Ok(Self {
            total,
            base,
            projection,
            proj_c,
        })
    }

    pub fn total(&self) -> &AcmStructure {
        &self.total
    }

    pub fn base(&self) -> &AhStructure {
        &self.base
    }

    pub fn projection(&self) -> &[ScalarFieldExpr] {
        &self.projection
    }

    /// `r` with fibre dimension `2r + 1`.
    pub fn r(&self) -> usize {
        (self.total.dim() - self.base.dim() - 1) / 2
    }

    /// `π(p)` evaluated from the projection expressions.
    pub fn base_point(&self, point: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        self.total.chart().contains(point)?;
        let inputs: Vec<Jet2> = point.iter().map(|&x| Jet2::constant(x)).collect();
        Ok(c::values(&self.proj_c.eval(&inputs)?))
    }

    fn adapted_at(&self, point: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        let n = self.total.dim();
        let b = self.base.dim();
        let chart = self.total.chart();
        chart.contains(point)?;
        let pj = self.proj_c.eval(&chart.seeded(point))?;
        let jac: Vec<f64> = (0..b)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| pj[i].grad(k))
            .collect();
        let rank = value_rank(&jac, b, n);
        if rank < b {
            return Err(SubmersionError::RankDeficient {
                point: point.to_vec(),
                rank,
                want: b,
            });
        }
        let mut res = 0.0f64;
        for i in 0..b {
            res = res.max((pj[i].value() - point[i]).abs());
            for k in 0..n {
                let want = if i == k { 1.0 } else { 0.0 };
                res = res.max((jac[i * n + k] - want).abs());
            }
        }
        if !(res <= ADAPTED_TOL) {
            return Err(SubmersionError::NotAdapted {
                point: point.to_vec(),
                residual: res,
            });
        }
        let bp: Vec<f64> = point[..b].to_vec();
        self.base.chart().contains(&bp)?;
        Ok(bp)
    }

    /// Checks rank, adaptedness, the Riemannian property
    /// `g(L_i, L_j) = g'_{ij}∘π` and the contact-complex property
    /// `π_*∘φ = J∘π_*`, plus the invariants of both structures.
    /// Returns the largest residual.
    pub fn validate(&self, points: usize, seed: u64) -> Result<f64, SubmersionError> {
        let mut worst = self.total.check_invariants(points, seed)?;
        worst = worst.max(self.base.check_invariants(points, seed)?);
        let samples = self.total.chart().sample_points(points, seed);
        let per = par_points(&samples, |p| self.validate_at(&p.point))?;
        Ok(per.into_iter().fold(worst, f64::max))
    }

    fn validate_at(&self, point: &[f64]) -> Result<f64, SubmersionError> {
        let n = self.total.dim();
        let b = self.base.dim();
        let bp = self.adapted_at(point)?;
        let g = self.total.chart().checked_metric_at(point)?;
        let lifts = lifts(&g, b)?;
        let gb = self.base.chart().checked_metric_at(&bp)?.values();
        let fail = |check: &str, residual: f64| -> Result<f64, SubmersionError> {
            if residual <= INVARIANT_TOL {
                Ok(residual)
            } else {
                Err(SubmersionError::Invariant {
                    check: check.into(),
                    point: point.to_vec(),
                    residual,
                })
            }
        };
        let mut riem = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                riem = riem.max((g.inner(&lifts[i], &lifts[j]).value() - gb[i * b + j]).abs());
            }
        }
        let w1 = fail("g(L_i, L_j) = g'_ij∘π", riem)?;
        let (phi, xi, _) = self.total.raw_jets(point)?;
        let j = c::values(&self.base.raw_jets(&bp)?);
        let mut cc = 0.0f64;
        for k in 0..b {
            cc = cc.max(xi[k].value().abs());
            for a in 0..n {
                let want = if a < b { j[k * b + a] } else { 0.0 };
                cc = cc.max((phi[k * n + a].value() - want).abs());
            }
        }
        Ok(w1.max(fail("π_*∘φ = J∘π_*", cc)?))
    }

    /// Vertical and horizontal frames, lifts and vertical projector at `point`.
    pub fn split(&self, point: &[f64]) -> Result<SplitAtPoint, SubmersionError> {
        self.adapted_at(point)?;
        let g = self.total.chart().checked_metric_at(point)?;
        let (_, xi, _) = self.total.raw_jets(point)?;
        split_with(&g, &xi, self.base.dim())
    }

    /// Induced structure on the fibre through `π^{-1}(base_point)`, on the
    /// trailing coordinates with the base coordinates frozen.
    pub fn fibre_structure(&self, base_point: &[f64]) -> Result<AcmStructure, SubmersionError> {
        if self.r() == 0 {
            return Err(SubmersionError::NoFibreStructure);
        }
        let n = self.total.dim();
        let b = self.base.dim();
        let chart = self.total.chart();
        let frozen: Vec<(String, f64)> = chart.coords()[..b]
            .iter()
            .cloned()
            .zip(base_point.iter().copied())
            .collect();
        let sub = |e: &ScalarFieldExpr| e.substitute(&frozen);
        let metric = chart.metric_exprs();
        let block = |src: &[ScalarFieldExpr]| -> Vec<ScalarFieldExpr> {
            (b..n)
                .flat_map(|k| (b..n).map(move |l| (k, l)))
                .map(|(k, l)| sub(&src[k * n + l]))
                .collect()
        };
        let fchart = ChartManifold::new(
            chart.coords()[b..].to_vec(),
            Some(chart.domain()[b..].to_vec()),
            block(metric),
        )?;
        let phi = EndoField {
            dim: n - b,
            components: block(&self.total.phi().components),
        };
        let xi = VectorField {
            components: self.total.xi().components[b..].iter().map(sub).collect(),
        };
        let eta = CovectorField {
            components: self.total.eta().components[b..].iter().map(sub).collect(),
        };
        Ok(AcmStructure::new(fchart, phi, xi, eta)?)
    }

    pub fn point_data(&self, p: &PointSample) -> Result<SubPointData, SubmersionError> {
        let n = self.total.dim();
        let b = self.base.dim();
        let bp = self.adapted_at(&p.point)?;
        let jets = self.total.jets(&p.point)?;
        let split = split_with(&jets.geo.g, &jets.xi, b)?;
        let frame = self.total.chart().orthonormal_frame(p, &[])?;
        let total = AcmPointData::from_jets(&jets, p.clone(), self.total.m(), &frame);

        let v = c::values(&split.v);
        let h: Vec<f64> = (0..n * n)
            .map(|i| if i / n == i % n { 1.0 } else { 0.0 } - v[i])
            .collect();
        let gam = |k: usize, i: usize, j: usize| jets.geo.gamma(k, i, j).value();
        let mut dv = vec![0.0; n * n * n];
        for i in 0..n {
            for k in 0..n {
                for q in 0..n {
                    let mut s = split.v[k * n + q].partial(i).value();
                    for j in 0..n {
                        s += gam(k, i, j) * v[j * n + q];
                    }
                    dv[(i * n + k) * n + q] = s;
                }
            }
        }
        let dh: Vec<f64> = (0..n * n * n)
            .map(|idx| {
                let (i, k, q) = (idx / (n * n), (idx / n) % n, idx % n);
                gam(k, i, q) - dv[idx]
            })
            .collect();
        // contract[p][l][q] = Σ_i proj[i][p] d[i][l][q]
        let contract = |proj: &[f64], d: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n * n * n];
            for i in 0..n {
                for pp in 0..n {
                    let w = proj[i * n + pp];
                    if w == 0.0 {
                        continue;
                    }
                    for lq in 0..n * n {
                        out[pp * n * n + lq] += w * d[i * n * n + lq];
                    }
                }
            }
            out
        };
        let (vdv, vdh, hdv, hdh) = (
            contract(&v, &dv),
            contract(&v, &dh),
            contract(&h, &dv),
            contract(&h, &dh),
        );
        let assemble = |outer1: &[f64], in1: &[f64], outer2: &[f64], in2: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n * n * n];
            for k in 0..n {
                for pp in 0..n {
                    for q in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += outer1[k * n + l] * in1[(pp * n + l) * n + q]
                                + outer2[k * n + l] * in2[(pp * n + l) * n + q];
                        }
                        out[(k * n + pp) * n + q] = s;
                    }
                }
            }
            out
        };
        let t = assemble(&h, &vdv, &v, &vdh);
        let a = assemble(&v, &hdh, &h, &hdv);

        let lift_brackets = (0..b * b)
            .map(|ij| c::values(&lie_bracket_jets(&split.lifts[ij / b], &split.lifts[ij % b])))
            .collect();
        let base_sample = PointSample {
            index: p.index,
            point: bp.clone(),
            rng_seed: p.rng_seed,
        };
        let base = self.base.point_data(&base_sample)?;
        let fibre = if self.r() >= 1 {
            let fs = self.fibre_structure(&bp)?;
            let fp = PointSample {
                index: p.index,
                point: p.point[b..].to_vec(),
                rng_seed: p.rng_seed,
            };
            Some(fs.point_data(&fp)?)
        } else {
            None
        };
        let vals = |f: &[Vec<Jet2>]| f.iter().map(|e| c::values(e)).collect::<Vec<_>>();
        Ok(SubPointData {
            n,
            half: b / 2,
            r: self.r(),
            total,
            base,
            fibre,
            v,
            h,
            t,
            a,
            hframe: vals(&split.horizontal_frame),
            vframe: vals(&split.vertical_frame),
            lifts: vals(&split.lifts),
            lift_brackets,
        })
    }

    /// `T_E F` at `point`.
    pub fn oneill_t(&self, point: &[f64], e: &[f64], f: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        Ok(self.point_data(&PointSample::at(point.to_vec()))?.t_ef(e, f))
    }

    /// `A_E F` at `point`.
    pub fn oneill_a(&self, point: &[f64], e: &[f64], f: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        Ok(self.point_data(&PointSample::at(point.to_vec()))?.a_ef(e, f))
    }

    /// Mean curvature vector `N = Σ_a T_{u_a} u_a` at `point`.
    pub fn mean_curvature(&self, point: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        Ok(self.point_data(&PointSample::at(point.to_vec()))?.mean_curvature())
    }

    /// Horizontal lift of a base tangent vector at `point`.
    pub fn horizontal_lift(&self, point: &[f64], x: &[f64]) -> Result<Vec<f64>, SubmersionError> {
        let s = self.split(point)?;
        let lifts: Vec<Vec<f64>> = s.lifts.iter().map(|l| c::values(l)).collect();
        Ok(lift_with(&lifts, x))
    }
}

fn lift_with(lifts: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let terms: Vec<(f64, &[f64])> = x.iter().zip(lifts).map(|(&k, l)| (k, l.as_slice())).collect();
    c::combo(&terms)
}

/// Rank by Gaussian elimination with a relative pivot threshold.
fn value_rank(a: &[f64], rows: usize, cols: usize) -> usize {
    let mut m = a.to_vec();
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows).max_by(|&x, &y| m[x * cols + col].abs().total_cmp(&m[y * cols + col].abs()));
        let Some(piv) = piv else { break };
        if m[piv * cols + col].abs() <= ADAPTED_TOL * scale {
            continue;
        }
        for k in 0..cols {
            m.swap(rank * cols + k, piv * cols + k);
        }
        for r in rank + 1..rows {
            let f = m[r * cols + col] / m[rank * cols + col];
            for k in col..cols {
                m[r * cols + k] -= f * m[rank * cols + k];
            }
        }
        rank += 1;
    }
    rank
}

fn lifts(g: &JetMatrix, b: usize) -> Result<Vec<Vec<Jet2>>, SubmersionError> {
    let n = g.rows();
    let nv = n - b;
    let gvv = JetMatrix::from_fn(nv, nv, |a, c| g[(b + a, b + c)]);
    let gvh = JetMatrix::from_fn(nv, b, |a, i| g[(b + a, i)]);
    let coef = gvv.solve(&gvh)?;
    Ok((0..b)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if k < b {
                        Jet2::constant(if k == i { 1.0 } else { 0.0 })
                    } else {
                        -coef[(k - b, i)]
                    }
                })
                .collect()
        })
        .collect())
}

fn split_with(g: &JetMatrix, xi: &[Jet2], b: usize) -> Result<SplitAtPoint, SubmersionError> {
    let n = g.rows();
    let coordinate: Vec<Vec<Jet2>> = (b..n).map(|a| unit_vector(n, a)).collect();
    let mut vertical_frame = complete_frame(&[xi.to_vec()], &coordinate, g, n - b)?;
    vertical_frame.rotate_left(1);
    let lifts = lifts(g, b)?;
    let horizontal_frame = crate::jet::gram_schmidt(&lifts, g)?;
    let gv: Vec<Vec<Jet2>> = vertical_frame.iter().map(|e| g.mul_vec(e)).collect();
    let v = (0..n * n)
        .map(|idx| {
            let (k, l) = (idx / n, idx % n);
            vertical_frame.iter().zip(&gv).map(|(e, ge)| e[k] * ge[l]).sum()
        })
        .collect();
    Ok(SplitAtPoint {
        vertical_frame,
        horizontal_frame,
        lifts,
        v,
    })
}

impl SubPointData {
    pub fn vert(&self, x: &[f64]) -> Vec<f64> {
        c::endo(&self.v, x)
    }

    pub fn hor(&self, x: &[f64]) -> Vec<f64> {
        c::endo(&self.h, x)
    }

    pub fn t_ef(&self, e: &[f64], f: &[f64]) -> Vec<f64> {
        c::vector_2(&self.t, e, f)
    }

    pub fn a_ef(&self, e: &[f64], f: &[f64]) -> Vec<f64> {
        c::vector_2(&self.a, e, f)
    }

    /// `N = Σ_a T_{u_a} u_a` over the vertical orthonormal frame.
    pub fn mean_curvature(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for u in &self.vframe {
            out = c::add(&out, &self.t_ef(u, u));
        }
        out
    }

    /// `π_* X` in base coordinates.
    pub fn push(&self, x: &[f64]) -> Vec<f64> {
        x[..2 * self.half].to_vec()
    }

    /// Horizontal lift of a base vector.
    pub fn lift(&self, x: &[f64]) -> Vec<f64> {
        lift_with(&self.lifts, x)
    }

    /// Vertical vector in fibre coordinates.
    pub fn to_fibre(&self, u: &[f64]) -> Vec<f64> {
        u[2 * self.half..].to_vec()
    }

    /// `[X, Y]` for horizontal `X`, `Y` extended as combinations of the lifts
    /// with constant base coefficients.
    pub fn basic_bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let b = 2 * self.half;
        let (xb, yb) = (self.push(x), self.push(y));
        let mut out = vec![0.0; self.n];
        for i in 0..b {
            for j in 0..b {
                let w = xb[i] * yb[j];
                if w != 0.0 {
                    out = c::add(&out, &c::scale(w, &self.lift_brackets[i * b + j]));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_all(src: &[&str]) -> Vec<ScalarFieldExpr> {
        src.iter().map(|s| ScalarFieldExpr::parse(s).unwrap()).collect()
    }

    /// Flat `R^2 × R^3` with the standard structures and a tilted metric on
    /// the vertical block.
    fn flat_product() -> SubmersionSpec {
        let total = AcmStructure::new(
            ChartManifold::from_strs(
                &["x", "y", "a", "b", "t"],
                &[
                    "1", "0", "0", "0", "0", //
                    "0", "1", "0", "0", "0", //
                    "0", "0", "1", "0", "0", //
                    "0", "0", "0", "1", "0", //
                    "0", "0", "0", "0", "1",
                ],
            )
            .unwrap(),
            EndoField::parse(&[
                &["0", "-1", "0", "0", "0"],
                &["1", "0", "0", "0", "0"],
                &["0", "0", "0", "-1", "0"],
                &["0", "0", "1", "0", "0"],
                &["0", "0", "0", "0", "0"],
            ])
            .unwrap(),
            VectorField::parse(&["0", "0", "0", "0", "1"]).unwrap(),
            CovectorField::parse(&["0", "0", "0", "0", "1"]).unwrap(),
        )
        .unwrap();
        let base = AhStructure::new(
            ChartManifold::from_strs(&["x", "y"], &["1", "0", "0", "1"]).unwrap(),
            EndoField::parse(&[&["0", "-1"], &["1", "0"]]).unwrap(),
        )
        .unwrap();
        SubmersionSpec::new(total, base, parse_all(&["x", "y"])).unwrap()
    }

    #[test]
    fn product_has_vanishing_oneill_tensors() {
        let s = flat_product();
        assert!(s.validate(4, 3).unwrap() < 1e-12);
        let d = s.point_data(&PointSample::at(vec![0.1, 0.2, -0.3, 0.4, 0.5])).unwrap();
        assert!(d.t.iter().chain(&d.a).all(|x| x.abs() < 1e-14));
        assert_eq!(d.r, 1);
        assert!(d.fibre.is_some());
        // ξ comes last in the vertical frame
        assert_eq!(d.vframe[2], vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn non_adapted_projection_rejected() {
        let s = flat_product();
        let bad = SubmersionSpec::new(s.total.clone(), s.base.clone(), parse_all(&["x+a", "y"])).unwrap();
        assert!(matches!(bad.validate(2, 1), Err(SubmersionError::NotAdapted { .. })));
        let flat = SubmersionSpec::new(s.total.clone(), s.base.clone(), parse_all(&["x", "x"])).unwrap();
        assert!(matches!(
            flat.validate(2, 1),
            Err(SubmersionError::RankDeficient { rank: 1, .. })
        ));
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(value_rank(&[1.0, 0.0, 0.0, 1.0], 2, 2), 2);
        assert_eq!(value_rank(&[1.0, 2.0, 2.0, 4.0], 2, 2), 1);
        assert_eq!(value_rank(&[0.0; 4], 2, 2), 0);
    }
}
