//! Levi-Civita connection and differential operators in coordinates.
//!
//! All tensors are flat row-major arrays of jets. Layouts:
//!
//! | object | layout | meaning |
//! |---|---|---|
//! | vector `V` | `[k]` | `V^k` |
//! | 1-form `η` | `[j]` | `η_j` |
//! | endomorphism `φ` | `[k*n + j]` | `(φ∂_j)^k` |
//! | 2-form `B` | `[j*n + k]` | `B(∂_j, ∂_k)` |
//! | `∇V` | `[i*n + k]` | `(∇_i V)^k` |
//! | `∇η` | `[i*n + j]` | `(∇_i η)_j` |
//! | `∇φ` | `[(i*n + k)*n + j]` | `((∇_i φ)∂_j)^k` |
//! | `∇B`, 3-forms | `[(i*n + j)*n + k]` | `(∇_i B)_{jk}`, `C(∂_i, ∂_j, ∂_k)` |
//! | Γ, Nijenhuis | `[(k*n + i)*n + j]` | `Γ^k_{ij}`, `N(∂_i, ∂_j)^k` |
//!
//! Normalizations: `dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y]))`, `dB` is one third of
//! the cyclic sum, `(ω∧B)(X,Y,Z) = ⅓(ω(X)B(Y,Z) + ω(Y)B(Z,X) + ω(Z)B(X,Y))` and
//! `(α∧β)(X,Y) = ½(α(X)β(Y) − α(Y)β(X))`.

use crate::jet::{Jet2, JetMatrix};
use crate::manifold::{ChartManifold, ManifoldError};

/// Metric, inverse metric and Christoffel symbols at one point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub n: usize,
    pub point: Vec<f64>,
    pub g: JetMatrix,
    pub ginv: JetMatrix,
    pub gamma: Vec<Jet2>,
}

impl PointGeometry {
    pub fn new(chart: &ChartManifold, point: &[f64]) -> Result<Self, ManifoldError> {
        let g = chart.checked_metric_at(point)?;
        Self::from_metric(g, point)
    }

    pub fn from_metric(g: JetMatrix, point: &[f64]) -> Result<Self, ManifoldError> {
        let ginv = g.inverse()?;
        let gamma = christoffel(&g, &ginv);
        Ok(Self {
            n: g.rows(),
            point: point.to_vec(),
            g,
            ginv,
            gamma,
        })
    }

    #[inline]
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> Jet2 {
        let n = self.n;
        self.gamma[(k * n + i) * n + j]
    }

    pub fn g_values(&self) -> Vec<f64> {
        self.g.values()
    }

    /// `(∇_i V)^k = ∂_i V^k + Γ^k_{ij} V^j`.
    pub fn nabla_vector(&self, v: &[Jet2]) -> Vec<Jet2> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let mut acc = v[k].partial(i);
                for j in 0..n {
                    acc += self.gamma(k, i, j) * v[j];
                }
                out.push(acc);
            }
        }
        out
    }

    /// `(∇_i η)_j = ∂_i η_j − Γ^l_{ij} η_l`.
    pub fn nabla_covector(&self, eta: &[Jet2]) -> Vec<Jet2> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = eta[j].partial(i);
                for l in 0..n {
                    acc -= self.gamma(l, i, j) * eta[l];
                }
                out.push(acc);
            }
        }
        out
    }

    /// `(∇_i φ)^k_j = ∂_i φ^k_j + Γ^k_{il} φ^l_j − Γ^l_{ij} φ^k_l`.
    pub fn nabla_endo(&self, phi: &[Jet2]) -> Vec<Jet2> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let mut acc = phi[k * n + j].partial(i);
                    for l in 0..n {
                        acc += self.gamma(k, i, l) * phi[l * n + j] - self.gamma(l, i, j) * phi[k * n + l];
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    /// `(∇_i B)_{jk} = ∂_i B_{jk} − Γ^l_{ij} B_{lk} − Γ^l_{ik} B_{jl}`.
    pub fn nabla_2tensor(&self, b: &[Jet2]) -> Vec<Jet2> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = b[j * n + k].partial(i);
                    for l in 0..n {
                        acc -= self.gamma(l, i, j) * b[l * n + k] + self.gamma(l, i, k) * b[j * n + l];
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    /// `δη = −g^{ij} (∇_i η)_j`.
    pub fn codifferential_1form(&self, nabla_eta: &[Jet2]) -> Jet2 {
        let n = self.n;
        let mut acc = Jet2::zero();
        for i in 0..n {
            for j in 0..n {
                acc -= self.ginv[(i, j)] * nabla_eta[i * n + j];
            }
        }
        acc
    }

    /// `(δB)_k = −g^{ij} (∇_i B)_{jk}`.
    pub fn codifferential_2form(&self, nabla_b: &[Jet2]) -> Vec<Jet2> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = Jet2::zero();
                for i in 0..n {
                    for j in 0..n {
                        acc -= self.ginv[(i, j)] * nabla_b[(i * n + j) * n + k];
                    }
                }
                acc
            })
            .collect()
    }

    /// Raises a 1-form: `B^k = g^{kj} ω_j`.
    pub fn sharp(&self, omega: &[Jet2]) -> Vec<Jet2> {
        self.ginv.mul_vec(omega)
    }

    /// Lowers a vector: `X_j = g_{jk} X^k`.
    pub fn flat(&self, v: &[Jet2]) -> Vec<Jet2> {
        self.g.mul_vec(v)
    }

    /// `(∇_i g)_{jk}`; zero for the Levi-Civita connection.
    pub fn nabla_metric(&self) -> Vec<Jet2> {
        let n = self.n;
        let g: Vec<Jet2> = (0..n * n).map(|k| self.g[(k / n, k % n)]).collect();
        self.nabla_2tensor(&g)
    }
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})`, symmetric in `i, j` by construction.
pub fn christoffel(g: &JetMatrix, ginv: &JetMatrix) -> Vec<Jet2> {
    let n = g.rows();
    let mut dg = vec![Jet2::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg[(l * n + i) * n + j] = g[(i, j)].partial(l);
            }
        }
    }
    let d = |l: usize, i: usize, j: usize| dg[(l * n + i) * n + j];
    let mut first = vec![Jet2::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = (d(i, j, l) + d(j, i, l) - d(l, i, j)) * 0.5;
                first[(l * n + i) * n + j] = v;
                first[(l * n + j) * n + i] = v;
            }
        }
    }
    let mut gamma = vec![Jet2::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = Jet2::zero();
                for l in 0..n {
                    acc += ginv[(k, l)] * first[(l * n + i) * n + j];
                }
                gamma[(k * n + i) * n + j] = acc;
                gamma[(k * n + j) * n + i] = acc;
            }
        }
    }
    gamma
}

/// `dη_{ij} = ½(∂_i η_j − ∂_j η_i)`.
pub fn d_1form(eta: &[Jet2]) -> Vec<Jet2> {
    let n = eta.len();
    let mut out = vec![Jet2::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[i * n + j] = (eta[j].partial(i) - eta[i].partial(j)) * 0.5;
            }
        }
    }
    out
}

/// `dB_{ijk} = ⅓(∂_i B_{jk} + ∂_j B_{ki} + ∂_k B_{ij})` for a 2-form `B`.
pub fn d_2form(b: &[Jet2], n: usize) -> Vec<Jet2> {
    let mut db = vec![Jet2::zero(); n * n * n];
    let mut part = vec![Jet2::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                part[(i * n + j) * n + k] = b[j * n + k].partial(i);
            }
        }
    }
    let p = |i: usize, j: usize, k: usize| part[(i * n + j) * n + k];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                db[(i * n + j) * n + k] = (p(i, j, k) + p(j, k, i) + p(k, i, j)) * (1.0 / 3.0);
            }
        }
    }
    db
}

/// `(ω∧B)_{ijk} = ⅓(ω_i B_{jk} + ω_j B_{ki} + ω_k B_{ij})`.
pub fn wedge_1_2(omega: &[Jet2], b: &[Jet2]) -> Vec<Jet2> {
    let n = omega.len();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push((omega[i] * b[j * n + k] + omega[j] * b[k * n + i] + omega[k] * b[i * n + j]) * (1.0 / 3.0));
            }
        }
    }
    out
}

/// `(α∧β)_{ij} = ½(α_i β_j − α_j β_i)`.
pub fn wedge_1_1(a: &[Jet2], b: &[Jet2]) -> Vec<Jet2> {
    let n = a.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((a[i] * b[j] - a[j] * b[i]) * 0.5);
        }
    }
    out
}

/// Fundamental 2-form `Φ_{ij} = g_{ik} φ^k_j`.
pub fn fundamental_form(g: &JetMatrix, phi: &[Jet2]) -> Vec<Jet2> {
    let n = g.rows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Jet2::zero();
            for k in 0..n {
                acc += g[(i, k)] * phi[k * n + j];
            }
            out.push(acc);
        }
    }
    out
}

/// `N(∂_i, ∂_j)^k` for `N_φ(X,Y) = φ²[X,Y] + [φX,φY] − φ[X,φY] − φ[φX,Y]`.
pub fn nijenhuis(phi: &[Jet2], n: usize) -> Vec<Jet2> {
    let at = |k: usize, j: usize| phi[k * n + j];
    let mut dphi = vec![Jet2::zero(); n * n * n];
    for l in 0..n {
        for k in 0..n {
            for j in 0..n {
                dphi[(l * n + k) * n + j] = at(k, j).partial(l);
            }
        }
    }
    let d = |l: usize, k: usize, j: usize| dphi[(l * n + k) * n + j];
    let mut out = vec![Jet2::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut acc = Jet2::zero();
                for l in 0..n {
                    acc += at(l, i) * d(l, k, j) - at(l, j) * d(l, k, i);
                    acc -= at(k, l) * (d(i, l, j) - d(j, l, i));
                }
                out[(k * n + i) * n + j] = acc;
            }
        }
    }
    out
}

/// Value-level helpers for contracting evaluated tensors with vectors.
pub mod contract {
    use crate::jet::Jet2;

    pub fn values(v: &[Jet2]) -> Vec<f64> {
        v.iter().map(Jet2::value).collect()
    }

    pub fn form1(eta: &[f64], x: &[f64]) -> f64 {
        eta.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn form2(b: &[f64], x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * b[i * n + j] * y[j];
            }
        }
        s
    }

    pub fn form3(c: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    s += x[i] * y[j] * z[k] * c[(i * n + j) * n + k];
                }
            }
        }
        s
    }

    /// `φX` for an endomorphism in `[k*n + j]` layout.
    pub fn endo(phi: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n).map(|k| (0..n).map(|j| phi[k * n + j] * x[j]).sum()).collect()
    }

    /// Contracts the first slot of a `[(i*n + a)*n + b]` array: `Σ_i x^i T_i`.
    pub fn first_slot(t: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for a in 0..n * n {
                out[a] += x[i] * t[i * n * n + a];
            }
        }
        out
    }

    /// `(∇_X V)` from `[i*n + k]` layout.
    pub fn nabla_vec(nv: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n).map(|k| (0..n).map(|i| x[i] * nv[i * n + k]).sum()).collect()
    }

    /// `(∇_X φ)Y` from `[(i*n + k)*n + j]` layout.
    pub fn nabla_endo(nphi: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
        endo(&first_slot(nphi, x), y)
    }

    /// `N(X, Y)` from `[(k*n + i)*n + j]` layout.
    pub fn vector_2(t: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    if x[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        s += x[i] * y[j] * t[(k * n + i) * n + j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn inner(g: &[f64], x: &[f64], y: &[f64]) -> f64 {
        form2(g, x, y)
    }

    pub fn norm(g: &[f64], x: &[f64]) -> f64 {
        inner(g, x, x).max(0.0).sqrt()
    }

    pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(s: f64, a: &[f64]) -> Vec<f64> {
        a.iter().map(|x| s * x).collect()
    }

    /// `Σ c_k v_k` for scalar/vector pairs.
    pub fn combo(terms: &[(f64, &[f64])]) -> Vec<f64> {
        let n = terms.first().map_or(0, |t| t.1.len());
        let mut out = vec![0.0; n];
        for (c, v) in terms {
            for i in 0..n {
                out[i] += c * v[i];
            }
        }
        out
    }
}
