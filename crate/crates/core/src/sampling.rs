//! Seeded sampling, residuals and three-valued verdicts shared by the
//! classifier and the identity verifier.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::manifold::PointSample;
use crate::riemann::contract;

/// Vectors drawn per tuple; identities use a prefix of them.
pub const TUPLE_WIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub points: usize,
    pub vectors: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            points: 32,
            vectors: 8,
            seed: 42,
            tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    /// `holds` below `tol`, `fails` above `100·tol`, otherwise inconclusive.
    pub fn from_residual(max_residual: f64, tol: f64) -> Self {
        if max_residual < tol {
            Verdict::Holds
        } else if max_residual > 100.0 * tol {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

/// Worst sample of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point_index: usize,
    pub point: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    #[serde(with = "residual_serde")]
    pub residual: f64,
}

/// `|l − r| / (1 + |l| + |r|)`.
pub fn scalar_residual(l: f64, r: f64) -> f64 {
    let v = (l - r).abs() / (1.0 + l.abs() + r.abs());
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// `‖l − r‖_g / (1 + ‖l‖_g + ‖r‖_g)`.
pub fn vector_residual(g: &[f64], l: &[f64], r: &[f64]) -> f64 {
    let d = contract::sub(l, r);
    let v = contract::norm(g, &d) / (1.0 + contract::norm(g, l) + contract::norm(g, r));
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Draws `count` tuples of [`TUPLE_WIDTH`] vectors with uniform `[-1, 1]`
/// coefficients in `frame` (value-level orthonormal frame, one vector per row).
pub fn draw_tuples(p: &PointSample, frame: &[Vec<f64>], count: usize) -> Vec<Vec<Vec<f64>>> {
    draw_tuples_from(&mut p.rng(), frame, count)
}

/// As [`draw_tuples`], from an explicit generator.
pub fn draw_tuples_from(rng: &mut impl Rng, frame: &[Vec<f64>], count: usize) -> Vec<Vec<Vec<f64>>> {
    let n = frame.first().map_or(0, Vec::len);
    (0..count)
        .map(|_| {
            (0..TUPLE_WIDTH)
                .map(|_| {
                    let mut v = vec![0.0; n];
                    for e in frame {
                        let c: f64 = rng.random_range(-1.0..=1.0);
                        for i in 0..n {
                            v[i] += c * e[i];
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Running maximum with lowest-index tie breaking.
#[derive(Debug, Clone, Default)]
pub struct MaxTracker {
    pub max: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
}

impl MaxTracker {
    pub fn observe(&mut self, residual: f64, point: &PointSample, vectors: &[Vec<f64>]) {
        self.samples += 1;
        if self.witness.is_none() || residual > self.max {
            self.max = residual;
            self.witness = Some(Witness {
                point_index: point.index,
                point: point.point.clone(),
                vectors: vectors.to_vec(),
                residual,
            });
        }
    }

    pub fn merge(&mut self, other: MaxTracker) {
        self.samples += other.samples;
        if let Some(w) = other.witness {
            let replace = match &self.witness {
                None => true,
                Some(cur) => w.residual > cur.residual,
            };
            if replace {
                self.max = w.residual;
                self.witness = Some(w);
            }
        }
    }
}

/// Computes per-point data in parallel, preserving point order.
pub fn par_points<D: Send, E: Send>(
    points: &[PointSample],
    f: impl Fn(&PointSample) -> Result<D, E> + Sync,
) -> Result<Vec<D>, E> {
    points.par_iter().map(&f).collect::<Vec<_>>().into_iter().collect()
}

/// JSON has no infinities; non-finite residuals travel as `"inf"` or `"nan"`.
pub mod residual_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else if x.is_nan() {
            Repr::Text("nan".into())
        } else if x > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!(
                    "expected a number, \"inf\" or \"nan\", got \"{other}\""
                ))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            x.map(to_repr).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
        }
    }
}

/// Extra named scalars attached to a report.
pub type Extras = BTreeMap<String, f64>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::from_residual(0.5e-7, 1e-7), Verdict::Holds);
        assert_eq!(Verdict::from_residual(1e-7, 1e-7), Verdict::Inconclusive);
        assert_eq!(Verdict::from_residual(0.99e-5, 1e-7), Verdict::Inconclusive);
        assert_eq!(Verdict::from_residual(1.01e-5, 1e-7), Verdict::Fails);
    }

    #[test]
    fn ties_keep_lowest_index() {
        let p0 = PointSample::at(vec![0.0]);
        let mut p1 = PointSample::at(vec![1.0]);
        p1.index = 1;
        let mut a = MaxTracker::default();
        a.observe(0.5, &p0, &[]);
        let mut b = MaxTracker::default();
        b.observe(0.5, &p1, &[]);
        a.merge(b);
        assert_eq!(a.witness.unwrap().point_index, 0);
        assert_eq!(a.samples, 2);
    }

    #[test]
    fn nan_residual_is_infinite() {
        assert_eq!(scalar_residual(f64::NAN, 0.0), f64::INFINITY);
    }
}
