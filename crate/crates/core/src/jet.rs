//! Order-2 forward-mode automatic differentiation.
//!
//! A [`Jet2`] carries the value, gradient and Hessian of a scalar with respect
//! to up to [`MAX_VARS`] seeded coordinates. The Hessian is stored as a packed
//! triangle, so it is symmetric by construction.
//!
//! Jets also track how many orders of derivative are still trustworthy. Taking
//! a partial derivative of a jet consumes one order: the result knows its own
//! value and gradient, but its Hessian would need third derivatives of the
//! inputs and is discarded. Quantities built from first derivatives of the
//! metric (Christoffel symbols, Lee forms) therefore come out as order-1 jets,
//! which is exactly what is needed to take one more exterior derivative.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

/// Maximum number of seeded coordinates a jet can carry.
pub const MAX_VARS: usize = 9;
const HESS_LEN: usize = MAX_VARS * (MAX_VARS + 1) / 2;

/// Relative pivot threshold used by [`JetMatrix::solve`].
pub const PIVOT_TOL: f64 = 1e-12;
/// Relative norm-collapse threshold used by [`gram_schmidt`].
pub const DEPENDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("singular matrix: pivot {pivot:e} below tolerance at column {column}")]
    Singular { column: usize, pivot: f64 },
    #[error("linearly dependent vectors: norm of vector {index} collapsed to {norm:e}")]
    Dependent { index: usize, norm: f64 },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("too many seeded variables: {0} (maximum {MAX_VARS})")]
    TooManyVars(usize),
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    b * (b + 1) / 2 + a
}

/// Value, gradient and Hessian of a scalar at a point.
#[derive(Clone, Copy)]
pub struct Jet2 {
    nvars: u8,
    order: u8,
    value: f64,
    grad: [f64; MAX_VARS],
    hess: [f64; HESS_LEN],
}

impl PartialEq for Jet2 {
    fn eq(&self, other: &Self) -> bool {
        let n = self.nvars.max(other.nvars) as usize;
        self.value == other.value
            && self.grad[..n] == other.grad[..n]
            && self.hess[..n * (n + 1) / 2] == other.hess[..n * (n + 1) / 2]
    }
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars as usize;
        f.debug_struct("Jet2")
            .field("value", &self.value)
            .field("grad", &&self.grad[..n])
            .field("hess", &self.hessian())
            .field("order", &self.order)
            .finish()
    }
}

impl Default for Jet2 {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Jet2 {
    pub const fn constant(value: f64) -> Self {
        Self {
            nvars: 0,
            order: 2,
            value,
            grad: [0.0; MAX_VARS],
            hess: [0.0; HESS_LEN],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Coordinate `index` of `nvars` seeded coordinates, at `value`.
    pub fn variable(value: f64, index: usize, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} seeded variables");
        assert!(index < nvars, "variable index {index} out of range {nvars}");
        let mut j = Self::constant(value);
        j.nvars = nvars as u8;
        j.grad[index] = 1.0;
        j
    }

    /// Builds a jet from explicit parts. Only the upper triangle of `hess` is read.
    pub fn from_parts(value: f64, grad: &[f64], hess: &[Vec<f64>]) -> Self {
        let n = grad.len();
        assert!(n <= MAX_VARS);
        let mut j = Self::constant(value);
        j.nvars = n as u8;
        j.grad[..n].copy_from_slice(grad);
        for b in 0..n {
            for a in 0..=b {
                j.hess[tri(a, b)] = hess[a][b];
            }
        }
        j
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    /// Number of trustworthy derivative orders (0, 1 or 2).
    #[inline]
    pub fn order(&self) -> u8 {
        self.order
    }

    #[inline]
    pub fn grad(&self, i: usize) -> f64 {
        if i < MAX_VARS {
            self.grad[i]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        if i < MAX_VARS && j < MAX_VARS {
            self.hess[tri(i, j)]
        } else {
            0.0
        }
    }

    pub fn gradient(&self) -> Vec<f64> {
        self.grad[..self.nvars()].to_vec()
    }

    pub fn hessian(&self) -> Vec<Vec<f64>> {
        let n = self.nvars();
        (0..n).map(|i| (0..n).map(|j| self.hess(i, j)).collect()).collect()
    }

    pub fn is_constant(&self) -> bool {
        let n = self.nvars();
        self.grad[..n].iter().all(|&g| g == 0.0) && self.hess[..n * (n + 1) / 2].iter().all(|&h| h == 0.0)
    }

    /// Drops derivative information down to `order`.
    pub fn truncate(mut self, order: u8) -> Self {
        if order < 2 {
            self.hess = [0.0; HESS_LEN];
        }
        if order < 1 {
            self.grad = [0.0; MAX_VARS];
        }
        self.order = self.order.min(order);
        self
    }

    /// Partial derivative along seeded coordinate `i`; consumes one order.
    pub fn partial(&self, i: usize) -> Jet2 {
        debug_assert!(self.order >= 1, "partial derivative of an order-0 jet");
        let n = self.nvars();
        let mut out = Jet2::constant(self.grad(i));
        out.nvars = self.nvars;
        for k in 0..n {
            out.grad[k] = self.hess(i, k);
        }
        out.order = self.order.saturating_sub(1);
        out.truncate(out.order)
    }

    /// Directional derivative `Σ dir[i] ∂_i`; consumes one order.
    pub fn directional(&self, dir: &[f64]) -> Jet2 {
        let mut acc = Jet2::zero();
        for (i, &d) in dir.iter().enumerate() {
            if d != 0.0 {
                acc += self.partial(i) * d;
            }
        }
        acc.order = self.order.saturating_sub(1);
        acc.truncate(acc.order)
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.nvars();
        let mut out = *self;
        out.value = f0;
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for b in 0..n {
            for a in 0..=b {
                let k = tri(a, b);
                out.hess[k] = f1 * self.hess[k] + f2 * self.grad[a] * self.grad[b];
            }
        }
        out
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn try_ln(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if !(x > 0.0) {
            return Err(JetError::Domain("logarithm of a non-positive value"));
        }
        Ok(self.chain(x.ln(), 1.0 / x, -1.0 / (x * x)))
    }

    pub fn try_sqrt(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if !(x > 0.0) {
            return Err(JetError::Domain("square root of a non-positive value"));
        }
        let s = x.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * x)))
    }

    pub fn try_recip(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if x == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        Ok(self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)))
    }

    pub fn checked_div(&self, rhs: &Jet2) -> Result<Jet2, JetError> {
        Ok(*self * rhs.try_recip()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, n: i32) -> Result<Jet2, JetError> {
        let x = self.value;
        if n < 0 && x == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let nf = n as f64;
        let f0 = x.powi(n);
        let f1 = if n == 0 { 0.0 } else { nf * x.powi(n - 1) };
        let f2 = if n == 0 || n == 1 {
            0.0
        } else {
            nf * (nf - 1.0) * x.powi(n - 2)
        };
        Ok(self.chain(f0, f1, f2))
    }

    fn widen(&self, other: &Jet2) -> u8 {
        debug_assert!(
            self.nvars == other.nvars || self.nvars == 0 || other.nvars == 0,
            "mixing jets seeded on {} and {} variables",
            self.nvars,
            other.nvars
        );
        self.nvars.max(other.nvars)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let nv = self.widen(&rhs);
        let n = nv as usize;
        let mut out = self;
        out.nvars = nv;
        out.order = self.order.min(rhs.order);
        out.value += rhs.value;
        for i in 0..n {
            out.grad[i] += rhs.grad[i];
        }
        for k in 0..n * (n + 1) / 2 {
            out.hess[k] += rhs.hess[k];
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(mut self) -> Jet2 {
        let n = self.nvars();
        self.value = -self.value;
        for g in &mut self.grad[..n] {
            *g = -*g;
        }
        for h in &mut self.hess[..n * (n + 1) / 2] {
            *h = -*h;
        }
        self
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let nv = self.widen(&rhs);
        let n = nv as usize;
        let (a, b) = (self.value, rhs.value);
        let mut out = Jet2::constant(a * b);
        out.nvars = nv;
        out.order = self.order.min(rhs.order);
        for i in 0..n {
            out.grad[i] = a * rhs.grad[i] + b * self.grad[i];
        }
        if out.order >= 2 {
            for q in 0..n {
                for p in 0..=q {
                    let k = tri(p, q);
                    out.hess[k] =
                        a * rhs.hess[k] + b * self.hess[k] + self.grad[p] * rhs.grad[q] + self.grad[q] * rhs.grad[p];
                }
            }
        }
        out
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.value += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.value -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(mut self, rhs: f64) -> Jet2 {
        let n = self.nvars();
        self.value *= rhs;
        for g in &mut self.grad[..n] {
            *g *= rhs;
        }
        for h in &mut self.hess[..n * (n + 1) / 2] {
            *h *= rhs;
        }
        self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs * self
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for Jet2 {
    fn mul_assign(&mut self, rhs: f64) {
        *self = *self * rhs;
    }
}

impl Sum for Jet2 {
    fn sum<I: Iterator<Item = Jet2>>(iter: I) -> Jet2 {
        iter.fold(Jet2::zero(), |a, b| a + b)
    }
}

/// Binary jet operation selector used by [`jet_binary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Unary jet operation selector used by [`jet_unary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

pub fn jet_binary(op: BinaryOp, a: Jet2, b: Jet2) -> Result<Jet2, JetError> {
    Ok(match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => a.checked_div(&b)?,
    })
}

pub fn jet_unary(op: UnaryOp, a: Jet2) -> Result<Jet2, JetError> {
    Ok(match op {
        UnaryOp::Neg => -a,
        UnaryOp::Exp => a.exp(),
        UnaryOp::Log => a.try_ln()?,
        UnaryOp::Sin => a.sin(),
        UnaryOp::Cos => a.cos(),
        UnaryOp::Sqrt => a.try_sqrt()?,
    })
}

/// Dense row-major matrix of jets.
#[derive(Clone, Debug, PartialEq)]
pub struct JetMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Jet2>,
}

impl JetMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Jet2::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Jet2::constant(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Jet2) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_values(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            rows,
            cols,
            data: values.iter().map(|&v| Jet2::constant(v)).collect(),
        }
    }

    /// Builds an `n × 1` column from jets.
    pub fn column(entries: &[Jet2]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn values(&self) -> Vec<f64> {
        self.data.iter().map(Jet2::value).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Jet2> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &JetMatrix) -> Result<JetMatrix, JetError> {
        if self.cols != rhs.rows {
            return Err(JetError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[Jet2]) -> Vec<Jet2> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// Bilinear form `uᵀ M w`.
    pub fn inner(&self, u: &[Jet2], w: &[Jet2]) -> Jet2 {
        let mut acc = Jet2::zero();
        for i in 0..self.rows {
            if u[i].value() == 0.0 && u[i].is_constant() {
                continue;
            }
            let row: Jet2 = (0..self.cols).map(|j| self[(i, j)] * w[j]).sum();
            acc += u[i] * row;
        }
        acc
    }

    pub fn max_abs_value(&self) -> f64 {
        self.data.iter().fold(0.0, |m, j| m.max(j.value().abs()))
    }

    /// Solves `self · X = rhs` in jet arithmetic.
    ///
    /// Gaussian elimination with partial pivoting; pivots are chosen from the
    /// value parts only, so the solve is smooth wherever the pivot pattern is
    /// locally stable.
    pub fn solve(&self, rhs: &JetMatrix) -> Result<JetMatrix, JetError> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(JetError::Shape(format!(
                "solve {}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut scale: Vec<f64> = (0..n)
            .map(|i| (0..n).fold(0.0f64, |s, j| s.max(a[(i, j)].value().abs())))
            .collect();

        for col in 0..n {
            let (piv, _) = (col..n)
                .map(|r| (r, a[(r, col)].value().abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let pv = a[(piv, col)].value().abs();
            if scale[piv] == 0.0 || pv < PIVOT_TOL * scale[piv] {
                return Err(JetError::Singular { column: col, pivot: pv });
            }
            if piv != col {
                a.swap_rows(piv, col);
                b.swap_rows(piv, col);
                scale.swap(piv, col);
            }
            let inv = a[(col, col)].try_recip()?;
            for r in col + 1..n {
                let factor = a[(r, col)] * inv;
                if factor.value() == 0.0 && factor.is_constant() {
                    continue;
                }
                for c in col..n {
                    let t = a[(col, c)];
                    a[(r, c)] -= factor * t;
                }
                for c in 0..m {
                    let t = b[(col, c)];
                    b[(r, c)] -= factor * t;
                }
            }
        }

        let mut x = JetMatrix::zeros(n, m);
        for c in 0..m {
            for r in (0..n).rev() {
                let mut acc = b[(r, c)];
                for k in r + 1..n {
                    acc -= a[(r, k)] * x[(k, c)];
                }
                x[(r, c)] = acc.checked_div(&a[(r, r)])?;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<JetMatrix, JetError> {
        self.solve(&JetMatrix::identity(self.rows))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for JetMatrix {
    type Output = Jet2;
    fn index(&self, (i, j): (usize, usize)) -> &Jet2 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for JetMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Jet2 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `a · X = b`; see [`JetMatrix::solve`].
pub fn jet_solve_linear(a: &JetMatrix, b: &JetMatrix) -> Result<JetMatrix, JetError> {
    a.solve(b)
}

/// Modified Gram–Schmidt in jet arithmetic with respect to `metric`.
///
/// The outputs are smooth functions of the inputs, so they can be
/// differentiated as frame fields.
pub fn gram_schmidt(vectors: &[Vec<Jet2>], metric: &JetMatrix) -> Result<Vec<Vec<Jet2>>, JetError> {
    let n = metric.rows();
    let mut out: Vec<Vec<Jet2>> = Vec::with_capacity(vectors.len());
    for (idx, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(JetError::Shape(format!(
                "vector of length {} in dimension {n}",
                v.len()
            )));
        }
        let original = metric.inner(v, v).value().max(0.0).sqrt();
        let mut w = v.clone();
        for e in &out {
            let c = metric.inner(&w, e);
            for k in 0..n {
                w[k] -= c * e[k];
            }
        }
        let norm2 = metric.inner(&w, &w);
        let norm = norm2.value().max(0.0).sqrt();
        if original == 0.0 || norm < DEPENDENCE_TOL * original {
            return Err(JetError::Dependent { index: idx, norm });
        }
        let inv = norm2.try_sqrt()?.try_recip()?;
        out.push(w.into_iter().map(|x| x * inv).collect());
    }
    Ok(out)
}

/// Alias matching the frame-construction operation name.
pub fn jet_gram_schmidt(vectors: &[Vec<Jet2>], metric: &JetMatrix) -> Result<Vec<Vec<Jet2>>, JetError> {
    gram_schmidt(vectors, metric)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> Jet2 {
        Jet2::variable(v, 0, 1)
    }

    #[test]
    fn square_of_variable() {
        let j = x(2.0) * x(2.0);
        assert_eq!(j.value(), 4.0);
        assert_eq!(j.grad(0), 4.0);
        assert_eq!(j.hess(0, 0), 2.0);
    }

    #[test]
    fn constant_sum_has_no_derivatives() {
        let j = Jet2::constant(5.0) + Jet2::constant(7.0);
        assert_eq!(j.value(), 12.0);
        assert!(j.is_constant());
    }

    #[test]
    fn division_by_zero_constant() {
        assert_eq!(
            jet_binary(BinaryOp::Div, x(1.0), Jet2::constant(0.0)),
            Err(JetError::DivisionByZero)
        );
    }

    #[test]
    fn exp_at_zero() {
        let j = jet_unary(UnaryOp::Exp, x(0.0)).unwrap();
        assert_eq!((j.value(), j.grad(0), j.hess(0, 0)), (1.0, 1.0, 1.0));
    }

    #[test]
    fn sqrt_at_four_matches_analytic() {
        // d/dx sqrt x = x^{-1/2}/2, d2/dx2 = -x^{-3/2}/4
        let j = jet_unary(UnaryOp::Sqrt, x(4.0)).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.grad(0), 0.5 * 4f64.powf(-0.5));
        assert_eq!(j.hess(0, 0), -0.25 * 4f64.powf(-1.5));
        assert_eq!(j.grad(0), 0.25);
        assert_eq!(j.hess(0, 0), -1.0 / 32.0);
    }

    #[test]
    fn log_of_zero_is_domain_error() {
        assert!(matches!(jet_unary(UnaryOp::Log, x(0.0)), Err(JetError::Domain(_))));
    }

    #[test]
    fn partial_consumes_an_order() {
        let a = Jet2::variable(1.5, 0, 2);
        let b = Jet2::variable(-0.5, 1, 2);
        let f = a * a * b; // x^2 y
        let fx = f.partial(0); // 2xy
        assert_eq!(fx.order(), 1);
        assert_eq!(fx.value(), 2.0 * 1.5 * -0.5);
        assert_eq!(fx.grad(0), 2.0 * -0.5);
        assert_eq!(fx.grad(1), 2.0 * 1.5);
        assert_eq!(fx.hess(0, 1), 0.0);
        let fxy = fx.partial(1);
        assert_eq!(fxy.order(), 0);
        assert_eq!(fxy.value(), 3.0);
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = JetMatrix::identity(3);
        let b = JetMatrix::from_fn(3, 2, |i, j| Jet2::variable((i + 2 * j) as f64, i, 3) * 2.0);
        let x = a.solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn exponential_diagonal_solve() {
        // A = e^{2u} at u = 0; X = e^{-2u}, dX/du = -2
        let u = Jet2::variable(0.0, 0, 1);
        let a = JetMatrix::from_fn(1, 1, |_, _| (u * 2.0).exp());
        let x = a.solve(&JetMatrix::identity(1)).unwrap();
        assert!((x[(0, 0)].value() - 1.0).abs() < 1e-15);
        assert!((x[(0, 0)].grad(0) + 2.0).abs() < 1e-15);
        assert!((x[(0, 0)].hess(0, 0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn singular_solve_is_rejected() {
        let a = JetMatrix::from_values(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            a.solve(&JetMatrix::identity(2)),
            Err(JetError::Singular { .. })
        ));
    }

    #[test]
    fn gram_schmidt_euclidean_basis_is_fixed() {
        let g = JetMatrix::identity(3);
        let basis: Vec<Vec<Jet2>> = (0..3)
            .map(|i| (0..3).map(|k| Jet2::constant(if i == k { 1.0 } else { 0.0 })).collect())
            .collect();
        let out = gram_schmidt(&basis, &g).unwrap();
        assert_eq!(out, basis);
    }

    #[test]
    fn gram_schmidt_warped_plane() {
        // g = diag(1, e^{2u}) at u = 0: second vector e^{-u} ∂v, d/du of its v-component = -1
        let u = Jet2::variable(0.0, 0, 2);
        let g = JetMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Jet2::constant(1.0),
            (1, 1) => (u * 2.0).exp(),
            _ => Jet2::zero(),
        });
        let basis = vec![
            vec![Jet2::constant(1.0), Jet2::zero()],
            vec![Jet2::zero(), Jet2::constant(1.0)],
        ];
        let out = gram_schmidt(&basis, &g).unwrap();
        assert_eq!(out[0][0].value(), 1.0);
        assert!((out[1][1].value() - 1.0).abs() < 1e-15);
        assert!((out[1][1].grad(0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_rejects_dependent_inputs() {
        let g = JetMatrix::identity(2);
        let du = vec![Jet2::constant(1.0), Jet2::zero()];
        assert!(matches!(
            gram_schmidt(&[du.clone(), du], &g),
            Err(JetError::Dependent { index: 1, .. })
        ));
    }
}
