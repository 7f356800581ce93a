//! Dense complex operators on the finite-dimensional system space, and
//! superoperators acting on them.
//!
//! Superoperators use column-stacking vectorization: the map `X ↦ A X B`
//! is stored as the matrix `Bᵀ ⊗ A`. nalgebra storage is column-major, so
//! `vec(X)` is simply the backing slice of `X`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for the structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative truncation tolerance for the Taylor part of [`expm`].
pub const EXPM_TOL: f64 = 1e-17;

pub const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[derive(Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator{}", self.mat)
    }
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::dims("operator must be square", mat.nrows(), mat.ncols()));
        }
        if mat.nrows() == 0 {
            return Err(Error::dims("operator dimension must be positive", 1, 0));
        }
        Ok(Operator { mat })
    }

    pub(crate) fn from_matrix(mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Operator { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { mat: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { mat: DMatrix::identity(dim, dim) }
    }

    /// `value · I`.
    pub fn scalar(dim: usize, value: C64) -> Self {
        Operator {
            mat: DMatrix::from_diagonal_element(dim, dim, value),
        }
    }

    pub fn diag(values: &[C64]) -> Self {
        Operator {
            mat: DMatrix::from_diagonal(&DVector::from_column_slice(values)),
        }
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| c(x)).collect();
        Self::diag(&v)
    }

    /// Build from row-major data.
    pub fn from_rows(dim: usize, rows: &[C64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::dims("operator entries", dim * dim, rows.len()));
        }
        Operator::new(DMatrix::from_row_slice(dim, dim, rows))
    }

    /// `|i⟩⟨j|` in dimension `dim`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] = c(1.0);
        Operator { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Operator { mat: self.mat.adjoint() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Operator { mat: &self.mat * z }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(c(x))
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `(A − A*) / 2i`, exactly Hermitian in floating point.
    pub fn im_part(&self) -> Self {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..d {
                let z = self.mat[(i, j)] - self.mat[(j, i)].conj();
                out[(i, j)] = C64::new(0.5 * z.im, -0.5 * z.re);
            }
        }
        Operator { mat: out }
    }

    /// `(A + A*) / 2`.
    pub fn re_part(&self) -> Self {
        Operator {
            mat: (&self.mat + self.mat.adjoint()) * c(0.5),
        }
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        spectral_norm(&self.mat)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        spectral_norm(&(&self.mat - self.mat.adjoint()))
    }

    pub fn unitarity_residual(&self) -> f64 {
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        let a = spectral_norm(&(&self.mat * self.mat.adjoint() - &id));
        let b = spectral_norm(&(self.mat.adjoint() * &self.mat - &id));
        a.max(b)
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.hermiticity_residual() <= eps
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.unitarity_residual() <= eps
    }

    pub fn is_skew_adjoint(&self, eps: f64) -> bool {
        spectral_norm(&(&self.mat + self.mat.adjoint())) <= eps
    }

    /// Matrix exponential.
    pub fn exp(&self) -> Self {
        Operator { mat: expm(&self.mat, EXPM_TOL) }
    }

    /// Apply a scalar function through the spectral decomposition of a
    /// Hermitian operator: `U f(D) U*`.
    pub fn func_of_hermitian<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(f64) -> C64,
    {
        self.func_of_hermitian_tol(f, DEFAULT_TOL)
    }

    pub fn func_of_hermitian_tol<F>(&self, f: F, eps: f64) -> Result<Self>
    where
        F: Fn(f64) -> C64,
    {
        let residual = self.hermiticity_residual();
        if residual > eps * self.op_norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        // symmetrize so the eigensolver sees an exactly Hermitian input
        let h = (&self.mat + self.mat.adjoint()) * c(0.5);
        let eig = h.symmetric_eigen();
        let fd: Vec<C64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
        let u = &eig.eigenvectors;
        let mut scaled = u.clone();
        for (j, fj) in fd.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= fj;
            }
        }
        Ok(Operator {
            mat: scaled * u.adjoint(),
        })
    }

    /// `⟨v, A v⟩`.
    pub fn expectation(&self, v: &DVector<C64>) -> C64 {
        v.dotc(&(&self.mat * v))
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }

    pub fn kron(&self, other: &Operator) -> Operator {
        Operator {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    pub(crate) fn check_dim(&self, d: usize, context: &'static str) -> Result<()> {
        if self.dim() != d {
            return Err(Error::dims(context, d, self.dim()));
        }
        Ok(())
    }
}

/// `AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    b.check_dim(a.dim(), "commutator")?;
    Ok(Operator {
        mat: &a.mat * &b.mat - &b.mat * &a.mat,
    })
}

pub fn op_norm(a: &Operator) -> f64 {
    a.op_norm()
}

pub fn func_of_hermitian<F: Fn(f64) -> C64>(a: &Operator, f: F) -> Result<Operator> {
    a.func_of_hermitian(f)
}

pub(crate) fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    let sv = m.clone().singular_values();
    sv.iter().cloned().fold(0.0, f64::max)
}

fn norm1(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The input is scaled by `2^-s` until its 1-norm is at most 1/2, the series
/// is summed until the next term falls below `tol` relative to the partial
/// sum, and the result is squared `s` times.
pub fn expm(a: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let n = a.nrows();
    let norm = norm1(a);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let b = a * c(0.5f64.powi(squarings as i32));
    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..64 {
        term = (&term * &b) * c(1.0 / k as f64);
        sum += &term;
        if norm1(&term) <= tol * norm1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Operator> for &Operator {
            type Output = Operator;
            fn $m(self, rhs: &Operator) -> Operator {
                assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
                Operator { mat: &self.mat $op &rhs.mat }
            }
        }
        impl $tr<Operator> for Operator {
            type Output = Operator;
            fn $m(self, rhs: Operator) -> Operator {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Operator> for Operator {
            type Output = Operator;
            fn $m(self, rhs: &Operator) -> Operator {
                (&self).$m(rhs)
            }
        }
        impl $tr<Operator> for &Operator {
            type Output = Operator;
            fn $m(self, rhs: Operator) -> Operator {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, z: C64) -> Operator {
        self.scale(z)
    }
}

impl Mul<C64> for Operator {
    type Output = Operator;
    fn mul(self, z: C64) -> Operator {
        self.scale(z)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, x: f64) -> Operator {
        self.scale_re(x)
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, x: f64) -> Operator {
        self.scale_re(x)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -&self.mat }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -self.mat }
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        self.mat += &rhs.mat;
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.mat[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let dim = rows.len();
        if dim == 0 {
            return Err(serde::de::Error::custom("empty matrix"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(serde::de::Error::custom(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|p| C64::new(p[0], p[1])));
        }
        Ok(Operator {
            mat: DMatrix::from_row_slice(dim, dim, &data),
        })
    }
}

/// Pauli and ladder operators on a qubit. Basis order is `(|e⟩, |g⟩)`, so
/// `σz = diag(1, −1)` and `σ₋ = |g⟩⟨e|`.
pub mod pauli {
    use super::*;

    pub fn sigma_x() -> Operator {
        Operator::from_matrix(DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]))
    }

    pub fn sigma_y() -> Operator {
        Operator::from_matrix(DMatrix::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)]))
    }

    pub fn sigma_z() -> Operator {
        Operator::real_diag(&[1.0, -1.0])
    }

    pub fn sigma_minus() -> Operator {
        Operator::unit(2, 1, 0)
    }

    pub fn sigma_plus() -> Operator {
        Operator::unit(2, 0, 1)
    }

    /// `|e⟩⟨e| = σ₊σ₋`.
    pub fn excited() -> Operator {
        Operator::unit(2, 0, 0)
    }
}

/// Linear map on operators of a fixed dimension, stored as a `d² × d²`
/// matrix acting on column-stacked operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::dims("superoperator matrix", n, matrix.nrows()));
        }
        Ok(Superoperator { dim, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: DMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: DMatrix::identity(dim * dim, dim * dim),
        }
    }

    /// `X ↦ A X B`.
    pub fn sandwich(a: &Operator, b: &Operator) -> Result<Self> {
        b.check_dim(a.dim(), "sandwich superoperator")?;
        Ok(Superoperator {
            dim: a.dim(),
            matrix: b.mat.transpose().kronecker(&a.mat),
        })
    }

    /// `X ↦ A X`.
    pub fn left(a: &Operator) -> Self {
        let id = DMatrix::<C64>::identity(a.dim(), a.dim());
        Superoperator {
            dim: a.dim(),
            matrix: id.kronecker(&a.mat),
        }
    }

    /// `X ↦ X B`.
    pub fn right(b: &Operator) -> Self {
        let id = DMatrix::<C64>::identity(b.dim(), b.dim());
        Superoperator {
            dim: b.dim(),
            matrix: b.mat.transpose().kronecker(&id),
        }
    }

    /// Matrix of an arbitrary linear map, built column by column from its
    /// action on the matrix units.
    pub fn from_fn<F>(dim: usize, f: F) -> Result<Self>
    where
        F: Fn(&Operator) -> Result<Operator>,
    {
        let n = dim * dim;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let img = f(&Operator::unit(dim, i, j))?;
                img.check_dim(dim, "superoperator image")?;
                m.column_mut(j * dim + i)
                    .copy_from_slice(img.mat.as_slice());
            }
        }
        Ok(Superoperator { dim, matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        x.check_dim(self.dim, "superoperator argument")?;
        let v = DVector::from_column_slice(x.mat.as_slice());
        let out = &self.matrix * v;
        Ok(Operator {
            mat: DMatrix::from_column_slice(self.dim, self.dim, out.as_slice()),
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix * z,
        }
    }

    /// `e^{s·G}`.
    pub fn exp(&self, s: f64) -> Self {
        self.exp_with_tol(s, EXPM_TOL)
    }

    pub fn exp_with_tol(&self, s: f64, tol: f64) -> Self {
        assert!(s >= 0.0, "semigroup time must be nonnegative");
        Superoperator {
            dim: self.dim,
            matrix: expm(&(&self.matrix * c(s)), tol),
        }
    }

    pub fn compose(&self, other: &Superoperator) -> Self {
        assert_eq!(self.dim, other.dim);
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Add<&Superoperator> for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim);
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

pub mod superop {
    use super::*;

    /// `e^{s·G}` for `s ≥ 0`.
    pub fn superop_exp(g: &Superoperator, s: f64) -> Superoperator {
        g.exp(s)
    }
}

/// Serde helpers for complex vectors as `[[re, im], ...]`.
pub mod cvec {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|p| C64::new(p[0], p[1])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
        (a - b).op_norm() <= tol
    }

    #[test]
    fn commutator_of_identity_vanishes() {
        let x = Operator::from_rows(2, &[c(1.0), C64::new(2.0, 1.0), c(-3.0), I]).unwrap();
        let z = commutator(&Operator::identity(2), &x).unwrap();
        assert_eq!(z.op_norm(), 0.0);
        assert_eq!(commutator(&x, &x).unwrap().op_norm(), 0.0);
    }

    #[test]
    fn pauli_commutator() {
        let z = commutator(&sigma_x(), &sigma_y()).unwrap();
        assert!(close(&z, &sigma_z().scale(C64::new(0.0, 2.0)), 1e-15));
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = commutator(&Operator::identity(2), &Operator::identity(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn func_of_hermitian_examples() {
        let cos = |x: f64| c(x.cos());
        let one = Operator::zeros(1).func_of_hermitian(cos).unwrap();
        assert!(close(&one, &Operator::identity(1), 1e-15));

        let kappa = 0.7;
        let fz = Operator::real_diag(&[0.5, -0.5]);
        let r = fz.scale_re(kappa).func_of_hermitian(cos).unwrap();
        assert!(close(&r, &Operator::identity(2).scale_re((kappa / 2.0).cos()), 1e-15));

        let d = Operator::real_diag(&[0.3, -1.2]);
        let e = d.func_of_hermitian(|x| c(x.exp())).unwrap();
        assert!(close(&e, &Operator::real_diag(&[0.3f64.exp(), (-1.2f64).exp()]), 1e-14));
    }

    #[test]
    fn func_of_hermitian_rejects_non_hermitian() {
        let err = sigma_plus().func_of_hermitian(c).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn norms() {
        assert_eq!(Operator::zeros(3).op_norm(), 0.0);
        let z = C64::new(-1.5, 2.0);
        assert!((Operator::scalar(3, z).op_norm() - z.norm()).abs() < 1e-14);
        assert!((sigma_minus().op_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn predicates() {
        assert!(sigma_x().is_hermitian(1e-12));
        assert!(sigma_y().is_unitary(1e-12));
        assert!(!sigma_plus().is_hermitian(1e-3));
        assert!(sigma_y().scale(I).is_skew_adjoint(1e-12));
        assert!((sigma_plus().im_part() - sigma_plus().im_part().adjoint()).op_norm() == 0.0);
    }

    #[test]
    fn vectorization_convention() {
        let a = Operator::from_rows(2, &[c(1.0), c(2.0), c(3.0), I]).unwrap();
        let b = Operator::from_rows(2, &[c(0.0), C64::new(1.0, 1.0), c(-1.0), c(2.0)]).unwrap();
        let x = Operator::from_rows(2, &[c(0.5), c(-1.0), I, c(4.0)]).unwrap();
        let s = Superoperator::sandwich(&a, &b).unwrap();
        let direct = &(&a * &x) * &b;
        assert!(close(&s.apply(&x).unwrap(), &direct, 1e-13));
        let via_fn = Superoperator::from_fn(2, |y| Ok(&(&a * y) * &b)).unwrap();
        assert!(via_fn.max_abs_diff(&s) < 1e-14);
        assert!(close(&Superoperator::left(&a).apply(&x).unwrap(), &(&a * &x), 1e-14));
        assert!(close(&Superoperator::right(&b).apply(&x).unwrap(), &(&x * &b), 1e-14));
    }

    #[test]
    fn superop_exp_trivial_cases() {
        let g = Superoperator::sandwich(&sigma_x(), &sigma_z()).unwrap();
        assert!(g.exp(0.0).max_abs_diff(&Superoperator::identity(2)) == 0.0);
        assert!(Superoperator::zero(3).exp(5.0).max_abs_diff(&Superoperator::identity(3)) == 0.0);
    }

    #[test]
    fn superop_exp_amplitude_damping() {
        // X ↦ σ₊Xσ₋ − ½{σ₊σ₋, X}
        let sm = sigma_minus();
        let sp = sigma_plus();
        let n = &sp * &sm;
        let g = &(&Superoperator::sandwich(&sp, &sm).unwrap()
            + &Superoperator::left(&n.scale_re(-0.5)))
            + &Superoperator::right(&n.scale_re(-0.5));
        let out = g.exp(1.0).apply(&excited()).unwrap();
        assert!(close(&out, &excited().scale_re((-1.0f64).exp()), 1e-14));
    }

    #[test]
    fn expm_large_norm_scalar() {
        let a = DMatrix::from_element(1, 1, C64::new(-30.0, 7.0));
        let e = expm(&a, EXPM_TOL);
        let exact = C64::new(-30.0, 7.0).exp();
        assert!((e[(0, 0)] - exact).norm() <= 1e-13 * exact.norm());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = Operator::from_rows(2, &[c(1.0), C64::new(0.0, -2.5), c(3.0), c(0.0)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[[1.0,0.0],[0.0,-2.5]],[[3.0,0.0],[0.0,0.0]]]");
        let back: Operator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Operator>("[[[1,0],[0,0]],[[1,0]]]").is_err());
        assert!(serde_json::from_str::<Operator>("[]").is_err());
    }
}
