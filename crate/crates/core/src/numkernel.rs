//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything here works on [`ComplexMatrix`], a row-major `d x d` (or
//! rectangular) matrix of `Complex64`. The eigensolver is a cyclic complex
//! Jacobi method: quadratically convergent, unconditionally stable, and more
//! than fast enough for the `d <= 20` problems this crate deals with.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count does not match {rows}x{cols}"
        );
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = v;
        }
        m
    }

    /// `|u><v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
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

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * other[(k, r)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest elementwise |self - other|; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest elementwise |A - A†|; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// `[self, other] = self*other - other*self`
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let deviation = self.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Spectral decomposition `A = V diag(eigenvalues) V†`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| v[(r, k)] * fl[k] * v[(c, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is rephased so that its
/// first component of modulus above [`tol::PHASE_PIVOT`] is real and
/// positive, which makes the output deterministic for non-degenerate input.
/// Nearly equal eigenvalues are reported as-is.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenSystem> {
    a.check_hermitian()?;
    let n = a.rows;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = m.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_JACOBI_SWEEPS {
            if off_diagonal_norm(&m) <= f64::EPSILON * 1e-2 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));

    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|r| v[(r, src)])
            .find(|z| z.norm() > tol::PHASE_PIVOT)
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)] * phase;
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += m[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One two-sided unitary rotation `m <- R† m R`, `v <- v R`, zeroing `m[p,q]`.
///
/// `R = diag(1, e^{-i arg m_pq}) * [[c, s], [-s, c]]` on the `(p, q)` plane:
/// the phase makes the pivot real, the real rotation then annihilates it.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / mag).conj();

    let r_pp = Complex64::new(c, 0.0);
    let r_pq = Complex64::new(s, 0.0);
    let r_qp = phase * -s;
    let r_qq = phase * c;

    let n = m.rows;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * r_pp + mkq * r_qp;
        m[(k, q)] = mkp * r_pq + mkq * r_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = r_pp.conj() * mpk + r_qp.conj() * mqk;
        m[(q, k)] = r_pq.conj() * mpk + r_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
}

/// `exp(-i t G)` for Hermitian `G`, via its spectral decomposition.
pub fn expm_skew_hermitian(g: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let es = eig_hermitian(g)?;
    Ok(es.map_spectrum(|l| Complex64::from_polar(1.0, -t * l)))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out `subsystem` from an operator on `C^{d_A} ⊗ C^{d_B}`.
pub fn partial_trace(
    m: &ComplexMatrix,
    subsystem: Subsystem,
    (d_a, d_b): (usize, usize),
) -> Result<ComplexMatrix> {
    let side = d_a * d_b;
    if m.rows != side || m.cols != side {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: side,
            found: if m.rows != side { m.rows } else { m.cols },
        });
    }
    let out = match subsystem {
        Subsystem::B => ComplexMatrix::from_fn(d_a, d_a, |i, j| {
            (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(d_b, d_b, |k, l| {
            (0..d_a).map(|i| m[(i * d_b + k, i * d_b + l)]).sum()
        }),
    };
    Ok(out)
}
