//! Dense matrices over exact rationals or `f64`.
//!
//! Elimination picks the first nonzero pivot in exact mode and the largest
//! pivot (partial pivoting) in float mode.

use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type Gaussian = Complex<Rational>;

/// Relative threshold under which a float pivot counts as zero.
pub const FLOAT_PIVOT_EPS: f64 = 1e-12;

/// Scalars the geometric routines are generic over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    fn from_i64(v: i64) -> Self;
    /// Display used in reports: exact text for rationals.
    fn render(&self) -> String;
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn render(&self) -> String {
        format!("{:.16e}", self)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // huge numerator/denominator: scale both down by the same power of two
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Is the value zero for elimination purposes relative to `scale`?
fn negligible<T: Scalar>(v: &T, scale: f64) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        v.abs_f64() <= FLOAT_PIVOT_EPS * scale.max(1.0)
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
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

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for c in 0..self.cols {
                    acc = acc + self[(r, c)].clone() * v[c].clone();
                }
                acc
            })
            .collect()
    }

    /// `uᵀ M v`
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        let mv = self.mul_vec(v);
        u.iter()
            .zip(mv)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..=i).all(|j| self[(i, j)].clone() + self[(j, i)].clone() == T::zero())
            })
    }

    /// Row-echelon form; returns the pivot columns and the sign of the
    /// row permutation.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let scale = self.max_abs();
        let mut pivots = Vec::new();
        let mut flipped = false;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pick = if T::EXACT {
                (row..self.rows).find(|&r| !self[(r, col)].is_zero())
            } else {
                (row..self.rows)
                    .filter(|&r| !negligible(&self[(r, col)], scale))
                    .max_by(|&a, &b| {
                        self[(a, col)]
                            .abs_f64()
                            .partial_cmp(&self[(b, col)].abs_f64())
                            .unwrap()
                    })
            };
            let Some(p) = pick else { continue };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
                flipped = !flipped;
            }
            let piv = self[(row, col)].clone();
            for r in row + 1..self.rows {
                if self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone() / piv.clone();
                for c in col..self.cols {
                    let v = self[(r, c)].clone() - factor.clone() * self[(row, c)].clone();
                    self[(r, c)] = v;
                }
                if !T::EXACT {
                    self[(r, col)] = T::zero();
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, flipped)
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let (pivots, flipped) = m.echelon();
        if pivots.len() < self.rows {
            return T::zero();
        }
        let mut d = T::one();
        for i in 0..self.rows {
            d = d * m[(i, i)].clone();
        }
        if flipped {
            -d
        } else {
            d
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().0.len()
    }

    /// Reduced row-echelon form with pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let (pivots, _) = m.echelon();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let piv = m[(i, pc)].clone();
            for c in 0..m.cols {
                let v = m[(i, c)].clone() / piv.clone();
                m[(i, c)] = v;
            }
            for r in 0..i {
                if m[(r, pc)].is_zero() {
                    continue;
                }
                let factor = m[(r, pc)].clone();
                for c in 0..m.cols {
                    let v = m[(r, c)].clone() - factor.clone() * m[(i, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        (m, pivots)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); self.cols];
                v[fc] = T::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(i, fc)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                T::one()
            } else {
                T::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + rhs[(r, c)].clone()
        })
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - rhs[(r, c)].clone()
        })
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

/// Max-abs of a vector, for reporting residuals.
pub fn vec_max_abs<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
}

pub fn rational_abs(q: &Rational) -> Rational {
    q.abs()
}
