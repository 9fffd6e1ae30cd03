//! Canonical linear symplectic and contact structures.
//!
//! Vectors of `R^{2n}` are split as `(x1, x2)` with `n` entries each, and
//! `w(u, v) = u1.v2 - u2.v1`. Vectors of `R^{4n}` are `(x, y)` with
//! `x, y in R^{2n}`. Form matrices are generated from wedge lists so the
//! sign conventions live in exactly one place.

use num_traits::{One, Zero};

use crate::error::{IasError, Result};
use crate::linalg::{Gaussian, Matrix, Rational, Scalar};
use crate::poly::QPoly;

/// A constant non-degenerate 2-form on `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct SympForm {
    pub dim: usize,
    pub matrix: Matrix<Rational>,
}

impl SympForm {
    /// Build `sum sign * de_i ^ de_j` and check it is symplectic.
    pub fn from_wedges(dim: usize, wedges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut m = Matrix::<Rational>::zeros(dim, dim);
        for &(i, j, s) in wedges {
            let s = Rational::from_i64(s);
            m[(i, j)] = m[(i, j)].clone() + s.clone();
            m[(j, i)] = m[(j, i)].clone() - s;
        }
        if !m.is_antisymmetric() {
            return Err(IasError::InvalidParameter("form matrix is not antisymmetric".into()));
        }
        if m.det().is_zero() {
            return Err(IasError::InvalidParameter("form is degenerate".into()));
        }
        Ok(SympForm { dim, matrix: m })
    }

    pub fn eval<T: Scalar>(&self, u: &[T], v: &[T]) -> Result<T> {
        eval_form(self, u, v)
    }
}

/// `w = sum dx_i ^ dx_{i+n}` on `R^{2n}`.
pub fn omega(n: usize) -> SympForm {
    let w: Vec<_> = (0..n).map(|i| (i, i + n, 1)).collect();
    SympForm::from_wedges(2 * n, &w).expect("canonical form")
}

fn xi(i: usize) -> usize {
    i
}

fn yi(n: usize, i: usize) -> usize {
    2 * n + i
}

/// `Omega = sum dx_i ^ dy_{i+n} + dy_i ^ dx_{i+n}` on `R^{4n}`.
pub fn big_omega(n: usize) -> SympForm {
    let mut w = Vec::new();
    for i in 0..n {
        w.push((xi(i), yi(n, i + n), 1));
        w.push((yi(n, i), xi(i + n), 1));
    }
    SympForm::from_wedges(4 * n, &w).expect("canonical form")
}

/// `Omega_1 = sum dx_i ^ dx_{i+n} + dy_i ^ dy_{i+n}`.
pub fn omega1(n: usize) -> SympForm {
    let mut w = Vec::new();
    for i in 0..n {
        w.push((xi(i), xi(i + n), 1));
        w.push((yi(n, i), yi(n, i + n), 1));
    }
    SympForm::from_wedges(4 * n, &w).expect("canonical form")
}

/// `Omega_2 = sum dx_i ^ dx_{i+n} - dy_i ^ dy_{i+n}`.
pub fn omega2(n: usize) -> SympForm {
    let mut w = Vec::new();
    for i in 0..n {
        w.push((xi(i), xi(i + n), 1));
        w.push((yi(n, i), yi(n, i + n), -1));
    }
    SympForm::from_wedges(4 * n, &w).expect("canonical form")
}

/// `w_+ - w_-` on `V x V` with coordinates `(x_+, x_-)`.
pub fn difference_form(n: usize) -> SympForm {
    let mut w = Vec::new();
    for i in 0..n {
        w.push((i, i + n, 1));
        w.push((2 * n + i, 2 * n + i + n, -1));
    }
    SympForm::from_wedges(4 * n, &w).expect("canonical form")
}

pub fn eval_form<T: Scalar>(form: &SympForm, u: &[T], v: &[T]) -> Result<T> {
    for len in [u.len(), v.len()] {
        if len != form.dim {
            return Err(IasError::DimensionMismatch {
                expected: form.dim,
                got: len,
            });
        }
    }
    Ok(form.matrix.map(T::from_rational).bilinear(u, v))
}

/// `w(u, v)` on `R^{2n}` without building the matrix.
pub fn omega_eval<T: Scalar>(u: &[T], v: &[T]) -> T {
    assert_eq!(u.len(), v.len());
    assert_eq!(u.len() % 2, 0);
    let n = u.len() / 2;
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + u[i].clone() * v[i + n].clone() - u[i + n].clone() * v[i].clone();
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// `diag(-I_n, I_n)`.
    K,
    /// `[[0, I_n], [-I_n, 0]]`.
    J,
    /// `(v1, v2) -> (v2, v1)` on `R^{4n}`.
    TwistK,
    /// `(v1, v2) -> (v2, -v1)` on `R^{4n}`.
    TwistJ,
}

/// Structure matrix of the given kind; `n` is the half-dimension of `V`.
pub fn structure_matrix<T: Scalar>(kind: StructureKind, n: usize) -> Matrix<T> {
    let one = T::one();
    match kind {
        StructureKind::K => Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i != j {
                T::zero()
            } else if i < n {
                -one.clone()
            } else {
                one.clone()
            }
        }),
        StructureKind::J => Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if j == i + n {
                one.clone()
            } else if i == j + n {
                -one.clone()
            } else {
                T::zero()
            }
        }),
        StructureKind::TwistK | StructureKind::TwistJ => {
            let h = 2 * n;
            let sign = if kind == StructureKind::TwistK { one.clone() } else { -one.clone() };
            Matrix::from_fn(2 * h, 2 * h, |i, j| {
                if i < h && j == i + h {
                    one.clone()
                } else if i >= h && j + h == i {
                    sign.clone()
                } else {
                    T::zero()
                }
            })
        }
    }
}

/// `Y_F = (-dF/dx2, dF/dx1)`, so that `dF(u) = w(u, Y_F)`.
pub fn hamiltonian_field(f: &QPoly, n: usize) -> Vec<QPoly> {
    assert_eq!(f.nvars(), 2 * n);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(-f.partial(i + n));
    }
    for i in 0..n {
        out.push(f.partial(i));
    }
    out
}

/// `Y_F` at a point from the gradient of `F` there.
pub fn hamiltonian_vector<T: Scalar>(grad: &[T]) -> Vec<T> {
    let n = grad.len() / 2;
    (0..2 * n)
        .map(|i| if i < n { -grad[i + n].clone() } else { grad[i - n].clone() })
        .collect()
}

/// Checks `Omega_1(v, w) = Omega(v, TwistK w)` and
/// `Omega_2(v, w) = Omega(v, TwistJ^{-1} w)`.
///
/// With `TwistJ` itself the second identity holds with the opposite sign,
/// `Omega(v, TwistJ w) = -Omega_2(v, w)`.
pub fn twist_identity_check(v: &[Rational], w: &[Rational], n: usize) -> Result<(bool, bool)> {
    let big = big_omega(n);
    let kw = structure_matrix::<Rational>(StructureKind::TwistK, n).mul_vec(w);
    let jinv = structure_matrix::<Rational>(StructureKind::TwistJ, n)
        .inverse()
        .expect("twist is invertible");
    let jw = jinv.mul_vec(w);
    let first = eval_form(&omega1(n), v, w)? == eval_form(&big, v, &kw)?;
    let second = eval_form(&omega2(n), v, w)? == eval_form(&big, v, &jw)?;
    Ok((first, second))
}

/// `DL^T M DL` for a map with Jacobian `jac` (rows: target coordinates).
pub fn pullback_2form<T: Scalar>(form: &SympForm, jac: &Matrix<T>) -> Result<Matrix<T>> {
    if jac.rows() != form.dim {
        return Err(IasError::DimensionMismatch {
            expected: form.dim,
            got: jac.rows(),
        });
    }
    let m = form.matrix.map(T::from_rational);
    Ok(&(&jac.transpose() * &m) * jac)
}

/// The contact form on `R^{4n+1}` with coordinates `(x, y, z)`:
/// `theta = dz - sum (y_{i+n} dx_i - y_i dx_{i+n})`, the primitive with
/// `d theta = Omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContactForm {
    pub n: usize,
}

impl ContactForm {
    /// Coefficients of `theta` at the point `(x, y, z)`, on `(dx, dy, dz)`.
    pub fn covector<T: Scalar>(&self, point: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(point.len(), 4 * n + 1);
        let y = &point[2 * n..4 * n];
        let mut c = vec![T::zero(); 4 * n + 1];
        for i in 0..n {
            c[i] = -y[i + n].clone();
            c[i + n] = y[i].clone();
        }
        c[4 * n] = T::one();
        c
    }
}

/// Row vector of `L~^* theta` given the value and Jacobian of `L~`.
pub fn contact_pullback<T: Scalar>(n: usize, value: &[T], jac: &Matrix<T>) -> Result<Vec<T>> {
    if value.len() != 4 * n + 1 || jac.rows() != 4 * n + 1 {
        return Err(IasError::DimensionMismatch {
            expected: 4 * n + 1,
            got: jac.rows().min(value.len()),
        });
    }
    let c = ContactForm { n }.covector(value);
    Ok((0..jac.cols())
        .map(|k| {
            c.iter()
                .enumerate()
                .fold(T::zero(), |acc, (r, ci)| acc + ci.clone() * jac[(r, k)].clone())
        })
        .collect())
}

fn same_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(IasError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// `(x, y) -> (x + y, x - y)`.
pub fn cc_transform<T: Scalar>(x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    same_len(x, y)?;
    let plus = x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect();
    let minus = x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect();
    Ok((plus, minus))
}

/// `(x_+, x_-) -> ((x_+ + x_-)/2, (x_+ - x_-)/2)`.
pub fn cc_inverse<T: Scalar>(xp: &[T], xm: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let (s, d) = cc_transform(xp, xm)?;
    let half = T::one() / T::from_i64(2);
    Ok((
        s.into_iter().map(|v| v * half.clone()).collect(),
        d.into_iter().map(|v| v * half.clone()).collect(),
    ))
}

/// Matrix of the center-chord inverse on `R^{4n}`.
pub fn cc_inverse_matrix(n: usize) -> Matrix<Rational> {
    let h = 2 * n;
    let half = Rational::new(1.into(), 2.into());
    Matrix::from_fn(2 * h, 2 * h, |r, c| {
        let same = r % h == c % h;
        if !same {
            return Rational::zero();
        }
        if r >= h && c >= h {
            -half.clone()
        } else {
            half.clone()
        }
    })
}

/// `(x, y) -> (x + iy, x - iy)` on complexified vectors.
pub fn rotated_cc_transform(x: &[Gaussian], y: &[Gaussian]) -> Result<(Vec<Gaussian>, Vec<Gaussian>)> {
    same_len(x, y)?;
    let i = Gaussian::new(Rational::zero(), Rational::one());
    let plus = x.iter().zip(y).map(|(a, b)| a + &i * b).collect();
    let minus = x.iter().zip(y).map(|(a, b)| a - &i * b).collect();
    Ok((plus, minus))
}

/// `(x~_+, x~_-) -> ((x~_+ + x~_-)/2, (x~_+ - x~_-)/(2i))`.
pub fn rotated_cc_inverse(xp: &[Gaussian], xm: &[Gaussian]) -> Result<(Vec<Gaussian>, Vec<Gaussian>)> {
    same_len(xp, xm)?;
    let half = Gaussian::new(Rational::new(1.into(), 2.into()), Rational::zero());
    let two_i = Gaussian::new(Rational::zero(), Rational::from_i64(2));
    let x = xp.iter().zip(xm).map(|(a, b)| (a + b) * &half).collect();
    let y = xp.iter().zip(xm).map(|(a, b)| (a - b) / &two_i).collect();
    Ok((x, y))
}

/// The rotated transform on real data, as the center-chord transform
/// after a quarter turn `J_{2n}` of each fiber.
pub fn rotated_cc_transform_real<T: Scalar>(x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    same_len(x, y)?;
    let jy = structure_matrix::<T>(StructureKind::J, x.len() / 2).mul_vec(y);
    cc_transform(x, &jy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn omega_values() {
        assert_eq!(eval_form(&omega(1), &v(&[1, 0]), &v(&[0, 1])).unwrap(), int(1));
        let u = v(&[1, 2, 3, 4]);
        let w = v(&[5, 6, 7, 8]);
        assert_eq!(eval_form(&omega(2), &u, &w).unwrap(), int(-16));
        assert_eq!(omega_eval(&u, &w), int(-16));
        assert_eq!(eval_form(&omega(2), &u, &u).unwrap(), int(0));
        assert!(eval_form(&omega(2), &u, &v(&[1])).is_err());
    }

    #[test]
    fn big_omega_splits_into_mixed_omegas() {
        let n = 2;
        let a: Vec<Rational> = (0..8).map(|i| rat(i * i - 3, i + 1)).collect();
        let b: Vec<Rational> = (0..8).map(|i| rat(5 - 2 * i, 2)).collect();
        let lhs = eval_form(&big_omega(n), &a, &b).unwrap();
        let rhs = omega_eval(&a[..4], &b[4..]) - omega_eval(&b[..4], &a[4..]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn structure_matrices_square_to_plus_minus_identity() {
        for n in 1..4 {
            let k = structure_matrix::<Rational>(StructureKind::K, n);
            let j = structure_matrix::<Rational>(StructureKind::J, n);
            assert_eq!(&k * &k, Matrix::identity(2 * n));
            assert_eq!(&j * &j, -&Matrix::identity(2 * n));
            let tk = structure_matrix::<Rational>(StructureKind::TwistK, n);
            let w: Vec<Rational> = (0..4 * n as i64).map(int).collect();
            let out = tk.mul_vec(&w);
            assert_eq!(&out[..2 * n], &w[2 * n..]);
            assert_eq!(&out[2 * n..], &w[..2 * n]);
            let tj = structure_matrix::<Rational>(StructureKind::TwistJ, n);
            let out = tj.mul_vec(&w);
            assert_eq!(&out[..2 * n], &w[2 * n..]);
            let neg: Vec<Rational> = w[..2 * n].iter().map(|q| -q).collect();
            assert_eq!(&out[2 * n..], &neg[..]);
        }
    }

    #[test]
    fn twist_identities_as_matrices() {
        for n in 1..=4 {
            let big = big_omega(n).matrix;
            let tk = structure_matrix::<Rational>(StructureKind::TwistK, n);
            let tj = structure_matrix::<Rational>(StructureKind::TwistJ, n);
            assert_eq!(&big * &tk, omega1(n).matrix);
            assert_eq!(&big * &tj.inverse().unwrap(), omega2(n).matrix);
            // the literal composition with TwistJ flips the sign
            assert_eq!(&big * &tj, -&omega2(n).matrix);
        }
    }

    #[test]
    fn twist_check_on_basis_pairs() {
        let n = 2;
        for a in 0..8 {
            for b in 0..8 {
                let mut e = vec![int(0); 8];
                let mut f = vec![int(0); 8];
                e[a] = int(1);
                f[b] = int(1);
                assert_eq!(twist_identity_check(&e, &f, n).unwrap(), (true, true));
            }
        }
    }

    #[test]
    fn hamiltonian_field_examples() {
        let x1 = QPoly::var(2, 0);
        let x2 = QPoly::var(2, 1);
        let y = hamiltonian_field(&(&x1 * &x2), 1);
        assert_eq!(y, vec![-&x1, x2.clone()]);
        let f = (&x1.pow(2) + &x2.pow(2)).scale(&rat(1, 2));
        assert_eq!(hamiltonian_field(&f, 1), vec![-&x2, x1.clone()]);
        assert!(hamiltonian_field(&QPoly::constant(2, int(3)), 1).iter().all(|p| p.is_zero()));
    }

    #[test]
    fn hamiltonian_field_antisymmetric_form() {
        // w(Y_F, u) = -dF(u)
        let g = vec![int(3), int(-2), rat(1, 5), int(7)];
        let y = hamiltonian_vector(&g);
        let u = v(&[1, -4, 2, 9]);
        let df: Rational = g.iter().zip(&u).map(|(a, b)| a * b).sum();
        assert_eq!(omega_eval(&y, &u), -df.clone());
        assert_eq!(omega_eval(&u, &y), df);
    }

    #[test]
    fn pullback_of_diagonal_into_omega1() {
        // L(x) = (x, x), n = 1
        let jac = Matrix::from_fn(4, 2, |r, c| if r % 2 == c { int(1) } else { int(0) });
        let m = pullback_2form(&omega1(1), &jac).unwrap();
        assert_eq!(m, omega(1).matrix.scale(&int(2)));
        let zero_section = Matrix::from_fn(4, 2, |r, c| if r == c { int(1) } else { int(0) });
        assert!(pullback_2form(&big_omega(1), &zero_section).unwrap().is_zero());
    }

    #[test]
    fn contact_pullback_examples() {
        // L~(x) = (x, 0, x1), n = 1
        let value = v(&[2, 3, 0, 0, 2]);
        let jac = Matrix::from_fn(5, 2, |r, c| {
            if r == c || (r == 4 && c == 0) {
                int(1)
            } else {
                int(0)
            }
        });
        assert_eq!(contact_pullback(1, &value, &jac).unwrap(), v(&[1, 0]));
        let jac0 = Matrix::from_fn(5, 2, |r, c| if r == c { int(1) } else { int(0) });
        assert_eq!(contact_pullback(1, &v(&[2, 3, 0, 0, 1]), &jac0).unwrap(), v(&[0, 0]));
    }

    #[test]
    fn center_chord_transforms() {
        let x = vec![rat(1, 3), int(2)];
        let y = vec![int(-5), rat(7, 2)];
        let (p, m) = cc_transform(&x, &y).unwrap();
        assert_eq!(cc_inverse(&p, &m).unwrap(), (x.clone(), y.clone()));
        let (p0, m0) = cc_transform(&x, &[int(0), int(0)]).unwrap();
        assert_eq!(p0, m0);
    }

    #[test]
    fn cc_inverse_pulls_back_omega_to_half_difference() {
        for n in 1..=3 {
            let p = cc_inverse_matrix(n);
            let pulled = &(&p.transpose() * &big_omega(n).matrix) * &p;
            assert_eq!(pulled.scale(&int(2)), difference_form(n).matrix);
        }
    }

    #[test]
    fn rotated_transform_round_trip_and_real_form() {
        let g = |a: i64, b: i64| Gaussian::new(int(a), int(b));
        let x = vec![g(1, 2), g(-3, 0)];
        let y = vec![g(0, 5), g(4, -1)];
        let (p, m) = rotated_cc_transform(&x, &y).unwrap();
        assert_eq!(rotated_cc_inverse(&p, &m).unwrap(), (x, y));
        let xr = v(&[1, 2]);
        let yr = v(&[3, 4]);
        let (p, m) = rotated_cc_transform_real(&xr, &yr).unwrap();
        assert_eq!(p, v(&[5, -1]));
        assert_eq!(m, v(&[-3, 5]));
    }
}
