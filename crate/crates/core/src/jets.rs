//! Order-2 truncated Taylor arithmetic and the scalar fields built on it.
//!
//! A [`Jet2`] carries value, gradient and Hessian of a function at a point.
//! Every chart invariant in this crate needs at most second derivatives of
//! the chart maps, so jets stop at order two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{IasError, Result};
use crate::linalg::{Gaussian, Matrix, Rational, Scalar};
use crate::poly::{GPoly, QPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<T> {
    pub value: T,
    pub grad: Vec<T>,
    /// Row-major `n x n`.
    pub hess: Vec<T>,
}

impl<T: Scalar> Jet2<T> {
    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn constant(nvars: usize, v: T) -> Self {
        Jet2 {
            value: v,
            grad: vec![T::zero(); nvars],
            hess: vec![T::zero(); nvars * nvars],
        }
    }

    /// The coordinate function `r_i` at the point `r_i = v`.
    pub fn variable(nvars: usize, i: usize, v: T) -> Self {
        let mut j = Self::constant(nvars, v);
        j.grad[i] = T::one();
        j
    }

    pub fn hess_at(&self, i: usize, k: usize) -> &T {
        &self.hess[i * self.nvars() + k]
    }

    pub fn hessian(&self) -> Matrix<T> {
        let n = self.nvars();
        Matrix::from_fn(n, n, |i, k| self.hess[i * n + k].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet2 {
            value: self.value.clone() * s.clone(),
            grad: self.grad.iter().map(|g| g.clone() * s.clone()).collect(),
            hess: self.hess.iter().map(|h| h.clone() * s.clone()).collect(),
        }
    }
}

impl<T: Scalar> Add for Jet2<T> {
    type Output = Jet2<T>;
    fn add(self, rhs: Jet2<T>) -> Jet2<T> {
        Jet2 {
            value: self.value + rhs.value,
            grad: self.grad.into_iter().zip(rhs.grad).map(|(a, b)| a + b).collect(),
            hess: self.hess.into_iter().zip(rhs.hess).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for Jet2<T> {
    type Output = Jet2<T>;
    fn sub(self, rhs: Jet2<T>) -> Jet2<T> {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for Jet2<T> {
    type Output = Jet2<T>;
    fn neg(self) -> Jet2<T> {
        Jet2 {
            value: -self.value,
            grad: self.grad.into_iter().map(|g| -g).collect(),
            hess: self.hess.into_iter().map(|h| -h).collect(),
        }
    }
}

impl<T: Scalar> Mul for Jet2<T> {
    type Output = Jet2<T>;
    /// Leibniz rule truncated at order two.
    fn mul(self, rhs: Jet2<T>) -> Jet2<T> {
        let n = self.nvars();
        let value = self.value.clone() * rhs.value.clone();
        let grad = (0..n)
            .map(|i| self.grad[i].clone() * rhs.value.clone() + self.value.clone() * rhs.grad[i].clone())
            .collect();
        let mut hess = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                hess.push(
                    self.hess[i * n + k].clone() * rhs.value.clone()
                        + self.value.clone() * rhs.hess[i * n + k].clone()
                        + self.grad[i].clone() * rhs.grad[k].clone()
                        + self.grad[k].clone() * rhs.grad[i].clone(),
                );
            }
        }
        Jet2 { value, grad, hess }
    }
}

/// Widen an arity-0 constant jet so it can combine with `n`-variable jets.
fn widen<T: Scalar>(j: Jet2<T>, n: usize) -> Jet2<T> {
    if j.nvars() == n {
        j
    } else {
        debug_assert_eq!(j.nvars(), 0);
        Jet2::constant(n, j.value)
    }
}

/// Newtype so polynomial evaluation can broadcast constants.
#[derive(Clone, Debug)]
struct JetCell<T: Scalar>(Jet2<T>, usize);

impl<T: Scalar> Add for JetCell<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.1.max(rhs.1);
        JetCell(widen(self.0, n) + widen(rhs.0, n), n)
    }
}

impl<T: Scalar> Mul for JetCell<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let n = self.1.max(rhs.1);
        // constants times jets: cheap path
        if self.1 == 0 {
            return JetCell(rhs.0.scale(&self.0.value), rhs.1);
        }
        if rhs.1 == 0 {
            return JetCell(self.0.scale(&rhs.0.value), self.1);
        }
        JetCell(widen(self.0, n) * widen(rhs.0, n), n)
    }
}

impl<T: Scalar> Zero for JetCell<T> {
    fn zero() -> Self {
        JetCell(Jet2::constant(0, T::zero()), 0)
    }
    fn is_zero(&self) -> bool {
        let j = &self.0;
        j.value.is_zero() && j.grad.iter().all(|g| g.is_zero()) && j.hess.iter().all(|h| h.is_zero())
    }
}

impl<T: Scalar> One for JetCell<T> {
    fn one() -> Self {
        JetCell(Jet2::constant(0, T::one()), 0)
    }
}

/// Evaluate a rational polynomial on jets: value, gradient and Hessian at
/// `p`, computed by jet arithmetic (not by symbolic differentiation).
pub fn poly_jet<T: Scalar>(f: &QPoly, p: &[T]) -> Jet2<T> {
    let n = f.nvars();
    assert_eq!(p.len(), n, "point arity mismatch");
    let seeds: Vec<JetCell<T>> = (0..n)
        .map(|i| JetCell(Jet2::variable(n, i, p[i].clone()), n))
        .collect();
    let out = f.eval_in(&seeds, |c| JetCell(Jet2::constant(0, T::from_rational(c)), 0));
    widen(out.0, n)
}

type JetFn = dyn Fn(&[f64]) -> Jet2<f64> + Send + Sync;

/// A field known only through a float jet evaluator.
#[derive(Clone)]
pub struct BlackBox {
    pub nvars: usize,
    pub eval: Arc<JetFn>,
}

impl fmt::Debug for BlackBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlackBox({} vars)", self.nvars)
    }
}

/// A smooth function germ, exact (polynomial) or a float black box.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Poly(QPoly),
    BlackBox(BlackBox),
}

impl From<QPoly> for ScalarField {
    fn from(p: QPoly) -> Self {
        ScalarField::Poly(p)
    }
}

impl ScalarField {
    pub fn black_box(nvars: usize, f: impl Fn(&[f64]) -> Jet2<f64> + Send + Sync + 'static) -> Self {
        ScalarField::BlackBox(BlackBox {
            nvars,
            eval: Arc::new(f),
        })
    }

    pub fn nvars(&self) -> usize {
        match self {
            ScalarField::Poly(p) => p.nvars(),
            ScalarField::BlackBox(b) => b.nvars,
        }
    }

    pub fn as_poly(&self) -> Option<&QPoly> {
        match self {
            ScalarField::Poly(p) => Some(p),
            ScalarField::BlackBox(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarField::Poly(_))
    }

    pub fn jet_exact(&self, p: &[Rational]) -> Result<Jet2<Rational>> {
        self.check_arity(p.len())?;
        match self {
            ScalarField::Poly(f) => Ok(poly_jet(f, p)),
            ScalarField::BlackBox(_) => Err(IasError::NotExact),
        }
    }

    pub fn jet_f64(&self, p: &[f64]) -> Result<Jet2<f64>> {
        self.check_arity(p.len())?;
        Ok(match self {
            ScalarField::Poly(f) => poly_jet(f, p),
            ScalarField::BlackBox(b) => (b.eval)(p),
        })
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.nvars() {
            return Err(IasError::DimensionMismatch {
                expected: self.nvars(),
                got,
            });
        }
        Ok(())
    }
}

/// Generic jet evaluation so geometric code can be written once over
/// exact and float scalars.
pub trait JetEval<T: Scalar> {
    fn jet(&self, p: &[T]) -> Result<Jet2<T>>;
}

impl JetEval<Rational> for ScalarField {
    fn jet(&self, p: &[Rational]) -> Result<Jet2<Rational>> {
        self.jet_exact(p)
    }
}

impl JetEval<f64> for ScalarField {
    fn jet(&self, p: &[f64]) -> Result<Jet2<f64>> {
        self.jet_f64(p)
    }
}

/// Jets of every component of a vector-valued map at `p`.
pub fn map_jets<T: Scalar>(fields: &[ScalarField], p: &[T]) -> Result<Vec<Jet2<T>>>
where
    ScalarField: JetEval<T>,
{
    fields.iter().map(|f| f.jet(p)).collect()
}

/// Jacobian with one row per component and one column per variable.
pub fn jacobian<T: Scalar>(jets: &[Jet2<T>]) -> Matrix<T> {
    let cols = jets.first().map_or(0, |j| j.nvars());
    Matrix::from_fn(jets.len(), cols, |r, c| jets[r].grad[c].clone())
}

/// Second partials `d^2/dr_i dr_j` of every component, as a vector.
pub fn second_partial<T: Scalar>(jets: &[Jet2<T>], i: usize, j: usize) -> Vec<T> {
    jets.iter().map(|jt| jt.hess_at(i, j).clone()).collect()
}

/// `d/dr_k` of the Jacobian.
pub fn jacobian_derivative<T: Scalar>(jets: &[Jet2<T>], k: usize) -> Matrix<T> {
    let cols = jets.first().map_or(0, |j| j.nvars());
    Matrix::from_fn(jets.len(), cols, |r, c| jets[r].hess_at(c, k).clone())
}

/// Split `H(z)` into real and imaginary parts in the real variables
/// `(s_1..s_n, t_1..t_n)` with `z_k = s_k + i t_k`.
pub fn complex_split(h: &GPoly) -> (QPoly, QPoly) {
    let n = h.nvars();
    let i_unit = Gaussian::new(Rational::zero(), Rational::one());
    let subs: Vec<GPoly> = (0..n)
        .map(|k| {
            let s = GPoly::var(2 * n, k);
            let t = GPoly::var(2 * n, n + k).scale(&i_unit);
            &s + &t
        })
        .collect();
    let expanded = h.compose(&subs);
    (expanded.real_part(), expanded.imag_part())
}

/// Cauchy-Riemann residuals `P_s - Q_t` and `P_t + Q_s`, one pair per
/// complex variable. All zero iff `P + iQ` is holomorphic.
pub fn cauchy_riemann_check(p: &QPoly, q: &QPoly) -> Vec<(QPoly, QPoly)> {
    assert_eq!(p.nvars(), q.nvars());
    assert_eq!(p.nvars() % 2, 0, "expects real variables (s, t)");
    let n = p.nvars() / 2;
    (0..n)
        .map(|k| {
            let (s, t) = (k, n + k);
            (&p.partial(s) - &q.partial(t), &p.partial(t) + &q.partial(s))
        })
        .collect()
}

/// Black-box variant of the Cauchy-Riemann check: residuals at a point.
pub fn cauchy_riemann_residual_f64(p: &ScalarField, q: &ScalarField, at: &[f64]) -> Result<Vec<f64>> {
    let jp = p.jet_f64(at)?;
    let jq = q.jet_f64(at)?;
    let n = at.len() / 2;
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        out.push(jp.grad[k] - jq.grad[n + k]);
        out.push(jp.grad[n + k] + jq.grad[k]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn x(i: usize, n: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn jet_of_square() {
        let f = x(0, 1).pow(2);
        let j = poly_jet(&f, &[int(3)]);
        assert_eq!(j.value, int(9));
        assert_eq!(j.grad, vec![int(6)]);
        assert_eq!(j.hess, vec![int(2)]);
    }

    #[test]
    fn jet_of_product_has_off_diagonal_hessian() {
        let f = &x(0, 2) * &x(1, 2);
        let j = poly_jet(&f, &[rat(2, 7), int(-5)]);
        assert_eq!(j.hess, vec![int(0), int(1), int(1), int(0)]);
    }

    #[test]
    fn float_and_exact_jets_agree() {
        let f = &(&x(0, 2).pow(3) * &x(1, 2)) - &x(1, 2).pow(2).scale(&rat(1, 3));
        let je = poly_jet(&f, &[rat(1, 2), rat(3, 4)]);
        let jf = poly_jet(&f, &[0.5, 0.75]);
        assert!((je.value.to_f64() - jf.value).abs() < 1e-14);
        for (a, b) in je.hess.iter().zip(&jf.hess) {
            assert!((a.to_f64() - b).abs() < 1e-14);
        }
    }

    #[test]
    fn split_z_squared() {
        let h = GPoly::var(1, 0).pow(2);
        let (p, q) = complex_split(&h);
        let s = x(0, 2);
        let t = x(1, 2);
        assert_eq!(p, &s.pow(2) - &t.pow(2));
        assert_eq!(q, (&s * &t).scale(&int(2)));
    }

    #[test]
    fn split_z_cubed_imaginary_part() {
        let (_, q) = complex_split(&GPoly::var(1, 0).pow(3));
        let s = x(0, 2);
        let t = x(1, 2);
        let expected = &(&s.pow(2) * &t).scale(&int(3)) - &t.pow(3);
        assert_eq!(q, expected);
    }

    #[test]
    fn split_i_times_z() {
        let i = Gaussian::new(int(0), int(1));
        let (p, q) = complex_split(&GPoly::var(1, 0).scale(&i));
        assert_eq!(q, x(0, 2));
        assert_eq!(p, -&x(1, 2));
    }

    #[test]
    fn cauchy_riemann_flags_non_holomorphic_pair() {
        let s = x(0, 2);
        let res = cauchy_riemann_check(&s.pow(2), &QPoly::zero(2));
        assert_eq!(res[0].0, s.scale(&int(2)));
        let ok = cauchy_riemann_check(&x(0, 2), &x(1, 2));
        assert!(ok.iter().all(|(a, b)| a.is_zero() && b.is_zero()));
    }

    #[test]
    fn black_box_field_has_no_exact_jet() {
        let f = ScalarField::black_box(1, |p| Jet2::variable(1, 0, p[0]));
        assert_eq!(f.jet_exact(&[int(1)]), Err(IasError::NotExact));
        assert_eq!(f.jet_f64(&[2.0]).unwrap().value, 2.0);
    }
}
