//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so two
//! polynomials are equal iff their canonical term maps are equal. Zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::linalg::{Gaussian, Rational};

pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coeff for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Real polynomial with rational coefficients.
pub type QPoly = Poly<Rational>;
/// Polynomial with Gaussian-rational coefficients.
pub type GPoly = Poly<Gaussian>;

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}](", self.nvars)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}*{:?}", c, m)?;
        }
        write!(f, ")")
    }
}

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m, C::one())
    }

    pub fn monomial(exps: Monomial, c: C) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Monomial, c: C) {
        assert_eq!(exps.len(), self.nvars, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Lowest total degree among the terms (the order of vanishing at 0).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).min()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[var] = e - 1;
            out.add_term(dm, c.clone() * from_u32::<C>(e));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let g = self.gradient();
        g.iter()
            .map(|gi| (0..self.nvars).map(|j| gi.partial(j)).collect())
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluate in another ring, mapping coefficients with `lift`.
    pub fn eval_in<T>(&self, point: &[T], lift: impl Fn(&C) -> T) -> T
    where
        T: Clone + Zero + One + Mul<Output = T> + Add<Output = T>,
    {
        assert_eq!(point.len(), self.nvars);
        // cache powers per variable
        let mut powers: Vec<Vec<T>> = (0..self.nvars).map(|_| vec![T::one()]).collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().clone() * point[v].clone();
                    powers[v].push(next);
                }
                t = t * powers[v][e as usize].clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute every variable by a polynomial; all substitutes must share
    /// one ring.
    pub fn compose(&self, subs: &[Poly<C>]) -> Poly<C> {
        assert_eq!(subs.len(), self.nvars, "compose needs one substitute per variable");
        let target = subs.first().map_or(0, |p| p.nvars);
        assert!(subs.iter().all(|p| p.nvars == target));
        let mut powers: Vec<Vec<Poly<C>>> = (0..self.nvars).map(|_| vec![Poly::one(target)]).collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * &subs[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-embed into a ring of `nvars` variables; variable `i` becomes
    /// variable `map[i]`.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Set the listed variables to constants, keeping the ring.
    pub fn substitute_constants(&self, assignments: &[(usize, C)]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let mut coef = c.clone();
            for (v, val) in assignments {
                for _ in 0..m[*v] {
                    coef = coef * val.clone();
                }
                nm[*v] = 0;
            }
            out.add_term(nm, coef);
        }
        out
    }

    /// Drop every term of total degree above `deg`.
    pub fn truncate(&self, deg: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| total_degree(m) <= deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Does any term involve variable `var`?
    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }
}

fn from_u32<C: Coeff>(e: u32) -> C {
    let mut acc = C::zero();
    for _ in 0..e {
        acc = acc + C::one();
    }
    acc
}

impl QPoly {
    /// Antiderivative in `var` (constant of integration zero).
    pub fn integrate(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut im = m.clone();
            im[var] += 1;
            out.add_term(im, c / Rational::from_integer((m[var] + 1).into()));
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.eval_in(point, crate::linalg::rational_to_f64)
    }

    pub fn to_gaussian(&self) -> GPoly {
        self.map_coeffs(|c| Gaussian::new(c.clone(), Rational::zero()))
    }
}

impl GPoly {
    pub fn real_part(&self) -> QPoly {
        QPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), c.re.clone())))
    }

    pub fn imag_part(&self) -> QPoly {
        QPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), c.im.clone())))
    }

    pub fn conj(&self) -> GPoly {
        self.map_coeffs(|c| c.conj())
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials from different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "subtracting polynomials from different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials from different rings");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

/// Determinant of a square matrix of polynomials by minor expansion with
/// memoization over column subsets.
pub fn poly_det<C: Coeff>(m: &[Vec<Poly<C>>], nvars: usize) -> Poly<C> {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    assert!(m.iter().all(|r| r.len() == n), "poly_det needs a square matrix");
    assert!(n <= 20, "poly_det is exponential in the matrix size");
    // minors[mask] = det of rows (n - popcount(mask) .. n) and the columns in mask
    let mut minors: Vec<Option<Poly<C>>> = vec![None; 1 << n];
    minors[0] = Some(Poly::one(nvars));
    for size in 1..=n {
        let row = n - size;
        for mask in 0usize..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = Poly::zero(nvars);
            let mut sign_pos = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[row][col];
                if !entry.is_zero() {
                    let sub = minors[mask & !(1 << col)].as_ref().unwrap();
                    if !sub.is_zero() {
                        let prod = entry * sub;
                        acc = if sign_pos { &acc + &prod } else { &acc - &prod };
                    }
                }
                sign_pos = !sign_pos;
            }
            minors[mask] = Some(acc);
        }
        // free the previous level
        if size >= 2 {
            for mask in 0usize..(1 << n) {
                if mask.count_ones() as usize == size - 1 {
                    minors[mask] = None;
                }
            }
        }
    }
    minors[(1 << n) - 1].take().unwrap()
}
