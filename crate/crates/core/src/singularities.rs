//! Generating functions and families of center-chord and special charts,
//! elimination of quadratic variables, local algebras of critical germs,
//! Arnold's stability criterion, and the A-D-E realization catalogs.
//!
//! Variable layout. A generating function `S` of an index split with
//! reduced set `J` lives in `2n` variables `(x_1..x_n, w_1..w_n)` where
//! `w_j = x_{j+n}` for `j in J` and `w_j = y_j` otherwise. A generating
//! family lives in `(x_1..x_{2n}, kappa_1..kappa_{n-|J|})`, one `kappa`
//! for each `j` outside `J`, in increasing order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{IasError, Result};
use crate::jets::complex_split;
use crate::linalg::{Gaussian, Matrix, Rational, Scalar};
use crate::poly::{total_degree, GPoly, Monomial, QPoly};

/// `n` and the reduced indices `J` (0-based, sorted). The split used in the
/// literature takes `J = {0, .., m-1}`; any subset works the same way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSplit {
    pub n: usize,
    pub hat: Vec<usize>,
}

impl IndexSplit {
    pub fn new(n: usize, mut hat: Vec<usize>) -> Result<Self> {
        hat.sort_unstable();
        hat.dedup();
        if hat.len() >= n.max(1) || hat.iter().any(|&j| j >= n) {
            return Err(IasError::InvalidParameter(format!(
                "reduced indices {hat:?} must be a proper subset of 0..{n}"
            )));
        }
        Ok(IndexSplit { n, hat })
    }

    pub fn unreduced(n: usize) -> Self {
        IndexSplit { n, hat: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.hat.len()
    }

    pub fn is_hat(&self, j: usize) -> bool {
        self.hat.contains(&j)
    }

    /// Indices `j` that keep a `y_j` variable (and get a `kappa`).
    pub fn check(&self) -> Vec<usize> {
        (0..self.n).filter(|j| !self.is_hat(*j)).collect()
    }
}

/// `S(x1, w)` together with its split.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunction {
    pub s: QPoly,
    pub split: IndexSplit,
    /// For each reduced `j`: `y_j = (x_{j+n} - g_j) / a_j` as a polynomial in
    /// the same ring as `s`.
    pub eliminated: Vec<(usize, QPoly)>,
}

/// `S_0(x1, y1) = (S+(x1 + y1) - S-(x1 - y1)) / 2`.
pub fn gen_fn_center_chord(splus: &QPoly, sminus: &QPoly) -> Result<GeneratingFunction> {
    let n = splus.nvars();
    if sminus.nvars() != n {
        return Err(IasError::DimensionMismatch {
            expected: n,
            got: sminus.nvars(),
        });
    }
    let d = 2 * n;
    let x = |i: usize| QPoly::var(d, i);
    let y = |i: usize| QPoly::var(d, n + i);
    let plus: Vec<QPoly> = (0..n).map(|i| &x(i) + &y(i)).collect();
    let minus: Vec<QPoly> = (0..n).map(|i| &x(i) - &y(i)).collect();
    let s = (&splus.compose(&plus) - &sminus.compose(&minus)).scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    Ok(GeneratingFunction {
        s,
        split: IndexSplit::unreduced(n),
        eliminated: Vec::new(),
    })
}

/// `S_0(x1, y1) = Im H(x1 + i y1)`.
pub fn gen_fn_special(h: &GPoly) -> GeneratingFunction {
    let (_, q) = complex_split(h);
    GeneratingFunction {
        s: q,
        split: IndexSplit::unreduced(h.nvars()),
        eliminated: Vec::new(),
    }
}

/// Eliminate `y_j` for `j in hat` from an unreduced `S_0` of the shape
/// `sum_j (a_j/2 y_j^2 + y_j g_j) + h` with nonzero constants `a_j`, where
/// `g_j` and `h` do not involve the eliminated variables. Returns
/// `S = -sum_j (x_{j+n} - g_j)^2 / (2 a_j) + h`.
pub fn reduce_quadratic(s0: &GeneratingFunction, hat: &[usize]) -> Result<GeneratingFunction> {
    if s0.split.m() != 0 {
        return Err(IasError::InvalidParameter("reduction starts from an unreduced function".into()));
    }
    let n = s0.split.n;
    let split = IndexSplit::new(n, hat.to_vec())?;
    let d = 2 * n;
    let yv = |j: usize| n + j;
    let mut gs = Vec::new();
    let mut h = QPoly::zero(d);
    // split the terms by their exponents in the eliminated variables
    for (m, c) in s0.s.terms() {
        let degs: Vec<(usize, u32)> = split.hat.iter().map(|&j| (j, m[yv(j)])).filter(|(_, e)| *e > 0).collect();
        match degs.as_slice() {
            [] => h.add_term(m.clone(), c.clone()),
            [(j, 1)] | [(j, 2)] => {
                let _ = j;
            }
            [(j, e)] => {
                return Err(IasError::NotQuadraticShape {
                    index: j + 1,
                    detail: format!("term of degree {e} in y{}", j + 1),
                })
            }
            [(j, _), (k, _), ..] => {
                return Err(IasError::NotQuadraticShape {
                    index: j + 1,
                    detail: format!("cross term between y{} and y{}", j + 1, k + 1),
                })
            }
        }
    }
    for &j in &split.hat {
        let v = yv(j);
        let mut a = Rational::zero();
        let mut g = QPoly::zero(d);
        for (m, c) in s0.s.terms() {
            match m[v] {
                2 => {
                    if total_degree(m) != 2 {
                        return Err(IasError::NotQuadraticShape {
                            index: j + 1,
                            detail: format!("coefficient of y{}^2 is not constant", j + 1),
                        });
                    }
                    a = c.clone() * Rational::from_i64(2);
                }
                1 => {
                    let mut mm = m.clone();
                    mm[v] = 0;
                    g.add_term(mm, c.clone());
                }
                _ => {}
            }
        }
        if a.is_zero() {
            return Err(IasError::NotQuadraticShape {
                index: j + 1,
                detail: format!("no y{}^2 term", j + 1),
            });
        }
        gs.push((j, a, g));
    }
    // rewrite g_j and h in the reduced layout: slot n+j now holds x_{j+n};
    // g_j and h do not involve it, so only the meaning of the slot changes
    let mut s = h.clone();
    let mut eliminated = Vec::new();
    for (j, a, g) in gs {
        let diff = &QPoly::var(d, yv(j)) - &g;
        let sq = &diff * &diff;
        s = &s - &sq.scale(&(Rational::from_i64(2) * a.clone()).recip());
        eliminated.push((j, diff.scale(&a.recip())));
    }
    Ok(GeneratingFunction { s, split, eliminated })
}

/// `G(x, kappa) = S(x1, x_hat, kappa) - x_check . kappa`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFamily {
    pub g: QPoly,
    pub split: IndexSplit,
}

impl GeneratingFamily {
    pub fn n(&self) -> usize {
        self.split.n
    }

    pub fn kappa_count(&self) -> usize {
        self.split.n - self.split.m()
    }

    /// `g(kappa) = G(0, kappa)`.
    pub fn germ(&self) -> QPoly {
        self.at_origin(&self.g)
    }

    /// Restrict a polynomial in `(x, kappa)` to `x = 0`.
    pub fn at_origin(&self, p: &QPoly) -> QPoly {
        let d = 2 * self.n();
        let k = self.kappa_count();
        let zeros: Vec<(usize, Rational)> = (0..d).map(|i| (i, Rational::zero())).collect();
        let fixed = p.substitute_constants(&zeros);
        let mut map = vec![0usize; d];
        map.extend(0..k);
        fixed.relabel(k, &map)
    }

    /// `dG/dx_j (0, kappa)` for every `j`.
    pub fn x_derivatives_at_origin(&self) -> Vec<QPoly> {
        (0..2 * self.n()).map(|j| self.at_origin(&self.g.partial(j))).collect()
    }
}

pub fn generating_family(s: &GeneratingFunction) -> GeneratingFamily {
    let n = s.split.n;
    let d = 2 * n;
    let check = s.split.check();
    let total = d + check.len();
    // S slot i < n -> x_i; slot n+j -> x_{n+j} (reduced) or kappa (kept)
    let mut map: Vec<usize> = (0..n).collect();
    for j in 0..n {
        match check.iter().position(|&c| c == j) {
            Some(p) => map.push(d + p),
            None => map.push(n + j),
        }
    }
    let mut g = s.s.relabel(total, &map);
    for (p, &j) in check.iter().enumerate() {
        g = &g - &(&QPoly::var(total, n + j) * &QPoly::var(total, d + p));
    }
    GeneratingFamily {
        g,
        split: s.split.clone(),
    }
}

/// Residuals of the generating-function equations along a chart point:
/// `dS/dx1 = y2`, `dS/dw_j = x_{n+j}` (kept `j`), `-dS/dw_j = y_j`
/// (reduced `j`), and the value `z = S - y_check . x_check`.
pub fn generating_function_residuals(gf: &GeneratingFunction, x: &[Rational], y: &[Rational]) -> (Vec<Rational>, Rational) {
    let n = gf.split.n;
    let mut point: Vec<Rational> = x[..n].to_vec();
    for j in 0..n {
        point.push(if gf.split.is_hat(j) { x[n + j].clone() } else { y[j].clone() });
    }
    let mut res = Vec::new();
    for i in 0..n {
        res.push(gf.s.partial(i).eval(&point) - y[n + i].clone());
    }
    for j in 0..n {
        let dv = gf.s.partial(n + j).eval(&point);
        res.push(if gf.split.is_hat(j) { -dv - y[j].clone() } else { dv - x[n + j].clone() });
    }
    let mut z = gf.s.eval(&point);
    for j in gf.split.check() {
        z -= y[j].clone() * x[n + j].clone();
    }
    (res, z)
}

/// Largest truncation degree tried before declaring a germ non-isolated.
pub const MAX_TRUNCATION: u32 = 32;
/// Budget on the number of monomials in a truncated ring.
pub const MAX_MONOMIALS: usize = 60_000;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Monomials in `k` variables of degree `<= deg`, by ascending degree.
pub fn monomials_upto(k: usize, deg: u32) -> Vec<Monomial> {
    let mut out = vec![vec![0u32; k]];
    let mut layer = vec![vec![0u32; k]];
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &layer {
            // only raise variables at or after the last nonzero one: no repeats
            let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in start..k {
                let mut nm = m.clone();
                nm[v] += 1;
                next.push(nm);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

type SparseRow = BTreeMap<usize, Rational>;

/// Row echelon form built one sparse row at a time; each stored row has its
/// pivot as its lowest column.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    fn reduce(&self, mut v: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        while let Some((&c, coef)) = v.range(cursor..).next() {
            let coef = coef.clone();
            if let Some(row) = self.rows.get(&c) {
                for (&rc, rv) in row {
                    let e = v.entry(rc).or_insert_with(Rational::zero);
                    *e -= coef.clone() * rv;
                    if e.is_zero() {
                        v.remove(&rc);
                    }
                }
            }
            cursor = c + 1;
        }
        v
    }

    fn insert(&mut self, v: SparseRow) -> bool {
        let v = self.reduce(v);
        let Some((&lead, lc)) = v.iter().next() else { return false };
        let inv = lc.recip();
        let row: SparseRow = v.into_iter().map(|(c, x)| (c, x * inv.clone())).collect();
        self.rows.insert(lead, row);
        true
    }
}

/// Standard-monomial basis of `R[[kappa]] / I` for an ideal of finite
/// codimension, computed in the truncation `R[kappa] / m^{D+1}` where the
/// quotient has stabilized.
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    pub kappa: usize,
    pub degree: u32,
    pub basis: Vec<Monomial>,
    pub dim: usize,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: Echelon,
}

impl LocalAlgebra {
    /// `dim R[kappa] / (I + m^{deg+1})`.
    pub fn truncated(generators: &[QPoly], kappa: usize, deg: u32) -> Self {
        let columns = monomials_upto(kappa, deg);
        let index: HashMap<Monomial, usize> = columns.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::default();
        for gen in generators {
            let gen = gen.truncate(deg);
            let Some(ord) = gen.order() else { continue };
            for mono in &columns {
                let md = total_degree(mono);
                if md + ord > deg {
                    break;
                }
                let mut row = SparseRow::new();
                for (m, c) in gen.terms() {
                    if md + total_degree(m) > deg {
                        continue;
                    }
                    let prod: Monomial = m.iter().zip(mono).map(|(a, b)| a + b).collect();
                    row.insert(index[&prod], c.clone());
                }
                ech.insert(row);
            }
        }
        let basis: Vec<Monomial> = columns
            .iter()
            .enumerate()
            .filter(|(i, _)| !ech.rows.contains_key(i))
            .map(|(_, m)| m.clone())
            .collect();
        LocalAlgebra {
            kappa,
            degree: deg,
            dim: basis.len(),
            basis,
            columns,
            index,
            echelon: ech,
        }
    }

    /// Raise the truncation until `dim(D) = dim(D+1)`; by Nakayama's lemma the
    /// quotient is then exact.
    pub fn compute(generators: &[QPoly], kappa: usize) -> Result<Self> {
        let mut prev = Self::truncated(generators, kappa, 1);
        for deg in 2..=MAX_TRUNCATION {
            if binom(deg as usize + kappa, kappa) > MAX_MONOMIALS {
                return Err(IasError::NonIsolated { degree: deg - 1 });
            }
            let next = Self::truncated(generators, kappa, deg);
            if next.dim == prev.dim {
                return Ok(prev);
            }
            prev = next;
        }
        Err(IasError::NonIsolated {
            degree: MAX_TRUNCATION,
        })
    }

    /// Coordinates of the class of `p` on `basis`.
    pub fn normal_form(&self, p: &QPoly) -> Vec<Rational> {
        let mut v = SparseRow::new();
        for (m, c) in p.truncate(self.degree).terms() {
            v.insert(self.index[m], c.clone());
        }
        let r = self.echelon.reduce(v);
        self.basis
            .iter()
            .map(|m| r.get(&self.index[m]).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }
}

/// The Milnor algebra `R[[kappa]] / <dg/dkappa>` of a germ.
pub fn local_algebra(g: &QPoly) -> Result<LocalAlgebra> {
    let gens: Vec<QPoly> = (0..g.nvars()).map(|i| g.partial(i)).collect();
    LocalAlgebra::compute(&gens, g.nvars())
}

/// `R[[kappa]] / <dg/dkappa, g>`.
pub fn legendrian_algebra(g: &QPoly) -> Result<LocalAlgebra> {
    let mut gens: Vec<QPoly> = (0..g.nvars()).map(|i| g.partial(i)).collect();
    gens.push(g.clone());
    LocalAlgebra::compute(&gens, g.nvars())
}

/// `kappa`-count minus the rank of the Hessian at 0.
pub fn corank(g: &QPoly) -> usize {
    let k = g.nvars();
    let zero = vec![Rational::zero(); k];
    let hess = Matrix::from_fn(k, k, |i, j| g.partial(i).partial(j).eval(&zero));
    k - hess.rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityMode {
    Lagrangian,
    Legendrian,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub stable: bool,
    pub quotient_dim: usize,
    /// Rows: classes of `1` and `dG/dx_j(0, kappa)` on the quotient basis.
    pub certificate: Matrix<Rational>,
    pub rank: usize,
}

/// Do `1` and `dG/dx_j (0, kappa)` span the quotient?
pub fn arnold_stable(fam: &GeneratingFamily, mode: StabilityMode) -> Result<StabilityReport> {
    let g = fam.germ();
    let alg = match mode {
        StabilityMode::Lagrangian => local_algebra(&g)?,
        StabilityMode::Legendrian => legendrian_algebra(&g)?,
    };
    let mut vectors = vec![QPoly::one(fam.kappa_count())];
    vectors.extend(fam.x_derivatives_at_origin());
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| alg.normal_form(v)).collect();
    let certificate = if alg.dim == 0 {
        Matrix::zeros(rows.len(), 0)
    } else {
        Matrix::from_rows(rows)
    };
    let rank = if alg.dim == 0 { 0 } else { certificate.rank() };
    Ok(StabilityReport {
        stable: rank == alg.dim,
        quotient_dim: alg.dim,
        certificate,
        rank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Series {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RealizationKind {
    CenterChord,
    Special,
}

impl RealizationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RealizationKind::CenterChord => "cc",
            RealizationKind::Special => "special",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cc" | "center-chord" => Ok(RealizationKind::CenterChord),
            "special" => Ok(RealizationKind::Special),
            other => Err(IasError::InvalidParameter(format!("unknown kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SingularityLabel {
    pub series: Series,
    pub k: u32,
    /// `+1`, `-1`, or `None` for formulas without a sign choice.
    pub sign: Option<i8>,
    pub kind: RealizationKind,
    pub n: usize,
}

impl SingularityLabel {
    /// Parse `A3+`, `D5-`, `E7`, ... The sign is dropped when the formula
    /// for this `(series, k, n, kind)` has no sign choice.
    pub fn parse(text: &str, n: usize, kind: RealizationKind) -> Result<Self> {
        let bad = || IasError::InvalidParameter(format!("bad singularity label '{text}'"));
        let mut chars = text.trim().chars();
        let series = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Series::A,
            'D' => Series::D,
            'E' => Series::E,
            _ => return Err(bad()),
        };
        let rest: String = chars.collect();
        let (digits, sign) = match rest.strip_suffix('+') {
            Some(d) => (d, Some(1)),
            None => match rest.strip_suffix('-') {
                Some(d) => (d, Some(-1)),
                None => (rest.as_str(), None),
            },
        };
        let k: u32 = digits.parse().map_err(|_| bad())?;
        let mut label = SingularityLabel { series, k, sign, kind, n };
        label.check_dimension()?;
        if label.has_sign_choice() {
            if label.sign.is_none() {
                label.sign = Some(1);
            }
        } else {
            label.sign = None;
        }
        Ok(label)
    }

    pub fn check_dimension(&self) -> Result<()> {
        let (n, k) = (self.n, self.k as usize);
        let fail = |detail: String| {
            Err(IasError::DimensionConstraint {
                label: self.name(),
                detail,
            })
        };
        if n == 0 {
            return fail("n must be at least 1".into());
        }
        match self.series {
            Series::A if k == 0 || k >= 2 * n + 2 => fail(format!("A_k needs 1 <= k < 2n+2 = {}", 2 * n + 2)),
            Series::D if k < 4 || k >= 2 * n + 2 => fail(format!("D_k needs 4 <= k < 2n+2 = {}", 2 * n + 2)),
            Series::E if !(6..=8).contains(&k) => fail("E_k needs k in 6..=8".into()),
            Series::E if k <= 7 && n < 3 => fail(format!("E{k} needs n >= 3")),
            Series::E if k == 8 && n < 4 => fail("E8 needs n >= 4".into()),
            _ => Ok(()),
        }
    }

    pub fn has_sign_choice(&self) -> bool {
        let n = self.n as u32;
        match (self.series, self.kind) {
            (Series::A, RealizationKind::CenterChord) => self.k <= n + 2,
            (Series::A, RealizationKind::Special) => true,
            (Series::D, RealizationKind::CenterChord) => self.k <= n + 3,
            (Series::D, RealizationKind::Special) => true,
            (Series::E, _) => self.k == 6,
        }
    }

    pub fn name(&self) -> String {
        let s = match self.series {
            Series::A => "A",
            Series::D => "D",
            Series::E => "E",
        };
        let sign = match self.sign {
            Some(1) => "+",
            Some(_) => "-",
            None => "",
        };
        format!("{s}{}{sign}", self.k)
    }

    pub fn expected_mu(&self) -> usize {
        self.k as usize
    }

    pub fn expected_corank(&self) -> usize {
        match self.series {
            Series::A if self.k == 1 => 0,
            Series::A => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for SingularityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, {})", self.name(), self.n, self.kind.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogFormula {
    CenterChord { splus: QPoly, sminus: QPoly },
    Special { h: GPoly },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub label: SingularityLabel,
    pub formula: CatalogFormula,
    /// 0-based indices `j` whose `y_j` is eliminated.
    pub reduce: Vec<usize>,
}

fn pm1(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn fl2(a: i64) -> i64 {
    a.div_euclid(2)
}

/// Builder for real polynomials in `n` variables with 1-based indices.
struct RealTerms {
    n: usize,
    p: QPoly,
}

impl RealTerms {
    fn new(n: usize) -> Self {
        RealTerms { n, p: QPoly::zero(n) }
    }

    /// `c * prod v_j^e` with a rational coefficient `num/den`.
    fn add(&mut self, num: i64, den: i64, factors: &[(usize, u32)]) {
        let mut m = vec![0u32; self.n];
        for &(j, e) in factors {
            m[j - 1] += e;
        }
        self.p.add_term(m, Rational::new(num.into(), den.into()));
    }
}

/// Builder for Gaussian polynomials; `ipow` is the exponent of `i`.
struct ComplexTerms {
    n: usize,
    p: GPoly,
}

impl ComplexTerms {
    fn new(n: usize) -> Self {
        ComplexTerms { n, p: GPoly::zero(n) }
    }

    fn add(&mut self, num: i64, den: i64, ipow: i64, factors: &[(usize, u32)]) {
        let q = Rational::new(num.into(), den.into());
        let c = match ipow.rem_euclid(4) {
            0 => Gaussian::new(q, Rational::zero()),
            1 => Gaussian::new(Rational::zero(), q),
            2 => Gaussian::new(-q, Rational::zero()),
            _ => Gaussian::new(Rational::zero(), -q),
        };
        let mut m = vec![0u32; self.n];
        for &(j, e) in factors {
            m[j - 1] += e;
        }
        self.p.add_term(m, c);
    }
}

fn range(a: i64, b: i64) -> impl Iterator<Item = i64> {
    a..=b
}

fn cc_formula(label: &SingularityLabel) -> (QPoly, QPoly, Vec<usize>) {
    let n = label.n as i64;
    let k = label.k as i64;
    let sg = label.sign.unwrap_or(1) as i64;
    let mut sp = RealTerms::new(label.n);
    let mut sm = RealTerms::new(label.n);
    let u = |j: i64| j as usize;
    let mut reduce = Vec::new();
    match label.series {
        Series::A if k <= n + 2 => {
            sp.add(sg * pm1(fl2(k + 1)), 1, &[(1, (k + 1) as u32)]);
            sm.add(sg * pm1(fl2(k)), 1, &[(1, (k + 1) as u32)]);
            for j in range(2, n) {
                sp.add(1, 1, &[(u(j), 2)]);
                sm.add(-1, 1, &[(u(j), 2)]);
            }
            for j in range(1, k - 2) {
                sp.add(pm1(fl2(k - j + 1)), 1, &[(u(j), 1), (1, (k - j) as u32)]);
                sm.add(pm1(fl2(k - j + 2)), 1, &[(u(j), 1), (1, (k - j) as u32)]);
            }
        }
        Series::A => {
            sp.add(pm1(fl2(k + 1)), 1, &[(1, (k + 1) as u32)]);
            sm.add(pm1(fl2(k)), 1, &[(1, (k + 1) as u32)]);
            for j in range(2, k - n - 1) {
                sp.add(pm1(fl2(k - j)), 1, &[(u(j), 1), (1, (k - j + 1) as u32)]);
                sm.add(pm1(fl2(k - j - 1)), 1, &[(u(j), 1), (1, (k - j + 1) as u32)]);
            }
            for j in range(1, n) {
                sp.add(pm1(fl2(n - j + 2)), 1, &[(u(j), 1), (1, (n - j + 2) as u32)]);
                sm.add(pm1(fl2(n - j + 1)), 1, &[(u(j), 1), (1, (n - j + 2) as u32)]);
            }
            for j in range(2, k - n - 1) {
                sp.add(1, 2, &[(1, (2 * k - 2 * j + 2) as u32)]);
                sm.add(-1, 2, &[(1, (2 * k - 2 * j + 2) as u32)]);
                sp.add(1, 2, &[(u(j), 2)]);
                sm.add(-1, 2, &[(u(j), 2)]);
                reduce.push(u(j) - 1);
            }
            for j in range(k - n, n) {
                sp.add(1, 1, &[(u(j), 2)]);
                sm.add(-1, 1, &[(u(j), 2)]);
            }
        }
        Series::D if k <= n + 3 => {
            sp.add(-1, 1, &[(1, 1), (2, 2)]);
            sp.add(-1, 1, &[(1, 3)]);
            sp.add(-1, 1, &[(2, 1), (1, 3)]);
            sp.add(sg * pm1(fl2(k + 3)), 1, &[(1, (k - 1) as u32)]);
            sm.add(-1, 1, &[(1, 1), (2, 2)]);
            sm.add(1, 1, &[(1, 3)]);
            sm.add(-1, 1, &[(2, 1), (1, 3)]);
            sm.add(sg * pm1(fl2(k + 2)), 1, &[(1, (k - 1) as u32)]);
            for j in range(3, k - 3) {
                sp.add(pm1(fl2(j + 2)), 1, &[(u(j), 1), (1, (j + 1) as u32)]);
                sm.add(pm1(fl2(j + 3)), 1, &[(u(j), 1), (1, (j + 1) as u32)]);
            }
            for j in range(3, n) {
                sp.add(1, 1, &[(u(j), 2)]);
                sm.add(-1, 1, &[(u(j), 2)]);
            }
        }
        Series::D => {
            sp.add(pm1(fl2(k - 1)), 1, &[(1, (k - 1) as u32)]);
            sp.add(-1, 1, &[(1, 1), (2, 2)]);
            sp.add(-1, 1, &[(1, 3)]);
            sp.add(-1, 1, &[(2, 1), (1, 3)]);
            sm.add(pm1(fl2(k - 2)), 1, &[(1, (k - 1) as u32)]);
            sm.add(-1, 1, &[(1, 1), (2, 2)]);
            sm.add(1, 1, &[(1, 3)]);
            sm.add(-1, 1, &[(2, 1), (1, 3)]);
            for j in range(3, n) {
                sp.add(pm1(fl2(j + 1)), 1, &[(u(j), 1), (1, (j + 1) as u32)]);
                sm.add(pm1(fl2(j)), 1, &[(u(j), 1), (1, (j + 1) as u32)]);
            }
            for j in range(3, k - n - 1) {
                sp.add(pm1(fl2(j + n)), 1, &[(u(j), 1), (1, (j + n - 1) as u32)]);
                sm.add(pm1(fl2(j + n - 1)), 1, &[(u(j), 1), (1, (j + n - 1) as u32)]);
                sp.add(pm1(j + n + 1), 2, &[(1, (2 * j + 2 * n - 2) as u32)]);
                sm.add(pm1(j + n), 2, &[(1, (2 * j + 2 * n - 2) as u32)]);
                sp.add(-1, 2, &[(u(j), 2)]);
                sm.add(1, 2, &[(u(j), 2)]);
                reduce.push(u(j) - 1);
            }
            for j in range(k - n, n) {
                sp.add(-1, 1, &[(u(j), 2)]);
                sm.add(1, 1, &[(u(j), 2)]);
            }
        }
        Series::E => match (k, n) {
            (6, _) => {
                sp.add(-1, 1, &[(1, 3)]);
                sp.add(sg, 1, &[(2, 4)]);
                sp.add(1, 1, &[(3, 2)]);
                sp.add(1, 1, &[(1, 2), (2, 2)]);
                sp.add(1, 1, &[(2, 2), (1, 1)]);
                sp.add(1, 1, &[(3, 1), (2, 2)]);
                sm.add(-1, 1, &[(1, 3)]);
                sm.add(-sg, 1, &[(2, 4)]);
                sm.add(-1, 1, &[(3, 2)]);
                sm.add(1, 1, &[(1, 2), (2, 2)]);
                sm.add(-1, 1, &[(2, 2), (1, 1)]);
                sm.add(-1, 1, &[(3, 1), (2, 2)]);
                for j in range(4, n) {
                    sp.add(1, 1, &[(u(j), 2)]);
                    sm.add(-1, 1, &[(u(j), 2)]);
                }
            }
            (7, 3) => {
                sp.add(-1, 1, &[(1, 3)]);
                sp.add(1, 1, &[(1, 1), (2, 3)]);
                sp.add(-1, 2, &[(3, 2)]);
                sp.add(1, 1, &[(3, 1), (2, 4)]);
                sp.add(1, 1, &[(2, 4)]);
                sp.add(1, 1, &[(1, 1), (2, 2)]);
                sp.add(1, 1, &[(3, 1), (1, 1), (2, 1)]);
                sp.add(1, 2, &[(2, 8)]);
                sm.add(-1, 1, &[(1, 3)]);
                sm.add(-1, 1, &[(1, 1), (2, 3)]);
                sm.add(1, 2, &[(3, 2)]);
                sm.add(1, 1, &[(3, 1), (2, 4)]);
                sm.add(1, 1, &[(2, 4)]);
                sm.add(-1, 1, &[(1, 1), (2, 2)]);
                sm.add(-1, 1, &[(3, 1), (1, 1), (2, 1)]);
                sm.add(-1, 2, &[(2, 8)]);
                reduce.push(2);
            }
            (7, _) => {
                sp.add(-1, 1, &[(1, 3)]);
                sp.add(1, 1, &[(1, 1), (2, 3)]);
                sp.add(-1, 1, &[(3, 2)]);
                sp.add(-1, 1, &[(4, 2)]);
                sp.add(1, 1, &[(2, 4), (1, 1)]);
                sp.add(1, 1, &[(2, 4)]);
                sp.add(1, 1, &[(3, 1), (2, 2)]);
                sp.add(1, 1, &[(4, 1), (1, 1), (2, 1)]);
                sm.add(-1, 1, &[(1, 3)]);
                sm.add(-1, 1, &[(1, 1), (2, 3)]);
                sm.add(1, 1, &[(3, 2)]);
                sm.add(1, 1, &[(4, 2)]);
                sm.add(-1, 1, &[(2, 4), (1, 1)]);
                sm.add(1, 1, &[(2, 4)]);
                sm.add(-1, 1, &[(3, 1), (2, 2)]);
                sm.add(-1, 1, &[(4, 1), (1, 1), (2, 1)]);
                for j in range(5, n) {
                    sp.add(1, 1, &[(u(j), 2)]);
                    sm.add(-1, 1, &[(u(j), 2)]);
                }
            }
            (8, 4) => {
                sp.add(-1, 1, &[(1, 3)]);
                sp.add(1, 1, &[(2, 5)]);
                sp.add(-1, 1, &[(3, 2)]);
                sp.add(-1, 2, &[(4, 2)]);
                sp.add(1, 1, &[(1, 1), (2, 3), (4, 1)]);
                sp.add(1, 1, &[(2, 4)]);
                sp.add(1, 1, &[(1, 2), (2, 2)]);
                sp.add(1, 1, &[(1, 1), (2, 1), (3, 1)]);
                sp.add(1, 1, &[(2, 2), (4, 1)]);
                sp.add(1, 2, &[(1, 2), (2, 6)]);
                sm.add(-1, 1, &[(1, 3)]);
                sm.add(1, 1, &[(2, 5)]);
                sm.add(1, 1, &[(3, 2)]);
                sm.add(1, 2, &[(4, 2)]);
                sm.add(1, 1, &[(1, 1), (2, 3), (4, 1)]);
                sm.add(1, 1, &[(2, 4)]);
                sm.add(1, 1, &[(1, 2), (2, 2)]);
                sm.add(-1, 1, &[(1, 1), (2, 1), (3, 1)]);
                sm.add(-1, 1, &[(2, 2), (4, 1)]);
                sm.add(-1, 2, &[(1, 2), (2, 6)]);
                reduce.push(3);
            }
            _ => {
                sp.add(-1, 1, &[(1, 3)]);
                sp.add(1, 1, &[(2, 5)]);
                sp.add(-1, 1, &[(3, 2)]);
                sp.add(-1, 1, &[(4, 2)]);
                sp.add(-1, 1, &[(5, 2)]);
                sp.add(1, 1, &[(1, 2), (2, 3)]);
                sp.add(1, 1, &[(2, 4)]);
                sp.add(1, 1, &[(3, 1), (1, 1), (2, 2)]);
                sp.add(1, 1, &[(4, 1), (1, 1), (2, 1)]);
                sp.add(1, 1, &[(5, 1), (2, 2)]);
                sm.add(-1, 1, &[(1, 3)]);
                sm.add(1, 1, &[(2, 5)]);
                sm.add(1, 1, &[(3, 2)]);
                sm.add(1, 1, &[(4, 2)]);
                sm.add(1, 1, &[(5, 2)]);
                sm.add(-1, 1, &[(1, 2), (2, 3)]);
                sm.add(1, 1, &[(2, 4)]);
                sm.add(1, 1, &[(3, 1), (1, 1), (2, 2)]);
                sm.add(-1, 1, &[(4, 1), (1, 1), (2, 1)]);
                sm.add(-1, 1, &[(5, 1), (2, 2)]);
                for j in range(6, n) {
                    sp.add(1, 1, &[(u(j), 2)]);
                    sm.add(-1, 1, &[(u(j), 2)]);
                }
            }
        },
    }
    (sp.p, sm.p, reduce)
}

fn special_formula(label: &SingularityLabel) -> (GPoly, Vec<usize>) {
    let n = label.n as i64;
    let k = label.k as i64;
    let sg = label.sign.unwrap_or(1) as i64;
    let mut h = ComplexTerms::new(label.n);
    let u = |j: i64| j as usize;
    let mut reduce = Vec::new();
    match label.series {
        Series::A if k <= n + 2 => {
            h.add(sg, 1, 3 * k, &[(1, (k + 1) as u32)]);
            for j in range(2, n) {
                h.add(-1, 1, 1, &[(u(j), 2)]);
            }
            for j in range(1, k - 2) {
                h.add(1, 1, 3 * k + j + 1, &[(u(j), 1), (1, (k - j) as u32)]);
            }
        }
        Series::A => {
            h.add(sg, 1, 3 * k, &[(1, (k + 1) as u32)]);
            for j in range(2, k - n - 1) {
                h.add(1, 1, 3 * k + j + 1, &[(u(j), 1), (1, (k - j + 1) as u32)]);
            }
            for j in range(1, n) {
                h.add(1, 1, j - n - 1, &[(u(j), 1), (1, (n - j + 2) as u32)]);
            }
            for j in range(2, k - n - 1) {
                h.add(1, 2, 2 * k + 2 * j + 3, &[(1, (2 * k - 2 * j + 2) as u32)]);
                h.add(-1, 2, 1, &[(u(j), 2)]);
                reduce.push(u(j) - 1);
            }
            for j in range(k - n, n) {
                h.add(-1, 1, 1, &[(u(j), 2)]);
            }
        }
        Series::D => {
            h.add(-1, 1, 0, &[(1, 1), (2, 2)]);
            h.add(-1, 1, 1, &[(1, 3)]);
            h.add(-1, 1, 0, &[(2, 1), (1, 3)]);
            h.add(sg, 1, 3 * k + 2, &[(1, (k - 1) as u32)]);
            if k <= n + 3 {
                for j in range(3, k - 3) {
                    h.add(1, 1, 3 * j, &[(u(j), 1), (1, (j + 1) as u32)]);
                }
                for j in range(3, n) {
                    h.add(-1, 1, 1, &[(u(j), 2)]);
                }
            } else {
                for j in range(3, n) {
                    h.add(1, 1, 3 * j, &[(u(j), 1), (1, (j + 1) as u32)]);
                }
                for j in range(3, k - n - 1) {
                    h.add(1, 1, 3 * j + 3 * n + 1, &[(u(j), 1), (1, (j + n - 1) as u32)]);
                    h.add(1, 2, 2 * j + 2 * n + 3, &[(1, (2 * j + 2 * n - 2) as u32)]);
                    h.add(-1, 2, 1, &[(u(j), 2)]);
                    reduce.push(u(j) - 1);
                }
                for j in range(k - n, n) {
                    h.add(-1, 1, 1, &[(u(j), 2)]);
                }
            }
        }
        Series::E => match (k, n) {
            (6, _) => {
                h.add(-1, 1, 0, &[(1, 3)]);
                h.add(sg, 1, 1, &[(2, 4)]);
                h.add(1, 1, 1, &[(3, 2)]);
                h.add(1, 1, 0, &[(1, 2), (2, 2)]);
                h.add(1, 1, 1, &[(2, 2), (1, 1)]);
                h.add(1, 1, 1, &[(3, 1), (2, 2)]);
                for j in range(4, n) {
                    h.add(-1, 1, 1, &[(u(j), 2)]);
                }
            }
            (7, 3) => {
                h.add(-1, 1, 0, &[(1, 3)]);
                h.add(1, 1, 1, &[(1, 1), (2, 3)]);
                h.add(-1, 2, 1, &[(3, 2)]);
                h.add(1, 1, 0, &[(3, 1), (2, 4)]);
                h.add(1, 1, 0, &[(2, 4)]);
                h.add(1, 1, 1, &[(1, 1), (2, 2)]);
                h.add(1, 1, 1, &[(1, 1), (2, 1), (3, 1)]);
                h.add(1, 2, 1, &[(2, 8)]);
                reduce.push(2);
            }
            (7, _) => {
                h.add(-1, 1, 0, &[(1, 3)]);
                h.add(1, 1, 1, &[(1, 1), (2, 3)]);
                h.add(-1, 1, 1, &[(3, 2)]);
                h.add(-1, 1, 1, &[(4, 2)]);
                h.add(1, 1, 1, &[(1, 1), (2, 4)]);
                h.add(1, 1, 0, &[(2, 4)]);
                h.add(1, 1, 1, &[(2, 2), (3, 1)]);
                h.add(1, 1, 1, &[(1, 1), (2, 1), (4, 1)]);
                for j in range(5, n) {
                    h.add(-1, 1, 1, &[(u(j), 2)]);
                }
            }
            (8, 4) => {
                h.add(-1, 1, 0, &[(1, 3)]);
                h.add(1, 1, 0, &[(2, 5)]);
                h.add(-1, 1, 1, &[(3, 2)]);
                h.add(-1, 2, 1, &[(4, 2)]);
                h.add(1, 1, 0, &[(1, 1), (2, 3), (4, 1)]);
                h.add(1, 1, 0, &[(2, 4)]);
                h.add(1, 1, 0, &[(1, 2), (2, 2)]);
                h.add(1, 1, 1, &[(1, 1), (2, 1), (3, 1)]);
                h.add(1, 1, 1, &[(2, 2), (4, 1)]);
                h.add(1, 2, 1, &[(1, 2), (2, 6)]);
                reduce.push(3);
            }
            _ => {
                h.add(-1, 1, 0, &[(1, 3)]);
                h.add(1, 1, 0, &[(2, 5)]);
                h.add(-1, 1, 1, &[(3, 2)]);
                h.add(-1, 1, 1, &[(4, 2)]);
                h.add(-1, 1, 1, &[(5, 2)]);
                h.add(1, 1, 1, &[(1, 2), (2, 3)]);
                h.add(1, 1, 0, &[(2, 4)]);
                h.add(1, 1, 0, &[(1, 1), (2, 2), (3, 1)]);
                h.add(1, 1, 1, &[(1, 1), (2, 1), (4, 1)]);
                h.add(1, 1, 1, &[(2, 2), (5, 1)]);
                for j in range(6, n) {
                    h.add(-1, 1, 1, &[(u(j), 2)]);
                }
            }
        },
    }
    (h.p, reduce)
}

/// The realization of `label`: potentials `S+`, `S-` or a holomorphic `H`.
pub fn catalog_entry(label: &SingularityLabel) -> Result<CatalogEntry> {
    label.check_dimension()?;
    let (formula, reduce) = match label.kind {
        RealizationKind::CenterChord => {
            let (splus, sminus, reduce) = cc_formula(label);
            (CatalogFormula::CenterChord { splus, sminus }, reduce)
        }
        RealizationKind::Special => {
            let (h, reduce) = special_formula(label);
            (CatalogFormula::Special { h }, reduce)
        }
    };
    Ok(CatalogEntry {
        label: label.clone(),
        formula,
        reduce,
    })
}

impl CatalogEntry {
    pub fn generating_function(&self) -> Result<GeneratingFunction> {
        let s0 = match &self.formula {
            CatalogFormula::CenterChord { splus, sminus } => gen_fn_center_chord(splus, sminus)?,
            CatalogFormula::Special { h } => gen_fn_special(h),
        };
        if self.reduce.is_empty() {
            Ok(s0)
        } else {
            reduce_quadratic(&s0, &self.reduce)
        }
    }
}

/// Every label of both catalogs with `n <= max_n`: all admissible `A_k` and
/// `D_k`, and `E6`, `E7`, `E8` at their two smallest dimensions, with both
/// signs wherever the formula has a sign choice.
pub fn catalog_labels(max_n: usize) -> Vec<SingularityLabel> {
    let mut out = Vec::new();
    for kind in [RealizationKind::CenterChord, RealizationKind::Special] {
        for n in 1..=max_n {
            let mut push = |series: Series, k: u32| {
                let base = SingularityLabel {
                    series,
                    k,
                    sign: None,
                    kind,
                    n,
                };
                if base.check_dimension().is_err() {
                    return;
                }
                if base.has_sign_choice() {
                    for s in [1, -1] {
                        out.push(SingularityLabel { sign: Some(s), ..base.clone() });
                    }
                } else {
                    out.push(base);
                }
            };
            for k in 1..(2 * n as u32 + 2) {
                push(Series::A, k);
            }
            for k in 4..(2 * n as u32 + 2) {
                push(Series::D, k);
            }
            if n == 3 || n == 4 {
                push(Series::E, 6);
                push(Series::E, 7);
            }
            if n == 4 || n == 5 {
                push(Series::E, 8);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CatalogReport {
    pub label: SingularityLabel,
    pub mu: Option<usize>,
    pub corank: Option<usize>,
    pub critical_at_origin: bool,
    pub legendrian_stable: Option<bool>,
    pub legendrian_dim: Option<usize>,
    /// Pipeline failure, if any.
    pub error: Option<String>,
    /// The germ `g(kappa)` that was analysed.
    pub germ: Option<QPoly>,
}

impl CatalogReport {
    pub fn mu_ok(&self) -> bool {
        self.mu == Some(self.label.expected_mu())
    }

    pub fn corank_ok(&self) -> bool {
        self.corank == Some(self.label.expected_corank())
    }

    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.critical_at_origin
            && self.mu_ok()
            && self.corank_ok()
            && self.legendrian_stable == Some(true)
    }
}

/// Run the whole pipeline for one label and report every check.
pub fn catalog_verify(label: &SingularityLabel) -> CatalogReport {
    let mut report = CatalogReport {
        label: label.clone(),
        mu: None,
        corank: None,
        critical_at_origin: false,
        legendrian_stable: None,
        legendrian_dim: None,
        error: None,
        germ: None,
    };
    let fam = match catalog_entry(label).and_then(|e| e.generating_function()) {
        Ok(gf) => generating_family(&gf),
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let g = fam.germ();
    let zero = vec![Rational::zero(); g.nvars()];
    report.critical_at_origin = g.constant_term().is_zero() && g.gradient().iter().all(|p| p.eval(&zero).is_zero());
    report.corank = Some(corank(&g));
    match local_algebra(&g) {
        Ok(alg) => report.mu = Some(alg.dim),
        Err(e) => report.error = Some(e.to_string()),
    }
    match arnold_stable(&fam, StabilityMode::Legendrian) {
        Ok(st) => {
            report.legendrian_stable = Some(st.stable);
            report.legendrian_dim = Some(st.quotient_dim);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report.germ = Some(g);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::parse::{parse_gpoly, parse_qpoly};

    fn k(text: &str, nv: usize) -> QPoly {
        parse_qpoly(text, "k", nv).unwrap()
    }

    #[test]
    fn monomial_enumeration_counts() {
        for kv in 1..4 {
            for d in 0..6u32 {
                assert_eq!(monomials_upto(kv, d).len(), binom(d as usize + kv, kv));
            }
        }
        let m = monomials_upto(2, 2);
        assert_eq!(m[0], vec![0, 0]);
        assert!(m.windows(2).all(|w| total_degree(&w[0]) <= total_degree(&w[1])));
    }

    #[test]
    fn milnor_numbers_of_small_germs() {
        let a2 = local_algebra(&k("k1^3", 1)).unwrap();
        assert_eq!(a2.dim, 2);
        assert_eq!(a2.basis, vec![vec![0], vec![1]]);
        assert_eq!(local_algebra(&k("k1^2", 1)).unwrap().dim, 1);
        let two = local_algebra(&k("k1^3 + k2^3", 2)).unwrap();
        assert_eq!(two.dim, 4);
        assert_eq!(two.basis, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn non_isolated_is_reported() {
        assert!(matches!(local_algebra(&k("k1^3", 2)), Err(IasError::NonIsolated { .. })));
    }

    #[test]
    fn normal_form_uses_the_ideal() {
        let alg = local_algebra(&k("k1^3 + k2^3", 2)).unwrap();
        // k1^2 is in the ideal <3 k1^2, 3 k2^2>
        assert!(alg.normal_form(&k("k1^2 + k1 k2", 2)) == vec![int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn center_chord_generating_function_example() {
        let sp = parse_qpoly("u1^2", "u", 1).unwrap();
        let sm = parse_qpoly("-u1^2", "u", 1).unwrap();
        let gf = gen_fn_center_chord(&sp, &sm).unwrap();
        assert_eq!(gf.s, parse_qpoly("u1^2 + u2^2", "u", 2).unwrap());
        let zero = gen_fn_center_chord(&QPoly::zero(1), &QPoly::zero(1)).unwrap();
        assert!(zero.s.is_zero());
    }

    #[test]
    fn special_generating_function_examples() {
        let gf = gen_fn_special(&parse_gpoly("z1^3", "z", 1).unwrap());
        assert_eq!(gf.s, parse_qpoly("3 u1^2 u2 - u2^3", "u", 2).unwrap());
        let gf = gen_fn_special(&parse_gpoly("i z1", "z", 1).unwrap());
        assert_eq!(gf.s, QPoly::var(2, 0));
    }

    #[test]
    fn quadratic_reduction_example() {
        // n = 2, S0 = y1^2/2 + y1 x1 + x1^3 in (x1, x2, y1, y2)
        let s = parse_qpoly("1/2 u3^2 + u3 u1 + u1^3", "u", 4).unwrap();
        let s0 = GeneratingFunction {
            s,
            split: IndexSplit::unreduced(2),
            eliminated: vec![],
        };
        let s1 = reduce_quadratic(&s0, &[0]).unwrap();
        // slot 2 now holds x3
        assert_eq!(s1.s, parse_qpoly("-1/2 (u3 - u1)^2 + u1^3", "u", 4).unwrap());
        let bad = GeneratingFunction {
            s: parse_qpoly("u3^3", "u", 4).unwrap(),
            ..s0.clone()
        };
        assert!(matches!(reduce_quadratic(&bad, &[0]), Err(IasError::NotQuadraticShape { index: 1, .. })));
        let cross = GeneratingFunction {
            s: parse_qpoly("u3^2 + u4^2 + u3 u4", "u", 4).unwrap(),
            ..s0
        };
        assert!(reduce_quadratic(&cross, &[0, 1]).is_err());
    }

    #[test]
    fn family_layout() {
        // n = 1, S0 = x^2 + y^2: G = x1^2 + k^2 - x2 k
        let gf = GeneratingFunction {
            s: parse_qpoly("u1^2 + u2^2", "u", 2).unwrap(),
            split: IndexSplit::unreduced(1),
            eliminated: vec![],
        };
        let fam = generating_family(&gf);
        assert_eq!(fam.g, parse_qpoly("u1^2 + u3^2 - u2 u3", "u", 3).unwrap());
        assert_eq!(fam.germ(), k("k1^2", 1));
        assert_eq!(fam.x_derivatives_at_origin(), vec![QPoly::zero(1), -&k("k1", 1)]);
    }

    #[test]
    fn a2_is_stable_in_both_modes() {
        for kind in [RealizationKind::CenterChord, RealizationKind::Special] {
            let label = SingularityLabel::parse("A2+", 1, kind).unwrap();
            let fam = generating_family(&catalog_entry(&label).unwrap().generating_function().unwrap());
            assert!(arnold_stable(&fam, StabilityMode::Lagrangian).unwrap().stable);
            assert!(arnold_stable(&fam, StabilityMode::Legendrian).unwrap().stable);
        }
    }

    #[test]
    fn family_without_x_dependence_is_unstable() {
        let g = parse_qpoly("u3^3", "u", 3).unwrap();
        let fam = GeneratingFamily {
            g,
            split: IndexSplit::unreduced(1),
        };
        let st = arnold_stable(&fam, StabilityMode::Lagrangian).unwrap();
        assert!(!st.stable);
        assert_eq!(st.rank, 1);
    }

    #[test]
    fn label_parsing_and_constraints() {
        let l = SingularityLabel::parse("D5-", 2, RealizationKind::CenterChord).unwrap();
        assert_eq!((l.series, l.k, l.sign), (Series::D, 5, Some(-1)));
        assert_eq!(l.name(), "D5-");
        let e7 = SingularityLabel::parse("E7", 3, RealizationKind::Special).unwrap();
        assert_eq!(e7.sign, None);
        // sign on a sign-free formula is dropped
        let a5 = SingularityLabel::parse("A5+", 2, RealizationKind::CenterChord).unwrap();
        assert_eq!(a5.sign, None);
        assert!(matches!(
            SingularityLabel::parse("E6", 2, RealizationKind::Special),
            Err(IasError::DimensionConstraint { .. })
        ));
        assert!(SingularityLabel::parse("D4", 1, RealizationKind::Special).is_err());
        assert!(SingularityLabel::parse("A6", 2, RealizationKind::Special).is_err());
        assert!(SingularityLabel::parse("X3", 2, RealizationKind::Special).is_err());
    }

    #[test]
    fn e8_special_formula_matches_text() {
        let label = SingularityLabel::parse("E8", 4, RealizationKind::Special).unwrap();
        let CatalogFormula::Special { h } = catalog_entry(&label).unwrap().formula else {
            panic!()
        };
        let text = "-z1^3 + z2^5 - i z3^2 - 1/2 i z4^2 + z1 z2^3 z4 + z2^4 + z1^2 z2^2 + i z1 z2 z3 + i z2^2 z4 + 1/2 i z1^2 z2^6";
        assert_eq!(h, parse_gpoly(text, "z", 4).unwrap());
    }

    #[test]
    fn a_branch_one_cc_formula_for_a3() {
        // k = 3, n = 1, sign +: S+ = v^4 - v^3, S- = -u^4 + u^3
        let label = SingularityLabel::parse("A3+", 1, RealizationKind::CenterChord).unwrap();
        let CatalogFormula::CenterChord { splus, sminus } = catalog_entry(&label).unwrap().formula else {
            panic!()
        };
        assert_eq!(splus, parse_qpoly("u1^4 - u1^3", "u", 1).unwrap());
        assert_eq!(sminus, parse_qpoly("-u1^4 + u1^3", "u", 1).unwrap());
    }

    #[test]
    fn reduction_preserves_milnor_number() {
        for (name, n, kind) in [
            ("A6", 3, RealizationKind::CenterChord),
            ("A7+", 3, RealizationKind::Special),
            ("E7", 3, RealizationKind::Special),
            ("D7", 3, RealizationKind::CenterChord),
        ] {
            let label = SingularityLabel::parse(name, n, kind).unwrap();
            let entry = catalog_entry(&label).unwrap();
            assert!(!entry.reduce.is_empty(), "{name}");
            let reduced = generating_family(&entry.generating_function().unwrap());
            let s0 = match &entry.formula {
                CatalogFormula::CenterChord { splus, sminus } => gen_fn_center_chord(splus, sminus).unwrap(),
                CatalogFormula::Special { h } => gen_fn_special(h),
            };
            let full = generating_family(&s0);
            let a = local_algebra(&reduced.germ()).unwrap().dim;
            let b = local_algebra(&full.germ()).unwrap().dim;
            assert_eq!(a, b, "{name}");
            let sa = arnold_stable(&reduced, StabilityMode::Legendrian).unwrap().stable;
            let sb = arnold_stable(&full, StabilityMode::Legendrian).unwrap().stable;
            assert_eq!(sa, sb, "{name}");
        }
    }

    #[test]
    fn unreduced_split_has_all_kappas() {
        let split = IndexSplit::new(3, vec![2, 1]).unwrap();
        assert_eq!(split.hat, vec![1, 2]);
        assert_eq!(split.check(), vec![0]);
        assert!(IndexSplit::new(2, vec![0, 1]).is_err());
        let _ = rat(1, 2);
    }
}
