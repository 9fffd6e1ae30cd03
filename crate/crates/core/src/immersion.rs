//! Immersions `r -> (x(r), f(r))` transversal to `xi = (0, 1)` together
//! with the companion field `y = Y_F(x)`, and their pointwise invariants.
//!
//! Everything here is generic over the scalar: exact rationals for
//! polynomial charts, `f64` for charts with black-box components.

use num_traits::Zero;

use crate::domain::{render_point, DomainBox};
use crate::error::{IasError, Result};
use crate::jets::{jacobian, jacobian_derivative, map_jets, second_partial, Jet2, JetEval, ScalarField};
use crate::linalg::{Matrix, Rational, Scalar};
use crate::poly::{poly_det, GPoly, QPoly};
use crate::symplectic::{hamiltonian_vector, omega_eval};

/// Residual tolerance on the float path, relative to the data scale.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    CenterChord,
    Special,
    Direct,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::CenterChord => "center-chord",
            Provenance::Special => "special",
            Provenance::Direct => "direct",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "center-chord" => Ok(Provenance::CenterChord),
            "special" => Ok(Provenance::Special),
            "direct" => Ok(Provenance::Direct),
            other => Err(IasError::InvalidParameter(format!("unknown provenance '{other}'"))),
        }
    }
}

/// The data a chart was built from, kept so families can be rebuilt.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartSource {
    /// Parametrized Lagrangian submanifolds of `R^{2n}`, each with `2n`
    /// components in `n` variables.
    CenterChord { beta: Vec<QPoly>, gamma: Vec<QPoly> },
    Special { h: GPoly },
}

#[derive(Clone, Debug)]
pub struct ImmersionChart {
    pub n: usize,
    pub x: Vec<ScalarField>,
    pub y: Vec<ScalarField>,
    pub f: ScalarField,
    pub domain: DomainBox,
    pub provenance: Provenance,
    pub source: Option<ChartSource>,
    /// Construction notes, e.g. singular points met while building.
    pub warnings: Vec<String>,
}

impl ImmersionChart {
    pub fn new(
        n: usize,
        x: Vec<ScalarField>,
        y: Vec<ScalarField>,
        f: ScalarField,
        domain: DomainBox,
        provenance: Provenance,
    ) -> Result<Self> {
        if n == 0 {
            return Err(IasError::InvalidParameter("n must be at least 1".into()));
        }
        let d = 2 * n;
        for (len, what) in [(x.len(), d), (y.len(), d), (domain.dim(), d)] {
            if len != what {
                return Err(IasError::DimensionMismatch { expected: what, got: len });
            }
        }
        for field in x.iter().chain(&y).chain(std::iter::once(&f)) {
            if field.nvars() != d {
                return Err(IasError::DimensionMismatch {
                    expected: d,
                    got: field.nvars(),
                });
            }
        }
        Ok(ImmersionChart {
            n,
            x,
            y,
            f,
            domain,
            provenance,
            source: None,
            warnings: Vec::new(),
        })
    }

    pub fn from_polys(
        n: usize,
        x: Vec<QPoly>,
        y: Vec<QPoly>,
        f: QPoly,
        domain: DomainBox,
        provenance: Provenance,
    ) -> Result<Self> {
        Self::new(
            n,
            x.into_iter().map(ScalarField::Poly).collect(),
            y.into_iter().map(ScalarField::Poly).collect(),
            ScalarField::Poly(f),
            domain,
            provenance,
        )
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn is_exact(&self) -> bool {
        self.x.iter().chain(&self.y).all(ScalarField::is_exact) && self.f.is_exact()
    }

    pub fn x_polys(&self) -> Option<Vec<QPoly>> {
        self.x.iter().map(|f| f.as_poly().cloned()).collect()
    }

    pub fn y_polys(&self) -> Option<Vec<QPoly>> {
        self.y.iter().map(|f| f.as_poly().cloned()).collect()
    }

    pub fn f_poly(&self) -> Option<QPoly> {
        self.f.as_poly().cloned()
    }

    fn polys_or_err(&self) -> Result<(Vec<QPoly>, Vec<QPoly>, QPoly)> {
        match (self.x_polys(), self.y_polys(), self.f_poly()) {
            (Some(x), Some(y), Some(f)) => Ok((x, y, f)),
            _ => Err(IasError::NotExact),
        }
    }

    pub fn jets<T: Scalar>(&self, r: &[T]) -> Result<ChartJets<T>>
    where
        ScalarField: JetEval<T>,
    {
        if r.len() != self.dim() {
            return Err(IasError::DimensionMismatch {
                expected: self.dim(),
                got: r.len(),
            });
        }
        Ok(ChartJets {
            point: r.to_vec(),
            x: map_jets(&self.x, r)?,
            y: map_jets(&self.y, r)?,
            f: self.f.jet(r)?,
        })
    }

    /// The same hypersurface with the opposite transversal orientation:
    /// `(x, y, f) -> (x, -y, -f)`. This flips the sign of the metric.
    pub fn reflect(&self) -> Result<Self> {
        let (x, y, f) = self.polys_or_err()?;
        let mut out = Self::from_polys(
            self.n,
            x,
            y.iter().map(|p| -p).collect(),
            -f,
            self.domain.clone(),
            self.provenance,
        )?;
        out.source = self.source.clone();
        Ok(out)
    }

    /// Residual polynomials `df(e_i) - w(x_{r_i}, y)`; all zero iff `f` is a
    /// potential for the chart.
    pub fn defin1_symbolic(&self) -> Result<Vec<QPoly>> {
        let (x, y, f) = self.polys_or_err()?;
        Ok((0..self.dim())
            .map(|i| {
                let xi: Vec<QPoly> = x.iter().map(|p| p.partial(i)).collect();
                &f.partial(i) - &omega_poly(&xi, &y)
            })
            .collect())
    }

    /// Symbolic Jacobians `(Dx, Dy)` as polynomial matrices.
    pub fn jacobians_symbolic(&self) -> Result<(Vec<Vec<QPoly>>, Vec<Vec<QPoly>>)> {
        let (x, y, _) = self.polys_or_err()?;
        let jac = |v: &[QPoly]| -> Vec<Vec<QPoly>> {
            v.iter().map(|p| (0..self.dim()).map(|j| p.partial(j)).collect()).collect()
        };
        Ok((jac(&x), jac(&y)))
    }

    /// `h_ij = w(x_{r_i}, y_{r_j})` as polynomials.
    pub fn metric_symbolic(&self) -> Result<Vec<Vec<QPoly>>> {
        let (dx, dy) = self.jacobians_symbolic()?;
        let d = self.dim();
        let col = |m: &Vec<Vec<QPoly>>, j: usize| -> Vec<QPoly> { m.iter().map(|row| row[j].clone()).collect() };
        Ok((0..d)
            .map(|i| (0..d).map(|j| omega_poly(&col(&dx, i), &col(&dy, j))).collect())
            .collect())
    }
}

/// `w(u, v)` for polynomial vectors.
pub fn omega_poly(u: &[QPoly], v: &[QPoly]) -> QPoly {
    let n = u.len() / 2;
    let nv = u[0].nvars();
    let mut acc = QPoly::zero(nv);
    for i in 0..n {
        acc = &acc + &(&u[i] * &v[i + n]);
        acc = &acc - &(&u[i + n] * &v[i]);
    }
    acc
}

/// Order-2 jets of `x`, `y`, `f` at one parameter point.
#[derive(Clone, Debug)]
pub struct ChartJets<T> {
    pub point: Vec<T>,
    pub x: Vec<Jet2<T>>,
    pub y: Vec<Jet2<T>>,
    pub f: Jet2<T>,
}

impl<T: Scalar> ChartJets<T> {
    pub fn dx(&self) -> Matrix<T> {
        jacobian(&self.x)
    }

    pub fn dy(&self) -> Matrix<T> {
        jacobian(&self.y)
    }

    pub fn x_value(&self) -> Vec<T> {
        self.x.iter().map(|j| j.value.clone()).collect()
    }

    pub fn y_value(&self) -> Vec<T> {
        self.y.iter().map(|j| j.value.clone()).collect()
    }

    fn invert(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        m.inverse().ok_or_else(|| IasError::SingularJacobian {
            point: render_point(&self.point),
        })
    }

    pub fn dx_inv(&self) -> Result<Matrix<T>> {
        self.invert(&self.dx())
    }

    pub fn dy_inv(&self) -> Result<Matrix<T>> {
        self.invert(&self.dy())
    }
}

pub fn negligible<T: Scalar>(v: &T, scale: f64) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        v.abs_f64() <= FLOAT_TOL * (1.0 + scale)
    }
}

/// Is every entry zero (exactly, or within the float tolerance)?
pub fn matrix_vanishes<T: Scalar>(m: &Matrix<T>, scale: f64) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| negligible(&m[(r, c)], scale)))
}

/// `A(r) = Dx(r)^{-1} Dy(r)`.
pub fn compute_a<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Matrix<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    Ok(&j.dx_inv()? * &j.dy())
}

/// `B(r) = Dx A Dx^{-1}`, the shape operator in `x` coordinates.
pub fn shape_b<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Matrix<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let inv = j.dx_inv()?;
    Ok(&j.dy() * &inv)
}

fn metric_from_jets<T: Scalar>(j: &ChartJets<T>) -> Matrix<T> {
    let dx = j.dx();
    let dy = j.dy();
    let d = dx.cols();
    Matrix::from_fn(d, d, |a, b| omega_eval(&dx.col(a), &dy.col(b)))
}

/// `h_ij = w(x_{r_i}, y_{r_j})` without the symmetry check.
pub fn metric_unchecked<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Matrix<T>>
where
    ScalarField: JetEval<T>,
{
    Ok(metric_from_jets(&chart.jets(r)?))
}

/// The Blaschke metric; fails if it is not symmetric.
pub fn blaschke_metric<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Matrix<T>>
where
    ScalarField: JetEval<T>,
{
    let h = metric_unchecked(chart, r)?;
    let skew = &h - &h.transpose();
    if !matrix_vanishes(&skew, h.max_abs()) {
        return Err(IasError::AsymmetricMetric {
            point: render_point(r),
            residual: format!("{:e}", skew.max_abs()),
        });
    }
    Ok(h)
}

/// Both sides of `det h = det(Dx)^2 det A`.
pub fn det_h_identity<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<(T, T)>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let a = &j.dx_inv()? * &j.dy();
    let lhs = metric_from_jets(&j).det();
    let dd = j.dx().det();
    Ok((lhs, dd.clone() * dd * a.det()))
}

/// `df(e_i) - w(x_{r_i}, y)` at `r`.
pub fn defin1_residual<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Vec<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let dx = j.dx();
    let y = j.y_value();
    Ok((0..chart.dim())
        .map(|i| j.f.grad[i].clone() - omega_eval(&dx.col(i), &y))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstancyCheck {
    pub constant: bool,
    pub c: f64,
    /// Present when decided symbolically.
    pub c_exact: Option<Rational>,
    /// Largest deviation from `c` over the samples (0 when symbolic).
    pub max_deviation: f64,
}

/// Is `det A` constant on the chart?
///
/// Polynomial charts are decided symbolically: `det Dy - c det Dx` must be
/// the zero polynomial. Black-box charts are sampled.
pub fn is_ias(chart: &ImmersionChart, samples: &[Vec<Rational>]) -> Result<ConstancyCheck> {
    if chart.is_exact() {
        for s in samples {
            let j = chart.jets::<Rational>(s)?;
            if j.dx().det().is_zero() {
                return Err(IasError::SingularJacobian { point: render_point(s) });
            }
        }
        let (dx, dy) = chart.jacobians_symbolic()?;
        let d = chart.dim();
        let p = poly_det(&dx, d);
        let q = poly_det(&dy, d);
        return Ok(ratio_constancy(&p, &q));
    }
    let mut c: Option<f64> = None;
    let mut dev: f64 = 0.0;
    for s in samples {
        let pf: Vec<f64> = s.iter().map(|v| v.to_f64()).collect();
        let det = compute_a::<f64>(chart, &pf)?.det();
        match c {
            None => c = Some(det),
            Some(c0) => dev = dev.max((det - c0).abs()),
        }
    }
    let c = c.ok_or_else(|| IasError::InvalidParameter("no sample points".into()))?;
    Ok(ConstancyCheck {
        constant: dev < FLOAT_TOL * (1.0 + c.abs()),
        c,
        c_exact: None,
        max_deviation: dev,
    })
}

/// Decide whether `q / p` is a constant polynomial ratio.
fn ratio_constancy(p: &QPoly, q: &QPoly) -> ConstancyCheck {
    let Some((m, pc)) = p.terms().next() else {
        return ConstancyCheck {
            constant: false,
            c: f64::NAN,
            c_exact: None,
            max_deviation: f64::INFINITY,
        };
    };
    let c = q.coeff(m) / pc;
    let rest = q - &p.scale(&c);
    ConstancyCheck {
        constant: rest.is_zero(),
        c: c.to_f64(),
        c_exact: Some(c),
        max_deviation: 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MongeAmpereCheck {
    pub constant: bool,
    pub c: f64,
    pub c_exact: Option<Rational>,
    /// `det D^2F` and `det DY_F` agree.
    pub agree: bool,
    pub hessian_det: Option<QPoly>,
}

/// Checks `det D^2 F = c` and, independently, `det DY_F = c`.
pub fn monge_ampere_check(f: &ScalarField, n: usize, samples: &[Vec<Rational>]) -> Result<MongeAmpereCheck> {
    if f.nvars() != 2 * n {
        return Err(IasError::DimensionMismatch {
            expected: 2 * n,
            got: f.nvars(),
        });
    }
    if let Some(p) = f.as_poly() {
        let hess = p.hessian();
        let hd = poly_det(&hess, 2 * n);
        let yf = crate::symplectic::hamiltonian_field(p, n);
        let dyf: Vec<Vec<QPoly>> = yf.iter().map(|c| (0..2 * n).map(|j| c.partial(j)).collect()).collect();
        let yd = poly_det(&dyf, 2 * n);
        let constant = hd.is_constant();
        let c = hd.constant_term();
        return Ok(MongeAmpereCheck {
            constant,
            c: c.to_f64(),
            c_exact: constant.then_some(c),
            agree: hd == yd,
            hessian_det: Some(hd),
        });
    }
    let mut values = Vec::new();
    let mut agree = true;
    for s in samples {
        let pf: Vec<f64> = s.iter().map(|v| v.to_f64()).collect();
        let j = f.jet_f64(&pf)?;
        let hd = j.hessian().det();
        let yd = hamiltonian_jacobian(&j.hessian()).det();
        agree &= (hd - yd).abs() <= FLOAT_TOL * (1.0 + hd.abs());
        values.push(hd);
    }
    let c = *values.first().ok_or_else(|| IasError::InvalidParameter("no sample points".into()))?;
    let dev = values.iter().fold(0.0f64, |m, v| m.max((v - c).abs()));
    Ok(MongeAmpereCheck {
        constant: dev <= FLOAT_TOL * (1.0 + c.abs()),
        c,
        c_exact: None,
        agree,
        hessian_det: None,
    })
}

/// `DY_F` from the Hessian of `F`: rows are `(-F_{x2 .}, F_{x1 .})`.
pub fn hamiltonian_jacobian<T: Scalar>(hess: &Matrix<T>) -> Matrix<T> {
    let d = hess.rows();
    let n = d / 2;
    Matrix::from_fn(d, d, |i, j| {
        if i < n {
            -hess[(i + n, j)].clone()
        } else {
            hess[(i - n, j)].clone()
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartMongeAmpere<T> {
    /// `det D^2F` at `x(r)`, with `F` recovered from `f = F o x`.
    pub hessian_det: T,
    /// `det DY_F = det(Dy Dx^{-1})` at `x(r)`.
    pub dyf_det: T,
    /// Largest entry of `y - Y_F(x)`.
    pub companion_residual: f64,
}

/// Pointwise Monge-Ampere data for a chart whose `F` is only known through
/// `f = F o x`: `grad F o x = Dx^{-T} grad f` and
/// `D^2F o x = D_r(grad F o x) Dx^{-1}`.
pub fn chart_monge_ampere<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<ChartMongeAmpere<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let d = chart.dim();
    let inv = j.dx_inv()?;
    let inv_t = inv.transpose();
    let g = inv_t.mul_vec(&j.f.grad);
    let mut dg = Matrix::<T>::zeros(d, d);
    for k in 0..d {
        let dk = jacobian_derivative(&j.x, k);
        let first = inv_t.mul_vec(&dk.transpose().mul_vec(&g));
        let dkgrad: Vec<T> = (0..d).map(|i| j.f.hess_at(i, k).clone()).collect();
        let second = inv_t.mul_vec(&dkgrad);
        for i in 0..d {
            dg[(i, k)] = second[i].clone() - first[i].clone();
        }
    }
    let hess = &dg * &inv;
    let dyf = &j.dy() * &inv;
    let yf = hamiltonian_vector(&g);
    let resid = j
        .y_value()
        .iter()
        .zip(&yf)
        .fold(0.0f64, |m, (a, b)| m.max((a.clone() - b.clone()).abs_f64()));
    Ok(ChartMongeAmpere {
        hessian_det: hess.det(),
        dyf_det: dyf.det(),
        companion_residual: resid,
    })
}

/// Dense `(1,2)`-tensor with `d^3` entries indexed `[a][b][c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    pub d: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Tensor3<T> {
    pub fn zeros(d: usize) -> Self {
        Tensor3 {
            d,
            data: vec![T::zero(); d * d * d],
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &T {
        &self.data[(a * self.d + b) * self.d + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: T) {
        let d = self.d;
        self.data[(a * d + b) * d + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs_f64()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn vanishes(&self, scale: f64) -> bool {
        self.data.iter().all(|v| negligible(v, scale))
    }
}

/// Christoffel symbols `Gamma^l_{ij}` stored as `[l][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData<T> {
    pub gamma: Tensor3<T>,
    pub gamma_bar: Tensor3<T>,
    pub gamma_hat: Tensor3<T>,
    pub h: Matrix<T>,
}

fn symbols_from<T: Scalar>(jets: &[Jet2<T>], inv: &Matrix<T>) -> Tensor3<T> {
    let d = inv.rows();
    let mut g = Tensor3::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let sol = inv.mul_vec(&second_partial(jets, i, j));
            for (l, v) in sol.into_iter().enumerate() {
                g.set(l, i, j, v);
            }
        }
    }
    g
}

/// Solves `x_{r_i r_j} = Gamma^k_{ij} x_{r_k}` and the dual system in `y`.
pub fn christoffels<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<ConnectionData<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    connection_from_jets(&j)
}

fn connection_from_jets<T: Scalar>(j: &ChartJets<T>) -> Result<ConnectionData<T>> {
    let gamma = symbols_from(&j.x, &j.dx_inv()?);
    let gamma_bar = symbols_from(&j.y, &j.dy_inv()?);
    let half = T::one() / T::from_i64(2);
    let gamma_hat = Tensor3 {
        d: gamma.d,
        data: gamma
            .data
            .iter()
            .zip(&gamma_bar.data)
            .map(|(a, b)| (a.clone() + b.clone()) * half.clone())
            .collect(),
    };
    Ok(ConnectionData {
        gamma,
        gamma_bar,
        gamma_hat,
        h: metric_from_jets(j),
    })
}

/// `A` and its partials `d_k A = Dx^{-1}(d_k Dy - d_k Dx A)`.
fn a_and_partials<T: Scalar>(j: &ChartJets<T>) -> Result<(Matrix<T>, Vec<Matrix<T>>)> {
    let inv = j.dx_inv()?;
    let a = &inv * &j.dy();
    let d = a.rows();
    let da = (0..d)
        .map(|k| {
            let ddy = jacobian_derivative(&j.y, k);
            let ddx = jacobian_derivative(&j.x, k);
            &inv * &(&ddy - &(&ddx * &a))
        })
        .collect();
    Ok((a, da))
}

/// Residuals `sum_l Gb^l_{ik} a_{sl} - sum_j a_{ji} G^s_{jk} - d a_{si}/dr_k`
/// indexed `[s][i][k]`.
pub fn dual_connection_identity<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Tensor3<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let conn = connection_from_jets(&j)?;
    let (a, da) = a_and_partials(&j)?;
    let d = a.rows();
    let mut out = Tensor3::zeros(d);
    for s in 0..d {
        for i in 0..d {
            for k in 0..d {
                let mut v = -da[k][(s, i)].clone();
                for l in 0..d {
                    v = v + conn.gamma_bar.get(l, i, k).clone() * a[(s, l)].clone();
                }
                for jj in 0..d {
                    v = v - a[(jj, i)].clone() * conn.gamma.get(s, jj, k).clone();
                }
                out.set(s, i, k, v);
            }
        }
    }
    Ok(out)
}

/// Components `((nabla^_k A) e_i)^l` of the covariant derivative of `A`
/// for the metric connection, indexed `[l][i][k]`.
pub fn nabla_hat_a<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<Tensor3<T>>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let conn = connection_from_jets(&j)?;
    let (a, da) = a_and_partials(&j)?;
    let d = a.rows();
    let g = &conn.gamma_hat;
    let mut out = Tensor3::zeros(d);
    for l in 0..d {
        for i in 0..d {
            for k in 0..d {
                let mut v = da[k][(l, i)].clone();
                for s in 0..d {
                    v = v + a[(s, i)].clone() * g.get(l, s, k).clone();
                }
                for jj in 0..d {
                    v = v - a[(l, jj)].clone() * g.get(jj, i, k).clone();
                }
                out.set(l, i, k, v);
            }
        }
    }
    Ok(out)
}

/// Line integral of the 1-form `sum alpha_i du_i` along the segment from
/// `start` to `end`, both given as polynomial points in the chart ring.
pub fn integrate_along_segment(alpha: &[QPoly], start: &[QPoly], end: &[QPoly]) -> QPoly {
    let m = alpha.len();
    let nv = alpha[0].nvars();
    let tau = nv;
    let lift = |p: &QPoly| p.relabel(nv + 1, &(0..nv).collect::<Vec<_>>());
    let t = QPoly::var(nv + 1, tau);
    let path: Vec<QPoly> = (0..m)
        .map(|i| {
            let a = lift(&start[i]);
            let b = lift(&end[i]);
            &a + &(&t * &(&b - &a))
        })
        .collect();
    let mut integrand = QPoly::zero(nv + 1);
    for i in 0..m {
        let along = alpha[i].compose(&path);
        let vel = lift(&(&end[i] - &start[i]));
        integrand = &integrand + &(&along * &vel);
    }
    let anti = integrand.integrate(tau);
    let one = anti.substitute_constants(&[(tau, Rational::from_i64(1))]);
    let zero = anti.substitute_constants(&[(tau, Rational::zero())]);
    let mut map: Vec<usize> = (0..nv).collect();
    map.push(0);
    (&one - &zero).relabel(nv, &map)
}

/// The 1-form `u -> w(Dx u, y)` as coefficient polynomials.
pub fn potential_form(x: &[QPoly], y: &[QPoly]) -> Vec<QPoly> {
    let d = x.len();
    (0..d)
        .map(|i| {
            let xi: Vec<QPoly> = x.iter().map(|p| p.partial(i)).collect();
            omega_poly(&xi, y)
        })
        .collect()
}

/// `f` with `df(u) = w(Dx u, y)` and `f(basepoint) = 0`, integrated along
/// straight segments from the basepoint.
pub fn potential_integrate(x: &[QPoly], y: &[QPoly], basepoint: &[Rational]) -> Result<QPoly> {
    let d = x.len();
    if y.len() != d || basepoint.len() != d {
        return Err(IasError::DimensionMismatch {
            expected: d,
            got: y.len().min(basepoint.len()),
        });
    }
    let alpha = potential_form(x, y);
    for i in 0..d {
        for k in i + 1..d {
            let curl = &alpha[i].partial(k) - &alpha[k].partial(i);
            if !curl.is_zero() {
                return Err(IasError::NonClosedForm {
                    detail: format!("d/dr{} of coefficient {} differs from d/dr{} of coefficient {}", k + 1, i + 1, i + 1, k + 1),
                });
            }
        }
    }
    let nv = x[0].nvars();
    let start: Vec<QPoly> = basepoint.iter().map(|b| QPoly::constant(nv, b.clone())).collect();
    let end: Vec<QPoly> = (0..d).map(|i| QPoly::var(nv, i)).collect();
    Ok(integrate_along_segment(&alpha, &start, &end))
}

/// The dual immersion, oriented so its metric equals the original one:
/// `x' = y`, `y' = -x`, `f' = -g` with `dg(u) = w(Dy u, x)`.
///
/// Taking `(y, x, g)` literally gives the metric `-h`; that is the same
/// hypersurface seen with the opposite transversal orientation.
pub fn dual_immersion(chart: &ImmersionChart) -> Result<ImmersionChart> {
    let (x, y, _) = chart.polys_or_err()?;
    let (_, dy) = chart.jacobians_symbolic()?;
    if poly_det(&dy, chart.dim()).is_zero() {
        return Err(IasError::SingularJacobian {
            point: "every point (det Dy vanishes identically)".into(),
        });
    }
    let nx = y.clone();
    let ny: Vec<QPoly> = x.iter().map(|p| -p).collect();
    let nf = potential_integrate(&nx, &ny, &chart.domain.center())?;
    let mut out = ImmersionChart::from_polys(chart.n, nx, ny, nf, chart.domain.clone(), Provenance::Direct)?;
    out.warnings.push("dual immersion".into());
    Ok(out)
}

/// Grid points on or next to the singular locus `det Dx = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub grid: Vec<Vec<Rational>>,
    /// Indices into `grid`.
    pub flagged: Vec<usize>,
}

impl SingularLocus {
    pub fn points(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.flagged.iter().map(|&i| &self.grid[i])
    }
}

/// Flags grid points where `det Dx` vanishes, and the endpoint of smaller
/// `|det Dx|` on every grid edge along which `det Dx` changes sign.
pub fn singular_locus_sample(chart: &ImmersionChart, counts: &[usize], tol: f64) -> Result<SingularLocus> {
    let counts = chart.domain.expand_counts(counts)?;
    let grid = chart.domain.grid(&counts)?;
    let dets: Vec<f64>;
    let mut exact_zero = vec![false; grid.len()];
    if chart.is_exact() {
        let (dx, _) = chart.jacobians_symbolic()?;
        let p = poly_det(&dx, chart.dim());
        let vals: Vec<Rational> = grid.iter().map(|g| p.eval(g)).collect();
        for (k, v) in vals.iter().enumerate() {
            exact_zero[k] = v.is_zero();
        }
        dets = vals.iter().map(|v| v.to_f64()).collect();
    } else {
        dets = grid
            .iter()
            .map(|g| {
                let pf: Vec<f64> = g.iter().map(|v| v.to_f64()).collect();
                chart.jets::<f64>(&pf).map(|j| j.dx().det())
            })
            .collect::<Result<_>>()?;
        for (k, v) in dets.iter().enumerate() {
            exact_zero[k] = v.abs() < tol;
        }
    }
    let mut flagged = vec![false; grid.len()];
    let d = counts.len();
    let mut strides = vec![1usize; d];
    for a in (0..d.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * counts[a + 1];
    }
    for (k, z) in exact_zero.iter().enumerate() {
        if *z {
            flagged[k] = true;
        }
    }
    for k in 0..grid.len() {
        for a in 0..d {
            let pos = (k / strides[a]) % counts[a];
            if pos + 1 == counts[a] {
                continue;
            }
            let q = k + strides[a];
            if exact_zero[k] || exact_zero[q] {
                continue;
            }
            if dets[k].signum() != dets[q].signum() {
                let pick = if dets[k].abs() <= dets[q].abs() { k } else { q };
                flagged[pick] = true;
            }
        }
    }
    Ok(SingularLocus {
        grid,
        flagged: flagged.iter().enumerate().filter(|(_, f)| **f).map(|(k, _)| k).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::symplectic::{hamiltonian_field, structure_matrix, StructureKind};

    fn var(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    /// `x = id`, `y = Y_F`, `f = F`.
    fn graph_chart(f: QPoly, n: usize) -> ImmersionChart {
        let x: Vec<QPoly> = (0..2 * n).map(|i| var(2 * n, i)).collect();
        let y = hamiltonian_field(&f, n);
        ImmersionChart::from_polys(n, x, y, f, DomainBox::cube(2 * n, int(1)), Provenance::Direct).unwrap()
    }

    #[test]
    fn metric_of_product_graph() {
        // F = x1 x2: Y_F = (-x1, x2), DY_F = diag(-1, 1)
        let c = graph_chart(&var(2, 0) * &var(2, 1), 1);
        let r = vec![rat(1, 3), rat(-2, 5)];
        let h = blaschke_metric(&c, &r).unwrap();
        let a = compute_a(&c, &r).unwrap();
        let expected = Matrix::from_fn(2, 2, |i, j| {
            let ei: Vec<Rational> = (0..2).map(|k| if k == i { int(1) } else { int(0) }).collect();
            omega_eval(&ei, &a.col(j))
        });
        assert_eq!(h, expected);
        assert_eq!(h, Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
        assert_eq!(a, structure_matrix(StructureKind::K, 1));
    }

    #[test]
    fn non_companion_y_has_non_constant_det_a() {
        // x = id, y = (r1^2, r2): det A = 2 r1
        let x = vec![var(2, 0), var(2, 1)];
        let y = vec![var(2, 0).pow(2), var(2, 1)];
        let c = ImmersionChart::from_polys(1, x, y, QPoly::zero(2), DomainBox::cube(2, int(1)), Provenance::Direct)
            .unwrap();
        let check = is_ias(&c, &[vec![rat(1, 2), int(0)]]).unwrap();
        assert!(!check.constant);
        let r = vec![rat(1, 2), rat(1, 3)];
        assert_eq!(compute_a(&c, &r).unwrap().det(), int(1));
        assert!(blaschke_metric(&c, &r).is_err());
    }

    #[test]
    fn singular_jacobian_is_typed() {
        let c = graph_chart(&var(2, 0) * &var(2, 1), 1);
        let mut bad = c.clone();
        bad.x[0] = ScalarField::Poly(var(2, 0).pow(2));
        assert!(matches!(
            compute_a(&bad, &[int(0), int(1)]),
            Err(IasError::SingularJacobian { .. })
        ));
    }

    #[test]
    fn monge_ampere_examples() {
        let x = |i| var(2, i);
        let ma = monge_ampere_check(&ScalarField::Poly(x(0).pow(4)), 1, &[]).unwrap();
        assert!(ma.constant);
        assert_eq!(ma.c_exact, Some(int(0)));
        let ma = monge_ampere_check(&ScalarField::Poly(&x(0).pow(4) + &x(1).pow(2)), 1, &[]).unwrap();
        assert!(!ma.constant);
        assert!(ma.agree);
        let f4 = |i| var(4, i);
        let f = &(&(&f4(0) * &f4(2)) + &(&f4(1) * &f4(3))) + &(&f4(1) * &f4(2));
        let ma = monge_ampere_check(&ScalarField::Poly(f), 2, &[]).unwrap();
        assert!(ma.constant && ma.agree);
        assert_eq!(ma.c_exact, Some(int(1)));
    }

    #[test]
    fn linear_chart_is_flat() {
        // x = r, y = A r with constant A = K
        let x: Vec<QPoly> = (0..2).map(|i| var(2, i)).collect();
        let y = vec![-&var(2, 0), var(2, 1)];
        let f = potential_integrate(&x, &y, &[int(0), int(0)]).unwrap();
        let c = ImmersionChart::from_polys(1, x, y, f, DomainBox::cube(2, int(1)), Provenance::Direct).unwrap();
        let r = vec![rat(1, 7), rat(2, 9)];
        let conn = christoffels(&c, &r).unwrap();
        assert!(conn.gamma.is_zero() && conn.gamma_bar.is_zero());
        assert!(dual_connection_identity(&c, &r).unwrap().is_zero());
        assert!(nabla_hat_a(&c, &r).unwrap().is_zero());
    }

    #[test]
    fn potential_of_crossed_lines() {
        // beta(s) = (s, 0), gamma(t) = (0, t): x = (s/2, t/2), y = (-s/2, t/2)
        let half = rat(1, 2);
        let s = var(2, 0);
        let t = var(2, 1);
        let x = vec![s.scale(&half), t.scale(&half)];
        let y = vec![s.scale(&-half.clone()), t.scale(&half)];
        let f = potential_integrate(&x, &y, &[int(0), int(0)]).unwrap();
        assert_eq!(f, (&s * &t).scale(&rat(1, 4)));
        let zero = vec![QPoly::zero(2), QPoly::zero(2)];
        let f0 = potential_integrate(&x, &zero, &[int(0), int(0)]).unwrap();
        assert!(f0.is_zero());
    }

    #[test]
    fn potential_rejects_non_closed_forms() {
        let x: Vec<QPoly> = (0..2).map(|i| var(2, i)).collect();
        let y = vec![var(2, 0).pow(2), var(2, 1)];
        assert!(matches!(
            potential_integrate(&x, &y, &[int(0), int(0)]),
            Err(IasError::NonClosedForm { .. })
        ));
    }

    #[test]
    fn potential_is_path_independent() {
        let f = &(&var(4, 0).pow(3) * &var(4, 3)) - &(&var(4, 1) * &var(4, 2).pow(2));
        let c = graph_chart(f, 2);
        let (x, y, _) = c.polys_or_err().unwrap();
        let b = vec![rat(1, 2), int(-1), rat(1, 3), int(0)];
        let straight = potential_integrate(&x, &y, &b).unwrap();
        let alpha = potential_form(&x, &y);
        let mut legs = QPoly::zero(4);
        for k in 0..4 {
            let pt = |upto: usize| -> Vec<QPoly> {
                (0..4)
                    .map(|i| if i < upto { var(4, i) } else { QPoly::constant(4, b[i].clone()) })
                    .collect()
            };
            legs = &legs + &integrate_along_segment(&alpha, &pt(k), &pt(k + 1));
        }
        assert_eq!(straight, legs);
    }

    #[test]
    fn dual_of_graph_chart() {
        let f = &(&var(2, 0).pow(3) * &var(2, 1)) + &var(2, 1).pow(2);
        let c = graph_chart(f, 1);
        let d = dual_immersion(&c).unwrap();
        assert!(d.defin1_symbolic().unwrap().iter().all(|p| p.is_zero()));
        let r = vec![rat(1, 2), rat(2, 3)];
        assert_eq!(metric_unchecked(&c, &r).unwrap(), metric_unchecked(&d, &r).unwrap());
        let dd = dual_immersion(&d).unwrap();
        let (x, y, _) = c.polys_or_err().unwrap();
        let (x2, y2, _) = dd.polys_or_err().unwrap();
        assert!(x.iter().zip(&x2).all(|(a, b)| *a == -b));
        assert!(y.iter().zip(&y2).all(|(a, b)| *a == -b));
    }

    #[test]
    fn reflection_negates_metric() {
        let c = graph_chart(&var(2, 0).pow(2) * &var(2, 1), 1);
        let r = vec![rat(1, 2), rat(2, 3)];
        let h = metric_unchecked(&c, &r).unwrap();
        let hr = metric_unchecked(&c.reflect().unwrap(), &r).unwrap();
        assert_eq!(hr, -&h);
    }

    #[test]
    fn float_path_matches_exact() {
        let f = &(&var(2, 0).pow(3) * &var(2, 1)) + &var(2, 1).pow(2);
        let c = graph_chart(f, 1);
        let r = vec![rat(1, 2), rat(2, 3)];
        let rf = vec![0.5, 2.0 / 3.0];
        let he = blaschke_metric(&c, &r).unwrap();
        let hf = blaschke_metric(&c, &rf).unwrap();
        assert!((&he.map(|v| v.to_f64()) - &hf).max_abs() < 1e-12);
        let ma = chart_monge_ampere(&c, &r).unwrap();
        assert_eq!(ma.hessian_det, ma.dyf_det);
        assert_eq!(ma.companion_residual, 0.0);
    }
}
