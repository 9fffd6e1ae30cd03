//! The exterior differential systems `{Omega, Omega_1}` and
//! `{Omega, Omega_2}` along `L(r) = (x(r), y(r))`, classification by
//! `A^2 = +-I`, and recovery of the Lagrangian pair of a center-chord chart.

use crate::domain::render_point;
use crate::error::{IasError, Result};
use crate::immersion::{matrix_vanishes, ChartSource, ImmersionChart};
use crate::jets::{JetEval, ScalarField};
use crate::linalg::{Matrix, Scalar};
use crate::symplectic::{big_omega, omega, omega1, omega2, pullback_2form};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ASquareClass {
    PlusIdentity,
    MinusIdentity,
    Neither,
}

impl ASquareClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ASquareClass::PlusIdentity => "plus-identity",
            ASquareClass::MinusIdentity => "minus-identity",
            ASquareClass::Neither => "neither",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdsClass {
    CenterChord,
    Special,
    Other,
}

impl EdsClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdsClass::CenterChord => "center-chord",
            EdsClass::Special => "special",
            EdsClass::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ASquare<T> {
    pub class: ASquareClass,
    /// Bases of the `+1` and `-1` eigenspaces when `A^2 = I`.
    pub plus_basis: Vec<Vec<T>>,
    pub minus_basis: Vec<Vec<T>>,
    /// For `A^2 = I`: both eigenspaces have half the dimension.
    pub balanced: bool,
}

pub fn a_square_class<T: Scalar>(a: &Matrix<T>) -> ASquare<T> {
    let d = a.rows();
    let id = Matrix::<T>::identity(d);
    let sq = a * a;
    let scale = sq.max_abs();
    if matrix_vanishes(&(&sq - &id), scale) {
        let plus_basis = (a - &id).nullspace();
        let minus_basis = (a + &id).nullspace();
        let balanced = plus_basis.len() * 2 == d && minus_basis.len() * 2 == d;
        return ASquare {
            class: ASquareClass::PlusIdentity,
            plus_basis,
            minus_basis,
            balanced,
        };
    }
    let class = if matrix_vanishes(&(&sq + &id), scale) {
        ASquareClass::MinusIdentity
    } else {
        ASquareClass::Neither
    };
    ASquare {
        class,
        plus_basis: Vec::new(),
        minus_basis: Vec::new(),
        balanced: false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleVerdict {
    pub point: String,
    pub omega_residual: f64,
    pub omega1_residual: f64,
    pub omega2_residual: f64,
    pub omega_zero: bool,
    pub omega1_zero: bool,
    pub omega2_zero: bool,
    pub a_square: ASquareClass,
    /// `L*Omega_1 = 0 <=> A^2 = I` and `L*Omega_2 = 0 <=> A^2 = -I`.
    pub lemma_consistent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdsVerdict {
    pub samples: Vec<SampleVerdict>,
    pub omega_residual: f64,
    pub omega1_residual: f64,
    pub omega2_residual: f64,
    pub a_square_class: ASquareClass,
    pub classification: EdsClass,
    pub lemma_equivalences_hold: bool,
}

/// The three pullbacks `L*Omega`, `L*Omega_1`, `L*Omega_2` at `r`.
pub fn eds_pullbacks<T: Scalar>(chart: &ImmersionChart, r: &[T]) -> Result<[Matrix<T>; 3]>
where
    ScalarField: JetEval<T>,
{
    let j = chart.jets(r)?;
    let (dx, dy) = (j.dx(), j.dy());
    let d = chart.dim();
    let jac = Matrix::from_fn(2 * d, d, |row, c| {
        if row < d {
            dx[(row, c)].clone()
        } else {
            dy[(row - d, c)].clone()
        }
    });
    let n = chart.n;
    Ok([
        pullback_2form(&big_omega(n), &jac)?,
        pullback_2form(&omega1(n), &jac)?,
        pullback_2form(&omega2(n), &jac)?,
    ])
}

pub fn eds_check<T: Scalar>(chart: &ImmersionChart, samples: &[Vec<T>]) -> Result<EdsVerdict>
where
    ScalarField: JetEval<T>,
{
    if samples.is_empty() {
        return Err(IasError::InvalidParameter("eds_check needs sample points".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    for r in samples {
        let j = chart.jets(r)?;
        let a = &j.dx_inv()? * &j.dy();
        let [p, p1, p2] = eds_pullbacks(chart, r)?;
        let scale = j.dx().max_abs().max(j.dy().max_abs()).powi(2);
        let sq = a_square_class(&a).class;
        let (z, z1, z2) = (
            matrix_vanishes(&p, scale),
            matrix_vanishes(&p1, scale),
            matrix_vanishes(&p2, scale),
        );
        out.push(SampleVerdict {
            point: render_point(r),
            omega_residual: p.max_abs(),
            omega1_residual: p1.max_abs(),
            omega2_residual: p2.max_abs(),
            omega_zero: z,
            omega1_zero: z1,
            omega2_zero: z2,
            a_square: sq,
            lemma_consistent: z1 == (sq == ASquareClass::PlusIdentity) && z2 == (sq == ASquareClass::MinusIdentity),
        });
    }
    let max = |f: fn(&SampleVerdict) -> f64| out.iter().map(f).fold(0.0, f64::max);
    let first = out[0].a_square;
    let a_square_class = if out.iter().all(|s| s.a_square == first) {
        first
    } else {
        ASquareClass::Neither
    };
    let all = |f: fn(&SampleVerdict) -> bool| out.iter().all(f);
    let classification = if all(|s| s.omega_zero && s.omega1_zero) {
        EdsClass::CenterChord
    } else if all(|s| s.omega_zero && s.omega2_zero) {
        EdsClass::Special
    } else {
        EdsClass::Other
    };
    Ok(EdsVerdict {
        omega_residual: max(|s| s.omega_residual),
        omega1_residual: max(|s| s.omega1_residual),
        omega2_residual: max(|s| s.omega2_residual),
        a_square_class,
        classification,
        lemma_equivalences_hold: all(|s| s.lemma_consistent),
        samples: out,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorSample<T> {
    pub point: Vec<T>,
    /// `p1 = x + y`, on the second submanifold.
    pub p1: Vec<T>,
    /// `p2 = x - y`, on the first submanifold.
    pub p2: Vec<T>,
    /// Column bases of `Dp1` and `Dp2`.
    pub frame1: Vec<Vec<T>>,
    pub frame2: Vec<Vec<T>>,
    /// Largest entry of the `w`-pullback on both tangent frames.
    pub lagrangian_residual: f64,
    /// Distance to `(gamma(t), beta(s))` when the chart records its source.
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization<T> {
    pub samples: Vec<FactorSample<T>>,
    /// Samples on the singular locus, not factored.
    pub skipped: Vec<String>,
    pub max_deviation: Option<f64>,
    pub max_lagrangian_residual: f64,
}

fn column_basis<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (_, pivots) = m.rref();
    pivots.iter().map(|&c| m.col(c)).collect()
}

/// Recover the Lagrangian pair of a center-chord chart pointwise:
/// `p1 = x + y` and `p2 = x - y`, each of rank `n`.
pub fn factor_center_chord<T: Scalar>(chart: &ImmersionChart, samples: &[Vec<T>]) -> Result<Factorization<T>>
where
    ScalarField: JetEval<T>,
{
    let n = chart.n;
    let d = chart.dim();
    let w = omega(n).matrix.map(T::from_rational);
    let source = match &chart.source {
        Some(ChartSource::CenterChord { beta, gamma }) => Some((beta, gamma)),
        _ => None,
    };
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for r in samples {
        let j = chart.jets(r)?;
        let (dx, dy) = (j.dx(), j.dy());
        if dx.inverse().is_none() {
            skipped.push(render_point(r));
            continue;
        }
        let (x, y) = (j.x_value(), j.y_value());
        let p1: Vec<T> = x.iter().zip(&y).map(|(a, b)| a.clone() + b.clone()).collect();
        let p2: Vec<T> = x.iter().zip(&y).map(|(a, b)| a.clone() - b.clone()).collect();
        let dp1 = &dx + &dy;
        let dp2 = &dx - &dy;
        for dp in [&dp1, &dp2] {
            let rank = dp.rank();
            if rank != n {
                return Err(IasError::RankUnexpected {
                    point: render_point(r),
                    expected: n,
                    got: rank,
                });
            }
        }
        let lag = [&dp1, &dp2]
            .iter()
            .map(|dp| (&(&dp.transpose() * &w) * *dp).max_abs())
            .fold(0.0, f64::max);
        let deviation = source.map(|(beta, gamma)| {
            let mut dev: f64 = 0.0;
            for k in 0..d {
                let g = gamma[k].eval_in(&r[n..], T::from_rational);
                let b = beta[k].eval_in(&r[..n], T::from_rational);
                dev = dev.max((p1[k].clone() - g).abs_f64());
                dev = dev.max((p2[k].clone() - b).abs_f64());
            }
            dev
        });
        out.push(FactorSample {
            point: r.to_vec(),
            p1,
            p2,
            frame1: column_basis(&dp1),
            frame2: column_basis(&dp2),
            lagrangian_residual: lag,
            deviation,
        });
    }
    let max_deviation = if source.is_some() {
        Some(out.iter().filter_map(|s| s.deviation).fold(0.0, f64::max))
    } else {
        None
    };
    let max_lagrangian_residual = out.iter().map(|s| s.lagrangian_residual).fold(0.0, f64::max);
    Ok(Factorization {
        samples: out,
        skipped,
        max_deviation,
        max_lagrangian_residual,
    })
}
