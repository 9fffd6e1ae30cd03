//! Chart constructions: center-chord charts from pairs of Lagrangian
//! submanifolds, special charts from holomorphic potentials, their
//! one-parameter families, and the complex-pair description.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::domain::{render_point, DomainBox};
use crate::error::{IasError, Result};
use crate::immersion::{omega_poly, potential_integrate, ChartSource, ImmersionChart, Provenance};
use crate::jets::complex_split;
use crate::linalg::{Gaussian, Matrix, Rational, Scalar};
use crate::poly::{poly_det, GPoly, QPoly};

/// A Lagrangian submanifold of `R^{2n}` given by a parametrization.
#[derive(Clone, Debug, PartialEq)]
pub enum LagrangianInput {
    /// `u -> (u, grad S(u))` for a potential `S` in `n` variables.
    Potential(QPoly),
    /// `2n` component polynomials in `n` variables.
    Parametric(Vec<QPoly>),
}

impl LagrangianInput {
    pub fn n(&self) -> usize {
        match self {
            LagrangianInput::Potential(s) => s.nvars(),
            LagrangianInput::Parametric(c) => c.len() / 2,
        }
    }

    pub fn parametrization(&self) -> Vec<QPoly> {
        match self {
            LagrangianInput::Potential(s) => {
                let n = s.nvars();
                let mut out: Vec<QPoly> = (0..n).map(|i| QPoly::var(n, i)).collect();
                out.extend(s.gradient());
                out
            }
            LagrangianInput::Parametric(c) => c.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let LagrangianInput::Parametric(c) = self {
            let n = c.len() / 2;
            if c.len() % 2 != 0 || n == 0 {
                return Err(IasError::InvalidParameter(
                    "a parametrized Lagrangian needs 2n components".into(),
                ));
            }
            if let Some(bad) = c.iter().find(|p| p.nvars() != n) {
                return Err(IasError::DimensionMismatch {
                    expected: n,
                    got: bad.nvars(),
                });
            }
        }
        Ok(())
    }
}

/// Pullback of `w` along a parametrization, as polynomial entries
/// `w(d_i beta, d_j beta)`.
pub fn lagrangian_pullback(param: &[QPoly]) -> Vec<Vec<QPoly>> {
    let n = param.len() / 2;
    let cols: Vec<Vec<QPoly>> = (0..n).map(|i| param.iter().map(|p| p.partial(i)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| omega_poly(&cols[i], &cols[j])).collect())
        .collect()
}

/// Is the input Lagrangian? Immersion rank is checked at the samples.
pub fn lagrangian_check(input: &LagrangianInput, samples: &[Vec<Rational>]) -> Result<bool> {
    input.validate()?;
    let param = input.parametrization();
    let n = input.n();
    for s in samples {
        let jac = Matrix::from_fn(2 * n, n, |r, c| param[r].partial(c).eval(s));
        let rank = jac.rank();
        if rank < n {
            return Err(IasError::RankDrop {
                point: render_point(s),
                expected: n,
                got: rank,
            });
        }
    }
    Ok(lagrangian_pullback(&param).iter().flatten().all(QPoly::is_zero))
}

fn embed(p: &QPoly, nvars: usize, offset: usize) -> QPoly {
    let map: Vec<usize> = (0..p.nvars()).map(|i| i + offset).collect();
    p.relabel(nvars, &map)
}

/// The center-chord chart `x = (beta(s) + gamma(t))/2`,
/// `y = (gamma(t) - beta(s))/2` with parameters `r = (s, t)` and `f`
/// normalized by `f(basepoint) = 0` (default: the domain center).
pub fn build_center_chord(
    beta: &LagrangianInput,
    gamma: &LagrangianInput,
    domain: DomainBox,
    basepoint: Option<&[Rational]>,
) -> Result<ImmersionChart> {
    beta.validate()?;
    gamma.validate()?;
    let n = beta.n();
    if gamma.n() != n {
        return Err(IasError::DimensionMismatch {
            expected: n,
            got: gamma.n(),
        });
    }
    for (name, input) in [("beta", beta), ("gamma", gamma)] {
        if !lagrangian_check(input, &[])? {
            return Err(IasError::NonLagrangianInput {
                detail: format!("{name}: pullback of the symplectic form is not zero"),
            });
        }
    }
    let b = beta.parametrization();
    let g = gamma.parametrization();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let d = 2 * n;
    let bs: Vec<QPoly> = b.iter().map(|p| embed(p, d, 0)).collect();
    let gt: Vec<QPoly> = g.iter().map(|p| embed(p, d, n)).collect();
    let x: Vec<QPoly> = bs.iter().zip(&gt).map(|(p, q)| (p + q).scale(&half)).collect();
    let y: Vec<QPoly> = bs.iter().zip(&gt).map(|(p, q)| (q - p).scale(&half)).collect();
    let base = match basepoint {
        Some(p) => p.to_vec(),
        None => domain.center(),
    };
    let f = potential_integrate(&x, &y, &base)?;
    let mut chart = ImmersionChart::from_polys(n, x, y, f, domain, Provenance::CenterChord)?;
    note_singular_basepoint(&mut chart, &base);
    chart.source = Some(ChartSource::CenterChord { beta: b, gamma: g });
    Ok(chart)
}

fn note_singular_basepoint(chart: &mut ImmersionChart, base: &[Rational]) {
    if let Ok(j) = chart.jets::<Rational>(base) {
        if j.dx().det().is_zero() {
            chart
                .warnings
                .push(format!("tangent spaces not transversal at basepoint {}", render_point(base)));
        }
    }
}

/// The graph chart of a function `F` on `R^{2n}`: `x = r`, `y = Y_F`,
/// `f = F`. Its shape field is `DY_F`.
pub fn build_graph(f: &QPoly, domain: DomainBox) -> Result<ImmersionChart> {
    let d = f.nvars();
    if d == 0 || !d.is_multiple_of(2) {
        return Err(IasError::InvalidParameter("F needs an even, positive number of variables".into()));
    }
    let x: Vec<QPoly> = (0..d).map(|i| QPoly::var(d, i)).collect();
    let y = crate::symplectic::hamiltonian_field(f, d / 2);
    ImmersionChart::from_polys(d / 2, x, y, f.clone(), domain, Provenance::Direct)
}

/// `x = r`, `y = a r` for a constant `a` in `sp(2n)`, with the quadratic
/// `f` normalized to vanish at the origin.
pub fn build_linear_shape(a: &Matrix<Rational>, domain: DomainBox) -> Result<ImmersionChart> {
    let d = a.rows();
    if d == 0 || !d.is_multiple_of(2) || a.cols() != d {
        return Err(IasError::InvalidParameter("shape matrix must be 2n x 2n".into()));
    }
    let x: Vec<QPoly> = (0..d).map(|i| QPoly::var(d, i)).collect();
    let y: Vec<QPoly> = (0..d)
        .map(|i| QPoly::from_terms(d, (0..d).map(|j| (unit(d, j), a[(i, j)].clone()))))
        .collect();
    let f = potential_integrate(&x, &y, &vec![Rational::zero(); d])?;
    ImmersionChart::from_polys(d / 2, x, y, f, domain, Provenance::Direct)
}

fn unit(d: usize, j: usize) -> Vec<u32> {
    let mut m = vec![0; d];
    m[j] = 1;
    m
}

/// The special chart of a holomorphic `H(z)`, `z = s + i t`, `Q = Im H`:
/// `x = (s, Q_t)`, `y = (t, Q_s)`, `f = Q - t . Q_t`.
pub fn build_special(h: &GPoly, domain: DomainBox) -> Result<ImmersionChart> {
    let n = h.nvars();
    if n == 0 {
        return Err(IasError::InvalidParameter("H needs at least one variable".into()));
    }
    let d = 2 * n;
    let (_, q) = complex_split(h);
    let s = |k: usize| QPoly::var(d, k);
    let t = |k: usize| QPoly::var(d, n + k);
    let mut x: Vec<QPoly> = (0..n).map(s).collect();
    x.extend((0..n).map(|k| q.partial(n + k)));
    let mut y: Vec<QPoly> = (0..n).map(t).collect();
    y.extend((0..n).map(|k| q.partial(k)));
    let mut f = q.clone();
    for k in 0..n {
        f = &f - &(&t(k) * &q.partial(n + k));
    }
    let mut chart = ImmersionChart::from_polys(n, x, y, f, domain, Provenance::Special)?;
    let qtt: Vec<Vec<QPoly>> = (0..n)
        .map(|i| (0..n).map(|j| q.partial(n + i).partial(n + j)).collect())
        .collect();
    if poly_det(&qtt, d).is_zero() {
        chart.warnings.push("det Q_tt vanishes identically: every point is singular".into());
    }
    chart.source = Some(ChartSource::Special { h: h.clone() });
    Ok(chart)
}

/// `beta_l = l beta`, `gamma_l = |l|^{-1} gamma`, rebuilt on the same
/// domain.
pub fn family_center_chord(chart: &ImmersionChart, lambda: &Rational) -> Result<ImmersionChart> {
    if lambda.is_zero() {
        return Err(IasError::InvalidParameter("family parameter must be nonzero".into()));
    }
    let Some(ChartSource::CenterChord { beta, gamma }) = &chart.source else {
        return Err(IasError::InvalidParameter(
            "center-chord family needs a chart built from a Lagrangian pair".into(),
        ));
    };
    let inv = lambda.abs().recip();
    let b: Vec<QPoly> = beta.iter().map(|p| p.scale(lambda)).collect();
    let g: Vec<QPoly> = gamma.iter().map(|p| p.scale(&inv)).collect();
    build_center_chord(
        &LagrangianInput::Parametric(b),
        &LagrangianInput::Parametric(g),
        chart.domain.clone(),
        None,
    )
}

fn i_pow(k: u32) -> Gaussian {
    let (re, im) = match k % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Gaussian::new(Rational::from_i64(re), Rational::from_i64(im))
}

/// `H_tau(z) = e^{2 i tau} H(e^{-i tau} z)` for a unit `u = e^{i tau}`.
pub fn rotate_potential(h: &GPoly, unit: &Gaussian) -> GPoly {
    let n = h.nvars();
    let inv = unit.conj();
    let subs: Vec<GPoly> = (0..n).map(|k| GPoly::var(n, k).scale(&inv)).collect();
    h.compose(&subs).scale(&(unit * unit))
}

/// The special family at `tau = quarter_turns * pi/2`, exactly.
pub fn family_special(h: &GPoly, quarter_turns: u32, domain: DomainBox) -> Result<ImmersionChart> {
    build_special(&rotate_potential(h, &i_pow(quarter_turns)), domain)
}

/// The special family at an arbitrary angle. `e^{i tau}` is rounded to
/// the nearest doubles, which are then used as exact rationals.
pub fn family_special_float(h: &GPoly, tau: f64, domain: DomainBox) -> Result<ImmersionChart> {
    let c = Rational::from_float(tau.cos()).ok_or_else(|| IasError::InvalidParameter("tau".into()))?;
    let s = Rational::from_float(tau.sin()).ok_or_else(|| IasError::InvalidParameter("tau".into()))?;
    build_special(&rotate_potential(h, &Gaussian::new(c, s)), domain)
}

/// The parameter of the rotated chart corresponding to `(s, t)`:
/// `z' = e^{i tau} z`.
pub fn special_family_point(quarter_turns: u32, r: &[Rational]) -> Vec<Rational> {
    let n = r.len() / 2;
    let u = i_pow(quarter_turns);
    let mut out = vec![Rational::zero(); 2 * n];
    for k in 0..n {
        let z = Gaussian::new(r[k].clone(), r[n + k].clone()) * &u;
        out[k] = z.re;
        out[n + k] = z.im;
    }
    out
}

pub fn special_family_point_f64(tau: f64, r: &[f64]) -> Vec<f64> {
    let n = r.len() / 2;
    let (c, s) = (tau.cos(), tau.sin());
    let mut out = vec![0.0; 2 * n];
    for k in 0..n {
        out[k] = c * r[k] - s * r[n + k];
        out[n + k] = s * r[k] + c * r[n + k];
    }
    out
}

/// `eta = x + i y` written in the complex variables of a special chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPair {
    /// Components of `eta` as polynomials in `z_1..z_n`.
    pub eta: Vec<GPoly>,
    /// The `z-bar`-dependent part of `x + i y`; zero for special charts.
    pub antiholomorphic: Vec<GPoly>,
    /// `x = (eta + zeta)/2` and `y = (i/2)(zeta - eta)` reproduce the chart.
    pub reconstructs: bool,
}

/// Rewrite `x + i y` in `(z, z-bar)` and split off the holomorphic part.
pub fn complex_pair(chart: &ImmersionChart) -> Result<ComplexPair> {
    if chart.provenance != Provenance::Special {
        return Err(IasError::InvalidParameter("complex pair needs a special chart".into()));
    }
    let (Some(x), Some(y)) = (chart.x_polys(), chart.y_polys()) else {
        return Err(IasError::NotExact);
    };
    let n = chart.n;
    let d = 2 * n;
    let zero = Rational::zero();
    let g = |re: Rational, im: Rational| Gaussian::new(re, im);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    // s = (z + w)/2, t = (z - w)/(2i) = -i(z - w)/2 with w = z-bar
    let subs: Vec<GPoly> = (0..d)
        .map(|k| {
            let (z, w) = (GPoly::var(d, k % n), GPoly::var(d, n + k % n));
            if k < n {
                (&z + &w).scale(&g(half.clone(), zero.clone()))
            } else {
                (&z - &w).scale(&g(zero.clone(), -half.clone()))
            }
        })
        .collect();
    let i = g(zero.clone(), Rational::one());
    let mut eta = Vec::with_capacity(d);
    let mut anti = Vec::with_capacity(d);
    for k in 0..d {
        let comp = &x[k].to_gaussian() + &y[k].to_gaussian().scale(&i);
        let in_z = comp.compose(&subs);
        let mut hol = GPoly::zero(n);
        let mut rest = GPoly::zero(d);
        for (m, c) in in_z.terms() {
            if m[n..].iter().all(|&e| e == 0) {
                hol.add_term(m[..n].to_vec(), c.clone());
            } else {
                rest.add_term(m.clone(), c.clone());
            }
        }
        eta.push(hol);
        anti.push(rest);
    }
    if let Some(bad) = anti.iter().position(|p| !p.is_zero()) {
        return Err(IasError::NonVanishingAntiholomorphicPart {
            detail: format!("component {} of x + iy depends on z-bar", bad + 1),
        });
    }
    // reconstruction on (s, t)
    let zs: Vec<GPoly> = (0..n)
        .map(|k| &GPoly::var(d, k) + &GPoly::var(d, n + k).scale(&i))
        .collect();
    let zbars: Vec<GPoly> = (0..n)
        .map(|k| &GPoly::var(d, k) - &GPoly::var(d, n + k).scale(&i))
        .collect();
    let mut ok = true;
    for k in 0..d {
        let e = eta[k].compose(&zs);
        let z = eta[k].conj().compose(&zbars);
        let xr = (&e + &z).scale(&g(half.clone(), zero.clone()));
        let yr = (&z - &e).scale(&g(zero.clone(), half.clone()));
        ok &= xr == x[k].to_gaussian() && yr == y[k].to_gaussian();
    }
    Ok(ComplexPair {
        eta,
        antiholomorphic: anti,
        reconstructs: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{compute_a, is_ias, metric_unchecked};
    use crate::linalg::{int, rat};
    use crate::parse::parse_gpoly;
    use crate::symplectic::{structure_matrix, StructureKind};

    fn unit_box(d: usize) -> DomainBox {
        DomainBox::cube(d, int(1))
    }

    fn lines() -> (LagrangianInput, LagrangianInput) {
        let s = QPoly::var(1, 0);
        let z = QPoly::zero(1);
        (
            LagrangianInput::Parametric(vec![s.clone(), z.clone()]),
            LagrangianInput::Parametric(vec![z, s]),
        )
    }

    #[test]
    fn crossed_lines_give_product_potential() {
        let (b, g) = lines();
        let c = build_center_chord(&b, &g, unit_box(2), None).unwrap();
        let st = &QPoly::var(2, 0) * &QPoly::var(2, 1);
        assert_eq!(c.f_poly().unwrap(), st.scale(&rat(1, 4)));
        let r = vec![rat(1, 3), rat(-1, 2)];
        assert_eq!(compute_a(&c, &r).unwrap(), structure_matrix(StructureKind::K, 1));
        let check = is_ias(&c, &[r]).unwrap();
        assert!(check.constant);
        assert_eq!(check.c_exact, Some(int(-1)));
        assert!(c.defin1_symbolic().unwrap().iter().all(QPoly::is_zero));
    }

    #[test]
    fn lagrangian_check_cases() {
        let u = |i| QPoly::var(2, i);
        let pot = LagrangianInput::Potential(&u(0).pow(3) + &(&u(0) * &u(1)));
        assert!(lagrangian_check(&pot, &[vec![int(0), int(1)]]).unwrap());
        // beta(s) = (s1, s2, s2, 0): w(d1, d2) = 1
        let bad = LagrangianInput::Parametric(vec![u(0), u(1), u(1), QPoly::zero(2)]);
        assert!(!lagrangian_check(&bad, &[]).unwrap());
        assert_eq!(lagrangian_pullback(&bad.parametrization())[0][1], QPoly::constant(2, int(1)));
        let curve = LagrangianInput::Parametric(vec![QPoly::var(1, 0).pow(2), QPoly::var(1, 0).pow(3)]);
        assert!(lagrangian_check(&curve, &[vec![int(1)]]).unwrap());
        assert!(matches!(
            lagrangian_check(&curve, &[vec![int(0)]]),
            Err(IasError::RankDrop { .. })
        ));
        let (b, _) = lines();
        assert!(matches!(
            build_center_chord(&b, &bad, unit_box(4), None),
            Err(IasError::DimensionMismatch { .. })
        ));
        let b2 = LagrangianInput::Potential(QPoly::zero(2));
        assert!(matches!(
            build_center_chord(&b2, &bad, unit_box(4), None),
            Err(IasError::NonLagrangianInput { .. })
        ));
    }

    #[test]
    fn special_chart_of_z_cubed() {
        let h = parse_gpoly("z1^3", "z", 1).unwrap();
        let c = build_special(&h, unit_box(2)).unwrap();
        let s = QPoly::var(2, 0);
        let t = QPoly::var(2, 1);
        let x = c.x_polys().unwrap();
        let y = c.y_polys().unwrap();
        assert_eq!(x[1], &s.pow(2).scale(&int(3)) - &t.pow(2).scale(&int(3)));
        assert_eq!(y[1], (&s * &t).scale(&int(6)));
        assert_eq!(c.f_poly().unwrap(), t.pow(3).scale(&int(2)));
        assert!(c.defin1_symbolic().unwrap().iter().all(QPoly::is_zero));
        let r = vec![rat(1, 2), rat(1, 3)];
        assert_eq!(compute_a(&c, &r).unwrap(), structure_matrix(StructureKind::J, 1));
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn degenerate_special_chart_is_flagged() {
        let h = parse_gpoly("1/2 z1^2", "z", 1).unwrap();
        let c = build_special(&h, unit_box(2)).unwrap();
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn center_chord_family_scales_metric_by_sign() {
        let u = |i| QPoly::var(1, i);
        let b = LagrangianInput::Potential(&u(0).pow(3).scale(&rat(1, 3)) - &u(0).pow(2));
        let g = LagrangianInput::Potential(u(0).pow(4));
        let c = build_center_chord(&b, &g, unit_box(2), None).unwrap();
        let r = vec![rat(1, 5), rat(2, 3)];
        let h = metric_unchecked(&c, &r).unwrap();
        for (lam, sign) in [(int(1), 1), (int(2), 1), (rat(1, 3), 1), (int(-1), -1), (rat(-5, 2), -1)] {
            let cl = family_center_chord(&c, &lam).unwrap();
            assert_eq!(metric_unchecked(&cl, &r).unwrap(), h.scale(&int(sign)));
        }
        assert!(family_center_chord(&c, &int(0)).is_err());
    }

    #[test]
    fn special_family_preserves_metric_at_rotated_points() {
        let h = parse_gpoly("z1^3 + (1/2 - i) z1^2 z2 + i z2^4", "z", 2).unwrap();
        let c = build_special(&h, unit_box(4)).unwrap();
        let r = vec![rat(1, 3), rat(-1, 2), rat(2, 5), rat(1, 7)];
        let h0 = metric_unchecked(&c, &r).unwrap();
        for k in 0..4 {
            let ck = family_special(&h, k, unit_box(4)).unwrap();
            let rk = special_family_point(k, &r);
            assert_eq!(metric_unchecked(&ck, &rk).unwrap(), h0);
        }
        let tau = 0.7;
        let cf = family_special_float(&h, tau, unit_box(4)).unwrap();
        let rf: Vec<f64> = r.iter().map(|v| v.to_f64()).collect();
        let hf = metric_unchecked::<f64>(&cf, &special_family_point_f64(tau, &rf)).unwrap();
        assert!((&hf - &h0.map(|v| v.to_f64())).max_abs() < 1e-9);
    }

    #[test]
    fn complex_pair_of_z_cubed() {
        let h = parse_gpoly("z1^3", "z", 1).unwrap();
        let c = build_special(&h, unit_box(2)).unwrap();
        let pair = complex_pair(&c).unwrap();
        assert_eq!(pair.eta[0], GPoly::var(1, 0));
        assert_eq!(pair.eta[1], parse_gpoly("3 z1^2", "z", 1).unwrap());
        assert!(pair.reconstructs);
        let lin = build_special(&parse_gpoly("(2 + i) z1 + 3 z2", "z", 2).unwrap(), unit_box(4)).unwrap();
        let pair = complex_pair(&lin).unwrap();
        assert!(pair.eta.iter().all(|p| p.degree().unwrap_or(0) <= 1));
    }
}
