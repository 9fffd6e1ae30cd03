//! Sampled grids: Wavefront OBJ surfaces for `n = 1`, CSV for any `n`.
//!
//! Floats are written with 17 significant digits, lines end in LF.

use std::fmt::Write as _;

use ias_core::immersion::ImmersionChart;
use ias_core::poly::poly_det;
use ias_core::{QPoly, Rational, Scalar};

use crate::error::CliError;

pub const MAX_MESH_VERTICES: usize = 1_000_000;

/// Chart data on a tensor grid, last axis fastest.
#[derive(Clone, Debug)]
pub struct GridSample {
    pub counts: Vec<usize>,
    pub r: Vec<Vec<f64>>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub det_dx: Vec<f64>,
    pub singular: Vec<bool>,
}

pub fn sample_grid(chart: &ImmersionChart, counts: &[usize]) -> Result<GridSample, CliError> {
    let counts = chart.domain.expand_counts(counts).map_err(|e| CliError::Usage(e.to_string()))?;
    let total = counts.iter().try_fold(1usize, |a, &c| a.checked_mul(c));
    match total {
        Some(t) if t <= MAX_MESH_VERTICES => {}
        _ => return Err(CliError::Usage(format!("grid exceeds {MAX_MESH_VERTICES} vertices"))),
    }
    // exact axis values, converted once
    let axes: Vec<Vec<f64>> = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let lo = &chart.domain.lo[k];
            let step = (&chart.domain.hi[k] - lo) / Rational::from_i64(c as i64 - 1);
            (0..c).map(|i| (lo + &step * Rational::from_i64(i as i64)).to_f64()).collect()
        })
        .collect();
    let mut r: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        r = r
            .iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    let (mut xs, mut ys, mut fs, mut dets) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    match (chart.x_polys(), chart.y_polys(), chart.f_poly()) {
        (Some(x), Some(y), Some(f)) => {
            let (dx, _) = chart.jacobians_symbolic()?;
            let det: QPoly = poly_det(&dx, chart.dim());
            for p in &r {
                xs.push(x.iter().map(|q| q.eval_f64(p)).collect());
                ys.push(y.iter().map(|q| q.eval_f64(p)).collect());
                fs.push(f.eval_f64(p));
                dets.push(det.eval_f64(p));
            }
        }
        _ => {
            for p in &r {
                let j = chart.jets::<f64>(p)?;
                xs.push(j.x_value());
                ys.push(j.y_value());
                fs.push(j.f.value);
                dets.push(j.dx().det());
            }
        }
    }
    let singular = flag_singular(&counts, &dets);
    Ok(GridSample {
        counts,
        r,
        x: xs,
        y: ys,
        f: fs,
        det_dx: dets,
        singular,
    })
}

fn strides(counts: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; counts.len()];
    for a in (0..counts.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * counts[a + 1];
    }
    s
}

/// Zeros of `det Dx`, plus the smaller-|det| end of each sign-changing edge.
fn flag_singular(counts: &[usize], dets: &[f64]) -> Vec<bool> {
    let st = strides(counts);
    let mut flag: Vec<bool> = dets.iter().map(|d| *d == 0.0).collect();
    for k in 0..dets.len() {
        for a in 0..counts.len() {
            if (k / st[a]) % counts[a] + 1 == counts[a] {
                continue;
            }
            let q = k + st[a];
            if dets[k] != 0.0 && dets[q] != 0.0 && dets[k].signum() != dets[q].signum() {
                let pick = if dets[k].abs() <= dets[q].abs() { k } else { q };
                flag[pick] = true;
            }
        }
    }
    flag
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// OBJ surface `(x1, x2, f)` for `n = 1`; cells where `det Dx` vanishes or
/// changes sign go to group `singular`.
pub fn to_obj(chart: &ImmersionChart, g: &GridSample) -> Result<String, CliError> {
    if chart.n != 1 {
        return Err(CliError::Usage(format!(
            "OBJ surfaces need n = 1 (chart has n = {}); write a .csv grid instead",
            chart.n
        )));
    }
    let (a, b) = (g.counts[0], g.counts[1]);
    let mut out = String::from("# ias surface (x1, x2, f)\n");
    for k in 0..g.r.len() {
        let _ = writeln!(out, "v {} {} {}", num(g.x[k][0]), num(g.x[k][1]), num(g.f[k]));
    }
    let mut regular = String::new();
    let mut singular = String::new();
    for i in 0..a - 1 {
        for j in 0..b - 1 {
            let v00 = i * b + j;
            let v10 = (i + 1) * b + j;
            let v11 = (i + 1) * b + j + 1;
            let v01 = i * b + j + 1;
            let corners = [v00, v10, v11, v01].map(|v| g.det_dx[v]);
            let zero = corners.contains(&0.0);
            let pos = corners.iter().any(|d| *d > 0.0);
            let neg = corners.iter().any(|d| *d < 0.0);
            let target = if zero || (pos && neg) { &mut singular } else { &mut regular };
            let _ = writeln!(target, "f {} {} {}", v00 + 1, v10 + 1, v11 + 1);
            let _ = writeln!(target, "f {} {} {}", v00 + 1, v11 + 1, v01 + 1);
        }
    }
    out.push_str("g regular\n");
    out.push_str(&regular);
    out.push_str("g singular\n");
    out.push_str(&singular);
    Ok(out)
}

pub fn to_csv(chart: &ImmersionChart, g: &GridSample) -> String {
    let d = chart.dim();
    let mut head: Vec<String> = Vec::new();
    for p in ["r", "x", "y"] {
        head.extend((1..=d).map(|i| format!("{p}{i}")));
    }
    head.extend(["f", "detDx", "singular"].map(String::from));
    let mut out = head.join(",");
    out.push('\n');
    for k in 0..g.r.len() {
        let row: Vec<String> = g.r[k]
            .iter()
            .chain(&g.x[k])
            .chain(&g.y[k])
            .chain([&g.f[k], &g.det_dx[k]])
            .map(|v| num(*v))
            .chain(std::iter::once(if g.singular[k] { "1".to_string() } else { "0".to_string() }))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ias_core::builders::{build_center_chord, build_special, LagrangianInput};
    use ias_core::domain::DomainBox;
    use ias_core::linalg::int;
    use ias_core::parse::{parse_gpoly, parse_qpoly};

    fn paraboloid() -> ImmersionChart {
        let p = LagrangianInput::Potential(parse_qpoly("u1^2/2", "u", 1).unwrap());
        let m = LagrangianInput::Potential(parse_qpoly("-u1^2/2", "u", 1).unwrap());
        build_center_chord(&m, &p, DomainBox::cube(2, int(1)), None).unwrap()
    }

    #[test]
    fn obj_counts() {
        let c = paraboloid();
        let g = sample_grid(&c, &[10]).unwrap();
        let obj = to_obj(&c, &g).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 100);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 162);
        assert!(!obj.contains('\r'));
    }

    #[test]
    fn cubic_special_locus_on_t_zero() {
        let c = build_special(&parse_gpoly("z1^3", "z", 1).unwrap(), DomainBox::cube(2, int(1))).unwrap();
        let g = sample_grid(&c, &[5]).unwrap();
        for k in 0..g.r.len() {
            assert_eq!(g.det_dx[k] == 0.0, g.r[k][1] == 0.0);
            assert_eq!(g.singular[k], g.r[k][1] == 0.0);
        }
        let csv = to_csv(&c, &g);
        assert!(csv.starts_with("r1,r2,x1,x2,y1,y2,f,detDx,singular\n"));
        assert_eq!(csv.lines().count(), 26);
    }

    #[test]
    fn caps_and_dimension_rules() {
        let c = paraboloid();
        assert!(sample_grid(&c, &[1001, 1000]).is_err());
        let c2 = build_special(&parse_gpoly("z1^2 + z2^2", "z", 2).unwrap(), DomainBox::cube(4, int(1))).unwrap();
        let g = sample_grid(&c2, &[2]).unwrap();
        assert!(matches!(to_obj(&c2, &g), Err(CliError::Usage(_))));
    }
}
