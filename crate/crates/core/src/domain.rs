//! Axis-aligned parameter boxes, grids, and seeded rational sampling.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{IasError, Result};
use crate::linalg::{Rational, Scalar};

/// Grids larger than this are refused.
pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl DomainBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(IasError::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(IasError::InvalidParameter("domain box needs lo < hi on every axis".into()));
        }
        Ok(DomainBox { lo, hi })
    }

    /// `[-r, r]^dim`.
    pub fn cube(dim: usize, radius: Rational) -> Self {
        DomainBox {
            lo: vec![-radius.clone(); dim],
            hi: vec![radius; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<Rational> {
        let two = Rational::from_i64(2);
        self.lo.iter().zip(&self.hi).map(|(a, b)| (a + b) / &two).collect()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim() && p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    /// Tensor grid with `counts[k]` evenly spaced points on axis `k`,
    /// endpoints included, in row-major order (last axis fastest).
    pub fn grid(&self, counts: &[usize]) -> Result<Vec<Vec<Rational>>> {
        let counts = self.expand_counts(counts)?;
        let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => {}
            _ => {
                return Err(IasError::InvalidParameter(format!(
                    "grid exceeds {MAX_GRID_POINTS} points"
                )))
            }
        }
        let axes: Vec<Vec<Rational>> = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let step = (&self.hi[k] - &self.lo[k]) / Rational::from_i64(c as i64 - 1);
                (0..c).map(|i| &self.lo[k] + &step * Rational::from_i64(i as i64)).collect()
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for p in &out {
                for v in axis {
                    let mut q = p.clone();
                    q.push(v.clone());
                    next.push(q);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// A single count applies to every axis.
    pub fn expand_counts(&self, counts: &[usize]) -> Result<Vec<usize>> {
        let counts = match counts.len() {
            1 => vec![counts[0]; self.dim()],
            d if d == self.dim() => counts.to_vec(),
            d => {
                return Err(IasError::DimensionMismatch {
                    expected: self.dim(),
                    got: d,
                })
            }
        };
        if counts.iter().any(|&c| c < 2) {
            return Err(IasError::InvalidParameter("grid needs at least 2 points per axis".into()));
        }
        Ok(counts)
    }

    /// Seeded random rational points with small denominators, strictly
    /// inside the box.
    pub fn random_points(&self, count: usize, seed: u64) -> Vec<Vec<Rational>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.random_point(&mut rng)).collect()
    }

    pub fn random_point(&self, rng: &mut impl Rng) -> Vec<Rational> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let den: i64 = rng.gen_range(2..=37);
                let num: i64 = rng.gen_range(1..den);
                let frac = Rational::new(BigInt::from(num), BigInt::from(den));
                a + (b - a) * frac
            })
            .collect()
    }
}

/// Render a point for error messages and reports.
pub fn render_point<T: Scalar>(p: &[T]) -> String {
    let parts: Vec<String> = p.iter().map(|v| v.render()).collect();
    format!("({})", parts.join(", "))
}

pub fn to_f64_point(p: &[Rational]) -> Vec<f64> {
    p.iter().map(|v| v.to_f64()).collect()
}

pub fn is_origin(p: &[Rational]) -> bool {
    p.iter().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn grid_includes_endpoints() {
        let b = DomainBox::cube(2, int(1));
        let g = b.grid(&[3]).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![int(-1), int(-1)]);
        assert_eq!(g[4], vec![int(0), int(0)]);
        assert!(b.grid(&[1]).is_err());
        assert!(b.grid(&[400, 400]).is_err());
    }

    #[test]
    fn random_points_are_inside_and_reproducible() {
        let b = DomainBox::new(vec![rat(-1, 2), int(2)], vec![rat(1, 3), int(5)]).unwrap();
        let a = b.random_points(20, 7);
        assert_eq!(a, b.random_points(20, 7));
        assert!(a.iter().all(|p| b.contains(p)));
        assert_ne!(a, b.random_points(20, 8));
    }
}
