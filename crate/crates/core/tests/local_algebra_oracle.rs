//! Cross-check of the truncated local-algebra engine against a dense,
//! monomial-by-monomial membership test written from scratch.

use std::collections::HashMap;

use num_traits::{One, Zero};

use ias_core::parse::parse_qpoly;
use ias_core::singularities::{local_algebra, LocalAlgebra};
use ias_core::{QPoly, Rational};

type Mono = Vec<u32>;

fn monomials(k: usize, deg: u32) -> Vec<Mono> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=deg {
        for mut rest in monomials(k - 1, deg - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        let pivot: Vec<Rational> = m[r].iter().map(|v| v * &inv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a -= &f * b;
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

struct Oracle {
    cols: HashMap<Mono, usize>,
    ideal: Vec<Vec<Rational>>,
}

impl Oracle {
    /// Every `mono * generator` truncated to degree `deg`, as dense rows.
    fn new(gens: &[QPoly], k: usize, deg: u32) -> Self {
        let monos = monomials(k, deg);
        let cols: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ideal = Vec::new();
        for g in gens {
            for m in &monos {
                let mut row = vec![Rational::zero(); monos.len()];
                let mut any = false;
                for (e, c) in g.terms() {
                    let prod: Mono = e.iter().zip(m).map(|(a, b)| a + b).collect();
                    if let Some(&i) = cols.get(&prod) {
                        row[i] += c.clone();
                        any = true;
                    }
                }
                if any {
                    ideal.push(row);
                }
            }
        }
        Oracle { cols, ideal }
    }

    fn unit(&self, m: &Mono) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols.len()];
        v[self.cols[m]] = Rational::one();
        v
    }

    fn quotient_dim(&self) -> usize {
        self.cols.len() - rank(&self.ideal)
    }

    /// Is `target` in the span of the ideal and `extra`?
    fn member(&self, extra: &[Vec<Rational>], target: &[Rational]) -> bool {
        let mut rows = self.ideal.clone();
        rows.extend(extra.iter().cloned());
        let before = rank(&rows);
        rows.push(target.to_vec());
        rank(&rows) == before
    }
}

/// The engine's basis is independent modulo the ideal and every monomial
/// reduces into its span.
fn cross_check(g: &QPoly, expected: usize) {
    let k = g.nvars();
    let alg = local_algebra(g).unwrap();
    assert_eq!(alg.dim, expected, "{g:?}");
    let gens: Vec<QPoly> = (0..k).map(|i| g.partial(i)).collect();
    for deg in [alg.degree, alg.degree + 1] {
        let engine = LocalAlgebra::truncated(&gens, k, deg);
        let oracle = Oracle::new(&gens, k, deg);
        assert_eq!(engine.dim, oracle.quotient_dim(), "degree {deg}");
        assert_eq!(engine.dim, expected, "degree {deg}");
        let basis: Vec<Vec<Rational>> = engine.basis.iter().map(|m| oracle.unit(m)).collect();
        assert_eq!(rank(&oracle.ideal) + basis.len(), rank(&[oracle.ideal.clone(), basis.clone()].concat()));
        for m in monomials(k, deg) {
            assert!(oracle.member(&basis, &oracle.unit(&m)), "{m:?} not spanned at degree {deg}");
        }
    }
}

#[test]
fn a_series_powers() {
    for k in 1..=9u32 {
        let g = parse_qpoly(&format!("k1^{}", k + 1), "k", 1).unwrap();
        cross_check(&g, k as usize);
    }
}

#[test]
fn d4_and_e6() {
    cross_check(&parse_qpoly("k1^3 + k1 k2^2", "k", 2).unwrap(), 4);
    cross_check(&parse_qpoly("k1^3 + k2^4", "k", 2).unwrap(), 6);
}

#[test]
fn other_germs_agree() {
    for (text, mu) in [
        ("k1^2 k2 + k2^4", 5),
        ("k1^3 + k2^5", 8),
        ("k1^3 + k1 k2^3", 7),
        ("k1^2 + k2^2 + k3^3", 2),
    ] {
        let nv = if text.contains("k3") { 3 } else { 2 };
        cross_check(&parse_qpoly(text, "k", nv).unwrap(), mu);
    }
}
