//! Lexicographic comparisons by cross-multiplication, random points and grids.

use std::cmp::Ordering;

use bighom_core::lexint::LexPoint;
use bighom_core::Rational;
use itertools::Itertools;
use rand::Rng;

/// `a` vs `b` via `a.n · b.d` vs `b.n · a.d`.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn cmp_lex(p: &LexPoint, q: &LexPoint) -> Ordering {
    for (a, b) in p.coords().iter().zip(q.coords()) {
        match cmp_rational(a, b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Largest element by pairwise comparison.
pub fn lex_max(points: &[LexPoint]) -> &LexPoint {
    let mut best = &points[0];
    for p in &points[1..] {
        if cmp_lex(p, best) == Ordering::Greater {
            best = p;
        }
    }
    best
}

pub fn lex_min(points: &[LexPoint]) -> &LexPoint {
    let mut best = &points[0];
    for p in &points[1..] {
        if cmp_lex(p, best) == Ordering::Less {
            best = p;
        }
    }
    best
}

const POOL: [(i64, i64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

/// A coordinate in `[0,1]`: half the time from a small pool so that prefixes
/// collide, otherwise `p/q` with `q ≤ 12`.
pub fn random_coord<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.5) {
        let (p, q) = POOL[rng.gen_range(0..POOL.len())];
        Rational::new(p, q)
    } else {
        let q = rng.gen_range(1..=12);
        Rational::new(rng.gen_range(0..=q), q)
    }
}

pub fn random_point<R: Rng>(rng: &mut R, dims: usize) -> LexPoint {
    LexPoint::new((0..dims).map(|_| random_coord(rng)).collect()).expect("unit cube")
}

/// Every vector with coordinates `m/2^depth`, `0 ≤ m ≤ 2^depth`.
pub fn dyadic_grid(dims: usize, depth: u32) -> Vec<LexPoint> {
    let side = 1i64 << depth;
    (0..dims)
        .map(|_| 0..=side)
        .multi_cartesian_product()
        .map(|ms| LexPoint::new(ms.into_iter().map(|m| Rational::new(m, side)).collect()).unwrap())
        .collect()
}
