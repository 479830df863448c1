//! Monotone maps between chains, as rank vectors.

use bighom_core::orders::{Extension, FinOrder, MonotoneMap};
use itertools::Itertools;
use rand::seq::index::sample;
use rand::Rng;

/// All strictly increasing maps `{0..m} → {0..n}`.
pub fn increasing_injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(m).collect()
}

/// All non-decreasing maps from `{0..n}` onto `{0..m}`.
pub fn monotone_surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 || m > n {
        return Vec::new();
    }
    // Choose the m - 1 positions where the value steps up.
    (1..n)
        .combinations(m - 1)
        .map(|cuts| {
            let mut out = Vec::with_capacity(n);
            let mut v = 0;
            for i in 0..n {
                if cuts.contains(&i) {
                    v += 1;
                }
                out.push(v);
            }
            out
        })
        .collect()
}

/// `g(j) = max{ i ∈ A : h(i) ≤ j }`, `0` when empty, for a graph `A → J`.
pub fn lower_adjoint(graph: &[(usize, usize)], j_len: usize) -> Vec<usize> {
    (0..j_len)
        .map(|j| {
            let below: Vec<usize> = graph.iter().filter(|(_, hi)| *hi <= j).map(|(i, _)| *i).collect();
            below.into_iter().max().unwrap_or(0)
        })
        .collect()
}

/// `f(t) = max g⁻¹(t)`.
pub fn max_fiber(g: &[usize], t_len: usize) -> Vec<usize> {
    (0..t_len)
        .map(|t| {
            let fiber: Vec<usize> = (0..g.len()).filter(|&i| g[i] == t).collect();
            *fiber.last().expect("surjective")
        })
        .collect()
}

/// A map between chains `a0 < a1 < …` and `b0 < b1 < …` with the given rank graph.
pub fn to_map(domain: &FinOrder, codomain: &FinOrder, graph: &[(usize, usize)]) -> MonotoneMap {
    let graph = graph
        .iter()
        .map(|&(a, b)| (domain.label(a).to_string(), codomain.label(b).to_string()))
        .collect();
    MonotoneMap::from_graph_unchecked(domain.clone(), codomain.clone(), graph, Extension::None)
}

/// Rank graph of a map.
pub fn ranks(map: &MonotoneMap) -> Vec<(usize, usize)> {
    map.graph()
        .iter()
        .map(|(a, b)| (map.domain().rank(a).unwrap(), map.codomain().rank(b).unwrap()))
        .collect()
}

/// A random strictly increasing injection from a random subset `A` of
/// `{0..i_len}` into `{0..j_len}`; `A` is everything when `total`.
pub fn random_injection<R: Rng>(rng: &mut R, i_len: usize, j_len: usize, total: bool) -> Vec<(usize, usize)> {
    let a_len = if total {
        i_len
    } else {
        rng.gen_range(1..=i_len.min(j_len))
    };
    let mut a = sample(rng, i_len, a_len).into_vec();
    let mut b = sample(rng, j_len, a_len).into_vec();
    a.sort_unstable();
    b.sort_unstable();
    a.into_iter().zip(b).collect()
}

/// A random non-decreasing surjection `{0..n} → {0..m}`.
pub fn random_surjection<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    let mut cuts = sample(rng, n - 1, m - 1).into_iter().map(|c| c + 1).collect::<Vec<_>>();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut v = 0;
    for i in 0..n {
        if cuts.binary_search(&i).is_ok() {
            v += 1;
        }
        out.push(v);
    }
    out
}
