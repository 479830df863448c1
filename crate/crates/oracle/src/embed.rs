//! Integer simulator for dyadic-grid embeddings and exhaustive capacity search.
//!
//! Coordinates are stored as numerators over `2^k`.

use itertools::Itertools;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// Numerators over `2^k`.
    pub coords: Vec<i64>,
    pub saturations: usize,
}

/// Nearest grid numerator to the midpoint, strictly inside `(lo, hi)` and
/// `(0, 2^k)`; the smaller one on ties.
fn pick(lo: i64, hi: i64, k: u32) -> Option<i64> {
    let top = 1i64 << k;
    ((lo + 1).max(1)..hi.min(top)).min_by_key(|m| ((2 * m - lo - hi).abs(), *m))
}

/// Places ranks in the order given. `Err(step)` when the element inserted at
/// `step` saturates every coordinate.
pub fn simulate(sequence: &[usize], k: u32, dims: usize) -> Result<Vec<Placement>, usize> {
    let top = 1i64 << k;
    let half = top / 2;
    let mut placed: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut out = Vec::new();
    for (step, &rank) in sequence.iter().enumerate() {
        let mut prefix: Vec<i64> = Vec::new();
        let mut result = None;
        while prefix.len() < dims {
            let d = prefix.len();
            let same: Vec<&(usize, Vec<i64>)> = placed.iter().filter(|(_, c)| c[..d] == prefix[..]).collect();
            let lo = same
                .iter()
                .filter(|(r, _)| *r < rank)
                .map(|(_, c)| c[d])
                .max()
                .unwrap_or(0);
            let hi = same
                .iter()
                .filter(|(r, _)| *r > rank)
                .map(|(_, c)| c[d])
                .min()
                .unwrap_or(top);
            match pick(lo, hi, k) {
                Some(m) => {
                    let saturations = prefix.len();
                    let mut coords = prefix.clone();
                    coords.push(m);
                    coords.resize(dims, half);
                    result = Some(Placement { coords, saturations });
                    break;
                }
                None => prefix.push(lo),
            }
        }
        let placement = result.ok_or(step)?;
        placed.push((rank, placement.coords.clone()));
        out.push(placement);
    }
    Ok(out)
}

/// Smallest chain length for which some insertion order runs out of room,
/// searching lengths up to `max_len`.
pub fn minimal_failing_length(k: u32, dims: usize, max_len: usize) -> Option<usize> {
    (1..=max_len).find(|&n| (0..n).permutations(n).any(|seq| simulate(&seq, k, dims).is_err()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_chain_spills_over() {
        let out = simulate(&[0, 1, 2], 2, 2).unwrap();
        assert_eq!(out[0].coords, [2, 2]);
        assert_eq!(out[1].coords, [3, 2]);
        assert_eq!(out[2].coords, [3, 3]);
        assert_eq!(out[2].saturations, 1);
    }

    #[test]
    fn one_grid_point() {
        assert_eq!(simulate(&[0, 1], 1, 1), Err(1));
        assert_eq!(minimal_failing_length(1, 1, 4), Some(2));
    }
}
