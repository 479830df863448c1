//! The finite quotient model of a cellwise-constant map and random continuous
//! maps on finite spaces.

use bighom_core::bigmaps::{CellDomain, CellMap};
use bighom_core::lexint::LexInterval;
use bighom_core::quotient::BreakpointSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::lex::random_point;
use crate::topology::{Mask, Topology};

/// Cells of an interval with `atoms` atoms: gaps open, each atom's smallest
/// open set being the atom with its adjacent gaps.
pub fn cell_topology(atoms: usize) -> Topology {
    let cells = 2 * atoms - 1;
    let mut subbase: Vec<Mask> = (1..cells).step_by(2).map(|g| 1 << g).collect();
    for a in (0..cells).step_by(2) {
        let mut m: Mask = 1 << a;
        if a > 0 {
            m |= 1 << (a - 1);
        }
        if a + 1 < cells {
            m |= 1 << (a + 1);
        }
        subbase.push(m);
    }
    Topology::from_subbase(cells, &subbase)
}

/// Open-preimage continuity of a value table on `cells × C`.
pub fn table_continuous(atoms: usize, c: &Topology, x: &Topology, values: &[usize]) -> bool {
    let domain = cell_topology(atoms).product(c);
    crate::topology::is_continuous(&domain, x, values)
}

/// A random continuous map `D → X`, built point by point in order of
/// increasing neighbourhood size and restarted on a dead end. Falls back to a
/// constant map.
pub fn random_continuous<R: Rng>(rng: &mut R, d: &Topology, x: &Topology) -> Vec<usize> {
    let nd: Vec<Mask> = (0..d.n).map(|z| d.min_nbhd(z)).collect();
    random_continuous_by(rng, d.n, |w, z| nd[z] & (1 << w) != 0, x)
}

/// As [`random_continuous`], for a domain of `n` points given by its
/// neighbourhood relation `in_nbhd(w, z)`: `w ∈ N_z`.
pub fn random_continuous_by<R: Rng>(
    rng: &mut R,
    n: usize,
    in_nbhd: impl Fn(usize, usize) -> bool,
    x: &Topology,
) -> Vec<usize> {
    let nx: Vec<Mask> = (0..x.n).map(|v| x.min_nbhd(v)).collect();
    let inside = |m: Mask, i: usize| m & (1 << i) != 0;
    let size: Vec<usize> = (0..n).map(|z| (0..n).filter(|&w| in_nbhd(w, z)).count()).collect();
    for _ in 0..50 {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        order.sort_by_key(|&z| size[z]);
        let mut values: Vec<Option<usize>> = vec![None; n];
        let mut dead = false;
        for &z in &order {
            let candidates: Vec<usize> = (0..x.n)
                .filter(|&v| {
                    (0..n).all(|w| match values[w] {
                        None => true,
                        Some(fw) => (!in_nbhd(w, z) || inside(nx[v], fw)) && (!in_nbhd(z, w) || inside(nx[fw], v)),
                    })
                })
                .collect();
            match candidates.choose(rng) {
                Some(&v) => values[z] = Some(v),
                None => {
                    dead = true;
                    break;
                }
            }
        }
        if !dead {
            return values.into_iter().map(Option::unwrap).collect();
        }
    }
    vec![rng.gen_range(0..x.n); n]
}

/// Continuity from neighbourhoods: `w ∈ N_z` implies `f(w) ∈ N_{f(z)}`.
pub fn continuous_by(n: usize, in_nbhd: impl Fn(usize, usize) -> bool, x: &Topology, values: &[usize]) -> bool {
    let nx: Vec<Mask> = (0..x.n).map(|v| x.min_nbhd(v)).collect();
    (0..n).all(|z| (0..n).all(|w| !in_nbhd(w, z) || nx[values[z]] & (1 << values[w]) != 0))
}

/// `(c', u') ∈ N_{(c, u)}` for cells of an interval and a parameter space.
pub fn cell_nbhd(c: &Topology) -> impl Fn(usize, usize) -> bool {
    let k = c.n;
    let nc: Vec<Mask> = (0..k).map(|u| c.min_nbhd(u)).collect();
    move |w, z| {
        let (cw, uw, cz, uz) = (w / k, w % k, z / k, z % k);
        let cell_ok = if cz % 2 == 1 { cw == cz } else { cw.abs_diff(cz) <= 1 };
        cell_ok && nc[uz] & (1 << uw) != 0
    }
}

/// A random breakpoint set with at most `max_interior` atoms besides the
/// endpoints.
pub fn random_breakpoints<R: Rng>(rng: &mut R, dims: usize, max_interior: usize) -> BreakpointSet {
    let count = rng.gen_range(0..=max_interior);
    let ambient = LexInterval::new(dims).expect("dims > 0");
    BreakpointSet::new(ambient, (0..count).map(|_| random_point(rng, dims))).expect("unit cube")
}

/// A random continuous cell map together with the topologies it was built from.
pub struct Instance {
    pub map: CellMap,
    pub c: Topology,
    pub x: Topology,
}

pub fn random_cellmap<R: Rng>(rng: &mut R, dims: usize, max_interior: usize, max_c: usize, max_x: usize) -> Instance {
    let b = random_breakpoints(rng, dims, max_interior);
    let (nc, nx) = (rng.gen_range(1..=max_c), rng.gen_range(1..=max_x));
    let c = crate::topology::random_topology(rng, nc);
    let x = crate::topology::random_topology(rng, nx);
    let cells = 2 * b.len() - 1;
    let values = random_continuous_by(rng, cells * c.n, cell_nbhd(&c), &x);
    let map = CellMap::new(CellDomain::Lex(b), c.to_space(), x.to_space(), values).expect("table fits");
    Instance { map, c, x }
}
