use std::collections::BTreeSet;

use bighom_core::bigmaps::{concat, density_reduce, reverse, CellDomain, CellMap};
use bighom_core::lexint::{dense_sample, dense_sample_count, LexInterval};
use bighom_core::quotient::{fibers_match_classes, BreakpointSet};
use bighom_oracle::cells::{
    cell_nbhd, cell_topology, continuous_by, random_breakpoints, random_cellmap, random_continuous,
    random_continuous_by,
};
use bighom_oracle::topology::{all_maps, all_topologies, is_continuous, Topology};
use bighom_oracle::{embed, lex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lex_domain(atoms: usize) -> CellDomain {
    let interior = (1..atoms - 1).map(|i| lex::random_point(&mut ChaCha8Rng::seed_from_u64(i as u64), 1));
    let mut b = BreakpointSet::new(LexInterval::new(1).unwrap(), interior).unwrap();
    // Pad with fresh points until the count is right.
    let mut extra = 100;
    while b.len() < atoms {
        let p = lex::random_point(&mut ChaCha8Rng::seed_from_u64(extra), 1);
        b = BreakpointSet::new(b.ambient(), b.atoms().iter().cloned().chain([p])).unwrap();
        extra += 1;
    }
    CellDomain::Lex(b)
}

/// Every table when there are at most this many; otherwise a sample.
const EXHAUSTIVE_LIMIT: usize = 729;

#[test]
fn continuity_matches_open_preimage_model() {
    let spaces: Vec<Topology> = (1..=3).flat_map(all_topologies).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0usize;
    for atoms in 2..=4 {
        let domain = lex_domain(atoms);
        let cells = 2 * atoms - 1;
        for c in &spaces {
            let c_space = c.to_space();
            // Explicit opens of the product stay small only for few points.
            let product = (cells * c.n <= 10).then(|| cell_topology(atoms).product(c));
            let near = cell_nbhd(c);
            for x in &spaces {
                let x_space = x.to_space();
                let entries = cells * c.n;
                let total = (x.n as f64).powi(entries as i32);
                let tables: Vec<Vec<usize>> = if total <= EXHAUSTIVE_LIMIT as f64 {
                    all_maps(entries, x.n)
                } else {
                    let mut tables: Vec<Vec<usize>> = (0..100)
                        .map(|_| (0..entries).map(|_| rng.gen_range(0..x.n)).collect())
                        .collect();
                    tables.extend((0..100).map(|_| random_continuous_by(&mut rng, entries, &near, x)));
                    tables
                };
                for t in tables {
                    let map = CellMap::new(domain.clone(), c_space.clone(), x_space.clone(), t.clone()).unwrap();
                    let want = match &product {
                        Some(p) => is_continuous(p, x, &t),
                        None => continuous_by(entries, &near, x, &t),
                    };
                    assert_eq!(
                        map.check_continuity().continuous,
                        want,
                        "atoms {atoms}, C {c:?}, X {x:?}, table {t:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50_000, "{checked}");
}

#[test]
fn dense_sample_is_the_dyadic_grid() {
    for dims in 1..=3 {
        for depth in 0..=3 {
            let got = dense_sample(LexInterval::new(dims).unwrap(), depth).unwrap();
            let want = lex::dyadic_grid(dims, depth);
            assert_eq!(
                got.len() as u128,
                dense_sample_count(LexInterval::new(dims).unwrap(), depth)
            );
            assert_eq!(
                got.iter().collect::<BTreeSet<_>>(),
                want.iter().collect::<BTreeSet<_>>()
            );
        }
    }
}

#[test]
fn dyadic_capacity_grows_with_dimension() {
    for k in 2..=3 {
        let lengths: Vec<usize> = (1..=3)
            .map(|d| embed::minimal_failing_length(k, d, 9).unwrap())
            .collect();
        assert!(lengths.windows(2).all(|w| w[0] < w[1]), "k={k}: {lengths:?}");
    }
    // One grid point per coordinate leaves no room for a second element.
    assert!((1..=3).all(|d| embed::minimal_failing_length(1, d, 4) == Some(2)));
}

#[test]
fn path_operations_keep_continuity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..300 {
        let dims = 1 + i % 2;
        let f = random_cellmap(&mut rng, dims, 6, 1, 4);
        let x = f.x.clone();
        // A second path on the same target starting where f ends.
        let b = random_breakpoints(&mut rng, dims, 6);
        let cells = 2 * b.len() - 1;
        let d = cell_topology(b.len());
        let mut values = random_continuous(&mut rng, &d, &x);
        let end = *f.map.values().last().unwrap();
        // Re-draw until the start matches, or use the constant path at the end.
        for _ in 0..50 {
            if values[0] == end {
                break;
            }
            values = random_continuous(&mut rng, &d, &x);
        }
        if values[0] != end {
            values = vec![end; cells];
        }
        let g = CellMap::new(
            CellDomain::Lex(b),
            f.map.cspace().clone(),
            f.map.target().clone(),
            values,
        )
        .unwrap();
        assert!(f.map.is_continuous() && g.is_continuous());
        let h = concat(&f.map, &g).unwrap();
        assert!(h.is_continuous());
        assert!(reverse(&h).unwrap().is_continuous());
        let r = density_reduce(&h).unwrap();
        assert!(r.reduced.is_continuous());
    }
}

proptest! {
    #[test]
    fn fibers_match_densified_classes(seed in any::<u64>(), dims in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_breakpoints(&mut rng, dims, 5);
        let samples: Vec<_> = (0..12).map(|_| lex::random_point(&mut rng, dims)).chain(b.atoms().iter().cloned()).collect();
        prop_assert!(fibers_match_classes(&b, &samples).unwrap());
    }
}
