//! Topologies on `{0..n}` as explicit lists of open sets.

use std::collections::BTreeSet;

use bighom_core::finspace::FinSpace;
use itertools::Itertools;
use rand::Rng;

pub type Mask = u64;

fn bit(i: usize) -> Mask {
    1 << i
}

fn full(n: usize) -> Mask {
    if n == 64 {
        Mask::MAX
    } else {
        bit(n) - 1
    }
}

/// A finite topology given by all of its open sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Topology {
    pub n: usize,
    /// Sorted, containing `∅` and the whole set.
    pub opens: Vec<Mask>,
}

pub fn point_label(i: usize) -> String {
    format!("p{i}")
}

impl Topology {
    /// The coarsest topology containing `subbase`: close under binary
    /// intersections, then under unions.
    pub fn from_subbase(n: usize, subbase: &[Mask]) -> Topology {
        let mut basis: BTreeSet<Mask> = subbase.iter().copied().collect();
        basis.insert(full(n));
        loop {
            let items: Vec<Mask> = basis.iter().copied().collect();
            let before = basis.len();
            for (a, b) in items.iter().tuple_combinations() {
                basis.insert(a & b);
            }
            if basis.len() == before {
                break;
            }
        }
        let mut opens: BTreeSet<Mask> = basis;
        opens.insert(0);
        loop {
            let items: Vec<Mask> = opens.iter().copied().collect();
            let before = opens.len();
            for (a, b) in items.iter().tuple_combinations() {
                opens.insert(a | b);
            }
            if opens.len() == before {
                break;
            }
        }
        Topology {
            n,
            opens: opens.into_iter().collect(),
        }
    }

    pub fn discrete(n: usize) -> Topology {
        Topology::from_subbase(n, &(0..n).map(bit).collect::<Vec<_>>())
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.opens.binary_search(&m).is_ok()
    }

    /// Intersection of every open set containing `x`.
    pub fn min_nbhd(&self, x: usize) -> Mask {
        self.opens
            .iter()
            .filter(|o| *o & bit(x) != 0)
            .fold(full(self.n), |acc, o| acc & o)
    }

    /// Equivalence classes of the relation generated by `y ∈ N_x`: the
    /// transitive closure of it and its converse.
    pub fn equiv_classes(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut rel = vec![vec![false; n]; n];
        for x in 0..n {
            let nx = self.min_nbhd(x);
            for y in 0..n {
                if nx & bit(y) != 0 {
                    rel[x][y] = true;
                    rel[y][x] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if !classes.iter().any(|c| c.contains(&x)) {
                classes.push((0..n).filter(|&y| rel[x][y]).collect());
            }
        }
        classes
    }

    /// Every singleton is closed.
    pub fn is_t1(&self) -> bool {
        (0..self.n).all(|x| self.is_open(full(self.n) & !bit(x)))
    }

    /// Distinct points are separated by some open set.
    pub fn is_t0(&self) -> bool {
        (0..self.n)
            .tuple_combinations()
            .all(|(x, y)| self.opens.iter().any(|o| (o & bit(x) != 0) != (o & bit(y) != 0)))
    }

    /// Size of a smallest family of opens whose unions give every open set.
    pub fn weight(&self) -> usize {
        let nonempty: Vec<Mask> = self.opens.iter().copied().filter(|o| *o != 0).collect();
        let is_basis = |family: &[Mask]| {
            self.opens
                .iter()
                .all(|&o| family.iter().filter(|b| *b & !o == 0).fold(0, |acc, b| acc | b) == o)
        };
        (0..=nonempty.len())
            .find(|&k| nonempty.iter().copied().combinations(k).any(|f| is_basis(&f)))
            .expect("the opens themselves form a basis")
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.n).map(point_label).collect()
    }

    pub fn to_space(&self) -> FinSpace {
        let opens: Vec<Vec<String>> = self
            .opens
            .iter()
            .map(|&o| (0..self.n).filter(|&i| o & bit(i) != 0).map(point_label).collect())
            .collect();
        FinSpace::from_opens(self.labels(), &opens).expect("closed family")
    }

    /// Every open set of `X × Y`, with `(x, y)` at index `x · |Y| + y`.
    pub fn product(&self, other: &Topology) -> Topology {
        let n = self.n * other.n;
        let rect = |a: Mask, b: Mask| {
            let mut m = 0;
            for x in 0..self.n {
                for y in 0..other.n {
                    if a & bit(x) != 0 && b & bit(y) != 0 {
                        m |= bit(x * other.n + y);
                    }
                }
            }
            m
        };
        let subbase: Vec<Mask> = self
            .opens
            .iter()
            .cartesian_product(&other.opens)
            .map(|(&a, &b)| rect(a, b))
            .collect();
        Topology::from_subbase(n, &subbase)
    }
}

/// Preimage of every open set is open.
pub fn is_continuous(source: &Topology, target: &Topology, values: &[usize]) -> bool {
    target.opens.iter().all(|&v| {
        let pre = (0..source.n)
            .filter(|&x| v & bit(values[x]) != 0)
            .fold(0, |acc, x| acc | bit(x));
        source.is_open(pre)
    })
}

/// All topologies on `n` points, obtained by closing every family of subsets.
pub fn all_topologies(n: usize) -> Vec<Topology> {
    let subsets: Vec<Mask> = (0..bit(n)).collect();
    let mut seen = BTreeSet::new();
    for family in 0u64..(1 << subsets.len()) {
        let subbase: Vec<Mask> = (0..subsets.len())
            .filter(|i| family & bit(*i) != 0)
            .map(|i| subsets[i])
            .collect();
        seen.insert(Topology::from_subbase(n, &subbase));
    }
    seen.into_iter().collect()
}

/// Closure of a random subbase on `n` points.
pub fn random_topology<R: Rng>(rng: &mut R, n: usize) -> Topology {
    let size = rng.gen_range(0..=n + 1);
    let subbase: Vec<Mask> = (0..size).map(|_| rng.gen_range(0..bit(n))).collect();
    Topology::from_subbase(n, &subbase)
}

/// Number of reflexive transitive relations on `n` points, by enumeration.
pub fn count_preorders(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(a, b)| a != b).collect();
    (0u64..1 << pairs.len())
        .filter(|rel| {
            let r = |a: usize, b: usize| {
                a == b
                    || pairs
                        .iter()
                        .position(|p| *p == (a, b))
                        .is_some_and(|i| rel & bit(i) != 0)
            };
            (0..n)
                .cartesian_product(0..n)
                .cartesian_product(0..n)
                .all(|((a, b), c)| !(r(a, b) && r(b, c)) || r(a, c))
        })
        .count()
}

/// All maps `{0..n} → {0..m}` as value vectors.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..n).map(|_| 0..m).multi_cartesian_product().collect()
}

/// The two-point space `{early, late}` with `{early}` open when
/// `early_open`, otherwise `{late}` open.
pub fn switch_space(early_open: bool) -> Topology {
    Topology::from_subbase(2, &[if early_open { 0b01 } else { 0b10 }])
}

/// Continuity of `H(x, early) = h(x)`, `H(x, late) = k(x)` on `X × S`.
pub fn switch_continuous(x: &Topology, y: &Topology, h: &[usize], k: &[usize], early_open: bool) -> bool {
    switch_continuous_on(&x.product(&switch_space(early_open)), y, h, k)
}

/// As [`switch_continuous`] with `X × S` already built.
pub fn switch_continuous_on(x_times_s: &Topology, y: &Topology, h: &[usize], k: &[usize]) -> bool {
    let values: Vec<usize> = h.iter().zip(k).flat_map(|(a, b)| [*a, *b]).collect();
    is_continuous(x_times_s, y, &values)
}
