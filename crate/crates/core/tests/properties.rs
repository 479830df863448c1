use bighom_core::bigmaps::{concat, density_reduce, reverse, Cell, CellDomain, CellMap};
use bighom_core::cardinal::{
    compare, hat, is_strong_limit, normalize, AxiomMode, CardinalExpr, Comparison, Ordinal, Trivalent,
};
use bighom_core::embedding::{embed_order, replay, GridPolicy, InsertionOrder};
use bighom_core::finspace::{FinSpace, Mask};
use bighom_core::lexint::{
    dense_sample, lex_compare, reverse_point, sup_finite, wedge_map, wedge_section, LexInterval, LexPoint,
};
use bighom_core::orders::{compose, FinOrder, MonotoneMap};
use bighom_core::quotient::{densify, quotient_by_breakpoints, BreakpointSet, MixedPoint};
use bighom_core::Rational;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = Rational> {
    prop_oneof![
        prop::sample::select(vec![(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)]),
        (1i64..=12).prop_flat_map(|q| (0..=q, Just(q))),
    ]
    .prop_map(|(p, q)| Rational::new(p, q))
}

fn point(dims: usize) -> impl Strategy<Value = LexPoint> {
    prop::collection::vec(coord(), dims).prop_map(|c| LexPoint::new(c).unwrap())
}

fn points(dims: usize, max: usize) -> impl Strategy<Value = Vec<LexPoint>> {
    prop::collection::vec(point(dims), 1..=max)
}

fn breakpoints(dims: usize, max: usize) -> impl Strategy<Value = BreakpointSet> {
    prop::collection::vec(point(dims), 0..=max)
        .prop_map(move |a| BreakpointSet::new(LexInterval::new(dims).unwrap(), a).unwrap())
}

fn cardinal() -> impl Strategy<Value = CardinalExpr> {
    let leaf = prop_oneof![
        (0u64..6).prop_map(CardinalExpr::Finite),
        (0u64..4).prop_map(CardinalExpr::aleph),
        (0u64..4).prop_map(CardinalExpr::beth),
        Just(CardinalExpr::Aleph(Ordinal::omega())),
        Just(CardinalExpr::Beth(Ordinal::omega())),
        Just(CardinalExpr::Beth(Ordinal::omega().succ().unwrap())),
    ];
    leaf.prop_recursive(5, 64, 1, |inner| {
        prop_oneof![
            inner.clone().prop_map(CardinalExpr::pow),
            inner.clone().prop_map(CardinalExpr::succ),
            inner.prop_map(CardinalExpr::hat_of),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn normalization_is_idempotent(e in cardinal()) {
        prop_assert!(e.depth() <= 6);
        if let Ok(n) = normalize(&e) {
            prop_assert_eq!(normalize(&n).unwrap(), n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn comparison_is_antisymmetric(a in cardinal(), b in cardinal()) {
        for mode in [AxiomMode::Zfc, AxiomMode::Gch] {
            if let (Ok(ab), Ok(ba)) = (compare(&a, &b, mode), compare(&b, &a, mode)) {
                prop_assert_eq!(ab, ba.reverse());
            }
        }
    }

    #[test]
    fn cantor_for_every_generated_cardinal(k in cardinal()) {
        if normalize(&CardinalExpr::pow(k.clone())).is_ok() {
            prop_assert_eq!(compare(&CardinalExpr::pow(k.clone()), &k, AxiomMode::Zfc).unwrap(), Comparison::Gt);
        }
    }

    #[test]
    fn strong_limit_is_fixed_by_hat(k in cardinal()) {
        if let Ok(Trivalent::True) = is_strong_limit(&k, AxiomMode::Zfc) {
            prop_assert_eq!(hat(&k).unwrap(), normalize(&k).unwrap());
        }
    }
}

#[test]
fn limit_beths_are_strong_limits_fixed_by_hat() {
    let w = Ordinal::omega();
    let limits = [
        w.clone(),
        w.add(&w).unwrap(),
        Ordinal::omega_pow(Ordinal::finite(2)),
        Ordinal::omega_pow(w.clone()),
        Ordinal::omega_pow(Ordinal::omega_pow(w.clone())),
    ];
    for lim in limits {
        let b = CardinalExpr::Beth(lim);
        assert_eq!(is_strong_limit(&b, AxiomMode::Zfc).unwrap(), Trivalent::True);
        assert_eq!(hat(&b).unwrap(), b);
    }
}

fn monotone_images(n: usize, m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..m, n).prop_map(|mut v| {
        v.sort_unstable();
        v
    })
}

fn chain_map(domain: &FinOrder, codomain: &FinOrder, images: &[usize]) -> MonotoneMap {
    let labels: Vec<&str> = images.iter().map(|&i| codomain.label(i)).collect();
    MonotoneMap::from_images(domain.clone(), codomain.clone(), &labels).unwrap()
}

proptest! {
    #[test]
    fn order_reverse_is_involution(n in 1usize..10) {
        let o = FinOrder::chain("x", n).unwrap();
        prop_assert_eq!(o.reverse().reverse(), o);
    }

    #[test]
    fn compose_is_associative(
        (a, b, c, d) in (1usize..6, 1usize..6, 1usize..6, 1usize..6),
        seed in any::<[usize; 3]>(),
    ) {
        let orders: Vec<FinOrder> = [("a", a), ("b", b), ("c", c), ("d", d)]
            .iter()
            .map(|(p, n)| FinOrder::chain(p, *n).unwrap())
            .collect();
        let images = |n: usize, m: usize, s: usize| {
            let mut v: Vec<usize> = (0..n).map(|i| (i * 7 + s) % m).collect();
            v.sort_unstable();
            v
        };
        let f = chain_map(&orders[0], &orders[1], &images(a, b, seed[0]));
        let g = chain_map(&orders[1], &orders[2], &images(b, c, seed[1]));
        let h = chain_map(&orders[2], &orders[3], &images(c, d, seed[2]));
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left.graph(), right.graph());
    }

    #[test]
    fn monotone_images_validate(v in monotone_images(5, 4)) {
        let (a, b) = (FinOrder::chain("a", 5).unwrap(), FinOrder::chain("b", 4).unwrap());
        prop_assert!(chain_map(&a, &b, &v).validate().valid);
    }
}

proptest! {
    #[test]
    fn sup_is_least_upper_bound(pts in (1usize..=3).prop_flat_map(|d| points(d, 12)), depth in 1u32..=2) {
        let sup = sup_finite(&pts).unwrap();
        for p in &pts {
            prop_assert!(p <= &sup);
        }
        prop_assert!(pts.contains(&sup));
        let grid = dense_sample(LexInterval::new(sup.dims()).unwrap(), depth).unwrap();
        for g in grid.iter().filter(|g| pts.iter().all(|p| p <= *g)) {
            prop_assert!(&sup <= g);
        }
    }

    #[test]
    fn wedge_map_is_monotone_and_invertible(p in point(3), q in point(3)) {
        let (wp, wq) = (wedge_map(&p), wedge_map(&q));
        prop_assert_eq!(p.cmp(&q), wp.cmp(&wq));
        prop_assert_eq!(wedge_section(&wp, 3).unwrap(), p);
    }

    #[test]
    fn reverse_point_is_anti_isomorphic_involution(p in point(3), q in point(3)) {
        prop_assert_eq!(reverse_point(&reverse_point(&p)), p.clone());
        prop_assert_eq!(lex_compare(&reverse_point(&p), &reverse_point(&q)).unwrap(), q.cmp(&p));
    }
}

proptest! {
    #[test]
    fn emitted_values_lie_inside_bounds(n in 1usize..40, k in 1u32..5, dims in 1usize..4, seed in any::<u64>()) {
        let base = FinOrder::chain("e", n).unwrap();
        let mut seq = base.labels().to_vec();
        let len = seq.len();
        for i in 0..len {
            seq.swap(i, (seed as usize).wrapping_mul(i + 31) % len);
        }
        let order = InsertionOrder::new(base, seq).unwrap();
        for grid in [GridPolicy::Exact, GridPolicy::Dyadic(k)] {
            let Ok((emb, trace)) = embed_order(&order, LexInterval::new(dims).unwrap(), grid) else {
                continue;
            };
            prop_assert!(emb.is_strictly_increasing());
            for e in &trace.entries {
                let last = e.steps.last().unwrap();
                let v = emb.get(&e.label).unwrap().coord(e.coordinate());
                prop_assert!(!last.saturated && &last.lower < v && v < &last.upper);
            }
            prop_assert_eq!(replay(&trace).unwrap(), emb);
        }
    }
}

proptest! {
    #[test]
    fn quotient_on_atoms_and_endpoints(b in (1usize..=3).prop_flat_map(|d| breakpoints(d, 6))) {
        let (j, p) = quotient_by_breakpoints(&b);
        prop_assert_eq!(j.atoms, b.len());
        for (i, a) in b.atoms().iter().enumerate() {
            prop_assert_eq!(p.eval(a).unwrap(), MixedPoint::atom(i));
        }
        prop_assert_eq!(p.eval(&b.ambient().min()).unwrap(), j.min());
        prop_assert_eq!(p.eval(&b.ambient().max()).unwrap(), j.max());
    }

    #[test]
    fn one_dim_quotient_injective(b in breakpoints(1, 6), samples in points(1, 10)) {
        let (_, p) = quotient_by_breakpoints(&b);
        for s in &samples {
            for t in &samples {
                if s != t {
                    prop_assert_ne!(p.eval(s).unwrap(), p.eval(t).unwrap());
                }
            }
        }
    }

    #[test]
    fn densified_relation_is_transitive(b in (1usize..=2).prop_flat_map(|d| breakpoints(d, 4)), samples in prop::collection::vec(any::<u8>(), 6)) {
        let d = densify(&b);
        let dims = b.ambient().dims();
        // Samples built from the atoms' own coordinates so that fibers are hit.
        let pool: Vec<Rational> = b.atoms().iter().flat_map(|a| a.coords().to_vec()).chain([Rational::half()]).collect();
        let pts: Vec<LexPoint> = samples
            .iter()
            .map(|&c| {
                let coords = (0..dims).map(|i| pool[(c as usize + 3 * i) % pool.len()].clone()).collect();
                LexPoint::new(coords).unwrap()
            })
            .collect();
        for x in &pts {
            for y in &pts {
                for z in &pts {
                    if d.related(x, y).unwrap() && d.related(y, z).unwrap() {
                        prop_assert!(d.related(x, z).unwrap());
                    }
                }
            }
        }
    }
}

fn preorder_space(n: usize, seed: u64) -> FinSpace {
    // A random preorder from a random relation, closed transitively.
    let mut nbhd: Vec<Mask> = (0..n).map(|i| 1 << i).collect();
    let mut s = seed;
    for x in 0..n {
        for y in 0..n {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if s >> 62 == 0 {
                nbhd[x] |= 1 << y;
            }
        }
    }
    loop {
        let before = nbhd.clone();
        for x in 0..n {
            for y in 0..n {
                if nbhd[x] & (1 << y) != 0 {
                    nbhd[x] |= nbhd[y];
                }
            }
        }
        if before == nbhd {
            break;
        }
    }
    FinSpace::from_masks((0..n).map(|i| format!("x{i}")), nbhd).unwrap()
}

proptest! {
    #[test]
    fn weight_bounded_by_size_with_equality_iff_t0(n in 1usize..8, seed in any::<u64>()) {
        let x = preorder_space(n, seed);
        prop_assert!(x.weight() <= n);
        prop_assert_eq!(x.weight() == n, x.is_t0());
        prop_assert_eq!(x.compact_weight(), x.weight());
        prop_assert_eq!(x.is_t1(), x.equiv_classes().iter().all(|c| c.len() == 1) && x.nbhd_masks().iter().all(|m| m.count_ones() == 1));
    }
}

fn path(atoms: Vec<LexPoint>, dims: usize, values: Vec<usize>) -> CellMap {
    let b = BreakpointSet::new(LexInterval::new(dims).unwrap(), atoms).unwrap();
    let cells = 2 * b.len() - 1;
    let values: Vec<usize> = (0..cells).map(|c| values[c % values.len()]).collect();
    CellMap::new(
        CellDomain::Lex(b),
        FinSpace::point(),
        FinSpace::discrete(3).unwrap(),
        values,
    )
    .unwrap()
}

fn path_strategy(dims: usize) -> impl Strategy<Value = CellMap> {
    (
        prop::collection::vec(point(dims), 0..5),
        prop::collection::vec(0usize..3, 1..12),
    )
        .prop_map(move |(a, v)| path(a, dims, v))
}

fn glue(f: &CellMap, g: &CellMap) -> CellMap {
    // Force g's start to f's end.
    let mut values = g.values().to_vec();
    values[0] = *f.values().last().unwrap();
    CellMap::new(g.domain().clone(), g.cspace().clone(), g.target().clone(), values).unwrap()
}

fn agree_after_refinement(f: &CellMap, g: &CellMap) -> bool {
    let extra: Vec<LexPoint> = g.domain().as_lex().unwrap().atoms().to_vec();
    let fr = f.refine(extra).unwrap();
    let gr = g.refine(f.domain().as_lex().unwrap().atoms().to_vec()).unwrap();
    fr == gr
}

proptest! {
    #[test]
    fn concat_associative_up_to_cells((f, g, h) in (path_strategy(2), path_strategy(2), path_strategy(2))) {
        let g = glue(&f, &g);
        let h = glue(&g, &h);
        let left = concat(&concat(&f, &g).unwrap(), &h).unwrap();
        let right = concat(&f, &concat(&g, &h).unwrap()).unwrap();
        // Both traverse f, g, h in turn over different subintervals.
        prop_assert_eq!(left.cell_sequence(0), right.cell_sequence(0));
        prop_assert_eq!(left.cells(), right.cells());
    }

    #[test]
    fn reverse_is_involution_and_anti_concat(f in path_strategy(2), g in path_strategy(2)) {
        let g = glue(&f, &g);
        prop_assert_eq!(reverse(&reverse(&f).unwrap()).unwrap(), f.clone());
        let lhs = reverse(&concat(&f, &g).unwrap()).unwrap();
        let rhs = concat(&reverse(&g).unwrap(), &reverse(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs.cell_sequence(0), rhs.cell_sequence(0));
        prop_assert!(agree_after_refinement(&lhs, &rhs));
    }

    #[test]
    fn reduction_keeps_endpoints_and_atoms(a in prop::collection::vec(point(1), 0..6), v in prop::collection::vec(0usize..2, 1..4)) {
        // X indiscrete, so every table is continuous.
        let b = BreakpointSet::new(LexInterval::new(1).unwrap(), a).unwrap();
        let cells = 2 * b.len() - 1;
        let values: Vec<usize> = (0..cells).map(|c| v[c % v.len()]).collect();
        let f = CellMap::new(CellDomain::Lex(b.clone()), FinSpace::point(), FinSpace::indiscrete(2).unwrap(), values).unwrap();
        let r = density_reduce(&f).unwrap();
        let last = b.len() - 1;
        prop_assert_eq!(r.reduced.value(Cell::Atom(0), 0), f.value(Cell::Atom(0), 0));
        prop_assert_eq!(r.reduced.value(Cell::Atom(last), 0), f.value(Cell::Atom(last), 0));
        let images: Vec<MixedPoint> = b.atoms().iter().map(|t| r.quotient.eval(t).unwrap()).collect();
        prop_assert!(images.windows(2).all(|w| w[0] < w[1]));
    }
}
