//! Small exhaustive oracle suites and fixture files, reported per module.
//!
//! A fixture is `<dir>/<module>/<name>.json` holding
//! `{"args":[..],"exit":N,"expect":{..}}`. Arguments starting with `@` name
//! files relative to the module directory. `expect` must be contained in the
//! output document, and every output must read back unchanged.

use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use bighom_core::bigmaps::{CellDomain, CellMap};
use bighom_core::cardinal::{self, AxiomMode, CardinalExpr, Comparison};
use bighom_core::embedding::{embed_order, EmbedError, GridPolicy, InsertionOrder};
use bighom_core::lexint::{dense_sample, reverse_point, sup_finite, LexInterval};
use bighom_core::orders::{injection_from_surjection, surjection_from_injection, FinOrder};
use bighom_core::quotient::{fibers_match_classes, BreakpointSet};
use bighom_core::Rational;
use bighom_oracle::{cardinals, cells, embed, lex, orders, topology};
use clap::Parser;
use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{dispatch, Exit, Failure, Manifest, Module, Outcome};

/// Environment variable naming the fixture directory.
pub const FIXTURES_VAR: &str = "BIGHOM_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURES_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseFailure {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleReport {
    pub module: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<CaseFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub fixtures: String,
    pub passed: usize,
    pub failed: usize,
    pub modules: Vec<ModuleReport>,
}

/// Failures kept per module in the report.
const MAX_LISTED: usize = 20;

struct Tally {
    passed: usize,
    failures: Vec<CaseFailure>,
}

impl Tally {
    fn check(&mut self, ok: bool, name: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.fail(name(), "disagrees with the oracle".into());
        }
    }

    fn fail(&mut self, name: String, reason: String) {
        self.failures.push(CaseFailure { name, reason });
    }
}

pub fn run(only: Option<Module>) -> Result<Outcome, Failure> {
    let dir = fixture_dir();
    let mut modules = Vec::new();
    for module in Module::ALL.into_iter().filter(|m| only.is_none_or(|o| o == *m)) {
        let mut t = Tally {
            passed: 0,
            failures: Vec::new(),
        };
        match module {
            Module::Cardinal => cardinal_suite(&mut t),
            Module::Orders => orders_suite(&mut t),
            Module::Lexint => lexint_suite(&mut t),
            Module::Embed => embed_suite(&mut t),
            Module::Quotient => quotient_suite(&mut t),
            Module::Finspace => finspace_suite(&mut t),
            Module::Bigmaps => bigmaps_suite(&mut t),
        }
        run_fixtures(&dir, module, &mut t);
        let failed = t.failures.len();
        t.failures.truncate(MAX_LISTED);
        modules.push(ModuleReport {
            module: module.name().into(),
            passed: t.passed,
            failed,
            failures: t.failures,
        });
    }
    let report = Report {
        fixtures: dir.display().to_string(),
        passed: modules.iter().map(|m| m.passed).sum(),
        failed: modules.iter().map(|m| m.failed).sum(),
        modules,
    };
    let exit = if report.failed == 0 {
        Exit::Success
    } else {
        Exit::Invalid
    };
    Outcome::emit(exit, &report)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fixture {
    args: Vec<String>,
    exit: u8,
    #[serde(default)]
    expect: Option<Value>,
}

/// Equality, except that objects need only the keys `expected` lists.
fn contains(actual: &Value, expected: &Value) -> bool {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => e.iter().all(|(k, v)| a.get(k).is_some_and(|x| contains(x, v))),
        _ => actual == expected,
    }
}

fn run_fixture(path: &Path, base: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let fixture: Fixture = serde_json::from_str(&text).map_err(|e| format!("malformed fixture: {e}"))?;
    let args = fixture.args.iter().map(|a| match a.strip_prefix('@') {
        Some(rel) => base.join(rel).display().to_string(),
        None => a.clone(),
    });
    let out = match Manifest::try_parse_from(std::iter::once("bighom".to_string()).chain(args)) {
        Ok(m) if matches!(m.command, crate::Command::Selftest(_)) => {
            return Err("fixtures may not run selftest".into());
        }
        Ok(m) => dispatch(&m),
        Err(e) => Outcome::error(Exit::Invalid, &e.to_string()),
    };
    if out.exit.code() != fixture.exit {
        return Err(format!(
            "exit {} (expected {}): {}",
            out.exit.code(),
            fixture.exit,
            out.doc
        ));
    }
    if let Some(e) = &fixture.expect {
        if !contains(&out.doc, e) {
            return Err(format!("output {} does not contain {e}", out.doc));
        }
    }
    out.round_trip()
}

fn run_fixtures(dir: &Path, module: Module, t: &mut Tally) {
    let base = dir.join(module.name());
    let Ok(entries) = std::fs::read_dir(&base) else { return };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    for path in files {
        let name = format!(
            "{}/{}",
            module.name(),
            path.file_name().unwrap_or_default().to_string_lossy()
        );
        match run_fixture(&path, &base) {
            Ok(()) => t.passed += 1,
            Err(reason) => t.fail(name, reason),
        }
    }
}

fn cardinal_suite(t: &mut Tally) {
    let exprs: Vec<CardinalExpr> = cardinals::expressions(2)
        .into_iter()
        .filter(|e| cardinal::normalize(e).is_ok())
        .collect();
    let verdict = |a: &CardinalExpr, b: &CardinalExpr, m: &cardinals::Model| -> Option<Comparison> {
        Some(m.eval(a)?.cmp(&m.eval(b)?).into())
    };
    for a in &exprs {
        for b in &exprs {
            let (Ok(zfc), Ok(gch)) = (
                cardinal::compare(a, b, AxiomMode::Zfc),
                cardinal::compare(a, b, AxiomMode::Gch),
            ) else {
                t.fail(format!("compare {a} {b}"), "returned an error".into());
                continue;
            };
            let m1 = verdict(a, b, &cardinals::GCH);
            let m2 = verdict(a, b, &cardinals::DOUBLE_JUMP);
            let sound = !zfc.is_known() || (gch == zfc && Some(zfc) == m1 && Some(zfc) == m2);
            t.check(sound && Some(gch) == m1, || format!("compare {a} {b}"));
        }
        if let Ok(p) = cardinal::normalize(&CardinalExpr::pow(a.clone())) {
            let gt = cardinal::compare(&p, a, AxiomMode::Zfc) == Ok(Comparison::Gt);
            t.check(gt, || format!("Cantor for {a}"));
        }
    }
}

fn orders_suite(t: &mut Tally) {
    for i_len in 1..=4 {
        for j_len in 1..=4 {
            let (i, j) = (
                FinOrder::chain("i", i_len).unwrap(),
                FinOrder::chain("j", j_len).unwrap(),
            );
            for a_len in 1..=i_len.min(j_len) {
                for a in (0..i_len).combinations(a_len) {
                    for b in orders::increasing_injections(a_len, j_len) {
                        let graph: Vec<(usize, usize)> = a.iter().copied().zip(b).collect();
                        let ok = surjection_from_injection(&orders::to_map(&i, &j, &graph)).is_ok_and(|g| {
                            let ranks: Vec<usize> = (0..j_len)
                                .map(|r| i.rank(g.eval(j.label(r)).unwrap()).unwrap())
                                .collect();
                            ranks == orders::lower_adjoint(&graph, j_len)
                        });
                        t.check(ok, || format!("injection {graph:?} into {j_len}"));
                    }
                }
            }
            if i_len <= j_len {
                for g in orders::monotone_surjections(j_len, i_len) {
                    let graph: Vec<(usize, usize)> = g.iter().copied().enumerate().collect();
                    let ok = injection_from_surjection(&orders::to_map(&j, &i, &graph)).is_ok_and(|f| {
                        let ranks: Vec<usize> = (0..i_len)
                            .map(|r| j.rank(f.eval(i.label(r)).unwrap()).unwrap())
                            .collect();
                        ranks == orders::max_fiber(&g, i_len)
                    });
                    t.check(ok, || format!("surjection {g:?}"));
                }
            }
        }
    }
}

fn lexint_suite(t: &mut Tally) {
    let mut rng = StdRng::seed_from_u64(1);
    let grid = lex::dyadic_grid(2, 2);
    for _ in 0..300 {
        let size = rng.gen_range(1..=8);
        let points: Vec<_> = grid.iter().cloned().choose_multiple(&mut rng, size);
        let ok = sup_finite(&points).is_ok_and(|s| lex::cmp_lex(&s, lex::lex_max(&points)) == Ordering::Equal);
        t.check(ok, || format!("sup of {points:?}"));
    }
    for dims in 1..=2 {
        for depth in 0..=2 {
            let mut got = dense_sample(LexInterval::new(dims).unwrap(), depth).unwrap();
            let mut want = lex::dyadic_grid(dims, depth);
            got.sort();
            want.sort();
            t.check(got == want, || format!("dense sample dims={dims} depth={depth}"));
        }
    }
    for p in &grid {
        let r = reverse_point(p);
        let anti = grid
            .iter()
            .all(|q| lex::cmp_lex(&reverse_point(q), &r) == lex::cmp_lex(p, q));
        t.check(reverse_point(&r) == *p && anti, || format!("reverse {p}"));
    }
}

fn embed_suite(t: &mut Tally) {
    for n in 1..=5 {
        let base = FinOrder::chain("e", n).unwrap();
        for perm in base.labels().iter().cloned().permutations(n) {
            let order = InsertionOrder::new(base.clone(), perm.clone()).unwrap();
            let ok = embed_order(&order, LexInterval::new(1).unwrap(), GridPolicy::Exact)
                .is_ok_and(|(e, tr)| e.is_strictly_increasing() && tr.total_saturations() == 0);
            t.check(ok, || format!("exact insertion {perm:?}"));
        }
    }
    for k in 1..=2 {
        for d in 1..=2 {
            for n in 1..=4 {
                let base = FinOrder::chain("e", n).unwrap();
                for seq in (0..n).permutations(n) {
                    let labels = seq.iter().map(|&r| base.label(r).to_string()).collect();
                    let order = InsertionOrder::new(base.clone(), labels).unwrap();
                    let got = embed_order(&order, LexInterval::new(d).unwrap(), GridPolicy::Dyadic(k));
                    let agree = match (embed::simulate(&seq, k, d), &got) {
                        (Err(step), Err(EmbedError::CapacityExceeded { step: s, .. })) => step == *s,
                        (Ok(places), Ok((emb, _))) => places.iter().zip(&seq).all(|(p, &r)| {
                            let want: Vec<Rational> = p.coords.iter().map(|&m| Rational::dyadic(m, k)).collect();
                            emb.points[r].coords() == want.as_slice()
                        }),
                        _ => false,
                    };
                    t.check(agree, || format!("dyadic:{k} dims={d} sequence {seq:?}"));
                }
            }
        }
    }
}

fn quotient_suite(t: &mut Tally) {
    let mut rng = StdRng::seed_from_u64(2);
    for i in 0..200 {
        let dims = 1 + i % 3;
        let b = cells::random_breakpoints(&mut rng, dims, 4);
        let samples: Vec<_> = (0..8)
            .map(|_| lex::random_point(&mut rng, dims))
            .chain(b.atoms().iter().cloned())
            .collect();
        t.check(fibers_match_classes(&b, &samples) == Ok(true), || {
            format!("fibers for {:?}", b.atoms())
        });
    }
}

fn finspace_suite(t: &mut Tally) {
    for n in 1..=3 {
        for top in topology::all_topologies(n) {
            let sp = top.to_space();
            let labels = top.labels();
            let nbhd = (0..n).all(|x| sp.nbhd_mask(x) == top.min_nbhd(x));
            let mut want: Vec<Vec<String>> = top
                .equiv_classes()
                .into_iter()
                .map(|c| c.into_iter().map(|i| labels[i].clone()).collect())
                .collect();
            let mut got = sp.equiv_classes();
            want.sort();
            got.sort();
            let ok = nbhd && got == want && sp.is_t0() == top.is_t0() && sp.is_t1() == top.is_t1();
            t.check(ok && sp.weight() == top.weight(), || format!("space {:?}", top.opens));
        }
    }
}

fn bigmaps_suite(t: &mut Tally) {
    let b = BreakpointSet::new(LexInterval::new(1).unwrap(), []).unwrap();
    let spaces: Vec<_> = (1..=2).flat_map(topology::all_topologies).collect();
    for c in &spaces {
        let product = cells::cell_topology(b.len()).product(c);
        for x in &spaces {
            for values in topology::all_maps(product.n, x.n) {
                let f = CellMap::new(CellDomain::Lex(b.clone()), c.to_space(), x.to_space(), values.clone());
                let ok = f.is_ok_and(|f| f.is_continuous() == topology::is_continuous(&product, x, &values));
                t.check(ok, || format!("table {values:?} on C {:?} into {:?}", c.opens, x.opens));
            }
        }
    }
}
