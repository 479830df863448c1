//! Finite total orders and monotone maps between them.
//!
//! Both directions of the injection/surjection duality are constructed
//! explicitly: a strictly monotone injection yields a monotone surjection by
//! taking suprema of lower sets, and a monotone surjection yields an injection
//! by taking the maximum of each fiber. On finite carriers every supremum is a
//! maximum.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("order must be nonempty")]
    Empty,
    #[error("map is invalid: {0}")]
    InvalidMap(Violation),
    #[error("map is not injective: `{0}` and `{1}` share an image")]
    NotInjective(String, String),
    #[error("map is not surjective: no element maps to `{0}`")]
    NotSurjective(String),
    #[error("map is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("no value at `{0}` and the map has no extension")]
    Undefined(String),
    #[error("domain mismatch: codomain of the first map differs from the domain of the second")]
    DomainMismatch,
}

/// A finite totally ordered set of labels; the order is the listed order.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FinOrderDoc", into = "FinOrderDoc")]
pub struct FinOrder {
    labels: Vec<String>,
    rank: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct FinOrderDoc {
    labels: Vec<String>,
}

impl TryFrom<FinOrderDoc> for FinOrder {
    type Error = OrderError;
    fn try_from(doc: FinOrderDoc) -> Result<Self, OrderError> {
        FinOrder::new(doc.labels)
    }
}

impl From<FinOrder> for FinOrderDoc {
    fn from(o: FinOrder) -> Self {
        FinOrderDoc { labels: o.labels }
    }
}

impl std::fmt::Debug for FinOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinOrder({})", self.labels.join(" < "))
    }
}

impl FinOrder {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, OrderError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(OrderError::Empty);
        }
        let mut rank = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if rank.insert(l.clone(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinOrder { labels, rank })
    }

    /// The chain `prefix0 < prefix1 < … < prefix{n-1}`.
    pub fn chain(prefix: &str, n: usize) -> Result<Self, OrderError> {
        FinOrder::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, label: &str) -> Result<usize, OrderError> {
        self.rank
            .get(label)
            .copied()
            .ok_or_else(|| OrderError::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.rank.contains_key(label)
    }

    pub fn label(&self, rank: usize) -> &str {
        &self.labels[rank]
    }

    /// `0_T`.
    pub fn min(&self) -> &str {
        &self.labels[0]
    }

    /// `1_T`.
    pub fn max(&self) -> &str {
        &self.labels[self.labels.len() - 1]
    }

    /// The same labels with the order reversed.
    pub fn reverse(&self) -> FinOrder {
        let labels: Vec<String> = self.labels.iter().rev().cloned().collect();
        FinOrder::new(labels).expect("labels already distinct")
    }

    pub fn compare(&self, a: &str, b: &str) -> Result<std::cmp::Ordering, OrderError> {
        Ok(self.rank(a)?.cmp(&self.rank(b)?))
    }
}

/// How a map is evaluated away from its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    #[default]
    None,
    /// `m(x) = max{ m(a) | a ≤ x, a in the graph }`, or the codomain minimum.
    Sup,
    /// `m(x) = min{ m(a) | a ≥ x, a in the graph }`, or the codomain maximum.
    Inf,
}

/// A map between finite orders given by a finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    domain: FinOrder,
    codomain: FinOrder,
    graph: Vec<(String, String)>,
    extension: Extension,
}

/// The serialized form of a map's graph: `{"graph":[["a","x"]],"extension":"sup"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub graph: Vec<(String, String)>,
    #[serde(default)]
    pub extension: Extension,
}

/// First reason a map fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownInput {
        label: String,
    },
    UnknownOutput {
        label: String,
    },
    DuplicateInput {
        label: String,
    },
    /// `lower < upper` in the domain but their images are reversed.
    NotMonotone {
        lower: String,
        upper: String,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownInput { label } => write!(f, "input `{label}` not in domain"),
            Violation::UnknownOutput { label } => write!(f, "output `{label}` not in codomain"),
            Violation::DuplicateInput { label } => write!(f, "input `{label}` appears twice"),
            Violation::NotMonotone { lower, upper } => {
                write!(f, "`{lower}` < `{upper}` but images are reversed")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl MonotoneMap {
    /// Builds a map without checking it; see [`MonotoneMap::validate`].
    pub fn from_graph_unchecked(
        domain: FinOrder,
        codomain: FinOrder,
        graph: Vec<(String, String)>,
        extension: Extension,
    ) -> Self {
        MonotoneMap {
            domain,
            codomain,
            graph,
            extension,
        }
    }

    /// Builds a map and rejects it unless it validates.
    pub fn new(
        domain: FinOrder,
        codomain: FinOrder,
        graph: Vec<(String, String)>,
        extension: Extension,
    ) -> Result<Self, OrderError> {
        let m = MonotoneMap::from_graph_unchecked(domain, codomain, graph, extension);
        match m.validate().violation {
            None => Ok(m),
            Some(v) => Err(OrderError::InvalidMap(v)),
        }
    }

    pub fn from_doc(domain: FinOrder, codomain: FinOrder, doc: MapDoc) -> Result<Self, OrderError> {
        MonotoneMap::new(domain, codomain, doc.graph, doc.extension)
    }

    pub fn to_doc(&self) -> MapDoc {
        MapDoc {
            graph: self.graph.clone(),
            extension: self.extension,
        }
    }

    /// A total map given by the image of each domain element in order.
    pub fn from_images<S: AsRef<str>>(domain: FinOrder, codomain: FinOrder, images: &[S]) -> Result<Self, OrderError> {
        let graph = domain
            .labels()
            .iter()
            .zip(images)
            .map(|(a, b)| (a.clone(), b.as_ref().to_string()))
            .collect();
        MonotoneMap::new(domain, codomain, graph, Extension::None)
    }

    pub fn identity(order: &FinOrder) -> Self {
        let graph = order.labels().iter().map(|l| (l.clone(), l.clone())).collect();
        MonotoneMap::from_graph_unchecked(order.clone(), order.clone(), graph, Extension::None)
    }

    pub fn domain(&self) -> &FinOrder {
        &self.domain
    }

    pub fn codomain(&self) -> &FinOrder {
        &self.codomain
    }

    pub fn graph(&self) -> &[(String, String)] {
        &self.graph
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// Checks single-valuedness and order preservation on the graph.
    pub fn validate(&self) -> Validation {
        let violation = self.first_violation();
        Validation {
            valid: violation.is_none(),
            violation,
        }
    }

    fn first_violation(&self) -> Option<Violation> {
        let mut seen = HashSet::new();
        let mut ranked = Vec::with_capacity(self.graph.len());
        for (a, b) in &self.graph {
            let Ok(ra) = self.domain.rank(a) else {
                return Some(Violation::UnknownInput { label: a.clone() });
            };
            let Ok(rb) = self.codomain.rank(b) else {
                return Some(Violation::UnknownOutput { label: b.clone() });
            };
            if !seen.insert(ra) {
                return Some(Violation::DuplicateInput { label: a.clone() });
            }
            ranked.push((ra, rb));
        }
        ranked.sort_unstable();
        for w in ranked.windows(2) {
            if w[0].1 > w[1].1 {
                return Some(Violation::NotMonotone {
                    lower: self.domain.label(w[0].0).to_string(),
                    upper: self.domain.label(w[1].0).to_string(),
                });
            }
        }
        None
    }

    /// Graph as `(domain rank, codomain rank)` pairs sorted by input.
    fn ranked_graph(&self) -> Vec<(usize, usize)> {
        let mut g: Vec<(usize, usize)> = self
            .graph
            .iter()
            .map(|(a, b)| {
                (
                    self.domain.rank(a).expect("validated"),
                    self.codomain.rank(b).expect("validated"),
                )
            })
            .collect();
        g.sort_unstable();
        g
    }

    pub fn eval(&self, x: &str) -> Result<&str, OrderError> {
        let rx = self.domain.rank(x)?;
        if let Some((_, b)) = self.graph.iter().find(|(a, _)| a == x) {
            return Ok(b);
        }
        let g = self.ranked_graph();
        let out = match self.extension {
            Extension::None => return Err(OrderError::Undefined(x.to_string())),
            Extension::Sup => g.iter().filter(|(a, _)| *a <= rx).map(|(_, b)| *b).max().unwrap_or(0),
            Extension::Inf => g
                .iter()
                .filter(|(a, _)| *a >= rx)
                .map(|(_, b)| *b)
                .min()
                .unwrap_or(self.codomain.len() - 1),
        };
        Ok(self.codomain.label(out))
    }

    /// True when every domain element appears in the graph.
    pub fn is_total(&self) -> bool {
        let inputs: HashSet<&str> = self.graph.iter().map(|(a, _)| a.as_str()).collect();
        self.domain.labels().iter().all(|l| inputs.contains(l.as_str()))
    }

    pub fn is_injective(&self) -> bool {
        let outputs: HashSet<&str> = self.graph.iter().map(|(_, b)| b.as_str()).collect();
        outputs.len() == self.graph.len()
    }

    /// True when every codomain element is hit (the map must be total).
    pub fn is_surjective(&self) -> bool {
        let outputs: HashSet<&str> = self.graph.iter().map(|(_, b)| b.as_str()).collect();
        self.codomain.labels().iter().all(|l| outputs.contains(l.as_str()))
    }
}

/// From an order-preserving injection `h: A → J` (with `A` the graph inputs, a
/// subset of `I = h.domain()`), builds `g: J → I` with
/// `g(j) = max{ i ∈ A | h(i) ≤ j }`, or `0_I` when no such `i` exists.
pub fn surjection_from_injection(h: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
    if let Some(v) = h.first_violation() {
        return Err(OrderError::InvalidMap(v));
    }
    let g = h.ranked_graph();
    for w in g.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(OrderError::NotInjective(
                h.domain.label(w[0].0).to_string(),
                h.domain.label(w[1].0).to_string(),
            ));
        }
    }
    let source = h.codomain.clone();
    let target = h.domain.clone();
    let graph = source
        .labels()
        .iter()
        .enumerate()
        .map(|(j, lj)| {
            let sup = g.iter().filter(|(_, hi)| *hi <= j).map(|(i, _)| *i).max().unwrap_or(0);
            (lj.clone(), target.label(sup).to_string())
        })
        .collect();
    Ok(MonotoneMap::from_graph_unchecked(
        source,
        target,
        graph,
        Extension::None,
    ))
}

/// From a monotone surjection `g: J → I`, builds `f: I → J` with
/// `f(t) = max g⁻¹(t)`.
pub fn injection_from_surjection(g: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
    if let Some(v) = g.first_violation() {
        return Err(OrderError::InvalidMap(v));
    }
    if let Some(missing) = g.domain.labels().iter().find(|l| !g.graph.iter().any(|(a, _)| a == *l)) {
        return Err(OrderError::NotTotal(missing.clone()));
    }
    let ranked = g.ranked_graph();
    let source = g.codomain.clone();
    let target = g.domain.clone();
    let mut graph = Vec::with_capacity(source.len());
    for (t, lt) in source.labels().iter().enumerate() {
        let max_fiber = ranked
            .iter()
            .filter(|(_, b)| *b == t)
            .map(|(a, _)| *a)
            .max()
            .ok_or_else(|| OrderError::NotSurjective(lt.clone()))?;
        graph.push((lt.clone(), target.label(max_fiber).to_string()));
    }
    Ok(MonotoneMap::from_graph_unchecked(
        source,
        target,
        graph,
        Extension::None,
    ))
}

/// `second ∘ first`: apply `first`, then `second`.
pub fn compose(first: &MonotoneMap, second: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
    if first.codomain != second.domain {
        return Err(OrderError::DomainMismatch);
    }
    let graph = first
        .graph
        .iter()
        .map(|(a, b)| Ok((a.clone(), second.eval(b)?.to_string())))
        .collect::<Result<Vec<_>, OrderError>>()?;
    Ok(MonotoneMap::from_graph_unchecked(
        first.domain.clone(),
        second.codomain.clone(),
        graph,
        Extension::None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(p: &str, n: usize) -> FinOrder {
        FinOrder::chain(p, n).unwrap()
    }

    fn images(m: &MonotoneMap) -> Vec<String> {
        m.domain()
            .labels()
            .iter()
            .map(|l| m.eval(l).unwrap().to_string())
            .collect()
    }

    #[test]
    fn validate_fixtures() {
        let c3 = chain("x", 3);
        assert!(MonotoneMap::identity(&c3).validate().valid);

        let c2 = chain("a", 2);
        let swap = MonotoneMap::from_graph_unchecked(
            c2.clone(),
            c2.clone(),
            vec![("a0".into(), "a1".into()), ("a1".into(), "a0".into())],
            Extension::None,
        );
        let v = swap.validate();
        assert!(!v.valid);
        assert_eq!(
            v.violation,
            Some(Violation::NotMonotone {
                lower: "a0".into(),
                upper: "a1".into()
            })
        );

        let dup = MonotoneMap::from_graph_unchecked(
            c2.clone(),
            c2,
            vec![("a0".into(), "a0".into()), ("a0".into(), "a1".into())],
            Extension::None,
        );
        assert_eq!(
            dup.validate().violation,
            Some(Violation::DuplicateInput { label: "a0".into() })
        );
    }

    #[test]
    fn surjection_fixtures() {
        let i = chain("i", 2);
        let j = chain("j", 3);
        let h = MonotoneMap::from_images(i.clone(), j.clone(), &["j0", "j2"]).unwrap();
        let g = surjection_from_injection(&h).unwrap();
        assert_eq!(images(&g), ["i0", "i0", "i1"]);

        let h = MonotoneMap::from_images(i.clone(), j.clone(), &["j1", "j2"]).unwrap();
        let g = surjection_from_injection(&h).unwrap();
        assert_eq!(g.eval("j0").unwrap(), "i0");
        assert_eq!(images(&g), ["i0", "i0", "i1"]);

        let id = MonotoneMap::identity(&j);
        assert_eq!(surjection_from_injection(&id).unwrap(), id);
    }

    #[test]
    fn surjection_from_partial_injection() {
        let i = chain("i", 4);
        let j = chain("j", 5);
        // A = {i1, i3}
        let h = MonotoneMap::new(
            i.clone(),
            j,
            vec![("i1".into(), "j1".into()), ("i3".into(), "j3".into())],
            Extension::None,
        )
        .unwrap();
        let g = surjection_from_injection(&h).unwrap();
        assert_eq!(images(&g), ["i0", "i1", "i1", "i3", "i3"]);
    }

    #[test]
    fn surjection_rejects_non_injective() {
        let h = MonotoneMap::from_images(chain("i", 2), chain("j", 2), &["j1", "j1"]).unwrap();
        assert!(matches!(
            surjection_from_injection(&h),
            Err(OrderError::NotInjective(..))
        ));
    }

    #[test]
    fn injection_fixtures() {
        let i = chain("i", 2);
        let j = chain("j", 3);
        let g = MonotoneMap::from_images(j.clone(), i.clone(), &["i0", "i0", "i1"]).unwrap();
        let f = injection_from_surjection(&g).unwrap();
        assert_eq!(images(&f), ["j1", "j2"]);

        let id = MonotoneMap::identity(&j);
        assert_eq!(injection_from_surjection(&id).unwrap(), id);

        let point = chain("p", 1);
        let constant = MonotoneMap::from_images(j.clone(), point, &["p0", "p0", "p0"]).unwrap();
        let f = injection_from_surjection(&constant).unwrap();
        assert_eq!(images(&f), ["j2"]);
    }

    #[test]
    fn injection_requires_surjection() {
        let g = MonotoneMap::from_images(chain("j", 2), chain("i", 2), &["i0", "i0"]).unwrap();
        assert_eq!(
            injection_from_surjection(&g),
            Err(OrderError::NotSurjective("i1".into()))
        );
    }

    #[test]
    fn reverse_and_compose() {
        let abc = FinOrder::new(["a", "b", "c"]).unwrap();
        assert_eq!(abc.reverse().labels(), ["c", "b", "a"]);
        assert_eq!(abc.reverse().reverse(), abc);

        let m = MonotoneMap::from_images(abc.clone(), chain("x", 4), &["x0", "x2", "x3"]).unwrap();
        assert_eq!(compose(&MonotoneMap::identity(&abc), &m).unwrap(), m);
        assert_eq!(
            compose(&m, &MonotoneMap::identity(&abc)),
            Err(OrderError::DomainMismatch)
        );
    }

    #[test]
    fn extensions() {
        let c = chain("c", 5);
        let d = chain("d", 3);
        let partial = vec![
            ("c1".to_string(), "d1".to_string()),
            ("c3".to_string(), "d2".to_string()),
        ];
        let sup = MonotoneMap::new(c.clone(), d.clone(), partial.clone(), Extension::Sup).unwrap();
        assert_eq!(images(&sup), ["d0", "d1", "d1", "d2", "d2"]);
        let inf = MonotoneMap::new(c.clone(), d.clone(), partial.clone(), Extension::Inf).unwrap();
        assert_eq!(images(&inf), ["d1", "d1", "d2", "d2", "d2"]);
        let none = MonotoneMap::new(c, d, partial, Extension::None).unwrap();
        assert_eq!(none.eval("c0"), Err(OrderError::Undefined("c0".into())));
    }

    #[test]
    fn json_shapes() {
        let o: FinOrder = serde_json::from_str(r#"{"labels":["a","b","c"]}"#).unwrap();
        assert_eq!(o.rank("c").unwrap(), 2);
        assert!(serde_json::from_str::<FinOrder>(r#"{"labels":["a","a"]}"#).is_err());
        let doc: MapDoc = serde_json::from_str(r#"{"graph":[["a","x"],["b","y"]],"extension":"sup"}"#).unwrap();
        assert_eq!(doc.extension, Extension::Sup);
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"labels":["a","b","c"]}"#);
    }
}
