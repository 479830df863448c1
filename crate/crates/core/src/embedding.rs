//! Order embedding of a finite total order into `[0,1]^n` by the L/U midpoint
//! rule, one element at a time.
//!
//! For each new element and coordinate `d`, `L` is the largest `d`-th
//! coordinate among already placed smaller elements whose images agree with the
//! settled prefix, and `U` the smallest among larger ones (defaults 0 and 1). If
//! a value strictly between them can be emitted, the element gets the prefix,
//! that value and `1/2` in every later coordinate. Otherwise the coordinate is
//! set to `L` and the next coordinate is tried.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexint::{LexInterval, LexPoint};
use crate::orders::{FinOrder, OrderError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("insertion sequence is not a permutation of the order's labels")]
    NotPermutation,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("capacity exceeded: element `{label}` (insertion step {step}) saturates all {dims} coordinates")]
    CapacityExceeded { label: String, step: usize, dims: usize },
    #[error("corrupted trace at entry {entry}: {reason}")]
    CorruptedTrace { entry: usize, reason: String },
    #[error("invalid grid policy `{0}` (expected `exact` or `dyadic:K` with K ≥ 1)")]
    BadGrid(String),
}

/// Which values may be emitted between two bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GridPolicy {
    /// The midpoint `(L+U)/2`.
    Exact,
    /// The point `m/2^k`, `0 < m < 2^k`, strictly between the bounds and
    /// nearest their midpoint; the lower one on ties.
    Dyadic(u32),
}

impl fmt::Display for GridPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridPolicy::Exact => write!(f, "exact"),
            GridPolicy::Dyadic(k) => write!(f, "dyadic:{k}"),
        }
    }
}

impl FromStr for GridPolicy {
    type Err = EmbedError;
    fn from_str(s: &str) -> Result<Self, EmbedError> {
        let bad = || EmbedError::BadGrid(s.to_string());
        match s.trim() {
            "exact" => Ok(GridPolicy::Exact),
            other => {
                let k: u32 = other
                    .strip_prefix("dyadic:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if k == 0 || k > 62 {
                    return Err(bad());
                }
                Ok(GridPolicy::Dyadic(k))
            }
        }
    }
}

impl TryFrom<String> for GridPolicy {
    type Error = EmbedError;
    fn try_from(s: String) -> Result<Self, EmbedError> {
        s.parse()
    }
}

impl From<GridPolicy> for String {
    fn from(g: GridPolicy) -> String {
        g.to_string()
    }
}

impl GridPolicy {
    /// A value strictly between `lower` and `upper`, if the policy has one.
    pub fn emit(&self, lower: &Rational, upper: &Rational) -> Option<Rational> {
        if lower >= upper {
            return None;
        }
        let mid = lower.midpoint(upper);
        match *self {
            GridPolicy::Exact => Some(mid),
            GridPolicy::Dyadic(k) => {
                let top = (BigInt::one() << k) - 1;
                let m_lo = (lower.scale_pow2(k).floor() + BigInt::one()).max(BigInt::one());
                let m_hi = (upper.scale_pow2(k).ceil() - BigInt::one()).min(top);
                if m_lo > m_hi {
                    return None;
                }
                // Round half down: ceil(x - 1/2).
                let x = mid.scale_pow2(k) - Rational::half();
                let m = x.ceil().clamp(m_lo, m_hi);
                Some(Rational::from_bigint_ratio(m, BigInt::one() << k))
            }
        }
    }
}

/// An order together with the sequence in which its elements are placed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionOrder {
    base: FinOrder,
    sequence: Vec<String>,
}

impl InsertionOrder {
    pub fn new(base: FinOrder, sequence: Vec<String>) -> Result<Self, EmbedError> {
        let mut ranks = sequence.iter().map(|l| base.rank(l)).collect::<Result<Vec<_>, _>>()?;
        ranks.sort_unstable();
        if ranks.len() != base.len() || ranks.iter().enumerate().any(|(i, r)| i != *r) {
            return Err(EmbedError::NotPermutation);
        }
        Ok(InsertionOrder { base, sequence })
    }

    /// Insert in increasing order.
    pub fn in_order(base: FinOrder) -> Self {
        let sequence = base.labels().to_vec();
        InsertionOrder { base, sequence }
    }

    pub fn base(&self) -> &FinOrder {
        &self.base
    }

    pub fn sequence(&self) -> &[String] {
        &self.sequence
    }

    fn rank_sequence(&self) -> Vec<usize> {
        self.sequence
            .iter()
            .map(|l| self.base.rank(l).expect("validated"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordStep {
    pub lower: Rational,
    pub upper: Rational,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub label: String,
    /// One step per coordinate examined; all but the last are saturated.
    pub steps: Vec<CoordStep>,
}

impl TraceEntry {
    /// The coordinate at which a value was emitted.
    pub fn coordinate(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn saturations(&self) -> usize {
        self.steps.iter().filter(|s| s.saturated).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingTrace {
    pub dims: usize,
    pub grid: GridPolicy,
    pub order: InsertionOrder,
    pub entries: Vec<TraceEntry>,
}

impl EmbeddingTrace {
    pub fn total_saturations(&self) -> usize {
        self.entries.iter().map(TraceEntry::saturations).sum()
    }
}

/// Image of each label, listed in the order of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub labels: Vec<String>,
    pub points: Vec<LexPoint>,
}

impl Embedding {
    pub fn get(&self, label: &str) -> Option<&LexPoint> {
        self.labels.iter().position(|l| l == label).map(|i| &self.points[i])
    }

    /// True when images increase strictly along the listed order.
    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0] < w[1])
    }
}

/// Bounds at coordinate `d` over the placed elements whose images agree with
/// `prefix`.
fn bounds(placed: &[(usize, LexPoint)], rank: usize, prefix: &[Rational]) -> (Rational, Rational) {
    let d = prefix.len();
    let mut lower: Option<&Rational> = None;
    let mut upper: Option<&Rational> = None;
    for (r, p) in placed {
        if p.coords()[..d] != *prefix {
            continue;
        }
        let c = p.coord(d);
        match r.cmp(&rank) {
            Ordering::Less => {
                if lower.is_none_or(|l| c > l) {
                    lower = Some(c);
                }
            }
            Ordering::Greater => {
                if upper.is_none_or(|u| c < u) {
                    upper = Some(c);
                }
            }
            Ordering::Equal => {}
        }
    }
    (
        lower.cloned().unwrap_or_else(Rational::zero),
        upper.cloned().unwrap_or_else(Rational::one),
    )
}

fn assemble(prefix: Vec<Rational>, value: Rational, dims: usize) -> LexPoint {
    let mut coords = prefix;
    coords.push(value);
    coords.resize(dims, Rational::half());
    LexPoint::new(coords).expect("bounds lie in [0,1]")
}

pub fn embed_order(
    order: &InsertionOrder,
    target: LexInterval,
    grid: GridPolicy,
) -> Result<(Embedding, EmbeddingTrace), EmbedError> {
    let dims = target.dims();
    let mut placed: Vec<(usize, LexPoint)> = Vec::with_capacity(order.base.len());
    let mut entries = Vec::with_capacity(order.base.len());
    for (step, rank) in order.rank_sequence().into_iter().enumerate() {
        let mut prefix: Vec<Rational> = Vec::with_capacity(dims);
        let mut steps = Vec::new();
        let mut point = None;
        while prefix.len() < dims {
            let (lower, upper) = bounds(&placed, rank, &prefix);
            match grid.emit(&lower, &upper) {
                Some(v) => {
                    steps.push(CoordStep {
                        lower,
                        upper,
                        saturated: false,
                    });
                    point = Some(assemble(prefix, v, dims));
                    break;
                }
                None => {
                    prefix.push(lower.clone());
                    steps.push(CoordStep {
                        lower,
                        upper,
                        saturated: true,
                    });
                }
            }
        }
        let Some(point) = point else {
            return Err(EmbedError::CapacityExceeded {
                label: order.base.label(rank).to_string(),
                step,
                dims,
            });
        };
        entries.push(TraceEntry {
            label: order.base.label(rank).to_string(),
            steps,
        });
        placed.push((rank, point));
    }
    placed.sort_by_key(|(r, _)| *r);
    let embedding = Embedding {
        labels: order.base.labels().to_vec(),
        points: placed.into_iter().map(|(_, p)| p).collect(),
    };
    let trace = EmbeddingTrace {
        dims,
        grid,
        order: order.clone(),
        entries,
    };
    Ok((embedding, trace))
}

/// Rebuilds the embedding from the recorded bounds alone, checking each bound
/// against the one recomputed from the points rebuilt so far.
pub fn replay(trace: &EmbeddingTrace) -> Result<Embedding, EmbedError> {
    let corrupt = |entry: usize, reason: &str| EmbedError::CorruptedTrace {
        entry,
        reason: reason.to_string(),
    };
    let order = &trace.order;
    let seq = order.rank_sequence();
    if trace.entries.len() != seq.len() {
        return Err(corrupt(trace.entries.len(), "entry count differs from the order size"));
    }
    if trace.dims == 0 {
        return Err(corrupt(0, "zero dimensions"));
    }
    let mut placed: Vec<(usize, LexPoint)> = Vec::with_capacity(seq.len());
    for (i, (entry, rank)) in trace.entries.iter().zip(seq).enumerate() {
        if entry.label != order.base.label(rank) {
            return Err(corrupt(i, "label out of sequence"));
        }
        let Some((last, saturated)) = entry.steps.split_last() else {
            return Err(corrupt(i, "no steps"));
        };
        if entry.steps.len() > trace.dims {
            return Err(corrupt(i, "more steps than coordinates"));
        }
        if !saturated.iter().all(|s| s.saturated) || last.saturated {
            return Err(corrupt(i, "saturation flags out of place"));
        }
        let prefix: Vec<Rational> = saturated.iter().map(|s| s.lower.clone()).collect();
        for (d, s) in entry.steps.iter().enumerate() {
            let (lower, upper) = bounds(&placed, rank, &prefix[..d]);
            if lower != s.lower || upper != s.upper {
                return Err(corrupt(i, &format!("bounds at coordinate {d} do not match")));
            }
            if s.saturated != trace.grid.emit(&lower, &upper).is_none() {
                return Err(corrupt(i, &format!("saturation flag at coordinate {d} is wrong")));
            }
        }
        let v = trace
            .grid
            .emit(&last.lower, &last.upper)
            .ok_or_else(|| corrupt(i, "no value between final bounds"))?;
        placed.push((rank, assemble(prefix, v, trace.dims)));
    }
    placed.sort_by_key(|(r, _)| *r);
    Ok(Embedding {
        labels: order.base.labels().to_vec(),
        points: placed.into_iter().map(|(_, p)| p).collect(),
    })
}

/// Number of grid values per coordinate, or `None` for the exact policy.
pub fn grid_size(grid: GridPolicy) -> Option<u64> {
    match grid {
        GridPolicy::Exact => None,
        GridPolicy::Dyadic(k) => ((BigInt::one() << k) - 1u32).to_u64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn dyadic_emission() {
        let g = GridPolicy::Dyadic(2);
        assert_eq!(g.emit(&r("1/2"), &r("1")), Some(r("3/4")));
        assert_eq!(g.emit(&r("3/4"), &r("1")), None);
        assert_eq!(g.emit(&r("0"), &r("1")), Some(r("1/2")));
        // Midpoint 3/8 is equidistant from 1/4 and 1/2.
        assert_eq!(g.emit(&r("0"), &r("3/4")), Some(r("1/4")));
        assert_eq!(g.emit(&r("1/4"), &r("1/4")), None);
        assert_eq!(GridPolicy::Dyadic(1).emit(&r("0"), &r("1/2")), None);
        assert_eq!(GridPolicy::Exact.emit(&r("1/2"), &r("1")), Some(r("3/4")));
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("exact".parse::<GridPolicy>().unwrap(), GridPolicy::Exact);
        assert_eq!("dyadic:3".parse::<GridPolicy>().unwrap(), GridPolicy::Dyadic(3));
        assert!("dyadic:0".parse::<GridPolicy>().is_err());
        assert!("fine".parse::<GridPolicy>().is_err());
    }

    #[test]
    fn single_element_is_center() {
        let o = InsertionOrder::in_order(FinOrder::new(["a"]).unwrap());
        for dims in 1..4 {
            let target = LexInterval::new(dims).unwrap();
            let (e, _) = embed_order(&o, target, GridPolicy::Exact).unwrap();
            assert_eq!(e.points[0], target.center());
        }
    }

    #[test]
    fn exact_two_chain() {
        let o = InsertionOrder::in_order(FinOrder::new(["a", "b"]).unwrap());
        let (e, t) = embed_order(&o, LexInterval::new(1).unwrap(), GridPolicy::Exact).unwrap();
        assert_eq!(e.get("a").unwrap().coords(), [r("1/2")]);
        assert_eq!(e.get("b").unwrap().coords(), [r("3/4")]);
        assert_eq!(t.entries[1].steps[0].lower, r("1/2"));
        assert_eq!(t.entries[1].steps[0].upper, r("1"));
    }

    #[test]
    fn dyadic_spillover_fixture() {
        let o = InsertionOrder::in_order(FinOrder::new(["a", "b", "c"]).unwrap());
        let (e, t) = embed_order(&o, LexInterval::new(2).unwrap(), GridPolicy::Dyadic(2)).unwrap();
        assert_eq!(e.get("a").unwrap().coords(), [r("1/2"), r("1/2")]);
        assert_eq!(e.get("b").unwrap().coords(), [r("3/4"), r("1/2")]);
        assert_eq!(e.get("c").unwrap().coords(), [r("3/4"), r("3/4")]);
        let c = &t.entries[2];
        assert_eq!(c.coordinate(), 1);
        assert!(c.steps[0].saturated);
        assert_eq!((c.steps[0].lower.clone(), c.steps[0].upper.clone()), (r("3/4"), r("1")));
        assert_eq!((c.steps[1].lower.clone(), c.steps[1].upper.clone()), (r("1/2"), r("1")));
        assert_eq!(t.total_saturations(), 1);
    }

    #[test]
    fn capacity_exceeded() {
        let o = InsertionOrder::in_order(FinOrder::chain("x", 2).unwrap());
        let err = embed_order(&o, LexInterval::new(1).unwrap(), GridPolicy::Dyadic(1)).unwrap_err();
        assert!(matches!(err, EmbedError::CapacityExceeded { step: 1, .. }));
    }

    #[test]
    fn saturation_at_zero_uses_lower_bound() {
        let base = FinOrder::new(["a", "b"]).unwrap();
        let o = InsertionOrder::new(base, vec!["b".into(), "a".into()]).unwrap();
        let (e, t) = embed_order(&o, LexInterval::new(2).unwrap(), GridPolicy::Dyadic(1)).unwrap();
        assert_eq!(e.get("a").unwrap().coords(), [r("0"), r("1/2")]);
        assert!(t.entries[1].steps[0].saturated);
    }

    #[test]
    fn replay_matches_and_detects_tampering() {
        let o = InsertionOrder::in_order(FinOrder::new(["a", "b", "c"]).unwrap());
        for (dims, grid) in [(1, GridPolicy::Exact), (2, GridPolicy::Dyadic(2))] {
            let (e, t) = embed_order(&o, LexInterval::new(dims).unwrap(), grid).unwrap();
            assert_eq!(replay(&t).unwrap(), e);
            let json = serde_json::to_string(&t).unwrap();
            let back: EmbeddingTrace = serde_json::from_str(&json).unwrap();
            assert_eq!(replay(&back).unwrap(), e);
            let mut bad = t.clone();
            bad.entries[1].steps[0].upper = r("7/8");
            assert!(matches!(replay(&bad), Err(EmbedError::CorruptedTrace { entry: 1, .. })));
        }
    }

    #[test]
    fn insertion_must_be_permutation() {
        let base = FinOrder::new(["a", "b"]).unwrap();
        assert_eq!(
            InsertionOrder::new(base.clone(), vec!["a".into(), "a".into()]),
            Err(EmbedError::NotPermutation)
        );
        assert!(InsertionOrder::new(base, vec!["a".into()]).is_err());
    }
}
