//! Symbolic cardinal arithmetic over the aleph and beth hierarchies.
//!
//! Expressions are normalized by a fixed rewrite table and compared by a small
//! sound rule set. Under [`AxiomMode::Zfc`] anything the rules cannot decide is
//! reported as unknown rather than guessed; [`AxiomMode::Gch`] collapses the
//! beth hierarchy onto the alephs and decides every comparison.

mod ordinal;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ordinal::{Ordinal, DEFAULT_ORDINAL_DEPTH};
pub use parse::{parse_cardinal, parse_ordinal};

/// Default bound on cardinal expression nesting.
pub const DEFAULT_EXPR_DEPTH: usize = 32;

/// Largest `n` for which `2^n` is kept as a finite literal.
pub const MAX_FINITE_EXPONENT: u64 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("ordinal nesting exceeds depth limit {limit}")]
    OrdinalDepth { limit: usize },
    #[error("expression nesting exceeds depth limit {limit}")]
    ExprDepth { limit: usize },
    #[error("malformed ordinal: {0}")]
    MalformedOrdinal(String),
    #[error("finite value overflows")]
    FiniteOverflow,
    #[error("2^{0} is too large to represent as a finite literal")]
    FiniteExponentTooLarge(u64),
    #[error("operation requires an infinite cardinal, got {0}")]
    FiniteArgument(String),
}

/// Nesting bounds applied during construction and rewriting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub ordinal_depth: usize,
    pub expr_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ordinal_depth: DEFAULT_ORDINAL_DEPTH,
            expr_depth: DEFAULT_EXPR_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomMode {
    Zfc,
    Gch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Trivalent {
    True,
    False,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Comparison {
    Lt,
    Eq,
    Gt,
    Unknown,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Lt => Comparison::Gt,
            Comparison::Gt => Comparison::Lt,
            other => other,
        }
    }

    pub fn is_known(self) -> bool {
        self != Comparison::Unknown
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Lt,
            Ordering::Equal => Comparison::Eq,
            Ordering::Greater => Comparison::Gt,
        }
    }
}

/// A symbolic cardinal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CardinalExpr {
    Finite(u64),
    Aleph(Ordinal),
    Beth(Ordinal),
    /// `2^κ`
    PowSet(Box<CardinalExpr>),
    /// `κ⁺`
    Succ(Box<CardinalExpr>),
    /// `sup{2^β | β < κ}`
    Hat(Box<CardinalExpr>),
}

use CardinalExpr::*;

impl CardinalExpr {
    pub fn aleph(n: u64) -> Self {
        Aleph(Ordinal::finite(n))
    }

    pub fn beth(n: u64) -> Self {
        Beth(Ordinal::finite(n))
    }

    pub fn pow(inner: CardinalExpr) -> Self {
        PowSet(Box::new(inner))
    }

    pub fn succ(inner: CardinalExpr) -> Self {
        Succ(Box::new(inner))
    }

    pub fn hat_of(inner: CardinalExpr) -> Self {
        Hat(Box::new(inner))
    }

    pub fn depth(&self) -> usize {
        match self {
            Finite(_) | Aleph(_) | Beth(_) => 1,
            PowSet(k) | Succ(k) | Hat(k) => 1 + k.depth(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    fn check_limits(&self, limits: &Limits) -> Result<(), CardinalError> {
        if self.depth() > limits.expr_depth {
            return Err(CardinalError::ExprDepth {
                limit: limits.expr_depth,
            });
        }
        match self {
            Finite(_) => Ok(()),
            Aleph(o) | Beth(o) => o.check_depth(limits.ordinal_depth),
            PowSet(k) | Succ(k) | Hat(k) => k.check_limits(limits),
        }
    }
}

impl fmt::Display for CardinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(n) => write!(f, "{n}"),
            Aleph(o) => write!(f, "aleph({o})"),
            Beth(o) => write!(f, "beth({o})"),
            PowSet(k) => write!(f, "pow({k})"),
            Succ(k) => write!(f, "succ({k})"),
            Hat(k) => write!(f, "hat({k})"),
        }
    }
}

impl fmt::Debug for CardinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for CardinalExpr {
    type Err = crate::error::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_cardinal(s)
    }
}

impl Serialize for CardinalExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CardinalExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// normalization

pub fn normalize(e: &CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    normalize_with(e, &Limits::default())
}

/// Bottom-up rewriting to the fixed point of the rule table:
///
/// | pattern              | result        |
/// |----------------------|---------------|
/// | `beth(0)`            | `aleph(0)`    |
/// | `pow(n)`, `n ≤ 62`   | `2^n`         |
/// | `pow(beth(γ))`       | `beth(γ+1)`   |
/// | `pow(aleph(0))`      | `beth(1)`     |
/// | `succ(n)`            | `n+1`         |
/// | `succ(aleph(γ))`     | `aleph(γ+1)`  |
/// | `hat(aleph(0))`      | `aleph(0)`    |
/// | `hat(beth(λ))`, limit λ | `beth(λ)`  |
///
/// `hat` of a finite cardinal is rejected.
pub fn normalize_with(e: &CardinalExpr, limits: &Limits) -> Result<CardinalExpr, CardinalError> {
    e.check_limits(limits)?;
    let out = rewrite(e)?;
    out.check_limits(limits)?;
    Ok(out)
}

fn rewrite(e: &CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    match e {
        Finite(n) => Ok(Finite(*n)),
        Aleph(o) => Ok(Aleph(o.clone())),
        Beth(o) if o.is_zero() => Ok(CardinalExpr::aleph(0)),
        Beth(o) => Ok(Beth(o.clone())),
        PowSet(k) => rewrite_pow(rewrite(k)?),
        Succ(k) => rewrite_succ(rewrite(k)?),
        Hat(k) => rewrite_hat(rewrite(k)?),
    }
}

fn rewrite_pow(k: CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    match k {
        Finite(n) if n <= MAX_FINITE_EXPONENT => Ok(Finite(1u64 << n)),
        Finite(n) => Err(CardinalError::FiniteExponentTooLarge(n)),
        Aleph(o) if o.is_zero() => Ok(CardinalExpr::beth(1)),
        Beth(o) => Ok(Beth(o.succ()?)),
        other => Ok(PowSet(Box::new(other))),
    }
}

fn rewrite_succ(k: CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    match k {
        Finite(n) => Ok(Finite(n.checked_add(1).ok_or(CardinalError::FiniteOverflow)?)),
        Aleph(o) => Ok(Aleph(o.succ()?)),
        other => Ok(Succ(Box::new(other))),
    }
}

fn rewrite_hat(k: CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    match k {
        Finite(_) => Err(CardinalError::FiniteArgument(Hat(Box::new(k)).to_string())),
        Aleph(o) if o.is_zero() => Ok(CardinalExpr::aleph(0)),
        Beth(o) if o.is_limit() => Ok(Beth(o)),
        other => Ok(Hat(Box::new(other))),
    }
}

/// `normalize(hat(k))`; symbolic when no rule applies.
pub fn hat(k: &CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    let k = normalize(k)?;
    if k.is_finite() {
        return Err(CardinalError::FiniteArgument(k.to_string()));
    }
    normalize(&Hat(Box::new(k)))
}

// ---------------------------------------------------------------------------
// comparison

pub fn compare(a: &CardinalExpr, b: &CardinalExpr, mode: AxiomMode) -> Result<Comparison, CardinalError> {
    let a = normalize(a)?;
    let b = normalize(b)?;
    Ok(match mode {
        AxiomMode::Gch => gch_value(&a)?.cmp(&gch_value(&b)?).into(),
        AxiomMode::Zfc => zfc_compare(&a, &b),
    })
}

fn zfc_compare(a: &CardinalExpr, b: &CardinalExpr) -> Comparison {
    if a == b {
        return Comparison::Eq;
    }
    let (lt, gt) = (zfc_lt(a, b), zfc_lt(b, a));
    debug_assert!(!(lt && gt), "contradictory derivation for {a} vs {b}");
    match (lt, gt) {
        (true, false) => Comparison::Lt,
        (false, true) => Comparison::Gt,
        (true, true) => Comparison::Unknown,
        (false, false) => {
            if zfc_le(a, b) && zfc_le(b, a) {
                Comparison::Eq
            } else {
                Comparison::Unknown
            }
        }
    }
}

/// `ℶ_γ` in normal form (`ℶ₀` is written `ℵ₀`).
fn beth_normal(o: Ordinal) -> CardinalExpr {
    if o.is_zero() {
        CardinalExpr::aleph(0)
    } else {
        Beth(o)
    }
}

fn zfc_strong_limit(e: &CardinalExpr) -> bool {
    match e {
        Aleph(o) => o.is_zero(),
        Beth(o) => o.is_limit(),
        _ => false,
    }
}

/// Sound derivation of `a < b` from the rule table. Inputs are normalized.
fn zfc_lt(a: &CardinalExpr, b: &CardinalExpr) -> bool {
    match (a, b) {
        (Finite(m), Finite(n)) => m < n,
        (Finite(_), _) => true,
        (_, Finite(_)) => false,
        (Aleph(x), Aleph(y)) | (Beth(x), Beth(y)) | (Aleph(x), Beth(y)) => x < y,
        // No non-aleph infinite cardinal is provably below an aleph.
        (_, Aleph(_)) => false,
        // Cantor: a ≤ k < 2^k; k < k⁺.
        (_, PowSet(k)) | (_, Succ(k)) => zfc_le(a, k),
        // k ≤ hat(k) for infinite k.
        (_, Hat(k)) => zfc_lt(a, k),
        (_, Beth(y)) => {
            if let Some(p) = y.pred() {
                // ℶ_{γ+1} = 2^ℶ_γ
                zfc_le(a, &beth_normal(p))
            } else {
                // ℶ_λ is a strong limit: 2^j, j⁺ and hat(j) stay below it.
                match a {
                    PowSet(j) | Succ(j) | Hat(j) => zfc_lt(j, b),
                    _ => false,
                }
            }
        }
    }
}

/// Sound derivation of `a ≤ b`. Inputs are normalized.
fn zfc_le(a: &CardinalExpr, b: &CardinalExpr) -> bool {
    if a == b {
        return true;
    }
    match (a, b) {
        (Finite(m), Finite(n)) => return m <= n,
        (Finite(_), _) => return true,
        (_, Finite(_)) => return false,
        (Aleph(x), Aleph(y)) | (Beth(x), Beth(y)) | (Aleph(x), Beth(y)) => return x <= y,
        (Beth(_), Aleph(_)) => return false,
        (_, Aleph(_)) => return false,
        _ => {}
    }
    if zfc_lt(a, b) {
        return true;
    }
    // Unfold the left side.
    let left = match a {
        // ℵ_{α+1} = ℵ_α⁺ ≤ b whenever ℵ_α < b.
        Aleph(x) => match x.pred() {
            Some(p) => zfc_lt(&Aleph(p), b),
            None => false,
        },
        Succ(j) => zfc_lt(j, b),
        Hat(j) => {
            (zfc_strong_limit(b) && zfc_le(j, b)) || rewrite_pow((**j).clone()).map(|p| zfc_le(&p, b)).unwrap_or(false)
        }
        PowSet(j) => match b {
            PowSet(k) => zfc_le(j, k),
            Beth(y) => y.pred().is_some_and(|p| zfc_le(j, &beth_normal(p))),
            Hat(k) => zfc_lt(j, k),
            _ => false,
        },
        Beth(x) => match (x.pred(), b) {
            (Some(p), PowSet(k)) => zfc_le(&beth_normal(p), k),
            (Some(p), Hat(k)) => zfc_lt(&beth_normal(p), k),
            _ => false,
        },
        Finite(_) => unreachable!("handled above"),
    };
    if left {
        return true;
    }
    // Unfold the right side.
    match b {
        Succ(k) => zfc_le(a, k),
        Hat(k) => zfc_le(a, k) || matches!(a, Hat(j) if zfc_le(j, k)),
        _ => false,
    }
}

/// Value of a normalized expression in the GCH model: every infinite cardinal
/// is an aleph, `2^ℵ_γ = ℵ_{γ+1}` and `ℶ_γ = ℵ_γ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum GchValue {
    Finite(u64),
    Aleph(Ordinal),
}

fn gch_value(e: &CardinalExpr) -> Result<GchValue, CardinalError> {
    Ok(match e {
        Finite(n) => GchValue::Finite(*n),
        Aleph(o) | Beth(o) => GchValue::Aleph(o.clone()),
        PowSet(k) => match gch_value(k)? {
            GchValue::Finite(n) if n <= MAX_FINITE_EXPONENT => GchValue::Finite(1 << n),
            GchValue::Finite(n) => return Err(CardinalError::FiniteExponentTooLarge(n)),
            GchValue::Aleph(o) => GchValue::Aleph(o.succ()?),
        },
        Succ(k) => match gch_value(k)? {
            GchValue::Finite(n) => GchValue::Finite(n.checked_add(1).ok_or(CardinalError::FiniteOverflow)?),
            GchValue::Aleph(o) => GchValue::Aleph(o.succ()?),
        },
        // hat(ℵ_{γ+1}) = 2^ℵ_γ = ℵ_{γ+1}; hat(ℵ_λ) = ℵ_λ.
        Hat(k) => match gch_value(k)? {
            GchValue::Finite(_) => return Err(CardinalError::FiniteArgument(e.to_string())),
            v => v,
        },
    })
}

/// The normal form of `e` under GCH, written as an aleph or a finite literal.
pub fn gch_normal_form(e: &CardinalExpr) -> Result<CardinalExpr, CardinalError> {
    Ok(match gch_value(&normalize(e)?)? {
        GchValue::Finite(n) => Finite(n),
        GchValue::Aleph(o) => Aleph(o),
    })
}

// ---------------------------------------------------------------------------
// strong limits and perfect bounds

pub fn is_strong_limit(k: &CardinalExpr, mode: AxiomMode) -> Result<Trivalent, CardinalError> {
    let k = normalize(k)?;
    if k.is_finite() {
        return Err(CardinalError::FiniteArgument(k.to_string()));
    }
    let verdict = match (&k, mode) {
        (Aleph(o), _) if o.is_zero() => Trivalent::True,
        (Beth(o), _) if o.is_limit() => Trivalent::True,
        (Beth(_), _) | (Succ(_), _) | (PowSet(_), _) => Trivalent::False,
        // ℵ_{γ+1} = ℵ_γ⁺ is never a strong limit.
        (Aleph(o), _) if o.is_successor() => Trivalent::False,
        (Aleph(_), AxiomMode::Zfc) => Trivalent::Unknown,
        (Hat(_), AxiomMode::Zfc) => Trivalent::Unknown,
        (_, AxiomMode::Gch) => match gch_value(&k)? {
            GchValue::Aleph(o) if o.is_zero() || o.is_limit() => Trivalent::True,
            _ => Trivalent::False,
        },
        (Finite(_), _) => unreachable!("rejected above"),
    };
    Ok(verdict)
}

/// Result of [`least_perfect_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerfectBound {
    Known(CardinalExpr),
    Unknown,
}

/// The least cardinal `λ ≥ k` of the form `sup{2^β | β < γ}`, when the rule
/// table determines it.
///
/// `ℵ₀`, every beth, every `2^κ` and every `hat(κ)` already has that form. For
/// other arguments the search looks for `ℶ_{ε+1}` with `ε` zero or a limit such
/// that `ℶ_ε < k ≤ ℶ_{ε+1}` is derivable with strict verdicts; nothing of the
/// required form lies strictly between `ℶ_ε` and `ℶ_{ε+1}` in that case.
pub fn least_perfect_bound(k: &CardinalExpr, mode: AxiomMode) -> Result<PerfectBound, CardinalError> {
    let k = normalize(k)?;
    if k.is_finite() {
        return Err(CardinalError::FiniteArgument(k.to_string()));
    }
    if mode == AxiomMode::Gch {
        return Ok(PerfectBound::Known(k));
    }
    match &k {
        Aleph(o) if o.is_zero() => return Ok(PerfectBound::Known(k)),
        Beth(_) | PowSet(_) | Hat(_) => return Ok(PerfectBound::Known(k)),
        _ => {}
    }
    let mut candidates = vec![Ordinal::zero()];
    collect_limit_parts(&k, &mut candidates);
    candidates.sort();
    candidates.dedup();
    for eps in candidates.into_iter().rev() {
        let below = beth_normal(eps.clone());
        if zfc_compare(&below, &k) != Comparison::Lt {
            continue;
        }
        let above = Beth(eps.succ()?);
        return Ok(match zfc_compare(&above, &k) {
            Comparison::Gt | Comparison::Eq => PerfectBound::Known(above),
            _ => PerfectBound::Unknown,
        });
    }
    Ok(PerfectBound::Unknown)
}

fn collect_limit_parts(e: &CardinalExpr, out: &mut Vec<Ordinal>) {
    match e {
        Finite(_) => {}
        Aleph(o) | Beth(o) => out.push(o.limit_part()),
        PowSet(k) | Succ(k) | Hat(k) => collect_limit_parts(k, out),
    }
}
