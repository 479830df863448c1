//! Points of `[0,1]^n` under the lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} = {value} lies outside [0,1]")]
    OutOfRange { index: usize, value: Rational },
    #[error("a point needs at least one coordinate")]
    ZeroDims,
    #[error("empty point set")]
    Empty,
    #[error("points are equal; nothing lies strictly between them")]
    NoGap,
    #[error("sample of {count} points exceeds the limit of {limit}")]
    SampleTooLarge { count: u128, limit: usize },
}

/// A point with rational coordinates in `[0,1]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct LexPoint {
    coords: Vec<Rational>,
}

impl TryFrom<Vec<Rational>> for LexPoint {
    type Error = LexError;
    fn try_from(coords: Vec<Rational>) -> Result<Self, LexError> {
        LexPoint::new(coords)
    }
}

impl From<LexPoint> for Vec<Rational> {
    fn from(p: LexPoint) -> Self {
        p.coords
    }
}

impl LexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, LexError> {
        if coords.is_empty() {
            return Err(LexError::ZeroDims);
        }
        if let Some((index, value)) = coords.iter().enumerate().find(|(_, c)| !c.in_unit_interval()) {
            return Err(LexError::OutOfRange {
                index,
                value: value.clone(),
            });
        }
        Ok(LexPoint { coords })
    }

    /// Parses coordinates written as `p/q` strings.
    pub fn parse(coords: &[&str]) -> Result<Self, crate::ParseError> {
        let cs = coords.iter().map(|s| s.parse()).collect::<Result<Vec<Rational>, _>>()?;
        LexPoint::new(cs).map_err(|e| crate::ParseError::Rational(e.to_string()))
    }

    pub fn constant(dims: usize, value: Rational) -> Result<Self, LexError> {
        LexPoint::new(vec![value; dims])
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Index of the first coordinate where `self` and `other` differ.
    pub fn first_difference(&self, other: &LexPoint) -> Option<usize> {
        self.coords.iter().zip(&other.coords).position(|(a, b)| a != b)
    }

    /// Number of leading coordinates after which every coordinate is zero.
    pub fn support_len(&self) -> usize {
        self.coords.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1)
    }
}

impl fmt::Debug for LexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Orders points of equal dimension; use [`lex_compare`] for a checked comparison.
impl PartialOrd for LexPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

/// The ambient interval `[0,1]^dims`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexInterval {
    dims: usize,
}

impl LexInterval {
    pub fn new(dims: usize) -> Result<Self, LexError> {
        if dims == 0 {
            Err(LexError::ZeroDims)
        } else {
            Ok(LexInterval { dims })
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn min(&self) -> LexPoint {
        LexPoint::constant(self.dims, Rational::zero()).expect("dims > 0")
    }

    pub fn max(&self) -> LexPoint {
        LexPoint::constant(self.dims, Rational::one()).expect("dims > 0")
    }

    pub fn center(&self) -> LexPoint {
        LexPoint::constant(self.dims, Rational::half()).expect("dims > 0")
    }

    pub fn check(&self, p: &LexPoint) -> Result<(), LexError> {
        if p.dims() == self.dims {
            Ok(())
        } else {
            Err(LexError::DimensionMismatch {
                expected: self.dims,
                found: p.dims(),
            })
        }
    }
}

pub fn lex_compare(p: &LexPoint, q: &LexPoint) -> Result<Ordering, LexError> {
    if p.dims() != q.dims() {
        return Err(LexError::DimensionMismatch {
            expected: p.dims(),
            found: q.dims(),
        });
    }
    for (a, b) in p.coords.iter().zip(&q.coords) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            o => return Ok(o),
        }
    }
    Ok(Ordering::Equal)
}

fn uniform_dims(points: &[LexPoint]) -> Result<usize, LexError> {
    let first = points.first().ok_or(LexError::Empty)?;
    for p in points {
        if p.dims() != first.dims() {
            return Err(LexError::DimensionMismatch {
                expected: first.dims(),
                found: p.dims(),
            });
        }
    }
    Ok(first.dims())
}

/// Supremum by the coordinatewise recursion: `s_b` is the largest `b`-th
/// coordinate among points agreeing with `s` below `b`, or 0 if none do.
pub fn sup_finite(points: &[LexPoint]) -> Result<LexPoint, LexError> {
    extremum(points, Ordering::Greater, Rational::zero())
}

/// Infimum by the dual recursion, defaulting to 1.
pub fn inf_finite(points: &[LexPoint]) -> Result<LexPoint, LexError> {
    extremum(points, Ordering::Less, Rational::one())
}

fn extremum(points: &[LexPoint], better: Ordering, default: Rational) -> Result<LexPoint, LexError> {
    let dims = uniform_dims(points)?;
    let mut agreeing: Vec<&LexPoint> = points.iter().collect();
    let mut s = Vec::with_capacity(dims);
    for b in 0..dims {
        let best = agreeing
            .iter()
            .map(|p| p.coord(b))
            .fold(None::<&Rational>, |acc, c| match acc {
                Some(a) if a.cmp(c) != better.reverse() => Some(a),
                _ => Some(c),
            })
            .cloned()
            .unwrap_or_else(|| default.clone());
        agreeing.retain(|p| *p.coord(b) == best);
        s.push(best);
    }
    LexPoint::new(s)
}

/// Default cap on the number of generated sample points.
pub const SAMPLE_LIMIT: usize = 1 << 20;

/// Number of points returned by [`dense_sample`]: `(2^depth + 1)^dims`.
pub fn dense_sample_count(interval: LexInterval, depth: u32) -> u128 {
    let per = (1u128 << depth.min(100)) + 1;
    per.checked_pow(interval.dims() as u32).unwrap_or(u128::MAX)
}

/// Eventually-zero points whose coordinates lie on the grid `m / 2^depth`,
/// in increasing order.
///
/// Built as the union over `b = 0..=dims` of the grid on the first `b`
/// coordinates padded with zeros.
pub fn dense_sample(interval: LexInterval, depth: u32) -> Result<Vec<LexPoint>, LexError> {
    let count = dense_sample_count(interval, depth);
    if count > SAMPLE_LIMIT as u128 {
        return Err(LexError::SampleTooLarge {
            count,
            limit: SAMPLE_LIMIT,
        });
    }
    let grid: Vec<Rational> = (0..=(1i64 << depth)).map(|m| Rational::dyadic(m, depth)).collect();
    let n = interval.dims();
    let mut out: Vec<LexPoint> = Vec::with_capacity(count as usize);
    // Points with support exactly b: nonzero coordinate at b-1.
    let mut prefixes: Vec<Vec<Rational>> = vec![Vec::new()];
    out.push(interval.min());
    for _ in 0..n {
        let mut next = Vec::with_capacity(prefixes.len() * grid.len());
        for pre in &prefixes {
            for g in &grid {
                let mut v = pre.clone();
                v.push(g.clone());
                if !g.is_zero() {
                    let mut full = v.clone();
                    full.resize(n, Rational::zero());
                    out.push(LexPoint { coords: full });
                }
                next.push(v);
            }
        }
        prefixes = next;
    }
    out.sort();
    Ok(out)
}

/// The eventually-zero point `(a_0, …, a_{j-1}, t, 0, …)` with `j` the first
/// coordinate where the points differ and `t` the midpoint there; `a` is the
/// smaller point. Always strictly between the two inputs.
pub fn separation_witness(a: &LexPoint, b: &LexPoint) -> Result<LexPoint, LexError> {
    let (lo, hi) = match lex_compare(a, b)? {
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
        Ordering::Equal => return Err(LexError::NoGap),
    };
    let j = lo.first_difference(hi).expect("points differ");
    let mut coords = lo.coords[..j].to_vec();
    coords.push(lo.coord(j).midpoint(hi.coord(j)));
    coords.resize(lo.dims(), Rational::zero());
    LexPoint::new(coords)
}

/// A point of two copies of the interval glued at max(first) = min(second).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "copy", content = "point")]
pub enum WedgePoint {
    First(LexPoint),
    Junction,
    Second(LexPoint),
}

impl WedgePoint {
    fn rank(&self) -> u8 {
        match self {
            WedgePoint::First(_) => 0,
            WedgePoint::Junction => 1,
            WedgePoint::Second(_) => 2,
        }
    }

    /// `1` or `2`; the junction belongs to both and reports `1`.
    pub fn copy(&self) -> u8 {
        match self {
            WedgePoint::First(_) | WedgePoint::Junction => 1,
            WedgePoint::Second(_) => 2,
        }
    }

    /// Position within its copy; the junction is the all-ones point of copy 1.
    pub fn image(&self, dims: usize) -> LexPoint {
        match self {
            WedgePoint::First(p) | WedgePoint::Second(p) => p.clone(),
            WedgePoint::Junction => LexPoint::constant(dims, Rational::one()).expect("dims > 0"),
        }
    }

    /// Canonical form: the endpoints being glued become `Junction`.
    pub fn normalized(self) -> WedgePoint {
        match self {
            WedgePoint::First(p) if p.coords.iter().all(Rational::is_one) => WedgePoint::Junction,
            WedgePoint::Second(p) if p.coords.iter().all(Rational::is_zero) => WedgePoint::Junction,
            w => w,
        }
    }
}

impl PartialOrd for WedgePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WedgePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (WedgePoint::First(p), WedgePoint::First(q)) | (WedgePoint::Second(p), WedgePoint::Second(q)) => p.cmp(q),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// Order isomorphism from the interval onto the wedge of two copies.
///
/// Let `j` be the first coordinate not equal to `1/2`. Below `1/2` the point
/// goes to copy 1 with coordinates `(1, …, 1, 2p_j, p_{j+1}, …)`; above, to
/// copy 2 with `(0, …, 0, 2p_j - 1, p_{j+1}, …)`. The all-`1/2` point is the
/// junction. In one dimension this is plain doubling of the coordinate.
pub fn wedge_map(p: &LexPoint) -> WedgePoint {
    let half = Rational::half();
    let Some(j) = p.coords.iter().position(|c| *c != half) else {
        return WedgePoint::Junction;
    };
    let two = Rational::from_integer(2);
    let mut coords = p.coords.clone();
    let pj = &p.coords[j];
    let out = if *pj < half {
        coords[..j].fill(Rational::one());
        coords[j] = pj * &two;
        WedgePoint::First(LexPoint { coords })
    } else {
        coords[..j].fill(Rational::zero());
        coords[j] = pj * &two - Rational::one();
        WedgePoint::Second(LexPoint { coords })
    };
    out.normalized()
}

/// Inverse of [`wedge_map`].
pub fn wedge_section(w: &WedgePoint, dims: usize) -> Result<LexPoint, LexError> {
    let half = Rational::half();
    let two = Rational::from_integer(2);
    let (q, is_first) = match w.clone().normalized() {
        WedgePoint::Junction => return LexPoint::constant(dims, half),
        WedgePoint::First(q) => (q, true),
        WedgePoint::Second(q) => (q, false),
    };
    if q.dims() != dims {
        return Err(LexError::DimensionMismatch {
            expected: dims,
            found: q.dims(),
        });
    }
    let pivot = if is_first { Rational::one() } else { Rational::zero() };
    let j = q
        .coords
        .iter()
        .position(|c| *c != pivot)
        .expect("normalized wedge point is not the junction");
    let mut coords = q.coords.clone();
    coords[..j].fill(half);
    coords[j] = if is_first {
        &q.coords[j] / &two
    } else {
        (&q.coords[j] + &Rational::one()) / two
    };
    LexPoint::new(coords)
}

/// Coordinatewise `1 - x`; an order anti-isomorphism and an involution.
pub fn reverse_point(p: &LexPoint) -> LexPoint {
    LexPoint {
        coords: p.coords.iter().map(|c| Rational::one() - c).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(cs: &[&str]) -> LexPoint {
        LexPoint::parse(cs).unwrap()
    }

    #[test]
    fn compare_fixtures() {
        assert_eq!(lex_compare(&pt(&["1/2", "1"]), &pt(&["3/4", "0"])), Ok(Ordering::Less));
        assert_eq!(
            lex_compare(&pt(&["1/2", "1/4"]), &pt(&["1/2", "3/4"])),
            Ok(Ordering::Less)
        );
        let p = pt(&["1/3", "2/3"]);
        assert_eq!(lex_compare(&p, &p), Ok(Ordering::Equal));
        assert!(lex_compare(&p, &pt(&["1"])).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(LexPoint::parse(&["3/2"]).is_err());
        assert!(LexPoint::parse(&["-1/2"]).is_err());
        assert!(LexPoint::new(vec![]).is_err());
    }

    #[test]
    fn sup_fixtures() {
        let a = [pt(&["1/2", "1"]), pt(&["3/4", "0"])];
        assert_eq!(sup_finite(&a).unwrap(), pt(&["3/4", "0"]));
        assert_eq!(inf_finite(&a).unwrap(), pt(&["1/2", "1"]));
        let b = [pt(&["1/2", "1/4"]), pt(&["1/2", "3/4"])];
        assert_eq!(sup_finite(&b).unwrap(), pt(&["1/2", "3/4"]));
        let p = pt(&["1/5", "0", "1"]);
        assert_eq!(sup_finite(std::slice::from_ref(&p)).unwrap(), p);
        assert_eq!(sup_finite(&[]), Err(LexError::Empty));
    }

    #[test]
    fn sample_fixtures() {
        let one = LexInterval::new(1).unwrap();
        assert_eq!(
            dense_sample(one, 1).unwrap(),
            vec![pt(&["0"]), pt(&["1/2"]), pt(&["1"])]
        );
        let two = LexInterval::new(2).unwrap();
        let s = dense_sample(two, 1).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(dense_sample_count(two, 1), 9);
        let i = s.iter().position(|p| *p == pt(&["1/2", "0"])).unwrap();
        let j = s.iter().position(|p| *p == pt(&["1/2", "1/2"])).unwrap();
        assert!(i < j);
    }

    #[test]
    fn separation_fixture() {
        let a = pt(&["0", "1"]);
        let b = pt(&["1/2", "0"]);
        let s = separation_witness(&a, &b).unwrap();
        assert_eq!(s, pt(&["1/4", "0"]));
        assert!(a < s && s < b);
        assert_eq!(separation_witness(&a, &a), Err(LexError::NoGap));
    }

    #[test]
    fn wedge_fixtures() {
        assert_eq!(wedge_map(&pt(&["1/4", "1/3"])), WedgePoint::First(pt(&["1/2", "1/3"])));
        assert_eq!(wedge_map(&pt(&["1/2"])), WedgePoint::Junction);
        assert_eq!(wedge_map(&pt(&["1/2", "1/2"])), WedgePoint::Junction);
        assert_eq!(wedge_map(&pt(&["1", "1"])), WedgePoint::Second(pt(&["1", "1"])));
        assert_eq!(wedge_map(&pt(&["0", "0"])), WedgePoint::First(pt(&["0", "0"])));
        // Above the midpoint of the first coordinate, below in the second.
        assert_eq!(wedge_map(&pt(&["1/2", "0"])), WedgePoint::First(pt(&["1", "0"])));
        assert_eq!(wedge_map(&pt(&["1/2", "1"])), WedgePoint::Second(pt(&["0", "1"])));
    }

    #[test]
    fn wedge_section_inverts() {
        for cs in [
            ["1/4", "1/3"],
            ["1/2", "0"],
            ["1/2", "1/2"],
            ["3/4", "1"],
            ["1/2", "5/7"],
        ] {
            let p = pt(&cs);
            assert_eq!(wedge_section(&wedge_map(&p), 2).unwrap(), p);
        }
        assert_eq!(
            wedge_section(&WedgePoint::First(pt(&["1", "1"])), 2).unwrap(),
            pt(&["1/2", "1/2"])
        );
        assert_eq!(
            wedge_section(&WedgePoint::Second(pt(&["0", "0"])), 2).unwrap(),
            pt(&["1/2", "1/2"])
        );
    }

    #[test]
    fn reverse_fixtures() {
        assert_eq!(reverse_point(&pt(&["0", "0"])), pt(&["1", "1"]));
        assert_eq!(reverse_point(&pt(&["1/4", "3/4"])), pt(&["3/4", "1/4"]));
    }

    #[test]
    fn json_shape() {
        let p: LexPoint = serde_json::from_str(r#"["1/2","3/4"]"#).unwrap();
        assert_eq!(p, pt(&["1/2", "3/4"]));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/2","3/4"]"#);
        assert!(serde_json::from_str::<LexPoint>(r#"["2"]"#).is_err());
        let w = serde_json::to_string(&WedgePoint::First(p)).unwrap();
        assert_eq!(w, r#"{"copy":"first","point":["1/2","3/4"]}"#);
        assert_eq!(
            serde_json::to_string(&WedgePoint::Junction).unwrap(),
            r#"{"copy":"junction"}"#
        );
    }
}
