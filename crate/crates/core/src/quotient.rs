//! Quotients of a lexicographic interval by a finite set of breakpoints.
//!
//! Between consecutive atoms `a_i < a_{i+1}` that first differ at coordinate
//! `d`, a formal copy of the rationals is inserted as the block points
//! `(a_i[..d], v, 0, …)` for `a_i[d] < v < a_{i+1}[d]`. Two points are
//! identified when the closed interval between them meets at most one atom or
//! block point. The classes inside a gap are the fibers `t[d] = v`; the fibers
//! `t[d] = a_i[d]` and `t[d] = a_{i+1}[d]` join the neighbouring atoms.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexint::{LexError, LexInterval, LexPoint};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("atom index {index} out of range (have {atoms} atoms)")]
    AtomIndex { index: usize, atoms: usize },
    #[error("segment position {0} must lie strictly inside (0,1)")]
    SegmentPosition(Rational),
}

/// A finite sorted set of atoms containing the ambient endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointSet {
    ambient: LexInterval,
    atoms: Vec<LexPoint>,
}

impl BreakpointSet {
    /// Sorts, removes duplicates and adjoins the ambient minimum and maximum.
    pub fn new(ambient: LexInterval, atoms: impl IntoIterator<Item = LexPoint>) -> Result<Self, QuotientError> {
        let mut all = vec![ambient.min(), ambient.max()];
        for a in atoms {
            ambient.check(&a)?;
            all.push(a);
        }
        all.sort();
        all.dedup();
        Ok(BreakpointSet { ambient, atoms: all })
    }

    pub fn ambient(&self) -> LexInterval {
        self.ambient
    }

    pub fn atoms(&self) -> &[LexPoint] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &LexPoint {
        &self.atoms[i]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn gaps(&self) -> usize {
        self.atoms.len() - 1
    }

    /// First coordinate where atoms `i` and `i+1` differ.
    pub fn split_coord(&self, gap: usize) -> usize {
        self.atoms[gap]
            .first_difference(&self.atoms[gap + 1])
            .expect("atoms are distinct")
    }

    /// `Ok(i)` if `t` is atom `i`, `Err(i)` if `a_i < t < a_{i+1}`.
    pub fn locate(&self, t: &LexPoint) -> Result<Result<usize, usize>, QuotientError> {
        self.ambient.check(t)?;
        Ok(match self.atoms.binary_search(t) {
            Ok(i) => Ok(i),
            Err(i) => Err(i - 1),
        })
    }

    /// Number of atoms in the closed interval between `s` and `t`.
    pub fn atoms_between(&self, s: &LexPoint, t: &LexPoint) -> usize {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let start = self.atoms.partition_point(|a| a < lo);
        let end = self.atoms.partition_point(|a| a <= hi);
        end - start
    }
}

/// The raw relation: the closed interval between `s` and `t` contains at most
/// one atom. Not transitive in general.
pub fn related(s: &LexPoint, t: &LexPoint, atoms: &BreakpointSet) -> Result<bool, QuotientError> {
    atoms.ambient.check(s)?;
    atoms.ambient.check(t)?;
    Ok(atoms.atoms_between(s, t) <= 1)
}

/// One formal block of rationals filling a gap between consecutive atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub gap: usize,
    /// Coordinate along which the block runs.
    pub coord: usize,
    /// Open range of that coordinate.
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseElement {
    Atom(usize),
    Block(usize),
}

/// Atoms interleaved with one formal block per gap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensifiedSet {
    breakpoints: BreakpointSet,
    blocks: Vec<Block>,
}

pub fn densify(atoms: &BreakpointSet) -> DensifiedSet {
    let blocks = (0..atoms.gaps())
        .map(|gap| {
            let coord = atoms.split_coord(gap);
            Block {
                gap,
                coord,
                lower: atoms.atom(gap).coord(coord).clone(),
                upper: atoms.atom(gap + 1).coord(coord).clone(),
            }
        })
        .collect();
    DensifiedSet {
        breakpoints: atoms.clone(),
        blocks,
    }
}

/// Interval of block parameters `v` with `lo ≤ B_v ≤ hi`, as
/// `(min, min_closed, max, max_closed)`.
type VRange = (Rational, bool, Rational, bool);

impl DensifiedSet {
    pub fn breakpoints(&self) -> &BreakpointSet {
        &self.breakpoints
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Every gap already holds a block, so densifying again changes nothing.
    pub fn densify(&self) -> DensifiedSet {
        self.clone()
    }

    /// `atom, block, atom, …, atom`.
    pub fn elements(&self) -> Vec<DenseElement> {
        let mut out = Vec::with_capacity(2 * self.breakpoints.len() - 1);
        for i in 0..self.breakpoints.len() {
            if i > 0 {
                out.push(DenseElement::Block(i - 1));
            }
            out.push(DenseElement::Atom(i));
        }
        out
    }

    /// The block point with parameter `v`.
    pub fn block_point(&self, gap: usize, v: &Rational) -> LexPoint {
        let b = &self.blocks[gap];
        let mut coords = self.breakpoints.atom(gap).coords()[..b.coord].to_vec();
        coords.push(v.clone());
        coords.resize(self.breakpoints.ambient.dims(), Rational::zero());
        LexPoint::new(coords).expect("inside the unit cube")
    }

    fn block_range(&self, gap: usize, lo: &LexPoint, hi: &LexPoint) -> Option<VRange> {
        let b = &self.blocks[gap];
        let d = b.coord;
        let prefix = &self.breakpoints.atom(gap).coords()[..d];
        let (mut min, mut min_closed) = (b.lower.clone(), false);
        let (mut max, mut max_closed) = (b.upper.clone(), false);
        match lo.coords()[..d].cmp(prefix) {
            Ordering::Greater => return None,
            Ordering::Less => {}
            Ordering::Equal => {
                let v = lo.coord(d).clone();
                let tail_zero = lo.coords()[d + 1..].iter().all(Rational::is_zero);
                if v > min {
                    min = v;
                    min_closed = tail_zero;
                }
            }
        }
        match hi.coords()[..d].cmp(prefix) {
            Ordering::Less => return None,
            Ordering::Greater => {}
            Ordering::Equal => {
                let v = hi.coord(d).clone();
                if v < max {
                    max = v;
                    max_closed = true;
                }
            }
        }
        Some((min, min_closed, max, max_closed))
    }

    /// Number of block points of gap `gap` in `[lo, hi]`: `Some(0)`, `Some(1)`,
    /// or `None` for infinitely many.
    pub fn blocks_between(&self, gap: usize, lo: &LexPoint, hi: &LexPoint) -> Option<usize> {
        let Some((min, min_closed, max, max_closed)) = self.block_range(gap, lo, hi) else {
            return Some(0);
        };
        match min.cmp(&max) {
            Ordering::Greater => Some(0),
            Ordering::Equal => Some(usize::from(min_closed && max_closed)),
            Ordering::Less => None,
        }
    }

    /// The densified relation: at most one atom or block point lies in the
    /// closed interval between `s` and `t`.
    pub fn related(&self, s: &LexPoint, t: &LexPoint) -> Result<bool, QuotientError> {
        let ambient = self.breakpoints.ambient;
        ambient.check(s)?;
        ambient.check(t)?;
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let mut count = self.breakpoints.atoms_between(lo, hi);
        for gap in 0..self.blocks.len() {
            match self.blocks_between(gap, lo, hi) {
                None => return Ok(false),
                Some(n) => count += n,
            }
            if count > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A point of the quotient interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MixedPoint {
    Atom { atom: usize },
    Segment { segment: usize, pos: Rational },
}

impl MixedPoint {
    pub fn atom(i: usize) -> Self {
        MixedPoint::Atom { atom: i }
    }

    pub fn segment(i: usize, pos: Rational) -> Self {
        MixedPoint::Segment { segment: i, pos }
    }

    /// `(atom or segment index, position)` with atoms at the ends of segments:
    /// atom `i` sorts as `(i, 0)` and segment `i` at `(i, pos)`.
    fn key(&self) -> (usize, Rational) {
        match self {
            MixedPoint::Atom { atom } => (*atom, Rational::zero()),
            MixedPoint::Segment { segment, pos } => (*segment, pos.clone()),
        }
    }
}

impl PartialOrd for MixedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MixedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// `m` atoms alternating with `m - 1` open unit segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedInterval {
    pub atoms: usize,
}

impl MixedInterval {
    pub fn segments(&self) -> usize {
        self.atoms.saturating_sub(1)
    }

    pub fn check(&self, p: &MixedPoint) -> Result<(), QuotientError> {
        match p {
            MixedPoint::Atom { atom } if *atom < self.atoms => Ok(()),
            MixedPoint::Segment { segment, pos } if *segment < self.segments() => {
                if pos.in_open_unit_interval() {
                    Ok(())
                } else {
                    Err(QuotientError::SegmentPosition(pos.clone()))
                }
            }
            MixedPoint::Atom { atom: index } | MixedPoint::Segment { segment: index, .. } => {
                Err(QuotientError::AtomIndex {
                    index: *index,
                    atoms: self.atoms,
                })
            }
        }
    }

    pub fn min(&self) -> MixedPoint {
        MixedPoint::atom(0)
    }

    pub fn max(&self) -> MixedPoint {
        MixedPoint::atom(self.atoms - 1)
    }
}

/// The quotient map onto a [`MixedInterval`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMap {
    source: DensifiedSet,
    target: MixedInterval,
}

pub fn quotient_by_breakpoints(atoms: &BreakpointSet) -> (MixedInterval, QuotientMap) {
    let target = MixedInterval { atoms: atoms.len() };
    (
        target,
        QuotientMap {
            source: densify(atoms),
            target,
        },
    )
}

impl QuotientMap {
    pub fn source(&self) -> &DensifiedSet {
        &self.source
    }

    pub fn breakpoints(&self) -> &BreakpointSet {
        &self.source.breakpoints
    }

    pub fn target(&self) -> MixedInterval {
        self.target
    }

    pub fn eval(&self, t: &LexPoint) -> Result<MixedPoint, QuotientError> {
        let bp = &self.source.breakpoints;
        let gap = match bp.locate(t)? {
            Ok(i) => return Ok(MixedPoint::atom(i)),
            Err(gap) => gap,
        };
        let block = &self.source.blocks[gap];
        let v = t.coord(block.coord);
        if *v == block.lower {
            return Ok(MixedPoint::atom(gap));
        }
        if *v == block.upper {
            return Ok(MixedPoint::atom(gap + 1));
        }
        let pos = (v - &block.lower) / (&block.upper - &block.lower);
        Ok(MixedPoint::segment(gap, pos))
    }

    /// A point of the class `q`: the atom itself, or the block point at the
    /// corresponding parameter.
    pub fn representative(&self, q: &MixedPoint) -> Result<LexPoint, QuotientError> {
        self.target.check(q)?;
        Ok(match q {
            MixedPoint::Atom { atom } => self.source.breakpoints.atom(*atom).clone(),
            MixedPoint::Segment { segment, pos } => {
                let b = &self.source.blocks[*segment];
                let v = &b.lower + pos * (&b.upper - &b.lower);
                self.source.block_point(*segment, &v)
            }
        })
    }
}

/// True when `p(s) = p(t)` coincides with the densified relation on every
/// pair of samples.
pub fn fibers_match_classes(atoms: &BreakpointSet, samples: &[LexPoint]) -> Result<bool, QuotientError> {
    let (_, p) = quotient_by_breakpoints(atoms);
    let images = samples.iter().map(|s| p.eval(s)).collect::<Result<Vec<_>, _>>()?;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let same_image = images[i] == images[j];
            if same_image != p.source.related(&samples[i], &samples[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(cs: &[&str]) -> LexPoint {
        LexPoint::parse(cs).unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn one_dim(atoms: &[&str]) -> BreakpointSet {
        BreakpointSet::new(LexInterval::new(1).unwrap(), atoms.iter().map(|a| pt(&[a]))).unwrap()
    }

    fn two_dim_fixture() -> BreakpointSet {
        BreakpointSet::new(LexInterval::new(2).unwrap(), [pt(&["1/4", "0"]), pt(&["1/2", "0"])]).unwrap()
    }

    #[test]
    fn endpoints_adjoined_and_sorted() {
        let a = one_dim(&["1/2", "1/4"]);
        assert_eq!(a.atoms(), [pt(&["0"]), pt(&["1/4"]), pt(&["1/2"]), pt(&["1"])]);
    }

    #[test]
    fn related_fixtures() {
        let a = one_dim(&["1/4", "1/2"]);
        assert!(related(&pt(&["3/10"]), &pt(&["2/5"]), &a).unwrap());
        assert!(!related(&pt(&["0"]), &pt(&["1/4"]), &a).unwrap());
        assert!(related(&pt(&["1/10"]), &pt(&["1/4"]), &a).unwrap());
    }

    #[test]
    fn raw_relation_not_transitive() {
        let a = one_dim(&["1/4", "1/3", "1/2"]);
        let (x, y, z) = (pt(&["1/10"]), pt(&["3/10"]), pt(&["2/5"]));
        assert!(related(&x, &y, &a).unwrap());
        assert!(related(&y, &z, &a).unwrap());
        assert!(!related(&x, &z, &a).unwrap());
    }

    #[test]
    fn densify_structure() {
        let d = densify(&one_dim(&[]));
        assert_eq!(
            d.elements(),
            [DenseElement::Atom(0), DenseElement::Block(0), DenseElement::Atom(1)]
        );
        let d = densify(&one_dim(&["1/2"]));
        assert_eq!(d.blocks().len(), 2);
        assert_eq!(d.densify(), d);
    }

    #[test]
    fn one_dim_quotient() {
        let (j, p) = quotient_by_breakpoints(&one_dim(&["1/4", "1/2"]));
        assert_eq!(j.atoms, 4);
        assert_eq!(p.eval(&pt(&["1/4"])).unwrap(), MixedPoint::atom(1));
        assert_eq!(p.eval(&pt(&["3/10"])).unwrap(), MixedPoint::segment(1, r("1/5")));
        assert_eq!(p.eval(&pt(&["0"])).unwrap(), MixedPoint::atom(0));
        assert_eq!(p.eval(&pt(&["1"])).unwrap(), MixedPoint::atom(3));
        assert!(p.eval(&pt(&["0", "0"])).is_err());
    }

    #[test]
    fn two_dim_fiber_collapse() {
        let (j, p) = quotient_by_breakpoints(&two_dim_fixture());
        assert_eq!(j.atoms, 4);
        let s = pt(&["3/8", "1/4"]);
        let t = pt(&["3/8", "3/4"]);
        assert_eq!(p.eval(&s).unwrap(), MixedPoint::segment(1, r("1/2")));
        assert_eq!(p.eval(&t).unwrap(), MixedPoint::segment(1, r("1/2")));
        assert!(p.source().related(&s, &t).unwrap());
        // Tails of the atoms' fibers collapse onto the atoms.
        assert_eq!(p.eval(&pt(&["1/4", "1/3"])).unwrap(), MixedPoint::atom(1));
        assert_eq!(p.eval(&pt(&["1/2", "1/3"])).unwrap(), MixedPoint::atom(2));
        assert_eq!(p.eval(&pt(&["1", "1/3"])).unwrap(), MixedPoint::atom(3));
    }

    #[test]
    fn fibers_match_fixtures() {
        let a = one_dim(&["1/4", "1/2"]);
        assert!(fibers_match_classes(&a, a.atoms()).unwrap());
        let b = two_dim_fixture();
        let samples = [pt(&["3/8", "1/4"]), pt(&["3/8", "3/4"])];
        assert!(fibers_match_classes(&b, &samples).unwrap());
        let straddle = [pt(&["1/5"]), pt(&["3/10"])];
        assert!(fibers_match_classes(&a, &straddle).unwrap());
    }

    #[test]
    fn representatives_map_back() {
        let (j, p) = quotient_by_breakpoints(&two_dim_fixture());
        for q in [
            MixedPoint::atom(0),
            MixedPoint::segment(1, r("1/3")),
            MixedPoint::atom(j.atoms - 1),
        ] {
            assert_eq!(p.eval(&p.representative(&q).unwrap()).unwrap(), q);
        }
    }

    #[test]
    fn mixed_point_json_and_order() {
        let a: MixedPoint = serde_json::from_str(r#"{"atom":2}"#).unwrap();
        let s: MixedPoint = serde_json::from_str(r#"{"segment":1,"pos":"1/5"}"#).unwrap();
        assert!(s < a && MixedPoint::atom(1) < s);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"segment":1,"pos":"1/5"}"#);
    }
}
