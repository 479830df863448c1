//! Cellwise-constant maps from an interval times a finite space into a finite
//! space, with path operations and density reduction.
//!
//! An interval with `m` atoms has `2m - 1` cells: atom `i` is cell `2i` and the
//! open gap after it is cell `2i + 1`. Values are stored per `(cell, u)` for
//! `u` in the parameter space `C`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finspace::{bit, members, FinSpace, SpaceError};
use crate::lexint::{
    reverse_point, separation_witness, wedge_map, wedge_section, LexError, LexInterval, LexPoint, WedgePoint,
};
use crate::quotient::{quotient_by_breakpoints, BreakpointSet, MixedInterval, MixedPoint, QuotientError, QuotientMap};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BigMapError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("value table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("value index {0} is not a point of the target")]
    ValueRange(usize),
    #[error("expected a map on a {0} domain")]
    DomainKind(&'static str),
    #[error("maps have different parameter or target spaces, or different ambient dimension")]
    ShapeMismatch,
    #[error("end value differs from start value at parameter `{0}`")]
    EndpointMismatch(String),
    #[error("map is not continuous at {0}")]
    NotContinuous(Witness),
    #[error("quotient target has {quotient} atoms but the map's domain has {map}")]
    Incompatible { quotient: usize, map: usize },
    #[error("path maps need a one-point parameter space")]
    NotAPath,
    #[error("loop endpoints are not both the basepoint `{0}`")]
    NotALoop(String),
    #[error("atoms must be strictly increasing and include both endpoints")]
    BadAtoms,
    #[error("invalid cell key `{0}`")]
    BadKey(String),
}

/// An atom or the open gap following it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Atom(usize),
    Gap(usize),
}

impl Cell {
    pub fn index(self) -> usize {
        match self {
            Cell::Atom(i) => 2 * i,
            Cell::Gap(i) => 2 * i + 1,
        }
    }

    pub fn from_index(c: usize) -> Cell {
        if c.is_multiple_of(2) {
            Cell::Atom(c / 2)
        } else {
            Cell::Gap(c / 2)
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Atom(i) => write!(f, "atom:{i}"),
            Cell::Gap(i) => write!(f, "gap:{i}"),
        }
    }
}

impl FromStr for Cell {
    type Err = BigMapError;
    fn from_str(s: &str) -> Result<Self, BigMapError> {
        let bad = || BigMapError::BadKey(s.to_string());
        let (kind, i) = s.split_once(':').ok_or_else(bad)?;
        let i: usize = i.parse().map_err(|_| bad())?;
        match kind {
            "atom" => Ok(Cell::Atom(i)),
            "gap" => Ok(Cell::Gap(i)),
            _ => Err(bad()),
        }
    }
}

/// The interval factor of a cell map's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellDomain {
    Lex(BreakpointSet),
    Mixed(MixedInterval),
}

impl CellDomain {
    pub fn atoms(&self) -> usize {
        match self {
            CellDomain::Lex(b) => b.len(),
            CellDomain::Mixed(j) => j.atoms,
        }
    }

    pub fn cells(&self) -> usize {
        2 * self.atoms() - 1
    }

    pub fn as_lex(&self) -> Result<&BreakpointSet, BigMapError> {
        match self {
            CellDomain::Lex(b) => Ok(b),
            CellDomain::Mixed(_) => Err(BigMapError::DomainKind("lexicographic")),
        }
    }
}

/// A violating `(cell, u)` pair and the neighbouring `(cell', u')` whose value
/// escapes `U_{f(cell, u)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cell: String,
    pub u: String,
    pub neighbour_cell: String,
    pub neighbour_u: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): value at ({}, {}) leaves its neighbourhood",
            self.cell, self.u, self.neighbour_cell, self.neighbour_u
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Continuity {
    pub continuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    domain: CellDomain,
    cspace: FinSpace,
    target: FinSpace,
    values: Vec<usize>,
}

impl CellMap {
    pub fn new(
        domain: CellDomain,
        cspace: FinSpace,
        target: FinSpace,
        values: Vec<usize>,
    ) -> Result<Self, BigMapError> {
        let expected = domain.cells() * cspace.len();
        if values.len() != expected {
            return Err(BigMapError::TableSize {
                expected,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|v| **v >= target.len()) {
            return Err(BigMapError::ValueRange(v));
        }
        Ok(CellMap {
            domain,
            cspace,
            target,
            values,
        })
    }

    pub fn from_fn(
        domain: CellDomain,
        cspace: FinSpace,
        target: FinSpace,
        mut f: impl FnMut(Cell, usize) -> usize,
    ) -> Result<Self, BigMapError> {
        let mut values = Vec::with_capacity(domain.cells() * cspace.len());
        for c in 0..domain.cells() {
            for u in 0..cspace.len() {
                values.push(f(Cell::from_index(c), u));
            }
        }
        CellMap::new(domain, cspace, target, values)
    }

    /// A path with the given value per cell and a one-point parameter space.
    pub fn path(domain: CellDomain, target: FinSpace, cell_values: &[&str]) -> Result<Self, BigMapError> {
        let values = cell_values
            .iter()
            .map(|v| target.index(v))
            .collect::<Result<Vec<_>, _>>()?;
        CellMap::new(domain, FinSpace::point(), target, values)
    }

    pub fn constant(domain: CellDomain, cspace: FinSpace, target: FinSpace, value: &str) -> Result<Self, BigMapError> {
        let v = target.index(value)?;
        CellMap::from_fn(domain, cspace, target, |_, _| v)
    }

    pub fn domain(&self) -> &CellDomain {
        &self.domain
    }

    pub fn cspace(&self) -> &FinSpace {
        &self.cspace
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn cells(&self) -> usize {
        self.domain.cells()
    }

    pub fn value(&self, cell: Cell, u: usize) -> usize {
        self.values[cell.index() * self.cspace.len() + u]
    }

    fn value_at(&self, c: usize, u: usize) -> usize {
        self.values[c * self.cspace.len() + u]
    }

    /// Target labels along the cells for parameter `u`.
    pub fn cell_sequence(&self, u: usize) -> Vec<&str> {
        (0..self.cells())
            .map(|c| self.target.label(self.value_at(c, u)))
            .collect()
    }

    pub fn lex_cell(&self, t: &LexPoint) -> Result<Cell, BigMapError> {
        let b = self.domain.as_lex()?;
        Ok(match b.locate(t)? {
            Ok(i) => Cell::Atom(i),
            Err(i) => Cell::Gap(i),
        })
    }

    pub fn eval_lex(&self, t: &LexPoint, u: usize) -> Result<usize, BigMapError> {
        Ok(self.value(self.lex_cell(t)?, u))
    }

    pub fn eval_mixed(&self, q: &MixedPoint, u: usize) -> Result<usize, BigMapError> {
        let CellDomain::Mixed(j) = &self.domain else {
            return Err(BigMapError::DomainKind("mixed"));
        };
        j.check(q)?;
        let cell = match q {
            MixedPoint::Atom { atom } => Cell::Atom(*atom),
            MixedPoint::Segment { segment, .. } => Cell::Gap(*segment),
        };
        Ok(self.value(cell, u))
    }

    fn same_spaces(&self, other: &CellMap) -> bool {
        self.cspace == other.cspace && self.target == other.target
    }

    /// Checks `f(c', u') ∈ U_{f(c, u)}` for every cell `c`, every cell `c'`
    /// equal or adjacent to `c` when `c` is an atom (equal to `c` when `c` is a
    /// gap), and every `u' ∈ U_u`.
    pub fn check_continuity(&self) -> Continuity {
        let n = self.cells();
        for c in 0..n {
            let near: &[usize] = if c % 2 == 1 {
                &[c, c, c]
            } else {
                &[c.saturating_sub(1), c, (c + 1).min(n - 1)]
            };
            for u in 0..self.cspace.len() {
                let nbhd = self.target.nbhd_mask(self.value_at(c, u));
                for &c2 in near {
                    for u2 in members(self.cspace.nbhd_mask(u)) {
                        if nbhd & bit(self.value_at(c2, u2)) == 0 {
                            return Continuity {
                                continuous: false,
                                witness: Some(Witness {
                                    cell: Cell::from_index(c).to_string(),
                                    u: self.cspace.label(u).to_string(),
                                    neighbour_cell: Cell::from_index(c2).to_string(),
                                    neighbour_u: self.cspace.label(u2).to_string(),
                                }),
                            };
                        }
                    }
                }
            }
        }
        Continuity {
            continuous: true,
            witness: None,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.check_continuity().continuous
    }

    /// The value at the first and at the last atom is the same for every `u`.
    pub fn endpoints_constant(&self) -> bool {
        let last = self.cells() - 1;
        let k = self.cspace.len();
        (1..k).all(|u| self.value_at(0, u) == self.value_at(0, 0) && self.value_at(last, u) == self.value_at(last, 0))
    }

    /// The same map on a lexicographic domain with more atoms.
    pub fn refine(&self, extra: impl IntoIterator<Item = LexPoint>) -> Result<CellMap, BigMapError> {
        let b = self.domain.as_lex()?;
        let refined = BreakpointSet::new(b.ambient(), b.atoms().iter().cloned().chain(extra))?;
        let samples = cell_samples(&refined)?;
        let k = self.cspace.len();
        let mut values = Vec::with_capacity(samples.len() * k);
        for t in &samples {
            let cell = self.lex_cell(t)?;
            values.extend((0..k).map(|u| self.value(cell, u)));
        }
        CellMap::new(
            CellDomain::Lex(refined),
            self.cspace.clone(),
            self.target.clone(),
            values,
        )
    }
}

/// One point per cell: each atom, and an interior point of each gap.
fn cell_samples(b: &BreakpointSet) -> Result<Vec<LexPoint>, BigMapError> {
    let mut out = Vec::with_capacity(2 * b.len() - 1);
    for (i, a) in b.atoms().iter().enumerate() {
        if i > 0 {
            out.push(separation_witness(&b.atoms()[i - 1], a)?);
        }
        out.push(a.clone());
    }
    Ok(out)
}

/// A continuous map with a one-point parameter space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigPath(CellMap);

impl BigPath {
    pub fn new(map: CellMap) -> Result<Self, BigMapError> {
        if map.cspace.len() != 1 {
            return Err(BigMapError::NotAPath);
        }
        if let Some(w) = map.check_continuity().witness {
            return Err(BigMapError::NotContinuous(w));
        }
        Ok(BigPath(map))
    }

    pub fn map(&self) -> &CellMap {
        &self.0
    }

    pub fn into_map(self) -> CellMap {
        self.0
    }

    pub fn start(&self) -> &str {
        self.0.target.label(self.0.value_at(0, 0))
    }

    pub fn end(&self) -> &str {
        self.0.target.label(self.0.value_at(self.0.cells() - 1, 0))
    }

    pub fn is_loop_at(&self, basepoint: &str) -> bool {
        self.start() == basepoint && self.end() == basepoint
    }
}

/// A path whose endpoints both sit at the basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigLoop {
    path: BigPath,
    basepoint: String,
}

impl BigLoop {
    pub fn new(path: BigPath, basepoint: &str) -> Result<Self, BigMapError> {
        if !path.is_loop_at(basepoint) {
            return Err(BigMapError::NotALoop(basepoint.to_string()));
        }
        Ok(BigLoop {
            path,
            basepoint: basepoint.to_string(),
        })
    }

    pub fn path(&self) -> &BigPath {
        &self.path
    }

    pub fn basepoint(&self) -> &str {
        &self.basepoint
    }
}

/// Runs `f` on the first half and `g` on the second, gluing the last atom of
/// `f` to the first atom of `g` at the all-`1/2` point.
pub fn concat(f: &CellMap, g: &CellMap) -> Result<CellMap, BigMapError> {
    let (bf, bg) = (f.domain.as_lex()?, g.domain.as_lex()?);
    if !f.same_spaces(g) || bf.ambient() != bg.ambient() {
        return Err(BigMapError::ShapeMismatch);
    }
    let k = f.cspace.len();
    let last = f.cells() - 1;
    if let Some(u) = (0..k).find(|&u| f.value_at(last, u) != g.value_at(0, u)) {
        return Err(BigMapError::EndpointMismatch(f.cspace.label(u).to_string()));
    }
    let dims = bf.ambient().dims();
    let mut atoms = Vec::with_capacity(bf.len() + bg.len() - 1);
    for a in &bf.atoms()[..bf.len() - 1] {
        atoms.push(wedge_section(&WedgePoint::First(a.clone()), dims)?);
    }
    for b in bg.atoms() {
        atoms.push(wedge_section(&WedgePoint::Second(b.clone()), dims)?);
    }
    let domain = BreakpointSet::new(bf.ambient(), atoms.iter().cloned())?;
    if domain.atoms() != atoms.as_slice() {
        return Err(BigMapError::BadAtoms);
    }
    let mut values = f.values[..last * k].to_vec();
    values.extend_from_slice(&g.values);
    CellMap::new(CellDomain::Lex(domain), f.cspace.clone(), f.target.clone(), values)
}

/// Traverses `f` backwards: atoms go through `t ↦ 1 - t` and the cell order
/// is reversed.
pub fn reverse(f: &CellMap) -> Result<CellMap, BigMapError> {
    let b = f.domain.as_lex()?;
    let atoms: Vec<LexPoint> = b.atoms().iter().rev().map(reverse_point).collect();
    let domain = BreakpointSet::new(b.ambient(), atoms)?;
    let k = f.cspace.len();
    let n = f.cells();
    let mut values = Vec::with_capacity(f.values.len());
    for c in (0..n).rev() {
        values.extend((0..k).map(|u| f.value_at(c, u)));
    }
    CellMap::new(CellDomain::Lex(domain), f.cspace.clone(), f.target.clone(), values)
}

/// Restricts a map to one half of the interval and transports it through the
/// wedge map onto a full interval; undoes [`concat`].
pub fn wedge_half(h: &CellMap, second: bool) -> Result<CellMap, BigMapError> {
    let b = h.domain.as_lex()?;
    let center = b.ambient().center();
    let refined = h.refine([center.clone()])?;
    let rb = refined.domain.as_lex()?;
    let dims = rb.ambient().dims();
    let ci = rb.atoms().binary_search(&center).expect("center was inserted");
    let k = h.cspace.len();
    let (atoms, cells): (Vec<LexPoint>, std::ops::Range<usize>) = if second {
        (rb.atoms()[ci..].to_vec(), 2 * ci..refined.cells())
    } else {
        (rb.atoms()[..=ci].to_vec(), 0..2 * ci + 1)
    };
    let image = |t: &LexPoint| -> LexPoint {
        match wedge_map(t) {
            WedgePoint::First(q) | WedgePoint::Second(q) => q,
            WedgePoint::Junction => {
                let v = if second { Rational::zero() } else { Rational::one() };
                LexPoint::constant(dims, v).expect("dims > 0")
            }
        }
    };
    let domain = BreakpointSet::new(rb.ambient(), atoms.iter().map(image))?;
    let values = refined.values[cells.start * k..cells.end * k].to_vec();
    CellMap::new(CellDomain::Lex(domain), h.cspace.clone(), h.target.clone(), values)
}

/// The cell structure on the source of `p` over which every pulled-back map
/// is constant: each refined atom with its image atom in the target, and the
/// image cell (as a target cell index) of each refined cell.
pub fn pullback_complex(p: &QuotientMap) -> (Vec<LexPoint>, Vec<usize>) {
    let bp = p.breakpoints();
    let dims = bp.ambient().dims();
    let mut atoms = Vec::new();
    let mut image = Vec::new();
    for i in 0..bp.len() {
        if i > 0 {
            let d = bp.split_coord(i - 1);
            let a = bp.atom(i);
            let mut lower_tail = a.coords()[..=d].to_vec();
            lower_tail.resize(dims, Rational::zero());
            let lower_tail = LexPoint::new(lower_tail).expect("unit cube");
            if lower_tail != *a {
                atoms.push(lower_tail);
                image.push(Cell::Atom(i).index());
                image.push(Cell::Atom(i).index());
            }
        }
        atoms.push(bp.atom(i).clone());
        image.push(Cell::Atom(i).index());
        if i + 1 < bp.len() {
            let d = bp.split_coord(i);
            let a = bp.atom(i);
            let mut upper_tail = a.coords()[..=d].to_vec();
            upper_tail.resize(dims, Rational::one());
            let upper_tail = LexPoint::new(upper_tail).expect("unit cube");
            if upper_tail != *a {
                image.push(Cell::Atom(i).index());
                atoms.push(upper_tail);
                image.push(Cell::Atom(i).index());
            }
            image.push(Cell::Gap(i).index());
        }
    }
    (atoms, image)
}

/// Pulls a map on the quotient interval back to the source of `p`.
pub fn reparam(f: &CellMap, p: &QuotientMap) -> Result<CellMap, BigMapError> {
    let CellDomain::Mixed(j) = &f.domain else {
        return Err(BigMapError::DomainKind("mixed"));
    };
    if j.atoms != p.target().atoms {
        return Err(BigMapError::Incompatible {
            quotient: p.target().atoms,
            map: j.atoms,
        });
    }
    let (atoms, image) = pullback_complex(p);
    let domain = BreakpointSet::new(p.breakpoints().ambient(), atoms)?;
    let k = f.cspace.len();
    let mut values = Vec::with_capacity(image.len() * k);
    for &c in &image {
        values.extend((0..k).map(|u| f.value_at(c, u)));
    }
    CellMap::new(CellDomain::Lex(domain), f.cspace.clone(), f.target.clone(), values)
}

/// Output of [`density_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub interval: MixedInterval,
    pub quotient: QuotientMap,
    pub reduced: CellMap,
}

/// Factors a continuous map through the quotient by its own breakpoints.
///
/// The reduced map takes at each class the value of `f` at a representative:
/// the atom when the class has one, otherwise the block point at the middle
/// of the gap.
pub fn density_reduce(f: &CellMap) -> Result<Reduction, BigMapError> {
    let b = f.domain.as_lex()?;
    if let Some(w) = f.check_continuity().witness {
        return Err(BigMapError::NotContinuous(w));
    }
    let (j, p) = quotient_by_breakpoints(b);
    let k = f.cspace.len();
    let mut values = Vec::with_capacity((2 * j.atoms - 1) * k);
    for c in 0..2 * j.atoms - 1 {
        let q = match Cell::from_index(c) {
            Cell::Atom(i) => MixedPoint::atom(i),
            Cell::Gap(i) => MixedPoint::segment(i, Rational::half()),
        };
        let t = p.representative(&q)?;
        for u in 0..k {
            values.push(f.eval_lex(&t, u)?);
        }
    }
    let g = CellMap::new(CellDomain::Mixed(j), f.cspace.clone(), f.target.clone(), values)?;
    Ok(Reduction {
        interval: j,
        quotient: p,
        reduced: g,
    })
}

/// A point where `f(t, u) ≅ g(p(t), u)` fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionFailure {
    pub point: LexPoint,
    pub u: String,
    pub f_value: String,
    pub g_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub valid: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ReductionFailure>,
}

/// Points on which `f` and `g ∘ p` are both determined: the atoms of `f`, the
/// atoms of the pull-back complex of `p`, and one interior point between each
/// consecutive pair.
pub fn reduction_samples(f: &CellMap, p: &QuotientMap) -> Result<Vec<LexPoint>, BigMapError> {
    let b = f.domain.as_lex()?;
    let (pulled, _) = pullback_complex(p);
    let common = BreakpointSet::new(b.ambient(), b.atoms().iter().cloned().chain(pulled))?;
    cell_samples(&common)
}

/// Checks `f(t, u) ≅ g(p(t), u)` in the target at every sample point.
pub fn verify_reduction(f: &CellMap, g: &CellMap, p: &QuotientMap) -> Result<ReductionCheck, BigMapError> {
    if !f.same_spaces(g) {
        return Err(BigMapError::ShapeMismatch);
    }
    if f.domain.as_lex()?.ambient() != p.breakpoints().ambient() {
        return Err(BigMapError::ShapeMismatch);
    }
    let samples = reduction_samples(f, p)?;
    let class = f.target.class_of();
    for t in &samples {
        let q = p.eval(t)?;
        for u in 0..f.cspace.len() {
            let (a, b) = (f.eval_lex(t, u)?, g.eval_mixed(&q, u)?);
            if class[a] != class[b] {
                return Ok(ReductionCheck {
                    valid: false,
                    samples: samples.len(),
                    failure: Some(ReductionFailure {
                        point: t.clone(),
                        u: f.cspace.label(u).to_string(),
                        f_value: f.target.label(a).to_string(),
                        g_value: f.target.label(b).to_string(),
                    }),
                });
            }
        }
    }
    Ok(ReductionCheck {
        valid: true,
        samples: samples.len(),
        failure: None,
    })
}

/// Two distinct points with the same image under `p`, when some gap has a
/// fiber with more than one point.
pub fn collapse_witness(p: &QuotientMap) -> Option<(LexPoint, LexPoint)> {
    let bp = p.breakpoints();
    let dims = bp.ambient().dims();
    (0..bp.gaps()).find_map(|gap| {
        let d = bp.split_coord(gap);
        if d + 1 >= dims {
            return None;
        }
        let lo = p.representative(&MixedPoint::segment(gap, Rational::half())).ok()?;
        let mut coords = lo.coords().to_vec();
        coords[dims - 1] = Rational::one();
        Some((lo, LexPoint::new(coords).ok()?))
    })
}

/// JSON form of a [`CellMap`].
///
/// The domain is either `ambient_dims` with `atoms` (endpoints included) or
/// `mixed_atoms`. Values are keyed `"atom:i|u"` or `"gap:i|u"`; with a
/// one-point parameter space the `|u` suffix may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellMapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dims: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<LexPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_atoms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cspace: Option<FinSpace>,
    pub target: FinSpace,
    pub values: BTreeMap<String, String>,
}

impl CellMap {
    pub fn to_doc(&self) -> CellMapDoc {
        let (ambient_dims, atoms, mixed_atoms) = match &self.domain {
            CellDomain::Lex(b) => (Some(b.ambient().dims()), Some(b.atoms().to_vec()), None),
            CellDomain::Mixed(j) => (None, None, Some(j.atoms)),
        };
        let mut values = BTreeMap::new();
        for c in 0..self.cells() {
            for u in 0..self.cspace.len() {
                values.insert(
                    format!("{}|{}", Cell::from_index(c), self.cspace.label(u)),
                    self.target.label(self.value_at(c, u)).to_string(),
                );
            }
        }
        CellMapDoc {
            ambient_dims,
            atoms,
            mixed_atoms,
            cspace: Some(self.cspace.clone()),
            target: self.target.clone(),
            values,
        }
    }

    pub fn from_doc(doc: CellMapDoc) -> Result<Self, BigMapError> {
        let domain = match (doc.ambient_dims, doc.atoms, doc.mixed_atoms) {
            (Some(dims), Some(atoms), None) => {
                let ambient = LexInterval::new(dims)?;
                let b = BreakpointSet::new(ambient, atoms.iter().cloned())?;
                if b.atoms() != atoms.as_slice() {
                    return Err(BigMapError::BadAtoms);
                }
                CellDomain::Lex(b)
            }
            (None, None, Some(m)) if m >= 2 => CellDomain::Mixed(MixedInterval { atoms: m }),
            _ => return Err(BigMapError::DomainKind("lexicographic (ambient_dims + atoms) or mixed")),
        };
        let cspace = doc.cspace.unwrap_or_else(FinSpace::point);
        let k = cspace.len();
        let mut slots: Vec<Option<usize>> = vec![None; domain.cells() * k];
        for (key, value) in &doc.values {
            let (cell, u) = match key.split_once('|') {
                Some((c, u)) => (c.parse::<Cell>()?, cspace.index(u)?),
                None if k == 1 => (key.parse::<Cell>()?, 0),
                None => return Err(BigMapError::BadKey(key.clone())),
            };
            let c = cell.index();
            if c >= domain.cells() {
                return Err(BigMapError::BadKey(key.clone()));
            }
            slots[c * k + u] = Some(doc.target.index(value)?);
        }
        let values = slots
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    BigMapError::BadKey(format!("missing {}|{}", Cell::from_index(i / k), cspace.label(i % k)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        CellMap::new(domain, cspace, doc.target, values)
    }
}

impl Serialize for CellMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        CellMap::from_doc(CellMapDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
