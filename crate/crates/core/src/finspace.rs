//! Finite topological spaces given by the minimal open set `U_x` of each point.
//!
//! A finite space has a least open neighbourhood at every point, and the
//! family `{U_x}` is a basis. It is stored as bitmasks, so spaces are limited
//! to [`MAX_POINTS`] points.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("the empty set is not listed as open")]
    MissingEmpty,
    #[error("the whole space is not listed as open")]
    MissingWhole,
    #[error("opens are not closed under {op}: {a:?} and {b:?}")]
    NotClosed {
        op: &'static str,
        a: Vec<String>,
        b: Vec<String>,
    },
    #[error("point `{0}` is not in its own neighbourhood")]
    NotReflexive(String),
    #[error("`{y}` lies in U_{x} but U_{y} is not contained in U_{x}")]
    NotTransitive { x: String, y: String },
    #[error("no neighbourhood given for `{0}`")]
    MissingNeighbourhood(String),
    #[error("map is missing a value at `{0}`")]
    MissingValue(String),
    #[error("maps have different source or target spaces")]
    ShapeMismatch,
    #[error("document must give exactly one of `min_nbhd` or `opens`")]
    AmbiguousDocument,
}

/// A set of points as a bitmask.
pub type Mask = u64;

pub fn bit(i: usize) -> Mask {
    1u64 << i
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..MAX_POINTS).filter(move |i| m & bit(*i) != 0)
}

#[derive(Clone, PartialEq, Eq)]
pub struct FinSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    nbhd: Vec<Mask>,
}

impl std::fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (i, l) in self.labels.iter().enumerate() {
            m.entry(l, &self.labels_of(self.nbhd[i]));
        }
        m.finish()
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>, SpaceError> {
    if labels.is_empty() {
        return Err(SpaceError::Empty);
    }
    if labels.len() > MAX_POINTS {
        return Err(SpaceError::TooManyPoints(labels.len()));
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(SpaceError::DuplicatePoint(l.clone()));
        }
    }
    Ok(index)
}

impl FinSpace {
    /// From the minimal neighbourhood of each point, as masks over `labels`.
    pub fn from_masks<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        nbhd: Vec<Mask>,
    ) -> Result<Self, SpaceError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = index_labels(&labels)?;
        let full = full_mask(labels.len());
        if nbhd.len() != labels.len() {
            let missing = labels.get(nbhd.len()).cloned().unwrap_or_default();
            return Err(SpaceError::MissingNeighbourhood(missing));
        }
        for (x, &u) in nbhd.iter().enumerate() {
            if u & !full != 0 {
                return Err(SpaceError::UnknownPoint(format!("#{}", (u & !full).trailing_zeros())));
            }
            if u & bit(x) == 0 {
                return Err(SpaceError::NotReflexive(labels[x].clone()));
            }
            for y in members(u) {
                if nbhd[y] & !u != 0 {
                    return Err(SpaceError::NotTransitive {
                        x: labels[x].clone(),
                        y: labels[y].clone(),
                    });
                }
            }
        }
        Ok(FinSpace { labels, index, nbhd })
    }

    pub fn from_min_nbhd(points: Vec<String>, min_nbhd: &BTreeMap<String, Vec<String>>) -> Result<Self, SpaceError> {
        let index = index_labels(&points)?;
        let mut nbhd = Vec::with_capacity(points.len());
        for p in &points {
            let set = min_nbhd
                .get(p)
                .ok_or_else(|| SpaceError::MissingNeighbourhood(p.clone()))?;
            nbhd.push(mask_of(&index, set)?);
        }
        if let Some(extra) = min_nbhd.keys().find(|k| !index.contains_key(*k)) {
            return Err(SpaceError::UnknownPoint(extra.clone()));
        }
        FinSpace::from_masks(points, nbhd)
    }

    /// From a full list of open sets, which must contain the empty set and the
    /// whole space and be closed under union and intersection.
    pub fn from_opens(points: Vec<String>, opens: &[Vec<String>]) -> Result<Self, SpaceError> {
        let index = index_labels(&points)?;
        let full = full_mask(points.len());
        let masks = opens
            .iter()
            .map(|o| mask_of(&index, o))
            .collect::<Result<Vec<_>, _>>()?;
        if !masks.contains(&0) {
            return Err(SpaceError::MissingEmpty);
        }
        if !masks.contains(&full) {
            return Err(SpaceError::MissingWhole);
        }
        let set: std::collections::HashSet<Mask> = masks.iter().copied().collect();
        let names = |m: Mask| members(m).map(|i| points[i].clone()).collect::<Vec<_>>();
        for &a in &masks {
            for &b in &masks {
                if !set.contains(&(a | b)) {
                    return Err(SpaceError::NotClosed {
                        op: "union",
                        a: names(a),
                        b: names(b),
                    });
                }
                if !set.contains(&(a & b)) {
                    return Err(SpaceError::NotClosed {
                        op: "intersection",
                        a: names(a),
                        b: names(b),
                    });
                }
            }
        }
        let nbhd = (0..points.len())
            .map(|x| masks.iter().filter(|m| *m & bit(x) != 0).fold(full, |acc, m| acc & m))
            .collect();
        FinSpace::from_masks(points, nbhd)
    }

    pub fn discrete(n: usize) -> Result<Self, SpaceError> {
        FinSpace::from_masks(numbered(n), (0..n).map(bit).collect())
    }

    pub fn indiscrete(n: usize) -> Result<Self, SpaceError> {
        FinSpace::from_masks(numbered(n), vec![full_mask(n); n])
    }

    /// Points `0`, `1` with `{1}` open.
    pub fn sierpinski() -> Self {
        FinSpace::from_masks(["0", "1"], vec![0b11, 0b10]).expect("valid")
    }

    pub fn point() -> Self {
        FinSpace::from_masks(["*"], vec![1]).expect("valid")
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

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index(&self, label: &str) -> Result<usize, SpaceError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| SpaceError::UnknownPoint(label.to_string()))
    }

    pub fn full(&self) -> Mask {
        full_mask(self.len())
    }

    pub fn nbhd_mask(&self, x: usize) -> Mask {
        self.nbhd[x]
    }

    pub fn nbhd_masks(&self) -> &[Mask] {
        &self.nbhd
    }

    pub fn labels_of(&self, m: Mask) -> Vec<String> {
        members(m).map(|i| self.labels[i].clone()).collect()
    }

    /// `N_x`, the intersection of all open sets containing `x`.
    pub fn min_nbhd(&self, x: &str) -> Result<Vec<String>, SpaceError> {
        Ok(self.labels_of(self.nbhd[self.index(x)?]))
    }

    /// `y ∈ N_x`.
    pub fn in_nbhd(&self, y: usize, x: usize) -> bool {
        self.nbhd[x] & bit(y) != 0
    }

    /// A set is open iff it contains `N_x` for each of its points.
    pub fn is_open(&self, m: Mask) -> bool {
        members(m).all(|x| self.nbhd[x] & !m == 0)
    }

    /// Classes of the equivalence generated by `y ∈ N_x`, each sorted by
    /// point index and listed by smallest member.
    pub fn equiv_class_indices(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for x in 0..self.len() {
            for y in members(self.nbhd[x]) {
                uf.union(x, y);
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for x in 0..self.len() {
            let root = uf.find(x);
            let i = *slot.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[i].push(x);
        }
        classes
    }

    pub fn equiv_classes(&self) -> Vec<Vec<String>> {
        self.equiv_class_indices()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.labels[i].clone()).collect())
            .collect()
    }

    /// Class index of every point, for constant-time `≅` queries.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (c, members) in self.equiv_class_indices().into_iter().enumerate() {
            for x in members {
                out[x] = c;
            }
        }
        out
    }

    pub fn is_t1(&self) -> bool {
        self.nbhd.iter().enumerate().all(|(x, &u)| u == bit(x))
    }

    /// Distinct points have distinct minimal neighbourhoods.
    pub fn is_t0(&self) -> bool {
        self.weight() == self.len()
    }

    /// Number of distinct minimal neighbourhoods: the size of the least basis.
    pub fn weight(&self) -> usize {
        let mut v = self.nbhd.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Equal to the weight, since every subset of a finite space is compact.
    pub fn compact_weight(&self) -> usize {
        self.weight()
    }

    pub fn to_doc(&self) -> SpaceDoc {
        SpaceDoc {
            points: self.labels.clone(),
            min_nbhd: Some(
                self.labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), self.labels_of(self.nbhd[i])))
                    .collect(),
            ),
            opens: None,
        }
    }

    pub fn from_doc(doc: SpaceDoc) -> Result<Self, SpaceError> {
        match (doc.min_nbhd, doc.opens) {
            (Some(n), None) => FinSpace::from_min_nbhd(doc.points, &n),
            (None, Some(o)) => FinSpace::from_opens(doc.points, &o),
            _ => Err(SpaceError::AmbiguousDocument),
        }
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn mask_of(index: &HashMap<String, usize>, set: &[String]) -> Result<Mask, SpaceError> {
    set.iter().try_fold(0, |acc, l| {
        index
            .get(l)
            .map(|i| acc | bit(*i))
            .ok_or_else(|| SpaceError::UnknownPoint(l.clone()))
    })
}

/// JSON form: `points` plus either `min_nbhd` or `opens`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_nbhd: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
}

impl Serialize for FinSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FinSpace::from_doc(SpaceDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A total function between the points of two spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    source: FinSpace,
    target: FinSpace,
    values: Vec<usize>,
}

impl SpaceMap {
    pub fn from_indices(source: FinSpace, target: FinSpace, values: Vec<usize>) -> Result<Self, SpaceError> {
        if values.len() != source.len() {
            let missing = source.labels.get(values.len()).cloned().unwrap_or_default();
            return Err(SpaceError::MissingValue(missing));
        }
        if let Some(&v) = values.iter().find(|v| **v >= target.len()) {
            return Err(SpaceError::UnknownPoint(format!("#{v}")));
        }
        Ok(SpaceMap { source, target, values })
    }

    pub fn from_assignment(
        source: FinSpace,
        target: FinSpace,
        assignment: &BTreeMap<String, String>,
    ) -> Result<Self, SpaceError> {
        if let Some(extra) = assignment.keys().find(|k| !source.index.contains_key(*k)) {
            return Err(SpaceError::UnknownPoint(extra.clone()));
        }
        let values = source
            .labels
            .iter()
            .map(|x| {
                let y = assignment.get(x).ok_or_else(|| SpaceError::MissingValue(x.clone()))?;
                target.index(y)
            })
            .collect::<Result<Vec<_>, _>>()?;
        SpaceMap::from_indices(source, target, values)
    }

    pub fn constant(source: FinSpace, target: FinSpace, value: &str) -> Result<Self, SpaceError> {
        let v = target.index(value)?;
        let n = source.len();
        SpaceMap::from_indices(source, target, vec![v; n])
    }

    pub fn identity(space: FinSpace) -> Self {
        let values = (0..space.len()).collect();
        SpaceMap {
            source: space.clone(),
            target: space,
            values,
        }
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn eval(&self, x: &str) -> Result<&str, SpaceError> {
        Ok(self.target.label(self.values[self.source.index(x)?]))
    }

    pub fn assignment(&self) -> BTreeMap<String, String> {
        self.source
            .labels
            .iter()
            .zip(&self.values)
            .map(|(x, &v)| (x.clone(), self.target.labels[v].clone()))
            .collect()
    }

    /// `f(N_x) ⊆ N_{f(x)}` for every `x`.
    pub fn is_continuous(&self) -> bool {
        self.first_discontinuity().is_none()
    }

    /// A pair `(x, y)` with `y ∈ N_x` but `f(y) ∉ N_{f(x)}`.
    pub fn first_discontinuity(&self) -> Option<(usize, usize)> {
        for x in 0..self.source.len() {
            let target_nbhd = self.target.nbhd[self.values[x]];
            for y in members(self.source.nbhd[x]) {
                if target_nbhd & bit(self.values[y]) == 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    fn same_shape(&self, other: &SpaceMap) -> bool {
        self.source == other.source && self.target == other.target
    }
}

/// Direction of a homotopy step between consecutive maps `h` and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StepTag {
    /// `h(x) ∈ N_{k(x)}` for all `x`.
    Up,
    /// `k(x) ∈ N_{h(x)}` for all `x`.
    Down,
}

impl StepTag {
    /// Whether the pair satisfies the tag at every point.
    pub fn holds(self, h: &SpaceMap, k: &SpaceMap) -> Option<usize> {
        let y = &h.target;
        (0..h.source.len()).find(|&x| {
            let (a, b) = (h.values[x], k.values[x]);
            match self {
                StepTag::Up => !y.in_nbhd(a, b),
                StepTag::Down => !y.in_nbhd(b, a),
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyLink {
    pub tag: StepTag,
    /// Points where the two maps agree; the step fixes them.
    pub fixed: Vec<String>,
}

/// A chain of maps `h_0, …, h_n` with a tagged step between neighbours.
///
/// Each `UP` step is realised by the homotopy that equals `h_i` before time
/// `1/2` and `h_{i+1}` from `1/2` on; a `DOWN` step by the same with the roles
/// of the two maps exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyCertificate {
    pub maps: Vec<SpaceMap>,
    pub links: Vec<HomotopyLink>,
}

/// JSON form: both spaces once, then each map as a point assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub source: FinSpace,
    pub target: FinSpace,
    pub maps: Vec<BTreeMap<String, String>>,
    pub links: Vec<HomotopyLink>,
}

impl HomotopyCertificate {
    pub fn to_doc(&self) -> CertificateDoc {
        let first = &self.maps[0];
        CertificateDoc {
            source: first.source.clone(),
            target: first.target.clone(),
            maps: self.maps.iter().map(SpaceMap::assignment).collect(),
            links: self.links.clone(),
        }
    }

    /// Rebuilds the maps; the result still needs [`verify_certificate`].
    pub fn from_doc(doc: CertificateDoc) -> Result<Self, SpaceError> {
        let maps = doc
            .maps
            .iter()
            .map(|a| SpaceMap::from_assignment(doc.source.clone(), doc.target.clone(), a))
            .collect::<Result<Vec<_>, _>>()?;
        if maps.is_empty() {
            return Err(SpaceError::Empty);
        }
        Ok(HomotopyCertificate { maps, links: doc.links })
    }
}

impl Serialize for HomotopyCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomotopyCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        HomotopyCertificate::from_doc(CertificateDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Why no single `UP` step exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyRefusal {
    #[error("map `{0}` is not continuous")]
    Discontinuous(&'static str),
    #[error(transparent)]
    Shape(#[from] SpaceError),
    #[error("f({point}) = {f_value} is not in N_{{g({point})}} = N_{g_value}")]
    NotInNeighbourhood {
        point: String,
        f_value: String,
        g_value: String,
    },
    #[error("step {link} satisfies neither UP nor DOWN")]
    NoDirection { link: usize },
}

fn fixed_points(h: &SpaceMap, k: &SpaceMap) -> Vec<String> {
    (0..h.source.len())
        .filter(|&x| h.values[x] == k.values[x])
        .map(|x| h.source.labels[x].clone())
        .collect()
}

/// A single `UP` step from `f` to `g`, or the point where `f(x) ∉ N_{g(x)}`.
pub fn step_homotopy_check(f: &SpaceMap, g: &SpaceMap) -> Result<HomotopyCertificate, HomotopyRefusal> {
    if !f.same_shape(g) {
        return Err(SpaceError::ShapeMismatch.into());
    }
    if !f.is_continuous() {
        return Err(HomotopyRefusal::Discontinuous("f"));
    }
    if !g.is_continuous() {
        return Err(HomotopyRefusal::Discontinuous("g"));
    }
    if let Some(x) = StepTag::Up.holds(f, g) {
        return Err(HomotopyRefusal::NotInNeighbourhood {
            point: f.source.labels[x].clone(),
            f_value: f.target.labels[f.values[x]].clone(),
            g_value: g.target.labels[g.values[x]].clone(),
        });
    }
    Ok(HomotopyCertificate {
        links: vec![HomotopyLink {
            tag: StepTag::Up,
            fixed: fixed_points(f, g),
        }],
        maps: vec![f.clone(), g.clone()],
    })
}

/// Builds a certificate through the given maps, tagging each step `UP` when
/// possible and `DOWN` otherwise.
pub fn certify_chain(maps: Vec<SpaceMap>) -> Result<HomotopyCertificate, HomotopyRefusal> {
    let first = maps.first().ok_or(SpaceError::Empty)?;
    if maps.iter().any(|m| !m.same_shape(first)) {
        return Err(SpaceError::ShapeMismatch.into());
    }
    if maps.iter().any(|m| !m.is_continuous()) {
        return Err(HomotopyRefusal::Discontinuous("chain member"));
    }
    let mut links = Vec::with_capacity(maps.len().saturating_sub(1));
    for (i, w) in maps.windows(2).enumerate() {
        let tag = if StepTag::Up.holds(&w[0], &w[1]).is_none() {
            StepTag::Up
        } else if StepTag::Down.holds(&w[0], &w[1]).is_none() {
            StepTag::Down
        } else {
            return Err(HomotopyRefusal::NoDirection { link: i });
        };
        links.push(HomotopyLink {
            tag,
            fixed: fixed_points(&w[0], &w[1]),
        });
    }
    Ok(HomotopyCertificate { maps, links })
}

/// Continuity of `H` on `X × S`, `S = {early, late}`, with `H(x, early) =
/// early(x)` and `H(x, late) = late(x)`. When `early_open`, `N_early =
/// {early}` and `N_late = S`; otherwise the reverse.
pub fn switch_map_continuous(early: &SpaceMap, late: &SpaceMap, early_open: bool) -> bool {
    let x_space = &early.source;
    let y_space = &early.target;
    // Time points: 0 = early, 1 = late.
    let time_nbhd: [&[usize]; 2] = if early_open { [&[0], &[0, 1]] } else { [&[0, 1], &[1]] };
    let h = |x: usize, s: usize| if s == 0 { early.values[x] } else { late.values[x] };
    for x in 0..x_space.len() {
        for s in 0..2 {
            let u = y_space.nbhd[h(x, s)];
            for y in members(x_space.nbhd[x]) {
                for &t in time_nbhd[s] {
                    if u & bit(h(y, t)) == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    /// Index of the first failing map or link.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_link: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verification {
    fn ok() -> Self {
        Verification {
            valid: true,
            failing_link: None,
            reason: None,
        }
    }

    fn fail(link: usize, reason: String) -> Self {
        Verification {
            valid: false,
            failing_link: Some(link),
            reason: Some(reason),
        }
    }
}

pub fn verify_certificate(c: &HomotopyCertificate) -> Verification {
    if c.maps.is_empty() {
        return Verification::fail(0, "no maps".into());
    }
    if c.links.len() + 1 != c.maps.len() {
        return Verification::fail(0, "link count does not match map count".into());
    }
    for (i, m) in c.maps.iter().enumerate() {
        if !m.same_shape(&c.maps[0]) {
            return Verification::fail(i, format!("map {i} has a different shape"));
        }
        if !m.is_continuous() {
            return Verification::fail(i, format!("map {i} is not continuous"));
        }
    }
    for (i, link) in c.links.iter().enumerate() {
        let (h, k) = (&c.maps[i], &c.maps[i + 1]);
        if let Some(x) = link.tag.holds(h, k) {
            return Verification::fail(i, format!("{:?} fails at `{}`", link.tag, h.source.labels[x]));
        }
        if link.fixed != fixed_points(h, k) {
            return Verification::fail(i, "fixed point list is wrong".into());
        }
        let switch_ok = match link.tag {
            StepTag::Up => switch_map_continuous(h, k, true),
            StepTag::Down => switch_map_continuous(h, k, false),
        };
        if !switch_ok {
            return Verification::fail(i, "switch homotopy is not continuous".into());
        }
    }
    Verification::ok()
}
