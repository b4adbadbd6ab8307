//! Finite carriers and the combinatorial objects built on them: relations,
//! partitions, extended pseudometrics, finite topologies and uniformities.
//!
//! Points are indices into a [`Carrier`]; labels only matter at the edges
//! (parsing, rendering). Every value here is immutable once constructed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Point = usize;
pub type PointSet = BTreeSet<Point>;

/// An ordered list of distinct point labels.
#[derive(Clone)]
pub struct Carrier(Arc<CarrierInner>);

struct CarrierInner {
    labels: Vec<String>,
    index: BTreeMap<String, Point>,
}

impl Carrier {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Carrier(Arc::new(CarrierInner { labels, index })))
    }

    /// `a, b, c, ...` for small carriers, `p0, p1, ...` beyond 26 points.
    pub fn standard(n: usize) -> Self {
        let labels: Vec<String> = if n <= 26 {
            (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (0..n).map(|i| format!("p{i}")).collect()
        };
        Carrier::new(labels).expect("generated labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.len()
    }

    pub fn all(&self) -> PointSet {
        self.points().collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, p: Point) -> &str {
        &self.0.labels[p]
    }

    pub fn point(&self, label: &str) -> Result<Point> {
        self.0.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn set<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        labels.iter().map(|l| self.point(l.as_ref())).collect()
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        if p < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { index: p, len: self.len() })
        }
    }

    pub fn check_set(&self, s: &PointSet) -> Result<()> {
        s.iter().try_for_each(|&p| self.check_point(p))
    }

    pub fn ensure_same(&self, other: &Carrier, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(what.to_string()))
        }
    }

    /// Renders a point set as `{a, b}`.
    pub fn fmt_set(&self, s: &PointSet) -> String {
        let inner: Vec<&str> = s.iter().map(|&p| self.label(p)).collect();
        format!("{{{}}}", inner.join(", "))
    }

    pub fn fmt_pair(&self, (x, y): (Point, Point)) -> String {
        format!("({}, {})", self.label(x), self.label(y))
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for Carrier {}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.labels.iter()).finish()
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Classes ordered by their least element.
    pub fn classes(&mut self) -> Vec<PointSet> {
        let mut by_root: BTreeMap<usize, PointSet> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().insert(x);
        }
        let mut out: Vec<PointSet> = by_root.into_values().collect();
        out.sort_by_key(|b| *b.iter().next().expect("classes are nonempty"));
        out
    }
}

/// A binary relation on a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    carrier: Carrier,
    pairs: BTreeSet<(Point, Point)>,
}

impl Relation {
    pub fn new(carrier: &Carrier, pairs: impl IntoIterator<Item = (Point, Point)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(x, y) in &pairs {
            carrier.check_point(x)?;
            carrier.check_point(y)?;
        }
        Ok(Relation { carrier: carrier.clone(), pairs })
    }

    pub fn from_labels<S: AsRef<str>>(carrier: &Carrier, pairs: &[(S, S)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((carrier.point(a.as_ref())?, carrier.point(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Relation::new(carrier, pairs)
    }

    pub fn empty(carrier: &Carrier) -> Self {
        Relation { carrier: carrier.clone(), pairs: BTreeSet::new() }
    }

    pub fn diagonal(carrier: &Carrier) -> Self {
        Relation { carrier: carrier.clone(), pairs: carrier.points().map(|x| (x, x)).collect() }
    }

    pub fn full(carrier: &Carrier) -> Self {
        let pairs = carrier.points().flat_map(|x| carrier.points().map(move |y| (x, y))).collect();
        Relation { carrier: carrier.clone(), pairs }
    }

    /// `A × B`.
    pub fn product(carrier: &Carrier, a: &PointSet, b: &PointSet) -> Self {
        let pairs = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
        Relation { carrier: carrier.clone(), pairs }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn pairs(&self) -> &BTreeSet<(Point, Point)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: Point, y: Point) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.carrier.ensure_same(&other.carrier, "relation union")?;
        Ok(Relation { carrier: self.carrier.clone(), pairs: self.pairs.union(&other.pairs).copied().collect() })
    }

    pub fn inverse(&self) -> Relation {
        Relation { carrier: self.carrier.clone(), pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect() }
    }

    pub fn with_pair(&self, x: Point, y: Point) -> Relation {
        let mut pairs = self.pairs.clone();
        pairs.insert((x, y));
        Relation { carrier: self.carrier.clone(), pairs }
    }

    pub fn without_pair(&self, x: Point, y: Point) -> Relation {
        let mut pairs = self.pairs.clone();
        pairs.remove(&(x, y));
        Relation { carrier: self.carrier.clone(), pairs }
    }

    /// `E[x] = { y | (x, y) ∈ E }`.
    pub fn section(&self, x: Point) -> PointSet {
        self.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        self.carrier.points().all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| self.section(y).into_iter().all(|z| self.contains(x, z)))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Restriction to `A × A`.
    pub fn restrict(&self, a: &PointSet) -> Relation {
        Relation {
            carrier: self.carrier.clone(),
            pairs: self.pairs.iter().filter(|(x, y)| a.contains(x) && a.contains(y)).copied().collect(),
        }
    }

    pub fn fmt_pairs(&self) -> String {
        let inner: Vec<String> = self.pairs.iter().map(|&p| self.carrier.fmt_pair(p)).collect();
        format!("{{{}}}", inner.join(", "))
    }
}

/// `e ∘ f`: apply `f` first, then `e`.
pub fn relation_compose(e: &Relation, f: &Relation) -> Result<Relation> {
    e.carrier.ensure_same(&f.carrier, "relation composition")?;
    let mut pairs = BTreeSet::new();
    for &(x, y) in &f.pairs {
        for z in e.section(y) {
            pairs.insert((x, z));
        }
    }
    Ok(Relation { carrier: e.carrier.clone(), pairs })
}

/// Smallest equivalence relation containing `r`.
pub fn equivalence_closure(r: &Relation) -> Relation {
    let mut ds = DisjointSets::new(r.carrier.len());
    for &(x, y) in &r.pairs {
        ds.union(x, y);
    }
    let classes = ds.classes();
    let mut pairs = BTreeSet::new();
    for c in &classes {
        for &x in c {
            for &y in c {
                pairs.insert((x, y));
            }
        }
    }
    Relation { carrier: r.carrier.clone(), pairs }
}

/// A partition of a carrier into nonempty disjoint blocks, stored in
/// canonical order (blocks sorted by least element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    carrier: Carrier,
    blocks: Vec<PointSet>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(carrier: &Carrier, blocks: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        let mut blocks: Vec<PointSet> = blocks.into_iter().collect();
        let mut block_of = vec![usize::MAX; carrier.len()];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            carrier.check_set(b)?;
        }
        blocks.sort_by_key(|b| *b.iter().next().expect("nonempty"));
        for (i, b) in blocks.iter().enumerate() {
            for &p in b {
                if block_of[p] != usize::MAX {
                    return Err(Error::NotAPartition(format!("point `{}` lies in two blocks", carrier.label(p))));
                }
                block_of[p] = i;
            }
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::NotAPartition(format!("point `{}` is not covered", carrier.label(p))));
        }
        Ok(Partition { carrier: carrier.clone(), blocks, block_of })
    }

    pub fn from_labels<S: AsRef<str>>(carrier: &Carrier, blocks: &[Vec<S>]) -> Result<Self> {
        let blocks = blocks.iter().map(|b| carrier.set(b)).collect::<Result<Vec<_>>>()?;
        Partition::new(carrier, blocks)
    }

    /// Builds a partition from a block assignment `point -> block id`.
    pub fn from_assignment(carrier: &Carrier, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != carrier.len() {
            return Err(Error::NotAPartition("assignment length differs from carrier".into()));
        }
        let mut by_id: BTreeMap<usize, PointSet> = BTreeMap::new();
        for (p, &b) in assignment.iter().enumerate() {
            by_id.entry(b).or_default().insert(p);
        }
        Partition::new(carrier, by_id.into_values())
    }

    pub fn discrete(carrier: &Carrier) -> Self {
        Partition::new(carrier, carrier.points().map(|p| PointSet::from([p])))
            .expect("singletons partition the carrier")
    }

    /// One block holding everything (no blocks on the empty carrier).
    pub fn indiscrete(carrier: &Carrier) -> Self {
        let blocks = if carrier.is_empty() { vec![] } else { vec![carrier.all()] };
        Partition::new(carrier, blocks).expect("one block partitions the carrier")
    }

    /// Equivalence classes of an equivalence relation.
    pub fn from_equivalence(r: &Relation) -> Result<Self> {
        if !r.is_equivalence() {
            return Err(Error::NotEquivalence(r.fmt_pairs()));
        }
        let mut ds = DisjointSets::new(r.carrier.len());
        for &(x, y) in &r.pairs {
            ds.union(x, y);
        }
        Partition::new(&r.carrier, ds.classes())
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_index(&self, p: Point) -> usize {
        self.block_of[p]
    }

    pub fn block(&self, p: Point) -> &PointSet {
        &self.blocks[self.block_of[p]]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn same_block(&self, x: Point, y: Point) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// True iff `s` is empty or lies inside a single block.
    pub fn within_block(&self, s: &PointSet) -> bool {
        match s.iter().next() {
            None => true,
            Some(&first) => s.iter().all(|&p| self.same_block(first, p)),
        }
    }

    pub fn to_relation(&self) -> Relation {
        let mut pairs = BTreeSet::new();
        for b in &self.blocks {
            for &x in b {
                for &y in b {
                    pairs.insert((x, y));
                }
            }
        }
        Relation { carrier: self.carrier.clone(), pairs }
    }

    pub fn fmt_blocks(&self) -> String {
        let inner: Vec<String> = self.blocks.iter().map(|b| self.carrier.fmt_set(b)).collect();
        format!("{{{}}}", inner.join(", "))
    }
}

/// Blocks are the nonempty intersections of a `p`-block with a `q`-block.
pub fn partition_meet(p: &Partition, q: &Partition) -> Result<Partition> {
    p.carrier.ensure_same(&q.carrier, "partition meet")?;
    let assignment: Vec<usize> =
        p.carrier.points().map(|x| p.block_index(x) * q.len().max(1) + q.block_index(x)).collect();
    Partition::from_assignment(&p.carrier, &assignment)
}

/// A value in `ℚ≥0 ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Dist {
    Finite(BigRational),
    Infinite,
}

impl Dist {
    pub fn zero() -> Self {
        Dist::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn add(&self, other: &Dist) -> Dist {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinite,
        }
    }

    pub fn parse(s: &str) -> Result<Dist> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Dist::Infinite);
        }
        parse_rational(s).map(Dist::Finite).ok_or_else(|| Error::InvalidPseudometric(format!("bad distance `{s}`")))
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinite) => Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(q) => write!(f, "{q}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses `3`, `-2/7`, `0.125` or `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    use num_bigint::BigInt;
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    if exp.abs() > 1000 {
        return None;
    }
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

/// A pseudometric that may take the value `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudometricInf {
    carrier: Carrier,
    d: Vec<Vec<Dist>>,
}

impl PseudometricInf {
    pub fn new(carrier: &Carrier, d: Vec<Vec<Dist>>) -> Result<Self> {
        let n = carrier.len();
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPseudometric(format!("matrix must be {n}×{n}")));
        }
        for x in 0..n {
            if d[x][x] != Dist::zero() {
                return Err(Error::InvalidPseudometric(format!("d({0}, {0}) must be 0", carrier.label(x))));
            }
            for y in 0..n {
                if let Dist::Finite(q) = &d[x][y] {
                    if q < &BigRational::zero() {
                        return Err(Error::InvalidPseudometric(format!(
                            "negative distance between {} and {}",
                            carrier.label(x),
                            carrier.label(y)
                        )));
                    }
                }
                if d[x][y] != d[y][x] {
                    return Err(Error::InvalidPseudometric(format!(
                        "d is not symmetric at ({}, {})",
                        carrier.label(x),
                        carrier.label(y)
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if d[x][z] > d[x][y].add(&d[y][z]) {
                        return Err(Error::InvalidPseudometric(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            carrier.label(x),
                            carrier.label(y),
                            carrier.label(z)
                        )));
                    }
                }
            }
        }
        Ok(PseudometricInf { carrier: carrier.clone(), d })
    }

    /// Off-diagonal pairs not listed default to `∞`; the diagonal is 0.
    pub fn from_entries(carrier: &Carrier, entries: &[(Point, Point, Dist)]) -> Result<Self> {
        let n = carrier.len();
        let mut d = vec![vec![Dist::Infinite; n]; n];
        for (x, row) in d.iter_mut().enumerate() {
            row[x] = Dist::zero();
        }
        for (x, y, v) in entries {
            carrier.check_point(*x)?;
            carrier.check_point(*y)?;
            d[*x][*y] = v.clone();
            d[*y][*x] = v.clone();
        }
        PseudometricInf::new(carrier, d)
    }

    /// `d(x, y) = ∞` for all `x ≠ y`.
    pub fn discrete_infinite(carrier: &Carrier) -> Self {
        PseudometricInf::from_entries(carrier, &[]).expect("valid")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn d(&self, x: Point, y: Point) -> &Dist {
        &self.d[x][y]
    }
}

/// Classes of `d(x, y) < ∞`.
pub fn metric_components(m: &PseudometricInf) -> Partition {
    let mut ds = DisjointSets::new(m.carrier.len());
    for x in m.carrier.points() {
        for y in m.carrier.points() {
            if m.d[x][y].is_finite() {
                ds.union(x, y);
            }
        }
    }
    Partition::new(&m.carrier, ds.classes()).expect("union-find classes partition the carrier")
}

/// A topology on a finite carrier, stored as its full family of opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    carrier: Carrier,
    opens: BTreeSet<PointSet>,
}

impl FiniteTopology {
    pub fn new(carrier: &Carrier, opens: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        let opens: BTreeSet<PointSet> = opens.into_iter().collect();
        for o in &opens {
            carrier.check_set(o)?;
        }
        if !opens.contains(&PointSet::new()) {
            return Err(Error::InvalidTopology("∅ must be open".into()));
        }
        if !opens.contains(&carrier.all()) {
            return Err(Error::InvalidTopology("the carrier must be open".into()));
        }
        for a in &opens {
            for b in &opens {
                if !opens.contains(&a.union(b).copied().collect::<PointSet>()) {
                    return Err(Error::InvalidTopology(format!(
                        "union of {} and {} is not open",
                        carrier.fmt_set(a),
                        carrier.fmt_set(b)
                    )));
                }
                if !opens.contains(&a.intersection(b).copied().collect::<PointSet>()) {
                    return Err(Error::InvalidTopology(format!(
                        "intersection of {} and {} is not open",
                        carrier.fmt_set(a),
                        carrier.fmt_set(b)
                    )));
                }
            }
        }
        Ok(FiniteTopology { carrier: carrier.clone(), opens })
    }

    /// Smallest topology containing the given sets.
    pub fn generated_by(carrier: &Carrier, subbase: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        let mut opens: BTreeSet<PointSet> = subbase.into_iter().collect();
        for o in &opens {
            carrier.check_set(o)?;
        }
        opens.insert(PointSet::new());
        opens.insert(carrier.all());
        loop {
            let mut added = Vec::new();
            for a in &opens {
                for b in &opens {
                    for s in [a.union(b).copied().collect::<PointSet>(), a.intersection(b).copied().collect()] {
                        if !opens.contains(&s) {
                            added.push(s);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            opens.extend(added);
        }
        FiniteTopology::new(carrier, opens)
    }

    pub fn discrete(carrier: &Carrier) -> Self {
        FiniteTopology::generated_by(carrier, carrier.points().map(|p| PointSet::from([p]))).expect("valid")
    }

    pub fn indiscrete(carrier: &Carrier) -> Self {
        FiniteTopology::generated_by(carrier, []).expect("valid")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn opens(&self) -> &BTreeSet<PointSet> {
        &self.opens
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        self.opens.contains(s)
    }

    /// Intersection of all opens containing `x`; itself open.
    pub fn minimal_open(&self, x: Point) -> PointSet {
        self.opens
            .iter()
            .filter(|o| o.contains(&x))
            .fold(self.carrier.all(), |acc, o| acc.intersection(o).copied().collect())
    }

    /// Every subset of a finite space is compact.
    pub fn is_compact(&self, _s: &PointSet) -> bool {
        true
    }
}

/// A uniformity on a finite carrier, represented by its least entourage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteUniformity {
    core: Relation,
}

impl FiniteUniformity {
    pub fn new(core: Relation) -> Result<Self> {
        if !core.is_equivalence() {
            return Err(Error::NotEquivalence(core.fmt_pairs()));
        }
        Ok(FiniteUniformity { core })
    }

    pub fn from_classes(p: &Partition) -> Self {
        FiniteUniformity { core: p.to_relation() }
    }

    pub fn carrier(&self) -> &Carrier {
        self.core.carrier()
    }

    pub fn core(&self) -> &Relation {
        &self.core
    }

    pub fn is_entourage(&self, e: &Relation) -> bool {
        self.core.is_subset(e)
    }
}

/// Cartesian product of carriers. Points are ordered lexicographically with
/// the first factor most significant; labels read `(a,u)`.
pub fn product_carrier(factors: &[&Carrier]) -> (Carrier, Vec<Vec<Point>>) {
    let mut coords: Vec<Vec<Point>> = vec![vec![]];
    for f in factors {
        coords = coords
            .into_iter()
            .flat_map(|prefix| {
                f.points().map(move |p| {
                    let mut c = prefix.clone();
                    c.push(p);
                    c
                })
            })
            .collect();
    }
    let labels: Vec<String> = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(factors).map(|(&p, f)| f.label(p)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    (Carrier::new(labels).expect("tuple labels are distinct"), coords)
}

/// Disjoint union of carriers; labels read `i:label`.
pub fn sum_carrier(parts: &[&Carrier]) -> (Carrier, Vec<(usize, Point)>) {
    let tags: Vec<(usize, Point)> =
        parts.iter().enumerate().flat_map(|(i, c)| c.points().map(move |p| (i, p))).collect();
    let labels: Vec<String> = tags.iter().map(|&(i, p)| format!("{i}:{}", parts[i].label(p))).collect();
    (Carrier::new(labels).expect("tagged labels are distinct"), tags)
}

/// Every topology on a carrier of at most 4 points.
pub fn all_topologies(carrier: &Carrier) -> Vec<FiniteTopology> {
    assert!(carrier.len() <= 4, "topology enumeration is limited to 4 points");
    let proper: Vec<PointSet> =
        subsets_of(&carrier.all()).into_iter().filter(|s| !s.is_empty() && s.len() < carrier.len()).collect();
    (0u64..(1u64 << proper.len()))
        .filter_map(|mask| {
            let chosen = proper.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| s.clone());
            let opens = chosen.chain([PointSet::new(), carrier.all()]);
            FiniteTopology::new(carrier, opens).ok()
        })
        .collect()
}

/// All set partitions of `{0..n}` as restricted growth strings.
pub fn all_partitions(carrier: &Carrier) -> Vec<Partition> {
    let n = carrier.len();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, carrier: &Carrier, out: &mut Vec<Partition>) {
        if i == rgs.len() {
            out.push(Partition::from_assignment(carrier, rgs).expect("valid assignment"));
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, carrier, out);
        }
    }
    rec(0, 0, &mut rgs, carrier, &mut out);
    out
}

/// All subsets of `s`, ordered by size and then lexicographically.
pub fn subsets_of(s: &PointSet) -> Vec<PointSet> {
    let items: Vec<Point> = s.iter().copied().collect();
    let mut out: Vec<PointSet> = (0u64..(1u64 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
