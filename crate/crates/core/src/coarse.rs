//! Coarse structures on finite carriers.
//!
//! A finite coarse structure is closed under finite unions, so it has a
//! largest member; the axioms make that member an equivalence relation and
//! every controlled set is one of its subrelations. [`CoarseStructure`]
//! stores only this closeness relation.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::borno::Prebornology;
use crate::error::Error;
use crate::foundations::{
    equivalence_closure, metric_components, product_carrier, sum_carrier, Carrier, Partition, Point, PointSet,
    PseudometricInf, Relation,
};
use crate::maps::{is_bornological, is_bornologous, PointMap};

pub type Pairs = BTreeSet<(Point, Point)>;

/// An explicit family of relations on a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFamily {
    carrier: Carrier,
    members: BTreeSet<Pairs>,
}

impl RelationFamily {
    pub fn new(carrier: &Carrier, members: impl IntoIterator<Item = Relation>) -> crate::Result<Self> {
        let mut out = BTreeSet::new();
        for r in members {
            carrier.ensure_same(r.carrier(), "relation family member")?;
            out.insert(r.pairs().clone());
        }
        Ok(RelationFamily { carrier: carrier.clone(), members: out })
    }

    /// Members given as raw pair sets; every point is range-checked.
    pub fn from_pairs(carrier: &Carrier, members: impl IntoIterator<Item = Pairs>) -> crate::Result<Self> {
        let members: BTreeSet<Pairs> = members.into_iter().collect();
        for &(x, y) in members.iter().flatten() {
            carrier.check_point(x)?;
            carrier.check_point(y)?;
        }
        Ok(RelationFamily { carrier: carrier.clone(), members })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn members(&self) -> &BTreeSet<Pairs> {
        &self.members
    }
}

/// A failed coarse-structure axiom with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoarseViolation {
    /// Axiom 1: the diagonal is not a member.
    Diagonal { diagonal: Pairs },
    /// Axiom 2: `member` is present, its subrelation `missing` is not.
    DownwardClosed { member: Pairs, missing: Pairs },
    /// Axiom 3: `left ∪ right` is missing.
    Union { left: Pairs, right: Pairs },
    /// Axiom 4: `left ∘ right` is missing.
    Composition { left: Pairs, right: Pairs },
    /// Axiom 5: the inverse of `member` is missing.
    Inversion { member: Pairs },
}

impl CoarseViolation {
    pub fn axiom(&self) -> u8 {
        match self {
            CoarseViolation::Diagonal { .. } => 1,
            CoarseViolation::DownwardClosed { .. } => 2,
            CoarseViolation::Union { .. } => 3,
            CoarseViolation::Composition { .. } => 4,
            CoarseViolation::Inversion { .. } => 5,
        }
    }

    pub fn describe(&self, c: &Carrier) -> String {
        let f = |p: &Pairs| Relation::new(c, p.iter().copied()).map(|r| r.fmt_pairs()).unwrap_or_default();
        match self {
            CoarseViolation::Diagonal { diagonal } => format!("axiom 1: diagonal {} is missing", f(diagonal)),
            CoarseViolation::DownwardClosed { member, missing } => {
                format!("axiom 2: {} is a member but {} is not", f(member), f(missing))
            }
            CoarseViolation::Union { left, right } => {
                format!("axiom 3: union of {} and {} is missing", f(left), f(right))
            }
            CoarseViolation::Composition { left, right } => {
                format!("axiom 4: composite {} ∘ {} is missing", f(left), f(right))
            }
            CoarseViolation::Inversion { member } => format!("axiom 5: inverse of {} is missing", f(member)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoarseError {
    #[error("family violates {} coarse-structure axiom(s)", .0.len())]
    Axioms(Vec<CoarseViolation>),
    #[error(transparent)]
    Base(#[from] Error),
}

/// A coarse structure in canonical form: its closeness equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseStructure {
    closeness: Relation,
}

impl CoarseStructure {
    /// Fails unless `closeness` is an equivalence relation.
    pub fn from_closeness(closeness: Relation) -> crate::Result<Self> {
        if !closeness.is_equivalence() {
            return Err(Error::NotEquivalence(closeness.fmt_pairs()));
        }
        Ok(CoarseStructure { closeness })
    }

    pub fn carrier(&self) -> &Carrier {
        self.closeness.carrier()
    }

    pub fn closeness(&self) -> &Relation {
        &self.closeness
    }

    pub fn classes(&self) -> Partition {
        Partition::from_equivalence(&self.closeness).expect("closeness is an equivalence")
    }

    /// Smallest coarse structure containing every generator.
    pub fn from_generators(carrier: &Carrier, gens: &[Relation]) -> crate::Result<Self> {
        let mut all = Relation::diagonal(carrier);
        for g in gens {
            all = all.union(g)?;
        }
        CoarseStructure::from_closeness(equivalence_closure(&all))
    }

    pub fn finitely_close(&self, x: Point, y: Point) -> crate::Result<bool> {
        self.carrier().check_point(x)?;
        self.carrier().check_point(y)?;
        Ok(self.closeness.contains(x, y))
    }

    pub fn coarse_galaxy(&self, x: Point) -> crate::Result<PointSet> {
        self.carrier().check_point(x)?;
        Ok(self.closeness.section(x))
    }

    /// `e` is controlled iff it lies inside the closeness relation; the
    /// structure generated by `closeness` and `e` is checked to be unchanged
    /// exactly in that case.
    pub fn is_controlled(&self, e: &Relation) -> crate::Result<bool> {
        self.carrier().ensure_same(e.carrier(), "controlled-set check")?;
        let inclusion = e.is_subset(&self.closeness);
        let generated = CoarseStructure::from_generators(self.carrier(), &[self.closeness.clone(), e.clone()])?;
        assert_eq!(inclusion, &generated == self, "controlled-set characterisations disagree");
        Ok(inclusion)
    }

    /// Every controlled set, smallest first. Exponential in the closeness size.
    pub fn controlled_sets(&self) -> Vec<Relation> {
        let pairs: PointSet = (0..self.closeness.len()).collect();
        let list: Vec<(Point, Point)> = self.closeness.pairs().iter().copied().collect();
        crate::foundations::subsets_of(&pairs)
            .into_iter()
            .map(|s| Relation::new(self.carrier(), s.iter().map(|&i| list[i])).expect("in carrier"))
            .collect()
    }

    pub fn to_family(&self) -> RelationFamily {
        RelationFamily::new(self.carrier(), self.controlled_sets()).expect("same carrier")
    }

    pub fn is_connected(&self) -> bool {
        let full = self.closeness.len() == self.carrier().len() * self.carrier().len();
        assert_eq!(full, induced_prebornology(self).is_connected(), "connectedness corollary");
        full
    }

    pub fn maximal(c: &Carrier) -> Self {
        CoarseStructure { closeness: Relation::full(c) }
    }

    pub fn discrete(c: &Carrier) -> Self {
        CoarseStructure { closeness: Relation::diagonal(c) }
    }

    /// The power set of an equivalence relation.
    pub fn power_of_equivalence(e: &Relation) -> crate::Result<Self> {
        CoarseStructure::from_closeness(e.clone())
    }

    /// Relations whose off-diagonal part is finite. On a finite carrier that
    /// is every relation, so this is the maximal structure.
    pub fn finite_coarse(c: &Carrier) -> Self {
        CoarseStructure::maximal(c)
    }

    /// Relations of finite supremum distance.
    pub fn bounded_coarse(m: &PseudometricInf) -> Self {
        let c = m.carrier();
        let finite = Relation::new(
            c,
            c.points().flat_map(|x| c.points().map(move |y| (x, y))).filter(|&(x, y)| m.d(x, y).is_finite()),
        )
        .expect("in carrier");
        let s = CoarseStructure::from_closeness(finite).expect("finite distance is an equivalence");
        assert_eq!(s.classes(), metric_components(m));
        s
    }

    /// `E` is controlled iff `sup_{(x,y) ∈ E} d(x,y) < ∞`.
    pub fn metric_sup_finite(m: &PseudometricInf, e: &Relation) -> bool {
        e.pairs().iter().all(|&(x, y)| m.d(x, y).is_finite())
    }

    /// Closeness `x ∼ y` iff `x⁻¹y` lies in the galaxy of the identity.
    pub fn left_coarse(g: &BornologicalGroup) -> Self {
        let gens = g.translate_generators(|x, b| g.mul(x, b));
        let s = CoarseStructure::from_generators(&g.carrier, &gens).expect("same carrier");
        let ge = g.borno.partition().block(g.identity).clone();
        for x in g.carrier.points() {
            for y in g.carrier.points() {
                assert_eq!(s.closeness.contains(x, y), ge.contains(&g.mul(g.inv(x), y)), "left closeness law");
            }
        }
        if g.is_commutative() {
            assert_eq!(s, CoarseStructure::right_coarse(g), "left and right agree for commutative groups");
        }
        s
    }

    /// Closeness `x ∼ y` iff `xy⁻¹` lies in the galaxy of the identity.
    pub fn right_coarse(g: &BornologicalGroup) -> Self {
        let gens = g.translate_generators(|x, b| g.mul(b, x));
        let s = CoarseStructure::from_generators(&g.carrier, &gens).expect("same carrier");
        let ge = g.borno.partition().block(g.identity).clone();
        for x in g.carrier.points() {
            for y in g.carrier.points() {
                assert_eq!(s.closeness.contains(x, y), ge.contains(&g.mul(x, g.inv(y))), "right closeness law");
            }
        }
        s
    }

    /// Restriction to `a`, on a carrier keeping the labels of `a`.
    pub fn subspace(&self, a: &PointSet) -> crate::Result<Self> {
        let c = self.carrier();
        c.check_set(a)?;
        let pts: Vec<Point> = a.iter().copied().collect();
        let sub = Carrier::new(pts.iter().map(|&p| c.label(p).to_string()))?;
        let restricted = self.closeness.restrict(a);
        let pairs = restricted
            .pairs()
            .iter()
            .map(|&(x, y)| (pts.binary_search(&x).expect("in a"), pts.binary_search(&y).expect("in a")));
        let s = CoarseStructure::from_closeness(Relation::new(&sub, pairs)?)?;
        for (i, &x) in pts.iter().enumerate() {
            for (j, &y) in pts.iter().enumerate() {
                assert_eq!(s.closeness.contains(i, j), self.closeness.contains(x, y), "subspace closeness law");
            }
        }
        Ok(s)
    }

    /// Product structure; closeness is componentwise.
    pub fn product(list: &[CoarseStructure]) -> crate::Result<Self> {
        if list.is_empty() {
            return Err(Error::Precondition("product of an empty list".into()));
        }
        let carriers: Vec<&Carrier> = list.iter().map(|s| s.carrier()).collect();
        let (carrier, coords) = product_carrier(&carriers);
        let close =
            |a: &Vec<Point>, b: &Vec<Point>| a.iter().zip(b).zip(list).all(|((&x, &y), s)| s.closeness.contains(x, y));
        let pairs = coords
            .iter()
            .enumerate()
            .flat_map(|(i, a)| coords.iter().enumerate().filter(move |(_, b)| close(a, b)).map(move |(j, _)| (i, j)));
        let s = CoarseStructure::from_closeness(Relation::new(&carrier, pairs)?)?;
        // A relation is controlled iff both projections are.
        for (i, a) in coords.iter().enumerate() {
            for (j, b) in coords.iter().enumerate() {
                let projections = list.iter().enumerate().all(|(k, f)| f.closeness.contains(a[k], b[k]));
                assert_eq!(s.closeness.contains(i, j), projections, "product closeness law");
            }
        }
        Ok(s)
    }

    /// Sum structure on the disjoint union.
    pub fn sum(list: &[CoarseStructure]) -> crate::Result<Self> {
        let carriers: Vec<&Carrier> = list.iter().map(|s| s.carrier()).collect();
        let (carrier, tags) = sum_carrier(&carriers);
        let mut offset = 0;
        let mut pairs = Vec::new();
        for s in list {
            pairs.extend(s.closeness.pairs().iter().map(|&(x, y)| (x + offset, y + offset)));
            offset += s.carrier().len();
        }
        let s = CoarseStructure::from_closeness(Relation::new(&carrier, pairs)?)?;
        for (i, &(a, x)) in tags.iter().enumerate() {
            for (j, &(b, y)) in tags.iter().enumerate() {
                let expected = a == b && list[a].closeness.contains(x, y);
                assert_eq!(s.closeness.contains(i, j), expected, "sum closeness law");
            }
        }
        Ok(s)
    }
}

impl fmt::Display for CoarseStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.classes().fmt_blocks())
    }
}

/// Checks the five coarse-structure axioms and returns the canonical form.
pub fn validate_relations(f: &RelationFamily) -> Result<CoarseStructure, CoarseError> {
    let c = &f.carrier;
    let n = c.len();
    if n > MAX_FAMILY_CARRIER {
        return Err(Error::Precondition(format!(
            "relation families are validated on at most {MAX_FAMILY_CARRIER} points, got {n}"
        ))
        .into());
    }
    let bits = PairBits { n };
    let masks: HashSet<u64> = f.members.iter().map(|m| bits.mask(m)).collect();
    let ordered: Vec<u64> = f.members.iter().map(|m| bits.mask(m)).collect();
    let mut v = Vec::new();
    let diagonal = bits.diagonal();
    if !masks.contains(&diagonal) {
        v.push(CoarseViolation::Diagonal { diagonal: bits.pairs(diagonal) });
    }
    'down: for &m in &ordered {
        for b in 0..n * n {
            if m & (1 << b) != 0 && !masks.contains(&(m & !(1 << b))) {
                v.push(CoarseViolation::DownwardClosed { member: bits.pairs(m), missing: bits.pairs(m & !(1 << b)) });
                break 'down;
            }
        }
    }
    'union: for &a in &ordered {
        for &b in &ordered {
            if !masks.contains(&(a | b)) {
                v.push(CoarseViolation::Union { left: bits.pairs(a), right: bits.pairs(b) });
                break 'union;
            }
        }
    }
    'comp: for &a in &ordered {
        for &b in &ordered {
            if !masks.contains(&bits.compose(a, b)) {
                v.push(CoarseViolation::Composition { left: bits.pairs(a), right: bits.pairs(b) });
                break 'comp;
            }
        }
    }
    if let Some(&m) = ordered.iter().find(|&&m| !masks.contains(&bits.inverse(m))) {
        v.push(CoarseViolation::Inversion { member: bits.pairs(m) });
    }
    if !v.is_empty() {
        return Err(CoarseError::Axioms(v));
    }
    let union: Pairs = f.members.iter().flatten().copied().collect();
    let closeness = Relation::new(c, union).expect("in carrier");
    let s = CoarseStructure::from_closeness(closeness).expect("axioms force an equivalence");
    assert!(f.members.contains(s.closeness.pairs()), "union of members is a member");
    assert_eq!(
        Some(f.members.len()),
        1usize.checked_shl(s.closeness.len() as u32),
        "family is the power set of its closeness"
    );
    Ok(s)
}

/// Largest carrier accepted by [`validate_relations`]; relations are packed
/// into a `u64`.
pub const MAX_FAMILY_CARRIER: usize = 8;

/// Relations on `n ≤ 8` points as bitmasks, bit `x·n + y` for `(x, y)`.
struct PairBits {
    n: usize,
}

impl PairBits {
    fn mask(&self, p: &Pairs) -> u64 {
        p.iter().fold(0, |m, &(x, y)| m | 1 << (x * self.n + y))
    }

    fn pairs(&self, m: u64) -> Pairs {
        (0..self.n * self.n).filter(|b| m & (1 << b) != 0).map(|b| (b / self.n, b % self.n)).collect()
    }

    fn row(&self, m: u64, x: usize) -> u64 {
        (m >> (x * self.n)) & ((1 << self.n) - 1)
    }

    fn diagonal(&self) -> u64 {
        (0..self.n).fold(0, |m, x| m | 1 << (x * self.n + x))
    }

    /// `e ∘ f`: `f` first.
    fn compose(&self, e: u64, f: u64) -> u64 {
        let mut out = 0;
        for x in 0..self.n {
            let fx = self.row(f, x);
            let mut row = 0;
            for y in 0..self.n {
                if fx & (1 << y) != 0 {
                    row |= self.row(e, y);
                }
            }
            out |= row << (x * self.n);
        }
        out
    }

    fn inverse(&self, m: u64) -> u64 {
        let mut out = 0;
        for x in 0..self.n {
            for y in 0..self.n {
                if m & (1 << (x * self.n + y)) != 0 {
                    out |= 1 << (y * self.n + x);
                }
            }
        }
        out
    }
}

/// Functor U: `B` is bounded iff `B × B` is controlled.
pub fn induced_prebornology(c: &CoarseStructure) -> Prebornology {
    let p = Prebornology::from_partition(c.classes());
    for x in c.carrier().points() {
        let g = p.partition().block(x);
        assert_eq!(g, &c.closeness.section(x), "galaxy equals coarse galaxy");
        for &y in g {
            assert!(c.closeness.contains(x, y), "points of a bounded set are close");
        }
    }
    p
}

/// Functor T: closeness `x = y` or `x, y` in a common galaxy.
pub fn coarse_from_prebornology(p: &Prebornology) -> CoarseStructure {
    let blocks = p.partition().to_relation();
    let closeness = Relation::diagonal(p.carrier()).union(&blocks).expect("same carrier");
    let s = CoarseStructure::from_closeness(closeness).expect("blocks give an equivalence");
    assert_eq!(&induced_prebornology(&s), p, "U after T is the identity");
    assert_eq!(coarse_from_prebornology_unchecked(&induced_prebornology(&s)), s, "T after U is the identity");
    s
}

fn coarse_from_prebornology_unchecked(p: &Prebornology) -> CoarseStructure {
    CoarseStructure { closeness: p.partition().to_relation() }
}

/// Outcome of checking T ⊣ U on one pair of spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub maps_checked: usize,
    pub unit_bornological: bool,
    pub counit_bornologous: bool,
    pub triangles_hold: bool,
    /// First map where `f: T(p) → c` bornologous and `f: p → U(c)`
    /// bornological disagree.
    pub hom_mismatch: Option<PointMap>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.unit_bornological && self.counit_bornologous && self.triangles_hold && self.hom_mismatch.is_none()
    }
}

/// Checks the hom-set bijection over every map `p.carrier → c.carrier`, plus
/// the unit `p → U T p` and counit `T U c → c` as identity maps.
pub fn adjunction_check(p: &Prebornology, c: &CoarseStructure) -> AdjunctionReport {
    let tp = coarse_from_prebornology(p);
    let uc = induced_prebornology(c);
    let mut maps_checked = 0;
    let mut hom_mismatch = None;
    for f in PointMap::all(p.carrier(), c.carrier()) {
        maps_checked += 1;
        let coarse_side = is_bornologous(&f, &tp, c).expect("carriers match").holds();
        let borno_side = is_bornological(&f, p, &uc).expect("carriers match").holds();
        if coarse_side != borno_side && hom_mismatch.is_none() {
            hom_mismatch = Some(f);
        }
    }
    let unit = PointMap::identity(p.carrier());
    let unit_bornological = is_bornological(&unit, p, &induced_prebornology(&tp)).expect("same").holds();
    let cid = PointMap::identity(c.carrier());
    let counit_bornologous = is_bornologous(&cid, &coarse_from_prebornology(&uc), c).expect("same").holds();
    // U(ε) ∘ η_U and ε_T ∘ T(η) are composites of identity tables.
    let triangles_hold =
        unit.compose(&unit).map(|m| m == unit).unwrap_or(false) && cid.compose(&cid).map(|m| m == cid).unwrap_or(false);
    AdjunctionReport { maps_checked, unit_bornological, counit_bornologous, triangles_hold, hom_mismatch }
}

/// A finite group with a prebornology making its operations bornological.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BornologicalGroup {
    carrier: Carrier,
    mul: Vec<Vec<Point>>,
    inv: Vec<Point>,
    identity: Point,
    borno: Prebornology,
}

impl BornologicalGroup {
    /// Validates the group axioms, then that multiplication (on the product
    /// prebornology) and inversion are bornological.
    pub fn new(mul: Vec<Vec<Point>>, borno: Prebornology) -> crate::Result<Self> {
        let carrier = borno.carrier().clone();
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidGroup("a group has at least one element".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup(format!("multiplication table must be {n}×{n}")));
        }
        if let Some(&bad) = mul.iter().flatten().find(|&&z| z >= n) {
            return Err(Error::InvalidGroup(format!("table entry {bad} is out of range")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            carrier.label(x),
                            carrier.label(y),
                            carrier.label(z)
                        )));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let i = (0..n)
                .find(|&y| mul[x][y] == identity && mul[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("`{}` has no inverse", carrier.label(x))))?;
            inv.push(i);
        }
        let g = BornologicalGroup { carrier, mul, inv, identity, borno };
        g.check_operations()?;
        Ok(g)
    }

    /// The cyclic group `ℤ/n` on labels `0..n`.
    pub fn cyclic(n: usize, blocks: &[Vec<usize>]) -> crate::Result<Self> {
        let carrier = Carrier::new((0..n).map(|i| i.to_string()))?;
        let partition = Partition::new(&carrier, blocks.iter().map(|b| b.iter().copied().collect()))?;
        let mul = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        BornologicalGroup::new(mul, Prebornology::from_partition(partition))
    }

    fn check_operations(&self) -> crate::Result<()> {
        let c = &self.carrier;
        let prod = Prebornology::product(&[self.borno.clone(), self.borno.clone()])?;
        let (_, coords) = product_carrier(&[c, c]);
        let mul_map = PointMap::new(prod.carrier(), c, coords.iter().map(|xy| self.mul[xy[0]][xy[1]]).collect())?;
        let v = is_bornological(&mul_map, &prod, &self.borno)?;
        if !v.holds() {
            return Err(Error::InvalidGroup(format!(
                "multiplication is not bornological: {}",
                v.describe(prod.carrier(), c)
            )));
        }
        let inv_map = PointMap::new(c, c, self.inv.clone())?;
        let v = is_bornological(&inv_map, &self.borno, &self.borno)?;
        if !v.holds() {
            return Err(Error::InvalidGroup(format!("inversion is not bornological: {}", v.describe(c, c))));
        }
        Ok(())
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn identity(&self) -> Point {
        self.identity
    }

    pub fn borno(&self) -> &Prebornology {
        &self.borno
    }

    pub fn mul(&self, x: Point, y: Point) -> Point {
        self.mul[x][y]
    }

    pub fn inv(&self, x: Point) -> Point {
        self.inv[x]
    }

    pub fn is_commutative(&self) -> bool {
        self.carrier.points().all(|x| self.carrier.points().all(|y| self.mul[x][y] == self.mul[y][x]))
    }

    /// Generators `{(x, t(x, b))}` for `b` in the galaxy of the identity:
    /// the sets `{(x,y) | x⁻¹y ∈ B}` with `B = {e, b}` bounded.
    fn translate_generators(&self, t: impl Fn(Point, Point) -> Point) -> Vec<Relation> {
        self.borno
            .partition()
            .block(self.identity)
            .iter()
            .map(|&b| Relation::new(&self.carrier, self.carrier.points().map(|x| (x, t(x, b)))).expect("in carrier"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{all_partitions, Dist};
    use num_rational::BigRational;

    fn rel(c: &Carrier, pairs: &[(&str, &str)]) -> Relation {
        Relation::from_labels(c, pairs).unwrap()
    }

    #[test]
    fn validate_examples() {
        let c = Carrier::standard(2);
        let diag = CoarseStructure::discrete(&c);
        assert_eq!(validate_relations(&diag.to_family()).unwrap(), diag);
        let max = CoarseStructure::maximal(&c);
        assert_eq!(validate_relations(&max.to_family()).unwrap(), max);
        let missing = RelationFamily::new(&c, [Relation::empty(&c)]).unwrap();
        let CoarseError::Axioms(v) = validate_relations(&missing).unwrap_err() else { panic!() };
        assert_eq!(v, vec![CoarseViolation::Diagonal { diagonal: Relation::diagonal(&c).pairs().clone() }]);
    }

    #[test]
    fn validate_reports_composition_witness() {
        let c = Carrier::standard(3);
        let ab = rel(&c, &[("a", "b"), ("b", "a")]);
        let bc = rel(&c, &[("b", "c"), ("c", "b")]);
        let d = Relation::diagonal(&c);
        let mut members: Vec<Relation> = Vec::new();
        let u = d.union(&ab).unwrap().union(&bc).unwrap();
        for s in CoarseStructure::from_closeness(Relation::full(&c)).unwrap().controlled_sets() {
            if s.is_subset(&u) {
                members.push(s);
            }
        }
        let CoarseError::Axioms(v) = validate_relations(&RelationFamily::new(&c, members).unwrap()).unwrap_err() else {
            panic!()
        };
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom(), 4);
    }

    #[test]
    fn bitmask_algebra_matches_relations() {
        let c = Carrier::standard(3);
        let bits = PairBits { n: 3 };
        let all = CoarseStructure::maximal(&c).controlled_sets();
        for (i, e) in all.iter().enumerate().step_by(7) {
            let me = bits.mask(e.pairs());
            assert_eq!(bits.pairs(me), *e.pairs());
            assert_eq!(bits.pairs(bits.inverse(me)), *e.inverse().pairs());
            for f in all.iter().skip(i % 5).step_by(11) {
                let composed = crate::foundations::relation_compose(e, f).unwrap();
                assert_eq!(bits.pairs(bits.compose(me, bits.mask(f.pairs()))), *composed.pairs());
            }
        }
        assert_eq!(bits.pairs(bits.diagonal()), *Relation::diagonal(&c).pairs());
    }

    #[test]
    fn generators() {
        let c = Carrier::standard(3);
        assert_eq!(CoarseStructure::from_generators(&c, &[]).unwrap(), CoarseStructure::discrete(&c));
        let s = CoarseStructure::from_generators(&c, &[rel(&c, &[("a", "b")])]).unwrap();
        assert_eq!(s.closeness(), &Relation::diagonal(&c).union(&rel(&c, &[("a", "b"), ("b", "a")])).unwrap());
        let s = CoarseStructure::from_generators(&c, &[rel(&c, &[("a", "b")]), rel(&c, &[("b", "c")])]).unwrap();
        assert_eq!(s, CoarseStructure::maximal(&c));
    }

    #[test]
    fn controlled_and_galaxies() {
        let c = Carrier::standard(3);
        let d = CoarseStructure::discrete(&c);
        assert!(d.is_controlled(&Relation::empty(&c)).unwrap());
        assert!(!d.is_controlled(&rel(&c, &[("a", "b")])).unwrap());
        assert!(d.finitely_close(1, 1).unwrap());
        assert!(d.finitely_close(0, 5).is_err());
        let m = CoarseStructure::maximal(&c);
        assert!(c.points().all(|x| m.coarse_galaxy(x).unwrap() == c.all()));
    }

    #[test]
    fn metric_structure() {
        let c = Carrier::standard(3);
        let one = Dist::Finite(BigRational::from_integer(1.into()));
        let m = PseudometricInf::from_entries(&c, &[(0, 1, one)]).unwrap();
        let s = CoarseStructure::bounded_coarse(&m);
        assert!(s.finitely_close(0, 1).unwrap());
        assert!(!s.finitely_close(0, 2).unwrap());
        for e in CoarseStructure::maximal(&c).controlled_sets() {
            assert_eq!(s.is_controlled(&e).unwrap(), CoarseStructure::metric_sup_finite(&m, &e));
        }
        let p = induced_prebornology(&s);
        assert_eq!(p.partition(), &Partition::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap());
    }

    #[test]
    fn functors() {
        let c = Carrier::standard(3);
        assert_eq!(induced_prebornology(&CoarseStructure::discrete(&c)), Prebornology::discrete(&c));
        assert_eq!(induced_prebornology(&CoarseStructure::maximal(&c)), Prebornology::maximal(&c));
        let p = Prebornology::from_partition(Partition::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap());
        assert_eq!(
            coarse_from_prebornology(&p).closeness(),
            &Relation::diagonal(&c).union(&rel(&c, &[("a", "b"), ("b", "a")])).unwrap()
        );
    }

    #[test]
    fn round_trips_and_connectedness_up_to_four() {
        for n in 0..=4 {
            let c = Carrier::standard(n);
            for part in all_partitions(&c) {
                let p = Prebornology::from_partition(part);
                let t = coarse_from_prebornology(&p);
                assert_eq!(induced_prebornology(&t), p);
                assert_eq!(t.is_connected(), p.is_connected());
            }
        }
    }

    #[test]
    fn adjunction_up_to_three() {
        for n in 0..=3 {
            let c = Carrier::standard(n);
            let parts = all_partitions(&c);
            for a in &parts {
                for m in 0..=3 {
                    let d = Carrier::standard(m);
                    for b in all_partitions(&d) {
                        let p = Prebornology::from_partition(a.clone());
                        let s = CoarseStructure::from_closeness(b.to_relation()).unwrap();
                        assert!(adjunction_check(&p, &s).holds());
                    }
                }
            }
        }
    }

    #[test]
    fn product_example() {
        let x = Carrier::standard(2);
        let y = Carrier::new(["u", "v"]).unwrap();
        let s = CoarseStructure::product(&[CoarseStructure::discrete(&x), CoarseStructure::maximal(&y)]).unwrap();
        let pc = s.carrier().clone();
        let expected = rel(
            &pc,
            &[
                ("(a,u)", "(a,u)"),
                ("(a,u)", "(a,v)"),
                ("(a,v)", "(a,u)"),
                ("(a,v)", "(a,v)"),
                ("(b,u)", "(b,u)"),
                ("(b,u)", "(b,v)"),
                ("(b,v)", "(b,u)"),
                ("(b,v)", "(b,v)"),
            ],
        );
        assert_eq!(s.closeness(), &expected);
    }

    #[test]
    fn subspace_and_sum() {
        let c = Carrier::standard(3);
        let s = CoarseStructure::from_generators(&c, &[rel(&c, &[("a", "c")])]).unwrap();
        let sub = s.subspace(&c.set(&["a", "c"]).unwrap()).unwrap();
        assert_eq!(sub, CoarseStructure::maximal(sub.carrier()));
        let sum = CoarseStructure::sum(&[s.clone(), s]).unwrap();
        assert_eq!(sum.carrier().len(), 6);
        assert!(!sum.is_connected());
    }

    #[test]
    fn finite_coarse_is_maximal() {
        let c = Carrier::standard(3);
        assert_eq!(CoarseStructure::finite_coarse(&c), CoarseStructure::maximal(&c));
        assert!(CoarseStructure::power_of_equivalence(&rel(&c, &[("a", "b")])).is_err());
    }

    #[test]
    fn group_structures() {
        let discrete = BornologicalGroup::cyclic(4, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        let left = CoarseStructure::left_coarse(&discrete);
        assert_eq!(left, CoarseStructure::discrete(discrete.carrier()));

        let cosets = BornologicalGroup::cyclic(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let left = CoarseStructure::left_coarse(&cosets);
        assert!(left.finitely_close(0, 2).unwrap());
        assert!(!left.finitely_close(0, 1).unwrap());

        let err = BornologicalGroup::cyclic(4, &[vec![0, 1], vec![2], vec![3]]).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(ref m) if m.contains("multiplication")));
    }

    #[test]
    fn non_commutative_left_and_right_differ() {
        // S3 as permutations of {0,1,2}; galaxy of the identity is {e, (01)}.
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul: Vec<Vec<usize>> =
            perms.iter().map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect()).collect();
        let c = Carrier::new(["e", "s01", "s12", "s02", "r", "r2"]).unwrap();
        let h = [0usize, 1];
        let left_cosets: Vec<PointSet> = {
            let mut v: Vec<PointSet> = (0..6).map(|g| h.iter().map(|&x| mul[g][x]).collect()).collect();
            v.sort();
            v.dedup();
            v
        };
        // The subgroup is not normal, so its cosets do not make mul bornological.
        let p = Prebornology::from_partition(Partition::new(&c, left_cosets).unwrap());
        assert!(BornologicalGroup::new(mul.clone(), p).is_err());
        let g = BornologicalGroup::new(mul, Prebornology::discrete(&c)).unwrap();
        assert!(!g.is_commutative());
        assert_eq!(CoarseStructure::left_coarse(&g), CoarseStructure::right_coarse(&g));
    }
}
