//! Prebornologies on finite carriers.
//!
//! On a finite carrier the extension of a set is the set itself, so a
//! prebornology is determined by its galaxies: the bounded sets are `∅` and
//! the nonempty subsets of a single galaxy. [`Prebornology`] therefore stores
//! only the galaxy partition. Raw families are checked against the axioms by
//! [`validate_family`] and never kept afterwards.
//!
//! Every characterisation implemented here evaluates both sides and asserts
//! that they agree; a disagreement is a bug, not a verdict.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::foundations::{
    metric_components, partition_meet, product_carrier, subsets_of, sum_carrier, Carrier, DisjointSets, FiniteTopology,
    Partition, Point, PointSet, PseudometricInf,
};

/// An explicit family of subsets of a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    carrier: Carrier,
    members: BTreeSet<PointSet>,
}

impl SetFamily {
    pub fn new(carrier: &Carrier, members: impl IntoIterator<Item = PointSet>) -> crate::Result<Self> {
        let members: BTreeSet<PointSet> = members.into_iter().collect();
        for m in &members {
            carrier.check_set(m)?;
        }
        Ok(SetFamily { carrier: carrier.clone(), members })
    }

    pub fn from_labels<S: AsRef<str>>(carrier: &Carrier, members: &[Vec<S>]) -> crate::Result<Self> {
        let members = members.iter().map(|m| carrier.set(m)).collect::<crate::Result<Vec<_>>>()?;
        SetFamily::new(carrier, members)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn members(&self) -> &BTreeSet<PointSet> {
        &self.members
    }

    pub fn contains(&self, s: &PointSet) -> bool {
        self.members.contains(s)
    }
}

/// A failed prebornology axiom together with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyViolation {
    /// The family has no members at all.
    Empty,
    /// No member contains this point.
    Cover { point: Point },
    /// `member` is present but its subset `missing` is not.
    DownwardClosed { member: PointSet, missing: PointSet },
    /// `left ∩ right ≠ ∅` but `left ∪ right` is missing.
    OverlapUnion { left: PointSet, right: PointSet },
}

impl FamilyViolation {
    pub fn describe(&self, c: &Carrier) -> String {
        match self {
            FamilyViolation::Empty => "family is empty".into(),
            FamilyViolation::Cover { point } => {
                format!("cover: no member contains `{}`", c.label(*point))
            }
            FamilyViolation::DownwardClosed { member, missing } => format!(
                "downward closed: {} is a member but its subset {} is not",
                c.fmt_set(member),
                c.fmt_set(missing)
            ),
            FamilyViolation::OverlapUnion { left, right } => format!(
                "non-disjoint union: {} and {} overlap but their union is missing",
                c.fmt_set(left),
                c.fmt_set(right)
            ),
        }
    }
}

/// A failed local axiom of a bounded-neighbourhood system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BnViolation {
    /// `BN(x)` is empty.
    Empty { x: Point },
    /// `set ∈ BN(x)` but `x ∉ set`.
    ContainsPoint { x: Point, set: PointSet },
    /// `x ∈ subset ⊆ set ∈ BN(x)` but `subset ∉ BN(x)`.
    Downward { x: Point, set: PointSet, subset: PointSet },
    /// `a, b ∈ BN(x)` but `a ∪ b ∉ BN(x)`.
    Union { x: Point, a: PointSet, b: PointSet },
    /// `set ∈ BN(x)`, `y ∈ set`, but `set ∉ BN(y)`.
    Transfer { x: Point, set: PointSet, y: Point },
}

impl BnViolation {
    /// Axiom number in the usual BN1–BN4 numbering (0 for emptiness).
    pub fn axiom(&self) -> u8 {
        match self {
            BnViolation::Empty { .. } => 0,
            BnViolation::ContainsPoint { .. } => 1,
            BnViolation::Downward { .. } => 2,
            BnViolation::Union { .. } => 3,
            BnViolation::Transfer { .. } => 4,
        }
    }

    pub fn describe(&self, c: &Carrier) -> String {
        match self {
            BnViolation::Empty { x } => format!("BN({}) is empty", c.label(*x)),
            BnViolation::ContainsPoint { x, set } => {
                format!("BN1: {} ∈ BN({x}) does not contain {x}", c.fmt_set(set), x = c.label(*x))
            }
            BnViolation::Downward { x, set, subset } => {
                format!("BN2: {} ∈ BN({}) but {} is missing", c.fmt_set(set), c.label(*x), c.fmt_set(subset))
            }
            BnViolation::Union { x, a, b } => {
                format!("BN3: {} and {} in BN({}) but not their union", c.fmt_set(a), c.fmt_set(b), c.label(*x))
            }
            BnViolation::Transfer { x, set, y } => {
                format!("BN4: {} ∈ BN({}) but not in BN({})", c.fmt_set(set), c.label(*x), c.label(*y))
            }
        }
    }
}

/// Failed galaxy-map property with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalaxyViolation {
    /// `x ∉ G(x)`.
    NotReflexive { x: Point },
    /// `G(x) ∩ G(y) ≠ ∅` yet `G(x) ≠ G(y)`.
    OverlapNotEqual { x: Point, y: Point },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BornoError {
    #[error("family violates {} prebornology axiom(s)", .0.len())]
    Family(Vec<FamilyViolation>),
    #[error("bounded-neighbourhood system violates {} axiom(s)", .0.len())]
    Bn(Vec<BnViolation>),
    #[error("galaxy map property fails: {0:?}")]
    Galaxy(GalaxyViolation),
    #[error(transparent)]
    Base(#[from] Error),
}

/// A prebornology in canonical form: its galaxy partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prebornology {
    galaxies: Partition,
}

/// Members per block beyond this size are not enumerated by the
/// definition-side checks; they fall back to the block itself, which is the
/// largest bounded set containing a point.
pub const ENUMERATION_LIMIT: usize = 16;

impl Prebornology {
    pub fn from_partition(galaxies: Partition) -> Self {
        Prebornology { galaxies }
    }

    pub fn carrier(&self) -> &Carrier {
        self.galaxies.carrier()
    }

    pub fn partition(&self) -> &Partition {
        &self.galaxies
    }

    pub fn blocks(&self) -> &[PointSet] {
        self.galaxies.blocks()
    }

    /// Smallest prebornology containing every generator and every singleton.
    pub fn from_generators(carrier: &Carrier, gens: &[PointSet]) -> crate::Result<Self> {
        let mut ds = DisjointSets::new(carrier.len());
        for g in gens {
            carrier.check_set(g)?;
            let mut it = g.iter();
            if let Some(&first) = it.next() {
                for &p in it {
                    ds.union(first, p);
                }
            }
        }
        Ok(Prebornology::from_partition(Partition::new(carrier, ds.classes())?))
    }

    /// The galaxy `G(x)`: the union of all bounded sets containing `x`.
    pub fn galaxy(&self, x: Point) -> crate::Result<PointSet> {
        self.carrier().check_point(x)?;
        let g = self.galaxies.block(x).clone();
        let union_of_bounded_pairs: PointSet =
            self.carrier().points().filter(|&y| self.is_bounded(&PointSet::from([x, y]))).collect();
        assert_eq!(g, union_of_bounded_pairs, "galaxy must equal the union of bounded sets containing x");
        Ok(g)
    }

    fn g(&self, x: Point) -> &PointSet {
        self.galaxies.block(x)
    }

    /// The four equivalent boundedness conditions, evaluated with `*B = B`:
    /// membership; `B ⊆ G(x)` for all `x ∈ B`; `B = ∅` or `B ⊆ G(x)` for
    /// some `x ∈ B`; `X = ∅` or `B ⊆ G(x)` for some `x ∈ X`.
    pub fn boundedness_conditions(&self, b: &PointSet) -> [bool; 4] {
        let member = self.galaxies.within_block(b);
        let all = b.iter().all(|&x| b.is_subset(self.g(x)));
        let some_in_b = b.is_empty() || b.iter().any(|&x| b.is_subset(self.g(x)));
        let some_in_x = self.carrier().is_empty() || self.carrier().points().any(|x| b.is_subset(self.g(x)));
        [member, all, some_in_b, some_in_x]
    }

    /// Panics if `b` has points outside the carrier.
    pub fn is_bounded(&self, b: &PointSet) -> bool {
        self.carrier().check_set(b).expect("set must lie in the carrier");
        let c = self.boundedness_conditions(b);
        assert!(c.iter().all(|&v| v == c[0]), "boundedness conditions disagree: {c:?}");
        c[0]
    }

    /// The four equivalent connectedness conditions: every finite subset is
    /// bounded; closed under arbitrary finite unions; `G(x) ⊇ X` for all `x`;
    /// all galaxies coincide.
    pub fn connectedness_conditions(&self) -> [bool; 4] {
        let c = self.carrier();
        let finite_bounded = self.galaxies.within_block(&c.all());
        let blocks = self.blocks();
        let unions_bounded =
            blocks.iter().all(|a| blocks.iter().all(|b| self.galaxies.within_block(&a.union(b).copied().collect())));
        let galaxy_covers = c.points().all(|x| self.g(x).len() == c.len());
        let all_equal = c.points().all(|x| c.points().all(|y| self.g(x) == self.g(y)));
        [finite_bounded, unions_bounded, galaxy_covers, all_equal]
    }

    pub fn is_connected(&self) -> bool {
        let c = self.connectedness_conditions();
        assert!(c.iter().all(|&v| v == c[0]), "connectedness conditions disagree: {c:?}");
        assert_eq!(c[0], self.blocks().len() <= 1);
        c[0]
    }

    /// A bornology is exactly a connected prebornology.
    pub fn is_bornology(&self) -> bool {
        self.is_connected()
    }

    /// `BN(x)`: every bounded set containing `x`, smallest first.
    pub fn bounded_sets_containing(&self, x: Point) -> Vec<PointSet> {
        subsets_of(self.g(x)).into_iter().filter(|s| s.contains(&x)).collect()
    }

    /// Every bounded set, `∅` first.
    pub fn bounded_sets(&self) -> Vec<PointSet> {
        let mut out = vec![PointSet::new()];
        for b in self.blocks() {
            out.extend(subsets_of(b).into_iter().filter(|s| !s.is_empty()));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn to_family(&self) -> SetFamily {
        SetFamily::new(self.carrier(), self.bounded_sets()).expect("bounded sets lie in the carrier")
    }

    pub fn galaxy_map(&self) -> GalaxyMapSpec {
        GalaxyMapSpec {
            carrier: self.carrier().clone(),
            g: self.carrier().points().map(|x| self.g(x).clone()).collect(),
        }
    }

    /// A bounded set containing the galaxy of `x`: the galaxy itself.
    pub fn approximating_bounded_set(&self, x: Point) -> PointSet {
        let b = self.g(x).clone();
        assert!(self.is_bounded(&b));
        b
    }

    pub fn maximal(c: &Carrier) -> Self {
        Prebornology::from_partition(Partition::indiscrete(c))
    }

    pub fn discrete(c: &Carrier) -> Self {
        Prebornology::from_partition(Partition::discrete(c))
    }

    /// Bounded sets are the finite subsets, i.e. all of them here.
    pub fn finite_bornology(c: &Carrier) -> Self {
        let all_finite = vec![c.all()];
        Prebornology::from_generators(c, &all_finite).expect("carrier subsets")
    }

    /// Sets contained in some compact set. Every subset of a finite space is
    /// compact, so this is always the maximal bornology.
    pub fn compact_bornology(t: &FiniteTopology) -> Self {
        let c = t.carrier();
        let compacts: Vec<PointSet> = [c.all()].into_iter().filter(|k| t.is_compact(k)).collect();
        Prebornology::from_generators(c, &compacts).expect("carrier subsets")
    }

    /// Coincides with the compact bornology on finite spaces.
    pub fn relatively_compact_bornology(t: &FiniteTopology) -> Self {
        Prebornology::compact_bornology(t)
    }

    /// Sets of finite diameter.
    pub fn bounded_bornology(m: &PseudometricInf) -> Self {
        let p = Prebornology::from_partition(metric_components(m));
        for x in m.carrier().points() {
            let finite: PointSet = m.carrier().points().filter(|&y| m.d(x, y).is_finite()).collect();
            assert_eq!(p.g(x), &finite, "galaxy is the finite-distance set");
        }
        let all_finite = m.carrier().points().all(|x| m.carrier().points().all(|y| m.d(x, y).is_finite()));
        assert_eq!(p.is_connected(), all_finite);
        p
    }

    /// `{B ∩ A | B bounded}` on the carrier `A` (labels kept, order kept).
    pub fn subspace(&self, a: &PointSet) -> crate::Result<Prebornology> {
        let c = self.carrier();
        c.check_set(a)?;
        let pts: Vec<Point> = a.iter().copied().collect();
        let sub = Carrier::new(pts.iter().map(|&p| c.label(p).to_string()))?;
        let assignment: Vec<usize> = pts.iter().map(|&p| self.galaxies.block_index(p)).collect();
        let result = Prebornology::from_partition(Partition::from_assignment(&sub, &assignment)?);
        for (i, &p) in pts.iter().enumerate() {
            let expected: PointSet =
                self.g(p).intersection(a).map(|q| pts.binary_search(q).expect("q is in A")).collect();
            assert_eq!(result.g(i), &expected, "subspace galaxy law");
        }
        if self.is_connected() {
            assert!(result.is_connected());
        }
        Ok(result)
    }

    /// Intersection of a nonempty list of prebornologies on one carrier.
    pub fn intersect(list: &[Prebornology]) -> crate::Result<Prebornology> {
        let (first, rest) =
            list.split_first().ok_or_else(|| Error::Precondition("intersection of an empty list".into()))?;
        let mut meet = first.galaxies.clone();
        for p in rest {
            meet = partition_meet(&meet, &p.galaxies)?;
        }
        let result = Prebornology::from_partition(meet);
        for x in first.carrier().points() {
            let expected = list
                .iter()
                .map(|p| p.g(x).clone())
                .reduce(|a, b| a.intersection(&b).copied().collect())
                .expect("nonempty");
            assert_eq!(result.g(x), &expected, "intersection galaxy law");
        }
        if list.iter().all(|p| p.is_connected()) {
            assert!(result.is_connected());
        }
        Ok(result)
    }

    /// The smallest bornology containing this prebornology.
    pub fn smallest_bornology(&self) -> Prebornology {
        let result = Prebornology::maximal(self.carrier());
        let union_of_galaxies: PointSet = self.carrier().points().flat_map(|y| self.g(y).iter().copied()).collect();
        for x in self.carrier().points() {
            assert_eq!(result.g(x), &union_of_galaxies, "smallest bornology galaxy law");
        }
        for b in self.blocks() {
            assert!(result.is_bounded(b));
        }
        result
    }

    /// Product prebornology: `B` is bounded iff every projection is.
    pub fn product(list: &[Prebornology]) -> crate::Result<Prebornology> {
        if list.is_empty() {
            return Err(Error::Precondition("product of an empty list".into()));
        }
        let carriers: Vec<&Carrier> = list.iter().map(|p| p.carrier()).collect();
        let (carrier, coords) = product_carrier(&carriers);
        let key =
            |c: &Vec<Point>| -> Vec<usize> { c.iter().zip(list).map(|(&p, b)| b.galaxies.block_index(p)).collect() };
        let keys: Vec<Vec<usize>> = coords.iter().map(key).collect();
        let mut ids: Vec<Vec<usize>> = keys.clone();
        ids.sort();
        ids.dedup();
        let assignment: Vec<usize> = keys.iter().map(|k| ids.binary_search(k).expect("present")).collect();
        let result = Prebornology::from_partition(Partition::from_assignment(&carrier, &assignment)?);
        for (x, cx) in coords.iter().enumerate() {
            let expected: PointSet = coords
                .iter()
                .enumerate()
                .filter(|(_, cy)| cy.iter().zip(cx).zip(list).all(|((a, b), p)| p.g(*b).contains(a)))
                .map(|(y, _)| y)
                .collect();
            assert_eq!(result.g(x), &expected, "product galaxy law");
            for (y, cy) in coords.iter().enumerate() {
                let projections_bounded =
                    list.iter().enumerate().all(|(i, p)| p.is_bounded(&PointSet::from([cx[i], cy[i]])));
                assert_eq!(result.is_bounded(&PointSet::from([x, y])), projections_bounded);
            }
        }
        if list.iter().all(|p| p.is_connected()) {
            assert!(result.is_connected());
        }
        Ok(result)
    }

    /// Sum prebornology on the disjoint union.
    pub fn sum(list: &[Prebornology]) -> crate::Result<Prebornology> {
        let carriers: Vec<&Carrier> = list.iter().map(|p| p.carrier()).collect();
        let (carrier, tags) = sum_carrier(&carriers);
        let offsets: Vec<usize> = carriers
            .iter()
            .scan(0, |acc, c| {
                let o = *acc;
                *acc += c.len();
                Some(o)
            })
            .collect();
        let mut blocks = Vec::new();
        for (i, p) in list.iter().enumerate() {
            for b in p.blocks() {
                blocks.push(b.iter().map(|&q| q + offsets[i]).collect::<PointSet>());
            }
        }
        let result = Prebornology::from_partition(Partition::new(&carrier, blocks)?);
        for (x, &(i, p)) in tags.iter().enumerate() {
            let expected: PointSet = list[i].g(p).iter().map(|&q| q + offsets[i]).collect();
            assert_eq!(result.g(x), &expected, "sum galaxy law");
        }
        if list.iter().filter(|p| !p.carrier().is_empty()).count() >= 2 {
            assert!(!result.is_connected());
        }
        Ok(result)
    }
}

impl fmt::Display for Prebornology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.galaxies.fmt_blocks())
    }
}

/// Checks the three prebornology axioms and returns the canonical form.
pub fn validate_family(f: &SetFamily) -> Result<Prebornology, BornoError> {
    let c = &f.carrier;
    let mut violations = Vec::new();
    if f.members.is_empty() {
        violations.push(FamilyViolation::Empty);
    }
    if let Some(point) = c.points().find(|x| !f.members.iter().any(|m| m.contains(x))) {
        violations.push(FamilyViolation::Cover { point });
    }
    'down: for m in &f.members {
        for &x in m {
            let mut smaller = m.clone();
            smaller.remove(&x);
            if !f.members.contains(&smaller) {
                violations.push(FamilyViolation::DownwardClosed { member: m.clone(), missing: smaller });
                break 'down;
            }
        }
    }
    'union: for (i, a) in f.members.iter().enumerate() {
        for b in f.members.iter().skip(i + 1) {
            if a.is_disjoint(b) {
                continue;
            }
            let u: PointSet = a.union(b).copied().collect();
            if !f.members.contains(&u) {
                violations.push(FamilyViolation::OverlapUnion { left: a.clone(), right: b.clone() });
                break 'union;
            }
        }
    }
    if !violations.is_empty() {
        return Err(BornoError::Family(violations));
    }
    let p = Prebornology::from_generators(c, &f.members.iter().cloned().collect::<Vec<_>>())?;
    assert_finite_collapse(f, &p);
    Ok(p)
}

/// Asserts `members = {∅} ∪ {nonempty subsets of one block}`.
fn assert_finite_collapse(f: &SetFamily, p: &Prebornology) {
    assert!(f.members.iter().all(|m| p.galaxies.within_block(m)), "member straddles blocks");
    let expected: Option<u128> = p.blocks().iter().try_fold(1u128, |acc, b| {
        let sub = 1u128.checked_shl(b.len() as u32)?.checked_sub(1)?;
        acc.checked_add(sub)
    });
    assert_eq!(Some(f.members.len() as u128), expected, "family is not the full subsets-of-blocks family");
}

/// A candidate galaxy map `point -> subset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalaxyMapSpec {
    carrier: Carrier,
    g: Vec<PointSet>,
}

impl GalaxyMapSpec {
    pub fn new(carrier: &Carrier, g: Vec<PointSet>) -> crate::Result<Self> {
        if g.len() != carrier.len() {
            return Err(Error::Precondition("galaxy map must assign a set to every point".into()));
        }
        for s in &g {
            carrier.check_set(s)?;
        }
        Ok(GalaxyMapSpec { carrier: carrier.clone(), g })
    }

    pub fn constant(carrier: &Carrier, s: &PointSet) -> crate::Result<Self> {
        GalaxyMapSpec::new(carrier, vec![s.clone(); carrier.len()])
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn at(&self, x: Point) -> &PointSet {
        &self.g[x]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalaxyMapReport {
    /// Every subset of a finite carrier is galactic; always true.
    pub pointwise_galactic: bool,
    pub reflexive: Result<(), GalaxyViolation>,
    pub overlap_equal: Result<(), GalaxyViolation>,
}

impl GalaxyMapReport {
    pub fn all_hold(&self) -> bool {
        self.pointwise_galactic && self.reflexive.is_ok() && self.overlap_equal.is_ok()
    }
}

pub fn galaxy_map_properties(gm: &GalaxyMapSpec) -> GalaxyMapReport {
    let c = &gm.carrier;
    let reflexive = match c.points().find(|&x| !gm.g[x].contains(&x)) {
        Some(x) => Err(GalaxyViolation::NotReflexive { x }),
        None => Ok(()),
    };
    let mut overlap_equal = Ok(());
    'outer: for x in c.points() {
        for y in c.points() {
            let meets = !gm.g[x].is_disjoint(&gm.g[y]);
            if meets != (gm.g[x] == gm.g[y]) {
                overlap_equal = Err(GalaxyViolation::OverlapNotEqual { x, y });
                break 'outer;
            }
        }
    }
    GalaxyMapReport { pointwise_galactic: true, reflexive, overlap_equal }
}

/// The unique prebornology whose galaxy map is `gm`.
pub fn reconstruct_from_galaxy(gm: &GalaxyMapSpec) -> Result<Prebornology, BornoError> {
    let report = galaxy_map_properties(gm);
    report.reflexive.clone().map_err(BornoError::Galaxy)?;
    report.overlap_equal.clone().map_err(BornoError::Galaxy)?;
    // BN(x) = { B | x ∈ B ⊆ G(x) }; the largest such B is G(x) itself.
    let gens: Vec<PointSet> = gm.g.clone();
    let p = Prebornology::from_generators(&gm.carrier, &gens)?;
    for x in gm.carrier.points() {
        assert_eq!(p.g(x), &gm.g[x], "galaxy round trip");
    }
    Ok(p)
}

/// Builds the prebornology with the given bounded-neighbourhood systems.
pub fn from_bn_system(bn: &[SetFamily]) -> Result<Prebornology, BornoError> {
    let carrier = match bn.first() {
        Some(f) => f.carrier.clone(),
        None => Carrier::standard(0),
    };
    if bn.len() != carrier.len() || bn.iter().any(|f| f.carrier != carrier) {
        return Err(Error::CarrierMismatch("one system per carrier point is required".into()).into());
    }
    let mut violations = Vec::new();
    for (x, fam) in bn.iter().enumerate() {
        if fam.members.is_empty() {
            violations.push(BnViolation::Empty { x });
        }
        if let Some(set) = fam.members.iter().find(|s| !s.contains(&x)) {
            violations.push(BnViolation::ContainsPoint { x, set: set.clone() });
        }
        'down: for set in fam.members.iter().filter(|s| s.contains(&x)) {
            for &z in set.iter().filter(|&&z| z != x) {
                let mut subset = set.clone();
                subset.remove(&z);
                if !fam.members.contains(&subset) {
                    violations.push(BnViolation::Downward { x, set: set.clone(), subset });
                    break 'down;
                }
            }
        }
        'union: for a in &fam.members {
            for b in &fam.members {
                if !fam.members.contains(&a.union(b).copied().collect::<PointSet>()) {
                    violations.push(BnViolation::Union { x, a: a.clone(), b: b.clone() });
                    break 'union;
                }
            }
        }
        'transfer: for set in &fam.members {
            for &y in set {
                if y < bn.len() && !bn[y].members.contains(set) {
                    violations.push(BnViolation::Transfer { x, set: set.clone(), y });
                    break 'transfer;
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(BornoError::Bn(violations));
    }
    let mut members: BTreeSet<PointSet> = bn.iter().flat_map(|f| f.members.iter().cloned()).collect();
    members.insert(PointSet::new());
    let family = SetFamily { carrier: carrier.clone(), members };
    let p = validate_family(&family)?;
    for (x, fam) in bn.iter().enumerate() {
        let bnx: BTreeSet<PointSet> = p.bounded_sets_containing(x).into_iter().collect();
        assert_eq!(&bnx, &fam.members, "BN round trip");
    }
    Ok(p)
}

/// `BN_X(x)` for every point, as set families.
pub fn bn_system(p: &Prebornology) -> Vec<SetFamily> {
    p.carrier()
        .points()
        .map(|x| SetFamily::new(p.carrier(), p.bounded_sets_containing(x)).expect("in carrier"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{all_partitions, Dist};
    use num_rational::BigRational;

    fn abc() -> Carrier {
        Carrier::standard(3)
    }

    fn set(c: &Carrier, l: &[&str]) -> PointSet {
        c.set(l).unwrap()
    }

    fn ab_c(c: &Carrier) -> Prebornology {
        Prebornology::from_partition(Partition::from_labels(c, &[vec!["a", "b"], vec!["c"]]).unwrap())
    }

    #[test]
    fn validate_power_set_is_maximal() {
        let c = Carrier::standard(2);
        let f = SetFamily::from_labels(&c, &[vec![], vec!["a"], vec!["b"], vec!["a", "b"]]).unwrap();
        let p = validate_family(&f).unwrap();
        assert_eq!(p, Prebornology::maximal(&c));
        assert!(c.points().all(|x| p.galaxy(x).unwrap() == c.all()));
    }

    #[test]
    fn validate_discrete_family() {
        let c = abc();
        let f = SetFamily::from_labels(&c, &[vec![], vec!["a"], vec!["b"], vec!["c"]]).unwrap();
        assert_eq!(validate_family(&f).unwrap(), Prebornology::discrete(&c));
    }

    #[test]
    fn validate_reports_overlap_witness() {
        let c = abc();
        let f = SetFamily::from_labels(&c, &[vec![], vec!["a"], vec!["b"], vec!["c"], vec!["a", "b"], vec!["b", "c"]])
            .unwrap();
        let err = validate_family(&f).unwrap_err();
        assert_eq!(
            err,
            BornoError::Family(vec![FamilyViolation::OverlapUnion {
                left: set(&c, &["a", "b"]),
                right: set(&c, &["b", "c"]),
            }])
        );
    }

    #[test]
    fn validate_reports_cover_and_downward() {
        let c = abc();
        let f = SetFamily::from_labels(&c, &[vec![], vec!["a", "b"]]).unwrap();
        let BornoError::Family(v) = validate_family(&f).unwrap_err() else { panic!() };
        assert_eq!(v.len(), 2);
        assert_eq!(v[0], FamilyViolation::Cover { point: 2 });
        assert!(matches!(v[1], FamilyViolation::DownwardClosed { .. }));
    }

    #[test]
    fn generators() {
        let ab = Carrier::standard(2);
        assert_eq!(Prebornology::from_generators(&ab, &[]).unwrap(), Prebornology::discrete(&ab));
        let c = abc();
        assert_eq!(Prebornology::from_generators(&c, &[set(&c, &["a", "b"])]).unwrap(), ab_c(&c));
        assert_eq!(
            Prebornology::from_generators(&c, &[set(&c, &["a", "b"]), set(&c, &["b", "c"])]).unwrap(),
            Prebornology::maximal(&c)
        );
        assert!(Prebornology::from_generators(&c, &[PointSet::from([7])]).is_err());
    }

    #[test]
    fn boundedness() {
        let c = abc();
        let p = ab_c(&c);
        assert!(p.is_bounded(&PointSet::new()));
        assert!(p.is_bounded(&set(&c, &["a", "b"])));
        assert!(!p.is_bounded(&set(&c, &["a", "c"])));
        let m = Prebornology::maximal(&c);
        assert!(crate::foundations::subsets_of(&c.all()).iter().all(|s| m.is_bounded(s)));
    }

    #[test]
    fn galaxies() {
        let c = abc();
        assert_eq!(Prebornology::discrete(&c).galaxy(1).unwrap(), PointSet::from([1]));
        assert_eq!(Prebornology::maximal(&c).galaxy(1).unwrap(), c.all());
        assert_eq!(ab_c(&c).galaxy(0).unwrap(), set(&c, &["a", "b"]));
        assert!(ab_c(&c).galaxy(9).is_err());
    }

    #[test]
    fn galaxy_map_property_examples() {
        let c = Carrier::standard(2);
        assert!(galaxy_map_properties(&GalaxyMapSpec::constant(&c, &c.all()).unwrap()).all_hold());
        let singletons = GalaxyMapSpec::new(&c, vec![set(&c, &["a"]), set(&c, &["b"])]).unwrap();
        assert!(galaxy_map_properties(&singletons).all_hold());
        let bad = GalaxyMapSpec::new(&c, vec![set(&c, &["a", "b"]), set(&c, &["b"])]).unwrap();
        let r = galaxy_map_properties(&bad);
        assert!(r.reflexive.is_ok());
        assert_eq!(r.overlap_equal, Err(GalaxyViolation::OverlapNotEqual { x: 0, y: 1 }));
        assert!(matches!(reconstruct_from_galaxy(&bad), Err(BornoError::Galaxy(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let c = abc();
        let singletons = GalaxyMapSpec::new(&c, c.points().map(|x| PointSet::from([x])).collect()).unwrap();
        assert_eq!(reconstruct_from_galaxy(&singletons).unwrap(), Prebornology::discrete(&c));
        let constant = GalaxyMapSpec::constant(&c, &c.all()).unwrap();
        assert_eq!(reconstruct_from_galaxy(&constant).unwrap(), Prebornology::maximal(&c));
        // a constant map that misses a point is not reflexive
        let short = GalaxyMapSpec::constant(&c, &set(&c, &["a", "b"])).unwrap();
        assert!(matches!(
            reconstruct_from_galaxy(&short),
            Err(BornoError::Galaxy(GalaxyViolation::NotReflexive { x: 2 }))
        ));
    }

    #[test]
    fn galaxy_round_trip_all_partitions() {
        for n in 0..=4 {
            let c = Carrier::standard(n);
            for part in all_partitions(&c) {
                let p = Prebornology::from_partition(part);
                assert_eq!(reconstruct_from_galaxy(&p.galaxy_map()).unwrap(), p);
                assert_eq!(from_bn_system(&bn_system(&p)).unwrap(), p);
            }
        }
    }

    #[test]
    fn bn_examples() {
        let c = abc();
        let singletons: Vec<SetFamily> =
            c.points().map(|x| SetFamily::new(&c, [PointSet::from([x])]).unwrap()).collect();
        assert_eq!(from_bn_system(&singletons).unwrap(), Prebornology::discrete(&c));
        let containing: Vec<SetFamily> = c
            .points()
            .map(|x| SetFamily::new(&c, subsets_of(&c.all()).into_iter().filter(|s| s.contains(&x))).unwrap())
            .collect();
        assert_eq!(from_bn_system(&containing).unwrap(), Prebornology::maximal(&c));

        let ab = Carrier::standard(2);
        let bn = vec![
            SetFamily::from_labels(&ab, &[vec!["a"], vec!["a", "b"]]).unwrap(),
            SetFamily::from_labels(&ab, &[vec!["b"]]).unwrap(),
        ];
        assert_eq!(
            from_bn_system(&bn).unwrap_err(),
            BornoError::Bn(vec![BnViolation::Transfer { x: 0, set: set(&ab, &["a", "b"]), y: 1 }])
        );
    }

    #[test]
    fn connectedness() {
        let c = abc();
        assert!(Prebornology::maximal(&c).is_connected());
        assert!(!Prebornology::discrete(&c).is_connected());
        assert!(Prebornology::discrete(&Carrier::standard(1)).is_connected());
        assert!(!ab_c(&c).is_connected());
    }

    #[test]
    fn degenerate_constructions_are_maximal() {
        let c = abc();
        assert_eq!(Prebornology::finite_bornology(&c), Prebornology::maximal(&c));
        let t = FiniteTopology::discrete(&c);
        assert_eq!(Prebornology::compact_bornology(&t), Prebornology::maximal(&c));
        assert_eq!(Prebornology::relatively_compact_bornology(&t), Prebornology::maximal(&c));
    }

    #[test]
    fn bounded_bornology_components() {
        let c = abc();
        let one = Dist::Finite(BigRational::from_integer(1.into()));
        let m = PseudometricInf::from_entries(&c, &[(0, 1, one)]).unwrap();
        assert_eq!(Prebornology::bounded_bornology(&m), ab_c(&c));
    }

    #[test]
    fn subspace_example() {
        let c = abc();
        let sub = ab_c(&c).subspace(&set(&c, &["a", "c"])).unwrap();
        assert_eq!(sub.carrier().labels(), &["a".to_string(), "c".to_string()]);
        assert_eq!(sub, Prebornology::discrete(sub.carrier()));
    }

    /// Brute force: a subset of the product is bounded iff both projections are.
    #[test]
    fn product_example_against_brute_force() {
        let x = Carrier::standard(2);
        let y = Carrier::new(["u", "v"]).unwrap();
        let p = Prebornology::maximal(&x);
        let q = Prebornology::discrete(&y);
        let prod = Prebornology::product(&[p.clone(), q.clone()]).unwrap();
        let pc = prod.carrier().clone();
        assert_eq!(
            prod.partition(),
            &Partition::from_labels(&pc, &[vec!["(a,u)", "(b,u)"], vec!["(a,v)", "(b,v)"]]).unwrap()
        );
        for s in subsets_of(&pc.all()) {
            let px: PointSet = s.iter().map(|&i| i / 2).collect();
            let py: PointSet = s.iter().map(|&i| i % 2).collect();
            assert_eq!(prod.is_bounded(&s), p.is_bounded(&px) && q.is_bounded(&py));
        }
    }

    #[test]
    fn sum_is_disconnected() {
        let a = Prebornology::maximal(&Carrier::standard(2));
        let s = Prebornology::sum(&[a.clone(), a]).unwrap();
        assert_eq!(s.carrier().len(), 4);
        assert!(!s.is_connected());
        assert_eq!(s.blocks().len(), 2);
    }

    #[test]
    fn intersection_and_smallest_bornology() {
        let c = abc();
        let p = ab_c(&c);
        let q = Prebornology::from_partition(Partition::from_labels(&c, &[vec!["a"], vec!["b", "c"]]).unwrap());
        assert_eq!(Prebornology::intersect(&[p.clone(), q]).unwrap(), Prebornology::discrete(&c));
        assert_eq!(p.smallest_bornology(), Prebornology::maximal(&c));
        assert!(Prebornology::intersect(&[]).is_err());
    }

    #[test]
    fn constructions_hold_galaxy_laws_for_small_components() {
        for n in 1..=3 {
            let c = Carrier::standard(n);
            let parts = all_partitions(&c);
            for a in &parts {
                let pa = Prebornology::from_partition(a.clone());
                pa.smallest_bornology();
                for s in subsets_of(&c.all()) {
                    pa.subspace(&s).unwrap();
                }
                for b in &parts {
                    let pb = Prebornology::from_partition(b.clone());
                    Prebornology::intersect(&[pa.clone(), pb.clone()]).unwrap();
                    Prebornology::product(&[pa.clone(), pb.clone()]).unwrap();
                    Prebornology::sum(&[pa.clone(), pb]).unwrap();
                }
            }
        }
    }
}
