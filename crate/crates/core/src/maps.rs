//! Property checkers for maps and families of maps between finite spaces.
//!
//! Each checker evaluates the definition and the galaxy (or closeness)
//! characterisation independently. [`Verdict::holds`] panics if they differ.

use std::fmt;

use crate::borno::{Prebornology, ENUMERATION_LIMIT};
use crate::coarse::{induced_prebornology, CoarseStructure};
use crate::error::Error;
use crate::foundations::{subsets_of, Carrier, FiniteTopology, FiniteUniformity, Point, PointSet, Relation};

/// A total function between carriers, stored as its table.
#[derive(Clone, PartialEq, Eq)]
pub struct PointMap {
    source: Carrier,
    target: Carrier,
    graph: Vec<Point>,
}

impl PointMap {
    pub fn new(source: &Carrier, target: &Carrier, graph: Vec<Point>) -> crate::Result<Self> {
        if graph.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "table has {} entries for {} source points",
                graph.len(),
                source.len()
            )));
        }
        for &y in &graph {
            target.check_point(y)?;
        }
        Ok(PointMap { source: source.clone(), target: target.clone(), graph })
    }

    pub fn from_labels<S: AsRef<str>>(source: &Carrier, target: &Carrier, pairs: &[(S, S)]) -> crate::Result<Self> {
        let mut graph = vec![None; source.len()];
        for (x, y) in pairs {
            let x = source.point(x.as_ref())?;
            if graph[x].replace(target.point(y.as_ref())?).is_some() {
                return Err(Error::InvalidMap(format!("`{}` is assigned twice", source.label(x))));
            }
        }
        let graph = graph
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| Error::InvalidMap(format!("`{}` has no image", source.label(x)))))
            .collect::<crate::Result<Vec<_>>>()?;
        PointMap::new(source, target, graph)
    }

    pub fn identity(c: &Carrier) -> Self {
        PointMap { source: c.clone(), target: c.clone(), graph: c.points().collect() }
    }

    pub fn constant(source: &Carrier, target: &Carrier, y: Point) -> crate::Result<Self> {
        PointMap::new(source, target, vec![y; source.len()])
    }

    /// Every map `source → target`, in lexicographic order of tables.
    pub fn all(source: &Carrier, target: &Carrier) -> impl Iterator<Item = PointMap> {
        let (s, t) = (source.clone(), target.clone());
        let n = s.len();
        let m = t.len();
        let total = if n == 0 {
            1
        } else if m == 0 {
            0
        } else {
            m.pow(n as u32)
        };
        (0..total).map(move |mut code| {
            let mut graph = vec![0; n];
            for slot in graph.iter_mut().rev() {
                *slot = code % m.max(1);
                code /= m.max(1);
            }
            PointMap { source: s.clone(), target: t.clone(), graph }
        })
    }

    pub fn source(&self) -> &Carrier {
        &self.source
    }

    pub fn target(&self) -> &Carrier {
        &self.target
    }

    pub fn graph(&self) -> &[Point] {
        &self.graph
    }

    pub fn apply(&self, x: Point) -> Point {
        self.graph[x]
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        s.iter().map(|&x| self.graph[x]).collect()
    }

    pub fn preimage(&self, s: &PointSet) -> PointSet {
        self.source.points().filter(|&x| s.contains(&self.graph[x])).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PointMap) -> crate::Result<PointMap> {
        self.source.ensure_same(&other.target, "map composition")?;
        Ok(PointMap {
            source: other.source.clone(),
            target: self.target.clone(),
            graph: other.graph.iter().map(|&y| self.graph[y]).collect(),
        })
    }

    fn check(&self, p: &Carrier, q: &Carrier) -> crate::Result<()> {
        self.source.ensure_same(p, "map source")?;
        self.target.ensure_same(q, "map target")
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .graph
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.source.label(x), self.target.label(y)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A finite list of maps with common source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFamily {
    source: Carrier,
    target: Carrier,
    maps: Vec<PointMap>,
}

impl MapFamily {
    pub fn new(source: &Carrier, target: &Carrier, maps: Vec<PointMap>) -> crate::Result<Self> {
        for m in &maps {
            m.check(source, target)?;
        }
        Ok(MapFamily { source: source.clone(), target: target.clone(), maps })
    }

    pub fn maps(&self) -> &[PointMap] {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `𝓕(B) = ⋃_f f(B)`.
    pub fn image(&self, s: &PointSet) -> PointSet {
        self.maps.iter().flat_map(|m| m.image(s)).collect()
    }

    fn require_nonempty(&self) -> crate::Result<()> {
        if self.maps.is_empty() {
            return Err(Error::Precondition("the family of maps must be nonempty".into()));
        }
        Ok(())
    }
}

/// Evidence attached to a failing verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    SourcePoint(Point),
    SourceSet(PointSet),
    TargetSet(PointSet),
    SourcePair(Point, Point),
    TargetPair(Point, Point),
    /// Map number `map` separates the close pair `(x, y)`.
    MapPair {
        map: usize,
        x: Point,
        y: Point,
    },
}

impl Witness {
    pub fn describe(&self, source: &Carrier, target: &Carrier) -> String {
        match self {
            Witness::SourcePoint(x) => format!("at `{}`", source.label(*x)),
            Witness::SourceSet(s) => format!("source set {}", source.fmt_set(s)),
            Witness::TargetSet(s) => format!("target set {}", target.fmt_set(s)),
            Witness::SourcePair(x, y) => format!("source pair {}", source.fmt_pair((*x, *y))),
            Witness::TargetPair(x, y) => format!("target pair {}", target.fmt_pair((*x, *y))),
            Witness::MapPair { map, x, y } => format!("map #{map} on pair {}", source.fmt_pair((*x, *y))),
        }
    }
}

/// Result of a two-sided check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// Computed from the definition.
    pub definition: bool,
    /// Computed from the galaxy or closeness characterisation.
    pub characterisation: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(definition: bool, characterisation: bool, witness: Option<Witness>) -> Self {
        Verdict { definition, characterisation, witness }
    }

    pub fn agree(&self) -> bool {
        self.definition == self.characterisation
    }

    /// The common value. Panics if the two sides disagree.
    pub fn holds(&self) -> bool {
        assert!(self.agree(), "definition and characterisation disagree: {self:?}");
        self.definition
    }

    pub fn describe(&self, source: &Carrier, target: &Carrier) -> String {
        match (&self.witness, self.agree()) {
            (_, false) => {
                format!("sides disagree (definition {}, characterisation {})", self.definition, self.characterisation)
            }
            (None, true) => self.definition.to_string(),
            (Some(w), true) => format!("{} ({})", self.definition, w.describe(source, target)),
        }
    }
}

/// A checked instance of `hypothesis ⇒ conclusion`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Implication {
    pub hypothesis: bool,
    pub conclusion: bool,
}

impl Implication {
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

/// Bounded sets containing `x` used by definition-side checks: all of them
/// for small galaxies, otherwise the galaxy alone (the largest one).
fn bn_candidates(p: &Prebornology, x: Point) -> Vec<PointSet> {
    let g = p.partition().block(x);
    if g.len() <= ENUMERATION_LIMIT {
        p.bounded_sets_containing(x)
    } else {
        vec![g.clone()]
    }
}

fn bounded_candidates(p: &Prebornology) -> Vec<PointSet> {
    if p.blocks().iter().all(|b| b.len() <= ENUMERATION_LIMIT) {
        p.bounded_sets()
    } else {
        std::iter::once(PointSet::new()).chain(p.blocks().iter().cloned()).collect()
    }
}

fn points_for(c: &Carrier, at: Option<Point>) -> crate::Result<Vec<Point>> {
    match at {
        Some(x) => {
            c.check_point(x)?;
            Ok(vec![x])
        }
        None => Ok(c.points().collect()),
    }
}

/// `f` maps every bounded set containing a point to a bounded set.
pub fn is_bornological(f: &PointMap, p: &Prebornology, q: &Prebornology) -> crate::Result<Verdict> {
    is_bornological_at(f, p, q, None)
}

pub fn is_bornological_at(
    f: &PointMap,
    p: &Prebornology,
    q: &Prebornology,
    at: Option<Point>,
) -> crate::Result<Verdict> {
    f.check(p.carrier(), q.carrier())?;
    let pts = points_for(p.carrier(), at)?;
    let mut witness = None;
    let definition = pts.iter().all(|&x| {
        bn_candidates(p, x).into_iter().all(|b| {
            let ok = q.is_bounded(&f.image(&b));
            if !ok {
                witness = Some(Witness::SourceSet(b));
            }
            ok
        })
    });
    let characterisation =
        pts.iter().all(|&x| f.image(p.partition().block(x)).is_subset(q.partition().block(f.apply(x))));
    Ok(Verdict::new(definition, characterisation, witness))
}

/// Preimages of bounded sets are bounded.
pub fn is_proper(f: &PointMap, p: &Prebornology, q: &Prebornology) -> crate::Result<Verdict> {
    f.check(p.carrier(), q.carrier())?;
    let mut witness = None;
    let definition = bounded_candidates(q).into_iter().all(|b| {
        let ok = p.is_bounded(&f.preimage(&b));
        if !ok {
            witness = Some(Witness::TargetSet(b));
        }
        ok
    });
    let characterisation =
        p.carrier().points().all(|x| f.preimage(q.partition().block(f.apply(x))).is_subset(p.partition().block(x)));
    Ok(Verdict::new(definition, characterisation, witness))
}

/// Finite and infinite points. Every point of a finite carrier lies in its
/// own galaxy, so `INF` is always empty here.
pub fn fin_inf(p: &Prebornology) -> (PointSet, PointSet) {
    let c = p.carrier();
    let fin: PointSet = c.points().filter(|&x| c.points().any(|x2| p.partition().block(x2).contains(&x))).collect();
    let union: PointSet = c.points().flat_map(|x| p.partition().block(x).iter().copied()).collect();
    assert_eq!(fin, union, "FIN is the union of galaxies");
    let inf: PointSet = c.all().difference(&fin).copied().collect();
    assert!(inf.is_empty(), "cover axiom leaves no infinite points");
    (fin, inf)
}

/// `𝓕(x)` is bounded for every point.
pub fn simply_bounded(fam: &MapFamily, p: &Prebornology, q: &Prebornology) -> crate::Result<Verdict> {
    fam.source.ensure_same(p.carrier(), "family source")?;
    fam.target.ensure_same(q.carrier(), "family target")?;
    fam.require_nonempty()?;
    let c = p.carrier();
    let mut witness = None;
    let definition = c.points().all(|x| {
        let ok = q.is_bounded(&fam.image(&PointSet::from([x])));
        if !ok {
            witness = Some(Witness::SourcePoint(x));
        }
        ok
    });
    let characterisation = c.points().all(|x| {
        let fx = fam.image(&PointSet::from([x]));
        q.carrier().points().any(|y| fx.is_subset(q.partition().block(y)))
    });
    Ok(Verdict::new(definition, characterisation, witness))
}

/// `𝓕(B)` is bounded for every bounded `B`.
pub fn equibounded(fam: &MapFamily, p: &Prebornology, q: &Prebornology) -> crate::Result<Verdict> {
    let simple = simply_bounded(fam, p, q)?;
    let mut witness = None;
    let definition = bounded_candidates(p).into_iter().all(|b| {
        let ok = q.is_bounded(&fam.image(&b));
        if !ok {
            witness = Some(Witness::SourceSet(b));
        }
        ok
    });
    let characterisation = p.carrier().points().all(|x| {
        let fg = fam.image(p.partition().block(x));
        q.carrier().points().any(|y| fg.is_subset(q.partition().block(y)))
    });
    let v = Verdict::new(definition, characterisation, witness);
    if v.holds() {
        assert!(simple.holds(), "equibounded implies simply bounded");
    }
    Ok(v)
}

/// Controlled sets used by definition-side coarse checks: all of them for
/// small structures, otherwise each single pair and the closeness itself.
fn controlled_candidates(c: &CoarseStructure) -> Vec<Relation> {
    if c.closeness().len() <= 10 {
        c.controlled_sets()
    } else {
        let car = c.carrier();
        c.closeness()
            .pairs()
            .iter()
            .map(|&p| Relation::new(car, [p]).expect("in carrier"))
            .chain(std::iter::once(c.closeness().clone()))
            .collect()
    }
}

fn image_relation(f: &PointMap, e: &Relation) -> Relation {
    Relation::new(f.target(), e.pairs().iter().map(|&(x, y)| (f.apply(x), f.apply(y)))).expect("in target")
}

/// `(f × f)(E)` is controlled for every controlled `E`.
pub fn is_bornologous(f: &PointMap, c: &CoarseStructure, d: &CoarseStructure) -> crate::Result<Verdict> {
    f.check(c.carrier(), d.carrier())?;
    let mut witness = None;
    let definition = controlled_candidates(c).iter().all(|e| image_relation(f, e).is_subset(d.closeness()));
    let characterisation = c.closeness().pairs().iter().all(|&(x, y)| {
        let ok = d.closeness().contains(f.apply(x), f.apply(y));
        if !ok && witness.is_none() {
            witness = Some(Witness::SourcePair(x, y));
        }
        ok
    });
    let classes = c.classes();
    let class_images = classes.blocks().iter().all(|b| d.classes().within_block(&f.image(b)));
    assert_eq!(class_images, characterisation, "class-image test disagrees");
    Ok(Verdict::new(definition, characterisation, witness))
}

pub fn bornologous_implies_bornological(
    f: &PointMap,
    c: &CoarseStructure,
    d: &CoarseStructure,
) -> crate::Result<Implication> {
    let hypothesis = is_bornologous(f, c, d)?.holds();
    let conclusion = is_bornological(f, &induced_prebornology(c), &induced_prebornology(d))?.holds();
    let imp = Implication { hypothesis, conclusion };
    assert!(imp.holds(), "bornologous map {f:?} is not bornological");
    Ok(imp)
}

/// `{(f(x), g(x))}` is controlled.
pub fn bornotopic(f: &PointMap, g: &PointMap, d: &CoarseStructure) -> crate::Result<Verdict> {
    f.source.ensure_same(&g.source, "bornotopy sources")?;
    f.check(&f.source.clone(), d.carrier())?;
    g.check(&f.source.clone(), d.carrier())?;
    let pairs = Relation::new(d.carrier(), f.source.points().map(|x| (f.apply(x), g.apply(x))))?;
    let definition = d.is_controlled(&pairs)?;
    let bad = f.source.points().find(|&x| !d.closeness().contains(f.apply(x), g.apply(x)));
    Ok(Verdict::new(definition, bad.is_none(), bad.map(Witness::SourcePoint)))
}

/// The two halves of the coarse-inverse proposition for `f: X → Y`,
/// `g: Y → X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoarseInverseReport {
    /// `g` bornologous and `g ∘ f ≈ id_X` imply `f` proper.
    pub part1: Implication,
    /// `f` proper and `f ∘ g ≈ id_Y` imply `g` bornological.
    pub part2: Implication,
}

pub fn coarse_inverse_propositions(
    f: &PointMap,
    g: &PointMap,
    c: &CoarseStructure,
    d: &CoarseStructure,
) -> crate::Result<CoarseInverseReport> {
    let ux = induced_prebornology(c);
    let uy = induced_prebornology(d);
    if !ux.is_connected() {
        return Err(Error::Precondition("the source space must be connected".into()));
    }
    let gf = g.compose(f)?;
    let fg = f.compose(g)?;
    let f_proper = is_proper(f, &ux, &uy)?.holds();
    let part1 = Implication {
        hypothesis: is_bornologous(g, d, c)?.holds() && bornotopic(&gf, &PointMap::identity(c.carrier()), c)?.holds(),
        conclusion: f_proper,
    };
    let part2 = Implication {
        hypothesis: f_proper && bornotopic(&fg, &PointMap::identity(d.carrier()), d)?.holds(),
        conclusion: is_bornological(g, &uy, &ux)?.holds(),
    };
    assert!(part1.holds() && part2.holds(), "coarse-inverse proposition fails for {f:?}, {g:?}");
    Ok(CoarseInverseReport { part1, part2 })
}

/// `𝓕(E)` is controlled for every controlled `E`.
pub fn equibornologous(fam: &MapFamily, c: &CoarseStructure, d: &CoarseStructure) -> crate::Result<Verdict> {
    fam.source.ensure_same(c.carrier(), "family source")?;
    fam.target.ensure_same(d.carrier(), "family target")?;
    let definition =
        controlled_candidates(c).iter().all(|e| fam.maps.iter().all(|f| image_relation(f, e).is_subset(d.closeness())));
    let mut witness = None;
    let pointwise = fam.maps.iter().enumerate().all(|(i, f)| {
        c.closeness().pairs().iter().all(|&(x, y)| {
            let ok = d.closeness().contains(f.apply(x), f.apply(y));
            if !ok && witness.is_none() {
                witness = Some(Witness::MapPair { map: i, x, y });
            }
            ok
        })
    });
    Ok(Verdict::new(definition, pointwise, witness))
}

/// Every point (or just `at`) has a bounded neighbourhood.
pub fn locally_bounded_space(t: &FiniteTopology, p: &Prebornology, at: Option<Point>) -> crate::Result<Verdict> {
    t.carrier().ensure_same(p.carrier(), "topology and prebornology")?;
    let pts = points_for(p.carrier(), at)?;
    let bad_def = pts.iter().copied().find(|&x| !t.opens().iter().any(|u| u.contains(&x) && p.is_bounded(u)));
    let bad_char = pts.iter().copied().find(|&x| !t.minimal_open(x).is_subset(p.partition().block(x)));
    Ok(Verdict::new(bad_def.is_none(), bad_char.is_none(), bad_def.map(Witness::SourcePoint)))
}

/// Some neighbourhood of `x` has bounded image.
pub fn locally_bounded_map(
    f: &PointMap,
    t: &FiniteTopology,
    q: &Prebornology,
    at: Option<Point>,
) -> crate::Result<Verdict> {
    f.check(t.carrier(), q.carrier())?;
    let pts = points_for(t.carrier(), at)?;
    let bad_def = pts.iter().copied().find(|&x| !t.opens().iter().any(|u| u.contains(&x) && q.is_bounded(&f.image(u))));
    let bad_char =
        pts.iter().copied().find(|&x| !f.image(&t.minimal_open(x)).is_subset(q.partition().block(f.apply(x))));
    let witness = bad_def.map(|x| Witness::SourceSet(t.minimal_open(x)));
    Ok(Verdict::new(bad_def.is_none(), bad_char.is_none(), witness))
}

/// `f` is continuous at `x` iff it maps the minimal open set of `x` into
/// the minimal open set of `f(x)`.
pub fn is_continuous_at(f: &PointMap, tx: &FiniteTopology, ty: &FiniteTopology, x: Point) -> crate::Result<bool> {
    f.check(tx.carrier(), ty.carrier())?;
    tx.carrier().check_point(x)?;
    let by_monads = f.image(&tx.minimal_open(x)).is_subset(&ty.minimal_open(f.apply(x)));
    let by_opens = ty
        .opens()
        .iter()
        .filter(|v| v.contains(&f.apply(x)))
        .all(|v| tx.opens().iter().any(|u| u.contains(&x) && f.image(u).is_subset(v)));
    assert_eq!(by_monads, by_opens, "continuity characterisations disagree");
    Ok(by_monads)
}

/// Continuity at `x` into a locally bounded target implies `f` is locally
/// bounded at `x`.
pub fn continuity_corollary(
    f: &PointMap,
    tx: &FiniteTopology,
    ty: &FiniteTopology,
    q: &Prebornology,
    x: Point,
) -> crate::Result<Implication> {
    let hypothesis = is_continuous_at(f, tx, ty, x)? && locally_bounded_space(ty, q, None)?.holds();
    let conclusion = locally_bounded_map(f, tx, q, Some(x))?.holds();
    let imp = Implication { hypothesis, conclusion };
    assert!(imp.holds(), "continuity corollary fails at {x} for {f:?}");
    Ok(imp)
}

/// Finite points against nearstandard points. A finite space is compact and
/// every point is its own standard part, so both are the whole carrier.
pub fn local_compactness_corollary(t: &FiniteTopology) -> (PointSet, PointSet) {
    let c = t.carrier();
    let fin = fin_inf(&Prebornology::compact_bornology(t)).0;
    let ns: PointSet = c.points().filter(|&x| t.minimal_open(x).contains(&x)).collect();
    assert_eq!(fin, ns);
    (fin, ns)
}

/// Some entourage is controlled.
pub fn uniformly_locally_bounded(u: &FiniteUniformity, c: &CoarseStructure) -> crate::Result<Verdict> {
    u.carrier().ensure_same(c.carrier(), "uniformity and coarse structure")?;
    let car = c.carrier();
    let n = car.len();
    let definition = if n * n <= 12 {
        let all_pairs: Vec<(Point, Point)> = Relation::full(car).pairs().iter().copied().collect();
        subsets_of(&(0..all_pairs.len()).collect()).into_iter().any(|s| {
            let r = Relation::new(car, s.iter().map(|&i| all_pairs[i])).expect("in carrier");
            u.is_entourage(&r) && c.is_controlled(&r).expect("same carrier")
        })
    } else {
        [u.core().clone(), c.closeness().clone()]
            .iter()
            .any(|r| u.is_entourage(r) && c.is_controlled(r).expect("same carrier"))
    };
    let bad = u.core().pairs().iter().copied().find(|&(x, y)| !c.closeness().contains(x, y));
    Ok(Verdict::new(definition, bad.is_none(), bad.map(|(x, y)| Witness::SourcePair(x, y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::Partition;

    fn abc() -> Carrier {
        Carrier::standard(3)
    }

    fn ab_c(c: &Carrier) -> Prebornology {
        Prebornology::from_partition(Partition::from_labels(c, &[vec!["a", "b"], vec!["c"]]).unwrap())
    }

    #[test]
    fn bornological_examples() {
        let c = abc();
        let p = ab_c(&c);
        assert!(is_bornological(&PointMap::identity(&c), &p, &p).unwrap().holds());
        let u = Carrier::new(["u"]).unwrap();
        let f = PointMap::constant(&c, &u, 0).unwrap();
        assert!(is_bornological(&f, &p, &Prebornology::maximal(&u)).unwrap().holds());

        let ab = Carrier::standard(2);
        let uv = Carrier::new(["u", "v"]).unwrap();
        let f = PointMap::new(&ab, &uv, vec![0, 1]).unwrap();
        let v = is_bornological(&f, &Prebornology::maximal(&ab), &Prebornology::discrete(&uv)).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::SourceSet(ab.all())));
    }

    #[test]
    fn proper_examples() {
        let ab = Carrier::standard(2);
        let pt = Carrier::new(["pt"]).unwrap();
        let f = PointMap::constant(&ab, &pt, 0).unwrap();
        let v = is_proper(&f, &Prebornology::discrete(&ab), &Prebornology::maximal(&pt)).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::TargetSet(PointSet::from([0]))));
        let c = abc();
        let d = Prebornology::discrete(&c);
        let inj = PointMap::new(&ab, &c, vec![2, 0]).unwrap();
        assert!(is_proper(&inj, &Prebornology::discrete(&ab), &d).unwrap().holds());
    }

    #[test]
    fn fin_inf_is_trivial() {
        let c = abc();
        let (fin, inf) = fin_inf(&Prebornology::discrete(&c));
        assert_eq!(fin, c.all());
        assert!(inf.is_empty());
    }

    #[test]
    fn bounded_families() {
        let c = abc();
        let p = Prebornology::maximal(&c);
        let id = MapFamily::new(&c, &c, vec![PointMap::identity(&c)]).unwrap();
        assert!(simply_bounded(&id, &p, &p).unwrap().holds());
        assert!(equibounded(&id, &p, &p).unwrap().holds());

        let uv = Carrier::new(["u", "v"]).unwrap();
        let q = Prebornology::discrete(&uv);
        let consts = MapFamily::new(
            &c,
            &uv,
            vec![PointMap::constant(&c, &uv, 0).unwrap(), PointMap::constant(&c, &uv, 1).unwrap()],
        )
        .unwrap();
        for x in c.points() {
            let fx = consts.image(&PointSet::from([x]));
            assert!(!q.is_bounded(&fx));
        }
        assert!(!simply_bounded(&consts, &p, &q).unwrap().holds());
        assert!(!equibounded(&consts, &p, &q).unwrap().holds());

        let all = MapFamily::new(&c, &c, PointMap::all(&c, &c).collect()).unwrap();
        assert_eq!(all.maps().len(), 27);
        assert!(equibounded(&all, &p, &p).unwrap().holds());

        let empty = MapFamily::new(&c, &c, vec![]).unwrap();
        assert!(simply_bounded(&empty, &p, &p).is_err());
        assert!(equibounded(&empty, &p, &p).is_err());
    }

    #[test]
    fn bornologous_examples() {
        let c = abc();
        let s = CoarseStructure::from_closeness(
            Partition::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap().to_relation(),
        )
        .unwrap();
        assert!(is_bornologous(&PointMap::identity(&c), &s, &s).unwrap().holds());
        let f = PointMap::new(&c, &c, vec![0, 2, 1]).unwrap();
        assert!(is_bornologous(&f, &s, &CoarseStructure::maximal(&c)).unwrap().holds());
        let v = is_bornologous(&f, &s, &s).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::SourcePair(0, 1)));
    }

    #[test]
    fn bornotopy_examples() {
        let ab = Carrier::standard(2);
        let id = PointMap::identity(&ab);
        let swap = PointMap::new(&ab, &ab, vec![1, 0]).unwrap();
        let d = CoarseStructure::discrete(&ab);
        assert!(bornotopic(&id, &id, &d).unwrap().holds());
        assert!(bornotopic(&id, &swap, &CoarseStructure::maximal(&ab)).unwrap().holds());
        let v = bornotopic(&id, &swap, &d).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::SourcePoint(0)));
    }

    #[test]
    fn coarse_inverse_guard_and_identity() {
        let c = abc();
        let m = CoarseStructure::maximal(&c);
        let id = PointMap::identity(&c);
        let r = coarse_inverse_propositions(&id, &id, &m, &m).unwrap();
        assert!(r.part1.hypothesis && r.part1.conclusion && r.part2.hypothesis && r.part2.conclusion);
        let d = CoarseStructure::discrete(&c);
        assert!(coarse_inverse_propositions(&id, &id, &d, &d).is_err());
    }

    #[test]
    fn equibornologous_examples() {
        let c = abc();
        let s = CoarseStructure::from_closeness(
            Partition::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap().to_relation(),
        )
        .unwrap();
        let id = PointMap::identity(&c);
        let bad = PointMap::new(&c, &c, vec![0, 2, 1]).unwrap();
        assert!(equibornologous(&MapFamily::new(&c, &c, vec![id.clone()]).unwrap(), &s, &s).unwrap().holds());
        assert!(!equibornologous(&MapFamily::new(&c, &c, vec![id, bad]).unwrap(), &s, &s).unwrap().holds());
        assert!(equibornologous(&MapFamily::new(&c, &c, vec![]).unwrap(), &s, &s).unwrap().holds());
    }

    #[test]
    fn local_boundedness_examples() {
        let c = abc();
        let chain = FiniteTopology::new(
            &c,
            [c.set::<&str>(&[]).unwrap(), c.set(&["a"]).unwrap(), c.set(&["a", "b"]).unwrap(), c.all()],
        )
        .unwrap();
        let p = ab_c(&c);
        assert!(locally_bounded_space(&chain, &p, Some(0)).unwrap().holds());
        assert!(locally_bounded_space(&chain, &p, Some(1)).unwrap().holds());
        let v = locally_bounded_space(&chain, &p, Some(2)).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::SourcePoint(2)));
        assert!(locally_bounded_space(&chain, &Prebornology::maximal(&c), None).unwrap().holds());
        assert!(locally_bounded_space(&FiniteTopology::discrete(&c), &Prebornology::discrete(&c), None)
            .unwrap()
            .holds());

        let k = PointMap::constant(&c, &c, 2).unwrap();
        assert!(locally_bounded_map(&k, &chain, &p, None).unwrap().holds());
        let id = PointMap::identity(&c);
        assert!(locally_bounded_map(&id, &chain, &Prebornology::maximal(&c), None).unwrap().holds());
        let v = locally_bounded_map(&id, &chain, &p, Some(2)).unwrap();
        assert!(!v.holds());
        assert_eq!(v.witness, Some(Witness::SourceSet(c.all())));
    }

    #[test]
    fn uniform_examples() {
        let c = abc();
        let delta = FiniteUniformity::new(Relation::diagonal(&c)).unwrap();
        assert!(uniformly_locally_bounded(&delta, &CoarseStructure::discrete(&c)).unwrap().holds());
        let full = FiniteUniformity::new(Relation::full(&c)).unwrap();
        assert!(!uniformly_locally_bounded(&full, &CoarseStructure::discrete(&c)).unwrap().holds());
        let s = CoarseStructure::from_closeness(
            Partition::from_labels(&c, &[vec!["a", "b"], vec!["c"]]).unwrap().to_relation(),
        )
        .unwrap();
        let same = FiniteUniformity::new(s.closeness().clone()).unwrap();
        assert!(uniformly_locally_bounded(&same, &s).unwrap().holds());
    }

    #[test]
    fn map_enumeration_and_composition() {
        let ab = Carrier::standard(2);
        let c = abc();
        assert_eq!(PointMap::all(&c, &ab).count(), 8);
        assert_eq!(PointMap::all(&Carrier::standard(0), &ab).count(), 1);
        assert_eq!(PointMap::all(&ab, &Carrier::standard(0)).count(), 0);
        let f = PointMap::new(&ab, &c, vec![2, 1]).unwrap();
        let g = PointMap::new(&c, &ab, vec![0, 0, 1]).unwrap();
        assert_eq!(g.compose(&f).unwrap().graph(), &[1, 0]);
        assert!(f.compose(&f).is_err());
        assert!(PointMap::from_labels(&ab, &c, &[("a", "c")]).is_err());
    }
}
