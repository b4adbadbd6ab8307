//! Oracle-equivalence audits over many spaces and maps.
//!
//! Every checker in [`crate::maps`] computes a definition-side and a
//! characterisation-side verdict. The audits here run them over exhaustive
//! small instances or seeded random ones and tally disagreements, plus the
//! implication propositions. A panic inside a checker (one of its internal
//! cross-checks failing) is caught and recorded as a failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::borno::Prebornology;
use crate::coarse::{coarse_from_prebornology, validate_relations, CoarseStructure, Pairs, RelationFamily};
use crate::foundations::{
    all_partitions, all_topologies, Carrier, FiniteTopology, FiniteUniformity, Partition, PointSet, Relation,
};
use crate::maps::{
    bornotopic, coarse_inverse_propositions, continuity_corollary, equibornologous, equibounded, is_bornological,
    is_bornologous, is_proper, locally_bounded_map, locally_bounded_space, simply_bounded, uniformly_locally_bounded,
    MapFamily, PointMap, Verdict,
};

/// Names of the two-sided checkers, in report order.
pub const CHECKERS: [&str; 10] = [
    "bornological",
    "proper",
    "simply_bounded",
    "equibounded",
    "bornologous",
    "bornotopic",
    "equibornologous",
    "locally_bounded_space",
    "locally_bounded_map",
    "uniformly_locally_bounded",
];

/// Names of the implication checks, in report order.
pub const IMPLICATIONS: [&str; 5] = [
    "bornologous_implies_bornological",
    "equibounded_implies_simply_bounded",
    "coarse_inverse_part1",
    "coarse_inverse_part2",
    "continuity_corollary",
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub instances: u64,
    /// Disagreements for checkers; counterexamples for implications.
    pub failures: u64,
    /// Implications only: instances where the hypothesis held.
    pub hypothesis_held: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub checkers: BTreeMap<String, Tally>,
    pub implications: BTreeMap<String, Tally>,
    /// One line per failure with a replayable description.
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn new(suite: &str, seed: Option<u64>, trials: Option<u64>) -> Self {
        AuditReport {
            suite: suite.to_string(),
            seed,
            trials,
            checkers: CHECKERS.iter().map(|c| (c.to_string(), Tally::default())).collect(),
            implications: IMPLICATIONS.iter().map(|c| (c.to_string(), Tally::default())).collect(),
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.checkers.values().all(|t| t.failures == 0)
            && self.implications.values().all(|t| t.failures == 0)
    }

    pub fn instances(&self) -> u64 {
        self.checkers.values().map(|t| t.instances).sum()
    }

    pub fn disagreements(&self) -> u64 {
        self.checkers.values().map(|t| t.failures).sum()
    }

    pub fn counterexamples(&self) -> u64 {
        self.implications.values().map(|t| t.failures).sum()
    }

    fn verdict(&mut self, name: &str, v: &Verdict, replay: impl FnOnce() -> String) {
        let t = self.checkers.get_mut(name).expect("known checker");
        t.instances += 1;
        if !v.agree() {
            t.failures += 1;
            self.failures.push(format!("{name}: sides disagree on {}", replay()));
        }
    }

    fn implication(&mut self, name: &str, hypothesis: bool, conclusion: bool, replay: impl FnOnce() -> String) {
        let t = self.implications.get_mut(name).expect("known implication");
        t.instances += 1;
        if hypothesis {
            t.hypothesis_held += 1;
            if !conclusion {
                t.failures += 1;
                self.failures.push(format!("{name}: counterexample {}", replay()));
            }
        }
    }

    fn merge(&mut self, other: AuditReport) {
        for (k, t) in other.checkers {
            let mine = self.checkers.entry(k).or_default();
            mine.instances += t.instances;
            mine.failures += t.failures;
        }
        for (k, t) in other.implications {
            let mine = self.implications.entry(k).or_default();
            mine.instances += t.instances;
            mine.failures += t.failures;
            mine.hypothesis_held += t.hypothesis_held;
        }
        self.failures.extend(other.failures);
    }

    /// Runs `body`, recording a panic as a failure instead of unwinding.
    fn guarded(&mut self, what: impl FnOnce() -> String, body: impl FnOnce(&mut AuditReport)) {
        let mut scratch = AuditReport::new(&self.suite, None, None);
        match catch_unwind(AssertUnwindSafe(|| body(&mut scratch))) {
            Ok(()) => self.merge(scratch),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                self.failures.push(format!("internal check failed on {}: {msg}", what()));
            }
        }
    }
}

fn show_p(p: &Prebornology) -> String {
    p.partition().fmt_blocks()
}

fn show_t(t: &FiniteTopology) -> String {
    let sets: Vec<String> = t.opens().iter().map(|o| t.carrier().fmt_set(o)).collect();
    format!("{{{}}}", sets.join(", "))
}

/// Map-level checks shared by the exhaustive and random audits.
fn map_checks(r: &mut AuditReport, f: &PointMap, p: &Prebornology, q: &Prebornology) {
    let replay = || format!("f = {f:?}, source {}, target {}", show_p(p), show_p(q));
    let v = is_bornological(f, p, q).expect("carriers match");
    r.verdict("bornological", &v, replay);
    let born = v.definition;
    r.verdict("proper", &is_proper(f, p, q).expect("carriers match"), replay);
    let (c, d) = (coarse_from_prebornology(p), coarse_from_prebornology(q));
    let v = is_bornologous(f, &c, &d).expect("carriers match");
    r.verdict("bornologous", &v, replay);
    r.implication("bornologous_implies_bornological", v.definition, born, replay);
}

fn family_checks(r: &mut AuditReport, fam: &MapFamily, p: &Prebornology, q: &Prebornology) {
    let replay = || format!("family {:?}, source {}, target {}", fam.maps(), show_p(p), show_p(q));
    let (c, d) = (coarse_from_prebornology(p), coarse_from_prebornology(q));
    r.verdict("equibornologous", &equibornologous(fam, &c, &d).expect("carriers match"), replay);
    if fam.is_empty() {
        return;
    }
    let s = simply_bounded(fam, p, q).expect("nonempty family");
    r.verdict("simply_bounded", &s, replay);
    let e = equibounded(fam, p, q).expect("nonempty family");
    r.verdict("equibounded", &e, replay);
    r.implication("equibounded_implies_simply_bounded", e.definition, s.definition, replay);
}

fn coarse_inverse_checks(r: &mut AuditReport, f: &PointMap, g: &PointMap, c: &CoarseStructure, d: &CoarseStructure) {
    let replay = || format!("f = {f:?}, g = {g:?}, target classes {}", d.classes().fmt_blocks());
    let rep = coarse_inverse_propositions(f, g, c, d).expect("connected source");
    r.implication("coarse_inverse_part1", rep.part1.hypothesis, rep.part1.conclusion, replay);
    r.implication("coarse_inverse_part2", rep.part2.hypothesis, rep.part2.conclusion, replay);
}

fn topology_checks(r: &mut AuditReport, f: &PointMap, tx: &FiniteTopology, p: &Prebornology, q: &Prebornology) {
    let replay = || format!("f = {f:?}, topology {}, source {}, target {}", show_t(tx), show_p(p), show_p(q));
    r.verdict("locally_bounded_space", &locally_bounded_space(tx, p, None).expect("same carrier"), replay);
    r.verdict("locally_bounded_map", &locally_bounded_map(f, tx, q, None).expect("carriers match"), replay);
}

fn uniform_check(r: &mut AuditReport, u: &Partition, c: &Partition) {
    let uni = FiniteUniformity::from_classes(u);
    let cs = CoarseStructure::from_closeness(c.to_relation()).expect("partition relation");
    let v = uniformly_locally_bounded(&uni, &cs).expect("same carrier");
    r.verdict("uniformly_locally_bounded", &v, || format!("core {}, closeness {}", u.fmt_blocks(), c.fmt_blocks()));
}

fn labelled(prefix: &str, n: usize) -> Carrier {
    if prefix.is_empty() {
        Carrier::standard(n)
    } else {
        Carrier::new((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct labels")
    }
}

/// Exhaustive audit over carriers of size `≤ max_n` (at most 3), plus
/// products of two spaces on at most 2 points mapped to and from spaces on
/// at most 2 points.
pub fn exhaustive(max_n: usize) -> AuditReport {
    assert!(max_n <= 3, "exhaustive audit is limited to 3 points");
    let sizes: Vec<(usize, usize)> = (0..=max_n).flat_map(|n| (0..=max_n).map(move |m| (n, m))).collect();
    let parts: Vec<AuditReport> = sizes
        .par_iter()
        .map(|&(n, m)| {
            let mut r = AuditReport::new("exhaustive", None, None);
            r.guarded(|| format!("sizes ({n}, {m})"), |r| exhaustive_pair(r, n, m));
            r
        })
        .collect();
    let mut report = AuditReport::new("exhaustive", None, None);
    for p in parts {
        report.merge(p);
    }
    report.guarded(|| "product spaces".into(), exhaustive_products);
    report
}

fn exhaustive_pair(r: &mut AuditReport, n: usize, m: usize) {
    let x = labelled("", n);
    let y = labelled("y", m);
    let px: Vec<Prebornology> = all_partitions(&x).into_iter().map(Prebornology::from_partition).collect();
    let py: Vec<Prebornology> = all_partitions(&y).into_iter().map(Prebornology::from_partition).collect();
    let maps: Vec<PointMap> = PointMap::all(&x, &y).collect();
    let back: Vec<PointMap> = PointMap::all(&y, &x).collect();
    let mut families: Vec<MapFamily> = vec![MapFamily::new(&x, &y, vec![]).expect("empty")];
    for i in 0..maps.len() {
        for j in i..maps.len() {
            let list = if i == j { vec![maps[i].clone()] } else { vec![maps[i].clone(), maps[j].clone()] };
            families.push(MapFamily::new(&x, &y, list).expect("common carriers"));
        }
    }
    let tops_x = all_topologies(&x);
    let tops_y = all_topologies(&y);

    for p in &px {
        for q in &py {
            for f in &maps {
                map_checks(r, f, p, q);
            }
            for fam in &families {
                family_checks(r, fam, p, q);
            }
            for t in &tops_x {
                for f in &maps {
                    topology_checks(r, f, t, p, q);
                }
            }
        }
    }
    for q in &py {
        let d = coarse_from_prebornology(q);
        for f in &maps {
            for g in &maps {
                let v = bornotopic(f, g, &d).expect("carriers match");
                r.verdict("bornotopic", &v, || format!("f = {f:?}, g = {g:?}, target {}", show_p(q)));
            }
        }
        let c = CoarseStructure::maximal(&x);
        for f in &maps {
            for g in &back {
                coarse_inverse_checks(r, f, g, &c, &d);
            }
        }
    }
    // Continuity corollary: the hypothesis needs a locally bounded target.
    for ty in &tops_y {
        for q in &py {
            if !locally_bounded_space(ty, q, None).expect("same carrier").definition {
                continue;
            }
            for tx in &tops_x {
                for f in &maps {
                    for pt in x.points() {
                        let imp = continuity_corollary(f, tx, ty, q, pt).expect("carriers match");
                        r.implication("continuity_corollary", imp.hypothesis, imp.conclusion, || {
                            format!(
                                "f = {f:?} at {pt}, source {}, target {} with {}",
                                show_t(tx),
                                show_t(ty),
                                show_p(q)
                            )
                        });
                    }
                }
            }
        }
    }
    if n == m {
        let parts = all_partitions(&x);
        for u in &parts {
            for c in &parts {
                uniform_check(r, u, c);
            }
        }
    }
}

fn exhaustive_products(r: &mut AuditReport) {
    let small: Vec<Prebornology> =
        (1..=2).flat_map(|n| all_partitions(&labelled("", n)).into_iter().map(Prebornology::from_partition)).collect();
    for a in &small {
        for b in &small {
            let prod = Prebornology::product(&[a.clone(), b.clone()]).expect("nonempty list");
            for m in 1..=2 {
                let y = labelled("y", m);
                for q in all_partitions(&y).into_iter().map(Prebornology::from_partition) {
                    for f in PointMap::all(prod.carrier(), &y) {
                        map_checks(r, &f, &prod, &q);
                    }
                    for g in PointMap::all(&y, prod.carrier()) {
                        map_checks(r, &g, &q, &prod);
                    }
                }
            }
        }
    }
}

fn random_partition(rng: &mut ChaCha8Rng, c: &Carrier) -> Partition {
    let k = rng.random_range(1..=c.len().max(1));
    let assignment: Vec<usize> = c.points().map(|_| rng.random_range(0..k)).collect();
    Partition::from_assignment(c, &assignment).expect("assignment covers the carrier")
}

fn random_map(rng: &mut ChaCha8Rng, x: &Carrier, y: &Carrier) -> PointMap {
    PointMap::new(x, y, x.points().map(|_| rng.random_range(0..y.len())).collect()).expect("in range")
}

fn random_subset(rng: &mut ChaCha8Rng, c: &Carrier) -> PointSet {
    c.points().filter(|_| rng.random_bool(0.5)).collect()
}

fn random_topology(rng: &mut ChaCha8Rng, c: &Carrier) -> FiniteTopology {
    let k = rng.random_range(0..=4);
    let subbase: Vec<PointSet> = (0..k).map(|_| random_subset(rng, c)).collect();
    FiniteTopology::generated_by(c, subbase).expect("subsets of the carrier")
}

/// One random instance per trial at sizes 4–6. Trial `t` draws from stream
/// `t` of a generator seeded with `seed`, so the result does not depend on
/// scheduling.
pub fn random(trials: u64, seed: u64) -> AuditReport {
    let parts: Vec<AuditReport> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = AuditReport::new("random", None, None);
            r.guarded(|| format!("trial {t} (seed {seed})"), |r| random_trial(r, seed, t));
            r
        })
        .collect();
    let mut report = AuditReport::new("random", Some(seed), Some(trials));
    for p in parts {
        report.merge(p);
    }
    report
}

fn random_trial(r: &mut AuditReport, seed: u64, t: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    let n = rng.random_range(4..=6);
    let m = rng.random_range(4..=6);
    let x = labelled("", n);
    let y = labelled("y", m);
    let p = Prebornology::from_partition(random_partition(&mut rng, &x));
    let q = Prebornology::from_partition(random_partition(&mut rng, &y));
    let f = random_map(&mut rng, &x, &y);
    let g = random_map(&mut rng, &x, &y);
    let back = random_map(&mut rng, &y, &x);
    let k = rng.random_range(1..=3);
    let fam = MapFamily::new(&x, &y, (0..k).map(|_| random_map(&mut rng, &x, &y)).collect()).expect("common");
    let tx = random_topology(&mut rng, &x);
    let ty = random_topology(&mut rng, &y);
    let u = random_partition(&mut rng, &x);
    let tag = |s: String| format!("trial {t} (seed {seed}): {s}");

    map_checks(r, &f, &p, &q);
    family_checks(r, &fam, &p, &q);
    topology_checks(r, &f, &tx, &p, &q);
    let d = coarse_from_prebornology(&q);
    let v = bornotopic(&f, &g, &d).expect("carriers match");
    r.verdict("bornotopic", &v, || tag(format!("f = {f:?}, g = {g:?}, target {}", show_p(&q))));
    uniform_check(r, &u, p.partition());
    coarse_inverse_checks(r, &f, &back, &CoarseStructure::maximal(&x), &d);
    let pt = rng.random_range(0..n);
    let imp = continuity_corollary(&f, &tx, &ty, &q, pt).expect("carriers match");
    r.implication("continuity_corollary", imp.hypothesis, imp.conclusion, || {
        tag(format!("f = {f:?} at {pt}, source {}, target {}", show_t(&tx), show_t(&ty)))
    });
}

/// Result of the randomized finite-collapse check for relation families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub families: u64,
    pub valid: u64,
    pub failures: Vec<String>,
}

/// Random downward-closed relation families on `n` points: power sets of
/// random equivalences, with a random relation added or a random member
/// removed (and the family re-closed downwards) two times in three.
pub fn random_coarse_collapse(n: usize, trials: u64, seed: u64) -> CollapseReport {
    let c = labelled("", n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_pairs: Vec<(usize, usize)> = Relation::full(&c).pairs().iter().copied().collect();
    let mut report = CollapseReport { families: 0, valid: 0, failures: Vec::new() };
    for _ in 0..trials {
        let e = random_partition(&mut rng, &c).to_relation();
        let base = CoarseStructure::from_closeness(e).expect("equivalence");
        let mut members: Vec<Pairs> = base.to_family().members().iter().cloned().collect();
        match rng.random_range(0..3) {
            0 => {}
            1 => {
                let extra: Pairs = all_pairs.iter().copied().filter(|_| rng.random_bool(0.3)).collect();
                members.extend(crate::foundations::subsets_of(&(0..extra.len()).collect()).into_iter().map(|s| {
                    let list: Vec<(usize, usize)> = extra.iter().copied().collect();
                    s.iter().map(|&i| list[i]).collect::<Pairs>()
                }));
            }
            _ => {
                members.shuffle(&mut rng);
                let drop = members.pop().expect("power set is nonempty");
                members.retain(|m| !drop.is_subset(m));
            }
        }
        let fam = RelationFamily::from_pairs(&c, members).expect("pairs of the carrier");
        report.families += 1;
        if let Ok(s) = validate_relations(&fam) {
            report.valid += 1;
            if s.to_family() != fam {
                report.failures.push(format!("valid family {:?} is not a power set", fam.members()));
            }
        }
    }
    report
}
