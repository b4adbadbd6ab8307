//! Brute-force enumeration of raw families.
//!
//! Downward-closed families of subsets of an `n`-point set are enumerated as
//! down-closures of antichains in the subset lattice. Each family is checked
//! against the axioms directly, so the counts here are independent of the
//! partition machinery they are compared with.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::borno::{validate_family, Prebornology, SetFamily};
use crate::coarse::{
    coarse_from_prebornology, induced_prebornology, validate_relations, CoarseStructure, Pairs, RelationFamily,
};
use crate::error::Error;
use crate::foundations::{all_partitions, Carrier, Point, PointSet, Relation};

/// Largest carrier for exhaustive prebornology enumeration.
pub const MAX_PREBORNOLOGY_N: usize = 5;
/// Largest carrier for exhaustive relation-family enumeration.
pub const MAX_COARSE_FAMILY_N: usize = 2;
/// Largest carrier for equivalence-relation enumeration.
pub const MAX_EQUIVALENCE_N: usize = 5;

/// Every antichain of the subset lattice on `bits` elements, as lists of
/// element masks. `bits` ≤ 6.
fn antichains(bits: usize) -> Vec<Vec<u32>> {
    assert!(bits <= 6, "lattice too large");
    let elems: Vec<u32> = (0..(1u32 << bits)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(i: usize, elems: &[u32], current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == elems.len() {
            out.push(current.clone());
            return;
        }
        rec(i + 1, elems, current, out);
        let e = elems[i];
        if current.iter().all(|&c| c & e != c && c & e != e) {
            current.push(e);
            rec(i + 1, elems, current, out);
            current.pop();
        }
    }
    rec(0, &elems, &mut current, &mut out);
    out
}

/// Down-closure of an antichain as a bitmask over element masks.
fn down_closure(antichain: &[u32], bits: usize) -> u64 {
    let mut fam = 0u64;
    for s in 0..(1u32 << bits) {
        if antichain.iter().any(|&a| s & a == s) {
            fam |= 1 << s;
        }
    }
    fam
}

fn mask_to_set(mask: u32) -> PointSet {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Every downward-closed family of subsets of the carrier.
pub fn downward_closed_set_families(c: &Carrier) -> Vec<SetFamily> {
    let n = c.len();
    antichains(n)
        .iter()
        .map(|a| {
            let fam = down_closure(a, n);
            let members = (0..(1u32 << n)).filter(|&s| fam & (1 << s) != 0).map(mask_to_set);
            SetFamily::new(c, members).expect("subsets of the carrier")
        })
        .collect()
}

/// Every downward-closed family of relations on a carrier with `n² ≤ 6`.
pub fn downward_closed_relation_families(c: &Carrier) -> Vec<RelationFamily> {
    let pairs: Vec<(Point, Point)> = Relation::full(c).pairs().iter().copied().collect();
    let bits = pairs.len();
    antichains(bits)
        .iter()
        .map(|a| {
            let fam = down_closure(a, bits);
            let members = (0..(1u32 << bits))
                .filter(|&s| fam & (1 << s) != 0)
                .map(|s| mask_to_set(s).iter().map(|&i| pairs[i]).collect::<Pairs>());
            RelationFamily::from_pairs(c, members).expect("pairs of the carrier")
        })
        .collect()
}

/// Equivalence relations found by filtering reflexive symmetric relations
/// for transitivity.
pub fn equivalence_relations(c: &Carrier) -> Vec<Relation> {
    let n = c.len();
    let offdiag: Vec<(Point, Point)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    (0u64..(1u64 << offdiag.len()))
        .filter_map(|mask| {
            let extra = offdiag
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .flat_map(|(_, &(x, y))| [(x, y), (y, x)]);
            let r = Relation::new(c, Relation::diagonal(c).pairs().iter().copied().chain(extra)).expect("in carrier");
            r.is_transitive().then_some(r)
        })
        .collect()
}

/// Counts and checks for one carrier size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    /// Downward-closed families examined.
    pub families: usize,
    /// Families satisfying all axioms.
    pub valid: usize,
    /// Independent count from the other side (partitions or equivalences).
    pub expected: usize,
    /// Instances put through round trips and cross-checks.
    pub verified: usize,
    pub failures: Vec<String>,
}

impl CountRow {
    pub fn ok(&self) -> bool {
        self.valid == self.expected && self.failures.is_empty()
    }
}

/// Prebornologies on `n` points by exhaustive family enumeration.
pub fn count_prebornologies(n: usize, verify: bool) -> crate::Result<CountRow> {
    if n > MAX_PREBORNOLOGY_N {
        return Err(Error::Precondition(format!(
            "prebornology enumeration supports n ≤ {MAX_PREBORNOLOGY_N}, got {n}"
        )));
    }
    let c = Carrier::standard(n);
    let families = downward_closed_set_families(&c);
    let mut failures = Vec::new();
    let mut found = BTreeSet::new();
    let mut valid = 0;
    for f in &families {
        if let Ok(p) = validate_family(f) {
            valid += 1;
            if p.to_family() != *f {
                failures.push(format!("family {:?} differs from its canonical form", f.members()));
            }
            found.insert(p.partition().assignment().to_vec());
        }
    }
    if found.len() != valid {
        failures.push(format!("{valid} valid families but {} distinct galaxy partitions", found.len()));
    }
    let partitions = all_partitions(&c);
    let mut verified = 0;
    if verify {
        for part in &partitions {
            let p = Prebornology::from_partition(part.clone());
            if !found.contains(part.assignment()) {
                failures.push(format!("partition {} has no valid family", part.fmt_blocks()));
            }
            let gm = p.galaxy_map();
            if crate::borno::reconstruct_from_galaxy(&gm).as_ref() != Ok(&p) {
                failures.push(format!("galaxy round trip fails for {}", part.fmt_blocks()));
            }
            if crate::borno::from_bn_system(&crate::borno::bn_system(&p)).as_ref() != Ok(&p) {
                failures.push(format!("BN round trip fails for {}", part.fmt_blocks()));
            }
            if induced_prebornology(&coarse_from_prebornology(&p)) != p {
                failures.push(format!("U∘T round trip fails for {}", part.fmt_blocks()));
            }
            if p.is_bornology() != (p.blocks().len() <= 1) {
                failures.push(format!("bornology test fails for {}", part.fmt_blocks()));
            }
            verified += 1;
        }
        let bornologies =
            partitions.iter().filter(|q| Prebornology::from_partition((*q).clone()).is_bornology()).count();
        if bornologies != 1 {
            failures.push(format!("{bornologies} bornologies on {n} points, expected 1"));
        }
    }
    Ok(CountRow { n, families: families.len(), valid, expected: partitions.len(), verified, failures })
}

/// Coarse structures on `n ≤ 2` points by exhaustive relation-family scan.
pub fn count_coarse_families(n: usize, verify: bool) -> crate::Result<CountRow> {
    if n > MAX_COARSE_FAMILY_N {
        return Err(Error::Precondition(format!(
            "exhaustive coarse family enumeration supports n ≤ {MAX_COARSE_FAMILY_N}, got {n}"
        )));
    }
    let c = Carrier::standard(n);
    let families = downward_closed_relation_families(&c);
    let mut failures = Vec::new();
    let mut valid = 0;
    let mut verified = 0;
    for f in &families {
        if let Ok(s) = validate_relations(f) {
            valid += 1;
            if s.to_family() != *f {
                failures.push(format!("family {:?} differs from its closeness power set", f.members()));
            }
            if verify {
                verify_coarse(&s, &mut failures);
                verified += 1;
            }
        }
    }
    Ok(CountRow { n, families: families.len(), valid, expected: equivalence_relations(&c).len(), verified, failures })
}

/// Coarse structures on `n ≤ 5` points via equivalence relations.
pub fn count_coarse_equivalences(n: usize, verify: bool) -> crate::Result<CountRow> {
    if n > MAX_EQUIVALENCE_N {
        return Err(Error::Precondition(format!("equivalence enumeration supports n ≤ {MAX_EQUIVALENCE_N}, got {n}")));
    }
    let c = Carrier::standard(n);
    let eqs = equivalence_relations(&c);
    let mut failures = Vec::new();
    let mut verified = 0;
    let mut distinct = BTreeSet::new();
    for e in &eqs {
        let s = match CoarseStructure::power_of_equivalence(e) {
            Ok(s) => s,
            Err(err) => {
                failures.push(format!("{}: {err}", e.fmt_pairs()));
                continue;
            }
        };
        distinct.insert(s.closeness().pairs().clone());
        if verify {
            // The power set is only materialised while it stays small.
            if s.closeness().len() <= 9 {
                match validate_relations(&s.to_family()) {
                    Ok(back) if back == s => {}
                    _ => failures.push(format!("power set of {} does not validate back", e.fmt_pairs())),
                }
            }
            verify_coarse(&s, &mut failures);
            verified += 1;
        }
    }
    Ok(CountRow {
        n,
        families: eqs.len(),
        valid: distinct.len(),
        expected: all_partitions(&c).len(),
        verified,
        failures,
    })
}

fn verify_coarse(s: &CoarseStructure, failures: &mut Vec<String>) {
    let u = induced_prebornology(s);
    if coarse_from_prebornology(&u) != *s {
        failures.push(format!("T∘U round trip fails for {s}"));
    }
    let rebuilt = CoarseStructure::from_generators(s.carrier(), &[s.closeness().clone()]);
    if rebuilt.as_ref() != Ok(s) {
        failures.push(format!("closeness does not determine {s}"));
    }
    let full = s.closeness().len() == s.carrier().len() * s.carrier().len();
    if s.is_connected() != full || u.is_connected() != full {
        failures.push(format!("connectedness corollary fails for {s}"));
    }
}
