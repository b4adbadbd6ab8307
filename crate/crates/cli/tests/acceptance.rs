//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p coarsetop-cli --test acceptance`. Exits nonzero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use coarsetop::asymptotic::higson::{geometric_family, higson_ops, is_falsified};
use coarsetop::asymptotic::{
    composition_check, oscillation, parse, uniform_limit_check, ComplexExpr, OscConfig, OscVerdict, SeqExpr,
};
use coarsetop::audit;
use coarsetop::borno::{bn_system, from_bn_system, reconstruct_from_galaxy, validate_family, Prebornology};
use coarsetop::coarse::{coarse_from_prebornology, induced_prebornology, validate_relations, CoarseStructure};
use coarsetop::enumerate::{
    count_coarse_equivalences, count_coarse_families, count_prebornologies, downward_closed_relation_families,
    downward_closed_set_families, equivalence_relations,
};
use coarsetop::foundations::all_partitions;
use coarsetop::linear::{corrigendum_demos, EquiboundedVerdict, Finding};
use coarsetop::Carrier;

const ENUMERATION_BUDGET: Duration = Duration::from_secs(30);
const OSCILLATION_BUDGET: Duration = Duration::from_secs(60);
const OSC_TOL: f64 = 1e-3;
const WITNESS_RADIUS: i64 = 1_000_000;
const WITNESS_GAP: f64 = 0.9;
const CONTINUITY_DISTANCE: f64 = 1e-3;
const CONTINUITY_GAP: f64 = 0.9;
const ORACLE_TRIALS: u64 = 1000;
const ORACLE_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn enumeration_counts() -> Outcome {
    let start = Instant::now();
    let mut problems = vec![];
    let preborn: Vec<usize> = (1..=5)
        .map(|n| {
            let row = count_prebornologies(n, false).expect("n ≤ 5");
            problems.extend(row.failures.iter().cloned());
            row.valid
        })
        .collect();
    let family2 = count_coarse_families(2, false).expect("n = 2");
    let equiv: Vec<usize> = (1..=5).map(|n| count_coarse_equivalences(n, false).expect("n ≤ 5").valid).collect();
    let elapsed = start.elapsed();
    let bell = vec![1, 2, 5, 15, 52];
    let pass =
        preborn == bell && family2.valid == 2 && equiv == bell && problems.is_empty() && elapsed < ENUMERATION_BUDGET;
    outcome(
        pass,
        format!(
            "prebornologies {preborn:?}, coarse families on 2 points {}, equivalences {equiv:?}, {:.1} s",
            family2.valid,
            elapsed.as_secs_f64()
        ),
    )
}

fn finite_collapse() -> Outcome {
    let mut checked = 0;
    let mut exceptions = 0;
    for n in 1..=4 {
        for f in downward_closed_set_families(&Carrier::standard(n)) {
            if let Ok(p) = validate_family(&f) {
                checked += 1;
                // Canonical form: every subset of a galaxy block.
                let canonical: std::collections::BTreeSet<_> =
                    p.blocks().iter().flat_map(coarsetop::foundations::subsets_of).collect();
                if *f.members() != canonical || p.to_family() != f {
                    exceptions += 1;
                }
            }
        }
    }
    for f in downward_closed_relation_families(&Carrier::standard(2)) {
        if let Ok(s) = validate_relations(&f) {
            checked += 1;
            let closeness = s.closeness().pairs().clone();
            let all_subrelations = f.members().iter().all(|m| m.is_subset(&closeness))
                && f.members().contains(&closeness)
                && f.members().len() == 1 << closeness.len();
            if !all_subrelations || s.to_family() != f {
                exceptions += 1;
            }
        }
    }
    outcome(
        exceptions == 0 && checked == 1 + 2 + 5 + 15 + 2,
        format!("{checked} valid families, {exceptions} exceptions"),
    )
}

fn round_trips() -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    for n in 0..=4 {
        let c = Carrier::standard(n);
        for part in all_partitions(&c) {
            let p = Prebornology::from_partition(part.clone());
            let t = coarse_from_prebornology(&p);
            let ok = reconstruct_from_galaxy(&p.galaxy_map()).as_ref() == Ok(&p)
                && from_bn_system(&bn_system(&p)).as_ref() == Ok(&p)
                && induced_prebornology(&t) == p;
            checked += 1;
            failures += usize::from(!ok);
        }
        for e in equivalence_relations(&c) {
            let s = CoarseStructure::power_of_equivalence(&e).expect("equivalence");
            let ok = *s.closeness() == e
                && CoarseStructure::from_generators(&c, &[e.clone()]).as_ref() == Ok(&s)
                && coarse_from_prebornology(&induced_prebornology(&s)) == s;
            checked += 1;
            failures += usize::from(!ok);
        }
        failures += count_prebornologies(n.max(1), true).expect("n ≤ 4").failures.len();
        failures += count_coarse_equivalences(n.max(1), true).expect("n ≤ 4").failures.len();
    }
    outcome(failures == 0, format!("{checked} structures on ≤ 4 points, {failures} failures"))
}

fn oracle_equivalence() -> Outcome {
    let ex = audit::exhaustive(3);
    let rnd = audit::random(ORACLE_TRIALS, ORACLE_SEED);
    let covered = audit::CHECKERS.iter().all(|c| ex.checkers[*c].instances > 0 && rnd.checkers[*c].instances > 0);
    let pass = covered
        && ex.disagreements() == 0
        && rnd.disagreements() == 0
        && ex.failures.is_empty()
        && rnd.failures.is_empty();
    outcome(
        pass,
        format!(
            "{} exhaustive and {} random verdict pairs, {} disagreements",
            ex.instances(),
            rnd.instances(),
            ex.disagreements() + rnd.disagreements()
        ),
    )
}

fn implications() -> Outcome {
    let ex = audit::exhaustive(3);
    let names = ["bornologous_implies_bornological", "coarse_inverse_part1", "coarse_inverse_part2"];
    let held: u64 = names.iter().map(|n| ex.implications[*n].hypothesis_held).sum();
    let counter: u64 = names.iter().map(|n| ex.implications[*n].failures).sum();
    let exercised = names.iter().all(|n| ex.implications[*n].hypothesis_held > 0);
    outcome(counter == 0 && exercised, format!("{held} instances with the hypothesis, {counter} counterexamples"))
}

fn slow_oscillation() -> Outcome {
    let start = Instant::now();
    let cfg = OscConfig::default();
    let phi = oscillation(&parse("sin(log1p(abs(x)))").unwrap(), &cfg).unwrap();
    let r5 = cfg.radii.iter().position(|&r| r == 100_000).expect("default radii include 1e5");
    let mut worst_r5 = 0.0f64;
    let mut envelope_ok = true;
    for (i, &k) in cfg.widths.iter().enumerate() {
        if k <= 10 {
            worst_r5 = worst_r5.max(phi.estimates[i][r5]);
        }
        for (j, &r) in cfg.radii.iter().enumerate() {
            let (k, r) = (k as f64, r as f64);
            envelope_ok &= phi.estimates[i][j] <= k / (1.0 + r - k);
        }
    }
    let sine = oscillation(&parse("sin(x)").unwrap(), &cfg).unwrap();
    let witness_ok = match &sine.verdict {
        OscVerdict::Falsified { witness } => {
            let f = |x: i64| (x as f64).sin();
            witness.x.abs().min(witness.y.abs()) >= WITNESS_RADIUS
                && (f(witness.x) - f(witness.y)).abs() >= WITNESS_GAP
                && witness.gap >= WITNESS_GAP
        }
        _ => false,
    };
    let elapsed = start.elapsed();
    let pass = phi.verdict.is_consistent()
        && worst_r5 <= OSC_TOL
        && envelope_ok
        && is_falsified(&sine.verdict)
        && witness_ok
        && elapsed < OSCILLATION_BUDGET;
    outcome(
        pass,
        format!(
            "sin∘log1p∘abs {} with max osc at R=1e5 {worst_r5:.2e}, envelope {}; sin {}, {:.1} s",
            phi.verdict.name(),
            if envelope_ok { "dominates" } else { "violated" },
            sine.verdict.name(),
            elapsed.as_secs_f64()
        ),
    )
}

fn higson_closure() -> Outcome {
    let cfg = OscConfig::default();
    let s = ComplexExpr::real(parse("sin(log1p(abs(x)))").unwrap());
    let c = ComplexExpr::real(parse("cos(log1p(abs(x)))").unwrap());
    let h = higson_ops(&s, &c, &cfg).unwrap();
    let comp = composition_check(
        &SeqExpr::from_i64s(&[0, 2]),
        &parse("sin(log1p(abs(x)))").unwrap(),
        &parse("x / 2").unwrap(),
        &cfg,
    )
    .unwrap();
    let (family, psi) = geometric_family();
    let eps_ok = family.iter().enumerate().all(|(j, (_, e))| *e == 2f64.powi(-(j as i32 + 1)));
    let lim = uniform_limit_check(&family, &psi, &cfg).unwrap();
    let pass = h.closed() && h.cells_checked > 0 && comp.holds() && eps_ok && lim.holds() && lim.members_consistent;
    outcome(
        pass,
        format!(
            "closure {} over {} cells, composition {}, uniform limit {}",
            h.closed(),
            h.cells_checked,
            comp.oscillation.verdict.name(),
            lim.limit.verdict.name()
        ),
    )
}

fn corrigendum() -> Outcome {
    let r = corrigendum_demos(ORACLE_SEED);
    let sine_bounded =
        matches!(&r.sine.equibounded, EquiboundedVerdict::Expression { finding: Finding::Certified { .. } });
    let sine_witness = match &r.sine.equicontinuous {
        Finding::Falsified { witness } => {
            let k = witness.k as f64;
            let (x, y) = (witness.x[0], witness.x2[0]);
            (x - y).abs() <= CONTINUITY_DISTANCE && ((k * x).sin() - (k * y).sin()).abs() >= CONTINUITY_GAP
        }
        _ => false,
    };
    let const_continuous = r.constants.equicontinuous.is_certified();
    let const_witness = matches!(
        &r.constants.equibounded,
        EquiboundedVerdict::Expression { finding: Finding::Falsified { witness } } if witness.value.abs() > 1.0
    );
    outcome(
        sine_bounded && sine_witness && const_continuous && const_witness,
        format!(
            "sin(kx): equibounded certified {sine_bounded}, equicontinuity witness {sine_witness}; constants: equicontinuous certified {const_continuous}, equiboundedness witness {const_witness}"
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("coarsetop-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |tag: &str| {
        let artifact = dir.join(format!("{tag}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_coarsetop"))
            .args(["oracle", "--trials", &ORACLE_TRIALS.to_string(), "--seed", &ORACLE_SEED.to_string(), "--artifact"])
            .arg(&artifact)
            .env_remove("COARSETOP_SEED")
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout, std::fs::read(&artifact).unwrap_or_default())
    };
    let a = run("first");
    let b = run("second");
    std::fs::remove_dir_all(&dir).ok();
    let pass = a.0 == Some(0) && a == b && !a.2.is_empty();
    outcome(
        pass,
        format!("exit {:?}, stdout {} bytes, report {} bytes, identical {}", a.0, a.1.len(), a.2.len(), a == b),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("enumeration counts", enumeration_counts),
        ("finite collapse", finite_collapse),
        ("round-trip theorems", round_trips),
        ("oracle equivalence", oracle_equivalence),
        ("implication propositions", implications),
        ("slow oscillation", slow_oscillation),
        ("Higson closure", higson_closure),
        ("corrigendum demos", corrigendum),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
