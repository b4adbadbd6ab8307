//! `enumerate`, `oracle` and `oscillate`.

use coarsetop::asymptotic::{oscillation, parse, AsymptoticError, OscConfig, OscVerdict};
use coarsetop::audit;
use coarsetop::enumerate::{
    count_coarse_equivalences, count_coarse_families, count_prebornologies, CountRow, MAX_COARSE_FAMILY_N,
    MAX_EQUIVALENCE_N, MAX_PREBORNOLOGY_N,
};
use coarsetop::foundations::parse_rational;

use crate::report::{Report, Status, Table};
use crate::Kind;

fn count_table(rows: &[(String, &CountRow)]) -> Table {
    let mut t = Table::grid("Counts", &["n", "method", "families", "valid", "expected", "verified", "ok"]);
    for (method, r) in rows {
        t.push(vec![
            r.n.to_string(),
            method.clone(),
            r.families.to_string(),
            r.valid.to_string(),
            r.expected.to_string(),
            r.verified.to_string(),
            r.ok().to_string(),
        ]);
    }
    t
}

pub fn enumerate(n: usize, kind: Kind, verify: bool) -> Result<Report, String> {
    let max = match kind {
        Kind::Prebornology => MAX_PREBORNOLOGY_N,
        Kind::Coarse => MAX_EQUIVALENCE_N,
    };
    if !(1..=max).contains(&n) {
        return Err(format!("--n must lie in 1..={max} for {}", kind.name()));
    }
    let mut rows: Vec<(String, CountRow)> = Vec::new();
    let err = |e: coarsetop::Error| e.to_string();
    for k in 1..=n {
        match kind {
            Kind::Prebornology => rows.push(("family scan".into(), count_prebornologies(k, verify).map_err(err)?)),
            Kind::Coarse => {
                if k <= MAX_COARSE_FAMILY_N {
                    rows.push(("family scan".into(), count_coarse_families(k, verify).map_err(err)?));
                }
                rows.push(("equivalences".into(), count_coarse_equivalences(k, verify).map_err(err)?));
            }
        }
    }
    let counts = |method: &str| {
        rows.iter().filter(|(m, _)| m == method).map(|(_, r)| r.valid.to_string()).collect::<Vec<_>>().join(" ")
    };
    let failures: Vec<String> = rows
        .iter()
        .flat_map(|(m, r)| {
            let mut f: Vec<String> = r.failures.iter().map(|s| format!("n = {} ({m}): {s}", r.n)).collect();
            if r.valid != r.expected {
                f.push(format!("n = {} ({m}): {} valid, expected {}", r.n, r.valid, r.expected));
            }
            f
        })
        .collect();
    let status = if failures.is_empty() { Status::Pass } else { Status::Falsified };
    let mut report = Report::new("enumerate", status);
    report.param("kind", kind.name());
    report.param("n", n);
    report.param("verify", verify);
    match kind {
        Kind::Prebornology => report.summary("counts", counts("family scan")),
        Kind::Coarse => {
            report.summary("counts", counts("equivalences"));
            report.summary("family scan counts", counts("family scan"));
        }
    }
    let refs: Vec<(String, &CountRow)> = rows.iter().map(|(m, r)| (m.clone(), r)).collect();
    report.tables.push(count_table(&refs));
    report.details = serde_json::json!({
        "rows": rows.iter().map(|(m, r)| serde_json::json!({"method": m, "row": r})).collect::<Vec<_>>()
    });
    report.failures = failures;
    Ok(report)
}

pub fn oracle(trials: u64, seed: u64) -> Result<Report, String> {
    if trials == 0 {
        return Err("--trials must be at least 1".into());
    }
    let a = audit::random(trials, seed);
    let status = if a.ok() { Status::Pass } else { Status::Falsified };
    let mut report = Report::new("oracle", status);
    report.param("trials", trials);
    report.param("seed", seed);
    report.summary("instances", a.instances());
    report.summary("disagreements", a.disagreements());
    report.summary("counterexamples", a.counterexamples());
    let mut t = Table::grid("Checkers", &["checker", "instances", "disagreements"]);
    for name in audit::CHECKERS {
        let tally = &a.checkers[name];
        t.push(vec![name.into(), tally.instances.to_string(), tally.failures.to_string()]);
    }
    report.tables.push(t);
    let mut t = Table::grid("Implications", &["implication", "instances", "hypothesis held", "counterexamples"]);
    for name in audit::IMPLICATIONS {
        let tally = &a.implications[name];
        t.push(vec![
            name.into(),
            tally.instances.to_string(),
            tally.hypothesis_held.to_string(),
            tally.failures.to_string(),
        ]);
    }
    report.tables.push(t);
    report.failures = a.failures.clone();
    report.details = serde_json::to_value(&a).expect("audit reports serialize");
    Ok(report)
}

/// Parses a nonnegative integer written as `1000`, `1e3` or `10^3`.
fn parse_count(s: &str) -> Option<u64> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        return b.trim().parse::<u64>().ok()?.checked_pow(e.trim().parse().ok()?);
    }
    let q = parse_rational(s)?;
    if !q.is_integer() {
        return None;
    }
    u64::try_from(q.to_integer()).ok()
}

/// `1..10` (inclusive) or a comma-separated list.
pub fn parse_widths(s: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("invalid widths `{s}`; use `1..10` or `1,2,5`");
    let as_u32 = |t: &str| parse_count(t).and_then(|v| u32::try_from(v).ok()).ok_or_else(bad);
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (as_u32(a)?, as_u32(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(as_u32).collect()
}

/// `1e1:1e6` (every power of ten in between) or a comma-separated list.
pub fn parse_radii(s: &str) -> Result<Vec<u64>, String> {
    let bad = || format!("invalid radii `{s}`; use `1e1:1e6` or `10,100,1000`");
    if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (parse_count(a).ok_or_else(bad)?, parse_count(b).ok_or_else(bad)?);
        if a == 0 || a > b {
            return Err(bad());
        }
        let mut out = vec![];
        let mut r = a;
        while r <= b {
            out.push(r);
            r = match r.checked_mul(10) {
                Some(next) => next,
                None => break,
            };
        }
        return Ok(out);
    }
    s.split(',').map(|t| parse_count(t).ok_or_else(bad)).collect()
}

/// Error text for a failed oscillation run, with a caret under parse errors.
pub fn oscillation_error(expr: &str, e: &AsymptoticError) -> String {
    match e {
        AsymptoticError::Parse(p) => {
            let col = expr[..p.offset.min(expr.len())].chars().count();
            format!("parse error at offset {}: {}\n  {expr}\n  {}^", p.offset, p.message, " ".repeat(col))
        }
        other => other.to_string(),
    }
}

pub fn oscillate(expr: &str, cfg: OscConfig) -> Result<Report, AsymptoticError> {
    let e = parse(expr)?;
    cfg.validate()?;
    let r = oscillation(&e, &cfg)?;
    let status = match &r.verdict {
        OscVerdict::Consistent => Status::Pass,
        OscVerdict::Falsified { .. } => Status::Falsified,
        OscVerdict::Inconclusive { .. } => Status::Inconclusive,
    };
    let mut report = Report::new("oscillate", status);
    report.param("expr", expr);
    report.param("widths", join(&cfg.widths));
    report.param("radii", join(&cfg.radii));
    report.param("samples", cfg.samples);
    report.param("tol", cfg.tol);
    report.param("seed", cfg.seed);
    report.summary("verdict", r.verdict.name());
    match &r.verdict {
        OscVerdict::Falsified { witness } => {
            report.summary("witness", format!("x = {}, y = {}, gap = {:.6}", witness.x, witness.y, witness.gap));
            report.failures.push(format!(
                "oscillation {:.6} ≥ {} at R = {}: replay |φ({}) - φ({})| = {:.6}",
                witness.gap,
                10.0 * cfg.tol,
                cfg.radii.last().expect("validated"),
                witness.x,
                witness.y,
                witness.gap
            ));
        }
        OscVerdict::Inconclusive { reason } => report.summary("reason", reason),
        OscVerdict::Consistent => {}
    }
    report.summary("sup norm", format!("{:.6}", r.sup_norm));
    if let Some(env) = &r.envelope {
        report.summary(
            "envelope",
            format!("L = {}, dominated = {}, worst ratio = {:.4}", env.lipschitz, env.dominated, env.worst_ratio),
        );
    }
    let mut columns = vec!["k".to_string()];
    columns.extend(cfg.radii.iter().map(|r| format!("R={}", fmt_radius(*r))));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = Table::grid("Oscillation estimates", &cols);
    for (i, k) in cfg.widths.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(r.estimates[i].iter().map(|v| format!("{v:.3e}")));
        t.push(row);
    }
    report.tables.push(t);
    report.details = serde_json::to_value(&r).expect("oscillation reports serialize");
    Ok(report)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_radius(r: u64) -> String {
    let mut e = 0;
    let mut q = r;
    while q >= 10 && q.is_multiple_of(10) {
        q /= 10;
        e += 1;
    }
    if q == 1 && e > 0 {
        format!("1e{e}")
    } else {
        r.to_string()
    }
}
