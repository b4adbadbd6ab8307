//! Browser bindings for the coarsetop demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! Failures come back as `{"error": "..."}` so the functions can also be
//! called (and tested) natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use coarsetop::asymptotic::{oscillation, parse, OscConfig, OscVerdict};
use coarsetop::borno::Prebornology;
use coarsetop::coarse::coarse_from_prebornology;
use coarsetop::enumerate::{count_coarse_equivalences, count_prebornologies};
use coarsetop::Carrier;

/// Largest radius exponent accepted by [`oscillation_table`].
pub const MAX_EXPONENT: u32 = 7;
pub const MAX_WIDTH: u32 = 20;
pub const MAX_SAMPLES: u32 = 8192;

fn error(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn labels(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
}

/// Oscillation estimates of `expr` for widths `1..=max_width` on radii
/// `10, 100, …, 10^max_exponent`.
#[wasm_bindgen]
pub fn oscillation_table(expr: &str, max_width: u32, max_exponent: u32, samples: u32, seed: u32) -> String {
    if !(1..=MAX_WIDTH).contains(&max_width) {
        return error(format!("width must lie in 1..={MAX_WIDTH}"));
    }
    if !(1..=MAX_EXPONENT).contains(&max_exponent) {
        return error(format!("radius exponent must lie in 1..={MAX_EXPONENT}"));
    }
    if !(1..=MAX_SAMPLES).contains(&samples) {
        return error(format!("samples must lie in 1..={MAX_SAMPLES}"));
    }
    let e = match parse(expr) {
        Ok(e) => e,
        Err(p) => return json!({ "error": p.message, "offset": p.offset }).to_string(),
    };
    let cfg = OscConfig {
        widths: (1..=max_width).collect(),
        radii: (1..=max_exponent).map(|k| 10u64.pow(k)).collect(),
        samples: samples as usize,
        tol: 1e-3,
        seed: u64::from(seed),
    };
    let r = match oscillation(&e, &cfg) {
        Ok(r) => r,
        Err(err) => return error(err),
    };
    let witness = match &r.verdict {
        OscVerdict::Falsified { witness } => json!({ "x": witness.x, "y": witness.y, "gap": witness.gap }),
        _ => Value::Null,
    };
    let reason = match &r.verdict {
        OscVerdict::Inconclusive { reason } => Value::from(reason.as_str()),
        _ => Value::Null,
    };
    json!({
        "expr": r.expr,
        "verdict": r.verdict.name(),
        "witness": witness,
        "reason": reason,
        "widths": cfg.widths,
        "radii": cfg.radii,
        "estimates": r.estimates,
        "sup_norm": r.sup_norm,
    })
    .to_string()
}

/// Galaxies of the prebornology on `carrier` generated by `generators`.
///
/// Labels are separated by spaces or commas; generator sets by `;`, e.g.
/// `"a b; c d"`.
#[wasm_bindgen]
pub fn galaxy_partition(carrier: &str, generators: &str) -> String {
    let c = match Carrier::new(labels(carrier)) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let gens = generators.split(';').map(|g| c.set(&labels(g))).collect::<coarsetop::Result<Vec<_>>>();
    let p = match gens.and_then(|g| Prebornology::from_generators(&c, &g)) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    let blocks: Vec<Vec<&str>> = p.blocks().iter().map(|b| b.iter().map(|&x| c.label(x)).collect()).collect();
    let closeness = coarse_from_prebornology(&p);
    json!({
        "galaxies": p.partition().fmt_blocks(),
        "blocks": blocks,
        "connected": p.is_connected(),
        "bounded_sets": p.bounded_sets().len(),
        "closeness_pairs": closeness.closeness().len(),
    })
    .to_string()
}

/// Counts for `n = 1..=max_n` of `kind` (`prebornology` or `coarse`).
#[wasm_bindgen]
pub fn enumerate_counts(max_n: u32, kind: &str) -> String {
    let limit = match kind {
        "prebornology" | "coarse" => 5,
        other => return error(format!("unknown kind `{other}`; use prebornology or coarse")),
    };
    if !(1..=limit).contains(&max_n) {
        return error(format!("n must lie in 1..={limit}"));
    }
    let mut rows = vec![];
    for n in 1..=max_n as usize {
        let row =
            if kind == "prebornology" { count_prebornologies(n, true) } else { count_coarse_equivalences(n, true) };
        match row {
            Ok(r) => rows.push(
                json!({ "n": r.n, "families": r.families, "valid": r.valid, "expected": r.expected, "ok": r.ok() }),
            ),
            Err(e) => return error(e),
        }
    }
    json!({ "kind": kind, "rows": rows }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn oscillation_table_verdicts() {
        let v = parsed(oscillation_table("sin(log1p(abs(x)))", 3, 4, 512, 42));
        assert_eq!(v["verdict"], "consistent");
        assert_eq!(v["estimates"].as_array().unwrap().len(), 3);
        assert_eq!(v["radii"], json!([10, 100, 1000, 10000]));
        let v = parsed(oscillation_table("sin(x)", 2, 6, 512, 1));
        assert_eq!(v["verdict"], "falsified");
        assert!(v["witness"]["gap"].as_f64().unwrap() >= 0.9);
    }

    #[test]
    fn oscillation_table_errors() {
        let v = parsed(oscillation_table("sin(", 3, 3, 64, 0));
        assert_eq!(v["offset"], 4);
        assert!(parsed(oscillation_table("x", 0, 3, 64, 0))["error"].is_string());
        assert!(parsed(oscillation_table("x", 3, 9, 64, 0))["error"].is_string());
        assert!(parsed(oscillation_table("1/(x-100)", 1, 3, 64, 0))["error"].is_string());
    }

    #[test]
    fn galaxies() {
        let v = parsed(galaxy_partition("a b c d e", "a b; c, d"));
        assert_eq!(v["galaxies"], "{{a, b}, {c, d}, {e}}");
        assert_eq!(v["connected"], false);
        assert_eq!(v["bounded_sets"], 1 + 3 + 3 + 1);
        let v = parsed(galaxy_partition("a b", "a b"));
        assert_eq!(v["connected"], true);
        assert!(parsed(galaxy_partition("a b", "a z"))["error"].is_string());
        assert!(parsed(galaxy_partition("a a", ""))["error"].is_string());
    }

    #[test]
    fn counts() {
        let v = parsed(enumerate_counts(5, "prebornology"));
        let valid: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["valid"].as_u64().unwrap()).collect();
        assert_eq!(valid, vec![1, 2, 5, 15, 52]);
        let v = parsed(enumerate_counts(4, "coarse"));
        assert_eq!(v["rows"][3]["valid"], 15);
        assert!(parsed(enumerate_counts(6, "coarse"))["error"].is_string());
        assert!(parsed(enumerate_counts(2, "topology"))["error"].is_string());
    }
}
