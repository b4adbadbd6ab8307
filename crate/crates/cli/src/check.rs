//! `coarsetop check <file>`.

use serde::Serialize;

use coarsetop::borno::{validate_family, BornoError, Prebornology, SetFamily};
use coarsetop::coarse::{induced_prebornology, BornologicalGroup, CoarseStructure};
use coarsetop::foundations::{metric_components, Dist, FiniteTopology, FiniteUniformity, Partition, PseudometricInf};
use coarsetop::maps::{self, MapFamily, PointMap, Verdict};
use coarsetop::{Carrier, Point, Relation};

use crate::doc::{Resolver, SchemaError, SpaceDoc};
use crate::report::{Report, Status, Table};

/// Map and family checks that may be named under `checks`.
pub const MAP_CHECKS: [&str; 8] = [
    "bornological",
    "proper",
    "bornologous",
    "bornotopic",
    "locally_bounded_map",
    "simply_bounded",
    "equibounded",
    "equibornologous",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub property: String,
    pub value: String,
    pub witness: String,
}

struct Run<'a> {
    carrier: &'a Carrier,
    findings: Vec<Finding>,
    failures: Vec<String>,
}

impl Run<'_> {
    fn note(&mut self, subject: &str, property: &str, value: impl ToString) {
        self.findings.push(Finding {
            subject: subject.into(),
            property: property.into(),
            value: value.to_string(),
            witness: String::new(),
        });
    }

    fn verdict(&mut self, subject: &str, property: &str, v: coarsetop::Result<Verdict>) {
        let v = match v {
            Ok(v) => v,
            Err(e) => {
                self.failures.push(format!("{subject} {property}: {e}"));
                self.note(subject, property, "error");
                return;
            }
        };
        let witness = v.witness.as_ref().map(|w| w.describe(self.carrier, self.carrier)).unwrap_or_default();
        let value = if v.agree() {
            v.definition.to_string()
        } else {
            self.failures.push(format!(
                "{subject} {property}: definition says {} but characterisation says {}{}",
                v.definition,
                v.characterisation,
                if witness.is_empty() { String::new() } else { format!(" ({witness})") }
            ));
            "disagree".to_string()
        };
        self.findings.push(Finding { subject: subject.into(), property: property.into(), value, witness });
    }

    /// Records an invalid structure as a failure and drops it.
    fn build<T>(&mut self, what: &str, r: Result<T, String>) -> Option<T> {
        match r {
            Ok(t) => {
                self.note(what, "valid", true);
                Some(t)
            }
            Err(e) => {
                self.note(what, "valid", false);
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.into(), message: message.into() }
}

fn borno_error(c: &Carrier, e: BornoError) -> String {
    match e {
        BornoError::Family(vs) => vs.iter().map(|v| v.describe(c)).collect::<Vec<_>>().join("; "),
        other => other.to_string(),
    }
}

/// Everything in the document resolved to point indices.
struct Resolved {
    prebornology: Option<(bool, Vec<coarsetop::PointSet>)>,
    coarse: Option<Vec<Vec<(Point, Point)>>>,
    pseudometric: Option<Vec<(Point, Point, Dist)>>,
    topology: Option<Vec<coarsetop::PointSet>>,
    uniformity: Option<Vec<coarsetop::PointSet>>,
    group: Option<Vec<Vec<Point>>>,
    maps: Vec<(String, Vec<Point>)>,
}

fn resolve(doc: &SpaceDoc, c: &Carrier) -> Result<Resolved, SchemaError> {
    let r = Resolver { carrier: c };
    let prebornology = match &doc.prebornology {
        None => None,
        Some(p) => match (&p.generators, &p.family) {
            (Some(g), None) => Some((false, r.sets("prebornology.generators", g)?)),
            (None, Some(f)) => Some((true, r.sets("prebornology.family", f)?)),
            _ => unreachable!("shape checked on parse"),
        },
    };
    let coarse = doc
        .coarse
        .as_ref()
        .map(|cd| {
            cd.generators
                .iter()
                .enumerate()
                .map(|(i, g)| r.pairs(&format!("coarse.generators[{i}]"), g))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let pseudometric = doc
        .pseudometric
        .as_ref()
        .map(|m| {
            m.entries
                .iter()
                .enumerate()
                .map(|(i, (x, y, d))| {
                    let p = format!("pseudometric.entries[{i}]");
                    let xi = r.point(&format!("{p}[0]"), x)?;
                    let yi = r.point(&format!("{p}[1]"), y)?;
                    let d = Dist::parse(&d.as_text()).map_err(|e| schema(format!("{p}[2]"), e.to_string()))?;
                    Ok((xi, yi, d))
                })
                .collect::<Result<Vec<_>, SchemaError>>()
        })
        .transpose()?;
    let topology = doc.topology.as_ref().map(|t| r.sets("topology.opens", &t.opens)).transpose()?;
    let uniformity = doc.uniformity.as_ref().map(|u| r.sets("uniformity.classes", &u.classes)).transpose()?;
    let group = doc
        .group
        .as_ref()
        .map(|g| {
            let n = c.len();
            if g.table.len() != n {
                return Err(schema("group.table", format!("expected {n} rows, found {}", g.table.len())));
            }
            g.table
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != n {
                        return Err(schema(
                            format!("group.table[{i}]"),
                            format!("expected {n} entries, found {}", row.len()),
                        ));
                    }
                    row.iter().enumerate().map(|(j, l)| r.point(&format!("group.table[{i}][{j}]"), l)).collect()
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let maps = doc
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| Ok((m.name.clone(), r.graph(&format!("maps[{i}].graph"), &m.graph)?)))
        .collect::<Result<Vec<_>, SchemaError>>()?;
    Ok(Resolved { prebornology, coarse, pseudometric, topology, uniformity, group, maps })
}

/// Checks named in the document, or every applicable one.
fn selected_checks(doc: &SpaceDoc, have_p: bool, have_c: bool, have_t: bool) -> Result<Vec<&'static str>, SchemaError> {
    let needs = |name: &str| -> Option<&'static str> {
        match name {
            "bornological" | "proper" | "simply_bounded" | "equibounded" if !have_p => Some("a prebornology"),
            "bornologous" | "bornotopic" | "equibornologous" if !have_c => Some("a coarse structure"),
            "locally_bounded_map" if !(have_t && have_p) => Some("a topology and a prebornology"),
            _ => None,
        }
    };
    if doc.checks.is_empty() {
        return Ok(MAP_CHECKS.iter().copied().filter(|c| needs(c).is_none()).collect());
    }
    let mut out = Vec::new();
    for (i, name) in doc.checks.iter().enumerate() {
        let path = format!("checks[{i}]");
        let known = MAP_CHECKS
            .iter()
            .copied()
            .find(|c| c == name)
            .ok_or_else(|| schema(&path, format!("unknown check `{name}`; known: {}", MAP_CHECKS.join(", "))))?;
        if let Some(what) = needs(known) {
            return Err(schema(&path, format!("check `{name}` needs {what}")));
        }
        if !out.contains(&known) {
            out.push(known);
        }
    }
    Ok(out)
}

pub fn run(text: &str, file: &str) -> Result<Report, SchemaError> {
    let doc = SpaceDoc::parse(text)?;
    let c = doc.carrier()?;
    let res = resolve(&doc, &c)?;
    let have_p = res.prebornology.is_some() || res.pseudometric.is_some() || res.coarse.is_some();
    let have_c = have_p;
    if res.group.is_some() && !have_p {
        return Err(schema("group", "a group needs a prebornology, pseudometric or coarse structure"));
    }
    let selected = selected_checks(&doc, have_p, have_c, res.topology.is_some())?;

    let mut run = Run { carrier: &c, findings: vec![], failures: vec![] };
    run.note("carrier", "size", c.len());

    let explicit_p = res.prebornology.as_ref().and_then(|(is_family, sets)| {
        let built = if *is_family {
            SetFamily::new(&c, sets.iter().cloned())
                .map_err(|e| e.to_string())
                .and_then(|f| validate_family(&f).map_err(|e| borno_error(&c, e)))
        } else {
            Prebornology::from_generators(&c, sets).map_err(|e| e.to_string())
        };
        run.build("prebornology", built)
    });
    let metric = res.pseudometric.as_ref().and_then(|entries| {
        run.build("pseudometric", PseudometricInf::from_entries(&c, entries).map_err(|e| e.to_string()))
    });
    if let Some(m) = &metric {
        run.note("pseudometric", "components", metric_components(m).fmt_blocks());
    }
    let explicit_c = res.coarse.as_ref().and_then(|gens| {
        let built = gens
            .iter()
            .map(|g| Relation::new(&c, g.iter().copied()))
            .collect::<coarsetop::Result<Vec<_>>>()
            .and_then(|rels| CoarseStructure::from_generators(&c, &rels))
            .map_err(|e| e.to_string());
        run.build("coarse", built)
    });

    // An invalid structure leaves nothing to check against.
    let broken = (res.prebornology.is_some() && explicit_p.is_none())
        || (res.pseudometric.is_some() && metric.is_none())
        || (res.coarse.is_some() && explicit_c.is_none());

    let (p, p_source) = match (&explicit_p, &metric, &explicit_c) {
        _ if broken => (None, ""),
        (Some(p), _, _) => (Some(p.clone()), "explicit"),
        (None, Some(m), _) => (Some(Prebornology::bounded_bornology(m)), "pseudometric"),
        (None, None, Some(s)) => (Some(induced_prebornology(s)), "coarse"),
        _ => (None, ""),
    };
    let (cs, c_source) = match (&explicit_c, &metric, &p) {
        _ if broken => (None, ""),
        (Some(s), _, _) => (Some(s.clone()), "explicit"),
        (None, Some(m), _) => (Some(CoarseStructure::bounded_coarse(m)), "pseudometric"),
        (None, None, Some(p)) => (Some(coarsetop::coarse::coarse_from_prebornology(p)), "prebornology"),
        _ => (None, ""),
    };
    if let Some(p) = &p {
        run.note("prebornology", "source", p_source);
        run.note("prebornology", "galaxies", p.partition().fmt_blocks());
        run.note("prebornology", "connected", p.is_connected());
    }
    if let Some(s) = &cs {
        run.note("coarse", "source", c_source);
        run.note("coarse", "classes", s.classes().fmt_blocks());
        run.note("coarse", "connected", s.is_connected());
    }
    if let (Some(p), Some(s)) = (&p, &cs) {
        run.note("coarse", "induces prebornology", induced_prebornology(s) == *p);
    }

    let topology = res.topology.as_ref().and_then(|opens| {
        run.build("topology", FiniteTopology::new(&c, opens.iter().cloned()).map_err(|e| e.to_string()))
    });
    if let (Some(t), Some(p)) = (&topology, &p) {
        run.verdict("topology", "compatible", maps::locally_bounded_space(t, p, None));
    }
    let uniformity = res.uniformity.as_ref().and_then(|classes| {
        let built = Partition::new(&c, classes.iter().cloned()).map(|q| FiniteUniformity::from_classes(&q));
        run.build("uniformity", built.map_err(|e| e.to_string()))
    });
    if let (Some(u), Some(s)) = (&uniformity, &cs) {
        run.verdict("uniformity", "compatible", maps::uniformly_locally_bounded(u, s));
    }
    if let (Some(table), Some(p)) = (&res.group, &p) {
        let g = run.build("group", BornologicalGroup::new(table.clone(), p.clone()).map_err(|e| e.to_string()));
        if let Some(g) = g {
            run.note("group", "identity", c.label(g.identity()));
            run.note("group", "commutative", g.is_commutative());
            run.note("group", "left coarse classes", CoarseStructure::left_coarse(&g).classes().fmt_blocks());
            run.note("group", "right coarse classes", CoarseStructure::right_coarse(&g).classes().fmt_blocks());
        }
    }

    let point_maps: Vec<(String, PointMap)> = res
        .maps
        .iter()
        .map(|(name, graph)| (name.clone(), PointMap::new(&c, &c, graph.clone()).expect("resolved graph is total")))
        .collect();
    if !broken {
        for (name, f) in &point_maps {
            let subject = format!("map {name}");
            for &check in &selected {
                let v = match (check, &p, &cs, &topology) {
                    ("bornological", Some(p), _, _) => maps::is_bornological(f, p, p),
                    ("proper", Some(p), _, _) => maps::is_proper(f, p, p),
                    ("bornologous", _, Some(s), _) => maps::is_bornologous(f, s, s),
                    ("locally_bounded_map", Some(p), _, Some(t)) => maps::locally_bounded_map(f, t, p, None),
                    _ => continue,
                };
                run.verdict(&subject, check, v);
            }
        }
        if let (true, Some(d)) = (selected.contains(&"bornotopic"), &cs) {
            for (i, (a, f)) in point_maps.iter().enumerate() {
                for (b, g) in &point_maps[i + 1..] {
                    run.verdict(&format!("maps {a}, {b}"), "bornotopic", maps::bornotopic(f, g, d));
                }
            }
        }
        if !doc.family.is_empty() {
            let members: Vec<PointMap> = doc
                .family
                .iter()
                .map(|n| point_maps.iter().find(|(m, _)| m == n).expect("family names checked").1.clone())
                .collect();
            let fam = MapFamily::new(&c, &c, members).expect("maps share the carrier");
            let subject = format!("family {}", doc.family.join(", "));
            for &check in &selected {
                let v = match (check, &p, &cs) {
                    ("simply_bounded", Some(p), _) => maps::simply_bounded(&fam, p, p),
                    ("equibounded", Some(p), _) => maps::equibounded(&fam, p, p),
                    ("equibornologous", _, Some(s)) => maps::equibornologous(&fam, s, s),
                    _ => continue,
                };
                run.verdict(&subject, check, v);
            }
        }
    }

    let status = if run.failures.is_empty() { Status::Pass } else { Status::Falsified };
    let mut report = Report::new("check", status);
    report.param("file", file);
    report.param("checks", if selected.is_empty() { "none".to_string() } else { selected.join(", ") });
    report.summary(
        "structures valid",
        !broken && run.findings.iter().all(|f| f.property != "valid" || f.value == "true"),
    );
    report.summary("verdicts", run.findings.len());
    let mut t = Table::list("Verdicts", &["subject", "property", "value", "witness"]);
    for f in &run.findings {
        t.push(vec![f.subject.clone(), f.property.clone(), f.value.clone(), f.witness.clone()]);
    }
    report.tables.push(t);
    report.details = serde_json::json!({ "findings": run.findings });
    report.failures = run.failures;
    Ok(report)
}
