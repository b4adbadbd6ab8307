//! Numerical slow-oscillation estimates on the integers.
//!
//! For each radius `R` a seeded sample of integers with `R ≤ |x| ≤ 10R` is
//! drawn once. Every sample is compared with its neighbours `x + δ`,
//! `|δ| ≤ k_max`, giving one cell `osc[k][R]` per width. The sample is then
//! refined around its worst points. Cells computed on the base sample alone
//! are kept as well: they range over the same pairs for every function run
//! with the same configuration, so cellwise inequalities between functions
//! can be checked on them exactly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::expr::{BinOp, Env, EvalError, Expr, Func, Var};
use super::AsymptoticError;

/// A complex-valued function on the integers.
pub trait Observable: Sync {
    fn value(&self, x: i64) -> Result<Complex64, EvalError>;
    fn describe(&self) -> String;
    /// A constant `L` with `|φ(x) − φ(y)| ≤ L·|log1p|x| − log1p|y||`, when
    /// one can be read off the expression.
    fn log_lipschitz(&self) -> Option<f64>;
}

impl Observable for Expr {
    fn value(&self, x: i64) -> Result<Complex64, EvalError> {
        Ok(Complex64::new(self.eval(Env { x: x as f64, k: None })?, 0.0))
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn log_lipschitz(&self) -> Option<f64> {
        log_lipschitz(self).map(|b| b.lip)
    }
}

/// `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexExpr {
    pub re: Expr,
    pub im: Expr,
}

impl ComplexExpr {
    pub fn new(re: Expr, im: Expr) -> Self {
        ComplexExpr { re, im }
    }

    pub fn real(re: Expr) -> Self {
        ComplexExpr { re, im: Expr::num(0) }
    }

    pub fn is_real(&self) -> bool {
        matches!(&self.im, Expr::Num(l) if num_traits::Zero::is_zero(l.exact()))
    }

    pub fn add(&self, other: &ComplexExpr) -> ComplexExpr {
        ComplexExpr::new(Expr::add(self.re.clone(), other.re.clone()), Expr::add(self.im.clone(), other.im.clone()))
    }

    pub fn mul(&self, other: &ComplexExpr) -> ComplexExpr {
        if self.is_real() && other.is_real() {
            return ComplexExpr::real(Expr::mul(self.re.clone(), other.re.clone()));
        }
        let (a, b, c, d) = (&self.re, &self.im, &other.re, &other.im);
        ComplexExpr::new(
            Expr::sub(Expr::mul(a.clone(), c.clone()), Expr::mul(b.clone(), d.clone())),
            Expr::add(Expr::mul(a.clone(), d.clone()), Expr::mul(b.clone(), c.clone())),
        )
    }

    pub fn conj(&self) -> ComplexExpr {
        if self.is_real() {
            return self.clone();
        }
        ComplexExpr::new(self.re.clone(), Expr::neg(self.im.clone()).normalize())
    }
}

impl Observable for ComplexExpr {
    fn value(&self, x: i64) -> Result<Complex64, EvalError> {
        let env = Env { x: x as f64, k: None };
        Ok(Complex64::new(self.re.eval(env)?, self.im.eval(env)?))
    }

    fn describe(&self) -> String {
        if self.is_real() {
            self.re.to_string()
        } else {
            format!("({}) + i·({})", self.re, self.im)
        }
    }

    fn log_lipschitz(&self) -> Option<f64> {
        let a = log_lipschitz(&self.re)?.lip;
        let b = log_lipschitz(&self.im)?.lip;
        Some(a.hypot(b))
    }
}

/// Lipschitz constant and sup bound of an expression viewed as a function
/// of `t = log1p(abs(x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct LipBound {
    lip: f64,
    sup: f64,
}

fn is_log_abs_x(e: &Expr) -> bool {
    matches!(e, Expr::Call(Func::Log1p, a) if matches!(&a[0], Expr::Call(Func::Abs, b) if b[0] == Expr::x()))
}

fn log_lipschitz(e: &Expr) -> Option<LipBound> {
    if is_log_abs_x(e) {
        return Some(LipBound { lip: 1.0, sup: f64::INFINITY });
    }
    if !e.uses(Var::X) && !e.uses(Var::K) {
        let v = e.eval_x(0.0).ok()?;
        return Some(LipBound { lip: 0.0, sup: v.abs() });
    }
    let scale = |b: LipBound, c: f64| LipBound { lip: b.lip * c, sup: b.sup * c };
    match e {
        Expr::Neg(a) => log_lipschitz(a),
        Expr::Bin(BinOp::Add | BinOp::Sub, a, b) => {
            let (a, b) = (log_lipschitz(a)?, log_lipschitz(b)?);
            Some(LipBound { lip: a.lip + b.lip, sup: a.sup + b.sup })
        }
        Expr::Bin(BinOp::Mul, a, b) => {
            let (a, b) = (log_lipschitz(a)?, log_lipschitz(b)?);
            let lip = match (a.lip == 0.0, b.lip == 0.0) {
                (true, true) => 0.0,
                (true, false) => a.sup * b.lip,
                (false, true) => b.sup * a.lip,
                (false, false) => a.sup * b.lip + b.sup * a.lip,
            };
            lip.is_finite().then_some(LipBound { lip, sup: a.sup * b.sup })
        }
        Expr::Bin(BinOp::Div, a, b) => {
            let b = log_lipschitz(b)?;
            if b.lip != 0.0 || b.sup == 0.0 {
                return None;
            }
            Some(scale(log_lipschitz(a)?, 1.0 / b.sup))
        }
        Expr::Call(Func::Sin | Func::Cos, args) => Some(LipBound { lip: log_lipschitz(&args[0])?.lip, sup: 1.0 }),
        Expr::Call(Func::Abs, args) => log_lipschitz(&args[0]),
        Expr::Call(Func::Min | Func::Max, args) => {
            let bounds = args.iter().map(log_lipschitz).collect::<Option<Vec<_>>>()?;
            Some(LipBound {
                lip: bounds.iter().map(|b| b.lip).fold(0.0, f64::max),
                sup: bounds.iter().map(|b| b.sup).fold(0.0, f64::max),
            })
        }
        _ => None,
    }
}

/// Parameters of an oscillation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscConfig {
    pub widths: Vec<u32>,
    pub radii: Vec<u64>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OscConfig {
    fn default() -> Self {
        OscConfig {
            widths: (1..=10).collect(),
            radii: (1..=6).map(|e| 10u64.pow(e)).collect(),
            samples: 2048,
            tol: 1e-3,
            seed: 42,
        }
    }
}

impl OscConfig {
    pub fn validate(&self) -> Result<(), AsymptoticError> {
        let bad = |m: &str| Err(AsymptoticError::Precondition(m.to_string()));
        if self.widths.is_empty() || self.widths.contains(&0) {
            return bad("widths must be nonempty and at least 1");
        }
        if self.radii.is_empty() || self.radii[0] == 0 || self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return bad("radii must be positive and strictly increasing");
        }
        if self.radii.last().is_some_and(|&r| r > 100_000_000_000_000) {
            return bad("radii must stay below 10^14 so sample points are exact doubles");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol must be positive");
        }
        if self.samples == 0 {
            return bad("samples must be at least 1");
        }
        Ok(())
    }

    fn max_width(&self) -> u32 {
        self.widths.iter().copied().max().unwrap_or(1)
    }
}

/// A pair of points and the distance between their values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairWitness {
    pub x: i64,
    pub y: i64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OscVerdict {
    Falsified { witness: PairWitness },
    Consistent,
    Inconclusive { reason: String },
}

impl OscVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            OscVerdict::Falsified { .. } => "falsified",
            OscVerdict::Consistent => "consistent",
            OscVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, OscVerdict::Consistent)
    }
}

/// Comparison of every refined cell with `L·k/(1+R−k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeCheck {
    pub lipschitz: f64,
    pub dominated: bool,
    /// Largest ratio of a cell to its envelope.
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationReport {
    pub expr: String,
    pub config: OscConfig,
    /// `estimates[i][j]` for `widths[i]` and `radii[j]`, after refinement.
    pub estimates: Vec<Vec<f64>>,
    /// The same cells on the base sample alone.
    #[serde(skip)]
    pub base_estimates: Vec<Vec<f64>>,
    /// Worst pair of each refined cell.
    pub witnesses: Vec<Vec<Option<PairWitness>>>,
    /// Largest `|φ|` over every evaluated point.
    pub sup_norm: f64,
    #[serde(skip)]
    pub sup_at: i64,
    /// Smallest and largest real part over every evaluated point.
    #[serde(skip)]
    pub real_range: (f64, f64),
    pub envelope: Option<EnvelopeCheck>,
    pub verdict: OscVerdict,
}

impl OscillationReport {
    /// The row for width `k`.
    pub fn row(&self, k: u32) -> Option<&[f64]> {
        let i = self.config.widths.iter().position(|&w| w == k)?;
        Some(&self.estimates[i])
    }

    pub fn cell(&self, k: u32, r: u64) -> Option<f64> {
        let j = self.config.radii.iter().position(|&q| q == r)?;
        self.row(k).map(|row| row[j])
    }
}

/// Per-radius result before the fold.
struct Column {
    refined: Vec<f64>,
    base: Vec<f64>,
    witnesses: Vec<Option<PairWitness>>,
    sup: (f64, i64),
    range: (f64, f64),
}

/// Integer sample of the annulus `r ≤ |x| ≤ 10r`, shared by every function
/// run with the same seed.
pub fn annulus_sample(seed: u64, index: usize, r: u64, samples: usize) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let (lo, hi) = (r as i64, r as i64 * 10);
    let mut xs = vec![lo, hi, -lo, -hi];
    xs.extend((0..samples).map(|_| {
        let m = rng.random_range(lo..=hi);
        if rng.random::<bool>() {
            m
        } else {
            -m
        }
    }));
    xs
}

struct Scan {
    /// `best[d]` is the worst pair with `|δ| = d + 1`.
    best: Vec<Option<PairWitness>>,
    sup: (f64, i64),
    range: (f64, f64),
}

impl Scan {
    fn new(kmax: u32) -> Self {
        Scan { best: vec![None; kmax as usize], sup: (0.0, 0), range: (f64::INFINITY, f64::NEG_INFINITY) }
    }

    fn note(&mut self, x: i64, v: Complex64) {
        let n = v.norm();
        if n > self.sup.0 {
            self.sup = (n, x);
        }
        self.range = (self.range.0.min(v.re), self.range.1.max(v.re));
    }

    fn visit<O: Observable + ?Sized>(&mut self, obs: &O, x: i64) -> Result<(), EvalError> {
        let kmax = self.best.len() as i64;
        let fx = obs.value(x)?;
        self.note(x, fx);
        for delta in -kmax..=kmax {
            if delta == 0 {
                continue;
            }
            let y = x + delta;
            let fy = obs.value(y)?;
            self.note(y, fy);
            let gap = (fx - fy).norm();
            let slot = &mut self.best[(delta.unsigned_abs() - 1) as usize];
            if slot.is_none_or(|w| gap > w.gap) {
                *slot = Some(PairWitness { x, y, gap });
            }
        }
        Ok(())
    }

    /// Cell maxima per width, with the witness of each.
    fn cells(&self, widths: &[u32]) -> Vec<Option<PairWitness>> {
        widths
            .iter()
            .map(|&k| {
                self.best[..k as usize].iter().flatten().copied().fold(None, |acc: Option<PairWitness>, w| match acc {
                    Some(a) if a.gap >= w.gap => Some(a),
                    _ => Some(w),
                })
            })
            .collect()
    }
}

const REFINE_POINTS: usize = 8;
const REFINE_SPAN: i64 = 64;

fn column<O: Observable + ?Sized>(obs: &O, cfg: &OscConfig, index: usize) -> Result<Column, EvalError> {
    let r = cfg.radii[index];
    let kmax = cfg.max_width();
    let xs = annulus_sample(cfg.seed, index, r, cfg.samples);
    let mut scan = Scan::new(kmax);
    let mut per_point: Vec<(f64, i64)> = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mut single = Scan::new(kmax);
        single.visit(obs, x)?;
        let worst = single.best.iter().flatten().map(|w| w.gap).fold(0.0, f64::max);
        per_point.push((worst, x));
        for (slot, w) in scan.best.iter_mut().zip(&single.best) {
            if let Some(w) = w {
                if slot.is_none_or(|s| w.gap > s.gap) {
                    *slot = Some(*w);
                }
            }
        }
        if single.sup.0 > scan.sup.0 {
            scan.sup = single.sup;
        }
        scan.range = (scan.range.0.min(single.range.0), scan.range.1.max(single.range.1));
    }
    let base: Vec<f64> = scan.cells(&cfg.widths).iter().map(|w| w.map_or(0.0, |w| w.gap)).collect();

    // Scan densely around the points where the oscillation peaked.
    per_point.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let (lo, hi) = (r as i64, r as i64 * 10);
    let mut seen = std::collections::BTreeSet::new();
    for &(_, x) in per_point.iter().take(REFINE_POINTS) {
        for j in -REFINE_SPAN..=REFINE_SPAN {
            let z = x + j;
            if (lo..=hi).contains(&z.abs()) && seen.insert(z) {
                scan.visit(obs, z)?;
            }
        }
    }
    let witnesses = scan.cells(&cfg.widths);
    Ok(Column {
        refined: witnesses.iter().map(|w| w.map_or(0.0, |w| w.gap)).collect(),
        base,
        witnesses,
        sup: scan.sup,
        range: scan.range,
    })
}

/// Relative growth allowed between consecutive radii before a row counts
/// as non-monotone.
const MONOTONE_SLACK: f64 = 1.25;

/// Estimates `osc[k][R]` for `obs` and classifies the result.
pub fn oscillation<O: Observable + ?Sized>(obs: &O, cfg: &OscConfig) -> Result<OscillationReport, AsymptoticError> {
    cfg.validate()?;
    let columns: Vec<Column> =
        (0..cfg.radii.len()).into_par_iter().map(|j| column(obs, cfg, j)).collect::<Result<_, _>>()?;
    let (nw, nr) = (cfg.widths.len(), cfg.radii.len());
    let mut estimates = vec![vec![0.0; nr]; nw];
    let mut base_estimates = vec![vec![0.0; nr]; nw];
    let mut witnesses = vec![vec![None; nr]; nw];
    let mut sup = (0.0f64, 0i64);
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for (j, col) in columns.iter().enumerate() {
        for i in 0..nw {
            estimates[i][j] = col.refined[i];
            base_estimates[i][j] = col.base[i];
            witnesses[i][j] = col.witnesses[i];
        }
        if col.sup.0 > sup.0 {
            sup = col.sup;
        }
        range = (range.0.min(col.range.0), range.1.max(col.range.1));
    }

    let envelope = obs.log_lipschitz().map(|lip| {
        let mut worst = 0.0f64;
        let mut dominated = true;
        for (i, &k) in cfg.widths.iter().enumerate() {
            for (j, &r) in cfg.radii.iter().enumerate() {
                let denom = 1.0 + r as f64 - k as f64;
                if denom <= 0.0 {
                    continue;
                }
                let bound = lip * k as f64 / denom;
                let cell = estimates[i][j];
                if cell > bound + 1e-12 {
                    dominated = false;
                }
                if bound > 0.0 {
                    worst = worst.max(cell / bound);
                }
            }
        }
        EnvelopeCheck { lipschitz: lip, dominated, worst_ratio: worst }
    });

    let last = nr - 1;
    let falsifying = (0..nw)
        .filter(|&i| estimates[i][last] >= 10.0 * cfg.tol)
        .max_by(|&a, &b| estimates[a][last].total_cmp(&estimates[b][last]));
    let verdict = if let Some(i) = falsifying {
        let w = witnesses[i][last].expect("a nonzero cell has a witness");
        let gap = (obs.value(w.x)? - obs.value(w.y)?).norm();
        assert!(
            (gap - w.gap).abs() <= 1e-9 * gap.abs().max(1.0),
            "witness ({}, {}) does not replay: {gap} vs {}",
            w.x,
            w.y,
            w.gap
        );
        OscVerdict::Falsified { witness: w }
    } else {
        let rising = (0..nw).find_map(|i| {
            (1..nr)
                .find(|&j| estimates[i][j] > estimates[i][j - 1] * MONOTONE_SLACK + 1e-12)
                .map(|j| (cfg.widths[i], cfg.radii[j]))
        });
        let above = (0..nw).find(|&i| estimates[i][last] > cfg.tol);
        match (rising, above) {
            (None, None) => OscVerdict::Consistent,
            (Some((k, r)), _) => OscVerdict::Inconclusive { reason: format!("row k = {k} grows at R = {r}") },
            (None, Some(i)) => OscVerdict::Inconclusive {
                reason: format!(
                    "osc[{}][{}] = {:.3e} lies between tol and 10·tol",
                    cfg.widths[i], cfg.radii[last], estimates[i][last]
                ),
            },
        }
    };

    Ok(OscillationReport {
        expr: obs.describe(),
        config: cfg.clone(),
        estimates,
        base_estimates,
        witnesses,
        sup_norm: sup.0,
        sup_at: sup.1,
        real_range: range,
        envelope,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::super::expr::parse;
    use super::*;

    fn run(src: &str) -> OscillationReport {
        oscillation(&parse(src).unwrap(), &OscConfig::default()).unwrap()
    }

    #[test]
    fn slowly_oscillating_example() {
        let rep = run("sin(log1p(abs(x)))");
        assert!(rep.verdict.is_consistent(), "{:?}", rep.verdict);
        for k in 1..=10 {
            assert!(rep.cell(k, 100_000).unwrap() <= 1.1e-4);
        }
        let env = rep.envelope.as_ref().unwrap();
        assert_eq!(env.lipschitz, 1.0);
        assert!(env.dominated, "worst ratio {}", env.worst_ratio);
        // The mean-value bound is nearly attained, so the estimates are not
        // trivially small.
        assert!(env.worst_ratio > 0.5);
    }

    #[test]
    fn envelope_against_direct_bound() {
        let phi = parse("sin(log1p(abs(x)))").unwrap();
        let rep = oscillation(&phi, &OscConfig::default()).unwrap();
        // Independent bound: |φ(x) − φ(y)| ≤ |log1p|x| − log1p|y||.
        for row in &rep.witnesses {
            for w in row.iter().flatten() {
                let dt = ((w.x.abs() as f64).ln_1p() - (w.y.abs() as f64).ln_1p()).abs();
                assert!(w.gap <= dt + 1e-12);
            }
        }
    }

    #[test]
    fn sine_is_falsified() {
        let rep = run("sin(x)");
        let OscVerdict::Falsified { witness } = rep.verdict else { panic!("{:?}", rep.verdict) };
        assert!(witness.x.abs() >= 1_000_000);
        assert!(witness.gap >= 0.9);
        let direct = ((witness.x as f64).sin() - (witness.y as f64).sin()).abs();
        assert!((direct - witness.gap).abs() < 1e-9);
        for j in 0..6 {
            assert!(rep.estimates[9][j] >= 0.9);
        }
    }

    #[test]
    fn constant_is_flat() {
        let rep = run("1");
        assert!(rep.verdict.is_consistent());
        assert!(rep.estimates.iter().flatten().all(|&v| v == 0.0));
        assert_eq!(rep.sup_norm, 1.0);
    }

    #[test]
    fn intermediate_decay_is_inconclusive() {
        // osc ≈ k/(2√R) at R = 10⁶ sits between tol and 10·tol.
        let rep = run("sin(sqrt(abs(x)))");
        assert!(matches!(rep.verdict, OscVerdict::Inconclusive { .. }), "{:?}", rep.verdict);
    }

    #[test]
    fn deterministic_and_monotone_in_width() {
        let a = run("sin(log1p(abs(x))) * cos(log1p(abs(x)))");
        let b = run("sin(log1p(abs(x))) * cos(log1p(abs(x)))");
        assert_eq!(a, b);
        for j in 0..6 {
            for i in 1..10 {
                assert!(a.estimates[i][j] >= a.estimates[i - 1][j]);
                assert!(a.estimates[i][j] >= a.base_estimates[i][j]);
            }
        }
        assert!(a.envelope.unwrap().dominated);
    }

    #[test]
    fn domain_errors_surface() {
        let err = oscillation(&parse("1 / (x - 10)").unwrap(), &OscConfig::default()).unwrap_err();
        assert!(matches!(err, AsymptoticError::Eval(EvalError::DivisionByZero { .. })));
    }

    #[test]
    fn config_preconditions() {
        let phi = parse("x").unwrap();
        for cfg in [
            OscConfig { widths: vec![0], ..OscConfig::default() },
            OscConfig { radii: vec![10, 10], ..OscConfig::default() },
            OscConfig { tol: 0.0, ..OscConfig::default() },
        ] {
            assert!(matches!(oscillation(&phi, &cfg), Err(AsymptoticError::Precondition(_))));
        }
    }

    #[test]
    fn lipschitz_rules() {
        let lip = |s: &str| parse(s).unwrap().log_lipschitz();
        assert_eq!(lip("3 * sin(log1p(abs(x))) - 1"), Some(3.0));
        assert_eq!(lip("sin(log1p(abs(x))) * cos(log1p(abs(x)))"), Some(2.0));
        assert_eq!(lip("sin(x)"), None);
        assert_eq!(lip("log1p(abs(x)) * log1p(abs(x))"), None);
        let h = ComplexExpr::new(parse("cos(log1p(abs(x)))").unwrap(), parse("sin(log1p(abs(x)))").unwrap());
        assert_eq!(h.log_lipschitz(), Some(2f64.sqrt()));
    }
}
