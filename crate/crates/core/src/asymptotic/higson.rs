//! Closure properties of slowly oscillating functions.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::expr::{Env, Expr, Var};
use super::oscillation::{annulus_sample, oscillation, ComplexExpr, OscConfig, OscVerdict, OscillationReport};
use super::seq::{fin_inf_theorem_check, SeqExpr};
use super::AsymptoticError;

/// `|φ(x_n) − φ(y_n)|` along `n = 10, 10², …`, and on a tail window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub trace: Vec<(u64, f64)>,
    pub tail_start: u64,
    pub tail_max: f64,
    pub tol: f64,
    pub passes: bool,
}

const TAIL_START: u64 = 10_000_000;
const TAIL_LEN: u64 = 1024;

fn eval_at(phi: &Expr, s: &SeqExpr, n: u64) -> Result<f64, AsymptoticError> {
    let v: BigInt = s.eval(&BigInt::from(n));
    let x = v
        .to_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| AsymptoticError::Precondition(format!("{s} at n = {n} does not fit in a double")))?;
    Ok(phi.eval(Env { x, k: None })?)
}

/// Checks that `φ(x_n) − φ(y_n) → 0` for finitely close sequences `x ∼ y`
/// tending to infinity.
pub fn slow_oscillation_pair_check(
    phi: &Expr,
    x: &SeqExpr,
    y: &SeqExpr,
    tol: f64,
) -> Result<PairReport, AsymptoticError> {
    if !x.tends_to_infinity() || !y.tends_to_infinity() {
        return Err(AsymptoticError::Precondition(format!("{x} and {y} must both tend to infinity")));
    }
    if !x.finitely_close(y) {
        return Err(AsymptoticError::Precondition(format!("{x} and {y} are not finitely close")));
    }
    let mut trace = Vec::new();
    for e in 1..=7u32 {
        let n = 10u64.pow(e);
        trace.push((n, (eval_at(phi, x, n)? - eval_at(phi, y, n)?).abs()));
    }
    let mut tail_max = 0.0f64;
    for n in TAIL_START..TAIL_START + TAIL_LEN {
        tail_max = tail_max.max((eval_at(phi, x, n)? - eval_at(phi, y, n)?).abs());
    }
    Ok(PairReport { trace, tail_start: TAIL_START, tail_max, tol, passes: tail_max <= tol })
}

/// A cell where the product inequality failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellViolation {
    pub k: u32,
    pub r: u64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HigsonReport {
    pub phi: OscillationReport,
    pub psi: OscillationReport,
    pub sum: OscillationReport,
    pub product: OscillationReport,
    pub conj_phi: OscillationReport,
    pub conj_psi: OscillationReport,
    pub cells_checked: usize,
    pub product_bound_violations: Vec<CellViolation>,
}

impl HigsonReport {
    pub fn closed(&self) -> bool {
        [&self.sum, &self.product, &self.conj_phi, &self.conj_psi].iter().all(|r| r.verdict.is_consistent())
            && self.product_bound_violations.is_empty()
    }
}

pub const SUP_NORM_CAP: f64 = 1e6;

fn require_consistent(name: &str, rep: &OscillationReport) -> Result<(), AsymptoticError> {
    if rep.verdict.is_consistent() {
        Ok(())
    } else {
        Err(AsymptoticError::Precondition(format!("{name} = {} is {}, not consistent", rep.expr, rep.verdict.name())))
    }
}

fn require_bounded(rep: &OscillationReport) -> Result<(), AsymptoticError> {
    if rep.sup_norm > SUP_NORM_CAP {
        return Err(AsymptoticError::Unbounded { estimate: rep.sup_norm, cap: SUP_NORM_CAP, x: rep.sup_at });
    }
    Ok(())
}

/// Sum, product and conjugates of two slowly oscillating functions, with
/// `osc(φψ) ≤ ‖φ‖·osc(ψ) + ‖ψ‖·osc(φ) + osc(φ)·osc(ψ)` checked cellwise.
pub fn higson_ops(phi: &ComplexExpr, psi: &ComplexExpr, cfg: &OscConfig) -> Result<HigsonReport, AsymptoticError> {
    let phi_rep = oscillation(phi, cfg)?;
    let psi_rep = oscillation(psi, cfg)?;
    require_bounded(&phi_rep)?;
    require_bounded(&psi_rep)?;
    require_consistent("φ", &phi_rep)?;
    require_consistent("ψ", &psi_rep)?;
    let sum = oscillation(&phi.add(psi), cfg)?;
    let product = oscillation(&phi.mul(psi), cfg)?;
    let conj_phi = oscillation(&phi.conj(), cfg)?;
    let conj_psi = oscillation(&psi.conj(), cfg)?;

    // Base cells range over identical pairs for all three functions.
    let (np, nq) = (phi_rep.sup_norm, psi_rep.sup_norm);
    let slack = 1e-12 * (1.0 + np * nq);
    let mut violations = Vec::new();
    let mut cells = 0;
    for (i, &k) in cfg.widths.iter().enumerate() {
        for (j, &r) in cfg.radii.iter().enumerate() {
            let (a, b) = (phi_rep.base_estimates[i][j], psi_rep.base_estimates[i][j]);
            let lhs = product.base_estimates[i][j];
            let rhs = np * b + nq * a + a * b;
            cells += 1;
            if lhs > rhs + slack {
                violations.push(CellViolation { k, r, lhs, rhs });
            }
        }
    }
    Ok(HigsonReport {
        phi: phi_rep,
        psi: psi_rep,
        sum,
        product,
        conj_phi,
        conj_psi,
        cells_checked: cells,
        product_bound_violations: violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub eta: f64,
    pub omega: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionReport {
    pub f: String,
    pub composite: String,
    pub range: (f64, f64),
    pub modulus: Vec<ModulusEstimate>,
    pub oscillation: OscillationReport,
}

impl CompositionReport {
    pub fn holds(&self) -> bool {
        self.oscillation.verdict.is_consistent()
    }
}

const MODULUS_GRID: usize = 1024;
/// Fractions of `η` probed from each grid point.
const MODULUS_OFFSETS: [f64; 7] = [1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 7.0, 1.0 / 10.0, 1.0 / 31.0, 1.0 / 100.0];

/// `sup |g(s) − g(t)|` over `|s − t| ≤ η` with `s, t` in `[lo, hi]`, on a grid.
fn modulus(g: &Expr, lo: f64, hi: f64, eta: f64) -> Result<f64, AsymptoticError> {
    let mut omega = 0.0f64;
    for i in 0..=MODULUS_GRID {
        let s = lo + (hi - lo) * i as f64 / MODULUS_GRID as f64;
        let gs = g.eval_x(s)?;
        for u in MODULUS_OFFSETS.iter().flat_map(|&u| [u, -u]) {
            let t = s + u * eta;
            if t < lo || t > hi {
                continue;
            }
            omega = omega.max((gs - g.eval_x(t)?).abs());
        }
    }
    Ok(omega)
}

/// Slow oscillation of `g∘φ∘f` for `f` proper and bornologous, `φ` slowly
/// oscillating and `g` uniformly continuous on the range of `φ`.
pub fn composition_check(
    f: &SeqExpr,
    phi: &Expr,
    g: &Expr,
    cfg: &OscConfig,
) -> Result<CompositionReport, AsymptoticError> {
    let fin_inf = fin_inf_theorem_check(f);
    if !fin_inf.proper {
        return Err(AsymptoticError::Precondition(format!("f = {f} is not proper")));
    }
    let step = f.compose(&SeqExpr::from_i64s(&[1, 1]));
    if !step.finitely_close(f) {
        return Err(AsymptoticError::Precondition(format!("f = {f} is not bornologous")));
    }
    let phi_rep = oscillation(phi, cfg)?;
    require_consistent("φ", &phi_rep)?;
    let (lo, hi) = phi_rep.real_range;
    let modulus: Vec<ModulusEstimate> = [1e-2, 1e-4]
        .into_iter()
        .map(|eta| Ok(ModulusEstimate { eta, omega: modulus(g, lo, hi, eta)? }))
        .collect::<Result<_, AsymptoticError>>()?;
    if modulus[1].omega > 0.5 * modulus[0].omega + 1e-12 {
        return Err(AsymptoticError::Precondition(format!(
            "g = {g} does not look uniformly continuous on [{lo}, {hi}]: ω(1e-2) = {:e}, ω(1e-4) = {:e}",
            modulus[0].omega, modulus[1].omega
        )));
    }
    let composite = g.substitute(Var::X, &phi.substitute(Var::X, &f.to_expr(Var::X)));
    let rep = oscillation(&composite, cfg)?;
    Ok(CompositionReport {
        f: f.to_string(),
        composite: composite.to_string(),
        range: (lo, hi),
        modulus,
        oscillation: rep,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformLimitReport {
    pub epsilons: Vec<f64>,
    pub certificate_points: usize,
    pub members_consistent: bool,
    pub limit: OscillationReport,
    pub members: Vec<OscillationReport>,
    pub chain_violations: Vec<(usize, CellViolation)>,
}

impl UniformLimitReport {
    pub fn holds(&self) -> bool {
        (!self.members_consistent || self.limit.verdict.is_consistent()) && self.chain_violations.is_empty()
    }
}

/// Points used to validate a uniform error certificate.
fn certificate_points(cfg: &OscConfig) -> Vec<i64> {
    let mut xs: Vec<i64> = (-1000..=1000).collect();
    for (j, &r) in cfg.radii.iter().enumerate() {
        xs.extend(annulus_sample(cfg.seed, j, r, cfg.samples));
    }
    xs
}

/// Checks that the uniform limit `ψ` of slowly oscillating `φ_j` is slowly
/// oscillating, given certified bounds `sup |φ_j − ψ| ≤ ε_j`.
pub fn uniform_limit_check(
    family: &[(Expr, f64)],
    psi: &Expr,
    cfg: &OscConfig,
) -> Result<UniformLimitReport, AsymptoticError> {
    if family.is_empty() {
        return Err(AsymptoticError::Precondition("the family is empty".into()));
    }
    let points = certificate_points(cfg);
    for (index, (phi, eps)) in family.iter().enumerate() {
        if !(*eps >= 0.0) {
            return Err(AsymptoticError::Precondition(format!("ε_{index} must be nonnegative")));
        }
        for &x in &points {
            let env = Env { x: x as f64, k: None };
            let gap = (phi.eval(env)? - psi.eval(env)?).abs();
            if gap > eps + 1e-12 {
                return Err(AsymptoticError::Certificate { index, x, gap, epsilon: *eps });
            }
        }
    }
    let limit = oscillation(psi, cfg)?;
    let members: Vec<OscillationReport> =
        family.iter().map(|(phi, _)| oscillation(phi, cfg)).collect::<Result<_, _>>()?;
    let members_consistent = members.iter().all(|m| m.verdict.is_consistent());
    let mut chain_violations = Vec::new();
    for (idx, (m, (_, eps))) in members.iter().zip(family).enumerate() {
        for (i, &k) in cfg.widths.iter().enumerate() {
            for (j, &r) in cfg.radii.iter().enumerate() {
                let lhs = limit.base_estimates[i][j];
                let rhs = m.base_estimates[i][j] + 2.0 * eps;
                if lhs > rhs + 1e-12 {
                    chain_violations.push((idx, CellViolation { k, r, lhs, rhs }));
                }
            }
        }
    }
    Ok(UniformLimitReport {
        epsilons: family.iter().map(|(_, e)| *e).collect(),
        certificate_points: points.len(),
        members_consistent,
        limit,
        members,
        chain_violations,
    })
}

/// `Σ_{i ≤ j} 2^{-i}·sin(log1p(abs(x)))/i`.
pub fn geometric_partial_sum(j: u32) -> Expr {
    let base = Expr::call(
        super::expr::Func::Sin,
        Expr::call(super::expr::Func::Log1p, Expr::call(super::expr::Func::Abs, Expr::x())),
    );
    let mut acc: Option<Expr> = None;
    for i in 1..=j {
        let coeff = num_rational::BigRational::new(BigInt::from(1), BigInt::from(2).pow(i) * BigInt::from(i));
        debug_assert!(!coeff.is_zero());
        let term = Expr::mul(Expr::rational(coeff), base.clone());
        acc = Some(match acc {
            None => term,
            Some(a) => Expr::add(a, term),
        });
    }
    acc.unwrap_or_else(|| Expr::num(0))
}

/// The family `φ_1, …, φ_8` with `ε_j = 2^{-j}` and limit `φ_20`.
pub fn geometric_family() -> (Vec<(Expr, f64)>, Expr) {
    let family = (1..=8).map(|j| (geometric_partial_sum(j), 2f64.powi(-(j as i32)))).collect();
    (family, geometric_partial_sum(20))
}

/// Whether a verdict is falsified.
pub fn is_falsified(v: &OscVerdict) -> bool {
    matches!(v, OscVerdict::Falsified { .. })
}
