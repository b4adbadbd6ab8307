//! Bounded and bornivorous sets in `ℚ^d`, linear maps as rational
//! matrices, and families of maps indexed by `k ∈ ℕ`.
//!
//! Sets are finite unions of axis-aligned boxes whose sides are rational
//! intervals, possibly unbounded and with open or closed ends. Containment
//! between such unions is decided exactly by sweeping the cells cut out by
//! all endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotic::expr::{Env, EvalError, Expr, Func, Var};
use crate::asymptotic::SeqExpr;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LinearError {
    #[error("empty interval: {0}")]
    EmptyInterval(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed family: {0}")]
    Malformed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Infinite,
    Closed(Q),
    Open(Q),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Q> {
        match self {
            Endpoint::Infinite => None,
            Endpoint::Closed(v) | Endpoint::Open(v) => Some(v),
        }
    }

    fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }

    fn map(&self, f: impl Fn(&Q) -> Q) -> Endpoint {
        match self {
            Endpoint::Infinite => Endpoint::Infinite,
            Endpoint::Closed(v) => Endpoint::Closed(f(v)),
            Endpoint::Open(v) => Endpoint::Open(f(v)),
        }
    }
}

/// A nonempty interval of `ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self, LinearError> {
        let i = Interval { lo, hi };
        if let (Some(a), Some(b)) = (i.lo.value(), i.hi.value()) {
            let ok = match a.cmp(b) {
                Ordering::Less => true,
                Ordering::Equal => i.lo.is_closed() && i.hi.is_closed(),
                Ordering::Greater => false,
            };
            if !ok {
                return Err(LinearError::EmptyInterval(i.to_string()));
            }
        }
        Ok(i)
    }

    pub fn closed(a: Q, b: Q) -> Result<Self, LinearError> {
        Interval::new(Endpoint::Closed(a), Endpoint::Closed(b))
    }

    pub fn open(a: Q, b: Q) -> Result<Self, LinearError> {
        Interval::new(Endpoint::Open(a), Endpoint::Open(b))
    }

    pub fn point(a: Q) -> Self {
        Interval { lo: Endpoint::Closed(a.clone()), hi: Endpoint::Closed(a) }
    }

    pub fn line() -> Self {
        Interval { lo: Endpoint::Infinite, hi: Endpoint::Infinite }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn contains(&self, v: &Q) -> bool {
        let above = match &self.lo {
            Endpoint::Infinite => true,
            Endpoint::Closed(a) => v >= a,
            Endpoint::Open(a) => v > a,
        };
        let below = match &self.hi {
            Endpoint::Infinite => true,
            Endpoint::Closed(b) => v <= b,
            Endpoint::Open(b) => v < b,
        };
        above && below
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        let above = match &self.lo {
            Endpoint::Infinite => true,
            Endpoint::Closed(a) => v >= a.to_f64().unwrap_or(f64::NAN),
            Endpoint::Open(a) => v > a.to_f64().unwrap_or(f64::NAN),
        };
        let below = match &self.hi {
            Endpoint::Infinite => true,
            Endpoint::Closed(b) => v <= b.to_f64().unwrap_or(f64::NAN),
            Endpoint::Open(b) => v < b.to_f64().unwrap_or(f64::NAN),
        };
        above && below
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value().is_some() && self.hi.value().is_some()
    }

    /// Largest `|v|` over finite endpoints.
    pub fn max_abs(&self) -> Option<Q> {
        [self.lo.value(), self.hi.value()].into_iter().flatten().map(Signed::abs).max()
    }

    /// `r·I` for `r > 0`.
    pub fn scale(&self, r: &Q) -> Interval {
        debug_assert!(r.is_positive());
        Interval { lo: self.lo.map(|v| v * r), hi: self.hi.map(|v| v * r) }
    }

    /// The elementary cells of this interval cut at `breaks`, each with a
    /// representative point. Membership in any interval whose endpoints
    /// are among `breaks` is constant on each cell.
    fn cells(&self, breaks: &[Q]) -> Vec<Q> {
        if let (Some(a), Some(b)) = (self.lo.value(), self.hi.value()) {
            if a == b {
                return vec![a.clone()];
            }
        }
        let inner: Vec<&Q> = breaks
            .iter()
            .filter(|v| self.contains(v) && Some(*v) != self.lo.value() && Some(*v) != self.hi.value())
            .collect();
        let mut reps = Vec::with_capacity(2 * inner.len() + 3);
        if let Endpoint::Closed(a) = &self.lo {
            reps.push(a.clone());
        }
        let mut prev: Option<&Q> = self.lo.value();
        let two = q(2);
        for v in inner.iter().copied().chain(self.hi.value()) {
            reps.push(match prev {
                None => v - Q::one(),
                Some(p) => (p + v) / &two,
            });
            if inner.contains(&v) {
                reps.push(v.clone());
            }
            prev = Some(v);
        }
        if self.hi.value().is_none() {
            reps.push(match prev {
                None => Q::zero(),
                Some(p) => p + Q::one(),
            });
        }
        if let Endpoint::Closed(b) = &self.hi {
            if self.lo.value() != Some(b) {
                reps.push(b.clone());
            }
        }
        reps
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Endpoint::Infinite => f.write_str("(-inf")?,
            Endpoint::Closed(a) => write!(f, "[{a}")?,
            Endpoint::Open(a) => write!(f, "({a}")?,
        }
        f.write_str(", ")?;
        match &self.hi {
            Endpoint::Infinite => f.write_str("inf)"),
            Endpoint::Closed(b) => write!(f, "{b}]"),
            Endpoint::Open(b) => write!(f, "{b})"),
        }
    }
}

/// A product of intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cuboid {
    sides: Vec<Interval>,
}

impl Cuboid {
    pub fn new(sides: Vec<Interval>) -> Result<Self, LinearError> {
        if sides.is_empty() {
            return Err(LinearError::Dimension("a box needs at least one side".into()));
        }
        Ok(Cuboid { sides })
    }

    /// `[-1, 1]^d`.
    pub fn unit(dim: usize) -> Self {
        Cuboid { sides: vec![Interval::closed(q(-1), q(1)).expect("nonempty"); dim] }
    }

    /// `(-s, s)^d`.
    pub fn open_cube(dim: usize, s: &Q) -> Self {
        Cuboid { sides: vec![Interval::open(-s.clone(), s.clone()).expect("s > 0"); dim] }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        self.sides.iter().zip(p).all(|(s, v)| s.contains(v))
    }

    pub fn is_bounded(&self) -> bool {
        self.sides.iter().all(Interval::is_bounded)
    }

    pub fn scale(&self, r: &Q) -> Cuboid {
        Cuboid { sides: self.sides.iter().map(|s| s.scale(r)).collect() }
    }

    /// Corners of the closure of a bounded box.
    pub fn corners(&self) -> Vec<Vec<Q>> {
        assert!(self.is_bounded(), "corners of an unbounded box");
        let mut out = vec![Vec::new()];
        for s in &self.sides {
            let (a, b) = (s.lo.value().expect("bounded"), s.hi.value().expect("bounded"));
            out = out
                .into_iter()
                .flat_map(|p| {
                    let ends: Vec<&Q> = if a == b { vec![a] } else { vec![a, b] };
                    ends.into_iter().map(move |e| {
                        let mut p = p.clone();
                        p.push(e.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Cuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sides: Vec<String> = self.sides.iter().map(ToString::to_string).collect();
        f.write_str(&sides.join(" × "))
    }
}

/// A finite union of boxes in `ℚ^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSet {
    dim: usize,
    boxes: Vec<Cuboid>,
}

impl BoxSet {
    pub fn new(dim: usize, boxes: Vec<Cuboid>) -> Result<Self, LinearError> {
        if dim == 0 {
            return Err(LinearError::Dimension("dimension must be positive".into()));
        }
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(LinearError::Dimension(format!("box {b} is not {dim}-dimensional")));
        }
        Ok(BoxSet { dim, boxes })
    }

    pub fn single(b: Cuboid) -> Self {
        BoxSet { dim: b.dim(), boxes: vec![b] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[Cuboid] {
        &self.boxes
    }

    pub fn contains_point(&self, p: &[Q]) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn scale(&self, r: &Q) -> BoxSet {
        assert!(r.is_positive(), "scale factor must be positive");
        BoxSet { dim: self.dim, boxes: self.boxes.iter().map(|b| b.scale(r)).collect() }
    }

    /// Whether `target ⊆ self`.
    pub fn contains_box(&self, target: &Cuboid) -> bool {
        assert_eq!(target.dim(), self.dim, "dimension mismatch");
        let all: Vec<&Cuboid> = self.boxes.iter().collect();
        covers(&all, target, 0)
    }

    pub fn contains_set(&self, other: &BoxSet) -> bool {
        other.boxes.iter().all(|b| self.contains_box(b))
    }

    pub fn is_vn_bounded(&self) -> bool {
        self.boxes.iter().all(Cuboid::is_bounded)
    }

    /// Smallest `r` with `self ⊆ r·[-1, 1]^d`, if any.
    pub fn vn_radius(&self) -> Option<Q> {
        if !self.is_vn_bounded() {
            return None;
        }
        Some(self.boxes.iter().flat_map(|b| b.sides.iter().filter_map(Interval::max_abs)).max().unwrap_or_else(Q::zero))
    }

    /// Half the smallest positive endpoint magnitude, or 1.
    pub fn bornivorous_probe(&self) -> Q {
        self.boxes
            .iter()
            .flat_map(|b| b.sides.iter().flat_map(|s| [s.lo.value(), s.hi.value()]))
            .flatten()
            .filter(|v| !v.is_zero())
            .map(Signed::abs)
            .min()
            .map_or_else(Q::one, |m| m / q(2))
    }

    /// Whether the set contains an open cube around the origin.
    pub fn is_bornivorous(&self) -> bool {
        self.contains_box(&Cuboid::open_cube(self.dim, &self.bornivorous_probe()))
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.boxes.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

fn covers(boxes: &[&Cuboid], target: &Cuboid, coord: usize) -> bool {
    if coord == target.dim() {
        return !boxes.is_empty();
    }
    let mut breaks: Vec<Q> =
        boxes.iter().flat_map(|b| [b.sides[coord].lo.value(), b.sides[coord].hi.value()]).flatten().cloned().collect();
    breaks.sort();
    breaks.dedup();
    target.sides[coord].cells(&breaks).iter().all(|rep| {
        let live: Vec<&Cuboid> = boxes.iter().copied().filter(|b| b.sides[coord].contains(rep)).collect();
        !live.is_empty() && covers(&live, target, coord + 1)
    })
}

/// A linear map `ℚ^cols → ℚ^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self, LinearError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(LinearError::Dimension("matrix dimensions must be positive".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinearError::Dimension("ragged matrix rows".into()));
        }
        Ok(RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LinearError> {
        RationalMatrix::new(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n * n).map(|i| if i / n == i % n { Q::one() } else { Q::zero() }).collect();
        RationalMatrix { rows: n, cols: n, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.entry(i, j) * &x[j]).sum()).collect()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> Q {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.entry(i, j).abs()).sum::<Q>()).max().expect("rows > 0")
    }

    /// Bounding box of `m·B` by interval arithmetic, one closed side per
    /// output coordinate.
    pub fn image_hull(&self, b: &BoxSet) -> Result<Vec<(Q, Q)>, LinearError> {
        if b.dim() != self.cols {
            return Err(LinearError::Dimension(format!(
                "{}-dimensional set for a {}-column matrix",
                b.dim(),
                self.cols
            )));
        }
        if !b.is_vn_bounded() || b.boxes().is_empty() {
            return Err(LinearError::Precondition("image hull needs a nonempty bounded set".into()));
        }
        let mut hull: Option<Vec<(Q, Q)>> = None;
        for bx in b.boxes() {
            let sides: Vec<(&Q, &Q)> =
                bx.sides.iter().map(|s| (s.lo.value().unwrap(), s.hi.value().unwrap())).collect();
            let img: Vec<(Q, Q)> = (0..self.rows)
                .map(|i| {
                    let mut lo = Q::zero();
                    let mut hi = Q::zero();
                    for (j, (a, b)) in sides.iter().enumerate() {
                        let m = self.entry(i, j);
                        let (u, v) = (m * *a, m * *b);
                        if u <= v {
                            lo += u;
                            hi += v;
                        } else {
                            lo += v;
                            hi += u;
                        }
                    }
                    (lo, hi)
                })
                .collect();
            hull = Some(match hull {
                None => img,
                Some(h) => h.into_iter().zip(img).map(|((a, b), (c, d))| (a.min(c), b.max(d))).collect(),
            });
        }
        Ok(hull.expect("nonempty"))
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn inf_norm_vec(v: &[Q]) -> Q {
    v.iter().map(Signed::abs).max().unwrap_or_else(Q::zero)
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Q {
    let den = rng.random_range(1..=4i64);
    Q::new(rng.random_range(-span * den..=span * den).into(), den.into())
}

/// A random interval with endpoints in `[-span, span]`; unbounded with
/// probability `unbounded`.
pub(crate) fn random_interval(rng: &mut ChaCha8Rng, span: i64, unbounded: f64) -> Interval {
    loop {
        let end = |rng: &mut ChaCha8Rng, v: Q| {
            if rng.random_bool(unbounded) {
                Endpoint::Infinite
            } else if rng.random_bool(0.5) {
                Endpoint::Closed(v)
            } else {
                Endpoint::Open(v)
            }
        };
        let (a, b) = (random_rational(rng, span), random_rational(rng, span));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let lo = end(rng, a);
        let hi = end(rng, b);
        if let Ok(i) = Interval::new(lo, hi) {
            return i;
        }
    }
}

/// A random union of one to four boxes.
pub(crate) fn random_boxset(rng: &mut ChaCha8Rng, dim: usize, span: i64, unbounded: f64) -> BoxSet {
    let n = rng.random_range(1..=4);
    let boxes =
        (0..n).map(|_| Cuboid { sides: (0..dim).map(|_| random_interval(rng, span, unbounded)).collect() }).collect();
    BoxSet { dim, boxes }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    pub matrix: String,
    pub trials: usize,
    pub corners_checked: usize,
    pub norm: String,
}

/// Images of random bounded sets under `m` are bounded: the interval hull
/// is finite, equals the hull of the corner images, and every corner obeys
/// `‖m·x‖∞ ≤ ‖m‖∞·‖x‖∞`.
pub fn matrix_is_bornological(m: &RationalMatrix, trials: usize, seed: u64) -> MatrixReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = m.inf_norm();
    let mut corners_checked = 0;
    for _ in 0..trials {
        let b = random_boxset(&mut rng, m.cols, 10, 0.0);
        let hull = m.image_hull(&b).expect("random sets are bounded and nonempty");
        let mut corner_hull: Option<Vec<(Q, Q)>> = None;
        for bx in b.boxes() {
            for c in bx.corners() {
                let img = m.apply(&c);
                assert!(inf_norm_vec(&img) <= &norm * inf_norm_vec(&c), "operator norm bound fails for {m} at {c:?}");
                assert!(img.iter().zip(&hull).all(|(v, (a, b))| a <= v && v <= b), "corner image outside hull");
                corner_hull = Some(match corner_hull {
                    None => img.iter().map(|v| (v.clone(), v.clone())).collect(),
                    Some(h) => {
                        h.into_iter().zip(&img).map(|((a, b), v)| (a.min(v.clone()), b.max(v.clone()))).collect()
                    }
                });
                corners_checked += 1;
            }
        }
        assert_eq!(corner_hull.as_ref(), Some(&hull), "interval hull differs from corner hull for {m} on {b}");
    }
    MatrixReport { matrix: m.to_string(), trials, corners_checked, norm: norm.to_string() }
}

/// A family `f_k`, `k = 1, 2, …`.
#[derive(Clone, Debug, PartialEq)]
pub enum ParametricFamily {
    /// `f_k = c_k·A`.
    ScalarTimesMatrix { c: SeqExpr, a: RationalMatrix },
    /// `f_k(x)` given by an expression in `x` and `k`.
    Expression(Expr),
}

impl ParametricFamily {
    fn check(&self, on: &BoxSet) -> Result<(), LinearError> {
        match self {
            ParametricFamily::ScalarTimesMatrix { a, .. } if a.cols() != on.dim() => Err(LinearError::Malformed(
                format!("matrix has {} columns but the domain is {}-dimensional", a.cols(), on.dim()),
            )),
            ParametricFamily::Expression(_) if on.dim() != 1 => {
                Err(LinearError::Malformed("expression families act on 1-dimensional sets".into()))
            }
            _ if !on.is_vn_bounded() => Err(LinearError::Precondition(format!("{on} is not bounded"))),
            _ if on.boxes().is_empty() => Err(LinearError::Precondition("the domain is empty".into())),
            _ => Ok(()),
        }
    }

    /// `‖f_k(x)‖∞` in floating point.
    fn value(&self, k: u64, x: &[f64]) -> Result<f64, EvalError> {
        match self {
            ParametricFamily::ScalarTimesMatrix { c, a } => {
                let ck = c.eval(&BigInt::from(k)).to_f64().unwrap_or(f64::INFINITY);
                let mut best = 0.0f64;
                for i in 0..a.rows() {
                    let row: f64 = (0..a.cols()).map(|j| a.entry(i, j).to_f64().unwrap_or(0.0) * x[j]).sum();
                    best = best.max((ck * row).abs());
                }
                Ok(best)
            }
            ParametricFamily::Expression(e) => e.eval(Env { x: x[0], k: Some(k as f64) }).map(f64::abs),
        }
    }

    fn difference(&self, k: u64, x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
        match self {
            ParametricFamily::ScalarTimesMatrix { .. } => {
                let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                self.value(k, &d)
            }
            ParametricFamily::Expression(e) => {
                let fx = e.eval(Env { x: x[0], k: Some(k as f64) })?;
                let fy = e.eval(Env { x: y[0], k: Some(k as f64) })?;
                Ok((fx - fy).abs())
            }
        }
    }
}

/// A point `(k, x)` at which `|f_k(x)|` exceeds the threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueWitness {
    pub k: u64,
    pub x: Vec<f64>,
    pub value: f64,
}

/// Points `x, x′` with `|x − x′| ≤ δ` and `|f_k(x) − f_k(x′)| ≥ gap`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityWitness {
    pub k: u64,
    pub x: Vec<f64>,
    pub x2: Vec<f64>,
    pub distance: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Finding<W> {
    /// Proved, with the reason.
    Certified {
        reason: String,
    },
    Falsified {
        witness: W,
    },
    /// Sampling found no counterexample.
    Unrefuted {
        samples: usize,
    },
}

impl<W> Finding<W> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Finding::Certified { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, Finding::Falsified { .. })
    }
}

/// Values above this count as unbounded growth.
pub const VALUE_THRESHOLD: f64 = 1e3;
pub const MAX_K: u64 = 10_000;
pub const CONTINUITY_DELTA: f64 = 1e-3;
pub const CONTINUITY_GAP: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquiboundedVerdict {
    /// Three independent decisions for `c_k·A`.
    Scalar {
        equibounded: bool,
        simply_bounded: bool,
        sup_bounded: bool,
        image_is_zero: bool,
    },
    Expression {
        finding: Finding<ValueWitness>,
    },
}

impl EquiboundedVerdict {
    /// `None` when sampling neither proved nor refuted the property.
    pub fn equibounded(&self) -> Option<bool> {
        match self {
            EquiboundedVerdict::Scalar { equibounded, .. } => Some(*equibounded),
            EquiboundedVerdict::Expression { finding: Finding::Certified { .. } } => Some(true),
            EquiboundedVerdict::Expression { finding: Finding::Falsified { .. } } => Some(false),
            EquiboundedVerdict::Expression { finding: Finding::Unrefuted { .. } } => None,
        }
    }

    /// Whether the three scalar decisions agree where they must.
    pub fn consistent(&self) -> bool {
        match self {
            EquiboundedVerdict::Scalar { equibounded, simply_bounded, sup_bounded, image_is_zero } => {
                equibounded == simply_bounded && (*image_is_zero || equibounded == sup_bounded)
            }
            EquiboundedVerdict::Expression { .. } => true,
        }
    }
}

/// Sample points of a bounded set in floating point.
fn sample_points(on: &BoxSet, rng: &mut ChaCha8Rng, per_box: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for b in on.boxes() {
        let ends: Vec<(f64, f64)> = b
            .sides()
            .iter()
            .map(|s| (s.lo.value().unwrap().to_f64().unwrap(), s.hi.value().unwrap().to_f64().unwrap()))
            .collect();
        for c in b.corners() {
            if b.contains(&c) {
                out.push(c.iter().map(|v| v.to_f64().unwrap()).collect());
            }
        }
        for i in 0..per_box {
            let p: Vec<f64> = ends
                .iter()
                .map(|&(a, z)| {
                    let u = if i < per_box / 2 {
                        (i as f64 + 0.5) / (per_box / 2) as f64
                    } else {
                        rng.random_range(0.0..1.0)
                    };
                    a + (z - a) * u
                })
                .collect();
            if b.sides().iter().zip(&p).all(|(s, &v)| s.contains_f64(v)) {
                out.push(p);
            }
        }
    }
    out
}

fn k_values(rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut ks: Vec<u64> = (1..=200).collect();
    ks.extend((0..=40).map(|i| (10f64.powf(2.0 + 2.0 * i as f64 / 40.0)).round() as u64));
    ks.extend((0..200).map(|_| rng.random_range(1..=MAX_K)));
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Upper bound on `|e|` over all `k` and all `|x| ≤ x_bound`, when the
/// expression gives one.
fn sup_bound(e: &Expr, x_bound: f64) -> Option<f64> {
    let b = match e {
        Expr::Num(_) => e.eval_x(0.0).ok()?.abs(),
        Expr::Var(Var::X) => x_bound,
        Expr::Var(Var::K) => return None,
        Expr::Neg(a) => sup_bound(a, x_bound)?,
        Expr::Call(Func::Abs, a) => sup_bound(&a[0], x_bound)?,
        Expr::Call(Func::Sin | Func::Cos, _) => 1.0,
        Expr::Call(Func::Min | Func::Max, args) => {
            args.iter().map(|a| sup_bound(a, x_bound)).collect::<Option<Vec<_>>>()?.into_iter().fold(0.0, f64::max)
        }
        Expr::Bin(op, a, b) => {
            let sa = sup_bound(a, x_bound)?;
            match op {
                crate::asymptotic::expr::BinOp::Add | crate::asymptotic::expr::BinOp::Sub => {
                    sa + sup_bound(b, x_bound)?
                }
                crate::asymptotic::expr::BinOp::Mul => sa * sup_bound(b, x_bound)?,
                crate::asymptotic::expr::BinOp::Div => {
                    if b.uses(Var::X) || b.uses(Var::K) {
                        return None;
                    }
                    let d = b.eval_x(0.0).ok()?.abs();
                    if d == 0.0 {
                        return None;
                    }
                    sa / d
                }
            }
        }
        Expr::If { then, otherwise, .. } => sup_bound(then, x_bound)?.max(sup_bound(otherwise, x_bound)?),
        _ => return None,
    };
    b.is_finite().then_some(b)
}

fn simply_bounded_at_points(c: &SeqExpr, a: &RationalMatrix, on: &BoxSet) -> bool {
    // For each corner x the orbit k ↦ c_k·(A x)_i is a sequence with
    // rational leading factor; it is bounded iff the factor vanishes or c
    // is bounded. Clearing denominators keeps the test inside SeqExpr.
    on.boxes().iter().flat_map(Cuboid::corners).all(|x| {
        a.apply(&x).iter().all(|v| {
            let scaled = c.mul(&SeqExpr::new([v.numer().clone()]));
            scaled.is_bounded()
        })
    })
}

fn sup_bounded_numeric(c: &SeqExpr) -> bool {
    let at = |k: u64| c.eval(&BigInt::from(k)).abs();
    let early = (1..=1_000u64).map(at).max().expect("nonempty");
    at(1_000_000) <= early * 2
}

/// Equiboundedness of a family on a bounded set.
pub fn family_equibounded(fam: &ParametricFamily, on: &BoxSet, seed: u64) -> Result<EquiboundedVerdict, LinearError> {
    fam.check(on)?;
    match fam {
        ParametricFamily::ScalarTimesMatrix { c, a } => {
            let image_is_zero =
                on.boxes().iter().flat_map(Cuboid::corners).all(|x| a.apply(&x).iter().all(Zero::is_zero));
            Ok(EquiboundedVerdict::Scalar {
                equibounded: c.is_bounded() || image_is_zero,
                simply_bounded: simply_bounded_at_points(c, a, on),
                sup_bounded: sup_bounded_numeric(c),
                image_is_zero,
            })
        }
        ParametricFamily::Expression(e) => {
            let radius = on.vn_radius().expect("checked").to_f64().unwrap_or(f64::INFINITY);
            if let Some(bound) = sup_bound(e, radius) {
                return Ok(EquiboundedVerdict::Expression {
                    finding: Finding::Certified { reason: format!("|f_k(x)| ≤ {bound} for every k and x") },
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs = sample_points(on, &mut rng, 64);
            let ks = k_values(&mut rng);
            for &k in &ks {
                for x in &xs {
                    let value = fam.value(k, x)?;
                    if value > VALUE_THRESHOLD {
                        return Ok(EquiboundedVerdict::Expression {
                            finding: Finding::Falsified { witness: ValueWitness { k, x: x.clone(), value } },
                        });
                    }
                }
            }
            Ok(EquiboundedVerdict::Expression { finding: Finding::Unrefuted { samples: ks.len() * xs.len() } })
        }
    }
}

/// Equicontinuity of a family on a bounded set.
pub fn family_equicontinuous(
    fam: &ParametricFamily,
    on: &BoxSet,
    seed: u64,
) -> Result<Finding<ContinuityWitness>, LinearError> {
    fam.check(on)?;
    match fam {
        ParametricFamily::ScalarTimesMatrix { c, a } => {
            if c.is_bounded() || a.is_zero() {
                let sup = c.coeffs().first().map_or(BigInt::zero(), |v| v.abs());
                return Ok(Finding::Certified {
                    reason: format!("‖c_k·A‖∞ ≤ {sup}·{} for every k", a.inf_norm())
                });
            }
        }
        ParametricFamily::Expression(e) if !e.uses(Var::X) => {
            return Ok(Finding::Certified { reason: "f_k does not depend on x, modulus 0".into() });
        }
        ParametricFamily::Expression(_) => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = sample_points(on, &mut rng, 64);
    let ks = k_values(&mut rng);
    let dim = on.dim();
    let steps = [1.0, 0.5, 0.25, 0.1];
    let mut samples = 0;
    for &k in ks.iter().rev() {
        for x in &xs {
            for axis in 0..dim {
                for s in steps.iter().flat_map(|&s| [s, -s]) {
                    let mut y = x.clone();
                    y[axis] += s * CONTINUITY_DELTA;
                    let inside = on.boxes().iter().any(|b| b.sides().iter().zip(&y).all(|(i, &v)| i.contains_f64(v)));
                    if !inside {
                        continue;
                    }
                    samples += 1;
                    let gap = fam.difference(k, x, &y)?;
                    if gap >= CONTINUITY_GAP {
                        let distance = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                        return Ok(Finding::Falsified {
                            witness: ContinuityWitness { k, x: x.clone(), x2: y, distance, gap },
                        });
                    }
                }
            }
        }
    }
    Ok(Finding::Unrefuted { samples })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoResult {
    pub family: String,
    pub domain: String,
    pub equibounded: EquiboundedVerdict,
    pub equicontinuous: Finding<ContinuityWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearSampling {
    pub families: usize,
    /// Families where equiboundedness and equicontinuity differ.
    pub counterexamples: usize,
    /// Families where a sampled witness contradicted the exact verdict.
    pub contradictions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrigendumReport {
    pub sine: DemoResult,
    pub constants: DemoResult,
    pub linear: LinearSampling,
}

impl CorrigendumReport {
    /// Both nonlinear demos separate the two properties with certified
    /// witnesses, and no linear family does.
    pub fn holds(&self) -> bool {
        let sine_ok = matches!(
            &self.sine.equibounded,
            EquiboundedVerdict::Expression { finding: Finding::Certified { .. } }
        ) && matches!(&self.sine.equicontinuous, Finding::Falsified { witness } if witness.distance <= CONTINUITY_DELTA && witness.gap >= CONTINUITY_GAP);
        let constants_ok = self.constants.equicontinuous.is_certified()
            && matches!(
                &self.constants.equibounded,
                EquiboundedVerdict::Expression { finding: Finding::Falsified { .. } }
            );
        sine_ok && constants_ok && self.linear.counterexamples == 0 && self.linear.contradictions == 0
    }
}

fn demo(src: Expr, on: &BoxSet, seed: u64) -> Result<DemoResult, LinearError> {
    let fam = ParametricFamily::Expression(src.clone());
    Ok(DemoResult {
        family: src.to_string(),
        domain: on.to_string(),
        equibounded: family_equibounded(&fam, on, seed)?,
        equicontinuous: family_equicontinuous(&fam, on, seed)?,
    })
}

/// The two nonlinear families separating equiboundedness from
/// equicontinuity, and a sampled check that linear families never do.
pub fn corrigendum_demos(seed: u64) -> CorrigendumReport {
    let unit = BoxSet::single(Cuboid::new(vec![Interval::closed(q(0), q(1)).unwrap()]).unwrap());
    let sine = demo(Expr::call(Func::Sin, Expr::mul(Expr::k(), Expr::x())), &unit, seed).expect("well-formed");
    let constants = demo(Expr::k(), &unit, seed).expect("well-formed");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = 0;
    let mut contradictions = 0;
    let families = 60;
    for t in 0..families {
        let dim = 1 + t % 3;
        let rows = rng.random_range(1..=3);
        let a = RationalMatrix::new(
            (0..rows).map(|_| (0..dim).map(|_| Q::from_integer(rng.random_range(-3..=3).into())).collect()).collect(),
        )
        .unwrap();
        let c = match t % 4 {
            0 => SeqExpr::constant(rng.random_range(-5..=5)),
            1 => SeqExpr::from_i64s(&[rng.random_range(-5..=5), rng.random_range(1..=3)]),
            2 => SeqExpr::from_i64s(&[0, 0, 1]),
            _ => SeqExpr::constant(0),
        };
        let on = random_boxset(&mut rng, dim, 3, 0.0);
        let fam = ParametricFamily::ScalarTimesMatrix { c, a };
        let eb = family_equibounded(&fam, &on, seed + t as u64).expect("well-formed");
        let ec = family_equicontinuous(&fam, &on, seed + t as u64).expect("well-formed");
        let eb_exact = eb.equibounded().expect("exact for linear families");
        // Linear families that are not certified are not equicontinuous.
        let ec_exact = ec.is_certified();
        if !eb.consistent() {
            contradictions += 1;
        }
        // A linear family is bounded on a set with nonzero image iff it is
        // equicontinuous; on sets with zero image it is always bounded.
        let image_zero = matches!(eb, EquiboundedVerdict::Scalar { image_is_zero: true, .. });
        if !image_zero && eb_exact != ec_exact {
            counterexamples += 1;
        }
        if let Finding::Falsified { witness } = &ec {
            if ec_exact || witness.gap < CONTINUITY_GAP {
                contradictions += 1;
            }
        }
    }
    CorrigendumReport { sine, constants, linear: LinearSampling { families, counterexamples, contradictions } }
}
