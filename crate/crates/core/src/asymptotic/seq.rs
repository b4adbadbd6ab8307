//! Points of the integers at infinity, modelled as integer polynomial
//! sequences `n ↦ s(n)`.
//!
//! A sequence is finite (bounded) exactly when its degree is at most zero,
//! and two sequences are finitely close when their difference is bounded.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::expr::{Expr, Var};

/// Integer polynomial in `n`, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SeqExpr {
    coeffs: Vec<BigInt>,
}

impl SeqExpr {
    pub fn new(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        SeqExpr { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        SeqExpr::new(coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn constant(c: i64) -> Self {
        SeqExpr::from_i64s(&[c])
    }

    /// The sequence `n`.
    pub fn n() -> Self {
        SeqExpr::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero sequence.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Bounded sequences are the finite points.
    pub fn is_bounded(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn tends_to_infinity(&self) -> bool {
        !self.is_bounded()
    }

    pub fn finitely_close(&self, other: &SeqExpr) -> bool {
        self.sub(other).is_bounded()
    }

    pub fn add(&self, other: &SeqExpr) -> SeqExpr {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        SeqExpr::new((0..len).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)))
    }

    pub fn neg(&self) -> SeqExpr {
        SeqExpr::new(self.coeffs.iter().map(|c| -c))
    }

    pub fn sub(&self, other: &SeqExpr) -> SeqExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SeqExpr) -> SeqExpr {
        if self.is_zero() || other.is_zero() {
            return SeqExpr::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        SeqExpr::new(out)
    }

    /// `self ∘ inner`, i.e. `n ↦ self(inner(n))`.
    pub fn compose(&self, inner: &SeqExpr) -> SeqExpr {
        let mut acc = SeqExpr::default();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&SeqExpr::new([c.clone()]));
        }
        acc
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    /// The same polynomial as an expression in `var`.
    pub fn to_expr(&self, var: Var) -> Expr {
        let mut out: Option<Expr> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut mono = (0..i).fold(None, |acc: Option<Expr>, _| {
                Some(match acc {
                    None => Expr::Var(var),
                    Some(e) => Expr::mul(e, Expr::Var(var)),
                })
            });
            let mag = Expr::rational(c.abs().into());
            mono = Some(match mono {
                None => mag,
                Some(m) if c.abs().is_one() => m,
                Some(m) => Expr::mul(mag, m),
            });
            let mono = mono.expect("set above");
            out = Some(match out {
                None if c.is_negative() => Expr::neg(mono),
                None => mono,
                Some(e) if c.is_negative() => Expr::sub(e, mono),
                Some(e) => Expr::add(e, mono),
            });
        }
        out.unwrap_or_else(|| Expr::num(0)).normalize()
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("n")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Definition side and sequence side of the finite/infinite point theorem
/// for a polynomial map of the integers.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FinInfReport {
    pub map: String,
    /// Bounded sets have bounded images.
    pub bornological: bool,
    /// Bounded sets have bounded preimages.
    pub proper: bool,
    /// Every probed finite point maps to a finite point.
    pub fin_to_fin: bool,
    /// Every probed infinite point maps to an infinite point.
    pub inf_to_inf: bool,
    pub probes: usize,
}

impl FinInfReport {
    pub fn agree(&self) -> bool {
        self.bornological == self.fin_to_fin && self.proper == self.inf_to_inf
    }
}

/// Sequences used to probe the finite and infinite points.
pub fn probe_sequences() -> Vec<SeqExpr> {
    vec![
        SeqExpr::constant(-3),
        SeqExpr::constant(0),
        SeqExpr::constant(7),
        SeqExpr::n(),
        SeqExpr::n().neg(),
        SeqExpr::from_i64s(&[0, 0, 1]),
        SeqExpr::from_i64s(&[0, -1, 1]),
        SeqExpr::from_i64s(&[1, 2]),
    ]
}

/// Checks the finite/infinite point theorem for `f`.
///
/// On the integers with the bounded bornology every polynomial is
/// bornological, and it is proper exactly when it is non-constant.
pub fn fin_inf_theorem_check(f: &SeqExpr) -> FinInfReport {
    let bornological = true;
    let proper = f.degree().is_some_and(|d| d >= 1);
    let probes = probe_sequences();
    let mut fin_to_fin = true;
    let mut inf_to_inf = true;
    for s in &probes {
        let image = f.compose(s);
        if s.is_bounded() && !image.is_bounded() {
            fin_to_fin = false;
        }
        if s.tends_to_infinity() && !image.tends_to_infinity() {
            inf_to_inf = false;
        }
    }
    let report =
        FinInfReport { map: f.to_string(), bornological, proper, fin_to_fin, inf_to_inf, probes: probes.len() };
    assert!(report.agree(), "finite/infinite point theorem fails for {f}: {report:?}");
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> SeqExpr {
        SeqExpr::from_i64s(c)
    }

    /// Numeric oracle: a polynomial is unbounded on n ≤ 10⁶ in the sense
    /// that its values at 10³ and 10⁶ grow.
    fn numerically_divergent(p: &SeqExpr) -> bool {
        let a = p.eval(&BigInt::from(1_000)).abs();
        let b = p.eval(&BigInt::from(1_000_000)).abs();
        b > a.clone() * 100 || (b > a && b > BigInt::from(1_000_000_000))
    }

    #[test]
    fn predicates() {
        assert!(s(&[7]).is_bounded());
        assert!(SeqExpr::n().tends_to_infinity());
        let p = s(&[0, -1, 1]);
        assert!(p.tends_to_infinity());
        assert!(numerically_divergent(&p));
        assert!(!numerically_divergent(&s(&[7])));
        assert!(s(&[]).is_bounded());
        assert_eq!(s(&[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn closeness() {
        let n = SeqExpr::n();
        assert!(n.finitely_close(&s(&[5, 1])));
        assert!(!n.finitely_close(&s(&[0, 2])));
        assert!(s(&[0, 3, 1]).finitely_close(&s(&[-100, 3, 1])));
    }

    #[test]
    fn closeness_is_an_equivalence() {
        let pool = [s(&[]), s(&[4]), s(&[0, 1]), s(&[9, 1]), s(&[0, 2]), s(&[1, 0, 1]), s(&[0, 5, 1])];
        for a in &pool {
            assert!(a.finitely_close(a));
            for b in &pool {
                assert_eq!(a.finitely_close(b), b.finitely_close(a));
                for c in &pool {
                    if a.finitely_close(b) && b.finitely_close(c) {
                        assert!(a.finitely_close(c));
                    }
                }
            }
        }
    }

    #[test]
    fn arithmetic_matches_evaluation() {
        let a = s(&[3, -2, 1]);
        let b = s(&[-1, 4]);
        for n in -5i64..=5 {
            let n = BigInt::from(n);
            assert_eq!(a.add(&b).eval(&n), a.eval(&n) + b.eval(&n));
            assert_eq!(a.mul(&b).eval(&n), a.eval(&n) * b.eval(&n));
            assert_eq!(a.compose(&b).eval(&n), a.eval(&b.eval(&n)));
        }
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn display_and_expression() {
        assert_eq!(s(&[0, -1, 1]).to_string(), "n^2 - n");
        assert_eq!(s(&[-3, 0, 0, 2]).to_string(), "2n^3 - 3");
        assert_eq!(s(&[]).to_string(), "0");
        let e = s(&[-3, 2, -1]).to_expr(Var::X);
        assert_eq!(e.to_string(), "-3 + 2 * x - x * x");
        for x in -4..=4 {
            assert_eq!(e.eval_x(x as f64).unwrap(), -3.0 + 2.0 * x as f64 - (x * x) as f64);
        }
    }

    #[test]
    fn fin_inf_examples() {
        let r = fin_inf_theorem_check(&s(&[0, 2]));
        assert!(r.bornological && r.proper);
        let r = fin_inf_theorem_check(&s(&[5]));
        assert!(r.bornological && !r.proper);
        assert!(!r.inf_to_inf);
        let r = fin_inf_theorem_check(&s(&[0, 0, 1]));
        assert!(r.bornological && r.proper);
    }
}
