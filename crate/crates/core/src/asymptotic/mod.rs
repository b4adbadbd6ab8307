//! The integers at infinity.
//!
//! Points at infinity are polynomial sequences ([`SeqExpr`]), functions are
//! expressions in the small language of [`expr`], and slow oscillation is
//! estimated numerically on annuli `R ≤ |x| ≤ 10R`.

pub mod expr;
pub mod higson;
pub mod oscillation;
pub mod seq;

pub use expr::{parse, EvalError, Expr, ParseError, Var};
pub use higson::{composition_check, higson_ops, slow_oscillation_pair_check, uniform_limit_check};
pub use oscillation::{oscillation, ComplexExpr, OscConfig, OscVerdict, OscillationReport};
pub use seq::{fin_inf_theorem_check, SeqExpr};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AsymptoticError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sup-norm estimate {estimate:e} exceeds the cap {cap:e} (at x = {x})")]
    Unbounded { estimate: f64, cap: f64, x: i64 },
    #[error("certificate falsified for member {index}: |φ(x) - ψ(x)| = {gap:e} > {epsilon:e} at x = {x}")]
    Certificate { index: usize, x: i64, gap: f64, epsilon: f64 },
}
