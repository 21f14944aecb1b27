//! Forward-difference calculus on real sequences and finite-order property
//! sweeps: monotone/alternating conditions, their log variants, and negative
//! domination.
//!
//! `T(n, k)` denotes the n-th iterated forward difference at index `k`,
//! `sum_i (-1)^i C(n,i) a_{k+i}`, and `LT(n, k)` the same combination applied
//! to the logs of the terms. The "completely monotone / alternating"
//! properties quantify over all orders; here they are certified over a
//! finite sweep `1 <= n <= N`, `0 <= k <= K`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{binomial_row, log_linear_sign, Scalar};

/// Absolute tolerance for float-mode sign checks: a value `v` passes a
/// `>= 0` test when `v >= -FLOAT_ABS_TOL`. Boundary passes are flagged
/// marginal instead of being silently accepted.
pub const FLOAT_ABS_TOL: f64 = 1e-10;

/// A lazily evaluated real sequence indexed by the non-negative integers.
#[derive(Clone)]
pub struct Sequence {
    eval: Arc<dyn Fn(usize) -> Result<Scalar> + Send + Sync>,
    positive: bool,
}

impl Sequence {
    /// Wrap an evaluation closure. With `positive` set, every queried term
    /// is checked to be `> 0` (required for the log tests).
    pub fn from_fn<F>(eval: F, positive: bool) -> Self
    where
        F: Fn(usize) -> Result<Scalar> + Send + Sync + 'static,
    {
        Sequence {
            eval: Arc::new(eval),
            positive,
        }
    }

    pub fn constant(value: Scalar) -> Self {
        let positive = value.is_positive();
        Sequence::from_fn(move |_| Ok(value.clone()), positive)
    }

    pub fn is_positive_flagged(&self) -> bool {
        self.positive
    }

    pub fn term(&self, index: usize) -> Result<Scalar> {
        let v = (self.eval)(index)?;
        if self.positive {
            let ok = match v.sign() {
                Some(o) => o == Ordering::Greater,
                None => v.to_f64() > 0.0,
            };
            if !ok {
                return Err(Error::NonPositiveTerm { index });
            }
        }
        if let Scalar::Float(x) = v {
            if !x.is_finite() {
                return Err(Error::domain(format!(
                    "sequence value at index {index} is not finite"
                )));
            }
        }
        Ok(v)
    }

    /// Termwise combination `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: Scalar, other: &Sequence, beta: Scalar) -> Sequence {
        let a = self.clone();
        let b = other.clone();
        Sequence::from_fn(
            move |j| Ok(alpha.mul(&a.term(j)?).add(&beta.mul(&b.term(j)?))),
            false,
        )
    }
}

/// Which finite-order sign property a sweep certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqProperty {
    /// `T(n,k) >= 0`
    Monotone,
    /// `T(n,k) <= 0`
    Alternating,
    /// `LT(n,k) >= 0`
    LogMonotone,
    /// `LT(n,k) <= 0`
    LogAlternating,
    /// `(nabla^m a)_j <= (nabla^m b)_j`, m from 0
    NegativelyDominates,
}

impl SeqProperty {
    pub fn is_log(self) -> bool {
        matches!(self, SeqProperty::LogMonotone | SeqProperty::LogAlternating)
    }

    /// Sign the tested quantity must have (Greater means `>= 0`).
    fn wanted(self) -> Ordering {
        match self {
            SeqProperty::Monotone | SeqProperty::LogMonotone => Ordering::Greater,
            SeqProperty::Alternating
            | SeqProperty::LogAlternating
            | SeqProperty::NegativelyDominates => Ordering::Less,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeqProperty::Monotone => "monotone",
            SeqProperty::Alternating => "alternating",
            SeqProperty::LogMonotone => "log-monotone",
            SeqProperty::LogAlternating => "log-alternating",
            SeqProperty::NegativelyDominates => "negatively-dominates",
        }
    }
}

/// First failing test of a sweep.
#[derive(Clone, Debug)]
pub struct Witness {
    pub order: usize,
    pub index: usize,
    pub value: Scalar,
}

/// Outcome of a finite-order property sweep.
#[derive(Clone, Debug)]
pub struct PropertyVerdict {
    pub property: SeqProperty,
    pub order_bound: usize,
    pub index_bound: usize,
    pub passed: bool,
    pub witness: Option<Witness>,
    /// Some test passed only within the float tolerance.
    pub marginal: bool,
    /// Some sign had to be decided in floating point.
    pub float_decided: bool,
}

/// `T_a(n, k)`: the n-th forward difference of `seq` at `k`, with exact
/// binomial coefficients. Exact mode yields an exact rational.
pub fn forward_diff(seq: &Sequence, n: usize, k: usize) -> Result<Scalar> {
    let coeffs = binomial_row(n);
    let mut acc = Scalar::zero();
    for (i, c) in coeffs.iter().enumerate() {
        let mut term = Scalar::from_big(BigRational::from_integer(c.clone()));
        if i % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term.mul(&seq.term(k + i)?));
    }
    Ok(acc)
}

/// Float value of `LT_a(n, k)` together with its exactly decided sign when
/// all involved terms are exact.
#[derive(Clone, Debug)]
pub struct LogDiff {
    pub value: f64,
    /// `Some` when the sign was decided exactly over big rationals.
    pub exact_sign: Option<Ordering>,
}

/// `LT_a(n, k)`: the n-th forward difference of `ln a` at `k`. The float
/// value is always produced; for exact positive terms the sign is decided
/// exactly by an integer-power product comparison.
pub fn log_diff(seq: &Sequence, n: usize, k: usize) -> Result<LogDiff> {
    let coeffs = binomial_row(n);
    let mut value = 0.0f64;
    let mut sign_terms: Option<Vec<(BigRational, BigRational)>> = Some(Vec::new());
    for (i, c) in coeffs.iter().enumerate() {
        let term = seq.term(k + i)?;
        let positive = match term.sign() {
            Some(o) => o == Ordering::Greater,
            None => term.to_f64() > 0.0,
        };
        if !positive {
            return Err(Error::NonPositiveTerm { index: k + i });
        }
        let signed_c = if i % 2 == 1 { -c.clone() } else { c.clone() };
        value += signed_c.to_f64().unwrap_or(f64::NAN) * term.ln()?;
        if let Some(acc) = sign_terms.as_mut() {
            match term.log_terms() {
                Some(parts) => {
                    let cr = BigRational::from_integer(signed_c);
                    for (base, exp) in parts {
                        acc.push((base, exp * &cr));
                    }
                }
                None => sign_terms = None,
            }
        }
    }
    let exact_sign = sign_terms.as_deref().and_then(log_linear_sign);
    Ok(LogDiff { value, exact_sign })
}

/// How a single tested value relates to the property's sign requirement.
struct SignCheck {
    passes: bool,
    marginal: bool,
    float_decided: bool,
}

fn check_scalar(value: &Scalar, wanted: Ordering) -> SignCheck {
    match value.sign() {
        Some(Ordering::Equal) => SignCheck {
            passes: true,
            marginal: false,
            float_decided: false,
        },
        Some(o) => SignCheck {
            passes: o == wanted,
            marginal: false,
            float_decided: false,
        },
        None => check_float(value.to_f64(), wanted),
    }
}

fn check_float(v: f64, wanted: Ordering) -> SignCheck {
    let passes = match wanted {
        Ordering::Greater => v >= -FLOAT_ABS_TOL,
        Ordering::Less => v <= FLOAT_ABS_TOL,
        Ordering::Equal => v.abs() <= FLOAT_ABS_TOL,
    };
    SignCheck {
        passes,
        marginal: passes && v.abs() <= FLOAT_ABS_TOL,
        float_decided: true,
    }
}

fn check_log(v: &LogDiff, wanted: Ordering) -> SignCheck {
    match v.exact_sign {
        Some(Ordering::Equal) => SignCheck {
            passes: true,
            marginal: false,
            float_decided: false,
        },
        Some(o) => SignCheck {
            passes: o == wanted,
            marginal: false,
            float_decided: false,
        },
        None => check_float(v.value, wanted),
    }
}

/// Sweep `1 <= n <= order_bound`, `0 <= k <= index_bound` testing the sign
/// condition of `property`; the witness is the lexicographically first
/// failing `(n, k)`.
pub fn test_property(
    seq: &Sequence,
    property: SeqProperty,
    order_bound: usize,
    index_bound: usize,
) -> Result<PropertyVerdict> {
    if order_bound < 1 {
        return Err(Error::domain("order bound must be at least 1"));
    }
    if property == SeqProperty::NegativelyDominates {
        return Err(Error::domain(
            "negative domination is tested via negatively_dominates",
        ));
    }
    if property.is_log() && !seq.is_positive_flagged() {
        return Err(Error::domain(
            "log properties require a positivity-flagged sequence",
        ));
    }
    let wanted = property.wanted();
    let mut marginal = false;
    let mut float_decided = false;
    for n in 1..=order_bound {
        for k in 0..=index_bound {
            let (check, value) = if property.is_log() {
                let ld = log_diff(seq, n, k)?;
                (check_log(&ld, wanted), Scalar::Float(ld.value))
            } else {
                let v = forward_diff(seq, n, k)?;
                (check_scalar(&v, wanted), v)
            };
            marginal |= check.marginal;
            float_decided |= check.float_decided;
            if !check.passes {
                return Ok(PropertyVerdict {
                    property,
                    order_bound,
                    index_bound,
                    passed: false,
                    witness: Some(Witness {
                        order: n,
                        index: k,
                        value,
                    }),
                    marginal,
                    float_decided,
                });
            }
        }
    }
    Ok(PropertyVerdict {
        property,
        order_bound,
        index_bound,
        passed: true,
        witness: None,
        marginal,
        float_decided,
    })
}

/// Test `(nabla^m a)_j <= (nabla^m b)_j` for `0 <= m <= order_bound`,
/// `0 <= j <= index_bound` (order zero included).
pub fn negatively_dominates(
    a: &Sequence,
    b: &Sequence,
    order_bound: usize,
    index_bound: usize,
) -> Result<PropertyVerdict> {
    let mut marginal = false;
    let mut float_decided = false;
    for m in 0..=order_bound {
        for j in 0..=index_bound {
            let da = forward_diff(a, m, j)?;
            let db = forward_diff(b, m, j)?;
            let diff = da.sub(&db);
            let check = check_scalar(&diff, Ordering::Less);
            marginal |= check.marginal;
            float_decided |= check.float_decided;
            if !check.passes {
                return Ok(PropertyVerdict {
                    property: SeqProperty::NegativelyDominates,
                    order_bound,
                    index_bound,
                    passed: false,
                    witness: Some(Witness {
                        order: m,
                        index: j,
                        value: diff,
                    }),
                    marginal,
                    float_decided,
                });
            }
        }
    }
    Ok(PropertyVerdict {
        property: SeqProperty::NegativelyDominates,
        order_bound,
        index_bound,
        passed: true,
        witness: None,
        marginal,
        float_decided,
    })
}
