//! The weighted-shift data model: weights, moments, the shift catalog, and
//! shift-to-shift constructions (scaling, Schur algebra, quotients,
//! subshifts, back-step extensions, flatness, norm estimates).
//!
//! A unilateral weighted shift is determined by its positive weight sequence
//! `w(0), w(1), ...`; its moments are `gamma(0) = 1`,
//! `gamma(n) = prod_{j<n} w(j)^2`. Weights are memoized per shift and safe
//! to query from multiple threads.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq_core::Sequence;

/// Indices below this bound are memoized; larger queries are evaluated on
/// the fly so that deep numeric probes do not pin unbounded memory.
const CACHE_LIMIT: usize = 4096;

/// Convergence probe parameters: successive weight differences must stay
/// below the threshold over a full window for a limit to be declared.
const PROBE_THRESHOLD: f64 = 1e-12;
const PROBE_WINDOW: usize = 32;
const PROBE_SCAN_MAX: usize = 100_000;

/// How a shift's weight rule came to be.
#[derive(Clone)]
pub enum ShiftKind {
    ClosedForm,
    PrefixPlusTail,
    MeasureDerived,
    Derived {
        op: String,
        parents: Vec<WeightedShift>,
    },
}

struct ShiftInner {
    weight_fn: Box<dyn Fn(usize) -> Result<Scalar> + Send + Sync>,
    cache: Mutex<Vec<Scalar>>,
    kind: ShiftKind,
    declared_limit: Option<Scalar>,
    label: String,
    float_mode: bool,
}

/// A unilateral weighted shift, shared immutably.
#[derive(Clone)]
pub struct WeightedShift {
    inner: Arc<ShiftInner>,
}

impl fmt::Debug for WeightedShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedShift({})", self.inner.label)
    }
}

impl WeightedShift {
    pub fn new<F>(
        label: impl Into<String>,
        kind: ShiftKind,
        declared_limit: Option<Scalar>,
        float_mode: bool,
        weight_fn: F,
    ) -> Self
    where
        F: Fn(usize) -> Result<Scalar> + Send + Sync + 'static,
    {
        WeightedShift {
            inner: Arc::new(ShiftInner {
                weight_fn: Box::new(weight_fn),
                cache: Mutex::new(Vec::new()),
                kind,
                declared_limit,
                label: label.into(),
                float_mode,
            }),
        }
    }

    fn derived<F>(
        op: &str,
        label: String,
        parents: Vec<WeightedShift>,
        declared_limit: Option<Scalar>,
        extra_float: bool,
        weight_fn: F,
    ) -> Self
    where
        F: Fn(usize) -> Result<Scalar> + Send + Sync + 'static,
    {
        let float_mode = extra_float || parents.iter().any(|p| p.is_float_mode());
        WeightedShift::new(
            label,
            ShiftKind::Derived {
                op: op.to_string(),
                parents,
            },
            declared_limit,
            float_mode,
            weight_fn,
        )
    }

    fn validate(value: Scalar, index: usize) -> Result<Scalar> {
        let positive = match value.sign() {
            Some(o) => o == Ordering::Greater,
            None => value.to_f64() > 0.0,
        };
        if !positive {
            return Err(Error::NonPositiveTerm { index });
        }
        if let Scalar::Float(x) = value {
            if !x.is_finite() {
                return Err(Error::domain(format!(
                    "weight at index {index} is not finite"
                )));
            }
        }
        Ok(value)
    }

    /// The weight at `n`. Memoized (append-only) below the cache bound.
    pub fn weight(&self, n: usize) -> Result<Scalar> {
        if n >= CACHE_LIMIT {
            return Self::validate((self.inner.weight_fn)(n)?, n);
        }
        let mut cache = self.inner.cache.lock().expect("weight cache poisoned");
        while cache.len() <= n {
            let idx = cache.len();
            let v = Self::validate((self.inner.weight_fn)(idx)?, idx)?;
            cache.push(v);
        }
        Ok(cache[n].clone())
    }

    pub fn weight_sq(&self, n: usize) -> Result<Scalar> {
        Ok(self.weight(n)?.pow_int(2))
    }

    pub fn weight_f64(&self, n: usize) -> Result<f64> {
        Ok(self.weight(n)?.to_f64())
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn kind(&self) -> &ShiftKind {
        &self.inner.kind
    }

    pub fn declared_limit(&self) -> Option<&Scalar> {
        self.inner.declared_limit.as_ref()
    }

    /// True when some ancestor forced floating point (e.g. an irrational
    /// Schur exponent) or the weight data itself is float.
    pub fn is_float_mode(&self) -> bool {
        self.inner.float_mode
    }

    pub fn arithmetic_mode(&self) -> &'static str {
        if self.is_float_mode() {
            "float"
        } else {
            "exact"
        }
    }

    /// Weight sequence view (positivity enforced).
    pub fn weights_seq(&self) -> Sequence {
        let s = self.clone();
        Sequence::from_fn(move |n| s.weight(n), true)
    }

    /// Squared-weight sequence view.
    pub fn weights_sq_seq(&self) -> Sequence {
        let s = self.clone();
        Sequence::from_fn(move |n| s.weight_sq(n), true)
    }

    /// The weight limit: the declared value when present, otherwise a
    /// numeric probe over successive differences.
    pub fn limit_or_probe(&self) -> Result<(f64, LimitSource)> {
        if let Some(l) = self.declared_limit() {
            return Ok((l.to_f64(), LimitSource::Declared));
        }
        match probe_limit(self)? {
            Some(l) => Ok((l, LimitSource::Probed)),
            None => Err(Error::LimitUnavailable(format!(
                "no declared limit for {} and the convergence probe found none",
                self.label()
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitSource {
    Declared,
    Probed,
}

/// Scan for a numeric weight limit: successive differences below the probe
/// threshold over a full window.
pub fn probe_limit(shift: &WeightedShift) -> Result<Option<f64>> {
    let mut run = 0usize;
    let mut prev = shift.weight_f64(0)?;
    for n in 1..PROBE_SCAN_MAX {
        let cur = shift.weight_f64(n)?;
        if (cur - prev).abs() < PROBE_THRESHOLD {
            run += 1;
            if run >= PROBE_WINDOW {
                return Ok(Some(cur));
            }
        } else {
            run = 0;
        }
        prev = cur;
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

enum MomentSource {
    Shift(WeightedShift),
    Fn(Box<dyn Fn(usize) -> Result<Scalar> + Send + Sync>),
}

/// The moment sequence `gamma(0) = 1`, `gamma(n+1) = gamma(n) * w(n)^2`,
/// memoized as prefix products.
#[derive(Clone)]
pub struct MomentSequence {
    source: Arc<MomentSource>,
    cache: Arc<Mutex<Vec<Scalar>>>,
}

impl MomentSequence {
    pub fn from_shift(shift: &WeightedShift) -> Self {
        MomentSequence {
            source: Arc::new(MomentSource::Shift(shift.clone())),
            cache: Arc::new(Mutex::new(vec![Scalar::one()])),
        }
    }

    /// Wrap arbitrary moment data; `gamma(0)` must be 1 and all moments
    /// positive (validated lazily on query).
    pub fn from_fn<F>(eval: F) -> Self
    where
        F: Fn(usize) -> Result<Scalar> + Send + Sync + 'static,
    {
        MomentSequence {
            source: Arc::new(MomentSource::Fn(Box::new(eval))),
            cache: Arc::new(Mutex::new(Vec::new())),
        }
    }

    fn validate(v: Scalar, n: usize) -> Result<Scalar> {
        let positive = match v.sign() {
            Some(o) => o == Ordering::Greater,
            None => v.to_f64() > 0.0,
        };
        if !positive {
            return Err(Error::domain(format!("moment at index {n} is not positive")));
        }
        Ok(v)
    }

    pub fn gamma(&self, n: usize) -> Result<Scalar> {
        if n >= CACHE_LIMIT {
            return self.compute_uncached(n);
        }
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        while cache.len() <= n {
            let idx = cache.len();
            let v = match self.source.as_ref() {
                MomentSource::Shift(shift) => {
                    let prev = cache
                        .last()
                        .cloned()
                        .expect("moment cache seeded with gamma(0)");
                    prev.mul(&shift.weight_sq(idx - 1)?)
                }
                MomentSource::Fn(f) => {
                    let v = f(idx)?;
                    if idx == 0 && !Self::is_unit(&v) {
                        return Err(Error::domain("gamma(0) must equal 1"));
                    }
                    v
                }
            };
            cache.push(Self::validate(v, idx)?);
        }
        Ok(cache[n].clone())
    }

    fn compute_uncached(&self, n: usize) -> Result<Scalar> {
        match self.source.as_ref() {
            MomentSource::Fn(f) => Self::validate(f(n)?, n),
            MomentSource::Shift(shift) => {
                let mut acc = self.gamma(CACHE_LIMIT - 1)?;
                for j in CACHE_LIMIT - 1..n {
                    acc = acc.mul(&shift.weight_sq(j)?);
                }
                Ok(acc)
            }
        }
    }

    fn is_unit(v: &Scalar) -> bool {
        match v.try_rational() {
            Some(r) => r.is_one(),
            None => (v.to_f64() - 1.0).abs() <= 1e-12,
        }
    }

    /// Positive-sequence view for property sweeps.
    pub fn as_sequence(&self) -> Sequence {
        let m = self.clone();
        Sequence::from_fn(move |n| m.gamma(n), true)
    }
}

/// The moment sequence of a shift.
pub fn moments(shift: &WeightedShift) -> MomentSequence {
    MomentSequence::from_shift(shift)
}

/// Inverse of the moment map: `w(n) = sqrt(gamma(n+1)/gamma(n))`.
pub fn shift_from_moments(gamma: &MomentSequence) -> Result<WeightedShift> {
    let g0 = gamma.gamma(0)?;
    if !MomentSequence::is_unit(&g0) {
        return Err(Error::domain("gamma(0) must equal 1"));
    }
    let g = gamma.clone();
    Ok(WeightedShift::new(
        "from-moments",
        ShiftKind::Derived {
            op: "from_moments".into(),
            parents: Vec::new(),
        },
        None,
        false,
        move |n| g.gamma(n + 1)?.div(&g.gamma(n)?).sqrt(),
    ))
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeightedShift {
    /// The Agler shift `A_k`, weights `sqrt((n+1)/(n+k))`, `k >= 2`.
    pub fn agler(k: u64) -> Result<WeightedShift> {
        if k < 2 {
            return Err(Error::domain("agler(k) requires k >= 2"));
        }
        Ok(WeightedShift::new(
            format!("agler({k})"),
            ShiftKind::ClosedForm,
            Some(Scalar::one()),
            false,
            move |n| {
                Scalar::from_big(BigRational::new(
                    BigInt::from(n as u64 + 1),
                    BigInt::from(n as u64 + k),
                ))
                .sqrt()
            },
        ))
    }

    /// The Bergman shift (`agler(2)`).
    pub fn bergman() -> WeightedShift {
        WeightedShift::agler(2).expect("agler(2) is valid")
    }

    /// Generalized Agler family: weights `sqrt((n+1)/(s+n))` for real `s > 1`.
    pub fn agler_family(s: Scalar) -> Result<WeightedShift> {
        let ok = match s.try_exact_cmp(&Scalar::one()) {
            Some(o) => o == Ordering::Greater,
            None => s.to_f64() > 1.0,
        };
        if !ok {
            return Err(Error::domain("agler_family(s) requires s > 1"));
        }
        let float = !s.is_exact();
        let label = format!("agler_family({s})");
        Ok(WeightedShift::new(
            label,
            ShiftKind::ClosedForm,
            Some(Scalar::one()),
            float,
            move |n| {
                let num = Scalar::from_big(big(n as u64 + 1));
                let den = s.add(&Scalar::from_big(big(n as u64)));
                num.div(&den).sqrt()
            },
        ))
    }

    /// The Dirichlet shift, weights `sqrt((n+2)/(n+1))`.
    pub fn dirichlet() -> WeightedShift {
        WeightedShift::new(
            "dirichlet",
            ShiftKind::ClosedForm,
            Some(Scalar::one()),
            false,
            |n| {
                Scalar::from_big(BigRational::new(
                    BigInt::from(n as u64 + 2),
                    BigInt::from(n as u64 + 1),
                ))
                .sqrt()
            },
        )
    }

    /// Weights `sqrt((2^(n+2) - 2)/(2^(n+2) - 1))`.
    pub fn geom2() -> WeightedShift {
        WeightedShift::new(
            "geom2",
            ShiftKind::ClosedForm,
            Some(Scalar::one()),
            false,
            |n| {
                let p: BigInt = BigInt::one() << (n + 2);
                Scalar::from_big(BigRational::new(&p - BigInt::from(2), &p - BigInt::one()))
                    .sqrt()
            },
        )
    }

    /// The unweighted unilateral shift (all weights 1).
    pub fn unweighted() -> WeightedShift {
        WeightedShift::new(
            "unweighted",
            ShiftKind::ClosedForm,
            Some(Scalar::one()),
            false,
            |_| Ok(Scalar::one()),
        )
    }

    /// Constant weights `c > 0`.
    pub fn constant(c: Scalar) -> Result<WeightedShift> {
        if !c.is_positive() {
            return Err(Error::domain("constant(c) requires c > 0"));
        }
        let float = !c.is_exact();
        let label = format!("constant({c})");
        let limit = c.clone();
        Ok(WeightedShift::new(
            label,
            ShiftKind::ClosedForm,
            Some(limit),
            float,
            move |_| Ok(c.clone()),
        ))
    }
}

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

/// Multiply every weight by `c > 0`.
pub fn scale(shift: &WeightedShift, c: &Scalar) -> Result<WeightedShift> {
    if !c.is_positive() {
        return Err(Error::domain("scale factor must be positive"));
    }
    let parent = shift.clone();
    let factor = c.clone();
    let limit = shift.declared_limit().map(|l| l.mul(c));
    Ok(WeightedShift::derived(
        "scale",
        format!("scale({}, {})", c, shift.label()),
        vec![shift.clone()],
        limit,
        !c.is_exact(),
        move |n| Ok(parent.weight(n)?.mul(&factor)),
    ))
}

/// Norm estimate over the inspected range.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    pub value: Scalar,
    /// True when no weight limit was declared, so the value is only a
    /// lower estimate of the true norm.
    pub is_estimate: bool,
}

/// `max(w(0..=range), declared limit)`. With a declared limit the estimate
/// is exact for shifts whose weights approach that limit monotonically in
/// distance; the window is verified for that property.
pub fn norm_estimate(shift: &WeightedShift, range: usize) -> Result<NormEstimate> {
    let mut best = shift.weight(0)?;
    for n in 1..=range {
        let w = shift.weight(n)?;
        if w.cmp_mixed(&best) == Ordering::Greater {
            best = w;
        }
    }
    match shift.declared_limit() {
        Some(limit) => {
            verify_limit_window(shift, limit, range)?;
            if limit.cmp_mixed(&best) == Ordering::Greater {
                best = limit.clone();
            }
            Ok(NormEstimate {
                value: best,
                is_estimate: false,
            })
        }
        None => Ok(NormEstimate {
            value: best,
            is_estimate: true,
        }),
    }
}

/// Check that `|w(n) - L|` is non-increasing over the window (small float
/// slack); failure indicates a wrong declared limit.
fn verify_limit_window(shift: &WeightedShift, limit: &Scalar, range: usize) -> Result<()> {
    let l = limit.to_f64();
    let mut prev = (shift.weight_f64(0)? - l).abs();
    for n in 1..=range {
        let cur = (shift.weight_f64(n)? - l).abs();
        if cur > prev + 1e-12 {
            return Err(Error::InternalConsistency(format!(
                "declared limit {l} for {} violated at index {n}",
                shift.label()
            )));
        }
        prev = cur;
    }
    Ok(())
}

/// Divide all weights by the norm estimate over `[0, range]`, producing a
/// contraction over the inspected range.
pub fn normalize(shift: &WeightedShift, range: usize) -> Result<WeightedShift> {
    let est = norm_estimate(shift, range)?;
    let c = est.value;
    let parent = shift.clone();
    let divisor = c.clone();
    let limit = shift.declared_limit().map(|l| l.div(&c));
    Ok(WeightedShift::derived(
        "normalize",
        format!("normalize({}, {})", shift.label(), range),
        vec![shift.clone()],
        limit,
        false,
        move |n| Ok(parent.weight(n)?.div(&divisor)),
    ))
}

/// Schur (termwise) product of two shifts.
pub fn schur_product(s1: &WeightedShift, s2: &WeightedShift) -> WeightedShift {
    let (a, b) = (s1.clone(), s2.clone());
    let limit = match (s1.declared_limit(), s2.declared_limit()) {
        (Some(l1), Some(l2)) => Some(l1.mul(l2)),
        _ => None,
    };
    WeightedShift::derived(
        "schur",
        format!("schur({}, {})", s1.label(), s2.label()),
        vec![s1.clone(), s2.clone()],
        limit,
        false,
        move |n| Ok(a.weight(n)?.mul(&b.weight(n)?)),
    )
}

/// Schur power: every weight raised to `p > 0`. Rational `p` with exact
/// weights stays exact; an irrational exponent forces float mode for this
/// shift and everything derived from it.
pub fn schur_power(shift: &WeightedShift, p: &Scalar) -> Result<WeightedShift> {
    if !p.is_positive() {
        return Err(Error::domain("Schur power requires p > 0"));
    }
    let parent = shift.clone();
    let limit = match (shift.declared_limit(), p) {
        (Some(l), Scalar::Rational(r)) => Some(l.pow_rational(r)?),
        (Some(l), p) => Some(Scalar::Float(l.to_f64().powf(p.to_f64()))),
        _ => None,
    };
    let label = format!("power({}, {})", p, shift.label());
    match p {
        Scalar::Rational(r) => {
            let e = r.clone();
            Ok(WeightedShift::derived(
                "power",
                label,
                vec![shift.clone()],
                limit,
                false,
                move |n| parent.weight(n)?.pow_rational(&e),
            ))
        }
        _ => {
            let e = p.to_f64();
            Ok(WeightedShift::derived(
                "power",
                label,
                vec![shift.clone()],
                limit,
                true,
                move |n| parent.weight(n)?.pow_f64(e),
            ))
        }
    }
}

/// Quotient shift: `w(n) / w(n + spacing)`, `spacing >= 1`.
pub fn quotient_shift(shift: &WeightedShift, spacing: usize) -> Result<WeightedShift> {
    if spacing == 0 {
        return Err(Error::domain("quotient spacing must be at least 1"));
    }
    let parent = shift.clone();
    // Weights with a positive limit give quotient weights tending to 1.
    let limit = shift
        .declared_limit()
        .filter(|l| l.is_positive())
        .map(|_| Scalar::one());
    Ok(WeightedShift::derived(
        "quotient",
        format!("quotient({}, {})", spacing, shift.label()),
        vec![shift.clone()],
        limit,
        false,
        move |n| Ok(parent.weight(n)?.div(&parent.weight(n + spacing)?)),
    ))
}

/// Rebuild a shift from its spacing-1 quotient sequence and the free
/// leading weight: `w(n) = a0 / prod_{i<n} b(i)`.
pub fn reconstruct_from_quotient(b: &WeightedShift, a0: &Scalar) -> Result<WeightedShift> {
    if !a0.is_positive() {
        return Err(Error::domain("leading weight must be positive"));
    }
    let quot = b.clone();
    let lead = a0.clone();
    let products: Arc<Mutex<Vec<Scalar>>> = Arc::new(Mutex::new(vec![Scalar::one()]));
    Ok(WeightedShift::derived(
        "unquotient",
        format!("unquotient({}, {})", a0, b.label()),
        vec![b.clone()],
        None,
        !a0.is_exact(),
        move |n| {
            let mut prods = products.lock().expect("product cache poisoned");
            while prods.len() <= n {
                let idx = prods.len();
                let next = prods[idx - 1].mul(&quot.weight(idx - 1)?);
                prods.push(next);
            }
            Ok(lead.div(&prods[n]))
        },
    ))
}

/// Linear subshift: weights `w(p*n + k)` with `p >= 1`.
pub fn subshift(shift: &WeightedShift, p: usize, k: usize) -> Result<WeightedShift> {
    if p == 0 {
        return Err(Error::domain("subshift stride must be at least 1"));
    }
    let parent = shift.clone();
    Ok(WeightedShift::derived(
        "subshift",
        format!("subshift({}, {}, {})", shift.label(), p, k),
        vec![shift.clone()],
        shift.declared_limit().cloned(),
        false,
        move |n| parent.weight(p * n + k),
    ))
}

/// Back-step extension: prefix a new weight to the sequence.
pub fn backstep(shift: &WeightedShift, alpha_new: &Scalar) -> Result<WeightedShift> {
    if !alpha_new.is_positive() {
        return Err(Error::domain("back-step weight must be positive"));
    }
    let parent = shift.clone();
    let head = alpha_new.clone();
    Ok(WeightedShift::derived(
        "backstep",
        format!("backstep({}, {})", alpha_new, shift.label()),
        vec![shift.clone()],
        shift.declared_limit().cloned(),
        !alpha_new.is_exact(),
        move |n| {
            if n == 0 {
                Ok(head.clone())
            } else {
                parent.weight(n - 1)
            }
        },
    ))
}

/// Flatness verdict: `w(0) <= w(1) = w(2) = ...` over the checked window.
#[derive(Clone, Debug)]
pub struct FlatnessVerdict {
    pub flat: bool,
    pub checked_upto: usize,
    /// Index of the first weight breaking flatness.
    pub first_violation: Option<usize>,
}

/// Test flatness over `[0, range]`; comparisons are exact in rational mode
/// (then `tol` is ignored) and use `tol` otherwise.
pub fn is_flat(shift: &WeightedShift, range: usize, tol: f64) -> Result<FlatnessVerdict> {
    if range < 2 {
        return Err(Error::domain("flatness needs at least indices 0..=2"));
    }
    let w1 = shift.weight(1)?;
    let w0 = shift.weight(0)?;
    let head_ok = match w0.try_exact_cmp(&w1) {
        Some(o) => o != Ordering::Greater,
        None => w0.to_f64() <= w1.to_f64() + tol,
    };
    if !head_ok {
        return Ok(FlatnessVerdict {
            flat: false,
            checked_upto: range,
            first_violation: Some(0),
        });
    }
    for j in 2..=range {
        let wj = shift.weight(j)?;
        let equal = match wj.try_exact_cmp(&w1) {
            Some(o) => o == Ordering::Equal,
            None => (wj.to_f64() - w1.to_f64()).abs() <= tol,
        };
        if !equal {
            return Ok(FlatnessVerdict {
                flat: false,
                checked_upto: range,
                first_violation: Some(j),
            });
        }
    }
    Ok(FlatnessVerdict {
        flat: true,
        checked_upto: range,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn bergman_moments() {
        let g = moments(&WeightedShift::bergman());
        assert_eq!(g.gamma(0).unwrap(), Scalar::one());
        assert_eq!(g.gamma(3).unwrap(), rat(1, 4));
        // gamma_n = 1/(n+1)
        for n in 0..20 {
            assert_eq!(g.gamma(n).unwrap(), rat(1, n as i64 + 1));
        }
    }

    #[test]
    fn agler3_moment() {
        let g = moments(&WeightedShift::agler(3).unwrap());
        assert_eq!(g.gamma(2).unwrap(), rat(1, 6));
    }

    #[test]
    fn agler_requires_k_at_least_two() {
        assert!(WeightedShift::agler(1).is_err());
        assert!(WeightedShift::agler(0).is_err());
    }

    #[test]
    fn shift_from_moments_round_trips_bergman() {
        let g = MomentSequence::from_fn(|n| Ok(rat(1, n as i64 + 1)));
        let s = shift_from_moments(&g).unwrap();
        let b = WeightedShift::bergman();
        for n in 0..25 {
            assert_eq!(s.weight_sq(n).unwrap(), b.weight_sq(n).unwrap());
        }
    }

    #[test]
    fn unit_moments_give_unweighted_shift() {
        let g = MomentSequence::from_fn(|_| Ok(Scalar::one()));
        let s = shift_from_moments(&g).unwrap();
        for n in 0..10 {
            assert_eq!(s.weight(n).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn linear_moments_give_dirichlet_weights() {
        let g = MomentSequence::from_fn(|n| Ok(rat(n as i64 + 1, 1)));
        let s = shift_from_moments(&g).unwrap();
        let d = WeightedShift::dirichlet();
        for n in 0..25 {
            assert_eq!(s.weight_sq(n).unwrap(), d.weight_sq(n).unwrap());
        }
    }

    #[test]
    fn moments_require_unit_start() {
        let g = MomentSequence::from_fn(|n| Ok(rat(n as i64 + 2, 1)));
        assert!(shift_from_moments(&g).is_err());
    }

    #[test]
    fn scale_and_identity() {
        let b = WeightedShift::bergman();
        let doubled = scale(&b, &rat(2, 1)).unwrap();
        assert_eq!(doubled.weight_sq(0).unwrap(), rat(2, 1)); // (2*sqrt(1/2))^2
        let same = scale(&b, &Scalar::one()).unwrap();
        for n in 0..10 {
            assert_eq!(same.weight(n).unwrap(), b.weight(n).unwrap());
        }
    }

    #[test]
    fn normalize_dirichlet_head() {
        let d = WeightedShift::dirichlet();
        let n = normalize(&d, 100).unwrap();
        // sup of sqrt((n+2)/(n+1)) is attained at n = 0, so w(0) becomes 1.
        assert_eq!(n.weight(0).unwrap(), Scalar::one());
        for j in 1..20 {
            assert!(n.weight_f64(j).unwrap() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn norm_estimates() {
        let b = WeightedShift::bergman();
        let e = norm_estimate(&b, 50).unwrap();
        assert_eq!(e.value, Scalar::one());
        assert!(!e.is_estimate);

        let d = WeightedShift::dirichlet();
        let e = norm_estimate(&d, 10).unwrap();
        assert_eq!(e.value.pow_int(2), rat(2, 1)); // sqrt(2) at n = 0

        let c = WeightedShift::constant(rat(7, 5)).unwrap();
        let e = norm_estimate(&c, 10).unwrap();
        assert_eq!(e.value, rat(7, 5));
    }

    #[test]
    fn schur_power_squares_bergman() {
        let b = WeightedShift::bergman();
        let sq = schur_power(&b, &rat(2, 1)).unwrap();
        for n in 0..20 {
            assert_eq!(sq.weight(n).unwrap(), rat(n as i64 + 1, n as i64 + 2));
        }
    }

    #[test]
    fn schur_product_matches_schur_square() {
        let a2 = WeightedShift::bergman();
        let prod = schur_product(&a2, &a2);
        let pow = schur_power(&a2, &rat(2, 1)).unwrap();
        for n in 0..20 {
            assert_eq!(prod.weight(n).unwrap(), pow.weight(n).unwrap());
        }
    }

    #[test]
    fn irrational_schur_power_forces_float() {
        let b = WeightedShift::bergman();
        let p = schur_power(&b, &Scalar::from_f64(0.7)).unwrap();
        assert!(p.is_float_mode());
        let derived = schur_product(&p, &b);
        assert!(derived.is_float_mode());
        assert!(!b.is_float_mode());
    }

    #[test]
    fn quotient_of_bergman() {
        let q = quotient_shift(&WeightedShift::bergman(), 1).unwrap();
        for n in 0..20 {
            let n_i = n as i64;
            let expect = rat((n_i + 1) * (n_i + 3), (n_i + 2) * (n_i + 2));
            assert_eq!(q.weight_sq(n).unwrap(), expect);
        }
    }

    #[test]
    fn quotient_of_constant_is_unweighted() {
        let c = WeightedShift::constant(rat(5, 3)).unwrap();
        for spacing in 1..4 {
            let q = quotient_shift(&c, spacing).unwrap();
            for n in 0..10 {
                assert_eq!(q.weight(n).unwrap(), Scalar::one());
            }
        }
    }

    #[test]
    fn quotient_moment_law() {
        // moments of quotient(s,1) are gamma_1 * gamma_n / gamma_{n+1}.
        let b = WeightedShift::bergman();
        let q = quotient_shift(&b, 1).unwrap();
        let gq = moments(&q);
        assert_eq!(gq.gamma(2).unwrap(), rat(2, 3));
        let gb = moments(&b);
        for n in 0..=50 {
            let expect = gb
                .gamma(1)
                .unwrap()
                .mul(&gb.gamma(n).unwrap())
                .div(&gb.gamma(n + 1).unwrap());
            assert_eq!(
                gq.gamma(n).unwrap().try_rational().unwrap(),
                expect.try_rational().unwrap()
            );
        }
    }

    #[test]
    fn reconstruct_round_trip() {
        let b = WeightedShift::bergman();
        let q = quotient_shift(&b, 1).unwrap();
        let r = reconstruct_from_quotient(&q, &b.weight(0).unwrap()).unwrap();
        for n in 0..40 {
            assert_eq!(
                r.weight_sq(n).unwrap().try_rational().unwrap(),
                b.weight_sq(n).unwrap().try_rational().unwrap()
            );
        }
    }

    #[test]
    fn reconstruct_unit_quotient_gives_constant() {
        let ones = WeightedShift::unweighted();
        let r = reconstruct_from_quotient(&ones, &rat(3, 7)).unwrap();
        for n in 0..10 {
            assert_eq!(r.weight(n).unwrap(), rat(3, 7));
        }
    }

    #[test]
    fn subshift_examples() {
        let a2 = WeightedShift::bergman();
        let s = subshift(&a2, 2, 0).unwrap();
        for n in 0..10 {
            let n_i = n as i64;
            assert_eq!(s.weight_sq(n).unwrap(), rat(2 * n_i + 1, 2 * n_i + 2));
        }
        let idem = subshift(&a2, 1, 0).unwrap();
        for n in 0..10 {
            assert_eq!(idem.weight(n).unwrap(), a2.weight(n).unwrap());
        }
        let a3 = WeightedShift::agler(3).unwrap();
        let t = subshift(&a3, 2, 1).unwrap();
        assert_eq!(t.weight_sq(0).unwrap(), rat(2, 4));
        assert_eq!(t.weight_sq(1).unwrap(), rat(4, 6));
    }

    #[test]
    fn backstep_reattaches_omitted_weight() {
        let a2 = WeightedShift::bergman();
        let tail = subshift(&a2, 1, 1).unwrap();
        let again = backstep(&tail, &a2.weight(0).unwrap()).unwrap();
        for n in 0..15 {
            assert_eq!(again.weight(n).unwrap(), a2.weight(n).unwrap());
        }
        let b = backstep(&a2, &rat(1, 2)).unwrap();
        assert_eq!(b.weight(0).unwrap(), rat(1, 2));
        assert_eq!(b.weight_sq(1).unwrap(), rat(1, 2));
        assert_eq!(b.weight_sq(2).unwrap(), rat(2, 3));
    }

    #[test]
    fn flatness_checks() {
        // Two-atomic style: sqrt(c1 r), sqrt(r), sqrt(r), ...
        let flat = WeightedShift::new(
            "two-atomic",
            ShiftKind::ClosedForm,
            Some(Scalar::from_ratio(1, 2).sqrt().unwrap()),
            false,
            |n| {
                if n == 0 {
                    rat(1, 4).sqrt()
                } else {
                    rat(1, 2).sqrt()
                }
            },
        );
        assert!(is_flat(&flat, 30, 0.0).unwrap().flat);
        assert!(!is_flat(&WeightedShift::bergman(), 30, 0.0).unwrap().flat);
        assert!(is_flat(&WeightedShift::unweighted(), 30, 0.0).unwrap().flat);
    }

    #[test]
    fn geom2_weights_are_exact() {
        let g = WeightedShift::geom2();
        assert_eq!(g.weight_sq(0).unwrap(), rat(2, 3));
        assert_eq!(g.weight_sq(1).unwrap(), rat(6, 7));
        assert_eq!(g.weight_sq(2).unwrap(), rat(14, 15));
        // Large index stays finite and close to 1 in float.
        let w = g.weight_f64(500).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probe_limit_finds_geometric_limit() {
        // Strip the declared limit and let the probe find it.
        let g = WeightedShift::geom2();
        let bare = WeightedShift::new("bare", ShiftKind::ClosedForm, None, false, move |n| {
            g.weight(n)
        });
        let (l, src) = bare.limit_or_probe().unwrap();
        assert_eq!(src, LimitSource::Probed);
        assert!((l - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hyponormality_matches_one_log_alternating() {
        use crate::seq_core::{test_property, SeqProperty};
        for (shift, increasing) in [
            (WeightedShift::bergman(), true),
            (WeightedShift::dirichlet(), false),
        ] {
            let v = test_property(&shift.weights_seq(), SeqProperty::LogAlternating, 1, 30)
                .unwrap();
            assert_eq!(v.passed, increasing);
            let mut mono = true;
            for n in 0..30 {
                mono &= shift.weight(n).unwrap().cmp_mixed(&shift.weight(n + 1).unwrap())
                    != Ordering::Greater;
            }
            assert_eq!(mono, increasing);
        }
    }
}
