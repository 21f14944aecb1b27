//! Aluthge transforms and their inverses.
//!
//! For a weighted shift the Aluthge transform is again a weighted shift,
//! with weights `sqrt(w(n) w(n+1))`; the asymmetric variant uses exponents
//! `(1-q, q)`. Inverting the transform leaves the leading weight free; when
//! the target weights approach a limit there is a canonical choice computed
//! here as an extrapolated limit of partial products. The pre-images of the
//! Agler shifts have closed forms in half-integer gamma values.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{big_rational_to_f64, factorial, ln_big_rational, Scalar};
use crate::shift_model::{ShiftKind, WeightedShift};

/// Residual target for the automatic leading-weight extrapolation.
pub const EXTRAPOLATION_RESIDUAL_TARGET: f64 = 1e-8;

/// Aitken iteration depth for the partial-product limit.
pub const EXTRAPOLATION_DEPTH: usize = 6;

/// Partial products are sampled at `m = 2^j` for `j <= this`.
const EXTRAPOLATION_MAX_LEVEL: u32 = 17;

// ---------------------------------------------------------------------------
// forward transforms
// ---------------------------------------------------------------------------

/// The Aluthge transform: weights `sqrt(w(n) w(n+1))`.
pub fn aluthge(shift: &WeightedShift) -> WeightedShift {
    let parent = shift.clone();
    WeightedShift::new(
        format!("at({})", shift.label()),
        ShiftKind::Derived {
            op: "at".into(),
            parents: vec![shift.clone()],
        },
        shift.declared_limit().cloned(),
        shift.is_float_mode(),
        move |n| parent.weight(n)?.mul(&parent.weight(n + 1)?).sqrt(),
    )
}

/// Asymmetric Aluthge transform: weights `w(n)^(1-q) w(n+1)^q`, `0 <= q <= 1`.
/// `q = 0` is the identity on weights and `q = 1/2` is `aluthge`.
pub fn aluthge_q(shift: &WeightedShift, q: &Scalar) -> Result<WeightedShift> {
    let in_range = match (
        q.try_exact_cmp(&Scalar::zero()),
        q.try_exact_cmp(&Scalar::one()),
    ) {
        (Some(lo), Some(hi)) => lo != std::cmp::Ordering::Less && hi != std::cmp::Ordering::Greater,
        _ => (0.0..=1.0).contains(&q.to_f64()),
    };
    if !in_range {
        return Err(Error::domain("aluthge_q requires 0 <= q <= 1"));
    }
    let parent = shift.clone();
    let label = format!("atq({}, {})", q, shift.label());
    let kind = ShiftKind::Derived {
        op: "atq".into(),
        parents: vec![shift.clone()],
    };
    let limit = shift.declared_limit().cloned();
    match q {
        Scalar::Rational(r) => {
            let q_exp = r.clone();
            let p_exp = BigRational::one() - r.clone();
            Ok(WeightedShift::new(
                label,
                kind,
                limit,
                shift.is_float_mode(),
                move |n| {
                    let a = parent.weight(n)?.pow_rational(&p_exp)?;
                    let b = parent.weight(n + 1)?.pow_rational(&q_exp)?;
                    Ok(a.mul(&b))
                },
            ))
        }
        _ => {
            let qf = q.to_f64();
            Ok(WeightedShift::new(label, kind, limit, true, move |n| {
                let a = parent.weight(n)?.pow_f64(1.0 - qf)?;
                let b = parent.weight(n + 1)?.pow_f64(qf)?;
                Ok(a.mul(&b))
            }))
        }
    }
}

/// `m`-fold Aluthge transform; `m = 0` is the identity.
pub fn aluthge_iter(shift: &WeightedShift, m: usize) -> WeightedShift {
    let mut cur = shift.clone();
    for _ in 0..m {
        cur = aluthge(&cur);
    }
    cur
}

// ---------------------------------------------------------------------------
// inverse transform
// ---------------------------------------------------------------------------

/// Where the leading weight of an inverse transform came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alpha0Source {
    User,
    NumericLimit,
    ClosedForm,
}

/// Convergence diagnostics of the automatic leading-weight computation.
#[derive(Clone, Copy, Debug)]
pub struct LimitDiagnostics {
    /// Number of target weights consumed by the partial products.
    pub terms_used: usize,
    pub extrapolation_order: usize,
    pub residual: f64,
}

/// Result of inverting the Aluthge transform.
#[derive(Clone, Debug)]
pub struct InverseATResult {
    pub shift: WeightedShift,
    pub alpha0: Scalar,
    pub alpha0_source: Alpha0Source,
    pub limit_diagnostics: Option<LimitDiagnostics>,
}

/// Invert the Aluthge transform against `target`. With `alpha0` given, the
/// remaining weights follow from the recurrence `w(n+1) = beta(n)^2 / w(n)`.
/// Without it, the canonical leading weight is the extrapolated limit of the
/// alternating partial products of the target weights (divided by the target
/// weight limit), which requires the target weights to approach a limit.
pub fn inverse_aluthge(
    target: &WeightedShift,
    alpha0: Option<Scalar>,
) -> Result<InverseATResult> {
    let (alpha0, source, diagnostics) = match alpha0 {
        Some(a) => {
            if !a.is_positive() {
                return Err(Error::domain("leading weight must be positive"));
            }
            (a, Alpha0Source::User, None)
        }
        None => {
            let (limit, _src) = target.limit_or_probe()?;
            if limit.is_nan() || limit <= 0.0 {
                return Err(Error::LimitUnavailable(
                    "target weight limit must be positive".into(),
                ));
            }
            let (lambda, diag) = partial_product_limit(target)?;
            (
                Scalar::from_f64(lambda / limit),
                Alpha0Source::NumericLimit,
                Some(diag),
            )
        }
    };
    let shift = recurrence_shift(target, &alpha0);
    Ok(InverseATResult {
        shift,
        alpha0,
        alpha0_source: source,
        limit_diagnostics: diagnostics,
    })
}

/// Build the pre-image shift from the two-term recurrence; weights are
/// memoized sequentially since each depends on the previous one.
fn recurrence_shift(target: &WeightedShift, alpha0: &Scalar) -> WeightedShift {
    let beta = target.clone();
    let head = alpha0.clone();
    let known: Arc<Mutex<Vec<Scalar>>> = Arc::new(Mutex::new(vec![alpha0.clone()]));
    WeightedShift::new(
        format!("atinv({}, {})", alpha0, target.label()),
        ShiftKind::Derived {
            op: "atinv".into(),
            parents: vec![target.clone()],
        },
        None,
        target.is_float_mode() || !head.is_exact(),
        move |n| {
            let mut ws = known.lock().expect("recurrence cache poisoned");
            while ws.len() <= n {
                let idx = ws.len();
                let next = beta.weight(idx - 1)?.pow_int(2).div(&ws[idx - 1]);
                ws.push(next);
            }
            Ok(ws[n].clone())
        },
    )
}

/// Extrapolated limit of
/// `O_m = prod_{j<=m} beta(2j)^2 / prod_{1<=j<=m} beta(2j-1)^2`.
fn partial_product_limit(target: &WeightedShift) -> Result<(f64, LimitDiagnostics)> {
    let mut samples: Vec<f64> = Vec::new();
    let mut product = target.weight_f64(0)?.powi(2);
    let mut m = 0usize;
    let mut prev_estimate = f64::NAN;
    let mut best = (f64::NAN, f64::INFINITY, 0usize);
    for level in 0..=EXTRAPOLATION_MAX_LEVEL {
        let m_target = 1usize << level;
        while m < m_target {
            m += 1;
            let even = target.weight_f64(2 * m)?;
            let odd = target.weight_f64(2 * m - 1)?;
            product *= (even * even) / (odd * odd);
        }
        samples.push(product);
        if samples.len() < 3 {
            continue;
        }
        let (estimate, depth) = aitken_extrapolate(&samples, EXTRAPOLATION_DEPTH);
        let residual = (estimate - prev_estimate).abs();
        prev_estimate = estimate;
        if residual < best.1 {
            best = (estimate, residual, depth);
        }
        if residual <= EXTRAPOLATION_RESIDUAL_TARGET {
            return Ok((
                estimate,
                LimitDiagnostics {
                    terms_used: 2 * m + 1,
                    extrapolation_order: depth,
                    residual,
                },
            ));
        }
    }
    Err(Error::NonConverged {
        best: best.0,
        residual: best.1,
    })
}

/// Iterated Aitken delta-squared extrapolation; returns the deepest estimate
/// and the depth actually used.
pub fn aitken_extrapolate(samples: &[f64], max_depth: usize) -> (f64, usize) {
    let mut cur = samples.to_vec();
    let mut depth = 0;
    while depth < max_depth && cur.len() >= 3 {
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let denom = c - 2.0 * b + a;
            if denom.abs() <= f64::EPSILON * (a.abs() + 2.0 * b.abs() + c.abs()) {
                next.push(c);
            } else {
                next.push(c - (c - b) * (c - b) / denom);
            }
        }
        cur = next;
        depth += 1;
    }
    (*cur.last().expect("nonempty extrapolation table"), depth)
}

// ---------------------------------------------------------------------------
// Agler pre-images
// ---------------------------------------------------------------------------

/// `Gamma(j/2)` as `coef * sqrt(pi)^pi_pow`, exact.
fn gamma_half(j: u64) -> (BigRational, i32) {
    assert!(j >= 1, "gamma argument must be positive");
    if j.is_multiple_of(2) {
        (
            BigRational::from_integer(factorial((j / 2 - 1) as usize)),
            0,
        )
    } else {
        // Gamma(m + 1/2) = (2m-1)!! / 2^m * sqrt(pi) with 2m + 1 = j.
        let m = (j - 1) / 2;
        let mut dd = BigInt::one();
        let mut i = 1u64;
        while i + 1 < j {
            dd *= BigInt::from(i);
            i += 2;
        }
        let denom = BigInt::one() << m;
        (BigRational::new(dd, denom), 1)
    }
}

/// Exact value `coef * pi^(pi_pow/2)` rendered as f64.
fn half_pi_value(coef: &BigRational, pi_pow: i32) -> f64 {
    let base = big_rational_to_f64(coef);
    match pi_pow {
        0 => base,
        2 => base * std::f64::consts::PI,
        -2 => base / std::f64::consts::PI,
        p => base * std::f64::consts::PI.powf(p as f64 / 2.0),
    }
}

/// Exact leading weight of the Aluthge pre-image of the k-th Agler shift,
/// as `(coefficient, divided_by_pi)`.
pub fn agler_preimage_alpha0_exact(k: u64) -> Result<(BigRational, bool)> {
    if k < 2 {
        return Err(Error::domain("Agler shifts require k >= 2"));
    }
    let (num, pn) = gamma_half(k);
    let (den, pd) = gamma_half(k + 1);
    let coef = num / den;
    // alpha0 = Gamma(k/2) / (sqrt(pi) Gamma((k+1)/2)): pi power pn - 1 - pd.
    match pn - 1 - pd {
        0 => Ok((coef, false)),
        -2 => Ok((coef, true)),
        p => unreachable!("unexpected pi power {p} in alpha0"),
    }
}

/// The shift whose Aluthge transform is the k-th Agler shift, with weights
/// given in closed form by half-integer gamma ratios (each weight is an
/// exact rational times a power of pi, rendered in floating point).
pub fn agler_preimage(k: u64) -> Result<WeightedShift> {
    let (a0_coef, a0_over_pi) = agler_preimage_alpha0_exact(k)?;
    let weight_parts = move |n: u64| -> (BigRational, i32) {
        if n == 0 {
            return (a0_coef.clone(), if a0_over_pi { -2 } else { 0 });
        }
        if n % 2 == 1 {
            // Gamma(n/2+1) Gamma((k+n)/2) / (Gamma((n+1)/2) Gamma((k+n+1)/2))
            let (c1, p1) = gamma_half(n + 2);
            let (c2, p2) = gamma_half(k + n);
            let (c3, p3) = gamma_half(n + 1);
            let (c4, p4) = gamma_half(k + n + 1);
            (c1 * c2 / (c3 * c4), p1 + p2 - p3 - p4)
        } else {
            // alpha0 * sqrt(pi) k (n/2)! Gamma((k+1)/2) Gamma((k+n)/2)
            //   / (2 Gamma((n+1)/2) Gamma(k/2+1) Gamma((k+n+1)/2))
            let a0_pow = if a0_over_pi { -2 } else { 0 };
            let (c1, p1) = gamma_half(k + 1);
            let (c2, p2) = gamma_half(k + n);
            let (c3, p3) = gamma_half(n + 1);
            let (c4, p4) = gamma_half(k + 2);
            let (c5, p5) = gamma_half(k + n + 1);
            let num = a0_coef.clone()
                * BigRational::from_integer(BigInt::from(k))
                * BigRational::from_integer(factorial((n / 2) as usize))
                * c1
                * c2;
            let den = BigRational::from_integer(BigInt::from(2)) * c3 * c4 * c5;
            (num / den, a0_pow + 1 + p1 + p2 - p3 - p4 - p5)
        }
    };
    Ok(WeightedShift::new(
        format!("agler_preimage({k})"),
        ShiftKind::ClosedForm,
        Some(Scalar::one()),
        true,
        move |n| {
            let (coef, pi_pow) = weight_parts(n as u64);
            Ok(Scalar::from_f64(half_pi_value(&coef, pi_pow)))
        },
    ))
}

// ---------------------------------------------------------------------------
// log gamma
// ---------------------------------------------------------------------------

/// Lanczos coefficients (g = 7, 9 terms).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_log_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: ln Gamma(x) = ln(pi / sin(pi x)) - ln Gamma(1 - x).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - lanczos_log_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Natural log of the gamma function for `x > 0`. Integer and half-integer
/// arguments use exact closed forms; other arguments use a Lanczos
/// approximation.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain("log_gamma requires x > 0"));
    }
    let two_x = 2.0 * x;
    if two_x.fract() == 0.0 && two_x <= 4096.0 {
        let (coef, pi_pow) = gamma_half(two_x as u64);
        return Ok(ln_big_rational(&coef) + 0.5 * pi_pow as f64 * std::f64::consts::PI.ln());
    }
    Ok(lanczos_log_gamma(x))
}
