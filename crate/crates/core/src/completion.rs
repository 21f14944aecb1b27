//! Completion constructions: given a short initial segment of weights,
//! produce a full weight sequence with certified properties.
//!
//! Four routes are implemented: the flat two-atomic completion, the
//! non-flat completion through subshifts of Agler shifts (with the
//! gap-ratio bound that certifies non-flatness), a sufficient three-weight
//! test via reciprocals of completely hyperexpansive shifts, and the
//! classical two-term moment recursion from three prescribed weights.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::measures::{shift_from_measure, BergerMeasure};
use crate::scalar::Scalar;
use crate::shift_model::{subshift, MomentSequence, ShiftKind, WeightedShift};

/// Default cap on the Agler index searched by the subshift completion.
pub const DEFAULT_M_CAP: usize = 1_000_000;

/// Indices of the bracketing weights may not exceed this.
const INDEX_CAP: u128 = 1_000_000_000_000;

// ---------------------------------------------------------------------------
// gap ratio
// ---------------------------------------------------------------------------

/// The weights-squared data of a spacing-`delta` subshift of the `m`-th
/// Agler shift starting at index `n`, together with its gap ratio.
#[derive(Clone, Debug)]
pub struct GapRatio {
    /// First weight squared `(n+1)/(m+n)`.
    pub p: Scalar,
    /// Second weight squared `(n+delta+1)/(m+n+delta)`.
    pub q: Scalar,
    /// Third weight squared `(n+2 delta+1)/(m+n+2 delta)`.
    pub r: Scalar,
    pub g1: Scalar,
    pub g2: Scalar,
    /// `g2 / g1`.
    pub ratio: Scalar,
}

/// Gap data for `m >= 2`, `delta >= 1`.
pub fn gap_ratio(m: usize, n: usize, delta: usize) -> Result<GapRatio> {
    if m < 2 {
        return Err(Error::domain("gap ratio needs m >= 2"));
    }
    if delta < 1 {
        return Err(Error::domain("gap ratio needs delta >= 1"));
    }
    let w = |idx: usize| -> Scalar {
        Scalar::from_big(BigRational::new(
            BigInt::from(idx as u64 + 1),
            BigInt::from((m + idx) as u64),
        ))
    };
    let p = w(n);
    let q = w(n + delta);
    let r = w(n + 2 * delta);
    let g1 = q.sub(&p);
    let g2 = r.sub(&q);
    let ratio = g2.div(&g1);
    Ok(GapRatio {
        p,
        q,
        r,
        g1,
        g2,
        ratio,
    })
}

/// Closed form `(1 - q) / (1 - 2p + q)` of the gap ratio.
pub fn gap_ratio_from_pq(p: &Scalar, q: &Scalar) -> Scalar {
    let one = Scalar::one();
    let num = one.sub(q);
    let den = one.sub(p).sub(p).add(q);
    num.div(&den)
}

/// Closed form `(m + n) / (2 delta + m + n)` of the gap ratio.
pub fn gap_ratio_from_mnd(m: usize, n: usize, delta: usize) -> Scalar {
    Scalar::from_ratio((m + n) as i64, (2 * delta + m + n) as i64)
}

// ---------------------------------------------------------------------------
// trivial (flat) two-weight completion
// ---------------------------------------------------------------------------

fn check_unit_open_interval(v: &Scalar, name: &str) -> Result<()> {
    let ok = match (
        v.try_exact_cmp(&Scalar::zero()),
        v.try_exact_cmp(&Scalar::one()),
    ) {
        (Some(lo), Some(hi)) => lo == Ordering::Greater && hi == Ordering::Less,
        _ => {
            let x = v.to_f64();
            x > 0.0 && x < 1.0
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie strictly in (0, 1)")))
    }
}

fn check_strictly_less(a: &Scalar, b: &Scalar, msg: &str) -> Result<()> {
    let ok = match a.try_exact_cmp(b) {
        Some(o) => o == Ordering::Less,
        None => a.to_f64() < b.to_f64(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(msg.to_string()))
    }
}

/// Flat completion of first two squared weights `0 < a < b < 1`: the shift
/// of the two-atomic measure `(1 - a/b) delta_0 + (a/b) delta_b`, whose
/// weights are `sqrt(a), sqrt(b), sqrt(b), ...`.
pub fn trivial_completion(a: &Scalar, b: &Scalar) -> Result<WeightedShift> {
    check_unit_open_interval(a, "first weight squared")?;
    check_unit_open_interval(b, "second weight squared")?;
    check_strictly_less(a, b, "completion needs a < b strictly")?;
    let c1 = a.div(b);
    let c0 = Scalar::one().sub(&c1);
    let mu = BergerMeasure::new(vec![(Scalar::zero(), c0), (b.clone(), c1)], None)?;
    shift_from_measure(&mu)
}

// ---------------------------------------------------------------------------
// non-flat two-weight completion via Agler subshifts
// ---------------------------------------------------------------------------

/// A two-weight completion through a subshift of an Agler shift.
#[derive(Clone, Debug)]
pub struct GapCompletion {
    pub shift: WeightedShift,
    pub m: usize,
    pub n: usize,
    pub delta: usize,
    /// Achieved first two weights squared.
    pub achieved: (Scalar, Scalar),
    /// Requested first two weights squared.
    pub target: (Scalar, Scalar),
    /// Absolute errors `(a - p, q - b)`, both nonnegative.
    pub errors: (Scalar, Scalar),
    /// Achieved gap ratio `G2/G1` of the constructed shift.
    pub gap_ratio: Scalar,
    /// Lower bound `(1 - b)/(1 - 2a + b)` from the targets.
    pub gap_ratio_lower_bound: Scalar,
}

fn to_exact_rational(v: &Scalar, name: &str) -> Result<BigRational> {
    match v.try_rational() {
        Some(r) => Ok(r),
        None => BigRational::from_float(v.to_f64())
            .ok_or_else(|| Error::domain(format!("{name} is not a finite number"))),
    }
}

/// Approximate squared weights `0 < a < b < 1` from below and above by two
/// weights squared of one Agler shift, with both errors at most `eps`, and
/// return the spacing subshift through them. The search ascends `m` from 2
/// and stops at the smallest admissible index, so exact rational hits are
/// found immediately.
pub fn agler_subshift_completion(
    a: &Scalar,
    b: &Scalar,
    eps: f64,
) -> Result<GapCompletion> {
    agler_subshift_completion_with_cap(a, b, eps, DEFAULT_M_CAP)
}

pub fn agler_subshift_completion_with_cap(
    a: &Scalar,
    b: &Scalar,
    eps: f64,
    m_cap: usize,
) -> Result<GapCompletion> {
    check_unit_open_interval(a, "target a")?;
    check_unit_open_interval(b, "target b")?;
    check_strictly_less(a, b, "completion needs a < b strictly")?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain("eps must be positive"));
    }
    let a_rat = to_exact_rational(a, "a")?;
    let b_rat = to_exact_rational(b, "b")?;
    let eps_rat = BigRational::from_float(eps).expect("eps is finite");
    let one = BigRational::from_integer(1.into());
    for m in 2..=m_cap {
        let m_rat = BigRational::from_integer(BigInt::from(m as u64));
        // Largest n with (n+1)/(m+n) <= a, i.e. n <= (a m - 1)/(1 - a).
        let n_bound = (&a_rat * &m_rat - &one) / (&one - &a_rat);
        if n_bound.is_negative() {
            continue; // the smallest weight of A_m already exceeds a
        }
        let n_int = n_bound.floor().to_integer();
        // Smallest n' with (n'+1)/(m+n') >= b, clamped at 0.
        let np_bound = (&b_rat * &m_rat - &one) / (&one - &b_rat);
        let np_int = if np_bound.is_negative() {
            BigInt::zero()
        } else {
            np_bound.ceil().to_integer()
        };
        if np_int.to_u128().map(|v| v > INDEX_CAP).unwrap_or(true) {
            let cap = BigRational::from_integer(BigInt::from(INDEX_CAP as u64));
            let largest_b = (&cap + &one) / (&m_rat + &cap);
            return Err(Error::domain(format!(
                "b is too close to 1 to bracket from above within the index cap; \
                 largest admissible b for m = {m} is {largest_b}"
            )));
        }
        let n = n_int.to_u128().expect("nonnegative bounded index") as usize;
        let np = np_int.to_u128().expect("nonnegative bounded index") as usize;
        let weight_sq = |idx: usize| {
            BigRational::new(BigInt::from(idx as u64 + 1), BigInt::from((m + idx) as u64))
        };
        let p = weight_sq(n);
        let q = weight_sq(np);
        let err_a = &a_rat - &p;
        let err_b = &q - &b_rat;
        debug_assert!(!err_a.is_negative() && !err_b.is_negative());
        if err_a <= eps_rat && err_b <= eps_rat {
            let delta = np - n;
            let shift = subshift(&WeightedShift::agler(m as u64)?, delta, n)?;
            let ratio = gap_ratio(m, n, delta)?;
            return Ok(GapCompletion {
                shift,
                m,
                n,
                delta,
                achieved: (Scalar::from_big(p), Scalar::from_big(q)),
                target: (a.clone(), b.clone()),
                errors: (Scalar::from_big(err_a), Scalar::from_big(err_b)),
                gap_ratio: ratio.ratio,
                gap_ratio_lower_bound: gap_ratio_from_pq(a, b),
            });
        }
    }
    Err(Error::Resource(format!(
        "no Agler subshift bracketing ({a}, {b}) within eps = {eps} for m <= {m_cap}"
    )))
}

// ---------------------------------------------------------------------------
// three-weight sufficient test
// ---------------------------------------------------------------------------

/// Outcome of the sufficient three-weight test. `sufficient` means a
/// completion with log completely alternating weights exists (through the
/// reciprocal of a completely hyperexpansive shift); failure draws no
/// conclusion, since the condition is not necessary.
#[derive(Clone, Debug)]
pub struct ThreeWeightVerdict {
    pub condition_i: bool,
    /// Value of `1/(a1^2 a2^2) - 2/a1^2 + 1` (needs `<= 0`).
    pub condition_i_value: Scalar,
    pub condition_ii: bool,
    /// `a2^2 (1 - a1^2)^2` (needs `<=` the right side).
    pub condition_ii_lhs: Scalar,
    /// `(1 - a0^2)(1 - a2^2) a1^2`.
    pub condition_ii_rhs: Scalar,
    pub sufficient: bool,
}

/// Sufficient test on three initial weights `0 < a0 < a1 < a2 < 1`.
pub fn che_three_weight_test(
    a0: &Scalar,
    a1: &Scalar,
    a2: &Scalar,
) -> Result<ThreeWeightVerdict> {
    check_unit_open_interval(a0, "first weight")?;
    check_unit_open_interval(a1, "second weight")?;
    check_unit_open_interval(a2, "third weight")?;
    check_strictly_less(a0, a1, "weights must increase strictly")?;
    check_strictly_less(a1, a2, "weights must increase strictly")?;
    let one = Scalar::one();
    let s1 = a1.pow_int(2);
    let s2 = a2.pow_int(2);
    let s0 = a0.pow_int(2);
    let value_i = one
        .div(&s1.mul(&s2))
        .sub(&Scalar::from_int(2).div(&s1))
        .add(&one);
    let cond_i = match value_i.sign() {
        Some(o) => o != Ordering::Greater,
        None => value_i.to_f64() <= 1e-15,
    };
    let lhs = s2.mul(&one.sub(&s1).pow_int(2));
    let rhs = one.sub(&s0).mul(&one.sub(&s2)).mul(&s1);
    let cond_ii = match lhs.try_exact_cmp(&rhs) {
        Some(o) => o != Ordering::Greater,
        None => lhs.to_f64() <= rhs.to_f64() + 1e-15,
    };
    Ok(ThreeWeightVerdict {
        condition_i: cond_i,
        condition_i_value: value_i,
        condition_ii: cond_ii,
        condition_ii_lhs: lhs,
        condition_ii_rhs: rhs,
        sufficient: cond_i && cond_ii,
    })
}

// ---------------------------------------------------------------------------
// Stampfli completion
// ---------------------------------------------------------------------------

/// Number of leading moments validated eagerly at construction.
const STAMPFLI_VALIDATE_WINDOW: usize = 128;

/// Coefficients of the two-term moment recursion behind a Stampfli
/// completion, exposed for inspection.
#[derive(Clone, Debug)]
pub struct StampfliCompletion {
    pub shift: WeightedShift,
    /// `gamma(n+2) = phi1 * gamma(n+1) + phi0 * gamma(n)`.
    pub phi0: Scalar,
    pub phi1: Scalar,
    /// Norm bound `sqrt(c(a+c))` on the completed shift.
    pub norm_bound_sq: Scalar,
}

/// The canonical subnormal completion of three increasing weights
/// `0 < a < b < c`: the tail moments obey the two-term recursion whose
/// coefficients are solved from the first four moments.
pub fn stampfli_completion(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<StampfliCompletion> {
    for (v, name) in [(a, "a"), (b, "b"), (c, "c")] {
        if !v.is_positive() {
            return Err(Error::domain(format!("weight {name} must be positive")));
        }
    }
    check_strictly_less(a, b, "stampfli completion needs a < b < c")?;
    check_strictly_less(b, c, "stampfli completion needs a < b < c")?;
    let g1 = a.pow_int(2);
    let g2 = g1.mul(&b.pow_int(2));
    let g3 = g2.mul(&c.pow_int(2));
    // Solve [g1 1; g2 g1] [phi1; phi0] = [g2; g3].
    let det = g1.pow_int(2).sub(&g2);
    if det.is_zero() {
        return Err(Error::InvalidCompletion(
            "moment system is singular (requires b > a)".into(),
        ));
    }
    let phi1 = g2.mul(&g1).sub(&g3).div(&det);
    let phi0 = g1.mul(&g3).sub(&g2.pow_int(2)).div(&det);
    // Substitute back: both defining equations must hold.
    let check2 = phi1.mul(&g1).add(&phi0);
    let check3 = phi1.mul(&g2).add(&phi0.mul(&g1));
    if check2.sub(&g2).abs().to_f64() > 1e-12 || check3.sub(&g3).abs().to_f64() > 1e-12 {
        return Err(Error::InternalConsistency(
            "moment recursion coefficients fail to reproduce the data".into(),
        ));
    }
    let norm_bound_sq = c.mul(&a.add(c));
    // Weight limit: sqrt of the larger root of x^2 = phi1 x + phi0.
    let disc = phi1.pow_int(2).add(&phi0.mul(&Scalar::from_int(4)));
    let nonneg = match disc.sign() {
        Some(o) => o != Ordering::Less,
        None => disc.to_f64() >= 0.0,
    };
    if !nonneg {
        return Err(Error::InvalidCompletion(
            "moment recursion has no real atoms".into(),
        ));
    }
    let larger_root = phi1.add(&disc.sqrt()?).div(&Scalar::from_int(2));
    let limit = larger_root.sqrt()?;

    let moments = {
        let (p0, p1) = (phi0.clone(), phi1.clone());
        let (m1, m2, m3) = (g1.clone(), g2.clone(), g3.clone());
        MomentSequence::from_fn(move |n| {
            match n {
                0 => return Ok(Scalar::one()),
                1 => return Ok(m1.clone()),
                2 => return Ok(m2.clone()),
                3 => return Ok(m3.clone()),
                _ => {}
            }
            let mut prev = m2.clone();
            let mut cur = m3.clone();
            for _ in 4..=n {
                let next = p1.mul(&cur).add(&p0.mul(&prev));
                prev = cur;
                cur = next;
            }
            Ok(cur)
        })
    };
    let base = crate::shift_model::shift_from_moments(&moments)?;
    let label = format!("stampfli({a}, {b}, {c})");
    let shift = WeightedShift::new(label, ShiftKind::PrefixPlusTail, Some(limit), false, {
        move |n| base.weight(n)
    });
    // Validate the leading window: positive moments and the norm bound.
    for n in 0..STAMPFLI_VALIDATE_WINDOW {
        let w_sq = shift.weight_sq(n).map_err(|e| match e {
            Error::NonPositiveTerm { index } => Error::InvalidCompletion(format!(
                "recursion produced a non-positive moment near index {index}"
            )),
            other => other,
        })?;
        let within = match w_sq.try_exact_cmp(&norm_bound_sq) {
            Some(o) => o != Ordering::Greater,
            None => w_sq.to_f64() <= norm_bound_sq.to_f64() + 1e-12,
        };
        if !within {
            return Err(Error::InvalidCompletion(format!(
                "weight at index {n} exceeds the norm bound"
            )));
        }
    }
    Ok(StampfliCompletion {
        shift,
        phi0,
        phi1,
        norm_bound_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift_model::is_flat;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn gap_ratio_reference_instance() {
        let g = gap_ratio(3, 1, 2).unwrap();
        assert_eq!(g.p, rat(1, 2));
        assert_eq!(g.q, rat(2, 3));
        assert_eq!(g.r, rat(3, 4));
        assert_eq!(g.g1, rat(1, 6));
        assert_eq!(g.g2, rat(1, 12));
        assert_eq!(g.ratio, rat(1, 2));
        assert_eq!(gap_ratio_from_pq(&g.p, &g.q), rat(1, 2));
        assert_eq!(gap_ratio_from_mnd(3, 1, 2), rat(1, 2));
    }

    #[test]
    fn gap_ratio_small_instance() {
        let g = gap_ratio(2, 0, 1).unwrap();
        assert_eq!(g.p, rat(1, 2));
        assert_eq!(g.q, rat(2, 3));
        assert_eq!(gap_ratio_from_mnd(2, 0, 1), rat(1, 2));
        assert_eq!(g.ratio, rat(1, 2));
    }

    #[test]
    fn gap_is_always_positive() {
        // Agler weights increase strictly, so q > p whenever delta >= 1.
        for m in 2..8 {
            for n in 0..6 {
                for delta in 1..4 {
                    let g = gap_ratio(m, n, delta).unwrap();
                    assert!(g.g1.is_positive());
                    assert!(g.g2.is_positive());
                }
            }
        }
    }

    #[test]
    fn trivial_completion_quarter_half() {
        let s = trivial_completion(&rat(1, 4), &rat(1, 2)).unwrap();
        assert_eq!(s.weight_sq(0).unwrap(), rat(1, 4));
        for n in 1..20 {
            assert_eq!(s.weight_sq(n).unwrap(), rat(1, 2));
        }
        assert!(is_flat(&s, 30, 0.0).unwrap().flat);
    }

    #[test]
    fn trivial_completion_rejects_degenerate() {
        assert!(trivial_completion(&rat(1, 2), &rat(1, 2)).is_err());
        assert!(trivial_completion(&rat(1, 2), &rat(1, 4)).is_err());
        assert!(trivial_completion(&rat(1, 4), &Scalar::one()).is_err());
    }

    #[test]
    fn trivial_completion_two_thirds_atom() {
        let s = trivial_completion(&rat(1, 2), &rat(3, 4)).unwrap();
        assert_eq!(s.weight_sq(0).unwrap(), rat(1, 2));
        assert_eq!(s.weight_sq(1).unwrap(), rat(3, 4));
        assert_eq!(s.weight_sq(2).unwrap(), rat(3, 4));
    }

    #[test]
    fn agler_completion_exact_hit() {
        let g = agler_subshift_completion(&rat(1, 2), &rat(2, 3), 1e-2).unwrap();
        assert_eq!(g.achieved.0, rat(1, 2));
        assert_eq!(g.achieved.1, rat(2, 3));
        assert!(g.errors.0.is_zero() && g.errors.1.is_zero());
        assert_eq!(g.gap_ratio, rat(1, 2));
        assert_eq!(g.shift.weight_sq(0).unwrap(), rat(1, 2));
        assert_eq!(g.shift.weight_sq(1).unwrap(), rat(2, 3));
        assert_eq!(g.shift.weight_sq(2).unwrap(), rat(3, 4));
    }

    #[test]
    fn agler_completion_quarter_half() {
        let g = agler_subshift_completion(&rat(1, 4), &rat(1, 2), 1e-4).unwrap();
        assert_eq!(g.achieved.0, rat(1, 4));
        assert_eq!(g.achieved.1, rat(1, 2));
        assert_eq!(g.gap_ratio, rat(1, 2));
        // Third weight squared strictly above the second: non-flat.
        let w2 = g.shift.weight_sq(2).unwrap();
        assert_eq!(w2.cmp_mixed(&g.achieved.1), Ordering::Greater);
        assert!(!is_flat(&g.shift, 30, 0.0).unwrap().flat);
        // Lower bound: (1 - 1/2)/(1 - 1/2 + 1/2) = 1/2.
        assert_eq!(g.gap_ratio_lower_bound, rat(1, 2));
    }

    #[test]
    fn agler_completion_rejects_bad_input() {
        assert!(agler_subshift_completion(&rat(1, 2), &rat(1, 3), 1e-3).is_err());
        assert!(agler_subshift_completion(&rat(1, 2), &rat(2, 3), 0.0).is_err());
        assert!(matches!(
            agler_subshift_completion_with_cap(&rat(37, 100), &rat(61, 100), 1e-9, 50),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn che_test_agler3_head_fails_condition_i() {
        // First three weights of A_3: sqrt(1/3), sqrt(2/4), sqrt(3/5).
        let v = che_three_weight_test(
            &rat(1, 3).sqrt().unwrap(),
            &rat(2, 4).sqrt().unwrap(),
            &rat(3, 5).sqrt().unwrap(),
        )
        .unwrap();
        assert!(!v.condition_i);
        assert_eq!(v.condition_i_value, rat(1, 3));
        assert!(!v.sufficient);
    }

    #[test]
    fn che_test_passing_triple() {
        // Weights squared (0.4, 0.7, 0.8).
        let v = che_three_weight_test(
            &rat(2, 5).sqrt().unwrap(),
            &rat(7, 10).sqrt().unwrap(),
            &rat(4, 5).sqrt().unwrap(),
        )
        .unwrap();
        assert!(v.condition_i);
        assert_eq!(v.condition_i_value, rat(-1, 14));
        assert!(v.condition_ii);
        assert_eq!(v.condition_ii_lhs, rat(9, 125)); // 0.8 * 0.09 = 0.072
        assert_eq!(v.condition_ii_rhs, rat(21, 250)); // 0.6 * 0.2 * 0.7 = 0.084
        assert!(v.sufficient);
    }

    #[test]
    fn che_test_second_condition_fails() {
        // Weights squared (0.1, 0.6, 0.8): (i) holds, (ii) fails.
        let v = che_three_weight_test(
            &rat(1, 10).sqrt().unwrap(),
            &rat(3, 5).sqrt().unwrap(),
            &rat(4, 5).sqrt().unwrap(),
        )
        .unwrap();
        assert!(v.condition_i);
        assert_eq!(v.condition_i_value, rat(-1, 4));
        assert!(!v.condition_ii);
        assert_eq!(v.condition_ii_lhs, rat(16, 125)); // 0.128
        assert_eq!(v.condition_ii_rhs, rat(27, 250)); // 0.108
        assert!(!v.sufficient);
    }

    #[test]
    fn che_test_rejects_unordered() {
        assert!(che_three_weight_test(&rat(1, 2), &rat(1, 2), &rat(3, 4)).is_err());
        assert!(che_three_weight_test(&rat(3, 4), &rat(1, 2), &rat(4, 5)).is_err());
    }

    #[test]
    fn stampfli_reference_example() {
        let c = stampfli_completion(
            &rat(1, 2),
            &rat(1, 2).sqrt().unwrap(),
            &Scalar::one(),
        )
        .unwrap();
        assert_eq!(c.phi0, rat(-1, 4));
        assert_eq!(c.phi1, rat(3, 2));
        let g = crate::shift_model::moments(&c.shift);
        assert_eq!(g.gamma(4).unwrap(), rat(5, 32));
        assert_eq!(c.shift.weight_sq(3).unwrap(), rat(5, 4));
        assert!(!is_flat(&c.shift, 30, 0.0).unwrap().flat);
        // First three weights are reproduced.
        assert_eq!(c.shift.weight_sq(0).unwrap(), rat(1, 4));
        assert_eq!(c.shift.weight_sq(1).unwrap(), rat(1, 2));
        assert_eq!(c.shift.weight_sq(2).unwrap(), Scalar::one());
        assert_eq!(c.norm_bound_sq, rat(3, 2));
    }

    #[test]
    fn stampfli_rejects_unordered_weights() {
        assert!(stampfli_completion(&rat(1, 2), &rat(1, 2), &Scalar::one()).is_err());
        assert!(stampfli_completion(&rat(3, 4), &rat(1, 2), &Scalar::one()).is_err());
    }

    #[test]
    fn stampfli_norm_bound_holds_on_window() {
        let c = stampfli_completion(&rat(1, 3), &rat(1, 2), &rat(3, 4)).unwrap();
        for n in 0..60 {
            let w_sq = c.shift.weight_sq(n).unwrap();
            assert_ne!(
                w_sq.cmp_mixed(&c.norm_bound_sq),
                Ordering::Greater,
                "norm bound violated at {n}"
            );
        }
    }
}
