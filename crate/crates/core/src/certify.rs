//! Finite-order certification: moment infinite divisibility, Hankel-matrix
//! positivity (k-hyponormality), n-contractivity, complete hyperexpansivity,
//! the implication diagram between weight and moment conditions, and the
//! flatness-rigidity check.
//!
//! Every certificate records its sweep bounds, verdict, first witness on
//! failure, and whether any sign had to be decided in floating point.
//! Certification of moment infinite divisibility always runs two routes
//! (log-alternating weights squared and log-monotone moments, linked by the
//! identity `LT_gamma(n+1,k) = -LT_{w^2}(n,k)`) and errors out if they ever
//! disagree, since a disagreement can only be an arithmetic bug.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq_core::{log_diff, test_property, PropertyVerdict, SeqProperty, FLOAT_ABS_TOL};
use crate::shift_model::{
    is_flat, moments, norm_estimate, normalize, FlatnessVerdict, WeightedShift,
};

/// Default order bound for certification sweeps.
pub const DEFAULT_ORDER: usize = 8;
/// Default index bound for certification sweeps.
pub const DEFAULT_RANGE: usize = 40;

/// What a certificate asserts about its subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Mid,
    KHyponormal(usize),
    NContractive,
    CompletelyHyperexpansive,
    WeightsCompletelyAlternating,
    WeightsLogCompletelyAlternating,
    MomentsLogCompletelyMonotone,
    MomentsCompletelyMonotone,
}

impl Claim {
    pub fn name(&self) -> String {
        match self {
            Claim::Mid => "mid".into(),
            Claim::KHyponormal(k) => format!("{k}-hyponormal"),
            Claim::NContractive => "n-contractive".into(),
            Claim::CompletelyHyperexpansive => "completely-hyperexpansive".into(),
            Claim::WeightsCompletelyAlternating => "weights-ca".into(),
            Claim::WeightsLogCompletelyAlternating => "weights-log-ca".into(),
            Claim::MomentsLogCompletelyMonotone => "moments-log-cm".into(),
            Claim::MomentsCompletelyMonotone => "moments-cm".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Passed, but some test only within the float boundary tolerance.
    Marginal,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        !matches!(self, Verdict::Fail)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Marginal => "marginal",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl ArithmeticMode {
    pub fn name(self) -> &'static str {
        match self {
            ArithmeticMode::Exact => "exact",
            ArithmeticMode::Float => "float",
        }
    }
}

/// First failing test of a certification sweep.
#[derive(Clone, Debug)]
pub struct CertWitness {
    pub order: usize,
    pub index: usize,
    pub value: Scalar,
}

/// Outcome of one certification run.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub subject: String,
    pub claim: Claim,
    pub order_bound: usize,
    pub index_bound: usize,
    pub verdict: Verdict,
    pub witness: Option<CertWitness>,
    pub arithmetic_mode: ArithmeticMode,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    fn from_verdict(subject: String, claim: Claim, v: &PropertyVerdict) -> Certificate {
        let verdict = if !v.passed {
            Verdict::Fail
        } else if v.marginal {
            Verdict::Marginal
        } else {
            Verdict::Pass
        };
        Certificate {
            subject,
            claim,
            order_bound: v.order_bound,
            index_bound: v.index_bound,
            verdict,
            witness: v.witness.as_ref().map(|w| CertWitness {
                order: w.order,
                index: w.index,
                value: w.value.clone(),
            }),
            arithmetic_mode: if v.float_decided {
                ArithmeticMode::Float
            } else {
                ArithmeticMode::Exact
            },
            notes: Vec::new(),
        }
    }
}

/// Is the shift a contraction over the inspected window?
fn is_contraction(shift: &WeightedShift, window: usize) -> Result<bool> {
    let est = norm_estimate(shift, window)?;
    Ok(match est.value.try_exact_cmp(&Scalar::one()) {
        Some(o) => o != Ordering::Greater,
        None => est.value.to_f64() <= 1.0 + FLOAT_ABS_TOL,
    })
}

/// Certify moment infinite divisibility over the sweep `n <= order_bound`,
/// `k <= index_bound`: the squared weights must be log completely
/// alternating at those orders. Shifts that are not contractions over the
/// window are normalized first (the property is scale invariant). The
/// equivalent moment-side sweep (log complete monotonicity at order
/// `order_bound + 1`) always runs as a cross-check and must agree.
pub fn certify_mid(
    shift: &WeightedShift,
    order_bound: usize,
    index_bound: usize,
) -> Result<Certificate> {
    let window = index_bound + order_bound + 1;
    let mut notes = Vec::new();
    let working = if is_contraction(shift, window)? {
        shift.clone()
    } else {
        notes.push(format!(
            "not a contraction over [0, {window}]; normalized before testing"
        ));
        normalize(shift, window)?
    };
    let weights_side = test_property(
        &working.weights_sq_seq(),
        SeqProperty::LogAlternating,
        order_bound,
        index_bound,
    )?;
    let moments_side = test_property(
        &moments(&working).as_sequence(),
        SeqProperty::LogMonotone,
        order_bound + 1,
        index_bound,
    )?;
    if weights_side.passed != moments_side.passed {
        return Err(Error::InternalConsistency(format!(
            "weights-side and moments-side MID sweeps disagree for {} \
             (weights passed: {}, moments passed: {})",
            shift.label(),
            weights_side.passed,
            moments_side.passed
        )));
    }
    let mut cert = Certificate::from_verdict(shift.label().to_string(), Claim::Mid, &weights_side);
    if moments_side.float_decided {
        cert.arithmetic_mode = ArithmeticMode::Float;
    }
    notes.push(format!(
        "moment-side log complete monotonicity agreed at order {}",
        order_bound + 1
    ));
    cert.notes.extend(notes);
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Hankel matrices and k-hyponormality
// ---------------------------------------------------------------------------

/// The `(k+1) x (k+1)` Hankel moment matrix with entries
/// `gamma(base + i + j)`.
#[derive(Clone, Debug)]
pub struct HankelMatrix {
    pub base: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl HankelMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }
}

/// Build the Hankel moment matrix `A(n, k)` of a shift (`k >= 1`).
pub fn hankel(shift: &WeightedShift, n: usize, k: usize) -> Result<HankelMatrix> {
    if k < 1 {
        return Err(Error::domain("hankel needs k >= 1"));
    }
    let g = moments(shift);
    let mut entries = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut row = Vec::with_capacity(k + 1);
        for j in 0..=k {
            row.push(g.gamma(n + i + j)?);
        }
        entries.push(row);
    }
    Ok(HankelMatrix { base: n, entries })
}

/// Exact positive-semidefiniteness result.
enum PsdOutcome {
    Psd,
    /// A strictly negative pivot in the LDL^T elimination (equal to the
    /// ratio of consecutive leading principal minors).
    NegativePivot { step: usize, value: BigRational },
    /// A negative principal minor found after a zero pivot.
    NegativeMinor { subset: Vec<usize>, det: BigRational },
}

/// Exact determinant by Gaussian elimination with pivoting.
#[allow(clippy::needless_range_loop)]
fn det_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return BigRational::from_integer(0.into()),
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let factor = &a[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// All principal minors of a symmetric rational matrix must be nonnegative
/// for positive semidefiniteness (leading minors alone do not suffice for
/// the semidefinite case).
fn all_principal_minors_nonneg(a: &[Vec<BigRational>]) -> Option<(Vec<usize>, BigRational)> {
    let n = a.len();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let m = subset.len();
        let mut sub = vec![vec![BigRational::from_integer(0.into()); m]; m];
        for (i, &r) in subset.iter().enumerate() {
            for (j, &c) in subset.iter().enumerate() {
                sub[i][j] = a[r][c].clone();
            }
        }
        let det = det_exact(sub);
        if det.is_negative() {
            return Some((subset, det));
        }
    }
    None
}

/// Decide positive semidefiniteness of a symmetric rational matrix by
/// LDL^T; a zero pivot hands the remaining trailing block to the
/// all-principal-minors criterion.
#[allow(clippy::needless_range_loop)]
fn psd_exact(mut a: Vec<Vec<BigRational>>) -> PsdOutcome {
    let n = a.len();
    for i in 0..n {
        let d = a[i][i].clone();
        if d.is_negative() {
            return PsdOutcome::NegativePivot { step: i, value: d };
        }
        if d.is_zero() {
            let trailing: Vec<Vec<BigRational>> = (i..n)
                .map(|r| a[r][i..n].to_vec())
                .collect();
            return match all_principal_minors_nonneg(&trailing) {
                None => PsdOutcome::Psd,
                Some((subset, det)) => PsdOutcome::NegativeMinor {
                    subset: subset.into_iter().map(|s| s + i).collect(),
                    det,
                },
            };
        }
        for r in i + 1..n {
            let factor = &a[r][i] / &d;
            if factor.is_zero() {
                continue;
            }
            for c in i..n {
                let sub = &factor * &a[i][c];
                a[r][c] -= sub;
            }
        }
    }
    PsdOutcome::Psd
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn min_eigenvalue_sym(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[p][q].abs());
            }
        }
        let scale = (0..n).map(|i| a[i][i].abs()).fold(0.0f64, f64::max);
        if off <= 1e-15 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Certify k-hyponormality: `A(n, k)` positive semidefinite for all
/// `0 <= n <= n_max`. Exact rational moments use LDL^T with the
/// principal-minor fallback; float moments use an eigenvalue floor of
/// `-1e-10 * ||A||`.
pub fn certify_k_hyponormal(
    shift: &WeightedShift,
    k: usize,
    n_max: usize,
) -> Result<Certificate> {
    if k < 1 {
        return Err(Error::domain("k-hyponormality needs k >= 1"));
    }
    let mut mode = ArithmeticMode::Exact;
    let mut notes = Vec::new();
    for n in 0..=n_max {
        let h = hankel(shift, n, k)?;
        let rational: Option<Vec<Vec<BigRational>>> = h
            .entries
            .iter()
            .map(|row| row.iter().map(|s| s.try_rational()).collect())
            .collect();
        match rational {
            Some(m) => match psd_exact(m) {
                PsdOutcome::Psd => {}
                PsdOutcome::NegativePivot { step, value } => {
                    notes.push(format!(
                        "negative LDL^T pivot (ratio of leading minors) at elimination step {step}"
                    ));
                    return Ok(Certificate {
                        subject: shift.label().to_string(),
                        claim: Claim::KHyponormal(k),
                        order_bound: k,
                        index_bound: n_max,
                        verdict: Verdict::Fail,
                        witness: Some(CertWitness {
                            order: n,
                            index: step,
                            value: Scalar::from_big(value),
                        }),
                        arithmetic_mode: mode,
                        notes,
                    });
                }
                PsdOutcome::NegativeMinor { subset, det } => {
                    notes.push(format!("negative principal minor on rows {subset:?}"));
                    return Ok(Certificate {
                        subject: shift.label().to_string(),
                        claim: Claim::KHyponormal(k),
                        order_bound: k,
                        index_bound: n_max,
                        verdict: Verdict::Fail,
                        witness: Some(CertWitness {
                            order: n,
                            index: subset[0],
                            value: Scalar::from_big(det),
                        }),
                        arithmetic_mode: mode,
                        notes,
                    });
                }
            },
            None => {
                mode = ArithmeticMode::Float;
                let m: Vec<Vec<f64>> = h
                    .entries
                    .iter()
                    .map(|row| row.iter().map(|s| s.to_f64()).collect())
                    .collect();
                let norm = m
                    .iter()
                    .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
                    .fold(0.0f64, f64::max);
                let min_eig = min_eigenvalue_sym(m);
                if min_eig < -1e-10 * norm {
                    return Ok(Certificate {
                        subject: shift.label().to_string(),
                        claim: Claim::KHyponormal(k),
                        order_bound: k,
                        index_bound: n_max,
                        verdict: Verdict::Fail,
                        witness: Some(CertWitness {
                            order: n,
                            index: 0,
                            value: Scalar::from_f64(min_eig),
                        }),
                        arithmetic_mode: mode,
                        notes,
                    });
                }
            }
        }
    }
    Ok(Certificate {
        subject: shift.label().to_string(),
        claim: Claim::KHyponormal(k),
        order_bound: k,
        index_bound: n_max,
        verdict: Verdict::Pass,
        witness: None,
        arithmetic_mode: mode,
        notes,
    })
}

// ---------------------------------------------------------------------------
// contractivity and hyperexpansivity
// ---------------------------------------------------------------------------

/// Certify n-contractivity: `T_gamma(n, k) >= 0` over the sweep. Intended
/// for contractions; a note is attached when the subject is not one.
pub fn certify_n_contractive(
    shift: &WeightedShift,
    order_bound: usize,
    index_bound: usize,
) -> Result<Certificate> {
    let v = test_property(
        &moments(shift).as_sequence(),
        SeqProperty::Monotone,
        order_bound,
        index_bound,
    )?;
    let mut cert =
        Certificate::from_verdict(shift.label().to_string(), Claim::NContractive, &v);
    if !is_contraction(shift, index_bound + order_bound + 1)? {
        cert.notes
            .push("warning: subject is not a contraction over the sweep window".into());
    }
    Ok(cert)
}

/// Certify complete hyperexpansivity at finite order:
/// `T_gamma(n, k) <= 0` for `1 <= n <= order_bound`.
pub fn certify_che(
    shift: &WeightedShift,
    order_bound: usize,
    index_bound: usize,
) -> Result<Certificate> {
    let v = test_property(
        &moments(shift).as_sequence(),
        SeqProperty::Alternating,
        order_bound,
        index_bound,
    )?;
    Ok(Certificate::from_verdict(
        shift.label().to_string(),
        Claim::CompletelyHyperexpansive,
        &v,
    ))
}

// ---------------------------------------------------------------------------
// implication diagram
// ---------------------------------------------------------------------------

/// Verdicts of the four related sweeps, with their one- and two-way
/// implications verified.
#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub subject: String,
    pub contraction: bool,
    pub weights_ca: Certificate,
    pub weights_log_ca: Certificate,
    pub moments_log_cm: Certificate,
    pub moments_cm: Certificate,
}

/// Run the four sweeps (squared weights completely alternating / log
/// completely alternating, moments log completely monotone / completely
/// monotone) and check the implications between their verdicts. The
/// moment-side sweeps run at `order_bound + 1` so that the weight/moment
/// equivalence is order-exact. Implication violations raise an
/// internal-consistency error: the implications are theorems, so a
/// violation means an arithmetic bug.
pub fn diagram_check(
    shift: &WeightedShift,
    order_bound: usize,
    index_bound: usize,
) -> Result<DiagramReport> {
    let subject = shift.label().to_string();
    let window = index_bound + order_bound + 2;
    let contraction = is_contraction(shift, window)?;
    let wsq = shift.weights_sq_seq();
    let gam = moments(shift).as_sequence();
    let weights_ca = Certificate::from_verdict(
        subject.clone(),
        Claim::WeightsCompletelyAlternating,
        &test_property(&wsq, SeqProperty::Alternating, order_bound, index_bound)?,
    );
    let weights_log_ca = Certificate::from_verdict(
        subject.clone(),
        Claim::WeightsLogCompletelyAlternating,
        &test_property(&wsq, SeqProperty::LogAlternating, order_bound, index_bound)?,
    );
    let moments_log_cm = Certificate::from_verdict(
        subject.clone(),
        Claim::MomentsLogCompletelyMonotone,
        &test_property(&gam, SeqProperty::LogMonotone, order_bound + 1, index_bound)?,
    );
    let moments_cm = Certificate::from_verdict(
        subject.clone(),
        Claim::MomentsCompletelyMonotone,
        &test_property(&gam, SeqProperty::Monotone, order_bound + 1, index_bound)?,
    );
    if weights_ca.passed() && !weights_log_ca.passed() {
        return Err(Error::InternalConsistency(format!(
            "{subject}: weights squared completely alternating but not log completely alternating"
        )));
    }
    if contraction {
        if weights_log_ca.passed() != moments_log_cm.passed() {
            return Err(Error::InternalConsistency(format!(
                "{subject}: log-alternating weights and log-monotone moments disagree"
            )));
        }
        if moments_log_cm.passed() && !moments_cm.passed() {
            return Err(Error::InternalConsistency(format!(
                "{subject}: moments log completely monotone but not completely monotone"
            )));
        }
    }
    Ok(DiagramReport {
        subject,
        contraction,
        weights_ca,
        weights_log_ca,
        moments_log_cm,
        moments_cm,
    })
}

// ---------------------------------------------------------------------------
// flatness rigidity
// ---------------------------------------------------------------------------

/// Outcome of the flatness-rigidity scan.
#[derive(Clone, Debug)]
pub struct FlatnessRigidityReport {
    pub mid: Certificate,
    /// All `(n, k)` with `LT_w(n, k) = 0` (exactly in rational mode,
    /// within `tol` in float mode).
    pub zeros: Vec<(usize, usize)>,
    pub flatness: FlatnessVerdict,
    /// An MID-certified shift with a vanishing log difference must be
    /// flat; this flag marks the contradiction case.
    pub alarm: bool,
}

/// Scan `LT_w(n, k)` for zeros over the sweep and cross it with MID
/// certification and flatness.
pub fn flatness_rigidity_check(
    shift: &WeightedShift,
    order_bound: usize,
    index_bound: usize,
    tol: f64,
) -> Result<FlatnessRigidityReport> {
    let mid = certify_mid(shift, order_bound, index_bound)?;
    let weights = shift.weights_seq();
    let mut zeros = Vec::new();
    for n in 1..=order_bound {
        for k in 0..=index_bound {
            let ld = log_diff(&weights, n, k)?;
            let is_zero = match ld.exact_sign {
                Some(o) => o == Ordering::Equal,
                None => ld.value.abs() <= tol,
            };
            if is_zero {
                zeros.push((n, k));
            }
        }
    }
    let flatness = is_flat(shift, index_bound.max(2), tol)?;
    let alarm = mid.passed() && !zeros.is_empty() && !flatness.flat;
    Ok(FlatnessRigidityReport {
        mid,
        zeros,
        flatness,
        alarm,
    })
}
