//! Berger measures: finite sums of point atoms on `[0,1]` plus the two
//! catalogued density families, their power moments, and the shifts they
//! induce.
//!
//! A subnormal weighted shift corresponds to a probability measure whose
//! power moments are the shift's moments; this module works in the other
//! direction, producing moment sequences and shifts from measure data. All
//! moments are exact rationals when the measure data is rational.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::shift_model::{shift_from_moments, MomentSequence, ShiftKind, WeightedShift};

/// Catalogued densities on `[0, 1]`.
#[derive(Clone, Debug)]
pub enum Density {
    /// `mass * chi_[0,1](t) dt`; contributes total mass `mass`.
    Uniform { mass: Scalar },
    /// `(s-1)(1-t)^(s-2) chi_[0,1](t) dt` for `s > 1`; a probability
    /// density on its own (total mass 1).
    AglerFamily { s: Scalar },
}

impl Density {
    fn total_mass(&self) -> Scalar {
        match self {
            Density::Uniform { mass } => mass.clone(),
            Density::AglerFamily { .. } => Scalar::one(),
        }
    }

    /// `integral t^n d(density)`.
    fn moment(&self, n: usize) -> Scalar {
        match self {
            Density::Uniform { mass } => mass.div(&Scalar::from_int(n as i64 + 1)),
            Density::AglerFamily { s } => {
                // (s-1) * B(n+1, s-1) = n! / prod_{i=1..n} (s-1+i),
                // exact for rational s.
                let mut num = Scalar::from_big(BigRational::from_integer(factorial(n)));
                for i in 1..=n {
                    let term = s.add(&Scalar::from_int(i as i64 - 1));
                    num = num.div(&term);
                }
                num
            }
        }
    }
}

/// A probability measure on `[0, 1]`: atoms plus an optional catalogued
/// density. Total mass must be 1.
#[derive(Clone, Debug)]
pub struct BergerMeasure {
    atoms: Vec<(Scalar, Scalar)>,
    density: Option<Density>,
}

impl BergerMeasure {
    pub fn new(atoms: Vec<(Scalar, Scalar)>, density: Option<Density>) -> Result<Self> {
        let mut total = Scalar::zero();
        for (t, mass) in &atoms {
            if !in_unit_interval(t) {
                return Err(Error::domain(format!("atom location {t} outside [0, 1]")));
            }
            if !mass.is_positive() {
                return Err(Error::domain("atom masses must be positive"));
            }
            total = total.add(mass);
        }
        if let Some(d) = &density {
            if let Density::AglerFamily { s } = d {
                let above_one = match s.try_exact_cmp(&Scalar::one()) {
                    Some(o) => o == Ordering::Greater,
                    None => s.to_f64() > 1.0,
                };
                if !above_one {
                    return Err(Error::domain("agler_family density requires s > 1"));
                }
            }
            if let Density::Uniform { mass } = d {
                if !mass.is_positive() {
                    return Err(Error::domain("uniform density mass must be positive"));
                }
            }
            total = total.add(&d.total_mass());
        }
        let unit = match total.try_exact_cmp(&Scalar::one()) {
            Some(o) => o == Ordering::Equal,
            None => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !unit {
            return Err(Error::domain(format!("total mass must be 1, got {total}")));
        }
        Ok(BergerMeasure { atoms, density })
    }

    /// Single unit atom at `t`.
    pub fn point_mass(t: Scalar) -> Result<Self> {
        BergerMeasure::new(vec![(t, Scalar::one())], None)
    }

    pub fn atoms(&self) -> &[(Scalar, Scalar)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    /// Supremum of the support.
    fn support_sup(&self) -> Scalar {
        let mut sup = Scalar::zero();
        for (t, _) in &self.atoms {
            if t.cmp_mixed(&sup) == Ordering::Greater {
                sup = t.clone();
            }
        }
        if self.density.is_some() {
            sup = Scalar::one();
        }
        sup
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if !self.atoms.is_empty() {
            let list: Vec<String> = self
                .atoms
                .iter()
                .map(|(t, m)| format!("({t},{m})"))
                .collect();
            parts.push(format!("atoms[{}]", list.join(",")));
        }
        match &self.density {
            Some(Density::Uniform { mass }) => parts.push(format!("density[uniform({mass})]")),
            Some(Density::AglerFamily { s }) => {
                parts.push(format!("density[agler_family({s})]"))
            }
            None => {}
        }
        parts.join(" + ")
    }
}

fn in_unit_interval(t: &Scalar) -> bool {
    let lo = match t.try_exact_cmp(&Scalar::zero()) {
        Some(o) => o != Ordering::Less,
        None => t.to_f64() >= 0.0,
    };
    let hi = match t.try_exact_cmp(&Scalar::one()) {
        Some(o) => o != Ordering::Greater,
        None => t.to_f64() <= 1.0,
    };
    lo && hi
}

/// `integral t^n d mu(t)`; exact for rational atom data and rational `s`.
pub fn moment_of_measure(mu: &BergerMeasure, n: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for (t, mass) in &mu.atoms {
        acc = acc.add(&mass.mul(&t.pow_int(n as i64)));
    }
    if let Some(d) = &mu.density {
        acc = acc.add(&d.moment(n));
    }
    acc
}

/// The moment sequence of a measure.
pub fn measure_moments(mu: &BergerMeasure) -> MomentSequence {
    let m = mu.clone();
    MomentSequence::from_fn(move |n| Ok(moment_of_measure(&m, n)))
}

/// The weighted shift whose Berger measure is `mu`. Fails for measures with
/// all mass at the origin (no positive weight sequence exists).
pub fn shift_from_measure(mu: &BergerMeasure) -> Result<WeightedShift> {
    let g1 = moment_of_measure(mu, 1);
    if !g1.is_positive() {
        return Err(Error::DegenerateMeasure(
            "all mass at the origin gives no weight sequence".into(),
        ));
    }
    let gamma = measure_moments(mu);
    let base = shift_from_moments(&gamma)?;
    let limit = mu.support_sup().sqrt()?;
    let label = format!("measure({})", mu.describe());
    Ok(WeightedShift::new(
        label,
        ShiftKind::MeasureDerived,
        Some(limit),
        false,
        move |n| base.weight(n),
    ))
}

/// Result of comparing a shift's moments against a measure's moments.
#[derive(Clone, Debug)]
pub struct MomentMatch {
    pub matched: bool,
    pub checked_upto: usize,
    pub first_mismatch: Option<(usize, Scalar, Scalar)>,
}

/// Verify `|gamma_shift(n) - gamma_mu(n)| <= tol * gamma_mu(n)` for
/// `n <= upto`. With `tol = 0` and exact data the comparison is exact.
pub fn moment_match(
    mu: &BergerMeasure,
    shift: &WeightedShift,
    upto: usize,
    tol: f64,
) -> Result<MomentMatch> {
    if upto < 1 {
        return Err(Error::domain("moment match needs upto >= 1"));
    }
    let gs = crate::shift_model::moments(shift);
    for n in 0..=upto {
        let expect = moment_of_measure(mu, n);
        let got = gs.gamma(n)?;
        let ok = match (got.try_exact_cmp(&expect), tol == 0.0) {
            (Some(o), true) => o == Ordering::Equal,
            _ => {
                let e = expect.to_f64();
                (got.to_f64() - e).abs() <= tol * e.abs()
            }
        };
        if !ok {
            return Ok(MomentMatch {
                matched: false,
                checked_upto: upto,
                first_mismatch: Some((n, got, expect)),
            });
        }
    }
    Ok(MomentMatch {
        matched: true,
        checked_upto: upto,
        first_mismatch: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift_model::{is_flat, quotient_shift};

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn half_lebesgue_half_dirac() -> BergerMeasure {
        BergerMeasure::new(
            vec![(Scalar::one(), rat(1, 2))],
            Some(Density::Uniform { mass: rat(1, 2) }),
        )
        .unwrap()
    }

    #[test]
    fn mixed_measure_moment() {
        // (1/2) chi dt + (1/2) delta_1 at n = 2: 1/2 * 1/3 + 1/2 = 2/3.
        let mu = half_lebesgue_half_dirac();
        assert_eq!(moment_of_measure(&mu, 2), rat(2, 3));
        assert_eq!(moment_of_measure(&mu, 0), Scalar::one());
    }

    #[test]
    fn dirac_at_zero_moments() {
        let mu = BergerMeasure::point_mass(Scalar::zero()).unwrap();
        assert_eq!(moment_of_measure(&mu, 0), Scalar::one());
        for n in 1..5 {
            assert!(moment_of_measure(&mu, n).is_zero());
        }
        assert!(matches!(
            shift_from_measure(&mu),
            Err(Error::DegenerateMeasure(_))
        ));
    }

    #[test]
    fn agler_family_density_moments() {
        // s = 2 is Lebesgue measure: moments 1/(n+1).
        let mu =
            BergerMeasure::new(vec![], Some(Density::AglerFamily { s: rat(2, 1) })).unwrap();
        for n in 0..20 {
            assert_eq!(moment_of_measure(&mu, n), rat(1, n as i64 + 1));
        }
        // s = 3: moments 2/((n+1)(n+2)).
        let mu =
            BergerMeasure::new(vec![], Some(Density::AglerFamily { s: rat(3, 1) })).unwrap();
        for n in 0..20 {
            let n_i = n as i64;
            assert_eq!(moment_of_measure(&mu, n), rat(2, (n_i + 1) * (n_i + 2)));
        }
    }

    #[test]
    fn two_atomic_measure_gives_flat_shift() {
        // c0 delta_0 + c1 delta_r: weights sqrt(c1 r), sqrt(r), sqrt(r), ...
        let mu = BergerMeasure::new(
            vec![(Scalar::zero(), rat(1, 2)), (rat(1, 2), rat(1, 2))],
            None,
        )
        .unwrap();
        let s = shift_from_measure(&mu).unwrap();
        assert_eq!(s.weight_sq(0).unwrap(), rat(1, 4));
        for n in 1..20 {
            assert_eq!(s.weight_sq(n).unwrap(), rat(1, 2));
        }
        assert!(is_flat(&s, 30, 0.0).unwrap().flat);
    }

    #[test]
    fn agler_family_three_gives_agler3() {
        let mu =
            BergerMeasure::new(vec![], Some(Density::AglerFamily { s: rat(3, 1) })).unwrap();
        let s = shift_from_measure(&mu).unwrap();
        let a3 = WeightedShift::agler(3).unwrap();
        for n in 0..30 {
            assert_eq!(
                s.weight_sq(n).unwrap().try_rational().unwrap(),
                a3.weight_sq(n).unwrap().try_rational().unwrap()
            );
        }
    }

    #[test]
    fn dirac_at_one_gives_unweighted() {
        let mu = BergerMeasure::point_mass(Scalar::one()).unwrap();
        let s = shift_from_measure(&mu).unwrap();
        for n in 0..10 {
            assert_eq!(s.weight(n).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn moment_match_quotient_measure() {
        // The spacing-1 quotient of the Bergman shift has Berger measure
        // (1/2) chi dt + (1/2) delta_1: moments (n+2)/(2(n+1)).
        let mu = half_lebesgue_half_dirac();
        let q = quotient_shift(&WeightedShift::bergman(), 1).unwrap();
        let m = moment_match(&mu, &q, 50, 0.0).unwrap();
        assert!(m.matched, "mismatch: {:?}", m.first_mismatch);
    }

    #[test]
    fn moment_match_lebesgue_vs_bergman() {
        let mu = BergerMeasure::new(vec![], Some(Density::Uniform { mass: Scalar::one() }))
            .unwrap();
        let m = moment_match(&mu, &WeightedShift::bergman(), 50, 0.0).unwrap();
        assert!(m.matched);
    }

    #[test]
    fn moment_match_detects_mismatch() {
        let mu = BergerMeasure::point_mass(Scalar::one()).unwrap();
        let m = moment_match(&mu, &WeightedShift::bergman(), 10, 0.0).unwrap();
        assert!(!m.matched);
        assert_eq!(m.first_mismatch.unwrap().0, 1);
    }

    #[test]
    fn mass_and_domain_validation() {
        assert!(BergerMeasure::new(vec![(rat(1, 2), rat(1, 2))], None).is_err());
        assert!(BergerMeasure::new(vec![(rat(3, 2), Scalar::one())], None).is_err());
        assert!(BergerMeasure::new(
            vec![(rat(1, 2), rat(1, 2))],
            Some(Density::AglerFamily { s: rat(3, 1) })
        )
        .is_err());
        assert!(
            BergerMeasure::new(vec![], Some(Density::AglerFamily { s: rat(1, 1) })).is_err()
        );
    }

    #[test]
    fn support_contraction_moments_non_increasing() {
        let measures = vec![
            half_lebesgue_half_dirac(),
            BergerMeasure::new(vec![], Some(Density::AglerFamily { s: rat(5, 2) })).unwrap(),
            BergerMeasure::new(
                vec![(Scalar::zero(), rat(1, 3)), (rat(2, 3), rat(2, 3))],
                None,
            )
            .unwrap(),
        ];
        for mu in measures {
            for n in 0..50 {
                let a = moment_of_measure(&mu, n);
                let b = moment_of_measure(&mu, n + 1);
                assert_ne!(
                    a.cmp_mixed(&b),
                    Ordering::Less,
                    "moments increased at {n} for {}",
                    mu.describe()
                );
            }
        }
    }
}
