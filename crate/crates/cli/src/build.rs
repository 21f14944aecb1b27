//! Evaluate parsed specifications into library objects.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use midshift::measures::{shift_from_measure, BergerMeasure, Density};
use midshift::scalar::Scalar;
use midshift::shift_model::{
    backstep, quotient_shift, scale, schur_power, schur_product, subshift, ShiftKind,
    WeightedShift,
};
use midshift::transforms::{aluthge, aluthge_q, inverse_aluthge};

use crate::ast::{DensityLit, Expr, MeasureLit, ShiftSpec};
use crate::parser::ParseError;

/// Errors from parsing, validation, or evaluation; all map to usage/domain
/// failures (exit status 2).
#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Domain(String),
    Core(midshift::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<midshift::Error> for CliError {
    fn from(e: midshift::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Evaluate an expression at an optional index value.
pub fn eval_expr(e: &Expr, n: Option<&Scalar>) -> CliResult<Scalar> {
    match e {
        Expr::Var => n
            .cloned()
            .ok_or_else(|| CliError::Domain("variable n is not allowed here".into())),
        Expr::Int(v) => Ok(Scalar::from_big(BigRational::from_integer(v.clone()))),
        Expr::Add(a, b) => Ok(eval_expr(a, n)?.add(&eval_expr(b, n)?)),
        Expr::Sub(a, b) => Ok(eval_expr(a, n)?.sub(&eval_expr(b, n)?)),
        Expr::Mul(a, b) => Ok(eval_expr(a, n)?.mul(&eval_expr(b, n)?)),
        Expr::Div(a, b) => {
            let den = eval_expr(b, n)?;
            if den.is_zero() {
                return Err(CliError::Domain("division by zero".into()));
            }
            Ok(eval_expr(a, n)?.div(&den))
        }
        Expr::Pow(a, b) => {
            let exp = eval_expr(b, n)?;
            let exp = exp.try_rational().ok_or_else(|| {
                CliError::Domain("exponents must evaluate to rationals".into())
            })?;
            Ok(eval_expr(a, n)?.pow_rational(&exp)?)
        }
        Expr::Neg(a) => Ok(eval_expr(a, n)?.neg()),
        Expr::Sqrt(a) => Ok(eval_expr(a, n)?.sqrt()?),
    }
}

pub fn eval_const(e: &Expr) -> CliResult<Scalar> {
    eval_expr(e, None)
}

fn build_measure(lit: &MeasureLit) -> CliResult<BergerMeasure> {
    let mut atoms = Vec::new();
    for (t, m) in &lit.atoms {
        atoms.push((eval_const(t)?, eval_const(m)?));
    }
    let density = match &lit.density {
        None => None,
        Some(DensityLit::Uniform(c)) => Some(Density::Uniform {
            mass: eval_const(c)?,
        }),
        Some(DensityLit::AglerFamily(s)) => Some(Density::AglerFamily { s: eval_const(s)? }),
    };
    Ok(BergerMeasure::new(atoms, density)?)
}

/// Build the weighted shift denoted by a specification.
pub fn build_shift(spec: &ShiftSpec) -> CliResult<WeightedShift> {
    match spec {
        ShiftSpec::Agler(k) => Ok(WeightedShift::agler(*k)?),
        ShiftSpec::Bergman => Ok(WeightedShift::bergman()),
        ShiftSpec::Dirichlet => Ok(WeightedShift::dirichlet()),
        ShiftSpec::Geom2 => Ok(WeightedShift::geom2()),
        ShiftSpec::Unweighted => Ok(WeightedShift::unweighted()),
        ShiftSpec::Constant(c) => Ok(WeightedShift::constant(eval_const(c)?)?),
        ShiftSpec::Weights(expr) => {
            let rule = expr.clone();
            let label = format!("weights: {expr}");
            Ok(WeightedShift::new(
                label,
                ShiftKind::ClosedForm,
                None,
                false,
                move |n| {
                    eval_expr(&rule, Some(&Scalar::from_int(n as i64))).map_err(|e| {
                        midshift::Error::Domain(format!("weight rule failed at {n}: {e}"))
                    })
                },
            ))
        }
        ShiftSpec::Measure(lit) => Ok(shift_from_measure(&build_measure(lit)?)?),
        ShiftSpec::At(child) => Ok(aluthge(&build_shift(child)?)),
        ShiftSpec::Atq(q, child) => {
            Ok(aluthge_q(&build_shift(child)?, &eval_const(q)?)?)
        }
        ShiftSpec::Atinv(alpha0, child) => {
            let target = build_shift(child)?;
            let a0 = alpha0.as_ref().map(eval_const).transpose()?;
            Ok(inverse_aluthge(&target, a0)?.shift)
        }
        ShiftSpec::Quotient(spacing, child) => {
            Ok(quotient_shift(&build_shift(child)?, *spacing as usize)?)
        }
        ShiftSpec::Subshift(p, k, child) => {
            Ok(subshift(&build_shift(child)?, *p as usize, *k as usize)?)
        }
        ShiftSpec::Schur(a, b) => Ok(schur_product(&build_shift(a)?, &build_shift(b)?)),
        ShiftSpec::Power(p, child) => {
            Ok(schur_power(&build_shift(child)?, &eval_const(p)?)?)
        }
        ShiftSpec::Scale(c, child) => Ok(scale(&build_shift(child)?, &eval_const(c)?)?),
        ShiftSpec::Backstep(w, child) => {
            Ok(backstep(&build_shift(child)?, &eval_const(w)?)?)
        }
        ShiftSpec::Stampfli(a, b, c) => Ok(midshift::completion::stampfli_completion(
            &eval_const(a)?,
            &eval_const(b)?,
            &eval_const(c)?,
        )?
        .shift),
    }
}

/// Wrap a shift so every weight is evaluated in floating point.
pub fn force_float(shift: &WeightedShift) -> WeightedShift {
    let parent = shift.clone();
    WeightedShift::new(
        format!("float({})", shift.label()),
        ShiftKind::Derived {
            op: "float".into(),
            parents: vec![shift.clone()],
        },
        shift
            .declared_limit()
            .map(|l| Scalar::from_f64(l.to_f64())),
        true,
        move |n| Ok(Scalar::from_f64(parent.weight_f64(n)?)),
    )
}

/// Parse a scalar flag value: either an expression in the shift-spec language
/// (`1/2`, `sqrt(1/2)`) or a decimal literal (`0.37`), converted exactly.
pub fn parse_scalar_flag(text: &str) -> CliResult<Scalar> {
    let trimmed = text.trim();
    if let Some(dot) = trimmed.find('.') {
        let (int_part, frac_part) = trimmed.split_at(dot);
        let frac = &frac_part[1..];
        if !frac.is_empty()
            && frac.chars().all(|c| c.is_ascii_digit())
            && (int_part.is_empty()
                || int_part == "-"
                || int_part.chars().all(|c| c.is_ascii_digit())
                || (int_part.starts_with('-')
                    && int_part[1..].chars().all(|c| c.is_ascii_digit())))
        {
            let digits = format!(
                "{}{}",
                if int_part == "-" || int_part.is_empty() {
                    "0"
                } else {
                    int_part
                },
                frac
            );
            let num: BigRational = digits
                .parse::<num_bigint::BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| CliError::Domain(format!("bad decimal literal `{text}`")))?;
            let den = BigRational::from_integer(num_bigint::BigInt::from(10u32).pow(
                frac.len() as u32,
            ));
            let mut v = num / den;
            if int_part.starts_with('-') && int_part != "-0" {
                v = -v.abs();
            }
            return Ok(Scalar::from_big(v));
        }
        return Err(CliError::Domain(format!("bad decimal literal `{text}`")));
    }
    let expr = crate::parser::parse_const_expr(trimmed)?;
    eval_const(&expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_shift_spec;

    #[test]
    fn weight_rule_matches_catalog() {
        let spec = parse_shift_spec("weights: sqrt((n+1)/(n+2))").unwrap();
        let s = build_shift(&spec).unwrap();
        let b = WeightedShift::bergman();
        for n in 0..20 {
            assert_eq!(s.weight_sq(n).unwrap(), b.weight_sq(n).unwrap());
        }
    }

    #[test]
    fn measure_spec_builds() {
        let spec =
            parse_shift_spec("measure: atoms[(1,1/2)] + density[uniform(1/2)]").unwrap();
        let s = build_shift(&spec).unwrap();
        let q = quotient_shift(&WeightedShift::bergman(), 1).unwrap();
        for n in 0..20 {
            assert_eq!(s.weight_sq(n).unwrap(), q.weight_sq(n).unwrap());
        }
    }

    #[test]
    fn scalar_flags_parse() {
        assert_eq!(
            parse_scalar_flag("0.37").unwrap(),
            Scalar::from_ratio(37, 100)
        );
        assert_eq!(
            parse_scalar_flag("37/100").unwrap(),
            Scalar::from_ratio(37, 100)
        );
        let root = parse_scalar_flag("sqrt(1/2)").unwrap();
        assert_eq!(root.pow_int(2), Scalar::from_ratio(1, 2));
        assert!(parse_scalar_flag("0.").is_err());
        assert!(parse_scalar_flag("n+1").is_err());
    }

    #[test]
    fn rejects_zero_division_and_bad_exponents() {
        let spec = parse_shift_spec("constant(1/(2-2))").unwrap();
        assert!(build_shift(&spec).is_err());
        let spec = parse_shift_spec("constant(2^sqrt(2))").unwrap();
        assert!(build_shift(&spec).is_err());
    }
}
