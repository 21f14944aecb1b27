//! Abstract syntax for the shift-specification mini-language.
//!
//! A spec is a catalog shift, a closed-form weight rule `weights: <expr>`,
//! a measure literal `measure: atoms[(t,m),...] + density[...]`, or a
//! transform applied functionally, e.g. `at(quotient(1, bergman))`.
//! Numeric arguments are constant expressions over rational literals
//! (integers combined with `+ - * / ^` and `sqrt`); no floating literals
//! exist in the grammar, so everything reachable from the surface syntax
//! is exact.

use std::fmt;

use num_bigint::BigInt;

/// Expression over the index variable `n` and rational constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var,
    Int(BigInt),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Int(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.contains_var() || b.contains_var(),
            Expr::Neg(a) | Expr::Sqrt(a) => a.contains_var(),
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Var | Expr::Int(_) | Expr::Sqrt(..) => 5,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if prec(child) < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "n"),
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Add(a, b) => {
                fmt_child(f, a, 1)?;
                write!(f, " + ")?;
                fmt_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                fmt_child(f, a, 1)?;
                write!(f, " - ")?;
                fmt_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                fmt_child(f, a, 2)?;
                write!(f, "*")?;
                fmt_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                fmt_child(f, a, 2)?;
                write!(f, "/")?;
                fmt_child(f, b, 3)
            }
            Expr::Pow(a, b) => {
                fmt_child(f, a, 5)?;
                write!(f, "^")?;
                fmt_child(f, b, 5)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(f, a, 3)
            }
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

/// Measure literal: atoms plus an optional catalogued density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureLit {
    pub atoms: Vec<(Expr, Expr)>,
    pub density: Option<DensityLit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityLit {
    Uniform(Expr),
    AglerFamily(Expr),
}

impl fmt::Display for MeasureLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.atoms.is_empty() {
            write!(f, "atoms[")?;
            for (i, (t, m)) in self.atoms.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "({t},{m})")?;
            }
            write!(f, "]")?;
            first = false;
        }
        if let Some(d) = &self.density {
            if !first {
                write!(f, " + ")?;
            }
            match d {
                DensityLit::Uniform(c) => write!(f, "density[uniform({c})]")?,
                DensityLit::AglerFamily(s) => write!(f, "density[agler_family({s})]")?,
            }
        }
        Ok(())
    }
}

/// A shift specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSpec {
    Agler(u64),
    Bergman,
    Dirichlet,
    Geom2,
    Unweighted,
    Constant(Expr),
    Weights(Expr),
    Measure(MeasureLit),
    At(Box<ShiftSpec>),
    Atq(Expr, Box<ShiftSpec>),
    Atinv(Option<Expr>, Box<ShiftSpec>),
    Quotient(u64, Box<ShiftSpec>),
    Subshift(u64, u64, Box<ShiftSpec>),
    Schur(Box<ShiftSpec>, Box<ShiftSpec>),
    Power(Expr, Box<ShiftSpec>),
    Scale(Expr, Box<ShiftSpec>),
    Backstep(Expr, Box<ShiftSpec>),
    Stampfli(Expr, Expr, Expr),
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSpec::Agler(k) => write!(f, "agler({k})"),
            ShiftSpec::Bergman => write!(f, "bergman"),
            ShiftSpec::Dirichlet => write!(f, "dirichlet"),
            ShiftSpec::Geom2 => write!(f, "geom2"),
            ShiftSpec::Unweighted => write!(f, "unweighted"),
            ShiftSpec::Constant(c) => write!(f, "constant({c})"),
            ShiftSpec::Weights(e) => write!(f, "weights: {e}"),
            ShiftSpec::Measure(m) => write!(f, "measure: {m}"),
            ShiftSpec::At(s) => write!(f, "at({s})"),
            ShiftSpec::Atq(q, s) => write!(f, "atq({q}, {s})"),
            ShiftSpec::Atinv(None, s) => write!(f, "atinv({s})"),
            ShiftSpec::Atinv(Some(a), s) => write!(f, "atinv({a}, {s})"),
            ShiftSpec::Quotient(n, s) => write!(f, "quotient({n}, {s})"),
            ShiftSpec::Subshift(p, k, s) => write!(f, "subshift({p}, {k}, {s})"),
            ShiftSpec::Schur(a, b) => write!(f, "schur({a}, {b})"),
            ShiftSpec::Power(p, s) => write!(f, "power({p}, {s})"),
            ShiftSpec::Scale(c, s) => write!(f, "scale({c}, {s})"),
            ShiftSpec::Backstep(w, s) => write!(f, "backstep({w}, {s})"),
            ShiftSpec::Stampfli(a, b, c) => write!(f, "stampfli({a}, {b}, {c})"),
        }
    }
}
