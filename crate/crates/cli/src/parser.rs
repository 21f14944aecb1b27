//! Recursive-descent parser for the shift-specification language.
//!
//! Errors carry the byte position and the set of tokens that would have
//! been acceptable there.

use std::fmt;

use num_bigint::BigInt;

use crate::ast::{DensityLit, Expr, MeasureLit, ShiftSpec};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub position: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: found {}, expected {}",
            self.position,
            self.found,
            self.expected.join(" | ")
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBracket, i));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, i));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits parse");
                toks.push((Tok::Int(v), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    found: format!("character `{c}`"),
                    expected: vec!["a token".into()],
                })
            }
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.here(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, want: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*' | '/') factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := unary ('^' factor)?   (right associative)
    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) if name == "n" => {
                self.bump();
                Ok(Expr::Var)
            }
            Tok::Ident(name) if name == "sqrt" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Sqrt(Box::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.fail(&["integer", "`n`", "`sqrt`", "`(`", "`-`"]),
        }
    }

    /// A nonnegative integer argument (for arities like agler(k)).
    fn int_arg(&mut self, what: &str) -> Result<u64, ParseError> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                u64::try_from(v).map_err(|_| ParseError {
                    position: pos,
                    found: "oversized integer".into(),
                    expected: vec![what.to_string()],
                })
            }
            _ => self.fail(&[what]),
        }
    }

    fn measure_lit(&mut self) -> Result<MeasureLit, ParseError> {
        let mut atoms = Vec::new();
        let mut density = None;
        let mut saw_part = false;
        loop {
            match self.peek().clone() {
                Tok::Ident(ref w) if w == "atoms" => {
                    self.bump();
                    self.expect(Tok::LBracket, "`[`")?;
                    loop {
                        self.expect(Tok::LParen, "`(`")?;
                        let t = self.expr()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let m = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        atoms.push((t, m));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::RBracket, "`]`")?;
                    saw_part = true;
                }
                Tok::Ident(ref w) if w == "density" => {
                    self.bump();
                    self.expect(Tok::LBracket, "`[`")?;
                    let kind = match self.peek().clone() {
                        Tok::Ident(k) if k == "uniform" || k == "agler_family" => {
                            self.bump();
                            k
                        }
                        _ => return self.fail(&["`uniform`", "`agler_family`"]),
                    };
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::RBracket, "`]`")?;
                    density = Some(if kind == "uniform" {
                        DensityLit::Uniform(arg)
                    } else {
                        DensityLit::AglerFamily(arg)
                    });
                    saw_part = true;
                }
                _ => {
                    if saw_part {
                        return self.fail(&["`atoms`", "`density`"]);
                    }
                    return self.fail(&["`atoms`", "`density`"]);
                }
            }
            if *self.peek() == Tok::Plus {
                self.bump();
                continue;
            }
            break;
        }
        Ok(MeasureLit { atoms, density })
    }

    fn spec(&mut self) -> Result<ShiftSpec, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(name) => name,
            _ => {
                return self.fail(&[
                    "catalog name", "transform", "`weights:`", "`measure:`",
                ])
            }
        };
        // Keyword-prefixed forms.
        if name == "weights" && *self.peek_at(1) == Tok::Colon {
            self.bump();
            self.bump();
            return Ok(ShiftSpec::Weights(self.expr()?));
        }
        if name == "measure" && *self.peek_at(1) == Tok::Colon {
            self.bump();
            self.bump();
            return Ok(ShiftSpec::Measure(self.measure_lit()?));
        }
        let name_pos = self.here();
        self.bump();
        match name.as_str() {
            "bergman" => Ok(ShiftSpec::Bergman),
            "dirichlet" => Ok(ShiftSpec::Dirichlet),
            "geom2" => Ok(ShiftSpec::Geom2),
            "unweighted" => Ok(ShiftSpec::Unweighted),
            "agler" => {
                self.expect(Tok::LParen, "`(`")?;
                let k_pos = self.here();
                let k = self.int_arg("index k")?;
                self.expect(Tok::RParen, "`)`")?;
                if k < 2 {
                    return Err(ParseError {
                        position: k_pos,
                        found: format!("agler({k})"),
                        expected: vec!["k >= 2".into()],
                    });
                }
                Ok(ShiftSpec::Agler(k))
            }
            "constant" => {
                self.expect(Tok::LParen, "`(`")?;
                let c = self.const_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Constant(c))
            }
            "at" => {
                self.expect(Tok::LParen, "`(`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::At(Box::new(child)))
            }
            "atq" => {
                self.expect(Tok::LParen, "`(`")?;
                let q = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Atq(q, Box::new(child)))
            }
            "atinv" => {
                self.expect(Tok::LParen, "`(`")?;
                // Either atinv(child) or atinv(alpha0, child): a leading
                // const expression is distinguished by the comma after it.
                let checkpoint = self.pos;
                if let Ok(alpha0) = self.const_expr() {
                    if *self.peek() == Tok::Comma {
                        self.bump();
                        let child = self.spec()?;
                        self.expect(Tok::RParen, "`)`")?;
                        return Ok(ShiftSpec::Atinv(Some(alpha0), Box::new(child)));
                    }
                }
                self.pos = checkpoint;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Atinv(None, Box::new(child)))
            }
            "quotient" => {
                self.expect(Tok::LParen, "`(`")?;
                let spacing_pos = self.here();
                let spacing = self.int_arg("spacing")?;
                if spacing == 0 {
                    return Err(ParseError {
                        position: spacing_pos,
                        found: "0".into(),
                        expected: vec!["spacing >= 1".into()],
                    });
                }
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Quotient(spacing, Box::new(child)))
            }
            "subshift" => {
                self.expect(Tok::LParen, "`(`")?;
                let stride_pos = self.here();
                let stride = self.int_arg("stride")?;
                if stride == 0 {
                    return Err(ParseError {
                        position: stride_pos,
                        found: "0".into(),
                        expected: vec!["stride >= 1".into()],
                    });
                }
                self.expect(Tok::Comma, "`,`")?;
                let offset = self.int_arg("offset")?;
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Subshift(stride, offset, Box::new(child)))
            }
            "schur" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.spec()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Schur(Box::new(a), Box::new(b)))
            }
            "power" => {
                self.expect(Tok::LParen, "`(`")?;
                let p = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Power(p, Box::new(child)))
            }
            "scale" => {
                self.expect(Tok::LParen, "`(`")?;
                let c = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Scale(c, Box::new(child)))
            }
            "backstep" => {
                self.expect(Tok::LParen, "`(`")?;
                let w = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let child = self.spec()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Backstep(w, Box::new(child)))
            }
            "stampfli" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.const_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let c = self.const_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ShiftSpec::Stampfli(a, b, c))
            }
            other => Err(ParseError {
                position: name_pos,
                found: format!("identifier `{other}`"),
                expected: vec![
                    "agler".into(),
                    "bergman".into(),
                    "dirichlet".into(),
                    "geom2".into(),
                    "unweighted".into(),
                    "constant".into(),
                    "weights:".into(),
                    "measure:".into(),
                    "at".into(),
                    "atq".into(),
                    "atinv".into(),
                    "quotient".into(),
                    "subshift".into(),
                    "schur".into(),
                    "power".into(),
                    "scale".into(),
                    "backstep".into(),
                    "stampfli".into(),
                ],
            }),
        }
    }

    /// Constant expression: no occurrence of the index variable.
    fn const_expr(&mut self) -> Result<Expr, ParseError> {
        let pos = self.here();
        let e = self.expr()?;
        if e.contains_var() {
            return Err(ParseError {
                position: pos,
                found: "expression over n".into(),
                expected: vec!["constant expression".into()],
            });
        }
        Ok(e)
    }
}

/// Parse a complete shift specification.
pub fn parse_shift_spec(text: &str) -> Result<ShiftSpec, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let spec = p.spec()?;
    if *p.peek() != Tok::End {
        return p.fail(&["end of input"]);
    }
    Ok(spec)
}

/// Parse a standalone constant expression (used for flag values).
pub fn parse_const_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.const_expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["end of input"]);
    }
    Ok(e)
}
