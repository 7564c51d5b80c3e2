use super::elem::{CoreRing, Elem};
use super::poly::{BPoly, UPoly};
use super::scalar::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("unexpected character '{0}' at position {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("element '{0}' does not lie in {1}")]
    NotInCore(String, String),
    #[error("division by zero in element expression")]
    DivisionByZero,
}

/// Parse a canonical element string (e.g. "-3", "1/2", "x^2 - y", "(x+1)/(x-1)")
/// into an element of the given core ring.
pub fn parse_elem(input: &str, core: &CoreRing) -> Result<Elem, ParseError> {
    let field = match core {
        CoreRing::Integers | CoreRing::IntegersLocalized { .. } | CoreRing::Rationals => {
            FieldSpec::Rationals
        }
        CoreRing::PrimeField { p } => FieldSpec::PrimeField { p: *p },
        CoreRing::UniPoly { coeff }
        | CoreRing::UniPolyLocalized { coeff, .. }
        | CoreRing::UniFunctionField { coeff }
        | CoreRing::BiPoly { coeff } => coeff.clone(),
    };
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        field,
    };
    let frac = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(ParseError::Unexpected(p.chars[p.pos], p.pos));
    }
    coerce(frac, core).ok_or_else(|| ParseError::NotInCore(input.to_string(), core.to_string()))
}

/// A fraction of bivariate polynomials: the universal parse target.
struct Frac {
    num: BPoly,
    den: BPoly,
}

impl Frac {
    fn from_poly(p: BPoly) -> Frac {
        let field = p.field.clone();
        Frac {
            num: p,
            den: BPoly::constant(Scalar::one(&field)),
        }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn div(&self, o: &Frac) -> Result<Frac, ParseError> {
        if o.num.is_zero() {
            return Err(ParseError::DivisionByZero);
        }
        Ok(Frac {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }

    fn pow(&self, e: u32) -> Frac {
        let field = self.num.field.clone();
        let mut out = Frac::from_poly(BPoly::constant(Scalar::one(&field)));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    field: FieldSpec,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.nat()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Frac, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(c) => Err(ParseError::Unexpected(c, self.pos)),
                    None => Err(ParseError::Eof),
                }
            }
            Some('x') => {
                self.pos += 1;
                Ok(Frac::from_poly(BPoly::var_x(&self.field)))
            }
            Some('y') => {
                self.pos += 1;
                Ok(Frac::from_poly(BPoly::var_y(&self.field)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat_big()?;
                Ok(Frac::from_poly(BPoly::constant(Scalar::from_int(
                    &self.field,
                    &n,
                ))))
            }
            Some(c) => Err(ParseError::Unexpected(c, self.pos)),
            None => Err(ParseError::Eof),
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let n = self.nat_big()?;
        n.to_string().parse().map_err(|_| ParseError::Eof)
    }

    fn nat_big(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.chars.get(self.pos) {
                Some(c) => Err(ParseError::Unexpected(*c, self.pos)),
                None => Err(ParseError::Eof),
            };
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }
}

fn coerce(frac: Frac, core: &CoreRing) -> Option<Elem> {
    let num = frac.num;
    let den = frac.den;
    match core {
        CoreRing::Integers => {
            let n = constant_rational(&num)?;
            let d = constant_rational(&den)?;
            let q = n / d;
            if q.denom().is_one() {
                Some(Elem::Int(q.to_integer()))
            } else {
                None
            }
        }
        CoreRing::Rationals | CoreRing::IntegersLocalized { .. } => {
            let n = constant_rational(&num)?;
            let d = constant_rational(&den)?;
            let e = Elem::Rat(n / d);
            core.validate(&e).then_some(e)
        }
        CoreRing::PrimeField { p } => {
            let n = constant_fp(&num, *p)?;
            let d = constant_fp(&den, *p)?;
            if d == 0 {
                return None;
            }
            let inv = Scalar::Fp { p: *p, a: d }.inv();
            match (Scalar::Fp { p: *p, a: n }).mul(&inv) {
                Scalar::Fp { p, a } => Some(Elem::Fp { p, a }),
                _ => unreachable!(),
            }
        }
        CoreRing::UniPoly { .. } => {
            let (nv, n) = num_as_uni(&num)?;
            let d = constant_scalar(&den)?;
            if nv == 'y' {
                return None;
            }
            Some(Elem::Uni(n.scale(&d.inv())))
        }
        CoreRing::UniPolyLocalized { .. } | CoreRing::UniFunctionField { .. } => {
            let (nv, n) = num_as_uni(&num)?;
            let (dv, d) = num_as_uni(&den)?;
            if nv == 'y' || dv == 'y' || d.is_zero() {
                return None;
            }
            let e = normalize_frac_elem(n, d);
            core.validate(&e).then_some(e)
        }
        CoreRing::BiPoly { .. } => {
            let d = constant_scalar(&den)?;
            Some(Elem::Bi(num.scale(&d.inv())))
        }
    }
}

fn normalize_frac_elem(num: UPoly, den: UPoly) -> Elem {
    let g = num.gcd(&den);
    let num = num.divrem(&g).0;
    let den = den.divrem(&g).0;
    let lead = den.leading().expect("nonzero").clone();
    let inv = lead.inv();
    Elem::UniFrac {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

fn constant_scalar(p: &BPoly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero(&p.field));
    }
    if !p.is_constant() {
        return None;
    }
    p.terms.get(&(0, 0)).cloned()
}

fn constant_rational(p: &BPoly) -> Option<BigRational> {
    match constant_scalar(p)? {
        Scalar::Q(q) => Some(q),
        _ => None,
    }
}

fn constant_fp(p: &BPoly, modulus: u64) -> Option<u64> {
    match constant_scalar(p)? {
        Scalar::Fp { p, a } if p == modulus => Some(a),
        _ => None,
    }
}

fn num_as_uni(p: &BPoly) -> Option<(char, UPoly)> {
    if p.is_zero() {
        return Some(('x', UPoly::zero(&p.field)));
    }
    p.as_univariate()
}
