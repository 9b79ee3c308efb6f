use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::{parse_rational, Rational, Surd};
use crate::{Error, Result};

#[derive(Debug)]
enum Kind {
    Int(BigInt),
    Rat(Rational),
    Add(RealExpr, RealExpr),
    Sub(RealExpr, RealExpr),
    Mul(RealExpr, RealExpr),
    Div(RealExpr, RealExpr),
    Neg(RealExpr),
    Sqrt(RealExpr),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    surd: Option<Surd>,
}

/// Real-valued expression over integer and rational literals with
/// `+ - * /` and square roots. Subtrees that are quadratic surds are folded
/// symbolically; everything else is evaluated by interval arithmetic.
#[derive(Debug, Clone)]
pub struct RealExpr(Arc<Node>);

impl RealExpr {
    fn mk(kind: Kind, surd: Option<Surd>) -> Self {
        RealExpr(Arc::new(Node { kind, surd }))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        let s = Surd::rational(Rational::from_integer(n.clone()));
        Self::mk(Kind::Int(n), Some(s))
    }

    pub fn rational(r: Rational) -> Self {
        if r.denom().is_one() {
            return Self::int(r.numer().clone());
        }
        Self::mk(Kind::Rat(r.clone()), Some(Surd::rational(r)))
    }

    /// Expression tree for `a + b*sqrt(m)`.
    pub fn from_surd(s: &Surd) -> Self {
        let (a, b, m) = s.parts();
        if s.is_rational() {
            return Self::rational(a.clone());
        }
        let root = Self::int(m.clone()).sqrt();
        let t = if b.is_one() { root } else { Self::rational(b.clone()) * root };
        let e = if a.is_zero() { t } else { Self::rational(a.clone()) + t };
        // keep the canonical surd on the root node
        Self::mk(clone_kind(&e.0.kind), Some(s.clone()))
    }

    pub fn sqrt(&self) -> Self {
        let s = self.0.surd.as_ref().and_then(|s| s.sqrt());
        Self::mk(Kind::Sqrt(self.clone()), s)
    }

    pub fn surd(&self) -> Option<&Surd> {
        self.0.surd.as_ref()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.surd().and_then(|s| s.as_rational())
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Enclosing interval of width at most `2^-prec`.
    pub fn enclose(&self, prec: u32) -> Result<Interval> {
        let mut guard = 32u32;
        let cap = prec.saturating_mul(16).max(4096);
        loop {
            let wp = prec + guard;
            if let Some(iv) = self.eval_at(wp)? {
                if iv.width_log2_le(guard) {
                    return Ok(iv.round_to(prec));
                }
            }
            if wp >= cap {
                return Err(Error::PrecisionExhausted(wp));
            }
            guard = guard.saturating_mul(2);
        }
    }

    /// Ok(None) means the precision was too low to separate a divisor from 0.
    fn eval_at(&self, p: u32) -> Result<Option<Interval>> {
        if let Some(s) = &self.0.surd {
            return Ok(Some(eval_surd(s, p)));
        }
        let r = match &self.0.kind {
            Kind::Int(n) => Interval::point_rational(&Rational::from_integer(n.clone()), p),
            Kind::Rat(r) => Interval::point_rational(r, p),
            Kind::Add(a, b) => match (a.eval_at(p)?, b.eval_at(p)?) {
                (Some(x), Some(y)) => x.add(&y),
                _ => return Ok(None),
            },
            Kind::Sub(a, b) => match (a.eval_at(p)?, b.eval_at(p)?) {
                (Some(x), Some(y)) => x.sub(&y),
                _ => return Ok(None),
            },
            Kind::Mul(a, b) => match (a.eval_at(p)?, b.eval_at(p)?) {
                (Some(x), Some(y)) => x.mul(&y),
                _ => return Ok(None),
            },
            Kind::Div(a, b) => match (a.eval_at(p)?, b.eval_at(p)?) {
                (Some(x), Some(y)) => match x.div(&y) {
                    Some(z) => z,
                    None => return Ok(None),
                },
                _ => return Ok(None),
            },
            Kind::Neg(a) => match a.eval_at(p)? {
                Some(x) => x.neg(),
                None => return Ok(None),
            },
            Kind::Sqrt(a) => match a.eval_at(p)? {
                Some(x) => match x.sqrt() {
                    Some(z) => z,
                    None => return Err(Error::DomainViolation("sqrt of a negative value".into())),
                },
                None => return Ok(None),
            },
        };
        Ok(Some(r))
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(s) = &self.0.surd {
            return s.to_f64();
        }
        self.enclose(64).map(|iv| iv.mid_f64()).unwrap_or(f64::NAN)
    }

    /// Parses prefix notation such as `(/ 2 (sqrt 3))`; bare rationals and
    /// decimals are accepted as literals.
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { s: src.as_bytes(), i: 0 };
        let e = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::parse(p.i, "trailing input"));
        }
        Ok(e)
    }
}

fn clone_kind(k: &Kind) -> Kind {
    match k {
        Kind::Int(n) => Kind::Int(n.clone()),
        Kind::Rat(r) => Kind::Rat(r.clone()),
        Kind::Add(a, b) => Kind::Add(a.clone(), b.clone()),
        Kind::Sub(a, b) => Kind::Sub(a.clone(), b.clone()),
        Kind::Mul(a, b) => Kind::Mul(a.clone(), b.clone()),
        Kind::Div(a, b) => Kind::Div(a.clone(), b.clone()),
        Kind::Neg(a) => Kind::Neg(a.clone()),
        Kind::Sqrt(a) => Kind::Sqrt(a.clone()),
    }
}

fn eval_surd(s: &Surd, p: u32) -> Interval {
    let (a, b, m) = s.parts();
    let ia = Interval::point_rational(a, p);
    if s.is_rational() {
        return ia;
    }
    let root = Interval::point_rational(&Rational::from_integer(m.clone()), p).sqrt().expect("radicand is positive");
    ia.add(&Interval::point_rational(b, p).mul(&root))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $kind:ident, $f:ident) => {
        impl $tr<RealExpr> for RealExpr {
            type Output = RealExpr;
            fn $m(self, o: RealExpr) -> RealExpr {
                let s = match (&self.0.surd, &o.0.surd) {
                    (Some(x), Some(y)) => x.$f(y),
                    _ => None,
                };
                RealExpr::mk(Kind::$kind(self, o), s)
            }
        }
        impl<'a> $tr<&'a RealExpr> for &'a RealExpr {
            type Output = RealExpr;
            fn $m(self, o: &'a RealExpr) -> RealExpr {
                self.clone().$m(o.clone())
            }
        }
    };
}

binop!(Add, add, Add, add);
binop!(Sub, sub, Sub, sub);
binop!(Mul, mul, Mul, mul);
binop!(Div, div, Div, div);

impl Neg for RealExpr {
    type Output = RealExpr;
    fn neg(self) -> RealExpr {
        let s = self.0.surd.as_ref().map(|s| s.neg());
        RealExpr::mk(Kind::Neg(self), s)
    }
}

impl Neg for &RealExpr {
    type Output = RealExpr;
    fn neg(self) -> RealExpr {
        -(self.clone())
    }
}

impl From<Rational> for RealExpr {
    fn from(r: Rational) -> Self {
        RealExpr::rational(r)
    }
}

impl From<&Rational> for RealExpr {
    fn from(r: &Rational) -> Self {
        RealExpr::rational(r.clone())
    }
}

impl From<i64> for RealExpr {
    fn from(n: i64) -> Self {
        RealExpr::int(n)
    }
}

impl From<&BigInt> for RealExpr {
    fn from(n: &BigInt) -> Self {
        RealExpr::int(n.clone())
    }
}

impl From<&Surd> for RealExpr {
    fn from(s: &Surd) -> Self {
        RealExpr::from_surd(s)
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Int(n) => write!(f, "{n}"),
            Kind::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Kind::Add(a, b) => write!(f, "(+ {a} {b})"),
            Kind::Sub(a, b) => write!(f, "(- {a} {b})"),
            Kind::Mul(a, b) => write!(f, "(* {a} {b})"),
            Kind::Div(a, b) => write!(f, "(/ {a} {b})"),
            Kind::Neg(a) => write!(f, "(- {a})"),
            Kind::Sqrt(a) => write!(f, "(sqrt {a})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn token(&mut self) -> (usize, &str) {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && !self.s[self.i].is_ascii_whitespace() && self.s[self.i] != b'(' && self.s[self.i] != b')' {
            self.i += 1;
        }
        (st, std::str::from_utf8(&self.s[st..self.i]).unwrap_or(""))
    }

    fn expr(&mut self) -> Result<RealExpr> {
        self.ws();
        if self.i >= self.s.len() {
            return Err(Error::parse(self.i, "unexpected end of input"));
        }
        if self.s[self.i] == b')' {
            return Err(Error::parse(self.i, "unexpected ')'"));
        }
        if self.s[self.i] != b'(' {
            let (pos, tok) = self.token();
            if tok.is_empty() {
                return Err(Error::parse(pos, "expected a literal"));
            }
            return parse_rational(tok).map(RealExpr::rational).map_err(|_| Error::parse(pos, format!("bad literal {tok:?}")));
        }
        let open = self.i;
        self.i += 1;
        let (opos, op) = self.token();
        let op = op.to_string();
        let mut args = Vec::new();
        loop {
            self.ws();
            if self.i >= self.s.len() {
                return Err(Error::parse(open, "unclosed '('"));
            }
            if self.s[self.i] == b')' {
                self.i += 1;
                break;
            }
            args.push(self.expr()?);
        }
        let arity = |lo: usize, hi: usize| {
            if args.len() < lo || args.len() > hi {
                Err(Error::parse(opos, format!("wrong number of arguments for {op:?}")))
            } else {
                Ok(())
            }
        };
        match op.as_str() {
            "+" | "*" => {
                arity(2, usize::MAX)?;
                let mut it = args.into_iter();
                let first = it.next().unwrap();
                Ok(it.fold(first, |acc, e| if op == "+" { acc + e } else { acc * e }))
            }
            "-" => {
                arity(1, 2)?;
                let mut it = args.into_iter();
                let a = it.next().unwrap();
                Ok(match it.next() {
                    Some(b) => a - b,
                    None => -a,
                })
            }
            "/" => {
                arity(2, 2)?;
                let mut it = args.into_iter();
                let a = it.next().unwrap();
                let b = it.next().unwrap();
                if b.as_rational().is_some_and(|r| r.is_zero()) {
                    return Err(Error::parse(opos, "division by literal zero"));
                }
                Ok(a / b)
            }
            "sqrt" => {
                arity(1, 1)?;
                let a = args.pop().unwrap();
                if a.as_rational().is_some_and(|r| r.is_negative()) {
                    return Err(Error::parse(opos, "sqrt of a negative literal"));
                }
                Ok(a.sqrt())
            }
            _ => Err(Error::parse(opos, format!("unknown operator {op:?}"))),
        }
    }
}
