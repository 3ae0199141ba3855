//! Graded polynomial rings and sparse polynomials.
//!
//! Terms are kept sorted in descending order for the weighted graded reverse
//! lexicographic order of the owning [`BaseRing`]. A [`Poly`] does not carry
//! its ring; every arithmetic operation goes through the ring, which supplies
//! the coefficient field and the term order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Coef, Field};

/// Exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, weights: &[u32]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

/// Weighted grevlex comparison: weighted degree first, then the smaller
/// exponent in the last differing variable wins.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial, weights: &[u32]) -> Ordering {
    let da = a.degree(weights);
    let db = b.degree(weights);
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.0.len()).rev() {
        if a.0[i] != b.0[i] {
            return b.0[i].cmp(&a.0[i]);
        }
    }
    Ordering::Equal
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    pub(crate) terms: Vec<(Monomial, Coef)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&(Monomial, Coef)> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Variables occurring with positive exponent, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen: Vec<usize> = Vec::new();
        for (m, _) in &self.terms {
            for i in m.support() {
                if !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    pub fn max_exponent(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0)
    }

    /// Gcd of all term monomials.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.gcd(m)))
    }
}

/// A graded polynomial ring `k[x_1..x_n]` with positive integer weights.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BaseRing {
    vars: Vec<String>,
    weights: Vec<u32>,
    field: Field,
}

impl BaseRing {
    pub fn new(vars: Vec<String>, weights: Vec<u32>, field: Field) -> Result<BaseRing> {
        if vars.len() != weights.len() {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} weights",
                vars.len(),
                weights.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("variable `{v}` declared twice")));
            }
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidRing(format!("variable `{}` has weight 0", vars[i])));
        }
        Ok(BaseRing { vars, weights, field })
    }

    /// Standard-graded ring over the given field.
    pub fn standard(vars: &[&str], field: Field) -> Result<BaseRing> {
        BaseRing::new(vars.iter().map(|s| s.to_string()).collect(), vec![1; vars.len()], field)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The same ring with one more variable appended.
    pub fn extended(&self, name: &str, weight: u32) -> BaseRing {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        let mut weights = self.weights.clone();
        weights.push(weight);
        BaseRing { vars, weights, field: self.field }
    }

    /// Embed a polynomial into a ring with extra trailing variables.
    pub fn embed_into(&self, f: &Poly, bigger: &BaseRing) -> Poly {
        let extra = bigger.nvars() - self.nvars();
        let mut out: Vec<_> = f
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.extend(std::iter::repeat(0).take(extra));
                (Monomial(e), c.clone())
            })
            .collect();
        out.sort_by(|a, b| bigger.cmp_mono(&b.0, &a.0));
        Poly { terms: out }
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        grevlex_cmp(a, b, &self.weights)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Coef) -> Poly {
        let c = self.field.normalize(&c);
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(Monomial::one(self.nvars()), c)] }
    }

    pub fn from_i64(&self, v: i64) -> Poly {
        self.constant(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly { terms: vec![(Monomial::var(self.nvars(), i), self.field.one())] }
    }

    pub fn monomial(&self, m: Monomial, c: Coef) -> Poly {
        let c = self.field.normalize(&c);
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(m, c)] }
    }

    /// Build a polynomial from arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn from_terms(&self, terms: Vec<(Monomial, Coef)>) -> Poly {
        let mut terms: Vec<(Monomial, Coef)> = terms
            .into_iter()
            .map(|(m, c)| (m, self.field.normalize(&c)))
            .collect();
        terms.sort_by(|a, b| self.cmp_mono(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    fn merge(&self, a: &Poly, b: &Poly, negate_b: bool) -> Poly {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.cmp_mono(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &b.terms[j];
                    out.push((m.clone(), if negate_b { f.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b {
                        f.sub(&a.terms[i].1, &b.terms[j].1)
                    } else {
                        f.add(&a.terms[i].1, &b.terms[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        for (m, c) in &b.terms[j..] {
            out.push((m.clone(), if negate_b { f.neg(c) } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.merge(a, b, false)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.merge(a, b, true)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect() }
    }

    pub fn scale(&self, a: &Poly, c: &Coef) -> Poly {
        let c = self.field.normalize(c);
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: a.terms.iter().map(|(m, d)| (m.clone(), self.field.mul(d, &c))).collect() }
    }

    pub fn mul_term(&self, a: &Poly, m: &Monomial, c: &Coef) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a.terms.iter().map(|(n, d)| (n.mul(m), self.field.mul(d, c))).collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let (small, large) = if a.terms.len() <= b.terms.len() { (a, b) } else { (b, a) };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            acc = self.add(&acc, &self.mul_term(large, m, c));
        }
        acc
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self, a: &Poly) -> Poly {
        match a.lead() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => a.clone(),
            Some((_, c)) => self.scale(a, &self.field.inv(c)),
        }
    }

    pub fn derivative(&self, a: &Poly, var: usize) -> Poly {
        let terms = a
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut e = m.clone();
                let k = e.0[var];
                e.0[var] -= 1;
                (e, self.field.mul(c, &self.field.from_i64(k as i64)))
            })
            .collect();
        self.from_terms(terms)
    }

    /// Replace variable `var` by the polynomial `value`.
    pub fn substitute(&self, a: &Poly, var: usize, value: &Poly) -> Poly {
        let max = a.max_exponent(var);
        let mut powers = vec![self.one()];
        for k in 1..=max {
            powers.push(self.mul(&powers[k as usize - 1], value));
        }
        let mut acc = Poly::zero();
        for (m, c) in &a.terms {
            let mut rest = m.clone();
            let k = rest.0[var];
            rest.0[var] = 0;
            acc = self.add(&acc, &self.mul_term(&powers[k as usize], &rest, c));
        }
        acc
    }

    /// Weighted degree if the polynomial is homogeneous and nonzero.
    pub fn degree(&self, a: &Poly) -> Option<i64> {
        let mut it = a.terms.iter().map(|(m, _)| m.degree(&self.weights));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        a.is_zero() || self.degree(a).is_some()
    }

    /// Canonical text: descending term order, explicit `*`, `^` powers.
    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let negative = self.field.is_negative(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                out.push_str(&self.field.format(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&self.field.format(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly> {
        let mut p = Parser { ring: self, src: text.as_bytes(), pos: 0 };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }

    /// Parse and require homogeneity.
    pub fn parse_homogeneous(&self, text: &str) -> Result<Poly> {
        let f = self.parse_poly(text)?;
        if !self.is_homogeneous(&f) {
            return Err(Error::Inhomogeneous(self.format(&f)));
        }
        Ok(f)
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.field {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        };
        write!(f, "{k}[{}]", self.vars.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    ring: &'a BaseRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.unary()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(self.ring.neg(&f))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    if let Field::Prime(p) = self.ring.field() {
                        if (&den % BigInt::from(p)).is_zero() {
                            return Err(self.error("denominator vanishes in the coefficient field"));
                        }
                    }
                    value /= BigRational::from_integer(den);
                }
                Ok(self.ring.constant(value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}`")))
                    }
                }
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}
