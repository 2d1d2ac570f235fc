//! Sparse multivariate polynomials over a [`FieldSpec`], ring automorphisms
//! given by substitution, and ideals with a reduced Groebner-basis engine.
//!
//! Polynomials are term vectors sorted descending in the ring's monomial
//! order (grevlex by default), with no zero coefficients, so equal
//! polynomials have identical representations. The Groebner engine is
//! Buchberger's algorithm with the normal selection strategy and
//! deterministic tie-breaking; reduced bases are unique per order, which
//! makes ideal equality decidable. Membership certificates (cofactors over
//! the original generators) are tracked lazily and cached.

use crate::scalars::{displays_atomically, FieldElement, FieldSpec, ScalarError};
use num::bigint::BigInt;
use num::Signed;
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

/// Errors raised by polynomial construction, parsing and ideal operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("sigma and its declared inverse do not compose to the identity on variable {var}")]
    NotInverse { var: String },
    #[error("invalid variable name: {0}")]
    BadVariable(String),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("an ideal needs at least one generator")]
    EmptyGenerators,
}

fn parse_err(pos: usize, msg: impl Into<String>) -> PolyError {
    PolyError::Parse {
        pos,
        msg: msg.into(),
    }
}

/// Monomial orders supported by the engine. Grevlex is the default; lex is
/// provided for point-shape detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
}

impl MonomialOrder {
    /// Compares exponent vectors; `Greater` means `a` precedes `b` as a
    /// leading monomial.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.iter().zip(b) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    other => return other,
                }
                for (x, y) in a.iter().zip(b).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        // Smaller exponent in the rightmost differing slot
                        // means the larger monomial.
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// A polynomial ring `k[z_1, ..., z_m]` with a fixed monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldSpec,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    /// Builds a ring with the default grevlex order. Variable names must be
    /// distinct identifiers; `q` is reserved for the cyclotomic generator.
    pub fn new(field: FieldSpec, vars: &[&str]) -> Result<Arc<Self>, PolyError> {
        Self::with_order(field, vars, MonomialOrder::GrevLex)
    }

    pub fn with_order(
        field: FieldSpec,
        vars: &[&str],
        order: MonomialOrder,
    ) -> Result<Arc<Self>, PolyError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            let ok = !v.is_empty()
                && v.chars().next().unwrap().is_ascii_alphabetic()
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && *v != "q"
                && *v != "t";
            if !ok {
                return Err(PolyError::BadVariable(v.to_string()));
            }
            if !seen.insert(v.to_string()) {
                return Err(PolyError::BadVariable(format!("duplicate name {}", v)));
            }
        }
        Ok(Arc::new(PolyRing {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
        }))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// A sparse polynomial: term vector sorted descending in the ring order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Vec<u32>, FieldElement)>,
}

impl Polynomial {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![],
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, FieldElement::one(ring.field))
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldElement) -> Self {
        assert_eq!(c.spec(), ring.field, "scalar from a different field");
        let terms = if c.is_zero() {
            vec![]
        } else {
            vec![(vec![0; ring.vars.len()], c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_int(ring: &Arc<PolyRing>, v: i64) -> Self {
        Self::constant(ring, FieldElement::from_int(ring.field, v))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.vars.len());
        let mut exp = vec![0; ring.vars.len()];
        exp[i] = 1;
        Polynomial {
            ring: ring.clone(),
            terms: vec![(exp, FieldElement::one(ring.field))],
        }
    }

    /// Normalizes an arbitrary term list: merge equal monomials, drop zeros,
    /// sort descending.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Vec<u32>, FieldElement)>) -> Self {
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut merged: Vec<(Vec<u32>, FieldElement)> = Vec::with_capacity(terms.len());
        for (exp, c) in terms {
            assert_eq!(exp.len(), ring.vars.len());
            if let Some(last) = merged.last_mut() {
                if last.0 == exp {
                    last.1 = last.1.add(&c).expect("same field");
                    continue;
                }
            }
            merged.push((exp, c));
        }
        merged.retain(|(_, c)| !c.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms: merged,
        }
    }

    pub fn terms(&self) -> &[(Vec<u32>, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value when this polynomial has no variable part.
    pub fn try_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero(self.ring.field)),
            1 if self.terms[0].0.iter().all(|&e| e == 0) => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&[u32], &FieldElement)> {
        self.terms.first().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other).expect("ring mismatch in add");
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.add(&other.terms[j].1).expect("same field");
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.mul(c).expect("same field")))
                .collect(),
        }
    }

    /// Multiplies by the single term `c * x^exp`.
    pub fn mul_term(&self, exp: &[u32], c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| {
                    let sum: Vec<u32> = e.iter().zip(exp).map(|(a, b)| a + b).collect();
                    (sum, x.mul(c).expect("same field"))
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other).expect("ring mismatch in mul");
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                raw.push((exp, ca.mul(cb).expect("same field")));
            }
        }
        Polynomial::from_terms(&self.ring, raw)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) => self.scale(&lc.inv().expect("leading coefficient nonzero")),
        }
    }

    /// Exact substitution of field values for the variables.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.ring.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.vars.len(),
                got: point.len(),
            });
        }
        let mut acc = FieldElement::zero(self.ring.field);
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&point[i].pow(e as i64)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`; the images must live in the
    /// same ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.vars.len());
        // Cache powers of each image up to the largest exponent used.
        let mut pow_cache: Vec<Vec<Polynomial>> =
            images.iter().map(|g| vec![Polynomial::one(&self.ring), g.clone()]).collect();
        let mut acc = Polynomial::zero(&self.ring);
        for (exp, c) in &self.terms {
            let mut term = Polynomial::constant(&self.ring, c.clone());
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (exp, c)) in self.terms.iter().enumerate() {
            let mono = monomial_string(&self.ring, exp);
            let (neg, body) = coefficient_string(c, !mono.is_empty());
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match (body.is_empty(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&body),
                (false, false) => {
                    out.push_str(&body);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        write!(f, "{}", out)
    }
}

fn monomial_string(ring: &PolyRing, exp: &[u32]) -> String {
    let mut parts = vec![];
    for (i, &e) in exp.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.vars[i].clone()),
            _ => parts.push(format!("{}^{}", ring.vars[i], e)),
        }
    }
    parts.join("*")
}

/// Renders a coefficient for use inside a term: returns (sign-extracted,
/// body). The body is empty when the magnitude is 1 and a monomial follows;
/// multi-term cyclotomic scalars are parenthesized and never sign-extracted.
fn coefficient_string(c: &FieldElement, has_mono: bool) -> (bool, String) {
    if displays_atomically(c) {
        let neg = c.to_string().starts_with('-');
        let mag = if neg { c.neg() } else { c.clone() };
        if has_mono && mag.is_one() {
            (neg, String::new())
        } else {
            (neg, mag.to_string())
        }
    } else if has_mono {
        (false, format!("({})", c))
    } else {
        (false, c.to_string())
    }
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = s.as_bytes();
    let mut toks = vec![];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            // Accept ASCII minus; the printer only ever emits ASCII.
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = s[start..i].parse().unwrap();
                toks.push((start, Tok::Int(v)));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(s[start..i].to_string())));
            }
            _ => return Err(parse_err(i, format!("unexpected character '{}'", c))),
        }
    }
    Ok(toks)
}

struct ExprParser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        if self.pos < self.end {
            Some(&self.toks[self.pos].1)
        } else {
            None
        }
    }

    fn here(&self) -> usize {
        if self.pos < self.toks.len() {
            self.toks[self.pos].0
        } else {
            self.toks.last().map(|(p, _)| p + 1).unwrap_or(0)
        }
    }

    fn bump(&mut self) -> Option<&Tok> {
        if self.pos < self.end {
            self.pos += 1;
            Some(&self.toks[self.pos - 1].1)
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.bump();
                    let f = self.factor()?;
                    let c = f.try_constant().ok_or_else(|| {
                        parse_err(at, "division is only defined by a nonzero constant")
                    })?;
                    let inv = c
                        .inv()
                        .map_err(|_| parse_err(at, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            let at = self.here();
            self.bump();
            match self.bump().cloned() {
                Some(Tok::Int(k)) => {
                    let e = u32::try_from(k)
                        .map_err(|_| parse_err(at, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(parse_err(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let at = self.here();
        match self.bump().cloned() {
            Some(Tok::Int(v)) => {
                let mut c = FieldElement::zero(self.ring.field());
                let scale = FieldElement::from_int(self.ring.field(), 10);
                // Horner over the decimal digits keeps arbitrary precision.
                for d in v.magnitude().to_radix_be(10) {
                    c = c
                        .mul(&scale)
                        .unwrap()
                        .add(&FieldElement::from_int(self.ring.field(), d as i64))
                        .unwrap();
                }
                if v.is_negative() {
                    c = c.neg();
                }
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(Tok::Ident(name)) => {
                if name == "q" {
                    match FieldElement::zeta(self.ring.field()) {
                        Some(z) => Ok(Polynomial::constant(self.ring, z)),
                        None => Err(parse_err(
                            at,
                            "the symbol q requires a cyclotomic coefficient field",
                        )),
                    }
                } else if let Some(i) = self.ring.var_index(&name) {
                    Ok(Polynomial::var(self.ring, i))
                } else {
                    Err(parse_err(at, format!("unknown symbol '{}'", name)))
                }
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(parse_err(self.here(), "expected ')'")),
                }
            }
            _ => Err(parse_err(at, "expected a value")),
        }
    }
}

/// Parses the polynomial text syntax: declared variables, `+ - * / ^`,
/// integer and `a/b` coefficients, `q` for the cyclotomic generator.
pub fn parse_polynomial(ring: &Arc<PolyRing>, s: &str) -> Result<Polynomial, PolyError> {
    let toks = tokenize(s)?;
    let mut p = ExprParser {
        ring,
        end: toks.len(),
        toks: &toks,
        pos: 0,
    };
    let poly = p.expr()?;
    if p.pos != p.end {
        return Err(parse_err(p.here(), "unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses a scalar literal (an expression with no variables).
pub fn parse_scalar(field: FieldSpec, s: &str) -> Result<FieldElement, PolyError> {
    let ring = PolyRing::new(field, &[])?;
    let poly = parse_polynomial(&ring, s)?;
    Ok(poly.try_constant().expect("no variables declared"))
}

// ---------------------------------------------------------------------------
// Ring automorphisms
// ---------------------------------------------------------------------------

/// A ring automorphism given by substitution, with a verified inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingAutomorphism {
    ring: Arc<PolyRing>,
    forward: Vec<Polynomial>,
    backward: Vec<Polynomial>,
}

impl RingAutomorphism {
    /// The inverse is demanded up front and both compositions are verified to
    /// be the identity on every variable; failures name the variable.
    pub fn new(
        ring: &Arc<PolyRing>,
        forward: Vec<Polynomial>,
        backward: Vec<Polynomial>,
    ) -> Result<Self, PolyError> {
        if forward.len() != ring.num_vars() || backward.len() != ring.num_vars() {
            return Err(PolyError::ArityMismatch {
                expected: ring.num_vars(),
                got: forward.len().max(backward.len()),
            });
        }
        for p in forward.iter().chain(backward.iter()) {
            if p.ring() != ring {
                return Err(PolyError::RingMismatch);
            }
        }
        for i in 0..ring.num_vars() {
            let z = Polynomial::var(ring, i);
            if forward[i].substitute(&backward) != z || backward[i].substitute(&forward) != z {
                return Err(PolyError::NotInverse {
                    var: ring.vars()[i].clone(),
                });
            }
        }
        Ok(RingAutomorphism {
            ring: ring.clone(),
            forward,
            backward,
        })
    }

    pub fn identity(ring: &Arc<PolyRing>) -> Self {
        let vars: Vec<Polynomial> = (0..ring.num_vars())
            .map(|i| Polynomial::var(ring, i))
            .collect();
        RingAutomorphism {
            ring: ring.clone(),
            forward: vars.clone(),
            backward: vars,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Images `sigma(z_i)`.
    pub fn forward_images(&self) -> &[Polynomial] {
        &self.forward
    }

    /// Images `sigma^{-1}(z_i)`.
    pub fn backward_images(&self) -> &[Polynomial] {
        &self.backward
    }

    /// `sigma^power(f)` by `|power|` substitutions.
    pub fn apply(&self, f: &Polynomial, power: i64) -> Result<Polynomial, PolyError> {
        if f.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        let images = if power >= 0 {
            &self.forward
        } else {
            &self.backward
        };
        let mut out = f.clone();
        for _ in 0..power.unsigned_abs() {
            out = out.substitute(images);
        }
        Ok(out)
    }

    /// Whether both image lists have total degree <= 1 in every variable.
    pub fn is_affine(&self) -> bool {
        self.forward
            .iter()
            .chain(self.backward.iter())
            .all(|p| p.total_degree().unwrap_or(0) <= 1)
    }

    /// Do this map and `other` commute on every variable?
    pub fn commutes_with(&self, other: &RingAutomorphism) -> bool {
        (0..self.ring.num_vars()).all(|i| {
            self.forward[i].substitute(&other.forward)
                == other.forward[i].substitute(&self.forward)
        })
    }
}

// ---------------------------------------------------------------------------
// Ideals and the Groebner engine
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct GbData {
    /// Reduced Groebner basis: monic, pairwise tail-reduced, sorted ascending
    /// by leading monomial. Unique for the ring's order.
    basis: Vec<Polynomial>,
    /// `basis[k] = sum_a cofactors[k][a] * gens[a]`; computed on demand.
    cofactors: OnceLock<Vec<Vec<Polynomial>>>,
}

/// An ideal given by generators, with a lazily cached reduced Groebner basis.
/// Clones share the cache.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    cache: Arc<OnceLock<GbData>>,
}

impl PartialEq for Ideal {
    /// Mathematical equality: compares reduced Groebner bases.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.reduced_basis() == other.reduced_basis()
    }
}
impl Eq for Ideal {}

impl Ideal {
    /// The zero ideal is rejected: every use in this crate (components of a
    /// BR algebra, maximal ideals, break tests) requires a nonzero ideal.
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self, PolyError> {
        if gens.is_empty() {
            return Err(PolyError::EmptyGenerators);
        }
        for g in &gens {
            if g.ring() != ring {
                return Err(PolyError::RingMismatch);
            }
        }
        if gens.iter().all(|g| g.is_zero()) {
            return Err(PolyError::ZeroIdeal);
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            cache: Arc::new(OnceLock::new()),
        })
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Ideal::new(ring, vec![Polynomial::one(ring)]).unwrap()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    fn gb(&self) -> &GbData {
        self.cache.get_or_init(|| {
            let (basis, _) = buchberger(&self.ring, &self.gens, false);
            GbData {
                basis,
                cofactors: OnceLock::new(),
            }
        })
    }

    /// The reduced Groebner basis (unique per monomial order).
    pub fn reduced_basis(&self) -> &[Polynomial] {
        &self.gb().basis
    }

    /// Cofactor rows expressing each reduced-basis element in the original
    /// generators. Tracking doubles the work, so it reruns the deterministic
    /// engine once on first request and caches the rows.
    pub fn basis_cofactors(&self) -> &[Vec<Polynomial>] {
        let gb = self.gb();
        gb.cofactors.get_or_init(|| {
            let (basis, cof) = buchberger(&self.ring, &self.gens, true);
            debug_assert_eq!(basis, gb.basis, "engine must be deterministic");
            cof.unwrap()
        })
    }

    pub fn is_unit(&self) -> bool {
        let b = self.reduced_basis();
        b.len() == 1 && b[0].try_constant().is_some()
    }

    /// Normal form of `f` modulo the reduced basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, PolyError> {
        if f.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        let (_, rem) = reduce(f, self.reduced_basis());
        Ok(rem)
    }

    /// Ideal membership: true iff the normal form vanishes.
    pub fn contains(&self, f: &Polynomial) -> Result<bool, PolyError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Membership with a certificate over the original generators:
    /// `f = sum_a cert[a] * gens[a]` exactly. `None` when `f` is not a member.
    pub fn contains_with_certificate(
        &self,
        f: &Polynomial,
    ) -> Result<Option<Vec<Polynomial>>, PolyError> {
        if f.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        let (quots, rem) = reduce(f, self.reduced_basis());
        if !rem.is_zero() {
            return Ok(None);
        }
        let cof = self.basis_cofactors();
        let mut cert = vec![Polynomial::zero(&self.ring); self.gens.len()];
        for (k, q) in quots.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (a, c) in cof[k].iter().enumerate() {
                if !c.is_zero() {
                    cert[a] = cert[a].add(&q.mul(c));
                }
            }
        }
        debug_assert_eq!(
            {
                let mut acc = Polynomial::zero(&self.ring);
                for (a, c) in cert.iter().enumerate() {
                    acc = acc.add(&c.mul(&self.gens[a]));
                }
                acc
            },
            *f,
            "certificate must reproduce the member exactly"
        );
        Ok(Some(cert))
    }

    /// Product ideal, generated by pairwise generator products.
    pub fn product(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        let mut gens = vec![];
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Sum ideal, generated by concatenation.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// The single monic generator when the ideal is principal. An ideal is
    /// principal iff its reduced basis is a singleton.
    pub fn is_principal(&self) -> Option<Polynomial> {
        let b = self.reduced_basis();
        if b.len() == 1 {
            Some(b[0].clone())
        } else {
            None
        }
    }

    /// Image ideal under `sigma^power`, generated by the generator images.
    pub fn sigma_image(&self, sigma: &RingAutomorphism, power: i64) -> Result<Ideal, PolyError> {
        if sigma.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        let gens = self
            .gens
            .iter()
            .map(|g| sigma.apply(g, power))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// Is `sigma(I) = I` as ideals?
    pub fn is_sigma_stable(&self, sigma: &RingAutomorphism) -> Result<bool, PolyError> {
        Ok(self.sigma_image(sigma, 1)? == *self)
    }

    /// Replaces the generator list by the reduced basis. Used to keep
    /// incrementally built product ideals small; certificates over the old
    /// generators are forgotten.
    pub fn simplified(&self) -> Ideal {
        Ideal::new(&self.ring, self.reduced_basis().to_vec()).expect("basis is nonempty")
    }
}

impl fmt::Display for Ideal {
    /// Prints the reduced basis in canonical form: `(g1, g2, ...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.reduced_basis().iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Multivariate division: returns quotients over `basis` and the remainder.
/// Divisor choice is the first basis element (in slice order) whose leading
/// monomial divides, which keeps the engine deterministic.
fn reduce(f: &Polynomial, basis: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
    let ring = f.ring().clone();
    let mut quots = vec![Polynomial::zero(&ring); basis.len()];
    let mut rem_terms: Vec<(Vec<u32>, FieldElement)> = vec![];
    let mut p = f.clone();
    'outer: while let Some((exp, c)) = p.leading_term() {
        let exp = exp.to_vec();
        let c = c.clone();
        for (k, g) in basis.iter().enumerate() {
            let (gexp, gc) = match g.leading_term() {
                Some(t) => t,
                None => continue,
            };
            if exp.iter().zip(gexp).all(|(a, b)| a >= b) {
                let m: Vec<u32> = exp.iter().zip(gexp).map(|(a, b)| a - b).collect();
                let coef = c.div(gc).expect("leading coefficient nonzero");
                quots[k] = quots[k].add(&Polynomial::from_terms(
                    &ring,
                    vec![(m.clone(), coef.clone())],
                ));
                p = p.sub(&g.mul_term(&m, &coef));
                continue 'outer;
            }
        }
        // No divisor: move the leading term to the remainder.
        p = p.sub(&Polynomial::from_terms(&ring, vec![(exp.clone(), c.clone())]));
        rem_terms.push((exp, c));
    }
    (quots, Polynomial::from_terms(&ring, rem_terms))
}

/// Buchberger's algorithm with the normal selection strategy (minimal lcm in
/// the ring order, ties by pair index) and the product criterion. When
/// `track` is set, each basis element carries its expression over the input
/// generators through every reduction, including the final inter-reduction.
fn buchberger(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    track: bool,
) -> (Vec<Polynomial>, Option<Vec<Vec<Polynomial>>>) {
    let order = ring.order();
    struct Entry {
        poly: Polynomial,
        row: Vec<Polynomial>,
    }
    let unit_row = |i: usize| -> Vec<Polynomial> {
        if !track {
            return vec![];
        }
        let mut row = vec![Polynomial::zero(ring); gens.len()];
        row[i] = Polynomial::one(ring);
        row
    };
    let mut basis: Vec<Entry> = vec![];
    for (i, g) in gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push(Entry {
                poly: g.clone(),
                row: unit_row(i),
            });
        }
    }
    let mut pairs: Vec<(usize, usize)> = vec![];
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    let lcm_exp = |a: &Polynomial, b: &Polynomial| -> Vec<u32> {
        let (ea, _) = a.leading_term().unwrap();
        let (eb, _) = b.leading_term().unwrap();
        ea.iter().zip(eb).map(|(x, y)| *x.max(y)).collect()
    };
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm in the ring order; ties by index.
        let mut best = 0;
        let mut best_lcm = lcm_exp(&basis[pairs[0].0].poly, &basis[pairs[0].1].poly);
        for (idx, (i, j)) in pairs.iter().enumerate().skip(1) {
            let l = lcm_exp(&basis[*i].poly, &basis[*j].poly);
            if order.cmp(&l, &best_lcm) == Ordering::Less {
                best = idx;
                best_lcm = l;
            }
        }
        let (i, j) = pairs.remove(best);
        let (gi, gj) = (&basis[i].poly, &basis[j].poly);
        let (ei, ci) = gi.leading_term().unwrap();
        let (ej, cj) = gj.leading_term().unwrap();
        // Product criterion: coprime leading monomials reduce to zero.
        if best_lcm
            .iter()
            .zip(ei.iter().zip(ej))
            .all(|(l, (a, b))| *l == a + b)
        {
            continue;
        }
        let mi: Vec<u32> = best_lcm.iter().zip(ei).map(|(l, e)| l - e).collect();
        let mj: Vec<u32> = best_lcm.iter().zip(ej).map(|(l, e)| l - e).collect();
        let inv_ci = ci.inv().unwrap();
        let inv_cj = cj.inv().unwrap();
        let s = gi
            .mul_term(&mi, &inv_ci)
            .sub(&gj.mul_term(&mj, &inv_cj));
        let srow: Vec<Polynomial> = if track {
            basis[i]
                .row
                .iter()
                .zip(&basis[j].row)
                .map(|(ri, rj)| {
                    ri.mul_term(&mi, &inv_ci)
                        .sub(&rj.mul_term(&mj, &inv_cj))
                })
                .collect()
        } else {
            vec![]
        };
        let polys: Vec<Polynomial> = basis.iter().map(|e| e.poly.clone()).collect();
        let (quots, rem) = reduce(&s, &polys);
        if rem.is_zero() {
            continue;
        }
        let mut row = srow;
        if track {
            for (k, q) in quots.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                for (a, r) in basis[k].row.iter().enumerate() {
                    if !r.is_zero() {
                        row[a] = row[a].sub(&q.mul(r));
                    }
                }
            }
        }
        let new_index = basis.len();
        basis.push(Entry { poly: rem, row });
        for k in 0..new_index {
            pairs.push((k, new_index));
        }
    }

    // Minimalize: drop entries whose leading monomial is divisible by the
    // leading monomial of another retained entry.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ei, _) = basis[i].poly.leading_term().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (ej, _) = basis[j].poly.leading_term().unwrap();
            let divides = ej.iter().zip(ei).all(|(b, a)| a >= b);
            // Equal leading monomials keep the earlier entry.
            if divides && (ej != ei || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut entries: Vec<Entry> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| if k { Some(e) } else { None })
        .collect();

    // Tail-reduce each element modulo the others and normalize monic.
    loop {
        let mut changed = false;
        for i in 0..entries.len() {
            let others: Vec<Polynomial> = entries
                .iter()
                .enumerate()
                .filter_map(|(j, e)| if j != i { Some(e.poly.clone()) } else { None })
                .collect();
            let (quots, rem) = reduce(&entries[i].poly, &others);
            if rem != entries[i].poly {
                changed = true;
                if track {
                    let mut row = entries[i].row.clone();
                    let other_rows: Vec<Vec<Polynomial>> = entries
                        .iter()
                        .enumerate()
                        .filter_map(|(j, e)| if j != i { Some(e.row.clone()) } else { None })
                        .collect();
                    for (k, q) in quots.iter().enumerate() {
                        if q.is_zero() {
                            continue;
                        }
                        for (a, r) in other_rows[k].iter().enumerate() {
                            if !r.is_zero() {
                                row[a] = row[a].sub(&q.mul(r));
                            }
                        }
                    }
                    entries[i].row = row;
                }
                entries[i].poly = rem;
            }
        }
        if !changed {
            break;
        }
    }
    for e in entries.iter_mut() {
        if let Some((_, lc)) = e.poly.leading_term() {
            let inv = lc.inv().unwrap();
            e.poly = e.poly.scale(&inv);
            if track {
                for r in e.row.iter_mut() {
                    *r = r.scale(&inv);
                }
            }
        }
    }
    entries.retain(|e| !e.poly.is_zero());
    entries.sort_by(|a, b| {
        order.cmp(
            a.poly.leading_term().unwrap().0,
            b.poly.leading_term().unwrap().0,
        )
    });
    let basis: Vec<Polynomial> = entries.iter().map(|e| e.poly.clone()).collect();
    let rows = if track {
        Some(entries.into_iter().map(|e| e.row).collect())
    } else {
        None
    };
    (basis, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qring() -> Arc<PolyRing> {
        PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap()
    }

    fn q2ring() -> Arc<PolyRing> {
        PolyRing::new(FieldSpec::rationals(), &["z1", "z2"]).unwrap()
    }

    fn p(ring: &Arc<PolyRing>, s: &str) -> Polynomial {
        parse_polynomial(ring, s).unwrap()
    }

    #[test]
    fn groebner_collapses_redundant_generators() {
        let r = qring();
        let i = Ideal::new(&r, vec![p(&r, "z^2 - z"), p(&r, "z")]).unwrap();
        assert_eq!(i.reduced_basis(), &[p(&r, "z")]);
        assert_eq!(i.is_principal(), Some(p(&r, "z")));
    }

    #[test]
    fn groebner_keeps_reduced_pairs() {
        let r = q2ring();
        let i = Ideal::new(&r, vec![p(&r, "z1 - 1"), p(&r, "z2 - 1")]).unwrap();
        assert_eq!(i.reduced_basis(), &[p(&r, "z2 - 1"), p(&r, "z1 - 1")]);
    }

    #[test]
    fn unit_ideal_reduces_to_one() {
        let r = q2ring();
        let i = Ideal::new(&r, vec![p(&r, "1")]).unwrap();
        assert_eq!(i.reduced_basis(), &[p(&r, "1")]);
        assert!(i.is_unit());
    }

    #[test]
    fn membership_with_certificate() {
        let r = qring();
        let i = Ideal::new(&r, vec![p(&r, "z")]).unwrap();
        let f = p(&r, "z^2 - z");
        let cert = i.contains_with_certificate(&f).unwrap().unwrap();
        assert_eq!(cert, vec![p(&r, "z - 1")]);

        let r2 = q2ring();
        let i2 = Ideal::new(&r2, vec![p(&r2, "z1 - 1"), p(&r2, "z2 + 1")]).unwrap();
        let f2 = p(&r2, "z1 + z2");
        let cert2 = i2.contains_with_certificate(&f2).unwrap().unwrap();
        let rebuilt = cert2[0]
            .mul(&i2.gens()[0])
            .add(&cert2[1].mul(&i2.gens()[1]));
        assert_eq!(rebuilt, f2);
        assert_eq!(cert2, vec![p(&r2, "1"), p(&r2, "1")]);
    }

    #[test]
    fn non_membership() {
        let r = q2ring();
        let i = Ideal::new(&r, vec![p(&r, "z1"), p(&r, "z2")]).unwrap();
        assert!(!i.contains(&p(&r, "1")).unwrap());
        assert!(i.contains_with_certificate(&p(&r, "1")).unwrap().is_none());
    }

    #[test]
    fn product_and_unit_identity() {
        let r = qring();
        let a = Ideal::new(&r, vec![p(&r, "z")]).unwrap();
        let b = Ideal::new(&r, vec![p(&r, "z - 1")]).unwrap();
        let prod = a.product(&b).unwrap();
        assert_eq!(prod.reduced_basis(), &[p(&r, "z^2 - z")]);
        let unit = Ideal::unit(&r);
        assert_eq!(a.product(&unit).unwrap(), a);
    }

    #[test]
    fn automorphism_requires_true_inverse() {
        let r = qring();
        let ok = RingAutomorphism::new(&r, vec![p(&r, "z - 1")], vec![p(&r, "z + 1")]);
        assert!(ok.is_ok());
        let bad = RingAutomorphism::new(&r, vec![p(&r, "z - 1")], vec![p(&r, "z")]);
        assert_eq!(
            bad.unwrap_err(),
            PolyError::NotInverse {
                var: "z".to_string()
            }
        );
    }

    #[test]
    fn automorphism_application() {
        let r = qring();
        let s = RingAutomorphism::new(&r, vec![p(&r, "z - 1")], vec![p(&r, "z + 1")]).unwrap();
        let f = p(&r, "z^2");
        assert_eq!(s.apply(&f, 1).unwrap(), p(&r, "(z - 1)^2"));
        assert_eq!(s.apply(&f, 0).unwrap(), f);
        assert_eq!(s.apply(&s.apply(&f, 1).unwrap(), -1).unwrap(), f);
    }

    #[test]
    fn cyclotomic_twist_preserves_products() {
        let spec = FieldSpec::cyclotomic(3).unwrap();
        let r = PolyRing::new(spec, &["z1", "z2"]).unwrap();
        let s = RingAutomorphism::new(
            &r,
            vec![p(&r, "q*z1"), p(&r, "q^2*z2")],
            vec![p(&r, "q^2*z1"), p(&r, "q*z2")],
        )
        .unwrap();
        let f = p(&r, "z1*z2");
        assert_eq!(s.apply(&f, 1).unwrap(), f);
    }

    #[test]
    fn sigma_stability() {
        let r = q2ring();
        let s = RingAutomorphism::new(
            &r,
            vec![p(&r, "z1 - 1"), p(&r, "z2 + 1")],
            vec![p(&r, "z1 + 1"), p(&r, "z2 - 1")],
        )
        .unwrap();
        let fixed = Ideal::new(&r, vec![p(&r, "z1 + z2")]).unwrap();
        assert!(fixed.is_sigma_stable(&s).unwrap());
        let moved = Ideal::new(&r, vec![p(&r, "z1")]).unwrap();
        assert!(!moved.is_sigma_stable(&s).unwrap());
        assert_eq!(
            moved.sigma_image(&s, 1).unwrap().reduced_basis(),
            &[p(&r, "z1 - 1")]
        );
        let id = RingAutomorphism::identity(&r);
        assert!(moved.is_sigma_stable(&id).unwrap());
    }

    #[test]
    fn evaluation_at_cyclotomic_points() {
        let spec = FieldSpec::cyclotomic(3).unwrap();
        let r = PolyRing::new(spec, &["z1", "z2"]).unwrap();
        let f = p(&r, "z1 - 1");
        let qv = FieldElement::zeta(spec).unwrap();
        let q2v = qv.pow(2).unwrap();
        let val = f.evaluate(&[qv.clone(), q2v.clone()]).unwrap();
        assert_eq!(val, qv.sub(&FieldElement::one(spec)).unwrap());
        let g = p(&r, "z2 - 1");
        let val2 = g.evaluate(&[qv.clone(), q2v.clone()]).unwrap();
        assert_eq!(val2, q2v.sub(&FieldElement::one(spec)).unwrap());
        assert!(matches!(
            f.evaluate(&[qv]),
            Err(PolyError::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn display_round_trip_examples() {
        let spec = FieldSpec::cyclotomic(3).unwrap();
        let r = PolyRing::new(spec, &["z1", "z2"]).unwrap();
        for src in [
            "z1^2*z2 - 2*z1 + 1/2",
            "(q + 1)*z1 - q*z2",
            "q^2*z1 + z2 - q",
            "0",
            "-z1 + 1",
            "1/3",
        ] {
            let f = p(&r, src);
            let printed = f.to_string();
            let back = parse_polynomial(&r, &printed).unwrap();
            assert_eq!(back, f, "round trip through {:?}", printed);
        }
    }

    #[test]
    fn reduced_basis_is_idempotent() {
        let r = q2ring();
        let i = Ideal::new(
            &r,
            vec![
                p(&r, "z1^2*z2 - z1"),
                p(&r, "z1*z2^2 - z2"),
                p(&r, "z1^3 - z1"),
            ],
        )
        .unwrap();
        let again = Ideal::new(&r, i.reduced_basis().to_vec()).unwrap();
        assert_eq!(again.reduced_basis(), i.reduced_basis());
    }
}
