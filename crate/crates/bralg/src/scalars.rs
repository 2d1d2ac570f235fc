//! Exact arithmetic for the three coefficient fields: the rationals `QQ`, the
//! cyclotomic fields `QQ(zeta_n)` and the prime fields `F_p`.
//!
//! Every element is stored in a unique canonical form, so `==` decides
//! mathematical equality: rationals are reduced fractions, prime-field
//! residues lie in `[0, p)`, and cyclotomic elements are coordinate vectors
//! against the power basis `{1, zeta, ..., zeta^(phi(n)-1)}` reduced modulo
//! the n-th cyclotomic polynomial. No floating point is used anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Errors raised by scalar construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: {0} vs {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclotomic order must be >= 1, got {0}")]
    BadCyclotomicOrder(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    Rationals,
    PrimeField(u64),
    Cyclotomic(u64),
}

/// Identifies one of the supported coefficient fields.
///
/// Construct through [`FieldSpec::rationals`], [`FieldSpec::prime`] (the
/// modulus is verified prime) or [`FieldSpec::cyclotomic`] (order `n >= 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    /// The field of rational numbers.
    pub fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    /// The prime field `F_p`; fails when `p` is not prime.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec(Kind::PrimeField(p)))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    /// The cyclotomic field `QQ(zeta_n)`, realized as `QQ[x]` modulo the n-th
    /// cyclotomic polynomial; requires `n >= 1`.
    pub fn cyclotomic(n: u64) -> Result<Self, ScalarError> {
        if n >= 1 {
            Ok(FieldSpec(Kind::Cyclotomic(n)))
        } else {
            Err(ScalarError::BadCyclotomicOrder(n))
        }
    }

    pub fn is_rationals(&self) -> bool {
        self.0 == Kind::Rationals
    }

    /// The modulus when this is a prime field.
    pub fn prime_modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::PrimeField(p) => Some(p),
            _ => None,
        }
    }

    /// The order `n` when this is `QQ(zeta_n)`.
    pub fn cyclotomic_order(&self) -> Option<u64> {
        match self.0 {
            Kind::Cyclotomic(n) => Some(n),
            _ => None,
        }
    }

    /// Degree of the field over its prime field (`phi(n)` for cyclotomics,
    /// 1 otherwise). This is the length of cyclotomic coordinate vectors.
    pub fn degree(&self) -> usize {
        match self.0 {
            Kind::Cyclotomic(n) => cyc_data(n).phi,
            _ => 1,
        }
    }

    /// Characteristic of the field: `p` for `F_p`, 0 otherwise.
    pub fn characteristic(&self) -> u64 {
        match self.0 {
            Kind::PrimeField(p) => p,
            _ => 0,
        }
    }

    fn check_same(&self, other: &FieldSpec) -> Result<(), ScalarError> {
        if self == other {
            Ok(())
        } else {
            Err(ScalarError::MixedFields(*self, *other))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rationals => write!(f, "rationals"),
            Kind::PrimeField(p) => write!(f, "prime {}", p),
            Kind::Cyclotomic(n) => write!(f, "cyclotomic {}", n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Mod(u64),
    /// Coordinates against the power basis, length exactly `phi(n)`.
    Cyc(Vec<BigRational>),
}

/// An exact element of one of the supported fields, always in canonical form:
/// two elements are mathematically equal iff their payloads compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Self::from_int(spec, 0)
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn from_int(spec: FieldSpec, v: i64) -> Self {
        let repr = match spec.0 {
            Kind::Rationals => Repr::Rat(BigRational::from_integer(BigInt::from(v))),
            Kind::PrimeField(p) => Repr::Mod((v as i128).rem_euclid(p as i128) as u64),
            Kind::Cyclotomic(n) => {
                let phi = cyc_data(n).phi;
                let mut coeffs = vec![BigRational::zero(); phi];
                coeffs[0] = BigRational::from_integer(BigInt::from(v));
                Repr::Cyc(coeffs)
            }
        };
        FieldElement { spec, repr }
    }

    /// The fraction `num/den`; fails with `DivisionByZero` when `den == 0`
    /// (or when `den` vanishes in characteristic p).
    pub fn from_ratio(spec: FieldSpec, num: i64, den: i64) -> Result<Self, ScalarError> {
        Self::from_int(spec, num).div(&Self::from_int(spec, den))
    }

    /// The primitive root of unity `zeta_n` when the field is cyclotomic.
    pub fn zeta(spec: FieldSpec) -> Option<Self> {
        let n = spec.cyclotomic_order()?;
        let data = cyc_data(n);
        let mut coeffs = vec![BigRational::zero(); data.phi];
        if data.phi == 1 {
            // phi(n) = 1 only for n = 1, 2: zeta is 1 resp. -1.
            coeffs[0] = if n == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
        } else {
            coeffs[1] = BigRational::one();
        }
        Some(FieldElement {
            spec,
            repr: Repr::Cyc(coeffs),
        })
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Mod(v) => *v == 0,
            Repr::Cyc(c) => c.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one(self.spec)
    }

    /// The underlying reduced fraction for rational elements.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// The canonical residue in `[0, p)` for prime-field elements.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Mod(v) => Some(*v),
            _ => None,
        }
    }

    /// Power-basis coordinates for cyclotomic elements (length `phi(n)`).
    pub fn cyclotomic_coords(&self) -> Option<&[BigRational]> {
        match &self.repr {
            Repr::Cyc(c) => Some(c),
            _ => None,
        }
    }

    fn binop(
        &self,
        other: &FieldElement,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        modp: impl Fn(u64, u64, u64) -> u64,
        cyc: impl Fn(&[BigRational], &[BigRational], &CycData) -> Vec<BigRational>,
    ) -> Result<FieldElement, ScalarError> {
        self.spec.check_same(&other.spec)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(rat(a, b)),
            (Repr::Mod(a), Repr::Mod(b)) => {
                Repr::Mod(modp(*a, *b, self.spec.prime_modulus().unwrap()))
            }
            (Repr::Cyc(a), Repr::Cyc(b)) => {
                let data = cyc_data(self.spec.cyclotomic_order().unwrap());
                Repr::Cyc(cyc(a, b, &data))
            }
            _ => unreachable!("spec equality implies repr variant equality"),
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.binop(
            other,
            |a, b| a + b,
            addmod,
            |a, b, _| a.iter().zip(b).map(|(x, y)| x + y).collect(),
        )
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.binop(
            other,
            |a, b| a - b,
            |a, b, p| addmod(a, p - b, p),
            |a, b, _| a.iter().zip(b).map(|(x, y)| x - y).collect(),
        )
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.binop(
            other,
            |a, b| a * b,
            mulmod,
            |a, b, data| data.mul(a, b),
        )
    }

    pub fn neg(&self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Mod(a) => Repr::Mod(if *a == 0 {
                0
            } else {
                self.spec.prime_modulus().unwrap() - a
            }),
            Repr::Cyc(a) => Repr::Cyc(a.iter().map(|x| -x).collect()),
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    pub fn inv(&self) -> Result<FieldElement, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.recip()),
            Repr::Mod(a) => Repr::Mod(invmod(*a, self.spec.prime_modulus().unwrap())),
            Repr::Cyc(a) => {
                let data = cyc_data(self.spec.cyclotomic_order().unwrap());
                Repr::Cyc(data.inv(a))
            }
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.spec.check_same(&other.spec)?;
        self.mul(&other.inv()?)
    }

    /// `self^k` with `k` any integer; `0^k` for `k < 0` is `DivisionByZero`,
    /// and `0^0 = 1` by convention.
    pub fn pow(&self, k: i64) -> Result<FieldElement, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = FieldElement::one(self.spec);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq).unwrap();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq).unwrap();
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{}", format_rational(r)),
            Repr::Mod(v) => write!(f, "{}", v),
            Repr::Cyc(c) => write!(f, "{}", format_cyclotomic(c)),
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a cyclotomic coordinate vector as a polynomial in `q`, highest
/// power first: `q^2 + 2*q - 1/3`.
fn format_cyclotomic(coeffs: &[BigRational]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign_neg = c.is_negative();
        if out.is_empty() {
            if sign_neg {
                out.push('-');
            }
        } else if sign_neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let power = match i {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{}", i),
        };
        if power.is_empty() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&format_rational(&mag));
            out.push('*');
            out.push_str(&power);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Does this scalar print as a single atom (no top-level `+`/`-`)? The
/// polynomial printer uses this to decide whether a coefficient needs
/// parentheses.
pub(crate) fn displays_atomically(x: &FieldElement) -> bool {
    match &x.repr {
        Repr::Rat(_) | Repr::Mod(_) => true,
        Repr::Cyc(c) => c.iter().filter(|v| !v.is_zero()).count() <= 1,
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomial and field data
// ---------------------------------------------------------------------------

/// Coefficients of the n-th cyclotomic polynomial `Phi_n(x)`, constant term
/// first, computed by the recursion `Phi_n(x) = (x^n - 1) / prod_{d|n, d<n}
/// Phi_d(x)` with exact integer division.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be >= 1");
    let mut memo: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    cyclotomic_rec(n, &mut memo)
}

fn cyclotomic_rec(n: u64, memo: &mut BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_rec(d, memo);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

/// Exact division of integer polynomials (constant term first); panics if the
/// division is not exact, which cannot happen for cyclotomic factors.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "cyclotomic divisors are monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact division");
    quot
}

struct CycData {
    phi: usize,
    /// `zeta^(phi + j)` expressed in the power basis, for `j = 0..phi-1`.
    reduce_rows: Vec<Vec<BigRational>>,
    /// `Phi_n` with rational coefficients, constant term first, monic.
    minpoly: Vec<BigRational>,
}

impl CycData {
    fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let phi = self.phi;
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                raw[i + j] += ai * bj;
            }
        }
        let mut out: Vec<BigRational> = raw[..phi].to_vec();
        for j in 0..phi.saturating_sub(1) {
            let c = &raw[phi + j];
            if c.is_zero() {
                continue;
            }
            for (k, r) in self.reduce_rows[j].iter().enumerate() {
                if !r.is_zero() {
                    out[k] += c * r;
                }
            }
        }
        out
    }

    /// Inverse modulo `Phi_n` by the extended Euclidean algorithm in `QQ[x]`.
    fn inv(&self, a: &[BigRational]) -> Vec<BigRational> {
        let (mut r0, mut r1) = (self.minpoly.clone(), trim(a.to_vec()));
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = rat_poly_divrem(&r0, &r1);
            let s = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd(Phi, a), a nonzero unit mod the irreducible Phi: constant.
        assert_eq!(r0.len(), 1, "Phi_n is irreducible, gcd must be constant");
        let c = r0[0].recip();
        let mut out = vec![BigRational::zero(); self.phi];
        for (i, v) in s0.iter().enumerate() {
            out[i] = v * &c;
        }
        out
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn rat_poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[k + j] -= t;
        }
    }
    (trim(quot), trim(rem))
}

fn cyc_data(n: u64) -> Arc<CycData> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<CycData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let ints = cyclotomic_polynomial(n);
            let phi = ints.len() - 1;
            let minpoly: Vec<BigRational> = ints
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect();
            // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1}).
            let base_row: Vec<BigRational> = minpoly[..phi].iter().map(|c| -c).collect();
            let mut reduce_rows = vec![base_row.clone()];
            for _ in 1..phi {
                let prev = reduce_rows.last().unwrap();
                let mut next = vec![BigRational::zero(); phi];
                // Multiply by zeta: shift, then fold the overflow through
                // the base row.
                let overflow = prev[phi - 1].clone();
                next[1..phi].clone_from_slice(&prev[..phi - 1]);
                if !overflow.is_zero() {
                    for (k, r) in base_row.iter().enumerate() {
                        next[k] += &overflow * r;
                    }
                }
                reduce_rows.push(next);
            }
            Arc::new(CycData {
                phi,
                reduce_rows,
                minpoly,
            })
        })
        .clone()
}

// ---------------------------------------------------------------------------
// Prime-field helpers
// ---------------------------------------------------------------------------

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // Extended Euclid over the integers.
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "inverse of a unit modulo a prime");
    t0.rem_euclid(p as i128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test for `u64`: trial division below `2^20`, then
/// Miller-Rabin with a base set proven complete for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == d {
            return true;
        }
        if n.is_multiple_of(d) {
            return false;
        }
    }
    let mut d = 41u64;
    while d * d <= n && d < (1 << 20) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    if d * d > n {
        return true;
    }
    let mut s = 0u32;
    let mut q = n - 1;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, q, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> FieldElement {
        FieldElement::zeta(FieldSpec::cyclotomic(3).unwrap()).unwrap()
    }

    #[test]
    fn rational_fraction_arithmetic() {
        let s = FieldSpec::rationals();
        let third = FieldElement::from_ratio(s, 1, 3).unwrap();
        let sixth = FieldElement::from_ratio(s, 1, 6).unwrap();
        let half = FieldElement::from_ratio(s, 1, 2).unwrap();
        assert_eq!(third.add(&sixth).unwrap(), half);
    }

    #[test]
    fn zeta3_multiplication_closes_the_cycle() {
        let q = q3();
        let q2 = q.mul(&q).unwrap();
        assert_eq!(q.mul(&q2).unwrap(), FieldElement::one(q.spec()));
    }

    #[test]
    fn zeta3_satisfies_its_minimal_polynomial() {
        let q = q3();
        let q2 = q.mul(&q).unwrap();
        let sum = q2.add(&q).unwrap().add(&FieldElement::one(q.spec())).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn cyclotomic_polynomial_small_orders() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn prime_field_inverse_and_pow() {
        let s = FieldSpec::prime(101).unwrap();
        let a = FieldElement::from_int(s, 37);
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
        assert_eq!(a.pow(100).unwrap(), FieldElement::one(s));
    }

    #[test]
    fn primality_is_verified_at_construction() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(1_000_003).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
        // Strong pseudoprime to several small bases.
        assert!(FieldSpec::prime(3215031751).is_err());
        assert!(FieldSpec::prime(18446744073709551557).is_ok());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let s = FieldSpec::rationals();
        let e = FieldElement::one(s).div(&FieldElement::zero(s));
        assert_eq!(e, Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldElement::one(FieldSpec::rationals());
        let b = FieldElement::one(FieldSpec::prime(5).unwrap());
        assert!(matches!(a.add(&b), Err(ScalarError::MixedFields(_, _))));
    }

    #[test]
    fn cyclotomic_division_round_trips() {
        let q = q3();
        let one = FieldElement::one(q.spec());
        let x = q.add(&one).unwrap(); // q + 1 = -q^2
        let y = q.sub(&one).unwrap();
        let z = x.div(&y).unwrap();
        assert_eq!(z.mul(&y).unwrap(), x);
    }

    #[test]
    fn display_canonical_forms() {
        let q = q3();
        let one = FieldElement::one(q.spec());
        assert_eq!(q.to_string(), "q");
        assert_eq!(q.pow(2).unwrap().to_string(), "-q - 1");
        assert_eq!(q.add(&one).unwrap().neg().to_string(), "-q - 1");
        assert_eq!(FieldElement::from_ratio(FieldSpec::rationals(), -4, 6)
            .unwrap()
            .to_string(), "-2/3");
    }
}
