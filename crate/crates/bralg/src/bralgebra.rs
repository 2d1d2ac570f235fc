//! The graded algebra B determined by a polynomial ring R, an automorphism
//! sigma and two nonzero ideals H, J inside the skew Laurent ring
//! R[t, t^-1; sigma]: graded components I^(n), element arithmetic with
//! checked membership, recognition of generalized Weyl algebras, centrality
//! decisions, lifting of compatible ring automorphisms, and the
//! Gelfand-Kirillov dimension formula for affine sigma.

use crate::polyring::{parse_polynomial, Ideal, PolyError, PolyRing, Polynomial, RingAutomorphism};
use crate::scalars::FieldElement;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BRError {
    #[error("polynomial {poly} does not lie in the degree {degree} component")]
    NotInComponent { degree: i64, poly: String },
    #[error("graded elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element does not belong to this algebra")]
    ElementNotInAlgebra,
    #[error("condition violated: {condition}; witness: {witness}")]
    ConditionViolated { condition: String, witness: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The graded algebra `B = sum_n I^(n) t^n` with `I^(0) = R`,
/// `I^(n) = J sigma(J) ... sigma^(n-1)(J)` for `n >= 1` and
/// `I^(n) = sigma^-1(H) sigma^-2(H) ... sigma^n(H)` for `n <= -1`.
///
/// Immutable after construction; the degree-indexed component cache and the
/// word-indexed generator cache fill in lazily behind locks.
#[derive(Debug)]
pub struct BRAlgebra {
    ring: Arc<PolyRing>,
    sigma: RingAutomorphism,
    h: Ideal,
    j: Ideal,
    /// Monic normalizations of the nonzero declared generators of J, in
    /// declared order. These are the canonical degree +1 generators.
    j_hat: Vec<Polynomial>,
    /// Monic normalizations of sigma^-1 of the nonzero declared generators
    /// of H, in declared order. These are the canonical degree -1 generators.
    h_hat: Vec<Polynomial>,
    components: Mutex<BTreeMap<i64, Ideal>>,
    word_components: Mutex<BTreeMap<i64, Arc<WordComponent>>>,
    hj: OnceLock<Ideal>,
}

/// The degree `n != 0` component presented by the full list of generator
/// words: one generator per word `w` over the canonical degree-sign
/// generators, so membership certificates index words directly.
#[derive(Debug)]
pub struct WordComponent {
    pub degree: i64,
    /// Indices into `j_hat` (degree > 0) or `h_hat` (degree < 0), one word
    /// per generator, in lexicographic order.
    pub words: Vec<Vec<usize>>,
    /// `gens[w] = g(w_0) * sigma^(+-1)(g(w_1)) * ... ` matching `words`.
    pub gens: Vec<Polynomial>,
    /// The ideal generated by `gens` (equal to `component(degree)`).
    pub ideal: Ideal,
}

impl PartialEq for BRAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.ring == other.ring
                && self.sigma == other.sigma
                && self.h.gens() == other.h.gens()
                && self.j.gens() == other.j.gens())
    }
}

impl BRAlgebra {
    /// Builds the algebra; `h` and `j` must be nonzero ideals of `ring`
    /// (zero ideals are already rejected by the `Ideal` constructor) and
    /// `sigma` must act on the same ring.
    pub fn new(
        ring: &Arc<PolyRing>,
        sigma: RingAutomorphism,
        h: Ideal,
        j: Ideal,
    ) -> Result<Arc<Self>, BRError> {
        if sigma.ring() != ring || h.ring() != ring || j.ring() != ring {
            return Err(BRError::Poly(PolyError::RingMismatch));
        }
        let j_hat: Vec<Polynomial> = j
            .gens()
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.monic())
            .collect();
        let h_hat: Vec<Polynomial> = h
            .gens()
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| sigma.apply(g, -1).expect("same ring").monic())
            .collect();
        Ok(Arc::new(BRAlgebra {
            ring: ring.clone(),
            sigma,
            h,
            j,
            j_hat,
            h_hat,
            components: Mutex::new(BTreeMap::new()),
            word_components: Mutex::new(BTreeMap::new()),
            hj: OnceLock::new(),
        }))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn sigma(&self) -> &RingAutomorphism {
        &self.sigma
    }

    pub fn h_ideal(&self) -> &Ideal {
        &self.h
    }

    pub fn j_ideal(&self) -> &Ideal {
        &self.j
    }

    /// Canonical monic degree +1 generators (normalized declared generators
    /// of J, declared order preserved).
    pub fn j_hat(&self) -> &[Polynomial] {
        &self.j_hat
    }

    /// Canonical monic degree -1 generators (normalized backward images of
    /// the declared generators of H, declared order preserved).
    pub fn h_hat(&self) -> &[Polynomial] {
        &self.h_hat
    }

    /// The product ideal `H * J`, cached.
    pub fn hj_product(&self) -> &Ideal {
        self.hj.get_or_init(|| {
            self.h
                .product(&self.j)
                .expect("same ring")
                .simplified()
        })
    }

    /// The graded component `I^(n)`, computed incrementally from the nearest
    /// cached degree toward 0 and cached. Generator lists are inter-reduced
    /// (replaced by the reduced Groebner basis) after every step so they stay
    /// bounded along the chain.
    pub fn component(&self, n: i64) -> Ideal {
        if n == 0 {
            return Ideal::unit(&self.ring);
        }
        if let Some(found) = self.components.lock().unwrap().get(&n) {
            return found.clone();
        }
        let step: i64 = if n > 0 { 1 } else { -1 };
        let mut k = 0i64;
        let mut cur = Ideal::unit(&self.ring);
        {
            let cache = self.components.lock().unwrap();
            let mut probe = n - step;
            while probe != 0 {
                if let Some(found) = cache.get(&probe) {
                    k = probe;
                    cur = found.clone();
                    break;
                }
                probe -= step;
            }
        }
        while k != n {
            let next = k + step;
            let factor = if step == 1 {
                self.j.sigma_image(&self.sigma, next - 1).expect("same ring")
            } else {
                self.h.sigma_image(&self.sigma, next).expect("same ring")
            };
            cur = if k == 0 {
                factor.simplified()
            } else {
                cur.product(&factor).expect("same ring").simplified()
            };
            self.components.lock().unwrap().insert(next, cur.clone());
            k = next;
        }
        cur
    }

    /// The degree `n != 0` component with its full word-indexed generator
    /// list (used for membership certificates over canonical generators).
    pub fn word_component(&self, n: i64) -> Arc<WordComponent> {
        assert!(n != 0, "degree 0 has no generator words");
        if let Some(found) = self.word_components.lock().unwrap().get(&n) {
            return found.clone();
        }
        let base = if n > 0 { &self.j_hat } else { &self.h_hat };
        let k = n.unsigned_abs() as usize;
        let dir: i64 = if n > 0 { 1 } else { -1 };
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::with_capacity(words.len() * base.len());
            for w in &words {
                for a in 0..base.len() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            words = next;
        }
        let gens: Vec<Polynomial> = words
            .iter()
            .map(|w| {
                let mut acc = Polynomial::one(&self.ring);
                for (s, &a) in w.iter().enumerate() {
                    let twisted = self
                        .sigma
                        .apply(&base[a], dir * s as i64)
                        .expect("same ring");
                    acc = acc.mul(&twisted);
                }
                acc
            })
            .collect();
        let ideal = Ideal::new(&self.ring, gens.clone()).expect("nonzero word generators");
        let data = Arc::new(WordComponent {
            degree: n,
            words,
            gens,
            ideal,
        });
        self.word_components
            .lock()
            .unwrap()
            .insert(n, data.clone());
        data
    }

    /// Membership of a raw degree-indexed part list in the algebra.
    pub fn contains_element(&self, parts: &[(i64, Polynomial)]) -> Result<bool, BRError> {
        for (n, p) in parts {
            if p.is_zero() {
                continue;
            }
            if !self.component(*n).contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Recognizes a generalized Weyl algebra structure: succeeds exactly when
    /// both H and J are principal, returning the base data with
    /// `a = sigma^-1(jh)` and the realizations `x = jt`, `y = sigma^-1(h)t^-1`
    /// after verifying the four defining relations by exact computation.
    pub fn is_gwa(self: &Arc<Self>) -> Option<GWAData> {
        let h = self.h.is_principal()?;
        let j = self.j.is_principal()?;
        let a = self.sigma.apply(&j.mul(&h), -1).expect("same ring");
        let x = GradedElement::new(self, vec![(1, j.clone())]).ok()?;
        let y_poly = self.sigma.apply(&h, -1).expect("same ring");
        let y = GradedElement::new(self, vec![(-1, y_poly)]).ok()?;
        // Exact relation checks: y*x = a, x*y = sigma(a), and the skew
        // commutation rules against every variable.
        let a_elt = GradedElement::new(self, vec![(0, a.clone())]).ok()?;
        let sa = self.sigma.apply(&a, 1).expect("same ring");
        let sa_elt = GradedElement::new(self, vec![(0, sa)]).ok()?;
        if y.multiply(&x).ok()? != a_elt || x.multiply(&y).ok()? != sa_elt {
            return None;
        }
        for i in 0..self.ring.num_vars() {
            let r = Polynomial::var(&self.ring, i);
            let r_elt = GradedElement::new(self, vec![(0, r.clone())]).ok()?;
            let sr = GradedElement::new(self, vec![(0, self.sigma.apply(&r, 1).ok()?)]).ok()?;
            let sir = GradedElement::new(self, vec![(0, self.sigma.apply(&r, -1).ok()?)]).ok()?;
            if x.multiply(&r_elt).ok()? != sr.multiply(&x).ok()? {
                return None;
            }
            if y.multiply(&r_elt).ok()? != sir.multiply(&y).ok()? {
                return None;
            }
        }
        Some(GWAData {
            base: self.ring.clone(),
            sigma: self.sigma.clone(),
            a,
            x_realization: x,
            y_realization: y,
        })
    }

    /// Decides centrality of `u` by exact commutation against the generating
    /// set: the variables in degree 0, `j_a t` for the declared generators of
    /// J, and `sigma^-1(h_b) t^-1` for the declared generators of H. On
    /// failure the first non-commuting generator is the witness.
    ///
    /// `sample_size` extra random elements (fixed-seed) are checked as a
    /// redundant cross-check; the generator test alone is decisive.
    pub fn is_central(
        self: &Arc<Self>,
        u: &GradedElement,
        sample_size: usize,
    ) -> Result<Centrality, BRError> {
        if u.algebra().as_ref() != self.as_ref() {
            return Err(BRError::ElementNotInAlgebra);
        }
        let mut gens: Vec<GradedElement> = vec![];
        for i in 0..self.ring.num_vars() {
            gens.push(GradedElement::new(
                self,
                vec![(0, Polynomial::var(&self.ring, i))],
            )?);
        }
        for j_a in self.j.gens().iter().filter(|g| !g.is_zero()) {
            gens.push(GradedElement::new(self, vec![(1, j_a.clone())])?);
        }
        for h_b in self.h.gens().iter().filter(|g| !g.is_zero()) {
            let back = self.sigma.apply(h_b, -1)?;
            gens.push(GradedElement::new(self, vec![(-1, back)])?);
        }
        for g in &gens {
            if u.multiply(g)? != g.multiply(u)? {
                return Ok(Centrality::NotCentral { witness: g.clone() });
            }
        }
        let mut rng = SplitMix64(0x5851_f42d_4c95_7f2d ^ sample_size as u64);
        for _ in 0..sample_size {
            let n = (rng.next() % 5) as i64 - 2;
            let basis = self.component(n);
            let basis = basis.reduced_basis();
            if basis.is_empty() {
                continue;
            }
            let gen = &basis[(rng.next() % basis.len() as u64) as usize];
            let mut mult = Polynomial::from_int(&self.ring, (rng.next() % 5) as i64 - 2);
            for i in 0..self.ring.num_vars() {
                let c = (rng.next() % 5) as i64 - 2;
                mult = mult.add(&Polynomial::var(&self.ring, i).scale(
                    &FieldElement::from_int(self.ring.field(), c),
                ));
            }
            let sample_poly = gen.mul(&mult);
            if sample_poly.is_zero() {
                continue;
            }
            let sample = GradedElement::new(self, vec![(n, sample_poly)])?;
            if u.multiply(&sample)? != sample.multiply(u)? {
                return Ok(Centrality::NotCentral { witness: sample });
            }
        }
        Ok(Centrality::Central)
    }

    /// Lifts a ring automorphism `phi` and a nonzero scalar `gamma` to the
    /// graded morphism `a t^n -> gamma^n phi(a) t^n`, after verifying that
    /// phi commutes with sigma on the variables and preserves H and J
    /// generator-wise.
    pub fn lift_automorphism(
        self: &Arc<Self>,
        phi: &RingAutomorphism,
        gamma: &FieldElement,
    ) -> Result<LiftedMorphism, BRError> {
        if phi.ring() != &self.ring {
            return Err(BRError::Poly(PolyError::RingMismatch));
        }
        if gamma.spec() != self.ring.field() {
            return Err(BRError::ConditionViolated {
                condition: "gamma lies in the coefficient field".to_string(),
                witness: gamma.to_string(),
            });
        }
        if gamma.is_zero() {
            return Err(BRError::ConditionViolated {
                condition: "gamma is nonzero".to_string(),
                witness: "0".to_string(),
            });
        }
        for i in 0..self.ring.num_vars() {
            let z = Polynomial::var(&self.ring, i);
            let ps = phi.apply(&self.sigma.apply(&z, 1)?, 1)?;
            let sp = self.sigma.apply(&phi.apply(&z, 1)?, 1)?;
            if ps != sp {
                return Err(BRError::ConditionViolated {
                    condition: "phi commutes with sigma".to_string(),
                    witness: self.ring.vars()[i].clone(),
                });
            }
        }
        for h_b in self.h.gens().iter().filter(|g| !g.is_zero()) {
            if !self.h.contains(&phi.apply(h_b, 1)?)? {
                return Err(BRError::ConditionViolated {
                    condition: "phi(H) is contained in H".to_string(),
                    witness: h_b.to_string(),
                });
            }
        }
        for j_a in self.j.gens().iter().filter(|g| !g.is_zero()) {
            if !self.j.contains(&phi.apply(j_a, 1)?)? {
                return Err(BRError::ConditionViolated {
                    condition: "phi(J) is contained in J".to_string(),
                    witness: j_a.to_string(),
                });
            }
        }
        Ok(LiftedMorphism {
            algebra: self.clone(),
            phi: phi.clone(),
            gamma: gamma.clone(),
        })
    }

    /// `(number of variables) + 1` when sigma is affine (every image has
    /// total degree <= 1); absent otherwise.
    pub fn gk_dimension(&self) -> Option<u64> {
        if self.sigma.is_affine() {
            Some(self.ring.num_vars() as u64 + 1)
        } else {
            None
        }
    }
}

/// Decision returned by [`BRAlgebra::is_central`].
#[derive(Debug, Clone, PartialEq)]
pub enum Centrality {
    Central,
    NotCentral { witness: GradedElement },
}

/// GWA presentation data returned by [`BRAlgebra::is_gwa`].
#[derive(Debug, Clone)]
pub struct GWAData {
    pub base: Arc<PolyRing>,
    pub sigma: RingAutomorphism,
    /// `a = sigma^-1(jh)` for the monic principal generators `(j) = J`,
    /// `(h) = H`.
    pub a: Polynomial,
    /// `x = jt`.
    pub x_realization: GradedElement,
    /// `y = sigma^-1(h) t^-1`.
    pub y_realization: GradedElement,
}

/// The graded morphism `a t^n -> gamma^n phi(a) t^n` of a verified lift.
#[derive(Debug, Clone)]
pub struct LiftedMorphism {
    algebra: Arc<BRAlgebra>,
    phi: RingAutomorphism,
    gamma: FieldElement,
}

impl LiftedMorphism {
    pub fn phi(&self) -> &RingAutomorphism {
        &self.phi
    }

    pub fn gamma(&self) -> &FieldElement {
        &self.gamma
    }

    pub fn apply(&self, u: &GradedElement) -> Result<GradedElement, BRError> {
        if u.algebra().as_ref() != self.algebra.as_ref() {
            return Err(BRError::ElementNotInAlgebra);
        }
        let mut parts = vec![];
        for (n, a) in u.parts() {
            let gamma_n = self.gamma.pow(*n).map_err(PolyError::from)?;
            let scaled = self.phi.apply(a, 1)?.scale(&gamma_n);
            parts.push((*n, scaled));
        }
        GradedElement::new(&self.algebra, parts)
    }
}

/// A homogeneous-sum element of B: finitely many nonzero parts `a t^n` with
/// `a` checked into `I^(n)` at construction.
#[derive(Debug, Clone)]
pub struct GradedElement {
    algebra: Arc<BRAlgebra>,
    parts: BTreeMap<i64, Polynomial>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.as_ref() == other.algebra.as_ref() && self.parts == other.parts
    }
}

impl GradedElement {
    /// Builds an element after checking each part into its component ideal.
    /// Duplicate degrees are summed; zero parts are dropped.
    pub fn new(
        algebra: &Arc<BRAlgebra>,
        parts: Vec<(i64, Polynomial)>,
    ) -> Result<Self, BRError> {
        let mut merged: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (n, p) in parts {
            if p.ring() != &algebra.ring {
                return Err(BRError::Poly(PolyError::RingMismatch));
            }
            match merged.remove(&n) {
                None => {
                    merged.insert(n, p);
                }
                Some(prev) => {
                    merged.insert(n, prev.add(&p));
                }
            }
        }
        merged.retain(|_, p| !p.is_zero());
        for (n, p) in &merged {
            if !algebra.component(*n).contains(p)? {
                return Err(BRError::NotInComponent {
                    degree: *n,
                    poly: p.to_string(),
                });
            }
        }
        Ok(GradedElement {
            algebra: algebra.clone(),
            parts: merged,
        })
    }

    /// Internal constructor for results of operations that preserve
    /// membership (sums, negation).
    fn unchecked(algebra: &Arc<BRAlgebra>, mut parts: BTreeMap<i64, Polynomial>) -> Self {
        parts.retain(|_, p| !p.is_zero());
        GradedElement {
            algebra: algebra.clone(),
            parts,
        }
    }

    pub fn zero(algebra: &Arc<BRAlgebra>) -> Self {
        GradedElement {
            algebra: algebra.clone(),
            parts: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<BRAlgebra> {
        &self.algebra
    }

    pub fn parts(&self) -> &BTreeMap<i64, Polynomial> {
        &self.parts
    }

    pub fn part(&self, n: i64) -> Option<&Polynomial> {
        self.parts.get(&n)
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.parts.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, other: &GradedElement) -> Result<GradedElement, BRError> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(BRError::AlgebraMismatch);
        }
        let mut parts = self.parts.clone();
        for (n, p) in &other.parts {
            match parts.remove(n) {
                None => {
                    parts.insert(*n, p.clone());
                }
                Some(prev) => {
                    parts.insert(*n, prev.add(p));
                }
            }
        }
        Ok(GradedElement::unchecked(&self.algebra, parts))
    }

    pub fn neg(&self) -> GradedElement {
        let parts = self
            .parts
            .iter()
            .map(|(n, p)| (*n, p.neg()))
            .collect();
        GradedElement::unchecked(&self.algebra, parts)
    }

    pub fn sub(&self, other: &GradedElement) -> Result<GradedElement, BRError> {
        self.add(&other.neg())
    }

    /// Skew product: parts `a t^n`, `b t^m` multiply to
    /// `a * sigma^n(b) t^(n+m)`. Membership of the result is re-checked
    /// through the public constructor (it is guaranteed by the component
    /// containment property, so a failure here would be an engine bug).
    pub fn multiply(&self, other: &GradedElement) -> Result<GradedElement, BRError> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(BRError::AlgebraMismatch);
        }
        let mut acc: Vec<(i64, Polynomial)> = vec![];
        for (n, a) in &self.parts {
            for (m, b) in &other.parts {
                let twisted = self.algebra.sigma.apply(b, *n)?;
                acc.push((n + m, a.mul(&twisted)));
            }
        }
        GradedElement::new(&self.algebra, acc)
    }
}

impl fmt::Display for GradedElement {
    /// Sum of `(<poly>)*t^<k>` terms in ascending degree; the `*t^0` suffix
    /// is omitted for the degree 0 part. The zero element prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .parts
            .iter()
            .map(|(n, p)| {
                if *n == 0 {
                    format!("({})", p)
                } else {
                    format!("({})*t^{}", p, n)
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Parses the graded-element syntax: a `+`/`-` separated sum of terms, each
/// `(<poly>)*t^<k>`, a bare `t`/`t^<k>` (coefficient 1), or a plain
/// polynomial (degree 0). Equal-degree terms are summed; membership is
/// checked through the element constructor.
pub fn parse_graded_element(
    algebra: &Arc<BRAlgebra>,
    text: &str,
) -> Result<GradedElement, BRError> {
    let mut segments: Vec<(bool, String)> = vec![];
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut cur_neg = false;
    let mut prev_meaningful: Option<char> = None;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sep = (ch == '+' || ch == '-')
            && depth == 0
            && matches!(prev_meaningful, Some(c) if c.is_alphanumeric() || c == ')');
        if is_sep {
            if !cur.trim().is_empty() {
                segments.push((cur_neg, cur.trim().to_string()));
            }
            cur = String::new();
            cur_neg = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_meaningful = Some(ch);
        }
    }
    if depth != 0 {
        return Err(BRError::Poly(PolyError::Parse {
            pos: text.len(),
            msg: "unbalanced parentheses".to_string(),
        }));
    }
    if !cur.trim().is_empty() {
        segments.push((cur_neg, cur.trim().to_string()));
    }
    let mut parts: Vec<(i64, Polynomial)> = vec![];
    for (negated, seg) in segments {
        let (degree, poly_text) = split_t_power(&seg)?;
        let mut poly = parse_polynomial(algebra.ring(), &poly_text)?;
        if negated {
            poly = poly.neg();
        }
        parts.push((degree, poly));
    }
    GradedElement::new(algebra, parts)
}

/// Splits one term into (degree, coefficient text): handles `t`, `t^k`,
/// `<poly>*t`, `<poly>*t^k` (the `t` marker at depth 0 only) and plain
/// degree 0 polynomials.
fn split_t_power(seg: &str) -> Result<(i64, String), BRError> {
    let s = seg.trim();
    let bad = |msg: &str| {
        BRError::Poly(PolyError::Parse {
            pos: 0,
            msg: msg.to_string(),
        })
    };
    let parse_power = |txt: &str| -> Result<i64, BRError> {
        txt.trim()
            .parse::<i64>()
            .map_err(|_| bad(&format!("invalid t exponent: {}", txt.trim())))
    };
    if s == "t" {
        return Ok((1, "1".to_string()));
    }
    if let Some(rest) = s.strip_prefix("t^") {
        return Ok((parse_power(rest)?, "1".to_string()));
    }
    // Scan for a depth 0 `*t` followed by end or `^`.
    let chars: Vec<char> = s.chars().collect();
    let mut depth = 0i32;
    for i in 0..chars.len() {
        match chars[i] {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                let rest: String = chars[i + 1..].iter().collect();
                let rest = rest.trim_start();
                if rest == "t" {
                    let coeff: String = chars[..i].iter().collect();
                    return Ok((1, coeff.trim().to_string()));
                }
                if let Some(pow) = rest.strip_prefix("t^") {
                    let coeff: String = chars[..i].iter().collect();
                    return Ok((parse_power(pow)?, coeff.trim().to_string()));
                }
            }
            _ => {}
        }
    }
    Ok((0, s.to_string()))
}

/// Deterministic 64-bit generator for internal sampling (fixed seeds only).
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_scalar;
    use crate::scalars::FieldSpec;

    /// QQ[z], sigma(z) = z - 1, J = (z), H = (1).
    fn shift_algebra() -> Arc<BRAlgebra> {
        let ring = PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "z - 1").unwrap()],
            vec![parse_polynomial(&ring, "z + 1").unwrap()],
        )
        .unwrap();
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z").unwrap()]).unwrap();
        let h = Ideal::unit(&ring);
        BRAlgebra::new(&ring, sigma, h, j).unwrap()
    }

    /// The cyclotomic 3-orbit algebra: sigma(z1) = q z1, sigma(z2) = q^2 z2,
    /// J = (z1-1, z2-1), H = (z1-q^2, z2-q).
    fn cyclotomic_algebra() -> Arc<BRAlgebra> {
        let field = FieldSpec::cyclotomic(3).unwrap();
        let ring = PolyRing::new(field, &["z1", "z2"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![
                parse_polynomial(&ring, "q*z1").unwrap(),
                parse_polynomial(&ring, "q^2*z2").unwrap(),
            ],
            vec![
                parse_polynomial(&ring, "q^2*z1").unwrap(),
                parse_polynomial(&ring, "q*z2").unwrap(),
            ],
        )
        .unwrap();
        let j = Ideal::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z1 - 1").unwrap(),
                parse_polynomial(&ring, "z2 - 1").unwrap(),
            ],
        )
        .unwrap();
        let h = Ideal::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z1 - q^2").unwrap(),
                parse_polynomial(&ring, "z2 - q").unwrap(),
            ],
        )
        .unwrap();
        BRAlgebra::new(&ring, sigma, h, j).unwrap()
    }

    /// sigma(z1) = z1 - 1, sigma(z2) = z2 + 1, H = (z1-1, z2+1), J = (1).
    fn translation_algebra() -> Arc<BRAlgebra> {
        let ring = PolyRing::new(FieldSpec::rationals(), &["z1", "z2"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z1 - 1").unwrap(),
                parse_polynomial(&ring, "z2 + 1").unwrap(),
            ],
            vec![
                parse_polynomial(&ring, "z1 + 1").unwrap(),
                parse_polynomial(&ring, "z2 - 1").unwrap(),
            ],
        )
        .unwrap();
        let h = Ideal::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z1 - 1").unwrap(),
                parse_polynomial(&ring, "z2 + 1").unwrap(),
            ],
        )
        .unwrap();
        let j = Ideal::unit(&ring);
        BRAlgebra::new(&ring, sigma, h, j).unwrap()
    }

    #[test]
    fn component_zero_is_unit() {
        assert!(shift_algebra().component(0).is_unit());
        assert!(cyclotomic_algebra().component(0).is_unit());
    }

    #[test]
    fn shift_component_two() {
        let b = shift_algebra();
        let ring = b.ring().clone();
        let expected =
            Ideal::new(&ring, vec![parse_polynomial(&ring, "z^2 - z").unwrap()]).unwrap();
        assert_eq!(b.component(2), expected);
        // H = (1): all negative components are the unit ideal.
        for n in 1..=4 {
            assert!(b.component(-n).is_unit());
        }
    }

    #[test]
    fn skew_product_shift() {
        let b = shift_algebra();
        let ring = b.ring().clone();
        let z = parse_polynomial(&ring, "z").unwrap();
        let zt = GradedElement::new(&b, vec![(1, z)]).unwrap();
        let sq = zt.multiply(&zt).unwrap();
        assert_eq!(sq.degrees(), vec![2]);
        assert_eq!(
            sq.part(2).unwrap(),
            &parse_polynomial(&ring, "z^2 - z").unwrap()
        );
        assert!(b.component(2).contains(sq.part(2).unwrap()).unwrap());
    }

    #[test]
    fn skew_product_cyclotomic() {
        let b = cyclotomic_algebra();
        let ring = b.ring().clone();
        let up = GradedElement::new(&b, vec![(1, parse_polynomial(&ring, "z1 - 1").unwrap())])
            .unwrap();
        let down = GradedElement::new(
            &b,
            vec![(-1, parse_polynomial(&ring, "z1 - 1").unwrap())],
        )
        .unwrap();
        let prod = up.multiply(&down).unwrap();
        assert_eq!(
            prod.part(0).unwrap(),
            &parse_polynomial(&ring, "(z1 - 1)*(q*z1 - 1)").unwrap()
        );
        // Degree 0 by degree 0 is the plain commutative product.
        let f = GradedElement::new(&b, vec![(0, parse_polynomial(&ring, "z1 + z2").unwrap())])
            .unwrap();
        let g = GradedElement::new(&b, vec![(0, parse_polynomial(&ring, "z1 - z2").unwrap())])
            .unwrap();
        assert_eq!(
            f.multiply(&g).unwrap().part(0).unwrap(),
            &parse_polynomial(&ring, "z1^2 - z2^2").unwrap()
        );
    }

    #[test]
    fn membership_checks() {
        let b = shift_algebra();
        let ring = b.ring().clone();
        let z = parse_polynomial(&ring, "z").unwrap();
        let one = Polynomial::one(&ring);
        assert!(b.contains_element(&[(1, z)]).unwrap());
        assert!(!b.contains_element(&[(1, one.clone())]).unwrap());
        assert!(matches!(
            GradedElement::new(&b, vec![(1, one)]),
            Err(BRError::NotInComponent { degree: 1, .. })
        ));
        let c = cyclotomic_algebra();
        let cring = c.ring().clone();
        // (z1-1)(z2-q) is an R-multiple of the generator z1-1, so it lies in
        // J; (z1-q)(z2-q) does not vanish at (1,1), so it does not.
        let member = parse_polynomial(&cring, "(z1 - 1)*(z2 - q)").unwrap();
        assert!(c.contains_element(&[(1, member)]).unwrap());
        let non_member = parse_polynomial(&cring, "(z1 - q)*(z2 - q)").unwrap();
        assert!(!c.contains_element(&[(1, non_member)]).unwrap());
    }

    #[test]
    fn word_components_generate_the_component() {
        let b = cyclotomic_algebra();
        for n in [-2i64, -1, 1, 2] {
            let w = b.word_component(n);
            assert_eq!(w.words.len(), 2usize.pow(n.unsigned_abs() as u32));
            assert_eq!(w.gens.len(), w.words.len());
            assert_eq!(w.ideal, b.component(n));
        }
    }

    #[test]
    fn gwa_recognition() {
        // J = (z1), H = (1), sigma(z_i) = z_i - 1: a = sigma^-1(z1) = z1 + 1.
        let ring = PolyRing::new(FieldSpec::rationals(), &["z1", "z2"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z1 - 1").unwrap(),
                parse_polynomial(&ring, "z2 - 1").unwrap(),
            ],
            vec![
                parse_polynomial(&ring, "z1 + 1").unwrap(),
                parse_polynomial(&ring, "z2 + 1").unwrap(),
            ],
        )
        .unwrap();
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z1").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let gwa = b.is_gwa().expect("principal H and J");
        assert_eq!(gwa.a, parse_polynomial(&ring, "z1 + 1").unwrap());
        // Non-principal H: no GWA structure.
        assert!(translation_algebra().is_gwa().is_none());
        assert!(cyclotomic_algebra().is_gwa().is_none());
    }

    #[test]
    fn gwa_trivial_ideals() {
        let b = shift_algebra();
        // H = (1), J = (z): a = sigma^-1(z * 1) = z + 1.
        let gwa = b.is_gwa().unwrap();
        assert_eq!(gwa.a, parse_polynomial(b.ring(), "z + 1").unwrap());
    }

    #[test]
    fn centrality_decisions() {
        let b = translation_algebra();
        let ring = b.ring().clone();
        let u = GradedElement::new(&b, vec![(0, parse_polynomial(&ring, "z1 + z2").unwrap())])
            .unwrap();
        assert_eq!(b.is_central(&u, 8).unwrap(), Centrality::Central);

        let c = cyclotomic_algebra();
        let cring = c.ring().clone();
        let z1 = GradedElement::new(&c, vec![(0, parse_polynomial(&cring, "z1").unwrap())])
            .unwrap();
        match c.is_central(&z1, 8).unwrap() {
            Centrality::NotCentral { witness } => {
                assert_eq!(witness.to_string(), "(z1 - 1)*t^1");
            }
            Centrality::Central => panic!("z1 must not be central"),
        }
        let central_cube = GradedElement::new(
            &c,
            vec![(3, parse_polynomial(&cring, "z1^3 - 1").unwrap())],
        )
        .unwrap();
        assert_eq!(c.is_central(&central_cube, 8).unwrap(), Centrality::Central);
    }

    #[test]
    fn lift_verifies_conditions() {
        // sigma(z) = q z over the cyclotomic field; phi(z) = -z commutes with
        // sigma and preserves J = (z^2 - 1); gamma = -1.
        let field = FieldSpec::cyclotomic(3).unwrap();
        let ring = PolyRing::new(field, &["z"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "q*z").unwrap()],
            vec![parse_polynomial(&ring, "q^2*z").unwrap()],
        )
        .unwrap();
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z^2 - 1").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let phi = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "-z").unwrap()],
            vec![parse_polynomial(&ring, "-z").unwrap()],
        )
        .unwrap();
        let gamma = parse_scalar(field, "-1").unwrap();
        let lift = b.lift_automorphism(&phi, &gamma).unwrap();
        let u = GradedElement::new(
            &b,
            vec![(1, parse_polynomial(&ring, "z^2 - 1").unwrap())],
        )
        .unwrap();
        // phi(z^2 - 1) = z^2 - 1 and gamma^1 = -1.
        let image = lift.apply(&u).unwrap();
        assert_eq!(
            image.part(1).unwrap(),
            &parse_polynomial(&ring, "1 - z^2").unwrap()
        );
        // Identity lift with gamma = 1 is the identity.
        let id = RingAutomorphism::identity(&ring);
        let lift_id = b
            .lift_automorphism(&id, &FieldElement::one(field))
            .unwrap();
        assert_eq!(lift_id.apply(&u).unwrap(), u);
    }

    #[test]
    fn lift_rejects_unpreserved_ideals() {
        let ring = PolyRing::new(FieldSpec::rationals(), &["z1", "z2"]).unwrap();
        let sigma = RingAutomorphism::identity(&ring);
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z1").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let swap = RingAutomorphism::new(
            &ring,
            vec![
                parse_polynomial(&ring, "z2").unwrap(),
                parse_polynomial(&ring, "z1").unwrap(),
            ],
            vec![
                parse_polynomial(&ring, "z2").unwrap(),
                parse_polynomial(&ring, "z1").unwrap(),
            ],
        )
        .unwrap();
        let err = b
            .lift_automorphism(&swap, &FieldElement::one(FieldSpec::rationals()))
            .unwrap_err();
        match err {
            BRError::ConditionViolated { condition, witness } => {
                assert!(condition.contains("phi(J)"));
                assert_eq!(witness, "z1");
            }
            other => panic!("unexpected error: {other:?}"),
        }
        // gamma = 0 is rejected.
        let id = RingAutomorphism::identity(&ring);
        assert!(matches!(
            b.lift_automorphism(&id, &FieldElement::zero(FieldSpec::rationals())),
            Err(BRError::ConditionViolated { .. })
        ));
    }

    #[test]
    fn gk_dimension_formula() {
        assert_eq!(translation_algebra().gk_dimension(), Some(3));
        assert_eq!(cyclotomic_algebra().gk_dimension(), Some(3));
        assert_eq!(shift_algebra().gk_dimension(), Some(2));
        // R = k (no variables): dimension 1.
        let ring = PolyRing::new(FieldSpec::rationals(), &[]).unwrap();
        let sigma = RingAutomorphism::identity(&ring);
        let b =
            BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), Ideal::unit(&ring)).unwrap();
        assert_eq!(b.gk_dimension(), Some(1));
        // Non-affine sigma: no formula.
        let ring2 = PolyRing::new(FieldSpec::rationals(), &["u", "v"]).unwrap();
        let tri = RingAutomorphism::new(
            &ring2,
            vec![
                parse_polynomial(&ring2, "u").unwrap(),
                parse_polynomial(&ring2, "v + u^2").unwrap(),
            ],
            vec![
                parse_polynomial(&ring2, "u").unwrap(),
                parse_polynomial(&ring2, "v - u^2").unwrap(),
            ],
        )
        .unwrap();
        let b2 =
            BRAlgebra::new(&ring2, tri, Ideal::unit(&ring2), Ideal::unit(&ring2)).unwrap();
        assert_eq!(b2.gk_dimension(), None);
    }

    #[test]
    fn graded_element_text_round_trip() {
        let b = cyclotomic_algebra();
        let ring = b.ring().clone();
        let e = GradedElement::new(
            &b,
            vec![
                (-1, parse_polynomial(&ring, "z1 - 1").unwrap()),
                (0, parse_polynomial(&ring, "z1*z2").unwrap()),
                (2, parse_polynomial(&ring, "(z1 - 1)*(q*z1 - 1)").unwrap()),
            ],
        )
        .unwrap();
        let text = e.to_string();
        let back = parse_graded_element(&b, &text).unwrap();
        assert_eq!(back, e);

        // Tolerant inputs: bare t powers and unparenthesized polynomials.
        let zt = parse_graded_element(&shift_algebra(), "z*t").unwrap();
        assert_eq!(zt.degrees(), vec![1]);
        let low = parse_graded_element(&b, "(z1 - 1)*t^-1").unwrap();
        assert_eq!(low.degrees(), vec![-1]);
        let zero = parse_graded_element(&b, "(z1 - 1) - (z1 - 1)").unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");
        // Membership failures surface as component errors.
        assert!(matches!(
            parse_graded_element(&shift_algebra(), "t"),
            Err(BRError::NotInComponent { degree: 1, .. })
        ));
    }

    #[test]
    fn addition_and_negation() {
        let b = shift_algebra();
        let ring = b.ring().clone();
        let zt = GradedElement::new(&b, vec![(1, parse_polynomial(&ring, "z").unwrap())])
            .unwrap();
        let one = GradedElement::new(&b, vec![(0, Polynomial::one(&ring))]).unwrap();
        let s = zt.add(&one).unwrap();
        assert_eq!(s.degrees(), vec![0, 1]);
        assert!(s.sub(&s).unwrap().is_zero());
        assert_eq!(s.neg().neg(), s);
    }
}
