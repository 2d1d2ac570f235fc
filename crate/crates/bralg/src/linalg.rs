//! Exact dense linear algebra over a [`FieldSpec`]: matrices, row-space
//! closures, univariate polynomials, minimal polynomials, invariant factors
//! of the characteristic matrix (for conjugacy testing) and irreducibility
//! tests used by the simplicity decision.

// Index loops below mirror the row/column arithmetic they implement.
#![allow(clippy::needless_range_loop)]

use crate::polyring::{parse_scalar, PolyError};
use crate::scalars::{FieldElement, FieldSpec};
use num::{BigInt, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// A dense row-major matrix over one of the exact fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| x.spec() != spec) {
            return Err(LinalgError::Dimension("mixed scalar fields".to_string()));
        }
        Ok(Matrix {
            spec,
            rows,
            cols,
            data,
        })
    }

    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            spec,
            rows,
            cols,
            data: vec![FieldElement::zero(spec); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(spec, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = FieldElement::one(spec);
        }
        m
    }

    pub fn scalar(spec: FieldSpec, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zero(spec, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = c.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial.
    pub fn companion(f: &UPoly) -> Result<Self, LinalgError> {
        let n = f.degree().ok_or_else(|| {
            LinalgError::Dimension("companion matrix of the zero polynomial".to_string())
        })?;
        if n == 0 {
            return Err(LinalgError::Dimension(
                "companion matrix needs degree >= 1".to_string(),
            ));
        }
        let f = f.monic();
        let mut m = Self::zero(f.spec, n, n);
        for i in 1..n {
            *m.at_mut(i, i - 1) = FieldElement::one(f.spec);
        }
        for i in 0..n {
            *m.at_mut(i, n - 1) = f.coeffs[i].neg();
        }
        Ok(m)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols || self.spec != other.spec {
            return Err(LinalgError::Dimension("add shape mismatch".to_string()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b).expect("same field"))
            .collect();
        Ok(Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&FieldElement::from_int(self.spec, -1)))
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c).expect("same field")).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows || self.spec != other.spec {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b).expect("same field");
                    let cur = out.at(i, j).add(&prod).expect("same field");
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product (column vector).
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![FieldElement::zero(self.spec); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v[j]).expect("same field")).expect("same field");
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse; `None` for singular or non-square input.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.spec, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.at(col, col).clone();
            let pinv = p.inv().ok()?;
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j).mul(&pinv).unwrap();
                *inv.at_mut(col, j) = inv.at(col, j).mul(&pinv).unwrap();
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let t = a.at(col, j).mul(&factor).unwrap();
                    *a.at_mut(r, j) = a.at(r, j).sub(&t).unwrap();
                    let t2 = inv.at(col, j).mul(&factor).unwrap();
                    *inv.at_mut(r, j) = inv.at(r, j).sub(&t2).unwrap();
                }
            }
        }
        Some(inv)
    }

    pub fn flatten(&self) -> Vec<FieldElement> {
        self.data.clone()
    }
}

impl fmt::Display for Matrix {
    /// Rows separated by `;`, entries by `,`: `0,-1;1,-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Parses the `a,b;c,d` matrix syntax. Empty text is the 0x0 matrix.
pub fn parse_matrix(spec: FieldSpec, s: &str) -> Result<Matrix, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Matrix::zero(spec, 0, 0));
    }
    let mut data = vec![];
    let mut cols = None;
    let row_strs: Vec<&str> = s.split(';').collect();
    for row in &row_strs {
        let entries: Vec<&str> = row.split(',').collect();
        match cols {
            None => cols = Some(entries.len()),
            Some(c) if c != entries.len() => {
                return Err(PolyError::Parse {
                    pos: 0,
                    msg: "ragged matrix rows".to_string(),
                })
            }
            _ => {}
        }
        for e in entries {
            data.push(parse_scalar(spec, e)?);
        }
    }
    Ok(Matrix::new(spec, row_strs.len(), cols.unwrap(), data).expect("shape checked"))
}

/// Parses a comma-separated vector of scalars. Empty text is the empty vector.
pub fn parse_vector(spec: FieldSpec, s: &str) -> Result<Vec<FieldElement>, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|e| parse_scalar(spec, e)).collect()
}

pub fn format_vector(v: &[FieldElement]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// Row spaces (echelonized spans with membership)
// ---------------------------------------------------------------------------

/// A subspace of `k^n` kept as a reduced row-echelon basis; supports
/// incremental insertion and membership. Deterministic: rows are ordered by
/// pivot column.
#[derive(Debug, Clone)]
pub struct RowSpace {
    spec: FieldSpec,
    width: usize,
    /// (pivot column, row) sorted by pivot column; pivots are 1 and cleared
    /// in all other rows.
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl RowSpace {
    pub fn new(spec: FieldSpec, width: usize) -> Self {
        RowSpace {
            spec,
            width,
            rows: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce_vec(&self, v: &mut [FieldElement]) {
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..self.width {
                if row[j].is_zero() {
                    continue;
                }
                let t = row[j].mul(&c).unwrap();
                v[j] = v[j].sub(&t).unwrap();
            }
        }
    }

    /// Inserts a vector; returns true when the dimension grew.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.width);
        debug_assert!(v.iter().all(|x| x.spec() == self.spec));
        let mut v = v.to_vec();
        self.reduce_vec(&mut v);
        let pivot = match v.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let pinv = v[pivot].inv().unwrap();
        for x in v.iter_mut() {
            *x = x.mul(&pinv).unwrap();
        }
        // Clear the new pivot column from existing rows to keep RREF.
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..v.len() {
                if v[j].is_zero() {
                    continue;
                }
                let t = v[j].mul(&c).unwrap();
                row[j] = row[j].sub(&t).unwrap();
            }
        }
        let at = self
            .rows
            .binary_search_by(|(p, _)| p.cmp(&pivot))
            .unwrap_err();
        self.rows.insert(at, (pivot, v));
        true
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        self.reduce_vec(&mut v);
        v.iter().all(|x| x.is_zero())
    }

    /// The canonical (RREF) basis rows.
    pub fn basis(&self) -> Vec<Vec<FieldElement>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials over a field
// ---------------------------------------------------------------------------

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UPoly {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { spec, coeffs }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        UPoly {
            spec,
            coeffs: vec![],
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        UPoly::new(spec, vec![FieldElement::one(spec)])
    }

    pub fn x(spec: FieldSpec) -> Self {
        UPoly::new(
            spec,
            vec![FieldElement::zero(spec), FieldElement::one(spec)],
        )
    }

    pub fn from_ints(spec: FieldSpec, coeffs: &[i64]) -> Self {
        UPoly::new(
            spec,
            coeffs.iter().map(|&c| FieldElement::from_int(spec, c)).collect(),
        )
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                UPoly::new(
                    self.spec,
                    self.coeffs.iter().map(|c| c.mul(&inv).unwrap()).collect(),
                )
            }
        }
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![FieldElement::zero(self.spec); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].add(c).unwrap();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i].add(c).unwrap();
        }
        UPoly::new(self.spec, out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&FieldElement::from_int(self.spec, -1)))
    }

    pub fn scale(&self, c: &FieldElement) -> UPoly {
        UPoly::new(
            self.spec,
            self.coeffs.iter().map(|x| x.mul(c).unwrap()).collect(),
        )
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.spec);
        }
        let mut out =
            vec![FieldElement::zero(self.spec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b).unwrap()).unwrap();
            }
        }
        UPoly::new(self.spec, out)
    }

    pub fn divrem(&self, den: &UPoly) -> (UPoly, UPoly) {
        let dd = den.degree().expect("division by zero polynomial");
        let lc_inv = den.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(self.spec), self.clone());
        }
        let mut quot = vec![FieldElement::zero(self.spec); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lc_inv).unwrap();
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (j, dj) in den.coeffs.iter().enumerate() {
                let t = c.mul(dj).unwrap();
                rem[k + j] = rem[k + j].sub(&t).unwrap();
            }
        }
        (UPoly::new(self.spec, quot), UPoly::new(self.spec, rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn evaluate(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(self.spec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).unwrap().add(c).unwrap();
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, e: u64, m: &UPoly) -> UPoly {
        let mut acc = UPoly::one(self.spec);
        let (_, mut base) = self.divrem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divrem(m).1;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).divrem(m).1;
            }
        }
        acc
    }
}

impl fmt::Display for UPoly {
    /// Prints in the scalar expression syntax with variable `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let neg = s.starts_with('-') && crate::scalars::displays_atomically(c);
            let mag = if neg { c.neg().to_string() } else { s };
            let atom = crate::scalars::displays_atomically(c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{}", i),
            };
            let coeff_part = if var.is_empty() {
                mag
            } else if mag == "1" {
                String::new()
            } else if atom {
                format!("{}*", mag)
            } else {
                format!("({})*", mag)
            };
            out.push_str(&coeff_part);
            out.push_str(&var);
        }
        write!(f, "{}", out)
    }
}

// ---------------------------------------------------------------------------
// Minimal polynomial and invariant factors
// ---------------------------------------------------------------------------

/// Minimal polynomial of a square matrix: the least monic relation among the
/// flattened powers `I, L, L^2, ...`, found by echelon reduction with
/// combination tracking.
pub fn minimal_polynomial(l: &Matrix) -> UPoly {
    assert!(l.is_square());
    let spec = l.spec();
    let n = l.rows();
    let width = n * n;
    let mut space = RowSpace::new(spec, width);
    // rows[r] stores the combination over powers for the r-th stored basis row.
    let mut combos: Vec<Vec<FieldElement>> = vec![];
    let mut power = Matrix::identity(spec, n);
    for k in 0.. {
        let mut v = power.flatten();
        let mut combo = vec![FieldElement::zero(spec); k + 1];
        combo[k] = FieldElement::one(spec);
        // Reduce v against the stored rows, mirroring on the combination.
        for (ri, (pivot, row)) in space.rows.iter().enumerate() {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..width {
                if row[j].is_zero() {
                    continue;
                }
                let t = row[j].mul(&c).unwrap();
                v[j] = v[j].sub(&t).unwrap();
            }
            for (j, rc) in combos[ri].iter().enumerate() {
                if rc.is_zero() {
                    continue;
                }
                let t = rc.mul(&c).unwrap();
                combo[j] = combo[j].sub(&t).unwrap();
            }
        }
        let pivot = v.iter().position(|x| !x.is_zero());
        match pivot {
            None => {
                // combo gives sum combo[j] * L^j = 0, monic in degree k.
                return UPoly::new(spec, combo);
            }
            Some(p) => {
                let pinv = v[p].inv().unwrap();
                for x in v.iter_mut() {
                    *x = x.mul(&pinv).unwrap();
                }
                let combo: Vec<FieldElement> =
                    combo.iter().map(|c| c.mul(&pinv).unwrap()).collect();
                let at = space
                    .rows
                    .binary_search_by(|(q, _)| q.cmp(&p))
                    .unwrap_err();
                space.rows.insert(at, (p, v));
                combos.insert(at, combo);
            }
        }
        power = power.mul(l).unwrap();
    }
    unreachable!("a relation exists by degree n^2")
}

/// Nonconstant invariant factors of `xI - A`, monic, in ascending
/// divisibility order. Two square matrices over the same field are conjugate
/// iff these lists coincide (rational canonical form).
pub fn invariant_factors(a: &Matrix) -> Vec<UPoly> {
    assert!(a.is_square());
    let spec = a.spec();
    let n = a.rows();
    // Build xI - A over k[x].
    let mut m: Vec<Vec<UPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = UPoly::new(spec, vec![a.at(i, j).neg()]);
                    if i == j {
                        c.add(&UPoly::x(spec))
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut factors = vec![];
    let mut t = 0;
    while t < n {
        // Find the nonzero entry of minimal degree in the trailing block.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if let Some(d) = m[i][j].degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        let (_, bi, bj) = match best {
            None => break,
            Some(b) => b,
        };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        // Clear row and column by division with remainder; a nonzero
        // remainder strictly drops the minimal degree, so this terminates.
        let mut dirty = false;
        for i in t + 1..n {
            if m[i][t].is_zero() {
                continue;
            }
            let (q, _) = m[i][t].divrem(&m[t][t]);
            for j in t..n {
                let sub = q.mul(&m[t][j]);
                m[i][j] = m[i][j].sub(&sub);
            }
            if !m[i][t].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..n {
            if m[t][j].is_zero() {
                continue;
            }
            let (q, _) = m[t][j].divrem(&m[t][t]);
            for i in t..n {
                let sub = q.mul(&m[i][t]);
                m[i][j] = m[i][j].sub(&sub);
            }
            if !m[t][j].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Pivot divides every remaining entry? If not, merge the offending
        // row into row t and repeat.
        let mut offender = None;
        'scan: for i in t + 1..n {
            for j in t + 1..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let (_, r) = m[i][j].divrem(&m[t][t]);
                if !r.is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            for j in t..n {
                let add = m[i][j].clone();
                m[t][j] = m[t][j].add(&add);
            }
            continue;
        }
        m[t][t] = m[t][t].monic();
        factors.push(m[t][t].clone());
        t += 1;
    }
    factors.retain(|f| f.degree().is_some_and(|d| d >= 1));
    factors
}

// ---------------------------------------------------------------------------
// Irreducibility
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// With a witness description of the factor found.
    Reducible(String),
    Unknown(String),
}

/// Decides irreducibility of a monic polynomial where an exact decision is
/// available: complete over `F_p`; over `QQ` by the rational-root test for
/// degrees 2-3 and by reduction modulo small primes for higher degrees
/// (irreducible mod p implies irreducible over `QQ`, the converse direction
/// stays `Unknown`). Cyclotomic coefficient fields report `Unknown`.
pub fn is_irreducible(f: &UPoly) -> Irreducibility {
    let deg = match f.degree() {
        None | Some(0) => return Irreducibility::Reducible("constant polynomial".to_string()),
        Some(1) => return Irreducibility::Irreducible,
        Some(d) => d,
    };
    let spec = f.spec();
    if let Some(p) = spec.prime_modulus() {
        return if fp_irreducible(f, p) {
            Irreducibility::Irreducible
        } else {
            Irreducibility::Reducible(format!("reducible over F_{}", p))
        };
    }
    if spec.is_rationals() {
        if deg <= 3 {
            // Irreducible iff no rational root.
            return match rational_root(f) {
                Some(r) => Irreducibility::Reducible(format!("rational root {}", r)),
                None => Irreducibility::Irreducible,
            };
        }
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            match reduce_mod_p(f, p) {
                None => continue,
                Some(fp) => {
                    if fp.degree() == Some(deg) && fp_irreducible(&fp, p) {
                        return Irreducibility::Irreducible;
                    }
                }
            }
        }
        return Irreducibility::Unknown(
            "no small-prime irreducibility certificate found".to_string(),
        );
    }
    Irreducibility::Unknown("irreducibility over cyclotomic fields is not decided".to_string())
}

/// Complete irreducibility test over `F_p`: `f` of degree `n` is irreducible
/// iff `x^(p^n) = x (mod f)` and `gcd(x^(p^(n/l)) - x, f) = 1` for every
/// prime `l | n`.
fn fp_irreducible(f: &UPoly, p: u64) -> bool {
    let f = f.monic();
    let n = f.degree().unwrap();
    let spec = f.spec();
    let x = UPoly::x(spec);
    // frob[i] = x^(p^i) mod f.
    let mut frob = vec![x.clone()];
    for _ in 0..n {
        let next = frob.last().unwrap().pow_mod(p, &f);
        frob.push(next);
    }
    if frob[n].sub(&x).divrem(&f).1 != UPoly::zero(spec) {
        return false;
    }
    let mut m = n;
    let mut primes = vec![];
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let g = frob[n / l].sub(&x).gcd(&f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Finds a rational root of a monic polynomial over `QQ`, if any, by clearing
/// denominators and testing divisor candidates of the constant and leading
/// integer coefficients.
fn rational_root(f: &UPoly) -> Option<FieldElement> {
    let spec = f.spec();
    let rat = |x: &FieldElement| x.as_rational().unwrap().clone();
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        let den = rat(c).denom().clone();
        let g = num::integer::gcd(lcm.clone(), den.clone());
        lcm = lcm / g * den;
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = rat(c) * num::BigRational::from_integer(lcm.clone());
            assert!(r.is_integer());
            r.to_integer()
        })
        .collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    if a0.is_zero() {
        return Some(FieldElement::zero(spec));
    }
    let divisors = |v: &BigInt| -> Vec<BigInt> {
        let v = v.abs();
        let mut out = vec![];
        let mut d = BigInt::one();
        // Candidate divisors up to |v|; desk-scale inputs only.
        while &d * &d <= v {
            if (&v % &d).is_zero() {
                out.push(d.clone());
                out.push(&v / &d);
            }
            d += 1;
        }
        out.sort();
        out.dedup();
        out
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = num::BigRational::new(&p * BigInt::from(sign), q.clone());
                let mut acc = num::BigRational::zero();
                for c in ints.iter().rev() {
                    acc = acc * &cand + num::BigRational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    let parsed = crate::polyring::parse_scalar(
                        spec,
                        &format!("{}/{}", cand.numer(), cand.denom()),
                    )
                    .unwrap();
                    return Some(parsed);
                }
            }
        }
    }
    None
}

/// Reduces a rational polynomial mod `p`; `None` when `p` divides a
/// denominator.
fn reduce_mod_p(f: &UPoly, p: u64) -> Option<UPoly> {
    let spec = FieldSpec::prime(p).ok()?;
    let pb = BigInt::from(p);
    let mut coeffs = vec![];
    for c in f.coeffs() {
        let r = c.as_rational().unwrap();
        if (r.denom() % &pb).is_zero() {
            return None;
        }
        let num_mod = ((r.numer() % &pb) + &pb) % &pb;
        let den_mod = ((r.denom() % &pb) + &pb) % &pb;
        let num_fe = FieldElement::from_int(spec, i64::try_from(num_mod).unwrap());
        let den_fe = FieldElement::from_int(spec, i64::try_from(den_mod).unwrap());
        coeffs.push(num_fe.div(&den_fe).unwrap());
    }
    Some(UPoly::new(spec, coeffs))
}
