//! Rational points of Maxspec(R), the sigma-action on points, orbit views
//! (finite-cyclic detection and integer windows), S(B) membership and break
//! detection, and the non-simplicity witness module construction.

use crate::bralgebra::BRAlgebra;
use crate::polyring::{parse_scalar, Ideal, PolyError, PolyRing, Polynomial, RingAutomorphism};
use crate::scalars::FieldElement;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("point has {got} coordinates but the ring has {expected} variables")]
    CoordCount { expected: usize, got: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A rational point of Maxspec(R): the maximal ideal
/// `m_p = (z_1 - p_1, ..., z_m - p_m)` stored by its coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    ring: Arc<PolyRing>,
    coords: Vec<FieldElement>,
}

impl OrbitPoint {
    pub fn new(ring: &Arc<PolyRing>, coords: Vec<FieldElement>) -> Result<Self, SpectrumError> {
        if coords.len() != ring.num_vars() {
            return Err(SpectrumError::CoordCount {
                expected: ring.num_vars(),
                got: coords.len(),
            });
        }
        for c in &coords {
            if c.spec() != ring.field() {
                return Err(SpectrumError::Poly(PolyError::Scalar(
                    crate::scalars::ScalarError::MixedFields(c.spec(), ring.field()),
                )));
            }
        }
        Ok(OrbitPoint {
            ring: ring.clone(),
            coords,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// The maximal ideal `(z_1 - p_1, ..., z_m - p_m)`. Errors on the
    /// zero-variable ring, whose maximal ideal is the zero ideal.
    pub fn maximal_ideal(&self) -> Result<Ideal, PolyError> {
        let gens: Vec<Polynomial> = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Polynomial::var(&self.ring, i)
                    .sub(&Polynomial::constant(&self.ring, p.clone()))
            })
            .collect();
        Ideal::new(&self.ring, gens)
    }

    /// Membership of `f` in `m_p` is exactly vanishing at `p`.
    pub fn vanishes(&self, f: &Polynomial) -> Result<bool, PolyError> {
        Ok(f.evaluate(&self.coords)?.is_zero())
    }
}

impl fmt::Display for OrbitPoint {
    /// Comma-separated coordinates: `1,1` or `q,q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses the CLI point syntax (comma-separated scalars).
pub fn parse_point(ring: &Arc<PolyRing>, text: &str) -> Result<OrbitPoint, SpectrumError> {
    let text = text.trim();
    let coords: Vec<FieldElement> = if text.is_empty() {
        vec![]
    } else {
        text.split(',')
            .map(|s| parse_scalar(ring.field(), s))
            .collect::<Result<_, _>>()
            .map_err(SpectrumError::Poly)?
    };
    OrbitPoint::new(ring, coords)
}

/// The action of `sigma^power` on points: one positive step sends `m_p` to
/// `sigma(m_p) = m_p'` with `p'_i = (sigma^-1(z_i))(p)`, so positive powers
/// iterate the backward images and negative powers the forward images.
pub fn point_action(
    sigma: &RingAutomorphism,
    p: &OrbitPoint,
    power: i64,
) -> Result<OrbitPoint, SpectrumError> {
    if sigma.ring() != &p.ring {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    let images = if power >= 0 {
        sigma.backward_images()
    } else {
        sigma.forward_images()
    };
    let mut coords = p.coords.clone();
    for _ in 0..power.unsigned_abs() {
        let next: Result<Vec<FieldElement>, PolyError> =
            images.iter().map(|img| img.evaluate(&coords)).collect();
        coords = next?;
    }
    OrbitPoint::new(&p.ring, coords)
}

/// S(B) membership for a rational point: every generator of `H*J` vanishes
/// at `p`.
pub fn in_sb_point(algebra: &BRAlgebra, p: &OrbitPoint) -> Result<bool, SpectrumError> {
    if algebra.ring() != &p.ring {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    for g in algebra.hj_product().gens() {
        if !p.vanishes(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// S(B) membership for a proper ideal: every generator of `H*J` is contained
/// in `m`.
pub fn in_sb_ideal(algebra: &BRAlgebra, m: &Ideal) -> Result<bool, SpectrumError> {
    if algebra.ring() != m.ring() {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    if m.is_unit() {
        return Err(SpectrumError::PreconditionFailed(
            "S(B) membership requires a proper ideal".to_string(),
        ));
    }
    for g in algebra.hj_product().gens() {
        if !m.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Break test, point form: `sigma(m_p)` lies in S(B).
pub fn is_break_point(algebra: &BRAlgebra, p: &OrbitPoint) -> Result<bool, SpectrumError> {
    let moved = point_action(algebra.sigma(), p, 1)?;
    in_sb_point(algebra, &moved)
}

/// Break test, ideal form: `sigma(m)` lies in S(B).
pub fn is_break_ideal(algebra: &BRAlgebra, m: &Ideal) -> Result<bool, SpectrumError> {
    if algebra.ring() != m.ring() {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    let moved = m.sigma_image(algebra.sigma(), 1)?;
    in_sb_ideal(algebra, &moved)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// The point returns to itself after `size` steps.
    Cyclic { size: u64 },
    /// A finite window `[lo, hi]` of an orbit not observed to return.
    Windowed { lo: i64, hi: i64 },
}

/// A computed view of the orbit `Z . m_base`: position `i` holds the point
/// of `sigma^i(m_base)`.
#[derive(Debug, Clone)]
pub struct OrbitView {
    base: OrbitPoint,
    kind: OrbitKind,
    points: BTreeMap<i64, OrbitPoint>,
    /// Positions whose point lies in S(B).
    in_sb: BTreeSet<i64>,
    /// Positions `i` such that position `i` is a break (`sigma(m_i)` in
    /// S(B)); for windowed views the test at the upper edge uses one extra
    /// point action past the window.
    breaks: BTreeSet<i64>,
    /// True exactly for cyclic views: the break set is the whole break set
    /// of the orbit, not a windowed approximation.
    complete_breaks: bool,
    /// Set when the point returned after `size` steps but `sigma^size` is
    /// not the identity on R; finite-orbit classification refuses such
    /// views.
    hypothesis_violated: bool,
}

impl OrbitView {
    pub fn base(&self) -> &OrbitPoint {
        &self.base
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    pub fn points(&self) -> &BTreeMap<i64, OrbitPoint> {
        &self.points
    }

    /// Stored positions in ascending order.
    pub fn positions(&self) -> Vec<i64> {
        self.points.keys().copied().collect()
    }

    /// The point at a position; cyclic views wrap modulo the orbit size,
    /// windowed views return `None` outside the window.
    pub fn point_at(&self, i: i64) -> Option<&OrbitPoint> {
        match self.kind {
            OrbitKind::Cyclic { size } => self.points.get(&i.rem_euclid(size as i64)),
            OrbitKind::Windowed { .. } => self.points.get(&i),
        }
    }

    /// Canonical position index: wraps cyclic positions into `0..size`.
    pub fn canonical_position(&self, i: i64) -> i64 {
        match self.kind {
            OrbitKind::Cyclic { size } => i.rem_euclid(size as i64),
            OrbitKind::Windowed { .. } => i,
        }
    }

    pub fn in_sb(&self) -> &BTreeSet<i64> {
        &self.in_sb
    }

    pub fn breaks(&self) -> &BTreeSet<i64> {
        &self.breaks
    }

    pub fn is_break_at(&self, i: i64) -> bool {
        self.breaks.contains(&self.canonical_position(i))
    }

    pub fn complete_breaks(&self) -> bool {
        self.complete_breaks
    }

    pub fn hypothesis_violated(&self) -> bool {
        self.hypothesis_violated
    }
}

/// Computes an orbit view from `p`: iterates the point action up to
/// `max_order` steps looking for a return to `p`; on return at `n` the
/// stronger hypothesis `sigma^n = id_R` is verified on the variables (the
/// view is flagged when it fails). Without a return, positions
/// `[-window, window]` are reported with `complete_breaks = false`.
pub fn orbit(
    algebra: &BRAlgebra,
    p: &OrbitPoint,
    window: u64,
    max_order: u64,
) -> Result<OrbitView, SpectrumError> {
    if algebra.ring() != &p.ring {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    if max_order == 0 {
        return Err(SpectrumError::PreconditionFailed(
            "max_order must be at least 1".to_string(),
        ));
    }
    let sigma = algebra.sigma();
    // Walk forward looking for a return.
    let mut cur = p.clone();
    let mut forward: Vec<OrbitPoint> = vec![p.clone()];
    let mut cycle: Option<u64> = None;
    for n in 1..=max_order {
        cur = point_action(sigma, &cur, 1)?;
        if &cur == p {
            cycle = Some(n);
            break;
        }
        forward.push(cur.clone());
    }
    match cycle {
        Some(size) => {
            let mut points = BTreeMap::new();
            for (i, pt) in forward.into_iter().enumerate() {
                points.insert(i as i64, pt);
            }
            // Verify sigma^size = id on the variables.
            let mut violated = false;
            for i in 0..algebra.ring().num_vars() {
                let z = Polynomial::var(algebra.ring(), i);
                if sigma.apply(&z, size as i64)? != z {
                    violated = true;
                    break;
                }
            }
            let mut in_sb = BTreeSet::new();
            for (i, pt) in &points {
                if in_sb_point(algebra, pt)? {
                    in_sb.insert(*i);
                }
            }
            let n = size as i64;
            let mut breaks = BTreeSet::new();
            for i in 0..n {
                if in_sb.contains(&(i + 1).rem_euclid(n)) {
                    breaks.insert(i);
                }
            }
            Ok(OrbitView {
                base: p.clone(),
                kind: OrbitKind::Cyclic { size },
                points,
                in_sb,
                breaks,
                complete_breaks: true,
                hypothesis_violated: violated,
            })
        }
        None => orbit_window(algebra, p, -(window as i64), window as i64),
    }
}

/// Computes a windowed view over an explicit (possibly asymmetric) position
/// range `[lo, hi]`, without attempting cycle detection. The break test at
/// the upper edge uses one extra point action past the window.
pub fn orbit_window(
    algebra: &BRAlgebra,
    p: &OrbitPoint,
    lo: i64,
    hi: i64,
) -> Result<OrbitView, SpectrumError> {
    if algebra.ring() != &p.ring {
        return Err(SpectrumError::Poly(PolyError::RingMismatch));
    }
    if lo > hi {
        return Err(SpectrumError::PreconditionFailed(format!(
            "window [{}, {}] is empty",
            lo, hi
        )));
    }
    let sigma = algebra.sigma();
    let mut points = BTreeMap::new();
    for i in lo..=hi {
        points.insert(i, point_action(sigma, p, i)?);
    }
    let mut in_sb = BTreeSet::new();
    for (i, pt) in &points {
        if in_sb_point(algebra, pt)? {
            in_sb.insert(*i);
        }
    }
    let mut breaks = BTreeSet::new();
    for i in lo..=hi {
        let next_in_sb = if i < hi {
            in_sb.contains(&(i + 1))
        } else {
            in_sb_point(algebra, &point_action(sigma, p, hi + 1)?)?
        };
        if next_in_sb {
            breaks.insert(i);
        }
    }
    Ok(OrbitView {
        base: p.clone(),
        kind: OrbitKind::Windowed { lo, hi },
        points,
        in_sb,
        breaks,
        complete_breaks: false,
        hypothesis_violated: false,
    })
}

/// Constructs the non-simplicity witness module attached to a pair of S(B)
/// points `k` steps apart on one orbit: one-dimensional weight spaces at
/// positions `0..k`, interior transfers evaluated from the canonical
/// generators, and zero boundary actions (well defined exactly because both
/// endpoints lie in S(B); the result is verified). Cyclic orbits host the
/// witness directly and require `k` at most the orbit size; otherwise the
/// witness lives on the window `[-1, k]`.
pub fn nonsimplicity_witness(
    algebra: &Arc<BRAlgebra>,
    p: &OrbitPoint,
    k: u64,
) -> Result<crate::weightmod::WeightModule, crate::weightmod::WeightError> {
    if k == 0 {
        return Err(SpectrumError::PreconditionFailed(
            "the witness length k must be at least 1".to_string(),
        )
        .into());
    }
    if !in_sb_point(algebra, p)? {
        return Err(SpectrumError::PreconditionFailed(
            "the base point must lie in S(B)".to_string(),
        )
        .into());
    }
    let far = point_action(algebra.sigma(), p, k as i64)?;
    if !in_sb_point(algebra, &far)? {
        return Err(SpectrumError::PreconditionFailed(format!(
            "sigma^{}(m_p) must lie in S(B)",
            k
        ))
        .into());
    }
    // Detect a finite orbit; the detection bound exceeds k, so an
    // undetected cycle has length above k and the window hosting below
    // never wraps.
    let probe = orbit(algebra, p, 0, k + 8)?;
    let view = match probe.kind() {
        OrbitKind::Cyclic { size } => {
            if k > size {
                return Err(SpectrumError::PreconditionFailed(format!(
                    "the witness length {} exceeds the orbit size {}",
                    k, size
                ))
                .into());
            }
            probe
        }
        OrbitKind::Windowed { .. } => orbit_window(algebra, p, -1, k as i64)?,
    };
    let spec = algebra.ring().field();
    let mut mult = BTreeMap::new();
    for i in 0..k as i64 {
        mult.insert(i, 1usize);
    }
    let mut up = BTreeMap::new();
    let mut down = BTreeMap::new();
    for i in 0..k as i64 - 1 {
        let p_next = view.point_at(i + 1).expect("stored point");
        for (a, j) in algebra.j_hat().iter().enumerate() {
            let val = j.evaluate(p_next.coords())?;
            up.insert(
                (i, a),
                crate::linalg::Matrix::new(spec, 1, 1, vec![val]).expect("1x1"),
            );
        }
        let p_here = view.point_at(i).expect("stored point");
        for (b, h) in algebra.h_hat().iter().enumerate() {
            let val = h.evaluate(p_here.coords())?;
            down.insert(
                (i, b),
                crate::linalg::Matrix::new(spec, 1, 1, vec![val]).expect("1x1"),
            );
        }
    }
    crate::weightmod::build_custom(algebra, &view, mult, up, down, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use crate::scalars::FieldSpec;

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
        BRAlgebra::new(&ring, sigma, h, Ideal::unit(&ring)).unwrap()
    }

    #[test]
    fn point_action_on_cyclotomic_orbit() {
        let b = cyclotomic_algebra();
        let p = parse_point(b.ring(), "1,1").unwrap();
        let moved = point_action(b.sigma(), &p, 1).unwrap();
        assert_eq!(moved.to_string(), "-q - 1,q");
        let twice = point_action(b.sigma(), &p, 2).unwrap();
        assert_eq!(twice.to_string(), "q,-q - 1");
        let thrice = point_action(b.sigma(), &p, 3).unwrap();
        assert_eq!(thrice, p);
        // Round trip with negative powers.
        for k in -5i64..=5 {
            let there = point_action(b.sigma(), &p, k).unwrap();
            let back = point_action(b.sigma(), &there, -k).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn sb_membership_and_breaks() {
        let b = cyclotomic_algebra();
        let p0 = parse_point(b.ring(), "1,1").unwrap();
        let p1 = point_action(b.sigma(), &p0, 1).unwrap();
        let p2 = point_action(b.sigma(), &p0, 2).unwrap();
        assert!(in_sb_point(&b, &p0).unwrap());
        assert!(in_sb_point(&b, &p1).unwrap());
        assert!(!in_sb_point(&b, &p2).unwrap());
        assert!(is_break_point(&b, &p0).unwrap());
        assert!(!is_break_point(&b, &p1).unwrap());
        assert!(is_break_point(&b, &p2).unwrap());
        // Ideal forms agree.
        assert!(in_sb_ideal(&b, &p0.maximal_ideal().unwrap()).unwrap());
        assert!(is_break_ideal(&b, &p2.maximal_ideal().unwrap()).unwrap());
    }

    #[test]
    fn cyclotomic_orbit_view() {
        let b = cyclotomic_algebra();
        let p = parse_point(b.ring(), "1,1").unwrap();
        let view = orbit(&b, &p, 5, 24).unwrap();
        assert_eq!(view.kind(), OrbitKind::Cyclic { size: 3 });
        assert!(!view.hypothesis_violated());
        assert!(view.complete_breaks());
        assert_eq!(view.positions(), vec![0, 1, 2]);
        assert_eq!(view.point_at(1).unwrap().to_string(), "-q - 1,q");
        assert_eq!(view.point_at(2).unwrap().to_string(), "q,-q - 1");
        assert_eq!(view.point_at(4).unwrap().to_string(), "-q - 1,q");
        assert_eq!(
            view.in_sb().iter().copied().collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(
            view.breaks().iter().copied().collect::<Vec<_>>(),
            vec![0, 2]
        );
    }

    #[test]
    fn identity_orbit_is_a_fixed_point() {
        let ring = PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap();
        let sigma = RingAutomorphism::identity(&ring);
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let p = parse_point(b.ring(), "0").unwrap();
        let view = orbit(&b, &p, 3, 10).unwrap();
        assert_eq!(view.kind(), OrbitKind::Cyclic { size: 1 });
        assert!(!view.hypothesis_violated());
    }

    #[test]
    fn windowed_orbit_of_the_shift() {
        let ring = PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "z - 1").unwrap()],
            vec![parse_polynomial(&ring, "z + 1").unwrap()],
        )
        .unwrap();
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let p = parse_point(b.ring(), "0").unwrap();
        let view = orbit(&b, &p, 2, 16).unwrap();
        assert_eq!(view.kind(), OrbitKind::Windowed { lo: -2, hi: 2 });
        assert!(!view.complete_breaks());
        let coords: Vec<String> = view
            .points()
            .values()
            .map(|pt| pt.to_string())
            .collect();
        assert_eq!(coords, vec!["-2", "-1", "0", "1", "2"]);
        assert!(view.point_at(3).is_none());
    }

    #[test]
    fn translation_breaks() {
        let b = translation_algebra();
        let p = parse_point(b.ring(), "0,0").unwrap();
        let view = orbit(&b, &p, 5, 16).unwrap();
        assert_eq!(view.kind(), OrbitKind::Windowed { lo: -5, hi: 5 });
        // S(B) is the single point (1,-1) at position 1; the only break in
        // the window is position 0.
        assert_eq!(view.in_sb().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(view.breaks().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(view.point_at(1).unwrap().to_string(), "1,-1");
    }

    #[test]
    fn point_ideal_action_consistency() {
        let b = translation_algebra();
        let p = parse_point(b.ring(), "2,-3").unwrap();
        let moved = point_action(b.sigma(), &p, 1).unwrap();
        let via_ideal = p
            .maximal_ideal()
            .unwrap()
            .sigma_image(b.sigma(), 1)
            .unwrap();
        assert_eq!(via_ideal, moved.maximal_ideal().unwrap());
    }

    #[test]
    fn return_without_identity_is_flagged() {
        // sigma(z) = -z fixes the point 0 but sigma != id.
        let ring = PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "-z").unwrap()],
            vec![parse_polynomial(&ring, "-z").unwrap()],
        )
        .unwrap();
        let j = Ideal::new(&ring, vec![parse_polynomial(&ring, "z").unwrap()]).unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let p = parse_point(b.ring(), "0").unwrap();
        let view = orbit(&b, &p, 2, 8).unwrap();
        assert_eq!(view.kind(), OrbitKind::Cyclic { size: 1 });
        assert!(view.hypothesis_violated());
    }

    #[test]
    fn bad_points_are_rejected() {
        let b = translation_algebra();
        assert!(matches!(
            parse_point(b.ring(), "1"),
            Err(SpectrumError::CoordCount {
                expected: 2,
                got: 1
            })
        ));
        assert!(parse_point(b.ring(), "1,nope").is_err());
    }

    #[test]
    fn asymmetric_window() {
        let b = translation_algebra();
        let p = parse_point(b.ring(), "0,0").unwrap();
        let view = orbit_window(&b, &p, -1, 3).unwrap();
        assert_eq!(view.kind(), OrbitKind::Windowed { lo: -1, hi: 3 });
        assert_eq!(view.positions(), vec![-1, 0, 1, 2, 3]);
        assert_eq!(view.breaks().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(orbit_window(&b, &p, 2, 1).is_err());
    }

    #[test]
    fn witness_on_a_cyclic_orbit() {
        use crate::bralgebra::GradedElement;
        let b = cyclotomic_algebra();
        let p = parse_point(b.ring(), "1,1").unwrap();
        let w = nonsimplicity_witness(&b, &p, 1).unwrap();
        assert!(w.is_verified());
        assert_eq!(w.support(), vec![0]);
        // Every degree +-1 generator annihilates the witness vector.
        let one = vec![crate::scalars::FieldElement::one(b.ring().field())];
        // In degree -1 the component is sigma^-1(H), whose canonical
        // generators here coincide with those of J.
        for (deg, var) in [(1i64, "z1 - 1"), (1, "z2 - 1"), (-1, "z1 - 1"), (-1, "z2 - 1")] {
            let g = GradedElement::new(
                &b,
                vec![(deg, parse_polynomial(b.ring(), var).unwrap())],
            )
            .unwrap();
            let (_, out) = w.act(&g, 0, &one).unwrap();
            assert!(out.iter().all(|x| x.is_zero()), "generator {var} t^{deg}");
        }
        // sigma^2(m_p) is not in S(B): the k = 2 witness does not exist.
        assert!(nonsimplicity_witness(&b, &p, 2).is_err());
        // k beyond the orbit size is refused.
        assert!(nonsimplicity_witness(&b, &p, 4).is_err());
    }

    #[test]
    fn witness_on_an_infinite_orbit() {
        // sigma(z) = z - 1 moves the point coordinate up by one per
        // positive step; S(B) = V(J) = {0, 2}.
        let ring = PolyRing::new(FieldSpec::rationals(), &["z"]).unwrap();
        let sigma = RingAutomorphism::new(
            &ring,
            vec![parse_polynomial(&ring, "z - 1").unwrap()],
            vec![parse_polynomial(&ring, "z + 1").unwrap()],
        )
        .unwrap();
        let j = Ideal::new(
            &ring,
            vec![parse_polynomial(&ring, "z*(z - 2)").unwrap()],
        )
        .unwrap();
        let b = BRAlgebra::new(&ring, sigma, Ideal::unit(&ring), j).unwrap();
        let p = parse_point(b.ring(), "0").unwrap();
        let w = nonsimplicity_witness(&b, &p, 2).unwrap();
        assert!(w.is_verified());
        assert!(!w.windowed_semantics());
        assert_eq!(w.support(), vec![0, 1]);
        // Interior transfer: j-hat(p_1) = 1 - 2 = -1.
        let field = b.ring().field();
        let minus_one = crate::scalars::FieldElement::from_int(field, -1);
        assert_eq!(w.up_matrix(0, 0).at(0, 0), &minus_one);
        // Boundary actions vanish.
        assert!(w.up_matrix(1, 0).is_zero());
        assert!(w.down_matrix(-1, 0).is_zero());
        // The preconditions really are required: k = 1 fails since
        // position 1 is outside S(B).
        assert!(nonsimplicity_witness(&b, &p, 1).is_err());
    }
}
