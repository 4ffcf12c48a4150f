//! Möbius transformations: 2×2 matrices over Q(ζ16), their projective classes
//! in PGL(2), and points of P¹.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CycloNum;
use crate::linalg::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoebiusError {
    #[error("matrix is singular")]
    Singular,
    #[error("characteristic polynomial of {0} has no root in Q(z16)")]
    IrrationalSpectrum(String),
}

/// A concrete 2×2 matrix `[[a, b], [c, d]]`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [CycloNum; 4]);

impl Mat2 {
    pub fn new(a: CycloNum, b: CycloNum, c: CycloNum, d: CycloNum) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([a.into(), b.into(), c.into(), d.into()])
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// `(x0 : x1) ↦ (x0 : -x1)`.
    pub fn a() -> Self {
        Self::from_ints(1, 0, 0, -1)
    }

    /// `(x0 : x1) ↦ (x1 : x0)`.
    pub fn b() -> Self {
        Self::from_ints(0, 1, 1, 0)
    }

    pub fn ab() -> Self {
        &Self::a() * &Self::b()
    }

    pub fn diag(a: CycloNum, d: CycloNum) -> Self {
        Mat2([a, CycloNum::zero(), CycloNum::zero(), d])
    }

    pub fn entries(&self) -> &[CycloNum; 4] {
        &self.0
    }

    pub fn det(&self) -> CycloNum {
        let [a, b, c, d] = &self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> CycloNum {
        &self.0[0] + &self.0[3]
    }

    pub fn adjugate(&self) -> Self {
        let [a, b, c, d] = &self.0;
        Mat2([d.clone(), -b, -c, a.clone()])
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv_det = self.det().inv()?;
        Some(self.adjugate().scale(&inv_det))
    }

    pub fn scale(&self, s: &CycloNum) -> Self {
        Mat2(self.0.clone().map(|x| &x * s))
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = &self.0;
        b.is_zero() && c.is_zero() && a == d
    }

    pub fn apply(&self, v: &[CycloNum; 2]) -> [CycloNum; 2] {
        let [a, b, c, d] = &self.0;
        [a * &v[0] + b * &v[1], c * &v[0] + d * &v[1]]
    }

    pub fn to_exact(&self) -> ExactMatrix {
        let [a, b, c, d] = self.0.clone();
        ExactMatrix::from_rows(vec![vec![a, b], vec![c, d]])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Divides by the first nonzero entry so that entry becomes 1.
fn normalize<const N: usize>(v: [CycloNum; N]) -> [CycloNum; N] {
    match v.iter().find(|x| !x.is_zero()).and_then(CycloNum::inv) {
        Some(s) if !s.is_one() => v.map(|x| &x * &s),
        _ => v,
    }
}

/// An element of PGL(2): an invertible 2×2 matrix up to nonzero scalars,
/// stored by its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[CycloNum; 4]", into = "[CycloNum; 4]")]
pub struct ProjMatrix(Mat2);

impl ProjMatrix {
    pub fn new(m: Mat2) -> Result<Self, MoebiusError> {
        if m.det().is_zero() {
            return Err(MoebiusError::Singular);
        }
        Ok(ProjMatrix(Mat2(normalize(m.0))))
    }

    pub fn identity() -> Self {
        ProjMatrix(Mat2::identity())
    }

    pub fn a() -> Self {
        ProjMatrix(Mat2::a())
    }

    pub fn b() -> Self {
        ProjMatrix(Mat2::b())
    }

    pub fn ab() -> Self {
        Self::from(Mat2::ab())
    }

    /// The canonical representative (first nonzero entry equal to 1).
    pub fn rep(&self) -> &Mat2 {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_scalar()
    }

    pub fn inverse(&self) -> Self {
        ProjMatrix(Mat2(normalize(self.0.adjugate().0)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn conjugate_by(&self, c: &ProjMatrix) -> Self {
        &(&c.inverse() * self) * c
    }

    pub fn apply(&self, p: &P1Point) -> P1Point {
        P1Point::new(self.0.apply(p.coords())).expect("invertible map sends points to points")
    }
}

impl From<Mat2> for ProjMatrix {
    /// Panics on a singular matrix.
    fn from(m: Mat2) -> Self {
        ProjMatrix::new(m).expect("singular matrix")
    }
}

impl TryFrom<[CycloNum; 4]> for ProjMatrix {
    type Error = MoebiusError;
    fn try_from(v: [CycloNum; 4]) -> Result<Self, MoebiusError> {
        ProjMatrix::new(Mat2(v))
    }
}

impl From<ProjMatrix> for [CycloNum; 4] {
    fn from(m: ProjMatrix) -> Self {
        m.0 .0
    }
}

impl Mul for &ProjMatrix {
    type Output = ProjMatrix;
    fn mul(self, rhs: &ProjMatrix) -> ProjMatrix {
        ProjMatrix(Mat2(normalize((&self.0 * &rhs.0).0)))
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for (name, m) in [("A", Self::a()), ("B", Self::b()), ("AB", Self::ab())] {
            if *self == m {
                return f.write_str(name);
            }
        }
        write!(f, "{:?}", self.0)
    }
}

/// A point `(x0 : x1)` of P¹, first nonzero coordinate normalized to 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[CycloNum; 2]", into = "[CycloNum; 2]")]
pub struct P1Point([CycloNum; 2]);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("(0 : 0) is not a point of P1")]
pub struct ZeroPoint;

impl P1Point {
    pub fn new(coords: [CycloNum; 2]) -> Result<Self, ZeroPoint> {
        if coords.iter().all(CycloNum::is_zero) {
            return Err(ZeroPoint);
        }
        Ok(P1Point(normalize(coords)))
    }

    /// `(1 : t)`.
    pub fn affine(t: CycloNum) -> Self {
        P1Point([CycloNum::one(), t])
    }

    /// `(0 : 1)`.
    pub fn infinity() -> Self {
        P1Point([CycloNum::zero(), CycloNum::one()])
    }

    pub fn coords(&self) -> &[CycloNum; 2] {
        &self.0
    }
}

impl TryFrom<[CycloNum; 2]> for P1Point {
    type Error = ZeroPoint;
    fn try_from(v: [CycloNum; 2]) -> Result<Self, ZeroPoint> {
        P1Point::new(v)
    }
}

impl From<P1Point> for [CycloNum; 2] {
    fn from(p: P1Point) -> Self {
        p.0
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.0[0], self.0[1])
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Least `n ≤ cap` with `Mⁿ` projectively trivial, or `None` past the cap.
pub fn proj_order(m: &ProjMatrix, cap: u32) -> Option<u32> {
    let mut acc = m.clone();
    for n in 1..=cap {
        if acc.is_identity() {
            return Some(n);
        }
        acc = &acc * m;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum FixedPoints {
    AllOfP1,
    /// A repeated eigenvalue with a single eigenline; the fixed point is degenerate.
    One(P1Point),
    Two([P1Point; 2]),
}

impl FixedPoints {
    pub fn points(&self) -> Vec<P1Point> {
        match self {
            FixedPoints::AllOfP1 => Vec::new(),
            FixedPoints::One(p) => vec![p.clone()],
            FixedPoints::Two(ps) => ps.to_vec(),
        }
    }
}

fn eigenline(m: &Mat2, lambda: &CycloNum) -> P1Point {
    let [a, b, c, d] = &m.0;
    let first = [b.clone(), lambda - a];
    let v = if first.iter().any(|x| !x.is_zero()) {
        first
    } else {
        [lambda - d, c.clone()]
    };
    P1Point::new(v).expect("non-scalar matrix has a nonzero eigenvector row")
}

pub fn fixed_points_p1(m: &ProjMatrix) -> Result<FixedPoints, MoebiusError> {
    if m.is_identity() {
        return Ok(FixedPoints::AllOfP1);
    }
    let rep = m.rep();
    let tr = rep.trace();
    let disc = &tr * &tr - CycloNum::from_int(4) * rep.det();
    let half = CycloNum::from_ratio(1, 2);
    if disc.is_zero() {
        return Ok(FixedPoints::One(eigenline(rep, &(&tr * &half))));
    }
    let root = disc.sqrt().ok_or_else(|| MoebiusError::IrrationalSpectrum(format!("{rep:?}")))?;
    let mut pts = [eigenline(rep, &(&(&tr + &root) * &half)), eigenline(rep, &(&(&tr - &root) * &half))];
    pts.sort();
    Ok(FixedPoints::Two(pts))
}

/// Finds `C` with `C⁻¹ M C = N` in PGL(2) over Q(ζ16), if one exists.
///
/// Such a `C` satisfies `M C = μ C N` with `μ² = det M / det N`, which is
/// linear in the entries of `C` once `μ` is fixed.
pub fn conjugating_element(m: &ProjMatrix, n: &ProjMatrix) -> Option<ProjMatrix> {
    let (mm, nn) = (m.rep(), n.rep());
    let mu_sq = &mm.det() * &nn.det().inv()?;
    let mu = mu_sq.sqrt()?;
    for mu in [mu.clone(), -mu] {
        // Unknowns (c0, c1, c2, c3) = C row-major; row (r, s) of M C - μ C N.
        let mut rows = Vec::new();
        for r in 0..2 {
            for s in 0..2 {
                let mut row = vec![CycloNum::zero(); 4];
                for k in 0..2 {
                    row[2 * k + s] += &mm.0[2 * r + k];
                    let t = &mu * &nn.0[2 * k + s];
                    row[2 * r + k] -= &t;
                }
                rows.push(row);
            }
        }
        let kernel = ExactMatrix::from_rows(rows).kernel();
        let basis: Vec<Mat2> = kernel
            .columns()
            .into_iter()
            .map(|v| Mat2(v.try_into().expect("four unknowns")))
            .collect();
        // det is a quadratic form on the kernel: if it vanishes on every basis
        // vector and every pairwise sum, it vanishes identically.
        let mut candidates = basis.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                candidates.push(Mat2(std::array::from_fn(|k| &basis[i].0[k] + &basis[j].0[k])));
            }
        }
        if let Some(c) = candidates.into_iter().find(|c| !c.det().is_zero()) {
            return Some(ProjMatrix::from(c));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_i() -> ProjMatrix {
        ProjMatrix::from(Mat2::diag(CycloNum::one(), CycloNum::i()))
    }

    #[test]
    fn projective_equality_ignores_scalars() {
        let m = Mat2::a().scale(&CycloNum::z());
        assert_eq!(ProjMatrix::from(m), ProjMatrix::a());
        assert_ne!(ProjMatrix::a(), ProjMatrix::b());
        assert_eq!(ProjMatrix::new(Mat2::from_ints(1, 2, 2, 4)), Err(MoebiusError::Singular));
    }

    #[test]
    fn orders() {
        assert_eq!(proj_order(&ProjMatrix::a(), 16), Some(2));
        assert_eq!(proj_order(&ProjMatrix::b(), 16), Some(2));
        assert_eq!(proj_order(&ProjMatrix::ab(), 16), Some(2));
        assert_eq!(proj_order(&ProjMatrix::identity(), 16), Some(1));
        assert_eq!(proj_order(&diag_i(), 16), Some(4));
        assert_eq!(proj_order(&diag_i(), 3), None);
        let unipotent = ProjMatrix::from(Mat2::from_ints(1, 1, 0, 1));
        assert_eq!(proj_order(&unipotent, 64), None);
    }

    #[test]
    fn fixed_points_of_canonical_involutions() {
        let pt = |a: i64, b: CycloNum| P1Point::new([a.into(), b]).unwrap();
        let fa = fixed_points_p1(&ProjMatrix::a()).unwrap();
        assert_eq!(fa.points().len(), 2);
        assert!(fa.points().contains(&pt(1, CycloNum::zero())));
        assert!(fa.points().contains(&pt(0, CycloNum::one())));

        let fb = fixed_points_p1(&ProjMatrix::b()).unwrap();
        assert!(fb.points().contains(&pt(1, CycloNum::one())));
        assert!(fb.points().contains(&pt(1, CycloNum::from_int(-1))));

        let fab = fixed_points_p1(&ProjMatrix::ab()).unwrap();
        assert!(fab.points().contains(&pt(1, CycloNum::i())));
        assert!(fab.points().contains(&pt(1, -CycloNum::i())));

        assert_eq!(fixed_points_p1(&ProjMatrix::identity()).unwrap(), FixedPoints::AllOfP1);
        let unipotent = ProjMatrix::from(Mat2::from_ints(1, 1, 0, 1));
        assert_eq!(fixed_points_p1(&unipotent).unwrap(), FixedPoints::One(pt(1, CycloNum::zero())));
    }

    #[test]
    fn irrational_spectrum() {
        // t^2 - t - 1 has discriminant 5, which is not a square in Q(z16)
        let m = ProjMatrix::from(Mat2::from_ints(1, 1, 1, 0));
        assert!(matches!(fixed_points_p1(&m), Err(MoebiusError::IrrationalSpectrum(_))));
    }

    #[test]
    fn fixed_points_are_fixed() {
        for m in [ProjMatrix::a(), ProjMatrix::b(), ProjMatrix::ab(), diag_i()] {
            for p in fixed_points_p1(&m).unwrap().points() {
                assert_eq!(m.apply(&p), p);
            }
        }
    }

    #[test]
    fn conjugators() {
        assert!(conjugating_element(&ProjMatrix::a(), &ProjMatrix::a()).is_some());
        let c = conjugating_element(&ProjMatrix::b(), &ProjMatrix::a()).unwrap();
        assert_eq!(ProjMatrix::b().conjugate_by(&c), ProjMatrix::a());
        assert!(conjugating_element(&ProjMatrix::a(), &diag_i()).is_none());
        let d8 = ProjMatrix::from(Mat2::diag(CycloNum::one(), CycloNum::z()));
        assert!(conjugating_element(&d8, &ProjMatrix::a()).is_none());
    }

    #[test]
    fn display_names() {
        assert_eq!(ProjMatrix::identity().to_string(), "id");
        assert_eq!(ProjMatrix::from(Mat2::from_ints(0, -1, 1, 0)).to_string(), "AB");
        assert_eq!(P1Point::affine(CycloNum::i()).to_string(), "(1:z^4)");
    }
}
