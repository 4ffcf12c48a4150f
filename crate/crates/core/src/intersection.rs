//! Intersection numbers on (P¹)⁴, Künneth cohomology of split bundles,
//! Hodge numbers of free quotients of anticanonical threefolds, and
//! numerical invariants of the resulting surfaces.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteSubgroup;

/// An element of `Z[h₁..h₄]/(hᵢ²)`, indexed by subset bitmask (bit `i` is `h_{i+1}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ChowClass {
    coeffs: [i64; 16],
}

impl ChowClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        let mut out = Self::zero();
        out.coeffs[0] = c;
        out
    }

    /// `hᵢ` for `i` in 1..=4.
    pub fn h(i: usize) -> Self {
        assert!((1..=4).contains(&i));
        let mut out = Self::zero();
        out.coeffs[1 << (i - 1)] = 1;
        out
    }

    /// The divisor class `d₁h₁ + … + d₄h₄`.
    pub fn divisor(d: [i64; 4]) -> Self {
        let mut out = Self::zero();
        for (i, &c) in d.iter().enumerate() {
            out.coeffs[1 << i] = c;
        }
        out
    }

    /// `H = h₁ + h₂ + h₃ + h₄`.
    pub fn hyperplane() -> Self {
        Self::divisor([1; 4])
    }

    pub fn coeff(&self, mask: usize) -> i64 {
        self.coeffs[mask]
    }

    pub fn scale(&self, c: i64) -> Self {
        ChowClass {
            coeffs: self.coeffs.map(|x| x * c),
        }
    }

    /// The homogeneous part of codimension `k`.
    pub fn part(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for mask in 0..16usize {
            if mask.count_ones() == k {
                out.coeffs[mask] = self.coeffs[mask];
            }
        }
        out
    }

    /// Coefficient of `h₁h₂h₃h₄`.
    pub fn degree(&self) -> i64 {
        self.coeffs[15]
    }

    pub fn is_divisor(&self) -> bool {
        self.part(1) == *self
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * *self)
    }
}

impl Add for ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: ChowClass) -> ChowClass {
        ChowClass {
            coeffs: std::array::from_fn(|m| self.coeffs[m] + rhs.coeffs[m]),
        }
    }
}

impl Mul for ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: ChowClass) -> ChowClass {
        let mut out = ChowClass::zero();
        for a in 0..16usize {
            if self.coeffs[a] == 0 {
                continue;
            }
            for b in 0..16usize {
                if a & b == 0 {
                    out.coeffs[a | b] += self.coeffs[a] * rhs.coeffs[b];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for mask in 0..16usize {
            let c = self.coeffs[mask];
            if c == 0 {
                continue;
            }
            let mono: String = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| format!("h{}", i + 1)).collect();
            terms.push(if mono.is_empty() { c.to_string() } else { format!("{c}{mono}") });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("argument {0} is not a divisor class")]
    NotDivisor(usize),
    #[error("group order {order} does not divide {value}")]
    Divisibility { order: usize, value: i64 },
}

/// Top intersection number of four divisor classes.
pub fn chow_degree(classes: &[ChowClass; 4]) -> Result<i64, IntersectionError> {
    if let Some(k) = classes.iter().position(|c| !c.is_divisor()) {
        return Err(IntersectionError::NotDivisor(k));
    }
    Ok(classes.iter().fold(ChowClass::one(), |acc, c| acc * *c).degree())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerComputation {
    /// Total Chern class of `T_Y` pushed into X, truncated at codimension 3.
    pub chern_y: ChowClass,
    pub euler: i64,
}

/// Euler number of a smooth member of `|O_X(2,2,2,2)|`, by adjunction.
pub fn euler_anticanonical() -> EulerComputation {
    let y = ChowClass::hyperplane().scale(2);
    let c_x = (1..=4).fold(ChowClass::one(), |acc, i| acc * (ChowClass::one() + ChowClass::h(i).scale(2)));
    let inv_1_plus_y = (0..=4).fold(ChowClass::zero(), |acc, k| acc + y.pow(k).scale(if k % 2 == 0 { 1 } else { -1 }));
    let full = c_x * inv_1_plus_y;
    let chern_y = (0..=3).fold(ChowClass::zero(), |acc, k| acc + full.part(k));
    let euler = (chern_y.part(3) * y).degree();
    EulerComputation { chern_y, euler }
}

/// A direct sum of line bundles `O_X(d₁, d₂, d₃, d₄)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSum {
    pub summands: Vec<[i64; 4]>,
}

impl BundleSum {
    pub fn line(d: [i64; 4]) -> Self {
        BundleSum { summands: vec![d] }
    }

    /// The tangent bundle `⊕ O_X(2eᵢ)`.
    pub fn tangent() -> Self {
        BundleSum {
            summands: (0..4).map(|i| std::array::from_fn(|j| if i == j { 2 } else { 0 })).collect(),
        }
    }

    /// Tensor with `O_X(kH)`.
    pub fn twist(&self, k: i64) -> Self {
        BundleSum {
            summands: self.summands.iter().map(|d| d.map(|x| x + k)).collect(),
        }
    }
}

/// `(h⁰, h¹)` of `O_{P¹}(d)`.
fn p1_cohomology(d: i64) -> [i64; 2] {
    if d >= 0 {
        [d + 1, 0]
    } else {
        [0, (-d - 1).max(0)]
    }
}

pub fn kunneth_cohomology(b: &BundleSum) -> [i64; 5] {
    let mut total = [0i64; 5];
    for d in &b.summands {
        let mut acc = [1i64, 0, 0, 0, 0];
        for &di in d {
            let h = p1_cohomology(di);
            let mut next = [0i64; 5];
            for q in 0..5 {
                for (k, hk) in h.iter().enumerate() {
                    if q + k < 5 {
                        next[q + k] += acc[q] * hk;
                    }
                }
            }
            acc = next;
        }
        for q in 0..5 {
            total[q] += acc[q];
        }
    }
    total
}

pub const EULER_Y: i64 = -128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    pub group_order: usize,
    pub h11: i64,
    pub h12: i64,
    pub height: i64,
    pub euler: i64,
}

/// Hodge numbers of `Y/G` from the group order and the number of orbits of
/// the permutation image on the four factors.
pub fn quotient_hodge_from(group_order: usize, factor_orbits: usize) -> Result<QuotientInvariants, IntersectionError> {
    if group_order == 0 || EULER_Y % group_order as i64 != 0 {
        return Err(IntersectionError::Divisibility {
            order: group_order,
            value: EULER_Y,
        });
    }
    let euler = EULER_Y / group_order as i64;
    let h11 = factor_orbits as i64;
    let h12 = h11 - euler / 2;
    Ok(QuotientInvariants {
        group_order,
        h11,
        h12,
        height: h11 + h12,
        euler,
    })
}

pub fn quotient_hodge(g: &FiniteSubgroup) -> Result<QuotientInvariants, IntersectionError> {
    quotient_hodge_from(g.order(), g.factor_orbits())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub group_order: usize,
    pub k2_t: i64,
    pub k2_s: i64,
    pub pg_t: i64,
    pub q: i64,
    pub chi_t: i64,
    pub chi_s: i64,
    pub pg_s: i64,
    pub expected_moduli_dim: i64,
}

/// Invariants of `T = V ∩ Y` (V ∈ |H|, Y ∈ |2H|) and of its free quotient
/// by a group of the given order.
pub fn surface_invariants(group_order: usize) -> Result<SurfaceInvariants, IntersectionError> {
    let h = ChowClass::hyperplane();
    let k2_t = chow_degree(&[h.scale(2), h, h, h]).expect("divisor classes");
    let pg_t = kunneth_cohomology(&BundleSum::line([1; 4]))[0] - 1;
    let q = 0;
    let chi_t = 1 - q + pg_t;
    let n = group_order as i64;
    for value in [k2_t, chi_t] {
        if n == 0 || value % n != 0 {
            return Err(IntersectionError::Divisibility { order: group_order, value });
        }
    }
    let (k2_s, chi_s) = (k2_t / n, chi_t / n);
    Ok(SurfaceInvariants {
        group_order,
        k2_t,
        k2_s,
        pg_t,
        q,
        chi_t,
        chi_s,
        pg_s: chi_s - 1 + q,
        expected_moduli_dim: 10 * chi_s - 2 * k2_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let h = ChowClass::hyperplane();
        assert_eq!(chow_degree(&[h, h, h, h]), Ok(24));
        assert_eq!(chow_degree(&[h.scale(2), h, h, h]), Ok(48));
        let h1 = ChowClass::h(1);
        assert_eq!(chow_degree(&[h1, h1, h, h]), Ok(0));
        assert_eq!(chow_degree(&[ChowClass::one(), h, h, h]), Err(IntersectionError::NotDivisor(0)));
    }

    #[test]
    fn degree_is_permanent_of_multidegrees() {
        let rows = [[1, 2, 0, 3], [2, 1, 1, 0], [0, 1, 4, 1], [1, 1, 1, 1]];
        let mut perm_sum = 0;
        for p in crate::perm::Perm::all() {
            perm_sum += (0..4).map(|k| rows[k][p.apply(k)]).product::<i64>();
        }
        assert_eq!(chow_degree(&rows.map(ChowClass::divisor)), Ok(perm_sum));
    }

    #[test]
    fn euler_number() {
        let e = euler_anticanonical();
        assert_eq!(e.euler, -128);
        assert_eq!(e.chern_y.part(0), ChowClass::one());
        assert_eq!(e.chern_y.part(1), ChowClass::zero());
    }

    #[test]
    fn kunneth_rows() {
        let t = BundleSum::tangent();
        assert_eq!(kunneth_cohomology(&t), [12, 0, 0, 0, 0]);
        assert_eq!(kunneth_cohomology(&t.twist(-1)), [0; 5]);
        assert_eq!(kunneth_cohomology(&t.twist(-2)), [0, 0, 0, 4, 0]);
        assert_eq!(kunneth_cohomology(&t.twist(-3)), [0; 5]);
        assert_eq!(kunneth_cohomology(&BundleSum::line([0; 4])), [1, 0, 0, 0, 0]);
        assert_eq!(kunneth_cohomology(&BundleSum::line([2; 4])), [81, 0, 0, 0, 0]);
        assert_eq!(kunneth_cohomology(&BundleSum::line([-2; 4])), [0, 0, 0, 0, 1]);
    }

    #[test]
    fn hodge_numbers() {
        let q = quotient_hodge_from(1, 4).unwrap();
        assert_eq!((q.h11, q.h12), (4, 68));
        assert_eq!(2 * (q.h11 - q.h12), EULER_Y);
        let q = quotient_hodge_from(2, 4).unwrap();
        assert_eq!((q.h11, q.h12, q.height), (4, 36, 40));
        assert!(quotient_hodge_from(3, 4).is_err());
    }

    #[test]
    fn surfaces() {
        let s = surface_invariants(16).unwrap();
        assert_eq!((s.k2_s, s.chi_s, s.pg_t, s.expected_moduli_dim, s.pg_s), (3, 1, 15, 4, 0));
        let s = surface_invariants(1).unwrap();
        assert_eq!((s.k2_t, s.pg_t), (48, 15));
        let s = surface_invariants(2).unwrap();
        assert_eq!((s.k2_s, s.chi_s), (24, 8));
        assert!(surface_invariants(5).is_err());
    }
}
