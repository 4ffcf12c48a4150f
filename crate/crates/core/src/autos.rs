//! Automorphisms `(A₁, A₂, A₃, A₄) ∘ σ` of (P¹)⁴.
//!
//! A point `x = (x₁, …, x₄)` is sent to `(A₁ x_{σ(1)}, …, A₄ x_{σ(4)})`.
//! With this convention `compose(h, g)` is the map `x ↦ h(g(x))`.

use std::fmt;

use thiserror::Error;

use crate::cyclo::CycloNum;
use crate::moebius::{Mat2, P1Point, ProjMatrix};
use crate::perm::Perm;

pub type Point4 = [P1Point; 4];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductAuto {
    pub mats: [ProjMatrix; 4],
    pub perm: Perm,
}

impl ProductAuto {
    pub fn new(mats: [ProjMatrix; 4], perm: Perm) -> Self {
        ProductAuto { mats, perm }
    }

    pub fn diagonal(mats: [ProjMatrix; 4]) -> Self {
        Self::new(mats, Perm::IDENTITY)
    }

    pub fn identity() -> Self {
        Self::diagonal(std::array::from_fn(|_| ProjMatrix::identity()))
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.mats.iter().all(ProjMatrix::is_identity)
    }

    pub fn apply(&self, x: &Point4) -> Point4 {
        std::array::from_fn(|i| self.mats[i].apply(&x[self.perm.apply(i)]))
    }

    pub fn inverse(&self) -> Self {
        let inv = self.perm.inverse();
        ProductAuto {
            mats: std::array::from_fn(|i| self.mats[inv.apply(i)].inverse()),
            perm: inv,
        }
    }

    /// `k⁻¹ ∘ self ∘ k`.
    pub fn conjugate(&self, k: &ProductAuto) -> Self {
        compose(&compose(&k.inverse(), self), k)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| compose(&acc, self))
    }

    /// Least `n ≤ cap` with `selfⁿ = id`.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let mut acc = self.clone();
        for n in 1..=cap {
            if acc.is_identity() {
                return Some(n);
            }
            acc = compose(&acc, self);
        }
        None
    }
}

/// `h ∘ g`: first `g`, then `h`.
pub fn compose(h: &ProductAuto, g: &ProductAuto) -> ProductAuto {
    ProductAuto {
        mats: std::array::from_fn(|i| &h.mats[i] * &g.mats[h.perm.apply(i)]),
        perm: g.perm.after(&h.perm),
    }
}

impl fmt::Display for ProductAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.mats;
        write!(f, "({a},{b},{c},{d})")?;
        if !self.perm.is_identity() {
            write!(f, "∘{}", self.perm)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ProductAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown built-in group {0:?} (expected one of {names})", names = BUILTIN_NAMES.join(", "))]
pub struct UnknownGroup(pub String);

pub const BUILTIN_NAMES: [&str; 10] = ["z2", "z2xz2", "z4", "z4xz2", "z8", "q8", "z8xz2", "z4xz4", "z4sz4", "q8xz2"];

/// The four groups of order 16 together with their expected isomorphism labels.
pub const ORDER_16_BUILTINS: [(&str, &str); 4] = [
    ("z8xz2", "Z8 x Z2"),
    ("z4xz4", "Z4 x Z4"),
    ("z4sz4", "Z4 : Z4"),
    ("q8xz2", "Q8 x Z2"),
];

fn auto(mats: [ProjMatrix; 4], cycles: &[&[u32]]) -> ProductAuto {
    let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
    ProductAuto::new(mats, Perm::from_cycles(&cycles).expect("valid built-in permutation"))
}

pub fn builtin_group(name: &str) -> Result<Vec<ProductAuto>, UnknownGroup> {
    let (i, a, b, ab) = (ProjMatrix::identity(), ProjMatrix::a(), ProjMatrix::b(), ProjMatrix::ab());
    let all_a = ProductAuto::diagonal([a.clone(), a.clone(), a.clone(), a.clone()]);
    let all_b = ProductAuto::diagonal([b.clone(), b.clone(), b.clone(), b.clone()]);
    let r4 = auto([i.clone(), a.clone(), i.clone(), a.clone()], &[&[1, 2], &[3, 4]]);
    let r8 = auto([i.clone(), i.clone(), i.clone(), a.clone()], &[&[1, 3, 2, 4]]);
    let j = auto([i.clone(), a.clone(), a.clone(), i.clone()], &[&[1, 3], &[2, 4]]);
    Ok(match name {
        "z2" => vec![all_a],
        "z2xz2" => vec![all_a, all_b],
        "z4" => vec![r4],
        "z4xz2" => vec![r4, all_b],
        "z8" => vec![r8],
        "q8" => vec![r4, j],
        "z8xz2" => vec![r8, all_b],
        "z4xz4" => vec![r4, auto([i.clone(), i, b.clone(), b], &[&[1, 3], &[2, 4]])],
        "z4sz4" => vec![r4, auto([i, a, b, ab], &[&[1, 3], &[2, 4]])],
        "q8xz2" => vec![r4, j, all_b],
        other => return Err(UnknownGroup(other.to_string())),
    })
}

/// `diag(1, ζ^k)` as a projective class.
pub fn diag_zeta(k: i64) -> ProjMatrix {
    ProjMatrix::from(Mat2::diag(CycloNum::one(), CycloNum::zeta_pow(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(name: &str) -> Vec<ProductAuto> {
        builtin_group(name).unwrap()
    }

    #[test]
    fn display_matches_notation() {
        assert_eq!(gens("z4sz4")[1].to_string(), "(id,A,B,AB)∘(13)(24)");
        assert_eq!(gens("z2")[0].to_string(), "(A,A,A,A)");
        assert_eq!(gens("z8")[0].to_string(), "(id,id,id,A)∘(1324)");
    }

    #[test]
    fn squares_of_canonical_generators() {
        let all_a = gens("z2")[0].clone();
        let r4 = gens("z4")[0].clone();
        assert_eq!(compose(&r4, &r4), all_a);
        let r8 = gens("z8")[0].clone();
        assert_eq!(compose(&r8, &r8), r4);
        assert_eq!(r8.pow(4), all_a);
        assert_eq!(r8.order(64), Some(8));
        assert_eq!(r4.order(64), Some(4));
    }

    #[test]
    fn compose_is_function_composition() {
        let pts: Point4 = [
            P1Point::affine(CycloNum::from_int(2)),
            P1Point::affine(CycloNum::i()),
            P1Point::infinity(),
            P1Point::affine(CycloNum::from_int(-3)),
        ];
        let g = gens("z4sz4");
        let h = gens("z8xz2");
        for x in &g {
            for y in &h {
                assert_eq!(compose(x, y).apply(&pts), x.apply(&y.apply(&pts)));
                assert_eq!(compose(y, x).apply(&pts), y.apply(&x.apply(&pts)));
            }
            assert!(compose(x, &x.inverse()).is_identity());
            assert!(compose(&x.inverse(), x).is_identity());
        }
    }

    #[test]
    fn conjugation_of_b_by_diagonal() {
        let c = ProjMatrix::from(Mat2::diag(CycloNum::one(), CycloNum::from_int(3)));
        let k = ProductAuto::diagonal([c.clone(), c.clone(), c.clone(), c.clone()]);
        let conj = gens("z2xz2")[1].conjugate(&k);
        let expected = ProjMatrix::from(Mat2::from_ints(0, 9, 1, 0));
        assert!(conj.mats.iter().all(|m| *m == expected));
        assert_eq!(conj.order(64), Some(2));
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(builtin_group("d8"), Err(UnknownGroup("d8".into())));
    }
}
