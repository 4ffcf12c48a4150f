//! Strategies and property bodies shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use freequot_core::autos::{builtin_group, compose, ProductAuto, BUILTIN_NAMES};
use freequot_core::cyclo::CycloNum;
use freequot_core::geometry::fixed_locus;
use freequot_core::group::{closure, identify_isomorphism_type, FiniteSubgroup, DEFAULT_CAP};
use freequot_core::linalg::ExactMatrix;
use freequot_core::moebius::{Mat2, ProjMatrix};
use freequot_core::multihomog::{lifted_closure, pullback, LiftedAuto, MultiPoly};
use freequot_core::perm::Perm;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn cyclo() -> impl Strategy<Value = CycloNum> {
    proptest::array::uniform8((-6i64..=6, 1i64..=4))
        .prop_map(|cs| CycloNum::from_coeffs(cs.map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))))
}

pub fn small_int() -> impl Strategy<Value = i64> {
    -3i64..=3
}

pub fn invertible_mat2() -> impl Strategy<Value = Mat2> {
    (small_int(), small_int(), small_int(), small_int(), 0i64..16)
        .prop_map(|(a, b, c, d, k)| {
            Mat2::new(
                CycloNum::from_int(a),
                CycloNum::from_int(b) * CycloNum::zeta_pow(k),
                CycloNum::from_int(c),
                CycloNum::from_int(d),
            )
        })
        .prop_filter("invertible", |m| !m.det().is_zero())
}

pub fn perm() -> impl Strategy<Value = Perm> {
    (0usize..24).prop_map(|k| Perm::all()[k])
}

pub fn product_auto() -> impl Strategy<Value = ProductAuto> {
    (proptest::array::uniform4(invertible_mat2()), perm()).prop_map(|(ms, p)| ProductAuto::new(ms.map(ProjMatrix::from), p))
}

pub fn lifted_auto() -> impl Strategy<Value = LiftedAuto> {
    (proptest::array::uniform4(invertible_mat2()), perm()).prop_map(|(ms, p)| LiftedAuto::new(ms, p).expect("invertible"))
}

pub fn builtin_name() -> impl Strategy<Value = &'static str> {
    (0usize..BUILTIN_NAMES.len()).prop_map(|k| BUILTIN_NAMES[k])
}

/// A polynomial of the given degree with a few random terms.
pub fn poly(degree: [u32; 4]) -> impl Strategy<Value = MultiPoly> {
    let exps = proptest::array::uniform4(0u32..=2);
    proptest::collection::vec((exps, -4i64..=4), 1..5).prop_map(move |terms| {
        terms.into_iter().fold(MultiPoly::zero(degree), |acc, (b, c)| {
            let b = std::array::from_fn(|i| b[i].min(degree[i]));
            acc + MultiPoly::monomial(degree, b, CycloNum::from_int(c))
        })
    })
}

pub fn field_axioms(a: &CycloNum, b: &CycloNum, c: &CycloNum) -> Result<(), TestCaseError> {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + &CycloNum::zero(), a.clone());
    prop_assert_eq!(a * &CycloNum::one(), a.clone());
    prop_assert!((a + &(-a.clone())).is_zero());
    if let Some(inv) = a.inv() {
        prop_assert!((a * &inv).is_one());
    } else {
        prop_assert!(a.is_zero());
    }
    Ok(())
}

pub fn kernel_and_rank(rows: Vec<Vec<CycloNum>>, p: &Mat2) -> Result<(), TestCaseError> {
    let m = ExactMatrix::from_rows(rows);
    let (rank, kernel) = m.rank_kernel();
    prop_assert_eq!(rank + kernel.cols(), m.cols());
    prop_assert!((&m * &kernel).is_zero());
    prop_assert_eq!(m.transpose().rank(), rank);
    // left multiplication by an invertible block-diagonal matrix keeps the rank
    let n = m.rows();
    let mut left = ExactMatrix::identity(n);
    if n >= 2 {
        let [a, b, c, d] = p.entries().clone();
        left[(0, 0)] = a;
        left[(0, 1)] = b;
        left[(1, 0)] = c;
        left[(1, 1)] = d;
    }
    prop_assert_eq!((&left * &m).rank(), rank);
    Ok(())
}

pub fn group_axioms(name: &str, picks: [usize; 3]) -> Result<(), TestCaseError> {
    let g = closure(&builtin_group(name).unwrap(), DEFAULT_CAP).unwrap();
    prop_assert!(g.cayley_table().is_group());
    let [a, b, c] = picks.map(|k| g.element(k % g.order()).clone());
    prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
    prop_assert!(g.contains(&compose(&a, &b)));
    prop_assert!(g.contains(&a.inverse()));
    prop_assert!(compose(&a, &a.inverse()).is_identity());
    prop_assert!(compose(&ProductAuto::identity(), &a) == a);
    Ok(())
}

fn fixed_dims(g: &FiniteSubgroup) -> Vec<Vec<usize>> {
    let set: std::collections::BTreeSet<Vec<usize>> = g
        .elements()
        .map(|e| {
            let mut dims: Vec<usize> = fixed_locus(e).unwrap().iter().map(|c| c.dimension()).collect();
            dims.sort();
            dims
        })
        .collect();
    set.into_iter().collect()
}

pub fn conjugation_invariance(name: &str, k: &ProductAuto) -> Result<(), TestCaseError> {
    let gens = builtin_group(name).unwrap();
    let conj: Vec<ProductAuto> = gens.iter().map(|g| g.conjugate(k)).collect();
    let (g, h) = (closure(&gens, DEFAULT_CAP).unwrap(), closure(&conj, DEFAULT_CAP).unwrap());
    prop_assert_eq!(g.order(), h.order());
    prop_assert_eq!(g.order_histogram(), h.order_histogram());
    prop_assert_eq!(identify_isomorphism_type(&g).unwrap(), identify_isomorphism_type(&h).unwrap());
    prop_assert_eq!(fixed_dims(&g), fixed_dims(&h));
    Ok(())
}

pub fn pullback_multiplicative(g: &LiftedAuto, h: &LiftedAuto, p: &MultiPoly, q: &MultiPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(pullback(g, &(p * q)), &pullback(g, p) * &pullback(g, q));
    prop_assert_eq!(pullback(g, &(p + p)), &pullback(g, p) + &pullback(g, p));
    prop_assert_eq!(pullback(&g.then_after(h), p), pullback(g, &pullback(h, p)));
    Ok(())
}

/// Lifted elements of a built-in group, used for the multiplicativity property.
pub fn builtin_lifts(name: &str) -> Vec<LiftedAuto> {
    let gens: Vec<LiftedAuto> = builtin_group(name).unwrap().iter().map(LiftedAuto::canonical).collect();
    lifted_closure(&gens, DEFAULT_CAP).unwrap()
}
