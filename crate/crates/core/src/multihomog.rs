//! Multihomogeneous polynomials in `x_{i0}, x_{i1}` (i = 1..4), the linear
//! action of lifted automorphisms on them, and the explicit families of
//! invariant sections.
//!
//! A monomial of multidegree `(d₁, …, d₄)` is keyed by its exponents
//! `(b₁, …, b₄)` of `x_{i1}`; the exponent of `x_{i0}` is `dᵢ - bᵢ`. Bases are
//! ordered lexicographically in `b`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use indexmap::IndexMap;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autos::{compose, Point4, ProductAuto};
use crate::cyclo::CycloNum;
use crate::group::GroupError;
use crate::linalg::ExactMatrix;
use crate::moebius::{Mat2, ProjMatrix};
use crate::perm::Perm;

pub type Degree = [u32; 4];
pub type Exponents = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultihomogError {
    #[error("multidegrees {0:?} and {1:?} differ")]
    DegreeMismatch(Degree, Degree),
    #[error("the permutation does not preserve multidegree {0:?}")]
    DegreeNotPreserved(Degree),
    #[error("{monomial} is not sent to a multiple of an extremal monomial")]
    NotMonomialFrame { monomial: String },
    #[error("bad exponent key {0:?}: expected four two-digit groups like \"20|11|02|20\"")]
    BadKey(String),
    #[error("singular representative matrix in slot {0}")]
    SingularLift(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    degree: Degree,
    terms: BTreeMap<Exponents, CycloNum>,
}

impl MultiPoly {
    pub fn zero(degree: Degree) -> Self {
        MultiPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::monomial([0; 4], [0; 4], c)
    }

    /// `c · ∏ x_{i0}^{dᵢ-bᵢ} x_{i1}^{bᵢ}`. Panics if some `bᵢ > dᵢ`.
    pub fn monomial(degree: Degree, b: Exponents, c: CycloNum) -> Self {
        assert!(b.iter().zip(&degree).all(|(b, d)| b <= d), "exponent exceeds degree");
        let mut p = Self::zero(degree);
        if !c.is_zero() {
            p.terms.insert(b, c);
        }
        p
    }

    /// The variable `x_{i j}` with one-based factor index `i` and `j ∈ {0, 1}`.
    pub fn var(i: usize, j: u32) -> Self {
        assert!((1..=4).contains(&i) && j < 2);
        let mut degree = [0; 4];
        degree[i - 1] = 1;
        let mut b = [0; 4];
        b[i - 1] = j;
        Self::monomial(degree, b, CycloNum::one())
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &CycloNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &Exponents) -> CycloNum {
        self.terms.get(b).cloned().unwrap_or_else(CycloNum::zero)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        MultiPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(CycloNum::one()), |acc, _| &acc * self)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MultihomogError> {
        if self.degree != other.degree {
            return Err(MultihomogError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        Ok(out)
    }

    fn add_term(&mut self, b: Exponents, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_insert_with(CycloNum::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn eval(&self, pt: &Point4) -> CycloNum {
        self.eval_coords(&pt.clone().map(|p| p.coords().clone()))
    }

    /// Evaluates at explicit homogeneous coordinates `(x_{i0}, x_{i1})`.
    pub fn eval_coords(&self, coords: &[[CycloNum; 2]; 4]) -> CycloNum {
        let powers: Vec<[Vec<CycloNum>; 2]> = coords
            .iter()
            .enumerate()
            .map(|(i, xy)| {
                std::array::from_fn(|j| {
                    let mut v = vec![CycloNum::one()];
                    for k in 0..self.degree[i] as usize {
                        let next = &v[k] * &xy[j];
                        v.push(next);
                    }
                    v
                })
            })
            .collect();
        self.terms
            .iter()
            .map(|(b, c)| {
                (0..4).fold(c.clone(), |acc, i| {
                    let a = (self.degree[i] - b[i]) as usize;
                    &(&acc * &powers[i][0][a]) * &powers[i][1][b[i] as usize]
                })
            })
            .sum()
    }

    /// `∂/∂x_{i j}` with zero-based factor index `i`.
    pub fn partial(&self, i: usize, j: u32) -> Self {
        let mut degree = self.degree;
        if degree[i] == 0 {
            return Self::zero(degree);
        }
        degree[i] -= 1;
        let mut out = Self::zero(degree);
        for (b, c) in &self.terms {
            let exp = if j == 1 { b[i] } else { self.degree[i] - b[i] };
            if exp == 0 {
                continue;
            }
            let mut nb = *b;
            if j == 1 {
                nb[i] -= 1;
            }
            out.add_term(nb, c * &CycloNum::from_int(exp.into()));
        }
        out
    }

    /// All eight partials, ordered `∂/∂x_{10}, ∂/∂x_{11}, …, ∂/∂x_{41}`.
    pub fn gradient(&self, pt: &Point4) -> [CycloNum; 8] {
        std::array::from_fn(|k| self.partial(k / 2, (k % 2) as u32).eval(pt))
    }

    /// Coefficient vector in the monomial basis of its own degree.
    pub fn to_vector(&self) -> Vec<CycloNum> {
        monomial_basis(self.degree).iter().map(|b| self.coeff(b)).collect()
    }

    pub fn from_vector(degree: Degree, v: &[CycloNum]) -> Self {
        let basis = monomial_basis(degree);
        assert_eq!(basis.len(), v.len());
        let mut p = Self::zero(degree);
        for (b, c) in basis.into_iter().zip(v) {
            p.add_term(b, c.clone());
        }
        p
    }

    /// `Some(λ)` when `other = λ · self` with `self` nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<CycloNum> {
        let (b, c) = self.terms.iter().next()?;
        if self.degree != other.degree {
            return None;
        }
        let lambda = &other.coeff(b) * &c.inv()?;
        (self.scale(&lambda) == *other).then_some(lambda)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched multidegrees; see [`MultiPoly::try_add`].
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("multidegree mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&CycloNum::from_int(-1))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let degree = std::array::from_fn(|i| self.degree[i] + rhs.degree[i]);
        let mut out = MultiPoly::zero(degree);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &rhs.terms {
                out.add_term(std::array::from_fn(|i| b1[i] + b2[i]), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

pub fn monomial_string(degree: Degree, b: &Exponents) -> String {
    let mut parts = Vec::new();
    for i in 0..4 {
        for (j, e) in [(0, degree[i] - b[i]), (1, b[i])] {
            match e {
                0 => {}
                1 => parts.push(format!("x{}{}", i + 1, j)),
                _ => parts.push(format!("x{}{}^{}", i + 1, j, e)),
            }
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let m = monomial_string(self.degree, b);
                if c.is_one() {
                    m
                } else if m == "1" {
                    c.to_string()
                } else {
                    format!("({c})*{m}")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly{:?}[{}]", self.degree, self)
    }
}

fn key_of(degree: Degree, b: &Exponents) -> String {
    (0..4)
        .map(|i| format!("{}{}", degree[i] - b[i], b[i]))
        .collect::<Vec<_>>()
        .join("|")
}

fn parse_key(key: &str) -> Result<(Degree, Exponents), MultihomogError> {
    let bad = || MultihomogError::BadKey(key.to_string());
    let groups: Vec<&str> = key.split('|').collect();
    if groups.len() != 4 {
        return Err(bad());
    }
    let mut degree = [0; 4];
    let mut b = [0; 4];
    for (i, g) in groups.iter().enumerate() {
        let digits: Vec<u32> = g.chars().map(|c| c.to_digit(10)).collect::<Option<_>>().ok_or_else(bad)?;
        let [a, e] = digits[..] else { return Err(bad()) };
        degree[i] = a + e;
        b[i] = e;
    }
    Ok((degree, b))
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, &CycloNum> = self.terms.iter().map(|(b, c)| (key_of(self.degree, b), c)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let map = BTreeMap::<String, CycloNum>::deserialize(d)?;
        let mut degree = None;
        let mut p = MultiPoly::zero([0; 4]);
        for (k, c) in map {
            let (deg, b) = parse_key(&k).map_err(D::Error::custom)?;
            match degree {
                None => {
                    degree = Some(deg);
                    p.degree = deg;
                }
                Some(d0) if d0 != deg => return Err(D::Error::custom(MultihomogError::DegreeMismatch(d0, deg))),
                _ => {}
            }
            p.add_term(b, c);
        }
        Ok(p)
    }
}

/// All exponent vectors `b` of a multidegree, lexicographically ordered.
pub fn monomial_basis(degree: Degree) -> Vec<Exponents> {
    let mut out = Vec::new();
    for b0 in 0..=degree[0] {
        for b1 in 0..=degree[1] {
            for b2 in 0..=degree[2] {
                for b3 in 0..=degree[3] {
                    out.push([b0, b1, b2, b3]);
                }
            }
        }
    }
    out
}

pub fn section_dimension(degree: Degree) -> usize {
    degree.iter().map(|&d| d as usize + 1).product()
}

/// An automorphism together with explicit 2×2 representatives, so that it
/// acts linearly (not just projectively) on sections.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LiftedAuto {
    reps: [Mat2; 4],
    perm: Perm,
}

impl LiftedAuto {
    pub fn new(reps: [Mat2; 4], perm: Perm) -> Result<Self, MultihomogError> {
        if let Some(i) = reps.iter().position(|m| m.det().is_zero()) {
            return Err(MultihomogError::SingularLift(i));
        }
        Ok(LiftedAuto { reps, perm })
    }

    /// Lifts each projective class by its canonical representative.
    pub fn canonical(g: &ProductAuto) -> Self {
        LiftedAuto {
            reps: g.mats.clone().map(|m| m.rep().clone()),
            perm: g.perm,
        }
    }

    pub fn identity() -> Self {
        Self::canonical(&ProductAuto::identity())
    }

    pub fn auto(&self) -> ProductAuto {
        ProductAuto::new(self.reps.clone().map(ProjMatrix::from), self.perm)
    }

    pub fn reps(&self) -> &[Mat2; 4] {
        &self.reps
    }

    pub fn perm(&self) -> Perm {
        self.perm
    }

    /// `self ∘ other`, composing representatives as matrices.
    pub fn then_after(&self, other: &LiftedAuto) -> LiftedAuto {
        LiftedAuto {
            reps: std::array::from_fn(|i| &self.reps[i] * &other.reps[self.perm.apply(i)]),
            perm: other.perm.after(&self.perm),
        }
    }

    pub fn with_rep(&self, slot: usize, rep: Mat2) -> Result<Self, MultihomogError> {
        let mut reps = self.reps.clone();
        reps[slot] = rep;
        Self::new(reps, self.perm)
    }
}

impl fmt::Debug for LiftedAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lift({:?}, {})", self.reps, self.perm)
    }
}

/// Coefficients, indexed by the power of `y₁`, of `(p y₀ + q y₁)^a (r y₀ + s y₁)^b`.
fn binary_form_power(m: &Mat2, a: u32, b: u32) -> Vec<CycloNum> {
    let [p, q, r, s] = m.entries();
    let mut acc = vec![CycloNum::one()];
    let times = |acc: &Vec<CycloNum>, lo: &CycloNum, hi: &CycloNum| {
        let mut out = vec![CycloNum::zero(); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out[k] += &(c * lo);
            out[k + 1] += &(c * hi);
        }
        out
    };
    for _ in 0..a {
        acc = times(&acc, p, q);
    }
    for _ in 0..b {
        acc = times(&acc, r, s);
    }
    acc
}

/// `(ρ(g) p)(x) = p(g⁻¹ x)`.
pub fn pullback(g: &LiftedAuto, p: &MultiPoly) -> MultiPoly {
    let sinv = g.perm.inverse();
    // g⁻¹ = (C, σ⁻¹) with C_i = A_{σ⁻¹(i)}⁻¹; slot i of p is fed factor σ⁻¹(i).
    let c: [Mat2; 4] = std::array::from_fn(|i| g.reps[sinv.apply(i)].inverse().expect("lifts have invertible representatives"));
    let mut new_degree = [0; 4];
    for i in 0..4 {
        new_degree[sinv.apply(i)] = p.degree[i];
    }
    let mut cache: HashMap<(usize, u32), Vec<CycloNum>> = HashMap::new();
    let mut out = MultiPoly::zero(new_degree);
    for (b, coeff) in &p.terms {
        let forms: Vec<Vec<CycloNum>> = (0..4)
            .map(|i| {
                cache
                    .entry((i, b[i]))
                    .or_insert_with(|| binary_form_power(&c[i], p.degree[i] - b[i], b[i]))
                    .clone()
            })
            .collect();
        let mut partial: Vec<(Exponents, CycloNum)> = vec![([0; 4], coeff.clone())];
        for (i, form) in forms.iter().enumerate() {
            let target = sinv.apply(i);
            let mut next = Vec::with_capacity(partial.len() * form.len());
            for (nb, c0) in &partial {
                for (k, fk) in form.iter().enumerate() {
                    if fk.is_zero() {
                        continue;
                    }
                    let mut e = *nb;
                    e[target] = k as u32;
                    next.push((e, c0 * fk));
                }
            }
            partial = next;
        }
        for (e, v) in partial {
            out.add_term(e, v);
        }
    }
    out
}

/// Matrix of `ρ(g)` on the monomial basis of `degree`; column `c` holds the
/// pullback of basis monomial `c`.
pub fn action_matrix(g: &LiftedAuto, degree: Degree) -> Result<ExactMatrix, MultihomogError> {
    let sinv = g.perm.inverse();
    if (0..4).any(|i| degree[sinv.apply(i)] != degree[i]) {
        return Err(MultihomogError::DegreeNotPreserved(degree));
    }
    let basis = monomial_basis(degree);
    let columns = basis
        .iter()
        .map(|b| pullback(g, &MultiPoly::monomial(degree, *b, CycloNum::one())).to_vector())
        .collect();
    Ok(ExactMatrix::from_columns(basis.len(), columns))
}

/// Basis (as columns) of `{p : ρ(g_k) p = λ_k p for all k}`.
pub fn eigensection_space(gens: &[LiftedAuto], degree: Degree, eigenvalues: &[CycloNum]) -> Result<ExactMatrix, MultihomogError> {
    assert_eq!(gens.len(), eigenvalues.len(), "one eigenvalue per generator");
    let n = section_dimension(degree);
    let mut stacked = ExactMatrix::zeros(0, n);
    for (g, lambda) in gens.iter().zip(eigenvalues) {
        let m = action_matrix(g, degree)?;
        stacked = stacked.vstack(&m.sub(&ExactMatrix::identity(n).scale(lambda)));
    }
    Ok(stacked.kernel())
}

/// The scalar `λ` with `ρ(g) p = λ p`, if `p` is an eigensection.
pub fn eigenvalue_of(g: &LiftedAuto, p: &MultiPoly) -> Option<CycloNum> {
    p.ratio_to(&pullback(g, p))
}

/// Extremal monomials `∏ x_{i·}²` of degree (2,2,2,2), in basis order.
pub fn extremal_monomials() -> Vec<Exponents> {
    monomial_basis([1; 4]).into_iter().map(|b| b.map(|e| 2 * e)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportVerdict {
    pub exists: bool,
    /// Two extremal monomials that cannot share an eigenvector with both
    /// coefficients nonzero.
    pub witness: Option<(Exponents, Exponents)>,
}

impl SupportVerdict {
    pub fn witness_strings(&self) -> Option<(String, String)> {
        self.witness
            .map(|(a, b)| (monomial_string([2; 4], &a), monomial_string([2; 4], &b)))
    }
}

/// Combined constraint `λ^k = c`; merges two constraints if compatible.
fn merge_root_constraint((k1, c1): (u64, CycloNum), (k2, c2): (u64, &CycloNum)) -> Option<(u64, CycloNum)> {
    let eg = (k1 as i64).extended_gcd(&(k2 as i64));
    let g = eg.gcd as u64;
    let d = &c1.pow(eg.x)? * &c2.pow(eg.y)?;
    let ok = d.pow((k1 / g) as i64)? == c1 && d.pow((k2 / g) as i64)? == *c2;
    ok.then_some((g, d))
}

/// Decides whether `ρ(g)` has an eigenvector supported on all 16 extremal
/// monomials, given that it permutes them up to scalars.
pub fn full_support_eigenvector_exists(g: &LiftedAuto) -> Result<SupportVerdict, MultihomogError> {
    let extremal = extremal_monomials();
    let mut image: HashMap<Exponents, (Exponents, CycloNum)> = HashMap::new();
    for b in &extremal {
        let p = pullback(g, &MultiPoly::monomial([2; 4], *b, CycloNum::one()));
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((nb, c)), None) if nb.iter().all(|e| e % 2 == 0) => {
                image.insert(*b, (*nb, c.clone()));
            }
            _ => {
                return Err(MultihomogError::NotMonomialFrame {
                    monomial: monomial_string([2; 4], b),
                })
            }
        }
    }
    // Each cycle m₀ → m₁ → … of length k with scalar product C forces λ^k = C.
    let mut seen: HashMap<Exponents, ()> = HashMap::new();
    let mut cycles: Vec<(Exponents, u64, CycloNum)> = Vec::new();
    for b in &extremal {
        if seen.contains_key(b) {
            continue;
        }
        let (mut cur, mut k, mut prod) = (*b, 0u64, CycloNum::one());
        loop {
            seen.insert(cur, ());
            let (next, c) = &image[&cur];
            prod = &prod * c;
            k += 1;
            cur = *next;
            if cur == *b {
                break;
            }
        }
        cycles.push((*b, k, prod));
    }
    let mut state = (cycles[0].1, cycles[0].2.clone());
    for l in 1..cycles.len() {
        match merge_root_constraint(state.clone(), (cycles[l].1, &cycles[l].2)) {
            Some(s) => state = s,
            None => {
                let partner = (0..l)
                    .find(|&j| merge_root_constraint((cycles[j].1, cycles[j].2.clone()), (cycles[l].1, &cycles[l].2)).is_none())
                    .unwrap_or(0);
                return Ok(SupportVerdict {
                    exists: false,
                    witness: Some((cycles[partner].0, cycles[l].0)),
                });
            }
        }
    }
    Ok(SupportVerdict {
        exists: true,
        witness: None,
    })
}

/// Breadth-first closure of lifts, in the same element order as
/// [`crate::group::closure`]; each projective element keeps its first lift.
pub fn lifted_closure(gens: &[LiftedAuto], cap: usize) -> Result<Vec<LiftedAuto>, GroupError> {
    let mut found: IndexMap<ProductAuto, LiftedAuto> = IndexMap::new();
    found.insert(ProductAuto::identity(), LiftedAuto::identity());
    let projective: Vec<ProductAuto> = gens.iter().map(LiftedAuto::auto).collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for (g, pg) in gens.iter().zip(&projective) {
            let (key, lift) = found.get_index(idx).expect("queued index exists");
            let next_key = compose(key, pg);
            if found.contains_key(&next_key) {
                continue;
            }
            let next_lift = lift.then_after(g);
            found.insert(next_key, next_lift);
            if found.len() > cap {
                return Err(GroupError::CapExceeded { cap });
            }
            queue.push_back(found.len() - 1);
        }
    }
    Ok(found.into_values().collect())
}

fn x(i: usize, j: u32) -> MultiPoly {
    MultiPoly::var(i, j)
}

fn sq_sum(i: usize) -> MultiPoly {
    x(i, 0).pow(2) + x(i, 1).pow(2)
}

fn sq_diff(i: usize) -> MultiPoly {
    x(i, 0).pow(2) - x(i, 1).pow(2)
}

fn cross(i: usize) -> MultiPoly {
    x(i, 0) * x(i, 1)
}

fn family(second: impl Fn(usize) -> MultiPoly) -> [MultiPoly; 6] {
    let q0 = cross(1) * cross(2) * cross(3) * cross(4);
    let q1 = (x(1, 1).pow(2) * x(2, 0).pow(2) + x(1, 0).pow(2) * x(2, 1).pow(2))
        * (x(3, 1).pow(2) * x(4, 0).pow(2) + x(3, 0).pow(2) * x(4, 1).pow(2));
    let q2 = cross(2) * cross(3) * second(1) * second(4) - cross(1) * cross(4) * second(2) * second(3);
    let q3 = cross(1) * cross(3) * sq_sum(2) * sq_sum(4) + cross(2) * cross(4) * sq_sum(1) * sq_sum(3);
    let q4 = sq_sum(1) * sq_sum(2) * sq_sum(3) * sq_sum(4);
    let q5 = (x(1, 0).pow(2) * x(2, 0).pow(2) + x(1, 1).pow(2) * x(2, 1).pow(2))
        * (x(3, 0).pow(2) * x(4, 0).pow(2) + x(3, 1).pow(2) * x(4, 1).pow(2));
    [q0, q1, q2, q3, q4, q5]
}

/// Q₀..Q₅, invariant under the Z4 ⋊ Z4 action.
pub fn q_family() -> [MultiPoly; 6] {
    family(sq_sum)
}

/// Q′₀..Q′₅, invariant under the Z4 × Z4 action.
pub fn q_prime_family() -> [MultiPoly; 6] {
    family(sq_diff)
}

/// The invariant section F₁ of degree (1,1,1,1).
pub fn f1() -> MultiPoly {
    let i = MultiPoly::constant(CycloNum::i());
    (x(2, 0) * x(3, 0) - x(2, 1) * x(3, 1)) * (x(1, 1) * x(4, 0) + x(1, 0) * x(4, 1))
        - i * (x(2, 0) * x(3, 1) - x(2, 1) * x(3, 0)) * (x(1, 0) * x(4, 0) + x(1, 1) * x(4, 1))
}

/// Named built-in polynomials: `Q0`..`Q5`, `Qp0`..`Qp5`, `F1`.
pub fn builtin_poly(name: &str) -> Option<MultiPoly> {
    if name == "F1" {
        return Some(f1());
    }
    let (fam, idx) = if let Some(rest) = name.strip_prefix("Qp") {
        (q_prime_family(), rest)
    } else {
        (q_family(), name.strip_prefix('Q')?)
    };
    let k: usize = idx.parse().ok()?;
    fam.get(k).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::builtin_group;
    use crate::moebius::P1Point;

    fn pt(coords: [(i64, CycloNum); 4]) -> Point4 {
        coords.map(|(a, b)| P1Point::new([CycloNum::from_int(a), b]).unwrap())
    }

    fn lifts(name: &str) -> Vec<LiftedAuto> {
        builtin_group(name).unwrap().iter().map(LiftedAuto::canonical).collect()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(monomial_basis([2; 4]).len(), 81);
        assert_eq!(monomial_basis([1; 4]).len(), 16);
        assert_eq!(monomial_basis([1; 4])[1], [0, 0, 0, 1]);
    }

    #[test]
    fn evaluations() {
        let [q0, _, _, _, q4, _] = q_family();
        let zero = CycloNum::zero;
        let p = pt([(1, zero()), (1, zero()), (1, CycloNum::i()), (1, CycloNum::one())]);
        assert!(q0.eval(&p).is_zero());
        let origin = pt([(1, zero()), (1, zero()), (1, zero()), (1, zero())]);
        assert!(q4.eval(&origin).is_one());
        // every term of F1 carries some x_{i1}, so (1:0)^4 is a zero
        assert!(f1().eval(&origin).is_zero());
    }

    #[test]
    fn gradient_by_hand() {
        // Q4 = ∏(x_{i0}² + x_{i1}²); at (0:1),(0:1),(1:1),(1:-i) the only
        // surviving factor product for ∂/∂x40 is 1·1·2·(2·1).
        let [_, _, _, _, q4, _] = q_family();
        let p = pt([
            (0, CycloNum::one()),
            (0, CycloNum::one()),
            (1, CycloNum::one()),
            (1, -CycloNum::i()),
        ]);
        let g = q4.gradient(&p);
        assert!(g[0].is_zero());
        assert_eq!(g[6], CycloNum::from_int(4));
        assert_eq!(g[7], CycloNum::from_int(-4) * CycloNum::i());
        assert!(MultiPoly::zero([2; 4]).gradient(&p).iter().all(CycloNum::is_zero));
    }

    #[test]
    fn pullback_identity_and_families() {
        let id = LiftedAuto::identity();
        for q in q_family() {
            assert_eq!(pullback(&id, &q), q);
        }
        let gens = lifts("z4sz4");
        for g in &gens {
            let lambdas: Vec<CycloNum> = q_family().iter().map(|q| eigenvalue_of(g, q).unwrap()).collect();
            assert!(lambdas.iter().all(|l| *l == lambdas[0]));
            assert!(eigenvalue_of(g, &f1()).is_some());
        }
        for g in &lifts("z4xz4") {
            let lambdas: Vec<CycloNum> = q_prime_family().iter().map(|q| eigenvalue_of(g, q).unwrap()).collect();
            assert!(lambdas.iter().all(|l| *l == lambdas[0]));
        }
    }

    #[test]
    fn pullback_is_a_left_action() {
        let gens = lifts("z4sz4");
        let (g, h) = (&gens[0], &gens[1]);
        let p = x(1, 0) * x(2, 1) * x(3, 1) * x(4, 0) + x(1, 1) * x(2, 1) * x(3, 0) * x(4, 0).scale(&CycloNum::z());
        assert_eq!(pullback(&g.then_after(h), &p), pullback(g, &pullback(h, &p)));
    }

    #[test]
    fn pullback_permutes_uneven_degrees() {
        let g = lifts("z8")[0].clone();
        let p = x(1, 0).pow(3);
        let q = pullback(&g, &p);
        assert_eq!(q.degree().iter().sum::<u32>(), 3);
        assert_ne!(q.degree(), p.degree());
    }

    #[test]
    fn action_matrix_identity() {
        let m = action_matrix(&LiftedAuto::identity(), [1; 4]).unwrap();
        assert_eq!(m, ExactMatrix::identity(16));
        assert_eq!(m.trace(), CycloNum::from_int(16));
    }

    #[test]
    fn obstruction_for_diagonal_order_four() {
        let di = Mat2::diag(CycloNum::one(), CycloNum::i());
        let g = LiftedAuto::new([di.clone(), di.clone(), di.clone(), di], Perm::IDENTITY).unwrap();
        let v = full_support_eigenvector_exists(&g).unwrap();
        assert!(!v.exists);
        assert_eq!(
            v.witness_strings().unwrap(),
            ("x10^2*x20^2*x30^2*x40^2".to_string(), "x10^2*x20^2*x30^2*x41^2".to_string())
        );
        assert!(full_support_eigenvector_exists(&LiftedAuto::identity()).unwrap().exists);
        assert!(full_support_eigenvector_exists(&lifts("z4")[0]).unwrap().exists);
        let b = lifts("z2xz2")[1].clone();
        assert!(full_support_eigenvector_exists(&b).unwrap().exists);
        let t = LiftedAuto::new(
            [Mat2::from_ints(1, 1, 0, 1), Mat2::identity(), Mat2::identity(), Mat2::identity()],
            Perm::IDENTITY,
        )
        .unwrap();
        assert!(matches!(
            full_support_eigenvector_exists(&t),
            Err(MultihomogError::NotMonomialFrame { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let q = q_family()[2].clone();
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains("\"20|11|11|20\""));
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<MultiPoly>(r#"{"2|11|11|11": "1"}"#).is_err());
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin_poly("Q4"), Some(q_family()[4].clone()));
        assert_eq!(builtin_poly("Qp2"), Some(q_prime_family()[2].clone()));
        assert_eq!(builtin_poly("F1"), Some(f1()));
        assert_eq!(builtin_poly("Q6"), None);
    }
}
