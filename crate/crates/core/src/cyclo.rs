//! Exact arithmetic in the cyclotomic field Q(z), z a primitive 16th root of unity.
//!
//! Elements are stored in the power basis `1, z, ..., z^7` with the relation
//! `z^8 = -1`. The field is treated as the top of the tower
//! `Q ⊂ Q(i) ⊂ Q(ζ8) ⊂ Q(ζ16)`, each step adjoining a square root of the
//! previous generator; inversion and square roots recurse down that tower.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Degree of Q(ζ16) over Q.
pub const DEGREE: usize = 8;

/// An element of Q(ζ16).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloNum {
    coeffs: [BigRational; DEGREE],
}

/// Error produced while parsing the textual form of a [`CycloNum`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum {
            coeffs: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut out = Self::zero();
        out.coeffs[0] = q;
        out
    }

    pub fn from_coeffs(coeffs: [BigRational; DEGREE]) -> Self {
        CycloNum { coeffs }
    }

    /// `z^k` for any integer `k`; uses `z^16 = 1`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(16) as usize;
        let mut out = Self::zero();
        if k < DEGREE {
            out.coeffs[k] = BigRational::one();
        } else {
            out.coeffs[k - DEGREE] = -BigRational::one();
        }
        out
    }

    /// The generator z = ζ16.
    pub fn z() -> Self {
        Self::zeta_pow(1)
    }

    /// The imaginary unit, `z^4`.
    pub fn i() -> Self {
        Self::zeta_pow(4)
    }

    /// All sixteen 16th roots of unity, `z^0 .. z^15`.
    pub fn roots_of_unity() -> Vec<Self> {
        (0..16).map(Self::zeta_pow).collect()
    }

    pub fn coeffs(&self) -> &[BigRational; DEGREE] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then_some(&self.coeffs[0])
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let v = tower::inverse(&self.coeffs);
        Some(Self::from_vec(v))
    }

    /// Integer power; negative exponents invert. Returns `None` for `0^-n`.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    /// A square root inside Q(ζ16), if one exists. Of the two roots, the one
    /// returned is deterministic but otherwise unspecified.
    pub fn sqrt(&self) -> Option<Self> {
        tower::sqrt(&self.coeffs).map(Self::from_vec)
    }

    fn from_vec(v: Vec<BigRational>) -> Self {
        let mut it = v.into_iter();
        CycloNum {
            coeffs: std::array::from_fn(|_| it.next().unwrap_or_else(BigRational::zero)),
        }
    }

    fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl Default for CycloNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycloNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        CycloNum {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] + &rhs.coeffs[k]),
        }
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        CycloNum {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] - &rhs.coeffs[k]),
        }
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        CycloNum::from_vec(tower::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            coeffs: std::array::from_fn(|k| -&self.coeffs[k]),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

/// Panics on division by zero, like the integer types.
impl<'a> Div<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CycloNum) -> CycloNum {
        self * &rhs.inv().expect("division by zero in Q(ζ16)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $f(self, rhs: CycloNum) -> CycloNum { (&self).$f(&rhs) }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $f(self, rhs: &CycloNum) -> CycloNum { (&self).$f(rhs) }
        }
        impl $tr<CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $f(self, rhs: CycloNum) -> CycloNum { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for CycloNum {
    fn sum<I: Iterator<Item = CycloNum>>(iter: I) -> Self {
        iter.fold(CycloNum::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl fmt::Display for CycloNum {
    /// Lowest degree first, e.g. `-1/2 + 1/2*z^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.nonzero_terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum({self})")
    }
}

impl FromStr for CycloNum {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        cyclo_parse(s)
    }
}

impl serde::Serialize for CycloNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for CycloNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        cyclo_parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a polynomial expression in `z` (with `i` accepted as `z^4`).
///
/// Supports `+ - * / ^`, parentheses and integer literals; exponents are
/// non-negative integer literals.
pub fn cyclo_parse(expr: &str) -> Result<CycloNum, ParseError> {
    let mut p = Parser {
        src: expr.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CycloNum, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CycloNum, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = acc * rhs;
            } else {
                let inv = rhs.inv().ok_or(ParseError {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc = acc * inv;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CycloNum, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<CycloNum, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected non-negative integer exponent"));
            }
            let e: i64 = digits.parse().map_err(|_| ParseError {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.pow(e).expect("non-negative exponent"));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<CycloNum, ParseError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(CycloNum::z())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(CycloNum::i())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("ascii digits");
                Ok(CycloNum::from_rational(BigRational::from_integer(n)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Arithmetic on coefficient vectors of length `n = 2^k` modulo `t^n + 1`.
///
/// An element `x` of the length-`n` field splits as `p(t^2) + t*q(t^2)` with
/// `p, q` in the length-`n/2` field, whose generator is `t^2` (for `n = 2`
/// the subfield is Q and `t^2 = -1`).
mod tower {
    use super::*;

    type Vector = Vec<BigRational>;

    fn integral(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
        let den = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = a.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (nums, den)
    }

    /// Product in `Q[t]/(t^n + 1)`.
    pub(super) fn mul(a: &[BigRational], b: &[BigRational]) -> Vector {
        let n = a.len();
        let ((na, da), (nb, db)) = (integral(a), integral(b));
        let mut acc = vec![BigInt::zero(); n];
        for (j, x) in na.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (k, y) in nb.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let p = x * y;
                if j + k < n {
                    acc[j + k] += p;
                } else {
                    acc[j + k - n] -= p;
                }
            }
        }
        let den = da * db;
        acc.into_iter().map(|x| BigRational::new(x, den.clone())).collect()
    }

    fn add(a: &[BigRational], b: &[BigRational]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn scale(a: &[BigRational], c: &BigRational) -> Vector {
        a.iter().map(|x| x * c).collect()
    }

    fn is_zero(a: &[BigRational]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn split(x: &[BigRational]) -> (Vector, Vector) {
        let even = x.iter().step_by(2).cloned().collect();
        let odd = x.iter().skip(1).step_by(2).cloned().collect();
        (even, odd)
    }

    fn join(p: Vector, q: Vector) -> Vector {
        p.into_iter().zip(q).flat_map(|(a, b)| [a, b]).collect()
    }

    /// `t^2` written in the subfield of length `m`.
    fn sub_generator(m: usize) -> Vector {
        let mut g = vec![BigRational::zero(); m];
        if m == 1 {
            g[0] = -BigRational::one();
        } else {
            g[1] = BigRational::one();
        }
        g
    }

    pub(super) fn inverse(x: &[BigRational]) -> Vector {
        let n = x.len();
        if n == 1 {
            return vec![x[0].recip()];
        }
        let (p, q) = split(x);
        let s = sub_generator(n / 2);
        // (p + t q)(p - t q) = p^2 - s q^2 lies in the subfield.
        let norm = sub(&mul(&p, &p), &mul(&s, &mul(&q, &q)));
        let ninv = inverse(&norm);
        let ip = mul(&p, &ninv);
        let iq: Vector = mul(&q, &ninv).into_iter().map(|c| -c).collect();
        join(ip, iq)
    }

    fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
        if q.is_negative() {
            return None;
        }
        let n = q.numer().sqrt();
        let d = q.denom().sqrt();
        (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
    }

    pub(super) fn sqrt(x: &[BigRational]) -> Option<Vector> {
        let n = x.len();
        if n == 1 {
            return rational_sqrt(&x[0]).map(|r| vec![r]);
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let (a, b) = split(x);
        let s = sub_generator(n / 2);
        let zero = vec![BigRational::zero(); n / 2];
        if is_zero(&b) {
            if let Some(r) = sqrt(&a) {
                return Some(join(r, zero));
            }
            let r = sqrt(&mul(&a, &inverse(&s)))?;
            return Some(join(zero, r));
        }
        // y = p + t q with p^2 + s q^2 = a and 2 p q = b, so p^2 is a root of
        // u^2 - a u + s b^2 / 4 and the discriminant is the norm of x.
        let norm = sub(&mul(&a, &a), &mul(&s, &mul(&b, &b)));
        let r = sqrt(&norm)?;
        for cand in [add(&a, &r), sub(&a, &r)] {
            let u = scale(&cand, &half);
            if is_zero(&u) {
                continue;
            }
            if let Some(p) = sqrt(&u) {
                let q = mul(&scale(&b, &half), &inverse(&p));
                let y = join(p, q);
                if mul(&y, &y) == x {
                    return Some(y);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> CycloNum {
        cyclo_parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("z^8"), CycloNum::from_int(-1));
        assert_eq!(p("z^4 * z^4"), CycloNum::from_int(-1));
        assert_eq!(p("(1 + z^4) * (1/2 - 1/2*z^4)"), CycloNum::one());
        assert_eq!(p("i"), p("z^4"));
        assert_eq!(p("-(z - 3)^2"), -(p("z^2 - 6*z + 9")));
    }

    #[test]
    fn printing_is_lowest_degree_first() {
        assert_eq!(p("1/2*z^4 - 1/2").to_string(), "-1/2 + 1/2*z^4");
        assert_eq!(CycloNum::zero().to_string(), "0");
        assert_eq!(p("-z^4").to_string(), "-z^4");
        assert_eq!(p("z - 2*z^3").to_string(), "z - 2*z^3");
        assert_eq!(p("z^15").to_string(), "-z^7");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = cyclo_parse("1 + * z").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = cyclo_parse("(z + 1").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(cyclo_parse("z^").is_err());
        assert!(cyclo_parse("1/0").is_err());
        assert!(cyclo_parse("2 x").is_err());
        assert!(cyclo_parse("").is_err());
    }

    #[test]
    fn inverse_of_generator_and_sums() {
        let z = CycloNum::z();
        assert_eq!(z.inv().unwrap(), CycloNum::zeta_pow(15));
        let x = p("1 + z + 3*z^5 - 2/7*z^6");
        assert!((&x * &x.inv().unwrap()).is_one());
        assert!(CycloNum::zero().inv().is_none());
    }

    #[test]
    fn square_roots() {
        // i = z^4 has square roots ±z^2.
        let r = CycloNum::i().sqrt().unwrap();
        assert_eq!(&r * &r, CycloNum::i());
        // 2 = (z^2 + z^-2)^2 since z^2 + z^-2 = √2.
        let r = CycloNum::from_int(2).sqrt().unwrap();
        assert_eq!(&r * &r, CycloNum::from_int(2));
        // every 16th root of unity is a square of a 32nd root, which is not in the field
        assert!(CycloNum::z().sqrt().is_none());
        assert!(CycloNum::from_int(3).sqrt().is_none());
        let x = p("3 - z + 2/3*z^5");
        let sq = &x * &x;
        let r = sq.sqrt().unwrap();
        assert!(r == x || r == -&x);
        assert_eq!(CycloNum::from_int(-1).sqrt().map(|r| &r * &r), Some(CycloNum::from_int(-1)));
    }

    #[test]
    fn roots_of_unity_are_distinct() {
        let roots = CycloNum::roots_of_unity();
        for (a, x) in roots.iter().enumerate() {
            assert!(x.pow(16).unwrap().is_one());
            for y in &roots[a + 1..] {
                assert_ne!(x, y);
            }
        }
    }
}
