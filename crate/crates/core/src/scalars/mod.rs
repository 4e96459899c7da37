//! Exact arithmetic in ℚ(q).
//!
//! A [`ScalarQ`] is a reduced fraction of an integer Laurent polynomial by an integer
//! polynomial with nonzero constant term and positive leading coefficient, with coprime
//! contents. The representation is canonical, so `==` is equality of rational functions.

mod int;
pub mod linalg;
pub mod modp;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use int::Int;
pub use poly::Laurent;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not regular at q = 0")]
    NotRegular(String),
    #[error("q-binomial [{n} choose {k}] is outside 0 <= k <= n")]
    BinomialDomain { n: i64, k: i64 },
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarQ {
    num: Laurent,
    den: Vec<Int>,
}

impl ScalarQ {
    pub fn zero() -> ScalarQ {
        ScalarQ { num: Laurent::zero(), den: vec![Int::ONE] }
    }

    pub fn one() -> ScalarQ {
        ScalarQ::int(1)
    }

    pub fn int(v: i64) -> ScalarQ {
        ScalarQ { num: Laurent::constant(Int::from(v)), den: vec![Int::ONE] }
    }

    /// The monomial `q^k`.
    pub fn q_pow(k: i64) -> ScalarQ {
        ScalarQ::monomial(1, k)
    }

    pub fn monomial(c: i64, k: i64) -> ScalarQ {
        ScalarQ { num: Laurent::monomial(Int::from(c), exp32(k)), den: vec![Int::ONE] }
    }

    pub fn from_laurent(num: Laurent) -> ScalarQ {
        ScalarQ { num, den: vec![Int::ONE] }
    }

    /// Builds `num / den` from Laurent polynomials and canonicalizes.
    pub fn from_fraction(num: Laurent, den: Laurent) -> Result<ScalarQ, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let num = num.shift(-den.low());
        let den = den.coeffs().to_vec();
        Ok(ScalarQ::canonical(num, den))
    }

    fn canonical(num: Laurent, den: Vec<Int>) -> ScalarQ {
        if num.is_zero() {
            return ScalarQ::zero();
        }
        let (mut num, mut den) = (num, den);
        if den.len() > 1 {
            let g = poly::poly_gcd(num.coeffs(), &den);
            if g.len() > 1 {
                let n = poly::poly_div_exact(num.coeffs(), &g).expect("gcd divides numerator");
                num = Laurent::from_coeffs(num.low(), n);
                den = poly::poly_div_exact(&den, &g).expect("gcd divides denominator");
            }
        }
        ScalarQ::fix_content(num, den)
    }

    /// Restores coprime contents and a positive leading denominator coefficient.
    fn fix_content(mut num: Laurent, mut den: Vec<Int>) -> ScalarQ {
        let g = poly::content(&den).gcd(&num.content());
        if !g.is_one() {
            num = num.div_int_exact(&g);
            for d in den.iter_mut() {
                *d = d.div_exact(&g);
            }
        }
        if den.last().unwrap().is_negative() {
            num = -&num;
            for d in den.iter_mut() {
                *d = -&*d;
            }
        }
        ScalarQ { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.is_laurent()
    }

    /// Membership in ℚ[q, q⁻¹].
    pub fn is_laurent(&self) -> bool {
        self.den.len() == 1
    }

    /// Membership in ℤ[q, q⁻¹].
    pub fn is_integral_laurent(&self) -> bool {
        self.den.len() == 1 && self.den[0].is_one()
    }

    /// Membership in A₀: no pole at q = 0.
    pub fn is_regular_at_0(&self) -> bool {
        self.num.is_zero() || self.num.low() >= 0
    }

    /// The numerator, when the denominator is 1.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        if self.is_integral_laurent() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> Laurent {
        Laurent::from_coeffs(0, self.den.clone())
    }

    /// Value at q = 0.
    pub fn eval0(&self) -> Result<BigRational, ScalarError> {
        if !self.is_regular_at_0() {
            return Err(ScalarError::NotRegular(self.to_string()));
        }
        let n: BigInt = self.num.coeff(0).to_big();
        Ok(BigRational::new(n, self.den[0].to_big()))
    }

    /// q ↦ q⁻¹.
    pub fn bar(&self) -> ScalarQ {
        if self.is_laurent() {
            return ScalarQ { num: self.num.bar(), den: self.den.clone() };
        }
        let d = Laurent::from_coeffs(0, self.den.clone()).bar();
        // num(q⁻¹) / (q^{-deg} D*(q))
        let num = self.num.bar().shift(-d.low());
        ScalarQ::fix_content(num, d.coeffs().to_vec())
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> ScalarQ {
        ScalarQ { num: self.num.shift(exp32(k)), den: self.den.clone() }
    }

    pub fn scale_int(&self, v: i64) -> ScalarQ {
        if v == 0 {
            return ScalarQ::zero();
        }
        ScalarQ::fix_content(self.num.scale(&Int::from(v)), self.den.clone())
    }

    pub fn inv(&self) -> Result<ScalarQ, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let low = self.num.low();
        let num = Laurent::from_coeffs(-low, self.den.clone());
        let den = self.num.coeffs().to_vec();
        Ok(ScalarQ::fix_content(num, den))
    }

    pub fn checked_div(&self, rhs: &ScalarQ) -> Result<ScalarQ, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> ScalarQ {
        let mut acc = ScalarQ::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// If this is `± q^k`, returns `(sign, k)`.
    pub fn as_signed_monomial(&self) -> Option<(i64, i64)> {
        if !self.is_integral_laurent() || self.num.coeffs().len() != 1 {
            return None;
        }
        match self.num.coeffs()[0].to_i64() {
            Some(1) => Some((1, self.num.low() as i64)),
            Some(-1) => Some((-1, self.num.low() as i64)),
            _ => None,
        }
    }

    /// Σ_{k>0} x_k q^k of an integral Laurent value.
    pub fn positive_part(&self) -> Option<ScalarQ> {
        let l = self.as_laurent()?;
        if l.is_zero() || l.high() < 1 {
            return Some(ScalarQ::zero());
        }
        let low = l.low().max(1);
        Some(ScalarQ::from_laurent(Laurent::from_coeffs(low, (low..=l.high()).map(|k| l.coeff(k)).collect())))
    }

    /// Coefficient of q^k of a Laurent value.
    pub fn laurent_coeff(&self, k: i64) -> Option<Int> {
        if self.is_integral_laurent() {
            Some(self.num.coeff(exp32(k)))
        } else {
            None
        }
    }

    /// Residue of the value at `q = x` modulo `p`, if the denominator does not vanish there.
    pub fn eval_mod(&self, x: u64, p: u64) -> Option<u64> {
        let d = Laurent::from_coeffs(0, self.den.clone()).eval_mod(x, p);
        if d == 0 {
            return None;
        }
        Some(modp::mul(self.num.eval_mod(x, p), modp::inv(d, p), p))
    }
}

fn exp32(k: i64) -> i32 {
    i32::try_from(k).expect("q-exponent out of range")
}

/// `[n]_d = (q^{dn} − q^{−dn}) / (q^d − q^{−d})`.
pub fn qint(n: i64, d: i64) -> ScalarQ {
    assert!(d > 0, "symmetrizer must be positive");
    if n == 0 {
        return ScalarQ::zero();
    }
    let m = n.abs();
    let mut c = vec![Int::ZERO; (2 * d * (m - 1) + 1) as usize];
    for j in 0..m {
        c[(2 * d * j) as usize] = Int::from(n.signum());
    }
    ScalarQ::from_laurent(Laurent::from_coeffs(exp32(-d * (m - 1)), c))
}

/// `[n]_d!`.
pub fn qfact(n: i64, d: i64) -> ScalarQ {
    (1..=n).fold(ScalarQ::one(), |acc, k| &acc * &qint(k, d))
}

/// Gaussian binomial `[n choose k]_d`.
pub fn qbinom(n: i64, k: i64, d: i64) -> Result<ScalarQ, ScalarError> {
    if k < 0 || k > n {
        return Err(ScalarError::BinomialDomain { n, k });
    }
    // product formula keeps every intermediate value Laurent
    let mut acc = ScalarQ::one();
    for j in 0..k {
        acc = &acc * &qint(n - j, d);
        acc = acc.checked_div(&qint(j + 1, d))?;
    }
    Ok(acc)
}

impl Default for ScalarQ {
    fn default() -> Self {
        ScalarQ::zero()
    }
}

impl From<i64> for ScalarQ {
    fn from(v: i64) -> ScalarQ {
        ScalarQ::int(v)
    }
}

impl Add for &ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.is_laurent() {
                return ScalarQ::fix_content(num, self.den.clone());
            }
            return ScalarQ::canonical(num, self.den.clone());
        }
        let g =
            if self.is_laurent() || rhs.is_laurent() { vec![Int::ONE] } else { poly::poly_gcd(&self.den, &rhs.den) };
        let a = poly::poly_div_exact(&self.den, &g).expect("gcd divides");
        let b = poly::poly_div_exact(&rhs.den, &g).expect("gcd divides");
        let la = Laurent::from_coeffs(0, a.clone());
        let lb = Laurent::from_coeffs(0, b.clone());
        let num = &(&self.num * &lb) + &(&rhs.num * &la);
        let den = poly::poly_mul(&poly::poly_mul(&g, &a), &b);
        if g.len() == 1 {
            ScalarQ::fix_content(num, den)
        } else {
            ScalarQ::canonical(num, den)
        }
    }
}

impl Sub for &ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: &ScalarQ) -> ScalarQ {
        self + &(-rhs)
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl Mul for &ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() || rhs.is_zero() {
            return ScalarQ::zero();
        }
        if self.is_laurent() && rhs.is_laurent() {
            let num = &self.num * &rhs.num;
            let den = vec![&self.den[0] * &rhs.den[0]];
            if den[0].is_one() {
                return ScalarQ { num, den };
            }
            return ScalarQ::fix_content(num, den);
        }
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        let num = &n1 * &n2;
        let den = poly::poly_mul(&d1, &d2);
        ScalarQ::fix_content(num, den)
    }
}

/// Removes the common factor of a numerator and a foreign denominator.
fn cancel(num: &Laurent, den: &[Int]) -> (Laurent, Vec<Int>) {
    if den.len() == 1 {
        return (num.clone(), den.to_vec());
    }
    let g = poly::poly_gcd(num.coeffs(), den);
    if g.len() == 1 {
        return (num.clone(), den.to_vec());
    }
    let n = poly::poly_div_exact(num.coeffs(), &g).expect("gcd divides");
    let d = poly::poly_div_exact(den, &g).expect("gcd divides");
    (Laurent::from_coeffs(num.low(), n), d)
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarQ {
            type Output = ScalarQ;
            fn $m(self, rhs: ScalarQ) -> ScalarQ {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ScalarQ> for ScalarQ {
            type Output = ScalarQ;
            fn $m(self, rhs: &ScalarQ) -> ScalarQ {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ScalarQ> for ScalarQ {
    fn add_assign(&mut self, rhs: &ScalarQ) {
        if rhs.is_zero() {
            return;
        }
        if self.is_integral_laurent() && rhs.is_integral_laurent() {
            self.num.add_assign_ref(&rhs.num);
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&ScalarQ> for ScalarQ {
    fn sub_assign(&mut self, rhs: &ScalarQ) {
        *self += &(-rhs);
    }
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, Laurent::from_coeffs(0, self.den.clone()))
    }
}

impl fmt::Debug for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_laurent(s: &str) -> Option<Laurent> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut acc = Laurent::zero();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && !(bytes[i] == b'-' && i > start && bytes[i - 1] != b'^') {
            i += 1;
        }
        let term = &s[start..i];
        let (coef, rest) = match term.find('q') {
            None => (term, ""),
            Some(p) => (term[..p].trim_end_matches('*'), &term[p..]),
        };
        let c: BigInt = if coef.is_empty() { BigInt::from(1) } else { coef.parse().ok()? };
        let e: i32 = if rest.is_empty() {
            0
        } else if rest == "q" {
            1
        } else {
            rest.strip_prefix("q^")?.parse().ok()?
        };
        let c = Int::from(c * BigInt::from(sign));
        acc.add_assign_ref(&Laurent::monomial(c, e));
    }
    Some(acc)
}

impl FromStr for ScalarQ {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<ScalarQ, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once(")/(") {
            Some((n, d)) => (n.strip_prefix('(').ok_or_else(err)?, d.strip_suffix(')').ok_or_else(err)?),
            None => (t, "1"),
        };
        let num = parse_laurent(n).ok_or_else(err)?;
        let den = parse_laurent(d).ok_or_else(err)?;
        ScalarQ::from_fraction(num, den).map_err(|_| err())
    }
}

impl Serialize for ScalarQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ScalarQ, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> ScalarQ {
        x.parse().unwrap()
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint(1, 3), ScalarQ::one());
        assert_eq!(qint(2, 1), s("q + q^-1"));
        assert_eq!(qint(3, 2), s("q^4 + 1 + q^-4"));
        // oracle: [3]_2 · (q² − q⁻²) = q⁶ − q⁻⁶
        assert_eq!(&qint(3, 2) * &s("q^2 - q^-2"), s("q^6 - q^-6"));
        assert_eq!(qint(-2, 1), s("-q - q^-1"));
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(qfact(3, 1), &s("q + q^-1") * &s("q^2 + 1 + q^-2"));
        assert_eq!(qbinom(5, 0, 2).unwrap(), ScalarQ::one());
        assert_eq!(qbinom(2, 1, 1).unwrap(), qint(2, 1));
        assert_eq!(qbinom(4, 2, 1).unwrap(), s("q^4 + q^2 + 2 + q^-2 + q^-4"));
        assert!(matches!(qbinom(2, 3, 1), Err(ScalarError::BinomialDomain { .. })));
        let b = qbinom(6, 3, 2).unwrap();
        assert!(b.is_laurent() && b.is_bar_invariant());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(ScalarQ::q_pow(1).bar(), ScalarQ::q_pow(-1));
        let x = s("(1)/(1 - q^2)");
        assert_eq!(x.bar(), s("(-q^2)/(1 - q^2)"));
        assert_eq!(x.bar(), s("(-q^2)/(-q^2 + 1)"));
        assert_eq!(qint(2, 1).bar(), qint(2, 1));
    }

    #[test]
    fn canonical_form_is_syntactic_equality() {
        let a = s("(q^2 - 1)/(q - 1)");
        assert_eq!(a, s("q + 1"));
        let b = s("(2*q)/(4 + 4*q)");
        assert_eq!(b.to_string(), "(q)/(2*q + 2)");
        let c = s("(1)/(-q^3)");
        assert_eq!(c, s("-q^-3"));
    }

    #[test]
    fn regularity_and_eval0() {
        let x = s("(q^-1 + 3)/(2 + q)");
        assert!(!x.is_regular_at_0());
        assert!(x.eval0().is_err());
        let y = s("(3 + q)/(2 - q)");
        assert_eq!(y.eval0().unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(s("q^2").eval0().unwrap(), BigRational::from_integer(0.into()));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = s("(q^-2 - 3*q)/(1 + q + 5*q^3)");
        assert_eq!(&x * &x.inv().unwrap(), ScalarQ::one());
        assert!(ScalarQ::zero().inv().is_err());
    }

    #[test]
    fn string_roundtrip() {
        for t in ["(0)/(1)", "(1)/(1)", "(2 - q^-3)/(q^2 + 1)", "(3*q^4)/(1)"] {
            assert_eq!(s(t).to_string(), t);
        }
    }
}
