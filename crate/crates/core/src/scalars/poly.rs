//! Integer Laurent polynomials and the polynomial gcd used to keep fractions reduced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::int::Int;

/// `Σ c[k] q^(low + k)`; the empty vector is zero, otherwise both end coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i32,
    c: Vec<Int>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent { low: 0, c: Vec::new() }
    }

    pub fn one() -> Laurent {
        Laurent::constant(Int::ONE)
    }

    pub fn constant(v: Int) -> Laurent {
        Laurent::monomial(v, 0)
    }

    pub fn monomial(v: Int, exp: i32) -> Laurent {
        if v.is_zero() {
            Laurent::zero()
        } else {
            Laurent { low: exp, c: vec![v] }
        }
    }

    pub fn from_coeffs(low: i32, c: Vec<Int>) -> Laurent {
        let mut l = Laurent { low, c };
        l.trim();
        l
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Int::is_zero) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|v| v.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i32;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent present (assumes nonzero).
    pub fn high(&self) -> i32 {
        self.low + self.c.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.c
    }

    pub fn coeff(&self, exp: i32) -> Int {
        let k = exp - self.low;
        if k < 0 || k as usize >= self.c.len() {
            Int::ZERO
        } else {
            self.c[k as usize].clone()
        }
    }

    pub fn lead(&self) -> &Int {
        self.c.last().expect("nonzero polynomial")
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Int)> + '_ {
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (self.low + k as i32, v))
    }

    pub fn shift(&self, k: i32) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        Laurent { low: self.low + k, c: self.c.clone() }
    }

    pub fn scale(&self, v: &Int) -> Laurent {
        if v.is_zero() {
            return Laurent::zero();
        }
        Laurent { low: self.low, c: self.c.iter().map(|x| x * v).collect() }
    }

    pub fn div_int_exact(&self, v: &Int) -> Laurent {
        Laurent { low: self.low, c: self.c.iter().map(|x| x.div_exact(v)).collect() }
    }

    /// q ↦ q⁻¹.
    pub fn bar(&self) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        let mut c = self.c.clone();
        c.reverse();
        Laurent { low: -self.high(), c }
    }

    /// Positive gcd of the coefficients (0 for zero).
    pub fn content(&self) -> Int {
        content(&self.c)
    }

    pub fn add_assign_ref(&mut self, rhs: &Laurent) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        if low < self.low || high > self.high() {
            let mut c = vec![Int::ZERO; (high - low + 1) as usize];
            for (k, v) in self.c.drain(..).enumerate() {
                c[(self.low - low) as usize + k] = v;
            }
            self.c = c;
            self.low = low;
        }
        let off = (rhs.low - self.low) as usize;
        for (k, v) in rhs.c.iter().enumerate() {
            let slot = &mut self.c[off + k];
            *slot = &*slot + v;
        }
        self.trim();
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        // x is a unit mod p; negative exponents use its inverse
        let xi = super::modp::inv(x, p);
        let base = if self.low >= 0 {
            super::modp::pow(x, self.low as u64, p)
        } else {
            super::modp::pow(xi, (-self.low) as u64, p)
        };
        let mut acc = 0u64;
        let mut pw = base;
        for v in &self.c {
            acc = super::modp::add(acc, super::modp::mul(v.rem_u64(p), pw, p), p);
            pw = super::modp::mul(pw, x, p);
        }
        acc
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { low: self.low, c: self.c.iter().map(|v| -v).collect() }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        Laurent { low: self.low + rhs.low, c: poly_mul(&self.c, &rhs.c) }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let e = self.low + k as i32;
            let neg = v.is_negative();
            let a = v.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write_q(f, e)?,
                (_, false) => {
                    write!(f, "{a}*")?;
                    write_q(f, e)?
                }
            }
        }
        Ok(())
    }
}

fn write_q(f: &mut fmt::Formatter<'_>, e: i32) -> fmt::Result {
    if e == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{e}")
    }
}

pub fn content(c: &[Int]) -> Int {
    let mut g = Int::ZERO;
    for v in c {
        if v.is_zero() {
            continue;
        }
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn poly_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let t = x * y;
            out[i + j] = &out[i + j] + &t;
        }
    }
    out
}

fn trim_high(v: &mut Vec<Int>) {
    while v.last().is_some_and(Int::is_zero) {
        v.pop();
    }
}

fn primitive(mut v: Vec<Int>) -> Vec<Int> {
    let g = content(&v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
    if v.last().is_some_and(Int::is_negative) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (both dense, nonzero `b`).
fn prem(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        for (k, y) in b.iter().enumerate() {
            let t = &lr * y;
            r[shift + k] = &r[shift + k] - &t;
        }
        trim_high(&mut r);
        if !r.is_empty() {
            r = primitive_keep_sign(r);
        }
    }
    r
}

fn primitive_keep_sign(mut v: Vec<Int>) -> Vec<Int> {
    let g = content(&v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
    v
}

/// Exact quotient `a / b` over ℤ when `b` divides `a`; `None` otherwise.
pub fn poly_div_exact(a: &[Int], b: &[Int]) -> Option<Vec<Int>> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![Int::ZERO; a.len() - db];
    for k in (0..q.len()).rev() {
        let top = r[k + db].clone();
        if top.is_zero() {
            continue;
        }
        if !lb.divides(&top) {
            return None;
        }
        let c = top.div_exact(lb);
        for (j, y) in b.iter().enumerate() {
            let t = &c * y;
            r[k + j] = &r[k + j] - &t;
        }
        q[k] = c;
    }
    if r.iter().any(|v| !v.is_zero()) {
        return None;
    }
    trim_high(&mut q);
    Some(q)
}

/// Primitive gcd with positive leading coefficient of two nonzero dense polynomials.
pub fn poly_gcd(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.len() == 1 || b.len() == 1 {
        return vec![Int::ONE];
    }
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive(a.to_vec()), primitive(b.to_vec()))
    } else {
        (primitive(b.to_vec()), primitive(a.to_vec()))
    };
    if poly_div_exact(&x, &y).is_some() {
        return y;
    }
    if !maybe_common_factor(&x, &y) {
        return vec![Int::ONE];
    }
    while !y.is_empty() {
        let r = prem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive(r) };
        if y.len() == 1 {
            return vec![Int::ONE];
        }
    }
    primitive(x)
}

/// Cheap coprimality filter: a nontrivial gcd over ℤ survives reduction modulo a large
/// prime that does not divide both leading coefficients.
fn maybe_common_factor(a: &[Int], b: &[Int]) -> bool {
    use super::modp;
    for &p in &[modp::P1, modp::P2] {
        let la = a.last().unwrap().rem_u64(p);
        let lb = b.last().unwrap().rem_u64(p);
        if la == 0 || lb == 0 {
            continue;
        }
        let ra: Vec<u64> = a.iter().map(|v| v.rem_u64(p)).collect();
        let rb: Vec<u64> = b.iter().map(|v| v.rem_u64(p)).collect();
        return modp::poly_gcd_degree(ra, rb, p) > 0;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn gcd_of_products() {
        // (1+q)(1-q+q^2) and (1+q)(2+q)
        let a = poly_mul(&p(&[1, 1]), &p(&[1, -1, 1]));
        let b = poly_mul(&p(&[1, 1]), &p(&[2, 1]));
        assert_eq!(poly_gcd(&a, &b), p(&[1, 1]));
        assert_eq!(poly_gcd(&p(&[1, 0, 1]), &p(&[1, 1])), p(&[1]));
    }

    #[test]
    fn exact_division() {
        let a = poly_mul(&p(&[3, 0, -2]), &p(&[1, 5]));
        assert_eq!(poly_div_exact(&a, &p(&[1, 5])), Some(p(&[3, 0, -2])));
        assert_eq!(poly_div_exact(&p(&[1, 0, 1]), &p(&[1, 1])), None);
    }

    #[test]
    fn display_descending() {
        let l = Laurent::from_coeffs(-4, p(&[1, 0, 0, 0, 1, 0, 0, 0, 1]));
        assert_eq!(l.to_string(), "q^4 + 1 + q^-4");
        let m = Laurent::from_coeffs(1, p(&[-2, 0, 3]));
        assert_eq!(m.to_string(), "3*q^3 - 2*q");
    }
}
