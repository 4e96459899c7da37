//! Arithmetic modulo word-sized primes, used only as a certificate-producing filter.

pub const P1: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
pub const P2: u64 = 999_999_999_999_999_989;

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of gcd(a, b) over F_p; both inputs nonzero with nonzero leading terms mod p.
pub fn poly_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let db = b.len() - 1;
        let il = inv(*b.last().unwrap(), p);
        while a.len() > db && !a.is_empty() {
            let c = mul(*a.last().unwrap(), il, p);
            let s = a.len() - 1 - db;
            for (k, &y) in b.iter().enumerate() {
                a[s + k] = sub(a[s + k], mul(c, y, p), p);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Incremental row-echelon form over F_p: rows are accepted only when independent.
pub struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64) -> Echelon {
        Echelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; stores it and returns true if it is independent.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row.iter()) {
                    *x = sub(*x, mul(c, y, p), p);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let il = inv(v[piv], p);
                for x in v.iter_mut() {
                    *x = mul(*x, il, p);
                }
                self.rows.push((piv, v));
                true
            }
        }
    }
}
