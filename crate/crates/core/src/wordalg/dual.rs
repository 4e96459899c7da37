//! Pairing vectors: an element x of degree ξ is determined modulo the form radical by the
//! values (u, x)_K on all words u of degree ξ. Products, contractions and involutions are
//! computed directly on these vectors.

use std::sync::Arc;

use rayon::prelude::*;

use crate::rootdata::{RootDatum, RootVec};
use crate::scalars::ScalarQ;

use super::elt::{word_degree, Word, WordElt};
use super::{UqMinus, WordError};

const MAX_WORD_LEN: usize = 34;

fn factorials() -> &'static [u128; MAX_WORD_LEN + 1] {
    static F: std::sync::OnceLock<[u128; MAX_WORD_LEN + 1]> = std::sync::OnceLock::new();
    F.get_or_init(|| {
        let mut f = [1u128; MAX_WORD_LEN + 1];
        for k in 1..=MAX_WORD_LEN {
            f[k] = f[k - 1] * k as u128;
        }
        f
    })
}

fn multinomial(counts: &[i64]) -> u128 {
    let f = factorials();
    let n: i64 = counts.iter().sum();
    counts.iter().fold(f[n as usize], |acc, &c| acc / f[c as usize])
}

/// All words of a fixed degree, in lexicographic order.
#[derive(Debug)]
pub struct WordSpace {
    deg: RootVec,
    words: Vec<Word>,
}

impl WordSpace {
    pub fn new(deg: &RootVec) -> WordSpace {
        assert!(deg.is_nonneg(), "degree must be non-negative");
        let n = deg.height() as usize;
        assert!(n <= MAX_WORD_LEN, "word length {n} exceeds {MAX_WORD_LEN}");
        let mut words = Vec::with_capacity(multinomial(&deg.0) as usize);
        let mut counts = deg.0.clone();
        let mut cur = Word::new();
        fn rec(counts: &mut [i64], n: usize, cur: &mut Word, out: &mut Vec<Word>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for l in 0..counts.len() {
                if counts[l] > 0 {
                    counts[l] -= 1;
                    cur.push(l as u8);
                    rec(counts, n, cur, out);
                    cur.pop();
                    counts[l] += 1;
                }
            }
        }
        rec(&mut counts, n, &mut cur, &mut words);
        WordSpace { deg: deg.clone(), words }
    }

    pub fn degree(&self) -> &RootVec {
        &self.deg
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Position of `w` in the lexicographic enumeration; `w` must have this degree.
    pub fn index(&self, w: &[u8]) -> usize {
        let mut c = self.deg.0.clone();
        let mut r = 0u128;
        for &l in w {
            let l = l as usize;
            for m in 0..l {
                if c[m] > 0 {
                    c[m] -= 1;
                    r += multinomial(&c);
                    c[m] += 1;
                }
            }
            c[l] -= 1;
            debug_assert!(c[l] >= 0, "word has the wrong degree");
        }
        r as usize
    }
}

/// The pairing vector u ↦ (u, x)_K of a homogeneous element x.
#[derive(Clone, Debug)]
pub struct Dual {
    space: Arc<WordSpace>,
    vals: Vec<ScalarQ>,
}

impl PartialEq for Dual {
    fn eq(&self, other: &Dual) -> bool {
        self.space.deg == other.space.deg && self.vals == other.vals
    }
}

impl Eq for Dual {}

impl Dual {
    pub fn from_vals(space: Arc<WordSpace>, vals: Vec<ScalarQ>) -> Dual {
        assert_eq!(space.len(), vals.len());
        Dual { space, vals }
    }

    pub fn zero(space: Arc<WordSpace>) -> Dual {
        let vals = vec![ScalarQ::zero(); space.len()];
        Dual { space, vals }
    }

    pub fn space(&self) -> &Arc<WordSpace> {
        &self.space
    }

    pub fn degree(&self) -> &RootVec {
        &self.space.deg
    }

    pub fn vals(&self) -> &[ScalarQ] {
        &self.vals
    }

    pub fn get(&self, w: &[u8]) -> &ScalarQ {
        &self.vals[self.space.index(w)]
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(ScalarQ::is_zero)
    }

    /// (x, y)_K where `self` is the pairing vector of y.
    pub fn pair(&self, x: &WordElt) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for (w, c) in x.terms() {
            if word_degree(w, self.space.deg.len()) != self.space.deg {
                continue;
            }
            let v = self.get(w);
            if !v.is_zero() {
                acc += &(c * v);
            }
        }
        acc
    }

    /// Coefficientwise bar. On pairing vectors this realizes σ: (u, σ(x))_K = bar((u, x)_K).
    pub fn bar(&self) -> Dual {
        Dual { space: self.space.clone(), vals: self.vals.iter().map(ScalarQ::bar).collect() }
    }

    pub fn scale(&self, c: &ScalarQ) -> Dual {
        Dual { space: self.space.clone(), vals: self.vals.iter().map(|v| v * c).collect() }
    }

    pub fn add_scaled(&mut self, other: &Dual, c: &ScalarQ) {
        assert_eq!(self.space.deg, other.space.deg, "degree mismatch");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.vals.iter_mut().zip(&other.vals) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    pub fn sub(&self, other: &Dual) -> Dual {
        let mut out = self.clone();
        out.add_scaled(other, &ScalarQ::int(-1));
        out
    }
}

impl UqMinus {
    pub fn space(&self, deg: &RootVec) -> Arc<WordSpace> {
        if let Some(s) = self.spaces.get(deg) {
            return s.clone();
        }
        let s = Arc::new(WordSpace::new(deg));
        self.spaces.entry(deg.clone()).or_insert(s).clone()
    }

    /// The pairing vector of a homogeneous element of degree `deg`.
    pub fn dual_of_degree(&self, x: &WordElt, deg: &RootVec) -> Result<Dual, WordError> {
        let xd = x.homogeneous_degree(self.rank())?;
        if !x.is_zero() && &xd != deg {
            return Err(WordError::DegreeMismatch(xd, deg.clone()));
        }
        let space = self.space(deg);
        let mut vals = vec![ScalarQ::zero(); space.len()];
        if !x.is_zero() {
            let mut counts = deg.0.clone();
            let mut prefix = Word::new();
            dual_rec(self.datum(), &space, x, &mut counts, &mut prefix, &mut vals);
        }
        Ok(Dual { space, vals })
    }

    pub fn dual_of(&self, x: &WordElt) -> Result<Dual, WordError> {
        let deg = x.homogeneous_degree(self.rank())?;
        self.dual_of_degree(x, &deg)
    }

    /// Pairing vector of the shuffle product: (u, xy)_K summed over splittings of u.
    pub fn shuffle(&self, x: &Dual, y: &Dual) -> Dual {
        let datum = self.datum();
        let deg = x.degree() + y.degree();
        let space = self.space(&deg);
        let n = space.words.len();
        let vals: Vec<ScalarQ> = (0..n)
            .into_par_iter()
            .map(|k| {
                let u = &space.words[k];
                let mut st = ShuffleState {
                    datum,
                    u,
                    x,
                    y,
                    need: x.degree().0.clone(),
                    rvec: vec![0; datum.rank()],
                    left: Word::new(),
                    right: Word::new(),
                    exp: 0,
                    acc: ScalarQ::zero(),
                };
                st.rec(0);
                st.acc
            })
            .collect();
        Dual { space, vals }
    }

    /// The adjoint of left multiplication: v ↦ Σ_u a_u (uv, x)_K.
    pub fn contract_left(&self, a: &WordElt, p: &Dual) -> Result<Dual, WordError> {
        if a.is_zero() {
            let d = p.degree().clone();
            return Ok(Dual::zero(self.space(&d)));
        }
        let ad = a.homogeneous_degree(self.rank())?;
        let rest = p.degree() - &ad;
        if !rest.is_nonneg() {
            return Err(WordError::DegreeMismatch(ad, p.degree().clone()));
        }
        let space = self.space(&rest);
        let vals = space
            .words
            .par_iter()
            .map(|v| {
                let mut acc = ScalarQ::zero();
                for (u, c) in a.terms() {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    let pv = p.get(&w);
                    if !pv.is_zero() {
                        acc += &(c * pv);
                    }
                }
                acc
            })
            .collect();
        Ok(Dual { space, vals })
    }

    /// Pairing vector of ᵢr(x): u ↦ (f_i u, x)_K.
    pub fn ir_dual(&self, i: usize, p: &Dual) -> Option<Dual> {
        let rest = p.degree() - &RootVec::simple(self.rank(), i);
        if !rest.is_nonneg() {
            return None;
        }
        let space = self.space(&rest);
        let vals = space
            .words
            .iter()
            .map(|v| {
                let mut w = Word::with_capacity(v.len() + 1);
                w.push(i as u8);
                w.extend_from_slice(v);
                p.get(&w).clone()
            })
            .collect();
        Some(Dual { space, vals })
    }

    /// Pairing vector of rᵢ(x): u ↦ (u f_i, x)_K.
    pub fn ri_dual(&self, i: usize, p: &Dual) -> Option<Dual> {
        let rest = p.degree() - &RootVec::simple(self.rank(), i);
        if !rest.is_nonneg() {
            return None;
        }
        let space = self.space(&rest);
        let vals = space
            .words
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(i as u8);
                p.get(&w).clone()
            })
            .collect();
        Some(Dual { space, vals })
    }

    /// Pairing vector of x* from that of x.
    pub fn star_dual(&self, p: &Dual) -> Dual {
        let space = p.space.clone();
        let vals = space
            .words
            .iter()
            .map(|w| {
                let r: Word = w.iter().rev().copied().collect();
                p.get(&r).clone()
            })
            .collect();
        Dual { space, vals }
    }
}

fn dual_rec(
    datum: &RootDatum,
    space: &WordSpace,
    state: &WordElt,
    counts: &mut [i64],
    prefix: &mut Word,
    vals: &mut [ScalarQ],
) {
    if counts.iter().all(|&c| c == 0) {
        vals[space.index(prefix)] = state.coeff(&[]);
        return;
    }
    for i in 0..counts.len() {
        if counts[i] == 0 {
            continue;
        }
        let next = state.ir(datum, i);
        if next.is_zero() {
            continue;
        }
        counts[i] -= 1;
        prefix.push(i as u8);
        dual_rec(datum, space, &next, counts, prefix, vals);
        prefix.pop();
        counts[i] += 1;
    }
}

struct ShuffleState<'a> {
    datum: &'a RootDatum,
    u: &'a Word,
    x: &'a Dual,
    y: &'a Dual,
    need: Vec<i64>,
    rvec: Vec<i64>,
    left: Word,
    right: Word,
    exp: i64,
    acc: ScalarQ,
}

impl ShuffleState<'_> {
    fn rec(&mut self, s: usize) {
        if s == self.u.len() {
            let a = self.x.get(&self.left);
            if a.is_zero() {
                return;
            }
            let b = self.y.get(&self.right);
            if b.is_zero() {
                return;
            }
            self.acc += &(a * b).shift(self.exp);
            return;
        }
        let l = self.u[s] as usize;
        let remaining_left: i64 = self.need.iter().sum();
        if self.need[l] > 0 {
            // position s goes to the left factor, passing every earlier right letter
            let de = -self.rvec[l];
            self.need[l] -= 1;
            self.exp += de;
            self.left.push(l as u8);
            self.rec(s + 1);
            self.left.pop();
            self.exp -= de;
            self.need[l] += 1;
        }
        if (self.u.len() - s) as i64 > remaining_left {
            for k in 0..self.rvec.len() {
                self.rvec[k] += self.datum.sform(k, l);
            }
            self.right.push(l as u8);
            self.rec(s + 1);
            self.right.pop();
            for k in 0..self.rvec.len() {
                self.rvec[k] -= self.datum.sform(k, l);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_enumeration_and_index() {
        let s = WordSpace::new(&RootVec(vec![2, 1]));
        let ws: Vec<Vec<u8>> = s.words().iter().map(|w| w.to_vec()).collect();
        assert_eq!(ws, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        for (k, w) in s.words().iter().enumerate() {
            assert_eq!(s.index(w), k);
        }
        let s = WordSpace::new(&RootVec(vec![2, 2, 1]));
        assert_eq!(s.len(), 30);
        for (k, w) in s.words().iter().enumerate() {
            assert_eq!(s.index(w), k);
        }
    }

    #[test]
    fn shuffle_matches_concatenation() {
        let uq = UqMinus::new(RootDatum::preset("B2").unwrap());
        let x = &WordElt::from_letters(&[0, 1]) + &WordElt::from_letters(&[1, 0]).scale(&ScalarQ::q_pow(2));
        let y = WordElt::from_letters(&[1, 1, 0]);
        let px = uq.dual_of(&x).unwrap();
        let py = uq.dual_of(&y).unwrap();
        assert_eq!(uq.shuffle(&px, &py), uq.dual_of(&(&x * &y)).unwrap());
    }

    #[test]
    fn contraction_is_adjoint() {
        let uq = UqMinus::new(RootDatum::preset("A2").unwrap());
        let x = WordElt::from_letters(&[0, 1, 0, 1]);
        let a = WordElt::from_letters(&[1, 0]);
        let c = uq.contract_left(&a, &uq.dual_of(&x).unwrap()).unwrap();
        let v = WordElt::from_letters(&[0, 1]);
        assert_eq!(c.pair(&v), uq.kform(&(&a * &v), &x));
    }
}
