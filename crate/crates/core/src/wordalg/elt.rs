use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::rootdata::{RootDatum, RootVec};
use crate::scalars::{qfact, ScalarQ};

use super::WordError;

/// A word f_{j_1} ⋯ f_{j_k}, letters 0-based.
pub type Word = SmallVec<[u8; 16]>;

pub(crate) fn word_degree(w: &[u8], rank: usize) -> RootVec {
    let mut d = vec![0i64; rank];
    for &l in w {
        d[l as usize] += 1;
    }
    RootVec(d)
}

/// Σ_s (α_{w_s}, α_i) over the given letters.
pub(crate) fn form_with(datum: &RootDatum, letters: &[u8], i: usize) -> i64 {
    letters.iter().map(|&l| datum.sform(l as usize, i)).sum()
}

/// A finitely supported ℚ(q)-combination of words. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct WordElt {
    terms: BTreeMap<Word, ScalarQ>,
}

/// An element of the tensor square, as a combination of word pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordTensor {
    pub terms: BTreeMap<(Word, Word), ScalarQ>,
}

impl WordElt {
    pub fn zero() -> WordElt {
        WordElt::default()
    }

    pub fn one() -> WordElt {
        WordElt::word(Word::new())
    }

    pub fn word(w: Word) -> WordElt {
        WordElt::term(w, ScalarQ::one())
    }

    pub fn from_letters(letters: &[usize]) -> WordElt {
        WordElt::word(letters.iter().map(|&l| l as u8).collect())
    }

    pub fn term(w: Word, c: ScalarQ) -> WordElt {
        let mut x = WordElt::zero();
        x.add_term(w, c);
        x
    }

    /// The generator f_i.
    pub fn letter(i: usize) -> WordElt {
        WordElt::from_letters(&[i])
    }

    /// f_i^{(n)} = f_i^n / [n]_i!, carried as a single word with a scalar.
    pub fn divided_power(i: usize, n: u32, d: i64) -> WordElt {
        let w: Word = std::iter::repeat_n(i as u8, n as usize).collect();
        let c = qfact(n as i64, d).inv().expect("[n]! is nonzero");
        WordElt::term(w, c)
    }

    pub fn add_term(&mut self, w: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarQ)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> ScalarQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &ScalarQ) -> WordElt {
        if c.is_zero() {
            return WordElt::zero();
        }
        WordElt { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    pub fn map_coeffs(&self, f: impl Fn(&ScalarQ) -> ScalarQ) -> WordElt {
        let mut out = WordElt::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// The anti-involution * : reverses every word.
    pub fn star(&self) -> WordElt {
        let mut out = WordElt::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().rev().copied().collect(), c.clone());
        }
        out
    }

    /// The ring involution fixing every f_i: bars every coefficient.
    pub fn barinv(&self) -> WordElt {
        WordElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.bar())).collect() }
    }

    /// σ(x) = q^{N(wt x)} (* ∘ bar)(x), applied per homogeneous component.
    pub fn sigma(&self, datum: &RootDatum) -> WordElt {
        let mut out = WordElt::zero();
        for (w, c) in &self.terms {
            let n = datum.nform(&-&word_degree(w, datum.rank()));
            out.add_term(w.iter().rev().copied().collect(), c.bar().shift(n));
        }
        out
    }

    /// The degree Σ α_{j} (the negative of the weight), if the element is homogeneous and nonzero.
    pub fn degree(&self, rank: usize) -> Option<RootVec> {
        let mut it = self.terms.keys().map(|w| word_degree(w, rank));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_degree(&self, rank: usize) -> Result<RootVec, WordError> {
        if self.is_zero() {
            return Ok(RootVec::zero(rank));
        }
        self.degree(rank).ok_or(WordError::NotHomogeneous)
    }

    pub fn components(&self, rank: usize) -> BTreeMap<RootVec, WordElt> {
        let mut out: BTreeMap<RootVec, WordElt> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(word_degree(w, rank)).or_default().terms.insert(w.clone(), c.clone());
        }
        out
    }

    /// The derivation ᵢr: ᵢr(xy) = ᵢr(x)y + q^{(wt x, α_i)} x ᵢr(y), adjoint to left
    /// multiplication by f_i and compatible with the twisted coproduct.
    pub fn ir(&self, datum: &RootDatum, i: usize) -> WordElt {
        let mut out = WordElt::zero();
        for (w, c) in &self.terms {
            let mut e = 0i64;
            for p in 0..w.len() {
                let l = w[p] as usize;
                if l == i {
                    let mut v = w.clone();
                    v.remove(p);
                    out.add_term(v, c.shift(e));
                }
                e -= datum.sform(l, i);
            }
        }
        out
    }

    /// The derivation rᵢ: rᵢ(xy) = q^{(wt y, α_i)} rᵢ(x)y + x rᵢ(y).
    pub fn ri(&self, datum: &RootDatum, i: usize) -> WordElt {
        let mut out = WordElt::zero();
        for (w, c) in &self.terms {
            let mut e = 0i64;
            for p in (0..w.len()).rev() {
                let l = w[p] as usize;
                if l == i {
                    let mut v = w.clone();
                    v.remove(p);
                    out.add_term(v, c.shift(e));
                }
                e -= datum.sform(l, i);
            }
        }
        out
    }

    /// The twisted coproduct r, with (x₁⊗x₂)(y₁⊗y₂) = q^{−(wt x₂, wt y₁)} x₁y₁ ⊗ x₂y₂.
    pub fn rform(&self, datum: &RootDatum) -> WordTensor {
        let mut out = WordTensor::default();
        for (w, c) in &self.terms {
            let n = w.len();
            assert!(n < 31, "word too long for subset enumeration");
            for mask in 0u32..(1 << n) {
                // bit set: letter goes to the left factor
                let mut e = 0i64;
                let (mut left, mut right) = (Word::new(), Word::new());
                for s in 0..n {
                    if mask >> s & 1 == 1 {
                        e -= form_with(datum, &right, w[s] as usize);
                        left.push(w[s]);
                    } else {
                        right.push(w[s]);
                    }
                }
                let t = out.terms.entry((left, right)).or_default();
                *t += &c.shift(e);
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WordEltJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<WordElt, String> {
        let j: WordEltJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        WordElt::try_from(j)
    }
}

#[derive(Serialize, Deserialize)]
pub struct WordEltJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<usize>,
    pub coeff: ScalarQ,
}

impl From<&WordElt> for WordEltJson {
    fn from(x: &WordElt) -> WordEltJson {
        WordEltJson {
            terms: x
                .terms()
                .map(|(w, c)| TermJson { word: w.iter().map(|&l| l as usize + 1).collect(), coeff: c.clone() })
                .collect(),
        }
    }
}

impl TryFrom<WordEltJson> for WordElt {
    type Error = String;
    fn try_from(j: WordEltJson) -> Result<WordElt, String> {
        let mut x = WordElt::zero();
        for t in j.terms {
            if t.word.iter().any(|&l| l == 0 || l > 255) {
                return Err(format!("letters must be 1-based: {:?}", t.word));
            }
            x.add_term(t.word.iter().map(|&l| (l - 1) as u8).collect(), t.coeff);
        }
        Ok(x)
    }
}

impl Serialize for WordElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WordEltJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WordElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<WordElt, D::Error> {
        let j = WordEltJson::deserialize(d)?;
        WordElt::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for WordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let letters: Vec<String> = w.iter().map(|l| (l + 1).to_string()).collect();
                format!("{c}*[{}]", letters.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &WordElt {
    type Output = WordElt;
    fn add(self, rhs: &WordElt) -> WordElt {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WordElt {
    type Output = WordElt;
    fn sub(self, rhs: &WordElt) -> WordElt {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &WordElt {
    type Output = WordElt;
    fn neg(self) -> WordElt {
        WordElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &WordElt {
    type Output = WordElt;
    fn mul(self, rhs: &WordElt) -> WordElt {
        let mut out = WordElt::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for WordElt {
            type Output = WordElt;
            fn $m(self, rhs: WordElt) -> WordElt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[u8]) -> Word {
        l.iter().copied().collect()
    }

    #[test]
    fn concatenation() {
        let x = &WordElt::letter(0) * &WordElt::letter(1);
        assert_eq!(x, WordElt::word(w(&[0, 1])));
        assert_eq!(&x * &WordElt::one(), x);
        let y = &WordElt::divided_power(0, 2, 1) * &WordElt::letter(0);
        assert_eq!(y.coeff(&[0, 0, 0]), ScalarQ::int(1).checked_div(&qfact(2, 1)).unwrap());
    }

    #[test]
    fn derivations() {
        let a2 = RootDatum::preset("A2").unwrap();
        let fij = WordElt::from_letters(&[0, 1]);
        let fji = WordElt::from_letters(&[1, 0]);
        assert_eq!(fij.ir(&a2, 0), WordElt::letter(1));
        assert_eq!(fji.ir(&a2, 0), WordElt::letter(1).scale(&ScalarQ::q_pow(1)));
        assert!(WordElt::one().ir(&a2, 0).is_zero());
        assert_eq!(fij.ri(&a2, 1), WordElt::letter(0));
        assert_eq!(fji.ri(&a2, 1), WordElt::letter(0).scale(&ScalarQ::q_pow(1)));
    }

    #[test]
    fn coproduct() {
        let a2 = RootDatum::preset("A2").unwrap();
        let r = WordElt::from_letters(&[0, 1]).rform(&a2);
        assert_eq!(r.terms.len(), 4);
        assert_eq!(r.terms[&(w(&[1]), w(&[0]))], ScalarQ::q_pow(1));
        assert_eq!(r.terms[&(w(&[0]), w(&[1]))], ScalarQ::one());
        let r1 = WordElt::one().rform(&a2);
        assert_eq!(r1.terms[&(w(&[]), w(&[]))], ScalarQ::one());
    }

    #[test]
    fn involutions() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(WordElt::from_letters(&[0, 1, 1]).star(), WordElt::from_letters(&[1, 1, 0]));
        assert_eq!(WordElt::letter(1).sigma(&a2), WordElt::letter(1));
        let x = &WordElt::from_letters(&[0, 1]).scale(&ScalarQ::q_pow(3)) + &WordElt::from_letters(&[1, 0]);
        assert_eq!(x.sigma(&a2).sigma(&a2), x);
    }

    #[test]
    fn json_roundtrip() {
        let x = &WordElt::from_letters(&[0, 1]).scale(&ScalarQ::q_pow(-2)) + &WordElt::letter(1);
        let s = x.to_json();
        assert!(s.contains("\"word\":[1,2]"));
        assert_eq!(WordElt::from_json(&s).unwrap(), x);
    }
}
