//! The full algebra U_q(g) in triangular normal order, Lusztig's braid automorphisms,
//! root vectors and PBW monomials.
//!
//! A [`TriElt`] is a combination of normal-ordered monomials F t_μ E with F an f-word and
//! E an e-word. Both halves satisfy the same q-Serre relations, so both are reduced to pivot
//! words with the same [`UqMinus`] machinery.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{ReducedWord, RootDatum, RootVec};
use crate::scalars::{qfact, ScalarQ};
use crate::wordalg::{UqMinus, Word, WordElt, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("braid image is not in U_q⁻: {0}")]
    Impure(String),
    #[error("position {k} is outside 1..={len}")]
    Position { k: usize, len: usize },
    #[error("Lusztig datum has length {got}, expected {expected}")]
    DatumLength { got: usize, expected: usize },
}

/// The sign e of T_i^e and of the PBW ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Sign, String> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got `{s}`")),
        }
    }
}

type Key = (Word, RootVec, Word);

/// A combination of normal-ordered monomials f-word · t_μ · e-word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriElt {
    terms: BTreeMap<Key, ScalarQ>,
}

fn pair_root_simple(datum: &RootDatum, mu: &RootVec, i: usize) -> i64 {
    (0..datum.rank()).map(|j| mu[j] * datum.sform(j, i)).sum()
}

fn word_deg(w: &[u8], n: usize) -> RootVec {
    let mut d = vec![0; n];
    for &l in w {
        d[l as usize] += 1;
    }
    RootVec(d)
}

impl TriElt {
    pub fn zero() -> TriElt {
        TriElt::default()
    }

    pub fn one(rank: usize) -> TriElt {
        TriElt::monomial(Word::new(), RootVec::zero(rank), Word::new(), ScalarQ::one())
    }

    pub fn monomial(f: Word, mu: RootVec, e: Word, c: ScalarQ) -> TriElt {
        let mut x = TriElt::zero();
        x.add_term((f, mu, e), c);
        x
    }

    pub fn f(rank: usize, i: usize) -> TriElt {
        TriElt::monomial(Word::from_slice(&[i as u8]), RootVec::zero(rank), Word::new(), ScalarQ::one())
    }

    pub fn e(rank: usize, i: usize) -> TriElt {
        TriElt::monomial(Word::new(), RootVec::zero(rank), Word::from_slice(&[i as u8]), ScalarQ::one())
    }

    pub fn t(mu: RootVec) -> TriElt {
        TriElt::monomial(Word::new(), mu, Word::new(), ScalarQ::one())
    }

    /// Embeds an element of U_q⁻.
    pub fn from_minus(x: &WordElt, rank: usize) -> TriElt {
        let mut out = TriElt::zero();
        for (w, c) in x.terms() {
            out.add_term((w.clone(), RootVec::zero(rank), Word::new()), c.clone());
        }
        out
    }

    /// Embeds an element of U_q⁺ given as a combination of e-words.
    pub fn from_plus(x: &WordElt, rank: usize) -> TriElt {
        let mut out = TriElt::zero();
        for (w, c) in x.terms() {
            out.add_term((Word::new(), RootVec::zero(rank), w.clone()), c.clone());
        }
        out
    }

    fn add_term(&mut self, k: Key, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &ScalarQ)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &ScalarQ) -> TriElt {
        let mut out = TriElt::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &TriElt) -> TriElt {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &TriElt) -> TriElt {
        self.add(&other.scale(&ScalarQ::int(-1)))
    }

    /// The U_q⁻ part if every term has trivial torus and e-parts.
    pub fn as_minus(&self) -> Option<WordElt> {
        let mut out = WordElt::zero();
        for ((f, mu, e), c) in &self.terms {
            if !mu.is_zero() || !e.is_empty() {
                return None;
            }
            out.add_term(f.clone(), c.clone());
        }
        Some(out)
    }

    /// The anti-automorphism * fixing e_i and f_i and inverting the torus, normal-ordered.
    pub fn star(&self, datum: &RootDatum) -> TriElt {
        let n = datum.rank();
        let mut out = TriElt::zero();
        for ((f, mu, e), c) in &self.terms {
            let rev = |w: &Word| WordElt::term(w.iter().rev().copied().collect(), c.clone());
            let t = TriElt::t(RootVec(mu.0.iter().map(|x| -x).collect()));
            let m = TriElt::from_plus(&rev(e), n)
                .mul(&t, datum)
                .mul(&TriElt::from_minus(&WordElt::word(f.iter().rev().copied().collect()), n), datum);
            out = out.add(&m);
        }
        out
    }

    /// The product, normal-ordered.
    pub fn mul(&self, other: &TriElt, datum: &RootDatum) -> TriElt {
        let n = datum.rank();
        let mut memo: HashMap<(Word, Word), Vec<(Key, ScalarQ)>> = HashMap::new();
        let mut out = TriElt::zero();
        for ((f1, mu1, e1), c1) in &self.terms {
            for ((f2, mu2, e2), c2) in &other.terms {
                let mid = memo.entry((e1.clone(), f2.clone())).or_insert_with(|| commute(datum, e1, f2));
                for ((fp, nu, ep), c) in mid.iter() {
                    let x = -datum.form(mu1, &word_deg(fp, n)) - datum.form(mu2, &word_deg(ep, n));
                    let mut f = f1.clone();
                    f.extend_from_slice(fp);
                    let mut e = ep.clone();
                    e.extend_from_slice(e2);
                    let mu = &(mu1 + nu) + mu2;
                    out.add_term((f, mu, e), (&(c1 * c2) * c).shift(x));
                }
            }
        }
        out
    }

    /// Reduces both word halves to pivot coordinates.
    pub fn reduce(&self, uq: &UqMinus) -> Result<TriElt, WordError> {
        let mut by_tail: BTreeMap<(RootVec, Word), WordElt> = BTreeMap::new();
        for ((f, mu, e), c) in &self.terms {
            by_tail.entry((mu.clone(), e.clone())).or_default().add_term(f.clone(), c.clone());
        }
        let mut by_head: BTreeMap<(Word, RootVec), WordElt> = BTreeMap::new();
        for ((mu, e), fpart) in by_tail {
            for (f, c) in uq.reduce(&fpart)?.terms() {
                by_head.entry((f.clone(), mu.clone())).or_default().add_term(e.clone(), c.clone());
            }
        }
        let mut out = TriElt::zero();
        for ((f, mu), epart) in by_head {
            for (e, c) in uq.reduce(&epart)?.terms() {
                out.add_term((f.clone(), mu.clone(), e.clone()), c.clone());
            }
        }
        Ok(out)
    }
}

/// E · F rewritten as Σ F′ t_ν E′, processing the e-letters from the right.
fn commute(datum: &RootDatum, e: &[u8], f: &Word) -> Vec<(Key, ScalarQ)> {
    let n = datum.rank();
    let mut cur: BTreeMap<Key, ScalarQ> = BTreeMap::new();
    cur.insert((f.clone(), RootVec::zero(n), Word::new()), ScalarQ::one());
    for &l in e.iter().rev() {
        let i = l as usize;
        let di = datum.d(i);
        let qdiff = &ScalarQ::q_pow(di) - &ScalarQ::q_pow(-di);
        let inv = qdiff.inv().expect("nonzero");
        let mut next: BTreeMap<Key, ScalarQ> = BTreeMap::new();
        let mut push = |k: Key, c: ScalarQ| {
            if c.is_zero() {
                return;
            }
            let slot = next.entry(k.clone()).or_default();
            *slot += &c;
            if slot.is_zero() {
                next.remove(&k);
            }
        };
        for ((fw, nu, ew), c) in &cur {
            // e_i F t_ν E = F e_i t_ν E + Σ_p F_{≠p} [e_i, f_i] moved right past the suffix
            let mut e2 = Word::with_capacity(ew.len() + 1);
            e2.push(l);
            e2.extend_from_slice(ew);
            push((fw.clone(), nu.clone(), e2), c.shift(-pair_root_simple(datum, nu, i)));
            let ai = RootVec::simple(n, i);
            for p in 0..fw.len() {
                if fw[p] as usize != i {
                    continue;
                }
                let s: i64 = fw[p + 1..].iter().map(|&m| datum.sform(i, m as usize)).sum();
                let mut fr = fw.clone();
                fr.remove(p);
                let k = c * &inv;
                push((fr.clone(), nu + &ai, ew.clone()), k.shift(-s));
                push((fr, nu - &ai, ew.clone()), -k.shift(s));
            }
        }
        cur = next;
    }
    cur.into_iter().collect()
}

fn divided_word(i: usize, n: u32, d: i64) -> (Word, ScalarQ) {
    let w: Word = std::iter::repeat_n(i as u8, n as usize).collect();
    (w, qfact(n as i64, d).inv().expect("nonzero"))
}

/// Images of the generators under T_i (sign +1) or T_i⁻¹ (sign −1).
struct GenImages {
    f: Vec<TriElt>,
    e: Vec<TriElt>,
}

fn generator_images(datum: &RootDatum, i: usize, sign: Sign) -> GenImages {
    let n = datum.rank();
    let di = datum.d(i);
    let ai = RootVec::simple(n, i);
    let mut f = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    let iw = Word::from_slice(&[i as u8]);
    for j in 0..n {
        if j == i {
            match sign {
                Sign::Plus => {
                    // T_i(f_i) = −t_i⁻¹ e_i, T_i(e_i) = −f_i t_i
                    f.push(TriElt::monomial(Word::new(), -&ai, iw.clone(), ScalarQ::int(-1)));
                    e.push(TriElt::monomial(iw.clone(), ai.clone(), Word::new(), ScalarQ::int(-1)));
                }
                Sign::Minus => {
                    // T_i⁻¹(f_i) = −e_i t_i = −q_i⁻² t_i e_i, T_i⁻¹(e_i) = −t_i⁻¹ f_i = −q_i² f_i t_i⁻¹
                    f.push(TriElt::monomial(Word::new(), ai.clone(), iw.clone(), ScalarQ::monomial(-1, -2 * di)));
                    e.push(TriElt::monomial(iw.clone(), -&ai, Word::new(), ScalarQ::monomial(-1, 2 * di)));
                }
            }
            continue;
        }
        let m = -datum.a(i, j);
        let mut fx = WordElt::zero();
        let mut ex = WordElt::zero();
        for r in 0..=m {
            let s = m - r;
            let (wr, cr) = divided_word(i, r as u32, di);
            let (ws, cs) = divided_word(i, s as u32, di);
            let sgn = if r % 2 == 0 { 1 } else { -1 };
            let base = &(&cr * &cs) * &ScalarQ::int(sgn);
            let (fl, fr, el, er, qexp) = match sign {
                Sign::Plus => (&wr, &ws, &ws, &wr, di * r),
                Sign::Minus => (&ws, &wr, &wr, &ws, di * r),
            };
            let mut fw = fl.clone();
            fw.push(j as u8);
            fw.extend_from_slice(fr);
            fx.add_term(fw, base.shift(qexp));
            let mut ew = el.clone();
            ew.push(j as u8);
            ew.extend_from_slice(er);
            ex.add_term(ew, base.shift(-qexp));
        }
        f.push(TriElt::from_minus(&fx, n));
        e.push(TriElt::from_plus(&ex, n));
    }
    GenImages { f, e }
}

/// T_i (sign +1) or T_i⁻¹ (sign −1), reduced.
pub fn braid_t(uq: &UqMinus, i: usize, sign: Sign, x: &TriElt) -> Result<TriElt, WordError> {
    let datum = uq.datum();
    let n = datum.rank();
    let imgs = generator_images(datum, i, sign);
    let mut out = TriElt::zero();
    for ((f, mu, e), c) in x.terms() {
        let mut acc = TriElt::one(n).scale(c);
        for &l in f.iter() {
            acc = acc.mul(&imgs.f[l as usize], datum).reduce(uq)?;
        }
        if !mu.is_zero() {
            acc = acc.mul(&TriElt::t(datum.reflect_root(i, mu)), datum);
        }
        for &l in e.iter() {
            acc = acc.mul(&imgs.e[l as usize], datum).reduce(uq)?;
        }
        out = out.add(&acc);
    }
    out.reduce(uq)
}

/// T_i^{±1} on U_q⁻, asserting that the image stays in U_q⁻.
pub fn braid_minus(uq: &UqMinus, i: usize, sign: Sign, x: &WordElt) -> Result<WordElt, BraidError> {
    let y = braid_t(uq, i, sign, &TriElt::from_minus(&uq.reduce(x)?, uq.rank()))?;
    y.as_minus().ok_or_else(|| BraidError::Impure(format!("{} terms outside U_q⁻", y.len())))
}

/// F_e(β_k) = T_{i_1}^e ⋯ T_{i_{k−1}}^e (f_{i_k}), with k 1-based.
pub fn root_vector_simple(uq: &UqMinus, word: &ReducedWord, k: usize, sign: Sign) -> Result<WordElt, BraidError> {
    if k == 0 || k > word.len() {
        return Err(BraidError::Position { k, len: word.len() });
    }
    let mut x = WordElt::letter(word.letter(k - 1));
    for s in (0..k - 1).rev() {
        x = braid_minus(uq, word.letter(s), sign, &x)?;
    }
    Ok(x)
}

/// F_e(cβ_k) = F_e(β_k)^c / [c]_{i_k}!, since the braid operators are algebra automorphisms.
pub fn root_vector(uq: &UqMinus, word: &ReducedWord, k: usize, sign: Sign, c: u32) -> Result<WordElt, BraidError> {
    let base = root_vector_simple(uq, word, k, sign)?;
    power_divided(uq, &base, c, uq.datum().d(word.letter(k - 1)))
}

pub(crate) fn power_divided(uq: &UqMinus, base: &WordElt, c: u32, d: i64) -> Result<WordElt, BraidError> {
    let deg = base.homogeneous_degree(uq.rank())?;
    uq.check_height(&(c as i64 * &deg))?;
    let mut acc = WordElt::one();
    for _ in 0..c {
        acc = &acc * base;
    }
    Ok(acc.scale(&qfact(c as i64, d).inv().expect("nonzero")))
}

/// F_e(c) = F_e(c_1β_1) ⋯ F_e(c_lβ_l) for e = +1, and the reversed product for e = −1.
pub fn pbw_monomial(uq: &UqMinus, word: &ReducedWord, c: &[u32], sign: Sign) -> Result<WordElt, BraidError> {
    if c.len() != word.len() {
        return Err(BraidError::DatumLength { got: c.len(), expected: word.len() });
    }
    let deg = word.weight_of(c);
    uq.check_height(&deg)?;
    let mut order: Vec<usize> = (0..word.len()).collect();
    if sign == Sign::Minus {
        order.reverse();
    }
    let mut acc = WordElt::one();
    for k in order {
        if c[k] == 0 {
            continue;
        }
        let r = root_vector(uq, word, k + 1, sign, c[k])?;
        acc = uq.reduce(&(&acc * &r))?;
    }
    Ok(acc)
}
