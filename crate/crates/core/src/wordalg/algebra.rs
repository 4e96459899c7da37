use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::rootdata::{RootDatum, RootVec};
use crate::scalars::linalg::{AdjugateInverse, Matrix};
use crate::scalars::modp::{self, Echelon};
use crate::scalars::{qfact, ScalarQ};

use super::dual::{Dual, WordSpace};
use super::elt::{Word, WordElt};
use super::WordError;

/// Evaluation point for the modular rank filter.
const EVAL_POINT: u64 = 1_234_567_891;

/// U_q⁻ for a fixed root datum, with per-degree caches.
///
/// Caches are concurrent maps: lookups never block one another, and a racing duplicate
/// computation is discarded in favour of the first published value.
pub struct UqMinus {
    datum: RootDatum,
    height_bound: Option<i64>,
    pub(super) spaces: DashMap<RootVec, Arc<WordSpace>>,
    bases: DashMap<RootVec, Arc<WeightBasis>>,
}

/// Pivot words spanning a weight space modulo the form radical, with their Gram matrix.
pub struct WeightBasis {
    deg: RootVec,
    pivots: Vec<Word>,
    duals: Vec<Dual>,
    gram: Matrix,
    gram_inv: OnceLock<AdjugateInverse>,
}

impl WeightBasis {
    pub fn degree(&self) -> &RootVec {
        &self.deg
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[Word] {
        &self.pivots
    }

    pub fn pivot_duals(&self) -> &[Dual] {
        &self.duals
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &AdjugateInverse {
        self.gram_inv
            .get_or_init(|| AdjugateInverse::new(&self.gram).expect("pivot Gram matrix is nonsingular over ℤ[q, q⁻¹]"))
    }

    /// Coordinates of the element whose pairing vector is `p`.
    pub fn coords_of_dual(&self, p: &Dual) -> Vec<ScalarQ> {
        let b: Vec<ScalarQ> = self.pivots.iter().map(|w| p.get(w).clone()).collect();
        self.gram_inverse().solve(&b)
    }

    pub fn element(&self, coords: &[ScalarQ]) -> WordElt {
        let mut x = WordElt::zero();
        for (w, c) in self.pivots.iter().zip(coords) {
            x.add_term(w.clone(), c.clone());
        }
        x
    }
}

impl UqMinus {
    pub fn new(datum: RootDatum) -> UqMinus {
        UqMinus { datum, height_bound: None, spaces: DashMap::new(), bases: DashMap::new() }
    }

    pub fn with_height_bound(datum: RootDatum, bound: i64) -> UqMinus {
        UqMinus { height_bound: Some(bound), ..UqMinus::new(datum) }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn height_bound(&self) -> Option<i64> {
        self.height_bound
    }

    pub fn check_height(&self, deg: &RootVec) -> Result<(), WordError> {
        match self.height_bound {
            Some(b) if deg.height() > b => Err(WordError::HeightBound { height: deg.height(), bound: b }),
            _ => Ok(()),
        }
    }

    /// q_i^k.
    pub fn qi_pow(&self, i: usize, k: i64) -> ScalarQ {
        ScalarQ::q_pow(self.datum.d(i) * k)
    }

    pub fn divided_power(&self, i: usize, n: u32) -> WordElt {
        WordElt::divided_power(i, n, self.datum.d(i))
    }

    /// The Kashiwara form, by peeling the first letter of x: (f_i x, y)_K = (x, ᵢr y)_K.
    pub fn kform(&self, x: &WordElt, y: &WordElt) -> ScalarQ {
        let xs: Vec<(&Word, &ScalarQ)> = x.terms().collect();
        kform_rec(&self.datum, &xs, 0, y)
    }

    /// Π_i (1 − q_i²)^{n_i} for a degree Σ n_i α_i.
    pub fn kl_factor(&self, deg: &RootVec) -> ScalarQ {
        let mut acc = ScalarQ::one();
        for i in 0..self.rank() {
            let f = &ScalarQ::one() - &self.qi_pow(i, 2);
            acc = &acc * &f.pow(deg[i] as u32);
        }
        acc
    }

    /// The Lusztig form, (x, y)_L = (x, y)_K / Π(1 − q_i²)^{n_i}, summed over components.
    pub fn lform(&self, x: &WordElt, y: &WordElt) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for (deg, xc) in x.components(self.rank()) {
            let k = self.kform(&xc, y);
            if !k.is_zero() {
                acc += &k.checked_div(&self.kl_factor(&deg)).expect("nonzero factor");
            }
        }
        acc
    }

    /// Σ_k (−1)^k f_i^{(k)} f_j f_i^{(1−a_ij−k)}.
    pub fn serre_element(&self, i: usize, j: usize) -> WordElt {
        let m = (1 - self.datum.a(i, j)) as u32;
        let fj = WordElt::letter(j);
        let mut out = WordElt::zero();
        for k in 0..=m {
            let t = &(&self.divided_power(i, k) * &fj) * &self.divided_power(i, m - k);
            out = &out + &(if k % 2 == 0 { t } else { -&t });
        }
        out
    }

    /// Pivots are the lexicographically first words with independent Gram rows. Rows are
    /// filtered modulo a large prime at a fixed value of q; independence there certifies
    /// independence over ℚ(q), and the exact Gram matrix of the pivots is then invertible.
    pub fn weight_basis(&self, deg: &RootVec) -> Result<Arc<WeightBasis>, WordError> {
        if let Some(b) = self.bases.get(deg) {
            return Ok(b.clone());
        }
        self.check_height(deg)?;
        let space = self.space(deg);
        let p = modp::P1;
        let mut ech = Echelon::new(p);
        let mut pivots = Vec::new();
        let mut duals = Vec::new();
        for w in space.words() {
            let d = self.dual_of_degree(&WordElt::word(w.clone()), deg)?;
            let row: Vec<u64> = d.vals().iter().map(|v| v.eval_mod(EVAL_POINT, p).expect("Laurent value")).collect();
            if ech.insert(row) {
                pivots.push(w.clone());
                duals.push(d);
            }
        }
        let gram: Matrix = duals.iter().map(|d| pivots.iter().map(|w| d.get(w).clone()).collect()).collect();
        let basis = Arc::new(WeightBasis { deg: deg.clone(), pivots, duals, gram, gram_inv: OnceLock::new() });
        Ok(self.bases.entry(deg.clone()).or_insert(basis).clone())
    }

    pub fn dimension(&self, deg: &RootVec) -> Result<usize, WordError> {
        Ok(self.weight_basis(deg)?.dim())
    }

    /// Coordinates α with x ≡ Σ α_j · pivot_j modulo the radical; x must be homogeneous.
    pub fn normal_form(&self, x: &WordElt) -> Result<(RootVec, Vec<ScalarQ>), WordError> {
        let deg = x.homogeneous_degree(self.rank())?;
        let basis = self.weight_basis(&deg)?;
        let b: Vec<ScalarQ> = basis.duals.iter().map(|d| d.pair(x)).collect();
        Ok((deg, basis.gram_inverse().solve(&b)))
    }

    /// The canonical representative Σ α_j · pivot_j, componentwise.
    pub fn reduce(&self, x: &WordElt) -> Result<WordElt, WordError> {
        let mut out = WordElt::zero();
        for (_, c) in x.components(self.rank()) {
            let (deg, coords) = self.normal_form(&c)?;
            out = &out + &self.weight_basis(&deg)?.element(&coords);
        }
        Ok(out)
    }

    /// Representative of the element with pairing vector `p`.
    pub fn from_dual(&self, p: &Dual) -> Result<WordElt, WordError> {
        let basis = self.weight_basis(p.degree())?;
        Ok(basis.element(&basis.coords_of_dual(p)))
    }

    /// Equality in U_q⁻, i.e. modulo the radical of the form.
    pub fn eq_mod_radical(&self, x: &WordElt, y: &WordElt) -> Result<bool, WordError> {
        let diff = x - y;
        for (_, c) in diff.components(self.rank()) {
            if !self.dual_of(&c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero_mod_radical(&self, x: &WordElt) -> Result<bool, WordError> {
        self.eq_mod_radical(x, &WordElt::zero())
    }

    /// ᵢr^{(m)} = ᵢr^m / [m]_i!.
    pub fn ir_divided(&self, i: usize, m: u32, x: &WordElt) -> WordElt {
        let mut y = x.clone();
        for _ in 0..m {
            y = y.ir(&self.datum, i);
        }
        y.scale(&qfact(m as i64, self.datum.d(i)).inv().expect("nonzero"))
    }
}

fn kform_rec(datum: &RootDatum, xs: &[(&Word, &ScalarQ)], depth: usize, y: &WordElt) -> ScalarQ {
    let mut acc = ScalarQ::zero();
    if y.is_zero() {
        return acc;
    }
    let mut k = 0;
    while k < xs.len() {
        let (w, c) = xs[k];
        if w.len() == depth {
            let v = y.coeff(&[]);
            if !v.is_zero() {
                acc += &(c * &v);
            }
            k += 1;
            continue;
        }
        let l = w[depth];
        let mut end = k + 1;
        while end < xs.len() && xs[end].0.len() > depth && xs[end].0[depth] == l {
            end += 1;
        }
        let y2 = y.ir(datum, l as usize);
        let v = kform_rec(datum, &xs[k..end], depth + 1, &y2);
        if !v.is_zero() {
            acc += &v;
        }
        k = end;
    }
    acc
}
