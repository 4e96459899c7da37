use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rayon::prelude::*;

use crate::braid::{self, Sign};
use crate::rootdata::{ReducedWord, RootDatum, RootVec};
use crate::scalars::ScalarQ;
use crate::wordalg::{Dual, UqMinus, WordElt, WordError};

use super::{ContextInfo, DualError, LusztigData, PbwBasis, PbwVector};

/// A reduced word with a sign, and the PBW data built from it.
pub struct PbwContext {
    uq: Arc<UqMinus>,
    word: ReducedWord,
    sign: Sign,
    longest: bool,
    roots: DashMap<(usize, u32), WordElt>,
    degrees: DashMap<RootVec, Arc<DegreeData>>,
}

/// PBW monomials of one degree as word expansions, with their pairing vectors against every
/// word of the degree. Orthogonality of the monomials makes coordinates a matter of pairing, so
/// no Gram matrix is ever inverted.
pub(super) struct DegreeData {
    pub(super) data: Vec<LusztigData>,
    pub(super) index: HashMap<LusztigData, usize>,
    pub(super) mono: Vec<WordElt>,
    pub(super) duals: Vec<Dual>,
    pub(super) norms: Vec<ScalarQ>,
    /// Row c: the F^up-coordinates of B^up(c), keyed by index into `data`.
    pub(super) dcb: OnceLock<Result<Vec<BTreeMap<usize, ScalarQ>>, DualError>>,
}

impl DegreeData {
    /// Σ_m x_m F(m).
    pub(super) fn combine(&self, coeffs: impl IntoIterator<Item = (usize, ScalarQ)>) -> WordElt {
        let mut out = WordElt::zero();
        for (m, x) in coeffs {
            out = &out + &self.mono[m].scale(&x);
        }
        out
    }
}

impl PbwContext {
    pub fn new(uq: Arc<UqMinus>, word: ReducedWord, sign: Sign) -> PbwContext {
        let longest = (0..uq.rank()).all(|i| {
            let mut w = word.letters().to_vec();
            w.push(i);
            !uq.datum().is_reduced(&w)
        });
        PbwContext { uq, word, sign, longest, roots: DashMap::new(), degrees: DashMap::new() }
    }

    pub fn uq(&self) -> &Arc<UqMinus> {
        &self.uq
    }

    pub fn datum(&self) -> &RootDatum {
        self.uq.datum()
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// True when the word is a reduced word of the longest element, so U_q⁻(w, e) = U_q⁻.
    pub fn is_longest(&self) -> bool {
        self.longest
    }

    pub fn info(&self) -> ContextInfo {
        ContextInfo::new(self.datum(), &self.word, self.sign)
    }

    pub(super) fn check(&self, c: &LusztigData) -> Result<(), DualError> {
        if c.len() != self.len() {
            return Err(DualError::DatumLength { got: c.clone(), got_len: c.len(), expected: self.len() });
        }
        Ok(())
    }

    /// Σ c_k β_k.
    pub fn degree_of(&self, c: &LusztigData) -> RootVec {
        self.word.weight_of(&c.0)
    }

    /// F_e(c β_k) for 0-based k.
    pub fn root_vector(&self, k: usize, c: u32) -> Result<WordElt, DualError> {
        if let Some(x) = self.roots.get(&(k, c)) {
            return Ok(x.clone());
        }
        let x = if c == 1 {
            braid::root_vector_simple(&self.uq, &self.word, k + 1, self.sign)?
        } else {
            let base = self.root_vector(k, 1)?;
            braid::power_divided(&self.uq, &base, c, self.datum().d(self.word.letter(k)))?
        };
        Ok(self.roots.entry((k, c)).or_insert(x).clone())
    }

    fn build_monomial(&self, c: &LusztigData) -> Result<WordElt, DualError> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        if self.sign == Sign::Minus {
            order.reverse();
        }
        let mut acc = WordElt::one();
        for k in order {
            if c.0[k] > 0 {
                acc = &acc * &self.root_vector(k, c.0[k])?;
            }
        }
        Ok(acc)
    }

    /// All Lusztig data of the given degree, in increasing order.
    pub fn lusztig_data(&self, deg: &RootVec) -> Vec<LusztigData> {
        fn rec(betas: &[RootVec], k: usize, left: &RootVec, cur: &mut Vec<u32>, out: &mut Vec<LusztigData>) {
            if k == betas.len() {
                if left.is_zero() {
                    out.push(LusztigData(cur.clone()));
                }
                return;
            }
            let mut rest = left.clone();
            let mut c = 0;
            loop {
                cur.push(c);
                rec(betas, k + 1, &rest, cur, out);
                cur.pop();
                rest = &rest - &betas[k];
                if !rest.is_nonneg() {
                    break;
                }
                c += 1;
            }
        }
        let mut out = Vec::new();
        rec(self.word.betas(), 0, deg, &mut Vec::with_capacity(self.len()), &mut out);
        out.sort();
        out
    }

    pub(super) fn degree_data(&self, deg: &RootVec) -> Result<Arc<DegreeData>, DualError> {
        if let Some(d) = self.degrees.get(deg) {
            return Ok(d.clone());
        }
        self.uq.check_height(deg)?;
        let data = self.lusztig_data(deg);
        let built: Vec<(WordElt, Dual)> = data
            .par_iter()
            .map(|c| {
                let m = self.build_monomial(c)?;
                let d = self.uq.dual_of_degree(&m, deg)?;
                Ok((m, d))
            })
            .collect::<Result<_, DualError>>()?;
        let (mono, duals): (Vec<WordElt>, Vec<Dual>) = built.into_iter().unzip();
        let norms: Vec<ScalarQ> = duals.iter().zip(&mono).map(|(d, m)| d.pair(m)).collect();
        if let Some(n) = norms.iter().position(ScalarQ::is_zero) {
            return Err(DualError::Triangularity(format!("PBW monomial {} has zero norm", data[n])));
        }
        let index = data.iter().enumerate().map(|(n, c)| (c.clone(), n)).collect();
        let dd = Arc::new(DegreeData { data, index, mono, duals, norms, dcb: OnceLock::new() });
        Ok(self.degrees.entry(deg.clone()).or_insert(dd).clone())
    }

    fn locate(&self, c: &LusztigData) -> Result<(Arc<DegreeData>, usize), DualError> {
        self.check(c)?;
        let dd = self.degree_data(&self.degree_of(c))?;
        let n = dd.index[c];
        Ok((dd, n))
    }

    /// F_e(c, w̃) as a word expansion.
    pub fn monomial(&self, c: &LusztigData) -> Result<WordElt, DualError> {
        let (dd, n) = self.locate(c)?;
        Ok(dd.mono[n].clone())
    }

    /// (F_e(c), F_e(c))_K.
    pub fn norm(&self, c: &LusztigData) -> Result<ScalarQ, DualError> {
        let (dd, n) = self.locate(c)?;
        Ok(dd.norms[n].clone())
    }

    /// (F_e(c), F_e(c′))_K.
    pub fn pairing(&self, c: &LusztigData, cp: &LusztigData) -> Result<ScalarQ, DualError> {
        self.check(cp)?;
        if self.degree_of(c) != self.degree_of(cp) {
            return Ok(ScalarQ::zero());
        }
        let (dd, n) = self.locate(c)?;
        let m = dd.index[cp];
        Ok(dd.duals[n].pair(&dd.mono[m]))
    }

    /// F_e^up(c, w̃) = F_e(c) / (F_e(c), F_e(c))_K.
    pub fn dual_pbw(&self, c: &LusztigData) -> Result<WordElt, DualError> {
        let (dd, n) = self.locate(c)?;
        let inv = dd.norms[n].inv().map_err(WordError::from)?;
        Ok(dd.mono[n].scale(&inv))
    }

    /// Number of PBW monomials of the degree.
    pub fn pbw_count(&self, deg: &RootVec) -> usize {
        self.lusztig_data(deg).len()
    }

    /// Expansion of x in the chosen basis. Unless the word is longest, the residual
    /// x − Σ coord·(basis element) must vanish, otherwise x is not in U_q⁻(w, e).
    pub fn pbw_coordinates(&self, x: &WordElt, basis: PbwBasis) -> Result<PbwVector, DualError> {
        let mut coords = BTreeMap::new();
        for (deg, comp) in x.components(self.uq.rank()) {
            let dd = self.degree_data(&deg)?;
            let mut residual = (!self.longest).then(|| self.uq.dual_of_degree(&comp, &deg)).transpose()?;
            for (n, c) in dd.data.iter().enumerate() {
                let pair = dd.duals[n].pair(&comp);
                if pair.is_zero() {
                    continue;
                }
                let pbw = pair.checked_div(&dd.norms[n]).map_err(WordError::from)?;
                if let Some(r) = residual.as_mut() {
                    r.add_scaled(&dd.duals[n], &-&pbw);
                }
                coords.insert(c.clone(), if basis == PbwBasis::Pbw { pbw } else { pair });
            }
            if residual.is_some_and(|r| !r.is_zero()) {
                return Err(DualError::NotInSubalgebra(format!("nonzero residual in degree {deg}")));
            }
        }
        Ok(PbwVector { context: self.info(), basis, coords })
    }

    /// F(c_kβ_k)F(c_jβ_j) − q^{−(c_jβ_j, c_kβ_k)} F(c_jβ_j)F(c_kβ_k) for 1-based j < k, with
    /// root vectors of the chosen family (F or F^up).
    pub fn straighten(&self, j: usize, k: usize, cj: u32, ck: u32, basis: PbwBasis) -> Result<PbwVector, DualError> {
        let l = self.len();
        if !(1 <= j && j < k && k <= l) {
            return Err(DualError::Positions { j, k, len: l });
        }
        let pick = |p: usize, c: u32| -> Result<WordElt, DualError> {
            let d = LusztigData::unit(l, p - 1, c);
            match basis {
                PbwBasis::Pbw => self.monomial(&d),
                PbwBasis::DualPbw => self.dual_pbw(&d),
            }
        };
        let (xj, xk) = (pick(j, cj)?, pick(k, ck)?);
        let b = self.word.betas();
        let e = -(cj as i64) * (ck as i64) * self.datum().form(&b[j - 1], &b[k - 1]);
        let x = &(&xk * &xj) - &(&xj * &xk).scale(&ScalarQ::q_pow(e));
        self.pbw_coordinates(&x, basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::qfact;

    pub(crate) fn ctx(name: &str, word: &[usize], sign: Sign) -> PbwContext {
        let d = RootDatum::preset(name).unwrap();
        let w = ReducedWord::new(&d, word).unwrap();
        PbwContext::new(Arc::new(UqMinus::new(d)), w, sign)
    }

    /// Π_k Π_{s=1}^{c_k} 1/(1 − q_{i_k}^{2s}).
    fn lnorm_formula(ctx: &PbwContext, c: &LusztigData) -> ScalarQ {
        let mut acc = ScalarQ::one();
        for (k, &ck) in c.0.iter().enumerate() {
            let d = ctx.datum().d(ctx.word().letter(k));
            for s in 1..=ck as i64 {
                acc = acc.checked_div(&(&ScalarQ::one() - &ScalarQ::q_pow(2 * s * d))).unwrap();
            }
        }
        acc
    }

    #[test]
    fn lusztig_data_enumeration() {
        let c = ctx("A2", &[0, 1, 0], Sign::Plus);
        let data = c.lusztig_data(&RootVec(vec![1, 1]));
        assert_eq!(data, vec![LusztigData(vec![0, 1, 0]), LusztigData(vec![1, 0, 1])]);
        assert_eq!(c.pbw_count(&RootVec(vec![2, 2])), 3);
    }

    #[test]
    fn orthogonality_matches_product_formula() {
        for sign in [Sign::Plus, Sign::Minus] {
            let c = ctx("B2", &[0, 1, 0, 1], sign);
            let deg = RootVec(vec![2, 2]);
            let data = c.lusztig_data(&deg);
            let kl = c.uq().kl_factor(&deg);
            for a in &data {
                for b in &data {
                    let p = c.pairing(a, b).unwrap();
                    if a == b {
                        assert_eq!(p.checked_div(&kl).unwrap(), lnorm_formula(&c, a), "{a}");
                    } else {
                        assert!(p.is_zero(), "{a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn dual_pbw_is_dual() {
        let c = ctx("A2", &[0, 1, 0], Sign::Plus);
        let deg = RootVec(vec![2, 1]);
        for a in c.lusztig_data(&deg) {
            let up = c.dual_pbw(&a).unwrap();
            for b in c.lusztig_data(&deg) {
                let v = c.uq().kform(&up, &c.monomial(&b).unwrap());
                assert_eq!(v.is_one(), a == b);
                assert_eq!(v.is_zero(), a != b);
            }
        }
        let one = c.dual_pbw(&LusztigData::zero(3)).unwrap();
        assert_eq!(one, WordElt::one());
    }

    #[test]
    fn dual_root_vectors_multiply() {
        let c = ctx("B2", &[0, 1, 0, 1], Sign::Plus);
        for k in 0..4 {
            let d = c.datum().d(c.word().letter(k));
            for (n, m) in [(1, 1), (1, 2), (2, 1)] {
                let x = &c.dual_pbw(&LusztigData::unit(4, k, n)).unwrap()
                    * &c.dual_pbw(&LusztigData::unit(4, k, m)).unwrap();
                let y = c.dual_pbw(&LusztigData::unit(4, k, n + m)).unwrap();
                let coeff = ScalarQ::q_pow(-d * n as i64 * m as i64);
                assert!(c.uq().eq_mod_radical(&x, &y.scale(&coeff)).unwrap(), "k={k} n={n} m={m}");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let c = ctx("A2", &[0, 1, 0], Sign::Plus);
        let x = &WordElt::from_letters(&[0, 1]) + &WordElt::from_letters(&[1, 0]).scale(&ScalarQ::int(3));
        let v = c.pbw_coordinates(&x, PbwBasis::Pbw).unwrap();
        assert_eq!(v.coords.len(), 2);
        let mut y = WordElt::zero();
        for (d, k) in &v.coords {
            y = &y + &c.monomial(d).unwrap().scale(k);
        }
        assert!(c.uq().eq_mod_radical(&x, &y).unwrap());
        let u = c.pbw_coordinates(&c.monomial(&LusztigData(vec![1, 1, 1])).unwrap(), PbwBasis::Pbw).unwrap();
        assert_eq!(u.coords.len(), 1);
        assert!(u.get(&LusztigData(vec![1, 1, 1])).is_one());
        let json = u.to_json();
        assert_eq!(PbwVector::from_json(&json).unwrap(), u);
    }

    #[test]
    fn residual_detects_outside_elements() {
        let c = ctx("A3", &[0, 1], Sign::Plus);
        let x = WordElt::from_letters(&[0, 2]);
        assert!(matches!(c.pbw_coordinates(&x, PbwBasis::Pbw), Err(DualError::NotInSubalgebra(_))));
        let y = WordElt::letter(2);
        assert!(matches!(c.pbw_coordinates(&y, PbwBasis::Pbw), Err(DualError::NotInSubalgebra(_))));
    }

    #[test]
    fn straightening_support() {
        let c = ctx("A2", &[0, 1, 0], Sign::Plus);
        let v = c.straighten(1, 3, 1, 1, PbwBasis::Pbw).unwrap();
        assert_eq!(v.coords.keys().cloned().collect::<Vec<_>>(), vec![LusztigData(vec![0, 1, 0])]);
        let b2 = ctx("B2", &[0, 1, 0, 1], Sign::Plus);
        for j in 1..=4 {
            for k in j + 1..=4 {
                for basis in [PbwBasis::Pbw, PbwBasis::DualPbw] {
                    let v = b2.straighten(j, k, 1, 1, basis).unwrap();
                    for (d, coeff) in &v.coords {
                        assert!(d.0[j - 1] < 1 && d.0[k - 1] < 1, "{d}");
                        assert!(d.0.iter().enumerate().all(|(m, &x)| x == 0 || (j - 1..k).contains(&m)));
                        if basis == PbwBasis::DualPbw {
                            assert!(coeff.is_integral_laurent(), "{coeff}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn divided_power_norm() {
        let c = ctx("A2", &[0, 1, 0], Sign::Plus);
        let n = c.norm(&LusztigData(vec![2, 0, 0])).unwrap();
        let expected = ScalarQ::q_pow(-1).checked_div(&qfact(2, 1)).unwrap();
        assert_eq!(n, expected);
    }
}
