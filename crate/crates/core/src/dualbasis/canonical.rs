use std::collections::BTreeMap;

use crate::scalars::ScalarQ;
use crate::wordalg::{WordElt, WordError};

use super::pbw::{DegreeData, PbwContext};
use super::{DualError, LusztigData, PbwBasis, PbwVector};

/// A dual canonical basis element B^up(c, w̃) = G^up(b_e(c, w̃)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcbElement {
    pub c: LusztigData,
    /// Coordinates in the dual PBW basis: 1 at c, qℤ[q] below c.
    pub coords: PbwVector,
    pub elt: WordElt,
}

impl PbwContext {
    /// Rows of the unitriangular matrix expressing B^up in the dual PBW basis, built in
    /// increasing order by the bar-antisymmetric splitting of σ(F^up(c)) − F^up(c).
    fn dcb_rows(&self, dd: &DegreeData) -> Result<Vec<BTreeMap<usize, ScalarQ>>, DualError> {
        dd.dcb.get_or_init(|| self.compute_dcb_rows(dd)).clone()
    }

    fn compute_dcb_rows(&self, dd: &DegreeData) -> Result<Vec<BTreeMap<usize, ScalarQ>>, DualError> {
        let n = dd.data.len();
        let mut rows: Vec<BTreeMap<usize, ScalarQ>> = Vec::with_capacity(n);
        for a in 0..n {
            let nbar = dd.norms[a].bar();
            let sg = dd.duals[a].bar();
            let mut resid: BTreeMap<usize, ScalarQ> = BTreeMap::new();
            for b in 0..n {
                let v = sg.pair(&dd.mono[b]).checked_div(&nbar).map_err(WordError::from)?;
                let v = if a == b { &v - &ScalarQ::one() } else { v };
                if v.is_zero() {
                    continue;
                }
                if b >= a {
                    return Err(DualError::Triangularity(format!(
                        "σ(F^up{}) has coefficient {v} at {}",
                        dd.data[a], dd.data[b]
                    )));
                }
                resid.insert(b, v);
            }
            let mut row: BTreeMap<usize, ScalarQ> = BTreeMap::from([(a, ScalarQ::one())]);
            while let Some((&b, r)) = resid.iter().next_back() {
                let r = r.clone();
                if !r.is_integral_laurent() || !(&r + &r.bar()).is_zero() {
                    return Err(DualError::NotBarAntisymmetric(format!("{r} at {} below {}", dd.data[b], dd.data[a])));
                }
                for (m, p) in &rows[b] {
                    let slot = resid.entry(*m).or_default();
                    *slot -= &(&r * p);
                    if slot.is_zero() {
                        resid.remove(m);
                    }
                }
                let x = r.positive_part().expect("integral");
                for (m, p) in &rows[b] {
                    let slot = row.entry(*m).or_default();
                    *slot += &(&x * p);
                    if slot.is_zero() {
                        row.remove(m);
                    }
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// The dual canonical element with Lusztig data c.
    pub fn dual_canonical(&self, c: &LusztigData) -> Result<DcbElement, DualError> {
        self.check(c)?;
        let dd = self.degree_data(&self.degree_of(c))?;
        let a = dd.index[c];
        let rows = self.dcb_rows(&dd)?;
        let mut scaled = Vec::with_capacity(rows[a].len());
        let mut coords = BTreeMap::new();
        for (m, p) in &rows[a] {
            scaled.push((*m, p.checked_div(&dd.norms[*m]).map_err(WordError::from)?));
            coords.insert(dd.data[*m].clone(), p.clone());
        }
        Ok(DcbElement {
            c: c.clone(),
            coords: PbwVector { context: self.info(), basis: PbwBasis::DualPbw, coords },
            elt: dd.combine(scaled),
        })
    }

    /// Coefficients of x ∈ U_q⁻(w, e) in the dual canonical basis.
    pub fn expand_dcb(&self, x: &WordElt) -> Result<BTreeMap<LusztigData, ScalarQ>, DualError> {
        let v = self.pbw_coordinates(x, PbwBasis::DualPbw)?;
        let mut by_deg: BTreeMap<_, BTreeMap<usize, ScalarQ>> = BTreeMap::new();
        let mut dds = BTreeMap::new();
        for (c, coeff) in v.coords {
            let deg = self.degree_of(&c);
            let dd = match dds.get(&deg) {
                Some(d) => std::sync::Arc::clone(d),
                None => {
                    let d = self.degree_data(&deg)?;
                    dds.insert(deg.clone(), d.clone());
                    d
                }
            };
            by_deg.entry(deg).or_default().insert(dd.index[&c], coeff);
        }
        let mut out = BTreeMap::new();
        for (deg, mut resid) in by_deg {
            let dd = &dds[&deg];
            let rows = self.dcb_rows(dd)?;
            while let Some((&b, r)) = resid.iter().next_back() {
                let r = r.clone();
                for (m, p) in &rows[b] {
                    let slot = resid.entry(*m).or_default();
                    *slot -= &(&r * p);
                    if slot.is_zero() {
                        resid.remove(m);
                    }
                }
                out.insert(dd.data[b].clone(), r);
            }
        }
        Ok(out)
    }

    /// G^up(b1) G^up(b2) in the dual canonical basis.
    pub fn expand_product(
        &self,
        b1: &DcbElement,
        b2: &DcbElement,
    ) -> Result<BTreeMap<LusztigData, ScalarQ>, DualError> {
        let info = self.info();
        if b1.coords.context != info || b2.coords.context != info {
            return Err(DualError::ContextMismatch);
        }
        self.expand_dcb(&(&b1.elt * &b2.elt))
    }

    /// True iff the product is q^k times a single basis element.
    pub fn is_compatible(&self, b1: &DcbElement, b2: &DcbElement) -> Result<bool, DualError> {
        Ok(single_q_power(&self.expand_product(b1, b2)?).is_some())
    }

    /// True iff G^up(b)^m ∈ q^ℤ B^up for every m ≤ m_max. A bounded check.
    pub fn is_real(&self, b: &DcbElement, m_max: u32) -> Result<bool, DualError> {
        let mut acc = b.elt.clone();
        for _ in 2..=m_max {
            acc = &acc * &b.elt;
            if single_q_power(&self.expand_dcb(&acc)?).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// ᵢr^{(m)} G^up(b) in the dual canonical basis; zero when m exceeds ε_i(b).
    pub fn ir_divided_on_dcb(
        &self,
        i: usize,
        m: u32,
        b: &DcbElement,
    ) -> Result<BTreeMap<LusztigData, ScalarQ>, DualError> {
        if m as usize > self.uq().eps(i, &b.elt)? {
            return Ok(BTreeMap::new());
        }
        self.expand_dcb(&self.uq().ir_divided(i, m, &b.elt))
    }
}

/// `(c, k)` if the expansion is exactly q^k · B^up(c).
pub fn single_q_power(exp: &BTreeMap<LusztigData, ScalarQ>) -> Option<(LusztigData, i64)> {
    if exp.len() != 1 {
        return None;
    }
    let (c, v) = exp.iter().next()?;
    match v.as_signed_monomial() {
        Some((1, k)) => Some((c.clone(), k)),
        _ => None,
    }
}
