//! Quantum flag minors as dual canonical elements of U_q⁻(w, −1), their q-commutation matrix,
//! strong compatibility, and the interval-free factorization.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::Sign;
use crate::dualbasis::{nform_pair, single_q_power, DcbElement, DualError, LusztigData, PbwContext};
use crate::rootdata::Weight;
use crate::scalars::ScalarQ;
use crate::wordalg::{WordElt, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinorError {
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("flag minors live in U_q⁻(w, −1); the context has sign +1")]
    WrongSign,
    #[error("position {k} is outside 1..={len}")]
    Position { k: usize, len: usize },
    #[error("Δ_{j} and Δ_{k} do not q-commute")]
    NotQCommuting { j: usize, k: usize },
    #[error("measured q-commutation exponent {measured} for ({j}, {k}) differs from N = {formula}")]
    ExponentMismatch { j: usize, k: usize, measured: i64, formula: i64 },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
}

fn require_minus(ctx: &PbwContext) -> Result<(), MinorError> {
    match ctx.sign() {
        Sign::Minus => Ok(()),
        Sign::Plus => Err(MinorError::WrongSign),
    }
}

fn check_position(ctx: &PbwContext, k: usize) -> Result<(), MinorError> {
    if k == 0 || k > ctx.len() {
        return Err(MinorError::Position { k, len: ctx.len() });
    }
    Ok(())
}

/// n_k(j) = 1 iff i_j = i_k and j ≤ k; 1-based k.
pub fn n_k(ctx: &PbwContext, k: usize) -> Result<LusztigData, MinorError> {
    check_position(ctx, k)?;
    let w = ctx.word();
    let i = w.letter(k - 1);
    Ok(LusztigData((0..w.len()).map(|j| u32::from(j < k && w.letter(j) == i)).collect()))
}

/// n^λ = Σ_i λ_i n^i with n^i = n_{k_max(i)}, and n^i = 0 for letters absent from the word.
pub fn n_lambda(ctx: &PbwContext, lam: &Weight) -> Result<LusztigData, MinorError> {
    if !lam.is_dominant() {
        return Err(MinorError::NotDominant(lam.0.clone()));
    }
    let w = ctx.word();
    let mut out = LusztigData::zero(w.len());
    for (j, &i) in w.letters().iter().enumerate() {
        out.0[j] = lam[i] as u32;
    }
    Ok(out)
}

/// The frozen positions {k : k = k_max}, 1-based.
pub fn frozen(ctx: &PbwContext) -> Vec<usize> {
    (1..=ctx.len()).filter(|&k| ctx.word().kops(k).1 == k).collect()
}

/// Δ_{w̃,k} = G^up(b_{−1}(n_k, w̃)).
pub fn flag_minor(ctx: &PbwContext, k: usize) -> Result<DcbElement, MinorError> {
    require_minus(ctx)?;
    Ok(ctx.dual_canonical(&n_k(ctx, k)?)?)
}

/// Δ_{wλ} = G^up(b_{−1}(n^λ, w̃)).
pub fn minor_for_weight(ctx: &PbwContext, lam: &Weight) -> Result<DcbElement, MinorError> {
    require_minus(ctx)?;
    Ok(ctx.dual_canonical(&n_lambda(ctx, lam)?)?)
}

/// The exponent N with Δ_j Δ_k = q^N Δ_k Δ_j, measured from both products and reconciled with
/// N_w̃(n_j, n_k).
pub fn qcommute_exponent(ctx: &PbwContext, j: usize, k: usize) -> Result<i64, MinorError> {
    let (dj, dk) = (flag_minor(ctx, j)?, flag_minor(ctx, k)?);
    let formula = nform_pair(ctx.datum(), ctx.word(), &dj.c, &dk.c);
    if j == k {
        return Ok(0);
    }
    let jk = single_q_power(&ctx.expand_product(&dj, &dk)?);
    let kj = single_q_power(&ctx.expand_product(&dk, &dj)?);
    let (Some((c1, a)), Some((c2, b))) = (jk, kj) else {
        return Err(MinorError::NotQCommuting { j, k });
    };
    if c1 != c2 {
        return Err(MinorError::NotQCommuting { j, k });
    }
    let measured = a - b;
    if measured != formula {
        return Err(MinorError::ExponentMismatch { j, k, measured, formula });
    }
    Ok(measured)
}

/// Λ_{jk} = N_w̃(n_j, n_k) for all pairs of flag minors.
pub fn lambda_matrix(ctx: &PbwContext) -> Result<Vec<Vec<i64>>, MinorError> {
    let data: Vec<LusztigData> = (1..=ctx.len()).map(|k| n_k(ctx, k)).collect::<Result<_, _>>()?;
    Ok(data.iter().map(|a| data.iter().map(|b| nform_pair(ctx.datum(), ctx.word(), a, b)).collect()).collect())
}

/// The q-commutation matrix, every entry measured from products.
pub fn measured_lambda_matrix(ctx: &PbwContext) -> Result<Vec<Vec<i64>>, MinorError> {
    let l = ctx.len();
    let pairs: Vec<(usize, usize)> = (1..=l).flat_map(|j| (j + 1..=l).map(move |k| (j, k))).collect();
    let vals: Vec<i64> = pairs.par_iter().map(|&(j, k)| qcommute_exponent(ctx, j, k)).collect::<Result<_, _>>()?;
    let mut m = vec![vec![0; l]; l];
    for (&(j, k), v) in pairs.iter().zip(vals) {
        m[j - 1][k - 1] = v;
        m[k - 1][j - 1] = -v;
    }
    Ok(m)
}

/// Outcome of a strong-compatibility sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatReport {
    pub checked: usize,
    /// Exponent vectors m whose monomial Π Δ_k^{m_k} is not a q-power times G^up(Σ m_k n_k).
    pub failures: Vec<Vec<u32>>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every ordered monomial Π_k Δ_{w̃,k}^{m_k} with 1 ≤ Σ m_k ≤ bound equals
/// q^a G^up(b_{−1}(Σ m_k n_k)).
pub fn check_strong_compatibility(ctx: &PbwContext, degree_bound: u32) -> Result<CompatReport, MinorError> {
    let l = ctx.len();
    let minors: Vec<DcbElement> = (1..=l).map(|k| flag_minor(ctx, k)).collect::<Result<_, _>>()?;
    let monomials: Vec<LusztigData> =
        LusztigData::all_up_to(l, degree_bound).into_iter().filter(|m| !m.is_zero()).collect();
    let results: Vec<Option<Vec<u32>>> = monomials
        .par_iter()
        .map(|m| {
            let mut x = WordElt::one();
            let mut target = LusztigData::zero(l);
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    x = &x * &minors[k].elt;
                    target = target.add(&minors[k].c);
                }
            }
            let ok = single_q_power(&ctx.expand_dcb(&x)?).is_some_and(|(c, _)| c == target);
            Ok((!ok).then(|| m.0.clone()))
        })
        .collect::<Result<_, DualError>>()?;
    Ok(CompatReport { checked: monomials.len(), failures: results.into_iter().flatten().collect() })
}

/// Whether Δ_{wλ} Δ_{wμ} = q^{(wμ−μ, λ)} Δ_{w(λ+μ)}, the extremal product identity for the
/// form used throughout this crate.
pub fn check_extremal_identity(ctx: &PbwContext, lam: &Weight, mu: &Weight) -> Result<bool, MinorError> {
    let dl = minor_for_weight(ctx, lam)?;
    let dm = minor_for_weight(ctx, mu)?;
    let sum = Weight(lam.0.iter().zip(&mu.0).map(|(a, b)| a + b).collect());
    let dsum = minor_for_weight(ctx, &sum)?;
    let (_, diff) = ctx.datum().weyl_weight(ctx.word().letters(), mu);
    let e = ctx.datum().form_weight(&diff, lam);
    Ok(ctx.uq().eq_mod_radical(&(&dl.elt * &dm.elt), &dsum.elt.scale(&ScalarQ::q_pow(e)))?)
}

/// c ↦ (^φc, λ(c)) with c^{(i)} = min{c_k : i_k = i}, ^φc = c − Σ c^{(i)} n^i and
/// λ(c) = Σ c^{(i)} ϖ_i.
pub fn interval_free_reduce(ctx: &PbwContext, c: &LusztigData) -> Result<(LusztigData, Weight), MinorError> {
    let w = ctx.word();
    if c.len() != w.len() {
        return Err(DualError::DatumLength { got: c.clone(), got_len: c.len(), expected: w.len() }.into());
    }
    let rank = ctx.datum().rank();
    let mut lam = vec![0i64; rank];
    for (i, slot) in lam.iter_mut().enumerate() {
        *slot = (0..w.len()).filter(|&k| w.letter(k) == i).map(|k| c.0[k] as i64).min().unwrap_or(0);
    }
    let reduced = LusztigData((0..w.len()).map(|k| c.0[k] - lam[w.letter(k)] as u32).collect());
    Ok((reduced, Weight(lam)))
}

/// Verifies G^up(b_{−1}(c)) ≃ G^up(b_{−1}(^φc)) Δ_{wλ(c)}; returns the q-exponent a with
/// G^up(^φc) Δ = q^a G^up(c), or `None` if the product is not a single q-power times G^up(c).
pub fn check_factorization(ctx: &PbwContext, c: &LusztigData) -> Result<Option<i64>, MinorError> {
    let (phi, lam) = interval_free_reduce(ctx, c)?;
    let g = ctx.dual_canonical(&phi)?;
    let d = minor_for_weight(ctx, &lam)?;
    Ok(single_q_power(&ctx.expand_product(&g, &d)?).and_then(|(t, a)| (t == *c).then_some(a)))
}

/// Initial seed data: flag-minor Lusztig data, the exponent matrix and frozen positions. The
/// exchange matrix is not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub minors: Vec<LusztigData>,
    pub lambda_matrix: Vec<Vec<i64>>,
    pub frozen: Vec<usize>,
    pub exchange_matrix: Option<Vec<Vec<i64>>>,
}

pub fn export_seed(ctx: &PbwContext) -> Result<SeedRecord, MinorError> {
    require_minus(ctx)?;
    Ok(SeedRecord {
        minors: (1..=ctx.len()).map(|k| n_k(ctx, k)).collect::<Result<_, _>>()?,
        lambda_matrix: lambda_matrix(ctx)?,
        frozen: frozen(ctx),
        exchange_matrix: None,
    })
}

/// Exponents of Π Δ_k^{m_k} against the minors, for reports.
pub fn minor_products(ctx: &PbwContext, m: &LusztigData) -> Result<BTreeMap<LusztigData, ScalarQ>, MinorError> {
    let mut x = WordElt::one();
    for (k, &e) in m.0.iter().enumerate() {
        let d = flag_minor(ctx, k + 1)?;
        for _ in 0..e {
            x = &x * &d.elt;
        }
    }
    Ok(ctx.expand_dcb(&x)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::rootdata::{ReducedWord, RootDatum};
    use crate::wordalg::UqMinus;

    fn ctx(name: &str, word: &[usize]) -> PbwContext {
        let d = RootDatum::preset(name).unwrap();
        let w = ReducedWord::new(&d, word).unwrap();
        PbwContext::new(Arc::new(UqMinus::new(d)), w, Sign::Minus)
    }

    #[test]
    fn minor_data() {
        let c = ctx("A2", &[0, 1, 0]);
        assert_eq!(n_k(&c, 1).unwrap(), LusztigData(vec![1, 0, 0]));
        assert_eq!(n_k(&c, 2).unwrap(), LusztigData(vec![0, 1, 0]));
        assert_eq!(n_k(&c, 3).unwrap(), LusztigData(vec![1, 0, 1]));
        assert_eq!(frozen(&c), vec![2, 3]);
        let a3 = ctx("A3", &[0, 1, 0, 2, 1, 0]);
        assert_eq!(frozen(&a3), vec![4, 5, 6]);
        let a1 = ctx("A1", &[0]);
        let s = export_seed(&a1).unwrap();
        assert_eq!((s.minors.len(), s.frozen.clone(), s.exchange_matrix), (1, vec![1], None));
    }

    #[test]
    fn minors_have_extremal_degree() {
        let c = ctx("B2", &[0, 1, 0, 1]);
        for i in 0..2 {
            let lam = Weight::fundamental(2, i);
            let (_, diff) = c.datum().weyl_weight(c.word().letters(), &lam);
            assert_eq!(c.degree_of(&n_lambda(&c, &lam).unwrap()), -&diff);
        }
    }

    #[test]
    fn a2_minors_q_commute() {
        let c = ctx("A2", &[0, 1, 0]);
        let m = measured_lambda_matrix(&c).unwrap();
        assert_eq!(m, lambda_matrix(&c).unwrap());
        assert!((0..3).all(|j| m[j][j] == 0));
    }

    #[test]
    fn a2_strong_compatibility() {
        let c = ctx("A2", &[0, 1, 0]);
        let r = check_strong_compatibility(&c, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 19);
    }

    #[test]
    fn extremal_identity_for_fundamental_weights() {
        let c = ctx("A2", &[0, 1, 0]);
        for i in 0..2 {
            for j in 0..2 {
                assert!(check_extremal_identity(&c, &Weight::fundamental(2, i), &Weight::fundamental(2, j)).unwrap());
            }
        }
    }

    #[test]
    fn interval_free_examples() {
        let c = ctx("A2", &[0, 1, 0]);
        let (phi, lam) = interval_free_reduce(&c, &LusztigData(vec![2, 1, 1])).unwrap();
        assert_eq!(phi, LusztigData(vec![1, 0, 0]));
        assert_eq!(lam, Weight(vec![1, 1]));
        let free = LusztigData(vec![2, 0, 0]);
        assert_eq!(interval_free_reduce(&c, &free).unwrap(), (free, Weight(vec![0, 0])));
        for d in LusztigData::all_up_to(3, 3) {
            assert!(check_factorization(&c, &d).unwrap().is_some(), "{d}");
        }
    }
}
