//! PBW and dual PBW bases of U_q⁻(w, e), straightening, and the dual canonical basis.
//!
//! Everything is organized around a [`PbwContext`], which fixes a reduced word and a sign and
//! caches, per degree, the PBW monomials in pivot coordinates together with their Gram images.
//! Pairings against monomials and the action of σ then only touch vectors whose length is the
//! dimension of the weight space.

mod canonical;
mod pbw;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, Sign};
use crate::rootdata::{ReducedWord, RootDatum};
use crate::scalars::ScalarQ;
use crate::wordalg::WordError;

pub use canonical::{single_q_power, DcbElement};
pub use pbw::PbwContext;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("Lusztig datum {got} has length {got_len}, expected {expected}")]
    DatumLength { got: LusztigData, got_len: usize, expected: usize },
    #[error("element is not in U_q⁻(w, e): {0}")]
    NotInSubalgebra(String),
    #[error("triangularity violated: {0}")]
    Triangularity(String),
    #[error("coefficient {0} is not bar-antisymmetric in ℤ[q, q⁻¹]")]
    NotBarAntisymmetric(String),
    #[error("positions must satisfy 1 <= j < k <= {len}, got j = {j}, k = {k}")]
    Positions { j: usize, k: usize, len: usize },
    #[error("elements belong to different contexts")]
    ContextMismatch,
}

/// Exponents c = (c_1, …, c_l) of a PBW monomial. The derived order is the lexicographic one in
/// which earlier positions dominate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LusztigData(pub Vec<u32>);

impl LusztigData {
    pub fn zero(l: usize) -> LusztigData {
        LusztigData(vec![0; l])
    }

    pub fn unit(l: usize, k: usize, c: u32) -> LusztigData {
        let mut v = vec![0; l];
        v[k] = c;
        LusztigData(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LusztigData) -> LusztigData {
        LusztigData(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, m: u32) -> LusztigData {
        LusztigData(self.0.iter().map(|a| a * m).collect())
    }

    /// All data of length `l` with entries summing to at most `n`, in increasing order.
    pub fn all_up_to(l: usize, n: u32) -> Vec<LusztigData> {
        fn rec(l: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<LusztigData>) {
            if cur.len() == l {
                out.push(LusztigData(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur.push(v);
                rec(l, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(l, n, &mut Vec::with_capacity(l), &mut out);
        out
    }
}

impl fmt::Display for LusztigData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for LusztigData {
    type Err = String;
    fn from_str(s: &str) -> Result<LusztigData, String> {
        s.trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| format!("bad entry `{t}` in Lusztig datum")))
            .collect::<Result<Vec<_>, _>>()
            .map(LusztigData)
    }
}

impl Serialize for LusztigData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LusztigData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<LusztigData, D::Error> {
        Vec::<u32>::deserialize(d).map(LusztigData)
    }
}

/// Which family the coordinates of a [`PbwVector`] refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PbwBasis {
    /// The PBW monomials F_e(c).
    Pbw,
    /// The dual PBW elements F_e^up(c) = F_e(c) / (F_e(c), F_e(c))_K.
    DualPbw,
}

/// Identifies the reduced word and sign a coordinate vector refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub cartan: Vec<Vec<i64>>,
    /// 1-based letters.
    pub word: Vec<usize>,
    pub sign: Sign,
}

impl ContextInfo {
    pub fn new(datum: &RootDatum, word: &ReducedWord, sign: Sign) -> ContextInfo {
        ContextInfo { cartan: datum.cartan().to_vec(), word: word.to_one_based(), sign }
    }
}

/// Coordinates of an element of U_q⁻(w, e) in a PBW-type basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwVector {
    pub context: ContextInfo,
    pub basis: PbwBasis,
    pub coords: BTreeMap<LusztigData, ScalarQ>,
}

#[derive(Serialize, Deserialize)]
struct CoordJson {
    c: LusztigData,
    coeff: ScalarQ,
}

#[derive(Serialize, Deserialize)]
struct PbwVectorJson {
    context: ContextInfo,
    basis: PbwBasis,
    coords: Vec<CoordJson>,
}

impl PbwVector {
    pub fn get(&self, c: &LusztigData) -> ScalarQ {
        self.coords.get(c).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<PbwVector, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

impl Serialize for PbwVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PbwVectorJson {
            context: self.context.clone(),
            basis: self.basis,
            coords: self.coords.iter().map(|(c, v)| CoordJson { c: c.clone(), coeff: v.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PbwVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<PbwVector, D::Error> {
        let j = PbwVectorJson::deserialize(d)?;
        let mut coords = BTreeMap::new();
        for t in j.coords {
            if !t.coeff.is_zero() {
                coords.insert(t.c, t.coeff);
            }
        }
        Ok(PbwVector { context: j.context, basis: j.basis, coords })
    }
}

/// c_w̃(c, c′) = Σ_{l<k} (c_kβ_k, c′_lβ_l) − ½ Σ_k c_k c′_k (β_k, β_k). Always an integer, since
/// (β, β)/2 is a symmetrizer for every real root β.
pub fn cform(datum: &RootDatum, word: &ReducedWord, c: &LusztigData, cp: &LusztigData) -> i64 {
    let b = word.betas();
    let mut s = 0;
    for k in 0..word.len() {
        if c.0[k] == 0 {
            continue;
        }
        for l in 0..k {
            s += c.0[k] as i64 * cp.0[l] as i64 * datum.form(&b[k], &b[l]);
        }
        s -= c.0[k] as i64 * cp.0[k] as i64 * datum.form(&b[k], &b[k]) / 2;
    }
    s
}

/// N_w̃(c, c′) = c_w̃(c, c′) − c_w̃(c′, c).
pub fn nform_pair(datum: &RootDatum, word: &ReducedWord, c: &LusztigData, cp: &LusztigData) -> i64 {
    cform(datum, word, c, cp) - cform(datum, word, cp, c)
}

/// Exponent k of the top term q^k B^up(c + c′) of B^up(c)B^up(c′). With
/// c̃(c, c′) = c_w̃(c, c′) + Σ_k c_k c′_k (β_k, β_k) it is −c̃(c, c′) for e = +1 and −c̃(c′, c)
/// for e = −1.
pub fn product_leading_exponent(
    datum: &RootDatum,
    word: &ReducedWord,
    sign: Sign,
    c: &LusztigData,
    cp: &LusztigData,
) -> i64 {
    let tilde = |a: &LusztigData, b: &LusztigData| {
        let diag: i64 = (0..word.len())
            .map(|k| a.0[k] as i64 * b.0[k] as i64 * datum.form(&word.betas()[k], &word.betas()[k]))
            .sum();
        cform(datum, word, a, b) + diag
    };
    match sign {
        Sign::Plus => -tilde(c, cp),
        Sign::Minus => -tilde(cp, c),
    }
}
