//! Cartan data, the invariant form, Weyl group action on words, and reduced words.
//!
//! Indices are 0-based in the library; the JSON config and CLI use 1-based letters.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("Cartan matrix must be square and nonempty")]
    Shape,
    #[error("diagonal entry a_{0}{0} must be 2")]
    Diagonal(usize),
    #[error("off-diagonal entry a_{0}{1} must be non-positive")]
    Positive(usize, usize),
    #[error("a_{0}{1} = 0 must match a_{1}{0} = 0")]
    ZeroPattern(usize, usize),
    #[error("symmetrizers must be positive, one per index")]
    Symmetrizers,
    #[error("d_{0} a_{0}{1} != d_{1} a_{1}{0}")]
    NotSymmetrized(usize, usize),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("letter {0} is outside the index set 1..=rank")]
    Letter(usize),
    /// Carries 1-based letters.
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("invalid datum JSON: {0}")]
    Json(String),
}

/// Coordinates in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

/// Coordinates in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl RootVec {
    pub fn zero(n: usize) -> RootVec {
        RootVec(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> RootVec {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVec(v)
    }

    /// Σ ξ_i.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_positive(&self) -> bool {
        self.is_nonneg() && !self.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Weight {
    pub fn zero(n: usize) -> Weight {
        Weight(vec![0; n])
    }

    pub fn fundamental(n: usize, i: usize) -> Weight {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl Index<usize> for RootVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

macro_rules! lattice_ops {
    ($t:ident) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.iter().map(|a| -a).collect())
            }
        }
        impl Mul<&$t> for i64 {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                $t(rhs.0.iter().map(|a| self * a).collect())
            }
        }
        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, rhs: &$t) {
                for (a, b) in self.0.iter_mut().zip(&rhs.0) {
                    *a += b;
                }
            }
        }
    };
}
lattice_ops!(RootVec);
lattice_ops!(Weight);

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct DatumConfig {
    cartan: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
    #[serde(default)]
    labels: Vec<String>,
}

/// A symmetrizable generalized Cartan matrix with its symmetrizers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootDatum {
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    labels: Vec<String>,
}

pub const PRESETS: [&str; 6] = ["A1", "A2", "A3", "B2", "G2", "A1~"];

impl RootDatum {
    pub fn new(cartan: Vec<Vec<i64>>, sym: Vec<i64>, labels: Vec<String>) -> Result<RootDatum, DatumError> {
        let n = cartan.len();
        if n == 0 || cartan.iter().any(|r| r.len() != n) {
            return Err(DatumError::Shape);
        }
        if sym.len() != n || sym.iter().any(|&d| d <= 0) {
            return Err(DatumError::Symmetrizers);
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(DatumError::Diagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(DatumError::Positive(i, j));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(DatumError::ZeroPattern(i, j));
                }
                if sym[i] * cartan[i][j] != sym[j] * cartan[j][i] {
                    return Err(DatumError::NotSymmetrized(i, j));
                }
            }
        }
        let labels = if labels.len() == n { labels } else { (1..=n).map(|k| k.to_string()).collect() };
        Ok(RootDatum { cartan, sym, labels })
    }

    pub fn preset(name: &str) -> Result<RootDatum, DatumError> {
        let (c, d): (Vec<Vec<i64>>, Vec<i64>) = match name {
            "A1" => (vec![vec![2]], vec![1]),
            "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            "A3" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1]),
            // α_1 long
            "B2" => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            "G2" => (vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            "A1~" => (vec![vec![2, -2], vec![-2, 2]], vec![1, 1]),
            _ => return Err(DatumError::UnknownPreset(name.to_string())),
        };
        RootDatum::new(c, d, Vec::new())
    }

    pub fn from_json(text: &str) -> Result<RootDatum, DatumError> {
        let cfg: DatumConfig = serde_json::from_str(text).map_err(|e| DatumError::Json(e.to_string()))?;
        RootDatum::new(cfg.cartan, cfg.symmetrizers, cfg.labels)
    }

    pub fn to_json(&self) -> String {
        let cfg =
            DatumConfig { cartan: self.cartan.clone(), symmetrizers: self.sym.clone(), labels: self.labels.clone() };
        serde_json::to_string(&cfg).expect("datum serializes")
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.sym[i]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.sym
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True iff the symmetrized Cartan matrix is positive definite, i.e. the Weyl group is finite.
    pub fn is_finite_type(&self) -> bool {
        let n = self.rank();
        let mut m: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| self.sform(i, j) as i128).collect()).collect();
        // Bareiss elimination: the k-th pivot is the k-th leading principal minor.
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] <= 0 {
                return false;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        true
    }

    /// (α_i, α_j) = d_i a_ij.
    pub fn sform(&self, i: usize, j: usize) -> i64 {
        self.sym[i] * self.cartan[i][j]
    }

    /// The invariant form on the root lattice.
    pub fn form(&self, x: &RootVec, y: &RootVec) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * y[j] * self.sform(i, j);
            }
        }
        s
    }

    /// (ξ, λ) for ξ in the root lattice and λ in the weight lattice.
    pub fn form_weight(&self, x: &RootVec, lam: &Weight) -> i64 {
        (0..self.rank()).map(|i| x[i] * self.sym[i] * lam[i]).sum()
    }

    /// ⟨h_i, ξ⟩.
    pub fn pair_root(&self, i: usize, x: &RootVec) -> i64 {
        (0..self.rank()).map(|j| self.cartan[i][j] * x[j]).sum()
    }

    /// ⟨h_i, λ⟩.
    pub fn pair_weight(&self, i: usize, lam: &Weight) -> i64 {
        lam[i]
    }

    pub fn root_to_weight(&self, x: &RootVec) -> Weight {
        Weight((0..self.rank()).map(|i| self.pair_root(i, x)).collect())
    }

    pub fn reflect_root(&self, i: usize, x: &RootVec) -> RootVec {
        let mut out = x.clone();
        out.0[i] -= self.pair_root(i, x);
        out
    }

    pub fn reflect_weight(&self, i: usize, lam: &Weight) -> Weight {
        let c = lam[i];
        Weight((0..self.rank()).map(|j| lam[j] - c * self.cartan[j][i]).collect())
    }

    pub fn check_word(&self, word: &[usize]) -> Result<(), DatumError> {
        match word.iter().find(|&&i| i >= self.rank()) {
            Some(&i) => Err(DatumError::Letter(i + 1)),
            None => Ok(()),
        }
    }

    /// s_{i_1} ⋯ s_{i_l} applied to a root-lattice vector.
    pub fn weyl_root(&self, word: &[usize], x: &RootVec) -> RootVec {
        word.iter().rev().fold(x.clone(), |acc, &i| self.reflect_root(i, &acc))
    }

    /// Returns `(wλ, wλ − λ)` with the difference in the root lattice.
    pub fn weyl_weight(&self, word: &[usize], lam: &Weight) -> (Weight, RootVec) {
        let mut cur = lam.clone();
        let mut diff = RootVec::zero(self.rank());
        for &i in word.iter().rev() {
            let c = cur[i];
            cur = self.reflect_weight(i, &cur);
            diff.0[i] -= c;
        }
        (cur, diff)
    }

    /// β_k = s_{i_1} ⋯ s_{i_{k−1}}(α_{i_k}).
    pub fn beta_sequence(&self, word: &[usize]) -> Vec<RootVec> {
        (0..word.len()).map(|k| self.weyl_root(&word[..k], &RootVec::simple(self.rank(), word[k]))).collect()
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.beta_sequence(word).iter().all(RootVec::is_positive)
    }

    /// N(ξ) = ½((ξ,ξ) + Σ ξ_i (α_i,α_i)).
    pub fn nform(&self, x: &RootVec) -> i64 {
        let diag: i64 = (0..self.rank()).map(|i| x[i] * 2 * self.sym[i]).sum();
        let t = self.form(x, x) + diag;
        assert!(t % 2 == 0, "N(ξ) must be integral");
        t / 2
    }

    /// Equality of Weyl group elements via the action on a regular dominant weight.
    pub fn same_element(&self, w1: &[usize], w2: &[usize]) -> bool {
        let rho = Weight((0..self.rank() as i64).map(|k| 1 + 7 * k).collect());
        self.weyl_weight(w1, &rho).0 == self.weyl_weight(w2, &rho).0
    }

    /// All reduced words of the element represented by `word` (which must be reduced).
    pub fn reduced_words(&self, word: &[usize]) -> Vec<Vec<usize>> {
        let l = word.len();
        let n = self.rank();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(l);
        fn rec(d: &RootDatum, n: usize, l: usize, target: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == l {
                if d.same_element(cur, target) {
                    out.push(cur.clone());
                }
                return;
            }
            for i in 0..n {
                cur.push(i);
                if d.is_reduced(cur) {
                    rec(d, n, l, target, cur, out);
                }
                cur.pop();
            }
        }
        rec(self, n, l, word, &mut cur, &mut out);
        out
    }
}

/// A validated reduced word with its root sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    letters: Vec<usize>,
    betas: Vec<RootVec>,
}

impl ReducedWord {
    pub fn new(datum: &RootDatum, letters: &[usize]) -> Result<ReducedWord, DatumError> {
        datum.check_word(letters)?;
        let betas = datum.beta_sequence(letters);
        if !betas.iter().all(RootVec::is_positive) {
            return Err(DatumError::NotReduced(letters.iter().map(|l| l + 1).collect()));
        }
        Ok(ReducedWord { letters: letters.to_vec(), betas })
    }

    /// Parses 1-based comma-separated letters such as `1,2,1`.
    pub fn parse(datum: &RootDatum, text: &str) -> Result<ReducedWord, DatumError> {
        let mut letters = Vec::new();
        for t in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = t.parse().map_err(|_| DatumError::Json(format!("bad letter `{t}`")))?;
            if v == 0 {
                return Err(DatumError::Letter(0));
            }
            letters.push(v - 1);
        }
        ReducedWord::new(datum, &letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn betas(&self) -> &[RootVec] {
        &self.betas
    }

    pub fn letter(&self, k: usize) -> usize {
        self.letters[k]
    }

    /// 0-based `(k⁻, k_max)`: the previous position with the same letter and the last one.
    pub fn kops0(&self, k: usize) -> (Option<usize>, usize) {
        let i = self.letters[k];
        let prev = (0..k).rev().find(|&s| self.letters[s] == i);
        let last = (0..self.len()).rev().find(|&s| self.letters[s] == i).unwrap();
        (prev, last)
    }

    /// 1-based `(k⁻, k_max)` for 1 ≤ k ≤ l, with k⁻ = 0 when there is no earlier occurrence.
    pub fn kops(&self, k: usize) -> (usize, usize) {
        let (p, m) = self.kops0(k - 1);
        (p.map_or(0, |s| s + 1), m + 1)
    }

    /// Σ c_k β_k.
    pub fn weight_of(&self, c: &[u32]) -> RootVec {
        let n = self.betas.first().map_or(0, RootVec::len);
        let mut acc = RootVec::zero(n);
        for (k, &ck) in c.iter().enumerate() {
            if ck > 0 {
                acc += &(ck as i64 * &self.betas[k]);
            }
        }
        acc
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.letters.iter().map(|i| i + 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> RootVec {
        RootVec(v.to_vec())
    }

    #[test]
    fn forms_and_pairings() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(a2.form(&rv(&[1, 0]), &rv(&[0, 1])), -1);
        let b2 = RootDatum::preset("B2").unwrap();
        for i in 0..2 {
            let e = RootVec::simple(2, i);
            assert_eq!(b2.form(&e, &e), 2 * b2.d(i));
        }
        assert_eq!(a2.pair_weight(0, &Weight::fundamental(2, 1)), 0);
    }

    #[test]
    fn reflections() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(a2.reflect_root(0, &rv(&[1, 0])), rv(&[-1, 0]));
        assert_eq!(a2.reflect_root(0, &rv(&[0, 1])), rv(&[1, 1]));
        let lam = Weight(vec![3, -2]);
        assert_eq!(a2.reflect_weight(1, &a2.reflect_weight(1, &lam)), lam);
        let (wl, diff) = a2.weyl_weight(&[0], &Weight::fundamental(2, 0));
        assert_eq!(diff, rv(&[-1, 0]));
        assert_eq!(wl, Weight(vec![-1, 1]));
    }

    #[test]
    fn beta_sequences() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(a2.beta_sequence(&[0, 1, 0]), vec![rv(&[1, 0]), rv(&[1, 1]), rv(&[0, 1])]);
        assert!(!a2.is_reduced(&[0, 0]));
        let b2 = RootDatum::preset("B2").unwrap();
        let betas = b2.beta_sequence(&[0, 1, 0, 1]);
        assert!(b2.is_reduced(&[0, 1, 0, 1]));
        let mut s = betas.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 4);
        // long α_1: roots α_1, α_1+α_2, α_1+2α_2, α_2
        assert_eq!(betas, vec![rv(&[1, 0]), rv(&[1, 1]), rv(&[1, 2]), rv(&[0, 1])]);
    }

    #[test]
    fn nform_values() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(a2.nform(&rv(&[-1, 0])), 0);
        assert_eq!(a2.nform(&rv(&[0, 0])), 0);
        assert_eq!(a2.nform(&rv(&[-1, -1])), -1);
    }

    #[test]
    fn kops_examples() {
        let a2 = RootDatum::preset("A2").unwrap();
        let w = ReducedWord::new(&a2, &[0, 1, 0]).unwrap();
        assert_eq!(w.kops(3), (1, 3));
        assert_eq!(w.kops(2), (0, 2));
        let b2 = RootDatum::preset("B2").unwrap();
        let w = ReducedWord::new(&b2, &[0, 1, 0, 1]).unwrap();
        assert_eq!(w.kops(2), (0, 4));
    }

    #[test]
    fn reduced_words_of_longest() {
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(a2.reduced_words(&[0, 1, 0]).len(), 2);
        let b2 = RootDatum::preset("B2").unwrap();
        assert_eq!(b2.reduced_words(&[0, 1, 0, 1]).len(), 2);
        let a3 = RootDatum::preset("A3").unwrap();
        assert_eq!(a3.reduced_words(&[0, 1, 0, 2, 1, 0]).len(), 16);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(
            RootDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![1, 1], vec![]),
            Err(DatumError::NotSymmetrized(..))
        ));
        assert!(matches!(
            RootDatum::new(vec![vec![2, 1], vec![1, 2]], vec![1, 1], vec![]),
            Err(DatumError::Positive(..))
        ));
        let a2 = RootDatum::preset("A2").unwrap();
        assert!(matches!(ReducedWord::new(&a2, &[0, 0]), Err(DatumError::NotReduced(_))));
        let j = a2.to_json();
        assert_eq!(RootDatum::from_json(&j).unwrap(), a2);
    }
}
