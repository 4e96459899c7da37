//! Kashiwara's modified root operators via the splitting U_q⁻ = U_q⁻[i] ⊕ f_i U_q⁻.

use num_traits::{One, Zero};

use crate::rootdata::RootVec;
use crate::scalars::ScalarQ;

use super::{UqMinus, WordElt, WordError};

/// x = Σ_n f_i^{(n)} x_n with ᵢr(x_n) = 0; `parts[n]` is x_n.
#[derive(Clone, Debug)]
pub struct KashiwaraDecomposition {
    pub i: usize,
    pub parts: Vec<WordElt>,
}

impl KashiwaraDecomposition {
    pub fn reassemble(&self, uq: &UqMinus) -> WordElt {
        let mut out = WordElt::zero();
        for (n, xn) in self.parts.iter().enumerate() {
            out = &out + &(&uq.divided_power(self.i, n as u32) * xn);
        }
        out
    }
}

impl UqMinus {
    /// Largest n with ᵢrⁿ x ≠ 0 in U_q⁻; x homogeneous.
    pub fn ir_depth(&self, i: usize, x: &WordElt) -> Result<usize, WordError> {
        let mut p = self.dual_of(x)?;
        if p.is_zero() {
            return Ok(0);
        }
        let mut n = 0;
        while let Some(next) = self.ir_dual(i, &p) {
            if next.is_zero() {
                break;
            }
            p = next;
            n += 1;
        }
        Ok(n)
    }

    /// Peels off the top block repeatedly: with N maximal such that ᵢr^N x ≠ 0, the block
    /// is x_N = q_i^{N(N−1)/2} ᵢr^N x, because ᵢr f_i^{(n)} = q_i^{1−n} f_i^{(n−1)} on U_q⁻[i].
    pub fn kashiwara_decompose(&self, i: usize, x: &WordElt) -> Result<KashiwaraDecomposition, WordError> {
        let mut parts: Vec<WordElt> = Vec::new();
        for (_, comp) in x.components(self.rank()) {
            let mut rest = comp;
            loop {
                if self.is_zero_mod_radical(&rest)? {
                    break;
                }
                let n = self.ir_depth(i, &rest)?;
                let mut y = rest.clone();
                for _ in 0..n {
                    y = y.ir(self.datum(), i);
                }
                let n64 = n as i64;
                let xn = self.reduce(&y.scale(&self.qi_pow(i, n64 * (n64 - 1) / 2)))?;
                rest = &rest - &(&self.divided_power(i, n as u32) * &xn);
                if parts.len() <= n {
                    parts.resize(n + 1, WordElt::zero());
                }
                parts[n] = &parts[n] + &xn;
                if n == 0 {
                    break;
                }
            }
        }
        Ok(KashiwaraDecomposition { i, parts })
    }

    /// ẽ_i x = Σ_{n≥1} f_i^{(n−1)} x_n.
    pub fn etilde(&self, i: usize, x: &WordElt) -> Result<WordElt, WordError> {
        let dec = self.kashiwara_decompose(i, x)?;
        let mut out = WordElt::zero();
        for (n, xn) in dec.parts.iter().enumerate().skip(1) {
            out = &out + &(&self.divided_power(i, n as u32 - 1) * xn);
        }
        self.reduce(&out)
    }

    /// f̃_i x = Σ_{n≥0} f_i^{(n+1)} x_n.
    pub fn ftilde(&self, i: usize, x: &WordElt) -> Result<WordElt, WordError> {
        let dec = self.kashiwara_decompose(i, x)?;
        let mut out = WordElt::zero();
        for (n, xn) in dec.parts.iter().enumerate() {
            out = &out + &(&self.divided_power(i, n as u32 + 1) * xn);
        }
        self.reduce(&out)
    }

    /// (x, x)_K at q = 0, which is 1 exactly when x ≡ ±b mod qL(∞) for some b ∈ B(∞) and 0 when
    /// x ∈ qL(∞).
    pub fn crystal_norm0(&self, x: &WordElt) -> Result<ScalarQ, WordError> {
        let mut acc = ScalarQ::zero();
        for (_, c) in x.components(self.rank()) {
            acc += &self.dual_of(&c)?.pair(&c);
        }
        Ok(acc)
    }

    fn aligned_norm(&self, x: &WordElt) -> Result<bool, WordError> {
        let n = self.crystal_norm0(x)?;
        let v = n.eval0().map_err(|_| WordError::NotCrystalAligned(format!("(x,x)_K = {n}")))?;
        if v.is_one() {
            Ok(true)
        } else if v.is_zero() {
            Ok(false)
        } else {
            Err(WordError::NotCrystalAligned(format!("(x,x)_K(0) = {v}")))
        }
    }

    /// ε_i of the crystal element congruent to x: the number of ẽ_i steps before leaving L(∞) \ qL(∞).
    pub fn eps(&self, i: usize, x: &WordElt) -> Result<usize, WordError> {
        if !self.aligned_norm(x)? {
            return Err(WordError::NotCrystalAligned("x lies in qL(∞)".into()));
        }
        let mut y = x.clone();
        let mut n = 0;
        loop {
            y = self.etilde(i, &y)?;
            if !self.aligned_norm(&y)? {
                return Ok(n);
            }
            n += 1;
        }
    }

    pub fn eps_star(&self, i: usize, x: &WordElt) -> Result<usize, WordError> {
        self.eps(i, &x.star())
    }

    /// Degree of a homogeneous element, zero for 0.
    pub fn degree_of(&self, x: &WordElt) -> Result<RootVec, WordError> {
        x.homogeneous_degree(self.rank())
    }
}
