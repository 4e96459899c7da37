//! Dense exact linear algebra over ℚ(q).

use super::poly::{self, Laurent};
use super::ScalarQ;

pub type Matrix = Vec<Vec<ScalarQ>>;

/// A⁻¹ = adj / det for a matrix over ℤ[q, q⁻¹], so that solving only divides once per entry.
#[derive(Clone, Debug)]
pub struct AdjugateInverse {
    adj: Matrix,
    det: ScalarQ,
}

impl AdjugateInverse {
    /// Fraction-free Gauss–Jordan elimination. Every intermediate entry is a minor of the
    /// augmented matrix, so each division is exact and no gcds are taken. `None` if an entry is
    /// not an integral Laurent polynomial or the matrix is singular.
    pub fn new(m: &[Vec<ScalarQ>]) -> Option<AdjugateInverse> {
        let n = m.len();
        let mut a: Vec<Vec<Laurent>> = Vec::with_capacity(n);
        for (i, row) in m.iter().enumerate() {
            let mut r: Vec<Laurent> =
                row.iter().map(|x| x.is_integral_laurent().then(|| x.numerator().clone())).collect::<Option<_>>()?;
            r.extend((0..n).map(|j| if i == j { Laurent::one() } else { Laurent::zero() }));
            a.push(r);
        }
        let mut prev = Laurent::one();
        for k in 0..n {
            let piv = (k..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].coeffs().len())?;
            a.swap(k, piv);
            let pivot_row = a[k].clone();
            let p = pivot_row[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let f = row[k].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    let t = &(&p * &*x) - &(&f * y);
                    *x = div_exact(&t, &prev)?;
                }
            }
            prev = p;
        }
        let adj = a.into_iter().map(|row| row[n..].iter().cloned().map(ScalarQ::from_laurent).collect()).collect();
        Some(AdjugateInverse { adj, det: ScalarQ::from_laurent(prev) })
    }

    /// A⁻¹ b.
    pub fn solve(&self, b: &[ScalarQ]) -> Vec<ScalarQ> {
        mat_vec(&self.adj, b).into_iter().map(|x| x.checked_div(&self.det).expect("nonzero determinant")).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        self.adj
            .iter()
            .map(|row| row.iter().map(|x| x.checked_div(&self.det).expect("nonzero determinant")).collect())
            .collect()
    }
}

fn div_exact(a: &Laurent, b: &Laurent) -> Option<Laurent> {
    if a.is_zero() {
        return Some(Laurent::zero());
    }
    let q = poly::poly_div_exact(a.coeffs(), b.coeffs())?;
    Some(Laurent::from_coeffs(a.low() - b.low(), q))
}

/// Gauss–Jordan inverse; `None` if the matrix is singular.
pub fn invert(m: &[Vec<ScalarQ>]) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut inv: Matrix =
        (0..n).map(|i| (0..n).map(|j| if i == j { ScalarQ::one() } else { ScalarQ::zero() }).collect()).collect();
    for col in 0..n {
        // prefer the simplest nonzero pivot to limit coefficient growth
        let piv = (col..n).filter(|&r| !a[r][col].is_zero()).min_by_key(|&r| a[r][col].to_string().len())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv().ok()?;
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x = &*x * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in 0..n {
                if !a[col][k].is_zero() {
                    let t = &f * &a[col][k];
                    a[r][k] -= &t;
                }
                if !inv[col][k].is_zero() {
                    let t = &f * &inv[col][k];
                    inv[r][k] -= &t;
                }
            }
        }
    }
    Some(inv)
}

pub fn mat_vec(m: &[Vec<ScalarQ>], v: &[ScalarQ]) -> Vec<ScalarQ> {
    m.iter()
        .map(|row| {
            let mut acc = ScalarQ::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let q = ScalarQ::q_pow(1);
        let m = vec![vec![ScalarQ::one(), q.clone()], vec![q.clone(), ScalarQ::one()]];
        let inv = invert(&m).unwrap();
        for i in 0..2 {
            let col: Vec<ScalarQ> = inv.iter().map(|row| row[i].clone()).collect();
            let e = mat_vec(&m, &col);
            for (k, x) in e.iter().enumerate() {
                assert_eq!(x.is_one(), k == i);
                assert_eq!(x.is_zero(), k != i);
            }
        }
        let sing = vec![vec![q.clone(), q.clone()], vec![q.clone(), q]];
        assert!(invert(&sing).is_none());
        assert!(AdjugateInverse::new(&sing).is_none());
    }

    #[test]
    fn adjugate_inverse_agrees_with_gauss_jordan() {
        let m: Matrix = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        ScalarQ::monomial(1 + ((i * j) % 3) as i64, (i + 2 * j) as i64 - 3)
                            + ScalarQ::int((i == j) as i64)
                    })
                    .collect()
            })
            .collect();
        let adj = AdjugateInverse::new(&m).unwrap();
        assert_eq!(adj.to_matrix(), invert(&m).unwrap());
        let b: Vec<ScalarQ> = (0..4).map(ScalarQ::q_pow).collect();
        assert_eq!(adj.solve(&b), mat_vec(&invert(&m).unwrap(), &b));
    }
}
