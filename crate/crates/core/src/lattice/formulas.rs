use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{gaussian_binom, qpow, FieldTower};
use crate::mrd::{charpoly_l2_4_4, ASSUMPTION};
use crate::poly::{factor_with_candidates, ExactPolynomial, Factorization};
use crate::subspace::{alpha, alpha_nonzero, Limits, Metric};

fn qm_u64(q: u64, m: usize) -> u64 {
    q.checked_pow(m as u32).expect("q^m fits in u64")
}

fn binom2(j: usize) -> u64 {
    (j * j.saturating_sub(1) / 2) as u64
}

/// `w_j = Σ_k α_k [n-k, j-k]_{q^m} (-1)^{j-k} q^{m·C(j-k,2)}`.
pub fn whitney_via_alpha(n: usize, m: usize, q: u64, alpha: &[BigInt]) -> Vec<BigInt> {
    let qm = qm_u64(q, m);
    (0..=n)
        .map(|j| {
            (0..=j)
                .map(|k| {
                    let t = &alpha[k]
                        * gaussian_binom((n - k) as i64, (j - k) as i64, qm)
                        * qpow(q, m as u64 * binom2(j - k));
                    if (j - k) % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum()
        })
        .collect()
}

/// `α_j = Σ_k w_k [n-k, j-k]_{q^m}`.
pub fn alpha_via_whitney(n: usize, m: usize, q: u64, w: &[BigInt]) -> Vec<BigInt> {
    let qm = qm_u64(q, m);
    (0..=n)
        .map(|j| {
            (0..=j)
                .map(|k| &w[k] * gaussian_binom((n - k) as i64, (j - k) as i64, qm))
                .sum()
        })
        .collect()
}

/// `α_0, ..., α_n` by enumeration of codes.
pub fn alpha_vector(f: &FieldTower, i: usize, n: usize, limits: &Limits) -> Result<Vec<BigInt>> {
    (0..=n).map(|k| alpha(f, i, n, k, limits)).collect()
}

/// A closed-form characteristic polynomial and where it comes from.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub poly: ExactPolynomial,
    pub source: &'static str,
    pub assumption: Option<&'static str>,
}

fn prod_linear<I: IntoIterator<Item = BigInt>>(roots: I) -> ExactPolynomial {
    roots
        .into_iter()
        .fold(ExactPolynomial::one(), |acc, r| acc.mul(&ExactPolynomial::linear(r)))
}

/// `(λ - q^{(n-1)m} + Π_{s=1}^{n-1}(q^m - q^s)) · Π_{j=0}^{n-2}(λ - q^{mj})`.
pub fn charpoly_n_minus_1(n: usize, m: usize, q: u64) -> ExactPolynomial {
    let full: BigInt = (1..n).map(|s| qpow(q, m as u64) - qpow(q, s as u64)).product();
    let root = qpow(q, ((n - 1) * m) as u64) - full;
    prod_linear((0..n - 1).map(|j| qpow(q, (m * j) as u64))).mul(&ExactPolynomial::linear(root))
}

/// Whitney numbers of the first kind for `i = n-1`, `n <= m`, term by term.
pub fn whitney_n_minus_1(n: usize, m: usize, q: u64) -> Vec<BigInt> {
    let qm = qm_u64(q, m);
    let full: BigInt = (1..n).map(|s| qpow(q, m as u64) - qpow(q, s as u64)).product();
    (0..=n)
        .map(|j| {
            if j == 0 {
                return BigInt::one();
            }
            let v = qpow(q, m as u64 * binom2(j)) * gaussian_binom(n as i64, j as i64, qm)
                - qpow(q, m as u64 * binom2(j - 1)) * gaussian_binom(n as i64 - 1, j as i64 - 1, qm) * &full;
            if j % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// The characteristic polynomial of the rank-metric lattice when one of the
/// known closed forms applies.
pub fn closed_form_charpoly(i: usize, n: usize, m: usize, q: u64) -> Option<ClosedForm> {
    if i < 1 || i > n || m < 1 {
        return None;
    }
    if i == n || m <= i {
        return Some(ClosedForm {
            poly: prod_linear((0..n).map(|j| qpow(q, (m * j) as u64))),
            source: "full subspace lattice",
            assumption: None,
        });
    }
    if i == 1 {
        return Some(ClosedForm {
            poly: prod_linear((0..n).map(|j| qpow(q, j as u64))),
            source: "rank-one lattice",
            assumption: None,
        });
    }
    if i + 1 == n && n <= m {
        return Some(ClosedForm {
            poly: charpoly_n_minus_1(n, m, q),
            source: "corank-one lattice",
            assumption: None,
        });
    }
    if (i, n, m) == (2, 4, 4) {
        let c = charpoly_l2_4_4(q).ok()?;
        return Some(ClosedForm {
            poly: c.charpoly,
            source: "rank-two lattice of F_{q^4}^4",
            assumption: Some(ASSUMPTION),
        });
    }
    None
}

/// Candidate integer roots `q^e`, `0 <= e <= m(n-1)`, ascending.
pub fn root_candidates(n: usize, m: usize, q: u64) -> Vec<BigInt> {
    (0..=(m * n.saturating_sub(1)) as u64).map(|e| qpow(q, e)).collect()
}

pub fn factor_charpoly(p: &ExactPolynomial, n: usize, m: usize, q: u64) -> Factorization {
    factor_with_candidates(p, &root_candidates(n, m, q))
}

/// `n - max{k : α_k ≠ 0}`, searching from `k = n` down.
pub fn critical_exponent(f: &FieldTower, i: usize, n: usize, limits: &Limits) -> Result<usize> {
    for k in (0..=n).rev() {
        if alpha_nonzero(f, Metric::Rank, i, n, k, limits)? {
            return Ok(n - k);
        }
    }
    unreachable!("the zero code always exists")
}

/// Whether the Whitney recursion is known to hold at `j`.
pub fn whitney_recursion_range(i: usize, n: usize, m: usize, j: usize) -> bool {
    if n <= m {
        j + i > n
    } else {
        j * m > n * (m - i.min(m))
    }
}

/// Checks `w_j = -Σ_{s<j} w_s [n-s, j-s]_{q^m}` for a given Whitney vector.
pub fn whitney_recursion_check(i: usize, n: usize, m: usize, q: u64, j: usize, w: &[BigInt]) -> Result<bool> {
    if j > n || w.len() != n + 1 {
        return Err(Error::BadParams(format!("j = {j} with n = {n} and {} Whitney numbers", w.len())));
    }
    if !whitney_recursion_range(i, n, m, j) {
        return Err(Error::BadParams(format!(
            "the recursion is not claimed at j = {j} for (i,n,m) = ({i},{n},{m})"
        )));
    }
    let qm = qm_u64(q, m);
    let rhs: BigInt = (0..j)
        .map(|s| &w[s] * gaussian_binom((n - s) as i64, (j - s) as i64, qm))
        .sum();
    Ok(w[j] == -rhs || (j == 0 && w[0].is_zero()))
}
