use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn qpow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// Gaussian binomial `[a, b]_Q`; zero when `b < 0` or `0 <= a < b`.
pub fn gaussian_binom(a: i64, b: i64, q: u64) -> BigInt {
    if b < 0 || a < b {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= qpow(q, (a - i) as u64) - 1;
        acc /= qpow(q, (i + 1) as u64) - 1;
    }
    acc
}

/// Number of vectors of `F_{q^m}^n` of rank exactly `r`.
pub fn count_rank_vectors(n: usize, m: usize, q: u64, r: usize) -> Result<BigInt> {
    let max = n.min(m);
    if r > max {
        return Err(Error::BadRank { r, max });
    }
    let qm = qpow(q, m as u64);
    let mut acc = gaussian_binom(n as i64, r as i64, q);
    for s in 0..r {
        acc *= &qm - qpow(q, s as u64);
    }
    Ok(acc)
}

/// Number of projective points of `F_{q^m}^n` of rank exactly `r >= 1`.
pub fn projective_rank_count(n: usize, m: usize, q: u64, r: usize) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::BadRank { r, max: n.min(m) });
    }
    Ok(count_rank_vectors(n, m, q, r)? / (qpow(q, m as u64) - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(gaussian_binom(4, 2, 2), BigInt::from(35));
        assert_eq!(gaussian_binom(4, 2, 16), BigInt::from(70161));
        assert_eq!(gaussian_binom(3, 5, 7), BigInt::zero());
        assert_eq!(gaussian_binom(5, 0, 3), BigInt::one());
        assert_eq!(gaussian_binom(-1, 0, 3), BigInt::zero());
        assert_eq!(gaussian_binom(2, -1, 3), BigInt::zero());
    }

    #[test]
    fn rank_counts() {
        assert_eq!(count_rank_vectors(3, 3, 2, 0).unwrap(), BigInt::one());
        assert_eq!(projective_rank_count(3, 3, 2, 3).unwrap(), BigInt::from(24));
        assert_eq!(projective_rank_count(4, 3, 2, 3).unwrap(), BigInt::from(360));
        assert!(matches!(count_rank_vectors(2, 3, 2, 3), Err(Error::BadRank { .. })));
        for (n, m, q) in [(3, 2, 3), (4, 4, 2), (2, 5, 4)] {
            let total: BigInt = (0..=n.min(m))
                .map(|r| count_rank_vectors(n, m, q, r).unwrap())
                .sum();
            assert_eq!(total, qpow(q, (m * n) as u64));
        }
    }
}
