use num_bigint::BigInt;
use rayon::prelude::*;

use super::WeightedLattice;
use crate::error::{Error, Result};
use crate::poly::ExactPolynomial;
use crate::subspace::Metric;

/// Whether `dim(X ∧ Y) + dim(X ∨ Y) = dim X + dim Y` for every element `Y`.
pub fn is_modular_element(l: &WeightedLattice, x: usize) -> bool {
    let f = l.tower();
    let ex = l.element(x);
    let dx = ex.dim();
    (0..l.len()).into_par_iter().all(|y| {
        let ey = l.element(y);
        let meet = l.dim_of(l.meet_ix(x, y));
        let join = ex.sum_dim(f, ey);
        meet + join == dx + ey.dim()
    })
}

/// Brute-force modularity of every element.
pub fn modular_flags(l: &WeightedLattice) -> Vec<bool> {
    (0..l.len()).map(|x| is_modular_element(l, x)).collect()
}

/// Modularity as characterized for rank-metric lattices: everything when
/// `i = 1`, otherwise the full space and the subspaces all of whose vectors
/// have rank at most `i`. Hamming lattices only get the trivial answers.
pub fn modular_predicted(l: &WeightedLattice, x: usize) -> Option<bool> {
    if x == l.bottom() || x == l.top() {
        return Some(true);
    }
    match l.kind() {
        Metric::Rank => Some(l.i() == 1 || l.is_light(x)),
        Metric::Hamming => None,
    }
}

/// Searches for a maximal chain of modular elements, given the modularity
/// flags of every element.
pub fn is_supersolvable_bruteforce(l: &WeightedLattice, modular: &[bool]) -> bool {
    let mut reach = vec![false; l.len()];
    reach[0] = modular[0];
    for d in 1..=l.n() {
        for x in l.level(d) {
            if !modular[x] {
                continue;
            }
            reach[x] = l
                .below(x)
                .iter()
                .rev()
                .map(|&y| y as usize)
                .take_while(|&y| l.dim_of(y) + 1 >= d)
                .any(|y| l.dim_of(y) + 1 == d && reach[y]);
        }
    }
    reach[l.top()]
}

/// Supersolvability as classified: rank-metric lattices for
/// `i ∈ {1, n-1, n}` or `2 <= m <= i`; Hamming lattices for
/// `i ∈ {1, 2, n-1, n}`.
pub fn supersolvable_predicted(kind: Metric, i: usize, n: usize, m: usize) -> bool {
    match kind {
        Metric::Rank => i == 1 || i + 1 == n || i == n || (2..=i).contains(&m),
        Metric::Hamming => i <= 2 || i + 1 == n || i == n,
    }
}

/// The two factors of the modular factorization at `t`: the characteristic
/// polynomial of `[0, t]` and `Σ_{x ∧ t = 0} μ(0,x) λ^{n - ρ(x) - ρ(t)}`.
pub fn stanley_factors(l: &WeightedLattice, t: usize) -> Result<(ExactPolynomial, ExactPolynomial)> {
    if !is_modular_element(l, t) {
        return Err(Error::NotModular);
    }
    let n = l.n();
    let rt = l.dim_of(t);
    let tb = l.atom_bits(t);
    let mut coeffs = vec![BigInt::from(0); n - rt + 1];
    for x in 0..l.len() {
        let disjoint = l.atom_bits(x).iter().zip(tb).all(|(a, b)| a & b == 0);
        if !disjoint {
            continue;
        }
        let rx = l.dim_of(x);
        if rx + rt > n {
            return Ok((ExactPolynomial::zero(), ExactPolynomial::zero()));
        }
        coeffs[n - rx - rt] += l.mu0(x);
    }
    Ok((l.interval_char_poly(t), ExactPolynomial::from_int_coeffs(&coeffs)))
}

/// Whether `χ(L) = χ([0,t]) · Σ_{x ∧ t = 0} μ(0,x) λ^{n-ρ(x)-ρ(t)}`.
pub fn stanley_check(l: &WeightedLattice, t: usize) -> Result<bool> {
    let (a, b) = stanley_factors(l, t)?;
    Ok(a.mul(&b) == l.char_poly())
}
