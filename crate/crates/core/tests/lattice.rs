use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use rank_lattice::field::FieldTower;
use rank_lattice::lattice::{
    alpha_vector, alpha_via_whitney, forced_roots, is_modular_element, modular_flags, whitney_via_alpha, BuildMethod,
    WeightedLattice,
};
use rank_lattice::poly::ExactPolynomial;
use rank_lattice::subspace::{Limits, Metric};

fn build(kind: Metric, i: usize, n: usize, m: u32, q: u64) -> (FieldTower, WeightedLattice) {
    let f = FieldTower::from_q(q, m).unwrap();
    let l = WeightedLattice::build(kind, i, n, &f, &Limits::default()).unwrap();
    (f, l)
}

fn geometric(f: &FieldTower, l: &WeightedLattice) {
    let top = l.top();
    assert_eq!(l.dim_of(top), l.n());
    assert_eq!(l.dim_of(l.bottom()), 0);
    let atoms: Vec<usize> = l.atom_range().collect();
    for x in 0..l.len() {
        let hull = atoms
            .iter()
            .filter(|&&a| l.leq(a, x))
            .fold(rank_lattice::subspace::Subspace::zero(l.n()), |acc, &a| acc.sum(f, l.element(a)));
        assert_eq!(&hull, l.element(x), "not atomistic at {x}");
        for y in 0..l.len() {
            let (meet, join) = (l.meet_ix(x, y), l.join_ix(x, y));
            assert!(l.dim_of(meet) + l.dim_of(join) <= l.dim_of(x) + l.dim_of(y), "semimodularity");
            assert!(l.leq(meet, x) && l.leq(meet, y) && l.leq(x, join) && l.leq(y, join));
        }
    }
    for x in 0..l.len() {
        for &y in l.below(x) {
            let y = y as usize;
            let chain_ok = l.dim_of(y) < l.dim_of(x);
            assert!(chain_ok);
        }
    }
}

#[test]
fn built_lattices_are_geometric() {
    for (i, n, m, q) in [(1, 3, 2, 2), (2, 3, 2, 2), (2, 3, 3, 2), (1, 2, 2, 3), (2, 3, 1, 3)] {
        let kind = if m == 1 { Metric::Hamming } else { Metric::Rank };
        let (f, l) = build(kind, i, n, m, q);
        geometric(&f, &l);
    }
}

#[test]
fn hamming_full_lattice_is_the_subspace_lattice() {
    for (n, q) in [(2, 2), (3, 2), (3, 3), (2, 4), (4, 2)] {
        let (_, l) = build(Metric::Hamming, n, n, 1, q);
        let want = (0..n).fold(ExactPolynomial::one(), |acc, j| acc.mul(&ExactPolynomial::linear((q as i64).pow(j as u32))));
        assert_eq!(l.char_poly(), want);
    }
}

#[test]
fn higher_weight_dowling_lattices_are_smaller() {
    let (_, h1) = build(Metric::Hamming, 1, 3, 1, 3);
    let (_, h3) = build(Metric::Hamming, 3, 3, 1, 3);
    assert_eq!(h1.whitney_second()[1], BigInt::from(3));
    assert!(h1.len() < h3.len());
}

#[test]
fn rank_one_lattice_is_modular() {
    for (n, m, q) in [(2, 2, 2), (3, 2, 2), (3, 3, 2), (2, 2, 3)] {
        let (_, l) = build(Metric::Rank, 1, n, m, q);
        assert!(modular_flags(&l).iter().all(|&b| b));
        let want = (0..n).fold(ExactPolynomial::one(), |acc, j| acc.mul(&ExactPolynomial::linear((q as i64).pow(j as u32))));
        assert_eq!(l.char_poly(), want);
    }
}

#[test]
fn both_builders_agree() {
    for (i, n, m, q) in [(2, 3, 2, 2), (2, 3, 3, 2), (2, 4, 2, 2)] {
        let f = FieldTower::from_q(q, m).unwrap();
        let a = WeightedLattice::build_with(Metric::Rank, i, n, &f, &Limits::default(), BuildMethod::Filter).unwrap();
        let b = WeightedLattice::build_with(Metric::Rank, i, n, &f, &Limits::default(), BuildMethod::JoinClosure).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.whitney_first(), b.whitney_first());
    }
}

#[test]
fn forced_roots_and_code_counts() {
    for (i, n, m, q) in [(2, 3, 3, 2), (2, 4, 2, 2), (2, 3, 2, 3), (3, 4, 2, 2)] {
        let (f, l) = build(Metric::Rank, i, n, m, q);
        assert!(forced_roots(i, m, q).divides(&l.char_poly()));
        let a = alpha_vector(&f, i, n, &Limits::default()).unwrap();
        assert_eq!(whitney_via_alpha(n, m as usize, q, &a), l.whitney_first());
    }
}

#[test]
fn a_non_modular_coordinate_space() {
    let (_, l) = build(Metric::Rank, 2, 4, 3, 2);
    let e123 = l.index_of(&rank_lattice::subspace::Subspace::coordinate(4, &[0, 1, 2])).unwrap();
    assert!(!is_modular_element(&l, e123));
    let e12 = l.index_of(&rank_lattice::subspace::Subspace::coordinate(4, &[0, 1])).unwrap();
    assert!(is_modular_element(&l, e12));
}

#[test]
fn mobius_bottom_to_top_matches_the_constant_term() {
    let (_, l) = build(Metric::Rank, 2, 3, 3, 2);
    let w = l.whitney_first();
    assert_eq!(BigInt::from(l.mu0(l.top())), w[3]);
    assert_eq!(BigInt::from(l.mu0(l.bottom())), BigInt::one());
}

proptest! {
    #[test]
    fn whitney_and_code_counts_round_trip(
        n in 1usize..6,
        m in 1usize..6,
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7]),
        tail in prop::collection::vec(-1_000_000_000i64..1_000_000_000, 5),
    ) {
        let w: Vec<BigInt> = std::iter::once(BigInt::one()).chain(tail[..n].iter().map(|&x| BigInt::from(x))).collect();
        let a = alpha_via_whitney(n, m, q, &w);
        prop_assert_eq!(whitney_via_alpha(n, m, q, &a), w);
        let back = alpha_via_whitney(n, m, q, &whitney_via_alpha(n, m, q, &a));
        prop_assert_eq!(back, a);
    }
}
