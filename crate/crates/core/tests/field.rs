use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::collections::HashSet;

use rank_lattice::field::{
    count_rank_vectors, format_element, format_poly, gaussian_binom, make_field, parse_element, parse_field_spec,
    parse_poly, qpow, FieldTower,
};

fn towers() -> Vec<FieldTower> {
    vec![
        FieldTower::from_q(2, 3).unwrap(),
        FieldTower::from_q(2, 4).unwrap(),
        FieldTower::from_q(3, 2).unwrap(),
        FieldTower::from_q(4, 2).unwrap(),
        FieldTower::from_q(5, 2).unwrap(),
    ]
}

fn vectors(f: &FieldTower, n: usize) -> Vec<Vec<u32>> {
    let order = f.order() as u32;
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..order).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn add(f: &FieldTower, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

#[test]
fn rank_properties_exhaustive() {
    for (f, n) in [(FieldTower::from_q(2, 3).unwrap(), 2), (FieldTower::from_q(3, 2).unwrap(), 2)] {
        let all = vectors(&f, n);
        for v in &all {
            let rv = f.vec_rank(v);
            for lam in 1..f.order() as u32 {
                let scaled: Vec<u32> = v.iter().map(|&x| f.mul(lam, x)).collect();
                assert_eq!(f.vec_rank(&scaled), rv);
            }
            for w in &all {
                let rs = f.vec_rank(&add(&f, v, w));
                let rw = f.vec_rank(w);
                assert!(rs <= rv + rw);
                assert!(rs + rw >= rv);
            }
        }
    }
}

#[test]
fn rank_counts_sum_to_the_space() {
    for (n, m, q) in [(2, 2, 2), (3, 4, 2), (4, 4, 3), (5, 3, 4), (3, 6, 5)] {
        let total: BigInt = (0..=n.min(m)).map(|r| count_rank_vectors(n, m, q, r).unwrap()).sum();
        assert_eq!(total, qpow(q, (m * n) as u64));
    }
    let f = FieldTower::from_q(2, 3).unwrap();
    let mut hist = [0u64; 4];
    for v in vectors(&f, 3) {
        hist[f.vec_rank(&v)] += 1;
    }
    for (r, &h) in hist.iter().enumerate() {
        assert_eq!(BigInt::from(h), count_rank_vectors(3, 3, 2, r).unwrap());
    }
}

#[test]
fn gamma_expand_is_injective() {
    for f in [FieldTower::from_q(2, 3).unwrap(), FieldTower::from_q(3, 2).unwrap()] {
        let all = vectors(&f, 2);
        let images: HashSet<Vec<Vec<u32>>> = all.iter().map(|v| f.gamma_expand(v)).collect();
        assert_eq!(images.len(), all.len());
        let q = f.q() as u64;
        assert_eq!(all.len() as u64, q.pow(2 * f.m()));
        for g in &images {
            assert!(g.iter().flatten().all(|&x| (x as u64) < q));
        }
    }
}

fn part3_lhs(c: i64, big_q: u64, x: i64, y: i64) -> BigInt {
    (0..=c)
        .map(|j| {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            sign * gaussian_binom(c, j, big_q)
                * qpow(big_q, (j * (j - 1) / 2) as u64)
                * BigInt::from(x).pow((c - j) as u32)
                * BigInt::from(y).pow(j as u32)
        })
        .sum()
}

#[test]
fn gaussian_binomial_lemma() {
    for big_q in [2u64, 3, 4, 5] {
        for a in 0..=8i64 {
            for b in 0..=8i64 {
                for c in 0..=8i64 {
                    if c <= b && b <= a {
                        assert_eq!(
                            gaussian_binom(a, b, big_q) * gaussian_binom(b, c, big_q),
                            gaussian_binom(a, c, big_q) * gaussian_binom(a - c, a - b, big_q)
                        );
                    }
                    let lhs = gaussian_binom(a + b, c, big_q);
                    let first: BigInt = (0..=c)
                        .filter(|&j| j * (b - c + j) >= 0)
                        .map(|j| {
                            qpow(big_q, (j * (b - c + j)) as u64) * gaussian_binom(a, j, big_q) * gaussian_binom(b, c - j, big_q)
                        })
                        .sum();
                    let second: BigInt = (0..=c)
                        .filter(|&j| (c - j) * (a - j) >= 0)
                        .map(|j| {
                            qpow(big_q, ((c - j) * (a - j)) as u64) * gaussian_binom(a, j, big_q) * gaussian_binom(b, c - j, big_q)
                        })
                        .sum();
                    assert_eq!(lhs, first, "a={a} b={b} c={c} Q={big_q}");
                    assert_eq!(lhs, second, "a={a} b={b} c={c} Q={big_q}");
                }
            }
            let qq = big_q as i64;
            for (x, y) in [(1, 1), (qq, 1), (qq + 1, qq), (1, qq + 1), (qq, qq)] {
                for c in 1..=8i64 {
                    let rhs: BigInt = (0..c).map(|j| BigInt::from(x) - qpow(big_q, j as u64) * y).product();
                    assert_eq!(part3_lhs(c, big_q, x, y), rhs);
                }
            }
        }
    }
}

#[test]
fn gaussian_binomial_edges() {
    assert_eq!(gaussian_binom(4, 2, 16), BigInt::from(70161));
    assert_eq!(gaussian_binom(3, 5, 2), BigInt::zero());
    assert_eq!(gaussian_binom(-1, 0, 2), BigInt::zero());
    assert_eq!(gaussian_binom(0, 0, 7), BigInt::one());
}

#[test]
fn default_moduli_are_fixed() {
    let f = make_field(2, 1, 4, None).unwrap();
    assert_eq!(format_poly(f.modulus()), "x^4+x+1");
    let f = make_field(2, 1, 3, None).unwrap();
    assert_eq!(format_poly(f.modulus()), "x^3+x+1");
    for f in towers() {
        let order = f.order();
        assert_eq!(f.pow(f.primitive(), order - 1), 1);
        let mut seen = HashSet::new();
        let mut x = 1u32;
        for _ in 0..order - 1 {
            assert!(seen.insert(x));
            x = f.mul(x, f.primitive());
        }
    }
}

#[test]
fn spec_and_element_text_round_trip() {
    for f in towers() {
        let spec = parse_field_spec(&f.spec_string()).unwrap();
        let g = FieldTower::with_degree(spec.p, spec.h, spec.m, spec.modulus).unwrap();
        assert_eq!(g.modulus(), f.modulus());
        for x in 0..f.order() as u32 {
            assert_eq!(parse_element(&f, &format_element(&f, x)).unwrap(), x);
        }
    }
    assert_eq!(format_poly(&parse_poly("x^4+x+1").unwrap()), "x^4+x+1");
    assert!(parse_field_spec("q=6,m=2").is_err());
    assert!(make_field(2, 1, 4, Some(parse_poly("x^4+x^2+1").unwrap())).is_err());
}

proptest! {
    #[test]
    fn rank_is_scale_invariant_and_subadditive(
        which in 0usize..5,
        raw_v in prop::collection::vec(any::<u32>(), 4),
        raw_w in prop::collection::vec(any::<u32>(), 4),
        raw_l in any::<u32>(),
    ) {
        let f = &towers()[which];
        let order = f.order() as u32;
        let v: Vec<u32> = raw_v.iter().map(|x| x % order).collect();
        let w: Vec<u32> = raw_w.iter().map(|x| x % order).collect();
        let lam = 1 + raw_l % (order - 1);
        let rv = f.vec_rank(&v);
        let scaled: Vec<u32> = v.iter().map(|&x| f.mul(lam, x)).collect();
        prop_assert_eq!(f.vec_rank(&scaled), rv);
        let rs = f.vec_rank(&add(f, &v, &w));
        prop_assert!(rs <= rv + f.vec_rank(&w));
        prop_assert!(rs + f.vec_rank(&w) >= rv);
        prop_assert!(rv <= (f.m() as usize).min(4));
    }

    #[test]
    fn field_axioms(which in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &towers()[which];
        let order = f.order() as u32;
        let (a, b, c) = (a % order, b % order, c % order);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
