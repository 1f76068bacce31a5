//! Closed formulas around the count of two-dimensional MRD codes in
//! F_{q^4}^4 and the conditional invariants of the rank-2 lattice there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gaussian_binom, qpow};
use crate::poly::{factor_with_candidates, ExactPolynomial};

/// Marker attached to every result that rests on polynomiality in `q`.
pub const ASSUMPTION: &str = "w2-polynomiality";

/// Published values of the number of two-dimensional MRD codes in F_{q^4}^4.
pub const PUBLISHED_M: [(u64, &str); 6] = [
    (2, "1344"),
    (3, "6368544"),
    (4, "998645760"),
    (5, "43710000000"),
    (7, "11599543859904"),
    (8, "103734668427264"),
];

/// Published quadratic factors `λ^2 - bλ + c` of the conditional
/// characteristic polynomial of the rank-2 lattice of F_{q^4}^4.
pub const PUBLISHED_TABLE: [(u64, &str, &str); 7] = [
    (2, "488", "60736"),
    (3, "10098", "29574801"),
    (4, "89792", "2588286976"),
    (5, "499250", "86141640625"),
    (7, "6820898", "17687732901601"),
    (8, "19394048", "147637824126976"),
    (9, "48885282", "962216318765601"),
];

pub fn published_samples() -> Vec<(u64, BigInt)> {
    PUBLISHED_M
        .iter()
        .map(|&(q, m)| (q, m.parse().unwrap()))
        .collect()
}

fn b(q: u64) -> BigInt {
    BigInt::from(q)
}

/// `q^3 - q^2 - q - 1`.
pub fn cubic_factor(q: u64) -> BigInt {
    let q = b(q);
    &q * &q * &q - &q * &q - &q - 1
}

/// All codes from the count of codes through one fixed rank-4 vector.
pub fn m_from_mhat(q: u64, mhat: &BigInt) -> Result<BigInt> {
    let qq = b(q);
    let num: BigInt = mhat * qpow(q, 5) * num_traits::pow(&qq - 1u32, 3) * (&qq + 1) * (&qq * &qq + &qq + 1);
    let den = cubic_factor(q);
    let (quo, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!("q={q}, mhat={mhat}")));
    }
    Ok(quo)
}

/// Inverse of [`m_from_mhat`].
pub fn mhat_from_m(q: u64, m: &BigInt) -> Result<BigInt> {
    let qq = b(q);
    let den = qpow(q, 5) * num_traits::pow(&qq - 1u32, 3) * (&qq + 1) * (&qq * &qq + &qq + 1);
    let (quo, rem) = (m * cubic_factor(q)).div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!("q={q}, M={m}")));
    }
    Ok(quo)
}

/// Number of rank-4 vectors in a two-dimensional MRD code of F_{q^4}^4.
pub fn rank4_count_in_mrd(q: u64) -> BigInt {
    let qq = b(q);
    let factored = &qq * (&qq - 1) * (&qq + 1) * (&qq * &qq + 1) * cubic_factor(q);
    let unfactored = qpow(q, 8) - 1 - gaussian_binom(4, 1, q) * (qpow(q, 4) - 1);
    assert_eq!(factored, unfactored, "rank-4 count forms disagree at q={q}");
    factored
}

/// `(q^4-1)(q^4-q)(q^4-q^2)(q^4-q^3)`, the number of rank-4 vectors of
/// F_{q^4}^4.
pub fn rank4_vectors(q: u64) -> BigInt {
    (0..4).map(|s| qpow(q, 4) - qpow(q, s)).product()
}

/// The double count `M̂ · #rank-4 vectors = M · rank-4 vectors per code`.
pub fn double_count_holds(q: u64, mhat: &BigInt, m: &BigInt) -> bool {
    mhat * rank4_vectors(q) == m * rank4_count_in_mrd(q)
}

/// `q^5 (q^3-1)(q^2-1)(q-1)`.
pub fn interpolation_denominator(q: u64) -> BigInt {
    qpow(q, 5) * (qpow(q, 3) - 1) * (qpow(q, 2) - 1) * (b(q) - 1)
}

fn denominator_poly() -> ExactPolynomial {
    let x = |d: usize| {
        let mut c = vec![0i64; d + 1];
        c[d] = 1;
        c
    };
    let minus_one = |d: usize| {
        let mut c = x(d);
        c[0] -= 1;
        ExactPolynomial::from_int_coeffs(&c)
    };
    ExactPolynomial::product(&[
        ExactPolynomial::from_int_coeffs(&x(5)),
        minus_one(3),
        minus_one(2),
        minus_one(1),
    ])
}

/// The interpolated quotient and the resulting count polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct Interpolation {
    pub z: ExactPolynomial,
    pub m: ExactPolynomial,
    pub assumption: &'static str,
}

/// Interpolates `Z(q) = M(q) / (q^5 (q^3-1)(q^2-1)(q-1))` through the first
/// six samples and checks any further samples against it.
pub fn interpolate_m(samples: &[(u64, BigInt)]) -> Result<Interpolation> {
    if samples.len() < 6 {
        return Err(Error::BadParams(format!(
            "interpolation needs at least 6 samples, got {}",
            samples.len()
        )));
    }
    let mut seen = std::collections::HashSet::new();
    let mut pts = Vec::new();
    for (q, m) in samples {
        if !seen.insert(*q) {
            return Err(Error::DuplicateQ(*q));
        }
        if *q < 2 {
            return Err(Error::BadParams(format!("sample at q = {q}")));
        }
        let (z, r) = m.div_rem(&interpolation_denominator(*q));
        if !r.is_zero() {
            return Err(Error::NonIntegralZPoint(*q));
        }
        pts.push((BigRational::from_integer(b(*q)), BigRational::from_integer(z)));
    }
    let z = ExactPolynomial::lagrange(&pts[..6]);
    for (x, y) in &pts[6..] {
        if z.eval(x) != *y {
            return Err(Error::BadParams(format!(
                "sample at q = {x} disagrees with the interpolated polynomial"
            )));
        }
    }
    let m = z.mul(&denominator_poly());
    Ok(Interpolation {
        z,
        m,
        assumption: ASSUMPTION,
    })
}

fn half_poly(c: &[(usize, i64)]) -> ExactPolynomial {
    let deg = c.iter().map(|&(d, _)| d).max().unwrap_or(0);
    let mut v = vec![BigRational::zero(); deg + 1];
    for &(d, k) in c {
        v[d] += BigRational::new(k.into(), 2.into());
    }
    ExactPolynomial::from_coeffs(v)
}

/// `½(q^5 - q^4 - q^3 - q^2)`.
pub fn z_formula() -> ExactPolynomial {
    half_poly(&[(5, 1), (4, -1), (3, -1), (2, -1)])
}

/// `½ q^7 (q^3-1)(q^2-1)(q-1)(q^3-q^2-q-1)` at `q`.
pub fn m_formula(q: u64) -> BigInt {
    let v = z_formula().eval_int(q) * BigRational::from_integer(interpolation_denominator(q));
    assert!(v.is_integer());
    v.to_integer()
}

/// The five Whitney polynomials of the rank-2 lattice of F_{q^4}^4, as
/// polynomials in `q`.
pub fn whitney_l2_4_4_polys() -> [ExactPolynomial; 5] {
    [
        ExactPolynomial::one(),
        half_poly(&[(8, -2), (7, -2), (6, -4), (3, 2), (0, -2)]),
        half_poly(&[
            (16, 1),
            (14, 3),
            (13, 1),
            (12, 3),
            (11, 1),
            (10, 1),
            (9, -1),
            (7, 1),
            (6, 4),
            (3, -2),
        ]),
        half_poly(&[
            (20, -1),
            (18, -3),
            (17, -1),
            (16, -2),
            (15, 1),
            (12, -3),
            (11, -2),
            (10, -1),
            (9, 1),
            (8, 2),
            (7, 1),
        ]),
        half_poly(&[
            (20, 1),
            (18, 3),
            (17, 1),
            (16, 1),
            (15, -1),
            (14, -3),
            (13, -1),
            (11, 1),
        ]),
    ]
}

/// Coefficients `(b, c)` of the quadratic factor `λ^2 - bλ + c`, as
/// polynomials in `q`.
pub fn quadratic_l2_4_4_polys() -> (ExactPolynomial, ExactPolynomial) {
    (
        half_poly(&[(8, 2), (7, 2), (6, 4), (4, -2), (3, -2)]),
        half_poly(&[
            (16, 1),
            (14, 3),
            (13, 1),
            (12, 1),
            (11, -1),
            (10, -3),
            (9, -1),
            (7, 1),
        ]),
    )
}

/// Conditional invariants of the rank-2 lattice of F_{q^4}^4.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionalL244 {
    pub q: u64,
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub w: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::big")]
    pub big_w2: BigInt,
    pub charpoly: ExactPolynomial,
    #[serde(serialize_with = "crate::ser::big_pair")]
    pub quadratic: (BigInt, BigInt),
    pub factors: Vec<String>,
    pub assumption: &'static str,
}

fn int_at(p: &ExactPolynomial, q: u64) -> BigInt {
    let v = p.eval_int(q);
    assert!(v.is_integer(), "non-integral value at q={q}");
    v.to_integer()
}

/// `α_1` of the rank-2 lattice of F_{q^4}^4: one-dimensional codes spanned
/// by vectors of rank 3 or 4.
pub fn alpha1_l2_4_4(q: u64) -> BigInt {
    (3..=4)
        .map(|j| gaussian_binom(4, j, q) * (1..j).map(|s| qpow(q, 4) - qpow(q, s as u64)).product::<BigInt>())
        .sum()
}

/// `w_2` from the count `M` of two-dimensional MRD codes.
pub fn w2_from_m(q: u64, m: &BigInt) -> BigInt {
    let qm = qpow(q, 4).to_string().parse::<u64>().expect("q^4 fits in u64");
    qpow(q, 4) * gaussian_binom(4, 2, qm) - gaussian_binom(3, 1, qm) * alpha1_l2_4_4(q) + m
}

/// Evaluates the conditional Whitney numbers and characteristic polynomial
/// of the rank-2 lattice of F_{q^4}^4 at `q`, checking them against the
/// `w_2` obtained from the count formula and the `(λ-1)(λ-q^4)` factor.
pub fn charpoly_l2_4_4(q: u64) -> Result<ConditionalL244> {
    if q < 2 {
        return Err(Error::UnsupportedQ(q));
    }
    let w: Vec<BigInt> = whitney_l2_4_4_polys().iter().map(|p| int_at(p, q)).collect();
    let m = m_formula(q);
    assert_eq!(w[2], w2_from_m(q, &m), "w_2 disagrees with the count formula at q={q}");
    let charpoly = ExactPolynomial::from_descending(&w);
    let q4 = qpow(q, 4);
    let lin = ExactPolynomial::linear(1).mul(&ExactPolynomial::linear(q4.clone()));
    let (quad, rem) = charpoly.div_rem(&lin);
    assert!(rem.is_zero(), "χ not divisible by (λ-1)(λ-q^4) at q={q}");
    let (bp, cp) = quadratic_l2_4_4_polys();
    let quadratic = (int_at(&bp, q), int_at(&cp, q));
    let expect = ExactPolynomial::from_descending(&[BigInt::one(), -quadratic.0.clone(), quadratic.1.clone()]);
    assert_eq!(quad, expect, "quadratic factor disagrees at q={q}");
    let fact = factor_with_candidates(&charpoly, &[BigInt::one(), q4]);
    let qm = q.pow(4);
    Ok(ConditionalL244 {
        q,
        big_w2: gaussian_binom(4, 2, qm) - m,
        w,
        charpoly,
        quadratic,
        factors: fact.factor_strings("λ"),
        assumption: ASSUMPTION,
    })
}
