//! Polynomials in one variable with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A polynomial with rational coefficients, lowest degree first, without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    coeffs: Vec<BigRational>,
}

fn ri(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

impl ExactPolynomial {
    pub fn zero() -> Self {
        ExactPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ri(1))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::from_coeffs(vec![ri(0), ri(1)])
    }

    /// `x - r`.
    pub fn linear(r: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![-ri(r), ri(1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ExactPolynomial { coeffs }
    }

    pub fn from_int_coeffs<T: Into<BigInt> + Clone>(c: &[T]) -> Self {
        Self::from_coeffs(c.iter().cloned().map(ri).collect())
    }

    /// Polynomial `Σ w_j x^{n-j}` from a Whitney-style vector `w_0..w_n`.
    pub fn from_descending(w: &[BigInt]) -> Self {
        Self::from_coeffs(w.iter().rev().cloned().map(ri).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> BigRational {
        self.coeffs.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, lowest degree first; `None` if any is fractional.
    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a ExactPolynomial>>(it: I) -> Self {
        it.into_iter().fold(Self::one(), |acc, p| acc.mul(p))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: impl Into<BigInt>) -> BigRational {
        self.eval(&ri(x))
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for s in (0..q.len()).rev() {
            let c = &r[s + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[s + j] -= &c * dj;
                }
            }
            q[s] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn divides(&self, p: &Self) -> bool {
        p.div_rem(self).1.is_zero()
    }

    /// The unique polynomial of degree below `points.len()` through the given
    /// points, whose abscissae must be distinct.
    pub fn lagrange(points: &[(BigRational, BigRational)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::one();
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::from_coeffs(vec![-xj.clone(), BigRational::one()]));
                    denom *= xi - xj;
                }
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }

    /// Renders with variable name `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let body = match d {
                0 => a.to_string(),
                _ => {
                    let coef = if a.is_one() {
                        String::new()
                    } else if a.is_integer() {
                        a.to_string()
                    } else {
                        format!("({a})")
                    };
                    if d == 1 {
                        format!("{coef}{var}")
                    } else {
                        format!("{coef}{var}^{d}")
                    }
                }
            };
            s.push_str(&body);
        }
        s
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Serialize for ExactPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// A product of monic linear factors and a leftover polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub roots: Vec<BigInt>,
    pub rest: ExactPolynomial,
}

impl Factorization {
    pub fn factor_strings(&self, var: &str) -> Vec<String> {
        let mut out: Vec<String> = self
            .roots
            .iter()
            .map(|r| ExactPolynomial::linear(r.clone()).render(var))
            .collect();
        if self.rest.degree().unwrap_or(0) > 0 || !self.rest.leading().is_one() {
            out.push(self.rest.render(var));
        }
        out
    }

    pub fn render(&self, var: &str) -> String {
        self.factor_strings(var)
            .iter()
            .map(|s| format!("({s})"))
            .collect()
    }

    pub fn expand(&self) -> ExactPolynomial {
        let lin: Vec<ExactPolynomial> = self.roots.iter().map(|r| ExactPolynomial::linear(r.clone())).collect();
        ExactPolynomial::product(&lin).mul(&self.rest)
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Peels off the candidate roots (with multiplicity, in the given order),
/// then splits a remaining monic integer quadratic or linear factor when its
/// roots are integers.
pub fn factor_with_candidates(p: &ExactPolynomial, candidates: &[BigInt]) -> Factorization {
    let mut rest = p.clone();
    let mut roots = Vec::new();
    for c in candidates {
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let lin = ExactPolynomial::linear(c.clone());
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            roots.push(c.clone());
            rest = q;
        }
    }
    if rest.degree() == Some(1) && rest.is_monic() && rest.is_integral() {
        roots.push(-rest.coeff(0).to_integer());
        rest = ExactPolynomial::one();
    } else if rest.degree() == Some(2) && rest.is_monic() && rest.is_integral() {
        let b = rest.coeff(1).to_integer();
        let c = rest.coeff(0).to_integer();
        let disc = &b * &b - BigInt::from(4) * &c;
        if let Some(s) = isqrt_exact(&disc) {
            let two = BigInt::from(2);
            let (r1, m1) = (-&b + &s).div_rem(&two);
            let (r2, _) = (-&b - &s).div_rem(&two);
            if m1.is_zero() {
                roots.push(r2);
                roots.push(r1);
                rest = ExactPolynomial::one();
            }
        }
    }
    Factorization { roots, rest }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_division() {
        let p = ExactPolynomial::product(&[ExactPolynomial::linear(1), ExactPolynomial::linear(8)]);
        assert_eq!(p.int_coeffs().unwrap(), vec![BigInt::from(8), BigInt::from(-9), BigInt::from(1)]);
        let (q, r) = p.div_rem(&ExactPolynomial::linear(8));
        assert_eq!(q, ExactPolynomial::linear(1));
        assert!(r.is_zero());
        assert!(!ExactPolynomial::linear(2).divides(&p));
        assert_eq!(p.eval_int(8), ri(0));
        assert_eq!(p.render("λ"), "λ^2-9λ+8");
    }

    #[test]
    fn lagrange_recovers_half_integer_polynomial() {
        let z = ExactPolynomial::from_coeffs(vec![ri(0), ri(0), ri(-1), ri(-1), ri(-1), ri(1)])
            .scale(&BigRational::new(1.into(), 2.into()));
        let pts: Vec<_> = (2..8).map(|x| (ri(x), z.eval_int(x))).collect();
        assert_eq!(ExactPolynomial::lagrange(&pts), z);
    }

    #[test]
    fn factoring() {
        let w: Vec<BigInt> = [1, -225, 11680, -89280, 77824].iter().map(|&x| BigInt::from(x)).collect();
        let p = ExactPolynomial::from_descending(&w);
        let f = factor_with_candidates(&p, &[BigInt::from(1), BigInt::from(8)]);
        assert_eq!(f.roots, vec![BigInt::from(1), BigInt::from(8), BigInt::from(64), BigInt::from(152)]);
        assert_eq!(f.render("λ"), "(λ-1)(λ-8)(λ-64)(λ-152)");
        assert_eq!(f.expand(), p);
        let g = ExactPolynomial::from_int_coeffs(&[60736, -488, 1]).mul(&ExactPolynomial::linear(1));
        let fg = factor_with_candidates(&g, &[BigInt::from(1), BigInt::from(16)]);
        assert_eq!(fg.render("λ"), "(λ-1)(λ^2-488λ+60736)");
    }
}
