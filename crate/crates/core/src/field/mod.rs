//! Arithmetic in F_q and F_{q^m}, vector rank, and Gaussian binomials.
//!
//! An element of F_{q^m} is packed as the integer whose base-q digits are its
//! coordinates in the power basis `1, x, ..., x^{m-1}` of the extension
//! modulus. Coordinates in F_q are themselves packed as base-p digits, so the
//! packed element is also the base-p reading of all `m*h` prime-field digits.
//!
//! When no modulus is supplied, the extension modulus is the monic degree-`m`
//! polynomial over F_q whose lower coefficients, read as a base-q number, are
//! smallest among those that are irreducible and have `x` as a primitive
//! root. The base field F_q uses the same rule over F_p. The primitive element
//! is then `x` itself; for instance F_16 uses `x^4+x+1` and F_81 over F_3 uses
//! `x^4+x+2`.

mod arith;
mod base;
mod count;
pub(crate) mod poly;
mod text;

pub use arith::{is_prime, prime_factors, prime_power};
pub use base::BaseField;
pub use count::{count_rank_vectors, gaussian_binom, projective_rank_count, qpow};
pub use text::{format_element, format_poly, parse_element, parse_field_spec, parse_poly, FieldSpec};

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The pair F_q ⊂ F_{q^m} together with a fixed primitive element.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    m: u32,
    order: u64,
    modulus: Vec<u32>,
    primitive: u32,
    qpow: Vec<u64>,
    tables: Option<LogTables>,
}

/// Builds the tower F_q ⊂ F_{q^m} with `q = p^h` and `m >= 2`.
pub fn make_field(p: u32, h: u32, m: u32, ext_modulus: Option<Vec<u32>>) -> Result<FieldTower> {
    if m < 2 {
        return Err(Error::BadParams("extension degree m must be at least 2".into()));
    }
    FieldTower::with_degree(p, h, m, ext_modulus)
}

impl FieldTower {
    /// Tower of any degree `m >= 1`; degree 1 gives F_q itself, which is
    /// what Hamming-metric lattices over F_Q use.
    pub fn with_degree(p: u32, h: u32, m: u32, ext_modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        if h == 0 || m == 0 {
            return Err(Error::BadParams("h and m must be positive".into()));
        }
        let order = (p as u64)
            .checked_pow(h * m)
            .filter(|&o| o <= 1 << 32)
            .ok_or_else(|| Error::UnsupportedSize(format!("({p}^{h})^{m}")))?;
        let base = BaseField::new(p, h)?;
        let q = base.q() as u64;
        let modulus = match ext_modulus {
            Some(mo) => {
                let mo = poly::trim(mo);
                if mo.iter().any(|&c| c as u64 >= q)
                    || poly::degree(&mo) != Some(m as usize)
                    || !poly::is_irreducible(&base, &mo)
                {
                    return Err(Error::ReducibleModulus(format_poly(&mo)));
                }
                let inv = base.inv(mo[m as usize]);
                mo.iter().map(|&c| base.mul(c, inv)).collect()
            }
            None => poly::smallest_primitive(&base, m),
        };
        let qpow = (0..=m).map(|j| q.pow(j)).collect();
        let mut tower = FieldTower {
            base,
            m,
            order,
            modulus,
            primitive: 0,
            qpow,
            tables: None,
        };
        tower.primitive = tower.find_primitive();
        if order <= TABLE_LIMIT {
            tower.tables = Some(tower.build_tables());
        }
        Ok(tower)
    }

    /// Convenience constructor from `q` given as a prime power.
    pub fn from_q(q: u64, m: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NonPrimeP(q))?;
        Self::with_degree(p, h, m, None)
    }

    fn find_primitive(&self) -> u32 {
        let n = self.order - 1;
        let factors = prime_factors(n);
        let is_prim = |g: u32| {
            self.pow_slow(g, n) == 1 && factors.iter().all(|&r| self.pow_slow(g, n / r) != 1)
        };
        let x = if self.m == 1 { 0 } else { self.base.q() };
        if self.m > 1 && is_prim(x) {
            return x;
        }
        (1..self.order as u32)
            .find(|&g| is_prim(g))
            .expect("finite field has a primitive element")
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.order as usize];
        let mut x = 1u32;
        for k in 0..n {
            exp.push(x);
            log[x as usize] = k as u32;
            x = self.mul_slow(x, self.primitive);
        }
        LogTables { exp, log }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn h(&self) -> u32 {
        self.base.h()
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q^m`, the number of elements of the extension field.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic extension modulus over F_q, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Canonical spec string of this tower.
    pub fn spec_string(&self) -> String {
        format!(
            "q={}^{},m={},mod={}",
            self.p(),
            self.h(),
            self.m,
            format_poly(&self.modulus)
        )
    }

    /// Coordinate `j` of `a` in the power basis.
    #[inline]
    pub fn digit(&self, a: u32, j: usize) -> u32 {
        ((a as u64 / self.qpow[j]) % self.qpow[1]) as u32
    }

    pub fn coords(&self, a: u32) -> Vec<u32> {
        (0..self.m as usize).map(|j| self.digit(a, j)).collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        c.iter()
            .enumerate()
            .map(|(j, &d)| d as u64 * self.qpow[j])
            .sum::<u64>() as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut w) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let s = a % p + b % p;
            out = out.wrapping_add((if s >= p { s - p } else { s }).wrapping_mul(w));
            a /= p;
            b /= p;
            w = w.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p();
        if p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut w) = (0u32, 1u32);
        while a > 0 {
            let d = a % p;
            out = out.wrapping_add((if d == 0 { 0 } else { p - d }).wrapping_mul(w));
            a /= p;
            w = w.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.p() == 2 {
            return a ^ b;
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u64;
                let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                t.exp[(if s >= n { s - n } else { s }) as usize]
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let r = poly::mul_mod(&self.base, &self.coords(a), &self.coords(b), &self.modulus);
        self.from_coords(&r)
    }

    fn pow_slow(&self, a: u32, e: u64) -> u32 {
        let r = poly::pow_mod(&self.base, &self.coords(a), e, &self.modulus);
        self.from_coords(&r)
    }

    /// Product of a base-field scalar `c` (packed, `c < q`) with `a`.
    #[inline]
    pub fn scale(&self, c: u32, a: u32) -> u32 {
        if c == 0 || a == 0 {
            return 0;
        }
        if c == 1 {
            return a;
        }
        if self.tables.is_some() {
            return self.mul(c, a);
        }
        let out: Vec<u32> = self.coords(a).into_iter().map(|d| self.base.mul(c, d)).collect();
        self.from_coords(&out)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u64;
                t.exp[((t.log[a as usize] as u64 * (e % n)) % n) as usize]
            }
            None => self.pow_slow(a, e),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.order - 2)
    }

    /// `α^k` for the primitive element `α`.
    pub fn alpha_pow(&self, k: u64) -> u32 {
        match &self.tables {
            Some(t) => t.exp[(k % t.exp.len() as u64) as usize],
            None => self.pow(self.primitive, k),
        }
    }

    /// Discrete logarithm to base `α`; needs log tables.
    pub fn log(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a as usize] as u64)
    }

    /// Row `i` holds the power-basis coordinates of `v[i]`.
    pub fn gamma_expand(&self, v: &[u32]) -> Vec<Vec<u32>> {
        v.iter().map(|&x| self.coords(x)).collect()
    }

    /// F_q-dimension of the span of the entries of `v`.
    pub fn vec_rank(&self, v: &[u32]) -> usize {
        let cap = self.m as usize;
        if self.q() == 2 {
            let mut basis = [0u32; 32];
            let mut r = 0;
            for &x in v {
                let mut x = x;
                while x != 0 {
                    let hb = 31 - x.leading_zeros() as usize;
                    if basis[hb] == 0 {
                        basis[hb] = x;
                        r += 1;
                        break;
                    }
                    x ^= basis[hb];
                }
                if r == cap {
                    break;
                }
            }
            return r;
        }
        let mut basis: Vec<(usize, u32)> = Vec::with_capacity(cap);
        for &x in v {
            let mut x = x;
            for &(pd, b) in &basis {
                let c = self.digit(x, pd);
                if c != 0 {
                    x = self.sub(x, self.scale(c, b));
                }
            }
            if x != 0 {
                let pd = (0..cap).find(|&j| self.digit(x, j) != 0).unwrap();
                let inv = self.base.inv(self.digit(x, pd));
                basis.push((pd, self.scale(inv, x)));
                if basis.len() == cap {
                    break;
                }
            }
        }
        basis.len()
    }

    /// Number of nonzero entries of `v`.
    pub fn hamming_weight(v: &[u32]) -> usize {
        v.iter().filter(|&&x| x != 0).count()
    }

    /// Standard dot product over F_{q^m}.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> FieldTower {
        make_field(2, 1, 4, Some(vec![1, 1, 0, 0, 1])).unwrap()
    }

    #[test]
    fn alpha_satisfies_modulus() {
        let f = f16();
        let a = f.primitive();
        assert_eq!(a, 2);
        let a4 = f.pow(a, 4);
        assert_eq!(f.add(f.add(a4, a), 1), 0);
    }

    #[test]
    fn f4_default() {
        let f = make_field(2, 1, 2, None).unwrap();
        assert_eq!(f.order(), 4);
        let g = f.primitive();
        assert_eq!(f.pow(g, 3), 1);
        assert_ne!(f.pow(g, 1), 1);
    }

    #[test]
    fn f81_primitive_order() {
        let f = make_field(3, 1, 4, None).unwrap();
        let g = f.primitive();
        assert_eq!(f.pow(g, 80), 1);
        assert_ne!(f.pow(g, 16), 1);
        assert_ne!(f.pow(g, 40), 1);
        assert_eq!(f.modulus(), &[2, 1, 0, 0, 1]);
    }

    #[test]
    fn m_below_two_rejected() {
        assert!(matches!(make_field(2, 1, 1, None), Err(Error::BadParams(_))));
        assert!(matches!(make_field(4, 1, 2, None), Err(Error::NonPrimeP(4))));
        assert!(matches!(
            make_field(2, 1, 4, Some(vec![1, 0, 0, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(make_field(2, 1, 33, None), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn gamma_expand_examples() {
        let f = f16();
        let a = |k| f.alpha_pow(k);
        assert_eq!(f.gamma_expand(&[0, 0]), vec![vec![0; 4]; 2]);
        let id = f.gamma_expand(&[1, a(1), a(2), a(3)]);
        for (i, row) in id.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, (i == j) as u32);
            }
        }
        let g = f.gamma_expand(&[a(5), a(5)]);
        assert_eq!(g[0], vec![0, 1, 1, 0]);
        assert_eq!(g[0], g[1]);
        assert_eq!(f.vec_rank(&[a(5), a(5)]), 1);
    }

    #[test]
    fn rank_examples() {
        let f = f16();
        let a = |k| f.alpha_pow(k);
        assert_eq!(f.vec_rank(&[0, 0, 0, 0]), 0);
        assert_eq!(f.vec_rank(&[1, a(1), a(2), a(3)]), 4);
        assert_eq!(f.vec_rank(&[1, 0, a(2), a(7)]), 3);
    }

    #[test]
    fn schoolbook_matches_tables() {
        let t = make_field(3, 1, 3, None).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(t.mul(a, b), t.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_field(2, 1, 24, None).unwrap();
        assert!(!f.has_tables());
        let g = f.primitive();
        let x = f.pow(g, 12345);
        assert_eq!(f.mul(x, f.inv(x)), 1);
        assert_eq!(f.pow(g, f.order() - 1), 1);
        assert_eq!(f.vec_rank(&[1, g, f.mul(g, g), f.add(1, g)]), 3);
    }

    #[test]
    fn general_q_rank_matches_matrix_rank() {
        let f = make_field(3, 1, 2, None).unwrap();
        for a in 0..9u32 {
            for b in 0..9u32 {
                let m = f.gamma_expand(&[a, b]);
                let det = (m[0][0] * m[1][1] + 3 * 3 - m[0][1] * m[1][0] % 3) % 3;
                let expect = if a == 0 && b == 0 {
                    0
                } else if det == 0 {
                    1
                } else {
                    2
                };
                assert_eq!(f.vec_rank(&[a, b]), expect);
            }
        }
    }
}
