use super::arith::{is_prime, pow_mod, prime_factors};
use super::poly;
use crate::error::{Error, Result};

/// The field F_q with q = p^h, elements packed as base-p digits of their
/// coordinates in the power basis of `modulus`.
#[derive(Clone, Debug)]
pub struct BaseField {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl BaseField {
    /// The prime field F_p, with a smallest primitive root as generator.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        let n = (p - 1) as u64;
        let factors = prime_factors(n);
        let g = (1..p as u64)
            .find(|&g| p == 2 || factors.iter().all(|r| pow_mod(g, n / r, p as u64) != 1))
            .expect("prime field has a primitive root") as u32;
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; p as usize];
        let mut x = 1u32;
        for k in 0..n as u32 {
            exp.push(x);
            log[x as usize] = k;
            x = ((x as u64 * g as u64) % p as u64) as u32;
        }
        Ok(BaseField {
            p,
            h: 1,
            q: p,
            modulus: vec![(p - g) % p, 1],
            exp,
            log,
        })
    }

    /// F_{p^h} built on the smallest primitive polynomial of degree `h` over F_p.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        let fp = Self::prime(p)?;
        if h == 0 {
            return Err(Error::BadParams("h must be at least 1".into()));
        }
        if h == 1 {
            return Ok(fp);
        }
        let q = (p as u64).checked_pow(h).filter(|&q| q <= 1 << 16).ok_or_else(|| {
            Error::UnsupportedSize(format!("{p}^{h}"))
        })? as u32;
        let modulus = poly::smallest_primitive(&fp, h);
        let n = q - 1;
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u32];
        for k in 0..n {
            let packed = pack_digits(&cur, p);
            exp.push(packed);
            log[packed as usize] = k;
            cur = poly::mul_mod(&fp, &cur, &[0, 1], &modulus);
        }
        Ok(BaseField {
            p,
            h,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus over F_p, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.h == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut w) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.h == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let (mut out, mut w) = (0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        let l = self.log[a as usize];
        self.exp[((n - l) % n) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }
}

pub(crate) fn pack_digits(d: &[u32], base: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * base + x)
}
