//! Dense polynomials over a [`BaseField`], coefficients stored low to high.

use super::arith::prime_factors;
use super::base::BaseField;

pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn mul(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem(f: &BaseField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("nonzero modulus");
    let lead_inv = f.inv(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (j, &mj) in m.iter().enumerate().take(dm + 1) {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, mj));
        }
        r = trim(r);
    }
    r
}

pub fn mul_mod(f: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod(f: &BaseField, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(f, &base, &base, m);
        }
    }
    acc
}

pub fn sub(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn gcd(f: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = f.inv(a[d]);
        a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
    }
    a
}

fn eval(f: &BaseField, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Irreducibility over `f`: root search up to degree 3, Rabin's test above.
pub fn is_irreducible(f: &BaseField, m: &[u32]) -> bool {
    let d = match degree(m) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    if d <= 3 {
        return (0..f.q()).all(|x| eval(f, m, x) != 0);
    }
    let q = f.q() as u64;
    let x = vec![0u32, 1];
    let mut frob = vec![x.clone()];
    for _ in 0..d {
        let next = pow_mod(f, frob.last().unwrap(), q, m);
        frob.push(next);
    }
    if sub(f, &frob[d], &x).iter().any(|&c| c != 0) {
        return false;
    }
    prime_factors(d as u64).into_iter().all(|r| {
        let g = gcd(f, m, &sub(f, &frob[d / r as usize], &x));
        degree(&g) == Some(0)
    })
}

/// Whether `x` generates the multiplicative group modulo the irreducible `m`.
pub fn x_is_primitive(f: &BaseField, m: &[u32]) -> bool {
    let d = degree(m).unwrap_or(0) as u32;
    let order = (f.q() as u64).pow(d) - 1;
    let x = vec![0u32, 1];
    if order == 1 {
        return rem(f, &x, m) == vec![1];
    }
    let one = vec![1u32];
    pow_mod(f, &x, order, m) == one
        && prime_factors(order)
            .into_iter()
            .all(|r| pow_mod(f, &x, order / r, m) != one)
}

/// The monic degree-`d` polynomial with smallest packed lower coefficients
/// (`c_0 + c_1 q + ...`) that is irreducible and has `x` as a primitive root.
pub fn smallest_primitive(f: &BaseField, d: u32) -> Vec<u32> {
    let q = f.q() as u64;
    let total = q.pow(d);
    for c in 1..total {
        if c % q == 0 {
            continue;
        }
        let mut m = Vec::with_capacity(d as usize + 1);
        let mut x = c;
        for _ in 0..d {
            m.push((x % q) as u32);
            x /= q;
        }
        m.push(1);
        if is_irreducible(f, &m) && x_is_primitive(f, &m) {
            return m;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_over_f2() {
        let f = BaseField::prime(2).unwrap();
        assert_eq!(smallest_primitive(&f, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(smallest_primitive(&f, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_primitive(&f, 2), vec![1, 1, 1]);
    }

    #[test]
    fn rabin_agrees_with_brute_force_over_f2() {
        let f = BaseField::prime(2).unwrap();
        for d in 4..=6u32 {
            for c in 0..(1u32 << d) {
                let m: Vec<u32> = (0..d).map(|j| (c >> j) & 1).chain([1]).collect();
                let brute = (1u32..(1 << d)).filter(|&g| g > 1).all(|g| {
                    let gp: Vec<u32> = (0..d).map(|j| (g >> j) & 1).collect();
                    let gp = trim(gp);
                    degree(&gp).is_none_or(|dg| dg == 0 || dg as u32 == d || !rem(&f, &m, &gp).is_empty())
                });
                assert_eq!(is_irreducible(&f, &m), brute, "d={d} c={c}");
            }
        }
    }

    #[test]
    fn x4_plus_1_over_f3_is_reducible() {
        let f = BaseField::prime(3).unwrap();
        assert!(!is_irreducible(&f, &[1, 0, 0, 0, 1]));
        assert!(is_irreducible(&f, &[2, 1, 0, 0, 1]));
    }
}
