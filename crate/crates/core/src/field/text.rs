//! Text forms: field specs, polynomials and elements.

use super::FieldTower;
use crate::error::{Error, Result};

/// Parsed form of `q=<p>^<h>,m=<m>[,mod=<poly>]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    pub m: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldTower> {
        super::make_field(self.p, self.h, self.m, self.modulus.clone())
    }
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

pub fn parse_field_spec(s: &str) -> Result<FieldSpec> {
    let (mut q, mut m, mut modulus) = (None, None, None);
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
        match k.trim() {
            "q" => {
                q = Some(match v.split_once('^') {
                    Some((p, h)) => (num::<u32>(p, "p")?, num::<u32>(h, "h")?),
                    None => {
                        let qv: u64 = num(v, "q")?;
                        let (p, h) = super::prime_power(qv).ok_or(Error::NonPrimeP(qv))?;
                        (p, h)
                    }
                })
            }
            "m" => m = Some(num::<u32>(v, "m")?),
            "mod" => modulus = Some(parse_poly(v)?),
            other => return Err(Error::Parse(format!("unknown field spec key {other:?}"))),
        }
    }
    let (p, h) = q.ok_or_else(|| Error::Parse("field spec lacks q".into()))?;
    let m = m.ok_or_else(|| Error::Parse("field spec lacks m".into()))?;
    Ok(FieldSpec { p, h, m, modulus })
}

/// Parses `x^4+x+1`, `x^2+2x+3`, `2*x^3+1`; coefficients are packed base-field
/// integers. Returns coefficients low to high.
pub fn parse_poly(s: &str) -> Result<Vec<u32>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<u32> = Vec::new();
    for term in s.split('+') {
        let (c, e) = match term.find('x') {
            None => (num::<u32>(term, "coefficient")?, 0usize),
            Some(ix) => {
                let head = term[..ix].trim_end_matches('*');
                let c = if head.is_empty() { 1 } else { num::<u32>(head, "coefficient")? };
                let tail = &term[ix + 1..];
                let e = if tail.is_empty() {
                    1
                } else {
                    num::<usize>(tail.strip_prefix('^').unwrap_or("?"), "exponent")?
                };
                (c, e)
            }
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += c;
    }
    Ok(coeffs)
}

pub fn format_poly(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (e, &k) in c.iter().enumerate().rev() {
        if k == 0 {
            continue;
        }
        let coef = if k == 1 && e > 0 { String::new() } else { k.to_string() };
        terms.push(match e {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{e}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// `0`, `a^k`, `a`, or an integer packing.
pub fn parse_element(f: &FieldTower, s: &str) -> Result<u32> {
    let s = s.trim();
    let v = if let Some(rest) = s.strip_prefix("a") {
        let k: u64 = if rest.is_empty() {
            1
        } else {
            num(rest.strip_prefix('^').unwrap_or("?"), "exponent")?
        };
        f.alpha_pow(k)
    } else {
        let v: u64 = num(s, "element")?;
        if v >= f.order() {
            return Err(Error::Parse(format!("element {v} outside the field")));
        }
        v as u32
    };
    Ok(v)
}

/// `0` or `a^k` when logarithms are tabulated, else the integer packing.
pub fn format_element(f: &FieldTower, a: u32) -> String {
    match f.log(a) {
        _ if a == 0 => "0".into(),
        Some(k) => format!("a^{k}"),
        None => a.to_string(),
    }
}
