use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use super::{
    alpha_vector, closed_form_charpoly, factor_charpoly, is_supersolvable_bruteforce, modular_flags,
    modular_predicted, supersolvable_predicted, whitney_via_alpha, BuildMethod, WeightedLattice,
};
use crate::error::{Error, Result};
use crate::field::{format_poly, qpow, FieldTower};
use crate::poly::ExactPolynomial;
use crate::subspace::{Limits, Metric};

/// Route to the characteristic polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiMethod {
    /// Möbius values on the built lattice.
    Mobius,
    /// Counts of codes by distance, converted to Whitney numbers.
    Alpha,
    /// Both of the above, cross-checked.
    Both,
    /// A closed form, without building anything.
    Closed,
}

impl FromStr for ChiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mobius" | "brute" => Ok(ChiMethod::Mobius),
            "alpha" => Ok(ChiMethod::Alpha),
            "both" => Ok(ChiMethod::Both),
            "closed" => Ok(ChiMethod::Closed),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SummaryOptions {
    pub method: ChiMethod,
    pub build: BuildMethod,
    pub modular: bool,
    pub limits: Limits,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            method: ChiMethod::Mobius,
            build: BuildMethod::Filter,
            modular: true,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Charpoly {
    pub coeffs: ExactPolynomial,
    pub text: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularSummary {
    pub count: usize,
    /// Elements where brute force and the characterization disagree.
    pub mismatches: Vec<usize>,
    pub undetermined: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub kind: Metric,
    pub i: usize,
    pub n: usize,
    pub m: u32,
    pub q: u32,
    pub modulus: String,
    pub method: ChiMethod,
    pub elements: Option<usize>,
    #[serde(rename = "W", serialize_with = "crate::ser::big_vec")]
    pub big_w: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub w: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub alpha: Vec<BigInt>,
    pub charpoly: Charpoly,
    pub factors: Vec<String>,
    pub routes_agree: Option<bool>,
    pub closed_form_agrees: Option<bool>,
    pub roots_divide: Option<bool>,
    pub modular: Option<ModularSummary>,
    pub supersolvable: Option<bool>,
    pub supersolvable_predicted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumption: Option<&'static str>,
}

/// `Π_{s<i} (λ - q^{sm})`.
pub fn forced_roots(i: usize, m: u32, q: u64) -> ExactPolynomial {
    (0..i).fold(ExactPolynomial::one(), |acc, s| {
        acc.mul(&ExactPolynomial::linear(qpow(q, s as u64 * m as u64)))
    })
}

/// Builds (unless a closed form is requested) and summarizes a lattice.
pub fn summarize(kind: Metric, i: usize, n: usize, f: &FieldTower, opts: &SummaryOptions) -> Result<LatticeSummary> {
    let (m, q) = (f.m(), f.q() as u64);
    let closed = match kind {
        Metric::Rank => closed_form_charpoly(i, n, m as usize, q),
        Metric::Hamming => None,
    };
    let mut out = LatticeSummary {
        kind,
        i,
        n,
        m,
        q: f.q(),
        modulus: format_poly(f.modulus()),
        method: opts.method,
        elements: None,
        big_w: Vec::new(),
        w: Vec::new(),
        alpha: Vec::new(),
        charpoly: Charpoly {
            coeffs: ExactPolynomial::zero(),
            text: String::new(),
        },
        factors: Vec::new(),
        routes_agree: None,
        closed_form_agrees: None,
        roots_divide: None,
        modular: None,
        supersolvable: None,
        supersolvable_predicted: supersolvable_predicted(kind, i, n, m as usize),
        assumption: None,
    };
    if opts.method == ChiMethod::Closed {
        let c = closed.ok_or_else(|| {
            Error::BadParams(format!("no closed form for (i,n,m,q) = ({i},{n},{m},{q})"))
        })?;
        out.w = c.poly.int_coeffs().expect("integral").into_iter().rev().collect();
        out.assumption = c.assumption;
        finish(&mut out, c.poly, q);
        return Ok(out);
    }

    let alpha_w = if matches!(opts.method, ChiMethod::Alpha | ChiMethod::Both) {
        if kind != Metric::Rank {
            return Err(Error::BadParams("the code-count route needs the rank metric".into()));
        }
        let a = alpha_vector(f, i, n, &opts.limits)?;
        let w = whitney_via_alpha(n, m as usize, q, &a);
        out.alpha = a;
        Some(w)
    } else {
        None
    };

    let lattice = if matches!(opts.method, ChiMethod::Mobius | ChiMethod::Both) {
        Some(WeightedLattice::build_with(kind, i, n, f, &opts.limits, opts.build)?)
    } else {
        None
    };

    out.w = match (&lattice, &alpha_w) {
        (Some(l), Some(aw)) => {
            let w = l.whitney_first();
            out.routes_agree = Some(&w == aw);
            w
        }
        (Some(l), None) => l.whitney_first(),
        (None, Some(aw)) => aw.clone(),
        (None, None) => unreachable!(),
    };
    let chi = ExactPolynomial::from_descending(&out.w);
    if let Some(c) = &closed {
        out.closed_form_agrees = Some(c.poly == chi);
        out.assumption = c.assumption;
    }
    if let Some(l) = &lattice {
        out.elements = Some(l.len());
        out.big_w = l.whitney_second();
        if opts.modular {
            let flags = modular_flags(l);
            let mut mismatches = Vec::new();
            let mut undetermined = 0;
            for (x, &b) in flags.iter().enumerate() {
                match modular_predicted(l, x) {
                    Some(p) if p != b => mismatches.push(x),
                    None => undetermined += 1,
                    _ => {}
                }
            }
            out.modular = Some(ModularSummary {
                count: flags.iter().filter(|&&b| b).count(),
                mismatches,
                undetermined,
            });
            out.supersolvable = Some(is_supersolvable_bruteforce(l, &flags));
        }
    }
    if kind == Metric::Rank {
        out.roots_divide = Some(forced_roots(i, m, q).divides(&chi));
    }
    finish(&mut out, chi, q);
    Ok(out)
}

fn finish(out: &mut LatticeSummary, chi: ExactPolynomial, q: u64) {
    let fac = match out.kind {
        Metric::Rank => factor_charpoly(&chi, out.n, out.m as usize, q),
        Metric::Hamming => factor_charpoly(&chi, out.n, 1, q),
    };
    out.factors = fac.factor_strings("λ");
    out.charpoly = Charpoly {
        text: chi.render("λ"),
        coeffs: chi,
    };
}
