//! Regression suites over the worked examples and the structural identities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{make_field, FieldTower};
use crate::lattice::{
    alpha_vector, alpha_via_whitney, closed_form_charpoly, critical_exponent, factor_charpoly, forced_roots,
    is_modular_element, is_supersolvable_bruteforce, modular_flags, modular_predicted, stanley_check,
    summarize, supersolvable_predicted, whitney_recursion_check, whitney_recursion_range, whitney_via_alpha,
    BuildMethod, ChiMethod, SummaryOptions, WeightedLattice,
};
use crate::mrd::{
    alpha2_direct_check, census_mhat, charpoly_l2_4_4, interpolate_m, m_formula, published_samples,
    rank4_count_in_mrd, CensusOptions, ASSUMPTION, PUBLISHED_TABLE,
};
use crate::poly::ExactPolynomial;
use crate::subspace::{Limits, Metric, Subspace};
use crate::weights::{
    classify, dual_weight_unchecked, generalized_rank_weight, lattice_rank_weight,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl fmt::Display) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.to_string(),
    }
}

fn expect_eq<T: PartialEq + fmt::Debug>(name: impl Into<String>, got: T, want: T) -> Check {
    let pass = got == want;
    let detail = if pass {
        format!("{got:?}")
    } else {
        format!("got {got:?}, expected {want:?}")
    };
    check(name, pass, detail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PaperValues,
    Identities,
    Modularity,
    Supersolvability,
    WeightsExamples,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::PaperValues,
        Suite::Identities,
        Suite::Modularity,
        Suite::Supersolvability,
        Suite::WeightsExamples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PaperValues => "paper-values",
            Suite::Identities => "identities",
            Suite::Modularity => "modularity",
            Suite::Supersolvability => "supersolvability",
            Suite::WeightsExamples => "weights-examples",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Lattice parameters `(i, n, m, q)` of a rank-metric lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    pub i: usize,
    pub n: usize,
    pub m: u32,
    pub q: u64,
}

pub const fn p(i: usize, n: usize, m: u32, q: u64) -> Params {
    Params { i, n, m, q }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}({},{};{})", self.i, self.n, self.m, self.q)
    }
}

/// Small lattices whose characteristic polynomials have closed forms.
pub const CLOSED_FORM_GRID: [Params; 11] = [
    p(1, 2, 2, 2),
    p(1, 3, 3, 2),
    p(2, 2, 2, 2),
    p(2, 3, 2, 2),
    p(2, 2, 3, 2),
    p(3, 3, 2, 2),
    p(3, 3, 3, 2),
    p(2, 2, 2, 3),
    p(2, 2, 3, 3),
    p(3, 3, 2, 3),
    p(3, 3, 3, 3),
];

/// Corank-one lattices with `n <= m`.
pub const CORANK_ONE_GRID: [Params; 3] = [p(2, 3, 3, 2), p(2, 3, 4, 2), p(1, 2, 2, 3)];

/// The worked example of a lattice whose characteristic polynomial splits
/// although it is not supersolvable.
pub const WORKED: Params = p(2, 4, 3, 2);

fn dedup(grid: &[Params]) -> Vec<Params> {
    let mut out: Vec<Params> = Vec::new();
    for &g in grid {
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Every lattice exercised by the structural suites by default.
pub fn default_grid() -> Vec<Params> {
    let mut g = CLOSED_FORM_GRID.to_vec();
    g.extend(CORANK_ONE_GRID);
    g.push(WORKED);
    dedup(&g)
}

fn build(pr: Params, limits: &Limits) -> Result<(FieldTower, WeightedLattice)> {
    let f = FieldTower::from_q(pr.q, pr.m)?;
    let l = WeightedLattice::build(Metric::Rank, pr.i, pr.n, &f, limits)?;
    Ok((f, l))
}

pub fn run(suite: Suite, grid: Option<&[Params]>, limits: &Limits) -> Result<SuiteReport> {
    let grid = grid.map(dedup).unwrap_or_else(default_grid);
    let checks = match suite {
        Suite::PaperValues => paper_values(limits)?,
        Suite::Identities => identities(&grid, limits)?,
        Suite::Modularity => modularity(&grid, limits)?,
        Suite::Supersolvability => supersolvability(&grid, limits)?,
        Suite::WeightsExamples => weights_examples(limits)?,
    };
    Ok(SuiteReport { suite, checks })
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn paper_values(limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let f8 = make_field(2, 1, 3, None)?;
    let s = summarize(
        Metric::Rank,
        2,
        4,
        &f8,
        &SummaryOptions {
            method: ChiMethod::Both,
            modular: false,
            limits: *limits,
            ..Default::default()
        },
    )?;
    out.push(expect_eq("L2(4,3;2) Whitney numbers", s.w.clone(), big(&[1, -225, 11680, -89280, 77824])));
    out.push(expect_eq("L2(4,3;2) code counts", s.alpha.clone(), big(&[1, 360, 0, 0, 0])));
    out.push(expect_eq("L2(4,3;2) Möbius and code-count routes agree", s.routes_agree, Some(true)));
    out.push(expect_eq(
        "L2(4,3;2) factorization",
        s.factors.join(""),
        "λ-1λ-8λ-64λ-152".to_string(),
    ));

    let f16 = make_field(2, 1, 4, None)?;
    let l244 = WeightedLattice::build(Metric::Rank, 2, 4, &f16, limits)?;
    let w = l244.whitney_first();
    out.push(expect_eq("L2(4,4;2) atoms", l244.whitney_second()[1].clone(), BigInt::from(505)));
    out.push(expect_eq("L2(4,4;2) second Whitney number", w[2].clone(), BigInt::from(69048)));
    let cond = charpoly_l2_4_4(2)?;
    out.push(expect_eq("L2(4,4;2) conditional form equals brute force", cond.w.clone(), w));
    out.push(expect_eq(
        "L2(4,4;2) conditional factorization",
        cond.factors.clone(),
        vec!["λ-1".to_string(), "λ-16".into(), "λ^2-488λ+60736".into()],
    ));

    for (q, b, c) in PUBLISHED_TABLE {
        let r = charpoly_l2_4_4(q)?;
        out.push(expect_eq(
            format!("table row q={q}"),
            (r.quadratic.0.to_string(), r.quadratic.1.to_string(), r.assumption),
            (b.to_string(), c.to_string(), ASSUMPTION),
        ));
    }

    let interp = interpolate_m(&published_samples())?;
    let z = ExactPolynomial::from_coeffs(
        [0, 0, -1, -1, -1, 1]
            .iter()
            .map(|&c| num_rational::BigRational::new(BigInt::from(c), BigInt::from(2)))
            .collect(),
    );
    out.push(expect_eq("interpolated Z(q)", interp.z.clone(), z));
    out.push(check(
        "interpolated M(q) matches closed formula at q=2..=9",
        (2..=9u64).all(|q| interp.m.eval_int(q) == m_formula(q).into()),
        interp.m.render("q"),
    ));
    for (q, m) in published_samples() {
        out.push(expect_eq(format!("M({q}) from formula"), m_formula(q), m));
    }

    for q in [2u64, 3, 4, 5] {
        let r = census_mhat(q, &CensusOptions::default())?;
        let want = published_samples().into_iter().find(|s| s.0 == q).unwrap().1;
        out.push(expect_eq(format!("census M({q})"), r.m, Some(want)));
    }
    out.push(expect_eq("rank-4 vectors in an MRD code, q=2", rank4_count_in_mrd(2), BigInt::from(30)));
    out.push(expect_eq("rank-4 vectors in an MRD code, q=3", rank4_count_in_mrd(3), BigInt::from(3360)));
    let direct = alpha2_direct_check(2, limits)?;
    out.push(expect_eq("direct count of MRD codes at q=2", direct.mrd.clone(), BigInt::from(1344)));
    out.push(expect_eq("each MRD code has 30 rank-4 vectors", direct.rank4_each, Some(30)));
    out.push(expect_eq("no two-dimensional code has distance 4", direct.singleton_bound_holds, true));
    out.push(expect_eq("critical exponent of L2(4,3;2)", critical_exponent(&f8, 2, 4, limits)?, 3));
    Ok(out)
}

fn identities(grid: &[Params], limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &pr in grid {
        let (f, l) = build(pr, limits)?;
        let m = pr.m as usize;
        let w = l.whitney_first();
        let alpha = alpha_vector(&f, pr.i, pr.n, limits)?;
        out.push(expect_eq(
            format!("{pr} Whitney numbers from code counts"),
            whitney_via_alpha(pr.n, m, pr.q, &alpha),
            w.clone(),
        ));
        out.push(expect_eq(
            format!("{pr} code counts from Whitney numbers"),
            alpha_via_whitney(pr.n, m, pr.q, &w),
            alpha,
        ));
        let chi = l.char_poly();
        out.push(check(
            format!("{pr} forced roots divide χ"),
            forced_roots(pr.i, pr.m, pr.q).divides(&chi),
            factor_charpoly(&chi, pr.n, m, pr.q).render("λ"),
        ));
        if let Some(c) = closed_form_charpoly(pr.i, pr.n, m, pr.q) {
            out.push(expect_eq(format!("{pr} closed form ({})", c.source), c.poly.render("λ"), chi.render("λ")));
        }
        let jc = WeightedLattice::build_with(Metric::Rank, pr.i, pr.n, &f, limits, BuildMethod::JoinClosure)?;
        out.push(expect_eq(format!("{pr} join closure matches filter"), jc.elements(), l.elements()));
        for j in 0..=pr.n {
            if whitney_recursion_range(pr.i, pr.n, m, j) {
                out.push(expect_eq(
                    format!("{pr} Whitney recursion at j={j}"),
                    whitney_recursion_check(pr.i, pr.n, m, pr.q, j, &w)?,
                    true,
                ));
            }
        }
        if pr.n <= m {
            out.push(expect_eq(
                format!("{pr} critical exponent"),
                critical_exponent(&f, pr.i, pr.n, limits)?,
                pr.i,
            ));
        }
    }
    Ok(out)
}

fn modularity(grid: &[Params], limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &pr in grid {
        let (_, l) = build(pr, limits)?;
        let flags = modular_flags(&l);
        let wrong: Vec<usize> = (0..l.len())
            .filter(|&x| modular_predicted(&l, x) != Some(flags[x]))
            .collect();
        out.push(check(
            format!("{pr} modular elements match the characterization"),
            wrong.is_empty(),
            format!(
                "{} of {} modular, mismatches {:?}",
                flags.iter().filter(|&&b| b).count(),
                l.len(),
                &wrong[..wrong.len().min(5)]
            ),
        ));
    }
    let (_, l) = build(WORKED, limits)?;
    let e = |pos: &[usize]| l.index_of(&Subspace::coordinate(4, pos)).expect("coordinate subspaces are elements");
    out.push(expect_eq("<e1,e2,e3> is not modular in L2(4,3;2)", is_modular_element(&l, e(&[0, 1, 2])), false));
    out.push(expect_eq("Stanley factorization at <e1,e2>", stanley_check(&l, e(&[0, 1]))?, true));
    out.push(expect_eq(
        "interval below <e1,e2>",
        factor_charpoly(&l.interval_char_poly(e(&[0, 1])), 2, 3, 2).render("λ"),
        "(λ-1)(λ-8)".to_string(),
    ));
    Ok(out)
}

fn supersolvability(grid: &[Params], limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &pr in grid {
        let (_, l) = build(pr, limits)?;
        let brute = is_supersolvable_bruteforce(&l, &modular_flags(&l));
        out.push(expect_eq(
            format!("{pr} supersolvable"),
            brute,
            supersolvable_predicted(Metric::Rank, pr.i, pr.n, pr.m as usize),
        ));
    }
    let (_, l) = build(WORKED, limits)?;
    let split = factor_charpoly(&l.char_poly(), 4, 3, 2).rest.degree() == Some(0);
    out.push(check(
        "L2(4,3;2) splits into linear factors but is not supersolvable",
        split && !is_supersolvable_bruteforce(&l, &modular_flags(&l)),
        "",
    ));
    Ok(out)
}

/// The codes of the worked weight examples over F_16.
pub struct ExampleCodes {
    pub field: FieldTower,
    /// Lies in the rank-2 lattice.
    pub c: Subspace,
    /// Same generalized weights as `c`, but outside the rank-2 lattice.
    pub d: Subspace,
    /// Smallest rank-2 element containing `d`.
    pub d_hull: Subspace,
    pub mrd: Subspace,
    pub mrd_dual: Subspace,
}

pub fn example_codes() -> Result<ExampleCodes> {
    let f = make_field(2, 1, 4, None)?;
    let code = |gens: &[[Option<u64>; 4]]| -> Result<Subspace> {
        let rows: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| g.iter().map(|e| e.map_or(0, |k| f.alpha_pow(k))).collect())
            .collect();
        Subspace::from_generators(&f, 4, &rows)
    };
    let (o, z) = (Some(0), None);
    Ok(ExampleCodes {
        c: code(&[[o, z, Some(5), Some(1)], [z, o, Some(14), Some(13)]])?,
        d: code(&[[o, z, Some(6), Some(10)], [z, o, Some(7), Some(3)]])?,
        d_hull: code(&[[o, z, z, Some(11)], [z, o, z, Some(14)], [z, z, o, Some(8)]])?,
        mrd: code(&[[o, z, Some(2), Some(7)], [z, o, Some(6), Some(2)]])?,
        mrd_dual: code(&[[o, z, Some(6), Some(10)], [z, o, Some(11), Some(6)]])?,
        field: f,
    })
}

fn weights_examples(limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ex = example_codes()?;
    let f = &ex.field;
    let l: Vec<WeightedLattice> = (1..=4)
        .map(|i| WeightedLattice::build(Metric::Rank, i, 4, f, limits))
        .collect::<Result<_>>()?;
    let ell = |c: &Subspace, i: usize, j: usize| lattice_rank_weight(c, &l[i - 1], j);

    for (name, c) in [("C", &ex.c), ("D", &ex.d)] {
        out.push(expect_eq(format!("{name}: first rank-1 weight"), ell(c, 1, 1)?, 2));
        out.push(expect_eq(format!("{name}: second rank-1 weight"), ell(c, 1, 2)?, 4));
        out.push(expect_eq(
            format!("{name}: generalized rank weights"),
            (generalized_rank_weight(f, c, 1, limits)?, generalized_rank_weight(f, c, 2, limits)?),
            (2, 4),
        ));
        out.push(expect_eq(format!("{name}: first rank-2 weight"), ell(c, 2, 1)?, 1));
        out.push(expect_eq(
            format!("{name}: minimum distance"),
            c.min_distance(f, Metric::Rank, limits)?,
            2,
        ));
    }
    out.push(expect_eq("C: second rank-2 weight", ell(&ex.c, 2, 2)?, 2));
    out.push(expect_eq("D: second rank-2 weight", ell(&ex.d, 2, 2)?, 3));
    out.push(expect_eq("C is a rank-2 element", l[1].index_of(&ex.c).is_some(), true));
    out.push(expect_eq("D is not a rank-2 element", l[1].index_of(&ex.d).is_some(), false));
    out.push(check(
        "stated rank-2 hull of D",
        l[1].index_of(&ex.d_hull).is_some() && ex.d_hull.contains(f, &ex.d),
        "",
    ));

    out.push(expect_eq("stated dual of the MRD example", ex.mrd.dual(f), ex.mrd_dual.clone()));
    out.push(expect_eq("MRD example: first rank-1 weight", ell(&ex.mrd, 1, 1)?, 3));
    out.push(expect_eq("MRD example dual: first rank-1 weight", ell(&ex.mrd_dual, 1, 1)?, 3));
    out.push(expect_eq("MRD example: second rank-1 weight", ell(&ex.mrd, 1, 2)?, 4));
    let perp = dual_weight_unchecked(&ex.mrd_dual, &l[0], 1).expect("defined");
    out.push(expect_eq(
        "MRD example determination margins",
        (
            4 - ell(&ex.mrd, 1, 1)? as i64 - perp as i64,
            4 - ell(&ex.mrd, 1, 2)? as i64 - perp as i64,
        ),
        (-2, -3),
    ));
    let cl = classify(&ex.mrd, &l[0], limits)?;
    out.push(expect_eq(
        "MRD example flags",
        (cl.lbmd.clone(), cl.mrd, cl.lbmd_1_1),
        (vec![true, true], true, true),
    ));
    let witness = Subspace::coordinate(4, &[1, 3]).sum(f, &Subspace::from_generators(f, 4, &[vec![1, 0, 1, 0]])?);
    let meet_c = ex.mrd.intersection(f, &witness);
    let meet_d = ex.mrd_dual.intersection(f, &witness);
    let a = |k| f.alpha_pow(k);
    out.push(check(
        "MRD example witnesses",
        l[0].index_of(&witness).is_some()
            && meet_c == Subspace::from_generators(f, 4, &[vec![1, a(2), 1, a(3)]])?
            && meet_d == Subspace::from_generators(f, 4, &[vec![1, a(2), 1, a(1)]])?,
        "",
    ));

    let e12 = Subspace::coordinate(4, &[0, 1]);
    let coords: Vec<(usize, usize)> = (1..=4)
        .map(|i| Ok((ell(&e12, i, 1)?, ell(&e12, i, 2)?)))
        .collect::<Result<_>>()?;
    out.push(expect_eq("<e1,e2> weights for every i", coords, vec![(1, 2); 4]));
    Ok(out)
}
