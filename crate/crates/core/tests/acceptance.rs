use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rank_lattice::field::{make_field, FieldTower};
use rank_lattice::lattice::{
    alpha_vector, alpha_via_whitney, closed_form_charpoly, critical_exponent, is_supersolvable_bruteforce,
    modular_flags, modular_predicted, summarize, supersolvable_predicted, whitney_recursion_check, whitney_via_alpha,
    ChiMethod, SummaryOptions, WeightedLattice,
};
use rank_lattice::mrd::{
    alpha2_direct_check, census_mhat, charpoly_l2_4_4, interpolate_m, published_samples, rank4_count_in_mrd,
    CensusOptions, ASSUMPTION,
};
use rank_lattice::poly::ExactPolynomial;
use rank_lattice::subspace::{Limits, Metric, Subspace};
use rank_lattice::verify::example_codes;
use rank_lattice::weights::{
    boundary_check, buav_check, classify, dual_weight_unchecked, generalized_rank_weight, lattice_rank_weight,
    macwilliams_report,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: rank_lattice::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Descending coefficients of `Π (λ - r)`.
fn expand(roots: &[i128]) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for &r in roots {
        let mut next = c.clone();
        next.push(BigInt::zero());
        for (k, x) in c.iter().enumerate() {
            next[k + 1] -= x * r;
        }
        c = next;
    }
    c
}

fn ipow(q: u64, e: usize) -> i128 {
    (q as i128).pow(e as u32)
}

fn eval_desc(w: &[BigInt], x: &BigInt) -> BigInt {
    w.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

const CLOSED: [(usize, usize, u32, u64); 11] = [
    (1, 2, 2, 2),
    (1, 3, 3, 2),
    (2, 2, 2, 2),
    (2, 3, 2, 2),
    (2, 2, 3, 2),
    (3, 3, 2, 2),
    (3, 3, 3, 2),
    (2, 2, 2, 3),
    (2, 2, 3, 3),
    (3, 3, 2, 3),
    (3, 3, 3, 3),
];

const CORANK_ONE: [(usize, u32, u64); 3] = [(3, 3, 2), (3, 4, 2), (2, 2, 3)];

fn lattice(i: usize, n: usize, m: u32, q: u64) -> Result<(FieldTower, WeightedLattice), String> {
    let f = lib(FieldTower::from_q(q, m))?;
    let l = lib(WeightedLattice::build(Metric::Rank, i, n, &f, &Limits::default()))?;
    Ok((f, l))
}

fn name(i: usize, n: usize, m: u32, q: u64) -> String {
    format!("L{i}({n},{m};{q})")
}

fn whitney_regression() -> Outcome {
    let f = lib(make_field(2, 1, 3, None))?;
    let opts = SummaryOptions {
        method: ChiMethod::Both,
        modular: false,
        ..Default::default()
    };
    let s = lib(summarize(Metric::Rank, 2, 4, &f, &opts))?;
    let want: Vec<BigInt> = [1i64, -225, 11680, -89280, 77824].iter().map(|&x| x.into()).collect();
    ensure(s.w == want, || format!("w = {:?}", s.w))?;
    ensure(expand(&[1, 8, 64, 152]) == want, || "factor product differs".into())?;
    ensure(s.factors == ["λ-1", "λ-8", "λ-64", "λ-152"], || format!("factors {:?}", s.factors))?;
    ensure(s.routes_agree == Some(true), || "Möbius and code-count routes disagree".into())?;
    Ok(format!("{} elements, both routes agree", s.elements.unwrap_or(0)))
}

fn closed_forms() -> Outcome {
    for (i, n, m, q) in CLOSED {
        let (_, l) = lattice(i, n, m, q)?;
        let roots: Vec<i128> = if i == 1 {
            (0..n).map(|j| ipow(q, j)).collect()
        } else {
            (0..n).map(|j| ipow(q, m as usize * j)).collect()
        };
        let brute = l.whitney_first();
        ensure(brute == expand(&roots), || format!("{} brute force {:?}", name(i, n, m, q), brute))?;
        let closed = closed_form_charpoly(i, n, m as usize, q).ok_or("no closed form")?;
        ensure(closed.poly == l.char_poly(), || format!("{} library closed form differs", name(i, n, m, q)))?;
    }
    Ok(format!("{} lattices", CLOSED.len()))
}

fn corank_one() -> Outcome {
    let mut sizes = Vec::new();
    for (n, m, q) in CORANK_ONE {
        let (_, l) = lattice(n - 1, n, m, q)?;
        let full: i128 = (1..n).map(|s| ipow(q, m as usize) - ipow(q, s)).product();
        let mut roots: Vec<i128> = (0..n - 1).map(|j| ipow(q, m as usize * j)).collect();
        roots.push(ipow(q, (n - 1) * m as usize) - full);
        let brute = l.whitney_first();
        ensure(brute == expand(&roots), || format!("{} brute force {:?}", name(n - 1, n, m, q), brute))?;
        sizes.push(format!("{}:{}", name(n - 1, n, m, q), l.len()));
    }
    Ok(sizes.join(" "))
}

fn census() -> Outcome {
    let budgets = [(2u64, 1u64), (3, 60), (4, 3600), (5, 3600)];
    let mut spent45 = Duration::ZERO;
    let mut parts = Vec::new();
    for (q, secs) in budgets {
        let want = published_samples().into_iter().find(|s| s.0 == q).ok_or("missing sample")?.1;
        let t = Instant::now();
        let r = lib(census_mhat(q, &CensusOptions::default()))?;
        let took = t.elapsed();
        ensure(r.m.as_ref() == Some(&want), || format!("M({q}) = {:?}", r.m))?;
        if q >= 4 {
            spent45 += took;
            ensure(spent45 <= Duration::from_secs(secs), || format!("q=4,5 took {spent45:?}"))?;
        } else {
            ensure(took <= Duration::from_secs(secs), || format!("q={q} took {took:?}"))?;
        }
        parts.push(format!("M({q})={want} in {:.2}s", took.as_secs_f64()));
    }
    Ok(parts.join(", "))
}

fn direct_check() -> Outcome {
    let r = lib(alpha2_direct_check(2, &Limits::default()))?;
    let subspaces = (ipow(16, 4) - 1) * (ipow(16, 3) - 1) / ((ipow(16, 2) - 1) * 15);
    ensure(r.codes == BigInt::from(subspaces) && subspaces == 70161, || format!("{} codes", r.codes))?;
    ensure(r.mrd == BigInt::from(1344), || format!("{} MRD codes", r.mrd))?;
    ensure(rank4_count_in_mrd(2) == BigInt::from(30), || "rank-4 count formula".into())?;
    ensure(r.rank4_each == Some(30), || format!("rank-4 vectors per code {:?}", r.rank4_each))?;
    Ok(format!("{} MRD codes among {} subspaces", r.mrd, r.codes))
}

fn interpolation() -> Outcome {
    let r = lib(interpolate_m(&published_samples()))?;
    let half = |c: i64| BigRational::new(c.into(), 2.into());
    let z = ExactPolynomial::from_coeffs([0, 0, -1, -1, -1, 1].map(half).to_vec());
    ensure(r.z == z, || format!("Z = {}", r.z.render("q")))?;
    let factors: [&[i64]; 5] = [&[-1, 0, 0, 1], &[-1, 0, 1], &[-1, 1], &[-1, -1, -1, 1], &[0, 0, 0, 0, 0, 0, 0, 1]];
    let m = factors
        .iter()
        .fold(ExactPolynomial::constant(half(1)), |acc, c| acc.mul(&ExactPolynomial::from_int_coeffs(c)));
    ensure(r.m == m, || format!("M = {}", r.m.render("q")))?;
    ensure(r.assumption == ASSUMPTION, || "missing assumption marker".into())?;
    let table: [(u64, &str, &str); 7] = [
        (2, "488", "60736"),
        (3, "10098", "29574801"),
        (4, "89792", "2588286976"),
        (5, "499250", "86141640625"),
        (7, "6820898", "17687732901601"),
        (8, "19394048", "147637824126976"),
        (9, "48885282", "962216318765601"),
    ];
    for (q, b, c) in table {
        let row = lib(charpoly_l2_4_4(q))?;
        let want = vec!["λ-1".to_string(), format!("λ-{}", q.pow(4)), format!("λ^2-{b}λ+{c}")];
        ensure(row.factors == want, || format!("q={q}: {:?}", row.factors))?;
        ensure(row.assumption == ASSUMPTION, || format!("q={q} lacks the assumption marker"))?;
    }
    Ok(format!("M(q) = {}", r.m.render("q")))
}

fn modularity() -> Outcome {
    let mut grid: Vec<(usize, usize, u32, u64)> = CLOSED.iter().copied().filter(|p| p.0 >= 2).collect();
    grid.push((2, 4, 3, 2));
    let mut modular = 0;
    for &(i, n, m, q) in &grid {
        let (_, l) = lattice(i, n, m, q)?;
        let flags = modular_flags(&l);
        if let Some(x) = (0..l.len()).find(|&x| modular_predicted(&l, x) != Some(flags[x])) {
            return Err(format!("{} element {x}: brute force {}", name(i, n, m, q), flags[x]));
        }
        modular += flags.iter().filter(|&&b| b).count();
        let brute = is_supersolvable_bruteforce(&l, &flags);
        ensure(brute == supersolvable_predicted(Metric::Rank, i, n, m as usize), || {
            format!("{} supersolvable = {brute}", name(i, n, m, q))
        })?;
        if (i, n, m, q) == (2, 4, 3, 2) {
            ensure(!brute, || "L2(4,3;2) is supersolvable".into())?;
        }
    }
    Ok(format!("{} lattices, {modular} modular elements, L2(4,3;2) not supersolvable", grid.len()))
}

fn roots_and_recursion() -> Outcome {
    let mut grid: Vec<(usize, usize, u32, u64)> = CLOSED.to_vec();
    grid.extend(CORANK_ONE.iter().map(|&(n, m, q)| (n - 1, n, m, q)));
    grid.push((2, 4, 3, 2));
    for &(i, n, m, q) in &grid {
        let (f, l) = lattice(i, n, m, q)?;
        let w = l.whitney_first();
        for s in 0..i {
            let root = BigInt::from(ipow(q, s * m as usize));
            ensure(eval_desc(&w, &root).is_zero(), || format!("{} χ(q^{}) ≠ 0", name(i, n, m, q), s * m as usize))?;
        }
        if n <= m as usize || (i, n, m, q) == (2, 4, 3, 2) {
            let oracle = (0..=n)
                .find(|&c| !eval_desc(&w, &BigInt::from(ipow(q, c * m as usize))).is_zero())
                .ok_or("χ vanishes everywhere")?;
            let crit = lib(critical_exponent(&f, i, n, &Limits::default()))?;
            let want = if n <= m as usize { i } else { 3 };
            ensure(crit == oracle && crit == want, || format!("{} crit {crit}, χ says {oracle}", name(i, n, m, q)))?;
        }
    }
    let (_, l) = lattice(2, 4, 3, 2)?;
    ensure(lib(whitney_recursion_check(2, 4, 3, 2, 4, &l.whitney_first()))?, || "recursion fails at j=4".into())?;
    Ok(format!("{} lattices", grid.len()))
}

fn weight_examples() -> Outcome {
    let ex = lib(example_codes())?;
    let f = &ex.field;
    let limits = Limits::default();
    let l1 = lib(WeightedLattice::build(Metric::Rank, 1, 4, f, &limits))?;
    let l2 = lib(WeightedLattice::build(Metric::Rank, 2, 4, f, &limits))?;
    let ell = |c: &Subspace, l: &WeightedLattice, j| lib(lattice_rank_weight(c, l, j));
    for c in [&ex.c, &ex.d] {
        ensure(ell(c, &l1, 1)? == 2 && ell(c, &l1, 2)? == 4, || "rank-1 weights of the pair".into())?;
        ensure(lib(generalized_rank_weight(f, c, 2, &limits))? == 4, || "generalized rank weight".into())?;
    }
    ensure(ell(&ex.c, &l2, 2)? == 2, || "second rank-2 weight of C".into())?;
    ensure(ell(&ex.d, &l2, 2)? == 3, || "second rank-2 weight of D".into())?;
    ensure(ex.mrd.dual(f) == ex.mrd_dual, || "dual code differs".into())?;
    ensure(ell(&ex.mrd, &l1, 1)? == 3 && ell(&ex.mrd_dual, &l1, 1)? == 3, || "first weights of the MRD pair".into())?;
    ensure(ell(&ex.mrd, &l1, 2)? == 4, || "second weight of the MRD code".into())?;
    let cl = lib(classify(&ex.mrd, &l1, &limits))?;
    ensure(cl.lbmd == [true, true] && cl.mrd, || format!("{cl:?}"))?;
    Ok(format!("rank-2 lattice of F_16^4 has {} elements", l2.len()))
}

fn random_code(f: &FieldTower, n: usize, rng: &mut ChaCha8Rng) -> Result<Subspace, String> {
    loop {
        let k = rng.random_range(1..=n);
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(0..f.order()) as u32).collect())
            .collect();
        let c = lib(Subspace::from_generators(f, n, &rows))?;
        if !c.is_zero() {
            return Ok(c);
        }
    }
}

fn identities() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (n, m, q) = (rng.random_range(1..=5usize), rng.random_range(1..=5usize), [2u64, 3, 4, 5][rng.random_range(0..4)]);
        let mut w: Vec<BigInt> = vec![BigInt::one()];
        w.extend((0..n).map(|_| BigInt::from(rng.random_range(-1_000_000i64..1_000_000))));
        ensure(whitney_via_alpha(n, m, q, &alpha_via_whitney(n, m, q, &w)) == w, || format!("round trip {n} {m} {q}"))?;
    }
    for (i, n, m, q) in CLOSED.into_iter().chain([(2, 4, 3, 2)]) {
        let (f, l) = lattice(i, n, m, q)?;
        let a = lib(alpha_vector(&f, i, n, &limits))?;
        ensure(whitney_via_alpha(n, m as usize, q, &a) == l.whitney_first(), || name(i, n, m, q).to_string())?;
    }

    let fields: [(usize, u32, u64); 6] = [(2, 2, 2), (2, 3, 2), (3, 2, 2), (3, 3, 2), (2, 2, 3), (3, 3, 3)];
    let (mut codes, mut buav_fail, mut buav_total) = (0, 0, 0);
    let mut first_fail = None;
    for (n, m, q) in fields {
        let f = lib(FieldTower::from_q(q, m))?;
        let ls: Vec<WeightedLattice> = (1..=n)
            .map(|i| lib(WeightedLattice::build(Metric::Rank, i, n, &f, &limits)))
            .collect::<Result<_, _>>()?;
        for _ in 0..10 {
            let c = random_code(&f, n, &mut rng)?;
            codes += 1;
            let k = c.dim();
            let d = lib(c.min_distance(&f, Metric::Rank, &limits))?;
            let tag = || format!("{:?} in F_{}^{n}", c.rows(), q.pow(m));
            let mut prev: Option<Vec<usize>> = None;
            let mut prev_lbmd: Option<Vec<bool>> = None;
            for (ix, l) in ls.iter().enumerate() {
                let i = ix + 1;
                let ell = (1..=k).map(|j| lib(lattice_rank_weight(&c, l, j))).collect::<Result<Vec<_>, _>>()?;
                if i == 1 {
                    for j in 1..=k {
                        ensure(lib(generalized_rank_weight(&f, &c, j, &limits))? == ell[j - 1], || format!("property 1: {}", tag()))?;
                    }
                }
                ensure(ell[0] == d.div_ceil(i), || format!("property 2 at i={i}: {}", tag()))?;
                ensure(ell.iter().all(|&e| e <= n), || format!("property 3: {}", tag()))?;
                ensure(ell.windows(2).all(|p| p[0] < p[1]), || format!("property 4: {}", tag()))?;
                if let Some(p) = &prev {
                    ensure(ell.iter().zip(p).all(|(a, b)| a <= b), || format!("property 5 at i={i}: {}", tag()))?;
                }
                for j in 1..=k {
                    ensure(ell[j - 1] <= n - k + j, || format!("property 6: {}", tag()))?;
                    ensure(ell[j - 1] + 1 >= d.div_ceil(i) + j, || format!("property 7: {}", tag()))?;
                    let b = lib(boundary_check(&c, l, j, &limits))?;
                    ensure(b.lower_holds && b.upper_holds, || format!("boundary at i={i} j={j}: {}", tag()))?;
                }

                let cl = lib(classify(&c, l, &limits))?;
                let perp = dual_weight_unchecked(&c.dual(&f), l, 1);
                for j in 0..k {
                    let want = perp.is_none_or(|h| (n as i64) - (ell[j] as i64) - (h as i64) < 0);
                    ensure(cl.lbmd[j] == want, || format!("LBMD flag at i={i}: {}", tag()))?;
                    if cl.lbmd[j] {
                        if j + 1 < k {
                            ensure(cl.lbmd[j + 1], || format!("LBMD not inherited in j at i={i}: {}", tag()))?;
                        }
                        if let Some(pl) = &prev_lbmd {
                            ensure(pl[j], || format!("LBMD not inherited in i at i={i}: {}", tag()))?;
                        }
                    }
                }
                if n <= m as usize {
                    ensure(cl.mrd == (d == n - k + 1) && cl.mrd == cl.lbmd_1_1, || format!("MRD criterion: {}", tag()))?;
                }
                let top = ell[k - 1] == d.div_ceil(i) + k - 1;
                let all = (0..k).all(|j| ell[j] == d.div_ceil(i) + j);
                ensure(cl.lattice_optimal == top && top == all, || format!("lattice-optimal at i={i}: {}", tag()))?;

                let mw = lib(macwilliams_report(&c, l))?;
                for j in 1..=k {
                    let r = lib(buav_check(&c, l, j, &limits))?;
                    let definitive = r.by_element[0].holds.is_some() && r.by_dimension[0].holds.is_some();
                    ensure(definitive, || format!("indefinite report at i={i}: {}", tag()))?;
                    if i == n {
                        ensure(r.pass && mw.pass, || format!("identity fails on the full lattice: {}", tag()))?;
                    } else {
                        buav_total += 1;
                        if !r.pass || !mw.pass {
                            buav_fail += 1;
                            first_fail.get_or_insert_with(|| {
                                let detail = r.by_element.iter().find_map(|c| c.detail.clone()).or(mw.reindexed.detail.clone());
                                format!("{} j={j} {}: {}", name(i, n, m, q), tag(), detail.unwrap_or_default())
                            });
                        }
                    }
                }
                prev = Some(ell);
                prev_lbmd = Some(cl.lbmd.clone());
            }
        }
    }
    let mut msg = format!("{codes} random codes; partial-lattice identity reports: {} PASS, {buav_fail} FAIL", buav_total - buav_fail);
    if let Some(e) = first_fail {
        msg.push_str(&format!(" (first counterexample {e})"));
    }
    Ok(msg)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("whitney regression", 120, whitney_regression),
        ("closed forms against brute force", 60, closed_forms),
        ("corank-one formula", 300, corank_one),
        ("MRD census", 3600, census),
        ("direct cross-check at q=2", 120, direct_check),
        ("interpolation and table", 1, interpolation),
        ("modularity and supersolvability", 600, modularity),
        ("roots, recursion and critical exponent", 60, roots_and_recursion),
        ("weight examples", 60, weight_examples),
        ("identity suites", 1800, identities),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (title, budget, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(_) if secs > *budget as f64 => Err(format!("over the {budget}s budget")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {title}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {title}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
