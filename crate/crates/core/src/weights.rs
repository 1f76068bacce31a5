//! Lattice-rank weights of codes, the distributions and binomial moments
//! they induce, and the identities relating them.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gaussian_binom, qpow, FieldTower};
use crate::lattice::WeightedLattice;
use crate::subspace::{par_any, Limits, Metric, Subspace, SubspaceEnumerator};

fn check_ambient(c: &Subspace, l: &WeightedLattice) -> Result<()> {
    if c.n() != l.n() {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

fn check_j(c: &Subspace, j: usize) -> Result<()> {
    if j < 1 || j > c.dim() {
        return Err(Error::JOutOfRange { j, k: c.dim() });
    }
    Ok(())
}

fn big_q(f: &FieldTower) -> u64 {
    f.order()
}

/// Smallest dimension of a lattice element meeting `c` in dimension at least `j`.
pub fn lattice_rank_weight(c: &Subspace, l: &WeightedLattice, j: usize) -> Result<usize> {
    check_ambient(c, l)?;
    check_j(c, j)?;
    let f = l.tower();
    for d in j..=l.n() {
        if l.level(d).into_par_iter().any(|x| c.intersection_dim(f, l.element(x)) >= j) {
            return Ok(d);
        }
    }
    unreachable!("the full space meets the code in dimension k")
}

/// Smallest `dim X⊥` over lattice elements `X` whose dual meets `c` in
/// dimension at least `j`; `None` when there is none.
pub fn dual_weight_unchecked(c: &Subspace, l: &WeightedLattice, j: usize) -> Option<usize> {
    let f = l.tower();
    let n = l.n();
    (0..=n).rev().find_map(|d| {
        l.level(d)
            .into_par_iter()
            .any(|x| c.intersection_dim(f, &l.element(x).dual(f)) >= j)
            .then_some(n - d)
    })
}

/// The dual lattice-rank weight: the smallest dimension of a dual of a
/// lattice element meeting `c` in dimension at least `j`.
pub fn dual_lattice_rank_weight(c: &Subspace, l: &WeightedLattice, j: usize) -> Result<usize> {
    check_ambient(c, l)?;
    check_j(c, j)?;
    Ok(dual_weight_unchecked(c, l, j).expect("the dual of the zero element is the full space"))
}

/// The `j`-th generalized rank weight: smallest dimension of a subspace with
/// a basis over the base field meeting `c` in dimension at least `j`.
pub fn generalized_rank_weight(f: &FieldTower, c: &Subspace, j: usize, limits: &Limits) -> Result<usize> {
    check_j(c, j)?;
    let n = c.n();
    for d in j..=n {
        let en = SubspaceEnumerator::new(n, d, f.q() as u64);
        limits.check("base-field subspaces", &BigInt::from(en.total()))?;
        if par_any(en.total(), |ix| c.intersection_dim(f, &en.get(ix)) >= j) {
            return Ok(d);
        }
    }
    unreachable!("the full space meets the code in dimension k")
}

/// `[dim(C ∩ X), j]` for every element `X`.
pub fn binomial_moments_by_element(c: &Subspace, l: &WeightedLattice, j: usize) -> Result<Vec<BigInt>> {
    check_ambient(c, l)?;
    let f = l.tower();
    let qm = big_q(f);
    Ok((0..l.len())
        .into_par_iter()
        .map(|x| gaussian_binom(c.intersection_dim(f, l.element(x)) as i64, j as i64, qm))
        .collect())
}

/// For every element `X`, the number of `j`-dimensional subcodes `D` of
/// `C ∩ X` with no lattice element `Y` such that `D <= Y < X`.
pub fn rank_distribution_by_element(
    c: &Subspace,
    l: &WeightedLattice,
    j: usize,
    limits: &Limits,
) -> Result<Vec<BigInt>> {
    check_ambient(c, l)?;
    let f = l.tower();
    let subcodes = gaussian_binom(c.dim() as i64, j as i64, big_q(f));
    limits.check("subcode-element pairs", &(&subcodes * BigInt::from(l.len())))?;
    let minimal: Vec<Vec<u32>> = c
        .subspaces_of_dim(f, j)
        .par_iter()
        .map(|d| {
            let inside: Vec<bool> = (0..l.len())
                .map(|x| l.dim_of(x) >= j && l.element(x).contains(f, d))
                .collect();
            (0..l.len())
                .filter(|&x| inside[x] && !l.below(x).iter().any(|&y| inside[y as usize]))
                .map(|x| x as u32)
                .collect()
        })
        .collect();
    let mut counts = vec![0u64; l.len()];
    for x in minimal.into_iter().flatten() {
        counts[x as usize] += 1;
    }
    Ok(counts.into_iter().map(BigInt::from).collect())
}

fn by_dimension(l: &WeightedLattice, per: &[BigInt]) -> Vec<BigInt> {
    (0..=l.n()).map(|u| l.level(u).map(|x| &per[x]).sum()).collect()
}

/// `B_{j,u}` for `u = 0..=n`.
pub fn binomial_moments(c: &Subspace, l: &WeightedLattice, j: usize) -> Result<Vec<BigInt>> {
    check_j(c, j)?;
    Ok(by_dimension(l, &binomial_moments_by_element(c, l, j)?))
}

/// `A_{j,u}` for `u = 0..=n`.
pub fn rank_distribution(c: &Subspace, l: &WeightedLattice, j: usize, limits: &Limits) -> Result<Vec<BigInt>> {
    check_j(c, j)?;
    Ok(by_dimension(l, &rank_distribution_by_element(c, l, j, limits)?))
}

/// `f[u][v]`, the number of pairs `Y <= X` with `dim X = u` and `dim Y = v`.
pub fn f_table(l: &WeightedLattice) -> Vec<Vec<BigInt>> {
    let n = l.n();
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for x in 0..l.len() {
        let u = l.dim_of(x);
        t[u][u] += 1;
        for &y in l.below(x) {
            t[u][l.dim_of(y as usize)] += 1;
        }
    }
    t.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

pub fn f_count(l: &WeightedLattice, u: usize, v: usize) -> Result<BigInt> {
    if u > l.n() || v > l.n() {
        return Err(Error::BadParams(format!("dimensions ({u},{v}) exceed n = {}", l.n())));
    }
    Ok(f_table(l).swap_remove(u).swap_remove(v))
}

/// `μ(s, t)` for every comparable pair, one map per lower end.
fn mobius_pairs(l: &WeightedLattice, limits: &Limits) -> Result<Vec<HashMap<u32, i128>>> {
    let cover: u64 = (0..l.len()).map(|x| l.below(x).len() as u64 + 1).sum();
    limits.check("Möbius interval work", &(BigInt::from(cover) * BigInt::from(l.len())))?;
    Ok((0..l.len())
        .into_par_iter()
        .map(|s| {
            let mut mu: HashMap<u32, i128> = HashMap::new();
            mu.insert(s as u32, 1);
            for t in s + 1..l.len() {
                if !l.leq(s, t) {
                    continue;
                }
                let v: i128 = l
                    .below(t)
                    .iter()
                    .filter_map(|w| mu.get(w))
                    .sum();
                mu.insert(t as u32, -v);
            }
            mu
        })
        .collect())
}

/// Outcome of one identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// `None` when the check was skipped.
    pub holds: Option<bool>,
    pub detail: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str, failure: Option<String>) -> Self {
        IdentityCheck {
            name: name.into(),
            holds: Some(failure.is_none()),
            detail: failure,
        }
    }

    fn skipped(name: &str, why: String) -> Self {
        IdentityCheck {
            name: name.into(),
            holds: None,
            detail: Some(why),
        }
    }

    fn failed(&self) -> bool {
        self.holds == Some(false)
    }
}

fn reading_passes(checks: &[IdentityCheck]) -> bool {
    checks.first().is_some_and(|c| c.holds == Some(true)) && !checks.iter().any(IdentityCheck::failed)
}

/// The two identities between distribution and binomial moments, under the
/// dimension-indexed reading and under the element-wise reading.
#[derive(Clone, Debug, Serialize)]
pub struct BuavReport {
    pub i: usize,
    pub j: usize,
    pub by_dimension: Vec<IdentityCheck>,
    pub by_element: Vec<IdentityCheck>,
    pub pass: bool,
}

pub fn buav_check(c: &Subspace, l: &WeightedLattice, j: usize, limits: &Limits) -> Result<BuavReport> {
    check_ambient(c, l)?;
    check_j(c, j)?;
    let n = l.n();
    let ax = rank_distribution_by_element(c, l, j, limits)?;
    let bx = binomial_moments_by_element(c, l, j)?;
    let a = by_dimension(l, &ax);
    let b = by_dimension(l, &bx);
    let f = f_table(l);
    let mu = mobius_pairs(l, limits);

    let dim_first = (0..=n).find_map(|u| {
        let rhs: BigInt = (0..=u).map(|v| &a[v] * &f[u][v]).sum();
        (rhs != b[u]).then(|| format!("u={u}: B={} but sum={rhs}", b[u]))
    });
    let dim_second = match &mu {
        Ok(mu) => {
            let mut values: HashMap<(usize, usize), BTreeSet<i128>> = HashMap::new();
            for (s, row) in mu.iter().enumerate() {
                for (&t, &v) in row {
                    values.entry((l.dim_of(s), l.dim_of(t as usize))).or_default().insert(v);
                }
            }
            let ambiguous = values
                .iter()
                .filter(|(_, vs)| vs.len() > 1)
                .min_by_key(|(k, _)| **k)
                .map(|((u, v), vs)| format!("Möbius values between dimensions {u} and {v} differ: {vs:?}"));
            let failure = ambiguous.or_else(|| {
                (0..=n).find_map(|v| {
                    let rhs: BigInt = (0..=v)
                        .map(|u| {
                            let m = values.get(&(u, v)).and_then(|s| s.first().copied()).unwrap_or(0);
                            BigInt::from(m) * &b[u] * &f[v][u]
                        })
                        .sum();
                    (rhs != a[v]).then(|| format!("v={v}: A={} but sum={rhs}", a[v]))
                })
            });
            IdentityCheck::new("distribution from moments by dimension", failure)
        }
        Err(e) => IdentityCheck::skipped("distribution from moments by dimension", e.to_string()),
    };
    let by_dimension = vec![
        IdentityCheck::new("moments from distribution by dimension", dim_first),
        dim_second,
    ];

    let elem_first = (0..l.len()).find_map(|x| {
        let rhs: BigInt = l.below(x).iter().map(|&y| &ax[y as usize]).sum::<BigInt>() + &ax[x];
        (rhs != bx[x]).then(|| format!("element {x} of dimension {}: B={} but sum={rhs}", l.dim_of(x), bx[x]))
    });
    let elem_second = match &mu {
        Ok(mu) => {
            let failure = (0..l.len()).find_map(|x| {
                let rhs: BigInt = l
                    .below(x)
                    .iter()
                    .map(|&y| y as usize)
                    .chain([x])
                    .map(|y| BigInt::from(mu[y][&(x as u32)]) * &bx[y])
                    .sum();
                (rhs != ax[x]).then(|| format!("element {x} of dimension {}: A={} but sum={rhs}", l.dim_of(x), ax[x]))
            });
            IdentityCheck::new("distribution from moments by element", failure)
        }
        Err(e) => IdentityCheck::skipped("distribution from moments by element", e.to_string()),
    };
    let by_element = vec![
        IdentityCheck::new("moments from distribution by element", elem_first),
        elem_second,
    ];
    let pass = reading_passes(&by_dimension) || reading_passes(&by_element);
    Ok(BuavReport {
        i: l.i(),
        j,
        by_dimension,
        by_element,
        pass,
    })
}

/// One point `(j, u)` of the dual-code identity.
#[derive(Clone, Debug, Serialize)]
pub struct MacWilliamsPoint {
    pub j: usize,
    pub u: usize,
    #[serde(serialize_with = "crate::ser::big")]
    pub moment: BigInt,
    #[serde(serialize_with = "crate::ser::big")]
    pub literal: BigInt,
    #[serde(serialize_with = "crate::ser::big_opt")]
    pub reindexed: Option<BigInt>,
}

impl MacWilliamsPoint {
    pub fn literal_holds(&self) -> bool {
        self.literal == self.moment
    }

    /// `None` outside `u >= n - k`, where the reindexed sum is not defined.
    pub fn reindexed_holds(&self) -> Option<bool> {
        self.reindexed.as_ref().map(|r| *r == self.moment)
    }
}

/// `Σ_{dim X = u} [dim(C⊥ ∩ X⊥), p]` for `p = 0..=k`.
fn dual_sums(c: &Subspace, l: &WeightedLattice, u: usize, kmax: usize) -> Vec<BigInt> {
    let f = l.tower();
    let qm = big_q(f);
    let cd = c.dual(f);
    let dims: Vec<usize> = l
        .level(u)
        .into_par_iter()
        .map(|x| cd.intersection_dim(f, &l.element(x).dual(f)))
        .collect();
    (0..=kmax)
        .map(|p| dims.iter().map(|&d| gaussian_binom(d as i64, p as i64, qm)).sum())
        .collect()
}

/// Both sides of the dual-code identity at `(j, u)`: the displayed sum over
/// `p <= i` with a single dual moment, and the sum over `p <= j` pairing
/// `[k+u-n, j-p]` with the `p`-th dual moment.
pub fn macwilliams_check(c: &Subspace, l: &WeightedLattice, j: usize, u: usize) -> Result<MacWilliamsPoint> {
    check_ambient(c, l)?;
    check_j(c, j)?;
    let n = l.n();
    if u > n {
        return Err(Error::BadParams(format!("u = {u} exceeds n = {n}")));
    }
    let f = l.tower();
    let qm = big_q(f);
    let k = c.dim();
    let a = k as i64 + u as i64 - n as i64;
    let moment = binomial_moments(c, l, j)?.swap_remove(u);
    let sums = dual_sums(c, l, u, k.max(j));
    let term = |p: i64, top: i64| -> BigInt {
        let e = p * (a - top + p);
        if e < 0 {
            return BigInt::zero();
        }
        qpow(qm, e as u64) * gaussian_binom(a, top - p, qm)
    };
    let i = l.i() as i64;
    let literal: BigInt = (0..=i).map(|p| term(p, i) * &sums[j]).sum();
    let reindexed = (a >= 0).then(|| (0..=j as i64).map(|p| term(p, j as i64) * &sums[p as usize]).sum());
    Ok(MacWilliamsPoint {
        j,
        u,
        moment,
        literal,
        reindexed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MacWilliamsReport {
    pub i: usize,
    pub points: Vec<MacWilliamsPoint>,
    pub literal: IdentityCheck,
    pub reindexed: IdentityCheck,
    pub pass: bool,
}

/// The dual-code identity over all `j = 1..=k` and `u = 1..=n`.
pub fn macwilliams_report(c: &Subspace, l: &WeightedLattice) -> Result<MacWilliamsReport> {
    check_ambient(c, l)?;
    let mut points = Vec::new();
    for j in 1..=c.dim() {
        for u in 1..=l.n() {
            points.push(macwilliams_check(c, l, j, u)?);
        }
    }
    let describe = |p: &MacWilliamsPoint, rhs: &BigInt| format!("j={} u={}: B={} but sum={rhs}", p.j, p.u, p.moment);
    let literal = IdentityCheck::new(
        "displayed sum",
        points.iter().find(|p| !p.literal_holds()).map(|p| describe(p, &p.literal)),
    );
    let reindexed = IdentityCheck::new(
        "q-Vandermonde sum over dual moments",
        points
            .iter()
            .find(|p| p.reindexed_holds() == Some(false))
            .map(|p| describe(p, p.reindexed.as_ref().unwrap())),
    );
    let pass = !literal.failed() || !reindexed.failed();
    Ok(MacWilliamsReport {
        i: l.i(),
        points,
        literal,
        reindexed,
        pass,
    })
}

/// The two boundary regimes of the binomial moments.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCheck {
    pub j: usize,
    pub below: usize,
    pub above: Option<usize>,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

/// `A_{j,u} = B_{j,u} = 0` for `u < ℓ_j`, and `B_{j,u} = [k+u-n, j] W_u` for
/// `u > n - ℓ̂_1(C⊥)`.
pub fn boundary_check(c: &Subspace, l: &WeightedLattice, j: usize, limits: &Limits) -> Result<BoundaryCheck> {
    let f = l.tower();
    let n = l.n();
    let k = c.dim();
    let lj = lattice_rank_weight(c, l, j)?;
    let a = rank_distribution(c, l, j, limits)?;
    let b = binomial_moments(c, l, j)?;
    let lower_holds = (0..lj).all(|u| a[u].is_zero() && b[u].is_zero());
    let perp = dual_weight_unchecked(&c.dual(f), l, 1);
    let start = perp.map_or(0, |h| (n + 1).saturating_sub(h));
    let w = l.whitney_second();
    let upper_holds = (start..=n).all(|u| {
        b[u] == gaussian_binom(k as i64 + u as i64 - n as i64, j as i64, big_q(f)) * &w[u]
    });
    Ok(BoundaryCheck {
        j,
        below: lj,
        above: perp.map(|h| n - h.min(n)),
        lower_holds,
        upper_holds,
    })
}

/// Invariants of a code with respect to one lattice.
#[derive(Clone, Debug, Serialize)]
pub struct WeightProfile {
    pub i: usize,
    pub n: usize,
    pub m: u32,
    pub q: u32,
    pub metric: Metric,
    pub k: usize,
    pub d: usize,
    pub ell: Vec<usize>,
    pub ell_dual_hat: Vec<usize>,
    /// First dual weight of the dual code; `None` for the full space.
    pub ell_dual_hat_perp: Option<usize>,
    #[serde(serialize_with = "crate::ser::big_mat")]
    pub a: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::ser::big_mat")]
    pub b: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::ser::big_mat")]
    pub f: Vec<Vec<BigInt>>,
}

pub fn profile(c: &Subspace, l: &WeightedLattice, limits: &Limits) -> Result<WeightProfile> {
    check_ambient(c, l)?;
    let f = l.tower();
    let k = c.dim();
    let ell = (1..=k).map(|j| lattice_rank_weight(c, l, j)).collect::<Result<Vec<_>>>()?;
    if l.i() == 1 && l.kind() == Metric::Rank {
        for (j, &e) in ell.iter().enumerate() {
            assert_eq!(e, generalized_rank_weight(f, c, j + 1, limits)?, "generalized rank weight");
        }
    }
    let ell_dual_hat = (1..=k).map(|j| dual_lattice_rank_weight(c, l, j)).collect::<Result<Vec<_>>>()?;
    let a = (1..=k).map(|j| rank_distribution(c, l, j, limits)).collect::<Result<Vec<_>>>()?;
    let b = (1..=k).map(|j| binomial_moments(c, l, j)).collect::<Result<Vec<_>>>()?;
    Ok(WeightProfile {
        i: l.i(),
        n: l.n(),
        m: f.m(),
        q: f.q(),
        metric: l.kind(),
        k,
        d: c.min_distance(f, l.kind(), limits)?,
        ell,
        ell_dual_hat,
        ell_dual_hat_perp: dual_weight_unchecked(&c.dual(f), l, 1),
        a,
        b,
        f: f_table(l),
    })
}

/// Extremality flags of a code with respect to one lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub i: usize,
    pub k: usize,
    pub d: usize,
    pub d_dual: usize,
    /// `lbmd[j-1]`: `n - ℓ_j - ℓ̂_1(C⊥) < 0`.
    pub lbmd: Vec<bool>,
    pub lattice_optimal: bool,
    pub lmrd: Vec<bool>,
    pub mrd: bool,
    /// `n - d - d⊥ < 0`, the first-order condition on the rank-one lattice.
    pub lbmd_1_1: bool,
    pub perfect: bool,
}

pub fn classify(c: &Subspace, l: &WeightedLattice, limits: &Limits) -> Result<Classification> {
    check_ambient(c, l)?;
    let f = l.tower();
    let n = l.n();
    let k = c.dim();
    let i = l.i();
    let ell = (1..=k).map(|j| lattice_rank_weight(c, l, j)).collect::<Result<Vec<_>>>()?;
    let perp = dual_weight_unchecked(&c.dual(f), l, 1);
    let lbmd = ell
        .iter()
        .map(|&e| perp.is_none_or(|h| (n as i64) - (e as i64) - (h as i64) < 0))
        .collect();
    let d = c.min_distance(f, l.kind(), limits)?;
    let lattice_optimal = k > 0 && ell[k - 1] == d.div_ceil(i) + k - 1;
    if lattice_optimal {
        for (j, &e) in ell.iter().enumerate() {
            assert_eq!(e, ell[0] + j, "lattice-optimal weights are consecutive");
        }
    }
    let lmrd = ell.iter().enumerate().map(|(j, &e)| e == n - k + j + 1).collect();
    let rd = c.min_distance(f, Metric::Rank, limits)?;
    let rd_dual = c.dual(f).min_distance(f, Metric::Rank, limits)?;
    let m = f.m() as usize;
    let mrd = k > 0 && n <= m && rd == n - k + 1;
    let lbmd_1_1 = k > 0 && (n as i64) - (rd as i64) - (rd_dual as i64) < 0;
    if n <= m && k > 0 {
        assert_eq!(mrd, lbmd_1_1, "MRD codes are exactly the first-order determined ones");
    }
    Ok(Classification {
        i,
        k,
        d,
        d_dual: rd_dual,
        lbmd,
        lattice_optimal,
        lmrd,
        mrd,
        lbmd_1_1,
        perfect: c.is_perfect(f, limits)?,
    })
}
