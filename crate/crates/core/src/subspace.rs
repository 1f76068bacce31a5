//! Subspaces of F_{q^m}^n in reduced row-echelon form.
//!
//! `k`-dimensional subspaces are enumerated in a fixed order: pivot sets in
//! lexicographic order of their sorted column lists, and within one pivot set
//! the free entries (row-major, increasing column) read as a base-`Q` number
//! with the first free entry most significant.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gaussian_binom, FieldTower};

/// Caps on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_enum: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_enum: 1 << 26 }
    }
}

impl Limits {
    pub fn check(&self, what: &str, count: &BigInt) -> Result<()> {
        if *count > BigInt::from(self.max_enum) {
            return Err(Error::TooLarge {
                what: what.into(),
                count: count.to_string(),
                cap: self.max_enum,
            });
        }
        Ok(())
    }
}

/// Weight function defining a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rank,
    Hamming,
}

impl Metric {
    pub fn weight(self, f: &FieldTower, v: &[u32]) -> usize {
        match self {
            Metric::Rank => f.vec_rank(v),
            Metric::Hamming => FieldTower::hamming_weight(v),
        }
    }

    /// Largest weight a vector of length `n` can have.
    pub fn max_weight(self, f: &FieldTower, n: usize) -> usize {
        match self {
            Metric::Rank => n.min(f.m() as usize),
            Metric::Hamming => n,
        }
    }
}

/// An F_{q^m}-subspace of F_{q^m}^n, stored as its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<u32>,
}

/// Reduced row-echelon form of the row space of `rows` (flat, `n` columns).
pub fn rref(f: &FieldTower, n: usize, mut rows: Vec<u32>) -> Vec<u32> {
    let nr = rows.len() / n;
    let mut r = 0;
    for col in 0..n {
        if r == nr {
            break;
        }
        let Some(piv) = (r..nr).find(|&i| rows[i * n + col] != 0) else {
            continue;
        };
        if piv != r {
            for c in 0..n {
                rows.swap(piv * n + c, r * n + c);
            }
        }
        let inv = f.inv(rows[r * n + col]);
        if inv != 1 {
            for c in col..n {
                rows[r * n + c] = f.mul(rows[r * n + c], inv);
            }
        }
        for i in 0..nr {
            if i == r {
                continue;
            }
            let t = rows[i * n + col];
            if t == 0 {
                continue;
            }
            for c in col..n {
                let s = f.mul(t, rows[r * n + c]);
                rows[i * n + c] = f.sub(rows[i * n + c], s);
            }
        }
        r += 1;
    }
    rows.truncate(r * n);
    rows
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let mut rows = vec![0u32; n * n];
        for i in 0..n {
            rows[i * n + i] = 1;
        }
        Subspace { n, rows }
    }

    /// Span of the standard basis vectors at the given positions.
    pub fn coordinate(n: usize, positions: &[usize]) -> Self {
        let mut rows = Vec::new();
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        pos.dedup();
        for p in pos {
            let mut r = vec![0u32; n];
            r[p] = 1;
            rows.extend(r);
        }
        Subspace { n, rows }
    }

    /// Row space of `gens`; dependent rows are dropped.
    pub fn from_generators(f: &FieldTower, n: usize, gens: &[Vec<u32>]) -> Result<Self> {
        let mut flat = Vec::with_capacity(gens.len() * n);
        for g in gens {
            if g.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
            if g.iter().any(|&x| x as u64 >= f.order()) {
                return Err(Error::BadParams("entry outside the field".into()));
            }
            flat.extend_from_slice(g);
        }
        Ok(Self::from_flat(f, n, flat))
    }

    pub(crate) fn from_flat(f: &FieldTower, n: usize, flat: Vec<u32>) -> Self {
        Subspace {
            n,
            rows: rref(f, n, flat),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    /// Flat RREF matrix, `dim` rows of length `n`.
    pub fn flat_rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.dim()).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| self.row(r).iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    pub fn contains_vector(&self, f: &FieldTower, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        for (r, p) in self.pivots().into_iter().enumerate() {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(self.row(r)) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, f: &FieldTower, other: &Subspace) -> bool {
        other.dim() <= self.dim() && (0..other.dim()).all(|r| self.contains_vector(f, other.row(r)))
    }

    pub fn sum(&self, f: &FieldTower, other: &Subspace) -> Subspace {
        let mut flat = self.rows.clone();
        flat.extend_from_slice(&other.rows);
        Self::from_flat(f, self.n, flat)
    }

    /// Dimension of `self + other` without building it.
    pub fn sum_dim(&self, f: &FieldTower, other: &Subspace) -> usize {
        let mut flat = self.rows.clone();
        flat.extend_from_slice(&other.rows);
        rref(f, self.n, flat).len() / self.n.max(1)
    }

    pub fn dual(&self, f: &FieldTower) -> Subspace {
        let n = self.n;
        let piv = self.pivots();
        let mut is_piv = vec![false; n];
        piv.iter().for_each(|&p| is_piv[p] = true);
        let mut flat = Vec::with_capacity((n - piv.len()) * n);
        for c in (0..n).filter(|&c| !is_piv[c]) {
            let mut v = vec![0u32; n];
            v[c] = 1;
            for (r, &p) in piv.iter().enumerate() {
                v[p] = f.neg(self.row(r)[c]);
            }
            flat.extend(v);
        }
        Self::from_flat(f, n, flat)
    }

    pub fn intersection(&self, f: &FieldTower, other: &Subspace) -> Subspace {
        self.dual(f).sum(f, &other.dual(f)).dual(f)
    }

    pub fn intersection_dim(&self, f: &FieldTower, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum_dim(f, other)
    }

    /// Number of codewords with leading message coefficient 1.
    pub fn projective_count(&self, f: &FieldTower) -> BigInt {
        let q = BigInt::from(f.order());
        (num_traits::pow(q.clone(), self.dim()) - 1) / (q - 1)
    }

    /// Visits one representative of every 1-dimensional subspace of `self`
    /// until `visit` returns false. Returns false if stopped early.
    pub fn for_each_projective<F: FnMut(&[u32]) -> bool>(&self, f: &FieldTower, mut visit: F) -> bool {
        let k = self.dim();
        let n = self.n;
        let qm = f.order();
        let mut v = vec![0u32; n];
        for lead in 0..k {
            let free = k - lead - 1;
            let count = qm.pow(free as u32);
            for t in 0..count {
                v.copy_from_slice(self.row(lead));
                let mut rest = t;
                for j in (lead + 1..k).rev() {
                    let c = (rest % qm) as u32;
                    rest /= qm;
                    if c != 0 {
                        for (x, &y) in v.iter_mut().zip(self.row(j)) {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                }
                if !visit(&v) {
                    return false;
                }
            }
        }
        true
    }

    /// Minimum weight of a nonzero codeword; the zero code gives one more
    /// than the largest possible weight.
    pub fn min_distance(&self, f: &FieldTower, metric: Metric, limits: &Limits) -> Result<usize> {
        let cap = metric.max_weight(f, self.n);
        if self.is_zero() {
            return Ok(cap + 1);
        }
        limits.check("projective codewords", &self.projective_count(f))?;
        let mut best = cap;
        self.for_each_projective(f, |v| {
            best = best.min(metric.weight(f, v));
            best > 1
        });
        Ok(best)
    }

    /// Whether every nonzero codeword has weight at least `d`.
    pub fn min_distance_at_least(&self, f: &FieldTower, metric: Metric, d: usize) -> bool {
        if d == 0 || self.is_zero() {
            return true;
        }
        self.for_each_projective(f, |v| metric.weight(f, v) >= d)
    }

    /// Whether `self` is spanned by its rank-1 vectors.
    pub fn is_perfect(&self, f: &FieldTower, limits: &Limits) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        limits.check("projective codewords", &self.projective_count(f))?;
        let k = self.dim();
        let mut span: Vec<u32> = Vec::new();
        let mut dim = 0;
        self.for_each_projective(f, |v| {
            if f.vec_rank(v) == 1 {
                let mut next = span.clone();
                next.extend_from_slice(v);
                let next = rref(f, self.n, next);
                if next.len() / self.n > dim {
                    dim += 1;
                    span = next;
                }
            }
            dim < k
        });
        Ok(dim == k)
    }

    /// Image of the coefficient-space subspace `s` (of F^{dim self}) under
    /// the basis of `self`.
    pub fn map_from_coefficients(&self, f: &FieldTower, s: &Subspace) -> Subspace {
        let n = self.n;
        let mut flat = vec![0u32; s.dim() * n];
        for r in 0..s.dim() {
            for (j, &c) in s.row(r).iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for col in 0..n {
                    let t = f.mul(c, self.row(j)[col]);
                    flat[r * n + col] = f.add(flat[r * n + col], t);
                }
            }
        }
        Self::from_flat(f, n, flat)
    }

    /// All `k`-dimensional subspaces of `self`, in enumeration order of the
    /// coefficient space.
    pub fn subspaces_of_dim(&self, f: &FieldTower, k: usize) -> Vec<Subspace> {
        let en = SubspaceEnumerator::new(self.dim(), k, f.order());
        (0..en.total())
            .map(|ix| self.map_from_coefficients(f, &en.get(ix)))
            .collect()
    }
}

/// Whether a `k`-dimensional code of length `n` over F_{q^m} with minimum
/// distance `d` is allowed by the rank-metric Singleton bound.
pub fn singleton_admissible(n: usize, m: usize, k: usize, d: usize) -> Result<bool> {
    if k < 1 || k > n || d < 1 || d > n.min(m) {
        return Err(Error::BadParams(format!(
            "need 1 <= k <= n and 1 <= d <= min(n,m); got n={n} m={m} k={k} d={d}"
        )));
    }
    Ok(m * k <= n.max(m) * (n.min(m) - d + 1))
}

#[derive(Clone, Debug)]
struct Shape {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    count: u64,
}

/// Indexable enumeration of the `k`-dimensional subspaces of `F^n` whose
/// free RREF entries range over the packed values `0..alphabet`.
///
/// With `alphabet = q^m` this lists all F_{q^m}-subspaces; with
/// `alphabet = q` it lists the subspaces having a basis over F_q.
#[derive(Clone, Debug)]
pub struct SubspaceEnumerator {
    n: usize,
    k: usize,
    alphabet: u64,
    shapes: Vec<Shape>,
    offsets: Vec<u64>,
    total: u64,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

impl SubspaceEnumerator {
    /// Panics if the count overflows `u64`; call [`enumeration_count`] and
    /// check it against a cap first.
    pub fn new(n: usize, k: usize, alphabet: u64) -> Self {
        let mut shapes = Vec::new();
        for pivots in combinations(n, k) {
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let count = alphabet
                .checked_pow(free.len() as u32)
                .expect("enumeration size fits in u64");
            shapes.push(Shape {
                pivots,
                free,
                count,
            });
        }
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0u64;
        for s in &shapes {
            offsets.push(total);
            total = total.checked_add(s.count).expect("enumeration size fits in u64");
        }
        SubspaceEnumerator {
            n,
            k,
            alphabet,
            shapes,
            offsets,
            total,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The subspace at position `index` of the enumeration order.
    pub fn get(&self, index: u64) -> Subspace {
        let s = match self.offsets.binary_search(&index) {
            Ok(mut i) => {
                while self.shapes[i].count == 0 {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        let shape = &self.shapes[s];
        let mut t = index - self.offsets[s];
        let n = self.n;
        let mut rows = vec![0u32; self.k * n];
        for (r, &p) in shape.pivots.iter().enumerate() {
            rows[r * n + p] = 1;
        }
        for &(r, c) in shape.free.iter().rev() {
            rows[r * n + c] = (t % self.alphabet) as u32;
            t /= self.alphabet;
        }
        Subspace { n, rows }
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }
}

/// Number of `k`-subspaces of F_{q^m}^n.
pub fn enumeration_count(f: &FieldTower, n: usize, k: usize) -> BigInt {
    gaussian_binom(n as i64, k as i64, f.order())
}

/// Enumerator of the `k`-subspaces of F_{q^m}^n, refusing sizes above the cap.
pub fn enumerate_subspaces(f: &FieldTower, n: usize, k: usize, limits: &Limits) -> Result<SubspaceEnumerator> {
    if k > n {
        return Err(Error::BadParams(format!("k = {k} exceeds n = {n}")));
    }
    limits.check("subspaces", &enumeration_count(f, n, k))?;
    Ok(SubspaceEnumerator::new(n, k, f.order()))
}

/// Number of `k`-dimensional codes in F_{q^m}^n with every nonzero codeword
/// of rank above `i`.
pub fn alpha(f: &FieldTower, i: usize, n: usize, k: usize, limits: &Limits) -> Result<BigInt> {
    alpha_with_metric(f, Metric::Rank, i, n, k, limits)
}

pub fn alpha_with_metric(
    f: &FieldTower,
    metric: Metric,
    i: usize,
    n: usize,
    k: usize,
    limits: &Limits,
) -> Result<BigInt> {
    if k > n {
        return Err(Error::BadParams(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(BigInt::one());
    }
    if i == 0 {
        return Ok(enumeration_count(f, n, k));
    }
    if i >= metric.max_weight(f, n) {
        return Ok(BigInt::zero());
    }
    if metric == Metric::Rank && !singleton_admissible(n, f.m() as usize, k, i + 1)? {
        return Ok(BigInt::zero());
    }
    let en = enumerate_subspaces(f, n, k, limits)?;
    let count = par_count(en.total(), |ix| en.get(ix).min_distance_at_least(f, metric, i + 1));
    Ok(BigInt::from(count))
}

/// Whether some `k`-dimensional code has every nonzero codeword of weight
/// above `i`; stops at the first witness.
pub fn alpha_nonzero(f: &FieldTower, metric: Metric, i: usize, n: usize, k: usize, limits: &Limits) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    if i >= metric.max_weight(f, n) {
        return Ok(false);
    }
    if i == 0 {
        return Ok(true);
    }
    if metric == Metric::Rank && !singleton_admissible(n, f.m() as usize, k, i + 1)? {
        return Ok(false);
    }
    let en = enumerate_subspaces(f, n, k, limits)?;
    Ok(par_any(en.total(), |ix| en.get(ix).min_distance_at_least(f, metric, i + 1)))
}

const CHUNK: u64 = 1024;

/// Number of indices in `0..total` satisfying `pred`, counted in parallel chunks.
pub fn par_count<P: Fn(u64) -> bool + Sync>(total: u64, pred: P) -> u64 {
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(total)).filter(|&i| pred(i)).count() as u64)
        .sum()
}

pub fn par_any<P: Fn(u64) -> bool + Sync>(total: u64, pred: P) -> bool {
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .any(|c| (c * CHUNK..((c + 1) * CHUNK).min(total)).any(&pred))
}
