//! Explicit weight-bounded sublattices of the subspace lattice of
//! F_{q^m}^n: elements are the subspaces spanned by their vectors of weight
//! at most `i`, ordered by inclusion.

mod formulas;
mod modular;
mod summary;

pub use formulas::{
    alpha_vector, alpha_via_whitney, charpoly_n_minus_1, closed_form_charpoly, critical_exponent,
    factor_charpoly, root_candidates, whitney_n_minus_1, whitney_recursion_check, whitney_recursion_range,
    whitney_via_alpha, ClosedForm,
};
pub use modular::{
    is_modular_element, is_supersolvable_bruteforce, modular_flags, modular_predicted, stanley_check,
    supersolvable_predicted,
};
pub use summary::{forced_roots, summarize, ChiMethod, LatticeSummary, ModularSummary, SummaryOptions};

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldTower;
use crate::poly::ExactPolynomial;
use crate::subspace::{enumeration_count, Limits, Metric, Subspace, SubspaceEnumerator};

/// How the element set is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMethod {
    /// Keep each subspace that is spanned by its light vectors.
    Filter,
    /// Close the atoms under joins, level by level.
    JoinClosure,
}

/// A lattice of subspaces of F_{q^m}^n generated by the vectors of weight at
/// most `i`, with its order relation and Möbius values from the bottom.
///
/// Elements are indexed by dimension first; index 0 is the zero subspace and
/// the last index is the full space.
#[derive(Debug)]
pub struct WeightedLattice {
    kind: Metric,
    i: usize,
    n: usize,
    f: FieldTower,
    elements: Vec<Subspace>,
    level: Vec<usize>,
    index: HashMap<Subspace, u32>,
    below: Vec<Vec<u32>>,
    mu0: Vec<i128>,
    atoms: Vec<Vec<u64>>,
    by_atoms: OnceLock<HashMap<Vec<u64>, u32>>,
}

fn is_member(f: &FieldTower, metric: Metric, i: usize, x: &Subspace) -> bool {
    let k = x.dim();
    if k == 0 || i >= metric.max_weight(f, x.n()) {
        return true;
    }
    if (0..k).all(|r| metric.weight(f, x.row(r)) <= i) {
        return true;
    }
    let n = x.n();
    let mut span: Vec<u32> = Vec::new();
    let mut dim = 0;
    x.for_each_projective(f, |v| {
        if metric.weight(f, v) <= i {
            let mut next = span.clone();
            next.extend_from_slice(v);
            let next = crate::subspace::rref(f, n, next);
            if next.len() / n > dim {
                dim += 1;
                span = next;
            }
        }
        dim < k
    });
    dim == k
}

impl WeightedLattice {
    /// Builds the lattice of weight-`i` generated subspaces of `f^n`.
    pub fn build(kind: Metric, i: usize, n: usize, f: &FieldTower, limits: &Limits) -> Result<Self> {
        Self::build_with(kind, i, n, f, limits, BuildMethod::Filter)
    }

    pub fn build_with(
        kind: Metric,
        i: usize,
        n: usize,
        f: &FieldTower,
        limits: &Limits,
        method: BuildMethod,
    ) -> Result<Self> {
        if n == 0 || i < 1 || i > n {
            return Err(Error::BadParams(format!("need 1 <= i <= n, got i={i} n={n}")));
        }
        let total: BigInt = (0..=n).map(|k| enumeration_count(f, n, k)).sum();
        limits.check("subspaces", &total)?;
        let levels = match method {
            BuildMethod::Filter => (0..=n)
                .map(|k| {
                    let en = SubspaceEnumerator::new(n, k, f.order());
                    let chunk = 4096u64;
                    let parts: Vec<Vec<Subspace>> = (0..en.total().div_ceil(chunk))
                        .into_par_iter()
                        .map(|c| {
                            (c * chunk..((c + 1) * chunk).min(en.total()))
                                .map(|ix| en.get(ix))
                                .filter(|x| is_member(f, kind, i, x))
                                .collect()
                        })
                        .collect();
                    parts.into_iter().flatten().collect()
                })
                .collect::<Vec<Vec<Subspace>>>(),
            BuildMethod::JoinClosure => join_closure(f, kind, i, n),
        };
        Ok(Self::from_levels(kind, i, n, f.clone(), levels))
    }

    /// Convenience: the lattice over F_{q^m} (degree 1 allowed for Hamming).
    pub fn build_params(kind: Metric, i: usize, n: usize, m: u32, q: u64, limits: &Limits) -> Result<Self> {
        let f = FieldTower::from_q(q, m)?;
        Self::build(kind, i, n, &f, limits)
    }

    fn from_levels(kind: Metric, i: usize, n: usize, f: FieldTower, levels: Vec<Vec<Subspace>>) -> Self {
        let mut level = vec![0usize];
        let mut elements = Vec::new();
        for l in levels {
            elements.extend(l);
            level.push(elements.len());
        }
        let index: HashMap<Subspace, u32> = elements
            .iter()
            .enumerate()
            .map(|(ix, s)| (s.clone(), ix as u32))
            .collect();
        let last = elements.len() - 1;
        let below: Vec<Vec<u32>> = elements
            .par_iter()
            .enumerate()
            .map(|(ix, x)| {
                let d = x.dim();
                if d == 0 {
                    return Vec::new();
                }
                if ix == last && d == n {
                    return (0..ix as u32).collect();
                }
                let mut out: Vec<u32> = (0..d)
                    .flat_map(|k| x.subspaces_of_dim(&f, k))
                    .filter_map(|y| index.get(&y).copied())
                    .collect();
                out.sort_unstable();
                out
            })
            .collect();
        let mut mu0 = vec![0i128; elements.len()];
        for ix in 0..elements.len() {
            mu0[ix] = if ix == 0 {
                1
            } else {
                below[ix]
                    .iter()
                    .try_fold(0i128, |acc, &y| acc.checked_sub(mu0[y as usize]))
                    .expect("Möbius value fits in i128")
            };
        }
        let (a0, a1) = (level[1], level[2]);
        let words = (a1 - a0).div_ceil(64).max(1);
        let atoms = (0..elements.len())
            .map(|ix| {
                let mut bits = vec![0u64; words];
                let mut set = |a: usize| {
                    if (a0..a1).contains(&a) {
                        bits[(a - a0) / 64] |= 1 << ((a - a0) % 64);
                    }
                };
                set(ix);
                below[ix].iter().for_each(|&y| set(y as usize));
                bits
            })
            .collect();
        WeightedLattice {
            kind,
            i,
            n,
            f,
            elements,
            level,
            index,
            below,
            mu0,
            atoms,
            by_atoms: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> Metric {
        self.kind
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &FieldTower {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element(&self, ix: usize) -> &Subspace {
        &self.elements[ix]
    }

    pub fn dim_of(&self, ix: usize) -> usize {
        self.elements[ix].dim()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    /// Index range of the elements of dimension `d`.
    pub fn level(&self, d: usize) -> std::ops::Range<usize> {
        self.level[d]..self.level[d + 1]
    }

    pub fn atom_range(&self) -> std::ops::Range<usize> {
        self.level(1)
    }

    pub fn index_of(&self, x: &Subspace) -> Option<usize> {
        self.index.get(x).map(|&v| v as usize)
    }

    fn require(&self, x: &Subspace) -> Result<usize> {
        if x.n() != self.n {
            return Err(Error::AmbientMismatch);
        }
        self.index_of(x).ok_or(Error::NotAnElement)
    }

    /// Indices of the elements strictly below `ix`, ascending.
    pub fn below(&self, ix: usize) -> &[u32] {
        &self.below[ix]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.below[b].binary_search(&(a as u32)).is_ok()
    }

    /// Atom bitset of the element `ix`.
    pub fn atom_bits(&self, ix: usize) -> &[u64] {
        &self.atoms[ix]
    }

    fn by_atoms(&self) -> &HashMap<Vec<u64>, u32> {
        self.by_atoms.get_or_init(|| {
            self.atoms
                .iter()
                .enumerate()
                .map(|(ix, b)| (b.clone(), ix as u32))
                .collect()
        })
    }

    /// Index of the meet: the element spanned by the common atoms.
    pub fn meet_ix(&self, a: usize, b: usize) -> usize {
        let bits: Vec<u64> = self.atoms[a].iter().zip(&self.atoms[b]).map(|(x, y)| x & y).collect();
        self.by_atoms()[&bits] as usize
    }

    /// Index of the join `X + Y`.
    pub fn join_ix(&self, a: usize, b: usize) -> usize {
        let s = self.elements[a].sum(&self.f, &self.elements[b]);
        self.index_of(&s).expect("sum of elements is an element")
    }

    pub fn meet(&self, x: &Subspace, y: &Subspace) -> Result<Subspace> {
        let (a, b) = (self.require(x)?, self.require(y)?);
        Ok(self.elements[self.meet_ix(a, b)].clone())
    }

    pub fn join(&self, x: &Subspace, y: &Subspace) -> Result<Subspace> {
        let (a, b) = (self.require(x)?, self.require(y)?);
        Ok(self.elements[self.join_ix(a, b)].clone())
    }

    /// `μ(0, X)` for the element `ix`.
    pub fn mu0(&self, ix: usize) -> i128 {
        self.mu0[ix]
    }

    /// `μ(s, t)` on element indices, memoized in `cache`.
    pub fn mobius_ix(&self, s: usize, t: usize, cache: &mut HashMap<(u32, u32), i128>) -> Result<i128> {
        if !self.leq(s, t) {
            return Err(Error::NotComparable);
        }
        if s == 0 {
            return Ok(self.mu0[t]);
        }
        if let Some(&v) = cache.get(&(s as u32, t as u32)) {
            return Ok(v);
        }
        let mut interval: Vec<usize> = self.below[t]
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| self.leq(s, u))
            .collect();
        interval.push(t);
        for &u in &interval {
            if cache.contains_key(&(s as u32, u as u32)) {
                continue;
            }
            let v = if u == s {
                1
            } else {
                -self.below[u]
                    .iter()
                    .filter(|&&w| self.leq(s, w as usize))
                    .map(|&w| cache[&(s as u32, w)])
                    .sum::<i128>()
            };
            cache.insert((s as u32, u as u32), v);
        }
        Ok(cache[&(s as u32, t as u32)])
    }

    pub fn mobius(&self, s: &Subspace, t: &Subspace) -> Result<BigInt> {
        let (a, b) = (self.require(s)?, self.require(t)?);
        let mut cache = HashMap::new();
        Ok(BigInt::from(self.mobius_ix(a, b, &mut cache)?))
    }

    /// `w_j = Σ_{dim X = j} μ(0, X)`.
    pub fn whitney_first(&self) -> Vec<BigInt> {
        (0..=self.n)
            .map(|d| self.level(d).map(|ix| BigInt::from(self.mu0[ix])).sum())
            .collect()
    }

    /// `W_j`, the number of elements of dimension `j`.
    pub fn whitney_second(&self) -> Vec<BigInt> {
        (0..=self.n).map(|d| BigInt::from(self.level(d).len())).collect()
    }

    /// `χ(λ) = Σ_j w_j λ^{n-j}`.
    pub fn char_poly(&self) -> ExactPolynomial {
        let p = ExactPolynomial::from_descending(&self.whitney_first());
        assert!(p.is_integral() && p.is_monic(), "characteristic polynomial is monic and integral");
        p
    }

    /// Characteristic polynomial of the interval `[0, t]`, in `λ^{dim t - ·}`.
    pub fn interval_char_poly(&self, t: usize) -> ExactPolynomial {
        let r = self.dim_of(t);
        let mut w = vec![BigInt::zero(); r + 1];
        for &x in self.below[t].iter().chain(std::iter::once(&(t as u32))) {
            w[self.dim_of(x as usize)] += self.mu0[x as usize];
        }
        ExactPolynomial::from_descending(&w)
    }

    /// The dual subspaces of all elements, and whether they are all elements.
    pub fn dual_closed(&self) -> (bool, Vec<usize>) {
        let missing: Vec<usize> = (0..self.len())
            .filter(|&ix| self.index_of(&self.elements[ix].dual(&self.f)).is_none())
            .collect();
        (missing.is_empty(), missing)
    }

    /// Whether every nonzero vector of `X` has weight at most `i`.
    pub fn is_light(&self, ix: usize) -> bool {
        let (f, kind, i) = (&self.f, self.kind, self.i);
        self.elements[ix].for_each_projective(f, |v| kind.weight(f, v) <= i)
    }
}

fn join_closure(f: &FieldTower, kind: Metric, i: usize, n: usize) -> Vec<Vec<Subspace>> {
    let points = SubspaceEnumerator::new(n, 1, f.order());
    let atoms: Vec<Subspace> = points
        .iter()
        .filter(|p| kind.weight(f, p.row(0)) <= i)
        .collect();
    let mut levels = vec![vec![Subspace::zero(n)], atoms.clone()];
    for _ in 2..=n {
        let prev = levels.last().unwrap();
        let mut seen: HashSet<Subspace> = HashSet::new();
        for x in prev {
            for a in &atoms {
                if !x.contains(f, a) {
                    seen.insert(x.sum(f, a));
                }
            }
        }
        let mut next: Vec<Subspace> = seen.into_iter().collect();
        next.sort_by_key(|s| (s.pivots(), s.flat_rows().to_vec()));
        levels.push(next);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn l1_2_2_2_is_subspace_lattice_of_f2_squared() {
        let f = make_field(2, 1, 2, None).unwrap();
        let l = WeightedLattice::build(Metric::Rank, 1, 2, &f, &Limits::default()).unwrap();
        assert_eq!(l.len(), 5);
        assert_eq!(l.whitney_second(), big(&[1, 3, 1]));
        assert_eq!(l.mu0(l.top()), 2);
        assert_eq!(l.whitney_first(), big(&[1, -3, 2]));
    }

    #[test]
    fn l2_4_3_2_whitney() {
        let f = make_field(2, 1, 3, None).unwrap();
        let l = WeightedLattice::build(Metric::Rank, 2, 4, &f, &Limits::default()).unwrap();
        assert_eq!(l.whitney_first(), big(&[1, -225, 11680, -89280, 77824]));
        assert_eq!(l.atom_range().len(), 225);
    }

    #[test]
    fn full_lattice_counts_all_subspaces() {
        let f = make_field(3, 1, 2, None).unwrap();
        let l = WeightedLattice::build(Metric::Rank, 2, 2, &f, &Limits::default()).unwrap();
        assert_eq!(l.whitney_second(), big(&[1, 10, 1]));
    }

    #[test]
    fn join_closure_agrees_with_filter() {
        let f = make_field(2, 1, 2, None).unwrap();
        for i in 1..=3 {
            let a = WeightedLattice::build(Metric::Rank, i, 3, &f, &Limits::default()).unwrap();
            let b = WeightedLattice::build_with(Metric::Rank, i, 3, &f, &Limits::default(), BuildMethod::JoinClosure)
                .unwrap();
            let sa: HashSet<_> = a.elements().iter().cloned().collect();
            let sb: HashSet<_> = b.elements().iter().cloned().collect();
            assert_eq!(sa, sb);
            assert_eq!(a.whitney_first(), b.whitney_first());
        }
    }

    #[test]
    fn meet_join_basics() {
        let f = make_field(2, 1, 3, None).unwrap();
        let l = WeightedLattice::build(Metric::Rank, 2, 4, &f, &Limits::default()).unwrap();
        let (a, a2) = (f.alpha_pow(1), f.alpha_pow(2));
        let x = Subspace::from_generators(&f, 4, &[vec![1, 0, 0, 0], vec![0, a, a2, 0]]).unwrap();
        let y = Subspace::from_generators(&f, 4, &[vec![1, a, 0, 0], vec![0, 0, a2, 0]]).unwrap();
        let line = x.intersection(&f, &y);
        assert_eq!(line.dim(), 1);
        assert_eq!(f.vec_rank(line.row(0)), 3);
        assert_eq!(l.meet(&x, &y).unwrap(), Subspace::zero(4));
        assert_eq!(l.meet(&x, &x).unwrap(), x);
        assert_eq!(l.join(&x, &Subspace::zero(4)).unwrap(), x);
        assert_eq!(l.join(&x, &y).unwrap().dim(), 3);
        let mut acc = 0usize;
        for a in l.atom_range() {
            acc = l.join_ix(acc, a);
        }
        assert_eq!(acc, l.top());
        assert!(matches!(l.meet(&line, &x), Err(Error::NotAnElement)));
    }

    #[test]
    fn mobius_interval_and_errors() {
        let f = make_field(2, 1, 2, None).unwrap();
        let l = WeightedLattice::build(Metric::Rank, 2, 3, &f, &Limits::default()).unwrap();
        let mut cache = HashMap::new();
        for ix in 0..l.len() {
            assert_eq!(l.mobius_ix(ix, ix, &mut cache).unwrap(), 1);
        }
        let a = l.atom_range().start;
        let top = l.top();
        assert_eq!(l.mobius_ix(a, top, &mut cache).unwrap(), 4);
        let b = a + 1;
        assert!(matches!(l.mobius_ix(a, b, &mut cache), Err(Error::NotComparable)));
    }

    #[test]
    fn too_large_is_refused() {
        let f = make_field(2, 1, 4, None).unwrap();
        let r = WeightedLattice::build(Metric::Rank, 2, 4, &f, &Limits { max_enum: 10_000 });
        assert!(matches!(r, Err(Error::TooLarge { .. })));
    }
}
