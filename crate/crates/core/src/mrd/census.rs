use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formulas::{m_from_mhat, rank4_count_in_mrd};
use crate::error::{Error, Result};
use crate::field::{format_poly, prime_power, BaseField, FieldTower};
use crate::subspace::{enumerate_subspaces, singleton_admissible, Limits, Metric};

/// Largest `q` the census accepts unless configured otherwise.
pub const DEFAULT_MAX_Q: u64 = 9;

const ROUND: u64 = 1 << 20;
const CHUNK: u64 = 4096;

/// Outcome of the rank filter on one candidate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// Passes the rank filter although `{1, A, B}` is dependent over F_q.
    DependentPass,
    Rejected,
}

/// Precomputed tables for the rank filter over F_{q^4}.
///
/// Writing `d` for a nonzero scalar, the word `v + d^{-1} u` with
/// `u = (1, α, α², α³)` and `v = (0, 1, A, B)` has rank at least 3 exactly
/// when the classes of `α^j + d·c_j` modulo F_q span a space of dimension at
/// least 2, where `(c_1, c_2, c_3) = (1, A, B)`. Each such element is
/// `α^j (1 + α^k)` for a single exponent `k`, so one table lookup gives its
/// projective class.
pub struct CensusKernel {
    field: FieldTower,
    n: usize,
    class: Vec<u16>,
    shifted: [Vec<u16>; 3],
    alpha_class: [u16; 3],
}

impl CensusKernel {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_max_q(q, DEFAULT_MAX_Q)
    }

    pub fn with_max_q(q: u64, max_q: u64) -> Result<Self> {
        if q > max_q || q > 32 || prime_power(q).is_none() {
            return Err(Error::UnsupportedQ(q));
        }
        let field = FieldTower::from_q(q, 4)?;
        let base = field.base();
        let q32 = q as u32;
        let proj: Vec<u16> = (0..q32.pow(3))
            .map(|r| projective_id(base, q32, r))
            .collect();
        let class: Vec<u16> = (0..field.order() as u32).map(|x| proj[(x / q32) as usize]).collect();
        let n = field.order() as usize - 1;
        let shifted = [1u64, 2, 3].map(|j| {
            let aj = field.alpha_pow(j);
            (0..2 * n)
                .map(|k| {
                    let x = field.add(aj, field.alpha_pow(j + k as u64));
                    class[x as usize]
                })
                .collect::<Vec<u16>>()
        });
        let alpha_class = [1u64, 2, 3].map(|j| class[field.alpha_pow(j) as usize]);
        Ok(CensusKernel {
            field,
            n,
            class,
            shifted,
            alpha_class,
        })
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Size of the candidate space, `q^8`.
    pub fn candidates(&self) -> u64 {
        self.field.order() * self.field.order()
    }

    /// The pair at a cursor position; `A` is the more significant half.
    pub fn pair(&self, cursor: u64) -> (u32, u32) {
        let o = self.field.order();
        ((cursor / o) as u32, (cursor % o) as u32)
    }

    /// Whether `{1, A, B}` is linearly independent over F_q.
    pub fn independent(&self, a: u32, b: u32) -> bool {
        let (ca, cb) = (self.class[a as usize], self.class[b as usize]);
        ca != 0 && cb != 0 && ca != cb
    }

    /// The rank filter over every nonzero scalar, aborting on the first failure.
    pub fn passes_filter(&self, a: u32, b: u32) -> bool {
        let n = self.n;
        let off = |c: u32, j: usize| -> Option<usize> {
            self.field.log(c).map(|l| (l as usize + n - j) % n)
        };
        let o2 = off(a, 2);
        let o3 = off(b, 3);
        let t1 = &self.shifted[0];
        let t2 = &self.shifted[1];
        let t3 = &self.shifted[2];
        for i in 1..=n {
            let p1 = t1[i - 1];
            let p2 = match o2 {
                Some(o) => t2[i + o],
                None => self.alpha_class[1],
            };
            let p3 = match o3 {
                Some(o) => t3[i + o],
                None => self.alpha_class[2],
            };
            if !two_distinct(p1, p2, p3) {
                return false;
            }
        }
        true
    }

    pub fn classify(&self, a: u32, b: u32) -> Verdict {
        if !self.passes_filter(a, b) {
            Verdict::Rejected
        } else if self.independent(a, b) {
            Verdict::Accepted
        } else {
            Verdict::DependentPass
        }
    }

    /// Accepted and dependent-passing counts over `lo..hi`.
    pub fn count_range(&self, lo: u64, hi: u64) -> (u64, u64) {
        let chunks = (hi - lo).div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let s = lo + c * CHUNK;
                let e = (s + CHUNK).min(hi);
                let mut acc = (0u64, 0u64);
                for cur in s..e {
                    let (a, b) = self.pair(cur);
                    match self.classify(a, b) {
                        Verdict::Accepted => acc.0 += 1,
                        Verdict::DependentPass => acc.1 += 1,
                        Verdict::Rejected => {}
                    }
                }
                acc
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
    }
}

fn two_distinct(a: u16, b: u16, c: u16) -> bool {
    let mut first = 0u16;
    for x in [a, b, c] {
        if x == 0 {
            continue;
        }
        if first == 0 {
            first = x;
        } else if x != first {
            return true;
        }
    }
    false
}

/// One plus the normalized packing of a vector of F_q^3, or 0 for zero.
fn projective_id(base: &BaseField, q: u32, r: u32) -> u16 {
    let d = [r % q, (r / q) % q, r / (q * q)];
    let Some(lead) = d.iter().copied().find(|&x| x != 0) else {
        return 0;
    };
    let inv = base.inv(lead);
    let n = d
        .iter()
        .rev()
        .fold(0u32, |acc, &x| acc * q + base.mul(x, inv));
    (n + 1) as u16
}

/// The filter evaluated literally: rank of `I + N·C^i` over F_q, where `C` is
/// the companion matrix of the minimal polynomial of `α` and `N` has rows
/// `0, e_1, Γ(A), Γ(B)`. Independence of `{1, A, B}` is required as well.
pub fn reference_accepts(f: &FieldTower, a: u32, b: u32) -> bool {
    assert_eq!(f.m(), 4);
    let base = f.base();
    if f.vec_rank(&[1, a, b]) < 3 {
        return false;
    }
    let comp: Vec<Vec<u32>> = (1..=4).map(|k| f.coords(f.alpha_pow(k))).collect();
    let nmat = vec![vec![0; 4], vec![1, 0, 0, 0], f.coords(a), f.coords(b)];
    let mut power = identity(4);
    for _ in 1..f.order() {
        power = mat_mul(base, &power, &comp);
        let mut m = mat_mul(base, &nmat, &power);
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = base.add(row[k], 1);
        }
        if mat_rank(base, m) < 3 {
            return false;
        }
    }
    true
}

fn identity(n: usize) -> Vec<Vec<u32>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect()
}

fn mat_mul(f: &BaseField, x: &[Vec<u32>], y: &[Vec<u32>]) -> Vec<Vec<u32>> {
    x.iter()
        .map(|row| {
            (0..y[0].len())
                .map(|j| {
                    row.iter()
                        .zip(y)
                        .fold(0, |acc, (&r, yr)| f.add(acc, f.mul(r, yr[j])))
                })
                .collect()
        })
        .collect()
}

fn mat_rank(f: &BaseField, mut m: Vec<Vec<u32>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(m[rank][c]);
        let pivot: Vec<u32> = m[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let s = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(s, pv));
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

/// State of one shard, one JSON object per line in the checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCheckpoint {
    pub q: u64,
    pub modulus: String,
    pub shard_id: u64,
    pub shard_total: u64,
    pub cursor: u64,
    pub partial_count: u64,
    #[serde(default)]
    pub dependent_passing: u64,
}

impl CensusCheckpoint {
    fn fresh(q: u64, modulus: &str, shard_id: u64, shard_total: u64, start: u64) -> Self {
        CensusCheckpoint {
            q,
            modulus: modulus.to_string(),
            shard_id,
            shard_total,
            cursor: start,
            partial_count: 0,
            dependent_passing: 0,
        }
    }
}

pub fn read_checkpoint(path: &Path) -> Result<Vec<CensusCheckpoint>> {
    fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

fn write_checkpoint(path: &Path, states: &[CensusCheckpoint]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = fs::File::create(&tmp)?;
        for s in states {
            writeln!(out, "{}", serde_json::to_string(s)?)?;
        }
        out.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub shards: u64,
    pub checkpoint: Option<PathBuf>,
    /// Stop after roughly this many candidates have been processed in this run.
    pub stop_after: Option<u64>,
    /// Candidates per shard between checkpoint writes.
    pub round: u64,
    pub max_q: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 1,
            checkpoint: None,
            stop_after: None,
            round: ROUND,
            max_q: DEFAULT_MAX_Q,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusResult {
    pub q: u64,
    pub modulus: String,
    #[serde(serialize_with = "crate::ser::big")]
    pub mhat: BigInt,
    #[serde(serialize_with = "crate::ser::big_opt")]
    pub m: Option<BigInt>,
    pub dependent_passing: u64,
    pub processed: u64,
    pub candidates: u64,
    pub shards: u64,
    pub complete: bool,
    pub wall_seconds: f64,
}

fn shard_bounds(total: u64, shards: u64, id: u64) -> (u64, u64) {
    (total * id / shards, total * (id + 1) / shards)
}

/// Counts pairs `(A, B)` such that `(1, α, α², α³)` and `(0, 1, A, B)`
/// generate a code of minimum rank distance 3.
pub fn census_mhat(q: u64, opts: &CensusOptions) -> Result<CensusResult> {
    let start = Instant::now();
    let kernel = CensusKernel::with_max_q(q, opts.max_q)?;
    let shards = opts.shards.max(1);
    let total = kernel.candidates();
    let modulus = format_poly(kernel.field().modulus());

    let mut states: Vec<CensusCheckpoint> = match &opts.checkpoint {
        Some(p) if p.exists() => {
            let s = read_checkpoint(p)?;
            validate(&s, q, &modulus, shards, total)?;
            s
        }
        _ => (0..shards)
            .map(|id| CensusCheckpoint::fresh(q, &modulus, id, shards, shard_bounds(total, shards, id).0))
            .collect(),
    };

    let round = opts.round.max(1);
    let mut processed = 0u64;
    loop {
        if states
            .iter()
            .all(|s| s.cursor == shard_bounds(total, shards, s.shard_id).1)
        {
            break;
        }
        if opts.stop_after.is_some_and(|b| processed >= b) {
            break;
        }
        let step = match opts.stop_after {
            Some(b) => round.min((b - processed).div_ceil(shards).max(1)),
            None => round,
        };
        let done: Vec<u64> = states
            .par_iter_mut()
            .map(|s| {
                let end = shard_bounds(total, shards, s.shard_id).1;
                let hi = (s.cursor + step).min(end);
                let (acc, dep) = kernel.count_range(s.cursor, hi);
                let n = hi - s.cursor;
                s.partial_count += acc;
                s.dependent_passing += dep;
                s.cursor = hi;
                n
            })
            .collect();
        processed += done.iter().sum::<u64>();
        if let Some(p) = &opts.checkpoint {
            write_checkpoint(p, &states)?;
        }
    }

    let complete = states
        .iter()
        .all(|s| s.cursor == shard_bounds(total, shards, s.shard_id).1);
    let mhat: BigInt = states.iter().map(|s| BigInt::from(s.partial_count)).sum();
    let m = if complete { Some(m_from_mhat(q, &mhat)?) } else { None };
    Ok(CensusResult {
        q,
        modulus,
        mhat,
        m,
        dependent_passing: states.iter().map(|s| s.dependent_passing).sum(),
        processed,
        candidates: total,
        shards,
        complete,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

fn validate(states: &[CensusCheckpoint], q: u64, modulus: &str, shards: u64, total: u64) -> Result<()> {
    if states.len() as u64 != shards {
        return Err(Error::CheckpointMismatch(format!(
            "{} shard records, expected {shards}",
            states.len()
        )));
    }
    for (id, s) in states.iter().enumerate() {
        if s.q != q || s.modulus != modulus {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint is for q={} modulus {}, run is q={q} modulus {modulus}",
                s.q, s.modulus
            )));
        }
        if s.shard_total != shards || s.shard_id != id as u64 {
            return Err(Error::CheckpointMismatch(format!(
                "shard {}/{} in record {id}, run has {shards} shards",
                s.shard_id, s.shard_total
            )));
        }
        let (lo, hi) = shard_bounds(total, shards, s.shard_id);
        if s.cursor < lo || s.cursor > hi || s.partial_count + s.dependent_passing > s.cursor - lo {
            return Err(Error::CheckpointMismatch(format!("shard {id} cursor {} out of range", s.cursor)));
        }
    }
    Ok(())
}

/// Result of counting MRD codes by direct enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct DirectCheck {
    pub q: u64,
    #[serde(serialize_with = "crate::ser::big")]
    pub codes: BigInt,
    #[serde(serialize_with = "crate::ser::big")]
    pub mrd: BigInt,
    /// No two-dimensional code reaches distance 4.
    pub singleton_bound_holds: bool,
    /// Rank-4 vectors in each MRD code, when they all agree.
    pub rank4_each: Option<u64>,
    #[serde(serialize_with = "crate::ser::big")]
    pub rank4_expected: BigInt,
}

/// Counts the two-dimensional codes of F_{q^4}^4 with minimum rank distance 3.
pub fn alpha2_direct_check(q: u64, limits: &Limits) -> Result<DirectCheck> {
    if prime_power(q).is_none() {
        return Err(Error::UnsupportedQ(q));
    }
    let f = FieldTower::from_q(q, 4)?;
    let en = enumerate_subspaces(&f, 4, 2, limits)?;
    let scalars = f.order() - 1;
    let per_code: Vec<Option<u64>> = (0..en.total())
        .into_par_iter()
        .map(|ix| {
            let c = en.get(ix);
            if !c.min_distance_at_least(&f, Metric::Rank, 3) {
                return None;
            }
            let mut full = 0u64;
            c.for_each_projective(&f, |v| {
                if f.vec_rank(v) == 4 {
                    full += 1;
                }
                true
            });
            Some(full * scalars)
        })
        .collect();
    let counts: Vec<u64> = per_code.into_iter().flatten().collect();
    let rank4_each = match counts.first() {
        Some(&c) if counts.iter().all(|&x| x == c) => Some(c),
        _ => None,
    };
    Ok(DirectCheck {
        q,
        codes: BigInt::from(en.total()),
        mrd: BigInt::from(counts.len()),
        singleton_bound_holds: !singleton_admissible(4, 4, 2, 4)?,
        rank4_each,
        rank4_expected: rank4_count_in_mrd(q),
    })
}
