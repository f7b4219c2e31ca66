//! Linear codes given by generator matrices: row reduction, exhaustive weight
//! enumeration, low-weight dual search, classical bounds and power moments.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::galois::{Elem, FiniteField};

/// Default cap on the number of codewords enumerated.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

/// A dense `rows x cols` matrix over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    field: Arc<FiniteField>,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl GenMatrix {
    pub fn new(field: &Arc<FiniteField>, rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix needs at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|&e| !field.contains(e)) {
            return Err(Error::MixedFields);
        }
        Ok(Self {
            field: Arc::clone(field),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: &Arc<FiniteField>, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Reduced row echelon form (pivots chosen leftmost column first, then
/// topmost row) and the rank. Zero rows are kept at the bottom.
pub fn row_reduce(g: &GenMatrix) -> (GenMatrix, usize) {
    let f = &g.field;
    let mut rows = g.to_rows();
    let mut rank = 0;
    for c in 0..g.cols {
        if rank == rows.len() {
            break;
        }
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = f.inv(rows[rank][c]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let factor = f.neg(row[c]);
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = f.add(*x, f.mul(factor, y));
            }
        }
        rank += 1;
    }
    let reduced = GenMatrix {
        field: Arc::clone(f),
        rows: g.rows,
        cols: g.cols,
        entries: rows.concat(),
    };
    (reduced, rank)
}

/// A linear code with its generator and a row-reduced basis.
#[derive(Clone, Debug)]
pub struct LinearCode {
    gen: GenMatrix,
    reduced: GenMatrix,
    rank: usize,
}

impl LinearCode {
    pub fn new(gen: GenMatrix) -> Self {
        let (reduced, rank) = row_reduce(&gen);
        Self { gen, reduced, rank }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.gen.field
    }

    pub fn gen(&self) -> &GenMatrix {
        &self.gen
    }

    /// The row-reduced generator including trailing zero rows.
    pub fn reduced(&self) -> &GenMatrix {
        &self.reduced
    }

    pub fn length(&self) -> usize {
        self.gen.cols
    }

    /// Dimension (row rank of the generator).
    pub fn dimension(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> Vec<Vec<Elem>> {
        (0..self.rank).map(|r| self.reduced.row(r).to_vec()).collect()
    }

    /// Number of codewords, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        (self.field().q() as u128)
            .checked_pow(self.rank as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn encode(&self, info: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut word = vec![Elem::ZERO; self.length()];
        for (r, &u) in info.iter().enumerate().take(self.rank) {
            if u.is_zero() {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(self.reduced.row(r)) {
                *w = f.add(*w, f.mul(u, g));
            }
        }
        word
    }

    /// All codewords, sorted.
    pub fn codewords(&self, budget: u128) -> Result<Vec<Vec<Elem>>> {
        let size = self.size();
        if size > budget {
            return Err(Error::BudgetExceeded(size));
        }
        let q = self.field().q();
        let mut out: Vec<Vec<Elem>> = (0..size as u64)
            .into_par_iter()
            .map(|idx| {
                let mut v = idx;
                let info: Vec<Elem> = (0..self.rank)
                    .map(|_| {
                        let d = (v % q as u64) as u32;
                        v /= q as u64;
                        Elem(d)
                    })
                    .collect();
                self.encode(&info)
            })
            .collect();
        out.par_sort_unstable();
        Ok(out)
    }

    /// The dual code, generated by a null-space basis of the generator.
    pub fn dual(&self) -> LinearCode {
        let f = self.field();
        let n = self.length();
        let mut pivots = Vec::with_capacity(self.rank);
        for r in 0..self.rank {
            let row = self.reduced.row(r);
            pivots.push(row.iter().position(|x| !x.is_zero()).expect("basis row is nonzero"));
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let rows: Vec<Vec<Elem>> = if free.is_empty() {
            vec![vec![Elem::ZERO; n]]
        } else {
            free.iter()
                .map(|&fc| {
                    let mut v = vec![Elem::ZERO; n];
                    v[fc] = Elem::ONE;
                    for (r, &pc) in pivots.iter().enumerate() {
                        v[pc] = f.neg(self.reduced.get(r, fc));
                    }
                    v
                })
                .collect()
        };
        LinearCode::new(GenMatrix::from_rows(f, &rows).expect("well-formed null space"))
    }
}

pub fn hamming_weight(word: &[Elem]) -> usize {
    word.iter().filter(|x| !x.is_zero()).count()
}

/// Weight distribution `A_0..A_n` of a code over an alphabet of size `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub p: u32,
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn min_distance(&self) -> Option<usize> {
        self.counts.iter().skip(1).position(|&c| c > 0).map(|i| i + 1)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `(weight, count)` for nonzero weights with a positive count, ascending.
    pub fn nonzero_weights(&self) -> Vec<(usize, u64)> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
            .collect()
    }

    pub fn num_nonzero_weights(&self) -> usize {
        self.nonzero_weights().len()
    }

    /// `A_0 = 1` and the counts sum to `q^k`.
    pub fn is_consistent(&self) -> bool {
        let expected = (self.q as u128).checked_pow(self.k as u32);
        self.counts.first() == Some(&1) && expected == Some(self.total())
    }

    pub fn to_json(&self) -> Value {
        let mut weights = Map::new();
        for (w, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            weights.insert(w.to_string(), json!(c));
        }
        json!({
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.min_distance(),
            "weights": weights,
        })
    }

    /// `1 + A_d z^d + ...`
    pub fn enumerator_string(&self) -> String {
        let mut s = String::from("1");
        for (w, c) in self.nonzero_weights() {
            s.push_str(&format!(" + {c}z^{w}"));
        }
        s
    }
}

/// Tuning knobs for [`weight_distribution_with`].
#[derive(Clone, Debug, Default)]
pub struct EnumOptions<'a> {
    pub budget: Option<u128>,
    /// Number of leading information symbols fixed per work unit; chosen
    /// automatically when `None`.
    pub split_digits: Option<usize>,
    pub progress: Option<&'a AtomicU64>,
}

pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    weight_distribution_with(code, &EnumOptions::default())
}

/// Exact weight distribution by enumerating every information vector along a
/// base-q Gray sequence over the reduced basis.
pub fn weight_distribution_with(code: &LinearCode, opts: &EnumOptions) -> Result<WeightDistribution> {
    let budget = opts.budget.unwrap_or(DEFAULT_BUDGET);
    let size = code.size();
    if size > budget {
        return Err(Error::BudgetExceeded(size));
    }
    let f = code.field();
    let q = f.q() as u64;
    let k = code.dimension();
    let n = code.length();
    let basis = code.basis();
    let split = opts.split_digits.unwrap_or_else(|| auto_split(q, k, n)).min(k);
    let low = k - split;
    let chunks = q.pow(split as u32);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|prefix| {
            let c = if f.q() == 2 {
                enumerate_binary(&basis, low, prefix, n)
            } else {
                enumerate_chunk(f, &basis, low, prefix, n)
            };
            if let Some(p) = opts.progress {
                p.fetch_add(q.pow(low as u32), Ordering::Relaxed);
            }
            c
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(WeightDistribution {
        p: f.p(),
        q,
        n,
        k,
        counts,
    })
}

fn auto_split(q: u64, k: usize, n: usize) -> usize {
    if (q as f64).powi(k as i32) * (n as f64) < 1e6 {
        return 0;
    }
    let mut s = 0;
    while s < k && q.pow(s as u32) < 256 {
        s += 1;
    }
    s
}

/// Start word for a chunk: the top `k - low` symbols are fixed by `prefix`.
fn prefix_word(f: &FiniteField, basis: &[Vec<Elem>], low: usize, mut prefix: u64, n: usize) -> Vec<Elem> {
    let q = f.q() as u64;
    let mut word = vec![Elem::ZERO; n];
    for row in &basis[low..] {
        let u = Elem((prefix % q) as u32);
        prefix /= q;
        if u.is_zero() {
            continue;
        }
        for (w, &g) in word.iter_mut().zip(row) {
            *w = f.add(*w, f.mul(u, g));
        }
    }
    word
}

fn enumerate_chunk(f: &FiniteField, basis: &[Vec<Elem>], low: usize, prefix: u64, n: usize) -> Vec<u64> {
    let q = f.q();
    let mut counts = vec![0u64; n + 1];
    let mut word = prefix_word(f, basis, low, prefix, n);
    let mut weight = hamming_weight(&word);
    counts[weight] += 1;
    // Symbol i steps through Elem(0), Elem(1), ..., Elem(q-1) cyclically; each
    // step adds delta[j] times row i.
    let delta: Vec<Elem> = (0..q)
        .map(|j| f.sub(Elem((j + 1) % q), Elem(j)))
        .collect();
    let mut pos = vec![0u32; low];
    let total = (q as u64).pow(low as u32);
    for t in 1..total {
        let mut i = 0;
        let mut v = t;
        while v % q as u64 == 0 {
            v /= q as u64;
            i += 1;
        }
        let d = delta[pos[i] as usize];
        pos[i] = (pos[i] + 1) % q;
        let row = &basis[i];
        if d == Elem::ONE {
            for (w, &g) in word.iter_mut().zip(row) {
                if g.is_zero() {
                    continue;
                }
                let before = !w.is_zero();
                *w = f.add(*w, g);
                let after = !w.is_zero();
                weight = weight + after as usize - before as usize;
            }
        } else {
            for (w, &g) in word.iter_mut().zip(row) {
                if g.is_zero() {
                    continue;
                }
                let before = !w.is_zero();
                *w = f.add(*w, f.mul(d, g));
                let after = !w.is_zero();
                weight = weight + after as usize - before as usize;
            }
        }
        counts[weight] += 1;
    }
    counts
}

fn pack_bits(word: &[Elem]) -> Vec<u64> {
    let mut out = vec![0u64; word.len().div_ceil(64)];
    for (i, x) in word.iter().enumerate() {
        if !x.is_zero() {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn enumerate_binary(basis: &[Vec<Elem>], low: usize, prefix: u64, n: usize) -> Vec<u64> {
    let mut start = vec![Elem::ZERO; n];
    for (b, row) in basis[low..].iter().enumerate() {
        if prefix >> b & 1 == 1 {
            for (w, g) in start.iter_mut().zip(row) {
                *w = Elem(w.0 ^ g.0);
            }
        }
    }
    let rows: Vec<Vec<u64>> = basis[..low].iter().map(|r| pack_bits(r)).collect();
    let mut word = pack_bits(&start);
    let mut counts = vec![0u64; n + 1];
    let popcount = |w: &[u64]| w.iter().map(|x| x.count_ones() as usize).sum::<usize>();
    counts[popcount(&word)] += 1;
    for t in 1u64..(1u64 << low) {
        let row = &rows[t.trailing_zeros() as usize];
        for (w, r) in word.iter_mut().zip(row) {
            *w ^= r;
        }
        counts[popcount(&word)] += 1;
    }
    counts
}

/// Reference enumerator: encodes every information vector from scratch.
pub fn weight_distribution_naive(code: &LinearCode) -> WeightDistribution {
    let f = code.field();
    let q = f.q() as u64;
    let k = code.dimension();
    let n = code.length();
    let mut counts = vec![0u64; n + 1];
    for idx in 0..q.pow(k as u32) {
        let mut v = idx;
        let info: Vec<Elem> = (0..k)
            .map(|_| {
                let d = v % q;
                v /= q;
                Elem(d as u32)
            })
            .collect();
        counts[hamming_weight(&code.encode(&info))] += 1;
    }
    WeightDistribution {
        p: f.p(),
        q,
        n,
        k,
        counts,
    }
}

/// Outcome of [`dual_min_distance_upto`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualDistance {
    /// `d` columns (the witness, ascending) are linearly dependent.
    Exact { d: usize, witness: Vec<usize> },
    /// Every set of at most `t` columns is independent.
    Above(usize),
}

impl DualDistance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DualDistance::Exact { d, .. } => Some(*d),
            DualDistance::Above(_) => None,
        }
    }
}

/// Scales a nonzero vector so its first nonzero entry is one.
fn normalize(f: &FiniteField, v: &[Elem]) -> Option<Vec<Elem>> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

fn axpy(f: &FiniteField, x: &[Elem], a: Elem, y: &[Elem]) -> Vec<Elem> {
    x.iter().zip(y).map(|(&u, &v)| f.add(u, f.mul(a, v))).collect()
}

/// Minimum distance of the dual code if it is at most `t` (`t <= 4`), found as
/// the smallest linearly dependent set of generator columns.
pub fn dual_min_distance_upto(code: &LinearCode, t: usize) -> DualDistance {
    let t = t.min(4);
    let f = code.field();
    let cols: Vec<Vec<Elem>> = (0..code.length())
        .map(|c| (0..code.dimension()).map(|r| code.reduced().get(r, c)).collect())
        .collect();
    let exact = |d: usize, mut witness: Vec<usize>| {
        witness.sort_unstable();
        DualDistance::Exact { d, witness }
    };
    if t >= 1 {
        if let Some(c) = cols.iter().position(|c| c.iter().all(|x| x.is_zero())) {
            return exact(1, vec![c]);
        }
    }
    if t < 2 {
        return DualDistance::Above(t);
    }
    let normed: Vec<Vec<Elem>> = cols.iter().map(|c| normalize(f, c).expect("nonzero column")).collect();
    let mut index: HashMap<&[Elem], usize> = HashMap::new();
    for (c, v) in normed.iter().enumerate() {
        if let Some(&prev) = index.get(v.as_slice()) {
            return exact(2, vec![prev, c]);
        }
        index.insert(v, c);
    }
    if t < 3 {
        return DualDistance::Above(t);
    }
    let n = cols.len();
    let scalars: Vec<Elem> = f.nonzero_by_log().collect();
    for i in 0..n {
        for j in i + 1..n {
            for &lam in &scalars {
                let s = axpy(f, &cols[i], lam, &cols[j]);
                if let Some(key) = normalize(f, &s) {
                    if let Some(&l) = index.get(key.as_slice()) {
                        if l != i && l != j {
                            return exact(3, vec![i, j, l]);
                        }
                    }
                }
            }
        }
    }
    if t < 4 {
        return DualDistance::Above(t);
    }
    let mut sums: HashMap<Vec<Elem>, (usize, usize)> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for &lam in &scalars {
                let s = axpy(f, &cols[i], lam, &cols[j]);
                let Some(key) = normalize(f, &s) else { continue };
                match sums.get(&key) {
                    Some(&(a, b)) if a != i && a != j && b != i && b != j => {
                        return exact(4, vec![a, b, i, j]);
                    }
                    Some(_) => {}
                    None => {
                        sums.insert(key, (i, j));
                    }
                }
            }
        }
    }
    DualDistance::Above(4)
}

/// Number of weight-3 dual codewords, counted directly over column triples.
pub fn dual_weight3_count(code: &LinearCode) -> u64 {
    let f = code.field();
    let k = code.dimension();
    let n = code.length();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|c| (0..k).map(|r| code.reduced().get(r, c)).collect())
        .collect();
    let scalars: Vec<Elem> = f.nonzero_by_log().collect();
    let per_i: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            for j in i + 1..n {
                for &l2 in &scalars {
                    let w = axpy(f, &cols[i], l2, &cols[j]);
                    for cl in &cols[j + 1..] {
                        // need l3 * cl = -w with l3 nonzero
                        match cl.iter().position(|x| !x.is_zero()) {
                            None => {
                                if w.iter().all(|x| x.is_zero()) {
                                    count += scalars.len() as u64;
                                }
                            }
                            Some(r) => {
                                let l3 = f.div(f.neg(w[r]), cl[r]).expect("nonzero pivot");
                                if l3.is_zero() {
                                    continue;
                                }
                                if w.iter().zip(cl).all(|(&a, &b)| f.add(a, f.mul(l3, b)).is_zero()) {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
            count
        })
        .collect();
    per_i.iter().sum::<u64>() * (f.q() as u64 - 1)
}

/// Low-weight counts `(B1, B2, B3)` of the dual code from the first four power
/// moments of the primal distribution (Huffman-Pless form).
pub fn pless_dual_low_weights(wd: &WeightDistribution) -> Result<(u64, u64, u64)> {
    let big = |x: i128| BigRational::from_integer(BigInt::from(x));
    let q = big(wd.q as i128);
    let n = big(wd.n as i128);
    let one = BigRational::one();
    let qpow = |e: i64| -> BigRational {
        if e >= 0 {
            q.pow(e as i32)
        } else {
            one.clone() / q.pow((-e) as i32)
        }
    };
    let moment = |r: u32| -> BigRational {
        wd.counts
            .iter()
            .enumerate()
            .map(|(j, &a)| big((j as i128).pow(r)) * big(a as i128))
            .fold(BigRational::zero(), |acc, x| acc + x)
    };
    let k = wd.k as i64;
    let (s1, s2, s3) = (moment(1), moment(2), moment(3));
    let qm1 = q.clone() - one.clone();

    let b1 = q.clone() * n.clone() - n.clone() - s1 / qpow(k - 1);
    let c2 = qm1.clone() * n.clone() * (q.clone() * n.clone() - n.clone() + one.clone());
    let l2 = big(2) * q.clone() * n.clone() - q.clone() - big(2) * n.clone() + big(2);
    let b2 = (s2 / qpow(k - 2) - c2 + l2 * b1.clone()) / big(2);
    let (q2, n2) = (q.clone() * q.clone(), n.clone() * n.clone());
    let c3 = qm1
        * n.clone()
        * (q2.clone() * n2.clone() - big(2) * q.clone() * n2.clone() + big(3) * q.clone() * n.clone()
            - q.clone()
            + n2.clone()
            - big(3) * n.clone()
            + big(2));
    let l3 = big(3) * q2.clone() * n2.clone() - big(3) * q2.clone() * n.clone() - big(6) * q.clone() * n2.clone()
        + big(12) * q.clone() * n.clone()
        + q2
        - big(6) * q.clone()
        + big(3) * n2
        - big(9) * n.clone()
        + big(6);
    let m3 = big(6) * (q.clone() * n.clone() - q.clone() - n.clone() + big(2));
    let b3 = (c3 - l3 * b1.clone() + m3 * b2.clone() - s3 / qpow(k - 3)) / big(6);

    let as_count = |x: BigRational, name: &str| -> Result<u64> {
        if !x.is_integer() || x.is_negative() {
            return Err(Error::InconsistentDistribution(format!("{name} = {x}")));
        }
        x.to_integer()
            .to_u64()
            .ok_or_else(|| Error::InconsistentDistribution(format!("{name} overflows")))
    };
    Ok((as_count(b1, "B1")?, as_count(b2, "B2")?, as_count(b3, "B3")?))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn smallest_prime_factor(q: u64) -> u64 {
    (2..=q).find(|d| q.is_multiple_of(*d)).unwrap_or(q)
}

/// Weight distribution of any `[n, kappa, n - kappa + 1]` MDS code over GF(q).
pub fn mds_weight_formula(n: u64, kappa: u64, q: u64) -> Result<WeightDistribution> {
    if kappa == 0 || kappa > n {
        return Err(Error::Shape(format!("dimension {kappa} outside 1..={n}")));
    }
    let d = n - kappa + 1;
    let bq = BigInt::from(q);
    let mut counts = vec![0u64; n as usize + 1];
    counts[0] = 1;
    for i in d..=n {
        let mut acc = BigInt::zero();
        for j in 0..=(i - d) {
            let term = BigInt::from(binomial(i - 1, j)) * bq.pow((i - j - d) as u32);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let a = BigInt::from(binomial(n, i)) * (bq.clone() - BigInt::one()) * acc;
        counts[i as usize] = a
            .to_u64()
            .ok_or_else(|| Error::InconsistentDistribution(format!("A_{i} = {a} does not fit in u64")))?;
    }
    Ok(WeightDistribution {
        p: smallest_prime_factor(q) as u32,
        q,
        n: n as usize,
        k: kappa as usize,
        counts,
    })
}

/// Griesmer bound: `sum_{i<k} ceil(d / q^i)`.
pub fn griesmer_min_length(k: u64, d: u64, q: u64) -> u64 {
    let mut total = 0u64;
    let mut qi: u128 = 1;
    for _ in 0..k {
        total += (d as u128).div_ceil(qi) as u64;
        qi = qi.saturating_mul(q as u128);
    }
    total
}

pub fn meets_griesmer(n: u64, k: u64, d: u64, q: u64) -> bool {
    n == griesmer_min_length(k, d, q)
}

/// An `[n, k, d]` code is one step from the Griesmer bound: `n <= g + 1`.
pub fn is_griesmer_nearly_optimal(n: u64, k: u64, d: u64, q: u64) -> bool {
    n <= griesmer_min_length(k, d, q) + 1
}

/// Largest `k` with `q^k (1 + n(q-1)) <= q^n`; only `d = 3` is supported.
pub fn sphere_packing_max_dim(n: u64, d: u64, q: u64) -> Result<u64> {
    if d != 3 {
        return Err(Error::UnsupportedDistance(d));
    }
    let ball = BigUint::from(1 + n * (q - 1));
    let mut s = 0u64;
    let mut qs = BigUint::one();
    while qs < ball {
        qs *= q;
        s += 1;
    }
    Ok(n.saturating_sub(s))
}

/// True when the sphere-packing bound rules out an `[n, k, d]` code over GF(q).
pub fn sphere_packing_excludes(n: u64, k: u64, d: u64, q: u64) -> bool {
    let t = (d.saturating_sub(1)) / 2;
    let qb = BigUint::from(q);
    let ball: BigUint = (0..=t.min(n))
        .map(|i| binomial(n, i) * (qb.clone() - 1u32).pow(i as u32))
        .sum();
    qb.pow(k as u32) * ball > qb.pow(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use proptest::prelude::*;

    fn code(p: u64, m: u32, rows: &[&[u32]]) -> LinearCode {
        let f = make_field(p, m).unwrap();
        let rows: Vec<Vec<Elem>> = rows.iter().map(|r| r.iter().map(|&x| Elem(x)).collect()).collect();
        LinearCode::new(GenMatrix::from_rows(&f, &rows).unwrap())
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let c = code(3, 1, &[&[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(c.dimension(), 0);
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 0]);
        assert_eq!(wd.min_distance(), None);
    }

    #[test]
    fn rref_pivot_rule() {
        let c = code(3, 1, &[&[0, 2, 1], &[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.reduced().row(0), &[Elem(1), Elem(0), Elem(1)]);
        assert_eq!(c.reduced().row(1), &[Elem(0), Elem(1), Elem(2)]);
        assert_eq!(c.reduced().row(2), &[Elem(0); 3]);
    }

    #[test]
    fn shape_errors() {
        let f = make_field(2, 1).unwrap();
        assert!(GenMatrix::new(&f, 0, 3, vec![]).is_err());
        assert!(GenMatrix::new(&f, 1, 3, vec![Elem(1)]).is_err());
        assert!(matches!(
            GenMatrix::new(&f, 1, 1, vec![Elem(2)]),
            Err(Error::MixedFields)
        ));
    }

    #[test]
    fn hamming_7_4() {
        let c = code(
            2,
            1,
            &[
                &[1, 0, 0, 0, 0, 1, 1],
                &[0, 1, 0, 0, 1, 0, 1],
                &[0, 0, 1, 0, 1, 1, 0],
                &[0, 0, 0, 1, 1, 1, 1],
            ],
        );
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd.counts, vec![1, 0, 0, 7, 7, 0, 0, 1]);
        assert_eq!(dual_min_distance_upto(&c, 4).exact(), Some(4));
        let dual = c.dual();
        assert_eq!(dual.dimension(), 3);
        assert_eq!(weight_distribution(&dual).unwrap().counts, vec![1, 0, 0, 0, 7, 0, 0, 0]);
        assert_eq!(dual_min_distance_upto(&dual, 4).exact(), Some(3));
    }

    #[test]
    fn full_space_has_trivial_dual() {
        let c = code(2, 1, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(dual_min_distance_upto(&c, 4), DualDistance::Above(4));
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(pless_dual_low_weights(&wd).unwrap(), (0, 0, 0));
        assert_eq!(c.dual().dimension(), 0);
        assert_eq!(wd, mds_weight_formula(3, 3, 2).unwrap());
    }

    #[test]
    fn zero_and_repeated_columns() {
        let c = code(3, 1, &[&[1, 0, 2], &[0, 0, 1]]);
        assert_eq!(
            dual_min_distance_upto(&c, 4),
            DualDistance::Exact { d: 1, witness: vec![1] }
        );
        let c = code(3, 1, &[&[1, 2, 0], &[1, 2, 1]]);
        assert_eq!(
            dual_min_distance_upto(&c, 4),
            DualDistance::Exact { d: 2, witness: vec![0, 1] }
        );
    }

    #[test]
    fn budget_is_enforced() {
        let c = code(3, 1, &[&[1, 0, 1], &[0, 1, 1]]);
        let opts = EnumOptions {
            budget: Some(8),
            ..Default::default()
        };
        assert!(matches!(
            weight_distribution_with(&c, &opts),
            Err(Error::BudgetExceeded(9))
        ));
    }

    /// Reed-Solomon style [5,3,3] code over GF(4): evaluations of deg < 3
    /// polynomials at the four field elements plus the point at infinity.
    fn rs_5_3() -> LinearCode {
        let f = make_field(2, 2).unwrap();
        let pts: Vec<Elem> = f.elements().collect();
        let rows: Vec<Vec<Elem>> = (0..3u64)
            .map(|e| {
                let mut r: Vec<Elem> = pts.iter().map(|&x| f.pow(x, e)).collect();
                r.push(if e == 2 { Elem::ONE } else { Elem::ZERO });
                r
            })
            .collect();
        LinearCode::new(GenMatrix::from_rows(&f, &rows).unwrap())
    }

    #[test]
    fn mds_formula_matches_enumeration() {
        let c = rs_5_3();
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd.min_distance(), Some(3));
        assert_eq!(wd, mds_weight_formula(5, 3, 4).unwrap());
        let one_weight = mds_weight_formula(5, 2, 4).unwrap();
        assert_eq!(one_weight.nonzero_weights(), vec![(4, 15)]);
        for n in 1..6u64 {
            let full = mds_weight_formula(n, n, 3).unwrap();
            for i in 0..=n {
                assert_eq!(BigUint::from(full.counts[i as usize]), binomial(n, i) * BigUint::from(2u32).pow(i as u32));
            }
        }
    }

    #[test]
    fn pless_matches_brute_force_duals() {
        for c in [
            rs_5_3(),
            code(3, 1, &[&[1, 0, 1, 2, 1], &[0, 1, 1, 1, 2]]),
            code(2, 1, &[&[1, 1, 1, 0, 0, 1], &[0, 1, 1, 1, 0, 0], &[0, 0, 0, 1, 1, 1]]),
            code(5, 1, &[&[1, 2, 3, 4, 0, 1], &[0, 1, 4, 4, 1, 3]]),
        ] {
            let wd = weight_distribution(&c).unwrap();
            let dual = weight_distribution(&c.dual()).unwrap();
            let (b1, b2, b3) = pless_dual_low_weights(&wd).unwrap();
            assert_eq!((b1, b2, b3), (dual.counts[1], dual.counts[2], dual.counts[3]));
            assert_eq!(b3, dual_weight3_count(&c));
        }
    }

    #[test]
    fn pless_rejects_garbage() {
        let wd = WeightDistribution {
            p: 2,
            q: 2,
            n: 4,
            k: 2,
            counts: vec![1, 3, 0, 0, 0],
        };
        assert!(matches!(
            pless_dual_low_weights(&wd),
            Err(Error::InconsistentDistribution(_))
        ));
    }

    #[test]
    fn bounds() {
        assert_eq!(griesmer_min_length(3, 6, 3), 9);
        assert!(is_griesmer_nearly_optimal(10, 3, 6, 3));
        assert!(!meets_griesmer(10, 3, 6, 3));
        assert_eq!(griesmer_min_length(1, 17, 5), 17);
        assert!(meets_griesmer(9, 2, 8, 8));
        for m in 2..8u32 {
            let n = (1u64 << m) + 1;
            assert_eq!(sphere_packing_max_dim(n, 3, 2).unwrap(), (1 << m) - m as u64);
        }
        assert_eq!(sphere_packing_max_dim(3, 3, 2).unwrap(), 1);
        assert!(matches!(
            sphere_packing_max_dim(7, 5, 2),
            Err(Error::UnsupportedDistance(5))
        ));
        assert!(sphere_packing_excludes(17, 14, 3, 2));
        assert!(sphere_packing_excludes(17, 13, 3, 2));
        assert!(!sphere_packing_excludes(17, 12, 3, 2));
        assert!(!sphere_packing_excludes(7, 4, 3, 2));
    }

    #[test]
    fn sphere_packing_small_binary_codes_exhaustive() {
        // n = 3: the only codes with d >= 3 are {000} and {000, 111}.
        let f = make_field(2, 1).unwrap();
        let mut best = 0;
        for rows in 1u32..8 {
            for rows2 in 0u32..8 {
                let r: Vec<Vec<Elem>> = [rows, rows2]
                    .iter()
                    .map(|v| (0..3).map(|i| Elem(v >> i & 1)).collect())
                    .collect();
                let c = LinearCode::new(GenMatrix::from_rows(&f, &r).unwrap());
                let wd = weight_distribution(&c).unwrap();
                if wd.min_distance().is_some_and(|d| d >= 3) {
                    best = best.max(c.dimension());
                }
            }
        }
        assert_eq!(best as u64, sphere_packing_max_dim(3, 3, 2).unwrap());
    }

    #[test]
    fn json_layout() {
        let c = code(2, 1, &[&[1, 1, 0], &[0, 1, 1]]);
        let wd = weight_distribution(&c).unwrap();
        let s = serde_json::to_string(&wd.to_json()).unwrap();
        assert_eq!(s, r#"{"p":2,"q":2,"n":3,"k":2,"d":2,"weights":{"0":1,"2":3}}"#);
    }

    fn arb_code() -> impl Strategy<Value = LinearCode> {
        (prop::sample::select(vec![(2u64, 1u32), (2, 2), (3, 1), (5, 1), (3, 2)]), 1usize..4, 1usize..9)
            .prop_flat_map(|((p, m), k, n)| {
                let q = (p as u32).pow(m);
                prop::collection::vec(0..q, k * n).prop_map(move |e| {
                    let f = make_field(p, m).unwrap();
                    LinearCode::new(GenMatrix::new(&f, k, n, e.into_iter().map(Elem).collect()).unwrap())
                })
            })
    }

    proptest! {
        #[test]
        fn enumeration_is_order_independent(c in arb_code(), split in 0usize..4) {
            let naive = weight_distribution_naive(&c);
            let opts = EnumOptions { split_digits: Some(split), ..Default::default() };
            let fast = weight_distribution_with(&c, &opts).unwrap();
            prop_assert!(fast.is_consistent());
            prop_assert_eq!(&fast, &naive);
            prop_assert_eq!(fast, weight_distribution(&c).unwrap());
        }

        #[test]
        fn rref_preserves_row_space(c in arb_code()) {
            let f = c.field().clone();
            let g = c.gen();
            let q = f.q() as u64;
            let mut span = Vec::new();
            for idx in 0..q.pow(g.rows() as u32) {
                let mut v = idx;
                let mut word = vec![Elem::ZERO; g.cols()];
                for r in 0..g.rows() {
                    let u = Elem((v % q) as u32);
                    v /= q;
                    word = word.iter().zip(g.row(r)).map(|(&w, &x)| f.add(w, f.mul(u, x))).collect();
                }
                span.push(word);
            }
            span.sort();
            span.dedup();
            prop_assert_eq!(span.len() as u128, c.size());
            prop_assert_eq!(span, c.codewords(1 << 20).unwrap());
        }

        #[test]
        fn dual_search_agrees_with_dual_enumeration(c in arb_code()) {
            let dual_wd = weight_distribution(&c.dual()).unwrap();
            let truth = if c.dimension() == c.length() { None } else { dual_wd.min_distance() };
            match dual_min_distance_upto(&c, 4) {
                DualDistance::Exact { d, witness } => {
                    prop_assert_eq!(Some(d), truth);
                    prop_assert_eq!(witness.len(), d);
                }
                DualDistance::Above(t) => prop_assert!(truth.is_none_or(|d| d > t)),
            }
            let wd = weight_distribution(&c).unwrap();
            let (b1, b2, b3) = pless_dual_low_weights(&wd).unwrap();
            prop_assert_eq!(b1, dual_wd.counts.get(1).copied().unwrap_or(0));
            prop_assert_eq!(b2, dual_wd.counts.get(2).copied().unwrap_or(0));
            prop_assert_eq!(b3, dual_wd.counts.get(3).copied().unwrap_or(0));
            prop_assert_eq!(b3, dual_weight3_count(&c));
        }
    }
}
