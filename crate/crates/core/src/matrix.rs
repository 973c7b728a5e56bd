//! Sparse integer matrices, rank over prime fields, and Smith normal form.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::CoefficientRing;

/// Above this fraction of nonzero entries rank computations go dense.
pub const DENSE_THRESHOLD: f64 = 0.25;

/// Column-major sparse matrix. Each column is sorted by row with no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, columns: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    /// Builds from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        let mut acc: Vec<HashMap<usize, i64>> = vec![HashMap::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            let e = acc[c].entry(r).or_insert(0);
            *e = e.checked_add(v).ok_or_else(|| Error::Shape("entry overflow".into()))?;
        }
        let columns = acc
            .into_iter()
            .map(|m| {
                let mut col: Vec<_> = m.into_iter().filter(|(_, v)| *v != 0).collect();
                col.sort_unstable();
                col
            })
            .collect();
        Ok(SparseMatrix { rows, cols, columns })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triples = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        SparseMatrix::from_triplets(nrows, ncols, triples).expect("dense input is in range")
    }

    /// Columns given as sparse lists; entries are summed and zeros dropped.
    pub(crate) fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(usize, i64)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    debug_assert!(r < rows);
                    match out.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|e| e.1 != 0);
                out
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.rows as f64 * self.cols as f64)
        }
    }

    /// Entries reduced into the ring (residues `0..p` over a field).
    pub fn reduced(&self, ring: CoefficientRing) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|&(r, v)| (r, ring.reduce_i64(v))).filter(|e| e.1 != 0).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut columns = Vec::with_capacity(rhs.cols);
        for col in &rhs.columns {
            let mut acc: HashMap<usize, i128> = HashMap::new();
            for &(k, v) in col {
                for &(r, w) in &self.columns[k] {
                    *acc.entry(r).or_insert(0) += v as i128 * w as i128;
                }
            }
            let mut out = Vec::with_capacity(acc.len());
            for (r, v) in acc {
                if v != 0 {
                    let v = i64::try_from(v).map_err(|_| Error::Shape("product entry overflow".into()))?;
                    out.push((r, v));
                }
            }
            out.sort_unstable();
            columns.push(out);
        }
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, columns })
    }

    pub fn is_zero_over(&self, ring: CoefficientRing) -> bool {
        self.entries().all(|(_, _, v)| ring.reduce_i64(v) == 0)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = BigInt::from(v);
        }
        out
    }

    /// Row/column permuted copy: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let triples = self.entries().map(|(r, c, v)| (row_perm[r], col_perm[c], v));
        SparseMatrix::from_triplets(self.rows, self.cols, triples).expect("permutation in range")
    }

    /// Rank over `F_p`. Sparse column reduction, or dense Gaussian
    /// elimination when the density exceeds [`DENSE_THRESHOLD`].
    pub fn rank_mod_p(&self, p: u32) -> usize {
        if self.density() > DENSE_THRESHOLD {
            self.rank_dense_mod_p(p)
        } else {
            self.rank_sparse_mod_p(p)
        }
    }

    /// Sparse rank: singleton rows and columns are peeled off first (each
    /// contributes one to the rank without fill-in), then the remaining core
    /// is column-reduced.
    pub(crate) fn rank_sparse_mod_p(&self, p: u32) -> usize {
        let p = p as u64;
        let cols: Vec<Vec<(usize, u64)>> = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|&(r, v)| (r, v.rem_euclid(p as i64) as u64))
                    .filter(|e| e.1 != 0)
                    .collect()
            })
            .collect();
        let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); self.rows];
        for (c, col) in cols.iter().enumerate() {
            for &(r, _) in col {
                row_cols[r].push(c as u32);
            }
        }
        let mut col_count: Vec<usize> = cols.iter().map(Vec::len).collect();
        let mut row_count: Vec<usize> = row_cols.iter().map(Vec::len).collect();
        let mut col_alive = vec![true; self.cols];
        let mut row_alive = vec![true; self.rows];
        let mut rank = 0;
        // Entries are (is_row, index).
        let mut queue: Vec<(bool, usize)> = (0..self.cols)
            .filter(|&c| col_count[c] == 1)
            .map(|c| (false, c))
            .chain((0..self.rows).filter(|&r| row_count[r] == 1).map(|r| (true, r)))
            .collect();
        while let Some((is_row, i)) = queue.pop() {
            let (r, c) = if is_row {
                if !row_alive[i] || row_count[i] != 1 {
                    continue;
                }
                let c = row_cols[i].iter().map(|&c| c as usize).find(|&c| col_alive[c]).expect("count is 1");
                (i, c)
            } else {
                if !col_alive[i] || col_count[i] != 1 {
                    continue;
                }
                let r = cols[i].iter().map(|e| e.0).find(|&r| row_alive[r]).expect("count is 1");
                (r, i)
            };
            rank += 1;
            row_alive[r] = false;
            col_alive[c] = false;
            for &c2 in &row_cols[r] {
                let c2 = c2 as usize;
                if col_alive[c2] {
                    col_count[c2] -= 1;
                    if col_count[c2] == 1 {
                        queue.push((false, c2));
                    }
                }
            }
            for &(r2, _) in &cols[c] {
                if row_alive[r2] {
                    row_count[r2] -= 1;
                    if row_count[r2] == 1 {
                        queue.push((true, r2));
                    }
                }
            }
        }
        drop(row_cols);
        let mut core: Vec<Vec<(usize, u64)>> = cols
            .into_iter()
            .enumerate()
            .filter(|(c, _)| col_alive[*c] && col_count[*c] > 0)
            .map(|(_, col)| col.into_iter().filter(|e| row_alive[e.0]).collect())
            .collect();
        core.sort_by_key(Vec::len);
        let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        for mut c in core {
            while let Some(&(low, v)) = c.last() {
                match pivots.get(&low) {
                    Some(pc) => {
                        let pv = pc.last().expect("pivot columns are nonempty").1;
                        let factor = v * inv_mod(pv, p) % p;
                        c = axpy_mod(&c, pc, p - factor, p);
                    }
                    None => {
                        pivots.insert(low, c);
                        break;
                    }
                }
            }
        }
        rank + pivots.len()
    }

    pub(crate) fn rank_dense_mod_p(&self, p: u32) -> usize {
        let p = p as u64;
        let mut a = vec![vec![0u64; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            a[r][c] = v.rem_euclid(p as i64) as u64;
        }
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, pr);
            let inv = inv_mod(a[rank][c], p);
            for v in a[rank][c..].iter_mut() {
                *v = *v * inv % p;
            }
            let pivot_row = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                        *x = (*x + (p - f) * y) % p;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Rank over the given ring (over the integers: rank over the rationals).
    pub fn rank_over(&self, ring: CoefficientRing) -> usize {
        match ring {
            CoefficientRing::PrimeField(p) => self.rank_mod_p(p),
            CoefficientRing::Integers => self.smith_normal_form().len(),
        }
    }

    /// Invariant factors `d1 | d2 | ... | dr`, one per unit of rank.
    ///
    /// Pivoting always picks a nonzero entry of least absolute value in the
    /// remaining block (lowest row, then lowest column, on ties).
    pub fn smith_normal_form(&self) -> Vec<BigUint> {
        smith_diagonal(self.to_dense())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

/// `x + f * y` over `F_p` for sorted sparse vectors.
fn axpy_mod(x: &[(usize, u64)], y: &[(usize, u64)], f: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, f * y[j].1 % p));
            j += 1;
        } else {
            let v = (x[i].1 + f * y[j].1) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

fn min_abs_position(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_position(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..n {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                // Pivot must divide the remaining block.
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&pivot)));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                }
            }
            let (pi, pj) = min_abs_position(&a, t).expect("block is nonzero");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    normalize_chain(diag.into_iter().map(|d| d.to_biguint().expect("absolute value")).collect())
}

/// Rewrites a list of positive integers as a divisibility chain with the
/// same product decomposition (gcd/lcm sweep).
pub fn normalize_chain(mut d: Vec<BigUint>) -> Vec<BigUint> {
    d.retain(|x| !x.is_zero());
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
