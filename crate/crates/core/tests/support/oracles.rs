//! Oracles shared by the hygiene tests and the acceptance run: Smith normal
//! form from determinantal divisors, and chain complexes assembled from
//! elementary pieces (so their homology is known) disguised by unimodular
//! changes of basis.

use num_integer::Integer;
use rand::Rng;
use thh_core::{ChainComplex, CoefficientRing, SparseMatrix};

pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Fraction-free Bareiss elimination; exact over the integers.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// Invariant factors from gcds of k x k minors.
pub fn invariant_factors(a: &[Vec<i64>]) -> Vec<u64> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut divisors = vec![1i128];
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect()).collect();
                g = g.gcd(&det(minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| (w[1] / w[0]) as u64).collect()
}

pub fn snf(m: &SparseMatrix) -> Vec<u64> {
    m.smith_normal_form().iter().map(|x| u64::try_from(x).unwrap()).collect()
}

pub fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let density = rng.gen_range(0.2..1.0);
    (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(density) { rng.gen_range(-9..=9) } else { 0 }).collect()).collect()
}

pub fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// A complex with known homology, hidden by random unimodular base changes.
pub struct Planted {
    pub complex: ChainComplex,
    pub free: Vec<usize>,
    /// Torsion orders in each degree below the top.
    pub torsion: Vec<Vec<u64>>,
}

/// A unimodular matrix and its inverse as products of elementary moves.
fn unimodular(n: usize, rng: &mut impl Rng) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut q = p.clone();
    if n < 2 {
        return (p, q);
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = rng.gen_range(-2..=2);
        // P <- E P adds c * row j to row i; Q <- Q E^{-1} subtracts c * column i from column j.
        for k in 0..n {
            p[i][k] += c * p[j][k];
        }
        for row in q.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (p, q)
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect()).collect()
}

pub fn planted(rng: &mut impl Rng, top: usize) -> Planted {
    // Piece (n, k): a generator in degree n mapping to k times one in degree n - 1.
    let mut pieces: Vec<(usize, i64)> = Vec::new();
    let mut free = vec![0; top + 1];
    let mut torsion = vec![Vec::new(); top];
    for n in 1..=top {
        for _ in 0..rng.gen_range(0..=2) {
            let k = rng.gen_range(1..=6);
            pieces.push((n, k));
            if k > 1 {
                torsion[n - 1].push(k as u64);
            }
        }
    }
    for f in free.iter_mut() {
        *f = rng.gen_range(0..=2);
    }
    // Basis per degree: free cells, then piece sources, then piece targets.
    let mut cells: Vec<Vec<(char, usize)>> = vec![Vec::new(); top + 1];
    for (n, f) in free.iter().enumerate() {
        cells[n].extend((0..*f).map(|i| ('f', i)));
    }
    for (idx, &(n, _)) in pieces.iter().enumerate() {
        cells[n].push(('s', idx));
        cells[n - 1].push(('t', idx));
    }
    for c in cells.iter_mut() {
        let perm = shuffled(c.len(), rng);
        *c = perm.into_iter().map(|i| c[i]).collect();
    }
    let ranks: Vec<usize> = cells.iter().map(Vec::len).collect();
    let changes: Vec<_> = ranks.iter().map(|&r| unimodular(r, rng)).collect();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let mut d = vec![vec![0i64; ranks[n]]; ranks[n - 1]];
        for (j, cell) in cells[n].iter().enumerate() {
            if let ('s', idx) = *cell {
                let i = cells[n - 1].iter().position(|&c| c == ('t', idx)).unwrap();
                d[i][j] = pieces[idx].1;
            }
        }
        // P_{n-1} d Q_n is again a differential with the same homology.
        let d = mul(&mul(&changes[n - 1].0, &d, ranks[n - 1]), &changes[n].1, ranks[n]);
        diffs.push(SparseMatrix::from_triplets(ranks[n - 1], ranks[n], d.iter().enumerate().flat_map(|(i, r)| {
            r.iter().enumerate().map(move |(j, &v)| (i, j, v))
        }))
        .unwrap());
    }
    Planted { complex: ChainComplex::new(CoefficientRing::Integers, ranks, diffs).unwrap(), free, torsion }
}

