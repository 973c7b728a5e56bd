//! Normalized bar constructions over free graded-commutative algebras.
//!
//! Each construction is first assembled as a [`SimplicialGradedModule`]
//! (one block per simplicial level `k` and internal degree `m`, with face
//! matrices between blocks) and then totalized: the chain complex in total
//! degree `n` is the sum of the blocks with `k + m = n`, and the differential
//! is `sum_i (-1)^i d_i`. The algebras carry no internal differential.
//!
//! Only nondegenerate tensor words are kept. A word is a list of monomial
//! ids; its label, e.g. `x2|x2^2`, joins the monomials with bars.

use std::collections::HashMap;

use crate::algebra::{FreeGca, MonomialTable};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::ring::CoefficientRing;
use crate::simplicial::FiniteSimplicialSet;

type Word = Vec<u32>;

/// Levelwise free graded module with face maps, normalized.
#[derive(Debug, Clone)]
pub struct SimplicialGradedModule {
    ring: CoefficientRing,
    max_degree: usize,
    /// `cells[k][m]`: basis words at level `k`, internal degree `m`.
    cells: Vec<Vec<Vec<String>>>,
    /// `faces[k][m][i]`: `d_i` from block `(k, m)` to block `(k - 1, m)`.
    faces: Vec<Vec<Vec<SparseMatrix>>>,
}

impl SimplicialGradedModule {
    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Rank of the block at level `k`, internal degree `m`.
    pub fn block_rank(&self, k: usize, m: usize) -> usize {
        self.cells.get(k).and_then(|l| l.get(m)).map_or(0, Vec::len)
    }

    pub fn labels(&self, k: usize, m: usize) -> &[String] {
        &self.cells[k][m]
    }

    /// `d_i` on the block `(k, m)`, `k >= 1`.
    pub fn face(&self, k: usize, m: usize, i: usize) -> &SparseMatrix {
        &self.faces[k][m][i]
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j` on every block.
    pub fn check_simplicial_identities(&self) -> bool {
        for k in 2..self.cells.len() {
            for m in 0..self.cells[k].len() {
                if self.block_rank(k, m) == 0 {
                    continue;
                }
                for j in 1..=k {
                    for i in 0..j {
                        let lhs = self.faces[k - 1][m][i].compose(&self.faces[k][m][j]);
                        let rhs = self.faces[k - 1][m][j - 1].compose(&self.faces[k][m][i]);
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) => {
                                if l.reduced(self.ring) != r.reduced(self.ring) {
                                    return false;
                                }
                            }
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    /// Total complex in degrees `0..=max_degree`.
    pub fn totalize(&self) -> Result<ChainComplex> {
        let n_max = self.max_degree;
        // offsets[n][k]: start of block (k, n - k) inside C_n.
        let mut offsets = vec![Vec::new(); n_max + 1];
        let mut ranks = vec![0usize; n_max + 1];
        let mut labels = vec![Vec::new(); n_max + 1];
        for n in 0..=n_max {
            for k in 0..=n {
                offsets[n].push(ranks[n]);
                let m = n - k;
                ranks[n] += self.block_rank(k, m);
                if self.block_rank(k, m) > 0 {
                    labels[n].extend(self.cells[k][m].iter().cloned());
                }
            }
        }
        let mut diffs = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut columns: Vec<Vec<(usize, i64)>> = Vec::with_capacity(ranks[n]);
            for k in 0..=n {
                let m = n - k;
                let size = self.block_rank(k, m);
                if size == 0 {
                    continue;
                }
                if k == 0 {
                    columns.extend(std::iter::repeat_with(Vec::new).take(size));
                    continue;
                }
                let row_offset = offsets[n - 1][k - 1];
                let mut block: Vec<Vec<(usize, i64)>> = vec![Vec::new(); size];
                for (i, face) in self.faces[k][m].iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    for (c, col) in block.iter_mut().enumerate() {
                        col.extend(face.column(c).iter().map(|&(r, v)| (r + row_offset, sign * v)));
                    }
                }
                columns.extend(block);
            }
            diffs.push(SparseMatrix::from_columns(ranks[n - 1], columns));
        }
        ChainComplex::with_labels(self.ring, ranks, diffs, labels)
    }
}

/// What a particular bar construction supplies to the generic assembler.
trait WordModel {
    fn ring(&self) -> CoefficientRing;
    fn words(&self, k: usize, m: usize) -> Vec<Word>;
    /// `d_i` of a basis word: `None` when it vanishes or is degenerate,
    /// otherwise the target word and whether the sign is positive.
    fn face(&self, k: usize, i: usize, word: &[u32]) -> Option<(Word, bool)>;
    fn label(&self, word: &[u32]) -> String;
}

fn assemble(model: &dyn WordModel, n_max: usize) -> SimplicialGradedModule {
    let ring = model.ring();
    let mut words: Vec<Vec<Vec<Word>>> = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        words.push((0..=n_max - k).map(|m| model.words(k, m)).collect());
    }
    let index: Vec<Vec<HashMap<&Word, usize>>> = words
        .iter()
        .map(|level| level.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w, i)).collect()).collect())
        .collect();
    let mut faces: Vec<Vec<Vec<SparseMatrix>>> = vec![Vec::new()];
    for k in 1..=n_max {
        let mut level = Vec::new();
        for m in 0..=n_max - k {
            let cols = &words[k][m];
            let rows = words[k - 1][m].len();
            let mut per_face = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let columns = cols
                    .iter()
                    .map(|w| match model.face(k, i, w) {
                        None => Vec::new(),
                        Some((target, positive)) => {
                            let r = *index[k - 1][m].get(&target).unwrap_or_else(|| {
                                panic!("face d_{i} of {} left the basis", model.label(w))
                            });
                            vec![(r, if positive { 1 } else { -1 })]
                        }
                    })
                    .collect();
                per_face.push(SparseMatrix::from_columns(rows, columns).reduced(ring));
            }
            level.push(per_face);
        }
        faces.push(level);
    }
    let cells = words
        .iter()
        .map(|level| level.iter().map(|ws| ws.iter().map(|w| model.label(w)).collect()).collect())
        .collect();
    SimplicialGradedModule { ring, max_degree: n_max, cells, faces }
}

/// Words of monomial ids, one per slot, with slot `s` drawn from
/// `tables[s]` in degrees at least `min_degree[s]`, of total degree `m`.
fn slot_words(tables: &[&MonomialTable], min_degree: &[usize], m: usize) -> Vec<Word> {
    fn go(
        slot: usize,
        budget: usize,
        tables: &[&MonomialTable],
        min_degree: &[usize],
        suffix_min: &[usize],
        cur: &mut Word,
        out: &mut Vec<Word>,
    ) {
        if slot == tables.len() {
            if budget == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = budget.saturating_sub(suffix_min[slot + 1]);
        for d in min_degree[slot]..=hi {
            for &id in tables[slot].by_degree.get(d).map(Vec::as_slice).unwrap_or(&[]) {
                cur.push(id);
                go(slot + 1, budget - d, tables, min_degree, suffix_min, cur, out);
                cur.pop();
            }
        }
    }
    let mut suffix_min = vec![0; tables.len() + 1];
    for s in (0..tables.len()).rev() {
        suffix_min[s] = suffix_min[s + 1] + min_degree[s];
    }
    if suffix_min[0] > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(0, m, tables, min_degree, &suffix_min, &mut Vec::new(), &mut out);
    out
}

fn check_degree(a: &FreeGca, n: usize) -> Result<()> {
    if n > a.truncation() {
        return Err(Error::TruncationExceeded { degree: n, truncation: a.truncation() });
    }
    if a.generators().iter().any(|g| g.degree == 0) {
        return Err(Error::Precondition("bar constructions need positive generator degrees".into()));
    }
    Ok(())
}

struct TwoSided {
    table: MonomialTable,
}

impl WordModel for TwoSided {
    fn ring(&self) -> CoefficientRing {
        self.table.algebra.ring()
    }

    fn words(&self, k: usize, m: usize) -> Vec<Word> {
        slot_words(&vec![&self.table; k], &vec![1; k], m)
    }

    fn face(&self, k: usize, i: usize, w: &[u32]) -> Option<(Word, bool)> {
        if i == 0 || i == k {
            return None;
        }
        let (p, positive) = self.table.product(w[i - 1], w[i])?;
        let mut out = Vec::with_capacity(k - 1);
        out.extend_from_slice(&w[..i - 1]);
        out.push(p);
        out.extend_from_slice(&w[i + 1..]);
        Some((out, positive))
    }

    fn label(&self, w: &[u32]) -> String {
        if w.is_empty() {
            return "[]".into();
        }
        format!("[{}]", w.iter().map(|&id| self.table.label(id)).collect::<Vec<_>>().join("|"))
    }
}

/// Sign convention of the wrap-around face of the cyclic bar construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CyclicFaceSign {
    /// Koszul sign of moving the last factor to the front.
    #[default]
    Koszul,
    /// No sign. Wrong away from characteristic 2; kept for mutation tests.
    Unsigned,
}

struct Cyclic {
    table: MonomialTable,
    sign: CyclicFaceSign,
}

impl WordModel for Cyclic {
    fn ring(&self) -> CoefficientRing {
        self.table.algebra.ring()
    }

    fn words(&self, k: usize, m: usize) -> Vec<Word> {
        let mut min = vec![1; k + 1];
        min[0] = 0;
        slot_words(&vec![&self.table; k + 1], &min, m)
    }

    fn face(&self, k: usize, i: usize, w: &[u32]) -> Option<(Word, bool)> {
        if i < k {
            let (p, positive) = self.table.product(w[i], w[i + 1])?;
            let mut out = Vec::with_capacity(k);
            out.extend_from_slice(&w[..i]);
            out.push(p);
            out.extend_from_slice(&w[i + 2..]);
            return Some((out, positive));
        }
        let last = w[k];
        let (p, mut positive) = self.table.product(last, w[0])?;
        if self.sign == CyclicFaceSign::Koszul && self.table.is_odd(last) {
            let odd_before = w[..k].iter().filter(|&&id| self.table.is_odd(id)).count();
            if odd_before % 2 == 1 {
                positive = !positive;
            }
        }
        let mut out = Vec::with_capacity(k);
        out.push(p);
        out.extend_from_slice(&w[1..k]);
        Some((out, positive))
    }

    fn label(&self, w: &[u32]) -> String {
        let parts: Vec<_> = w.iter().map(|&id| self.table.label(id)).collect();
        format!("{}[{}]", parts[0], parts[1..].join("|"))
    }
}

/// `B(A, A (x) H, A)` with `A (x) H` acting on both copies of `A` through
/// the projection that kills the generators of `H`.
struct Relative {
    outer: MonomialTable,
    middle: MonomialTable,
    projection: Vec<Option<u32>>,
}

impl WordModel for Relative {
    fn ring(&self) -> CoefficientRing {
        self.outer.algebra.ring()
    }

    fn words(&self, k: usize, m: usize) -> Vec<Word> {
        let mut tables = vec![&self.outer];
        tables.extend(std::iter::repeat(&self.middle).take(k));
        tables.push(&self.outer);
        let mut min = vec![1; k + 2];
        min[0] = 0;
        min[k + 1] = 0;
        slot_words(&tables, &min, m)
    }

    fn face(&self, k: usize, i: usize, w: &[u32]) -> Option<(Word, bool)> {
        let mut out = Vec::with_capacity(k + 1);
        if i == 0 {
            let r = self.projection[w[1] as usize]?;
            let (p, positive) = self.outer.product(w[0], r)?;
            out.push(p);
            out.extend_from_slice(&w[2..]);
            Some((out, positive))
        } else if i == k {
            let r = self.projection[w[k] as usize]?;
            let (p, positive) = self.outer.product(r, w[k + 1])?;
            out.extend_from_slice(&w[..k]);
            out.push(p);
            Some((out, positive))
        } else {
            let (p, positive) = self.middle.product(w[i], w[i + 1])?;
            out.extend_from_slice(&w[..i]);
            out.push(p);
            out.extend_from_slice(&w[i + 2..]);
            Some((out, positive))
        }
    }

    fn label(&self, w: &[u32]) -> String {
        let k = w.len() - 2;
        let mid: Vec<_> = w[1..=k].iter().map(|&id| self.middle.label(id)).collect();
        format!("{}[{}]{}", self.outer.label(w[0]), mid.join("|"), self.outer.label(w[k + 1]))
    }
}

/// Tensor of an algebra with a finite simplicial set: one tensor factor per
/// `k`-simplex, faces multiply the factors that a simplicial face map
/// identifies.
struct Loday<'a> {
    table: MonomialTable,
    set: &'a FiniteSimplicialSet,
    levels: Vec<LodayLevel>,
    min_degree: usize,
}

struct LodayLevel {
    /// Bit `j` set when the simplex is outside the image of `s_j`.
    escapes: Vec<u64>,
    /// `targets[i][p]`: position of `d_i` of simplex `p` one level down.
    targets: Vec<Vec<usize>>,
    /// Union of `escapes` over positions `p..`.
    suffix_escapes: Vec<u64>,
}

impl<'a> Loday<'a> {
    fn new(table: MonomialTable, set: &'a FiniteSimplicialSet, n_max: usize) -> Self {
        let simplices: Vec<_> = (0..=n_max).map(|k| set.simplices(k)).collect();
        let mut levels = Vec::with_capacity(n_max + 1);
        for k in 0..=n_max {
            let xs = &simplices[k];
            let escapes: Vec<u64> = xs
                .iter()
                .map(|x| (0..k).filter(|&j| !x.in_image_of_degeneracy(j)).fold(0u64, |acc, j| acc | 1 << j))
                .collect();
            let targets = if k == 0 {
                Vec::new()
            } else {
                let below: HashMap<_, usize> = simplices[k - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
                (0..=k).map(|i| xs.iter().map(|x| below[&set.face(x, i)]).collect()).collect()
            };
            let mut suffix_escapes = vec![0u64; xs.len() + 1];
            for p in (0..xs.len()).rev() {
                suffix_escapes[p] = suffix_escapes[p + 1] | escapes[p];
            }
            levels.push(LodayLevel { escapes, targets, suffix_escapes });
        }
        let min_degree = table.algebra.min_generator_degree().unwrap_or(usize::MAX);
        Loday { table, set, levels, min_degree }
    }

    fn full_mask(k: usize) -> u64 {
        if k == 0 {
            0
        } else {
            u64::MAX >> (64 - k)
        }
    }

    fn is_normalized(&self, k: usize, w: &[u32]) -> bool {
        let lvl = &self.levels[k];
        let covered = w
            .iter()
            .zip(&lvl.escapes)
            .filter(|(&id, _)| self.table.degree(id) > 0)
            .fold(0u64, |acc, (_, &e)| acc | e);
        covered == Self::full_mask(k)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(&self, k: usize, pos: usize, budget: usize, covered: u64, unit: u32, cur: &mut Word, out: &mut Vec<Word>) {
        let lvl = &self.levels[k];
        let full = Self::full_mask(k);
        let missing = full & !covered;
        if missing & !lvl.suffix_escapes[pos] != 0 {
            return;
        }
        if missing != 0 && budget < self.min_degree {
            return;
        }
        if pos == lvl.escapes.len() {
            if budget == 0 && missing == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in 0..=budget {
            let ids: &[u32] = if d == 0 { std::slice::from_ref(&unit) } else { self.table.by_degree.get(d).map_or(&[], Vec::as_slice) };
            for &id in ids {
                let covered = if d > 0 { covered | lvl.escapes[pos] } else { covered };
                cur.push(id);
                self.search(k, pos + 1, budget - d, covered, unit, cur, out);
                cur.pop();
            }
        }
    }
}

impl WordModel for Loday<'_> {
    fn ring(&self) -> CoefficientRing {
        self.table.algebra.ring()
    }

    fn words(&self, k: usize, m: usize) -> Vec<Word> {
        let unit = self.table.by_degree[0][0];
        let mut out = Vec::new();
        self.search(k, 0, m, 0, unit, &mut Vec::new(), &mut out);
        out
    }

    fn face(&self, k: usize, i: usize, w: &[u32]) -> Option<(Word, bool)> {
        let targets = &self.levels[k].targets[i];
        let width = self.levels[k - 1].escapes.len();
        let unit = self.table.by_degree[0][0];
        let mut out = vec![unit; width];
        let mut positive = true;
        // Koszul sign of regrouping the factors by target position.
        for p in 0..w.len() {
            if !self.table.is_odd(w[p]) {
                continue;
            }
            for q in p + 1..w.len() {
                if targets[q] < targets[p] && self.table.is_odd(w[q]) {
                    positive = !positive;
                }
            }
        }
        for (p, &id) in w.iter().enumerate() {
            let t = targets[p];
            let (prod, pos) = self.table.product(out[t], id)?;
            out[t] = prod;
            positive ^= !pos;
        }
        if !self.is_normalized(k - 1, &out) {
            return None;
        }
        Some((out, positive))
    }

    fn label(&self, w: &[u32]) -> String {
        let parts: Vec<_> = w.iter().map(|&id| self.table.label(id)).collect();
        format!("{}:{}", self.set.name(), parts.join("|"))
    }
}

/// `B(k, A, k)` as a simplicial graded module; its homology is `Tor_A(k, k)`.
pub fn two_sided_bar_simplicial(a: &FreeGca, n: usize) -> Result<SimplicialGradedModule> {
    check_degree(a, n)?;
    let model = TwoSided { table: MonomialTable::new(a, n)? };
    Ok(assemble(&model, n))
}

/// Normalized `B(k, A, k)` totalized through degree `n`.
pub fn two_sided_bar(a: &FreeGca, n: usize) -> Result<ChainComplex> {
    two_sided_bar_simplicial(a, n)?.totalize()
}

pub fn cyclic_bar_simplicial(a: &FreeGca, n: usize, sign: CyclicFaceSign) -> Result<SimplicialGradedModule> {
    check_degree(a, n)?;
    let model = Cyclic { table: MonomialTable::new(a, n)?, sign };
    Ok(assemble(&model, n))
}

/// Normalized cyclic bar construction `A (x) (IA)^k`; homology `HH_*(A)`.
pub fn cyclic_bar(a: &FreeGca, n: usize) -> Result<ChainComplex> {
    cyclic_bar_with(a, n, CyclicFaceSign::Koszul)
}

pub fn cyclic_bar_with(a: &FreeGca, n: usize, sign: CyclicFaceSign) -> Result<ChainComplex> {
    cyclic_bar_simplicial(a, n, sign)?.totalize()
}

pub fn tensor_with_simplicial_set_simplicial(
    a: &FreeGca,
    s: &FiniteSimplicialSet,
    n: usize,
) -> Result<SimplicialGradedModule> {
    check_degree(a, n)?;
    if s.dimension() > n {
        return Err(Error::SizeBound(format!(
            "simplicial set `{}` has dimension {} above the degree budget {n}",
            s.name(),
            s.dimension()
        )));
    }
    if n >= 64 {
        return Err(Error::SizeBound(format!("degree {n} exceeds the simplicial level limit 63")));
    }
    let model = Loday::new(MonomialTable::new(a, n)?, s, n);
    Ok(assemble(&model, n))
}

/// `S (x) A`: level `k` is `A` tensored once per `k`-simplex of `S`.
pub fn tensor_with_simplicial_set(a: &FreeGca, s: &FiniteSimplicialSet, n: usize) -> Result<ChainComplex> {
    tensor_with_simplicial_set_simplicial(a, s, n)?.totalize()
}

/// `B(A, A (x) H, A)` with the middle algebra acting through `A (x) H -> A`.
pub fn relative_bar(a: &FreeGca, h: &FreeGca, n: usize) -> Result<ChainComplex> {
    check_degree(a, n)?;
    check_degree(h, n)?;
    let ah = a.tensor(h)?;
    let outer = MonomialTable::new(a, n)?;
    let middle = MonomialTable::new(&ah, n)?;
    let split = a.generators().len();
    let outer_index: HashMap<&[u32], u32> =
        outer.monomials.iter().enumerate().map(|(i, m)| (m.exponents(), i as u32)).collect();
    let projection = middle
        .monomials
        .iter()
        .map(|m| {
            let (left, right) = m.exponents().split_at(split);
            if right.iter().all(|&e| e == 0) {
                outer_index.get(left).copied()
            } else {
                None
            }
        })
        .collect();
    let model = Relative { outer, middle, projection };
    assemble(&model, n).totalize()
}
