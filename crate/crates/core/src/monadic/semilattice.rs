//! Finite join-semilattices with a least element: the algebras over the
//! finite powerset monad.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest carrier stored as an explicit join table.
pub const MAX_ELEMENTS: usize = 4096;
/// Largest generating set accepted by [`Semilattice::free`].
pub const MAX_FREE_GENERATORS: usize = 12;

#[derive(Clone, PartialEq, Eq)]
pub struct Semilattice {
    labels: Vec<String>,
    /// Row-major `n x n` join table.
    join: Vec<u32>,
    bottom: usize,
}

impl fmt::Debug for Semilattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semilattice({} elements: {})", self.len(), self.labels.join(" "))
    }
}

impl Semilattice {
    /// Validates the table: idempotent, commutative, associative, with a
    /// least element.
    pub fn new(labels: Vec<String>, join: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSemilattice("empty carrier".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::SizeBound(format!("{n} elements (limit {MAX_ELEMENTS})")));
        }
        if join.len() != n || join.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSemilattice("join table is not square".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidSemilattice(format!("duplicate label `{dup}`")));
        }
        if join.iter().flatten().any(|&v| v >= n) {
            return Err(Error::InvalidSemilattice("join table entry out of range".into()));
        }
        let flat = join.iter().flatten().map(|&v| v as u32).collect();
        Self::from_flat(labels, flat)
    }

    fn from_flat(labels: Vec<String>, join: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        let at = |a: usize, b: usize| join[a * n + b] as usize;
        let bad = |msg: String| Err(Error::InvalidSemilattice(msg));
        for a in 0..n {
            if at(a, a) != a {
                return bad(format!("{} v {} is not {}", labels[a], labels[a], labels[a]));
            }
            for b in 0..n {
                if at(a, b) != at(b, a) {
                    return bad(format!("join of {} and {} is not commutative", labels[a], labels[b]));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return bad(format!(
                            "join is not associative on {}, {}, {}",
                            labels[a], labels[b], labels[c]
                        ));
                    }
                }
            }
        }
        let Some(bottom) = (0..n).find(|&z| (0..n).all(|a| at(z, a) == a)) else {
            return bad("no least element".into());
        };
        Ok(Semilattice { labels, join, bottom })
    }

    /// Skips the associativity check; for tables built from a known
    /// semilattice structure (closure systems, quotients).
    pub(crate) fn from_trusted(labels: Vec<String>, join: Vec<u32>, bottom: usize) -> Self {
        debug_assert_eq!(join.len(), labels.len() * labels.len());
        Semilattice { labels, join, bottom }
    }

    /// All subsets of `generators` under union, labelled `{a,b}`.
    pub fn free<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let k = generators.len();
        if k > MAX_FREE_GENERATORS {
            return Err(Error::SizeBound(format!(
                "free semilattice on {k} generators (limit {MAX_FREE_GENERATORS})"
            )));
        }
        let n = 1usize << k;
        let labels = (0..n)
            .map(|mask| {
                let parts: Vec<&str> =
                    (0..k).filter(|i| mask >> i & 1 == 1).map(|i| generators[i].as_ref()).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect::<Vec<_>>();
        let mut seen = std::collections::HashSet::new();
        if generators.iter().any(|g| !seen.insert(g.as_ref())) {
            return Err(Error::InvalidSemilattice("repeated generator".into()));
        }
        let join = (0..n * n).map(|i| ((i / n) | (i % n)) as u32).collect();
        Ok(Semilattice { labels, join, bottom: 0 })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::SizeBound(format!("chain of length {n}")));
        }
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        let join = (0..n * n).map(|i| (i / n).max(i % n) as u32).collect();
        Ok(Semilattice { labels, join, bottom: 0 })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.join(a, b) == b
    }

    /// Elements other than the bottom that are not the join of two strictly
    /// smaller elements. Every element is the join of those below it.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&a| a != self.bottom)
            .filter(|&a| {
                let below: Vec<usize> = (0..n).filter(|&b| b != a && self.leq(b, a)).collect();
                self.join_all(below.iter().copied()) != a
            })
            .collect()
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        let below_count: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| self.leq(b, a)).count()).collect();
        order.sort_by_key(|&a| below_count[a]);
        let mut h = vec![0; n];
        for &a in &order {
            for b in 0..n {
                if b != a && self.leq(b, a) {
                    h[a] = h[a].max(h[b] + 1);
                }
            }
        }
        h
    }

    /// Whether `map` (indexed by elements of `self`) preserves joins and the
    /// least element.
    pub fn is_homomorphism(&self, target: &Semilattice, map: &[usize]) -> bool {
        let n = self.len();
        map.len() == n
            && map.iter().all(|&v| v < target.len())
            && map[self.bottom] == target.bottom
            && (0..n).all(|a| (0..n).all(|b| map[self.join(a, b)] == target.join(map[a], map[b])))
    }

    /// Relabelled copy, elements ordered by height, then the number of
    /// elements below, then label.
    pub fn canonical(&self) -> Semilattice {
        let n = self.len();
        let h = self.heights();
        let below: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| self.leq(b, a)).count()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (h[a], below[a], &self.labels[a]).cmp(&(h[b], below[b], &self.labels[b])));
        self.permuted(&order)
    }

    /// `order[i]` is the old index of new element `i`.
    fn permuted(&self, order: &[usize]) -> Semilattice {
        let n = self.len();
        let mut new_index = vec![0; n];
        for (i, &old) in order.iter().enumerate() {
            new_index[old] = i;
        }
        let labels = order.iter().map(|&o| self.labels[o].clone()).collect();
        let mut join = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                join[i * n + j] = new_index[self.join(order[i], order[j])] as u32;
            }
        }
        Semilattice { labels, join, bottom: new_index[self.bottom] }
    }

    /// Same structure with labels replaced.
    pub fn relabelled(&self, labels: Vec<String>) -> Result<Semilattice> {
        if labels.len() != self.len() {
            return Err(Error::InvalidSemilattice("label count differs from carrier".into()));
        }
        Ok(Semilattice { labels, ..self.clone() })
    }

    /// Join table as nested rows, e.g. for serialization.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n).map(|a| (0..n).map(|b| self.join(a, b)).collect()).collect()
    }

    /// Every join-preserving map to `target` sending the bottom to the
    /// bottom, up to `limit` of them.
    pub fn homomorphisms(&self, target: &Semilattice, limit: usize) -> Vec<Vec<usize>> {
        let irr = self.join_irreducibles();
        let mut out = Vec::new();
        let mut images = vec![0usize; irr.len()];
        self.extend_homs(target, &irr, 0, &mut images, limit, &mut out);
        out
    }

    fn extend_homs(
        &self,
        target: &Semilattice,
        irr: &[usize],
        pos: usize,
        images: &mut Vec<usize>,
        limit: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if pos == irr.len() {
            if let Some(map) = self.extend_from_irreducibles(target, irr, images) {
                out.push(map);
            }
            return;
        }
        for t in 0..target.len() {
            // Order among irreducibles must be preserved.
            if (0..pos).any(|q| self.leq(irr[q], irr[pos]) && !target.leq(images[q], t)) {
                continue;
            }
            if (0..pos).any(|q| self.leq(irr[pos], irr[q]) && !target.leq(t, images[q])) {
                continue;
            }
            images[pos] = t;
            self.extend_homs(target, irr, pos + 1, images, limit, out);
        }
    }

    /// The join-extension of `images` on the irreducibles, if it is a
    /// homomorphism.
    fn extend_from_irreducibles(&self, target: &Semilattice, irr: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let map: Vec<usize> = (0..self.len())
            .map(|a| {
                target.join_all(irr.iter().zip(images).filter(|(&i, _)| self.leq(i, a)).map(|(_, &t)| t))
            })
            .collect();
        self.is_homomorphism(target, &map).then_some(map)
    }

    /// A join-preserving map determined by its values on `generators`
    /// (element indices); fails when no such homomorphism exists.
    pub fn hom_from_generators(&self, target: &Semilattice, assignments: &[(usize, usize)]) -> Result<Vec<usize>> {
        let n = self.len();
        let mut map: Vec<Option<usize>> = vec![None; n];
        map[self.bottom] = Some(target.bottom);
        for &(a, t) in assignments {
            match map[a] {
                Some(existing) if existing != t => {
                    return Err(Error::InvalidDiagram(format!("{} is assigned twice", self.labels[a])));
                }
                _ => map[a] = Some(t),
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..n {
                for b in 0..n {
                    if let (Some(x), Some(y)) = (map[a], map[b]) {
                        let ab = self.join(a, b);
                        let v = target.join(x, y);
                        match map[ab] {
                            None => {
                                map[ab] = Some(v);
                                changed = true;
                            }
                            Some(w) if w != v => {
                                return Err(Error::InvalidDiagram(format!(
                                    "assignment does not preserve the join {} v {}",
                                    self.labels[a], self.labels[b]
                                )));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        let map: Option<Vec<usize>> = map.into_iter().collect();
        let map = map.ok_or_else(|| Error::InvalidDiagram("assigned elements do not generate the source".into()))?;
        if !self.is_homomorphism(target, &map) {
            return Err(Error::InvalidDiagram("assignment does not extend to a homomorphism".into()));
        }
        Ok(map)
    }
}

/// Whether a join-preserving bijection `x -> y` exists.
///
/// Join-irreducibles must go to join-irreducibles; they are matched by
/// backtracking with height, down-set and up-set sizes as pruning
/// invariants, and each complete assignment is extended by joins and
/// checked.
pub fn iso_check(x: &Semilattice, y: &Semilattice) -> bool {
    find_isomorphism(x, y).is_some()
}

pub fn find_isomorphism(x: &Semilattice, y: &Semilattice) -> Option<Vec<usize>> {
    if x.len() != y.len() {
        return None;
    }
    let (sx, sy) = (signatures(x), signatures(y));
    let mut hx = sx.clone();
    let mut hy = sy.clone();
    hx.sort_unstable();
    hy.sort_unstable();
    if hx != hy {
        return None;
    }
    let ix = x.join_irreducibles();
    let iy = y.join_irreducibles();
    if ix.len() != iy.len() {
        return None;
    }
    let mut by_sig: HashMap<Signature, Vec<usize>> = HashMap::new();
    for &b in &iy {
        by_sig.entry(sy[b]).or_default().push(b);
    }
    let mut search = IsoSearch { x, y, ix: &ix, sx: &sx, sy: &sy, by_sig, images: vec![usize::MAX; ix.len()], used: vec![false; y.len()] };
    search.run(0)
}

/// Height, number of elements below, number of elements above.
type Signature = (usize, usize, usize);

fn signatures(s: &Semilattice) -> Vec<Signature> {
    let n = s.len();
    let h = s.heights();
    let mut below = vec![0; n];
    let mut above = vec![0; n];
    for a in 0..n {
        for b in 0..n {
            if s.leq(a, b) {
                below[b] += 1;
                above[a] += 1;
            }
        }
    }
    (0..n).map(|a| (h[a], below[a], above[a])).collect()
}

struct IsoSearch<'a> {
    x: &'a Semilattice,
    y: &'a Semilattice,
    ix: &'a [usize],
    sx: &'a [Signature],
    sy: &'a [Signature],
    by_sig: HashMap<Signature, Vec<usize>>,
    images: Vec<usize>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn run(&mut self, pos: usize) -> Option<Vec<usize>> {
        let (x, y) = (self.x, self.y);
        if pos == self.ix.len() {
            let map = x.extend_from_irreducibles(y, self.ix, &self.images)?;
            let mut hit = vec![false; y.len()];
            for &m in &map {
                if std::mem::replace(&mut hit[m], true) {
                    return None;
                }
            }
            return Some(map);
        }
        let a = self.ix[pos];
        let candidates = self.by_sig.get(&self.sx[a]).cloned().unwrap_or_default();
        for b in candidates {
            if self.used[b] {
                continue;
            }
            // Order and pairwise joins with earlier choices must match.
            let consistent = (0..pos).all(|q| {
                let (aq, bq) = (self.ix[q], self.images[q]);
                x.leq(aq, a) == y.leq(bq, b)
                    && x.leq(a, aq) == y.leq(b, bq)
                    && self.sx[x.join(aq, a)] == self.sy[y.join(bq, b)]
            });
            if !consistent {
                continue;
            }
            self.used[b] = true;
            self.images[pos] = b;
            if let Some(map) = self.run(pos + 1) {
                return Some(map);
            }
            self.used[b] = false;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Semilattice {
        // M3: bottom, three atoms, top.
        let labels: Vec<String> = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let mut t = vec![vec![0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                t[i][j] = if i == j {
                    i
                } else if i == 0 {
                    j
                } else if j == 0 {
                    i
                } else {
                    4
                };
            }
        }
        Semilattice::new(labels, t).unwrap()
    }

    #[test]
    fn free_examples() {
        assert_eq!(Semilattice::free::<&str>(&[]).unwrap().len(), 1);
        let a = Semilattice::free(&["a"]).unwrap();
        assert_eq!(a.labels(), &["{}".to_string(), "{a}".to_string()]);
        let ab = Semilattice::free(&["a", "b"]).unwrap();
        assert_eq!(ab.len(), 4);
        assert!(ab.leq(1, 3) && ab.leq(2, 3) && !ab.leq(1, 2));
        assert!(Semilattice::free(&["a"; 13]).is_err());
    }

    #[test]
    fn validation() {
        let l = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        // Not idempotent.
        assert!(Semilattice::new(l(&["0", "a"]), vec![vec![0, 1], vec![1, 0]]).is_err());
        // No least element.
        assert!(Semilattice::new(l(&["a", "b", "c"]), vec![vec![0, 2, 2], vec![2, 1, 2], vec![2, 2, 2]]).is_err());
        assert!(Semilattice::new(l(&["0", "a"]), vec![vec![0, 1], vec![1, 1]]).is_ok());
    }

    #[test]
    fn irreducibles_and_heights() {
        let ab = Semilattice::free(&["a", "b"]).unwrap();
        assert_eq!(ab.join_irreducibles(), vec![1, 2]);
        assert_eq!(ab.heights(), vec![0, 1, 1, 2]);
        assert_eq!(diamond().join_irreducibles(), vec![1, 2, 3]);
        assert_eq!(Semilattice::chain(4).unwrap().join_irreducibles(), vec![1, 2, 3]);
    }

    #[test]
    fn isomorphisms() {
        let ab = Semilattice::free(&["a", "b"]).unwrap();
        let xy = Semilattice::free(&["x", "y"]).unwrap();
        assert!(iso_check(&ab, &xy));
        assert!(iso_check(&ab, &ab.canonical()));
        assert!(!iso_check(&ab, &Semilattice::chain(4).unwrap()));
        assert!(!iso_check(&ab, &Semilattice::chain(3).unwrap()));
        let d = diamond();
        let shuffled = d.permuted(&[4, 2, 0, 3, 1]);
        assert!(iso_check(&d, &shuffled));
    }

    #[test]
    fn homs_from_chain() {
        let c2 = Semilattice::chain(2).unwrap();
        let ab = Semilattice::free(&["a", "b"]).unwrap();
        assert_eq!(c2.homomorphisms(&ab, 100).len(), 4);
        // Diamond to a 2-chain: the zero map, or at least two atoms go up.
        let homs = diamond().homomorphisms(&c2, 100);
        assert!(homs.iter().all(|m| diamond().is_homomorphism(&c2, m)));
        assert_eq!(homs.len(), 5);
    }

    #[test]
    fn homs_from_generators() {
        let ab = Semilattice::free(&["a", "b"]).unwrap();
        let c3 = Semilattice::chain(3).unwrap();
        let m = ab.hom_from_generators(&c3, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!(m, vec![0, 1, 2, 2]);
        assert!(ab.hom_from_generators(&c3, &[(1, 1)]).is_err());
    }
}
