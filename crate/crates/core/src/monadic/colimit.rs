//! Colimits and tensors of semilattices, computed twice: once by the
//! reflexive coequalizer of free algebras, once directly as a quotient of
//! the coproduct.

use std::collections::HashMap;

use super::semilattice::{Semilattice, MAX_ELEMENTS};
use crate::error::{Error, Result};

/// Largest carrier whose subsets are enumerated literally.
pub const MAX_LITERAL_CARRIER: usize = 16;
/// Largest underlying-set colimit (generators of the free algebra).
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    /// `map[x]` is the image of element `x` of the source.
    pub map: Vec<usize>,
}

/// A diagram of semilattices and homomorphisms over a finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDiagram {
    objects: Vec<Semilattice>,
    arrows: Vec<Arrow>,
}

impl AlgebraDiagram {
    pub fn new(objects: Vec<Semilattice>, arrows: Vec<Arrow>) -> Result<Self> {
        for (k, a) in arrows.iter().enumerate() {
            if a.source >= objects.len() || a.target >= objects.len() {
                return Err(Error::InvalidDiagram(format!("arrow {k} joins a missing object")));
            }
            if !objects[a.source].is_homomorphism(&objects[a.target], &a.map) {
                return Err(Error::InvalidDiagram(format!(
                    "arrow {k} ({} -> {}) does not preserve joins and the least element",
                    a.source, a.target
                )));
            }
        }
        Ok(AlgebraDiagram { objects, arrows })
    }

    /// `n` copies of `x` and no arrows.
    pub fn discrete(x: &Semilattice, n: usize) -> Self {
        AlgebraDiagram { objects: vec![x.clone(); n], arrows: Vec::new() }
    }

    pub fn objects(&self) -> &[Semilattice] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    /// Returns false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u32;
        true
    }
}

/// A parallel pair `E(source) => E(generators)` of free algebra maps,
/// given on the generators of the source, with the common section.
#[derive(Debug, Clone)]
pub struct CoequalizerPair {
    /// Generators of the target free algebra.
    pub generators: Vec<String>,
    /// Images of each source generator under the first map (a subset of
    /// `generators`, as a bit mask).
    pub left: Vec<u64>,
    /// Images under the second map.
    pub right: Vec<u64>,
    /// `section[y]`: source generator hit by the section on generator `y`.
    pub section: Vec<usize>,
}

impl CoequalizerPair {
    fn extend(images: &[u64], items: impl IntoIterator<Item = usize>) -> u64 {
        items.into_iter().fold(0, |acc, s| acc | images[s])
    }

    /// Checks `left . h = id` and `right . h = id` on the empty set, every
    /// singleton and every pair of generators. Both sides are free algebra
    /// maps, so singletons already decide it; the rest is a sanity check.
    pub fn is_reflexive(&self) -> bool {
        let n = self.generators.len();
        let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
        subsets.extend((0..n).map(|y| vec![y]));
        for a in 0..n {
            for b in a + 1..n {
                subsets.push(vec![a, b]);
            }
        }
        subsets.iter().all(|ys| {
            let target = ys.iter().fold(0u64, |acc, &y| acc | 1 << y);
            let h: Vec<usize> = ys.iter().map(|&y| self.section[y]).collect();
            Self::extend(&self.left, h.iter().copied()) == target && Self::extend(&self.right, h.iter().copied()) == target
        })
    }

    /// The quotient of the free algebra on `generators` by the congruence
    /// generated by `left(s) ~ right(s)`.
    pub fn coequalizer(&self) -> Result<Semilattice> {
        let closure = Closure::new(self.generators.len(), &self.left, &self.right);
        closure.lattice(&self.generators)
    }
}

/// Closure operator of the implication system `left(s) <=> right(s)`. The
/// closed subsets, under closure of the union, form the quotient of the
/// free semilattice by the generated congruence.
struct Closure {
    /// Single-premise rules: `y` in `U` forces `forced[y]` into `U`.
    forced: Vec<u64>,
    /// `(premise, conclusion)` with a minimal premise per conclusion bit.
    rules: Vec<(u64, u64)>,
}

impl Closure {
    fn new(n: usize, left: &[u64], right: &[u64]) -> Self {
        let mut forced = vec![0u64; n];
        let mut premises: Vec<Vec<u64>> = vec![Vec::new(); n];
        let mut add = |p: u64, c: u64| {
            let extra = c & !p;
            if extra == 0 {
                return;
            }
            if p.count_ones() == 1 {
                forced[p.trailing_zeros() as usize] |= extra;
            } else {
                for y in (0..n).filter(|y| extra >> y & 1 == 1) {
                    premises[y].push(p);
                }
            }
        };
        for (&l, &r) in left.iter().zip(right) {
            add(l, r);
            add(r, l);
        }
        let mut rules = Vec::new();
        for (y, mut ps) in premises.into_iter().enumerate() {
            ps.sort_by_key(|p| (p.count_ones(), *p));
            ps.dedup();
            let mut kept: Vec<u64> = Vec::new();
            for p in ps {
                if !kept.iter().any(|&k| k & p == k) {
                    kept.push(p);
                }
            }
            rules.extend(kept.into_iter().map(|p| (p, 1u64 << y)));
        }
        Closure { forced, rules }
    }

    fn close(&self, mut u: u64) -> u64 {
        loop {
            let before = u;
            let mut pending = u;
            while pending != 0 {
                let y = pending.trailing_zeros() as usize;
                pending &= pending - 1;
                let new = self.forced[y] & !u;
                u |= new;
                pending |= new;
            }
            for &(p, c) in &self.rules {
                if p & u == p {
                    u |= c;
                }
            }
            if u == before {
                return u;
            }
        }
    }

    fn lattice(&self, generators: &[String]) -> Result<Semilattice> {
        let n = generators.len();
        let bottom = self.close(0);
        let mut index: HashMap<u64, usize> = HashMap::from([(bottom, 0)]);
        let mut sets = vec![bottom];
        let mut i = 0;
        while i < sets.len() {
            let c = sets[i];
            for y in 0..n {
                if c >> y & 1 == 0 {
                    let d = self.close(c | 1 << y);
                    if !index.contains_key(&d) {
                        if sets.len() == MAX_ELEMENTS {
                            return Err(Error::SizeBound(format!("coequalizer above {MAX_ELEMENTS} elements")));
                        }
                        index.insert(d, sets.len());
                        sets.push(d);
                    }
                }
            }
            i += 1;
        }
        let m = sets.len();
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in a..m {
                let u = sets[a] | sets[b];
                let j = index.get(&u).copied().unwrap_or_else(|| index[&self.close(u)]) as u32;
                join[a * m + b] = j;
                join[b * m + a] = j;
            }
        }
        let labels = sets
            .iter()
            .map(|&s| {
                let parts: Vec<&str> = (0..n).filter(|y| s >> y & 1 == 1).map(|y| generators[y].as_str()).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        Ok(Semilattice::from_trusted(labels, join, 0).canonical())
    }
}

fn literal_bound(x: &Semilattice) -> Result<()> {
    if x.len() > MAX_LITERAL_CARRIER {
        return Err(Error::SizeBound(format!(
            "carrier of {} elements; subsets are enumerated up to {MAX_LITERAL_CARRIER}",
            x.len()
        )));
    }
    Ok(())
}

/// The pair `E(colim E R_i) => E(colim R_i)` for a diagram: the first map
/// applies the structure maps `E R_i -> R_i`, the second is the
/// multiplication after the comparison `colim E R_i -> E(colim R_i)`.
pub fn colimit_coequalizer_pair(d: &AlgebraDiagram) -> Result<CoequalizerPair> {
    for x in &d.objects {
        literal_bound(x)?;
    }
    // colim R_i in sets.
    let offsets: Vec<usize> = d
        .objects
        .iter()
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += x.len();
            Some(o)
        })
        .collect();
    let total: usize = d.objects.iter().map(Semilattice::len).sum();
    let mut uf = UnionFind::new(total);
    for a in &d.arrows {
        for (x, &fx) in a.map.iter().enumerate() {
            uf.union(offsets[a.source] + x, offsets[a.target] + fx);
        }
    }
    let mut class_of = vec![0usize; total];
    let mut generators = Vec::new();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (i, x) in d.objects.iter().enumerate() {
        for e in 0..x.len() {
            let root = uf.find(offsets[i] + e);
            let next = seen.len();
            let c = *seen.entry(root).or_insert(next);
            if c == generators.len() {
                generators.push(format!("{i}.{}", x.label(e)));
            }
            class_of[offsets[i] + e] = c;
        }
    }
    if generators.len() > MAX_GENERATORS {
        return Err(Error::SizeBound(format!(
            "underlying colimit has {} elements (limit {MAX_GENERATORS})",
            generators.len()
        )));
    }
    // colim E R_i in sets: nodes (i, S) with S a subset of R_i.
    let sub_offsets: Vec<usize> = d
        .objects
        .iter()
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += 1usize << x.len();
            Some(o)
        })
        .collect();
    let sub_total: usize = d.objects.iter().map(|x| 1usize << x.len()).sum();
    let mut suf = UnionFind::new(sub_total);
    for a in &d.arrows {
        let n = d.objects[a.source].len();
        for s in 0..1usize << n {
            let image = (0..n).filter(|x| s >> x & 1 == 1).fold(0usize, |acc, x| acc | 1 << a.map[x]);
            suf.union(sub_offsets[a.source] + s, sub_offsets[a.target] + image);
        }
    }
    let mut node_class = vec![usize::MAX; sub_total];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, x) in d.objects.iter().enumerate() {
        let n = x.len();
        for s in 0..1usize << n {
            let members = (0..n).filter(|e| s >> e & 1 == 1);
            let l = 1u64 << class_of[offsets[i] + x.join_all(members.clone())];
            let r = members.fold(0u64, |acc, e| acc | 1 << class_of[offsets[i] + e]);
            let root = suf.find(sub_offsets[i] + s);
            if node_class[root] == usize::MAX {
                node_class[root] = left.len();
                left.push(l);
                right.push(r);
            } else if left[node_class[root]] != l || right[node_class[root]] != r {
                return Err(Error::InvalidDiagram("maps out of colim E R_i are not well defined".into()));
            }
            node_class[sub_offsets[i] + s] = node_class[root];
        }
    }
    // Section: [x] -> [(i, {x})], from the unit of the monad.
    let mut section = vec![usize::MAX; generators.len()];
    for (i, x) in d.objects.iter().enumerate() {
        for e in 0..x.len() {
            let target = node_class[suf.find(sub_offsets[i] + (1 << e))];
            let y = class_of[offsets[i] + e];
            if section[y] != usize::MAX && section[y] != target {
                return Err(Error::InvalidDiagram("unit section is not well defined".into()));
            }
            section[y] = target;
        }
    }
    Ok(CoequalizerPair { generators, left, right, section })
}

/// Colimit in semilattices as the coequalizer of free algebras.
pub fn colimit_via_coequalizer(d: &AlgebraDiagram) -> Result<Semilattice> {
    let pair = colimit_coequalizer_pair(d)?;
    if !pair.is_reflexive() {
        return Err(Error::InvalidDiagram("coequalizer pair is not reflexive".into()));
    }
    pair.coequalizer()
}

/// The pair `E(E X (x) A) => E(X (x) A)` for the tensor of `x` with an
/// `a`-point set.
pub fn tensor_coequalizer_pair(x: &Semilattice, a: usize) -> Result<CoequalizerPair> {
    literal_bound(x)?;
    let n = x.len();
    if n * a > MAX_GENERATORS {
        return Err(Error::SizeBound(format!("{n} x {a} generators (limit {MAX_GENERATORS})")));
    }
    let gen = |e: usize, j: usize| j * n + e;
    let generators = (0..a).flat_map(|j| (0..n).map(move |e| (j, e))).map(|(j, e)| format!("{}@{j}", x.label(e))).collect();
    let mut left = Vec::with_capacity(a << n);
    let mut right = Vec::with_capacity(a << n);
    for j in 0..a {
        for s in 0..1usize << n {
            let members = (0..n).filter(|e| s >> e & 1 == 1);
            left.push(1u64 << gen(x.join_all(members.clone()), j));
            right.push(members.fold(0u64, |acc, e| acc | 1 << gen(e, j)));
        }
    }
    let section = (0..a).flat_map(|j| (0..n).map(move |e| (j << n) + (1 << e))).collect();
    Ok(CoequalizerPair { generators, left, right, section })
}

/// `x (x) A` for a finite set `A` of size `a`, via the coequalizer.
pub fn tensor_via_coequalizer(x: &Semilattice, a: usize) -> Result<Semilattice> {
    let pair = tensor_coequalizer_pair(x, a)?;
    if !pair.is_reflexive() {
        return Err(Error::InvalidDiagram("coequalizer pair is not reflexive".into()));
    }
    pair.coequalizer()
}

/// Colimit as a quotient of the coproduct (the product of the carriers)
/// by congruence closure of `inj_i(x) ~ inj_j(f x)`.
pub fn colimit_direct(d: &AlgebraDiagram) -> Result<Semilattice> {
    let sizes: Vec<usize> = d.objects.iter().map(Semilattice::len).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s).filter(|&v| v <= MAX_ELEMENTS));
    let total = total.ok_or_else(|| Error::SizeBound(format!("coproduct above {MAX_ELEMENTS} elements")))?;
    let mut strides = vec![1usize; sizes.len()];
    for i in 1..sizes.len() {
        strides[i] = strides[i - 1] * sizes[i - 1];
    }
    let digits = |t: usize| -> Vec<usize> { sizes.iter().zip(&strides).map(|(&s, &st)| t / st % s).collect() };
    let tuples: Vec<Vec<usize>> = (0..total).map(digits).collect();
    let join = |a: usize, b: usize| -> usize {
        let (ta, tb) = (&tuples[a], &tuples[b]);
        (0..sizes.len()).map(|i| d.objects[i].join(ta[i], tb[i]) * strides[i]).sum()
    };
    let bottom_tuple: Vec<usize> = d.objects.iter().map(Semilattice::bottom).collect();
    let inj = |i: usize, x: usize| -> usize {
        bottom_tuple.iter().enumerate().map(|(k, &b)| if k == i { x } else { b } * strides[k]).sum()
    };
    let mut uf = UnionFind::new(total);
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for a in &d.arrows {
        for (x, &fx) in a.map.iter().enumerate() {
            pending.push((inj(a.source, x), inj(a.target, fx)));
        }
    }
    while let Some((a, b)) = pending.pop() {
        if uf.union(a, b) {
            for c in 0..total {
                let (ac, bc) = (join(a, c), join(b, c));
                if ac != bc {
                    pending.push((ac, bc));
                }
            }
        }
    }
    // Label each class by its largest element.
    let mut top: HashMap<usize, usize> = HashMap::new();
    for t in 0..total {
        let r = uf.find(t);
        let entry = top.entry(r).or_insert(t);
        *entry = join(*entry, t);
    }
    let mut roots: Vec<usize> = top.keys().copied().collect();
    roots.sort_unstable();
    let index: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let m = roots.len();
    let mut table = vec![0u32; m * m];
    for (i, &ri) in roots.iter().enumerate() {
        for (j, &rj) in roots.iter().enumerate() {
            table[i * m + j] = index[&uf.find(join(ri, rj))] as u32;
        }
    }
    let labels: Vec<String> = roots
        .iter()
        .map(|r| {
            let t = &tuples[top[r]];
            let parts: Vec<&str> = t.iter().enumerate().map(|(i, &e)| d.objects[i].label(e)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let bottom_index: usize = bottom_tuple.iter().zip(&strides).map(|(b, s)| b * s).sum();
    let bottom = index[&uf.find(bottom_index)];
    Ok(Semilattice::from_trusted(labels, table, bottom).canonical())
}
