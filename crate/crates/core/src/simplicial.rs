//! Finite simplicial sets described by their nondegenerate simplices.
//!
//! Every simplex is written uniquely as `s^* tau`: a nondegenerate simplex
//! `tau` of dimension `m` pulled back along a surjection `[k] -> [m]`
//! (Eilenberg-Zilber). Faces of nondegenerate simplices are supplied in the
//! same form, which is enough to compute every face of every simplex.

use crate::error::{Error, Result};

/// A `k`-simplex: nondegenerate `base` of dimension `base_dim`, pulled back
/// along the nondecreasing surjection `surjection: [k] -> [base_dim]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub base_dim: usize,
    pub base: usize,
    pub surjection: Vec<usize>,
}

impl Simplex {
    pub fn nondegenerate(dim: usize, index: usize) -> Self {
        Simplex { base_dim: dim, base: index, surjection: (0..=dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.surjection.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.dim() > self.base_dim
    }

    /// Whether this simplex lies in the image of the degeneracy `s_j`.
    pub fn in_image_of_degeneracy(&self, j: usize) -> bool {
        self.surjection[j] == self.surjection[j + 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    name: String,
    /// Number of nondegenerate simplices in each dimension.
    counts: Vec<usize>,
    /// `faces[m][t][j]` is `d_j` of the `t`-th nondegenerate `m`-simplex.
    faces: Vec<Vec<Vec<Simplex>>>,
}

fn is_surjection(s: &[usize], target: usize) -> bool {
    !s.is_empty() && s[0] == 0 && *s.last().unwrap() == target && s.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

impl FiniteSimplicialSet {
    /// `faces[m][t]` must list the `m + 1` faces of each nondegenerate
    /// `m`-simplex (`faces[0]` holds empty lists for the vertices).
    pub fn new(name: impl Into<String>, counts: Vec<usize>, faces: Vec<Vec<Vec<Simplex>>>) -> Result<Self> {
        let name = name.into();
        let label = name.clone();
        let bad = move |msg: String| Error::Precondition(format!("simplicial set `{label}`: {msg}"));
        if counts.len() != faces.len() {
            return Err(bad("face table does not cover every dimension".into()));
        }
        for (m, per_dim) in faces.iter().enumerate() {
            if per_dim.len() != counts[m] {
                return Err(bad(format!("{} face lists for {} simplices in dimension {m}", per_dim.len(), counts[m])));
            }
            for fs in per_dim {
                let expected = if m == 0 { 0 } else { m + 1 };
                if fs.len() != expected {
                    return Err(bad(format!("dimension-{m} simplex needs {expected} faces")));
                }
                for f in fs {
                    if f.dim() + 1 != m
                        || f.base_dim >= counts.len()
                        || f.base >= counts[f.base_dim]
                        || !is_surjection(&f.surjection, f.base_dim)
                    {
                        return Err(bad(format!("face {f:?} of a dimension-{m} simplex is not a listed simplex")));
                    }
                }
            }
        }
        let set = FiniteSimplicialSet { name, counts, faces };
        for k in 2..=set.dimension() {
            for x in set.simplices(k) {
                for j in 1..=k {
                    for i in 0..j {
                        if set.face(&set.face(&x, j), i) != set.face(&set.face(&x, i), j - 1) {
                            return Err(bad(format!("simplicial identity d_{i} d_{j} fails on {x:?}")));
                        }
                    }
                }
            }
        }
        Ok(set)
    }

    pub fn point() -> Self {
        FiniteSimplicialSet::new("point", vec![1], vec![vec![vec![]]]).expect("valid")
    }

    /// `Delta[1]`: two vertices joined by one edge.
    pub fn interval() -> Self {
        FiniteSimplicialSet::new(
            "interval",
            vec![2, 1],
            vec![vec![vec![], vec![]], vec![vec![Simplex::nondegenerate(0, 1), Simplex::nondegenerate(0, 0)]]],
        )
        .expect("valid")
    }

    /// One vertex and one edge glued at both ends.
    pub fn circle_standard() -> Self {
        let v = Simplex::nondegenerate(0, 0);
        FiniteSimplicialSet::new("circle", vec![1, 1], vec![vec![vec![]], vec![vec![v.clone(), v]]])
            .expect("valid")
    }

    /// A cycle of `v` vertices and `v` edges, edge `i` running from vertex `i`
    /// to vertex `i + 1 mod v`.
    pub fn circle_subdivided(v: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::Precondition("a subdivided circle needs at least one vertex".into()));
        }
        let edges = (0..v)
            .map(|i| vec![Simplex::nondegenerate(0, (i + 1) % v), Simplex::nondegenerate(0, i)])
            .collect();
        FiniteSimplicialSet::new(format!("circle_{v}"), vec![v, v], vec![vec![vec![]; v], edges])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Top dimension carrying a nondegenerate simplex.
    pub fn dimension(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    pub fn nondegenerate_count(&self, m: usize) -> usize {
        self.counts.get(m).copied().unwrap_or(0)
    }

    /// All `k`-simplices, degenerate ones included, ordered by base dimension,
    /// base index, then surjection in decreasing lexicographic order.
    pub fn simplices(&self, k: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for m in 0..=k.min(self.counts.len() - 1) {
            let surjections = surjections(k, m);
            for t in 0..self.counts[m] {
                for s in &surjections {
                    out.push(Simplex { base_dim: m, base: t, surjection: s.clone() });
                }
            }
        }
        out
    }

    /// Face `d_i` of an arbitrary simplex.
    pub fn face(&self, x: &Simplex, i: usize) -> Simplex {
        let k = x.dim();
        assert!(k >= 1 && i <= k, "face d_{i} of a {k}-simplex");
        let mut s: Vec<usize> = x.surjection.clone();
        let removed = s.remove(i);
        if s.contains(&removed) {
            return Simplex { base_dim: x.base_dim, base: x.base, surjection: s };
        }
        // d_i s = s' d_removed: the face falls on the base simplex.
        let lowered: Vec<usize> = s.iter().map(|&v| if v > removed { v - 1 } else { v }).collect();
        let f = &self.faces[x.base_dim][x.base][removed];
        Simplex {
            base_dim: f.base_dim,
            base: f.base,
            surjection: lowered.iter().map(|&v| f.surjection[v]).collect(),
        }
    }
}

/// Nondecreasing surjections `[k] -> [m]`, lexicographically decreasing.
fn surjections(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == k + 1 {
            if *cur.last().unwrap() == m {
                out.push(cur.clone());
            }
            return;
        }
        let last = cur[pos - 1];
        // Remaining positions must still be able to reach m.
        for next in [last + 1, last] {
            if next > m || m - next > k - pos {
                continue;
            }
            cur.push(next);
            go(pos + 1, k, m, cur, out);
            cur.pop();
        }
    }
    if m > k {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(1, k, m, &mut vec![0], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 2).len(), 6);
        assert_eq!(surjections(2, 2), vec![vec![0, 1, 2]]);
        assert_eq!(surjections(2, 1), vec![vec![0, 1, 1], vec![0, 0, 1]]);
    }

    #[test]
    fn circle_has_k_plus_one_simplices() {
        let c = FiniteSimplicialSet::circle_standard();
        for k in 0..6 {
            assert_eq!(c.simplices(k).len(), k + 1);
        }
        let c4 = FiniteSimplicialSet::circle_subdivided(4).unwrap();
        assert_eq!(c4.simplices(3).len(), 4 + 4 * 3);
    }

    #[test]
    fn faces_of_the_circle_merge_neighbours() {
        let c = FiniteSimplicialSet::circle_standard();
        let xs = c.simplices(2);
        // [base, e1, e2]; d_0 sends e1 to the base, d_2 sends e2 to the base.
        let idx = |k: usize, s: &Simplex| c.simplices(k).iter().position(|t| t == s).unwrap();
        let d0: Vec<_> = xs.iter().map(|x| idx(1, &c.face(x, 0))).collect();
        let d1: Vec<_> = xs.iter().map(|x| idx(1, &c.face(x, 1))).collect();
        let d2: Vec<_> = xs.iter().map(|x| idx(1, &c.face(x, 2))).collect();
        assert_eq!(d0, vec![0, 0, 1]);
        assert_eq!(d1, vec![0, 1, 1]);
        assert_eq!(d2, vec![0, 1, 0]);
    }

    #[test]
    fn simplicial_identities_on_generated_simplices() {
        for s in [
            FiniteSimplicialSet::circle_standard(),
            FiniteSimplicialSet::circle_subdivided(3).unwrap(),
            FiniteSimplicialSet::interval(),
        ] {
            for k in 2..6 {
                for x in s.simplices(k) {
                    for j in 1..=k {
                        for i in 0..j {
                            assert_eq!(s.face(&s.face(&x, j), i), s.face(&s.face(&x, i), j - 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_face_data_rejected() {
        let bad = FiniteSimplicialSet::new(
            "bad",
            vec![1, 1],
            vec![vec![vec![]], vec![vec![Simplex::nondegenerate(0, 3), Simplex::nondegenerate(0, 0)]]],
        );
        assert!(bad.is_err());
        assert!(FiniteSimplicialSet::circle_subdivided(0).is_err());
    }
}
