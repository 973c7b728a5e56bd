use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::normalize_chain;

/// One degree of a finitely generated graded abelian group:
/// `Z^free_rank + Z/t1 + ... + Z/tk` with `t1 | t2 | ... | tk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupEntry {
    pub degree: usize,
    pub free_rank: usize,
    #[serde(serialize_with = "ser_torsion", deserialize_with = "de_torsion")]
    pub torsion: Vec<BigUint>,
}

fn ser_torsion<S: Serializer>(t: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for x in t {
        match x.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

fn de_torsion<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        Small(u64),
        Big(String),
    }
    let raw = Vec::<Num>::deserialize(d)?;
    raw.into_iter()
        .map(|n| match n {
            Num::Small(v) => Ok(BigUint::from(v)),
            Num::Big(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

impl GroupEntry {
    /// Normalizes torsion to a divisibility chain and drops trivial factors.
    pub fn new(degree: usize, free_rank: usize, torsion: Vec<BigUint>) -> Self {
        let torsion = normalize_chain(torsion).into_iter().filter(|t| !t.is_one()).collect();
        GroupEntry { degree, free_rank, torsion }
    }

    pub fn zero(degree: usize) -> Self {
        GroupEntry { degree, free_rank: 0, torsion: Vec::new() }
    }

    /// `r` copies of `Z/p` (an `F_p`-vector space of dimension `r`).
    pub fn elementary(degree: usize, p: u32, r: usize) -> Self {
        GroupEntry { degree, free_rank: 0, torsion: vec![BigUint::from(p); r] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|t| t.to_u64().unwrap_or(u64::MAX)).collect()
    }

    /// Number of torsion summands divisible by `p`.
    pub fn p_torsion_count(&self, p: u32) -> usize {
        let p = BigUint::from(p);
        self.torsion.iter().filter(|t| t.is_multiple_of(&p)).count()
    }

    /// Prime-power decomposition of the torsion, e.g. `Z/12 = Z/4 + Z/3`.
    pub fn primary_decomposition(&self) -> Vec<(BigUint, u32)> {
        let mut out = Vec::new();
        for t in &self.torsion {
            let mut n = t.clone();
            let mut q = BigUint::from(2u32);
            while &q * &q <= n {
                let mut e = 0;
                while (&n % &q).is_zero() {
                    n /= &q;
                    e += 1;
                }
                if e > 0 {
                    out.push((q.clone(), e));
                }
                q += 1u32;
            }
            if n > BigUint::one() {
                out.push((n, 1));
            }
        }
        out.sort();
        out
    }

    pub fn primary_string(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for (p, e) in self.primary_decomposition() {
            parts.push(if e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for GroupEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{run}") });
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Per-degree list of [`GroupEntry`], degree `i` at index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedAbelianGroup {
    entries: Vec<GroupEntry>,
}

impl GradedAbelianGroup {
    pub fn new(entries: Vec<GroupEntry>) -> Self {
        debug_assert!(entries.iter().enumerate().all(|(i, e)| e.degree == i));
        GradedAbelianGroup { entries }
    }

    /// Free groups with the given ranks.
    pub fn free(ranks: &[u64]) -> Self {
        GradedAbelianGroup::new(
            ranks.iter().enumerate().map(|(i, &r)| GroupEntry::new(i, r as usize, Vec::new())).collect(),
        )
    }

    pub fn entries(&self) -> &[GroupEntry] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Option<&GroupEntry> {
        self.entries.get(n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncated(&self, len: usize) -> Self {
        GradedAbelianGroup { entries: self.entries.iter().take(len).cloned().collect() }
    }

    pub fn free_ranks(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.free_rank as u64).collect()
    }

    /// Dimensions of `H_n(-; F_p)` by the universal coefficient theorem:
    /// free rank plus `p`-divisible torsion in degrees `n` and `n - 1`.
    pub fn mod_p_dimensions(&self, p: u32) -> Vec<u64> {
        (0..self.entries.len())
            .map(|n| {
                let e = &self.entries[n];
                let below = if n > 0 { self.entries[n - 1].p_torsion_count(p) } else { 0 };
                (e.free_rank + e.p_torsion_count(p) + below) as u64
            })
            .collect()
    }

    /// Total dimension when every summand is `Z/p` or free (field case).
    pub fn dimensions(&self) -> Vec<u64> {
        self.entries.iter().map(|e| (e.free_rank + e.torsion.len()) as u64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn normalizes_and_displays() {
        let e = GroupEntry::new(3, 1, big(&[6, 1, 4]));
        assert_eq!(e.torsion_u64(), vec![2, 12]);
        assert_eq!(e.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(e.primary_string(), "Z + Z/2 + Z/2^2 + Z/3");
        assert_eq!(GroupEntry::elementary(0, 2, 2).to_string(), "(Z/2)^2");
        assert_eq!(GroupEntry::zero(4).to_string(), "0");
    }

    #[test]
    fn universal_coefficients() {
        let g = GradedAbelianGroup::new(vec![
            GroupEntry::new(0, 1, vec![]),
            GroupEntry::new(1, 0, big(&[4])),
            GroupEntry::new(2, 0, vec![]),
        ]);
        assert_eq!(g.mod_p_dimensions(2), vec![1, 1, 1]);
        assert_eq!(g.mod_p_dimensions(3), vec![1, 0, 0]);
    }

    #[test]
    fn json_rows() {
        let g = GradedAbelianGroup::new(vec![GroupEntry::new(0, 1, vec![]), GroupEntry::new(1, 0, big(&[4]))]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"[{"degree":0,"freeRank":1,"torsion":[]},{"degree":1,"freeRank":0,"torsion":[4]}]"#);
        assert_eq!(serde_json::from_str::<GradedAbelianGroup>(&s).unwrap(), g);
    }
}
