//! Chain complexes of finitely generated free modules and their homology.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::{GradedAbelianGroup, GroupEntry};
use crate::matrix::SparseMatrix;
use crate::ring::CoefficientRing;

/// `C_0 <- C_1 <- ... <- C_N` with `d_n : C_n -> C_{n-1}`.
///
/// Only degrees `0..=N` are stored, so homology is reported for degrees
/// below `N`; asking for `H_N` is an error because `d_{N+1}` is unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    ring: CoefficientRing,
    ranks: Vec<usize>,
    /// `differentials[n]` is `d_n`; `d_0` is the zero map to nothing.
    differentials: Vec<SparseMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplex {
    /// `differentials[i]` is `d_{i+1}`, of shape `ranks[i] x ranks[i+1]`.
    pub fn new(ring: CoefficientRing, ranks: Vec<usize>, differentials: Vec<SparseMatrix>) -> Result<Self> {
        let labels = ranks.iter().enumerate().map(|(n, &r)| (0..r).map(|i| format!("e{n}_{i}")).collect()).collect();
        ChainComplex::with_labels(ring, ranks, differentials, labels)
    }

    pub fn with_labels(
        ring: CoefficientRing,
        ranks: Vec<usize>,
        differentials: Vec<SparseMatrix>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a complex needs at least degree 0".into()));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} differentials for {} degrees",
                differentials.len(),
                ranks.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[i] || d.cols() != ranks[i + 1] {
                return Err(Error::Shape(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    i + 1,
                    d.rows(),
                    d.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        if labels.len() != ranks.len() || labels.iter().zip(&ranks).any(|(l, &r)| l.len() != r) {
            return Err(Error::Shape("basis labels do not match ranks".into()));
        }
        let mut all = vec![SparseMatrix::zero(0, ranks[0])];
        all.extend(differentials.into_iter().map(|d| d.reduced(ring)));
        Ok(ChainComplex { ring, ranks, differentials: all, labels })
    }

    /// The complex with a single zero group in degree 0.
    pub fn empty(ring: CoefficientRing) -> Self {
        ChainComplex::new(ring, vec![0], Vec::new()).expect("valid shape")
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn truncation(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    /// `d_n`; `n = 0` gives the zero map out of `C_0`.
    pub fn differential(&self, n: usize) -> &SparseMatrix {
        &self.differentials[n]
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    /// True iff every composite `d_n d_{n+1}` vanishes over the ring.
    pub fn verify(&self) -> bool {
        (1..self.truncation()).all(|n| {
            self.differentials[n]
                .compose(&self.differentials[n + 1])
                .map(|m| m.is_zero_over(self.ring))
                .unwrap_or(false)
        })
    }

    /// Homology in degree `n < N`.
    pub fn homology(&self, n: usize) -> Result<GroupEntry> {
        if n >= self.truncation() {
            return Err(Error::TruncationBoundary { degree: n, truncation: self.truncation() });
        }
        match self.ring {
            CoefficientRing::PrimeField(p) => {
                let rank_out = self.differentials[n].rank_mod_p(p);
                let rank_in = self.differentials[n + 1].rank_mod_p(p);
                let dim = self.ranks[n] - rank_out - rank_in;
                Ok(GroupEntry::new(n, dim, Vec::new()))
            }
            CoefficientRing::Integers => {
                let rank_out = self.differentials[n].smith_normal_form().len();
                let incoming = self.differentials[n + 1].smith_normal_form();
                Ok(integral_entry(n, self.ranks[n], rank_out, incoming))
            }
        }
    }

    /// Homology in every degree below the truncation.
    pub fn homology_all(&self) -> GradedAbelianGroup {
        let top = self.truncation();
        match self.ring {
            CoefficientRing::PrimeField(p) => {
                let ranks: Vec<usize> = (0..=top).map(|n| self.differentials[n].rank_mod_p(p)).collect();
                GradedAbelianGroup::new(
                    (0..top)
                        .map(|n| GroupEntry::new(n, self.ranks[n] - ranks[n] - ranks[n + 1], Vec::new()))
                        .collect(),
                )
            }
            CoefficientRing::Integers => {
                let snfs: Vec<Vec<BigUint>> =
                    (0..=top).map(|n| self.differentials[n].smith_normal_form()).collect();
                GradedAbelianGroup::new(
                    (0..top)
                        .map(|n| integral_entry(n, self.ranks[n], snfs[n].len(), snfs[n + 1].clone()))
                        .collect(),
                )
            }
        }
    }

    /// Dimensions (field case) or free ranks (integers) below the truncation.
    pub fn homology_ranks(&self) -> Vec<u64> {
        self.homology_all().entries().iter().map(|e| e.free_rank as u64).collect()
    }

    /// Same complex with entries reduced mod `p`.
    pub fn reduce_mod(&self, p: u32) -> Result<ChainComplex> {
        let ring = CoefficientRing::prime_field(p)?;
        ChainComplex::with_labels(
            ring,
            self.ranks.clone(),
            self.differentials[1..].to_vec(),
            self.labels.clone(),
        )
    }

    /// Plain-text sparse exchange format:
    ///
    /// ```text
    /// ring F2
    /// ranks 1 0 1 1
    /// 3 0 0 1
    /// ```
    ///
    /// Each entry line is `n row col value`, an entry of `d_n`.
    pub fn to_exchange_format(&self) -> String {
        let mut out = String::new();
        writeln!(out, "ring {}", self.ring).unwrap();
        let ranks: Vec<String> = self.ranks.iter().map(usize::to_string).collect();
        writeln!(out, "ranks {}", ranks.join(" ")).unwrap();
        for (n, d) in self.differentials.iter().enumerate().skip(1) {
            let mut entries: Vec<_> = d.entries().collect();
            entries.sort_unstable();
            for (r, c, v) in entries {
                writeln!(out, "{n} {r} {c} {v}").unwrap();
            }
        }
        out
    }

    pub fn from_exchange_format(text: &str) -> Result<ChainComplex> {
        let mut ring = None;
        let mut ranks: Option<Vec<usize>> = None;
        let mut entries: Vec<Vec<(usize, usize, i64)>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("ring") => {
                    let r = words.next().ok_or_else(|| err("missing ring".into()))?;
                    ring = Some(r.parse::<CoefficientRing>().map_err(|e| err(e.to_string()))?);
                }
                Some("ranks") => {
                    let r: std::result::Result<Vec<usize>, _> = words.map(str::parse).collect();
                    let r = r.map_err(|e| err(format!("bad rank: {e}")))?;
                    entries = vec![Vec::new(); r.len()];
                    ranks = Some(r);
                }
                Some(first) => {
                    let ranks = ranks.as_ref().ok_or_else(|| err("entry before `ranks` header".into()))?;
                    let nums: std::result::Result<Vec<i64>, _> =
                        std::iter::once(first).chain(words).map(str::parse).collect();
                    let nums = nums.map_err(|e| err(format!("bad entry: {e}")))?;
                    let [n, r, c, v] = nums[..] else {
                        return Err(err("expected `n row col value`".into()));
                    };
                    let (n, r, c) = (n as usize, r as usize, c as usize);
                    if n == 0 || n >= ranks.len() || r >= ranks[n - 1] || c >= ranks[n] {
                        return Err(err(format!("entry ({n}, {r}, {c}) out of range")));
                    }
                    entries[n].push((r, c, v));
                }
                None => {}
            }
        }
        let ring = ring.ok_or(Error::Parse { line: 0, message: "missing `ring` header".into() })?;
        let ranks = ranks.ok_or(Error::Parse { line: 0, message: "missing `ranks` header".into() })?;
        let mut diffs = Vec::new();
        for n in 1..ranks.len() {
            diffs.push(SparseMatrix::from_triplets(ranks[n - 1], ranks[n], entries[n].iter().copied())?);
        }
        ChainComplex::new(ring, ranks, diffs)
    }
}

fn integral_entry(n: usize, rank: usize, rank_out: usize, incoming: Vec<BigUint>) -> GroupEntry {
    let free = rank - rank_out - incoming.len();
    let torsion = incoming.into_iter().filter(|d| !d.is_one()).collect();
    GroupEntry::new(n, free, torsion)
}
