//! Free graded-commutative algebras over a prime field or the integers.
//!
//! A [`FreeGca`] is a polynomial algebra on its even (or, in characteristic
//! two, any) generators tensored with an exterior algebra on its exterior
//! generators, cut off above a truncation degree. Products obey the Koszul
//! rule: moving a factor of degree `d` past one of degree `e` costs
//! `(-1)^(d*e)`.
//!
//! Monomials of a fixed degree are listed in lexicographically decreasing
//! order of their exponent vectors, so with generators `x, y` the degree-4
//! basis of `P{x2, y2}` is `x^2, xy, y^2`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::CoefficientRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Polynomial,
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn polynomial(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree, kind: GeneratorKind::Polynomial }
    }

    pub fn exterior(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree, kind: GeneratorKind::Exterior }
    }

    /// The kind forced by graded commutativity: polynomial in characteristic
    /// two, otherwise exterior exactly in odd degrees.
    pub fn graded(name: impl Into<String>, degree: usize, ring: CoefficientRing) -> Self {
        let kind = match ring {
            CoefficientRing::PrimeField(2) => GeneratorKind::Polynomial,
            _ if degree % 2 == 1 => GeneratorKind::Exterior,
            _ => GeneratorKind::Polynomial,
        };
        Generator { name: name.into(), degree, kind }
    }
}

/// Wire form of an algebra presentation. `kind` may be omitted on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PresentationDoc {
    ring: CoefficientRing,
    generators: Vec<GeneratorDoc>,
    truncation: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GeneratorDoc {
    name: String,
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<GeneratorKind>,
}

/// Presentation of a free graded-commutative algebra truncated at degree `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationDoc", into = "PresentationDoc")]
pub struct FreeGca {
    ring: CoefficientRing,
    generators: Vec<Generator>,
    truncation: usize,
}

impl TryFrom<PresentationDoc> for FreeGca {
    type Error = Error;

    fn try_from(doc: PresentationDoc) -> Result<Self> {
        let generators = doc
            .generators
            .into_iter()
            .map(|g| match g.kind {
                Some(kind) => Generator { name: g.name, degree: g.degree, kind },
                None => Generator::graded(g.name, g.degree, doc.ring),
            })
            .collect();
        FreeGca::new(doc.ring, generators, doc.truncation)
    }
}

impl From<FreeGca> for PresentationDoc {
    fn from(a: FreeGca) -> Self {
        PresentationDoc {
            ring: a.ring,
            generators: a
                .generators
                .into_iter()
                .map(|g| GeneratorDoc { name: g.name, degree: g.degree, kind: Some(g.kind) })
                .collect(),
            truncation: a.truncation,
        }
    }
}

impl FreeGca {
    pub fn new(ring: CoefficientRing, generators: Vec<Generator>, truncation: usize) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "empty name".into(),
                });
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "generators must have positive degree".into(),
                });
            }
            // In characteristic 2 an exterior generator is an explicit x^2 = 0
            // relation and is allowed; elsewhere the kind is forced by parity.
            if ring != CoefficientRing::PrimeField(2) {
                let expected = if g.degree % 2 == 1 {
                    GeneratorKind::Exterior
                } else {
                    GeneratorKind::Polynomial
                };
                if g.kind != expected {
                    return Err(Error::InvalidGenerator {
                        name: g.name.clone(),
                        reason: format!(
                            "a degree-{} generator over {} must be {:?}",
                            g.degree, ring, expected
                        ),
                    });
                }
            }
        }
        Ok(FreeGca { ring, generators, truncation })
    }

    /// Reads the JSON presentation
    /// `{"ring": "F2", "generators": [{"name": "x", "degree": 2}], "truncation": 8}`;
    /// `kind` is optional per generator. Errors carry the 1-based line.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line().max(1), message: e.to_string() })
    }

    /// Generators given as `(name, degree)`, kinds inferred from the ring.
    pub fn graded(ring: CoefficientRing, generators: &[(&str, usize)], truncation: usize) -> Result<Self> {
        let gens = generators.iter().map(|(n, d)| Generator::graded(*n, *d, ring)).collect();
        FreeGca::new(ring, gens, truncation)
    }

    /// The ground ring viewed as an algebra with no generators.
    pub fn trivial(ring: CoefficientRing, truncation: usize) -> Self {
        FreeGca { ring, generators: Vec::new(), truncation }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn min_generator_degree(&self) -> Option<usize> {
        self.generators.iter().map(|g| g.degree).min()
    }

    /// Same presentation with a different cut-off.
    pub fn with_truncation(&self, truncation: usize) -> Self {
        FreeGca { truncation, ..self.clone() }
    }

    /// Drops generators above the truncation; they contribute nothing below it.
    pub fn pruned(&self) -> Self {
        let generators = self
            .generators
            .iter()
            .filter(|g| g.degree <= self.truncation)
            .cloned()
            .collect();
        FreeGca { generators, ..self.clone() }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.truncation {
            Err(Error::TruncationExceeded { degree: n, truncation: self.truncation })
        } else {
            Ok(())
        }
    }

    fn max_exponent(&self, g: &Generator, budget: usize) -> usize {
        match g.kind {
            GeneratorKind::Exterior => usize::min(1, budget / g.degree),
            GeneratorKind::Polynomial => budget / g.degree,
        }
    }

    /// All monomials of total degree `n`, lexicographically decreasing.
    pub fn monomial_basis(&self, n: usize) -> Result<Vec<Monomial>> {
        self.check_degree(n)?;
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.enumerate(0, n, &mut exps, &mut out, n);
        Ok(out)
    }

    fn enumerate(&self, i: usize, budget: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>, total: usize) {
        if i == self.generators.len() {
            if budget == 0 {
                out.push(Monomial { exponents: exps.clone(), degree: total });
            }
            return;
        }
        let g = &self.generators[i];
        for e in (0..=self.max_exponent(g, budget)).rev() {
            exps[i] = e as u32;
            self.enumerate(i + 1, budget - e * g.degree, exps, out, total);
        }
        exps[i] = 0;
    }

    /// Ranks of the algebra in degrees `0..=n`.
    pub fn poincare_series(&self, n: usize) -> Result<PoincareVector> {
        self.check_degree(n)?;
        let mut series = PoincareVector::unit(n);
        for g in &self.generators {
            let mut factor = vec![0u64; n + 1];
            factor[0] = 1;
            let mut k = 1;
            while k * g.degree <= n {
                factor[k * g.degree] = 1;
                if g.kind == GeneratorKind::Exterior {
                    break;
                }
                k += 1;
            }
            series = series.convolve(&PoincareVector::new(factor));
        }
        Ok(series)
    }

    /// Tensor product; generators of `other` whose names clash get primes appended.
    pub fn tensor(&self, other: &FreeGca) -> Result<FreeGca> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut name = g.name.clone();
            while generators.iter().any(|h| h.name == name) {
                name.push('\'');
            }
            generators.push(Generator { name, ..g.clone() });
        }
        FreeGca::new(self.ring, generators, self.truncation.min(other.truncation))
    }

    /// Product of two basis monomials: `None` when it vanishes, else the
    /// monomial and the Koszul sign (`false` = negative).
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut exponents = Vec::with_capacity(a.exponents.len());
        let mut odd_parity = 0u64;
        // Odd-degree factors of `a` lying strictly to the right of position i.
        let mut odd_right: u64 = a
            .exponents
            .iter()
            .zip(&self.generators)
            .filter(|(_, g)| g.degree % 2 == 1)
            .map(|(e, _)| *e as u64)
            .sum();
        for (i, g) in self.generators.iter().enumerate() {
            let (ea, eb) = (a.exponents[i], b.exponents[i]);
            if g.degree % 2 == 1 {
                odd_right -= ea as u64;
                odd_parity += eb as u64 * odd_right;
            }
            let e = ea + eb;
            if g.kind == GeneratorKind::Exterior && e > 1 {
                return None;
            }
            exponents.push(e);
        }
        if self.ring == CoefficientRing::PrimeField(2) {
            odd_parity = 0;
        }
        Some((Monomial { exponents, degree: a.degree + b.degree }, odd_parity % 2 == 0))
    }

    pub fn monomial_label(&self, m: &Monomial) -> String {
        if m.degree == 0 {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (g, &e) in self.generators.iter().zip(&m.exponents) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        parts.join("")
    }
}

impl fmt::Display for FreeGca {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly: Vec<_> = self
            .generators
            .iter()
            .filter(|g| g.kind == GeneratorKind::Polynomial)
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        let ext: Vec<_> = self
            .generators
            .iter()
            .filter(|g| g.kind == GeneratorKind::Exterior)
            .map(|g| format!("{}({})", g.name, g.degree))
            .collect();
        write!(f, "{}", self.ring)?;
        if !poly.is_empty() {
            write!(f, " P{{{}}}", poly.join(", "))?;
        }
        if !ext.is_empty() {
            write!(f, " E{{{}}}", ext.join(", "))?;
        }
        write!(f, " (deg <= {})", self.truncation)
    }
}

/// Exponent vector in generator order together with its total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: usize,
}

impl Monomial {
    pub fn unit(algebra: &FreeGca) -> Self {
        Monomial { exponents: vec![0; algebra.generators.len()], degree: 0 }
    }

    pub fn from_exponents(algebra: &FreeGca, exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() != algebra.generators.len() {
            return Err(Error::Shape(format!(
                "{} exponents for {} generators",
                exponents.len(),
                algebra.generators.len()
            )));
        }
        let mut degree = 0;
        for (g, &e) in algebra.generators.iter().zip(&exponents) {
            if g.kind == GeneratorKind::Exterior && e > 1 {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "exterior exponent above 1".into(),
                });
            }
            degree += g.degree * e as usize;
        }
        Ok(Monomial { exponents, degree })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_unit(&self) -> bool {
        self.degree == 0
    }
}

/// Homogeneous element: a sparse combination of monomials of one degree.
#[derive(Debug, Clone)]
pub struct Element {
    algebra: Arc<FreeGca>,
    degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.terms == other.terms
            && (self.terms.is_empty() || self.degree == other.degree)
    }
}

fn same_algebra(a: &Arc<FreeGca>, b: &Arc<FreeGca>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn zero(algebra: &Arc<FreeGca>, degree: usize) -> Self {
        Element { algebra: algebra.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn one(algebra: &Arc<FreeGca>) -> Self {
        Element::monomial(algebra, Monomial::unit(algebra), BigInt::one())
    }

    pub fn monomial(algebra: &Arc<FreeGca>, m: Monomial, coefficient: BigInt) -> Self {
        let mut e = Element::zero(algebra, m.degree);
        let c = algebra.ring.reduce(&coefficient);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn generator(algebra: &Arc<FreeGca>, name: &str) -> Result<Self> {
        let i = algebra
            .generator_index(name)
            .ok_or_else(|| Error::Precondition(format!("no generator named `{name}`")))?;
        let mut exps = vec![0; algebra.generators.len()];
        exps[i] = 1;
        let m = Monomial::from_exponents(algebra, exps)?;
        algebra.check_degree(m.degree)?;
        Ok(Element::monomial(algebra, m, BigInt::one()))
    }

    pub fn algebra(&self) -> &Arc<FreeGca> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn insert(&mut self, m: Monomial, c: BigInt) {
        let v = self.algebra.ring.reduce(&(self.coefficient(&m) + c));
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Precondition(format!(
                "sum of elements in degrees {} and {} is not homogeneous",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let rest = if self.is_zero() { self } else { other };
        for (m, c) in &rest.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        let mut out = Element::zero(&self.algebra, self.degree);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&BigInt::from(-1))
    }

    /// Bilinear Koszul-signed product. Fails when the algebras differ or the
    /// product degree exceeds the truncation.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let degree = self.degree + other.degree;
        self.algebra.check_degree(degree)?;
        let mut out = Element::zero(&self.algebra, degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, positive)) = self.algebra.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.insert(m, if positive { c } else { -c });
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<_> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let c = self.algebra.ring.display_coefficient(c);
                let l = self.algebra.monomial_label(m);
                match c.as_str() {
                    "1" => l,
                    "-1" => format!("-{l}"),
                    _ if m.is_unit() => c,
                    _ => format!("{c}{l}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Ranks of a graded module in degrees `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoincareVector {
    ranks: Vec<u64>,
}

impl PoincareVector {
    pub fn new(ranks: Vec<u64>) -> Self {
        PoincareVector { ranks }
    }

    /// `1` in degree 0 and zero up to `n`.
    pub fn unit(n: usize) -> Self {
        let mut ranks = vec![0; n + 1];
        ranks[0] = 1;
        PoincareVector { ranks }
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn get(&self, n: usize) -> u64 {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn truncated(&self, len: usize) -> Self {
        PoincareVector { ranks: (0..len).map(|i| self.get(i)).collect() }
    }

    /// Cauchy product, cut to the shorter length.
    pub fn convolve(&self, other: &PoincareVector) -> PoincareVector {
        let len = self.len().min(other.len());
        let ranks = (0..len)
            .map(|n| (0..=n).map(|i| self.ranks[i] * other.ranks[n - i]).sum())
            .collect();
        PoincareVector { ranks }
    }
}

impl From<Vec<u64>> for PoincareVector {
    fn from(ranks: Vec<u64>) -> Self {
        PoincareVector::new(ranks)
    }
}

/// Every monomial up to a degree, indexed for fast products. Used by the
/// bar constructions, where words are lists of monomial ids.
#[derive(Debug, Clone)]
pub(crate) struct MonomialTable {
    pub algebra: FreeGca,
    pub monomials: Vec<Monomial>,
    pub by_degree: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    products: Option<Vec<u32>>,
}

const ZERO_PRODUCT: u32 = u32::MAX;
const NEGATIVE: u32 = 1 << 31;

impl MonomialTable {
    pub fn new(algebra: &FreeGca, max_degree: usize) -> Result<Self> {
        let algebra = algebra.clone();
        let mut monomials = Vec::new();
        let mut by_degree = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let basis = algebra.monomial_basis(n)?;
            let ids = (monomials.len() as u32..(monomials.len() + basis.len()) as u32).collect();
            by_degree.push(ids);
            monomials.extend(basis);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents.clone(), i as u32))
            .collect();
        let mut table = MonomialTable { algebra, monomials, by_degree, index, products: None };
        let m = table.monomials.len();
        if m <= 2048 {
            let mut products = vec![ZERO_PRODUCT; m * m];
            for i in 0..m {
                for j in 0..m {
                    if let Some((id, positive)) = table.compute_product(i as u32, j as u32) {
                        products[i * m + j] = if positive { id } else { id | NEGATIVE };
                    }
                }
            }
            table.products = Some(products);
        }
        Ok(table)
    }

    fn compute_product(&self, a: u32, b: u32) -> Option<(u32, bool)> {
        let (ma, mb) = (&self.monomials[a as usize], &self.monomials[b as usize]);
        let (m, positive) = self.algebra.multiply_monomials(ma, mb)?;
        self.index.get(&m.exponents).map(|&id| (id, positive))
    }

    /// `None` if the product vanishes or leaves the table.
    pub fn product(&self, a: u32, b: u32) -> Option<(u32, bool)> {
        match &self.products {
            Some(p) => {
                let v = p[a as usize * self.monomials.len() + b as usize];
                if v == ZERO_PRODUCT {
                    None
                } else {
                    Some((v & !NEGATIVE, v & NEGATIVE == 0))
                }
            }
            None => self.compute_product(a, b),
        }
    }

    pub fn degree(&self, id: u32) -> usize {
        self.monomials[id as usize].degree
    }

    pub fn is_odd(&self, id: u32) -> bool {
        self.monomials[id as usize].degree % 2 == 1
    }

    pub fn label(&self, id: u32) -> String {
        self.algebra.monomial_label(&self.monomials[id as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> CoefficientRing {
        CoefficientRing::PrimeField(p)
    }

    #[test]
    fn basis_of_exterior_pair() {
        let a = FreeGca::graded(CoefficientRing::Integers, &[("x3", 3), ("x5", 5)], 10).unwrap();
        let b = a.monomial_basis(8).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(a.monomial_label(&b[0]), "x3x5");
    }

    #[test]
    fn unit_basis_in_degree_zero() {
        let a = FreeGca::graded(f(3), &[("x", 1), ("y", 2)], 4).unwrap();
        let b = a.monomial_basis(0).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_unit());
    }

    #[test]
    fn single_polynomial_power() {
        let a = FreeGca::graded(f(2), &[("x2", 2)], 8).unwrap();
        let b = a.monomial_basis(6).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(a.monomial_label(&b[0]), "x2^3");
    }

    #[test]
    fn basis_order_is_lex_decreasing() {
        let a = FreeGca::graded(f(2), &[("x", 2), ("y", 2)], 4).unwrap();
        let labels: Vec<_> = a.monomial_basis(4).unwrap().iter().map(|m| a.monomial_label(m)).collect();
        assert_eq!(labels, ["x^2", "xy", "y^2"]);
    }

    #[test]
    fn basis_out_of_range() {
        let a = FreeGca::trivial(f(2), 3);
        assert_eq!(
            a.monomial_basis(4),
            Err(Error::TruncationExceeded { degree: 4, truncation: 3 })
        );
    }

    #[test]
    fn poincare_examples() {
        let a = FreeGca::graded(f(2), &[("x2", 2)], 7).unwrap();
        assert_eq!(a.poincare_series(7).unwrap().ranks(), &[1, 0, 1, 0, 1, 0, 1, 0]);
        let b = FreeGca::graded(CoefficientRing::Integers, &[("x3", 3), ("x5", 5), ("x7", 7)], 8).unwrap();
        assert_eq!(b.poincare_series(8).unwrap().ranks(), &[1, 0, 0, 1, 0, 1, 0, 1, 1]);
        let c = FreeGca::graded(f(3), &[("x1", 1), ("y2", 2)], 4).unwrap();
        assert_eq!(c.poincare_series(4).unwrap().ranks(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn tensor_with_trivial_and_clash() {
        let a = FreeGca::graded(f(2), &[("x", 2)], 6).unwrap();
        let t = a.tensor(&FreeGca::trivial(f(2), 6)).unwrap();
        assert_eq!(t, a);
        let aa = a.tensor(&a).unwrap();
        assert_eq!(aa.generators()[1].name, "x'");
        assert_eq!(aa.poincare_series(4).unwrap().get(4), 3);
        assert!(a.tensor(&FreeGca::trivial(f(3), 6)).is_err());
    }

    #[test]
    fn kind_validation() {
        assert!(FreeGca::new(f(3), vec![Generator::polynomial("x", 1)], 4).is_err());
        assert!(FreeGca::new(CoefficientRing::Integers, vec![Generator::exterior("x", 2)], 4).is_err());
        assert!(FreeGca::new(f(2), vec![Generator::exterior("x", 1)], 4).is_ok());
        assert!(FreeGca::new(f(2), vec![Generator::polynomial("x", 0)], 4).is_err());
        assert_eq!(
            FreeGca::graded(f(2), &[("x", 1), ("x", 2)], 4),
            Err(Error::DuplicateGenerator("x".into()))
        );
    }

    #[test]
    fn exterior_square_vanishes() {
        let a = Arc::new(FreeGca::graded(f(5), &[("x", 3)], 10).unwrap());
        let x = Element::generator(&a, "x").unwrap();
        assert!(x.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn koszul_sign_on_odd_transposition() {
        let a = Arc::new(FreeGca::graded(CoefficientRing::Integers, &[("x", 3), ("y", 3)], 10).unwrap());
        let x = Element::generator(&a, "x").unwrap();
        let y = Element::generator(&a, "y").unwrap();
        assert_eq!(y.multiply(&x).unwrap(), x.multiply(&y).unwrap().neg());
        assert_eq!(x.multiply(&y).unwrap().to_string(), "xy");
    }

    #[test]
    fn characteristic_two_doubling() {
        let a = Arc::new(FreeGca::graded(f(2), &[("x2", 2)], 10).unwrap());
        let x = Element::generator(&a, "x2").unwrap();
        let two_x = x.add(&x).unwrap();
        assert!(two_x.is_zero());
        assert!(two_x.multiply(&x).unwrap().is_zero());
        assert!(!x.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn truncation_overflow_is_an_error() {
        let a = Arc::new(FreeGca::graded(f(2), &[("x", 2)], 3).unwrap());
        let x = Element::generator(&a, "x").unwrap();
        assert_eq!(
            x.multiply(&x),
            Err(Error::TruncationExceeded { degree: 4, truncation: 3 })
        );
        let other = Arc::new(FreeGca::graded(f(2), &[("y", 2)], 3).unwrap());
        let y = Element::generator(&other, "y").unwrap();
        assert_eq!(x.multiply(&y), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn json_schema() {
        let a = FreeGca::graded(f(2), &[("x", 2)], 6).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"ring":"F2","generators":[{"name":"x","degree":2,"kind":"polynomial"}],"truncation":6}"#
        );
        let back: FreeGca = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let inferred: FreeGca =
            serde_json::from_str(r#"{"ring":"F3","generators":[{"name":"x","degree":1}],"truncation":4}"#).unwrap();
        assert_eq!(inferred.generators()[0].kind, GeneratorKind::Exterior);
        assert!(serde_json::from_str::<FreeGca>(
            r#"{"ring":"F3","generators":[{"name":"x","degree":1,"kind":"polynomial"}],"truncation":4}"#
        )
        .is_err());
    }

    #[test]
    fn monomial_table_products() {
        let a = FreeGca::graded(CoefficientRing::Integers, &[("x", 1), ("y", 2)], 6).unwrap();
        let t = MonomialTable::new(&a, 6).unwrap();
        let x = t.by_degree[1][0];
        assert_eq!(t.product(x, x), None);
        let y = t.by_degree[2][0];
        let (xy, pos) = t.product(x, y).unwrap();
        assert!(pos);
        assert_eq!(t.label(xy), "xy");
    }
}
