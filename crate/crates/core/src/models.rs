//! Catalogue of homology models for the loop spaces that feed the THH
//! computations, and a Gysin sequence calculator for sphere bundles over
//! spaces with divided power (or polynomial) cohomology.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{FreeGca, Generator, PoincareVector};
use crate::error::{Error, Result};
use crate::group::{GradedAbelianGroup, GroupEntry};
use crate::matrix::SparseMatrix;
use crate::ring::CoefficientRing;

/// A materialized model: either an algebra presentation of the homology
/// ring or, when no convenient presentation exists, the graded group itself.
#[derive(Debug, Clone, PartialEq)]
pub enum Presentation {
    Algebra(FreeGca),
    Group(GradedAbelianGroup),
}

impl Presentation {
    /// Ranks per degree through `n` (dimensions over a field, free ranks
    /// plus torsion summand counts for a group).
    pub fn poincare(&self, n: usize) -> Result<PoincareVector> {
        match self {
            Presentation::Algebra(a) => a.poincare_series(n),
            Presentation::Group(g) => Ok(PoincareVector::new(g.truncated(n + 1).dimensions())),
        }
    }

    pub fn as_algebra(&self) -> Option<&FreeGca> {
        match self {
            Presentation::Algebra(a) => Some(a),
            Presentation::Group(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceModel {
    pub name: &'static str,
    pub description: &'static str,
    /// `Some(y)` when this space is modelled as the classifying space `B y`.
    pub delooping_of: Option<&'static str>,
    pub rings: &'static str,
}

const CATALOGUE: &[SpaceModel] = &[
    SpaceModel {
        name: "point",
        description: "a point",
        delooping_of: Some("point"),
        rings: "Z, F_p",
    },
    SpaceModel {
        name: "loops_S3",
        description: "Omega S^3: polynomial on one generator of degree 2",
        delooping_of: Some("loops2_S3"),
        rings: "Z, F_p",
    },
    SpaceModel {
        name: "loops2_S3",
        description: "Omega^2 S^3: P{x_n}, |x_n| = 2^(n+1) - 1 at p = 2; E{x_n} (x) P{bx_n}, |x_n| = 2p^n - 1, |bx_n| = 2p^n - 2 at odd p",
        delooping_of: None,
        rings: "F_p",
    },
    SpaceModel {
        name: "loops2_S3_conn3",
        description: "Omega^2 of the 3-connected cover of S^3; enters only through its delooping",
        delooping_of: None,
        rings: "none",
    },
    SpaceModel {
        name: "loops_S3_conn3",
        description: "Omega of the 3-connected cover of S^3: circle bundle over Omega S^3 with Euler class the degree-2 generator",
        delooping_of: Some("loops2_S3_conn3"),
        rings: "Z",
    },
    SpaceModel {
        name: "SU",
        description: "SU: exterior on generators of degree 2i + 1, i >= 1",
        delooping_of: None,
        rings: "Z, F_p",
    },
    SpaceModel {
        name: "BU",
        description: "BU: polynomial on generators of degree 2i, i >= 1",
        delooping_of: None,
        rings: "Z, F_p",
    },
    SpaceModel {
        name: "BBU",
        description: "BBU, modelled by SU",
        delooping_of: Some("BU"),
        rings: "Z, F_p",
    },
    SpaceModel {
        name: "MU_coefficients",
        description: "pi_* MU: polynomial with one generator in each degree 2i, i >= 1",
        delooping_of: None,
        rings: "Z, F_p",
    },
];

pub fn catalogue() -> &'static [SpaceModel] {
    CATALOGUE
}

pub fn model_info(name: &str) -> Result<&'static SpaceModel> {
    CATALOGUE.iter().find(|m| m.name == name).ok_or_else(|| Error::UnknownModel(name.to_string()))
}

fn unsupported(name: &str, ring: CoefficientRing) -> Error {
    Error::UnsupportedRing { model: name.to_string(), ring: ring.to_string() }
}

/// Generators `x{d}` in the given degrees, kinds forced by the ring.
fn by_degree(ring: CoefficientRing, degrees: impl Iterator<Item = usize>, n: usize) -> Result<FreeGca> {
    let gens = degrees.take_while(|&d| d <= n).map(|d| Generator::graded(format!("x{d}"), d, ring)).collect();
    FreeGca::new(ring, gens, n)
}

/// The named model over `ring`, truncated at degree `n`.
pub fn model(name: &str, ring: CoefficientRing, n: usize) -> Result<Presentation> {
    model_info(name)?;
    let alg = |a: FreeGca| Ok(Presentation::Algebra(a));
    match name {
        "point" => alg(FreeGca::trivial(ring, n)),
        "loops_S3" => alg(by_degree(ring, std::iter::once(2), n)?),
        "loops2_S3" => match ring {
            CoefficientRing::Integers => Err(unsupported(name, ring)),
            CoefficientRing::PrimeField(2) => {
                let gens = (0..)
                    .map(|i| (i, (1usize << (i + 1)) - 1))
                    .take_while(|&(_, d)| d <= n)
                    .map(|(i, d)| Generator::polynomial(format!("x{i}"), d))
                    .collect();
                alg(FreeGca::new(ring, gens, n)?)
            }
            CoefficientRing::PrimeField(p) => {
                let mut gens = Vec::new();
                let mut pk = 1usize;
                for i in 0.. {
                    let d = 2 * pk - 1;
                    if d > n {
                        break;
                    }
                    gens.push(Generator::exterior(format!("x{i}"), d));
                    if i >= 1 {
                        gens.push(Generator::polynomial(format!("bx{i}"), d - 1));
                    }
                    pk *= p as usize;
                }
                gens.sort_by_key(|g| g.degree);
                alg(FreeGca::new(ring, gens, n)?)
            }
        },
        "loops_S3_conn3" => match ring {
            CoefficientRing::Integers => {
                let base = DividedPowerRing::divided(2, n + 3)?;
                Ok(Presentation::Group(circle_bundle_homology(&base, EulerClass::Generator, n)?))
            }
            _ => Err(unsupported(name, ring)),
        },
        "SU" | "BBU" => {
            if ring == CoefficientRing::PrimeField(2) {
                let gens = (1..)
                    .map(|i| 2 * i + 1)
                    .take_while(|&d| d <= n)
                    .map(|d| Generator::exterior(format!("x{d}"), d))
                    .collect();
                alg(FreeGca::new(ring, gens, n)?)
            } else {
                alg(by_degree(ring, (1..).map(|i| 2 * i + 1), n)?)
            }
        }
        "BU" | "MU_coefficients" => alg(by_degree(ring, (1..).map(|i| 2 * i), n)?),
        _ => Err(unsupported(name, ring)),
    }
}

/// Cohomology ring with one basis element `g_i` in each degree `i * d`:
/// either divided powers (`g_1 g_{i-1} = i g_i`) or a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedPowerRing {
    degree: usize,
    divided: bool,
    truncation: usize,
}

impl DividedPowerRing {
    /// `Gamma[g]` on a generator of even degree `d`, through degree `n`.
    pub fn divided(d: usize, n: usize) -> Result<Self> {
        Self::build(d, true, n)
    }

    /// `Z[g]` with `|g| = d`; with `d = 2` this is the cohomology of `CP^oo`.
    pub fn polynomial(d: usize, n: usize) -> Result<Self> {
        Self::build(d, false, n)
    }

    fn build(d: usize, divided: bool, n: usize) -> Result<Self> {
        // The Euler class is a multiple of the generator, so its degree is `d`.
        if d % 2 == 1 {
            return Err(Error::OddEulerClass(d));
        }
        if d == 0 {
            return Err(Error::Precondition("generator degree must be positive".into()));
        }
        Ok(DividedPowerRing { degree: d, divided, truncation: n })
    }

    pub fn generator_degree(&self) -> usize {
        self.degree
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_divided(&self) -> bool {
        self.divided
    }

    /// Rank of the (free) group in degree `k`.
    pub fn rank(&self, k: usize) -> usize {
        usize::from(k <= self.truncation && k % self.degree == 0)
    }

    /// `c` with `g_i g_j = c g_{i+j}`.
    pub fn product_coefficient(&self, i: usize, j: usize) -> BigUint {
        if !self.divided {
            return BigUint::one();
        }
        // binomial(i + j, i)
        let mut c = BigUint::one();
        for t in 0..i {
            c = c * BigUint::from(j + t + 1) / BigUint::from(t + 1);
        }
        c
    }

    /// Checks `g_1 g_{i-1} = i g_i` (divided) or `g_1 g_{i-1} = g_i`
    /// (polynomial) for every basis element in range.
    pub fn check_multiplication_rule(&self) -> bool {
        (1..=self.truncation / self.degree).all(|i| {
            let expected = if self.divided { BigUint::from(i) } else { BigUint::one() };
            self.product_coefficient(1, i - 1) == expected
        })
    }
}

/// The Euler class of a sphere bundle, as a multiple of the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerClass {
    Zero,
    Generator,
    Multiple(BigInt),
}

impl EulerClass {
    fn multiplier(&self) -> BigInt {
        match self {
            EulerClass::Zero => BigInt::zero(),
            EulerClass::Generator => BigInt::one(),
            EulerClass::Multiple(k) => k.clone(),
        }
    }
}

/// Matrix of cup product with `e` from degree `k - d` to degree `k`.
fn cup_matrix(base: &DividedPowerRing, euler: &EulerClass, k: usize) -> Result<SparseMatrix> {
    let d = base.degree;
    let rows = base.rank(k);
    let cols = if k >= d { base.rank(k - d) } else { 0 };
    if rows == 0 || cols == 0 {
        return Ok(SparseMatrix::zero(rows, cols));
    }
    let i = k / d;
    let value = euler.multiplier() * BigInt::from(base.product_coefficient(1, i - 1));
    let value: i64 = value
        .try_into()
        .map_err(|_| Error::SizeBound(format!("cup product coefficient in degree {k} exceeds 64 bits")))?;
    SparseMatrix::from_triplets(1, 1, [(0, 0, value)])
}

/// Homology of the total space of the sphere bundle with Euler class
/// `euler` over a base with cohomology `base`, through degree `n`.
///
/// The Gysin sequence splits into
/// `0 -> coker(e: H^{k-d} -> H^k) -> H^k(E) -> ker(e: H^{k-d+1} -> H^{k+1}) -> 0`;
/// the kernel is free, so `H^k(E)` is the direct sum. Homology follows by
/// universal coefficients: free parts agree and the torsion of `H_k` is the
/// torsion of `H^{k+1}`.
pub fn circle_bundle_homology(base: &DividedPowerRing, euler: EulerClass, n: usize) -> Result<GradedAbelianGroup> {
    let cohomology = bundle_cohomology(base, &euler, CoefficientRing::Integers, n + 1)?;
    Ok(GradedAbelianGroup::new(
        (0..=n)
            .map(|k| GroupEntry::new(k, cohomology[k].free_rank, cohomology[k + 1].torsion.clone()))
            .collect(),
    ))
}

/// Dimensions of the homology of the same total space with `F_p`
/// coefficients, from the Gysin sequence run over `F_p`.
pub fn circle_bundle_homology_mod_p(base: &DividedPowerRing, euler: EulerClass, p: u32, n: usize) -> Result<Vec<u64>> {
    let ring = CoefficientRing::prime_field(p)?;
    Ok(bundle_cohomology(base, &euler, ring, n)?.iter().map(|e| e.free_rank as u64).collect())
}

fn bundle_cohomology(
    base: &DividedPowerRing,
    euler: &EulerClass,
    ring: CoefficientRing,
    top: usize,
) -> Result<Vec<GroupEntry>> {
    let d = base.degree;
    let needed = top + 1;
    if base.truncation < needed {
        return Err(Error::Precondition(format!(
            "base cohomology known through degree {}, degree {needed} needed",
            base.truncation
        )));
    }
    let mut out = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let into = cup_matrix(base, euler, k)?;
        let out_of = if k + 1 >= d { cup_matrix(base, euler, k + 1)? } else { SparseMatrix::zero(base.rank(k + 1), 0) };
        let entry = match ring {
            CoefficientRing::Integers => {
                let snf = into.smith_normal_form();
                let coker_free = into.rows() - snf.len();
                let torsion = snf.into_iter().filter(|t| !t.is_one()).collect();
                let ker = out_of.cols() - out_of.rank_over(ring);
                GroupEntry::new(k, coker_free + ker, torsion)
            }
            CoefficientRing::PrimeField(_) => {
                let coker = into.rows() - into.rank_over(ring);
                let ker = out_of.cols() - out_of.rank_over(ring);
                GroupEntry::new(k, coker + ker, Vec::new())
            }
        };
        out.push(entry);
    }
    Ok(out)
}
