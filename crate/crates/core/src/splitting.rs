//! THH of Thom spectra through the splitting `THH(Mf) = Mf ^ BX_+`.
//!
//! The splitting is taken as the definition of the computation: THH of an
//! Eilenberg-MacLane spectrum is the ordinary homology of the catalogued
//! `BX`, and THH of an even torsion-free spectrum is its coefficient ring
//! tensored with `H_*(BX; Z)`. The check functions compare the algebraic
//! shadows of the splitting on explicit bar complexes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{FreeGca, PoincareVector};
use crate::bar::{cyclic_bar, relative_bar, two_sided_bar};
use crate::error::{Error, Result};
use crate::group::{GradedAbelianGroup, GroupEntry};
use crate::models::{model, model_info, Presentation};
use crate::ring::CoefficientRing;

/// Largest degree any named computation will run to.
pub const MAX_DEGREE: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumKind {
    /// `HZ` (`None`) or `HZ/p` (`Some(p)`).
    EilenbergMacLane(Option<u32>),
    /// Coefficients concentrated in even degrees, torsion-free over `Z`.
    EvenTorsionFree(FreeGca),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumDescriptor {
    pub name: String,
    pub kind: SpectrumKind,
}

impl SpectrumDescriptor {
    pub fn eilenberg_maclane(p: Option<u32>) -> Result<Self> {
        if let Some(p) = p {
            CoefficientRing::prime_field(p)?;
        }
        let name = match p {
            Some(p) => format!("HZ/{p}"),
            None => "HZ".into(),
        };
        Ok(SpectrumDescriptor { name, kind: SpectrumKind::EilenbergMacLane(p) })
    }

    pub fn even_torsion_free(name: impl Into<String>, coefficients: FreeGca) -> Result<Self> {
        let name = name.into();
        if coefficients.ring() != CoefficientRing::Integers {
            return Err(Error::Precondition(format!("coefficients of {name} must be over Z")));
        }
        if coefficients.generators().iter().any(|g| g.degree % 2 == 1) {
            return Err(Error::Precondition(format!("coefficients of {name} must be concentrated in even degrees")));
        }
        Ok(SpectrumDescriptor { name, kind: SpectrumKind::EvenTorsionFree(coefficients) })
    }

    /// `MU` with `pi_* MU` truncated at `n`.
    pub fn mu(n: usize) -> Result<Self> {
        match model("MU_coefficients", CoefficientRing::Integers, n)? {
            Presentation::Algebra(a) => Self::even_torsion_free("MU", a),
            Presentation::Group(_) => unreachable!("MU_coefficients is an algebra"),
        }
    }
}

/// A Thom spectrum over `X`, with `BX` taken from the catalogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomSetup {
    pub spectrum: SpectrumDescriptor,
    pub base_space: Option<String>,
    pub classifying_space: String,
}

impl ThomSetup {
    /// When `base_space` is given, the catalogue must record
    /// `classifying_space` as its delooping.
    pub fn new(spectrum: SpectrumDescriptor, base_space: Option<&str>, classifying_space: &str) -> Result<Self> {
        let bx = model_info(classifying_space)?;
        if let Some(x) = base_space {
            model_info(x)?;
            if bx.delooping_of != Some(x) {
                return Err(Error::Precondition(format!("`{classifying_space}` is not catalogued as B({x})")));
            }
        }
        Ok(ThomSetup {
            spectrum,
            base_space: base_space.map(str::to_string),
            classifying_space: classifying_space.to_string(),
        })
    }
}

/// `THH_n(HA) = H_n(BX; A)` for an Eilenberg-MacLane spectrum `HA`.
pub fn thh_em(setup: &ThomSetup, n: usize) -> Result<GradedAbelianGroup> {
    let SpectrumKind::EilenbergMacLane(p) = setup.spectrum.kind else {
        return Err(Error::Precondition(format!("{} is not an Eilenberg-MacLane spectrum", setup.spectrum.name)));
    };
    let bx = &setup.classifying_space;
    match p {
        Some(p) => {
            let ranks = model(bx, CoefficientRing::prime_field(p)?, n)?.poincare(n)?;
            Ok(GradedAbelianGroup::new(
                ranks.ranks().iter().enumerate().map(|(k, &r)| GroupEntry::elementary(k, p, r as usize)).collect(),
            ))
        }
        None => match model(bx, CoefficientRing::Integers, n)? {
            Presentation::Group(g) => Ok(g.truncated(n + 1)),
            Presentation::Algebra(a) => Ok(GradedAbelianGroup::free(a.poincare_series(n)?.ranks())),
        },
    }
}

/// Ranks of `pi_*(Mf ^ BX_+) = pi_* Mf (x) H_*(BX; Z)`. The Atiyah-Hirzebruch
/// spectral sequence collapses because both sides are even or torsion-free.
pub fn thh_even_degenerate(setup: &ThomSetup, n: usize) -> Result<PoincareVector> {
    let SpectrumKind::EvenTorsionFree(coefficients) = &setup.spectrum.kind else {
        return Err(Error::Precondition(format!("{} is not even and torsion-free", setup.spectrum.name)));
    };
    let bx = match model(&setup.classifying_space, CoefficientRing::Integers, n)? {
        Presentation::Algebra(a) => a.poincare_series(n)?,
        Presentation::Group(g) => {
            if g.entries().iter().any(|e| !e.torsion.is_empty()) {
                return Err(Error::TorsionDetected(setup.classifying_space.clone()));
            }
            PoincareVector::new(g.truncated(n + 1).free_ranks())
        }
    };
    let coeff = coefficients.with_truncation(coefficients.truncation().max(n)).poincare_series(n)?;
    Ok(coeff.convolve(&bx).truncated(n + 1))
}

/// Outcome of a rank comparison, degrees `0..lhs.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub first_mismatch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn compare(name: impl Into<String>, lhs: Vec<u64>, rhs: Vec<u64>) -> Self {
        let first_mismatch = (0..lhs.len().max(rhs.len())).find(|&i| lhs.get(i) != rhs.get(i));
        CheckReport { name: name.into(), passed: first_mismatch.is_none(), lhs, rhs, first_mismatch, detail: None }
    }

    /// A yes/no check with no rank tables attached.
    pub fn property(name: impl Into<String>, passed: bool) -> Self {
        CheckReport { name: name.into(), passed, lhs: Vec::new(), rhs: Vec::new(), first_mismatch: None, detail: None }
    }

    /// A check that could not be carried out.
    pub fn error(name: impl Into<String>, err: &Error) -> Self {
        CheckReport { detail: Some(err.to_string()), ..CheckReport::property(name, false) }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        if let Some(i) = self.first_mismatch {
            write!(f, " (degree {i}: {:?} vs {:?})", self.lhs.get(i), self.rhs.get(i))?;
        }
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        Ok(())
    }
}

fn require_field(a: &FreeGca) -> Result<()> {
    if a.ring().is_field() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("rank comparison needs a prime field, got {}", a.ring())))
    }
}

/// Homology ranks of the Tor complex `B(k, A, k)` in degrees `< n`.
pub fn tor_ranks(a: &FreeGca, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(two_sided_bar(&a.with_truncation(n), n)?.homology_ranks())
}

/// Hochschild homology ranks of `A` in degrees `< n`.
pub fn hochschild_ranks(a: &FreeGca, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(cyclic_bar(&a.with_truncation(n), n)?.homology_ranks())
}

fn convolution_with(a: &FreeGca, ranks: Vec<u64>, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let pa = a.with_truncation(n).poincare_series(n - 1)?;
    Ok(pa.convolve(&PoincareVector::new(ranks)).truncated(n).ranks().to_vec())
}

/// `HH_*(A)` against `A (x) Tor_A(k, k)`, ranks in degrees `< n`.
pub fn splitting_tensor_check(a: &FreeGca, n: usize) -> Result<CheckReport> {
    require_field(a)?;
    let lhs = hochschild_ranks(a, n)?;
    let rhs = convolution_with(a, tor_ranks(a, n)?, n)?;
    Ok(CheckReport::compare(format!("HH({a}) = A (x) Tor_A"), lhs, rhs))
}

/// `B(A, A (x) H, A)` against `A (x) Tor_H(k, k)`, ranks in degrees `< n`.
pub fn bar_factorization_check(a: &FreeGca, h: &FreeGca, n: usize) -> Result<CheckReport> {
    require_field(a)?;
    if a.ring() != h.ring() {
        return Err(Error::RingMismatch(a.ring().to_string(), h.ring().to_string()));
    }
    let lhs = if n == 0 {
        Vec::new()
    } else {
        relative_bar(&a.with_truncation(n), &h.with_truncation(n), n)?.homology_ranks()
    };
    let rhs = convolution_with(a, tor_ranks(h, n)?, n)?;
    Ok(CheckReport::compare(format!("B({a}, A (x) {h}, A) = A (x) Tor_H"), lhs, rhs))
}

/// The named THH computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThhTarget {
    HZ2,
    HZp(u32),
    HZ,
    MU,
}

impl ThhTarget {
    pub fn setup(&self, n: usize) -> Result<ThomSetup> {
        match *self {
            ThhTarget::HZ2 => ThomSetup::new(SpectrumDescriptor::eilenberg_maclane(Some(2))?, Some("loops2_S3"), "loops_S3"),
            ThhTarget::HZp(p) => {
                ThomSetup::new(SpectrumDescriptor::eilenberg_maclane(Some(p))?, Some("loops2_S3"), "loops_S3")
            }
            ThhTarget::HZ => {
                ThomSetup::new(SpectrumDescriptor::eilenberg_maclane(None)?, Some("loops2_S3_conn3"), "loops_S3_conn3")
            }
            ThhTarget::MU => ThomSetup::new(SpectrumDescriptor::mu(n)?, Some("BU"), "BBU"),
        }
    }
}

impl fmt::Display for ThhTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThhTarget::HZ2 => write!(f, "HZ2"),
            ThhTarget::HZp(p) => write!(f, "HZp({p})"),
            ThhTarget::HZ => write!(f, "HZ"),
            ThhTarget::MU => write!(f, "MU"),
        }
    }
}

impl FromStr for ThhTarget {
    type Err = Error;

    /// Accepts `HZ2`, `HZ`, `MU` and `HZp(p)` for a prime `p`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HZ2" => Ok(ThhTarget::HZ2),
            "HZ" => Ok(ThhTarget::HZ),
            "MU" => Ok(ThhTarget::MU),
            _ => {
                let p = s
                    .strip_prefix("HZp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.trim().parse::<u32>().ok())
                    .ok_or_else(|| Error::UnknownSpectrum(s.to_string()))?;
                CoefficientRing::prime_field(p)?;
                Ok(ThhTarget::HZp(p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ThhResult {
    Group(GradedAbelianGroup),
    Ranks(PoincareVector),
}

/// `THH_*` of the named spectrum through degree `n`.
pub fn compute_thh(target: ThhTarget, n: usize) -> Result<ThhResult> {
    if n > MAX_DEGREE {
        return Err(Error::SizeBound(format!("degree {n} above the cap {MAX_DEGREE}")));
    }
    let setup = target.setup(n)?;
    match target {
        ThhTarget::MU => Ok(ThhResult::Ranks(thh_even_degenerate(&setup, n)?)),
        _ => Ok(ThhResult::Group(thh_em(&setup, n)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    const F2: CoefficientRing = CoefficientRing::PrimeField(2);
    const F3: CoefficientRing = CoefficientRing::PrimeField(3);

    fn group(r: ThhResult) -> GradedAbelianGroup {
        match r {
            ThhResult::Group(g) => g,
            ThhResult::Ranks(_) => panic!("expected a group"),
        }
    }

    #[test]
    fn thh_of_hz2() {
        let g = group(compute_thh(ThhTarget::HZ2, 10).unwrap());
        for (k, e) in g.entries().iter().enumerate() {
            let expected = if k % 2 == 0 { vec![2] } else { vec![] };
            assert_eq!(e.torsion_u64(), expected);
            assert_eq!(e.free_rank, 0);
        }
    }

    #[test]
    fn thh_of_hz() {
        let g = group(compute_thh(ThhTarget::HZ, 11).unwrap());
        assert_eq!(g.len(), 12);
        assert_eq!(g.get(0).unwrap().free_rank, 1);
        assert!(g.get(1).unwrap().is_zero());
        for i in 2..=5 {
            assert_eq!(g.get(2 * i - 1).unwrap().torsion, vec![BigUint::from(i as u32)]);
        }
        assert!(g.get(4).unwrap().is_zero());
    }

    #[test]
    fn thh_of_hz3() {
        let g = group(compute_thh(ThhTarget::HZp(3), 9).unwrap());
        for (k, e) in g.entries().iter().enumerate() {
            assert_eq!(e.p_torsion_count(3), usize::from(k % 2 == 0));
        }
    }

    #[test]
    fn thh_of_mu() {
        let ThhResult::Ranks(r) = compute_thh(ThhTarget::MU, 8).unwrap() else { panic!() };
        // [1,0,1,0,2,0,3,0,5] convolved with the exterior ranks [1,0,0,1,0,1,0,1,1].
        assert_eq!(r.ranks(), &[1, 0, 1, 1, 2, 2, 3, 4, 6]);
        assert_eq!(compute_thh(ThhTarget::MU, 0).unwrap(), ThhResult::Ranks(PoincareVector::new(vec![1])));
    }

    #[test]
    fn unit_cases() {
        let hz = SpectrumDescriptor::eilenberg_maclane(None).unwrap();
        let g = thh_em(&ThomSetup::new(hz, Some("point"), "point").unwrap(), 4).unwrap();
        assert_eq!(g.free_ranks(), vec![1, 0, 0, 0, 0]);
        let mu = ThomSetup::new(SpectrumDescriptor::mu(8).unwrap(), None, "point").unwrap();
        assert_eq!(thh_even_degenerate(&mu, 8).unwrap().ranks(), &[1, 0, 1, 0, 2, 0, 3, 0, 5]);
        let sphere = SpectrumDescriptor::even_torsion_free("S", FreeGca::trivial(CoefficientRing::Integers, 8)).unwrap();
        let su = ThomSetup::new(sphere, None, "SU").unwrap();
        assert_eq!(thh_even_degenerate(&su, 8).unwrap().ranks(), &[1, 0, 0, 1, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn torsion_blocks_degeneration() {
        let mu = ThomSetup::new(SpectrumDescriptor::mu(8).unwrap(), None, "loops_S3_conn3").unwrap();
        assert!(matches!(thh_even_degenerate(&mu, 8), Err(Error::TorsionDetected(_))));
    }

    #[test]
    fn delooping_is_checked() {
        let hz = SpectrumDescriptor::eilenberg_maclane(None).unwrap();
        assert!(ThomSetup::new(hz, Some("SU"), "loops_S3").is_err());
    }

    #[test]
    fn names_parse() {
        assert_eq!("HZp(5)".parse::<ThhTarget>().unwrap(), ThhTarget::HZp(5));
        assert!(matches!("HZp(4)".parse::<ThhTarget>(), Err(Error::NotPrime(4))));
        assert!(matches!("KU".parse::<ThhTarget>(), Err(Error::UnknownSpectrum(_))));
        assert!(matches!(compute_thh(ThhTarget::HZ, 41), Err(Error::SizeBound(_))));
    }

    #[test]
    fn splitting_examples() {
        let a = FreeGca::graded(F2, &[("x", 2)], 8).unwrap();
        assert!(splitting_tensor_check(&a, 8).unwrap().passed);
        let e = FreeGca::graded(F3, &[("x", 1)], 6).unwrap();
        assert!(splitting_tensor_check(&e, 6).unwrap().passed);
        let ab = FreeGca::graded(F2, &[("x", 1), ("y", 3)], 8).unwrap();
        assert!(splitting_tensor_check(&ab, 8).unwrap().passed);
    }

    #[test]
    fn factorization_examples() {
        let k = FreeGca::trivial(F2, 8);
        let x2 = FreeGca::graded(F2, &[("x", 2)], 8).unwrap();
        let r = bar_factorization_check(&x2, &k, 8).unwrap();
        assert!(r.passed);
        assert_eq!(r.lhs, x2.poincare_series(7).unwrap().ranks());
        let r = bar_factorization_check(&k, &x2, 8).unwrap();
        assert!(r.passed);
        assert_eq!(r.lhs, tor_ranks(&x2, 8).unwrap());
        let h = FreeGca::new(F2, vec![crate::Generator::exterior("e", 1)], 6).unwrap();
        assert!(bar_factorization_check(&x2, &h, 6).unwrap().passed);
    }

    #[test]
    fn checks_need_a_field() {
        let a = FreeGca::graded(CoefficientRing::Integers, &[("x", 2)], 4).unwrap();
        assert!(splitting_tensor_check(&a, 4).is_err());
    }
}
