//! The property suites behind `verify`: splitting, bar constructions and
//! monadic colimits. Each suite returns a list of named checks; the
//! expected sides are computed by oracles that do not share code with the
//! computation being checked.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::algebra::{FreeGca, Generator, PoincareVector};
use crate::bar::{
    cyclic_bar_simplicial, two_sided_bar_simplicial, tensor_with_simplicial_set_simplicial, CyclicFaceSign,
};
use crate::error::{Error, Result};
use crate::group::{GradedAbelianGroup, GroupEntry};
use crate::models::{circle_bundle_homology, circle_bundle_homology_mod_p, model, DividedPowerRing, EulerClass, Presentation};
use crate::monadic::{builtin_suite, verify_suite, MonadicReport};
use crate::ring::CoefficientRing;
use crate::simplicial::FiniteSimplicialSet;
use crate::splitting::{
    bar_factorization_check, compute_thh, splitting_tensor_check, thh_em, tor_ranks, CheckReport, SpectrumDescriptor,
    ThhResult, ThhTarget, ThomSetup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Splitting,
    Bars,
    Monadic,
}

impl SuiteName {
    pub const ALL: [SuiteName; 3] = [SuiteName::Splitting, SuiteName::Bars, SuiteName::Monadic];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::Splitting => "splitting",
            SuiteName::Bars => "bars",
            SuiteName::Monadic => "monadic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monadic: Option<MonadicReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.monadic.as_ref().is_none_or(MonadicReport::passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
        if let Some(m) = &self.monadic {
            out.extend(m.failures.iter().cloned());
        }
        out
    }
}

/// Knobs for fault injection; the default runs the real constructions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub cyclic_face_sign: CyclicFaceSign,
}

pub fn run_suite(name: SuiteName, options: VerifyOptions) -> SuiteReport {
    match name {
        SuiteName::Splitting => SuiteReport { suite: name, checks: splitting_checks(), monadic: None },
        SuiteName::Bars => SuiteReport { suite: name, checks: bar_checks(options), monadic: None },
        SuiteName::Monadic => {
            let report = verify_suite(&builtin_suite());
            SuiteReport { suite: name, checks: Vec::new(), monadic: Some(report) }
        }
    }
}

type Job<'a> = Box<dyn FnOnce() -> Vec<CheckReport> + Send + 'a>;

/// Runs jobs on as many workers as there are cores, keeping job order in
/// the output.
fn run_parallel(jobs: Vec<Job<'_>>) -> Vec<CheckReport> {
    let total = jobs.len();
    let queue = Mutex::new(jobs.into_iter().enumerate().collect::<VecDeque<_>>());
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(total.max(1));
    let mut results: Vec<(usize, Vec<CheckReport>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let next = queue.lock().expect("job queue").pop_front();
                        let Some((i, job)) = next else { break done };
                        done.push((i, job()));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("check panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().flat_map(|(_, r)| r).collect()
}

fn checked(name: impl Into<String>, f: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    let name = name.into();
    f().unwrap_or_else(|e| CheckReport::error(name, &e))
}

fn f(p: u32) -> CoefficientRing {
    CoefficientRing::PrimeField(p)
}

fn gca(ring: CoefficientRing, gens: Vec<Generator>) -> FreeGca {
    FreeGca::new(ring, gens, 0).expect("suite algebra")
}

fn poly(name: &str, d: usize) -> Generator {
    Generator::polynomial(name, d)
}

fn ext(name: &str, d: usize) -> Generator {
    Generator::exterior(name, d)
}

/// Algebras for the subdivision comparison. No polynomial generator sits
/// in degree one: there the tensor-circle complexes grow fastest.
pub fn bar_suite_algebras() -> Vec<FreeGca> {
    vec![
        gca(f(2), vec![poly("x", 2)]),
        gca(f(3), vec![ext("x", 1)]),
        gca(f(3), vec![poly("y", 2), ext("x", 3)]),
        gca(f(5), vec![ext("x", 3), poly("y", 2)]),
        gca(f(2), vec![poly("x", 2), poly("y", 3)]),
        gca(f(3), vec![ext("x", 1), ext("y", 3)]),
    ]
}

/// Algebras for the HKR comparison `HH(A) = A (x) Tor_A(k, k)`.
pub fn splitting_suite_algebras() -> Vec<FreeGca> {
    vec![
        gca(f(2), vec![poly("x", 2)]),
        gca(f(3), vec![ext("x", 1)]),
        gca(f(2), vec![poly("x", 1), poly("y", 3)]),
        gca(f(5), vec![ext("x", 3), poly("y", 2)]),
    ]
}

/// Pairs `(A, H)` for the factorization `B(A, A (x) H, A) = A (x) B(k, H, k)`.
pub fn factorization_suite() -> Vec<(FreeGca, FreeGca)> {
    vec![
        (gca(f(2), vec![poly("x", 2)]), gca(f(2), vec![])),
        (gca(f(2), vec![]), gca(f(2), vec![poly("y", 2)])),
        (gca(f(2), vec![poly("x", 2)]), gca(f(2), vec![ext("e", 1)])),
        (gca(f(3), vec![ext("x", 1)]), gca(f(3), vec![poly("y", 2)])),
        (gca(f(5), vec![poly("y", 2)]), gca(f(5), vec![ext("x", 3)])),
        (gca(f(2), vec![poly("x", 1)]), gca(f(2), vec![poly("y", 3)])),
    ]
}

/// Degrees compared in the subdivision and HKR checks.
pub const BAR_DEGREES: usize = 12;
pub const SPLITTING_DEGREES: usize = 10;
pub const FACTORIZATION_DEGREES: usize = 8;
/// Degrees compared in the Tor cross-check over `loops2_S3` at `p = 2`.
pub const TOR_CROSS_DEGREES: usize = 15;

fn bar_checks(options: VerifyOptions) -> Vec<CheckReport> {
    let mut jobs: Vec<Job> = Vec::new();
    let n = BAR_DEGREES;
    for a in bar_suite_algebras() {
        let a = a.with_truncation(n);
        let whole = a.clone();
        jobs.push(Box::new(move || {
            let a = whole;
            let mut out = Vec::new();
            let cyclic = match cyclic_bar_simplicial(&a, n, options.cyclic_face_sign).and_then(|m| {
                let c = m.totalize()?;
                Ok((m, c))
            }) {
                Ok(x) => x,
                Err(e) => return vec![CheckReport::error(format!("cyclic bar of {a}"), &e)],
            };
            out.push(CheckReport::property(format!("simplicial identities, cyclic bar of {a}"), cyclic.0.check_simplicial_identities()));
            out.push(CheckReport::property(format!("d.d = 0, cyclic bar of {a}"), cyclic.1.verify()));
            let hh = cyclic.1.homology_ranks();
            let name = format!("HH({a}) = A (x) Tor_A");
            let bar = two_sided_bar_simplicial(&a, n).and_then(|m| {
                let c = m.totalize()?;
                Ok((m, c))
            });
            match bar.and_then(|(m, c)| Ok((m, c, a.poincare_series(n - 1)?))) {
                Ok((m, c, pa)) => {
                    out.push(CheckReport::property(format!("simplicial identities, B(k, {a}, k)"), m.check_simplicial_identities()));
                    out.push(CheckReport::property(format!("d.d = 0, B(k, {a}, k)"), c.verify()));
                    let rhs = pa.convolve(&PoincareVector::new(c.homology_ranks())).truncated(n);
                    out.push(CheckReport::compare(name, hh, rhs.ranks().to_vec()));
                }
                Err(e) => out.push(CheckReport::error(name, &e)),
            }
            out
        }));
        for v in 2..=4 {
            let a = a.clone();
            jobs.push(Box::new(move || {
                let name = format!("cyclic bar = tensor with circle({v}), {a}");
                let run = || -> Result<Vec<CheckReport>> {
                    let s = FiniteSimplicialSet::circle_subdivided(v)?;
                    let m = tensor_with_simplicial_set_simplicial(&a, &s, n)?;
                    let c = m.totalize()?;
                    let hh = cyclic_bar_simplicial(&a, n, options.cyclic_face_sign)?.totalize()?.homology_ranks();
                    Ok(vec![
                        CheckReport::property(format!("simplicial identities, {a} (x) circle({v})"), m.check_simplicial_identities()),
                        CheckReport::property(format!("d.d = 0, {a} (x) circle({v})"), c.verify()),
                        CheckReport::compare(name.clone(), hh, c.homology_ranks()),
                    ])
                };
                run().unwrap_or_else(|e| vec![CheckReport::error(name.clone(), &e)])
            }));
        }
    }
    // Kunneth for Tor over small pairs.
    let pairs = [
        (gca(f(2), vec![poly("x", 2)]), gca(f(2), vec![poly("y", 3)])),
        (gca(f(3), vec![ext("x", 1)]), gca(f(3), vec![poly("y", 2)])),
        (gca(f(5), vec![ext("x", 3)]), gca(f(5), vec![ext("y", 5)])),
    ];
    for (a, b) in pairs {
        let (a, b) = (a.with_truncation(n), b.with_truncation(n));
        jobs.push(Box::new(move || {
            vec![checked(format!("Tor over {a} (x) {b} is the product"), || {
                let ab = a.tensor(&b)?;
                let lhs = tor_ranks(&ab, n)?;
                let rhs = PoincareVector::new(tor_ranks(&a, n)?).convolve(&PoincareVector::new(tor_ranks(&b, n)?));
                Ok(CheckReport::compare(format!("Tor over {ab} is the product"), lhs, rhs.truncated(n).ranks().to_vec()))
            })]
        }));
    }
    run_parallel(jobs)
}

/// Number of partitions of `n` into parts from `parts`, each used at most
/// once when `distinct` is set.
fn partitions(parts: &[usize], n: usize, distinct: bool) -> Vec<u64> {
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for &p in parts {
        if distinct {
            for k in (p..=n).rev() {
                ways[k] += ways[k - p];
            }
        } else {
            for k in p..=n {
                ways[k] += ways[k - p];
            }
        }
    }
    ways
}

/// `pi_* MU (x) H_*(SU)` by counting: partitions into even parts times
/// partitions into distinct odd parts `>= 3`.
pub fn mu_oracle(n: usize) -> Vec<u64> {
    let even: Vec<usize> = (1..=n / 2).map(|i| 2 * i).collect();
    let odd: Vec<usize> = (1..=n / 2).map(|i| 2 * i + 1).filter(|&d| d <= n).collect();
    let a = partitions(&even, n, false);
    let b = partitions(&odd, n, true);
    (0..=n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

/// `Z` in degree 0 and `Z/i` in degree `2i - 1`.
pub fn hz_oracle(n: usize) -> GradedAbelianGroup {
    GradedAbelianGroup::new(
        (0..=n)
            .map(|k| match k {
                0 => GroupEntry::new(0, 1, vec![]),
                k if k % 2 == 1 && k >= 3 => GroupEntry::new(k, 0, vec![(k as u64).div_ceil(2).into()]),
                k => GroupEntry::zero(k),
            })
            .collect(),
    )
}

/// `Z/p` in every even degree.
pub fn hzp_oracle(p: u32, n: usize) -> GradedAbelianGroup {
    GradedAbelianGroup::new(
        (0..=n).map(|k| if k % 2 == 0 { GroupEntry::elementary(k, p, 1) } else { GroupEntry::zero(k) }).collect(),
    )
}

fn group_check(name: String, got: Result<ThhResult>, want: GradedAbelianGroup) -> CheckReport {
    match got {
        Ok(ThhResult::Group(g)) => {
            let first = (0..g.len().max(want.len())).find(|&i| g.get(i) != want.get(i));
            let mut r = CheckReport::property(name, first.is_none());
            r.first_mismatch = first;
            if let Some(i) = first {
                r.detail = Some(format!(
                    "got {}, expected {}",
                    g.get(i).map_or("-".into(), |e| e.to_string()),
                    want.get(i).map_or("-".into(), |e| e.to_string())
                ));
            }
            r
        }
        Ok(ThhResult::Ranks(_)) => CheckReport::error(name, &Error::Precondition("expected a group".into())),
        Err(e) => CheckReport::error(name, &e),
    }
}

fn splitting_checks() -> Vec<CheckReport> {
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(|| {
        let mut out = vec![
            group_check("THH(HZ/2) through degree 20".into(), compute_thh(ThhTarget::HZ2, 20), hzp_oracle(2, 20)),
            group_check("THH(HZ) through degree 21".into(), compute_thh(ThhTarget::HZ, 21), hz_oracle(21)),
            group_check("THH(HZ/3) through degree 20".into(), compute_thh(ThhTarget::HZp(3), 20), hzp_oracle(3, 20)),
            group_check("THH(HZ/5) through degree 20".into(), compute_thh(ThhTarget::HZp(5), 20), hzp_oracle(5, 20)),
        ];
        out.push(checked("THH(MU) through degree 16", || match compute_thh(ThhTarget::MU, 16)? {
            ThhResult::Ranks(r) => Ok(CheckReport::compare("THH(MU) through degree 16", r.ranks().to_vec(), mu_oracle(16))),
            ThhResult::Group(_) => Err(Error::Precondition("expected ranks".into())),
        }));
        for p in [None, Some(2), Some(3)] {
            let name = format!("THH over a point is {}", p.map_or("Z".to_string(), |p| format!("Z/{p}")));
            out.push(checked(name.clone(), || {
                let setup = ThomSetup::new(SpectrumDescriptor::eilenberg_maclane(p)?, Some("point"), "point")?;
                let g = thh_em(&setup, 6)?;
                let want = match p {
                    None => GroupEntry::new(0, 1, vec![]),
                    Some(p) => GroupEntry::elementary(0, p, 1),
                };
                let ok = g.get(0) == Some(&want) && g.entries()[1..].iter().all(GroupEntry::is_zero);
                Ok(CheckReport::property(name, ok))
            }));
        }
        out
    }));
    jobs.push(Box::new(|| {
        vec![checked("Tor over loops2_S3 mod 2 matches loops_S3", || {
            let n = TOR_CROSS_DEGREES;
            let Presentation::Algebra(a) = model("loops2_S3", f(2), n)? else {
                return Err(Error::Precondition("loops2_S3 is an algebra".into()));
            };
            let want = (0..n).map(|k| u64::from(k % 2 == 0)).collect();
            Ok(CheckReport::compare(format!("Tor over loops2_S3 mod 2, degrees < {n}"), tor_ranks(&a, n)?, want))
        })]
    }));
    jobs.push(Box::new(|| {
        let mut out = Vec::new();
        for p in [2, 3, 5] {
            let name = format!("Gysin over Z reduced mod {p} matches Gysin over F{p}");
            out.push(checked(name.clone(), || {
                let base = DividedPowerRing::divided(2, 23)?;
                let integral = circle_bundle_homology(&base, EulerClass::Generator, 20)?;
                let direct = circle_bundle_homology_mod_p(&base, EulerClass::Generator, p, 20)?;
                Ok(CheckReport::compare(name, integral.mod_p_dimensions(p), direct))
            }));
        }
        out
    }));
    for a in splitting_suite_algebras() {
        let a = a.with_truncation(SPLITTING_DEGREES);
        jobs.push(Box::new(move || {
            vec![checked(format!("HKR {a}"), || splitting_tensor_check(&a, SPLITTING_DEGREES))]
        }));
    }
    for (a, h) in factorization_suite() {
        let (a, h) = (a.with_truncation(FACTORIZATION_DEGREES), h.with_truncation(FACTORIZATION_DEGREES));
        jobs.push(Box::new(move || {
            vec![checked(format!("factorization {a}, {h}"), || bar_factorization_check(&a, &h, FACTORIZATION_DEGREES))]
        }));
    }
    run_parallel(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles() {
        assert_eq!(mu_oracle(8), vec![1, 0, 1, 1, 2, 2, 3, 4, 6]);
        assert_eq!(hz_oracle(7).get(7).unwrap().torsion_u64(), vec![4]);
        assert!(hz_oracle(7).get(1).unwrap().is_zero());
        // Partitions of 6 into parts 1, 3, 7: 111111, 1113, 33.
        assert_eq!(partitions(&[1, 3, 7], 6, false)[6], 3);
    }

    #[test]
    fn suite_algebras_avoid_degree_one_polynomials() {
        for a in bar_suite_algebras() {
            assert!(a.generators().iter().all(|g| g.degree > 1 || g.kind == crate::algebra::GeneratorKind::Exterior));
        }
    }
}
