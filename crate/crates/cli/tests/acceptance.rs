//! Acceptance run: one PASS/FAIL line per criterion. Every comparison is
//! exact; the only tolerances are the wall-clock limits printed on each line.
//! Exits nonzero if any criterion fails.

#[allow(dead_code)]
#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thh_core::models::{model, Presentation};
use thh_core::monadic::{builtin_suite, verify_suite};
use thh_core::splitting::{bar_factorization_check, splitting_tensor_check};
use thh_core::suites::{bar_suite_algebras, factorization_suite, BAR_DEGREES, FACTORIZATION_DEGREES, SPLITTING_DEGREES};
use thh_core::{
    cyclic_bar, relative_bar, tensor_with_simplicial_set, two_sided_bar, ChainComplex, CoefficientRing,
    DividedPowerRing, FiniteSimplicialSet, FreeGca, GroupEntry, SparseMatrix,
};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

/// Complexes built along the way; criterion 9 checks `d.d = 0` on all of them.
#[derive(Default)]
struct Emitted {
    checked: usize,
    failures: Vec<String>,
}

impl Emitted {
    fn record(&mut self, what: String, c: &ChainComplex) -> bool {
        self.checked += 1;
        let ok = c.verify();
        if !ok {
            self.failures.push(what);
        }
        ok
    }
}

fn thh_json(name: &str, degree: usize) -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_thhcalc"))
        .args(["--no-cache", "--format", "json", "--max-degree", &degree.to_string(), "thh", name])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((v["payload"].clone(), elapsed))
}

/// `(free rank, torsion)` per degree from a group payload.
fn group_rows(payload: &Value) -> Vec<(u64, Vec<u64>)> {
    payload["rows"]
        .as_array()
        .expect("group rows")
        .iter()
        .map(|r| {
            let t = r["torsion"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (r["freeRank"].as_u64().unwrap(), t)
        })
        .collect()
}

fn rank_rows(payload: &Value) -> Vec<u64> {
    payload["rows"].as_array().expect("rank rows").iter().map(|r| r["rank"].as_u64().unwrap()).collect()
}

fn first_difference<T: PartialEq>(got: &[T], want: &[T]) -> Option<usize> {
    (0..got.len().max(want.len())).find(|&i| got.get(i) != want.get(i))
}

fn criterion_1() -> Outcome {
    let (payload, t) = match thh_json("HZ2", 20) {
        Ok(x) => x,
        Err(e) => return Outcome::new(false, e),
    };
    let want: Vec<(u64, Vec<u64>)> = (0..=20).map(|k| (0, if k % 2 == 0 { vec![2] } else { vec![] })).collect();
    let got = group_rows(&payload);
    let exact = got == want;
    let fast = t < Duration::from_secs(1);
    Outcome::new(exact && fast, format!("THH(HZ/2) through 20: Z/2 in even degrees, exact={exact}, {:.3}s < 1s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let (payload, t) = match thh_json("HZ", 21) {
        Ok(x) => x,
        Err(e) => return Outcome::new(false, e),
    };
    let want: Vec<(u64, Vec<u64>)> = (0..=21u64)
        .map(|k| match k {
            0 => (1, vec![]),
            k if k % 2 == 1 && k >= 3 => (0, vec![k.div_ceil(2)]),
            _ => (0, vec![]),
        })
        .collect();
    let got = group_rows(&payload);
    let exact = got == want;
    // The multiplication forcing the torsion: gamma_1 * gamma_{i-1} = i gamma_i.
    let gamma = DividedPowerRing::divided(2, 22).expect("divided power ring");
    let forced = (2..=11usize).all(|i| gamma.product_coefficient(1, i - 1) == i.into());
    let fast = t < Duration::from_secs(1);
    Outcome::new(
        exact && forced && fast,
        format!("THH(HZ) through 21: Z, Z/i in 2i-1, exact={exact}, cup-by-gamma_1 forces i={forced}, {:.3}s < 1s", t.as_secs_f64()),
    )
}

/// Ranks of `pi_* MU (x) Lambda(x_3, x_5, ...)`, by direct multiplication of
/// truncated power series.
fn mu_convolution_oracle(n: usize) -> Vec<u64> {
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for d in (2..=n).step_by(2) {
        // 1 / (1 - t^d)
        for k in d..=n {
            series[k] += series[k - d];
        }
    }
    for d in (3..=n).step_by(2) {
        // (1 + t^d)
        for k in (d..=n).rev() {
            series[k] += series[k - d];
        }
    }
    series
}

fn criterion_3() -> Outcome {
    let (payload, t) = match thh_json("MU", 16) {
        Ok(x) => x,
        Err(e) => return Outcome::new(false, e),
    };
    let got = rank_rows(&payload);
    let want = mu_convolution_oracle(16);
    let exact = got == want;
    let fast = t < Duration::from_secs(1);
    Outcome::new(exact && fast, format!("THH(MU) ranks through 16 {got:?}, exact={exact}, {:.3}s < 1s", t.as_secs_f64()))
}

fn criterion_4(emitted: &mut Emitted) -> Outcome {
    let start = Instant::now();
    let n = 15;
    let a = match model("loops2_S3", CoefficientRing::PrimeField(2), n) {
        Ok(Presentation::Algebra(a)) => a,
        Ok(_) => return Outcome::new(false, "loops2_S3 is not an algebra"),
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let c = match two_sided_bar(&a, n) {
        Ok(c) => c,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    emitted.record(format!("B(k, {a}, k)"), &c);
    let got = c.homology_ranks();
    let want: Vec<u64> = (0..n).map(|k| u64::from(k % 2 == 0)).collect();
    let t = start.elapsed();
    let exact = got == want;
    Outcome::new(
        exact && t < Duration::from_secs(60),
        format!("Tor over loops2_S3/F2, degrees < 15: {got:?}, exact={exact}, {:.2}s < 60s", t.as_secs_f64()),
    )
}

fn criterion_5(emitted: &mut Emitted) -> Outcome {
    let start = Instant::now();
    let n = BAR_DEGREES;
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in bar_suite_algebras() {
        let a = a.with_truncation(n);
        let hh = match cyclic_bar(&a, n) {
            Ok(c) => {
                emitted.record(format!("cyclic bar of {a}"), &c);
                c.homology_ranks()
            }
            Err(e) => {
                bad.push(format!("{a}: {e}"));
                continue;
            }
        };
        for v in 2..=4 {
            cases += 1;
            let s = FiniteSimplicialSet::circle_subdivided(v).expect("circle");
            match tensor_with_simplicial_set(&a, &s, n) {
                Ok(c) => {
                    emitted.record(format!("{a} (x) circle({v})"), &c);
                    let got = c.homology_ranks();
                    if let Some(i) = first_difference(&got, &hh) {
                        bad.push(format!("{a}, v={v}, degree {i}"));
                    }
                }
                Err(e) => bad.push(format!("{a}, v={v}: {e}")),
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(
        bad.is_empty() && t < Duration::from_secs(120),
        format!("cyclic bar = tensor with circle(v), v=2,3,4, degrees < {n}: {cases} cases, mismatches {bad:?}, {:.2}s < 120s", t.as_secs_f64()),
    )
}

fn criterion_6(emitted: &mut Emitted) -> Outcome {
    let f = CoefficientRing::PrimeField;
    let n = SPLITTING_DEGREES;
    let suite = [
        FreeGca::graded(f(2), &[("x", 2)], n),
        FreeGca::graded(f(3), &[("x", 1)], n),
        FreeGca::graded(f(2), &[("x", 1), ("y", 3)], n),
        FreeGca::graded(f(5), &[("x", 3), ("y", 2)], n),
    ];
    let mut bad = Vec::new();
    for a in suite {
        let a = a.expect("suite algebra");
        match (splitting_tensor_check(&a, n), cyclic_bar(&a, n), two_sided_bar(&a, n)) {
            (Ok(r), Ok(c), Ok(b)) => {
                emitted.record(format!("cyclic bar of {a}"), &c);
                emitted.record(format!("B(k, {a}, k)"), &b);
                if !r.passed {
                    bad.push(r.to_string());
                }
            }
            (r, c, b) => bad.push(format!("{a}: {:?}", (r.err(), c.err(), b.err()))),
        }
    }
    Outcome::new(bad.is_empty(), format!("HH(A) = A (x) Tor_A on 4 algebras, degrees < {n}: failures {bad:?}"))
}

fn criterion_7(emitted: &mut Emitted) -> Outcome {
    let n = FACTORIZATION_DEGREES;
    let suite = factorization_suite();
    let mut bad = Vec::new();
    for (a, h) in &suite {
        match (bar_factorization_check(a, h, n), relative_bar(&a.with_truncation(n), &h.with_truncation(n), n)) {
            (Ok(r), Ok(c)) => {
                emitted.record(format!("B({a}, A (x) {h}, A)"), &c);
                if !r.passed {
                    bad.push(r.to_string());
                }
            }
            (r, c) => bad.push(format!("{a}, {h}: {:?}", (r.err(), c.err()))),
        }
    }
    Outcome::new(bad.is_empty(), format!("B(A, A (x) H, A) = A (x) Tor_H on {} pairs, degrees < {n}: failures {bad:?}", suite.len()))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let suite = builtin_suite();
    let carriers = suite.diagrams.iter().flat_map(|(_, d)| d.objects().iter().map(|x| x.len())).max().unwrap_or(0);
    let max_objects = suite.diagrams.iter().map(|(_, d)| d.objects().len()).max().unwrap_or(0);
    let max_tensor = suite.tensors.iter().map(|&(_, a)| a).max().unwrap_or(0);
    let report = verify_suite(&suite);
    let t = start.elapsed();
    let ok = report.passed() && carriers <= 16 && max_objects <= 3 && max_tensor == 3 && t < Duration::from_secs(60);
    Outcome::new(
        ok,
        format!(
            "coequalizer formulas: {} diagrams (<= {max_objects} objects, carriers <= {carriers}), {} tensors (|A| <= {max_tensor}), {} failures, {:.2}s < 60s",
            report.diagrams,
            report.tensors,
            report.failures.len(),
            t.as_secs_f64()
        ),
    )
}

fn criterion_9(emitted: &Emitted) -> Outcome {
    // SNF of a matrix is invariant under row and column permutations.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut snf_bad = 0;
    for _ in 0..200 {
        let dense = oracles::random_matrix(&mut rng);
        let m = SparseMatrix::from_dense(&dense);
        let base = oracles::snf(&m);
        let (rp, cp) = (oracles::shuffled(m.rows(), &mut rng), oracles::shuffled(m.cols(), &mut rng));
        if oracles::snf(&m.permuted(&rp, &cp)) != base {
            snf_bad += 1;
        }
    }
    // Universal coefficients: dim H_n(C; F_p) = b_n + t_n(p) + t_{n-1}(p).
    let mut uct_bad = 0;
    let mut planted_dd = 0;
    for _ in 0..50 {
        let top = rng.gen_range(2..=5);
        let p = oracles::planted(&mut rng, top);
        if !p.complex.verify() {
            planted_dd += 1;
        }
        let h = p.complex.homology_all();
        let integral_ok = (0..top).all(|n| {
            let e = h.get(n).unwrap();
            let want = GroupEntry::new(n, p.free[n], p.torsion[n].iter().map(|&k| k.into()).collect());
            e.free_rank == p.free[n] && e.torsion == want.torsion
        });
        let modular_ok = [2u32, 3, 5].iter().all(|&q| {
            let dims = p.complex.reduce_mod(q).unwrap().homology_ranks();
            (0..top).all(|n| {
                // Derived from the integral answer computed by the library.
                let e = h.get(n).unwrap();
                let div = |g: &GroupEntry| g.torsion_u64().iter().filter(|&&t| t % u64::from(q) == 0).count();
                let below = if n > 0 { div(h.get(n - 1).unwrap()) } else { 0 };
                dims[n] as usize == e.free_rank + div(e) + below
            })
        });
        if !(integral_ok && modular_ok) {
            uct_bad += 1;
        }
    }
    let ok = emitted.failures.is_empty() && snf_bad == 0 && uct_bad == 0 && planted_dd == 0;
    Outcome::new(
        ok,
        format!(
            "d.d = 0 on {} emitted complexes (failures {:?}); SNF permutation invariance 200 matrices ({snf_bad} bad); UCT on 50 complexes ({uct_bad} bad)",
            emitted.checked, emitted.failures
        ),
    )
}

fn main() {
    let mut emitted = Emitted::default();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(&mut emitted),
        criterion_5(&mut emitted),
        criterion_6(&mut emitted),
        criterion_7(&mut emitted),
        criterion_8(),
        criterion_9(&emitted),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        println!("{} criterion {}: {}", if r.passed { "PASS" } else { "FAIL" }, i + 1, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
