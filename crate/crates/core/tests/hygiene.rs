//! Smith normal form and homology against oracles that share no code with
//! the library.

#[path = "support/oracles.rs"]
mod oracles;

use num_bigint::BigUint;
use oracles::{invariant_factors, planted, random_matrix, shuffled, snf, Planted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thh_core::SparseMatrix;

#[test]
fn snf_is_permutation_invariant_on_200_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let dense = random_matrix(&mut rng);
        let m = SparseMatrix::from_dense(&dense);
        let base = snf(&m);
        let (rp, cp) = (shuffled(m.rows(), &mut rng), shuffled(m.cols(), &mut rng));
        assert_eq!(snf(&m.permuted(&rp, &cp)), base, "{dense:?}");
        if m.rows() <= 6 && m.cols() <= 6 {
            assert_eq!(base, invariant_factors(&dense), "{dense:?}");
        }
    }
}

#[test]
fn snf_matches_determinantal_divisors_on_full_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let dense: Vec<Vec<i64>> = (0..8).map(|_| (0..8).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        assert_eq!(snf(&SparseMatrix::from_dense(&dense)), invariant_factors(&dense));
    }
}

#[test]
fn integral_and_modular_homology_on_50_planted_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for case in 0..50 {
        let top = rng.gen_range(2..=5);
        let Planted { complex, free, torsion } = planted(&mut rng, top);
        assert!(complex.verify(), "case {case}: d.d != 0");
        let h = complex.homology_all();
        for n in 0..top {
            let e = h.get(n).unwrap();
            assert_eq!(e.free_rank, free[n], "case {case}, degree {n}");
            // Compare torsion as a multiset of primary parts.
            let mut want: Vec<BigUint> = torsion[n].iter().map(|&k| BigUint::from(k)).collect();
            want.sort();
            let want = thh_core::GroupEntry::new(n, free[n], want);
            assert_eq!(e.torsion, want.torsion, "case {case}, degree {n}");
        }
        for p in [2u32, 3, 5] {
            let modp = complex.reduce_mod(p).unwrap();
            let dims = modp.homology_ranks();
            for n in 0..top {
                let div = |v: &Vec<u64>| v.iter().filter(|&&k| k % p as u64 == 0).count();
                let below = if n > 0 { div(&torsion[n - 1]) } else { 0 };
                assert_eq!(dims[n] as usize, free[n] + div(&torsion[n]) + below, "case {case}, p = {p}, degree {n}");
            }
            // Euler characteristic, with the top degree's cycles counted directly.
            let ranks = modp.ranks();
            let chain: i64 = ranks.iter().enumerate().map(|(n, &r)| if n % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
            let top_cycles = (ranks[top] - modp.differential(top).rank_mod_p(p)) as i64;
            let homology: i64 = dims.iter().enumerate().map(|(n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) }).sum::<i64>()
                + if top % 2 == 0 { top_cycles } else { -top_cycles };
            assert_eq!(chain, homology, "case {case}, p = {p}");
        }
    }
}
