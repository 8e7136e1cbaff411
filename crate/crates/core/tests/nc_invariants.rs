use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use wgamma::nc::{
    catalan, cycle_count_pi_gamma, enumerate_nc, free_cumulants, join_block_count, moment_enum,
    moment_from_cumulants, profile_counts, NoncrossingPartition, PairPartition, Permutation,
};
use wgamma::transforms::mgf_series_exact;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Every set partition of {1..p} via restricted growth strings.
fn all_set_partitions(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; p];
    fn grow(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            grow(i + 1, max.max(l), labels, out);
        }
    }
    if p > 0 {
        grow(1, 0, &mut labels, &mut out);
    }
    out
}

fn crosses(labels: &[usize]) -> bool {
    let p = labels.len();
    for a in 0..p {
        for b in a + 1..p {
            for c in b + 1..p {
                for d in c + 1..p {
                    if labels[a] == labels[c] && labels[b] == labels[d] && labels[a] != labels[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        blocks[l].push(i + 1);
    }
    blocks
}

#[test]
fn enumeration_matches_filtered_set_partitions() {
    for p in 1..=8 {
        let brute: BTreeSet<Vec<Vec<usize>>> = all_set_partitions(p)
            .into_iter()
            .filter(|l| !crosses(l))
            .map(|l| blocks_of(&l))
            .collect();
        let ours: BTreeSet<Vec<Vec<usize>>> = enumerate_nc(p)
            .unwrap()
            .iter()
            .map(|pi| pi.blocks().to_vec())
            .collect();
        assert_eq!(ours, brute, "p = {p}");
        assert_eq!(BigInt::from(catalan(p)), BigInt::from(brute.len()));
    }
}

#[test]
fn moments_match_brute_force_sum() {
    for (m, n) in [
        (int(1), int(1)),
        (int(2), int(3)),
        (BigRational::new(BigInt::from(2), BigInt::from(7)), int(5)),
    ] {
        for p in 1..=7 {
            let mut want = BigRational::zero();
            for labels in all_set_partitions(p).into_iter().filter(|l| !crosses(l)) {
                let blocks = blocks_of(&labels);
                let even = blocks.iter().filter(|b| b.len() % 2 == 0).count();
                let mut term = BigRational::one();
                for _ in 0..blocks.len() {
                    term *= &m;
                }
                for _ in 0..even {
                    term *= &n;
                }
                want += term;
            }
            assert_eq!(moment_enum(p, &m, &n).unwrap(), want, "p = {p}");
        }
    }
}

#[test]
fn frozen_moment_values() {
    let cases: [((i64, i64), [i64; 8]); 3] = [
        ((1, 1), [1, 2, 5, 14, 42, 132, 429, 1430]),
        ((2, 3), [2, 10, 46, 254, 1434, 8562, 52406, 329142]),
        ((5, 1), [5, 30, 205, 1530, 12130, 100380, 857405, 7503330]),
    ];
    for ((m, n), want) in cases {
        for (p, w) in (1..=8).zip(want) {
            assert_eq!(
                moment_enum(p, &int(m), &int(n)).unwrap(),
                int(w),
                "({m},{n}) p={p}"
            );
        }
    }
}

#[test]
fn routes_agree_at_p_max() {
    let (m, n) = (BigRational::new(BigInt::from(3), BigInt::from(2)), int(2));
    let series = mgf_series_exact(&m, &n, 12).unwrap();
    let kappa = free_cumulants(12, &m, &n).unwrap();
    let by_enum = moment_enum(12, &m, &n).unwrap();
    assert_eq!(by_enum, series[12]);
    assert_eq!(by_enum, profile_counts(12).unwrap().evaluate(&m, &n));
    assert_eq!(by_enum, moment_from_cumulants(12, &kappa).unwrap());
}

#[test]
fn geodesic_permutations_are_exactly_the_partitions() {
    fn permutations(p: usize) -> Vec<Vec<usize>> {
        if p == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in permutations(p - 1) {
            for pos in 0..=rest.len() {
                let mut v = rest.clone();
                v.insert(pos, p - 1);
                out.push(v);
            }
        }
        out
    }
    for p in 1..=6 {
        let geodesic: BTreeSet<Vec<usize>> = permutations(p)
            .into_iter()
            .filter(|images| {
                Permutation::from_zero_based(images.clone())
                    .unwrap()
                    .is_geodesic()
            })
            .collect();
        let ours: BTreeSet<Vec<usize>> = enumerate_nc(p)
            .unwrap()
            .iter()
            .map(|pi| (1..=p).map(|i| pi.to_permutation().apply(i) - 1).collect())
            .collect();
        assert_eq!(ours, geodesic, "p = {p}");
    }
}

#[test]
fn lemma_holds_up_to_eight() {
    for p in 1..=8 {
        for pi in enumerate_nc(p).unwrap() {
            assert_eq!(1 + pi.even_blocks(), cycle_count_pi_gamma(&pi), "{pi}");
        }
    }
}

fn partition_strategy() -> impl Strategy<Value = NoncrossingPartition> {
    (1usize..=8, any::<prop::sample::Index>()).prop_map(|(p, idx)| {
        let all = enumerate_nc(p).unwrap();
        all[idx.index(all.len())].clone()
    })
}

proptest! {
    #[test]
    fn profile_bounds(pi in partition_strategy()) {
        let prof = pi.profile();
        prop_assert!(prof.e <= prof.b && prof.b <= prof.p && 2 * prof.e <= prof.p);
    }

    #[test]
    fn fat_map_identities(pi in partition_strategy()) {
        let p = pi.p();
        let fat = PairPartition::fat(&pi);
        prop_assert!(fat.is_noncrossing());
        prop_assert_eq!(fat.collapse().unwrap(), pi.clone());
        prop_assert_eq!(join_block_count(&fat, &PairPartition::rho12(p)).unwrap(), pi.block_count());
        prop_assert_eq!(join_block_count(&fat, &PairPartition::rho14(p)).unwrap(), cycle_count_pi_gamma(&pi));
    }

    #[test]
    fn permutation_is_geodesic(pi in partition_strategy()) {
        let sigma = pi.to_permutation();
        prop_assert!(sigma.is_geodesic());
        prop_assert_eq!(sigma.cycle_count(), pi.block_count());
    }

    #[test]
    fn canonical_form_is_order_independent(pi in partition_strategy(), seed in any::<u64>()) {
        let mut blocks: Vec<Vec<usize>> = pi.blocks().to_vec();
        // scramble block order and the order within blocks
        let k = blocks.len();
        blocks.rotate_left((seed as usize) % k);
        for b in blocks.iter_mut() {
            b.reverse();
        }
        prop_assert_eq!(NoncrossingPartition::new(pi.p(), blocks).unwrap(), pi);
    }

    #[test]
    fn routes_agree_on_random_rationals(a in 0i64..20, b in 1i64..10, c in 0i64..20, p in 1usize..=8) {
        let m = BigRational::new(BigInt::from(a), BigInt::from(b));
        let n = int(1) + BigRational::new(BigInt::from(c), BigInt::from(b));
        let by_enum = moment_enum(p, &m, &n).unwrap();
        prop_assert_eq!(&by_enum, &mgf_series_exact(&m, &n, p).unwrap()[p]);
        prop_assert_eq!(&by_enum, &profile_counts(p).unwrap().evaluate(&m, &n));
        prop_assert_eq!(&by_enum, &moment_from_cumulants(p, &free_cumulants(p, &m, &n).unwrap()).unwrap());
    }
}
