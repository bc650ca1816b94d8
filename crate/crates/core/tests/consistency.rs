//! Cross-module agreement between independent computation paths.

use num_bigint::BigUint;

use kcolor::coloring::{brute_force_count, Boundary, CountTarget, DEFAULT_SEARCH_BUDGET};
use kcolor::eigen::{lambda_max, PowerOptions};
use kcolor::trace::{coupled_traces, cylinder_count, open_lattice_count, strip_count, Letter, TraceLedger, TraceWord};
use kcolor::transfer::{build_b_recursive, matvec_implicit, TransferKind, DEFAULT_DENSE_BUDGET};

#[test]
fn cylinder_brute_force_matches_transfer_trace() {
    for k in [3u32, 4] {
        for m in 1..=4u32 {
            for p in 1..=3 {
                let brute = brute_force_count(
                    m as usize,
                    p,
                    k,
                    Boundary::Cylinder,
                    CountTarget::EdgeStates,
                    DEFAULT_SEARCH_BUDGET,
                )
                .unwrap();
                assert_eq!(brute, cylinder_count(k, m, p, DEFAULT_DENSE_BUDGET).unwrap(), "k={k} m={m} p={p}");
            }
        }
    }
}

#[test]
fn open_brute_force_matches_transfer_sum() {
    for k in [3u32, 4, 5] {
        for m in 2..=3u32 {
            for p in 1..=3 {
                let brute =
                    brute_force_count(m as usize, p, k, Boundary::Open, CountTarget::EdgeStates, DEFAULT_SEARCH_BUDGET)
                        .unwrap();
                assert_eq!(brute, open_lattice_count(k, m, p).unwrap(), "k={k} m={m} p={p}");
            }
        }
    }
}

#[test]
fn open_sum_matches_dense_powers() {
    let b = build_b_recursive(4, 3, DEFAULT_DENSE_BUDGET).unwrap().to_biguint();
    let mut power = b.clone();
    for m in 2..=5u32 {
        assert_eq!(power.sum_entries().unwrap(), open_lattice_count(4, m, 3).unwrap());
        power = power.checked_mul(&b).unwrap();
    }
}

#[test]
fn coupled_recursion_matches_mixed_traces() {
    use Letter::{A, T};
    for p in 1..=8 {
        let mut ledger = TraceLedger::new(p, DEFAULT_DENSE_BUDGET).unwrap();
        let (x, y) = coupled_traces(p);
        assert_eq!(x, ledger.trace(&TraceWord::new(vec![A, A, T, T])).unwrap(), "p={p}");
        assert_eq!(y, ledger.trace(&TraceWord::new(vec![A, T, A, T])).unwrap(), "p={p}");
    }
}

#[test]
fn expanded_words_sum_to_strip_count() {
    // Tr[(A + Aᵀ)^m] as a sum over all 2^m words.
    for p in 1..=6 {
        let mut ledger = TraceLedger::new(p, DEFAULT_DENSE_BUDGET).unwrap();
        for m in 2..=4u32 {
            let mut total = BigUint::default();
            for bits in 0..1u32 << m {
                let word = (0..m).map(|i| if bits >> i & 1 == 1 { Letter::T } else { Letter::A }).collect();
                total += ledger.trace(&TraceWord::new(word)).unwrap();
            }
            assert_eq!(total, strip_count(m, p).unwrap(), "m={m} p={p}");
        }
    }
}

#[test]
fn table_is_monotone_and_bounded_by_lieb() {
    let lieb = (4.0f64 / 3.0).powf(1.5);
    let vals: Vec<f64> =
        (1..=12).map(|p| lambda_max(3, p, PowerOptions::default()).unwrap().per_site_estimate).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
    assert!(vals.iter().all(|&v| v > lieb));
}

#[test]
fn implicit_matvec_is_exact_for_big_integers() {
    let p = 3;
    let dim = 27;
    let b = build_b_recursive(4, p, DEFAULT_DENSE_BUDGET).unwrap().to_biguint();
    let v: Vec<BigUint> = (0..dim as u32).map(|i| BigUint::from(i * i + 1)).collect();
    let implicit = matvec_implicit(4, p, TransferKind::Full, &v).unwrap();
    for (i, got) in implicit.iter().enumerate() {
        let want: BigUint = b.row(i).iter().zip(&v).map(|(a, x)| a * x).sum();
        assert_eq!(*got, want);
    }
}
