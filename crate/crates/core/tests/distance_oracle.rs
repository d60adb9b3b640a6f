//! Exhaustive distance search checked against a naive scan over all 2^n patterns.

use std::collections::HashSet;

use colexcode::code::compute_distance;
use colexcode::gf2::{kernel_basis, BitMatrix, BitVector, DEFAULT_ENUMERATION_CAP};
use colexcode::CssCode;
use proptest::prelude::*;

fn to_mask(v: &BitVector) -> u32 {
    v.iter_ones().fold(0, |m, i| m | 1 << i)
}

fn span_set(rows: &[u32]) -> HashSet<u32> {
    let mut out = HashSet::from([0u32]);
    for &r in rows {
        let add: Vec<u32> = out.iter().map(|x| x ^ r).collect();
        out.extend(add);
    }
    out
}

/// Minimum weight of a pattern annihilated by `checks` and outside `span(stabs)`.
fn naive_min(n: usize, checks: &[u32], stabs: &[u32]) -> Option<usize> {
    let span = span_set(stabs);
    (1u32..1 << n)
        .filter(|v| checks.iter().all(|c| (c & v).count_ones() % 2 == 0) && !span.contains(v))
        .map(|v| v.count_ones() as usize)
        .min()
}

fn masks(m: &BitMatrix) -> Vec<u32> {
    m.rows().iter().map(to_mask).collect()
}

fn check(code: &CssCode) {
    let n = code.n();
    let (hx, hz) = (masks(code.hx()), masks(code.hz()));
    let r = compute_distance(code, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(Some(r.dz), naive_min(n, &hx, &hz), "dz");
    assert_eq!(Some(r.dx), naive_min(n, &hz, &hx), "dx");
    assert_eq!(r.d, r.dx.min(r.dz));
}

fn rows(n: usize, sets: &[&[usize]]) -> BitMatrix {
    BitMatrix::from_rows(n, sets.iter().map(|s| BitVector::from_indices(n, s.iter().copied())).collect()).unwrap()
}

#[test]
fn steane_code() {
    let h = rows(7, &[&[3, 4, 5, 6], &[1, 2, 5, 6], &[0, 2, 4, 6]]);
    let code = CssCode::from_checks(h.clone(), h).unwrap();
    assert_eq!(code.k(), 1);
    let r = compute_distance(&code, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!((r.dx, r.dz, r.d), (3, 3, 3));
    check(&code);
}

#[test]
fn four_qubit_error_detecting_code() {
    let code = CssCode::from_checks(rows(4, &[&[0, 1, 2, 3]]), rows(4, &[&[0, 1, 2, 3]])).unwrap();
    assert_eq!(code.k(), 2);
    check(&code);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_css_codes_match_naive_scan(
        n in 3usize..=12,
        xbits in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 12), 0..4),
        zsel in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 12), 0..4),
    ) {
        let hx = BitMatrix::from_rows(n, xbits.iter().map(|b| BitVector::from_bools(&b[..n])).collect()).unwrap();
        let ker = kernel_basis(&hx);
        let hz_rows: Vec<BitVector> = zsel
            .iter()
            .map(|sel| {
                let mut acc = BitVector::zeros(n);
                for (i, r) in ker.rows().iter().enumerate() {
                    if sel[i % sel.len()] ^ (i >= sel.len() && i % 2 == 1) {
                        acc.xor_assign(r);
                    }
                }
                acc
            })
            .collect();
        let hz = BitMatrix::from_rows(n, hz_rows).unwrap();
        let code = CssCode::from_checks(hx, hz).unwrap();
        prop_assume!(code.k() > 0);
        check(&code);
    }
}
