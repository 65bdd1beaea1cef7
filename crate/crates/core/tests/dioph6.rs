use std::collections::{BTreeMap, BTreeSet};

use cspoly::cs_core::{self, det_i_minus_wedge};
use cspoly::dioph6::{
    emit_table, is_basic, solve_q, solve_q_with, to_csv, transcription, transcription_csv, Degree6Solution,
    SolverOptions,
};
use cspoly::IntPoly;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rayon::prelude::*;

type Tuple = Vec<i64>;

fn tuple(f: &IntPoly) -> Tuple {
    f.coeffs()[..6].iter().map(|c| c.to_i64().unwrap()).collect()
}

fn finite_tuples(rows: &[Degree6Solution]) -> BTreeSet<Tuple> {
    rows.iter().filter_map(|r| r.polynomial()).map(|f| tuple(&f)).collect()
}

fn instances(rows: &[Degree6Solution], lo: i64, hi: i64) -> BTreeSet<Tuple> {
    rows.iter().filter(|r| r.is_parametric()).flat_map(|r| (lo..=hi).map(|a| tuple(&r.instantiate(a)))).collect()
}

#[test]
fn table_matches_transcription() {
    let rows = emit_table(0, 12).unwrap();
    let published = transcription().unwrap();
    assert_eq!(published.len(), 93);
    let mut ours: BTreeMap<i64, (BTreeSet<Tuple>, BTreeSet<Tuple>, BTreeSet<(Tuple, String)>)> = BTreeMap::new();
    let mut theirs = ours.clone();
    for r in &rows {
        let e = ours.entry(r.solution.q).or_default();
        match r.solution.polynomial() {
            Some(f) => {
                e.0.insert(tuple(&f));
                e.2.insert((tuple(&f), r.positivity.to_string()));
            }
            None => {
                e.1.extend((-5..=5).map(|a| tuple(&r.solution.instantiate(a))));
                e.2.insert((tuple(&r.solution.instantiate(0)), r.positivity.to_string()));
            }
        }
    }
    for r in &published {
        let e = theirs.entry(r.q).or_default();
        if r.is_parametric() {
            e.1.extend((-5..=5).map(|a| tuple(&r.instantiate(a))));
        } else {
            e.0.insert(tuple(&r.instantiate(0)));
        }
        e.2.insert((tuple(&r.instantiate(0)), r.positivity.clone()));
    }
    assert_eq!(ours, theirs);
    // same rows, same canonical order, same spelling
    assert_eq!(to_csv(&rows), transcription_csv());
}

/// Left-hand side of (C); `det(I - ∧^3 A)` is its square in degree 6.
fn c_form(f: &IntPoly) -> BigInt {
    let c = |i: usize| f.coeff(i);
    let (c1, c2, c3, c4, c5) = (c(1), c(2), c(3), c(4), c(5));
    &c1 * &c1 * &c1 + &c1 * &c1 * &c4 + &c1 * &c3 * &c5 + &c2 * &c5 * &c5 + &c5 * &c5 * &c5 - 4 * &c1 * &c2
        + &c3 * &c3
        - 4 * &c2 * &c4
        - 2 * &c1 * &c5
        - 4 * &c4 * &c5
        + 4 * &c3
        + 4
}

#[test]
fn every_row_is_cs_with_matching_signs() {
    for q in -12..=12 {
        for row in solve_q(q).unwrap() {
            for a in -10..=10 {
                let f = row.instantiate(a);
                assert!(cs_core::is_cs(&f).unwrap(), "{f}");
                assert_eq!(det_i_minus_wedge(&f, 1).unwrap(), BigInt::from(row.signs.e1), "{f}");
                assert_eq!(det_i_minus_wedge(&f, 2).unwrap(), BigInt::from(row.signs.e2), "{f}");
                let c = c_form(&f);
                assert_eq!(c, BigInt::from(row.signs.e3), "{f}");
                assert_eq!(det_i_minus_wedge(&f, 3).unwrap(), &c * &c, "{f}");
                if !row.is_parametric() {
                    break;
                }
            }
        }
    }
}

#[test]
fn published_entries_corrected_in_transcription() {
    // printed in the q = 3 block, but c5 - c1 = 2 and f(1) = 0
    let printed = IntPoly::from_i64s(&[1, -18, 94, -136, 74, -16, 1]);
    assert_eq!(printed.eval(&BigInt::from(1)), BigInt::from(0));
    assert!(!cs_core::is_cs(&printed).unwrap());
    let fixed = IntPoly::from_i64s(&[1, -18, 94, -136, 74, -15, 1]);
    assert!(cs_core::is_cs(&fixed).unwrap());
    assert!(finite_tuples(&solve_q(3).unwrap()).contains(&tuple(&fixed)));
    // the q = 1 row (2a-1, a^2-3a, -2a^2+a-1, a^2-2a+1, 2a) is printed as positive for every a,
    // yet f(-1) = 4a^2 - 10a + 5 = -1 at a = 1
    let row = solve_q(1).unwrap().into_iter().find(|r| r.entry_texts()[3] == "-2a^2+a-1").unwrap();
    let f = row.instantiate(1);
    assert_eq!(f.eval(&BigInt::from(-1)), BigInt::from(-1));
    for a in 1..=6 {
        assert!(!cspoly::intpoly::is_positive(&row.instantiate(a)).unwrap(), "a = {a}");
    }
    for a in -6..=0 {
        assert!(cspoly::intpoly::is_positive(&row.instantiate(a)).unwrap(), "a = {a}");
    }
}

#[test]
fn reciprocal_closure() {
    for q in 1..=12 {
        let plus = solve_q(q).unwrap();
        let minus = solve_q(-q).unwrap();
        let flipped: BTreeSet<Tuple> =
            finite_tuples(&plus).iter().map(|t| tuple(&IntPoly::from_i64s(&[t.clone(), vec![1]].concat()).signed_reciprocal().unwrap())).collect();
        assert_eq!(flipped, finite_tuples(&minus), "q = {q}");
        let flip_all = |s: &BTreeSet<Tuple>| -> BTreeSet<Tuple> {
            s.iter().map(|t| tuple(&IntPoly::from_i64s(&[t.clone(), vec![1]].concat()).signed_reciprocal().unwrap())).collect()
        };
        // parametric rows may be parametrized differently; compare with slack
        let inner = flip_all(&instances(&plus, -20, 20));
        assert!(inner.is_subset(&instances(&minus, -60, 60)), "q = {q}");
        let inner = instances(&minus, -20, 20);
        assert!(inner.is_subset(&flip_all(&instances(&plus, -60, 60))), "q = {q}");
    }
}

#[test]
fn parametric_regimes_only_near_zero() {
    for q in -12..=12 {
        let any = solve_q(q).unwrap().iter().any(Degree6Solution::is_parametric);
        assert_eq!(any, (-1..=1).contains(&q), "q = {q}");
    }
}

#[test]
fn further_counts_of_four() {
    for q in [15, 16, 17, 20, 22, 23, 24, 29, 30, 32, 33, 34, 40] {
        assert_eq!(solve_q(q).unwrap().len(), 4, "q = {q}");
    }
}

#[test]
fn pruning_does_not_change_solutions() {
    let plain = SolverOptions { prune_mod_q: false, ..SolverOptions::default() };
    for q in -40..=40 {
        assert_eq!(solve_q(q).unwrap(), solve_q_with(q, &plain).unwrap(), "q = {q}");
    }
}

#[test]
fn basicness_of_degree_six_families() {
    for fam in cspoly::families::catalog(6).unwrap() {
        let f = fam.instantiate(&cspoly::families::assignment(&[('q', 5)])).unwrap();
        assert!(is_basic(&f).unwrap(), "{}", fam.id);
    }
    // every divisor of 8 ± 1 is basic for q = 2
    for row in solve_q(2).unwrap() {
        assert!(is_basic(&row.polynomial().unwrap()).unwrap());
    }
    let non_basic = (3..=12)
        .flat_map(|q| solve_q(q).unwrap())
        .filter(|r| !is_basic(&r.polynomial().unwrap()).unwrap())
        .count();
    assert!(non_basic > 0);
}

const FILTER_PRIME: u64 = 1_000_000_007;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % FILTER_PRIME;
        }
        b = b * b % FILTER_PRIME;
        e >>= 1;
    }
    r
}

/// `det(I - ∧^k A) mod p` for the sextic companion matrix, by Gaussian elimination on
/// a flat buffer. Kept apart from the library so the scan is an independent oracle.
fn det_wedge_mod(c: &[i64; 6], k: usize) -> u64 {
    let p = FILTER_PRIME as i64;
    let mut a = [[0i64; 6]; 6];
    for i in 0..5 {
        a[i][i + 1] = 1;
    }
    for j in 0..6 {
        a[5][j] = (-c[j]).rem_euclid(p);
    }
    let subsets: Vec<Vec<usize>> = (0u32..64).filter(|m| m.count_ones() as usize == k).map(|m| (0..6).filter(|i| m >> i & 1 == 1).collect()).collect();
    let mut subsets = subsets;
    subsets.sort();
    let minor = |r: &[usize], s: &[usize]| -> i64 {
        match k {
            2 => (a[r[0]][s[0]] * a[r[1]][s[1]] - a[r[0]][s[1]] * a[r[1]][s[0]]).rem_euclid(p),
            _ => {
                let m = |i: usize, j: usize| a[r[i]][s[j]] as i128;
                let d = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
                d.rem_euclid(p as i128) as i64
            }
        }
    };
    let n = subsets.len();
    let mut m = vec![0u64; n * n];
    for (r, rs) in subsets.iter().enumerate() {
        for (s, ss) in subsets.iter().enumerate() {
            let v = (i64::from(r == s) - minor(rs, ss)).rem_euclid(p);
            m[r * n + s] = v as u64;
        }
    }
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else { return 0 };
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
            }
            det = FILTER_PRIME - det;
        }
        let d = m[col * n + col];
        det = det * d % FILTER_PRIME;
        let inv = pow_mod(d, FILTER_PRIME - 2);
        for r in col + 1..n {
            let f = m[r * n + col] * inv % FILTER_PRIME;
            if f == 0 {
                continue;
            }
            for j in col..n {
                let sub = f * m[col * n + j] % FILTER_PRIME;
                m[r * n + j] = (m[r * n + j] + FILTER_PRIME - sub) % FILTER_PRIME;
            }
        }
    }
    det % FILTER_PRIME
}

/// Direct scan of `c5 - c1 = q` inside `bounds` for (c1, c2, c4); `c3` follows from f(1) = ±1.
fn brute_force(q: i64, bounds: [(i64, i64); 4]) -> BTreeSet<Tuple> {
    let [(l1, h1), (l2, h2), (l3, h3), (l4, h4)] = bounds;
    (l1..=h1)
        .into_par_iter()
        .flat_map_iter(|c1| {
            let mut hits = Vec::new();
            for c2 in l2..=h2 {
                for c4 in l4..=h4 {
                    let c5 = c1 + q;
                    for e1 in [1, -1] {
                        let c3 = e1 - 2 - c1 - c2 - c4 - c5;
                        if c3 < l3 || c3 > h3 {
                            continue;
                        }
                        let c = [1, c1, c2, c3, c4, c5];
                        let unit = |d: u64| d == 1 || d == FILTER_PRIME - 1;
                        if !unit(det_wedge_mod(&c, 2)) || !unit(det_wedge_mod(&c, 3)) {
                            continue;
                        }
                        let f = IntPoly::from_i64s(&[1, c1, c2, c3, c4, c5, 1]);
                        if cs_core::is_cs(&f).unwrap() {
                            hits.push(tuple(&f));
                        }
                    }
                }
            }
            hits
        })
        .collect()
}

/// For each q in 0..=6 the scan box is the hull of the solver's finite rows padded by 2
/// (or [-6, 6] when there are none); the rows found must be exactly the solver's.
#[test]
fn brute_force_cross_oracle() {
    for q in 0..=6 {
        let rows = solve_q(q).unwrap();
        let finite = finite_tuples(&rows);
        let mut bounds = [(-6i64, 6i64); 4];
        if !finite.is_empty() {
            for (slot, idx) in [1usize, 2, 3, 4].into_iter().enumerate() {
                let vals: Vec<i64> = finite.iter().map(|t| t[idx]).collect();
                bounds[slot] = (vals.iter().min().unwrap() - 2, vals.iter().max().unwrap() + 2);
            }
        }
        let in_box = |t: &Tuple| (0..4).all(|i| t[i + 1] >= bounds[i].0 && t[i + 1] <= bounds[i].1);
        let mut expected: BTreeSet<Tuple> = finite.iter().filter(|t| in_box(t)).cloned().collect();
        expected.extend(instances(&rows, -200, 200).into_iter().filter(|t| in_box(t)));
        assert_eq!(brute_force(q, bounds), expected, "q = {q}, box {bounds:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rows_satisfy_defining_relations(q in -40i64..=40) {
        for row in solve_q(q).unwrap() {
            let f = row.instantiate(3);
            let c = |i: usize| f.coeff(i);
            prop_assert_eq!(c(5) - c(1), BigInt::from(q));
            let p = c(4) - c(2);
            prop_assert_eq!(p + BigInt::from(2 * q), row.divisor.eval(&cspoly::families::assignment(&[('a', 3)])).unwrap());
            prop_assert!(cs_core::is_cs(&f).unwrap());
        }
    }
}
