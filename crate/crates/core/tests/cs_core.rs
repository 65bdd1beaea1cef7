use cspoly::cs_core::{
    cs_condition, det_i_minus_wedge, exterior_square_mod_p, is_2_regular_via_reciprocal, is_3_regular_via_exterior, is_cs,
    verify, verify_with, VerifyOptions, Witness,
};
use cspoly::dioph6::emit_table;
use cspoly::families::{all_families, parameter_grid};
use cspoly::finite_field::{is_k_regular_mod_p, is_regular_mod_p, reduce_mod_p, roots_in_extension, ExtField, FpPoly};
use cspoly::primes::first_primes;
use cspoly::{Error, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(desc: &[i64]) -> IntPoly {
    IntPoly::from_descending(desc)
}

/// Doubly monic `x^n + ... + (-1)^n` with middle coefficients from `mid` (`c1..c_{n-1}`).
fn doubly_monic(mid: &[i64]) -> IntPoly {
    let n = mid.len() + 1;
    let mut c = vec![if n % 2 == 0 { 1 } else { -1 }];
    c.extend_from_slice(mid);
    c.push(1);
    IntPoly::from_i64s(&c)
}

fn box_points(dim: usize, side: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * side + 1) as u64;
    (0..width.pow(dim as u32)).map(move |mut code| {
        (0..dim)
            .map(|_| {
                let v = (code % width) as i64 - side;
                code /= width;
                v
            })
            .collect()
    })
}

/// Every CS instance the crate knows about: family rows of degree 2 to 7 on a
/// small grid and the degree-6 table for `q` in 0..=12 at `a` in -3..=3.
fn known_cs() -> Vec<IntPoly> {
    let mut out = Vec::new();
    for fam in all_families() {
        let side = if fam.params.len() > 1 { 2 } else { 6 };
        for v in parameter_grid(&fam.params, -side, side) {
            out.push(fam.instantiate(&v).unwrap());
        }
    }
    for row in emit_table(0, 12).unwrap() {
        for a in -3..=3 {
            out.push(row.solution.instantiate(a));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn condition_examples() {
    let r = cs_condition(&p(&[1, -3, 1]), 1).unwrap();
    assert_eq!((r.det_value, r.holds), (BigInt::from(-1), true));
    for (c1, c3) in [(0, 0), (1, 3), (-2, 4)] {
        let f = p(&[1, c3, 5, c1, 1]);
        assert_eq!(cs_condition(&f, 2).unwrap().det_value, BigInt::from(-(c3 - c1) * (c3 - c1)));
    }
    let f = p(&[1, -9, 28, -43, 35, -12, 1]);
    assert!((1..=3).all(|k| cs_condition(&f, k).unwrap().holds));
    assert!(matches!(cs_condition(&f, 4), Err(Error::IndexOutOfRange { .. })));
    assert!(cs_condition(&f, 0).is_err());
}

#[test]
fn verify_examples() {
    let r = verify(&p(&[1, -1, 1])).unwrap();
    assert!(r.is_cs && r.is_positive && r.witnesses.is_none());

    let r = verify(&p(&[1, -2, -3, 3, -5, 6, -4, 4, 1])).unwrap();
    assert!(!r.is_cs);
    let w = r.witnesses.unwrap();
    assert!(!w.is_empty());
    assert!(w.iter().all(|e| r.conditions[e.k - 1].holds == false));

    assert!(verify(&p(&[1, 0, 0, 0, 5])).is_err());
    assert!(verify(&p(&[1, 1])).is_err());
    assert!(verify(&IntPoly::from_i64s(&[1, 0, 2])).is_err());
}

#[test]
fn witness_kinds() {
    // det(I - ∧²A) = 0 when c3 = c1 in degree 4
    let r = verify(&p(&[1, 2, 0, 2, 1])).unwrap();
    let w = r.witnesses.unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(w[1].witness, Witness::RationalObstruction);
    let small = VerifyOptions { witnesses: true, witness_bound: 2 };
    let r = verify_with(&p(&[1, 0, 0, 0, 7, -1]), &small).unwrap();
    let w = r.witnesses.unwrap();
    assert!(matches!(w[0].witness, Witness::CompositeWitness { .. }) || matches!(w[0].witness, Witness::Prime { .. }));
}

/// `f` is CS iff `f*` is, exhaustively for degree 2 to 5 on `[-4, 4]` and
/// sampled for degree 6.
#[test]
fn cs_is_closed_under_signed_reciprocal() {
    let mut found = 0;
    for n in 2..=5 {
        for mid in box_points(n - 1, 4) {
            let f = doubly_monic(&mid);
            let cs = is_cs(&f).unwrap();
            assert_eq!(cs, is_cs(&f.signed_reciprocal().unwrap()).unwrap(), "{f}");
            found += cs as usize;
        }
    }
    assert!(found > 50);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..3000 {
        let mid: Vec<i64> = (0..5).map(|_| rng.gen_range(-4..=4)).collect();
        let f = doubly_monic(&mid);
        assert_eq!(is_cs(&f).unwrap(), is_cs(&f.signed_reciprocal().unwrap()).unwrap(), "{f}");
    }
    for f in known_cs().iter().filter(|f| f.degree() == Some(6)) {
        assert!(is_cs(&f.signed_reciprocal().unwrap()).unwrap(), "{f}");
    }
}

/// A CS polynomial is regular modulo every prime; spot check the first ten.
#[test]
fn cs_polynomials_are_regular_mod_small_primes() {
    let primes = first_primes(10);
    for f in known_cs().iter().filter(|f| f.degree().unwrap() <= 6).step_by(3) {
        for &q in &primes {
            assert!(is_regular_mod_p(&reduce_mod_p(f, q).unwrap()).unwrap(), "{f} mod {q}");
        }
    }
}

/// Every prime witness breaks `k`-regularity mod that prime; a rational
/// obstruction breaks it mod every prime.
#[test]
fn witnesses_violate_regularity() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut primes_seen, mut zeros_seen) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(4..=6usize);
        let mid: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
        let f = doubly_monic(&mid);
        let Some(witnesses) = verify(&f).unwrap().witnesses else { continue };
        for w in witnesses {
            match w.witness {
                Witness::Prime { value } => {
                    let q = value.to_u64().unwrap();
                    assert!(!is_k_regular_mod_p(&reduce_mod_p(&f, q).unwrap(), w.k).unwrap(), "{f} k={} p={q}", w.k);
                    primes_seen += 1;
                }
                Witness::RationalObstruction => {
                    for q in first_primes(4) {
                        assert!(!is_k_regular_mod_p(&reduce_mod_p(&f, q).unwrap(), w.k).unwrap());
                    }
                    zeros_seen += 1;
                }
                Witness::CompositeWitness { value } => panic!("{f}: no small factor of {value}"),
            }
        }
    }
    assert!(primes_seen > 100 && zeros_seen > 5, "{primes_seen} {zeros_seen}");
}

/// Every CS polynomial is irreducible over F_2.
#[test]
fn cs_polynomials_are_irreducible_mod_2() {
    let all = known_cs();
    assert!(all.len() > 500);
    for f in &all {
        assert!(reduce_mod_p(f, 2).unwrap().is_irreducible().unwrap(), "{f}");
    }
}

#[test]
fn reciprocal_criterion_on_degree_four() {
    let fam = cspoly::families::family("deg4/row1").unwrap();
    for v in parameter_grid(&fam.params, -6, 6) {
        let f = fam.instantiate(&v).unwrap();
        for q in first_primes(10) {
            let fp = reduce_mod_p(&f, q).unwrap();
            assert!(is_2_regular_via_reciprocal(&fp).unwrap(), "{f} mod {q}");
        }
    }
    // p | c3 - c1 makes f_p self-reciprocal
    for (c1, c2, c3, q) in [(1, 0, 4, 3), (2, -1, 7, 5), (0, 3, 0, 7)] {
        let fp = reduce_mod_p(&p(&[1, c3, c2, c1, 1]), q).unwrap();
        if fp.eval(1) == 0 {
            continue;
        }
        assert_eq!(fp, fp.signed_reciprocal().unwrap());
        assert!(!is_2_regular_via_reciprocal(&fp).unwrap());
    }
    assert!(!is_2_regular_via_reciprocal(&FpPoly::from_descending(3, &[1, 1, 1, 1, 1]).unwrap()).unwrap());
    assert!(is_2_regular_via_reciprocal(&FpPoly::from_descending(3, &[1, 0, 1, 1]).unwrap()).is_err());
}

#[test]
fn reciprocal_criterion_matches_root_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 400 {
        let q = [2u64, 3, 5, 7, 11][rng.gen_range(0..5)];
        let n = rng.gen_range(4..=7usize);
        let mid: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..q as i64)).collect();
        let fp = reduce_mod_p(&doubly_monic(&mid), q).unwrap();
        if fp.eval(1) == 0 {
            continue;
        }
        assert_eq!(is_2_regular_via_reciprocal(&fp).unwrap(), is_k_regular_mod_p(&fp, 2).unwrap(), "{fp:?}");
        checked += 1;
    }
}

#[test]
fn exterior_criterion_worked_example() {
    let f = p(&[1, 1, -1, -2, 0, 1, 1]);
    let wedge = f.exterior_power(2).unwrap();
    let star = f.signed_reciprocal().unwrap();
    let (_, r) = wedge.div_rem_monic(&star).unwrap();
    assert_eq!(r, p(&[4, -7, 0, 7, 2, -4]));
    let g = r.coeffs().iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    assert!(g.is_one());
    let mut separable = 0;
    for q in first_primes(40) {
        let fp = reduce_mod_p(&f, q).unwrap();
        assert_eq!(exterior_square_mod_p(&fp).unwrap(), reduce_mod_p(&wedge, q).unwrap());
        match is_3_regular_via_exterior(&fp) {
            Ok(v) => {
                assert!(v, "mod {q}");
                separable += 1;
            }
            Err(Error::Inseparable(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(separable >= 35);
    assert_eq!(det_i_minus_wedge(&f, 3).unwrap().abs(), BigInt::one());
}

/// Some `α_i² α_j = 1` with `i != j`.
fn square_times_root_is_one(f: &FpPoly) -> bool {
    let field = ExtField::with_degree(f.p(), f.splitting_degree().unwrap()).unwrap();
    let r = roots_in_extension(f, &field).unwrap();
    (0..r.len()).any(|i| (0..r.len()).any(|j| i != j && r[i].mul(&r[i]).mul(&r[j]).is_one()))
}

/// A `true` verdict is always right. Every `false` verdict is either right or
/// explained by a root relation `α_i² α_j = 1`.
#[test]
fn exterior_criterion_against_root_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut checked, mut irregular, mut spurious) = (0, 0, 0);
    while checked < 300 {
        let q = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let n = rng.gen_range(6..=8usize);
        let mid: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..q as i64)).collect();
        let fp = reduce_mod_p(&doubly_monic(&mid), q).unwrap();
        if !fp.is_separable() {
            assert!(is_3_regular_via_exterior(&fp).is_err());
            continue;
        }
        let by_roots = is_k_regular_mod_p(&fp, 3).unwrap();
        let by_exterior = is_3_regular_via_exterior(&fp).unwrap();
        if by_exterior {
            assert!(by_roots, "{fp:?}");
        } else if by_roots {
            assert!(square_times_root_is_one(&fp), "{fp:?}");
            spurious += 1;
        } else {
            irregular += 1;
        }
        checked += 1;
    }
    assert!(irregular > 10);
    assert!(spurious > 0);
    assert!(is_3_regular_via_exterior(&FpPoly::from_descending(5, &[1, 0, 0, 0, 1]).unwrap()).is_err());
}

#[test]
fn exterior_criterion_converse_fails() {
    // (x^4 + x + 1)(x^4 + x^3 + 1): 3-regular, yet f^∧2 and f* share a root
    let f = FpPoly::from_descending(2, &[1, 1, 0, 1, 1, 1, 0, 1, 1]).unwrap();
    assert!(f.is_separable());
    assert!(is_k_regular_mod_p(&f, 3).unwrap());
    assert!(!is_3_regular_via_exterior(&f).unwrap());
    assert!(square_times_root_is_one(&f));
}
