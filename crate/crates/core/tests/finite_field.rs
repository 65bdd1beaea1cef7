use cspoly::finite_field::{
    is_k_regular_mod_p, is_k_regular_mod_p_by_det, is_regular_mod_p, reduce_mod_p, roots_in_extension, ExtField, FpPoly,
};
use cspoly::IntPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp(p: u64, desc: &[i64]) -> FpPoly {
    FpPoly::from_descending(p, desc).unwrap()
}

/// Monic polynomials of degree `n` over `F_p` with the given constant term.
fn monic_with_constant(p: u64, n: usize, c0: u64) -> impl Iterator<Item = FpPoly> {
    let free = n.saturating_sub(1) as u32;
    (0..p.pow(free)).map(move |mut code| {
        let mut c = vec![c0];
        for _ in 1..n {
            c.push(code % p);
            code /= p;
        }
        c.push(1);
        if n == 0 {
            c.truncate(1);
        }
        FpPoly::new(p, c).unwrap()
    })
}

fn doubly_monic(p: u64, n: usize) -> impl Iterator<Item = FpPoly> {
    let c0 = if n % 2 == 0 { 1 } else { p - 1 };
    monic_with_constant(p, n, c0 % p)
}

/// Root-product check without the doubly monic requirement: is there a
/// `k`-subset of the roots (with multiplicity) whose product is 1?
fn some_product_is_one(f: &FpPoly, k: usize) -> bool {
    let field = ExtField::with_degree(f.p(), f.splitting_degree().unwrap()).unwrap();
    let roots = roots_in_extension(f, &field).unwrap();
    fn walk(roots: &[cspoly::finite_field::ExtFieldElem<'_>], k: usize, start: usize, acc: cspoly::finite_field::ExtFieldElem<'_>) -> bool {
        if k == 0 {
            return acc.is_one();
        }
        (start..roots.len()).any(|i| walk(roots, k - 1, i + 1, acc.mul(&roots[i])))
    }
    walk(&roots, k, 0, field.element(&[1]))
}

#[test]
fn reduction_examples() {
    let f = IntPoly::from_descending(&[1, 0, 0, 0, -1, -1]);
    assert_eq!(reduce_mod_p(&f, 2).unwrap(), fp(2, &[1, 0, 0, 0, 1, 1]));
    assert_eq!(reduce_mod_p(&IntPoly::from_descending(&[1, 0, 0, 6, -3]), 3).unwrap(), fp(3, &[1, 0, 0, 0, 0]));
    let g = IntPoly::from_descending(&[1, 1, -1, 1, 0, 0, 0, 1, 1]);
    assert_eq!(reduce_mod_p(&g, 3).unwrap().coeffs(), &[1, 1, 0, 0, 0, 1, 2, 1, 1]);
    assert!(reduce_mod_p(&f, 9).is_err());
}

#[test]
fn documented_factorizations() {
    let f2 = fp(2, &[1, 0, 0, 0, 1, 1]);
    let fac = f2.factor().unwrap();
    assert_eq!(fac, vec![(fp(2, &[1, 1, 1]), 1), (fp(2, &[1, 1, 0, 1]), 1)]);
    assert_eq!(f2.splitting_degree().unwrap(), 6);
    assert!(!f2.is_irreducible().unwrap());
    assert!(!is_regular_mod_p(&f2).unwrap());
    assert!(!is_k_regular_mod_p(&f2, 2).unwrap());

    let f3 = fp(3, &[1, 1, -1, 1, 0, 0, 0, 1, 1]);
    assert_eq!(f3.factor().unwrap(), vec![(fp(3, &[1, -1, -1, 1, -1]), 2)]);
    // reducible but regular
    assert!(is_regular_mod_p(&f3).unwrap());

    let field = ExtField::with_degree(2, 6).unwrap();
    assert_eq!(roots_in_extension(&f2, &field).unwrap().len(), 5);
    assert!(roots_in_extension(&f2, &ExtField::with_degree(2, 3).unwrap()).is_err());
}

#[test]
fn regularity_examples() {
    assert!(is_k_regular_mod_p(&fp(5, &[1, -1, 1]), 1).unwrap());
    assert!(is_k_regular_mod_p(&fp(3, &[1, 0, 0, -1, 1]), 2).unwrap());
    assert!(is_regular_mod_p(&fp(7, &[1, -3, 1])).unwrap());
    assert!(is_k_regular_mod_p(&fp(3, &[1, 0, 0, 0, -1]), 1).is_err());
    assert!(is_k_regular_mod_p(&fp(3, &[1, 0, 0, -1, 1]), 3).is_err());
}

#[test]
fn factorizations_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..10_000 {
        let p = [2u64, 3, 5, 7, 1009][i % 5];
        let n = rng.gen_range(1..=10);
        let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        c.push(rng.gen_range(1..p.max(2)));
        let f = FpPoly::new(p, c).unwrap();
        let factors = f.factor().unwrap();
        let mut prod = FpPoly::new(p, vec![*f.coeffs().last().unwrap()]).unwrap();
        for (g, m) in &factors {
            assert!(g.is_monic() && g.is_irreducible().unwrap(), "{g:?}");
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f);
        assert!(factors.windows(2).all(|w| w[0].0.degree() <= w[1].0.degree()));
    }
}

/// Over F_2 with nonzero constant term, up to degree 8: regular iff
/// irreducible and primitive, and regular implies irreducible.
#[test]
fn binary_regularity_is_primitivity() {
    let mut regular_count = 0;
    for n in 2..=8 {
        for f in monic_with_constant(2, n, 1) {
            let regular = is_regular_mod_p(&f).unwrap();
            let irreducible = f.is_irreducible().unwrap();
            let primitive = irreducible && f.is_primitive().unwrap();
            assert_eq!(regular, primitive, "{f:?}");
            if regular {
                assert!(irreducible);
                regular_count += 1;
            }
        }
    }
    // primitive polynomials over F_2 of degree n: phi(2^n - 1) / n
    assert_eq!(regular_count, 1 + 2 + 2 + 6 + 6 + 18 + 16);
}

/// Irreducible and primitive implies regular, sampled over F_3 and F_5. The
/// constant term of such a polynomial is never (-1)^n for odd p, so the
/// root products are checked directly.
#[test]
fn primitive_implies_regular_odd_primes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for p in [3u64, 5] {
        let mut checked = 0;
        while checked < 60 {
            let n = rng.gen_range(2..=8usize);
            let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            c.push(1);
            let f = FpPoly::new(p, c).unwrap();
            if f.coeff(0) == 0 || !f.is_irreducible().unwrap() || !f.is_primitive().unwrap() {
                continue;
            }
            for k in 1..=n / 2 {
                assert!(!some_product_is_one(&f, k), "{f:?} k={k}");
            }
            checked += 1;
        }
    }
}

#[test]
fn root_products_agree_with_determinant_exhaustively() {
    for p in [2u64, 3] {
        for n in 2..=6 {
            for f in doubly_monic(p, n) {
                for k in 1..=n / 2 {
                    let by_roots = is_k_regular_mod_p(&f, k).unwrap();
                    assert_eq!(by_roots, is_k_regular_mod_p_by_det(&f, k).unwrap(), "{f:?} k={k}");
                    assert_eq!(by_roots, !some_product_is_one(&f, k), "{f:?} k={k}");
                }
            }
        }
    }
}

#[test]
fn root_products_agree_with_determinant_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [5u64, 7, 11, 13, 101] {
        for _ in 0..80 {
            let n = rng.gen_range(2..=6usize);
            let mut c: Vec<u64> = vec![if n % 2 == 0 { 1 } else { p - 1 }];
            c.extend((1..n).map(|_| rng.gen_range(0..p)));
            c.push(1);
            let f = FpPoly::new(p, c).unwrap();
            for k in 1..=n / 2 {
                assert_eq!(is_k_regular_mod_p(&f, k).unwrap(), is_k_regular_mod_p_by_det(&f, k).unwrap(), "{f:?} k={k}");
            }
        }
    }
}
