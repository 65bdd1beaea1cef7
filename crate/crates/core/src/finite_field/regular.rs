use super::ext::{roots_in_extension, ExtField};
use super::field::{FieldOps, PrimeField};
use super::fp::FpPoly;
use crate::error::{Error, Result};
use crate::intpoly::k_subsets;

/// Roots `α_{i1} ⋯ α_{ik} = 1` found in `F_{p^m}`. Indices refer to the
/// root list with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityViolation {
    pub p: u64,
    pub k: usize,
    pub indices: Vec<usize>,
    pub field_degree: usize,
}

fn check_k(f: &FpPoly, k: usize) -> Result<usize> {
    let n = f.require_doubly_monic()?;
    if k == 0 || k > n / 2 {
        return Err(Error::IndexOutOfRange { k, max: n / 2 });
    }
    Ok(n)
}

fn product_one(field: &ExtField, roots: &[Vec<u64>], k: usize, start: usize, acc: &[u64], chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return acc == [1];
    }
    let need = k - chosen.len();
    for i in start..=roots.len() - need {
        chosen.push(i);
        let next = field.mul(&acc.to_vec(), &roots[i]);
        if product_one(field, roots, k, i + 1, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn search(f: &FpPoly, ks: impl IntoIterator<Item = usize>) -> Result<Option<RegularityViolation>> {
    let m = f.splitting_degree()?;
    let field = ExtField::with_degree(f.p(), m)?;
    let roots: Vec<Vec<u64>> = roots_in_extension(f, &field)?.iter().map(|r| r.rep().to_vec()).collect();
    for k in ks {
        let mut chosen = Vec::with_capacity(k);
        if product_one(&field, &roots, k, 0, &[1], &mut chosen) {
            return Ok(Some(RegularityViolation { p: f.p(), k, indices: chosen, field_degree: m }));
        }
    }
    Ok(None)
}

/// First `k`-subset of roots with product 1, if any.
pub fn k_regularity_violation(f: &FpPoly, k: usize) -> Result<Option<RegularityViolation>> {
    check_k(f, k)?;
    search(f, [k])
}

/// No product of `k` roots (distinct indices, counted with multiplicity) equals 1.
pub fn is_k_regular_mod_p(f: &FpPoly, k: usize) -> Result<bool> {
    Ok(k_regularity_violation(f, k)?.is_none())
}

/// Smallest `k <= n/2` at which regularity fails, with its witness.
pub fn regularity_violation(f: &FpPoly) -> Result<Option<RegularityViolation>> {
    let n = f.require_doubly_monic()?;
    search(f, 1..=n / 2)
}

pub fn is_regular_mod_p(f: &FpPoly) -> Result<bool> {
    Ok(regularity_violation(f)?.is_none())
}

/// Determinant of a flat `n x n` matrix over `F_p`, consuming it.
fn det_mod(field: &PrimeField, a: &mut [u64], n: usize) -> u64 {
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = field.neg(&det);
        }
        let d = a[col * n + col];
        det = field.mul(&det, &d);
        let inv = field.inv(&d);
        for r in col + 1..n {
            if a[r * n + col] == 0 {
                continue;
            }
            let factor = field.mul(&a[r * n + col], &inv);
            for c in col..n {
                let sub = field.mul(&factor, &a[col * n + c]);
                a[r * n + c] = field.sub(&a[r * n + c], &sub);
            }
        }
    }
    det
}

/// `det(I - ∧^k A)` in `F_p`, `A` the companion matrix of `f`.
///
/// Row `i < n-1` of `A` is the unit vector `e_{i+1}`, so a minor with row set
/// `S` vanishes unless its column set contains `i+1` for every such `i` in `S`.
pub fn det_i_minus_wedge_mod_p(f: &FpPoly, k: usize) -> Result<u64> {
    let n = check_k(f, k)?;
    let field = f.field();
    let mut comp = vec![0u64; n * n];
    for i in 0..n - 1 {
        comp[i * n + i + 1] = 1;
    }
    for j in 0..n {
        comp[(n - 1) * n + j] = field.neg(&f.coeff(j));
    }
    let subsets = k_subsets(n, k);
    let size = subsets.len();
    let mut m = vec![0u64; size * size];
    let mut scratch = vec![0u64; k * k];
    for (r, rows) in subsets.iter().enumerate() {
        for (c, cols) in subsets.iter().enumerate() {
            let forced = rows.iter().all(|&i| i == n - 1 || cols.contains(&(i + 1)));
            let minor = if forced {
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        scratch[a * k + b] = comp[i * n + j];
                    }
                }
                det_mod(&field, &mut scratch, k)
            } else {
                0
            };
            m[r * size + c] = field.sub(&u64::from(r == c), &minor);
        }
    }
    Ok(det_mod(&field, &mut m, size))
}

/// The determinant form of the same condition: `det(I - ∧^k A) != 0` in `F_p`.
pub fn is_k_regular_mod_p_by_det(f: &FpPoly, k: usize) -> Result<bool> {
    Ok(det_i_minus_wedge_mod_p(f, k)? != 0)
}
