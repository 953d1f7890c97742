//! Reference implementations used as oracles by the integration tests.
//!
//! The blade algebra here works on explicit lists of basis-vector indices
//! and reduces them by adjacent transpositions, independent of the bitmask
//! arithmetic in the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use gibbs_core::{Multivector, Vec3};

/// A multivector as a map from a sorted index list (e.g. `[1, 3]` for e₁e₃)
/// to its coefficient.
pub type Oracle = BTreeMap<Vec<u8>, f64>;

/// Canonical blade order of the library's coefficient array.
pub const BLADES: [&[u8]; 8] = [&[], &[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];

/// Reduces a word of basis vectors to a sorted blade and a sign, using
/// eᵢeⱼ = −eⱼeᵢ for i ≠ j and eᵢeᵢ = 1.
pub fn reduce(word: &[u8]) -> (Vec<u8>, f64) {
    let mut w = word.to_vec();
    let mut sign = 1.0;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            if w[i] == w[i + 1] {
                w.drain(i..i + 2);
                changed = true;
            } else if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
                changed = true;
                i += 1;
            } else {
                i += 1;
            }
        }
        if !changed {
            return (w, sign);
        }
    }
}

pub fn product(a: &Oracle, b: &Oracle) -> Oracle {
    let mut out = Oracle::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let word: Vec<u8> = wa.iter().chain(wb).copied().collect();
            let (blade, sign) = reduce(&word);
            *out.entry(blade).or_insert(0.0) += sign * ca * cb;
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

pub fn grade(a: &Oracle, k: usize) -> Oracle {
    a.iter()
        .filter(|(w, _)| w.len() == k)
        .map(|(w, c)| (w.clone(), *c))
        .collect()
}

pub fn add(a: &Oracle, b: &Oracle) -> Oracle {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert(0.0) += c;
    }
    out.retain(|_, c| *c != 0.0);
    out
}

pub fn basis(indices: &[u8]) -> Oracle {
    let (blade, sign) = reduce(indices);
    Oracle::from([(blade, sign)])
}

pub fn scalar(s: f64) -> Oracle {
    Oracle::from([(Vec::new(), s)])
}

pub fn vector(v: Vec3) -> Oracle {
    let mut out = Oracle::new();
    for (i, c) in v.to_array().into_iter().enumerate() {
        if c != 0.0 {
            out.insert(vec![i as u8 + 1], c);
        }
    }
    out
}

pub fn to_oracle(m: &Multivector) -> Oracle {
    let mut out = Oracle::new();
    for (blade, c) in BLADES.iter().zip(m.coefficients()) {
        if c != 0.0 {
            out.insert(blade.to_vec(), c);
        }
    }
    out
}

pub fn from_oracle(o: &Oracle) -> Multivector {
    let mut coeffs = [0.0; 8];
    for (w, c) in o {
        let slot = BLADES.iter().position(|b| *b == w.as_slice()).expect("reduced blade");
        coeffs[slot] += c;
    }
    Multivector::from_coefficients(coeffs)
}

/// Oracle dot product of a j-grade and a k-grade part: grade |j − k| of
/// their geometric product.
pub fn dot(a: &Oracle, b: &Oracle) -> Oracle {
    let mut out = Oracle::new();
    for j in 0..=3 {
        for k in 0..=3 {
            let p = product(&grade(a, j), &grade(b, k));
            out = add(&out, &grade(&p, j.abs_diff(k)));
        }
    }
    out
}

/// Oracle outer product: grade j + k of the product of grade parts.
pub fn wedge(a: &Oracle, b: &Oracle) -> Oracle {
    let mut out = Oracle::new();
    for j in 0..=3 {
        for k in 0..=3 {
            let p = product(&grade(a, j), &grade(b, k));
            out = add(&out, &grade(&p, j + k));
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `‖a − b‖∞ / max(‖a‖∞, ‖b‖∞, floor)`.
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let scale = max_abs(a).max(max_abs(b)).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        max_abs_diff(a, b) / scale
    }
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    Vec3::new(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)
}

/// `Σ_i c_i T_ij` by explicit loops.
pub fn left_contract(c: [f64; 3], t: [[f64; 3]; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in t.iter().enumerate() {
        for (j, tij) in row.iter().enumerate() {
            out[j] += c[i] * tij;
        }
    }
    out
}

/// `Σ_j T_ij c_j` by explicit loops.
pub fn right_contract(t: [[f64; 3]; 3], c: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in t.iter().enumerate() {
        for (j, tij) in row.iter().enumerate() {
            out[i] += tij * c[j];
        }
    }
    out
}

pub fn flat(t: [[f64; 3]; 3]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

#[test]
fn oracle_reduction() {
    assert_eq!(reduce(&[2, 1]), (vec![1, 2], -1.0));
    assert_eq!(reduce(&[1, 2, 1]), (vec![2], -1.0));
    assert_eq!(reduce(&[3, 2, 1]), (vec![1, 2, 3], -1.0));
    assert_eq!(reduce(&[1, 2, 1, 2]), (vec![], -1.0));
}
