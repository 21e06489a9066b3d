// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear-algebra helpers shared by the operator,
//! spin and pulse layers.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `i^k` for any integer `k`, exact on the four axis points.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// `e^{i theta}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::from_diag_elem(dim, ONE)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product `a ⊗ b`, with `a` on the high-order index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMatrix::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == ZERO {
            continue;
        }
        for ((k, l), &y) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = x * y;
        }
    }
    out
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest `|(U†U − I)_{ij}|`.
pub fn unitarity_error(m: &CMatrix) -> f64 {
    let prod = dagger(m).dot(m);
    max_abs_diff(&prod, &identity(m.nrows()))
}

/// Result of comparing two arrays after removing a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAlignment {
    /// Unit-modulus factor `g` such that `actual ≈ g · reference`.
    pub global_phase: Complex64,
    pub max_abs_error: f64,
}

/// Aligns `actual` to `reference` using the phase of the ratio at the
/// largest-modulus entry of `reference`, then reports the worst elementwise
/// deviation.
pub fn align_global_phase<'a, A, B>(actual: A, reference: B) -> PhaseAlignment
where
    A: IntoIterator<Item = &'a Complex64>,
    B: IntoIterator<Item = &'a Complex64>,
{
    let pairs: Vec<(Complex64, Complex64)> = actual
        .into_iter()
        .copied()
        .zip(reference.into_iter().copied())
        .collect();
    let pivot = pairs
        .iter()
        .enumerate()
        .max_by(|(_, (_, a)), (_, (_, b))| a.norm().total_cmp(&b.norm()))
        .map(|(i, _)| i);

    let global_phase = match pivot {
        Some(i) if pairs[i].1.norm() > 1e-300 && pairs[i].0.norm() > 1e-300 => {
            let ratio = pairs[i].0 / pairs[i].1;
            ratio / ratio.norm()
        }
        _ => ONE,
    };
    let max_abs_error = pairs
        .iter()
        .map(|(a, r)| (a - global_phase * r).norm())
        .fold(0.0, f64::max);
    PhaseAlignment {
        global_phase,
        max_abs_error,
    }
}

pub fn pauli_x() -> CMatrix {
    ndarray::array![[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_y() -> CMatrix {
    ndarray::array![[ZERO, -I], [I, ZERO]]
}

pub fn pauli_z() -> CMatrix {
    ndarray::array![[ONE, ZERO], [ZERO, -ONE]]
}

/// `exp(−iθσ/2) = cos(θ/2)·1 − i·sin(θ/2)·σ` for a Pauli matrix `σ`.
pub fn rotation(sigma: &CMatrix, theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    identity(2).mapv(|z| z * c) - sigma.mapv(|z| z * I * s)
}

/// Lifts a `2×2` operator onto spin `spin` (1-based, spin 1 on the most
/// significant bit) of an `n`-spin register.
pub fn embed_single(n: usize, spin: usize, op: &CMatrix) -> CMatrix {
    assert!(
        (1..=n).contains(&spin),
        "spin {spin} out of range for {n} spins"
    );
    let left = identity(1 << (spin - 1));
    let right = identity(1 << (n - spin));
    kron(&kron(&left, op), &right)
}

/// `U ρ U†`.
pub fn conjugate(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u.dot(rho).dot(&dagger(u))
}

/// In-place unnormalized Walsh-Hadamard butterfly over `data.len()` (a power
/// of two) entries: `out[r] = Σ_s (−1)^{|r∧s|} in[s]`.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let len = data.len();
    assert!(
        len.is_power_of_two(),
        "butterfly length must be a power of two"
    );
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let a = data[i];
                let b = data[i + half];
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// Reverses the low `width` bits of `value`.
pub fn reverse_bits(value: u32, width: usize) -> u32 {
    if width == 0 {
        return 0;
    }
    value.reverse_bits() >> (32 - width)
}
