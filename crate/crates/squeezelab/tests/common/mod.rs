//! Dense-matrix oracles, independent of the crate's banded machinery.
//!
//! Everything here is built entry by entry from the raw ladder-operator
//! definitions and diagonalized with nalgebra, so agreement with the crate
//! is evidence, not circularity.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};

pub type CMatrix = DMatrix<Complex<f64>>;
pub type CVector = DVector<Complex<f64>>;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// `√((k+1)(k+2)…(k+n))`, the (a†)ⁿ matrix element `⟨k+n|(a†)ⁿ|k⟩`.
pub fn ladder_amp(n: u32, k: usize) -> f64 {
    (1..=n as usize)
        .map(|j| (k + j) as f64)
        .product::<f64>()
        .sqrt()
}

/// Dense `i[(a†)ⁿ − aⁿ]` on Fock states `|0⟩ … |dim−1⟩`.
pub fn classical_dense(n: u32, dim: usize) -> CMatrix {
    let mut h = CMatrix::zeros(dim, dim);
    for k in 0..dim.saturating_sub(n as usize) {
        let amp = ladder_amp(n, k);
        h[(k + n as usize, k)] += c(0.0, amp);
        h[(k, k + n as usize)] += c(0.0, -amp);
    }
    h
}

/// Fock numbers `≡ residue (mod n)` below `dim`, ascending.
pub fn sector_indices(n: u32, residue: u32, dim: usize) -> Vec<usize> {
    (0..dim).filter(|k| k % n as usize == residue as usize).collect()
}

/// Restrict a dense matrix to the given index set.
pub fn extract_submatrix(h: &CMatrix, indices: &[usize]) -> CMatrix {
    let m = indices.len();
    CMatrix::from_fn(m, m, |r, s| h[(indices[r], indices[s])])
}

/// Two-mode index of signal Fock `s` and pump Fock `p`.
pub fn two_mode_index(s: usize, p: usize, pump_dim: usize) -> usize {
    s * pump_dim + p
}

/// Dense two-mode `i[b(a†)ⁿ − b†aⁿ]` on `signal_dim × pump_dim`.
pub fn two_mode_dense(n: u32, signal_dim: usize, pump_dim: usize) -> CMatrix {
    let dim = signal_dim * pump_dim;
    let mut h = CMatrix::zeros(dim, dim);
    for s in 0..signal_dim.saturating_sub(n as usize) {
        for p in 1..pump_dim {
            let amp = (p as f64).sqrt() * ladder_amp(n, s);
            let row = two_mode_index(s + n as usize, p - 1, pump_dim);
            let col = two_mode_index(s, p, pump_dim);
            h[(row, col)] += c(0.0, amp);
            h[(col, row)] += c(0.0, -amp);
        }
    }
    h
}

/// Diagonal weights of the signal number operator on the product space.
pub fn signal_number_weights(signal_dim: usize, pump_dim: usize) -> Vec<f64> {
    let mut w = vec![0.0; signal_dim * pump_dim];
    for s in 0..signal_dim {
        for p in 0..pump_dim {
            w[two_mode_index(s, p, pump_dim)] = s as f64;
        }
    }
    w
}

/// Diagonal weights of the pump number operator on the product space.
pub fn pump_number_weights(signal_dim: usize, pump_dim: usize) -> Vec<f64> {
    let mut w = vec![0.0; signal_dim * pump_dim];
    for s in 0..signal_dim {
        for p in 0..pump_dim {
            w[two_mode_index(s, p, pump_dim)] = p as f64;
        }
    }
    w
}

/// Basis state of the product space.
pub fn product_basis_state(s: usize, p: usize, signal_dim: usize, pump_dim: usize) -> CVector {
    let mut v = CVector::zeros(signal_dim * pump_dim);
    v[two_mode_index(s, p, pump_dim)] = c(1.0, 0.0);
    v
}

/// Eigendecomposition of a Hermitian matrix, reusable across times.
pub struct DenseEvolver {
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl DenseEvolver {
    pub fn new(h: &CMatrix) -> Self {
        let defect = (h - h.adjoint()).norm();
        assert!(defect < 1e-12, "oracle matrix not Hermitian: {defect:.3e}");
        let se = h.clone().symmetric_eigen();
        Self {
            eigenvalues: se.eigenvalues,
            eigenvectors: se.eigenvectors,
        }
    }

    /// `e^{−irH} ψ0`.
    pub fn evolve(&self, psi0: &CVector, r: f64) -> CVector {
        let mut coeffs = self.eigenvectors.adjoint() * psi0;
        for (j, coeff) in coeffs.iter_mut().enumerate() {
            let phase = -r * self.eigenvalues[j];
            *coeff *= c(phase.cos(), phase.sin());
        }
        &self.eigenvectors * coeffs
    }
}

/// `⟨ψ| diag(weights) |ψ⟩`.
pub fn diag_expectation(psi: &CVector, weights: &[f64]) -> f64 {
    psi.iter()
        .zip(weights)
        .map(|(a, w)| w * a.norm_sqr())
        .sum()
}

/// Max-abs entry difference between a crate state and a dense vector.
pub fn state_distance(a: &[num_complex::Complex64], b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| ((x.re - y.re).powi(2) + (x.im - y.im).powi(2)).sqrt())
        .fold(0.0, f64::max)
}

/// Poisson amplitude `e^{−μ/2} α^N/√(N!)` with real `α = √μ`.
pub fn coherent_amplitude(mean: f64, n: u64) -> f64 {
    // Log space for large N.
    let mut log_amp = -mean / 2.0;
    for j in 1..=n {
        log_amp += 0.5 * (mean.ln() - (j as f64).ln());
    }
    log_amp.exp()
}
