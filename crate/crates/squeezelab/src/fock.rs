//! Fock-space bases, ladder coefficients, and Hamiltonian generators.
//!
//! The order-`n` squeezing generator `H_n = i[(a†)ⁿ − aⁿ]` only couples Fock
//! states whose photon numbers differ by `n`, so the Fock space splits into
//! `n` residue classes. A [`SectorBasis`] is one such arithmetic-progression
//! class truncated to `m` states; on it every generator in this crate is
//! `H = i·A + diag` with `A` real antisymmetric and tridiagonal. Only the
//! strictly-lower band of `A` is stored; the factor `i` stays implicit until
//! a dense complex matrix is requested.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm tolerance accepted by [`StateVector::new`].
pub const STATE_NORM_TOL: f64 = 1e-12;

/// `⟨k+n|(a†)ⁿ|k⟩ = √((k+n)!/k!)`, computed as an n-term running product.
///
/// Falls back to a log-space product if the plain one overflows; couplings
/// beyond the double range are reported as an error.
pub fn ladder_coeff(n: u32, k: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("ladder order must be >= 1, got {n}")));
    }
    let mut prod = 1.0f64;
    for j in 1..=u64::from(n) {
        prod *= (k + j) as f64;
    }
    if prod.is_finite() {
        return Ok(prod.sqrt());
    }
    let half_log: f64 = (1..=u64::from(n)).map(|j| ((k + j) as f64).ln()).sum::<f64>() / 2.0;
    let coeff = half_log.exp();
    if coeff.is_finite() {
        Ok(coeff)
    } else {
        Err(Error::Overflow(format!(
            "ladder coefficient for n = {n}, k = {k} exceeds the double range"
        )))
    }
}

/// The residue class `{ρ, ρ+n, …, ρ+(m−1)n}` of Fock photon numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    order: u32,
    residue: u64,
    fock_numbers: Vec<u64>,
}

impl SectorBasis {
    /// Squeezing order `n`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// First photon number `ρ` of the progression (`0 ≤ ρ < n`).
    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Number of retained basis states.
    pub fn size(&self) -> usize {
        self.fock_numbers.len()
    }

    /// Photon numbers, strictly increasing with stride `n`.
    pub fn fock_numbers(&self) -> &[u64] {
        &self.fock_numbers
    }
}

/// Build the sector basis of order `n`, residue `residue`, and `m` states.
pub fn build_sector_basis(n: u32, residue: u64, m: usize) -> Result<SectorBasis> {
    if n < 1 {
        return Err(Error::Domain(format!("order must be >= 1, got {n}")));
    }
    if residue >= u64::from(n) {
        return Err(Error::Domain(format!(
            "residue {residue} outside [0, {n})"
        )));
    }
    if m < 1 {
        return Err(Error::Domain("sector size must be >= 1".into()));
    }
    let fock_numbers = (0..m as u64).map(|j| residue + j * u64::from(n)).collect();
    Ok(SectorBasis {
        order: n,
        residue,
        fock_numbers,
    })
}

/// Number of residue-class states inside a total Fock truncation of
/// dimension `total_dim` (photon numbers `0 .. total_dim`).
///
/// For residue 0 this is `⌈total_dim / n⌉`. Vacuum-seeded runs configured by
/// total dimension map through this before building the sector.
pub fn sector_size_for_total_dim(n: u32, residue: u64, total_dim: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::Domain(format!("order must be >= 1, got {n}")));
    }
    if residue >= u64::from(n) {
        return Err(Error::Domain(format!(
            "residue {residue} outside [0, {n})"
        )));
    }
    if (total_dim as u64) <= residue {
        return Err(Error::Domain(format!(
            "total dimension {total_dim} retains no state with residue {residue}"
        )));
    }
    Ok(((total_dim as u64 - 1 - residue) / u64::from(n) + 1) as usize)
}

/// A Hermitian generator `H = i·A + diag` with `A` real antisymmetric
/// tridiagonal. `band[j] ≥ 0` is `A[j+1, j]`; Hermiticity holds by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    band: Vec<f64>,
    diagonal: Vec<f64>,
}

impl Generator {
    /// Build from the strictly-lower band and a real diagonal
    /// (`diagonal.len() == band.len() + 1`).
    pub fn new(band: Vec<f64>, diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::Domain("generator dimension must be >= 1".into()));
        }
        if diagonal.len() != band.len() + 1 {
            return Err(Error::Domain(format!(
                "diagonal length {} does not match band length {}",
                diagonal.len(),
                band.len()
            )));
        }
        if let Some(bad) = band.iter().find(|b| !b.is_finite() || **b < 0.0) {
            return Err(Error::Domain(format!(
                "band entries must be finite and >= 0, got {bad}"
            )));
        }
        if diagonal.iter().any(|d| !d.is_finite()) {
            return Err(Error::Domain("diagonal entries must be finite".into()));
        }
        Ok(Self { band, diagonal })
    }

    /// Zero-diagonal generator from the band alone.
    pub fn from_band(band: Vec<f64>) -> Result<Self> {
        let dim = band.len() + 1;
        Self::new(band, vec![0.0; dim])
    }

    /// Replace the diagonal part, keeping the band.
    pub fn with_diagonal(self, diagonal: Vec<f64>) -> Result<Self> {
        Self::new(self.band, diagonal)
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn band(&self) -> &[f64] {
        &self.band
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn is_zero_diagonal(&self) -> bool {
        self.diagonal.iter().all(|d| *d == 0.0)
    }

    /// Gershgorin bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let dim = self.dim();
        (0..dim).fold(0.0f64, |acc, j| {
            let mut row = self.diagonal[j].abs();
            if j > 0 {
                row += self.band[j - 1];
            }
            if j + 1 < dim {
                row += self.band[j];
            }
            acc.max(row)
        })
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let dim = self.dim();
        debug_assert_eq!(x.len(), dim);
        debug_assert_eq!(out.len(), dim);
        for j in 0..dim {
            let mut acc = x[j] * self.diagonal[j];
            if j > 0 {
                acc += Complex64::new(0.0, self.band[j - 1]) * x[j - 1];
            }
            if j + 1 < dim {
                acc -= Complex64::new(0.0, self.band[j]) * x[j + 1];
            }
            out[j] = acc;
        }
    }

    /// Dense row-major complex realization of `H` (tests and small studies).
    pub fn dense(&self) -> Vec<Complex64> {
        let dim = self.dim();
        let mut h = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            h[j * dim + j] = Complex64::new(self.diagonal[j], 0.0);
            if j + 1 < dim {
                h[(j + 1) * dim + j] = Complex64::new(0.0, self.band[j]);
                h[j * dim + (j + 1)] = Complex64::new(0.0, -self.band[j]);
            }
        }
        h
    }
}

/// Classical-pump generator `H_n = i[(a†)ⁿ − aⁿ]` restricted to `basis`.
pub fn build_classical_generator(basis: &SectorBasis) -> Result<Generator> {
    let band = basis
        .fock_numbers()
        .iter()
        .take(basis.size().saturating_sub(1))
        .map(|&k| ladder_coeff(basis.order(), k))
        .collect::<Result<Vec<f64>>>()?;
    Generator::from_band(band)
}

/// Kerr diagonal `χ·k²` over the photon numbers of `basis`.
pub fn build_kerr_diagonal(basis: &SectorBasis, chi: f64) -> Result<Vec<f64>> {
    if !chi.is_finite() {
        return Err(Error::Domain(format!("Kerr coefficient must be finite, got {chi}")));
    }
    basis
        .fock_numbers()
        .iter()
        .map(|&k| {
            let v = chi * (k as f64) * (k as f64);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Overflow(format!("Kerr term overflow at k = {k}")))
            }
        })
        .collect()
}

/// Basis labels of the quantum-pump invariant chain
/// `{|0,N⟩, |n,N−1⟩, …, |nN,0⟩}` for initial pump photon number `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PumpChainLabels {
    order: u32,
    pump_photons: u64,
}

impl PumpChainLabels {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Initial pump photon number `N`.
    pub fn initial_pump_photons(&self) -> u64 {
        self.pump_photons
    }

    /// Chain length `N + 1`.
    pub fn len(&self) -> usize {
        self.pump_photons as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signal photons `k·n` of chain site `k`.
    pub fn signal_photons(&self, k: usize) -> u64 {
        k as u64 * u64::from(self.order)
    }

    /// Pump photons `N − k` of chain site `k`.
    pub fn pump_photons(&self, k: usize) -> u64 {
        self.pump_photons - k as u64
    }

    /// Conserved charge `n_a + n·n_b = n·N`, identical on every site.
    pub fn charge(&self) -> u64 {
        u64::from(self.order) * self.pump_photons
    }

    /// Diagonal signal-photon observable over the chain.
    pub fn signal_observable(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.signal_photons(k) as f64).collect()
    }

    /// Diagonal pump-photon observable over the chain.
    pub fn pump_observable(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.pump_photons(k) as f64).collect()
    }
}

/// Quantum-pump generator `i[b(a†)ⁿ − b†aⁿ]` restricted to its invariant
/// chain, together with the chain labels.
///
/// Site `k` holds `|kn, N−k⟩`; the coupling to site `k+1` is
/// `√(N−k) · ⟨(k+1)n|(a†)ⁿ|kn⟩`. The chain is exact: enlarging the two-mode
/// space beyond it cannot change any observable.
pub fn build_quantum_pump_chain(n: u32, pump_photons: u64) -> Result<(Generator, PumpChainLabels)> {
    if n < 1 {
        return Err(Error::Domain(format!("order must be >= 1, got {n}")));
    }
    if pump_photons < 1 {
        return Err(Error::Domain(format!(
            "initial pump photon number must be >= 1, got {pump_photons}"
        )));
    }
    let labels = PumpChainLabels {
        order: n,
        pump_photons,
    };
    let band = (0..pump_photons)
        .map(|k| {
            let pump_factor = ((pump_photons - k) as f64).sqrt();
            ladder_coeff(n, k * u64::from(n)).map(|c| pump_factor * c)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((Generator::from_band(band)?, labels))
}

/// Diagonal photon-number observable `⟨a†a⟩` over a sector basis.
pub fn number_observable(basis: &SectorBasis) -> Vec<f64> {
    basis.fock_numbers().iter().map(|&k| k as f64).collect()
}

/// Complex amplitudes over a basis, unit norm at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap amplitudes whose Euclidean norm is already 1 within
    /// [`STATE_NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("state dimension must be >= 1".into()));
        }
        let norm = norm(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Domain(format!(
                "state norm {norm} deviates from 1 beyond {STATE_NORM_TOL:.0e}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary amplitudes; errors on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("state dimension must be >= 1".into()));
        }
        let norm = norm(&amplitudes);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!("cannot normalize state with norm {norm}")));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// The vacuum-seeded state: all weight on the first basis entry.
    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::basis_state(dim, 0)
    }

    /// Basis state `|index⟩` in a space of dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Domain("state dimension must be >= 1".into()));
        }
        if index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} outside dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `|amplitude|²` per basis entry.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Expectation value of a diagonal observable.
    pub fn expectation(&self, weights: &[f64]) -> f64 {
        debug_assert_eq!(weights.len(), self.dim());
        self.amplitudes
            .iter()
            .zip(weights)
            .map(|(a, w)| a.norm_sqr() * w)
            .sum()
    }
}

pub(crate) fn norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ladder_coeff_known_values() {
        assert_abs_diff_eq!(ladder_coeff(1, 0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            ladder_coeff(3, 0).unwrap(),
            6.0f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            ladder_coeff(3, 3).unwrap(),
            120.0f64.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn ladder_coeff_rejects_order_zero() {
        assert!(matches!(ladder_coeff(0, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn ladder_coeff_large_k_stays_finite() {
        // k·n ≈ 3e6: the plain product is ~1e19 and must stay exact-ish.
        let c = ladder_coeff(3, 1_000_000).unwrap();
        let expect = (1_000_001.0f64 * 1_000_002.0 * 1_000_003.0).sqrt();
        assert_abs_diff_eq!(c, expect, epsilon = 1e-6 * expect);
    }

    #[test]
    fn sector_basis_examples() {
        assert_eq!(
            build_sector_basis(3, 0, 4).unwrap().fock_numbers(),
            &[0, 3, 6, 9]
        );
        assert_eq!(
            build_sector_basis(1, 0, 3).unwrap().fock_numbers(),
            &[0, 1, 2]
        );
        assert_eq!(
            build_sector_basis(2, 1, 3).unwrap().fock_numbers(),
            &[1, 3, 5]
        );
    }

    #[test]
    fn sector_basis_rejects_bad_inputs() {
        assert!(build_sector_basis(3, 3, 4).is_err());
        assert!(build_sector_basis(3, 0, 0).is_err());
        assert!(build_sector_basis(0, 0, 4).is_err());
    }

    #[test]
    fn total_dim_mapping() {
        // Residue-0 count is ceil(D / n).
        assert_eq!(sector_size_for_total_dim(3, 0, 9).unwrap(), 3);
        assert_eq!(sector_size_for_total_dim(3, 0, 10).unwrap(), 4);
        assert_eq!(sector_size_for_total_dim(1, 0, 64).unwrap(), 64);
        assert_eq!(sector_size_for_total_dim(2, 1, 6).unwrap(), 3); // {1, 3, 5}
        assert!(sector_size_for_total_dim(2, 1, 1).is_err());
    }

    #[test]
    fn classical_generator_bands() {
        let b = build_sector_basis(1, 0, 2).unwrap();
        assert_eq!(build_classical_generator(&b).unwrap().band(), &[1.0]);

        let b = build_sector_basis(3, 0, 2).unwrap();
        let g = build_classical_generator(&b).unwrap();
        assert_abs_diff_eq!(g.band()[0], 6.0f64.sqrt(), epsilon = 1e-15);

        let b = build_sector_basis(3, 0, 3).unwrap();
        let g = build_classical_generator(&b).unwrap();
        assert_abs_diff_eq!(g.band()[0], 6.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.band()[1], 120.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn kerr_diagonal_examples() {
        let b = build_sector_basis(3, 0, 3).unwrap();
        assert_eq!(build_kerr_diagonal(&b, 0.0).unwrap(), vec![0.0, 0.0, 0.0]);
        let d = build_kerr_diagonal(&b, 0.1).unwrap();
        assert_abs_diff_eq!(d[0], 0.0);
        assert_abs_diff_eq!(d[1], 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(d[2], 3.6, epsilon = 1e-15);

        let b = build_sector_basis(1, 0, 3).unwrap();
        assert_eq!(build_kerr_diagonal(&b, 1.0).unwrap(), vec![0.0, 1.0, 4.0]);
        assert!(build_kerr_diagonal(&b, f64::NAN).is_err());
    }

    #[test]
    fn pump_chain_bands() {
        let (g, labels) = build_quantum_pump_chain(3, 1).unwrap();
        assert_eq!(g.dim(), 2);
        assert_abs_diff_eq!(g.band()[0], 6.0f64.sqrt(), epsilon = 1e-15);
        assert_eq!(labels.charge(), 3);

        let (g, _) = build_quantum_pump_chain(3, 2).unwrap();
        assert_abs_diff_eq!(g.band()[0], 12.0f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(g.band()[1], 120.0f64.sqrt(), epsilon = 1e-13);

        let (g, _) = build_quantum_pump_chain(1, 1).unwrap();
        assert_eq!(g.band(), &[1.0]);

        assert!(build_quantum_pump_chain(3, 0).is_err());
    }

    #[test]
    fn chain_bookkeeping_holds_everywhere() {
        for n in 1..=5u32 {
            for big_n in 1..=40u64 {
                let (_, labels) = build_quantum_pump_chain(n, big_n).unwrap();
                for k in 0..labels.len() {
                    assert_eq!(
                        labels.signal_photons(k) + u64::from(n) * labels.pump_photons(k),
                        labels.charge()
                    );
                }
            }
        }
    }

    #[test]
    fn number_observables() {
        let b = build_sector_basis(3, 0, 3).unwrap();
        assert_eq!(number_observable(&b), vec![0.0, 3.0, 6.0]);

        let (_, labels) = build_quantum_pump_chain(3, 2).unwrap();
        assert_eq!(labels.signal_observable(), vec![0.0, 3.0, 6.0]);
        assert_eq!(labels.pump_observable(), vec![2.0, 1.0, 0.0]);

        let b = build_sector_basis(1, 0, 2).unwrap();
        assert_eq!(number_observable(&b), vec![0.0, 1.0]);
    }

    #[test]
    fn dense_realization_is_hermitian() {
        let basis = build_sector_basis(3, 0, 6).unwrap();
        let kerr = build_kerr_diagonal(&basis, 0.3).unwrap();
        let gen = build_classical_generator(&basis)
            .unwrap()
            .with_diagonal(kerr)
            .unwrap();
        let dim = gen.dim();
        let h = gen.dense();
        for i in 0..dim {
            for j in 0..dim {
                let a = h[i * dim + j];
                let b = h[j * dim + i].conj();
                assert_eq!(a, b, "H[{i},{j}] != conj(H[{j},{i}])");
            }
        }
    }

    #[test]
    fn generator_validation() {
        assert!(Generator::new(vec![1.0], vec![0.0]).is_err());
        assert!(Generator::new(vec![-1.0], vec![0.0, 0.0]).is_err());
        assert!(Generator::new(vec![f64::NAN], vec![0.0, 0.0]).is_err());
        assert!(Generator::new(vec![1.0], vec![0.0, f64::INFINITY]).is_err());
        let g = Generator::from_band(vec![2.0, 3.0]).unwrap();
        assert_eq!(g.dim(), 3);
        assert_abs_diff_eq!(g.norm_bound(), 5.0);
    }

    #[test]
    fn state_vector_construction() {
        let vac = StateVector::vacuum(4).unwrap();
        assert_abs_diff_eq!(vac.norm(), 1.0);
        assert_abs_diff_eq!(vac.expectation(&[0.0, 3.0, 6.0, 9.0]), 0.0);

        let bad = vec![Complex64::new(0.5, 0.0); 3];
        assert!(StateVector::new(bad.clone()).is_err());
        let fixed = StateVector::normalized(bad).unwrap();
        assert_abs_diff_eq!(fixed.norm(), 1.0, epsilon = 1e-15);

        assert!(StateVector::normalized(vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(StateVector::basis_state(3, 3).is_err());
    }
}
