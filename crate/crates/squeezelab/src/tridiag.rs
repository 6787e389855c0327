//! Symmetric tridiagonal eigensolver (implicit-shift QL).
//!
//! Every generator in this crate is unitarily equivalent to a real symmetric
//! tridiagonal matrix (see [`crate::fock::Generator`]), so this one solver
//! backs the spectral propagator, the Krylov inner exponential, and the
//! spectrum studies. Eigenvalues come back sorted ascending; eigenvectors,
//! when requested, are the matching columns of an orthogonal matrix.

use crate::error::{Error, Result};

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a real symmetric tridiagonal matrix.
///
/// `vectors` is column-major: column `j` (slice `[j*dim .. (j+1)*dim]`) is the
/// unit eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    dim: usize,
    values: Vec<f64>,
    vectors: Vec<f64>,
}

impl Decomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column-major orthogonal eigenvector matrix.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// The unit eigenvector for `values[j]`.
    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.dim..(j + 1) * self.dim]
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with main diagonal `diag`
/// and off-diagonal `offdiag` (`offdiag.len() == diag.len() - 1`), ascending.
pub fn eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let mut d = diag.to_vec();
    ql_implicit(&mut d, offdiag, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Full eigendecomposition of the symmetric tridiagonal matrix.
pub fn decompose(diag: &[f64], offdiag: &[f64]) -> Result<Decomposition> {
    let n = diag.len();
    let mut d = diag.to_vec();
    // Identity to accumulate rotations into, column-major.
    let mut z = vec![0.0; n * n];
    for j in 0..n {
        z[j * n + j] = 1.0;
    }
    ql_implicit(&mut d, offdiag, Some(&mut z))?;

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        vectors[dst * n..(dst + 1) * n].copy_from_slice(&z[src * n..(src + 1) * n]);
    }
    Ok(Decomposition {
        dim: n,
        values,
        vectors,
    })
}

/// QL iteration with implicit Wilkinson shifts.
///
/// `d` and `offdiag` are the main and off-diagonal; on success `d` holds the
/// (unsorted) eigenvalues. `z`, when present, must be a column-major identity
/// of matching size and accumulates the applied rotations.
fn ql_implicit(d: &mut [f64], offdiag: &[f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Err(Error::Domain("empty tridiagonal matrix".into()));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::Domain(format!(
            "off-diagonal length {} does not match dimension {}",
            offdiag.len(),
            n
        )));
    }
    if n == 1 {
        return Ok(());
    }
    // One trailing scratch slot: the sweep writes e[m] for m up to n-1.
    let mut e = vec![0.0f64; n];
    e[..n - 1].copy_from_slice(offdiag);
    let scale = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Locate the first negligible off-diagonal at or above l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::Eigensolver {
                    dim: n,
                    scale,
                    detail: format!("no convergence for index {l} after {MAX_SWEEPS} sweeps"),
                });
            }

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated early; deflate and restart.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if let Some(z) = z.as_deref_mut() {
                    // Apply the rotation to columns i and i+1.
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..(i + 1) * n];
                    let col_ip1 = &mut right[..n];
                    for k in 0..n {
                        f = col_ip1[k];
                        col_ip1[k] = s * col_i[k] + c * f;
                        col_i[k] = c * col_i[k] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
