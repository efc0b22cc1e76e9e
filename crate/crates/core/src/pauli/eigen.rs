//! Lowest eigenpair of a Pauli sum: dense diagonalization for small
//! registers, restarted Lanczos on the matrix-free operator above that.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PauliSum;
use crate::error::{input, Error, Result};
use crate::statevector::Statevector;

/// Registers up to this size are diagonalized densely (a 4096x4096 dense
/// eigendecomposition already takes minutes).
pub const DENSE_MAX_QUBITS: usize = 10;

const MAX_QUBITS: usize = 20;
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: Statevector,
    /// `||H v - E v||` of the returned vector.
    pub residual: f64,
    pub method: Method,
}

/// Lowest eigenpair, choosing the dense or iterative path by register size.
pub fn exact_ground_state(h: &PauliSum) -> Result<GroundState> {
    if h.n_qubits() > MAX_QUBITS {
        return input(format!("exact diagonalization limited to {MAX_QUBITS} qubits"));
    }
    if h.n_qubits() <= DENSE_MAX_QUBITS {
        dense_ground_state(h)
    } else {
        lanczos_ground_state(h)
    }
}

pub fn dense_ground_state(h: &PauliSum) -> Result<GroundState> {
    if h.n_qubits() > DENSE_MAX_QUBITS {
        return input(format!("dense diagonalization limited to {DENSE_MAX_QUBITS} qubits"));
    }
    let dim = 1usize << h.n_qubits();
    let m = h.to_dense()?;
    let amplitudes = if m.iter().all(|c| c.im == 0.0) {
        let real = DMatrix::from_fn(dim, dim, |r, c| m[r * dim + c].re);
        let eig = SymmetricEigen::new(real);
        let k = argmin(eig.eigenvalues.iter().copied());
        eig.eigenvectors.column(k).iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        let cm = DMatrix::from_fn(dim, dim, |r, c| m[r * dim + c]);
        let eig = SymmetricEigen::new(cm);
        let k = argmin(eig.eigenvalues.iter().copied());
        eig.eigenvectors.column(k).iter().copied().collect()
    };
    finish(h, amplitudes, Method::Dense)
}

/// Restarted Lanczos with full reorthogonalization.
pub fn lanczos_ground_state(h: &PauliSum) -> Result<GroundState> {
    let n = h.n_qubits();
    if n > MAX_QUBITS {
        return input(format!("exact diagonalization limited to {MAX_QUBITS} qubits"));
    }
    let dim = 1usize << n;
    // keep the Krylov basis under ~256 MiB
    let krylov = dim.min(80).min(((1usize << 28) / (16 * dim)).max(12));
    let scale = h.one_norm().max(1.0);
    let max_restarts = 300;

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_05e5);
    let mut start: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    normalize(&mut start);

    let mut hv = vec![Complex64::new(0.0, 0.0); dim];
    let mut residual = f64::INFINITY;
    for _ in 0..max_restarts {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::with_capacity(krylov);
        let mut betas: Vec<f64> = Vec::with_capacity(krylov);
        loop {
            let j = basis.len() - 1;
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            h.apply_into(&basis[j], &mut w);
            let alpha = dot(&basis[j], &w).re;
            alphas.push(alpha);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
                }
            }
            let beta = norm(&w);
            if basis.len() == krylov || beta < 1e-13 * scale {
                break;
            }
            betas.push(beta);
            w.iter_mut().for_each(|x| *x /= beta);
            basis.push(w);
        }
        let k = alphas.len();
        let t = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                alphas[r]
            } else if r + 1 == c {
                betas[r]
            } else if c + 1 == r {
                betas[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let idx = argmin(eig.eigenvalues.iter().copied());
        let coeffs = eig.eigenvectors.column(idx);
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (v, &s) in basis.iter().zip(coeffs.iter()) {
            ritz.iter_mut().zip(v).for_each(|(r, vi)| *r += vi * s);
        }
        normalize(&mut ritz);
        h.apply_into(&ritz, &mut hv);
        let theta = dot(&ritz, &hv).re;
        residual = hv.iter().zip(&ritz).map(|(a, b)| (a - b * theta).norm_sqr()).sum::<f64>().sqrt();
        if residual <= RESIDUAL_TOL * 0.1 {
            return finish(h, ritz, Method::Lanczos);
        }
        start = ritz;
    }
    Err(Error::NotConverged { iterations: max_restarts, residual })
}

fn finish(h: &PauliSum, amplitudes: Vec<Complex64>, method: Method) -> Result<GroundState> {
    let mut state = Statevector::from_amplitudes(amplitudes)?;
    state.normalize()?;
    let hv = h.apply(&state)?;
    let energy = h.expectation(&state)?;
    let residual = hv
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > RESIDUAL_TOL {
        return Err(Error::NotConverged { iterations: 0, residual });
    }
    Ok(GroundState { energy, state, residual, method })
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) })
        .0
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [Complex64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{heisenberg_1d, PauliString};

    #[test]
    fn two_site_heisenberg() {
        let gs = exact_ground_state(&heisenberg_1d(2, -1.0).unwrap()).unwrap();
        assert!((gs.energy + 1.5).abs() < 1e-12);
        assert_eq!(gs.method, Method::Dense);
    }

    #[test]
    fn single_z() {
        let h = PauliSum::from_terms(1, vec![(1.0, PauliString::parse("Z").unwrap())]).unwrap();
        let gs = exact_ground_state(&h).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-14);
        assert!((gs.state.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_path() {
        // XY + YX is real-symmetric; Y alone forces the complex branch
        let h = PauliSum::from_terms(
            2,
            vec![(0.7, "YI".parse().unwrap()), (0.3, "XZ".parse().unwrap()), (-0.2, "IY".parse().unwrap())],
        )
        .unwrap();
        let dense = dense_ground_state(&h).unwrap();
        let lanczos = lanczos_ground_state(&h).unwrap();
        assert!((dense.energy - lanczos.energy).abs() < 1e-10);
    }
}
