//! Energies and their analytic gradients with respect to circuit parameters.

use num_complex::Complex64;

use crate::ansatz::Circuit;
use crate::error::{input, Error, Result};
use crate::pauli::PauliSum;
use crate::statevector::{sandwich_1q_raw, sandwich_2q_raw, GateMatrix, Statevector};

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyGradient {
    pub energy: f64,
    pub gradient: Vec<f64>,
}

fn check_sizes(h: &PauliSum, circuit: &Circuit, reference: &Statevector) -> Result<()> {
    if h.n_qubits() != circuit.n_qubits() || reference.n_qubits() != circuit.n_qubits() {
        return input(format!(
            "size mismatch: Hamiltonian {} qubits, circuit {}, reference {}",
            h.n_qubits(),
            circuit.n_qubits(),
            reference.n_qubits()
        ));
    }
    Ok(())
}

/// `<ref| U(params)^dag H U(params) |ref>`.
pub fn energy(h: &PauliSum, circuit: &Circuit, params: &[f64], reference: &Statevector) -> Result<f64> {
    check_sizes(h, circuit, reference)?;
    h.expectation(&circuit.run(params, reference)?)
}

/// Energy and exact gradient by one forward and one reverse sweep.
///
/// Walking back from the output, `psi` holds the state just before op `j`
/// and `lambda` holds `U_{j+1}^dag ... U_M^dag H |psi_M>`, so each angle of
/// op `j` contributes `2 Re <lambda| dU_j |psi>` times its coefficient.
pub fn energy_and_gradient(
    h: &PauliSum,
    circuit: &Circuit,
    params: &[f64],
    reference: &Statevector,
) -> Result<EnergyGradient> {
    check_sizes(h, circuit, reference)?;
    let mut psi = circuit.run(params, reference)?;
    let mut lambda = vec![Complex64::new(0.0, 0.0); psi.len()];
    h.apply_into(psi.amplitudes(), &mut lambda);
    let energy = psi.amplitudes().iter().zip(&lambda).map(|(a, b)| (a.conj() * b).re).sum::<f64>();

    let mut gradient = vec![0.0; circuit.n_params()];
    for op in circuit.ops().iter().rev() {
        let dagger = op.matrix(params).adjoint();
        op.apply_matrix(&dagger, psi.amplitudes_mut());
        for (which, expr) in op.angles.iter().enumerate() {
            let Some(index) = expr.index else { continue };
            let d = op.angle_derivative(params, which);
            let overlap = match &d {
                GateMatrix::One(m) => sandwich_1q_raw(&lambda, psi.amplitudes(), op.qubits[0], m),
                GateMatrix::Two(m) => sandwich_2q_raw(&lambda, psi.amplitudes(), op.qubits[0], op.qubits[1], m),
            };
            gradient[index] += 2.0 * expr.coefficient * overlap.re;
        }
        op.apply_matrix(&dagger, &mut lambda);
    }

    if !energy.is_finite() || gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::Internal("non-finite energy or gradient".into()));
    }
    Ok(EnergyGradient { energy, gradient })
}

/// Central differences `(E(p + s e_i) - E(p - s e_i)) / 2s`.
pub fn finite_difference_gradient(
    h: &PauliSum,
    circuit: &Circuit,
    params: &[f64],
    reference: &Statevector,
    step: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return input(format!("finite-difference step must be positive, got {step}"));
    }
    check_sizes(h, circuit, reference)?;
    circuit.check_params(params)?;
    let mut shifted = params.to_vec();
    (0..params.len())
        .map(|i| {
            shifted[i] = params[i] + step;
            let plus = energy(h, circuit, &shifted, reference)?;
            shifted[i] = params[i] - step;
            let minus = energy(h, circuit, &shifted, reference)?;
            shifted[i] = params[i];
            Ok((plus - minus) / (2.0 * step))
        })
        .collect()
}
