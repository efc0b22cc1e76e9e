//! Oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use hea::ansatz::{GateOp, ParamExpr};
use hea::statevector::GateKind;
use hea::{Circuit, PauliString, PauliSum};

fn pauli_2x2(letter: char) -> DMatrix<Complex64> {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    let entries = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => panic!("bad letter {letter}"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Dense matrix of a letter string; character `n` acts on qubit `n`, which
/// is bit `n` of the basis index, so the last character is the leftmost
/// Kronecker factor.
pub fn dense_pauli(letters: &str) -> DMatrix<Complex64> {
    letters.chars().fold(DMatrix::identity(1, 1), |acc, ch| pauli_2x2(ch).kronecker(&acc))
}

pub fn dense_hamiltonian(h: &PauliSum) -> DMatrix<Complex64> {
    let dim = 1 << h.n_qubits();
    h.terms().iter().fold(DMatrix::zeros(dim, dim), |acc, (c, p)| acc + dense_pauli(&p.to_string()) * Complex64::new(*c, 0.0))
}

pub fn dense_ground_energy(h: &PauliSum) -> f64 {
    dense_hamiltonian(h).symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> String {
    (0..n).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect()
}

pub fn random_pauli_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::new(n);
    for _ in 0..terms {
        let s: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect();
        h.push(rng.gen_range(-1.0..1.0), PauliString::parse(&s).unwrap()).unwrap();
    }
    h
}

/// Random circuit over every gate kind. Parameters are shared between ops
/// with assorted coefficients and offsets.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, n_ops: usize) -> Circuit {
    assert!(n >= 2);
    let n_params = 1 + n_ops / 3;
    let mut ops = Vec::with_capacity(n_ops + GateKind::ALL.len());
    let kinds: Vec<GateKind> =
        GateKind::ALL.iter().copied().chain((0..n_ops).map(|_| GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())])).collect();
    let mut next_unused = 0;
    for kind in kinds {
        let a = rng.gen_range(0..n);
        let qubits = if kind.arity() == 1 {
            vec![a]
        } else {
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            vec![a, b]
        };
        let angles = (0..kind.n_angles())
            .map(|_| {
                let index = if next_unused < n_params {
                    next_unused += 1;
                    next_unused - 1
                } else {
                    rng.gen_range(0..n_params)
                };
                let coefficient = [1.0, -1.0, 0.5, -0.5, 2.0, -1.3][rng.gen_range(0..6)];
                ParamExpr { index: Some(index), coefficient, constant: rng.gen_range(-1.0..1.0) }
            })
            .collect();
        ops.push(GateOp::new(kind, qubits, angles).unwrap());
    }
    // parameters still unused get a closing rotation each
    while next_unused < n_params {
        ops.push(GateOp::new(GateKind::Rz, vec![rng.gen_range(0..n)], vec![ParamExpr::param(next_unused)]).unwrap());
        next_unused += 1;
    }
    Circuit::from_ops(n, n_params, ops).unwrap()
}
