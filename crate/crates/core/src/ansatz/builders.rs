use crate::error::{input, Result};
use crate::statevector::GateKind;

use super::circuit::{Circuit, GateOp, ParamExpr, ParamLabel, ParamRole};
use super::AnsatzKind;

/// Builds `layers` repeating units of `kind` on `n_qubits` qubits.
///
/// Parameters are laid out block by block (initial column, then layer 1,
/// layer 2, ...), so the parameters of an `L`-layer circuit are a prefix of
/// those of the `L+1`-layer circuit.
pub fn build_ansatz(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<Circuit> {
    let min_qubits = if kind.is_xyz() { 1 } else { 2 };
    if n_qubits < min_qubits {
        return input(format!("{kind} needs at least {min_qubits} qubits, got {n_qubits}"));
    }
    if n_qubits > 30 {
        return input(format!("{n_qubits} qubits exceeds the simulator limit"));
    }
    if layers == 0 {
        return input("at least one layer is required");
    }
    let mut b = Builder::new(kind, n_qubits);
    match kind {
        AnsatzKind::RyLinear | AnsatzKind::RyFull => b.ry_column(),
        AnsatzKind::RyRzFull => {
            b.ry_column();
            b.rz_column();
        }
        _ => {}
    }
    b.close_block();
    for _ in 0..layers {
        match kind {
            AnsatzKind::RyLinear => {
                b.cnot_chain();
                b.ry_column();
            }
            AnsatzKind::RyFull => {
                b.cnot_all_to_all();
                b.ry_column();
            }
            AnsatzKind::RyRzFull => {
                b.cnot_all_to_all();
                b.ry_column();
                b.rz_column();
            }
            AnsatzKind::Aswap => b.aswap_layer(),
            AnsatzKind::Xyz1F => b.xyz_layer(false),
            AnsatzKind::Xyz2F => b.xyz_layer(true),
        }
        b.close_block();
    }
    Ok(b.finish())
}

struct Builder {
    kind: AnsatzKind,
    n: usize,
    ops: Vec<GateOp>,
    labels: Vec<ParamLabel>,
    op_boundaries: Vec<usize>,
    param_boundaries: Vec<usize>,
}

impl Builder {
    fn new(kind: AnsatzKind, n: usize) -> Self {
        Self { kind, n, ops: Vec::new(), labels: Vec::new(), op_boundaries: vec![0], param_boundaries: vec![0] }
    }

    fn block(&self) -> usize {
        self.op_boundaries.len() - 1
    }

    fn param(&mut self, role: ParamRole, site: usize) -> usize {
        self.labels.push(ParamLabel { block: self.block(), role, site });
        self.labels.len() - 1
    }

    fn op(&mut self, kind: GateKind, qubits: &[usize], angles: Vec<ParamExpr>) {
        self.ops.push(GateOp { kind, qubits: qubits.to_vec(), angles });
    }

    fn close_block(&mut self) {
        self.op_boundaries.push(self.ops.len());
        self.param_boundaries.push(self.labels.len());
    }

    fn finish(self) -> Circuit {
        Circuit {
            n_qubits: self.n,
            ops: self.ops,
            labels: self.labels,
            op_boundaries: self.op_boundaries,
            param_boundaries: self.param_boundaries,
            kind: Some(self.kind),
        }
    }

    fn ry_column(&mut self) {
        for q in 0..self.n {
            let p = self.param(ParamRole::Ry, q);
            self.op(GateKind::Ry, &[q], vec![ParamExpr::param(p)]);
        }
    }

    fn rz_column(&mut self) {
        for q in 0..self.n {
            let p = self.param(ParamRole::Rz, q);
            self.op(GateKind::Rz, &[q], vec![ParamExpr::param(p)]);
        }
    }

    fn cnot_chain(&mut self) {
        for q in 0..self.n - 1 {
            self.op(GateKind::Cnot, &[q, q + 1], vec![]);
        }
    }

    fn cnot_all_to_all(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                self.op(GateKind::Cnot, &[i, j], vec![]);
            }
        }
    }

    /// A(theta, phi) on even bonds, then on odd bonds.
    fn aswap_layer(&mut self) {
        for parity in [0, 1] {
            for k in (parity..self.n - 1).step_by(2) {
                let theta = self.param(ParamRole::Theta, k);
                let phi = self.param(ParamRole::Phi, k);
                self.op(GateKind::A, &[k, k + 1], vec![ParamExpr::param(theta), ParamExpr::param(phi)]);
            }
        }
    }

    fn xyz_layer(&mut self, rz_on_every_qubit: bool) {
        let n = self.n;
        let mut ab = Vec::with_capacity(n);
        for q in 0..n {
            let alpha = self.param(ParamRole::Alpha, q);
            let beta = self.param(ParamRole::Beta, q);
            ab.push((alpha, beta));
        }
        let mut bonds = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n.saturating_sub(1) {
            let theta = self.param(ParamRole::Theta, k);
            let phi = self.param(ParamRole::Phi, k);
            bonds.push((theta, phi));
        }
        let gammas: Vec<(usize, usize)> = if rz_on_every_qubit {
            (0..n).map(|q| (q, self.param(ParamRole::Gamma, q))).collect()
        } else {
            vec![(n - 1, self.param(ParamRole::Gamma, n - 1))]
        };

        for (q, &(alpha, beta)) in ab.iter().enumerate() {
            self.op(GateKind::Rx, &[q], vec![ParamExpr::param(alpha)]);
            self.op(GateKind::Ry, &[q], vec![ParamExpr::param(beta)]);
        }
        for (k, &(theta, phi)) in bonds.iter().enumerate() {
            self.u2(k, theta, phi);
        }
        for &(q, gamma) in &gammas {
            self.op(GateKind::Rz, &[q], vec![ParamExpr::param(gamma)]);
        }
        for (k, &(theta, phi)) in bonds.iter().enumerate().rev() {
            self.u2_dagger(k, theta, phi);
        }
        for (q, &(alpha, beta)) in ab.iter().enumerate() {
            self.op(GateKind::Ry, &[q], vec![ParamExpr::scaled(beta, -1.0)]);
            self.op(GateKind::Rx, &[q], vec![ParamExpr::scaled(alpha, -1.0)]);
        }
    }

    /// `Ry(-phi/2)` on `k+1`, `fSim(theta, phi)` on `(k, k+1)`, `Ry(phi/2)` on `k+1`.
    fn u2(&mut self, k: usize, theta: usize, phi: usize) {
        self.op(GateKind::Ry, &[k + 1], vec![ParamExpr::scaled(phi, -0.5)]);
        self.op(GateKind::FSim, &[k, k + 1], vec![ParamExpr::param(theta), ParamExpr::param(phi)]);
        self.op(GateKind::Ry, &[k + 1], vec![ParamExpr::scaled(phi, 0.5)]);
    }

    /// Adjoint of [`Builder::u2`]: reversed order, each primitive negated.
    /// The two wrapper expressions swap places, so they read the same as in
    /// the forward block.
    fn u2_dagger(&mut self, k: usize, theta: usize, phi: usize) {
        self.op(GateKind::Ry, &[k + 1], vec![ParamExpr::scaled(phi, 0.5).negated()]);
        self.op(GateKind::FSim, &[k, k + 1], vec![ParamExpr::scaled(theta, -1.0), ParamExpr::scaled(phi, -1.0)]);
        self.op(GateKind::Ry, &[k + 1], vec![ParamExpr::scaled(phi, -0.5).negated()]);
    }
}
