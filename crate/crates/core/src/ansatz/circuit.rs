use std::fmt;
use std::ops::Range;

use crate::error::{input, Result};
use crate::statevector::{apply_1q_raw, apply_2q_raw, GateKind, GateMatrix, Statevector};

use super::AnsatzKind;

/// Gate angle as an affine function of one circuit parameter:
/// `coefficient * params[index] + constant`, or a fixed angle when `index`
/// is `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamExpr {
    pub index: Option<usize>,
    pub coefficient: f64,
    pub constant: f64,
}

impl ParamExpr {
    pub fn fixed(angle: f64) -> Self {
        Self { index: None, coefficient: 0.0, constant: angle }
    }

    pub fn param(index: usize) -> Self {
        Self::scaled(index, 1.0)
    }

    pub fn scaled(index: usize, coefficient: f64) -> Self {
        debug_assert!(coefficient != 0.0);
        Self { index: Some(index), coefficient, constant: 0.0 }
    }

    /// The expression with every term negated; evaluates to `-self`.
    pub fn negated(&self) -> Self {
        Self { index: self.index, coefficient: -self.coefficient, constant: -self.constant }
    }

    #[inline]
    pub fn eval(&self, params: &[f64]) -> f64 {
        match self.index {
            Some(i) => self.coefficient * params[i] + self.constant,
            None => self.constant,
        }
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => write!(f, "{}", self.constant),
            Some(i) => {
                if self.coefficient == 1.0 {
                    write!(f, "p[{i}]")?;
                } else if self.coefficient == -1.0 {
                    write!(f, "-p[{i}]")?;
                } else {
                    write!(f, "{}*p[{i}]", self.coefficient)?;
                }
                if self.constant != 0.0 {
                    write!(f, "{:+}", self.constant)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub angles: Vec<ParamExpr>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: Vec<usize>, angles: Vec<ParamExpr>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return input(format!("{kind} acts on {} qubit(s), got {}", kind.arity(), qubits.len()));
        }
        if angles.len() != kind.n_angles() {
            return input(format!("{kind} takes {} angle(s), got {}", kind.n_angles(), angles.len()));
        }
        if kind.arity() == 2 && qubits[0] == qubits[1] {
            return input(format!("{kind} on repeated qubit {}", qubits[0]));
        }
        Ok(Self { kind, qubits, angles })
    }

    pub fn is_parameterized(&self) -> bool {
        self.angles.iter().any(|a| a.index.is_some())
    }

    /// Evaluated angles; at most two per gate.
    #[inline]
    pub(crate) fn angle_values(&self, params: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (o, a) in out.iter_mut().zip(&self.angles) {
            *o = a.eval(params);
        }
        out
    }

    pub fn matrix(&self, params: &[f64]) -> GateMatrix {
        let a = self.angle_values(params);
        self.kind.matrix_unchecked(&a[..self.angles.len()])
    }

    /// Derivative of the gate matrix with respect to its `which`-th angle.
    pub(crate) fn angle_derivative(&self, params: &[f64], which: usize) -> GateMatrix {
        let a = self.angle_values(params);
        self.kind.derivative_unchecked(&a[..self.angles.len()], which)
    }

    pub(crate) fn apply_matrix(&self, m: &GateMatrix, amps: &mut [num_complex::Complex64]) {
        match m {
            GateMatrix::One(m) => apply_1q_raw(amps, self.qubits[0], m),
            GateMatrix::Two(m) => apply_2q_raw(amps, self.qubits[0], self.qubits[1], m),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qubits: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, "{} {}", self.kind, qubits.join(","))?;
        for a in &self.angles {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// What a parameter controls, used to line parameters up across circuits of
/// different sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamRole {
    /// Opening `Rx` angle of the XYZ single-qubit sandwich.
    Alpha,
    /// Opening `Ry` angle of the XYZ single-qubit sandwich.
    Beta,
    /// Central `Rz` angle.
    Gamma,
    /// First two-qubit angle on a bond (fSim theta, A theta).
    Theta,
    /// Second two-qubit angle on a bond (fSim phi, A phi).
    Phi,
    /// Rotation-column `Ry` angle.
    Ry,
    /// Rotation-column `Rz` angle.
    Rz,
}

impl ParamRole {
    /// Whether `site` is a bond index `k` (qubits `k, k+1`) rather than a qubit.
    pub fn on_bond(self) -> bool {
        matches!(self, ParamRole::Theta | ParamRole::Phi)
    }
}

/// Position of a parameter: block 0 holds the initial rotation column of the
/// Ry-type ansaetze (empty for the others), block `l` the `l`-th layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamLabel {
    pub block: usize,
    pub role: ParamRole,
    pub site: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub(crate) n_qubits: usize,
    pub(crate) ops: Vec<GateOp>,
    pub(crate) labels: Vec<ParamLabel>,
    /// Op index where each block starts; the final entry is `ops.len()`.
    pub(crate) op_boundaries: Vec<usize>,
    /// Parameter index where each block starts; the final entry is `n_params`.
    pub(crate) param_boundaries: Vec<usize>,
    pub(crate) kind: Option<AnsatzKind>,
}

impl Circuit {
    /// A circuit with no ops and no parameters.
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            labels: Vec::new(),
            op_boundaries: vec![0, 0],
            param_boundaries: vec![0, 0],
            kind: None,
        }
    }

    /// Free-form circuit from explicit ops. Every parameter index below
    /// `n_params` must be referenced; labels default to one block.
    pub fn from_ops(n_qubits: usize, n_params: usize, ops: Vec<GateOp>) -> Result<Self> {
        let mut used = vec![false; n_params];
        for op in &ops {
            if op.qubits.iter().any(|&q| q >= n_qubits) {
                return input(format!("op `{op}` exceeds {n_qubits} qubits"));
            }
            for a in &op.angles {
                if let Some(i) = a.index {
                    if i >= n_params {
                        return input(format!("op `{op}` references parameter {i} >= {n_params}"));
                    }
                    if a.coefficient == 0.0 {
                        return input(format!("op `{op}` has a zero coefficient"));
                    }
                    used[i] = true;
                }
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return input(format!("parameter {i} is never used"));
        }
        let labels = (0..n_params).map(|i| ParamLabel { block: 0, role: ParamRole::Ry, site: i }).collect();
        Ok(Self {
            n_qubits,
            op_boundaries: vec![0, ops.len()],
            param_boundaries: vec![0, n_params],
            ops,
            labels,
            kind: None,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.labels.len()
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn labels(&self) -> &[ParamLabel] {
        &self.labels
    }

    pub fn kind(&self) -> Option<AnsatzKind> {
        self.kind
    }

    /// Number of repeating layers (excludes the initial rotation column).
    pub fn layers(&self) -> usize {
        self.param_boundaries.len() - 2
    }

    /// Op index ranges of each block (block 0 = initial column).
    pub fn layer_boundaries(&self) -> &[usize] {
        &self.op_boundaries
    }

    /// Parameter index range of block `block`.
    pub fn block_params(&self, block: usize) -> Range<usize> {
        self.param_boundaries[block]..self.param_boundaries[block + 1]
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return input(format!("circuit has {} parameters, got {}", self.n_params(), params.len()));
        }
        Ok(())
    }

    /// Applies the circuit to `state` in place.
    pub fn apply(&self, params: &[f64], state: &mut Statevector) -> Result<()> {
        self.check_params(params)?;
        if state.n_qubits() != self.n_qubits {
            return input(format!("state has {} qubits, circuit {}", state.n_qubits(), self.n_qubits));
        }
        let amps = state.amplitudes_mut();
        for op in &self.ops {
            op.apply_matrix(&op.matrix(params), amps);
        }
        Ok(())
    }

    /// `U(params) |reference>`.
    pub fn run(&self, params: &[f64], reference: &Statevector) -> Result<Statevector> {
        let mut out = reference.clone();
        self.apply(params, &mut out)?;
        Ok(out)
    }

    /// Circuit depth under as-soon-as-possible scheduling, one time slot per
    /// gate of either arity.
    pub fn asap_depth(&self) -> usize {
        let mut frontier = vec![0usize; self.n_qubits];
        for op in &self.ops {
            let t = op.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
            for &q in &op.qubits {
                frontier[q] = t;
            }
        }
        frontier.into_iter().max().unwrap_or(0)
    }

    pub fn count_two_qubit(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.arity() == 2).count()
    }

    pub fn count_single_qubit(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.arity() == 1).count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.kind == kind).count()
    }

    /// Textual gate list, one op per line: `kind q[,q] angle-expr...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }
}
