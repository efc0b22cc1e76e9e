//! Dense statevector and gate application kernels.
//!
//! Basis index convention: the bitstring `q0 q1 ... q(N-1)` maps to index
//! `sum_n q_n 2^n`, i.e. qubit 0 is the least significant bit.

mod gates;

pub use gates::{gate_library, GateKind, GateMatrix};

use num_complex::Complex64;

use crate::error::{input, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// |0...0> on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_index(n_qubits, 0)
    }

    pub fn basis_index(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 {
            return input(format!("unsupported qubit count {n_qubits}"));
        }
        if index >> n_qubits != 0 {
            return input(format!("basis index {index} out of range for {n_qubits} qubits"));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state from a bitstring whose character `n` is the
    /// value of qubit `n`.
    pub fn basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        Self::basis_index(n_qubits, bitstring_index(n_qubits, bits)?)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return input(format!("amplitude count {len} is not a power of two >= 2"));
        }
        Ok(Self { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    /// Tensor product of single-qubit states, `states[n]` on qubit `n`.
    pub fn product(states: &[[Complex64; 2]]) -> Result<Self> {
        if states.is_empty() {
            return input("product state needs at least one qubit");
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for s in states {
            // qubit n becomes bit n: new index = old + bit * 2^n
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * s[0]));
            next.extend(amps.iter().map(|a| a * s[1]));
            amps = next;
        }
        Self::from_amplitudes(amps)
    }

    /// `self (x) high`: `self` occupies the low qubits, `high` the qubits above.
    pub fn tensor(&self, high: &Statevector) -> Statevector {
        let mut amplitudes = Vec::with_capacity(self.len() * high.len());
        for b in &high.amplitudes {
            amplitudes.extend(self.amplitudes.iter().map(|a| a * b));
        }
        Statevector { n_qubits: self.n_qubits + high.n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return input("cannot normalize a zero or non-finite state");
        }
        let inv = 1.0 / n;
        self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner_product(&self, other: &Statevector) -> Result<Complex64> {
        self.check_same_size(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Statevector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    pub fn copy_from(&mut self, other: &Statevector) {
        self.n_qubits = other.n_qubits;
        self.amplitudes.clear();
        self.amplitudes.extend_from_slice(&other.amplitudes);
    }

    pub(crate) fn check_same_size(&self, other: &Statevector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return input(format!("qubit count mismatch: {} vs {}", self.n_qubits, other.n_qubits));
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return input(format!("qubit {q} out of range for {} qubits", self.n_qubits));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return input(format!("two-qubit gate on repeated qubit {a}"));
        }
        Ok(())
    }

    /// Applies a single-qubit matrix in place.
    pub fn apply_1q(&mut self, qubit: usize, g: &GateMatrix) -> Result<()> {
        self.check_qubit(qubit)?;
        let GateMatrix::One(m) = g else {
            return input("apply_1q needs a single-qubit matrix");
        };
        apply_1q_raw(&mut self.amplitudes, qubit, m);
        Ok(())
    }

    /// Applies a two-qubit matrix in place; `q_a` is the more significant bit
    /// of the 4x4 matrix index.
    pub fn apply_2q(&mut self, q_a: usize, q_b: usize, g: &GateMatrix) -> Result<()> {
        self.check_pair(q_a, q_b)?;
        let GateMatrix::Two(m) = g else {
            return input("apply_2q needs a two-qubit matrix");
        };
        apply_2q_raw(&mut self.amplitudes, q_a, q_b, m);
        Ok(())
    }

    /// Applies a gate of either arity on `qubits`.
    pub fn apply(&mut self, qubits: &[usize], g: &GateMatrix) -> Result<()> {
        match (qubits, g.arity()) {
            ([q], 1) => self.apply_1q(*q, g),
            ([a, b], 2) => self.apply_2q(*a, *b, g),
            _ => input(format!("{} qubit(s) given for an arity-{} gate", qubits.len(), g.arity())),
        }
    }

    /// Out-of-place variant of [`Statevector::apply_1q`].
    pub fn applied_1q(&self, qubit: usize, g: &GateMatrix) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_1q(qubit, g)?;
        Ok(out)
    }

    /// Out-of-place variant of [`Statevector::apply_2q`].
    pub fn applied_2q(&self, q_a: usize, q_b: usize, g: &GateMatrix) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_2q(q_a, q_b, g)?;
        Ok(out)
    }

    /// `<bra| G_qubits |ket>` without materialising `G |ket>`.
    pub fn sandwich(bra: &Statevector, qubits: &[usize], g: &GateMatrix, ket: &Statevector) -> Result<Complex64> {
        bra.check_same_size(ket)?;
        match (qubits, g) {
            ([q], GateMatrix::One(m)) => {
                ket.check_qubit(*q)?;
                Ok(sandwich_1q_raw(&bra.amplitudes, &ket.amplitudes, *q, m))
            }
            ([a, b], GateMatrix::Two(m)) => {
                ket.check_pair(*a, *b)?;
                Ok(sandwich_2q_raw(&bra.amplitudes, &ket.amplitudes, *a, *b, m))
            }
            _ => input("qubit list does not match gate arity"),
        }
    }
}

/// Index of a bitstring under the little-endian convention.
pub fn bitstring_index(n_qubits: usize, bits: &str) -> Result<usize> {
    if bits.chars().count() != n_qubits {
        return input(format!("bitstring `{bits}` has length {} but {n_qubits} qubits were requested", bits.len()));
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (n, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << n),
        _ => input(format!("bitstring `{bits}` contains `{c}`")),
    })
}

pub(crate) fn apply_1q_raw(amps: &mut [Complex64], qubit: usize, m: &[[Complex64; 2]; 2]) {
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = m[0][0] * x + m[0][1] * y;
            *a1 = m[1][0] * x + m[1][1] * y;
        }
    }
}

/// Spreads the bits of `k` around two zero bits at positions `lo < hi`.
#[inline]
fn insert_two_zeros(k: usize, lo: usize, hi: usize) -> usize {
    let low_mask = (1usize << lo) - 1;
    let x = (k & low_mask) | ((k & !low_mask) << 1);
    let high_mask = (1usize << hi) - 1;
    (x & high_mask) | ((x & !high_mask) << 1)
}

pub(crate) fn apply_2q_raw(amps: &mut [Complex64], q_a: usize, q_b: usize, m: &[[Complex64; 4]; 4]) {
    let (ma, mb) = (1usize << q_a, 1usize << q_b);
    let (lo, hi) = if q_a < q_b { (q_a, q_b) } else { (q_b, q_a) };
    for k in 0..amps.len() >> 2 {
        let i = insert_two_zeros(k, lo, hi);
        let idx = [i, i | mb, i | ma, i | ma | mb];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            amps[idx[r]] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

pub(crate) fn sandwich_1q_raw(bra: &[Complex64], ket: &[Complex64], qubit: usize, m: &[[Complex64; 2]; 2]) -> Complex64 {
    let stride = 1usize << qubit;
    let mut acc = ZERO;
    for (bb, kb) in bra.chunks_exact(stride << 1).zip(ket.chunks_exact(stride << 1)) {
        for j in 0..stride {
            let (x, y) = (kb[j], kb[j + stride]);
            acc += bb[j].conj() * (m[0][0] * x + m[0][1] * y);
            acc += bb[j + stride].conj() * (m[1][0] * x + m[1][1] * y);
        }
    }
    acc
}

pub(crate) fn sandwich_2q_raw(
    bra: &[Complex64],
    ket: &[Complex64],
    q_a: usize,
    q_b: usize,
    m: &[[Complex64; 4]; 4],
) -> Complex64 {
    let (ma, mb) = (1usize << q_a, 1usize << q_b);
    let (lo, hi) = if q_a < q_b { (q_a, q_b) } else { (q_b, q_a) };
    let mut acc = ZERO;
    for k in 0..ket.len() >> 2 {
        let i = insert_two_zeros(k, lo, hi);
        let idx = [i, i | mb, i | ma, i | ma | mb];
        let v = [ket[idx[0]], ket[idx[1]], ket[idx[2]], ket[idx[3]]];
        for r in 0..4 {
            let row = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            acc += bra[idx[r]].conj() * row;
        }
    }
    acc
}
