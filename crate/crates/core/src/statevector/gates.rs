//! Fixed gate library.
//!
//! Rotations follow `R_G(t) = exp(-i t G / 2)`. Two-qubit matrices are indexed
//! with the first qubit of the pair as the more significant bit, so
//! `CNOT` below has its control on the first qubit.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    H,
    X,
    Cnot,
    Cz,
    Swap,
    ISwap,
    /// `fSim(theta, phi)`: mixes |01>,|10> with `-i sin(theta)` and phases
    /// |11> by `exp(-i phi)`.
    FSim,
    /// Exchange-type particle-conserving gate `A(theta, phi)`.
    A,
    /// Hop gate `h(phi)`.
    Hop,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::H,
        GateKind::X,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::ISwap,
        GateKind::FSim,
        GateKind::A,
        GateKind::Hop,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::H | GateKind::X => 1,
            _ => 2,
        }
    }

    pub fn n_angles(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Hop => 1,
            GateKind::FSim | GateKind::A => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::ISwap => "iSWAP",
            GateKind::FSim => "fSim",
            GateKind::A => "A",
            GateKind::Hop => "hop",
        }
    }

    /// Matrix of the gate at the given angles.
    pub fn matrix(self, angles: &[f64]) -> Result<GateMatrix> {
        self.check_angles(angles)?;
        Ok(self.matrix_unchecked(angles))
    }

    pub(crate) fn matrix_unchecked(self, a: &[f64]) -> GateMatrix {
        match self {
            GateKind::Rx => {
                let (s, c) = (a[0] / 2.0).sin_cos();
                GateMatrix::One([[c.into(), -I * s], [-I * s, c.into()]])
            }
            GateKind::Ry => {
                let (s, c) = (a[0] / 2.0).sin_cos();
                GateMatrix::One([[c.into(), (-s).into()], [s.into(), c.into()]])
            }
            GateKind::Rz => {
                let h = a[0] / 2.0;
                GateMatrix::One([[Complex64::from_polar(1.0, -h), ZERO], [ZERO, Complex64::from_polar(1.0, h)]])
            }
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                GateMatrix::One([[h, h], [h, -h]])
            }
            GateKind::X => GateMatrix::One([[ZERO, ONE], [ONE, ZERO]]),
            GateKind::Cnot => GateMatrix::Two(permutation([0, 1, 3, 2], [ONE; 4])),
            GateKind::Cz => GateMatrix::Two(diag([ONE, ONE, ONE, -ONE])),
            GateKind::Swap => GateMatrix::Two(permutation([0, 2, 1, 3], [ONE; 4])),
            GateKind::ISwap => GateMatrix::Two(permutation([0, 2, 1, 3], [ONE, I, I, ONE])),
            GateKind::FSim => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ONE, c.into(), c.into(), Complex64::from_polar(1.0, -a[1])]);
                m[1][2] = -I * s;
                m[2][1] = -I * s;
                GateMatrix::Two(m)
            }
            GateKind::A => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ONE, c.into(), (-c).into(), ONE]);
                m[1][2] = Complex64::from_polar(s, a[1]);
                m[2][1] = Complex64::from_polar(s, -a[1]);
                GateMatrix::Two(m)
            }
            GateKind::Hop => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ONE, c.into(), c.into(), -ONE]);
                m[1][2] = (-s).into();
                m[2][1] = s.into();
                GateMatrix::Two(m)
            }
        }
    }

    /// Partial derivative of the gate matrix with respect to angle `which`.
    pub fn derivative(self, angles: &[f64], which: usize) -> Result<GateMatrix> {
        self.check_angles(angles)?;
        if which >= angles.len() {
            return input(format!("{} has no angle #{which}", self.name()));
        }
        Ok(self.derivative_unchecked(angles, which))
    }

    pub(crate) fn derivative_unchecked(self, a: &[f64], which: usize) -> GateMatrix {
        match (self, which) {
            (GateKind::Rx, _) => {
                let (s, c) = (a[0] / 2.0).sin_cos();
                let d = Complex64::new(-0.5 * s, 0.0);
                let o = Complex64::new(0.0, -0.5 * c);
                GateMatrix::One([[d, o], [o, d]])
            }
            (GateKind::Ry, _) => {
                let (s, c) = (a[0] / 2.0).sin_cos();
                GateMatrix::One([[(-0.5 * s).into(), (-0.5 * c).into()], [(0.5 * c).into(), (-0.5 * s).into()]])
            }
            (GateKind::Rz, _) => {
                let h = a[0] / 2.0;
                GateMatrix::One([
                    [-0.5 * I * Complex64::from_polar(1.0, -h), ZERO],
                    [ZERO, 0.5 * I * Complex64::from_polar(1.0, h)],
                ])
            }
            (GateKind::FSim, 0) => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ZERO, (-s).into(), (-s).into(), ZERO]);
                m[1][2] = -I * c;
                m[2][1] = -I * c;
                GateMatrix::Two(m)
            }
            (GateKind::FSim, _) => {
                GateMatrix::Two(diag([ZERO, ZERO, ZERO, -I * Complex64::from_polar(1.0, -a[1])]))
            }
            (GateKind::A, 0) => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ZERO, (-s).into(), s.into(), ZERO]);
                m[1][2] = Complex64::from_polar(c, a[1]);
                m[2][1] = Complex64::from_polar(c, -a[1]);
                GateMatrix::Two(m)
            }
            (GateKind::A, _) => {
                let s = a[0].sin();
                let mut m = [[ZERO; 4]; 4];
                m[1][2] = I * Complex64::from_polar(s, a[1]);
                m[2][1] = -I * Complex64::from_polar(s, -a[1]);
                GateMatrix::Two(m)
            }
            (GateKind::Hop, _) => {
                let (s, c) = a[0].sin_cos();
                let mut m = diag([ZERO, (-s).into(), (-s).into(), ZERO]);
                m[1][2] = (-c).into();
                m[2][1] = c.into();
                GateMatrix::Two(m)
            }
            (kind, _) => unreachable!("{} has no angles", kind.name()),
        }
    }

    fn check_angles(self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.n_angles() {
            return input(format!(
                "{} takes {} angle(s), got {}",
                self.name(),
                self.n_angles(),
                angles.len()
            ));
        }
        Ok(())
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown gate `{s}`")))
    }
}

/// A 2x2 or 4x4 complex matrix acting on one or two qubits.
#[derive(Clone, Debug, PartialEq)]
pub enum GateMatrix {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl GateMatrix {
    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::One(_) => 1,
            GateMatrix::Two(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.arity()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match self {
            GateMatrix::One(m) => m[r][c],
            GateMatrix::Two(m) => m[r][c],
        }
    }

    pub fn identity(arity: usize) -> GateMatrix {
        match arity {
            1 => GateMatrix::One([[ONE, ZERO], [ZERO, ONE]]),
            _ => GateMatrix::Two(diag([ONE; 4])),
        }
    }

    pub fn adjoint(&self) -> GateMatrix {
        match self {
            GateMatrix::One(m) => {
                let mut out = [[ZERO; 2]; 2];
                for r in 0..2 {
                    for c in 0..2 {
                        out[r][c] = m[c][r].conj();
                    }
                }
                GateMatrix::One(out)
            }
            GateMatrix::Two(m) => {
                let mut out = [[ZERO; 4]; 4];
                for r in 0..4 {
                    for c in 0..4 {
                        out[r][c] = m[c][r].conj();
                    }
                }
                GateMatrix::Two(out)
            }
        }
    }

    /// Matrix product `self * rhs`. Both operands must have the same arity.
    pub fn matmul(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        match (self, rhs) {
            (GateMatrix::One(a), GateMatrix::One(b)) => Ok(GateMatrix::One(mul(a, b))),
            (GateMatrix::Two(a), GateMatrix::Two(b)) => Ok(GateMatrix::Two(mul(a, b))),
            _ => input("matrix product of gates with different arity"),
        }
    }

    /// `first (x) second` as a two-qubit matrix; `first` acts on the more
    /// significant qubit of the pair.
    pub fn kron(first: &GateMatrix, second: &GateMatrix) -> Result<GateMatrix> {
        let (GateMatrix::One(a), GateMatrix::One(b)) = (first, second) else {
            return input("kron expects two single-qubit matrices");
        };
        let mut out = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] = a[r >> 1][c >> 1] * b[r & 1][c & 1];
            }
        }
        Ok(GateMatrix::Two(out))
    }

    /// Largest entrywise deviation from another matrix of equal arity.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.arity() != other.arity() {
            return f64::INFINITY;
        }
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                worst = worst.max((self.get(r, c) - other.get(r, c)).norm());
            }
        }
        worst
    }

    /// Entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matmul(&self.adjoint()).expect("same arity");
        prod.max_abs_diff(&GateMatrix::identity(self.arity()))
    }
}

/// Looks a gate up by name (case-insensitive) and evaluates it.
pub fn gate_library(name: &str, angles: &[f64]) -> Result<GateMatrix> {
    name.parse::<GateKind>()?.matrix(angles)
}

fn diag(d: [Complex64; 4]) -> [[Complex64; 4]; 4] {
    let mut m = [[ZERO; 4]; 4];
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

/// Matrix with `m[row][perm[row]] = vals[row]`.
fn permutation(perm: [usize; 4], vals: [Complex64; 4]) -> [[Complex64; 4]; 4] {
    let mut m = [[ZERO; 4]; 4];
    for r in 0..4 {
        m[r][perm[r]] = vals[r];
    }
    m
}

fn mul<const D: usize>(a: &[[Complex64; D]; D], b: &[[Complex64; D]; D]) -> [[Complex64; D]; D] {
    let mut out = [[ZERO; D]; D];
    for r in 0..D {
        for c in 0..D {
            let mut acc = ZERO;
            for k in 0..D {
                acc += a[r][k] * b[k][c];
            }
            out[r][c] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn all_gates_unitary() {
        let angles = [[0.3, -1.1], [2.5, 0.7], [-3.0, 3.1]];
        for kind in GateKind::ALL {
            for a in angles {
                let m = kind.matrix(&a[..kind.n_angles()]).unwrap();
                assert!(m.unitarity_error() < 1e-12, "{kind} not unitary");
            }
        }
    }

    #[test]
    fn fsim_and_a_at_zero() {
        let fsim = gate_library("fSim", &[0.0, 0.0]).unwrap();
        assert!(fsim.max_abs_diff(&GateMatrix::identity(2)) < 1e-15);
        for phi in [0.0, 0.4, -2.0] {
            let a = gate_library("A", &[0.0, phi]).unwrap();
            assert!(a.max_abs_diff(&GateMatrix::Two(diag([ONE, ONE, -ONE, ONE]))) < 1e-15);
        }
        let hop = gate_library("hop", &[0.0]).unwrap();
        assert!(hop.max_abs_diff(&GateMatrix::Two(diag([ONE, ONE, ONE, -ONE]))) < 1e-15);
    }

    #[test]
    fn fsim_swaps_at_half_pi() {
        let m = GateKind::FSim.matrix(&[PI / 2.0, 0.0]).unwrap();
        assert!((m.get(2, 1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let m = GateKind::FSim.matrix(&[0.0, PI]).unwrap();
        assert!((m.get(3, 3) + ONE).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_names_and_angle_counts() {
        assert!(gate_library("toffoli", &[]).is_err());
        assert!(gate_library("Rx", &[]).is_err());
        assert!(gate_library("CNOT", &[1.0]).is_err());
        assert!(gate_library("fsim", &[1.0]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for kind in GateKind::ALL.into_iter().filter(|k| k.n_angles() > 0) {
            let base = [0.37, -1.21];
            let a = &base[..kind.n_angles()];
            for which in 0..a.len() {
                let mut plus = a.to_vec();
                let mut minus = a.to_vec();
                plus[which] += h;
                minus[which] -= h;
                let p = kind.matrix(&plus).unwrap();
                let m = kind.matrix(&minus).unwrap();
                let d = kind.derivative(a, which).unwrap();
                for r in 0..d.dim() {
                    for c in 0..d.dim() {
                        let fd = (p.get(r, c) - m.get(r, c)) / (2.0 * h);
                        assert!((fd - d.get(r, c)).norm() < 1e-8, "{kind} d{which} ({r},{c})");
                    }
                }
            }
        }
    }
}
