//! Pauli-string Hamiltonians.
//!
//! A [`PauliString`] is stored in symplectic form: bit `n` of `x` / `z`
//! records an X / Z factor on qubit `n` (both set means Y). Strings are
//! printed and parsed letter-per-qubit, character `n` acting on qubit `n`.

mod eigen;
mod io;

pub use eigen::{dense_ground_state, exact_ground_state, lanczos_ground_state, GroundState, Method, DENSE_MAX_QUBITS};
pub use io::{load_hamiltonian, save_hamiltonian, HamiltonianFile, FORMAT_VERSION};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{input, Error, Result};
use crate::statevector::Statevector;

pub const MAX_PAULI_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, x: 0, z: 0 }
    }

    pub fn parse(letters: &str) -> Result<Self> {
        let n_qubits = letters.chars().count();
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return input(format!("Pauli string length {n_qubits} out of range"));
        }
        let mut p = Self::identity(n_qubits);
        for (n, c) in letters.chars().enumerate() {
            let bit = 1u64 << n;
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => p.x |= bit,
                'Y' => {
                    p.x |= bit;
                    p.z |= bit
                }
                'Z' => p.z |= bit,
                other => return input(format!("invalid Pauli letter `{other}` in `{letters}`")),
            }
        }
        Ok(p)
    }

    /// Parses the sparse form used on the command line, e.g. `Z0Z1X4`.
    pub fn parse_sparse(spec: &str, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return input(format!("qubit count {n_qubits} out of range"));
        }
        let mut letters = vec!['I'; n_qubits];
        let mut chars = spec.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = c.to_ascii_uppercase();
            if !matches!(letter, 'X' | 'Y' | 'Z') {
                return input(format!("expected X, Y or Z in `{spec}`, found `{c}`"));
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize = digits
                .parse()
                .map_err(|_| Error::Input(format!("missing qubit index after `{c}` in `{spec}`")))?;
            if q >= n_qubits {
                return input(format!("qubit {q} out of range for {n_qubits} qubits"));
            }
            if letters[q] != 'I' {
                return input(format!("qubit {q} appears twice in `{spec}`"));
            }
            letters[q] = letter;
        }
        Self::parse(&letters.into_iter().collect::<String>())
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return input(format!("qubit count {n_qubits} out of range"));
        }
        let valid = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if (x | z) & !valid != 0 {
            return input("mask has bits above the qubit count");
        }
        Ok(Self { n_qubits, x, z })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> char {
        let bit = 1u64 << qubit;
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits with a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| (self.x | self.z) >> q & 1 == 1).collect()
    }

    pub fn n_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Same string with qubit `n` moved to `n + offset` on a register of
    /// `n_qubits` qubits.
    pub fn embed(&self, n_qubits: usize, offset: usize) -> Result<Self> {
        if offset + self.n_qubits > n_qubits {
            return input("embedding exceeds the target register");
        }
        Self::from_masks(n_qubits, self.x << offset, self.z << offset)
    }

    /// `exp(i theta P) |psi> = cos(theta) |psi> + i sin(theta) P |psi>`.
    pub fn rotate(&self, theta: f64, sv: &Statevector) -> Result<Statevector> {
        if sv.n_qubits() != self.n_qubits {
            return input(format!("{}-qubit string applied to a {}-qubit state", self.n_qubits, sv.n_qubits()));
        }
        let psi = sv.amplitudes();
        let mut out: Vec<Complex64> = psi.iter().map(|a| a * theta.cos()).collect();
        let phase = i_pow(self.n_y() as i64 + 1) * theta.sin();
        for (b, a) in psi.iter().enumerate() {
            let sign = if (b as u64 & self.z).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            out[b ^ self.x as usize] += phase * a * sign;
        }
        Statevector::from_amplitudes(out)
    }

    /// `self * other = phase * result`.
    pub fn mul(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.n_qubits != other.n_qubits {
            return input("Pauli product of strings with different lengths");
        }
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let exponent = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        Ok((i_pow(exponent), PauliString { n_qubits: self.n_qubits, x, z }))
    }
}

fn i_pow(e: i64) -> Complex64 {
    match e.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (0..self.n_qubits).try_for_each(|q| write!(f, "{}", self.letter(q)))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Real-weighted sum of Pauli strings on a fixed register.
#[derive(Clone)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
    /// Terms sharing an X mask folded into one diagonal, built on first use.
    groups: OnceLock<Option<Vec<XGroup>>>,
}

#[derive(Clone)]
struct XGroup {
    x: usize,
    diagonal: Vec<Complex64>,
}

/// Largest `groups * 2^n` table kept in memory, in amplitudes.
const GROUP_TABLE_LIMIT: usize = 1 << 24;

impl PartialEq for PauliSum {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.terms == other.terms
    }
}

impl fmt::Debug for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PauliSum").field("n_qubits", &self.n_qubits).field("terms", &self.terms).finish()
    }
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self::with_terms(n_qubits, Vec::new())
    }

    fn with_terms(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Self {
        Self { n_qubits, terms, groups: OnceLock::new() }
    }

    fn groups(&self) -> Option<&[XGroup]> {
        self.groups
            .get_or_init(|| {
                let mut by_x: BTreeMap<u64, Vec<(Complex64, usize)>> = BTreeMap::new();
                for (c, p) in &self.terms {
                    by_x.entry(p.x).or_default().push((i_pow(p.n_y() as i64) * c, p.z as usize));
                }
                let dim = 1usize << self.n_qubits;
                if by_x.len().saturating_mul(dim) > GROUP_TABLE_LIMIT {
                    return None;
                }
                let groups = by_x
                    .into_iter()
                    .map(|(x, terms)| {
                        let diagonal = (0..dim)
                            .map(|b| {
                                terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (c, z)| {
                                    if (b & z).count_ones() & 1 == 1 {
                                        acc - c
                                    } else {
                                        acc + c
                                    }
                                })
                            })
                            .collect();
                        XGroup { x: x as usize, diagonal }
                    })
                    .collect();
                Some(groups)
            })
            .as_deref()
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut sum = Self::new(n_qubits);
        for (c, p) in terms {
            sum.push(c, p)?;
        }
        Ok(sum)
    }

    pub fn push(&mut self, coeff: f64, string: PauliString) -> Result<()> {
        if string.n_qubits != self.n_qubits {
            return input(format!(
                "term `{string}` has {} qubits, sum has {}",
                string.n_qubits, self.n_qubits
            ));
        }
        if !coeff.is_finite() {
            return input(format!("non-finite coefficient on `{string}`"));
        }
        self.terms.push((coeff, string));
        self.groups = OnceLock::new();
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute coefficients; bounds the spectral radius.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// Merges duplicate strings (sorted by mask) and drops exact zeros.
    pub fn simplified(&self) -> PauliSum {
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (c, p) in &self.terms {
            *merged.entry(*p).or_insert(0.0) += c;
        }
        PauliSum::with_terms(
            self.n_qubits,
            merged.into_iter().filter(|(_, c)| *c != 0.0).map(|(p, c)| (c, p)).collect(),
        )
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        PauliSum::with_terms(self.n_qubits, self.terms.iter().map(|(c, p)| (c * factor, *p)).collect())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return input("adding sums on different registers");
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(PauliSum::with_terms(self.n_qubits, terms))
    }

    /// Operator product, merged. Fails if the product is not Hermitian
    /// (an imaginary coefficient survives merging).
    pub fn product(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return input("multiplying sums on different registers");
        }
        let mut merged: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let (phase, r) = p.mul(q)?;
                *merged.entry(r).or_insert(Complex64::new(0.0, 0.0)) += phase * (a * b);
            }
        }
        let scale = self.one_norm() * other.one_norm();
        let mut out = PauliSum::new(self.n_qubits);
        for (p, c) in merged {
            if c.im.abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::Internal(format!("product has imaginary coefficient {} on `{p}`", c.im)));
            }
            if c.re != 0.0 {
                out.terms.push((c.re, p));
            }
        }
        Ok(out)
    }

    /// `out = H |psi>`.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        if let Some(groups) = self.groups() {
            for g in groups {
                for (b, (a, d)) in psi.iter().zip(&g.diagonal).enumerate() {
                    out[b ^ g.x] += d * a;
                }
            }
            return;
        }
        for (c, p) in &self.terms {
            let base = i_pow(p.n_y() as i64) * c;
            let (x, z) = (p.x as usize, p.z as usize);
            for (b, a) in psi.iter().enumerate() {
                let v = if (b & z).count_ones() & 1 == 1 { -base * a } else { base * a };
                out[b ^ x] += v;
            }
        }
    }

    pub fn apply(&self, sv: &Statevector) -> Result<Statevector> {
        self.check_state(sv)?;
        let mut out = vec![Complex64::new(0.0, 0.0); sv.len()];
        self.apply_into(sv.amplitudes(), &mut out);
        Statevector::from_amplitudes(out)
    }

    /// `<psi|H|psi>` with the imaginary round-off residue checked and dropped.
    pub fn expectation(&self, sv: &Statevector) -> Result<f64> {
        self.check_state(sv)?;
        let psi = sv.amplitudes();
        let mut total = Complex64::new(0.0, 0.0);
        if let Some(groups) = self.groups() {
            for g in groups {
                for (b, (a, d)) in psi.iter().zip(&g.diagonal).enumerate() {
                    total += psi[b ^ g.x].conj() * d * a;
                }
            }
        } else {
            for (c, p) in &self.terms {
                total += pauli_expectation(p, psi) * c;
            }
        }
        let tol = 1e-10 * self.one_norm().max(1.0) * sv.norm_sqr().max(1.0);
        if total.im.abs() > tol {
            return Err(Error::Internal(format!(
                "expectation has imaginary part {:.3e}; operator is not Hermitian",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// Dense matrix, row-major, `m[r * dim + c] = <r|H|c>`. Oracle use only.
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        if self.n_qubits > 14 {
            return input("dense matrix limited to 14 qubits");
        }
        let dim = 1usize << self.n_qubits;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            e[c] = Complex64::new(1.0, 0.0);
            self.apply_into(&e, &mut col);
            e[c] = Complex64::new(0.0, 0.0);
            for r in 0..dim {
                m[r * dim + c] = col[r];
            }
        }
        Ok(m)
    }

    fn check_state(&self, sv: &Statevector) -> Result<()> {
        if sv.n_qubits() != self.n_qubits {
            return input(format!("state has {} qubits, Hamiltonian {}", sv.n_qubits(), self.n_qubits));
        }
        Ok(())
    }
}

/// `<psi|P|psi>` for a single string.
fn pauli_expectation(p: &PauliString, psi: &[Complex64]) -> Complex64 {
    let (x, z) = (p.x as usize, p.z as usize);
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, a) in psi.iter().enumerate() {
        let t = psi[b ^ x].conj() * a;
        if (b & z).count_ones() & 1 == 1 {
            acc -= t;
        } else {
            acc += t;
        }
    }
    acc * i_pow(p.n_y() as i64)
}

/// Open-boundary Heisenberg chain `-(J/2) sum_n sigma_n . sigma_{n+1}`.
pub fn heisenberg_1d(n_sites: usize, coupling: f64) -> Result<PauliSum> {
    if n_sites < 2 {
        return input(format!("Heisenberg chain needs at least 2 sites, got {n_sites}"));
    }
    if n_sites > MAX_PAULI_QUBITS {
        return input(format!("Heisenberg chain limited to {MAX_PAULI_QUBITS} sites"));
    }
    let mut h = PauliSum::new(n_sites);
    for n in 0..n_sites - 1 {
        let pair = 0b11u64 << n;
        h.push(-coupling / 2.0, PauliString::from_masks(n_sites, pair, 0)?)?;
        h.push(-coupling / 2.0, PauliString::from_masks(n_sites, pair, pair)?)?;
        h.push(-coupling / 2.0, PauliString::from_masks(n_sites, 0, pair)?)?;
    }
    Ok(h)
}

/// `H_A + H_B` on `n_A + n_B` qubits, `b` shifted above `a`.
pub fn disjoint_union(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    let n = a.n_qubits + b.n_qubits;
    let mut out = PauliSum::new(n);
    for (c, p) in &a.terms {
        out.push(*c, p.embed(n, 0)?)?;
    }
    for (c, p) in &b.terms {
        out.push(*c, p.embed(n, a.n_qubits)?)?;
    }
    Ok(out)
}

/// `beta (N_up - n_up)^2 + beta (N_down - n_down)^2` with spin-up orbitals on
/// even qubits and spin-down orbitals on odd qubits.
pub fn number_penalty(n_qubits: usize, n_up: usize, n_down: usize, beta: f64) -> Result<PauliSum> {
    if n_qubits == 0 || !n_qubits.is_multiple_of(2) {
        return input(format!("number penalty needs an even qubit count, got {n_qubits}"));
    }
    if n_qubits > MAX_PAULI_QUBITS {
        return input("too many qubits");
    }
    let orbitals = n_qubits / 2;
    if n_up > orbitals || n_down > orbitals {
        return input(format!("occupations ({n_up}, {n_down}) exceed {orbitals} spatial orbitals"));
    }
    if !beta.is_finite() {
        return input("penalty weight must be finite");
    }
    if beta == 0.0 {
        return Ok(PauliSum::new(n_qubits));
    }
    let mut total = PauliSum::new(n_qubits);
    for (parity, target) in [(0usize, n_up), (1usize, n_down)] {
        // N_sigma - n_sigma = (orbitals/2 - n_sigma) I - 1/2 sum_q Z_q
        let mut dev = PauliSum::new(n_qubits);
        dev.push(orbitals as f64 / 2.0 - target as f64, PauliString::identity(n_qubits))?;
        for q in (parity..n_qubits).step_by(2) {
            dev.push(-0.5, PauliString::from_masks(n_qubits, 0, 1 << q)?)?;
        }
        total = total.add(&dev.product(&dev)?)?;
    }
    Ok(total.simplified().scaled(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn parse_and_display() {
        let p: PauliString = "IXYZ".parse().unwrap();
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.x_mask(), 0b0110);
        assert_eq!(p.z_mask(), 0b1100);
        assert_eq!(p.support(), vec![1, 2, 3]);
        assert!("IXA".parse::<PauliString>().is_err());
        let q = PauliString::parse_sparse("Z0Z1Z2Z4Z5", 6).unwrap();
        assert_eq!(q.to_string(), "ZZZIZZ");
        assert!(PauliString::parse_sparse("Z7", 6).is_err());
        assert!(PauliString::parse_sparse("Z1X1", 6).is_err());
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::parse("X").unwrap();
        let y = PauliString::parse("Y").unwrap();
        let z = PauliString::parse("Z").unwrap();
        let (ph, r) = x.mul(&y).unwrap();
        assert_eq!((ph, r), (Complex64::new(0.0, 1.0), z));
        let (ph, r) = y.mul(&x).unwrap();
        assert_eq!((ph, r), (Complex64::new(0.0, -1.0), z));
        let (ph, r) = z.mul(&x).unwrap();
        assert_eq!((ph, r), (Complex64::new(0.0, 1.0), y));
        let (ph, r) = y.mul(&y).unwrap();
        assert_eq!((ph, r), (Complex64::new(1.0, 0.0), PauliString::identity(1)));
    }

    #[test]
    fn heisenberg_two_sites() {
        let h = heisenberg_1d(2, -1.0).unwrap();
        let got: Vec<(f64, String)> = h.terms().iter().map(|(c, p)| (*c, p.to_string())).collect();
        assert_eq!(got, vec![(0.5, "XX".into()), (0.5, "YY".into()), (0.5, "ZZ".into())]);
        assert_eq!(heisenberg_1d(7, 1.0).unwrap().len(), 18);
        assert!(heisenberg_1d(1, 1.0).is_err());
    }

    #[test]
    fn singlet_energy() {
        let h = heisenberg_1d(2, -1.0).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        // (|01> - |10>)/sqrt2 with bitstring q0 q1: |01> has q1 = 1, index 2
        amps[2] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[1] = Complex64::new(-FRAC_1_SQRT_2, 0.0);
        let s = Statevector::from_amplitudes(amps).unwrap();
        assert!((h.expectation(&s).unwrap() + 1.5).abs() < 1e-14);
    }

    #[test]
    fn z_expectation_on_zero() {
        let h = PauliSum::from_terms(1, vec![(1.0, "Z".parse().unwrap())]).unwrap();
        assert_eq!(h.expectation(&Statevector::zero(1).unwrap()).unwrap(), 1.0);
        assert!(h.expectation(&Statevector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn union_pads_and_shifts() {
        let a = heisenberg_1d(2, -1.0).unwrap();
        let b = PauliSum::from_terms(1, vec![(2.0, "Z".parse().unwrap())]).unwrap();
        let u = disjoint_union(&a, &b).unwrap();
        assert_eq!(u.n_qubits(), 3);
        assert_eq!(u.terms()[0].1.to_string(), "XXI");
        assert_eq!(u.terms()[3].1.to_string(), "IIZ");
        let empty = PauliSum::new(2);
        let u = disjoint_union(&a, &empty).unwrap();
        assert_eq!(u.n_qubits(), 4);
        assert_eq!(u.terms().iter().map(|(_, p)| p.to_string()).collect::<Vec<_>>(), ["XXII", "YYII", "ZZII"]);
    }

    #[test]
    fn number_penalty_two_qubits() {
        let p = number_penalty(2, 1, 0, 1.0).unwrap();
        let got: Vec<(f64, String)> = p.terms().iter().map(|(c, p)| (*c, p.to_string())).collect();
        // sorted by (x, z) masks: II, ZI (z=1), IZ (z=2)
        assert_eq!(got, vec![(1.0, "II".into()), (0.5, "ZI".into()), (-0.5, "IZ".into())]);
        assert!(number_penalty(2, 1, 0, 0.0).unwrap().is_empty());
        assert!(number_penalty(3, 1, 0, 1.0).is_err());
    }

    #[test]
    fn product_rejects_non_hermitian_result() {
        let x = PauliSum::from_terms(1, vec![(1.0, "X".parse().unwrap())]).unwrap();
        let y = PauliSum::from_terms(1, vec![(1.0, "Y".parse().unwrap())]).unwrap();
        assert!(x.product(&y).is_err());
    }
}
