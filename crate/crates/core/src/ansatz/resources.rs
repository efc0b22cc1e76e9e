use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{build_ansatz, AnsatzKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCounts {
    pub n_params: usize,
    pub n_two_qubit: usize,
    pub n_single_qubit: usize,
    pub asap_depth: usize,
}

/// Counts read off the built circuit. Depth is as-soon-as-possible with
/// every gate (fSim and A included) occupying one time slot.
pub fn resource_counts(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<ResourceCounts> {
    let c = build_ansatz(kind, n_qubits, layers)?;
    Ok(ResourceCounts {
        n_params: c.n_params(),
        n_two_qubit: c.count_two_qubit(),
        n_single_qubit: c.count_single_qubit(),
        asap_depth: c.asap_depth(),
    })
}

/// Closed-form counts as a function of `N` and `L`.
pub fn table_counts(kind: AnsatzKind, n_qubits: usize, layers: usize) -> ResourceCounts {
    let (n, l) = (n_qubits, layers);
    let full_cnots = n * (n - 1) / 2 * l;
    let (n_params, n_two_qubit, n_single_qubit, asap_depth) = match kind {
        AnsatzKind::RyLinear => (n * (l + 1), (n - 1) * l, n * (l + 1), n + 3 * l - 2),
        AnsatzKind::RyFull => (n * (l + 1), full_cnots, n * (l + 1), n * l + n + l - 2),
        AnsatzKind::RyRzFull => (2 * n * (l + 1), full_cnots, 2 * n * (l + 1), n * l + n + 2 * l - 2),
        AnsatzKind::Aswap => (2 * (n - 1) * l, (n - 1) * l, 0, 2 * l),
        AnsatzKind::Xyz1F => ((4 * n - 1) * l, 2 * (n - 1) * l, (8 * n - 3) * l, (4 * n + 3) * l),
        AnsatzKind::Xyz2F => ((5 * n - 2) * l, 2 * (n - 1) * l, (9 * n - 4) * l, (4 * n + 3) * l),
    };
    ResourceCounts { n_params, n_two_qubit, n_single_qubit, asap_depth }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let x = resource_counts(AnsatzKind::Xyz2F, 6, 1).unwrap();
        assert_eq!((x.n_single_qubit, x.n_two_qubit), (50, 10));
        let r = resource_counts(AnsatzKind::RyLinear, 5, 2).unwrap();
        assert_eq!((r.n_params, r.n_two_qubit), (15, 8));
        assert_eq!(resource_counts(AnsatzKind::Aswap, 6, 4).unwrap().asap_depth, 8);
    }

    #[test]
    fn depth_matches_closed_form() {
        for kind in AnsatzKind::ALL {
            for n in 3..=6 {
                for l in 1..=3 {
                    let got = resource_counts(kind, n, l).unwrap();
                    let mut want = table_counts(kind, n, l);
                    // the leading Ry and Rz columns take two slots
                    if kind == AnsatzKind::RyRzFull {
                        want.asap_depth += 1;
                    }
                    assert_eq!(got, want, "{kind} n={n} l={l}");
                }
            }
        }
    }
}
