use std::collections::HashMap;

use crate::error::{input, Result};

use super::{build_ansatz, AnsatzKind, ParamLabel};

/// Parameters for the `(n_a + n_b)`-qubit circuit of `kind` assembled from
/// the parameters of the two subsystems, matched positionally by role and
/// site. Subsystem B sits on the qubits above A. Parameters on the bond
/// joining the two halves have no subsystem counterpart and are set to 0.
pub fn embed_subsystem_params(
    kind: AnsatzKind,
    params_a: &[f64],
    params_b: &[f64],
    n_a: usize,
    n_b: usize,
    layers: usize,
) -> Result<Vec<f64>> {
    let a = build_ansatz(kind, n_a, layers)?;
    let b = build_ansatz(kind, n_b, layers)?;
    for (name, c, p) in [("A", &a, params_a), ("B", &b, params_b)] {
        if c.n_params() != p.len() {
            return input(format!(
                "subsystem {name} parameters have length {}, but {kind} with {} qubit(s) and {layers} layer(s) needs {}",
                p.len(),
                c.n_qubits(),
                c.n_params()
            ));
        }
    }
    let lookup = |labels: &[ParamLabel], values: &[f64]| -> HashMap<ParamLabel, f64> {
        labels.iter().copied().zip(values.iter().copied()).collect()
    };
    let map_a = lookup(a.labels(), params_a);
    let map_b = lookup(b.labels(), params_b);

    let composite = build_ansatz(kind, n_a + n_b, layers)?;
    Ok(composite
        .labels()
        .iter()
        .map(|label| {
            let boundary = if label.role.on_bond() { n_a - 1 } else { usize::MAX };
            if label.site == boundary {
                0.0
            } else if label.site < n_a {
                map_a.get(label).copied().unwrap_or(0.0)
            } else {
                let shifted = ParamLabel { site: label.site - n_a, ..*label };
                map_b.get(&shifted).copied().unwrap_or(0.0)
            }
        })
        .collect())
}

/// XYZ2F parameters for the composite of two subsystems, with the joining
/// bond set to `U2(0, 0) = I` in every layer, so the composite circuit is
/// exactly `U_A (x) U_B`.
pub fn compose_subsystem_params(
    params_a: &[f64],
    params_b: &[f64],
    n_a: usize,
    n_b: usize,
    layers: usize,
) -> Result<Vec<f64>> {
    let per_a = AnsatzKind::Xyz2F.params_per_layer(n_a);
    let per_b = AnsatzKind::Xyz2F.params_per_layer(n_b);
    if per_a == 0 || per_b == 0 || !params_a.len().is_multiple_of(per_a) || !params_b.len().is_multiple_of(per_b) {
        return input("subsystem parameter vectors are not whole XYZ2F layers");
    }
    if params_a.len() / per_a != layers || params_b.len() / per_b != layers {
        return input(format!(
            "layer mismatch: A has {}, B has {}, requested {layers}",
            params_a.len() / per_a,
            params_b.len() / per_b
        ));
    }
    embed_subsystem_params(AnsatzKind::Xyz2F, params_a, params_b, n_a, n_b, layers)
}
