//! Experiment harnesses: size consistency, layer convergence, cost scaling
//! and gradient variance.

mod output;

pub use output::{
    format_float, metadata_path, read_convergence_csv, read_size_consistency_csv, read_variance_csv,
    write_convergence_csv, write_metadata, write_size_consistency_csv, write_variance_csv, RunMetadata,
    CONVERGENCE_HEADER, SIZE_CONSISTENCY_HEADER, VARIANCE_HEADER,
};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, embed_subsystem_params, neel_bitstring, resource_counts, AnsatzKind, ResourceCounts};
use crate::error::{input, Error, Result};
use crate::gradient::energy_and_gradient;
use crate::optimize::{layerwise_vqe, BfgsConfig, LayerwiseRun, RestartSpec};
use crate::pauli::{disjoint_union, exact_ground_state, heisenberg_1d, PauliSum};
use crate::statevector::Statevector;

/// Coupling of the antiferromagnetic Heisenberg chain used by the
/// harnesses (`H = -J/2 sum (XX + YY + ZZ)`).
pub const HEISENBERG_J: f64 = -1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeConsistencyRow {
    pub kind: AnsatzKind,
    #[serde(rename = "L")]
    pub layers: usize,
    /// Energy per site of the optimized subsystem.
    pub e_sub: f64,
    /// Energy per site of the composite built from the subsystem parameters.
    pub e_composite: f64,
    pub infidelity_sub: f64,
    pub infidelity_composite: f64,
}

/// Optimizes an `n_sub`-site Heisenberg chain layer by layer, places the
/// subsystem parameters on both halves of the `2 n_sub`-site chain of two
/// decoupled copies, and compares energies per site and infidelities.
///
/// Parameters on the bond joining the halves are 0. For XYZ2F that bond is
/// then the identity and the composite state is exactly the product.
pub fn size_consistency_test(
    kind: AnsatzKind,
    n_sub: usize,
    layer_list: &[usize],
    bfgs: &BfgsConfig,
    restarts: &RestartSpec,
) -> Result<Vec<SizeConsistencyRow>> {
    let Some(&max_layers) = layer_list.iter().max() else {
        return input("no layer counts given");
    };
    if layer_list.contains(&0) {
        return input("layer counts must be positive");
    }
    let h_sub = heisenberg_1d(n_sub, HEISENBERG_J)?;
    let h_comp = disjoint_union(&h_sub, &h_sub)?;
    let ground_sub = exact_ground_state(&h_sub)?.state;
    let ground_comp = ground_sub.tensor(&ground_sub);
    let ref_sub = neel_bitstring(n_sub);
    let ref_comp = format!("{ref_sub}{ref_sub}");
    let reference_sub = Statevector::basis_state(n_sub, &ref_sub)?;
    let reference_comp = Statevector::basis_state(2 * n_sub, &ref_comp)?;

    let run = layerwise_vqe(&h_sub, kind, &ref_sub, max_layers, bfgs, restarts)?;
    let mut rows = Vec::with_capacity(layer_list.len());
    for &l in layer_list {
        let record = &run.layers[l - 1];
        let sub = build_ansatz(kind, n_sub, l)?;
        let comp = build_ansatz(kind, 2 * n_sub, l)?;
        let psi_sub = sub.run(&record.params, &reference_sub)?;
        let params_comp = embed_subsystem_params(kind, &record.params, &record.params, n_sub, n_sub, l)?;
        let psi_comp = comp.run(&params_comp, &reference_comp)?;
        rows.push(SizeConsistencyRow {
            kind,
            layers: l,
            e_sub: record.energy / n_sub as f64,
            e_composite: h_comp.expectation(&psi_comp)? / (2 * n_sub) as f64,
            infidelity_sub: 1.0 - psi_sub.fidelity(&ground_sub)?,
            infidelity_composite: 1.0 - psi_comp.fidelity(&ground_comp)?,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub layer: usize,
    pub energy: f64,
    pub error_vs_exact: f64,
    pub per_site_energy: Option<f64>,
    pub n_params: usize,
    pub n_two_qubit: usize,
    pub asap_depth: usize,
    pub iterations: usize,
    pub wall_time_s: f64,
}

/// Layerwise optimization of `h`, one row per layer. `sites` enables the
/// per-site energy column.
#[allow(clippy::too_many_arguments)]
pub fn convergence_sweep(
    h: &PauliSum,
    kind: AnsatzKind,
    reference: &str,
    max_layers: usize,
    bfgs: &BfgsConfig,
    restarts: &RestartSpec,
    sites: Option<usize>,
) -> Result<Vec<ConvergenceRow>> {
    let exact = exact_ground_state(h)?.energy;
    LayerwiseRun::new(h, kind, reference, max_layers, *bfgs, restarts.clone())?
        .map(|record| {
            let record = record?;
            let counts = resource_counts(kind, h.n_qubits(), record.layer)?;
            Ok(ConvergenceRow {
                layer: record.layer,
                energy: record.energy,
                error_vs_exact: record.energy - exact,
                per_site_energy: sites.map(|n| record.energy / n as f64),
                n_params: counts.n_params,
                n_two_qubit: counts.n_two_qubit,
                asap_depth: counts.asap_depth,
                iterations: record.iterations,
                wall_time_s: record.wall_time_s,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Accuracy {
    Reached { layers: usize, error: f64, counts: ResourceCounts },
    NotReached { layer_cap: usize, best_error: f64 },
}

/// Smallest layer count whose optimized energy is within `tolerance` of the
/// exact ground energy, stopping the layerwise run as soon as it is found.
#[allow(clippy::too_many_arguments)]
pub fn layers_to_accuracy(
    h: &PauliSum,
    kind: AnsatzKind,
    reference: &str,
    tolerance: f64,
    layer_cap: usize,
    bfgs: &BfgsConfig,
    restarts: &RestartSpec,
) -> Result<Accuracy> {
    if !(tolerance > 0.0) {
        return input(format!("tolerance must be positive, got {tolerance}"));
    }
    let exact = exact_ground_state(h)?.energy;
    let mut best_error = f64::INFINITY;
    for record in LayerwiseRun::new(h, kind, reference, layer_cap, *bfgs, restarts.clone())? {
        let record = record?;
        let error = record.energy - exact;
        best_error = best_error.min(error);
        if error <= tolerance {
            let counts = resource_counts(kind, h.n_qubits(), record.layer)?;
            return Ok(Accuracy::Reached { layers: record.layer, error, counts });
        }
    }
    Ok(Accuracy::NotReached { layer_cap, best_error })
}

/// Least-squares fit of `value = a N^b` on log-log axes; returns `(a, b)`.
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return input(format!("power-law fit needs at least 3 points, got {}", points.len()));
    }
    if let Some((n, v)) = points.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0)) {
        return input(format!("power-law fit needs positive data, got ({n}, {v})"));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(n, v)| (n.ln(), v.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return input("power-law fit needs at least two distinct N");
    }
    let b = sxy / sxx;
    Ok(((my - b * mx).exp(), b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarianceMode {
    /// Every parameter uniform in `[-pi, pi]`.
    #[serde(rename = "random")]
    Random,
    /// Earlier layers at their layerwise optimum, last layer uniform.
    #[serde(rename = "layerwise")]
    Layerwise,
}

impl fmt::Display for VarianceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarianceMode::Random => "random",
            VarianceMode::Layerwise => "layerwise",
        })
    }
}

impl FromStr for VarianceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(VarianceMode::Random),
            "layerwise" => Ok(VarianceMode::Layerwise),
            _ => input(format!("unknown variance mode `{s}` (expected random or layerwise)")),
        }
    }
}

/// Which derivative a variance row describes: the first parameter of the
/// first repeating layer or of the last one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParameterId {
    #[serde(rename = "first-of-first")]
    FirstOfFirst,
    #[serde(rename = "first-of-last")]
    FirstOfLast,
}

impl fmt::Display for ParameterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParameterId::FirstOfFirst => "first-of-first",
            ParameterId::FirstOfLast => "first-of-last",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub kind: AnsatzKind,
    pub n_qubits: usize,
    pub layers: usize,
    pub parameter_id: ParameterId,
    pub mode: VarianceMode,
    pub sample_count: usize,
    pub variance: f64,
}

/// Unbiased sample variance.
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Variance over random parameter draws of the energy derivative with
/// respect to the first parameter of the first and of the last layer, for
/// the Heisenberg chain on every `(N, L)` of the grid.
#[allow(clippy::too_many_arguments)]
pub fn barren_plateau_variance(
    kind: AnsatzKind,
    n_list: &[usize],
    layer_list: &[usize],
    samples: usize,
    mode: VarianceMode,
    seed: u64,
    bfgs: &BfgsConfig,
    restarts: &RestartSpec,
) -> Result<Vec<VarianceRow>> {
    if samples < 2 {
        return input(format!("need at least 2 samples, got {samples}"));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let h = heisenberg_1d(n, HEISENBERG_J)?;
        let reference_bits = neel_bitstring(n);
        let reference = Statevector::basis_state(n, &reference_bits)?;
        let max_layers = layer_list.iter().copied().max().unwrap_or(0);
        let optimized = match mode {
            VarianceMode::Layerwise if max_layers > 1 => {
                layerwise_vqe(&h, kind, &reference_bits, max_layers - 1, bfgs, restarts)?.layers
            }
            _ => Vec::new(),
        };
        for &l in layer_list {
            let circuit = build_ansatz(kind, n, l)?;
            let first = circuit.block_params(1).start;
            let last_block = circuit.block_params(l);
            let fixed: &[f64] = match mode {
                VarianceMode::Layerwise if l > 1 => &optimized[l - 2].params,
                _ => &[],
            };
            let pairs = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((n as u64) << 48) | ((l as u64) << 32) | s as u64);
                    let mut params = fixed.to_vec();
                    params.extend((params.len()..circuit.n_params()).map(|_| rng.gen_range(-PI..=PI)));
                    let g = energy_and_gradient(&h, &circuit, &params, &reference)?.gradient;
                    Ok((g[first], g[last_block.start]))
                })
                .collect::<Result<Vec<(f64, f64)>>>()?;
            for (id, values) in [
                (ParameterId::FirstOfFirst, pairs.iter().map(|p| p.0).collect::<Vec<_>>()),
                (ParameterId::FirstOfLast, pairs.iter().map(|p| p.1).collect()),
            ] {
                rows.push(VarianceRow {
                    kind,
                    n_qubits: n,
                    layers: l,
                    parameter_id: id,
                    mode,
                    sample_count: samples,
                    variance: sample_variance(&values),
                });
            }
        }
    }
    Ok(rows)
}
