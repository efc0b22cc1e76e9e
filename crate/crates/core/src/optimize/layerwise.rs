use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, AnsatzKind, Circuit};
use crate::error::{input, Error, Result};
use crate::gradient::energy_and_gradient;
use crate::pauli::PauliSum;
use crate::statevector::Statevector;

use super::{minimize_bfgs, BfgsConfig};

/// `u / max|u| * delta` with `u` uniform in `[-1, 1]`.
pub fn random_layer_params<R: Rng + ?Sized>(dim: usize, delta: f64, rng: &mut R) -> Vec<f64> {
    let u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if delta == 0.0 || scale == 0.0 {
        return vec![0.0; dim];
    }
    u.into_iter().map(|v| v / scale * delta).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSpec {
    pub step_sizes: Vec<f64>,
    pub seed: u64,
}

impl Default for RestartSpec {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

impl RestartSpec {
    /// `2 pi / 2^k` for `k = 0..5`, then 0.
    pub fn with_seed(seed: u64) -> Self {
        let mut step_sizes: Vec<f64> = (0..6).map(|k| 2.0 * PI / f64::from(1u32 << k)).collect();
        step_sizes.push(0.0);
        Self { step_sizes, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step_sizes.contains(&0.0) {
            return input("restart step sizes must include 0");
        }
        if let Some(d) = self.step_sizes.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return input(format!("restart step size {d} is not a nonnegative number"));
        }
        Ok(())
    }

    fn rng(&self, layer: usize, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((layer as u64) << 32) | restart as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub layer: usize,
    pub energy: f64,
    pub params: Vec<f64>,
    /// Step size of the winning restart.
    pub step_size: f64,
    /// BFGS iterations of the winning restart.
    pub iterations: usize,
    pub wall_time_s: f64,
    /// Final energy of every restart, in step-size order; `None` if it failed.
    pub restart_energies: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerwiseResult {
    pub kind: AnsatzKind,
    pub layers: Vec<LayerRecord>,
}

impl LayerwiseResult {
    pub fn energies(&self) -> Vec<f64> {
        self.layers.iter().map(|l| l.energy).collect()
    }

    pub fn last(&self) -> Option<&LayerRecord> {
        self.layers.last()
    }
}

/// Grows the circuit one layer at a time, yielding the optimized record of
/// each layer. Stops after `max_layers` or at the first error.
pub struct LayerwiseRun<'a> {
    h: &'a PauliSum,
    kind: AnsatzKind,
    reference: Statevector,
    bfgs: BfgsConfig,
    restarts: RestartSpec,
    max_layers: usize,
    previous: Vec<f64>,
    layer: usize,
    failed: bool,
}

impl<'a> LayerwiseRun<'a> {
    pub fn new(
        h: &'a PauliSum,
        kind: AnsatzKind,
        reference: &str,
        max_layers: usize,
        bfgs: BfgsConfig,
        restarts: RestartSpec,
    ) -> Result<Self> {
        if max_layers == 0 {
            return input("at least one layer is required");
        }
        bfgs.validate()?;
        restarts.validate()?;
        // fail early on size problems
        build_ansatz(kind, h.n_qubits(), 1)?;
        let reference = Statevector::basis_state(h.n_qubits(), reference)?;
        Ok(Self {
            h,
            kind,
            reference,
            bfgs,
            restarts,
            max_layers,
            previous: Vec::new(),
            layer: 0,
            failed: false,
        })
    }

    fn step(&mut self) -> Result<LayerRecord> {
        let layer = self.layer + 1;
        let start = Instant::now();
        let circuit = build_ansatz(self.kind, self.h.n_qubits(), layer)?;
        let fresh = circuit.n_params() - self.previous.len();

        let outcomes: Vec<Result<(f64, Vec<f64>, usize)>> = self
            .restarts
            .step_sizes
            .par_iter()
            .enumerate()
            .map(|(i, &delta)| {
                let mut x0 = self.previous.clone();
                x0.extend(random_layer_params(fresh, delta, &mut self.restarts.rng(layer, i)));
                self.optimize(&circuit, &x0)
            })
            .collect();

        let mut best: Option<(usize, f64, Vec<f64>, usize)> = None;
        let mut restart_energies = Vec::with_capacity(outcomes.len());
        let mut last_error = None;
        for (i, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Ok((e, x, it)) => {
                    restart_energies.push(Some(e));
                    let better = match &best {
                        None => true,
                        Some((j, be, ..)) => {
                            e < *be || (e == *be && self.restarts.step_sizes[i] < self.restarts.step_sizes[*j])
                        }
                    };
                    if better {
                        best = Some((i, e, x, it));
                    }
                }
                Err(err) => {
                    log::warn!("layer {layer}, step size {}: restart failed: {err}", self.restarts.step_sizes[i]);
                    restart_energies.push(None);
                    last_error = Some(err);
                }
            }
        }
        let Some((i, energy, params, iterations)) = best else {
            return Err(last_error.unwrap_or_else(|| Error::Internal("no restarts configured".into())));
        };
        self.previous = params.clone();
        self.layer = layer;
        Ok(LayerRecord {
            layer,
            energy,
            params,
            step_size: self.restarts.step_sizes[i],
            iterations,
            wall_time_s: start.elapsed().as_secs_f64(),
            restart_energies,
        })
    }

    fn optimize(&self, circuit: &Circuit, x0: &[f64]) -> Result<(f64, Vec<f64>, usize)> {
        let objective = |x: &[f64]| {
            let eg = energy_and_gradient(self.h, circuit, x, &self.reference)?;
            Ok((eg.energy, eg.gradient))
        };
        let r = minimize_bfgs(objective, x0, &self.bfgs)?;
        if !r.converged() {
            log::debug!("layer {}: BFGS stopped by {:?} at energy {}", circuit.layers(), r.termination, r.f);
        }
        Ok((r.f, r.x, r.iterations))
    }
}

impl Iterator for LayerwiseRun<'_> {
    type Item = Result<LayerRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.layer >= self.max_layers {
            return None;
        }
        let out = self.step();
        self.failed = out.is_err();
        Some(out)
    }
}

/// Layerwise VQE: layer `L` starts from the optimum of layer `L-1` plus one
/// fresh layer per restart step size, re-optimizes everything jointly, and
/// keeps the lowest energy.
pub fn layerwise_vqe(
    h: &PauliSum,
    kind: AnsatzKind,
    reference: &str,
    max_layers: usize,
    bfgs: &BfgsConfig,
    restarts: &RestartSpec,
) -> Result<LayerwiseResult> {
    let run = LayerwiseRun::new(h, kind, reference, max_layers, *bfgs, restarts.clone())?;
    let layers = run.collect::<Result<Vec<_>>>()?;
    Ok(LayerwiseResult { kind, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::heisenberg_1d;

    #[test]
    fn random_params_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_layer_params(5, 0.0, &mut rng), vec![0.0; 5]);
        let p = random_layer_params(9, PI, &mut rng);
        let m = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((m - PI).abs() <= 1e-15);
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(random_layer_params(4, 1.0, &mut a), random_layer_params(4, 1.0, &mut b));
    }

    #[test]
    fn default_restarts() {
        let r = RestartSpec::default();
        assert_eq!(r.step_sizes.len(), 7);
        assert_eq!(r.step_sizes[0], 2.0 * PI);
        assert_eq!(r.step_sizes[5], PI / 16.0);
        assert!(RestartSpec { step_sizes: vec![1.0], seed: 0 }.validate().is_err());
    }

    #[test]
    fn two_site_heisenberg_one_layer() {
        let h = heisenberg_1d(2, -1.0).unwrap();
        let r = layerwise_vqe(&h, AnsatzKind::Xyz2F, "10", 1, &BfgsConfig::default(), &RestartSpec::default())
            .unwrap();
        assert!((r.layers[0].energy + 1.5).abs() < 1e-6, "{}", r.layers[0].energy);
    }

    #[test]
    fn zero_layers_rejected() {
        let h = heisenberg_1d(2, -1.0).unwrap();
        let bfgs = BfgsConfig::default();
        assert!(layerwise_vqe(&h, AnsatzKind::Xyz2F, "10", 0, &bfgs, &RestartSpec::default()).is_err());
    }
}
