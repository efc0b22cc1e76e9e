//! BFGS minimization and the layer-by-layer VQE driver.

mod bfgs;
mod layerwise;

pub use bfgs::{minimize_bfgs, BfgsConfig, BfgsResult, Termination};
pub use layerwise::{layerwise_vqe, random_layer_params, LayerRecord, LayerwiseResult, LayerwiseRun, RestartSpec};
