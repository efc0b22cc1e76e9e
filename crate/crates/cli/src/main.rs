use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hea::ansatz::{bond_assignment, build_ansatz, compile_pauli_rotation, neel_bitstring, resource_counts};
use hea::experiments::{
    barren_plateau_variance, convergence_sweep, layers_to_accuracy, power_law_fit, size_consistency_test,
    write_convergence_csv, write_metadata, write_size_consistency_csv, write_variance_csv, Accuracy, RunMetadata,
    VarianceMode, HEISENBERG_J,
};
use hea::optimize::{BfgsConfig, RestartSpec};
use hea::pauli::{exact_ground_state, heisenberg_1d, load_hamiltonian, number_penalty};
use hea::{AnsatzKind, Error, PauliString, PauliSum, Statevector};

#[derive(Parser, Debug)]
#[command(name = "hea", version, about = "Layerwise VQE with hardware-efficient ansaetze")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "HEA_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact ground-state energy.
    Ed {
        #[command(flatten)]
        ham: HamiltonianArgs,
        #[arg(long, default_value = "ed.json")]
        out: PathBuf,
    },
    /// Layerwise VQE, one CSV row per layer.
    Vqe {
        #[command(flatten)]
        ham: HamiltonianArgs,
        #[arg(long, default_value = "xyz2f")]
        ansatz: AnsatzKind,
        #[arg(long)]
        layers: usize,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, default_value = "convergence.csv")]
        out: PathBuf,
    },
    /// One XYZ layer set to exp(i theta P), checked against the exact rotation.
    CompilePauli {
        /// Pauli string, dense ("ZZIX") or sparse ("Z0Z1X3").
        #[arg(long)]
        pauli: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "xyz2f")]
        ansatz: AnsatzKind,
        /// Basis state the layer is applied to (default all zeros).
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, default_value = "compile_pauli.json")]
        out: PathBuf,
    },
    /// Subsystem parameters reused on two decoupled Heisenberg chains.
    SizeConsistency {
        #[arg(long, default_value = "xyz2f")]
        ansatz: AnsatzKind,
        #[arg(long, default_value_t = 6)]
        n_sub: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        layers: Vec<usize>,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, default_value = "size_consistency.csv")]
        out: PathBuf,
    },
    /// Gradient variance over random parameters on Heisenberg chains.
    BarrenPlateau {
        #[arg(long, default_value = "xyz2f")]
        ansatz: AnsatzKind,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "20")]
        layers: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "random")]
        mode: VarianceMode,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, default_value = "variance.csv")]
        out: PathBuf,
    },
    /// Layers needed for a target accuracy on Heisenberg chains, with a power-law fit.
    Scaling {
        #[arg(long, default_value = "xyz2f")]
        ansatz: AnsatzKind,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        n: Vec<usize>,
        /// Target error of the total energy.
        #[arg(long, default_value_t = hea::CHEMICAL_ACCURACY)]
        tol: f64,
        #[arg(long, default_value_t = 30)]
        max_layers: usize,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, default_value = "scaling.csv")]
        out: PathBuf,
    },
    /// Parameter, gate and depth counts of a circuit.
    Counts {
        #[arg(long)]
        ansatz: AnsatzKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value = "counts.json")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct HamiltonianArgs {
    /// Open Heisenberg chain with this many sites.
    #[arg(long, conflicts_with = "hamiltonian", required_unless_present = "hamiltonian")]
    heisenberg: Option<usize>,
    /// Heisenberg coupling J.
    #[arg(short = 'J', long = "coupling", allow_hyphen_values = true, default_value_t = HEISENBERG_J)]
    coupling: f64,
    /// Hamiltonian JSON file.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Reference state: `neel`, `metadata`, or an explicit bitstring.
    #[arg(long)]
    reference: Option<String>,
    /// Particle-number penalty `n_up,n_down,beta`.
    #[arg(long)]
    penalty: Option<String>,
}

#[derive(Args, Debug)]
struct OptimizerArgs {
    /// Restarts per layer: step sizes 2 pi / 2^k for k = 0..n-2, plus 0.
    #[arg(long, default_value_t = 7)]
    restarts: usize,
    #[arg(long, default_value_t = 3000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-7)]
    grad_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn configs(&self) -> hea::Result<(BfgsConfig, RestartSpec)> {
        if self.restarts == 0 {
            return Err(Error::Input("--restarts must be at least 1".into()));
        }
        let bfgs = BfgsConfig { max_iterations: self.max_iter, gradient_tolerance: self.grad_tol, ..Default::default() };
        bfgs.validate()?;
        let mut step_sizes: Vec<f64> = (0..self.restarts - 1).map(|k| 2.0 * PI / 2f64.powi(k as i32)).collect();
        step_sizes.push(0.0);
        Ok((bfgs, RestartSpec { step_sizes, seed: self.seed }))
    }
}

struct Problem {
    h: PauliSum,
    reference: String,
    sites: Option<usize>,
    source: serde_json::Value,
}

impl HamiltonianArgs {
    fn load(&self) -> hea::Result<Problem> {
        let (mut h, metadata_reference, sites, source) = match (&self.heisenberg, &self.hamiltonian) {
            (&Some(n), None) => {
                let h = heisenberg_1d(n, self.coupling)?;
                (h, None, Some(n), json!({"heisenberg": n, "J": self.coupling}))
            }
            (None, Some(path)) => {
                if !path.is_file() {
                    return Err(Error::Input(format!("Hamiltonian file {} not found", path.display())));
                }
                let file = load_hamiltonian(path)?;
                let r = file.reference_bitstring().map(str::to_string);
                (file.hamiltonian, r, None, json!({"file": path}))
            }
            _ => return Err(Error::Input("give exactly one of --heisenberg or --hamiltonian".into())),
        };
        let n = h.n_qubits();
        let reference = match self.reference.as_deref() {
            Some("neel") => neel_bitstring(n),
            Some("metadata") | None if self.hamiltonian.is_some() => metadata_reference
                .ok_or_else(|| Error::Input("Hamiltonian file has no reference_bitstring".into()))?,
            None => neel_bitstring(n),
            Some("metadata") => return Err(Error::Input("--reference metadata needs --hamiltonian".into())),
            Some(bits) => bits.to_string(),
        };
        hea::statevector::bitstring_index(n, &reference)?;
        if let Some(spec) = &self.penalty {
            let (n_up, n_down, beta) = parse_penalty(spec)?;
            h = h.add(&number_penalty(n, n_up, n_down, beta)?)?;
        }
        Ok(Problem { h, reference, sites, source })
    }
}

fn parse_penalty(spec: &str) -> hea::Result<(usize, usize, f64)> {
    let bad = || Error::Input(format!("--penalty expects n_up,n_down,beta, got `{spec}`"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [up, down, beta] = parts[..] else { return Err(bad()) };
    Ok((up.parse().map_err(|_| bad())?, down.parse().map_err(|_| bad())?, beta.parse().map_err(|_| bad())?))
}

fn create(path: &Path) -> hea::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, value: &serde_json::Value) -> hea::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n")?;
    Ok(())
}

fn finish(out: &Path, meta: &RunMetadata) -> hea::Result<()> {
    let sidecar = write_metadata(out, meta)?;
    println!("wrote {} and {}", out.display(), sidecar.display());
    Ok(())
}

fn run(cli: Cli) -> hea::Result<()> {
    match cli.command {
        Command::Ed { ham, out } => {
            let p = ham.load()?;
            let gs = exact_ground_state(&p.h)?;
            println!("ground energy {:.12} ({:?}, residual {:.1e})", gs.energy, gs.method, gs.residual);
            if let Some(n) = p.sites {
                println!("per site {:.12}", gs.energy / n as f64);
            }
            write_json(
                &out,
                &json!({"energy": gs.energy, "residual": gs.residual, "method": format!("{:?}", gs.method)}),
            )?;
            let mut meta = RunMetadata::new("ed");
            meta.insert("hamiltonian", p.source);
            finish(&out, &meta)
        }
        Command::Vqe { ham, ansatz, layers, opt, out } => {
            let p = ham.load()?;
            let (bfgs, restarts) = opt.configs()?;
            let rows = convergence_sweep(&p.h, ansatz, &p.reference, layers, &bfgs, &restarts, p.sites)?;
            for r in &rows {
                let per_site = r.per_site_energy.map(|e| format!(" per_site {e:.8}")).unwrap_or_default();
                println!(
                    "L={:<3} energy {:.10} error {:.3e}{per_site} iterations {}",
                    r.layer, r.energy, r.error_vs_exact, r.iterations
                );
            }
            write_convergence_csv(create(&out)?, &rows)?;
            let mut meta = RunMetadata::new("vqe").with_optimizer(&bfgs, &restarts);
            meta.insert("hamiltonian", p.source);
            meta.insert("ansatz", ansatz.name());
            meta.insert("reference", p.reference);
            finish(&out, &meta)
        }
        Command::CompilePauli { pauli, n, theta, ansatz, reference, out } => {
            let string = if pauli.chars().any(|c| c.is_ascii_digit()) {
                PauliString::parse_sparse(&pauli, n)?
            } else {
                PauliString::parse(&pauli)?
            };
            if string.n_qubits() != n {
                return Err(Error::Input(format!("`{pauli}` has {} letters but --n is {n}", string.n_qubits())));
            }
            let (bonds, carrier) = bond_assignment(&string, ansatz)?;
            let params = compile_pauli_rotation(&string, theta, ansatz)?;
            let reference = reference.unwrap_or_else(|| "0".repeat(n));
            let start = Statevector::basis_state(n, &reference)?;
            let circuit = build_ansatz(ansatz, n, 1)?;
            let got = circuit.run(&params, &start)?;
            let want = string.rotate(theta, &start)?;
            let fidelity = got.fidelity(&want)?;
            let names: Vec<String> = bonds.iter().map(|b| b.to_string()).collect();
            println!("bonds {}", names.join(","));
            println!("carrier qubit {carrier}");
            println!("fidelity {fidelity:.15} (1 - F = {:.3e})", 1.0 - fidelity);
            write_json(
                &out,
                &json!({"pauli": string.to_string(), "theta": theta, "bonds": names, "carrier": carrier,
                        "params": params, "fidelity": fidelity}),
            )?;
            let mut meta = RunMetadata::new("compile-pauli");
            meta.insert("ansatz", ansatz.name());
            meta.insert("reference", reference);
            finish(&out, &meta)
        }
        Command::SizeConsistency { ansatz, n_sub, layers, opt, out } => {
            let (bfgs, restarts) = opt.configs()?;
            let rows = size_consistency_test(ansatz, n_sub, &layers, &bfgs, &restarts)?;
            for r in &rows {
                println!(
                    "L={:<3} e_sub {:.8} e_composite {:.8} 1-F_sub {:.5} 1-F_composite {:.5}",
                    r.layers, r.e_sub, r.e_composite, r.infidelity_sub, r.infidelity_composite
                );
            }
            write_size_consistency_csv(create(&out)?, &rows)?;
            let mut meta = RunMetadata::new("size-consistency").with_optimizer(&bfgs, &restarts);
            meta.insert("n_sub", n_sub);
            meta.insert("J", HEISENBERG_J);
            meta.insert("embedding", "subsystem parameters placed per layer on both halves; parameters on the joining bond set to 0");
            finish(&out, &meta)
        }
        Command::BarrenPlateau { ansatz, n, layers, samples, mode, opt, out } => {
            let (bfgs, restarts) = opt.configs()?;
            let rows = barren_plateau_variance(ansatz, &n, &layers, samples, mode, opt.seed, &bfgs, &restarts)?;
            for r in &rows {
                println!("N={:<3} L={:<3} {:<15} variance {:.6e}", r.n_qubits, r.layers, r.parameter_id, r.variance);
            }
            write_variance_csv(create(&out)?, &rows)?;
            let mut meta = RunMetadata::new("barren-plateau").with_optimizer(&bfgs, &restarts);
            meta.insert("J", HEISENBERG_J);
            meta.insert("parameter_range", json!([-PI, PI]));
            finish(&out, &meta)
        }
        Command::Scaling { ansatz, n, tol, max_layers, opt, out } => {
            let (bfgs, restarts) = opt.configs()?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            w.write_record(["n_qubits", "layers", "n_params", "n_two_qubit", "asap_depth", "error"])
                .map_err(Error::from)?;
            let mut points = Vec::new();
            for &size in &n {
                let h = heisenberg_1d(size, HEISENBERG_J)?;
                match layers_to_accuracy(&h, ansatz, &neel_bitstring(size), tol, max_layers, &bfgs, &restarts)? {
                    Accuracy::Reached { layers, error, counts } => {
                        println!("N={size:<3} L={layers:<3} params {} error {error:.3e}", counts.n_params);
                        w.write_record([
                            size.to_string(),
                            layers.to_string(),
                            counts.n_params.to_string(),
                            counts.n_two_qubit.to_string(),
                            counts.asap_depth.to_string(),
                            hea::experiments::format_float(error),
                        ])
                        .map_err(Error::from)?;
                        points.push((size as f64, counts.n_params as f64));
                    }
                    Accuracy::NotReached { layer_cap, best_error } => {
                        println!("N={size:<3} not reached by L={layer_cap} (best error {best_error:.3e})");
                        w.write_record([size.to_string(), String::new(), String::new(), String::new(), String::new(),
                                        hea::experiments::format_float(best_error)])
                            .map_err(Error::from)?;
                    }
                }
            }
            w.flush()?;
            let mut meta = RunMetadata::new("scaling").with_optimizer(&bfgs, &restarts);
            meta.insert("tolerance", tol);
            if points.len() >= 3 {
                let (a, b) = power_law_fit(&points)?;
                println!("n_params ~ {a:.4} N^{b:.4}");
                meta.insert("fit", json!({"prefactor": a, "exponent": b}));
            }
            finish(&out, &meta)
        }
        Command::Counts { ansatz, n, layers, out } => {
            let c = resource_counts(ansatz, n, layers)?;
            println!("params {}", c.n_params);
            println!("two-qubit {}", c.n_two_qubit);
            println!("single-qubit {}", c.n_single_qubit);
            println!("depth {}", c.asap_depth);
            write_json(&out, &serde_json::to_value(c)?)?;
            let mut meta = RunMetadata::new("counts");
            meta.insert("ansatz", ansatz.name());
            meta.insert("n_qubits", n);
            meta.insert("layers", layers);
            finish(&out, &meta)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
