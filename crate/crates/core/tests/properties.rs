mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dense_ground_energy, dense_hamiltonian, random_bits, random_circuit, random_pauli_sum};
use hea::ansatz::{build_ansatz, prepare_product_state, QubitState};
use hea::gradient::{energy, energy_and_gradient};
use hea::optimize::{layerwise_vqe, BfgsConfig, RestartSpec};
use hea::pauli::{disjoint_union, exact_ground_state, heisenberg_1d, load_hamiltonian, number_penalty, HamiltonianFile};
use hea::statevector::GateKind;
use hea::{AnsatzKind, GateMatrix, PauliSum, Statevector};

fn fixture(name: &str) -> HamiltonianFile {
    load_hamiltonian(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn every_gate_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in GateKind::ALL {
        for _ in 0..10 {
            let angles: Vec<f64> = (0..kind.n_angles()).map(|_| rng.gen_range(-2.0 * PI..2.0 * PI)).collect();
            let u = kind.matrix(&angles).unwrap();
            assert!(u.unitarity_error() <= 1e-12, "{} {angles:?}", kind.name());
        }
    }
}

#[test]
fn random_circuits_preserve_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let c = random_circuit(&mut rng, n, 50);
        let p: Vec<f64> = (0..c.n_params()).map(|_| rng.gen_range(-PI..PI)).collect();
        let out = c.run(&p, &Statevector::basis_state(n, &random_bits(&mut rng, n)).unwrap()).unwrap();
        assert!((out.norm_sqr().sqrt() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn two_qubit_product_matches_sequential_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let one_qubit = [GateKind::Rx, GateKind::Ry, GateKind::Rz];
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let qa = rng.gen_range(0..n);
        let qb = (qa + rng.gen_range(1..n)) % n;
        let a = one_qubit[rng.gen_range(0..3)].matrix(&[rng.gen_range(-PI..PI)]).unwrap();
        let b = one_qubit[rng.gen_range(0..3)].matrix(&[rng.gen_range(-PI..PI)]).unwrap();
        let amps: Vec<Complex64> = (0..1 << n).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let mut start = Statevector::from_amplitudes(amps).unwrap();
        start.normalize().unwrap();

        let joint = start.applied_2q(qa, qb, &GateMatrix::kron(&a, &b).unwrap()).unwrap();
        let sequential = start.applied_1q(qa, &a).unwrap().applied_1q(qb, &b).unwrap();
        for (x, y) in joint.amplitudes().iter().zip(sequential.amplitudes()) {
            assert!((x - y).norm() <= 1e-12);
        }
    }
}

#[test]
fn basis_index_convention() {
    let s = Statevector::basis_state(2, "10").unwrap();
    assert_eq!(s.amplitudes()[1], Complex64::new(1.0, 0.0));
    let s = Statevector::basis_state(4, "1001").unwrap();
    assert_eq!(s.amplitudes()[9], Complex64::new(1.0, 0.0));
}

#[test]
fn expectation_matches_dense_oracle_and_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=8 {
        let h = random_pauli_sum(&mut rng, n, 15);
        let g = random_pauli_sum(&mut rng, n, 15);
        let amps: Vec<Complex64> = (0..1 << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let mut psi = Statevector::from_amplitudes(amps).unwrap();
        psi.normalize().unwrap();
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let dense = (v.adjoint() * dense_hamiltonian(&h) * &v)[(0, 0)].re;
        let e_h = h.expectation(&psi).unwrap();
        assert!((e_h - dense).abs() <= 1e-10, "N={n}: {e_h} vs {dense}");
        let combined = h.scaled(2.5).add(&g.scaled(-0.75)).unwrap();
        let e_g = g.expectation(&psi).unwrap();
        assert!((combined.expectation(&psi).unwrap() - (2.5 * e_h - 0.75 * e_g)).abs() <= 1e-10);
    }
}

#[test]
fn disjoint_union_energy_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (na, nb) in [(2, 3), (4, 4), (5, 7), (6, 6)] {
        let (a, b) = (random_pauli_sum(&mut rng, na, 10), random_pauli_sum(&mut rng, nb, 10));
        let sum = exact_ground_state(&a).unwrap().energy + exact_ground_state(&b).unwrap().energy;
        let joint = exact_ground_state(&disjoint_union(&a, &b).unwrap()).unwrap().energy;
        assert!((joint - sum).abs() <= 1e-9, "({na},{nb}): {joint} vs {sum}");
    }
}

#[test]
fn exact_solver_agrees_with_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in [3, 6, 8] {
        let h = random_pauli_sum(&mut rng, n, 20);
        assert!((exact_ground_state(&h).unwrap().energy - dense_ground_energy(&h)).abs() <= 1e-9);
    }
}

#[test]
fn energies_respect_variational_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in AnsatzKind::ALL {
        let n = 4;
        let h = random_pauli_sum(&mut rng, n, 12);
        let floor = dense_ground_energy(&h);
        let c = build_ansatz(kind, n, 2).unwrap();
        for _ in 0..20 {
            let p: Vec<f64> = (0..c.n_params()).map(|_| rng.gen_range(-PI..PI)).collect();
            let reference = Statevector::basis_state(n, &random_bits(&mut rng, n)).unwrap();
            assert!(energy(&h, &c, &p, &reference).unwrap() >= floor - 1e-9);
        }
    }
}

#[test]
fn aswap_conserves_particle_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n = rng.gen_range(2..=7);
        let c = build_ansatz(AnsatzKind::Aswap, n, rng.gen_range(1..=4)).unwrap();
        let p: Vec<f64> = (0..c.n_params()).map(|_| rng.gen_range(-PI..PI)).collect();
        let bits = random_bits(&mut rng, n);
        let weight = bits.chars().filter(|&ch| ch == '1').count() as u32;
        let out = c.run(&p, &Statevector::basis_state(n, &bits).unwrap()).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            if (i as u64).count_ones() != weight {
                assert!(a.norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn product_states_reachable_in_one_layer() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=7 {
        let targets: Vec<QubitState> = (0..n)
            .map(|_| {
                let (t, p) = (rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
                let phase = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
                [phase * (t / 2.0).cos(), phase * Complex64::from_polar((t / 2.0).sin(), p)]
            })
            .collect();
        let bits = random_bits(&mut rng, n);
        let params = prepare_product_state(&targets, &bits).unwrap();
        let c = build_ansatz(AnsatzKind::Xyz2F, n, 1).unwrap();
        let out = c.run(&params, &Statevector::basis_state(n, &bits).unwrap()).unwrap();
        let want = Statevector::product(&targets).unwrap();
        assert!(out.fidelity(&want).unwrap() >= 1.0 - 1e-8);
    }
}

#[test]
fn optimized_gradient_is_below_tolerance() {
    let h = heisenberg_1d(4, -1.0).unwrap();
    let bfgs = BfgsConfig::default();
    let result = layerwise_vqe(&h, AnsatzKind::Xyz2F, "1010", 2, &bfgs, &RestartSpec::with_seed(3)).unwrap();
    let reference = Statevector::basis_state(4, "1010").unwrap();
    for record in &result.layers {
        if record.iterations >= bfgs.max_iterations {
            continue;
        }
        let c = build_ansatz(AnsatzKind::Xyz2F, 4, record.layer).unwrap();
        let g = energy_and_gradient(&h, &c, &record.params, &reference).unwrap().gradient;
        let max = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max <= bfgs.gradient_tolerance, "L={} max |g| {max}", record.layer);
    }
}

#[test]
fn layerwise_runs_are_reproducible() {
    let h = heisenberg_1d(4, -1.0).unwrap();
    let bfgs = BfgsConfig { max_iterations: 200, ..Default::default() };
    let run = || layerwise_vqe(&h, AnsatzKind::Xyz1F, "1010", 3, &bfgs, &RestartSpec::with_seed(17)).unwrap();
    let (a, b) = (run(), run());
    for (x, y) in a.layers.iter().zip(&b.layers) {
        assert_eq!(x.energy.to_bits(), y.energy.to_bits());
        assert_eq!(x.params, y.params);
    }
}

#[test]
fn layerwise_energies_bounded_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for kind in [AnsatzKind::Xyz1F, AnsatzKind::Xyz2F] {
        let h = random_pauli_sum(&mut rng, 3, 10);
        let floor = dense_ground_energy(&h);
        let bfgs = BfgsConfig { max_iterations: 200, ..Default::default() };
        let e = layerwise_vqe(&h, kind, "010", 3, &bfgs, &RestartSpec::with_seed(0)).unwrap().energies();
        assert!(e.windows(2).all(|w| w[1] <= w[0]), "{e:?}");
        assert!(e.iter().all(|&x| x >= floor - 1e-9));
    }
}

#[test]
fn molecular_fixtures_match_stored_fci() {
    for name in ["h4_oao.json", "lih_cmo.json"] {
        let file = fixture(name);
        let ed = exact_ground_state(&file.hamiltonian).unwrap();
        assert!((ed.energy - file.e_fci().unwrap()).abs() <= 1e-8, "{name}: {}", ed.energy);
    }
}

#[test]
fn penalty_vanishes_on_h4_ground_state() {
    let file = fixture("h4_oao.json");
    let penalty = number_penalty(8, 2, 2, 1.0).unwrap();
    let shifted = file.hamiltonian.add(&penalty).unwrap();
    let ground = exact_ground_state(&shifted).unwrap();
    assert!(penalty.expectation(&ground.state).unwrap() <= 1e-8);
    assert!((ground.energy - file.e_fci().unwrap()).abs() <= 1e-8);
}

#[test]
fn penalty_is_zero_on_reference_determinant() {
    let file = fixture("lih_cmo.json");
    let penalty = number_penalty(12, 2, 2, 0.7).unwrap();
    let hf = Statevector::basis_state(12, file.reference_bitstring().unwrap()).unwrap();
    assert!(penalty.expectation(&hf).unwrap().abs() <= 1e-12);
}

fn pauli_sum_strategy() -> impl Strategy<Value = PauliSum> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec((-10.0f64..10.0, prop::collection::vec(0usize..4, n)), 0..12).prop_map(move |terms| {
            let mut h = PauliSum::new(n);
            for (c, letters) in terms {
                let s: String = letters.iter().map(|&k| ['I', 'X', 'Y', 'Z'][k]).collect();
                h.push(c, hea::PauliString::parse(&s).unwrap()).unwrap();
            }
            h
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_json_round_trips(h in pauli_sum_strategy()) {
        let file = HamiltonianFile::new(h);
        let back = HamiltonianFile::from_json(&file.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, file);
    }

    #[test]
    fn zero_layer_is_identity(seed in any::<u64>(), n in 1usize..7, l in 1usize..4, two_field in any::<bool>()) {
        let kind = if two_field { AnsatzKind::Xyz2F } else { AnsatzKind::Xyz1F };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = build_ansatz(kind, n, l).unwrap();
        let big = build_ansatz(kind, n, l + 1).unwrap();
        let p: Vec<f64> = (0..small.n_params()).map(|_| rng.gen_range(-PI..PI)).collect();
        let mut q = p.clone();
        q.resize(big.n_params(), 0.0);
        let r = Statevector::basis_state(n, &random_bits(&mut rng, n)).unwrap();
        let f = small.run(&p, &r).unwrap().fidelity(&big.run(&q, &r).unwrap()).unwrap();
        prop_assert!((1.0 - f).abs() <= 1e-12);
    }

    #[test]
    fn all_zero_xyz2f_is_identity(n in 1usize..8, l in 1usize..4, index in 0usize..128) {
        let c = build_ansatz(AnsatzKind::Xyz2F, n, l).unwrap();
        let r = Statevector::basis_index(n, index % (1 << n)).unwrap();
        let out = c.run(&vec![0.0; c.n_params()], &r).unwrap();
        prop_assert!(out.fidelity(&r).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn shorter_parameter_vectors_are_prefixes(n in 2usize..7, l in 1usize..4, k in 0usize..6) {
        let kind = AnsatzKind::ALL[k];
        let small = build_ansatz(kind, n, l).unwrap();
        let big = build_ansatz(kind, n, l + 1).unwrap();
        prop_assert_eq!(&big.labels()[..small.n_params()], small.labels());
    }
}
