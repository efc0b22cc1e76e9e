use hea::ansatz::build_ansatz;
use hea::AnsatzKind;

fn check(kind: AnsatzKind, n: usize, l: usize, file: &str) {
    let path = format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"));
    let dump = build_ansatz(kind, n, l).unwrap().dump();
    if std::env::var_os("HEA_BLESS").is_some() {
        std::fs::write(&path, &dump).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dump, want, "{kind} N={n} L={l} differs from {file}");
}

#[test]
fn xyz1f_three_qubits_one_layer() {
    check(AnsatzKind::Xyz1F, 3, 1, "xyz1f_n3_l1.txt");
}

#[test]
fn xyz2f_three_qubits_two_layers() {
    check(AnsatzKind::Xyz2F, 3, 2, "xyz2f_n3_l2.txt");
}

#[test]
fn baselines_three_qubits_one_layer() {
    check(AnsatzKind::RyLinear, 3, 1, "ry_linear_n3_l1.txt");
    check(AnsatzKind::RyFull, 3, 1, "ry_full_n3_l1.txt");
    check(AnsatzKind::RyRzFull, 3, 1, "ryrz_full_n3_l1.txt");
    check(AnsatzKind::Aswap, 4, 2, "aswap_n4_l2.txt");
}
