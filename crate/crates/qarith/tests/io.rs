mod common;

use proptest::prelude::*;
use qarith::io::*;
use qarith::lowering::{lower, toffoli_clifford_t};
use qarith::metrics::classify_outputs;
use qarith::rotation::ImageGrid;
use qarith::{Circuit, QubitId};

fn assert_round_trip(name: &str, c: &Circuit) {
    let text = emit_qasm(c);
    let parsed = parse_qasm(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
    let expect = c.flatten().register_major();
    assert_eq!(parsed.n_qubits(), expect.n_qubits(), "{name}");
    assert_eq!(parsed.body(), expect.body(), "{name}");
    for (reg, qs) in expect.registers() {
        assert_eq!(parsed.registers().get(reg), Some(qs), "{name} register {reg}");
    }
}

#[test]
fn every_builder_round_trips() {
    for n in 1..=3 {
        for (name, c) in common::all_builders(n) {
            assert_round_trip(&name, &c);
        }
    }
    assert_round_trip("divider(4)", &qarith::arithmetic::build_divider(4).unwrap());
}

#[test]
fn lowered_toffoli_lists_seven_t_gates() {
    let mut c = Circuit::plain(3).unwrap();
    c.append(toffoli_clifford_t(QubitId(0), QubitId(1), QubitId(2)).unwrap()).unwrap();
    let text = emit_qasm(&c);
    let t_lines = text
        .lines()
        .filter(|l| l.starts_with("t ") || l.starts_with("tdg "))
        .count();
    assert_eq!(t_lines, 7);
    assert!(text.starts_with("OPENQASM 2.0;"));
}

#[test]
fn emission_is_deterministic() {
    let c = lower(&qarith::arithmetic::build_multiplier(2).unwrap()).unwrap();
    assert_eq!(emit_qasm(&c), emit_qasm(&c.clone()));
    let a = RoleSidecar::of(&c).to_json();
    assert_eq!(a, RoleSidecar::of(&c).to_json());
}

#[test]
fn sidecar_keeps_garbage_determined() {
    for (name, c) in common::arithmetic_builders(2) {
        let parsed = parse_qasm(&emit_qasm(&c)).unwrap();
        let sidecar = RoleSidecar::from_json(&RoleSidecar::of(&c).to_json()).unwrap();
        let restored = sidecar.apply(&parsed).unwrap();
        let before = classify_outputs(&c).unwrap().garbage_count;
        let after = classify_outputs(&restored).unwrap().garbage_count;
        assert!(after.known().is_some(), "{name}");
        assert_eq!(after, before, "{name}");
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg a[2];\ncx a[0], a[5];\n";
    let err = parse_qasm(bad).unwrap_err();
    assert!(err.to_string().starts_with("line 4"), "{err}");
    let missing = "OPENQASM 2.0;\nqreg a[2];\nx a[0]\n";
    assert!(matches!(parse_qasm(missing), Err(IoError::Syntax { line: 3, .. })));
    let unsupported = "OPENQASM 2.0;\nqreg a[2];\nmeasure a[0] -> c[0];\n";
    assert!(parse_qasm(unsupported).is_err());
}

#[test]
fn sidecar_length_must_match() {
    let c = qarith::arithmetic::build_adder(2).unwrap();
    let sidecar = RoleSidecar::of(&c);
    assert!(sidecar.apply(&Circuit::plain(3).unwrap()).is_err());
}

#[test]
fn pgm_round_trip() {
    let grid = ImageGrid::new(4, (0..16).map(|v| v * 17).collect()).unwrap();
    let text = write_pgm(&grid);
    assert!(text.starts_with("P2\n4 4\n255\n"));
    assert_eq!(read_pgm(&text).unwrap(), grid);
    assert!(read_pgm("P5\n4 4\n255\n").is_err());
    assert!(read_pgm("P2\n3 3\n255\n0 0 0 0 0 0 0 0 0\n").is_err());
}

proptest! {
    #[test]
    fn random_circuits_round_trip(c in common::circuit_strategy(5, 40, false, 6)) {
        let parsed = parse_qasm(&emit_qasm(&c)).unwrap();
        let expect = c.flatten().register_major();
        prop_assert_eq!(parsed.body(), expect.body());
    }
}
