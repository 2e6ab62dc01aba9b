mod common;

use qarith::arithmetic::{build_adder, build_conditional_adder, build_multiplier};
use qarith::lowering::lower;
use qarith::metrics::*;
use qarith::{Circuit, Gate, Item, QubitId};

#[test]
fn adder_matches_closed_forms_under_serial_blocks() {
    for n in 1..=8u64 {
        let c = lower(&build_adder(n as usize).unwrap()).unwrap();
        let r = resource_report(&c, DepthConvention::SerialBlock).unwrap();
        assert_eq!(r.t_count, 14 * n);
        assert_eq!(r.t_depth, 6 * n);
        assert_eq!(r.qubit_cost, 2 * n + 2);
        assert_eq!(r.garbage_count, GarbageCount::Known(0));
        assert_eq!(r.kq_t, 12 * n * n + 12 * n);
        let p = predicted_report("adder", n).unwrap();
        assert_eq!(p.t_count, Some(r.t_count));
        assert_eq!(p.t_depth, Some(r.t_depth));
        assert_eq!(p.qubit_cost, Some(r.qubit_cost));
        assert_eq!(p.kq_t, Some(r.kq_t));
    }
}

#[test]
fn conditional_adder_matches_closed_forms_under_serial_blocks() {
    for n in 1..=8u64 {
        let c = lower(&build_conditional_adder(n as usize).unwrap()).unwrap();
        let r = resource_report(&c, DepthConvention::SerialBlock).unwrap();
        assert_eq!(r.cnot_count, 30 * n + 7);
        assert_eq!(r.cnot_depth, 30 * n + 7);
        assert_eq!(r.qubit_cost, 2 * n + 3);
        assert_eq!(r.garbage_count, GarbageCount::Known(0));
        assert_eq!(r.kq_cnot, 60 * n * n + 104 * n + 21);
    }
}

#[test]
fn carry_blocks_cost_fifteen_cnots() {
    let c = lower(&build_conditional_adder(3).unwrap()).unwrap();
    let mut seen = 0;
    for item in c.body() {
        if let Item::Block(b) = item {
            if b.name == "CMAJ" || b.name == "CUMA" {
                let (_, cnots, depths) = block_report(item, c.n_qubits());
                assert_eq!(cnots, 15, "{}", b.name);
                assert_eq!(depths.cnot, 15, "{}", b.name);
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 6);
}

#[test]
fn scheduled_never_exceeds_serial() {
    for n in 1..=4 {
        for (name, c) in common::arithmetic_builders(n) {
            let l = lower(&c).unwrap();
            let s = depths(&l, DepthConvention::Scheduled).unwrap();
            let b = depths(&l, DepthConvention::SerialBlock).unwrap();
            assert!(s.total <= b.total && s.t <= b.t && s.cnot <= b.cnot, "{name}: {s:?} vs {b:?}");
        }
    }
}

#[test]
fn report_invariants_hold() {
    for n in 1..=3 {
        for (name, c) in common::arithmetic_builders(n) {
            let r = resource_report(&lower(&c).unwrap(), DepthConvention::Scheduled).unwrap();
            assert!(r.t_depth <= r.t_count && r.cnot_depth <= r.cnot_count, "{name}");
            assert!(r.t_depth <= r.total_depth && r.cnot_depth <= r.total_depth, "{name}");
            assert_eq!(r.kq, r.total_depth * r.qubit_cost);
            assert_eq!(r.kq_t, r.t_depth * r.qubit_cost);
            assert_eq!(r.kq_cnot, r.cnot_depth * r.qubit_cost);
            assert!((r.fidelity_a - 1.0 / r.kq as f64).abs() < 1e-15);
        }
    }
}

#[test]
fn qubit_cost_identities() {
    for n in 1..=4 {
        let adder = qubit_costs(&build_adder(n).unwrap()).unwrap();
        assert_eq!(adder.qubit_cost, 2 * n + 2);
        assert_eq!(adder.ancilla_count, 2);
        let cond = qubit_costs(&build_conditional_adder(n).unwrap()).unwrap();
        assert_eq!(cond.qubit_cost, 2 * n + 3);
        let mul = qubit_costs(&build_multiplier(n).unwrap()).unwrap();
        assert_eq!(mul.qubit_cost, 4 * n + 1);
        assert_eq!(mul.ancilla_count, 2 * n + 1);
    }
}

#[test]
fn nisq_example() {
    let a = fidelity(6 * 4);
    assert!((a - 0.041_666_666_666_666_664).abs() < 1e-15);
    assert_eq!(nisq_check(0.01, 0.05, FidelityConvention::Paper).unwrap(), Verdict::Deliverable);
    assert_eq!(nisq_check(0.01, 0.05, FidelityConvention::Standard).unwrap(), Verdict::NeedsQec);
}

#[test]
fn sweep_limit_gives_undetermined() {
    let n = SWEEP_LIMIT_BITS + 1;
    let mut c = Circuit::plain(n).unwrap();
    c.append(Gate::cnot(QubitId(0), QubitId(1))).unwrap();
    let cl = classify_outputs(&c).unwrap();
    assert_eq!(cl.garbage_count, GarbageCount::Undetermined);
    assert!(cl.roles.is_none());
}

#[test]
fn report_json_schema() {
    let c = lower(&build_adder(2).unwrap()).unwrap();
    let r = resource_report(&c, DepthConvention::SerialBlock).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec![
            "ancilla_count", "cnot_count", "cnot_depth", "fidelity_A", "garbage_count", "kq",
            "kq_cnot", "kq_t", "qubit_cost", "t_count", "t_depth", "total_depth"
        ]
    );
}
