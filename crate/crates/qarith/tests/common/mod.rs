#![allow(dead_code)]

use qarith::arithmetic::{
    build_adder, build_addsub, build_conditional_adder, build_divider, build_multiplier,
    build_subtractor,
};
use qarith::lowering::toffoli_clifford_t;
use qarith::qft::build_qft;
use qarith::rotation::{build_shear_circuit, Axis, ShearCase};
use qarith::{BasisState, Circuit, QubitId};

/// Every arithmetic builder at width `n` (divider needs n ≥ 2).
pub fn arithmetic_builders(n: usize) -> Vec<(String, Circuit)> {
    let mut v = vec![
        (format!("adder({n})"), build_adder(n).unwrap()),
        (format!("subtractor({n})"), build_subtractor(n).unwrap()),
        (format!("addsub({n})"), build_addsub(n).unwrap()),
        (format!("conditional_adder({n})"), build_conditional_adder(n).unwrap()),
        (format!("multiplier({n})"), build_multiplier(n).unwrap()),
    ];
    if n >= 2 {
        v.push((format!("divider({n})"), build_divider(n).unwrap()));
    }
    v
}

/// Arithmetic builders plus QFT, a Toffoli block and shear circuits.
pub fn all_builders(n: usize) -> Vec<(String, Circuit)> {
    let mut v = arithmetic_builders(n);
    v.push((format!("qft({n})"), build_qft(n).unwrap()));
    let mut t = Circuit::plain(3).unwrap();
    t.append(toffoli_clifford_t(QubitId(0), QubitId(1), QubitId(2)).unwrap())
        .unwrap();
    v.push(("toffoli".into(), t));
    if n <= 3 {
        for axis in [Axis::Horizontal, Axis::Vertical] {
            for case in [ShearCase::LeRef, ShearCase::GtRef] {
                let (c, _) = build_shear_circuit(axis, case, n, 2).unwrap();
                v.push((format!("shear({axis:?},{case:?},{n},2)"), c));
            }
        }
    }
    v
}

pub fn state(n: usize, fields: &[(&[QubitId], u64)]) -> BasisState {
    let mut s = BasisState::zeros(n);
    for (qs, v) in fields {
        s.write(qs, *v);
    }
    s
}

use proptest::prelude::*;
use qarith::{Gate, GateKind};

pub fn kind_strategy(classical_only: bool, max_k: u32) -> BoxedStrategy<GateKind> {
    if classical_only {
        prop_oneof![
            Just(GateKind::X),
            Just(GateKind::Cnot),
            Just(GateKind::Toffoli),
            Just(GateKind::Fredkin),
        ]
        .boxed()
    } else {
        prop_oneof![
            Just(GateKind::H),
            Just(GateKind::T),
            Just(GateKind::Tdg),
            Just(GateKind::S),
            Just(GateKind::Sdg),
            Just(GateKind::X),
            Just(GateKind::Cnot),
            (1..=max_k, any::<bool>()).prop_map(|(k, dagger)| GateKind::ControlledPhase { k, dagger }),
            Just(GateKind::Toffoli),
            Just(GateKind::Fredkin),
        ]
        .boxed()
    }
}

/// A valid gate on `n ≥ 3` qubits.
pub fn gate_strategy(n: usize, classical_only: bool, max_k: u32) -> impl Strategy<Value = Gate> {
    (kind_strategy(classical_only, max_k), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|(kind, qs)| {
            Gate::new(kind, qs[..kind.arity()].iter().map(|&q| QubitId(q)).collect()).unwrap()
        })
}

pub fn circuit_strategy(n: usize, len: usize, classical_only: bool, max_k: u32) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate_strategy(n, classical_only, max_k), len).prop_map(move |gates| {
        let mut c = Circuit::plain(n).unwrap();
        c.extend(gates).unwrap();
        c
    })
}
