//! Clifford+T lowering of Toffoli/Fredkin gates and Bennett garbage removal.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ir::{Block, Circuit, Contract, Gate, GateKind, IrError, Item, QubitId, QubitRole};
use crate::sim::{run_classical, BasisState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoweringError {
    #[error(
        "ControlledPhase(k={k}) is not exactly Clifford+T synthesizable; \
         phases of π/2^k for k ≥ 2 admit only approximate decompositions"
    )]
    NotSynthesizable { k: u32 },
    #[error("bennett_wrap needs at least one result qubit")]
    NoResults,
    #[error("result qubit {0} listed twice")]
    DuplicateResult(QubitId),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// The 7-T, 7-CNOT network for Toffoli(c1, c2 → t).
pub fn toffoli_clifford_t(c1: QubitId, c2: QubitId, t: QubitId) -> Result<Block, IrError> {
    let origin = Gate::new(GateKind::Toffoli, vec![c1, c2, t])?;
    let gates = [
        Gate::h(t),
        Gate::t(c1),
        Gate::t(c2),
        Gate::t(t),
        Gate::cnot(c2, c1),
        Gate::cnot(t, c2),
        Gate::cnot(c1, t),
        Gate::tdg(c2),
        Gate::cnot(c1, c2),
        Gate::tdg(c1),
        Gate::tdg(c2),
        Gate::t(t),
        Gate::cnot(t, c2),
        Gate::cnot(c1, t),
        Gate::cnot(c2, c1),
        Gate::h(t),
    ];
    let mut block = Block::from_gates("Toffoli", gates);
    block.origin = Some(origin);
    Ok(block)
}

/// Fredkin(c; t1, t2) as a Toffoli conjugated by CNOT(t2 → t1).
pub fn fredkin_clifford_t(c: QubitId, t1: QubitId, t2: QubitId) -> Result<Block, IrError> {
    let origin = Gate::new(GateKind::Fredkin, vec![c, t1, t2])?;
    let children = vec![
        Item::Gate(Gate::cnot(t2, t1)),
        Item::Block(toffoli_clifford_t(c, t1, t2)?),
        Item::Gate(Gate::cnot(t2, t1)),
    ];
    let mut block = Block::new("Fredkin", children);
    block.origin = Some(origin);
    Ok(block)
}

fn lower_item(item: &Item) -> Result<Item, LoweringError> {
    Ok(match item {
        Item::Gate(g) => {
            let ops = g.operands();
            match g.kind() {
                GateKind::Toffoli => Item::Block(toffoli_clifford_t(ops[0], ops[1], ops[2])?),
                GateKind::Fredkin => Item::Block(fredkin_clifford_t(ops[0], ops[1], ops[2])?),
                GateKind::ControlledPhase { k, .. } if k >= 2 => {
                    return Err(LoweringError::NotSynthesizable { k })
                }
                _ => item.clone(),
            }
        }
        Item::Block(b) => Item::Block(Block {
            name: b.name.clone(),
            children: b.children.iter().map(lower_item).collect::<Result<_, _>>()?,
            origin: b.origin.clone(),
        }),
    })
}

/// Replaces every Toffoli and Fredkin with its Clifford+T block, keeping the
/// surrounding hierarchy. Metadata (roles, contract) carries over.
pub fn lower(circuit: &Circuit) -> Result<Circuit, LoweringError> {
    let body = circuit
        .body()
        .iter()
        .map(lower_item)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(circuit.with_body(body)?)
}

/// Compute, copy `result_qubits` onto fresh zero ancillae, uncompute.
///
/// The copies form a new register named `out` (suffixed if taken) and are the
/// only declared outputs; every original qubit is declared restored.
pub fn bennett_wrap(circuit: &Circuit, result_qubits: &[QubitId]) -> Result<Circuit, LoweringError> {
    if result_qubits.is_empty() {
        return Err(LoweringError::NoResults);
    }
    let n = circuit.n_qubits();
    for (i, q) in result_qubits.iter().enumerate() {
        if q.0 >= n {
            return Err(IrError::OutOfRange {
                qubit: q.0,
                n_qubits: n,
            }
            .into());
        }
        if result_qubits[..i].contains(q) {
            return Err(LoweringError::DuplicateResult(*q));
        }
    }
    let k = result_qubits.len();
    let copies: Vec<QubitId> = (n..n + k).map(QubitId).collect();

    let mut out_name = "out".to_string();
    let mut suffix = 1;
    while circuit.registers().contains_key(&out_name) {
        out_name = format!("out_{suffix}");
        suffix += 1;
    }
    let mut registers: Vec<(String, Vec<QubitId>)> = circuit
        .registers()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    registers.push((out_name.clone(), copies.clone()));

    let mut roles: BTreeMap<QubitId, QubitRole> = circuit
        .input_roles()
        .iter()
        .enumerate()
        .map(|(i, r)| (QubitId(i), r.clone()))
        .collect();
    for &q in &copies {
        roles.insert(q, QubitRole::AncillaZero);
    }

    let mut wrapped = Circuit::new(n + k, registers, roles)?;
    wrapped.append(Block::new("compute", circuit.body().to_vec()))?;
    wrapped.append(Block::from_gates(
        "copy",
        result_qubits
            .iter()
            .zip(&copies)
            .map(|(&r, &c)| Gate::cnot(r, c)),
    ))?;
    wrapped.append(Block::new("uncompute", circuit.invert().body().to_vec()))?;

    for (i, role) in circuit.input_roles().iter().enumerate() {
        let restored = if role.is_ancilla() {
            QubitRole::RestoredAncilla
        } else {
            QubitRole::RestoredInput
        };
        wrapped.declare_output(QubitId(i), restored)?;
    }
    for (bit, &c) in copies.iter().enumerate() {
        wrapped.declare_output(c, QubitRole::output(&out_name, bit))?;
    }

    let original = circuit.clone();
    let results = result_qubits.to_vec();
    wrapped.set_contract(Contract::new(move |input| {
        let head = BasisState::from_bits(input.bits()[..n].to_vec());
        let computed = run_classical(&original, &head).ok()?;
        let mut expected = input.clone();
        for (&r, &c) in results.iter().zip(&copies) {
            expected.set(c, input.get(c) ^ computed.get(r));
        }
        Some(expected)
    }));
    Ok(wrapped)
}
