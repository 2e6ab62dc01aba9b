//! Resource cost measures: gate counts, depths, qubit accounting, garbage
//! classification, KQ products and the fidelity estimate.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind, Item, QubitId, QubitRole};
use crate::sim::{is_classical, run_classical, BasisState};

/// Largest number of varying input bits [`classify_outputs`] will sweep.
pub const SWEEP_LIMIT_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("{0} must be lowered to Clifford+T before computing T/CNOT metrics")]
    Unlowered(String),
    #[error(
        "ControlledPhase(k={0}) is not exactly Clifford+T synthesizable; \
         T metrics are undefined without approximate synthesis"
    )]
    NotSynthesizable(u32),
    #[error("serial-block depth needs a circuit with top-level blocks")]
    NoBlocks,
    #[error("output classification needs a classical circuit: {0}")]
    NonClassical(String),
    #[error("qubit accounting mismatch: inputs+ancillae = {method1}, garbage+outputs = {method2}")]
    AccountingMismatch { method1: usize, method2: usize },
    #[error("{name} must lie in (0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown {what} `{value}`")]
    Parse { what: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthConvention {
    /// ASAP layering of the flattened circuit.
    Scheduled,
    /// Sum of each top-level item's scheduled depth.
    SerialBlock,
}

impl DepthConvention {
    pub fn name(self) -> &'static str {
        match self {
            DepthConvention::Scheduled => "scheduled",
            DepthConvention::SerialBlock => "serial",
        }
    }
}

impl FromStr for DepthConvention {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scheduled" => Ok(DepthConvention::Scheduled),
            "serial" | "serial-block" => Ok(DepthConvention::SerialBlock),
            _ => Err(MetricsError::Parse {
                what: "depth convention",
                value: s.to_string(),
            }),
        }
    }
}

/// Garbage output count, or `Undetermined` when it cannot be established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GarbageCount {
    Known(usize),
    Undetermined,
}

impl GarbageCount {
    pub fn known(self) -> Option<usize> {
        match self {
            GarbageCount::Known(g) => Some(g),
            GarbageCount::Undetermined => None,
        }
    }
}

impl fmt::Display for GarbageCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GarbageCount::Known(g) => write!(f, "{g}"),
            GarbageCount::Undetermined => f.write_str("undetermined"),
        }
    }
}

impl Serialize for GarbageCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GarbageCount::Known(g) => s.serialize_u64(*g as u64),
            GarbageCount::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub t_count: u64,
    pub t_depth: u64,
    pub cnot_count: u64,
    pub cnot_depth: u64,
    pub total_depth: u64,
    pub qubit_cost: u64,
    pub ancilla_count: u64,
    pub garbage_count: GarbageCount,
    pub kq: u64,
    pub kq_t: u64,
    pub kq_cnot: u64,
    #[serde(rename = "fidelity_A")]
    pub fidelity_a: f64,
}

/// Depth measures of one gate sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Depths {
    pub total: u64,
    pub t: u64,
    pub cnot: u64,
}

impl std::ops::Add for Depths {
    type Output = Depths;
    fn add(self, o: Depths) -> Depths {
        Depths {
            total: self.total + o.total,
            t: self.t + o.t,
            cnot: self.cnot + o.cnot,
        }
    }
}

/// Layer index (0-based) of every gate, in input order. A gate goes one layer
/// past the latest layer used by any of its qubits.
pub fn asap_schedule<'a>(gates: impl IntoIterator<Item = &'a Gate>, n_qubits: usize) -> Vec<usize> {
    let mut frontier = vec![0usize; n_qubits];
    gates
        .into_iter()
        .map(|g| {
            let layer = g.operands().iter().map(|q| frontier[q.0]).max().unwrap_or(0);
            for q in g.operands() {
                frontier[q.0] = layer + 1;
            }
            layer
        })
        .collect()
}

/// The ASAP layers of a circuit's flattened gate list.
pub fn asap_layers(circuit: &Circuit) -> Vec<Vec<Gate>> {
    let gates: Vec<&Gate> = circuit.gates().collect();
    let schedule = asap_schedule(gates.iter().copied(), circuit.n_qubits());
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for (g, &l) in gates.into_iter().zip(&schedule) {
        if layers.len() <= l {
            layers.resize_with(l + 1, Vec::new);
        }
        layers[l].push(g.clone());
    }
    layers
}

/// Total depth is the ASAP layer count. T-depth (CNOT-depth) is the largest
/// number of T/Tdg (CNOT) gates on any chain of gates linked by shared
/// qubits: the number of T (CNOT) layers when every other gate is free.
fn depths_of<'a>(gates: impl IntoIterator<Item = &'a Gate>, n_qubits: usize) -> Depths {
    let mut layer = vec![0u64; n_qubits];
    let mut t_level = vec![0u64; n_qubits];
    let mut cnot_level = vec![0u64; n_qubits];
    for g in gates {
        let ops = g.operands();
        let bump = |levels: &mut [u64], weight: bool| {
            let level = ops.iter().map(|q| levels[q.0]).max().unwrap_or(0) + u64::from(weight);
            for q in ops {
                levels[q.0] = level;
            }
        };
        bump(&mut layer, true);
        bump(&mut t_level, g.kind().is_t());
        bump(&mut cnot_level, g.kind() == GateKind::Cnot);
    }
    let max = |v: &[u64]| v.iter().copied().max().unwrap_or(0);
    Depths {
        total: max(&layer),
        t: max(&t_level),
        cnot: max(&cnot_level),
    }
}

fn check_lowered(circuit: &Circuit) -> Result<(), MetricsError> {
    for g in circuit.gates() {
        match g.kind() {
            GateKind::Toffoli | GateKind::Fredkin => {
                return Err(MetricsError::Unlowered(g.kind().name().to_string()))
            }
            GateKind::ControlledPhase { k, .. } if k >= 2 => {
                return Err(MetricsError::NotSynthesizable(k))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Depths under the given convention. Fails on unlowered gates.
pub fn depths(circuit: &Circuit, convention: DepthConvention) -> Result<Depths, MetricsError> {
    check_lowered(circuit)?;
    let n = circuit.n_qubits();
    match convention {
        DepthConvention::Scheduled => Ok(depths_of(circuit.gates(), n)),
        DepthConvention::SerialBlock => {
            if !circuit.has_blocks() {
                return Err(MetricsError::NoBlocks);
            }
            Ok(circuit
                .body()
                .iter()
                .map(|item| depths_of(item.gates(), n))
                .fold(Depths::default(), |a, b| a + b))
        }
    }
}

/// `(t_count, cnot_count)` of a lowered gate sequence.
pub fn gate_counts<'a>(gates: impl IntoIterator<Item = &'a Gate>) -> (u64, u64) {
    gates.into_iter().fold((0, 0), |(t, c), g| {
        (
            t + u64::from(g.kind().is_t()),
            c + u64::from(g.kind() == GateKind::Cnot),
        )
    })
}

/// Metrics of a single block, e.g. a lowered CMAJ.
pub fn block_report(item: &Item, n_qubits: usize) -> (u64, u64, Depths) {
    let (t, c) = gate_counts(item.gates());
    (t, c, depths_of(item.gates(), n_qubits))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// Output role of every qubit, or `None` when the sweep was too large.
    pub roles: Option<Vec<QubitRole>>,
    pub garbage_count: GarbageCount,
}

/// Classifies every output qubit by exhaustive classical simulation.
///
/// Primary inputs and carry-in ancillae range over all values, zero ancillae
/// stay 0. When the circuit carries a contract, inputs it rejects are skipped
/// and declared outputs must match its prediction.
pub fn classify_outputs(circuit: &Circuit) -> Result<Classification, MetricsError> {
    if !is_classical(circuit) {
        return Err(MetricsError::NonClassical(
            "circuit contains phase or Hadamard gates".into(),
        ));
    }
    let n = circuit.n_qubits();
    let varying: Vec<QubitId> = (0..n)
        .map(QubitId)
        .filter(|&q| {
            matches!(
                circuit.input_role(q),
                QubitRole::PrimaryInput { .. } | QubitRole::AncillaCarryIn
            )
        })
        .collect();
    if varying.len() > SWEEP_LIMIT_BITS {
        return Ok(Classification {
            roles: None,
            garbage_count: GarbageCount::Undetermined,
        });
    }

    let contract = circuit.contract();
    let mut always_zero = vec![true; n];
    let mut always_self = vec![true; n];
    let mut contract_ok = vec![true; n];
    for combo in 0..1u64 << varying.len() {
        let mut input = BasisState::zeros(n);
        input.write(&varying, combo);
        let expected = match contract {
            Some(c) => match c.expected(&input) {
                Some(e) => Some(e),
                None => continue,
            },
            None => None,
        };
        let out = run_classical(circuit, &input)
            .map_err(|e| MetricsError::NonClassical(e.to_string()))?;
        for i in 0..n {
            let q = QubitId(i);
            always_zero[i] &= !out.get(q);
            always_self[i] &= out.get(q) == input.get(q);
            if let Some(e) = &expected {
                contract_ok[i] &= out.get(q) == e.get(q);
            }
        }
    }

    let roles: Vec<QubitRole> = (0..n)
        .map(|i| {
            let q = QubitId(i);
            let input_role = circuit.input_role(q);
            let restored = match input_role {
                QubitRole::AncillaZero if always_zero[i] => Some(QubitRole::RestoredAncilla),
                QubitRole::AncillaCarryIn if always_self[i] => Some(QubitRole::RestoredAncilla),
                QubitRole::PrimaryInput { .. } if always_self[i] => Some(QubitRole::RestoredInput),
                _ => None,
            };
            match circuit.declared_outputs().get(&q) {
                Some(role @ QubitRole::DeclaredOutput { .. }) if contract_ok[i] => role.clone(),
                Some(QubitRole::DeclaredOutput { .. }) => QubitRole::Garbage,
                _ => restored.unwrap_or(QubitRole::Garbage),
            }
        })
        .collect();
    let garbage = roles.iter().filter(|r| **r == QubitRole::Garbage).count();
    Ok(Classification {
        roles: Some(roles),
        garbage_count: GarbageCount::Known(garbage),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitCosts {
    pub qubit_cost: usize,
    pub ancilla_count: usize,
    pub primary_inputs: usize,
}

fn qubit_costs_with(
    circuit: &Circuit,
    classification: Option<&Classification>,
) -> Result<QubitCosts, MetricsError> {
    let roles = circuit.input_roles();
    let primary_inputs = roles
        .iter()
        .filter(|r| matches!(r, QubitRole::PrimaryInput { .. }))
        .count();
    let ancilla_count = roles.iter().filter(|r| r.is_ancilla()).count();
    let method1 = primary_inputs + ancilla_count;
    if let Some(Classification {
        roles: Some(out_roles),
        garbage_count: GarbageCount::Known(garbage),
    }) = classification
    {
        let outputs = out_roles
            .iter()
            .filter(|r| {
                matches!(
                    r,
                    QubitRole::DeclaredOutput { .. }
                        | QubitRole::RestoredInput
                        | QubitRole::RestoredAncilla
                )
            })
            .count();
        let method2 = garbage + outputs;
        if method1 != method2 {
            return Err(MetricsError::AccountingMismatch { method1, method2 });
        }
    }
    Ok(QubitCosts {
        qubit_cost: method1,
        ancilla_count,
        primary_inputs,
    })
}

/// Qubit cost as primary inputs plus ancillae, cross-checked against
/// garbage plus outputs whenever the outputs can be classified.
pub fn qubit_costs(circuit: &Circuit) -> Result<QubitCosts, MetricsError> {
    let classification = classify_outputs(circuit).ok();
    qubit_costs_with(circuit, classification.as_ref())
}

/// Full report. T/CNOT fields need a lowered circuit. Garbage is reported
/// only for classical circuits that declare outputs.
pub fn resource_report(circuit: &Circuit, convention: DepthConvention) -> Result<ResourceReport, MetricsError> {
    let d = depths(circuit, convention)?;
    let (t_count, cnot_count) = gate_counts(circuit.gates());
    let classification = if circuit.declared_outputs().is_empty() {
        None
    } else {
        classify_outputs(circuit).ok()
    };
    let costs = qubit_costs_with(circuit, classification.as_ref())?;
    let garbage_count = classification
        .map(|c| c.garbage_count)
        .unwrap_or(GarbageCount::Undetermined);
    let q = costs.qubit_cost as u64;
    let kq = d.total * q;
    Ok(ResourceReport {
        t_count,
        t_depth: d.t,
        cnot_count,
        cnot_depth: d.cnot,
        total_depth: d.total,
        qubit_cost: q,
        ancilla_count: costs.ancilla_count as u64,
        garbage_count,
        kq,
        kq_t: d.t * q,
        kq_cnot: d.cnot * q,
        fidelity_a: fidelity(kq),
    })
}

/// `1/kq`, or 1 for an empty circuit.
pub fn fidelity(kq: u64) -> f64 {
    if kq == 0 {
        1.0
    } else {
        1.0 / kq as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityConvention {
    /// Deliverable when `A < ε`.
    Paper,
    /// Deliverable when `ε < A`.
    Standard,
}

impl FromStr for FidelityConvention {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(FidelityConvention::Paper),
            "standard" => Ok(FidelityConvention::Standard),
            _ => Err(MetricsError::Parse {
                what: "fidelity convention",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Deliverable,
    NeedsQec,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Deliverable => "deliverable",
            Verdict::NeedsQec => "needs-QEC",
        })
    }
}

pub fn nisq_check(a: f64, epsilon: f64, convention: FidelityConvention) -> Result<Verdict, MetricsError> {
    for (name, value) in [("A", a), ("epsilon", epsilon)] {
        if !(value > 0.0 && value <= 1.0) {
            return Err(MetricsError::OutOfRange { name, value });
        }
    }
    let deliverable = match convention {
        FidelityConvention::Paper => a < epsilon,
        FidelityConvention::Standard => epsilon < a,
    };
    Ok(if deliverable {
        Verdict::Deliverable
    } else {
        Verdict::NeedsQec
    })
}

/// Closed-form costs; fields a family has no formula for are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PredictedReport {
    pub t_count: Option<u64>,
    pub t_depth: Option<u64>,
    pub cnot_count: Option<u64>,
    pub cnot_depth: Option<u64>,
    pub qubit_cost: Option<u64>,
    pub garbage_count: Option<u64>,
    pub kq_t: Option<u64>,
    pub kq_cnot: Option<u64>,
}

/// Formulas for `adder` and `conditional_adder` (alias `cond-adder`).
pub fn predicted_report(family: &str, n: u64) -> Result<PredictedReport, MetricsError> {
    match family {
        "adder" => Ok(PredictedReport {
            t_count: Some(14 * n),
            t_depth: Some(6 * n),
            qubit_cost: Some(2 * n + 2),
            garbage_count: Some(0),
            kq_t: Some(12 * n * n + 12 * n),
            ..Default::default()
        }),
        "conditional_adder" | "cond-adder" => Ok(PredictedReport {
            cnot_count: Some(30 * n + 7),
            cnot_depth: Some(30 * n + 7),
            qubit_cost: Some(2 * n + 3),
            garbage_count: Some(0),
            kq_cnot: Some(60 * n * n + 104 * n + 21),
            ..Default::default()
        }),
        other => Err(MetricsError::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Block;
    use crate::lowering::lower;
    use std::collections::BTreeMap;

    fn q(i: usize) -> QubitId {
        QubitId(i)
    }

    #[test]
    fn lowered_toffoli_metrics() {
        let mut c = Circuit::plain(3).unwrap();
        c.append(Gate::toffoli(q(0), q(1), q(2))).unwrap();
        let l = lower(&c).unwrap();
        let r = resource_report(&l, DepthConvention::Scheduled).unwrap();
        assert_eq!((r.t_count, r.t_depth, r.cnot_count, r.cnot_depth), (7, 3, 7, 7));
        assert!(matches!(
            resource_report(&c, DepthConvention::Scheduled),
            Err(MetricsError::Unlowered(_))
        ));
    }

    #[test]
    fn single_cnot() {
        let mut c = Circuit::plain(2).unwrap();
        c.append(Gate::cnot(q(0), q(1))).unwrap();
        let r = resource_report(&c, DepthConvention::Scheduled).unwrap();
        assert_eq!((r.cnot_count, r.cnot_depth, r.t_count, r.total_depth), (1, 1, 0, 1));
        assert_eq!(r.kq, 2);
        assert_eq!(r.fidelity_a, 0.5);
        assert_eq!(r.garbage_count, GarbageCount::Undetermined);
    }

    #[test]
    fn serial_block_sums_items() {
        let mut c = Circuit::plain(2).unwrap();
        c.append(Block::from_gates("a", [Gate::t(q(0))])).unwrap();
        c.append(Block::from_gates("b", [Gate::t(q(1))])).unwrap();
        assert_eq!(depths(&c, DepthConvention::Scheduled).unwrap().t, 1);
        assert_eq!(depths(&c, DepthConvention::SerialBlock).unwrap().t, 2);
        assert_eq!(
            depths(&c.flatten(), DepthConvention::SerialBlock).unwrap_err(),
            MetricsError::NoBlocks
        );
    }

    #[test]
    fn and_without_declaration_is_garbage() {
        let mut roles = BTreeMap::new();
        roles.insert(q(0), QubitRole::input("a", 0));
        roles.insert(q(1), QubitRole::input("b", 0));
        roles.insert(q(2), QubitRole::AncillaZero);
        let mut c = Circuit::new(3, [("a", vec![q(0), q(1)])], roles).unwrap();
        c.append(Gate::toffoli(q(0), q(1), q(2))).unwrap();
        let cl = classify_outputs(&c).unwrap();
        assert_eq!(cl.garbage_count, GarbageCount::Known(1));
        let roles = cl.roles.unwrap();
        assert_eq!(roles[0], QubitRole::RestoredInput);
        assert_eq!(roles[2], QubitRole::Garbage);
    }

    #[test]
    fn nisq_conventions() {
        assert!((fidelity(24) - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(
            nisq_check(0.01, 0.05, FidelityConvention::Paper).unwrap(),
            Verdict::Deliverable
        );
        assert_eq!(
            nisq_check(0.01, 0.05, FidelityConvention::Standard).unwrap(),
            Verdict::NeedsQec
        );
        assert!(nisq_check(0.0, 0.05, FidelityConvention::Paper).is_err());
        assert!(nisq_check(0.5, 1.5, FidelityConvention::Paper).is_err());
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_report("adder", 4).unwrap().kq_t, Some(240));
        assert_eq!(predicted_report("adder", 1).unwrap().t_count, Some(14));
        assert_eq!(
            predicted_report("conditional_adder", 1).unwrap().cnot_count,
            Some(37)
        );
        assert!(predicted_report("divider", 3).is_err());
    }

    #[test]
    fn asap_layers_have_no_conflicts() {
        let mut c = Circuit::plain(3).unwrap();
        c.extend([
            Gate::h(q(0)),
            Gate::h(q(1)),
            Gate::cnot(q(0), q(1)),
            Gate::x(q(2)),
            Gate::t(q(2)),
        ])
        .unwrap();
        let layers = asap_layers(&c);
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].len(), 3);
    }
}
