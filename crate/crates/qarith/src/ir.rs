//! Gate-level circuit representation.
//!
//! A [`Circuit`] is a fixed number of qubits, a set of named registers, an
//! ordered body of [`Gate`]s and named [`Block`]s, and a role for every
//! qubit describing what it holds on entry (and, optionally, on exit).
//! Blocks are purely structural: flattening a circuit erases them without
//! changing its semantics.
//!
//! Register bit 0 is always the least significant bit.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::BasisState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit circuit")]
    OutOfRange { qubit: usize, n_qubits: usize },
    #[error("duplicate operand q{0}")]
    DuplicateOperand(usize),
    #[error("{kind} takes {expected} operands, got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("controlled phase exponent must be at least 1")]
    InvalidPhase,
    #[error("qubit q{qubit} appears in registers {first} and {second}")]
    OverlappingRegisters {
        qubit: usize,
        first: String,
        second: String,
    },
    #[error("qubit q{0} has no input role")]
    MissingRole(usize),
    #[error("role for q{0} is not an input-side role")]
    NotAnInputRole(usize),
    #[error("role for q{0} is not an output-side role")]
    NotAnOutputRole(usize),
    #[error("circuit must have at least one qubit")]
    Empty,
    #[error("qubit counts differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("unknown register {0}")]
    UnknownRegister(String),
}

/// Zero-based position of a qubit within a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

impl QubitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl From<usize> for QubitId {
    fn from(i: usize) -> Self {
        QubitId(i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    T,
    Tdg,
    S,
    Sdg,
    X,
    Cnot,
    /// Applies `exp(±iπ/2^k)` to `|11⟩`; `dagger` selects the negative sign.
    /// `k = 1` is the controlled-S gate.
    ControlledPhase { k: u32, dagger: bool },
    Toffoli,
    Fredkin,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::T
            | GateKind::Tdg
            | GateKind::S
            | GateKind::Sdg
            | GateKind::X => 1,
            GateKind::Cnot | GateKind::ControlledPhase { .. } => 2,
            GateKind::Toffoli | GateKind::Fredkin => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::ControlledPhase { .. } => "ControlledPhase",
            GateKind::Toffoli => "Toffoli",
            GateKind::Fredkin => "Fredkin",
        }
    }

    pub fn dagger(self) -> GateKind {
        match self {
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::ControlledPhase { k, dagger } => GateKind::ControlledPhase {
                k,
                dagger: !dagger,
            },
            other => other,
        }
    }

    /// True for the permutation gates the classical simulator understands.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cnot | GateKind::Toffoli | GateKind::Fredkin
        )
    }

    pub fn is_t(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }
}

/// One gate applied to an ordered operand list.
///
/// Operand order: CNOT and ControlledPhase are `(control, target)`, Toffoli is
/// `(control1, control2, target)`, Fredkin is `(control, swap1, swap2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    operands: Vec<QubitId>,
}

impl Gate {
    pub fn new(kind: GateKind, operands: Vec<QubitId>) -> Result<Gate, IrError> {
        if operands.len() != kind.arity() {
            return Err(IrError::Arity {
                kind: kind.name(),
                expected: kind.arity(),
                got: operands.len(),
            });
        }
        if let GateKind::ControlledPhase { k: 0, .. } = kind {
            return Err(IrError::InvalidPhase);
        }
        for (i, q) in operands.iter().enumerate() {
            if operands[..i].contains(q) {
                return Err(IrError::DuplicateOperand(q.0));
            }
        }
        Ok(Gate { kind, operands })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[QubitId] {
        &self.operands
    }

    pub fn dagger(&self) -> Gate {
        Gate {
            kind: self.kind.dagger(),
            operands: self.operands.clone(),
        }
    }

    pub(crate) fn check_range(&self, n_qubits: usize) -> Result<(), IrError> {
        match self.operands.iter().find(|q| q.0 >= n_qubits) {
            Some(q) => Err(IrError::OutOfRange {
                qubit: q.0,
                n_qubits,
            }),
            None => Ok(()),
        }
    }

    fn remap(&self, map: &[QubitId]) -> Gate {
        Gate {
            kind: self.kind,
            operands: self.operands.iter().map(|q| map[q.0]).collect(),
        }
    }

    // Unchecked constructors for builder code whose operands are known distinct.
    pub(crate) fn raw(kind: GateKind, operands: &[QubitId]) -> Gate {
        debug_assert!(Gate::new(kind, operands.to_vec()).is_ok());
        Gate {
            kind,
            operands: operands.to_vec(),
        }
    }

    pub fn h(q: QubitId) -> Gate {
        Gate::raw(GateKind::H, &[q])
    }
    pub fn t(q: QubitId) -> Gate {
        Gate::raw(GateKind::T, &[q])
    }
    pub fn tdg(q: QubitId) -> Gate {
        Gate::raw(GateKind::Tdg, &[q])
    }
    pub fn s(q: QubitId) -> Gate {
        Gate::raw(GateKind::S, &[q])
    }
    pub fn sdg(q: QubitId) -> Gate {
        Gate::raw(GateKind::Sdg, &[q])
    }
    pub fn x(q: QubitId) -> Gate {
        Gate::raw(GateKind::X, &[q])
    }

    /// Panics if `control == target`; use [`Gate::new`] for fallible construction.
    pub fn cnot(control: QubitId, target: QubitId) -> Gate {
        Gate::new(GateKind::Cnot, vec![control, target]).expect("cnot operands must differ")
    }

    pub fn cphase(k: u32, control: QubitId, target: QubitId) -> Gate {
        Gate::new(
            GateKind::ControlledPhase { k, dagger: false },
            vec![control, target],
        )
        .expect("invalid controlled phase")
    }

    pub fn toffoli(c1: QubitId, c2: QubitId, target: QubitId) -> Gate {
        Gate::new(GateKind::Toffoli, vec![c1, c2, target]).expect("toffoli operands must differ")
    }

    pub fn fredkin(control: QubitId, t1: QubitId, t2: QubitId) -> Gate {
        Gate::new(GateKind::Fredkin, vec![control, t1, t2]).expect("fredkin operands must differ")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::ControlledPhase { k, dagger } => {
                write!(f, "CP{}({})", if dagger { "dg" } else { "" }, k)?
            }
            kind => write!(f, "{}", kind.name())?,
        }
        let ops: Vec<String> = self.operands.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", ops.join(","))
    }
}

/// A named sub-circuit. `origin` records the single gate a block implements
/// when it was produced by lowering that gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub children: Vec<Item>,
    pub origin: Option<Gate>,
}

impl Block {
    pub fn new(name: impl Into<String>, children: Vec<Item>) -> Block {
        Block {
            name: name.into(),
            children,
            origin: None,
        }
    }

    pub fn from_gates(name: impl Into<String>, gates: impl IntoIterator<Item = Gate>) -> Block {
        Block::new(name, gates.into_iter().map(Item::Gate).collect())
    }

    /// Number of gates after flattening.
    pub fn gate_count(&self) -> usize {
        self.children.iter().map(Item::gate_count).sum()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        GateIter::new(&self.children)
    }

    fn dagger(&self) -> Block {
        Block {
            name: self.name.clone(),
            children: self.children.iter().rev().map(Item::dagger).collect(),
            origin: self.origin.as_ref().map(Gate::dagger),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Gate(Gate),
    Block(Block),
}

impl Item {
    pub fn gate_count(&self) -> usize {
        match self {
            Item::Gate(_) => 1,
            Item::Block(b) => b.gate_count(),
        }
    }

    pub fn dagger(&self) -> Item {
        match self {
            Item::Gate(g) => Item::Gate(g.dagger()),
            Item::Block(b) => Item::Block(b.dagger()),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<(), IrError> {
        match self {
            Item::Gate(g) => g.check_range(n_qubits),
            Item::Block(b) => b.children.iter().try_for_each(|c| c.validate(n_qubits)),
        }
    }

    fn remap(&self, map: &[QubitId]) -> Item {
        match self {
            Item::Gate(g) => Item::Gate(g.remap(map)),
            Item::Block(b) => Item::Block(Block {
                name: b.name.clone(),
                children: b.children.iter().map(|c| c.remap(map)).collect(),
                origin: b.origin.as_ref().map(|g| g.remap(map)),
            }),
        }
    }

    /// Depth-first gates of this item.
    pub fn gates(&self) -> GateIter<'_> {
        GateIter::new(std::slice::from_ref(self))
    }
}

impl From<Gate> for Item {
    fn from(g: Gate) -> Self {
        Item::Gate(g)
    }
}

impl From<Block> for Item {
    fn from(b: Block) -> Self {
        Item::Block(b)
    }
}

/// Depth-first iterator over the gates of a body.
pub struct GateIter<'a> {
    stack: Vec<std::slice::Iter<'a, Item>>,
}

impl<'a> GateIter<'a> {
    fn new(items: &'a [Item]) -> Self {
        GateIter {
            stack: vec![items.iter()],
        }
    }
}

impl<'a> Iterator for GateIter<'a> {
    type Item = &'a Gate;

    fn next(&mut self) -> Option<&'a Gate> {
        loop {
            let top = self.stack.last_mut()?;
            match top.next() {
                None => {
                    self.stack.pop();
                }
                Some(Item::Gate(g)) => return Some(g),
                Some(Item::Block(b)) => self.stack.push(b.children.iter()),
            }
        }
    }
}

/// What a qubit holds on entry, or what it holds on exit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QubitRole {
    PrimaryInput { register: String, bit: usize },
    AncillaZero,
    AncillaCarryIn,
    DeclaredOutput { register: String, bit: usize },
    RestoredInput,
    RestoredAncilla,
    Garbage,
}

impl QubitRole {
    pub fn input(register: &str, bit: usize) -> QubitRole {
        QubitRole::PrimaryInput {
            register: register.to_string(),
            bit,
        }
    }

    pub fn output(register: &str, bit: usize) -> QubitRole {
        QubitRole::DeclaredOutput {
            register: register.to_string(),
            bit,
        }
    }

    pub fn is_input_side(&self) -> bool {
        matches!(
            self,
            QubitRole::PrimaryInput { .. } | QubitRole::AncillaZero | QubitRole::AncillaCarryIn
        )
    }

    pub fn is_ancilla(&self) -> bool {
        matches!(self, QubitRole::AncillaZero | QubitRole::AncillaCarryIn)
    }
}

type ContractFn = dyn Fn(&BasisState) -> Option<BasisState> + Send + Sync;

/// Functional contract attached by a builder: maps an input basis state to
/// the expected output basis state, or `None` outside the intended domain.
#[derive(Clone)]
pub struct Contract(Arc<ContractFn>);

impl Contract {
    pub fn new(f: impl Fn(&BasisState) -> Option<BasisState> + Send + Sync + 'static) -> Self {
        Contract(Arc::new(f))
    }

    pub fn expected(&self, input: &BasisState) -> Option<BasisState> {
        (self.0)(input)
    }
}

impl fmt::Debug for Contract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Contract(..)")
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    n_qubits: usize,
    registers: IndexMap<String, Vec<QubitId>>,
    body: Vec<Item>,
    input_roles: Vec<QubitRole>,
    declared_outputs: BTreeMap<QubitId, QubitRole>,
    contract: Option<Contract>,
}

impl PartialEq for Circuit {
    /// Structural equality; contracts are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits
            && self.registers == other.registers
            && self.body == other.body
            && self.input_roles == other.input_roles
            && self.declared_outputs == other.declared_outputs
    }
}

impl Circuit {
    pub fn new<S: Into<String>>(
        n_qubits: usize,
        registers: impl IntoIterator<Item = (S, Vec<QubitId>)>,
        roles: BTreeMap<QubitId, QubitRole>,
    ) -> Result<Circuit, IrError> {
        if n_qubits == 0 {
            return Err(IrError::Empty);
        }
        let registers: IndexMap<String, Vec<QubitId>> =
            registers.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let mut owner: Vec<Option<&str>> = vec![None; n_qubits];
        for (name, qubits) in &registers {
            for q in qubits {
                if q.0 >= n_qubits {
                    return Err(IrError::OutOfRange {
                        qubit: q.0,
                        n_qubits,
                    });
                }
                if let Some(first) = owner[q.0] {
                    return Err(IrError::OverlappingRegisters {
                        qubit: q.0,
                        first: first.to_string(),
                        second: name.clone(),
                    });
                }
                owner[q.0] = Some(name);
            }
        }
        let mut input_roles = Vec::with_capacity(n_qubits);
        for i in 0..n_qubits {
            let role = roles.get(&QubitId(i)).ok_or(IrError::MissingRole(i))?;
            if !role.is_input_side() {
                return Err(IrError::NotAnInputRole(i));
            }
            input_roles.push(role.clone());
        }
        if let Some(q) = roles.keys().find(|q| q.0 >= n_qubits) {
            return Err(IrError::OutOfRange {
                qubit: q.0,
                n_qubits,
            });
        }
        Ok(Circuit {
            n_qubits,
            registers,
            body: Vec::new(),
            input_roles,
            declared_outputs: BTreeMap::new(),
            contract: None,
        })
    }

    /// A circuit whose qubits are all primary inputs of a single register `q`.
    pub fn plain(n_qubits: usize) -> Result<Circuit, IrError> {
        let qubits: Vec<QubitId> = (0..n_qubits).map(QubitId).collect();
        let roles = qubits
            .iter()
            .map(|&q| (q, QubitRole::input("q", q.0)))
            .collect();
        Circuit::new(n_qubits, [("q", qubits)], roles)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn registers(&self) -> &IndexMap<String, Vec<QubitId>> {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&[QubitId], IrError> {
        self.registers
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| IrError::UnknownRegister(name.to_string()))
    }

    pub fn body(&self) -> &[Item] {
        &self.body
    }

    pub fn input_roles(&self) -> &[QubitRole] {
        &self.input_roles
    }

    pub fn input_role(&self, q: QubitId) -> &QubitRole {
        &self.input_roles[q.0]
    }

    pub fn declared_outputs(&self) -> &BTreeMap<QubitId, QubitRole> {
        &self.declared_outputs
    }

    pub fn contract(&self) -> Option<&Contract> {
        self.contract.as_ref()
    }

    pub fn append(&mut self, item: impl Into<Item>) -> Result<(), IrError> {
        let item = item.into();
        item.validate(self.n_qubits)?;
        self.body.push(item);
        Ok(())
    }

    pub fn extend<I: Into<Item>>(&mut self, items: impl IntoIterator<Item = I>) -> Result<(), IrError> {
        for item in items {
            self.append(item)?;
        }
        Ok(())
    }

    pub fn declare_output(&mut self, q: QubitId, role: QubitRole) -> Result<(), IrError> {
        if q.0 >= self.n_qubits {
            return Err(IrError::OutOfRange {
                qubit: q.0,
                n_qubits: self.n_qubits,
            });
        }
        if role.is_input_side() {
            return Err(IrError::NotAnOutputRole(q.0));
        }
        self.declared_outputs.insert(q, role);
        Ok(())
    }

    pub fn set_contract(&mut self, contract: Contract) {
        self.contract = Some(contract);
    }

    pub fn clear_outputs(&mut self) {
        self.declared_outputs.clear();
        self.contract = None;
    }

    pub fn gates(&self) -> GateIter<'_> {
        GateIter::new(&self.body)
    }

    pub fn gate_count(&self) -> usize {
        self.body.iter().map(Item::gate_count).sum()
    }

    pub fn has_blocks(&self) -> bool {
        self.body.iter().any(|i| matches!(i, Item::Block(_)))
    }

    /// The dagger circuit: order reversed (recursively), each gate replaced by
    /// its inverse. Input roles are kept; output declarations are dropped.
    pub fn invert(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            registers: self.registers.clone(),
            body: self.body.iter().rev().map(Item::dagger).collect(),
            input_roles: self.input_roles.clone(),
            declared_outputs: BTreeMap::new(),
            contract: None,
        }
    }

    /// Same circuit with every block expanded in place.
    pub fn flatten(&self) -> Circuit {
        Circuit {
            body: self.gates().cloned().map(Item::Gate).collect(),
            ..self.clone()
        }
    }

    /// `self` followed by `other`'s body. Roles and registers come from `self`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, IrError> {
        if self.n_qubits != other.n_qubits {
            return Err(IrError::WidthMismatch(self.n_qubits, other.n_qubits));
        }
        let mut out = self.clone();
        out.clear_outputs();
        out.body.extend(other.body.iter().cloned());
        Ok(out)
    }

    /// Copy of this circuit with a new body; metadata is kept.
    pub fn with_body(&self, body: Vec<Item>) -> Result<Circuit, IrError> {
        for item in &body {
            item.validate(self.n_qubits)?;
        }
        Ok(Circuit {
            body,
            ..self.clone()
        })
    }

    /// Renumbers qubits so that registers occupy consecutive indices in
    /// declaration order, followed by unregistered qubits in index order.
    /// This is the numbering an OpenQASM round trip produces.
    pub fn register_major(&self) -> Circuit {
        let mut order: Vec<QubitId> = self.registers.values().flatten().copied().collect();
        let seen: HashSet<QubitId> = order.iter().copied().collect();
        order.extend((0..self.n_qubits).map(QubitId).filter(|q| !seen.contains(q)));
        let mut map = vec![QubitId(0); self.n_qubits];
        for (new, old) in order.iter().enumerate() {
            map[old.0] = QubitId(new);
        }
        let mut input_roles = vec![QubitRole::AncillaZero; self.n_qubits];
        for (old, role) in self.input_roles.iter().enumerate() {
            input_roles[map[old].0] = role.clone();
        }
        Circuit {
            n_qubits: self.n_qubits,
            registers: self
                .registers
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|q| map[q.0]).collect()))
                .collect(),
            body: self.body.iter().map(|i| i.remap(&map)).collect(),
            input_roles,
            declared_outputs: self
                .declared_outputs
                .iter()
                .map(|(q, r)| (map[q.0], r.clone()))
                .collect(),
            contract: None,
        }
    }

    /// Value of a register in a basis state, LSB first.
    pub fn read_register(&self, state: &BasisState, name: &str) -> Result<u64, IrError> {
        Ok(state.read(self.register(name)?))
    }
}
