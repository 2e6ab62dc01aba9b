//! Reversible arithmetic builders: ripple-carry adder and its variants,
//! shift-and-add multiplier, non-restoring divider.
//!
//! All registers are LSB first. Every builder attaches a contract describing
//! its intended function, which [`crate::metrics::classify_outputs`] uses to
//! validate the declared outputs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ir::{Block, Circuit, Contract, Gate, IrError, Item, QubitId, QubitRole};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("width {n} is below the minimum of {min}")]
    Width { n: usize, min: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operand {value} outside the {bits}-bit positive range")]
    Domain { value: u64, bits: usize },
    #[error(transparent)]
    Ir(#[from] IrError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarryKind {
    Maj,
    Uma,
    Cmaj,
    Cuma,
}

impl CarryKind {
    pub fn name(self) -> &'static str {
        match self {
            CarryKind::Maj => "MAJ",
            CarryKind::Uma => "UMA",
            CarryKind::Cmaj => "CMAJ",
            CarryKind::Cuma => "CUMA",
        }
    }
}

/// A carry block. MAJ/UMA take `(c, b, a)`, CMAJ/CUMA take `(ctrl, c, b, a)`.
pub fn carry_block(kind: CarryKind, qubits: &[QubitId]) -> Result<Block, ArithmeticError> {
    let arity = match kind {
        CarryKind::Maj | CarryKind::Uma => 3,
        CarryKind::Cmaj | CarryKind::Cuma => 4,
    };
    if qubits.len() != arity {
        return Err(IrError::Arity {
            kind: kind.name(),
            expected: arity,
            got: qubits.len(),
        }
        .into());
    }
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(IrError::DuplicateOperand(q.0).into());
        }
    }
    Ok(match kind {
        CarryKind::Maj => maj(qubits[0], qubits[1], qubits[2]),
        CarryKind::Uma => uma(qubits[0], qubits[1], qubits[2]),
        CarryKind::Cmaj => cmaj(qubits[0], qubits[1], qubits[2], qubits[3]),
        CarryKind::Cuma => cuma(qubits[0], qubits[1], qubits[2], qubits[3]),
    })
}

fn maj(c: QubitId, b: QubitId, a: QubitId) -> Block {
    Block::from_gates(
        "MAJ",
        [Gate::cnot(a, b), Gate::cnot(a, c), Gate::toffoli(c, b, a)],
    )
}

fn uma(c: QubitId, b: QubitId, a: QubitId) -> Block {
    Block::from_gates(
        "UMA",
        [Gate::toffoli(c, b, a), Gate::cnot(a, c), Gate::cnot(c, b)],
    )
}

fn cmaj(ctrl: QubitId, c: QubitId, b: QubitId, a: QubitId) -> Block {
    Block::from_gates(
        "CMAJ",
        [
            Gate::toffoli(ctrl, a, b),
            Gate::cnot(a, c),
            Gate::toffoli(c, b, a),
        ],
    )
}

fn cuma(ctrl: QubitId, c: QubitId, b: QubitId, a: QubitId) -> Block {
    Block::from_gates(
        "CUMA",
        [
            Gate::toffoli(c, b, a),
            Gate::cnot(a, c),
            Gate::toffoli(ctrl, c, b),
        ],
    )
}

/// Ripple-carry addition `sum ← sum + operand + carry_in (mod 2^m)`, with the
/// carry out of the top bit XORed into `carry_out` when given. `operand` and
/// `carry_in` are restored.
pub(crate) fn add_into(
    sum: &[QubitId],
    operand: &[QubitId],
    carry_in: QubitId,
    carry_out: Option<QubitId>,
) -> Vec<Item> {
    assert_eq!(sum.len(), operand.len());
    assert!(!sum.is_empty());
    let m = sum.len();
    let c = |i: usize| if i == 0 { carry_in } else { operand[i - 1] };
    let mut items: Vec<Item> = (0..m).map(|i| maj(c(i), sum[i], operand[i]).into()).collect();
    if let Some(z) = carry_out {
        items.push(Gate::cnot(operand[m - 1], z).into());
    }
    items.extend((0..m).rev().map(|i| Item::from(uma(c(i), sum[i], operand[i]))));
    items
}

/// `add_into` gated by `ctrl`; with `ctrl = 0` every qubit is unchanged.
pub(crate) fn cond_add_into(
    ctrl: QubitId,
    sum: &[QubitId],
    operand: &[QubitId],
    carry_in: QubitId,
    carry_out: Option<QubitId>,
) -> Vec<Item> {
    assert_eq!(sum.len(), operand.len());
    assert!(!sum.is_empty());
    let m = sum.len();
    let c = |i: usize| if i == 0 { carry_in } else { operand[i - 1] };
    let mut items: Vec<Item> = (0..m)
        .map(|i| cmaj(ctrl, c(i), sum[i], operand[i]).into())
        .collect();
    if let Some(z) = carry_out {
        items.push(Gate::toffoli(ctrl, operand[m - 1], z).into());
    }
    items.extend(
        (0..m)
            .rev()
            .map(|i| Item::from(cuma(ctrl, c(i), sum[i], operand[i]))),
    );
    items
}

fn not_all(name: &str, qubits: &[QubitId]) -> Item {
    Block::from_gates(name, qubits.iter().map(|&q| Gate::x(q))).into()
}

fn cnot_fan(name: &str, ctrl: QubitId, qubits: &[QubitId]) -> Item {
    Block::from_gates(name, qubits.iter().map(|&q| Gate::cnot(ctrl, q))).into()
}

/// `target ← target − operand (mod 2^m)`; `zero` must hold 0 and is restored.
pub(crate) fn sub_from(target: &[QubitId], operand: &[QubitId], zero: QubitId) -> Vec<Item> {
    let mut items = vec![not_all("NOT", target)];
    items.extend(add_into(target, operand, zero, None));
    items.push(not_all("NOT", target));
    items
}

/// `p ← p ⊕ a·b` for `p` initially zero with `len(p) ≥ len(a) + len(b)`.
/// `zero` is a scratch qubit holding 0, restored.
pub(crate) fn multiply_into(p: &[QubitId], a: &[QubitId], b: &[QubitId], zero: QubitId) -> Vec<Item> {
    let (aw, bw) = (a.len(), b.len());
    assert!(p.len() >= aw + bw);
    let mut items = vec![Item::from(Block::from_gates(
        "TGA",
        (0..aw).map(|i| Gate::toffoli(b[0], a[i], p[i])),
    ))];
    for j in 1..bw {
        items.push(
            Block::new(
                "ConditionalAdd",
                cond_add_into(b[j], &p[j..j + aw], a, zero, Some(p[j + aw])),
            )
            .into(),
        );
    }
    items
}

fn qs(range: std::ops::Range<usize>) -> Vec<QubitId> {
    range.map(QubitId).collect()
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_width(n: usize, min: usize) -> Result<(), ArithmeticError> {
    if n < min {
        Err(ArithmeticError::Width { n, min })
    } else {
        Ok(())
    }
}

/// Qubit map of the ripple-carry adder: carry-in first, then interleaved
/// `(b_i, a_i)` pairs, carry-out last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderLayout {
    pub n: usize,
    pub carry_in: QubitId,
    pub b: Vec<QubitId>,
    pub a: Vec<QubitId>,
    pub carry_out: QubitId,
}

impl AdderLayout {
    pub fn new(n: usize) -> AdderLayout {
        AdderLayout {
            n,
            carry_in: QubitId(0),
            b: (0..n).map(|i| QubitId(1 + 2 * i)).collect(),
            a: (0..n).map(|i| QubitId(2 + 2 * i)).collect(),
            carry_out: QubitId(2 * n + 1),
        }
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n + 2
    }

    /// `B` followed by the carry-out qubit: the `(n+1)`-bit result register.
    pub fn result(&self) -> Vec<QubitId> {
        let mut r = self.b.clone();
        r.push(self.carry_out);
        r
    }

    fn registers(&self) -> Vec<(&'static str, Vec<QubitId>)> {
        vec![
            ("cin", vec![self.carry_in]),
            ("A", self.a.clone()),
            ("B", self.b.clone()),
            ("cout", vec![self.carry_out]),
        ]
    }

    fn roles(&self, carry_in: QubitRole) -> BTreeMap<QubitId, QubitRole> {
        let mut roles = BTreeMap::new();
        roles.insert(self.carry_in, carry_in);
        roles.insert(self.carry_out, QubitRole::AncillaZero);
        for i in 0..self.n {
            roles.insert(self.a[i], QubitRole::input("A", i));
            roles.insert(self.b[i], QubitRole::input("B", i));
        }
        roles
    }

    fn declare_result(&self, c: &mut Circuit) -> Result<(), IrError> {
        for (i, q) in self.result().into_iter().enumerate() {
            c.declare_output(q, QubitRole::output("S", i))?;
        }
        Ok(())
    }
}

/// `B, cout ← a + b + cin`; `A` and `cin` restored.
pub fn build_adder(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 1)?;
    let l = AdderLayout::new(n);
    let mut c = Circuit::new(l.n_qubits(), l.registers(), l.roles(QubitRole::AncillaCarryIn))?;
    c.extend(add_into(&l.b, &l.a, l.carry_in, Some(l.carry_out)))?;
    l.declare_result(&mut c)?;
    let lc = l.clone();
    c.set_contract(Contract::new(move |input| {
        if input.get(lc.carry_out) {
            return None;
        }
        let s = input.read(&lc.a) + input.read(&lc.b) + u64::from(input.get(lc.carry_in));
        let mut out = input.clone();
        out.write(&lc.result(), s);
        Some(out)
    }));
    Ok(c)
}

fn difference_contract(l: &AdderLayout, ctrl: Option<QubitId>) -> Contract {
    let l = l.clone();
    Contract::new(move |input| {
        if input.get(l.carry_out) || input.get(l.carry_in) {
            return None;
        }
        let (a, b) = (input.read(&l.a), input.read(&l.b));
        let subtract = ctrl.is_none_or(|q| input.get(q));
        let value = if subtract {
            b.wrapping_sub(a) & mask(l.n + 1)
        } else {
            a + b
        };
        let mut out = input.clone();
        out.write(&l.result(), value);
        Some(out)
    })
}

/// `B, cout ← (b − a) mod 2^(n+1)` as two's complement; `A` restored.
pub fn build_subtractor(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 1)?;
    let l = AdderLayout::new(n);
    let mut c = Circuit::new(l.n_qubits(), l.registers(), l.roles(QubitRole::AncillaZero))?;
    c.append(not_all("NOT", &l.b))?;
    c.extend(add_into(&l.b, &l.a, l.carry_in, Some(l.carry_out)))?;
    c.append(not_all("NOT", &l.b))?;
    l.declare_result(&mut c)?;
    c.set_contract(difference_contract(&l, None));
    Ok(c)
}

/// Adds when `Ctrl = 0` and computes `b − a` when `Ctrl = 1`, both into
/// `B, cout`. The extra `Ctrl` qubit is appended after the adder layout.
pub fn build_addsub(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 1)?;
    let l = AdderLayout::new(n);
    let ctrl = QubitId(l.n_qubits());
    let mut registers = l.registers();
    registers.push(("Ctrl", vec![ctrl]));
    let mut roles = l.roles(QubitRole::AncillaZero);
    roles.insert(ctrl, QubitRole::input("Ctrl", 0));
    let mut c = Circuit::new(l.n_qubits() + 1, registers, roles)?;
    c.append(cnot_fan("CNOT-fan", ctrl, &l.b))?;
    c.extend(add_into(&l.b, &l.a, l.carry_in, Some(l.carry_out)))?;
    c.append(cnot_fan("CNOT-fan", ctrl, &l.b))?;
    l.declare_result(&mut c)?;
    c.set_contract(difference_contract(&l, Some(ctrl)));
    Ok(c)
}

/// `B, cout ← a + b + cin` when `Ctrl = 1`; identity when `Ctrl = 0`.
pub fn build_conditional_adder(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 1)?;
    let l = AdderLayout::new(n);
    let ctrl = QubitId(l.n_qubits());
    let mut registers = l.registers();
    registers.push(("Ctrl", vec![ctrl]));
    let mut roles = l.roles(QubitRole::AncillaCarryIn);
    roles.insert(ctrl, QubitRole::input("Ctrl", 0));
    let mut c = Circuit::new(l.n_qubits() + 1, registers, roles)?;
    c.extend(cond_add_into(ctrl, &l.b, &l.a, l.carry_in, Some(l.carry_out)))?;
    l.declare_result(&mut c)?;
    c.set_contract(Contract::new(move |input| {
        if input.get(l.carry_out) {
            return None;
        }
        let mut out = input.clone();
        if input.get(ctrl) {
            let s = input.read(&l.a) + input.read(&l.b) + u64::from(input.get(l.carry_in));
            out.write(&l.result(), s);
        }
        Some(out)
    }));
    Ok(c)
}

/// Qubit map of the multiplier: `A`, `B`, product `P` (2n), one scratch qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierLayout {
    pub n: usize,
    pub a: Vec<QubitId>,
    pub b: Vec<QubitId>,
    pub p: Vec<QubitId>,
    pub scratch: QubitId,
}

impl MultiplierLayout {
    pub fn new(n: usize) -> MultiplierLayout {
        MultiplierLayout {
            n,
            a: qs(0..n),
            b: qs(n..2 * n),
            p: qs(2 * n..4 * n),
            scratch: QubitId(4 * n),
        }
    }

    pub fn n_qubits(&self) -> usize {
        4 * self.n + 1
    }
}

/// `P ← a·b`; `A`, `B` and the scratch qubit restored.
pub fn build_multiplier(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 1)?;
    let l = MultiplierLayout::new(n);
    let mut roles = BTreeMap::new();
    for i in 0..n {
        roles.insert(l.a[i], QubitRole::input("A", i));
        roles.insert(l.b[i], QubitRole::input("B", i));
    }
    for &q in l.p.iter().chain([&l.scratch]) {
        roles.insert(q, QubitRole::AncillaZero);
    }
    let mut c = Circuit::new(
        l.n_qubits(),
        [
            ("A", l.a.clone()),
            ("B", l.b.clone()),
            ("P", l.p.clone()),
            ("anc", vec![l.scratch]),
        ],
        roles,
    )?;
    c.extend(multiply_into(&l.p, &l.a, &l.b, l.scratch))?;
    for (i, &q) in l.p.iter().enumerate() {
        c.declare_output(q, QubitRole::output("P", i))?;
    }
    c.set_contract(Contract::new(move |input| {
        if input.read(&l.p) != 0 || input.get(l.scratch) {
            return None;
        }
        let mut out = input.clone();
        out.write(&l.p, input.read(&l.a) * input.read(&l.b));
        Some(out)
    }));
    Ok(c)
}

/// Qubit map of the divider: `A_0..A_{n-2}`, `B`, `A_{n-1}`, then `n−1`
/// zero ancillae. The quotient occupies `A_{n-1}` and the ancillae; the
/// remainder occupies `A_0..A_{n-2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividerLayout {
    pub n: usize,
    pub a: Vec<QubitId>,
    pub b: Vec<QubitId>,
    pub ancillae: Vec<QubitId>,
    pub q: Vec<QubitId>,
    pub r: Vec<QubitId>,
}

impl DividerLayout {
    pub fn new(n: usize) -> DividerLayout {
        let mut a = qs(0..n - 1);
        a.push(QubitId(2 * n - 1));
        let ancillae = qs(2 * n..3 * n - 1);
        let mut q = vec![QubitId(2 * n - 1)];
        q.extend(&ancillae);
        DividerLayout {
            n,
            r: qs(0..n - 1),
            b: qs(n - 1..2 * n - 1),
            a,
            ancillae,
            q,
        }
    }

    pub fn n_qubits(&self) -> usize {
        3 * self.n - 1
    }

    /// Remainder bits then quotient bits: the sliding partial-remainder register.
    fn work(&self) -> Vec<QubitId> {
        self.r.iter().chain(&self.q).copied().collect()
    }
}

/// `Q ← a div b`, `R ← a mod b` for `0 ≤ a, b < 2^(n−1)`, `b ≠ 0`; `B` restored.
///
/// The divisor's top qubit is 0 on the legal domain and doubles as the
/// carry-in ancilla of every addition.
pub fn build_divider(n: usize) -> Result<Circuit, ArithmeticError> {
    check_width(n, 2)?;
    let l = DividerLayout::new(n);
    let mut roles = BTreeMap::new();
    for i in 0..n {
        roles.insert(l.a[i], QubitRole::input("A", i));
        roles.insert(l.b[i], QubitRole::input("B", i));
    }
    for &q in &l.ancillae {
        roles.insert(q, QubitRole::AncillaZero);
    }
    let mut c = Circuit::new(
        l.n_qubits(),
        [
            ("A", l.a.clone()),
            ("B", l.b.clone()),
            ("anc", l.ancillae.clone()),
        ],
        roles,
    )?;
    let w = l.work();
    let operand = &l.b[..n - 1];
    let zero = l.b[n - 1];
    let window_add = |lo: usize| add_into(&w[lo..lo + n - 1], operand, zero, Some(w[lo + n - 1]));

    let top = n - 1;
    let mut sub = vec![not_all("NOT", &w[top..top + n])];
    sub.extend(window_add(top));
    sub.push(not_all("NOT", &w[top..top + n]));
    c.append(Block::new("Subtract", sub))?;
    c.append(Gate::x(w[2 * n - 2]))?;
    for i in 1..n {
        let lo = n - 1 - i;
        let ctrl = w[2 * n - 1 - i];
        let window = &w[lo..lo + n];
        let mut body = vec![cnot_fan("CNOT-fan", ctrl, window)];
        body.extend(window_add(lo));
        body.push(cnot_fan("CNOT-fan", ctrl, window));
        c.append(Block::new("AddSub", body))?;
        if i < n - 1 {
            c.append(Gate::x(w[lo + n - 1]))?;
        }
    }
    c.append(Block::new(
        "ConditionalAdd",
        cond_add_into(l.q[0], &l.r, operand, zero, None),
    ))?;
    c.append(Gate::x(l.q[0]))?;

    for (i, &q) in l.q.iter().enumerate() {
        c.declare_output(q, QubitRole::output("Q", i))?;
    }
    for (i, &q) in l.r.iter().enumerate() {
        c.declare_output(q, QubitRole::output("R", i))?;
    }
    c.set_contract(Contract::new(move |input| {
        if input.read(&l.ancillae) != 0 {
            return None;
        }
        let (q, r) = nonrestoring_reference(input.read(&l.a), input.read(&l.b), n).ok()?;
        let mut out = input.clone();
        out.write(&l.q, q);
        out.write(&l.r, r);
        Some(out)
    }));
    Ok(c)
}

/// Integer model of non-restoring division on an `n`-bit quotient register
/// concatenated above an `(n−1)`-bit remainder register; the remainder
/// register starts with the low bits of `a`. Returns `(Q, R)`.
pub fn nonrestoring_reference(a: u64, b: u64, n: usize) -> Result<(u64, u64), ArithmeticError> {
    check_width(n, 2)?;
    if n > 32 {
        return Err(ArithmeticError::Width { n, min: 2 });
    }
    if b == 0 {
        return Err(ArithmeticError::DivisionByZero);
    }
    for v in [a, b] {
        if v >= 1 << (n - 1) {
            return Err(ArithmeticError::Domain { value: v, bits: n });
        }
    }
    let win = mask(n);
    let mut r = a & mask(n - 1);
    let mut q = a >> (n - 1);
    q = q.wrapping_sub(b) & win;
    // Y = Q_{n-1-i}..Q_0 R_{n-2}..R_{n-1-i}; the full register is Q:R.
    for i in 1..n {
        q ^= 1 << (n - i);
        let full = (q << (n - 1)) | r;
        let shift = n - 1 - i;
        let y = (full >> shift) & win;
        let y = if (q >> (n - i)) & 1 == 0 {
            (y + b) & win
        } else {
            y.wrapping_sub(b) & win
        };
        let full = (full & !(win << shift)) | (y << shift);
        q = full >> (n - 1);
        r = full & mask(n - 1);
    }
    // The last window's sign sits in Q_0.
    if q & 1 == 1 {
        r = (r + b) & mask(n - 1);
    }
    q ^= 1;
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_classical, BasisState};

    fn q(i: usize) -> QubitId {
        QubitId(i)
    }

    fn run_block(n: usize, items: Vec<Item>, input: u64) -> u64 {
        let mut c = Circuit::plain(n).unwrap();
        c.extend(items).unwrap();
        run_classical(&c, &BasisState::from_index(n, input))
            .unwrap()
            .index()
    }

    #[test]
    fn maj_then_uma_is_identity() {
        let (c, b, a) = (q(0), q(1), q(2));
        for x in 0..8 {
            let items = vec![maj(c, b, a).into(), uma(c, b, a).into()];
            // MAJ;UMA leaves a, c and writes the sum bit into b.
            let out = run_block(3, items, x);
            let sum = ((x & 1) ^ (x >> 1 & 1) ^ (x >> 2 & 1)) << 1;
            assert_eq!(out, (x & 0b101) | sum);
        }
    }

    #[test]
    fn cmaj_matches_maj_when_enabled_and_cancels_when_disabled() {
        let (ctrl, c, b, a) = (q(3), q(0), q(1), q(2));
        for x in 0..8u64 {
            let on = x | 0b1000;
            assert_eq!(
                run_block(4, vec![cmaj(ctrl, c, b, a).into()], on),
                run_block(4, vec![maj(c, b, a).into()], on)
            );
            let items = vec![cmaj(ctrl, c, b, a).into(), cuma(ctrl, c, b, a).into()];
            assert_eq!(run_block(4, items, x), x);
        }
    }

    #[test]
    fn carry_block_validates() {
        assert_eq!(carry_block(CarryKind::Maj, &[q(0), q(1), q(2)]).unwrap().children.len(), 3);
        assert!(carry_block(CarryKind::Cmaj, &[q(0), q(1), q(2)]).is_err());
        assert!(carry_block(CarryKind::Uma, &[q(0), q(1), q(1)]).is_err());
    }

    #[test]
    fn small_examples() {
        let c = build_adder(2).unwrap();
        let l = AdderLayout::new(2);
        let mut input = BasisState::zeros(6);
        input.write(&l.a, 3);
        input.write(&l.b, 2);
        let out = run_classical(&c, &input).unwrap();
        assert_eq!(out.read(&l.b), 1);
        assert!(out.get(l.carry_out));

        let c = build_subtractor(2).unwrap();
        let mut input = BasisState::zeros(6);
        input.write(&l.a, 1);
        let out = run_classical(&c, &input).unwrap();
        assert_eq!(out.read(&l.result()), 0b111);
    }

    #[test]
    fn reference_examples() {
        assert_eq!(nonrestoring_reference(7, 2, 4).unwrap(), (3, 1));
        assert_eq!(nonrestoring_reference(5, 5, 4).unwrap(), (1, 0));
        assert_eq!(nonrestoring_reference(0, 3, 4).unwrap(), (0, 0));
        assert_eq!(
            nonrestoring_reference(1, 0, 4).unwrap_err(),
            ArithmeticError::DivisionByZero
        );
        assert!(nonrestoring_reference(8, 1, 4).is_err());
    }

    #[test]
    fn layouts_have_expected_sizes() {
        assert_eq!(build_adder(4).unwrap().n_qubits(), 10);
        assert_eq!(build_conditional_adder(4).unwrap().n_qubits(), 11);
        assert_eq!(build_multiplier(5).unwrap().n_qubits(), 21);
        assert_eq!(build_divider(4).unwrap().n_qubits(), 11);
        assert!(build_divider(1).is_err());
        assert!(build_adder(0).is_err());
    }
}
