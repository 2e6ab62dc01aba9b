//! Classical (basis-state) and dense statevector simulation.
//!
//! Basis index `b` has qubit `i` equal to bit `i` of `b`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind, Item, QubitId};

/// Default qubit limit for [`run_statevector`].
pub const STATEVECTOR_LIMIT: usize = 20;
/// Qubit limit for [`unitary_of`].
pub const UNITARY_LIMIT: usize = 12;

const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("gate `{0}` is not classical; it requires statevector simulation")]
    NonClassical(String),
    #[error("{n} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },
    #[error("state has {got} qubits but the circuit has {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("shot count must be positive")]
    NoShots,
    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: u64, n: usize },
}

/// A computational basis state; `bits[i]` is qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(n: usize) -> BasisState {
        BasisState {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> BasisState {
        BasisState { bits }
    }

    /// Low `n` bits of `index`; qubits beyond 64 are zero.
    pub fn from_index(n: usize, index: u64) -> BasisState {
        BasisState {
            bits: (0..n).map(|i| i < 64 && (index >> i) & 1 == 1).collect(),
        }
    }

    /// Basis index; only meaningful for states of at most 64 qubits.
    pub fn index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .take(64)
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, q: QubitId) -> bool {
        self.bits[q.0]
    }

    pub fn set(&mut self, q: QubitId, value: bool) {
        self.bits[q.0] = value;
    }

    /// Reads qubits as an integer, first qubit least significant.
    pub fn read(&self, qubits: &[QubitId]) -> u64 {
        qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, q)| acc | (u64::from(self.bits[q.0]) << i))
    }

    /// Writes the low `qubits.len()` bits of `value`, first qubit least significant.
    pub fn write(&mut self, qubits: &[QubitId], value: u64) {
        for (i, q) in qubits.iter().enumerate() {
            self.bits[q.0] = i < 64 && (value >> i) & 1 == 1;
        }
    }

    /// Parses a string of `0`/`1` characters; character `i` is qubit `i`.
    pub fn parse(s: &str) -> Option<BasisState> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .map(BasisState::from_bits)
    }

    fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        let ops = g.operands();
        match g.kind() {
            GateKind::X => self.bits[ops[0].0] ^= true,
            GateKind::Cnot => self.bits[ops[1].0] ^= self.bits[ops[0].0],
            GateKind::Toffoli => self.bits[ops[2].0] ^= self.bits[ops[0].0] & self.bits[ops[1].0],
            GateKind::Fredkin => {
                if self.bits[ops[0].0] {
                    self.bits.swap(ops[1].0, ops[2].0);
                }
            }
            _ => return Err(SimError::NonClassical(g.to_string())),
        }
        Ok(())
    }
}

/// Qubit 0 is printed first.
impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn run_items(items: &[Item], state: &mut BasisState) -> Result<(), SimError> {
    for item in items {
        match item {
            Item::Gate(g) => state.apply(g)?,
            Item::Block(b) => match &b.origin {
                // A lowered Toffoli/Fredkin acts as its origin gate on basis states.
                Some(g) if g.kind().is_classical() => state.apply(g)?,
                _ => run_items(&b.children, state)?,
            },
        }
    }
    Ok(())
}

/// Runs a circuit of X/CNOT/Toffoli/Fredkin gates on a basis state.
pub fn run_classical(circuit: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    if input.len() != circuit.n_qubits() {
        return Err(SimError::WidthMismatch {
            expected: circuit.n_qubits(),
            got: input.len(),
        });
    }
    let mut state = input.clone();
    run_items(circuit.body(), &mut state)?;
    Ok(state)
}

/// True if [`run_classical`] accepts the circuit.
pub fn is_classical(circuit: &Circuit) -> bool {
    fn check(items: &[Item]) -> bool {
        items.iter().all(|item| match item {
            Item::Gate(g) => g.kind().is_classical(),
            Item::Block(b) => match &b.origin {
                Some(g) if g.kind().is_classical() => true,
                _ => check(&b.children),
            },
        })
    }
    check(circuit.body())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> StateVector {
        StateVector::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: u64) -> StateVector {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index as usize] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Builds a state from raw amplitudes, which must be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<StateVector, SimError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let sv = StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = sv.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | bit];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Multiplies every amplitude whose index has all `mask` bits set.
    fn apply_phase(&mut self, mask: usize, phase: Complex64) {
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    /// Controlled bit flip of `target` when all `controls` bits are set.
    fn apply_flip(&mut self, controls: usize, target: usize) {
        let t = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & controls == controls && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
    }

    fn apply(&mut self, g: &Gate) {
        let ops: Vec<usize> = g.operands().iter().map(|q| q.0).collect();
        let phase = |angle: f64| Complex64::from_polar(1.0, angle);
        match g.kind() {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_single(ops[0], [[h, h], [h, -h]]);
            }
            GateKind::T => self.apply_phase(1 << ops[0], phase(PI / 4.0)),
            GateKind::Tdg => self.apply_phase(1 << ops[0], phase(-PI / 4.0)),
            GateKind::S => self.apply_phase(1 << ops[0], Complex64::i()),
            GateKind::Sdg => self.apply_phase(1 << ops[0], -Complex64::i()),
            GateKind::X => self.apply_flip(0, ops[0]),
            GateKind::Cnot => self.apply_flip(1 << ops[0], ops[1]),
            GateKind::ControlledPhase { k, dagger } => {
                let angle = PI / f64::powi(2.0, k as i32);
                let angle = if dagger { -angle } else { angle };
                self.apply_phase((1 << ops[0]) | (1 << ops[1]), phase(angle));
            }
            GateKind::Toffoli => self.apply_flip((1 << ops[0]) | (1 << ops[1]), ops[2]),
            GateKind::Fredkin => {
                let (c, a, b) = (1usize << ops[0], 1usize << ops[1], 1usize << ops[2]);
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & a != 0 && i & b == 0 {
                        self.amplitudes.swap(i, (i & !a) | b);
                    }
                }
            }
        }
    }
}

/// Applies every gate of `circuit` (blocks expanded) to `initial`.
pub fn run_statevector(circuit: &Circuit, initial: &StateVector) -> Result<StateVector, SimError> {
    run_statevector_with_limit(circuit, initial, STATEVECTOR_LIMIT)
}

pub fn run_statevector_with_limit(
    circuit: &Circuit,
    initial: &StateVector,
    limit: usize,
) -> Result<StateVector, SimError> {
    let n = circuit.n_qubits();
    if n > limit {
        return Err(SimError::TooManyQubits { n, limit });
    }
    if initial.n_qubits() != n {
        return Err(SimError::WidthMismatch {
            expected: n,
            got: initial.n_qubits(),
        });
    }
    let mut state = initial.clone();
    for g in circuit.gates() {
        state.apply(g);
    }
    Ok(state)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Matrix {
        Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Matrix {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Matrix { dim, data }
    }

    /// Permutation matrix sending basis `b` to basis `perm(b)`.
    pub fn permutation(dim: usize, perm: impl Fn(usize) -> usize) -> Matrix {
        let mut m = Matrix::zeros(dim);
        for col in 0..dim {
            m.set(perm(col), col, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    /// Largest elementwise modulus of the difference.
    pub fn max_deviation(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Like [`Matrix::max_deviation`] after rotating `self` by the global
    /// phase that aligns its first non-negligible entry with `other`'s.
    pub fn max_deviation_up_to_phase(&self, other: &Matrix) -> f64 {
        let phase = self
            .data
            .iter()
            .zip(&other.data)
            .find(|(a, b)| a.norm() > 1e-9 && b.norm() > 1e-9)
            .map(|(a, b)| {
                let r = b / a;
                r / r.norm()
            })
            .unwrap_or(Complex64::new(1.0, 0.0));
        let rotated = Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * phase).collect(),
        };
        rotated.max_deviation(other)
    }

    /// Deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint().mul(self).max_deviation(&Matrix::identity(self.dim))
    }
}

/// The circuit's unitary; column `b` is the image of basis state `b`.
pub fn unitary_of(circuit: &Circuit) -> Result<Matrix, SimError> {
    let n = circuit.n_qubits();
    if n > UNITARY_LIMIT {
        return Err(SimError::TooManyQubits {
            n,
            limit: UNITARY_LIMIT,
        });
    }
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim);
    for col in 0..dim {
        let out = run_statevector(circuit, &StateVector::basis(n, col as u64))?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            m.set(row, col, *a);
        }
    }
    Ok(m)
}

/// Exact Born-rule distribution over basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probability(&self, index: usize) -> f64 {
        self.probabilities[index]
    }
}

/// Exact outcome probabilities plus a histogram of `shots` samples.
///
/// Sampling draws `u ∈ [0,1)` from ChaCha20 seeded with `seed` and returns
/// the first index whose cumulative probability exceeds `u`.
pub fn measure(
    state: &StateVector,
    shots: usize,
    seed: u64,
) -> Result<(OutcomeDistribution, BTreeMap<usize, usize>), SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(SimError::NotNormalized(norm));
    }
    let probabilities = state.probabilities();
    let mut cdf = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for p in &probabilities {
        acc += p;
        cdf.push(acc);
    }
    let last_nonzero = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut histogram = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        *histogram.entry(idx).or_insert(0) += 1;
    }
    Ok((OutcomeDistribution { probabilities }, histogram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::QubitId as Q;

    fn circuit(n: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::plain(n).unwrap();
        c.extend(gates.iter().cloned()).unwrap();
        c
    }

    #[test]
    fn classical_truth_tables() {
        let c = circuit(2, &[Gate::cnot(Q(0), Q(1))]);
        let out = run_classical(&c, &BasisState::parse("10").unwrap()).unwrap();
        assert_eq!(out.to_string(), "11");
        let c = circuit(3, &[Gate::toffoli(Q(0), Q(1), Q(2))]);
        let out = run_classical(&c, &BasisState::parse("110").unwrap()).unwrap();
        assert_eq!(out.to_string(), "111");
        let c = circuit(3, &[Gate::fredkin(Q(0), Q(1), Q(2))]);
        let out = run_classical(&c, &BasisState::parse("101").unwrap()).unwrap();
        assert_eq!(out.to_string(), "110");
        let c = circuit(3, &[]);
        let input = BasisState::parse("101").unwrap();
        assert_eq!(run_classical(&c, &input).unwrap(), input);
    }

    #[test]
    fn classical_rejects_phase_gates() {
        let c = circuit(1, &[Gate::t(Q(0))]);
        assert!(matches!(
            run_classical(&c, &BasisState::zeros(1)),
            Err(SimError::NonClassical(_))
        ));
    }

    #[test]
    fn hadamard_and_t() {
        let c = circuit(1, &[Gate::h(Q(0))]);
        let out = run_statevector(&c, &StateVector::zero(1)).unwrap();
        for a in out.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        }
        let c = circuit(1, &[Gate::t(Q(0))]);
        let out = run_statevector(&c, &StateVector::basis(1, 1)).unwrap();
        assert!((out.amplitudes()[1] - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn unitary_of_x_and_cnot() {
        let x = unitary_of(&circuit(1, &[Gate::x(Q(0))])).unwrap();
        assert_eq!(x, Matrix::permutation(2, |b| b ^ 1));
        // CNOT with control q0: basis 1 (q0=1,q1=0) ↔ basis 3.
        let cx = unitary_of(&circuit(2, &[Gate::cnot(Q(0), Q(1))])).unwrap();
        let expected = Matrix::permutation(4, |b| if b & 1 == 1 { b ^ 2 } else { b });
        assert_eq!(cx, expected);
        let ssdg = unitary_of(&circuit(1, &[Gate::s(Q(0)), Gate::sdg(Q(0))])).unwrap();
        assert!(ssdg.max_deviation(&Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn fredkin_statevector_swaps() {
        let c = circuit(3, &[Gate::fredkin(Q(0), Q(1), Q(2))]);
        let out = run_statevector(&c, &StateVector::basis(3, 0b011)).unwrap();
        assert!((out.amplitudes()[0b101].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_distribution_and_determinism() {
        let (dist, hist) = measure(&StateVector::zero(2), 50, 7).unwrap();
        assert_eq!(dist.probability(0), 1.0);
        assert_eq!(hist.get(&0), Some(&50));

        let c = circuit(1, &[Gate::h(Q(0))]);
        let s = run_statevector(&c, &StateVector::zero(1)).unwrap();
        let (dist, h1) = measure(&s, 1000, 42).unwrap();
        assert!((dist.probability(0) - 0.5).abs() < 1e-12);
        let (_, h2) = measure(&s, 1000, 42).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.values().sum::<usize>(), 1000);
    }

    #[test]
    fn measure_rejects_bad_states() {
        let bad = StateVector {
            n_qubits: 1,
            amplitudes: vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        };
        assert!(matches!(measure(&bad, 1, 0), Err(SimError::NotNormalized(_))));
        assert!(matches!(
            measure(&StateVector::zero(1), 0, 0),
            Err(SimError::NoShots)
        ));
    }

    #[test]
    fn limit_enforced() {
        let c = Circuit::plain(3).unwrap();
        assert!(matches!(
            run_statevector_with_limit(&c, &StateVector::zero(3), 2),
            Err(SimError::TooManyQubits { n: 3, limit: 2 })
        ));
    }

    #[test]
    fn register_read_write() {
        let mut s = BasisState::zeros(4);
        s.write(&[Q(3), Q(1)], 0b10);
        assert_eq!(s.to_string(), "0100");
        assert_eq!(s.read(&[Q(3), Q(1)]), 2);
        assert_eq!(BasisState::from_index(4, 5).index(), 5);
    }
}
