//! Serialization: an OpenQASM 2.0 subset, a JSON role sidecar, and plain
//! (P2) PGM images.
//!
//! Register names are emitted verbatim and may start with an uppercase
//! letter; the parser accepts `[A-Za-z_][A-Za-z0-9_]*`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ir::{Circuit, Gate, GateKind, IrError, QubitId, QubitRole};
use crate::rotation::{ImageGrid, RotationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported statement `{text}`")]
    Unsupported { line: usize, text: String },
    #[error("role sidecar: {0}")]
    Roles(String),
    #[error("PGM: {0}")]
    Pgm(String),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

/// Name for qubits that belong to no register.
const LOOSE_REGISTER: &str = "loose";

fn sanitize(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !out.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        out.insert(0, 'r');
    }
    out
}

/// Registers in emission order, with loose qubits gathered at the end.
fn emitted_registers(circuit: &Circuit) -> Vec<(String, Vec<QubitId>)> {
    let mut regs: Vec<(String, Vec<QubitId>)> = circuit
        .registers()
        .iter()
        .filter(|(_, qs)| !qs.is_empty())
        .map(|(name, qs)| (sanitize(name), qs.clone()))
        .collect();
    let mut owned = vec![false; circuit.n_qubits()];
    for (_, qs) in &regs {
        for q in qs {
            owned[q.0] = true;
        }
    }
    let loose: Vec<QubitId> = (0..circuit.n_qubits())
        .filter(|&i| !owned[i])
        .map(QubitId)
        .collect();
    if !loose.is_empty() {
        let mut name = LOOSE_REGISTER.to_string();
        while regs.iter().any(|(n, _)| *n == name) {
            name.push('_');
        }
        regs.push((name, loose));
    }
    regs
}

fn phase_param(k: u32, dagger: bool) -> String {
    let sign = if dagger { "-" } else { "" };
    format!("{sign}pi/{}", 1u64 << k)
}

/// Emits the flattened circuit, one gate per line.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let regs = emitted_registers(circuit);
    let mut label = vec![String::new(); circuit.n_qubits()];
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for (name, qs) in &regs {
        let _ = writeln!(out, "qreg {name}[{}];", qs.len());
        for (i, q) in qs.iter().enumerate() {
            label[q.0] = format!("{name}[{i}]");
        }
    }
    for g in circuit.gates() {
        let name = match g.kind() {
            GateKind::H => "h".to_string(),
            GateKind::T => "t".to_string(),
            GateKind::Tdg => "tdg".to_string(),
            GateKind::S => "s".to_string(),
            GateKind::Sdg => "sdg".to_string(),
            GateKind::X => "x".to_string(),
            GateKind::Cnot => "cx".to_string(),
            GateKind::ControlledPhase { k, dagger } => format!("cu1({})", phase_param(k, dagger)),
            GateKind::Toffoli => "ccx".to_string(),
            GateKind::Fredkin => "cswap".to_string(),
        };
        let args: Vec<&str> = g.operands().iter().map(|q| label[q.0].as_str()).collect();
        let _ = writeln!(out, "{name} {};", args.join(","));
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `name[index]`.
fn parse_ref(s: &str, line: usize) -> Result<(&str, usize), IoError> {
    let s = s.trim();
    let open = s
        .find('[')
        .ok_or_else(|| syntax(line, format!("expected `reg[index]`, found `{s}`")))?;
    let name = s[..open].trim();
    let index = s[open + 1..]
        .strip_suffix(']')
        .and_then(|i| i.trim().parse::<usize>().ok())
        .ok_or_else(|| syntax(line, format!("bad index in `{s}`")))?;
    if !is_ident(name) {
        return Err(syntax(line, format!("bad register name `{name}`")));
    }
    Ok((name, index))
}

fn parse_phase(param: &str, line: usize) -> Result<GateKind, IoError> {
    let p: String = param.chars().filter(|c| !c.is_whitespace()).collect();
    let (dagger, rest) = match p.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, p.as_str()),
    };
    let denom = rest
        .strip_prefix("pi/")
        .and_then(|d| d.parse::<u64>().ok())
        .filter(|d| d.is_power_of_two() && *d >= 2)
        .ok_or_else(|| syntax(line, format!("cu1 angle must be ±pi/2^k with k ≥ 1, got `{param}`")))?;
    Ok(GateKind::ControlledPhase {
        k: denom.trailing_zeros(),
        dagger,
    })
}

/// A parsed gate line: source line, kind, `(register, index)` operands.
type GateLine = (usize, GateKind, Vec<(String, usize)>);

/// Parses the emitted subset. Qubits are numbered register by register in
/// declaration order; every qubit becomes a primary input of its register.
pub fn parse_qasm(text: &str) -> Result<Circuit, IoError> {
    let mut registers: IndexMap<String, (usize, usize)> = IndexMap::new();
    let mut n_qubits = 0usize;
    let mut gates: Vec<GateLine> = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        if !code.ends_with(';') {
            return Err(syntax(line, "missing `;`"));
        }
        for stmt in code.split_terminator(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(version) = stmt.strip_prefix("OPENQASM") {
                if version.trim() != "2.0" {
                    return Err(syntax(line, format!("unsupported version `{}`", version.trim())));
                }
                saw_header = true;
                continue;
            }
            if !saw_header {
                return Err(syntax(line, "expected `OPENQASM 2.0;` header"));
            }
            if stmt.starts_with("include") {
                continue;
            }
            if let Some(decl) = stmt.strip_prefix("qreg ") {
                let (name, size) = parse_ref(decl, line)?;
                if registers.contains_key(name) {
                    return Err(syntax(line, format!("register `{name}` declared twice")));
                }
                registers.insert(name.to_string(), (n_qubits, size));
                n_qubits += size;
                continue;
            }
            let (head, args) = match stmt.find(|c: char| c.is_whitespace()) {
                Some(pos) if !stmt[..pos].contains('(') || stmt[..pos].contains(')') => {
                    (stmt[..pos].trim(), stmt[pos..].trim())
                }
                _ => match stmt.find(')') {
                    Some(close) => (stmt[..=close].trim(), stmt[close + 1..].trim()),
                    None => return Err(syntax(line, format!("cannot parse `{stmt}`"))),
                },
            };
            let kind = match head {
                "h" => GateKind::H,
                "t" => GateKind::T,
                "tdg" => GateKind::Tdg,
                "s" => GateKind::S,
                "sdg" => GateKind::Sdg,
                "x" => GateKind::X,
                "cx" | "CX" => GateKind::Cnot,
                "ccx" => GateKind::Toffoli,
                "cswap" => GateKind::Fredkin,
                h if h.starts_with("cu1(") && h.ends_with(')') => parse_phase(&h[4..h.len() - 1], line)?,
                _ => {
                    return Err(IoError::Unsupported {
                        line,
                        text: stmt.to_string(),
                    })
                }
            };
            let operands = args
                .split(',')
                .map(|a| parse_ref(a, line).map(|(n, i)| (n.to_string(), i)))
                .collect::<Result<Vec<_>, _>>()?;
            gates.push((line, kind, operands));
        }
    }
    if !saw_header {
        return Err(syntax(1, "expected `OPENQASM 2.0;` header"));
    }
    if n_qubits == 0 {
        return Err(syntax(1, "no qubits declared"));
    }

    let reg_lists: Vec<(String, Vec<QubitId>)> = registers
        .iter()
        .map(|(name, &(start, size))| (name.clone(), (start..start + size).map(QubitId).collect()))
        .collect();
    let mut roles = BTreeMap::new();
    for (name, qs) in &reg_lists {
        for (bit, &q) in qs.iter().enumerate() {
            roles.insert(q, QubitRole::input(name, bit));
        }
    }
    let mut circuit = Circuit::new(n_qubits, reg_lists, roles)?;
    for (line, kind, operands) in gates {
        let qubits = operands
            .iter()
            .map(|(name, i)| match registers.get(name) {
                Some(&(start, size)) if *i < size => Ok(QubitId(start + i)),
                Some(_) => Err(syntax(line, format!("index {i} out of range for `{name}`"))),
                None => Err(syntax(line, format!("unknown register `{name}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gate = Gate::new(kind, qubits).map_err(|e| syntax(line, e.to_string()))?;
        circuit.append(gate)?;
    }
    Ok(circuit)
}

/// Roles of every qubit, indexed in the numbering [`parse_qasm`] produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleSidecar {
    pub input_roles: Vec<QubitRole>,
    #[serde(default)]
    pub declared_outputs: BTreeMap<usize, QubitRole>,
}

impl RoleSidecar {
    pub fn of(circuit: &Circuit) -> RoleSidecar {
        let c = circuit.register_major();
        RoleSidecar {
            input_roles: c.input_roles().to_vec(),
            declared_outputs: c
                .declared_outputs()
                .iter()
                .map(|(q, r)| (q.0, r.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("roles serialize")
    }

    pub fn from_json(text: &str) -> Result<RoleSidecar, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Roles(e.to_string()))
    }

    /// A copy of `circuit` carrying these roles.
    pub fn apply(&self, circuit: &Circuit) -> Result<Circuit, IoError> {
        let n = circuit.n_qubits();
        if self.input_roles.len() != n {
            return Err(IoError::Roles(format!(
                "{} roles for {n} qubits",
                self.input_roles.len()
            )));
        }
        let roles = self
            .input_roles
            .iter()
            .enumerate()
            .map(|(i, r)| (QubitId(i), r.clone()))
            .collect();
        let registers: Vec<(String, Vec<QubitId>)> = circuit
            .registers()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut out = Circuit::new(n, registers, roles)?;
        out.extend(circuit.body().iter().cloned())?;
        for (&q, role) in &self.declared_outputs {
            out.declare_output(QubitId(q), role.clone())?;
        }
        Ok(out)
    }
}

/// Writes a plain PGM; `maxval` is at least 255.
pub fn write_pgm(grid: &ImageGrid) -> String {
    let side = grid.side();
    let maxval = grid.pixels().iter().copied().max().unwrap_or(0).max(255);
    let mut out = format!("P2\n{side} {side}\n{maxval}\n");
    for row in grid.pixels().chunks(side) {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a plain PGM with a square, power-of-two side.
pub fn read_pgm(text: &str) -> Result<ImageGrid, IoError> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P2") {
        return Err(IoError::Pgm("expected `P2` magic".into()));
    }
    let mut number = |what: &str| -> Result<u32, IoError> {
        tokens
            .next()
            .ok_or_else(|| IoError::Pgm(format!("missing {what}")))?
            .parse::<u32>()
            .map_err(|e| IoError::Pgm(format!("bad {what}: {e}")))
    };
    let width = number("width")? as usize;
    let height = number("height")? as usize;
    if width != height {
        return Err(IoError::Pgm(format!("image is {width}x{height}, expected square")));
    }
    let maxval = number("maxval")?;
    let pixels = (0..width * height)
        .map(|_| {
            let v = number("pixel")?;
            if v > maxval {
                Err(IoError::Pgm(format!("pixel {v} exceeds maxval {maxval}")))
            } else {
                Ok(v)
            }
        })
        .collect::<Result<Vec<u32>, IoError>>()?;
    Ok(ImageGrid::new(width, pixels)?)
}
