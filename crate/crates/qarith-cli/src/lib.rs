//! The `qarith` command line: build, lower, measure, simulate, verify and
//! rotate. [`run`] takes argv and writers so tests can drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use qarith::arithmetic::{
    build_adder, build_addsub, build_conditional_adder, build_divider, build_multiplier,
    build_subtractor, ArithmeticError,
};
use qarith::io::{emit_qasm, parse_qasm, read_pgm, write_pgm, IoError, RoleSidecar};
use qarith::lowering::{lower, LoweringError};
use qarith::metrics::{nisq_check, resource_report, DepthConvention, FidelityConvention, MetricsError};
use qarith::qft::{build_qft, QftError};
use qarith::rotation::{build_shear_circuit, rotate_image, Axis, ImageGrid, RotationError, ShearCase};
use qarith::sim::{is_classical, measure, run_classical, run_statevector, SimError, StateVector};
use qarith::ir::IrError;
use qarith::{BasisState, Circuit, Gate, QubitId};

pub mod verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Lowering(#[from] LoweringError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Qft(#[from] QftError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

#[derive(Debug, Parser)]
#[command(name = "qarith", version, about = "Reversible arithmetic and QFT circuits over Clifford+T")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a family's circuit as OpenQASM (plus a roles sidecar with --out).
    Build {
        family: Family,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resource report of a family or QASM file, after lowering.
    Metrics {
        /// A family name or a QASM file.
        target: String,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value = "scheduled")]
        convention: DepthConvention,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Roles sidecar for a QASM file (default: `<file>.roles.json` if present).
        #[arg(long)]
        roles: Option<PathBuf>,
        /// Worst-case failure rate to compare the success estimate against.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "paper")]
        fidelity_convention: FidelityConvention,
    },
    /// Run a QASM file on a basis input or a state vector.
    Simulate {
        file: PathBuf,
        /// Basis input, character i is qubit i.
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        input: Option<String>,
        /// JSON array of `[re, im]` amplitudes.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustively check a family against its integer oracle.
    Verify {
        family: Family,
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Replace Toffoli and Fredkin gates with Clifford+T networks.
    Lower {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotate a square PGM image with three fixed-point shears.
    Rotate {
        #[arg(long)]
        size: usize,
        /// Angle in degrees.
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 8)]
        frac: u32,
        /// Input image; a gradient test pattern when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Adder,
    Subtractor,
    Addsub,
    CondAdder,
    Multiplier,
    Divider,
    Qft,
    Shear,
    Toffoli,
    Fredkin,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Adder => "adder",
            Family::Subtractor => "subtractor",
            Family::Addsub => "addsub",
            Family::CondAdder => "cond-adder",
            Family::Multiplier => "multiplier",
            Family::Divider => "divider",
            Family::Qft => "qft",
            Family::Shear => "shear",
            Family::Toffoli => "toffoli",
            Family::Fredkin => "fredkin",
        }
    }

    fn sized(self) -> bool {
        !matches!(self, Family::Toffoli | Family::Fredkin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Le,
    Gt,
}

/// Width and the shear-only knobs.
#[derive(Debug, Clone, Args)]
pub struct SizeArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Shear: fraction bits of the constant.
    #[arg(long, default_value_t = 2)]
    pub frac: usize,
    #[arg(long, value_enum, default_value_t = AxisArg::Horizontal)]
    pub axis: AxisArg,
    /// Shear: side of the reference the circuit handles.
    #[arg(long = "case", value_enum, default_value_t = CaseArg::Le)]
    pub case: CaseArg,
}

impl SizeArgs {
    pub fn with_n(n: usize) -> SizeArgs {
        SizeArgs {
            n: Some(n),
            frac: 2,
            axis: AxisArg::Horizontal,
            case: CaseArg::Le,
        }
    }

    fn width(&self, family: Family) -> Result<usize, CliError> {
        match (self.n, family.sized()) {
            (Some(n), _) => Ok(n),
            (None, false) => Ok(3),
            (None, true) => Err(CliError::Usage(format!("{} needs --n", family.name()))),
        }
    }
}

/// The unlowered circuit of `family`.
pub fn build_family(family: Family, size: &SizeArgs) -> Result<Circuit, CliError> {
    let n = size.width(family)?;
    Ok(match family {
        Family::Adder => build_adder(n)?,
        Family::Subtractor => build_subtractor(n)?,
        Family::Addsub => build_addsub(n)?,
        Family::CondAdder => build_conditional_adder(n)?,
        Family::Multiplier => build_multiplier(n)?,
        Family::Divider => build_divider(n)?,
        Family::Qft => build_qft(n)?,
        Family::Shear => {
            let axis = match size.axis {
                AxisArg::Horizontal => Axis::Horizontal,
                AxisArg::Vertical => Axis::Vertical,
            };
            let case = match size.case {
                CaseArg::Le => ShearCase::LeRef,
                CaseArg::Gt => ShearCase::GtRef,
            };
            build_shear_circuit(axis, case, n, size.frac)?.0
        }
        Family::Toffoli | Family::Fredkin => {
            let mut c = Circuit::plain(3)?;
            let (a, b, t) = (QubitId(0), QubitId(1), QubitId(2));
            c.append(if family == Family::Toffoli {
                Gate::toffoli(a, b, t)
            } else {
                Gate::fredkin(a, b, t)
            })?;
            c
        }
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 on success, 1 when `verify` finds a mismatch, 2 otherwise.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8, CliError> {
    match command {
        Command::Build { family, size, out: path } => {
            let c = build_family(family, &size)?;
            let qasm = emit_qasm(&c);
            match path {
                Some(p) => {
                    write_file(&p, &qasm)?;
                    write_file(&sidecar_path(&p), &RoleSidecar::of(&c).to_json())?;
                }
                None => out.write_all(qasm.as_bytes())?,
            }
        }
        Command::Metrics {
            target,
            size,
            convention,
            format,
            roles,
            epsilon,
            fidelity_convention,
        } => {
            let (label, n, circuit) = match Family::from_str(&target, true) {
                Ok(family) => (family.name().to_string(), size.width(family).ok(), build_family(family, &size)?),
                Err(_) => {
                    let path = PathBuf::from(&target);
                    (target.clone(), None, load_circuit(&path, roles.as_deref())?)
                }
            };
            let lowered = lower(&circuit)?;
            let report = resource_report(&lowered, convention)?;
            let verdict = epsilon
                .map(|e| nisq_check(report.fidelity_a, e, fidelity_convention))
                .transpose()?;
            let mut json = match serde_json::to_value(&report).expect("report serializes") {
                serde_json::Value::Object(m) => m,
                _ => unreachable!("report is a struct"),
            };
            json.insert("family".into(), label.into());
            json.insert("n".into(), n.into());
            json.insert("convention".into(), convention.name().into());
            if let Some(v) = verdict {
                json.insert("nisq_verdict".into(), v.to_string().into());
            }
            match format {
                Format::Json => {
                    let text = serde_json::to_string_pretty(&json).expect("json");
                    writeln!(out, "{text}")?;
                }
                Format::Table => {
                    for (k, v) in &json {
                        let v = match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        writeln!(out, "{k:<14} {v}")?;
                    }
                }
            }
        }
        Command::Simulate {
            file,
            input,
            state,
            shots,
            seed,
        } => simulate(&load_circuit(&file, None)?, input, state, shots, seed, out)?,
        Command::Verify { family, size } => {
            let n = size.width(family)?;
            let report = verify::verify(family, &size)?;
            writeln!(
                out,
                "verify {} n={n}: {} cases, {} failures",
                family.name(),
                report.cases,
                report.failures.len()
            )?;
            for f in report.failures.iter().take(10) {
                writeln!(out, "  {f}")?;
            }
            if !report.failures.is_empty() {
                return Ok(1);
            }
        }
        Command::Lower { file, out: path } => {
            let lowered = lower(&load_circuit(&file, None)?)?;
            let qasm = emit_qasm(&lowered);
            match path {
                Some(p) => write_file(&p, &qasm)?,
                None => out.write_all(qasm.as_bytes())?,
            }
        }
        Command::Rotate {
            size,
            theta,
            frac,
            input,
            out: path,
        } => {
            let grid = match input {
                Some(p) => {
                    let g = read_pgm(&read_file(&p)?)?;
                    if g.side() != size {
                        return Err(CliError::Usage(format!(
                            "image is {0}×{0}, --size says {size}",
                            g.side()
                        )));
                    }
                    g
                }
                None => test_pattern(size)?,
            };
            let rotated = rotate_image(&grid, theta.to_radians(), frac)?;
            let pgm = write_pgm(&rotated);
            match path {
                Some(p) => write_file(&p, &pgm)?,
                None => out.write_all(pgm.as_bytes())?,
            }
        }
    }
    Ok(0)
}

/// Where `build --out` puts the roles of `path`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".roles.json");
    PathBuf::from(s)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn load_circuit(path: &Path, roles: Option<&Path>) -> Result<Circuit, CliError> {
    let c = parse_qasm(&read_file(path)?)?;
    let default = sidecar_path(path);
    let roles = match roles {
        Some(r) => Some(r.to_owned()),
        None => default.exists().then_some(default),
    };
    match roles {
        Some(r) => Ok(RoleSidecar::from_json(&read_file(&r)?)?.apply(&c)?),
        None => Ok(c),
    }
}

fn bits(index: usize, n: usize) -> String {
    (0..n).map(|i| if index >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn simulate(
    c: &Circuit,
    input: Option<String>,
    state: Option<PathBuf>,
    shots: Option<usize>,
    seed: u64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let n = c.n_qubits();
    let basis = match &input {
        Some(s) => {
            let b = BasisState::parse(s)
                .filter(|b| b.len() == n)
                .ok_or_else(|| CliError::Usage(format!("--input needs {n} characters of 0/1")))?;
            Some(b)
        }
        None => None,
    };
    if let (Some(b), None) = (&basis, shots) {
        if is_classical(c) {
            writeln!(out, "{}", run_classical(c, b)?)?;
            return Ok(());
        }
    }
    let initial = match (basis, state) {
        (Some(b), _) => StateVector::basis(n, b.index()),
        (None, Some(p)) => {
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&read_file(&p)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            StateVector::from_amplitudes(pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())?
        }
        (None, None) => return Err(CliError::Usage("give --input or --state".into())),
    };
    if initial.n_qubits() != n {
        return Err(CliError::Usage(format!(
            "state has {} qubits, circuit {n}",
            initial.n_qubits()
        )));
    }
    let result = run_statevector(c, &initial)?;
    match shots {
        Some(k) => {
            let (_, hist) = measure(&result, k, seed)?;
            let counts: serde_json::Map<String, serde_json::Value> =
                hist.iter().map(|(i, c)| (bits(*i, n), (*c).into())).collect();
            let json = serde_json::json!({ "shots": k, "seed": seed, "counts": counts });
            writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("json"))?;
        }
        None => {
            for (i, a) in result.amplitudes().iter().enumerate() {
                if a.norm_sqr() > 1e-24 {
                    writeln!(out, "{} {:+.12} {:+.12} {:.12}", bits(i, n), a.re, a.im, a.norm_sqr())?;
                }
            }
        }
    }
    Ok(())
}

fn test_pattern(side: usize) -> Result<ImageGrid, CliError> {
    let top = side.saturating_sub(1).max(1);
    let pixels = (0..side * side)
        .map(|i| {
            let (x, y) = (i % side, i / side);
            let v = if (x / 4 + y / 4) % 2 == 0 { x * 255 / top } else { 255 - y * 255 / top };
            v as u32
        })
        .collect();
    Ok(ImageGrid::new(side, pixels)?)
}
