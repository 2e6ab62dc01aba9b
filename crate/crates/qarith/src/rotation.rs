//! Three-shear image rotation on integer pixel coordinates: fixed-point
//! functional models and reversible shear circuits.
//!
//! With `α = tan(θ/2)` and `β = sin θ`, the composition horizontal ∘
//! vertical ∘ horizontal maps the offset `(dx, dy)` from the centroid to
//! `(cos θ·dx + sin θ·dy, −sin θ·dx + cos θ·dy)` before rounding. Coordinates
//! are `n`-bit and wrap modulo `2^n`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::arithmetic::{add_into, multiply_into, sub_from};
use crate::ir::{Block, Circuit, Contract, Gate, IrError, Item, QubitId, QubitRole};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RotationError {
    #[error("fraction bits must be in 1..=32, got {0}")]
    FracBits(u32),
    #[error("coordinate bits must be in 1..=24, got {0}")]
    CoordBits(u32),
    #[error("angle {0} rad outside (-π/2, π/2)")]
    Angle(f64),
    #[error("constant {name} = {value} does not fit in {frac_bits} fraction bits")]
    Overflow {
        name: &'static str,
        value: f64,
        frac_bits: u32,
    },
    #[error("coordinate {value} does not fit in {bits} bits")]
    Coordinate { value: u64, bits: u32 },
    #[error("grid side {0} is not a power of two ≥ 2")]
    GridSize(usize),
    #[error("grid has {got} pixels, expected {expected}")]
    GridData { expected: usize, got: usize },
    #[error("rotation mapped two pixels to ({0}, {1})")]
    Collision(u64, u64),
    #[error(transparent)]
    Ir(#[from] IrError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointFormat {
    pub frac_bits: u32,
    pub coord_bits: u32,
}

impl FixedPointFormat {
    pub fn new(coord_bits: u32, frac_bits: u32) -> Result<FixedPointFormat, RotationError> {
        if !(1..=32).contains(&frac_bits) {
            return Err(RotationError::FracBits(frac_bits));
        }
        if !(1..=24).contains(&coord_bits) {
            return Err(RotationError::CoordBits(coord_bits));
        }
        Ok(FixedPointFormat {
            frac_bits,
            coord_bits,
        })
    }

    fn coord_mask(&self) -> u64 {
        (1u64 << self.coord_bits) - 1
    }

    /// Nearest unsigned `f`-bit fraction to `value ∈ [0, 1)`.
    pub fn quantize(&self, name: &'static str, value: f64) -> Result<u64, RotationError> {
        let scaled = (value * 2f64.powi(self.frac_bits as i32)).round();
        if !(0.0..(1u64 << self.frac_bits) as f64).contains(&scaled) {
            return Err(RotationError::Overflow {
                name,
                value,
                frac_bits: self.frac_bits,
            });
        }
        Ok(scaled as u64)
    }
}

/// Round half up: add `2^{f−1}` and drop the `f` fraction bits.
pub fn round_ip(value: u64, frac_bits: u32) -> u64 {
    (value + (1 << (frac_bits - 1))) >> frac_bits
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelCoord {
    pub x: u64,
    pub y: u64,
}

impl PixelCoord {
    pub fn new(x: u64, y: u64) -> PixelCoord {
        PixelCoord { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Shifts `x` by an amount proportional to `y − y_ref`.
    Horizontal,
    /// Shifts `y` by an amount proportional to `x − x_ref`.
    Vertical,
}

/// Which side of the centroid a shear circuit handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearCase {
    /// Distance coordinate at or below the reference.
    LeRef,
    /// Distance coordinate above the reference.
    GtRef,
}

/// Shear constants as magnitudes in `f`-bit fixed point; `negative` flips
/// the direction of both shears (rotation by `−|θ|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearParams {
    pub theta: f64,
    pub alpha: u64,
    pub beta: u64,
    pub negative: bool,
    pub x_ref: u64,
    pub y_ref: u64,
    pub format: FixedPointFormat,
}

impl ShearParams {
    pub fn new(
        theta: f64,
        format: FixedPointFormat,
        x_ref: u64,
        y_ref: u64,
    ) -> Result<ShearParams, RotationError> {
        if theta.is_nan() || theta.abs() >= FRAC_PI_2 {
            return Err(RotationError::Angle(theta));
        }
        for value in [x_ref, y_ref] {
            if value > format.coord_mask() {
                return Err(RotationError::Coordinate {
                    value,
                    bits: format.coord_bits,
                });
            }
        }
        let mag = theta.abs();
        Ok(ShearParams {
            theta,
            alpha: format.quantize("alpha", (mag / 2.0).tan())?,
            beta: format.quantize("beta", mag.sin())?,
            negative: theta < 0.0,
            x_ref,
            y_ref,
            format,
        })
    }
}

fn shift(coord: u64, reference: u64, constant: u64, frac_bits: u32) -> (bool, u64) {
    let above = coord > reference;
    let distance = coord.abs_diff(reference);
    (above, round_ip(distance * constant, frac_bits))
}

/// One fixed-point shear with wrap-around.
pub fn shear_functional(axis: Axis, p: PixelCoord, params: &ShearParams) -> PixelCoord {
    let m = params.format.coord_mask();
    let f = params.format.frac_bits;
    match axis {
        Axis::Horizontal => {
            let (above, s) = shift(p.y, params.y_ref, params.alpha, f);
            let add = above != params.negative;
            let x = if add { p.x.wrapping_add(s) } else { p.x.wrapping_sub(s) };
            PixelCoord::new(x & m, p.y)
        }
        Axis::Vertical => {
            let (above, s) = shift(p.x, params.x_ref, params.beta, f);
            let add = !above != params.negative;
            let y = if add { p.y.wrapping_add(s) } else { p.y.wrapping_sub(s) };
            PixelCoord::new(p.x, y & m)
        }
    }
}

/// Horizontal, then vertical, then horizontal shear.
pub fn rotate3_functional(p: PixelCoord, params: &ShearParams) -> PixelCoord {
    let p = shear_functional(Axis::Horizontal, p, params);
    let p = shear_functional(Axis::Vertical, p, params);
    shear_functional(Axis::Horizontal, p, params)
}

/// Registers of a shear circuit. `shifted` is the coordinate that moves,
/// `distance` the one measured against `reference`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShearLayout {
    pub axis: Axis,
    pub case: ShearCase,
    pub n: usize,
    pub f: usize,
    pub x: Vec<QubitId>,
    pub y: Vec<QubitId>,
    pub constant: Vec<QubitId>,
    pub reference: Vec<QubitId>,
    pub d: Vec<QubitId>,
    pub p: Vec<QubitId>,
    pub k: Vec<QubitId>,
    pub zero: QubitId,
}

impl ShearLayout {
    fn new(axis: Axis, case: ShearCase, n: usize, f: usize) -> ShearLayout {
        let mut next = 0;
        let mut take = |w: usize| {
            let r: Vec<QubitId> = (next..next + w).map(QubitId).collect();
            next += w;
            r
        };
        let x = take(n);
        let y = take(n);
        let constant = take(f);
        let reference = take(n);
        let d = take(n);
        let p = take(n + f);
        let k = take(n + f);
        let zero = take(1)[0];
        ShearLayout {
            axis,
            case,
            n,
            f,
            x,
            y,
            constant,
            reference,
            d,
            p,
            k,
            zero,
        }
    }

    pub fn n_qubits(&self) -> usize {
        6 * self.n + 3 * self.f + 1
    }

    pub fn shifted(&self) -> &[QubitId] {
        match self.axis {
            Axis::Horizontal => &self.x,
            Axis::Vertical => &self.y,
        }
    }

    pub fn distance(&self) -> &[QubitId] {
        match self.axis {
            Axis::Horizontal => &self.y,
            Axis::Vertical => &self.x,
        }
    }

    fn names(&self) -> (&'static str, &'static str) {
        match self.axis {
            Axis::Horizontal => ("ALPHA", "YREF"),
            Axis::Vertical => ("BETA", "XREF"),
        }
    }

    /// Parameters a functional model needs to reproduce this circuit on `input`.
    pub fn params_for(&self, constant: u64, reference: u64) -> ShearParams {
        let format = FixedPointFormat {
            frac_bits: self.f as u32,
            coord_bits: self.n as u32,
        };
        let (alpha, beta, x_ref, y_ref) = match self.axis {
            Axis::Horizontal => (constant, 0, 0, reference),
            Axis::Vertical => (0, constant, reference, 0),
        };
        ShearParams {
            theta: f64::NAN,
            alpha,
            beta,
            negative: false,
            x_ref,
            y_ref,
            format,
        }
    }

    /// Whether a distance coordinate value falls in this circuit's case.
    pub fn in_case(&self, coord: u64, reference: u64) -> bool {
        match self.case {
            ShearCase::LeRef => coord <= reference,
            ShearCase::GtRef => coord > reference,
        }
    }
}

/// A garbage-free shear circuit for one axis and one side of the centroid.
///
/// 1. `D ← |coord − ref|` by copy and subtraction.
/// 2. `P ← D · constant` (n + f bits).
/// 3. `P ← P + 2^{f−1}` using a constant loaded into `K`.
/// 4. The shifted coordinate gains or loses `P[f..f+n]`.
///
/// Steps 3, 2 and 1 are then undone so every scratch register returns to 0.
pub fn build_shear_circuit(axis: Axis, case: ShearCase, n: usize, f: usize) -> Result<(Circuit, ShearLayout), RotationError> {
    FixedPointFormat::new(n as u32, f as u32)?;
    let l = ShearLayout::new(axis, case, n, f);
    let (const_name, ref_name) = l.names();
    let mut roles = BTreeMap::new();
    for i in 0..n {
        roles.insert(l.x[i], QubitRole::input("X", i));
        roles.insert(l.y[i], QubitRole::input("Y", i));
        roles.insert(l.reference[i], QubitRole::input(ref_name, i));
    }
    for i in 0..f {
        roles.insert(l.constant[i], QubitRole::input(const_name, i));
    }
    for &q in l.d.iter().chain(&l.p).chain(&l.k).chain([&l.zero]) {
        roles.insert(q, QubitRole::AncillaZero);
    }
    let mut c = Circuit::new(
        l.n_qubits(),
        [
            ("X", l.x.clone()),
            ("Y", l.y.clone()),
            (const_name, l.constant.clone()),
            (ref_name, l.reference.clone()),
            ("D", l.d.clone()),
            ("P", l.p.clone()),
            ("K", l.k.clone()),
            ("c0", vec![l.zero]),
        ],
        roles,
    )?;

    let (minuend, subtrahend) = match case {
        ShearCase::LeRef => (l.reference.as_slice(), l.distance()),
        ShearCase::GtRef => (l.distance(), l.reference.as_slice()),
    };
    let mut compute: Vec<Item> = Vec::new();
    compute.push(
        Block::from_gates(
            "Copy",
            minuend.iter().zip(&l.d).map(|(&s, &t)| Gate::cnot(s, t)),
        )
        .into(),
    );
    compute.push(Block::new("Distance", sub_from(&l.d, subtrahend, l.zero)).into());
    compute.push(
        Block::new("Multiply", multiply_into(&l.p, &l.d, &l.constant, l.zero)).into(),
    );
    let mut round = vec![Item::Gate(Gate::x(l.k[f - 1]))];
    round.extend(add_into(&l.p, &l.k, l.zero, None));
    round.push(Item::Gate(Gate::x(l.k[f - 1])));
    compute.push(Block::new("Round", round).into());

    let amount = &l.p[f..f + n];
    let add = match (axis, case) {
        (Axis::Horizontal, ShearCase::GtRef) | (Axis::Vertical, ShearCase::LeRef) => true,
        (Axis::Horizontal, ShearCase::LeRef) | (Axis::Vertical, ShearCase::GtRef) => false,
    };
    let apply = if add {
        add_into(l.shifted(), amount, l.zero, None)
    } else {
        sub_from(l.shifted(), amount, l.zero)
    };

    let uncompute: Vec<Item> = compute.iter().rev().map(Item::dagger).collect();
    c.extend(compute)?;
    c.append(Block::new("Shift", apply))?;
    for item in uncompute {
        c.append(match item {
            Item::Block(mut b) => {
                b.name = format!("{}†", b.name);
                Item::Block(b)
            }
            g => g,
        })?;
    }

    for (i, &q) in l.shifted().iter().enumerate() {
        c.declare_output(q, QubitRole::output(if axis == Axis::Horizontal { "X'" } else { "Y'" }, i))?;
    }
    let lc = l.clone();
    c.set_contract(Contract::new(move |input| {
        let scratch = lc.d.iter().chain(&lc.p).chain(&lc.k).chain([&lc.zero]);
        if scratch.into_iter().any(|&q| input.get(q)) {
            return None;
        }
        let reference = input.read(&lc.reference);
        if !lc.in_case(input.read(lc.distance()), reference) {
            return None;
        }
        let params = lc.params_for(input.read(&lc.constant), reference);
        let p = PixelCoord::new(input.read(&lc.x), input.read(&lc.y));
        let out_p = shear_functional(lc.axis, p, &params);
        let mut out = input.clone();
        out.write(&lc.x, out_p.x);
        out.write(&lc.y, out_p.y);
        Some(out)
    }));
    Ok((c, l))
}

/// Square grid of opaque pixel values, row-major (`index = y·side + x`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGrid {
    side: usize,
    pixels: Vec<u32>,
}

impl ImageGrid {
    pub fn new(side: usize, pixels: Vec<u32>) -> Result<ImageGrid, RotationError> {
        if side < 2 || !side.is_power_of_two() {
            return Err(RotationError::GridSize(side));
        }
        if pixels.len() != side * side {
            return Err(RotationError::GridData {
                expected: side * side,
                got: pixels.len(),
            });
        }
        Ok(ImageGrid { side, pixels })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[u32] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.pixels[y * self.side + x]
    }
}

/// Moves every pixel by the three-shear rotation about `(side/2, side/2)`,
/// coordinates wrapping at the grid edge.
pub fn rotate_image(grid: &ImageGrid, theta: f64, frac_bits: u32) -> Result<ImageGrid, RotationError> {
    let side = grid.side;
    let n = side.trailing_zeros();
    let format = FixedPointFormat::new(n, frac_bits)?;
    let centre = (side / 2) as u64;
    let params = ShearParams::new(theta, format, centre, centre)?;
    let mut out: Vec<Option<u32>> = vec![None; side * side];
    for y in 0..side {
        for x in 0..side {
            let d = rotate3_functional(PixelCoord::new(x as u64, y as u64), &params);
            let slot = &mut out[d.y as usize * side + d.x as usize];
            if slot.is_some() {
                return Err(RotationError::Collision(d.x, d.y));
            }
            *slot = Some(grid.get(x, y));
        }
    }
    Ok(ImageGrid {
        side,
        pixels: out.into_iter().map(|p| p.expect("bijective map")).collect(),
    })
}
