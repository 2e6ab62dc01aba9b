//! Exhaustive oracle sweeps behind `qarith verify`.

use qarith::arithmetic::{nonrestoring_reference, AdderLayout, DividerLayout, MultiplierLayout};
use qarith::lowering::lower;
use qarith::metrics::{classify_outputs, GarbageCount, SWEEP_LIMIT_BITS};
use qarith::qft::{dft_matrix, DFT_LIMIT};
use qarith::rotation::{build_shear_circuit, shear_functional, Axis, PixelCoord, ShearCase};
use qarith::sim::{run_classical, unitary_of, Matrix};
use qarith::{BasisState, Circuit, QubitId};

use crate::{build_family, CliError, Family, SizeArgs};

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn sweep_guard(bits: usize) -> Result<(), CliError> {
    if bits > SWEEP_LIMIT_BITS {
        return Err(CliError::Usage(format!(
            "{bits} input bits exceeds the exhaustive sweep limit of {SWEEP_LIMIT_BITS}"
        )));
    }
    Ok(())
}

fn input(n_qubits: usize, fields: &[(&[QubitId], u64)]) -> BasisState {
    let mut s = BasisState::zeros(n_qubits);
    for (qs, v) in fields {
        s.write(qs, *v);
    }
    s
}

fn garbage_free(c: &Circuit, r: &mut VerifyReport) -> Result<(), CliError> {
    let g = classify_outputs(c)?.garbage_count;
    r.check(g == GarbageCount::Known(0), || format!("garbage count {g}"));
    Ok(())
}

fn twos_difference(b: u64, a: u64, n: usize) -> u64 {
    (b as i64 - a as i64).rem_euclid(1 << (n + 1)) as u64
}

/// Runs every oracle for `family` at the requested size.
pub fn verify(family: Family, size: &SizeArgs) -> Result<VerifyReport, CliError> {
    let c = build_family(family, size)?;
    let n = size.n.unwrap_or(3);
    let mut r = VerifyReport::default();
    match family {
        Family::Adder | Family::Subtractor | Family::Addsub | Family::CondAdder => {
            sweep_guard(2 * n + 2)?;
            let l = AdderLayout::new(n);
            let ctrl: Vec<QubitId> = c.register("Ctrl").map(<[_]>::to_vec).unwrap_or_default();
            let carries: u64 = if matches!(family, Family::Adder | Family::CondAdder) { 2 } else { 1 };
            let ctrls: u64 = if ctrl.is_empty() { 1 } else { 2 };
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    for c0 in 0..carries {
                        for k in 0..ctrls {
                            let s = input(c.n_qubits(), &[(&l.a, a), (&l.b, b), (&[l.carry_in], c0), (&ctrl, k)]);
                            let out = run_classical(&c, &s)?;
                            let expect = match (family, k) {
                                (Family::Adder, _) | (Family::Addsub, 0) | (Family::CondAdder, 1) => a + b + c0,
                                (Family::CondAdder, _) => b,
                                _ => twos_difference(b, a, n),
                            };
                            let got = out.read(&l.result());
                            let kept = out.read(&l.a) == a && out.get(l.carry_in) == (c0 == 1) && out.read(&ctrl) == k;
                            r.check(got == expect && kept, || {
                                format!("a={a} b={b} c0={c0} ctrl={k}: got {got}, expected {expect}")
                            });
                        }
                    }
                }
            }
            garbage_free(&c, &mut r)?;
        }
        Family::Multiplier => {
            sweep_guard(2 * n)?;
            let l = MultiplierLayout::new(n);
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    let out = run_classical(&c, &input(c.n_qubits(), &[(&l.a, a), (&l.b, b)]))?;
                    let got = out.read(&l.p);
                    let kept = out.read(&l.a) == a && out.read(&l.b) == b && !out.get(l.scratch);
                    r.check(got == a * b && kept, || format!("{a}·{b}: got {got}"));
                }
            }
            garbage_free(&c, &mut r)?;
        }
        Family::Divider => {
            sweep_guard(2 * n)?;
            let l = DividerLayout::new(n);
            for a in 0..1u64 << (n - 1) {
                for b in 1..1u64 << (n - 1) {
                    let out = run_classical(&c, &input(c.n_qubits(), &[(&l.a, a), (&l.b, b)]))?;
                    let got = (out.read(&l.q), out.read(&l.r));
                    let reference = nonrestoring_reference(a, b, n)?;
                    r.check(got == (a / b, a % b) && reference == got && out.read(&l.b) == b, || {
                        format!("{a}/{b}: got {got:?}")
                    });
                }
            }
            garbage_free(&c, &mut r)?;
        }
        Family::Qft => {
            if n > DFT_LIMIT {
                return Err(CliError::Usage(format!("qft verification stops at n = {DFT_LIMIT}")));
            }
            let dev = unitary_of(&c)?.max_deviation(&dft_matrix(n)?);
            r.check(dev < 1e-9, || format!("max deviation from DFT {dev:e}"));
        }
        Family::Shear => {
            let f = size.frac;
            sweep_guard(3 * n + f)?;
            for axis in [Axis::Horizontal, Axis::Vertical] {
                for case in [ShearCase::LeRef, ShearCase::GtRef] {
                    let (c, l) = build_shear_circuit(axis, case, n, f)?;
                    for x in 0..1u64 << n {
                        for y in 0..1u64 << n {
                            for reference in 0..1u64 << n {
                                let coord = if axis == Axis::Horizontal { y } else { x };
                                if !l.in_case(coord, reference) {
                                    continue;
                                }
                                for k in 0..1u64 << f {
                                    let s = input(
                                        c.n_qubits(),
                                        &[(&l.x, x), (&l.y, y), (&l.reference, reference), (&l.constant, k)],
                                    );
                                    let out = run_classical(&c, &s)?;
                                    let want = shear_functional(axis, PixelCoord::new(x, y), &l.params_for(k, reference));
                                    let got = PixelCoord::new(out.read(&l.x), out.read(&l.y));
                                    let mut clean = s.clone();
                                    clean.write(&l.x, want.x);
                                    clean.write(&l.y, want.y);
                                    r.check(out == clean, || {
                                        format!("{axis:?} {case:?} ({x},{y}) ref={reference} k={k}: got {got:?}, expected {want:?}")
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Family::Toffoli | Family::Fredkin => {
            let perm = |x: usize| match family {
                Family::Toffoli if x & 3 == 3 => x ^ 4,
                Family::Fredkin if x & 1 == 1 => (x & 1) | (x >> 1 & 2) | (x << 1 & 4),
                _ => x,
            };
            for x in 0..8 {
                let out = run_classical(&c, &BasisState::from_index(3, x as u64))?;
                r.check(out.index() as usize == perm(x), || format!("input {x}: got {}", out.index()));
            }
            let dev = unitary_of(&lower(&c)?)?.max_deviation(&Matrix::permutation(8, perm));
            r.check(dev < 1e-10, || format!("lowered unitary deviates by {dev:e}"));
        }
    }
    Ok(r)
}
