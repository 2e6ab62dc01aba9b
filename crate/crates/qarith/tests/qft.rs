use std::f64::consts::PI;

use num_complex::Complex64;
use qarith::qft::{build_qft, dft_matrix, QftError};
use qarith::sim::{run_statevector, unitary_of, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn two_qubit_matrix_by_hand() {
    let one = c(0.5, 0.0);
    let j = c(0.0, 0.5);
    let expect = [
        [one, one, one, one],
        [one, j, -one, -j],
        [one, -one, one, -one],
        [one, -j, -one, j],
    ];
    let u = unitary_of(&build_qft(2).unwrap()).unwrap();
    for (r, row) in expect.iter().enumerate() {
        for (col, e) in row.iter().enumerate() {
            assert!((u.get(r, col) - e).norm() < 1e-12, "({r},{col})");
        }
    }
}

#[test]
fn matches_dft_up_to_five_qubits() {
    for n in 1..=5 {
        let u = unitary_of(&build_qft(n).unwrap()).unwrap();
        assert!(u.max_deviation(&dft_matrix(n).unwrap()) < 1e-9, "n={n}");
    }
}

#[test]
fn output_amplitudes_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        let dim = 1usize << n;
        for _ in 0..5 {
            let mut a: Vec<Complex64> = (0..dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            a.iter_mut().for_each(|z| *z /= norm);
            let out = run_statevector(&build_qft(n).unwrap(), &StateVector::from_amplitudes(a.clone()).unwrap())
                .unwrap();
            for y in 0..dim {
                let mut lambda = c(0.0, 0.0);
                for (x, ax) in a.iter().enumerate() {
                    lambda += ax * Complex64::from_polar(1.0, 2.0 * PI * (x * y) as f64 / dim as f64);
                }
                lambda /= (dim as f64).sqrt();
                assert!((out.amplitudes()[y] - lambda).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn inverse_undoes_qft() {
    for n in 1..=6 {
        let q = build_qft(n).unwrap();
        let u = unitary_of(&q.compose(&q.invert()).unwrap()).unwrap();
        assert!(u.max_deviation(&qarith::sim::Matrix::identity(1 << n)) < 1e-9);
    }
}

#[test]
fn bad_sizes() {
    assert_eq!(build_qft(0).unwrap_err(), QftError::Empty);
    assert!(matches!(dft_matrix(11), Err(QftError::TooLarge(11))));
}
