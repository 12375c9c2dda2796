#![allow(dead_code)]

use fockline::fock::{occupations, Occupation, PureState};
use fockline::interferometer::{transition_amplitude, Circuit, TransferMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct RandomCase {
    pub circuit: Circuit,
    pub input: Occupation,
}

/// A random circuit of couplers, phases and an occasional multiport acting
/// on a random Fock input with at most `max_photons` photons.
pub fn random_case(rng: &mut impl Rng, max_modes: usize, max_photons: usize) -> RandomCase {
    let m = rng.random_range(2..=max_modes);
    let mut c = Circuit::new(m);
    for _ in 0..rng.random_range(1..=8) {
        let a = rng.random_range(0..m);
        let mut b = rng.random_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        c = match rng.random_range(0..4) {
            0 | 1 => c.coupler(rng.random::<f64>(), a, b).unwrap(),
            2 => c.phase(rng.random_range(-3.2..3.2), a).unwrap(),
            _ => {
                let u = if rng.random_bool(0.5) {
                    TransferMatrix::dft(m).unwrap()
                } else {
                    TransferMatrix::phases(&(0..m).map(|_| rng.random_range(-3.2..3.2)).collect::<Vec<_>>())
                };
                c.multiport(u, &(0..m).collect::<Vec<_>>()).unwrap()
            }
        };
    }
    let n = rng.random_range(1..=max_photons);
    let mut occ = vec![0u8; m];
    for _ in 0..n {
        occ[rng.random_range(0..m)] += 1;
    }
    RandomCase { circuit: c, input: Occupation::new(occ) }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest amplitude difference between element-wise evolution and
/// permanents of the composed matrix, over all outputs.
pub fn evolution_vs_permanent(case: &RandomCase) -> f64 {
    let evolved = case.circuit.apply(&PureState::basis(case.input.clone())).unwrap();
    let u = case.circuit.compose().unwrap();
    let mut dev: f64 = 0.0;
    for out in occupations(case.input.modes(), case.input.total()) {
        let want: Complex64 = transition_amplitude(&u, &case.input, &out).unwrap();
        dev = dev.max((evolved.amplitude(&out) - want).norm());
    }
    dev
}
