use num_complex::Complex64;
use rand::Rng;

use super::{compensated_sum, MarkedPredicate};
use crate::dataset::EncodedDataset;
use crate::error::{Error, Result};

/// Default width limit for dense simulation: 2^24 amplitudes, 256 MiB per buffer.
pub const DEFAULT_MAX_QUBITS: u32 = 24;

/// Dense `2^n`-amplitude state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Uniform superposition over the dataset's codes.
    pub fn prepare_uniform(dataset: &EncodedDataset) -> Result<Self> {
        Self::prepare_uniform_with_limit(dataset, DEFAULT_MAX_QUBITS)
    }

    pub fn prepare_uniform_with_limit(dataset: &EncodedDataset, max_qubits: u32) -> Result<Self> {
        let n_qubits = dataset.n_qubits();
        if n_qubits > max_qubits {
            return Err(Error::QubitLimitExceeded {
                n_qubits,
                limit: max_qubits,
            });
        }
        let amp = Complex64::new(1.0 / (dataset.size() as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        for v in dataset.values() {
            amps[v as usize] = amp;
        }
        Ok(Self { n_qubits, amps })
    }

    /// Build a state from raw amplitudes, normalising them.
    pub fn from_amplitudes(n_qubits: u32, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::QubitLimitExceeded {
                n_qubits,
                limit: DEFAULT_MAX_QUBITS,
            });
        }
        if amps.len() != 1usize << n_qubits {
            return Err(Error::InvalidParams(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let mut state = Self { n_qubits, amps };
        let norm = state.norm_sqr().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParams(
                "amplitudes have zero or non-finite norm".into(),
            ));
        }
        state.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    pub fn probability(&self, code: u64) -> f64 {
        self.amps.get(code as usize).map_or(0.0, |a| a.norm_sqr())
    }

    /// Total probability on codes `<= threshold`.
    pub fn marked_probability(&self, pred: &MarkedPredicate) -> f64 {
        let end = (pred.threshold() as usize + 1).min(self.amps.len());
        compensated_sum(self.amps[..end].iter().map(|a| a.norm_sqr()))
    }

    /// Oracle: multiply the amplitude of every code `<= threshold` by `e^{iφ}`.
    pub fn apply_marking_phase(&mut self, pred: &MarkedPredicate, phi: f64) -> Result<()> {
        self.check_width(pred.n_qubits())?;
        self.scale_range(0, pred.threshold(), Complex64::from_polar(1.0, phi));
        Ok(())
    }

    /// Multiply amplitudes `lo..=hi` by `factor`.
    pub(crate) fn scale_range(&mut self, lo: u64, hi: u64, factor: Complex64) {
        for a in &mut self.amps[lo as usize..=hi as usize] {
            *a *= factor;
        }
    }

    /// Phase deflection about `prep`: `ψ ← ψ + (e^{iφ} − 1)⟨s|ψ⟩ |s⟩`.
    ///
    /// This is `W I₀ W†` with `|s⟩ = W|0⟩`, written as a rank-1 update.
    pub fn apply_phase_deflection(&mut self, prep: &StateVector, phi: f64) -> Result<()> {
        self.check_width(prep.n_qubits)?;
        let overlap = prep
            .amps
            .iter()
            .zip(&self.amps)
            .fold(Complex64::new(0.0, 0.0), |acc, (s, a)| acc + s.conj() * a);
        let coeff = (Complex64::from_polar(1.0, phi) - 1.0) * overlap;
        for (a, s) in self.amps.iter_mut().zip(&prep.amps) {
            *a += coeff * s;
        }
        Ok(())
    }

    /// Sample a basis code with probability `|amp|²`. The state is left untouched.
    pub fn measure_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        for (k, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = k;
                cumulative += p;
                if u < cumulative {
                    return k as u64;
                }
            }
        }
        // rounding left u above the accumulated total
        last_nonzero as u64
    }

    /// Debug dump as a JSON array of `[re, im]` pairs.
    pub fn to_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&pairs).expect("f64 pairs serialise")
    }

    fn check_width(&self, other: u32) -> Result<()> {
        if other != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(state: &StateVector, expected: &[Complex64], tol: f64) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (k, (a, e)) in state.amplitudes().iter().zip(expected).enumerate() {
            assert!((a - e).norm() <= tol, "amp {k}: {a} vs {e}");
        }
    }

    fn random_state(n: u32, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..1usize << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn uniform_preparation() {
        let s = StateVector::prepare_uniform(&EncodedDataset::full_range(2).unwrap()).unwrap();
        assert_amps(&s, &[c(0.5, 0.0); 4], 1e-15);

        let single = EncodedDataset::from_values(vec![0], Some(1)).unwrap();
        let s = StateVector::prepare_uniform(&single).unwrap();
        assert_amps(&s, &[c(1.0, 0.0), c(0.0, 0.0)], 0.0);
    }

    #[test]
    fn limit_is_enforced() {
        let ds = EncodedDataset::full_range(25).unwrap();
        assert!(matches!(
            StateVector::prepare_uniform(&ds),
            Err(Error::QubitLimitExceeded {
                n_qubits: 25,
                limit: 24
            })
        ));
        let ds = EncodedDataset::full_range(6).unwrap();
        assert!(StateVector::prepare_uniform_with_limit(&ds, 5).is_err());
    }

    #[test]
    fn marking_phase_examples() {
        let ds = EncodedDataset::full_range(2).unwrap();
        let mut s = StateVector::prepare_uniform(&ds).unwrap();
        s.apply_marking_phase(&MarkedPredicate::new(0, 2).unwrap(), PI)
            .unwrap();
        assert_amps(
            &s,
            &[c(-0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
            1e-15,
        );

        let mut s = StateVector::prepare_uniform(&ds).unwrap();
        s.apply_marking_phase(&MarkedPredicate::new(1, 2).unwrap(), FRAC_PI_2)
            .unwrap();
        assert_amps(
            &s,
            &[c(0.0, 0.5), c(0.0, 0.5), c(0.5, 0.0), c(0.5, 0.0)],
            1e-15,
        );

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let before = random_state(4, &mut rng);
        let mut after = before.clone();
        after
            .apply_marking_phase(&MarkedPredicate::new(9, 4).unwrap(), 0.0)
            .unwrap();
        assert_eq!(after, before);

        assert!(matches!(
            after.apply_marking_phase(&MarkedPredicate::new(1, 3).unwrap(), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deflection_eigen_and_orthogonal_cases() {
        let ds = EncodedDataset::full_range(3).unwrap();
        let prep = StateVector::prepare_uniform(&ds).unwrap();
        let mut s = prep.clone();
        s.apply_phase_deflection(&prep, 0.7).unwrap();
        let g = Complex64::from_polar(1.0, 0.7);
        let expected: Vec<_> = prep.amplitudes().iter().map(|a| a * g).collect();
        assert_amps(&s, &expected, 1e-15);

        // |0⟩ − |1⟩ is orthogonal to the uniform state
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(1.0, 0.0);
        amps[1] = c(-1.0, 0.0);
        let orth = StateVector::from_amplitudes(3, amps).unwrap();
        let mut s = orth.clone();
        s.apply_phase_deflection(&prep, 2.1).unwrap();
        assert_amps(&s, orth.amplitudes(), 1e-15);

        let narrow = StateVector::prepare_uniform(&EncodedDataset::full_range(2).unwrap()).unwrap();
        assert!(s.apply_phase_deflection(&narrow, 1.0).is_err());
    }

    /// Dense 4×4 reference: diffusion `2|s⟩⟨s| − I` after oracle `diag(−1,1,1,1)`.
    #[test]
    fn textbook_grover_two_qubits() {
        let s = [0.5f64; 4];
        let mut diffusion = [[0.0f64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                diffusion[i][j] = 2.0 * s[i] * s[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        let oracle = [-1.0, 1.0, 1.0, 1.0];
        let reference: Vec<f64> = (0..4)
            .map(|i| (0..4).map(|j| diffusion[i][j] * oracle[j] * s[j]).sum())
            .collect();
        assert!((reference[0].powi(2) - 1.0).abs() < 1e-15);

        let ds = EncodedDataset::full_range(2).unwrap();
        let prep = StateVector::prepare_uniform(&ds).unwrap();
        let mut state = prep.clone();
        state
            .apply_marking_phase(&MarkedPredicate::new(0, 2).unwrap(), PI)
            .unwrap();
        state.apply_phase_deflection(&prep, PI).unwrap();
        for k in 0..4 {
            assert!((state.probability(k) - reference[k as usize].powi(2)).abs() < 1e-12);
        }
        assert!((state.probability(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let single = EncodedDataset::from_values(vec![0], Some(3)).unwrap();
        let s = StateVector::prepare_uniform(&single).unwrap();
        assert!((0..1000).all(|_| s.measure_sample(&mut rng) == 0));

        let s = StateVector::prepare_uniform(&EncodedDataset::full_range(1).unwrap()).unwrap();
        let zeros = (0..1_000_000)
            .filter(|_| s.measure_sample(&mut rng) == 0)
            .count();
        let freq = zeros as f64 / 1e6;
        assert!((0.497..=0.503).contains(&freq), "freq {freq}");
    }

    #[test]
    fn samples_only_support() {
        let ds = EncodedDataset::from_values(vec![3, 17, 40, 41], Some(6)).unwrap();
        let s = StateVector::prepare_uniform(&ds).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            assert!(ds.contains(s.measure_sample(&mut rng)));
        }
    }

    #[test]
    fn json_dump() {
        let s =
            StateVector::prepare_uniform(&EncodedDataset::from_values(vec![1], Some(1)).unwrap())
                .unwrap();
        assert_eq!(s.to_json(), "[[0.0,0.0],[1.0,0.0]]");
    }

    proptest! {
        #[test]
        fn operations_preserve_norm(seed in any::<u64>(), threshold in 0u64..64, phi in -7.0f64..7.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = random_state(6, &mut rng);
            let before: Vec<f64> = s.amplitudes().iter().map(|a| a.norm()).collect();
            s.apply_marking_phase(&MarkedPredicate::new(threshold, 6).unwrap(), phi).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
            for (a, m) in s.amplitudes().iter().zip(&before) {
                prop_assert!((a.norm() - m).abs() <= 1e-12);
            }
            let prep = random_state(6, &mut rng);
            s.apply_phase_deflection(&prep, phi).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn pi_deflection_is_an_involution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let original = random_state(5, &mut rng);
            let prep = random_state(5, &mut rng);
            let mut s = original.clone();
            s.apply_phase_deflection(&prep, PI).unwrap();
            s.apply_phase_deflection(&prep, PI).unwrap();
            for k in 0..32 {
                prop_assert!((s.probability(k) - original.probability(k)).abs() <= 1e-12);
            }
        }
    }
}
