use num_complex::Complex64;

use crate::error::{Error, Result};

/// State restricted to `span{|μ⟩, |ν⟩}`, where `|μ⟩` (`|ν⟩`) is the normalised
/// uniform superposition of the marked (unmarked) prepared codes.
///
/// The prepared state is `sin β |μ⟩ + cos β |ν⟩` with `sin β = √(M/size)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceState {
    pub a: Complex64,
    pub b: Complex64,
    pub beta: f64,
}

impl SubspaceState {
    /// Prepared state for `marked` of `size` codes; requires `1 <= marked <= size`.
    pub fn init(marked: u64, size: u64) -> Result<Self> {
        if marked == 0 {
            return Err(Error::InvalidCounts { marked, size });
        }
        Self::with_marked(marked, size)
    }

    /// Like [`init`](Self::init) but allows `marked == 0` (β = 0), where the
    /// oracle acts trivially and the state stays on `|ν⟩`.
    pub(crate) fn with_marked(marked: u64, size: u64) -> Result<Self> {
        if size == 0 || marked > size {
            return Err(Error::InvalidCounts { marked, size });
        }
        let beta = (marked as f64 / size as f64).sqrt().asin();
        Ok(Self {
            a: Complex64::new(beta.sin(), 0.0),
            b: Complex64::new(beta.cos(), 0.0),
            beta,
        })
    }

    /// One Grover-Long iteration: marking phase, then deflection with the same φ.
    pub fn iterate(&mut self, phi: f64) {
        let g = Complex64::from_polar(1.0, phi);
        let (sin_b, cos_b) = self.beta.sin_cos();
        self.a *= g;
        let overlap = self.a * sin_b + self.b * cos_b;
        let kick = (g - 1.0) * overlap;
        self.a += kick * sin_b;
        self.b += kick * cos_b;
    }

    pub fn marked_probability(&self) -> f64 {
        self.a.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn init_examples() {
        let s = SubspaceState::init(7, 7).unwrap();
        assert!((s.a.re - 1.0).abs() < 1e-15 && s.b.norm() < 1e-7);
        assert!((s.marked_probability() - 1.0).abs() < 1e-15);

        let s = SubspaceState::init(1, 4).unwrap();
        assert!((s.a.re - 0.5).abs() < 1e-15);
        assert!((s.b.re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.marked_probability() - 0.25).abs() < 1e-15);

        let s = SubspaceState::init(4, 64).unwrap();
        assert!((s.beta - 0.25f64.asin()).abs() < 1e-15);

        assert!(matches!(
            SubspaceState::init(0, 4),
            Err(Error::InvalidCounts { .. })
        ));
        assert!(matches!(
            SubspaceState::init(5, 4),
            Err(Error::InvalidCounts { .. })
        ));
    }

    #[test]
    fn quarter_ratio_is_exact_in_one_step() {
        let mut s = SubspaceState::init(16, 64).unwrap();
        s.iterate(PI);
        assert!((s.marked_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_phase_is_identity() {
        let mut s = SubspaceState::init(3, 10).unwrap();
        let before = s;
        s.iterate(0.0);
        assert!((s.a - before.a).norm() < 1e-15 && (s.b - before.b).norm() < 1e-15);
    }

    #[test]
    fn nothing_marked_only_picks_up_global_phase() {
        let mut s = SubspaceState::with_marked(0, 8).unwrap();
        for _ in 0..5 {
            s.iterate(1.3);
        }
        assert_eq!(s.marked_probability(), 0.0);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    proptest! {
        /// Textbook Grover: `sin²((2t+1)β)` after t iterations at φ = π.
        #[test]
        fn pi_phase_matches_closed_form(size in 1u64..=1024, frac in 0.0f64..1.0, t in 0u32..=128) {
            let m = 1 + ((size - 1) as f64 * frac) as u64;
            let mut s = SubspaceState::init(m, size).unwrap();
            for _ in 0..t {
                s.iterate(PI);
            }
            let beta = (m as f64 / size as f64).sqrt().asin();
            let expected = ((2 * t + 1) as f64 * beta).sin().powi(2);
            prop_assert!((s.marked_probability() - expected).abs() <= 1e-10);
        }

        #[test]
        fn norm_is_preserved(m in 1u64..100, extra in 0u64..1000, phi in -7.0f64..7.0, t in 0u32..64) {
            let mut s = SubspaceState::init(m, m + extra).unwrap();
            for _ in 0..t {
                s.iterate(phi);
                prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
