//! Bell-basis projective measurement on an arbitrary qubit pair inside
//! a larger register: enumerate the four branches, collapse, sample.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::StateVector;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One of the four Bell basis vectors:
/// `Φ± = (|00⟩ ± |11⟩)/√2`, `Ψ± = (|01⟩ ± |10⟩)/√2`.
///
/// The canonical ordering `Φ+ < Φ− < Ψ+ < Ψ−` is used everywhere a
/// branch list or an outcome tuple is enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    /// Position in the canonical ordering.
    pub fn index(self) -> usize {
        match self {
            BellOutcome::PhiPlus => 0,
            BellOutcome::PhiMinus => 1,
            BellOutcome::PsiPlus => 2,
            BellOutcome::PsiMinus => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<BellOutcome> {
        BellOutcome::ALL.get(i).copied()
    }

    /// Amplitudes of the Bell vector over `|00⟩,|01⟩,|10⟩,|11⟩`.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellOutcome::PhiPlus => [h, z, z, h],
            BellOutcome::PhiMinus => [h, z, z, -h],
            BellOutcome::PsiPlus => [z, h, h, z],
            BellOutcome::PsiMinus => [z, h, -h, z],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "Phi+",
            BellOutcome::PhiMinus => "Phi-",
            BellOutcome::PsiPlus => "Psi+",
            BellOutcome::PsiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for BellOutcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BellOutcome::ALL
            .iter()
            .copied()
            .find(|o| o.symbol() == s)
            .ok_or_else(|| Error::BadOutcome(s.to_string()))
    }
}

impl Serialize for BellOutcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for BellOutcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One projective branch: the outcome, its probability, and the
/// renormalized residual on the remaining qubits. `residual` is `None`
/// for zero-probability branches.
#[derive(Debug, Clone)]
pub struct MeasurementResult {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub residual: Option<StateVector>,
}

/// Project `(q1, q2)` of `s` onto a single Bell vector.
pub fn project_bell(
    s: &StateVector,
    q1: usize,
    q2: usize,
    outcome: BellOutcome,
) -> Result<MeasurementResult> {
    let proj = s.project_pair(q1, q2, &outcome.amplitudes())?;
    Ok(MeasurementResult {
        outcome,
        probability: proj.probability,
        residual: proj.residual,
    })
}

/// All four Bell branches of a measurement on `(q1, q2)`, in canonical
/// outcome order. For a normalized input the probabilities sum to 1.
pub fn bsm_branches(s: &StateVector, q1: usize, q2: usize) -> Result<[MeasurementResult; 4]> {
    Ok([
        project_bell(s, q1, q2, BellOutcome::PhiPlus)?,
        project_bell(s, q1, q2, BellOutcome::PhiMinus)?,
        project_bell(s, q1, q2, BellOutcome::PsiPlus)?,
        project_bell(s, q1, q2, BellOutcome::PsiMinus)?,
    ])
}

/// Draw one outcome index from four branch probabilities.
///
/// The probabilities are treated as a categorical distribution; any
/// deficit from rounding goes to the last nonzero branch.
pub fn draw_outcome(probabilities: &[f64; 4], rng: &mut impl Rng) -> BellOutcome {
    let total: f64 = probabilities.iter().sum();
    let x = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if x < acc {
            return BellOutcome::ALL[i];
        }
    }
    BellOutcome::ALL[last_nonzero]
}

/// Sample a Bell measurement on `(q1, q2)` using the supplied RNG.
pub fn bsm_sample_with_rng(
    s: &StateVector,
    q1: usize,
    q2: usize,
    rng: &mut impl Rng,
) -> Result<MeasurementResult> {
    let branches = bsm_branches(s, q1, q2)?;
    let probs = [
        branches[0].probability,
        branches[1].probability,
        branches[2].probability,
        branches[3].probability,
    ];
    let outcome = draw_outcome(&probs, rng);
    Ok(branches.into_iter().nth(outcome.index()).expect("four branches"))
}

/// Sample a Bell measurement; deterministic for a fixed `rng_seed`.
pub fn bsm_sample(s: &StateVector, q1: usize, q2: usize, rng_seed: u64) -> Result<MeasurementResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    bsm_sample_with_rng(s, q1, q2, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_state(outcome: BellOutcome) -> StateVector {
        StateVector::from_amplitudes(outcome.amplitudes().to_vec()).unwrap()
    }

    fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        StateVector::from_amplitudes(amps).unwrap().normalized()
    }

    #[test]
    fn eigenstate_collapses_to_itself() {
        for outcome in BellOutcome::ALL {
            let branches = bsm_branches(&bell_state(outcome), 0, 1).unwrap();
            for b in &branches {
                if b.outcome == outcome {
                    assert!((b.probability - 1.0).abs() < 1e-12);
                    assert!(b.residual.is_some());
                } else {
                    assert!(b.probability < 1e-12);
                    assert!(b.residual.is_none());
                }
            }
        }
    }

    #[test]
    fn computational_zero_splits_between_phi_branches() {
        let s = StateVector::zero(2).unwrap();
        let branches = bsm_branches(&s, 0, 1).unwrap();
        assert!((branches[0].probability - 0.5).abs() < 1e-12);
        assert!((branches[1].probability - 0.5).abs() < 1e-12);
        assert!(branches[2].probability < 1e-12);
        assert!(branches[3].probability < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_and_residuals_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = rng.gen_range(3..=6);
            let s = random_state(n, &mut rng);
            let q1 = rng.gen_range(0..n);
            let mut q2 = rng.gen_range(0..n);
            while q2 == q1 {
                q2 = rng.gen_range(0..n);
            }
            let branches = bsm_branches(&s, q1, q2).unwrap();
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for b in &branches {
                if let Some(r) = &b.residual {
                    assert!((r.norm() - 1.0).abs() < 1e-12);
                    assert_eq!(r.n_qubits(), n - 2);
                }
            }
        }
    }

    #[test]
    fn branch_probabilities_ignore_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let s = random_state(4, &mut rng);
        let phase = Complex64::from_polar(1.0, 1.234);
        let rotated = StateVector::from_amplitudes(
            s.amplitudes().iter().map(|a| a * phase).collect(),
        )
        .unwrap();
        let b1 = bsm_branches(&s, 1, 3).unwrap();
        let b2 = bsm_branches(&rotated, 1, 3).unwrap();
        for (x, y) in b1.iter().zip(b2.iter()) {
            assert!((x.probability - y.probability).abs() < 1e-14);
        }
    }

    /// Re-insert a residual at the measured positions and attach the
    /// Bell vector, rebuilding an n-qubit branch term.
    fn reinsert(residual: &StateVector, q1: usize, q2: usize, outcome: BellOutcome, n: usize) -> Vec<Complex64> {
        let bell = outcome.amplitudes();
        let mut full = vec![c(0.0, 0.0); 1 << n];
        for (r, &amp) in residual.amplitudes().iter().enumerate() {
            for b1 in 0..2usize {
                for b2 in 0..2usize {
                    let coeff = bell[(b1 << 1) | b2];
                    if coeff == c(0.0, 0.0) {
                        continue;
                    }
                    // spread the residual bits over the non-measured slots
                    let mut idx = 0usize;
                    let mut rbit = residual.n_qubits();
                    for q in 0..n {
                        let bit = if q == q1 {
                            b1
                        } else if q == q2 {
                            b2
                        } else {
                            rbit -= 1;
                            ((r >> rbit) & 1) as usize
                        };
                        idx = (idx << 1) | bit;
                    }
                    full[idx] += coeff * amp;
                }
            }
        }
        full
    }

    #[test]
    fn branches_reconstruct_the_input_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.gen_range(3..=6);
            let s = random_state(n, &mut rng);
            let q1 = rng.gen_range(0..n);
            let mut q2 = rng.gen_range(0..n);
            while q2 == q1 {
                q2 = rng.gen_range(0..n);
            }
            let branches = bsm_branches(&s, q1, q2).unwrap();
            let mut sum = vec![c(0.0, 0.0); 1 << n];
            for b in &branches {
                if let Some(residual) = &b.residual {
                    let w = b.probability.sqrt();
                    for (k, v) in reinsert(residual, q1, q2, b.outcome, n).iter().enumerate() {
                        sum[k] += w * v;
                    }
                }
            }
            for (k, (got, want)) in sum.iter().zip(s.amplitudes()).enumerate() {
                assert!((got - want).norm() < 1e-10, "mismatch at index {k}");
            }
        }
    }

    #[test]
    fn sampling_eigenstate_always_returns_it() {
        let s = bell_state(BellOutcome::PsiMinus);
        for seed in 0..20 {
            let r = bsm_sample(&s, 0, 1, seed).unwrap();
            assert_eq!(r.outcome, BellOutcome::PsiMinus);
        }
    }

    #[test]
    fn sampling_is_deterministic_for_a_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let s = random_state(4, &mut rng);
        let a = bsm_sample(&s, 0, 2, 99).unwrap();
        let b = bsm_sample(&s, 0, 2, 99).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.probability, b.probability);
    }

    #[test]
    fn sample_frequencies_match_branch_probabilities() {
        // Bell pair on (0,1) of a 4-qubit register, extra qubits in a
        // superposition; every Bell branch on (0,2) has probability 1/4.
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let s = random_state(4, &mut rng);
        let branches = bsm_branches(&s, 0, 2).unwrap();
        let mut counts = [0usize; 4];
        let n = 100_000;
        for _ in 0..n {
            let o = bsm_sample_with_rng(&s, 0, 2, &mut rng).unwrap().outcome;
            counts[o.index()] += 1;
        }
        for (i, b) in branches.iter().enumerate() {
            let freq = counts[i] as f64 / n as f64;
            let sigma = (b.probability * (1.0 - b.probability) / n as f64).sqrt();
            assert!(
                (freq - b.probability).abs() <= 3.0 * sigma + 1e-9,
                "outcome {} freq {} expected {}",
                b.outcome,
                freq,
                b.probability
            );
        }
    }

    #[test]
    fn measurement_errors() {
        let s = StateVector::zero(3).unwrap();
        assert!(bsm_branches(&s, 1, 1).is_err());
        assert!(bsm_branches(&s, 0, 5).is_err());
    }
}
