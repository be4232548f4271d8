//! Dense complex state-vector register with unitary gate application,
//! tensor products, inner products and two-qubit projections.
//!
//! Index convention, used everywhere in this crate: qubit 0 is the
//! *leftmost* symbol of a ket, i.e. the most significant bit of the
//! amplitude index. `|q0 q1 … q(n-1)⟩` lives at index
//! `q0·2^(n-1) + q1·2^(n-2) + … + q(n-1)`.

use num_complex::Complex64;

use crate::channel::LabelMap;
use crate::error::{Error, Result};

/// Complex amplitude of a basis state.
pub type Amplitude = Complex64;

/// Hard cap on register size; the protocol itself needs 18 qubits.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for normalization checks at module boundaries.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Branch probabilities below this are treated as exactly zero.
/// Rounding noise in a 2^18-amplitude projection sits near 1e-32;
/// physical branch probabilities in this protocol are ≥ 2^-12.
pub const ZERO_PROBABILITY: f64 = 1e-20;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A unitary gate naming one or two physical qubit indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
}

/// Dense register of `n` qubits holding 2^n complex amplitudes.
///
/// Values are immutable once returned: every operation produces a new
/// `StateVector`, so states can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
    labels: Option<LabelMap>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits: n,
            amps,
            labels: None,
        })
    }

    /// Build from a raw amplitude vector. The length must be a power of
    /// two no larger than 2^[`MAX_QUBITS`]. No normalization is imposed;
    /// callers that hand out states across module boundaries are
    /// expected to pass normalized amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Capacity(n));
        }
        Ok(StateVector {
            n_qubits: n,
            amps,
            labels: None,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    pub fn labels(&self) -> Option<&LabelMap> {
        self.labels.as_ref()
    }

    /// Attach a label binding. Every bound index must fit the register.
    pub fn with_labels(mut self, labels: LabelMap) -> Result<Self> {
        if let Some(&idx) = labels.indices().iter().max() {
            if idx >= self.n_qubits {
                return Err(Error::LabelMap(format!(
                    "bound index {idx} out of range for {} qubits",
                    self.n_qubits
                )));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Bit value of `qubit` inside the basis index `basis`.
    #[inline]
    pub fn bit(&self, basis: usize, qubit: usize) -> u8 {
        ((basis >> (self.n_qubits - 1 - qubit)) & 1) as u8
    }

    /// Index mask selecting `qubit` (leftmost qubit = most significant bit).
    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    fn check_normalized(&self) -> Result<()> {
        let err = (self.norm() - 1.0).abs();
        if err > NORM_TOLERANCE {
            return Err(Error::NotNormalized(err));
        }
        Ok(())
    }

    /// Rescale to unit norm.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
        self
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Apply a single-qubit unitary given as a 2×2 matrix
    /// `[[m00, m01], [m10, m11]]` acting on `|0⟩, |1⟩`.
    pub fn apply_one_qubit(&self, qubit: usize, m: [[Complex64; 2]; 2]) -> Result<StateVector> {
        self.check_index(qubit)?;
        let mask = self.mask(qubit);
        let mut out = self.clone();
        let mut base = 0;
        while base < out.amps.len() {
            for k in base..base + mask {
                let a0 = out.amps[k];
                let a1 = out.amps[k | mask];
                out.amps[k] = m[0][0] * a0 + m[0][1] * a1;
                out.amps[k | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += 2 * mask;
        }
        Ok(out)
    }

    /// Apply one of the named gates, producing a new state.
    pub fn apply_gate(&self, gate: GateOp) -> Result<StateVector> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match gate {
            GateOp::H(q) => self.apply_one_qubit(q, [[h, h], [h, -h]]),
            GateOp::X(q) => self.apply_one_qubit(q, [[zero, one], [one, zero]]),
            GateOp::Y(q) => self.apply_one_qubit(q, [[zero, -i], [i, zero]]),
            GateOp::Z(q) => self.apply_one_qubit(q, [[one, zero], [zero, -one]]),
            GateOp::Cnot { control, target } => {
                self.check_index(control)?;
                self.check_index(target)?;
                if control == target {
                    return Err(Error::DuplicateTargets(control));
                }
                let cmask = self.mask(control);
                let tmask = self.mask(target);
                let mut out = self.clone();
                for k in 0..out.amps.len() {
                    if k & cmask != 0 && k & tmask == 0 {
                        out.amps.swap(k, k | tmask);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Tensor product `self ⊗ other`; `other`'s qubits follow `self`'s,
    /// and any label bindings of `other` are offset accordingly.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Capacity(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let base = i << other.n_qubits;
            for (j, &b) in other.amps.iter().enumerate() {
                amps[base | j] = a * b;
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.merged(&b.offset(self.n_qubits))?),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.offset(self.n_qubits)),
            (None, None) => None,
        };
        Ok(StateVector {
            n_qubits: n,
            amps,
            labels,
        })
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²` for two normalized states of equal size.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.check_normalized()?;
        other.check_normalized()?;
        let f = self.inner(other)?.norm_sqr();
        Ok(f.clamp(0.0, 1.0))
    }

    /// Project the pair `(q1, q2)` onto the two-qubit vector with
    /// amplitudes `target = [t00, t01, t10, t11]`. Returns the branch
    /// probability and, when it is nonzero, the renormalized residual
    /// on the remaining `n − 2` qubits (relative order preserved,
    /// labels compacted).
    pub fn project_pair(
        &self,
        q1: usize,
        q2: usize,
        target: &[Complex64; 4],
    ) -> Result<PairProjection> {
        self.check_index(q1)?;
        self.check_index(q2)?;
        if q1 == q2 {
            return Err(Error::DuplicateTargets(q1));
        }
        let n = self.n_qubits;
        let p1 = n - 1 - q1; // bit positions from the LSB
        let p2 = n - 1 - q2;
        let (hi, lo) = if p1 > p2 { (p1, p2) } else { (p2, p1) };
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << (n - 2)];
        for (k, &a) in self.amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let b1 = (k >> p1) & 1;
            let b2 = (k >> p2) & 1;
            let coeff = target[(b1 << 1) | b2];
            if coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let r = remove_bit(remove_bit(k, hi), lo);
            out[r] += coeff.conj() * a;
        }
        let probability: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        if probability < ZERO_PROBABILITY {
            return Ok(PairProjection {
                probability: 0.0,
                residual: None,
            });
        }
        let inv = 1.0 / probability.sqrt();
        for a in &mut out {
            *a *= inv;
        }
        let labels = self.labels.as_ref().map(|l| l.without_pair(q1, q2));
        Ok(PairProjection {
            probability,
            residual: Some(StateVector {
                n_qubits: n - 2,
                amps: out,
                labels,
            }),
        })
    }
}

/// Outcome of projecting a qubit pair onto a fixed two-qubit vector.
#[derive(Debug, Clone)]
pub struct PairProjection {
    pub probability: f64,
    /// `None` when the branch has zero probability.
    pub residual: Option<StateVector>,
}

/// Drop the bit at position `p` (counted from the LSB), shifting the
/// higher bits down.
#[inline]
fn remove_bit(k: usize, p: usize) -> usize {
    ((k >> (p + 1)) << p) | (k & ((1 << p) - 1))
}
