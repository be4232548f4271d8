//! The twelve-qubit entangled channel shared by Alice, Bob and Charlie,
//! plus the party-facing qubit labels and the two-qubit message states.
//!
//! The channel is built along two independent paths: the H/CNOT circuit
//! and a direct enumeration of its 64 basis strings. The direct form is
//! the ground truth the protocol runs on; the circuit is cross-checked
//! against it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{GateOp, StateVector, NORM_TOLERANCE};

/// One of the three participants, or the message registers they feed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
    Message,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Party::Alice => "Alice",
            Party::Bob => "Bob",
            Party::Charlie => "Charlie",
            Party::Message => "Message",
        };
        f.write_str(s)
    }
}

/// Named qubit: twelve channel qubits (four per party) and the six
/// message qubits α0..γ1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QubitLabel {
    Alpha0,
    Alpha1,
    Beta0,
    Beta1,
    Gamma0,
    Gamma1,
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
    C1,
    C2,
    C3,
    C4,
}

impl QubitLabel {
    pub const ALL: [QubitLabel; 18] = [
        QubitLabel::Alpha0,
        QubitLabel::Alpha1,
        QubitLabel::Beta0,
        QubitLabel::Beta1,
        QubitLabel::Gamma0,
        QubitLabel::Gamma1,
        QubitLabel::A1,
        QubitLabel::A2,
        QubitLabel::A3,
        QubitLabel::A4,
        QubitLabel::B1,
        QubitLabel::B2,
        QubitLabel::B3,
        QubitLabel::B4,
        QubitLabel::C1,
        QubitLabel::C2,
        QubitLabel::C3,
        QubitLabel::C4,
    ];

    pub fn party(self) -> Party {
        use QubitLabel::*;
        match self {
            Alpha0 | Alpha1 | Beta0 | Beta1 | Gamma0 | Gamma1 => Party::Message,
            A1 | A2 | A3 | A4 => Party::Alice,
            B1 | B2 | B3 | B4 => Party::Bob,
            C1 | C2 | C3 | C4 => Party::Charlie,
        }
    }

    pub fn as_str(self) -> &'static str {
        use QubitLabel::*;
        match self {
            Alpha0 => "alpha0",
            Alpha1 => "alpha1",
            Beta0 => "beta0",
            Beta1 => "beta1",
            Gamma0 => "gamma0",
            Gamma1 => "gamma1",
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            A4 => "A4",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            B4 => "B4",
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            C4 => "C4",
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        QubitLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::LabelMap(format!("unknown qubit label {s:?}")))
    }
}

/// Injective binding of qubit labels to physical register indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    bindings: Vec<(QubitLabel, usize)>,
}

impl LabelMap {
    pub fn new(bindings: &[(QubitLabel, usize)]) -> Result<Self> {
        let mut seen_labels = Vec::new();
        let mut seen_indices = Vec::new();
        for &(label, idx) in bindings {
            if seen_labels.contains(&label) {
                return Err(Error::LabelMap(format!("duplicate label {label}")));
            }
            if seen_indices.contains(&idx) {
                return Err(Error::LabelMap(format!("duplicate index {idx}")));
            }
            seen_labels.push(label);
            seen_indices.push(idx);
        }
        Ok(LabelMap {
            bindings: bindings.to_vec(),
        })
    }

    pub fn index_of(&self, label: QubitLabel) -> Option<usize> {
        self.bindings
            .iter()
            .find(|(l, _)| *l == label)
            .map(|&(_, i)| i)
    }

    pub fn label_at(&self, index: usize) -> Option<QubitLabel> {
        self.bindings
            .iter()
            .find(|(_, i)| *i == index)
            .map(|&(l, _)| l)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (QubitLabel, usize)> + '_ {
        self.bindings.iter().copied()
    }

    pub(crate) fn indices(&self) -> Vec<usize> {
        self.bindings.iter().map(|&(_, i)| i).collect()
    }

    /// Shift every bound index up by `by` (used when tensoring).
    pub(crate) fn offset(&self, by: usize) -> LabelMap {
        LabelMap {
            bindings: self.bindings.iter().map(|&(l, i)| (l, i + by)).collect(),
        }
    }

    pub(crate) fn merged(&self, other: &LabelMap) -> Result<LabelMap> {
        let mut bindings = self.bindings.clone();
        bindings.extend(other.bindings.iter().copied());
        LabelMap::new(&bindings)
    }

    /// Drop the bindings at the two measured indices and compact the
    /// remaining indices, preserving relative order.
    pub(crate) fn without_pair(&self, q1: usize, q2: usize) -> LabelMap {
        let bindings = self
            .bindings
            .iter()
            .filter(|&&(_, i)| i != q1 && i != q2)
            .map(|&(l, i)| {
                let shift = (i > q1) as usize + (i > q2) as usize;
                (l, i - shift)
            })
            .collect();
        LabelMap { bindings }
    }
}

/// Physical channel index (0-based) of each label: the circuit's wires
/// 1..12 carry, in order, B4 C1 C3 C4 A1 A3 A4 B1 B3 A2 B2 C2.
pub const CHANNEL_LABELS: [(QubitLabel, usize); 12] = [
    (QubitLabel::B4, 0),
    (QubitLabel::C1, 1),
    (QubitLabel::C3, 2),
    (QubitLabel::C4, 3),
    (QubitLabel::A1, 4),
    (QubitLabel::A3, 5),
    (QubitLabel::A4, 6),
    (QubitLabel::B1, 7),
    (QubitLabel::B3, 8),
    (QubitLabel::A2, 9),
    (QubitLabel::B2, 10),
    (QubitLabel::C2, 11),
];

// The construction circuit in its native 1-based wire numbering.
const CIRCUIT_H_WIRES: [usize; 6] = [1, 4, 7, 10, 11, 12];
const CIRCUIT_CNOT_WIRES: [(usize, usize); 6] = [(1, 2), (1, 3), (4, 5), (4, 6), (7, 8), (7, 9)];

/// Single conversion point from 1-based circuit wires to 0-based
/// physical indices.
fn wire_to_physical(wire: usize) -> usize {
    wire - 1
}

fn channel_label_map() -> LabelMap {
    LabelMap::new(&CHANNEL_LABELS).expect("static channel labels are a valid map")
}

/// Build the channel by running the construction circuit: H on wires
/// 1, 4, 7, 10, 11, 12 of `|0…0⟩`, then CNOTs with wires 1, 4, 7
/// controlling (2;3), (5;6) and (8;9).
pub fn build_channel() -> StateVector {
    let mut s = StateVector::zero(12).expect("12 <= MAX_QUBITS");
    for &wire in &CIRCUIT_H_WIRES {
        s = s
            .apply_gate(GateOp::H(wire_to_physical(wire)))
            .expect("valid circuit wire");
    }
    for &(control, target) in &CIRCUIT_CNOT_WIRES {
        s = s
            .apply_gate(GateOp::Cnot {
                control: wire_to_physical(control),
                target: wire_to_physical(target),
            })
            .expect("valid circuit wires");
    }
    s.with_labels(channel_label_map())
        .expect("12 labels fit a 12-qubit register")
}

/// Direct form of the channel: 64 basis strings, each with amplitude
/// exactly +1/8. The support is the product of {000,111} on (B4,C1,C3),
/// {000,111} on (C4,A1,A3), {000,111} on (A4,B1,B3) and all eight
/// strings on (A2,B2,C2). This is the state the protocol treats as
/// ground truth.
pub fn reference_channel() -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << 12];
    let eighth = Complex64::new(0.125, 0.0);
    for f1 in [0b000usize, 0b111] {
        for f2 in [0b000usize, 0b111] {
            for g in [0b000usize, 0b111] {
                for u in 0..8usize {
                    let idx = (((f1 << 3 | f2) << 3 | g) << 3) | u;
                    amps[idx] = eighth;
                }
            }
        }
    }
    StateVector::from_amplitudes(amps)
        .expect("4096 amplitudes")
        .with_labels(channel_label_map())
        .expect("12 labels fit")
}

/// First discrepancy found while checking a candidate channel state.
#[derive(Debug, Clone)]
pub struct ChannelMismatch {
    pub basis: usize,
    pub basis_bits: String,
    pub expected: Complex64,
    pub actual: Complex64,
}

impl fmt::Display for ChannelMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "basis |{}⟩ (index {}): expected {:.6}{:+.6}i, got {:.6}{:+.6}i",
            self.basis_bits,
            self.basis,
            self.expected.re,
            self.expected.im,
            self.actual.re,
            self.actual.im
        )
    }
}

/// Result of [`verify_channel`]: `ok` plus the first mismatching basis
/// string when the check fails.
#[derive(Debug, Clone)]
pub struct ChannelCheck {
    pub ok: bool,
    pub mismatch: Option<ChannelMismatch>,
}

/// Check a 12-qubit state against the reference channel, amplitude by
/// amplitude within 1e-12, up to a global phase.
pub fn verify_channel(s: &StateVector) -> Result<ChannelCheck> {
    if s.n_qubits() != 12 {
        return Err(Error::DimensionMismatch(s.n_qubits(), 12));
    }
    let reference = reference_channel();
    // Fix the global phase on the first reference-support amplitude;
    // index 0 is always in the support (amplitude 1/8).
    let anchor = s.amplitude(0);
    let phase = if anchor.norm() > 1e-12 {
        anchor / anchor.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    for (k, &expected_raw) in reference.amplitudes().iter().enumerate() {
        let expected = phase * expected_raw;
        let actual = s.amplitude(k);
        if (actual - expected).norm() > 1e-12 {
            return Ok(ChannelCheck {
                ok: false,
                mismatch: Some(ChannelMismatch {
                    basis: k,
                    basis_bits: format!("{k:012b}"),
                    expected,
                    actual,
                }),
            });
        }
    }
    Ok(ChannelCheck {
        ok: true,
        mismatch: None,
    })
}

/// A two-qubit message of the form `a0|00⟩ + a1|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MessageState {
    amp0: Complex64,
    amp1: Complex64,
}

impl MessageState {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm_sq = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(MessageState { amp0, amp1 })
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    /// The 4-amplitude register `(a0, 0, 0, a1)`.
    pub fn to_state(self) -> StateVector {
        StateVector::from_amplitudes(vec![
            self.amp0,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            self.amp1,
        ])
        .expect("4 amplitudes")
    }

    /// Random state of the family, drawn as
    /// `cos θ e^{iφ0}|00⟩ + sin θ e^{iφ1}|11⟩`.
    pub fn random(rng: &mut impl rand::Rng) -> Self {
        let theta = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let phi0 = rng.gen::<f64>() * std::f64::consts::TAU;
        let phi1 = rng.gen::<f64>() * std::f64::consts::TAU;
        let amp0 = Complex64::from_polar(theta.cos(), phi0);
        let amp1 = Complex64::from_polar(theta.sin(), phi1);
        MessageState { amp0, amp1 }
    }

    /// Random family state with both magnitudes bounded away from zero
    /// and from each other. Equal-magnitude or near-basis states admit
    /// accidental extra Pauli corrections, so derivation probes must
    /// avoid them.
    pub(crate) fn random_generic(rng: &mut impl rand::Rng) -> Self {
        loop {
            let s = MessageState::random(rng);
            let (m0, m1) = (s.amp0.norm(), s.amp1.norm());
            if m0.min(m1) > 0.15 && (m0 - m1).abs() > 0.1 {
                return s;
            }
        }
    }
}

/// Build the 4-amplitude state `a0|00⟩ + a1|11⟩`, rejecting
/// non-normalized coefficients.
pub fn build_message(amp0: Complex64, amp1: Complex64) -> Result<StateVector> {
    Ok(MessageState::new(amp0, amp1)?.to_state())
}
