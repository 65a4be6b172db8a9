use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::GateOp;
use super::state::{Pauli, StateVector};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Parametric noise: depolarizing after every gate plus independent readout
/// bit flips.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// depolarizing probability after single-qubit gates
    pub p1: f64,
    /// depolarizing probability after two-qubit gates
    pub p2: f64,
    /// readout bit-flip probability
    pub p_ro: f64,
}

impl NoiseSpec {
    pub fn new(p1: f64, p2: f64, p_ro: f64) -> Result<Self> {
        let spec = NoiseSpec { p1, p2, p_ro };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p_ro", self.p_ro)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::BadProbability { name, value });
            }
        }
        Ok(())
    }

    fn is_gate_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

/// Histogram of measured bitstrings. Bitstrings are written with the highest
/// measured qubit first, so qubit 0 is the rightmost character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    num_bits: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl MeasurementCounts {
    fn from_indices(num_bits: usize, shots: u64, by_index: &HashMap<usize, u64>) -> Self {
        let counts = by_index
            .iter()
            .map(|(&idx, &n)| (bitstring(idx, num_bits), n))
            .collect();
        MeasurementCounts { num_bits, shots, counts }
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn probability(&self, bits: &str) -> f64 {
        self.get(bits) as f64 / self.shots as f64
    }

    /// Frequency of the all-zero outcome.
    pub fn p_all_zero(&self) -> f64 {
        self.probability(&"0".repeat(self.num_bits))
    }

    /// (zeros, ones) observed on a single qubit.
    pub fn marginal(&self, qubit: usize) -> (u64, u64) {
        let pos = self.num_bits - 1 - qubit;
        self.counts.iter().fold((0, 0), |(z, o), (bits, &n)| {
            if bits.as_bytes()[pos] == b'0' {
                (z + n, o)
            } else {
                (z, o + n)
            }
        })
    }
}

fn bitstring(index: usize, num_bits: usize) -> String {
    (0..num_bits)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` computational-basis outcomes of `circuit` run from |0...0>.
///
/// Gate noise is realized per shot by inserting a uniformly random Pauli
/// (identity included) on the touched qubits with probability `p1`/`p2`,
/// which averages to the depolarizing channel. Shots that draw the same
/// error pattern share one statevector simulation.
pub fn sample_counts(
    circuit: &Circuit,
    shots: u64,
    noise: Option<&NoiseSpec>,
    rng_seed: u64,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if let Some(n) = noise {
        n.validate()?;
    }
    let mut rng = rng::stream(rng_seed, 0);
    let n = circuit.num_qubits();
    let mut by_index: HashMap<usize, u64> = HashMap::new();

    match noise {
        Some(spec) if !spec.is_gate_noiseless() => {
            let mut patterns: HashMap<Vec<(u32, u8)>, u64> = HashMap::new();
            for _ in 0..shots {
                let pattern = draw_error_pattern(circuit, spec, &mut rng);
                *patterns.entry(pattern).or_insert(0) += 1;
            }
            // deterministic order for reproducible draws
            let mut patterns: Vec<_> = patterns.into_iter().collect();
            patterns.sort();
            for (pattern, count) in patterns {
                let state = run_with_errors(circuit, &pattern)?;
                draw_outcomes(&state.probabilities(), count, &mut rng, &mut by_index);
            }
        }
        _ => {
            let mut state = StateVector::zero(n);
            state.apply_circuit(circuit)?;
            draw_outcomes(&state.probabilities(), shots, &mut rng, &mut by_index);
        }
    }

    if let Some(spec) = noise {
        if spec.p_ro > 0.0 {
            by_index = flip_readout(by_index, n, spec.p_ro, &mut rng);
        }
    }
    Ok(MeasurementCounts::from_indices(n, shots, &by_index))
}

/// Error pattern: (gate position, packed Pauli code) for every gate whose
/// depolarizing event fired with a non-identity Pauli.
fn draw_error_pattern(circuit: &Circuit, spec: &NoiseSpec, rng: &mut Rng) -> Vec<(u32, u8)> {
    let mut pattern = Vec::new();
    for (pos, gate) in circuit.gates().iter().enumerate() {
        let (p, paulis) = match gate.kind().arity() {
            1 => (spec.p1, 4u8),
            _ => (spec.p2, 16u8),
        };
        if p > 0.0 && rng.random::<f64>() < p {
            let code = rng.random_range(0..paulis);
            if code != 0 {
                pattern.push((pos as u32, code));
            }
        }
    }
    pattern
}

fn run_with_errors(circuit: &Circuit, pattern: &[(u32, u8)]) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.num_qubits());
    let mut next = pattern.iter().peekable();
    for (pos, gate) in circuit.gates().iter().enumerate() {
        state.apply(gate)?;
        while let Some(&&(p, code)) = next.peek() {
            if p as usize != pos {
                break;
            }
            for (k, q) in gate.qubits().into_iter().enumerate() {
                state.apply_pauli(q, Pauli::from_index((code >> (2 * k)) as usize));
            }
            next.next();
        }
    }
    Ok(state)
}

fn draw_outcomes(probs: &[f64], shots: u64, rng: &mut Rng, out: &mut HashMap<usize, u64>) {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut tally = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(probs.len() - 1);
        tally[idx] += 1;
    }
    for (idx, n) in tally.into_iter().enumerate().filter(|&(_, n)| n > 0) {
        *out.entry(idx).or_insert(0) += n;
    }
}

fn flip_readout(
    by_index: HashMap<usize, u64>,
    num_bits: usize,
    p_ro: f64,
    rng: &mut Rng,
) -> HashMap<usize, u64> {
    let mut entries: Vec<_> = by_index.into_iter().collect();
    entries.sort_unstable();
    let mut out = HashMap::new();
    for (idx, count) in entries {
        for _ in 0..count {
            let mut flipped = idx;
            for q in 0..num_bits {
                if rng.random::<f64>() < p_ro {
                    flipped ^= 1 << q;
                }
            }
            *out.entry(flipped).or_insert(0) += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    /// Gates rotating the basis eigenstates onto Z. Y uses S-dagger then H.
    pub fn rotation(self, qubit: usize) -> Vec<GateOp> {
        match self {
            Basis::X => vec![GateOp::h(qubit)],
            Basis::Y => vec![GateOp::p(qubit, -FRAC_PI_2), GateOp::h(qubit)],
            Basis::Z => vec![],
        }
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(Basis::X),
            "Y" | "y" => Ok(Basis::Y),
            "Z" | "z" => Ok(Basis::Z),
            other => Err(Error::InvalidBasis(other.to_string())),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        })
    }
}

/// `<P_qubit>` after `circuit`. With `shots = None` the value is exact;
/// otherwise the basis rotation is appended, the register is sampled and
/// `(N0 - N1) / shots` is returned for the chosen qubit.
pub fn pauli_expectation(
    circuit: &Circuit,
    qubit: usize,
    basis: Basis,
    shots: Option<u64>,
    noise: Option<&NoiseSpec>,
    rng_seed: u64,
) -> Result<f64> {
    let n = circuit.num_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange { index: qubit, num_qubits: n });
    }
    match shots {
        None => {
            let mut state = StateVector::zero(n);
            state.apply_circuit(circuit)?;
            state.pauli_expectation(qubit, basis.pauli())
        }
        Some(shots) => {
            let mut measured = circuit.clone();
            for g in basis.rotation(qubit) {
                measured.push(g)?;
            }
            let counts = sample_counts(&measured, shots, noise, rng_seed)?;
            let (zeros, ones) = counts.marginal(qubit);
            Ok((zeros as f64 - ones as f64) / shots as f64)
        }
    }
}
