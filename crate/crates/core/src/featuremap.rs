//! ZZ feature-map construction and gate-level pruning.
//!
//! Features arrive min-max normalized to `[0, 1]` and are scaled by pi before
//! the usual ZZ angles: `P(2 x~)` per qubit and `P(2 (pi - x~_i)(pi - x~_j))`
//! inside each CNOT-P-CNOT entangler, with `x~ = pi * x`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simcore::{Circuit, GateOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entanglement {
    Linear,
    Full,
}

impl Entanglement {
    /// Entangled pairs in placement order: nearest neighbours for linear,
    /// lexicographic `(i < j)` for full.
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Entanglement::Linear => (1..n).map(|j| (j - 1, j)).collect(),
            Entanglement::Full => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
        }
    }
}

impl FromStr for Entanglement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Entanglement::Linear),
            "full" => Ok(Entanglement::Full),
            other => Err(Error::InvalidFeatureMap(format!("unknown entanglement '{other}'"))),
        }
    }
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entanglement::Linear => "linear",
            Entanglement::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureMapSpec {
    pub num_features: usize,
    pub entanglement: Entanglement,
    pub reps: usize,
}

impl FeatureMapSpec {
    pub fn new(num_features: usize, entanglement: Entanglement, reps: usize) -> Result<Self> {
        let spec = FeatureMapSpec { num_features, entanglement, reps };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_features == 0 {
            return Err(Error::InvalidFeatureMap("needs at least one feature".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidFeatureMap("reps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_features
    }

    pub fn gate_count(&self) -> usize {
        let pairs = self.entanglement.pairs(self.num_features).len();
        self.reps * (2 * self.num_features + 3 * pairs)
    }

    /// Short label such as `zz_linear_r1`.
    pub fn label(&self) -> String {
        format!("zz_{}_r{}", self.entanglement, self.reps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateRole {
    Hadamard,
    SinglePhase,
    EntanglerCx,
    EntanglerPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    /// repetition index, 0-based
    pub layer: usize,
    pub role: GateRole,
    /// position in the unpruned map
    pub source_position: usize,
}

/// A feature map bound to one feature vector, with per-gate provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCircuit {
    pub circuit: Circuit,
    pub features: Vec<f64>,
    pub provenance: Vec<Provenance>,
}

impl BoundCircuit {
    pub fn len(&self) -> usize {
        self.circuit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuit.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }
}

fn single_angle(x: f64) -> f64 {
    2.0 * PI * x
}

fn pair_angle(xi: f64, xj: f64) -> f64 {
    2.0 * (PI - PI * xi) * (PI - PI * xj)
}

fn check_features(spec: &FeatureMapSpec, x: &[f64]) -> Result<()> {
    spec.validate()?;
    if x.len() != spec.num_features {
        return Err(Error::FeatureDimension { expected: spec.num_features, got: x.len() });
    }
    for (index, &value) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::FeatureOutOfRange { index, value });
        }
    }
    Ok(())
}

pub fn build_zz_map(spec: &FeatureMapSpec, x: &[f64]) -> Result<BoundCircuit> {
    check_features(spec, x)?;
    let n = spec.num_features;
    let pairs = spec.entanglement.pairs(n);
    let mut circuit = Circuit::new(n)?;
    let mut provenance = Vec::with_capacity(spec.gate_count());
    let mut push = |gate: GateOp, layer: usize, role: GateRole| -> Result<()> {
        let source_position = provenance.len();
        circuit.push(gate)?;
        provenance.push(Provenance { layer, role, source_position });
        Ok(())
    };

    for layer in 0..spec.reps {
        for q in 0..n {
            push(GateOp::h(q), layer, GateRole::Hadamard)?;
        }
        for (q, &xq) in x.iter().enumerate() {
            push(GateOp::p(q, single_angle(xq)), layer, GateRole::SinglePhase)?;
        }
        for &(i, j) in &pairs {
            push(GateOp::cnot(i, j), layer, GateRole::EntanglerCx)?;
            push(GateOp::p(j, pair_angle(x[i], x[j])), layer, GateRole::EntanglerPhase)?;
            push(GateOp::cnot(i, j), layer, GateRole::EntanglerCx)?;
        }
    }
    debug_assert_eq!(circuit.len(), spec.gate_count());
    Ok(BoundCircuit { circuit, features: x.to_vec(), provenance })
}

/// Which gates of a source circuit survive pruning.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeepMask(Vec<bool>);

impl KeepMask {
    pub fn all(len: usize) -> Self {
        KeepMask(vec![true; len])
    }

    pub fn none(len: usize) -> Self {
        KeepMask(vec![false; len])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        KeepMask(bits)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn kept(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_all(&self) -> bool {
        self.0.iter().all(|&b| b)
    }

    /// `1` for kept, `0` for dropped, position 0 first.
    pub fn to_bit_string(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::InvalidConfig(format!("bad mask character '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(KeepMask)
    }
}

pub fn prune(circuit: &BoundCircuit, mask: &KeepMask) -> Result<BoundCircuit> {
    if mask.len() != circuit.len() {
        return Err(Error::MaskLength { expected: circuit.len(), got: mask.len() });
    }
    let mut pruned = Circuit::new(circuit.num_qubits())?;
    let mut provenance = Vec::with_capacity(mask.kept());
    for ((gate, prov), &keep) in circuit
        .circuit
        .gates()
        .iter()
        .zip(&circuit.provenance)
        .zip(mask.as_slice())
    {
        if keep {
            pruned.push(*gate)?;
            provenance.push(*prov);
        }
    }
    Ok(BoundCircuit { circuit: pruned, features: circuit.features.clone(), provenance })
}

pub fn active_qubits(circuit: &Circuit) -> BTreeSet<usize> {
    circuit.active_qubits()
}

/// A feature map plus an optional pruning mask; binds feature vectors to
/// concrete circuits. Gate positions do not depend on the data, so one mask
/// applies to every binding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitTemplate {
    pub spec: FeatureMapSpec,
    pub mask: Option<KeepMask>,
}

impl CircuitTemplate {
    pub fn new(spec: FeatureMapSpec) -> Self {
        CircuitTemplate { spec, mask: None }
    }

    pub fn with_mask(spec: FeatureMapSpec, mask: KeepMask) -> Result<Self> {
        if mask.len() != spec.gate_count() {
            return Err(Error::MaskLength { expected: spec.gate_count(), got: mask.len() });
        }
        Ok(CircuitTemplate { spec, mask: Some(mask) })
    }

    pub fn num_qubits(&self) -> usize {
        self.spec.num_qubits()
    }

    pub fn gate_count(&self) -> usize {
        self.mask.as_ref().map_or(self.spec.gate_count(), KeepMask::kept)
    }

    pub fn bind(&self, x: &[f64]) -> Result<Circuit> {
        let full = build_zz_map(&self.spec, x)?;
        match &self.mask {
            None => Ok(full.circuit),
            Some(mask) => Ok(prune(&full, mask)?.circuit),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::GateKind;

    fn spec(n: usize, e: Entanglement, reps: usize) -> FeatureMapSpec {
        FeatureMapSpec::new(n, e, reps).unwrap()
    }

    #[test]
    fn gate_counts_match_published_and_derived_sizes() {
        let x9 = vec![0.5; 9];
        assert_eq!(build_zz_map(&spec(9, Entanglement::Linear, 1), &x9).unwrap().len(), 42);
        let x10 = vec![0.5; 10];
        assert_eq!(build_zz_map(&spec(10, Entanglement::Full, 1), &x10).unwrap().len(), 155);
        assert_eq!(build_zz_map(&spec(10, Entanglement::Linear, 3), &x10).unwrap().len(), 141);
        assert_eq!(build_zz_map(&spec(10, Entanglement::Linear, 1), &x10).unwrap().len(), 47);
    }

    #[test]
    fn gate_count_formula_over_grid() {
        for n in 2..=12 {
            for reps in 1..=3 {
                for e in [Entanglement::Linear, Entanglement::Full] {
                    let pairs = match e {
                        Entanglement::Linear => n - 1,
                        Entanglement::Full => n * (n - 1) / 2,
                    };
                    let c = build_zz_map(&spec(n, e, reps), &vec![0.3; n]).unwrap();
                    assert_eq!(c.len(), reps * (2 * n + 3 * pairs));
                    assert_eq!(c.provenance.len(), c.len());
                }
            }
        }
    }

    #[test]
    fn layout_of_one_repetition() {
        let c = build_zz_map(&spec(3, Entanglement::Linear, 1), &[0.1, 0.2, 0.3]).unwrap();
        let kinds: Vec<GateKind> = c.circuit.gates().iter().map(|g| g.kind()).collect();
        use GateKind::*;
        assert_eq!(kinds, vec![H, H, H, P, P, P, Cnot, P, Cnot, Cnot, P, Cnot]);
        assert_eq!(c.circuit.gates()[6], GateOp::cnot(0, 1));
        assert_eq!(c.circuit.gates()[9], GateOp::cnot(1, 2));
        let theta = c.circuit.gates()[3].param().unwrap();
        assert!((theta - 2.0 * PI * 0.1).abs() < 1e-12);
        let pair = c.circuit.gates()[7].param().unwrap();
        assert!((pair - 2.0 * (PI - 0.1 * PI) * (PI - 0.2 * PI)).abs() < 1e-12);
        assert_eq!(c.circuit.gates()[7].qubits(), vec![1]);
    }

    #[test]
    fn zero_features_give_reference_angles() {
        let c = build_zz_map(&spec(4, Entanglement::Full, 2), &[0.0; 4]).unwrap();
        for (g, p) in c.circuit.gates().iter().zip(&c.provenance) {
            match p.role {
                GateRole::SinglePhase => assert_eq!(g.param(), Some(0.0)),
                GateRole::EntanglerPhase => {
                    assert!((g.param().unwrap() - 2.0 * PI * PI).abs() < 1e-12)
                }
                _ => assert!(g.param().is_none()),
            }
        }
    }

    #[test]
    fn full_pattern_is_lexicographic() {
        assert_eq!(
            Entanglement::Full.pairs(4),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(Entanglement::Linear.pairs(4), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = spec(3, Entanglement::Linear, 1);
        assert!(matches!(build_zz_map(&s, &[0.1, 0.2]), Err(Error::FeatureDimension { .. })));
        assert!(matches!(
            build_zz_map(&s, &[0.1, 1.2, 0.0]),
            Err(Error::FeatureOutOfRange { index: 1, .. })
        ));
        assert!(FeatureMapSpec::new(0, Entanglement::Linear, 1).is_err());
        assert!(FeatureMapSpec::new(2, Entanglement::Linear, 0).is_err());
    }

    #[test]
    fn prune_examples() {
        let c = build_zz_map(&spec(9, Entanglement::Linear, 1), &[0.4; 9]).unwrap();
        assert_eq!(prune(&c, &KeepMask::all(42)).unwrap(), c);
        let empty = prune(&c, &KeepMask::none(42)).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.num_qubits(), 9);

        let mut bits = vec![true; 42];
        for i in [0, 10, 11, 12, 18, 20, 25, 30, 35, 40] {
            bits[i] = false;
        }
        let pruned = prune(&c, &KeepMask::from_bools(bits)).unwrap();
        assert_eq!(pruned.len(), 32);
        assert_eq!(pruned.provenance[0].source_position, 1);
        assert!(prune(&c, &KeepMask::all(41)).is_err());
    }

    #[test]
    fn every_qubit_active_in_full_map() {
        let c = build_zz_map(&spec(9, Entanglement::Linear, 1), &[0.2; 9]).unwrap();
        assert_eq!(active_qubits(&c.circuit).len(), 9);
    }

    #[test]
    fn template_binding_applies_mask() {
        let s = spec(3, Entanglement::Linear, 1);
        let mut bits = vec![true; s.gate_count()];
        bits[0] = false;
        let t = CircuitTemplate::with_mask(s, KeepMask::from_bools(bits)).unwrap();
        let c = t.bind(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(c.len(), s.gate_count() - 1);
        assert_eq!(t.gate_count(), c.len());
        assert!(CircuitTemplate::with_mask(s, KeepMask::all(3)).is_err());
    }

    #[test]
    fn mask_bit_string_round_trip() {
        let m = KeepMask::from_bools(vec![true, false, true]);
        assert_eq!(m.to_bit_string(), "101");
        assert_eq!(KeepMask::from_bit_string("101").unwrap(), m);
        assert!(KeepMask::from_bit_string("1x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn prune_is_idempotent(bits in proptest::collection::vec(any::<bool>(), 17)) {
                let c = build_zz_map(&spec(4, Entanglement::Linear, 1), &[0.1, 0.5, 0.9, 0.3]).unwrap();
                let once = prune(&c, &KeepMask::from_bools(bits)).unwrap();
                let again = prune(&once, &KeepMask::all(once.len())).unwrap();
                prop_assert_eq!(once, again);
            }

            #[test]
            fn binding_is_deterministic(x in proptest::collection::vec(0.0f64..=1.0, 5)) {
                let s = spec(5, Entanglement::Full, 2);
                prop_assert_eq!(build_zz_map(&s, &x).unwrap(), build_zz_map(&s, &x).unwrap());
            }
        }
    }
}
