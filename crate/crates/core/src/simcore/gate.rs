use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The gate alphabet. Covers the ZZ feature map (H, P, CNOT) plus the
/// rotations needed by the estimators and by general test circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    P,
    Rz,
    Rx,
    Cnot,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::P => "p",
            GateKind::Rz => "rz",
            GateKind::Rx => "rx",
            GateKind::Cnot => "cx",
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(self, GateKind::P | GateKind::Rz | GateKind::Rx)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single gate application. The variant fixes both the arity and whether an
/// angle is carried, so a `GateOp` can never hold the wrong number of
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum GateOp {
    H { target: usize },
    X { target: usize },
    P { target: usize, theta: f64 },
    Rz { target: usize, theta: f64 },
    Rx { target: usize, theta: f64 },
    #[serde(rename = "cx")]
    Cnot { control: usize, target: usize },
}

impl GateOp {
    pub fn h(target: usize) -> Self {
        GateOp::H { target }
    }

    pub fn x(target: usize) -> Self {
        GateOp::X { target }
    }

    pub fn p(target: usize, theta: f64) -> Self {
        GateOp::P { target, theta }
    }

    pub fn rz(target: usize, theta: f64) -> Self {
        GateOp::Rz { target, theta }
    }

    pub fn rx(target: usize, theta: f64) -> Self {
        GateOp::Rx { target, theta }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::H { .. } => GateKind::H,
            GateOp::X { .. } => GateKind::X,
            GateOp::P { .. } => GateKind::P,
            GateOp::Rz { .. } => GateKind::Rz,
            GateOp::Rx { .. } => GateKind::Rx,
            GateOp::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Qubits the gate acts on. For CNOT the order is `[control, target]`,
    /// which is also the bit order of [`GateOp::unitary`] and of reduced
    /// density matrices taken on the gate support.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::H { target }
            | GateOp::X { target }
            | GateOp::P { target, .. }
            | GateOp::Rz { target, .. }
            | GateOp::Rx { target, .. } => vec![target],
            GateOp::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            GateOp::P { theta, .. } | GateOp::Rz { theta, .. } | GateOp::Rx { theta, .. } => {
                Some(theta)
            }
            _ => None,
        }
    }

    pub fn is_parameterized(&self) -> bool {
        self.kind().is_parameterized()
    }

    /// Copy of the gate with its angle replaced.
    pub fn with_param(&self, theta: f64) -> Result<Self> {
        match *self {
            GateOp::P { target, .. } => Ok(GateOp::P { target, theta }),
            GateOp::Rz { target, .. } => Ok(GateOp::Rz { target, theta }),
            GateOp::Rx { target, .. } => Ok(GateOp::Rx { target, theta }),
            _ => Err(Error::NotParameterized(self.name())),
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            GateOp::P { target, theta } => GateOp::P { target, theta: -theta },
            GateOp::Rz { target, theta } => GateOp::Rz { target, theta: -theta },
            GateOp::Rx { target, theta } => GateOp::Rx { target, theta: -theta },
            other => other,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits });
            }
        }
        if let [a, b] = qubits[..] {
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        Ok(())
    }

    /// Local unitary on the gate support: 2x2 for single-qubit gates, 4x4 for
    /// CNOT with the control as the least significant bit.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        match *self {
            GateOp::Cnot { .. } => {
                let mut m = DMatrix::zeros(4, 4);
                m[(0, 0)] = Complex64::ONE;
                m[(2, 2)] = Complex64::ONE;
                m[(3, 1)] = Complex64::ONE;
                m[(1, 3)] = Complex64::ONE;
                m
            }
            _ => {
                let u = self.matrix_1q().expect("single-qubit gate");
                DMatrix::from_fn(2, 2, |r, c| u[r][c])
            }
        }
    }

    /// Row-major 2x2 matrix for single-qubit gates.
    pub(crate) fn matrix_1q(&self) -> Option<[[Complex64; 2]; 2]> {
        let zero = Complex64::ZERO;
        let one = Complex64::ONE;
        match *self {
            GateOp::H { .. } => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                Some([[s, s], [s, -s]])
            }
            GateOp::X { .. } => Some([[zero, one], [one, zero]]),
            GateOp::P { theta, .. } => Some([[one, zero], [zero, Complex64::cis(theta)]]),
            GateOp::Rz { theta, .. } => Some([
                [Complex64::cis(-theta / 2.0), zero],
                [zero, Complex64::cis(theta / 2.0)],
            ]),
            GateOp::Rx { theta, .. } => {
                let c = Complex64::new((theta / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(theta / 2.0).sin());
                Some([[c, s], [s, c]])
            }
            GateOp::Cnot { .. } => None,
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::Cnot { control, target } => write!(f, "cx({control}->{target})"),
            _ => {
                let q = self.qubits()[0];
                match self.param() {
                    Some(theta) => write!(f, "{}({theta})[{q}]", self.name()),
                    None => write!(f, "{}[{q}]", self.name()),
                }
            }
        }
    }
}

/// Free-function form of [`GateOp::unitary`].
pub fn gate_unitary(gate: &GateOp) -> DMatrix<Complex64> {
    gate.unitary()
}
