use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate acts twice on qubit {0}")]
    DuplicateQubit(usize),

    #[error("register size {got} does not match expected {expected}")]
    QubitCountMismatch { expected: usize, got: usize },

    #[error("state vector must have length 2^n, got {0}")]
    BadStateLength(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("partial trace needs a nonempty set of kept qubits")]
    EmptyKeepSet,

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("probability {name} = {value} outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },

    #[error("unknown measurement basis '{0}', expected X, Y or Z")]
    InvalidBasis(String),

    #[error("gate {0} has no parameter")]
    NotParameterized(&'static str),

    #[error("feature vector has {got} entries, feature map expects {expected}")]
    FeatureDimension { expected: usize, got: usize },

    #[error("feature {index} = {value} outside [0, 1]; normalize inputs first")]
    FeatureOutOfRange { index: usize, value: f64 },

    #[error("invalid feature map: {0}")]
    InvalidFeatureMap(String),

    #[error("keep mask has {got} entries, circuit has {expected} gates")]
    MaskLength { expected: usize, got: usize },

    #[error("circuit has no gates")]
    EmptyCircuit,

    #[error("metrics list is empty")]
    EmptyMetrics,

    #[error("metrics are not aligned with circuit positions: {0}")]
    MisalignedMetrics(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("labels must take exactly two distinct values, found {0}")]
    NonBinaryLabels(usize),

    #[error("label {0} is not -1 or +1")]
    BadLabel(f64),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("kernel shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dataset too small: {got} samples, need at least {min}")]
    DatasetTooSmall { got: usize, min: usize },

    #[error("threshold step must be positive, got {0}")]
    BadStep(f64),

    #[error("baseline time must be positive, got {0}")]
    ZeroBaselineTime(f64),

    #[error("no candidates to rank")]
    NoCandidates,

    #[error("every threshold in [{lower}, {upper}) leaves a qubit without gates")]
    AllThresholdsStop { lower: f64, upper: f64 },

    #[error("{num_qubits} qubits exceeds the dense-simulation cap of {cap}")]
    QubitCapExceeded { num_qubits: usize, cap: usize },

    #[error("dataset error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
