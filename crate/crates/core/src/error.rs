use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("layout mismatch: {0:?} vs {1:?}")]
    LayoutMismatch(Vec<usize>, Vec<usize>),
    #[error("invalid variable layout: {0}")]
    InvalidLayout(String),
    #[error("variable index {index} out of range for {count} variables")]
    VariableOutOfRange { index: usize, count: usize },
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid tensor format: {0}")]
    InvalidFormat(String),
    #[error("polynomial is not multihomogeneous of multidegree {0:?}")]
    NotMultihomogeneous(Vec<u32>),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("q-product undefined: degree {degree} in slot {slot} is odd")]
    QProductUndefined { slot: usize, degree: u32 },
    #[error("stabilization applies to degree-1 slots (slot {slot} has degree {degree})")]
    NotDegreeOneSlot { slot: usize, degree: u32 },
    #[error("eigenscheme is all of P^1")]
    EigenschemeIsLine,
    #[error("binary eigenvectors need k=1, m=1 (got k={k}, m={m:?})")]
    NotBinaryForm { k: usize, m: Vec<u32> },
    #[error("zero tensor")]
    ZeroTensor,
    #[error("laplacian needs a single-block polynomial (got {0} blocks)")]
    MultiBlock(usize),
    #[error("theorem not applicable: {0}")]
    TheoremNotApplicable(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("Koszul index r={r} outside 2..={max}")]
    KoszulIndexOutOfRange { r: u32, max: u32 },
    #[error("slot {slot} out of range for k={k}")]
    SlotOutOfRange { slot: usize, k: usize },
    #[error("tuple does not match format: {0}")]
    TupleMismatch(String),
    #[error("no tuples supplied")]
    NoTuples,
    #[error("tensor file: {0}")]
    TensorFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
