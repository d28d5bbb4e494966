use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unrecognized root system label: {0}")]
    UnrecognizedLabel(String),
    #[error("rank mismatch for type {letter}: {rank} is not allowed")]
    RankMismatch { letter: char, rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponential kernel for a central torus needs user-supplied lattice data")]
    KernelDataRequired,
    #[error("Weyl group order exceeds the enumeration bound {0}")]
    WeylBoundExceeded(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("tau is not a bijection gamma1 -> gamma2: {0}")]
    NotBijective(String),
    /// Zero-based simple-root indices; displayed one-based.
    #[error("tau is not an isometry on the pair ({}, {})", .0 + 1, .1 + 1)]
    NotIsometry(usize, usize),
    #[error("tau is not nilpotent: cycle {}", one_based(.0))]
    NotNilpotent(Vec<usize>),
    #[error("r0 constraints are infeasible: {0}")]
    Infeasible(String),
    #[error("target theta does not preserve the invariant form")]
    TargetThetaNotIsometry,
    #[error("r0 does not satisfy the constraints: {0}")]
    InvalidR0(String),
    #[error("no form-compatible complement a_i exists: {0}")]
    DegenerateComplement(String),
    #[error("not a minimal length coset representative: {0}")]
    NotMinimalRep(String),
    #[error("simplified path unavailable: {0}")]
    SimplifiedPathUnavailable(String),
    #[error("1 - theta is singular on h")]
    ThetaMinusOneSingular,
    #[error("lattices are not commensurable: {0}")]
    NonCommensurableLattices(String),
    #[error("operation requires a type A_n root system without torus")]
    NotTypeA,
    #[error("twist does not preserve the subalgebra")]
    SubalgebraNotPreserved,
    #[error("element is not in the Levi subgroup: {0}")]
    NotInLevi(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad input rather than a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::DegenerateComplement(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn one_based(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", parts.join(" -> "))
}
