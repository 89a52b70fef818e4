use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("matrix {rows}x{cols} exceeds the dense Smith normal form cap of {cap}")]
    TooLarge { rows: usize, cols: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("image array {0:?} is not a bijection of 1..n")]
    NotBijective(Vec<usize>),
    #[error("permutation has degree {found}, expected {expected}")]
    Degree { expected: usize, found: usize },
    #[error("group order exceeds the cap of {cap}")]
    OrderCap { cap: usize },
    #[error("element is not contained in the parent group")]
    NotInGroup,
    #[error("invalid cycle notation: {0}")]
    Cycle(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("functoriality fails for morphisms {0} and {1}")]
    NotFunctorial(usize, usize),
    #[error("naturality fails at morphism {0}")]
    NotNatural(usize),
    #[error("modules live over different categories or rings")]
    Mismatch,
    #[error("module is not defined over the automorphisms of object {0}")]
    WrongAutGroup(usize),
    #[error("subgroup is not in the family")]
    NotInFamily,
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("d∘d is nonzero in degree {degree} at object {object}")]
    NotAComplex { degree: usize, object: usize },
    #[error("not a chain map in degree {degree} at object {object}")]
    NotAChainMap { degree: usize, object: usize },
    #[error("complex has no augmentation onto the constant module")]
    NotAugmented,
    #[error("complex term {degree} is not free")]
    NotFree { degree: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid input: {0}")]
    Invalid(String),
}
