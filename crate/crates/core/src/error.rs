use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("canvas of {pixels} pixels exceeds the pixel cap of {cap}")]
    PixelCap { pixels: usize, cap: usize },
    #[error("canvas dimensions must be positive, got {width}x{height}")]
    EmptyCanvas { width: usize, height: usize },
    #[error("expected {expected} pixel values, got {actual}")]
    ValueCount { expected: usize, actual: usize },
    #[error("pixel {pixel} has {actual} parameters, expected {expected}")]
    RaggedValues { pixel: usize, expected: usize, actual: usize },
    #[error("parameter count must be between 1 and 64, got {0}")]
    ParameterCount(usize),
    #[error("value {value:#x} of pixel {pixel} does not fit in {bits} bits")]
    ValueWidth { pixel: usize, value: u64, bits: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("offset N = {offset} is below the maximum edge weight {max_weight}")]
    OffsetTooSmall { offset: u32, max_weight: u32 },
    #[error("order values up to {0} do not fit the order table")]
    OrderOverflow(u64),
    #[error("pixel set {set:#x} is not contained in a universe of {pixels} pixels")]
    OutOfUniverse { set: u32, pixels: usize },
    #[error("separations belong to different universes")]
    UniverseMismatch,
    #[error("separation {0:#x} is not a member of the stratum")]
    NotInStratum(u32),
    #[error("stratum index k must be at least 1")]
    ZeroStratum,
    #[error("profiles are not distinguishable")]
    Indistinguishable,
    #[error("profile of order {lower} cannot induce a profile of order {higher}")]
    InductionDirection { lower: u64, higher: u64 },
    #[error("tree set search exhausted without a valid line set (this indicates a bug)")]
    SearchExhausted,
    #[error("pixel subset is empty")]
    EmptySubset,
    #[error("a line must have a nonempty proper side, got {0:#x}")]
    NotALine(u32),
    #[error("lines {0:#x} and {1:#x} cross")]
    NotLaminar(u32, u32),
}

pub type Result<T> = std::result::Result<T, Error>;
