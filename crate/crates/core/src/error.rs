use core::fmt;

use crate::engine::Mode;

/// Errors raised by tree construction, the engine, and the schemes built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A tree parameter was outside its valid range.
    InvalidParams { what: &'static str, value: usize },
    /// Node count (or a height search) overflowed `usize`.
    Overflow { eta: usize, height: usize },
    /// The tree has no non-root slots to hold data.
    NoDataSlots,
    /// An element does not fit in the configured word width.
    ElementOutOfRange { value: u64, word_size: u32 },
    /// More elements than non-root slots.
    ListTooLong { len: usize, capacity: usize },
    /// An inbox did not have one slot per child port of its node.
    PortMismatch {
        node: usize,
        expected: usize,
        got: usize,
    },
    /// `step` was called on an idle configuration.
    Idle,
    /// A scheme was run on a tree loaded for a different one.
    WrongMode { expected: Mode, found: Mode },
    /// The termination predicate never held within the cycle budget.
    BudgetExceeded { mode: Mode, budget: u64 },
    /// A snapshot did not describe the topology it was replayed onto.
    SnapshotMismatch { expected: usize, got: usize },
    /// A sort round disabled no node.
    SortStalled { round: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { what, value } => write!(f, "invalid {what}: {value}"),
            Error::Overflow { eta, height } => {
                write!(f, "node count overflows for eta={eta}, height={height}")
            }
            Error::NoDataSlots => f.write_str("tree of height 1 has no data slots"),
            Error::ElementOutOfRange { value, word_size } => {
                write!(f, "element {value} does not fit in {word_size} bits")
            }
            Error::ListTooLong { len, capacity } => {
                write!(
                    f,
                    "list of {len} elements exceeds the {capacity} non-root slots"
                )
            }
            Error::PortMismatch {
                node,
                expected,
                got,
            } => write!(
                f,
                "node {node} has {expected} child ports but inbox carries {got}"
            ),
            Error::Idle => f.write_str("cannot step an idle configuration"),
            Error::WrongMode { expected, found } => {
                write!(f, "tree is loaded for {found:?}, expected {expected:?}")
            }
            Error::BudgetExceeded { mode, budget } => {
                write!(f, "{mode:?} run did not quiesce within {budget} cycles")
            }
            Error::SnapshotMismatch { expected, got } => {
                write!(f, "snapshot has {got} nodes, topology has {expected}")
            }
            Error::SortStalled { round } => {
                write!(f, "sort round {round} matched no enabled node")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
