//! Cycle-accurate simulator of an in-memory computing platform laid out as
//! a finite Cayley tree.
//!
//! Every node of the tree holds one `w`-bit memory word and a few one-bit
//! flags, and talks only to its parent and children. On top of a
//! synchronous lockstep engine the crate runs three bit-serial schemes:
//!
//! * **search**: the root broadcasts a key MSB first, every node compares
//!   it with its own word, and match bits are OR-ed back up to the root,
//! * **max / min**: leaves stream their words MSB first towards the root;
//!   each internal node reduces the bits with OR (AND for min) and cuts off
//!   every participant that disagrees with the running result,
//! * **sort**: repeated max (or min) extraction, with every node holding the
//!   extracted value permanently disabled by a broadcast-only search.
//!
//! Cycle counts are exact. With leaves at depth `h - 1`:
//!
//! | run                     | cycles          |
//! |-------------------------|-----------------|
//! | full search             | `w + 2h - 1`    |
//! | max / min               | `w + h - 1`     |
//! | search broadcast only   | `w + h - 1`     |
//! | one sort round          | `2(w + h)`      |
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use std::sync::Arc;
//! use cayley_imc::{load_list, CayleyTopology, Scheme, TreeParams};
//!
//! let topo = Arc::new(CayleyTopology::build(TreeParams::new(2, 3, 4)?)?);
//! let mut tree = load_list(topo, &[14, 9, 5, 14, 7, 11, 10, 10], Scheme::Max)?;
//! let max = tree.compute_max()?;
//! assert_eq!((max.value, max.cycles), (14, 6));
//! # Ok::<(), cayley_imc::Error>(())
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algorithms;
pub mod engine;
pub mod error;
pub mod node;
pub mod oracle;
pub mod topology;
pub mod word;

pub use algorithms::{
    load_list, resource_report, sort, sort_observed, ExtremumResult, FlagScheme, LoadedTree,
    PaddingPolicy, Scheme, SearchResult, SortOrder, SortResult,
};
pub use engine::{Configuration, Mode, TraceEvent};
pub use error::{Error, Result};
pub use node::{Combine, Emission, Inbox, NodeContext, NodeFlags, NodeState, Port, SearchScope};
pub use topology::{node_count, required_height, CayleyTopology, NodeId, Role, TreeParams};
pub use word::{word_mask, BitWord};
