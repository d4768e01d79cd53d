//! Optimal linear index codes for several senders with side information.
//!
//! * [`fitting`] computes the optimal codelength of a multi-sender instance
//!   as the minimum rank of a fitting matrix.
//! * [`cellular`] handles two senders whose receivers may hear only one of
//!   them.
//! * [`structure`] covers 0-cycles, spanning-tree codes and side-information
//!   criticality.
//! * [`oracle`] is an independent exhaustive search over generator matrices.

pub mod cellular;
pub mod code;
pub mod error;
pub mod fitting;
pub mod fixtures;
pub mod instance;
pub mod linalg;
pub mod msgset;
pub mod oracle;
pub mod search;
pub mod structure;
pub mod sweep;
pub mod template;

pub use code::{encode, format_column, parse_generator, Generator};
pub use error::{Error, Result};
pub use instance::{
    build_message_graph, parse_instance, render_instance, shared_messages, CoverageProfile, Instance, MessageGraph,
};
pub use linalg::{FieldMatrix, PrimeField, SubspaceDims};
pub use msgset::MsgSet;
pub use search::{SearchConfig, DEFAULT_BUDGET};
pub use template::{EntryKind, EntrySpec, SymbolicMatrix};
