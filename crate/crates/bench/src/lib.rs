//! Workloads shared by the benchmarks.

use ixcode_core::{fixtures, Instance, MsgSet};

/// Named instances of increasing search size.
pub fn workloads() -> Vec<(&'static str, Instance)> {
    let mut out = fixtures::all();
    // Six receivers on a directed ring, two overlapping senders.
    let ring = Instance::unicast(
        2,
        (0..6).map(|k| MsgSet::singleton((k + 1) % 6)).collect(),
        vec![(0..4).collect(), (2..6).collect()],
        None,
    )
    .expect("valid ring instance");
    out.push(("ring6", ring));
    out
}
