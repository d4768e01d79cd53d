//! Reference instances shipped with the crate.

use crate::code::{parse_generator, Generator};
use crate::instance::{parse_instance, Instance};

pub const INSTANCE_A: &str = include_str!("../fixtures/instance_a.txt");
pub const INSTANCE_B: &str = include_str!("../fixtures/instance_b.txt");
pub const INSTANCE_C: &str = include_str!("../fixtures/instance_c.txt");
pub const INSTANCE_D: &str = include_str!("../fixtures/instance_d.txt");
pub const INSTANCE_E: &str = include_str!("../fixtures/instance_e.txt");
/// Length-3 code for instance B.
pub const CODE_B: &str = include_str!("../fixtures/instance_b.gen");
/// Length-2 cellular code for instance C.
pub const CODE_C: &str = include_str!("../fixtures/instance_c.gen");

/// Two senders `{1,2,3}`, `{3,4,5}`; five unicast receivers.
pub fn instance_a() -> Instance {
    parse_instance(INSTANCE_A).expect("fixture A parses")
}

/// Two senders `{1,4}`, `{2,3,4}` with a single length-4 message-connected 0-cycle.
pub fn instance_b() -> Instance {
    parse_instance(INSTANCE_B).expect("fixture B parses")
}

/// Three-node cellular instance where a receiver without side information helps.
pub fn instance_c() -> Instance {
    parse_instance(INSTANCE_C).expect("fixture C parses")
}

/// Five-node cellular instance with pruned side information.
pub fn instance_d() -> Instance {
    parse_instance(INSTANCE_D).expect("fixture D parses")
}

/// Five-node cellular instance where `dim(V1 ∩ V2)` is always zero.
pub fn instance_e() -> Instance {
    parse_instance(INSTANCE_E).expect("fixture E parses")
}

pub fn code_b() -> Generator {
    parse_generator(CODE_B, 4, 2, 2).expect("code for B parses")
}

pub fn code_c() -> Generator {
    parse_generator(CODE_C, 3, 2, 2).expect("code for C parses")
}

/// All five reference instances with their short names.
pub fn all() -> Vec<(&'static str, Instance)> {
    vec![
        ("A", instance_a()),
        ("B", instance_b()),
        ("C", instance_c()),
        ("D", instance_d()),
        ("E", instance_e()),
    ]
}
