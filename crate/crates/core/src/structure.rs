//! 0-cycles, message connectivity, spanning-tree codes and side-information
//! criticality.
//!
//! A message set `B` is a 0-cycle when every receiver wanting a message of
//! `B` knows at least one message of `B`. It is message-connected when `B`
//! induces a connected subgraph of the message graph.

use crate::cellular::cellular_minsearch;
use crate::code::{unit, Generator};
use crate::error::{Error, Result};
use crate::fitting::minrank_search;
use crate::instance::{Instance, MessageGraph};
use crate::msgset::MsgSet;
use crate::search::SearchConfig;

/// Largest message count for subset enumeration.
pub const ZERO_CYCLE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZeroCycle {
    pub messages: MsgSet,
    /// Receivers wanting a message of `messages`.
    pub receivers: MsgSet,
}

fn check_cap(inst: &Instance) -> Result<()> {
    if inst.n() > ZERO_CYCLE_CAP {
        return Err(Error::CapExceeded {
            what: "message count for subset enumeration",
            limit: ZERO_CYCLE_CAP as u64,
            actual: inst.n() as u64,
        });
    }
    Ok(())
}

fn receivers_wanting(inst: &Instance, b: MsgSet) -> MsgSet {
    (0..inst.m()).filter(|&k| b.contains(inst.wants(k))).collect()
}

/// Whether `b` satisfies the 0-cycle condition (empty sets excluded).
pub fn is_zero_cycle(inst: &Instance, b: MsgSet) -> bool {
    !b.is_empty() && receivers_wanting(inst, b).iter().all(|k| inst.side_info(k).intersects(b))
}

/// Every nonempty 0-cycle, in increasing order of its bitmask.
pub fn zero_cycles(inst: &Instance) -> Result<Vec<ZeroCycle>> {
    check_cap(inst)?;
    Ok(MsgSet::full(inst.n())
        .subsets()
        .filter(|&b| is_zero_cycle(inst, b))
        .map(|b| ZeroCycle {
            messages: b,
            receivers: receivers_wanting(inst, b),
        })
        .collect())
}

/// 0-cycles with no proper subset that is also a 0-cycle.
pub fn minimal_zero_cycles(inst: &Instance) -> Result<Vec<ZeroCycle>> {
    let all = zero_cycles(inst)?;
    Ok(all
        .iter()
        .filter(|c| {
            !all.iter()
                .any(|d| d.messages != c.messages && d.messages.is_subset(c.messages))
        })
        .copied()
        .collect())
}

/// Union of all 0-cycles; itself a 0-cycle since the condition is closed
/// under union. Empty when the instance is 0-acyclic.
pub fn maximum_zero_cycle(inst: &Instance) -> Result<MsgSet> {
    Ok(zero_cycles(inst)?
        .iter()
        .fold(MsgSet::EMPTY, |acc, c| acc.union(c.messages)))
}

pub fn is_message_connected(b: MsgSet, u: &MessageGraph) -> bool {
    u.is_connected_within(b)
}

/// Message-connected 0-cycles, in increasing bitmask order.
pub fn mc_zero_cycles(inst: &Instance) -> Result<Vec<MsgSet>> {
    let u = inst.message_graph();
    Ok(zero_cycles(inst)?
        .into_iter()
        .map(|c| c.messages)
        .filter(|&b| is_message_connected(b, &u))
        .collect())
}

/// Messages lying in at least one message-connected 0-cycle.
pub fn mc_cycle_messages(inst: &Instance) -> Result<MsgSet> {
    Ok(mc_zero_cycles(inst)?
        .into_iter()
        .fold(MsgSet::EMPTY, MsgSet::union))
}

pub fn forms_mc_zero_cycle(inst: &Instance, i: usize) -> Result<bool> {
    Ok(mc_cycle_messages(inst)?.contains(i))
}

/// True when no message-connected 0-cycle exists, i.e. when uncoded
/// transmission is optimal.
pub fn thm4_predicate(inst: &Instance) -> Result<bool> {
    Ok(mc_zero_cycles(inst)?.is_empty())
}

/// Code of length `n - 1` built from a message-connected 0-cycle `b`: one
/// column `x_u + x_v` per edge of a BFS spanning tree of `b` in the message
/// graph (sent by the lowest sender holding both ends), and every message
/// outside `b` uncoded (sent by its lowest holder).
pub fn spanning_tree_code(inst: &Instance, b: MsgSet) -> Result<Generator> {
    if !is_zero_cycle(inst, b) {
        return Err(Error::Precondition(format!("{b} is not a 0-cycle")));
    }
    let u = inst.message_graph();
    if !is_message_connected(b, &u) {
        return Err(Error::Precondition(format!("{b} is not message-connected")));
    }
    let n = inst.n();
    let mut gen = Generator::new(inst.field(), n, inst.sender_count());
    let root = b.first().expect("0-cycles are nonempty");
    let mut seen = MsgSet::singleton(root);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in u.neighbors(v).intersection(b).difference(seen).iter() {
            seen.insert(w);
            queue.push_back(w);
            let holder = inst
                .holders(v)
                .intersection(inst.holders(w))
                .first()
                .expect("adjacent messages share a sender");
            let mut col = unit(n, v);
            col[w] = 1;
            gen.push(holder, col);
        }
    }
    for i in MsgSet::full(n).difference(b).iter() {
        gen.push(inst.holders(i).first().expect("every message has a holder"), unit(n, i));
    }
    Ok(gen)
}

/// Sufficient condition for receivers wanting `a` not needing side
/// information `b`: some sender `i` holds `a` but not `b`, and no
/// message-connected 0-cycle contains `b` together with a message shared by
/// `i` and another sender.
pub fn thm2_uncritical(inst: &Instance, a: usize, b: usize) -> Result<bool> {
    let candidates: Vec<usize> = (0..inst.sender_count())
        .filter(|&i| inst.sender(i).contains(a) && !inst.sender(i).contains(b))
        .collect();
    if candidates.is_empty() {
        return Err(Error::Precondition(format!(
            "no sender holds x{} without x{}",
            a + 1,
            b + 1
        )));
    }
    let cycles = mc_zero_cycles(inst)?;
    let shared = inst.shared_messages();
    Ok(candidates.iter().any(|&i| {
        let common = inst.sender(i).intersection(shared);
        !cycles.iter().any(|&c| c.contains(b) && c.intersects(common))
    }))
}

/// The single sender holding receiver `k`'s wanted message, if exactly one does.
pub fn sole_holder(inst: &Instance, k: usize) -> Option<usize> {
    let h = inst.holders(inst.wants(k));
    (h.len() == 1).then(|| h.first().unwrap())
}

/// Sufficient condition for receiver `k`'s side information outside the sole
/// holder of its wanted message being removable: no shared message of that
/// sender which interferes at `k` lies in a message-connected 0-cycle.
pub fn thm3_uncritical(inst: &Instance, k: usize) -> Result<bool> {
    let Some(i) = sole_holder(inst, k) else {
        return Err(Error::Precondition(format!(
            "x{} is held by several senders",
            inst.wants(k) + 1
        )));
    };
    let watched = inst
        .sender(i)
        .intersection(inst.shared_messages())
        .intersection(inst.interference(k));
    Ok(!mc_cycle_messages(inst)?.intersects(watched))
}

/// Union of the message sets of all senders holding receiver `k`'s wanted message.
pub fn holder_union(inst: &Instance, k: usize) -> MsgSet {
    inst.holders(inst.wants(k))
        .iter()
        .fold(MsgSet::EMPTY, |acc, j| acc.union(inst.sender(j)))
}

/// Shared-message version of [`thm3_uncritical`]: for a receiver whose wanted
/// message several senders hold, side information outside the chosen holder
/// `p` is removable for some choice of `p` when no shared interfering message
/// of the holders lies in a message-connected 0-cycle. The verdict does not
/// depend on `p`, which only has to be a holder.
pub fn cor2_uncritical(inst: &Instance, k: usize, p: usize) -> Result<bool> {
    let f = inst.wants(k);
    if inst.holders(f).len() < 2 {
        return Err(Error::Precondition(format!("x{} is not shared", f + 1)));
    }
    if p >= inst.sender_count() || !inst.sender(p).contains(f) {
        return Err(Error::Precondition(format!("sender {} does not hold x{}", p + 1, f + 1)));
    }
    let watched = holder_union(inst, k)
        .intersection(inst.shared_messages())
        .intersection(inst.interference(k));
    Ok(!mc_cycle_messages(inst)?.intersects(watched))
}

/// Optimal linear codelength: the cellular optimum when a coverage profile is
/// present, the multi-sender optimum otherwise.
pub fn optimal_length(inst: &Instance, cfg: &SearchConfig) -> Result<usize> {
    if inst.is_cellular() {
        Ok(cellular_minsearch(inst, cfg)?.n_opt)
    } else {
        Ok(minrank_search(inst, cfg)?.n_opt)
    }
}

/// Whether deleting side-information edge `(k, j)` increases the optimum.
pub fn is_edge_critical_oracle(inst: &Instance, k: usize, j: usize, cfg: &SearchConfig) -> Result<bool> {
    if !inst.side_info(k).contains(j) {
        return Err(Error::Precondition(format!("x{} is not side information of receiver {}", j + 1, k + 1)));
    }
    let base = optimal_length(inst, cfg)?;
    Ok(optimal_length(&inst.without_side_edge(k, j), cfg)? > base)
}

/// Whether message `i` costs exactly one transmission: the optimum equals one
/// plus the optimum of the instance with `i`, its wanters, and all side
/// information about it removed.
pub fn uncoded_equivalence(inst: &Instance, i: usize, cfg: &SearchConfig) -> Result<bool> {
    let base = optimal_length(inst, cfg)?;
    let rest = match inst.delete_message(i) {
        Some(reduced) => optimal_length(&reduced, cfg)?,
        None => 0,
    };
    Ok(base == 1 + rest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCriticality {
    pub receiver: usize,
    pub message: usize,
    /// `None` when the condition does not apply to this edge.
    pub thm2_uncritical: Option<bool>,
    pub thm3_uncritical: Option<bool>,
    /// Set only for edges outside every holder of the wanted message, where
    /// the choice of holder does not matter.
    pub cor2_uncritical: Option<bool>,
    pub oracle_critical: bool,
}

impl EdgeCriticality {
    pub fn flagged_uncritical(&self) -> bool {
        [self.thm2_uncritical, self.thm3_uncritical, self.cor2_uncritical].contains(&Some(true))
    }

    /// A sufficient condition fired on a critical edge.
    pub fn is_violation(&self) -> bool {
        self.flagged_uncritical() && self.oracle_critical
    }
}

/// Receivers with a shared wanted message that satisfy the holder-union
/// condition, with the lowest holder whose outside side information can be
/// dropped all at once without raising the optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolderChoice {
    pub receiver: usize,
    pub removable_for: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityReport {
    pub n_opt: usize,
    pub edges: Vec<EdgeCriticality>,
    pub holder_choices: Vec<HolderChoice>,
}

impl CriticalityReport {
    pub fn violations(&self) -> impl Iterator<Item = &EdgeCriticality> {
        self.edges.iter().filter(|e| e.is_violation())
    }

    pub fn is_sound(&self) -> bool {
        self.violations().next().is_none() && self.holder_choices.iter().all(|h| h.removable_for.is_some())
    }
}

/// Evaluates every side-information edge against the sufficient conditions
/// and against the exact optimum with the edge removed.
pub fn criticality_report(inst: &Instance, cfg: &SearchConfig) -> Result<CriticalityReport> {
    let n_opt = optimal_length(inst, cfg)?;
    let mut edges = Vec::new();
    let mut holder_choices = Vec::new();
    for k in 0..inst.m() {
        let a = inst.wants(k);
        let thm3 = match sole_holder(inst, k) {
            Some(i) => Some((i, thm3_uncritical(inst, k)?)),
            None => None,
        };
        let cor2 = match inst.holders(a).first() {
            Some(p) if inst.holders(a).len() >= 2 => Some(cor2_uncritical(inst, k, p)?),
            _ => None,
        };
        let outside_holders = holder_union(inst, k);
        for j in inst.side_info(k).iter() {
            let thm2 = match thm2_uncritical(inst, a, j) {
                Ok(v) => Some(v),
                Err(Error::Precondition(_)) => None,
                Err(e) => return Err(e),
            };
            let thm3_flag = thm3.and_then(|(i, v)| (!inst.sender(i).contains(j)).then_some(v));
            let cor2_flag = cor2.and_then(|v| (!outside_holders.contains(j)).then_some(v));
            let oracle_critical = optimal_length(&inst.without_side_edge(k, j), cfg)? > n_opt;
            edges.push(EdgeCriticality {
                receiver: k,
                message: j,
                thm2_uncritical: thm2,
                thm3_uncritical: thm3_flag,
                cor2_uncritical: cor2_flag,
                oracle_critical,
            });
        }
        if cor2 == Some(true) {
            let mut removable_for = None;
            for p in inst.holders(a).iter() {
                let kept = inst.side_info(k).intersection(inst.sender(p));
                if optimal_length(&inst.with_side_info(k, kept)?, cfg)? == n_opt {
                    removable_for = Some(p);
                    break;
                }
            }
            holder_choices.push(HolderChoice {
                receiver: k,
                removable_for,
            });
        }
    }
    Ok(CriticalityReport {
        n_opt,
        edges,
        holder_choices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::verify_decoding;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> MsgSet {
        v.iter().map(|i| i - 1).collect()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn instance_a_zero_cycles() {
        let inst = fixtures::instance_a();
        let cycles: Vec<MsgSet> = zero_cycles(&inst).unwrap().iter().map(|c| c.messages).collect();
        assert!(cycles.contains(&set(&[1, 2, 3])));
        assert!(cycles.contains(&set(&[1, 2, 5])));
        let u = inst.message_graph();
        assert!(is_message_connected(set(&[1, 2, 3]), &u));
        assert!(!is_message_connected(set(&[1, 2, 5]), &u));
        assert!(is_message_connected(set(&[4]), &u));
        assert!(forms_mc_zero_cycle(&inst, 0).unwrap());
        assert!(!thm4_predicate(&inst).unwrap());
    }

    #[test]
    fn no_side_info_is_acyclic() {
        let inst = Instance::unicast(2, vec![MsgSet::EMPTY; 3], vec![MsgSet::full(3)], None).unwrap();
        assert!(zero_cycles(&inst).unwrap().is_empty());
        assert!(!forms_mc_zero_cycle(&inst, 1).unwrap());
        assert_eq!(maximum_zero_cycle(&inst).unwrap(), MsgSet::EMPTY);
        assert!(thm3_uncritical(&inst, 0).unwrap());
    }

    #[test]
    fn instance_b_and_c_cycles() {
        let b = fixtures::instance_b();
        assert!(!thm4_predicate(&b).unwrap());
        assert!(mc_zero_cycles(&b).unwrap().contains(&MsgSet::full(4)));
        let c = fixtures::instance_c().without_coverage();
        assert!(forms_mc_zero_cycle(&c, 0).unwrap());
        assert!(mc_zero_cycles(&c).unwrap().contains(&set(&[1, 3])));
    }

    #[test]
    fn cross_sender_cycle_is_not_message_connected() {
        let inst = Instance::unicast(2, vec![set(&[2]), set(&[1])], vec![set(&[1]), set(&[2])], None).unwrap();
        assert!(thm4_predicate(&inst).unwrap());
        assert_eq!(zero_cycles(&inst).unwrap().len(), 1);
    }

    #[test]
    fn minimal_cycles_of_instance_a() {
        let inst = fixtures::instance_a();
        let min: Vec<MsgSet> = minimal_zero_cycles(&inst).unwrap().iter().map(|c| c.messages).collect();
        assert!(min.contains(&set(&[1, 2])));
        assert!(!min.contains(&set(&[1, 2, 3])));
        // The maximum 0-cycle is itself a 0-cycle.
        assert!(is_zero_cycle(&inst, maximum_zero_cycle(&inst).unwrap()));
    }

    #[test]
    fn zero_cycles_are_closed_under_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let inst = crate::sweep::random_instance(&mut rng, 5, 2, 2, false);
            let cycles = zero_cycles(&inst).unwrap();
            for a in &cycles {
                for b in &cycles {
                    assert!(is_zero_cycle(&inst, a.messages.union(b.messages)));
                }
            }
        }
    }

    #[test]
    fn spanning_tree_codes() {
        let b = fixtures::instance_b();
        let code = spanning_tree_code(&b, MsgSet::full(4)).unwrap();
        assert_eq!(code.len(), 3);
        assert_eq!(code.to_string(), "s1: x1+x4\ns2: x2+x4\ns2: x3+x4\n");
        assert!(verify_decoding(&b, &code).unwrap().iter().all(|&ok| ok));

        let a = fixtures::instance_a();
        let code = spanning_tree_code(&a, set(&[1, 2, 3])).unwrap();
        assert_eq!(code.len(), 4);
        assert!(verify_decoding(&a, &code).unwrap().iter().all(|&ok| ok));

        assert!(matches!(spanning_tree_code(&b, set(&[1])), Err(Error::Precondition(_))));
        assert!(matches!(spanning_tree_code(&a, set(&[1, 2, 5])), Err(Error::Precondition(_))));
    }

    #[test]
    fn spanning_tree_over_odd_field() {
        let inst = Instance::unicast(3, vec![set(&[3]), set(&[1]), set(&[2])], vec![MsgSet::full(3)], None).unwrap();
        let code = spanning_tree_code(&inst, MsgSet::full(3)).unwrap();
        assert_eq!(code.len(), 2);
        assert!(verify_decoding(&inst, &code).unwrap().iter().all(|&ok| ok));
    }

    #[test]
    fn criticality_examples() {
        let a = fixtures::instance_a();
        assert!(!thm2_uncritical(&a, 0, 4).unwrap());
        assert!(!thm3_uncritical(&a, 0).unwrap());
        assert!(cor2_uncritical(&a, 2, 0).unwrap());
        assert!(cor2_uncritical(&a, 2, 1).unwrap());
        assert!(matches!(thm3_uncritical(&a, 2), Err(Error::Precondition(_))));
        assert!(matches!(cor2_uncritical(&a, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(thm2_uncritical(&a, 0, 1), Err(Error::Precondition(_))));

        // Disjoint senders: nothing is shared, so the condition holds vacuously.
        let d = Instance::unicast(2, vec![set(&[2]), set(&[1])], vec![set(&[1]), set(&[2])], None).unwrap();
        assert!(thm2_uncritical(&d, 0, 1).unwrap());

        let b = fixtures::instance_b();
        assert!(is_edge_critical_oracle(&b, 0, 1, &cfg()).unwrap());
    }

    #[test]
    fn criticality_report_on_fixtures_is_sound() {
        for inst in [fixtures::instance_a(), fixtures::instance_b()] {
            let r = criticality_report(&inst, &cfg()).unwrap();
            assert_eq!(r.edges.len(), inst.side_edges().len());
            assert!(r.is_sound(), "{r:?}");
        }
    }

    #[test]
    fn uncoded_equivalence_examples() {
        let b = fixtures::instance_b();
        // Deleting x1 leaves no message-connected 0-cycle: 1 + 3 != 3.
        assert!(!uncoded_equivalence(&b, 0, &cfg()).unwrap());
        let one = Instance::unicast(2, vec![MsgSet::EMPTY], vec![MsgSet::full(1)], None).unwrap();
        assert!(uncoded_equivalence(&one, 0, &cfg()).unwrap());
    }

    #[test]
    fn messages_outside_cycles_cost_one_and_flags_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let n = rng.random_range(2..=4);
            let inst = crate::sweep::random_instance(&mut rng, n, 2, 2, false);
            let mc = mc_cycle_messages(&inst).unwrap();
            for i in 0..n {
                if !mc.contains(i) {
                    assert!(uncoded_equivalence(&inst, i, &cfg()).unwrap(), "{inst:?} {i}");
                }
            }
            assert!(criticality_report(&inst, &cfg()).unwrap().is_sound(), "{inst:?}");
        }
    }
}
