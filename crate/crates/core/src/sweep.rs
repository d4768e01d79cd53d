//! Instance enumerators, a seeded random generator, and cross-checks between
//! the solvers, the oracle and the structural predicates.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;

use crate::cellular::{
    cellular_minsearch, exists_nonzero_intersection, prop4_predicate, prune_side_info, Intersection,
};
use crate::error::{Error, Result};
use crate::fitting::minrank_search;
use crate::instance::{render_instance, CoverageProfile, Instance};
use crate::msgset::MsgSet;
use crate::oracle::{oracle_cellular, oracle_multisender, verify_decoding, SearchBounds};
use crate::search::SearchConfig;
use crate::structure::{criticality_report, mc_cycle_messages, mc_zero_cycles, spanning_tree_code, thm4_predicate, uncoded_equivalence};

/// Random instance with `n` messages and `senders` senders over GF(`q`).
/// Every message gets a random nonempty set of holders and every other
/// message is side information with probability 0.4. With `cellular`, the
/// instance has two senders, `q = 2`, `m = n`, `f = id` and a coverage
/// profile in which each restricted receiver hears a holder of its message.
/// Otherwise half the instances use `m = n`, `f = id` and the rest random
/// wants with `1 <= m <= n + 1`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, senders: usize, q: u32, cellular: bool) -> Instance {
    let (senders, q) = if cellular { (2, 2) } else { (senders.max(1), q) };
    let mut sets = vec![MsgSet::EMPTY; senders];
    for i in 0..n {
        let mask = rng.random_range(1..(1u64 << senders));
        for (j, s) in sets.iter_mut().enumerate() {
            if mask >> j & 1 == 1 {
                s.insert(i);
            }
        }
    }
    let wants: Vec<usize> = if cellular || rng.random_bool(0.5) {
        (0..n).collect()
    } else {
        let m = rng.random_range(1..=n + 1);
        (0..m).map(|_| rng.random_range(0..n)).collect()
    };
    let side_info = wants
        .iter()
        .map(|&f| (0..n).filter(|&j| j != f && rng.random_bool(0.4)).collect())
        .collect();
    let coverage = cellular.then(|| {
        let (mut r1, mut r2, mut rc) = (MsgSet::EMPTY, MsgSet::EMPTY, MsgSet::EMPTY);
        for k in 0..n {
            match rng.random_range(0..3) {
                0 if sets[0].contains(k) => r1.insert(k),
                1 if sets[1].contains(k) => r2.insert(k),
                _ => rc.insert(k),
            }
        }
        CoverageProfile::new(r1, r2, rc)
    });
    Instance::new(q, n, wants, side_info, sets, coverage).expect("generated instances are valid")
}

/// Ways to give every message at least one of two senders:
/// 0 = sender 1 only, 1 = sender 2 only, 2 = both.
fn two_sender_covers(n: usize) -> impl Iterator<Item = Vec<MsgSet>> {
    (0..3usize.pow(n as u32)).map(move |mut code| {
        let mut s = vec![MsgSet::EMPTY; 2];
        for i in 0..n {
            match code % 3 {
                0 => s[0].insert(i),
                1 => s[1].insert(i),
                _ => {
                    s[0].insert(i);
                    s[1].insert(i);
                }
            }
            code /= 3;
        }
        s
    })
}

/// Coverage partitions of `n` receivers, in the same base-3 order.
fn coverage_profiles(n: usize) -> impl Iterator<Item = CoverageProfile> {
    two_sender_covers(n).map(|s| {
        let both = s[0].intersection(s[1]);
        CoverageProfile::new(s[0].difference(both), s[1].difference(both), both)
    })
}

/// Every side-information assignment for `m = n`, `f = id`.
fn side_info_choices(n: usize) -> impl Iterator<Item = Vec<MsgSet>> {
    let bits = n * n.saturating_sub(1);
    (0..1u64 << bits).map(move |code| {
        let mut pos = 0;
        (0..n)
            .map(|k| {
                let mut x = MsgSet::EMPTY;
                for j in (0..n).filter(|&j| j != k) {
                    if code >> pos & 1 == 1 {
                        x.insert(j);
                    }
                    pos += 1;
                }
                x
            })
            .collect()
    })
}

/// All two-sender instances over GF(2) with `m = n <= max_n`, `f = id`,
/// every side-information set and every sender cover.
pub fn multisender_suite(max_n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for senders in two_sender_covers(n) {
            for x in side_info_choices(n) {
                out.push(Instance::unicast(2, x, senders.clone(), None).expect("valid by construction"));
            }
        }
    }
    out
}

/// All cellular instances with `m = n <= max_n`: every coverage partition,
/// sender cover and side-information assignment. Unless `raw`, side
/// information is pruned and duplicates removed. Instances where a
/// restricted receiver hears no holder of its message are included.
pub fn cellular_suite(max_n: usize, raw: bool) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n in 1..=max_n {
        for cov in coverage_profiles(n).collect::<Vec<_>>() {
            for senders in two_sender_covers(n) {
                for x in side_info_choices(n) {
                    let inst = Instance::unicast(2, x, senders.clone(), Some(cov)).expect("valid by construction");
                    let inst = if raw { inst } else { prune_side_info(&inst).expect("has coverage") };
                    if raw || seen.insert(inst.clone()) {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// Cellular instances where every restricted receiver hears a holder of its message.
pub fn feasible_cellular_suite(max_n: usize) -> Vec<Instance> {
    cellular_suite(max_n, false)
        .into_iter()
        .filter(|i| i.cellular_warnings().is_empty())
        .collect()
}

/// One cross-check over a set of instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// Fitting-matrix minimum rank equals the exhaustive oracle.
    MinrankVsOracle,
    /// Cellular search equals the cellular oracle (or both are infeasible).
    CellularVsOracle,
    /// Uncoded transmission is optimal exactly when no message-connected 0-cycle exists.
    UncodedIffAcyclic,
    /// Every message-connected 0-cycle yields a verified code of length `n - 1`.
    SpanningTree,
    /// Edges flagged uncritical by the sufficient conditions are not critical.
    Criticality,
    /// The H-subgraph predicate agrees with enumeration of `V1 ∩ V2`.
    OverlapPredicate,
    /// Pruning leaves the cellular optimum unchanged.
    PruningSafe,
    /// Messages outside every message-connected 0-cycle cost one transmission.
    UncodedMessages,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::MinrankVsOracle,
        Check::CellularVsOracle,
        Check::UncodedIffAcyclic,
        Check::SpanningTree,
        Check::Criticality,
        Check::OverlapPredicate,
        Check::PruningSafe,
        Check::UncodedMessages,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::MinrankVsOracle => "minrank-vs-oracle",
            Check::CellularVsOracle => "cellular-vs-oracle",
            Check::UncodedIffAcyclic => "uncoded-iff-acyclic",
            Check::SpanningTree => "spanning-tree",
            Check::Criticality => "criticality",
            Check::OverlapPredicate => "overlap-predicate",
            Check::PruningSafe => "pruning-safe",
            Check::UncodedMessages => "uncoded-messages",
        }
    }

    pub fn from_name(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether the check applies to cellular instances (otherwise to
    /// multi-sender ones).
    pub fn is_cellular(self) -> bool {
        matches!(self, Check::CellularVsOracle | Check::OverlapPredicate | Check::PruningSafe)
    }

    /// The exhaustive suite this check runs on for `m = n <= max_n`.
    pub fn suite(self, max_n: usize) -> Vec<Instance> {
        match self {
            Check::CellularVsOracle => cellular_suite(max_n, false),
            Check::OverlapPredicate => feasible_cellular_suite(max_n),
            Check::PruningSafe => cellular_suite(max_n, true),
            _ => multisender_suite(max_n),
        }
    }
}

/// Settings shared by every check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckLimits {
    pub search: SearchConfig,
    pub oracle: SearchBounds,
}


fn same_outcome(a: Result<usize>, b: Result<usize>) -> Result<Option<String>> {
    match (a, b) {
        (Ok(x), Ok(y)) if x == y => Ok(None),
        (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => Ok(None),
        (Err(e), _) | (_, Err(e)) if !matches!(e, Error::Infeasible(_)) => Err(e),
        (x, y) => Ok(Some(format!("{} vs {}", describe(&x), describe(&y)))),
    }
}

fn describe(r: &Result<usize>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(Error::Infeasible(_)) => "infeasible".into(),
        Err(e) => e.to_string(),
    }
}

/// Runs `check` on one instance: `Ok(None)` on agreement, `Ok(Some(reason))`
/// on a mismatch.
pub fn run_check(check: Check, inst: &Instance, limits: &CheckLimits) -> Result<Option<String>> {
    let cfg = &limits.search;
    let bounds = &limits.oracle;
    match check {
        Check::MinrankVsOracle => same_outcome(
            minrank_search(inst, cfg).map(|s| s.n_opt),
            oracle_multisender(inst, bounds).map(|s| s.n_opt),
        ),
        Check::CellularVsOracle => same_outcome(
            cellular_minsearch(inst, cfg).map(|s| s.n_opt),
            oracle_cellular(inst, bounds).map(|s| s.n_opt),
        ),
        Check::UncodedIffAcyclic => {
            let n_opt = minrank_search(inst, cfg)?.n_opt;
            let acyclic = thm4_predicate(inst)?;
            Ok(((n_opt == inst.n()) != acyclic).then(|| format!("N_opt {n_opt}, no mc 0-cycle: {acyclic}")))
        }
        Check::SpanningTree => {
            for b in mc_zero_cycles(inst)? {
                let code = spanning_tree_code(inst, b)?;
                let ok = verify_decoding(inst, &code)?.iter().all(|&v| v);
                if !ok || code.len() + 1 != inst.n() {
                    return Ok(Some(format!("cycle {b}: length {}, decodes {ok}", code.len())));
                }
            }
            Ok(None)
        }
        Check::Criticality => {
            let r = criticality_report(inst, cfg)?;
            if let Some(e) = r.violations().next() {
                return Ok(Some(format!(
                    "edge receiver {} -> x{} is critical but flagged {:?}",
                    e.receiver + 1,
                    e.message + 1,
                    e
                )));
            }
            if let Some(h) = r.holder_choices.iter().find(|h| h.removable_for.is_none()) {
                return Ok(Some(format!(
                    "receiver {}: no holder allows dropping outside side information",
                    h.receiver + 1
                )));
            }
            Ok(None)
        }
        Check::OverlapPredicate => {
            let p = prop4_predicate(inst)?;
            let e = exists_nonzero_intersection(inst, Intersection::V1V2, cfg.budget)?;
            Ok((p != e).then(|| format!("predicate {p}, enumeration {e}")))
        }
        Check::PruningSafe => {
            let pruned = prune_side_info(inst)?;
            let raw = oracle_cellular(inst, bounds).map(|s| s.n_opt);
            let after = oracle_cellular(&pruned, bounds).map(|s| s.n_opt);
            if let Some(m) = same_outcome(raw.clone(), after)? {
                return Ok(Some(format!("oracle raw vs pruned: {m}")));
            }
            let search = cellular_minsearch(inst, cfg).map(|s| s.n_opt);
            Ok(same_outcome(raw, search)?.map(|m| format!("oracle raw vs search: {m}")))
        }
        Check::UncodedMessages => {
            let mc = mc_cycle_messages(inst)?;
            for i in (0..inst.n()).filter(|&i| !mc.contains(i)) {
                if !uncoded_equivalence(inst, i, cfg)? {
                    return Ok(Some(format!("x{} lies in no mc 0-cycle but is not uncoded-equivalent", i + 1)));
                }
            }
            Ok(None)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub check: Check,
    pub checked: usize,
    /// Rendered instance and reason for each mismatch, in suite order.
    pub failures: Vec<(String, String)>,
    /// Instances whose check hit the search budget or the oracle cap.
    pub skipped: usize,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One-line rendering of an instance for reports.
pub fn one_line(inst: &Instance) -> String {
    render_instance(inst).lines().collect::<Vec<_>>().join("; ")
}

/// Runs `check` over `instances` on `workers` threads; the report lists
/// failures in input order regardless of the thread count.
pub fn run_sweep(check: Check, instances: &[Instance], limits: &CheckLimits, workers: usize) -> Result<SweepReport> {
    let one = |inst: &Instance| run_check(check, inst, limits).map(|r| r.map(|why| (one_line(inst), why)));
    let results: Vec<Result<Option<(String, String)>>> = if workers <= 1 {
        instances.iter().map(one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| instances.par_iter().map(one).collect())
    };
    let mut failures = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(Some(f)) => failures.push(f),
            Ok(None) => {}
            Err(Error::BudgetExceeded { .. } | Error::CapExceeded { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SweepReport {
        check,
        checked: instances.len() - skipped,
        failures,
        skipped,
    })
}

/// `count` random instances with `2 <= n <= max_n` for `check`, from `seed`.
pub fn random_suite(check: Check, seed: u64, count: usize, max_n: usize) -> Vec<Instance> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n.max(2));
            random_instance(&mut rng, n, 2, 2, check.is_cellular())
        })
        .collect()
}
