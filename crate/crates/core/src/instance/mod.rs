//! Index-coding instances: messages, receivers, side information, senders and
//! (optionally) a two-sender coverage profile.

mod format;
mod graph;

pub use format::{parse_instance, render_instance};
pub use graph::{build_message_graph, MessageGraph};

use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::msgset::{MsgSet, MAX_INDEX};

/// Which receivers hear which sender in the two-sender cellular setting.
/// All sets hold 0-based receiver indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoverageProfile {
    /// Receivers hearing only sender 1.
    pub r1: MsgSet,
    /// Receivers hearing only sender 2.
    pub r2: MsgSet,
    /// Receivers hearing both senders.
    pub rc: MsgSet,
}

impl CoverageProfile {
    pub fn new(r1: MsgSet, r2: MsgSet, rc: MsgSet) -> Self {
        CoverageProfile { r1, r2, rc }
    }

    /// Senders (0-based) receiver `k` can hear.
    pub fn audible(&self, k: usize) -> MsgSet {
        if self.r1.contains(k) {
            MsgSet::singleton(0)
        } else if self.r2.contains(k) {
            MsgSet::singleton(1)
        } else {
            MsgSet::full(2)
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        let all = self.r1.union(self.r2).union(self.rc);
        let overlap = self.r1.intersects(self.r2) || self.r1.intersects(self.rc) || self.r2.intersects(self.rc);
        if overlap || all != MsgSet::full(m) {
            return Err(Error::Invalid(
                "coverage sets must partition the receivers".into(),
            ));
        }
        Ok(())
    }
}

/// A validated, immutable index-coding instance.
///
/// Indices are 0-based internally; parsing and rendering use 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    field: PrimeField,
    n: usize,
    wants: Vec<usize>,
    side_info: Vec<MsgSet>,
    senders: Vec<MsgSet>,
    coverage: Option<CoverageProfile>,
}

impl Instance {
    pub fn new(
        q: u32,
        n: usize,
        wants: Vec<usize>,
        side_info: Vec<MsgSet>,
        senders: Vec<MsgSet>,
        coverage: Option<CoverageProfile>,
    ) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let inst = Instance {
            field,
            n,
            wants,
            side_info,
            senders,
            coverage,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Convenience for the common `m = n`, `f(k) = k` shape.
    pub fn unicast(
        q: u32,
        side_info: Vec<MsgSet>,
        senders: Vec<MsgSet>,
        coverage: Option<CoverageProfile>,
    ) -> Result<Self> {
        let n = side_info.len();
        Self::new(q, n, (0..n).collect(), side_info, senders, coverage)
    }

    fn validate(&self) -> Result<()> {
        let (n, m) = (self.n, self.wants.len());
        if n == 0 || m == 0 {
            return Err(Error::Invalid("need at least one message and one receiver".into()));
        }
        if n > MAX_INDEX || m > MAX_INDEX {
            return Err(Error::Invalid(format!(
                "at most {MAX_INDEX} messages and receivers are supported"
            )));
        }
        if self.side_info.len() != m {
            return Err(Error::Invalid(format!(
                "{} side-information sets for {m} receivers",
                self.side_info.len()
            )));
        }
        if self.senders.is_empty() {
            return Err(Error::Invalid("need at least one sender".into()));
        }
        let all = MsgSet::full(n);
        for (k, (&f, &x)) in self.wants.iter().zip(&self.side_info).enumerate() {
            if f >= n {
                return Err(Error::Invalid(format!("receiver {} wants x{}, out of range", k + 1, f + 1)));
            }
            if !x.is_subset(all) {
                return Err(Error::Invalid(format!("receiver {} has side information out of range", k + 1)));
            }
            if x.contains(f) {
                return Err(Error::Invalid(format!(
                    "receiver {} has its wanted message x{} as side information",
                    k + 1,
                    f + 1
                )));
            }
        }
        let mut union = MsgSet::EMPTY;
        for (j, &s) in self.senders.iter().enumerate() {
            if !s.is_subset(all) {
                return Err(Error::Invalid(format!("sender {} holds a message out of range", j + 1)));
            }
            union = union.union(s);
        }
        if union != all {
            let missing = all.difference(union);
            return Err(Error::Invalid(format!("messages {missing} are held by no sender")));
        }
        if let Some(cov) = &self.coverage {
            if self.senders.len() != 2 {
                return Err(Error::Invalid("a coverage profile requires exactly two senders".into()));
            }
            if self.field.q() != 2 {
                return Err(Error::Invalid("a coverage profile requires q = 2".into()));
            }
            if m != n || self.wants.iter().enumerate().any(|(k, &f)| f != k) {
                return Err(Error::Invalid(
                    "a coverage profile requires m = n and receiver k wanting x_k".into(),
                ));
            }
            cov.validate(m)?;
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Number of messages.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of receivers.
    pub fn m(&self) -> usize {
        self.wants.len()
    }

    pub fn sender_count(&self) -> usize {
        self.senders.len()
    }

    /// Message wanted by receiver `k`.
    pub fn wants(&self, k: usize) -> usize {
        self.wants[k]
    }

    pub fn wants_all(&self) -> &[usize] {
        &self.wants
    }

    pub fn side_info(&self, k: usize) -> MsgSet {
        self.side_info[k]
    }

    pub fn side_info_all(&self) -> &[MsgSet] {
        &self.side_info
    }

    /// Messages neither wanted nor known by receiver `k` (interference).
    pub fn interference(&self, k: usize) -> MsgSet {
        MsgSet::full(self.n)
            .without(self.wants[k])
            .difference(self.side_info[k])
    }

    pub fn sender(&self, j: usize) -> MsgSet {
        self.senders[j]
    }

    pub fn senders(&self) -> &[MsgSet] {
        &self.senders
    }

    /// Senders (0-based) holding message `i`.
    pub fn holders(&self, i: usize) -> MsgSet {
        self.senders
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(i))
            .map(|(j, _)| j)
            .collect()
    }

    pub fn coverage(&self) -> Option<&CoverageProfile> {
        self.coverage.as_ref()
    }

    pub fn is_cellular(&self) -> bool {
        self.coverage.is_some()
    }

    /// Receivers wanting message `i`.
    pub fn wanters(&self, i: usize) -> MsgSet {
        (0..self.m()).filter(|&k| self.wants[k] == i).collect()
    }

    /// Messages held by at least two senders.
    pub fn shared_messages(&self) -> MsgSet {
        shared_messages(self)
    }

    pub fn message_graph(&self) -> MessageGraph {
        build_message_graph(self)
    }

    /// Side-information edges `(k, j)`: receiver `k` knows message `j`.
    pub fn side_edges(&self) -> Vec<(usize, usize)> {
        (0..self.m())
            .flat_map(|k| self.side_info[k].iter().map(move |j| (k, j)))
            .collect()
    }

    pub fn with_side_info(&self, k: usize, x: MsgSet) -> Result<Self> {
        let mut side_info = self.side_info.clone();
        side_info[k] = x;
        Self::new(
            self.q(),
            self.n,
            self.wants.clone(),
            side_info,
            self.senders.clone(),
            self.coverage,
        )
    }

    pub fn with_senders(&self, senders: Vec<MsgSet>) -> Result<Self> {
        Self::new(
            self.q(),
            self.n,
            self.wants.clone(),
            self.side_info.clone(),
            senders,
            self.coverage,
        )
    }

    pub fn without_side_edge(&self, k: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.side_info[k].remove(j);
        out
    }

    pub fn with_coverage(&self, coverage: Option<CoverageProfile>) -> Result<Self> {
        let mut out = self.clone();
        out.coverage = coverage;
        out.validate()?;
        Ok(out)
    }

    /// The same instance with the coverage profile dropped (every receiver hears everything).
    pub fn without_coverage(&self) -> Self {
        let mut out = self.clone();
        out.coverage = None;
        out
    }

    /// Deletes message `i`, every receiver wanting it, and `i` from all side
    /// information; remaining indices are compacted. `None` when nothing
    /// (no messages or no receivers) would remain.
    pub fn delete_message(&self, i: usize) -> Option<Self> {
        let keep = MsgSet::full(self.n).without(i);
        let receivers: MsgSet = (0..self.m()).filter(|&k| self.wants[k] != i).collect();
        self.restrict(keep, receivers)
    }

    /// Sub-instance on messages `msgs` and receivers `receivers`. Side
    /// information, sender sets and coverage are intersected and re-indexed.
    /// Returns `None` when the result would have no messages or no receivers.
    ///
    /// Every kept receiver must want a kept message.
    pub fn restrict(&self, msgs: MsgSet, receivers: MsgSet) -> Option<Self> {
        if msgs.is_empty() || receivers.is_empty() {
            return None;
        }
        let map = |s: MsgSet| s.intersection(msgs).compress(msgs);
        let wants: Vec<usize> = receivers
            .iter()
            .map(|k| {
                debug_assert!(msgs.contains(self.wants[k]));
                msgs.iter().position(|i| i == self.wants[k]).expect("kept receiver wants a kept message")
            })
            .collect();
        let side_info = receivers.iter().map(|k| map(self.side_info[k])).collect();
        let senders = self.senders.iter().map(|&s| map(s)).collect();
        let coverage = self.coverage.map(|c| CoverageProfile {
            r1: c.r1.intersection(receivers).compress(receivers),
            r2: c.r2.intersection(receivers).compress(receivers),
            rc: c.rc.intersection(receivers).compress(receivers),
        });
        let out = Instance {
            field: self.field,
            n: msgs.len(),
            wants,
            side_info,
            senders,
            coverage,
        };
        debug_assert!(out.validate().is_ok());
        Some(out)
    }

    /// Restricted receivers whose wanted message their only audible sender
    /// does not hold. Such instances admit no cellular code.
    pub fn cellular_warnings(&self) -> Vec<String> {
        let Some(cov) = &self.coverage else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (set, j) in [(cov.r1, 0usize), (cov.r2, 1usize)] {
            for k in set.iter() {
                if !self.senders[j].contains(self.wants[k]) {
                    out.push(format!(
                        "receiver {} hears only sender {} which does not hold x{}",
                        k + 1,
                        j + 1,
                        self.wants[k] + 1
                    ));
                }
            }
        }
        out
    }
}

/// Messages held by two or more senders.
pub fn shared_messages(inst: &Instance) -> MsgSet {
    (0..inst.n()).filter(|&i| inst.holders(i).len() >= 2).collect()
}
