//! Exhaustive minimization over template assignments.
//!
//! Assignments are visited depth-first in lexicographic order of the
//! variable vector. A subtree is skipped once the objective of its completed
//! units can no longer beat the best value found, which is sound because
//! every objective used here is monotone non-decreasing as columns are added.
//!
//! With several workers the space is split by fixing a prefix of variables;
//! workers share only the best value found so far, and the final reduction
//! picks the smallest value and, among ties, the earliest block. Each block
//! returns its lexicographically first minimum, so the result does not depend
//! on the number of workers.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::template::SymbolicMatrix;

/// Default assignment budget for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A value to minimize over completed templates, evaluated incrementally.
pub trait Objective: Sync {
    type State: Clone + Send;

    fn initial(&self) -> Self::State;

    /// Adds instantiated column `col` (a template column index).
    fn push(&self, state: &mut Self::State, col: usize, values: &[u32]);

    /// Current value. Must never decrease under `push`.
    fn value(&self, state: &Self::State) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub value: usize,
    /// Lexicographically smallest assignment reaching `value`.
    pub assignment: Vec<u32>,
}

/// `q^dof`, or `None` on overflow.
pub fn assignment_count(q: u32, dof: usize) -> Option<u64> {
    u32::try_from(dof).ok().and_then(|d| (q as u64).checked_pow(d))
}

pub(crate) fn check_budget(tmpl: &SymbolicMatrix, budget: u64) -> Result<u64> {
    match assignment_count(tmpl.field().q(), tmpl.dof()) {
        Some(total) if total <= budget => Ok(total),
        _ => Err(Error::BudgetExceeded {
            dof: tmpl.dof(),
            budget,
        }),
    }
}

struct Block<'a, O: Objective> {
    tmpl: &'a SymbolicMatrix,
    obj: &'a O,
    prefix: Vec<u32>,
    shared_best: &'a AtomicUsize,
    best: Option<SearchOutcome>,
    asg: Vec<u32>,
    scratch: Vec<u32>,
}

impl<O: Objective> Block<'_, O> {
    fn prune(&self, v: usize) -> bool {
        v > self.shared_best.load(Ordering::Relaxed) || self.best.as_ref().is_some_and(|b| v >= b.value)
    }

    fn record(&mut self, v: usize) {
        self.best = Some(SearchOutcome {
            value: v,
            assignment: self.asg.clone(),
        });
        self.shared_best.fetch_min(v, Ordering::Relaxed);
    }

    fn descend(&mut self, var: usize, unit: usize, state: &O::State) {
        let tmpl = self.tmpl;
        if unit == tmpl.units().len() {
            let v = self.obj.value(state);
            if !self.prune(v) {
                self.record(v);
            }
            return;
        }
        if var == tmpl.unit_var_end()[unit] {
            let mut next = state.clone();
            for &c in &tmpl.units()[unit] {
                tmpl.fill_column(c, &self.asg, &mut self.scratch);
                self.obj.push(&mut next, c, &self.scratch);
            }
            if self.prune(self.obj.value(&next)) {
                return;
            }
            self.descend(var, unit + 1, &next);
            return;
        }
        let (lo, hi) = match self.prefix.get(var) {
            Some(&p) => (p, p + 1),
            None => (0, tmpl.field().q()),
        };
        for val in lo..hi {
            self.asg[var] = val;
            self.descend(var + 1, unit, state);
        }
    }
}

/// Exhaustively minimizes `obj` over all completions of `tmpl`.
pub fn exhaustive_min<O: Objective>(tmpl: &SymbolicMatrix, obj: &O, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_budget(tmpl, cfg.budget)?;
    let q = tmpl.field().q() as u64;
    let dof = tmpl.dof();
    let workers = cfg.workers.max(1);

    let mut prefix_len = 0usize;
    if workers > 1 {
        let target = 16 * workers as u64;
        let mut blocks = 1u64;
        while prefix_len < dof && blocks < target {
            blocks *= q;
            prefix_len += 1;
        }
    }
    let block_count = q.pow(prefix_len as u32);
    let shared_best = AtomicUsize::new(usize::MAX);

    let run_block = |b: u64| -> Option<SearchOutcome> {
        let mut prefix = vec![0u32; prefix_len];
        let mut rest = b;
        for slot in prefix.iter_mut().rev() {
            *slot = (rest % q) as u32;
            rest /= q;
        }
        let mut block = Block {
            tmpl,
            obj,
            prefix,
            shared_best: &shared_best,
            best: None,
            asg: vec![0; dof],
            scratch: vec![0; tmpl.rows()],
        };
        block.descend(0, 0, &obj.initial());
        block.best
    };

    let results: Vec<Option<SearchOutcome>> = if workers == 1 {
        (0..block_count).map(run_block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..block_count).into_par_iter().map(run_block).collect())
    };

    let mut best: Option<SearchOutcome> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one assignment exists"))
}

/// Visits every assignment in lexicographic order until `visit` breaks.
pub fn for_each_assignment<B>(
    tmpl: &SymbolicMatrix,
    budget: u64,
    mut visit: impl FnMut(&[u32]) -> ControlFlow<B>,
) -> Result<Option<B>> {
    check_budget(tmpl, budget)?;
    let q = tmpl.field().q();
    let mut asg = vec![0u32; tmpl.dof()];
    loop {
        if let ControlFlow::Break(b) = visit(&asg) {
            return Ok(Some(b));
        }
        // Odometer increment, last variable fastest.
        let mut i = asg.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            asg[i] += 1;
            if asg[i] < q {
                break;
            }
            asg[i] = 0;
        }
    }
}
