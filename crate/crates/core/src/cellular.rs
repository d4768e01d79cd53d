//! Two-sender cellular networks: receivers in `r1` hear only sender 1,
//! receivers in `r2` only sender 2, receivers in `rc` hear both.
//!
//! The optimal linear codelength is the minimum of
//! `dim(V1 + V2 + V3) + dim(V1 ∩ V2)` over completions of a three-block
//! template, where `V1`, `V2` are the column spaces of the `r1` and `r2`
//! blocks and `V3` that of the `rc` block.

use std::ops::ControlFlow;

use crate::code::Generator;
use crate::error::{Error, Result};
use crate::fitting::minrank_search;
use crate::instance::{CoverageProfile, Instance};
use crate::linalg::{subspace_dims, SpanBasis, SubspaceDims};
use crate::msgset::MsgSet;
use crate::oracle::{oracle_cellular, verify_cellular_decoding, SearchBounds};
use crate::search::{exhaustive_min, for_each_assignment, Objective, SearchConfig};
use crate::template::{ColumnTag, EntrySpec, SymbolicMatrix};

/// Block tags of cellular template columns.
pub const BLOCK_R1: usize = 0;
pub const BLOCK_R2: usize = 1;
pub const BLOCK_RC: usize = 2;

fn coverage(inst: &Instance) -> Result<CoverageProfile> {
    inst.coverage().copied().ok_or(Error::NoCoverage)
}

/// Drops side information a restricted receiver cannot use: for `r1`
/// receivers everything outside sender 1, for `r2` everything outside
/// sender 2.
pub fn prune_side_info(inst: &Instance) -> Result<Instance> {
    let cov = coverage(inst)?;
    let mut out = inst.clone();
    for (set, j) in [(cov.r1, 0), (cov.r2, 1)] {
        for k in set.iter() {
            out = out.with_side_info(k, inst.side_info(k).intersection(inst.sender(j)))?;
        }
    }
    Ok(out)
}

fn infeasibility(inst: &Instance) -> Result<()> {
    match inst.cellular_warnings().into_iter().next() {
        Some(w) => Err(Error::Infeasible(w)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularTemplate {
    pub matrix: SymbolicMatrix,
    /// Template columns of each block, in column order.
    pub blocks: [Vec<usize>; 3],
}

/// Three-block template over the pruned side information. Restricted
/// receivers get one column shaped like a single-sender fitting row; each
/// `rc` receiver gets a sender-1 and a sender-2 column whose entries on
/// shared wanted or interfering rows are split.
pub fn build_cellular_template(inst: &Instance) -> Result<CellularTemplate> {
    let cov = coverage(inst)?;
    infeasibility(inst)?;
    let inst = prune_side_info(inst)?;
    let n = inst.n();
    let shared = inst.sender(0).intersection(inst.sender(1));
    let mut tags = Vec::new();
    let mut specs = Vec::new();
    let mut units = Vec::new();
    let mut blocks: [Vec<usize>; 3] = Default::default();

    for (set, j, block) in [(cov.r1, 0, BLOCK_R1), (cov.r2, 1, BLOCK_R2)] {
        for k in set.iter() {
            let support = inst.sender(j);
            let col = (0..n)
                .map(|i| {
                    if !support.contains(i) {
                        EntrySpec::StructZero
                    } else if i == k {
                        EntrySpec::Fixed(1)
                    } else if inst.side_info(k).contains(i) {
                        EntrySpec::Free
                    } else {
                        EntrySpec::Fixed(0)
                    }
                })
                .collect();
            blocks[block].push(specs.len());
            units.push(vec![specs.len()]);
            tags.push(ColumnTag {
                sender: j,
                receiver: k,
                block,
            });
            specs.push(col);
        }
    }
    for k in cov.rc.iter() {
        let mut unit = Vec::new();
        for j in 0..2 {
            let support = inst.sender(j);
            let col = (0..n)
                .map(|i| {
                    if !support.contains(i) {
                        EntrySpec::StructZero
                    } else if inst.side_info(k).contains(i) {
                        EntrySpec::Free
                    } else if shared.contains(i) {
                        EntrySpec::Share { target: u32::from(i == k) }
                    } else {
                        EntrySpec::Fixed(u32::from(i == k))
                    }
                })
                .collect();
            blocks[BLOCK_RC].push(specs.len());
            unit.push(specs.len());
            tags.push(ColumnTag {
                sender: j,
                receiver: k,
                block: BLOCK_RC,
            });
            specs.push(col);
        }
        units.push(unit);
    }
    Ok(CellularTemplate {
        matrix: SymbolicMatrix::new(inst.field(), n, tags, specs, units),
        blocks,
    })
}

/// Incremental `dim(V1) + dim(V2) + dim(V1+V2+V3) - dim(V1+V2)`, which equals
/// `dim(V1+V2+V3) + dim(V1 ∩ V2)` and never decreases as columns are added.
pub struct CellularObjective {
    tags: Vec<ColumnTag>,
    empty: SpanBasis,
}

#[derive(Clone)]
pub struct CellularState {
    v1: SpanBasis,
    v2: SpanBasis,
    v12: SpanBasis,
    all: SpanBasis,
}

impl CellularObjective {
    pub fn new(tmpl: &CellularTemplate) -> Self {
        CellularObjective {
            tags: tmpl.matrix.tags().to_vec(),
            empty: SpanBasis::new(tmpl.matrix.field(), tmpl.matrix.rows()),
        }
    }
}

impl Objective for CellularObjective {
    type State = CellularState;

    fn initial(&self) -> CellularState {
        CellularState {
            v1: self.empty.clone(),
            v2: self.empty.clone(),
            v12: self.empty.clone(),
            all: self.empty.clone(),
        }
    }

    fn push(&self, s: &mut CellularState, col: usize, values: &[u32]) {
        match self.tags[col].block {
            BLOCK_R1 => {
                s.v1.insert(values);
                s.v12.insert(values);
            }
            BLOCK_R2 => {
                s.v2.insert(values);
                s.v12.insert(values);
            }
            _ => {}
        }
        s.all.insert(values);
    }

    fn value(&self, s: &CellularState) -> usize {
        s.v1.rank() + s.v2.rank() + s.all.rank() - s.v12.rank()
    }
}

/// Objective of a completed template together with all subspace dimensions.
pub fn cellular_objective(tmpl: &CellularTemplate, asg: &[u32]) -> (usize, SubspaceDims) {
    let [b1, b2, b3] = &tmpl.blocks;
    let dims = subspace_dims(
        &tmpl.matrix.instantiate_columns(b1, asg),
        &tmpl.matrix.instantiate_columns(b2, asg),
        &tmpl.matrix.instantiate_columns(b3, asg),
    )
    .expect("blocks share the row count");
    let objective = dims.cellular_objective();
    assert_eq!(objective, dims.cellular_objective_alt(), "inclusion-exclusion");
    (objective, dims)
}

/// Sender 1 sends a basis of its block, sender 2 of its block, then each
/// `rc` column independent of everything chosen so far is sent by the sender
/// owning it.
pub fn extract_cellular_generator(tmpl: &CellularTemplate, asg: &[u32]) -> Generator {
    let t = &tmpl.matrix;
    let mut gen = Generator::new(t.field(), t.rows(), 2);
    let mut all = SpanBasis::new(t.field(), t.rows());
    for (block, sender) in [(BLOCK_R1, 0), (BLOCK_R2, 1)] {
        let mut own = SpanBasis::new(t.field(), t.rows());
        for &c in &tmpl.blocks[block] {
            let v = t.column_values(c, asg);
            if own.insert(&v) {
                all.insert(&v);
                gen.push(sender, v);
            }
        }
    }
    for &c in &tmpl.blocks[BLOCK_RC] {
        let v = t.column_values(c, asg);
        if all.insert(&v) {
            gen.push(t.tag(c).sender, v);
        }
    }
    gen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularSolution {
    pub n_opt: usize,
    pub assignment: Vec<u32>,
    pub generator: Generator,
    pub dims: SubspaceDims,
    pub dof: usize,
}

/// Optimal cellular codelength with a witness code. Side information is
/// pruned first; instances where a restricted receiver cannot hear any holder
/// of its wanted message fail with [`Error::Infeasible`].
pub fn cellular_minsearch(inst: &Instance, cfg: &SearchConfig) -> Result<CellularSolution> {
    let tmpl = build_cellular_template(inst)?;
    let out = exhaustive_min(&tmpl.matrix, &CellularObjective::new(&tmpl), cfg)?;
    let (objective, dims) = cellular_objective(&tmpl, &out.assignment);
    debug_assert_eq!(objective, out.value);
    let generator = extract_cellular_generator(&tmpl, &out.assignment);
    debug_assert_eq!(generator.len(), out.value);
    debug_assert!(verify_cellular_decoding(inst, &generator).is_ok_and(|v| v.iter().all(|&b| b)));
    Ok(CellularSolution {
        n_opt: out.value,
        assignment: out.assignment,
        generator,
        dims,
        dof: tmpl.matrix.dof(),
    })
}

/// Which intersection [`exists_nonzero_intersection`] asks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Intersection {
    /// `V1 ∩ V2`
    V1V2,
    /// `V3 ∩ (V1 + V2)`
    V3V12,
}

/// Whether some completion of the cellular template has a nonzero
/// intersection of the given kind, by enumerating every completion.
pub fn exists_nonzero_intersection(inst: &Instance, which: Intersection, budget: u64) -> Result<bool> {
    let tmpl = build_cellular_template(inst)?;
    let found = for_each_assignment(&tmpl.matrix, budget, |a| {
        let (_, d) = cellular_objective(&tmpl, a);
        let dim = match which {
            Intersection::V1V2 => d.dint12,
            Intersection::V3V12 => d.dint3_12,
        };
        if dim > 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HSubgraph {
    /// Receivers, equivalently messages (`m = n`, `f = id`).
    pub members: MsgSet,
    pub has_r1: bool,
    pub has_r2: bool,
}

/// Every message of `candidate` is side information of some receiver in it.
pub fn detect_h(inst: &Instance, candidate: MsgSet) -> bool {
    !candidate.is_empty()
        && candidate
            .iter()
            .all(|i| candidate.iter().any(|k| inst.side_info(k).contains(i)))
}

fn check_subset_cap(n: usize) -> Result<()> {
    if n > crate::structure::ZERO_CYCLE_CAP {
        return Err(Error::CapExceeded {
            what: "node count for subset enumeration",
            limit: crate::structure::ZERO_CYCLE_CAP as u64,
            actual: n as u64,
        });
    }
    Ok(())
}

/// All node sets forming an H-subgraph of `inst` as given (callers wanting
/// the pruned graph prune first).
pub fn enumerate_h(inst: &Instance) -> Result<Vec<HSubgraph>> {
    let cov = coverage(inst)?;
    check_subset_cap(inst.n())?;
    Ok(MsgSet::full(inst.n())
        .subsets()
        .filter(|&s| detect_h(inst, s))
        .map(|s| HSubgraph {
            members: s,
            has_r1: s.intersects(cov.r1),
            has_r2: s.intersects(cov.r2),
        })
        .collect())
}

/// Whether the pruned graph has an H-subgraph made only of restricted
/// receivers, touching both `r1` and `r2`, in which an `r1` receiver knows an
/// `r2` member's message (or vice versa), or an `r1` and an `r2` receiver
/// share a side-information message.
pub fn prop4_predicate(inst: &Instance) -> Result<bool> {
    let cov = coverage(inst)?;
    check_subset_cap(inst.n())?;
    let p = prune_side_info(inst)?;
    let restricted = cov.r1.union(cov.r2);
    Ok(restricted.subsets().any(|h| {
        let (h1, h2) = (h.intersection(cov.r1), h.intersection(cov.r2));
        if h1.is_empty() || h2.is_empty() || !detect_h(&p, h) {
            return false;
        }
        let cross = h1.iter().any(|k| p.side_info(k).intersects(h2)) || h2.iter().any(|k| p.side_info(k).intersects(h1));
        let common = h1
            .iter()
            .any(|a| h2.iter().any(|b| p.side_info(a).intersects(p.side_info(b))));
        cross || common
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleClass {
    /// The cycle cannot shorten the code.
    Irreducible,
    /// A code shorter than the cycle exists on it.
    Reducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleReport {
    /// Nodes in cycle order, starting from the smallest.
    pub nodes: Vec<usize>,
    pub message_connected: bool,
    pub class: CycleClass,
}

impl CycleReport {
    pub fn node_set(&self) -> MsgSet {
        self.nodes.iter().copied().collect()
    }
}

/// Largest number of directed cycles [`classify_cycles`] will list.
pub const CYCLE_COUNT_CAP: usize = 100_000;

/// Simple directed cycles (length ≥ 2) of the graph `k -> j` for `j ∈ X_k`.
pub fn directed_cycles(inst: &Instance) -> Result<Vec<Vec<usize>>> {
    check_subset_cap(inst.n())?;
    fn walk(inst: &Instance, start: usize, path: &mut Vec<usize>, on: MsgSet, out: &mut Vec<Vec<usize>>) -> bool {
        let last = *path.last().unwrap();
        for j in inst.side_info(last).iter() {
            if j == start && path.len() >= 2 {
                out.push(path.clone());
                if out.len() > CYCLE_COUNT_CAP {
                    return false;
                }
            } else if j > start && !on.contains(j) {
                path.push(j);
                let ok = walk(inst, start, path, on.with(j), out);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    for s in 0..inst.n() {
        if !walk(inst, s, &mut vec![s], MsgSet::singleton(s), &mut out) {
            return Err(Error::CapExceeded {
                what: "directed cycle count",
                limit: CYCLE_COUNT_CAP as u64,
                actual: out.len() as u64,
            });
        }
    }
    Ok(out)
}

/// Classifies each directed cycle of the pruned graph. Message-disconnected
/// cycles and message-connected cycles made of restricted receivers from
/// both sides cannot shorten the code; message-connected cycles inside one
/// side or containing an `rc` receiver can.
pub fn classify_cycles(inst: &Instance) -> Result<Vec<CycleReport>> {
    let cov = coverage(inst)?;
    let p = prune_side_info(inst)?;
    let u = p.message_graph();
    Ok(directed_cycles(&p)?
        .into_iter()
        .map(|nodes| {
            let set: MsgSet = nodes.iter().copied().collect();
            let message_connected = u.is_connected_within(set);
            let both_sides = set.intersects(cov.r1) && set.intersects(cov.r2) && !set.intersects(cov.rc);
            let class = if !message_connected || both_sides {
                CycleClass::Irreducible
            } else {
                CycleClass::Reducible
            };
            CycleReport {
                nodes,
                message_connected,
                class,
            }
        })
        .collect())
}

/// The instance induced by a cycle's nodes where each receiver knows only its
/// successor on the cycle.
pub fn cycle_subinstance(inst: &Instance, cycle: &[usize]) -> Result<Instance> {
    let set: MsgSet = cycle.iter().copied().collect();
    let sub = inst
        .restrict(set, set)
        .ok_or_else(|| Error::Precondition("empty cycle".into()))?;
    let pos = |i: usize| set.iter().position(|x| x == i).unwrap();
    let mut out = sub;
    for (t, &k) in cycle.iter().enumerate() {
        let next = cycle[(t + 1) % cycle.len()];
        out = out.with_side_info(pos(k), MsgSet::singleton(pos(next)))?;
    }
    Ok(out)
}

/// Code of length `|cycle| - 1` on a cycle sub-instance (see
/// [`cycle_subinstance`]) of a reducible cycle: each restricted receiver's
/// own sender sends its wanted message plus its successor, and the remaining
/// nodes are joined into a spanning tree through the message graph.
pub fn reducible_cycle_code(sub: &Instance) -> Result<Generator> {
    let cov = coverage(sub)?;
    let n = sub.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut gen = Generator::new(sub.field(), n, 2);
    let mut join = |a: usize, b: usize, sender: usize, gen: &mut Generator| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            let mut col = crate::code::unit(n, a);
            col[b] = 1;
            gen.push(sender, col);
        }
    };
    for (set, j) in [(cov.r1, 0), (cov.r2, 1)] {
        for k in set.iter() {
            let next = sub
                .side_info(k)
                .first()
                .ok_or_else(|| Error::Precondition("cycle receiver without successor".into()))?;
            if !sub.sender(j).contains(k) || !sub.sender(j).contains(next) {
                return Err(Error::Precondition(format!(
                    "sender {} cannot combine x{} and x{}",
                    j + 1,
                    k + 1,
                    next + 1
                )));
            }
            join(k, next, j, &mut gen);
        }
    }
    for (a, b) in sub.message_graph().edges() {
        let sender = sub.holders(a).intersection(sub.holders(b)).first().unwrap();
        join(a, b, sender, &mut gen);
    }
    if gen.len() + 1 != n {
        return Err(Error::Precondition("cycle is not message-connected".into()));
    }
    Ok(gen)
}

/// Checks a cycle's class on its sub-instance: reducible cycles get a
/// verified code shorter than the cycle, irreducible ones need exactly one
/// transmission per node according to the oracle.
pub fn check_cycle_class(inst: &Instance, report: &CycleReport, bounds: &SearchBounds) -> Result<bool> {
    let pruned = prune_side_info(inst)?;
    let sub = cycle_subinstance(&pruned, &report.nodes)?;
    let len = report.nodes.len();
    match report.class {
        CycleClass::Reducible => {
            let code = reducible_cycle_code(&sub)?;
            let ok = verify_cellular_decoding(&sub, &code)?.iter().all(|&b| b);
            Ok(ok && code.len() < len)
        }
        CycleClass::Irreducible => Ok(oracle_cellular(&sub, bounds)?.n_opt == len),
    }
}

/// Both optima when no completion has `V1 ∩ V2 ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop3Certificate {
    pub cellular: usize,
    /// Multi-sender optimum of the pruned instance with coverage dropped.
    pub multisender: usize,
}

impl Prop3Certificate {
    pub fn holds(&self) -> bool {
        self.cellular == self.multisender
    }
}

pub fn prop3_check(inst: &Instance, cfg: &SearchConfig) -> Result<Option<Prop3Certificate>> {
    if exists_nonzero_intersection(inst, Intersection::V1V2, cfg.budget)? {
        return Ok(None);
    }
    let cellular = cellular_minsearch(inst, cfg)?.n_opt;
    let multisender = minrank_search(&prune_side_info(inst)?.without_coverage(), cfg)?.n_opt;
    Ok(Some(Prop3Certificate { cellular, multisender }))
}

/// Optima of the three sub-instances induced by `r1`, `r2` and `rc`, when no
/// completion has `V3 ∩ (V1 + V2) ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop6Decomposition {
    pub cellular: usize,
    pub r1: usize,
    pub r2: usize,
    pub rc: usize,
}

impl Prop6Decomposition {
    pub fn total(&self) -> usize {
        self.r1 + self.r2 + self.rc
    }

    pub fn holds(&self) -> bool {
        self.total() == self.cellular
    }
}

/// Sub-instance on node set `nodes` with coverage dropped; `single` replaces
/// the senders by one sender holding everything.
fn induced(inst: &Instance, nodes: MsgSet, single: bool) -> Result<Option<Instance>> {
    let Some(sub) = inst.restrict(nodes, nodes) else {
        return Ok(None);
    };
    let sub = sub.without_coverage();
    Ok(Some(if single {
        sub.with_senders(vec![MsgSet::full(sub.n())])?
    } else {
        sub
    }))
}

pub fn prop6_decompose(inst: &Instance, cfg: &SearchConfig) -> Result<Option<Prop6Decomposition>> {
    if exists_nonzero_intersection(inst, Intersection::V3V12, cfg.budget)? {
        return Ok(None);
    }
    let cov = coverage(inst)?;
    let pruned = prune_side_info(inst)?;
    let solve = |sub: Option<Instance>| -> Result<usize> {
        match sub {
            Some(s) => Ok(minrank_search(&s, cfg)?.n_opt),
            None => Ok(0),
        }
    };
    Ok(Some(Prop6Decomposition {
        cellular: cellular_minsearch(inst, cfg)?.n_opt,
        r1: solve(induced(&pruned, cov.r1, true)?)?,
        r2: solve(induced(&pruned, cov.r2, true)?)?,
        rc: solve(induced(&pruned, cov.rc, false)?)?,
    }))
}
