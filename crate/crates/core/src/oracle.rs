//! Brute-force ground truth: decodability checks and exhaustive search over
//! generator matrices.
//!
//! The search tries codelengths in increasing order. For each length it
//! walks combinations of distinct candidate columns in lexicographic order
//! and stops at the first combination every receiver can decode.

use itertools::Itertools;
use rayon::prelude::*;

use crate::code::Generator;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg::{PrimeField, SpanBasis};
use crate::msgset::MsgSet;

/// Per-receiver decoding verdicts. Receiver `k` succeeds when its wanted unit
/// vector lies in the span of the columns it hears plus its side information.
/// With a coverage profile, receivers hear only their audible senders.
pub fn verify_decoding(inst: &Instance, gen: &Generator) -> Result<Vec<bool>> {
    if gen.n() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            actual: gen.n(),
        });
    }
    if gen.sender_count() != inst.sender_count() {
        return Err(Error::Invalid(format!(
            "code has {} senders, instance has {}",
            gen.sender_count(),
            inst.sender_count()
        )));
    }
    gen.check_support(inst)?;
    Ok((0..inst.m())
        .map(|k| {
            let audible = audible_senders(inst, k);
            let mut basis = side_basis(inst, k);
            for (j, col) in gen.columns() {
                if audible.contains(j) {
                    basis.insert(col);
                }
            }
            basis.contains_unit(inst.wants(k))
        })
        .collect())
}

/// Alias used for cellular codes; the coverage profile is read from `inst`.
pub fn verify_cellular_decoding(inst: &Instance, gen: &Generator) -> Result<Vec<bool>> {
    verify_decoding(inst, gen)
}

fn audible_senders(inst: &Instance, k: usize) -> MsgSet {
    match inst.coverage() {
        Some(c) => c.audible(k),
        None => MsgSet::full(inst.sender_count()),
    }
}

fn side_basis(inst: &Instance, k: usize) -> SpanBasis {
    let mut b = SpanBasis::new(inst.field(), inst.n());
    for j in inst.side_info(k).iter() {
        b.insert_unit(j);
    }
    b
}

/// Limits for the exhaustive generator search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest message count accepted.
    pub max_n: usize,
    /// Longest codelength tried before falling back to uncoded transmission.
    /// `None` means `n - 1`.
    pub max_len: Option<usize>,
    /// Largest number of column combinations examined.
    pub cap: u64,
    pub workers: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_n: 5,
            max_len: None,
            cap: 50_000_000,
            workers: 1,
        }
    }
}

impl SearchBounds {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }
}

/// Nonzero vectors supported on `support`, in increasing order of their
/// base-q value (message 1 least significant). For q > 2 only vectors whose
/// lowest nonzero entry is 1 are kept, since scaling never changes a span.
pub fn column_pool(field: PrimeField, n: usize, support: MsgSet) -> Vec<Vec<u32>> {
    let q = field.q();
    let idx: Vec<usize> = support.iter().collect();
    let total = (q as u64).pow(idx.len() as u32);
    (1..total)
        .filter_map(|mut x| {
            let mut v = vec![0u32; n];
            for &i in &idx {
                v[i] = (x % q as u64) as u32;
                x /= q as u64;
            }
            let lead = v.iter().copied().find(|&e| e != 0)?;
            (lead == 1).then_some(v)
        })
        .collect()
}

/// Candidate columns as `(sender, vector)`. Without coverage a vector is
/// offered once, by its lowest holder; with coverage each sender offers its
/// own copy since audibility differs.
pub fn candidate_columns(inst: &Instance) -> Vec<(usize, Vec<u32>)> {
    let mut out: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for j in 0..inst.sender_count() {
        for v in column_pool(inst.field(), inst.n(), inst.sender(j)) {
            if inst.is_cellular() || seen.insert(v.clone()) {
                out.push((j, v));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub n_opt: usize,
    pub witness: Generator,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

fn decodes_all(inst: &Instance, cands: &[(usize, Vec<u32>)], chosen: &[usize]) -> bool {
    (0..inst.m()).all(|k| {
        let audible = audible_senders(inst, k);
        let mut b = side_basis(inst, k);
        for &c in chosen {
            let (j, v) = &cands[c];
            if audible.contains(*j) {
                b.insert(v);
            }
        }
        b.contains_unit(inst.wants(k))
    })
}

fn first_code_of_length(
    inst: &Instance,
    cands: &[(usize, Vec<u32>)],
    len: usize,
    pool: Option<&rayon::ThreadPool>,
) -> Option<Vec<usize>> {
    if len == 0 {
        return decodes_all(inst, cands, &[]).then(Vec::new);
    }
    let p = cands.len();
    let with_first = |first: usize| -> Option<Vec<usize>> {
        (first + 1..p).combinations(len - 1).find_map(|rest| {
            let mut chosen = Vec::with_capacity(len);
            chosen.push(first);
            chosen.extend(rest);
            decodes_all(inst, cands, &chosen).then_some(chosen)
        })
    };
    match pool {
        None => (0..p).find_map(with_first),
        Some(pool) => pool.install(|| (0..p).into_par_iter().find_map_first(with_first)),
    }
}

fn uncoded_fallback(inst: &Instance) -> Generator {
    let mut gen = Generator::new(inst.field(), inst.n(), inst.sender_count());
    for i in 0..inst.n() {
        // A restricted receiver wanting i dictates the sender; otherwise the lowest holder.
        let mut sender = inst.holders(i).first().expect("every message has a holder");
        if let Some(cov) = inst.coverage() {
            for k in inst.wanters(i).iter() {
                let heard = cov.audible(k).intersection(inst.holders(i));
                if heard.len() == 1 {
                    sender = heard.first().unwrap();
                }
            }
        }
        gen.push(sender, crate::code::unit(inst.n(), i));
    }
    gen
}

fn search(inst: &Instance, bounds: &SearchBounds) -> Result<OracleSolution> {
    let n = inst.n();
    if n > bounds.max_n {
        return Err(Error::CapExceeded {
            what: "message count",
            limit: bounds.max_n as u64,
            actual: n as u64,
        });
    }
    let cands = candidate_columns(inst);
    let max_len = bounds.max_len.unwrap_or(n.saturating_sub(1)).min(n.saturating_sub(1));
    let work = (0..=max_len).fold(0u64, |acc, l| acc.saturating_add(binomial(cands.len() as u64, l as u64)));
    if work > bounds.cap {
        return Err(Error::CapExceeded {
            what: "column combination count",
            limit: bounds.cap,
            actual: work,
        });
    }
    let pool = (bounds.workers > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(bounds.workers)
            .build()
            .expect("thread pool")
    });
    for len in 0..=max_len {
        if let Some(chosen) = first_code_of_length(inst, &cands, len, pool.as_ref()) {
            let mut witness = Generator::new(inst.field(), n, inst.sender_count());
            for c in chosen {
                let (j, v) = &cands[c];
                witness.push(*j, v.clone());
            }
            return Ok(OracleSolution { n_opt: len, witness });
        }
    }
    let witness = uncoded_fallback(inst);
    let ok = verify_decoding(inst, &witness)?;
    assert!(ok.iter().all(|&b| b), "uncoded transmission always decodes");
    Ok(OracleSolution { n_opt: n, witness })
}

/// Shortest multi-sender linear code by exhaustion (coverage ignored).
pub fn oracle_multisender(inst: &Instance, bounds: &SearchBounds) -> Result<OracleSolution> {
    search(&inst.without_coverage(), bounds)
}

/// Shortest cellular linear code by exhaustion, decoding only through audible
/// senders. Fails with [`Error::Infeasible`] when some receiver hears a single
/// sender that does not hold its wanted message.
pub fn oracle_cellular(inst: &Instance, bounds: &SearchBounds) -> Result<OracleSolution> {
    if !inst.is_cellular() {
        return Err(Error::NoCoverage);
    }
    if let Some(w) = inst.cellular_warnings().into_iter().next() {
        return Err(Error::Infeasible(w));
    }
    search(inst, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_generator;
    use crate::fixtures;
    use crate::fitting::minrank_search;
    use crate::search::SearchConfig;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> MsgSet {
        v.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn uncoded_always_decodes() {
        for (_, inst) in fixtures::all() {
            let inst = inst.without_coverage();
            let gen = Generator::uncoded(&inst);
            assert!(verify_decoding(&inst, &gen).unwrap().iter().all(|&b| b));
        }
    }

    #[test]
    fn instance_b_code_decodes() {
        let inst = fixtures::instance_b();
        let v = verify_decoding(&inst, &fixtures::code_b()).unwrap();
        assert_eq!(v, vec![true; 4]);
        let partial = parse_generator("s1: x1+x4", 4, 2, 2).unwrap();
        let v = verify_decoding(&inst, &partial).unwrap();
        assert!(!v[1]);
    }

    #[test]
    fn support_violation_is_reported() {
        let inst = fixtures::instance_b();
        let bad = parse_generator("s1: x2", 4, 2, 2).unwrap();
        assert!(matches!(verify_decoding(&inst, &bad), Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn instance_c_code_decodes_under_coverage() {
        let inst = fixtures::instance_c();
        let v = verify_cellular_decoding(&inst, &fixtures::code_c()).unwrap();
        assert_eq!(v, vec![true; 3]);
        // Receiver 1 only hears sender 1, which sends x1+x2+x3 against side info {x2,x3}.
        let only_s1 = parse_generator("s1: x1+x2+x3", 3, 2, 2).unwrap();
        assert!(verify_cellular_decoding(&inst, &only_s1).unwrap()[0]);
    }

    #[test]
    fn pool_sizes() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(column_pool(PrimeField::BINARY, 4, set(&[1, 2, 4])).len(), 7);
        // (3^2 - 1) / 2 projective points.
        assert_eq!(column_pool(f3, 3, set(&[1, 3])).len(), 4);
    }

    #[test]
    fn known_optima() {
        let b = SearchBounds::default();
        assert_eq!(oracle_multisender(&fixtures::instance_b(), &b).unwrap().n_opt, 3);
        assert_eq!(oracle_cellular(&fixtures::instance_c(), &b).unwrap().n_opt, 2);
        assert_eq!(oracle_cellular(&fixtures::instance_d(), &b).unwrap().n_opt, 3);
        let none = Instance::unicast(2, vec![MsgSet::EMPTY; 3], vec![set(&[1, 2]), set(&[3])], None).unwrap();
        assert_eq!(oracle_multisender(&none, &b).unwrap().n_opt, 3);
    }

    #[test]
    fn instance_a_matches_minrank() {
        let inst = fixtures::instance_a();
        let o = oracle_multisender(&inst, &SearchBounds::default()).unwrap();
        let s = minrank_search(&inst, &SearchConfig::default().with_workers(4)).unwrap();
        assert_eq!(o.n_opt, s.n_opt);
        assert!(verify_decoding(&inst, &o.witness).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn infeasible_cellular_is_reported() {
        // Receiver 1 hears only sender 1, which lacks x1.
        let cov = crate::instance::CoverageProfile::new(set(&[1]), set(&[2]), MsgSet::EMPTY);
        let inst = Instance::unicast(2, vec![MsgSet::EMPTY; 2], vec![set(&[2]), set(&[1, 2])], Some(cov)).unwrap();
        assert!(matches!(
            oracle_cellular(&inst, &SearchBounds::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let inst = fixtures::instance_a();
        let b = SearchBounds::default().with_max_n(4);
        assert!(matches!(oracle_multisender(&inst, &b), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn worker_count_does_not_change_witness() {
        let b = SearchBounds::default();
        for (_, inst) in fixtures::all() {
            let one = oracle_multisender(&inst, &b).unwrap();
            let four = oracle_multisender(&inst, &b.with_workers(4)).unwrap();
            assert_eq!(one, four);
        }
    }

    /// Relabels messages by `perm` and reverses receiver order.
    fn permuted(inst: &Instance, perm: &[usize]) -> Instance {
        let map = |s: MsgSet| s.iter().map(|i| perm[i]).collect::<MsgSet>();
        let order: Vec<usize> = (0..inst.m()).rev().collect();
        Instance::new(
            inst.q(),
            inst.n(),
            order.iter().map(|&k| perm[inst.wants(k)]).collect(),
            order.iter().map(|&k| map(inst.side_info(k))).collect(),
            inst.senders().iter().map(|&s| map(s)).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = SearchBounds::default();
        for _ in 0..30 {
            let n = rng.random_range(2..=4);
            let inst = crate::sweep::random_instance(&mut rng, n, 2, 2, false);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let a = oracle_multisender(&inst, &b).unwrap().n_opt;
            assert_eq!(oracle_multisender(&permuted(&inst, &perm), &b).unwrap().n_opt, a);
        }
    }
}
