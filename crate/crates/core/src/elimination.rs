//! Elimination of a single nest point.
//!
//! For a nest point `u` with chain `e_1 ⊆ … ⊆ e_k` and `e_0 = {u}` carrying
//! `p_u`, the prefix sums `S_i = p_{e_0} + … + p_{e_i}` are scanned for sign
//! flips. Every chain index falls into one of four classes; the classes decide
//! the rewritten profits of the surviving edges and, when lifting, the value
//! of `u` given the values of the remaining nodes.

use std::fmt;
use std::str::FromStr;

use crate::error::{CheckedProfit, Error, Result};
use crate::hypergraph::{EdgeChain, EdgeId, Hypergraph, NestedSets, NodeId};
use crate::instance::{Instance, Profit};
use crate::tracker::NestPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipClass {
    /// Positive flip: `S_i > 0`, previous non-zero prefix sum negative or absent.
    P,
    /// Negative flip: `S_i < 0`, previous non-zero prefix sum positive or absent.
    N,
    /// Non-flip index in a stretch that ends in a positive flip (or never flips, non-positive start).
    NP,
    /// Non-flip index in a stretch that ends in a negative flip (or never flips, positive start).
    PN,
}

impl FlipClass {
    /// Whether `u` is set to 1 when this is the class of `μ`.
    pub fn sets_one(self) -> bool {
        matches!(self, FlipClass::P | FlipClass::PN)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlipClass::P => "P",
            FlipClass::N => "N",
            FlipClass::NP => "NP",
            FlipClass::PN => "PN",
        }
    }
}

impl fmt::Display for FlipClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlipClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(FlipClass::P),
            "N" => Ok(FlipClass::N),
            "NP" => Ok(FlipClass::NP),
            "PN" => Ok(FlipClass::PN),
            other => Err(Error::Invalid(format!("unknown flip class {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipClassification {
    /// `[p_{e_0}, …, p_{e_k}]`.
    pub profits: Vec<Profit>,
    /// `S_0..=S_k`.
    pub prefix_sums: Vec<Profit>,
    pub classes: Vec<FlipClass>,
}

impl FlipClassification {
    /// Chain length `k`.
    pub fn k(&self) -> usize {
        self.classes.len() - 1
    }

    /// Indices holding the given class.
    pub fn indices(&self, class: FlipClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == class)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Counts profit additions, comparisons and search probes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub arithmetic: u64,
}

impl OpCount {
    #[inline]
    fn add(&mut self, n: usize) {
        self.arithmetic += n as u64;
    }
}

/// Classifies chain indices `0..=k` from the profits `[p_{e_0}, …, p_{e_k}]`.
///
/// A run of zero prefix sums has no previous non-zero value; leaving it for a
/// non-zero sum counts as a flip in that direction.
pub fn classify_flips(profits: &[Profit]) -> Result<FlipClassification> {
    classify_flips_counted(profits, &mut OpCount::default())
}

pub(crate) fn classify_flips_counted(profits: &[Profit], ops: &mut OpCount) -> Result<FlipClassification> {
    if profits.is_empty() {
        return Err(Error::Invalid("a chain has at least the position e_0".into()));
    }
    let mut prefix_sums = Vec::with_capacity(profits.len());
    let mut acc: Profit = 0;
    for &p in profits {
        acc = acc.add_or_overflow(p)?;
        prefix_sums.push(acc);
    }

    let mut flips = vec![None; profits.len()];
    let mut last_sign = prefix_sums[0].signum();
    for i in 1..profits.len() {
        let s = prefix_sums[i].signum();
        if s > 0 && last_sign <= 0 {
            flips[i] = Some(FlipClass::P);
        } else if s < 0 && last_sign >= 0 {
            flips[i] = Some(FlipClass::N);
        }
        if s != 0 {
            last_sign = s;
        }
    }
    ops.add(3 * profits.len());

    let mut fill = match flips.iter().flatten().next() {
        Some(FlipClass::P) => FlipClass::NP,
        Some(_) => FlipClass::PN,
        None if profits[0] > 0 => FlipClass::PN,
        None => FlipClass::NP,
    };
    let classes = flips
        .into_iter()
        .map(|flip| match flip {
            Some(FlipClass::P) => {
                fill = FlipClass::PN;
                FlipClass::P
            }
            Some(_) => {
                fill = FlipClass::NP;
                FlipClass::N
            }
            None => fill,
        })
        .collect();

    Ok(FlipClassification {
        profits: profits.to_vec(),
        prefix_sums,
        classes,
    })
}

/// Position of the first chain edge that is not the loop `{u}`, by binary
/// search over the inclusion order. `None` when every incident edge is a loop.
pub fn compute_lambda(chain: &EdgeChain, g: &Hypergraph) -> Option<usize> {
    compute_lambda_counted(chain, g, &mut OpCount::default())
}

fn compute_lambda_counted(chain: &EdgeChain, g: &Hypergraph, ops: &mut OpCount) -> Option<usize> {
    let mut probes = 0;
    let first_wide = chain.edges.partition_point(|&e| {
        probes += 1;
        g.edge_len_unchecked(e) <= 1
    });
    ops.add(probes);
    (first_wide < chain.len()).then_some(first_wide + 1)
}

/// New profits for chain positions `lambda..=k`.
pub fn rewritten_chain_profits(cls: &FlipClassification, lambda: usize) -> Result<Vec<Profit>> {
    (lambda..cls.classes.len())
        .map(|i| match cls.classes[i] {
            FlipClass::NP => Ok(0),
            FlipClass::P => Ok(cls.prefix_sums[i]),
            FlipClass::PN => Ok(cls.profits[i]),
            FlipClass::N => cls.prefix_sums[i - 1].neg_or_overflow(),
        })
        .collect()
}

/// New profits for the edges `e_λ..e_k`; every other profit is unchanged.
pub fn rewrite_profits(chain: &EdgeChain, cls: &FlipClassification, lambda: usize) -> Result<Vec<(EdgeId, Profit)>> {
    if lambda == 0 || lambda > chain.len() || cls.k() != chain.len() {
        return Err(Error::Invalid(format!(
            "lambda {lambda} outside chain of length {}",
            chain.len()
        )));
    }
    let profits = rewritten_chain_profits(cls, lambda)?;
    Ok(chain.edges[lambda - 1..].iter().copied().zip(profits).collect())
}

/// Constant picked up by the objective when `u` is eliminated:
/// `S_{λ-1}` if `λ` is in `PN` or `N`, else 0.
pub fn elimination_offset(cls: &FlipClassification, lambda: usize) -> Profit {
    match cls.classes[lambda] {
        FlipClass::PN | FlipClass::N => cls.prefix_sums[lambda - 1],
        FlipClass::P | FlipClass::NP => 0,
    }
}

/// Value of `u` when all its edges are loops: 1 iff `S_k ≥ 0`. Returns the bit
/// and the resulting constant gain `max(0, S_k)`.
pub fn loop_only_decision(profits: &[Profit]) -> Result<(bool, Profit)> {
    let total = profits.iter().try_fold(0 as Profit, |acc, &p| acc.add_or_overflow(p))?;
    Ok((total >= 0, total.max(0)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRecord {
    /// Chain edge ids at elimination time, for reporting.
    pub edges: Vec<EdgeId>,
    /// `e_i \ {u}` for positions `0..=k`.
    pub stripped: NestedSets,
    pub classes: Vec<FlipClass>,
    pub lambda: usize,
    pub offset: Profit,
}

impl ChainRecord {
    pub fn k(&self) -> usize {
        self.classes.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordKind {
    LoopOnly { decided_bit: bool, gain: Profit },
    Chain(ChainRecord),
}

/// Everything needed to restore the value of one eliminated node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationRecord {
    pub node: NodeId,
    pub kind: RecordKind,
}

impl EliminationRecord {
    /// The constant this step adds to the objective.
    pub fn offset(&self) -> Profit {
        match &self.kind {
            RecordKind::LoopOnly { gain, .. } => *gain,
            RecordKind::Chain(c) => c.offset,
        }
    }
}

/// Largest position `i` such that every node of `e_i \ {u}` is set to 1.
///
/// `x` is indexed by node id; only nodes that are scanned must be assigned.
pub fn mu(record: &ChainRecord, x: &[Option<bool>]) -> Result<usize> {
    mu_counted(record, x, &mut OpCount::default())
}

pub(crate) fn mu_counted(record: &ChainRecord, x: &[Option<bool>], ops: &mut OpCount) -> Result<usize> {
    let members = record.stripped.members();
    let bounds = record.stripped.bounds();
    let mut first_zero = None;
    for (j, &v) in members.iter().enumerate() {
        match x.get(v.index()).copied().flatten() {
            None => return Err(Error::Unassigned(v)),
            Some(false) => {
                first_zero = Some(j);
                ops.add(j + 1);
                break;
            }
            Some(true) => {}
        }
    }
    let mu = match first_zero {
        None => {
            ops.add(members.len());
            bounds.len() - 1
        }
        Some(j) => {
            let mut probes = 0;
            let past = bounds.partition_point(|&b| {
                probes += 1;
                (b as usize) <= j
            });
            ops.add(probes);
            past - 1
        }
    };
    if mu + 1 < record.lambda {
        return Err(Error::Invariant(format!(
            "mu = {mu} below lambda - 1 = {}",
            record.lambda - 1
        )));
    }
    Ok(mu)
}

/// The value of the eliminated node: 1 iff the class of `μ(x)` is `P` or `PN`.
pub fn phi(record: &ChainRecord, x: &[Option<bool>]) -> Result<bool> {
    Ok(record.classes[mu(record, x)?].sets_one())
}

pub(crate) fn phi_counted(record: &ChainRecord, x: &[Option<bool>], ops: &mut OpCount) -> Result<bool> {
    Ok(record.classes[mu_counted(record, x, ops)?].sets_one())
}

/// Eliminates a nest point from `instance`: rewrites the profits of the
/// surviving chain edges, removes the node, and returns the lifting record.
pub fn eliminate(instance: &mut Instance, nest: NestPoint) -> Result<EliminationRecord> {
    eliminate_counted(instance, nest, &mut OpCount::default())
}

pub(crate) fn eliminate_counted(
    instance: &mut Instance,
    nest: NestPoint,
    ops: &mut OpCount,
) -> Result<EliminationRecord> {
    let NestPoint { chain, stripped } = nest;
    let u = chain.owner;
    let profits = instance.chain_profits(&chain)?;
    let kind = match compute_lambda_counted(&chain, instance.hypergraph(), ops) {
        None => {
            ops.add(profits.len());
            let (decided_bit, gain) = loop_only_decision(&profits)?;
            RecordKind::LoopOnly { decided_bit, gain }
        }
        Some(lambda) => {
            let cls = classify_flips_counted(&profits, ops)?;
            let updates = rewrite_profits(&chain, &cls, lambda)?;
            ops.add(updates.len());
            for (e, p) in updates {
                instance.set_edge_profit(e, p)?;
            }
            RecordKind::Chain(ChainRecord {
                offset: elimination_offset(&cls, lambda),
                edges: chain.edges,
                stripped,
                classes: cls.classes,
                lambda,
            })
        }
    };
    instance.remove_node(u)?;
    Ok(EliminationRecord { node: u, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use FlipClass::*;

    #[test]
    fn worked_classification() {
        let cls = classify_flips(&[3, -3, 1, -2, 3, 2]).unwrap();
        assert_eq!(cls.indices(PN), vec![0, 1, 2, 5]);
        assert_eq!(cls.indices(N), vec![3]);
        assert_eq!(cls.indices(NP), Vec::<usize>::new());
        assert_eq!(cls.indices(P), vec![4]);
    }

    #[test]
    fn no_flip_cases() {
        assert_eq!(classify_flips(&[2, 1, 4]).unwrap().classes, vec![PN; 3]);
        assert_eq!(classify_flips(&[-1, -3, 0]).unwrap().classes, vec![NP; 3]);
        assert_eq!(classify_flips(&[0]).unwrap().classes, vec![NP]);
    }

    #[test]
    fn leaving_a_zero_prefix_is_a_flip() {
        assert_eq!(classify_flips(&[0, 5]).unwrap().classes, vec![NP, P]);
        assert_eq!(classify_flips(&[0, 0, -1]).unwrap().classes, vec![PN, PN, N]);
    }

    #[test]
    fn loop_only() {
        assert_eq!(loop_only_decision(&[1, 0]).unwrap(), (true, 1));
        assert_eq!(loop_only_decision(&[1, -3]).unwrap(), (false, 0));
        assert_eq!(loop_only_decision(&[2, -2]).unwrap(), (true, 0));
        assert!(matches!(loop_only_decision(&[i64::MAX, 1]), Err(Error::Overflow)));
    }

    #[test]
    fn rewrite_all_np_is_zero() {
        let cls = classify_flips(&[-1, -2, 1, -4]).unwrap();
        assert_eq!(cls.classes, vec![NP; 4]);
        assert_eq!(rewritten_chain_profits(&cls, 1).unwrap(), vec![0, 0, 0]);
    }

    fn record(profits: &[Profit], sizes: &[usize], lambda: usize) -> ChainRecord {
        // Nodes 0.. are the non-owner nodes; set i holds the first sizes[i] of them.
        let cls = classify_flips(profits).unwrap();
        let sets: Vec<Vec<NodeId>> = sizes.iter().map(|&s| (0..s as u32).map(NodeId).collect()).collect();
        ChainRecord {
            edges: Vec::new(),
            stripped: NestedSets::from_sets(&sets).unwrap(),
            offset: elimination_offset(&cls, lambda),
            classes: cls.classes,
            lambda,
        }
    }

    #[test]
    fn mu_and_phi() {
        let rec = record(&[1, 1, 1, 1], &[0, 1, 2, 3], 1);
        let all_zero = vec![Some(false); 3];
        assert_eq!(mu(&rec, &all_zero).unwrap(), 0);
        assert_eq!(mu(&rec, &[Some(true), Some(true), Some(false)]).unwrap(), 2);
        assert_eq!(mu(&rec, &[Some(true); 3]).unwrap(), 3);
        assert!(phi(&rec, &all_zero).unwrap());
        assert!(matches!(
            mu(&rec, &[Some(true), None, Some(true)]),
            Err(Error::Unassigned(NodeId(1)))
        ));
    }

    #[test]
    fn sign_and_cycle_examples() {
        let cls = classify_flips(&[-1, 2, -3, 4, -5]).unwrap();
        assert_eq!(cls.classes, vec![NP, P, N, P, N]);
    }

    fn next_allowed(prev: FlipClass, next: FlipClass) -> bool {
        // Cyclic order NP → P → PN → N → NP, where NP and PN runs may be empty.
        match prev {
            NP => matches!(next, NP | P),
            P => matches!(next, PN | N),
            PN => matches!(next, PN | N),
            N => matches!(next, NP | P),
        }
    }

    /// Sum of the rewritten profits over `B = {λ..μ}` predicted case by case.
    fn predicted_b_sum(cls: &FlipClassification, lambda: usize, mu: usize) -> Profit {
        let s = &cls.prefix_sums;
        let c = &cls.classes;
        let before = s[lambda - 1];
        let range = s[mu] - before;
        let has_p = (lambda..=mu).any(|i| c[i] == P);
        let mu_one = c[mu].sets_one();
        if !has_p {
            match (c[lambda], c[mu]) {
                (NP, _) => 0,
                (PN, PN) => range,
                (N, _) | (PN, N | NP) => -before,
                _ => unreachable!("no positive flip in range but mu is P"),
            }
        } else {
            match (matches!(c[lambda], NP | P), mu_one) {
                (true, false) => 0,
                (true, true) => s[mu],
                (false, false) => -before,
                (false, true) => range,
            }
        }
    }

    proptest! {
        #[test]
        fn classes_cycle_and_match_signs(profits in prop::collection::vec(-6i64..=6, 1..12)) {
            let cls = classify_flips(&profits).unwrap();
            prop_assert!(matches!(cls.classes[0], NP | PN));
            for w in cls.classes.windows(2) {
                prop_assert!(next_allowed(w[0], w[1]), "{:?}", cls.classes);
            }
            for (i, &c) in cls.classes.iter().enumerate() {
                let s = cls.prefix_sums[i];
                match c {
                    P => prop_assert!(s > 0),
                    N => prop_assert!(s < 0),
                    PN => prop_assert!(s >= 0),
                    NP => prop_assert!(s <= 0),
                }
            }
        }

        #[test]
        fn block_sums_follow_case_analysis(
            profits in prop::collection::vec(-6i64..=6, 2..12),
            lambda_seed in 0usize..100,
            mu_seed in 0usize..100,
        ) {
            let cls = classify_flips(&profits).unwrap();
            let k = cls.k();
            let lambda = 1 + lambda_seed % k;
            let mu = lambda + mu_seed % (k - lambda + 1);
            let rewritten = rewritten_chain_profits(&cls, lambda).unwrap();
            let actual: Profit = rewritten[..=mu - lambda].iter().sum();
            prop_assert_eq!(actual, predicted_b_sum(&cls, lambda, mu));
        }
    }
}
