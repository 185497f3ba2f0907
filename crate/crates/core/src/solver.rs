//! Nest-point reduction, lifting and the exact solver for beta-acyclic instances.

use crate::elimination::{self, EliminationRecord, OpCount, RecordKind};
use crate::error::{CheckedProfit, Error, Result};
use crate::hypergraph::NodeId;
use crate::instance::{Instance, Profit};
use crate::tracker::{NestPoint, NestTracker};

/// Ordered elimination records and the total constant they contribute.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationTrace {
    pub records: Vec<EliminationRecord>,
    pub accumulated_offset: Profit,
}

/// Result of stripping nest points: the remaining instance and the
/// certificate needed to extend its solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedProblem {
    pub core: Instance,
    pub trace: EliminationTrace,
    pub original_node_count: usize,
    /// Arithmetic operations spent during reduction.
    pub ops: OpCount,
}

impl ReducedProblem {
    /// Share of original nodes removed by the reduction, in `[0, 1]`.
    pub fn removed_fraction(&self) -> f64 {
        if self.original_node_count == 0 {
            return 1.0;
        }
        self.trace.records.len() as f64 / self.original_node_count as f64
    }

    pub fn core_nodes(&self) -> Vec<NodeId> {
        self.core.hypergraph().nodes().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Value of every original node, indexed by node id.
    pub assignment: Vec<bool>,
    pub objective: Profit,
}

/// Step-by-step nest-point elimination.
///
/// [`Reducer::step`] always removes the lowest-id nest point; [`Reducer::eliminate`]
/// removes a caller-chosen one. After a partial run the core may still have
/// nest points.
pub struct Reducer {
    work: Instance,
    tracker: NestTracker,
    trace: EliminationTrace,
    original_node_count: usize,
    ops: OpCount,
}

impl Reducer {
    pub fn new(instance: &Instance) -> Self {
        Self::from_owned(instance.clone())
    }

    pub fn from_owned(instance: Instance) -> Self {
        Reducer {
            tracker: NestTracker::new(instance.hypergraph()),
            original_node_count: instance.node_bound(),
            work: instance,
            trace: EliminationTrace::default(),
            ops: OpCount::default(),
        }
    }

    /// The current (partially reduced) instance.
    pub fn current(&self) -> &Instance {
        &self.work
    }

    pub fn trace(&self) -> &EliminationTrace {
        &self.trace
    }

    /// Eliminates the lowest-id nest point; `None` once none is left.
    pub fn step(&mut self) -> Result<Option<&EliminationRecord>> {
        match self.tracker.next(self.work.hypergraph()) {
            Some(nest) => self.apply(nest).map(Some),
            None => Ok(None),
        }
    }

    /// Eliminates the given node, which must be a nest point.
    pub fn eliminate(&mut self, u: NodeId) -> Result<&EliminationRecord> {
        if !self.work.hypergraph().contains_node(u) {
            return Err(Error::UnknownNode(u));
        }
        let nest = self
            .tracker
            .nest_point(self.work.hypergraph(), u)
            .ok_or(Error::NotNestPoint(u))?;
        self.apply(nest)
    }

    fn apply(&mut self, nest: NestPoint) -> Result<&EliminationRecord> {
        let record = elimination::eliminate_counted(&mut self.work, nest, &mut self.ops)?;
        self.trace.accumulated_offset = self.trace.accumulated_offset.add_or_overflow(record.offset())?;
        self.trace.records.push(record);
        Ok(self.trace.records.last().expect("just pushed"))
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()?.is_some() {}
        Ok(())
    }

    pub fn into_reduced(self) -> ReducedProblem {
        ReducedProblem {
            core: self.work,
            trace: self.trace,
            original_node_count: self.original_node_count,
            ops: self.ops,
        }
    }
}

/// Removes nest points (lowest id first) until none is left.
pub fn reduce(instance: &Instance) -> Result<ReducedProblem> {
    let mut reducer = Reducer::new(instance);
    reducer.run()?;
    Ok(reducer.into_reduced())
}

/// Extends a solution of the core to all original nodes by replaying the
/// trace backwards. `core_solution` is indexed by original node id; entries
/// of eliminated nodes are ignored.
pub fn lift(reduced: &ReducedProblem, core_solution: &[bool]) -> Result<Vec<bool>> {
    lift_counted(reduced, core_solution, &mut OpCount::default())
}

pub fn lift_counted(reduced: &ReducedProblem, core_solution: &[bool], ops: &mut OpCount) -> Result<Vec<bool>> {
    let n = reduced.original_node_count;
    if core_solution.len() != n {
        return Err(Error::AssignmentMismatch {
            expected: n,
            got: core_solution.len(),
        });
    }
    let core = reduced.core.hypergraph().nodes().map(|v| (v, core_solution[v.index()]));
    lift_trace_counted(&reduced.trace, n, core, ops)
}

/// Lifts from a bare trace: `core` gives the value of every node left in the core.
pub fn lift_trace(
    trace: &EliminationTrace,
    original_node_count: usize,
    core: impl IntoIterator<Item = (NodeId, bool)>,
) -> Result<Vec<bool>> {
    lift_trace_counted(trace, original_node_count, core, &mut OpCount::default())
}

fn lift_trace_counted(
    trace: &EliminationTrace,
    n: usize,
    core: impl IntoIterator<Item = (NodeId, bool)>,
    ops: &mut OpCount,
) -> Result<Vec<bool>> {
    let mut x: Vec<Option<bool>> = vec![None; n];
    for (v, b) in core {
        let slot = x.get_mut(v.index()).ok_or(Error::UnknownNode(v))?;
        if slot.replace(b).is_some() {
            return Err(Error::DuplicateNode(v));
        }
    }
    for record in trace.records.iter().rev() {
        let u = record.node.index();
        if u >= n || x[u].is_some() {
            return Err(Error::Invalid(format!(
                "trace assigns {} twice or out of range",
                record.node
            )));
        }
        x[u] = Some(match &record.kind {
            RecordKind::LoopOnly { decided_bit, .. } => *decided_bit,
            RecordKind::Chain(chain) => elimination::phi_counted(chain, &x, ops)?,
        });
    }
    x.into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(Error::Unassigned(NodeId(i as u32))))
        .collect()
}

/// Checks `obj(original, lift(core_solution)) = obj(core, core_solution) + offset`.
pub fn optimal_objective_offset_check(
    instance: &Instance,
    reduced: &ReducedProblem,
    core_solution: &[bool],
) -> Result<bool> {
    let lifted = lift(reduced, core_solution)?;
    let lhs = instance.evaluate(&lifted)?;
    let rhs = reduced
        .core
        .evaluate(core_solution)?
        .add_or_overflow(reduced.trace.accumulated_offset)?;
    Ok(lhs == rhs)
}

/// Solves a beta-acyclic instance exactly.
///
/// Fails with [`Error::NotBetaAcyclic`] carrying the partial reduction when
/// nest points run out before the hypergraph is empty.
pub fn solve(instance: &Instance) -> Result<Solution> {
    solve_counted(instance).map(|(solution, _)| solution)
}

/// [`solve`], also returning the arithmetic operations spent.
pub fn solve_counted(instance: &Instance) -> Result<(Solution, OpCount)> {
    let reduced = reduce(instance)?;
    if reduced.core.node_count() > 0 {
        return Err(Error::NotBetaAcyclic(Box::new(reduced)));
    }
    let mut ops = reduced.ops;
    let assignment = lift_counted(&reduced, &vec![false; reduced.original_node_count], &mut ops)?;
    let objective = instance.evaluate(&assignment)?;
    if objective != reduced.trace.accumulated_offset {
        return Err(Error::Invariant(format!(
            "objective {objective} differs from accumulated offset {}",
            reduced.trace.accumulated_offset
        )));
    }
    Ok((Solution { assignment, objective }, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::FlipClass;
    use crate::hypergraph::EdgeId;

    fn worked_example() -> Instance {
        Instance::from_parts(
            vec![1, 3, 2, -1, 1],
            vec![
                (vec![0, 1, 2], 2),
                (vec![1, 2], -1),
                (vec![1, 2, 3], -6),
                (vec![0, 1, 2, 3, 4], 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_solves() {
        let inst = worked_example();
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.assignment, vec![true, true, true, false, true]);
        assert_eq!(sol.objective, 8);
    }

    #[test]
    fn worked_example_trace() {
        let inst = worked_example();
        let reduced = reduce(&inst).unwrap();
        let order: Vec<_> = reduced.trace.records.iter().map(|r| r.node.0).collect();
        assert_eq!(order, vec![0, 1, 2, 3, 4]);
        let offsets: Vec<_> = reduced.trace.records.iter().map(EliminationRecord::offset).collect();
        assert_eq!(offsets, vec![1, 3, 3, 0, 1]);
        assert_eq!(reduced.trace.accumulated_offset, 8);
        match &reduced.trace.records[3].kind {
            RecordKind::Chain(c) => {
                assert_eq!(c.edges, vec![EdgeId(2), EdgeId(3)]);
                assert_eq!(c.classes, vec![FlipClass::NP; 3]);
                assert_eq!(c.lambda, 2);
            }
            other => panic!("expected a chain record, got {other:?}"),
        }
        assert!(matches!(
            reduced.trace.records[4].kind,
            RecordKind::LoopOnly {
                decided_bit: true,
                gain: 1
            }
        ));
    }

    #[test]
    fn triangle_is_left_alone() {
        let inst =
            Instance::from_parts(vec![1, 2, 3], vec![(vec![0, 1], 1), (vec![1, 2], -1), (vec![0, 2], 4)]).unwrap();
        let reduced = reduce(&inst).unwrap();
        assert!(reduced.trace.records.is_empty());
        assert_eq!(reduced.core, inst);
        let x = vec![true, false, true];
        assert_eq!(lift(&reduced, &x).unwrap(), x);
        assert!(optimal_objective_offset_check(&inst, &reduced, &x).unwrap());
        match solve(&inst) {
            Err(Error::NotBetaAcyclic(r)) => assert_eq!(r.core.node_count(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn isolated_negative_node() {
        let sol = solve(&Instance::new(vec![-3])).unwrap();
        assert_eq!(sol.assignment, vec![false]);
        assert_eq!(sol.objective, 0);
    }

    #[test]
    fn laminar_all_ones() {
        for n in 1..=8 {
            let inst = Instance::from_parts(vec![1; n], (1..=n).map(|i| ((0..i).collect::<Vec<_>>(), 1))).unwrap();
            let sol = solve(&inst).unwrap();
            assert_eq!(sol.assignment, vec![true; n]);
            assert_eq!(sol.objective, 2 * n as i64);
        }
    }

    #[test]
    fn lift_rejects_wrong_length() {
        let reduced = reduce(&worked_example()).unwrap();
        assert!(matches!(lift(&reduced, &[true]), Err(Error::AssignmentMismatch { .. })));
    }

    #[test]
    fn eliminating_a_non_nest_point_fails() {
        let inst = Instance::from_parts(vec![0; 3], vec![(vec![0, 1], 1), (vec![1, 2], 1)]).unwrap();
        let mut reducer = Reducer::new(&inst);
        assert!(matches!(reducer.eliminate(NodeId(1)), Err(Error::NotNestPoint(_))));
        assert!(reducer.eliminate(NodeId(2)).is_ok());
    }
}
