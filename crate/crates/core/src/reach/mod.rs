//! Exhaustive exploration of the move graph and the structural checks that
//! run over it.
//!
//! Exploration is a breadth-first closure keyed on absolute states, so node
//! and edge order are deterministic: node `0` is the initial state and each
//! edge list follows [`RoomState::available_moves`].

pub mod dot;
mod play;

pub use play::{play, Policy};

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::report::Findings;
use crate::state::{classify_final_shadow, FinalShadowId, LabeledState, Move, RoomState};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug)]
pub struct ReachGraph {
    nodes: Vec<RoomState>,
    index: HashMap<RoomState, usize>,
    edges: Vec<Vec<(Move, usize)>>,
    finals: Vec<usize>,
}

impl ReachGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &RoomState {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &RoomState {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[RoomState] {
        &self.nodes
    }

    pub fn edges(&self, id: usize) -> &[(Move, usize)] {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn id_of(&self, s: &RoomState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Leftmost and rightmost rooms touched by any node.
    pub fn room_bounds(&self) -> (i64, i64) {
        let lo = self
            .nodes
            .iter()
            .map(RoomState::leftmost_room)
            .min()
            .unwrap();
        let hi = self
            .nodes
            .iter()
            .map(RoomState::rightmost_room)
            .max()
            .unwrap();
        (lo, hi)
    }

    /// Integer keys ordered like the entropies of the nodes: entropy scaled
    /// by `2^-lo` where `lo` is the leftmost room in the graph.
    pub fn entropy_keys(&self) -> Vec<BigInt> {
        let (lo, _) = self.room_bounds();
        self.nodes
            .iter()
            .map(|s| {
                let mut k = BigInt::zero();
                for (j, &a) in s.occupancy().iter().enumerate() {
                    if a > 0 {
                        k += BigInt::from(a) << ((s.offset() - lo) as usize + j);
                    }
                }
                k
            })
            .collect()
    }

    /// Node ids sorted by increasing entropy; a topological order, since
    /// every move raises entropy.
    pub fn entropy_order(&self) -> Vec<usize> {
        let keys = self.entropy_keys();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        order
    }

    /// Fewest moves needed to reach each node.
    pub fn min_depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(_, t) in &self.edges[v] {
                if depth[t] == usize::MAX {
                    depth[t] = depth[v] + 1;
                    queue.push_back(t);
                }
            }
        }
        depth
    }
}

pub fn explore(initial: &RoomState) -> Result<ReachGraph> {
    explore_with_budget(initial, DEFAULT_NODE_BUDGET)
}

/// Breadth-first closure of the move relation. Fails rather than truncating
/// when more than `node_budget` distinct states are found.
pub fn explore_with_budget(initial: &RoomState, node_budget: usize) -> Result<ReachGraph> {
    let mut g = ReachGraph {
        nodes: vec![initial.clone()],
        index: HashMap::from([(initial.clone(), 0)]),
        edges: Vec::new(),
        finals: Vec::new(),
    };
    let mut v = 0;
    while v < g.nodes.len() {
        let moves = g.nodes[v].available_moves();
        let mut out = Vec::with_capacity(moves.len());
        for m in moves {
            let next = g.nodes[v].apply_move(&m)?;
            let id = match g.index.get(&next) {
                Some(&id) => id,
                None => {
                    if g.nodes.len() >= node_budget {
                        return Err(Error::BudgetExceeded {
                            budget: node_budget,
                        });
                    }
                    let id = g.nodes.len();
                    g.index.insert(next.clone(), id);
                    g.nodes.push(next);
                    id
                }
            };
            out.push((m, id));
        }
        if out.is_empty() {
            g.finals.push(v);
        }
        g.edges.push(out);
        v += 1;
    }
    Ok(g)
}

/// Every edge strictly raises entropy. Together with finiteness this makes
/// the graph acyclic, which is the checkable face of termination.
pub fn check_entropy_increases(g: &ReachGraph) -> Findings {
    let mut f = Findings::new();
    for v in 0..g.len() {
        let e = g.node(v).entropy();
        for (m, t) in g.edges(v) {
            let after = g.node(*t).entropy();
            f.check(after > e, || {
                format!(
                    "move at {} from {} does not raise entropy",
                    m.left_room,
                    g.node(v)
                )
            });
        }
    }
    f
}

/// Per-state invariants over a graph grown from a clusteron of size > 1:
/// conservation, the sumtroid delta rule, the move-count formula, no crowded
/// isolated rooms, a firing pair between any two 2-gaps, and the shape of
/// every final.
pub fn check_structure(g: &ReachGraph) -> Findings {
    let mut f = Findings::new();
    let n = g.root().total();
    for v in 0..g.len() {
        let s = g.node(v);
        f.check(s.total() == n, || {
            format!("{s} has {} violinists, not {n}", s.total())
        });
        if n > 1 {
            f.check(!s.has_crowded_isolated_room(), || {
                format!("{s} has a crowded isolated room")
            });
            f.check(pair_between_two_gaps(s), || {
                format!("{s} has two 2-gaps with no adjacent pair between them")
            });
        }
        if s.is_single_occupancy() {
            let expected = n as usize - s.gaps().len() - 1;
            f.check(s.move_count() == expected, || {
                format!("{s} has {} moves, expected {expected}", s.move_count())
            });
        }
        for (m, t) in g.edges(v) {
            let d = g.node(*t).sumtroid() - s.sumtroid();
            f.check(d == m.sumtroid_delta(), || {
                format!(
                    "{s}: sumtroid moved by {d}, neighborhoods say {}",
                    m.sumtroid_delta()
                )
            });
        }
    }
    if n > 1 {
        for &v in g.finals() {
            let s = g.node(v);
            let gaps = s.gaps();
            let ok = s.is_proper_final()
                && gaps.iter().filter(|&&x| x == 2).count() == 1
                && gaps.iter().all(|&x| x == 1 || x == 2)
                && s.span() == 2 * i64::from(n);
            f.check(ok, || format!("final {s} is not of the form F(n,k)"));
        }
    }
    f
}

fn pair_between_two_gaps(s: &RoomState) -> bool {
    let occ = s.occupancy();
    let mut seen_two_gap = false;
    let mut pair_since = false;
    let mut j = 0;
    while j < occ.len() {
        if occ[j] == 0 {
            let start = j;
            while occ[j] == 0 {
                j += 1;
            }
            if j - start == 2 {
                if seen_two_gap && !pair_since {
                    return false;
                }
                seen_two_gap = true;
                pair_since = false;
            }
        } else {
            if j + 1 < occ.len() && occ[j + 1] > 0 {
                pair_since = true;
            }
            j += 1;
        }
    }
    true
}

/// Result of classifying all finals reachable from a state.
#[derive(Clone, Debug, Default)]
pub struct FinalShadowReport {
    pub shadows: BTreeSet<FinalShadowId>,
    /// Finals that are not any `F(n, k)`.
    pub violations: Vec<RoomState>,
}

pub fn final_shadow_set(initial: &RoomState) -> Result<FinalShadowReport> {
    let g = explore(initial)?;
    Ok(final_shadows_of(&g))
}

pub fn final_shadows_of(g: &ReachGraph) -> FinalShadowReport {
    let mut rep = FinalShadowReport::default();
    for &v in g.finals() {
        match classify_final_shadow(&g.node(v).shadow()) {
            Some(id) => {
                rep.shadows.insert(id);
            }
            None => rep.violations.push(g.node(v).clone()),
        }
    }
    rep
}

/// Every clusteron of size `n` (one per composition of `n`), leftmost room 0.
pub fn clusterons(n: u32) -> Vec<RoomState> {
    fn go(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<RoomState>) {
        if rest == 0 {
            out.push(RoomState::new(0, prefix.clone()).unwrap());
            return;
        }
        for a in 1..=rest {
            prefix.push(a);
            go(rest - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// A final state given by its shadow and the room of its leftmost violinist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinalPlacement {
    pub shadow_id: FinalShadowId,
    pub leftmost_room: i64,
}

impl FinalPlacement {
    pub fn state(&self) -> RoomState {
        self.shadow_id.shadow().place(self.leftmost_room)
    }

    pub fn sumtroid(&self) -> i64 {
        self.state().sumtroid()
    }
}

/// The finals of the flat clusteron on rooms `0..n`, as characterised in
/// closed form: `F(n,1)` from room `1-n`, `F(n,n-1)` from room `-1`, and every
/// `F(n,r)` from each room in `2-n ..= -2`.
pub fn flat_final_placements(n: u32) -> BTreeSet<FinalPlacement> {
    let mut out = BTreeSet::new();
    if n < 2 {
        return out;
    }
    let n64 = i64::from(n);
    out.insert(FinalPlacement {
        shadow_id: FinalShadowId { n, k: 1 },
        leftmost_room: 1 - n64,
    });
    out.insert(FinalPlacement {
        shadow_id: FinalShadowId { n, k: n - 1 },
        leftmost_room: -1,
    });
    for k in 1..n {
        for room in (2 - n64)..=-2 {
            out.insert(FinalPlacement {
                shadow_id: FinalShadowId { n, k },
                leftmost_room: room,
            });
        }
    }
    out
}

/// Placements of the finals of `g` that are `F(n,k)` shaped.
pub fn explored_placements(g: &ReachGraph) -> BTreeSet<FinalPlacement> {
    g.finals()
        .iter()
        .filter_map(|&v| {
            let s = g.node(v);
            classify_final_shadow(&s.shadow()).map(|shadow_id| FinalPlacement {
                shadow_id,
                leftmost_room: s.leftmost_room(),
            })
        })
        .collect()
}

/// No run of three or more, and a gap of at least two rooms between any two
/// runs of length two. Multi-occupancy states are never spacious.
pub fn is_spacious(s: &RoomState) -> bool {
    if !s.is_single_occupancy() {
        return false;
    }
    let occ = s.occupancy();
    let mut last_pair_end: Option<usize> = None;
    let mut wide_gap_since = false;
    let mut j = 0;
    while j < occ.len() {
        if occ[j] == 0 {
            let start = j;
            while occ[j] == 0 {
                j += 1;
            }
            if j - start >= 2 {
                wide_gap_since = true;
            }
            continue;
        }
        let start = j;
        while j < occ.len() && occ[j] > 0 {
            j += 1;
        }
        match j - start {
            1 => {}
            2 => {
                if last_pair_end.is_some() && !wide_gap_since {
                    return false;
                }
                last_pair_end = Some(j);
                wide_gap_since = false;
            }
            _ => return false,
        }
    }
    true
}

/// For each node: does every state reachable from it (itself included) share
/// its sumtroid?
pub fn locked_in_flags(g: &ReachGraph) -> Vec<bool> {
    let mut locked = vec![true; g.len()];
    for &v in g.entropy_order().iter().rev() {
        locked[v] = g
            .edges(v)
            .iter()
            .all(|(m, t)| m.sumtroid_delta() == 0 && locked[*t]);
    }
    locked
}

pub fn is_locked_in(g: &ReachGraph, s: &RoomState) -> Option<bool> {
    let id = g.id_of(s)?;
    Some(locked_in_flags(g)[id])
}

/// Locked-in and spacious agree on every node reachable from `initial`.
pub fn verify_locked_in_equivalence(initial: &RoomState) -> Result<Findings> {
    let g = explore(initial)?;
    Ok(locked_in_equivalence_on(&g))
}

pub fn locked_in_equivalence_on(g: &ReachGraph) -> Findings {
    let locked = locked_in_flags(g);
    let mut f = Findings::new();
    for (v, &l) in locked.iter().enumerate() {
        let s = g.node(v);
        let sp = is_spacious(s);
        f.check(l == sp, || format!("{s}: locked-in={l} but spacious={sp}"));
    }
    f
}

/// Change in the number of gaps caused by a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapDelta {
    Decrease,
    Same,
    Increase,
}

impl GapDelta {
    pub fn value(self) -> i64 {
        match self {
            GapDelta::Decrease => -1,
            GapDelta::Same => 0,
            GapDelta::Increase => 1,
        }
    }
}

/// Predicts the gap-count change from what bounds the run being fired: each
/// side is the border, a gap of two or more, or a single empty room. Every
/// single-room gap on a side is filled, and the fired pair always leaves a
/// new 2-gap behind.
pub fn gap_delta_class(s: &RoomState, m: &Move) -> Result<GapDelta> {
    if !s.is_single_occupancy() || s.move_on(m.left_room) != Some(*m) {
        return Err(Error::InvalidMove(format!(
            "{m:?} is not a move of single-occupancy state {}",
            s
        )));
    }
    // m.left_target and m.right_target are the empty rooms bounding the run
    let left_single = s.at(m.left_target - 1) > 0;
    let right_single = s.at(m.right_target + 1) > 0;
    let delta = 1 - i64::from(left_single) - i64::from(right_single);
    Ok(match delta {
        1 => GapDelta::Increase,
        0 => GapDelta::Same,
        _ => GapDelta::Decrease,
    })
}

#[derive(Clone, Debug, Default)]
pub struct GapDeltaReport {
    pub increases: usize,
    pub unchanged: usize,
    pub decreases: usize,
    /// Smallest move number (1-based) at which a decrease can happen.
    pub earliest_decrease: Option<usize>,
    pub findings: Findings,
}

/// Classifies every edge of the graph from `initial` and compares the
/// prediction with the actual change in the number of gaps.
pub fn verify_gap_deltas(initial: &RoomState) -> Result<GapDeltaReport> {
    let g = explore(initial)?;
    let depth = g.min_depths();
    let mut rep = GapDeltaReport::default();
    for (v, &d) in depth.iter().enumerate() {
        let s = g.node(v);
        for (m, t) in g.edges(v) {
            let class = gap_delta_class(s, m)?;
            let actual = g.node(*t).gaps().len() as i64 - s.gaps().len() as i64;
            rep.findings.check(actual == class.value(), || {
                format!(
                    "{s}: move at {} predicted {class:?}, gaps changed by {actual}",
                    m.left_room
                )
            });
            match class {
                GapDelta::Increase => rep.increases += 1,
                GapDelta::Same => rep.unchanged += 1,
                GapDelta::Decrease => {
                    rep.decreases += 1;
                    let move_number = d + 1;
                    rep.earliest_decrease = Some(
                        rep.earliest_decrease
                            .map_or(move_number, |e| e.min(move_number)),
                    );
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct MergeReport {
    pub start: RoomState,
    pub expected: FinalShadowId,
    pub spacious: bool,
    pub final_shadows: BTreeSet<FinalShadowId>,
    pub sumtroid_constant: bool,
}

impl MergeReport {
    pub fn is_ok(&self) -> bool {
        self.spacious
            && self.sumtroid_constant
            && self.final_shadows.len() == 1
            && self.final_shadows.contains(&self.expected)
    }
}

/// Places `F(n1,x)` at room 0 and `F(n2,y)` directly to its right at room
/// `2*n1`, explores, and reports the final shadows reached.
pub fn merge_shadows_check(n1: u32, x: u32, n2: u32, y: u32) -> Result<MergeReport> {
    let left = FinalShadowId::new(n1, x)?;
    let right = FinalShadowId::new(n2, y)?;
    let mut rooms = left.shadow().place(0).positions();
    rooms.extend(right.shadow().place(2 * i64::from(n1)).positions());
    let start = RoomState::from_rooms(rooms)?;
    let g = explore(&start)?;
    let k0 = start.sumtroid();
    Ok(MergeReport {
        spacious: is_spacious(&start),
        expected: FinalShadowId {
            n: n1 + n2,
            k: x + y,
        },
        final_shadows: final_shadows_of(&g).shadows,
        sumtroid_constant: g.nodes().iter().all(|s| s.sumtroid() == k0),
        start,
    })
}

#[derive(Clone, Debug)]
pub struct DisplacementReport {
    pub n: u32,
    /// Largest distance any violinist gets from its starting room.
    pub max_displacement: i64,
    /// How far left the first violinist ends when the rightmost pair is
    /// always fired.
    pub first_violinist_under_rightmost_policy: i64,
    /// How far right the last violinist ends when the leftmost pair is always
    /// fired.
    pub last_violinist_under_leftmost_policy: i64,
    pub labeled_states: usize,
    pub findings: Findings,
}

/// Explores labeled states of the flat clusteron of size `n` by chip-pushing,
/// checking each against the unlabeled move it shadows.
pub fn max_displacement(n: u32) -> Result<DisplacementReport> {
    let start = RoomState::flat(n as usize);
    let origin = LabeledState::from_state(&start);
    let mut f = Findings::new();
    let mut seen = HashMap::from([(origin.clone(), ())]);
    let mut queue = VecDeque::from([origin.clone()]);
    let mut best = 0i64;
    while let Some(ls) = queue.pop_front() {
        for (p, q) in ls.positions().iter().zip(origin.positions()) {
            best = best.max((p - q).abs());
        }
        let s = ls.to_state();
        for m in s.available_moves() {
            let next = ls.apply_move(&m)?;
            f.check(next.to_state() == s.apply_move(&m)?, || {
                format!(
                    "chip-pushing from {s} at {} disagrees with the move",
                    m.left_room
                )
            });
            if seen.insert(next.clone(), ()).is_none() {
                queue.push_back(next);
            }
        }
    }

    let policy_run = |pick_last: bool| -> Result<LabeledState> {
        let mut s = start.clone();
        let mut ls = origin.clone();
        loop {
            let moves = s.available_moves();
            let m = if pick_last {
                moves.last()
            } else {
                moves.first()
            };
            let Some(m) = m else { break };
            ls = ls.apply_move(m)?;
            s = s.apply_move(m)?;
        }
        Ok(ls)
    };
    let last = origin.positions().len() - 1;
    let first_left = origin.positions()[0] - policy_run(true)?.positions()[0];
    let last_right = policy_run(false)?.positions()[last] - origin.positions()[last];

    Ok(DisplacementReport {
        n,
        max_displacement: best,
        first_violinist_under_rightmost_policy: first_left,
        last_violinist_under_leftmost_policy: last_right,
        labeled_states: seen.len(),
        findings: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> RoomState {
        s.parse().unwrap()
    }

    #[test]
    fn flat_four_has_five_finals() {
        let g = explore(&st("0001111000")).unwrap();
        assert_eq!(g.finals().len(), 5);
        assert!(check_entropy_increases(&g).is_ok());
        assert!(check_structure(&g).is_ok());
    }

    #[test]
    fn twelve_is_a_single_path() {
        let g = explore(&st("12")).unwrap();
        assert_eq!(g.len(), 4);
        let mut v = 0;
        let mut path = vec![g.node(0).shadow().to_string()];
        while let [(_, t)] = g.edges(v) {
            v = *t;
            path.push(g.node(v).shadow().to_string());
        }
        assert_eq!(path, ["12", "1011", "11001", "100101"]);
    }

    #[test]
    fn single_violinist_graph() {
        let g = explore(&st("1")).unwrap();
        assert_eq!((g.len(), g.edge_count(), g.finals()), (1, 0, &[0][..]));
    }

    #[test]
    fn budget_is_enforced() {
        let err = explore_with_budget(&RoomState::flat(5), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 10 }));
    }

    #[test]
    fn final_shadows_of_small_clusterons() {
        let rep = final_shadow_set(&st("12")).unwrap();
        assert_eq!(rep.shadows, BTreeSet::from([FinalShadowId { n: 3, k: 1 }]));
        let rep = final_shadow_set(&st("121")).unwrap();
        assert_eq!(rep.shadows, FinalShadowId::family(4).into_iter().collect());
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn placements_count_and_table() {
        assert_eq!(flat_final_placements(5).len(), 10);
        let p4 = flat_final_placements(4);
        // the five finals of the flat clusteron on rooms 3..=6, shifted to 0..=3
        let want: BTreeSet<RoomState> = [
            "0010101001",
            "0100101010",
            "0101001010",
            "0101010010",
            "1001010100",
        ]
        .iter()
        .map(|s| st(s).translated(-3))
        .collect();
        let got: BTreeSet<RoomState> = p4.iter().map(FinalPlacement::state).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn placement_centroid_formula() {
        for p in flat_final_placements(6) {
            let (n, k) = (6i64, i64::from(p.shadow_id.k));
            assert_eq!(p.sumtroid(), n * (p.leftmost_room + n) - k);
        }
    }

    #[test]
    fn spacious_examples() {
        assert!(is_spacious(&st("10101001")));
        assert!(is_spacious(&st("110011")));
        assert!(!is_spacious(&st("1101011")));
        assert!(!is_spacious(&st("10110101101")));
        assert!(!is_spacious(&st("111")));
        assert!(!is_spacious(&st("12")));
    }

    #[test]
    fn not_spacious_is_not_locked_in() {
        let s = st("10110101101");
        let g = explore(&s).unwrap();
        assert_eq!(is_locked_in(&g, &s), Some(false));
    }

    #[test]
    fn locked_in_equivalence_small() {
        for n in 1..=5 {
            let f = verify_locked_in_equivalence(&RoomState::flat(n)).unwrap();
            assert!(f.is_ok(), "N={n}: {f}");
        }
    }

    #[test]
    fn gap_delta_examples() {
        let flat = RoomState::flat(5);
        for m in flat.available_moves() {
            assert_eq!(gap_delta_class(&flat, &m).unwrap(), GapDelta::Increase);
        }
        let s = st("101101001");
        let moves = s.available_moves();
        assert_eq!(moves.len(), 1);
        assert_eq!(gap_delta_class(&s, &moves[0]).unwrap(), GapDelta::Decrease);
        assert_eq!(s.gaps().len(), 3);
        assert_eq!(s.apply_move(&moves[0]).unwrap().gaps().len(), 2);

        let rep = verify_gap_deltas(&flat).unwrap();
        assert!(rep.findings.is_ok(), "{}", rep.findings);
        assert!(rep.earliest_decrease.unwrap() >= 3);
    }

    #[test]
    fn the_five_clusteron_path_reaches_the_decrease() {
        let mut s = RoomState::flat(5);
        for (pick, want) in [(0usize, "1001111"), (1, "10110011"), (1, "101101001")] {
            let moves = s.available_moves();
            s = s.apply_move(&moves[pick]).unwrap();
            assert_eq!(s.shadow().to_string(), want);
        }
    }

    #[test]
    fn merge_smallest_case() {
        let rep = merge_shadows_check(2, 1, 2, 1).unwrap();
        assert!(rep.is_ok(), "{rep:?}");
        assert_eq!(rep.start.to_string(), "10011001");
    }

    #[test]
    fn displacement_of_two() {
        let rep = max_displacement(2).unwrap();
        assert_eq!(rep.max_displacement, 1);
        assert!(rep.findings.is_ok());
    }

    #[test]
    fn clusteron_compositions() {
        assert_eq!(clusterons(4).len(), 8);
        assert!(clusterons(3).contains(&st("12")));
    }
}
