//! Suite-states: the run-length view of single-occupancy room-states.
//!
//! Each maximal run of occupied rooms becomes one cell holding its length,
//! and a gap of `g` empty rooms becomes `g - 1` zero cells. A room move that
//! splits a run of length `k` into `x` and `k - x` becomes the suite move that
//! empties that cell, adding `x` to its left neighbour and `k - x` to its right.
//! The suite offset is the room offset of the leftmost run, so the encoding
//! also respects absolute position.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::pattern;
use crate::reach::{self, ReachGraph};
use crate::report::Findings;
use crate::state::{Move, RoomState};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuiteState {
    offset: i64,
    cells: Vec<u32>,
}

/// Empty the cell at `position`, sending `split` occupants left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SuiteMove {
    pub position: i64,
    pub split: u32,
}

impl SuiteState {
    pub fn new(offset: i64, cells: Vec<u32>) -> Result<Self> {
        let (offset, cells) = pattern::trim(offset, cells)
            .ok_or_else(|| Error::MalformedState("suite-state with no violinists".into()))?;
        Ok(SuiteState { offset, cells })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn total(&self) -> u32 {
        self.cells.iter().sum()
    }

    fn at(&self, pos: i64) -> u32 {
        let j = pos - self.offset;
        if j < 0 || j >= self.cells.len() as i64 {
            0
        } else {
            self.cells[j as usize]
        }
    }

    /// `sum p * cells[p]`, the suite counterpart of the sumtroid.
    pub fn sumtroid(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(j, &c)| i64::from(c) * (self.offset + j as i64))
            .sum()
    }

    pub fn centroid(&self) -> BigRational {
        BigRational::new(self.sumtroid().into(), i64::from(self.total()).into())
    }

    pub fn moves(&self) -> Vec<SuiteMove> {
        let mut out = Vec::new();
        for (j, &k) in self.cells.iter().enumerate() {
            for split in 1..k {
                out.push(SuiteMove {
                    position: self.offset + j as i64,
                    split,
                });
            }
        }
        out
    }

    pub fn apply(&self, m: &SuiteMove) -> Result<SuiteState> {
        let k = self.at(m.position);
        if k < 2 || m.split == 0 || m.split >= k {
            return Err(Error::InvalidMove(format!(
                "split {} of cell {} (value {k}) in {self}",
                m.split, m.position
            )));
        }
        let lo = self.offset.min(m.position - 1);
        let hi = (self.offset + self.cells.len() as i64 - 1).max(m.position + 1);
        let mut cells: Vec<u32> = (lo..=hi).map(|p| self.at(p)).collect();
        let idx = |p: i64| (p - lo) as usize;
        cells[idx(m.position)] = 0;
        cells[idx(m.position - 1)] += m.split;
        cells[idx(m.position + 1)] += k - m.split;
        SuiteState::new(lo, cells)
    }
}

impl fmt::Display for SuiteState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pattern::format_cells(self.offset, &self.cells))
    }
}

impl FromStr for SuiteState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (offset, cells) = pattern::parse_cells(s)?;
        SuiteState::new(offset, cells)
    }
}

pub fn suite_moves(ss: &SuiteState) -> Vec<SuiteMove> {
    ss.moves()
}

pub fn apply_suite_move(ss: &SuiteState, m: &SuiteMove) -> Result<SuiteState> {
    ss.apply(m)
}

/// Runs of `s` as `(first room, length, suite cell position)`.
fn run_layout(s: &RoomState) -> Vec<(i64, usize, i64)> {
    let mut layout = Vec::new();
    let occ = s.occupancy();
    let mut cell = s.offset();
    let mut j = 0usize;
    while j < occ.len() {
        let start = j;
        while j < occ.len() && occ[j] > 0 {
            j += 1;
        }
        layout.push((s.offset() + start as i64, j - start, cell));
        let gap_start = j;
        while j < occ.len() && occ[j] == 0 {
            j += 1;
        }
        let gap = j - gap_start;
        // a run cell, then one zero cell for every empty room beyond the first
        cell += 1 + gap.saturating_sub(1) as i64;
    }
    layout
}

pub fn to_suites(s: &RoomState) -> Result<SuiteState> {
    if !s.is_single_occupancy() {
        return Err(Error::Domain(format!(
            "suite encoding needs single occupancy, got {s}"
        )));
    }
    let layout = run_layout(s);
    let last = layout.last().expect("states are nonempty").2;
    let mut cells = vec![0u32; (last - s.offset() + 1) as usize];
    for &(_, len, cell) in &layout {
        cells[(cell - s.offset()) as usize] = len as u32;
    }
    SuiteState::new(s.offset(), cells)
}

pub fn from_suites(ss: &SuiteState) -> RoomState {
    let mut occ = Vec::new();
    let mut pending_gap = 0usize;
    for (j, &c) in ss.cells.iter().enumerate() {
        if c == 0 {
            pending_gap += 1;
            continue;
        }
        if j > 0 {
            occ.extend(std::iter::repeat_n(0u32, pending_gap + 1));
        }
        pending_gap = 0;
        occ.extend(std::iter::repeat_n(1u32, c as usize));
    }
    RoomState::new(ss.offset, occ).expect("suite-states are nonempty")
}

/// The suite move corresponding to room move `m` on `s`.
pub fn suite_move_for(s: &RoomState, m: &Move) -> Result<SuiteMove> {
    for (start, len, cell) in run_layout(s) {
        let end = start + len as i64 - 1;
        if start <= m.left_room && m.left_room < end {
            return Ok(SuiteMove {
                position: cell,
                split: (m.left_room - start + 1) as u32,
            });
        }
    }
    Err(Error::InvalidMove(format!(
        "{m:?} is not inside a run of {s}"
    )))
}

/// Suite-state reach graph, explored independently of the room side.
pub struct SuiteGraph {
    pub nodes: Vec<SuiteState>,
    pub edges: Vec<Vec<(SuiteMove, usize)>>,
}

pub fn explore_suites(initial: &SuiteState, node_budget: usize) -> Result<SuiteGraph> {
    let mut index = HashMap::new();
    let mut nodes = vec![initial.clone()];
    let mut edges = Vec::new();
    index.insert(initial.clone(), 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let mut out = Vec::new();
        for m in nodes[v].moves() {
            let next = nodes[v].apply(&m)?;
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if nodes.len() >= node_budget {
                        return Err(Error::BudgetExceeded {
                            budget: node_budget,
                        });
                    }
                    let id = nodes.len();
                    index.insert(next.clone(), id);
                    nodes.push(next);
                    queue.push_back(id);
                    id
                }
            };
            out.push((m, id));
        }
        if edges.len() <= v {
            edges.resize_with(v + 1, Vec::new);
        }
        edges[v] = out;
    }
    edges.resize_with(nodes.len(), Vec::new);
    Ok(SuiteGraph { nodes, edges })
}

/// The unfolded suite move tree as nested brackets `[cells child ...]`,
/// offsets dropped. Fails past `node_budget` tree nodes.
pub fn suite_forest(initial: &SuiteState, node_budget: usize) -> Result<String> {
    fn go(s: &SuiteState, out: &mut String, left: &mut usize, budget: usize) -> Result<()> {
        if *left == 0 {
            return Err(Error::BudgetExceeded { budget });
        }
        *left -= 1;
        out.push('[');
        pattern::write_cells(out, s.cells());
        for m in s.moves() {
            go(&s.apply(&m)?, out, left, budget)?;
        }
        out.push(']');
        Ok(())
    }
    let mut out = String::new();
    let mut left = node_budget;
    go(initial, &mut out, &mut left, node_budget)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub room_nodes: usize,
    pub suite_nodes: usize,
    pub edges_checked: usize,
    pub findings: Findings,
}

impl CorrespondenceReport {
    pub fn is_ok(&self) -> bool {
        self.findings.is_ok()
    }
}

/// Checks that the encoding maps the room move graph from `initial` onto the
/// suite move graph from its encoding, edge for edge, and that corresponding
/// moves shift the centroid by the same amount.
pub fn verify_move_correspondence(initial: &RoomState) -> Result<CorrespondenceReport> {
    let rooms = reach::explore(initial)?;
    let suites = explore_suites(&to_suites(initial)?, reach::DEFAULT_NODE_BUDGET)?;
    Ok(compare_graphs(&rooms, &suites))
}

fn compare_graphs(rooms: &ReachGraph, suites: &SuiteGraph) -> CorrespondenceReport {
    let mut f = Findings::new();
    let n = i64::from(rooms.root().total());
    let suite_index: HashMap<&SuiteState, usize> = suites
        .nodes
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    let mut images = HashSet::new();
    let mut edges_checked = 0;
    for v in 0..rooms.len() {
        let s = rooms.node(v);
        let enc = match to_suites(s) {
            Ok(e) => e,
            Err(e) => {
                f.fail(format!("{s}: {e}"));
                continue;
            }
        };
        f.check(from_suites(&enc) == *s, || {
            format!("round trip fails on {s}")
        });
        let Some(&sv) = suite_index.get(&enc) else {
            f.fail(format!(
                "{s} encodes to {enc}, which the suite graph never reaches"
            ));
            continue;
        };
        images.insert(sv);

        let room_edges = rooms.edges(v);
        let suite_edges = &suites.edges[sv];
        f.check(room_edges.len() == suite_edges.len(), || {
            format!(
                "{s} has {} moves but {enc} has {}",
                room_edges.len(),
                suite_edges.len()
            )
        });
        for ((m, t), (sm, st)) in room_edges.iter().zip(suite_edges) {
            edges_checked += 1;
            match suite_move_for(s, m) {
                Ok(expected) => f.check(expected == *sm, || {
                    format!(
                        "{s}: move at {} maps to {expected:?}, suite order has {sm:?}",
                        m.left_room
                    )
                }),
                Err(e) => f.fail(e.to_string()),
            }
            let target = rooms.node(*t);
            let target_enc = to_suites(target).ok();
            f.check(target_enc.as_ref() == Some(&suites.nodes[*st]), || {
                format!(
                    "{s} -> {target} encodes to {:?}, suite side reached {}",
                    target_enc.map(|e| e.to_string()),
                    suites.nodes[*st]
                )
            });
            let room_delta = BigRational::new(m.sumtroid_delta().into(), n.into());
            let suite_delta = suites.nodes[*st].centroid() - enc.centroid();
            f.check(room_delta == suite_delta, || {
                format!("{s}: centroid moves by {room_delta} on rooms, {suite_delta} on suites")
            });
        }
    }
    f.check(images.len() == suites.nodes.len(), || {
        format!(
            "encoding hits {} of {} suite-states",
            images.len(),
            suites.nodes.len()
        )
    });
    f.check(rooms.len() == suites.nodes.len(), || {
        format!(
            "{} room-states vs {} suite-states",
            rooms.len(),
            suites.nodes.len()
        )
    });

    CorrespondenceReport {
        room_nodes: rooms.len(),
        suite_nodes: suites.nodes.len(),
        edges_checked,
        findings: f,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RoomState {
        s.parse().unwrap()
    }

    fn ss(s: &str) -> SuiteState {
        s.parse().unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(to_suites(&rs("1011001")).unwrap().to_string(), "1201");
        assert_eq!(to_suites(&rs("1111")).unwrap().to_string(), "4");
        assert_eq!(to_suites(&rs("101")).unwrap().to_string(), "11");
        assert!(matches!(to_suites(&rs("12")), Err(Error::Domain(_))));
    }

    #[test]
    fn decoding_examples() {
        assert_eq!(from_suites(&ss("1201")).to_string(), "1011001");
        assert_eq!(from_suites(&ss("4")).to_string(), "1111");
        assert_eq!(from_suites(&ss("1[12]")).to_string(), "10111111111111");
    }

    #[test]
    fn suite_move_examples() {
        let four = ss("4");
        assert_eq!(four.moves().len(), 3);
        let out = four
            .apply(&SuiteMove {
                position: 0,
                split: 1,
            })
            .unwrap();
        assert_eq!(out.cells(), &[1, 0, 3]);
        assert_eq!(out.offset(), -1);

        let out = ss("31")
            .apply(&SuiteMove {
                position: 0,
                split: 2,
            })
            .unwrap();
        assert_eq!(out.cells(), &[2, 0, 2]);

        let out = ss("104")
            .apply(&SuiteMove {
                position: 2,
                split: 2,
            })
            .unwrap();
        assert_eq!(out.cells(), &[1, 2, 0, 2]);

        assert!(matches!(
            four.apply(&SuiteMove {
                position: 0,
                split: 4
            }),
            Err(Error::InvalidMove(_))
        ));
        assert!(matches!(
            ss("31").apply(&SuiteMove {
                position: 1,
                split: 1
            }),
            Err(Error::InvalidMove(_))
        ));
    }

    #[test]
    fn single_violinist_graphs_are_trivial() {
        let rep = verify_move_correspondence(&rs("1")).unwrap();
        assert!(rep.is_ok(), "{}", rep.findings);
        assert_eq!(
            (rep.room_nodes, rep.suite_nodes, rep.edges_checked),
            (1, 1, 0)
        );
    }

    #[test]
    fn flat_four_and_five_correspond() {
        for n in [4, 5] {
            let rep = verify_move_correspondence(&RoomState::flat(n)).unwrap();
            assert!(rep.is_ok(), "N={n}: {}", rep.findings);
            assert!(rep.edges_checked > 0);
        }
    }

    #[test]
    fn suite_tree_of_four_matches_the_drawing() {
        assert_eq!(
            suite_forest(&ss("4"), 1000).unwrap(),
            "[4[103[1102[11101]][1201[2011[10111]]]][202[1012[10201[11011]]][2101[10201[11011]]]]\
             [301[1021[1102[11101]]][2011[10111]]]]"
        );
        assert!(suite_forest(&ss("4"), 10).is_err());
    }
}
