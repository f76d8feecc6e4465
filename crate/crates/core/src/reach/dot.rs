//! Graphviz and bracket-forest renderings of a reach graph.
//!
//! Tree mode unfolds the DAG into one node per move sequence; DAG mode keeps
//! one node per state. Output is deterministic: nodes and edges follow
//! exploration order, which in turn follows move order.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{locked_in_flags, ReachGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Labels {
    #[default]
    Pattern,
    /// Sumtroid relative to the root.
    Sumtroid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Tree,
    #[default]
    Dag,
}

/// Which of the root's moves to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Half {
    /// The first `ceil(m/2)` of the root's `m` moves.
    Left,
    /// The remaining `floor(m/2)`.
    Right,
    #[default]
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DotOptions {
    pub labels: Labels,
    pub mode: Mode,
    pub half: Half,
    /// Draw locked-in states as leaves.
    pub prune_locked: bool,
    /// Refuse to unfold trees with more nodes than this.
    pub node_budget: usize,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            labels: Labels::Pattern,
            mode: Mode::Dag,
            half: Half::Full,
            prune_locked: false,
            node_budget: 1_000_000,
        }
    }
}

struct View<'a> {
    g: &'a ReachGraph,
    opts: DotOptions,
    locked: Vec<bool>,
    window: (i64, i64),
    k0: i64,
}

impl<'a> View<'a> {
    fn new(g: &'a ReachGraph, opts: DotOptions) -> Self {
        let locked = if opts.prune_locked {
            locked_in_flags(g)
        } else {
            vec![false; g.len()]
        };
        View {
            g,
            opts,
            locked,
            window: g.room_bounds(),
            k0: g.root().sumtroid(),
        }
    }

    fn label(&self, v: usize) -> String {
        match self.opts.labels {
            Labels::Pattern => self.g.node(v).render_window(self.window.0, self.window.1),
            Labels::Sumtroid => (self.g.node(v).sumtroid() - self.k0).to_string(),
        }
    }

    /// Edge indices to follow out of `v`.
    fn children(&self, v: usize) -> std::ops::Range<usize> {
        let m = self.g.edges(v).len();
        if self.locked[v] {
            return 0..0;
        }
        if v != 0 {
            return 0..m;
        }
        let split = m.div_ceil(2);
        match self.opts.half {
            Half::Left => 0..split,
            Half::Right => split..m,
            Half::Full => 0..m,
        }
    }

    /// Visits the unfolded tree in preorder. The callback sees the node id and
    /// move path on entry (`true`) and again after the subtree (`false`).
    fn unfold(&self, mut visit: impl FnMut(usize, &[usize], bool)) -> Result<()> {
        let mut count = 0usize;
        let mut path = Vec::new();
        // (node, remaining child edges)
        let mut stack = vec![(0usize, self.children(0))];
        visit(0, &path, true);
        count += 1;
        while let Some((v, range)) = stack.last_mut() {
            let v = *v;
            match range.next() {
                Some(e) => {
                    count += 1;
                    if count > self.opts.node_budget {
                        return Err(Error::BudgetExceeded {
                            budget: self.opts.node_budget,
                        });
                    }
                    let t = self.g.edges(v)[e].1;
                    path.push(e);
                    visit(t, &path, true);
                    stack.push((t, self.children(t)));
                }
                None => {
                    visit(v, &path, false);
                    stack.pop();
                    path.pop();
                }
            }
        }
        Ok(())
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn path_id(g: &ReachGraph, v: usize, path: &[usize]) -> String {
    let p: Vec<String> = path.iter().map(usize::to_string).collect();
    format!("{}#{}", g.node(v), p.join("."))
}

/// Renders the graph as a Graphviz digraph. Edges are labelled with the two
/// neighborhoods of the move.
pub fn to_dot(g: &ReachGraph, opts: DotOptions) -> Result<String> {
    let view = View::new(g, opts);
    let mut out = String::from("digraph reach {\n  node [shape=box, fontname=monospace];\n");
    match opts.mode {
        Mode::Dag => {
            let mut seen = BTreeSet::from([0usize]);
            let mut order = vec![0usize];
            let mut i = 0;
            while i < order.len() {
                let v = order[i];
                for e in view.children(v) {
                    let t = g.edges(v)[e].1;
                    if seen.insert(t) {
                        order.push(t);
                    }
                }
                i += 1;
            }
            for &v in &order {
                let _ = writeln!(
                    out,
                    "  {} [label={}];",
                    quote(&g.node(v).to_string()),
                    quote(&view.label(v))
                );
            }
            for &v in &order {
                for e in view.children(v) {
                    let (m, t) = &g.edges(v)[e];
                    let _ = writeln!(
                        out,
                        "  {} -> {} [label={}];",
                        quote(&g.node(v).to_string()),
                        quote(&g.node(*t).to_string()),
                        quote(&format!("{},{}", m.left_nbhd, m.right_nbhd))
                    );
                }
            }
        }
        Mode::Tree => {
            let mut lines = Vec::new();
            let mut ids: Vec<(String, usize)> = Vec::new();
            view.unfold(|v, path, entering| {
                if !entering {
                    ids.pop();
                    return;
                }
                {
                    let id = path_id(g, v, path);
                    lines.push(format!(
                        "  {} [label={}];",
                        quote(&id),
                        quote(&view.label(v))
                    ));
                    if let Some((parent, pv)) = ids.last() {
                        let m = &g.edges(*pv)[*path.last().unwrap()].0;
                        lines.push(format!(
                            "  {} -> {} [label={}];",
                            quote(parent),
                            quote(&id),
                            quote(&format!("{},{}", m.left_nbhd, m.right_nbhd))
                        ));
                    }
                    ids.push((id, v));
                }
            })?;
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// The unfolded tree as nested brackets, `[label child child ...]` with no
/// separators, e.g. `[0[3][1]]`.
pub fn to_forest(g: &ReachGraph, opts: DotOptions) -> Result<String> {
    let view = View::new(g, opts);
    let mut out = String::new();
    view.unfold(|v, _, entering| {
        if entering {
            out.push('[');
            out.push_str(&view.label(v));
        } else {
            out.push(']');
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::explore;
    use crate::state::RoomState;

    #[test]
    fn two_clusteron_forest() {
        let g = explore(&RoomState::flat(2)).unwrap();
        let f = to_forest(&g, DotOptions::default()).unwrap();
        assert_eq!(f, "[0110[1001]]");
    }

    #[test]
    fn halves_split_the_root_moves() {
        let g = explore(&RoomState::flat(5)).unwrap();
        let opts = DotOptions {
            labels: Labels::Sumtroid,
            half: Half::Left,
            ..DotOptions::default()
        };
        let f = to_forest(&g, opts).unwrap();
        assert!(f.starts_with("[0[3"));
        let right = to_forest(
            &g,
            DotOptions {
                half: Half::Right,
                ..opts
            },
        )
        .unwrap();
        assert!(right.starts_with("[0[-1"));
    }

    #[test]
    fn dot_is_deterministic_and_quoted() {
        let g = explore(&RoomState::flat(3)).unwrap();
        for mode in [Mode::Dag, Mode::Tree] {
            let opts = DotOptions {
                mode,
                ..DotOptions::default()
            };
            let a = to_dot(&g, opts).unwrap();
            assert_eq!(a, to_dot(&g, opts).unwrap());
            assert!(a.starts_with("digraph"));
            let root_id = if mode == Mode::Dag {
                "\"111\""
            } else {
                "\"111#\""
            };
            assert!(a.contains(root_id), "{a}");
        }
    }

    #[test]
    fn tree_budget() {
        let g = explore(&RoomState::flat(6)).unwrap();
        let opts = DotOptions {
            mode: Mode::Tree,
            node_budget: 5,
            ..DotOptions::default()
        };
        assert!(to_forest(&g, opts).is_err());
    }
}
