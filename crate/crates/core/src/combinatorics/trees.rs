//! Recursive (increasing) trees on vertices `0..n`, rooted at 0.

use crate::error::{Error, Result};

/// `parent[v] < v` for every `v >= 1`; `parent[0]` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecursiveTree {
    parent: Vec<Option<usize>>,
}

impl RecursiveTree {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        if parent.first() != Some(&None) {
            return Err(Error::Domain("vertex 0 must be the parentless root".into()));
        }
        for (v, p) in parent.iter().enumerate().skip(1) {
            match p {
                Some(p) if *p < v => {}
                _ => {
                    return Err(Error::Domain(format!(
                        "vertex {v} needs a parent below it, got {p:?}"
                    )))
                }
            }
        }
        Ok(RecursiveTree { parent })
    }

    /// Builds from the parents of vertices `1..n`.
    pub fn from_parents(parents: &[usize]) -> Result<Self> {
        let mut parent = vec![None];
        parent.extend(parents.iter().map(|&p| Some(p)));
        RecursiveTree::new(parent)
    }

    pub fn chain(n: usize) -> Self {
        let parents: Vec<usize> = (0..n.saturating_sub(1)).collect();
        RecursiveTree::from_parents(&parents).unwrap()
    }

    pub fn star(n: usize) -> Self {
        RecursiveTree::from_parents(&vec![0; n.saturating_sub(1)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Children of every vertex, each list ascending.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(v);
            }
        }
        ch
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeStats {
    /// Vertices of degree one, the root included when it has one child.
    pub leaves: usize,
    /// Last vertex of the path from 0 that always steps to the smallest child.
    pub path_end: usize,
    pub root_is_leaf: bool,
}

pub fn tree_stats(t: &RecursiveTree) -> TreeStats {
    let ch = t.children();
    let root_is_leaf = ch[0].len() <= 1;
    let leaves = usize::from(root_is_leaf) + ch[1..].iter().filter(|c| c.is_empty()).count();
    let mut v = 0;
    while let Some(&c) = ch[v].first() {
        v = c;
    }
    TreeStats {
        leaves,
        path_end: v,
        root_is_leaf,
    }
}

/// All `(n-1)!` trees on `n` vertices, in lexicographic order of the parent
/// sequence of vertices `1..n`.
pub fn enumerate_trees(n: usize) -> TreeIter {
    TreeIter {
        parents: vec![0; n.saturating_sub(1)],
        done: n == 0,
    }
}

pub struct TreeIter {
    parents: Vec<usize>,
    done: bool,
}

impl Iterator for TreeIter {
    type Item = RecursiveTree;

    fn next(&mut self) -> Option<RecursiveTree> {
        if self.done {
            return None;
        }
        let t = RecursiveTree::from_parents(&self.parents).expect("odometer keeps parents below");
        // odometer: digit j (vertex j+1) ranges over 0..=j
        let mut j = self.parents.len();
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            if self.parents[j] < j {
                self.parents[j] += 1;
                self.parents[j + 1..].iter_mut().for_each(|p| *p = 0);
                break;
            }
        }
        Some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_factorials() {
        assert_eq!(enumerate_trees(1).count(), 1);
        assert_eq!(enumerate_trees(3).count(), 2);
        assert_eq!(enumerate_trees(5).count(), 24);
        assert_eq!(enumerate_trees(7).count(), 720);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let v: Vec<_> = enumerate_trees(5).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v[0], RecursiveTree::star(5));
        assert_eq!(*v.last().unwrap(), RecursiveTree::chain(5));
    }

    #[test]
    fn stats_of_small_trees() {
        let chain = tree_stats(&RecursiveTree::chain(3));
        assert_eq!(
            (chain.leaves, chain.path_end, chain.root_is_leaf),
            (2, 2, true)
        );
        let star = tree_stats(&RecursiveTree::star(3));
        assert_eq!(
            (star.leaves, star.path_end, star.root_is_leaf),
            (2, 1, false)
        );
        // both 0 and 4 are leaves of the chain
        assert_eq!(tree_stats(&RecursiveTree::chain(5)).leaves, 2);
        let t = RecursiveTree::from_parents(&[0, 0, 1, 1]).unwrap();
        assert_eq!(
            tree_stats(&t),
            TreeStats {
                leaves: 3,
                path_end: 3,
                root_is_leaf: false
            }
        );
    }

    #[test]
    fn rejects_bad_parents() {
        assert!(RecursiveTree::new(vec![None, Some(1)]).is_err());
        assert!(RecursiveTree::new(vec![Some(0)]).is_err());
    }
}
