//! Permutations, their descent statistics, and the bijection with recursive
//! trees.

use std::collections::BTreeMap;

use super::rtable::{r_table_bruteforce, CountGrid, RTable};
use super::trees::{enumerate_trees, tree_stats, RecursiveTree};
use crate::error::{Error, Result};
use crate::report::Findings;

/// A word holding each of `1..=n` exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; word.len() + 1];
        for &v in &word {
            if v == 0 || v as usize > word.len() || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::Domain(format!("{word:?} is not a permutation")));
            }
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u32).collect(),
        }
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Next permutation in lexicographic order.
    fn advance(&mut self) -> bool {
        let w = &mut self.word;
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
            return false;
        };
        let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).unwrap();
        w.swap(i - 1, j);
        w[i..].reverse();
        true
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.word.iter().map(u32::to_string).collect();
        let sep = if self.word.len() > 9 { " " } else { "" };
        write!(f, "{}", parts.join(sep))
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut cur = Some(Permutation::identity(n));
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        cur = next.advance().then_some(next);
        Some(out)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PermStats {
    pub descents: u32,
    /// Descents, plus one if the word starts with 1.
    pub special_descents: u32,
    /// Descents that drop by at least two.
    pub big_descents: u32,
    pub last: u32,
    pub first: u32,
}

pub fn perm_stats(p: &Permutation) -> PermStats {
    let w = p.word();
    let mut descents = 0;
    let mut big = 0;
    for pair in w.windows(2) {
        if pair[0] > pair[1] {
            descents += 1;
            if pair[0] - pair[1] >= 2 {
                big += 1;
            }
        }
    }
    PermStats {
        descents,
        special_descents: descents + u32::from(w.first() == Some(&1)),
        big_descents: big,
        last: w.last().copied().unwrap_or(0),
        first: w.first().copied().unwrap_or(0),
    }
}

/// Depth-first from the root, entering children largest first, writing each
/// vertex as it is reached. The root is not written.
pub fn tree_to_perm(t: &RecursiveTree) -> Permutation {
    let ch = t.children();
    let mut word = Vec::with_capacity(t.len().saturating_sub(1));
    let mut stack: Vec<usize> = ch[0].clone();
    while let Some(v) = stack.pop() {
        word.push(v as u32);
        stack.extend(ch[v].iter().copied());
    }
    Permutation { word }
}

/// Inverse of [`tree_to_perm`]: each letter hangs from the last earlier
/// letter smaller than it, or from the root if there is none.
pub fn perm_to_tree(p: &Permutation) -> RecursiveTree {
    let w = p.word();
    let mut parent = vec![None; w.len() + 1];
    // stack of letters with increasing values; the top is the candidate parent
    let mut stack: Vec<u32> = Vec::new();
    for &v in w {
        while stack.last().is_some_and(|&top| top > v) {
            stack.pop();
        }
        parent[v as usize] = Some(stack.last().map_or(0, |&top| top as usize));
        stack.push(v);
    }
    RecursiveTree::new(parent).expect("smaller letters are always earlier vertices")
}

/// Value relabelling on permutations of `1..=n`: swap 1 and 2, and send
/// `i > 2` to `n + 3 - i`.
pub fn relabel(p: &Permutation) -> Permutation {
    let n = p.len() as u32;
    let word = p
        .word()
        .iter()
        .map(|&v| match v {
            1 => 2,
            2 => 1,
            v => n + 3 - v,
        })
        .collect();
    Permutation { word }
}

fn tally(
    perms: impl Iterator<Item = Permutation>,
    key: impl Fn(&PermStats) -> Option<(u32, u32)>,
) -> CountGrid {
    let mut g = CountGrid::new();
    for p in perms {
        if let Some(k) = key(&perm_stats(&p)) {
            *g.entry(k).or_insert(0) += 1;
        }
    }
    g
}

fn compare(f: &mut Findings, what: &str, got: &CountGrid, want: &CountGrid) {
    let keys: std::collections::BTreeSet<_> = got.keys().chain(want.keys()).collect();
    for k in keys {
        let (g, w) = (
            got.get(k).copied().unwrap_or(0),
            want.get(k).copied().unwrap_or(0),
        );
        f.check(g == w, || {
            format!("{what} at (l,x)={k:?}: counted {g}, table has {w}")
        });
    }
}

/// Tree/permutation round trips on `n` vertices, with the leaf and path-end
/// statistics carried across.
pub fn bijection_check(n: usize) -> Findings {
    let mut f = Findings::new();
    for t in enumerate_trees(n) {
        let p = tree_to_perm(&t);
        f.check(Permutation::new(p.word().to_vec()).is_ok(), || {
            format!("{t:?} gave {p}")
        });
        f.check(perm_to_tree(&p) == t, || {
            format!("{p} does not rebuild its tree")
        });
        let (ts, ps) = (tree_stats(&t), perm_stats(&p));
        f.check(ps.special_descents as usize + 1 == ts.leaves, || {
            format!(
                "{p}: {} special descents but {} leaves",
                ps.special_descents, ts.leaves
            )
        });
        f.check(ps.last as usize == ts.path_end || n == 1, || {
            format!("{p}: last letter {} but path end {}", ps.last, ts.path_end)
        });
    }
    for p in permutations(n.saturating_sub(1)) {
        f.check(tree_to_perm(&perm_to_tree(&p)) == p, || {
            format!("{p} does not round trip")
        });
    }
    f
}

/// Permutation tallies against the tree table for `n` vertices:
/// (a) special descents and last letter over `S_{n-1}`;
/// (b) plain descents and last letter minus one, for `x >= 2`, with `x = 1`
///     via `R(n,l,1) = R(n,n+1-l,2)`;
/// (c) descents and last letter over `S_n` restricted to words starting with 2;
/// (d) the relabelling is an involution moving each statistic class as the
///     table symmetries require.
pub fn perm_count_checks(n: u32) -> Findings {
    let mut f = Findings::new();
    let t: RTable = r_table_bruteforce(n);
    let m = n as usize - 1;
    let n64 = i64::from(n);

    let a = tally(permutations(m), |s| Some((s.special_descents + 1, s.last)));
    compare(&mut f, "special descents", &a, &t.r);

    let b = tally(permutations(m), |s| Some((s.descents + 1, s.last + 1)));
    let mut want_b = t.r.clone();
    want_b.retain(|&(_, x), _| x >= 2);
    let mut got_b = b.clone();
    got_b.retain(|&(_, x), _| x >= 2 && x < n);
    compare(&mut f, "descents", &got_b, &want_b);
    for l in 1..=n64 {
        f.check(t.r(l, 1) == t.r(n64 + 1 - l, 2), || {
            format!("n={n}: R(n,{l},1) != R(n,{},2)", n64 + 1 - l)
        });
    }

    let c = tally(permutations(n as usize), |s| {
        if s.first != 2 {
            return None;
        }
        let x = if s.last == 1 { 1 } else { s.last - 1 };
        Some((s.descents + 1, x))
    });
    compare(&mut f, "words starting with 2", &c, &t.r);

    let class = |s: &PermStats| (i64::from(s.special_descents) + 1, i64::from(s.last));
    for p in permutations(m) {
        let q = relabel(&p);
        f.check(relabel(&q) == p, || {
            format!("relabelling is not an involution at {p}")
        });
        let (l, x) = class(&perm_stats(&p));
        let want = match x {
            1 => (n64 + 1 - l, 2),
            2 => (n64 + 1 - l, 1),
            _ => (n64 - l, n64 + 2 - x),
        };
        let got = class(&perm_stats(&q));
        f.check(got == want, || {
            format!("{p} -> {q}: class {got:?}, expected {want:?}")
        });
    }
    for l in 1..=n64 {
        for x in 3..n64 {
            f.check(t.r(l, x) == t.r(n64 - l, n64 + 2 - x), || {
                format!("n={n}: R(n,{l},{x}) != R(n,{},{})", n64 - l, n64 + 2 - x)
            });
        }
    }
    f
}

/// Permutations of `1..=n` counted by a statistic, optionally restricted to
/// a last letter.
pub fn stat_tally(n: usize, stat: Stat, last: Option<u32>) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for p in permutations(n) {
        let s = perm_stats(&p);
        if last.is_some_and(|l| l != s.last) {
            continue;
        }
        let v = match stat {
            Stat::Descents => s.descents,
            Stat::Special => s.special_descents,
            Stat::Big => s.big_descents,
        };
        *out.entry(v).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stat {
    Descents,
    Special,
    Big,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(w: &[u32]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn stats_examples() {
        let s = perm_stats(&perm(&[2, 3, 4, 1]));
        assert_eq!((s.descents, s.special_descents, s.last), (1, 1, 1));
        let s = perm_stats(&perm(&[1, 2, 3, 4]));
        assert_eq!((s.descents, s.special_descents, s.last), (0, 1, 4));
        let s = perm_stats(&perm(&[4, 3, 2, 1]));
        assert_eq!(
            (s.descents, s.special_descents, s.big_descents, s.last),
            (3, 3, 0, 1)
        );
    }

    #[test]
    fn bijection_examples() {
        assert_eq!(tree_to_perm(&RecursiveTree::chain(5)), perm(&[1, 2, 3, 4]));
        assert_eq!(tree_to_perm(&RecursiveTree::star(5)), perm(&[4, 3, 2, 1]));
        for n in 1..=7 {
            let f = bijection_check(n);
            assert!(f.is_ok(), "n={n}: {f}");
        }
    }

    #[test]
    fn lexicographic_permutations() {
        let all: Vec<String> = permutations(3).map(|p| p.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(permutations(0).count(), 1);
        assert!(Permutation::new(vec![1, 1]).is_err());
    }

    #[test]
    fn count_checks() {
        for n in 3..=7 {
            let f = perm_count_checks(n);
            assert!(f.is_ok(), "n={n}: {f}");
        }
    }

    #[test]
    fn descent_example_at_five() {
        let n = permutations(4)
            .filter(|p| {
                let s = perm_stats(p);
                s.descents == 2 && s.last == 3
            })
            .count();
        assert_eq!(n as u64, r_table_bruteforce(5).r(3, 4));
        assert_eq!(n, 2);
    }

    #[test]
    fn special_tally_with_last_one() {
        let t = stat_tally(4, Stat::Special, Some(1));
        assert_eq!(t, BTreeMap::from([(1, 1), (2, 4), (3, 1)]));
    }
}
