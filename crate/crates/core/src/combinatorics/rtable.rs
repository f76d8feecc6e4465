//! Counts of recursive trees by leaves `l` and smallest-path end `x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::trees::{enumerate_trees, tree_stats};
use crate::report::Findings;

/// Sparse table keyed by `(l, x)`; absent cells are zero.
pub type CountGrid = BTreeMap<(u32, u32), u64>;

fn get(g: &CountGrid, l: i64, x: i64) -> u64 {
    if l < 0 || x < 0 {
        return 0;
    }
    g.get(&(l as u32, x as u32)).copied().unwrap_or(0)
}

/// `r` counts all trees, `a` those whose root is not a leaf and `b` those
/// whose root is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTable {
    pub n: u32,
    pub r: CountGrid,
    pub a: CountGrid,
    pub b: CountGrid,
}

impl RTable {
    pub fn r(&self, l: i64, x: i64) -> u64 {
        get(&self.r, l, x)
    }

    pub fn a(&self, l: i64, x: i64) -> u64 {
        get(&self.a, l, x)
    }

    pub fn b(&self, l: i64, x: i64) -> u64 {
        get(&self.b, l, x)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Cell {
            l: u32,
            x: u32,
            r: u64,
            a: u64,
            b: u64,
        }
        #[derive(Serialize)]
        struct Out {
            n: u32,
            cells: Vec<Cell>,
        }
        let cells = self
            .r
            .iter()
            .map(|(&(l, x), &r)| Cell {
                l,
                x,
                r,
                a: self.a(l.into(), x.into()),
                b: self.b(l.into(), x.into()),
            })
            .collect();
        serde_json::to_string(&Out { n: self.n, cells }).expect("serialisable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,x,r,a,b\n");
        for (&(l, x), &r) in &self.r {
            out.push_str(&format!(
                "{l},{x},{r},{},{}\n",
                self.a(l.into(), x.into()),
                self.b(l.into(), x.into())
            ));
        }
        out
    }
}

/// Tallies every tree on `n` vertices.
pub fn r_table_bruteforce(n: u32) -> RTable {
    let mut t = RTable {
        n,
        r: CountGrid::new(),
        a: CountGrid::new(),
        b: CountGrid::new(),
    };
    for tree in enumerate_trees(n as usize) {
        let s = tree_stats(&tree);
        let key = (s.leaves as u32, s.path_end as u32);
        *t.r.entry(key).or_insert(0) += 1;
        let side = if s.root_is_leaf { &mut t.b } else { &mut t.a };
        *side.entry(key).or_insert(0) += 1;
    }
    t
}

/// `R(n, l, x)` built up from `R(2, 2, 1) = 1` by
/// `R(N,l,x) = sum_{i=max(x,2)}^{N-2} R(N-1,l-1,i) + sum_{i=1}^{max(x-1,1)} R(N-1,l,i)`.
pub fn r_table_recursive(n: u32) -> CountGrid {
    let mut g = CountGrid::from([((2, 1), 1)]);
    if n < 2 {
        return CountGrid::new();
    }
    for m in 3..=i64::from(n) {
        let mut next = CountGrid::new();
        for l in 1..=m {
            for x in 1..m {
                let mut v = 0;
                for i in x.max(2)..=m - 2 {
                    v += get(&g, l - 1, i);
                }
                for i in 1..=(x - 1).max(1) {
                    v += get(&g, l, i);
                }
                if v > 0 {
                    next.insert((l as u32, x as u32), v);
                }
            }
        }
        g = next;
    }
    g
}

/// Complement, root-leaf and path-start identities between the `a`, `b`
/// and `r` tables at `n` and `n-1`, cell by cell.
pub fn ab_identities_check(n: u32) -> Findings {
    let mut f = Findings::new();
    let t = r_table_bruteforce(n);
    let p = r_table_bruteforce(n - 1);
    let n64 = i64::from(n);
    for l in 1..=n64 {
        for x in 1..n64 {
            f.check(t.a(l, x) + t.b(l, x) == t.r(l, x), || {
                format!("n={n} ({l},{x}): a + b != r")
            });
            if x >= 2 {
                let rhs = p.a(l - 1, x - 1) + p.b(l, x - 1);
                f.check(t.b(l, x) == rhs, || {
                    format!(
                        "n={n} ({l},{x}): b = {} but a'(l-1,x-1) + b'(l,x-1) = {rhs}",
                        t.b(l, x)
                    )
                });
            }
        }
        let sum: u64 = (2..n64).map(|i| t.b(l, i)).sum();
        f.check(t.a(l, 1) == sum, || {
            format!(
                "n={n} l={l}: a(l,1) = {} but the b row sums to {sum}",
                t.a(l, 1)
            )
        });
        if n > 2 {
            f.check(t.b(l, 1) == 0, || {
                format!("n={n} l={l}: b(l,1) = {}", t.b(l, 1))
            });
        }
    }
    f
}

/// Column sums are `(n-2)!` for every `x`, and the whole table sums to `(n-1)!`.
pub fn column_sum_check(t: &RTable) -> Findings {
    let mut f = Findings::new();
    let n = t.n;
    let fact = |m: u32| (1..=u64::from(m)).product::<u64>();
    for x in 1..n {
        let s: u64 =
            t.r.iter()
                .filter(|((_, xx), _)| *xx == x)
                .map(|(_, v)| v)
                .sum();
        f.check(s == fact(n - 2), || {
            format!("n={n} x={x}: column sums to {s}")
        });
    }
    let total: u64 = t.r.values().sum();
    f.check(total == fact(n - 1), || {
        format!("n={n}: table sums to {total}")
    });
    f
}

/// Trees on `n` vertices with `l` leaves, as row sums of the table.
pub fn t_values(n: u32) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for (&(l, _), &v) in &r_table_bruteforce(n).r {
        *out.entry(l).or_insert(0) += v;
    }
    out
}

/// `sum_{j=0}^{l-2} (-1)^j (l-1-j) C(n,j) (l-j)^n`, taken literally. It does
/// not agree with [`t_values`]; kept only for comparison.
pub fn t_alternating(n: u32, l: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=i64::from(l) - 2 {
        let term =
            BigInt::from(i64::from(l) - 1 - j) * &binom * BigInt::from(i64::from(l) - j).pow(n);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(i64::from(n) - j) / BigInt::from(j + 1);
    }
    total
}

/// Rows `1..=n` of the Eulerian triangle; row `m` lists permutations of `m`
/// elements by descent count `0..m`.
pub fn eulerian_triangle(n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    if n == 0 {
        return rows;
    }
    rows.push(vec![1]);
    for m in 2..=n as u64 {
        let prev = rows.last().unwrap();
        let row = (0..m)
            .map(|k| {
                let stay = prev.get(k as usize).map_or(0, |&e| (k + 1) * e);
                let up = if k > 0 {
                    (m - k) * prev[k as usize - 1]
                } else {
                    0
                };
                stay + up
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[derive(Clone, Debug)]
pub struct EulerianReport {
    /// `R(N,l,1) = (l-1) R(N-1,l,1) + (N-l) R(N-1,l-1,1)`.
    pub recursion: Findings,
    /// `R(N,l,1)` equals the Eulerian count for `N-2` elements, `l-2` descents.
    pub alignment: Findings,
    /// Cells where `R(N,l,1) = (N+1-l) R(N-1,l,1) + (l-2) R(N-1,l-1,1)` fails.
    pub swapped_coefficient_failures: Vec<(u32, u32)>,
}

impl EulerianReport {
    pub fn is_ok(&self) -> bool {
        self.recursion.is_ok() && self.alignment.is_ok()
    }
}

pub fn eulerian_check(n: u32) -> EulerianReport {
    let mut recursion = Findings::new();
    let mut alignment = Findings::new();
    let mut swapped = Vec::new();
    let t = r_table_bruteforce(n);
    let n64 = i64::from(n);
    if n >= 3 {
        let eul = eulerian_triangle(n as usize - 2);
        let row = &eul[n as usize - 3];
        for l in 2..n {
            let want = row.get(l as usize - 2).copied().unwrap_or(0);
            alignment.check(t.r(l.into(), 1) == want, || {
                format!(
                    "n={n} l={l}: R(n,l,1) = {} but Eulerian gives {want}",
                    t.r(l.into(), 1)
                )
            });
        }
    }
    if n >= 4 {
        let p = r_table_bruteforce(n - 1);
        for l in 2..=n64 {
            let lhs = t.r(l, 1);
            let fixed = (l - 1) as u64 * p.r(l, 1) + (n64 - l) as u64 * p.r(l - 1, 1);
            recursion.check(lhs == fixed, || {
                format!("n={n} l={l}: R(n,l,1) = {lhs}, recursion gives {fixed}")
            });
            let printed = (n64 + 1 - l) as u64 * p.r(l, 1) + (l - 2) as u64 * p.r(l - 1, 1);
            if lhs != printed {
                swapped.push((n, l as u32));
            }
        }
    }
    EulerianReport {
        recursion,
        alignment,
        swapped_coefficient_failures: swapped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(r_table_bruteforce(2).r, CountGrid::from([((2, 1), 1)]));
        let t = r_table_bruteforce(5);
        assert_eq!(t.r(3, 1), 4);
        assert_eq!(t.r(2, 3), 2);
        let want = [
            ((2, 1), 1),
            ((2, 2), 1),
            ((2, 3), 2),
            ((2, 4), 4),
            ((3, 1), 4),
            ((3, 2), 4),
            ((3, 3), 4),
            ((3, 4), 2),
            ((4, 1), 1),
            ((4, 2), 1),
        ];
        assert_eq!(t.r, CountGrid::from(want));
    }

    #[test]
    fn recursion_matches_bruteforce() {
        for n in 2..=8 {
            assert_eq!(r_table_recursive(n), r_table_bruteforce(n).r, "n={n}");
        }
        let p = r_table_bruteforce(4);
        assert_eq!(p.r(2, 2) + p.r(2, 3) + p.r(3, 1), 4);
    }

    #[test]
    fn identities_hold() {
        for n in 3..=7 {
            let f = ab_identities_check(n);
            assert!(f.is_ok(), "n={n}: {f}");
            assert!(column_sum_check(&r_table_bruteforce(n)).is_ok());
        }
        let (t, p) = (r_table_bruteforce(5), r_table_bruteforce(4));
        assert_eq!(t.b(3, 2), p.a(2, 1) + p.b(3, 1));
    }

    #[test]
    fn t_rows() {
        assert_eq!(t_values(3), BTreeMap::from([(2, 2)]));
        assert_eq!(t_values(5), BTreeMap::from([(2, 8), (3, 14), (4, 2)]));
        assert_eq!(t_values(6).values().sum::<u64>(), 120);
        assert_ne!(t_alternating(3, 2), BigInt::from(2));
    }

    #[test]
    fn eulerian() {
        assert_eq!(eulerian_triangle(1), vec![vec![1]]);
        assert_eq!(eulerian_triangle(4)[3], [1, 11, 11, 1]);
        let rep = eulerian_check(5);
        assert!(rep.is_ok());
        assert_eq!(
            (1..5)
                .map(|l| r_table_bruteforce(5).r(l, 1))
                .collect::<Vec<_>>(),
            [0, 1, 4, 1]
        );
        assert!(!rep.swapped_coefficient_failures.is_empty());
        assert!(!rep.swapped_coefficient_failures.contains(&(5, 3)));
    }

    #[test]
    fn json_cells() {
        let j = r_table_bruteforce(3).to_json();
        assert_eq!(
            j,
            r#"{"n":3,"cells":[{"l":2,"x":1,"r":1,"a":1,"b":0},{"l":2,"x":2,"r":1,"a":0,"b":1}]}"#
        );
    }
}
