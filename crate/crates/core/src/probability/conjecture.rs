//! The `(l, x)` relabelling of sumtroids and the sliding-window recurrence
//! between consecutive scaled rows.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{forbidden_residue, sumtroid_bound, ScaledRow};
use crate::combinatorics::RTable;
use crate::error::{Error, Result};
use crate::report::Findings;

/// A leaf count `ell` and smallest-path end `x` in a recursive tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LxPair {
    pub ell: i64,
    pub x: i64,
}

fn check_sumtroid(n: u32, k: i64) -> Result<()> {
    let b = sumtroid_bound(n);
    if n < 3 || k.abs() > b {
        return Err(Error::Domain(format!(
            "K={k} outside [-{b}, {b}] for n={n}"
        )));
    }
    if (k - forbidden_residue(n)).rem_euclid(i64::from(n)) == 0 {
        return Err(Error::Domain(format!(
            "K={k} is in the forbidden class {} mod {n}",
            forbidden_residue(n)
        )));
    }
    Ok(())
}

pub fn sumtroid_to_lx(n: u32, k: i64) -> Result<LxPair> {
    check_sumtroid(n, k)?;
    let n64 = i64::from(n);
    let s = k + sumtroid_bound(n);
    let x = match s.rem_euclid(n64) {
        0 => 1,
        r => r,
    };
    Ok(LxPair {
        ell: s.div_euclid(n64) + 2,
        x,
    })
}

pub fn lx_to_sumtroid(n: u32, lx: LxPair) -> Result<i64> {
    let n64 = i64::from(n);
    if n < 3 || lx.x < 1 || lx.x >= n64 || lx.ell < 2 || lx.ell >= n64 {
        return Err(Error::Domain(format!("{lx:?} is out of range for n={n}")));
    }
    let k = -sumtroid_bound(n) + (lx.ell - 2) * n64 + (lx.x - 1) + (lx.x - 1).min(1);
    check_sumtroid(n, k)?;
    Ok(k)
}

/// Inclusive window `[lo, hi]` of row `n-1` that sums to the entry of row `n`
/// at `k`. The offset `A = floor((k+M)/n) - (1+(-1)^n)/4` is half-integral for
/// even `n`, which makes both bounds integral.
pub fn window_bounds(n: u32, k: i64) -> Result<(i64, i64)> {
    let n64 = i64::from(n);
    let parity = if n.is_multiple_of(2) {
        Rational64::new(1, 2)
    } else {
        Rational64::from_integer(0)
    };
    let a = Rational64::from_integer((k + forbidden_residue(n)).div_euclid(n64)) - parity;
    let half = Rational64::new(n64 - 1, 2);
    let k = Rational64::from_integer(k);
    let lo = k - half - a;
    let hi = k + half - a - 1;
    if !lo.is_integer() || !hi.is_integer() {
        return Err(Error::ConjectureViolation(format!(
            "window bounds {lo}..{hi} are not integral for n={n}"
        )));
    }
    Ok((lo.to_integer(), hi.to_integer()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSum {
    pub k: i64,
    pub lo: i64,
    pub hi: i64,
    pub terms: Vec<u64>,
    pub sum: u64,
}

/// The window sums for every allowed `k` of the next row, in order of `k`.
pub fn window_sums(prev: &ScaledRow) -> Result<Vec<WindowSum>> {
    let n = prev.n + 1;
    let m = forbidden_residue(n);
    let b = sumtroid_bound(n);
    let mut out = Vec::new();
    for k in -b..=b {
        if (k - m).rem_euclid(i64::from(n)) == 0 {
            continue;
        }
        let (lo, hi) = window_bounds(n, k)?;
        let terms: Vec<u64> = (lo..=hi).map(|i| prev.get(i)).collect();
        out.push(WindowSum {
            k,
            lo,
            hi,
            sum: terms.iter().sum(),
            terms,
        });
    }
    Ok(out)
}

/// Row `n` from row `n-1`: window sums at allowed sumtroids, zeros inserted
/// on the forbidden class.
pub fn window_recurrence_step(prev: &ScaledRow) -> Result<ScaledRow> {
    let n = prev.n + 1;
    let b = sumtroid_bound(n);
    let mut values: BTreeMap<i64, u64> = (-b..=b).map(|k| (k, 0)).collect();
    for w in window_sums(prev)? {
        values.insert(w.k, w.sum);
    }
    Ok(ScaledRow { n, values })
}

/// Every tree-table cell equals the scaled probability at its relabelled
/// sumtroid, and every allowed sumtroid is reached by some cell.
pub fn bridge_check(table: &RTable, row: &ScaledRow) -> Findings {
    let mut f = Findings::new();
    let n = row.n;
    f.check(table.n == n, || {
        format!("table for n={} against row for n={n}", table.n)
    });
    for (&(l, x), &r) in &table.r {
        let lx = LxPair {
            ell: l.into(),
            x: x.into(),
        };
        match lx_to_sumtroid(n, lx) {
            Ok(k) => f.check(row.get(k) == r, || {
                format!(
                    "n={n}: R({l},{x}) = {r} but the row has {} at K={k}",
                    row.get(k)
                )
            }),
            Err(e) => f.fail(format!(
                "n={n}: cell ({l},{x}) holding {r} has no sumtroid: {e}"
            )),
        }
    }
    let b = sumtroid_bound(n);
    for k in -b..=b {
        if let Ok(lx) = sumtroid_to_lx(n, k) {
            let r = table.r(lx.ell, lx.x);
            f.check(r == row.get(k), || {
                format!(
                    "n={n}: K={k} maps to {lx:?} holding {r}, row has {}",
                    row.get(k)
                )
            });
        }
    }
    f
}
