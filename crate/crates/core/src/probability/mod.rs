//! Exact final-sumtroid distributions under uniform random move choice.
//!
//! At every non-final state one of the available moves is picked uniformly.
//! Mass flows forward through the move DAG in entropy order (a topological
//! order), so each state is visited once and only finals keep their mass.

pub mod conjecture;
pub mod io;
pub mod monte_carlo;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::reach::{self, ReachGraph};
use crate::report::Findings;
use crate::state::{classify_final_shadow, RoomState};

pub use conjecture::{
    bridge_check, lx_to_sumtroid, sumtroid_to_lx, window_bounds, window_recurrence_step,
    window_sums, LxPair, WindowSum,
};
pub use monte_carlo::{monte_carlo, monte_carlo_from, MonteCarloResult};

/// Largest `|K|` a flat clusteron of size `n` can end at: `(n-1)(n-2)/2`.
pub fn sumtroid_bound(n: u32) -> i64 {
    let n = i64::from(n);
    (n - 1) * (n - 2) / 2
}

/// The residue class of sumtroids that never occurs: `n/2` for even `n`, 0
/// for odd `n`.
pub fn forbidden_residue(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        i64::from(n / 2)
    } else {
        0
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Probability of ending at each sumtroid, measured from the initial state's
/// sumtroid. Sumtroids with zero mass are absent from `mass`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumtroidDistribution {
    pub n: u32,
    pub mass: BTreeMap<i64, BigRational>,
}

impl SumtroidDistribution {
    pub fn get(&self, k: i64) -> BigRational {
        self.mass.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.mass
            .values()
            .cloned()
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.mass.iter().all(|(k, p)| self.get(-k) == *p)
    }

    /// The mass times `(n-1)!`, which the tables report.
    pub fn scaled(&self) -> Result<ScaledRow> {
        ScaledRow::from_distribution(self)
    }
}

/// Mass of every final state of `g`, in node-id order of the finals.
pub fn final_state_masses(g: &ReachGraph) -> Vec<(usize, BigRational)> {
    let mut mass = vec![BigRational::zero(); g.len()];
    mass[0] = BigRational::one();
    for v in g.entropy_order() {
        let out = g.edges(v);
        if out.is_empty() {
            continue;
        }
        let share = std::mem::take(&mut mass[v]) / BigInt::from(out.len());
        for (_, t) in out {
            mass[*t] += &share;
        }
    }
    g.finals().iter().map(|&v| (v, mass[v].clone())).collect()
}

pub fn final_distribution(initial: &RoomState) -> Result<SumtroidDistribution> {
    final_distribution_with_budget(initial, reach::DEFAULT_NODE_BUDGET)
}

pub fn final_distribution_with_budget(
    initial: &RoomState,
    node_budget: usize,
) -> Result<SumtroidDistribution> {
    let g = reach::explore_with_budget(initial, node_budget)?;
    Ok(distribution_of(&g))
}

pub fn distribution_of(g: &ReachGraph) -> SumtroidDistribution {
    let k0 = g.root().sumtroid();
    let mut mass: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (v, p) in final_state_masses(g) {
        if !p.is_zero() {
            *mass.entry(g.node(v).sumtroid() - k0).or_default() += p;
        }
    }
    SumtroidDistribution {
        n: g.root().total(),
        mass,
    }
}

/// The same distribution by the defining recursion: a final is a point mass
/// and any other state averages its children. Much slower; used as a check.
pub fn final_distribution_recursive(initial: &RoomState) -> Result<SumtroidDistribution> {
    let g = reach::explore(initial)?;
    let k0 = g.root().sumtroid();
    let mut memo: Vec<Option<BTreeMap<i64, BigRational>>> = vec![None; g.len()];
    for v in g.entropy_order().into_iter().rev() {
        let out = g.edges(v);
        let d = if out.is_empty() {
            BTreeMap::from([(g.node(v).sumtroid() - k0, BigRational::one())])
        } else {
            let w = BigRational::new(BigInt::one(), BigInt::from(out.len()));
            let mut d: BTreeMap<i64, BigRational> = BTreeMap::new();
            for (_, t) in out {
                for (k, p) in memo[*t].as_ref().expect("children are processed first") {
                    *d.entry(*k).or_default() += p * &w;
                }
            }
            d
        };
        memo[v] = Some(d);
    }
    Ok(SumtroidDistribution {
        n: g.root().total(),
        mass: memo[0].take().unwrap(),
    })
}

/// Distribution from the flat clusteron of size `n`.
pub fn flat_distribution(n: u32) -> Result<SumtroidDistribution> {
    final_distribution(&RoomState::flat(n as usize))
}

/// `P(n, K) * (n-1)!` for every `|K| <= (n-1)(n-2)/2`, zeros included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledRow {
    pub n: u32,
    pub values: BTreeMap<i64, u64>,
}

impl ScaledRow {
    pub fn from_distribution(d: &SumtroidDistribution) -> Result<ScaledRow> {
        let n = d.n;
        if n < 2 {
            return Err(Error::Domain("scaled rows need n >= 2".into()));
        }
        let scale = BigRational::from_integer(factorial(n - 1));
        let b = sumtroid_bound(n);
        for k in d.mass.keys() {
            if k.abs() > b {
                return Err(Error::ConjectureViolation(format!(
                    "n={n}: mass at K={k} lies outside [-{b}, {b}]"
                )));
            }
        }
        let mut values = BTreeMap::new();
        for k in -b..=b {
            let v = d.get(k) * &scale;
            if !v.is_integer() {
                return Err(Error::ConjectureViolation(format!(
                    "n={n}: P(n,{k}) * (n-1)! = {v} is not an integer"
                )));
            }
            let v = v.to_integer().to_u64().ok_or_else(|| {
                Error::ConjectureViolation(format!("n={n}: scaled value at K={k} overflows u64"))
            })?;
            values.insert(k, v);
        }
        Ok(ScaledRow { n, values })
    }

    pub fn get(&self, k: i64) -> u64 {
        self.values.get(&k).copied().unwrap_or(0)
    }

    /// Values from the smallest sumtroid up to and including `K = 0`.
    pub fn left_half(&self) -> Vec<u64> {
        self.values.range(..=0).map(|(_, &v)| v).collect()
    }

    pub fn to_distribution(&self) -> SumtroidDistribution {
        let scale = factorial(self.n - 1);
        let mass = self
            .values
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&k, &v)| (k, BigRational::new(BigInt::from(v), scale.clone())))
            .collect();
        SumtroidDistribution { n: self.n, mass }
    }
}

pub fn scaled_row(n: u32) -> Result<ScaledRow> {
    if n < 3 {
        return Err(Error::Domain(format!("scaled_row needs n >= 3, got {n}")));
    }
    flat_distribution(n)?.scaled()
}

/// Probability of each final shadow `F(n,k)`, keyed by `k`, from the masses
/// of the individual final states.
pub fn shadow_probabilities(n: u32) -> Result<BTreeMap<u32, BigRational>> {
    if n < 2 {
        return Err(Error::Domain(format!("shadows need n >= 2, got {n}")));
    }
    let g = reach::explore(&RoomState::flat(n as usize))?;
    let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
    for (v, p) in final_state_masses(&g) {
        let s = g.node(v);
        let id = classify_final_shadow(&s.shadow())
            .ok_or_else(|| Error::InvariantViolation(format!("final {s} is not F-shaped")))?;
        *out.entry(id.k).or_default() += p;
    }
    Ok(out)
}

/// The shadow index of a final of the flat clusteron of size `n`, read off
/// its centred sumtroid: the raw sumtroid is `n*r + n*n - k`.
pub fn shadow_of_sumtroid(n: u32, k_centred: i64) -> u32 {
    let n64 = i64::from(n);
    let raw = k_centred + n64 * (n64 - 1) / 2;
    (-raw).rem_euclid(n64) as u32
}

/// Shadow probabilities by grouping a distribution on sumtroid residues.
pub fn shadow_probabilities_by_residue(d: &SumtroidDistribution) -> BTreeMap<u32, BigRational> {
    let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
    for (k, p) in &d.mass {
        *out.entry(shadow_of_sumtroid(d.n, *k)).or_default() += p;
    }
    out
}

/// Zeros of a scaled row fall exactly on the forbidden residue, and the
/// support reaches both ends of `[-(n-1)(n-2)/2, (n-1)(n-2)/2]`.
pub fn zero_pattern_check(row: &ScaledRow) -> Findings {
    let mut f = Findings::new();
    let n = i64::from(row.n);
    let b = sumtroid_bound(row.n);
    let m = forbidden_residue(row.n);
    for k in -b..=b {
        let v = row.get(k);
        let forbidden = (k - m).rem_euclid(n) == 0;
        f.check((v == 0) == forbidden, || {
            format!("n={n}: value {v} at K={k}, forbidden class: {forbidden}")
        });
    }
    f.check(row.values.keys().all(|k| k.abs() <= b), || {
        format!("n={n}: row has entries beyond +-{b}")
    });
    f.check(b == 0 || (row.get(-b) > 0 && row.get(b) > 0), || {
        format!("n={n}: support does not reach +-{b}")
    });
    f
}
