//! Single playouts under a fixed move-selection policy.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{Move, RoomState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Fire the leftmost available pair.
    Leftmost,
    Rightmost,
    /// Uniform choice from a seeded stream.
    Random(u64),
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leftmost" => Ok(Policy::Leftmost),
            "rightmost" => Ok(Policy::Rightmost),
            "random" => Ok(Policy::Random(0)),
            _ => Err(Error::Domain(format!("unknown policy {s:?}"))),
        }
    }
}

/// The states visited from `initial` to a final state, and the move taken
/// out of each non-final one.
pub fn play(initial: &RoomState, policy: Policy) -> Result<Vec<(RoomState, Option<Move>)>> {
    let mut rng = match policy {
        Policy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut out = Vec::new();
    let mut cur = initial.clone();
    loop {
        let moves = cur.available_moves();
        let pick = match (policy, moves.len()) {
            (_, 0) => None,
            (Policy::Leftmost, _) => moves.first().copied(),
            (Policy::Rightmost, _) => moves.last().copied(),
            (Policy::Random(_), n) => rng.as_mut().map(|r| moves[r.random_range(0..n)]),
        };
        let Some(m) = pick else {
            out.push((cur, None));
            return Ok(out);
        };
        let next = cur.apply_move(&m)?;
        out.push((std::mem::replace(&mut cur, next), Some(m)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leftmost_chain_from_12() {
        let path = play(&"12".parse().unwrap(), Policy::Leftmost).unwrap();
        let text: Vec<String> = path.iter().map(|(s, _)| s.shadow().to_string()).collect();
        assert_eq!(text, ["12", "1011", "11001", "100101"]);
        assert!(path.last().unwrap().1.is_none());
    }

    #[test]
    fn random_is_seeded() {
        let s = RoomState::flat(7);
        let a = play(&s, Policy::Random(9)).unwrap();
        assert_eq!(a, play(&s, Policy::Random(9)).unwrap());
        assert!(a.last().unwrap().0.is_proper_final());
    }
}
