//! Room-states, moves, and the scalar invariants of a state.
//!
//! A [`RoomState`] is a finite window of rooms. `occupancy[j]` counts the
//! violinists in room `offset + j`; the window is always trimmed so that its
//! first and last rooms are occupied, which makes the derived `Eq`/`Hash` a
//! canonical key on absolute positions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pattern;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoomState {
    offset: i64,
    occupancy: Vec<u32>,
}

/// A firing of the adjacent occupied pair `(left_room, left_room + 1)`.
///
/// One violinist leaves `left_room` for `left_target`, the nearest empty room
/// to its left, and one leaves `left_room + 1` for `right_target`, the nearest
/// empty room to its right. The neighborhoods are the distances travelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub left_room: i64,
    pub left_target: i64,
    pub right_target: i64,
    pub left_nbhd: i64,
    pub right_nbhd: i64,
}

impl Move {
    /// Change in sumtroid caused by this move.
    pub fn sumtroid_delta(&self) -> i64 {
        self.right_nbhd - self.left_nbhd
    }
}

impl RoomState {
    /// Builds a state from a window starting at `offset`, trimming empty rooms
    /// at either end.
    pub fn new(offset: i64, occupancy: Vec<u32>) -> Result<Self> {
        let (offset, occupancy) = pattern::trim(offset, occupancy)
            .ok_or_else(|| Error::MalformedState("no occupied room".into()))?;
        Ok(RoomState { offset, occupancy })
    }

    /// The flat clusteron of size `n` on rooms `0..n`.
    pub fn flat(n: usize) -> Self {
        assert!(n > 0, "a clusteron holds at least one violinist");
        RoomState {
            offset: 0,
            occupancy: vec![1; n],
        }
    }

    /// Builds a state from the multiset of occupied rooms.
    pub fn from_rooms<I: IntoIterator<Item = i64>>(rooms: I) -> Result<Self> {
        let rooms: Vec<i64> = rooms.into_iter().collect();
        let lo = *rooms
            .iter()
            .min()
            .ok_or_else(|| Error::MalformedState("no occupied room".into()))?;
        let hi = *rooms.iter().max().unwrap();
        let mut occupancy = vec![0u32; (hi - lo + 1) as usize];
        for r in rooms {
            occupancy[(r - lo) as usize] += 1;
        }
        Ok(RoomState {
            offset: lo,
            occupancy,
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn occupancy(&self) -> &[u32] {
        &self.occupancy
    }

    pub fn leftmost_room(&self) -> i64 {
        self.offset
    }

    pub fn rightmost_room(&self) -> i64 {
        self.offset + self.occupancy.len() as i64 - 1
    }

    /// Number of violinists.
    pub fn total(&self) -> u32 {
        self.occupancy.iter().sum()
    }

    /// Occupancy of an arbitrary room (zero outside the window).
    pub fn at(&self, room: i64) -> u32 {
        let j = room - self.offset;
        if j < 0 || j >= self.occupancy.len() as i64 {
            0
        } else {
            self.occupancy[j as usize]
        }
    }

    pub fn is_single_occupancy(&self) -> bool {
        self.occupancy.iter().all(|&a| a <= 1)
    }

    /// Consecutive occupied rooms, any multiplicities.
    pub fn is_clusteron(&self) -> bool {
        self.occupancy.iter().all(|&a| a > 0)
    }

    /// Sorted room of every violinist.
    pub fn positions(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (j, &a) in self.occupancy.iter().enumerate() {
            out.extend(std::iter::repeat_n(self.offset + j as i64, a as usize));
        }
        out
    }

    pub fn available_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        for j in 0..self.occupancy.len().saturating_sub(1) {
            if self.occupancy[j] > 0 && self.occupancy[j + 1] > 0 {
                moves.push(self.move_at(self.offset + j as i64));
            }
        }
        moves
    }

    /// Number of available moves, without building them.
    pub fn move_count(&self) -> usize {
        self.occupancy
            .windows(2)
            .filter(|w| w[0] > 0 && w[1] > 0)
            .count()
    }

    /// The move on the pair `(room, room + 1)`, if both are occupied.
    pub fn move_on(&self, room: i64) -> Option<Move> {
        (self.at(room) > 0 && self.at(room + 1) > 0).then(|| self.move_at(room))
    }

    fn move_at(&self, i: i64) -> Move {
        let mut left_target = i - 1;
        while self.at(left_target) > 0 {
            left_target -= 1;
        }
        let mut right_target = i + 2;
        while self.at(right_target) > 0 {
            right_target += 1;
        }
        Move {
            left_room: i,
            left_target,
            right_target,
            left_nbhd: i - left_target,
            right_nbhd: right_target - (i + 1),
        }
    }

    pub fn apply_move(&self, m: &Move) -> Result<RoomState> {
        match self.move_on(m.left_room) {
            Some(actual) if actual == *m => {}
            _ => {
                return Err(Error::InvalidMove(format!(
                    "{m:?} is not available in {self}"
                )))
            }
        }

        let lo = self.offset.min(m.left_target);
        let hi = self.rightmost_room().max(m.right_target);
        let mut occ = vec![0u32; (hi - lo + 1) as usize];
        let shift = (self.offset - lo) as usize;
        occ[shift..shift + self.occupancy.len()].copy_from_slice(&self.occupancy);
        let idx = |room: i64| (room - lo) as usize;
        occ[idx(m.left_room)] -= 1;
        occ[idx(m.left_room + 1)] -= 1;
        occ[idx(m.left_target)] += 1;
        occ[idx(m.right_target)] += 1;
        RoomState::new(lo, occ)
    }

    /// `P(S, 2) = sum a_i 2^i`, exact.
    pub fn entropy(&self) -> BigRational {
        let lo = self.offset;
        let mut acc = BigInt::zero();
        for (j, &a) in self.occupancy.iter().enumerate() {
            if a > 0 {
                acc += BigInt::from(a) << j;
            }
        }
        let scale = BigInt::one();
        if lo >= 0 {
            BigRational::from_integer(acc << (lo as usize))
        } else {
            BigRational::new(acc, scale << ((-lo) as usize))
        }
    }

    /// Raw sumtroid: the sum of the room numbers of all violinists.
    pub fn sumtroid(&self) -> i64 {
        self.occupancy
            .iter()
            .enumerate()
            .map(|(j, &a)| i64::from(a) * (self.offset + j as i64))
            .sum()
    }

    /// Sumtroid measured from `origin`'s, i.e. with the starting state
    /// centered at zero.
    pub fn sumtroid_from(&self, origin: &RoomState) -> i64 {
        self.sumtroid() - origin.sumtroid()
    }

    pub fn centroid(&self) -> BigRational {
        BigRational::new(self.sumtroid().into(), i64::from(self.total()).into())
    }

    /// Rooms from the leftmost to the rightmost violinist, inclusive.
    pub fn span(&self) -> i64 {
        self.occupancy.len() as i64
    }

    /// Sizes of the empty stretches between consecutive occupied rooms.
    pub fn gaps(&self) -> Vec<u32> {
        let mut gaps = Vec::new();
        let mut run = 0u32;
        for &a in &self.occupancy {
            if a == 0 {
                run += 1;
            } else if run > 0 {
                gaps.push(run);
                run = 0;
            }
        }
        gaps
    }

    /// Lengths of maximal runs of occupied rooms, left to right.
    pub fn runs(&self) -> Vec<usize> {
        self.occupancy
            .split(|&a| a == 0)
            .filter(|r| !r.is_empty())
            .map(|r| r.len())
            .collect()
    }

    pub fn shadow(&self) -> Shadow {
        Shadow {
            occupancy: self.occupancy.clone(),
        }
    }

    pub fn is_final(&self) -> bool {
        self.move_count() == 0
    }

    /// Final with every room holding at most one violinist.
    pub fn is_proper_final(&self) -> bool {
        self.is_final() && self.is_single_occupancy()
    }

    /// An occupied room holding several violinists with both neighbours empty.
    pub fn has_crowded_isolated_room(&self) -> bool {
        self.occupancy.iter().enumerate().any(|(j, &a)| {
            let room = self.offset + j as i64;
            a > 1 && self.at(room - 1) == 0 && self.at(room + 1) == 0
        })
    }

    /// The state drawn on rooms `lo..=hi`, padding with empty rooms.
    pub fn render_window(&self, lo: i64, hi: i64) -> String {
        let cells: Vec<u32> = (lo..=hi).map(|r| self.at(r)).collect();
        let mut out = String::new();
        pattern::write_cells(&mut out, &cells);
        out
    }

    /// The state shifted by `by` rooms.
    pub fn translated(&self, by: i64) -> RoomState {
        RoomState {
            offset: self.offset + by,
            occupancy: self.occupancy.clone(),
        }
    }

    /// Mirror image through room zero's left edge: room `i` goes to `-i`.
    pub fn mirrored(&self) -> RoomState {
        let mut occ = self.occupancy.clone();
        occ.reverse();
        RoomState {
            offset: -self.rightmost_room(),
            occupancy: occ,
        }
    }
}

impl fmt::Display for RoomState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pattern::format_cells(self.offset, &self.occupancy))
    }
}

impl FromStr for RoomState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_state(s)
    }
}

/// Parses a room pattern such as `0001111000`, `1[12]1` or `12@5`.
pub fn parse_state(text: &str) -> Result<RoomState> {
    let (offset, cells) = pattern::parse_cells(text)?;
    RoomState::new(offset, cells)
}

/// Per-violinist positions, left to right. Chip-pushing never reorders
/// violinists, so the i-th entry always belongs to the same violinist.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledState {
    positions: Vec<i64>,
}

impl LabeledState {
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvariantViolation("no violinists".into()));
        }
        if positions.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvariantViolation(format!(
                "positions {positions:?} are not sorted"
            )));
        }
        Ok(LabeledState { positions })
    }

    pub fn from_state(s: &RoomState) -> Self {
        LabeledState {
            positions: s.positions(),
        }
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn to_state(&self) -> RoomState {
        RoomState::from_rooms(self.positions.iter().copied()).expect("nonempty by construction")
    }

    /// Chip-pushing: the leftmost occupant of `left_room` steps left, and each
    /// room it enters passes its own leftmost occupant further left until an
    /// empty room absorbs the last one. The right side mirrors this with
    /// rightmost occupants.
    pub fn apply_move(&self, m: &Move) -> Result<LabeledState> {
        let i = m.left_room;
        let p = &self.positions;
        let first_at = |room: i64| p.iter().position(|&x| x == room);
        let last_at = |room: i64| p.iter().rposition(|&x| x == room);

        let (mut cur, mut cur_right) = match (first_at(i), last_at(i + 1)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidMove(format!(
                    "rooms {i} and {} are not both occupied",
                    i + 1
                )))
            }
        };

        let mut next = p.clone();
        let mut room = i;
        loop {
            let target = room - 1;
            next[cur] = target;
            // the pushed occupant must sit left of `cur` in the ordering
            match p[..cur].iter().position(|&x| x == target) {
                Some(b) => {
                    cur = b;
                    room = target;
                }
                None => break,
            }
        }
        let mut room = i + 1;
        loop {
            let target = room + 1;
            next[cur_right] = target;
            match p[cur_right + 1..].iter().rposition(|&x| x == target) {
                Some(b) => {
                    cur_right = cur_right + 1 + b;
                    room = target;
                }
                None => break,
            }
        }

        if next.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvariantViolation(format!(
                "chip-pushing reordered violinists: {next:?}"
            )));
        }
        Ok(LabeledState { positions: next })
    }
}

/// Applies `m` to `ls`, checking that `ls` describes `state`.
pub fn apply_move_labeled(ls: &LabeledState, state: &RoomState, m: &Move) -> Result<LabeledState> {
    if ls.positions != state.positions() {
        return Err(Error::InvariantViolation(format!(
            "labeled positions {:?} do not match state {state}",
            ls.positions
        )));
    }
    if state.move_on(m.left_room) != Some(*m) {
        return Err(Error::InvalidMove(format!(
            "{m:?} not available in {state}"
        )));
    }
    ls.apply_move(m)
}

/// A state up to translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shadow {
    occupancy: Vec<u32>,
}

impl Shadow {
    pub fn new(occupancy: Vec<u32>) -> Result<Self> {
        let (_, occupancy) = pattern::trim(0, occupancy)
            .ok_or_else(|| Error::MalformedState("empty shadow".into()))?;
        Ok(Shadow { occupancy })
    }

    pub fn occupancy(&self) -> &[u32] {
        &self.occupancy
    }

    /// The state with this shadow whose leftmost violinist is in `room`.
    pub fn place(&self, room: i64) -> RoomState {
        RoomState {
            offset: room,
            occupancy: self.occupancy.clone(),
        }
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pattern::format_cells(0, &self.occupancy))
    }
}

impl FromStr for Shadow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (_, cells) = pattern::parse_cells(s)?;
        Shadow::new(cells)
    }
}

/// `F(n, k)`: `n` single rooms, all gaps of size one except a single 2-gap
/// after the k-th occupied room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinalShadowId {
    pub n: u32,
    pub k: u32,
}

impl FinalShadowId {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 2 || k == 0 || k >= n {
            return Err(Error::Domain(format!("F({n},{k}) needs 1 <= k <= n-1")));
        }
        Ok(FinalShadowId { n, k })
    }

    /// All of `F(n, 1) .. F(n, n-1)`.
    pub fn family(n: u32) -> Vec<FinalShadowId> {
        (1..n).map(|k| FinalShadowId { n, k }).collect()
    }

    pub fn shadow(&self) -> Shadow {
        let mut occ = Vec::with_capacity(2 * self.n as usize);
        for v in 1..=self.n {
            occ.push(1);
            if v < self.n {
                occ.push(0);
                if v == self.k {
                    occ.push(0);
                }
            }
        }
        Shadow { occupancy: occ }
    }
}

impl fmt::Display for FinalShadowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{})", self.n, self.k)
    }
}

/// Recognises `F(n, k)` exactly; anything else yields `None`.
pub fn classify_final_shadow(sh: &Shadow) -> Option<FinalShadowId> {
    let occ = &sh.occupancy;
    if occ.iter().any(|&a| a > 1) {
        return None;
    }
    let n = occ.iter().filter(|&&a| a == 1).count() as u32;
    if n < 2 {
        return None;
    }
    let state = RoomState {
        offset: 0,
        occupancy: occ.clone(),
    };
    let gaps = state.gaps();
    if gaps.len() != n as usize - 1 {
        return None;
    }
    let mut two = None;
    for (idx, &g) in gaps.iter().enumerate() {
        match g {
            1 => {}
            2 if two.is_none() => two = Some(idx as u32 + 1),
            _ => return None,
        }
    }
    two.map(|k| FinalShadowId { n, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> RoomState {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let s = st("0001111000");
        assert_eq!((s.offset(), s.occupancy()), (3, &[1, 1, 1, 1][..]));
        let s = st("1");
        assert_eq!((s.offset(), s.occupancy()), (0, &[1][..]));
        let s = st("12@5");
        assert_eq!((s.offset(), s.occupancy()), (5, &[1, 2][..]));
        assert!(matches!(parse_state("000"), Err(Error::MalformedState(_))));
        assert!(matches!(parse_state(""), Err(Error::MalformedState(_))));
    }

    #[test]
    fn display_round_trips() {
        for text in ["1011@-1", "1[12]01", "2", "100101@7"] {
            assert_eq!(st(text).to_string(), text);
        }
    }

    #[test]
    fn flat_four_has_three_moves() {
        let s = st("0001111000");
        let moves = s.available_moves();
        assert_eq!(moves.len(), 3);
        assert_eq!(
            moves.iter().map(|m| m.left_room).collect::<Vec<_>>(),
            vec![3, 4, 5]
        );
        let m = moves[1];
        assert_eq!((m.left_target, m.right_target), (2, 7));
        assert_eq!((m.left_nbhd, m.right_nbhd), (2, 2));
    }

    #[test]
    fn crowded_isolated_room_has_no_moves() {
        let s = st("2");
        assert!(s.available_moves().is_empty());
        assert!(s.is_final());
        assert!(!s.is_proper_final());
        assert!(s.has_crowded_isolated_room());
    }

    #[test]
    fn apply_examples() {
        let s = st("0001111000");
        let m = s.available_moves()[0];
        assert_eq!(s.apply_move(&m).unwrap().render_window(0, 9), "0010011100");

        let s = st("0011001100");
        let m = s.available_moves()[0];
        assert_eq!(s.apply_move(&m).unwrap().render_window(0, 9), "0100101100");

        let s = st("12");
        let m = s.available_moves()[0];
        let next = s.apply_move(&m).unwrap();
        assert_eq!(next.to_string(), "1011@-1");
        assert_eq!(next.total(), 3);
    }

    #[test]
    fn foreign_move_is_rejected() {
        let s = st("0001111000");
        let m = st("11").available_moves()[0];
        assert!(matches!(s.apply_move(&m), Err(Error::InvalidMove(_))));
    }

    #[test]
    fn labeled_examples() {
        let ls = LabeledState::new(vec![0, 1]).unwrap();
        let m = st("11").available_moves()[0];
        assert_eq!(ls.apply_move(&m).unwrap().positions(), &[-1, 2]);

        let s = st("1111");
        let ls = LabeledState::from_state(&s);
        let m = s.move_on(2).unwrap();
        let out = apply_move_labeled(&ls, &s, &m).unwrap();
        assert_eq!(out.positions(), &[-1, 0, 1, 4]);
        assert_eq!(out.to_state(), s.apply_move(&m).unwrap());

        let wrong = LabeledState::new(vec![0, 1, 2]).unwrap();
        assert!(matches!(
            apply_move_labeled(&wrong, &s, &m),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn labeled_crowded_rooms_keep_order() {
        let s = st("12");
        let ls = LabeledState::from_state(&s);
        let m = s.available_moves()[0];
        assert_eq!(ls.apply_move(&m).unwrap().positions(), &[-1, 1, 2]);
    }

    #[test]
    fn pushing_from_the_right_sends_first_violinist_n_minus_one() {
        let mut s = RoomState::flat(5);
        let mut ls = LabeledState::from_state(&s);
        while let Some(m) = s.available_moves().last().copied() {
            ls = ls.apply_move(&m).unwrap();
            s = s.apply_move(&m).unwrap();
        }
        assert_eq!(ls.positions(), &[-4, -1, 1, 3, 5]);

        let mut s = RoomState::flat(5);
        let mut ls = LabeledState::from_state(&s);
        while let Some(m) = s.available_moves().first().copied() {
            ls = ls.apply_move(&m).unwrap();
            s = s.apply_move(&m).unwrap();
        }
        assert_eq!(ls.positions(), &[-1, 1, 3, 5, 8]);
    }

    #[test]
    fn entropy_examples() {
        let s = RoomState::new(0, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(s.entropy(), BigRational::from_integer(15.into()));
        let s = RoomState::new(-2, vec![1]).unwrap();
        assert_eq!(s.entropy(), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn sumtroid_examples() {
        let flat = RoomState::flat(4);
        assert_eq!(flat.sumtroid() - 6, 0);
        let start = st("0001111000");
        assert_eq!(st("0010101001").sumtroid_from(&start), 3);
        assert_eq!(
            st("0010101001").centroid(),
            BigRational::new(21.into(), 4.into())
        );
    }

    #[test]
    fn shadow_examples() {
        let f32 = FinalShadowId::new(3, 2).unwrap();
        assert_eq!(f32.shadow().to_string(), "101001");
        let sh: Shadow = "100101".parse().unwrap();
        assert_eq!(
            classify_final_shadow(&sh),
            Some(FinalShadowId { n: 3, k: 1 })
        );
        for n in 2..9 {
            for id in FinalShadowId::family(n) {
                assert_eq!(id.shadow().place(0).span(), 2 * i64::from(n));
                assert_eq!(classify_final_shadow(&id.shadow()), Some(id));
            }
        }
        for bad in ["10101", "1001001", "1101001", "1201", "1", "10010010"] {
            assert_eq!(classify_final_shadow(&bad.parse().unwrap()), None, "{bad}");
        }
    }

    #[test]
    fn gaps_and_span() {
        let s = st("1011001");
        assert_eq!(s.gaps(), vec![1, 2]);
        assert_eq!(s.runs(), vec![1, 2, 1]);
        assert_eq!(s.span(), 7);
    }

    #[test]
    fn move_count_formula_on_single_occupancy() {
        let s = st("1011001");
        assert_eq!(s.available_moves().len(), 4 - 2 - 1);
    }
}
