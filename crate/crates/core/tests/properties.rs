use proptest::prelude::*;

use dispersion::combinatorics::{perm_to_tree, tree_to_perm, Permutation, RecursiveTree};
use dispersion::probability::{forbidden_residue, lx_to_sumtroid, sumtroid_bound, sumtroid_to_lx};
use dispersion::reach::{play, Policy};
use dispersion::suite::{suite_move_for, verify_move_correspondence};
use dispersion::{apply_move_labeled, from_suites, to_suites, LabeledState, RoomState};

fn any_state() -> impl Strategy<Value = RoomState> {
    prop::collection::vec(-6i64..6, 1..9).prop_map(|rooms| RoomState::from_rooms(rooms).unwrap())
}

fn single_occupancy() -> impl Strategy<Value = RoomState> {
    prop::collection::btree_set(-8i64..8, 1..9)
        .prop_map(|rooms| RoomState::from_rooms(rooms).unwrap())
}

fn clusteron() -> impl Strategy<Value = RoomState> {
    (prop::collection::vec(1u32..4, 2..5), -3i64..3)
        .prop_map(|(occ, offset)| RoomState::new(offset, occ).unwrap())
}

fn tree() -> impl Strategy<Value = RecursiveTree> {
    (1usize..9)
        .prop_flat_map(|n| (1..n).map(|v| 0..v).collect::<Vec<_>>())
        .prop_map(|parents| RecursiveTree::from_parents(&parents).unwrap())
}

proptest! {
    #[test]
    fn text_round_trip(s in any_state()) {
        let back: RoomState = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn moves_conserve_and_raise_entropy(s in any_state()) {
        for m in s.available_moves() {
            let t = s.apply_move(&m).unwrap();
            prop_assert_eq!(t.total(), s.total());
            prop_assert!(t.entropy() > s.entropy());
            prop_assert_eq!(t.sumtroid() - s.sumtroid(), m.sumtroid_delta());
            // one violinist leaves room i for the left target, one leaves i+1 for the right
            prop_assert_eq!(m.sumtroid_delta(), (m.left_target - m.left_room) + (m.right_target - m.left_room - 1));
        }
    }

    #[test]
    fn labelled_and_unlabelled_agree(s in single_occupancy()) {
        let ls = LabeledState::from_state(&s);
        for m in s.available_moves() {
            let next = apply_move_labeled(&ls, &s, &m).unwrap();
            prop_assert_eq!(next.to_state(), s.apply_move(&m).unwrap());
            prop_assert!(next.positions().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn suites_round_trip(s in single_occupancy()) {
        let ss = to_suites(&s).unwrap();
        prop_assert_eq!(from_suites(&ss), s.clone());
        prop_assert_eq!(ss.total(), s.total());
        for m in s.available_moves() {
            let sm = suite_move_for(&s, &m).unwrap();
            let next = ss.apply(&sm).unwrap();
            prop_assert_eq!(from_suites(&next), s.apply_move(&m).unwrap());
        }
    }

    #[test]
    fn playouts_end_in_proper_finals(c in clusteron(), seed in any::<u64>()) {
        let path = play(&c, Policy::Random(seed)).unwrap();
        let last = &path.last().unwrap().0;
        prop_assert!(last.is_proper_final());
        prop_assert_eq!(last.span(), 2 * i64::from(c.total()));
        prop_assert!(path.iter().all(|(s, _)| !s.has_crowded_isolated_room()));
    }

    #[test]
    fn lx_round_trip(n in 3u32..14, k in -80i64..80) {
        let bound = sumtroid_bound(n);
        let forbidden = (k - forbidden_residue(n)).rem_euclid(i64::from(n)) == 0;
        match sumtroid_to_lx(n, k) {
            Ok(lx) => {
                prop_assert!(k.abs() <= bound && !forbidden);
                prop_assert_eq!(lx_to_sumtroid(n, lx).unwrap(), k);
            }
            Err(_) => prop_assert!(k.abs() > bound || forbidden),
        }
    }

    #[test]
    fn tree_perm_round_trip(t in tree()) {
        let p = tree_to_perm(&t);
        prop_assert!(Permutation::new(p.word().to_vec()).is_ok());
        prop_assert_eq!(perm_to_tree(&p), t);
    }
}

#[test]
fn small_flat_correspondences() {
    for n in 1..=5 {
        assert!(verify_move_correspondence(&RoomState::flat(n))
            .unwrap()
            .is_ok());
    }
}
