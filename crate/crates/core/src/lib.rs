//! Two-sided dispersion: violinists in a row of rooms, where firing an
//! adjacent occupied pair sends one violinist to the nearest empty room on
//! each side.

pub mod combinatorics;
pub mod error;
pub mod goldens;
mod pattern;
pub mod probability;
pub mod reach;
pub mod report;
pub mod state;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use report::Findings;
pub use state::{
    apply_move_labeled, classify_final_shadow, parse_state, FinalShadowId, LabeledState, Move,
    RoomState, Shadow,
};
pub use suite::{from_suites, to_suites, SuiteMove, SuiteState};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/suites.md")]
    mod suites {}
    #[doc = include_str!("../../../book/src/finals.md")]
    mod finals {}
    #[doc = include_str!("../../../book/src/probability.md")]
    mod probability {}
    #[doc = include_str!("../../../book/src/combinatorics.md")]
    mod combinatorics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
