//! Game engine for computability-logic style games.
//!
//! The core objects are finite game trees over labeled moves, combinators
//! over them (negation, disjunction, and two branching-replication
//! operators), legality and winner judgments on runs, copycat strategies
//! that win the bridge games between the two replication disciplines, and
//! a match harness with deterministic adversaries and verifiable
//! transcripts.

pub mod bits;
pub mod delay;
pub mod dsl;
pub mod game;
pub mod harness;
pub mod recurrence;
pub mod run;
pub mod strategy;
pub mod tree;

pub use bits::Bits;
pub use delay::{
    delay_illegality_counterexample, enumerate_delays, is_delay, is_p_illegal, is_static_bounded,
    is_static_bounded_with_ceiling, static_counterexample, SearchCeilingError,
};
pub use dsl::{parse_game, serialize_game, DslError};
pub use game::{
    classify, component_run, legal, parse_or_move, winner, Component, GameExpr, IllegalRunError,
    RunStatus,
};
pub use harness::adversary::{candidate_moves, parse_script, Adversary, ScriptError};
pub use harness::gen::{
    base_alphabet, enumerate_shapes, fresh_token, random_static_tree, random_tree,
    relabel_preorder, surface_alphabet, GenCeilingError, GeneratedTree,
};
pub use harness::runmatch::{run_match, MachineKind, MachineParseError, MatchConfig};
pub use harness::transcript::{Snapshot, Transcript, TranscriptError};
pub use harness::verify::{verify_transcript, ComponentReport, CounterpartRow, VerifyReport};
pub use recurrence::{
    bt_leaves, bt_nodes, is_decisive, loose_legal, parse_surface_move, project, rec_classify,
    rec_winner, representatives, surface_addresses, tight_legal, BtView, NonDecisiveError, RecKind,
    SurfaceMove,
};
pub use run::{parse_labmove, LabMove, LabMoveParseError, Move, MoveError, Player, Run};
pub use strategy::{
    e1_game, e1_react, e2_game, e2_react, find_counterpart_z, grow_to_node, E2State, LeafMap,
    Reaction,
};
pub use tree::{valid_token, GameTree};
