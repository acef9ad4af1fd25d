//! Match-loop behavior visible from outside: deterministic replay,
//! interleaving neutrality, and a few matches frozen move for move.

use colgame::{
    e1_game, e2_game, run_match, verify_transcript, Adversary, Bits, GameExpr, GameTree, LabMove,
    MachineKind, MatchConfig, Move, Player, RunStatus, Snapshot, Transcript,
};
use Player::*;

fn a0() -> GameExpr {
    GameExpr::tree(GameTree::leaf(Bot).with_edge(Top, "a", GameTree::leaf(Top)))
}

fn ab() -> GameExpr {
    GameExpr::tree(GameTree::leaf(Bot).with_edge(Bot, "b", GameTree::leaf(Top)))
}

fn ab2() -> GameExpr {
    GameExpr::tree(GameTree::leaf(Bot).with_edge(
        Bot,
        "b",
        GameTree::leaf(Top).with_edge(Bot, "b", GameTree::leaf(Bot)),
    ))
}

fn scripted(moves: &[&str]) -> Adversary {
    Adversary::script(moves.iter().map(|m| Move::new(*m).unwrap()).collect())
}

fn cfg(seed: u64, fuzz: bool) -> MatchConfig {
    MatchConfig {
        max_moves: 40,
        seed,
        interleaving_fuzz: fuzz,
    }
}

fn lm(p: Player, m: &str) -> LabMove {
    LabMove::new(p, Move::new(m).unwrap())
}

#[test]
fn copycat_echo_frozen() {
    let game = e1_game(a0());
    let t = run_match(&game, MachineKind::E1, scripted(&["2..a"]), cfg(0, false));
    assert_eq!(t.moves, vec![lm(Bot, "2..a"), lm(Top, "1..a")]);
}

#[test]
fn split_tracking_frozen() {
    let game = e2_game(a0());
    let t = run_match(&game, MachineKind::E2, scripted(&["2.:"]), cfg(0, false));
    assert_eq!(t.moves, vec![lm(Bot, "2.:")]);
    assert_eq!(
        t.snapshots,
        vec![Snapshot {
            moves_len: 1,
            f: vec![
                (Bits::parse("0").unwrap(), Bits::parse("0").unwrap()),
                (Bits::parse("1").unwrap(), Bits::parse("1").unwrap()),
            ],
        }]
    );
}

#[test]
fn passing_adversary_leaves_the_board_empty() {
    let game = GameExpr::loose(ab());
    let t = run_match(&game, MachineKind::None, Adversary::Pass, cfg(3, false));
    assert!(t.moves.is_empty());
    let r = verify_transcript(&game, &t);
    assert_eq!(r.status, RunStatus::Legal);
    assert_eq!(r.winner, Bot);
}

#[test]
fn equal_configurations_replay_byte_identically() {
    for fuzz in [false, true] {
        let game = e2_game(ab2());
        let one = run_match(&game, MachineKind::E2, Adversary::random_legal(), cfg(9, fuzz));
        let two = run_match(&game, MachineKind::E2, Adversary::random_legal(), cfg(9, fuzz));
        assert_eq!(one.serialize(), two.serialize());
    }
}

#[test]
fn transcripts_survive_the_file_format() {
    let game = e1_game(ab2());
    let t = run_match(&game, MachineKind::E1, Adversary::random_legal(), cfg(17, true));
    assert_eq!(Transcript::parse(&t.serialize()).unwrap(), t);
}

// The official move order may interleave adversary offers and machine
// batches differently per fuzz seed, but who wins cannot move.
#[test]
fn interleaving_fuzz_never_flips_the_outcome() {
    let cases: Vec<(GameExpr, MachineKind, Vec<&str>)> = vec![
        (e1_game(ab2()), MachineKind::E1, vec!["2..b", "2.0.b"]),
        (e2_game(ab()), MachineKind::E2, vec!["2.:", "2.0.b"]),
        (e2_game(ab2()), MachineKind::E2, vec!["2.:", "2.1.b", "2.1:"]),
    ];
    for (game, machine, script) in cases {
        let base = run_match(&game, machine, scripted(&script), cfg(0, false));
        let base_report = verify_transcript(&game, &base);
        assert!(base_report.clean(), "{:?}", base_report.violations);
        for seed in 0..20 {
            let t = run_match(&game, machine, scripted(&script), cfg(seed, true));
            let r = verify_transcript(&game, &t);
            assert_eq!(r.winner, base_report.winner, "fuzz seed {seed}");
            assert_eq!(r.status, base_report.status, "fuzz seed {seed}");
            assert!(r.clean(), "fuzz seed {seed}: {:?}", r.violations);
        }
    }
}
