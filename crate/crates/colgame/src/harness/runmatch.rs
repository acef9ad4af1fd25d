//! The match loop.
//!
//! ⊥ offers moves, ⊤'s machine answers each offer with a whole reaction
//! batch.  Offers are solicited between batches only, so a batch is never
//! split; with interleaving fuzz the loop sometimes queues several offers
//! before letting the machine catch up, which reorders the record without
//! changing anyone's information.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsl::serialize_game;
use crate::game::GameExpr;
use crate::harness::adversary::Adversary;
use crate::harness::transcript::{Snapshot, Transcript};
use crate::run::{LabMove, Player, Run};
use crate::strategy::{e1_react, e2_react, E2State, Reaction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineKind {
    E1,
    E2,
    /// ⊤ never moves; the transcript records the adversary alone.
    None,
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineKind::E1 => "e1",
            MachineKind::E2 => "e2",
            MachineKind::None => "none",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown machine {0:?} (expected e1, e2, or none)")]
pub struct MachineParseError(pub String);

impl FromStr for MachineKind {
    type Err = MachineParseError;

    fn from_str(s: &str) -> Result<MachineKind, MachineParseError> {
        match s {
            "e1" => Ok(MachineKind::E1),
            "e2" => Ok(MachineKind::E2),
            "none" => Ok(MachineKind::None),
            other => Err(MachineParseError(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MatchConfig {
    /// Offers stop once this many moves are recorded; a reaction batch in
    /// flight still lands whole.
    pub max_moves: usize,
    pub seed: u64,
    pub interleaving_fuzz: bool,
}

/// Cap on offers queued ahead of the machine under fuzz.
const FUZZ_QUEUE_CAP: usize = 4;

pub fn run_match(
    game: &GameExpr,
    machine: MachineKind,
    mut adversary: Adversary,
    cfg: MatchConfig,
) -> Transcript {
    assert!(cfg.max_moves >= 1, "maxMoves must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut recorded: Vec<LabMove> = Vec::new();
    let mut snapshots: Vec<Snapshot> = Vec::new();
    // What the machine has processed; trails `recorded` while offers wait
    // in the queue.
    let mut seen = Run::empty();
    let mut queue: VecDeque<LabMove> = VecDeque::new();
    let mut state = E2State::initial();
    let mut retired = false;

    loop {
        while !retired && recorded.len() < cfg.max_moves {
            let position: Run = recorded.iter().cloned().collect();
            match adversary.propose(game, &position, &mut rng) {
                None => retired = true,
                Some(m) => {
                    let lm = LabMove::new(Player::Bot, m);
                    recorded.push(lm.clone());
                    queue.push_back(lm);
                }
            }
            let keep_queueing = cfg.interleaving_fuzz
                && !retired
                && queue.len() < FUZZ_QUEUE_CAP
                && rng.gen_bool(0.5);
            if !keep_queueing {
                break;
            }
        }
        if queue.is_empty() {
            break;
        }
        while let Some(lm) = queue.pop_front() {
            seen.push(lm.clone());
            let reaction = match machine {
                MachineKind::E1 => e1_react(&seen, &lm),
                MachineKind::E2 => {
                    let (next, r) = e2_react(state.clone(), &seen, &lm);
                    state = next;
                    r
                }
                MachineKind::None => Reaction::empty(),
            };
            for mv in reaction.moves() {
                let out = LabMove::new(Player::Top, mv.clone());
                seen.push(out.clone());
                recorded.push(out);
            }
            if machine == MachineKind::E2 {
                snapshots.push(Snapshot {
                    moves_len: recorded.len(),
                    f: state
                        .f
                        .entries()
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                });
            }
        }
    }

    Transcript {
        game_text: serialize_game(game),
        machine_name: machine.to_string(),
        seed: cfg.seed,
        moves: recorded,
        snapshots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::run::{Move, Player::*};
    use crate::strategy::{e1_game, e2_game};
    use crate::tree::GameTree;

    fn a0() -> GameTree {
        GameTree::leaf(Bot).with_edge(Top, "a", GameTree::leaf(Top))
    }

    fn cfg(seed: u64) -> MatchConfig {
        MatchConfig {
            max_moves: 40,
            seed,
            interleaving_fuzz: false,
        }
    }

    fn scripted(moves: &[&str]) -> Adversary {
        Adversary::script(moves.iter().map(|m| Move::new(*m).unwrap()).collect())
    }

    #[test]
    fn machine_names_round_trip() {
        for m in [MachineKind::E1, MachineKind::E2, MachineKind::None] {
            assert_eq!(m.to_string().parse::<MachineKind>().unwrap(), m);
        }
        assert!("E1".parse::<MachineKind>().is_err());
    }

    #[test]
    fn immediate_pass_yields_an_empty_transcript() {
        let t = run_match(&e1_game(GameExpr::tree(a0())), MachineKind::E1, Adversary::Pass, cfg(1));
        assert!(t.moves.is_empty());
        assert_eq!(t.machine_name, "e1");
        assert_eq!(t.seed, 1);
    }

    #[test]
    fn e1_answers_a_loose_probe() {
        let t = run_match(
            &e1_game(GameExpr::tree(a0())),
            MachineKind::E1,
            scripted(&["2..a"]),
            cfg(3),
        );
        let names: Vec<String> = t.moves.iter().map(|lm| lm.to_string()).collect();
        assert_eq!(names, vec!["B 2..a", "T 1..a"]);
        assert!(t.snapshots.is_empty());
    }

    #[test]
    fn e2_snapshots_the_leaf_map_after_a_split() {
        let t = run_match(
            &e2_game(GameExpr::tree(a0())),
            MachineKind::E2,
            scripted(&["2.:"]),
            cfg(9),
        );
        let names: Vec<String> = t.moves.iter().map(|lm| lm.to_string()).collect();
        assert_eq!(names, vec!["B 2.:"]);
        assert_eq!(t.snapshots.len(), 1);
        assert_eq!(t.snapshots[0].moves_len, 1);
        let f: Vec<(String, String)> = t.snapshots[0]
            .f
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        assert_eq!(
            f,
            vec![
                ("0".to_string(), "0".to_string()),
                ("1".to_string(), "1".to_string())
            ]
        );
    }

    #[test]
    fn max_moves_stops_solicitation_but_not_batches() {
        // Two offers scripted; cap of 1 means only the first is offered,
        // and its two-move reaction still lands.
        let t = run_match(
            &e1_game(GameExpr::tree(a0())),
            MachineKind::E1,
            scripted(&["2.0.a", "2..a"]),
            MatchConfig {
                max_moves: 1,
                seed: 2,
                interleaving_fuzz: false,
            },
        );
        let names: Vec<String> = t.moves.iter().map(|lm| lm.to_string()).collect();
        assert_eq!(names, vec!["B 2.0.a", "T 1.:", "T 1.0.a"]);
    }

    #[test]
    fn replay_is_deterministic() {
        let game = e1_game(GameExpr::tree(a0()));
        let mk = || {
            run_match(
                &game,
                MachineKind::E1,
                Adversary::random_legal(),
                MatchConfig {
                    max_moves: 20,
                    seed: 77,
                    interleaving_fuzz: true,
                },
            )
        };
        assert_eq!(mk().serialize(), mk().serialize());
    }

    #[test]
    fn fuzz_reorders_the_record_without_losing_moves() {
        let game = e1_game(GameExpr::tree(a0()));
        let plain = run_match(&game, MachineKind::E1, scripted(&["2..a", "2.0.a"]), cfg(5));
        let fuzzed = run_match(
            &game,
            MachineKind::E1,
            scripted(&["2..a", "2.0.a"]),
            MatchConfig {
                max_moves: 40,
                seed: 5,
                interleaving_fuzz: true,
            },
        );
        let bots = |t: &Transcript| {
            t.moves
                .iter()
                .filter(|lm| lm.player == Bot)
                .map(|lm| lm.mv.to_string())
                .collect::<Vec<_>>()
        };
        let tops = |t: &Transcript| {
            t.moves
                .iter()
                .filter(|lm| lm.player == Top)
                .map(|lm| lm.mv.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(bots(&plain), bots(&fuzzed));
        assert_eq!(tops(&plain), tops(&fuzzed));
    }
}
