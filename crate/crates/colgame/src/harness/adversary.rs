//! The ⊥ side of a match.
//!
//! An adversary is a deterministic function of the position and its
//! private randomness stream.  It either proposes one move or passes;
//! once it passes it stays silent for the rest of the match.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::Bits;
use crate::game::{component_run, legal, Component, GameExpr};
use crate::recurrence::{surface_addresses, BtView};
use crate::run::{LabMove, Move, MoveError, Player, Run};

#[derive(Clone, Debug)]
pub enum Adversary {
    /// Never moves.
    Pass,
    /// Samples uniformly from the currently legal candidate moves, with a
    /// chance per turn of retiring; retires anyway when no candidate is
    /// legal.
    RandomLegal { stop_probability: f64, done: bool },
    /// Replays a move list verbatim, legal or not.
    Script { moves: Vec<Move>, at: usize },
}

impl Adversary {
    pub fn random_legal() -> Adversary {
        Adversary::RandomLegal {
            stop_probability: 0.15,
            done: false,
        }
    }

    pub fn script(moves: Vec<Move>) -> Adversary {
        Adversary::Script { moves, at: 0 }
    }

    pub(crate) fn propose(
        &mut self,
        game: &GameExpr,
        position: &Run,
        rng: &mut ChaCha8Rng,
    ) -> Option<Move> {
        match self {
            Adversary::Pass => None,
            Adversary::RandomLegal {
                stop_probability,
                done,
            } => {
                if *done || rng.gen_bool(*stop_probability) {
                    *done = true;
                    return None;
                }
                let pool: Vec<Move> = candidate_moves(game, position)
                    .into_iter()
                    .filter(|m| {
                        let lm = LabMove::new(Player::Bot, m.clone());
                        legal(game, position, &lm).unwrap_or(false)
                    })
                    .collect();
                if pool.is_empty() {
                    *done = true;
                    return None;
                }
                Some(pool[rng.gen_range(0..pool.len())].clone())
            }
            Adversary::Script { moves, at } => {
                let m = moves.get(*at).cloned();
                *at += 1;
                m
            }
        }
    }
}

/// Move spellings worth offering ⊥ at this position, before the legality
/// filter.  Deterministic and duplicate-free.
pub fn candidate_moves(game: &GameExpr, position: &Run) -> Vec<Move> {
    let mut out = BTreeSet::new();
    collect(game, position, &mut out);
    out.into_iter()
        .map(|s| Move::new(s).expect("candidate spellings are valid moves"))
        .collect()
}

fn collect(game: &GameExpr, position: &Run, out: &mut BTreeSet<String>) {
    match game {
        GameExpr::Tree(t) => {
            out.extend(t.tokens());
        }
        GameExpr::Neg(e) => collect(e, &position.swapped(), out),
        GameExpr::Or(a, b) => {
            for (component, e) in [(Component::One, a), (Component::Two, b)] {
                let sub = component_run(position, component);
                let mut inner = BTreeSet::new();
                collect(e, &sub, &mut inner);
                out.extend(
                    inner
                        .iter()
                        .map(|m| format!("{}{m}", component.prefix())),
                );
            }
        }
        GameExpr::Tight(e) | GameExpr::CoTight(e) => {
            let view = BtView::of(position);
            for leaf in &view.leaves {
                out.insert(format!("{leaf}:"));
            }
            for w in &view.nodes {
                for t in base_tokens(e) {
                    out.insert(format!("{w}.{t}"));
                }
            }
        }
        GameExpr::Loose(e) | GameExpr::CoLoose(e) => {
            let mut addrs: BTreeSet<Bits> = surface_addresses(position);
            addrs.insert(Bits::empty());
            for a in addrs.clone() {
                addrs.insert(a.child(false));
                addrs.insert(a.child(true));
            }
            for w in addrs {
                for t in base_tokens(e) {
                    out.insert(format!("{w}.{t}"));
                }
            }
        }
    }
}

fn base_tokens(e: &GameExpr) -> BTreeSet<String> {
    match e {
        GameExpr::Tree(t) => t.tokens(),
        GameExpr::Neg(e)
        | GameExpr::Tight(e)
        | GameExpr::Loose(e)
        | GameExpr::CoTight(e)
        | GameExpr::CoLoose(e) => base_tokens(e),
        GameExpr::Or(a, b) => {
            let mut out = base_tokens(a);
            out.extend(base_tokens(b));
            out
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("script line {line}: {source}")]
pub struct ScriptError {
    pub line: usize,
    #[source]
    pub source: MoveError,
}

/// One move per line; blank lines and "#" comment lines are skipped.
pub fn parse_script(text: &str) -> Result<Vec<Move>, ScriptError> {
    let mut moves = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        moves.push(Move::new(line).map_err(|source| ScriptError {
            line: i + 1,
            source,
        })?);
    }
    Ok(moves)
}
