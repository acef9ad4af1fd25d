//! Game expressions and the rules of play.
//!
//! `legal` / `classify` / `winner` are total over arbitrary runs: a run
//! that breaks the rules is classified by its first offending move, and
//! an illegal run is won by the offender's opponent.
//!
//! The replication duals are defined by their normal forms,
//! `co-tight E = neg (tight (neg E))` and `co-loose E = neg (loose (neg E))`,
//! and every entry point evaluates them through that rewrite.

use std::borrow::Cow;

use thiserror::Error;

use crate::recurrence;
use crate::run::{LabMove, Move, Player, Run};
use crate::tree::GameTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameExpr {
    Tree(GameTree),
    Neg(Box<GameExpr>),
    Or(Box<GameExpr>, Box<GameExpr>),
    Tight(Box<GameExpr>),
    Loose(Box<GameExpr>),
    CoTight(Box<GameExpr>),
    CoLoose(Box<GameExpr>),
}

impl GameExpr {
    pub fn tree(t: GameTree) -> GameExpr {
        GameExpr::Tree(t)
    }

    pub fn neg(e: GameExpr) -> GameExpr {
        GameExpr::Neg(Box::new(e))
    }

    pub fn or(left: GameExpr, right: GameExpr) -> GameExpr {
        GameExpr::Or(Box::new(left), Box::new(right))
    }

    pub fn tight(e: GameExpr) -> GameExpr {
        GameExpr::Tight(Box::new(e))
    }

    pub fn loose(e: GameExpr) -> GameExpr {
        GameExpr::Loose(Box::new(e))
    }

    pub fn co_tight(e: GameExpr) -> GameExpr {
        GameExpr::CoTight(Box::new(e))
    }

    pub fn co_loose(e: GameExpr) -> GameExpr {
        GameExpr::CoLoose(Box::new(e))
    }

    fn contains_co(&self) -> bool {
        match self {
            GameExpr::Tree(_) => false,
            GameExpr::Neg(e) | GameExpr::Tight(e) | GameExpr::Loose(e) => e.contains_co(),
            GameExpr::Or(a, b) => a.contains_co() || b.contains_co(),
            GameExpr::CoTight(_) | GameExpr::CoLoose(_) => true,
        }
    }

    /// Rewrite the duals away.  Borrows unchanged expressions.
    pub fn co_normalized(&self) -> Cow<'_, GameExpr> {
        if self.contains_co() {
            Cow::Owned(self.co_rewrite())
        } else {
            Cow::Borrowed(self)
        }
    }

    fn co_rewrite(&self) -> GameExpr {
        match self {
            GameExpr::Tree(t) => GameExpr::Tree(t.clone()),
            GameExpr::Neg(e) => GameExpr::neg(e.co_rewrite()),
            GameExpr::Or(a, b) => GameExpr::or(a.co_rewrite(), b.co_rewrite()),
            GameExpr::Tight(e) => GameExpr::tight(e.co_rewrite()),
            GameExpr::Loose(e) => GameExpr::loose(e.co_rewrite()),
            GameExpr::CoTight(e) => {
                GameExpr::neg(GameExpr::tight(GameExpr::neg(e.co_rewrite())))
            }
            GameExpr::CoLoose(e) => {
                GameExpr::neg(GameExpr::loose(GameExpr::neg(e.co_rewrite())))
            }
        }
    }
}

/// Verdict of `classify`: either the whole run obeys the rules, or the
/// move at `index` is the first offense and `offender` made it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Legal,
    IllegalBy { offender: Player, index: usize },
}

impl RunStatus {
    pub fn is_legal(self) -> bool {
        self == RunStatus::Legal
    }
}

/// A run given where a legal one was required.  Carries the first offense.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("run is illegal: first offense at move #{index} by {offender}")]
pub struct IllegalRunError {
    pub offender: Player,
    pub index: usize,
}

/// The two sides of a disjunction.  Surface moves carry the `1.` / `2.`
/// component prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    One,
    Two,
}

impl Component {
    pub fn prefix(self) -> &'static str {
        match self {
            Component::One => "1.",
            Component::Two => "2.",
        }
    }

    pub fn from_index(i: usize) -> Option<Component> {
        match i {
            1 => Some(Component::One),
            2 => Some(Component::Two),
            _ => None,
        }
    }
}

/// Split an `"i.rest"` disjunction move.  `None` when the move does not
/// carry a component prefix.
pub fn parse_or_move(mv: &Move) -> Option<(Component, Move)> {
    let text = mv.as_str();
    let rest = text.get(2..)?;
    let component = match &text[..2] {
        "1." => Component::One,
        "2." => Component::Two,
        _ => return None,
    };
    Move::new(rest).ok().map(|inner| (component, inner))
}

pub fn or_prefixed(component: Component, mv: &Move) -> Move {
    Move::new(format!("{}{}", component.prefix(), mv)).expect("prefixed move")
}

/// The subrun addressed to one component, prefixes stripped.  Moves of
/// the other component, and moves without a component prefix, are dropped.
pub fn component_run(run: &Run, component: Component) -> Run {
    run.iter()
        .filter_map(|lm| match parse_or_move(&lm.mv) {
            Some((c, inner)) if c == component => Some(LabMove::new(lm.player, inner)),
            _ => None,
        })
        .collect()
}

/// Is `lm` a legal continuation of `position`?
///
/// The position itself must be legal; a violation is reported rather than
/// absorbed into a `false`.
pub fn legal(game: &GameExpr, position: &Run, lm: &LabMove) -> Result<bool, IllegalRunError> {
    let game = game.co_normalized();
    for (index, prior) in position.iter().enumerate() {
        if !step_legal(&game, &position.prefix(index), prior) {
            return Err(IllegalRunError {
                offender: prior.player,
                index,
            });
        }
    }
    Ok(step_legal(&game, position, lm))
}

/// Find the first offense in `run`, if any.
pub fn classify(game: &GameExpr, run: &Run) -> RunStatus {
    let game = game.co_normalized();
    classify_normalized(&game, run)
}

pub(crate) fn classify_normalized(game: &GameExpr, run: &Run) -> RunStatus {
    for (index, lm) in run.iter().enumerate() {
        if !step_legal(game, &run.prefix(index), lm) {
            return RunStatus::IllegalBy {
                offender: lm.player,
                index,
            };
        }
    }
    RunStatus::Legal
}

/// One-step legality against a co-free game and a legal position.
pub(crate) fn step_legal(game: &GameExpr, position: &Run, lm: &LabMove) -> bool {
    match game {
        GameExpr::Tree(t) => match t.node_at(position) {
            Some(node) => node.step(lm).is_some(),
            None => false,
        },
        GameExpr::Neg(e) => step_legal(e, &position.swapped(), &lm.swapped()),
        GameExpr::Or(left, right) => match parse_or_move(&lm.mv) {
            Some((c, inner)) => {
                let sub = match c {
                    Component::One => left,
                    Component::Two => right,
                };
                step_legal(sub, &component_run(position, c), &LabMove::new(lm.player, inner))
            }
            None => false,
        },
        GameExpr::Tight(e) => recurrence::tight_step(e, position, lm),
        GameExpr::Loose(e) => recurrence::loose_step(e, position, lm),
        GameExpr::CoTight(_) | GameExpr::CoLoose(_) => {
            unreachable!("duals are rewritten before evaluation")
        }
    }
}

/// Who wins `run`?  Total: an illegal run goes to the offender's opponent.
pub fn winner(game: &GameExpr, run: &Run) -> Player {
    let game = game.co_normalized();
    match classify_normalized(&game, run) {
        RunStatus::IllegalBy { offender, .. } => offender.opponent(),
        RunStatus::Legal => winner_legal(&game, run),
    }
}

/// Winner of a legal run of a co-free game.
pub(crate) fn winner_legal(game: &GameExpr, run: &Run) -> Player {
    match game {
        GameExpr::Tree(t) => {
            t.node_at(run)
                .expect("legal run of a tree reaches a node")
                .winner_here
        }
        GameExpr::Neg(e) => winner_legal(e, &run.swapped()).opponent(),
        GameExpr::Or(left, right) => {
            let l = winner_legal(left, &component_run(run, Component::One));
            let r = winner_legal(right, &component_run(run, Component::Two));
            if l == Player::Top || r == Player::Top {
                Player::Top
            } else {
                Player::Bot
            }
        }
        GameExpr::Tight(e) => recurrence::rec_winner_legal(recurrence::RecKind::Tight, e, run),
        GameExpr::Loose(e) => recurrence::rec_winner_legal(recurrence::RecKind::Loose, e, run),
        GameExpr::CoTight(_) | GameExpr::CoLoose(_) => {
            unreachable!("duals are rewritten before evaluation")
        }
    }
}
