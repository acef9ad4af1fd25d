//! Players, moves and runs.
//!
//! A run is a finite sequence of labeled moves ("labmoves").  The label
//! says who moved; nothing in a run enforces turn order, and a legal run
//! may contain consecutive moves by the same player.

use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// The two players: `Top` is the machine, `Bot` the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Top,
    Bot,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Top => Player::Bot,
            Player::Bot => Player::Top,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Player::Top => "T",
            Player::Bot => "B",
        }
    }

    pub fn from_label(s: &str) -> Option<Player> {
        match s {
            "T" => Some(Player::Top),
            "B" => Some(Player::Bot),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A move string.  Nonempty and free of whitespace; otherwise arbitrary,
/// since runs may record garbage the rules will reject.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move(String);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move is empty")]
    Empty,
    #[error("move contains whitespace")]
    Whitespace,
}

impl Move {
    pub fn new(text: impl Into<String>) -> Result<Move, MoveError> {
        let text = text.into();
        if text.is_empty() {
            return Err(MoveError::Empty);
        }
        if text.chars().any(char::is_whitespace) {
            return Err(MoveError::Whitespace);
        }
        Ok(Move(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A move together with the player who made it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabMove {
    pub player: Player,
    pub mv: Move,
}

impl LabMove {
    pub fn new(player: Player, mv: Move) -> LabMove {
        LabMove { player, mv }
    }

    /// The same move made by the other player.
    pub fn swapped(&self) -> LabMove {
        LabMove::new(self.player.opponent(), self.mv.clone())
    }
}

impl fmt::Display for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.player.label(), self.mv)
    }
}

impl fmt::Debug for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.player.label(), self.mv)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabMoveParseError {
    #[error("expected \"T <move>\" or \"B <move>\", got {0:?}")]
    BadShape(String),
    #[error("unknown player label {0:?}")]
    BadPlayer(String),
    #[error("bad move: {0}")]
    BadMove(#[from] MoveError),
}

/// Parse one `"T <move>"` / `"B <move>"` line.
pub fn parse_labmove(line: &str) -> Result<LabMove, LabMoveParseError> {
    let (label, rest) = line
        .split_once(' ')
        .ok_or_else(|| LabMoveParseError::BadShape(line.to_string()))?;
    let player = Player::from_label(label)
        .ok_or_else(|| LabMoveParseError::BadPlayer(label.to_string()))?;
    Ok(LabMove::new(player, Move::new(rest)?))
}

/// A finite sequence of labmoves.  Any prefix of a run is a run.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run(Vec<LabMove>);

impl Run {
    pub fn empty() -> Run {
        Run(Vec::new())
    }

    pub fn from_moves(moves: Vec<LabMove>) -> Run {
        Run(moves)
    }

    pub fn push(&mut self, lm: LabMove) {
        self.0.push(lm);
    }

    pub fn pushed(&self, lm: LabMove) -> Run {
        let mut r = self.clone();
        r.push(lm);
        r
    }

    pub fn pop(&mut self) -> Option<LabMove> {
        self.0.pop()
    }

    pub fn prefix(&self, n: usize) -> Run {
        Run(self.0[..n].to_vec())
    }

    /// The run with every label flipped.
    pub fn swapped(&self) -> Run {
        Run(self.0.iter().map(LabMove::swapped).collect())
    }

    /// The subsequence of moves made by `p`, labels dropped.
    pub fn moves_of(&self, p: Player) -> Vec<&Move> {
        self.0
            .iter()
            .filter(|lm| lm.player == p)
            .map(|lm| &lm.mv)
            .collect()
    }
}

impl Deref for Run {
    type Target = [LabMove];

    fn deref(&self) -> &[LabMove] {
        &self.0
    }
}

impl FromIterator<LabMove> for Run {
    fn from_iter<I: IntoIterator<Item = LabMove>>(iter: I) -> Run {
        Run(iter.into_iter().collect())
    }
}

impl fmt::Debug for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, lm) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", lm)?;
        }
        write!(f, "⟩")
    }
}
