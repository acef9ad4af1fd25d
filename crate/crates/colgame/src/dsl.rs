//! Textual game syntax.
//!
//! ```text
//! expr  ::= (node <T|B> edge*) | (neg expr) | (or expr expr)
//!         | (tight expr) | (loose expr) | (co-tight expr) | (co-loose expr)
//! edge  ::= (<T|B> <token> expr)
//! ```
//!
//! Serialization is canonical (single spaces, edges in key order), and
//! parsing a canonical form reproduces it byte for byte.

use std::fmt;

use thiserror::Error;

use crate::game::GameExpr;
use crate::run::Player;
use crate::tree::{valid_token, GameTree};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct DslError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(text: &str) -> Vec<(usize, Tok<'_>)> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'(' {
            toks.push((i, Tok::Open));
            i += 1;
        } else if c == b')' {
            toks.push((i, Tok::Close));
            i += 1;
        } else {
            let start = i;
            while i < bytes.len()
                && !bytes[i].is_ascii_whitespace()
                && bytes[i] != b'('
                && bytes[i] != b')'
            {
                i += 1;
            }
            toks.push((start, Tok::Atom(&text[start..i])));
        }
    }
    toks
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(usize, Tok<'a>)> {
        self.toks.get(self.at).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, Tok<'a>), DslError> {
        match self.toks.get(self.at) {
            Some(&t) => {
                self.at += 1;
                Ok(t)
            }
            None => err(self.end, format!("unexpected end of input, expected {what}")),
        }
    }

    fn expect_open(&mut self) -> Result<usize, DslError> {
        match self.next("(")? {
            (pos, Tok::Open) => Ok(pos),
            (pos, _) => err(pos, "expected ("),
        }
    }

    fn expect_close(&mut self) -> Result<(), DslError> {
        match self.next(")")? {
            (_, Tok::Close) => Ok(()),
            (pos, _) => err(pos, "expected )"),
        }
    }

    fn atom(&mut self, what: &str) -> Result<(usize, &'a str), DslError> {
        match self.next(what)? {
            (pos, Tok::Atom(a)) => Ok((pos, a)),
            (pos, _) => err(pos, format!("expected {what}")),
        }
    }

    fn player(&mut self) -> Result<Player, DslError> {
        let (pos, a) = self.atom("player label T or B")?;
        Player::from_label(a).ok_or(DslError {
            pos,
            msg: format!("expected player label T or B, got {a:?}"),
        })
    }

    fn expr(&mut self) -> Result<GameExpr, DslError> {
        self.expect_open()?;
        let (pos, head) = self.atom("form name")?;
        let e = match head {
            "node" => GameExpr::Tree(self.node_body()?),
            "neg" => GameExpr::neg(self.expr()?),
            "tight" => GameExpr::tight(self.expr()?),
            "loose" => GameExpr::loose(self.expr()?),
            "co-tight" => GameExpr::co_tight(self.expr()?),
            "co-loose" => GameExpr::co_loose(self.expr()?),
            "or" => {
                let left = self.expr()?;
                let right = self.expr()?;
                GameExpr::or(left, right)
            }
            other => return err(pos, format!("unknown form {other:?}")),
        };
        self.expect_close()?;
        Ok(e)
    }

    fn node_body(&mut self) -> Result<GameTree, DslError> {
        let winner_here = self.player()?;
        let mut tree = GameTree::leaf(winner_here);
        while let Some((_, Tok::Open)) = self.peek() {
            self.expect_open()?;
            let player = self.player()?;
            let (tpos, token) = self.atom("edge token")?;
            if !valid_token(token) {
                return err(tpos, format!("bad edge token {token:?}"));
            }
            let child = self.expr()?;
            if tree
                .edges
                .insert((player, token.to_string()), child_tree(child, tpos)?)
                .is_some()
            {
                return err(tpos, format!("duplicate edge ({player} {token})"));
            }
            self.expect_close()?;
        }
        Ok(tree)
    }
}

fn child_tree(e: GameExpr, pos: usize) -> Result<GameTree, DslError> {
    match e {
        GameExpr::Tree(t) => Ok(t),
        _ => err(pos, "tree edges must lead to (node ...) subtrees"),
    }
}

/// Parse a single game expression; trailing input is an error.
pub fn parse_game(text: &str) -> Result<GameExpr, DslError> {
    let mut p = Parser {
        toks: lex(text),
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some((pos, _)) => err(pos, "trailing input after expression"),
    }
}

pub fn serialize_game(e: &GameExpr) -> String {
    format!("{e}")
}

fn fmt_tree(t: &GameTree, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(node {}", t.winner_here)?;
    for ((player, token), child) in &t.edges {
        write!(f, " ({player} {token} ")?;
        fmt_tree(child, f)?;
        write!(f, ")")?;
    }
    write!(f, ")")
}

impl fmt::Display for GameExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameExpr::Tree(t) => fmt_tree(t, f),
            GameExpr::Neg(e) => write!(f, "(neg {e})"),
            GameExpr::Or(a, b) => write!(f, "(or {a} {b})"),
            GameExpr::Tight(e) => write!(f, "(tight {e})"),
            GameExpr::Loose(e) => write!(f, "(loose {e})"),
            GameExpr::CoTight(e) => write!(f, "(co-tight {e})"),
            GameExpr::CoLoose(e) => write!(f, "(co-loose {e})"),
        }
    }
}
