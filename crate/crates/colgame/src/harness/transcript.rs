//! Flat-file match records.
//!
//! A transcript is UTF-8 text: three header lines, then one labmove per
//! line in the order the moves were recorded, with an optional "#f" line
//! after each E2 reaction capturing the machine's leaf map at that point.
//!
//! ```text
//! #game (or (co-loose (neg (node B (B b (node T))))) (tight (node B (B b (node T)))))
//! #machine e2
//! #seed 7
//! B 2.:
//! #f 0=0,1=1
//! ```
//!
//! Serialization is canonical and `parse` inverts it exactly, so equal
//! transcripts have equal files.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::Bits;
use crate::run::{parse_labmove, LabMove, Run};

/// The machine's leaf map, sorted by leaf, photographed when the first
/// `moves_len` recorded moves were on the board.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub moves_len: usize,
    pub f: Vec<(Bits, Bits)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub game_text: String,
    pub machine_name: String,
    pub seed: u64,
    pub moves: Vec<LabMove>,
    pub snapshots: Vec<Snapshot>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("transcript line {line}: {msg}")]
pub struct TranscriptError {
    pub line: usize,
    pub msg: String,
}

impl Transcript {
    pub fn run(&self) -> Run {
        self.moves.iter().cloned().collect()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "#game {}", self.game_text).unwrap();
        writeln!(out, "#machine {}", self.machine_name).unwrap();
        writeln!(out, "#seed {}", self.seed).unwrap();
        let mut snaps = self.snapshots.iter().peekable();
        let mut flush = |out: &mut String, count: usize| {
            while snaps.peek().map(|s| s.moves_len <= count) == Some(true) {
                let snap = snaps.next().unwrap();
                out.push_str("#f ");
                for (i, (leaf, v)) in snap.f.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write!(out, "{leaf}={v}").unwrap();
                }
                out.push('\n');
            }
        };
        flush(&mut out, 0);
        for (i, lm) in self.moves.iter().enumerate() {
            writeln!(out, "{} {}", lm.player.label(), lm.mv).unwrap();
            flush(&mut out, i + 1);
        }
        flush(&mut out, usize::MAX);
        out
    }

    pub fn parse(text: &str) -> Result<Transcript, TranscriptError> {
        let err = |line: usize, msg: String| TranscriptError { line, msg };
        let mut game_text = None;
        let mut machine_name = "none".to_string();
        let mut seed = 0;
        let mut moves: Vec<LabMove> = Vec::new();
        let mut snapshots = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#game ") {
                game_text = Some(rest.to_string());
            } else if let Some(rest) = line.strip_prefix("#machine ") {
                machine_name = rest.to_string();
            } else if let Some(rest) = line.strip_prefix("#seed ") {
                seed = rest
                    .parse()
                    .map_err(|_| err(lineno, format!("bad seed {rest:?}")))?;
            } else if line == "#f" || line.starts_with("#f ") {
                let rest = line.strip_prefix("#f").unwrap().trim_start();
                let mut f = Vec::new();
                if !rest.is_empty() {
                    for item in rest.split(',') {
                        let (leaf, v) = item
                            .split_once('=')
                            .ok_or_else(|| err(lineno, format!("bad map entry {item:?}")))?;
                        let leaf = Bits::parse(leaf)
                            .ok_or_else(|| err(lineno, format!("bad leaf {leaf:?}")))?;
                        let v = Bits::parse(v)
                            .ok_or_else(|| err(lineno, format!("bad address {v:?}")))?;
                        f.push((leaf, v));
                    }
                }
                snapshots.push(Snapshot {
                    moves_len: moves.len(),
                    f,
                });
            } else if line.starts_with('#') {
                return Err(err(lineno, format!("unknown directive {line:?}")));
            } else {
                let lm = parse_labmove(line).map_err(|e| err(lineno, e.to_string()))?;
                moves.push(lm);
            }
        }
        Ok(Transcript {
            game_text: game_text.ok_or_else(|| err(1, "missing #game header".into()))?,
            machine_name,
            seed,
            moves,
            snapshots,
        })
    }
}
