#![allow(dead_code)] // each test target uses its own slice of this module

//! Definition-level oracles for the integration suites.
//!
//! Everything here is deliberately naive: move spellings are chopped by
//! hand, thread quantifiers run over a full enumeration of long-enough
//! branches, and trees are walked edge by edge.  None of it shares code
//! with the engine's representative machinery, which is the point.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use colgame::{random_tree, representatives, Bits, GameTree, LabMove, Move, Player, Run, RunStatus};

/// A move spelling chopped at the string level: a maximal run of bits,
/// then either a lone ':' or a '.' and a nonempty tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawMove {
    Split(String),
    At(String, String),
    Junk,
}

pub fn chop(text: &str) -> RawMove {
    let bits: String = text.chars().take_while(|c| *c == '0' || *c == '1').collect();
    let rest = &text[bits.len()..];
    if rest == ":" {
        RawMove::Split(bits)
    } else if let Some(tail) = rest.strip_prefix('.') {
        if tail.is_empty() {
            RawMove::Junk
        } else {
            RawMove::At(bits, tail.to_string())
        }
    } else {
        RawMove::Junk
    }
}

/// Every address a run mentions, splits included.
pub fn raw_addresses(run: &Run) -> BTreeSet<String> {
    run.iter()
        .filter_map(|lm| match chop(lm.mv.as_str()) {
            RawMove::Split(w) | RawMove::At(w, _) => Some(w),
            RawMove::Junk => None,
        })
        .collect()
}

/// All bitstrings of exactly `len` characters.
pub fn branches_of_len(len: usize) -> Vec<String> {
    (0..1u32 << len)
        .map(|i| {
            (0..len)
                .map(|j| if i >> (len - 1 - j) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect()
}

/// Branches this long outrun every address of the run, so each one pins
/// down a full projection class.
pub fn deciding_len(run: &Run) -> usize {
    raw_addresses(run).iter().map(String::len).max().unwrap_or(0) + 1
}

/// The inner run a thread along `branch` sees, by definition.
pub fn project_by_hand(run: &Run, branch: &str) -> Vec<(Player, String)> {
    run.iter()
        .filter_map(|lm| match chop(lm.mv.as_str()) {
            RawMove::At(w, tail) if branch.starts_with(w.as_str()) => Some((lm.player, tail)),
            _ => None,
        })
        .collect()
}

/// Representative soundness by enumeration: each representative is a
/// nonempty decisive branch within the deciding length, and together
/// they hit every projection class a full-length branch realizes.
pub fn reps_match_enumeration(run: &Run) -> bool {
    let l = deciding_len(run);
    let family: BTreeSet<Vec<(Player, String)>> = branches_of_len(l)
        .iter()
        .map(|b| project_by_hand(run, b))
        .collect();
    let reps = representatives(run);
    let addresses = raw_addresses(run);
    let shape_ok = reps.iter().all(|r| {
        let rs = r.to_string();
        !rs.is_empty()
            && rs.len() <= l
            && addresses
                .iter()
                .all(|a| !(a.len() > rs.len() && a.starts_with(rs.as_str())))
    });
    let rep_family: BTreeSet<Vec<(Player, String)>> = reps
        .iter()
        .map(|r| project_by_hand(run, &r.to_string()))
        .collect();
    shape_ok && rep_family == family
}

/// Engine projection at a decisive branch equals the by-hand one.
pub fn projection_matches(run: &Run, branch: &Bits) -> bool {
    match colgame::project(run, branch) {
        Ok(p) => {
            let eng: Vec<(Player, String)> = p
                .iter()
                .map(|lm| (lm.player, lm.mv.as_str().to_string()))
                .collect();
            eng == project_by_hand(run, &branch.to_string())
        }
        Err(_) => false,
    }
}

/// Legality of one loose move by quantifying over every deciding branch
/// through its address: the thread's past must walk the tree cleanly and
/// the new move must follow an edge owned by its author.
pub fn loose_move_legal_by_hand(base: &GameTree, position: &Run, lm: &LabMove) -> bool {
    let RawMove::At(w, tail) = chop(lm.mv.as_str()) else {
        return false;
    };
    let l = raw_addresses(position)
        .iter()
        .map(String::len)
        .chain([w.len()])
        .max()
        .unwrap_or(0)
        + 1;
    branches_of_len(l)
        .iter()
        .filter(|b| b.starts_with(w.as_str()))
        .all(|b| {
            let mut node = base;
            for (p, t) in project_by_hand(position, b) {
                match node.edges.get(&(p, t)) {
                    Some(next) => node = next,
                    None => return false,
                }
            }
            node.edges.contains_key(&(lm.player, tail.clone()))
        })
}

/// First offender of a loose run over a plain tree, stepping with the
/// by-hand move judgment.
pub fn loose_classify_by_hand(base: &GameTree, run: &Run) -> RunStatus {
    for i in 0..run.len() {
        let lm = &run[i];
        if !loose_move_legal_by_hand(base, &run.prefix(i), lm) {
            return RunStatus::IllegalBy {
                offender: lm.player,
                index: i,
            };
        }
    }
    RunStatus::Legal
}

/// Both players over each spelling.
pub fn pool(moves: &[Move]) -> Vec<LabMove> {
    let mut out = Vec::new();
    for p in [Player::Top, Player::Bot] {
        for m in moves {
            out.push(LabMove::new(p, m.clone()));
        }
    }
    out
}

/// Every run of length <= max_len over the pool, shortest first.
pub fn runs_over(pool: &[LabMove], max_len: usize) -> Vec<Run> {
    let mut out = vec![Run::empty()];
    let mut layer = vec![Run::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for r in &layer {
            for lm in pool {
                let r2 = r.pushed(lm.clone());
                out.push(r2.clone());
                next.push(r2);
            }
        }
        layer = next;
    }
    out
}

/// A deterministic spread of small trees: hand-picked shapes covering
/// the thread-legality corners, then a few generated ones.
pub fn small_tree_family() -> Vec<GameTree> {
    use Player::*;
    let lt = GameTree::leaf(Top);
    let lb = GameTree::leaf(Bot);
    let mut fam = vec![
        lt.clone(),
        lb.clone(),
        GameTree::leaf(Bot).with_edge(Top, "a", lt.clone()),
        GameTree::leaf(Bot).with_edge(Bot, "b", lt.clone()),
        GameTree::leaf(Top)
            .with_edge(Top, "a", lb.clone())
            .with_edge(Bot, "b", lt.clone()),
        GameTree::leaf(Bot)
            .with_edge(Bot, "a", lt.clone())
            .with_edge(Bot, "b", lb.clone()),
        GameTree::leaf(Bot)
            .with_edge(Top, "a", lt.clone())
            .with_edge(Bot, "a", lb.clone()),
        GameTree::leaf(Bot).with_edge(Top, "a", GameTree::leaf(Bot).with_edge(Bot, "b", lt.clone())),
        GameTree::leaf(Bot).with_edge(Bot, "b", GameTree::leaf(Top).with_edge(Bot, "b", lb.clone())),
        GameTree::leaf(Top)
            .with_edge(Top, "a", GameTree::leaf(Bot).with_edge(Bot, "b", lt.clone()))
            .with_edge(Bot, "b", GameTree::leaf(Top).with_edge(Top, "a", lb)),
    ];
    for seed in 0..6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        fam.push(random_tree(&mut rng, 2, 2));
    }
    fam
}
