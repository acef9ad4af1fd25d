//! Move-order perturbation and the bounded static-game check.
//!
//! `omega` is a p-delay of `gamma` when both runs make the same moves in
//! the same per-player order and p's moves appear in `omega` no earlier,
//! relative to the opponent's moves, than they do in `gamma`.  A game is
//! static when delaying a winner's moves never costs them the win; the
//! checker here verifies that exhaustively over all runs up to a length
//! bound drawn from a finite move alphabet.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::game::{self, GameExpr, RunStatus};
use crate::run::{LabMove, Move, Player, Run};

/// True iff `omega` is a p-delay of `gamma`: same per-player move
/// subsequences, and whenever p's k-th move precedes the opponent's n-th
/// move in `omega`, it does so in `gamma` too.
pub fn is_delay(p: Player, omega: &Run, gamma: &Run) -> bool {
    if omega.len() != gamma.len() {
        return false;
    }
    for q in [Player::Top, Player::Bot] {
        if omega.moves_of(q) != gamma.moves_of(q) {
            return false;
        }
    }
    let positions = |run: &Run, q: Player| -> Vec<usize> {
        run.iter()
            .enumerate()
            .filter(|(_, lm)| lm.player == q)
            .map(|(i, _)| i)
            .collect()
    };
    let op = positions(omega, p);
    let oo = positions(omega, p.opponent());
    let gp = positions(gamma, p);
    let go = positions(gamma, p.opponent());
    for k in 0..op.len() {
        for n in 0..oo.len() {
            if op[k] < oo[n] && gp[k] >= go[n] {
                return false;
            }
        }
    }
    true
}

/// All p-delays of `gamma`: every interleaving of gamma's two per-player
/// subsequences that qualifies under `is_delay`.  Always contains `gamma`.
pub fn enumerate_delays(p: Player, gamma: &Run) -> BTreeSet<Run> {
    let mine: Vec<&LabMove> = gamma.iter().filter(|lm| lm.player == p).collect();
    let theirs: Vec<&LabMove> = gamma.iter().filter(|lm| lm.player != p).collect();
    let len = gamma.len();
    let mut out = BTreeSet::new();
    // Masks with one bit per position; a set bit takes the next p-move.
    for mask in 0u64..(1 << len) {
        if mask.count_ones() as usize != mine.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut cand = Run::empty();
        for pos in 0..len {
            if mask >> pos & 1 == 1 {
                cand.push(mine[i].clone());
                i += 1;
            } else {
                cand.push(theirs[j].clone());
                j += 1;
            }
        }
        if is_delay(p, &cand, gamma) {
            out.insert(cand);
        }
    }
    out
}

/// True iff the run's first offender is `p`.
pub fn is_p_illegal(game: &GameExpr, run: &Run, p: Player) -> bool {
    matches!(game::classify(game, run), RunStatus::IllegalBy { offender, .. } if offender == p)
}

pub const DEFAULT_SEARCH_CEILING: u128 = 4_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bounded search would visit {needed} runs, over the ceiling of {ceiling}")]
pub struct SearchCeilingError {
    pub needed: u128,
    pub ceiling: u128,
}

/// Number of runs of length <= max_len over a pool of `pool_len` labmoves.
pub fn universe_size(pool_len: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(pool_len as u128);
    }
    total
}

/// Each alphabet move under both labels, alphabet order, ⊤ before ⊥.
pub fn labmove_pool(alphabet: &[Move]) -> Vec<LabMove> {
    let mut pool: Vec<LabMove> = Vec::new();
    for mv in alphabet {
        for p in [Player::Top, Player::Bot] {
            let lm = LabMove::new(p, mv.clone());
            if !pool.contains(&lm) {
                pool.push(lm);
            }
        }
    }
    pool
}

/// Bounded verification that delaying a winner's moves never flips the
/// outcome: for every run Γ over the alphabet with |Γ| <= max_len, every
/// player ℘, and every ℘-delay Ω of Γ, winner(Γ) = ℘ implies winner(Ω) = ℘.
pub fn is_static_bounded(
    game: &GameExpr,
    max_len: usize,
    alphabet: &[Move],
) -> Result<bool, SearchCeilingError> {
    is_static_bounded_with_ceiling(game, max_len, alphabet, DEFAULT_SEARCH_CEILING)
}

pub fn is_static_bounded_with_ceiling(
    game: &GameExpr,
    max_len: usize,
    alphabet: &[Move],
    ceiling: u128,
) -> Result<bool, SearchCeilingError> {
    Ok(static_counterexample_with_ceiling(game, max_len, alphabet, ceiling)?.is_none())
}

/// The first (in enumeration order) witness against staticness: a player p,
/// a p-delay Ω, and the original Γ with winner(Γ) = p but winner(Ω) ≠ p.
pub fn static_counterexample(
    game: &GameExpr,
    max_len: usize,
    alphabet: &[Move],
) -> Result<Option<(Player, Run, Run)>, SearchCeilingError> {
    static_counterexample_with_ceiling(game, max_len, alphabet, DEFAULT_SEARCH_CEILING)
}

pub fn static_counterexample_with_ceiling(
    game: &GameExpr,
    max_len: usize,
    alphabet: &[Move],
    ceiling: u128,
) -> Result<Option<(Player, Run, Run)>, SearchCeilingError> {
    let pool = checked_pool(alphabet, max_len, ceiling)?;
    let norm = game.co_normalized();
    let mut winners = BTreeMap::new();
    visit_runs(&norm, &pool, max_len, &mut |key, run, offense| {
        let w = match offense {
            Some(p) => p.opponent(),
            None => game::winner_legal(&norm, run),
        };
        winners.insert(key.to_vec(), w);
    });
    for (gamma_key, &p) in &winners {
        // Only delays of the winner's own moves can break staticness.
        for omega_key in delay_keys(p, gamma_key, &pool) {
            if winners[&omega_key] != p {
                return Ok(Some((p, keyed_run(&omega_key, &pool), keyed_run(gamma_key, &pool))));
            }
        }
    }
    Ok(None)
}

/// The first witness against "a p-illegal delay comes from a p-illegal
/// original": a player p, a p-illegal Ω ∈ enumerate_delays(p, Γ), and the
/// original Γ that is not p-illegal.  None when the implication holds over
/// the whole bounded universe.
pub fn delay_illegality_counterexample(
    game: &GameExpr,
    max_len: usize,
    alphabet: &[Move],
) -> Result<Option<(Player, Run, Run)>, SearchCeilingError> {
    let pool = checked_pool(alphabet, max_len, DEFAULT_SEARCH_CEILING)?;
    let norm = game.co_normalized();
    let mut offenders = BTreeMap::new();
    visit_runs(&norm, &pool, max_len, &mut |key, _, offense| {
        offenders.insert(key.to_vec(), offense);
    });
    for (gamma_key, &off_gamma) in &offenders {
        for p in [Player::Top, Player::Bot] {
            if off_gamma == Some(p) {
                continue;
            }
            for omega_key in delay_keys(p, gamma_key, &pool) {
                if offenders[&omega_key] == Some(p) {
                    return Ok(Some((p, keyed_run(&omega_key, &pool), keyed_run(gamma_key, &pool))));
                }
            }
        }
    }
    Ok(None)
}

fn checked_pool(
    alphabet: &[Move],
    max_len: usize,
    ceiling: u128,
) -> Result<Vec<LabMove>, SearchCeilingError> {
    let pool = labmove_pool(alphabet);
    let needed = universe_size(pool.len(), max_len);
    if needed > ceiling {
        return Err(SearchCeilingError { needed, ceiling });
    }
    Ok(pool)
}

/// Depth-first walk of every run of length <= max_len over the pool.  The
/// callback sees the packed key (pool indices), the run itself, and its
/// first offender if it is illegal; legality is judged one step at a time,
/// so each run costs a single move check.
fn visit_runs(
    norm: &GameExpr,
    pool: &[LabMove],
    max_len: usize,
    f: &mut impl FnMut(&[u8], &Run, Option<Player>),
) {
    let mut key = Vec::new();
    let mut run = Run::empty();
    descend(norm, pool, max_len, &mut key, &mut run, None, f);
}

fn descend(
    norm: &GameExpr,
    pool: &[LabMove],
    left: usize,
    key: &mut Vec<u8>,
    run: &mut Run,
    offense: Option<Player>,
    f: &mut impl FnMut(&[u8], &Run, Option<Player>),
) {
    f(key, run, offense);
    if left == 0 {
        return;
    }
    for (i, lm) in pool.iter().enumerate() {
        let next_offense = offense.or_else(|| {
            if game::step_legal(norm, run, lm) {
                None
            } else {
                Some(lm.player)
            }
        });
        key.push(i as u8);
        run.push(lm.clone());
        descend(norm, pool, left - 1, key, run, next_offense, f);
        key.pop();
        run.pop();
    }
}

/// Keys of all p-delays of the run behind `gamma_key`, the key itself
/// included.
fn delay_keys(p: Player, gamma_key: &[u8], pool: &[LabMove]) -> Vec<Vec<u8>> {
    let mine: Vec<u8> = gamma_key.iter().copied().filter(|&i| pool[i as usize].player == p).collect();
    let theirs: Vec<u8> = gamma_key.iter().copied().filter(|&i| pool[i as usize].player != p).collect();
    let len = gamma_key.len();
    let gp = label_positions(gamma_key, pool, p);
    let go = label_positions(gamma_key, pool, p.opponent());
    let mut out = Vec::new();
    for mask in 0u64..(1 << len) {
        if mask.count_ones() as usize != mine.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut cand = Vec::with_capacity(len);
        for pos in 0..len {
            if mask >> pos & 1 == 1 {
                cand.push(mine[i]);
                i += 1;
            } else {
                cand.push(theirs[j]);
                j += 1;
            }
        }
        let op = label_positions(&cand, pool, p);
        let oo = label_positions(&cand, pool, p.opponent());
        let ok = (0..op.len())
            .all(|k| (0..oo.len()).all(|n| op[k] >= oo[n] || gp[k] < go[n]));
        if ok {
            out.push(cand);
        }
    }
    out
}

fn label_positions(key: &[u8], pool: &[LabMove], q: Player) -> Vec<usize> {
    key.iter()
        .enumerate()
        .filter(|(_, &i)| pool[i as usize].player == q)
        .map(|(pos, _)| pos)
        .collect()
}

fn keyed_run(key: &[u8], pool: &[LabMove]) -> Run {
    key.iter().map(|&i| pool[i as usize].clone()).collect()
}
