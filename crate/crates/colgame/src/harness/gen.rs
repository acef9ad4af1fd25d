//! Base-tree generation: random static trees for match fodder, exhaustive
//! shape families for the small-instance suites, and the move alphabets
//! derived from a tree for bounded searches.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::delay::is_static_bounded;
use crate::game::GameExpr;
use crate::run::{Move, Player};
use crate::tree::GameTree;

const TOKEN_POOL: [&str; 2] = ["a", "b"];
const GEN_CEILING: usize = 10_000;

/// A token not used anywhere in the given set, for probing how a game
/// treats moves that match no edge.
pub fn fresh_token(used: &BTreeSet<String>) -> String {
    let mut t = "q".to_string();
    while used.contains(&t) {
        t.push('q');
    }
    t
}

/// Alphabet for bounded searches over a bare tree game: its own tokens
/// plus one fresh token.  Legality and winners depend only on whether a
/// move matches an edge, so this finite set is exhaustive up to renaming.
pub fn base_alphabet(tree: &GameTree) -> Vec<Move> {
    let tokens = tree.tokens();
    let fresh = fresh_token(&tokens);
    tokens
        .into_iter()
        .chain(std::iter::once(fresh))
        .map(|t| Move::new(t).expect("tokens are valid move spellings"))
        .collect()
}

/// Alphabet of at most 4 surface moves for bounded searches over the
/// loose or tight closure of a tree: thread moves at the root address and
/// one child address, plus the replicative spelling.
pub fn surface_alphabet(tree: &GameTree) -> Vec<Move> {
    let tokens: Vec<String> = tree.tokens().into_iter().collect();
    let first = tokens
        .first()
        .cloned()
        .unwrap_or_else(|| fresh_token(&BTreeSet::new()));
    let mut spellings = Vec::new();
    for t in tokens.iter().take(2) {
        spellings.push(format!(".{t}"));
    }
    if spellings.is_empty() {
        spellings.push(format!(".{first}"));
    }
    spellings.push(format!("0.{first}"));
    spellings.push(":".to_string());
    spellings
        .into_iter()
        .map(|s| Move::new(s).expect("surface spellings are valid moves"))
        .collect()
}

/// Uniform random tree over tokens {a, b} with the given depth and
/// branching caps.  When both caps allow it the root gets at least one
/// edge, so the game has at least one move.
pub fn random_tree(rng: &mut ChaCha8Rng, max_depth: usize, max_branch: usize) -> GameTree {
    grow(rng, max_depth, max_branch, max_depth > 0 && max_branch > 0)
}

fn grow(rng: &mut ChaCha8Rng, depth_left: usize, max_branch: usize, force_edge: bool) -> GameTree {
    let label = if rng.gen_bool(0.5) {
        Player::Top
    } else {
        Player::Bot
    };
    let mut node = GameTree::leaf(label);
    if depth_left == 0 || max_branch == 0 {
        return node;
    }
    let mut keys: Vec<(Player, &str)> = Vec::new();
    for p in [Player::Top, Player::Bot] {
        for t in TOKEN_POOL {
            keys.push((p, t));
        }
    }
    let lo = usize::from(force_edge);
    let n_edges = rng.gen_range(lo..=max_branch.min(keys.len()));
    for _ in 0..n_edges {
        let (p, t) = keys.swap_remove(rng.gen_range(0..keys.len()));
        node = node.with_edge(p, t, grow(rng, depth_left - 1, max_branch, false));
    }
    node
}

#[derive(Clone, Debug)]
pub struct GeneratedTree {
    pub tree: GameTree,
    /// Candidates discarded by the static filter before this one passed.
    pub rejections: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no static tree found after {attempts} candidates")]
pub struct GenCeilingError {
    pub attempts: usize,
}

/// First random tree that passes the bounded static check over its own
/// alphabet plus a fresh token.
pub fn random_static_tree(
    seed: u64,
    max_depth: usize,
    max_branch: usize,
) -> Result<GeneratedTree, GenCeilingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_len = (max_depth + 2).min(5);
    for rejections in 0..GEN_CEILING {
        let tree = random_tree(&mut rng, max_depth, max_branch);
        let alphabet = base_alphabet(&tree);
        let verdict = is_static_bounded(&GameExpr::tree(tree.clone()), max_len, &alphabet)
            .expect("generator search spaces sit under the ceiling");
        if verdict {
            return Ok(GeneratedTree { tree, rejections });
        }
    }
    Err(GenCeilingError {
        attempts: GEN_CEILING,
    })
}

/// Every tree shape within the caps, with all node labels set to ⊤ as a
/// placeholder; pair with relabel_preorder to walk the labelings.
pub fn enumerate_shapes(max_depth: usize, max_branch: usize, tokens: &[&str]) -> Vec<GameTree> {
    let mut keys: Vec<(Player, String)> = Vec::new();
    for p in [Player::Top, Player::Bot] {
        for t in tokens {
            keys.push((p, t.to_string()));
        }
    }
    shapes(max_depth, max_branch, &keys)
}

fn shapes(depth_left: usize, max_branch: usize, keys: &[(Player, String)]) -> Vec<GameTree> {
    let mut out = vec![GameTree::leaf(Player::Top)];
    if depth_left == 0 || max_branch == 0 {
        return out;
    }
    let children = shapes(depth_left - 1, max_branch, keys);
    for subset in subsets_up_to(keys.len(), max_branch) {
        if subset.is_empty() {
            continue;
        }
        let mut partial: Vec<GameTree> = vec![GameTree::leaf(Player::Top)];
        for &k in &subset {
            let (p, t) = &keys[k];
            let mut next = Vec::new();
            for base in &partial {
                for child in &children {
                    next.push(base.clone().with_edge(*p, t, child.clone()));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size == 0 || size > max_size {
            continue;
        }
        out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
    }
    out
}

/// Copy of the shape with node labels taken from the mask bits in
/// preorder, set bit meaning ⊤.
pub fn relabel_preorder(shape: &GameTree, mask: u64) -> GameTree {
    let mut next = 0;
    relabel(shape, mask, &mut next)
}

fn relabel(shape: &GameTree, mask: u64, next: &mut u32) -> GameTree {
    let label = if mask >> *next & 1 == 1 {
        Player::Top
    } else {
        Player::Bot
    };
    *next += 1;
    let mut out = GameTree::leaf(label);
    for ((p, t), child) in &shape.edges {
        out = out.with_edge(*p, t, relabel(child, mask, next));
    }
    out
}
