//! Finite base games as explicit trees.
//!
//! Every node carries the winner of the play ending there; edges are keyed
//! by (player, token), so the same token may be available to both players
//! at one node.  A move is legal exactly when the matching edge exists.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::run::{LabMove, Player, Run};

/// Edge tokens: lowercase ASCII letters, digits, `_` and `-`.  The dot and
/// colon are reserved as surface-move separators.
pub fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTree {
    pub winner_here: Player,
    pub edges: BTreeMap<(Player, String), GameTree>,
}

impl GameTree {
    pub fn leaf(winner_here: Player) -> GameTree {
        GameTree {
            winner_here,
            edges: BTreeMap::new(),
        }
    }

    /// Builder step; panics on an invalid token or a duplicate edge key.
    pub fn with_edge(mut self, player: Player, token: &str, child: GameTree) -> GameTree {
        assert!(valid_token(token), "invalid edge token {:?}", token);
        let prev = self.edges.insert((player, token.to_string()), child);
        assert!(prev.is_none(), "duplicate edge ({:?}, {:?})", player, token);
        self
    }

    /// Walk the edges named by a run.  `None` when some move has no edge,
    /// which is what makes that move illegal.
    pub fn node_at(&self, run: &Run) -> Option<&GameTree> {
        let mut node = self;
        for lm in run.iter() {
            node = node.step(lm)?;
        }
        Some(node)
    }

    pub fn step(&self, lm: &LabMove) -> Option<&GameTree> {
        self.edges.get(&(lm.player, lm.mv.as_str().to_string()))
    }

    /// All tokens appearing anywhere in the tree, either player.
    pub fn tokens(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_tokens(&mut out);
        out
    }

    fn collect_tokens(&self, out: &mut BTreeSet<String>) {
        for ((_, token), child) in &self.edges {
            out.insert(token.clone());
            child.collect_tokens(out);
        }
    }

    pub fn depth(&self) -> usize {
        self.edges
            .values()
            .map(|c| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.edges.values().map(GameTree::node_count).sum::<usize>()
    }
}
