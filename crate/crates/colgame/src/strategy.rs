//! The two copycat machines.
//!
//! Both play ⊤ in a two-component disjunction and win it against any
//! adversary, for any base tree, without ever looking at the base: E1
//! bridges a co-tight component into a loose one, E2 a co-loose component
//! into a tight one.  E1 keeps no state.  E2 keeps one record, a map f
//! from the live leaves of its tight component to addresses on the loose
//! side, and the whole strategy is bookkeeping on f.
//!
//! A reaction processes exactly one newly arrived adversary move, already
//! appended to the machine's position, and returns the full batch of
//! answer moves.  An adversary move the machine can recognize as illegal
//! from the position alone (wrong shape, wrong component discipline, a
//! thread address that does not exist) draws no answer: the machine never
//! retaliates first.

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::game::{component_run, or_prefixed, parse_or_move, Component, GameExpr};
use crate::recurrence::{bt_nodes, parse_surface_move, project, representatives, SurfaceMove};
use crate::run::{LabMove, Move, Player, Run};

/// The ordered batch of moves a machine emits in one reaction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reaction(pub Vec<Move>);

impl Reaction {
    pub fn empty() -> Reaction {
        Reaction(Vec::new())
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }
}

impl FromIterator<Move> for Reaction {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Reaction {
        Reaction(iter.into_iter().collect())
    }
}

/// Or(CoTight(Neg base), Loose base), the game E1 wins.
pub fn e1_game(base: GameExpr) -> GameExpr {
    GameExpr::or(
        GameExpr::co_tight(GameExpr::neg(base.clone())),
        GameExpr::loose(base),
    )
}

/// Or(CoLoose(Neg base), Tight base), the game E2 wins.
pub fn e2_game(base: GameExpr) -> GameExpr {
    GameExpr::or(
        GameExpr::co_loose(GameExpr::neg(base.clone())),
        GameExpr::tight(base),
    )
}

/// E1's answer to the newest adversary move (the last labmove of
/// `position`).  A move "1.w.α" is mirrored as "2.w.α"; a move "2.w.α"
/// is mirrored as "1.w.α" after replicating component 1 until w names one
/// of its threads.
pub fn e1_react(position: &Run, adversary: &LabMove) -> Reaction {
    if adversary.player != Player::Bot {
        return Reaction::empty();
    }
    let Some((component, inner)) = parse_or_move(&adversary.mv) else {
        return Reaction::empty();
    };
    match (component, parse_surface_move(&inner)) {
        (Component::One, Some(SurfaceMove::InThread(w, alpha))) => {
            // Replication in the co-tight component belongs to the machine,
            // so an adversary thread move is answerable only at an existing
            // node.
            if !bt_nodes(&component_run(position, Component::One)).contains(&w) {
                return Reaction::empty();
            }
            [or_prefixed(Component::Two, &thread_move(&w, &alpha))]
                .into_iter()
                .collect()
        }
        (Component::Two, Some(SurfaceMove::InThread(w, alpha))) => {
            let comp1 = component_run(position, Component::One);
            let mut out: Vec<Move> = grow_to_node(&comp1, &w)
                .0
                .iter()
                .map(|m| or_prefixed(Component::One, m))
                .collect();
            out.push(or_prefixed(Component::One, &thread_move(&w, &alpha)));
            Reaction(out)
        }
        _ => Reaction::empty(),
    }
}

/// The replicative moves, shortest prefix of `w` first, that make `w` a
/// node of the position's thread structure.  Empty when it already is.
pub fn grow_to_node(tight_position: &Run, w: &Bits) -> Reaction {
    let mut nodes = bt_nodes(tight_position);
    let prefixes: Vec<Bits> = w.prefixes().collect();
    let mut out = Vec::new();
    for i in 0..w.len() {
        if !nodes.contains(&prefixes[i + 1]) {
            out.push(Move::new(format!("{}:", prefixes[i])).expect("valid move text"));
            nodes.insert(prefixes[i].child(false));
            nodes.insert(prefixes[i].child(true));
        }
    }
    Reaction(out)
}

/// E2's record: for each live leaf of the tight component, the loose-side
/// address its thread is being played against.  Values stay mutually
/// prefix-free; that is what makes the Case 3 owner unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafMap {
    entries: BTreeMap<Bits, Bits>,
}

impl LeafMap {
    /// The single root thread mapped to the loose root address.
    pub fn initial() -> LeafMap {
        LeafMap {
            entries: BTreeMap::from([(Bits::empty(), Bits::empty())]),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Bits, Bits)>) -> LeafMap {
        LeafMap {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, leaf: &Bits) -> Option<&Bits> {
        self.entries.get(leaf)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Bits, &Bits)> {
        self.entries.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Bits> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// No value is a prefix of another entry's value.
    pub fn values_prefix_free(&self) -> bool {
        let values: Vec<&Bits> = self.entries.values().collect();
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                if a.is_prefix_of(b) || b.is_prefix_of(a) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2State {
    pub f: LeafMap,
}

impl E2State {
    pub fn initial() -> E2State {
        E2State {
            f: LeafMap::initial(),
        }
    }
}

impl Default for E2State {
    fn default() -> E2State {
        E2State::initial()
    }
}

/// E2's answer to the newest adversary move.  The position parameter is
/// part of the reaction interface but goes unused: f carries everything
/// the routine consults.
pub fn e2_react(state: E2State, _position: &Run, adversary: &LabMove) -> (E2State, Reaction) {
    if adversary.player != Player::Bot {
        return (state, Reaction::empty());
    }
    let Some((component, inner)) = parse_or_move(&adversary.mv) else {
        return (state, Reaction::empty());
    };
    match (component, parse_surface_move(&inner)) {
        // Adversary splits tight leaf w: thread w0 and w1 both continue
        // the game f(w) was tracking, against its two child addresses.
        (Component::Two, Some(SurfaceMove::Replicate(w))) => {
            let Some(v) = state.f.get(&w).cloned() else {
                return (state, Reaction::empty());
            };
            let mut entries = state.f.entries;
            entries.remove(&w);
            entries.insert(w.child(false), v.child(false));
            entries.insert(w.child(true), v.child(true));
            (
                E2State {
                    f: LeafMap { entries },
                },
                Reaction::empty(),
            )
        }
        // Adversary moves in tight threads at or below node w: repeat the
        // move on the loose side at every tracked address under w.
        (Component::Two, Some(SurfaceMove::InThread(w, alpha))) => {
            let under: Vec<(&Bits, &Bits)> = state
                .f
                .entries()
                .filter(|(leaf, _)| w.is_prefix_of(leaf))
                .collect();
            if under.is_empty() {
                return (state, Reaction::empty());
            }
            let reaction = under
                .iter()
                .map(|(_, v)| or_prefixed(Component::One, &thread_move(v, &alpha)))
                .collect();
            (state, reaction)
        }
        // Adversary moves on the loose side at address w.
        (Component::One, Some(SurfaceMove::InThread(w, beta))) => {
            let owners: Vec<Bits> = state
                .f
                .entries()
                .filter(|(_, v)| v.is_proper_prefix_of(&w))
                .map(|(leaf, _)| leaf.clone())
                .collect();
            debug_assert!(owners.len() <= 1, "prefix-free values admit one owner");
            if let [x] = owners.as_slice() {
                // w refines what thread x was tracking: retarget and answer
                // in that one thread.
                let mut entries = state.f.entries;
                entries.insert(x.clone(), w);
                let reaction = [or_prefixed(Component::Two, &thread_move(x, &beta))]
                    .into_iter()
                    .collect();
                (
                    E2State {
                        f: LeafMap { entries },
                    },
                    reaction,
                )
            } else {
                // w sits at or above tracked addresses (possibly none):
                // answer in every thread it covers.
                let reaction = state
                    .f
                    .entries()
                    .filter(|(_, v)| w.is_prefix_of(v))
                    .map(|(leaf, _)| or_prefixed(Component::Two, &thread_move(leaf, &beta)))
                    .collect();
                (state, reaction)
            }
        }
        _ => (state, Reaction::empty()),
    }
}

/// The branch of `sigma` whose projection mirrors pi's projection at `v`:
/// the first z among sigma's representatives, in lexicographic order, with
/// project(sigma, z) equal to the label-swapped project(pi, v).
pub fn find_counterpart_z(sigma: &Run, pi: &Run, v: &Bits) -> Option<Bits> {
    let target = project(pi, v).ok()?.swapped();
    representatives(sigma)
        .into_iter()
        .find(|z| project(sigma, z).as_ref() == Ok(&target))
}

fn thread_move(w: &Bits, alpha: &Move) -> Move {
    Move::new(format!("{w}.{alpha}")).expect("valid move text")
}
