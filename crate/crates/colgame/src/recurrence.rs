//! The replication layer.
//!
//! A replicated game is played in threads named by bitstrings.  Surface
//! moves either split a thread (`w:`, tight games only) or play an inner
//! move inside every thread extending an address (`w.m`).  Projection to
//! a branch recovers the inner run a single thread sees.
//!
//! Win conditions and thread-local legality quantify over all infinite
//! branches.  Finitely many branches decide those quantifiers: the
//! representatives of a run cover every projection class, so checks loop
//! over them instead.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::Bits;
use crate::game::{self, GameExpr, IllegalRunError, RunStatus};
use crate::run::{LabMove, Move, Player, Run};

/// A surface move of a replicated game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceMove {
    /// `w:` splits leaf `w` in two.
    Replicate(Bits),
    /// `w.m` plays `m` in every thread extending `w`.
    InThread(Bits, Move),
}

/// Parse a surface move: bits up to the first `.` or `:`, then the shape
/// decides.  `None` for anything else, which the rules treat as illegal.
pub fn parse_surface_move(mv: &Move) -> Option<SurfaceMove> {
    let text = mv.as_str();
    let split = text
        .bytes()
        .position(|b| b != b'0' && b != b'1')
        .unwrap_or(text.len());
    let addr = Bits::parse(&text[..split])?;
    match text.as_bytes().get(split) {
        Some(b':') if split + 1 == text.len() => Some(SurfaceMove::Replicate(addr)),
        Some(b'.') if split + 1 < text.len() => {
            let inner = Move::new(&text[split + 1..]).ok()?;
            Some(SurfaceMove::InThread(addr, inner))
        }
        _ => None,
    }
}

/// Like `parse_surface_move` but only accepts the `w.m` shape, the only
/// one loose games admit.
pub fn parse_thread_move(mv: &Move) -> Option<(Bits, Move)> {
    match parse_surface_move(mv)? {
        SurfaceMove::InThread(w, inner) => Some((w, inner)),
        SurfaceMove::Replicate(_) => None,
    }
}

/// The thread tree a position has grown: the empty address, plus both
/// children of every replicated address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BtView {
    pub nodes: BTreeSet<Bits>,
    pub leaves: BTreeSet<Bits>,
}

impl BtView {
    pub fn of(position: &Run) -> BtView {
        let mut nodes = BTreeSet::new();
        nodes.insert(Bits::empty());
        for lm in position.iter() {
            if let Some(SurfaceMove::Replicate(w)) = parse_surface_move(&lm.mv) {
                nodes.insert(w.child(false));
                nodes.insert(w.child(true));
            }
        }
        let leaves = nodes
            .iter()
            .filter(|n| !nodes.iter().any(|m| n.is_proper_prefix_of(m)))
            .cloned()
            .collect();
        BtView { nodes, leaves }
    }
}

pub fn bt_nodes(position: &Run) -> BTreeSet<Bits> {
    BtView::of(position).nodes
}

pub fn bt_leaves(position: &Run) -> BTreeSet<Bits> {
    BtView::of(position).leaves
}

/// Every address occurring in the run's surface moves, replicative or not.
pub fn surface_addresses(run: &Run) -> BTreeSet<Bits> {
    run.iter()
        .filter_map(|lm| match parse_surface_move(&lm.mv) {
            Some(SurfaceMove::Replicate(w)) | Some(SurfaceMove::InThread(w, _)) => Some(w),
            None => None,
        })
        .collect()
}

/// A branch is decisive when no address of the run properly extends it:
/// all infinite extensions of the branch then see the same projection.
pub fn is_decisive(branch: &Bits, run: &Run) -> bool {
    surface_addresses(run)
        .iter()
        .all(|a| !branch.is_proper_prefix_of(a))
}

/// Decisive branches covering every projection class of the run.
///
/// Close the address set under prefixes; for each member with a child
/// outside the closure, take the least such child.  Distinct classes may
/// share a representative's projection, but none is missed.
pub fn representatives(run: &Run) -> BTreeSet<Bits> {
    representatives_of(&surface_addresses(run))
}

pub(crate) fn representatives_of(addrs: &BTreeSet<Bits>) -> BTreeSet<Bits> {
    let mut closure: BTreeSet<Bits> = BTreeSet::new();
    closure.insert(Bits::empty());
    for a in addrs {
        closure.extend(a.prefixes());
    }
    let mut reps = BTreeSet::new();
    for t in &closure {
        let c0 = t.child(false);
        if !closure.contains(&c0) {
            reps.insert(c0);
            continue;
        }
        let c1 = t.child(true);
        if !closure.contains(&c1) {
            reps.insert(c1);
        }
    }
    reps
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("branch {branch:?} is not decisive: address {address:?} properly extends it, project needs a longer branch")]
pub struct NonDecisiveError {
    pub branch: Bits,
    pub address: Bits,
}

/// The run a thread on `branch` sees: keep `w.m` moves with `w` a prefix
/// of the branch, strip the address, drop everything else.
pub fn project(run: &Run, branch: &Bits) -> Result<Run, NonDecisiveError> {
    if let Some(address) = surface_addresses(run)
        .into_iter()
        .find(|a| branch.is_proper_prefix_of(a))
    {
        return Err(NonDecisiveError {
            branch: branch.clone(),
            address,
        });
    }
    Ok(project_unchecked(run, branch))
}

pub(crate) fn project_unchecked(run: &Run, branch: &Bits) -> Run {
    run.iter()
        .filter_map(|lm| match parse_surface_move(&lm.mv) {
            Some(SurfaceMove::InThread(w, inner)) if w.is_prefix_of(branch) => {
                Some(LabMove::new(lm.player, inner))
            }
            _ => None,
        })
        .collect()
}

/// Would playing inner move `lm` at address `w` keep every thread legal?
///
/// Quantifies over representatives of the position's addresses plus `w`,
/// restricted to branches extending `w`; each sees its projection of the
/// position extended by `lm`.
fn threads_accept(base: &GameExpr, position: &Run, w: &Bits, lm: &LabMove) -> bool {
    let mut addrs = surface_addresses(position);
    addrs.insert(w.clone());
    representatives_of(&addrs)
        .iter()
        .filter(|b| w.is_prefix_of(b))
        .all(|b| game::step_legal(base, &project_unchecked(position, b), lm))
}

/// One-step legality in a tight game over co-free `base`; the position is
/// assumed legal.  Splitting is the environment's move and only at a
/// leaf; an inner move needs an existing node and every thread's consent.
pub(crate) fn tight_step(base: &GameExpr, position: &Run, lm: &LabMove) -> bool {
    match parse_surface_move(&lm.mv) {
        Some(SurfaceMove::Replicate(w)) => {
            lm.player == Player::Bot && BtView::of(position).leaves.contains(&w)
        }
        Some(SurfaceMove::InThread(w, inner)) => {
            BtView::of(position).nodes.contains(&w)
                && threads_accept(base, position, &w, &LabMove::new(lm.player, inner))
        }
        None => false,
    }
}

/// One-step legality in a loose game: no splitting, any address.
pub(crate) fn loose_step(base: &GameExpr, position: &Run, lm: &LabMove) -> bool {
    match parse_thread_move(&lm.mv) {
        Some((w, inner)) => threads_accept(base, position, &w, &LabMove::new(lm.player, inner)),
        None => false,
    }
}

pub fn tight_legal(base: &GameExpr, position: &Run, lm: &LabMove) -> bool {
    tight_step(&base.co_normalized(), position, lm)
}

pub fn loose_legal(base: &GameExpr, position: &Run, lm: &LabMove) -> bool {
    loose_step(&base.co_normalized(), position, lm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecKind {
    Tight,
    Loose,
}

/// Winner of a legal run of a replicated game: the machine must win the
/// projection at every representative.
pub(crate) fn rec_winner_legal(_kind: RecKind, base: &GameExpr, run: &Run) -> Player {
    let all_top = representatives(run)
        .iter()
        .all(|b| game::winner_legal(base, &project_unchecked(run, b)) == Player::Top);
    if all_top {
        Player::Top
    } else {
        Player::Bot
    }
}

/// Winner of a run of `tight base` / `loose base`.  The run must be
/// legal; an illegal one is reported, not judged.
pub fn rec_winner(kind: RecKind, base: &GameExpr, run: &Run) -> Result<Player, IllegalRunError> {
    let base = base.co_normalized();
    let step = match kind {
        RecKind::Tight => tight_step,
        RecKind::Loose => loose_step,
    };
    for (index, lm) in run.iter().enumerate() {
        if !step(&base, &run.prefix(index), lm) {
            return Err(IllegalRunError {
                offender: lm.player,
                index,
            });
        }
    }
    Ok(rec_winner_legal(kind, &base, run))
}

/// Classification of a bare replicated run without wrapping it in a
/// `GameExpr` first.
pub fn rec_classify(kind: RecKind, base: &GameExpr, run: &Run) -> RunStatus {
    let base = base.co_normalized();
    let step = match kind {
        RecKind::Tight => tight_step,
        RecKind::Loose => loose_step,
    };
    for (index, lm) in run.iter().enumerate() {
        if !step(&base, &run.prefix(index), lm) {
            return RunStatus::IllegalBy {
                offender: lm.player,
                index,
            };
        }
    }
    RunStatus::Legal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::{parse_labmove, Player::*};
    use crate::tree::GameTree;

    fn a0() -> GameExpr {
        GameExpr::tree(GameTree::leaf(Bot).with_edge(Top, "a", GameTree::leaf(Top)))
    }

    fn run(moves: &[&str]) -> Run {
        moves.iter().map(|s| parse_labmove(s).unwrap()).collect()
    }

    fn lm(s: &str) -> LabMove {
        parse_labmove(s).unwrap()
    }

    fn b(s: &str) -> Bits {
        Bits::parse(s).unwrap()
    }

    fn bset(items: &[&str]) -> BTreeSet<Bits> {
        items.iter().map(|s| b(s)).collect()
    }

    #[test]
    fn surface_move_shapes() {
        let m = |s: &str| Move::new(s).unwrap();
        assert_eq!(
            parse_surface_move(&m(":")),
            Some(SurfaceMove::Replicate(b("")))
        );
        assert_eq!(
            parse_surface_move(&m("01:")),
            Some(SurfaceMove::Replicate(b("01")))
        );
        assert_eq!(
            parse_surface_move(&m(".a")),
            Some(SurfaceMove::InThread(b(""), m("a")))
        );
        assert_eq!(
            parse_surface_move(&m("01.2.x")),
            Some(SurfaceMove::InThread(b("01"), m("2.x")))
        );
        assert_eq!(parse_surface_move(&m("a")), None);
        assert_eq!(parse_surface_move(&m("01")), None);
        assert_eq!(parse_surface_move(&m("0:1")), None);
        assert_eq!(parse_surface_move(&m("01.")), None);
    }

    #[test]
    fn thread_tree_growth() {
        assert_eq!(bt_nodes(&Run::empty()), bset(&[""]));
        assert_eq!(bt_leaves(&Run::empty()), bset(&[""]));

        let one = run(&["B :"]);
        assert_eq!(bt_nodes(&one), bset(&["", "0", "1"]));
        assert_eq!(bt_leaves(&one), bset(&["0", "1"]));

        let two = run(&["B :", "B 0:"]);
        assert_eq!(bt_nodes(&two), bset(&["", "0", "1", "00", "01"]));
        assert_eq!(bt_leaves(&two), bset(&["00", "01", "1"]));
    }

    #[test]
    fn node_set_laws_after_legal_growth() {
        let pos = run(&["B :", "B 1:", "B 10:"]);
        let view = BtView::of(&pos);
        for n in &view.nodes {
            for p in n.prefixes() {
                assert!(view.nodes.contains(&p), "prefix-closed");
            }
            if !n.is_empty() {
                let mut sibling = Vec::new();
                for i in 0..n.len() - 1 {
                    sibling.push(n.bit(i).unwrap());
                }
                sibling.push(!n.bit(n.len() - 1).unwrap());
                let sibling = sibling
                    .iter()
                    .fold(Bits::empty(), |acc, &bit| acc.child(bit));
                assert!(view.nodes.contains(&sibling), "sibling-complete");
            }
        }
    }

    #[test]
    fn representative_construction() {
        assert_eq!(representatives_of(&bset(&[""])), bset(&["0"]));
        assert_eq!(representatives_of(&bset(&["", "0"])), bset(&["00", "1"]));
        assert_eq!(representatives_of(&bset(&["0", "1"])), bset(&["00", "10"]));
        assert_eq!(representatives(&Run::empty()), bset(&["0"]));
        assert_eq!(representatives(&run(&["T .a"])), bset(&["0"]));
    }

    #[test]
    fn projection() {
        assert_eq!(
            project(&run(&["T .a"]), &b("")).unwrap(),
            run(&["T a"])
        );
        assert_eq!(
            project(&run(&["B 0.a", "T 1.b"]), &b("0")).unwrap(),
            run(&["B a"])
        );
        assert_eq!(
            project(&run(&["B :", "T 0.a", "T 1.b"]), &b("01")).unwrap(),
            run(&["T a"])
        );
    }

    #[test]
    fn projection_demands_decisive_branch() {
        let r = run(&["T 01.a"]);
        assert!(is_decisive(&b("01"), &r));
        assert!(is_decisive(&b("011"), &r));
        assert!(!is_decisive(&b("0"), &r));
        let err = project(&r, &b("0")).unwrap_err();
        assert_eq!(err.address, b("01"));
    }

    #[test]
    fn tight_replication_rules() {
        let g = a0();
        assert!(tight_legal(&g, &Run::empty(), &lm("B :")));
        assert!(!tight_legal(&g, &Run::empty(), &lm("T :")));
        assert!(!tight_legal(&g, &Run::empty(), &lm("T 0.a")));
        let split = run(&["B :"]);
        assert!(tight_legal(&g, &split, &lm("B 0:")));
        assert!(tight_legal(&g, &split, &lm("B 1:")));
        assert!(!tight_legal(&g, &split, &lm("B :")), "root is no longer a leaf");
        let deeper = run(&["B :", "B 0:"]);
        assert!(!tight_legal(&g, &deeper, &lm("B 0:")));
        assert!(tight_legal(&g, &deeper, &lm("B 1:")));
    }

    #[test]
    fn tight_inner_moves_consult_every_thread() {
        let g = a0();
        assert!(tight_legal(&g, &Run::empty(), &lm("T .a")));
        assert!(
            !tight_legal(&g, &run(&["T .a"]), &lm("T .a")),
            "every thread already saw a"
        );
        let pos = run(&["B :", "T 0.a"]);
        assert!(!tight_legal(&g, &pos, &lm("T .a")), "thread 0 already saw a");
        assert!(tight_legal(&g, &pos, &lm("T 1.a")));
    }

    #[test]
    fn loose_moves_are_thread_moves_at_any_address() {
        let g = a0();
        assert!(!loose_legal(&g, &Run::empty(), &lm("B :")));
        assert!(loose_legal(&g, &Run::empty(), &lm("T 0110.a")));
        let pos = run(&["T 0.a"]);
        assert!(!loose_legal(&g, &pos, &lm("T .a")), "thread 0 would see a twice");
        assert!(loose_legal(&g, &pos, &lm("T 1.a")));
    }

    #[test]
    fn winners_quantify_over_threads() {
        let g = a0();
        assert_eq!(
            rec_winner(RecKind::Tight, &g, &run(&["B :", "T 0.a"])).unwrap(),
            Bot,
            "thread 1 never saw a"
        );
        assert_eq!(rec_winner(RecKind::Loose, &g, &run(&["T .a"])).unwrap(), Top);
        assert_eq!(rec_winner(RecKind::Loose, &g, &Run::empty()).unwrap(), Bot);
    }

    #[test]
    fn rec_winner_reports_illegal_runs() {
        let g = a0();
        let err = rec_winner(RecKind::Loose, &g, &run(&["B :"])).unwrap_err();
        assert_eq!(err.offender, Bot);
        assert_eq!(err.index, 0);
    }
}
