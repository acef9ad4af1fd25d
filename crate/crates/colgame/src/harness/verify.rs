//! Post-hoc transcript checking.
//!
//! The verifier re-derives everything it can from the move list alone.
//! For machine transcripts it replays the ⊥ moves through the machine
//! and requires the recorded ⊤ moves to be exactly the replayed
//! emissions, then audits the machine's invariants on the replayed
//! (machine-causal) positions: the per-thread mirror law for e1, and the
//! leaf-map laws plus the counterpart-branch table for e2.
//!
//! Violations are breaches of the machine's own laws.  An adversary move
//! that is illegal, or a lost game, is reported through status and
//! winner, not as a violation; invariant audits stop at the adversary's
//! first offense, since the laws are only promised while ⊥ behaves.

use crate::bits::Bits;
use crate::game::{classify, component_run, winner, Component, GameExpr, RunStatus};
use crate::harness::runmatch::MachineKind;
use crate::harness::transcript::Transcript;
use crate::recurrence::{bt_leaves, project, representatives};
use crate::run::{LabMove, Move, Player, Run};
use crate::strategy::{e1_react, e2_react, find_counterpart_z, E2State, LeafMap};

/// Projection winners for one recurrence-shaped part of the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// "1" or "2" for a disjunct, "whole" when the game itself is the
    /// recurrence.
    pub label: String,
    pub operator: &'static str,
    /// Winner of the inner game on the projection along each
    /// representative branch.
    pub rep_winners: Vec<(Bits, Player)>,
}

/// One representative branch of the final tight position and the loose
/// branch found to mirror it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterpartRow {
    pub rep: Bits,
    pub z: Option<Bits>,
    /// Whether the addresses tracked for this branch form a chain whose
    /// endpoint's loose thread mirrors the branch's tight thread.  Every
    /// infinite extension of that endpoint then witnesses the
    /// counterpart in full.
    pub chain_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub status: RunStatus,
    pub winner: Player,
    pub components: Vec<ComponentReport>,
    /// Empty unless the transcript is an e2 match with a fully legal run.
    pub counterparts: Vec<CounterpartRow>,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_transcript(game: &GameExpr, t: &Transcript) -> VerifyReport {
    let run = t.run();
    let status = classify(game, &run);
    let mut report = VerifyReport {
        status,
        winner: winner(game, &run),
        components: component_reports(game, &run),
        counterparts: Vec::new(),
        violations: Vec::new(),
    };

    match t.machine_name.parse::<MachineKind>() {
        Ok(MachineKind::None) => {}
        Ok(machine) => audit_machine(t, machine, status, &mut report),
        Err(e) => report.violations.push(e.to_string()),
    }
    report
}

fn recurrence_operand(e: &GameExpr) -> Option<(&'static str, &GameExpr)> {
    match e {
        GameExpr::Tight(inner) => Some(("tight", inner)),
        GameExpr::Loose(inner) => Some(("loose", inner)),
        GameExpr::CoTight(inner) => Some(("co-tight", inner)),
        GameExpr::CoLoose(inner) => Some(("co-loose", inner)),
        _ => None,
    }
}

fn component_reports(game: &GameExpr, run: &Run) -> Vec<ComponentReport> {
    let mut out = Vec::new();
    let mut add = |label: &str, e: &GameExpr, sub: &Run| {
        let Some((operator, inner)) = recurrence_operand(e) else {
            return;
        };
        let rep_winners = representatives(sub)
            .into_iter()
            .map(|v| {
                let proj = project(sub, &v)
                    .expect("representatives are decisive for their own run");
                let w = winner(inner, &proj);
                (v, w)
            })
            .collect();
        out.push(ComponentReport {
            label: label.to_string(),
            operator,
            rep_winners,
        });
    };
    match game {
        GameExpr::Or(a, b) => {
            add("1", a, &component_run(run, Component::One));
            add("2", b, &component_run(run, Component::Two));
        }
        other => add("whole", other, run),
    }
    drop(add);
    out
}

/// Iteration index of the adversary's first offense, if any: machine
/// invariants are only audited for iterations strictly before it.
fn bot_offense_iteration(status: RunStatus, moves: &[LabMove]) -> Option<usize> {
    match status {
        RunStatus::IllegalBy {
            offender: Player::Bot,
            index,
        } => Some(
            moves[..index]
                .iter()
                .filter(|lm| lm.player == Player::Bot)
                .count(),
        ),
        _ => None,
    }
}

fn audit_machine(
    t: &Transcript,
    machine: MachineKind,
    status: RunStatus,
    report: &mut VerifyReport,
) {
    if let RunStatus::IllegalBy {
        offender: Player::Top,
        index,
    } = status
    {
        report
            .violations
            .push(format!("machine move at index {index} is the first offense"));
    }

    let bot_moves: Vec<LabMove> = t
        .moves
        .iter()
        .filter(|lm| lm.player == Player::Bot)
        .cloned()
        .collect();
    let cutoff = bot_offense_iteration(status, &t.moves).unwrap_or(usize::MAX);

    let mut seen = Run::empty();
    let mut emissions: Vec<Move> = Vec::new();
    let mut state = E2State::initial();
    // f before iteration i sits at history[i].
    let mut history: Vec<LeafMap> = vec![state.f.clone()];

    for (i, lm) in bot_moves.iter().enumerate() {
        seen.push(lm.clone());
        let batch = match machine {
            MachineKind::E1 => e1_react(&seen, lm),
            MachineKind::E2 => {
                let (next, r) = e2_react(state, &seen, lm);
                state = next;
                r
            }
            MachineKind::None => unreachable!("filtered by caller"),
        };
        for mv in batch.moves() {
            seen.push(LabMove::new(Player::Top, mv.clone()));
            emissions.push(mv.clone());
        }
        if machine == MachineKind::E2 {
            history.push(state.f.clone());
            audit_snapshot(t, i, &state.f, &mut report.violations);
        }
        if i < cutoff {
            match machine {
                MachineKind::E1 => audit_mirror(&seen, i, &mut report.violations),
                MachineKind::E2 => {
                    audit_leaf_map(&seen, i, &history, &mut report.violations)
                }
                MachineKind::None => unreachable!(),
            }
        }
    }

    let recorded_tops: Vec<Move> = t
        .moves
        .iter()
        .filter(|lm| lm.player == Player::Top)
        .map(|lm| lm.mv.clone())
        .collect();
    if emissions != recorded_tops {
        report.violations.push(format!(
            "recorded ⊤ moves differ from the machine's replayed emissions \
             (recorded {}, replayed {})",
            recorded_tops.len(),
            emissions.len()
        ));
    }

    if machine == MachineKind::E2 {
        if t.snapshots.len() != bot_moves.len() {
            report.violations.push(format!(
                "{} snapshots for {} adversary moves",
                t.snapshots.len(),
                bot_moves.len()
            ));
        }
        if status == RunStatus::Legal {
            counterpart_table(&seen, &history, report);
        }
    } else if !t.snapshots.is_empty() {
        report
            .violations
            .push("leaf-map snapshots in a non-e2 transcript".to_string());
    }
}

/// Mirror law at a batch boundary: along every representative branch of
/// the joint thread structure, the loose projection is the tight
/// projection with the players swapped.
fn audit_mirror(seen: &Run, iteration: usize, violations: &mut Vec<String>) {
    let tight = component_run(seen, Component::One);
    let loose = component_run(seen, Component::Two);
    let joint: Run = tight.iter().chain(loose.iter()).cloned().collect();
    for v in representatives(&joint) {
        match (project(&loose, &v), project(&tight, &v)) {
            (Ok(l), Ok(tt)) => {
                if l != tt.swapped() {
                    violations.push(format!(
                        "mirror law broken at iteration {iteration}, branch {v}"
                    ));
                }
            }
            _ => violations.push(format!(
                "projection failed at iteration {iteration}, branch {v}"
            )),
        }
    }
}

fn audit_snapshot(t: &Transcript, iteration: usize, f: &LeafMap, violations: &mut Vec<String>) {
    let Some(snap) = t.snapshots.get(iteration) else {
        violations.push(format!("no snapshot for iteration {iteration}"));
        return;
    };
    let replayed: Vec<(Bits, Bits)> = f
        .entries()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if snap.f != replayed {
        violations.push(format!(
            "snapshot at iteration {iteration} differs from the replayed leaf map"
        ));
    }
}

/// Leaf-map laws after iteration i: values pairwise prefix-free, domain
/// equal to the tight component's current leaves, and each value an
/// extension of its ancestor's previous value.
fn audit_leaf_map(seen: &Run, iteration: usize, history: &[LeafMap], violations: &mut Vec<String>) {
    let f = &history[iteration + 1];
    if !f.values_prefix_free() {
        violations.push(format!(
            "leaf-map values not prefix-free after iteration {iteration}"
        ));
    }
    let leaves = bt_leaves(&component_run(seen, Component::Two));
    let domain: std::collections::BTreeSet<Bits> = f.domain().cloned().collect();
    if domain != leaves {
        violations.push(format!(
            "leaf-map domain differs from the tight leaf set after iteration {iteration}"
        ));
    }
    let prev = &history[iteration];
    for (u, val) in f.entries() {
        let ancestors: Vec<(&Bits, &Bits)> =
            prev.entries().filter(|(pu, _)| pu.is_prefix_of(u)).collect();
        let ok = match ancestors.as_slice() {
            [(_, pv)] => pv.is_prefix_of(val),
            _ => false,
        };
        if !ok {
            violations.push(format!(
                "leaf-map growth not monotone at leaf {u} after iteration {iteration}"
            ));
        }
    }
}

/// For every representative branch v of the final tight position, find
/// a loose branch z whose projection mirrors v's, and check the chain
/// of addresses tracked for v: they must extend one another, and the
/// loose thread at the last of them must mirror v's tight thread.
fn counterpart_table(seen: &Run, history: &[LeafMap], report: &mut VerifyReport) {
    let loose = component_run(seen, Component::One);
    let tight = component_run(seen, Component::Two);
    for v in representatives(&tight) {
        let z = find_counterpart_z(&loose, &tight, &v);
        if z.is_none() {
            report
                .violations
                .push(format!("no counterpart branch for representative {v}"));
        }
        let chain_ok = chain_condition(&loose, &tight, history, &v);
        if !chain_ok {
            report.violations.push(format!(
                "tracked addresses for representative {v} do not pin a mirroring loose branch"
            ));
        }
        report.counterparts.push(CounterpartRow { rep: v, z, chain_ok });
    }
}

fn chain_condition(loose: &Run, tight: &Run, history: &[LeafMap], v: &Bits) -> bool {
    let mut tracked = Vec::with_capacity(history.len());
    for f in history {
        let mut holders = f.entries().filter(|(u, _)| u.is_prefix_of(v));
        match (holders.next(), holders.next()) {
            (Some((_, val)), None) => tracked.push(val),
            _ => return false,
        }
    }
    let Some(last) = tracked.last() else {
        return false;
    };
    // Every infinite branch through `last` carries the same loose
    // projection, so mirroring at `last` stands for the whole bundle.
    tracked.iter().all(|val| val.comparable(last))
        && match (project(loose, last), project(tight, v)) {
            (Ok(l), Ok(t)) => l == t.swapped(),
            _ => false,
        }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::harness::adversary::Adversary;
    use crate::harness::runmatch::{run_match, MatchConfig};
    use crate::run::Player::*;
    use crate::strategy::{e1_game, e2_game};
    use crate::tree::GameTree;

    fn a0() -> GameExpr {
        GameExpr::tree(GameTree::leaf(Bot).with_edge(Top, "a", GameTree::leaf(Top)))
    }

    // ⊥ owns the edges here, so scripted ⊥ probes stay legal.
    fn ab() -> GameExpr {
        GameExpr::tree(GameTree::leaf(Bot).with_edge(Bot, "b", GameTree::leaf(Top)))
    }

    fn ab2() -> GameExpr {
        GameExpr::tree(GameTree::leaf(Bot).with_edge(
            Bot,
            "b",
            GameTree::leaf(Top).with_edge(Bot, "b", GameTree::leaf(Bot)),
        ))
    }

    fn scripted(moves: &[&str]) -> Adversary {
        Adversary::script(moves.iter().map(|m| Move::new(*m).unwrap()).collect())
    }

    fn cfg(seed: u64) -> MatchConfig {
        MatchConfig {
            max_moves: 40,
            seed,
            interleaving_fuzz: false,
        }
    }

    #[test]
    fn empty_loose_transcript_is_legal_and_bot_won() {
        let game = GameExpr::loose(a0());
        let t = Transcript {
            game_text: crate::dsl::serialize_game(&game),
            machine_name: "none".to_string(),
            seed: 0,
            moves: vec![],
            snapshots: vec![],
        };
        let r = verify_transcript(&game, &t);
        assert_eq!(r.status, RunStatus::Legal);
        assert_eq!(r.winner, Bot);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].label, "whole");
        assert_eq!(r.components[0].operator, "loose");
        assert_eq!(r.components[0].rep_winners.len(), 1);
        assert_eq!(r.components[0].rep_winners[0].1, Bot);
        assert!(r.clean());
    }

    #[test]
    fn replicative_move_in_a_loose_game_is_an_offense_not_a_violation() {
        let game = GameExpr::loose(a0());
        let t = Transcript {
            game_text: crate::dsl::serialize_game(&game),
            machine_name: "none".to_string(),
            seed: 0,
            moves: vec![LabMove::new(Bot, Move::new(":").unwrap())],
            snapshots: vec![],
        };
        let r = verify_transcript(&game, &t);
        assert_eq!(
            r.status,
            RunStatus::IllegalBy {
                offender: Bot,
                index: 0
            }
        );
        assert_eq!(r.winner, Top);
        assert!(r.clean());
    }

    #[test]
    fn unanswered_probe_shows_in_the_component_rows() {
        let game = e1_game(ab());
        let t = Transcript {
            game_text: crate::dsl::serialize_game(&game),
            machine_name: "none".to_string(),
            seed: 0,
            moves: vec![LabMove::new(Bot, Move::new("2..b").unwrap())],
            snapshots: vec![],
        };
        let r = verify_transcript(&game, &t);
        assert_eq!(r.status, RunStatus::Legal);
        // With no machine in play both disjuncts happen to sit ⊤-won:
        // the co-tight side on its empty run, the loose side because the
        // probe walked every thread to the ⊤ node.
        assert_eq!(r.winner, Top);
        let comp1 = &r.components[0];
        assert_eq!(comp1.operator, "co-tight");
        assert_eq!(comp1.rep_winners, vec![(Bits::parse("0").unwrap(), Top)]);
        let comp2 = &r.components[1];
        assert_eq!(comp2.operator, "loose");
        assert_eq!(comp2.rep_winners, vec![(Bits::parse("0").unwrap(), Top)]);
        assert!(r.clean());
    }

    #[test]
    fn e1_match_verifies_clean() {
        let game = e1_game(ab2());
        let t = run_match(&game, MachineKind::E1, scripted(&["2..b", "2.0.b"]), cfg(4));
        let r = verify_transcript(&game, &t);
        assert_eq!(r.status, RunStatus::Legal);
        assert_eq!(r.winner, Top);
        assert!(r.clean(), "violations: {:?}", r.violations);
        assert!(r.counterparts.is_empty());
    }

    #[test]
    fn e2_match_verifies_clean_with_counterparts() {
        let game = e2_game(ab());
        let t = run_match(&game, MachineKind::E2, scripted(&["2.:", "2.0.b"]), cfg(4));
        let r = verify_transcript(&game, &t);
        assert_eq!(r.status, RunStatus::Legal);
        assert!(r.clean(), "violations: {:?}", r.violations);
        assert!(!r.counterparts.is_empty());
        assert!(r.counterparts.iter().all(|c| c.z.is_some() && c.chain_ok));
    }

    // Two bare splits leave every projection empty, so the least loose
    // representative ("0") mirrors the rep over tight leaf 1 even though
    // the tracked address for that thread went down the other side.
    #[test]
    fn counterpart_chain_follows_the_tracked_thread_not_the_least_rep() {
        let game = e2_game(ab());
        let t = run_match(&game, MachineKind::E2, scripted(&["2.:", "2.0:"]), cfg(4));
        let r = verify_transcript(&game, &t);
        assert_eq!(r.status, RunStatus::Legal);
        assert!(r.clean(), "violations: {:?}", r.violations);
        let row = r
            .counterparts
            .iter()
            .find(|c| c.rep == Bits::parse("1").unwrap())
            .expect("a representative over tight leaf 1");
        assert_eq!(row.z, Some(Bits::parse("0").unwrap()));
        assert!(row.chain_ok);
    }

    #[test]
    fn tampered_machine_moves_are_flagged() {
        let game = e1_game(ab());
        let mut t = run_match(&game, MachineKind::E1, scripted(&["2..b"]), cfg(4));
        t.moves[1] = LabMove::new(Top, Move::new("1.:").unwrap());
        let r = verify_transcript(&game, &t);
        assert!(!r.clean());
    }

    #[test]
    fn injected_illegal_move_keeps_the_machine_clean() {
        let game = e1_game(ab2());
        let t = run_match(
            &game,
            MachineKind::E1,
            scripted(&["2..b", ":", "2.0.b"]),
            cfg(4),
        );
        let r = verify_transcript(&game, &t);
        assert_eq!(
            r.status,
            RunStatus::IllegalBy {
                offender: Bot,
                index: 2
            }
        );
        assert_eq!(r.winner, Top);
        assert!(r.clean(), "violations: {:?}", r.violations);
    }

    #[test]
    fn e2_snapshot_tampering_is_flagged() {
        let game = e2_game(a0());
        let mut t = run_match(&game, MachineKind::E2, scripted(&["2.:"]), cfg(4));
        t.snapshots[0].f.pop();
        let r = verify_transcript(&game, &t);
        assert!(!r.clean());
    }
}
