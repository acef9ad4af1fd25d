//! Command-line front end.
//!
//! Exit codes: 0 when the requested property holds (or the action plainly
//! succeeds), 1 when a checked property fails, 2 on usage, parse, or I/O
//! trouble.

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use colgame::{
    base_alphabet, component_run, parse_game, parse_script, project, representatives, run_match,
    static_counterexample, surface_alphabet, verify_transcript, Adversary, Bits, Component,
    GameExpr, MachineKind, MatchConfig, Move, Player, Run, RunStatus, Transcript, VerifyReport,
};

#[derive(Parser)]
#[command(name = "colgame", about = "Game-semantics match runner and checker")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play a machine against an adversary and write the transcript.
    Simulate {
        /// Game file, or inline DSL when the value starts with "(".
        #[arg(long)]
        game: String,
        /// e1, e2, or none.
        #[arg(long)]
        machine: String,
        /// "random" or "script:<file>" with one move per line.
        #[arg(long)]
        adversary: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_moves: u64,
        /// Let the adversary queue several offers between reaction batches.
        #[arg(long)]
        fuzz: bool,
        #[arg(long)]
        out: String,
    },
    /// Check a transcript: status, winner, projections, machine laws.
    Verify {
        #[arg(long)]
        game: String,
        #[arg(long)]
        transcript: String,
    },
    /// Bounded search for a delay that flips a winner.
    StaticCheck {
        #[arg(long)]
        game: String,
        #[arg(long)]
        max_len: usize,
        /// Extra move spellings appended to the derived alphabet.
        #[arg(long = "token")]
        tokens: Vec<String>,
    },
    /// Run many machine matches over random static trees and verify each.
    EquivTest {
        /// t2l plays e1, l2t plays e2.
        #[arg(long)]
        direction: String,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_moves: u64,
    },
    /// Print the base-game run a component's thread sees along a branch.
    Project {
        #[arg(long)]
        transcript: String,
        #[arg(long)]
        component: String,
        #[arg(long)]
        branch: String,
    },
    /// Print representative branches of a component's thread structure.
    Reps {
        #[arg(long)]
        transcript: String,
        #[arg(long)]
        component: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Simulate {
            game,
            machine,
            adversary,
            seed,
            max_moves,
            fuzz,
            out,
        } => {
            let game = load_game(&game)?;
            let machine: MachineKind = machine.parse()?;
            let adversary = load_adversary(&adversary)?;
            let cfg = MatchConfig {
                max_moves: max_moves as usize,
                seed,
                interleaving_fuzz: fuzz,
            };
            let t = run_match(&game, machine, adversary, cfg);
            fs::write(&out, t.serialize()).with_context(|| format!("writing {out}"))?;
            println!("wrote {out}: {} moves", t.moves.len());
            Ok(true)
        }
        Cmd::Verify { game, transcript } => {
            let game = load_game(&game)?;
            let t = load_transcript(&transcript)?;
            let report = verify_transcript(&game, &t);
            print_report(&report);
            Ok(report.clean())
        }
        Cmd::StaticCheck {
            game,
            max_len,
            tokens,
        } => {
            let game = load_game(&game)?;
            let mut alphabet = derived_alphabet(&game);
            for t in tokens {
                let m = Move::new(&t).map_err(|e| anyhow!("--token {t:?}: {e}"))?;
                if !alphabet.contains(&m) {
                    alphabet.push(m);
                }
            }
            let witness = static_counterexample(&game, max_len, &alphabet)?;
            match witness {
                None => {
                    println!(
                        "static: yes (runs up to {max_len} moves over {} spellings)",
                        alphabet.len()
                    );
                    Ok(true)
                }
                Some((p, delayed, original)) => {
                    println!("static: no");
                    println!("player: {}", p.label());
                    println!("original: {}", fmt_run(&original));
                    println!("delayed:  {}", fmt_run(&delayed));
                    Ok(false)
                }
            }
        }
        Cmd::EquivTest {
            direction,
            trials,
            seed,
            depth,
            max_moves,
        } => {
            let machine = match direction.as_str() {
                "t2l" => MachineKind::E1,
                "l2t" => MachineKind::E2,
                other => return Err(anyhow!("unknown direction {other:?} (expected t2l or l2t)")),
            };
            let mut failed = 0u64;
            for i in 0..trials {
                let trial_seed = seed.wrapping_add(i);
                let gt = colgame::random_static_tree(trial_seed, depth, 2)?;
                let base = GameExpr::tree(gt.tree);
                let game = match machine {
                    MachineKind::E1 => colgame::e1_game(base),
                    _ => colgame::e2_game(base),
                };
                let t = run_match(
                    &game,
                    machine,
                    Adversary::random_legal(),
                    MatchConfig {
                        max_moves: max_moves as usize,
                        seed: trial_seed,
                        interleaving_fuzz: true,
                    },
                );
                let report = verify_transcript(&game, &t);
                if report.winner != Player::Top || !report.clean() {
                    failed += 1;
                    println!(
                        "trial {i}: seed {trial_seed}, {} moves, winner {}, violations {:?}",
                        t.moves.len(),
                        report.winner.label(),
                        report.violations
                    );
                }
            }
            println!(
                "{direction}: {}/{trials} matches won by the machine and clean",
                trials - failed
            );
            Ok(failed == 0)
        }
        Cmd::Project {
            transcript,
            component,
            branch,
        } => {
            let t = load_transcript(&transcript)?;
            parse_game(&t.game_text).context("transcript #game header")?;
            let comp = parse_component(&component)?;
            let branch =
                Bits::parse(&branch).ok_or_else(|| anyhow!("--branch must be a 0/1 string"))?;
            let sub = component_run(&t.run(), comp);
            match project(&sub, &branch) {
                Ok(p) => {
                    for lm in p.iter() {
                        println!("{lm}");
                    }
                    Ok(true)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(false)
                }
            }
        }
        Cmd::Reps {
            transcript,
            component,
        } => {
            let t = load_transcript(&transcript)?;
            parse_game(&t.game_text).context("transcript #game header")?;
            let comp = parse_component(&component)?;
            for v in representatives(&component_run(&t.run(), comp)) {
                println!("{v}");
            }
            Ok(true)
        }
    }
}

fn load_game(arg: &str) -> Result<GameExpr> {
    let text = if arg.trim_start().starts_with('(') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(parse_game(&text)?)
}

fn load_transcript(path: &str) -> Result<Transcript> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    Ok(Transcript::parse(&text)?)
}

fn load_adversary(arg: &str) -> Result<Adversary> {
    if arg == "random" {
        return Ok(Adversary::random_legal());
    }
    if let Some(path) = arg.strip_prefix("script:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return Ok(Adversary::script(parse_script(&text)?));
    }
    Err(anyhow!(
        "unknown adversary {arg:?} (expected random or script:<file>)"
    ))
}

fn parse_component(arg: &str) -> Result<Component> {
    match arg {
        "1" => Ok(Component::One),
        "2" => Ok(Component::Two),
        other => Err(anyhow!("unknown component {other:?} (expected 1 or 2)")),
    }
}

/// Move spellings a bounded static search should try against this game:
/// tree tokens plus a fresh probe, surface forms under a recurrence,
/// component prefixes under a disjunction.
fn derived_alphabet(game: &GameExpr) -> Vec<Move> {
    let mut out = BTreeSet::new();
    collect_spellings(game, &mut out);
    out.into_iter()
        .map(|s| Move::new(s).expect("derived spellings are valid moves"))
        .collect()
}

fn collect_spellings(game: &GameExpr, out: &mut BTreeSet<String>) {
    match game {
        GameExpr::Tree(t) => {
            out.extend(base_alphabet(t).iter().map(|m| m.as_str().to_string()));
        }
        GameExpr::Neg(e) => collect_spellings(e, out),
        GameExpr::Or(a, b) => {
            for (prefix, side) in [("1.", a), ("2.", b)] {
                let mut inner = BTreeSet::new();
                collect_spellings(side, &mut inner);
                out.extend(inner.into_iter().map(|s| format!("{prefix}{s}")));
            }
        }
        GameExpr::Tight(e) | GameExpr::Loose(e) | GameExpr::CoTight(e) | GameExpr::CoLoose(e) => {
            out.extend(recurrence_spellings(e));
        }
    }
}

fn recurrence_spellings(mut inner: &GameExpr) -> BTreeSet<String> {
    while let GameExpr::Neg(e) = inner {
        inner = e;
    }
    if let GameExpr::Tree(t) = inner {
        return surface_alphabet(t)
            .iter()
            .map(|m| m.as_str().to_string())
            .collect();
    }
    // A recurrence over a compound game: thread the inner spellings.
    let mut deep = BTreeSet::new();
    collect_spellings(inner, &mut deep);
    let mut out = BTreeSet::new();
    for s in deep.iter().take(2) {
        out.insert(format!(".{s}"));
    }
    if let Some(first) = deep.iter().next() {
        out.insert(format!("0.{first}"));
    }
    out.insert(":".to_string());
    out
}

fn fmt_run(run: &Run) -> String {
    let parts: Vec<String> = run.iter().map(|lm| lm.to_string()).collect();
    if parts.is_empty() {
        "(empty)".to_string()
    } else {
        parts.join(", ")
    }
}

fn print_report(report: &VerifyReport) {
    match report.status {
        RunStatus::Legal => println!("status: legal"),
        RunStatus::IllegalBy { offender, index } => {
            println!(
                "status: illegal, first offense by {} at index {index}",
                offender.label()
            );
        }
    }
    println!("winner: {}", report.winner.label());
    for c in &report.components {
        let rows: Vec<String> = c
            .rep_winners
            .iter()
            .map(|(v, w)| format!("{v}={}", w.label()))
            .collect();
        println!("component {} ({}): {}", c.label, c.operator, rows.join(" "));
    }
    for row in &report.counterparts {
        match &row.z {
            Some(z) => println!(
                "counterpart {} -> {z} ({})",
                row.rep,
                if row.chain_ok { "chain ok" } else { "chain broken" }
            ),
            None => println!("counterpart {} -> none", row.rep),
        }
    }
    if report.violations.is_empty() {
        println!("violations: none");
    } else {
        for v in &report.violations {
            println!("violation: {v}");
        }
    }
}
