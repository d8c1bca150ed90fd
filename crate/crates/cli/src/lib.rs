//! The `ramsey` command line: play games, run the verifier, cross-check the
//! oracle, solve small boards and serve interactive sessions.

pub mod protocol;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ramsey_core::game::{new_game, GameState, Player};
use ramsey_core::hypercore::{target_by_name, TargetGraph};
use ramsey_core::strategy::{Strategy, StrategyDecision, StrategyError, StrategyRegistry};
use ramsey_core::verify::{
    exact_solve_capped, exhaustive_verify, oracle_agreement, playout_suite, reply_violations, Adversary,
    Outcome, SolveError, VerifyReport, DEFAULT_EDGE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ramsey", version, about = "Strong Ramsey games on 3-uniform hypergraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Play one game between two strategies.
    Play(PlayArgs),
    /// Search every first-player line up to a depth against a strategy.
    Verify(VerifyArgs),
    /// Play many games of a strategy against a randomized adversary.
    Playout(PlayoutArgs),
    /// Compare the main searches with the brute-force oracle.
    OracleCheck(OracleArgs),
    /// Exact value of the strong game on a small complete board.
    Solve(SolveArgs),
    /// Serve line-delimited JSON game sessions, human as first player.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct PlayArgs {
    #[arg(long)]
    pub target: String,
    /// Edge arity; must match the target.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value = "p1-greedy")]
    pub p1: String,
    #[arg(long)]
    pub p2: String,
    /// Horizon in half-moves.
    #[arg(long, default_value_t = 80)]
    pub plies: usize,
    /// Seed for `p1-random` and `p1-greedy` when the spec has none.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the game as a JSONL trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub strategy: String,
    /// Defaults to the strategy's own target.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Fresh vertices a first-player move may introduce; defaults to the arity.
    #[arg(long)]
    pub fresh_budget: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write a counterexample, if found, as a JSONL trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlayoutArgs {
    #[arg(long)]
    pub strategy: String,
    #[arg(long)]
    pub target: Option<String>,
    /// `p1-random` or `p1-greedy`.
    #[arg(long, default_value = "p1-random")]
    pub adversary: String,
    #[arg(long, default_value_t = 1000)]
    pub games: u64,
    /// Defaults to 60 for `hatK24-3` and 80 otherwise.
    #[arg(long)]
    pub plies: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Random states per target.
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Repeatable; defaults to hatK24-3, gminus and k2t3.
    #[arg(long)]
    pub target: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Number of board vertices.
    #[arg(long)]
    pub board: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub target: String,
    /// Largest board, in edges, the solver accepts.
    #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "listen")]
pub struct ServeArgs {
    /// Serve one session on stdin/stdout.
    #[arg(long, group = "listen")]
    pub stdio: bool,
    /// Listen on a TCP port, one session per connection.
    #[arg(long, group = "listen")]
    pub port: Option<u16>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
}

/// Bad names, mismatched arities and other caller mistakes.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn resolve_target(name: &str, k: Option<usize>) -> anyhow::Result<TargetGraph> {
    let t = target_by_name(name).map_err(|e| usage(e.to_string()))?;
    if let Some(k) = k {
        if t.arity() != k {
            return Err(usage(format!("target {name} has arity {}, not {k}", t.arity())));
        }
    }
    Ok(t)
}

/// The P2 strategy spec that belongs to a target, if any.
pub fn default_strategy(target: &str) -> Option<String> {
    if target == "hatK24-3" {
        return Some("k24".into());
    }
    let t: usize = target.strip_prefix("k2t")?.parse().ok()?;
    Some(format!("k2t:{t}"))
}

/// The target a P2 strategy is built for.
pub fn strategy_target(spec: &str) -> Option<String> {
    match spec.split_once(':') {
        None if spec == "k24" => Some("hatK24-3".into()),
        Some(("k2t", t)) => Some(format!("k2t{t}")),
        _ => None,
    }
}

/// Builds a strategy for `seat`, adding `seed` to adversary specs that
/// carry none.
pub fn make_strategy(spec: &str, seat: Player, seed: Option<u64>) -> anyhow::Result<Box<dyn Strategy>> {
    let spec = match (spec, seed) {
        ("p1-random", s) => format!("p1-random:{}", s.unwrap_or(0)),
        ("p1-greedy", Some(s)) => format!("p1-greedy:{s}"),
        _ => spec.to_string(),
    };
    let s = StrategyRegistry::with_builtins()
        .create(&spec)
        .map_err(|e| usage(e.to_string()))?;
    if s.seat() != seat {
        return Err(usage(format!("{spec} plays {}, not {seat}", s.seat())));
    }
    Ok(s)
}

/// A finished (or stopped) game with P2's decisions and any invariant
/// violations the replies showed.
pub struct PlayedGame {
    pub state: GameState,
    pub decisions: Vec<(Player, StrategyDecision)>,
    pub violations: Vec<String>,
    /// Why the game stopped before a result, e.g. an exhausted script.
    pub stopped: Option<String>,
}

/// Plays until a win, the horizon, or a strategy that cannot move.
pub fn play_out(
    target: &TargetGraph,
    p1: &mut dyn Strategy,
    p2: &mut dyn Strategy,
    plies: usize,
    mut on_move: impl FnMut(&GameState, Player, &StrategyDecision),
) -> PlayedGame {
    let mut g = new_game(target.clone(), Some(plies));
    let mut out = PlayedGame {
        state: g.clone(),
        decisions: Vec::new(),
        violations: Vec::new(),
        stopped: None,
    };
    while !g.status().is_over() {
        let mover = g.to_move();
        let s: &mut dyn Strategy = if mover == Player::P1 { &mut *p1 } else { &mut *p2 };
        let d = match s.decide(&g) {
            Ok(d) => d,
            Err(e @ StrategyError::InapplicableState(_)) => {
                out.violations.push(format!("{mover}: {e}"));
                out.stopped = Some(e.to_string());
                break;
            }
            Err(e) => {
                out.stopped = Some(e.to_string());
                break;
            }
        };
        if mover == Player::P2 {
            out.violations.extend(reply_violations(&g, &d));
        }
        if let Err(e) = g.play(mover, d.edge) {
            out.violations.push(format!("{mover} played {}: {e}", d.edge));
            break;
        }
        on_move(&g, mover, &d);
        out.decisions.push((mover, d));
    }
    out.state = g;
    out
}

fn cmd_play(a: PlayArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let target = resolve_target(&a.target, a.k)?;
    let mut p1 = make_strategy(&a.p1, Player::P1, a.seed)?;
    let mut p2 = make_strategy(&a.p2, Player::P2, a.seed)?;
    let quiet = a.quiet;
    let mut lines = Vec::new();
    let game = play_out(&target, &mut *p1, &mut *p2, a.plies, |g, mover, d| {
        if !quiet {
            lines.push(format!(
                "{:>3} {mover} {:<12} e1={} e2={}  {}{}",
                g.move_log().len(),
                d.edge.to_string(),
                g.progress(Player::P1),
                g.progress(Player::P2),
                d.tag,
                if d.distraction { " [distraction]" } else { "" },
            ));
        }
    });
    for l in lines {
        writeln!(out, "{l}")?;
    }
    let g = &game.state;
    if let Some(path) = &a.trace {
        fs::write(path, g.trace().to_jsonl()).with_context(|| format!("writing {}", path.display()))?;
    }
    let distraction = game.decisions.iter().filter(|(_, d)| d.distraction).count();
    writeln!(
        out,
        "status: {}  plies: {}  progress: e1={} e2={} of {}  distraction moves: {distraction}",
        g.status().label(),
        g.move_log().len(),
        g.progress(Player::P1),
        g.progress(Player::P2),
        target.edge_count(),
    )?;
    if let Some(why) = &game.stopped {
        writeln!(out, "stopped: {why}")?;
    }
    for v in &game.violations {
        writeln!(out, "violation: {v}")?;
    }
    Ok(if g.status().winner() == Some(Player::P1) {
        EXIT_COUNTEREXAMPLE
    } else if !game.violations.is_empty() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn report_exit(r: &VerifyReport) -> i32 {
    if !r.outcome.is_clean() {
        EXIT_COUNTEREXAMPLE
    } else if !r.invariant_violations.is_empty() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn p2_and_target(strategy: &str, target: Option<&str>) -> anyhow::Result<(Box<dyn Strategy>, TargetGraph)> {
    let name = match target {
        Some(t) => t.to_string(),
        None => strategy_target(strategy)
            .ok_or_else(|| usage(format!("--target is required for strategy {strategy}")))?,
    };
    Ok((make_strategy(strategy, Player::P2, None)?, resolve_target(&name, None)?))
}

fn write_report(r: &VerifyReport, path: Option<&PathBuf>, out: &mut dyn Write) -> anyhow::Result<()> {
    let json = r.to_json();
    if let Some(p) = path {
        fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
    }
    writeln!(out, "{json}")?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (p2, target) = p2_and_target(&a.strategy, a.target.as_deref())?;
    let budget = a.fresh_budget.unwrap_or(target.arity());
    let r = exhaustive_verify(&*p2, &target, a.depth, budget);
    write_report(&r, a.report.as_ref(), out)?;
    if let (Outcome::CounterexampleTrace(moves), Some(path)) = (&r.outcome, &a.trace) {
        let trace = ramsey_core::game::Trace {
            header: ramsey_core::game::TraceHeader {
                k: target.arity(),
                target: target.name().to_string(),
                horizon: None,
            },
            moves: moves.clone(),
        };
        fs::write(path, trace.to_jsonl()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report_exit(&r))
}

fn cmd_playout(a: PlayoutArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (p2, target) = p2_and_target(&a.strategy, a.target.as_deref())?;
    let adversary: Adversary = a.adversary.parse().map_err(usage)?;
    let plies = a.plies.unwrap_or(if target.name() == "hatK24-3" { 60 } else { 80 });
    let r = playout_suite(&*p2, &target, adversary, a.games, plies, a.seed);
    write_report(&r, a.report.as_ref(), out)?;
    Ok(report_exit(&r))
}

fn cmd_oracle_check(a: OracleArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let names = if a.target.is_empty() {
        vec!["hatK24-3".to_string(), "gminus".into(), "k2t3".into()]
    } else {
        a.target
    };
    let mut ok = true;
    for name in names {
        let target = resolve_target(&name, None)?;
        let r = oracle_agreement(&target, a.n, a.seed);
        writeln!(
            out,
            "{name}: {} states, {} comparisons, {} mismatches; law checked {} times, {} violations; \
             {} with threats, {} with copies; {} ms",
            r.states,
            r.comparisons,
            r.mismatches.len(),
            r.law_checks,
            r.law_violations.len(),
            r.with_threats,
            r.with_copies,
            r.wall_time_ms
        )?;
        for m in r.mismatches.iter().chain(&r.law_violations).take(10) {
            writeln!(out, "  {m}")?;
        }
        ok &= r.passed();
    }
    writeln!(out, "{}", if ok { "all comparisons equal" } else { "MISMATCH" })?;
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let target = resolve_target(&a.target, Some(a.k))?;
    match exact_solve_capped(a.board, &target, a.cap) {
        Ok(v) => {
            let line = serde_json::json!({
                "board": a.board,
                "k": a.k,
                "target": target.name(),
                "value": v,
            });
            writeln!(out, "{line}")?;
            Ok(EXIT_OK)
        }
        Err(e @ (SolveError::TooLarge { .. } | SolveError::BadBoard(_))) => Err(usage(e.to_string())),
    }
}

/// Runs a parsed command, writing normal output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Play(a) => cmd_play(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Playout(a) => cmd_playout(a, out),
        Command::OracleCheck(a) => cmd_oracle_check(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Serve(a) => {
            if a.stdio {
                protocol::serve_stdio()?;
            } else if let Some(port) = a.port {
                protocol::serve_tcp(&a.host, port)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
