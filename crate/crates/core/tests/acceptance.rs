//! Acceptance run: one line per criterion, `[PASS]` or `[FAIL]`, then a
//! nonzero exit if anything failed.

mod common;

use std::time::{Duration, Instant};

use ramsey_core::hypercore::{g_minus, hat_k24_3, k2t_target, lift, path, target_by_name, triangle, TargetGraph};
use ramsey_core::strategy::{K24Strategy, K2tStrategy, Strategy};
use ramsey_core::verify::{
    exhaustive_search, oracle_agreement, playout_suite, Adversary, AgreementReport, GameValue, SearchOptions,
    Solver, DEFAULT_EDGE_CAP,
};

const ORACLE_STATES: u64 = 1000;
const ORACLE_SEED: u64 = 1;
const ORACLE_LIMIT: Duration = Duration::from_secs(5 * 60);

const K24_DEPTH: usize = 4;
const K2T3_DEPTH: usize = 4;
const SEARCH_LIMIT: Duration = Duration::from_secs(30 * 60);

const RANDOM_GAMES: u64 = 100_000;
const GREEDY_GAMES: u64 = 10_000;
const K24_PLIES: usize = 60;
const K2T_PLIES: usize = 80;
const PLAYOUT_LIMIT: Duration = Duration::from_secs(60 * 60);

const LOOP_STATES: [(&str, usize); 3] = [("hatK24-3", 100), ("k2t3", 100), ("k2t4", 25)];
const LOOP_ROUNDS: usize = 200;
const ENTRY_STATES: usize = 300;

const SOLVE_MAX_BOARD: usize = 6;
const SOLVE_LIMIT: Duration = Duration::from_secs(10 * 60);

struct Run {
    failed: usize,
}

impl Run {
    fn report(&mut self, name: &str, ok: bool, detail: String) {
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.failed += !ok as usize;
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn oracle_corpus() -> (Vec<AgreementReport>, Duration) {
    let start = Instant::now();
    let reports = [hat_k24_3(), g_minus(), k2t_target(3).unwrap()]
        .iter()
        .map(|t| oracle_agreement(t, ORACLE_STATES, ORACLE_SEED))
        .collect();
    (reports, start.elapsed())
}

fn oracle_equivalence(run: &mut Run, reports: &[AgreementReport], took: Duration) {
    let mismatches: usize = reports.iter().map(|r| r.mismatches.len()).sum();
    let states: u64 = reports.iter().map(|r| r.states).sum();
    let comparisons: u64 = reports.iter().map(|r| r.comparisons).sum();
    let ok = mismatches == 0 && reports.iter().all(|r| r.states >= ORACLE_STATES) && took < ORACLE_LIMIT;
    let per: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {} threats/{} copies", r.target, r.with_threats, r.with_copies))
        .collect();
    run.report(
        "oracle equivalence",
        ok,
        format!(
            "{states} states, {comparisons} comparisons, {mismatches} mismatches ({}) in {} (limit {})",
            per.join(", "),
            secs(took),
            secs(ORACLE_LIMIT)
        ),
    );
    for m in reports.iter().flat_map(|r| &r.mismatches).take(5) {
        println!("    {m}");
    }
}

fn threat_measure_law(run: &mut Run, reports: &[AgreementReport]) {
    let checks: u64 = reports.iter().map(|r| r.law_checks).sum();
    let violations: usize = reports.iter().map(|r| r.law_violations.len()).sum();
    let with: u64 = reports.iter().map(|r| r.with_threats).sum();
    run.report(
        "threat/measure law",
        violations == 0 && with > 0,
        format!("{checks} player-positions checked, {with} with threats, {violations} violations"),
    );
    for m in reports.iter().flat_map(|r| &r.law_violations).take(5) {
        println!("    {m}");
    }
}

fn exhaustive(run: &mut Run) {
    let cases: [(Box<dyn Strategy>, TargetGraph, usize); 2] = [
        (Box::new(K24Strategy::new()), hat_k24_3(), K24_DEPTH),
        (Box::new(K2tStrategy::new(3).unwrap()), k2t_target(3).unwrap(), K2T3_DEPTH),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, t, depth) in &cases {
        let start = Instant::now();
        let r = exhaustive_search(&**s, t, SearchOptions::new(*depth, t.arity()));
        let took = start.elapsed();
        ok &= r.report.passed() && took < SEARCH_LIMIT;
        parts.push(format!(
            "{} depth {depth}: {:?}, {} violations, branches {:?}, {}",
            s.name(),
            r.report.outcome,
            r.report.invariant_violations.len(),
            r.branches,
            secs(took)
        ));
        // orbit reduction against the brute-force orbit count and against
        // the unreduced search at depth 2
        let reduced = exhaustive_search(&**s, t, SearchOptions::new(2, t.arity()));
        let naive = common::naive_second_move_orbits(&**s, t) as u64;
        let mut plain = SearchOptions::new(2, t.arity());
        plain.reduce = false;
        plain.transpositions = false;
        let full = exhaustive_search(&**s, t, plain);
        let agree = reduced.branches[1] == naive
            && reduced.report.outcome == full.report.outcome
            && reduced.report.passed() == full.report.passed();
        ok &= agree;
        parts.push(format!(
            "{} depth 2: {} orbits reduced, {} by brute force, {} unreduced moves, same outcome {}",
            s.name(),
            reduced.branches[1],
            naive,
            full.branches[1],
            reduced.report.outcome == full.report.outcome
        ));
    }
    run.report("exhaustive prefix verification", ok, parts.join("; "));
}

fn deep_playouts(run: &mut Run) {
    let start = Instant::now();
    let mut cases: Vec<(Box<dyn Strategy>, TargetGraph, usize)> = vec![(Box::new(K24Strategy::new()), hat_k24_3(), K24_PLIES)];
    for t in 3..=5 {
        cases.push((Box::new(K2tStrategy::new(t).unwrap()), k2t_target(t).unwrap(), K2T_PLIES));
    }
    let mut ok = true;
    let mut parts = Vec::new();
    let mut k2t_parity_checks = 0;
    for (s, t, plies) in &cases {
        for (adv, games) in [(Adversary::Random, RANDOM_GAMES), (Adversary::Greedy, GREEDY_GAMES)] {
            let r = playout_suite(&**s, t, adv, games, *plies, 1);
            let st = r.playout.clone().unwrap_or_default();
            let clean = r.passed()
                && st.games == games
                && st.p1_wins == 0
                && st.forced_block_violations == 0
                && st.inapplicable_states == 0
                && st.a_parity_violations == 0
                && st.other_audit_failures == 0;
            ok &= clean;
            if s.name().starts_with("k2t") {
                k2t_parity_checks += st.a_parity_checks;
            }
            parts.push(format!(
                "{} vs {} x{}: {} P1 wins, {} P2 wins, {} draws, {} distraction entries, {} forced-block, {} inapplicable, A-parity {}/{} violated, {} other audit failures",
                s.name(),
                adv.name(),
                st.games,
                st.p1_wins,
                st.p2_wins,
                st.draws,
                st.distraction_entries,
                st.forced_block_violations,
                st.inapplicable_states,
                st.a_parity_violations,
                st.a_parity_checks,
                st.other_audit_failures
            ));
            for v in r.invariant_violations.iter().take(3) {
                println!("    {v}");
            }
        }
    }
    let took = start.elapsed();
    // the parity invariant must actually be exercised somewhere
    ok &= took < PLAYOUT_LIMIT && k2t_parity_checks > 0;
    run.report(
        "deep playouts",
        ok,
        format!(
            "{}; {k2t_parity_checks} k2t A-parity checks in {} (limit {})",
            parts.join("; "),
            secs(took),
            secs(PLAYOUT_LIMIT)
        ),
    );
}

fn distraction(run: &mut Run) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, states) in LOOP_STATES {
        let r = common::loop_suite(target_by_name(name).unwrap(), states, 7, LOOP_ROUNDS);
        ok &= r == Ok(states);
        parts.push(match r {
            Ok(n) => format!("{name}: {n} loops of {LOOP_ROUNDS} rounds without a P1 threat"),
            Err(e) => format!("{name}: {e}"),
        });
    }
    match common::entry_states(ENTRY_STATES, 11) {
        Ok(s) => parts.push(format!(
            "{} entry states pass ({} with a P1 core, {} after the swap)",
            s.checked, s.with_core, s.swapped
        )),
        Err(e) => {
            ok = false;
            parts.push(format!("entry state failed: {e}"));
        }
    }
    run.report("distraction suite", ok, parts.join("; "));
}

fn strategy_stealing(run: &mut Run) {
    let start = Instant::now();
    let mut boards: Vec<(usize, TargetGraph)> = (3..=SOLVE_MAX_BOARD).map(|n| (n, triangle())).collect();
    for m in 1..=4 {
        let t = lift(&path(m).unwrap(), 3).unwrap();
        boards.extend((3..=SOLVE_MAX_BOARD).map(|n| (n, t.clone())));
    }
    let mut ok = true;
    let mut values = Vec::new();
    for (n, t) in &boards {
        let mut solver = Solver::new(*n, t, DEFAULT_EDGE_CAP, true).unwrap();
        let v = solver.solve();
        // independent plain minimax on the smallest boards
        if t.arity() == 2 && *n <= 4 || t.arity() == 3 && *n <= 4 {
            let plain = Solver::new(*n, t, DEFAULT_EDGE_CAP, false).unwrap().solve();
            ok &= plain == v;
        }
        ok &= !matches!(v, GameValue::P2Win(_));
        values.push(format!("{}@{n}={v:?}", t.name()));
    }
    let took = start.elapsed();
    ok &= took < SOLVE_LIMIT;
    run.report(
        "strategy stealing",
        ok,
        format!("{} boards, no P2Win: {} in {}", boards.len(), values.join(" "), secs(took)),
    );
}

fn structural_constants(run: &mut Run) {
    let mut ok = hat_k24_3().edge_count() == 9 && g_minus().edge_count() == 8;
    let mut sizes = Vec::new();
    for t in 3..=8 {
        let g = k2t_target(t).unwrap();
        ok &= g.edge_count() == 3 * t && g.vertex_count() == 2 * t + 2;
        sizes.push(format!("t={t}: {}e/{}v", g.edge_count(), g.vertex_count()));
    }
    run.report(
        "structural constants",
        ok,
        format!("hatK24-3 {}e, gminus {}e, {}", hat_k24_3().edge_count(), g_minus().edge_count(), sizes.join(", ")),
    );
}

fn main() {
    let mut run = Run { failed: 0 };
    structural_constants(&mut run);
    let (reports, took) = oracle_corpus();
    oracle_equivalence(&mut run, &reports, took);
    threat_measure_law(&mut run, &reports);
    exhaustive(&mut run);
    distraction(&mut run);
    strategy_stealing(&mut run);
    deep_playouts(&mut run);
    if run.failed > 0 {
        println!("{} criteria failed", run.failed);
        std::process::exit(1);
    }
}
