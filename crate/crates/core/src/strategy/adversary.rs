//! First-player policies used to attack the P2 strategies.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_turn, Strategy, StrategyDecision, StrategyError};
use crate::game::{GameState, Player};
use crate::hypercore::{max_overlap, parse_edge_list, EdgeIndex, HEdge, OverlapSearch, Vertex};
use crate::game::Trace;

/// Renumbers the vertices of `e` at or beyond `pool` to `pool, pool+1, ...`
/// in increasing order, so that fresh vertices stay consecutive.
pub fn normalize_fresh(e: &HEdge, pool: Vertex) -> HEdge {
    let mut next = pool;
    let vs: Vec<Vertex> = e
        .vertices()
        .iter()
        .map(|&v| {
            if v >= pool {
                next += 1;
                next - 1
            } else {
                v
            }
        })
        .collect();
    HEdge::new(&vs).expect("renumbering keeps vertices distinct")
}

/// Uniform over unclaimed k-sets of the pool plus k spare vertices, with
/// spare vertices renumbered to the lowest fresh ids.
#[derive(Clone, Debug)]
pub struct RandomP1 {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomP1 {
    pub fn new(seed: u64) -> Self {
        RandomP1 {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Strategy for RandomP1 {
    fn name(&self) -> String {
        format!("p1-random:{}", self.seed)
    }

    fn seat(&self) -> Player {
        Player::P1
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(Player::P1, state)?;
        let k = state.arity();
        let pool = state.pool_size();
        let n = pool as usize + k;
        loop {
            let vs: Vec<Vertex> = sample(&mut self.rng, n, k).into_iter().map(|v| v as Vertex).collect();
            let e = normalize_fresh(&HEdge::new(&vs).expect("distinct sample"), pool);
            if state.is_free(&e) {
                return Ok(StrategyDecision::new(e, "random"));
            }
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Node budget for collecting tied copies in one greedy move.
pub const GREEDY_BUDGET: u64 = 200_000;

/// The greedy move for `me`: win if possible, else block an opponent
/// threat, else an edge that raises `me`'s measure. Ties go to the lowest
/// edge, or to a random one when `rng` is given.
pub fn greedy_move(
    state: &GameState,
    me: Player,
    mut rng: Option<&mut ChaCha8Rng>,
) -> StrategyDecision {
    let mut pick = |set: &BTreeSet<HEdge>| -> HEdge {
        match rng.as_deref_mut() {
            Some(r) => *set.iter().choose(r).expect("nonempty"),
            None => *set.iter().next().expect("nonempty"),
        }
    };
    let wins = state.threat_edges(me);
    if !wins.is_empty() {
        return StrategyDecision::new(pick(&wins), "win");
    }
    let target = state.target();
    let own = state.edges(me);
    let opp = state.edges(me.other());
    let pool = state.pool_size();
    let blocks = state.threat_edges(me.other());
    if !blocks.is_empty() {
        let mut best = 0;
        let mut tied = BTreeSet::new();
        for e in &blocks {
            let mut with = own.clone();
            with.insert(*e);
            let v = max_overlap(target, &with, opp, pool as usize);
            if v > best || tied.is_empty() {
                if v > best {
                    tied.clear();
                }
                best = best.max(v);
            }
            if v == best {
                tied.insert(*e);
            }
        }
        return StrategyDecision::new(pick(&tied), "block");
    }
    if let Some(star) = state.rules().double_star() {
        let (max, moves) = star.improving(&EdgeIndex::new(own), &EdgeIndex::new(opp), pool, false);
        if max == 0 {
            return StrategyDecision::new(fresh_edge(state), "greedy fresh");
        }
        return StrategyDecision::new(pick(&moves), "greedy");
    }
    let (max, moves, complete) = improving_by_search(state, me);
    if max == 0 {
        return StrategyDecision::new(fresh_edge(state), "greedy fresh");
    }
    let tag = if complete { "greedy" } else { "greedy (budget)" };
    StrategyDecision::new(pick(&moves), tag)
}

fn fresh_edge(state: &GameState) -> HEdge {
    let pool = state.pool_size();
    let k = state.arity() as Vertex;
    HEdge::new(&(pool..pool + k).collect::<Vec<_>>()).expect("fresh edge")
}

/// The measure of `me` and the non-own edges of copies attaining it, by
/// branch and bound. Vertices that gain nothing are fresh. The flag is
/// false if the node budget cut the enumeration short.
pub fn improving_by_search(state: &GameState, me: Player) -> (usize, BTreeSet<HEdge>, bool) {
    let target = state.target();
    let own = state.edges(me);
    let pool = state.pool_size();
    let mut search = OverlapSearch::new(target, own, state.edges(me.other()));
    let (max, best) = search.max();
    let add = |moves: &mut BTreeSet<HEdge>, copy: &crate::hypercore::OverlapCopy| {
        let emb = copy.materialize(pool);
        for te in target.edges() {
            let e = emb.map_edge(te);
            if !own.contains(&e) {
                moves.insert(normalize_fresh(&e, pool));
            }
        }
    };
    let mut moves = BTreeSet::new();
    if max == 0 {
        return (0, moves, true);
    }
    let complete = search.collect(max, GREEDY_BUDGET, &mut |copy| {
        add(&mut moves, copy);
        true
    });
    if moves.is_empty() {
        add(&mut moves, &best);
    }
    (max, moves, complete)
}

/// Threat-greedy player. With a seed, ties are broken at random.
#[derive(Clone, Debug)]
pub struct GreedyP1 {
    seat: Player,
    seed: Option<u64>,
    rng: Option<ChaCha8Rng>,
}

impl GreedyP1 {
    pub fn new(seed: Option<u64>) -> Self {
        GreedyP1 {
            seat: Player::P1,
            seed,
            rng: seed.map(ChaCha8Rng::seed_from_u64),
        }
    }

    /// The same policy for an arbitrary seat.
    pub fn for_seat(seat: Player, seed: Option<u64>) -> Self {
        GreedyP1 {
            seat,
            ..Self::new(seed)
        }
    }
}

impl Strategy for GreedyP1 {
    fn name(&self) -> String {
        match self.seed {
            Some(s) => format!("p1-greedy:{s}"),
            None => "p1-greedy".into(),
        }
    }

    fn seat(&self) -> Player {
        self.seat
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(self.seat, state)?;
        Ok(greedy_move(state, self.seat, self.rng.as_mut()))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Plays a fixed list of first-player moves.
#[derive(Clone, Debug)]
pub struct ScriptedP1 {
    label: String,
    moves: Vec<HEdge>,
}

impl ScriptedP1 {
    pub fn new(label: impl Into<String>, moves: Vec<HEdge>) -> Self {
        ScriptedP1 {
            label: label.into(),
            moves,
        }
    }

    /// Reads an edge list (`k <arity>` header) or a JSONL trace, whose P1
    /// moves are used.
    pub fn from_file(path: &str) -> Result<Self, StrategyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| StrategyError::BadSpec(format!("cannot read {path}: {e}")))?;
        let moves = if text.trim_start().starts_with('{') {
            let trace = Trace::from_jsonl(&text).map_err(|e| StrategyError::BadSpec(e.to_string()))?;
            trace
                .moves
                .iter()
                .filter(|(p, _)| *p == Player::P1)
                .map(|(_, e)| *e)
                .collect()
        } else {
            parse_edge_list(&text)
                .map_err(|e| StrategyError::BadSpec(e.to_string()))?
                .1
        };
        Ok(ScriptedP1::new(format!("p1-scripted:{path}"), moves))
    }
}

impl Strategy for ScriptedP1 {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn seat(&self) -> Player {
        Player::P1
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(Player::P1, state)?;
        let i = state.edges(Player::P1).len();
        self.moves
            .get(i)
            .map(|e| StrategyDecision::new(*e, format!("script {}", i + 1)))
            .ok_or(StrategyError::ScriptExhausted(self.moves.len()))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;
    use crate::hypercore::hat_k24_3;
    use crate::strategy::edge3;
    use crate::verify::oracle::oracle_max_overlap;

    #[test]
    fn fresh_renumbering() {
        let e = HEdge::new(&[2, 9, 7]).unwrap();
        assert_eq!(normalize_fresh(&e, 5), HEdge::new(&[2, 5, 6]).unwrap());
        assert_eq!(normalize_fresh(&e, 10), e);
    }

    #[test]
    fn random_is_reproducible_and_dense() {
        let run = |seed| {
            let mut g = new_game(hat_k24_3(), None);
            let mut a = RandomP1::new(seed);
            let mut b = RandomP1::new(seed + 1000);
            let mut log = Vec::new();
            for i in 0..20 {
                let s: &mut dyn Strategy = if i % 2 == 0 { &mut a } else { &mut b };
                let _ = s.seat();
                let p = g.to_move();
                let d = if p == Player::P1 {
                    a.decide(&g).unwrap()
                } else {
                    // second seat plays lowest fresh edges
                    let f = g.fresh_vertex();
                    StrategyDecision::new(edge3(f, f + 1, f + 2), "")
                };
                let pool = g.pool_size();
                assert!(d.edge.max_vertex() < pool + 3);
                g.play(p, d.edge).unwrap();
                log.push(d.edge);
            }
            log
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn greedy_takes_the_win() {
        let t = hat_k24_3();
        let mut g = new_game(t.clone(), None);
        let missing = t.main_edge().unwrap();
        for e in t.edges().iter().filter(|e| **e != missing) {
            g.play(Player::P1, *e).unwrap();
            let f = g.fresh_vertex().max(100);
            g.play(Player::P2, edge3(f, f + 1, f + 2)).unwrap();
        }
        let d = greedy_move(&g, Player::P1, None);
        assert_eq!(d.edge, missing);
        assert_eq!(d.tag, "win");
    }

    #[test]
    fn greedy_strictly_increases_the_measure() {
        let t = hat_k24_3();
        let mut g = new_game(t.clone(), None);
        let p2 = [[0, 1, 2], [0, 3, 4], [1, 3, 5]];
        for m in p2 {
            let d = greedy_move(&g, Player::P1, None);
            let before = oracle_max_overlap(&t, g.edges(Player::P1), g.edges(Player::P2), g.pool_size() as usize).unwrap();
            g.play(Player::P1, d.edge).unwrap();
            let after = oracle_max_overlap(&t, g.edges(Player::P1), g.edges(Player::P2), g.pool_size() as usize).unwrap();
            assert_eq!(after, before + 1, "{}", d.edge);
            let e = edge3(m[0], m[1], m[2]);
            let e = if g.is_free(&e) { e } else { let f = g.fresh_vertex(); edge3(f, f + 1, f + 2) };
            g.play(Player::P2, e).unwrap();
        }
    }

    #[test]
    fn scripted_runs_out() {
        let mut s = ScriptedP1::new("s", vec![edge3(0, 1, 2)]);
        let mut g = new_game(hat_k24_3(), None);
        let d = s.decide(&g).unwrap();
        g.play(Player::P1, d.edge).unwrap();
        g.play(Player::P2, edge3(3, 4, 5)).unwrap();
        assert_eq!(s.decide(&g), Err(StrategyError::ScriptExhausted(1)));
    }
}
