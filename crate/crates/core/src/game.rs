//! Rules of the strong game: turn order, legality, wins, threats and the
//! lazily grown vertex pool.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hypercore::{
    max_overlap, target_by_name, DoubleStar, EdgeIndex, Embedding, HEdge, HyperError, Matcher,
    TargetGraph, Vertex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::P1 => 1,
            Player::P2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::P1),
            2 => Some(Player::P2),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

impl Serialize for Player {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Player {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Player::from_number(n).ok_or_else(|| serde::de::Error::custom(format!("player {n}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameStatus {
    Ongoing,
    P1Win(Embedding),
    P2Win(Embedding),
    DrawAtHorizon,
}

impl GameStatus {
    pub fn winner(&self) -> Option<Player> {
        match self {
            GameStatus::P1Win(_) => Some(Player::P1),
            GameStatus::P2Win(_) => Some(Player::P2),
            _ => None,
        }
    }

    pub fn is_over(&self) -> bool {
        !matches!(self, GameStatus::Ongoing)
    }

    pub fn label(&self) -> &'static str {
        match self {
            GameStatus::Ongoing => "Ongoing",
            GameStatus::P1Win(_) => "P1Win",
            GameStatus::P2Win(_) => "P2Win",
            GameStatus::DrawAtHorizon => "DrawAtHorizon",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("it is {expected}'s turn, not {got}'s")]
    WrongTurn { expected: Player, got: Player },
    #[error("edge {0} is already claimed")]
    EdgeAlreadyClaimed(HEdge),
    #[error("edge {edge} has arity {got}, the game uses {expected}")]
    ArityMismatch {
        edge: HEdge,
        expected: usize,
        got: usize,
    },
    #[error("the game is over ({0})")]
    GameOver(&'static str),
}

impl MoveError {
    pub fn code(&self) -> &'static str {
        match self {
            MoveError::WrongTurn { .. } => "WrongTurn",
            MoveError::EdgeAlreadyClaimed(_) => "EdgeAlreadyClaimed",
            MoveError::ArityMismatch { .. } => "ArityMismatch",
            MoveError::GameOver(_) => "GameOver",
        }
    }
}

/// A copy of the target minus one edge held by `owner`, with its unclaimed
/// completing edge. `removed` is the missing edge in target labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreatRecord {
    pub owner: Player,
    pub embedding: Embedding,
    pub removed: HEdge,
    pub completing: HEdge,
}

/// The target together with matchers for the target and for every
/// one-edge deletion, shared by all states of a game.
#[derive(Debug)]
pub struct Rules {
    target: TargetGraph,
    full: Matcher,
    minus: Vec<(HEdge, Matcher, Vec<Vertex>)>,
    star: Option<DoubleStar>,
}

impl Rules {
    pub fn new(target: TargetGraph) -> Self {
        let full = Matcher::for_target(&target);
        let minus = target
            .edges()
            .iter()
            .map(|e| {
                let rest: Vec<HEdge> = target.edges().iter().copied().filter(|f| f != e).collect();
                let m = Matcher::new(target.vertex_count(), rest);
                let isolated = m.isolated();
                (*e, m, isolated)
            })
            .collect();
        let star = DoubleStar::of(&target);
        Rules {
            star,
            target,
            full,
            minus,
        }
    }

    pub fn target(&self) -> &TargetGraph {
        &self.target
    }

    /// The closed-form shape of the target, when it has one.
    pub fn double_star(&self) -> Option<&DoubleStar> {
        self.star.as_ref()
    }
}

#[derive(Clone)]
pub struct GameState {
    rules: Arc<Rules>,
    horizon: Option<usize>,
    pool_size: Vertex,
    p1: BTreeSet<HEdge>,
    p2: BTreeSet<HEdge>,
    log: Vec<(Player, HEdge)>,
    status: GameStatus,
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("target", &self.rules.target.name())
            .field("pool_size", &self.pool_size)
            .field("log", &self.log)
            .field("status", &self.status)
            .finish()
    }
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.rules.target == other.rules.target
            && self.horizon == other.horizon
            && self.pool_size == other.pool_size
            && self.p1 == other.p1
            && self.p2 == other.p2
            && self.log == other.log
            && self.status == other.status
    }
}

impl Eq for GameState {}

pub fn new_game(target: TargetGraph, horizon: Option<usize>) -> GameState {
    GameState::new(Arc::new(Rules::new(target)), horizon)
}

impl GameState {
    pub fn new(rules: Arc<Rules>, horizon: Option<usize>) -> Self {
        let status = if horizon == Some(0) {
            GameStatus::DrawAtHorizon
        } else {
            GameStatus::Ongoing
        };
        GameState {
            rules,
            horizon,
            pool_size: 0,
            p1: BTreeSet::new(),
            p2: BTreeSet::new(),
            log: Vec::new(),
            status,
        }
    }

    /// Builds a position from two edge sets without a move history, for
    /// tests and generated fixtures. The side to move follows from the
    /// edge counts.
    pub fn from_edges(
        rules: Arc<Rules>,
        p1: BTreeSet<HEdge>,
        p2: BTreeSet<HEdge>,
    ) -> Result<Self, HyperError> {
        if !p1.is_disjoint(&p2) {
            return Err(HyperError::Domain("edge sets overlap".into()));
        }
        if p1.len() != p2.len() && p1.len() != p2.len() + 1 {
            return Err(HyperError::Domain("edge counts break alternation".into()));
        }
        let k = rules.target.arity();
        if let Some(e) = p1.iter().chain(&p2).find(|e| e.arity() != k) {
            return Err(HyperError::Domain(format!("edge {e} has the wrong arity")));
        }
        let pool_size = p1
            .iter()
            .chain(&p2)
            .map(|e| e.max_vertex() + 1)
            .max()
            .unwrap_or(0);
        Ok(GameState {
            rules,
            horizon: None,
            pool_size,
            p1,
            p2,
            log: Vec::new(),
            status: GameStatus::Ongoing,
        })
    }

    pub fn rules(&self) -> &Arc<Rules> {
        &self.rules
    }

    pub fn target(&self) -> &TargetGraph {
        &self.rules.target
    }

    pub fn arity(&self) -> usize {
        self.rules.target.arity()
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn pool_size(&self) -> Vertex {
        self.pool_size
    }

    pub fn status(&self) -> &GameStatus {
        &self.status
    }

    pub fn move_log(&self) -> &[(Player, HEdge)] {
        &self.log
    }

    pub fn edges(&self, player: Player) -> &BTreeSet<HEdge> {
        match player {
            Player::P1 => &self.p1,
            Player::P2 => &self.p2,
        }
    }

    pub fn owner(&self, e: &HEdge) -> Option<Player> {
        if self.p1.contains(e) {
            Some(Player::P1)
        } else if self.p2.contains(e) {
            Some(Player::P2)
        } else {
            None
        }
    }

    pub fn is_free(&self, e: &HEdge) -> bool {
        self.owner(e).is_none()
    }

    pub fn to_move(&self) -> Player {
        if self.p1.len() == self.p2.len() {
            Player::P1
        } else {
            Player::P2
        }
    }

    /// Lowest never-used vertex id.
    pub fn fresh_vertex(&self) -> Vertex {
        self.pool_size
    }

    pub fn degree(&self, player: Player, v: Vertex) -> usize {
        self.edges(player).iter().filter(|e| e.contains(v)).count()
    }

    pub fn max_degree(&self, player: Player) -> usize {
        let mut deg: BTreeMap<Vertex, usize> = BTreeMap::new();
        for e in self.edges(player) {
            for &v in e.vertices() {
                *deg.entry(v).or_default() += 1;
            }
        }
        deg.values().copied().max().unwrap_or(0)
    }

    /// `e^{player}(target)`: the player's progress measure.
    pub fn progress(&self, player: Player) -> usize {
        if let Some(star) = &self.rules.star {
            return star.max(
                &EdgeIndex::new(self.edges(player)),
                &EdgeIndex::new(self.edges(player.other())),
            );
        }
        max_overlap(
            self.target(),
            self.edges(player),
            self.edges(player.other()),
            self.pool_size as usize,
        )
    }

    pub fn apply_move(&self, player: Player, edge: HEdge) -> Result<GameState, MoveError> {
        let mut next = self.clone();
        next.play(player, edge)?;
        Ok(next)
    }

    /// In-place variant of [`GameState::apply_move`].
    pub fn play(&mut self, player: Player, edge: HEdge) -> Result<(), MoveError> {
        if self.status.is_over() {
            return Err(MoveError::GameOver(self.status.label()));
        }
        let expected = self.to_move();
        if player != expected {
            return Err(MoveError::WrongTurn {
                expected,
                got: player,
            });
        }
        let k = self.arity();
        if edge.arity() != k {
            return Err(MoveError::ArityMismatch {
                edge,
                expected: k,
                got: edge.arity(),
            });
        }
        if !self.is_free(&edge) {
            return Err(MoveError::EdgeAlreadyClaimed(edge));
        }
        match player {
            Player::P1 => self.p1.insert(edge),
            Player::P2 => self.p2.insert(edge),
        };
        self.pool_size = self.pool_size.max(edge.max_vertex() + 1);
        self.log.push((player, edge));
        self.status = self.evaluate(player, &edge);
        Ok(())
    }

    fn evaluate(&self, player: Player, last: &HEdge) -> GameStatus {
        let own = self.edges(player);
        if own.len() >= self.target().edge_count() {
            let index = EdgeIndex::new(own);
            if let Some(map) = self.rules.full.find_through(&index, last) {
                let emb = Embedding(map);
                return match player {
                    Player::P1 => GameStatus::P1Win(emb),
                    Player::P2 => GameStatus::P2Win(emb),
                };
            }
        }
        match self.horizon {
            Some(h) if self.log.len() >= h => GameStatus::DrawAtHorizon,
            _ => GameStatus::Ongoing,
        }
    }

    /// All threats of `player`, one per (held edge images, completing edge).
    /// A completing edge may use vertices not yet in the pool; those get the
    /// ids `pool_size`, `pool_size + 1`, ...
    pub fn threats(&self, player: Player) -> Vec<ThreatRecord> {
        let mut out: BTreeMap<(Vec<HEdge>, HEdge), ThreatRecord> = BTreeMap::new();
        self.scan_threats(player, &mut |key, rec| {
            out.entry(key).or_insert(rec);
            true
        });
        out.into_values().collect()
    }

    /// Completing edges of all threats of `player`.
    pub fn threat_edges(&self, player: Player) -> BTreeSet<HEdge> {
        if let Some(fast) = self.star_threats(player) {
            return fast;
        }
        self.threat_edges_by_search(player)
    }

    fn star_threats(&self, player: Player) -> Option<BTreeSet<HEdge>> {
        let star = self.rules.star.as_ref()?;
        let own = self.edges(player);
        if own.len() + 1 < star.edge_count() {
            return Some(BTreeSet::new());
        }
        let own = EdgeIndex::new(own);
        let opp = EdgeIndex::new(self.edges(player.other()));
        star.threat_edges(&own, &opp, self.pool_size)
    }

    /// [`GameState::threat_edges`] by enumerating every threat.
    pub fn threat_edges_by_search(&self, player: Player) -> BTreeSet<HEdge> {
        let mut out = BTreeSet::new();
        self.scan_threats(player, &mut |_, rec| {
            out.insert(rec.completing);
            true
        });
        out
    }

    pub fn has_threat(&self, player: Player) -> bool {
        if let Some(fast) = self.star_threats(player) {
            return !fast.is_empty();
        }
        let mut found = false;
        self.scan_threats(player, &mut |_, _| {
            found = true;
            false
        });
        found
    }

    fn scan_threats(
        &self,
        player: Player,
        visit: &mut dyn FnMut((Vec<HEdge>, HEdge), ThreatRecord) -> bool,
    ) {
        let own = self.edges(player);
        if own.len() + 1 < self.target().edge_count() {
            return;
        }
        let index = EdgeIndex::new(own);
        for (removed, matcher, isolated) in &self.rules.minus {
            let go = matcher.for_each(&index, &mut |map| {
                let images = {
                    let mut v: Vec<HEdge> = matcher
                        .edges()
                        .iter()
                        .map(|e| e.map(|x| map[x as usize]))
                        .collect();
                    v.sort_unstable();
                    v
                };
                let mut full = map.to_vec();
                self.place_isolated(&mut full, isolated, 0, self.pool_size, &mut |full| {
                    let completing = removed.map(|x| full[x as usize]);
                    if !self.is_free(&completing) {
                        return true;
                    }
                    let rec = ThreatRecord {
                        owner: player,
                        embedding: Embedding(full.to_vec()),
                        removed: *removed,
                        completing,
                    };
                    visit((images.clone(), completing), rec)
                })
            });
            if !go {
                return;
            }
        }
    }

    /// Isolated pattern vertices go to unused pool vertices or to the next
    /// fresh id; fresh ids are handed out in increasing order so that each
    /// threat family is reported once.
    fn place_isolated(
        &self,
        map: &mut Vec<Vertex>,
        isolated: &[Vertex],
        i: usize,
        next_fresh: Vertex,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if i == isolated.len() {
            return visit(map);
        }
        let slot = isolated[i] as usize;
        for h in (0..self.pool_size).chain(std::iter::once(next_fresh)) {
            if map.contains(&h) {
                continue;
            }
            let bump = if h == next_fresh { next_fresh + 1 } else { next_fresh };
            map[slot] = h;
            let go = self.place_isolated(map, isolated, i + 1, bump, visit);
            map[slot] = crate::hypercore::Vertex::MAX;
            if !go {
                return false;
            }
        }
        true
    }

    pub fn trace(&self) -> Trace {
        Trace {
            header: TraceHeader {
                k: self.arity(),
                target: self.target().name().to_string(),
                horizon: self.horizon,
            },
            moves: self.log.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub k: usize,
    pub target: String,
    pub horizon: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct TraceLine {
    i: usize,
    p: Player,
    e: HEdge,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Target(#[from] HyperError),
    #[error("move {index}: {source}")]
    Move { index: usize, source: MoveError },
}

/// A game record: header plus the move list, stored as JSON lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub moves: Vec<(Player, HEdge)>,
}

impl Trace {
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for (i, (p, e)) in self.moves.iter().enumerate() {
            let line = TraceLine { i: i + 1, p: *p, e: *e };
            out.push_str(&serde_json::to_string(&line).expect("move serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, TraceError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(TraceError::Format {
            line: 1,
            message: "empty trace".into(),
        })?;
        let header: TraceHeader = serde_json::from_str(first).map_err(|e| TraceError::Format {
            line: 1,
            message: e.to_string(),
        })?;
        let mut moves = Vec::new();
        for (no, line) in lines {
            let m: TraceLine = serde_json::from_str(line).map_err(|e| TraceError::Format {
                line: no + 1,
                message: e.to_string(),
            })?;
            if m.i != moves.len() + 1 {
                return Err(TraceError::Format {
                    line: no + 1,
                    message: format!("expected move index {}, found {}", moves.len() + 1, m.i),
                });
            }
            moves.push((m.p, m.e));
        }
        Ok(Trace { header, moves })
    }

    /// Replays the moves on `target`, checking every move's legality.
    pub fn replay_on(&self, target: TargetGraph) -> Result<GameState, TraceError> {
        if target.arity() != self.header.k {
            return Err(TraceError::Format {
                line: 1,
                message: format!("trace arity {} but target arity {}", self.header.k, target.arity()),
            });
        }
        let mut state = new_game(target, self.header.horizon);
        for (i, (p, e)) in self.moves.iter().enumerate() {
            state.play(*p, *e).map_err(|source| TraceError::Move { index: i + 1, source })?;
        }
        Ok(state)
    }

    /// Replays on the target named in the header.
    pub fn replay(&self) -> Result<GameState, TraceError> {
        self.replay_on(target_by_name(&self.header.target)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{g_minus, hat_k24_3, k2t_target};

    fn e(v: &[Vertex]) -> HEdge {
        HEdge::new(v).unwrap()
    }

    #[test]
    fn fresh_game() {
        let g = new_game(hat_k24_3(), None);
        assert_eq!(g.status(), &GameStatus::Ongoing);
        assert_eq!(g.to_move(), Player::P1);
        assert_eq!(g.fresh_vertex(), 0);
        assert_eq!(g.edges(Player::P1).len() + g.edges(Player::P2).len(), 0);
    }

    #[test]
    fn move_errors() {
        let g = new_game(hat_k24_3(), None);
        let g = g.apply_move(Player::P1, e(&[0, 1, 2])).unwrap();
        assert_eq!(g.to_move(), Player::P2);
        assert_eq!(g.fresh_vertex(), 3);
        assert!(matches!(
            g.apply_move(Player::P2, e(&[0, 1, 2])),
            Err(MoveError::EdgeAlreadyClaimed(_))
        ));
        assert!(matches!(
            g.apply_move(Player::P1, e(&[3, 4, 5])),
            Err(MoveError::WrongTurn { .. })
        ));
        assert!(matches!(
            g.apply_move(Player::P2, e(&[3, 4])),
            Err(MoveError::ArityMismatch { .. })
        ));
    }

    /// Plays `mine` for `player` and throwaway far-away edges for the other.
    fn play_unopposed(target: TargetGraph, mine: &[HEdge], player: Player) -> GameState {
        let mut g = new_game(target, None);
        let mut filler = 100;
        let mut turn = Player::P1;
        let mut it = mine.iter();
        loop {
            if turn == player {
                match it.next() {
                    Some(m) => g.play(turn, *m).unwrap(),
                    None => break,
                }
            } else {
                g.play(turn, e(&[filler, filler + 1, filler + 2])).unwrap();
                filler += 3;
            }
            if g.status().is_over() {
                break;
            }
            turn = turn.other();
        }
        g
    }

    #[test]
    fn unopposed_copy_wins_and_freezes() {
        let t = hat_k24_3();
        let g = play_unopposed(t.clone(), t.edges(), Player::P1);
        match g.status() {
            GameStatus::P1Win(emb) => {
                let imgs = emb.image_edges(t.edges());
                assert!(imgs.iter().all(|x| g.edges(Player::P1).contains(x)));
            }
            s => panic!("expected a win, got {s:?}"),
        }
        assert!(matches!(
            g.apply_move(Player::P2, e(&[50, 51, 52])),
            Err(MoveError::GameOver(_))
        ));
    }

    #[test]
    fn second_player_can_win() {
        let t = k2t_target(3).unwrap();
        let g = play_unopposed(t.clone(), t.edges(), Player::P2);
        assert!(matches!(g.status(), GameStatus::P2Win(_)));
    }

    #[test]
    fn horizon_draw() {
        let mut g = new_game(hat_k24_3(), Some(4));
        for (i, m) in [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]].iter().enumerate() {
            assert_eq!(g.status(), &GameStatus::Ongoing);
            let p = if i % 2 == 0 { Player::P1 } else { Player::P2 };
            g.play(p, e(m)).unwrap();
        }
        assert_eq!(g.status(), &GameStatus::DrawAtHorizon);
    }

    #[test]
    fn degrees_after_five_scripted_moves() {
        // P2's five edges a b v_i with a = 3, b = 4
        let mut g = new_game(hat_k24_3(), None);
        for i in 0..5u32 {
            g.play(Player::P1, e(&[20 + 3 * i, 21 + 3 * i, 22 + 3 * i])).unwrap();
            g.play(Player::P2, e(&[3, 4, 5 + i])).unwrap();
        }
        assert_eq!(g.degree(Player::P2, 3), 5);
        assert_eq!(g.degree(Player::P2, 4), 5);
        assert_eq!(g.max_degree(Player::P2), 5);
        assert_eq!(g.degree(Player::P1, g.fresh_vertex()), 0);
    }

    #[test]
    fn threat_for_copy_missing_one_edge() {
        let t = hat_k24_3();
        let missing = t.main_edge().unwrap();
        let mine: Vec<HEdge> = t.edges().iter().copied().filter(|x| *x != missing).collect();
        let g = play_unopposed(t.clone(), &mine, Player::P1);
        let threats = g.threats(Player::P1);
        assert!(!threats.is_empty());
        assert!(threats.iter().any(|r| r.completing == missing));
        assert!(g.threat_edges(Player::P1).contains(&missing));
        assert!(g.has_threat(Player::P1));
        assert!(!g.has_threat(Player::P2));
        for r in &threats {
            let held: Vec<HEdge> = t
                .edges()
                .iter()
                .filter(|x| **x != r.removed)
                .map(|x| r.embedding.map_edge(x))
                .collect();
            assert!(held.iter().all(|x| g.edges(Player::P1).contains(x)));
            assert!(g.is_free(&r.completing));
        }
        assert_eq!(g.progress(Player::P1), 8);
    }

    #[test]
    fn threat_with_fresh_completing_vertex() {
        // G^- has a leaf; dropping the leaf edge leaves it isolated
        let t = g_minus();
        let leaf_edge = *t
            .edges()
            .iter()
            .find(|x| x.vertices().iter().any(|&v| t.degree(v) == 1))
            .unwrap();
        let mine: Vec<HEdge> = t.edges().iter().copied().filter(|x| *x != leaf_edge).collect();
        let g = play_unopposed(t.clone(), &mine, Player::P1);
        let fresh = g.fresh_vertex();
        let closing = g.threat_edges(Player::P1);
        assert!(closing.iter().any(|c| c.contains(fresh)));
        assert!(closing.iter().all(|c| !c.contains(fresh + 1)));
    }

    #[test]
    fn trace_round_trip_is_bit_exact() {
        let t = hat_k24_3();
        let g = play_unopposed(t.clone(), &t.edges()[..5], Player::P1);
        let text = g.trace().to_jsonl();
        assert!(text.starts_with("{\"k\":3,\"target\":\"hatK24-3\",\"horizon\":null}\n"));
        assert!(text.contains("{\"i\":1,\"p\":1,\"e\":["));
        let back = Trace::from_jsonl(&text).unwrap();
        assert_eq!(back.to_jsonl(), text);
        let replayed = back.replay().unwrap();
        assert_eq!(replayed, g);
    }

    #[test]
    fn trace_errors() {
        assert!(Trace::from_jsonl("").is_err());
        let bad = "{\"k\":3,\"target\":\"gminus\",\"horizon\":null}\n{\"i\":2,\"p\":1,\"e\":[0,1,2]}\n";
        assert!(Trace::from_jsonl(bad).is_err());
        let illegal = "{\"k\":3,\"target\":\"gminus\",\"horizon\":null}\n{\"i\":1,\"p\":2,\"e\":[0,1,2]}\n";
        assert!(Trace::from_jsonl(illegal).unwrap().replay().is_err());
    }
}
