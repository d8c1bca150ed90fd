//! Line-delimited JSON game service. Each connection holds one session in
//! which a human plays P1 and an engine strategy replies as P2. Every
//! response carries `"v":1`; errors leave the session unchanged.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::thread;

use ramsey_core::game::{new_game, GameState, Player, ThreatRecord};
use ramsey_core::hypercore::{x_board, HEdge, Vertex};
use ramsey_core::strategy::{greedy_move, Strategy, StrategyDecision};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{default_strategy, make_strategy, resolve_target};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Request {
    NewGame {
        target: String,
        #[serde(default)]
        horizon: Option<usize>,
        /// Engine strategy; defaults to the target's own.
        #[serde(default)]
        p2: Option<String>,
        #[serde(default)]
        center: Option<Vertex>,
    },
    Move {
        e: Vec<Vertex>,
        #[serde(default)]
        center: Option<Vertex>,
    },
    Hint,
    Resign {
        #[serde(default)]
        center: Option<Vertex>,
    },
    Snapshot {
        #[serde(default)]
        center: Option<Vertex>,
    },
}

struct Game {
    state: GameState,
    p2: Box<dyn Strategy>,
    last_reply: Option<StrategyDecision>,
    resigned: bool,
}

#[derive(Default)]
pub struct Session {
    game: Option<Game>,
}

pub fn error(code: &str, message: impl Into<String>) -> Value {
    json!({"v": PROTOCOL_VERSION, "type": "error", "code": code, "message": message.into()})
}

/// One threat as served: held edge images, completing edge and the target
/// edge it stands for.
pub fn threat_json(state: &GameState, t: &ThreatRecord) -> Value {
    let held: Vec<HEdge> = state.target().edges().iter().copied().filter(|e| *e != t.removed).collect();
    json!({
        "edges": t.embedding.image_edges(&held),
        "completing": t.completing,
        "removed": t.removed,
    })
}

pub fn threats_json(state: &GameState, player: Player) -> Vec<Value> {
    state.threats(player).iter().map(|t| threat_json(state, t)).collect()
}

/// The full state message for a position.
pub fn state_json(
    state: &GameState,
    last_reply: Option<&StrategyDecision>,
    resigned: bool,
    center: Option<Vertex>,
) -> Value {
    let status = if resigned { "P1Resigned" } else { state.status().label() };
    let winner = if resigned { Some(Player::P2) } else { state.status().winner() };
    let embedding = match state.status() {
        ramsey_core::game::GameStatus::P1Win(e) | ramsey_core::game::GameStatus::P2Win(e) => Some(e),
        _ => None,
    };
    let xb = center.map(|x| {
        let pairs = |p: Player| -> Vec<[Vertex; 2]> {
            x_board(state.edges(p), x).into_iter().map(|(a, b)| [a, b]).collect()
        };
        json!({"center": x, "p1": pairs(Player::P1), "p2": pairs(Player::P2)})
    });
    json!({
        "v": PROTOCOL_VERSION,
        "type": "state",
        "target": state.target().name(),
        "k": state.arity(),
        "horizon": state.horizon(),
        "ply": state.move_log().len(),
        "to_move": state.to_move(),
        "status": status,
        "winner": winner,
        "embedding": embedding,
        "edges": {"p1": state.edges(Player::P1), "p2": state.edges(Player::P2)},
        "moves": state.move_log(),
        "last_reply": last_reply.map(|d| json!({"e": d.edge, "tag": d.tag, "distraction": d.distraction})),
        "threats": {"p1": threats_json(state, Player::P1), "p2": threats_json(state, Player::P2)},
        "progress": {
            "p1": state.progress(Player::P1),
            "p2": state.progress(Player::P2),
            "max": state.target().edge_count(),
        },
        "x_board": xb,
    })
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self) -> Option<&GameState> {
        self.game.as_ref().map(|g| &g.state)
    }

    /// Answers one request line.
    pub fn handle_line(&mut self, line: &str) -> Value {
        let raw: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => return error("BadJson", e.to_string()),
        };
        match serde_json::from_value::<Request>(raw) {
            Ok(r) => self.handle(r),
            Err(e) => error("BadRequest", e.to_string()),
        }
    }

    pub fn handle(&mut self, req: Request) -> Value {
        match req {
            Request::NewGame {
                target,
                horizon,
                p2,
                center,
            } => self.new_game(&target, horizon, p2.as_deref(), center),
            Request::Move { e, center } => self.play(&e, center),
            Request::Hint => self.hint(),
            Request::Resign { center } => match &mut self.game {
                None => error("NoGame", "send new_game first"),
                Some(g) if g.state.status().is_over() || g.resigned => error("GameOver", "the game is over"),
                Some(g) => {
                    g.resigned = true;
                    self.snapshot(center)
                }
            },
            Request::Snapshot { center } => self.snapshot(center),
        }
    }

    fn new_game(&mut self, target: &str, horizon: Option<usize>, p2: Option<&str>, center: Option<Vertex>) -> Value {
        let t = match resolve_target(target, None) {
            Ok(t) => t,
            Err(e) => return error("UnknownTarget", e.to_string()),
        };
        let Some(spec) = p2.map(str::to_string).or_else(|| default_strategy(target)) else {
            return error("NoStrategy", format!("no engine strategy for {target}; name one in p2"));
        };
        let p2 = match make_strategy(&spec, Player::P2, None) {
            Ok(s) => s,
            Err(e) => return error("UnknownStrategy", e.to_string()),
        };
        self.game = Some(Game {
            state: new_game(t, horizon),
            p2,
            last_reply: None,
            resigned: false,
        });
        self.snapshot(center)
    }

    fn snapshot(&self, center: Option<Vertex>) -> Value {
        match &self.game {
            None => error("NoGame", "send new_game first"),
            Some(g) => state_json(&g.state, g.last_reply.as_ref(), g.resigned, center),
        }
    }

    fn play(&mut self, e: &[Vertex], center: Option<Vertex>) -> Value {
        let Some(g) = &mut self.game else {
            return error("NoGame", "send new_game first");
        };
        if g.resigned {
            return error("GameOver", "P1 resigned");
        }
        let edge = match HEdge::new(e) {
            Ok(x) => x,
            Err(err) => return error("BadEdge", err.to_string()),
        };
        // check on a copy so that a failed reply leaves the session as it was
        let mut next = g.state.clone();
        if let Err(err) = next.play(Player::P1, edge) {
            return error(err.code(), err.to_string());
        }
        let mut p2 = g.p2.clone_box();
        let mut reply = None;
        if !next.status().is_over() {
            let d = match p2.decide(&next) {
                Ok(d) => d,
                Err(err) => return error("StrategyError", err.to_string()),
            };
            if let Err(err) = next.play(Player::P2, d.edge) {
                return error("StrategyError", err.to_string());
            }
            reply = Some(d);
        }
        g.state = next;
        g.p2 = p2;
        g.last_reply = reply;
        self.snapshot(center)
    }

    fn hint(&self) -> Value {
        let Some(g) = &self.game else {
            return error("NoGame", "send new_game first");
        };
        if g.resigned || g.state.status().is_over() {
            return error("GameOver", "the game is over");
        }
        let d = greedy_move(&g.state, Player::P1, None);
        json!({"v": PROTOCOL_VERSION, "type": "hint", "e": d.edge, "tag": d.tag})
    }
}

/// Serves requests from `input` until it closes.
pub fn serve_lines(input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    let mut session = Session::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = session.handle_line(&line);
        writeln!(output, "{resp}")?;
        output.flush()?;
    }
    Ok(())
}

pub fn serve_stdio() -> std::io::Result<()> {
    serve_lines(std::io::stdin().lock(), std::io::stdout().lock())
}

pub fn serve_tcp(host: &str, port: u16) -> std::io::Result<()> {
    let listener = TcpListener::bind((host, port))?;
    eprintln!("listening on {}", listener.local_addr()?);
    serve_listener(listener)
}

/// Accepts connections forever, one thread and one session each.
pub fn serve_listener(listener: TcpListener) -> std::io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        thread::spawn(move || {
            let reader = match stream.try_clone() {
                Ok(s) => BufReader::new(s),
                Err(_) => return,
            };
            let _ = serve_lines(reader, stream);
        });
    }
    Ok(())
}
