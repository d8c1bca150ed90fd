use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ramsey_cli::play_out;
use ramsey_cli::protocol::{serve_listener, state_json, Session};
use ramsey_core::game::{GameState, Player, Trace, TraceHeader};
use ramsey_core::hypercore::{format_edge_list, hat_k24_3, HEdge};
use ramsey_core::strategy::{greedy_move, K24Strategy, ScriptedP1};
use serde_json::{json, Value};

fn send(s: &mut Session, req: Value) -> Value {
    let resp = s.handle_line(&req.to_string());
    assert_eq!(resp["v"], 1, "{resp}");
    resp
}

fn edge_of(v: &Value) -> HEdge {
    let vs: Vec<u32> = serde_json::from_value(v.clone()).unwrap();
    HEdge::new(&vs).unwrap()
}

#[test]
fn duplicate_move_is_rejected_and_the_session_survives() {
    let mut s = Session::new();
    send(&mut s, json!({"type": "new_game", "target": "hatK24-3", "horizon": 40}));
    let after = send(&mut s, json!({"type": "move", "e": [0, 1, 2]}));
    assert_eq!(after["type"], "state");
    let err = send(&mut s, json!({"type": "move", "e": [0, 1, 2]}));
    assert_eq!(err["type"], "error");
    assert_eq!(err["code"], "EdgeAlreadyClaimed");
    assert_eq!(send(&mut s, json!({"type": "snapshot"})), after);
    // the engine's reply is taken too
    let reply = after["last_reply"]["e"].clone();
    let err = send(&mut s, json!({"type": "move", "e": reply}));
    assert_eq!(err["code"], "EdgeAlreadyClaimed");
}

#[test]
fn protocol_errors_have_codes() {
    let mut s = Session::new();
    assert_eq!(send(&mut s, json!({"type": "snapshot"}))["code"], "NoGame");
    assert_eq!(s.handle_line("{not json")["code"], "BadJson");
    assert_eq!(send(&mut s, json!({"type": "jump"}))["code"], "BadRequest");
    assert_eq!(send(&mut s, json!({"type": "new_game", "target": "nope"}))["code"], "UnknownTarget");
    assert_eq!(send(&mut s, json!({"type": "new_game", "target": "gminus"}))["code"], "NoStrategy");
    send(&mut s, json!({"type": "new_game", "target": "k2t3"}));
    assert_eq!(send(&mut s, json!({"type": "move", "e": [0, 1]}))["code"], "ArityMismatch");
    assert_eq!(send(&mut s, json!({"type": "move", "e": [0, 0, 1]}))["code"], "BadEdge");
    let hint = send(&mut s, json!({"type": "hint"}));
    assert_eq!(hint["type"], "hint");
    assert_eq!(hint["e"].as_array().unwrap().len(), 3);
    let r = send(&mut s, json!({"type": "resign"}));
    assert_eq!(r["status"], "P1Resigned");
    assert_eq!(r["winner"], 2);
    assert_eq!(send(&mut s, json!({"type": "move", "e": [0, 1, 2]}))["code"], "GameOver");
}

#[test]
fn unblocked_copy_wins_with_embedding() {
    let mut s = Session::new();
    // a one-edge target: the first move completes it
    send(&mut s, json!({"type": "new_game", "target": "path1-3", "p2": "k24"}));
    let r = send(&mut s, json!({"type": "move", "e": [3, 5, 9]}));
    assert_eq!(r["status"], "P1Win");
    assert_eq!(r["winner"], 1);
    let emb: BTreeSet<u64> = r["embedding"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(emb, BTreeSet::from([3, 5, 9]));
    assert!(r["last_reply"].is_null());
}

/// Plays a session of greedy human moves and returns every served state.
fn greedy_session(seed: u64, moves: usize) -> Vec<Value> {
    let mut s = Session::new();
    let mut states = vec![send(&mut s, json!({"type": "new_game", "target": "hatK24-3", "horizon": 60, "center": 0}))];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..moves {
        let g = s.state().unwrap();
        if g.status().is_over() {
            break;
        }
        let e = greedy_move(g, Player::P1, Some(&mut rng)).edge;
        let r = send(&mut s, json!({"type": "move", "e": e, "center": 0}));
        assert_eq!(r["type"], "state", "{r}");
        states.push(r);
    }
    states
}

fn replay(state: &Value) -> GameState {
    let moves: Vec<(Player, HEdge)> = serde_json::from_value(state["moves"].clone()).unwrap();
    let trace = Trace {
        header: TraceHeader {
            k: 3,
            target: "hatK24-3".into(),
            horizon: Some(60),
        },
        moves,
    };
    trace.replay_on(hat_k24_3()).unwrap()
}

#[test]
fn served_threats_match_direct_queries() {
    let mut seen = 0;
    for seed in 0..4 {
        for st in greedy_session(seed, 25) {
            let g = replay(&st);
            for (p, key) in [(Player::P1, "p1"), (Player::P2, "p2")] {
                let direct: BTreeSet<(Vec<HEdge>, HEdge)> = g
                    .threats(p)
                    .iter()
                    .map(|t| {
                        let held: Vec<HEdge> = g.target().edges().iter().copied().filter(|e| *e != t.removed).collect();
                        (t.embedding.image_edges(&held), t.completing)
                    })
                    .collect();
                let served: BTreeSet<(Vec<HEdge>, HEdge)> = st["threats"][key]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| {
                        let edges = t["edges"].as_array().unwrap().iter().map(edge_of).collect();
                        (edges, edge_of(&t["completing"]))
                    })
                    .collect();
                assert_eq!(served, direct);
                assert_eq!(st["progress"][key], g.progress(p));
                seen += direct.len();
            }
            let xb = &st["x_board"];
            assert_eq!(xb["center"], 0);
            let pairs = xb["p1"].as_array().unwrap().len();
            assert_eq!(pairs, g.edges(Player::P1).iter().filter(|e| e.vertices().contains(&0)).count());
        }
    }
    assert!(seen > 0, "no threats ever served");
}

#[test]
fn replaying_session_moves_reproduces_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..3 {
        let served = greedy_session(seed + 10, 22);
        let last = served.last().unwrap();
        let human: Vec<HEdge> = replay(last).move_log().iter().filter(|m| m.0 == Player::P1).map(|m| m.1).collect();
        let path = dir.path().join(format!("script{seed}.txt"));
        std::fs::write(&path, format_edge_list(3, &human)).unwrap();
        let mut p1 = ScriptedP1::from_file(path.to_str().unwrap()).unwrap();
        let mut p2 = K24Strategy::new();
        let mut replayed = vec![state_json(&GameState::new(std::sync::Arc::new(ramsey_core::game::Rules::new(hat_k24_3())), Some(60)), None, false, Some(0))];
        play_out(&hat_k24_3(), &mut p1, &mut p2, 60, |g, mover, d| {
            if mover == Player::P2 {
                replayed.push(state_json(g, Some(d), false, Some(0)));
            } else if g.status().is_over() {
                replayed.push(state_json(g, None, false, Some(0)));
            }
        });
        assert_eq!(replayed.len(), served.len());
        for (a, b) in replayed.iter().zip(&served) {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn tcp_sessions_are_independent() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || serve_listener(listener));
    let mut conns: Vec<(TcpStream, BufReader<TcpStream>)> = (0..2)
        .map(|_| {
            let s = TcpStream::connect(addr).unwrap();
            let r = BufReader::new(s.try_clone().unwrap());
            (s, r)
        })
        .collect();
    let mut ask = |i: usize, req: Value| -> Value {
        let (s, r) = &mut conns[i];
        writeln!(s, "{req}").unwrap();
        let mut line = String::new();
        r.read_line(&mut line).unwrap();
        serde_json::from_str(&line).unwrap()
    };
    assert_eq!(ask(0, json!({"type": "new_game", "target": "hatK24-3"}))["v"], 1);
    assert_eq!(ask(1, json!({"type": "snapshot"}))["code"], "NoGame");
    let r = ask(0, json!({"type": "move", "e": [0, 1, 2]}));
    assert_eq!(r["ply"], 2);
    assert_eq!(ask(1, json!({"type": "new_game", "target": "k2t4"}))["ply"], 0);
}
