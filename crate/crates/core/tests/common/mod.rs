#![allow(dead_code)]

use afd_core::{Dataset, RawTable};
use rand::Rng;

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

fn wins(board: &[u8; 9], p: u8) -> bool {
    LINES.iter().any(|l| l.iter().all(|&i| board[i] == p))
}

fn play(board: &mut [u8; 9], turn: u8, out: &mut Vec<[u8; 9]>) {
    if wins(board, b'x') || wins(board, b'o') || !board.contains(&b'b') {
        if !out.contains(board) {
            out.push(*board);
        }
        return;
    }
    for i in 0..9 {
        if board[i] == b'b' {
            board[i] = turn;
            play(board, if turn == b'x' { b'o' } else { b'x' }, out);
            board[i] = b'b';
        }
    }
}

/// The tic-tac-toe endgame dataset: every distinct board at which a game
/// starting with x ends. Columns X1..X9 (row-major cells, values x/o/b) and
/// `class` (positive iff x has three in a row).
pub fn tictactoe_raw() -> RawTable {
    let mut boards = Vec::new();
    play(&mut [b'b'; 9], b'x', &mut boards);
    let mut header: Vec<String> = (1..=9).map(|i| format!("X{i}")).collect();
    header.push("class".into());
    let rows = boards
        .iter()
        .map(|b| {
            let mut row: Vec<String> = b.iter().map(|&c| (c as char).to_string()).collect();
            row.push(if wins(b, b'x') { "positive" } else { "negative" }.into());
            row
        })
        .collect();
    RawTable {
        name: "tic-tac-toe".into(),
        header,
        rows,
    }
}

pub fn tictactoe() -> Dataset {
    afd_core::encode_dataset(&tictactoe_raw(), "class", 5).unwrap()
}

pub fn tictactoe_csv() -> String {
    let raw = tictactoe_raw();
    let mut s = raw.header.join(",");
    s.push('\n');
    for r in &raw.rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn dense(values: Vec<u32>) -> Vec<u32> {
    let mut distinct = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32)
        .collect()
}

/// Random categorical dataset with a non-constant target. Some inputs are
/// noisy copies of the target so that dependencies of varying strength exist.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize, d: usize, max_domain: u32) -> Dataset {
    assert!(n >= 2 && max_domain >= 2);
    loop {
        let ydom = rng.gen_range(2..=max_domain);
        let y: Vec<u32> = (0..n).map(|_| rng.gen_range(0..ydom)).collect();
        if y.iter().all(|&v| v == y[0]) {
            continue;
        }
        let inputs = (0..d)
            .map(|_| {
                let dom = rng.gen_range(1..=max_domain);
                let noise = rng.gen_range(0.0..1.0);
                dense(
                    y.iter()
                        .map(|&t| {
                            if rng.gen_bool(noise) {
                                rng.gen_range(0..dom)
                            } else {
                                t % dom
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        return Dataset::from_code_columns(inputs, dense(y)).unwrap();
    }
}
