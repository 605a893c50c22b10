//! Writes the seeded training corpus shipped under `corpus/<game>/`.
//!
//! The levels are hand-shaped procedural stand-ins for the VGLC originals:
//! enough variety for a useful n-gram, and the structures (pipes, doors,
//! blocks) each game's checks know about.
//!
//! ```text
//! cargo run --example make_corpus [-- <out-dir>]
//! ```

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LEVELS: usize = 8;

fn main() -> std::io::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus"));
    for (game, make) in [
        ("mario", mario_level as fn(&mut ChaCha8Rng) -> Vec<String>),
        ("icarus", icarus_level),
        ("dungeongrams", dungeon_level),
    ] {
        let dir = out.join(game);
        fs::create_dir_all(&dir)?;
        for i in 0..LEVELS {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * game.len() as u64 + i as u64);
            let rows = make(&mut rng);
            let path = dir.join(format!("{game}_{:02}.txt", i + 1));
            fs::write(&path, rows.join("\n") + "\n")?;
        }
        println!("{game}: {LEVELS} levels -> {}", dir.display());
    }
    Ok(())
}

// ---- mario: 14 rows, built column by column ----

const H: usize = 14;

fn column(fill: &[(usize, u8)]) -> [u8; H] {
    let mut c = [b'-'; H];
    c[12] = b'X';
    c[13] = b'X';
    for &(y, t) in fill {
        c[y] = t;
    }
    c
}

fn mario_level(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut cols: Vec<[u8; H]> = Vec::new();
    let flat = |cols: &mut Vec<[u8; H]>, rng: &mut ChaCha8Rng, n: usize| {
        for _ in 0..n {
            let c = match rng.gen_range(0..20) {
                0 => column(&[(11, b'E')]),
                1 => column(&[(7, b'o')]),
                _ => column(&[]),
            };
            cols.push(c);
        }
    };
    flat(&mut cols, rng, 6);
    while cols.len() < 190 {
        let run = rng.gen_range(4..14);
        flat(&mut cols, rng, run);
        match rng.gen_range(0..7) {
            0 => {
                // gap
                let w = rng.gen_range(1..=3);
                for _ in 0..w {
                    cols.push([b'-'; H]);
                }
            }
            1 => {
                // pipe, 2 to 3 tiles tall
                let top = 12 - rng.gen_range(2..=3);
                let mut l = column(&[(top, b'<')]);
                let mut r = column(&[(top, b'>')]);
                for y in top + 1..12 {
                    l[y] = b'[';
                    r[y] = b']';
                }
                cols.push(l);
                cols.push(r);
            }
            2 => {
                // brick row with a question block and coins above
                let w = rng.gen_range(3..=5);
                let q = rng.gen_range(0..w);
                for i in 0..w {
                    let t = if i == q { b'?' } else { b'S' };
                    if rng.gen_bool(0.5) {
                        cols.push(column(&[(8, t), (6, b'o')]));
                    } else {
                        cols.push(column(&[(8, t)]));
                    }
                }
            }
            3 => {
                // staircase up then down
                let hmax = rng.gen_range(2..=3);
                for h in (1..=hmax).chain((1..=hmax).rev()) {
                    let fill: Vec<(usize, u8)> = (12 - h..12).map(|y| (y, b'X')).collect();
                    cols.push(column(&fill));
                }
            }
            4 => {
                // cannon
                let h = rng.gen_range(1..=2);
                let mut fill = vec![(11 - h, b'B')];
                fill.extend((12 - h..12).map(|y| (y, b'b')));
                cols.push(column(&fill));
            }
            5 => {
                // floating used blocks
                let w = rng.gen_range(2..=4);
                for _ in 0..w {
                    cols.push(column(&[(9, b'Q')]));
                }
            }
            _ => {
                // goomba pair
                cols.push(column(&[(11, b'E')]));
                cols.push(column(&[]));
                cols.push(column(&[(11, b'E')]));
            }
        }
    }
    flat(&mut cols, rng, 6);
    (0..H)
        .map(|y| cols.iter().map(|c| c[y] as char).collect())
        .collect()
}

// ---- icarus: 16 wide, built bottom to top ----

const EMPTY: &str = "----------------";

fn icarus_platform(rng: &mut ChaCha8Rng) -> String {
    const ROWS: [&str; 12] = [
        "----TTTTTTTT----",
        "TTTT--------TTTT",
        "----TTTTTTTT----",
        "TTTT--------TTTT",
        "######----------",
        "----------######",
        "-----######-----",
        "--TTTT----TTTT--",
        "##--TTTT----TT##",
        "----TTHHTT------",
        "------MMMM------",
        "TTT---HHHH---TTT",
    ];
    ROWS[rng.gen_range(0..ROWS.len())].to_string()
}

fn icarus_level(rng: &mut ChaCha8Rng) -> Vec<String> {
    // bottom to top
    let mut rows = vec!["################".to_string()];
    while rows.len() < 150 {
        let gap = match rng.gen_range(0..10) {
            0 => 1,
            1..=2 => 2,
            _ => 3,
        };
        if rng.gen_range(0..8) == 0 {
            // door standing on a hub platform
            let x = rng.gen_range(5..11);
            let mut d = EMPTY.as_bytes().to_vec();
            d[x] = b'D';
            let d = String::from_utf8(d).unwrap();
            rows.push("----TTTTTTTT----".to_string());
            rows.push(d.clone());
            rows.push(d);
            if gap > 2 {
                rows.push(EMPTY.to_string());
            }
            continue;
        }
        for _ in 0..gap {
            rows.push(EMPTY.to_string());
        }
        rows.push(icarus_platform(rng));
    }
    rows.reverse();
    rows
}

// ---- dungeongrams: 8 rows, walled top and bottom ----

fn dungeon_level(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut cols: Vec<[u8; 8]> = Vec::new();
    let open = || {
        let mut c = [b'-'; 8];
        c[0] = b'X';
        c[7] = b'X';
        c
    };
    while cols.len() < 120 {
        let mut c = open();
        match rng.gen_range(0..30) {
            0..=14 => {}
            15..=16 => c[rng.gen_range(3..5)] = b'&',
            17..=18 => c[[1, 2, 5, 6][rng.gen_range(0..4)]] = b'E',
            19..=20 => c[[1, 6][rng.gen_range(0..2)]] = b'^',
            21 => c[rng.gen_range(3..5)] = b'*',
            22..=24 => {
                // pillar with a doorway
                let hole = [1, 3, 5][rng.gen_range(0..3)];
                for y in 1..7 {
                    if y != hole && y != hole + 1 {
                        c[y] = b'X';
                    }
                }
            }
            25..=26 => {
                // 4x2 block against a wall
                let y = [1, 5][rng.gen_range(0..2)];
                for t in [b'L', b'M', b'M', b'R'] {
                    let mut b = open();
                    b[y] = t;
                    b[y + 1] = t;
                    cols.push(b);
                }
                continue;
            }
            _ => c[[1, 6][rng.gen_range(0..2)]] = b'X',
        }
        cols.push(c);
    }
    (0..8)
        .map(|y| cols.iter().map(|c| c[y] as char).collect())
        .collect()
}
