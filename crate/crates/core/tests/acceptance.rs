//! Acceptance suite. Every primary criterion runs at zero tolerance and
//! prints one PASS/FAIL line; the test fails if any line fails.
//!
//! Level-set stores are cached under `$PEGKIT_STORE` (default
//! `target/tmp/acceptance-stores`). A cached store is checksum-verified
//! before use, so a first run pays for the full backward searches (about
//! half an hour on one core) and later runs take a few minutes.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};

mod common;

/// Writes straight to stderr so result lines show without `--nocapture`.
macro_rules! report {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stderr().lock(), $($arg)*);
    }};
}


use common::{store, store_root};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pegkit::board::{Coord, Lattice};
use pegkit::catalog::{self, CensusRow, Puzzle};
use pegkit::class;
use pegkit::levelset::{self, LevelStore, RunConfig};
use pegkit::solver::{self, Keying, Solvability, Solver, Target, Template};
use pegkit::{Board, BoardId, ClassName, Position};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<String, String>) {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => report!("PASS  {name}: {detail}"),
            Err(detail) => {
                report!("FAIL  {name}: {detail}");
                self.failures.push(name.to_string());
            }
        }
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn rows(list: &[(u8, ClassName, u64)]) -> Vec<CensusRow> {
    list.iter()
        .map(|&(type_id, class, count)| CensusRow { type_id, class, count })
        .collect()
}

fn sorted(mut r: Vec<CensusRow>) -> Vec<CensusRow> {
    r.sort_by_key(|r| (r.type_id, r.class));
    r
}

const ENGLISH_UNIQUE: [(usize, usize, u64); 24] = [
    (4, 4, 2),
    (5, 7, 1),
    (6, 7, 2),
    (7, 9, 2),
    (8, 9, 4),
    (9, 11, 1),
    (10, 12, 1),
    (11, 12, 2),
    (12, 13, 4),
    (13, 14, 1),
    (14, 14, 4),
    (15, 15, 1),
    (16, 15, 1),
    (17, 17, 1),
    (18, 15, 2),
    (19, 15, 2),
    (20, 14, 3),
    (21, 13, 3),
    (22, 14, 1),
    (23, 11, 6),
    (24, 12, 1),
    (25, 10, 1),
    (26, 7, 3),
    (27, 6, 2),
];

/// Label counts straight from coordinates, independent of the board's
/// labeling tables.
fn label_counts(board: &Board, p: Position) -> Vec<u32> {
    let width = match board.lattice() {
        Lattice::Square => 6,
        Lattice::Triangular => 3,
    };
    let mut n = vec![0u32; width];
    for h in p.pegs() {
        let Coord { x, y } = board.holes()[h];
        match board.lattice() {
            Lattice::Square => {
                n[(x + y).rem_euclid(3) as usize] += 1;
                n[3 + (x - y).rem_euclid(3) as usize] += 1;
            }
            Lattice::Triangular => n[(x - y).rem_euclid(3) as usize] += 1,
        }
    }
    n
}

fn parity(n: &[u32]) -> Vec<u32> {
    n.chunks(3)
        .flat_map(|t| [(t[1] + t[2]) % 2, (t[0] + t[2]) % 2, (t[0] + t[1]) % 2])
        .collect()
}

/// The board's symmetry group rebuilt from geometry, as hole permutations.
fn geometric_group(board: &Board) -> Vec<Vec<usize>> {
    let holes = board.holes();
    let maps: Vec<Box<dyn Fn(Coord) -> Coord>> = match board.lattice() {
        Lattice::Square => {
            let (sx, sy) = (
                holes.iter().map(|c| c.x).min().unwrap() + holes.iter().map(|c| c.x).max().unwrap(),
                holes.iter().map(|c| c.y).min().unwrap() + holes.iter().map(|c| c.y).max().unwrap(),
            );
            let mut maps: Vec<Box<dyn Fn(Coord) -> Coord>> = Vec::new();
            for swap in [false, true] {
                for fx in [1, -1] {
                    for fy in [1, -1] {
                        maps.push(Box::new(move |c: Coord| {
                            let (mut x, mut y) = (2 * c.x - sx, 2 * c.y - sy);
                            if swap {
                                std::mem::swap(&mut x, &mut y);
                            }
                            Coord { x: (fx * x + sx) / 2, y: (fy * y + sy) / 2 }
                        }));
                    }
                }
            }
            maps
        }
        Lattice::Triangular => {
            let mut maps: Vec<Box<dyn Fn(Coord) -> Coord>> = Vec::new();
            for k in 0..6 {
                for mirror in [false, true] {
                    maps.push(Box::new(move |c: Coord| {
                        let (mut q, mut r) = if mirror { (c.y, c.x) } else { (c.x, c.y) };
                        for _ in 0..k {
                            (q, r) = (-r, q + r);
                        }
                        Coord { x: q, y: r }
                    }));
                }
            }
            maps
        }
    };
    maps.iter()
        .map(|m| {
            holes
                .iter()
                .map(|&c| board.hole_at(m(c)).expect("symmetry maps the board onto itself"))
                .collect()
        })
        .collect()
}

fn permute(perm: &[usize], code: u64) -> u64 {
    perm.iter()
        .enumerate()
        .filter(|(h, _)| code >> h & 1 == 1)
        .fold(0, |m, (_, &t)| m | 1u64 << t)
}

fn random_position(board: &Board, rng: &mut impl Rng) -> Position {
    let density: f64 = rng.gen_range(0.2..0.9);
    let mut code = 0u64;
    for h in 0..board.hole_count() {
        if rng.gen_bool(density) {
            code |= 1 << h;
        }
    }
    Position::from_code(code)
}

fn random_with_pegs(board: &Board, k: usize, rng: &mut impl Rng) -> Position {
    let holes = rand::seq::index::sample(rng, board.hole_count(), k);
    Position::from_code(holes.iter().fold(0u64, |m, h| m | 1 << h))
}

/// Store answer for any position: the store of its class family, or
/// unsolvable when the class has no finishing hole.
fn store_says(board: &Board, stores: &[&LevelStore], p: Position) -> bool {
    let named = class::position_class(board, p);
    let family = class::class_family(board, named.name);
    stores
        .iter()
        .find(|s| s.class() == family)
        .is_some_and(|s| s.is_solvable(p).unwrap())
}

fn english_census(gate: &mut Gate, a: &LevelStore, b: &LevelStore, c: &LevelStore) {
    gate.check("[PRIMARY] English census by symmetry type and class", || {
        let peak = a.manifest().peak().unwrap();
        expect_eq("peak level", (peak.n, peak.count), (18, 3_626_632))?;
        let types: Vec<u8> = (1..=7).collect();
        let mut got = Vec::new();
        for s in [a, b, c] {
            got.extend(catalog::symmetry_census(s, &types, None).map_err(|e| e.to_string())?);
        }
        let want = rows(&[
            (1, ClassName::A, 13),
            (2, ClassName::A, 25),
            (3, ClassName::A, 22),
            (4, ClassName::A, 220),
            (5, ClassName::A, 2_238),
            (6, ClassName::A, 5_139),
            (6, ClassName::C, 15_187),
            (7, ClassName::A, 34_501),
            (7, ClassName::B, 92_732),
        ]);
        let got = sorted(got);
        expect_eq("rows", &got, &want)?;
        let total: u64 = got.iter().map(|r| r.count).sum();
        expect_eq("total", total, 150_077)?;
        Ok(format!("9 rows exact, total {total}, peak |B_18| = {}", peak.count))
    });
}

fn english_unique(gate: &mut Gate, a: &LevelStore) {
    gate.check("[PRIMARY] English unique-winning-jump table, n=4..27", || {
        let table = catalog::unique_jump_census(a).map_err(|e| e.to_string())?;
        for &(n, max, count) in &ENGLISH_UNIQUE {
            let row = table.iter().find(|r| r.n == n).ok_or(format!("no row for n={n}"))?;
            expect_eq(&format!("n={n}"), (row.max_jumps, row.count), (Some(max), count))?;
            for &p in &row.examples {
                let w = a.winning_jumps(p).map_err(|e| e.to_string())?;
                expect_eq(&format!("n={n} winning jumps"), w.len(), 1)?;
                expect_eq(&format!("n={n} legal jumps"), a.board().legal_jump_count(p.code()), max)?;
            }
        }
        for r in table.iter().filter(|r| r.n >= 28) {
            expect_eq(&format!("n={} blank", r.n), r.max_jumps, None)?;
        }
        Ok("24 rows exact; rows 28..32 blank".into())
    });
}

fn complement_pairs(gate: &mut Gate, a: &LevelStore) {
    gate.check("[PRIMARY] Complement pairs over the English class-A census", || {
        let board = a.board();
        let mut found = Vec::new();
        for t in 1..=7u8 {
            let r = catalog::complement_pair_check(a, t).map_err(|e| e.to_string())?;
            found.push(r.pairs.len());
            if t == 1 {
                // the central-game start and its one-peg finish
                let centre = Position::EMPTY.with_peg(board.centre().unwrap());
                let pair = r.pairs.first().ok_or("no type-1 pair")?;
                let ends: BTreeSet<u64> = [pair.0.code(), pair.1.code()].into();
                expect_eq("type-1 pair", ends, [centre.code(), board.complement(centre).code()].into())?;
            }
        }
        expect_eq("pairs by type", found.clone(), vec![1, 0, 0, 0, 0, 99, 456])?;
        Ok(format!("pairs by type 1..7 = {found:?}"))
    });
}

fn hex_template(gate: &mut Gate) {
    gate.check("[PRIMARY] Hexagon 13-bit rotation template sweep", || {
        let board = Board::new(BoardId::Hex37);
        let template = Template::rotation_representatives(&board, 120).map_err(|e| e.to_string())?;
        expect_eq("template holes", template.len(), 13)?;
        let report = solver::enumerate_template(&board, &template).map_err(|e| e.to_string())?;
        expect_eq("fillings", report.entries.len(), 1 << 13)?;
        let want = rows(&[
            (1, ClassName::A, 20),
            (2, ClassName::A, 14),
            (3, ClassName::A, 30),
            (4, ClassName::A, 87),
            (4, ClassName::B, 185),
            (6, ClassName::A, 330),
            (6, ClassName::B, 754),
        ]);
        expect_eq("rows", sorted(report.rows), want)?;
        Ok("7 rows exact".into())
    });
}

fn square_census(gate: &mut Gate) {
    gate.check("[PRIMARY] Square 6x6 census by symmetry type", || {
        let s = store(BoardId::Square36, ClassName::A);
        let got = catalog::symmetry_census(&s, &[1, 2, 3, 4, 5, 6, 7], None).map_err(|e| e.to_string())?;
        let want = rows(&[
            (1, ClassName::A, 21),
            (2, ClassName::A, 79),
            (3, ClassName::A, 238),
            (4, ClassName::A, 76),
            (5, ClassName::A, 9_148),
            (6, ClassName::A, 64_135),
            (7, ClassName::A, 20_961),
        ]);
        let got = sorted(got);
        expect_eq("rows", &got, &want)?;
        Ok(format!("7 rows exact, total {}", got.iter().map(|r| r.count).sum::<u64>()))
    });
}

fn invariants(gate: &mut Gate, a: &LevelStore, b: &LevelStore, c: &LevelStore) {
    gate.check("[PRIMARY] Invariant: class vector unchanged by jumps", || {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut total = 0;
        for id in BoardId::ALL {
            let board = Board::new(id);
            let mut cases = 0;
            while cases < 100_000 {
                let p = random_position(&board, &mut rng);
                let legal = board.legal_jumps(p);
                if legal.is_empty() {
                    continue;
                }
                let j = legal[rng.gen_range(0..legal.len())];
                let q = board.jump_unchecked(p, j);
                let (np, nq) = (label_counts(&board, p), label_counts(&board, q));
                if parity(&np) != parity(&nq) {
                    return Err(format!("{id}: parity changed by jump {j} from {:#x}", p.code()));
                }
                let up = np.chunks(3).zip(nq.chunks(3)).all(|(x, y)| (0..3).filter(|&i| y[i] > x[i]).count() == 1);
                if !up {
                    return Err(format!("{id}: jump {j} from {:#x} must raise exactly one count per labeling", p.code()));
                }
                expect_eq("class vector", class::class_vector(&board, q), class::class_vector(&board, p))?;
                cases += 1;
            }
            total += cases;
        }
        Ok(format!("{total} jumps over 4 boards, zero violations"))
    });

    gate.check("[PRIMARY] Invariant: mincode constant on orbits", || {
        let mut rng = StdRng::seed_from_u64(0x0b17);
        let mut total = 0;
        for id in BoardId::ALL {
            let board = Board::new(id);
            let group = geometric_group(&board);
            expect_eq("group order", group.len(), board.group_order())?;
            for _ in 0..20_000 {
                let p = random_position(&board, &mut rng);
                let images: BTreeSet<u64> = group.iter().map(|g| permute(g, p.code())).collect();
                let min = *images.first().unwrap();
                for &img in &images {
                    expect_eq("mincode", board.mincode(img), min)?;
                }
                let stabilizer = group.iter().filter(|g| permute(g, p.code()) == p.code()).count();
                expect_eq("orbit-stabilizer", images.len() * stabilizer, group.len())?;
                total += 1;
            }
        }
        Ok(format!("{total} positions over 4 boards"))
    });

    gate.check("[PRIMARY] Invariant: oracle and level sets agree on english33", || {
        let board = a.board();
        let stores = [a, b, c];
        let mut solver = Solver::with_keying(board, Keying::Canonical);
        let h = board.hole_count();
        let mut exhaustive = 0;
        for k in 0..=4usize {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let p = Position::from_code(idx.iter().fold(0u64, |m, &i| m | 1 << i));
                let oracle = solver.is_solvable(p, Target::AnyHole);
                if oracle != store_says(board, &stores, p) {
                    return Err(format!("disagree on {:#x}", p.code()));
                }
                exhaustive += 1;
                // next k-combination of 0..h
                let mut i = k;
                while i > 0 && idx[i - 1] == h - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(0xa9ee);
        let mut sampled = 0;
        let mut solvable = 0;
        for k in 5..=9usize {
            for i in 0..2_000 {
                let p = if i % 2 == 0 {
                    random_with_pegs(board, k, &mut rng)
                } else {
                    let s = stores[rng.gen_range(0..3)];
                    let level = s.level(k).unwrap().unwrap();
                    let code = level.get(rng.gen_range(0..level.len()));
                    // a random symmetric image of the stored representative
                    let g = rng.gen_range(0..board.group_order());
                    board.transform(levelset::decode(board, code), g).unwrap()
                };
                let oracle = solver.is_solvable(p, Target::AnyHole);
                if oracle != store_says(board, &stores, p) {
                    return Err(format!("disagree on {:#x}", p.code()));
                }
                solvable += oracle as usize;
                sampled += 1;
            }
        }
        Ok(format!("{exhaustive} positions with <=4 pegs exhaustively, {sampled} sampled with 5-9 pegs ({solvable} solvable)"))
    });

    gate.check("[PRIMARY] Invariant: partitioned run reproduces the in-memory checksums", || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut cfg = RunConfig::new(BoardId::English33, ClassName::A, dir.path().join("p8"));
        cfg.partitions = 8;
        cfg.memory_budget = 8 << 20;
        let split = levelset::run(&cfg).map_err(|e| e.to_string())?;
        expect_eq("levels", &split.manifest().levels, &a.manifest().levels)?;
        Ok(format!("{} levels identical with 8 partitions and an 8 MiB budget", split.manifest().levels.len()))
    });
}

fn supporting_checks(gate: &mut Gate, a: &LevelStore, b: &LevelStore, c: &LevelStore) {
    gate.check("[check] Symmetry types 1-5 force class A; class-A members solve to the centre", || {
        let board = a.board();
        let mut census = Vec::new();
        for s in [a, b, c] {
            census.extend(catalog::symmetry_census(s, &[1, 2, 3, 4, 5, 6, 7], None).map_err(|e| e.to_string())?);
        }
        let mut samples = Vec::new();
        for t in 1..=5 {
            let set = catalog::symmetric_positions(a, t, None).map_err(|e| e.to_string())?;
            samples.extend(set.iter().step_by(25).map(|&(_, p)| p));
        }
        let report = catalog::symmetry_class_check(board, &census, &samples);
        if !report.passed() {
            return Err(report.violations.join("; "));
        }
        // a fabricated class-B type-5 entry must be reported
        let fake = [CensusRow { type_id: 5, class: ClassName::B, count: 1 }];
        if catalog::symmetry_class_check(board, &fake, &[]).passed() {
            return Err("synthetic counterexample not detected".into());
        }
        Ok(format!("{} positions re-solved to the centre", report.checked))
    });

    gate.check("[check] Unique-jump members agree with the oracle and export cleanly", || {
        let board = a.board();
        let table = catalog::unique_jump_census(a).map_err(|e| e.to_string())?;
        let mut solver = Solver::with_keying(board, Keying::Canonical);
        let mut puzzles = Vec::new();
        for r in &table {
            for &p in &r.examples {
                if r.n <= 12 {
                    let w = solver::winning_jumps(board, p, Solvability::Oracle(&mut solver)).map_err(|e| e.to_string())?;
                    expect_eq(&format!("oracle winning jumps n={}", r.n), w, a.winning_jumps(p).unwrap())?;
                }
                puzzles.push(Puzzle::from_position(a, p, &format!("unique-n{:02}", r.n), true).map_err(|e| e.to_string())?);
            }
        }
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let paths = catalog::export_puzzles(&puzzles, dir.path()).map_err(|e| e.to_string())?;
        let expected: u64 = table.iter().map(|r| r.count).sum();
        expect_eq("exported", paths.len() as u64, expected)?;
        let back = catalog::import_puzzles(dir.path()).map_err(|e| e.to_string())?;
        expect_eq("round trip", back.len(), puzzles.len())?;
        let p17 = back.iter().find(|p| p.n_pegs == 17).ok_or("no 17-peg puzzle")?;
        expect_eq("n=17 jumps", p17.n_jumps, 17)?;
        let hint = p17.hint.ok_or("no hint")?;
        let j = board
            .jumps()
            .iter()
            .position(|j| (j.from, j.over, j.to) == (hint.from, hint.over, hint.to))
            .ok_or("hint is not a jump")?;
        let after = board.apply_jump(p17.position(board).unwrap(), j).map_err(|e| e.to_string())?;
        if !a.is_solvable(after).unwrap() {
            return Err("hint jump does not keep the puzzle solvable".into());
        }
        let unique_solutions = back.iter().filter(|p| p.unique_solution).count();
        Ok(format!("{} puzzles exported, {unique_solutions} with a unique solution", paths.len()))
    });

    gate.check("[check] Winning jumps of symmetric positions are closed under their stabilizer", || {
        let board = a.board();
        let mut checked = 0;
        for t in [4u8, 5, 6, 7] {
            for (_, p) in catalog::symmetric_positions(a, t, None).unwrap().into_iter().step_by(97) {
                let win: BTreeSet<usize> = a.winning_jumps(p).unwrap().into_iter().collect();
                for g in board.stabilizer(p) {
                    let perm = &board.symmetries()[g].perm;
                    for &j in &win {
                        let jump = board.jumps()[j];
                        let image = (perm[jump.from as usize], perm[jump.over as usize], perm[jump.to as usize]);
                        let k = board.jumps().iter().position(|x| (x.from, x.over, x.to) == image).unwrap();
                        if !win.contains(&k) {
                            return Err(format!("{:#x}: jump {j} maps to losing jump {k}", p.code()));
                        }
                    }
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} positions"))
    });
}

#[test]
fn primary_acceptance_criteria() {
    let mut gate = Gate { failures: Vec::new() };
    report!("stores under {}", store_root().display());
    let a = store(BoardId::English33, ClassName::A);
    let b = store(BoardId::English33, ClassName::B);
    let c = store(BoardId::English33, ClassName::C);

    english_census(&mut gate, &a, &b, &c);
    english_unique(&mut gate, &a);
    complement_pairs(&mut gate, &a);
    hex_template(&mut gate);
    square_census(&mut gate);
    invariants(&mut gate, &a, &b, &c);
    supporting_checks(&mut gate, &a, &b, &c);

    assert!(gate.failures.is_empty(), "failed: {:?}", gate.failures);
}

#[test]
fn extended_hexagon_run_resumes_to_level_ten() {
    let dir = tempfile::tempdir().unwrap();
    let mut fresh = RunConfig::new(BoardId::Hex37, ClassName::A, dir.path().join("fresh"));
    fresh.max_level = Some(10);
    let fresh = levelset::run(&fresh).unwrap();

    let mut cfg = RunConfig::new(BoardId::Hex37, ClassName::A, dir.path().join("resumed"));
    cfg.partitions = 4;
    cfg.memory_budget = 4 << 20;
    cfg.max_level = Some(7);
    let partial = levelset::run(&cfg).unwrap();
    assert!(!partial.is_complete());
    assert_eq!(partial.max_level(), 7);
    cfg.max_level = Some(10);
    let resumed = levelset::run(&cfg).unwrap();

    assert_eq!(resumed.manifest().levels, fresh.manifest().levels);
    report!(
        "PASS  [extended] hex37 class A to level 10, truncated at 7 and resumed with 4 partitions: |B_10| = {}",
        resumed.manifest().levels[9].count
    );
}

#[test]
#[ignore = "French class-A run takes hours on one core"]
fn extended_french_census_and_unique_table() {
    let english = store(BoardId::English33, ClassName::A);
    let french = store(BoardId::French37, ClassName::A);
    assert_eq!(french.manifest().peak().unwrap().count, 53_371_113);
    let got = sorted(catalog::symmetry_census(&french, &[1, 2, 3, 4, 5], Some(&english)).unwrap());
    let want = rows(&[
        (1, ClassName::A, 17),
        (2, ClassName::A, 27),
        (3, ClassName::A, 126),
        (4, ClassName::A, 258),
        (5, ClassName::A, 7_051),
    ]);
    assert_eq!(got, want);
    let french_unique: [(usize, usize, u64); 29] = [
        (4, 4, 3),
        (5, 7, 1),
        (6, 8, 1),
        (7, 10, 1),
        (8, 10, 1),
        (9, 12, 1),
        (10, 13, 1),
        (11, 14, 2),
        (12, 16, 1),
        (13, 17, 1),
        (14, 16, 4),
        (15, 17, 2),
        (16, 19, 1),
        (17, 19, 2),
        (18, 18, 4),
        (19, 21, 1),
        (20, 19, 1),
        (21, 18, 5),
        (22, 20, 1),
        (23, 18, 1),
        (24, 18, 2),
        (25, 17, 1),
        (26, 17, 1),
        (27, 16, 1),
        (28, 13, 1),
        (29, 11, 1),
        (30, 10, 3),
        (31, 6, 1),
        (32, 8, 1),
    ];
    let table = catalog::unique_jump_census(&french).unwrap();
    for (n, max, count) in french_unique {
        let r = table.iter().find(|r| r.n == n).unwrap();
        assert_eq!((r.n, r.max_jumps, r.count), (n, Some(max), count));
    }
    report!("PASS  [extended] french37 census types 1-5 and unique-jump table");
}
