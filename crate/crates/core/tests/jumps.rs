//! Jump tables checked against a brute-force search for collinear triples.

use std::collections::BTreeSet;

use pegkit::board::{Coord, Lattice};
use pegkit::{Board, BoardId, Position};

fn unit_steps(lattice: Lattice) -> &'static [(i32, i32)] {
    match lattice {
        Lattice::Square => &[(1, 0), (0, 1)],
        Lattice::Triangular => &[(1, 0), (0, 1), (1, -1)],
    }
}

/// Every (from, over, to) with three holes equally spaced by a unit step.
fn triples(board: &Board) -> BTreeSet<(usize, usize, usize)> {
    let holes = board.holes();
    let mut out = BTreeSet::new();
    for (a, &ca) in holes.iter().enumerate() {
        for (c, &cc) in holes.iter().enumerate() {
            let (dx, dy) = (cc.x - ca.x, cc.y - ca.y);
            if dx % 2 != 0 || dy % 2 != 0 {
                continue;
            }
            let step = (dx / 2, dy / 2);
            let unit = unit_steps(board.lattice())
                .iter()
                .any(|&(x, y)| step == (x, y) || step == (-x, -y));
            if !unit {
                continue;
            }
            if let Some(b) = board.hole_at(Coord::new(ca.x + step.0, ca.y + step.1)) {
                out.insert((a, b, c));
            }
        }
    }
    out
}

#[test]
fn jump_tables_match_collinear_triples() {
    for (id, expect) in [
        (BoardId::English33, 76),
        (BoardId::French37, 92),
        (BoardId::Square36, 96),
        (BoardId::Hex37, 138),
    ] {
        let board = Board::new(id);
        let brute = triples(&board);
        let table: BTreeSet<_> = board
            .jumps()
            .iter()
            .map(|j| (j.from as usize, j.over as usize, j.to as usize))
            .collect();
        assert_eq!(table.len(), board.jumps().len(), "{id}: duplicate jumps");
        assert_eq!(table, brute, "{id}");
        assert_eq!(brute.len(), expect, "{id}");
    }
}

#[test]
fn legal_jumps_match_brute_force() {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for id in BoardId::ALL {
        let board = Board::new(id);
        let brute: Vec<_> = triples(&board).into_iter().collect();
        for _ in 0..2_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let p = Position::from_code(state & board.full_mask());
            let want: BTreeSet<_> = brute
                .iter()
                .filter(|&&(a, b, c)| p.has_peg(a) && p.has_peg(b) && !p.has_peg(c))
                .copied()
                .collect();
            let got: BTreeSet<_> = board
                .legal_jumps(p)
                .into_iter()
                .map(|j| {
                    let j = board.jumps()[j];
                    (j.from as usize, j.over as usize, j.to as usize)
                })
                .collect();
            assert_eq!(got, want);
            assert_eq!(board.legal_jump_count(p.code()), want.len());
            for &(a, b, c) in &want {
                let after = p.without_peg(a).without_peg(b).with_peg(c);
                let idx = board
                    .jumps()
                    .iter()
                    .position(|j| (j.from as usize, j.over as usize, j.to as usize) == (a, b, c))
                    .unwrap();
                assert_eq!(board.apply_jump(p, idx).unwrap(), after);
            }
        }
    }
}
