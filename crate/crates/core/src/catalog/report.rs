//! CSV tables.

use std::fmt::Write;

use super::{CensusRow, ComplementPairs, UniqueJumpRow};
use crate::board::{Lattice, SymmetryType};

/// Header only when there are no rows.
pub fn census_csv(lattice: Lattice, rows: &[CensusRow]) -> String {
    let mut out = String::from("type,order,description,class,count\n");
    if rows.is_empty() {
        return out;
    }
    let mut total = 0;
    for r in rows {
        let Some(t) = SymmetryType::new(lattice, r.type_id) else {
            continue;
        };
        total += r.count;
        let _ = writeln!(out, "{},{},{},{},{}", t.id, t.order, t.description(lattice), r.class, r.count);
    }
    let _ = writeln!(out, "total,,,,{total}");
    out
}

pub fn pairs_csv(rows: &[ComplementPairs]) -> String {
    let mut out = String::from("type,members,pairs\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.type_id, r.members, r.pairs.len());
    }
    out
}

/// Rows without a unique-jump position get an empty `max_jumps`.
pub fn unique_csv(rows: &[UniqueJumpRow]) -> String {
    let mut out = String::from("n,max_jumps,count\n");
    for r in rows {
        match r.max_jumps {
            Some(m) => writeln!(out, "{},{},{}", r.n, m, r.count),
            None => writeln!(out, "{},,0", r.n),
        }
        .unwrap();
    }
    out
}
