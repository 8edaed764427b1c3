#![allow(dead_code)]

use compalg::algebra::Algebra;
use compalg::hurwitz::SPLIT_CAYLEY_LABELS;
use compalg::scalars::{Field, Scalar};

/// Structure constants `(i, j, k, c)` read from a golden table file: a
/// `columns:` header followed by one `row: entry entry ...` line per row,
/// where an entry is `0`, a label or a negated label.
pub fn golden_entries(text: &str, field: &Field) -> Vec<(usize, usize, usize, Scalar)> {
    let idx = |s: &str| SPLIT_CAYLEY_LABELS.iter().position(|l| *l == s).unwrap_or_else(|| panic!("unknown label {s}"));
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    let columns: Vec<usize> = header.strip_prefix("columns:").expect("columns header").split_whitespace().map(idx).collect();
    let mut out = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let (row, cells) = line.split_once(':').expect("row label");
        let i = idx(row.trim());
        let cells: Vec<&str> = cells.split_whitespace().collect();
        assert_eq!(cells.len(), columns.len());
        for (&j, cell) in columns.iter().zip(cells) {
            if cell == "0" {
                continue;
            }
            let (sign, label) = match cell.strip_prefix('-') {
                Some(l) => (field.from_i64(-1), l),
                None => (field.one(), cell),
            };
            out.push((i, j, idx(label), sign));
        }
    }
    out.sort_by_key(|e| (e.0, e.1, e.2));
    out
}

pub fn figure1() -> &'static str {
    include_str!("../golden/figure1.txt")
}

pub fn figure2() -> &'static str {
    include_str!("../golden/figure2.txt")
}

pub fn matches_golden(a: &Algebra, text: &str) -> bool {
    let mut got = a.structure_constants();
    got.sort_by_key(|e| (e.0, e.1, e.2));
    got == golden_entries(text, &a.field)
}
