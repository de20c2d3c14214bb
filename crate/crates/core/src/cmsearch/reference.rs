//! Reference isogeny-class rows that search output is checked against.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub label: &'static str,
    pub ells: &'static [u64],
    pub poly: &'static str,
    pub m: i64,
    pub conductors: &'static [i64],
    pub r_k: u32,
    pub r_q: u32,
    /// Number of isogeny classes the row stands for.
    pub classes: u32,
    pub everywhere_good: bool,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    label: &'static str,
    ells: &'static [u64],
    poly: &'static str,
    m: i64,
    conductors: &'static [i64],
    r_k: u32,
    r_q: u32,
    classes: u32,
) -> ReferenceRow {
    ReferenceRow { label, ells, poly, m, conductors, r_k, r_q, classes, everywhere_good: false }
}

const fn starred(mut r: ReferenceRow) -> ReferenceRow {
    r.everywhere_good = true;
    r
}

const TABLE: [ReferenceRow; 30] = [
    row("2.5.1-2.5.4", &[2], "T^2-T-1", 10, &[1], 4, 0, 4),
    row("2.5.5-2.5.8", &[2], "T^2-T-1", 5, &[1], 4, 0, 4),
    row("2.8.1-2.8.4", &[2], "T^2-2", 2, &[2], 4, 2, 4),
    row("2.8.5-2.8.8", &[2], "T^2-2", 1, &[4], 4, 4, 4),
    row("2.12.1-2.12.4", &[2], "T^2-3", 3, &[4], 4, 4, 4),
    row("2.13.1-2.13.4", &[2], "T^2-T-3", 13, &[1], 4, 0, 4),
    row("2.24.1-2.24.3", &[2], "T^2-6", 2, &[3], 4, 2, 3),
    row("2.28.1-2.28.3", &[2], "T^2-7", 7, &[4], 4, 4, 3),
    starred(row("*2.28.4", &[2], "T^2-7", 7, &[4], 4, 4, 1)),
    row("2.29.1-2.29.4", &[2], "T^2-T-7", 58, &[1], 4, 0, 4),
    row("2.37.1-2.37.4", &[2], "T^2-T-9", 37, &[1], 4, 0, 4),
    row("3.5.1", &[3], "T^2-T-1", 15, &[1, 2], 8, 0, 1),
    row("3.8.1", &[3], "T^2-2", 6, &[1], 4, 0, 1),
    row("3.12.1", &[3], "T^2-3", 1, &[3], 4, 2, 1),
    row("3.17.1", &[3], "T^2-T-4", 51, &[1], 4, 0, 1),
    starred(row("*3.33.1", &[3], "T^2-T-8", 11, &[3], 4, 2, 1)),
    row("3.41.1", &[3], "T^2-T-10", 123, &[1], 4, 0, 1),
    row("3.89.1", &[3], "T^2-T-22", 267, &[1], 4, 0, 1),
    starred(row("*6.24.1", &[2, 3], "T^2-6", 2, &[3], 4, 2, 1)),
    row("7.5.1", &[7], "T^2-T-1", 35, &[1], 4, 0, 1),
    row("7.13.1", &[7], "T^2-T-3", 91, &[1], 4, 0, 1),
    row("7.21.1", &[7], "T^2-T-5", 3, &[7], 4, 2, 1),
    row("7.28.1", &[7], "T^2-7", 7, &[4], 4, 4, 1),
    row("7.61.1", &[7], "T^2-T-15", 427, &[1], 4, 0, 1),
    row("11.8.1", &[11], "T^2-2", 22, &[1], 4, 0, 1),
    row("11.17.1", &[11], "T^2-T-4", 187, &[1], 4, 0, 1),
    row("11.33.1", &[11], "T^2-T-8", 11, &[3], 4, 2, 1),
    row("23.5.1", &[23], "T^2-T-1", 115, &[1], 4, 0, 1),
    row("31.13.1", &[31], "T^2-T-3", 403, &[1], 4, 0, 1),
    row("47.5.1", &[47], "T^2-T-1", 235, &[1], 4, 0, 1),
];

/// Rows that must match exactly.
pub const HARD_ROWS: [&str; 4] = ["47.5.1", "*6.24.1", "*2.28.4", "7.61.1"];

pub fn reference_table() -> &'static [ReferenceRow] {
    &TABLE
}
