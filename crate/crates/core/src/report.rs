//! Regenerates the table of the eleven primitive odd-edge bricks below 1000 and
//! checks every row against the published values.

use std::fmt::Write as _;

use crate::bricks::{build_brick, search_brick_witnesses, verify_brick, BrickVerdict, BrickWitness, EulerBrick};
use crate::error::Result;
use crate::pythag::DiffSquareRep;

/// A published row: odd edge, the two representations `(t, e, f)`, certificate
/// root `d`, type, and the brick `(a, b, c, d_ab, d_ac, d_bc)`.
pub struct ExpectedBrick {
    pub n: u64,
    pub rep1: (u64, u64, u64),
    pub rep2: (u64, u64, u64),
    pub d: u128,
    pub brick_type: u8,
    pub brick: [u128; 6],
}

pub const CENSUS_LIMIT: u64 = 999;

pub const EXPECTED: [ExpectedBrick; 11] = [
    ExpectedBrick { n: 85, rep1: (1, 11, 6), rep2: (5, 9, 8), d: 366, brick_type: 2, brick: [85, 132, 720, 157, 725, 732] },
    ExpectedBrick { n: 117, rep1: (1, 11, 2), rep2: (3, 8, 5), d: 122, brick_type: 2, brick: [117, 44, 240, 125, 267, 244] },
    ExpectedBrick { n: 187, rep1: (11, 9, 8), rep2: (17, 6, 5), d: 942, brick_type: 3, brick: [187, 1584, 1020, 1595, 1037, 1884] },
    ExpectedBrick { n: 195, rep1: (1, 22, 17), rep2: (3, 33, 32), d: 3190, brick_type: 2, brick: [195, 748, 6336, 773, 6339, 6380] },
    ExpectedBrick { n: 231, rep1: (1, 16, 5), rep2: (33, 4, 3), d: 404, brick_type: 2, brick: [231, 160, 792, 281, 825, 808] },
    ExpectedBrick { n: 275, rep1: (1, 18, 7), rep2: (5, 8, 3), d: 174, brick_type: 2, brick: [275, 252, 240, 373, 365, 348] },
    ExpectedBrick { n: 429, rep1: (11, 8, 5), rep2: (39, 6, 5), d: 1250, brick_type: 3, brick: [429, 880, 2340, 979, 2379, 2550] },
    ExpectedBrick { n: 495, rep1: (1, 52, 47), rep2: (15, 17, 16), d: 4756, brick_type: 2, brick: [495, 4888, 8160, 4913, 8175, 9512] },
    ExpectedBrick { n: 693, rep1: (3, 16, 5), rep2: (7, 10, 1), d: 250, brick_type: 3, brick: [693, 480, 140, 843, 707, 500] },
    ExpectedBrick { n: 855, rep1: (1, 32, 13), rep2: (15, 11, 8), d: 1384, brick_type: 2, brick: [855, 832, 2640, 1193, 2775, 2768] },
    ExpectedBrick { n: 935, rep1: (1, 96, 91), rep2: (17, 28, 27), d: 15540, brick_type: 2, brick: [935, 17472, 25704, 17497, 25721, 31080] },
];

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub n: u64,
    /// Regenerated witness, if the scan produced one at this `n`.
    pub found: Option<BrickWitness>,
    pub brick: Option<[u128; 6]>,
    pub pass: bool,
    /// Why the row failed, one entry per disagreeing field.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PaperReport {
    pub rows: Vec<ReportRow>,
    /// Primitive non-degenerate witnesses the scan found that are not in the table.
    pub unexpected: Vec<BrickWitness>,
    pub census_by_type: [u64; 3],
}

impl PaperReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.unexpected.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            2
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<5} {:>5} {:<14} {:<14} {:>6} {:<44} status", "type", "n", "rep1", "rep2", "d", "brick");
        let fmt_rep = |r: DiffSquareRep| format!("{}({}²−{}²)", r.t, r.e, r.f);
        for row in &self.rows {
            match (&row.found, &row.brick) {
                (Some(w), Some(b)) => {
                    let brick = format!("({},{},{},{},{},{})", b[0], b[1], b[2], b[3], b[4], b[5]);
                    let _ = writeln!(
                        s,
                        "{:<5} {:>5} {:<14} {:<14} {:>6} {:<44} {}",
                        w.brick_type.index(),
                        row.n,
                        fmt_rep(w.rep1),
                        fmt_rep(w.rep2),
                        w.d,
                        brick,
                        if row.pass { "PASS" } else { "FAIL" }
                    );
                }
                _ => {
                    let _ = writeln!(s, "{:<5} {:>5} {:<14} {:<14} {:>6} {:<44} FAIL", "-", row.n, "-", "-", "-", "(not found)");
                }
            }
            for note in &row.notes {
                let _ = writeln!(s, "      {note}");
            }
        }
        for w in &self.unexpected {
            let _ = writeln!(s, "unexpected primitive witness at n = {} (type {}): FAIL", w.n, w.brick_type);
        }
        let [t1, t2, t3] = self.census_by_type;
        let _ = writeln!(
            s,
            "census n < {}: {} primitive bricks (type 1: {t1}, type 2: {t2}, type 3: {t3}) {}",
            CENSUS_LIMIT + 1,
            t1 + t2 + t3,
            if self.all_pass() { "PASS" } else { "FAIL" }
        );
        s
    }
}

const FIELDS: [&str; 6] = ["a", "b", "c", "d_ab", "d_ac", "d_bc"];

/// Field-by-field comparison with the published row; empty when they agree.
fn compare(w: &BrickWitness, e: &ExpectedBrick) -> Vec<String> {
    let rep = |(t, e, f): (u64, u64, u64)| DiffSquareRep { t, e, f };
    let mut notes = Vec::new();
    if w.rep1 != rep(e.rep1) || w.rep2 != rep(e.rep2) {
        notes.push(format!("representations {} and {} differ from the published pair", w.rep1, w.rep2));
    }
    if w.d != e.d {
        notes.push(format!("d = {} but published d = {}", w.d, e.d));
    }
    if w.brick_type.index() != e.brick_type {
        notes.push(format!("type {} but published type {}", w.brick_type, e.brick_type));
    }
    let got = build_brick(w).tuple();
    for (i, name) in FIELDS.iter().enumerate() {
        if got[i] != e.brick[i] {
            notes.push(format!("{name} = {} but published {name} = {}", got[i], e.brick[i]));
        }
    }
    if got != e.brick {
        let published = EulerBrick::from_lengths(
            [e.brick[0], e.brick[1], e.brick[2]],
            [e.brick[3], e.brick[4], e.brick[5]],
        );
        if let BrickVerdict::Failed(id) = verify_brick(&published) {
            notes.push(format!("published tuple fails its own identity {id}"));
        }
    }
    notes
}

/// Scans every odd `n ≤ 999` from scratch and compares with [`EXPECTED`].
pub fn report_paper_examples() -> Result<PaperReport> {
    let mut primitive = Vec::new();
    for n in (3..=CENSUS_LIMIT).step_by(2) {
        for w in search_brick_witnesses(n, false)? {
            if build_brick(&w).primitive && !w.is_degenerate() {
                primitive.push(w);
            }
        }
    }
    let mut census_by_type = [0u64; 3];
    for w in &primitive {
        census_by_type[w.brick_type.index() as usize - 1] += 1;
    }
    let rows = EXPECTED
        .iter()
        .map(|e| {
            let found = primitive.iter().find(|w| w.n == e.n).cloned();
            let brick = found.as_ref().map(|w| build_brick(w).tuple());
            let mut notes = match &found {
                Some(w) => compare(w, e),
                None => vec!["no primitive witness found".to_owned()],
            };
            let count = primitive.iter().filter(|w| w.n == e.n).count();
            if count > 1 {
                notes.push(format!("{count} primitive witnesses at this n"));
            }
            ReportRow { n: e.n, found, brick, pass: notes.is_empty(), notes }
        })
        .collect();
    let unexpected = primitive
        .into_iter()
        .filter(|w| !EXPECTED.iter().any(|e| e.n == w.n))
        .collect();
    Ok(PaperReport {
        rows,
        unexpected,
        census_by_type,
    })
}
