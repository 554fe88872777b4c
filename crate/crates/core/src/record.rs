//! JSONL hit records. Each line is one self-contained object and re-verifies on load.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::biquad::BiquadHit;
use crate::bricks::{build_brick, verify_brick, BrickWitness, EulerBrick};
use crate::cuboids::{
    build_perfect_cuboid, verify_perfect_cuboid, verify_perfect_cuboid_bigint, CuboidWitness,
    PerfectCuboid,
};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Bricks,
    Cuboids,
    Biquad,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Task::Bricks => "bricks",
            Task::Cuboids => "cuboids",
            Task::Biquad => "biquad",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Brick(BrickWitness),
    Cuboid(CuboidWitness),
    Biquad(BiquadHit),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solid {
    Brick(EulerBrick),
    Cuboid(PerfectCuboid),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitRecord {
    pub schema_version: u32,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub witness: Witness,
    pub solid: Solid,
    pub primitive: bool,
    /// Two representations share an even leg (bricks only); excluded from census counts.
    #[serde(default)]
    pub degenerate: bool,
    /// Every "(>1)" bound of the conjecture statement holds.
    pub strict: bool,
    pub anomaly: bool,
    pub fingerprint: String,
}

impl HitRecord {
    pub fn brick(w: BrickWitness, fingerprint: &str) -> Result<Self> {
        w.check()?;
        let brick = build_brick(&w);
        if !verify_brick(&brick).is_valid() {
            return Err(Error::Verification(format!("brick built for n = {} fails", w.n)));
        }
        Ok(HitRecord {
            schema_version: SCHEMA_VERSION,
            task: Task::Bricks,
            n: Some(w.n),
            primitive: brick.primitive,
            degenerate: w.is_degenerate(),
            strict: w.is_strict(),
            anomaly: false,
            witness: Witness::Brick(w),
            solid: Solid::Brick(brick),
            fingerprint: fingerprint.to_owned(),
        })
    }

    /// Every cuboid hit is an anomaly. A witness whose candidate fails either
    /// the 128-bit or the arbitrary-precision check is rejected.
    pub fn cuboid(w: CuboidWitness, fingerprint: &str) -> Result<Self> {
        w.check()?;
        let c = build_perfect_cuboid(&w);
        let verdict = verify_perfect_cuboid(&c);
        if !verdict.is_valid() || !verify_perfect_cuboid_bigint(&c) {
            return Err(Error::Verification(format!(
                "cuboid candidate {c} for n = {} fails: {verdict:?}",
                w.n
            )));
        }
        Ok(HitRecord {
            schema_version: SCHEMA_VERSION,
            task: Task::Cuboids,
            n: Some(w.n),
            primitive: crate::bricks::gcd3(c.a, c.b, c.c) == 1,
            degenerate: w.is_degenerate(),
            strict: w.is_strict(),
            anomaly: true,
            witness: Witness::Cuboid(w),
            solid: Solid::Cuboid(c),
            fingerprint: fingerprint.to_owned(),
        })
    }

    pub fn biquad(h: BiquadHit, fingerprint: &str) -> Result<Self> {
        h.check()?;
        let strict = h.annotations.iter().all(|a| a.u > 1);
        Ok(HitRecord {
            schema_version: SCHEMA_VERSION,
            task: Task::Biquad,
            n: None,
            primitive: true,
            degenerate: false,
            strict,
            anomaly: h.has_product_ok(),
            witness: Witness::Biquad(h),
            solid: Solid::None,
            fingerprint: fingerprint.to_owned(),
        })
    }

    /// Rebuilds the record from its witness and compares.
    pub fn verify(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Verification(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let rebuilt = match &self.witness {
            Witness::Brick(w) => HitRecord::brick(w.clone(), &self.fingerprint)?,
            Witness::Cuboid(w) => HitRecord::cuboid(w.clone(), &self.fingerprint)?,
            Witness::Biquad(h) => HitRecord::biquad(h.clone(), &self.fingerprint)?,
        };
        if rebuilt != *self {
            return Err(Error::Verification("stored fields disagree with the witness".into()));
        }
        Ok(())
    }

    pub fn to_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

pub fn write_records<W: Write>(out: &mut W, records: &[HitRecord]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line()?)?;
    }
    Ok(())
}

/// Reads and verifies every record in a JSONL file. `limit` stops after that many lines.
pub fn load_records(path: &Path, limit: Option<usize>) -> Result<Vec<HitRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        if limit.is_some_and(|l| out.len() >= l) {
            break;
        }
        let line = line?;
        let bad = |reason: String| Error::BadRecord {
            path: path.to_owned(),
            line: i + 1,
            reason,
        };
        let rec: HitRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        rec.verify().map_err(|e| bad(e.to_string()))?;
        out.push(rec);
    }
    Ok(out)
}
