//! Perfect-cuboid witnesses.
//!
//! Three representations `n = s₁(e² − f²) = s₂(g² − h²) = s₃(k² − l²)` with
//! `(s₁ef)² = (s₂gh)² + (s₃kl)²` give the seven lengths
//! `(n, 2s₂gh, 2s₃kl | s₂(g²+h²), s₃(k²+l²), 2s₁ef | s₁(e²+f²))`.
//! No such witness is known; any hit is treated as an anomaly and re-verified
//! with arbitrary-precision arithmetic before it is reported.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::bricks::{match_diagonals, pythagorean};
use crate::error::{Error, Result};
use crate::pythag::{self, DiffSquareRep};

/// Bit set over conjecture indices 1..=6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjectureSet(u8);

impl ConjectureSet {
    pub const ALL: ConjectureSet = ConjectureSet(0b11_1111);

    pub fn new(indices: &[u8]) -> Result<Self> {
        let mut bits = 0u8;
        for &i in indices {
            if !(1..=6).contains(&i) {
                return Err(Error::InvalidInput(format!("conjecture index must be 1..=6, got {i}")));
            }
            bits |= 1 << (i - 1);
        }
        if bits == 0 {
            return Err(Error::InvalidInput("empty conjecture set".into()));
        }
        Ok(ConjectureSet(bits))
    }

    pub fn contains(&self, i: u8) -> bool {
        (1..=6).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn indices(&self) -> Vec<u8> {
        (1..=6).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for ConjectureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(u8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuboidWitness {
    pub n: u64,
    pub rep_e: DiffSquareRep,
    pub rep_g: DiffSquareRep,
    pub rep_k: DiffSquareRep,
    pub conjecture: u8,
}

/// Conjecture index for the scale pattern `(s₁ > 1, s₂ > 1, s₃ > 1)` after
/// canonical ordering of the last two.
fn conjecture_index(s1: bool, s2: bool, s3: bool) -> u8 {
    match (s1, s2, s3) {
        (false, false, false) => 1,
        (true, false, false) => 2,
        (false, true, false) | (false, false, true) => 3,
        (false, true, true) => 4,
        (true, true, false) | (true, false, true) => 5,
        (true, true, true) => 6,
    }
}

impl CuboidWitness {
    /// Canonicalizes the unordered pair `{g, k}`: a lone scaled representation
    /// goes first, otherwise `(t, e)` ascending.
    pub fn canonical(n: u64, rep_e: DiffSquareRep, a: DiffSquareRep, b: DiffSquareRep) -> Self {
        let key = |r: &DiffSquareRep| (r.t == 1, r.t, r.e);
        let (rep_g, rep_k) = if key(&a) <= key(&b) { (a, b) } else { (b, a) };
        CuboidWitness {
            n,
            rep_e,
            rep_g,
            rep_k,
            conjecture: conjecture_index(rep_e.t > 1, rep_g.t > 1, rep_k.t > 1),
        }
    }

    /// `(s₁ef)² = (s₂gh)² + (s₃kl)²`, exactly.
    pub fn certificate_holds(&self) -> Result<bool> {
        let lhs = self.rep_e.weight_sq()?;
        let rhs = arith::checked_add(self.rep_g.weight_sq()?, self.rep_k.weight_sq()?, "cuboid certificate")?;
        Ok(lhs == rhs)
    }

    pub fn is_degenerate(&self) -> bool {
        self.rep_g == self.rep_k
    }

    /// `f, h, l > 1`; the scale bounds are implied by the conjecture index.
    pub fn is_strict(&self) -> bool {
        self.rep_e.f > 1 && self.rep_g.f > 1 && self.rep_k.f > 1
    }

    pub fn check(&self) -> Result<()> {
        for r in [&self.rep_e, &self.rep_g, &self.rep_k] {
            r.check(self.n)?;
        }
        let canon = CuboidWitness::canonical(self.n, self.rep_e, self.rep_g, self.rep_k);
        if canon != *self {
            return Err(Error::Verification("cuboid witness is not canonical".into()));
        }
        if !self.certificate_holds()? {
            return Err(Error::Verification(format!(
                "cuboid certificate fails for n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Seven lengths: edges, face diagonals over `(a,b)`, `(a,c)`, `(b,c)`, body diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerfectCuboid {
    pub a: u128,
    pub b: u128,
    pub c: u128,
    pub d_ab: u128,
    pub d_ac: u128,
    pub d_bc: u128,
    pub body: u128,
}

impl PerfectCuboid {
    /// From edges, face diagonals in any order, and the body diagonal.
    pub fn from_lengths(edges: [u128; 3], diags: [u128; 3], body: u128) -> Self {
        let [a, b, c] = edges;
        let [d_ab, d_ac, d_bc] = match_diagonals(a, b, c, diags);
        PerfectCuboid { a, b, c, d_ab, d_ac, d_bc, body }
    }

    pub fn tuple(&self) -> [u128; 7] {
        [self.a, self.b, self.c, self.d_ab, self.d_ac, self.d_bc, self.body]
    }
}

impl fmt::Display for PerfectCuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{} | {},{},{} | {})",
            self.a, self.b, self.c, self.d_ab, self.d_ac, self.d_bc, self.body
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuboidIdentity {
    FaceAB,
    FaceAC,
    FaceBC,
    Body,
}

impl fmt::Display for CuboidIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CuboidIdentity::FaceAB => "a²+b²=d_ab²",
            CuboidIdentity::FaceAC => "a²+c²=d_ac²",
            CuboidIdentity::FaceBC => "b²+c²=d_bc²",
            CuboidIdentity::Body => "a²+b²+c²=g²",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuboidVerdict {
    Valid,
    NonPositive,
    Failed(CuboidIdentity),
}

impl CuboidVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CuboidVerdict::Valid)
    }
}

pub fn verify_perfect_cuboid(c: &PerfectCuboid) -> CuboidVerdict {
    if c.tuple().contains(&0) {
        return CuboidVerdict::NonPositive;
    }
    let faces = [
        (CuboidIdentity::FaceAB, c.a, c.b, c.d_ab),
        (CuboidIdentity::FaceAC, c.a, c.c, c.d_ac),
        (CuboidIdentity::FaceBC, c.b, c.c, c.d_bc),
    ];
    for (id, x, y, z) in faces {
        if !pythagorean(x, y, z) {
            return CuboidVerdict::Failed(id);
        }
    }
    let body = [c.a, c.b, c.c]
        .iter()
        .try_fold(0u128, |acc, &v| v.checked_mul(v).and_then(|v2| acc.checked_add(v2)));
    if body.is_none() || body != c.body.checked_mul(c.body) {
        return CuboidVerdict::Failed(CuboidIdentity::Body);
    }
    CuboidVerdict::Valid
}

/// Recomputes all four identities with unbounded integers.
pub fn verify_perfect_cuboid_bigint(c: &PerfectCuboid) -> bool {
    let sq = |v: u128| {
        let b = BigUint::from(v);
        &b * &b
    };
    c.tuple().iter().all(|&v| v > 0)
        && sq(c.a) + sq(c.b) == sq(c.d_ab)
        && sq(c.a) + sq(c.c) == sq(c.d_ac)
        && sq(c.b) + sq(c.c) == sq(c.d_bc)
        && sq(c.a) + sq(c.b) + sq(c.c) == sq(c.body)
}

pub fn build_perfect_cuboid(w: &CuboidWitness) -> PerfectCuboid {
    PerfectCuboid {
        a: w.n as u128,
        b: w.rep_g.even_leg(),
        c: w.rep_k.even_leg(),
        d_ab: w.rep_g.hypotenuse(),
        d_ac: w.rep_k.hypotenuse(),
        d_bc: w.rep_e.even_leg(),
        body: w.rep_e.hypotenuse(),
    }
}

/// Every witness at `n` whose conjecture index is in `conjectures`.
pub fn search_cuboid_witnesses(
    n: u64,
    conjectures: ConjectureSet,
    strict: bool,
) -> Result<Vec<CuboidWitness>> {
    let reps = pythag::diff_square_reps(n)?;
    witnesses_from_reps(n, &reps, conjectures, strict)
}

pub(crate) fn witnesses_from_reps(
    n: u64,
    reps: &[DiffSquareRep],
    conjectures: ConjectureSet,
    strict: bool,
) -> Result<Vec<CuboidWitness>> {
    let reps: Vec<DiffSquareRep> = reps.iter().copied().filter(|r| !strict || r.f > 1).collect();
    let weights = reps
        .iter()
        .map(|r| r.weight_sq())
        .collect::<Result<Vec<_>>>()?;
    // Even legs of distinct representations differ, so weights are unique.
    let by_weight: HashMap<u128, usize> = weights.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut found = BTreeSet::new();
    for (i, &target) in weights.iter().enumerate() {
        for (j, &wj) in weights.iter().enumerate() {
            if j == i || wj >= target {
                continue;
            }
            let Some(&k) = by_weight.get(&(target - wj)) else {
                continue;
            };
            if k == i {
                continue;
            }
            let w = CuboidWitness::canonical(n, reps[i], reps[j], reps[k]);
            if conjectures.contains(w.conjecture) {
                found.insert(w);
            }
        }
    }
    Ok(found.into_iter().collect())
}
