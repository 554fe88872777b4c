//! Euler bricks with an odd edge.
//!
//! A brick witness is a pair of distinct representations `n = t₁(e₁² − f₁²) =
//! t₂(e₂² − f₂²)` for which `(t₁e₁f₁)² + (t₂e₂f₂)² = d²`. It yields the brick
//! with edges `(n, 2t₁e₁f₁, 2t₂e₂f₂)`. The type is fixed by which scales are 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{ClassifyError, Error, Result};
use crate::pythag::{self, DiffSquareRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum BrickType {
    /// Both scales are 1.
    First,
    /// Exactly one scale is 1.
    Second,
    /// Both scales exceed 1.
    Third,
}

impl BrickType {
    pub fn from_scales(t1: u64, t2: u64) -> Self {
        match (t1 == 1, t2 == 1) {
            (true, true) => BrickType::First,
            (false, false) => BrickType::Third,
            _ => BrickType::Second,
        }
    }

    pub fn index(self) -> u8 {
        self.into()
    }
}

impl From<BrickType> for u8 {
    fn from(t: BrickType) -> u8 {
        match t {
            BrickType::First => 1,
            BrickType::Second => 2,
            BrickType::Third => 3,
        }
    }
}

impl TryFrom<u8> for BrickType {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(BrickType::First),
            2 => Ok(BrickType::Second),
            3 => Ok(BrickType::Third),
            _ => Err(format!("brick type must be 1, 2 or 3, got {v}")),
        }
    }
}

impl fmt::Display for BrickType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BrickWitness {
    pub n: u64,
    pub rep1: DiffSquareRep,
    pub rep2: DiffSquareRep,
    pub d: u128,
    pub brick_type: BrickType,
}

impl BrickWitness {
    /// Builds a witness from two representations, ordering them canonically and
    /// checking the square certificate.
    pub fn from_reps(n: u64, a: DiffSquareRep, b: DiffSquareRep) -> Result<Option<Self>> {
        a.check(n)?;
        b.check(n)?;
        if a == b {
            return Err(Error::InvalidInput(
                "a representation cannot be paired with itself".into(),
            ));
        }
        let (rep1, rep2) = if (a.t, a.e) <= (b.t, b.e) { (a, b) } else { (b, a) };
        let sum = arith::checked_add(rep1.weight_sq()?, rep2.weight_sq()?, "brick certificate")?;
        Ok(arith::is_square(sum).map(|d| BrickWitness {
            n,
            rep1,
            rep2,
            d,
            brick_type: BrickType::from_scales(rep1.t, rep2.t),
        }))
    }

    /// Re-checks every invariant of the witness.
    pub fn check(&self) -> Result<()> {
        self.rep1.check(self.n)?;
        self.rep2.check(self.n)?;
        if (self.rep1.t, self.rep1.e) >= (self.rep2.t, self.rep2.e) {
            return Err(Error::Verification(format!(
                "witness for {} is not in canonical order",
                self.n
            )));
        }
        let sum = arith::checked_add(self.rep1.weight_sq()?, self.rep2.weight_sq()?, "brick certificate")?;
        if arith::checked_square(self.d, "brick certificate root")? != sum {
            return Err(Error::Verification(format!(
                "d = {} is not the square root of the certificate sum for n = {}",
                self.d, self.n
            )));
        }
        if self.brick_type != BrickType::from_scales(self.rep1.t, self.rep2.t) {
            return Err(Error::Verification(format!("brick type mismatch for n = {}", self.n)));
        }
        Ok(())
    }

    /// The even edges coincide; such a pair is excluded from census counts.
    pub fn is_degenerate(&self) -> bool {
        self.rep1.weight() == self.rep2.weight()
    }

    /// Every conjecture "(>1)" bound: `f` and `h` above 1 (the other bounds hold automatically).
    pub fn is_strict(&self) -> bool {
        self.rep1.f > 1 && self.rep2.f > 1 && self.d > 1
    }

    /// Multiplies both scales by `m`, giving a witness of `m·n`.
    pub fn scaled(&self, m: u64) -> Result<Self> {
        let scale = |r: DiffSquareRep| -> Result<DiffSquareRep> {
            Ok(DiffSquareRep {
                t: r.t.checked_mul(m).ok_or(Error::Overflow("scaled representation"))?,
                ..r
            })
        };
        let n = self.n.checked_mul(m).ok_or(Error::Overflow("scaled odd edge"))?;
        let (rep1, rep2) = (scale(self.rep1)?, scale(self.rep2)?);
        let (rep1, rep2) = if (rep1.t, rep1.e) <= (rep2.t, rep2.e) { (rep1, rep2) } else { (rep2, rep1) };
        Ok(BrickWitness {
            n,
            rep1,
            rep2,
            d: arith::checked_mul(self.d, m as u128, "scaled certificate")?,
            brick_type: BrickType::from_scales(rep1.t, rep2.t),
        })
    }
}

/// Edges `a, b, c` and face diagonals over each pair of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerBrick {
    pub a: u128,
    pub b: u128,
    pub c: u128,
    pub d_ab: u128,
    pub d_ac: u128,
    pub d_bc: u128,
    pub primitive: bool,
}

/// The three face identities, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceIdentity {
    AB,
    AC,
    BC,
}

impl fmt::Display for FaceIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceIdentity::AB => "a²+b²=d_ab² (first)",
            FaceIdentity::AC => "a²+c²=d_ac² (second)",
            FaceIdentity::BC => "b²+c²=d_bc² (third)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrickVerdict {
    Valid,
    NonPositive,
    Failed(FaceIdentity),
}

impl BrickVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, BrickVerdict::Valid)
    }
}

pub(crate) fn pythagorean(x: u128, y: u128, z: u128) -> bool {
    let sq = |v: u128| v.checked_mul(v);
    match (sq(x), sq(y), sq(z)) {
        (Some(x2), Some(y2), Some(z2)) => x2.checked_add(y2) == Some(z2),
        _ => false,
    }
}

pub(crate) fn gcd3(a: u128, b: u128, c: u128) -> u128 {
    arith::gcd_u128(arith::gcd_u128(a, b), c)
}

/// Assigns three diagonals to the edge pairs `(ab, ac, bc)`. The listed order is
/// kept when it satisfies the most identities; otherwise the first permutation
/// that satisfies strictly more identities is used.
pub(crate) fn match_diagonals(a: u128, b: u128, c: u128, diags: [u128; 3]) -> [u128; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let score = |p: &[usize; 3]| {
        [(a, b), (a, c), (b, c)]
            .iter()
            .zip(p)
            .filter(|((x, y), &i)| pythagorean(*x, *y, diags[i]))
            .count()
    };
    let mut best = PERMS[0];
    let mut best_score = score(&best);
    for p in &PERMS[1..] {
        let s = score(p);
        if s > best_score {
            best = *p;
            best_score = s;
        }
    }
    [diags[best[0]], diags[best[1]], diags[best[2]]]
}

impl EulerBrick {
    /// From three edges and three diagonals given in any order.
    pub fn from_lengths(edges: [u128; 3], diags: [u128; 3]) -> Self {
        let [a, b, c] = edges;
        let [d_ab, d_ac, d_bc] = match_diagonals(a, b, c, diags);
        EulerBrick {
            a,
            b,
            c,
            d_ab,
            d_ac,
            d_bc,
            primitive: gcd3(a, b, c) == 1,
        }
    }

    /// `(a, b, c, d_ab, d_ac, d_bc)`.
    pub fn tuple(&self) -> [u128; 6] {
        [self.a, self.b, self.c, self.d_ab, self.d_ac, self.d_bc]
    }
}

impl fmt::Display for EulerBrick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.a, self.b, self.c, self.d_ab, self.d_ac, self.d_bc
        )
    }
}

pub fn verify_brick(b: &EulerBrick) -> BrickVerdict {
    if b.tuple().contains(&0) {
        return BrickVerdict::NonPositive;
    }
    let checks = [
        (FaceIdentity::AB, b.a, b.b, b.d_ab),
        (FaceIdentity::AC, b.a, b.c, b.d_ac),
        (FaceIdentity::BC, b.b, b.c, b.d_bc),
    ];
    for (id, x, y, z) in checks {
        if !pythagorean(x, y, z) {
            return BrickVerdict::Failed(id);
        }
    }
    BrickVerdict::Valid
}

pub fn build_brick(w: &BrickWitness) -> EulerBrick {
    let a = w.n as u128;
    let b = w.rep1.even_leg();
    let c = w.rep2.even_leg();
    EulerBrick {
        a,
        b,
        c,
        d_ab: w.rep1.hypotenuse(),
        d_ac: w.rep2.hypotenuse(),
        d_bc: 2 * w.d,
        primitive: gcd3(a, b, c) == 1,
    }
}

/// Every witness at `n`, in canonical order. `strict` enforces the `f, h > 1` bounds.
pub fn search_brick_witnesses(n: u64, strict: bool) -> Result<Vec<BrickWitness>> {
    let reps = pythag::diff_square_reps(n)?;
    witnesses_from_reps(n, &reps, strict)
}

pub(crate) fn witnesses_from_reps(
    n: u64,
    reps: &[DiffSquareRep],
    strict: bool,
) -> Result<Vec<BrickWitness>> {
    let weights = reps
        .iter()
        .map(|r| r.weight_sq())
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if strict && (reps[i].f == 1 || reps[j].f == 1) {
                continue;
            }
            let sum = arith::checked_add(weights[i], weights[j], "brick certificate")?;
            if let Some(d) = arith::is_square(sum) {
                // reps are sorted by (t, e), so i < j is already canonical
                out.push(BrickWitness {
                    n,
                    rep1: reps[i],
                    rep2: reps[j],
                    d,
                    brick_type: BrickType::from_scales(reps[i].t, reps[j].t),
                });
            }
        }
    }
    Ok(out)
}

/// Result of classifying an externally supplied box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classified {
    /// Common factor removed from the input edges.
    pub scale: u64,
    /// Witness of the primitive part.
    pub witness: BrickWitness,
}

fn face_diagonal(x: u64, y: u64) -> std::result::Result<u128, ClassifyError> {
    let (x, y) = (x as u128, y as u128);
    let sum = (x * x)
        .checked_add(y * y)
        .ok_or_else(|| ClassifyError::NotEulerBrick(format!("{x}² + {y}² exceeds 128 bits")))?;
    arith::is_square(sum)
        .ok_or_else(|| ClassifyError::NotEulerBrick(format!("{x}² + {y}² is not a square")))
}

/// Recovers `(t, e, f)` from the triple `(n, even_edge, diag)`.
fn recover_rep(n: u64, even_edge: u64, diag: u128) -> std::result::Result<DiffSquareRep, ClassifyError> {
    let none = || ClassifyError::NoRepresentation { n, even_edge };
    let g = arith::gcd_u128(n as u128, diag) as u64;
    let fac = arith::factorize(g).map_err(|_| none())?;
    for t in arith::divisors(&fac) {
        let (nt, dt) = ((n / t) as u128, diag / t as u128);
        if (dt + nt) % 2 != 0 {
            continue;
        }
        let (Some(e), Some(f)) = (arith::is_square((dt + nt) / 2), arith::is_square((dt - nt) / 2)) else {
            continue;
        };
        if f == 0 || arith::gcd_u128(e, f) != 1 {
            continue;
        }
        if 2 * t as u128 * e * f == even_edge as u128 {
            return Ok(DiffSquareRep { t, e: e as u64, f: f as u64 });
        }
    }
    Err(none())
}

/// Classifies a box with edges in any order.
pub fn classify_brick(x: u64, y: u64, z: u64) -> std::result::Result<Classified, ClassifyError> {
    if x == 0 || y == 0 || z == 0 {
        return Err(ClassifyError::NotEulerBrick("edges must be positive".into()));
    }
    face_diagonal(x, y)?;
    face_diagonal(x, z)?;
    face_diagonal(y, z)?;
    let scale = arith::gcd(arith::gcd(x, y), z);
    let edges = [x / scale, y / scale, z / scale];
    let odd: Vec<u64> = edges.iter().copied().filter(|v| v % 2 == 1).collect();
    let n = match odd.len() {
        0 => return Err(ClassifyError::NoOddEdge),
        1 => odd[0],
        k => return Err(ClassifyError::MultipleOddEdges(k)),
    };
    if n < 3 {
        return Err(ClassifyError::NotEulerBrick(format!("odd edge {n} is too small")));
    }
    let mut evens = edges.iter().copied().filter(|v| v % 2 == 0);
    let (e1, e2) = (evens.next().unwrap(), evens.next().unwrap());
    let r1 = recover_rep(n, e1, face_diagonal(n, e1)?)?;
    let r2 = recover_rep(n, e2, face_diagonal(n, e2)?)?;
    let d = face_diagonal(e1, e2)? / 2;
    let (rep1, rep2) = if (r1.t, r1.e) <= (r2.t, r2.e) { (r1, r2) } else { (r2, r1) };
    Ok(Classified {
        scale,
        witness: BrickWitness {
            n,
            rep1,
            rep2,
            d,
            brick_type: BrickType::from_scales(rep1.t, rep2.t),
        },
    })
}
