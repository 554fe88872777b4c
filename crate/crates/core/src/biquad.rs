//! Sums of fourth powers that are squares:
//!
//! 1. `P⁴ + Q⁴ + R⁴ + S⁴ = T²`
//! 2. `P⁴ + Q⁴ + a²(R⁴ + S⁴) = T²`
//! 3. `a²(P⁴ + Q⁴) + b²(R⁴ + S⁴) = T²`
//!
//! with `P, Q, R, S` odd and above 1, `gcd(P, Q) = gcd(R, S) = 1`, odd scales
//! above 1 and `T` even. Each hit carries every split `T = d(U² + V²)` with
//! `d` odd and `U, V` odd coprime, plus whether the product chain holds.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum BiquadConjecture {
    FourPowers,
    OneScaled,
    BothScaled,
}

impl BiquadConjecture {
    pub fn index(self) -> u8 {
        self.into()
    }
}

impl From<BiquadConjecture> for u8 {
    fn from(c: BiquadConjecture) -> u8 {
        match c {
            BiquadConjecture::FourPowers => 1,
            BiquadConjecture::OneScaled => 2,
            BiquadConjecture::BothScaled => 3,
        }
    }
}

impl TryFrom<u8> for BiquadConjecture {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(BiquadConjecture::FourPowers),
            2 => Ok(BiquadConjecture::OneScaled),
            3 => Ok(BiquadConjecture::BothScaled),
            _ => Err(format!("biquadratic conjecture must be 1, 2 or 3, got {v}")),
        }
    }
}

impl fmt::Display for BiquadConjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    /// `T = U² + V²`
    Direct,
    /// `T = d(U² + V²)` with `d > 1`
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Annotation {
    pub kind: SplitKind,
    pub d: u64,
    pub u: u64,
    pub v: u64,
    pub product_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiquadHit {
    pub conjecture: BiquadConjecture,
    /// Scale on `P⁴ + Q⁴`; 1 unless conjecture 3.
    pub scale_pq: u64,
    /// Scale on `R⁴ + S⁴`; 1 for conjecture 1. Conjecture 2 keeps its single scale here.
    pub scale_rs: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub annotations: Vec<Annotation>,
}

fn fourth(x: u64) -> Result<u128> {
    let sq = arith::checked_square(x as u128, "fourth power")?;
    arith::checked_square(sq, "fourth power")
}

impl BiquadHit {
    /// Left-hand side of the defining equation.
    pub fn lhs(&self) -> Result<u128> {
        let left = arith::checked_add(fourth(self.p)?, fourth(self.q)?, "biquadratic sum")?;
        let right = arith::checked_add(fourth(self.r)?, fourth(self.s)?, "biquadratic sum")?;
        let a2 = (self.scale_pq as u128).pow(2);
        let b2 = (self.scale_rs as u128).pow(2);
        arith::checked_add(
            arith::checked_mul(a2, left, "biquadratic sum")?,
            arith::checked_mul(b2, right, "biquadratic sum")?,
            "biquadratic sum",
        )
    }

    /// The two sides of the product chain, e.g. `(aPQ, bRS)`.
    pub fn chain(&self) -> (u128, u128) {
        (
            self.scale_pq as u128 * self.p as u128 * self.q as u128,
            self.scale_rs as u128 * self.r as u128 * self.s as u128,
        )
    }

    pub fn has_product_ok(&self) -> bool {
        self.annotations.iter().any(|a| a.product_ok)
    }

    /// Re-substitutes the equation and re-checks every side condition.
    pub fn check(&self) -> Result<()> {
        let fail = |why: String| Err(Error::Verification(why));
        let odd_gt1 = |x: u64| x > 1 && x % 2 == 1;
        if ![self.p, self.q, self.r, self.s].into_iter().all(odd_gt1) {
            return fail(format!("P,Q,R,S must be odd and > 1 in {self}"));
        }
        if arith::gcd(self.p, self.q) != 1 || arith::gcd(self.r, self.s) != 1 {
            return fail(format!("coprimality fails in {self}"));
        }
        let scales_ok = match self.conjecture {
            BiquadConjecture::FourPowers => self.scale_pq == 1 && self.scale_rs == 1,
            BiquadConjecture::OneScaled => self.scale_pq == 1 && odd_gt1(self.scale_rs),
            BiquadConjecture::BothScaled => odd_gt1(self.scale_pq) && odd_gt1(self.scale_rs),
        };
        if !scales_ok {
            return fail(format!("scales do not fit conjecture {} in {self}", self.conjecture));
        }
        if self.t % 2 != 0 || arith::checked_square(self.t as u128, "T²")? != self.lhs()? {
            return fail(format!("equation does not hold for {self}"));
        }
        let chain = self.chain();
        for ann in &self.annotations {
            let (u, v, d) = (ann.u as u128, ann.v as u128, ann.d as u128);
            if d % 2 == 0 || u % 2 == 0 || v % 2 == 0 || arith::gcd_u128(u, v) != 1 {
                return fail(format!("annotation {ann:?} violates parity or coprimality"));
            }
            if d * (u * u + v * v) != self.t as u128 {
                return fail(format!("annotation {ann:?} does not split T = {}", self.t));
            }
            if (ann.kind == SplitKind::Direct) != (ann.d == 1) {
                return fail(format!("annotation {ann:?} has the wrong kind"));
            }
            if ann.product_ok != product_chain_holds(chain, ann) {
                return fail(format!("annotation {ann:?} has a wrong product flag"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for BiquadHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.conjecture {
            BiquadConjecture::FourPowers => write!(
                f,
                "{}⁴+{}⁴+{}⁴+{}⁴={}²",
                self.p, self.q, self.r, self.s, self.t
            ),
            BiquadConjecture::OneScaled => write!(
                f,
                "{}⁴+{}⁴+{}²({}⁴+{}⁴)={}²",
                self.p, self.q, self.scale_rs, self.r, self.s, self.t
            ),
            BiquadConjecture::BothScaled => write!(
                f,
                "{}²({}⁴+{}⁴)+{}²({}⁴+{}⁴)={}²",
                self.scale_pq, self.p, self.q, self.scale_rs, self.r, self.s, self.t
            ),
        }
    }
}

fn product_chain_holds((left, right): (u128, u128), ann: &Annotation) -> bool {
    let target = ann.d as u128 * ann.u as u128 * ann.v as u128;
    left == right && right == target
}

/// Recomputes the annotations of `h` from scratch.
///
/// One annotation per odd divisor `d` of `T` and per decomposition of `T/d` as a
/// sum of two coprime odd squares. `strict` requires `U, V > 1`.
pub fn annotate_hit(h: &BiquadHit, strict: bool) -> Result<BiquadHit> {
    let fac = arith::factorize(h.t)?;
    let chain = h.chain();
    let mut annotations = Vec::new();
    for d in arith::divisors(&fac).into_iter().filter(|d| d % 2 == 1) {
        let rest = h.t / d;
        if rest % 2 != 0 {
            continue;
        }
        for (u, v) in arith::two_square_decompositions(rest, strict)? {
            let mut ann = Annotation {
                kind: if d == 1 { SplitKind::Direct } else { SplitKind::Scaled },
                d,
                u,
                v,
                product_ok: false,
            };
            ann.product_ok = product_chain_holds(chain, &ann);
            annotations.push(ann);
        }
    }
    Ok(BiquadHit { annotations, ..h.clone() })
}

/// Coprime odd pairs `3 ≤ P < Q ≤ bound` with `P⁴ + Q⁴`.
fn coprime_odd_pairs(bound: u64) -> Result<Vec<(u64, u64, u128)>> {
    let mut out = Vec::new();
    for p in (3..=bound).step_by(2) {
        for q in (p + 2..=bound).step_by(2) {
            if arith::gcd(p, q) == 1 {
                out.push((p, q, arith::checked_add(fourth(p)?, fourth(q)?, "P⁴+Q⁴")?));
            }
        }
    }
    Ok(out)
}

fn odd_scales(scale_bound: u64) -> Vec<u64> {
    (3..=scale_bound).step_by(2).collect()
}

/// Every hit with `max(P, Q, R, S) ≤ bound` and odd scales in `3..=scale_bound`.
///
/// Canonical form: `P < Q`, `R < S`; for conjectures 1 and 3 the scaled pairs
/// are ordered `(a, P, Q) ≤ (b, R, S)`. Results are sorted.
pub fn search_biquadratic(
    conjecture: BiquadConjecture,
    bound: u64,
    scale_bound: u64,
    strict: bool,
) -> Result<Vec<BiquadHit>> {
    if bound < 3 {
        return Err(Error::InvalidInput(format!("bound must be >= 3, got {bound}")));
    }
    if conjecture != BiquadConjecture::FourPowers && scale_bound < 3 {
        return Err(Error::InvalidInput(format!(
            "conjecture {conjecture} needs a scale bound >= 3, got {scale_bound}"
        )));
    }
    let pairs = coprime_odd_pairs(bound)?;
    let scales = match conjecture {
        BiquadConjecture::FourPowers => vec![1],
        _ => odd_scales(scale_bound),
    };
    let left_scales = match conjecture {
        BiquadConjecture::BothScaled => scales.clone(),
        _ => vec![1],
    };
    // Partitioned on the first pair; each worker owns a disjoint slice of the space.
    let chunks: Vec<Vec<BiquadHit>> = (0..pairs.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<BiquadHit>> {
            let (p, q, left) = pairs[i];
            let mut hits = Vec::new();
            for &a in &left_scales {
                let left_term = arith::checked_mul((a as u128).pow(2), left, "biquadratic sum")?;
                for &b in &scales {
                    for (j, &(r, s, right)) in pairs.iter().enumerate() {
                        let symmetric = conjecture != BiquadConjecture::OneScaled;
                        if symmetric && (a, i) > (b, j) {
                            continue;
                        }
                        let total = arith::checked_add(
                            left_term,
                            arith::checked_mul((b as u128).pow(2), right, "biquadratic sum")?,
                            "biquadratic sum",
                        )?;
                        let Some(t) = arith::is_square(total) else {
                            continue;
                        };
                        let t = u64::try_from(t).map_err(|_| Error::Overflow("T"))?;
                        if t % 2 != 0 {
                            continue;
                        }
                        let hit = BiquadHit {
                            conjecture,
                            scale_pq: a,
                            scale_rs: b,
                            p,
                            q,
                            r,
                            s,
                            t,
                            annotations: Vec::new(),
                        };
                        hits.push(annotate_hit(&hit, strict)?);
                    }
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut hits: Vec<BiquadHit> = chunks.into_iter().flatten().collect();
    hits.sort();
    Ok(hits)
}
