//! Difference-of-squares representations of odd numbers and the Pythagorean
//! triples they generate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};

/// One way of writing `n = t·(e² − f²)` with `gcd(e, f) = 1` and `e > f ≥ 1`.
///
/// Every such representation of an odd `n` corresponds to exactly one
/// Pythagorean triple `(n, 2tef, t(e² + f²))`; it is primitive iff `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiffSquareRep {
    pub t: u64,
    pub e: u64,
    pub f: u64,
}

impl DiffSquareRep {
    /// Checks the representation against `n` and returns it.
    pub fn new(n: u64, t: u64, e: u64, f: u64) -> Result<Self> {
        let rep = DiffSquareRep { t, e, f };
        rep.check(n)?;
        Ok(rep)
    }

    pub fn check(&self, n: u64) -> Result<()> {
        let DiffSquareRep { t, e, f } = *self;
        if t == 0 || f == 0 || e <= f {
            return Err(Error::InvalidInput(format!(
                "representation {self} needs t >= 1 and e > f >= 1"
            )));
        }
        if arith::gcd(e, f) != 1 {
            return Err(Error::InvalidInput(format!("representation {self} has gcd(e,f) > 1")));
        }
        let diff = (e as u128 * e as u128) - (f as u128 * f as u128);
        if diff.checked_mul(t as u128) != Some(n as u128) {
            return Err(Error::InvalidInput(format!("representation {self} does not equal {n}")));
        }
        Ok(())
    }

    /// `t·e·f`, half the even leg.
    pub fn weight(&self) -> u128 {
        self.t as u128 * self.e as u128 * self.f as u128
    }

    /// `(t·e·f)²`, the term this representation contributes to a square certificate.
    pub fn weight_sq(&self) -> Result<u128> {
        arith::checked_square(self.weight(), "squared representation weight")
    }

    pub fn even_leg(&self) -> u128 {
        2 * self.weight()
    }

    pub fn hypotenuse(&self) -> u128 {
        self.t as u128 * (self.e as u128 * self.e as u128 + self.f as u128 * self.f as u128)
    }

    pub fn is_primitive(&self) -> bool {
        self.t == 1
    }

    pub fn triple(&self, n: u64) -> PythTriple {
        PythTriple {
            x: n as u128,
            y: self.even_leg(),
            z: self.hypotenuse(),
            r: self.t as u128,
        }
    }
}

impl fmt::Display for DiffSquareRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}²−{}²)", self.t, self.e, self.f)
    }
}

/// A Pythagorean triple with odd leg `x`, even leg `y`, hypotenuse `z` and scale `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PythTriple {
    pub x: u128,
    pub y: u128,
    pub z: u128,
    pub r: u128,
}

impl PythTriple {
    pub fn holds(&self) -> bool {
        match (self.x.checked_mul(self.x), self.y.checked_mul(self.y), self.z.checked_mul(self.z)) {
            (Some(x2), Some(y2), Some(z2)) => x2.checked_add(y2) == Some(z2),
            _ => false,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.r == 1
    }
}

/// `(u² − v², 2uv, u² + v²)` for coprime `u > v ≥ 1` of opposite parity.
pub fn param_primitive_triple(u: u64, v: u64) -> Result<PythTriple> {
    if v == 0 || u <= v {
        return Err(Error::InvalidInput(format!("need u > v >= 1, got u={u} v={v}")));
    }
    if arith::gcd(u, v) != 1 {
        return Err(Error::InvalidInput(format!("need gcd(u,v) = 1, got u={u} v={v}")));
    }
    if (u + v) % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "need u and v of opposite parity, got u={u} v={v}"
        )));
    }
    let (u, v) = (u as u128, v as u128);
    Ok(PythTriple {
        x: u * u - v * v,
        y: 2 * u * v,
        z: u * u + v * v,
        r: 1,
    })
}

pub(crate) fn check_odd(n: u64) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!("n must be odd and >= 3, got {n}")));
    }
    Ok(())
}

/// All representations of odd `n`, ordered by `(t, e)` ascending.
pub fn diff_square_reps(n: u64) -> Result<Vec<DiffSquareRep>> {
    check_odd(n)?;
    let fac = arith::factorize(n)?;
    Ok(reps_from_divisors(n, &arith::divisors(&fac)))
}

pub(crate) fn reps_from_divisors(n: u64, divs: &[u64]) -> Vec<DiffSquareRep> {
    let mut out = Vec::new();
    for &t in divs {
        let m = n / t;
        let mut per_t = Vec::new();
        // s·w = m with s < w; every divisor of m is also a divisor of n.
        for &s in divs {
            if s as u128 * s as u128 >= m as u128 {
                break;
            }
            if m % s != 0 {
                continue;
            }
            let w = m / s;
            let (e, f) = ((w + s) / 2, (w - s) / 2);
            if arith::gcd(e, f) == 1 {
                per_t.push(DiffSquareRep { t, e, f });
            }
        }
        per_t.sort_unstable_by_key(|r| r.e);
        out.extend(per_t);
    }
    out
}

/// One triple `(n, 2tef, t(e² + f²))` per representation, in representation order.
pub fn triples_with_odd_edge(n: u64) -> Result<Vec<PythTriple>> {
    Ok(diff_square_reps(n)?.iter().map(|r| r.triple(n)).collect())
}

/// Sum over divisors `z ≠ 1` of `n` of `2^(ω(z) − 1)`.
pub fn count_triples_odd_edge(f: &Factorization) -> Result<u64> {
    check_odd(f.n)?;
    Ok(arith::divisors_with_omega(f)
        .into_iter()
        .filter(|&(z, _)| z != 1)
        .map(|(_, w)| 1u64 << (w - 1))
        .sum())
}
