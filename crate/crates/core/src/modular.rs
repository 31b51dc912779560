//! Exact `SL(2, Z)` arithmetic.
//!
//! Matrices act on Fourier indices as row vectors, `(n₁, n₂)·M`, and on
//! angles (or grid indices) as column vectors, `M·θ`. Every index pair
//! `n ≠ 0` with `g = gcd(n)` lies in the orbit of `(g, g)`, reached through
//! [`orbit_representative`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted entry magnitude.
pub const ENTRY_LIMIT: i64 = 1 << 62;

/// Integer matrix `[[m, n], [p, q]]` with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct ModularMatrix {
    m: i64,
    n: i64,
    p: i64,
    q: i64,
}

impl TryFrom<[[i64; 2]; 2]> for ModularMatrix {
    type Error = Error;

    fn try_from(r: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(r[0][0], r[0][1], r[1][0], r[1][1])
    }
}

impl From<ModularMatrix> for [[i64; 2]; 2] {
    fn from(a: ModularMatrix) -> Self {
        a.rows()
    }
}

impl std::fmt::Display for ModularMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m, self.n, self.p, self.q)
    }
}

fn narrow(v: i128) -> Result<i64> {
    if v.unsigned_abs() > ENTRY_LIMIT as u128 {
        return Err(Error::Overflow);
    }
    Ok(v as i64)
}

impl ModularMatrix {
    pub const IDENTITY: Self = Self { m: 1, n: 0, p: 0, q: 1 };

    pub fn new(m: i64, n: i64, p: i64, q: i64) -> Result<Self> {
        for v in [m, n, p, q] {
            if v.unsigned_abs() > ENTRY_LIMIT as u64 {
                return Err(Error::Overflow);
            }
        }
        let det = m as i128 * q as i128 - n as i128 * p as i128;
        if det != 1 {
            return Err(Error::NotUnimodular { m, n, p, q, det });
        }
        Ok(Self { m, n, p, q })
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.m, self.n, self.p, self.q)
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.m, self.n], [self.p, self.q]]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn det(&self) -> i128 {
        self.m as i128 * self.q as i128 - self.n as i128 * self.p as i128
    }

    pub fn inverse(&self) -> Self {
        Self { m: self.q, n: -self.n, p: -self.p, q: self.m }
    }

    pub fn neg(&self) -> Self {
        Self { m: -self.m, n: -self.n, p: -self.p, q: -self.q }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = (self, o);
        let w = |x: i64, y: i64, z: i64, t: i64| narrow(x as i128 * y as i128 + z as i128 * t as i128);
        Ok(Self {
            m: w(a.m, b.m, a.n, b.p)?,
            n: w(a.m, b.n, a.n, b.q)?,
            p: w(a.p, b.m, a.q, b.p)?,
            q: w(a.p, b.n, a.q, b.q)?,
        })
    }

    /// `self^k`, negative `k` through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut out = Self::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Row-vector action `(n₁, n₂)·M`.
    pub fn act_row(&self, n1: i64, n2: i64) -> Result<(i64, i64)> {
        let (n1, n2) = (n1 as i128, n2 as i128);
        Ok((
            narrow(n1 * self.m as i128 + n2 * self.p as i128)?,
            narrow(n1 * self.n as i128 + n2 * self.q as i128)?,
        ))
    }

    /// Column-vector action `M·(k₁, k₂)ᵀ`.
    pub fn act_column(&self, k1: i64, k2: i64) -> Result<(i64, i64)> {
        let (k1, k2) = (k1 as i128, k2 as i128);
        Ok((
            narrow(self.m as i128 * k1 + self.n as i128 * k2)?,
            narrow(self.p as i128 * k1 + self.q as i128 * k2)?,
        ))
    }
}

pub fn mod_mul(a: &ModularMatrix, b: &ModularMatrix) -> Result<ModularMatrix> {
    a.mul(b)
}

pub fn mod_inv(a: &ModularMatrix) -> ModularMatrix {
    a.inverse()
}

pub fn mod_det(a: &ModularMatrix) -> i128 {
    a.det()
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// `(g, m, n)` with `g = gcd(a, b) > 0` and `m·a + n·b = g`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::ZeroIndex);
    }
    fn rec(a: i64, b: i64) -> (i64, i64, i64) {
        if b == 0 {
            (a, 1, 0)
        } else {
            let (g, x, y) = rec(b, a % b);
            (g, y, x - (a / b) * y)
        }
    }
    let (g, m, n) = rec(a, b);
    Ok(if g < 0 { (-g, -m, -n) } else { (g, m, n) })
}

/// `M = [[m, m − n₂/g], [n, n + n₁/g]]` with `(n₁, n₂)·M = (g, g)`.
pub fn orbit_representative(n1: i64, n2: i64) -> Result<ModularMatrix> {
    let (g, m, n) = if n1 == n2 && n1 > 0 { (n1, 1, 0) } else { extended_gcd(n1, n2)? };
    let r1 = m.checked_sub(n2 / g).ok_or(Error::Overflow)?;
    let r2 = n.checked_add(n1 / g).ok_or(Error::Overflow)?;
    ModularMatrix::new(m, r1, n, r2)
}

/// Which index point a stabilizer fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerKind {
    /// `(g, g)`
    Diag,
    /// `(g, 0)`
    Axis1,
    /// `(0, g)`
    Axis2,
}

impl StabilizerKind {
    pub fn generator(self) -> ModularMatrix {
        let (m, n, p, q) = match self {
            Self::Diag => (2, 1, -1, 0),
            Self::Axis1 => (1, 0, 1, 1),
            Self::Axis2 => (1, 1, 0, 1),
        };
        ModularMatrix { m, n, p, q }
    }
}

pub fn stabilizer_power(k: i64, kind: StabilizerKind) -> Result<ModularMatrix> {
    kind.generator().pow(k)
}

pub fn index_action(n1: i64, n2: i64, m: &ModularMatrix) -> Result<(i64, i64)> {
    m.act_row(n1, n2)
}

/// Orbit coordinates of an index pair: `n = (g, g)·rep⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub g: i64,
    pub rep: ModularMatrix,
}

pub fn orbit_label(n1: i64, n2: i64) -> Result<OrbitLabel> {
    if n1 == 0 && n2 == 0 {
        return Ok(OrbitLabel { g: 0, rep: ModularMatrix::IDENTITY });
    }
    Ok(OrbitLabel { g: gcd(n1, n2), rep: orbit_representative(n1, n2)? })
}

pub fn label_to_index(label: &OrbitLabel) -> Result<(i64, i64)> {
    label.rep.inverse().act_row(label.g, label.g)
}

/// Coprime pairs `c` with `max |cᵢ| ≤ height`, in a fixed order.
pub fn coprime_pairs(height: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -height..=height {
        for b in -height..=height {
            if gcd(a, b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// One coset representative of `SL(2, Z)/N` per coprime pair `c` of height
/// at most `height`, where `N` stabilises `(1, 1)`. The representative `M`
/// satisfies `c·M = (1, 1)`, so `(g, g)·M⁻¹ = g·c`.
pub fn enumerate_cosets(height: i64) -> Result<Vec<ModularMatrix>> {
    if height < 1 {
        return Err(Error::InvalidParameter(format!("coset height must be ≥ 1, got {height}")));
    }
    coprime_pairs(height).into_iter().map(|(a, b)| orbit_representative(a, b)).collect()
}
