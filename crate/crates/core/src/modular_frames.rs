//! Modular wavelet families on band-limited spaces.
//!
//! A modular family is indexed by cosets `M ∈ SL(2, Z)/N`, where `N` is the
//! stabiliser of `(1, 1)`. Its atoms have Fourier coefficients
//! `(γ_M)^n = γ^{nM}`. Only the diagonal part of `γ` enters, so a family
//! is described by its [`DiagonalSequence`] `d(k) = γ̂(k, k)`.
//!
//! A diagonal index `(k, k)` with `k ≠ 0` is reached from the orbit `𝒢_g` by
//! exactly two cosets (`k = ±g`), since `−I ∉ N`. The index `(0, 0)` is fixed
//! by the whole group and is carried by the identity coset alone.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::conformal::{apply_modular, wavelet_atom, AtomParams};
use crate::dilation::DilatedSampler;
use crate::error::{Error, Result};
use crate::modular::{coprime_pairs, enumerate_cosets, gcd, orbit_representative, ModularMatrix};
use crate::quadrature::{PanelRule, StereoRule};
use crate::torus::{inner_product, FourierTable, TorusGrid, TorusSignal};
use crate::wavelets::MotherWavelet;

/// Magnitude below which a coefficient counts as zero.
pub const SUPPORT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandLimit {
    pub l1: usize,
    pub l2: usize,
}

impl BandLimit {
    pub fn new(l1: usize, l2: usize) -> Self {
        Self { l1, l2 }
    }

    pub fn g_max(&self) -> usize {
        self.l1.max(self.l2)
    }

    pub fn contains(&self, t: &FourierTable) -> bool {
        t.indices().zip(&t.coeffs).all(|((a, b), c)| {
            (a.unsigned_abs() as usize <= self.l1 && b.unsigned_abs() as usize <= self.l2) || *c == Complex64::default()
        })
    }
}

/// `d(k)` for `k ∈ [−l, l]`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSequence {
    l: usize,
    d: Vec<Complex64>,
}

impl DiagonalSequence {
    pub fn from_coefficients(l: usize, d: Vec<Complex64>) -> Result<Self> {
        if d.len() != 2 * l + 1 {
            return Err(Error::ShapeMismatch { expected: 2 * l + 1, got: d.len() });
        }
        Ok(Self { l, d })
    }

    /// `d(k) = 1` on `[0, g_max]`: the indicator profile.
    pub fn indicator(g_max: usize) -> Self {
        let l = g_max;
        let d = (-(l as i64)..=l as i64)
            .map(|k| if k >= 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() })
            .collect();
        Self { l, d }
    }

    /// Diagonal coefficients of `γ` (scale 1).
    pub fn from_wavelet(gamma: &MotherWavelet, l: usize, rule: &StereoRule) -> Result<Self> {
        Self::dilated(gamma, 1.0, l, rule)
    }

    /// Diagonal coefficients of `D_{a,a} γ`.
    pub fn dilated(gamma: &MotherWavelet, a: f64, l: usize, rule: &StereoRule) -> Result<Self> {
        if !gamma.is_diagonal() {
            return Err(Error::NonDiagonal);
        }
        Ok(Self { l, d: DilatedSampler::new(gamma, a, a, rule)?.diagonal(l) })
    }

    /// Sequence of `γ(θ₁, θ₂) = η(θ₁ + θ₂)`: `d(k) = ∫ η(s) e^{−iks} ds`.
    pub fn from_profile<F: Fn(f64) -> Complex64>(eta: F, l: usize, quad: PanelRule) -> Result<Self> {
        quad.validate()?;
        let rule = quad.on_circle();
        let d = (-(l as i64)..=l as i64)
            .map(|k| {
                rule.points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&s, &w)| eta(s) * Complex64::from_polar(w, -(k as f64) * s))
                    .sum()
            })
            .collect();
        Ok(Self { l, d })
    }

    pub fn max_index(&self) -> usize {
        self.l
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.l {
            Complex64::default()
        } else {
            self.d[(k + self.l as i64) as usize]
        }
    }

    /// Frame weight of the orbit `𝒢_g`: `|d(g)|² + |d(−g)|²`, or `|d(0)|²` for `g = 0`.
    pub fn orbit_weight(&self, g: u64) -> f64 {
        if g == 0 {
            self.get(0).norm_sqr()
        } else {
            let g = g as i64;
            self.get(g).norm_sqr() + self.get(-g).norm_sqr()
        }
    }

    /// `(γ_M)^n`: `d(k)` when `n·M = (k, k)`, the index `(0, 0)` only for `M = I`.
    pub fn atom_coefficient(&self, n1: i64, n2: i64, m: &ModularMatrix) -> Result<Complex64> {
        let (k1, k2) = m.act_row(n1, n2)?;
        if k1 != k2 || (k1 == 0 && !m.is_identity()) {
            return Ok(Complex64::default());
        }
        Ok(self.get(k1))
    }
}

/// Keep the coefficients with `gcd(n) = g`.
pub fn project_vg(t: &FourierTable, g: u64) -> FourierTable {
    let mut out = t.clone();
    for ((a, b), c) in t.indices().zip(out.coeffs.iter_mut()) {
        if gcd(a, b) as u64 != g {
            *c = Complex64::default();
        }
    }
    out
}

/// `Σ_g w_g ‖P_g ψ‖²`.
pub fn bessel_sum(seq: &DiagonalSequence, psi: &FourierTable) -> f64 {
    psi.indices()
        .zip(&psi.coeffs)
        .map(|((a, b), c)| seq.orbit_weight(gcd(a, b) as u64) * c.norm_sqr())
        .sum()
}

/// `Σ_M ∫ dϑ/(2π)² |⟨γ_M^ϑ, ψ⟩|²` with the translation integral done in
/// Fourier space and `M` running over the enumerated cosets.
pub fn bessel_sum_direct(seq: &DiagonalSequence, psi: &FourierTable, coset_height: i64) -> Result<f64> {
    bessel_sum_over(seq, psi, &enumerate_cosets(coset_height)?)
}

pub fn bessel_sum_over(seq: &DiagonalSequence, psi: &FourierTable, cosets: &[ModularMatrix]) -> Result<f64> {
    let mut total = 0.0;
    for m in cosets {
        for ((a, b), c) in psi.indices().zip(&psi.coeffs) {
            total += seq.atom_coefficient(a, b, m)?.norm_sqr() * c.norm_sqr();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularFrameReport {
    pub c: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
    pub tight: bool,
    /// Whether `d(g) ≠ 0` for every `g ≤ g_max`.
    pub frame: bool,
    pub per_g: Vec<f64>,
}

pub fn bandlimited_frame_bounds(seq: &DiagonalSequence, band: BandLimit) -> ModularFrameReport {
    let per_g: Vec<f64> = (0..=band.g_max() as u64).map(|g| seq.orbit_weight(g)).collect();
    let frame = per_g.iter().all(|w| w.sqrt() > SUPPORT_FLOOR);
    let c = if frame { per_g.iter().cloned().fold(f64::INFINITY, f64::min) } else { 0.0 };
    let big_c = per_g.iter().cloned().fold(0.0, f64::max);
    let tight = frame && (big_c - c).abs() <= 1e-12 * big_c.max(1.0);
    ModularFrameReport { c, big_c, tight, frame, per_g }
}

/// Complex Gaussian coefficients on the band, reproducible from `seed`.
pub fn random_bandlimited(band: BandLimit, seed: u64) -> FourierTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FourierTable::from_fn(band.l1, band.l2, |_, _| {
        Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameCheckReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `max(c‖ψ‖² − S, S − C‖ψ‖²)/‖ψ‖²`; negative when all hold.
    pub max_violation: f64,
    pub c: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
}

/// Check `c‖ψ‖² ≤ S(ψ) ≤ C‖ψ‖²` on `trials` random band-limited `ψ`.
pub fn frame_inequality_check(
    seq: &DiagonalSequence,
    band: BandLimit,
    trials: usize,
    seed: u64,
) -> Result<FrameCheckReport> {
    let bounds = bandlimited_frame_bounds(seq, band);
    let cosets = enumerate_cosets(band.g_max().max(1) as i64)?;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for t in 0..trials {
        let psi = random_bandlimited(band, seed.wrapping_add(t as u64));
        let norm2 = psi.norm().powi(2);
        let s = bessel_sum_over(seq, &psi, &cosets)?;
        let v = (bounds.c * norm2 - s).max(s - bounds.big_c * norm2) / norm2;
        worst = worst.max(v);
        if v > 1e-10 {
            violations += 1;
        }
    }
    Ok(FrameCheckReport { trials, violations, max_violation: worst, c: bounds.c, big_c: bounds.big_c })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitBasisReport {
    pub g: i64,
    pub elements: usize,
    /// Largest `|⟨γ_A, γ_B⟩ − δ_AB|`.
    pub max_gram_error: f64,
    pub supports_distinct: bool,
    pub supports_in_orbit: bool,
    /// Supports are exactly `g·c` for the enumerated coprime `c`.
    pub covers_orbit: bool,
}

/// Orthonormality of `{(φ_v)_M}` over a transversal of the stabiliser of `v`.
///
/// The transversal is `M_c·M_v⁻¹`, for which `(φ_v)_M = φ_{g·c}`.
pub fn orthonormal_orbit_basis_check(n1: i64, n2: i64, height: i64) -> Result<OrbitBasisReport> {
    let g = gcd(n1, n2);
    if g == 0 {
        return Err(Error::ZeroIndex);
    }
    let rep_inv = orbit_representative(n1, n2)?.inverse();
    let pairs = coprime_pairs(height);
    // alias-free for every support g·c with max |cᵢ| ≤ height
    let grid = TorusGrid::square(2 * (g * height) as usize + 2)?;
    let phi = crate::torus::sample(|a, b| crate::torus::plane_wave(n1, n2, a, b), grid)?;
    let mut supports = Vec::with_capacity(pairs.len());
    let mut images = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        let m = orbit_representative(a, b)?.mul(&rep_inv)?;
        // (φ_v)_M = φ_{v·M⁻¹}
        supports.push(m.inverse().act_row(n1, n2)?);
        images.push(apply_modular(&phi, &m)?);
    }
    let mut max_gram_error: f64 = 0.0;
    for (i, s) in images.iter().enumerate() {
        for (j, t) in images.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            max_gram_error = max_gram_error.max((inner_product(s, t)? - target).norm());
        }
    }
    let mut sorted = supports.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let supports_distinct = sorted.len() == supports.len();
    let supports_in_orbit = supports.iter().all(|&(a, b)| gcd(a, b) == g);
    let covers_orbit = supports.iter().zip(&pairs).all(|(&s, &(a, b))| s == (g * a, g * b));
    Ok(OrbitBasisReport {
        g,
        elements: supports.len(),
        max_gram_error,
        supports_distinct,
        supports_in_orbit,
        covers_orbit,
    })
}

/// Sampled modular atom `f^{ϑ}_{a,M}(θ) = [U_ϑ D_{a,a} γ](M⁻¹θ)`.
pub fn modular_atom_system(
    gamma: &MotherWavelet,
    a: f64,
    m: ModularMatrix,
    t1: f64,
    t2: f64,
    grid: TorusGrid,
) -> Result<TorusSignal> {
    let p = AtomParams::new(t1, t2, a, a)?.with_modular(m);
    wavelet_atom(gamma.as_fn(), &p, grid)
}
