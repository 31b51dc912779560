//! Admissibility of mother wavelets and frame-bound spectra.
//!
//! For the two-dilation family,
//!
//! ```text
//! Λ(n) = ∫∫ (da₁/a₁²)(da₂/a₂²) |γ̂_{a₁,a₂}(n)|²
//! ```
//!
//! and the family is a frame iff `Λ` is bounded above and away from zero.
//! The modular analogue `Λ̃(n) = ∫ (da/a³) Σ_M |(γ_{a,M})^n|²` depends on `n`
//! only through `gcd(n)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dilation::{diagonal_bank, DilationBank};
use crate::error::{Error, Result};
use crate::modular::{enumerate_cosets, gcd};
use crate::modular_frames::{DiagonalSequence, SUPPORT_FLOOR};
use crate::quadrature::{PanelRule, StereoRule};
use crate::torus::{continuous_fourier, FourierTable};
use crate::wavelets::MotherWavelet;

/// Threshold on `|∫∫Γ|` for the admissible verdict.
pub const NECESSARY_TOL: f64 = 1e-4;
/// Required `min Λ / max Λ` for the admissible verdict.
pub const SPECTRUM_RATIO_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleRule {
    Trapezoid,
    GaussPanels,
}

/// Quadrature in `u = ln a` over `[u_min, u_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleQuadrature {
    pub u_min: f64,
    pub u_max: f64,
    pub nodes_per_unit: usize,
    pub rule: ScaleRule,
}

impl Default for ScaleQuadrature {
    fn default() -> Self {
        Self { u_min: -6.0, u_max: 6.0, nodes_per_unit: 24, rule: ScaleRule::Trapezoid }
    }
}

const GAUSS_PANEL_NODES: usize = 8;

impl ScaleQuadrature {
    pub fn new(u_min: f64, u_max: f64, nodes_per_unit: usize, rule: ScaleRule) -> Result<Self> {
        let q = Self { u_min, u_max, nodes_per_unit, rule };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u_min.is_finite() && self.u_max.is_finite() && self.u_min < self.u_max) {
            return Err(Error::InvalidParameter(format!(
                "scale window [{}, {}] is empty",
                self.u_min, self.u_max
            )));
        }
        if self.nodes_per_unit == 0 {
            return Err(Error::EmptyQuadrature);
        }
        Ok(())
    }

    pub fn with_rule(self, rule: ScaleRule) -> Self {
        Self { rule, ..self }
    }

    /// Twice the node density.
    pub fn refined(self) -> Self {
        Self { nodes_per_unit: 2 * self.nodes_per_unit, ..self }
    }

    /// Window of twice the width about the same centre.
    pub fn widened(self) -> Self {
        let c = 0.5 * (self.u_min + self.u_max);
        let h = self.u_max - self.u_min;
        Self { u_min: c - h, u_max: c + h, ..self }
    }

    /// Scales and weights for `∫ f(a) da/a^power`.
    pub fn nodes(&self, power: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let width = self.u_max - self.u_min;
        let (u, w): (Vec<f64>, Vec<f64>) = match self.rule {
            ScaleRule::Trapezoid => {
                let steps = (width * self.nodes_per_unit as f64).round().max(1.0) as usize;
                let h = width / steps as f64;
                (0..=steps)
                    .map(|j| {
                        let end = j == 0 || j == steps;
                        (self.u_min + j as f64 * h, if end { 0.5 * h } else { h })
                    })
                    .unzip()
            }
            ScaleRule::GaussPanels => {
                let panels = ((width * self.nodes_per_unit as f64) / GAUSS_PANEL_NODES as f64).ceil().max(1.0) as usize;
                let r = PanelRule { panels, nodes: GAUSS_PANEL_NODES }.on(self.u_min, self.u_max);
                (r.points, r.weights)
            }
        };
        // da/a^p = e^{(1−p)u} du
        let a: Vec<f64> = u.iter().map(|x| x.exp()).collect();
        let w = u.iter().zip(&w).map(|(x, w)| w * ((1.0 - power) * x).exp()).collect();
        Ok((a, w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    TwoDilation,
    Modular,
}

/// `Λ(n)` or `Λ̃(n)` on the window `|n₁| ≤ l1`, `|n₂| ≤ l2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSpectrum {
    pub l1: usize,
    pub l2: usize,
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    pub quad: ScaleQuadrature,
}

impl LambdaSpectrum {
    pub fn get(&self, n1: i64, n2: i64) -> Option<f64> {
        if n1.unsigned_abs() as usize > self.l1 || n2.unsigned_abs() as usize > self.l2 {
            return None;
        }
        Some(self.values[(n1 + self.l1 as i64) as usize * (2 * self.l2 + 1) + (n2 + self.l2 as i64) as usize])
    }

    pub fn indices(&self) -> impl Iterator<Item = (i64, i64)> {
        FourierTable::zeros(self.l1, self.l2).indices().collect::<Vec<_>>().into_iter()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        self.indices().zip(self.values.iter().cloned())
    }

    /// `Λ ≡ 1` on a window.
    pub fn constant(l1: usize, l2: usize, kind: SpectrumKind) -> Self {
        Self {
            l1,
            l2,
            values: vec![1.0; (2 * l1 + 1) * (2 * l2 + 1)],
            kind,
            quad: ScaleQuadrature::default(),
        }
    }
}

/// `∫∫ Γ`, with a flag when successive refinements keep drifting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessaryCondition {
    pub value: Complex64,
    pub magnitude: f64,
    pub diverges: bool,
}

fn integrate_profile(gamma: &MotherWavelet, quad: PanelRule) -> Complex64 {
    let r = quad.on_circle();
    if let Some((g1, g2)) = gamma.separable_gamma_factors() {
        let i1: Complex64 = r.points.iter().zip(&r.weights).map(|(&t, &w)| g1(t) * w).sum();
        let i2: Complex64 = r.points.iter().zip(&r.weights).map(|(&t, &w)| g2(t) * w).sum();
        return i1 * i2;
    }
    let big_gamma = gamma.gamma_of();
    let mut total = Complex64::default();
    for (&t1, &w1) in r.points.iter().zip(&r.weights) {
        let inner: Complex64 = r.points.iter().zip(&r.weights).map(|(&t2, &w2)| big_gamma.eval(t1, t2) * w2).sum();
        total += inner * w1;
    }
    total
}

/// `∫∫ Γ(θ) dθ` at `quad`, `2×` and `4×` panels. Divergence is flagged when
/// the second increment is not small and has not shrunk by half.
pub fn necessary_condition(gamma: &MotherWavelet, quad: PanelRule) -> Result<NecessaryCondition> {
    quad.validate()?;
    let v0 = integrate_profile(gamma, quad);
    let v1 = integrate_profile(gamma, quad.refined());
    let v2 = integrate_profile(gamma, quad.refined().refined());
    if !(v2.re.is_finite() && v2.im.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    let (d1, d2) = ((v1 - v0).norm(), (v2 - v1).norm());
    let diverges = d2 > 1e-6 * v2.norm().max(1.0) && d2 >= 0.5 * d1;
    Ok(NecessaryCondition { value: v2, magnitude: v2.norm(), diverges })
}

/// Configuration for spectrum computations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub scales: ScaleQuadrature,
    pub angular: StereoRule,
}

/// `Λ(n)` on the window from a bank of dilated coefficients.
pub fn spectrum_from_bank(bank: &DilationBank, w1: &[f64], w2: &[f64], quad: ScaleQuadrature) -> LambdaSpectrum {
    let (l1, l2) = bank.window();
    let values = match bank {
        DilationBank::Separable { axis1, axis2, .. } => {
            // Λ factorises: (1/4π²) L₁(n₁) L₂(n₂)
            let axis_sum = |axis: &Vec<Vec<Complex64>>, w: &[f64], m: usize| -> f64 {
                axis.iter().zip(w).map(|(row, w)| w * row[m].norm_sqr()).sum()
            };
            let s1: Vec<f64> = (0..2 * l1 + 1).map(|m| axis_sum(axis1, w1, m)).collect();
            let s2: Vec<f64> = (0..2 * l2 + 1).map(|m| axis_sum(axis2, w2, m)).collect();
            let norm = 4.0 * std::f64::consts::PI.powi(2);
            s1.iter().flat_map(|a| s2.iter().map(move |b| a * b / norm)).collect()
        }
        DilationBank::Full { coeffs, s2, .. } => {
            let mut v = vec![0.0; (2 * l1 + 1) * (2 * l2 + 1)];
            for (idx, t) in coeffs.iter().enumerate() {
                let w = w1[idx / s2] * w2[idx % s2];
                for (acc, c) in v.iter_mut().zip(&t.coeffs) {
                    *acc += w * c.norm_sqr();
                }
            }
            v
        }
    };
    LambdaSpectrum { l1, l2, values, kind: SpectrumKind::TwoDilation, quad }
}

pub fn lambda_spectrum(
    gamma: &MotherWavelet,
    window: (usize, usize),
    config: &SpectrumConfig,
) -> Result<LambdaSpectrum> {
    lambda_spectrum_translated(gamma, window, config, (0.0, 0.0))
}

/// `Λ(n)` computed from the translated atoms `U_ϑ D_a γ`.
pub fn lambda_spectrum_translated(
    gamma: &MotherWavelet,
    window: (usize, usize),
    config: &SpectrumConfig,
    shift: (f64, f64),
) -> Result<LambdaSpectrum> {
    let (a, w) = config.scales.nodes(2.0)?;
    let bank = DilationBank::build_translated(gamma, &a, &a, window.0, window.1, &config.angular, shift)?;
    let spec = spectrum_from_bank(&bank, &w, &w, config.scales);
    if let Some(i) = spec.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub c_hat: f64,
    #[serde(rename = "C_hat")]
    pub big_c_hat: f64,
    pub argmin: (i64, i64),
    pub argmax: (i64, i64),
}

pub fn frame_bound_scan(spec: &LambdaSpectrum) -> Result<FrameBounds> {
    let mut it = spec.iter();
    let (first, v0) = it.next().ok_or_else(|| Error::InvalidParameter("empty spectrum".into()))?;
    let mut b = FrameBounds { c_hat: v0, big_c_hat: v0, argmin: first, argmax: first };
    for (n, v) in it {
        if v < b.c_hat {
            b.c_hat = v;
            b.argmin = n;
        }
        if v > b.big_c_hat {
            b.big_c_hat = v;
            b.argmax = n;
        }
    }
    Ok(b)
}

/// Quadrants `(+,+)`, `(−,+)`, `(−,−)`, `(+,−)` holding a coefficient above the floor.
pub fn quadrant_support(table: &FourierTable) -> [bool; 4] {
    let mut q = [false; 4];
    for ((a, b), c) in table.indices().zip(&table.coeffs) {
        if a == 0 || b == 0 || c.norm() <= SUPPORT_FLOOR {
            continue;
        }
        let i = match (a > 0, b > 0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        q[i] = true;
    }
    q
}

/// `2√(a₁a₂)·Γ̂(a₁n₁, a₂n₂)`, the localized small-scale estimate of `γ̂_{a₁,a₂}(n)`.
pub fn small_scale_estimate(
    gamma: &MotherWavelet,
    n1: i64,
    n2: i64,
    a1: f64,
    a2: f64,
    quad: PanelRule,
) -> Result<Complex64> {
    let big_gamma = gamma.gamma_of();
    let f = continuous_fourier(|t1, t2| big_gamma.eval(t1, t2), a1 * n1 as f64, a2 * n2 as f64, quad)?;
    Ok(f * 2.0 * (a1 * a2).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub necessary_condition: f64,
    pub diverges: bool,
    pub c_hat: f64,
    #[serde(rename = "C_hat")]
    pub big_c_hat: f64,
    pub verdict: bool,
}

/// Verdict: `|∫∫Γ| < 1e−4` without divergence and `min Λ > 1e−6·max Λ`.
pub fn assess(nc: &NecessaryCondition, spec: &LambdaSpectrum) -> Result<AdmissibilityReport> {
    let b = frame_bound_scan(spec)?;
    let verdict = !nc.diverges
        && nc.magnitude < NECESSARY_TOL
        && b.big_c_hat > 0.0
        && b.c_hat > SPECTRUM_RATIO_TOL * b.big_c_hat;
    Ok(AdmissibilityReport {
        necessary_condition: nc.magnitude,
        diverges: nc.diverges,
        c_hat: b.c_hat,
        big_c_hat: b.big_c_hat,
        verdict,
    })
}

/// Diagonal sequences of `D_{a,a}γ` at the nodes of `quad` (measure `da/a³`).
pub struct ModularBank {
    pub scales: Vec<f64>,
    pub weights: Vec<f64>,
    pub sequences: Vec<DiagonalSequence>,
    pub quad: ScaleQuadrature,
}

impl ModularBank {
    pub fn build(gamma: &MotherWavelet, k_max: usize, config: &SpectrumConfig) -> Result<Self> {
        if !gamma.is_diagonal() {
            return Err(Error::NonDiagonal);
        }
        let (scales, weights) = config.scales.nodes(3.0)?;
        let sequences = diagonal_bank(gamma, &scales, k_max, &config.angular)?
            .into_iter()
            .map(|d| DiagonalSequence::from_coefficients(k_max, d))
            .collect::<Result<_>>()?;
        Ok(Self { scales, weights, sequences, quad: config.scales })
    }

    /// `Λ̃` of the orbit `𝒢_g`.
    pub fn orbit_lambda(&self, g: u64) -> f64 {
        self.sequences.iter().zip(&self.weights).map(|(s, w)| w * s.orbit_weight(g)).sum()
    }

    /// `Λ̃(n)` with the coset sum enumerated up to `coset_bound`.
    pub fn lambda_direct(&self, n1: i64, n2: i64, coset_bound: i64) -> Result<f64> {
        let cosets = enumerate_cosets(coset_bound)?;
        let mut total = 0.0;
        for (s, w) in self.sequences.iter().zip(&self.weights) {
            let mut inner = 0.0;
            for m in &cosets {
                inner += s.atom_coefficient(n1, n2, m)?.norm_sqr();
            }
            total += w * inner;
        }
        Ok(total)
    }

    pub fn spectrum(&self, l1: usize, l2: usize) -> LambdaSpectrum {
        let per_g: Vec<f64> = (0..=l1.max(l2) as u64).map(|g| self.orbit_lambda(g)).collect();
        let values = FourierTable::zeros(l1, l2).indices().map(|(a, b)| per_g[gcd(a, b) as usize]).collect();
        LambdaSpectrum { l1, l2, values, kind: SpectrumKind::Modular, quad: self.quad }
    }
}

/// `Λ̃(n)` by direct coset enumeration.
pub fn modular_lambda(
    gamma: &MotherWavelet,
    n1: i64,
    n2: i64,
    config: &SpectrumConfig,
    coset_bound: i64,
) -> Result<f64> {
    let k = gcd(n1, n2) as usize;
    ModularBank::build(gamma, k, config)?.lambda_direct(n1, n2, coset_bound)
}

/// `Λ̃` on a window from the closed form per orbit.
pub fn modular_spectrum(gamma: &MotherWavelet, window: (usize, usize), config: &SpectrumConfig) -> Result<LambdaSpectrum> {
    Ok(ModularBank::build(gamma, window.0.max(window.1), config)?.spectrum(window.0, window.1))
}
