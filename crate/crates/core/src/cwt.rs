//! Wavelet analysis and dual-frame synthesis on discretised parameter grids.
//!
//! Translations run over the signal grid, so the translation integral
//! collapses to a DFT: for the two-dilation family
//!
//! ```text
//! Ψ(ϑ, a) = Σ_n e^{i n·ϑ} conj(γ̂_a(n)) ψ̂(n)
//! ```
//!
//! and synthesis reduces to `ψ̂_rec(n) = Λ(n)⁻¹ Σ_a w_a γ̂_a(n) F_a(n)`, where
//! `F_a` is the translation DFT of `Ψ(·, a)`. Modular grids replace `γ̂_a(n)`
//! by the family coefficient `d_a(k)` on cells with `n·M = (k, k)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissibility::{spectrum_from_bank, LambdaSpectrum, ModularBank, ScaleQuadrature, ScaleRule, SpectrumConfig, SpectrumKind, SPECTRUM_RATIO_TOL};
use crate::dilation::DilationBank;
use crate::error::{Error, Result};
use crate::modular::{enumerate_cosets, ModularMatrix};
use crate::modular_frames::DiagonalSequence;
use crate::quadrature::StereoRule;
use crate::torus::{evaluate_series, fourier_coefficients, inner_product, inverse_fourier, FourierTable, TorusGrid, TorusSignal};
use crate::wavelets::MotherWavelet;

/// Default log-scale window for analysis grids.
pub const DEFAULT_CWT_SCALES: ScaleQuadrature =
    ScaleQuadrature { u_min: -4.0, u_max: 4.0, nodes_per_unit: 24, rule: ScaleRule::Trapezoid };
pub const DEFAULT_COSET_HEIGHT: i64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ScaleLayout {
    /// Tensor product of the same scale list on both axes, weights for `da/a²`.
    TwoDilation { scales: Vec<f64>, weights: Vec<f64> },
    /// One scale per cell, weights for `da/a³`, plus the coset list.
    Modular { scales: Vec<f64>, weights: Vec<f64>, cosets: Vec<ModularMatrix> },
}

/// Discretised parameter space. Each cell carries the weight
/// `w_scale / (N₁N₂)`, the `1/(N₁N₂)` implementing `dϑ/(2π)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub translations: TorusGrid,
    pub window: (usize, usize),
    pub quad: ScaleQuadrature,
    pub layout: ScaleLayout,
}

impl ParamGrid {
    pub fn two_dilation(grid: TorusGrid, quad: ScaleQuadrature) -> Result<Self> {
        let (scales, weights) = quad.nodes(2.0)?;
        let p = Self {
            translations: grid,
            window: grid.max_window(),
            quad,
            layout: ScaleLayout::TwoDilation { scales, weights },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn modular(grid: TorusGrid, quad: ScaleQuadrature, coset_height: i64) -> Result<Self> {
        if grid.n1 != grid.n2 {
            return Err(Error::NonSquareGrid(grid.n1, grid.n2));
        }
        let (scales, weights) = quad.nodes(3.0)?;
        let p = Self {
            translations: grid,
            window: grid.max_window(),
            quad,
            layout: ScaleLayout::Modular { scales, weights, cosets: enumerate_cosets(coset_height)? },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (scales, weights) = self.scales();
        if scales.len() != weights.len() || scales.is_empty() {
            return Err(Error::InvalidParameter("scale and weight lists differ".into()));
        }
        if scales.iter().chain(weights).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter("scales and weights must be positive".into()));
        }
        let (l1, l2) = self.window;
        if 2 * l1 >= self.translations.n1 || 2 * l2 >= self.translations.n2 {
            return Err(Error::Aliasing { l1, l2, n1: self.translations.n1, n2: self.translations.n2 });
        }
        Ok(())
    }

    pub fn scales(&self) -> (&[f64], &[f64]) {
        match &self.layout {
            ScaleLayout::TwoDilation { scales, weights } | ScaleLayout::Modular { scales, weights, .. } => {
                (scales, weights)
            }
        }
    }

    pub fn cosets(&self) -> &[ModularMatrix] {
        match &self.layout {
            ScaleLayout::Modular { cosets, .. } => cosets,
            ScaleLayout::TwoDilation { .. } => &[],
        }
    }

    pub fn kind(&self) -> SpectrumKind {
        match self.layout {
            ScaleLayout::TwoDilation { .. } => SpectrumKind::TwoDilation,
            ScaleLayout::Modular { .. } => SpectrumKind::Modular,
        }
    }

    /// Number of scale blocks: `S²` or `cosets × S`.
    pub fn blocks(&self) -> usize {
        let s = self.scales().0.len();
        match &self.layout {
            ScaleLayout::TwoDilation { .. } => s * s,
            ScaleLayout::Modular { cosets, .. } => cosets.len() * s,
        }
    }

    pub fn cells(&self) -> usize {
        self.blocks() * self.translations.len()
    }

    /// `(a₁, a₂, M, weight)` of a block, weight excluding the translation part.
    pub fn block(&self, b: usize) -> (f64, f64, Option<ModularMatrix>, f64) {
        match &self.layout {
            ScaleLayout::TwoDilation { scales, weights } => {
                let s = scales.len();
                let (i, j) = (b / s, b % s);
                (scales[i], scales[j], None, weights[i] * weights[j])
            }
            ScaleLayout::Modular { scales, weights, cosets } => {
                let s = scales.len();
                let (c, i) = (b / s, b % s);
                (scales[i], scales[i], Some(cosets[c]), weights[i])
            }
        }
    }

    pub fn translation_weight(&self) -> f64 {
        1.0 / self.translations.len() as f64
    }
}

/// `Ψ` on every cell, laid out `[block][k1][k2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CwtCoefficients {
    pub params: ParamGrid,
    pub values: Vec<Complex64>,
}

impl CwtCoefficients {
    pub fn new(params: ParamGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != params.cells() {
            return Err(Error::IncompatibleCoefficients(format!(
                "{} values for {} cells",
                values.len(),
                params.cells()
            )));
        }
        Ok(Self { params, values })
    }

    pub fn block(&self, b: usize) -> &[Complex64] {
        let n = self.params.translations.len();
        &self.values[b * n..(b + 1) * n]
    }

    /// `Σ_cells weight·|Ψ|²`.
    pub fn energy(&self) -> f64 {
        let tw = self.params.translation_weight();
        (0..self.params.blocks())
            .map(|b| self.params.block(b).3 * tw * self.block(b).iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum()
    }
}

/// Dilated coefficients for every scale block of a grid.
#[derive(Debug, Clone)]
pub enum AtomBank {
    TwoDilation(DilationBank),
    Modular(Vec<DiagonalSequence>),
}

impl AtomBank {
    pub fn build(gamma: &MotherWavelet, params: &ParamGrid, rule: &StereoRule) -> Result<Self> {
        let (l1, l2) = params.window;
        let (scales, _) = params.scales();
        match params.layout {
            ScaleLayout::TwoDilation { .. } => {
                Ok(Self::TwoDilation(DilationBank::build(gamma, scales, scales, l1, l2, rule)?))
            }
            ScaleLayout::Modular { .. } => {
                if !gamma.is_diagonal() {
                    return Err(Error::NonDiagonal);
                }
                let k = l1.max(l2);
                let seqs = crate::dilation::diagonal_bank(gamma, scales, k, rule)?
                    .into_iter()
                    .map(|d| DiagonalSequence::from_coefficients(k, d))
                    .collect::<Result<_>>()?;
                Ok(Self::Modular(seqs))
            }
        }
    }

    /// Coefficient of the atom of block `b` at index `n` (translation zero).
    pub fn atom_table(&self, params: &ParamGrid, b: usize) -> Result<FourierTable> {
        let (l1, l2) = params.window;
        let s = params.scales().0.len();
        match self {
            Self::TwoDilation(bank) => Ok(bank.table(b / s, b % s)),
            Self::Modular(seqs) => {
                let m = params.cosets()[b / s];
                let seq = &seqs[b % s];
                let mut t = FourierTable::zeros(l1, l2);
                for (n, c) in t.indices().collect::<Vec<_>>().into_iter().zip(t.coeffs.iter_mut()) {
                    *c = seq.atom_coefficient(n.0, n.1, &m)?;
                }
                Ok(t)
            }
        }
    }

    /// `Λ` of the grid's own scale quadrature.
    pub fn grid_spectrum(&self, params: &ParamGrid) -> Result<LambdaSpectrum> {
        let (_, w) = params.scales();
        match self {
            Self::TwoDilation(bank) => Ok(spectrum_from_bank(bank, w, w, params.quad)),
            Self::Modular(_) => {
                let (l1, l2) = params.window;
                let mut values = vec![0.0; (2 * l1 + 1) * (2 * l2 + 1)];
                for b in 0..params.blocks() {
                    let wt = params.block(b).3;
                    for (v, c) in values.iter_mut().zip(self.atom_table(params, b)?.coeffs) {
                        *v += wt * c.norm_sqr();
                    }
                }
                Ok(LambdaSpectrum { l1, l2, values, kind: SpectrumKind::Modular, quad: params.quad })
            }
        }
    }
}

/// `Λ` over the grid's scale window with Gauss panels, used for the dual.
pub fn reconstruction_spectrum(gamma: &MotherWavelet, params: &ParamGrid, rule: &StereoRule) -> Result<LambdaSpectrum> {
    let config = SpectrumConfig { scales: params.quad.with_rule(ScaleRule::GaussPanels), angular: *rule };
    let (l1, l2) = params.window;
    match params.kind() {
        SpectrumKind::TwoDilation => crate::admissibility::lambda_spectrum(gamma, (l1, l2), &config),
        SpectrumKind::Modular => Ok(ModularBank::build(gamma, l1.max(l2), &config)?.spectrum(l1, l2)),
    }
}

/// Dual-frame scalings `1/Λ(n)`; refuses when `Λ` falls below
/// `1e−6·max Λ` anywhere on the window.
pub fn dual_coefficients(spec: &LambdaSpectrum) -> Result<FourierTable> {
    let max = spec.values.iter().cloned().fold(0.0, f64::max);
    let floor = SPECTRUM_RATIO_TOL * max;
    let mut t = FourierTable::zeros(spec.l1, spec.l2);
    for (((n1, n2), v), c) in spec.iter().zip(t.coeffs.iter_mut()) {
        if !(v > floor && v > 0.0) {
            return Err(Error::BelowFloor { n1, n2, value: v, floor });
        }
        *c = Complex64::new(1.0 / v, 0.0);
    }
    Ok(t)
}

fn check_signal(psi: &TorusSignal, params: &ParamGrid) -> Result<()> {
    if psi.grid != params.translations {
        return Err(Error::GridMismatch(format!("signal {:?} vs parameters {:?}", psi.grid, params.translations)));
    }
    Ok(())
}

/// Index pairs `(n, k)` with `n·M = (k, k)` inside the window.
fn modular_pairs(window: (usize, usize), m: &ModularMatrix) -> Result<Vec<((i64, i64), i64)>> {
    let mut out = Vec::new();
    for n in FourierTable::zeros(window.0, window.1).indices() {
        let (k1, k2) = m.act_row(n.0, n.1)?;
        if k1 == k2 && (k1 != 0 || m.is_identity()) {
            out.push((n, k1));
        }
    }
    Ok(out)
}

pub fn analyze(psi: &TorusSignal, gamma: &MotherWavelet, params: &ParamGrid, rule: &StereoRule) -> Result<CwtCoefficients> {
    analyze_with(psi, &AtomBank::build(gamma, params, rule)?, params)
}

pub fn analyze_modular(
    psi: &TorusSignal,
    gamma: &MotherWavelet,
    params: &ParamGrid,
    rule: &StereoRule,
) -> Result<CwtCoefficients> {
    if params.kind() != SpectrumKind::Modular {
        return Err(Error::InvalidParameter("parameter grid is not modular".into()));
    }
    analyze(psi, gamma, params, rule)
}

/// Analysis with a prebuilt [`AtomBank`].
pub fn analyze_with(psi: &TorusSignal, bank: &AtomBank, params: &ParamGrid) -> Result<CwtCoefficients> {
    check_signal(psi, params)?;
    let grid = params.translations;
    let (l1, l2) = params.window;
    let spectrum = fourier_coefficients(psi, l1, l2)?;
    let mut values = Vec::with_capacity(params.cells());
    let two_pi = std::f64::consts::TAU;
    match bank {
        AtomBank::TwoDilation(b) => {
            let (a1, a2) = (grid.angles1(), grid.angles2());
            let s = params.scales().0.len();
            for blk in 0..params.blocks() {
                let mut t = FourierTable::zeros(l1, l2);
                for ((n1, n2), c) in t.indices().collect::<Vec<_>>().into_iter().zip(t.coeffs.iter_mut()) {
                    *c = b.get(blk / s, blk % s, n1, n2).conj() * spectrum.value(n1, n2) * two_pi;
                }
                values.extend(evaluate_series(&t, &a1, &a2, grid).values);
            }
        }
        AtomBank::Modular(seqs) => {
            let s = seqs.len();
            let sums: Vec<f64> = (0..grid.n1)
                .flat_map(|k1| (0..grid.n2).map(move |k2| (k1, k2)))
                .map(|(k1, k2)| {
                    let (t1, t2) = grid.angle(k1, k2);
                    t1 + t2
                })
                .collect();
            for m in params.cosets() {
                let pairs = modular_pairs(params.window, m)?;
                for seq in seqs.iter().take(s) {
                    if pairs.is_empty() {
                        values.extend(std::iter::repeat_n(Complex64::default(), grid.len()));
                        continue;
                    }
                    let terms: Vec<(i64, Complex64)> =
                        pairs.iter().map(|&(n, k)| (k, seq.get(k).conj() * spectrum.value(n.0, n.1))).collect();
                    values.extend(sums.iter().map(|&t| {
                        terms.iter().map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * t)).sum::<Complex64>()
                    }));
                }
            }
        }
    }
    CwtCoefficients::new(params.clone(), values)
}

pub fn synthesize(
    coeffs: &CwtCoefficients,
    gamma: &MotherWavelet,
    spec: &LambdaSpectrum,
    rule: &StereoRule,
) -> Result<TorusSignal> {
    synthesize_with(coeffs, &AtomBank::build(gamma, &coeffs.params, rule)?, spec)
}

pub fn synthesize_modular(
    coeffs: &CwtCoefficients,
    gamma: &MotherWavelet,
    spec: &LambdaSpectrum,
    rule: &StereoRule,
) -> Result<TorusSignal> {
    if coeffs.params.kind() != SpectrumKind::Modular || spec.kind != SpectrumKind::Modular {
        return Err(Error::InvalidParameter("modular synthesis needs a modular grid and spectrum".into()));
    }
    synthesize(coeffs, gamma, spec, rule)
}

/// Dual-frame synthesis with a prebuilt [`AtomBank`].
pub fn synthesize_with(coeffs: &CwtCoefficients, bank: &AtomBank, spec: &LambdaSpectrum) -> Result<TorusSignal> {
    let params = &coeffs.params;
    let grid = params.translations;
    let (l1, l2) = params.window;
    if spec.l1 < l1 || spec.l2 < l2 {
        return Err(Error::IncompatibleCoefficients("spectrum window smaller than the grid window".into()));
    }
    if spec.kind != params.kind() {
        return Err(Error::IncompatibleCoefficients("spectrum kind differs from the grid".into()));
    }
    let restricted = LambdaSpectrum {
        l1,
        l2,
        values: FourierTable::zeros(l1, l2).indices().map(|(a, b)| spec.get(a, b).unwrap_or(0.0)).collect(),
        kind: spec.kind,
        quad: spec.quad,
    };
    let dual = dual_coefficients(&restricted)?;
    let tw = params.translation_weight();
    let mut acc = FourierTable::zeros(l1, l2);
    let two_pi = std::f64::consts::TAU;
    match bank {
        AtomBank::TwoDilation(b) => {
            let s = params.scales().0.len();
            for blk in 0..params.blocks() {
                let w = params.block(blk).3;
                let block = TorusSignal { grid, values: coeffs.block(blk).to_vec() };
                // translation DFT: (1/N₁N₂) Σ_ϑ Ψ e^{−in·ϑ}
                let f = fourier_coefficients(&block, l1, l2)?;
                for (((n1, n2), a), fv) in acc.indices().collect::<Vec<_>>().into_iter().zip(acc.coeffs.iter_mut()).zip(&f.coeffs) {
                    *a += b.get(blk / s, blk % s, n1, n2) * fv * (w / two_pi);
                }
            }
        }
        AtomBank::Modular(seqs) => {
            let s = seqs.len();
            let sums: Vec<f64> = (0..grid.len())
                .map(|i| {
                    let (t1, t2) = grid.angle(i / grid.n2, i % grid.n2);
                    t1 + t2
                })
                .collect();
            for (c, m) in params.cosets().iter().enumerate() {
                let pairs = modular_pairs(params.window, m)?;
                if pairs.is_empty() {
                    continue;
                }
                for (i, seq) in seqs.iter().enumerate() {
                    let blk = c * s + i;
                    let w = params.block(blk).3;
                    let vals = coeffs.block(blk);
                    for &(n, k) in &pairs {
                        let f: Complex64 = vals
                            .iter()
                            .zip(&sums)
                            .map(|(v, &t)| v * Complex64::from_polar(1.0, -(k as f64) * t))
                            .sum::<Complex64>()
                            * tw;
                        *acc.get_mut(n.0, n.1).unwrap() += seq.get(k) * f * w;
                    }
                }
            }
        }
    }
    for (a, d) in acc.coeffs.iter_mut().zip(&dual.coeffs) {
        *a *= d;
    }
    inverse_fourier(&acc, grid)
}

/// Analysis by explicit inner products with sampled atoms. Quadratic in the
/// grid size; meant for cross-checks on small grids.
pub fn analyze_direct(psi: &TorusSignal, bank: &AtomBank, params: &ParamGrid) -> Result<CwtCoefficients> {
    check_signal(psi, params)?;
    let grid = params.translations;
    let mut values = Vec::with_capacity(params.cells());
    for blk in 0..params.blocks() {
        let atom = bank.atom_table(params, blk)?;
        for k1 in 0..grid.n1 {
            for k2 in 0..grid.n2 {
                let (t1, t2) = grid.angle(k1, k2);
                let shift = shifted_atom(&atom, params, blk, t1, t2)?;
                values.push(inner_product(&inverse_fourier(&shift, grid)?, psi)?);
            }
        }
    }
    CwtCoefficients::new(params.clone(), values)
}

/// Atom coefficients translated by `ϑ`: `e^{−i m·ϑ}` with `m = n·M`.
fn shifted_atom(atom: &FourierTable, params: &ParamGrid, blk: usize, t1: f64, t2: f64) -> Result<FourierTable> {
    let m = params.block(blk).2.unwrap_or(ModularMatrix::IDENTITY);
    let mut out = atom.clone();
    for ((n1, n2), c) in atom.indices().zip(out.coeffs.iter_mut()) {
        let (a, b) = m.act_row(n1, n2)?;
        *c *= Complex64::from_polar(1.0, -(a as f64 * t1 + b as f64 * t2));
    }
    Ok(out)
}

/// Synthesis as the explicit sum `Σ_cells weight·Ψ·(dual atom)`.
pub fn synthesize_direct(coeffs: &CwtCoefficients, bank: &AtomBank, spec: &LambdaSpectrum) -> Result<TorusSignal> {
    let params = &coeffs.params;
    let grid = params.translations;
    let (l1, l2) = params.window;
    let dual = dual_coefficients(&LambdaSpectrum {
        l1,
        l2,
        values: FourierTable::zeros(l1, l2).indices().map(|(a, b)| spec.get(a, b).unwrap_or(0.0)).collect(),
        kind: spec.kind,
        quad: spec.quad,
    })?;
    let tw = params.translation_weight();
    let mut out = TorusSignal::zeros(grid);
    for blk in 0..params.blocks() {
        let w = params.block(blk).3 * tw;
        let mut atom = bank.atom_table(params, blk)?;
        for (c, d) in atom.coeffs.iter_mut().zip(&dual.coeffs) {
            *c *= d;
        }
        for (i, v) in coeffs.block(blk).iter().enumerate() {
            let (t1, t2) = grid.angle(i / grid.n2, i % grid.n2);
            let sampled = inverse_fourier(&shifted_atom(&atom, params, blk, t1, t2)?, grid)?;
            for (o, s) in out.values.iter_mut().zip(&sampled.values) {
                *o += s * v * w;
            }
        }
    }
    Ok(out)
}

/// `‖a − b‖/‖b‖`.
pub fn relative_error(a: &TorusSignal, b: &TorusSignal) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch("signals on different grids".into()));
    }
    let diff = TorusSignal { grid: a.grid, values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect() };
    Ok(diff.norm() / b.norm())
}
