//! Conformal dilations of the circle, translations and the modular action.
//!
//! Under `x = 2·tan(θ/2)` the dilation `θ ↦ θ_a` is `x ↦ a·x`, so
//!
//! ```text
//! θ_a    = 2·atan(a·tan(θ/2))
//! λ(a,θ) = dθ_a/dθ = 2a / ((a² − 1)·cos θ + a² + 1)
//! ```
//!
//! and `[D_a f](θ) = λ(a, θ)^{1/2} f(θ_{1/a})` is unitary on `L²(S¹)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::ellip_k;
use crate::error::{Error, Result};
use crate::modular::ModularMatrix;
use crate::torus::{evaluate_series, fourier_coefficients, wrap_angle, TorusGrid, TorusSignal};

fn check_scale(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(a))
    }
}

/// `θ_a`, with `π` a fixed point.
pub fn dilate_angle(theta: f64, a: f64) -> Result<f64> {
    check_scale(a)?;
    Ok(dilate_angle_unchecked(theta, a))
}

#[inline]
pub(crate) fn dilate_angle_unchecked(theta: f64, a: f64) -> f64 {
    let t = wrap_angle(theta);
    if t == PI {
        return PI;
    }
    let h = 0.5 * t;
    2.0 * (a * h.sin()).atan2(h.cos())
}

/// `λ(a, θ)`.
pub fn multiplier(a: f64, theta: f64) -> Result<f64> {
    check_scale(a)?;
    Ok(multiplier_unchecked(a, theta))
}

// Half-angle form: 2a/((a²−1)cosθ + a²+1) = a/(a²cos²(θ/2) + sin²(θ/2)),
// which avoids cancellation for a near 1 and θ near ±π.
#[inline]
pub(crate) fn multiplier_unchecked(a: f64, theta: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    a / (a * a * c * c + s * s)
}

/// Wavelet-atom parameters. `modular = None` means the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    pub theta1: f64,
    pub theta2: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularMatrix>,
}

impl Default for AtomParams {
    fn default() -> Self {
        Self { theta1: 0.0, theta2: 0.0, a1: 1.0, a2: 1.0, modular: None }
    }
}

impl AtomParams {
    pub fn new(theta1: f64, theta2: f64, a1: f64, a2: f64) -> Result<Self> {
        let p = Self { theta1, theta2, a1, a2, modular: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_modular(mut self, m: ModularMatrix) -> Self {
        self.modular = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_scale(self.a1)?;
        check_scale(self.a2)?;
        if !(self.theta1.is_finite() && self.theta2.is_finite()) {
            return Err(Error::InvalidParameter("non-finite translation".into()));
        }
        Ok(())
    }
}

/// `D_{a₁,a₂} f` for a closed-form `f`, sampled on `grid`.
pub fn dilate_function<F>(f: F, a1: f64, a2: f64, grid: TorusGrid) -> Result<TorusSignal>
where
    F: Fn(f64, f64) -> Complex64,
{
    wavelet_atom(f, &AtomParams::new(0.0, 0.0, a1, a2)?, grid)
}

/// `D_{a₁,a₂} f` for a sampled `f`, using trigonometric interpolation on
/// the largest alias-free window for the off-grid values.
pub fn apply_dilation(f: &TorusSignal, a1: f64, a2: f64) -> Result<TorusSignal> {
    check_scale(a1)?;
    check_scale(a2)?;
    let grid = f.grid;
    let (l1, l2) = grid.max_window();
    let table = fourier_coefficients(f, l1, l2)?;
    let src1: Vec<f64> = grid.angles1().iter().map(|&t| dilate_angle_unchecked(t, 1.0 / a1)).collect();
    let src2: Vec<f64> = grid.angles2().iter().map(|&t| dilate_angle_unchecked(t, 1.0 / a2)).collect();
    let mut out = evaluate_series(&table, &src1, &src2, grid);
    let w1: Vec<f64> = grid.angles1().iter().map(|&t| multiplier_unchecked(a1, t).sqrt()).collect();
    let w2: Vec<f64> = grid.angles2().iter().map(|&t| multiplier_unchecked(a2, t).sqrt()).collect();
    for (k1, x) in w1.iter().enumerate() {
        for (k2, y) in w2.iter().enumerate() {
            out.values[k1 * grid.n2 + k2] *= x * y;
        }
    }
    Ok(out)
}

/// `g(θ) = f(θ − t)`. Grid-aligned shifts are exact re-indexing; other
/// shifts use the Fourier shift theorem on the alias-free window.
pub fn apply_translation(f: &TorusSignal, t1: f64, t2: f64) -> Result<TorusSignal> {
    let grid = f.grid;
    let step1 = std::f64::consts::TAU / grid.n1 as f64;
    let step2 = std::f64::consts::TAU / grid.n2 as f64;
    let (s1, s2) = (t1 / step1, t2 / step2);
    if (s1 - s1.round()).abs() < 1e-9 && (s2 - s2.round()).abs() < 1e-9 {
        let (s1, s2) = (s1.round() as i64, s2.round() as i64);
        let mut values = Vec::with_capacity(grid.len());
        for k1 in 0..grid.n1 as i64 {
            for k2 in 0..grid.n2 as i64 {
                let j1 = (k1 - s1).rem_euclid(grid.n1 as i64) as usize;
                let j2 = (k2 - s2).rem_euclid(grid.n2 as i64) as usize;
                values.push(f.at(j1, j2));
            }
        }
        return TorusSignal::new(grid, values);
    }
    let (l1, l2) = grid.max_window();
    let mut table = fourier_coefficients(f, l1, l2)?;
    for ((n1, n2), c) in table.indices().collect::<Vec<_>>().into_iter().zip(table.coeffs.iter_mut()) {
        *c *= Complex64::from_polar(1.0, -(n1 as f64 * t1 + n2 as f64 * t2));
    }
    crate::torus::inverse_fourier(&table, grid)
}

/// `γ^{ϑ}_{a}(θ) = λ(a₁,θ₁−ϑ₁)^{1/2} λ(a₂,θ₂−ϑ₂)^{1/2} γ((θ₁−ϑ₁)_{1/a₁}, (θ₂−ϑ₂)_{1/a₂})`,
/// precomposed with `M⁻¹` when `p.modular` is set.
pub fn wavelet_atom<F>(gamma: F, p: &AtomParams, grid: TorusGrid) -> Result<TorusSignal>
where
    F: Fn(f64, f64) -> Complex64,
{
    p.validate()?;
    let inv = p.modular.map(|m| m.inverse());
    let mut values = Vec::with_capacity(grid.len());
    for k1 in 0..grid.n1 {
        for k2 in 0..grid.n2 {
            let (mut t1, mut t2) = grid.angle(k1, k2);
            if let Some(mi) = inv {
                let (m, n, q_p, q) = mi.entries();
                (t1, t2) = (m as f64 * t1 + n as f64 * t2, q_p as f64 * t1 + q as f64 * t2);
            }
            let u1 = wrap_angle(t1 - p.theta1);
            let u2 = wrap_angle(t2 - p.theta2);
            let w = (multiplier_unchecked(p.a1, u1) * multiplier_unchecked(p.a2, u2)).sqrt();
            values.push(gamma(dilate_angle_unchecked(u1, 1.0 / p.a1), dilate_angle_unchecked(u2, 1.0 / p.a2)) * w);
        }
    }
    TorusSignal::new(grid, values)
}

/// `f_M(θ) = f(M⁻¹θ)` as the exact index permutation `k ↦ M⁻¹k mod N`.
pub fn apply_modular(f: &TorusSignal, m: &ModularMatrix) -> Result<TorusSignal> {
    let grid = f.grid;
    if grid.n1 != grid.n2 {
        return Err(Error::NonSquareGrid(grid.n1, grid.n2));
    }
    let n = grid.n1 as i64;
    let inv = m.inverse();
    let mut values = Vec::with_capacity(grid.len());
    for k1 in 0..n {
        for k2 in 0..n {
            let (j1, j2) = inv.act_column(k1, k2)?;
            values.push(f.at(j1.rem_euclid(n) as usize, j2.rem_euclid(n) as usize));
        }
    }
    TorusSignal::new(grid, values)
}

/// `∫_{−π}^{π} λ(1/a, θ)^{1/2} dθ = 4·K(1 − 1/a²)/√a`.
pub fn lambda_half_integral(a: f64) -> Result<f64> {
    check_scale(a)?;
    Ok(4.0 * ellip_k(1.0 - 1.0 / (a * a)) / a.sqrt())
}
