//! Fourier coefficients of dilated wavelets.
//!
//! By the change of variables `θ ↦ θ_a`,
//!
//! ```text
//! γ̂_{a₁,a₂}(n) = (1/2π) ∫∫ λ(1/a₁,θ₁)^{1/2} λ(1/a₂,θ₂)^{1/2} γ(θ) e^{−i(n₁θ₁,a₁ + n₂θ₂,a₂)} dθ
//! ```
//!
//! which needs no interpolation. In the stereographic coordinate
//! `λ(1/a, θ) = a(1 + x²/4)/(1 + a²x²/4)` and `θ_a = 2·atan(a·x/2)`, both
//! free of cancellation. Nodes come from [`StereoRule`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{StereoNodes, StereoRule};
use crate::torus::FourierTable;
use crate::wavelets::{CircleFn, MotherWavelet};

/// Per-axis weights `w·λ(1/a,θ)^{1/2}` and dilated angles `θ_a` on a node set.
#[derive(Debug, Clone)]
pub struct DilatedAxis {
    pub amp: Vec<f64>,
    pub phase: Vec<f64>,
}

impl DilatedAxis {
    pub fn new(nodes: &StereoNodes, a: f64) -> Self {
        Self::shifted(nodes, a, 0.0)
    }

    /// Kernel of the translated atom: phases become `θ_a + t`.
    pub fn shifted(nodes: &StereoNodes, a: f64, t: f64) -> Self {
        let n = nodes.len();
        let mut amp = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        for (&x, &w) in nodes.x.iter().zip(&nodes.weights) {
            let ax = 0.5 * a * x;
            amp.push(w * (a * (1.0 + 0.25 * x * x) / (1.0 + ax * ax)).sqrt());
            phase.push(2.0 * ax.atan() + t);
        }
        Self { amp, phase }
    }

    /// Rows `amp_i·e^{−i n θ_a,i}` for `n ∈ [−l, l]`, laid out `[n][i]`.
    pub fn kernel(&self, l: usize) -> Vec<Complex64> {
        let q = self.amp.len();
        let w = 2 * l + 1;
        let mut out = vec![Complex64::default(); w * q];
        for i in 0..q {
            let step = Complex64::from_polar(1.0, -self.phase[i]);
            let mut pos = Complex64::new(self.amp[i], 0.0);
            let mut neg = pos;
            out[l * q + i] = pos;
            for k in 1..=l {
                pos *= step;
                neg *= step.conj();
                out[(l + k) * q + i] = pos;
                out[(l - k) * q + i] = neg;
            }
        }
        out
    }

    /// `amp_i·e^{−i n θ_a,i}` for a single `n`.
    pub fn kernel_row(&self, n: i64) -> Vec<Complex64> {
        self.amp
            .iter()
            .zip(&self.phase)
            .map(|(&a, &p)| Complex64::from_polar(a, -(n as f64) * p))
            .collect()
    }
}

fn check_scale(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(a))
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    Complex64::new(re, im)
}

/// `∫ λ(1/a,θ)^{1/2} f(θ) e^{−i n θ_a} dθ` for `n ∈ [−l, l]`.
pub fn axis_coefficients(f: &CircleFn, a: f64, l: usize, rule: &StereoRule) -> Result<Vec<Complex64>> {
    axis_coefficients_shifted(f, a, l, rule, 0.0)
}

fn axis_coefficients_shifted(f: &CircleFn, a: f64, l: usize, rule: &StereoRule, t: f64) -> Result<Vec<Complex64>> {
    check_scale(a)?;
    let nodes = rule.nodes_for(a)?;
    let axis = DilatedAxis::shifted(&nodes, a, t);
    let values: Vec<Complex64> = nodes.theta.iter().map(|&t| f(t)).collect();
    let q = values.len();
    let k = axis.kernel(l);
    Ok((0..2 * l + 1).map(|m| dot(&k[m * q..(m + 1) * q], &values)).collect())
}

/// Samples of a general wavelet on a tensor node set, with per-axis kernels.
pub struct DilatedSampler {
    q2: usize,
    axis1: DilatedAxis,
    axis2: DilatedAxis,
    values: Vec<Complex64>,
}

impl DilatedSampler {
    pub fn new(gamma: &MotherWavelet, a1: f64, a2: f64, rule: &StereoRule) -> Result<Self> {
        check_scale(a1)?;
        check_scale(a2)?;
        let n1 = rule.nodes_for(a1)?;
        let n2 = if a1 == a2 { n1.clone() } else { rule.nodes_for(a2)? };
        let mut values = Vec::with_capacity(n1.len() * n2.len());
        for &t1 in &n1.theta {
            for &t2 in &n2.theta {
                values.push(gamma.eval(t1, t2));
            }
        }
        Ok(Self { q2: n2.len(), axis1: DilatedAxis::new(&n1, a1), axis2: DilatedAxis::new(&n2, a2), values })
    }

    fn contract_axis2(&self, row: &[Complex64]) -> Vec<Complex64> {
        self.values.chunks_exact(self.q2).map(|g| dot(g, row)).collect()
    }

    pub fn coefficient(&self, n1: i64, n2: i64) -> Complex64 {
        let b = self.contract_axis2(&self.axis2.kernel_row(n2));
        dot(&self.axis1.kernel_row(n1), &b) / (2.0 * PI)
    }

    pub fn table(&self, l1: usize, l2: usize) -> FourierTable {
        let mut t = FourierTable::zeros(l1, l2);
        let q1 = self.axis1.amp.len();
        let k1 = self.axis1.kernel(l1);
        let k2 = self.axis2.kernel(l2);
        for m2 in 0..2 * l2 + 1 {
            let b = self.contract_axis2(&k2[m2 * self.q2..(m2 + 1) * self.q2]);
            for m1 in 0..2 * l1 + 1 {
                t.coeffs[m1 * (2 * l2 + 1) + m2] = dot(&k1[m1 * q1..(m1 + 1) * q1], &b) / (2.0 * PI);
            }
        }
        t
    }

    /// `γ̂_{a₁,a₂}(k, k)` for `k ∈ [−l, l]`.
    pub fn diagonal(&self, l: usize) -> Vec<Complex64> {
        let q1 = self.axis1.amp.len();
        let k1 = self.axis1.kernel(l);
        let k2 = self.axis2.kernel(l);
        (0..2 * l + 1)
            .map(|m| {
                let b = self.contract_axis2(&k2[m * self.q2..(m + 1) * self.q2]);
                dot(&k1[m * q1..(m + 1) * q1], &b) / (2.0 * PI)
            })
            .collect()
    }
}

/// `γ̂_{a₁,a₂}(n₁, n₂)`.
pub fn dilated_coefficient(
    gamma: &MotherWavelet,
    n1: i64,
    n2: i64,
    a1: f64,
    a2: f64,
    rule: &StereoRule,
) -> Result<Complex64> {
    if let Some((f1, f2)) = gamma.separable_factors() {
        check_scale(a1)?;
        check_scale(a2)?;
        let one = |f: &CircleFn, a: f64, n: i64| -> Result<Complex64> {
            let nodes = rule.nodes_for(a)?;
            let axis = DilatedAxis::new(&nodes, a);
            let values: Vec<Complex64> = nodes.theta.iter().map(|&t| f(t)).collect();
            Ok(dot(&axis.kernel_row(n), &values))
        };
        return Ok(one(f1, a1, n1)? * one(f2, a2, n2)? / (2.0 * PI));
    }
    Ok(DilatedSampler::new(gamma, a1, a2, rule)?.coefficient(n1, n2))
}

/// Same as [`dilated_coefficient`] for the translated atom `U_ϑ D_a γ`,
/// integrating over shifted angles `θ = u + ϑ`.
pub fn translated_dilated_coefficient(
    gamma: &MotherWavelet,
    n1: i64,
    n2: i64,
    a1: f64,
    a2: f64,
    shift: (f64, f64),
    rule: &StereoRule,
) -> Result<Complex64> {
    let mut s = DilatedSampler::new(gamma, a1, a2, rule)?;
    s.axis1 = DilatedAxis::shifted(&rule.nodes_for(a1)?, a1, shift.0);
    s.axis2 = DilatedAxis::shifted(&rule.nodes_for(a2)?, a2, shift.1);
    Ok(s.coefficient(n1, n2))
}

/// Dilated coefficients on a tensor grid of scales and an index window.
#[derive(Debug, Clone)]
pub enum DilationBank {
    /// `γ̂_{a₁,a₂}(n) = I₁(a₁, n₁)·I₂(a₂, n₂)/(2π)`, stored per axis as `[scale][n]`.
    Separable { l1: usize, l2: usize, axis1: Vec<Vec<Complex64>>, axis2: Vec<Vec<Complex64>> },
    /// Full table `[s1][s2][n]`.
    Full { l1: usize, l2: usize, s2: usize, coeffs: Vec<FourierTable> },
}

impl DilationBank {
    pub fn build(
        gamma: &MotherWavelet,
        scales1: &[f64],
        scales2: &[f64],
        l1: usize,
        l2: usize,
        rule: &StereoRule,
    ) -> Result<Self> {
        Self::build_translated(gamma, scales1, scales2, l1, l2, rule, (0.0, 0.0))
    }

    /// Bank for the translated atoms `U_ϑ D_a γ`.
    pub fn build_translated(
        gamma: &MotherWavelet,
        scales1: &[f64],
        scales2: &[f64],
        l1: usize,
        l2: usize,
        rule: &StereoRule,
        shift: (f64, f64),
    ) -> Result<Self> {
        if scales1.is_empty() || scales2.is_empty() {
            return Err(Error::InvalidParameter("empty scale list".into()));
        }
        if let Some((f1, f2)) = gamma.separable_factors() {
            let axis1 =
                scales1.iter().map(|&a| axis_coefficients_shifted(f1, a, l1, rule, shift.0)).collect::<Result<_>>()?;
            let axis2 =
                scales2.iter().map(|&a| axis_coefficients_shifted(f2, a, l2, rule, shift.1)).collect::<Result<_>>()?;
            return Ok(Self::Separable { l1, l2, axis1, axis2 });
        }
        let coeffs = global_tables(gamma, scales1, scales2, l1, l2, rule, shift)?;
        Ok(Self::Full { l1, l2, s2: scales2.len(), coeffs })
    }

    pub fn window(&self) -> (usize, usize) {
        match self {
            Self::Separable { l1, l2, .. } | Self::Full { l1, l2, .. } => (*l1, *l2),
        }
    }

    /// Coefficient at scale indices `(i1, i2)`.
    pub fn get(&self, i1: usize, i2: usize, n1: i64, n2: i64) -> Complex64 {
        match self {
            Self::Separable { l1, l2, axis1, axis2 } => {
                axis1[i1][(n1 + *l1 as i64) as usize] * axis2[i2][(n2 + *l2 as i64) as usize] / (2.0 * PI)
            }
            Self::Full { s2, coeffs, .. } => coeffs[i1 * s2 + i2].value(n1, n2),
        }
    }

    /// Whole window at scale indices `(i1, i2)`.
    pub fn table(&self, i1: usize, i2: usize) -> FourierTable {
        match self {
            Self::Separable { l1, l2, .. } => FourierTable::from_fn(*l1, *l2, |a, b| self.get(i1, i2, a, b)),
            Self::Full { s2, coeffs, .. } => coeffs[i1 * s2 + i2].clone(),
        }
    }
}

/// Full coefficient tables for every scale pair, using one node set that is
/// valid across the whole scale range so the wavelet is sampled only once.
fn global_tables(
    gamma: &MotherWavelet,
    scales1: &[f64],
    scales2: &[f64],
    l1: usize,
    l2: usize,
    rule: &StereoRule,
    shift: (f64, f64),
) -> Result<Vec<FourierTable>> {
    let lo = scales1.iter().chain(scales2).cloned().fold(f64::INFINITY, f64::min);
    let hi = scales1.iter().chain(scales2).cloned().fold(0.0, f64::max);
    let nodes = rule.nodes_for_range(lo, hi)?;
    let q = nodes.len();
    let mut g = Vec::with_capacity(q * q);
    for &t1 in &nodes.theta {
        for &t2 in &nodes.theta {
            g.push(gamma.eval(t1, t2));
        }
    }
    let (w1, w2) = (2 * l1 + 1, 2 * l2 + 1);
    // h[s2][m2][i] = Σ_j g_ij k2_j
    let mut h = Vec::with_capacity(scales2.len() * w2 * q);
    for &a2 in scales2 {
        let k2 = DilatedAxis::shifted(&nodes, a2, shift.1).kernel(l2);
        for m2 in 0..w2 {
            let row = &k2[m2 * q..(m2 + 1) * q];
            h.extend(g.chunks_exact(q).map(|gi| dot(gi, row)));
        }
    }
    let mut out = Vec::with_capacity(scales1.len() * scales2.len());
    for &a1 in scales1 {
        let k1 = DilatedAxis::shifted(&nodes, a1, shift.0).kernel(l1);
        for s2 in 0..scales2.len() {
            let mut t = FourierTable::zeros(l1, l2);
            for m1 in 0..w1 {
                let row = &k1[m1 * q..(m1 + 1) * q];
                for m2 in 0..w2 {
                    let hc = &h[(s2 * w2 + m2) * q..(s2 * w2 + m2 + 1) * q];
                    t.coeffs[m1 * w2 + m2] = dot(row, hc) / (2.0 * PI);
                }
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// Diagonal coefficients `γ̂_{a,a}(k, k)`, `k ∈ [−l, l]`, for each scale.
pub fn diagonal_bank(gamma: &MotherWavelet, scales: &[f64], l: usize, rule: &StereoRule) -> Result<Vec<Vec<Complex64>>> {
    scales.iter().map(|&a| Ok(DilatedSampler::new(gamma, a, a, rule)?.diagonal(l))).collect()
}
