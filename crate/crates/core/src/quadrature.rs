//! Gauss-Legendre rules.
//!
//! [`PanelRule`] is a composite rule on an interval. [`StereoRule`] covers
//! `(-π, π)` through the map `θ = 2·atan(ε·sinh(s)/2)`, which grades nodes
//! geometrically towards both `0` and `±π`. Dilated integrands concentrate
//! at scale `a` near `±π` and at scale `1/a` near `0`, so a uniform panel
//! width in `s` resolves both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z_old = z;
            z = z_old - p1 / dp;
            if (z - z_old).abs() < NEWTON_TOL {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A set of quadrature points with weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Composite Gauss-Legendre: `panels` equal panels, `nodes` points each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelRule {
    pub panels: usize,
    pub nodes: usize,
}

impl Default for PanelRule {
    fn default() -> Self {
        Self { panels: 64, nodes: 8 }
    }
}

impl PanelRule {
    pub fn new(panels: usize, nodes: usize) -> Result<Self> {
        let rule = Self { panels, nodes };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels == 0 || self.nodes == 0 {
            return Err(Error::EmptyQuadrature);
        }
        Ok(())
    }

    /// Same rule with twice as many panels.
    pub fn refined(&self) -> Self {
        Self { panels: 2 * self.panels, nodes: self.nodes }
    }

    pub fn on(&self, a: f64, b: f64) -> Rule {
        let (gx, gw) = gauss_legendre(self.nodes);
        let h = (b - a) / self.panels as f64;
        let mut rule = Rule {
            points: Vec::with_capacity(self.panels * self.nodes),
            weights: Vec::with_capacity(self.panels * self.nodes),
        };
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in gx.iter().zip(&gw) {
                rule.points.push(mid + 0.5 * h * x);
                rule.weights.push(0.5 * h * w);
            }
        }
        rule
    }

    /// The rule on `[-π, π]`.
    pub fn on_circle(&self) -> Rule {
        self.on(-std::f64::consts::PI, std::f64::consts::PI)
    }
}

/// Sinh-stereographic rule on `(-π, π)`.
///
/// `panels_per_unit` counts Gauss panels per unit length in `s`; `tail`
/// is the angular distance from `±π` below which the integrand is dropped,
/// measured relative to the smallest scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StereoRule {
    pub panels_per_unit: usize,
    pub nodes: usize,
    pub tail: f64,
}

impl Default for StereoRule {
    fn default() -> Self {
        Self { panels_per_unit: 3, nodes: 8, tail: 1e-6 }
    }
}

/// Nodes of a [`StereoRule`] in both the stereographic coordinate
/// `x = 2·tan(θ/2)` and the angle `θ`; `weights` integrate in `dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoNodes {
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
}

impl StereoNodes {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

impl StereoRule {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_unit == 0 || self.nodes == 0 {
            return Err(Error::EmptyQuadrature);
        }
        if !(self.tail > 0.0 && self.tail < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "stereographic tail must lie in (0, 1), got {}",
                self.tail
            )));
        }
        Ok(())
    }

    pub fn refined(&self) -> Self {
        Self { panels_per_unit: 2 * self.panels_per_unit, ..*self }
    }

    /// Nodes adapted to a single dilation scale.
    pub fn nodes_for(&self, scale: f64) -> Result<StereoNodes> {
        self.nodes_for_range(scale, scale)
    }

    /// Nodes valid for every dilation scale in `[a_min, a_max]`.
    pub fn nodes_for_range(&self, a_min: f64, a_max: f64) -> Result<StereoNodes> {
        self.validate()?;
        for a in [a_min, a_max] {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidScale(a));
            }
        }
        let eps = 0.5 * (1.0 / a_max).min(1.0);
        let x_max = 4.0 / (self.tail * a_min.min(1.0));
        let s_max = (x_max / eps).asinh();
        let panels = ((2.0 * s_max) * self.panels_per_unit as f64).ceil() as usize;
        let base = PanelRule { panels: panels.max(1), nodes: self.nodes }.on(-s_max, s_max);
        let n = base.len();
        let mut out = StereoNodes {
            x: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
        };
        for (&s, &w) in base.points.iter().zip(&base.weights) {
            let x = eps * s.sinh();
            out.x.push(x);
            out.theta.push(2.0 * (0.5 * x).atan());
            out.weights.push(w * eps * s.cosh() / (1.0 + 0.25 * x * x));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn panel_rule_on_circle() {
        let r = PanelRule::default().on_circle();
        assert!((r.integrate(|t| t.cos().powi(2)) - PI).abs() < 1e-13);
    }

    #[test]
    fn empty_rules_rejected() {
        assert!(PanelRule::new(0, 8).is_err());
        assert!(StereoRule { panels_per_unit: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn stereo_rule_integrates_smooth_functions() {
        let nodes = StereoRule::default().nodes_for(1.0).unwrap();
        let q: f64 = nodes
            .theta
            .iter()
            .zip(&nodes.weights)
            .map(|(t, w)| w * (1.0 + t.cos()))
            .sum();
        assert!((q - 2.0 * PI).abs() < 1e-9, "{q}");
    }

    #[test]
    fn stereo_rule_resolves_dilated_multiplier() {
        // λ(1/a, ·) has a peak of width a at ±π and of width 1/a at 0.
        // This integrand does not vanish at ±π, so the dropped tail counts.
        let rule = StereoRule { tail: 1e-9, ..Default::default() };
        for a in [1e-3, 1e3] {
            let nodes = rule.nodes_for(a).unwrap();
            let q: f64 = nodes
                .theta
                .iter()
                .zip(&nodes.weights)
                .map(|(t, w)| w * a / ((t / 2.0).cos().powi(2) + a * a * (t / 2.0).sin().powi(2)))
                .sum();
            assert!((q - 2.0 * PI).abs() < 1e-6, "a={a}: {q}");
        }
    }
}
