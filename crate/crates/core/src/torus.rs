//! Uniform grids on the torus, sampled signals and Fourier coefficients.
//!
//! Conventions: grid angles are `θ_k = 2πk/N` wrapped to `(-π, π]`, the
//! orthonormal basis is `φ_n(θ) = e^{i n·θ}/(2π)` and
//! `f̂(n) = ⟨φ_n, f⟩ ≈ (2π/(N₁N₂)) Σ_k f(θ_k) e^{-i n·θ_k}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::PanelRule;

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `e^{i(n₁θ₁ + n₂θ₂)}/(2π)`.
pub fn plane_wave(n1: i64, n2: i64, t1: f64, t2: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI), n1 as f64 * t1 + n2 as f64 * t2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    pub n1: usize,
    pub n2: usize,
}

impl TorusGrid {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::GridTooSmall(n1, n2));
        }
        Ok(Self { n1, n2 })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn angles1(&self) -> Vec<f64> {
        axis_angles(self.n1)
    }

    pub fn angles2(&self) -> Vec<f64> {
        axis_angles(self.n2)
    }

    /// Angle pair at row-major index `(k1, k2)`.
    pub fn angle(&self, k1: usize, k2: usize) -> (f64, f64) {
        (
            wrap_angle(2.0 * PI * k1 as f64 / self.n1 as f64),
            wrap_angle(2.0 * PI * k2 as f64 / self.n2 as f64),
        )
    }

    /// Quadrature weight `(2π/N₁)(2π/N₂)`.
    pub fn cell_area(&self) -> f64 {
        4.0 * PI * PI / (self.n1 * self.n2) as f64
    }

    /// Largest symmetric window `|n_i| ≤ l_i` free of aliasing.
    pub fn max_window(&self) -> (usize, usize) {
        ((self.n1 - 1) / 2, (self.n2 - 1) / 2)
    }

    pub fn check_window(&self, l1: usize, l2: usize) -> Result<()> {
        if 2 * l1 >= self.n1 || 2 * l2 >= self.n2 {
            return Err(Error::Aliasing { l1, l2, n1: self.n1, n2: self.n2 });
        }
        Ok(())
    }
}

fn axis_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| wrap_angle(2.0 * PI * k as f64 / n as f64)).collect()
}

/// Complex samples on a [`TorusGrid`], row-major in `(k1, k2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSignal {
    pub grid: TorusGrid,
    pub values: Vec<Complex64>,
}

impl TorusSignal {
    pub fn new(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn at(&self, k1: usize, k2: usize) -> Complex64 {
        self.values[k1 * self.grid.n2 + k2]
    }

    pub fn norm(&self) -> f64 {
        inner_product(self, self).map(|v| v.re.max(0.0).sqrt()).unwrap_or(0.0)
    }
}

/// Sample `f` on every grid point.
pub fn sample<F>(f: F, grid: TorusGrid) -> Result<TorusSignal>
where
    F: Fn(f64, f64) -> Complex64,
{
    let a1 = grid.angles1();
    let a2 = grid.angles2();
    let mut values = Vec::with_capacity(grid.len());
    for &t1 in &a1 {
        for &t2 in &a2 {
            values.push(f(t1, t2));
        }
    }
    TorusSignal::new(grid, values)
}

/// Riemann-sum approximation of `∫∫ conj(f) g dθ`.
pub fn inner_product(f: &TorusSignal, g: &TorusSignal) -> Result<Complex64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", f.grid, g.grid)));
    }
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a.conj() * b).sum();
    Ok(s * f.grid.cell_area())
}

/// Coefficients on the rectangular window `|n₁| ≤ l1`, `|n₂| ≤ l2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    pub l1: usize,
    pub l2: usize,
    pub coeffs: Vec<Complex64>,
}

impl FourierTable {
    pub fn zeros(l1: usize, l2: usize) -> Self {
        Self { l1, l2, coeffs: vec![Complex64::new(0.0, 0.0); (2 * l1 + 1) * (2 * l2 + 1)] }
    }

    pub fn from_fn<F: FnMut(i64, i64) -> Complex64>(l1: usize, l2: usize, mut f: F) -> Self {
        let mut t = Self::zeros(l1, l2);
        for (n1, n2) in t.indices() {
            *t.get_mut(n1, n2).unwrap() = f(n1, n2);
        }
        t
    }

    pub fn width2(&self) -> usize {
        2 * self.l2 + 1
    }

    pub fn contains(&self, n1: i64, n2: i64) -> bool {
        n1.unsigned_abs() as usize <= self.l1 && n2.unsigned_abs() as usize <= self.l2
    }

    fn offset(&self, n1: i64, n2: i64) -> usize {
        (n1 + self.l1 as i64) as usize * self.width2() + (n2 + self.l2 as i64) as usize
    }

    pub fn get(&self, n1: i64, n2: i64) -> Option<Complex64> {
        self.contains(n1, n2).then(|| self.coeffs[self.offset(n1, n2)])
    }

    /// Coefficient, or zero outside the window.
    pub fn value(&self, n1: i64, n2: i64) -> Complex64 {
        self.get(n1, n2).unwrap_or_default()
    }

    pub fn get_mut(&mut self, n1: i64, n2: i64) -> Option<&mut Complex64> {
        if self.contains(n1, n2) {
            let o = self.offset(n1, n2);
            Some(&mut self.coeffs[o])
        } else {
            None
        }
    }

    /// Row-major `(n1, n2)` pairs matching the layout of `coeffs`.
    pub fn indices(&self) -> impl Iterator<Item = (i64, i64)> {
        let (l1, l2) = (self.l1 as i64, self.l2 as i64);
        (-l1..=l1).flat_map(move |a| (-l2..=l2).map(move |b| (a, b)))
    }

    /// `ℓ²` norm, which equals the `L²` norm of the represented function.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Per-axis DFT matrix `e^{s·i n θ_k}` for `n ∈ [-l, l]`, laid out `[n][k]`.
fn phase_matrix(l: usize, angles: &[f64], sign: f64) -> Vec<Complex64> {
    let mut m = Vec::with_capacity((2 * l + 1) * angles.len());
    for n in -(l as i64)..=(l as i64) {
        for &t in angles {
            m.push(Complex64::from_polar(1.0, sign * n as f64 * t));
        }
    }
    m
}

pub fn fourier_coefficients(f: &TorusSignal, l1: usize, l2: usize) -> Result<FourierTable> {
    let grid = f.grid;
    grid.check_window(l1, l2)?;
    let (n1, n2) = (grid.n1, grid.n2);
    let e1 = phase_matrix(l1, &grid.angles1(), -1.0);
    let e2 = phase_matrix(l2, &grid.angles2(), -1.0);
    let w2 = 2 * l2 + 1;
    // partial[k1][m2] = Σ_{k2} f[k1][k2] e^{-i m2 θ_{k2}}
    let mut partial = vec![Complex64::default(); n1 * w2];
    for k1 in 0..n1 {
        let row = &f.values[k1 * n2..(k1 + 1) * n2];
        for m2 in 0..w2 {
            let e = &e2[m2 * n2..(m2 + 1) * n2];
            partial[k1 * w2 + m2] = row.iter().zip(e).map(|(a, b)| a * b).sum();
        }
    }
    let scale = 2.0 * PI / (n1 * n2) as f64;
    let mut table = FourierTable::zeros(l1, l2);
    for m1 in 0..(2 * l1 + 1) {
        let e = &e1[m1 * n1..(m1 + 1) * n1];
        for m2 in 0..w2 {
            let s: Complex64 = (0..n1).map(|k1| e[k1] * partial[k1 * w2 + m2]).sum();
            table.coeffs[m1 * w2 + m2] = s * scale;
        }
    }
    Ok(table)
}

/// Evaluate `Σ_n f̂(n) φ_n` on `grid`.
pub fn inverse_fourier(table: &FourierTable, grid: TorusGrid) -> Result<TorusSignal> {
    grid.check_window(table.l1, table.l2)?;
    Ok(evaluate_series(table, &grid.angles1(), &grid.angles2(), grid))
}

/// Evaluate the Fourier series at the tensor product of two angle lists.
pub(crate) fn evaluate_series(
    table: &FourierTable,
    angles1: &[f64],
    angles2: &[f64],
    grid: TorusGrid,
) -> TorusSignal {
    let (n1, n2) = (angles1.len(), angles2.len());
    let (w1, w2) = (2 * table.l1 + 1, table.width2());
    let e1 = phase_matrix(table.l1, angles1, 1.0);
    let e2 = phase_matrix(table.l2, angles2, 1.0);
    // partial[m1][k2] = Σ_{m2} c[m1][m2] e^{i n2 θ_{k2}}
    let mut partial = vec![Complex64::default(); w1 * n2];
    for m1 in 0..w1 {
        let row = &table.coeffs[m1 * w2..(m1 + 1) * w2];
        for k2 in 0..n2 {
            partial[m1 * n2 + k2] = (0..w2).map(|m2| row[m2] * e2[m2 * n2 + k2]).sum();
        }
    }
    let mut values = vec![Complex64::default(); n1 * n2];
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            let s: Complex64 = (0..w1).map(|m1| e1[m1 * n1 + k1] * partial[m1 * n2 + k2]).sum();
            values[k1 * n2 + k2] = s / (2.0 * PI);
        }
    }
    TorusSignal { grid, values }
}

/// `(1/2π) ∫∫ f(θ) e^{-i(α₁θ₁+α₂θ₂)} dθ` by tensor Gauss-Legendre panels.
pub fn continuous_fourier<F>(f: F, alpha1: f64, alpha2: f64, quad: PanelRule) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    quad.validate()?;
    let rule = quad.on_circle();
    let e1: Vec<Complex64> =
        rule.points.iter().zip(&rule.weights).map(|(t, w)| Complex64::from_polar(*w, -alpha1 * t)).collect();
    let e2: Vec<Complex64> =
        rule.points.iter().zip(&rule.weights).map(|(t, w)| Complex64::from_polar(*w, -alpha2 * t)).collect();
    let mut total = Complex64::default();
    for (i, &t1) in rule.points.iter().enumerate() {
        let inner: Complex64 = rule.points.iter().zip(&e2).map(|(&t2, e)| f(t1, t2) * e).sum();
        total += e1[i] * inner;
    }
    Ok(total / (2.0 * PI))
}
