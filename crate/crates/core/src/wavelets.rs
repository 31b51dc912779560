//! Mother wavelets on the torus.
//!
//! Planar wavelets are lifted by inverse stereographic projection,
//! `x = 2·tan(θ/2)`:
//!
//! ```text
//! [Π⁻¹ψ](θ₁, θ₂) = ψ(x₁, x₂) / √((1 + cos θ₁)(1 + cos θ₂))
//! ```
//!
//! Since `1/(1 + cos θ) = (1 + x²/4)/2`, every lift is evaluated in `x`
//! without dividing by a vanishing cosine.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::wrap_angle;

pub type CircleFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
pub type PlaneFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Default shape parameter for tensor and axisymmetric DoG.
pub const DEFAULT_ALPHA: f64 = 2.0;
/// Default shape parameter for the diagonal DoG.
pub const DEFAULT_DIAGONAL_ALPHA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveletKind {
    Dog1dTensor,
    DogAxisymmetric,
    DiagonalDog,
    Custom,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("DoG shape parameter must be positive, got {alpha}")))
    }
}

/// `x ↦ e^{−x²} − e^{−x²/α²}/α`.
pub fn dog_1d(alpha: f64) -> Result<impl Fn(f64) -> f64 + Clone + Send + Sync + 'static> {
    check_alpha(alpha)?;
    Ok(move |x: f64| (-x * x).exp() - (-x * x / (alpha * alpha)).exp() / alpha)
}

/// `(x₁, x₂) ↦ e^{−|x|²} − e^{−|x|²/α²}/α²`.
pub fn dog_axisymmetric(alpha: f64) -> Result<impl Fn(f64, f64) -> f64 + Clone + Send + Sync + 'static> {
    check_alpha(alpha)?;
    let a2 = alpha * alpha;
    Ok(move |x1: f64, x2: f64| {
        let r2 = x1 * x1 + x2 * x2;
        (-r2).exp() - (-r2 / a2).exp() / a2
    })
}

/// Stereographic coordinate `2·tan(θ/2)` and `(1 + x²/4)`, or `None` at `±π`.
#[inline]
fn stereo(theta: f64) -> Option<(f64, f64)> {
    let h = 0.5 * wrap_angle(theta);
    let c = h.cos();
    if c.abs() < 1e-300 || (h.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-15 {
        return None;
    }
    let x = 2.0 * h.sin() / c;
    Some((x, 1.0 + 0.25 * x * x))
}

/// `√(1 + cos θ)`, evaluated as `√2·|cos(θ/2)|`.
#[inline]
pub fn sqrt_one_plus_cos(theta: f64) -> f64 {
    std::f64::consts::SQRT_2 * (0.5 * theta).cos().abs()
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

#[derive(Clone)]
enum Form {
    /// `γ = f₁(θ₁)·f₂(θ₂)`, with matching Γ factors.
    Separable { f: [CircleFn; 2], big_gamma: [CircleFn; 2] },
    /// `γ = √((1+cos θ₁)(1+cos θ₂))·η(θ₁+θ₂)`, `Γ = η(θ₁+θ₂)`.
    Diagonal { eta: CircleFn },
    General { f: PlaneFn, big_gamma: PlaneFn },
}

/// A mother wavelet `γ ∈ L²(T²)` together with its profile
/// `Γ = γ/√((1 + cos θ₁)(1 + cos θ₂))`.
#[derive(Clone)]
pub struct MotherWavelet {
    kind: WaveletKind,
    alpha: Option<f64>,
    alpha2: Option<f64>,
    form: Form,
}

impl fmt::Debug for MotherWavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match self.form {
            Form::Separable { .. } => "separable",
            Form::Diagonal { .. } => "diagonal",
            Form::General { .. } => "general",
        };
        f.debug_struct("MotherWavelet")
            .field("kind", &self.kind)
            .field("alpha", &self.alpha)
            .field("alpha2", &self.alpha2)
            .field("form", &form)
            .finish()
    }
}

/// `Γ(θ₁, θ₂)`.
#[derive(Clone)]
pub struct GammaProfile {
    f: PlaneFn,
}

impl GammaProfile {
    pub fn eval(&self, t1: f64, t2: f64) -> Complex64 {
        (self.f)(t1, t2)
    }
}

/// Lift of a planar function to the torus.
pub fn lift_to_torus<F>(psi: F) -> MotherWavelet
where
    F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
{
    let psi = Arc::new(psi);
    let p2 = psi.clone();
    MotherWavelet {
        kind: WaveletKind::Custom,
        alpha: None,
        alpha2: None,
        form: Form::General {
            f: Arc::new(move |t1, t2| match (stereo(t1), stereo(t2)) {
                (Some((x1, j1)), Some((x2, j2))) => {
                    let v = psi(x1, x2) * (0.5 * (j1 * j2).sqrt());
                    if v.is_finite() { v } else { Complex64::default() }
                }
                _ => Complex64::default(),
            }),
            big_gamma: Arc::new(move |t1, t2| match (stereo(t1), stereo(t2)) {
                (Some((x1, j1)), Some((x2, j2))) => {
                    let v = p2(x1, x2) * (0.25 * j1 * j2);
                    if v.is_finite() { v } else { Complex64::default() }
                }
                _ => Complex64::default(),
            }),
        },
    }
}

/// Lift of a 1-D function, as one tensor factor: `f(θ) = ψ(x)/√(1 + cos θ)`.
fn lift_axis<F>(psi: F) -> (CircleFn, CircleFn)
where
    F: Fn(f64) -> f64 + Clone + Send + Sync + 'static,
{
    let p1 = psi.clone();
    let f: CircleFn = Arc::new(move |t| match stereo(t) {
        Some((x, j)) => Complex64::new(finite_or_zero(p1(x) * (0.5 * j).sqrt()), 0.0),
        None => Complex64::default(),
    });
    let g: CircleFn = Arc::new(move |t| match stereo(t) {
        Some((x, j)) => Complex64::new(finite_or_zero(psi(x) * 0.5 * j), 0.0),
        None => Complex64::default(),
    });
    (f, g)
}

/// Diagonal wavelet from a profile `η` on the circle.
pub fn diagonal_wavelet<F>(eta: F) -> MotherWavelet
where
    F: Fn(f64) -> Complex64 + Send + Sync + 'static,
{
    MotherWavelet {
        kind: WaveletKind::Custom,
        alpha: None,
        alpha2: None,
        form: Form::Diagonal { eta: Arc::new(move |s| eta(wrap_angle(s))) },
    }
}

/// `η(s) = ψ_α(2·tan(s/2))/(1 + cos s)`.
pub fn diagonal_dog_profile(alpha: f64) -> Result<impl Fn(f64) -> Complex64 + Clone + Send + Sync + 'static> {
    let psi = dog_1d(alpha)?;
    Ok(move |s: f64| match stereo(s) {
        Some((x, j)) => Complex64::new(finite_or_zero(psi(x) * 0.5 * j), 0.0),
        None => Complex64::default(),
    })
}

impl MotherWavelet {
    /// Lifted tensor DoG `ψ_{α₁}(x₁)·ψ_{α₂}(x₂)`.
    pub fn dog_tensor(alpha: f64, alpha2: Option<f64>) -> Result<Self> {
        let b = alpha2.unwrap_or(alpha);
        let (f1, g1) = lift_axis(dog_1d(alpha)?);
        let (f2, g2) = lift_axis(dog_1d(b)?);
        Ok(Self {
            kind: WaveletKind::Dog1dTensor,
            alpha: Some(alpha),
            alpha2: Some(b),
            form: Form::Separable { f: [f1, f2], big_gamma: [g1, g2] },
        })
    }

    /// Lifted axisymmetric DoG.
    pub fn dog_axisymmetric(alpha: f64) -> Result<Self> {
        let psi = dog_axisymmetric(alpha)?;
        let mut w = lift_to_torus(move |x1, x2| Complex64::new(psi(x1, x2), 0.0));
        w.kind = WaveletKind::DogAxisymmetric;
        w.alpha = Some(alpha);
        Ok(w)
    }

    pub fn diagonal_dog(alpha: f64) -> Result<Self> {
        let mut w = diagonal_wavelet(diagonal_dog_profile(alpha)?);
        w.kind = WaveletKind::DiagonalDog;
        w.alpha = Some(alpha);
        Ok(w)
    }

    /// Tensor product of two lifted 1-D functions.
    pub fn lift_separable<F, G>(psi1: F, psi2: G) -> Self
    where
        F: Fn(f64) -> f64 + Clone + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Clone + Send + Sync + 'static,
    {
        let (f1, g1) = lift_axis(psi1);
        let (f2, g2) = lift_axis(psi2);
        Self {
            kind: WaveletKind::Custom,
            alpha: None,
            alpha2: None,
            form: Form::Separable { f: [f1, f2], big_gamma: [g1, g2] },
        }
    }

    /// `γ(θ₁, θ₂) = f₁(θ₁)·f₂(θ₂)` given directly on the torus.
    pub fn separable<F, G>(f1: F, f2: G) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let f1: CircleFn = Arc::new(f1);
        let f2: CircleFn = Arc::new(f2);
        let (c1, c2) = (f1.clone(), f2.clone());
        Self {
            kind: WaveletKind::Custom,
            alpha: None,
            alpha2: None,
            form: Form::Separable {
                f: [f1, f2],
                big_gamma: [
                    Arc::new(move |t| c1(t) / sqrt_one_plus_cos(t)),
                    Arc::new(move |t| c2(t) / sqrt_one_plus_cos(t)),
                ],
            },
        }
    }

    /// Arbitrary closed-form `γ`.
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        let f: PlaneFn = Arc::new(f);
        let c = f.clone();
        Self {
            kind: WaveletKind::Custom,
            alpha: None,
            alpha2: None,
            form: Form::General {
                f,
                big_gamma: Arc::new(move |t1, t2| c(t1, t2) / (sqrt_one_plus_cos(t1) * sqrt_one_plus_cos(t2))),
            },
        }
    }

    /// `γ ≡ 1`, which violates the zero-mean condition.
    pub fn constant() -> Self {
        Self::separable(|_| Complex64::new(1.0, 0.0), |_| Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::separable(|_| Complex64::default(), |_| Complex64::default())
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn alpha2(&self) -> Option<f64> {
        self.alpha2
    }

    #[inline]
    pub fn eval(&self, t1: f64, t2: f64) -> Complex64 {
        match &self.form {
            Form::Separable { f, .. } => f[0](t1) * f[1](t2),
            Form::Diagonal { eta } => eta(t1 + t2) * (sqrt_one_plus_cos(t1) * sqrt_one_plus_cos(t2)),
            Form::General { f, .. } => f(t1, t2),
        }
    }

    pub fn gamma_of(&self) -> GammaProfile {
        let f: PlaneFn = match &self.form {
            Form::Separable { big_gamma, .. } => {
                let [a, b] = big_gamma.clone();
                Arc::new(move |t1, t2| a(t1) * b(t2))
            }
            Form::Diagonal { eta } => {
                let eta = eta.clone();
                Arc::new(move |t1, t2| eta(t1 + t2))
            }
            Form::General { big_gamma, .. } => big_gamma.clone(),
        };
        GammaProfile { f }
    }

    /// The two tensor factors when `γ` is separable.
    pub fn separable_factors(&self) -> Option<(&CircleFn, &CircleFn)> {
        match &self.form {
            Form::Separable { f, .. } => Some((&f[0], &f[1])),
            _ => None,
        }
    }

    pub fn separable_gamma_factors(&self) -> Option<(&CircleFn, &CircleFn)> {
        match &self.form {
            Form::Separable { big_gamma, .. } => Some((&big_gamma[0], &big_gamma[1])),
            _ => None,
        }
    }

    /// The profile `η` when `Γ(θ₁, θ₂) = η(θ₁ + θ₂)`.
    pub fn diagonal_profile(&self) -> Option<&CircleFn> {
        match &self.form {
            Form::Diagonal { eta } => Some(eta),
            _ => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.form, Form::Diagonal { .. })
    }

    pub fn as_fn(&self) -> impl Fn(f64, f64) -> Complex64 + '_ {
        move |a, b| self.eval(a, b)
    }
}
