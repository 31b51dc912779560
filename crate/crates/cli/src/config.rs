use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use torus_cwt::admissibility::{ScaleQuadrature, ScaleRule};
use torus_cwt::cwt::{DEFAULT_COSET_HEIGHT, DEFAULT_CWT_SCALES};
use torus_cwt::io::{read_json, WaveletName, WaveletSpec};
use torus_cwt::quadrature::StereoRule;

use crate::CliError;

/// Options accepted both from a JSON config and from flags; flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    /// JSON config file
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// dog1d_tensor, dog_axisymmetric, diagonal_dog or constant
    #[arg(long)]
    pub wavelet: Option<WaveletName>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Grid points per axis
    #[arg(long)]
    pub grid: Option<usize>,
    /// Fourier window half-width
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub coset_height: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the modular family instead of two independent dilations
    #[arg(long)]
    pub modular: bool,
    #[arg(long)]
    pub u_min: Option<f64>,
    #[arg(long)]
    pub u_max: Option<f64>,
    #[arg(long)]
    pub nodes_per_unit: Option<usize>,
    /// Angular quadrature panels per unit
    #[arg(long)]
    pub panels_per_unit: Option<usize>,
    /// Angular quadrature truncation near ±π
    #[arg(long)]
    pub tail: Option<f64>,
}

impl Overrides {
    fn merge(self, base: Overrides) -> Overrides {
        Overrides {
            config: None,
            wavelet: self.wavelet.or(base.wavelet),
            alpha: self.alpha.or(base.alpha),
            alpha2: self.alpha2.or(base.alpha2),
            grid: self.grid.or(base.grid),
            window: self.window.or(base.window),
            coset_height: self.coset_height.or(base.coset_height),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            modular: self.modular || base.modular,
            u_min: self.u_min.or(base.u_min),
            u_max: self.u_max.or(base.u_max),
            nodes_per_unit: self.nodes_per_unit.or(base.nodes_per_unit),
            panels_per_unit: self.panels_per_unit.or(base.panels_per_unit),
            tail: self.tail.or(base.tail),
        }
    }

    /// Reads the config file, if any, and applies the flags on top.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(p) => read_json::<Overrides>(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
            None => Overrides::default(),
        };
        let o = self.merge(base);
        let modular = o.modular;
        let default_kind = if modular { WaveletName::DiagonalDog } else { WaveletName::Dog1dTensor };
        let default_tail = if modular { 1e-4 } else { StereoRule::default().tail };
        let angular = StereoRule {
            panels_per_unit: o.panels_per_unit.unwrap_or(StereoRule::default().panels_per_unit),
            tail: o.tail.unwrap_or(default_tail),
            ..StereoRule::default()
        };
        angular.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(RunConfig {
            wavelet: WaveletSpec { kind: o.wavelet.unwrap_or(default_kind), alpha: o.alpha, alpha2: o.alpha2 },
            grid: o.grid,
            window: o.window,
            coset_height: o.coset_height.unwrap_or(DEFAULT_COSET_HEIGHT),
            seed: o.seed.unwrap_or(0),
            out: o.out.unwrap_or_else(|| PathBuf::from(".")),
            modular,
            u_min: o.u_min,
            u_max: o.u_max,
            nodes_per_unit: o.nodes_per_unit,
            angular,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub wavelet: WaveletSpec,
    pub grid: Option<usize>,
    pub window: Option<usize>,
    pub coset_height: i64,
    pub seed: u64,
    pub out: PathBuf,
    pub modular: bool,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub nodes_per_unit: Option<usize>,
    pub angular: StereoRule,
}

impl RunConfig {
    /// Scale quadrature with unset fields taken from `default`.
    pub fn scales(&self, default: ScaleQuadrature) -> Result<ScaleQuadrature, CliError> {
        ScaleQuadrature::new(
            self.u_min.unwrap_or(default.u_min),
            self.u_max.unwrap_or(default.u_max),
            self.nodes_per_unit.unwrap_or(default.nodes_per_unit),
            ScaleRule::Trapezoid,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn cwt_scales(&self) -> Result<ScaleQuadrature, CliError> {
        self.scales(DEFAULT_CWT_SCALES)
    }

    pub fn out_dir(&self) -> Result<&std::path::Path, CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::Usage(format!("{}: {e}", self.out.display())))?;
        Ok(&self.out)
    }
}
