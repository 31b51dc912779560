use std::f64::consts::PI;
use std::path::Path;

use torus_cwt::admissibility::{assess, lambda_spectrum, modular_spectrum, necessary_condition, ScaleQuadrature, SpectrumConfig};
use torus_cwt::conformal::{apply_modular, dilate_angle, wavelet_atom, AtomParams};
use torus_cwt::cwt::{analyze, reconstruction_spectrum, relative_error, synthesize, ParamGrid};
use torus_cwt::io::{
    fmt_f64, read_coefficients, read_json, read_signal, sidecar_path, write_coefficients, write_json, write_signal,
    write_spectrum, OrbitReport, RunManifest, WaveletName, WaveletSpec,
};
use torus_cwt::modular::{orbit_representative, ModularMatrix};
use torus_cwt::modular_frames::{random_bandlimited, BandLimit};
use torus_cwt::quadrature::PanelRule;
use torus_cwt::torus::{inverse_fourier, sample, TorusGrid};
use torus_cwt::wavelets::MotherWavelet;

use crate::config::RunConfig;
use crate::CliError;

const DEFAULT_SPECTRUM_WINDOW: usize = 8;
const DEFAULT_PLOT_GRID: usize = 128;
const DEFAULT_SIGNAL_GRID: usize = 13;

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn require_file(p: &Path) -> Result<(), CliError> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{}: no such file", p.display())))
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(v).map_err(usage)?);
    Ok(())
}

pub fn admissibility(cfg: &RunConfig) -> Result<(), CliError> {
    let gamma = cfg.wavelet.build()?;
    let nc = necessary_condition(&gamma, PanelRule::default())?;
    let w = cfg.window.unwrap_or(DEFAULT_SPECTRUM_WINDOW);
    let config = SpectrumConfig { scales: cfg.scales(ScaleQuadrature::default())?, angular: cfg.angular };
    let spec = if cfg.modular {
        modular_spectrum(&gamma, (w, w), &config)?
    } else {
        lambda_spectrum(&gamma, (w, w), &config)?
    };
    let report = assess(&nc, &spec)?;
    let out = cfg.out_dir()?;
    write_spectrum(&out.join("spectrum.csv"), &spec)?;
    write_json(&out.join("admissibility.json"), &report)?;
    print_json(&report)?;
    if nc.diverges {
        return Err(CliError::Refused("the integral of the wavelet profile does not converge".into()));
    }
    Ok(())
}

pub fn analyze_cmd(input: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    require_file(input)?;
    let psi = read_signal(input)?;
    let gamma = cfg.wavelet.build()?;
    if cfg.modular && !gamma.is_diagonal() {
        return Err(CliError::Refused("modular analysis needs a diagonal wavelet".into()));
    }
    let scales = cfg.cwt_scales()?;
    let mut params = if cfg.modular {
        ParamGrid::modular(psi.grid, scales, cfg.coset_height)?
    } else {
        ParamGrid::two_dilation(psi.grid, scales)?
    };
    if let Some(w) = cfg.window {
        params.window = (w.min(params.window.0), w.min(params.window.1));
    }
    let coeffs = analyze(&psi, &gamma, &params, &cfg.angular)?;
    let manifest = RunManifest {
        wavelet: cfg.wavelet,
        grid: psi.grid,
        window: params.window,
        scales,
        angular: cfg.angular,
        coset_height: cfg.modular.then_some(cfg.coset_height),
        seed: Some(cfg.seed),
        cells: params.cells(),
    };
    let out = cfg.out_dir()?;
    let path = out.join("coefficients.csv");
    write_coefficients(&path, &coeffs)?;
    write_json(&sidecar_path(&path), &manifest)?;
    println!("wrote {} coefficients to {}", coeffs.values.len(), path.display());
    Ok(())
}


pub fn synthesize_cmd(coefficients: &Path, original: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    require_file(coefficients)?;
    if let Some(o) = original {
        require_file(o)?;
    }
    let manifest: RunManifest = read_json(&sidecar_path(coefficients))?;
    let coeffs = read_coefficients(coefficients, &manifest)?;
    let gamma = manifest.wavelet.build()?;
    let spec = reconstruction_spectrum(&gamma, &coeffs.params, &manifest.angular)?;
    let rec = synthesize(&coeffs, &gamma, &spec, &manifest.angular)?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => coefficients.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    std::fs::create_dir_all(&dir).map_err(usage)?;
    let path = dir.join("reconstruction.csv");
    write_signal(&path, &rec)?;
    println!("wrote reconstruction to {}", path.display());
    if let Some(o) = original {
        let psi = read_signal(o)?;
        println!("relative error: {}", fmt_f64(relative_error(&rec, &psi)?));
    }
    Ok(())
}


pub fn orbit(n1: i64, n2: i64) -> Result<(), CliError> {
    print_json(&OrbitReport::compute(n1, n2)?)
}

pub fn plotdata(cfg: &RunConfig) -> Result<(), CliError> {
    let out = cfg.out_dir()?;
    let mut w = csv::Writer::from_path(out.join("theta_a.csv")).map_err(usage)?;
    w.write_record(["a", "theta", "theta_a", "a_theta"]).map_err(usage)?;
    let steps = 512;
    for a in [0.1, 1.0, 10.0] {
        for k in 0..=steps {
            let t = -PI + 2.0 * PI * k as f64 / steps as f64;
            let row = [a, t, dilate_angle(t, a)?, a * t].map(fmt_f64);
            w.write_record(&row).map_err(usage)?;
        }
    }
    w.flush().map_err(usage)?;

    let grid = TorusGrid::square(cfg.grid.unwrap_or(DEFAULT_PLOT_GRID))?;
    let axi = MotherWavelet::dog_axisymmetric(cfg.wavelet.alpha.unwrap_or(torus_cwt::wavelets::DEFAULT_ALPHA))?;
    for (a1, a2) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
        let atom = wavelet_atom(axi.as_fn(), &AtomParams::new(0.0, 0.0, a1, a2)?, grid)?;
        write_signal(&out.join(format!("axisymmetric_dog_{a1}_{a2}.csv")), &atom)?;
    }
    let diag = WaveletSpec::new(WaveletName::DiagonalDog).build()?;
    let base = sample(diag.as_fn(), grid)?;
    let matrices = [
        ("identity", ModularMatrix::IDENTITY),
        ("m_1_0", orbit_representative(1, 0)?),
        ("m_0_1", orbit_representative(0, 1)?),
        ("m_4_5", orbit_representative(4, 5)?),
    ];
    for (name, m) in matrices {
        write_signal(&out.join(format!("diagonal_dog_{name}.csv")), &apply_modular(&base, &m)?)?;
    }
    println!("wrote plot data to {}", out.display());
    Ok(())
}

pub fn random_signal(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = TorusGrid::square(cfg.grid.unwrap_or(DEFAULT_SIGNAL_GRID))?;
    let (l, _) = grid.max_window();
    let l = cfg.window.unwrap_or(l);
    grid.check_window(l, l)?;
    let psi = inverse_fourier(&random_bandlimited(BandLimit::new(l, l), cfg.seed), grid)?;
    let path = cfg.out_dir()?.join("signal.csv");
    write_signal(&path, &psi)?;
    println!("wrote {}", path.display());
    Ok(())
}
