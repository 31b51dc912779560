//! File formats. Numbers are written with 17 significant digits so that
//! round trips through text are exact.

use std::fs::File;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::admissibility::{LambdaSpectrum, ScaleQuadrature};
use crate::cwt::{CwtCoefficients, ParamGrid};
use crate::error::{Error, Result};
use crate::modular::{orbit_label, ModularMatrix};
use crate::quadrature::StereoRule;
use crate::torus::{FourierTable, TorusGrid, TorusSignal};
use crate::wavelets::{MotherWavelet, DEFAULT_ALPHA, DEFAULT_DIAGONAL_ALPHA};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path)?;
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let got: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if got != header {
        return Err(Error::Parse(format!("{}: expected header {header:?}, got {got:?}", path.display())));
    }
    let rows = r.records().collect::<std::result::Result<Vec<_>, _>>()?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::Parse(format!("{}: row {} has {} fields", path.display(), i + 1, row.len())));
        }
    }
    Ok(rows)
}

/// Sidecar path: `signal.csv` → `signal.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes `k1,k2,re,im` rows and the `{n1, n2}` sidecar.
pub fn write_signal(path: &Path, signal: &TorusSignal) -> Result<()> {
    let g = signal.grid;
    write_rows(
        path,
        &["k1", "k2", "re", "im"],
        signal.values.iter().enumerate().map(|(i, v)| {
            vec![(i / g.n2).to_string(), (i % g.n2).to_string(), fmt_f64(v.re), fmt_f64(v.im)]
        }),
    )?;
    write_json(&sidecar_path(path), &g)
}

pub fn read_signal(path: &Path) -> Result<TorusSignal> {
    let g: TorusGrid = read_json(&sidecar_path(path))?;
    let grid = TorusGrid::new(g.n1, g.n2)?;
    let rows = read_rows(path, &["k1", "k2", "re", "im"])?;
    let mut values = vec![None; grid.len()];
    for row in &rows {
        let (k1, k2) = (parse_i64(&row[0])?, parse_i64(&row[1])?);
        if k1 < 0 || k2 < 0 || k1 as usize >= grid.n1 || k2 as usize >= grid.n2 {
            return Err(Error::Parse(format!("grid index ({k1}, {k2}) outside {}×{}", grid.n1, grid.n2)));
        }
        let slot = &mut values[k1 as usize * grid.n2 + k2 as usize];
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate sample ({k1}, {k2})")));
        }
        *slot = Some(Complex64::new(parse_f64(&row[2])?, parse_f64(&row[3])?));
    }
    let values = values
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::ShapeMismatch { expected: grid.len(), got: rows.len() })?;
    TorusSignal::new(grid, values)
}

pub fn write_table(path: &Path, table: &FourierTable) -> Result<()> {
    write_rows(
        path,
        &["n1", "n2", "re", "im"],
        table
            .indices()
            .zip(&table.coeffs)
            .map(|((a, b), c)| vec![a.to_string(), b.to_string(), fmt_f64(c.re), fmt_f64(c.im)]),
    )
}

/// Reads a table; the window is the smallest one containing every row.
pub fn read_table(path: &Path) -> Result<FourierTable> {
    let rows = read_rows(path, &["n1", "n2", "re", "im"])?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in &rows {
        entries.push((parse_i64(&row[0])?, parse_i64(&row[1])?, parse_f64(&row[2])?, parse_f64(&row[3])?));
    }
    let l1 = entries.iter().map(|e| e.0.unsigned_abs()).max().unwrap_or(0) as usize;
    let l2 = entries.iter().map(|e| e.1.unsigned_abs()).max().unwrap_or(0) as usize;
    let mut t = FourierTable::zeros(l1, l2);
    for (a, b, re, im) in entries {
        *t.get_mut(a, b).expect("window covers all rows") = Complex64::new(re, im);
    }
    Ok(t)
}

pub fn write_spectrum(path: &Path, spec: &LambdaSpectrum) -> Result<()> {
    write_rows(
        path,
        &["n1", "n2", "lambda"],
        spec.iter().map(|((a, b), v)| vec![a.to_string(), b.to_string(), fmt_f64(v)]),
    )
}

/// Wavelet selection as stored in configs and manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveletName {
    #[serde(alias = "tensor")]
    Dog1dTensor,
    #[serde(alias = "axisymmetric")]
    DogAxisymmetric,
    #[serde(alias = "diagonal")]
    DiagonalDog,
    Constant,
}

impl std::str::FromStr for WaveletName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown wavelet kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub kind: WaveletName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
}

impl WaveletSpec {
    pub fn new(kind: WaveletName) -> Self {
        Self { kind, alpha: None, alpha2: None }
    }

    pub fn build(&self) -> Result<MotherWavelet> {
        match self.kind {
            WaveletName::Dog1dTensor => MotherWavelet::dog_tensor(self.alpha.unwrap_or(DEFAULT_ALPHA), self.alpha2),
            WaveletName::DogAxisymmetric => MotherWavelet::dog_axisymmetric(self.alpha.unwrap_or(DEFAULT_ALPHA)),
            WaveletName::DiagonalDog => MotherWavelet::diagonal_dog(self.alpha.unwrap_or(DEFAULT_DIAGONAL_ALPHA)),
            WaveletName::Constant => Ok(MotherWavelet::constant()),
        }
    }
}

/// Everything needed to rebuild the parameter grid of a coefficient file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub wavelet: WaveletSpec,
    pub grid: TorusGrid,
    pub window: (usize, usize),
    pub scales: ScaleQuadrature,
    pub angular: StereoRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset_height: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cells: usize,
}

impl RunManifest {
    pub fn param_grid(&self) -> Result<ParamGrid> {
        let mut p = match self.coset_height {
            Some(h) => ParamGrid::modular(self.grid, self.scales, h)?,
            None => ParamGrid::two_dilation(self.grid, self.scales)?,
        };
        p.window = self.window;
        p.validate()?;
        Ok(p)
    }
}

fn coeff_header(modular: bool) -> Vec<&'static str> {
    if modular {
        vec!["t1", "t2", "a1", "a2", "m", "n", "p", "q", "re", "im"]
    } else {
        vec!["t1", "t2", "a1", "a2", "re", "im"]
    }
}

/// One row per cell: translation angles, scales, matrix entries on modular
/// grids, then the coefficient.
pub fn write_coefficients(path: &Path, coeffs: &CwtCoefficients) -> Result<()> {
    let p = &coeffs.params;
    let grid = p.translations;
    let modular = !p.cosets().is_empty();
    let rows = (0..p.blocks()).flat_map(|b| {
        let (a1, a2, m, _) = p.block(b);
        coeffs.block(b).iter().enumerate().map(move |(i, v)| {
            let (t1, t2) = grid.angle(i / grid.n2, i % grid.n2);
            let mut row = vec![fmt_f64(t1), fmt_f64(t2), fmt_f64(a1), fmt_f64(a2)];
            if let Some(m) = m {
                let (a, b, c, d) = m.entries();
                row.extend([a, b, c, d].map(|x| x.to_string()));
            }
            row.extend([fmt_f64(v.re), fmt_f64(v.im)]);
            row
        })
    });
    write_rows(path, &coeff_header(modular), rows)
}

/// Reads coefficients against the grid described by `manifest`, checking
/// that scales and matrices match row by row.
pub fn read_coefficients(path: &Path, manifest: &RunManifest) -> Result<CwtCoefficients> {
    let params = manifest.param_grid()?;
    let modular = manifest.coset_height.is_some();
    let rows = read_rows(path, &coeff_header(modular))?;
    if rows.len() != params.cells() {
        return Err(Error::IncompatibleCoefficients(format!(
            "{} rows for {} cells",
            rows.len(),
            params.cells()
        )));
    }
    let n = params.translations.len();
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let (a1, a2, m, _) = params.block(i / n);
        let (r1, r2) = (parse_f64(&row[2])?, parse_f64(&row[3])?);
        let scale_ok = (r1 - a1).abs() <= 1e-12 * a1 && (r2 - a2).abs() <= 1e-12 * a2;
        let matrix_ok = match m {
            Some(m) => {
                let e = m.entries();
                [e.0, e.1, e.2, e.3].iter().zip(4..8).all(|(x, j)| parse_i64(&row[j]).ok() == Some(*x))
            }
            None => true,
        };
        if !(scale_ok && matrix_ok) {
            return Err(Error::IncompatibleCoefficients(format!("row {} does not match the manifest", i + 1)));
        }
        let k = row.len();
        values.push(Complex64::new(parse_f64(&row[k - 2])?, parse_f64(&row[k - 1])?));
    }
    CwtCoefficients::new(params, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub c_hat: f64,
    #[serde(rename = "C_hat")]
    pub big_c_hat: f64,
    pub verdict: bool,
}

/// `{g, rep, check}` with `check = (n₁, n₂)·rep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub g: i64,
    pub rep: ModularMatrix,
    pub check: [i64; 2],
}

impl OrbitReport {
    pub fn compute(n1: i64, n2: i64) -> Result<Self> {
        if n1 == 0 && n2 == 0 {
            return Err(Error::ZeroIndex);
        }
        let label = orbit_label(n1, n2)?;
        let (c1, c2) = label.rep.act_row(n1, n2)?;
        Ok(Self { g: label.g, rep: label.rep, check: [c1, c2] })
    }
}
