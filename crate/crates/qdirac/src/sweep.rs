//! Parameter sweeps, fluctuation counting and CSV/JSON emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcher;
use crate::model::{JumpVariant, ScatteringParams};
use crate::observables;

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    E,
    Va,
    Vb,
    A0,
}

impl Axis {
    fn apply(&self, base: &ScatteringParams, value: f64) -> Result<ScatteringParams> {
        let (mut e, mut va, mut vb, mut a0) = (base.e, base.va, base.vb, base.a0);
        match self {
            Axis::E => e = value,
            Axis::Va => va = value,
            Axis::Vb => vb = value,
            Axis::A0 => a0 = value,
        }
        Ok(ScatteringParams::new(e, base.m, va, vb, a0)?.with_variant(base.variant))
    }
}

/// A sweep request: fixed parameters plus one axis with a uniform grid.
#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    /// Fixed parameters; the swept field is overwritten point by point.
    pub base: ScatteringParams,
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

/// One solved grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    #[serde(rename = "R")]
    pub reflection: f64,
    #[serde(rename = "T")]
    pub transmission: f64,
    pub sum: f64,
    pub defect: f64,
}

/// Full parameter echo stored with every sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub e: f64,
    pub m: f64,
    pub va: f64,
    pub vb: f64,
    pub a0: f64,
    pub variant: JumpVariant,
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub version: String,
}

/// A grid point whose solve failed (the sweep itself continues).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub axis_value: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

/// Runs a sweep over a uniform grid, collecting per-point failures instead of
/// aborting. Fails outright only when no point solves at all.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if !spec.lo.is_finite() || !spec.hi.is_finite() {
        return Err(Error::InvalidParams("sweep bounds must be finite".into()));
    }
    if spec.lo > spec.hi {
        return Err(Error::InvalidParams(format!(
            "sweep bounds out of order: lo = {} > hi = {}",
            spec.lo, spec.hi
        )));
    }
    let degenerate = spec.lo == spec.hi;
    if spec.steps < 2 && !degenerate {
        return Err(Error::InvalidParams(format!(
            "sweeps need at least 2 steps, got {}",
            spec.steps
        )));
    }
    if spec.axis == Axis::E && spec.lo <= spec.base.m {
        return Err(Error::InvalidParams(format!(
            "energy sweeps must start above the mass: lo = {} <= m = {}",
            spec.lo, spec.base.m
        )));
    }

    let grid: Vec<f64> = if degenerate {
        vec![spec.lo]
    } else {
        (0..spec.steps)
            .map(|i| spec.lo + (spec.hi - spec.lo) * i as f64 / (spec.steps - 1) as f64)
            .collect()
    };

    let mut rows = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for &value in &grid {
        let solved = spec
            .axis
            .apply(&spec.base, value)
            .and_then(|params| matcher::solve(&params));
        match solved {
            Ok(sol) => {
                let report = observables::conservation_check(&sol);
                rows.push(SweepRow {
                    axis_value: value,
                    reflection: report.reflection,
                    transmission: report.transmission,
                    sum: report.reflection + report.transmission,
                    defect: report.defect,
                });
            }
            Err(err) => failures.push(SweepFailure {
                axis_value: value,
                message: err.to_string(),
            }),
        }
    }
    if rows.is_empty() {
        return Err(Error::AllPointsFailed {
            first: failures
                .first()
                .map(|f| format!("{} at {}", f.message, f.axis_value))
                .unwrap_or_else(|| "empty grid".into()),
        });
    }

    Ok(SweepResult {
        metadata: SweepMetadata {
            e: spec.base.e,
            m: spec.base.m,
            va: spec.base.va,
            vb: spec.base.vb,
            a0: spec.base.a0,
            variant: spec.base.variant,
            axis: spec.axis,
            lo: spec.lo,
            hi: spec.hi,
            steps: spec.steps,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        rows,
        failures,
    })
}

/// Values closer than this belong to one plateau.
const PLATEAU_TOL: f64 = 1e-12;

/// Number of strict local maxima of R over the interior grid points of an
/// energy sweep. Plateaus (runs of values within 1e-12) count once.
pub fn count_fluctuations(result: &SweepResult) -> Result<usize> {
    if result.metadata.axis != Axis::E {
        return Err(Error::InvalidParams(
            "fluctuation counting needs an energy-axis sweep".into(),
        ));
    }
    if result.rows.len() < 50 {
        return Err(Error::TooFewPoints {
            got: result.rows.len(),
            need: 50,
        });
    }
    // collapse plateau runs to single representatives
    let mut segments: Vec<f64> = Vec::new();
    for row in &result.rows {
        match segments.last() {
            Some(&v) if (row.reflection - v).abs() <= PLATEAU_TOL => {}
            _ => segments.push(row.reflection),
        }
    }
    let mut count = 0;
    for k in 1..segments.len().saturating_sub(1) {
        if segments[k] > segments[k - 1] && segments[k] > segments[k + 1] {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// CSV rendering: fixed header, 17 significant digits, LF line endings.
/// Identical inputs produce byte-identical output.
pub fn render_csv(result: &SweepResult) -> String {
    let mut out = String::from("axis_value,R,T,sum,defect\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            row.axis_value, row.reflection, row.transmission, row.sum, row.defect
        ));
    }
    out
}

pub fn render_json(result: &SweepResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

/// Writes a sweep to disk in the requested format.
pub fn emit(result: &SweepResult, format: OutputFormat, path: &Path) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => render_csv(result),
        OutputFormat::Json => render_json(result)?,
    };
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(body.as_bytes()).map_err(io_err)?;
    Ok(())
}

/// The canonical sweep presets behind the `figures` subcommand:
/// the unitarity scan, strength families for both channels, and the
/// delta-separation family whose fluctuation count grows with a0.
pub fn figure_specs() -> Vec<(String, SweepSpec)> {
    let base = ScatteringParams::new(2.0, 1.0, 1.0, 1.0, 1.0).expect("static parameters");
    let energy = |base: ScatteringParams, steps: usize| SweepSpec {
        base,
        axis: Axis::E,
        lo: 1.001,
        hi: 4.0,
        steps,
    };
    let mut specs = vec![("fig1.csv".to_string(), energy(base, 200))];
    for va in [0.5, 1.0, 2.0] {
        let mut b = base;
        b.va = va;
        specs.push((format!("fig2_va_{va}.csv"), energy(b, 200)));
    }
    for vb in [0.5, 1.0, 2.0] {
        let mut b = base;
        b.vb = vb;
        specs.push((format!("fig3_vb_{vb}.csv"), energy(b, 200)));
    }
    for a0 in [1.0, 2.0, 4.0] {
        let mut b = base;
        b.a0 = a0;
        specs.push((format!("fig4_a0_{a0}.csv"), energy(b, 400)));
    }
    specs
}

/// Runs all canonical sweeps and writes them under `out_dir`.
pub fn emit_figures(out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, spec) in figure_specs() {
        let result = run_sweep(&spec)?;
        let path = out_dir.join(name);
        emit(&result, OutputFormat::Csv, &path)?;
        written.push(path);
    }
    Ok(written)
}
