use crate::config::Formats;
use crate::scenarios::{Outcome, SamplePair};
use crate::svg::emit_svg;
use crate::{CliError, Result};
use irm_edgestats::EdgeSamples;
use serde::Serialize;
use std::fmt::Write;
use std::path::{Path, PathBuf};

/// Run facts that vary between identical runs, kept out of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub started_unix: f64,
    pub finished_unix: f64,
    pub elapsed_seconds: f64,
    pub threads: usize,
    pub version: String,
}

#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str, artifacts: &mut Artifacts) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io(path, e))?;
    artifacts.files.push(path.to_path_buf());
    Ok(())
}

/// Raw and rescaled extremes, one row per (role, replica, coordinate).
pub fn samples_csv(pairs: &[SamplePair]) -> String {
    let mut s = String::from("pair,role,replica,coordinate,raw,rescaled\n");
    let mut rows = |label: &str, role: &str, e: &EdgeSamples| {
        for (r, (raw, resc)) in e.extremes.iter().zip(&e.rescaled).enumerate() {
            for (i, (a, b)) in raw.iter().zip(resc).enumerate() {
                let _ = writeln!(s, "{label},{role},{r},{},{a:e},{b:e}", i + 1);
            }
        }
    };
    for p in pairs {
        rows(&p.label, "test", &p.test);
        rows(&p.label, "baseline", &p.baseline);
    }
    s
}

/// Writes `report.json`, `run.json` (timestamps), and for statistical
/// scenarios `samples.csv` and one SVG per coordinate when enabled.
pub fn write_outputs(outcome: &Outcome, dir: &Path, formats: &Formats, meta: &RunMeta) -> Result<Artifacts> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut artifacts = Artifacts::default();
    write(&dir.join("report.json"), &outcome.report.to_json(), &mut artifacts)?;
    let meta_text = serde_json::to_string_pretty(meta).map_err(|e| CliError::Runtime(e.to_string()))? + "\n";
    write(&dir.join("run.json"), &meta_text, &mut artifacts)?;
    if outcome.samples.is_empty() {
        return Ok(artifacts);
    }
    if formats.csv {
        write(&dir.join("samples.csv"), &samples_csv(&outcome.samples), &mut artifacts)?;
    }
    if formats.svg {
        for p in &outcome.samples {
            for i in 0..p.test.k {
                let path = dir.join(format!("hist-{}-k{}.svg", p.label, i + 1));
                let title = format!("{} λ_{} rescaled", outcome.report.config.scenario.tag(), i + 1);
                emit_svg(&p.test.coordinate(i), &p.baseline.coordinate(i), formats.bins, &title, &path)?;
                artifacts.files.push(path);
            }
        }
    }
    Ok(artifacts)
}
