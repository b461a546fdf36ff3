// SPDX-License-Identifier: Apache-2.0

//! Library side of the `fullerene` command: configuration parsing, scenario
//! execution and output writing.

pub mod analysis;
pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod scenario;
pub mod units;

use std::path::Path;

pub use config::{parse_config, ScenarioConfig, ScenarioKind};
pub use error::{CliError, Result};
pub use report::RunReport;
pub use scenario::{run_scenario, RunOutput};

/// Options of one `run` invocation.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the default pool.
    pub threads: Option<usize>,
    /// Also write an SVG plot next to each trace.
    pub svg: bool,
}

/// Parses `config_path`, runs it and writes every output into `out_dir`.
/// Files are written only after the whole scenario has been computed.
pub fn execute(config_path: &Path, out_dir: &Path, opts: &RunOptions) -> Result<RunReport> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|source| CliError::Io { path: config_path.to_path_buf(), source })?;
    let cfg = parse_config(&text)?;
    log::info!("running {} scenario for {}", cfg.kind().as_str(), cfg.species.name);
    let out = match opts.threads {
        Some(n) => fullerene_core::parallel::with_threads(n, || run_scenario(&cfg))?,
        None => run_scenario(&cfg)?,
    };
    write_outputs(&out, out_dir, opts.svg)?;
    Ok(out.report)
}

/// Writes the files of a finished run plus `report.toml` and `timing.toml`.
pub fn write_outputs(out: &RunOutput, out_dir: &Path, svg: bool) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    for f in &out.files {
        output::write_atomic(&out_dir.join(&f.name), f.contents.as_bytes())?;
        if let (true, Some(t)) = (svg, &f.trace) {
            let name = f.name.trim_end_matches(".csv");
            output::write_atomic(&out_dir.join(format!("{name}.svg")), output::render_svg(t, name).as_bytes())?;
        }
    }
    output::write_atomic(&out_dir.join("report.toml"), out.report.to_toml().as_bytes())?;
    let timing = format!("wall_clock_ms = {:.3}\n", out.report.wall_clock_ms);
    output::write_atomic(&out_dir.join("timing.toml"), timing.as_bytes())
}
