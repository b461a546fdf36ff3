// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use fullerene_core::SpectrumTrace;
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Writes `contents` to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io(path))?;
    tmp.write_all(contents).map_err(io(path))?;
    tmp.as_file().sync_all().map_err(io(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

/// CSV serialization of `trace` at `path`, written atomically.
pub fn write_trace(trace: &SpectrumTrace, path: &Path) -> Result<()> {
    let csv = trace.to_csv().map_err(|source| CliError::Engine { scenario: "write", source })?;
    write_atomic(path, csv.as_bytes())
}

pub fn read_trace(path: &Path) -> Result<SpectrumTrace> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    SpectrumTrace::from_csv(&text).map_err(|source| CliError::Engine { scenario: "read", source })
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Static line plot of a trace.
pub fn render_svg(trace: &SpectrumTrace, title: &str) -> String {
    let (x0, x1) = (trace.axis[0], trace.axis[trace.len() - 1]);
    let lo = trace.amplitude.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = trace.amplitude.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - lo) / (hi - lo) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}" font-size="14">{}</text>"#, PAD - 16.0, escape(title));
    let header = trace.unit.header();
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{} [{:.6} … {:.6}]</text>"#,
        W / 2.0,
        H - 12.0,
        header.split(',').next().unwrap_or(""),
        x0,
        x1
    );
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{:.4e}</text>"#, PAD, hi);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{:.4e}</text>"#, H - PAD, lo);
    s.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points=""#);
    for (x, y) in trace.axis.iter().zip(&trace.amplitude) {
        let _ = write!(s, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    s.push_str("\"/>\n</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
