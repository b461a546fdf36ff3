// SPDX-License-Identifier: Apache-2.0

//! Every scalar in a report must follow from the files written next to it.

mod common;

use std::path::Path;

use fullerene_cli::analysis::{self, parse_lines_csv};
use fullerene_cli::output::read_trace;
use fullerene_cli::{execute, RunOptions, RunReport};
use fullerene_core::constants::electron_zeeman_factor;
use fullerene_core::dynamics::decay_time;
use fullerene_core::gates::FidelitySurface;

fn close(report: &RunReport, key: &str, recomputed: f64) {
    let v = report.get(key).unwrap_or_else(|| panic!("report lacks {key}"));
    let tol = 1e-9 * v.abs().max(1e-6);
    assert!((v - recomputed).abs() <= tol, "{key}: report {v}, files {recomputed}");
}

fn close_list(report: &RunReport, key: &str, recomputed: &[f64]) {
    let v = report.get_list(key).unwrap_or_else(|| panic!("report lacks {key}"));
    assert_eq!(v.len(), recomputed.len(), "{key}");
    for (a, b) in v.iter().zip(recomputed) {
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-6), "{key}: report {a}, files {b}");
    }
}

fn run(name: &str, dir: &Path) -> RunReport {
    let report = execute(&common::scenario_path(name), dir, &RunOptions::default()).unwrap();
    let listed: Vec<String> = std::fs::read_to_string(dir.join("report.toml")).unwrap().parse::<toml::Table>().unwrap()
        ["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(listed, report.files);
    for f in &listed {
        assert!(dir.join(f).is_file(), "{f}");
    }
    report
}

#[test]
fn levels_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("01_levels_14n_c60.conf", dir.path());
    let exact = parse_lines_csv(&std::fs::read_to_string(dir.path().join("lines.csv")).unwrap()).unwrap();
    let approx = parse_lines_csv(&std::fs::read_to_string(dir.path().join("perturbative_lines.csv")).unwrap()).unwrap();
    let s = analysis::outer_splitting_khz(&exact).unwrap();
    close(&r, "splitting_kHz", s);
    close(&r, "splitting_uT", s / electron_zeeman_factor(r.scenario.g));
    close(&r, "perturbative_splitting_kHz", analysis::outer_splitting_khz(&approx).unwrap());
    close(&r, "central_group_spread_kHz", analysis::central_spread_khz(&exact).unwrap());
    close_list(&r, "intensity_ratios", &analysis::outer_intensity_ratios(&exact).unwrap());
    close_list(&r, "perturbative_intensity_ratios", &analysis::outer_intensity_ratios(&approx).unwrap());
    close(&r, "line_count", exact.len() as f64);
}

#[test]
fn cw_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("03_cw_c13_satellites.conf", dir.path());
    let t = read_trace(&dir.path().join("spectrum.csv")).unwrap();
    let max = t.amplitude.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = t.amplitude.iter().copied().fold(f64::INFINITY, f64::min);
    close(&r, "points", t.len() as f64);
    close(&r, "max", max);
    close(&r, "min", min);
    close(&r, "peak_to_peak", max - min);
    let to_khz = electron_zeeman_factor(r.scenario.g) * 1e3;
    let sep = analysis::satellite_separation(&t, true, 72.0 / to_khz).unwrap();
    // the CSV carries 12 significant digits of a ~345 mT axis
    let v = r.get("satellite_splitting_kHz").unwrap();
    assert!((v - sep * to_khz).abs() < 1e-3, "{v} vs {}", sep * to_khz);
    let table = std::fs::read_to_string(dir.path().join("isotopologues.csv")).unwrap();
    let w: Vec<f64> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    close_list(&r, "isotopologue_weights", &w);
}

#[test]
fn eseem_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("05_eseem_14n_c60.conf", dir.path());
    let echo = read_trace(&dir.path().join("echo.csv")).unwrap();
    let fft = read_trace(&dir.path().join("fft.csv")).unwrap();
    let (khz, mag) = analysis::fft_peak(&fft, &echo).unwrap();
    close(&r, "peak_kHz", khz);
    close(&r, "peak_magnitude", mag);
    // the spectrum itself follows from the echo file
    let again = fullerene_core::dynamics::fft::fft_magnitude(&echo, 4).unwrap();
    let (k2, _) = analysis::fft_peak(&again, &echo).unwrap();
    assert!((k2 - khz).abs() < 1e-6, "{k2} vs {khz}");
}

#[test]
fn rabi_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("06b_rabi_gaussian.conf", dir.path());
    let signal = read_trace(&dir.path().join("signal.csv")).unwrap();
    let env = read_trace(&dir.path().join("envelope.csv")).unwrap();
    close(&r, "period_ns", analysis::coherent_period(&signal, &env).unwrap());
    close(&r, "envelope_max_deviation", analysis::envelope_deviation(&env));
    close(&r, "decay_time_ns", decay_time(&env, (-1.0f64).exp()).unwrap());
    close(&r, "periods_in_t2", 2.5e5 / analysis::coherent_period(&signal, &env).unwrap());
}

#[test]
fn nuclear_rabi_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("07a_nuclear_rabi.conf", dir.path());
    let signal = read_trace(&dir.path().join("signal.csv")).unwrap();
    let fft = read_trace(&dir.path().join("fft.csv")).unwrap();
    close(&r, "rabi_kHz", analysis::fft_peak(&fft, &signal).unwrap().0);
}

#[test]
fn bb1_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("08_bb1.conf", dir.path());
    for tag in ["naive", "bb1"] {
        let s = FidelitySurface::from_csv(
            &std::fs::read_to_string(dir.path().join(format!("fidelity_{tag}.csv"))).unwrap(),
        )
        .unwrap();
        close_list(&r, &format!("fidelity_{tag}"), &s.values[0]);
        let min = s.values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        close(&r, &format!("min_fidelity_{tag}"), min);
    }
}

#[test]
fn dimer_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = run("10_dimer_exchange.conf", dir.path());
    let c = read_trace(&dir.path().join("concurrence.csv")).unwrap();
    let (k, v) = c.argmax().unwrap();
    close(&r, "max_concurrence", v);
    close(&r, "max_concurrence_time_ns", c.axis[k]);
    let t = r.get("entangling_time_ns").unwrap();
    close(&r, "concurrence_at_entangling_time", analysis::sample_at(&c, t).unwrap());
}
