// SPDX-License-Identifier: Apache-2.0

//! Runs a parsed scenario entirely in memory. Nothing touches the disk
//! until every output has been computed.

use std::fmt::Write as _;
use std::time::Instant;

use fullerene_core::constants::electron_zeeman_factor;
use fullerene_core::dynamics::{
    concurrence, decay_time, entangling_time, evolve_pure, simulate_eseem, simulate_nuclear_rabi, simulate_rabi,
    uniform_grid, EseemParams, InhomogeneityModel, NuclearRabiParams, RabiParams,
};
use fullerene_core::gates::{fidelity_sweep, FidelitySurface, RotationSpec, Scheme};
use fullerene_core::hamiltonian::Dipolar;
use fullerene_core::spectral::{
    composite_spectrum, diagonalize, isotopologue_weights, outer_fine_splitting, perturbative_transitions, transitions,
    AxisSpec, C13Profile, CwParams, MixtureComponent, SelectionRule, SweepMode, TransitionLine,
};
use fullerene_core::trace::format_significant;
use fullerene_core::{
    build_dimer_hamiltonian, build_static_hamiltonian, AxisUnit, CouplingSpec, FieldConfig, SpeciesParams,
    SpectrumTrace, SpinQuantumNumber, C64,
};
use nalgebra::DVector;

use crate::analysis::{self, LineRow, LINE_HEADER};
use crate::config::{
    Bb1Config, CwConfig, DimerConfig, EseemConfig, LevelsConfig, NuclearRabiConfig, RabiConfig, Scenario,
    ScenarioConfig, SweepKind,
};
use crate::error::{CliError, Result};
use crate::report::RunReport;

/// Isotopologue fractions (0, 1, 2 cage ¹³C) quoted in the literature for
/// 14N@C60 spectra, reported next to the binomial values for comparison.
pub const REFERENCE_ISOTOPOLOGUE_WEIGHTS: [f64; 3] = [0.57, 0.30, 0.12];

/// One output file. Traces keep their data so callers can plot them.
#[derive(Debug, Clone)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
    pub trace: Option<SpectrumTrace>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<OutputFile>,
}

struct Builder {
    scenario: &'static str,
    report: RunReport,
    files: Vec<OutputFile>,
}

impl Builder {
    fn engine<T>(&self, r: fullerene_core::Result<T>) -> Result<T> {
        r.map_err(|source| CliError::Engine { scenario: self.scenario, source })
    }

    fn trace(&mut self, name: &str, trace: SpectrumTrace) -> Result<()> {
        let contents = self.engine(trace.to_csv())?;
        self.files.push(OutputFile { name: name.to_string(), contents, trace: Some(trace) });
        Ok(())
    }

    fn text(&mut self, name: &str, contents: String) {
        self.files.push(OutputFile { name: name.to_string(), contents, trace: None });
    }
}

/// Computes every output of `cfg`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let mut b = Builder { scenario: cfg.kind().as_str(), report: RunReport::new(cfg), files: Vec::new() };
    match &cfg.scenario {
        Scenario::Levels(c) => levels(&mut b, &cfg.species, &cfg.field, c)?,
        Scenario::Cw(c) => cw(&mut b, &cfg.species, &cfg.field, c)?,
        Scenario::Eseem(c) => eseem(&mut b, &cfg.species, &cfg.field, c)?,
        Scenario::Rabi(c) => rabi(&mut b, &cfg.species, &cfg.field, c)?,
        Scenario::NuclearRabi(c) => nuclear_rabi(&mut b, &cfg.species, &cfg.field, c)?,
        Scenario::Bb1(c) => bb1(&mut b, c)?,
        Scenario::Dimer(c) => dimer(&mut b, &cfg.species, &cfg.field, c)?,
    }
    b.report.files = b.files.iter().map(|f| f.name.clone()).collect();
    b.report.wall_clock_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutput { report: b.report, files: b.files })
}

fn rows(lines: &[TransitionLine], field: &FieldConfig, g: f64) -> Vec<LineRow> {
    let label = |l: &[f64], k: usize| l.get(k).copied().unwrap_or(0.0);
    lines
        .iter()
        .map(|l| LineRow {
            frequency_mhz: l.frequency_mhz,
            field_mt: l.resonance_field(field.b0_mt, field.carrier_mhz(), g),
            intensity: l.intensity,
            lower_ms: label(&l.lower_label, 0),
            lower_mi: label(&l.lower_label, 1),
            upper_ms: label(&l.upper_label, 0),
            upper_mi: label(&l.upper_label, 1),
        })
        .collect()
}

fn lines_csv(rows: &[LineRow]) -> String {
    let mut out = format!("{LINE_HEADER}\n");
    for r in rows {
        let cells = [r.frequency_mhz, r.field_mt, r.intensity, r.lower_ms, r.lower_mi, r.upper_ms, r.upper_mi];
        let cells: Vec<String> = cells.iter().map(|v| format_significant(*v, 15)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn levels(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &LevelsConfig) -> Result<()> {
    let h = b.engine(build_static_hamiltonian(species, field))?;
    let eig = b.engine(diagonalize(&h))?;
    let exact = rows(&b.engine(transitions(&eig, SelectionRule::Epr))?, field, species.g);
    let approx = rows(&b.engine(perturbative_transitions(species, field, c.order))?, field, species.g);

    let mut table = String::from("index,energy_MHz,ms,mi\n");
    for k in 0..eig.dim() {
        let _ = writeln!(
            table,
            "{k},{},{},{}",
            format_significant(eig.energies[k], 15),
            eig.electron_m(k),
            eig.nuclear_m(k)
        );
    }
    b.text("levels.csv", table);
    // scalars come from the tables as written, so they are reproducible from the files
    let (exact_csv, approx_csv) = (lines_csv(&exact), lines_csv(&approx));
    let exact = analysis::parse_lines_csv(&exact_csv).map_err(CliError::Invalid)?;
    let approx = analysis::parse_lines_csv(&approx_csv).map_err(CliError::Invalid)?;
    b.text("lines.csv", exact_csv);
    b.text("perturbative_lines.csv", approx_csv);

    b.report.integer("line_count", exact.len() as i64);
    if let Some(s) = analysis::outer_splitting_khz(&exact) {
        b.report.scalar("splitting_kHz", s);
        b.report.scalar("splitting_uT", s / electron_zeeman_factor(species.g));
    }
    if let Some(s) = analysis::outer_splitting_khz(&approx) {
        b.report.scalar("perturbative_splitting_kHz", s);
    }
    b.report.scalar("predicted_splitting_kHz", outer_fine_splitting(species, field) * 1e3);
    if let Some(s) = analysis::central_spread_khz(&exact) {
        b.report.scalar("central_group_spread_kHz", s);
    }
    if let Some(r) = analysis::outer_intensity_ratios(&exact) {
        b.report.list("intensity_ratios", &r);
    }
    if let Some(r) = analysis::outer_intensity_ratios(&approx) {
        b.report.list("perturbative_intensity_ratios", &r);
    }
    Ok(())
}

fn cw(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &CwConfig) -> Result<()> {
    let sweep = match c.sweep {
        SweepKind::Field => SweepMode::field(field, species.g),
        SweepKind::Frequency => SweepMode::Frequency,
    };
    let mut components = vec![MixtureComponent { species: species.clone(), weight: c.weight, c13: c.c13 }];
    components.extend(c.components.iter().map(|(s, w)| MixtureComponent {
        species: s.clone(),
        weight: *w,
        c13: c.c13,
    }));
    let mut positions = Vec::new();
    for comp in &components {
        positions.extend(b.engine(comp.line_points(field, &sweep))?.into_iter().map(|p| p.0));
    }
    let step = c.step.unwrap_or(c.linewidth / 10.0);
    let axis = b.engine(AxisSpec::covering(&positions, c.margin.unwrap_or(10.0 * c.linewidth), step))?;
    let params = CwParams { linewidth_pp: c.linewidth, axis, derivative: c.derivative, lineshape: c.lineshape, sweep };
    let spectrum = b.engine(composite_spectrum(&components, field, &params))?;

    let max = spectrum.amplitude.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = spectrum.amplitude.iter().copied().fold(f64::INFINITY, f64::min);
    b.report.integer("points", spectrum.len() as i64);
    b.report.scalar("max", max);
    b.report.scalar("min", min);
    b.report.scalar("peak_to_peak", max - min);

    if let C13Profile::Binomial { abundance, a13_mhz, max_k } = c.c13 {
        let w = b.engine(isotopologue_weights(abundance, species.cage_carbons, max_k))?;
        let mut table = String::from("c13_count,weight\n");
        for (k, p) in w.iter().enumerate() {
            let _ = writeln!(table, "{k},{}", format_significant(*p, 15));
        }
        b.text("isotopologues.csv", table);
        b.report.list("isotopologue_weights", &w);
        b.report.list("reference_isotopologue_weights", &REFERENCE_ISOTOPOLOGUE_WEIGHTS);
        b.report.note(
            "isotopologue_weights are binomial in the natural 13C abundance; reference_isotopologue_weights are the \
             fractions commonly quoted for 14N@C60 and do not follow from that distribution",
        );
        let to_khz = match c.sweep {
            SweepKind::Field => electron_zeeman_factor(species.g) * 1e3,
            SweepKind::Frequency => 1e3,
        };
        let window = 2.0 * a13_mhz * 1e3 / to_khz;
        if let Some(sep) = analysis::satellite_separation(&spectrum, c.derivative, window) {
            b.report.scalar("satellite_splitting_kHz", sep * to_khz);
        }
    }
    b.trace("spectrum.csv", spectrum)?;
    Ok(())
}

fn eseem(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &EseemConfig) -> Result<()> {
    let tau: Vec<f64> = (0..c.points).map(|k| c.tau_start_ns + k as f64 * c.tau_step_ns).collect();
    let params = EseemParams { zero_pad: c.zero_pad, ..EseemParams::hahn(tau) };
    let r = b.engine(simulate_eseem(species, field, &params))?;
    if let Some((khz, mag)) = analysis::fft_peak(&r.fft, &r.echo) {
        b.report.scalar("peak_kHz", khz);
        b.report.scalar("peak_magnitude", mag);
    }
    b.report.scalar("predicted_fine_splitting_kHz", outer_fine_splitting(species, field) * 1e3);
    b.report.scalar("frequency_resolution_kHz", 1e6 / (r.echo.axis[r.echo.len() - 1] - r.echo.axis[0]));
    b.trace("echo.csv", r.echo)?;
    b.trace("fft.csv", r.fft)?;
    Ok(())
}

/// Envelope decay time of a Gaussian B1 distribution of relative width σ:
/// exp(−(2πσν1t)²/2) reaches 1/e at t = √2/(2πσν1).
pub fn gaussian_dephasing_ns(sigma: f64, nutation_mhz: f64) -> f64 {
    std::f64::consts::SQRT_2 / (std::f64::consts::TAU * sigma * nutation_mhz) * 1e3
}

fn rabi(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &RabiConfig) -> Result<()> {
    let params = RabiParams {
        nutation_mhz: c.nutation_mhz,
        times_ns: uniform_grid(c.points, c.step_ns),
        inhomogeneity: c.inhomogeneity,
        relaxation: c.relaxation,
    };
    let r = b.engine(simulate_rabi(species, field, &params))?;
    b.report.scalar("carrier_MHz", r.carrier_mhz);
    b.report.scalar("nuclear_m", r.nuclear_m);
    b.report.scalar("envelope_max_deviation", analysis::envelope_deviation(&r.envelope));
    if let Some(p) = analysis::coherent_period(&r.signal, &r.envelope) {
        b.report.scalar("period_ns", p);
        b.report.scalar("periods_in_t2", c.t2_reference_ns / p);
    }
    if let Some(t) = decay_time(&r.envelope, (-1.0f64).exp()) {
        b.report.scalar("decay_time_ns", t);
    }
    if let InhomogeneityModel::Gaussian { sigma, .. } = c.inhomogeneity {
        b.report.scalar("dephasing_oracle_ns", gaussian_dephasing_ns(sigma, c.nutation_mhz));
    }
    b.trace("signal.csv", r.signal)?;
    b.trace("envelope.csv", r.envelope)?;
    Ok(())
}

fn nuclear_rabi(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &NuclearRabiConfig) -> Result<()> {
    let params = NuclearRabiParams {
        rf_amp_mhz: c.rf_amp_mhz,
        targets_mhz: c.targets_mhz.clone(),
        times_ns: uniform_grid(c.points, c.step_ns),
        relaxation: c.relaxation,
    };
    let r = b.engine(simulate_nuclear_rabi(species, field, &params))?;
    let lines: Vec<f64> = r.lines.iter().map(|l| l.frequency_mhz).collect();
    b.report.list("lines_MHz", &lines);
    if let Some(k) = analysis::fft_peak(&r.fft, &r.signal).map(|p| p.0) {
        b.report.scalar("rabi_kHz", k);
    }
    b.report.scalar("rf_amplitude_kHz", c.rf_amp_mhz * 1e3);
    b.trace("signal.csv", r.signal)?;
    b.trace("fft.csv", r.fft)?;
    Ok(())
}

fn nearest_zero_row(s: &FidelitySurface) -> usize {
    (0..s.detunings_mhz.len())
        .min_by(|&i, &j| s.detunings_mhz[i].abs().total_cmp(&s.detunings_mhz[j].abs()))
        .unwrap_or(0)
}

fn bb1(b: &mut Builder, c: &Bb1Config) -> Result<()> {
    let target = b.engine(RotationSpec::new(c.angle, c.phase))?;
    for (scheme, tag) in [(Scheme::Naive, "naive"), (Scheme::Bb1, "bb1")] {
        let s = b.engine(fidelity_sweep(target, scheme, &c.epsilons, &c.detunings_mhz, c.reference_nutation_mhz))?;
        let row = nearest_zero_row(&s);
        b.report.list(&format!("fidelity_{tag}"), &s.values[row]);
        let min = s.values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        b.report.scalar(&format!("min_fidelity_{tag}"), min);
        b.text(&format!("fidelity_{tag}.csv"), s.to_csv());
    }
    b.report.list("epsilons", &c.epsilons);
    Ok(())
}

fn dimer(b: &mut Builder, species: &SpeciesParams, field: &FieldConfig, c: &DimerConfig) -> Result<()> {
    let coupling = CouplingSpec { exchange_mhz: c.exchange_mhz, dipolar: c.distance_nm.map(Dipolar::Distance) };
    let full = b.engine(build_dimer_hamiltonian(species, &c.partner, &coupling, field))?;
    b.report.integer("full_hamiltonian_dimension", full.dim() as i64);
    let d = b.engine(coupling.dipolar_mhz(species.g, c.partner.g))?;
    b.report.scalar("dipolar_MHz", d);

    // one effective spin-1/2 per molecule, nuclei dropped
    let reduce = |s: &SpeciesParams| {
        SpeciesParams::new(format!("{}-qubit", s.name), SpinQuantumNumber::HALF, SpinQuantumNumber::ZERO, s.g, 0.0, 0.0)
    };
    let qa = b.engine(reduce(species))?;
    let qb = b.engine(reduce(&c.partner))?;
    let h = b.engine(build_dimer_hamiltonian(&qa, &qb, &coupling, field))?;
    let t_ent = b.engine(entangling_time(c.exchange_mhz))?;
    let z = C64::new(0.0, 0.0);
    let psi = DVector::from_vec(vec![z, C64::new(1.0, 0.0), z, z]);

    let n = c.points.max(2);
    let times: Vec<f64> = (0..n).map(|k| 2.0 * t_ent * k as f64 / (n - 1) as f64).collect();
    let mut conc = Vec::with_capacity(n);
    for &t in &times {
        let state = b.engine(evolve_pure(&h, &psi, t))?;
        conc.push(b.engine(concurrence(&state))?);
    }
    let at = b.engine(evolve_pure(&h, &psi, t_ent))?;
    b.report.scalar("entangling_time_ns", t_ent);
    b.report.scalar("concurrence_at_entangling_time", b.engine(concurrence(&at))?);
    let trace = b.engine(SpectrumTrace::new(times, conc, AxisUnit::Nanosecond))?;
    if let Some((k, v)) = trace.argmax() {
        b.report.scalar("max_concurrence", v);
        b.report.scalar("max_concurrence_time_ns", trace.axis[k]);
    }
    if d != 0.0 {
        b.report.note("the dipolar term shifts the optimum away from the exchange-only entangling time");
    }
    b.trace("concurrence.csv", trace)?;
    Ok(())
}
