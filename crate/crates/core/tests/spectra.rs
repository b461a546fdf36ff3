// SPDX-License-Identifier: Apache-2.0

use fullerene_core::constants::electron_zeeman_factor;
use fullerene_core::spectral::*;
use fullerene_core::spin::Axis;
use fullerene_core::trace::Lineshape;
use fullerene_core::*;
use proptest::prelude::*;

fn field() -> FieldConfig {
    FieldConfig::resonant(9.67, 2.0036).unwrap()
}

fn field_params(f: &FieldConfig) -> CwParams {
    let centre = f.b0_mt;
    CwParams {
        linewidth_pp: 0.02,
        axis: AxisSpec::new(centre - 2.0, centre + 2.0, 0.004).unwrap(),
        derivative: true,
        lineshape: Lineshape::Gaussian,
        sweep: SweepMode::field(f, 2.0036),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mixture_is_weighted_sum(w1 in 0.01..10.0f64, w2 in 0.01..10.0f64) {
        let f = field();
        let p = field_params(&f);
        let a = MixtureComponent::pure(SpeciesParams::preset("14N@C60").unwrap(), w1);
        let b = MixtureComponent::pure(SpeciesParams::preset("15N@C60").unwrap(), w2);
        let mix = composite_spectrum(&[a.clone(), b.clone()], &f, &p).unwrap();
        let ta = composite_spectrum(&[a], &f, &p).unwrap();
        let tb = composite_spectrum(&[b], &f, &p).unwrap();
        let scale = mix.amplitude.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..mix.len() {
            let expected = (w1 * ta.amplitude[i] + w2 * tb.amplitude[i]) / (w1 + w2);
            prop_assert!((mix.amplitude[i] - expected).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn isotopologue_weights_are_subnormalized(p in 0.0..1.0f64, n in 1u32..80, k in 0u32..80) {
        let k = k.min(n);
        let w = isotopologue_weights(p, n, k).unwrap();
        let total: f64 = w.iter().sum();
        prop_assert!(w.iter().all(|x| *x >= 0.0));
        prop_assert!(total <= 1.0 + 1e-12);
        let full: f64 = isotopologue_weights(p, n, n).unwrap().iter().sum();
        prop_assert!((full - 1.0).abs() < 1e-10);
    }

    #[test]
    fn intensity_sum_is_invariant(scale in 0.0..2.0f64, b0 in 200.0..1000.0f64) {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let s = s.with_hyperfine(s.hyperfine_mhz * scale);
        let h = build_static_hamiltonian(&s, &FieldConfig::new(b0, 9.67).unwrap()).unwrap();
        let total: f64 = transitions(&diagonalize(&h).unwrap(), SelectionRule::Epr).unwrap().iter().map(|l| l.intensity).sum();
        // Σ over ΔM_S = ±1 pairs of |⟨j|Sx|i⟩|² is half of Tr(Sx²)
        let sx = h.basis.total(FactorKind::Electron, Axis::X).matrix;
        let tr = (&sx * &sx).trace().re;
        prop_assert!((total - 0.5 * tr).abs() < 1e-3 * tr, "{total} vs {}", 0.5 * tr);
    }

    #[test]
    fn outer_line_tracks_hyperfine(da in -1.0..1.0f64) {
        // first-order positions are linear in a; the absorption maximum of
        // the M_I = +1 group moves by −Δa·M_I/(gβ/h) in a field sweep
        let f = field();
        let base = SpeciesParams::preset("14N@C60").unwrap();
        let step = 0.0005;
        let peak = |a: f64| {
            let s = base.with_hyperfine(a);
            let lines: Vec<TransitionLine> = perturbative_transitions(&s, &f, 1)
                .unwrap()
                .into_iter()
                .filter(|l| l.lower_label[1] == 1.0)
                .collect();
            let p = CwParams {
                linewidth_pp: 0.02,
                axis: AxisSpec::new(f.b0_mt - 1.0, f.b0_mt, step).unwrap(),
                derivative: false,
                lineshape: Lineshape::Lorentzian,
                sweep: SweepMode::field(&f, s.g),
            };
            let t = synthesize_cw_spectrum(&lines, &p).unwrap();
            t.axis[t.argmax().unwrap().0]
        };
        let a0 = base.hyperfine_mhz;
        let shift = peak(a0 + da) - peak(a0);
        let expected = -da / electron_zeeman_factor(base.g);
        prop_assert!((shift - expected).abs() <= step, "{shift} {expected}");
    }
}

#[test]
fn natural_abundance_weights_match_binomial_oracle() {
    // C(60,k)·p^k·(1−p)^(60−k) evaluated with exact integer binomials
    let p: f64 = 0.0107;
    let oracle: Vec<f64> = [1.0, 60.0, 1770.0]
        .iter()
        .enumerate()
        .map(|(k, c)| c * p.powi(k as i32) * (1.0 - p).powi(60 - k as i32))
        .collect();
    let w = isotopologue_weights(p, 60, 2).unwrap();
    for (a, b) in w.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-14, "{a} {b}");
    }
    assert!((w[0] - 0.524).abs() < 1e-3 && (w[1] - 0.340).abs() < 1e-3 && (w[2] - 0.109).abs() < 1e-3);
}

#[test]
fn c13_satellites_split_by_coupling() {
    // one ¹³C (I = 1/2) splits every line into a doublet separated by a13
    let f = field();
    let s = SpeciesParams::preset("14N@C60").unwrap();
    let a13 = constants::C13_COUPLING_MHZ;
    let ext = hamiltonian::add_c13(&s, a13, 1).unwrap();
    let lines = transitions(&diagonalize(&ext.hamiltonian(&f).unwrap()).unwrap(), SelectionRule::Epr).unwrap();
    assert_eq!(lines.len(), 18);
    let mut by_group: std::collections::BTreeMap<(i64, i64), Vec<f64>> = Default::default();
    for l in &lines {
        let key = ((2.0 * l.lower_label[0]) as i64, (2.0 * l.lower_label[1]) as i64);
        by_group.entry(key).or_default().push(l.frequency_mhz);
    }
    assert_eq!(by_group.len(), 9);
    for g in by_group.into_values() {
        assert_eq!(g.len(), 2);
        assert!(((g[0] - g[1]).abs() - a13).abs() < 1e-4, "{g:?}");
    }
}
