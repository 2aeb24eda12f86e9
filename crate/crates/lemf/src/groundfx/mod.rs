//! Lossy-ground filter chain: converts perfect-ground reference fields into
//! fields over (and under) a finitely conducting ground.
//!
//! The four-step pipeline filters the vertical E-field spectrum with the
//! ground-wave attenuation function, rotates it into the horizontal surface
//! field through the wave tilt, and pushes it underground with the
//! homogeneous-halfspace decay. The Cooray-Rubinstein correction is provided
//! as an independent route to the horizontal surface field. All filters are
//! per-frequency multiplications of a zero-padded spectrum; this is the same
//! LTI operation as convolving with the ground impulse responses.

pub mod faddeeva;
pub mod spectrum;

pub use faddeeva::{norton_attenuation, norton_attenuation_asymptotic};
pub use spectrum::{to_spectrum, to_waveform, to_waveform_with_residue, SignConvention, Spectrum};

use crate::constants::{C0, EPS0, MU0};
use crate::error::{Error, Result};
use crate::waveform::{FieldComponent, FieldWaveform};
use num_complex::Complex64;

/// Default zero-padding factor for chain filtering. The ground impulse
/// responses have long low-frequency tails; 16x padding keeps the circular
/// wrap-around below 0.1% of the output peak ahead of the first arrival.
pub const DEFAULT_PAD_FACTOR: usize = 16;

/// Relative imaginary residue allowed after the inverse transform.
pub const MAX_IMAG_RESIDUE: f64 = 1e-9;

/// Electrical ground description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroundModel {
    /// Perfect electric conductor.
    Pec,
    /// Homogeneous half-space with conductivity sigma (S/m) and relative
    /// permittivity eps_r.
    Lossy { sigma: f64, eps_r: f64 },
}

impl GroundModel {
    pub fn lossy(sigma: f64, eps_r: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("sigma must be > 0, got {sigma}")));
        }
        if !(eps_r >= 1.0) {
            return Err(Error::Domain(format!("eps_r must be >= 1, got {eps_r}")));
        }
        Ok(GroundModel::Lossy { sigma, eps_r })
    }

    pub fn is_pec(&self) -> bool {
        matches!(self, GroundModel::Pec)
    }
}

/// Complex relative permittivity eps_c(f) = eps_r - j sigma/(2 pi f eps0)
/// under the e^{+j omega t} convention.
pub fn complex_permittivity(g: &GroundModel, f: f64) -> Result<Complex64> {
    let (sigma, eps_r) = match g {
        GroundModel::Lossy { sigma, eps_r } => (*sigma, *eps_r),
        GroundModel::Pec => {
            return Err(Error::Domain(
                "complex permittivity is undefined for PEC ground".into(),
            ))
        }
    };
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "complex permittivity is singular at f = {f}"
        )));
    }
    let omega = 2.0 * std::f64::consts::PI * f;
    Ok(Complex64::new(eps_r, -sigma / (omega * EPS0)))
}

fn require_lossy(g: &GroundModel, what: &str) -> Result<()> {
    if g.is_pec() {
        return Err(Error::Config(format!("{what} requires a lossy ground model")));
    }
    Ok(())
}

/// Ground-wave attenuation (Norton) applied to a vertical-field spectrum over
/// PEC, turning it into the field over lossy ground at distance `r`.
/// Numerical distance: p(f) = -j (omega r / 2c) / eps_c(f). The DC bin passes
/// unchanged. Non-finite attenuation values fall back to the asymptotic
/// series rather than propagating.
pub fn attenuation_filter(s: &Spectrum, r: f64, g: &GroundModel) -> Result<Spectrum> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("distance must be > 0, got {r}")));
    }
    require_lossy(g, "attenuation filter")?;
    let mut out = s.clone();
    for k in 1..out.values.len() {
        let f = out.frequency(k);
        let omega = 2.0 * std::f64::consts::PI * f;
        let eps_c = complex_permittivity(g, f)?;
        let p = Complex64::new(0.0, -omega * r / (2.0 * C0)) / eps_c;
        let mut att = norton_attenuation(p);
        if !att.re.is_finite() || !att.im.is_finite() {
            att = norton_attenuation_asymptotic(p);
        }
        out.values[k] *= att;
    }
    Ok(out)
}

/// Wave tilt: E_x(f) = E_z(f) / sqrt(eps_c(f)) with the principal branch
/// (Re > 0). The DC bin is zeroed: a static vertical field over a conductor
/// has no tangential surface component.
pub fn wave_tilt(s: &Spectrum, g: &GroundModel) -> Result<Spectrum> {
    require_lossy(g, "wave tilt")?;
    let mut out = s.clone();
    out.component = FieldComponent::Ex;
    out.values[0] = Complex64::new(0.0, 0.0);
    for k in 1..out.values.len() {
        let eps_c = complex_permittivity(g, out.frequency(k))?;
        out.values[k] /= eps_c.sqrt();
    }
    Ok(out)
}

/// Cooray-Rubinstein horizontal field over lossy ground:
/// E_r(f) = E_r,PEC(f) - c mu0 H_phi,PEC(f) / sqrt(eps_c(f)).
/// The correction vanishes as f -> 0, so the DC bin keeps E_r,PEC.
pub fn cooray_rubinstein(s_er: &Spectrum, s_h: &Spectrum, g: &GroundModel) -> Result<Spectrum> {
    require_lossy(g, "Cooray-Rubinstein correction")?;
    if !s_er.same_grid(s_h) {
        return Err(Error::Mismatch(
            "E_r and H_phi spectra must share the same timebase and padding".into(),
        ));
    }
    let mut out = s_er.clone();
    out.component = FieldComponent::Er;
    for k in 1..out.values.len() {
        let eps_c = complex_permittivity(g, out.frequency(k))?;
        out.values[k] -= C0 * MU0 * s_h.values[k] / eps_c.sqrt();
    }
    Ok(out)
}

/// Underground decay of the horizontal surface field:
/// multiplication by exp(-gamma(f) d), gamma = sqrt(j omega mu0 (sigma +
/// j omega eps0 eps_r)), principal branch Re(gamma) > 0. DC passes unchanged.
/// The approximation is intended for sigma >= 1 mS/m; lower conductivities
/// log a warning.
pub fn weyl_underground(s: &Spectrum, depth: f64, g: &GroundModel) -> Result<Spectrum> {
    if depth < 0.0 {
        return Err(Error::Domain(format!("depth must be >= 0, got {depth}")));
    }
    require_lossy(g, "underground decay")?;
    if let GroundModel::Lossy { sigma, .. } = g {
        if *sigma < 1e-3 {
            log::warn!(
                "underground decay is a good approximation only for sigma >= 1 mS/m (got {sigma} S/m)"
            );
        }
    }
    let (sigma, eps_r) = match g {
        GroundModel::Lossy { sigma, eps_r } => (*sigma, *eps_r),
        GroundModel::Pec => unreachable!(),
    };
    let mut out = s.clone();
    for k in 1..out.values.len() {
        let omega = 2.0 * std::f64::consts::PI * out.frequency(k);
        let gamma = (Complex64::new(0.0, omega * MU0)
            * Complex64::new(sigma, omega * EPS0 * eps_r))
        .sqrt();
        out.values[k] *= (-gamma * depth).exp();
    }
    Ok(out)
}

/// One step of the filter chain.
#[derive(Debug, Clone)]
pub enum ChainStep {
    /// Norton ground-wave attenuation (PEC E_z -> lossy E_z).
    Attenuation,
    /// Wave tilt (lossy E_z -> surface E_x).
    WaveTilt,
    /// Cooray-Rubinstein correction; needs the PEC H_phi surface waveform.
    /// Within a chain, filters preceding this step are applied to the
    /// auxiliary H_phi spectrum as well, so the correction term describes the
    /// same propagation path as the field it corrects.
    CoorayRubinstein { h_phi: FieldWaveform },
    /// Underground decay at the given depth (m).
    Weyl { depth_m: f64 },
}

impl ChainStep {
    /// Pipeline stage used for order validation: attenuation (0) before the
    /// tilt/Cooray-Rubinstein rotation (1) before underground decay (2).
    fn stage(&self) -> u8 {
        match self {
            ChainStep::Attenuation => 0,
            ChainStep::WaveTilt | ChainStep::CoorayRubinstein { .. } => 1,
            ChainStep::Weyl { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChainStep::Attenuation => "attenuation",
            ChainStep::WaveTilt => "wave_tilt",
            ChainStep::CoorayRubinstein { .. } => "cooray_rubinstein",
            ChainStep::Weyl { .. } => "weyl",
        }
    }
}

fn validate_chain(steps: &[ChainStep]) -> Result<()> {
    let mut last_stage = 0u8;
    let mut seen = [false; 3];
    for step in steps {
        let stage = step.stage();
        if stage < last_stage {
            return Err(Error::Config(format!(
                "chain step '{}' cannot follow a later-stage filter",
                step.name()
            )));
        }
        if stage < 2 && seen[stage as usize] {
            return Err(Error::Config(format!(
                "chain step '{}' appears twice",
                step.name()
            )));
        }
        seen[stage as usize] = true;
        last_stage = stage;
    }
    Ok(())
}

/// Run an ordered filter chain over a waveform: forward transform, per-step
/// spectral multiplication, inverse transform. The output must be real up to
/// `MAX_IMAG_RESIDUE` of its peak; the residue is discarded.
pub fn apply_chain(w: &FieldWaveform, steps: &[ChainStep], g: &GroundModel) -> Result<FieldWaveform> {
    validate_chain(steps)?;
    let mut spec = to_spectrum(w, DEFAULT_PAD_FACTOR)?;
    let mut attenuated = false;
    for step in steps {
        spec = match step {
            ChainStep::Attenuation => {
                attenuated = true;
                attenuation_filter(&spec, w.point.r, g)?
            }
            ChainStep::WaveTilt => wave_tilt(&spec, g)?,
            ChainStep::CoorayRubinstein { h_phi } => {
                let mut h_spec = to_spectrum(h_phi, DEFAULT_PAD_FACTOR)?;
                if attenuated {
                    h_spec = attenuation_filter(&h_spec, h_phi.point.r, g)?;
                }
                cooray_rubinstein(&spec, &h_spec, g)?
            }
            ChainStep::Weyl { depth_m } => weyl_underground(&spec, *depth_m, g)?,
        };
    }
    let (out, residue) = to_waveform_with_residue(&spec)?;
    if residue > MAX_IMAG_RESIDUE {
        return Err(Error::Domain(format!(
            "filtered waveform has imaginary residue {residue:.3e} of peak"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{heidler_current, HeidlerParams, MtleModel};
    use crate::reffields::{ez_pec, hphi_pec};
    use crate::waveform::{ObservationPoint, Timebase};

    fn lossy() -> GroundModel {
        GroundModel::lossy(1e-3, 10.0).unwrap()
    }

    fn base_current_waveform(dt: f64, n: usize) -> FieldWaveform {
        let p = HeidlerParams::typical_subsequent_stroke();
        let tb = Timebase::new(dt, n).unwrap();
        let vals = tb.times().map(|t| heidler_current(t, &p)).collect();
        FieldWaveform::new(
            FieldComponent::Ez,
            vals,
            tb,
            ObservationPoint::new(10_000.0, 0.0),
            "base",
        )
        .unwrap()
    }

    #[test]
    fn permittivity_examples() {
        let g = lossy();
        let e = complex_permittivity(&g, 1e6).unwrap();
        assert!((e.re - 10.0).abs() < 1e-9);
        assert!((e.im + 17.9751).abs() < 1e-3, "im = {}", e.im);
        // lossless limit
        let g2 = GroundModel::lossy(1e-12, 10.0).unwrap();
        let e2 = complex_permittivity(&g2, 1e6).unwrap();
        assert!(e2.im.abs() < 1e-4);
        // high-frequency limit
        let e3 = complex_permittivity(&g, 1e12).unwrap();
        assert!((e3.re - 10.0).abs() < 1e-9 && e3.im.abs() < 1e-3);
        assert!(complex_permittivity(&g, 0.0).is_err());
        assert!(complex_permittivity(&GroundModel::Pec, 1e6).is_err());
    }

    #[test]
    fn ground_model_validation() {
        assert!(GroundModel::lossy(0.0, 10.0).is_err());
        assert!(GroundModel::lossy(1e-3, 0.5).is_err());
    }

    #[test]
    fn attenuation_pec_limit() {
        // sigma -> large makes p -> 0 and the filter transparent; the
        // deviation |F - 1| ~ sqrt(pi p) grows with frequency, so check the
        // band that carries the waveform energy.
        let w = base_current_waveform(1e-8, 2048);
        let s = to_spectrum(&w, 2).unwrap();
        let g = GroundModel::lossy(1e5, 10.0).unwrap();
        let filtered = attenuation_filter(&s, 10_000.0, &g).unwrap();
        for (k, (a, b)) in s.values.iter().zip(&filtered.values).enumerate() {
            if s.frequency(k) <= 1e6 {
                assert!((a - b).norm() <= 1e-3 * a.norm().max(1e-12), "bin {k}");
            }
        }
        // and the time-domain output matches the input to well under 1% peak
        let out = apply_chain(&w, &[ChainStep::Attenuation], &g).unwrap();
        let peak = w.peak_abs();
        let max_dev = w
            .values
            .iter()
            .zip(&out.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 0.01 * peak, "max deviation {max_dev} vs peak {peak}");
    }

    #[test]
    fn attenuation_magnitude_bounded() {
        let w = base_current_waveform(1e-8, 2048);
        let s = to_spectrum(&w, 2).unwrap();
        let filtered = attenuation_filter(&s, 10_000.0, &lossy()).unwrap();
        for (k, (a, b)) in s.values.iter().zip(&filtered.values).enumerate() {
            assert!(b.norm() <= a.norm() * (1.0 + 1e-9), "bin {k}");
        }
        // DC untouched
        assert_eq!(s.values[0], filtered.values[0]);
    }

    #[test]
    fn wave_tilt_magnitude_example() {
        // |Ex/Ez| = 1/sqrt(|10 - 17.975j|) ~ 0.2205 at 1 MHz
        let w = base_current_waveform(1e-8, 4096);
        let s = to_spectrum(&w, 2).unwrap();
        let tilted = wave_tilt(&s, &lossy()).unwrap();
        let k = (1e6 / s.df).round() as usize;
        let ratio = tilted.values[k].norm() / s.values[k].norm();
        assert!((ratio - 0.2205).abs() < 1e-3, "ratio = {ratio}");
        assert_eq!(tilted.values[0], Complex64::new(0.0, 0.0));
        assert_eq!(tilted.component, FieldComponent::Ex);
    }

    #[test]
    fn wave_tilt_pec_limit_and_identity() {
        let w = base_current_waveform(1e-8, 1024);
        let s = to_spectrum(&w, 2).unwrap();
        // sigma huge: tangential field vanishes
        let g = GroundModel::lossy(1e5, 10.0).unwrap();
        let tilted = wave_tilt(&s, &g).unwrap();
        for (k, v) in tilted.values.iter().enumerate().skip(1) {
            assert!(v.norm() <= 1e-3 * s.values[k].norm().max(1e-12));
        }
        // eps_c = 1: identity
        let g1 = GroundModel::lossy(1e-15, 1.0).unwrap();
        let same = wave_tilt(&s, &g1).unwrap();
        for (a, b) in s.values.iter().zip(&same.values).skip(1) {
            assert!((a - b).norm() <= 1e-6 * a.norm().max(1e-12));
        }
    }

    #[test]
    fn cooray_rubinstein_limits() {
        let w = base_current_waveform(1e-8, 1024);
        let er = to_spectrum(&w, 2).unwrap();
        let h = to_spectrum(&w, 2).unwrap();
        // sigma huge: output equals E_r over PEC (correction ~ eta0/sqrt|eps_c|
        // grows with f, so check the energy-carrying band)
        let g = GroundModel::lossy(1e8, 10.0).unwrap();
        let out = cooray_rubinstein(&er, &h, &g).unwrap();
        for (k, (a, b)) in er.values.iter().zip(&out.values).enumerate() {
            if er.frequency(k) <= 1e6 {
                assert!((a - b).norm() <= 1e-3 * a.norm().max(1e-9), "bin {k}");
            }
        }
        // zero E_r: pure -eta0 H / sqrt(eps_c) term
        let zero = FieldWaveform::zeros(
            FieldComponent::Er,
            w.timebase,
            w.point,
            "z",
        );
        let zs = to_spectrum(&zero, 2).unwrap();
        let out2 = cooray_rubinstein(&zs, &h, &lossy()).unwrap();
        let k = 37;
        let eps_c = complex_permittivity(&lossy(), out2.frequency(k)).unwrap();
        let want = -C0 * MU0 * h.values[k] / eps_c.sqrt();
        assert!((out2.values[k] - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn cooray_rubinstein_grid_mismatch() {
        let a = to_spectrum(&base_current_waveform(1e-8, 1024), 2).unwrap();
        let b = to_spectrum(&base_current_waveform(1e-8, 512), 2).unwrap();
        assert!(cooray_rubinstein(&a, &b, &lossy()).is_err());
    }

    #[test]
    fn weyl_examples() {
        let w = base_current_waveform(1e-8, 2048);
        let s = to_spectrum(&w, 2).unwrap();
        // depth 0: identity
        let id = weyl_underground(&s, 0.0, &lossy()).unwrap();
        for (a, b) in s.values.iter().zip(&id.values) {
            assert_eq!(a, b);
        }
        // negative depth rejected
        assert!(weyl_underground(&s, -1.0, &lossy()).is_err());
        // skin-depth magnitude at 100 kHz: factor e^{-10/50.33} ~ 0.820,
        // and the full-gamma result matches the good-conductor value to 1%
        let down = weyl_underground(&s, 10.0, &lossy()).unwrap();
        let k = (1e5 / s.df).round() as usize;
        let factor = down.values[k].norm() / s.values[k].norm();
        let omega = 2.0 * std::f64::consts::PI * s.frequency(k);
        let delta = (2.0 / (omega * MU0 * 1e-3)).sqrt();
        let want = (-10.0 / delta).exp();
        assert!((factor - want).abs() < 0.01 * want, "factor {factor}, want {want}");
        // lossless ground: pure phase delay
        let g0 = GroundModel::lossy(1e-15, 10.0).unwrap();
        let phase = weyl_underground(&s, 10.0, &g0).unwrap();
        for (a, b) in s.values.iter().zip(&phase.values).skip(1) {
            assert!((a.norm() - b.norm()).abs() <= 1e-9 * a.norm().max(1e-12));
        }
    }

    #[test]
    fn chain_order_validation() {
        let g = lossy();
        let w = base_current_waveform(1e-8, 512);
        // weyl before wave_tilt is rejected
        let bad = [ChainStep::Weyl { depth_m: 10.0 }, ChainStep::WaveTilt];
        assert!(matches!(apply_chain(&w, &bad, &g), Err(Error::Config(_))));
        // duplicate attenuation is rejected
        let dup = [ChainStep::Attenuation, ChainStep::Attenuation];
        assert!(matches!(apply_chain(&w, &dup, &g), Err(Error::Config(_))));
        // attenuation after tilt is rejected
        let late = [ChainStep::WaveTilt, ChainStep::Attenuation];
        assert!(matches!(apply_chain(&w, &late, &g), Err(Error::Config(_))));
    }

    #[test]
    fn empty_chain_round_trip() {
        let w = base_current_waveform(1e-8, 900);
        let out = apply_chain(&w, &[], &lossy()).unwrap();
        let peak = w.peak_abs();
        for (a, b) in w.values.iter().zip(&out.values) {
            assert!((a - b).abs() <= 1e-12 * peak);
        }
    }

    #[test]
    fn chain_depth_reduces_peak() {
        let m = MtleModel::default_subsequent_stroke();
        let tb = Timebase::new(1e-8, 4000).unwrap();
        let p = ObservationPoint::new(10_000.0, 0.0);
        let ez = ez_pec(&p, &m, &tb).unwrap();
        let g = lossy();
        let surface =
            apply_chain(&ez, &[ChainStep::Attenuation, ChainStep::WaveTilt], &g).unwrap();
        let buried = apply_chain(
            &ez,
            &[
                ChainStep::Attenuation,
                ChainStep::WaveTilt,
                ChainStep::Weyl { depth_m: 10.0 },
            ],
            &g,
        )
        .unwrap();
        assert!(buried.peak_abs() < surface.peak_abs());
        assert!(surface.peak_abs() > 0.0);
    }

    #[test]
    fn chain_output_causal() {
        let m = MtleModel::default_subsequent_stroke();
        let tb = Timebase::new(1e-8, 4000).unwrap();
        let p = ObservationPoint::new(10_000.0, 0.0);
        let ez = ez_pec(&p, &m, &tb).unwrap();
        let out = apply_chain(&ez, &[ChainStep::Attenuation, ChainStep::WaveTilt], &lossy())
            .unwrap();
        let first_arrival = p.r / C0;
        let peak = out.peak_abs();
        for (j, t) in tb.times().enumerate() {
            if t < first_arrival - 2.0 * tb.dt {
                assert!(
                    out.values[j].abs() < 1e-3 * peak,
                    "non-causal leakage {} at t = {t}",
                    out.values[j]
                );
            }
        }
    }

    #[test]
    fn dual_path_consistency_at_ten_km() {
        // wave-tilt route vs Cooray-Rubinstein route agree on the surface
        // horizontal field peak within 10%
        let m = MtleModel::default_subsequent_stroke();
        let tb = Timebase::new(1e-8, 4000).unwrap();
        let p = ObservationPoint::new(10_000.0, 0.0);
        let g = lossy();
        let ez = ez_pec(&p, &m, &tb).unwrap();
        let hphi = hphi_pec(&p, &m, &tb).unwrap();
        let tilt_path =
            apply_chain(&ez, &[ChainStep::Attenuation, ChainStep::WaveTilt], &g).unwrap();
        // E_r over PEC at the surface is identically zero; the chain applies
        // the attenuation step to the auxiliary H_phi spectrum
        let zero_er = FieldWaveform::zeros(FieldComponent::Er, tb, p, "");
        let cr_path = apply_chain(
            &zero_er,
            &[
                ChainStep::Attenuation,
                ChainStep::CoorayRubinstein { h_phi: hphi },
            ],
            &g,
        )
        .unwrap();
        let a = tilt_path.peak_abs();
        let b = cr_path.peak_abs();
        assert!((a - b).abs() / a < 0.10, "tilt {a} vs CR {b}");
    }

    #[test]
    fn heidler_spectrum_minus_3db() {
        // Frozen oracle: with the default 60 us reference window the -3 dB
        // point of |I(f)|/|I(0)| falls at 9.2 kHz (window-limited; the
        // untruncated waveform would roll off near 1/(2 pi tau22) ~ 0.7 kHz).
        let w = base_current_waveform(1e-8, 6000);
        let s = to_spectrum(&w, 4).unwrap();
        let dc = s.values[0].norm();
        let target = dc / 2.0f64.sqrt();
        let k = s.values.iter().position(|v| v.norm() < target).unwrap();
        let f3 = s.frequency(k);
        assert!((f3 - 9.2e3).abs() < 0.5e3, "-3dB at {f3}");
    }
}
