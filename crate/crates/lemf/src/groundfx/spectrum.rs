//! Spectral representation of field waveforms.
//!
//! Sign convention is e^{+j omega t} project-wide: the forward transform uses
//! the e^{-j omega t} kernel, so a lossy medium has eps_c = eps_r - j
//! sigma/(omega eps0). Only nonnegative-frequency bins are stored; the
//! inverse transform rebuilds the negative bins by conjugate symmetry, which
//! encodes the real-impulse-response assumption for every filter.

use crate::error::{Error, Result};
use crate::waveform::{FieldComponent, FieldWaveform, ObservationPoint, Timebase};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Marker for the phasor convention the spectrum was built under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// Time dependence e^{+j omega t}; forward kernel e^{-j omega t}.
    ExpPlusJOmegaT,
}

/// One-sided spectrum of a real waveform (bins 0 ..= n_fft/2).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    /// Frequency resolution (Hz); bin k sits at k * df.
    pub df: f64,
    /// Sample interval of the originating waveform (s).
    pub dt: f64,
    /// Length of the originating waveform.
    pub n_time: usize,
    /// Zero-padded transform length.
    pub n_fft: usize,
    pub component: FieldComponent,
    pub point: ObservationPoint,
    pub scenario_id: String,
    pub convention: SignConvention,
}

impl Spectrum {
    /// Frequency of bin `k` (Hz).
    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.df
    }

    /// True when two spectra share the same frequency grid and time origin.
    pub fn same_grid(&self, other: &Spectrum) -> bool {
        self.n_fft == other.n_fft && self.n_time == other.n_time && self.dt == other.dt
    }
}

/// Forward transform with zero padding; `pad_factor` >= 2 suppresses circular
/// wrap-around of the filtered tails.
pub fn to_spectrum(w: &FieldWaveform, pad_factor: usize) -> Result<Spectrum> {
    if pad_factor < 2 {
        return Err(Error::Config(format!(
            "pad_factor must be >= 2, got {pad_factor}"
        )));
    }
    let n = w.values.len();
    if n < 2 {
        return Err(Error::Domain("waveform too short to transform".into()));
    }
    let n_fft = (pad_factor * n).next_power_of_two();
    let mut buf: Vec<Complex64> = w
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(n_fft)
        .collect();
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    buf.truncate(n_fft / 2 + 1);
    Ok(Spectrum {
        values: buf,
        df: 1.0 / (n_fft as f64 * w.timebase.dt),
        dt: w.timebase.dt,
        n_time: n,
        n_fft,
        component: w.component,
        point: w.point,
        scenario_id: w.scenario_id.clone(),
        convention: SignConvention::ExpPlusJOmegaT,
    })
}

/// Inverse transform back onto the originating timebase. Returns the waveform
/// and the largest imaginary residue of the reconstruction (relative to the
/// peak), which the chain driver checks against its tolerance.
///
/// The DC and Nyquist bins are shared between positive and negative
/// frequencies, so a real impulse response constrains them to be real; their
/// imaginary parts contribute nothing to the real output and are dropped
/// (the same convention as a real-input inverse FFT).
pub fn to_waveform_with_residue(s: &Spectrum) -> Result<(FieldWaveform, f64)> {
    let n_fft = s.n_fft;
    let half = n_fft / 2;
    if s.values.len() != half + 1 {
        return Err(Error::Mismatch(format!(
            "spectrum has {} bins, expected {}",
            s.values.len(),
            half + 1
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    buf[..=half].copy_from_slice(&s.values);
    buf[0] = Complex64::new(s.values[0].re, 0.0);
    buf[half] = Complex64::new(s.values[half].re, 0.0);
    for k in 1..half {
        buf[n_fft - k] = s.values[k].conj();
    }
    FftPlanner::new().plan_fft_inverse(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    let mut peak = 0.0f64;
    let mut residue = 0.0f64;
    let mut values = Vec::with_capacity(s.n_time);
    for b in buf.iter().take(s.n_time) {
        let re = b.re * scale;
        values.push(re);
        peak = peak.max(re.abs());
        residue = residue.max((b.im * scale).abs());
    }
    let rel_residue = if peak > 0.0 { residue / peak } else { residue };
    let tb = Timebase::new(s.dt, s.n_time)?;
    Ok((
        FieldWaveform::new(s.component, values, tb, s.point, s.scenario_id.clone())?,
        rel_residue,
    ))
}

/// Inverse transform, discarding the imaginary residue.
pub fn to_waveform(s: &Spectrum) -> Result<FieldWaveform> {
    to_waveform_with_residue(s).map(|(w, _)| w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wf(values: Vec<f64>, dt: f64) -> FieldWaveform {
        let tb = Timebase::new(dt, values.len()).unwrap();
        FieldWaveform::new(
            FieldComponent::Ez,
            values,
            tb,
            ObservationPoint::new(1000.0, 0.0),
            "t",
        )
        .unwrap()
    }

    #[test]
    fn pad_factor_validated() {
        let w = wf(vec![0.0, 1.0, 0.0, -1.0], 1e-8);
        assert!(to_spectrum(&w, 1).is_err());
        assert!(to_spectrum(&w, 2).is_ok());
    }

    #[test]
    fn zero_waveform_round_trip() {
        let w = wf(vec![0.0; 64], 1e-8);
        let s = to_spectrum(&w, 2).unwrap();
        assert!(s.values.iter().all(|v| v.norm() == 0.0));
        let (back, residue) = to_waveform_with_residue(&s).unwrap();
        assert!(back.values.iter().all(|&v| v == 0.0));
        assert_eq!(residue, 0.0);
    }

    #[test]
    fn unit_impulse_flat_magnitude() {
        let mut v = vec![0.0; 128];
        v[5] = 1.0;
        let s = to_spectrum(&wf(v, 1e-8), 2).unwrap();
        for (k, val) in s.values.iter().enumerate() {
            assert!((val.norm() - 1.0).abs() < 1e-12, "bin {k}");
            // linear phase: -2 pi k * 5 / n_fft
            let want = -2.0 * std::f64::consts::PI * k as f64 * 5.0 / s.n_fft as f64;
            let diff = (val.arg() - want).rem_euclid(2.0 * std::f64::consts::PI);
            assert!(diff < 1e-9 || diff > 2.0 * std::f64::consts::PI - 1e-9);
        }
    }

    #[test]
    fn parseval_energy_preserved() {
        let v: Vec<f64> = (0..500)
            .map(|k| ((k as f64) * 0.05).sin() * (-(k as f64) * 0.01).exp())
            .collect();
        let w = wf(v, 1e-8);
        let time_energy: f64 = w.values.iter().map(|v| v * v).sum();
        let s = to_spectrum(&w, 2).unwrap();
        let mut spec_energy = 0.0;
        for (k, val) in s.values.iter().enumerate() {
            let weight = if k == 0 || k == s.n_fft / 2 { 1.0 } else { 2.0 };
            spec_energy += weight * val.norm_sqr();
        }
        spec_energy /= s.n_fft as f64;
        assert!(
            (time_energy - spec_energy).abs() <= 1e-10 * time_energy,
            "{time_energy} vs {spec_energy}"
        );
    }

    proptest! {
        #[test]
        fn round_trip_identity(seed in 0u64..1000, n in 8usize..300) {
            let vals: Vec<f64> = (0..n)
                .map(|k| {
                    let x = (k as u64).wrapping_mul(6364136223846793005).wrapping_add(seed);
                    ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
                })
                .collect();
            let w = wf(vals, 1e-8);
            let s = to_spectrum(&w, 2).unwrap();
            let (back, residue) = to_waveform_with_residue(&s).unwrap();
            let peak = w.peak_abs().max(1e-300);
            for (a, b) in w.values.iter().zip(&back.values) {
                prop_assert!((a - b).abs() <= 1e-12 * peak);
            }
            prop_assert!(residue <= 1e-12);
        }
    }
}
