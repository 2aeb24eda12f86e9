//! Semi-analytical reference engine: sums the fields of differential current
//! dipoles (with perfect-ground images) along the MTLE channel.
//!
//! For a dipole of length dz' at height z' carrying i(z', t), with
//! R = sqrt(r^2 + (z - z')^2) and retarded time t - R/c:
//!
//! ```text
//! Ez = 1/(4 pi eps0) * dz' * [ (2(z-z')^2 - r^2)/R^5 * integral(i)
//!                            + (2(z-z')^2 - r^2)/(c R^4) * i
//!                            - r^2/(c^2 R^3) * di/dt ]
//! Hphi = 1/(4 pi) * dz' * [ r/R^3 * i + r/(c R^2) * di/dt ]
//! ```
//!
//! The image contribution repeats each term with z' -> -z' (current
//! unchanged), which doubles the fields at ground level. Retarded times are
//! interpolated linearly onto the timebase and the current integral uses a
//! cumulative trapezoid.

use crate::channel::{heidler_current, heidler_current_derivative, MtleModel};
use crate::constants::{C0, EPS0};
use crate::error::{Error, Result};
use crate::util::cumulative_trapezoid;
use crate::waveform::{FieldComponent, FieldWaveform, ObservationPoint, Timebase};
use rayon::prelude::*;

/// Midpoint segmentation of the channel [0, H].
#[derive(Debug, Clone)]
pub struct ChannelQuadrature {
    /// Segment length (m).
    pub dz_seg: f64,
    /// Segment midpoints z'_k = (k + 1/2) * dz_seg.
    pub midpoints: Vec<f64>,
}

impl ChannelQuadrature {
    /// Segmentation with an explicit target segment length. The length is
    /// rounded down so an integer number of segments covers [0, H] exactly.
    pub fn with_dz(model: &MtleModel, dz_seg: f64) -> Result<Self> {
        let h = model.channel_height;
        if !(dz_seg > 0.0) || dz_seg >= h {
            return Err(Error::Config(format!(
                "segment length {dz_seg} m must be in (0, H = {h} m)"
            )));
        }
        let n = (h / dz_seg).ceil() as usize;
        let dz = h / n as f64;
        let midpoints = (0..n).map(|k| (k as f64 + 0.5) * dz).collect();
        Ok(Self { dz_seg: dz, midpoints })
    }
}

/// Default segmentation rule: dz <= min(lambda/50, v*dt). The v*dt bound keeps
/// adjacent segments' front arrivals within one time sample of each other.
pub fn quadrature_spec(model: &MtleModel, tb: &Timebase) -> Result<ChannelQuadrature> {
    let dz = (model.lambda_decay / 50.0).min(model.v_front * tb.dt);
    ChannelQuadrature::with_dz(model, dz)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FieldKind {
    Ez,
    Hphi,
}

/// Options for the dipole sum; the defaults are what `ez_pec`/`hphi_pec` use.
#[derive(Debug, Clone, Default)]
pub struct DipoleSumOptions {
    /// Override the default segmentation.
    pub quadrature: Option<ChannelQuadrature>,
    /// Drop the image terms (used by the image-symmetry check).
    pub skip_image: bool,
}

/// Vertical electric field over perfectly conducting ground.
pub fn ez_pec(point: &ObservationPoint, model: &MtleModel, tb: &Timebase) -> Result<FieldWaveform> {
    dipole_sum(FieldKind::Ez, point, model, tb, &DipoleSumOptions::default())
}

/// Azimuthal magnetic field over perfectly conducting ground.
pub fn hphi_pec(point: &ObservationPoint, model: &MtleModel, tb: &Timebase) -> Result<FieldWaveform> {
    dipole_sum(FieldKind::Hphi, point, model, tb, &DipoleSumOptions::default())
}

/// `ez_pec` with explicit options.
pub fn ez_pec_with(
    point: &ObservationPoint,
    model: &MtleModel,
    tb: &Timebase,
    opts: &DipoleSumOptions,
) -> Result<FieldWaveform> {
    dipole_sum(FieldKind::Ez, point, model, tb, opts)
}

/// `hphi_pec` with explicit options.
pub fn hphi_pec_with(
    point: &ObservationPoint,
    model: &MtleModel,
    tb: &Timebase,
    opts: &DipoleSumOptions,
) -> Result<FieldWaveform> {
    dipole_sum(FieldKind::Hphi, point, model, tb, opts)
}

fn dipole_sum(
    kind: FieldKind,
    point: &ObservationPoint,
    model: &MtleModel,
    tb: &Timebase,
    opts: &DipoleSumOptions,
) -> Result<FieldWaveform> {
    if !(point.r > 0.0) {
        return Err(Error::Domain(
            "reference fields are singular on the channel axis (r must be > 0)".into(),
        ));
    }
    if point.z < 0.0 {
        return Err(Error::Domain(
            "reference fields are defined above ground (z must be >= 0)".into(),
        ));
    }
    let quad = match &opts.quadrature {
        Some(q) => q.clone(),
        None => quadrature_spec(model, tb)?,
    };

    let n = tb.n_samples;
    let dt = tb.dt;

    // Base-current series on the timebase; every segment is a shifted, scaled
    // copy, so interpolating these three arrays covers the whole channel.
    let base: Vec<f64> = tb.times().map(|t| heidler_current(t, &model.base)).collect();
    let dbase: Vec<f64> = tb
        .times()
        .map(|t| heidler_current_derivative(t, &model.base))
        .collect();
    let ibase = cumulative_trapezoid(&base, dt);

    // MTLE fronts carry zero current (Heidler current starts at 0), so no
    // front-discontinuity term is needed; asserted by tests at the front
    // sample.
    let accumulate_segment =
        |acc: &mut [f64], z_prime: f64, branch_z: f64, decay: f64, dz: f64| {
            let dz_off = point.z - branch_z;
            let r2 = point.r * point.r;
            let big_r = (r2 + dz_off * dz_off).sqrt();
            let delay = big_r / C0 + z_prime / model.v_front;
            let shift = delay / dt;
            let s = shift.floor() as usize;
            let frac = shift - s as f64;
            let r3 = big_r.powi(3);
            let r4 = r3 * big_r;
            let r5 = r4 * big_r;
            let (g_int, g_cur, g_der) = match kind {
                FieldKind::Ez => {
                    let a2 = 2.0 * dz_off * dz_off - r2;
                    (a2 / r5, a2 / (C0 * r4), -r2 / (C0 * C0 * r3))
                }
                FieldKind::Hphi => (0.0, point.r / r3, point.r / (C0 * big_r * big_r)),
            };
            let w = decay * dz;
            // Sample j needs base quantities at (j - shift) * dt, linearly
            // interpolated between indices j-s-1 and j-s (0 before onset).
            for j in s..n {
                let hi = j - s;
                let lo_val = |x: &[f64]| if hi == 0 { 0.0 } else { x[hi - 1] };
                let cur = base[hi] * (1.0 - frac) + lo_val(&base) * frac;
                let der = dbase[hi] * (1.0 - frac) + lo_val(&dbase) * frac;
                let v = match kind {
                    FieldKind::Ez => {
                        let int = ibase[hi] * (1.0 - frac) + lo_val(&ibase) * frac;
                        g_int * int + g_cur * cur + g_der * der
                    }
                    FieldKind::Hphi => g_cur * cur + g_der * der,
                };
                acc[j] += w * v;
            }
        };

    // Parallel over fixed-size chunks of segments; the ordered sequential
    // reduction keeps the summation order independent of the thread count.
    let chunk = 64;
    let partials: Vec<Vec<f64>> = quad
        .midpoints
        .par_chunks(chunk)
        .map(|mids| {
            let mut acc = vec![0.0f64; n];
            for &zp in mids {
                let decay = (-zp / model.lambda_decay).exp();
                accumulate_segment(&mut acc, zp, zp, decay, quad.dz_seg);
                if !opts.skip_image {
                    accumulate_segment(&mut acc, zp, -zp, decay, quad.dz_seg);
                }
            }
            acc
        })
        .collect();

    let mut values = vec![0.0f64; n];
    for part in &partials {
        for (v, p) in values.iter_mut().zip(part) {
            *v += p;
        }
    }

    let scale = match kind {
        FieldKind::Ez => 1.0 / (4.0 * std::f64::consts::PI * EPS0),
        FieldKind::Hphi => 1.0 / (4.0 * std::f64::consts::PI),
    };
    for v in &mut values {
        *v *= scale;
    }

    FieldWaveform::new(
        match kind {
            FieldKind::Ez => FieldComponent::Ez,
            FieldKind::Hphi => FieldComponent::Hphi,
        },
        values,
        *tb,
        *point,
        "",
    )
}
