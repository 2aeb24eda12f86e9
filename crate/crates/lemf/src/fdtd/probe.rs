//! Probe recording shared by the kernels.
//!
//! E components are sampled after each full step (t = (n+1) dt); H lives on
//! half steps, so consecutive raw samples are averaged onto integer steps.
//! Sample 0 of every waveform is the zero initial state.

use super::ProbeSpec;
use crate::error::Result;
use crate::waveform::{FieldComponent, FieldWaveform, Timebase};

pub(crate) struct ProbeRecorder {
    pub spec: ProbeSpec,
    /// Fractional grid coordinates into the component's array.
    pub gi: f64,
    pub gj: f64,
    pub gk: f64,
    pub raw: Vec<f64>,
}

impl ProbeRecorder {
    pub fn is_h(&self) -> bool {
        matches!(self.spec.component, FieldComponent::Hphi)
    }

    pub fn waveform(&self, tb: Timebase) -> Result<FieldWaveform> {
        let steps = tb.n_samples - 1;
        debug_assert!(self.raw.len() >= steps);
        let mut values = Vec::with_capacity(tb.n_samples);
        values.push(0.0);
        if self.is_h() {
            for j in 1..steps {
                values.push(0.5 * (self.raw[j - 1] + self.raw[j]));
            }
            if steps > 0 {
                // final half-step sample stands in for the last integer step
                values.push(self.raw[steps - 1]);
            }
        } else {
            values.extend_from_slice(&self.raw[..steps]);
        }
        FieldWaveform::new(self.spec.component, values, tb, self.spec.point, "")
    }
}

/// Bilinear interpolation on a row-major [rows x width] f32 array.
pub(crate) fn bilinear(data: &[f32], width: usize, rows: usize, gi: f64, gk: f64) -> f64 {
    let i0 = (gi.floor() as isize).clamp(0, width as isize - 2) as usize;
    let k0 = (gk.floor() as isize).clamp(0, rows as isize - 2) as usize;
    let fi = (gi - i0 as f64).clamp(0.0, 1.0);
    let fk = (gk - k0 as f64).clamp(0.0, 1.0);
    let at = |i: usize, k: usize| data[k * width + i] as f64;
    at(i0, k0) * (1.0 - fi) * (1.0 - fk)
        + at(i0 + 1, k0) * fi * (1.0 - fk)
        + at(i0, k0 + 1) * (1.0 - fi) * fk
        + at(i0 + 1, k0 + 1) * fi * fk
}

/// Trilinear interpolation on a [nz x ny x nx]-shaped f32 array
/// (x fastest).
#[allow(clippy::too_many_arguments)]
pub(crate) fn trilinear(
    data: &[f32],
    nx: usize,
    ny: usize,
    nz: usize,
    gi: f64,
    gj: f64,
    gk: f64,
) -> f64 {
    let i0 = (gi.floor() as isize).clamp(0, nx as isize - 2) as usize;
    let j0 = (gj.floor() as isize).clamp(0, ny as isize - 2) as usize;
    let k0 = (gk.floor() as isize).clamp(0, nz as isize - 2) as usize;
    let fi = (gi - i0 as f64).clamp(0.0, 1.0);
    let fj = (gj - j0 as f64).clamp(0.0, 1.0);
    let fk = (gk - k0 as f64).clamp(0.0, 1.0);
    let at = |i: usize, j: usize, k: usize| data[(k * ny + j) * nx + i] as f64;
    let mut acc = 0.0;
    for (dk, wk) in [(0, 1.0 - fk), (1, fk)] {
        for (dj, wj) in [(0, 1.0 - fj), (1, fj)] {
            for (di, wi) in [(0, 1.0 - fi), (1, fi)] {
                acc += wi * wj * wk * at(i0 + di, j0 + dj, k0 + dk);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::ObservationPoint;

    #[test]
    fn bilinear_exact_at_nodes_and_midpoints() {
        // f(i, k) = 2i + 3k is reproduced exactly by bilinear interpolation
        let width = 4;
        let rows = 3;
        let data: Vec<f32> = (0..rows)
            .flat_map(|k| (0..width).map(move |i| (2 * i + 3 * k) as f32))
            .collect();
        assert_eq!(bilinear(&data, width, rows, 1.0, 1.0), 5.0);
        assert_eq!(bilinear(&data, width, rows, 1.5, 0.5), 4.5);
        assert_eq!(bilinear(&data, width, rows, 2.25, 1.75), 9.75);
    }

    #[test]
    fn h_probe_averages_half_steps() {
        let mut rec = ProbeRecorder {
            spec: ProbeSpec {
                point: ObservationPoint::new(100.0, 5.0),
                component: FieldComponent::Hphi,
            },
            gi: 0.0,
            gj: 0.0,
            gk: 0.0,
            raw: vec![2.0, 4.0, 6.0],
        };
        let tb = Timebase::new(1e-9, 4).unwrap();
        let w = rec.waveform(tb).unwrap();
        assert_eq!(w.values, vec![0.0, 3.0, 5.0, 6.0]);
        rec.spec.component = FieldComponent::Ez;
        let w = rec.waveform(tb).unwrap();
        assert_eq!(w.values, vec![0.0, 2.0, 4.0, 6.0]);
    }
}
