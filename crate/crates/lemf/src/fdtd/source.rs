//! Impressed MTLE line-current source on the channel axis.
//!
//! Each axis cell row whose vertical-E sample center lies inside the channel
//! carries the impressed current i(z', t); the injection adds
//! -I dt / (eps0 A) to the colocated vertical E component, with A the cell
//! cross-section perpendicular to the channel (pi (dx/2)^2 for the
//! axisymmetric axis cell, dx^2 in the Cartesian lattice).
//!
//! The per-step current sample is the trapezoidal average
//! (i(t_n) + i(t_{n+1})) / 2, centered at the half step like the rest of the
//! E update; summed over a run it reproduces the trapezoidal charge integral
//! of the base current exactly.

use super::FdtdSetup;
use crate::channel::MtleModel;
use crate::constants::EPS0;
use crate::error::{Error, Result};

pub(crate) struct ChannelSource {
    pub model: MtleModel,
    /// (vertical E row index, current evaluation height z').
    pub rows: Vec<(usize, f64)>,
    /// Index into `rows` of the channel-base cell.
    pub base_row: Option<usize>,
    /// -dt / (eps0 * A_cell); multiply by the current sample for the E add.
    pub inject_scale: f64,
    /// Previous-step current per row (trapezoidal pairing).
    prev: Vec<f64>,
    /// Accumulated charge through the base cell (A s).
    pub charge_base: f64,
    dt: f64,
    enabled: bool,
}

impl ChannelSource {
    /// Lay the channel onto vertical-E rows k = 0..nz (sample centers at
    /// (k - kg + 1/2) dx relative to the ground plane).
    pub fn build(setup: &FdtdSetup, nz: usize, area: f64) -> Result<Self> {
        let grid = &setup.grid;
        let dx = grid.dx;
        let kg = grid.ground_level_index();
        let model = setup.model.clone();
        let h = model.channel_height;
        let pml_top = setup.pml.thickness[if grid.spatial_dims() == 2 { 1 } else { 2 }][1];

        let mut rows = Vec::new();
        let mut base_row = None;
        for k in 0..nz {
            let z_c = (k as f64 - kg as f64 + 0.5) * dx;
            if z_c > 0.0 && z_c <= h {
                if z_c <= dx {
                    base_row = Some(rows.len());
                }
                rows.push((k, z_c));
            }
            if setup.mirror_channel && z_c < 0.0 && -z_c <= h {
                rows.push((k, -z_c));
            }
        }
        if setup.source_enabled && rows.is_empty() {
            return Err(Error::Config("channel does not intersect the grid".into()));
        }
        if setup.source_enabled {
            let top_cell = (nz as f64 - pml_top as f64) * dx - kg as f64 * dx;
            if h > top_cell {
                return Err(Error::Config(format!(
                    "channel height {h} m exceeds the domain above ground minus the top CPML ({top_cell} m)"
                )));
            }
        }
        let n_rows = rows.len();
        Ok(Self {
            model,
            rows,
            base_row,
            inject_scale: -grid.dt / (EPS0 * area),
            prev: vec![0.0; n_rows],
            charge_base: 0.0,
            dt: grid.dt,
            enabled: setup.source_enabled,
        })
    }

    /// Per-row E-field increments for the step starting at time `t`.
    /// Returns (row index, delta E).
    pub fn step_injection(&mut self, t: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        let enabled = self.enabled;
        let t_next = t + self.dt;
        let model = &self.model;
        let scale = self.inject_scale;
        let dt = self.dt;
        let base = self.base_row;
        let charge = &mut self.charge_base;
        self.rows
            .iter()
            .zip(self.prev.iter_mut())
            .enumerate()
            .filter(move |_| enabled)
            .map(move |(idx, (&(row, z), prev))| {
                let next = model.current_unchecked(z, t_next);
                let avg = 0.5 * (*prev + next);
                *prev = next;
                if Some(idx) == base {
                    *charge += avg * dt;
                }
                (row, scale * avg)
            })
    }

    pub fn area_for(setup: &FdtdSetup) -> f64 {
        match setup.grid.spatial_dims() {
            2 => std::f64::consts::PI * (setup.grid.dx / 2.0) * (setup.grid.dx / 2.0),
            _ => setup.grid.dx * setup.grid.dx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdtd::{CpmlProfile, GridSpec, SimGround};

    fn setup(h: f64, z_max: f64) -> FdtdSetup {
        let mut model = MtleModel::default_subsequent_stroke();
        model.channel_height = h;
        let grid = GridSpec::axi2d(10.0, 500.0, 0.0, z_max, 0.9, 100).unwrap();
        FdtdSetup::new(model, SimGround::Pec, grid, CpmlProfile::default_profile())
    }

    #[test]
    fn rows_cover_channel() {
        let s = setup(480.0, 1000.0);
        let src = ChannelSource::build(&s, 100, 1.0).unwrap();
        // z' = 5, 15, ..., 475: 48 rows
        assert_eq!(src.rows.len(), 48);
        assert_eq!(src.rows[0], (0, 5.0));
        assert_eq!(src.base_row, Some(0));
    }

    #[test]
    fn channel_must_fit_below_pml() {
        let s = setup(950.0, 1000.0); // top PML eats 100 m
        assert!(ChannelSource::build(&s, 100, 1.0).is_err());
    }

    #[test]
    fn zero_at_t_zero_and_causal() {
        let s = setup(480.0, 1000.0);
        let mut src = ChannelSource::build(&s, 100, 1.0).unwrap();
        // first step starts at t = 0: the trapezoidal average uses
        // I(0) = 0 and I(dt); rows above the front stay exactly zero
        let dt = s.grid.dt;
        let inj: Vec<(usize, f64)> = src.step_injection(0.0).collect();
        for &(row, dv) in &inj {
            let z = (row as f64 + 0.5) * 10.0;
            if z / 1.5e8 > dt {
                assert_eq!(dv, 0.0, "row {row} ahead of the front must be silent");
            }
        }
        // base row gets half of I(dt) scaled
        let want = 0.5 * crate::channel::heidler_current(dt - 5.0 / 1.5e8, &s.model.base);
        assert!((inj[0].1 - src.inject_scale * want).abs() <= 1e-12 * want.abs());
    }

    #[test]
    fn charge_bookkeeping_matches_trapezoid() {
        let s = setup(480.0, 1000.0);
        let mut src = ChannelSource::build(&s, 100, 1.0).unwrap();
        let dt = s.grid.dt;
        let n = 4000;
        for step in 0..n {
            let _ = src.step_injection(step as f64 * dt).count();
        }
        // trapezoid of the same base-row current on the same grid
        let z = 5.0;
        let vals: Vec<f64> = (0..=n)
            .map(|k| s.model.current_unchecked(z, k as f64 * dt))
            .collect();
        let want = crate::util::trapezoid(&vals, dt);
        let got = src.charge_base;
        assert!(
            (got - want).abs() <= 1e-6 * want.abs(),
            "charge {got} vs trapezoid {want}"
        );
    }
}
