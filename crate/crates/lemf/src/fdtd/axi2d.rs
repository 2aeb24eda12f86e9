//! 2-D axisymmetric (r, z) Yee kernel for the TM set {E_r, E_z, H_phi}.
//!
//! Staggering (uniform dx, ground plane at z = 0, axis at r = 0):
//!
//! ```text
//! Ez[k][i]   at (i dx,        z_min + (k+1/2) dx)   rows nz,   width nr+1
//! Er[k][i]   at ((i+1/2) dx,  z_min + k dx)         rows nz+1, width nr
//! Hphi[k][i] at ((i+1/2) dx,  z_min + (k+1/2) dx)   rows nz,   width nr
//! ```
//!
//! The outermost stored E planes (Er at k = 0 and k = nz, Ez at i = nr) stay
//! zero: they are the PEC backing behind the absorbing layers, or the PEC
//! ground itself when z_min = 0. On the axis the r -> 0 limit of the curl
//! gives dEz/dt = 4 H_phi(dx/2) / (eps dx).

use super::cpml::{build_axis, AxisCpml};
use super::probe::{bilinear, ProbeRecorder};
use super::source::ChannelSource;
use super::{material_rows, FdtdSetup, MaterialRows, ProbeSpec, SimGround, StabilitySample};
use crate::constants::{EPS0, MU0};
use crate::error::{Error, Result};
use crate::waveform::FieldComponent;
use rayon::prelude::*;

/// Fixed row-chunk size for the deterministic parallel reductions.
const MONITOR_CHUNK_ROWS: usize = 64;

pub(crate) struct Axi2d {
    nr: usize,
    nz: usize,
    dx: f64,
    db: f32,
    mats: MaterialRows,
    r_cpml: AxisCpml,
    z_cpml: AxisCpml,
    ez: Vec<f32>,
    er: Vec<f32>,
    hphi: Vec<f32>,
    psi_ez_r: Vec<f32>,
    psi_er_z: Vec<f32>,
    psi_h_r: Vec<f32>,
    psi_h_z: Vec<f32>,
    source: ChannelSource,
    probes: Vec<ProbeRecorder>,
    /// Relative permittivity per cell row (energy monitor).
    eps_r_row: Vec<f64>,
}

impl Axi2d {
    pub fn build(setup: &FdtdSetup) -> Result<Self> {
        let grid = &setup.grid;
        let (nr, nz) = grid.axi_cells()?;
        let dx = grid.dx;
        let dt = grid.dt;
        let kg = grid.ground_level_index();

        let pml = &setup.pml;
        let pml_r_hi = pml.thickness[0][1];
        let (pml_z_lo, ground_eps) = match setup.ground {
            SimGround::Pec => (0, 1.0), // the ground plane itself terminates the grid
            SimGround::Lossy { eps_r, .. } => (pml.thickness[1][0], eps_r),
            SimGround::FreeSpace => (pml.thickness[1][0], 1.0),
        };
        let pml_z_hi = pml.thickness[1][1];
        if pml_r_hi + 1 >= nr || pml_z_lo + pml_z_hi + 1 >= nz {
            return Err(Error::Config("domain too small for the absorbing layers".into()));
        }

        let r_cpml = build_axis(nr, 0, pml_r_hi, dx, dt, pml, 1.0, 1.0);
        let z_cpml = build_axis(nz, pml_z_lo, pml_z_hi, dx, dt, pml, ground_eps, 1.0);

        let probes = setup
            .probes
            .iter()
            .map(|spec| Self::place_probe(spec, setup, nr, nz, kg))
            .collect::<Result<Vec<_>>>()?;

        let mats = material_rows(&setup.ground, nz, kg, dt, dx)?;
        let eps_r_row: Vec<f64> = (0..nz)
            .map(|k| match setup.ground {
                SimGround::Lossy { eps_r, .. } if k < kg => eps_r,
                _ => 1.0,
            })
            .collect();

        let source = ChannelSource::build(setup, nz, ChannelSource::area_for(setup))?;

        Ok(Self {
            nr,
            nz,
            dx,
            db: (dt / (MU0 * dx)) as f32,
            mats,
            r_cpml,
            z_cpml,
            ez: vec![0.0; nz * (nr + 1)],
            er: vec![0.0; (nz + 1) * nr],
            hphi: vec![0.0; nz * nr],
            psi_ez_r: vec![0.0; nz * (nr + 1)],
            psi_er_z: vec![0.0; (nz + 1) * nr],
            psi_h_r: vec![0.0; nz * nr],
            psi_h_z: vec![0.0; nz * nr],
            source,
            probes,
            eps_r_row,
        })
    }

    fn place_probe(
        spec: &ProbeSpec,
        setup: &FdtdSetup,
        nr: usize,
        nz: usize,
        kg: usize,
    ) -> Result<ProbeRecorder> {
        let grid = &setup.grid;
        let dx = grid.dx;
        let pml = &setup.pml;
        let pml_r_hi = pml.thickness[0][1];
        let pml_z_lo = if matches!(setup.ground, SimGround::Pec) {
            0
        } else {
            pml.thickness[1][0]
        };
        let pml_z_hi = pml.thickness[1][1];
        let r = spec.point.r;
        let z = spec.point.z;

        let z_lo_edge = -(kg as f64) * dx;
        let z_hi_edge = (nz - kg) as f64 * dx;
        let inside_r = r >= 0.0 && r <= (nr - pml_r_hi - 1) as f64 * dx;
        let inside_z = z >= z_lo_edge + (pml_z_lo + 1) as f64 * dx
            && z <= z_hi_edge - (pml_z_hi + 1) as f64 * dx;
        if !inside_r || !inside_z {
            return Err(Error::Config(format!(
                "probe at (r = {r} m, z = {z} m) lies outside the non-PML region"
            )));
        }
        if spec.component == FieldComponent::Ez
            && !matches!(setup.ground, SimGround::FreeSpace)
            && z < dx
        {
            return Err(Error::Config(format!(
                "Ez probes must sit at least one cell above the ground interface (z >= {dx} m)"
            )));
        }

        let (gi, gk) = match spec.component {
            FieldComponent::Ez => (r / dx, z / dx + kg as f64 - 0.5),
            FieldComponent::Er | FieldComponent::Ex => (r / dx - 0.5, z / dx + kg as f64),
            FieldComponent::Hphi => (r / dx - 0.5, z / dx + kg as f64 - 0.5),
        };
        if gi < 0.0 {
            return Err(Error::Config(format!(
                "probe at r = {r} m is too close to the axis for a staggered {:?} sample",
                spec.component
            )));
        }
        Ok(ProbeRecorder { spec: *spec, gi, gj: 0.0, gk, raw: Vec::new() })
    }

    /// One leapfrog cycle starting at time `t`.
    pub fn step(&mut self, t: f64) {
        self.update_h();
        self.update_e(t);
        self.record_probes();
    }

    fn update_h(&mut self) {
        let nr = self.nr;
        let nrp = nr + 1;
        let db = self.db;
        let Self { hphi, psi_h_r, psi_h_z, er, ez, r_cpml, z_cpml, .. } = self;
        let er_s: &[f32] = er;
        let ez_s: &[f32] = ez;
        let rc: &AxisCpml = r_cpml;
        let zc: &AxisCpml = z_cpml;
        let ikhr = &rc.inv_kappa_h[..nr];

        // dHphi/dt = (1/mu)(dEz/dr - dEr/dz)
        hphi
            .par_chunks_mut(nr)
            .enumerate()
            .for_each(|(k, hrow)| {
                let er0 = &er_s[k * nr..(k + 1) * nr];
                let er1 = &er_s[(k + 1) * nr..(k + 2) * nr];
                let ezr = &ez_s[k * nrp..(k + 1) * nrp];
                let ikhz = zc.inv_kappa_h[k];
                for i in 0..nr {
                    hrow[i] += db
                        * ((ezr[i + 1] - ezr[i]) * ikhr[i] - (er1[i] - er0[i]) * ikhz);
                }
            });

        // CPML corrections: z faces (whole rows), then the outer r face.
        let nz = self.nz;
        for k in zc.h_band_indices(nz) {
            let b = zc.b_h[k];
            let a = zc.a_h[k];
            let er0 = &er_s[k * nr..(k + 1) * nr];
            let er1 = &er_s[(k + 1) * nr..(k + 2) * nr];
            let psi = &mut psi_h_z[k * nr..(k + 1) * nr];
            let hrow = &mut hphi[k * nr..(k + 1) * nr];
            for i in 0..nr {
                psi[i] = b * psi[i] + a * (er1[i] - er0[i]);
                hrow[i] -= db * psi[i];
            }
        }
        let r_band: Vec<usize> = rc.h_band_indices(nr).collect();
        if !r_band.is_empty() {
            for k in 0..nz {
                let ezr = &ez_s[k * nrp..(k + 1) * nrp];
                for &i in &r_band {
                    let p = &mut psi_h_r[k * nr + i];
                    *p = rc.b_h[i] * *p + rc.a_h[i] * (ezr[i + 1] - ezr[i]);
                    hphi[k * nr + i] += db * *p;
                }
            }
        }
    }

    fn update_e(&mut self, t: f64) {
        let nr = self.nr;
        let nz = self.nz;
        let nrp = nr + 1;
        let Self { er, ez, psi_er_z, psi_ez_r, hphi, mats, r_cpml, z_cpml, source, .. } = self;
        let h_s: &[f32] = hphi;
        let m: &MaterialRows = mats;
        let rc: &AxisCpml = r_cpml;
        let zc: &AxisCpml = z_cpml;

        // Er: rows 1..nz (0 and nz are boundary planes).
        er.par_chunks_mut(nr)
            .enumerate()
            .for_each(|(k, erow)| {
                if k == 0 || k == nz {
                    return;
                }
                let ca = m.ca_et[k];
                let cb = m.cb_et[k];
                let ikez = zc.inv_kappa_e[k];
                let h0 = &h_s[(k - 1) * nr..k * nr];
                let h1 = &h_s[k * nr..(k + 1) * nr];
                for i in 0..nr {
                    erow[i] = ca * erow[i] - cb * (h1[i] - h0[i]) * ikez;
                }
            });
        for k in zc.e_band_indices(nz) {
            if k == 0 || k == nz {
                continue;
            }
            let b = zc.b_e[k];
            let a = zc.a_e[k];
            let cb = m.cb_et[k];
            let h0 = &h_s[(k - 1) * nr..k * nr];
            let h1 = &h_s[k * nr..(k + 1) * nr];
            let psi = &mut psi_er_z[k * nr..(k + 1) * nr];
            let erow = &mut er[k * nr..(k + 1) * nr];
            for i in 0..nr {
                psi[i] = b * psi[i] + a * (h1[i] - h0[i]);
                erow[i] -= cb * psi[i];
            }
        }

        // Ez: all rows; i = 0 is the axis limit, i = nr the outer backing.
        let iker = &rc.inv_kappa_e[..nrp];
        ez.par_chunks_mut(nrp)
            .enumerate()
            .for_each(|(k, ezrow)| {
                let ca = m.ca_ez[k];
                let cb = m.cb_ez[k];
                let h = &h_s[k * nr..(k + 1) * nr];
                ezrow[0] = ca * ezrow[0] + cb * 4.0 * h[0];
                for i in 1..nr {
                    let radial = ((i as f32 + 0.5) * h[i] - (i as f32 - 0.5) * h[i - 1])
                        / i as f32;
                    ezrow[i] = ca * ezrow[i] + cb * radial * iker[i];
                }
            });
        let r_band: Vec<usize> = rc.e_band_indices(nr).filter(|&i| i >= 1 && i < nr).collect();
        if !r_band.is_empty() {
            for k in 0..nz {
                let cb = m.cb_ez[k];
                let h = &h_s[k * nr..(k + 1) * nr];
                for &i in &r_band {
                    let radial = ((i as f32 + 0.5) * h[i] - (i as f32 - 0.5) * h[i - 1])
                        / i as f32;
                    let p = &mut psi_ez_r[k * nrp + i];
                    *p = rc.b_e[i] * *p + rc.a_e[i] * radial;
                    ez[k * nrp + i] += cb * *p;
                }
            }
        }

        // Impressed channel current on the axis.
        for (row, dv) in source.step_injection(t) {
            ez[row * nrp] += dv as f32;
        }
    }

    fn record_probes(&mut self) {
        let nr = self.nr;
        let nz = self.nz;
        for rec in &mut self.probes {
            let v = match rec.spec.component {
                FieldComponent::Ez => bilinear(&self.ez, nr + 1, nz, rec.gi, rec.gk),
                FieldComponent::Er | FieldComponent::Ex => {
                    bilinear(&self.er, nr, nz + 1, rec.gi, rec.gk)
                }
                FieldComponent::Hphi => bilinear(&self.hphi, nr, nz, rec.gi, rec.gk),
            };
            rec.raw.push(v);
        }
    }

    pub fn recorders(&self) -> &[ProbeRecorder] {
        &self.probes
    }

    pub fn injected_charge_base(&self) -> f64 {
        self.source.charge_base
    }

    pub fn allocated_field_bytes(&self) -> u64 {
        ((self.ez.len()
            + self.er.len()
            + self.hphi.len()
            + self.psi_ez_r.len()
            + self.psi_er_z.len()
            + self.psi_h_r.len()
            + self.psi_h_z.len())
            * std::mem::size_of::<f32>()) as u64
    }

    /// Deterministic reduction over fixed row chunks: field extrema and a
    /// discrete energy with ring-volume weights (the axis cell uses the
    /// enclosed disc).
    pub fn monitor_sample(&self, step: usize) -> StabilitySample {
        let nr = self.nr;
        let nrp = nr + 1;
        let vol = 2.0 * std::f64::consts::PI * self.dx.powi(3);

        let ez_parts: Vec<(f64, f64)> = self
            .ez
            .par_chunks(nrp * MONITOR_CHUNK_ROWS)
            .enumerate()
            .map(|(c, chunk)| {
                let mut mx = 0.0f64;
                let mut en = 0.0f64;
                for (kr, row) in chunk.chunks_exact(nrp).enumerate() {
                    let k = c * MONITOR_CHUNK_ROWS + kr;
                    let eps = EPS0 * self.eps_r_row[k];
                    let mut rowsum = 0.0f64;
                    for (i, &v) in row.iter().enumerate() {
                        let v = v as f64;
                        mx = mx.max(v.abs());
                        let w = if i == 0 { 0.125 } else { i as f64 };
                        rowsum += w * v * v;
                    }
                    en += 0.5 * eps * rowsum * vol;
                }
                (mx, en)
            })
            .collect();
        let er_parts: Vec<(f64, f64)> = self
            .er
            .par_chunks(nr * MONITOR_CHUNK_ROWS)
            .enumerate()
            .map(|(c, chunk)| {
                let mut mx = 0.0f64;
                let mut en = 0.0f64;
                for (kr, row) in chunk.chunks_exact(nr).enumerate() {
                    let k = (c * MONITOR_CHUNK_ROWS + kr).min(self.nz - 1);
                    let eps = EPS0 * self.eps_r_row[k];
                    let mut rowsum = 0.0f64;
                    for (i, &v) in row.iter().enumerate() {
                        let v = v as f64;
                        mx = mx.max(v.abs());
                        rowsum += (i as f64 + 0.5) * v * v;
                    }
                    en += 0.5 * eps * rowsum * vol;
                }
                (mx, en)
            })
            .collect();
        let h_parts: Vec<(f64, f64)> = self
            .hphi
            .par_chunks(nr * MONITOR_CHUNK_ROWS)
            .map(|chunk| {
                let mut mx = 0.0f64;
                let mut en = 0.0f64;
                for row in chunk.chunks_exact(nr) {
                    let mut rowsum = 0.0f64;
                    for (i, &v) in row.iter().enumerate() {
                        let v = v as f64;
                        mx = mx.max(v.abs());
                        rowsum += (i as f64 + 0.5) * v * v;
                    }
                    en += 0.5 * MU0 * rowsum * vol;
                }
                (mx, en)
            })
            .collect();

        let fold = |parts: &[(f64, f64)]| {
            parts
                .iter()
                .fold((0.0f64, 0.0f64), |(m, e), &(pm, pe)| (m.max(pm), e + pe))
        };
        let (max_ez, en_ez) = fold(&ez_parts);
        let (max_er, en_er) = fold(&er_parts);
        let (max_h, en_h) = fold(&h_parts);
        StabilitySample {
            step,
            max_e: max_ez.max(max_er),
            max_h,
            energy: en_ez + en_er + en_h,
        }
    }
}
