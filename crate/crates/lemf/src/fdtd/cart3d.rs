//! 3-D Cartesian Yee kernel.
//!
//! Component arrays use exact staggered extents so boundary planes are
//! stored (and stay zero as the PEC backing behind the absorbing layers):
//!
//! ```text
//! Ex (nx,   ny+1, nz+1)   at ((i+1/2) dx, j dx, k dx)
//! Ey (nx+1, ny,   nz+1)   at (i dx, (j+1/2) dx, k dx)
//! Ez (nx+1, ny+1, nz  )   at (i dx, j dx, (k+1/2) dx)
//! Hx (nx+1, ny,   nz  )   at (i dx, (j+1/2) dx, (k+1/2) dx)
//! Hy (nx,   ny+1, nz  )   at ((i+1/2) dx, j dx, (k+1/2) dx)
//! Hz (nx,   ny,   nz+1)   at ((i+1/2) dx, (j+1/2) dx, k dx)
//! ```
//!
//! z indices are relative to the domain bottom; the ground plane sits at
//! k = kg. The channel current is injected into the Ez column at the origin.

use super::cpml::{build_axis, AxisCpml};
use super::probe::{trilinear, ProbeRecorder};
use super::source::ChannelSource;
use super::{material_rows, FdtdSetup, MaterialRows, ProbeSpec, SimGround, StabilitySample};
use crate::constants::{EPS0, MU0};
use crate::error::{Error, Result};
use crate::waveform::FieldComponent;
use rayon::prelude::*;

const MONITOR_CHUNK_PLANES: usize = 8;

#[derive(Clone, Copy)]
struct Dims {
    x: usize,
    y: usize,
    z: usize,
}

impl Dims {
    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.y + j) * self.x + i
    }

    fn len(&self) -> usize {
        self.x * self.y * self.z
    }

    fn plane(&self) -> usize {
        self.x * self.y
    }
}

pub(crate) struct Cart3d {
    nx: usize,
    ny: usize,
    nz: usize,
    dx: f64,
    db: f32,
    mats: MaterialRows,
    x_cpml: AxisCpml,
    y_cpml: AxisCpml,
    z_cpml: AxisCpml,
    d_ex: Dims,
    d_ey: Dims,
    d_ez: Dims,
    d_hx: Dims,
    d_hy: Dims,
    d_hz: Dims,
    ex: Vec<f32>,
    ey: Vec<f32>,
    ez: Vec<f32>,
    hx: Vec<f32>,
    hy: Vec<f32>,
    hz: Vec<f32>,
    psi_ex_y: Vec<f32>,
    psi_ex_z: Vec<f32>,
    psi_ey_z: Vec<f32>,
    psi_ey_x: Vec<f32>,
    psi_ez_x: Vec<f32>,
    psi_ez_y: Vec<f32>,
    psi_hx_z: Vec<f32>,
    psi_hx_y: Vec<f32>,
    psi_hy_x: Vec<f32>,
    psi_hy_z: Vec<f32>,
    psi_hz_y: Vec<f32>,
    psi_hz_x: Vec<f32>,
    /// Ez source column: (linear index base i0/j0, row k) handled via rows.
    source: ChannelSource,
    src_i: usize,
    src_j: usize,
    probes: Vec<ProbeRecorder>,
    eps_r_row: Vec<f64>,
}

impl Cart3d {
    pub fn build(setup: &FdtdSetup) -> Result<Self> {
        let grid = &setup.grid;
        let (nx, ny, nz) = grid.cart_cells()?;
        let dx = grid.dx;
        let dt = grid.dt;
        let kg = grid.ground_level_index();
        let pml = &setup.pml;

        let (pml_z_lo, ground_eps) = match setup.ground {
            SimGround::Pec => (0, 1.0),
            SimGround::Lossy { eps_r, .. } => (pml.thickness[2][0], eps_r),
            SimGround::FreeSpace => (pml.thickness[2][0], 1.0),
        };
        let t = &pml.thickness;
        if t[0][0] + t[0][1] + 1 >= nx
            || t[1][0] + t[1][1] + 1 >= ny
            || pml_z_lo + t[2][1] + 1 >= nz
        {
            return Err(Error::Config("domain too small for the absorbing layers".into()));
        }

        let x_cpml = build_axis(nx, t[0][0], t[0][1], dx, dt, pml, 1.0, 1.0);
        let y_cpml = build_axis(ny, t[1][0], t[1][1], dx, dt, pml, 1.0, 1.0);
        let z_cpml = build_axis(nz, pml_z_lo, t[2][1], dx, dt, pml, ground_eps, 1.0);

        let (x_min, y_min) = match grid.kind {
            super::GridKind::Cart3d { x_min, y_min, .. } => (x_min, y_min),
            _ => unreachable!(),
        };
        let src_i = (-x_min / dx).round() as usize;
        let src_j = (-y_min / dx).round() as usize;
        if setup.source_enabled {
            let in_x = src_i > t[0][0] && src_i < nx - t[0][1];
            let in_y = src_j > t[1][0] && src_j < ny - t[1][1];
            if !in_x || !in_y {
                return Err(Error::Config(
                    "channel axis (x = 0, y = 0) must lie inside the non-PML region".into(),
                ));
            }
        }

        let probes = setup
            .probes
            .iter()
            .map(|spec| Self::place_probe(spec, setup, nx, ny, nz, kg, x_min, y_min))
            .collect::<Result<Vec<_>>>()?;

        let mats = material_rows(&setup.ground, nz, kg, dt, dx)?;
        let eps_r_row: Vec<f64> = (0..nz + 1)
            .map(|k| match setup.ground {
                SimGround::Lossy { eps_r, .. } if k < kg => eps_r,
                _ => 1.0,
            })
            .collect();
        let source = ChannelSource::build(setup, nz, ChannelSource::area_for(setup))?;

        let d_ex = Dims { x: nx, y: ny + 1, z: nz + 1 };
        let d_ey = Dims { x: nx + 1, y: ny, z: nz + 1 };
        let d_ez = Dims { x: nx + 1, y: ny + 1, z: nz };
        let d_hx = Dims { x: nx + 1, y: ny, z: nz };
        let d_hy = Dims { x: nx, y: ny + 1, z: nz };
        let d_hz = Dims { x: nx, y: ny, z: nz + 1 };

        Ok(Self {
            nx,
            ny,
            nz,
            dx,
            db: (dt / (MU0 * dx)) as f32,
            mats,
            x_cpml,
            y_cpml,
            z_cpml,
            d_ex,
            d_ey,
            d_ez,
            d_hx,
            d_hy,
            d_hz,
            ex: vec![0.0; d_ex.len()],
            ey: vec![0.0; d_ey.len()],
            ez: vec![0.0; d_ez.len()],
            hx: vec![0.0; d_hx.len()],
            hy: vec![0.0; d_hy.len()],
            hz: vec![0.0; d_hz.len()],
            psi_ex_y: vec![0.0; d_ex.len()],
            psi_ex_z: vec![0.0; d_ex.len()],
            psi_ey_z: vec![0.0; d_ey.len()],
            psi_ey_x: vec![0.0; d_ey.len()],
            psi_ez_x: vec![0.0; d_ez.len()],
            psi_ez_y: vec![0.0; d_ez.len()],
            psi_hx_z: vec![0.0; d_hx.len()],
            psi_hx_y: vec![0.0; d_hx.len()],
            psi_hy_x: vec![0.0; d_hy.len()],
            psi_hy_z: vec![0.0; d_hy.len()],
            psi_hz_y: vec![0.0; d_hz.len()],
            psi_hz_x: vec![0.0; d_hz.len()],
            source,
            src_i,
            src_j,
            probes,
            eps_r_row,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn place_probe(
        spec: &ProbeSpec,
        setup: &FdtdSetup,
        nx: usize,
        ny: usize,
        nz: usize,
        kg: usize,
        x_min: f64,
        y_min: f64,
    ) -> Result<ProbeRecorder> {
        let dx = setup.grid.dx;
        let t = &setup.pml.thickness;
        let pml_z_lo = if matches!(setup.ground, SimGround::Pec) { 0 } else { t[2][0] };
        // probes sit on the +x axis from the channel: (x = r, y = 0, z)
        let px = (spec.point.r - x_min) / dx;
        let py = (0.0 - y_min) / dx;
        let pz = spec.point.z / dx + kg as f64;
        let inside = px >= (t[0][0] + 1) as f64
            && px <= (nx - t[0][1] - 1) as f64
            && py >= (t[1][0] + 1) as f64
            && py <= (ny - t[1][1] - 1) as f64
            && pz >= (pml_z_lo + 1) as f64
            && pz <= (nz - t[2][1] - 1) as f64;
        if !inside {
            return Err(Error::Config(format!(
                "probe at (r = {} m, z = {} m) lies outside the non-PML region",
                spec.point.r, spec.point.z
            )));
        }
        if spec.component == FieldComponent::Ez
            && !matches!(setup.ground, SimGround::FreeSpace)
            && spec.point.z < dx
        {
            return Err(Error::Config(format!(
                "Ez probes must sit at least one cell above the ground interface (z >= {dx} m)"
            )));
        }
        let (gi, gj, gk) = match spec.component {
            FieldComponent::Ez => (px, py, pz - 0.5),
            FieldComponent::Er | FieldComponent::Ex => (px - 0.5, py, pz),
            FieldComponent::Hphi => (px - 0.5, py, pz - 0.5),
        };
        Ok(ProbeRecorder { spec: *spec, gi, gj, gk, raw: Vec::new() })
    }

    pub fn step(&mut self, t: f64) {
        self.update_h();
        self.update_e(t);
        self.record_probes();
    }

    fn update_h(&mut self) {
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        let db = self.db;
        let Self {
            hx, hy, hz, ex, ey, ez,
            psi_hx_z, psi_hx_y, psi_hy_x, psi_hy_z, psi_hz_y, psi_hz_x,
            x_cpml, y_cpml, z_cpml,
            d_ex, d_ey, d_ez, d_hx, d_hy, d_hz, ..
        } = self;
        let (d_ex, d_ey, d_ez, d_hx, d_hy, d_hz) = (*d_ex, *d_ey, *d_ez, *d_hx, *d_hy, *d_hz);
        let (ex, ey, ez): (&[f32], &[f32], &[f32]) = (ex, ey, ez);
        let xc: &AxisCpml = x_cpml;
        let yc: &AxisCpml = y_cpml;
        let zc: &AxisCpml = z_cpml;

        // Hx += db (dEy/dz|stretched - dEz/dy|stretched)
        hx.par_chunks_mut(d_hx.plane()).enumerate().for_each(|(k, plane)| {
            let ikz = zc.inv_kappa_h[k];
            for j in 0..ny {
                let iky = yc.inv_kappa_h[j];
                let row = &mut plane[j * d_hx.x..j * d_hx.x + nx + 1];
                for (i, h) in row.iter_mut().enumerate() {
                    let dey = ey[d_ey.idx(i, j, k + 1)] - ey[d_ey.idx(i, j, k)];
                    let dez = ez[d_ez.idx(i, j + 1, k)] - ez[d_ez.idx(i, j, k)];
                    *h += db * (dey * ikz - dez * iky);
                }
            }
        });
        // Hy += db (dEz/dx - dEx/dz)
        hy.par_chunks_mut(d_hy.plane()).enumerate().for_each(|(k, plane)| {
            let ikz = zc.inv_kappa_h[k];
            for j in 0..=ny {
                let row = &mut plane[j * d_hy.x..j * d_hy.x + nx];
                for (i, h) in row.iter_mut().enumerate() {
                    let dez = ez[d_ez.idx(i + 1, j, k)] - ez[d_ez.idx(i, j, k)];
                    let dex = ex[d_ex.idx(i, j, k + 1)] - ex[d_ex.idx(i, j, k)];
                    *h += db * (dez * xc.inv_kappa_h[i] - dex * ikz);
                }
            }
        });
        // Hz += db (dEx/dy - dEy/dx)
        hz.par_chunks_mut(d_hz.plane()).enumerate().for_each(|(k, plane)| {
            for j in 0..ny {
                let iky = yc.inv_kappa_h[j];
                let row = &mut plane[j * d_hz.x..j * d_hz.x + nx];
                for (i, h) in row.iter_mut().enumerate() {
                    let dex = ex[d_ex.idx(i, j + 1, k)] - ex[d_ex.idx(i, j, k)];
                    let dey = ey[d_ey.idx(i + 1, j, k)] - ey[d_ey.idx(i, j, k)];
                    *h += db * (dex * iky - dey * xc.inv_kappa_h[i]);
                }
            }
        });

        // CPML corrections.
        // Hx: +psi(dEy/dz) on z faces, -psi(dEz/dy) on y faces.
        for k in zc.h_band_indices(nz) {
            let (b, a) = (zc.b_h[k], zc.a_h[k]);
            for j in 0..ny {
                for i in 0..=nx {
                    let idx = d_hx.idx(i, j, k);
                    let dey = ey[d_ey.idx(i, j, k + 1)] - ey[d_ey.idx(i, j, k)];
                    psi_hx_z[idx] = b * psi_hx_z[idx] + a * dey;
                    hx[idx] += db * psi_hx_z[idx];
                }
            }
        }
        let y_h_band: Vec<usize> = yc.h_band_indices(ny).collect();
        for k in 0..nz {
            for &j in &y_h_band {
                let (b, a) = (yc.b_h[j], yc.a_h[j]);
                for i in 0..=nx {
                    let idx = d_hx.idx(i, j, k);
                    let dez = ez[d_ez.idx(i, j + 1, k)] - ez[d_ez.idx(i, j, k)];
                    psi_hx_y[idx] = b * psi_hx_y[idx] + a * dez;
                    hx[idx] -= db * psi_hx_y[idx];
                }
            }
        }
        // Hy: +psi(dEz/dx) on x faces, -psi(dEx/dz) on z faces.
        let x_h_band: Vec<usize> = xc.h_band_indices(nx).collect();
        for k in 0..nz {
            for j in 0..=ny {
                for &i in &x_h_band {
                    let idx = d_hy.idx(i, j, k);
                    let dez = ez[d_ez.idx(i + 1, j, k)] - ez[d_ez.idx(i, j, k)];
                    psi_hy_x[idx] = xc.b_h[i] * psi_hy_x[idx] + xc.a_h[i] * dez;
                    hy[idx] += db * psi_hy_x[idx];
                }
            }
        }
        for k in zc.h_band_indices(nz) {
            let (b, a) = (zc.b_h[k], zc.a_h[k]);
            for j in 0..=ny {
                for i in 0..nx {
                    let idx = d_hy.idx(i, j, k);
                    let dex = ex[d_ex.idx(i, j, k + 1)] - ex[d_ex.idx(i, j, k)];
                    psi_hy_z[idx] = b * psi_hy_z[idx] + a * dex;
                    hy[idx] -= db * psi_hy_z[idx];
                }
            }
        }
        // Hz: +psi(dEx/dy) on y faces, -psi(dEy/dx) on x faces.
        for k in 0..=nz {
            for &j in &y_h_band {
                let (b, a) = (yc.b_h[j], yc.a_h[j]);
                for i in 0..nx {
                    let idx = d_hz.idx(i, j, k);
                    let dex = ex[d_ex.idx(i, j + 1, k)] - ex[d_ex.idx(i, j, k)];
                    psi_hz_y[idx] = b * psi_hz_y[idx] + a * dex;
                    hz[idx] += db * psi_hz_y[idx];
                }
            }
        }
        for k in 0..=nz {
            for j in 0..ny {
                for &i in &x_h_band {
                    let idx = d_hz.idx(i, j, k);
                    let dey = ey[d_ey.idx(i + 1, j, k)] - ey[d_ey.idx(i, j, k)];
                    psi_hz_x[idx] = xc.b_h[i] * psi_hz_x[idx] + xc.a_h[i] * dey;
                    hz[idx] -= db * psi_hz_x[idx];
                }
            }
        }
    }

    fn update_e(&mut self, t: f64) {
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        let Self {
            ex, ey, ez, hx, hy, hz,
            psi_ex_y, psi_ex_z, psi_ey_z, psi_ey_x, psi_ez_x, psi_ez_y,
            x_cpml, y_cpml, z_cpml, mats, source,
            d_ex, d_ey, d_ez, d_hx, d_hy, d_hz, ..
        } = self;
        let (d_ex, d_ey, d_ez, d_hx, d_hy, d_hz) = (*d_ex, *d_ey, *d_ez, *d_hx, *d_hy, *d_hz);
        let (hx, hy, hz): (&[f32], &[f32], &[f32]) = (hx, hy, hz);
        let xc: &AxisCpml = x_cpml;
        let yc: &AxisCpml = y_cpml;
        let zc: &AxisCpml = z_cpml;
        let m: &MaterialRows = mats;

        // Ex = Ca Ex + Cb (dHz/dy - dHy/dz)
        ex.par_chunks_mut(d_ex.plane()).enumerate().for_each(|(k, plane)| {
            if k == 0 || k > nz - 1 {
                return;
            }
            let (ca, cb) = (m.ca_et[k], m.cb_et[k]);
            let ikz = zc.inv_kappa_e[k];
            for j in 1..ny {
                let iky = yc.inv_kappa_e[j];
                let row = &mut plane[j * d_ex.x..j * d_ex.x + nx];
                for (i, e) in row.iter_mut().enumerate() {
                    let dhz = hz[d_hz.idx(i, j, k)] - hz[d_hz.idx(i, j - 1, k)];
                    let dhy = hy[d_hy.idx(i, j, k)] - hy[d_hy.idx(i, j, k - 1)];
                    *e = ca * *e + cb * (dhz * iky - dhy * ikz);
                }
            }
        });
        // Ey = Ca Ey + Cb (dHx/dz - dHz/dx)
        ey.par_chunks_mut(d_ey.plane()).enumerate().for_each(|(k, plane)| {
            if k == 0 || k > nz - 1 {
                return;
            }
            let (ca, cb) = (m.ca_et[k], m.cb_et[k]);
            let ikz = zc.inv_kappa_e[k];
            for j in 0..ny {
                let row = &mut plane[j * d_ey.x..j * d_ey.x + nx + 1];
                for (i, e) in row.iter_mut().enumerate().skip(1).take(nx - 1) {
                    let dhx = hx[d_hx.idx(i, j, k)] - hx[d_hx.idx(i, j, k - 1)];
                    let dhz = hz[d_hz.idx(i, j, k)] - hz[d_hz.idx(i - 1, j, k)];
                    *e = ca * *e + cb * (dhx * ikz - dhz * xc.inv_kappa_e[i]);
                }
            }
        });
        // Ez = Ca Ez + Cb (dHy/dx - dHx/dy)
        ez.par_chunks_mut(d_ez.plane()).enumerate().for_each(|(k, plane)| {
            let (ca, cb) = (m.ca_ez[k], m.cb_ez[k]);
            for j in 1..ny {
                let iky = yc.inv_kappa_e[j];
                let row = &mut plane[j * d_ez.x..j * d_ez.x + nx + 1];
                for (i, e) in row.iter_mut().enumerate().skip(1).take(nx - 1) {
                    let dhy = hy[d_hy.idx(i, j, k)] - hy[d_hy.idx(i - 1, j, k)];
                    let dhx = hx[d_hx.idx(i, j, k)] - hx[d_hx.idx(i, j - 1, k)];
                    *e = ca * *e + cb * (dhy * xc.inv_kappa_e[i] - dhx * iky);
                }
            }
        });

        // CPML corrections.
        // Ex: +psi(dHz/dy) on y faces, -psi(dHy/dz) on z faces.
        let y_e_band: Vec<usize> =
            yc.e_band_indices(ny).filter(|&j| j >= 1 && j < ny).collect();
        let x_e_band: Vec<usize> =
            xc.e_band_indices(nx).filter(|&i| i >= 1 && i < nx).collect();
        for k in 1..nz {
            let cb = m.cb_et[k];
            for &j in &y_e_band {
                let (b, a) = (yc.b_e[j], yc.a_e[j]);
                for i in 0..nx {
                    let idx = d_ex.idx(i, j, k);
                    let dhz = hz[d_hz.idx(i, j, k)] - hz[d_hz.idx(i, j - 1, k)];
                    psi_ex_y[idx] = b * psi_ex_y[idx] + a * dhz;
                    ex[idx] += cb * psi_ex_y[idx];
                }
            }
        }
        for k in zc.e_band_indices(nz) {
            if k == 0 || k >= nz {
                continue;
            }
            let cb = m.cb_et[k];
            let (b, a) = (zc.b_e[k], zc.a_e[k]);
            for j in 1..ny {
                for i in 0..nx {
                    let idx = d_ex.idx(i, j, k);
                    let dhy = hy[d_hy.idx(i, j, k)] - hy[d_hy.idx(i, j, k - 1)];
                    psi_ex_z[idx] = b * psi_ex_z[idx] + a * dhy;
                    ex[idx] -= cb * psi_ex_z[idx];
                }
            }
        }
        // Ey: +psi(dHx/dz) on z faces, -psi(dHz/dx) on x faces.
        for k in zc.e_band_indices(nz) {
            if k == 0 || k >= nz {
                continue;
            }
            let cb = m.cb_et[k];
            let (b, a) = (zc.b_e[k], zc.a_e[k]);
            for j in 0..ny {
                for i in 1..nx {
                    let idx = d_ey.idx(i, j, k);
                    let dhx = hx[d_hx.idx(i, j, k)] - hx[d_hx.idx(i, j, k - 1)];
                    psi_ey_z[idx] = b * psi_ey_z[idx] + a * dhx;
                    ey[idx] += cb * psi_ey_z[idx];
                }
            }
        }
        for k in 1..nz {
            let cb = m.cb_et[k];
            for j in 0..ny {
                for &i in &x_e_band {
                    let idx = d_ey.idx(i, j, k);
                    let dhz = hz[d_hz.idx(i, j, k)] - hz[d_hz.idx(i - 1, j, k)];
                    psi_ey_x[idx] = xc.b_e[i] * psi_ey_x[idx] + xc.a_e[i] * dhz;
                    ey[idx] -= cb * psi_ey_x[idx];
                }
            }
        }
        // Ez: +psi(dHy/dx) on x faces, -psi(dHx/dy) on y faces.
        for k in 0..nz {
            let cb = m.cb_ez[k];
            for j in 1..ny {
                for &i in &x_e_band {
                    let idx = d_ez.idx(i, j, k);
                    let dhy = hy[d_hy.idx(i, j, k)] - hy[d_hy.idx(i - 1, j, k)];
                    psi_ez_x[idx] = xc.b_e[i] * psi_ez_x[idx] + xc.a_e[i] * dhy;
                    ez[idx] += cb * psi_ez_x[idx];
                }
            }
        }
        for k in 0..nz {
            let cb = m.cb_ez[k];
            for &j in &y_e_band {
                let (b, a) = (yc.b_e[j], yc.a_e[j]);
                for i in 1..nx {
                    let idx = d_ez.idx(i, j, k);
                    let dhx = hx[d_hx.idx(i, j, k)] - hx[d_hx.idx(i, j - 1, k)];
                    psi_ez_y[idx] = b * psi_ez_y[idx] + a * dhx;
                    ez[idx] -= cb * psi_ez_y[idx];
                }
            }
        }

        // Impressed channel current along the Ez column at the origin.
        let (si, sj) = (self.src_i, self.src_j);
        for (row, dv) in source.step_injection(t) {
            ez[d_ez.idx(si, sj, row)] += dv as f32;
        }
    }

    fn record_probes(&mut self) {
        for rec in &mut self.probes {
            let v = match rec.spec.component {
                FieldComponent::Ez => trilinear(
                    &self.ez, self.d_ez.x, self.d_ez.y, self.d_ez.z, rec.gi, rec.gj, rec.gk,
                ),
                FieldComponent::Er | FieldComponent::Ex => trilinear(
                    &self.ex, self.d_ex.x, self.d_ex.y, self.d_ex.z, rec.gi, rec.gj, rec.gk,
                ),
                FieldComponent::Hphi => trilinear(
                    &self.hy, self.d_hy.x, self.d_hy.y, self.d_hy.z, rec.gi, rec.gj, rec.gk,
                ),
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
        let n = self.ex.len()
            + self.ey.len()
            + self.ez.len()
            + self.hx.len()
            + self.hy.len()
            + self.hz.len()
            + self.psi_ex_y.len()
            + self.psi_ex_z.len()
            + self.psi_ey_z.len()
            + self.psi_ey_x.len()
            + self.psi_ez_x.len()
            + self.psi_ez_y.len()
            + self.psi_hx_z.len()
            + self.psi_hx_y.len()
            + self.psi_hy_x.len()
            + self.psi_hy_z.len()
            + self.psi_hz_y.len()
            + self.psi_hz_x.len();
        (n * std::mem::size_of::<f32>()) as u64
    }

    pub fn monitor_sample(&self, step: usize) -> StabilitySample {
        let vol = self.dx.powi(3);
        let scan = |data: &[f32], dims: Dims, is_e: bool| -> (f64, f64) {
            let parts: Vec<(f64, f64)> = data
                .par_chunks(dims.plane() * MONITOR_CHUNK_PLANES)
                .enumerate()
                .map(|(c, chunk)| {
                    let mut mx = 0.0f64;
                    let mut en = 0.0f64;
                    for (kp, plane) in chunk.chunks_exact(dims.plane()).enumerate() {
                        let k = (c * MONITOR_CHUNK_PLANES + kp).min(self.nz - 1);
                        let coef = if is_e {
                            0.5 * EPS0 * self.eps_r_row[k] * vol
                        } else {
                            0.5 * MU0 * vol
                        };
                        let mut sum = 0.0f64;
                        for &v in plane {
                            let v = v as f64;
                            if v.abs() > mx {
                                mx = v.abs();
                            }
                            sum += v * v;
                        }
                        en += coef * sum;
                    }
                    (mx, en)
                })
                .collect();
            parts
                .iter()
                .fold((0.0, 0.0), |(m, e), &(pm, pe)| (m.max(pm), e + pe))
        };
        let (m_ex, e_ex) = scan(&self.ex, self.d_ex, true);
        let (m_ey, e_ey) = scan(&self.ey, self.d_ey, true);
        let (m_ez, e_ez) = scan(&self.ez, self.d_ez, true);
        let (m_hx, e_hx) = scan(&self.hx, self.d_hx, false);
        let (m_hy, e_hy) = scan(&self.hy, self.d_hy, false);
        let (m_hz, e_hz) = scan(&self.hz, self.d_hz, false);
        StabilitySample {
            step,
            max_e: m_ex.max(m_ey).max(m_ez),
            max_h: m_hx.max(m_hy).max(m_hz),
            energy: e_ex + e_ey + e_ez + e_hx + e_hy + e_hz,
        }
    }
}
