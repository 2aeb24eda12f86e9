//! 1-D FDTD line (plane wave along x) used as the normal-incidence CPML
//! reflection oracle: the absorber's reflected energy is measured against a
//! PEC termination at the same boundary location, with a free-field run
//! (domain long enough that no boundary is reached in the window) supplying
//! the incident waveform.

use super::cpml::build_axis;
use super::CpmlProfile;
use crate::constants::{C0, EPS0, MU0};

/// Right-end termination of the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineTermination {
    /// CPML of the given profile occupying the outermost cells.
    Cpml,
    /// Bare PEC wall at the domain end.
    Pec,
}

pub struct Line1d {
    n: usize,
    dt: f64,
    e: Vec<f64>,
    h: Vec<f64>,
    psi_e: Vec<f64>,
    psi_h: Vec<f64>,
    b_e: Vec<f64>,
    a_e: Vec<f64>,
    ik_e: Vec<f64>,
    b_h: Vec<f64>,
    a_h: Vec<f64>,
    ik_h: Vec<f64>,
    ce: f64,
    ch: f64,
}

impl Line1d {
    /// A line of `n` cells with the chosen right-end termination; the left
    /// end is far enough away that tests keep their windows short of it.
    pub fn new(n: usize, dx: f64, cfl: f64, termination: LineTermination, pml: &CpmlProfile) -> Self {
        let dt = cfl * dx / C0;
        let thickness = match termination {
            LineTermination::Cpml => pml.thickness[0][1],
            LineTermination::Pec => 0,
        };
        let table = build_axis(n, 0, thickness, dx, dt, pml, 1.0, 1.0);
        Line1d {
            n,
            dt,
            e: vec![0.0; n + 1],
            h: vec![0.0; n],
            psi_e: vec![0.0; n + 1],
            psi_h: vec![0.0; n],
            b_e: table.b_e.iter().map(|&v| v as f64).collect(),
            a_e: table.a_e.iter().map(|&v| v as f64).collect(),
            ik_e: table.inv_kappa_e.iter().map(|&v| v as f64).collect(),
            b_h: table.b_h.iter().map(|&v| v as f64).collect(),
            a_h: table.a_h.iter().map(|&v| v as f64).collect(),
            ik_h: table.inv_kappa_h.iter().map(|&v| v as f64).collect(),
            ce: dt / (EPS0 * dx),
            ch: dt / (MU0 * dx),
        }
    }

    /// Advance one step, adding `source` to the E node at `i_src`.
    pub fn step(&mut self, i_src: usize, source: f64) {
        let n = self.n;
        for i in 0..n {
            let de = self.e[i + 1] - self.e[i];
            self.psi_h[i] = self.b_h[i] * self.psi_h[i] + self.a_h[i] * de;
            self.h[i] -= self.ch * (de * self.ik_h[i] + self.psi_h[i]);
        }
        for i in 1..n {
            let dh = self.h[i] - self.h[i - 1];
            self.psi_e[i] = self.b_e[i] * self.psi_e[i] + self.a_e[i] * dh;
            self.e[i] -= self.ce * (dh * self.ik_e[i] + self.psi_e[i]);
        }
        self.e[i_src] += source;
    }

    pub fn e_at(&self, i: usize) -> f64 {
        self.e[i]
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

/// Result of the normal-incidence reflection experiment.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionReport {
    /// Reflected energy of the absorber run relative to the incident energy.
    pub cpml_reflected_fraction: f64,
    /// Reflected energy of the PEC-terminated run relative to incident.
    pub pec_reflected_fraction: f64,
    /// 10 log10(cpml / pec) (dB); negative means the absorber is better.
    pub relative_db: f64,
}

/// Drive a differentiated-Gaussian pulse into the termination and compare the
/// energy reflected by the CPML against a PEC wall at the same location (the
/// absorber's interface plane).
pub fn reflection_experiment(pml: &CpmlProfile, dx: f64) -> ReflectionReport {
    let thickness = pml.thickness[0][1];
    let interior = 2000usize; // cells between source region and termination
    let n_cpml = interior + thickness;
    let i_src = 100;
    let i_probe = 1000;
    let cfl = 0.99;

    // pulse with spectral peak near c/(30 dx): well resolved on the grid
    let f_peak = C0 / (30.0 * dx);
    let tau = 1.0 / (2.0 * std::f64::consts::PI * f_peak);
    let t0 = 8.0 * tau;
    let pulse = move |t: f64| {
        let u = (t - t0) / tau;
        -u * (-0.5 * u * u).exp()
    };

    // window: pulse reaches the termination and returns to the probe, with
    // margin, but nothing reaches the far (left-extended) free-field boundary
    let dt = cfl * dx / C0;
    let travel = (interior - i_src) + (interior - i_probe);
    let n_steps = (travel as f64 / (C0 * dt / dx)) as usize + (14.0 * tau / dt) as usize;

    let run = |termination: LineTermination, n_cells: usize| -> Vec<f64> {
        let mut line = Line1d::new(n_cells, dx, cfl, termination, pml);
        let mut rec = Vec::with_capacity(n_steps);
        for s in 0..n_steps {
            line.step(i_src, pulse(s as f64 * line.dt));
            rec.push(line.e_at(i_probe));
        }
        rec
    };

    // free field: no termination within reach of the window
    let free = run(LineTermination::Pec, interior + travel + 2000);
    let cpml = run(LineTermination::Cpml, n_cpml);
    let pec = run(LineTermination::Pec, interior);

    let energy = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };
    let incident: f64 = free.iter().map(|x| x * x).sum();
    let refl_cpml = energy(&cpml, &free) / incident;
    let refl_pec = energy(&pec, &free) / incident;
    ReflectionReport {
        cpml_reflected_fraction: refl_cpml,
        pec_reflected_fraction: refl_pec,
        relative_db: 10.0 * (refl_cpml / refl_pec).log10(),
    }
}
