//! In-house FDTD solvers: a 2-D axisymmetric (r, z) kernel and a 3-D
//! Cartesian Yee kernel, both over an air/lossy-half-space domain with an
//! MTLE line-current source on the channel axis and convolutional PML
//! absorbing boundaries.
//!
//! Field storage is single precision (double-precision accumulators are used
//! for monitoring); coefficients are computed in f64 and cast once.

pub mod axi2d;
pub mod cart3d;
pub mod cpml;
pub mod line1d;
pub mod monitor;
pub(crate) mod probe;
pub mod source;

use crate::channel::MtleModel;
use crate::constants::{C0, EPS0};
use crate::error::{Error, Result};
use crate::waveform::{FieldComponent, FieldWaveform, ObservationPoint, Timebase};

pub use monitor::{StabilitySample, StabilityTrace};

/// Grid geometry. The ground interface sits at z = 0; the channel base is at
/// the coordinate origin (the axis in the axisymmetric kernel, (x, y) = (0, 0)
/// in the Cartesian one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    Axi2d {
        r_max: f64,
        z_min: f64,
        z_max: f64,
    },
    Cart3d {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        z_min: f64,
        z_max: f64,
    },
}

/// FDTD discretization: uniform cell size, CFL-governed time step, extents,
/// and step count.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub kind: GridKind,
    /// Uniform cell size (m).
    pub dx: f64,
    /// Fraction of the CFL bound, in (0, 1].
    pub cfl_factor: f64,
    /// Time step (s); derived from the CFL rule unless overridden.
    pub dt: f64,
    pub n_steps: usize,
}

/// CFL time step dt = cfl_factor * dx / (c0 * sqrt(D)) for D spatial
/// dimensions.
pub fn cfl_timestep(dx: f64, dims: u32, cfl_factor: f64) -> Result<f64> {
    if !(dx > 0.0) {
        return Err(Error::Domain(format!("dx must be > 0, got {dx}")));
    }
    if !(dims == 1 || dims == 2 || dims == 3) {
        return Err(Error::Domain(format!("dims must be 1..=3, got {dims}")));
    }
    if !(cfl_factor > 0.0 && cfl_factor <= 1.0) {
        return Err(Error::Config(format!(
            "cfl_factor must be in (0, 1], got {cfl_factor}"
        )));
    }
    Ok(cfl_factor * dx / (C0 * (dims as f64).sqrt()))
}

fn check_multiple(span: f64, dx: f64, what: &str) -> Result<usize> {
    if !(span > 0.0) {
        return Err(Error::Config(format!("{what} extent must be positive")));
    }
    let n = span / dx;
    if (n - n.round()).abs() > 1e-6 * n.max(1.0) || n.round() < 1.0 {
        return Err(Error::Config(format!(
            "{what} extent {span} m is not an integer multiple of dx = {dx} m"
        )));
    }
    Ok(n.round() as usize)
}

impl GridSpec {
    pub fn axi2d(
        dx: f64,
        r_max: f64,
        z_min: f64,
        z_max: f64,
        cfl_factor: f64,
        n_steps: usize,
    ) -> Result<Self> {
        let dt = cfl_timestep(dx, 2, cfl_factor)?;
        let spec = Self {
            kind: GridKind::Axi2d { r_max, z_min, z_max },
            dx,
            cfl_factor,
            dt,
            n_steps,
        };
        spec.validate_extents()?;
        Ok(spec)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn cart3d(
        dx: f64,
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        z_min: f64,
        z_max: f64,
        cfl_factor: f64,
        n_steps: usize,
    ) -> Result<Self> {
        let dt = cfl_timestep(dx, 3, cfl_factor)?;
        let spec = Self {
            kind: GridKind::Cart3d { x_min, x_max, y_min, y_max, z_min, z_max },
            dx,
            cfl_factor,
            dt,
            n_steps,
        };
        spec.validate_extents()?;
        Ok(spec)
    }

    fn validate_extents(&self) -> Result<()> {
        match self.kind {
            GridKind::Axi2d { r_max, z_min, z_max } => {
                check_multiple(r_max, self.dx, "radial")?;
                check_multiple(z_max - z_min, self.dx, "vertical")?;
                if z_min > 0.0 {
                    return Err(Error::Config("z_min must be <= 0 (ground plane at z = 0)".into()));
                }
            }
            GridKind::Cart3d { x_min, x_max, y_min, y_max, z_min, z_max } => {
                check_multiple(x_max - x_min, self.dx, "x")?;
                check_multiple(y_max - y_min, self.dx, "y")?;
                check_multiple(z_max - z_min, self.dx, "z")?;
                if z_min > 0.0 {
                    return Err(Error::Config("z_min must be <= 0 (ground plane at z = 0)".into()));
                }
                let on_node = |v: f64| (v / self.dx - (v / self.dx).round()).abs() < 1e-6;
                if !on_node(x_min) || !on_node(y_min) || !on_node(z_min) {
                    return Err(Error::Config(
                        "domain corners must lie on grid nodes (multiples of dx)".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Spatial dimension count of the lattice (2 for axisymmetric).
    pub fn spatial_dims(&self) -> u32 {
        match self.kind {
            GridKind::Axi2d { .. } => 2,
            GridKind::Cart3d { .. } => 3,
        }
    }

    /// Explicit time-step override. The value must respect the kernel's CFL
    /// bound dt <= dx / (c0 sqrt(D)).
    pub fn with_timestep(mut self, dt: f64) -> Result<Self> {
        let bound = self.dx / (C0 * (self.spatial_dims() as f64).sqrt());
        if !(dt > 0.0 && dt <= bound * (1.0 + 1e-12)) {
            return Err(Error::Config(format!(
                "dt = {dt} s violates the CFL bound {bound} s"
            )));
        }
        self.cfl_factor = dt / bound;
        self.dt = dt;
        Ok(self)
    }

    /// Bypass the CFL validation. Exists so the divergence fault can be
    /// demonstrated; any cfl_factor > 1 produces an unstable scheme.
    pub fn with_unchecked_cfl(mut self, cfl_factor: f64) -> Self {
        self.cfl_factor = cfl_factor;
        self.dt = cfl_factor * self.dx / (C0 * (self.spatial_dims() as f64).sqrt());
        self
    }

    /// Cell counts (nr, nz) for the axisymmetric grid.
    pub fn axi_cells(&self) -> Result<(usize, usize)> {
        match self.kind {
            GridKind::Axi2d { r_max, z_min, z_max } => Ok((
                (r_max / self.dx).round() as usize,
                ((z_max - z_min) / self.dx).round() as usize,
            )),
            _ => Err(Error::Config("grid is not axisymmetric".into())),
        }
    }

    /// Cell counts (nx, ny, nz) for the Cartesian grid.
    pub fn cart_cells(&self) -> Result<(usize, usize, usize)> {
        match self.kind {
            GridKind::Cart3d { x_min, x_max, y_min, y_max, z_min, z_max } => Ok((
                ((x_max - x_min) / self.dx).round() as usize,
                ((y_max - y_min) / self.dx).round() as usize,
                ((z_max - z_min) / self.dx).round() as usize,
            )),
            _ => Err(Error::Config("grid is not Cartesian".into())),
        }
    }

    /// Index of the ground plane (cells below it are ground).
    pub fn ground_level_index(&self) -> usize {
        let z_min = match self.kind {
            GridKind::Axi2d { z_min, .. } => z_min,
            GridKind::Cart3d { z_min, .. } => z_min,
        };
        (-z_min / self.dx).round() as usize
    }

    /// Total lattice cell count.
    pub fn cell_count(&self) -> usize {
        match self.kind {
            GridKind::Axi2d { .. } => {
                let (nr, nz) = self.axi_cells().unwrap();
                nr * nz
            }
            GridKind::Cart3d { .. } => {
                let (nx, ny, nz) = self.cart_cells().unwrap();
                nx * ny * nz
            }
        }
    }

    /// Single-precision memory estimate for the field and CPML auxiliary
    /// arrays, computed before any allocation: cells x arrays x 4 bytes.
    /// The axisymmetric kernel stores 3 field + 4 auxiliary arrays, the
    /// Cartesian one 6 + 12.
    pub fn memory_estimate_bytes(&self) -> u64 {
        let arrays = match self.kind {
            GridKind::Axi2d { .. } => 3 + 4,
            GridKind::Cart3d { .. } => 6 + 12,
        };
        self.cell_count() as u64 * arrays * 4
    }
}

/// Absorbing-layer grading parameters. Thickness is per axis and face
/// ([axis][low, high]); the axisymmetric kernel uses axes [r, z] and ignores
/// the r-low entry (symmetry axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpmlProfile {
    pub thickness: [[usize; 2]; 3],
    /// Polynomial grading order, in [2, 4].
    pub m_order: f64,
    /// Coordinate-stretching maximum, >= 1.
    pub kappa_max: f64,
    /// Complex-frequency-shift maximum (S/m).
    pub alpha_max: f64,
    /// Multiplier on the standard optimal sigma_max = (m+1)/(150 pi dx sqrt(eps_r)).
    pub sigma_ratio: f64,
}

impl CpmlProfile {
    /// Default absorber: 10 cells, cubic grading, kappa_max 5, sigma at the
    /// standard optimum. alpha_max is set for a complex-frequency-shift
    /// corner near 50 kHz (alpha = 2 pi eps0 f), matched to the microsecond
    /// time scales of these simulations.
    pub fn default_profile() -> Self {
        Self {
            thickness: [[10; 2]; 3],
            m_order: 3.0,
            kappa_max: 5.0,
            alpha_max: 2.8e-6,
            sigma_ratio: 1.0,
        }
    }

    pub fn uniform(cells: usize) -> Self {
        Self {
            thickness: [[cells; 2]; 3],
            ..Self::default_profile()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_order >= 2.0 && self.m_order <= 4.0) {
            return Err(Error::Config(format!(
                "CPML grading order must be in [2, 4], got {}",
                self.m_order
            )));
        }
        if !(self.kappa_max >= 1.0) {
            return Err(Error::Config(format!(
                "CPML kappa_max must be >= 1, got {}",
                self.kappa_max
            )));
        }
        if !(self.alpha_max >= 0.0) || !(self.sigma_ratio > 0.0) {
            return Err(Error::Config("CPML alpha_max/sigma_ratio out of range".into()));
        }
        Ok(())
    }
}

/// Graded CPML update coefficients at a fractional depth into the layer
/// (0 = interface, 1 = outer edge): returns (b, a, kappa).
pub fn cpml_coeffs(
    profile: &CpmlProfile,
    depth_fraction: f64,
    dt: f64,
    dx: f64,
    eps_r_face: f64,
) -> (f64, f64, f64) {
    let xi = depth_fraction.clamp(0.0, 1.0);
    let sigma_max = profile.sigma_ratio * (profile.m_order + 1.0)
        / (150.0 * std::f64::consts::PI * dx * eps_r_face.sqrt());
    let sigma = sigma_max * xi.powf(profile.m_order);
    let kappa = 1.0 + (profile.kappa_max - 1.0) * xi.powf(profile.m_order);
    let alpha = profile.alpha_max * (1.0 - xi);
    let b = (-(sigma / kappa + alpha) * dt / EPS0).exp();
    let a = if sigma == 0.0 {
        0.0
    } else {
        sigma / (sigma * kappa + kappa * kappa * alpha) * (b - 1.0)
    };
    (b, a, kappa)
}

/// Lossy-medium Yee update coefficients:
/// Ca = (1 - s)/(1 + s), Cb = (dt/(eps dx))/(1 + s), s = sigma dt / (2 eps).
pub fn material_coeffs(sigma: f64, eps_r: f64, dt: f64, dx: f64) -> Result<(f64, f64)> {
    if sigma < 0.0 {
        return Err(Error::Domain(format!("sigma must be >= 0, got {sigma}")));
    }
    if !(eps_r >= 1.0) {
        return Err(Error::Domain(format!("eps_r must be >= 1, got {eps_r}")));
    }
    let eps = EPS0 * eps_r;
    let s = sigma * dt / (2.0 * eps);
    Ok(((1.0 - s) / (1.0 + s), (dt / (eps * dx)) / (1.0 + s)))
}

/// Ground description for a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimGround {
    /// Perfect conductor at z = 0; the grid covers only z >= 0.
    Pec,
    /// Homogeneous lossy half-space below z = 0.
    Lossy { sigma: f64, eps_r: f64 },
    /// No ground at all (free space); used by image-symmetry checks.
    FreeSpace,
}

/// A field probe: the component is recorded at the physical point every step
/// with linear spatial interpolation. In the Cartesian kernel the point maps
/// to (x = r, y = 0, z); Ex/Er record the horizontal E along x and Hphi maps
/// to Hy.
#[derive(Debug, Clone, Copy)]
pub struct ProbeSpec {
    pub point: ObservationPoint,
    pub component: FieldComponent,
}

/// Everything needed to build a simulation.
#[derive(Debug, Clone)]
pub struct FdtdSetup {
    pub model: MtleModel,
    pub ground: SimGround,
    pub grid: GridSpec,
    pub pml: CpmlProfile,
    pub probes: Vec<ProbeSpec>,
    /// Inject the mirrored channel below z = 0 (free-space runs only).
    pub mirror_channel: bool,
    /// Steps between stability checks.
    pub monitor_interval: usize,
    /// Drive the simulation with the channel current (disabled for
    /// externally-sourced test runs).
    pub source_enabled: bool,
}

impl FdtdSetup {
    pub fn new(model: MtleModel, ground: SimGround, grid: GridSpec, pml: CpmlProfile) -> Self {
        Self {
            model,
            ground,
            grid,
            pml,
            probes: Vec::new(),
            mirror_channel: false,
            monitor_interval: 10,
            source_enabled: true,
        }
    }

    pub fn with_probes(mut self, probes: Vec<ProbeSpec>) -> Self {
        self.probes = probes;
        self
    }
}

pub(crate) struct MaterialRows {
    /// Tangential-E coefficients at integer z planes (interface-averaged).
    pub ca_et: Vec<f32>,
    pub cb_et: Vec<f32>,
    /// Vertical-E coefficients per cell row.
    pub ca_ez: Vec<f32>,
    pub cb_ez: Vec<f32>,
}

pub(crate) fn material_rows(
    ground: &SimGround,
    nz: usize,
    kg: usize,
    dt: f64,
    dx: f64,
) -> Result<MaterialRows> {
    let (gs, ge) = match ground {
        SimGround::Lossy { sigma, eps_r } => (*sigma, *eps_r),
        _ => (0.0, 1.0),
    };
    let cell_props = |k: usize| if k < kg { (gs, ge) } else { (0.0, 1.0) };
    let mut ca_ez = Vec::with_capacity(nz);
    let mut cb_ez = Vec::with_capacity(nz);
    for k in 0..nz {
        let (s, e) = cell_props(k);
        let (ca, cb) = material_coeffs(s, e, dt, dx)?;
        ca_ez.push(ca as f32);
        cb_ez.push(cb as f32);
    }
    let mut ca_et = Vec::with_capacity(nz + 1);
    let mut cb_et = Vec::with_capacity(nz + 1);
    for k in 0..=nz {
        // tangential E at plane k: average the two adjacent cells
        let (s0, e0) = cell_props(k.saturating_sub(1));
        let (s1, e1) = cell_props(k.min(nz - 1));
        let (ca, cb) = material_coeffs(0.5 * (s0 + s1), 0.5 * (e0 + e1), dt, dx)?;
        ca_et.push(ca as f32);
        cb_et.push(cb as f32);
    }
    Ok(MaterialRows { ca_et, cb_et, ca_ez, cb_ez })
}

/// Available system memory (bytes), if it can be determined.
pub fn available_memory_bytes() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/meminfo").ok()?;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("MemAvailable:") {
            let kb: u64 = rest.trim().trim_end_matches(" kB").trim().parse().ok()?;
            return Some(kb * 1024);
        }
    }
    None
}

enum Kernel {
    Axi(axi2d::Axi2d),
    Cart(cart3d::Cart3d),
}

/// A built simulation: owns the field state, probes, and stability monitor.
pub struct Simulation {
    kernel: Kernel,
    grid: GridSpec,
    step_index: usize,
    monitor_interval: usize,
    monitor: monitor::StabilityMonitor,
}

/// Validate probes and build the initial state (all fields zero).
pub fn build(setup: FdtdSetup) -> Result<Simulation> {
    setup.pml.validate()?;
    if !(setup.grid.cfl_factor > 0.0) {
        return Err(Error::Config("cfl_factor must be positive".into()));
    }
    if setup.mirror_channel && !matches!(setup.ground, SimGround::FreeSpace) {
        return Err(Error::Config("mirrored channel injection needs a free-space run".into()));
    }
    if matches!(setup.ground, SimGround::Pec) && setup.grid.ground_level_index() != 0 {
        return Err(Error::Config(
            "PEC ground replaces the lower half-space: set z_min = 0".into(),
        ));
    }
    if let SimGround::Lossy { .. } = setup.ground {
        if setup.grid.ground_level_index() == 0 {
            return Err(Error::Config(
                "lossy ground needs ground cells: set z_min < 0".into(),
            ));
        }
    }
    let estimate = setup.grid.memory_estimate_bytes();
    if let Some(avail) = available_memory_bytes() {
        if estimate > avail {
            return Err(Error::Config(format!(
                "field arrays need an estimated {estimate} bytes but only {avail} are available"
            )));
        }
    }
    let monitor_interval = setup.monitor_interval.max(1);
    let kernel = match setup.grid.kind {
        GridKind::Axi2d { .. } => Kernel::Axi(axi2d::Axi2d::build(&setup)?),
        GridKind::Cart3d { .. } => Kernel::Cart(cart3d::Cart3d::build(&setup)?),
    };
    Ok(Simulation {
        kernel,
        grid: setup.grid,
        step_index: 0,
        monitor_interval,
        monitor: monitor::StabilityMonitor::new(),
    })
}

impl Simulation {
    /// One full Yee cycle: H update (with CPML corrections), then E update
    /// with material coefficients and source injection, then probe recording.
    pub fn step(&mut self) -> Result<()> {
        let t = self.step_index as f64 * self.grid.dt;
        match &mut self.kernel {
            Kernel::Axi(k) => k.step(t),
            Kernel::Cart(k) => k.step(t),
        }
        self.step_index += 1;
        if self.step_index % self.monitor_interval == 0 || self.step_index == self.grid.n_steps {
            let sample = match &self.kernel {
                Kernel::Axi(k) => k.monitor_sample(self.step_index),
                Kernel::Cart(k) => k.monitor_sample(self.step_index),
            };
            self.monitor.push(sample)?;
        }
        Ok(())
    }

    /// Run `steps` more steps, stopping on a divergence fault.
    pub fn run(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Run the full configured step count.
    pub fn run_all(&mut self) -> Result<()> {
        let remaining = self.grid.n_steps.saturating_sub(self.step_index);
        self.run(remaining)
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Per-check max |E|, max |H|, and discrete field energy trace.
    pub fn stability_report(&self) -> &StabilityTrace {
        self.monitor.trace()
    }

    /// Recorded probe waveforms (sample 0 is the zero initial state).
    pub fn probe_waveforms(&self) -> Result<Vec<FieldWaveform>> {
        let n = self.step_index + 1;
        let tb = Timebase::new(self.grid.dt, n)?;
        let recorders = match &self.kernel {
            Kernel::Axi(k) => k.recorders(),
            Kernel::Cart(k) => k.recorders(),
        };
        recorders.iter().map(|r| r.waveform(tb)).collect()
    }

    /// Total charge injected at the channel-base cell so far (A s).
    pub fn injected_charge_base(&self) -> f64 {
        match &self.kernel {
            Kernel::Axi(k) => k.injected_charge_base(),
            Kernel::Cart(k) => k.injected_charge_base(),
        }
    }

    /// Bytes actually allocated for field + auxiliary arrays.
    pub fn allocated_field_bytes(&self) -> u64 {
        match &self.kernel {
            Kernel::Axi(k) => k.allocated_field_bytes(),
            Kernel::Cart(k) => k.allocated_field_bytes(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.grid.cell_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cfl_examples() {
        // 3-D values: 8.67 ns, 17.33 ns, 86.66 ns
        let dt = cfl_timestep(5.0, 3, 0.9).unwrap();
        assert!((dt - 8.666e-9).abs() < 5e-12, "{dt}");
        let dt = cfl_timestep(10.0, 3, 0.9).unwrap();
        assert!((dt - 17.333e-9).abs() < 1e-11, "{dt}");
        let dt = cfl_timestep(50.0, 3, 0.9).unwrap();
        assert!((dt - 86.666e-9).abs() < 5e-11, "{dt}");
        assert!(cfl_timestep(5.0, 3, 1.05).is_err());
        assert!(cfl_timestep(5.0, 3, 0.0).is_err());
    }

    #[test]
    fn axi_uses_sqrt_two() {
        let g = GridSpec::axi2d(5.0, 1000.0, 0.0, 1000.0, 0.9, 10).unwrap();
        assert!((g.dt - 0.9 * 5.0 / (C0 * 2.0f64.sqrt())).abs() < 1e-18);
    }

    #[test]
    fn timestep_override_validated() {
        let g = GridSpec::axi2d(5.0, 1000.0, 0.0, 1000.0, 0.9, 10).unwrap();
        // the 3-D CFL value is below the 2-D bound: accepted
        let g2 = g.clone().with_timestep(8.6666e-9).unwrap();
        assert!((g2.dt - 8.6666e-9).abs() < 1e-15);
        // beyond the 2-D bound: rejected
        assert!(g.with_timestep(1.3e-8).is_err());
    }

    #[test]
    fn unchecked_cfl_bypasses_validation() {
        let g = GridSpec::axi2d(10.0, 500.0, 0.0, 500.0, 0.9, 10)
            .unwrap()
            .with_unchecked_cfl(1.05);
        assert!(g.dt > 10.0 / (C0 * 2.0f64.sqrt()));
    }

    #[test]
    fn lattice_arithmetic() {
        let g = GridSpec::axi2d(5.0, 12_000.0, 0.0, 9_000.0, 0.9, 10).unwrap();
        assert_eq!(g.axi_cells().unwrap(), (2400, 1800));
        // 218 x 20 x 7.6 km at 50 m = 265 MCells
        let g3 = GridSpec::cart3d(
            50.0, 0.0, 218_000.0, 0.0, 20_000.0, 0.0, 7_600.0, 0.9, 10,
        )
        .unwrap();
        let (nx, ny, nz) = g3.cart_cells().unwrap();
        assert_eq!(nx * ny * nz, 265_088_000);
        // single-precision estimate ~ 19 GB
        let gb = g3.memory_estimate_bytes() as f64 / 1e9;
        assert!((gb - 19.0).abs() < 0.3, "estimate {gb} GB");
    }

    #[test]
    fn extent_must_divide() {
        assert!(GridSpec::axi2d(7.0, 1003.0, 0.0, 700.0, 0.9, 1).is_err());
    }

    #[test]
    fn material_coeff_examples() {
        let (ca, _) = material_coeffs(0.0, 1.0, 1e-8, 5.0).unwrap();
        assert_eq!(ca, 1.0);
        // sigma huge: Ca -> -1, Cb -> 0
        let (ca, cb) = material_coeffs(1e12, 1.0, 1e-8, 5.0).unwrap();
        assert!((ca + 1.0).abs() < 1e-6 && cb < 1e-12);
        // sigma = 1 mS/m, eps_r = 10, dt = 17.33 ns: s = sigma dt/(2 eps)
        // = 0.09788, Ca = (1-s)/(1+s) = 0.82169 by direct arithmetic
        let dt = cfl_timestep(10.0, 3, 0.9).unwrap();
        let (ca, _) = material_coeffs(1e-3, 10.0, dt, 10.0).unwrap();
        assert!((ca - 0.82169).abs() < 1e-4, "Ca = {ca}");
        assert!(material_coeffs(-1.0, 10.0, 1e-8, 5.0).is_err());
    }

    #[test]
    fn cpml_coeff_properties() {
        let p = CpmlProfile::default_profile();
        let dt = 8.67e-9;
        // transparent at zero depth (sigma = 0 -> a = 0)
        let profile_no_alpha = CpmlProfile { alpha_max: 0.0, ..p };
        let (b, a, k) = cpml_coeffs(&profile_no_alpha, 0.0, dt, 5.0, 1.0);
        assert_eq!(b, 1.0);
        assert_eq!(a, 0.0);
        assert_eq!(k, 1.0);
        // damping grows monotonically with depth; b smallest at the edge
        let mut last_b = f64::INFINITY;
        for i in 0..=10 {
            let (b, _, kappa) = cpml_coeffs(&p, i as f64 / 10.0, dt, 5.0, 1.0);
            assert!(b < last_b || i == 0);
            assert!(kappa >= 1.0 && kappa <= p.kappa_max);
            last_b = b;
        }
        let (b_edge, a_edge, k_edge) = cpml_coeffs(&p, 1.0, dt, 5.0, 1.0);
        assert!(b_edge < 1.0 && a_edge < 0.0 && (k_edge - 5.0).abs() < 1e-12);
    }

    #[test]
    fn profile_validation() {
        let mut p = CpmlProfile::default_profile();
        p.m_order = 5.0;
        assert!(p.validate().is_err());
        let mut p = CpmlProfile::default_profile();
        p.kappa_max = 0.5;
        assert!(p.validate().is_err());
    }
}
