//! Time-series data model shared by the reference engine, the filter chain,
//! and the FDTD probes.

use crate::error::{Error, Result};

/// A uniform timebase starting at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timebase {
    /// Sample interval (s).
    pub dt: f64,
    /// Number of samples.
    pub n_samples: usize,
}

impl Timebase {
    pub fn new(dt: f64, n_samples: usize) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("timebase dt must be > 0, got {dt}")));
        }
        if n_samples < 2 {
            return Err(Error::Domain(format!(
                "timebase needs at least 2 samples, got {n_samples}"
            )));
        }
        Ok(Self { dt, n_samples })
    }

    /// Total covered duration (time of the last sample).
    pub fn duration(&self) -> f64 {
        self.dt * (self.n_samples - 1) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples).map(move |k| k as f64 * self.dt)
    }
}

/// Observation point in the vertical plane through the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPoint {
    /// Horizontal distance from the channel axis (m).
    pub r: f64,
    /// Height above ground (m); negative values are depths below the surface.
    pub z: f64,
}

impl ObservationPoint {
    pub fn new(r: f64, z: f64) -> Self {
        Self { r, z }
    }
}

/// Field component carried by a waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldComponent {
    /// Vertical electric field (V/m).
    Ez,
    /// Horizontal electric field along the propagation direction (V/m).
    Ex,
    /// Radial electric field (V/m); physically the same quantity as `Ex`
    /// expressed in cylindrical coordinates.
    Er,
    /// Azimuthal magnetic field (A/m).
    Hphi,
}

impl FieldComponent {
    pub fn unit(&self) -> &'static str {
        match self {
            FieldComponent::Hphi => "A/m",
            _ => "V/m",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldComponent::Ez => "Ez",
            FieldComponent::Ex => "Ex",
            FieldComponent::Er => "Er",
            FieldComponent::Hphi => "Hphi",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Ez" => Ok(FieldComponent::Ez),
            "Ex" => Ok(FieldComponent::Ex),
            "Er" => Ok(FieldComponent::Er),
            "Hphi" => Ok(FieldComponent::Hphi),
            other => Err(Error::CsvFormat(format!("unknown component '{other}'"))),
        }
    }

    /// Er and Ex name the same horizontal E component in different frames;
    /// comparisons treat them as interchangeable.
    pub fn compatible(&self, other: &FieldComponent) -> bool {
        use FieldComponent::*;
        self == other || matches!((self, other), (Ex, Er) | (Er, Ex))
    }
}

/// Uniformly sampled time series of one field component at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldWaveform {
    pub component: FieldComponent,
    pub values: Vec<f64>,
    pub timebase: Timebase,
    pub point: ObservationPoint,
    pub scenario_id: String,
}

impl FieldWaveform {
    pub fn new(
        component: FieldComponent,
        values: Vec<f64>,
        timebase: Timebase,
        point: ObservationPoint,
        scenario_id: impl Into<String>,
    ) -> Result<Self> {
        if values.len() != timebase.n_samples {
            return Err(Error::Mismatch(format!(
                "waveform has {} values but timebase expects {}",
                values.len(),
                timebase.n_samples
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("waveform contains non-finite samples".into()));
        }
        Ok(Self {
            component,
            values,
            timebase,
            point,
            scenario_id: scenario_id.into(),
        })
    }

    pub fn zeros(
        component: FieldComponent,
        timebase: Timebase,
        point: ObservationPoint,
        scenario_id: impl Into<String>,
    ) -> Self {
        Self {
            component,
            values: vec![0.0; timebase.n_samples],
            timebase,
            point,
            scenario_id: scenario_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest absolute sample value.
    pub fn peak_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Sample value at time `t` by linear interpolation (0 before t = 0).
    pub fn sample_at(&self, t: f64) -> f64 {
        crate::util::interp_uniform(&self.values, self.timebase.dt, t)
    }
}
