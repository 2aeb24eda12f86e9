//! Stability monitoring: per-check field extrema, discrete energy, runaway
//! growth detection, and the divergence fault.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct StabilitySample {
    pub step: usize,
    pub max_e: f64,
    pub max_h: f64,
    /// Discrete field energy (J); diagnostic weighting near the axis.
    pub energy: f64,
}

#[derive(Debug, Clone, Default)]
pub struct StabilityTrace {
    pub samples: Vec<StabilitySample>,
    /// Set when the energy grows monotonically across several consecutive
    /// checks by a large factor; precedes the divergence fault on unstable
    /// runs.
    pub growth_flag: bool,
}

/// Fault when a field magnitude exceeds this multiple of its running
/// historical maximum.
const DIVERGENCE_RATIO: f64 = 1e6;
/// Consecutive increasing energy checks (with at least GROWTH_FACTOR total
/// growth) that set the growth flag.
const GROWTH_CHECKS: usize = 5;
const GROWTH_FACTOR: f64 = 100.0;

pub(crate) struct StabilityMonitor {
    trace: StabilityTrace,
    hist_max_e: f64,
    hist_max_h: f64,
}

impl StabilityMonitor {
    pub fn new() -> Self {
        Self {
            trace: StabilityTrace::default(),
            hist_max_e: 0.0,
            hist_max_h: 0.0,
        }
    }

    pub fn trace(&self) -> &StabilityTrace {
        &self.trace
    }

    /// Record a sample; errors with a divergence fault on non-finite fields
    /// or runaway growth past the historical maximum.
    pub fn push(&mut self, sample: StabilitySample) -> Result<()> {
        self.trace.samples.push(sample);
        self.update_growth_flag();
        if !sample.max_e.is_finite() || !sample.max_h.is_finite() || !sample.energy.is_finite() {
            return Err(Error::Divergence {
                step: sample.step,
                detail: "non-finite field value".into(),
            });
        }
        if self.hist_max_e > 0.0 && sample.max_e > DIVERGENCE_RATIO * self.hist_max_e {
            return Err(Error::Divergence {
                step: sample.step,
                detail: format!(
                    "|E| = {:.3e} exceeds 1e6 x historical max {:.3e}",
                    sample.max_e, self.hist_max_e
                ),
            });
        }
        if self.hist_max_h > 0.0 && sample.max_h > DIVERGENCE_RATIO * self.hist_max_h {
            return Err(Error::Divergence {
                step: sample.step,
                detail: format!(
                    "|H| = {:.3e} exceeds 1e6 x historical max {:.3e}",
                    sample.max_h, self.hist_max_h
                ),
            });
        }
        self.hist_max_e = self.hist_max_e.max(sample.max_e);
        self.hist_max_h = self.hist_max_h.max(sample.max_h);
        Ok(())
    }

    fn update_growth_flag(&mut self) {
        let s = &self.trace.samples;
        if s.len() < GROWTH_CHECKS {
            return;
        }
        let tail = &s[s.len() - GROWTH_CHECKS..];
        let monotone = tail.windows(2).all(|w| w[1].energy > w[0].energy);
        if monotone && tail[0].energy > 0.0
            && tail[GROWTH_CHECKS - 1].energy / tail[0].energy >= GROWTH_FACTOR
        {
            self.trace.growth_flag = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(step: usize, max_e: f64, energy: f64) -> StabilitySample {
        StabilitySample { step, max_e, max_h: max_e / 377.0, energy }
    }

    #[test]
    fn zero_run_stays_clean() {
        let mut m = StabilityMonitor::new();
        for k in 0..20 {
            m.push(sample(k * 10, 0.0, 0.0)).unwrap();
        }
        assert!(!m.trace().growth_flag);
        assert!(m.trace().samples.iter().all(|s| s.energy == 0.0));
    }

    #[test]
    fn nonfinite_faults() {
        let mut m = StabilityMonitor::new();
        m.push(sample(10, 1.0, 1.0)).unwrap();
        let err = m.push(sample(20, f64::NAN, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Divergence { step: 20, .. }));
    }

    #[test]
    fn runaway_faults_and_flags_first() {
        // exponential growth sets the flag; the fault fires once the field
        // magnitude jumps past 1e6 x the running maximum (here: the overflow
        // blow-up at the end of an unstable run)
        let mut m = StabilityMonitor::new();
        let mut e = 1.0;
        let mut energy = 1.0;
        let mut flagged_before_fault = false;
        for k in 0..8 {
            e *= 50.0;
            energy *= 2500.0;
            if m.trace().growth_flag {
                flagged_before_fault = true;
            }
            m.push(sample(k * 10, e, energy)).unwrap();
        }
        assert!(flagged_before_fault, "flag must precede the fault");
        let err = m.push(sample(80, e * 1e7, energy * 1e14)).unwrap_err();
        assert!(matches!(err, Error::Divergence { step: 80, .. }));
    }

    #[test]
    fn physical_accumulation_does_not_flag() {
        // slow growth (charge buildup) stays below the flag threshold
        let mut m = StabilityMonitor::new();
        let mut energy = 1.0;
        for k in 0..100 {
            energy *= 1.05;
            m.push(sample(k * 10, 1.0, energy)).unwrap();
        }
        assert!(!m.trace().growth_flag);
    }
}
