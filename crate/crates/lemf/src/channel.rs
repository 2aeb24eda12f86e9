//! Return-stroke source model: Heidler channel-base current and the MTLE
//! space-time current distribution i(z', t).

use crate::constants::C0;
use crate::error::{Error, Result};

/// Heidler channel-base current parameters (two-term form).
///
/// The correction factors `xi1`/`xi2` are derived from the time constants and
/// steepness exponents at construction; they normalize each term so that its
/// peak is close to the nominal amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeidlerParams {
    /// Amplitude of term 1 (A).
    pub i1: f64,
    /// Rise time constant of term 1 (s).
    pub tau11: f64,
    /// Decay time constant of term 1 (s).
    pub tau12: f64,
    /// Steepness exponent of term 1.
    pub n1: f64,
    /// Amplitude of term 2 (A).
    pub i2: f64,
    /// Rise time constant of term 2 (s).
    pub tau21: f64,
    /// Decay time constant of term 2 (s).
    pub tau22: f64,
    /// Steepness exponent of term 2.
    pub n2: f64,
    /// Peak correction factor of term 1, in (0, 1].
    pub xi1: f64,
    /// Peak correction factor of term 2, in (0, 1].
    pub xi2: f64,
}

impl HeidlerParams {
    pub fn new(
        i1: f64,
        tau11: f64,
        tau12: f64,
        n1: f64,
        i2: f64,
        tau21: f64,
        tau22: f64,
        n2: f64,
    ) -> Result<Self> {
        for (name, v) in [("i1", i1), ("i2", i2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("amplitude {name} must be >= 0, got {v}")));
            }
        }
        for (name, v) in [
            ("tau11", tau11),
            ("tau12", tau12),
            ("tau21", tau21),
            ("tau22", tau22),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!(
                    "time constant {name} must be > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("n1", n1), ("n2", n2)] {
            if !(v >= 1.0) {
                return Err(Error::Domain(format!("exponent {name} must be >= 1, got {v}")));
            }
        }
        Ok(Self {
            i1,
            tau11,
            tau12,
            n1,
            i2,
            tau21,
            tau22,
            n2,
            xi1: heidler_correction(tau11, tau12, n1)?,
            xi2: heidler_correction(tau21, tau22, n2)?,
        })
    }

    /// Parameter set of a typical subsequent return stroke:
    /// I1 = 10.7 kA, tau11 = 0.25 us, tau12 = 2.5 us, I2 = 6.5 kA,
    /// tau21 = 2 us, tau22 = 230 us, n1 = n2 = 2.
    pub fn typical_subsequent_stroke() -> Self {
        Self::new(10.7e3, 0.25e-6, 2.5e-6, 2.0, 6.5e3, 2.0e-6, 230.0e-6, 2.0)
            .expect("built-in parameters are valid")
    }

    /// Same waveshape with both amplitudes scaled by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.i1 * k,
            self.tau11,
            self.tau12,
            self.n1,
            self.i2 * k,
            self.tau21,
            self.tau22,
            self.n2,
        )
    }
}

/// Heidler peak correction factor xi = exp(-(tau1/tau2) * (n*tau2/tau1)^(1/n)).
pub fn heidler_correction(tau1: f64, tau2: f64, n: f64) -> Result<f64> {
    if !(tau1 > 0.0) || !(tau2 > 0.0) {
        return Err(Error::Domain(format!(
            "time constants must be > 0, got tau1={tau1}, tau2={tau2}"
        )));
    }
    if !(n >= 1.0) {
        return Err(Error::Domain(format!("exponent must be >= 1, got {n}")));
    }
    Ok((-(tau1 / tau2) * (n * tau2 / tau1).powf(1.0 / n)).exp())
}

/// Channel-base current I(0, t); zero for t <= 0 by causality.
pub fn heidler_current(t: f64, p: &HeidlerParams) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let x1 = (t / p.tau11).powf(p.n1);
    let x2 = (t / p.tau21).powf(p.n2);
    p.i1 / p.xi1 * (x1 / (x1 + 1.0)) * (-t / p.tau12).exp()
        + p.i2 / p.xi2 * (x2 / (x2 + 1.0)) * (-t / p.tau22).exp()
}

/// Analytic time derivative dI(0, t)/dt; zero for t <= 0.
pub fn heidler_current_derivative(t: f64, p: &HeidlerParams) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let term = |i: f64, xi: f64, tau1: f64, tau2: f64, n: f64| {
        let x = (t / tau1).powf(n);
        let g = x / (x + 1.0);
        // d/dt [x/(x+1)] = n x^{(n-1)/n} ... expressed via x: n*x/(t*(x+1)^2)
        let dg = n * x / (t * (x + 1.0) * (x + 1.0));
        i / xi * (-t / tau2).exp() * (dg - g / tau2)
    };
    term(p.i1, p.xi1, p.tau11, p.tau12, p.n1) + term(p.i2, p.xi2, p.tau21, p.tau22, p.n2)
}

/// MTLE return-stroke model: the base current propagates upward at `v_front`
/// and decays as exp(-z'/lambda_decay) with height.
#[derive(Debug, Clone, PartialEq)]
pub struct MtleModel {
    /// Exponential current decay constant with height (m).
    pub lambda_decay: f64,
    /// Return-stroke front speed (m/s).
    pub v_front: f64,
    /// Total channel height (m).
    pub channel_height: f64,
    pub base: HeidlerParams,
}

impl MtleModel {
    pub fn new(lambda_decay: f64, v_front: f64, channel_height: f64, base: HeidlerParams) -> Result<Self> {
        if !(lambda_decay > 0.0) {
            return Err(Error::Domain(format!(
                "decay constant must be > 0, got {lambda_decay}"
            )));
        }
        if !(v_front > 0.0 && v_front < C0) {
            return Err(Error::Domain(format!(
                "front speed must be in (0, c0), got {v_front}"
            )));
        }
        if !(channel_height > 0.0) {
            return Err(Error::Domain(format!(
                "channel height must be > 0, got {channel_height}"
            )));
        }
        Ok(Self {
            lambda_decay,
            v_front,
            channel_height,
            base,
        })
    }

    /// Default model: lambda = 2 km, v = 1.5e8 m/s, H = 7.5 km, typical
    /// subsequent-stroke base current.
    pub fn default_subsequent_stroke() -> Self {
        Self::new(2000.0, 1.5e8, 7500.0, HeidlerParams::typical_subsequent_stroke())
            .expect("built-in parameters are valid")
    }

    /// Current without the height-domain check; callers guarantee
    /// 0 <= z_prime <= channel_height.
    pub(crate) fn current_unchecked(&self, z_prime: f64, t: f64) -> f64 {
        (-z_prime / self.lambda_decay).exp() * heidler_current(t - z_prime / self.v_front, &self.base)
    }
}

/// Current i(z', t) along the channel:
/// i(z', t) = I(0, t - z'/v) * exp(-z'/lambda) for t >= z'/v, else 0.
pub fn mtle_current(z_prime: f64, t: f64, m: &MtleModel) -> Result<f64> {
    if !(0.0..=m.channel_height).contains(&z_prime) {
        return Err(Error::Domain(format!(
            "z' = {z_prime} outside channel [0, {}]",
            m.channel_height
        )));
    }
    Ok(m.current_unchecked(z_prime, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{cumulative_trapezoid, interp_uniform};
    use proptest::prelude::*;

    fn paper_params() -> HeidlerParams {
        HeidlerParams::typical_subsequent_stroke()
    }

    /// Dense-grid oracle: sample the current at 1 ns over [0, t_max].
    fn dense_samples(p: &HeidlerParams, t_max: f64) -> (Vec<f64>, f64) {
        let dt = 1e-9;
        let n = (t_max / dt).round() as usize + 1;
        ((0..n).map(|k| heidler_current(k as f64 * dt, p)).collect(), dt)
    }

    #[test]
    fn correction_factor_examples() {
        // exp(-0.1*sqrt(20))
        let xi1 = heidler_correction(0.25e-6, 2.5e-6, 2.0).unwrap();
        assert!((xi1 - 0.639_407_319).abs() < 1e-4, "xi1 = {xi1}");
        // symmetric case collapses to exp(-1)
        let xi = heidler_correction(3e-6, 3e-6, 1.0).unwrap();
        assert!((xi - (-1.0f64).exp()).abs() < 1e-12);
        // exp(-(2/230)*sqrt(230))
        let xi2 = heidler_correction(2e-6, 230e-6, 2.0).unwrap();
        assert!((xi2 - 0.876_449_585).abs() < 1e-4, "xi2 = {xi2}");
    }

    #[test]
    fn correction_rejects_bad_inputs() {
        assert!(heidler_correction(0.0, 1e-6, 2.0).is_err());
        assert!(heidler_correction(1e-6, -1e-6, 2.0).is_err());
        assert!(heidler_correction(1e-6, 1e-6, 0.5).is_err());
    }

    #[test]
    fn stored_xi_reproducible() {
        let p = paper_params();
        assert_eq!(p.xi1, heidler_correction(p.tau11, p.tau12, p.n1).unwrap());
        assert_eq!(p.xi2, heidler_correction(p.tau21, p.tau22, p.n2).unwrap());
        assert!(p.xi1 > 0.0 && p.xi1 <= 1.0);
        assert!(p.xi2 > 0.0 && p.xi2 <= 1.0);
    }

    #[test]
    fn current_zero_at_origin_and_before() {
        let p = paper_params();
        assert_eq!(heidler_current(0.0, &p), 0.0);
        assert_eq!(heidler_current(-1e-6, &p), 0.0);
    }

    #[test]
    fn current_peak_from_dense_grid() {
        // Frozen from a 0.1 ns dense evaluation: 12.094 kA at t = 0.835 us.
        let p = paper_params();
        let (vals, dt) = dense_samples(&p, 5e-6);
        let (k, peak) = vals
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
        let t_peak = k as f64 * dt;
        assert!((peak - 12_093.7).abs() < 5.0, "peak = {peak}");
        assert!((t_peak - 0.835e-6).abs() < 5e-9, "t_peak = {t_peak}");
    }

    #[test]
    fn late_time_decay() {
        // Frozen oracle: I(2 ms) = 1.2408 A, dominated by the exp(-t/tau22)
        // tail of term 2 (tiny compared with the 12 kA peak).
        let p = paper_params();
        let v = heidler_current(2e-3, &p);
        assert!((v - 1.2408).abs() < 1e-3, "I(2ms) = {v}");
        assert!(v < 2e-4 * 12_093.7);
    }

    #[test]
    fn derivative_matches_centered_difference() {
        let p = paper_params();
        let h = 1e-9;
        // agreement at the peak-derivative location (t ~ 0.135 us) to 1e-4
        let mut worst: f64 = 0.0;
        let mut peak_d: f64 = 0.0;
        for k in 10..3000 {
            let t = k as f64 * h;
            let fd = (heidler_current(t + h, &p) - heidler_current(t - h, &p)) / (2.0 * h);
            let an = heidler_current_derivative(t, &p);
            peak_d = peak_d.max(an.abs());
            worst = worst.max((fd - an).abs());
        }
        assert!(worst / peak_d < 1e-4, "relative disagreement {}", worst / peak_d);
        // peak steepness ~ 40 kA/us for this parameter set
        assert!((peak_d - 4.01e10).abs() < 2e8, "peak dI/dt = {peak_d}");
    }

    #[test]
    fn rise_time_on_dense_grid() {
        // 10-90% rise of the full two-term waveform, 1 ns grid. The frozen
        // oracle value is 0.3623 us (the fast first term alone rises in
        // 0.319 us; the slow second term stretches the aggregate).
        let p = paper_params();
        let (vals, dt) = dense_samples(&p, 10e-6);
        let peak = vals.iter().cloned().fold(0.0f64, f64::max);
        let cross = |level: f64| -> f64 {
            let i = vals.iter().position(|&v| v >= level).unwrap();
            let f = (level - vals[i - 1]) / (vals[i] - vals[i - 1]);
            (i as f64 - 1.0 + f) * dt
        };
        let rise = cross(0.9 * peak) - cross(0.1 * peak);
        assert!((rise - 0.3623e-6).abs() < 2e-9, "rise = {rise}");
    }

    #[test]
    fn mtle_identity_at_base() {
        let m = MtleModel::default_subsequent_stroke();
        for k in 0..50 {
            let t = k as f64 * 0.1e-6;
            assert_eq!(
                mtle_current(0.0, t, &m).unwrap(),
                heidler_current(t, &m.base)
            );
        }
    }

    #[test]
    fn mtle_causal_before_front() {
        let m = MtleModel::default_subsequent_stroke();
        for z in [10.0, 500.0, 2000.0, 7000.0] {
            let t_front = z / m.v_front;
            assert_eq!(mtle_current(z, t_front * 0.999, &m).unwrap(), 0.0);
            assert_eq!(mtle_current(z, 0.0, &m).unwrap(), 0.0);
        }
    }

    #[test]
    fn mtle_decay_at_one_lambda() {
        let m = MtleModel::default_subsequent_stroke();
        let z = m.lambda_decay; // 2 km
        let dt_after = 0.65e-6;
        let t = z / m.v_front + dt_after;
        let got = mtle_current(z, t, &m).unwrap();
        let want = (-1.0f64).exp() * heidler_current(dt_after, &m.base);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn mtle_rejects_out_of_channel() {
        let m = MtleModel::default_subsequent_stroke();
        assert!(mtle_current(-1.0, 1e-6, &m).is_err());
        assert!(mtle_current(m.channel_height + 1.0, 1e-6, &m).is_err());
    }

    #[test]
    fn trapezoid_charge_reference() {
        // Used by the FDTD source bookkeeping check: the cumulative trapezoid
        // of the base current is well defined and strictly increasing.
        let p = paper_params();
        let dt = 1e-8;
        let vals: Vec<f64> = (0..6000).map(|k| heidler_current(k as f64 * dt, &p)).collect();
        let q = cumulative_trapezoid(&vals, dt);
        assert!(q[5999] > 0.0);
        assert!(q.windows(2).all(|w| w[1] >= w[0]));
        // interpolation of the charge curve is smooth
        let v = interp_uniform(&q, dt, 30.5e-6);
        assert!(v > q[3000] && v < q[3100]);
    }

    proptest! {
        #[test]
        fn current_nonnegative_with_paper_params(t in 0.0f64..2e-3) {
            let p = paper_params();
            prop_assert!(heidler_current(t, &p) >= 0.0);
        }

        #[test]
        fn linearity_in_amplitudes(t in 1e-9f64..1e-4, k in 0.1f64..10.0) {
            let p = paper_params();
            let ps = p.scaled(k).unwrap();
            let a = heidler_current(t, &p) * k;
            let b = heidler_current(t, &ps);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-30));
        }

        #[test]
        fn mtle_shift_decay_identity(z in 0.0f64..7500.0, t in 0.0f64..1e-4) {
            let m = MtleModel::default_subsequent_stroke();
            let lhs = mtle_current(z, t, &m).unwrap();
            let rhs = (-z / m.lambda_decay).exp()
                * mtle_current(0.0, t - z / m.v_front, &m).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-30));
        }

        #[test]
        fn correction_in_unit_interval(
            tau1 in 1e-8f64..1e-5,
            ratio in 1.001f64..1e3,
            n in 1.0f64..8.0,
        ) {
            let xi = heidler_correction(tau1, tau1 * ratio, n).unwrap();
            prop_assert!(xi > 0.0 && xi <= 1.0);
        }
    }
}
