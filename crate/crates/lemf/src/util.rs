//! Small numerical helpers shared across modules.

/// Trapezoidal integral of uniformly sampled data.
pub fn trapezoid(values: &[f64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    dt * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}

/// Cumulative trapezoidal integral; output[k] = integral over [t0, t0 + k*dt].
pub fn cumulative_trapezoid(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Linear interpolation of uniformly sampled data at time `t` (t0 = 0).
/// Returns 0 outside the sampled range on the left, clamps on the right.
pub fn interp_uniform(values: &[f64], dt: f64, t: f64) -> f64 {
    if values.is_empty() || t < 0.0 {
        return 0.0;
    }
    let u = t / dt;
    let k = u.floor() as usize;
    if k + 1 >= values.len() {
        return *values.last().unwrap();
    }
    let frac = u - k as f64;
    values[k] * (1.0 - frac) + values[k + 1] * frac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_linear_ramp_is_exact() {
        let v: Vec<f64> = (0..11).map(|k| k as f64).collect();
        assert!((trapezoid(&v, 0.5) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn cumulative_matches_total() {
        let v: Vec<f64> = (0..100).map(|k| (k as f64 * 0.1).sin()).collect();
        let c = cumulative_trapezoid(&v, 0.1);
        assert!((c[99] - trapezoid(&v, 0.1)).abs() < 1e-12);
    }

    #[test]
    fn interp_between_samples() {
        let v = vec![0.0, 2.0, 4.0];
        assert_eq!(interp_uniform(&v, 1.0, 0.5), 1.0);
        assert_eq!(interp_uniform(&v, 1.0, -0.1), 0.0);
        assert_eq!(interp_uniform(&v, 1.0, 9.0), 4.0);
    }
}
