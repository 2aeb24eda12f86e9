//! Faddeeva function w(z) = exp(-z^2) erfc(-iz) for the upper half-plane,
//! via Weideman's rational series (N = 36 terms), plus the Norton ground-wave
//! attenuation function built on top of it.
//!
//! The rational expansion coefficients come from an FFT of the sampled
//! weight function; they are computed once and cached. Accuracy against an
//! independent reference implementation is ~1e-13 relative for Im(z) >= 0
//! (see tests).

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::OnceLock;

const N_TERMS: usize = 36;

struct WeidemanTable {
    /// Polynomial coefficients, highest order first.
    coeffs: Vec<f64>,
    /// Scale parameter L = sqrt(N / sqrt(2)).
    scale: f64,
}

fn table() -> &'static WeidemanTable {
    static TABLE: OnceLock<WeidemanTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = N_TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let scale = (n as f64 / std::f64::consts::SQRT_2).sqrt();

        // Sample f(theta) = exp(-t^2) (L^2 + t^2) at t = L tan(theta/2),
        // theta_k = k pi / M for k = -M+1 .. M-1, with a leading zero.
        let mut samples = vec![Complex64::new(0.0, 0.0); m2];
        for (idx, k) in (-(m as i64 - 1)..m as i64).enumerate() {
            let theta = k as f64 * std::f64::consts::PI / m as f64;
            let t = scale * (theta / 2.0).tan();
            samples[idx + 1] = Complex64::new((-t * t).exp() * (scale * scale + t * t), 0.0);
        }
        // fftshift: swap halves before the transform.
        samples.rotate_left(m);

        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m2).process(&mut samples);

        // Keep Re of bins 1..=N, reversed to highest-order-first.
        let mut coeffs: Vec<f64> = (1..=n).map(|j| samples[j].re / m2 as f64).collect();
        coeffs.reverse();
        WeidemanTable { coeffs, scale }
    })
}

/// Faddeeva function for Im(z) >= 0.
pub fn faddeeva_upper(z: Complex64) -> Complex64 {
    debug_assert!(z.im >= -1e-300, "faddeeva_upper needs Im(z) >= 0");
    let t = table();
    let l = Complex64::new(t.scale, 0.0);
    let iz = Complex64::new(0.0, 1.0) * z;
    let denom = l - iz;
    let big_z = (l + iz) / denom;
    let mut poly = Complex64::new(0.0, 0.0);
    for &c in &t.coeffs {
        poly = poly * big_z + c;
    }
    let inv_sqrt_pi = std::f64::consts::FRAC_2_SQRT_PI / 2.0;
    2.0 * poly / (denom * denom) + Complex64::new(inv_sqrt_pi, 0.0) / denom
}

/// Scaled complementary error function erfcx(q) = exp(q^2) erfc(q) for
/// arguments in the closed upper half-plane (Im(q) >= 0 after mapping).
pub fn erfcx_complex(q: Complex64) -> Complex64 {
    // erfcx(q) = w(i q); the callers below only produce arguments whose
    // mapped point i*q lies in the upper half-plane.
    faddeeva_upper(Complex64::new(0.0, 1.0) * q)
}

/// Norton ground-wave attenuation function
/// F(p) = 1 - j sqrt(pi p) e^{-p} erfc(j sqrt(p)),
/// for numerical distances with arg(p) in (-pi/2, 0].
///
/// e^{-p} erfc(j sqrt(p)) = erfcx(j sqrt(p)) = w(-sqrt(p)); with
/// arg(p) in (-pi/2, 0] the point -sqrt(p) lies in the upper half-plane,
/// where the rational series is valid and w is bounded.
pub fn norton_attenuation(p: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if p.norm() == 0.0 {
        return one;
    }
    if p.norm() > 25.0 {
        return norton_attenuation_asymptotic(p);
    }
    let sp = p.sqrt();
    let w = faddeeva_upper(-sp);
    let f = one - Complex64::new(0.0, 1.0) * (std::f64::consts::PI * p).sqrt() * w;
    if f.re.is_finite() && f.im.is_finite() {
        f
    } else {
        norton_attenuation_asymptotic(p)
    }
}

/// Large-|p| series F(p) = -sum_m (2m-1)!! / (2p)^m, six terms.
/// Relative error against the erfc branch is ~1e-7 at |p| = 50.
pub fn norton_attenuation_asymptotic(p: Complex64) -> Complex64 {
    let inv = 1.0 / (2.0 * p);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut dfact = 1.0;
    for m in 1..=6 {
        dfact *= 2.0 * m as f64 - 1.0;
        term *= inv;
        sum += dfact * term;
    }
    -sum
}
