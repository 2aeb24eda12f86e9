//! Per-axis CPML coefficient tables.
//!
//! The recursive-convolution update keeps one auxiliary field per stretched
//! derivative: psi_new = b * psi + a * (field difference), and the stretched
//! derivative contributes (difference * 1/kappa + dx * psi') ... with psi'
//! stored in field-difference units, the update reads
//!
//! ```text
//! psi = b * psi + a * dF
//! F_target += coeff * (dF / kappa + psi)
//! ```
//!
//! Coefficients are graded per depth into each face; entries outside the
//! absorbing bands are identity (b = 1, a = 0, kappa = 1) and those psi
//! entries are never touched.

use super::{cpml_coeffs, CpmlProfile};

/// Coefficient table along one axis with `n` cells (integer positions
/// 0..=n, half positions 0..n).
pub struct AxisCpml {
    pub b_e: Vec<f32>,
    pub a_e: Vec<f32>,
    pub inv_kappa_e: Vec<f32>,
    pub b_h: Vec<f32>,
    pub a_h: Vec<f32>,
    pub inv_kappa_h: Vec<f32>,
    /// Face thicknesses in cells (low, high).
    pub lo: usize,
    pub hi: usize,
}

impl AxisCpml {
    /// Integer-position indices covered by the absorbing bands.
    pub fn e_band_indices(&self, n: usize) -> impl Iterator<Item = usize> {
        let lo = self.lo;
        let hi = self.hi;
        (0..lo).chain((n + 1 - hi)..=n).filter(move |_| lo + hi > 0)
    }

    /// Half-position indices covered by the absorbing bands.
    pub fn h_band_indices(&self, n: usize) -> impl Iterator<Item = usize> {
        let lo = self.lo;
        let hi = self.hi;
        (0..lo).chain((n - hi)..n).filter(move |_| lo + hi > 0)
    }
}

/// Build the table for an axis of `n` cells with face thicknesses `lo`/`hi`
/// and face permittivities (used in the optimal sigma_max).
pub fn build_axis(
    n: usize,
    lo: usize,
    hi: usize,
    dx: f64,
    dt: f64,
    profile: &CpmlProfile,
    eps_r_lo: f64,
    eps_r_hi: f64,
) -> AxisCpml {
    assert!(lo + hi < n, "CPML faces ({lo} + {hi}) must leave interior cells (n = {n})");
    let mut table = AxisCpml {
        b_e: vec![1.0; n + 1],
        a_e: vec![0.0; n + 1],
        inv_kappa_e: vec![1.0; n + 1],
        b_h: vec![1.0; n],
        a_h: vec![0.0; n],
        inv_kappa_h: vec![1.0; n],
        lo,
        hi,
    };
    let mut set_e = |i: usize, xi: f64, eps: f64| {
        let (b, a, kappa) = cpml_coeffs(profile, xi, dt, dx, eps);
        table.b_e[i] = b as f32;
        table.a_e[i] = a as f32;
        table.inv_kappa_e[i] = (1.0 / kappa) as f32;
    };
    if lo > 0 {
        for i in 0..=lo {
            set_e(i, (lo - i) as f64 / lo as f64, eps_r_lo);
        }
    }
    if hi > 0 {
        for i in (n - hi)..=n {
            set_e(i, (i - (n - hi)) as f64 / hi as f64, eps_r_hi);
        }
    }
    let mut set_h = |i: usize, xi: f64, eps: f64| {
        let (b, a, kappa) = cpml_coeffs(profile, xi, dt, dx, eps);
        table.b_h[i] = b as f32;
        table.a_h[i] = a as f32;
        table.inv_kappa_h[i] = (1.0 / kappa) as f32;
    };
    if lo > 0 {
        for i in 0..lo {
            set_h(i, (lo as f64 - (i as f64 + 0.5)) / lo as f64, eps_r_lo);
        }
    }
    if hi > 0 {
        for i in (n - hi)..n {
            set_h(i, ((i as f64 + 0.5) - (n - hi) as f64) / hi as f64, eps_r_hi);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_is_identity() {
        let p = CpmlProfile::uniform(8);
        let t = build_axis(100, 8, 8, 10.0, 2e-8, &p, 1.0, 1.0);
        for i in 9..=91 {
            assert_eq!(t.b_e[i], 1.0);
            assert_eq!(t.a_e[i], 0.0);
            assert_eq!(t.inv_kappa_e[i], 1.0);
        }
        for i in 8..92 {
            assert_eq!(t.b_h[i], 1.0);
            assert_eq!(t.a_h[i], 0.0);
        }
    }

    #[test]
    fn edge_most_absorbing() {
        let p = CpmlProfile::uniform(10);
        let t = build_axis(60, 10, 10, 10.0, 2e-8, &p, 1.0, 1.0);
        // b decreases monotonically toward both edges
        for i in 0..10 {
            assert!(t.b_e[i] <= t.b_e[i + 1] + 1e-9);
            assert!(t.b_e[60 - i] <= t.b_e[60 - i - 1] + 1e-9);
        }
        assert!(t.b_e[0] < t.b_e[5]);
        assert!(t.inv_kappa_e[0] < 1.0);
    }

    #[test]
    fn band_indices_cover_faces() {
        let p = CpmlProfile::uniform(4);
        let t = build_axis(20, 4, 4, 10.0, 2e-8, &p, 1.0, 1.0);
        let e: Vec<usize> = t.e_band_indices(20).collect();
        assert_eq!(e, vec![0, 1, 2, 3, 17, 18, 19, 20]);
        let h: Vec<usize> = t.h_band_indices(20).collect();
        assert_eq!(h, vec![0, 1, 2, 3, 16, 17, 18, 19]);
    }

    #[test]
    fn one_sided_face() {
        let p = CpmlProfile::uniform(6);
        let t = build_axis(30, 0, 6, 10.0, 2e-8, &p, 1.0, 1.0);
        assert_eq!(t.b_e[0], 1.0);
        assert!(t.b_e[30] < 1.0);
        let e: Vec<usize> = t.e_band_indices(30).collect();
        assert_eq!(e, vec![25, 26, 27, 28, 29, 30]);
    }
}
