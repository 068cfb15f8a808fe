//! Analytic invariants of the dihedral pencil: the Fuglede-Kadison
//! determinant (Mahler-root closed form and quadrature cross-check),
//! resolvent traces, tr-singular points, winding numbers of spectral
//! curves along paths, and the homology coupling.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{
    periodic_log_affine_quadrature, periodic_quadrature, C64, Quadrature, QuadratureConfig,
    RealQuadrature,
};
use crate::pencil::{ClosedPath, Complex3Point};
use crate::spectrum::in_spectrum_dinf;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A polynomial with complex coefficients in ascending degree order.
/// The all-zero polynomial is admitted; its Mahler measure is 0 by
/// convention.
#[derive(Debug, Clone, PartialEq)]
pub struct MahlerPolynomial {
    pub coefficients: Vec<C64>,
}

impl MahlerPolynomial {
    pub fn new(coefficients: Vec<C64>) -> Self {
        MahlerPolynomial { coefficients }
    }

    /// Coefficients with exact trailing zeros removed, so the last entry
    /// is the true leading coefficient (empty for the zero polynomial).
    pub fn trimmed(&self) -> &[C64] {
        let mut end = self.coefficients.len();
        while end > 0 && self.coefficients[end - 1] == c(0.0) {
            end -= 1;
        }
        &self.coefficients[..end]
    }
}

/// The symbol polynomial P_z(w) = -z1 z2 w^2 + (1 - z1^2 - z2^2) w - z1 z2
/// whose Mahler measure squares to the Fuglede-Kadison determinant.
pub fn mahler_p_z(z1: C64, z2: C64) -> MahlerPolynomial {
    let m = -(z1 * z2);
    MahlerPolynomial::new(vec![m, c(1.0) - z1 * z1 - z2 * z2, m])
}

/// Both roots of a w^2 + b w + c (a != 0), via the numerically stable
/// quadratic formula: the larger-magnitude root from the formula, the
/// other from the product c/a.
fn quadratic_roots(a: C64, b: C64, cc: C64) -> (C64, C64) {
    let disc = b * b - 4.0 * a * cc;
    let s = disc.sqrt();
    let q = if (b + s).norm() >= (b - s).norm() {
        -(b + s) / 2.0
    } else {
        -(b - s) / 2.0
    };
    if q == c(0.0) {
        // b and disc both vanish: double root 0 (cc = 0 since a != 0).
        return (c(0.0), c(0.0));
    }
    (q / a, cc / q)
}

/// Mahler measure |lead| * prod_{|root| >= 1} |root|.
///
/// Degrees <= 2 are solved in closed form; higher degrees go through the
/// companion matrix. The zero polynomial returns 0.
pub fn mahler_measure(p: &MahlerPolynomial) -> f64 {
    let coeffs = p.trimmed();
    match coeffs.len() {
        0 => 0.0,
        1 => coeffs[0].norm(),
        2 => coeffs[1].norm().max(coeffs[0].norm()),
        3 => {
            let (r1, r2) = quadratic_roots(coeffs[2], coeffs[1], coeffs[0]);
            coeffs[2].norm() * r1.norm().max(1.0) * r2.norm().max(1.0)
        }
        n => {
            let deg = n - 1;
            let lead = coeffs[deg];
            let companion = faer::Mat::from_fn(deg, deg, |i, j| {
                if j == deg - 1 {
                    -coeffs[i] / lead
                } else if i == j + 1 {
                    c(1.0)
                } else {
                    c(0.0)
                }
            });
            let roots = companion
                .eigenvalues()
                .expect("companion eigenvalues converge");
            let mut m = lead.norm();
            for r in roots {
                let n = r.norm();
                if n >= 1.0 {
                    m *= n;
                }
            }
            m
        }
    }
}

/// Fuglede-Kadison determinant of I + z1 a + z2 t via the Mahler-root
/// closed form sqrt(M(P_z)). Exact 0 at the four tr-singular points,
/// where P_z degenerates to the zero polynomial.
pub fn fk_det_closed(z1: C64, z2: C64) -> f64 {
    mahler_measure(&mahler_p_z(z1, z2)).sqrt()
}

/// Determinant estimate from the defining integral, with the quadrature
/// convergence flag attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetEstimate {
    pub value: f64,
    pub converged: bool,
    pub panels: u64,
}

fn det_from_log_integral(est: RealQuadrature) -> DetEstimate {
    DetEstimate {
        value: (est.value / (2.0 * TAU)).exp(),
        converged: est.converged,
        panels: est.panels,
    }
}

/// Fuglede-Kadison determinant by quadrature of
/// exp((1/4pi) int_0^{2pi} log|1 - z1^2 - z2^2 - 2 z1 z2 cos t| dt),
/// the independent cross-check of [`fk_det_closed`].
pub fn fk_det_quadrature(z1: C64, z2: C64, cfg: &QuadratureConfig) -> DetEstimate {
    let a = c(1.0) - z1 * z1 - z2 * z2;
    let b = -2.0 * z1 * z2;
    det_from_log_integral(periodic_log_affine_quadrature(a, b, cfg))
}

/// Three-variable determinant exp((1/4pi) int log|z0^2 - z1^2 - z2^2 -
/// 2 z1 z2 cos t| dt); homogeneous of degree 1, and (1, z1, z2) reduces
/// to [`fk_det_quadrature`].
pub fn fk_det_general(z: Complex3Point, cfg: &QuadratureConfig) -> DetEstimate {
    let a = z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2;
    let b = -2.0 * z.z1 * z.z2;
    det_from_log_integral(periodic_log_affine_quadrature(a, b, cfg))
}

/// tr R^{-1} at (1, z1, z2) via (1/2pi) int_0^{2pi}
/// dt / (1 - z1^2 - z2^2 - 2 z1 z2 cos t). The point is membership-checked
/// first; inside the spectrum the integrand has a non-integrable pole.
pub fn trace_resolvent(z1: C64, z2: C64, cfg: &QuadratureConfig) -> Result<Quadrature> {
    if in_spectrum_dinf(Complex3Point::new(c(1.0), z1, z2), 1e-9) {
        return Err(Error::PointInSpectrum);
    }
    let a = c(1.0) - z1 * z1 - z2 * z2;
    let b = -2.0 * z1 * z2;
    let q = periodic_quadrature(|t| c(1.0) / (a + b * t.cos()), cfg);
    Ok(Quadrature {
        value: q.value / TAU,
        converged: q.converged,
        panels: q.panels,
    })
}

/// Finite dihedral resolvent trace
/// (1/n) sum_k z0 / (z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(2 pi k / n)),
/// the D_n Riemann sum converging to [`trace_resolvent`].
pub fn dn_trace_resolvent(z: Complex3Point, n: usize) -> Result<C64> {
    assert!(n >= 1, "n must be positive");
    let a = z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2;
    let b = -2.0 * z.z1 * z.z2;
    let scale = 1.0 + a.norm() + b.norm();
    let mut sum = c(0.0);
    for k in 0..n {
        let denom = a + b * (TAU * k as f64 / n as f64).cos();
        if denom.norm() <= 1e-12 * scale {
            return Err(Error::PoleAtNode);
        }
        sum += z.z0 / denom;
    }
    Ok(sum / n as f64)
}

const WINDING_X_GRID: usize = 11;

fn winding_at(path: &ClosedPath, x: f64) -> Result<i64> {
    let f = move |z1: C64, z2: C64| c(1.0) - z1 * z1 - z2 * z2 - 2.0 * x * z1 * z2;
    let dense = path.densify_for(f)?;
    let change = dense.image_argument_change(f)?;
    let w = change / TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 1e-6 {
        return Err(Error::SampleTooCoarse);
    }
    Ok(rounded as i64)
}

/// Winding number of L_x composed with the path around 0.
///
/// The result is provably independent of x in [-1, 1]; that independence
/// is asserted over an 11-point x-grid on every call, so a path sampled
/// too coarsely to wind consistently is rejected rather than mis-counted.
pub fn winding_number(path: &ClosedPath, x: f64) -> Result<i64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("x = {x} outside [-1, 1]")));
    }
    let w = winding_at(path, x)?;
    for k in 0..WINDING_X_GRID {
        let xg = -1.0 + 2.0 * k as f64 / (WINDING_X_GRID - 1) as f64;
        if winding_at(path, xg)? != w {
            return Err(Error::SampleTooCoarse);
        }
    }
    Ok(w)
}

/// Homology coupling of a closed path with the trace of the
/// Maurer-Cartan form: W(path)/2, valued in half-integers.
pub fn homology_coupling(path: &ClosedPath) -> Result<f64> {
    Ok(winding_number(path, 0.0)? as f64 / 2.0)
}

/// Verification-mode coupling: the double integral
/// (1/4pi) int_0^{2pi} [argument change of L_{cos t} along the path] dt
/// by midpoint quadrature in t with continuous log tracking along the
/// path. Slow; exists as an independent oracle for [`homology_coupling`].
pub fn homology_coupling_direct(path: &ClosedPath, theta_panels: u32) -> Result<f64> {
    assert!(theta_panels >= 1);
    let m = theta_panels as usize;
    let mut sum = 0.0;
    for j in 0..m {
        let theta = TAU * (j as f64 + 0.5) / m as f64;
        let x = theta.cos();
        let f = move |z1: C64, z2: C64| c(1.0) - z1 * z1 - z2 * z2 - 2.0 * x * z1 * z2;
        let dense = path.densify_for(f)?;
        sum += dense.image_argument_change(f)?;
    }
    // (1/4pi) * (2pi/m) * sum(change/2pi) = sum / (4 pi m).
    Ok(sum / (2.0 * TAU * m as f64))
}

/// The four tr-singular points (+-1, 0), (0, +-1): the only spectrum
/// points where the Fuglede-Kadison determinant vanishes.
pub fn tr_singular_points() -> [(C64, C64); 4] {
    [
        (c(1.0), c(0.0)),
        (c(-1.0), c(0.0)),
        (c(0.0), c(1.0)),
        (c(0.0), c(-1.0)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
        C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn mahler_examples() {
        let m = |v: Vec<C64>| mahler_measure(&MahlerPolynomial::new(v));
        assert_eq!(m(vec![c(0.0), c(1.0)]), 1.0);
        assert_eq!(m(vec![c(-4.0), c(0.0), c(1.0)]), 4.0);
        let half = m(vec![c(-0.5), c(0.0), c(-0.5)]);
        assert!((half - 0.5).abs() < 1e-15);
        assert_eq!(m(vec![]), 0.0);
        assert_eq!(m(vec![c(0.0), c(0.0), c(0.0)]), 0.0);
        // Trailing zeros do not change the polynomial.
        assert_eq!(m(vec![c(-4.0), c(0.0), c(1.0), c(0.0), c(0.0)]), 4.0);
    }

    #[test]
    fn mahler_companion_path_matches_closed_form() {
        // (w - 2)(w - 1/2)(w + 3): roots 2, 1/2, -3, measure 6.
        let cubic = MahlerPolynomial::new(vec![c(3.0), c(-6.5), c(0.5), c(1.0)]);
        assert!((mahler_measure(&cubic) - 6.0).abs() < 1e-12);
        // Multiplying by w inserts a root at 0 and leaves the measure
        // fixed, turning any quadratic into a companion-path cubic.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let q = vec![rc(&mut rng, 2.0), rc(&mut rng, 2.0), rc(&mut rng, 2.0)];
            if q[2].norm() < 0.1 {
                continue;
            }
            let closed = mahler_measure(&MahlerPolynomial::new(q.clone()));
            let mut lifted = vec![c(0.0)];
            lifted.extend_from_slice(&q);
            let companion = mahler_measure(&MahlerPolynomial::new(lifted));
            assert!(
                (closed - companion).abs() <= 1e-10 * closed.max(1.0),
                "{q:?}"
            );
        }
    }

    #[test]
    fn fk_closed_examples() {
        assert_eq!(fk_det_closed(c(0.0), c(0.0)), 1.0);
        for (z1, z2) in tr_singular_points() {
            assert_eq!(fk_det_closed(z1, z2), 0.0);
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((fk_det_closed(c(r), c(r)) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fk_closed_symmetries_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let z1 = rc(&mut rng, 2.0);
            let z2 = rc(&mut rng, 2.0);
            let d = fk_det_closed(z1, z2);
            assert!((d - fk_det_closed(z2, z1)).abs() < 1e-12);
            assert!((d - fk_det_closed(-z1, -z2)).abs() < 1e-12);
            let s = (z1 - c(1.0)).norm().min((z1 + c(1.0)).norm()) + z2.norm();
            let t = (z2 - c(1.0)).norm().min((z2 + c(1.0)).norm()) + z1.norm();
            if s.min(t) > 0.05 {
                assert!(d > 0.0, "{z1:?} {z2:?}");
            }
        }
    }

    #[test]
    fn fk_closed_on_quadric() {
        for k in 1..100 {
            let z1 = k as f64 / 100.0;
            let z2 = (1.0 - z1 * z1).sqrt();
            let expect = (z1 * z2).abs().sqrt();
            assert!((fk_det_closed(c(z1), c(z2)) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn fk_quadrature_matches_closed_form() {
        let cfg = QuadratureConfig {
            initial_panels: 112,
            abs_tol: 1e-10,
            max_doublings: 16,
        };
        for (z1, z2) in [
            (c(0.0), c(0.0)),
            (c(0.5), c(0.3)),
            (c(1.5), c(0.9)),
            (C64::new(0.3, 0.1), c(0.7)),
        ] {
            let q = fk_det_quadrature(z1, z2, &cfg);
            assert!(
                (q.value - fk_det_closed(z1, z2)).abs() < 1e-6,
                "{z1:?} {z2:?} {q:?}"
            );
        }
        // Self-consistency at two starting resolutions.
        let fine = QuadratureConfig {
            initial_panels: 224,
            ..cfg
        };
        let a = fk_det_quadrature(C64::new(0.3, 0.1), c(0.7), &cfg);
        let b = fk_det_quadrature(C64::new(0.3, 0.1), c(0.7), &fine);
        assert!((a.value - b.value).abs() < 1e-8);
    }

    #[test]
    fn fk_general_specializes_and_scales() {
        let cfg = QuadratureConfig::default();
        let z1 = C64::new(0.4, 0.2);
        let z2 = c(0.9);
        let three = fk_det_general(Complex3Point::new(c(1.0), z1, z2), &cfg);
        let two = fk_det_quadrature(z1, z2, &cfg);
        assert_eq!(three.value, two.value);

        let d = fk_det_general(Complex3Point::from_reals(2.0, 0.0, 0.0), &cfg);
        assert!((d.value - 2.0).abs() < 1e-12);

        let z = Complex3Point::new(c(1.1), z1, z2);
        let scaled = Complex3Point::new(2.0 * z.z0, 2.0 * z.z1, 2.0 * z.z2);
        let base = fk_det_general(z, &cfg).value;
        let double = fk_det_general(scaled, &cfg).value;
        assert!((double - 2.0 * base).abs() < 1e-8 * (1.0 + base));
    }

    #[test]
    fn trace_resolvent_examples() {
        let cfg = QuadratureConfig::default();
        let q = trace_resolvent(c(0.0), c(0.0), &cfg).unwrap();
        assert_eq!(q.value, c(1.0));
        let q = trace_resolvent(c(0.5), c(0.0), &cfg).unwrap();
        assert!((q.value - c(4.0 / 3.0)).norm() < 1e-12);
        assert_eq!(
            trace_resolvent(c(1.0), c(0.0), &cfg),
            Err(Error::PointInSpectrum)
        );
    }

    #[test]
    fn trace_resolvent_matches_dn_sum() {
        let cfg = QuadratureConfig::default();
        let z1 = C64::new(0.3, 0.2);
        let z2 = c(0.4);
        let q = trace_resolvent(z1, z2, &cfg).unwrap();
        let dn = dn_trace_resolvent(Complex3Point::new(c(1.0), z1, z2), 4096).unwrap();
        assert!((q.value - dn).norm() < 1e-6);
    }

    #[test]
    fn dn_trace_examples() {
        for n in [1, 5, 64] {
            let v = dn_trace_resolvent(Complex3Point::from_reals(1.0, 0.0, 0.0), n).unwrap();
            assert_eq!(v, c(1.0));
            let v = dn_trace_resolvent(Complex3Point::from_reals(1.0, 0.5, 0.0), n).unwrap();
            assert!((v - c(4.0 / 3.0)).norm() < 1e-14);
        }
        assert_eq!(
            dn_trace_resolvent(Complex3Point::from_reals(1.0, 0.5, 0.5), 2),
            Err(Error::PoleAtNode)
        );
    }

    #[test]
    fn dn_trace_matches_matrix_inverse() {
        use crate::numerics::trace_inverse;
        use crate::spectrum::dn_pencil;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [1usize, 2, 3, 5, 8, 17, 32] {
            let pencil = dn_pencil(n);
            for _ in 0..5 {
                let z = Complex3Point::new(
                    rc(&mut rng, 1.5) + c(2.5),
                    rc(&mut rng, 1.0),
                    rc(&mut rng, 1.0),
                );
                let sum = match dn_trace_resolvent(z, n) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let direct = trace_inverse(&pencil.evaluate_point(z).unwrap()).unwrap();
                assert!((sum - direct).norm() < 1e-9, "n={n} {z:?}");
            }
        }
    }

    #[test]
    fn winding_examples() {
        let gamma = ClosedPath::gamma_half_circle(256);
        assert_eq!(winding_number(&gamma, 0.0).unwrap(), 1);
        assert_eq!(winding_number(&gamma, 1.0).unwrap(), 1);
        assert_eq!(winding_number(&gamma.reversed(), 0.5).unwrap(), -1);
        assert_eq!(winding_number(&gamma.doubled(), 0.0).unwrap(), 2);

        let constant = ClosedPath::new(vec![(c(0.2), c(0.1)); 8], true);
        assert_eq!(winding_number(&constant, 0.0).unwrap(), 0);

        assert!(matches!(
            winding_number(&gamma, 1.5),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn winding_refinement_invariance() {
        let coarse = ClosedPath::gamma_half_circle(64);
        let fine = ClosedPath::gamma_half_circle(512);
        assert_eq!(
            winding_number(&coarse, 0.3).unwrap(),
            winding_number(&fine, 0.3).unwrap()
        );
    }

    #[test]
    fn coupling_examples() {
        let gamma = ClosedPath::gamma_half_circle(256);
        assert_eq!(homology_coupling(&gamma).unwrap(), 0.5);
        assert_eq!(homology_coupling(&gamma.doubled()).unwrap(), 1.0);
        assert_eq!(homology_coupling(&gamma.reversed()).unwrap(), -0.5);

        let small: Vec<(C64, C64)> = (0..32)
            .map(|k| {
                let t = TAU * k as f64 / 32.0;
                (c(0.1 * t.cos()), c(0.1 * t.sin()))
            })
            .collect();
        let loop_near_origin = ClosedPath::new(small, true);
        assert_eq!(homology_coupling(&loop_near_origin).unwrap(), 0.0);
    }

    #[test]
    fn coupling_direct_oracle_agrees() {
        let gamma = ClosedPath::gamma_half_circle(256);
        let direct = homology_coupling_direct(&gamma, 32).unwrap();
        assert!((direct - 0.5).abs() < 1e-9, "{direct}");
    }

    #[test]
    fn singular_points_kill_determinant() {
        for (z1, z2) in tr_singular_points() {
            assert_eq!(fk_det_closed(z1, z2), 0.0);
            assert!(in_spectrum_dinf(Complex3Point::new(c(1.0), z1, z2), 1e-9));
        }
    }
}
