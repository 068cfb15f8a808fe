//! Closed-form joint-spectrum membership for the infinite dihedral group,
//! its finite quotients D_n, and projection pencils, plus the Grigorchuk
//! Q_n pencil with its determinant recursion.
//!
//! The dihedral spectrum is the union over x in [-1, 1] of the quadrics
//! z0^2 - z1^2 - z2^2 - 2 z1 z2 x = 0; membership inverts the family to the
//! parameter x = (z0^2 - z1^2 - z2^2) / (2 z1 z2) and applies an interval
//! test with tolerance slack, which is the numeric meaning given here to
//! the set union.

use crate::dynamics::map_f;
use crate::error::{Error, Result};
use crate::numerics::{mat_det_log, C64, CMatrix, LogComplex};
use crate::pencil::{Complex3Point, Pencil};
use crate::selfsimilar::{build_level_rep, BuiltinAutomaton};
use std::collections::BTreeSet;
use std::f64::consts::TAU;

/// Default tolerance for membership predicates.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// The quadric form L_x(z) = z0^2 - z1^2 - z2^2 - 2 z1 z2 x.
fn quadric(z: Complex3Point, x: C64) -> C64 {
    z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2 - 2.0 * z.z1 * z.z2 * x
}

/// Spectral parameter (z0^2 - z1^2 - z2^2) / (2 z1 z2); absent when
/// z1 z2 = 0.
pub fn spectrum_parameter(z: Complex3Point) -> Option<C64> {
    let denom = 2.0 * z.z1 * z.z2;
    if denom == c(0.0) {
        return None;
    }
    Some((z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2) / denom)
}

/// Dihedral joint-spectrum membership: the parameter must be real within
/// `tol` and lie in [-1 - tol, 1 + tol]; on the degenerate set z1 z2 = 0
/// the quadric itself must vanish within `tol`.
pub fn in_spectrum_dinf(z: Complex3Point, tol: f64) -> bool {
    match spectrum_parameter(z) {
        Some(x) => x.im.abs() <= tol && (-1.0 - tol..=1.0 + tol).contains(&x.re),
        None => (z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2).norm() <= tol,
    }
}

/// Projection-pencil membership: parameter -(z0^2 + z0(z1+z2)) / (z1 z2)
/// real in [0, 1] within `tol`; on z1 z2 = 0 the product z0 (z0+z1+z2)
/// must vanish within `tol`.
pub fn in_spectrum_projections(z: Complex3Point, tol: f64) -> bool {
    let denom = z.z1 * z.z2;
    if denom == c(0.0) {
        return (z.z0 * (z.z0 + z.z1 + z.z2)).norm() <= tol;
    }
    let x = -(z.z0 * z.z0 + z.z0 * (z.z1 + z.z2)) / denom;
    x.im.abs() <= tol && (-tol..=1.0 + tol).contains(&x.re)
}

/// The two solution curves of the slice through (lambda1, lambda2):
/// w = +-(lambda1^2 + lambda2^2 + 2 lambda1 lambda2 x)^{-1/2}, so that
/// (1, w lambda1, w lambda2) lies on the quadric with parameter x.
pub fn slice_curves(lambda1: C64, lambda2: C64, x: f64) -> Result<(C64, C64)> {
    let radicand = lambda1 * lambda1 + lambda2 * lambda2 + 2.0 * lambda1 * lambda2 * x;
    if radicand.norm() == 0.0 {
        return Err(Error::DegenerateSlice);
    }
    let w = 1.0 / radicand.sqrt();
    Ok((w, -w))
}

/// The n angles 2 k pi / n, k = 0..n-1.
pub fn dn_angles(n: usize) -> Vec<f64> {
    assert!(n >= 1, "n must be positive");
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// Closed-form D_n determinant: the product over k of
/// z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(2 k pi / n).
pub fn dn_det_closed(z: Complex3Point, n: usize) -> C64 {
    dn_angles(n)
        .iter()
        .map(|t| quadric(z, c(t.cos())))
        .product()
}

/// Number of vanishing factors of [`dn_det_closed`] within `tol`; counts
/// coincident sheets, which the boolean membership ignores.
pub fn dn_vanishing_factors(z: Complex3Point, n: usize, tol: f64) -> usize {
    dn_angles(n)
        .iter()
        .filter(|t| quadric(z, c(t.cos())).norm() <= tol)
        .count()
}

/// D_n membership: some factor of the closed-form determinant vanishes
/// within `tol`.
pub fn in_spectrum_dn(z: Complex3Point, n: usize, tol: f64) -> bool {
    dn_vanishing_factors(z, n, tol) > 0
}

/// The 2n x 2n regular-representation pencil of D_n: identity,
/// lambda(a) = [[0, T], [T*, 0]], lambda(t) = [[0, I], [I, 0]] with T the
/// cyclic shift sending e_j to e_{j+1 mod n}.
pub fn dn_pencil(n: usize) -> Pencil {
    assert!(n >= 1, "n must be positive");
    let zero = c(0.0);
    let one = c(1.0);
    let shift = |i: usize, j: usize| if (j + 1) % n == i { one } else { zero };
    let a = CMatrix::from_fn(2 * n, |i, j| {
        if i < n && j >= n {
            shift(i, j - n)
        } else if i >= n && j < n {
            // Adjoint block: T*[i, j] = T[j, i].
            shift(j, i - n)
        } else {
            zero
        }
    });
    let t = CMatrix::from_fn(2 * n, |i, j| {
        if i < n && j >= n {
            if i == j - n { one } else { zero }
        } else if i >= n && j < n {
            if i - n == j { one } else { zero }
        } else {
            zero
        }
    });
    Pencil::new(vec![CMatrix::identity(2 * n), a, t])
}

/// The Grigorchuk pencil at tree level n: evaluation produces
/// Q_n(lambda, mu) = -lambda a_n + b_n + c_n + d_n - (mu + 1) I.
#[derive(Debug, Clone)]
pub struct QnPencil {
    level: u32,
    gens: [Vec<u32>; 4],
}

impl QnPencil {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        1usize << self.level
    }

    /// Dense Q_n(lambda, mu); real symmetric for real arguments.
    pub fn eval(&self, lambda: C64, mu: C64) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim);
        let [a, b, c_, d] = &self.gens;
        for (w, &img) in a.iter().enumerate() {
            m[(img as usize, w)] -= lambda;
        }
        for p in [b, c_, d] {
            for (w, &img) in p.iter().enumerate() {
                m[(img as usize, w)] += c(1.0);
            }
        }
        for k in 0..dim {
            m[(k, k)] -= mu + c(1.0);
        }
        m
    }
}

/// Build the level-n Grigorchuk pencil.
pub fn qn_pencil(n: u32) -> Result<QnPencil> {
    let rep = build_level_rep(&BuiltinAutomaton::Grigorchuk.build(), n)?;
    let take = |name: &str| rep.permutation(name).expect("grigorchuk generator").to_vec();
    Ok(QnPencil {
        level: n,
        gens: [take("a"), take("b"), take("c"), take("d")],
    })
}

/// Phi_n by the square-and-subtract recursion, in plain arithmetic.
///
/// The recursion squares magnitudes, so for n >= 9 and |lambda| > 1 the
/// values overflow f64; use [`phi_eval_log`] there.
pub fn phi_eval(lambda: C64, mu: C64, n: u32) -> C64 {
    match n {
        0 => c(2.0) - mu - lambda,
        1 => c(2.0) - mu + lambda,
        _ => {
            let mut phi = mu * mu - c(4.0) - lambda * lambda;
            let mut pw = 2.0 * lambda;
            for _ in 2..n {
                let next = phi * phi - 2.0 * pw * pw;
                pw *= pw;
                phi = next;
            }
            phi
        }
    }
}

/// Phi_n in log-magnitude form; exact for the whole recursion depth the
/// level cap allows.
pub fn phi_eval_log(lambda: C64, mu: C64, n: u32) -> LogComplex {
    if n <= 1 {
        return LogComplex::from_value(phi_eval(lambda, mu, n));
    }
    let mut phi = LogComplex::from_value(mu * mu - c(4.0) - lambda * lambda);
    let mut pw = LogComplex::from_value(2.0 * lambda);
    let two = LogComplex::from_value(c(2.0));
    for _ in 2..n {
        let next = phi.mul(&phi).sub(&two.mul(&pw).mul(&pw));
        pw = pw.mul(&pw);
        phi = next;
    }
    phi
}

/// The cosine-product form of Phi_n for n >= 2:
/// prod over t of (mu^2 - 4 - lambda^2 - 4 lambda cos(2 pi (2t+1) / 2^n)).
pub fn phi_cosine_product_log(lambda: C64, mu: C64, n: u32) -> LogComplex {
    assert!(n >= 2, "cosine product starts at n = 2");
    let base = mu * mu - c(4.0) - lambda * lambda;
    let mut acc = LogComplex::from_value(c(1.0));
    for t in 0..1u64 << (n - 2) {
        let angle = TAU * (2 * t + 1) as f64 / (1u64 << n) as f64;
        acc = acc.mul(&LogComplex::from_value(base - 4.0 * lambda * angle.cos()));
    }
    acc
}

/// Residuals of the two Q_n determinant identities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QnIdentityResiduals {
    /// |det Q_n / (Phi_0 ... Phi_n) - 1|.
    pub product: f64,
    /// |det Q_n / ((mu^2 - 4)^{2^{n-2}} det Q_{n-1}(F)) - 1|; absent below
    /// n = 2 where the exponent is ill-defined.
    pub renormalization: Option<f64>,
}

/// Compare mat_det of Q_n against both closed forms, in log scale.
///
/// The renormalization identity divides by 4 - mu^2; points too close to
/// that pole are rejected rather than amplified.
pub fn qn_det_identity_check(lambda: C64, mu: C64, n: u32) -> Result<QnIdentityResiduals> {
    let qn = qn_pencil(n)?;
    let det = mat_det_log(&qn.eval(lambda, mu));
    let mut product_form = LogComplex::from_value(c(1.0));
    for k in 0..=n {
        product_form = product_form.mul(&phi_eval_log(lambda, mu, k));
    }
    let product = det.relative_diff(&product_form);
    let renormalization = if n >= 2 {
        let pole = c(4.0) - mu * mu;
        if pole.norm() <= 1e-9 * (1.0 + mu.norm_sqr()) {
            return Err(Error::RenormalizationPole);
        }
        let (lambda2, mu2) = map_f(lambda, mu).expect("pole excluded above");
        let prev = qn_pencil(n - 1)?;
        // The scalar factor is (mu^2 - 4)^{2^{n-2}}: at n = 2 the odd
        // exponent makes the sign observable, and the 4x4 vs 2x2
        // determinants fix it as mu^2 - 4, not 4 - mu^2.
        let rhs = LogComplex::from_value(-pole)
            .powi(1u64 << (n - 2))
            .mul(&mat_det_log(&prev.eval(lambda2, mu2)));
        Some(det.relative_diff(&rhs))
    } else {
        None
    };
    Ok(QnIdentityResiduals {
        product,
        renormalization,
    })
}

/// Koopman eigen-angle set: 2 pi j / 2^m over 2 <= m <= n,
/// 1 <= j <= 2^{m-1} - 1, deduplicated across levels.
pub fn koopman_angles(n: u32) -> Vec<f64> {
    assert!(n >= 2, "defined for n >= 2");
    let mut fractions: BTreeSet<(u64, u32)> = BTreeSet::new();
    for m in 2..=n {
        for j in 1..1u64 << (m - 1) {
            let tz = j.trailing_zeros().min(m);
            fractions.insert((j >> tz, m - tz));
        }
    }
    let mut angles: Vec<f64> = fractions
        .into_iter()
        .map(|(j, m)| TAU * j as f64 / (1u64 << m) as f64)
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mat_det;
    use crate::pencil::projection_pencil_from_dihedral;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn real_point(z0: f64, z1: f64, z2: f64) -> Complex3Point {
        Complex3Point::from_reals(z0, z1, z2)
    }

    fn random_complex(rng: &mut ChaCha8Rng, r: f64) -> C64 {
        C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn parameter_examples() {
        assert_eq!(
            spectrum_parameter(real_point(1.0, 1.0, 1.0)),
            Some(c(-0.5))
        );
        assert_eq!(spectrum_parameter(real_point(1.0, 0.0, 1.0)), None);
        assert_eq!(spectrum_parameter(real_point(0.0, 1.0, 1.0)), Some(c(-1.0)));
    }

    #[test]
    fn dinf_membership_examples() {
        let tol = DEFAULT_MEMBERSHIP_TOL;
        assert!(in_spectrum_dinf(real_point(1.0, 0.0, 1.0), tol));
        assert!(!in_spectrum_dinf(real_point(1.0, 0.5, 0.0), tol));
        assert!(in_spectrum_dinf(real_point(1.0, 1.0, 1.0), tol));
    }

    #[test]
    fn dinf_membership_symmetries() {
        let tol = DEFAULT_MEMBERSHIP_TOL;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let z = Complex3Point::new(
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 2.0),
            );
            let m = in_spectrum_dinf(z, tol);
            let swapped = Complex3Point::new(z.z0, z.z2, z.z1);
            assert_eq!(in_spectrum_dinf(swapped, tol), m);
            let negated = Complex3Point::new(z.z0, -z.z1, z.z2);
            assert_eq!(in_spectrum_dinf(negated, tol), m);
            let scale = C64::new(1.7, -0.4);
            let scaled = Complex3Point::new(scale * z.z0, scale * z.z1, scale * z.z2);
            assert_eq!(in_spectrum_dinf(scaled, tol), m);
        }
    }

    #[test]
    fn projection_membership_examples() {
        let tol = DEFAULT_MEMBERSHIP_TOL;
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let z = Complex3Point::new(
                c(0.0),
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 2.0),
            );
            assert!(in_spectrum_projections(z, tol));
        }
        assert!(in_spectrum_projections(real_point(1.0, -1.0, 0.0), tol));
        assert!(!in_spectrum_projections(real_point(1.0, 1.0, 1.0), tol));
    }

    #[test]
    fn projection_membership_matches_change_of_variables() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..500 {
            let z = Complex3Point::new(
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 2.0),
            );
            // Slack on one side avoids flips at the tolerance boundary.
            let direct = in_spectrum_projections(z, 1e-9);
            let composed = in_spectrum_dinf(projection_pencil_from_dihedral(z), 1e-7);
            if direct {
                assert!(composed, "{z:?}");
            }
        }
    }

    #[test]
    fn slice_examples_and_membership() {
        let (wp, wm) = slice_curves(c(1.0), c(0.0), 0.37).unwrap();
        assert!((wp - c(1.0)).norm() < 1e-15);
        assert!((wm + c(1.0)).norm() < 1e-15);
        let (wp, wm) = slice_curves(c(1.0), c(1.0), 1.0).unwrap();
        assert!((wp - c(0.5)).norm() < 1e-15);
        assert!((wm + c(0.5)).norm() < 1e-15);
        assert_eq!(slice_curves(c(1.0), c(1.0), -1.0), Err(Error::DegenerateSlice));

        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let l1 = random_complex(&mut rng, 1.5);
            let l2 = random_complex(&mut rng, 1.5);
            let x = rng.gen_range(-1.0..1.0);
            if let Ok((wp, wm)) = slice_curves(l1, l2, x) {
                for w in [wp, wm] {
                    let z = Complex3Point::new(c(1.0), w * l1, w * l2);
                    assert!(in_spectrum_dinf(z, 1e-10), "{l1:?} {l2:?} {x}");
                }
            }
        }
    }

    #[test]
    fn dn_angles_examples() {
        assert_eq!(dn_angles(1), vec![0.0]);
        let a2 = dn_angles(2);
        assert!((a2[1] - PI).abs() < 1e-15);
        let a4 = dn_angles(4);
        assert_eq!(a4.len(), 4);
        assert!((a4[1] - PI / 2.0).abs() < 1e-15);
        assert!((a4[3] - 3.0 * PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn dn_det_examples() {
        assert!(dn_det_closed(real_point(2.0, 1.0, 1.0), 1).norm() < 1e-15);
        for n in [1, 3, 7] {
            assert_eq!(dn_det_closed(real_point(1.0, 0.0, 0.0), n), c(1.0));
        }
    }

    #[test]
    fn dn_pencil_structure() {
        for n in [1usize, 2, 3, 5] {
            let p = dn_pencil(n);
            let a = &p.matrices()[1];
            let t = &p.matrices()[2];
            assert_eq!(a.mul(a), CMatrix::identity(2 * n), "a^2 at n={n}");
            assert_eq!(t.mul(t), CMatrix::identity(2 * n), "t^2 at n={n}");
            // T^n = I: the cyclic block returns to the identity.
            let mut power = a.mul(t);
            let atn = power.clone();
            for _ in 1..n {
                power = power.mul(&atn);
            }
            assert_eq!(power, CMatrix::identity(2 * n), "(at)^n at n={n}");
        }
    }

    #[test]
    fn dn_pencil_det_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for n in [1usize, 2, 3, 5, 8] {
            for _ in 0..5 {
                let z = Complex3Point::new(
                    random_complex(&mut rng, 2.0),
                    random_complex(&mut rng, 2.0),
                    random_complex(&mut rng, 2.0),
                );
                let direct = mat_det(&dn_pencil(n).evaluate_point(z).unwrap());
                let closed = dn_det_closed(z, n);
                assert!(
                    (direct - closed).norm() <= 1e-9 * closed.norm().max(1.0),
                    "n={n} {z:?}"
                );
            }
        }
    }

    #[test]
    fn dn_membership_examples() {
        let tol = DEFAULT_MEMBERSHIP_TOL;
        assert!(in_spectrum_dn(real_point(2.0, 1.0, 1.0), 1, tol));
        for n in [1, 2, 5] {
            assert!(!in_spectrum_dn(real_point(1.0, 0.0, 0.0), n, tol));
        }
        assert!(in_spectrum_dn(real_point(1.0, 1.0, 1.0), 3, tol));
        // Coincident sheets at cos = +-1 double up; the counter sees them.
        assert_eq!(
            dn_vanishing_factors(real_point(0.0, 1.0, -1.0), 4, tol),
            1
        );
        assert_eq!(dn_vanishing_factors(real_point(0.0, 1.0, 1.0), 4, 1e-9), 1);
    }

    #[test]
    fn dn_zeros_lie_in_dinf_spectrum() {
        // Containment D_n subset D_inf: every vanishing factor has
        // cos(theta_k) in [-1, 1].
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..50 {
            let x = rng.gen_range(-1.0..1.0f64);
            let n = rng.gen_range(1..12usize);
            let k = rng.gen_range(0..n);
            let theta = TAU * k as f64 / n as f64;
            // Point on the k-th sheet via the slice construction.
            let l1 = random_complex(&mut rng, 1.0) + c(1.5);
            let l2 = random_complex(&mut rng, 1.0) + c(1.5);
            if let Ok((w, _)) = slice_curves(l1, l2, theta.cos()) {
                let z = Complex3Point::new(c(1.0), w * l1, w * l2);
                assert!(in_spectrum_dn(z, n, 1e-8));
                assert!(in_spectrum_dinf(z, 1e-8));
            }
            let _ = x;
        }
    }

    #[test]
    fn qn_examples() {
        let q0 = qn_pencil(0).unwrap();
        let m = q0.eval(c(1.5), c(0.25));
        assert_eq!(m.dim(), 1);
        assert!((m[(0, 0)] - (c(2.0) - c(0.25) - c(1.5))).norm() < 1e-15);

        let q1 = qn_pencil(1).unwrap();
        let m = q1.eval(c(1.0), c(0.0));
        assert_eq!(m[(0, 0)], c(2.0));
        assert_eq!(m[(0, 1)], c(-1.0));
        assert_eq!(m[(1, 0)], c(-1.0));
        assert_eq!(m[(1, 1)], c(2.0));
        assert!((mat_det(&m) - c(3.0)).norm() < 1e-12);
    }

    #[test]
    fn qn_real_symmetric_for_real_arguments() {
        for n in 0..=4u32 {
            let q = qn_pencil(n).unwrap();
            let m = q.eval(c(0.7), c(-1.3));
            assert!(m.is_real());
            for i in 0..m.dim() {
                for j in 0..i {
                    assert_eq!(m[(i, j)], m[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn phi_frozen_values() {
        let l = c(1.0);
        let m = c(0.0);
        assert_eq!(phi_eval(l, m, 0), c(1.0));
        assert_eq!(phi_eval(l, m, 1), c(3.0));
        assert_eq!(phi_eval(l, m, 2), c(-5.0));
        assert_eq!(phi_eval(l, m, 3), c(17.0));
    }

    #[test]
    fn phi_log_matches_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let l = random_complex(&mut rng, 1.5);
            let m = random_complex(&mut rng, 2.0);
            for n in 0..=6u32 {
                let plain = LogComplex::from_value(phi_eval(l, m, n));
                let logged = phi_eval_log(l, m, n);
                assert!(
                    logged.relative_diff(&plain) < 1e-10,
                    "n={n} {l:?} {m:?}"
                );
            }
        }
    }

    #[test]
    fn phi_cosine_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for _ in 0..5 {
            let l = random_complex(&mut rng, 1.5);
            let m = random_complex(&mut rng, 2.0);
            for n in 2..=5u32 {
                let rec = phi_eval_log(l, m, n);
                let prod = phi_cosine_product_log(l, m, n);
                assert!(prod.relative_diff(&rec) < 1e-8, "n={n} {l:?} {m:?}");
            }
        }
    }

    #[test]
    fn qn_identities_small_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        for n in 0..=3u32 {
            for _ in 0..5 {
                let l = random_complex(&mut rng, 1.5);
                let m = random_complex(&mut rng, 1.5);
                if (c(4.0) - m * m).norm() < 0.1 {
                    continue;
                }
                let r = qn_det_identity_check(l, m, n).unwrap();
                assert!(r.product < 1e-9, "n={n} product {r:?}");
                if let Some(renorm) = r.renormalization {
                    assert!(renorm < 1e-9, "n={n} renorm {r:?}");
                }
            }
        }
        assert_eq!(
            qn_det_identity_check(c(1.0), c(2.0), 3),
            Err(Error::RenormalizationPole)
        );
    }

    #[test]
    fn koopman_angle_examples() {
        let a2 = koopman_angles(2);
        assert_eq!(a2.len(), 1);
        assert!((a2[0] - PI / 2.0).abs() < 1e-15);

        let a3 = koopman_angles(3);
        assert_eq!(a3.len(), 3);
        assert!((a3[0] - PI / 4.0).abs() < 1e-15);
        assert!((a3[1] - PI / 2.0).abs() < 1e-15);
        assert!((a3[2] - 3.0 * PI / 4.0).abs() < 1e-15);

        // Aggregate set equals { 2 pi j / 2^n : 1 <= j <= 2^{n-1} - 1 }.
        for n in 2..=8u32 {
            let angles = koopman_angles(n);
            assert_eq!(angles.len(), (1usize << (n - 1)) - 1);
            for (idx, angle) in angles.iter().enumerate() {
                let expected = TAU * (idx + 1) as f64 / (1u64 << n) as f64;
                assert!((angle - expected).abs() < 1e-12);
            }
        }
    }
}
