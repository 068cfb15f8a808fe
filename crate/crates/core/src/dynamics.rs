//! Spectral renormalization dynamics: the rational map F on C^2, the cubic
//! maps F1 and F2 on C^3, the semi-conjugacy to the Chebyshev map
//! alpha(x) = 2x^2 - 1, the factorization identities behind it, and
//! invariance sampling of the dihedral joint spectrum.

use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::pencil::Complex3Point;
use crate::spectrum::in_spectrum_dinf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// F(lambda, mu) = (2 lambda^2 / (4 - mu^2), mu + mu lambda^2 / (4 - mu^2)).
///
/// The pole set {mu^2 = 4} is surfaced as an error; the map is not
/// continued projectively.
pub fn map_f(lambda: C64, mu: C64) -> Result<(C64, C64)> {
    let pole = c(4.0) - mu * mu;
    if pole == c(0.0) {
        return Err(Error::PoleAtMuSquaredFour);
    }
    let l2 = lambda * lambda;
    Ok((2.0 * l2 / pole, mu + mu * l2 / pole))
}

/// Psi(lambda, mu) = (4 - mu^2 + lambda^2) / (4 lambda), the semi-conjugacy
/// onto the Chebyshev map: Psi(F(p)) = alpha(Psi(p)).
pub fn psi(lambda: C64, mu: C64) -> Result<C64> {
    if lambda == c(0.0) {
        return Err(Error::LambdaZero);
    }
    Ok((c(4.0) - mu * mu + lambda * lambda) / (4.0 * lambda))
}

/// The Chebyshev map alpha(x) = 2x^2 - 1.
pub fn alpha(x: C64) -> C64 {
    2.0 * x * x - c(1.0)
}

/// H_theta(lambda, mu) = 4 - mu^2 + lambda^2 - 4 lambda theta.
pub fn h_theta(lambda: C64, mu: C64, theta: C64) -> C64 {
    c(4.0) - mu * mu + lambda * lambda - 4.0 * lambda * theta
}

/// L_theta(z) = z0^2 - z1^2 - z2^2 - 2 z1 z2 theta.
pub fn l_theta(z: Complex3Point, theta: C64) -> C64 {
    z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2 - 2.0 * z.z1 * z.z2 * theta
}

/// Both preimages +-sqrt((1 + theta)/2) of theta under alpha, principal
/// branch.
pub fn chebyshev_preimages(theta: C64) -> (C64, C64) {
    let root = ((c(1.0) + theta) / 2.0).sqrt();
    (root, -root)
}

/// |H_theta(F(p)) - H_{theta_1}(p) H_{theta_2}(p) / (4 - mu^2)| with
/// theta_{1,2} the alpha-preimages of theta.
pub fn h_factorization_residual(lambda: C64, mu: C64, theta: C64) -> Result<f64> {
    let (l2, m2) = map_f(lambda, mu)?;
    let lhs = h_theta(l2, m2, theta);
    let (t1, t2) = chebyshev_preimages(theta);
    let rhs = h_theta(lambda, mu, t1) * h_theta(lambda, mu, t2) / (c(4.0) - mu * mu);
    Ok((lhs - rhs).norm())
}

/// F1(z) = (z0 (z0^2 - z1^2 - z2^2), z1^2 z2, (z0^2 - z2^2) z2).
pub fn map_f1(z: Complex3Point) -> Complex3Point {
    Complex3Point {
        z0: z.z0 * (z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2),
        z1: z.z1 * z.z1 * z.z2,
        z2: (z.z0 * z.z0 - z.z2 * z.z2) * z.z2,
    }
}

/// F2(z) = (z0 (z0^2 - z1^2 - z2^2), z1 z2^2, (z0^2 - z1^2) z1), the mirror
/// of F1 under z1 <-> z2.
pub fn map_f2(z: Complex3Point) -> Complex3Point {
    Complex3Point {
        z0: z.z0 * (z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2),
        z1: z.z1 * z.z2 * z.z2,
        z2: (z.z0 * z.z0 - z.z1 * z.z1) * z.z1,
    }
}

/// |L_{alpha(theta)}(F1(z)) - (z0^2 - z2^2) L_theta(z) L_{-theta}(z)|:
/// the factorization that makes the quadric family F1-invariant, indexed so
/// +-theta are the alpha-preimages of the image parameter.
pub fn l_factorization_residual(z: Complex3Point, theta: C64) -> f64 {
    let lhs = l_theta(map_f1(z), alpha(theta));
    let rhs = (z.z0 * z.z0 - z.z2 * z.z2) * l_theta(z, theta) * l_theta(z, -theta);
    (lhs - rhs).norm()
}

/// Closed-form Jacobian determinant of F1:
/// 6 z1 z2 (z0^2 - z2^2)(z0^2 - z1^2 - z2^2).
pub fn jacobian_f1(z: Complex3Point) -> C64 {
    6.0 * z.z1
        * z.z2
        * (z.z0 * z.z0 - z.z2 * z.z2)
        * (z.z0 * z.z0 - z.z1 * z.z1 - z.z2 * z.z2)
}

fn det3(m: [[C64; 3]; 3]) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Central-finite-difference Jacobian determinant of F1, the numeric oracle
/// for [`jacobian_f1`]. The maps are polynomial, so a real step recovers the
/// holomorphic partials.
pub fn jacobian_f1_fd(z: Complex3Point, step: f64) -> C64 {
    let h = c(step);
    let coords = z.coords();
    let mut jac = [[c(0.0); 3]; 3];
    for (j, _) in coords.iter().enumerate() {
        let mut plus = coords;
        let mut minus = coords;
        plus[j] += h;
        minus[j] -= h;
        let fp = map_f1(Complex3Point::new(plus[0], plus[1], plus[2])).coords();
        let fm = map_f1(Complex3Point::new(minus[0], minus[1], minus[2])).coords();
        for i in 0..3 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * step);
        }
    }
    det3(jac)
}

/// Outcome of invariance sampling: how many image points left the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    /// Total points tested (quadric samples plus edge families).
    pub samples: usize,
    pub failures: usize,
    /// Up to 8 failing pre-images, for diagnostics.
    pub failing_points: Vec<Complex3Point>,
}

/// Sample the dihedral spectrum and verify F1 maps it into itself.
///
/// Quadric points are built by drawing x in [-1, 1] and (z1, z2), then
/// solving z0^2 = z1^2 + z2^2 + 2 z1 z2 x; both z0 roots are kept. The
/// measure-zero edge families z1 = 0, z2 = 0 (with z0 matched so the
/// degenerate membership holds) and z0^2 = z2^2 (with z1 = -2 x z2) are
/// sampled explicitly since random draws never land on them.
pub fn spectrum_invariance_sample(count: usize, seed: u64) -> InvarianceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-8;
    let mut samples = 0usize;
    let mut failures = 0usize;
    let mut failing_points = Vec::new();
    let mut check = |z: Complex3Point| {
        samples += 1;
        if !in_spectrum_dinf(map_f1(z), tol) {
            failures += 1;
            if failing_points.len() < 8 {
                failing_points.push(z);
            }
        }
    };
    let draw = |rng: &mut ChaCha8Rng| -> C64 {
        C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))
    };

    for _ in 0..count.div_ceil(2) {
        let x = rng.gen_range(-1.0..1.0);
        let z1 = draw(&mut rng);
        let z2 = draw(&mut rng);
        let z0 = (z1 * z1 + z2 * z2 + 2.0 * z1 * z2 * x).sqrt();
        check(Complex3Point::new(z0, z1, z2));
        check(Complex3Point::new(-z0, z1, z2));
    }

    let edge = count.div_ceil(10).max(10);
    for _ in 0..edge {
        // z1 = 0, z0 = +-z2: the degenerate branch of the spectrum.
        let z2 = draw(&mut rng);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        check(Complex3Point::new(sign * z2, c(0.0), z2));
        // z2 = 0, z0 = +-z1.
        let z1 = draw(&mut rng);
        check(Complex3Point::new(sign * z1, z1, c(0.0)));
        // z0^2 = z2^2 with z1 = -2 x z2: spectrum points on the edge
        // family whose image is z1^2 (-z0, z2, 0).
        let x = rng.gen_range(-1.0..1.0);
        let z2 = draw(&mut rng);
        check(Complex3Point::new(sign * z2, -2.0 * x * z2, z2));
    }

    InvarianceReport {
        samples,
        failures,
        failing_points,
    }
}

/// Which map an orbit iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynMapId {
    F,
    F1,
    F2,
    Alpha,
}

impl DynMapId {
    /// Coordinate count of the map's phase space.
    pub fn arity(self) -> usize {
        match self {
            DynMapId::F => 2,
            DynMapId::F1 | DynMapId::F2 => 3,
            DynMapId::Alpha => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DynMapId::F => "F",
            DynMapId::F1 => "F1",
            DynMapId::F2 => "F2",
            DynMapId::Alpha => "alpha",
        }
    }
}

impl std::str::FromStr for DynMapId {
    type Err = Error;
    fn from_str(s: &str) -> Result<DynMapId> {
        match s {
            "F" | "f" => Ok(DynMapId::F),
            "F1" | "f1" => Ok(DynMapId::F1),
            "F2" | "f2" => Ok(DynMapId::F2),
            "alpha" | "Alpha" => Ok(DynMapId::Alpha),
            _ => Err(Error::DomainError(format!("unknown map `{s}`"))),
        }
    }
}

/// Reason an orbit stopped before its step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitHalt {
    /// Next step would divide by 4 - mu^2 = 0.
    Pole,
    /// Some coordinate magnitude exceeded 1e150.
    Overflow,
}

/// Iterated point sequence; `points[0]` is the start.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Vec<C64>>,
    pub halt: Option<OrbitHalt>,
}

const ORBIT_OVERFLOW: f64 = 1e150;

/// Iterate `map` from `start` for up to `steps` steps.
///
/// The start must match the map's arity. A pole at the start is an error;
/// a pole or overflow reached later halts the orbit with a flag, keeping
/// the points computed so far.
pub fn orbit(map: DynMapId, start: &[C64], steps: usize) -> Result<Orbit> {
    if start.len() != map.arity() {
        return Err(Error::ArityMismatch {
            expected: map.arity(),
            got: start.len(),
        });
    }
    if map == DynMapId::F && c(4.0) - start[1] * start[1] == c(0.0) {
        return Err(Error::PoleAtMuSquaredFour);
    }
    let mut points = vec![start.to_vec()];
    let mut halt = None;
    for _ in 0..steps {
        let cur = points.last().expect("nonempty");
        let next: Vec<C64> = match map {
            DynMapId::F => match map_f(cur[0], cur[1]) {
                Ok((l, m)) => vec![l, m],
                Err(_) => {
                    halt = Some(OrbitHalt::Pole);
                    break;
                }
            },
            DynMapId::F1 => map_f1(Complex3Point::new(cur[0], cur[1], cur[2]))
                .coords()
                .to_vec(),
            DynMapId::F2 => map_f2(Complex3Point::new(cur[0], cur[1], cur[2]))
                .coords()
                .to_vec(),
            DynMapId::Alpha => vec![alpha(cur[0])],
        };
        let blown = next
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite() || v.norm() > ORBIT_OVERFLOW);
        points.push(next);
        if blown {
            halt = Some(OrbitHalt::Overflow);
            break;
        }
    }
    Ok(Orbit { points, halt })
}
