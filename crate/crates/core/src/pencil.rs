//! Multiparameter pencils A(z) = sum z_i A_i, the built-in two-dimensional
//! representations of the infinite dihedral group, and sampled closed paths
//! for winding-number computations.
//!
//! Pencils carry the identity as coefficient 0, matching the convention
//! R(z) = z0 + z1 a + z2 t; the base-free variant is expressed by z0 = 0.

use crate::error::{Error, Result};
use crate::numerics::{track_argument, C64, CMatrix};
use std::f64::consts::TAU;

/// Point of C^3, the pencil variable of R(z) = z0 + z1 a + z2 t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3Point {
    pub z0: C64,
    pub z1: C64,
    pub z2: C64,
}

impl Complex3Point {
    pub fn new(z0: C64, z1: C64, z2: C64) -> Self {
        Complex3Point { z0, z1, z2 }
    }

    /// Convenience constructor from real coordinates.
    pub fn from_reals(z0: f64, z1: f64, z2: f64) -> Self {
        Complex3Point {
            z0: C64::new(z0, 0.0),
            z1: C64::new(z1, 0.0),
            z2: C64::new(z2, 0.0),
        }
    }

    pub fn coords(&self) -> [C64; 3] {
        [self.z0, self.z1, self.z2]
    }
}

/// Linear pencil with fixed coefficient matrices.
#[derive(Debug, Clone)]
pub struct Pencil {
    mats: Vec<CMatrix>,
}

impl Pencil {
    /// All matrices must be square of one common dimension.
    pub fn new(mats: Vec<CMatrix>) -> Self {
        assert!(!mats.is_empty(), "pencil needs at least one matrix");
        let dim = mats[0].dim();
        assert!(
            mats.iter().all(|m| m.dim() == dim),
            "pencil matrices must share one dimension"
        );
        Pencil { mats }
    }

    pub fn arity(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    /// Evaluate sum z_i A_i; `coords` length must equal the arity.
    pub fn evaluate(&self, coords: &[C64]) -> Result<CMatrix> {
        if coords.len() != self.mats.len() {
            return Err(Error::ArityMismatch {
                expected: self.mats.len(),
                got: coords.len(),
            });
        }
        let mut out = CMatrix::zeros(self.dim());
        for (c, m) in coords.iter().zip(self.mats.iter()) {
            out.axpy(*c, m);
        }
        Ok(out)
    }

    /// Evaluate an arity-3 pencil at a point of C^3.
    pub fn evaluate_point(&self, z: Complex3Point) -> Result<CMatrix> {
        self.evaluate(&z.coords())
    }
}

/// The irreducible representation rho_theta: pencil (I, rho(a), rho(t)) with
/// rho(a) = [[0, e^{i theta}], [e^{-i theta}, 0]] and rho(t) = [[0,1],[1,0]].
///
/// Its determinant at z is z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(theta).
pub fn rho_theta_pencil(theta: f64) -> Pencil {
    let mut a = CMatrix::zeros(2);
    a[(0, 1)] = C64::from_polar(1.0, theta);
    a[(1, 0)] = C64::from_polar(1.0, -theta);
    let mut t = CMatrix::zeros(2);
    t[(0, 1)] = C64::new(1.0, 0.0);
    t[(1, 0)] = C64::new(1.0, 0.0);
    Pencil::new(vec![CMatrix::identity(2), a, t])
}

/// Pedersen's family over x in [0, 1]: pencil (I, a(x), t) with
/// a(x) = [[1-2x, -2 sqrt(x(1-x))], [-2 sqrt(x(1-x)), 2x-1]] and
/// t = diag(-1, 1).
///
/// The union over x of the determinant zero sets coincides with the
/// dihedral joint spectrum; x = 1/2 gives the Example 5.4 matrices.
pub fn pedersen_pencil(x: f64) -> Result<Pencil> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!(
            "pedersen parameter {x} outside [0, 1]"
        )));
    }
    let r = 2.0 * (x * (1.0 - x)).sqrt();
    let mut a = CMatrix::zeros(2);
    a[(0, 0)] = C64::new(1.0 - 2.0 * x, 0.0);
    a[(0, 1)] = C64::new(-r, 0.0);
    a[(1, 0)] = C64::new(-r, 0.0);
    a[(1, 1)] = C64::new(2.0 * x - 1.0, 0.0);
    let mut t = CMatrix::zeros(2);
    t[(0, 0)] = C64::new(-1.0, 0.0);
    t[(1, 1)] = C64::new(1.0, 0.0);
    Ok(Pencil::new(vec![CMatrix::identity(2), a, t]))
}

/// Change of variables carrying the projection pencil z0 + z1 p + z2 q with
/// p = (1-a)/2, q = (1-t)/2 to dihedral coordinates:
/// (z0 + (z1+z2)/2, -z1/2, -z2/2).
pub fn projection_pencil_from_dihedral(z: Complex3Point) -> Complex3Point {
    let half = C64::new(0.5, 0.0);
    Complex3Point {
        z0: z.z0 + (z.z1 + z.z2) * half,
        z1: -z.z1 * half,
        z2: -z.z2 * half,
    }
}

/// Closed sampled path in the (z1, z2) plane with z0 fixed at 1.
#[derive(Debug, Clone)]
pub struct ClosedPath {
    samples: Vec<(C64, C64)>,
    closed: bool,
}

/// Densification stops refining once adjacent image arguments differ by
/// less than this; margin under the pi/2 tracking contract.
const DENSIFY_TARGET: f64 = std::f64::consts::PI / 3.0;

/// Hard cap on densified sample counts.
const DENSIFY_CAP: usize = 1 << 20;

impl ClosedPath {
    /// A closed path must end where it starts; the first sample is appended
    /// when the caller left the loop open.
    pub fn new(mut samples: Vec<(C64, C64)>, closed: bool) -> Self {
        assert!(!samples.is_empty(), "path needs at least one sample");
        if closed && samples.first() != samples.last() {
            samples.push(samples[0]);
        }
        ClosedPath { samples, closed }
    }

    pub fn samples(&self) -> &[(C64, C64)] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Orientation reversal.
    pub fn reversed(&self) -> ClosedPath {
        ClosedPath {
            samples: self.samples.iter().rev().copied().collect(),
            closed: self.closed,
        }
    }

    /// Traverse twice; only meaningful for closed paths.
    pub fn doubled(&self) -> ClosedPath {
        let mut samples = self.samples.clone();
        samples.extend(self.samples.iter().skip(1).copied());
        ClosedPath {
            samples,
            closed: self.closed,
        }
    }

    /// The path gamma(s) = (1 + e^{2 pi i s}/2, 0), sampled at `n` steps.
    pub fn gamma_half_circle(n: usize) -> ClosedPath {
        assert!(n >= 3, "need at least 3 samples");
        let samples = (0..n)
            .map(|k| {
                let e = C64::from_polar(0.5, TAU * k as f64 / n as f64);
                (C64::new(1.0, 0.0) + e, C64::new(0.0, 0.0))
            })
            .collect();
        // The constructor re-appends the first sample, closing the loop
        // exactly rather than up to endpoint roundoff.
        ClosedPath::new(samples, true)
    }

    /// Insert midpoints until the image of every adjacent pair under `f`
    /// subtends a small argument step, so `track_argument` cannot alias.
    ///
    /// Fails with `SampleTooCoarse` past 2^20 samples and `PathHitsZero`
    /// when an image magnitude falls under 1e-12 of the image maximum.
    pub fn densify_for(&self, f: impl Fn(C64, C64) -> C64) -> Result<ClosedPath> {
        let mut pts = self.samples.clone();
        loop {
            let images: Vec<C64> = pts.iter().map(|&(z1, z2)| f(z1, z2)).collect();
            let max_mag = images.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if max_mag == 0.0 {
                return Err(Error::PathHitsZero);
            }
            let threshold = 1e-12 * max_mag;
            if images.iter().any(|v| v.norm() < threshold) {
                return Err(Error::PathHitsZero);
            }
            let mut refined = Vec::with_capacity(pts.len() * 2);
            let mut any_split = false;
            for k in 0..pts.len() - 1 {
                refined.push(pts[k]);
                let d = (images[k + 1] * images[k].conj()).arg();
                if d.abs() > DENSIFY_TARGET {
                    let mid = (
                        (pts[k].0 + pts[k + 1].0) * 0.5,
                        (pts[k].1 + pts[k + 1].1) * 0.5,
                    );
                    refined.push(mid);
                    any_split = true;
                }
            }
            refined.push(*pts.last().unwrap());
            if !any_split {
                return Ok(ClosedPath {
                    samples: refined,
                    closed: self.closed,
                });
            }
            if refined.len() > DENSIFY_CAP {
                return Err(Error::SampleTooCoarse);
            }
            pts = refined;
        }
    }

    /// Track the total argument change of the image path under `f`.
    pub fn image_argument_change(&self, f: impl Fn(C64, C64) -> C64) -> Result<f64> {
        let images: Vec<C64> = self.samples.iter().map(|&(z1, z2)| f(z1, z2)).collect();
        // A closed path repeats its first sample, so the window chain
        // already covers the loop.
        track_argument(&images, false)
    }
}
