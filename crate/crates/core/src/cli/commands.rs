//! Row builders for the data-emitting commands.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::analysis::{fk_det_closed, fk_det_quadrature};
use crate::dynamics::{orbit, DynMapId, OrbitHalt};
use crate::numerics::{C64, QuadratureConfig};
use crate::pencil::ClosedPath;
use crate::spectrum::{dn_angles, slice_curves};

use super::output::{
    cpair, emit_det_grid, emit_dynamics, emit_spectrum, emit_winding, DetGridDoc, DetRow,
    DynamicsDoc, SpectrumDoc, SpectrumRow, WindingDoc,
};
use super::{CliError, DetGridArgs, DetMethod, DynamicsArgs, SpectrumArgs, SpectrumFamily,
    WindingArgs};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Quadrature ladder used for determinant grids: tuned so the estimate
/// stays within 1e-6 of the Mahler closed form across the real |z_i| <= 2
/// grid, including points where the integrand has log zeros.
pub const DET_GRID_QUAD_CFG: QuadratureConfig = QuadratureConfig {
    initial_panels: 112,
    abs_tol: 1e-10,
    max_doublings: 16,
};

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse {what} `{s}`")))
        })
        .collect()
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let v = parse_floats(s, what)?;
    if v.len() != 2 || !v[0].is_finite() || !v[1].is_finite() {
        return Err(CliError::Usage(format!(
            "{what} must be two finite numbers, got `{s}`"
        )));
    }
    Ok((v[0], v[1]))
}

fn require_n(args: &SpectrumArgs, max: u32) -> Result<u32, CliError> {
    match args.n {
        Some(n) if n >= 1 && n <= max => Ok(n),
        Some(n) => Err(CliError::Usage(format!(
            "--n {n} outside supported range 1..={max}"
        ))),
        None => Err(CliError::Usage(
            "--n is required for this family".to_string(),
        )),
    }
}

fn dinf_rows(l1: f64, l2: f64, steps: usize) -> Result<Vec<SpectrumRow>, CliError> {
    // Midpoints of [-1, 1]: the endpoints can degenerate the slice
    // radicand (l1 = l2, x = -1), where the curve radius diverges.
    let mut rows = Vec::with_capacity(2 * steps);
    for j in 0..steps {
        let x = -1.0 + 2.0 * (j as f64 + 0.5) / steps as f64;
        let (wp, wm) = slice_curves(c(l1), c(l2), x)?;
        for (branch, w) in [(0, wp), (1, wm)] {
            rows.push(SpectrumRow {
                index: 0,
                branch,
                param: x,
                coords: [cpair(c(1.0)), cpair(l1 * w), cpair(l2 * w)],
            });
        }
    }
    Ok(rows)
}

fn dn_rows(n: usize, steps: usize) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    for (k, theta) in dn_angles(n).iter().enumerate() {
        let x = theta.cos();
        if x.abs() >= 1.0 - 1e-12 {
            // Degenerate conic (z1 +- z2)^2 = 1: a pair of parallel lines.
            let sign = x.signum();
            for branch in 0..2 {
                let rhs = if branch == 0 { 1.0 } else { -1.0 };
                for j in 0..steps {
                    let t = -1.5 + 3.0 * (j as f64 + 0.5) / steps as f64;
                    let z2 = sign * (rhs - t);
                    rows.push(SpectrumRow {
                        index: k,
                        branch,
                        param: t,
                        coords: [cpair(c(1.0)), cpair(c(t)), cpair(c(z2))],
                    });
                }
            }
        } else {
            // Ellipse z1^2 + z2^2 + 2 x z1 z2 = 1, swept by the angle in
            // the diagonalizing (1,1)/(1,-1) eigenbasis.
            let up = (2.0 * (1.0 + x)).sqrt();
            let um = (2.0 * (1.0 - x)).sqrt();
            for j in 0..steps {
                let s = TAU * j as f64 / steps as f64;
                let u = s.cos() / up;
                let v = s.sin() / um;
                rows.push(SpectrumRow {
                    index: k,
                    branch: 0,
                    param: s,
                    coords: [cpair(c(1.0)), cpair(c(u + v)), cpair(c(u - v))],
                });
            }
        }
    }
    rows
}

fn projection_rows(l1: f64, l2: f64, steps: usize) -> Vec<SpectrumRow> {
    let (z1, z2) = (c(l1), c(l2));
    let b = z1 + z2;
    let mut rows = Vec::with_capacity(2 * steps);
    for j in 0..steps {
        let x = if steps == 1 {
            0.0
        } else {
            j as f64 / (steps - 1) as f64
        };
        let prod = z1 * z2 * x;
        let disc = (b * b - 4.0 * prod).sqrt();
        let q = if (b + disc).norm() >= (b - disc).norm() {
            -(b + disc) / 2.0
        } else {
            -(b - disc) / 2.0
        };
        let roots = if q == c(0.0) {
            [c(0.0), -b]
        } else {
            [q, prod / q]
        };
        for (branch, z0) in roots.into_iter().enumerate() {
            rows.push(SpectrumRow {
                index: 0,
                branch,
                param: x,
                coords: [cpair(z0), cpair(z1), cpair(z2)],
            });
        }
    }
    rows
}

fn grig_rows(n: u32, steps: usize) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    let count = (1u64 << (n - 1)) - 1;
    for j in 1..=count {
        let x = (TAU * j as f64 / (1u64 << n) as f64).cos();
        for i in 0..steps {
            let lambda = if steps == 1 {
                0.0
            } else {
                -3.0 + 6.0 * i as f64 / (steps - 1) as f64
            };
            // 4 - mu^2 + lambda^2 + 4 lambda x = 0; the radicand
            // (lambda + 2x)^2 + 4(1 - x^2) is nonnegative, so mu is real.
            let mu = (4.0 + lambda * lambda + 4.0 * lambda * x).sqrt();
            for (branch, m) in [(0, mu), (1, -mu)] {
                rows.push(SpectrumRow {
                    index: j as usize,
                    branch,
                    param: lambda,
                    coords: [cpair(c(lambda)), cpair(c(m)), cpair(c(0.0))],
                });
            }
        }
    }
    rows
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    if args.x_steps == 0 {
        return Err(CliError::Usage("--x-steps must be positive".to_string()));
    }
    let (l1, l2) = parse_pair(&args.slice, "--slice")?;
    let (family, rows) = match args.family {
        SpectrumFamily::Dinf => ("dinf", dinf_rows(l1, l2, args.x_steps)?),
        SpectrumFamily::Dn => {
            let n = require_n(args, 4096)?;
            ("dn", dn_rows(n as usize, args.x_steps))
        }
        SpectrumFamily::Projections => ("projections", projection_rows(l1, l2, args.x_steps)),
        SpectrumFamily::Grig => {
            let n = require_n(args, 12)?;
            if n < 2 {
                return Err(CliError::Usage(
                    "--family grig needs --n >= 2".to_string(),
                ));
            }
            ("grig", grig_rows(n, args.x_steps))
        }
    };
    emit_spectrum(
        &SpectrumDoc {
            command: "spectrum",
            family: family.to_string(),
            rows,
        },
        &args.output,
    )
}

fn axis(range: (f64, f64), steps: usize, i: usize) -> f64 {
    if steps == 1 {
        range.0
    } else {
        range.0 + (range.1 - range.0) * i as f64 / (steps - 1) as f64
    }
}

pub fn cmd_det_grid(args: &DetGridArgs) -> Result<(), CliError> {
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be positive".to_string()));
    }
    let re = parse_pair(&args.re_range, "--re-range")?;
    let im = parse_pair(&args.im_range, "--im-range")?;
    let steps = args.steps;
    let method = args.method;

    let eval_row = move |i: usize| -> Vec<DetRow> {
        let z1 = c(axis(re, steps, i));
        (0..steps)
            .map(|j| {
                let z2 = c(axis(im, steps, j));
                let det = match method {
                    DetMethod::Closed => fk_det_closed(z1, z2),
                    DetMethod::Quadrature => {
                        fk_det_quadrature(z1, z2, &DET_GRID_QUAD_CFG).value
                    }
                };
                DetRow {
                    z1: cpair(z1),
                    z2: cpair(z2),
                    det,
                }
            })
            .collect()
    };

    // Partition rows across available parallelism; assembly is by row
    // index, so the output is deterministic regardless of scheduling.
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(steps);
    let mut by_row: Vec<Vec<DetRow>> = vec![Vec::new(); steps];
    if workers <= 1 {
        for (i, slot) in by_row.iter_mut().enumerate() {
            *slot = eval_row(i);
        }
    } else {
        let results = std::sync::Mutex::new(vec![None; steps]);
        std::thread::scope(|scope| {
            for w in 0..workers {
                let results = &results;
                let eval_row = &eval_row;
                scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut i = w;
                    while i < steps {
                        local.push((i, eval_row(i)));
                        i += workers;
                    }
                    let mut guard = results.lock().expect("no poisoned writers");
                    for (i, rows) in local {
                        guard[i] = Some(rows);
                    }
                });
            }
        });
        let collected = results.into_inner().expect("threads joined");
        for (slot, rows) in by_row.iter_mut().zip(collected) {
            *slot = rows.expect("every row computed");
        }
    }

    let rows: Vec<DetRow> = by_row.into_iter().flatten().collect();
    let method_name = match args.method {
        DetMethod::Closed => "closed",
        DetMethod::Quadrature => "quadrature",
    };
    emit_det_grid(
        &DetGridDoc {
            command: "det_grid",
            method: method_name.to_string(),
            rows,
        },
        &args.output,
    )
}

pub fn cmd_dynamics(args: &DynamicsArgs) -> Result<(), CliError> {
    let map: DynMapId = args
        .map
        .parse()
        .map_err(|e: crate::Error| CliError::Usage(e.to_string()))?;
    let flat = parse_floats(&args.start, "--start")?;
    if flat.len() != 2 * map.arity() {
        return Err(CliError::Usage(format!(
            "map {} needs {} coordinates ({} numbers), got {}",
            map.name(),
            map.arity(),
            2 * map.arity(),
            flat.len()
        )));
    }
    let start: Vec<C64> = flat.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let orb = orbit(map, &start, args.steps)?;
    let doc = DynamicsDoc {
        command: "dynamics",
        map: map.name().to_string(),
        points: orb
            .points
            .iter()
            .map(|p| p.iter().map(|&z| cpair(z)).collect())
            .collect(),
        halt: orb.halt.map(|h| {
            match h {
                OrbitHalt::Pole => "pole",
                OrbitHalt::Overflow => "overflow",
            }
            .to_string()
        }),
    };
    emit_dynamics(&doc, &args.output)
}

/// On-disk closed-path format shared with the winding command.
#[derive(Debug, Serialize, Deserialize)]
pub struct PathFileDoc {
    pub closed: bool,
    pub samples: Vec<[f64; 4]>,
}

impl PathFileDoc {
    pub fn to_path(&self) -> Result<ClosedPath, CliError> {
        if !self.closed {
            return Err(CliError::Usage(
                "winding needs a closed path (\"closed\": true)".to_string(),
            ));
        }
        if self.samples.len() < 2 {
            return Err(CliError::Usage(
                "path needs at least two samples".to_string(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .map(|s| (C64::new(s[0], s[1]), C64::new(s[2], s[3])))
            .collect();
        Ok(ClosedPath::new(samples, true))
    }
}

pub fn cmd_winding(args: &WindingArgs) -> Result<(), CliError> {
    let mut path = match (&args.source.path_file, &args.source.builtin) {
        (Some(file), None) => {
            let text = std::fs::read_to_string(file)?;
            let doc: PathFileDoc = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad path file: {e}")))?;
            doc.to_path()?
        }
        (None, Some(name)) if name == "gamma-half-circle" => {
            if args.samples < 8 {
                return Err(CliError::Usage("--samples must be at least 8".to_string()));
            }
            ClosedPath::gamma_half_circle(args.samples)
        }
        (None, Some(name)) => {
            return Err(CliError::Usage(format!(
                "unknown builtin `{name}` (available: gamma-half-circle)"
            )));
        }
        _ => unreachable!("clap group enforces exactly one source"),
    };
    if args.reverse {
        path = path.reversed();
    }
    if args.double {
        path = path.doubled();
    }
    let w = crate::analysis::winding_number(&path, 0.0)
        .map_err(|e| CliError::Usage(format!("winding failed: {e}")))?;
    emit_winding(
        &WindingDoc {
            command: "winding",
            winding: w,
            coupling: w as f64 / 2.0,
        },
        &args.output,
    )
}
