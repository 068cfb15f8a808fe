//! Output plumbing shared by the data-emitting commands: CSV and JSON
//! writers over a fixed row vocabulary, complex values as _re/_im column
//! pairs in CSV and [re, im] arrays in JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::ValueEnum;
use serde::Serialize;

use crate::numerics::C64;

use super::{CliError, OutputSpec};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub fn cpair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// One sampled point on a spectrum curve. `coords` holds (z0, z1, z2) for
/// the dihedral families and (lambda, mu, 0) for grig.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub branch: usize,
    pub param: f64,
    pub coords: [[f64; 2]; 3],
}

#[derive(Debug, Serialize)]
pub struct SpectrumDoc {
    pub command: &'static str,
    pub family: String,
    pub rows: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetRow {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    pub det: f64,
}

#[derive(Debug, Serialize)]
pub struct DetGridDoc {
    pub command: &'static str,
    pub method: String,
    pub rows: Vec<DetRow>,
}

#[derive(Debug, Serialize)]
pub struct DynamicsDoc {
    pub command: &'static str,
    pub map: String,
    /// One entry per orbit point, each a list of [re, im] coordinates.
    pub points: Vec<Vec<[f64; 2]>>,
    /// "pole" or "overflow" when the orbit halted early.
    pub halt: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct WindingDoc {
    pub command: &'static str,
    pub winding: i64,
    pub coupling: f64,
}

fn open_out(spec: &OutputSpec) -> Result<Box<dyn Write>, CliError> {
    Ok(match &spec.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(doc: &T, w: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, doc)?;
    writeln!(w)
}

pub fn emit_spectrum(doc: &SpectrumDoc, spec: &OutputSpec) -> Result<(), CliError> {
    let mut w = open_out(spec)?;
    match spec.format {
        OutputFormat::Json => write_json(doc, &mut w)?,
        OutputFormat::Csv => {
            writeln!(
                w,
                "family,index,branch,param,c0_re,c0_im,c1_re,c1_im,c2_re,c2_im"
            )?;
            for r in &doc.rows {
                let c = &r.coords;
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{}",
                    doc.family,
                    r.index,
                    r.branch,
                    r.param,
                    c[0][0],
                    c[0][1],
                    c[1][0],
                    c[1][1],
                    c[2][0],
                    c[2][1]
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_det_grid(doc: &DetGridDoc, spec: &OutputSpec) -> Result<(), CliError> {
    let mut w = open_out(spec)?;
    match spec.format {
        OutputFormat::Json => write_json(doc, &mut w)?,
        OutputFormat::Csv => {
            writeln!(w, "z1_re,z1_im,z2_re,z2_im,det")?;
            for r in &doc.rows {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.z1[0], r.z1[1], r.z2[0], r.z2[1], r.det
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_dynamics(doc: &DynamicsDoc, spec: &OutputSpec) -> Result<(), CliError> {
    let mut w = open_out(spec)?;
    match spec.format {
        OutputFormat::Json => write_json(doc, &mut w)?,
        OutputFormat::Csv => {
            let arity = doc.points.first().map_or(0, Vec::len);
            let mut header = String::from("step");
            for k in 0..arity {
                header.push_str(&format!(",c{k}_re,c{k}_im"));
            }
            header.push_str(",flag");
            writeln!(w, "{header}")?;
            let last = doc.points.len().saturating_sub(1);
            for (step, point) in doc.points.iter().enumerate() {
                let mut line = step.to_string();
                for c in point {
                    line.push_str(&format!(",{},{}", c[0], c[1]));
                }
                let flag = if step == last {
                    doc.halt.as_deref().unwrap_or("")
                } else {
                    ""
                };
                writeln!(w, "{line},{flag}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_winding(doc: &WindingDoc, spec: &OutputSpec) -> Result<(), CliError> {
    let mut w = open_out(spec)?;
    match spec.format {
        OutputFormat::Json => write_json(doc, &mut w)?,
        OutputFormat::Csv => {
            writeln!(w, "winding,coupling")?;
            writeln!(w, "{},{}", doc.winding, doc.coupling)?;
        }
    }
    w.flush()?;
    Ok(())
}
