//! CSV and JSON serialisation of fields.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{EvalStats, FieldKind, FieldOptions, GridSpec, QpdField};
use crate::error::{Error, Result};
use crate::husimi::KerrState;
use crate::logdomain::LogReal;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    alpha_re: f64,
    alpha_im: f64,
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    state: StateDoc,
    spec: GridSpec<f64>,
    kind: FieldKind,
    options: FieldOptions,
    stats: EvalStats,
    /// `null` marks an exact zero.
    log_mag: Vec<Vec<Option<f64>>>,
    sign: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<serde_json::Value>,
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

fn to_doc<T: Real>(field: &QpdField<T>, config: Option<serde_json::Value>) -> FieldDoc {
    let s = &field.spec;
    let cols = s.resolution[1];
    FieldDoc {
        state: StateDoc {
            alpha_re: f64_of(field.state.alpha.re),
            alpha_im: f64_of(field.state.alpha.im),
            gamma: f64_of(field.state.gamma),
        },
        spec: GridSpec {
            mode: s.mode,
            center: Complex::new(f64_of(s.center.re), f64_of(s.center.im)),
            extent: [f64_of(s.extent[0]), f64_of(s.extent[1])],
            resolution: s.resolution,
        },
        kind: field.kind,
        options: field.options,
        stats: field.stats,
        log_mag: field
            .values
            .chunks(cols)
            .map(|r| r.iter().map(|v| (v.sign != 0).then(|| f64_of(v.log_mag))).collect())
            .collect(),
        sign: field.values.chunks(cols).map(|r| r.iter().map(|v| v.sign).collect()).collect(),
        config,
    }
}

fn write_csv<T: Real, W: Write>(field: &QpdField<T>, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "x,p,value,log_mag,sign")?;
    let cols = field.spec.resolution[1];
    for (idx, v) in field.values.iter().enumerate() {
        let b = field.spec.node(idx / cols, idx % cols);
        let log_mag = if v.sign == 0 { f64::NEG_INFINITY } else { f64_of(v.log_mag) };
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{}",
            f64_of(b.re),
            f64_of(b.im),
            f64_of(v.value()),
            log_mag,
            v.sign
        )?;
    }
    Ok(())
}

/// Serialises `field` into `out`; `config` is embedded in JSON output under
/// the key `config`.
pub fn write_field_to<T: Real, W: Write>(
    field: &QpdField<T>,
    format: FieldFormat,
    config: Option<serde_json::Value>,
    out: &mut W,
) -> std::io::Result<()> {
    match format {
        FieldFormat::Csv => write_csv(field, out),
        FieldFormat::Json => {
            serde_json::to_writer(&mut *out, &to_doc(field, config)).map_err(std::io::Error::other)?;
            writeln!(out)
        }
    }
}

/// Writes `field` to `path`.
pub fn write_field<T: Real>(
    field: &QpdField<T>,
    format: FieldFormat,
    path: &Path,
    config: Option<serde_json::Value>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    write_field_to(field, format, config, &mut out).map_err(|e| io_err(path, e))?;
    out.flush().map_err(|e| io_err(path, e))
}

/// Reads a JSON field written by [`write_field`], with any embedded config.
pub fn read_field_json(path: &Path) -> Result<(QpdField<f64>, Option<serde_json::Value>)> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let doc: FieldDoc = serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| io_err(path, e))?;
    doc.spec.validate()?;
    let [n0, n1] = doc.spec.resolution;
    let shape_ok = |lens: Vec<usize>| lens.len() == n0 && lens.iter().all(|&l| l == n1);
    if !shape_ok(doc.log_mag.iter().map(Vec::len).collect()) || !shape_ok(doc.sign.iter().map(Vec::len).collect()) {
        return Err(io_err(path, "value arrays do not match the grid resolution"));
    }
    let values = doc
        .log_mag
        .iter()
        .flatten()
        .zip(doc.sign.iter().flatten())
        .map(|(l, &s)| match l {
            Some(l) if s != 0 => LogReal { log_mag: *l, sign: s },
            _ => LogReal::zero(),
        })
        .collect::<Vec<_>>();
    let field = QpdField {
        spec: doc.spec,
        kind: doc.kind,
        state: KerrState::new(Complex::new(doc.state.alpha_re, doc.state.alpha_im), doc.state.gamma),
        options: doc.options,
        stats: EvalStats { wall_time: Duration::ZERO, ..doc.stats },
        values,
    };
    Ok((field, doc.config))
}
