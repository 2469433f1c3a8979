//! File formats.
//!
//! Chains, targets, reflection vectors, reports and phase lists are JSON
//! records; traces are CSV. Every float is written with 17 significant digits
//! so files round-trip bit-identically.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::{json, Value};

use crate::{ChainSpec, Error, EtaVector, EvolutionTrace, Result, StateVector, SynthesisReport};

/// Inputs whose norm is off by at most this much are renormalised with a
/// warning instead of rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Compact JSON with floats as `{:.16e}`.
struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{value:.8e}")
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        // one key per line keeps fixtures diff-friendly
        CompactFormatter.begin_object_key(writer, first)?;
        writer.write_all(b"\n  ")
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b"\n}")
    }
}

/// Serialise with full float precision.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn chain_from_str(text: &str) -> Result<ChainSpec> {
    parse(text)
}

pub fn read_chain(path: &Path) -> Result<ChainSpec> {
    chain_from_str(&fs::read_to_string(path)?)
}

pub fn write_chain(path: &Path, chain: &ChainSpec) -> Result<()> {
    fs::write(path, to_json_string(chain)?)?;
    Ok(())
}

/// `{"n": N, "re": [...], "im": [...]}`; `im` may be omitted for real targets.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetRecord {
    n: usize,
    re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<f64>>,
}

/// A target read from disk, with a warning if it had to be renormalised.
#[derive(Clone, Debug)]
pub struct LoadedTarget {
    pub state: StateVector,
    pub warning: Option<String>,
}

pub fn target_from_str(text: &str) -> Result<LoadedTarget> {
    let record: TargetRecord = parse(text)?;
    if record.re.len() != record.n {
        return Err(Error::DimensionMismatch {
            expected: record.n,
            actual: record.re.len(),
        });
    }
    let im = match record.im {
        Some(im) if im.len() != record.n => {
            return Err(Error::DimensionMismatch {
                expected: record.n,
                actual: im.len(),
            })
        }
        Some(im) => im,
        None => vec![0.0; record.n],
    };
    let amps: Vec<Complex64> = record
        .re
        .iter()
        .zip(&im)
        .map(|(r, i)| Complex64::new(*r, *i))
        .collect();
    let (amps, warning) = renormalize(amps)?;
    Ok(LoadedTarget {
        state: StateVector::new(amps)?,
        warning,
    })
}

fn renormalize(amps: Vec<Complex64>) -> Result<(Vec<Complex64>, Option<String>)> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > RENORMALIZE_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    if (norm - 1.0).abs() <= crate::state::NORM_TOLERANCE {
        return Ok((amps, None));
    }
    let warning = format!("amplitudes had norm {norm:.12}; renormalised");
    Ok((amps.into_iter().map(|a| a / norm).collect(), Some(warning)))
}

pub fn read_target(path: &Path) -> Result<LoadedTarget> {
    target_from_str(&fs::read_to_string(path)?)
}

pub fn target_to_string(state: &StateVector) -> Result<String> {
    let record = TargetRecord {
        n: state.len(),
        re: state.amplitudes().iter().map(|a| a.re).collect(),
        im: Some(state.amplitudes().iter().map(|a| a.im).collect()),
    };
    to_json_string(&record)
}

pub fn write_target(path: &Path, state: &StateVector) -> Result<()> {
    fs::write(path, target_to_string(state)?)?;
    Ok(())
}

/// `{"n": N, "eta": [...]}`, renormalised within [`RENORMALIZE_TOLERANCE`].
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EtaRecord {
    n: usize,
    eta: Vec<f64>,
}

pub fn eta_from_str(text: &str) -> Result<(EtaVector, Option<String>)> {
    let record: EtaRecord = parse(text)?;
    if record.eta.len() != record.n {
        return Err(Error::DimensionMismatch {
            expected: record.n,
            actual: record.eta.len(),
        });
    }
    let amps = record.eta.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let (amps, warning) = renormalize(amps)?;
    let eta = EtaVector::new(amps.iter().map(|a| a.re).collect())?;
    Ok((eta, warning))
}

pub fn read_eta(path: &Path) -> Result<(EtaVector, Option<String>)> {
    eta_from_str(&fs::read_to_string(path)?)
}

pub fn eta_to_string(eta: &EtaVector) -> Result<String> {
    to_json_string(&EtaRecord {
        n: eta.len(),
        eta: eta.entries().to_vec(),
    })
}

/// Every field of a report as a JSON object.
pub fn report_value(report: &SynthesisReport) -> Value {
    json!({
        "n": report.chain.len(),
        "chain": report.chain,
        "t0": report.t0,
        "start_site": report.start_site + 1,
        "eta_target": report.eta_target.entries(),
        "eta_actual": report.eta_actual,
        "eigen_overlap_F": report.eigen_overlap_f,
        "state_fidelity": report.state_fidelity,
        "epsilon": report.epsilon,
        "iterations": report.iterations,
        "jmax_t0_over_pi": report.jmax_t0,
        "spectral_deviation": report.spectral_deviation,
        "phase_corrections": report.phase_corrections,
        "warnings": report.warnings,
    })
}

pub fn write_report(path: &Path, report: &SynthesisReport) -> Result<()> {
    fs::write(path, to_json_string(&report_value(report))?)?;
    Ok(())
}

pub fn phases_to_string(phases: &[f64]) -> Result<String> {
    to_json_string(&json!({ "n": phases.len(), "phases": phases }))
}

pub fn write_phases(path: &Path, phases: &[f64]) -> Result<()> {
    fs::write(path, phases_to_string(phases)?)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("trace: {e}"))
}

/// CSV with header `t,p_1,…,p_N` and one row per time.
pub fn trace_to_string(trace: &EvolutionTrace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("t".to_string()).chain((1..=trace.sites()).map(|i| format!("p_{i}")));
    w.write_record(header).map_err(csv_error)?;
    for (t, row) in trace.times.iter().zip(&trace.probabilities) {
        let fields = std::iter::once(t).chain(row).map(|x| format!("{x:.16e}"));
        w.write_record(fields).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("formatted floats are ASCII"))
}

pub fn trace_from_str(text: &str) -> Result<EvolutionTrace> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    let n = header.len().saturating_sub(1);
    if header.get(0) != Some("t")
        || header
            .iter()
            .skip(1)
            .enumerate()
            .any(|(i, c)| c != format!("p_{}", i + 1))
    {
        return Err(Error::Parse(format!("unexpected trace header {header:?}")));
    }
    let mut times = Vec::new();
    let mut probabilities = Vec::new();
    for (row, record) in r.records().enumerate() {
        let values = record
            .map_err(csv_error)?
            .iter()
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("trace row {}: {e}", row + 1)))?;
        if values.len() != n + 1 {
            return Err(Error::Parse(format!(
                "trace row {} has {} columns, expected {}",
                row + 1,
                values.len(),
                n + 1
            )));
        }
        times.push(values[0]);
        probabilities.push(values[1..].to_vec());
    }
    Ok(EvolutionTrace {
        times,
        probabilities,
    })
}

pub fn write_trace(path: &Path, trace: &EvolutionTrace) -> Result<()> {
    fs::write(path, trace_to_string(trace)?)?;
    Ok(())
}
