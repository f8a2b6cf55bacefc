//! File formats: spectral-model JSON, signal CSV/WAV, spectrum and sweep
//! CSV, point-cloud CSV, diagram JSON, and the binary distance-matrix
//! container.

use crate::embedding::{DistanceMatrix, Metric, PointCloud};
use crate::model::{FourierTerm, ModelError, Signal, SpectralModel};
use crate::params::SweepRow;
use crate::persistence::{IntervalConvention, PersistenceDiagram, PersistenceError};
use crate::spectral::{Spectrum, SpectrumPeak};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Diagram(#[from] PersistenceError),
}

fn parse_err(msg: impl Into<String>) -> IoError {
    IoError::Parse(msg.into())
}

// ---- spectral model JSON ----------------------------------------------------

/// `{"omega": [..], "terms": [{"k": [..], "freq": x, "re": a, "im": b}, ..]}`;
/// `omega` and per-term `k` are optional.
pub fn model_to_json(model: &SpectralModel) -> Value {
    let terms: Vec<Value> = model
        .terms()
        .iter()
        .map(|t| {
            let mut obj = serde_json::Map::new();
            if let Some(k) = &t.lattice {
                obj.insert("k".into(), json!(k));
            }
            obj.insert("freq".into(), json!(t.frequency));
            obj.insert("re".into(), json!(t.coefficient.re));
            obj.insert("im".into(), json!(t.coefficient.im));
            Value::Object(obj)
        })
        .collect();
    match model.frequency_vector() {
        Some(omega) => json!({ "omega": omega, "terms": terms }),
        None => json!({ "terms": terms }),
    }
}

pub fn model_from_json(value: &Value) -> Result<SpectralModel, IoError> {
    let obj = value.as_object().ok_or_else(|| parse_err("model JSON must be an object"))?;
    let omega = match obj.get("omega") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_array()
                .ok_or_else(|| parse_err("omega must be an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| parse_err("omega entries must be numbers")))
                .collect::<Result<Vec<f64>, _>>()?,
        ),
    };
    let terms_val = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("model JSON needs a terms array"))?;
    let mut terms = Vec::with_capacity(terms_val.len());
    for tv in terms_val {
        let t = tv.as_object().ok_or_else(|| parse_err("term must be an object"))?;
        let freq = t
            .get("freq")
            .and_then(Value::as_f64)
            .ok_or_else(|| parse_err("term needs a numeric freq"))?;
        let re = t.get("re").and_then(Value::as_f64).unwrap_or(0.0);
        let im = t.get("im").and_then(Value::as_f64).unwrap_or(0.0);
        let lattice = match t.get("k") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_array()
                    .ok_or_else(|| parse_err("k must be an array"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| parse_err("k entries must be integers")))
                    .collect::<Result<Vec<i64>, _>>()?,
            ),
        };
        terms.push(FourierTerm { lattice, frequency: freq, coefficient: Complex64::new(re, im) });
    }
    Ok(SpectralModel::new(terms, omega)?)
}

// ---- signal CSV / WAV -------------------------------------------------------

/// Header `t,re,im` (complex) or `t,value` (real), one row per sample.
pub fn write_signal_csv<W: Write>(mut w: W, signal: &Signal) -> Result<(), IoError> {
    if signal.is_real() {
        writeln!(w, "t,value")?;
        for (n, s) in signal.samples().iter().enumerate() {
            writeln!(w, "{},{}", signal.time(n), s.re)?;
        }
    } else {
        writeln!(w, "t,re,im")?;
        for (n, s) in signal.samples().iter().enumerate() {
            writeln!(w, "{},{},{}", signal.time(n), s.re, s.im)?;
        }
    }
    Ok(())
}

pub fn read_signal_csv<R: Read>(mut r: R) -> Result<Signal, IoError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| parse_err("no samples"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let complex = match cols.as_slice() {
        ["t", "re", "im"] => true,
        ["t", "value"] => false,
        _ => return Err(parse_err(format!("unrecognized signal header '{header}'"))),
    };
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let want = if complex { 3 } else { 2 };
        if fields.len() != want {
            return Err(parse_err(format!("row {}: expected {} fields", i + 2, want)));
        }
        let parse = |s: &str| -> Result<f64, IoError> {
            s.parse::<f64>().map_err(|e| parse_err(format!("row {}: {e}", i + 2)))
        };
        times.push(parse(fields[0])?);
        let re = parse(fields[1])?;
        let im = if complex { parse(fields[2])? } else { 0.0 };
        samples.push(Complex64::new(re, im));
    }
    if samples.is_empty() {
        return Err(parse_err("no samples"));
    }
    if samples.len() == 1 {
        return Ok(Signal::new(samples, 1.0, times[0])?);
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if dt <= 0.0 {
        return Err(parse_err("time column must be strictly increasing"));
    }
    for (n, &t) in times.iter().enumerate() {
        let expect = times[0] + n as f64 * dt;
        if (t - expect).abs() > 1e-6 * dt.max(1.0) {
            return Err(parse_err(format!("non-uniform sampling at row {}", n + 2)));
        }
    }
    Ok(Signal::new(samples, 1.0 / dt, times[0])?)
}

/// 16-bit PCM mono little-endian WAV. Real parts are clipped to [-1, 1]
/// and quantized; the imaginary part is discarded.
pub fn write_signal_wav<W: Write>(mut w: W, signal: &Signal) -> Result<(), IoError> {
    let rate = signal.sample_rate().round();
    if rate <= 0.0 || rate > u32::MAX as f64 {
        return Err(IoError::Format("sample rate not representable in WAV".into()));
    }
    let rate = rate as u32;
    let n = signal.len() as u32;
    let data_bytes = n * 2;
    w.write_all(b"RIFF")?;
    w.write_all(&(36 + data_bytes).to_le_bytes())?;
    w.write_all(b"WAVE")?;
    w.write_all(b"fmt ")?;
    w.write_all(&16u32.to_le_bytes())?;
    w.write_all(&1u16.to_le_bytes())?; // PCM
    w.write_all(&1u16.to_le_bytes())?; // mono
    w.write_all(&rate.to_le_bytes())?;
    w.write_all(&(rate * 2).to_le_bytes())?; // byte rate
    w.write_all(&2u16.to_le_bytes())?; // block align
    w.write_all(&16u16.to_le_bytes())?; // bits per sample
    w.write_all(b"data")?;
    w.write_all(&data_bytes.to_le_bytes())?;
    for s in signal.samples() {
        let v = (s.re.clamp(-1.0, 1.0) * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_signal_wav<R: Read>(mut r: R) -> Result<Signal, IoError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 44 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(parse_err("not a RIFF/WAVE file"));
    }
    let mut pos = 12usize;
    let mut rate = 0u32;
    let mut fmt_ok = false;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body = bytes
            .get(pos + 8..pos + 8 + size)
            .ok_or_else(|| parse_err("truncated chunk"))?;
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(parse_err("fmt chunk too short"));
                }
                let format = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                if format != 1 || channels != 1 || bits != 16 {
                    return Err(parse_err("expected 16-bit PCM mono"));
                }
                rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                fmt_ok = true;
            }
            b"data" => data = Some(body),
            _ => {}
        }
        pos += 8 + size + (size & 1);
    }
    let data = data.ok_or_else(|| parse_err("no data chunk"))?;
    if !fmt_ok || rate == 0 {
        return Err(parse_err("missing fmt chunk"));
    }
    if data.is_empty() {
        return Err(parse_err("no samples"));
    }
    let samples: Vec<Complex64> = data
        .chunks_exact(2)
        .map(|c| {
            let v = i16::from_le_bytes([c[0], c[1]]);
            Complex64::new(v as f64 / 32768.0, 0.0)
        })
        .collect();
    Ok(Signal::new(samples, rate as f64, 0.0)?)
}

// ---- spectrum / peaks -------------------------------------------------------

/// Header `freq_rad,freq_hz,modulus`.
pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &Spectrum) -> Result<(), IoError> {
    writeln!(w, "freq_rad,freq_hz,modulus")?;
    for (f, m) in spectrum.iter() {
        writeln!(w, "{},{},{}", f, f / (2.0 * std::f64::consts::PI), m)?;
    }
    Ok(())
}

/// `[{"freq": x, "hz": y, "amp": a}, ...]`
pub fn peaks_to_json(peaks: &[SpectrumPeak]) -> Value {
    Value::Array(
        peaks
            .iter()
            .map(|p| json!({ "freq": p.frequency, "hz": p.frequency_hz, "amp": p.amplitude }))
            .collect(),
    )
}

pub fn peaks_from_json(value: &Value) -> Result<Vec<SpectrumPeak>, IoError> {
    let arr = value.as_array().ok_or_else(|| parse_err("peaks JSON must be an array"))?;
    arr.iter()
        .map(|v| {
            let freq = v
                .get("freq")
                .and_then(Value::as_f64)
                .ok_or_else(|| parse_err("peak needs freq"))?;
            let hz = v.get("hz").and_then(Value::as_f64).unwrap_or(freq / (2.0 * std::f64::consts::PI));
            let amp = v
                .get("amp")
                .and_then(Value::as_f64)
                .ok_or_else(|| parse_err("peak needs amp"))?;
            Ok(SpectrumPeak { frequency: freq, frequency_hz: hz, amplitude: amp, bin_index: 0 })
        })
        .collect()
}

// ---- point cloud CSV --------------------------------------------------------

/// One row per point; a leading `t` column when time stamps are present.
pub fn write_cloud_csv<W: Write>(mut w: W, cloud: &PointCloud) -> Result<(), IoError> {
    let coord_names: Vec<String> = (0..cloud.dim()).map(|i| format!("c{i}")).collect();
    if cloud.times().is_some() {
        writeln!(w, "t,{}", coord_names.join(","))?;
    } else {
        writeln!(w, "{}", coord_names.join(","))?;
    }
    for i in 0..cloud.len() {
        let coords: Vec<String> = cloud.point(i).iter().map(|x| x.to_string()).collect();
        match cloud.times() {
            Some(ts) => writeln!(w, "{},{}", ts[i], coords.join(","))?,
            None => writeln!(w, "{}", coords.join(","))?,
        }
    }
    Ok(())
}

pub fn read_cloud_csv<R: Read>(mut r: R) -> Result<PointCloud, IoError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty cloud file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_time = cols.first() == Some(&"t");
    let dim = cols.len() - usize::from(has_time);
    if dim == 0 {
        return Err(parse_err("cloud file has no coordinate columns"));
    }
    let mut rows = Vec::new();
    let mut times = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(parse_err(format!("row {}: wrong field count", i + 2)));
        }
        let mut vals = Vec::with_capacity(fields.len());
        for f in &fields {
            vals.push(f.parse::<f64>().map_err(|e| parse_err(format!("row {}: {e}", i + 2)))?);
        }
        if has_time {
            times.push(vals[0]);
            rows.push(vals[1..].to_vec());
        } else {
            rows.push(vals);
        }
    }
    let cloud = PointCloud::from_rows(rows).map_err(|e| parse_err(e.to_string()))?;
    Ok(if has_time { cloud.with_times(times) } else { cloud })
}

// ---- distance matrix binary -------------------------------------------------

const DMAT_MAGIC: &[u8; 8] = b"QPDMAT01";

/// Binary container: magic, `n` (u64 LE), metric byte, then the strict
/// lower triangle row-major as f64 LE.
pub fn write_distance_matrix<W: Write>(mut w: W, dm: &DistanceMatrix) -> Result<(), IoError> {
    w.write_all(DMAT_MAGIC)?;
    w.write_all(&(dm.len() as u64).to_le_bytes())?;
    let metric = match dm.metric() {
        Metric::Euclidean => 0u8,
        Metric::Max => 1u8,
    };
    w.write_all(&[metric])?;
    for &d in dm.lower_triangle() {
        w.write_all(&d.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_distance_matrix<R: Read>(mut r: R) -> Result<DistanceMatrix, IoError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != DMAT_MAGIC {
        return Err(parse_err("not a distance-matrix file"));
    }
    let mut nb = [0u8; 8];
    r.read_exact(&mut nb)?;
    let n = u64::from_le_bytes(nb) as usize;
    let mut mb = [0u8; 1];
    r.read_exact(&mut mb)?;
    let metric = match mb[0] {
        0 => Metric::Euclidean,
        1 => Metric::Max,
        other => return Err(parse_err(format!("unknown metric tag {other}"))),
    };
    let count = n * (n - 1) / 2;
    let mut lower = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        r.read_exact(&mut buf)?;
        lower.push(f64::from_le_bytes(buf));
    }
    DistanceMatrix::from_lower(n, lower, metric).map_err(IoError::Parse)
}

// ---- diagrams JSON ----------------------------------------------------------

fn death_to_json(d: f64) -> Value {
    if d.is_infinite() {
        Value::String("inf".into())
    } else {
        json!(d)
    }
}

/// `{"dim": j, "convention": "half_open"|"left_open", "pairs": [[b, d], ..]}`
/// with `"inf"` for infinite deaths.
pub fn diagram_to_json(d: &PersistenceDiagram) -> Value {
    let convention = match d.convention() {
        IntervalConvention::HalfOpen => "half_open",
        IntervalConvention::LeftOpen => "left_open",
    };
    json!({
        "dim": d.dimension(),
        "convention": convention,
        "pairs": d.pairs().iter().map(|&(b, dd)| json!([b, death_to_json(dd)])).collect::<Vec<_>>(),
    })
}

pub fn diagram_from_json(value: &Value) -> Result<PersistenceDiagram, IoError> {
    let dim = value
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("diagram needs dim"))? as usize;
    let convention = match value.get("convention").and_then(Value::as_str) {
        Some("half_open") | None => IntervalConvention::HalfOpen,
        Some("left_open") => IntervalConvention::LeftOpen,
        Some(other) => return Err(parse_err(format!("unknown convention '{other}'"))),
    };
    let pairs_val = value
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("diagram needs pairs"))?;
    let mut pairs = Vec::with_capacity(pairs_val.len());
    for p in pairs_val {
        let pv = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| parse_err("pair must be [b, d]"))?;
        let b = pv[0].as_f64().ok_or_else(|| parse_err("birth must be a number"))?;
        let d = match &pv[1] {
            Value::String(s) if s == "inf" => f64::INFINITY,
            v => v.as_f64().ok_or_else(|| parse_err("death must be a number or \"inf\""))?,
        };
        pairs.push((b, d));
    }
    Ok(PersistenceDiagram::new(dim, convention, pairs)?)
}

pub fn diagrams_to_json(diagrams: &[PersistenceDiagram]) -> Value {
    Value::Array(diagrams.iter().map(diagram_to_json).collect())
}

pub fn diagrams_from_json(value: &Value) -> Result<Vec<PersistenceDiagram>, IoError> {
    value
        .as_array()
        .ok_or_else(|| parse_err("expected an array of diagrams"))?
        .iter()
        .map(diagram_from_json)
        .collect()
}

// ---- sweep CSV ----------------------------------------------------------------

/// Header `tau,dim,rank,persistence`.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<(), IoError> {
    writeln!(w, "tau,dim,rank,persistence")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.tau, r.dim, r.rank, r.persistence)?;
    }
    Ok(())
}

pub fn read_sweep_csv<R: Read>(mut r: R) -> Result<Vec<SweepRow>, IoError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty sweep file"))?;
    if header.trim() != "tau,dim,rank,persistence" {
        return Err(parse_err("unrecognized sweep header"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(parse_err(format!("row {}: expected 4 fields", i + 2)));
        }
        let err = |e: String| parse_err(format!("row {}: {e}", i + 2));
        rows.push(SweepRow {
            tau: f[0].parse().map_err(|e: std::num::ParseFloatError| err(e.to_string()))?,
            dim: f[1].parse().map_err(|e: std::num::ParseIntError| err(e.to_string()))?,
            rank: f[2].parse().map_err(|e: std::num::ParseIntError| err(e.to_string()))?,
            persistence: f[3].parse().map_err(|e: std::num::ParseFloatError| err(e.to_string()))?,
        });
    }
    Ok(rows)
}
