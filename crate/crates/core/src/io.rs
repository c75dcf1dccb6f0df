//! Plain-text exchange formats. Every table is a CSV file with a named
//! header row; lines starting with `#` are comments. Numbers are written
//! with the shortest representation that round-trips, so identical runs
//! produce identical files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::convexify::{DescentTrace, PotentialProfile, REFINED_NODES};
use crate::error::{parse_err, Error, Result};
use crate::forward::BoundaryData;
use crate::grid::{GridFn1D, GridFn2D, UniformGrid1D, UniformGrid2D};
use crate::preprocess::{DerivedData, ExperimentalTrace, Polarity, TimeSeries};

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Write named columns of equal length.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.len() != header.len() || columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Argument(
            "column count or lengths do not match the header".into(),
        ));
    }
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    let io_err = |e: csv::Error| parse_err(path_str(path), e);
    w.write_record(header).map_err(io_err)?;
    let mut rec = Vec::with_capacity(header.len());
    for k in 0..rows {
        rec.clear();
        rec.extend(columns.iter().map(|c| c[k].to_string()));
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a table whose header row must equal `header`; returns columns.
pub fn read_columns(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| parse_err(path_str(path), e))?;
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let found: Vec<String> = r
        .headers()
        .map_err(|e| parse_err(path_str(path), e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if found != header {
        return Err(parse_err(
            path_str(path),
            format!("expected header `{}`, found `{}`", header.join(","), found.join(",")),
        ));
    }
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path_str(path), e))?;
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(
                    path_str(path),
                    format!("row {}: column `{}` is not a number: `{field}`", line + 1, header[c]),
                )
            })?;
            cols[c].push(v);
        }
    }
    if cols[0].len() < 2 {
        return Err(parse_err(path_str(path), "need at least two rows"));
    }
    Ok(cols)
}

/// The uniform grid spanned by a coordinate column.
pub fn uniform_grid_of(column: &[f64], what: &str) -> Result<UniformGrid1D> {
    let n = column.len();
    if n < 2 {
        return Err(parse_err(what, "need at least two grid nodes"));
    }
    let step = (column[n - 1] - column[0]) / (n - 1) as f64;
    for (k, v) in column.iter().enumerate() {
        let expect = column[0] + k as f64 * step;
        if (v - expect).abs() > 1e-6 * step.abs().max(1e-300) {
            return Err(parse_err(
                what,
                format!("coordinate column is not uniform at row {}", k + 1),
            ));
        }
    }
    UniformGrid1D::new(column[0], step, n).map_err(|e| e.context(what.to_owned()))
}

pub fn write_boundary_data(path: &Path, data: &BoundaryData) -> Result<()> {
    let t: Vec<f64> = data.g0.times().collect();
    write_columns(path, &["t", "g0", "g1"], &[&t, &data.g0.samples, &data.g1.samples])
}

pub fn read_boundary_data(path: &Path) -> Result<BoundaryData> {
    let cols = read_columns(path, &["t", "g0", "g1"])?;
    let g = uniform_grid_of(&cols[0], &path_str(path))?;
    Ok(BoundaryData {
        g0: TimeSeries::new(g.start(), g.step(), cols[1].clone())?,
        g1: TimeSeries::new(g.start(), g.step(), cols[2].clone())?,
    })
}

pub fn write_derived(path: &Path, data: &DerivedData) -> Result<()> {
    let t: Vec<f64> = data.grid.nodes().collect();
    write_columns(path, &["t", "s0", "s1"], &[&t, &data.s0, &data.s1])
}

pub fn read_derived(path: &Path) -> Result<DerivedData> {
    let cols = read_columns(path, &["t", "s0", "s1"])?;
    let g = uniform_grid_of(&cols[0], &path_str(path))?;
    DerivedData::from_samples(g, cols[1].clone(), cols[2].clone())
}

/// Writes the finest available samples of `r`.
pub fn write_potential(path: &Path, r: &PotentialProfile) -> Result<()> {
    let f = r.finest();
    let x: Vec<f64> = f.grid.nodes().collect();
    write_columns(path, &["x", "r"], &[&x, &f.values])
}

/// Reads `x,r`. Samples not already on [`REFINED_NODES`] nodes starting at
/// 0 are resampled onto that grid over `[0, x_max]`.
pub fn read_potential(path: &Path) -> Result<PotentialProfile> {
    let cols = read_columns(path, &["x", "r"])?;
    let g = uniform_grid_of(&cols[0], &path_str(path))?;
    let prof = PotentialProfile::new(GridFn1D::new(g, cols[1].clone())?);
    if g.start().abs() < 1e-12 && g.count() == REFINED_NODES {
        Ok(prof)
    } else {
        prof.with_refined(g.end(), REFINED_NODES)
    }
}

pub fn write_descent_trace(path: &Path, trace: &DescentTrace) -> Result<()> {
    let col = |f: fn(&crate::convexify::DescentRecord) -> f64| trace.records.iter().map(f).collect::<Vec<f64>>();
    let iter = col(|r| r.iter as f64);
    let k = col(|r| r.k);
    let gn = col(|r| r.gradnorm);
    let step = col(|r| r.step);
    write_columns(path, &["iter", "K", "gradnorm", "step"], &[&iter, &k, &gn, &step])
}

pub fn write_profile(path: &Path, c: &GridFn1D) -> Result<()> {
    let y: Vec<f64> = c.grid.nodes().collect();
    write_columns(path, &["y", "c"], &[&y, &c.values])
}

pub fn read_profile(path: &Path) -> Result<GridFn1D> {
    let cols = read_columns(path, &["y", "c"])?;
    let g = uniform_grid_of(&cols[0], &path_str(path))?;
    GridFn1D::new(g, cols[1].clone())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| parse_err(path_str(path), e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| parse_err(path_str(path), e))
}

/// Radar trace file: one header comment with `key=value` pairs
/// (`dt_ns`, `scale`, `background_lo`, `background_hi`, `polarity`), then
/// one sample per line.
pub fn write_experimental_trace(path: &Path, trace: &ExperimentalTrace) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let polarity = match trace.polarity {
        Polarity::Negative => "negative",
        Polarity::Positive => "positive",
    };
    writeln!(
        w,
        "# dt_ns={},scale={},background_lo={},background_hi={},polarity={}",
        trace.dt_ns, trace.scale, trace.background.0, trace.background.1, polarity
    )?;
    for v in &trace.samples {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_experimental_trace(path: &Path) -> Result<ExperimentalTrace> {
    let what = path_str(path);
    let file = File::open(path).map_err(|e| parse_err(&what, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Ingest(format!("{what}: empty file")))??;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Ingest(format!("{what}: first line must be a `#` header")))?;
    let mut dt_ns = None;
    let mut scale = None;
    let mut lo = None;
    let mut hi = None;
    let mut polarity = Polarity::Negative;
    for pair in header.split(',') {
        let (key, value) = pair
            .trim()
            .split_once('=')
            .ok_or_else(|| Error::Ingest(format!("{what}: malformed header entry `{pair}`")))?;
        let num = || {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Ingest(format!("{what}: `{key}` is not a number: `{value}`")))
        };
        match key.trim() {
            "dt_ns" => dt_ns = Some(num()?),
            "scale" => scale = Some(num()?),
            "background_lo" => lo = Some(num()?),
            "background_hi" => hi = Some(num()?),
            "polarity" => {
                polarity = value
                    .parse()
                    .map_err(|e: Error| Error::Ingest(format!("{what}: {e}")))?
            }
            other => log::warn!("{what}: ignoring unknown header key `{other}`"),
        }
    }
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| Error::Ingest(format!("{what}: header lacks `{key}`")));
    let mut samples = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        samples.push(
            line.parse::<f64>()
                .map_err(|_| Error::Ingest(format!("{what}: line {}: not a number: `{line}`", k + 2)))?,
        );
    }
    let trace = ExperimentalTrace {
        samples,
        dt_ns: need(dt_ns, "dt_ns")?,
        scale: need(scale, "scale")?,
        background: (need(lo, "background_lo")?, need(hi, "background_hi")?),
        polarity,
    };
    if !(trace.background.0 > 0.0 && trace.background.0 <= trace.background.1) {
        return Err(Error::Ingest(format!(
            "{what}: background interval [{}, {}] is invalid",
            trace.background.0, trace.background.1
        )));
    }
    Ok(trace)
}

/// Grid-function layout: a `#` line holding `start_x,step_x,count_x` (and
/// `start_t,step_t,count_t` in 2D), then one x-row of values per line.
pub fn write_grid_fn_1d(path: &Path, f: &GridFn1D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let g = f.grid;
    writeln!(w, "# {},{},{}", g.start(), g.step(), g.count())?;
    for v in &f.values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid_fn_2d(path: &Path, f: &GridFn2D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let (x, t) = (f.grid.x, f.grid.t);
    writeln!(
        w,
        "# {},{},{},{},{},{}",
        x.start(),
        x.step(),
        x.count(),
        t.start(),
        t.step(),
        t.count()
    )?;
    let mut line = String::new();
    for row in f.values.rows() {
        line.clear();
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn read_grid_lines(path: &Path, axes: usize) -> Result<(Vec<UniformGrid1D>, Vec<Vec<f64>>)> {
    let what = path_str(path);
    let file = File::open(path).map_err(|e| parse_err(&what, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().ok_or_else(|| parse_err(&what, "empty file"))??;
    let fields: Vec<&str> = header
        .strip_prefix('#')
        .ok_or_else(|| parse_err(&what, "first line must be a `#` grid header"))?
        .split(',')
        .map(str::trim)
        .collect();
    if fields.len() != 3 * axes {
        return Err(parse_err(
            &what,
            format!("grid header needs {} fields, found {}", 3 * axes, fields.len()),
        ));
    }
    let mut grids = Vec::with_capacity(axes);
    for a in fields.chunks(3) {
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(&what, format!("bad grid header field `{s}`")))
        };
        let count = a[2]
            .parse::<usize>()
            .map_err(|_| parse_err(&what, format!("bad grid count `{}`", a[2])))?;
        grids.push(UniformGrid1D::new(num(a[0])?, num(a[1])?, count).map_err(|e| e.context(what.clone()))?);
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(&what, format!("line {}: not a number: `{v}`", k + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((grids, rows))
}

pub fn read_grid_fn_1d(path: &Path) -> Result<GridFn1D> {
    let (grids, rows) = read_grid_lines(path, 1)?;
    if rows.iter().any(|r| r.len() != 1) {
        return Err(parse_err(path_str(path), "expected one value per line"));
    }
    GridFn1D::new(grids[0], rows.into_iter().map(|r| r[0]).collect())
}

pub fn read_grid_fn_2d(path: &Path) -> Result<GridFn2D> {
    let (grids, rows) = read_grid_lines(path, 2)?;
    let grid = UniformGrid2D::new(grids[0], grids[1]);
    let (nx, nt) = grid.shape();
    if rows.len() != nx || rows.iter().any(|r| r.len() != nt) {
        return Err(parse_err(path_str(path), format!("expected {nx} rows of {nt} values")));
    }
    let values =
        Array2::from_shape_vec((nx, nt), rows.concat()).map_err(|e| parse_err(path_str(path), e.to_string()))?;
    GridFn2D::new(grid, values)
}
