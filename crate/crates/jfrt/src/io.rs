//! CSV and JSON plumbing: signals, coordinates, edge lists, labels, and
//! sweep reports. All numeric output carries 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;

use crate::denoise::SweepResult;
use crate::error::{Error, Result};
use crate::graph::{build_knn_graph_with, Graph, Metric, WeightMode};
use crate::joint::JointSignal;
use crate::linalg::ComplexMatrix;

/// A loaded experiment input: the graph, the signal living on it, and where
/// it came from.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: Graph,
    pub signal: JointSignal,
    pub name: String,
    pub units: String,
    pub source: PathBuf,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parses `1.5`, `1.5+0.25j`, `1.5-0.25j`, or `0.25j`.
pub fn parse_complex(field: &str) -> std::result::Result<Complex64, String> {
    let s = field.trim();
    if s.is_empty() {
        return Err("empty field".into());
    }
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let Some(body) = s.strip_suffix(['j', 'J']) else {
        return Err(format!("not a real or complex number: {s:?}"));
    };
    // Split at the sign of the imaginary part: the last +/- that does not
    // follow an exponent marker and is not the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'e'
                && bytes[i - 1] != b'E'
        });
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re = re_str
        .parse::<f64>()
        .map_err(|_| format!("bad real part in {s:?}"))?;
    let im = match im_str {
        "+" => 1.0,
        "-" => -1.0,
        _ => im_str
            .parse::<f64>()
            .map_err(|_| format!("bad imaginary part in {s:?}"))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.16e}", z.re)
    } else if z.im < 0.0 {
        format!("{:.16e}{:.16e}j", z.re, z.im)
    } else {
        format!("{:.16e}+{:.16e}j", z.re, z.im)
    }
}

/// Reads a headerless CSV with one row per vertex and one column per time
/// sample; entries real or `re+imj` complex.
pub fn load_signal_csv(path: &Path) -> Result<JointSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let row = record
            .iter()
            .map(parse_complex)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|msg| parse_err(path, i + 1, msg))?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    path,
                    i + 1,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(parse_err(path, 1, "empty signal file"));
    }
    let (n, t) = (rows.len(), rows[0].len());
    let mut values: ComplexMatrix = Array2::zeros((n, t));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    Ok(JointSignal::new(values))
}

pub fn save_signal_csv(path: &Path, signal: &JointSignal) -> Result<()> {
    let mut out = String::new();
    for row in signal.values.outer_iter() {
        let line: Vec<String> = row.iter().map(|&z| format_complex(z)).collect();
        writeln!(out, "{}", line.join(",")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads `vertex_id,x,y[,z]` with a one-line header; ids must cover
/// `0..N-1`.
pub fn load_coords_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut entries: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        if record.len() < 3 || record.len() > 4 {
            return Err(parse_err(
                path,
                line,
                format!("expected vertex_id plus 2 or 3 coordinates, found {} fields", record.len()),
            ));
        }
        let id: usize = record[0]
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad vertex id {:?}", &record[0])))?;
        let coords = record
            .iter()
            .skip(1)
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| parse_err(path, line, "bad coordinate value"))?;
        entries.push((id, coords));
    }
    if entries.is_empty() {
        return Err(parse_err(path, 1, "empty coordinates file"));
    }
    let n = entries.len();
    let dims = entries[0].1.len();
    let mut out = vec![None; n];
    for (id, coords) in entries {
        if coords.len() != dims {
            return Err(parse_err(path, 1, "inconsistent coordinate dimensions"));
        }
        if id >= n || out[id].is_some() {
            return Err(parse_err(
                path,
                1,
                format!("vertex ids must cover 0..{} exactly, got duplicate or out-of-range {id}", n - 1),
            ));
        }
        out[id] = Some(coords);
    }
    Ok(out.into_iter().map(|c| c.unwrap()).collect())
}

pub fn save_coords_csv(path: &Path, coords: &[Vec<f64>]) -> Result<()> {
    let dims = coords.first().map_or(2, |c| c.len());
    let mut out = String::from(match dims {
        3 => "vertex_id,x,y,z\n",
        _ => "vertex_id,x,y\n",
    });
    for (i, c) in coords.iter().enumerate() {
        let fields: Vec<String> = c.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{i},{}", fields.join(",")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads `src,dst,weight` with a one-line header, 0-indexed vertices,
/// undirected. The vertex count is one past the largest index.
pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut n = 0usize;
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
        if record.len() != 3 {
            return Err(parse_err(path, line, "expected src,dst,weight"));
        }
        let src: usize = record[0]
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad vertex index {:?}", &record[0])))?;
        let dst: usize = record[1]
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad vertex index {:?}", &record[1])))?;
        let weight: f64 = record[2]
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad weight {:?}", &record[2])))?;
        n = n.max(src + 1).max(dst + 1);
        edges.push((src, dst, weight));
    }
    if edges.is_empty() {
        return Err(parse_err(path, 1, "empty edge list"));
    }
    let mut adjacency: ComplexMatrix = Array2::zeros((n, n));
    for (src, dst, weight) in edges {
        adjacency[[src, dst]] = Complex64::new(weight, 0.0);
        adjacency[[dst, src]] = Complex64::new(weight, 0.0);
    }
    Graph::undirected(adjacency)
}

/// One label per line, no header.
pub fn load_labels_csv(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        labels.push(
            s.parse::<usize>()
                .map_err(|_| parse_err(path, i + 1, format!("bad label {s:?}")))?,
        );
    }
    if labels.is_empty() {
        return Err(parse_err(path, 1, "empty labels file"));
    }
    Ok(labels)
}

pub fn save_labels_csv(path: &Path, labels: &[usize]) -> Result<()> {
    let mut out = String::new();
    for l in labels {
        writeln!(out, "{l}").expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Loads a signal and matching coordinates, then builds a k-nearest-neighbor
/// graph over the coordinates.
pub fn load_timeseries_csv(
    signal_path: &Path,
    coords_path: &Path,
    k: usize,
    weight_mode: WeightMode,
    metric: Metric,
) -> Result<Dataset> {
    let signal = load_signal_csv(signal_path)?;
    let coords = load_coords_csv(coords_path)?;
    if coords.len() != signal.n_vertices() {
        return Err(Error::DimensionMismatch {
            context: "time series ingestion",
            expected: (signal.n_vertices(), signal.n_time()),
            got: (coords.len(), signal.n_time()),
        });
    }
    let graph = build_knn_graph_with(&coords, k, weight_mode, metric)?.with_coords(coords);
    let name = signal_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Ok(Dataset {
        graph,
        signal,
        name,
        units: "unspecified".into(),
        source: signal_path.to_path_buf(),
    })
}

pub fn write_sweep_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let mut out = String::from("alpha,beta,tau_g,tau_t,mse_percent\n");
    for row in &result.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.alpha, row.beta, row.tau_g, row.tau_t, row.mse_percent
        )
        .expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_summary_json(path: &Path, result: &SweepResult) -> Result<()> {
    let best = result.best();
    let json = format!(
        concat!(
            "{{\n",
            "  \"argmin\": {{\n",
            "    \"alpha\": {:.16e},\n",
            "    \"beta\": {:.16e},\n",
            "    \"tau_g\": {:.16e},\n",
            "    \"tau_t\": {:.16e},\n",
            "    \"mse_percent\": {:.16e}\n",
            "  }},\n",
            "  \"grid_shape\": [{}, {}, {}, {}]\n",
            "}}\n"
        ),
        best.alpha,
        best.beta,
        best.tau_g,
        best.tau_t,
        best.mse_percent,
        result.grid_shape[0],
        result.grid_shape[1],
        result.grid_shape[2],
        result.grid_shape[3],
    );
    std::fs::write(path, json)?;
    Ok(())
}
