//! Parsers for the external file formats: matrices as JSON
//! array-of-arrays or dense whitespace text with a leading dimension
//! line, metric matrices as JSON, point clouds and cube functions as
//! JSON objects, and graph edge lists as text. Every entry point is
//! total over arbitrary byte strings (after UTF-8 decoding) and
//! validates fully before handing back a domain value, which makes
//! these the crate's fuzzing surface.

use serde::Deserialize;

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetric, PExponent, PointCloud};
use crate::spectral::StochasticMatrix;

/// Dense matrices beyond this size are rejected before allocation.
pub const MAX_MATRIX_SIZE: usize = 4096;

/// Point count cap for cloud files.
pub const MAX_CLOUD_POINTS: usize = 65_536;

/// Vertex count cap for edge-list files.
pub const MAX_GRAPH_VERTICES: usize = 1 << 20;

fn json_rows(text: &str, context: &'static str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|source| Error::Json { context, source })?;
    if rows.len() > MAX_MATRIX_SIZE {
        return Err(Error::SizeOutOfRange {
            what: context,
            got: rows.len(),
            min: 1,
            max: MAX_MATRIX_SIZE,
        });
    }
    Ok(rows)
}

/// JSON array-of-arrays to a validated symmetric stochastic matrix.
pub fn matrix_from_json(text: &str) -> Result<StochasticMatrix> {
    StochasticMatrix::new(&json_rows(text, "stochastic matrix")?)
}

/// JSON array-of-arrays to a validated finite metric.
pub fn metric_from_json(text: &str) -> Result<FiniteMetric> {
    FiniteMetric::new(&json_rows(text, "metric matrix")?)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Whitespace-separated dense text: the first non-empty line holds the
/// dimension n, the rest holds exactly n² numbers in row-major order.
/// `#` starts a comment anywhere on a line.
pub fn matrix_from_text(text: &str) -> Result<StochasticMatrix> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            Some((no, raw)) => {
                let t = strip_comment(raw).trim();
                if !t.is_empty() {
                    break (no + 1, t);
                }
            }
            None => {
                return Err(Error::Parse(
                    "empty matrix file: expected a leading dimension line".into(),
                ))
            }
        }
    };
    let n: usize = header.parse().map_err(|_| {
        Error::Parse(format!("line {header_no}: bad dimension {header:?}"))
    })?;
    if n == 0 || n > MAX_MATRIX_SIZE {
        return Err(Error::SizeOutOfRange {
            what: "stochastic matrix",
            got: n,
            min: 1,
            max: MAX_MATRIX_SIZE,
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (no, raw) in lines {
        for token in strip_comment(raw).split_whitespace() {
            if entries.len() == n * n {
                return Err(Error::Parse(format!(
                    "line {}: more than {} entries for a {n}x{n} matrix",
                    no + 1,
                    n * n
                )));
            }
            let v: f64 = token.parse().map_err(|_| {
                Error::Parse(format!("line {}: bad number {token:?}", no + 1))
            })?;
            entries.push(v);
        }
    }
    if entries.len() != n * n {
        return Err(Error::Parse(format!(
            "expected {} entries for a {n}x{n} matrix, found {}",
            n * n,
            entries.len()
        )));
    }
    StochasticMatrix::from_flat(n, entries)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PRaw {
    Number(f64),
    Name(String),
}

impl PRaw {
    fn resolve(self) -> Result<PExponent> {
        match self {
            PRaw::Number(v) => Ok(PExponent::Finite(v)),
            PRaw::Name(s) if s.eq_ignore_ascii_case("inf") => Ok(PExponent::Infinity),
            PRaw::Name(s) => Err(Error::Parse(format!(
                "bad exponent {s:?}: expected a number or \"inf\""
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CloudFile {
    p: PRaw,
    points: Vec<Vec<f64>>,
}

/// Point cloud file: {"p": number or "inf", "points": [[...], ...]}.
pub fn cloud_from_json(text: &str) -> Result<PointCloud> {
    let file: CloudFile =
        serde_json::from_str(text).map_err(|source| Error::Json { context: "point cloud", source })?;
    if file.points.len() > MAX_CLOUD_POINTS {
        return Err(Error::SizeOutOfRange {
            what: "point cloud",
            got: file.points.len(),
            min: 1,
            max: MAX_CLOUD_POINTS,
        });
    }
    PointCloud::new(file.points, file.p.resolve()?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeFile {
    n: usize,
    values: Vec<Vec<f64>>,
    #[serde(default)]
    p: Option<PRaw>,
}

/// Cube function file: {"n": dimension, "values": one point per vertex
/// in weight-free binary order, "p": optional, default 2}.
pub fn cube_from_json(text: &str) -> Result<CubeFunction> {
    let file: CubeFile =
        serde_json::from_str(text).map_err(|source| Error::Json { context: "cube function", source })?;
    let p = match file.p {
        Some(raw) => raw.resolve()?,
        None => PExponent::Finite(2.0),
    };
    CubeFunction::from_points(file.n, file.values, p)
}

/// Edge-list text: the first non-empty line holds the vertex count,
/// every following non-empty line holds one "u v" pair. `#` starts a
/// comment. Vertices must lie in 0..n; loops and duplicates are kept
/// for the caller to judge.
pub fn edges_from_text(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            Some((no, raw)) => {
                let t = strip_comment(raw).trim();
                if !t.is_empty() {
                    break (no + 1, t);
                }
            }
            None => {
                return Err(Error::Parse(
                    "empty edge file: expected a leading vertex-count line".into(),
                ))
            }
        }
    };
    let n: usize = header.parse().map_err(|_| {
        Error::Parse(format!("line {header_no}: bad vertex count {header:?}"))
    })?;
    if n == 0 || n > MAX_GRAPH_VERTICES {
        return Err(Error::SizeOutOfRange {
            what: "graph",
            got: n,
            min: 1,
            max: MAX_GRAPH_VERTICES,
        });
    }
    let mut edges = Vec::new();
    for (no, raw) in lines {
        let t = strip_comment(raw).trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!(
                "line {}: expected \"u v\", got {t:?}",
                no + 1
            )));
        };
        let u: usize = a.parse().map_err(|_| {
            Error::Parse(format!("line {}: bad vertex {a:?}", no + 1))
        })?;
        let v: usize = b.parse().map_err(|_| {
            Error::Parse(format!("line {}: bad vertex {b:?}", no + 1))
        })?;
        if u >= n || v >= n {
            return Err(Error::Parse(format!(
                "line {}: edge ({u},{v}) outside 0..{n}",
                no + 1
            )));
        }
        edges.push((u, v));
    }
    Ok((n, edges))
}
