use std::path::Path;

use nsgap::cube::CubeFunction;
use nsgap::metric::{lp_metric, FiniteMetric, PointCloud};
use nsgap::spectral::StochasticMatrix;
use nsgap::{io, Value};

use crate::report::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn in_file(path: &Path, e: nsgap::Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

/// JSON rows when the file starts with '[', dense text otherwise.
pub fn load_matrix(path: &Path) -> Result<StochasticMatrix, Failure> {
    let text = read_text(path)?;
    let parsed = if text.trim_start().starts_with('[') {
        io::matrix_from_json(&text)
    } else {
        io::matrix_from_text(&text)
    };
    parsed.map_err(|e| in_file(path, e))
}

/// A metric file is either a JSON distance matrix or a point cloud object
/// ({"p": .., "points": ..}), which is distanced under its own ℓ_p norm.
pub fn load_metric(path: &Path) -> Result<FiniteMetric, Failure> {
    let text = read_text(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let cloud = io::cloud_from_json(&text).map_err(|e| in_file(path, e))?;
        Ok(lp_metric(&cloud))
    } else if trimmed.starts_with('[') {
        io::metric_from_json(&text).map_err(|e| in_file(path, e))
    } else {
        Err(Failure::validation(format!(
            "{}: expected a JSON distance matrix or a {{\"p\", \"points\"}} cloud",
            path.display()
        )))
    }
}

pub fn load_cloud(path: &Path) -> Result<PointCloud, Failure> {
    io::cloud_from_json(&read_text(path)?).map_err(|e| in_file(path, e))
}

pub fn load_cube(path: &Path) -> Result<CubeFunction, Failure> {
    io::cube_from_json(&read_text(path)?).map_err(|e| in_file(path, e))
}

pub fn load_edges(path: &Path) -> Result<(usize, Vec<(usize, usize)>), Failure> {
    io::edges_from_text(&read_text(path)?).map_err(|e| in_file(path, e))
}

/// clap value parser for extended reals: a number, or "inf".
pub fn parse_value(s: &str) -> Result<Value, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Value::Infinite);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Value::Finite(v)),
        _ => Err(format!("expected a finite number or \"inf\", got {s:?}")),
    }
}

/// Wrappers keep clap treating one comma-separated argument as one value.
#[derive(Clone, Debug)]
pub struct IndexList(pub Vec<u64>);

#[derive(Clone, Debug)]
pub struct RealList(pub Vec<f64>);

/// Comma-separated integers with inclusive ranges: "1..20", "0,5,64..66".
pub fn parse_index_list(s: &str) -> Result<IndexList, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err("empty item in list".into());
        }
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
            if b < a {
                return Err(format!("range {item:?} runs backwards"));
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| format!("bad integer {item:?}"))?);
        }
    }
    Ok(IndexList(out))
}

/// Comma-separated reals: "2,4,2.77".
pub fn parse_real_list(s: &str) -> Result<RealList, String> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {item:?}"))
        })
        .collect::<Result<Vec<f64>, String>>()
        .map(RealList)
}

#[cfg(test)]
mod tests {
    use super::{parse_index_list, parse_real_list, parse_value};
    use nsgap::Value;

    #[test]
    fn index_lists_mix_ranges_and_singletons() {
        assert_eq!(parse_index_list("1..4,9").unwrap().0, vec![1, 2, 3, 4, 9]);
        assert_eq!(parse_index_list("7").unwrap().0, vec![7]);
        assert!(parse_index_list("5..2").is_err());
        assert!(parse_index_list("a").is_err());
        assert!(parse_index_list("1,,2").is_err());
    }

    #[test]
    fn real_lists_and_extended_values_parse() {
        assert_eq!(parse_real_list("2, 4.5").unwrap().0, vec![2.0, 4.5]);
        assert!(parse_real_list("2,nan").is_err());
        assert_eq!(parse_value("inf").unwrap(), Value::Infinite);
        assert_eq!(parse_value("3.5").unwrap(), Value::Finite(3.5));
        assert!(parse_value("infinity").is_err());
    }
}
