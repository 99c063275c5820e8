//! Feature and label files.
//!
//! Binary features: `b"DAF1"`, then little-endian `u32` row count and `u32`
//! dimension, then `count * dim` little-endian `f32` values in row-major
//! order. CSV features: one row per entity, comma separated, no header.
//! Labels: CSV with header `index,person_id,camera_id`, rows in feature order.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{GroundTruth, Label};
use crate::matrix::{FeatureMatrix, Matrix, Role};
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 4] = b"DAF1";
const HEADER_LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFormat {
    #[default]
    Binary,
    Csv,
}

fn load_err(path: &Path, location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Load {
        path: path.to_path_buf(),
        location: location.into(),
        reason: reason.into(),
    }
}

pub fn load_features<T: Scalar>(path: &Path, format: FeatureFormat, role: Role) -> Result<FeatureMatrix<T>> {
    match format {
        FeatureFormat::Binary => load_binary(path, role),
        FeatureFormat::Csv => load_csv(path, role),
    }
}

/// Parses the binary feature layout from memory.
pub fn decode_binary<T: Scalar>(bytes: &[u8], path: &Path, role: Role) -> Result<FeatureMatrix<T>> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(load_err(path, "byte 0", "bad magic, expected \"DAF1\""));
    }
    if bytes.len() < HEADER_LEN {
        return Err(load_err(
            path,
            format!("byte {}", bytes.len()),
            "truncated header",
        ));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let count = word(4) as usize;
    let dim = word(8) as usize;
    if count == 0 || dim == 0 {
        return Err(load_err(
            path,
            "byte 4",
            format!("empty matrix declared ({count}x{dim})"),
        ));
    }
    let expected = count
        .checked_mul(dim)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| load_err(path, "byte 4", "declared size overflows"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() < expected {
        return Err(load_err(
            path,
            format!("byte {}", bytes.len()),
            format!(
                "truncated payload: {count}x{dim} needs {expected} bytes, found {}",
                payload.len()
            ),
        ));
    }
    if payload.len() > expected {
        return Err(load_err(
            path,
            format!("byte {}", HEADER_LEN + expected),
            format!("{} trailing bytes after payload", payload.len() - expected),
        ));
    }
    let mut data = Vec::with_capacity(count * dim);
    for (k, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().expect("4 bytes"));
        if !v.is_finite() {
            return Err(load_err(
                path,
                format!("byte {}", HEADER_LEN + 4 * k),
                format!("non-finite value {v}"),
            ));
        }
        data.push(T::of(f64::from(v)));
    }
    FeatureMatrix::new(Matrix::from_vec(count, dim, data)?, role)
}

fn load_binary<T: Scalar>(path: &Path, role: Role) -> Result<FeatureMatrix<T>> {
    let bytes = fs::read(path)?;
    decode_binary(&bytes, path, role)
}

/// Serializes to the binary layout; values are rounded to `f32`.
pub fn encode_binary<T: Scalar>(features: &FeatureMatrix<T>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * features.count() * features.dim());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(features.count() as u32).to_le_bytes());
    out.extend_from_slice(&(features.dim() as u32).to_le_bytes());
    for &v in features.values().as_slice() {
        let v = v.to_f32().unwrap_or(f32::NAN);
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn load_csv<T: Scalar>(path: &Path, role: Role) -> Result<FeatureMatrix<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| load_err(path, "open", e.to_string()))?;
    let mut rows: Vec<Vec<T>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            let reason = match e.kind() {
                csv::ErrorKind::UnequalLengths {
                    expected_len, len, ..
                } => format!("ragged row: expected {expected_len} columns, found {len}"),
                _ => e.to_string(),
            };
            load_err(path, format!("line {line}"), reason)
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                let v: f64 = field.parse().map_err(|_| {
                    load_err(
                        path,
                        format!("line {line}"),
                        format!("column {c}: cannot parse {field:?} as a number"),
                    )
                })?;
                if !v.is_finite() {
                    return Err(load_err(
                        path,
                        format!("line {line}"),
                        format!("column {c}: non-finite value"),
                    ));
                }
                Ok(T::of(v))
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(load_err(path, "line 1", "no rows"));
    }
    FeatureMatrix::from_rows(&rows, role)
}

/// Writes features in the given format.
pub fn save_features<T: Scalar>(path: &Path, features: &FeatureMatrix<T>, format: FeatureFormat) -> Result<()> {
    match format {
        FeatureFormat::Binary => fs::write(path, encode_binary(features))?,
        FeatureFormat::Csv => {
            let mut out = std::io::BufWriter::new(fs::File::create(path)?);
            for row in features.values().iter_rows() {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", line.join(","))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Reads `index,person_id,camera_id` rows; indices must run 0, 1, 2, ...
pub fn load_labels(path: &Path) -> Result<GroundTruth> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| load_err(path, "open", e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| load_err(path, "line 1", e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["index", "person_id", "camera_id"] {
        return Err(load_err(
            path,
            "line 1",
            "missing header \"index,person_id,camera_id\"",
        ));
    }
    let mut seen = HashSet::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            load_err(path, format!("line {line}"), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let int = |c: usize, name: &str| -> Result<i64> {
            record[c].parse::<i64>().map_err(|_| {
                load_err(
                    path,
                    format!("line {line}"),
                    format!("{name} {:?} is not an integer", &record[c]),
                )
            })
        };
        let index = int(0, "index")?;
        let person_id = int(1, "person_id")?;
        let camera_id = int(2, "camera_id")?;
        if !seen.insert(index) {
            return Err(load_err(
                path,
                format!("line {line}"),
                format!("duplicate index {index}"),
            ));
        }
        if index != labels.len() as i64 {
            return Err(load_err(
                path,
                format!("line {line}"),
                format!("index {index} out of sequence, expected {}", labels.len()),
            ));
        }
        labels.push(Label {
            person_id,
            camera_id,
        });
    }
    Ok(GroundTruth::new(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::path::PathBuf;

    fn write_tmp(dir: &tempfile::TempDir, name: &str, bytes: &[u8]) -> PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, bytes).unwrap();
        p
    }

    fn binary(n: u32, m: u32, vals: &[f32]) -> Vec<u8> {
        let mut b = MAGIC.to_vec();
        b.extend_from_slice(&n.to_le_bytes());
        b.extend_from_slice(&m.to_le_bytes());
        for v in vals {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b
    }

    #[test]
    fn binary_two_by_three() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_tmp(&dir, "f.bin", &binary(2, 3, &[1., 2., 3., 4., 5., 6.]));
        let f: FeatureMatrix<f64> = load_features(&p, FeatureFormat::Binary, Role::Probe).unwrap();
        assert_eq!((f.count(), f.dim()), (2, 3));
        assert_eq!(f.row(1), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn binary_errors() {
        let dir = tempfile::tempdir().unwrap();
        let short = write_tmp(&dir, "s.bin", &binary(2, 3, &[1., 2., 3., 4., 5.]));
        let err = load_features::<f64>(&short, FeatureFormat::Binary, Role::Probe).unwrap_err();
        assert!(err.to_string().contains("truncated payload"), "{err}");
        assert!(err.to_string().contains("byte 32"), "{err}");

        let mut bad = binary(1, 1, &[1.0]);
        bad[0] = b'X';
        let bad = write_tmp(&dir, "m.bin", &bad);
        let err = load_features::<f64>(&bad, FeatureFormat::Binary, Role::Probe).unwrap_err();
        assert!(err.to_string().contains("bad magic"), "{err}");

        let nan = write_tmp(&dir, "n.bin", &binary(1, 2, &[1.0, f32::INFINITY]));
        let err = load_features::<f64>(&nan, FeatureFormat::Binary, Role::Probe).unwrap_err();
        assert!(err.to_string().contains("byte 16"), "{err}");
    }

    #[test]
    fn csv_features() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_tmp(&dir, "f.csv", b"1.0,2.0\n3.0,4.0");
        let f: FeatureMatrix<f64> = load_features(&p, FeatureFormat::Csv, Role::Gallery).unwrap();
        assert_eq!(f.row(0), &[1.0, 2.0]);
        assert_eq!(f.row(1), &[3.0, 4.0]);

        let ragged = write_tmp(&dir, "r.csv", b"1,2\n3,4,5\n");
        let err = load_features::<f64>(&ragged, FeatureFormat::Csv, Role::Gallery).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");

        let nan = write_tmp(&dir, "n.csv", b"1,2\n3,NaN\n");
        let err = load_features::<f64>(&nan, FeatureFormat::Csv, Role::Gallery).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn labels() {
        let dir = tempfile::tempdir().unwrap();
        let ok = write_tmp(&dir, "l.csv", b"index,person_id,camera_id\n0,5,1\n1,5,2\n");
        let gt = load_labels(&ok).unwrap();
        assert_eq!(gt.len(), 2);
        assert_eq!(gt.get(1), Label { person_id: 5, camera_id: 2 });

        let dup = write_tmp(&dir, "d.csv", b"index,person_id,camera_id\n0,5,1\n0,5,2\n");
        assert!(load_labels(&dup).unwrap_err().to_string().contains("duplicate"));

        let gap = write_tmp(&dir, "g.csv", b"index,person_id,camera_id\n0,5,1\n2,5,2\n");
        assert!(load_labels(&gap).is_err());

        let cam = write_tmp(&dir, "c.csv", b"index,person_id,camera_id\n0,5,x\n");
        assert!(load_labels(&cam).unwrap_err().to_string().contains("camera_id"));

        let header = write_tmp(&dir, "h.csv", b"0,5,1\n1,5,2\n");
        assert!(load_labels(&header).unwrap_err().to_string().contains("header"));
    }

    proptest! {
        #[test]
        fn binary_round_trip_is_bit_exact(
            rows in prop::collection::vec(prop::collection::vec(any::<f32>().prop_filter("finite", |v| v.is_finite()), 3), 1..8)
        ) {
            let f = FeatureMatrix::from_rows(&rows, Role::Probe).unwrap();
            let back: FeatureMatrix<f32> = decode_binary(&encode_binary(&f), Path::new("mem"), Role::Probe).unwrap();
            for (a, b) in f.values().as_slice().iter().zip(back.values().as_slice()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
