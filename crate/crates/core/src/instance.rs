//! TSP instances, the TSPLIB `EUC_2D` reader/writer and dense distance matrices.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How coordinate pairs are turned into edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Unrounded Euclidean distance.
    #[default]
    RealEuclidean,
    /// Euclidean distance rounded to the nearest integer (TSPLIB `nint`).
    TsplibRounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub name: String,
    pub coords: Vec<(f64, f64)>,
    pub metric: Metric,
}

impl TspInstance {
    pub fn new(name: impl Into<String>, coords: Vec<(f64, f64)>, metric: Metric) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("instance needs at least one city".into()));
        }
        Ok(Self {
            name: name.into(),
            coords,
            metric,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        DistanceMatrix::from_coords(&self.coords, self.metric)
    }

    /// Serialises the instance as a TSPLIB `EUC_2D` file.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.len());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (i, (x, y)) in self.coords.iter().enumerate() {
            // `{:?}` prints the shortest representation that round-trips.
            let _ = writeln!(out, "{} {:?} {:?}", i + 1, x, y);
        }
        out.push_str("EOF\n");
        out
    }
}

/// Parses the TSPLIB `EUC_2D` subset. The returned instance uses
/// [`Metric::RealEuclidean`]; call [`TspInstance::with_metric`] to change it.
pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let mut name: Option<String> = None;
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut in_coords = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            let mut parts = line.split_whitespace();
            let (Some(_), Some(x), Some(y)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `index x y`, got `{line}`"),
                });
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("non-numeric coordinate `{s}`"),
                })
            };
            coords.push((parse(x)?, parse(y)?));
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            in_coords = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("malformed header line `{line}`"),
            });
        };
        let value = value.trim();
        match key.trim() {
            "NAME" => name = Some(value.to_string()),
            "DIMENSION" => {
                dimension = Some(value.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid DIMENSION `{value}`"),
                })?)
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unsupported EDGE_WEIGHT_TYPE `{value}`"),
                    });
                }
                weight_type = Some(value.to_string());
            }
            "TYPE" | "COMMENT" => {}
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown header key `{other}`"),
                })
            }
        }
    }

    let header_err = |msg: &str| Error::Parse {
        line: last_line,
        msg: msg.to_string(),
    };
    let name = name.ok_or_else(|| header_err("missing NAME"))?;
    let dimension = dimension.ok_or_else(|| header_err("missing DIMENSION"))?;
    weight_type.ok_or_else(|| header_err("missing EDGE_WEIGHT_TYPE"))?;
    if !in_coords {
        return Err(header_err("missing NODE_COORD_SECTION"));
    }
    if dimension == 0 || coords.len() != dimension {
        return Err(header_err(&format!(
            "DIMENSION is {dimension} but {} coordinate rows were read",
            coords.len()
        )));
    }
    TspInstance::new(name, coords, Metric::RealEuclidean)
}

/// Dense symmetric distance matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_coords(coords: &[(f64, f64)], metric: Metric) -> Self {
        let n = coords.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (xi, yi) = coords[i];
                let (xj, yj) = coords[j];
                let mut v = (xi - xj).hypot(yi - yj);
                if metric == Metric::TsplibRounded {
                    v = (v + 0.5).floor();
                }
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    /// Builds a matrix from explicit rows. Rows must be square.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            d.extend(row);
        }
        Ok(Self { n, d })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Copy scaled by `factor` (e.g. instance units to kilometres).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            d: self.d.iter().map(|v| v * factor).collect(),
        }
    }
}
