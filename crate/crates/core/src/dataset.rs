//! CSV ingestion.
//!
//! Lifetimes are read from a `time` column with a `status` of `exact`,
//! `left` or `right`; `interval` rows take their bounds from `time_l` and
//! `time_r`. Covariates are further numeric columns selected by name.

use std::path::{Path, PathBuf};

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::aft::AftDataset;
use crate::error::{Error, Result};
use crate::inference::Observation;

/// A parsed CSV file with its header and per-row line numbers.
#[derive(Debug, Clone)]
pub struct Table {
    path: PathBuf,
    headers: Vec<String>,
    rows: Vec<(usize, StringRecord)>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = ReaderBuilder::new().trim(Trim::All).comment(Some(b'#')).from_reader(file);
        let parse_err = |e: csv::Error| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            }
        };
        let headers: Vec<String> = reader.headers().map_err(parse_err)?.iter().map(String::from).collect();
        if headers.iter().all(String::is_empty) {
            return Err(Error::Input {
                path: path.to_path_buf(),
                message: "file is empty or has no header".into(),
            });
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(parse_err)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            rows.push((line, rec));
        }
        if rows.is_empty() {
            return Err(Error::Input {
                path: path.to_path_buf(),
                message: "no data rows".into(),
            });
        }
        Ok(Self {
            path: path.to_path_buf(),
            headers,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require_column(&self, name: &str) -> Result<usize> {
        self.column(name).ok_or_else(|| Error::Input {
            path: self.path.clone(),
            message: format!("missing column `{name}`"),
        })
    }

    fn error(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message,
        }
    }

    fn number(&self, line: usize, rec: &StringRecord, col: usize) -> Result<f64> {
        let raw = rec.get(col).unwrap_or("");
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(line, format!("`{}` is not a number: `{raw}`", self.headers[col])))
    }

    /// Values of a numeric column.
    pub fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let col = self.require_column(name)?;
        self.rows
            .iter()
            .map(|(line, rec)| self.number(*line, rec, col))
            .collect()
    }

    /// The `id` column, or 1-based row numbers when absent.
    pub fn ids(&self) -> Vec<String> {
        match self.column("id") {
            Some(c) => self
                .rows
                .iter()
                .map(|(_, r)| r.get(c).unwrap_or("").to_string())
                .collect(),
            None => (1..=self.rows.len()).map(|i| i.to_string()).collect(),
        }
    }

    pub fn observations(&self) -> Result<Vec<Observation>> {
        let status = self.require_column("status")?;
        let time = self.column("time");
        let bounds = (self.column("time_l"), self.column("time_r"));
        let mut out = Vec::with_capacity(self.rows.len());
        for (line, rec) in &self.rows {
            let line = *line;
            let token = rec.get(status).unwrap_or("");
            let single = |what: &str| -> Result<f64> {
                let col = time.ok_or_else(|| self.error(line, format!("{what} row needs a `time` column")))?;
                self.number(line, rec, col)
            };
            let obs = match token {
                "exact" => Observation::Exact(single("exact")?),
                "left" => Observation::LeftCensored(single("left")?),
                "right" => Observation::RightCensored(single("right")?),
                "interval" => match bounds {
                    (Some(l), Some(r)) => {
                        Observation::IntervalCensored(self.number(line, rec, l)?, self.number(line, rec, r)?)
                    }
                    _ => return Err(self.error(line, "interval rows need `time_l` and `time_r`".into())),
                },
                other => {
                    return Err(self.error(
                        line,
                        format!("unknown status `{other}`; expected exact, left, right or interval"),
                    ))
                }
            };
            obs.validate().map_err(|e| self.error(line, e.to_string()))?;
            out.push(obs);
        }
        Ok(out)
    }

    /// Covariate rows for the named columns, in the given order.
    pub fn covariates(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| self.require_column(n))
            .collect::<Result<_>>()?;
        self.rows
            .iter()
            .map(|(line, rec)| cols.iter().map(|&c| self.number(*line, rec, c)).collect())
            .collect()
    }

    pub fn aft_dataset(&self, names: &[String], intercept: bool) -> Result<AftDataset> {
        let obs = self.observations()?;
        let covs = self.covariates(names)?;
        AftDataset::new(names.to_vec(), covs, obs, intercept).map_err(|e| Error::Input {
            path: self.path.clone(),
            message: e.to_string(),
        })
    }
}

pub fn read_observations(path: &Path) -> Result<Vec<Observation>> {
    Table::read(path)?.observations()
}

pub fn read_aft_dataset(path: &Path, covariates: &[String], intercept: bool) -> Result<AftDataset> {
    Table::read(path)?.aft_dataset(covariates, intercept)
}
