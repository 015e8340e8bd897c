use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n x d` real-valued multivariate time series with labelled columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    columns: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl Series {
    pub fn new(columns: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("series has no columns".into()));
        }
        if columns.len() != labels.len() {
            return Err(Error::Shape(format!("{} columns but {} labels", columns.len(), labels.len())));
        }
        let n = columns[0].len();
        if let Some(c) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::Shape(format!(
                "column '{}' has {} rows, expected {n}",
                labels[c],
                columns[c].len()
            )));
        }
        if n < 2 {
            return Err(Error::TooFewObservations { needed: 2, got: n });
        }
        for (c, col) in columns.iter().enumerate() {
            if let Some(t) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::Io {
                    line: None,
                    message: format!("non-finite value in column '{}' at row {t}", labels[c]),
                });
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Shape(format!("duplicate column label '{l}'")));
            }
        }
        Ok(Series { columns, labels })
    }

    /// Single unlabelled column, labelled `x`.
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Series::new(vec![values], vec!["x".to_string()])
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, index: usize) -> Option<&[f64]> {
        self.columns.get(index).map(Vec::as_slice)
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.labels.iter().position(|l| l == name).and_then(|i| self.column(i))
    }

    /// Resolve a selector that is either a column label or a 0-based index.
    /// Labels take precedence over numeric interpretation.
    pub fn select(&self, selector: &str) -> Result<&[f64]> {
        if let Some(c) = self.column_by_name(selector) {
            return Ok(c);
        }
        selector
            .parse::<usize>()
            .ok()
            .and_then(|i| self.column(i))
            .ok_or_else(|| Error::Config(format!("no column '{selector}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Series::univariate(vec![1.0]).is_err());
        assert!(Series::univariate(vec![1.0, f64::NAN]).is_err());
        assert!(Series::new(vec![vec![1.0, 2.0], vec![1.0]], vec!["a".into(), "b".into()]).is_err());
        assert!(Series::new(vec![vec![1.0, 2.0]; 2], vec!["a".into(), "a".into()]).is_err());
        let s = Series::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]], vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.select("b").unwrap(), &[3.0, 4.0]);
        assert_eq!(s.select("0").unwrap(), &[1.0, 2.0]);
        assert!(s.select("2").is_err());
    }
}
