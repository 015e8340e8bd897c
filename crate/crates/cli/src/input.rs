use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use dcorr_core::{Error, Result, Series};

/// Reads a comma-separated file (or stdin for `-`) into a [`Series`].
///
/// The first row is a header when any of its fields fails to parse as a
/// number. Columns without a header are labelled by their 0-based index.
pub fn read_series(path: &Path) -> Result<Series> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)
    } else {
        File::open(path).and_then(|mut f| f.read_to_string(&mut text))
    };
    read.map_err(|e| Error::Io { line: None, message: format!("{}: {e}", path.display()) })?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut labels: Option<Vec<String>> = None;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Io {
            line: e.position().map(|p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<Option<f64>> = record.iter().map(|f| f.parse::<f64>().ok()).collect();
        if i == 0 && parsed.iter().any(Option::is_none) {
            labels = Some(record.iter().map(str::to_string).collect());
            columns = vec![Vec::new(); record.len()];
            continue;
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); record.len()];
        }
        if record.len() != columns.len() {
            return Err(Error::Io {
                line,
                message: format!("expected {} fields, found {}", columns.len(), record.len()),
            });
        }
        for ((col, value), field) in columns.iter_mut().zip(parsed).zip(record.iter()) {
            match value {
                Some(v) if v.is_finite() => col.push(v),
                _ => return Err(Error::Io { line, message: format!("'{field}' is not a finite number") }),
            }
        }
    }
    if columns.is_empty() {
        return Err(Error::Io { line: None, message: "no data rows".into() });
    }
    let labels = labels.unwrap_or_else(|| (0..columns.len()).map(|c| c.to_string()).collect());
    Series::new(columns, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_detected() {
        let s = parse_csv("a,b\n1,2\n3,4\n").unwrap();
        assert_eq!(s.labels(), ["a", "b"]);
        assert_eq!(s.select("b").unwrap(), [2.0, 4.0]);
        assert_eq!(s.select("0").unwrap(), [1.0, 3.0]);
    }

    #[test]
    fn headerless_columns_are_indexed() {
        let s = parse_csv("1.5\n-2e-3\n 7 \n").unwrap();
        assert_eq!(s.labels(), ["0"]);
        assert_eq!(s.select("0").unwrap(), [1.5, -2e-3, 7.0]);
    }

    #[test]
    fn bad_field_reports_line() {
        let err = parse_csv("x\n1\n2\nabc\n").unwrap_err();
        assert_eq!(err, Error::Io { line: Some(4), message: "'abc' is not a finite number".into() });
        assert!(matches!(parse_csv("1,2\n3\n"), Err(Error::Io { line: Some(2), .. })));
        assert!(matches!(parse_csv("1\nnan\n"), Err(Error::Io { line: Some(2), .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse_csv(""), Err(Error::Io { .. })));
        assert!(matches!(parse_csv("x\n"), Err(Error::TooFewObservations { got: 0, .. })));
    }
}
