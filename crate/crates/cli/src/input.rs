//! Reads a measured spectrum from CSV.

use std::path::Path;

use crate::error::{CliError, CliResult};

pub const MIN_ROWS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSpectrum {
    pub omega: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Parses `path`: header row, `#` comment lines, columns picked by name.
/// Frequencies must be finite and strictly increasing.
pub fn read_spectrum(path: &Path, columns: &[String; 3]) -> CliResult<MeasuredSpectrum> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spectrum(&bytes, path, columns)
}

pub(crate) fn parse_spectrum(bytes: &[u8], path: &Path, columns: &[String; 3]) -> CliResult<MeasuredSpectrum> {
    let input_err = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    let parse_err = |line: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(bytes);
    let headers = reader.headers().map_err(|e| input_err(e.to_string()))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(input_err("empty file or missing header row".into()));
    }
    let mut index = [0usize; 3];
    for (slot, name) in index.iter_mut().zip(columns) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| input_err(format!("no column named `{name}` in header")))?;
    }

    let mut out = MeasuredSpectrum {
        omega: vec![],
        re: vec![],
        im: vec![],
    };
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut vals = [0.0; 3];
        for (v, (&i, name)) in vals.iter_mut().zip(index.iter().zip(columns)) {
            let field = record
                .get(i)
                .ok_or_else(|| parse_err(line, format!("missing field `{name}`")))?;
            *v = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(line, format!("`{field}` in column `{name}` is not a finite number")))?;
        }
        if let Some(&last) = out.omega.last() {
            if vals[0] <= last {
                return Err(parse_err(line, format!("frequency {} does not exceed the previous {last}", vals[0])));
            }
        }
        out.omega.push(vals[0]);
        out.re.push(vals[1]);
        out.im.push(vals[2]);
    }
    if out.omega.len() < MIN_ROWS {
        return Err(input_err(format!(
            "{} data rows; at least {MIN_ROWS} are required",
            out.omega.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols() -> [String; 3] {
        ["omega", "re", "im"].map(String::from)
    }

    fn table(rows: usize) -> String {
        let mut s = String::from("# comment\nomega,re,im\n");
        for k in 0..rows {
            s.push_str(&format!("{k},{},0.5\n", k * 2));
        }
        s
    }

    #[test]
    fn reads_well_formed_table() {
        let m = parse_spectrum(table(70).as_bytes(), Path::new("x.csv"), &cols()).unwrap();
        assert_eq!(m.omega.len(), 70);
        assert_eq!(m.re[3], 6.0);
        assert_eq!(m.im[69], 0.5);
    }

    #[test]
    fn column_mapping_reorders() {
        let text = table(70).replace("omega,re,im", "w,a,b");
        let cols = ["w", "b", "a"].map(String::from);
        let m = parse_spectrum(text.as_bytes(), Path::new("x.csv"), &cols).unwrap();
        assert_eq!(m.re[3], 0.5);
        assert_eq!(m.im[3], 6.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = table(70).replace("\n5,10,0.5\n", "\n5,ten,0.5\n");
        match parse_spectrum(text.as_bytes(), Path::new("x.csv"), &cols()) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
        let text = table(70).replace("\n5,10,0.5\n", "\n4,10,0.5\n");
        assert!(matches!(
            parse_spectrum(text.as_bytes(), Path::new("x.csv"), &cols()),
            Err(CliError::Parse { line: 8, .. })
        ));
    }

    #[test]
    fn rejects_short_empty_and_unmapped() {
        let p = Path::new("x.csv");
        assert!(parse_spectrum(table(63).as_bytes(), p, &cols()).is_err());
        assert!(parse_spectrum(b"", p, &cols()).is_err());
        let cols = ["omega", "re", "eps2"].map(String::from);
        assert!(parse_spectrum(table(70).as_bytes(), p, &cols).is_err());
    }
}
