//! Report and plot serialisation. Floats are written with 12 significant
//! digits in scientific notation so identical runs give identical bytes.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::{CliError, CliResult};

pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with fixed float formatting and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

/// Writes via a temporary file in the target directory and renames it into
/// place. `None` means stdout.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            });
    };
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub const PLOT_HEADER: [&str; 5] = ["omega", "re_given", "im_given", "re_reconstructed", "im_reconstructed"];

/// Plot CSV: one row per column-aligned sample.
pub fn plot_csv(columns: [&[f64]; 5]) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(PLOT_HEADER)?;
    for k in 0..columns[0].len() {
        w.write_record(columns.iter().map(|c| format_float(c[k])))?;
    }
    w.into_inner().map_err(|e| CliError::Io {
        path: "<plot buffer>".into(),
        source: e.into_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(format_float(1.0), "1.00000000000e0");
        assert_eq!(format_float(-2.5e-7), "-2.50000000000e-7");
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: u32,
            c: Option<f64>,
            d: f64,
        }
        let json = to_json(&S {
            a: 0.1,
            b: 3,
            c: None,
            d: f64::NAN,
        })
        .unwrap();
        assert_eq!(
            String::from_utf8(json).unwrap(),
            "{\"a\":1.00000000000e-1,\"b\":3,\"c\":null,\"d\":null}\n"
        );
    }

    #[test]
    fn plot_rows_use_lf() {
        let x = [1.0, 2.0];
        let bytes = plot_csv([&x, &x, &x, &x, &x]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("omega,re_given,im_given,re_reconstructed,im_reconstructed\n"));
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_output(Some(&path), b"one\n").unwrap();
        write_output(Some(&path), b"two\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
