use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Deterministic CSV emitter: header row, UTF-8, '.' decimal separator,
/// floats at nine significant digits so reruns diff byte-identically.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "{}", header.join(","));
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn float(v: f64) -> String {
        if v == f64::NEG_INFINITY {
            "-inf".to_string()
        } else if v == f64::INFINITY {
            "inf".to_string()
        } else if v.is_nan() {
            "nan".to_string()
        } else {
            format!("{v:.8e}")
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width mismatch");
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, self.buf.as_bytes())
    }

    pub fn bytes(&self) -> &[u8] {
        self.buf.as_bytes()
    }
}
