//! File formats: matrix text files, versioned JSON data files, and
//! JSON-lines step reports.
//!
//! Matrix files are plain text — a `n d` header plus the upper triangle,
//! one row per line at 17 significant digits, which round-trips every
//! double exactly. Spectral and sign files are JSON with a fixed schema
//! tag and a canonical number layout (lowercase scientific, 10
//! significant digits), so writing the same data twice produces the same
//! bytes and files diff cleanly.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::mat::SymmetricMatrix;
use crate::sliding::{SlidingSigns, SlidingSpectralData};
use crate::spectral::{SignIndicators, SpectralData, Spectrum};
use crate::telescopic::StepReport;

/// Schema tag of nested-spectra files.
pub const SPECTRAL_SCHEMA: &str = "spectral-data/v1";
/// Schema tag of projection-sign files.
pub const SIGNS_SCHEMA: &str = "sign-indicators/v1";
/// Schema tag of banded column-sign files.
pub const COLUMN_SIGNS_SCHEMA: &str = "column-signs/v1";
/// Schema tag of sliding-window spectra files.
pub const SLIDING_SCHEMA: &str = "sliding-spectral/v1";
/// Schema tag of sliding-window sign files (minimal scheme).
pub const SLIDING_SIGNS_SCHEMA: &str = "sliding-signs/v1";
/// Schema tag of first-row sign files (redundant scheme).
pub const FIRST_ROW_SCHEMA: &str = "first-row-signs/v1";

/// Canonical number layout used in JSON data files: lowercase scientific
/// with 10 significant digits. Chosen so that re-extracting from a
/// reconstructed matrix rounds back to the identical text.
pub fn canonical_float(x: f64) -> String {
    format!("{x:.9e}")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------
// Matrix text format
// ---------------------------------------------------------------------

/// Renders a matrix as the text format: `n d` header, then row i holding
/// entries (i,i)..(i,n-1) at full double precision.
pub fn write_matrix_string(m: &SymmetricMatrix) -> String {
    let n = m.n();
    let d = m.bandwidth().unwrap_or_else(|| m.detect_bandwidth());
    let mut out = format!("{n} {d}\n");
    for i in 0..n {
        let row: Vec<String> = (i..n).map(|j| format!("{:.16e}", m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the matrix text format. Blank lines and `#` comment lines are
/// skipped; errors carry the 1-based line number.
pub fn parse_matrix(text: &str) -> Result<SymmetricMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (lno, header) = lines
        .next()
        .ok_or_else(|| parse_err("empty matrix file"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse {
            line: lno,
            msg: "header must start with the matrix order".into(),
        })?;
    let d: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse {
            line: lno,
            msg: "header must be `n d`".into(),
        })?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lno,
            msg: "header must be exactly `n d`".into(),
        });
    }
    if n == 0 {
        return Err(Error::Parse {
            line: lno,
            msg: "matrix order must be positive".into(),
        });
    }
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        let (lno, row) = lines.next().ok_or(Error::Parse {
            line: text.lines().count(),
            msg: format!("missing row {} of {}", i + 1, n),
        })?;
        let vals: Vec<&str> = row.split_whitespace().collect();
        if vals.len() != n - i {
            return Err(Error::Parse {
                line: lno,
                msg: format!("row {} needs {} entries, found {}", i + 1, n - i, vals.len()),
            });
        }
        for (k, tok) in vals.iter().enumerate() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("bad number `{tok}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("non-finite entry `{tok}`"),
                });
            }
            m.set(i, i + k, v);
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            msg: "trailing content after last matrix row".into(),
        });
    }
    if d + 1 < n {
        m = m.with_bandwidth(d)?;
    }
    Ok(m)
}

/// Writes the matrix text format to disk.
pub fn save_matrix(m: &SymmetricMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_file(path, &write_matrix_string(m))
}

/// Loads a matrix text file.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<SymmetricMatrix> {
    parse_matrix(&read_file(path)?)
}

// ---------------------------------------------------------------------
// JSON data files
// ---------------------------------------------------------------------

fn float_row(vals: &[f64]) -> String {
    let inner: Vec<String> = vals.iter().map(|v| canonical_float(*v)).collect();
    format!("[{}]", inner.join(", "))
}

fn sign_row(vals: &[i8]) -> String {
    let inner: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn block(rows: &[String]) -> String {
    if rows.is_empty() {
        return "[]".into();
    }
    let body: Vec<String> = rows.iter().map(|r| format!("    {r}")).collect();
    format!("[\n{}\n  ]", body.join(",\n"))
}

/// Renders nested spectra as canonical JSON.
pub fn write_spectral_string(sd: &SpectralData) -> String {
    let rows: Vec<String> = sd.spectra().iter().map(|s| float_row(s.values())).collect();
    format!(
        "{{\n  \"schema\": \"{SPECTRAL_SCHEMA}\",\n  \"spectra\": {}\n}}\n",
        block(&rows)
    )
}

/// Renders projection signs as canonical JSON with a gauge tag.
pub fn write_signs_string(signs: &SignIndicators, gauge: &str) -> String {
    let rows: Vec<String> = signs.per_step().iter().map(|s| sign_row(s)).collect();
    format!(
        "{{\n  \"schema\": \"{SIGNS_SCHEMA}\",\n  \"gauge\": \"{gauge}\",\n  \"steps\": {}\n}}\n",
        block(&rows)
    )
}

/// Renders banded column signs (one per column 2..N) as canonical JSON.
pub fn write_column_signs_string(d: usize, signs: &[i8]) -> String {
    format!(
        "{{\n  \"schema\": \"{COLUMN_SIGNS_SCHEMA}\",\n  \"d\": {d},\n  \"signs\": {}\n}}\n",
        sign_row(signs)
    )
}

/// Renders sliding-window spectra as canonical JSON.
pub fn write_sliding_string(sd: &SlidingSpectralData) -> String {
    let head: Vec<String> = sd
        .head_spectra()
        .iter()
        .map(|s| float_row(s.values()))
        .collect();
    let windows: Vec<String> = sd
        .window_spectra()
        .iter()
        .map(|s| float_row(s.values()))
        .collect();
    format!(
        "{{\n  \"schema\": \"{SLIDING_SCHEMA}\",\n  \"d\": {},\n  \"window_size\": {},\n  \"head\": {},\n  \"windows\": {}\n}}\n",
        sd.d(),
        sd.window_size(),
        block(&head),
        block(&windows)
    )
}

/// Renders minimal-scheme sliding signs as canonical JSON.
pub fn write_sliding_signs_string(signs: &SlidingSigns, gauge: &str) -> String {
    let head: Vec<String> = signs.head.per_step().iter().map(|s| sign_row(s)).collect();
    let windows: Vec<String> = signs.windows.iter().map(|s| sign_row(s)).collect();
    format!(
        "{{\n  \"schema\": \"{SLIDING_SIGNS_SCHEMA}\",\n  \"gauge\": \"{gauge}\",\n  \"head\": {},\n  \"windows\": {}\n}}\n",
        block(&head),
        block(&windows)
    )
}

/// Renders redundant-scheme first-row signs as canonical JSON.
pub fn write_first_row_signs_string(head: &[i8], windows: &[i8]) -> String {
    format!(
        "{{\n  \"schema\": \"{FIRST_ROW_SCHEMA}\",\n  \"head\": {},\n  \"windows\": {}\n}}\n",
        sign_row(head),
        sign_row(windows)
    )
}

/// Serializes step reports as JSON lines (one object per line).
pub fn write_reports_string(reports: &[StepReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization cannot fail"));
        out.push('\n');
    }
    out
}

fn parse_root(text: &str, want: &str) -> Result<serde_json::Map<String, Value>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line().max(1),
        msg: e.to_string(),
    })?;
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("top level must be a JSON object"))?;
    let schema = obj
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing string field `schema`"))?;
    if schema != want {
        return Err(parse_err(format!(
            "expected schema `{want}`, found `{schema}`"
        )));
    }
    Ok(obj.clone())
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(format!("missing field `{name}`")))
}

fn usize_field(obj: &serde_json::Map<String, Value>, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| parse_err(format!("field `{name}` must be a non-negative integer")))
}

fn f64_array(v: &Value, what: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .filter(|f| f.is_finite())
                .ok_or_else(|| parse_err(format!("{what} must hold finite numbers")))
        })
        .collect()
}

fn sign_array(v: &Value, what: &str) -> Result<Vec<i8>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?;
    arr.iter()
        .map(|x| match x.as_i64() {
            Some(1) => Ok(1i8),
            Some(-1) => Ok(-1i8),
            _ => Err(parse_err(format!("{what} must hold only 1 or -1"))),
        })
        .collect()
}

fn nested_f64(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of arrays")))?;
    arr.iter().map(|row| f64_array(row, what)).collect()
}

fn nested_signs(v: &Value, what: &str) -> Result<Vec<Vec<i8>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of arrays")))?;
    arr.iter().map(|row| sign_array(row, what)).collect()
}

fn spectra_from(rows: Vec<Vec<f64>>) -> Result<Vec<Spectrum>> {
    rows.into_iter().map(Spectrum::new).collect()
}

/// Parses a nested-spectra JSON file.
pub fn parse_spectral(text: &str) -> Result<SpectralData> {
    let obj = parse_root(text, SPECTRAL_SCHEMA)?;
    let rows = nested_f64(field(&obj, "spectra")?, "`spectra`")?;
    SpectralData::new(spectra_from(rows)?)
}

/// Parses a projection-sign JSON file; returns the signs and gauge tag.
pub fn parse_signs(text: &str) -> Result<(SignIndicators, String)> {
    let obj = parse_root(text, SIGNS_SCHEMA)?;
    let gauge = field(&obj, "gauge")?
        .as_str()
        .ok_or_else(|| parse_err("field `gauge` must be a string"))?
        .to_string();
    let steps = nested_signs(field(&obj, "steps")?, "`steps`")?;
    Ok((SignIndicators::new(steps)?, gauge))
}

/// Parses a banded column-sign JSON file; returns (d, signs).
pub fn parse_column_signs(text: &str) -> Result<(usize, Vec<i8>)> {
    let obj = parse_root(text, COLUMN_SIGNS_SCHEMA)?;
    let d = usize_field(&obj, "d")?;
    if d == 0 {
        return Err(parse_err("bandwidth `d` must be at least 1"));
    }
    let signs = sign_array(field(&obj, "signs")?, "`signs`")?;
    Ok((d, signs))
}

/// Parses a sliding-window spectra JSON file.
pub fn parse_sliding(text: &str) -> Result<SlidingSpectralData> {
    let obj = parse_root(text, SLIDING_SCHEMA)?;
    let d = usize_field(&obj, "d")?;
    let ws = usize_field(&obj, "window_size")?;
    let head = spectra_from(nested_f64(field(&obj, "head")?, "`head`")?)?;
    let windows = spectra_from(nested_f64(field(&obj, "windows")?, "`windows`")?)?;
    if windows.first().map(Spectrum::n) != Some(ws) {
        return Err(parse_err(format!(
            "window entries must match declared window_size {ws}"
        )));
    }
    SlidingSpectralData::new(d, head, windows)
}

/// Parses a minimal-scheme sliding-sign JSON file; returns signs + gauge.
pub fn parse_sliding_signs(text: &str) -> Result<(SlidingSigns, String)> {
    let obj = parse_root(text, SLIDING_SIGNS_SCHEMA)?;
    let gauge = field(&obj, "gauge")?
        .as_str()
        .ok_or_else(|| parse_err("field `gauge` must be a string"))?
        .to_string();
    let head = SignIndicators::new(nested_signs(field(&obj, "head")?, "`head`")?)?;
    let windows = nested_signs(field(&obj, "windows")?, "`windows`")?;
    Ok((SlidingSigns { head, windows }, gauge))
}

/// Parses a redundant-scheme first-row sign JSON file; returns
/// (head signs, window signs).
pub fn parse_first_row_signs(text: &str) -> Result<(Vec<i8>, Vec<i8>)> {
    let obj = parse_root(text, FIRST_ROW_SCHEMA)?;
    let head = sign_array(field(&obj, "head")?, "`head`")?;
    let windows = sign_array(field(&obj, "windows")?, "`windows`")?;
    Ok((head, windows))
}

// ---------------------------------------------------------------------
// Filesystem helpers
// ---------------------------------------------------------------------

/// Reads a whole file, mapping failures onto [`Error::Io`].
pub fn read_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes a whole file, mapping failures onto [`Error::Io`].
pub fn write_file(path: impl AsRef<Path>, content: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, content).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::Gauge;
    use crate::oracle::{gen_random_banded, InstanceSpec};
    use crate::sliding::{extract_minimal_signs, extract_sliding};
    use crate::spectral::{extract_sign_indicators, extract_spectral_data};
    use crate::telescopic::StepReport;

    fn sample() -> SymmetricMatrix {
        gen_random_banded(&InstanceSpec::new(6, 2, 9)).unwrap()
    }

    #[test]
    fn matrix_text_round_trips_every_bit() {
        let m = sample();
        let text = write_matrix_string(&m);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(back.n(), 6);
        assert_eq!(back.bandwidth(), Some(2));
        assert_eq!(m.max_abs_diff(&back), 0.0);
        assert_eq!(write_matrix_string(&back), text);
    }

    #[test]
    fn matrix_parse_errors_carry_line_numbers() {
        let bad = "3 2\n1.0 2.0 3.0\n4.0 oops\n6.0\n";
        match parse_matrix(bad) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("oops"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        let short = "2 1\n1.0 0.5\n";
        assert!(matches!(parse_matrix(short), Err(Error::Parse { .. })));
    }

    #[test]
    fn matrix_file_rejects_out_of_band_entries() {
        let lies = "3 1\n1.0 0.5 0.7\n2.0 0.1\n3.0\n";
        assert!(parse_matrix(lies).is_err());
    }

    #[test]
    fn spectral_json_is_canonical() {
        let sd = extract_spectral_data(&sample()).unwrap();
        let text = write_spectral_string(&sd);
        let back = parse_spectral(&text).unwrap();
        assert_eq!(back.order(), 6);
        assert_eq!(write_spectral_string(&back), text);
        for k in 1..=6 {
            for (a, b) in sd.minor(k).values().iter().zip(back.minor(k).values()) {
                assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sign_files_round_trip() {
        let m = sample();
        let signs = extract_sign_indicators(&m, Gauge::LastEntryPositive).unwrap();
        let text = write_signs_string(&signs, "last-entry-positive");
        let (back, gauge) = parse_signs(&text).unwrap();
        assert_eq!(gauge, "last-entry-positive");
        assert_eq!(back.per_step(), signs.per_step());

        let col = write_column_signs_string(2, &[1, -1, 1, 1, -1]);
        let (d, s) = parse_column_signs(&col).unwrap();
        assert_eq!((d, s.len()), (2, 5));

        let fr = write_first_row_signs_string(&[1, -1], &[1, 1, -1]);
        let (h, w) = parse_first_row_signs(&fr).unwrap();
        assert_eq!((h.len(), w.len()), (2, 3));
    }

    #[test]
    fn sliding_files_round_trip() {
        let m = sample();
        let sd = extract_sliding(&m, 2, 3).unwrap();
        let text = write_sliding_string(&sd);
        let back = parse_sliding(&text).unwrap();
        assert_eq!(back.order(), 6);
        assert_eq!(back.window_size(), 3);
        assert_eq!(write_sliding_string(&back), text);

        let signs = extract_minimal_signs(&m, 2).unwrap();
        let stext = write_sliding_signs_string(&signs, "last-entry-positive");
        let (sback, _) = parse_sliding_signs(&stext).unwrap();
        assert_eq!(sback.windows, signs.windows);
        assert_eq!(sback.head.per_step(), signs.head.per_step());
    }

    #[test]
    fn wrong_schema_tag_is_a_parse_error() {
        let sd = extract_spectral_data(&sample()).unwrap();
        let text = write_spectral_string(&sd).replace(SPECTRAL_SCHEMA, "spectral-data/v9");
        assert!(matches!(parse_spectral(&text), Err(Error::Parse { .. })));
        let garbled = "{ not json";
        assert!(matches!(parse_spectral(garbled), Err(Error::Parse { .. })));
    }

    #[test]
    fn reports_serialize_one_object_per_line() {
        let reports = vec![StepReport::new("base", 1), StepReport::new("regular", 2)];
        let text = write_reports_string(&reports);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        for line in lines {
            let v: Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["schema"], "step-report/v1");
        }
    }
}
