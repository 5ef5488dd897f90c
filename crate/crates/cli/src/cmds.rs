//! Subcommand bodies for extract, reconstruct, verify, and bench-alpha.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use matrixhear_core::banded::{alpha_condition, penta_lines_step, reconstruct_banded_with_report, StepMethod};
use matrixhear_core::eig::{eig_sym, Gauge};
use matrixhear_core::io;
use matrixhear_core::mat::SymmetricMatrix;
use matrixhear_core::oracle::{gen_random_banded, InstanceSpec};
use matrixhear_core::sliding::{
    extract_head_first_row_signs, extract_minimal_signs, extract_sliding,
    extract_window_first_row_signs, reconstruct_sliding_minimal, reconstruct_sliding_optimal,
    HeadSigns,
};
use matrixhear_core::spectral::{
    eig_minor_gauged, extract_sign_indicators, extract_spectral_data, sign_indicator,
};
use matrixhear_core::telescopic::{reconstruct_full, reconstruct_full_with_report, StepReport};
use matrixhear_core::{Error, Result};

use crate::{BenchArgs, ExtractArgs, Method, ReconstructArgs, VerifyArgs, GAUGE_TAG};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn emit(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => io::write_file(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// One sign per column c = 2..n: the sign of the outermost entry a
/// bandwidth-d matrix keeps in that column, A_{max(1,c-d),c} (1-based).
fn column_signs_of(m: &SymmetricMatrix, d: usize) -> Vec<i8> {
    (2..=m.n())
        .map(|c| sign_indicator(m.get(c.saturating_sub(d).max(1) - 1, c - 1)))
        .collect()
}

pub fn extract(args: &ExtractArgs) -> Result<u8> {
    if args.gauge != GAUGE_TAG {
        return Err(invalid(format!(
            "unsupported gauge '{}'; the only documented gauge is '{GAUGE_TAG}'",
            args.gauge
        )));
    }
    let m = io::load_matrix(&args.matrix)?;
    log::info!("read {0}x{0} matrix from {1}", m.n(), args.matrix.display());

    if let Some(w) = args.window {
        if w < 2 {
            return Err(invalid("--window must be at least 2"));
        }
        if args.column_signs.is_some() {
            return Err(invalid("--column-signs applies to the full scheme, not --window"));
        }
        let d = args.d.unwrap_or(w - 1);
        let sd = extract_sliding(&m, d, w)?;
        log::info!("sliding scheme d={d} w={w}: {} windows", sd.window_spectra().len());
        emit(&args.output, &io::write_sliding_string(&sd))?;
        if let Some(p) = &args.signs {
            let signs = extract_minimal_signs(&m, d)?;
            io::write_file(p, &io::write_sliding_signs_string(&signs, GAUGE_TAG))?;
        }
        if let Some(p) = &args.first_row {
            let head = extract_head_first_row_signs(&m, d);
            let windows = extract_window_first_row_signs(&m, d);
            io::write_file(p, &io::write_first_row_signs_string(&head, &windows))?;
        }
        return Ok(0);
    }

    let sd = extract_spectral_data(&m)?;
    log::info!("extracted {} nested spectra", sd.order());
    emit(&args.output, &io::write_spectral_string(&sd))?;
    if let Some(p) = &args.signs {
        let signs = extract_sign_indicators(&m, Gauge::LastEntryPositive)?;
        io::write_file(p, &io::write_signs_string(&signs, GAUGE_TAG))?;
    }
    if let Some(p) = &args.column_signs {
        let d = args.d.ok_or_else(|| invalid("--column-signs needs --d"))?;
        if d == 0 {
            return Err(invalid("--d must be at least 1"));
        }
        io::write_file(p, &io::write_column_signs_string(d, &column_signs_of(&m, d)))?;
    }
    if let Some(p) = &args.first_row {
        let d = args.d.ok_or_else(|| invalid("--first-row needs --d"))?;
        if d == 0 || m.n() < d + 2 {
            return Err(invalid("--first-row needs 1 <= d <= order - 2"));
        }
        let head = extract_head_first_row_signs(&m, d);
        let windows = extract_window_first_row_signs(&m, d);
        io::write_file(p, &io::write_first_row_signs_string(&head, &windows))?;
    }
    Ok(0)
}

fn peek_schema(text: &str) -> Result<String> {
    let root: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line().max(1),
        msg: e.to_string(),
    })?;
    root.get("schema")
        .and_then(|v| v.as_str())
        .map(str::to_owned)
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing schema field".into(),
        })
}

fn check_gauge(gauge: &str) -> Result<()> {
    if gauge == GAUGE_TAG {
        Ok(())
    } else {
        Err(invalid(format!(
            "sign file is tied to gauge '{gauge}', expected '{GAUGE_TAG}'"
        )))
    }
}

fn write_reports(path: &Option<PathBuf>, reports: &[StepReport]) -> Result<()> {
    match path {
        Some(p) => io::write_file(p, &io::write_reports_string(reports)),
        None => Ok(()),
    }
}

/// Resolves the bandwidth between an explicit flag and the value recorded
/// in a sign/data file; a disagreement is a hard error, not a guess.
fn resolve_d(flag: Option<usize>, from_file: usize) -> Result<usize> {
    match flag {
        Some(d) if d != from_file => Err(invalid(format!(
            "--d {d} conflicts with bandwidth {from_file} recorded in the sign file"
        ))),
        _ => Ok(from_file),
    }
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<u8> {
    let text = io::read_file(&args.input)?;
    let schema = peek_schema(&text)?;
    let m = match schema.as_str() {
        io::SPECTRAL_SCHEMA => reconstruct_from_spectral(args, &text)?,
        io::SLIDING_SCHEMA => reconstruct_from_sliding(args, &text)?,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("input schema '{other}' is not reconstructable data"),
            })
        }
    };
    log::info!("reconstructed {0}x{0} matrix", m.n());
    emit(&args.output, &io::write_matrix_string(&m))?;
    Ok(0)
}

fn reconstruct_from_spectral(args: &ReconstructArgs, text: &str) -> Result<SymmetricMatrix> {
    let sd = io::parse_spectral(text)?;
    let method = args.method.unwrap_or(Method::Telescopic);
    match method {
        Method::Telescopic => {
            let path = args
                .signs
                .as_ref()
                .ok_or_else(|| invalid("--method telescopic needs --signs"))?;
            let (signs, gauge) = io::parse_signs(&io::read_file(path)?)?;
            check_gauge(&gauge)?;
            let (m, reports) = reconstruct_full_with_report(&sd, &signs)?;
            write_reports(&args.report, &reports)?;
            Ok(m)
        }
        Method::Banded | Method::PentaLines | Method::PentaConics => {
            let path = args.column_signs.as_ref().ok_or_else(|| {
                invalid("banded and pentadiagonal engines need --column-signs")
            })?;
            let (file_d, signs) = io::parse_column_signs(&io::read_file(path)?)?;
            let d = resolve_d(args.d, file_d)?;
            let engine = match method {
                Method::Banded => StepMethod::Banded,
                Method::PentaLines => StepMethod::PentaLines,
                _ => StepMethod::PentaConics,
            };
            let (mut finals, reports) =
                reconstruct_banded_with_report(&sd, d, &signs, args.eps, engine)?;
            write_reports(&args.report, &reports)?;
            match finals.len() {
                1 => Ok(finals.pop().expect("length checked")),
                k => Err(Error::Ambiguous { branches: k }),
            }
        }
        Method::SlidingMinimal | Method::SlidingOptimal => Err(invalid(
            "sliding engines need a sliding-spectral input file (extract with --window)",
        )),
    }
}

fn reconstruct_from_sliding(args: &ReconstructArgs, text: &str) -> Result<SymmetricMatrix> {
    let sd = io::parse_sliding(text)?;
    if args.report.is_some() {
        return Err(invalid(
            "step reports are only produced by the telescopic and banded chains",
        ));
    }
    let d = resolve_d(args.d, sd.d())?;
    let method = args.method.unwrap_or(if sd.window_size() == d + 1 {
        Method::SlidingMinimal
    } else {
        Method::SlidingOptimal
    });
    match method {
        Method::SlidingMinimal => {
            let path = args
                .signs
                .as_ref()
                .ok_or_else(|| invalid("--method sliding-minimal needs --signs"))?;
            let (signs, gauge) = io::parse_sliding_signs(&io::read_file(path)?)?;
            check_gauge(&gauge)?;
            reconstruct_sliding_minimal(&sd, &signs)
        }
        Method::SlidingOptimal => {
            let path = args
                .first_row_signs
                .as_ref()
                .ok_or_else(|| invalid("--method sliding-optimal needs --first-row-signs"))?;
            let (head, windows) = io::parse_first_row_signs(&io::read_file(path)?)?;
            let head = match &args.signs {
                Some(sp) => {
                    let (signs, gauge) = io::parse_sliding_signs(&io::read_file(sp)?)?;
                    check_gauge(&gauge)?;
                    HeadSigns::Projection(signs.head)
                }
                None => HeadSigns::FirstRow(head),
            };
            reconstruct_sliding_optimal(&sd, &windows, &head)
        }
        _ => Err(invalid(
            "full-matrix engines need a spectral-data input file, not sliding data",
        )),
    }
}

fn round_trip_error(path: &Path) -> Result<f64> {
    let m = io::load_matrix(path)?;
    let sd = extract_spectral_data(&m)?;
    let signs = extract_sign_indicators(&m, Gauge::LastEntryPositive)?;
    let rebuilt = reconstruct_full(&sd, &signs)?;
    Ok(m.max_abs_diff(&rebuilt))
}

fn verify_one(path: &Path, tol: f64) -> (bool, String) {
    match round_trip_error(path) {
        Ok(err) if err <= tol => (
            true,
            format!("PASS {} (max entry error {err:.3e})", path.display()),
        ),
        Ok(err) => (
            false,
            format!(
                "FAIL {} (max entry error {err:.3e} exceeds {tol:.3e})",
                path.display()
            ),
        ),
        Err(e) => (false, format!("FAIL {} ({e})", path.display())),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let jobs = args.jobs.max(1).min(args.files.len());
    log::info!("verifying {} files with {jobs} worker(s)", args.files.len());
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, bool, String)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= args.files.len() {
                    break;
                }
                let (ok, line) = verify_one(&args.files[i], args.tol);
                results.lock().expect("verify worker poisoned").push((i, ok, line));
            });
        }
    });
    let mut results = results.into_inner().expect("verify worker poisoned");
    results.sort_by_key(|(i, _, _)| *i);
    let mut failures = 0usize;
    for (_, ok, line) in &results {
        println!("{line}");
        if !ok {
            failures += 1;
        }
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

pub fn bench_alpha(args: &BenchArgs) -> Result<u8> {
    if args.n < 4 {
        return Err(invalid("--n must be at least 4 so the chain has constrained steps"));
    }
    let mut steps = 0usize;
    let mut alpha_hits = 0usize;
    let mut non_pairs = 0usize;
    for i in 0..args.count {
        let spec = InstanceSpec::new(args.n, 2, args.seed.wrapping_add(i as u64));
        let m = gen_random_banded(&spec)?;
        for k in 3..args.n {
            let eig = eig_minor_gauged(&m.leading_minor(k))?;
            let sigma = eig_sym(&m.leading_minor(k + 1), Gauge::Custom)?.spectrum();
            if alpha_condition(&eig, args.tol).is_some() {
                alpha_hits += 1;
            }
            if penta_lines_step(&eig, &sigma)?.len() != 2 {
                non_pairs += 1;
            }
            steps += 1;
        }
    }
    println!("instances: {}", args.count);
    println!("constrained steps: {steps}");
    println!("four-candidate degeneracies: {alpha_hits}");
    println!("steps with candidate count != 2: {non_pairs}");
    Ok(0)
}
