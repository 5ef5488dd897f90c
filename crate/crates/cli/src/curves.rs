//! Plot-data emission for one pentadiagonal growth step: the new column's
//! tail (x, y) lies on a circle, on one line of each eigenvector pair, and
//! on two conic sections. This module samples all of those curves plus the
//! admissible candidate points into a CSV with columns curve_id,t,x,y.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use matrixhear_core::banded::{penta_lines_step, reconstruct_banded, ConicForm};
use matrixhear_core::cauchy::xi_squared;
use matrixhear_core::eig::{eig_sym, Gauge};
use matrixhear_core::io;
use matrixhear_core::mat::SymmetricMatrix;
use matrixhear_core::spectral::{eig_minor_gauged, Spectrum, StepScalars, ZERO_SPECTRUM_TOL};
use matrixhear_core::{Error, Result};

use crate::cmds::emit;
use crate::TraceArgs;

/// Samples per closed curve; open curves use 64 per run.
const CLOSED_SAMPLES: usize = 256;
const OPEN_SAMPLES: usize = 64;
/// Hyperbolic-angle range for hyperbola branches.
const HYPERBOLIC_RANGE: f64 = 2.5;

fn row(out: &mut String, id: &str, t: f64, x: f64, y: f64) {
    let _ = writeln!(out, "{id},{t:.16e},{x:.16e},{y:.16e}");
}

/// Unit eigenvectors and eigenvalues of the 2x2 symmetric form
/// [[a, b], [b, c]], eigenvalues descending.
fn sym2_eig(a: f64, b: f64, c: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let mid = 0.5 * (a + c);
    let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l1, l2) = (mid + disc, mid - disc);
    // Two algebraically equivalent eigenvector forms; keep the larger one.
    let cand1 = [b, l1 - a];
    let cand2 = [l1 - c, b];
    let pick = if cand1[0].hypot(cand1[1]) >= cand2[0].hypot(cand2[1]) {
        cand1
    } else {
        cand2
    };
    let norm = pick[0].hypot(pick[1]);
    let v1 = if norm > 0.0 {
        [pick[0] / norm, pick[1] / norm]
    } else {
        [1.0, 0.0] // isotropic form: any direction is an eigenvector
    };
    ([l1, l2], [v1, [-v1[1], v1[0]]])
}

/// Samples the level set `form = rhs` of one conic. The caller's steps put
/// the candidate points on this set, so it has real points in every case
/// that matters; empty degenerate classes are skipped with a warning.
fn emit_conic(out: &mut String, id: &str, form: &ConicForm, radius: f64) {
    let ([l1, l2], [v1, v2]) = sym2_eig(form.a, form.b, form.c);
    let scale = l1.abs().max(l2.abs());
    let tiny = 1e-12 * scale.max(1.0);
    let point = |xi: f64, eta: f64| {
        (
            xi * v1[0] + eta * v2[0],
            xi * v1[1] + eta * v2[1],
        )
    };

    if scale <= 1e-300 {
        log::warn!("{id}: quadratic form vanishes; nothing to emit");
        return;
    }
    if l1.abs() <= tiny || l2.abs() <= tiny {
        // Rank-one form: lambda xi^2 = rhs along the nonzero direction.
        let (l, va, vb) = if l1.abs() > l2.abs() {
            (l1, v1, v2)
        } else {
            (l2, v2, v1)
        };
        if form.rhs / l < 0.0 {
            log::warn!("{id}: rank-one form has no real points");
            return;
        }
        let xi = (form.rhs / l).sqrt();
        for s in [1.0f64, -1.0] {
            for k in 0..OPEN_SAMPLES {
                let t = -1.5 * radius + 3.0 * radius * k as f64 / (OPEN_SAMPLES - 1) as f64;
                let (x, y) = (
                    s * xi * va[0] + t * vb[0],
                    s * xi * va[1] + t * vb[1],
                );
                row(out, id, t, x, y);
            }
        }
        return;
    }
    if l1 * l2 > 0.0 {
        if form.rhs / l1 < 0.0 {
            log::warn!("{id}: definite form with opposite-sign level; no real points");
            return;
        }
        let (ax1, ax2) = ((form.rhs / l1).sqrt(), (form.rhs / l2).sqrt());
        for k in 0..CLOSED_SAMPLES {
            let t = TAU * k as f64 / CLOSED_SAMPLES as f64;
            let (x, y) = point(ax1 * t.cos(), ax2 * t.sin());
            row(out, id, t, x, y);
        }
        return;
    }
    // Indefinite form: a hyperbola whose transverse axis follows the sign
    // of rhs (rhs ~ 0 degenerates to the pair of asymptote lines).
    if form.rhs.abs() <= tiny * radius * radius {
        let slope = (-l2 / l1).sqrt();
        for (dir, s) in [([slope, 1.0], 1.0f64), ([slope, -1.0], -1.0)] {
            let norm = dir[0].hypot(dir[1]);
            for k in 0..OPEN_SAMPLES {
                let t = -1.5 * radius + 3.0 * radius * k as f64 / (OPEN_SAMPLES - 1) as f64;
                let (x, y) = point(s * t * dir[0] / norm, t * dir[1] / norm);
                row(out, id, t, x, y);
            }
        }
        return;
    }
    // Orient so the positive eigenvalue carries the cosh coordinate when
    // rhs > 0, the negative one when rhs < 0.
    let (lp, ln_, vp, vn) = if l1 > 0.0 {
        (l1, l2, v1, v2)
    } else {
        (l2, l1, v2, v1)
    };
    let (amaj, amin, vmaj, vmin) = if form.rhs > 0.0 {
        ((form.rhs / lp).sqrt(), (-form.rhs / ln_).sqrt(), vp, vn)
    } else {
        ((form.rhs / ln_).sqrt(), (-form.rhs / lp).sqrt(), vn, vp)
    };
    for s in [1.0f64, -1.0] {
        for k in 0..OPEN_SAMPLES {
            let t = -HYPERBOLIC_RANGE
                + 2.0 * HYPERBOLIC_RANGE * k as f64 / (OPEN_SAMPLES - 1) as f64;
            let (c, sh) = (s * amaj * t.cosh(), amin * t.sinh());
            let (x, y) = (c * vmaj[0] + sh * vmin[0], c * vmaj[1] + sh * vmin[1]);
            row(out, id, t, x, y);
        }
    }
}

/// Builds the two conic forms of the step from the minor's entries,
/// shifting the whole problem away from a zero eigenvalue first (the tail
/// solutions are invariant under that shift).
fn conic_forms(
    minor: &SymmetricMatrix,
    sigma_n: &Spectrum,
    sigma_np1: &Spectrum,
) -> Result<(ConicForm, ConicForm)> {
    let n = minor.n();
    let min_abs = sigma_n
        .values()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let (work, scal) = if min_abs <= ZERO_SPECTRUM_TOL {
        let c = 1.0 - sigma_n.get(0);
        let mut shifted = minor.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) + c);
        }
        let sn = Spectrum::new(sigma_n.values().iter().map(|v| v + c).collect())?;
        let snp1 = Spectrum::new(sigma_np1.values().iter().map(|v| v + c).collect())?;
        (shifted, StepScalars::new(&sn, &snp1)?)
    } else {
        (minor.clone(), StepScalars::new(sigma_n, sigma_np1)?)
    };

    let h = scal.h();
    let r2 = scal.r2();
    let first = ConicForm {
        a: work.get(n - 2, n - 2) + h,
        b: work.get(n - 2, n - 1),
        c: work.get(n - 1, n - 1) + h,
        rhs: scal.cubic_rho() + h * r2,
    };
    let mut e1 = vec![0.0; n];
    e1[n - 2] = 1.0;
    let mut e2 = vec![0.0; n];
    e2[n - 1] = 1.0;
    let z1 = work.solve(&e1)?;
    let z2 = work.solve(&e2)?;
    let inv_rho = scal.inv_rho().ok_or(Error::ZeroSpectrum { min_abs })?;
    let second = ConicForm {
        a: z1[n - 2],
        b: 0.5 * (z1[n - 1] + z2[n - 2]),
        c: z2[n - 1],
        rhs: inv_rho,
    };
    Ok((first, second))
}

pub fn trace(args: &TraceArgs) -> Result<u8> {
    let text = io::read_file(&args.input)?;
    let m = if text.trim_start().starts_with('{') {
        // Spectral-data input: rebuild the bandwidth-2 representative with
        // all-plus column signs (each column's sign freedom is antipodal,
        // so this convention always picks one admissible completion).
        let sd = io::parse_spectral(&text)?;
        reconstruct_banded(&sd, 2, &vec![1i8; sd.order().saturating_sub(1)], None)?
    } else {
        io::parse_matrix(&text)?
    };
    let d_eff = m.bandwidth().unwrap_or_else(|| m.detect_bandwidth());
    if d_eff > 2 {
        return Err(Error::NotPentaStep { d: d_eff });
    }
    let order = m.n();
    if args.step < 2 || args.step + 1 > order {
        return Err(Error::InvalidInput(format!(
            "--step must lie in 2..={} for a {order}x{order} matrix",
            order - 1
        )));
    }

    let n = args.step;
    let minor = m.leading_minor(n);
    let eig = eig_minor_gauged(&minor)?;
    let sigma_n = eig.spectrum();
    let sigma_np1 = eig_sym(&m.leading_minor(n + 1), Gauge::Custom)?.spectrum();
    let scalars = StepScalars::new(&sigma_n, &sigma_np1)?;
    let r2 = scalars.r2();
    if !(r2 > 0.0) {
        return Err(Error::Inconsistent(
            "zero new-column norm leaves no curves to trace".into(),
        ));
    }
    let radius = r2.sqrt();
    let xi: Vec<f64> = xi_squared(&sigma_n, &sigma_np1)?
        .iter()
        .map(|v| v.sqrt())
        .collect();
    let candidates = penta_lines_step(&eig, &sigma_np1)?;
    let (conic1, conic2) = conic_forms(&minor, &sigma_n, &sigma_np1)?;

    let mut out = String::from("curve_id,t,x,y\n");
    for k in 0..CLOSED_SAMPLES {
        let t = TAU * k as f64 / CLOSED_SAMPLES as f64;
        row(&mut out, "circle", t, radius * t.cos(), radius * t.sin());
    }
    for r in 0..n {
        let v = eig.vector(r);
        let u = [v[n - 2], v[n - 1]];
        let un = u[0].hypot(u[1]);
        if un <= 1e-12 {
            log::warn!(
                "eigenvector {} has no tail component; its line pair is at infinity",
                r + 1
            );
            continue;
        }
        let perp = [-u[1] / un, u[0] / un];
        for (tau, label) in [(1.0f64, "plus"), (-1.0, "minus")] {
            let id = format!("line-{}-{label}", r + 1);
            let offset = tau * xi[r];
            let base = [offset * u[0] / (un * un), offset * u[1] / (un * un)];
            for k in 0..OPEN_SAMPLES {
                let t = -1.5 * radius + 3.0 * radius * k as f64 / (OPEN_SAMPLES - 1) as f64;
                row(
                    &mut out,
                    &id,
                    t,
                    base[0] + t * perp[0],
                    base[1] + t * perp[1],
                );
            }
        }
    }
    emit_conic(&mut out, "conic-matrix", &conic1, radius);
    emit_conic(&mut out, "conic-inverse", &conic2, radius);
    for (i, cand) in candidates.candidates.iter().enumerate() {
        let id = format!("candidate-{}", i + 1);
        row(&mut out, &id, 0.0, cand.column[n - 2], cand.column[n - 1]);
    }
    log::info!(
        "step {n}: {} candidate point(s), circle radius {radius:.6e}",
        candidates.len()
    );
    emit(&args.output, &out)?;
    Ok(0)
}
