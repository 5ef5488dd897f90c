//! The inductive reconstruction step: grow A^(n+1) from the
//! eigendecomposition of A^(n), the next spectrum, and n sign indicators.
//!
//! Each step is exact in exact arithmetic: the squared projections of the
//! new column onto the current eigenvectors are determined by the two
//! spectra ([`crate::cauchy::xi_squared`]), the signs pick the branch of
//! each square root, and the new diagonal entry is the trace difference.
//! The eigendecomposition of the grown matrix is obtained in closed form
//! (no re-diagonalization), which is what makes chaining N-1 steps cheap
//! and deterministic.

use serde::Serialize;

use crate::cauchy::{consistency_residual, eigvec_last_entry_sq, xi_squared};
use crate::eig::{EigDecomp, Gauge};
use crate::error::{Error, Result};
use crate::mat::{norm, SymmetricMatrix};
use crate::spectral::{
    check_pair_regular, sign_indicator, SignIndicators, SpectralData, Spectrum,
    DEGENERACY_REL_TOL, NEAR_REGULAR_HIGH, NEAR_REGULAR_LOW,
};

/// Result of one reconstruction step from order n to order n+1.
#[derive(Debug, Clone)]
pub struct StepResult {
    /// The new off-diagonal column a^(n) (n entries).
    pub column: Vec<f64>,
    /// The new diagonal entry A_{n+1,n+1} (trace difference of the spectra).
    pub h: f64,
    /// Eigendecomposition of A^(n+1), gauged last-entry-positive.
    pub eig_next: EigDecomp,
    /// Expansion coefficients of the new eigenvectors in the tilde basis
    /// {(v^(n)(r), 0)}_r followed by e_{n+1}: `b_coeffs[k][r]` is the
    /// coefficient of eigenvector k on basis vector r.
    pub b_coeffs: Vec<Vec<f64>>,
    /// True when some spectral gap fell in the warn band (the step went
    /// through, but conditioning is degraded).
    pub near_regular: bool,
}

/// One line of a reconstruction report (serialized as JSON-lines by the CLI).
#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    /// Report schema tag.
    pub schema: &'static str,
    /// Order of the matrix this step produced.
    pub produced_order: usize,
    /// Which step variant ran.
    pub kind: &'static str,
    /// Residual of the redundant secular equation for this step's spectra.
    pub residual: f64,
    /// Warn-band regularity flag.
    pub near_regular: bool,
    /// Number of values shared between the two spectra (0 for regular).
    pub shared_values: usize,
    /// Candidate count for search-based steps (1 for deterministic ones).
    pub candidates: usize,
    /// Whether the step's eigenvector geometry fired the 4-solution
    /// degeneracy test (pentadiagonal methods only).
    pub alpha_hit: bool,
    /// Whether the two conic forms commuted (pentadiagonal conic method).
    pub conic_degenerate: bool,
    /// Number of surviving reconstruction branches after this step.
    pub branches: usize,
}

impl StepReport {
    /// A report line with neutral defaults for the given step kind.
    pub fn new(kind: &'static str, produced_order: usize) -> Self {
        StepReport {
            schema: "step-report/v1",
            produced_order,
            kind,
            residual: 0.0,
            near_regular: false,
            shared_values: 0,
            candidates: 1,
            alpha_hit: false,
            conic_degenerate: false,
            branches: 1,
        }
    }
}

/// Performs one regular reconstruction step.
///
/// # Input
///
/// * `eig_n` — eigendecomposition of the current leading block A^(n); the
///   sign indicators are interpreted relative to these vectors exactly as
///   stored.
/// * `sigma_np1` — spectrum of the grown block A^(n+1) (n+1 values).
/// * `signs` — n entries of ±1, one per eigenvector of A^(n).
///
/// # Output
///
/// The new column and diagonal entry plus the eigendecomposition of
/// A^(n+1) in the last-entry-positive gauge, ready to feed the next step.
///
/// # Notes
///
/// Requires all spectral gaps (within and across the two spectra) to be at
/// least 1e-10; gaps below 1e-7 set the `near_regular` warning flag. The
/// square roots of the projection magnitudes are taken non-negative — the
/// entire sign freedom lives in `signs`.
pub fn telescopic_step(
    eig_n: &EigDecomp,
    sigma_np1: &Spectrum,
    signs: &[i8],
) -> Result<StepResult> {
    let n = eig_n.n();
    if signs.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: signs.len(),
        });
    }
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let sigma_n = eig_n.spectrum();
    let gap = check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
    let near_regular = gap < NEAR_REGULAR_HIGH;

    let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
    let xi2 = xi_squared(&sigma_n, sigma_np1)?;
    let xi: Vec<f64> = xi2.iter().map(|v| v.sqrt()).collect();

    let mut column = vec![0.0; n];
    for r in 0..n {
        let c = f64::from(signs[r]) * xi[r];
        let v = eig_n.vector(r);
        for i in 0..n {
            column[i] += c * v[i];
        }
    }

    let (vectors, b_coeffs) =
        extended_eigvectors(eig_n, &sigma_n, sigma_np1, &xi, signs, &[], &[])?;
    let ortho_tol = if near_regular { 1e-4 } else { 1e-8 };
    let eig_next = EigDecomp::from_parts_with_tol(
        sigma_np1.values().to_vec(),
        vectors,
        Gauge::LastEntryPositive,
        ortho_tol,
    )?;

    Ok(StepResult {
        column,
        h,
        eig_next,
        b_coeffs,
        near_regular,
    })
}

/// Builds the eigenvectors of the grown matrix in closed form.
///
/// `carried` lists (position in sigma_np1, index in eig_n) pairs whose
/// eigenvectors transfer unchanged with an appended zero (shared-value
/// directions); `excluded` lists eig_n indices that participate in neither
/// the sums nor the carried set (they must be handled by the caller).
/// For the regular step both lists are empty and `xi[r]`/`signs[r]` are
/// indexed directly by r.
pub(crate) fn extended_eigvectors(
    eig_n: &EigDecomp,
    sigma_n: &Spectrum,
    sigma_np1: &Spectrum,
    xi: &[f64],
    signs: &[i8],
    carried: &[(usize, usize)],
    excluded: &[usize],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = eig_n.n();
    let active: Vec<usize> = (0..n)
        .filter(|r| {
            !carried.iter().any(|&(_, cr)| cr == *r) && !excluded.contains(r)
        })
        .collect();
    // Reduced spectra for the last-entry formula: active old values against
    // the new values that are not carry-over positions.
    let lam_red: Vec<f64> = active.iter().map(|&r| sigma_n.get(r)).collect();
    let new_positions: Vec<usize> = (0..=n)
        .filter(|k| !carried.iter().any(|&(ck, _)| ck == *k))
        .collect();
    let mu_red: Vec<f64> = new_positions.iter().map(|&k| sigma_np1.get(k)).collect();
    if mu_red.len() != lam_red.len() + 1 {
        return Err(Error::Dimension {
            expected: lam_red.len() + 1,
            got: mu_red.len(),
        });
    }
    let b_last = if lam_red.is_empty() {
        vec![1.0]
    } else {
        eigvec_last_entry_sq(&Spectrum::new(lam_red.clone())?, &Spectrum::new(mu_red.clone())?)?
    };

    let mut vectors = vec![Vec::new(); n + 1];
    let mut b_coeffs = vec![Vec::new(); n + 1];

    for &(k, r) in carried {
        let mut w = vec![0.0; n + 1];
        w[..n].copy_from_slice(eig_n.vector(r));
        let mut coeff = vec![0.0; n + 1];
        coeff[r] = 1.0;
        vectors[k] = w;
        b_coeffs[k] = coeff;
    }

    for (pos, &k) in new_positions.iter().enumerate() {
        let mu = sigma_np1.get(k);
        let bk = b_last[pos].sqrt();
        let mut w = vec![0.0; n + 1];
        let mut coeff = vec![0.0; n + 1];
        w[n] = bk;
        coeff[n] = bk;
        for (ai, &r) in active.iter().enumerate() {
            let gap = mu - sigma_n.get(r);
            let c = f64::from(signs[ai]) * xi[ai] * bk / gap;
            coeff[r] = c;
            let v = eig_n.vector(r);
            for i in 0..n {
                w[i] += c * v[i];
            }
        }
        let nrm = norm(&w);
        if !(nrm > 0.0) {
            return Err(Error::Inconsistent(format!(
                "grown eigenvector {k} collapsed to zero"
            )));
        }
        for x in &mut w {
            *x /= nrm;
        }
        for x in &mut coeff {
            *x /= nrm;
        }
        vectors[k] = w;
        b_coeffs[k] = coeff;
    }

    Ok((vectors, b_coeffs))
}

/// A step whose spectra share isolated values (both spectra still simple).
///
/// Each shared value forces a vanishing projection on the matching
/// eigenvector, which then carries over with an appended zero; the
/// remaining directions form a smaller regular step. `signs` still has n
/// entries; the ones at shared positions are ignored.
pub fn step_with_shared_values(
    eig_n: &EigDecomp,
    sigma_np1: &Spectrum,
    signs: &[i8],
) -> Result<StepResult> {
    let n = eig_n.n();
    if signs.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: signs.len(),
        });
    }
    let sigma_n = eig_n.spectrum();
    let scale = sigma_np1.diameter().max(sigma_n.diameter()).max(1.0);
    let tol = DEGENERACY_REL_TOL * scale;
    if sigma_n.min_internal_gap() < tol || sigma_np1.min_internal_gap() < tol {
        return Err(Error::NotRegular {
            step: n,
            gap: sigma_n.min_internal_gap().min(sigma_np1.min_internal_gap()),
        });
    }

    // Match shared values: each old value to its closest new value, shared
    // when within tol. Simple spectra + interlacing make this unambiguous.
    let mut carried: Vec<(usize, usize)> = Vec::new();
    let mut used_new = vec![false; n + 1];
    for r in 0..n {
        let lam = sigma_n.get(r);
        let mut best: Option<(usize, f64)> = None;
        for k in 0..=n {
            if used_new[k] {
                continue;
            }
            let d = (sigma_np1.get(k) - lam).abs();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        if let Some((k, d)) = best {
            if d <= tol {
                carried.push((k, r));
                used_new[k] = true;
            }
        }
    }
    if carried.is_empty() {
        return telescopic_step(eig_n, sigma_np1, signs);
    }

    let active: Vec<usize> = (0..n)
        .filter(|r| !carried.iter().any(|&(_, cr)| cr == *r))
        .collect();
    let new_positions: Vec<usize> = (0..=n)
        .filter(|k| !carried.iter().any(|&(ck, _)| ck == *k))
        .collect();
    let lam_red: Vec<f64> = active.iter().map(|&r| sigma_n.get(r)).collect();
    let mu_red: Vec<f64> = new_positions.iter().map(|&k| sigma_np1.get(k)).collect();

    let mut near_regular = false;
    let (xi_red, signs_red): (Vec<f64>, Vec<i8>) = if lam_red.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let sr = Spectrum::new(lam_red)?;
        let mr = Spectrum::new(mu_red)?;
        let gap = check_pair_regular(&sr, &mr, NEAR_REGULAR_LOW)?;
        near_regular = gap < NEAR_REGULAR_HIGH;
        let xi2 = xi_squared(&sr, &mr)?;
        (
            xi2.iter().map(|v| v.sqrt()).collect(),
            active.iter().map(|&r| signs[r]).collect(),
        )
    };

    let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
    let mut column = vec![0.0; n];
    for (ai, &r) in active.iter().enumerate() {
        let c = f64::from(signs_red[ai]) * xi_red[ai];
        let v = eig_n.vector(r);
        for i in 0..n {
            column[i] += c * v[i];
        }
    }

    let (vectors, b_coeffs) = extended_eigvectors(
        eig_n, &sigma_n, sigma_np1, &xi_red, &signs_red, &carried, &[],
    )?;
    let eig_next = EigDecomp::from_parts_with_tol(
        sigma_np1.values().to_vec(),
        vectors,
        Gauge::LastEntryPositive,
        if near_regular { 1e-4 } else { 1e-8 },
    )?;

    Ok(StepResult {
        column,
        h,
        eig_next,
        b_coeffs,
        near_regular,
    })
}

/// Reconstructs the full matrix from nested-minor spectra and the complete
/// triangular set of sign indicators.
///
/// Steps whose consecutive spectra share isolated values are handled by the
/// forced-zero-projection reduction; true degenerate blocks (repeated values
/// inside one spectrum) are out of scope here and yield `NotRegular` — use
/// the degenerate-case machinery for those.
pub fn reconstruct_full(sd: &SpectralData, signs: &SignIndicators) -> Result<SymmetricMatrix> {
    reconstruct_full_with_report(sd, signs).map(|(m, _)| m)
}

/// Like [`reconstruct_full`] but also returns one report line per step.
pub fn reconstruct_full_with_report(
    sd: &SpectralData,
    signs: &SignIndicators,
) -> Result<(SymmetricMatrix, Vec<StepReport>)> {
    let n_total = sd.order();
    if signs.steps() != n_total - 1 {
        return Err(Error::Dimension {
            expected: n_total - 1,
            got: signs.steps(),
        });
    }
    let mut m = SymmetricMatrix::zeros(n_total);
    m.set(0, 0, sd.minor(1).get(0));
    let mut eig = EigDecomp::single(sd.minor(1).get(0));
    let mut reports = Vec::with_capacity(n_total - 1);

    for n in 1..n_total {
        let sigma_np1 = sd.minor(n + 1);
        let sigma_n = eig.spectrum();
        let scale = sigma_np1.diameter().max(1.0);
        let shared = sigma_n.min_cross_gap(sigma_np1) <= DEGENERACY_REL_TOL * scale;
        let step = if shared {
            step_with_shared_values(&eig, sigma_np1, signs.step(n))?
        } else {
            telescopic_step(&eig, sigma_np1, signs.step(n))?
        };
        for i in 0..n {
            m.set(i, n, step.column[i]);
        }
        m.set(n, n, step.h);

        let mut rep = StepReport::new(if shared { "shared-values" } else { "telescopic" }, n + 1);
        rep.near_regular = step.near_regular;
        if shared {
            rep.shared_values = sigma_n
                .values()
                .iter()
                .filter(|lam| {
                    sigma_np1
                        .values()
                        .iter()
                        .any(|mu| (*lam - mu).abs() <= DEGENERACY_REL_TOL * scale)
                })
                .count();
        } else {
            rep.residual = consistency_residual(&sigma_n, sigma_np1, step.h)?;
        }
        reports.push(rep);

        eig = step.eig_next;
    }
    Ok((m, reports))
}

/// Builds the 2x2 matrix with prescribed (1,1) entry, spectrum, and sign of
/// the off-diagonal.
///
/// The off-diagonal magnitude is forced: |A12|^2 = (A11 - l1)(l2 - A11),
/// and the second diagonal entry is the trace remainder.
pub fn two_by_two(a11: f64, sigma2: &Spectrum, sign: i8) -> Result<SymmetricMatrix> {
    if sigma2.n() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: sigma2.n(),
        });
    }
    let (l1, l2) = (sigma2.get(0), sigma2.get(1));
    let prod = (a11 - l1) * (l2 - a11);
    let tol = 1e-12 * sigma2.diameter().max(1.0).powi(2);
    if prod < -tol {
        return Err(Error::NotInterlacing {
            detail: format!("(A11 - l1)(l2 - A11) = {prod:.6e} < 0"),
        });
    }
    let off = f64::from(sign) * prod.max(0.0).sqrt();
    let mut m = SymmetricMatrix::zeros(2);
    m.set(0, 0, a11);
    m.set(0, 1, off);
    m.set(1, 1, l1 + l2 - a11);
    Ok(m)
}

/// Recovers the two sign indicators of the 2-to-3 step directly from the
/// 2x2 block and the third column, without any eigensolve.
///
/// # Input
///
/// * `m2` — the leading 2x2 block (must have a nonzero off-diagonal entry).
/// * `col3` — the off-diagonal third column (A13, A23).
///
/// # Output
///
/// The pair (s1, s2) such that feeding it to [`telescopic_step`] with the
/// last-entry-positive eigendecomposition of `m2` reproduces `col3`.
///
/// # Notes
///
/// Uses the closed-form eigenvectors of a 2x2 symmetric matrix, written
/// with the ratio `alpha = -Sign(A12) * sqrt((l2 - A11)/(A11 - l1))`: the
/// projections of col3 onto them are proportional to `alpha*A13 + A23` and
/// `alpha*A23 - A13`. The closed form's second eigenvector has last entry
/// `alpha`, so its sign is flipped into the last-entry-positive gauge when
/// `alpha < 0`.
pub fn signs_2to3(m2: &SymmetricMatrix, col3: (f64, f64)) -> Result<(i8, i8)> {
    if m2.n() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: m2.n(),
        });
    }
    let a11 = m2.get(0, 0);
    let a12 = m2.get(0, 1);
    let a22 = m2.get(1, 1);
    let scale = m2.max_abs().max(1.0);
    if a12.abs() <= 1e-10 * scale {
        return Err(Error::DegenerateM2);
    }
    let mid = 0.5 * (a11 + a22);
    let disc = (0.5 * (a11 - a22)).powi(2) + a12 * a12;
    let l1 = mid - disc.sqrt();
    let l2 = mid + disc.sqrt();
    if !(a11 - l1 > 0.0 && l2 - a11 > 0.0) {
        return Err(Error::DegenerateM2);
    }
    let alpha = -f64::from(sign_indicator(a12)) * ((l2 - a11) / (a11 - l1)).sqrt();
    let (a13, a23) = col3;
    let s1 = sign_indicator(alpha * a13 + a23);
    let mut s2 = sign_indicator(alpha * a23 - a13);
    if alpha < 0.0 {
        s2 = -s2;
    }
    Ok((s1, s2))
}
