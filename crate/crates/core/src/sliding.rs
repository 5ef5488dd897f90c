//! Sliding-minor reconstruction for banded matrices: instead of the full
//! nested chain A^(1)..A^(N), only the spectra of small windows moving
//! along the diagonal are needed.
//!
//! Two schemes:
//!
//! * minimal: windows of size d+1. The first window is the leading
//!   (d+1)-minor; each later window overlaps the known part of the matrix
//!   in all but its last column, so a single closed-form growth step per
//!   window fills that column. Needs one sign vector (d signs) per window.
//! * redundant ("optimal"): windows of size d+2. The extra row makes the
//!   window's top-right corner an out-of-band zero, which prunes each
//!   window step to an antipodal pair — one ±1 per window resolves it, so
//!   apart from the head the scheme needs only first-row signs.
//!
//! Value-count ledger (asserted when the data object is built): the
//! minimal scheme consumes exactly (2N-d)(d+1)/2 spectral values, the
//! redundant scheme (N-d-1) more.

use crate::banded::{banded_step, sign_column};
use crate::cauchy::xi_squared;
use crate::eig::{eig_sym, EigDecomp, Gauge};
use crate::error::{Error, Result};
use crate::mat::SymmetricMatrix;
use crate::spectral::{
    check_pair_regular, extract_sign_indicators, sign_indicator, SignIndicators, Spectrum,
    NEAR_REGULAR_LOW,
};
use crate::telescopic::telescopic_step;

/// Spectra of the head minors plus all sliding windows of one scheme.
#[derive(Debug, Clone)]
pub struct SlidingSpectralData {
    d: usize,
    window_size: usize,
    head_spectra: Vec<Spectrum>,
    window_spectra: Vec<Spectrum>,
}

/// Spectral values consumed by a scheme on an N x N bandwidth-d matrix:
/// (2N-d)(d+1)/2 for window size d+1, plus (N-d-1) for window size d+2.
pub fn expected_value_count(n: usize, d: usize, window_size: usize) -> usize {
    let minimal = (2 * n - d) * (d + 1) / 2;
    if window_size == d + 2 {
        minimal + (n - d - 1)
    } else {
        minimal
    }
}

/// Sign indicators consumed by the minimal scheme: full head vectors plus
/// d per window.
pub fn minimal_sign_count(n: usize, d: usize) -> usize {
    d * (d + 1) / 2 + d * (n - d - 1)
}

impl SlidingSpectralData {
    /// Validates sizes, counts, and the value-count ledger.
    ///
    /// `head_spectra[i]` must be the spectrum of the leading (i+1)-minor
    /// (window_size - 1 of them); every window spectrum must have exactly
    /// `window_size` values; the window count then determines N.
    pub fn new(
        d: usize,
        head_spectra: Vec<Spectrum>,
        window_spectra: Vec<Spectrum>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::BadWindow("bandwidth must be at least 1".into()));
        }
        let first = window_spectra
            .first()
            .ok_or_else(|| Error::BadWindow("at least one window is required".into()))?;
        let window_size = first.n();
        if window_size != d + 1 && window_size != d + 2 {
            return Err(Error::BadWindow(format!(
                "window size {window_size} must be d+1 or d+2 for bandwidth {d}"
            )));
        }
        if head_spectra.len() != window_size - 1 {
            return Err(Error::BadWindow(format!(
                "expected {} head spectra, got {}",
                window_size - 1,
                head_spectra.len()
            )));
        }
        for (i, s) in head_spectra.iter().enumerate() {
            if s.n() != i + 1 {
                return Err(Error::BadWindow(format!(
                    "head spectrum {} has {} values, expected {}",
                    i + 1,
                    s.n(),
                    i + 1
                )));
            }
        }
        for (k, s) in window_spectra.iter().enumerate() {
            if s.n() != window_size {
                return Err(Error::BadWindow(format!(
                    "window {} has {} values, expected {window_size}",
                    k + 1,
                    s.n()
                )));
            }
        }
        let n = window_size - 1 + window_spectra.len();
        let total: usize = head_spectra.iter().map(Spectrum::n).sum::<usize>()
            + window_spectra.iter().map(Spectrum::n).sum::<usize>();
        if total != expected_value_count(n, d, window_size) {
            return Err(Error::BadWindow(format!(
                "value count {total} does not match the ledger {} for N={n}, d={d}",
                expected_value_count(n, d, window_size)
            )));
        }
        Ok(SlidingSpectralData {
            d,
            window_size,
            head_spectra,
            window_spectra,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    /// Order N of the matrix the data describes.
    pub fn order(&self) -> usize {
        self.window_size - 1 + self.window_spectra.len()
    }

    pub fn head_spectra(&self) -> &[Spectrum] {
        &self.head_spectra
    }

    pub fn window_spectra(&self) -> &[Spectrum] {
        &self.window_spectra
    }

    /// Total number of spectral values carried.
    pub fn value_count(&self) -> usize {
        self.head_spectra.iter().map(Spectrum::n).sum::<usize>()
            + self.window_spectra.iter().map(Spectrum::n).sum::<usize>()
    }
}

/// Reads the sliding data off a banded matrix.
///
/// Window k (1-based) is the principal submatrix on rows/columns
/// k..k+window_size-1; the head minors are the leading ones below window
/// size. The matrix must respect bandwidth d.
pub fn extract_sliding(
    m: &SymmetricMatrix,
    d: usize,
    window_size: usize,
) -> Result<SlidingSpectralData> {
    let n = m.n();
    if window_size != d + 1 && window_size != d + 2 {
        return Err(Error::BadWindow(format!(
            "window size {window_size} must be d+1 or d+2 for bandwidth {d}"
        )));
    }
    if window_size > n {
        return Err(Error::BadWindow(format!(
            "window size {window_size} exceeds matrix order {n}"
        )));
    }
    if m.detect_bandwidth() > d {
        return Err(Error::BadWindow(format!(
            "matrix has bandwidth {} but the scheme assumes {d}",
            m.detect_bandwidth()
        )));
    }
    let mut head_spectra = Vec::with_capacity(window_size - 1);
    for k in 1..window_size {
        head_spectra.push(eig_sym(&m.leading_minor(k), Gauge::Custom)?.spectrum());
    }
    let mut window_spectra = Vec::with_capacity(n - window_size + 1);
    for k in 0..=(n - window_size) {
        window_spectra.push(eig_sym(&m.window(k, window_size), Gauge::Custom)?.spectrum());
    }
    SlidingSpectralData::new(d, head_spectra, window_spectra)
}

/// Sign data for the minimal scheme: triangular head vectors (steps
/// 1..d, gauged per leading minor) plus one d-vector per window from the
/// second onward (gauged per that window's (d x d) top minor).
#[derive(Debug, Clone)]
pub struct SlidingSigns {
    pub head: SignIndicators,
    pub windows: Vec<Vec<i8>>,
}

impl SlidingSigns {
    /// Total number of ±1 values carried.
    pub fn sign_count(&self) -> usize {
        self.head.per_step().iter().map(Vec::len).sum::<usize>()
            + self.windows.iter().map(Vec::len).sum::<usize>()
    }
}

/// Reads the minimal-scheme signs off a source matrix (forward direction,
/// for tests and data generation).
pub fn extract_minimal_signs(m: &SymmetricMatrix, d: usize) -> Result<SlidingSigns> {
    let n = m.n();
    if n < d + 2 {
        return Err(Error::BadWindow(format!(
            "matrix order {n} leaves no sliding window for bandwidth {d}"
        )));
    }
    let head = extract_sign_indicators(&m.leading_minor(d + 1), Gauge::LastEntryPositive)?;
    let mut windows = Vec::with_capacity(n - d - 1);
    for k in 2..=(n - d) {
        let wminor = m.window(k - 1, d);
        let eig = eig_sym(&wminor, Gauge::LastEntryPositive)?;
        // The window's new column: rows k..k+d-1 of column k+d (1-based).
        let col: Vec<f64> = (0..d).map(|i| m.get(k - 1 + i, k + d - 1)).collect();
        let signs: Vec<i8> = (0..d)
            .map(|r| {
                sign_indicator(
                    eig.vector(r)
                        .iter()
                        .zip(&col)
                        .map(|(a, b)| a * b)
                        .sum::<f64>(),
                )
            })
            .collect();
        windows.push(signs);
    }
    Ok(SlidingSigns { head, windows })
}

/// First-row window signs of the redundant scheme: Sign(A_{k+1,k+d+1})
/// for window k = 1..N-d-1, i.e. the outermost in-band entry of each
/// column the windows produce.
pub fn extract_window_first_row_signs(m: &SymmetricMatrix, d: usize) -> Vec<i8> {
    (1..m.n() - d)
        .map(|k| sign_indicator(m.get(k, k + d)))
        .collect()
}

/// Head signs for the redundant scheme's first-row mode: Sign(A_{1,c})
/// for c = 2..d+1.
pub fn extract_head_first_row_signs(m: &SymmetricMatrix, d: usize) -> Vec<i8> {
    (1..=d).map(|c| sign_indicator(m.get(0, c))).collect()
}

/// How the head block A^(d+1) is resolved in the redundant scheme.
#[derive(Debug, Clone)]
pub enum HeadSigns {
    /// Full projection-sign vectors (deterministic head).
    Projection(SignIndicators),
    /// Only Sign(A_{1,c}) per head column; the remaining head freedom
    /// fans out into branches that later window constraints prune.
    FirstRow(Vec<i8>),
}

/// Chains the head minors up to order `spectra.len()`.
///
/// Returns every branch compatible with the head signs: exactly one for
/// projection signs, up to 2^(d(d-1)/2) for first-row signs.
fn chain_head(spectra: &[Spectrum], head: &HeadSigns) -> Result<Vec<SymmetricMatrix>> {
    let target = spectra.len();
    let mut mat1 = SymmetricMatrix::zeros(1);
    mat1.set(0, 0, spectra[0].get(0));
    let mut branches: Vec<(SymmetricMatrix, EigDecomp)> =
        vec![(mat1, EigDecomp::single(spectra[0].get(0)))];
    for n in 1..target {
        let sigma_np1 = &spectra[n];
        let mut next = Vec::new();
        for (matrix, eig) in &branches {
            match head {
                HeadSigns::Projection(si) => {
                    let step = telescopic_step(eig, sigma_np1, si.step(n))?;
                    next.push((grow(matrix, &step.column, step.h), step.eig_next));
                }
                HeadSigns::FirstRow(signs) => {
                    if signs.len() != target - 1 {
                        return Err(Error::Dimension {
                            expected: target - 1,
                            got: signs.len(),
                        });
                    }
                    let sigma_n = eig.spectrum();
                    check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
                    let xi: Vec<f64> = xi_squared(&sigma_n, sigma_np1)?
                        .iter()
                        .map(|v| v.sqrt())
                        .collect();
                    for mask in 0..(1usize << n) {
                        let svec: Vec<i8> = (0..n)
                            .map(|r| if (mask >> r) & 1 == 1 { -1 } else { 1 })
                            .collect();
                        let column = sign_column(eig, &xi, &svec);
                        if sign_indicator(column[0]) != signs[n - 1] {
                            continue;
                        }
                        let step = telescopic_step(eig, sigma_np1, &svec)?;
                        next.push((grow(matrix, &step.column, step.h), step.eig_next));
                    }
                }
            }
        }
        branches = next;
    }
    Ok(branches.into_iter().map(|(m, _)| m).collect())
}

fn grow(m: &SymmetricMatrix, column: &[f64], h: f64) -> SymmetricMatrix {
    let n = m.n();
    let mut out = SymmetricMatrix::zeros(n + 1);
    for i in 0..n {
        for j in i..n {
            out.set(i, j, m.get(i, j));
        }
        out.set(i, n, column[i]);
    }
    out.set(n, n, h);
    out
}

/// Reconstructs a bandwidth-d matrix from (d+1)-sized sliding windows.
///
/// The head spectra plus the first window rebuild the leading
/// (d+1)-minor; every further window k contributes its last column: the
/// window's top d x d block is already known, so one growth step with the
/// window's spectrum and its d-sign vector fills column k+d.
///
/// # Output
///
/// The matrix, with zeros outside the band by construction; reproduces
/// every input spectrum within the step tolerances.
pub fn reconstruct_sliding_minimal(
    sd: &SlidingSpectralData,
    signs: &SlidingSigns,
) -> Result<SymmetricMatrix> {
    let d = sd.d();
    if sd.window_size() != d + 1 {
        return Err(Error::BadWindow(format!(
            "minimal scheme needs window size {}, data has {}",
            d + 1,
            sd.window_size()
        )));
    }
    let n = sd.order();
    if signs.head.steps() < d {
        return Err(Error::Dimension {
            expected: d,
            got: signs.head.steps(),
        });
    }
    if signs.windows.len() != n - d - 1 {
        return Err(Error::Dimension {
            expected: n - d - 1,
            got: signs.windows.len(),
        });
    }

    // Head: sigma^(1)..sigma^(d) plus the first window (= sigma^(d+1)).
    let mut chain: Vec<Spectrum> = sd.head_spectra().to_vec();
    chain.push(sd.window_spectra()[0].clone());
    let head = chain_head(&chain, &HeadSigns::Projection(signs.head.clone()))?;
    let head = head.into_iter().next().expect("projection head is unique");

    let mut out = SymmetricMatrix::zeros(n);
    for i in 0..=d {
        for j in i..=d {
            out.set(i, j, head.get(i, j));
        }
    }

    for k in 2..=(n - d) {
        let wsigns = &signs.windows[k - 2];
        if wsigns.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: wsigns.len(),
            });
        }
        let wminor = out.window(k - 1, d);
        let eig = eig_sym(&wminor, Gauge::LastEntryPositive)?;
        let step = telescopic_step(&eig, &sd.window_spectra()[k - 1], wsigns)?;
        for (i, v) in step.column.iter().enumerate() {
            out.set(k - 1 + i, k + d - 1, *v);
        }
        out.set(k + d - 1, k + d - 1, step.h);
    }
    out.with_bandwidth(d)
}

/// Reconstructs from (d+2)-sized windows, needing only one ±1 per window
/// beyond the head.
///
/// Each window's top-right corner lies outside the band; the constrained
/// growth step inside the window therefore has exactly one vanishing
/// leading component, which prunes the 2^(d+1) sign choices to an
/// antipodal pair; `first_row_signs[k-1]` (the sign of A_{k+1,k+d+1})
/// picks the survivor. Head branches that are inconsistent with some
/// window die along the way.
///
/// Fails with `Ambiguous` when more than one full matrix survives; use
/// [`reconstruct_sliding_optimal_branches`] to inspect all of them.
pub fn reconstruct_sliding_optimal(
    sd: &SlidingSpectralData,
    first_row_signs: &[i8],
    head: &HeadSigns,
) -> Result<SymmetricMatrix> {
    let mut all = reconstruct_sliding_optimal_branches(sd, first_row_signs, head)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        k => Err(Error::Ambiguous { branches: k }),
    }
}

/// As [`reconstruct_sliding_optimal`], returning every surviving branch.
pub fn reconstruct_sliding_optimal_branches(
    sd: &SlidingSpectralData,
    first_row_signs: &[i8],
    head: &HeadSigns,
) -> Result<Vec<SymmetricMatrix>> {
    let d = sd.d();
    if sd.window_size() != d + 2 {
        return Err(Error::BadWindow(format!(
            "redundant scheme needs window size {}, data has {}",
            d + 2,
            sd.window_size()
        )));
    }
    let n = sd.order();
    let windows = sd.window_spectra().len();
    if first_row_signs.len() != windows {
        return Err(Error::Dimension {
            expected: windows,
            got: first_row_signs.len(),
        });
    }

    // Head: sigma^(1)..sigma^(d+1) are all given directly.
    let heads = chain_head(sd.head_spectra(), head)?;
    let mut branches: Vec<SymmetricMatrix> = heads
        .into_iter()
        .map(|h| {
            let mut out = SymmetricMatrix::zeros(n);
            for i in 0..=d {
                for j in i..=d {
                    out.set(i, j, h.get(i, j));
                }
            }
            out
        })
        .collect();

    let mut last_err: Option<Error> = None;
    for k in 1..=windows {
        let spectrum = &sd.window_spectra()[k - 1];
        let mut next = Vec::new();
        for branch in &branches {
            let wminor = branch.window(k - 1, d + 1);
            let eig = match eig_sym(&wminor, Gauge::LastEntryPositive) {
                Ok(e) => e,
                Err(e) => return Err(e),
            };
            let set = match banded_step(&eig, spectrum, d, None) {
                Ok(set) => set,
                Err(
                    e @ (Error::NoSolution { .. }
                    | Error::NotInterlacing { .. }
                    | Error::NotRegular { .. }
                    | Error::Inconsistent(_)),
                ) => {
                    // A wrong head branch shows up as an infeasible or
                    // even non-interlacing window step.
                    last_err = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            for cand in &set.candidates {
                if sign_indicator(cand.column[1]) != first_row_signs[k - 1] {
                    continue;
                }
                let mut grown = branch.clone();
                // Column k+d+1 (1-based): corner entry is the enforced
                // zero, the rest are the window's in-band values.
                for (i, v) in cand.column.iter().enumerate().skip(1) {
                    grown.set(k - 1 + i, k + d, *v);
                }
                let h = spectrum.power_sum(1) - eig.spectrum().power_sum(1);
                grown.set(k + d, k + d, h);
                next.push(grown);
            }
        }
        if next.is_empty() {
            return Err(last_err.unwrap_or(Error::NoSolution { step: k + d }));
        }
        branches = next;
    }

    let mut finals: Vec<SymmetricMatrix> = Vec::new();
    for b in branches {
        let b = b.with_bandwidth(d)?;
        if !finals.iter().any(|f| f.max_abs_diff(&b) < 1e-9) {
            finals.push(b);
        }
    }
    Ok(finals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::extract_spectral_data;

    fn penta_six() -> SymmetricMatrix {
        SymmetricMatrix::from_rows(&[
            &[2.0, 0.8, -0.5, 0.0, 0.0, 0.0],
            &[0.8, 1.5, 0.6, 0.9, 0.0, 0.0],
            &[-0.5, 0.6, 3.0, -0.7, 0.4, 0.0],
            &[0.0, 0.9, -0.7, 2.5, 1.1, -0.3],
            &[0.0, 0.0, 0.4, 1.1, 1.8, 0.6],
            &[0.0, 0.0, 0.0, -0.3, 0.6, 2.2],
        ])
        .unwrap()
    }

    #[test]
    fn extraction_counts_follow_the_ledger() {
        let m = penta_six();
        let minimal = extract_sliding(&m, 2, 3).unwrap();
        assert_eq!(minimal.window_spectra().len(), 4);
        assert_eq!(minimal.head_spectra().len(), 2);
        assert_eq!(minimal.value_count(), 15); // (2*6-2)*3/2
        assert_eq!(minimal.order(), 6);

        let redundant = extract_sliding(&m, 2, 4).unwrap();
        assert_eq!(redundant.window_spectra().len(), 3);
        assert_eq!(redundant.head_spectra().len(), 3);
        assert_eq!(redundant.value_count(), 18); // 15 + (6-2-1)
    }

    #[test]
    fn diagonal_windows_are_diagonal_slices() {
        let m = SymmetricMatrix::from_rows(&[
            &[4.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 3.0, 0.0],
            &[0.0, 0.0, 0.0, 2.0],
        ])
        .unwrap();
        let sd = extract_sliding(&m, 1, 2).unwrap();
        let w2 = sd.window_spectra()[1].values(); // rows 2..3: {1, 3}
        assert!((w2[0] - 1.0).abs() < 1e-12 && (w2[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bad_windows_are_rejected() {
        let m = penta_six();
        assert!(matches!(
            extract_sliding(&m, 2, 5),
            Err(Error::BadWindow(_))
        ));
        assert!(matches!(
            extract_sliding(&m, 1, 2),
            Err(Error::BadWindow(_)) // bandwidth is really 2
        ));
    }

    #[test]
    fn minimal_scheme_round_trips_pentadiagonal() {
        let m = penta_six();
        let sd = extract_sliding(&m, 2, 3).unwrap();
        let signs = extract_minimal_signs(&m, 2).unwrap();
        assert_eq!(signs.sign_count(), minimal_sign_count(6, 2)); // 3 + 2*3
        let rec = reconstruct_sliding_minimal(&sd, &signs).unwrap();
        assert!(rec.max_abs_diff(&m) < 1e-9, "defect {:.3e}", rec.max_abs_diff(&m));
    }

    #[test]
    fn minimal_scheme_round_trips_jacobi() {
        let t = SymmetricMatrix::from_rows(&[
            &[2.0, 1.3, 0.0, 0.0, 0.0],
            &[1.3, 1.0, -0.8, 0.0, 0.0],
            &[0.0, -0.8, 3.0, 0.5, 0.0],
            &[0.0, 0.0, 0.5, 2.5, 1.7],
            &[0.0, 0.0, 0.0, 1.7, 1.2],
        ])
        .unwrap();
        let sd = extract_sliding(&t, 1, 2).unwrap();
        let signs = extract_minimal_signs(&t, 1).unwrap();
        let rec = reconstruct_sliding_minimal(&sd, &signs).unwrap();
        assert!(rec.max_abs_diff(&t) < 1e-9);
    }

    #[test]
    fn redundant_scheme_round_trips_with_projection_head() {
        let m = penta_six();
        let sd = extract_sliding(&m, 2, 4).unwrap();
        let head = extract_sign_indicators(&m.leading_minor(3), Gauge::LastEntryPositive).unwrap();
        let frs = extract_window_first_row_signs(&m, 2);
        assert_eq!(frs.len(), 3);
        let rec =
            reconstruct_sliding_optimal(&sd, &frs, &HeadSigns::Projection(head)).unwrap();
        assert!(rec.max_abs_diff(&m) < 1e-8);
    }

    #[test]
    fn redundant_scheme_needs_only_first_row_signs() {
        let m = penta_six();
        let sd = extract_sliding(&m, 2, 4).unwrap();
        let head = extract_head_first_row_signs(&m, 2);
        let frs = extract_window_first_row_signs(&m, 2);
        // Total budget: d + (N-d-1) = N-1 signs.
        assert_eq!(head.len() + frs.len(), 5);
        let rec = reconstruct_sliding_optimal(&sd, &frs, &HeadSigns::FirstRow(head)).unwrap();
        assert!(rec.max_abs_diff(&m) < 1e-8, "defect {:.3e}", rec.max_abs_diff(&m));
        assert!(rec.detect_bandwidth() <= 2);
    }

    #[test]
    fn redundant_scheme_agrees_with_full_chain_reconstruction() {
        let m = penta_six();
        let sliding = {
            let sd = extract_sliding(&m, 2, 4).unwrap();
            let head = extract_head_first_row_signs(&m, 2);
            let frs = extract_window_first_row_signs(&m, 2);
            reconstruct_sliding_optimal(&sd, &frs, &HeadSigns::FirstRow(head)).unwrap()
        };
        let chained = {
            let sd = extract_spectral_data(&m).unwrap();
            let signs: Vec<i8> = (2..=6)
                .map(|c| {
                    let row = if c > 2 { c - 2 } else { 1 };
                    sign_indicator(m.get(row - 1, c - 1))
                })
                .collect();
            crate::banded::reconstruct_banded(&sd, 2, &signs, None).unwrap()
        };
        assert!(sliding.max_abs_diff(&chained) < 1e-8);
    }
}
