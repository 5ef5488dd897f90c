//! Spectral data model: nested-minor spectra, sign indicators, per-step
//! scalars, and regularity checks.
//!
//! The data a reconstruction consumes is the list of spectra of the leading
//! principal minors A^(1), ..., A^(N) (ascending within each spectrum,
//! adjacent spectra interlacing) plus one sign per eigenvector per step. A
//! pair (sigma^(n), sigma^(n+1)) is *regular* when both spectra are simple
//! and they share no value; every closed-form step formula divides by those
//! gaps, which is why regularity is checked up front.

use crate::eig::{eig_sym, EigDecomp, Gauge};
use crate::error::{Error, Result};
use crate::mat::{dot, SymmetricMatrix};

/// Tolerance (relative to the spectral diameter) below which interlacing
/// violations are treated as genuine errors rather than rounding.
pub const INTERLACE_REL_TOL: f64 = 1e-9;

/// Gap threshold (relative to the spectral diameter) under which a spectrum
/// is treated as degenerate for gauge purposes.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;

/// Default absolute gap threshold for [`check_regular`].
pub const REGULARITY_DEFAULT_TOL: f64 = 1e-7;

/// Gaps in `[NEAR_REGULAR_LOW, NEAR_REGULAR_HIGH)` (absolute) pass regularity
/// checks but are flagged as numerically delicate.
pub const NEAR_REGULAR_LOW: f64 = 1e-10;
/// Upper end of the near-regular warning band.
pub const NEAR_REGULAR_HIGH: f64 = 1e-7;

/// Sign convention used for all sign indicators: +1 for x >= 0, -1 for x < 0.
#[inline]
pub fn sign_indicator(x: f64) -> i8 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// A finite, ascending list of eigenvalues. Ties are allowed (degenerate
/// spectra are data, not errors).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validates finiteness and ascending order (ties allowed).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty spectrum".into()));
        }
        for v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite eigenvalue {v}")));
            }
        }
        for w in values.windows(2) {
            if !(w[0] <= w[1]) {
                return Err(Error::InvalidInput(format!(
                    "spectrum not ascending: {} > {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Spectrum { values })
    }

    /// Number of eigenvalues.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvalue `j` (0-based).
    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// max - min; zero for a single value.
    pub fn diameter(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    /// Smallest gap between consecutive eigenvalues (infinity for n = 1).
    pub fn min_internal_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest absolute distance between this spectrum and another.
    pub fn min_cross_gap(&self, other: &Spectrum) -> f64 {
        let mut m = f64::INFINITY;
        for a in &self.values {
            for b in &other.values {
                m = m.min((a - b).abs());
            }
        }
        m
    }

    /// Sum of k-th powers of the eigenvalues.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.values.iter().map(|v| v.powi(k as i32)).sum()
    }

    /// Product of the eigenvalues (the determinant of any matrix with this
    /// spectrum).
    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}

/// Spectra of all leading principal minors A^(1), ..., A^(N).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    spectra: Vec<Spectrum>,
}

impl SpectralData {
    /// Validates sizes (|sigma^(k)| = k) and adjacent interlacing within
    /// `INTERLACE_REL_TOL` times the spectral diameter.
    pub fn new(spectra: Vec<Spectrum>) -> Result<Self> {
        if spectra.is_empty() {
            return Err(Error::InvalidInput("no spectra supplied".into()));
        }
        for (k, s) in spectra.iter().enumerate() {
            if s.n() != k + 1 {
                return Err(Error::Dimension {
                    expected: k + 1,
                    got: s.n(),
                });
            }
        }
        let diam = spectra[spectra.len() - 1].diameter().max(1.0);
        let tol = INTERLACE_REL_TOL * diam;
        for k in 0..spectra.len() - 1 {
            check_interlacing(&spectra[k], &spectra[k + 1], tol)?;
        }
        Ok(SpectralData { spectra })
    }

    /// Full matrix order N.
    pub fn order(&self) -> usize {
        self.spectra.len()
    }

    /// Spectrum of the k-th leading minor, k = 1..=N.
    pub fn minor(&self, k: usize) -> &Spectrum {
        &self.spectra[k - 1]
    }

    /// All spectra, smallest minor first.
    pub fn spectra(&self) -> &[Spectrum] {
        &self.spectra
    }

    /// Total number of spectral values consumed: N(N+1)/2.
    pub fn value_count(&self) -> usize {
        self.spectra.iter().map(|s| s.n()).sum()
    }
}

/// Verifies lambda'_1 <= lambda_1 <= lambda'_2 <= ... <= lambda_n <= lambda'_{n+1}
/// within `tol` (violations smaller than `tol` are attributed to rounding).
pub fn check_interlacing(sigma_n: &Spectrum, sigma_np1: &Spectrum, tol: f64) -> Result<()> {
    let n = sigma_n.n();
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    for i in 0..n {
        let lo = sigma_np1.get(i);
        let hi = sigma_np1.get(i + 1);
        let v = sigma_n.get(i);
        if v < lo - tol || v > hi + tol {
            return Err(Error::NotInterlacing {
                detail: format!(
                    "lambda_{}^(n) = {v} outside [{lo}, {hi}] (n = {n}, tol {tol:.3e})",
                    i + 1
                ),
            });
        }
    }
    Ok(())
}

/// Computes the spectra of all leading principal minors of `m`.
pub fn extract_spectral_data(m: &SymmetricMatrix) -> Result<SpectralData> {
    let n = m.n();
    let mut spectra = Vec::with_capacity(n);
    for k in 1..=n {
        let d = eig_sym(&m.leading_minor(k), Gauge::Custom)?;
        spectra.push(d.spectrum());
    }
    SpectralData::new(spectra)
}

/// Sign indicators for every reconstruction step: `per_step[n-1]` holds the
/// n signs of step n (building A^(n+1) from A^(n)), n = 1..N-1.
#[derive(Debug, Clone, PartialEq)]
pub struct SignIndicators {
    per_step: Vec<Vec<i8>>,
}

impl SignIndicators {
    /// Validates the triangular shape and that every entry is +1 or -1.
    pub fn new(per_step: Vec<Vec<i8>>) -> Result<Self> {
        for (k, step) in per_step.iter().enumerate() {
            if step.len() != k + 1 {
                return Err(Error::Dimension {
                    expected: k + 1,
                    got: step.len(),
                });
            }
            for s in step {
                if *s != 1 && *s != -1 {
                    return Err(Error::InvalidInput(format!("sign must be +-1, got {s}")));
                }
            }
        }
        Ok(SignIndicators { per_step })
    }

    /// Signs of step n (1-based): n entries.
    pub fn step(&self, n: usize) -> &[i8] {
        &self.per_step[n - 1]
    }

    /// Number of steps covered.
    pub fn steps(&self) -> usize {
        self.per_step.len()
    }

    /// All sign vectors, step 1 first.
    pub fn per_step(&self) -> &[Vec<i8>] {
        &self.per_step
    }
}

/// Extracts the sign indicators of every step of `m` in the given gauge:
/// `s^(n)_j = Sign( <a^(n) | v^(n)(j)> )` where a^(n) is the off-diagonal
/// part of column n+1 and v^(n)(j) the j-th eigenvector of A^(n).
///
/// Fails with [`Error::GaugeAmbiguous`] when some minor has a (numerically)
/// degenerate spectrum, because then no gauge pins the eigenbasis down.
pub fn extract_sign_indicators(m: &SymmetricMatrix, gauge: Gauge) -> Result<SignIndicators> {
    let n = m.n();
    let scale = {
        let d = eig_sym(m, Gauge::Custom)?.spectrum().diameter();
        d.max(1.0)
    };
    let mut per_step = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let d = eig_sym(&m.leading_minor(k), gauge)?;
        let gap = d.spectrum().min_internal_gap();
        if k > 1 && gap < DEGENERACY_REL_TOL * scale {
            return Err(Error::GaugeAmbiguous { minor: k, gap });
        }
        let a = m.column_head(k);
        let signs = (0..k).map(|j| sign_indicator(dot(&a, d.vector(j)))).collect();
        per_step.push(signs);
    }
    SignIndicators::new(per_step)
}

/// Scalars of a single reconstruction step, all derived from the spectra
/// pair by trace arithmetic:
///
/// * `h` — the new diagonal entry, trace difference of the two minors;
/// * `r2` — squared norm of the new column, from traces of squares;
/// * `cubic_rho` — the quadratic form `<a|A^(n)|a>`, from traces of cubes;
/// * `inv_rho` — the form `<a|(A^(n))^-1|a>` via the determinant ratio,
///   present only when sigma^(n) stays clear of zero.
#[derive(Debug, Clone)]
pub struct StepScalars {
    h: f64,
    r2: f64,
    cubic_rho: f64,
    inv_rho: Option<f64>,
    // Retained so downstream consumers (the conic method) can recompute
    // shifted determinant ratios without re-threading the spectra.
    sigma_n: Spectrum,
    sigma_np1: Spectrum,
}

/// Absolute threshold under which an eigenvalue counts as zero for
/// inverse-based quantities.
pub const ZERO_SPECTRUM_TOL: f64 = 1e-8;

impl StepScalars {
    /// Derives all step scalars from a spectra pair.
    pub fn new(sigma_n: &Spectrum, sigma_np1: &Spectrum) -> Result<Self> {
        let n = sigma_n.n();
        if sigma_np1.n() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                got: sigma_np1.n(),
            });
        }
        let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
        let raw_r2 = 0.5 * (sigma_np1.power_sum(2) - sigma_n.power_sum(2) - h * h);
        let scale = sigma_np1.power_sum(2).max(1.0);
        if raw_r2 < -1e-12 * scale {
            return Err(Error::Inconsistent(format!(
                "squared column norm came out negative: {raw_r2:.6e}"
            )));
        }
        let r2 = raw_r2.max(0.0);
        let cubic_rho =
            (sigma_np1.power_sum(3) - sigma_n.power_sum(3) - 3.0 * h * r2 - h * h * h) / 3.0;
        let min_abs = sigma_n.values().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let inv_rho = if min_abs > ZERO_SPECTRUM_TOL {
            Some(h - sigma_np1.product() / sigma_n.product())
        } else {
            None
        };
        Ok(StepScalars {
            h,
            r2,
            cubic_rho,
            inv_rho,
            sigma_n: sigma_n.clone(),
            sigma_np1: sigma_np1.clone(),
        })
    }

    /// New diagonal entry A_{n+1,n+1}.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Squared Euclidean norm of the new column (radius of the candidate
    /// sphere is its square root).
    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Quadratic form `<a|A^(n)|a>`.
    pub fn cubic_rho(&self) -> f64 {
        self.cubic_rho
    }

    /// Quadratic form `<a|(A^(n))^-1|a>`, when defined.
    pub fn inv_rho(&self) -> Option<f64> {
        self.inv_rho
    }

    /// The minor spectrum the scalars were derived from.
    pub fn sigma_n(&self) -> &Spectrum {
        &self.sigma_n
    }

    /// The extended spectrum the scalars were derived from.
    pub fn sigma_np1(&self) -> &Spectrum {
        &self.sigma_np1
    }
}

/// Gap report for one adjacency in the minor chain.
#[derive(Debug, Clone, Copy)]
pub struct StepRegularity {
    /// Minor order n of the pair (sigma^(n), sigma^(n+1)).
    pub n: usize,
    /// Smallest internal gap of sigma^(n+1).
    pub min_internal_gap: f64,
    /// Smallest distance between sigma^(n) and sigma^(n+1).
    pub min_cross_gap: f64,
}

/// Result of [`check_regular`]: per-step gaps plus the overall verdict.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    /// Per-adjacency gap data, step n = 1 first.
    pub steps: Vec<StepRegularity>,
    /// True when every internal and cross gap is at least `tol`.
    pub regular: bool,
    /// The absolute gap threshold used.
    pub tol: f64,
    /// Smallest gap seen anywhere (internal or cross).
    pub worst_gap: f64,
}

impl RegularityReport {
    /// True when the data is regular but some gap falls in the warning band
    /// `[NEAR_REGULAR_LOW, NEAR_REGULAR_HIGH)`.
    pub fn near_regular(&self) -> bool {
        self.regular && self.worst_gap < NEAR_REGULAR_HIGH
    }
}

/// Checks that every spectrum is simple and adjacent spectra share no value,
/// all gaps measured against the absolute threshold `tol`.
pub fn check_regular(sd: &SpectralData, tol: f64) -> RegularityReport {
    let mut steps = Vec::new();
    let mut regular = true;
    let mut worst = f64::INFINITY;
    for n in 1..sd.order() {
        let internal = sd.minor(n + 1).min_internal_gap();
        let cross = sd.minor(n).min_cross_gap(sd.minor(n + 1));
        worst = worst.min(internal).min(cross);
        if internal < tol || cross < tol {
            regular = false;
        }
        steps.push(StepRegularity {
            n,
            min_internal_gap: internal,
            min_cross_gap: cross,
        });
    }
    RegularityReport {
        steps,
        regular,
        tol,
        worst_gap: worst,
    }
}

/// Checks regularity of a single spectra pair; `Ok` carries the smallest gap.
pub fn check_pair_regular(sigma_n: &Spectrum, sigma_np1: &Spectrum, tol: f64) -> Result<f64> {
    let internal_n = sigma_n.min_internal_gap();
    let internal_np1 = sigma_np1.min_internal_gap();
    let cross = sigma_n.min_cross_gap(sigma_np1);
    let gap = internal_n.min(internal_np1).min(cross);
    if gap < tol {
        return Err(Error::NotRegular {
            step: sigma_n.n(),
            gap,
        });
    }
    Ok(gap)
}

/// Convenience wrapper: eigendecomposition of a minor in the gauge used by
/// sign extraction, with the degeneracy guard applied.
pub fn eig_minor_gauged(m: &SymmetricMatrix) -> Result<EigDecomp> {
    eig_sym(m, Gauge::LastEntryPositive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_nested_spectra_of_worked_example() {
        let r2 = 2.0f64.sqrt();
        let m = SymmetricMatrix::from_rows(&[&[1.0, r2], &[r2, 2.0]]).unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        assert_eq!(sd.order(), 2);
        assert!((sd.minor(1).get(0) - 1.0).abs() < 1e-14);
        assert!((sd.minor(2).get(0) - 0.0).abs() < 1e-14);
        assert!((sd.minor(2).get(1) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_data_rejects_interlacing_violation() {
        let s1 = Spectrum::new(vec![5.0]).unwrap();
        let s2 = Spectrum::new(vec![0.0, 3.0]).unwrap();
        assert!(matches!(
            SpectralData::new(vec![s1, s2]),
            Err(Error::NotInterlacing { .. })
        ));
    }

    #[test]
    fn step_scalars_of_worked_example() {
        let s1 = Spectrum::new(vec![1.0]).unwrap();
        let s2 = Spectrum::new(vec![0.0, 3.0]).unwrap();
        let sc = StepScalars::new(&s1, &s2).unwrap();
        assert!((sc.h() - 2.0).abs() < 1e-14);
        assert!((sc.r2() - 2.0).abs() < 1e-14);
        // <a|A|a> with A = [1], a = sqrt(2): equals 2.
        assert!((sc.cubic_rho() - 2.0).abs() < 1e-14);
        // <a|A^-1|a> = 2; also h - det(A^(2))/det(A^(1)) = 2 - 0/1.
        assert!((sc.inv_rho().unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn step_scalars_trace_arithmetic() {
        let s2 = Spectrum::new(vec![0.0, 3.0]).unwrap();
        let s3 = Spectrum::new(vec![-1.0, 1.0, 5.0]).unwrap();
        let sc = StepScalars::new(&s2, &s3).unwrap();
        // h = (-1 + 1 + 5) - (0 + 3) = 2; r2 = (27 - 9 - 4)/2 = 7.
        assert!((sc.h() - 2.0).abs() < 1e-14);
        assert!((sc.r2() - 7.0).abs() < 1e-14);
        // 0 lies in sigma^(2): the inverse-based form is undefined.
        assert!(sc.inv_rho().is_none());
    }

    #[test]
    fn appending_decoupled_diagonal_gives_zero_column_norm() {
        let s1 = Spectrum::new(vec![1.0, 2.0]).unwrap();
        let s2 = Spectrum::new(vec![1.0, 2.0, 7.0]).unwrap();
        let sc = StepScalars::new(&s1, &s2).unwrap();
        assert!((sc.h() - 7.0).abs() < 1e-14);
        assert!(sc.r2().abs() < 1e-14);
    }

    #[test]
    fn sign_indicators_of_one_by_one_steps() {
        // A = [[1, a12], [a12, 2]]: the single step-1 sign is Sign(a12).
        for (a12, want) in [(0.7, 1i8), (-0.7, -1i8)] {
            let m = SymmetricMatrix::from_rows(&[&[1.0, a12], &[a12, 2.0]]).unwrap();
            let si = extract_sign_indicators(&m, Gauge::LastEntryPositive).unwrap();
            assert_eq!(si.step(1), &[want]);
        }
    }

    #[test]
    fn sign_indicators_match_projection_signs() {
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.4, -0.3, 0.2],
            &[0.4, 2.0, 0.6, -0.5],
            &[-0.3, 0.6, -1.0, 0.8],
            &[0.2, -0.5, 0.8, 3.0],
        ])
        .unwrap();
        let si = extract_sign_indicators(&m, Gauge::LastEntryPositive).unwrap();
        for n in 1..4 {
            let d = eig_sym(&m.leading_minor(n), Gauge::LastEntryPositive).unwrap();
            let a = m.column_head(n);
            for j in 0..n {
                assert_eq!(si.step(n)[j], sign_indicator(dot(&a, d.vector(j))));
            }
        }
    }

    #[test]
    fn gauge_ambiguous_on_degenerate_minor() {
        // Leading 2x2 minor is the identity: degenerate spectrum.
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.0, 0.5],
            &[0.0, 1.0, 0.25],
            &[0.5, 0.25, 2.0],
        ])
        .unwrap();
        assert!(matches!(
            extract_sign_indicators(&m, Gauge::LastEntryPositive),
            Err(Error::GaugeAmbiguous { minor: 2, .. })
        ));
    }

    #[test]
    fn regularity_report_flags_shared_values() {
        // diag(1,2,3): sigma^(1) = {1} is shared with sigma^(2) = {1,2}.
        let mut m = SymmetricMatrix::zeros(3);
        for (i, v) in [1.0, 2.0, 3.0].iter().enumerate() {
            m.set(i, i, *v);
        }
        let sd = extract_spectral_data(&m).unwrap();
        let rep = check_regular(&sd, REGULARITY_DEFAULT_TOL);
        assert!(!rep.regular);
        assert!(rep.worst_gap < 1e-12);
    }

    #[test]
    fn regularity_report_accepts_generic_matrix() {
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.4, -0.3],
            &[0.4, 2.5, 0.6],
            &[-0.3, 0.6, -1.0],
        ])
        .unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        let rep = check_regular(&sd, REGULARITY_DEFAULT_TOL);
        assert!(rep.regular);
        assert!(!rep.near_regular());
    }

    #[test]
    fn sign_convention_at_zero_is_positive() {
        assert_eq!(sign_indicator(0.0), 1);
        assert_eq!(sign_indicator(-0.0), 1);
        assert_eq!(sign_indicator(1e-300), 1);
        assert_eq!(sign_indicator(-1e-300), -1);
    }
}
