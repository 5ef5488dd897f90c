//! Banded-matrix reconstruction: the redundancy of knowing the bandwidth
//! turns each step's 2^n sign choices into a small search.
//!
//! For a matrix of bandwidth d, the new column at step n (n > d) must have
//! its leading n-d components equal to zero, i.e. its tail must exhaust the
//! whole column norm (the sphere condition). Three engines solve this:
//!
//! * [`banded_step`]: pruned enumeration over sign vectors (any d);
//! * [`penta_lines_step`]: for d = 2, intersects the closed-form candidate
//!   lines with the radius circle analytically;
//! * [`penta_conics_step`]: for d = 2, intersects the circle with two conic
//!   sections built from the minor and its inverse — no eigenvectors needed.
//!
//! Generic steps yield exactly two antipodal candidates. The >2-candidate
//! degeneracies (the alpha-condition for lines, commuting forms for conics)
//! are detected and flagged, never silently dropped.

use crate::cauchy::{consistency_residual, xi_squared};
use crate::eig::{eig_sym, EigDecomp, Gauge};
use crate::error::{Error, Result};
use crate::mat::{dot, SymmetricMatrix};
use crate::spectral::{
    check_pair_regular, sign_indicator, Spectrum, SpectralData, StepScalars, NEAR_REGULAR_LOW,
    ZERO_SPECTRUM_TOL,
};
use crate::telescopic::{telescopic_step, StepReport};

/// Columns closer than this are merged into one candidate.
pub const CANDIDATE_DEDUP_TOL: f64 = 1e-9;
/// Relative tolerance for matching intersection points across lines/conics.
pub const POINT_MATCH_REL_TOL: f64 = 1e-7;
/// Relative threshold on the commutator of the two conic forms below which
/// they share principal axes (the four-solution degeneracy).
pub const DEGENERATE_CONIC_TOL: f64 = 1e-7;
/// Cap on the exponent of the branch count a chained reconstruction may track.
pub const MAX_BRANCH_EXP: usize = 12;

/// Default sphere-condition tolerance, scaled with step size and column norm.
pub fn sphere_eps_default(n: usize, r2: f64) -> f64 {
    (1e-10 * n as f64 * r2).max(1e-8)
}

/// Residual of the sphere condition: how far the tail of a candidate column
/// is from carrying the full squared norm `r2`.
pub fn sphere_residual(column: &[f64], d: usize, r2: f64) -> f64 {
    let n = column.len();
    let tail2: f64 = column[n.saturating_sub(d)..].iter().map(|x| x * x).sum();
    (tail2 - r2).abs()
}

/// The candidate column for a sign vector: sum of s_r xi_r v^(n)(r), summed
/// in index order (callers comparing candidate sets rely on the exact
/// floating-point ordering of this loop).
pub fn sign_column(eig_n: &EigDecomp, xi: &[f64], signs: &[i8]) -> Vec<f64> {
    let n = eig_n.n();
    let mut col = vec![0.0; n];
    for r in 0..n {
        let c = f64::from(signs[r]) * xi[r];
        let v = eig_n.vector(r);
        for (ci, vi) in col.iter_mut().zip(v) {
            *ci += c * vi;
        }
    }
    col
}

/// One of the 2n candidate hyperplanes <normal | tail> = offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    /// Last-d components of an eigenvector of the minor.
    pub normal: Vec<f64>,
    /// Signed projection value (+xi_r or -xi_r).
    pub offset: f64,
}

impl Hyperplane {
    /// Signed distance defect of `point` from the plane (not normalized).
    pub fn residual(&self, point: &[f64]) -> f64 {
        dot(&self.normal, point) - self.offset
    }
}

/// A quadratic form a x^2 + 2 b xy + c y^2 = rhs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rhs: f64,
}

impl ConicForm {
    /// Defect of the form at (x, y); zero exactly on the conic.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + 2.0 * self.b * x * y + self.c * y * y - self.rhs
    }
}

/// One admissible column for a reconstruction step.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// The candidate column a^(n).
    pub column: Vec<f64>,
    /// Sign vector s_r relative to the eigendecomposition the step used.
    pub signs: Vec<i8>,
    /// Acceptance residual (sphere defect or worst line/conic defect).
    pub residual: f64,
}

/// All admissible columns of one step, with degeneracy flags.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    /// More than two candidates survived a constrained step.
    pub too_many: bool,
    /// The two conic forms commuted (conic method only).
    pub degenerate_conics: bool,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Merges candidates whose columns agree within `tol` (max-abs),
    /// keeping the first of each group.
    pub fn deduped(&self, tol: f64) -> CandidateSet {
        let mut kept: Vec<Candidate> = Vec::new();
        for c in &self.candidates {
            let dup = kept.iter().any(|k| {
                k.column
                    .iter()
                    .zip(&c.column)
                    .all(|(a, b)| (a - b).abs() <= tol)
            });
            if !dup {
                kept.push(c.clone());
            }
        }
        CandidateSet {
            candidates: kept,
            too_many: self.too_many,
            degenerate_conics: self.degenerate_conics,
        }
    }

    /// True when the set is closed under negation (columns compared exactly).
    pub fn antipodal(&self) -> bool {
        self.candidates.iter().all(|c| {
            let neg: Vec<f64> = c.column.iter().map(|x| -x).collect();
            self.candidates.iter().any(|o| o.column == neg)
        })
    }
}

pub(crate) fn signs_from_mask(n: usize, mask: usize) -> Vec<i8> {
    (0..n)
        .map(|r| if (mask >> r) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Finds all sign vectors whose candidate column is compatible with
/// bandwidth `d` (leading n-d components vanish within `eps`).
///
/// # Input
///
/// `eps = None` uses [`sphere_eps_default`]. For n <= d the bandwidth
/// imposes no constraint and all 2^n sign vectors are returned (no
/// `too_many` flag in that regime).
///
/// # Output
///
/// The deduplicated candidate set, generically two antipodal members for
/// n > d; `too_many` is set when more survive. An empty search is an error
/// (`NoSolution`): the spectra are incompatible with the claimed bandwidth.
///
/// # Notes
///
/// The search fixes the sign of the heaviest direction and emits each
/// survivor together with its antipode, pruning subtrees whose partial
/// leading-component sum can no longer return to zero. Pruning bounds are
/// slack enough that no true candidate is lost; every emitted candidate is
/// re-verified against the exact sphere residual.
pub fn banded_step(
    eig_n: &EigDecomp,
    sigma_np1: &Spectrum,
    d: usize,
    eps: Option<f64>,
) -> Result<CandidateSet> {
    let n = eig_n.n();
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    if d == 0 {
        return Err(Error::InvalidInput("bandwidth must be at least 1".into()));
    }
    let sigma_n = eig_n.spectrum();
    check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
    let scalars = StepScalars::new(&sigma_n, sigma_np1)?;
    let r2 = scalars.r2();
    let xi: Vec<f64> = xi_squared(&sigma_n, sigma_np1)?
        .iter()
        .map(|v| v.sqrt())
        .collect();
    let eps = eps.unwrap_or_else(|| sphere_eps_default(n, r2));

    if n <= d {
        // Unconstrained regime: every sign choice is admissible.
        let mut set = CandidateSet::default();
        for mask in 0..(1usize << n) {
            let signs = signs_from_mask(n, mask);
            let column = sign_column(eig_n, &xi, &signs);
            let residual = sphere_residual(&column, d, r2);
            set.candidates.push(Candidate {
                column,
                signs,
                residual,
            });
        }
        return Ok(set.deduped(CANDIDATE_DEDUP_TOL));
    }

    if n > 62 {
        return Err(Error::TooLarge { n, cap: 62 });
    }

    // Leading-component contributions xi_r * v(r)_{1..n-d}, the vectors the
    // signed sum must cancel.
    let lead: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            eig_n.vector(r)[..n - d]
                .iter()
                .map(|v| xi[r] * v)
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let weight = |r: usize| norm_slice(&lead[r]);
    perm.sort_by(|&a, &b| weight(b).partial_cmp(&weight(a)).unwrap());
    let mut rem = vec![0.0; n + 1];
    for i in (0..n).rev() {
        rem[i] = rem[i + 1] + weight(perm[i]);
    }
    let sum_xi2: f64 = xi.iter().map(|x| x * x).sum();
    // The exact leading norm of a true candidate is bounded by eps plus the
    // Parseval defect of the data; the factor 4 absorbs accumulation error
    // in the partial sums so that pruning never loses a real solution.
    let eps_prune = eps + (sum_xi2 - r2).abs();

    let mut reps: Vec<Vec<i8>> = Vec::new();
    let mut partial = vec![0.0; n - d];
    let mut signs = vec![1i8; n];
    dfs_signs(
        0, &mut partial, &mut signs, &perm, &lead, &rem, eps_prune, &mut reps,
    );

    let mut set = CandidateSet::default();
    for s in reps {
        let column = sign_column(eig_n, &xi, &s);
        let residual = sphere_residual(&column, d, r2);
        if residual <= eps {
            let anti_signs: Vec<i8> = s.iter().map(|x| -x).collect();
            let anti_column: Vec<f64> = column.iter().map(|x| -x).collect();
            set.candidates.push(Candidate {
                column,
                signs: s,
                residual,
            });
            set.candidates.push(Candidate {
                column: anti_column,
                signs: anti_signs,
                residual,
            });
        }
    }
    let mut set = set.deduped(CANDIDATE_DEDUP_TOL);
    if set.is_empty() {
        return Err(Error::NoSolution { step: n });
    }
    set.too_many = set.len() > 2;
    Ok(set)
}

fn norm_slice(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[allow(clippy::too_many_arguments)]
fn dfs_signs(
    depth: usize,
    partial: &mut Vec<f64>,
    signs: &mut Vec<i8>,
    perm: &[usize],
    lead: &[Vec<f64>],
    rem: &[f64],
    eps_prune: f64,
    out: &mut Vec<Vec<i8>>,
) {
    let slack = (norm_slice(partial) - rem[depth]).max(0.0);
    if slack * slack > 4.0 * eps_prune {
        return;
    }
    if depth == perm.len() {
        out.push(signs.clone());
        return;
    }
    let r = perm[depth];
    let choices: &[i8] = if depth == 0 { &[1] } else { &[1, -1] };
    for &s in choices {
        signs[r] = s;
        for (p, l) in partial.iter_mut().zip(&lead[r]) {
            *p += f64::from(s) * l;
        }
        dfs_signs(depth + 1, partial, signs, perm, lead, rem, eps_prune, out);
        for (p, l) in partial.iter_mut().zip(&lead[r]) {
            *p -= f64::from(s) * l;
        }
    }
    signs[r] = 1;
}

/// Pentadiagonal step via line-circle intersections (d = 2).
///
/// Each eigenvector of the minor pins the candidate tail (x, y) to one of
/// two parallel lines; all n line pairs must agree, and the tail lies on
/// the circle of radius sqrt(R2). The intersections are computed from the
/// single best-conditioned line pair by the quadratic formula and verified
/// against every other pair — no root-finding.
///
/// # Output
///
/// Generic data yields exactly two antipodal candidates; four survive
/// precisely when the eigenvector directions collapse into two
/// perpendicular classes (see [`alpha_condition`]), which for n = 2 is
/// automatic. Candidate columns are the zero-padded tails.
pub fn penta_lines_step(eig_n: &EigDecomp, sigma_np1: &Spectrum) -> Result<CandidateSet> {
    let n = eig_n.n();
    if n < 2 {
        return Err(Error::NotPentaStep { d: n });
    }
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let sigma_n = eig_n.spectrum();
    check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
    let scalars = StepScalars::new(&sigma_n, sigma_np1)?;
    let r2 = scalars.r2();
    let xi: Vec<f64> = xi_squared(&sigma_n, sigma_np1)?
        .iter()
        .map(|v| v.sqrt())
        .collect();

    let tails: Vec<[f64; 2]> = (0..n)
        .map(|r| {
            let v = eig_n.vector(r);
            [v[n - 2], v[n - 1]]
        })
        .collect();
    let planes: Vec<[Hyperplane; 2]> = (0..n)
        .map(|r| {
            [
                Hyperplane {
                    normal: tails[r].to_vec(),
                    offset: xi[r],
                },
                Hyperplane {
                    normal: tails[r].to_vec(),
                    offset: -xi[r],
                },
            ]
        })
        .collect();

    // Best-conditioned pair: the completeness identity makes the largest
    // tail norm at least sqrt(2/n), so the division below is safe.
    let rstar = (0..n)
        .max_by(|&a, &b| {
            norm_slice(&tails[a])
                .partial_cmp(&norm_slice(&tails[b]))
                .unwrap()
        })
        .unwrap();
    let u = tails[rstar];
    let un2 = u[0] * u[0] + u[1] * u[1];
    let tol = POINT_MATCH_REL_TOL * r2.sqrt().max(1.0);

    let mut points: Vec<[f64; 2]> = Vec::new();
    for tau in [1.0f64, -1.0] {
        let offset = tau * xi[rstar];
        let disc = r2 - offset * offset / un2;
        if disc < -1e-12 * r2.max(1.0) {
            continue;
        }
        let q = disc.max(0.0).sqrt();
        let base = [offset * u[0] / un2, offset * u[1] / un2];
        let perp = [-u[1] / un2.sqrt(), u[0] / un2.sqrt()];
        for s in [1.0f64, -1.0] {
            points.push([base[0] + s * q * perp[0], base[1] + s * q * perp[1]]);
        }
    }

    let mut set = CandidateSet::default();
    for p in points {
        let mut worst = 0.0f64;
        for (r, pl) in planes.iter().enumerate() {
            let proj = dot(&pl[0].normal, &p);
            let defect = (proj.abs() - xi[r]).abs();
            worst = worst.max(defect);
        }
        if worst <= tol {
            let mut column = vec![0.0; n];
            column[n - 2] = p[0];
            column[n - 1] = p[1];
            let signs: Vec<i8> = (0..n)
                .map(|r| sign_indicator(dot(&planes[r][0].normal, &p)))
                .collect();
            set.candidates.push(Candidate {
                column,
                signs,
                residual: worst,
            });
        }
    }
    let mut set = set.deduped(CANDIDATE_DEDUP_TOL);
    if set.is_empty() {
        return Err(Error::NoIntersection {
            detail: format!("no tail point satisfies all {n} line pairs on the circle"),
        });
    }
    set.too_many = set.len() > 2;
    Ok(set)
}

/// Detects the four-solution eigenvector degeneracy for pentadiagonal steps.
///
/// Fires when the last-two-component directions of all eigenvectors fall
/// into two perpendicular classes: components satisfy v_{n-1}/v_n = alpha
/// on the first class and -1/alpha on the second, with
/// alpha^2 = 1/S - 1, S = sum of v_n^2 over the first class (a consequence
/// of orthonormality, verified numerically).
///
/// # Output
///
/// `Some((class, alpha))` with the 0-based indices of the alpha-class, or
/// `None`. The class containing eigenvector 0 is reported, swapped if its
/// last components all vanish (alpha would be infinite).
pub fn alpha_condition(eig_n: &EigDecomp, tol: f64) -> Option<(Vec<usize>, f64)> {
    let n = eig_n.n();
    if n < 2 {
        return None;
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let ang_dist = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(pi);
        d.min(pi - d)
    };
    let mut angles = Vec::with_capacity(n);
    for r in 0..n {
        let v = eig_n.vector(r);
        let (x, y) = (v[n - 2], v[n - 1]);
        if x.hypot(y) < 1e-12 {
            return None;
        }
        let mut phi = y.atan2(x);
        if phi < 0.0 {
            phi += pi;
        }
        angles.push(phi);
    }
    let reference = angles[0];
    let mut class_a = Vec::new();
    let mut class_b = Vec::new();
    for (r, &phi) in angles.iter().enumerate() {
        if ang_dist(phi, reference) <= tol {
            class_a.push(r);
        } else if ang_dist(phi, reference + half_pi) <= tol {
            class_b.push(r);
        } else {
            return None;
        }
    }
    let tail_sq = |set: &[usize]| {
        set.iter()
            .map(|&r| {
                let v = eig_n.vector(r);
                v[n - 1] * v[n - 1]
            })
            .sum::<f64>()
    };
    let tail_max = |set: &[usize]| {
        set.iter()
            .map(|&r| eig_n.vector(r)[n - 1].abs())
            .fold(0.0f64, f64::max)
    };
    let (class_i, _class_j) = if tail_max(&class_a) < 1e-9 && !class_b.is_empty() {
        (class_b, class_a)
    } else {
        (class_a, class_b)
    };
    let s_i = tail_sq(&class_i);
    if !(s_i > 1e-12) {
        return None;
    }
    let alpha_mag = (1.0 / s_i - 1.0).max(0.0).sqrt();
    // Signed ratio from the best-conditioned member of the class.
    let witness = *class_i
        .iter()
        .max_by(|&&a, &&b| {
            eig_n.vector(a)[n - 1]
                .abs()
                .partial_cmp(&eig_n.vector(b)[n - 1].abs())
                .unwrap()
        })
        .unwrap();
    let v = eig_n.vector(witness);
    let ratio = v[n - 2] / v[n - 1];
    if (ratio.abs() - alpha_mag).abs() > (1.0 + alpha_mag) * 1e3 * tol.max(1e-12) {
        return None;
    }
    let alpha = if ratio < 0.0 { -alpha_mag } else { alpha_mag };
    Some((class_i, alpha))
}

enum ConicCut {
    Points(Vec<[f64; 2]>),
    /// The form is a multiple of the circle itself: no extra constraint.
    Unconstrained,
}

/// Intersects the circle x^2 + y^2 = r2 with a conic form analytically.
fn circle_conic(r2: f64, form: &ConicForm) -> ConicCut {
    let p = 0.5 * (form.a - form.c);
    let q = form.b;
    let s = form.rhs / r2 - 0.5 * (form.a + form.c);
    let amp = p.hypot(q);
    let scale = form.a.abs() + form.b.abs() + form.c.abs();
    if amp <= 1e-13 * scale.max(1e-300) {
        if s.abs() <= 1e-9 * scale.max(1e-300) {
            return ConicCut::Unconstrained;
        }
        return ConicCut::Points(Vec::new());
    }
    let ratio = s / amp;
    if ratio.abs() > 1.0 + 1e-9 {
        return ConicCut::Points(Vec::new());
    }
    let delta = ratio.clamp(-1.0, 1.0).acos();
    let base = q.atan2(p);
    let radius = r2.sqrt();
    let mut pts = Vec::with_capacity(4);
    for two_t in [base + delta, base - delta] {
        for add in [0.0, std::f64::consts::PI] {
            let t = 0.5 * two_t + add;
            pts.push([radius * t.cos(), radius * t.sin()]);
        }
    }
    ConicCut::Points(pts)
}

/// Pentadiagonal step via conic sections (d = 2), using only the minor's
/// entries — no eigenvectors.
///
/// The tail (x, y) lies on the circle of radius sqrt(R2) and on two conics:
/// one built from the bottom-right 2x2 of the minor (coefficients shifted
/// by h) with the cubic trace scalar on the right-hand side, one from the
/// bottom-right 2x2 of the minor's inverse with the inverse-trace scalar.
/// A zero eigenvalue in the minor is handled by shifting the whole problem
/// (solutions are invariant under A -> A + cI with h -> h + c).
///
/// # Output
///
/// The common intersection points as candidates (signs are reported
/// relative to the minor's own gauged eigendecomposition);
/// `degenerate_conics` is set when the two forms commute, in which case
/// they intersect the circle in the same (up to) four points and the
/// method alone cannot prune to two.
pub fn penta_conics_step(minor: &SymmetricMatrix, scalars: &StepScalars) -> Result<CandidateSet> {
    let n = minor.n();
    if n < 2 {
        return Err(Error::NotPentaStep { d: n });
    }
    if scalars.sigma_n().n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: scalars.sigma_n().n(),
        });
    }

    // Shift away a zero eigenvalue if needed.
    let min_abs = scalars
        .sigma_n()
        .values()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let (work, scal);
    if min_abs <= ZERO_SPECTRUM_TOL {
        let c = 1.0 - scalars.sigma_n().get(0);
        let mut shifted = minor.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) + c);
        }
        let sn = Spectrum::new(scalars.sigma_n().values().iter().map(|v| v + c).collect())?;
        let snp1 = Spectrum::new(scalars.sigma_np1().values().iter().map(|v| v + c).collect())?;
        work = shifted;
        scal = StepScalars::new(&sn, &snp1)?;
    } else {
        work = minor.clone();
        scal = scalars.clone();
    }

    let h = scal.h();
    let r2 = scal.r2();
    if !(r2 > 0.0) {
        return Err(Error::Inconsistent(
            "zero column norm leaves the tail undetermined".into(),
        ));
    }
    let conic1 = ConicForm {
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
    let inv_rho = scal.inv_rho().ok_or_else(|| {
        Error::ZeroSpectrum {
            min_abs: scal
                .sigma_n()
                .values()
                .iter()
                .fold(f64::INFINITY, |m, v| m.min(v.abs())),
        }
    })?;
    let conic2 = ConicForm {
        a: z1[n - 2],
        b: 0.5 * (z1[n - 1] + z2[n - 2]),
        c: z2[n - 1],
        rhs: inv_rho,
    };

    let m1_norm = (conic1.a * conic1.a + 2.0 * conic1.b * conic1.b + conic1.c * conic1.c).sqrt();
    let m2_norm = (conic2.a * conic2.a + 2.0 * conic2.b * conic2.b + conic2.c * conic2.c).sqrt();
    let commutator = conic1.a * conic2.b - conic2.a * conic1.b + conic1.b * conic2.c
        - conic2.b * conic1.c;
    let degenerate = commutator.abs() <= DEGENERATE_CONIC_TOL * m1_norm * m2_norm;

    let cut1 = circle_conic(r2, &conic1);
    let cut2 = circle_conic(r2, &conic2);
    let tol = POINT_MATCH_REL_TOL * r2.sqrt().max(1.0);
    let points: Vec<[f64; 2]> = match (cut1, cut2) {
        (ConicCut::Points(a), ConicCut::Points(b)) => a
            .into_iter()
            .filter(|p| {
                b.iter()
                    .any(|q| (p[0] - q[0]).hypot(p[1] - q[1]) <= tol)
            })
            .collect(),
        (ConicCut::Unconstrained, ConicCut::Points(b)) => b,
        (ConicCut::Points(a), ConicCut::Unconstrained) => a,
        (ConicCut::Unconstrained, ConicCut::Unconstrained) => {
            return Err(Error::Inconsistent(
                "both conic forms are multiples of the circle; the tail is a continuum".into(),
            ))
        }
    };

    let eig = eig_sym(&work, Gauge::LastEntryPositive)?;
    let mut set = CandidateSet {
        degenerate_conics: degenerate,
        ..CandidateSet::default()
    };
    for p in points {
        let worst = conic1
            .residual(p[0], p[1])
            .abs()
            .max(conic2.residual(p[0], p[1]).abs());
        let mut column = vec![0.0; n];
        column[n - 2] = p[0];
        column[n - 1] = p[1];
        let signs: Vec<i8> = (0..n)
            .map(|r| {
                let v = eig.vector(r);
                sign_indicator(v[n - 2] * p[0] + v[n - 1] * p[1])
            })
            .collect();
        set.candidates.push(Candidate {
            column,
            signs,
            residual: worst,
        });
    }
    let mut set = set.deduped(CANDIDATE_DEDUP_TOL);
    if set.is_empty() {
        return Err(Error::NoIntersection {
            detail: "the two conics share no point on the circle".into(),
        });
    }
    set.too_many = set.len() > 2;
    set.degenerate_conics = degenerate;
    Ok(set)
}

/// Outcome of the necessary-condition screen for bandwidth feasibility.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    /// Per-direction ratios |xi_r| / ||last-d components of v(r)||.
    pub ratios: Vec<f64>,
    /// Indices whose ratio exceeds the radius.
    pub violations: Vec<usize>,
    /// True when no direction violates the bound.
    pub feasible: bool,
}

/// Checks the per-direction necessary condition |xi_r| <= R ||tail_d(v(r))||.
///
/// A projection cannot exceed the column radius times the tail norm of its
/// eigenvector when the column is supported on the last d coordinates; any
/// violating r certifies the data cannot come from a bandwidth-d matrix.
/// A zero xi_r passes for every R >= 0.
pub fn feasibility_certificate(
    eig_n: &EigDecomp,
    xi: &[f64],
    r: f64,
    d: usize,
) -> FeasibilityReport {
    let n = eig_n.n();
    let dd = d.min(n);
    let mut ratios = Vec::with_capacity(xi.len());
    let mut violations = Vec::new();
    for (idx, &x) in xi.iter().enumerate() {
        let tail = norm_slice(&eig_n.vector(idx)[n - dd..]);
        let ratio = if x.abs() == 0.0 {
            0.0
        } else if tail == 0.0 {
            f64::INFINITY
        } else {
            x.abs() / tail
        };
        if ratio > r * (1.0 + 1e-12) + 1e-12 {
            violations.push(idx);
        }
        ratios.push(ratio);
    }
    FeasibilityReport {
        feasible: violations.is_empty(),
        ratios,
        violations,
    }
}

/// Which engine resolves the constrained steps of a chained reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMethod {
    /// Pruned sign search (any bandwidth).
    Banded,
    /// Line-circle intersections (bandwidth 2 only).
    PentaLines,
    /// Conic-circle intersections (bandwidth 2 only).
    PentaConics,
}

struct Branch {
    eig: EigDecomp,
    matrix: SymmetricMatrix,
}

/// Reconstructs a bandwidth-d matrix from nested spectra plus one sign per
/// column, failing unless the answer is unique.
///
/// `column_signs[c-2]` is the sign of A_{max(1,c-d),c} (1-based), the
/// outermost in-band entry of column c — the same per-column freedom the
/// tridiagonal case leaves open. See
/// [`reconstruct_banded_branches`] to retrieve all surviving branches
/// instead of erroring on ambiguity.
pub fn reconstruct_banded(
    sd: &SpectralData,
    d: usize,
    column_signs: &[i8],
    eps: Option<f64>,
) -> Result<SymmetricMatrix> {
    let (mut finals, _) = reconstruct_banded_with_report(sd, d, column_signs, eps, StepMethod::Banded)?;
    match finals.len() {
        1 => Ok(finals.pop().unwrap()),
        k => Err(Error::Ambiguous { branches: k }),
    }
}

/// As [`reconstruct_banded`], but returns every branch that survives all
/// constraints (deduplicated), instead of requiring uniqueness.
pub fn reconstruct_banded_branches(
    sd: &SpectralData,
    d: usize,
    column_signs: &[i8],
    eps: Option<f64>,
) -> Result<Vec<SymmetricMatrix>> {
    Ok(reconstruct_banded_with_report(sd, d, column_signs, eps, StepMethod::Banded)?.0)
}

/// Full chained reconstruction with per-step reports and method selection.
///
/// Steps with n <= d are unconstrained: the column sign pins one of 2^n
/// sign choices and the rest fan out into branches (2^(d(d-1)/2) in total
/// for the whole head), which later constrained steps prune — wrong head
/// branches die with no admissible candidate. Constrained steps run the
/// chosen engine, keep the candidates matching the column sign, and
/// advance each branch by the closed-form growth step, so every branch
/// carries an exact eigendecomposition chain.
pub fn reconstruct_banded_with_report(
    sd: &SpectralData,
    d: usize,
    column_signs: &[i8],
    eps: Option<f64>,
    method: StepMethod,
) -> Result<(Vec<SymmetricMatrix>, Vec<StepReport>)> {
    let order = sd.order();
    if d == 0 {
        return Err(Error::InvalidInput("bandwidth must be at least 1".into()));
    }
    if column_signs.len() + 1 != order {
        return Err(Error::Dimension {
            expected: order - 1,
            got: column_signs.len(),
        });
    }
    if method != StepMethod::Banded && d != 2 {
        return Err(Error::InvalidInput(format!(
            "pentadiagonal engines require bandwidth 2, got {d}"
        )));
    }

    let mut mat1 = SymmetricMatrix::zeros(1);
    mat1.set(0, 0, sd.minor(1).get(0));
    let mut branches = vec![Branch {
        eig: EigDecomp::single(sd.minor(1).get(0)),
        matrix: mat1,
    }];
    let mut reports = Vec::with_capacity(order - 1);

    for n in 1..order {
        let sigma_np1 = sd.minor(n + 1);
        let target = column_signs[n - 1];
        let arbitration_idx = n.saturating_sub(d);
        let mut next: Vec<Branch> = Vec::new();
        let mut total_candidates = 0usize;
        let mut alpha_hit = false;
        let mut conic_degenerate = false;
        let mut near_regular = false;
        let mut last_err: Option<Error> = None;

        for branch in &branches {
            if n <= d {
                // Unconstrained head step: enumerate, filter by column sign.
                let sigma_n = branch.eig.spectrum();
                check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
                let xi: Vec<f64> = xi_squared(&sigma_n, sigma_np1)?
                    .iter()
                    .map(|v| v.sqrt())
                    .collect();
                for mask in 0..(1usize << n) {
                    let signs = signs_from_mask(n, mask);
                    let column = sign_column(&branch.eig, &xi, &signs);
                    total_candidates += 1;
                    if sign_indicator(column[0]) != target {
                        continue;
                    }
                    let step = telescopic_step(&branch.eig, sigma_np1, &signs)?;
                    near_regular |= step.near_regular;
                    next.push(grow_branch(branch, &step));
                }
            } else {
                let set = match method {
                    StepMethod::Banded => banded_step(&branch.eig, sigma_np1, d, eps),
                    StepMethod::PentaLines => penta_lines_step(&branch.eig, sigma_np1),
                    StepMethod::PentaConics => {
                        let scalars = StepScalars::new(&branch.eig.spectrum(), sigma_np1)?;
                        penta_conics_step(&branch.matrix, &scalars)
                    }
                };
                let set = match set {
                    Ok(set) => set,
                    Err(e @ (Error::NoSolution { .. } | Error::NoIntersection { .. })) => {
                        // This head branch is incompatible with the band.
                        last_err = Some(e);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                total_candidates += set.len();
                conic_degenerate |= set.degenerate_conics;
                if method == StepMethod::PentaLines
                    && alpha_condition(&branch.eig, POINT_MATCH_REL_TOL).is_some()
                {
                    alpha_hit = true;
                }
                for cand in &set.candidates {
                    if sign_indicator(cand.column[arbitration_idx]) != target {
                        continue;
                    }
                    // Re-derive signs against this branch's decomposition:
                    // engine-internal gauges need not match the chain's.
                    let signs: Vec<i8> = (0..n)
                        .map(|r| sign_indicator(dot(eig_n_vector(branch, r), &cand.column)))
                        .collect();
                    let step = telescopic_step(&branch.eig, sigma_np1, &signs)?;
                    near_regular |= step.near_regular;
                    next.push(grow_branch(branch, &step));
                }
            }
        }

        if next.is_empty() {
            return Err(last_err.unwrap_or(Error::NoSolution { step: n }));
        }
        if next.len() > (1usize << MAX_BRANCH_EXP) {
            return Err(Error::TooLarge {
                n: next.len().ilog2() as usize + 1,
                cap: MAX_BRANCH_EXP,
            });
        }

        let sigma_n = branches[0].eig.spectrum();
        let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
        let mut report = StepReport::new(
            match (n <= d, method) {
                (true, _) => "head",
                (false, StepMethod::Banded) => "banded",
                (false, StepMethod::PentaLines) => "penta-lines",
                (false, StepMethod::PentaConics) => "penta-conics",
            },
            n + 1,
        );
        report.residual = consistency_residual(&sigma_n, sigma_np1, h)?;
        report.near_regular = near_regular;
        report.candidates = total_candidates;
        report.alpha_hit = alpha_hit;
        report.conic_degenerate = conic_degenerate;
        report.branches = next.len();
        reports.push(report);

        branches = next;
    }

    // Enforce the band exactly on the way out and merge coincident branches.
    let mut finals: Vec<SymmetricMatrix> = Vec::new();
    for b in branches {
        let n = b.matrix.n();
        let mut clean = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n.min(i + d + 1) {
                clean.set(i, j, b.matrix.get(i, j));
            }
        }
        let clean = clean.with_bandwidth(d)?;
        if !finals.iter().any(|f| f.max_abs_diff(&clean) < 1e-9) {
            finals.push(clean);
        }
    }
    Ok((finals, reports))
}

fn eig_n_vector<'a>(branch: &'a Branch, r: usize) -> &'a [f64] {
    branch.eig.vector(r)
}

fn grow_branch(branch: &Branch, step: &crate::telescopic::StepResult) -> Branch {
    let n = branch.matrix.n();
    let mut grown = SymmetricMatrix::zeros(n + 1);
    for i in 0..n {
        for j in i..n {
            grown.set(i, j, branch.matrix.get(i, j));
        }
        grown.set(i, n, step.column[i]);
    }
    grown.set(n, n, step.h);
    Branch {
        eig: step.eig_next.clone(),
        matrix: grown,
    }
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

    fn step_data(m: &SymmetricMatrix, n: usize) -> (EigDecomp, Spectrum) {
        let minor = m.leading_minor(n);
        let next = m.leading_minor(n + 1);
        let eig = eig_sym(&minor, Gauge::LastEntryPositive).unwrap();
        let snp1 = eig_sym(&next, Gauge::Custom).unwrap().spectrum();
        (eig, snp1)
    }

    #[test]
    fn jacobi_step_gives_plus_minus_tail() {
        let t = SymmetricMatrix::from_rows(&[
            &[2.0, 1.0, 0.0, 0.0],
            &[1.0, 2.0, 1.0, 0.0],
            &[0.0, 1.0, 2.0, 1.0],
            &[0.0, 0.0, 1.0, 2.0],
        ])
        .unwrap();
        let (eig3, s4) = step_data(&t, 3);
        let set = banded_step(&eig3, &s4, 1, None).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.antipodal());
        assert!(!set.too_many);
        for c in &set.candidates {
            assert!(c.column[0].abs() < 1e-9);
            assert!(c.column[1].abs() < 1e-9);
            assert!((c.column[2].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn penta_step_two_antipodal_candidates_match_source() {
        let m = penta_six();
        let (eig4, s5) = step_data(&m, 4);
        let set = banded_step(&eig4, &s5, 2, None).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.antipodal());
        let source = [m.get(0, 4), m.get(1, 4), m.get(2, 4), m.get(3, 4)];
        let best = set
            .candidates
            .iter()
            .map(|c| {
                c.column
                    .iter()
                    .zip(&source)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-7, "no candidate matches the source column: {best:.3e}");
    }

    #[test]
    fn dense_data_with_bandwidth_one_is_infeasible() {
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.7, 0.5, 0.3],
            &[0.7, 2.0, 0.6, 0.4],
            &[0.5, 0.6, 3.0, 0.8],
            &[0.3, 0.4, 0.8, 4.0],
        ])
        .unwrap();
        let (eig3, s4) = step_data(&m, 3);
        let r = banded_step(&eig3, &s4, 1, None);
        assert!(matches!(r, Err(Error::NoSolution { .. })));
    }

    #[test]
    fn pruned_search_matches_exhaustive_enumeration() {
        let m = penta_six();
        for n in [3usize, 4, 5] {
            let (eig, snp1) = step_data(&m, n);
            let fast = banded_step(&eig, &snp1, 2, None).unwrap();
            // Reference: plain enumeration over every sign vector.
            let sigma_n = eig.spectrum();
            let scal = StepScalars::new(&sigma_n, &snp1).unwrap();
            let xi: Vec<f64> = xi_squared(&sigma_n, &snp1)
                .unwrap()
                .iter()
                .map(|v| v.sqrt())
                .collect();
            let eps = sphere_eps_default(n, scal.r2());
            let mut slow = CandidateSet::default();
            for mask in 0..(1usize << n) {
                let signs = signs_from_mask(n, mask);
                let column = sign_column(&eig, &xi, &signs);
                let residual = sphere_residual(&column, 2, scal.r2());
                if residual <= eps {
                    slow.candidates.push(Candidate {
                        column,
                        signs,
                        residual,
                    });
                }
            }
            let slow = slow.deduped(CANDIDATE_DEDUP_TOL);
            let mut a: Vec<&Candidate> = fast.candidates.iter().collect();
            let mut b: Vec<&Candidate> = slow.candidates.iter().collect();
            a.sort_by(|x, y| x.signs.cmp(&y.signs));
            b.sort_by(|x, y| x.signs.cmp(&y.signs));
            assert_eq!(a.len(), b.len(), "candidate count differs at n={n}");
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.signs, y.signs);
                assert_eq!(x.column, y.column, "columns must agree bitwise");
            }
        }
    }

    #[test]
    fn lines_step_agrees_with_sign_search() {
        let m = penta_six();
        let (eig4, s5) = step_data(&m, 4);
        let lines = penta_lines_step(&eig4, &s5).unwrap();
        let search = banded_step(&eig4, &s5, 2, None).unwrap();
        assert_eq!(lines.len(), 2);
        assert!(lines.antipodal());
        for c in &lines.candidates {
            let best = search
                .candidates
                .iter()
                .map(|s| {
                    s.column
                        .iter()
                        .zip(&c.column)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-7);
        }
    }

    #[test]
    fn two_by_two_lines_step_yields_four_points() {
        // Forward 3x3 pentadiagonal (= dense at this size) instance.
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.4, 0.7],
            &[0.4, 2.0, -0.3],
            &[0.7, -0.3, 1.5],
        ])
        .unwrap();
        let (eig2, s3) = step_data(&m, 2);
        let set = penta_lines_step(&eig2, &s3).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.too_many);
        assert!(set.antipodal());
        let best = set
            .candidates
            .iter()
            .map(|c| (c.column[0] - 0.7).abs().max((c.column[1] + 0.3).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9);
    }

    /// Orthonormal 4x4 basis whose last-two-row directions fall in exactly
    /// two perpendicular classes with ratio parameter `alpha`.
    fn alpha_engineered_minor(alpha: f64) -> SymmetricMatrix {
        let (t1, t2) = (0.3f64, 1.1f64);
        let s = (1.0 + alpha * alpha).sqrt();
        let e = [alpha / s, 1.0 / s];
        let f = [-1.0 / s, alpha / s];
        let cols = [
            [-t1.sin(), 0.0, t1.cos() * e[0], t1.cos() * e[1]],
            [t1.cos(), 0.0, t1.sin() * e[0], t1.sin() * e[1]],
            [0.0, -t2.sin(), t2.cos() * f[0], t2.cos() * f[1]],
            [0.0, t2.cos(), t2.sin() * f[0], t2.sin() * f[1]],
        ];
        let lambda = [1.0, 2.0, 3.0, 4.0];
        let mut m = SymmetricMatrix::zeros(4);
        for i in 0..4 {
            for j in i..4 {
                let mut sum = 0.0;
                for (r, col) in cols.iter().enumerate() {
                    sum += lambda[r] * col[i] * col[j];
                }
                m.set(i, j, sum);
            }
        }
        m
    }

    #[test]
    fn alpha_condition_detects_engineered_instance() {
        let m = alpha_engineered_minor(0.8);
        let eig = eig_sym(&m, Gauge::LastEntryPositive).unwrap();
        let (class, alpha) = alpha_condition(&eig, 1e-7).expect("condition should fire");
        assert_eq!(class, vec![0, 1]);
        assert!((alpha - 0.8).abs() < 1e-9, "alpha = {alpha}");
        // A generic matrix must not fire.
        let generic = penta_six();
        let eig5 = eig_sym(&generic.leading_minor(5), Gauge::LastEntryPositive).unwrap();
        assert!(alpha_condition(&eig5, 1e-7).is_none());
    }

    #[test]
    fn alpha_instance_yields_four_line_candidates() {
        let minor = alpha_engineered_minor(0.8);
        let mut full = SymmetricMatrix::zeros(5);
        for i in 0..4 {
            for j in i..4 {
                full.set(i, j, minor.get(i, j));
            }
        }
        full.set(2, 4, 0.7);
        full.set(3, 4, -0.4);
        full.set(4, 4, 1.5);
        let (eig4, s5) = step_data(&full, 4);
        let set = penta_lines_step(&eig4, &s5).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.too_many);
        assert!(set.antipodal());
        let best = set
            .candidates
            .iter()
            .map(|c| (c.column[2] - 0.7).abs().max((c.column[3] + 0.4).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8);
    }

    #[test]
    fn conics_step_matches_lines_step() {
        let m = penta_six();
        for n in [3usize, 4, 5] {
            let minor = m.leading_minor(n);
            let (eig, snp1) = step_data(&m, n);
            let scal = StepScalars::new(&eig.spectrum(), &snp1).unwrap();
            let conics = penta_conics_step(&minor, &scal).unwrap();
            let lines = penta_lines_step(&eig, &snp1).unwrap();
            assert!(!conics.degenerate_conics, "generic step flagged degenerate");
            assert_eq!(conics.len(), lines.len(), "count differs at n={n}");
            for c in &conics.candidates {
                let best = lines
                    .candidates
                    .iter()
                    .map(|l| {
                        (l.column[n - 2] - c.column[n - 2])
                            .abs()
                            .max((l.column[n - 1] - c.column[n - 1]).abs())
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-7);
            }
        }
    }

    #[test]
    fn two_by_two_conics_always_degenerate_with_four_points() {
        // Any matrix commutes with its own inverse, so at n=2 the two
        // forms always share axes and all four circle points survive.
        let m = SymmetricMatrix::from_rows(&[
            &[1.0, 0.4, 0.7],
            &[0.4, 2.0, -0.3],
            &[0.7, -0.3, 1.5],
        ])
        .unwrap();
        let minor = m.leading_minor(2);
        let (eig2, s3) = step_data(&m, 2);
        let scal = StepScalars::new(&eig2.spectrum(), &s3).unwrap();
        let set = penta_conics_step(&minor, &scal).unwrap();
        assert!(set.degenerate_conics);
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn conics_auto_shift_handles_zero_eigenvalue() {
        // Minor [[1,1],[1,1]] has eigenvalues {0, 2}.
        let full = SymmetricMatrix::from_rows(&[
            &[1.0, 1.0, 0.5],
            &[1.0, 1.0, 0.3],
            &[0.5, 0.3, 2.0],
        ])
        .unwrap();
        let minor = full.leading_minor(2);
        let (eig2, s3) = step_data(&full, 2);
        let scal = StepScalars::new(&eig2.spectrum(), &s3).unwrap();
        assert!(scal.inv_rho().is_none(), "unshifted inverse scalar must be absent");
        let set = penta_conics_step(&minor, &scal).unwrap();
        let best = set
            .candidates
            .iter()
            .map(|c| (c.column[0] - 0.5).abs().max((c.column[1] - 0.3).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8, "auto-shifted conics miss the source tail: {best:.3e}");
    }

    #[test]
    fn feasibility_screen_accepts_banded_rejects_dense() {
        let m = penta_six();
        let (eig5, s6) = step_data(&m, 5);
        let xi: Vec<f64> = xi_squared(&eig5.spectrum(), &s6)
            .unwrap()
            .iter()
            .map(|v| v.sqrt())
            .collect();
        let scal = StepScalars::new(&eig5.spectrum(), &s6).unwrap();
        let rep = feasibility_certificate(&eig5, &xi, scal.r2().sqrt(), 2);
        assert!(rep.feasible, "violations: {:?}", rep.violations);

        let dense = SymmetricMatrix::from_rows(&[
            &[1.0, 0.7, 0.5, 0.3, 0.9],
            &[0.7, 2.0, 0.6, 0.4, 0.2],
            &[0.5, 0.6, 3.0, 0.8, 0.5],
            &[0.3, 0.4, 0.8, 4.0, 0.7],
            &[0.9, 0.2, 0.5, 0.7, 2.5],
        ])
        .unwrap();
        let (deig, ds5) = step_data(&dense, 4);
        let dxi: Vec<f64> = xi_squared(&deig.spectrum(), &ds5)
            .unwrap()
            .iter()
            .map(|v| v.sqrt())
            .collect();
        let dscal = StepScalars::new(&deig.spectrum(), &ds5).unwrap();
        let drep = feasibility_certificate(&deig, &dxi, dscal.r2().sqrt(), 2);
        assert!(!drep.feasible, "dense data should violate the tail bound");

        let zeros = vec![0.0; 4];
        let zrep = feasibility_certificate(&deig, &zeros, 0.0, 2);
        assert!(zrep.feasible);
    }

    fn column_signs_of(m: &SymmetricMatrix, d: usize) -> Vec<i8> {
        (2..=m.n())
            .map(|c| {
                let row = if c > d { c - d } else { 1 };
                sign_indicator(m.get(row - 1, c - 1))
            })
            .collect()
    }

    #[test]
    fn chained_reconstruction_round_trips_pentadiagonal() {
        let m = penta_six();
        let sd = extract_spectral_data(&m).unwrap();
        let signs = column_signs_of(&m, 2);
        let rec = reconstruct_banded(&sd, 2, &signs, None).unwrap();
        assert!(rec.max_abs_diff(&m) < 1e-8);
        assert!(rec.detect_bandwidth() <= 2);
    }

    #[test]
    fn chained_reconstruction_round_trips_tridiagonal() {
        let t = SymmetricMatrix::from_rows(&[
            &[2.0, 1.3, 0.0, 0.0, 0.0],
            &[1.3, 1.0, -0.8, 0.0, 0.0],
            &[0.0, -0.8, 3.0, 0.5, 0.0],
            &[0.0, 0.0, 0.5, 2.5, 1.7],
            &[0.0, 0.0, 0.0, 1.7, 1.2],
        ])
        .unwrap();
        let sd = extract_spectral_data(&t).unwrap();
        let signs = column_signs_of(&t, 1);
        let rec = reconstruct_banded(&sd, 1, &signs, None).unwrap();
        assert!(rec.max_abs_diff(&t) < 1e-9);
    }

    #[test]
    fn reports_track_candidates_and_branches() {
        let m = penta_six();
        let sd = extract_spectral_data(&m).unwrap();
        let signs = column_signs_of(&m, 2);
        let (finals, reports) =
            reconstruct_banded_with_report(&sd, 2, &signs, None, StepMethod::PentaLines).unwrap();
        assert_eq!(finals.len(), 1);
        assert!(finals[0].max_abs_diff(&m) < 1e-8);
        assert_eq!(reports.len(), 5);
        assert_eq!(reports[0].kind, "head");
        assert_eq!(reports[1].kind, "head");
        assert!(reports[2..].iter().all(|r| r.kind == "penta-lines"));
        // The head fans out to two branches; the first constrained step
        // kills the wrong one.
        assert_eq!(reports[1].branches, 2);
        assert_eq!(reports.last().unwrap().branches, 1);
        assert!(reports.iter().all(|r| r.residual < 1e-8));
        assert!(reports.iter().all(|r| !r.alpha_hit));
    }
}
