//! Reconstruction steps whose spectra carry one repeated-eigenvalue block.
//!
//! With a single degenerate eigenvalue lambda of multiplicity m+1 in
//! sigma^(n), interlacing confines lambda's multiplicity in sigma^(n+1) to
//! {m, m+1, m+2}, and its position to one of four index patterns (cases
//! I-IV). Each case reduces to a smaller regular step after the forced
//! structure is peeled off:
//!
//! * case I (multiplicity grows): the new column is orthogonal to the whole
//!   lambda eigenspace, which transfers unchanged; the reduced step keeps a
//!   single copy of lambda on the new side.
//! * cases II/III (multiplicity persists): as in I, but no copy of lambda
//!   remains in the reduced step. The two cases differ only in where the
//!   block sits, not in the arithmetic.
//! * case IV (multiplicity shrinks): the column has one free direction
//!   inside the lambda eigenspace. An m-dimensional sub-basis (the part
//!   that survives into A^(n+1)) must be chosen; its unit complement joins
//!   the reduced step as an ordinary direction with eigenvalue lambda.

use crate::eig::{EigDecomp, Gauge};
use crate::error::{Error, Result};
use crate::mat::{dot, norm};
use crate::spectral::{check_pair_regular, Spectrum, DEGENERACY_REL_TOL, NEAR_REGULAR_HIGH, NEAR_REGULAR_LOW};
use crate::telescopic::{extended_eigvectors, telescopic_step, StepResult};

/// Position pattern of the repeated eigenvalue in sigma^(n+1) relative to
/// its block in sigma^(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyCase {
    /// No degeneracy and no shared value: the pair is regular.
    None,
    /// Multiplicity m+1 -> m+2; new positions {l, ..., l+m+1}.
    I,
    /// Multiplicity m+1 -> m+1 at positions {l, ..., l+m}.
    II,
    /// Multiplicity m+1 -> m+1 at positions {l+1, ..., l+m+1}.
    III,
    /// Multiplicity m+1 -> m at positions {l+1, ..., l+m} (m >= 1).
    IV,
}

/// A single block of repeated eigenvalue shared between consecutive spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyBlock {
    /// The repeated eigenvalue.
    pub lambda: f64,
    /// 1-based start index of the block within sigma^(n).
    pub l: usize,
    /// Multiplicity minus one: the block occupies indices l..=l+m.
    pub m: usize,
    /// Which of the four patterns sigma^(n+1) realizes.
    pub case: DegeneracyCase,
}

impl DegeneracyBlock {
    fn none() -> Self {
        DegeneracyBlock {
            lambda: 0.0,
            l: 0,
            m: 0,
            case: DegeneracyCase::None,
        }
    }
}

/// Default absolute merge tolerance for a spectra pair.
pub fn default_degeneracy_tol(sigma_n: &Spectrum, sigma_np1: &Spectrum) -> f64 {
    DEGENERACY_REL_TOL * sigma_n.diameter().max(sigma_np1.diameter()).max(1.0)
}

/// Maximal runs of nearly-equal consecutive values: (start, length).
fn runs(values: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            out.push((start, i - start));
            start = i;
        }
    }
    out
}

fn run_mean(values: &[f64], start: usize, len: usize) -> f64 {
    values[start..start + len].iter().sum::<f64>() / len as f64
}

/// Contiguous run of values within tol of `lambda`: (start, count).
fn run_near(values: &[f64], lambda: f64, tol: f64) -> (usize, usize) {
    let mut start = 0;
    let mut count = 0;
    for (i, v) in values.iter().enumerate() {
        if (v - lambda).abs() <= tol {
            if count == 0 {
                start = i;
            }
            count += 1;
        } else if count > 0 {
            break;
        }
    }
    (start, count)
}

/// Identifies the degeneracy pattern of a spectra pair.
///
/// `tol` is the absolute gap below which two values count as equal (use
/// [`default_degeneracy_tol`] unless you have a reason not to). Returns a
/// block with case `None` for regular pairs. More than one degenerate or
/// shared value is out of scope and reported as `MultiBlock`.
pub fn classify_degeneracy(
    sigma_n: &Spectrum,
    sigma_np1: &Spectrum,
    tol: f64,
) -> Result<DegeneracyBlock> {
    let vn = sigma_n.values();
    let vnp1 = sigma_np1.values();
    let deg_n: Vec<(usize, usize)> = runs(vn, tol).into_iter().filter(|&(_, c)| c >= 2).collect();
    let deg_np1: Vec<(usize, usize)> = runs(vnp1, tol)
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .collect();
    if deg_n.len() > 1 {
        return Err(Error::MultiBlock { values: deg_n.len() });
    }
    if deg_np1.len() > 1 {
        return Err(Error::MultiBlock {
            values: deg_np1.len(),
        });
    }

    if let Some(&(l0, len_n)) = deg_n.first() {
        let lambda = run_mean(vn, l0, len_n);
        let m = len_n - 1;
        if let Some(&(s, c)) = deg_np1.first() {
            let other = run_mean(vnp1, s, c);
            if (other - lambda).abs() > tol {
                return Err(Error::MultiBlock { values: 2 });
            }
        }
        let (p0, c) = run_near(vnp1, lambda, tol);
        let block = |case| DegeneracyBlock {
            lambda,
            l: l0 + 1,
            m,
            case,
        };
        return match c {
            0 => Err(Error::InconsistentSharedValue {
                detail: format!(
                    "value {lambda} has multiplicity {} in the minor but is absent above",
                    m + 1
                ),
            }),
            c if c == m + 2 && p0 == l0 => Ok(block(DegeneracyCase::I)),
            c if c == m + 1 && p0 == l0 => Ok(block(DegeneracyCase::II)),
            c if c == m + 1 && p0 == l0 + 1 => Ok(block(DegeneracyCase::III)),
            c if c == m && m >= 1 && p0 == l0 + 1 => Ok(block(DegeneracyCase::IV)),
            _ => Err(Error::CaseMismatch {
                detail: format!(
                    "multiplicity {} at position {} does not match block (l={}, m={m})",
                    c,
                    p0 + 1,
                    l0 + 1
                ),
            }),
        };
    }

    if let Some(&(p0, c)) = deg_np1.first() {
        // sigma^(n) is simple, so interlacing caps the upper multiplicity
        // at 2 (case I with m = 0).
        let lambda = run_mean(vnp1, p0, c);
        if c > 2 {
            return Err(Error::InconsistentSharedValue {
                detail: format!(
                    "value {lambda} has multiplicity {c} above a simple minor spectrum"
                ),
            });
        }
        let (l0, cn) = run_near(vn, lambda, tol);
        if cn == 0 {
            return Err(Error::InconsistentSharedValue {
                detail: format!("doubled value {lambda} missing from the minor spectrum"),
            });
        }
        if p0 == l0 {
            return Ok(DegeneracyBlock {
                lambda,
                l: l0 + 1,
                m: 0,
                case: DegeneracyCase::I,
            });
        }
        return Err(Error::CaseMismatch {
            detail: format!(
                "doubled value at position {} does not start at the minor's position {}",
                p0 + 1,
                l0 + 1
            ),
        });
    }

    // Both spectra simple: look for shared isolated values.
    let mut shared: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; vnp1.len()];
    for (r, lam) in vn.iter().enumerate() {
        for (k, mu) in vnp1.iter().enumerate() {
            if !used[k] && (lam - mu).abs() <= tol {
                shared.push((r, k));
                used[k] = true;
                break;
            }
        }
    }
    match shared.len() {
        0 => Ok(DegeneracyBlock::none()),
        1 => {
            let (r, k) = shared[0];
            let block = DegeneracyBlock {
                lambda: vn[r],
                l: r + 1,
                m: 0,
                case: if k == r {
                    DegeneracyCase::II
                } else if k == r + 1 {
                    DegeneracyCase::III
                } else {
                    return Err(Error::CaseMismatch {
                        detail: format!(
                            "shared value at minor position {} reappears at position {}",
                            r + 1,
                            k + 1
                        ),
                    });
                },
            };
            Ok(block)
        }
        _ => Err(Error::MultiBlock {
            values: shared.len(),
        }),
    }
}

/// Modified Gram-Schmidt over the given vectors, in order.
fn orthonormalize_in_place(vs: &mut [Vec<f64>]) {
    for j in 0..vs.len() {
        for i in 0..j {
            let d = dot(&vs[i], &vs[j]);
            let (head, tail) = vs.split_at_mut(j);
            for (a, b) in tail[0].iter_mut().zip(&head[i]) {
                *a -= d * b;
            }
        }
        let nrm = norm(&vs[j]);
        for x in &mut vs[j] {
            *x /= nrm;
        }
    }
}

/// Performs one reconstruction step on a degenerate pair.
///
/// # Input
///
/// * `eig_n` — decomposition of A^(n); for the repeated eigenvalue any
///   orthonormal eigenspace basis is acceptable.
/// * `sigma_np1` — the (degenerate) spectrum of A^(n+1).
/// * `block` — the classification of the pair (see [`classify_degeneracy`]);
///   it is re-derived from the spectra and must agree, otherwise
///   `CaseMismatch` is returned.
/// * `signs` — the reduced sign vector: n-(m+1) entries for cases I-III,
///   n-m entries for case IV (the extra one belongs to the in-eigenspace
///   direction), ordered by ascending reduced eigenvalue.
/// * `basis_choice` — case IV only: the m orthonormal vectors of the
///   lambda-eigenspace of A^(n) that remain eigenvectors of A^(n+1).
///   `None` picks the first m block eigenvectors of `eig_n`, leaving the
///   last as the free direction.
///
/// # Output
///
/// The usual [`StepResult`]; the grown decomposition is gauged
/// last-entry-positive except inside degenerate eigenspaces, where the
/// basis follows the deterministic construction described per case.
pub fn degenerate_step(
    eig_n: &EigDecomp,
    sigma_np1: &Spectrum,
    block: &DegeneracyBlock,
    signs: &[i8],
    basis_choice: Option<&[Vec<f64>]>,
) -> Result<StepResult> {
    let n = eig_n.n();
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let sigma_n = eig_n.spectrum();
    let tol = default_degeneracy_tol(&sigma_n, sigma_np1);
    let derived = classify_degeneracy(&sigma_n, sigma_np1, tol)?;
    if derived.case != block.case
        || derived.l != block.l
        || derived.m != block.m
        || (derived.lambda - block.lambda).abs() > tol
    {
        return Err(Error::CaseMismatch {
            detail: format!("supplied {block:?} but spectra classify as {derived:?}"),
        });
    }

    match block.case {
        DegeneracyCase::None => telescopic_step(eig_n, sigma_np1, signs),
        DegeneracyCase::I | DegeneracyCase::II | DegeneracyCase::III => {
            carried_block_step(eig_n, &sigma_n, sigma_np1, block, signs, tol)
        }
        DegeneracyCase::IV => case_iv_step(eig_n, &sigma_n, sigma_np1, block, signs, basis_choice, tol),
    }
}

/// Cases I-III: the whole block transfers with appended zeros; the reduced
/// problem never touches the lambda eigenspace.
fn carried_block_step(
    eig_n: &EigDecomp,
    sigma_n: &Spectrum,
    sigma_np1: &Spectrum,
    block: &DegeneracyBlock,
    signs: &[i8],
    tol: f64,
) -> Result<StepResult> {
    let n = eig_n.n();
    let l0 = block.l - 1;
    let m = block.m;
    if signs.len() != n - (m + 1) {
        return Err(Error::Dimension {
            expected: n - (m + 1),
            got: signs.len(),
        });
    }
    let (p0, _) = run_near(sigma_np1.values(), block.lambda, tol);

    // Block row r = l0+i keeps its eigenvector at new position p0+i; in
    // case I one extra new lambda-slot (p0+m+1) is left for the reduced step.
    let carried: Vec<(usize, usize)> = (0..=m).map(|i| (p0 + i, l0 + i)).collect();
    let active: Vec<usize> = (0..n).filter(|r| *r < l0 || *r > l0 + m).collect();
    let new_positions: Vec<usize> =
        (0..=n).filter(|k| !carried.iter().any(|&(ck, _)| ck == *k)).collect();

    let lam_red: Vec<f64> = active.iter().map(|&r| sigma_n.get(r)).collect();
    let mu_red: Vec<f64> = new_positions.iter().map(|&k| sigma_np1.get(k)).collect();

    let mut near_regular = false;
    let (xi, signs_red): (Vec<f64>, Vec<i8>) = if lam_red.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let sr = Spectrum::new(lam_red)?;
        let mr = Spectrum::new(mu_red)?;
        let gap = check_pair_regular(&sr, &mr, NEAR_REGULAR_LOW)?;
        near_regular = gap < NEAR_REGULAR_HIGH;
        let xi2 = crate::cauchy::xi_squared(&sr, &mr)?;
        (xi2.iter().map(|v| v.sqrt()).collect(), signs.to_vec())
    };

    let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
    let mut column = vec![0.0; n];
    for (ai, &r) in active.iter().enumerate() {
        let c = f64::from(signs_red[ai]) * xi[ai];
        let v = eig_n.vector(r);
        for i in 0..n {
            column[i] += c * v[i];
        }
    }

    let (mut vectors, mut b_coeffs) =
        extended_eigvectors(eig_n, sigma_n, sigma_np1, &xi, &signs_red, &carried, &[])?;

    if block.case == DegeneracyCase::I {
        // Stabilize the enlarged lambda eigenspace: orthonormalize its
        // vectors in position order (the carried ones are exact, the new
        // one is orthogonal analytically; this removes rounding drift).
        let run: Vec<usize> = (p0..=p0 + m + 1).collect();
        let mut blockvecs: Vec<Vec<f64>> = run.iter().map(|&k| vectors[k].clone()).collect();
        orthonormalize_in_place(&mut blockvecs);
        for (i, &k) in run.iter().enumerate() {
            vectors[k] = blockvecs[i].clone();
            // Re-express in the tilde basis after the cleanup.
            for r in 0..n {
                b_coeffs[k][r] = dot(&vectors[k][..n], eig_n.vector(r));
            }
            b_coeffs[k][n] = vectors[k][n];
        }
    }

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

/// Case IV: multiplicity shrinks by one; the column picks up a free
/// component inside the lambda eigenspace.
fn case_iv_step(
    eig_n: &EigDecomp,
    sigma_n: &Spectrum,
    sigma_np1: &Spectrum,
    block: &DegeneracyBlock,
    signs: &[i8],
    basis_choice: Option<&[Vec<f64>]>,
    tol: f64,
) -> Result<StepResult> {
    let n = eig_n.n();
    let l0 = block.l - 1;
    let m = block.m;
    if signs.len() != n - m {
        return Err(Error::Dimension {
            expected: n - m,
            got: signs.len(),
        });
    }
    let lambda = block.lambda;
    let block_basis: Vec<&[f64]> = (0..=m).map(|i| eig_n.vector(l0 + i)).collect();

    // The surviving sub-basis w_1..w_m and its unit complement z.
    let (kept, z): (Vec<Vec<f64>>, Vec<f64>) = match basis_choice {
        None => (
            (0..m).map(|i| block_basis[i].to_vec()).collect(),
            block_basis[m].to_vec(),
        ),
        Some(ws) => {
            if ws.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: ws.len(),
                });
            }
            for (i, w) in ws.iter().enumerate() {
                if w.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        got: w.len(),
                    });
                }
                if (norm(w) - 1.0).abs() > 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "basis vector {i} is not unit length"
                    )));
                }
                for prev in ws.iter().take(i) {
                    if dot(prev, w).abs() > 1e-8 {
                        return Err(Error::InvalidInput(
                            "basis vectors are not orthogonal".into(),
                        ));
                    }
                }
                // Must lie inside the lambda eigenspace.
                let mut resid = w.to_vec();
                for u in &block_basis {
                    let d = dot(u, w);
                    for (x, ui) in resid.iter_mut().zip(*u) {
                        *x -= d * ui;
                    }
                }
                if norm(&resid) > 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "basis vector {i} leaves the degenerate eigenspace (residual {:.3e})",
                        norm(&resid)
                    )));
                }
            }
            // Deterministic complement: first block vector with a
            // significant residual against the kept set, orthonormalized.
            let mut z = None;
            for u in &block_basis {
                let mut resid = u.to_vec();
                for w in ws {
                    let d = dot(w, &resid);
                    for (x, wi) in resid.iter_mut().zip(w) {
                        *x -= d * wi;
                    }
                }
                let nr = norm(&resid);
                if nr > 1e-6 {
                    for x in &mut resid {
                        *x /= nr;
                    }
                    z = Some(resid);
                    break;
                }
            }
            match z {
                Some(z) => (ws.to_vec(), z),
                None => {
                    return Err(Error::InvalidInput(
                        "basis choice spans the whole eigenspace; no complement left".into(),
                    ))
                }
            }
        }
    };

    // Reduced directions: z carries eigenvalue lambda at the block slot;
    // all non-block eigenvectors keep theirs. Values stay ascending.
    let mut dirs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n - m);
    for r in 0..n {
        if r == l0 {
            dirs.push((lambda, z.clone()));
        } else if r > l0 && r <= l0 + m {
            continue;
        } else {
            dirs.push((sigma_n.get(r), eig_n.vector(r).to_vec()));
        }
    }

    let (p0, c) = run_near(sigma_np1.values(), lambda, tol);
    if c != m {
        return Err(Error::CaseMismatch {
            detail: format!("expected multiplicity {m} above, found {c}"),
        });
    }
    let new_positions: Vec<usize> = (0..=n).filter(|k| *k < p0 || *k >= p0 + m).collect();
    let lam_red: Vec<f64> = dirs.iter().map(|d| d.0).collect();
    let mu_red: Vec<f64> = new_positions.iter().map(|&k| sigma_np1.get(k)).collect();
    let sr = Spectrum::new(lam_red)?;
    let mr = Spectrum::new(mu_red)?;
    let gap = check_pair_regular(&sr, &mr, NEAR_REGULAR_LOW)?;
    let near_regular = gap < NEAR_REGULAR_HIGH;
    let xi2 = crate::cauchy::xi_squared(&sr, &mr)?;
    let xi: Vec<f64> = xi2.iter().map(|v| v.sqrt()).collect();
    let b_last = crate::cauchy::eigvec_last_entry_sq(&sr, &mr)?;

    let h = sigma_np1.power_sum(1) - sigma_n.power_sum(1);
    let mut column = vec![0.0; n];
    for (j, (_, v)) in dirs.iter().enumerate() {
        let c = f64::from(signs[j]) * xi[j];
        for i in 0..n {
            column[i] += c * v[i];
        }
    }

    let mut vectors = vec![Vec::new(); n + 1];
    for (i, w) in kept.iter().enumerate() {
        let mut v = vec![0.0; n + 1];
        v[..n].copy_from_slice(w);
        vectors[p0 + i] = v;
    }
    for (pos, &k) in new_positions.iter().enumerate() {
        let mu = sigma_np1.get(k);
        let bk = b_last[pos].sqrt();
        let mut w = vec![0.0; n + 1];
        w[n] = bk;
        for (j, (val, v)) in dirs.iter().enumerate() {
            let cj = f64::from(signs[j]) * xi[j] * bk / (mu - val);
            for i in 0..n {
                w[i] += cj * v[i];
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
        vectors[k] = w;
    }

    let mut b_coeffs = Vec::with_capacity(n + 1);
    for v in &vectors {
        let mut coeff = vec![0.0; n + 1];
        for r in 0..n {
            coeff[r] = dot(&v[..n], eig_n.vector(r));
        }
        coeff[n] = v[n];
        b_coeffs.push(coeff);
    }

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
