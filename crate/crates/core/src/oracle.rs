//! Brute-force references and seeded instance generators.
//!
//! Everything here exists to check the clever code paths against dumb
//! ones: exhaustive sign enumeration against the pruned search, direct
//! eigensolves against closed-form steps, and deterministic random
//! instances so failures reproduce exactly.
//!
//! The generator stream is ChaCha8 (a named, portable, seedable cipher
//! RNG), so committed golden instances can be regenerated bit-for-bit on
//! any platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::banded::{sign_column, signs_from_mask, Candidate, CandidateSet};
use crate::cauchy::xi_squared;
use crate::eig::EigDecomp;
use crate::error::{Error, Result};
use crate::mat::{dot, norm, SymmetricMatrix};
use crate::spectral::{check_pair_regular, check_regular, extract_spectral_data, Spectrum, NEAR_REGULAR_LOW};

/// Recipe for one reproducible random instance.
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpec {
    /// Matrix order.
    pub n: usize,
    /// Bandwidth (d = n-1 generates a full matrix).
    pub d: usize,
    /// RNG seed; the whole instance is a pure function of these fields.
    pub seed: u64,
    /// In-band entries are drawn uniformly from this interval.
    pub entry_range: (f64, f64),
    /// Minimal spectral gap (internal and cross) the nested spectra must
    /// exhibit; instances below it are redrawn.
    pub regularity_margin: f64,
}

impl InstanceSpec {
    /// Defaults: entries in [-2, 2], margin 1e-6.
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        InstanceSpec {
            n,
            d,
            seed,
            entry_range: (-2.0, 2.0),
            regularity_margin: 1e-6,
        }
    }
}

/// Draws a random bandwidth-d symmetric matrix, redrawing until the
/// nested spectra meet the regularity margin (at most 100 attempts).
///
/// Deterministic per spec: one ChaCha8 stream seeded from `spec.seed`
/// feeds all attempts in order.
pub fn gen_random_banded(spec: &InstanceSpec) -> Result<SymmetricMatrix> {
    if spec.n == 0 {
        return Err(Error::InvalidInput("matrix order must be positive".into()));
    }
    if spec.d == 0 {
        return Err(Error::InvalidInput("bandwidth must be at least 1".into()));
    }
    let (lo, hi) = spec.entry_range;
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!(
            "empty entry range [{lo}, {hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..100 {
        let mut m = SymmetricMatrix::zeros(spec.n);
        for i in 0..spec.n {
            for j in i..spec.n.min(i + spec.d + 1) {
                m.set(i, j, rng.random_range(lo..hi));
            }
        }
        let sd = match extract_spectral_data(&m) {
            Ok(sd) => sd,
            Err(_) => continue,
        };
        if check_regular(&sd, spec.regularity_margin).regular {
            return Ok(m);
        }
    }
    Err(Error::CannotSatisfyMargin {
        attempts: 100,
        margin: spec.regularity_margin,
    })
}

/// Full (dense) random symmetric matrix: bandwidth n-1.
pub fn gen_random_symmetric(n: usize, seed: u64) -> Result<SymmetricMatrix> {
    let spec = InstanceSpec::new(n, n.saturating_sub(1).max(1), seed);
    gen_random_banded(&spec)
}

/// Exhaustive reference for one reconstruction step: enumerates all 2^n
/// sign vectors, builds each candidate column, and keeps those the
/// `accept` predicate admits (returning its residual).
///
/// Candidates are raw — no deduplication — in mask order (bit r of the
/// mask set means sign r is -1), and columns are produced by the same
/// index-order summation the pruned search uses, so agreement can be
/// asserted bitwise. `too_many` is set whenever more than two survive.
pub fn brute_force_step<F>(
    eig_n: &EigDecomp,
    sigma_np1: &Spectrum,
    accept: F,
) -> Result<CandidateSet>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let n = eig_n.n();
    if n > 20 {
        return Err(Error::TooLarge { n, cap: 20 });
    }
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let sigma_n = eig_n.spectrum();
    check_pair_regular(&sigma_n, sigma_np1, NEAR_REGULAR_LOW)?;
    let xi: Vec<f64> = xi_squared(&sigma_n, sigma_np1)?
        .iter()
        .map(|v| v.sqrt())
        .collect();
    let mut set = CandidateSet::default();
    for mask in 0..(1usize << n) {
        let signs = signs_from_mask(n, mask);
        let column = sign_column(eig_n, &xi, &signs);
        if let Some(residual) = accept(&column) {
            set.candidates.push(Candidate {
                column,
                signs,
                residual,
            });
        }
    }
    set.too_many = set.len() > 2;
    Ok(set)
}

/// Random orthonormal basis (columns), via Gram-Schmidt on a uniformly
/// drawn square matrix. Used to build instances with prescribed
/// eigenstructure.
pub fn random_orthonormal(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let d = dot(&head[i], &tail[0]);
                for (a, b) in tail[0].iter_mut().zip(&head[i]) {
                    *a -= d * b;
                }
            }
            let nr = norm(&cols[j]);
            if nr < 1e-6 {
                ok = false;
                break;
            }
            for x in &mut cols[j] {
                *x /= nr;
            }
        }
        if ok {
            return cols;
        }
    }
}

/// Assembles the symmetric matrix with the given eigenvalues and
/// orthonormal eigenvectors (columns), built symmetrically so that the
/// result is exactly representable.
pub fn symmetric_from_eig(values: &[f64], vectors: &[Vec<f64>]) -> Result<SymmetricMatrix> {
    let n = values.len();
    if vectors.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: vectors.len(),
        });
    }
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut sum = 0.0;
            for (lam, v) in values.iter().zip(vectors) {
                sum += lam * v[i] * v[j];
            }
            m.set(i, j, sum);
        }
    }
    Ok(m)
}

/// Bottom-right 2x2 blocks of a matrix and of its inverse, as flat
/// symmetric triples (a, b, c).
fn conic_blocks(m: &SymmetricMatrix) -> Result<([f64; 3], [f64; 3])> {
    let n = m.n();
    let b = [m.get(n - 2, n - 2), m.get(n - 2, n - 1), m.get(n - 1, n - 1)];
    let mut e1 = vec![0.0; n];
    e1[n - 2] = 1.0;
    let mut e2 = vec![0.0; n];
    e2[n - 1] = 1.0;
    let z1 = m.solve(&e1)?;
    let z2 = m.solve(&e2)?;
    let c = [z1[n - 2], 0.5 * (z1[n - 1] + z2[n - 2]), z2[n - 1]];
    Ok((b, c))
}

/// Scalar commutator of two symmetric 2x2 forms (zero iff they share
/// principal axes). Adding any multiple of the identity to either form
/// leaves it unchanged.
fn form_commutator(b: &[f64; 3], c: &[f64; 3]) -> f64 {
    b[0] * c[1] - c[0] * b[1] + b[1] * c[2] - c[1] * b[2]
}

/// A 4x4 minor whose two conic forms (bottom 2x2 of the matrix and of its
/// inverse) share principal axes without the eigenvector directions
/// collapsing into two perpendicular classes.
///
/// Found deterministically: along a fixed line segment of symmetric
/// matrices the commutator of the two forms changes sign; bisection pins
/// the root. On such a minor the conic method retains four intersection
/// points while the line method still prunes to an antipodal pair.
pub fn commuting_conics_minor() -> SymmetricMatrix {
    let a0 = SymmetricMatrix::from_rows(&[
        &[1.3, 0.4, -0.2, 0.5],
        &[0.4, 2.1, 0.7, -0.3],
        &[-0.2, 0.7, 0.9, 0.6],
        &[0.5, -0.3, 0.6, 1.8],
    ])
    .unwrap();
    let a1 = SymmetricMatrix::from_rows(&[
        &[2.0, -0.6, 0.3, 0.1],
        &[-0.6, 1.1, -0.4, 0.8],
        &[0.3, -0.4, 2.6, -0.5],
        &[0.1, 0.8, -0.5, 0.7],
    ])
    .unwrap();
    let at = |t: f64| {
        let mut m = SymmetricMatrix::zeros(4);
        for i in 0..4 {
            for j in i..4 {
                m.set(i, j, (1.0 - t) * a0.get(i, j) + t * a1.get(i, j));
            }
        }
        m
    };
    let g = |t: f64| -> Option<f64> {
        let (b, c) = conic_blocks(&at(t)).ok()?;
        Some(form_commutator(&b, &c))
    };
    // Bracket a sign change on a fixed grid, then bisect.
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=300 {
        let t = k as f64 / 100.0;
        if let Some(v) = g(t) {
            if let Some((tp, vp)) = prev {
                if vp.signum() != v.signum() {
                    bracket = Some((tp, t));
                    break;
                }
            }
            prev = Some((t, v));
        }
    }
    let (mut lo, mut hi) = bracket.expect("fixed segment must bracket a commutator root");
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid).expect("segment interior stays invertible");
        let gl = g(lo).expect("segment interior stays invertible");
        if gl.signum() == gm.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}
