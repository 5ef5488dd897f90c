//! Cauchy-matrix machinery: the explicit inverse, the closed-form step
//! weights, the consistency residual, and a numerical identity suite.
//!
//! A reconstruction step solves a linear system whose matrix is the Cauchy
//! matrix `C(x, y)_{ij} = 1/(x_i - y_j)` built from the two spectra. The
//! closed-form solution (products of eigenvalue gaps) and the explicit
//! inverse are implemented independently so each can serve as an oracle for
//! the other.

use crate::error::{Error, Result};
use crate::spectral::Spectrum;

/// Relative gap (times the node diameter) below which a Cauchy pair is
/// rejected as too ill-conditioned to invert stably.
pub const CAUCHY_GAP_REL_TOL: f64 = 1e-10;

/// Node sets of a Cauchy matrix `C_{ij} = 1/(x_i - y_j)`: both strictly
/// ascending and mutually disjoint.
#[derive(Debug, Clone)]
pub struct CauchyPair {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl CauchyPair {
    /// Validates strict ordering of each node set and a minimum cross gap of
    /// `CAUCHY_GAP_REL_TOL` times the overall node diameter.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Dimension {
                expected: x.len().max(1),
                got: y.len(),
            });
        }
        for nodes in [&x, &y] {
            for w in nodes.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::InvalidInput(format!(
                        "nodes not strictly ascending: {} >= {}",
                        w[0], w[1]
                    )));
                }
            }
        }
        let lo = x[0].min(y[0]);
        let hi = x[x.len() - 1].max(y[y.len() - 1]);
        let tol = CAUCHY_GAP_REL_TOL * (hi - lo).max(1.0);
        let mut min_gap = f64::INFINITY;
        for a in &x {
            for b in &y {
                min_gap = min_gap.min((a - b).abs());
            }
        }
        if min_gap < tol {
            return Err(Error::IllConditioned { min_gap });
        }
        Ok(CauchyPair { x, y })
    }

    /// Builds the pair for a regular interlacing step: `x` is the first n
    /// values of sigma^(n+1), `y` is sigma^(n).
    pub fn from_interlacing(sigma_n: &Spectrum, sigma_np1: &Spectrum) -> Result<Self> {
        let n = sigma_n.n();
        if sigma_np1.n() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                got: sigma_np1.n(),
            });
        }
        CauchyPair::new(
            sigma_np1.values()[..n].to_vec(),
            sigma_n.values().to_vec(),
        )
    }

    /// Order of the (square) matrix.
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Row nodes.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Column nodes.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// The dense Cauchy matrix, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        let n = self.n();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = 1.0 / (self.x[i] - self.y[j]);
            }
        }
        c
    }
}

/// Signed product accumulator in log-magnitude form, so that long products
/// of eigenvalue gaps neither overflow nor lose their sign.
#[derive(Debug, Clone, Copy)]
struct LogProd {
    sign: f64,
    logmag: f64,
}

impl LogProd {
    fn one() -> Self {
        LogProd {
            sign: 1.0,
            logmag: 0.0,
        }
    }

    fn mul(&mut self, f: f64) {
        if f == 0.0 {
            self.sign = 0.0;
        } else {
            if f < 0.0 {
                self.sign = -self.sign;
            }
            self.logmag += f.abs().ln();
        }
    }

    fn div(&mut self, f: f64) {
        debug_assert!(f != 0.0);
        if f < 0.0 {
            self.sign = -self.sign;
        }
        self.logmag -= f.abs().ln();
    }

    fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.logmag.exp()
        }
    }
}

/// Explicit inverse of a Cauchy matrix (dense row-major):
///
/// `(C^-1)_{ij} = [(y_i - x_i) prod_{k!=i} (y_i - x_k)/(y_i - y_k)]`
/// `            * [1/(y_i - x_j)]`
/// `            * [(x_j - y_j) prod_{k!=j} (x_j - y_k)/(x_j - x_k)]`
pub fn cauchy_inverse(cp: &CauchyPair) -> Vec<f64> {
    let n = cp.n();
    let (x, y) = (cp.x(), cp.y());
    // Row factors u_i and column factors w_j of the rank-structured inverse.
    let mut u = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut p = LogProd::one();
        p.mul(y[i] - x[i]);
        for k in 0..n {
            if k != i {
                p.mul(y[i] - x[k]);
                p.div(y[i] - y[k]);
            }
        }
        u[i] = p.value();
    }
    for j in 0..n {
        let mut p = LogProd::one();
        p.mul(x[j] - y[j]);
        for k in 0..n {
            if k != j {
                p.mul(x[j] - y[k]);
                p.div(x[j] - x[k]);
            }
        }
        w[j] = p.value();
    }
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            inv[i * n + j] = u[i] * w[j] / (y[i] - x[j]);
        }
    }
    inv
}

/// Squared projections of the new column onto the minor's eigenvectors,
/// from spectra alone:
///
/// `xi_r^2 = - prod_{k=1}^{n+1} (lambda_r - mu_k) / prod_{s!=r} (lambda_r - lambda_s)`
///
/// where lambda = sigma^(n) and mu = sigma^(n+1). Exact zeros in the
/// numerator (shared values) legitimately produce `xi_r^2 = 0`; negative
/// outputs beyond rounding mean the spectra do not interlace.
pub fn xi_squared(sigma_n: &Spectrum, sigma_np1: &Spectrum) -> Result<Vec<f64>> {
    let n = sigma_n.n();
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let lam = sigma_n.values();
    let mu = sigma_np1.values();
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut p = LogProd::one();
        for k in 0..=n {
            p.mul(lam[r] - mu[k]);
        }
        for s in 0..n {
            if s != r {
                let gap = lam[r] - lam[s];
                if gap == 0.0 {
                    return Err(Error::NotRegular {
                        step: n,
                        gap: 0.0,
                    });
                }
                p.div(gap);
            }
        }
        let v = -p.value();
        let tol = 1e-12 * v.abs().max(1.0);
        if v < -tol {
            return Err(Error::NotInterlacing {
                detail: format!("xi_{}^2 = {v:.6e} < 0", r + 1),
            });
        }
        out.push(v.max(0.0));
    }
    Ok(out)
}

/// Squared last entries of the extended matrix's eigenvectors, from spectra
/// alone:
///
/// `|b_k|^2 = prod_{r=1}^{n} (mu_k - lambda_r) / prod_{j!=k} (mu_k - mu_j)`
///
/// Entries lie in [0,1] and sum to 1 for interlacing input.
pub fn eigvec_last_entry_sq(sigma_n: &Spectrum, sigma_np1: &Spectrum) -> Result<Vec<f64>> {
    let n = sigma_n.n();
    if sigma_np1.n() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: sigma_np1.n(),
        });
    }
    let lam = sigma_n.values();
    let mu = sigma_np1.values();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut p = LogProd::one();
        for r in 0..n {
            p.mul(mu[k] - lam[r]);
        }
        for j in 0..=n {
            if j != k {
                let gap = mu[k] - mu[j];
                if gap == 0.0 {
                    return Err(Error::NotRegular {
                        step: n,
                        gap: 0.0,
                    });
                }
                p.div(gap);
            }
        }
        let v = p.value();
        let tol = 1e-12 * v.abs().max(1.0);
        if v < -tol || v > 1.0 + tol {
            return Err(Error::NotInterlacing {
                detail: format!("|b_{}|^2 = {v:.6e} outside [0,1]", k + 1),
            });
        }
        out.push(v.clamp(0.0, 1.0));
    }
    Ok(out)
}

/// Residual of the one redundant equation of a reconstruction step.
///
/// The first n secular equations determine the squared projections through
/// the explicit Cauchy inverse; substituting them into the (n+1)-st equation
/// must reproduce `mu_{n+1} - h` exactly when `h` is the true trace
/// difference. Returns the absolute defect, which is ~1e-12 for the correct
/// `h` and order one for a wrong `h`.
///
/// This deliberately goes through [`cauchy_inverse`] rather than the
/// closed-form [`xi_squared`], so the two routes check each other.
pub fn consistency_residual(sigma_n: &Spectrum, sigma_np1: &Spectrum, h: f64) -> Result<f64> {
    let n = sigma_n.n();
    let cp = CauchyPair::from_interlacing(sigma_n, sigma_np1)?;
    let inv = cauchy_inverse(&cp);
    let mu = sigma_np1.values();
    let lam = sigma_n.values();
    // w_r = sum_k (C^-1)_{rk} (mu_k - h): squared projections via the inverse.
    let mut rhs = 0.0;
    for r in 0..n {
        let mut w = 0.0;
        for k in 0..n {
            w += inv[r * n + k] * (mu[k] - h);
        }
        rhs += w / (mu[n] - lam[r]);
    }
    Ok(((mu[n] - h) - rhs).abs())
}

/// Per-family residuals of the identity suite; every residual is relative
/// (scaled by the magnitude of the quantities compared).
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// `||C * C^-1 - I||_max` — the explicit inverse against the definition.
    pub inverse_identity: f64,
    /// Total-sum rule `sum_ij (C^-1)_ij = sum_k (x_k - y_k)`.
    pub sum_rule: f64,
    /// Reciprocal-weighted sum rules (both variants, worst of the two).
    pub reciprocal_rules: f64,
    /// Node-weighted sum rules (both variants, worst of the two).
    pub weighted_rules: f64,
    /// Factorization of C through the two Vandermonde matrices.
    pub vandermonde_factorization: f64,
    /// Power sums `sum_k t_k^m / prod_{i!=k}(t_k - t_i)` for m = 0..n.
    pub exponent_sums: f64,
    /// Reciprocal-node sum `sum_k 1/(t_k prod_{i!=k}(t_k - t_i))`.
    pub reciprocal_node_sum: f64,
    /// Explicit Vandermonde inverse against the definition.
    pub vandermonde_inverse: f64,
    /// The extension identity tying `C^-1` to gap products, with a
    /// synthesized (n+1)-st row node.
    pub extension_identity: f64,
}

impl IdentityReport {
    /// Worst residual across all families.
    pub fn max_residual(&self) -> f64 {
        [
            self.inverse_identity,
            self.sum_rule,
            self.reciprocal_rules,
            self.weighted_rules,
            self.vandermonde_factorization,
            self.exponent_sums,
            self.reciprocal_node_sum,
            self.vandermonde_inverse,
            self.extension_identity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rel(defect: f64, scale: f64) -> f64 {
    defect.abs() / scale.abs().max(1.0)
}

/// Multiply-out of `prod (t - r_i)`, ascending degree coefficients.
fn poly_coeffs(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; roots.len() + 1];
    c[0] = 1.0;
    let mut deg = 0;
    for &r in roots {
        deg += 1;
        for k in (1..=deg).rev() {
            c[k] = c[k - 1] - r * c[k];
        }
        c[0] = -r * c[0];
    }
    c
}

/// Inverse of the node-per-column Vandermonde `V_{ij} = t_j^i` (0-based),
/// via elementary symmetric polynomials of the complementary node sets.
pub fn vandermonde_inverse(t: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        // Polynomial with roots {t} \ {t_i}: coefficients give the
        // elementary symmetric sums of the complement.
        let others: Vec<f64> = (0..n).filter(|&k| k != i).map(|k| t[k]).collect();
        let coeffs = poly_coeffs(&others); // degree n-1, ascending
        let mut denom = 1.0;
        for &o in &others {
            denom *= t[i] - o;
        }
        // Row i of V^-1: (V^-1)_{ij} contracts with column powers; the
        // ascending coefficient c_j of prod(t - t_k) over the complement is
        // (-1)^{n-1-j} e_{n-1-j}(complement), exactly the needed entry.
        for (j, &c) in coeffs.iter().enumerate() {
            inv[i * n + j] = c / denom;
        }
    }
    inv
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn max_abs_off_identity(m: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[i * n + j] - want).abs());
        }
    }
    worst
}

/// Evaluates every identity family on one node pair and reports relative
/// residuals. Requires all nodes nonzero (reciprocal identities).
pub fn cauchy_identity_suite(cp: &CauchyPair) -> Result<IdentityReport> {
    let n = cp.n();
    let (x, y) = (cp.x(), cp.y());
    for v in x.iter().chain(y.iter()) {
        if v.abs() < 1e-12 {
            return Err(Error::ZeroSpectrum { min_abs: v.abs() });
        }
    }
    let c = cp.matrix();
    let inv = cauchy_inverse(cp);

    let inverse_identity = max_abs_off_identity(&mat_mul(&c, &inv, n), n);

    let sum_gap: f64 = (0..n).map(|k| x[k] - y[k]).sum();
    let total: f64 = inv.iter().sum();
    let sum_rule = rel(total - sum_gap, sum_gap);

    let prod_x: f64 = x.iter().product();
    let prod_y: f64 = y.iter().product();
    let mut s_recip_x = 0.0;
    let mut s_recip_y = 0.0;
    let mut s_weight_xy = 0.0;
    let mut s_weight_yx = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = inv[i * n + j];
            s_recip_x += e / x[j];
            s_recip_y += e / y[i];
            s_weight_xy += y[i] * e / x[j];
            s_weight_yx += e * x[j] / y[i];
        }
    }
    let r1a = rel(s_recip_x - (1.0 - prod_y / prod_x), 1.0 - prod_y / prod_x);
    let r1b = rel(s_recip_y - (prod_x / prod_y - 1.0), prod_x / prod_y - 1.0);
    let reciprocal_rules = r1a.max(r1b);
    let r2a = rel(
        s_weight_xy - (prod_y / prod_x) * sum_gap,
        (prod_y / prod_x) * sum_gap,
    );
    let r2b = rel(
        s_weight_yx - (prod_x / prod_y) * sum_gap,
        (prod_x / prod_y) * sum_gap,
    );
    let weighted_rules = r2a.max(r2b);

    // Vandermonde factorization: C = -P V_x^-1 V_y Q^-1, with
    // P = diag(prod_{i!=k}(x_k - x_i)), Q = diag(prod_i(y_k - x_i)),
    // V_t the node-per-column power matrix.
    let vx_inv = vandermonde_inverse(x);
    let mut vy = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            vy[i * n + j] = y[j].powi(i as i32);
        }
    }
    let mut p = vec![0.0; n];
    for k in 0..n {
        let mut v = 1.0;
        for i in 0..n {
            if i != k {
                v *= x[k] - x[i];
            }
        }
        p[k] = v;
    }
    let mut q = vec![0.0; n];
    for k in 0..n {
        let mut v = 1.0;
        for xi in x {
            v *= y[k] - xi;
        }
        q[k] = v;
    }
    let core = mat_mul(&vx_inv, &vy, n);
    let mut factored = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            factored[i * n + j] = -p[i] * core[i * n + j] / q[j];
        }
    }
    let mut vdm_resid = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            vdm_resid = vdm_resid.max(rel(factored[i * n + j] - c[i * n + j], c[i * n + j]));
        }
    }

    // Power-sum identities on the x nodes.
    let mut denoms = vec![1.0; n];
    for k in 0..n {
        for i in 0..n {
            if i != k {
                denoms[k] *= x[k] - x[i];
            }
        }
    }
    let mut exponent_sums = 0.0f64;
    for m in 0..=n as u32 {
        let s: f64 = (0..n).map(|k| x[k].powi(m as i32) / denoms[k]).sum();
        let want = if (m as usize) < n - 1 {
            0.0
        } else if (m as usize) == n - 1 {
            1.0
        } else {
            x.iter().sum()
        };
        // Scale by the largest term so cancellation-heavy sums are judged
        // fairly.
        let scale = (0..n)
            .map(|k| (x[k].powi(m as i32) / denoms[k]).abs())
            .fold(1.0f64, f64::max);
        exponent_sums = exponent_sums.max((s - want).abs() / scale);
    }

    let s_recip: f64 = (0..n).map(|k| 1.0 / (x[k] * denoms[k])).sum();
    let want_recip = -(if n % 2 == 0 { 1.0 } else { -1.0 }) / prod_x;
    let reciprocal_node_sum = rel(s_recip - want_recip, want_recip);

    // Explicit Vandermonde inverse against the definition.
    let mut vx = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            vx[i * n + j] = x[j].powi(i as i32);
        }
    }
    let vandermonde_inv_resid = max_abs_off_identity(&mat_mul(&vx, &vx_inv, n), n);

    // Extension identity: append a synthetic row node beyond all others and
    // compare the inverse-weighted sums with the closed-form gap products.
    let hi = x
        .iter()
        .chain(y.iter())
        .fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let x_extra = hi + 1.0;
    let h: f64 = x.iter().sum::<f64>() + x_extra - y.iter().sum::<f64>();
    let mut extension_identity = 0.0f64;
    for r in 0..n {
        let mut lhs = 0.0;
        for k in 0..n {
            lhs += inv[r * n + k] * (x[k] - h);
        }
        let mut p = LogProd::one();
        for k in 0..n {
            p.mul(y[r] - x[k]);
        }
        p.mul(y[r] - x_extra);
        for k in 0..n {
            if k != r {
                p.div(y[r] - y[k]);
            }
        }
        let rhs = -p.value();
        extension_identity = extension_identity.max(rel(lhs - rhs, rhs));
    }

    Ok(IdentityReport {
        inverse_identity,
        sum_rule,
        reciprocal_rules,
        weighted_rules,
        vandermonde_factorization: vdm_resid,
        exponent_sums,
        reciprocal_node_sum,
        vandermonde_inverse: vandermonde_inv_resid,
        extension_identity,
    })
}
