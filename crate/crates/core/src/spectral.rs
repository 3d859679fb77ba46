//! SVD, numerical rank, matrix index, subspace bases and oblique projectors.
//!
//! The SVD is a one-sided (Hestenes) Jacobi iteration on the columns of a tall
//! matrix; wide inputs are handled through their conjugate transpose. Jacobi
//! delivers singular vectors that are orthogonal to working precision even for
//! tiny singular values, which keeps rank decisions on high matrix powers stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Tolerances shared by every rank decision and every identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative rank cut-off against the largest singular value.
    /// `None` selects `max(rows, cols) * f64::EPSILON`.
    pub rank_rel_tol: Option<f64>,
    /// Threshold for residual checks on defining equations.
    pub check_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: None,
            check_tol: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: Option<f64>, check_tol: f64) -> Result<Self> {
        let cfg = Self {
            rank_rel_tol,
            check_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if let Some(r) = self.rank_rel_tol {
            if !ok(r) {
                return Err(Error::InvalidTolerance {
                    name: "rank_rel_tol",
                    value: r,
                });
            }
        }
        if !ok(self.check_tol) {
            return Err(Error::InvalidTolerance {
                name: "check_tol",
                value: self.check_tol,
            });
        }
        Ok(())
    }

    /// Absolute singular-value cut-off for a `rows x cols` matrix with largest singular value `sigma_max`.
    pub fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let rel = self
            .rank_rel_tol
            .unwrap_or(rows.max(cols) as f64 * f64::EPSILON);
        rel * sigma_max
    }
}

/// `A = left * diag(singular_values) * right^*` with full unitary factors.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdFactors {
    /// `left * Sigma * right^*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (q, n) = (self.left.rows(), self.right.rows());
        let sigma = ComplexMatrix::from_diag(q, n, &self.singular_values);
        crate::matrix::product(&[&self.left, &sigma, &self.right.conj_transpose()])
            .expect("svd factor shapes are consistent")
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above the rank cut-off.
    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        self.rank_scaled(tol, 0.0)
    }

    /// Rank with the cut-off measured against `max(sigma_max, scale)`, where
    /// `scale` bounds the rounding noise of the computation that produced the matrix.
    pub fn rank_scaled(&self, tol: &ToleranceConfig, scale: f64) -> usize {
        if self.sigma_max() == 0.0 {
            return 0;
        }
        let cut = tol.rank_cutoff(self.left.rows(), self.right.rows(), self.sigma_max().max(scale));
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// Phase of the first entry that is clearly nonzero, used to fix the gauge of a singular pair.
fn leading_phase(col: &[C64]) -> C64 {
    let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match col.iter().find(|z| z.norm() > 1e-8 * peak.max(f64::MIN_POSITIVE)) {
        Some(z) => z / z.norm(),
        None => C64::new(1.0, 0.0),
    }
}

/// Jacobi SVD of a tall (`rows >= cols`) matrix.
fn svd_tall(a: &ComplexMatrix) -> Result<SvdFactors> {
    let (q, n) = a.shape();
    debug_assert!(q >= n);
    // Column-major working copies: g = A V, v = V.
    let mut g: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();

    // Off-diagonal threshold scaled by the column length to absorb dot-product rounding.
    let eps = f64::EPSILON * q as f64;
    // Columns whose norm sits at the rounding level of the whole matrix cannot be
    // orthogonalized in the relative sense; they are frozen and treated as null directions.
    let total: f64 = g.iter().flatten().map(|z| z.norm_sqr()).sum();
    let noise = (f64::EPSILON * f64::EPSILON) * total;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha: f64 = g[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = g[j].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= noise || beta <= noise {
                    continue;
                }
                let gamma: C64 = g[i].iter().zip(&g[j]).map(|(x, y)| x.conj() * y).sum();
                let gabs = gamma.norm();
                if gabs <= eps * (alpha * beta).sqrt() || gabs < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                for cols in [&mut g, &mut v] {
                    let (lo, hi) = cols.split_at_mut(j);
                    let (x, y) = (&mut lo[i], &mut hi[0]);
                    for (xk, yk) in x.iter_mut().zip(y.iter_mut()) {
                        let yt = *yk * pc;
                        let xn = *xk * c - yt * s;
                        *yk = *xk * s + yt * c;
                        *xk = xn;
                    }
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = g
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));

    let floor = noise.sqrt().max(f64::MIN_POSITIVE);
    let mut singular_values = Vec::with_capacity(n);
    let mut right_cols = Vec::with_capacity(n);
    let mut left_cols: Vec<Vec<C64>> = Vec::with_capacity(q);
    for &k in &order {
        let sigma = norms[k];
        let phase = leading_phase(&v[k]).conj();
        let vk: Vec<C64> = v[k].iter().map(|z| z * phase).collect();
        singular_values.push(sigma);
        if sigma > floor {
            left_cols.push(g[k].iter().map(|z| z * phase / sigma).collect());
        }
        right_cols.push(vk);
    }
    complete_orthonormal(&mut left_cols, q);

    Ok(SvdFactors {
        left: from_columns(q, &left_cols),
        singular_values,
        right: from_columns(n, &right_cols),
    })
}

/// Extends orthonormal columns to an orthonormal basis of `C^dim`.
fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, dim: usize) {
    let mut candidate = 0;
    while cols.len() < dim && candidate < dim {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in candidate..dim {
            let mut x = vec![ZERO; dim];
            x[e] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in cols.iter() {
                    let proj: C64 = c.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                    for (xi, ci) in x.iter_mut().zip(c) {
                        *xi -= proj * ci;
                    }
                }
            }
            let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| nrm > *b + 1e-12) {
                best = Some((nrm, x));
            }
            if nrm > 0.5 {
                candidate = e + 1;
                break;
            }
        }
        match best {
            Some((nrm, x)) if nrm > 1e-8 => cols.push(x.iter().map(|z| z / nrm).collect()),
            _ => break,
        }
    }
    debug_assert_eq!(cols.len(), dim);
}

fn from_columns(rows: usize, cols: &[Vec<C64>]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Full singular value decomposition with unitary factors.
///
/// Singular vectors are gauge-fixed: for tall or square input the first clearly
/// nonzero entry of each right singular vector is real and positive; for wide
/// input the same holds for the left singular vectors.
pub fn svd(a: &ComplexMatrix) -> Result<SvdFactors> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.conj_transpose())?;
        Ok(SvdFactors {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        })
    }
}

pub fn numerical_rank(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    numerical_rank_scaled(a, 0.0, tol)
}

pub fn numerical_rank_scaled(a: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Result<usize> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0);
    }
    Ok(svd(a)?.rank_scaled(tol, scale))
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    Ok(svd(a)?.sigma_max())
}

/// Noise scale of a product built from `e_i` factors of norm `norm_i`:
/// `(sum e_i) * prod norm_i^e_i`. For a non-normal base `||A^p||` can be far
/// below `||A||^p`, while the rounding error of the computed power tracks the latter.
pub fn product_scale(factors: &[(f64, usize)]) -> f64 {
    let count: usize = factors.iter().map(|&(_, e)| e).sum();
    let prod: f64 = factors.iter().map(|&(x, e)| x.powi(e as i32)).product();
    count as f64 * prod
}

/// Smallest `j >= 0` with `rank(A^j) == rank(A^{j+1})`.
pub fn index(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "index",
            shape: a.shape(),
        });
    }
    index_bounded(a, spectral_norm(a)?, tol)
}

/// [`index`] with the rank of `A^j` judged against `norm_bound^j`, where
/// `norm_bound >= ||A||_2` also covers the rounding carried by a computed `A`.
pub fn index_bounded(a: &ComplexMatrix, norm_bound: f64, tol: &ToleranceConfig) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "index",
            shape: a.shape(),
        });
    }
    let n = a.rows();
    let base = norm_bound;
    let mut prev = n;
    for j in 0..=n {
        let scale = product_scale(&[(base, j + 1)]);
        let next = numerical_rank_scaled(&a.power(j + 1)?, scale, tol)?;
        if next == prev {
            return Ok(j);
        }
        prev = next;
    }
    Err(Error::IndexNotStabilized { cap: n })
}

/// Orthonormal basis of `R(A)`; zero columns when `A` is numerically zero.
pub fn range_basis(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    range_basis_scaled(a, 0.0, tol)
}

pub fn range_basis_scaled(a: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(ComplexMatrix::zeros(a.rows(), 0));
    }
    let f = svd(a)?;
    Ok(f.left.leading_columns(f.rank_scaled(tol, scale)))
}

/// Orthonormal basis of `N(A)`.
pub fn null_basis(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    null_basis_scaled(a, 0.0, tol)
}

pub fn null_basis_scaled(a: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let n = a.cols();
    if a.rows() == 0 || n == 0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let f = svd(a)?;
    let r = f.rank_scaled(tol, scale);
    Ok(f.right.block(0, n, r, n))
}

/// Orthogonal projector `P_{R(A)} = Q Q^*` with `Q = range_basis(A)`.
pub fn orthogonal_projector(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    orthogonal_projector_scaled(a, 0.0, tol)
}

pub fn orthogonal_projector_scaled(a: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let q = range_basis_scaled(a, scale, tol)?;
    q.matmul(&q.conj_transpose())
}

/// `P_{T,S}`: the idempotent with range spanned by `t_basis` and null space spanned by `s_basis`.
pub fn oblique_projector(
    t_basis: &ComplexMatrix,
    s_basis: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    let n = t_basis.rows();
    let joint = t_basis.hcat(s_basis)?;
    if joint.cols() != n {
        return Err(Error::NonComplementary {
            rank: numerical_rank(&joint, tol)?.min(joint.cols()),
            dim: n,
        });
    }
    let rank = numerical_rank(&joint, tol)?;
    if rank != n {
        return Err(Error::NonComplementary { rank, dim: n });
    }
    let inv = crate::geninv::moore_penrose(&joint, tol)?;
    let keep = t_basis.hcat(&ComplexMatrix::zeros(n, s_basis.cols()))?;
    keep.matmul(&inv)
}

/// Indices of `AW` and `WA` for a weighted pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexInfo {
    pub ind_aw: usize,
    pub ind_wa: usize,
    pub k: usize,
}

impl IndexInfo {
    pub fn compute(a: &ComplexMatrix, w: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let bound = spectral_norm(a)? * spectral_norm(w)?;
        Self::compute_bounded(a, w, bound, tol)
    }

    /// Indices with rank decisions measured against `norm_bound >= ||A|| ||W||`.
    pub fn compute_bounded(a: &ComplexMatrix, w: &ComplexMatrix, norm_bound: f64, tol: &ToleranceConfig) -> Result<Self> {
        let ind_aw = index_bounded(&a.matmul(w)?, norm_bound, tol)?;
        let ind_wa = index_bounded(&w.matmul(a)?, norm_bound, tol)?;
        if ind_aw.abs_diff(ind_wa) > 1 {
            return Err(Error::IndexMismatch { ind_aw, ind_wa });
        }
        Ok(Self {
            ind_aw,
            ind_wa,
            k: ind_aw.max(ind_wa),
        })
    }
}
