//! Classical and W-weighted generalized inverses.
//!
//! Every inverse is assembled from matrix powers and SVD pseudo-inverses only.
//! The `*_residuals` functions evaluate the defining equations of each inverse
//! so callers (and the test-suite) can confirm a result instead of trusting the
//! construction route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{product, ComplexMatrix};
use crate::spectral::{self, IndexInfo, ToleranceConfig};

/// A validated `(A, W)` pair: `A` is `q x n`, `W` is a nonzero `n x q` weight.
#[derive(Debug, Clone)]
pub struct WeightedPair {
    a: ComplexMatrix,
    w: ComplexMatrix,
    index_info: IndexInfo,
    tol: ToleranceConfig,
    norms: Norms,
}

/// Upper bounds on `||A||_2` and `||W||_2`. For a pair computed from another
/// one they come from the factors, so they also bound the rounding noise that
/// `A` and `W` carry; every rank cut-off on a power is measured against them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub a: f64,
    pub w: f64,
}

impl Norms {
    fn compute(a: &ComplexMatrix, w: &ComplexMatrix, floor: Norms) -> Result<Self> {
        Ok(Self {
            a: spectral::spectral_norm(a)?.max(floor.a),
            w: spectral::spectral_norm(w)?.max(floor.w),
        })
    }

    /// Bound on `||AW||_2` and `||WA||_2`.
    pub fn product(&self) -> f64 {
        self.a * self.w
    }
}

impl WeightedPair {
    pub fn new(a: ComplexMatrix, w: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(a, w, ToleranceConfig::default())
    }

    pub fn with_tolerance(a: ComplexMatrix, w: ComplexMatrix, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        if w.shape() != (a.cols(), a.rows()) {
            return Err(Error::DimensionMismatch {
                op: "weighted pair",
                left: a.shape(),
                right: w.shape(),
            });
        }
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let norms = Norms::compute(&a, &w, Norms { a: 0.0, w: 0.0 })?;
        let index_info = IndexInfo::compute_bounded(&a, &w, norms.product(), &tol)?;
        Ok(Self {
            a,
            w,
            index_info,
            tol,
            norms,
        })
    }

    /// Pair with the same weight and tolerance but a different `A`.
    pub fn rebind(&self, a: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(a, self.w.clone(), self.tol)
    }

    /// Like [`WeightedPair::with_tolerance`] for a computed `A` or `W`: `bounds`
    /// bounds the norms of the factors they were computed from, and every rank
    /// decision (indices included) is measured against it.
    pub fn with_bounds(a: ComplexMatrix, w: ComplexMatrix, tol: ToleranceConfig, bounds: Norms) -> Result<Self> {
        tol.validate()?;
        if w.shape() != (a.cols(), a.rows()) {
            return Err(Error::DimensionMismatch {
                op: "weighted pair",
                left: a.shape(),
                right: w.shape(),
            });
        }
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let norms = Norms::compute(&a, &w, bounds)?;
        let index_info = IndexInfo::compute_bounded(&a, &w, norms.product(), &tol)?;
        Ok(Self {
            a,
            w,
            index_info,
            tol,
            norms,
        })
    }

    /// The pair `(A^{*s}, W)` for `s >= 1`, indices recomputed.
    pub fn star_power_pair(&self, s: usize) -> Result<Self> {
        let bound = self.norms.a * self.norms.product().powi(s as i32 - 1);
        let bounds = Norms { a: bound, w: self.norms.w };
        Self::with_bounds(self.star_power(s)?, self.w.clone(), self.tol, bounds)
    }

    /// Pair whose indices are known analytically (upper bounds are fine for
    /// the power formulas) and whose norms are bounded by `bounds`.
    /// Shape and weight checks still apply.
    pub(crate) fn derived(
        a: ComplexMatrix,
        w: ComplexMatrix,
        index_info: IndexInfo,
        tol: ToleranceConfig,
        bounds: Norms,
    ) -> Result<Self> {
        if w.shape() != (a.cols(), a.rows()) {
            return Err(Error::DimensionMismatch {
                op: "weighted pair",
                left: a.shape(),
                right: w.shape(),
            });
        }
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let norms = Norms::compute(&a, &w, bounds)?;
        Ok(Self {
            a,
            w,
            index_info,
            tol,
            norms,
        })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn index_info(&self) -> IndexInfo {
        self.index_info
    }

    /// `k = max(Ind(AW), Ind(WA))`.
    pub fn k(&self) -> usize {
        self.index_info.k
    }

    pub fn tol(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn norms(&self) -> Norms {
        self.norms
    }

    pub fn q(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn has_identity_weight(&self) -> bool {
        self.w.is_identity()
    }

    pub fn aw(&self) -> ComplexMatrix {
        self.a.matmul(&self.w).expect("pair shapes")
    }

    pub fn wa(&self) -> ComplexMatrix {
        self.w.matmul(&self.a).expect("pair shapes")
    }

    /// `A^{*l}` for this pair's weight.
    pub fn star_power(&self, l: usize) -> Result<ComplexMatrix> {
        w_power(&self.a, &self.w, l)
    }

    /// `A^{*l} W = (AW)^l`, defined for `l = 0` as `I_q`.
    pub fn star_power_w(&self, l: usize) -> Result<ComplexMatrix> {
        w_power_then_weight(&self.a, &self.w, l)
    }

    /// `W A^{*l} = (WA)^l`, defined for `l = 0` as `I_n`.
    pub fn w_star_power(&self, l: usize) -> Result<ComplexMatrix> {
        weight_then_w_power(&self.w, &self.a, l)
    }
}

/// W-product `A * B = A W B`.
pub fn w_product(a: &ComplexMatrix, b: &ComplexMatrix, w: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.shape() != b.shape() || w.shape() != (a.cols(), a.rows()) {
        return Err(Error::DimensionMismatch {
            op: "w_product",
            left: a.shape(),
            right: w.shape(),
        });
    }
    product(&[a, w, b])
}

/// `A^{*l} = A (WA)^{l-1}` for `l >= 1`. The zero power only exists fused with
/// `W`; see [`w_power_then_weight`] and [`weight_then_w_power`].
pub fn w_power(a: &ComplexMatrix, w: &ComplexMatrix, l: usize) -> Result<ComplexMatrix> {
    if l == 0 {
        return Err(Error::InvalidOrder { m: 0, min: 1 });
    }
    a.matmul(&weight_then_w_power(w, a, l - 1)?)
}

/// `A^{*l} W`, with `A^{*0} W = I_q`.
pub fn w_power_then_weight(a: &ComplexMatrix, w: &ComplexMatrix, l: usize) -> Result<ComplexMatrix> {
    a.matmul(w)?.power(l)
}

/// `W A^{*l}`, with `W A^{*0} = I_n`.
pub fn weight_then_w_power(w: &ComplexMatrix, a: &ComplexMatrix, l: usize) -> Result<ComplexMatrix> {
    w.matmul(a)?.power(l)
}

fn require_square(a: &ComplexMatrix, op: &'static str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { op, shape: a.shape() })
    }
}

/// Moore-Penrose inverse from the SVD, reciprocating singular values above the rank cut-off.
pub fn moore_penrose(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    moore_penrose_scaled(a, 0.0, tol)
}

/// Moore-Penrose inverse with the rank cut-off measured against
/// `max(sigma_max, scale)`; see [`spectral::product_scale`].
pub fn moore_penrose_scaled(a: &ComplexMatrix, scale: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let (q, n) = a.shape();
    if q == 0 || n == 0 {
        return Ok(ComplexMatrix::zeros(n, q));
    }
    let f = spectral::svd(a)?;
    let r = f.rank_scaled(tol, scale);
    // X = V_r diag(1/s) U_r^*
    let v = &f.right;
    let u = &f.left;
    Ok(ComplexMatrix::from_fn(n, q, |i, j| {
        (0..r)
            .map(|k| v.get(i, k) * u.get(j, k).conj() / f.singular_values[k])
            .sum()
    }))
}

/// Drazin inverse `A^l (A^{2l+1})^+ A^l` for any `l >= Ind(A)`.
pub fn drazin_with_index(a: &ComplexMatrix, l: usize, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    drazin_bounded(a, l, spectral::spectral_norm(a)?, tol)
}

/// [`drazin_with_index`] with the rank cut-off of `A^{2l+1}` measured against
/// `norm_bound^{2l+1}`, where `norm_bound >= ||A||_2`.
pub fn drazin_bounded(a: &ComplexMatrix, l: usize, norm_bound: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "drazin")?;
    let al = a.power(l)?;
    let scale = spectral::product_scale(&[(norm_bound, 2 * l + 1)]);
    let mid = moore_penrose_scaled(&a.power(2 * l + 1)?, scale, tol)?;
    product(&[&al, &mid, &al])
}

pub fn drazin(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "drazin")?;
    drazin_with_index(a, spectral::index(a, tol)?, tol)
}

pub fn group_inverse(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "group_inverse")?;
    let ind = spectral::index(a, tol)?;
    if ind > 1 {
        return Err(Error::Nonexistent {
            inverse: "group",
            index: ind,
        });
    }
    drazin_with_index(a, ind, tol)
}

/// Core-EP inverse `A^D A^d (A^d)^+` for any `d >= Ind(A)`.
pub fn core_ep_with_index(a: &ComplexMatrix, d: usize, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    core_ep_bounded(a, d, spectral::spectral_norm(a)?, tol)
}

/// [`core_ep_with_index`] with rank cut-offs measured against powers of `norm_bound >= ||A||_2`.
pub fn core_ep_bounded(a: &ComplexMatrix, d: usize, norm_bound: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "core_ep")?;
    let ad = a.power(d)?;
    let dz = drazin_bounded(a, d, norm_bound, tol)?;
    let scale = spectral::product_scale(&[(norm_bound, d)]);
    product(&[&dz, &ad, &moore_penrose_scaled(&ad, scale, tol)?])
}

pub fn core_ep(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "core_ep")?;
    core_ep_with_index(a, spectral::index(a, tol)?, tol)
}

/// Core inverse `A^# P_{R(A)}`; only exists for `Ind(A) <= 1`.
pub fn core_inverse(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "core_inverse")?;
    let ind = spectral::index(a, tol)?;
    if ind > 1 {
        return Err(Error::Nonexistent {
            inverse: "core",
            index: ind,
        });
    }
    let g = drazin_with_index(a, ind, tol)?;
    product(&[&g, a, &moore_penrose(a, tol)?])
}

/// m-weak group inverse `(A^{core-EP})^{m+1} A^m`.
pub fn m_weak_group(a: &ComplexMatrix, m: usize, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_square(a, "m_weak_group")?;
    m_weak_group_with_index(a, m, spectral::index(a, tol)?, tol)
}

pub fn m_weak_group_with_index(
    a: &ComplexMatrix,
    m: usize,
    d: usize,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    m_weak_group_bounded(a, m, d, spectral::spectral_norm(a)?, tol)
}

pub fn m_weak_group_bounded(
    a: &ComplexMatrix,
    m: usize,
    d: usize,
    norm_bound: f64,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    if m < 1 {
        return Err(Error::InvalidOrder { m, min: 1 });
    }
    let c = core_ep_bounded(a, d, norm_bound, tol)?;
    c.power(m + 1)?.matmul(&a.power(m)?)
}

pub fn weak_group(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    m_weak_group(a, 1, tol)
}

/// W-weighted Drazin inverse `A ((WA)^D)^2`.
pub fn weighted_drazin(p: &WeightedPair) -> Result<ComplexMatrix> {
    let d = drazin_bounded(&p.wa(), p.index_info.ind_wa, p.norms.product(), &p.tol)?;
    product(&[&p.a, &d, &d])
}

/// Weighted core-EP inverse `A ((WA)^{core-EP})^2`.
pub fn weighted_core_ep(p: &WeightedPair) -> Result<ComplexMatrix> {
    let c = core_ep_bounded(&p.wa(), p.index_info.ind_wa, p.norms.product(), &p.tol)?;
    product(&[&p.a, &c, &c])
}

fn require_k_at_most_one(p: &WeightedPair, inverse: &'static str) -> Result<()> {
    if p.k() > 1 {
        Err(Error::Nonexistent { inverse, index: p.k() })
    } else {
        Ok(())
    }
}

/// W-weighted group inverse `A ((WA)^#)^2`; needs `k <= 1`.
pub fn weighted_group(p: &WeightedPair) -> Result<ComplexMatrix> {
    require_k_at_most_one(p, "weighted group")?;
    let g = drazin_bounded(&p.wa(), p.index_info.ind_wa, p.norms.product(), &p.tol)?;
    product(&[&p.a, &g, &g])
}

/// Weighted core inverse; coincides with the weighted core-EP inverse when `k <= 1`.
pub fn weighted_core(p: &WeightedPair) -> Result<ComplexMatrix> {
    require_k_at_most_one(p, "weighted core")?;
    weighted_core_ep(p)
}

/// W-weighted weak group inverse `(A^{core-EP,W})^{*2} W A`.
pub fn weighted_weak_group(p: &WeightedPair) -> Result<ComplexMatrix> {
    let c = weighted_core_ep(p)?;
    product(&[&c, &p.w, &c, &p.w, &p.a])
}

/// One named residual of a defining equation or identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

/// `||lhs - rhs||_F / (1 + max(||lhs||_F, ||rhs||_F))`.
pub fn scaled_gap(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<f64> {
    let scale = 1.0 + lhs.frobenius_norm().max(rhs.frobenius_norm());
    Ok(lhs.distance(rhs)? / scale)
}

/// The four Penrose equations for `X = A^+`.
pub fn penrose_residuals(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<Vec<Residual>> {
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    Ok(vec![
        Residual::new("penrose.axa", scaled_gap(&ax.matmul(a)?, a)?),
        Residual::new("penrose.xax", scaled_gap(&xa.matmul(x)?, x)?),
        Residual::new("penrose.ax_hermitian", scaled_gap(&ax.conj_transpose(), &ax)?),
        Residual::new("penrose.xa_hermitian", scaled_gap(&xa.conj_transpose(), &xa)?),
    ])
}

/// `(AW)^k = (AW)^{k+1} X W`, `X = X W A W X`, `A W X = X W A`.
pub fn weighted_drazin_residuals(p: &WeightedPair, x: &ComplexMatrix) -> Result<Vec<Residual>> {
    let (a, w, k) = (&p.a, &p.w, p.k());
    let awk = p.star_power_w(k)?;
    let awk1 = p.star_power_w(k + 1)?;
    Ok(vec![
        Residual::new("w_drazin.power", scaled_gap(&awk, &product(&[&awk1, x, w])?)?),
        Residual::new("w_drazin.outer", scaled_gap(x, &product(&[x, w, a, w, x])?)?),
        Residual::new(
            "w_drazin.commute",
            scaled_gap(&product(&[a, w, x])?, &product(&[x, w, a])?)?,
        ),
    ])
}

/// `W A W X = P_{R((WA)^k)}` and `R(X) ⊆ R((AW)^k)`.
pub fn weighted_core_ep_residuals(p: &WeightedPair, x: &ComplexMatrix) -> Result<Vec<Residual>> {
    let (a, w, k) = (&p.a, &p.w, p.k());
    let p_wa = spectral::orthogonal_projector_scaled(
        &p.w_star_power(k)?,
        spectral::product_scale(&[(p.norms.product(), k)]),
        &p.tol,
    )?;
    let p_aw = spectral::orthogonal_projector_scaled(
        &p.star_power_w(k)?,
        spectral::product_scale(&[(p.norms.product(), k)]),
        &p.tol,
    )?;
    let outside = x.sub(&p_aw.matmul(x)?)?.frobenius_norm() / (1.0 + x.frobenius_norm());
    Ok(vec![
        Residual::new("w_core_ep.projector", scaled_gap(&product(&[w, a, w, x])?, &p_wa)?),
        Residual::new("w_core_ep.range", outside),
    ])
}

/// `A W X^{*2} = X` and `A W X = A^{core-EP,W} W A`.
pub fn weighted_weak_group_residuals(p: &WeightedPair, x: &ComplexMatrix) -> Result<Vec<Residual>> {
    let (a, w) = (&p.a, &p.w);
    let c = weighted_core_ep(p)?;
    Ok(vec![
        Residual::new("w_weak_group.square", scaled_gap(&product(&[a, w, x, w, x])?, x)?),
        Residual::new(
            "w_weak_group.core_ep",
            scaled_gap(&product(&[a, w, x])?, &product(&[&c, w, a])?)?,
        ),
    ])
}

fn check(residuals: Vec<Residual>, tol: f64) -> Result<()> {
    match residuals.into_iter().find(|r| r.value.is_nan() || r.value > tol) {
        Some(r) => Err(Error::VerificationFailed {
            name: r.name,
            residual: r.value,
            tol,
        }),
        None => Ok(()),
    }
}

/// Checked variants: compute, then confirm the defining equations at `check_tol`.
pub mod verified {
    use super::*;

    pub fn moore_penrose(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
        let x = super::moore_penrose(a, tol)?;
        check(penrose_residuals(a, &x)?, tol.check_tol)?;
        Ok(x)
    }

    pub fn weighted_drazin(p: &WeightedPair) -> Result<ComplexMatrix> {
        let x = super::weighted_drazin(p)?;
        check(weighted_drazin_residuals(p, &x)?, p.tol.check_tol)?;
        Ok(x)
    }

    pub fn weighted_core_ep(p: &WeightedPair) -> Result<ComplexMatrix> {
        let x = super::weighted_core_ep(p)?;
        check(weighted_core_ep_residuals(p, &x)?, p.tol.check_tol)?;
        Ok(x)
    }

    pub fn weighted_weak_group(p: &WeightedPair) -> Result<ComplexMatrix> {
        let x = super::weighted_weak_group(p)?;
        check(weighted_weak_group_residuals(p, &x)?, p.tol.check_tol)?;
        Ok(x)
    }
}
