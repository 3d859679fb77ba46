//! The W-weighted m-weak group inverse
//! `A^{wm,W} = (A^{core-EP,W})^{*(m+1)} W A^{*m}`
//! and its alternative representations, projectors and SVD canonical form.
//!
//! Notation in comments: `X^{*l}` is the l-fold W-product `X (WX)^{l-1}`,
//! `core-EP` the core-EP inverse, `wm` the m-weak group inverse, `#` the group
//! inverse and `core` the core inverse.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::{self, scaled_gap, Norms, Residual, WeightedPair};
use crate::matrix::{product, ComplexMatrix, C64};
use crate::spectral::{self, IndexInfo};

/// The computation routes for `A^{wm,W}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReprMethod {
    /// `(A^{core-EP,W})^{*(m+1)} W A^{*m}`
    Definitional,
    /// `(A^{D,W})^{*(m+1)} P_{R((WA)^k)} W A^{*m}`
    DrazinProjector,
    /// `A^{*l} W (W A^{*(l+m+1)} W)^+ W A^{*m}` for `l >= k`; `None` selects `l = k`.
    PinvPower(Option<usize>),
    /// `(W A^{*(m+1)} W P_{R((AW)^k)})^+ W A^{*m}`
    PinvProjector,
    /// `A^{*(m-1)} W (A^{*m})^{w,W}`
    WeakGroupRight,
    /// `(A^{w,W})^{*m} W A^{*(m-1)}`
    WeakGroupLeft,
    /// `((AW)^m A^{core-EP,W} W A)^{#,W} W A^{*(m-1)}`
    WeightedGroup,
    /// `A ((WA)^{wm})^2`
    SquaredMwg,
    /// `A^{*(k-m)} W (A^{*(k+1)})^{core,W} W A^{*m}` for `k >= m`
    CoreKPlus1,
    /// `A^{*(k-m-1)} W (A^{*k})^{core,W} W A^{*m}` for `k >= m+1`
    CoreK,
    /// `(AW)^{wm} A (WA)^{wm}`
    BilateralMwg,
    /// `(AW)^{core-EP} A (WA)^{wm}`
    BilateralCoreEp,
    /// `(AW)^D A (WA)^{wm}`
    BilateralDrazin,
    /// `T [[(S1K1)^{wm,S2K2}, B], [0, 0]] S^*` from the SVDs of `A` and `W`
    SvdCanonical,
}

impl ReprMethod {
    /// All fourteen routes, `PinvPower` at its default `l = k`.
    pub const ALL: [ReprMethod; 14] = [
        ReprMethod::Definitional,
        ReprMethod::DrazinProjector,
        ReprMethod::PinvPower(None),
        ReprMethod::PinvProjector,
        ReprMethod::WeakGroupRight,
        ReprMethod::WeakGroupLeft,
        ReprMethod::WeightedGroup,
        ReprMethod::SquaredMwg,
        ReprMethod::CoreKPlus1,
        ReprMethod::CoreK,
        ReprMethod::BilateralMwg,
        ReprMethod::BilateralCoreEp,
        ReprMethod::BilateralDrazin,
        ReprMethod::SvdCanonical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ReprMethod::Definitional => "Definitional",
            ReprMethod::DrazinProjector => "DrazinProjector",
            ReprMethod::PinvPower(_) => "PinvPower",
            ReprMethod::PinvProjector => "PinvProjector",
            ReprMethod::WeakGroupRight => "WeakGroupRight",
            ReprMethod::WeakGroupLeft => "WeakGroupLeft",
            ReprMethod::WeightedGroup => "WeightedGroup",
            ReprMethod::SquaredMwg => "SquaredMwg",
            ReprMethod::CoreKPlus1 => "CoreKPlus1",
            ReprMethod::CoreK => "CoreK",
            ReprMethod::BilateralMwg => "BilateralMwg",
            ReprMethod::BilateralCoreEp => "BilateralCoreEp",
            ReprMethod::BilateralDrazin => "BilateralDrazin",
            ReprMethod::SvdCanonical => "SvdCanonical",
        }
    }

    /// The formula this route evaluates.
    pub fn formula(&self) -> &'static str {
        match self {
            ReprMethod::Definitional => "(A^{core-EP,W})^{*(m+1)} W A^{*m}",
            ReprMethod::DrazinProjector => "(A^{D,W})^{*(m+1)} P_{R((WA)^k)} W A^{*m}",
            ReprMethod::PinvPower(_) => "A^{*l} W (W A^{*(l+m+1)} W)^+ W A^{*m}, l >= k",
            ReprMethod::PinvProjector => "(W A^{*(m+1)} W P_{R((AW)^k)})^+ W A^{*m}",
            ReprMethod::WeakGroupRight => "A^{*(m-1)} W (A^{*m})^{w,W}",
            ReprMethod::WeakGroupLeft => "(A^{w,W})^{*m} W A^{*(m-1)}",
            ReprMethod::WeightedGroup => "((AW)^m A^{core-EP,W} W A)^{#,W} W A^{*(m-1)}",
            ReprMethod::SquaredMwg => "A ((WA)^{wm})^2",
            ReprMethod::CoreKPlus1 => "A^{*(k-m)} W (A^{*(k+1)})^{core,W} W A^{*m}, k >= m",
            ReprMethod::CoreK => "A^{*(k-m-1)} W (A^{*k})^{core,W} W A^{*m}, k >= m+1",
            ReprMethod::BilateralMwg => "(AW)^{wm} A (WA)^{wm}",
            ReprMethod::BilateralCoreEp => "(AW)^{core-EP} A (WA)^{wm}",
            ReprMethod::BilateralDrazin => "(AW)^D A (WA)^{wm}",
            ReprMethod::SvdCanonical => "T [[(S1K1)^{wm,S2K2}, B], [0, 0]] S^*",
        }
    }
}

impl fmt::Display for ReprMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReprMethod::PinvPower(Some(l)) => write!(f, "PinvPower({l})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ReprMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "representation method",
            name: s.to_string(),
        };
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("PinvPower") {
            if rest.is_empty() {
                return Ok(ReprMethod::PinvPower(None));
            }
            let l = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.trim().parse::<usize>().ok())
                .ok_or_else(unknown)?;
            return Ok(ReprMethod::PinvPower(Some(l)));
        }
        ReprMethod::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(unknown)
    }
}

/// The four projectors built from `X = A^{wm,W}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[allow(non_camel_case_types)]
pub enum ProjectorKind {
    /// `W A W X = P_{R((WA)^k), N(((WA)^k)^* (WA)^m)}`
    WAW_X,
    /// `X W A W = P_{R((AW)^k), N(((WA)^k)^* (WA)^{m+1} W)}`
    X_WAW,
    /// `A W X W = P_{R((AW)^k), N(((WA)^k)^* W (AW)^m)}`
    AW_X_W,
    /// `W X W A = P_{R((WA)^k), N(((WA)^k)^* (WA)^{m+1})}`
    W_X_WA,
}

impl ProjectorKind {
    pub const ALL: [ProjectorKind; 4] = [
        ProjectorKind::WAW_X,
        ProjectorKind::X_WAW,
        ProjectorKind::AW_X_W,
        ProjectorKind::W_X_WA,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProjectorKind::WAW_X => "WAW_X",
            ProjectorKind::X_WAW => "X_WAW",
            ProjectorKind::AW_X_W => "AW_X_W",
            ProjectorKind::W_X_WA => "W_X_WA",
        }
    }
}

impl fmt::Display for ProjectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProjectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProjectorKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::UnknownName {
                kind: "projector kind",
                name: s.to_string(),
            })
    }
}

fn require_order(m: usize, min: usize) -> Result<()> {
    if m < min {
        Err(Error::InvalidOrder { m, min })
    } else {
        Ok(())
    }
}

/// `A^{wm,W}` by its definition.
pub fn wmwg(p: &WeightedPair, m: usize) -> Result<ComplexMatrix> {
    require_order(m, 1)?;
    let c = geninv::weighted_core_ep(p)?;
    let c_pow = geninv::w_power(&c, p.w(), m + 1)?;
    product(&[&c_pow, p.w(), &p.star_power(m)?])
}

fn inapplicable(method: ReprMethod, condition: String) -> Error {
    Error::InapplicableMethod {
        method: method.to_string(),
        condition,
    }
}

/// Pair `(A', W)` where `A'` shares the weight and the caller supplies index bounds.
/// Any upper bound on the true indices is a valid input to the power formulas.
/// `a_bound` bounds the norm of `A'` through the norms of its factors.
fn derived_pair(
    p: &WeightedPair,
    a: ComplexMatrix,
    ind_aw: usize,
    ind_wa: usize,
    a_bound: f64,
) -> Result<WeightedPair> {
    let index_info = IndexInfo {
        ind_aw,
        ind_wa,
        k: ind_aw.max(ind_wa),
    };
    let bounds = Norms {
        a: a_bound,
        w: p.norms().w,
    };
    WeightedPair::derived(a, p.w().clone(), index_info, *p.tol(), bounds)
}

/// `Ind(B^s) = ceil(Ind(B) / s)`.
fn index_of_power(ind: usize, s: usize) -> usize {
    ind.div_ceil(s)
}

/// `A^{wm,W}` through the chosen route.
pub fn represent(p: &WeightedPair, m: usize, method: ReprMethod) -> Result<ComplexMatrix> {
    require_order(m, 1)?;
    let (a, w, k, tol) = (p.a(), p.w(), p.k(), p.tol());
    let info = p.index_info();
    let nm = p.norms();
    let (na, nw, naw) = (nm.a, nm.w, nm.product());
    match method {
        ReprMethod::Definitional => wmwg(p, m),
        ReprMethod::DrazinProjector => {
            let d = geninv::weighted_drazin(p)?;
            let d_pow = geninv::w_power(&d, w, m + 1)?;
            let scale = spectral::product_scale(&[(naw, k)]);
            let proj = spectral::orthogonal_projector_scaled(&p.w_star_power(k)?, scale, tol)?;
            product(&[&d_pow, &proj, w, &p.star_power(m)?])
        }
        ReprMethod::PinvPower(l) => {
            let l = l.unwrap_or(k);
            if l < k {
                return Err(inapplicable(method, format!("l >= k (l = {l}, k = {k})")));
            }
            let inner = p.w_star_power(l + m + 1)?.matmul(w)?;
            let scale = spectral::product_scale(&[(naw, l + m + 1), (nw, 1)]);
            product(&[
                &p.star_power_w(l)?,
                &geninv::moore_penrose_scaled(&inner, scale, tol)?,
                &p.w_star_power(m)?,
            ])
        }
        ReprMethod::PinvProjector => {
            let proj = spectral::orthogonal_projector_scaled(
                &p.star_power_w(k)?,
                spectral::product_scale(&[(naw, k)]),
                tol,
            )?;
            let inner = product(&[&p.w_star_power(m + 1)?, w, &proj])?;
            let scale = spectral::product_scale(&[(naw, m + 1), (nw, 1), (1.0, 1)]);
            geninv::moore_penrose_scaled(&inner, scale, tol)?.matmul(&p.w_star_power(m)?)
        }
        ReprMethod::WeakGroupRight => {
            let am = derived_pair(
                p,
                p.star_power(m)?,
                index_of_power(info.ind_aw, m),
                index_of_power(info.ind_wa, m),
                na * naw.powi(m as i32 - 1),
            )?;
            p.star_power_w(m - 1)?.matmul(&geninv::weighted_weak_group(&am)?)
        }
        ReprMethod::WeakGroupLeft => {
            let y = geninv::weighted_weak_group(p)?;
            geninv::w_power(&y, w, m)?.matmul(&p.w_star_power(m - 1)?)
        }
        ReprMethod::WeightedGroup => {
            let cep = geninv::weighted_core_ep(p)?;
            let bound = naw.powi(m as i32 + 1) * spectral::spectral_norm(&cep)?;
            let c = product(&[&p.star_power_w(m)?, &cep, w, a])?;
            // Both (CW) and (WC) are group invertible.
            let cp = derived_pair(p, c, 1, 1, bound)?;
            geninv::weighted_group(&cp)?.matmul(&p.w_star_power(m - 1)?)
        }
        ReprMethod::SquaredMwg => {
            let mwg = geninv::m_weak_group_bounded(&p.wa(), m, info.ind_wa, naw, tol)?;
            product(&[a, &mwg, &mwg])
        }
        ReprMethod::CoreKPlus1 => {
            if k < m {
                return Err(inapplicable(method, format!("k >= m (k = {k}, m = {m})")));
            }
            let ak1 = derived_pair(p, p.star_power(k + 1)?, 1, 1, na * naw.powi(k as i32))?;
            product(&[
                &p.star_power_w(k - m)?,
                &geninv::weighted_core(&ak1)?,
                &p.w_star_power(m)?,
            ])
        }
        ReprMethod::CoreK => {
            if k < m + 1 {
                return Err(inapplicable(method, format!("k >= m+1 (k = {k}, m = {m})")));
            }
            let akp = derived_pair(p, p.star_power(k)?, 1, 1, na * naw.powi(k as i32 - 1))?;
            product(&[
                &p.star_power_w(k - m - 1)?,
                &geninv::weighted_core(&akp)?,
                &p.w_star_power(m)?,
            ])
        }
        ReprMethod::BilateralMwg => {
            let left = geninv::m_weak_group_bounded(&p.aw(), m, info.ind_aw, naw, tol)?;
            let right = geninv::m_weak_group_bounded(&p.wa(), m, info.ind_wa, naw, tol)?;
            product(&[&left, a, &right])
        }
        ReprMethod::BilateralCoreEp => {
            let left = geninv::core_ep_bounded(&p.aw(), info.ind_aw, naw, tol)?;
            let right = geninv::m_weak_group_bounded(&p.wa(), m, info.ind_wa, naw, tol)?;
            product(&[&left, a, &right])
        }
        ReprMethod::BilateralDrazin => {
            let left = geninv::drazin_bounded(&p.aw(), info.ind_aw, naw, tol)?;
            let right = geninv::m_weak_group_bounded(&p.wa(), m, info.ind_wa, naw, tol)?;
            product(&[&left, a, &right])
        }
        ReprMethod::SvdCanonical => canonical_wmwg(p, m),
    }
}

/// The projector of the given kind, assembled from `X = A^{wm,W}`.
pub fn projector(p: &WeightedPair, m: usize, kind: ProjectorKind) -> Result<ComplexMatrix> {
    let x = wmwg(p, m)?;
    projector_from(p, &x, kind)
}

fn projector_from(p: &WeightedPair, x: &ComplexMatrix, kind: ProjectorKind) -> Result<ComplexMatrix> {
    let (a, w) = (p.a(), p.w());
    match kind {
        ProjectorKind::WAW_X => product(&[w, a, w, x]),
        ProjectorKind::X_WAW => product(&[x, w, a, w]),
        ProjectorKind::AW_X_W => product(&[a, w, x, w]),
        ProjectorKind::W_X_WA => product(&[w, x, w, a]),
    }
}

/// Orthonormal bases `(T, S)` of the documented range and null space of the projector.
pub fn projector_subspaces(
    p: &WeightedPair,
    m: usize,
    kind: ProjectorKind,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    require_order(m, 1)?;
    let (k, tol) = (p.k(), p.tol());
    let (nw, naw) = (p.norms().w, p.norms().product());
    let wak = p.w_star_power(k)?;
    let wak_h = wak.conj_transpose();
    let awk = p.star_power_w(k)?;
    let (range, range_scale) = match kind {
        ProjectorKind::WAW_X | ProjectorKind::W_X_WA => (wak, spectral::product_scale(&[(naw, k)])),
        ProjectorKind::X_WAW | ProjectorKind::AW_X_W => (awk, spectral::product_scale(&[(naw, k)])),
    };
    let (null, null_scale) = match kind {
        ProjectorKind::WAW_X => (
            wak_h.matmul(&p.w_star_power(m)?)?,
            spectral::product_scale(&[(naw, k + m)]),
        ),
        ProjectorKind::X_WAW => (
            product(&[&wak_h, &p.w_star_power(m + 1)?, p.w()])?,
            spectral::product_scale(&[(naw, k + m + 1), (nw, 1)]),
        ),
        ProjectorKind::AW_X_W => (
            product(&[&wak_h, p.w(), &p.star_power_w(m)?])?,
            spectral::product_scale(&[(naw, k + m), (nw, 1)]),
        ),
        ProjectorKind::W_X_WA => (
            wak_h.matmul(&p.w_star_power(m + 1)?)?,
            spectral::product_scale(&[(naw, k + m + 1)]),
        ),
    };
    Ok((
        spectral::range_basis_scaled(&range, range_scale, tol)?,
        spectral::null_basis_scaled(&null, null_scale, tol)?,
    ))
}

/// Idempotency, range-fixing, null-annihilating, complementarity and
/// oblique-projector agreement for one projector kind.
pub fn projector_residuals(
    p: &WeightedPair,
    m: usize,
    kind: ProjectorKind,
) -> Result<Vec<Residual>> {
    let x = wmwg(p, m)?;
    projector_residuals_from(p, m, &x, kind)
}

pub(crate) fn projector_residuals_from(
    p: &WeightedPair,
    m: usize,
    x: &ComplexMatrix,
    kind: ProjectorKind,
) -> Result<Vec<Residual>> {
    let tol = p.tol();
    let proj = projector_from(p, x, kind)?;
    let (t_basis, s_basis) = projector_subspaces(p, m, kind)?;
    let scale = 1.0 + proj.frobenius_norm();
    let name = |s: &str| format!("proj.{kind}.{s}");
    let mut out = vec![
        Residual::new(name("idempotent"), proj.matmul(&proj)?.distance(&proj)? / scale),
        Residual::new(
            name("range"),
            proj.matmul(&t_basis)?.distance(&t_basis)? / scale,
        ),
        Residual::new(name("null"), proj.matmul(&s_basis)?.frobenius_norm() / scale),
    ];
    let dim = proj.rows();
    let complementary = t_basis.cols() + s_basis.cols() == dim;
    out.push(Residual::new(
        name("complement"),
        (t_basis.cols() + s_basis.cols()).abs_diff(dim) as f64,
    ));
    if complementary {
        let oblique = spectral::oblique_projector(&t_basis, &s_basis, tol)?;
        out.push(Residual::new(name("oblique"), scaled_gap(&proj, &oblique)?));
    }
    Ok(out)
}

/// `|| W A W X_m - W X_{m-1} W A ||_F` for `m >= 2`.
pub fn projector_shift_residual(p: &WeightedPair, m: usize) -> Result<f64> {
    require_order(m, 2)?;
    let (a, w) = (p.a(), p.w());
    let xm = wmwg(p, m)?;
    let xm1 = wmwg(p, m - 1)?;
    product(&[w, a, w, &xm])?.distance(&product(&[w, &xm1, w, a])?)
}

/// Block factors of `A = T [[S1 K1, S1 L1], [0, 0]] S^*` and
/// `W = S [[S2 K2, S2 L2], [0, 0]] T^*`, where `S1`, `S2` are the nonzero
/// singular values of `A` and `W`.
#[derive(Debug, Clone)]
pub struct CanonicalBlocks {
    pub t: ComplexMatrix,
    pub s: ComplexMatrix,
    pub sigma1: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub k1: ComplexMatrix,
    pub l1: ComplexMatrix,
    pub k2: ComplexMatrix,
    pub l2: ComplexMatrix,
    pub sigma1_k1: ComplexMatrix,
    pub sigma1_l1: ComplexMatrix,
    pub sigma2_k2: ComplexMatrix,
    pub sigma2_l2: ComplexMatrix,
}

fn scale_rows(d: &[f64], m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) * d[i])
}

impl CanonicalBlocks {
    pub fn r1(&self) -> usize {
        self.sigma1.len()
    }

    pub fn r2(&self) -> usize {
        self.sigma2.len()
    }

    /// `(||K1 K1^* + L1 L1^* - I||_F, ||K2 K2^* + L2 L2^* - I||_F)`.
    pub fn orthonormality_defects(&self) -> Result<(f64, f64)> {
        let defect = |k: &ComplexMatrix, l: &ComplexMatrix, r: usize| -> Result<f64> {
            let g = k.matmul(&k.conj_transpose())?.add(&l.matmul(&l.conj_transpose())?)?;
            g.distance(&ComplexMatrix::identity(r))
        };
        Ok((
            defect(&self.k1, &self.l1, self.r1())?,
            defect(&self.k2, &self.l2, self.r2())?,
        ))
    }

    /// Rebuilds `(A, W)` from the blocks.
    pub fn reassemble(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let (q, n) = (self.t.rows(), self.s.rows());
        let (r1, r2) = (self.r1(), self.r2());
        let a_mid = ComplexMatrix::from_blocks(
            &self.sigma1_k1,
            &self.sigma1_l1,
            &ComplexMatrix::zeros(q - r1, r2),
            &ComplexMatrix::zeros(q - r1, n - r2),
        )?;
        let w_mid = ComplexMatrix::from_blocks(
            &self.sigma2_k2,
            &self.sigma2_l2,
            &ComplexMatrix::zeros(n - r2, r1),
            &ComplexMatrix::zeros(n - r2, q - r1),
        )?;
        Ok((
            product(&[&self.t, &a_mid, &self.s.conj_transpose()])?,
            product(&[&self.s, &w_mid, &self.t.conj_transpose()])?,
        ))
    }
}

/// Builds the canonical blocks from the SVDs `A = T S1 U^*` and `W = S S2 V^*`:
/// `[[K1, L1], [H1, R1]] = U^* S` and `[[K2, L2], [H2, R2]] = V^* T`.
pub fn canonical_blocks(p: &WeightedPair) -> Result<CanonicalBlocks> {
    let tol = p.tol();
    let (q, n) = (p.q(), p.n());
    let fa = spectral::svd(p.a())?;
    let fw = spectral::svd(p.w())?;
    let (r1, r2) = (fa.rank(tol), fw.rank(tol));
    let t = fa.left;
    let s = fw.left;
    let us = fa.right.conj_transpose().matmul(&s)?;
    let vt = fw.right.conj_transpose().matmul(&t)?;
    let k1 = us.block(0, r1, 0, r2);
    let l1 = us.block(0, r1, r2, n);
    let k2 = vt.block(0, r2, 0, r1);
    let l2 = vt.block(0, r2, r1, q);
    let sigma1 = fa.singular_values[..r1].to_vec();
    let sigma2 = fw.singular_values[..r2].to_vec();
    Ok(CanonicalBlocks {
        sigma1_k1: scale_rows(&sigma1, &k1),
        sigma1_l1: scale_rows(&sigma1, &l1),
        sigma2_k2: scale_rows(&sigma2, &k2),
        sigma2_l2: scale_rows(&sigma2, &l2),
        t,
        s,
        sigma1,
        sigma2,
        k1,
        l1,
        k2,
        l2,
    })
}

/// `A^{wm,W}` assembled from the canonical blocks:
/// `T [[(S1K1)^{wm,S2K2}, B], [0, 0]] S^*` with
/// `B = C (S2K2 C)^m (S2K2 S1K1)^{m-1} S2K2 S1L1`, `C = (S1K1)^{core-EP,S2K2}`.
pub fn canonical_wmwg(p: &WeightedPair, m: usize) -> Result<ComplexMatrix> {
    require_order(m, 1)?;
    let blocks = canonical_blocks(p)?;
    canonical_wmwg_from(p, m, &blocks)
}

pub fn canonical_wmwg_from(p: &WeightedPair, m: usize, blocks: &CanonicalBlocks) -> Result<ComplexMatrix> {
    require_order(m, 1)?;
    let (q, n) = (p.q(), p.n());
    let (r1, r2) = (blocks.r1(), blocks.r2());
    let s2k2 = &blocks.sigma2_k2;
    // S2K2 = 0 forces WA = 0, hence a zero inverse.
    if r1 == 0 || spectral::numerical_rank(s2k2, p.tol())? == 0 {
        return Ok(ComplexMatrix::zeros(q, n));
    }
    // AW and WA are block triangular with (S1K1)(S2K2) and (S2K2)(S1K1) as leading
    // blocks, so k bounds the sub-pair's indices.
    let k = p.k();
    let sub = WeightedPair::derived(
        blocks.sigma1_k1.clone(),
        s2k2.clone(),
        IndexInfo { ind_aw: k, ind_wa: k, k },
        *p.tol(),
        p.norms(),
    )?;
    let x_sub = wmwg(&sub, m)?;
    let c = geninv::weighted_core_ep(&sub)?;
    let s2k2_c = s2k2.matmul(&c)?;
    let s2k2_s1k1 = s2k2.matmul(&blocks.sigma1_k1)?;
    let b = product(&[
        &c,
        &s2k2_c.power(m)?,
        &s2k2_s1k1.power(m - 1)?,
        s2k2,
        &blocks.sigma1_l1,
    ])?;
    let mid = ComplexMatrix::from_blocks(
        &x_sub,
        &b,
        &ComplexMatrix::zeros(q - r1, r2),
        &ComplexMatrix::zeros(q - r1, n - r2),
    )?;
    product(&[&blocks.t, &mid, &blocks.s.conj_transpose()])
}

/// `(1,1)` entry of `S1 K1`, handy for spot checks.
pub fn sigma1_k1_leading(blocks: &CanonicalBlocks) -> Option<C64> {
    (blocks.r1() > 0 && blocks.r2() > 0).then(|| blocks.sigma1_k1.get(0, 0))
}
