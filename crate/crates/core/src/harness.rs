//! Cross-formula consensus reports, residual and reduction suites, and a
//! seeded generator of weighted pairs with a planted index.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::{self, scaled_gap, Residual, WeightedPair};
use crate::matrix::{product, ComplexMatrix, C64};
use crate::wmwg::{self, ProjectorKind, ReprMethod};

/// One `(method, m)` cell of a [`CrossCheckReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Error { frobenius_error: f64 },
    Inapplicable { reason: String },
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Error { frobenius_error } => Some(*frobenius_error),
            Cell::Inapplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckRow {
    pub method: String,
    pub cells: Vec<Cell>,
}

/// Frobenius distance of every representation from the definitional value,
/// one row per method and one cell per `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub m_values: Vec<usize>,
    pub rows: Vec<CrossCheckRow>,
}

impl CrossCheckReport {
    /// All `(method, m, cell)` triples in row order.
    pub fn cells(&self) -> impl Iterator<Item = (&str, usize, &Cell)> {
        self.rows.iter().flat_map(move |row| {
            self.m_values
                .iter()
                .zip(&row.cells)
                .map(move |(&m, cell)| (row.method.as_str(), m, cell))
        })
    }

    pub fn applicable_count(&self) -> usize {
        self.cells().filter(|(_, _, c)| c.value().is_some()).count()
    }

    pub fn inapplicable(&self) -> Vec<(&str, usize)> {
        self.cells()
            .filter(|(_, _, c)| c.value().is_none())
            .map(|(name, m, _)| (name, m))
            .collect()
    }

    pub fn max_error(&self) -> f64 {
        self.cells().filter_map(|(_, _, c)| c.value()).fold(0.0, f64::max)
    }

    /// Long-format CSV: `method,m,frobenius_error`, `NA` for inapplicable cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,m,frobenius_error\n");
        for (name, m, cell) in self.cells() {
            match cell.value() {
                Some(v) => writeln!(out, "{name},{m},{v:e}"),
                None => writeln!(out, "{name},{m},NA"),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

/// Knobs for [`cross_check_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrossCheckOptions {
    /// Adds a `PinvPower` row at `l = k` next to the standard `l = 2k` row.
    pub pinv_power_at_k: bool,
}

fn is_inapplicable(e: &Error) -> bool {
    matches!(e, Error::InapplicableMethod { .. })
}

/// Cross-checks the thirteen non-definitional routes, `PinvPower` at `l = 2k`.
pub fn cross_check(p: &WeightedPair, m_values: &[usize]) -> Result<CrossCheckReport> {
    cross_check_with(p, m_values, CrossCheckOptions::default())
}

pub fn cross_check_with(
    p: &WeightedPair,
    m_values: &[usize],
    opts: CrossCheckOptions,
) -> Result<CrossCheckReport> {
    if let Some(&m) = m_values.iter().find(|&&m| m == 0) {
        return Err(Error::InvalidOrder { m, min: 1 });
    }
    let k = p.k();
    let mut methods: Vec<ReprMethod> = Vec::with_capacity(14);
    for method in ReprMethod::ALL {
        match method {
            ReprMethod::Definitional => {}
            ReprMethod::PinvPower(_) => {
                methods.push(ReprMethod::PinvPower(Some(2 * k)));
                if opts.pinv_power_at_k {
                    methods.push(ReprMethod::PinvPower(Some(k)));
                }
            }
            other => methods.push(other),
        }
    }

    let baselines = m_values
        .iter()
        .map(|&m| wmwg::wmwg(p, m))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(methods.len());
    for method in methods {
        let mut cells = Vec::with_capacity(m_values.len());
        for (&m, x) in m_values.iter().zip(&baselines) {
            cells.push(match wmwg::represent(p, m, method) {
                Ok(y) => Cell::Error {
                    frobenius_error: y.distance(x)?,
                },
                Err(e) if is_inapplicable(&e) => Cell::Inapplicable {
                    reason: e.to_string(),
                },
                Err(e) => return Err(e),
            });
        }
        rows.push(CrossCheckRow {
            method: method.to_string(),
            cells,
        });
    }
    Ok(CrossCheckReport {
        m_values: m_values.to_vec(),
        rows,
    })
}

/// Defining-equation residuals for the inverses behind `A^{wm,W}`, the four
/// projectors, and the shift identity when `m >= 2`. Every entry is
/// normalized by the size of the quantities compared.
pub fn residual_suite(p: &WeightedPair, m: usize) -> Result<Vec<Residual>> {
    if m == 0 {
        return Err(Error::InvalidOrder { m, min: 1 });
    }
    let tol = p.tol();
    let mut out = Vec::new();

    let a_pinv = geninv::moore_penrose(p.a(), tol)?;
    out.extend(geninv::penrose_residuals(p.a(), &a_pinv)?);
    let d = geninv::weighted_drazin(p)?;
    out.extend(geninv::weighted_drazin_residuals(p, &d)?);
    let c = geninv::weighted_core_ep(p)?;
    out.extend(geninv::weighted_core_ep_residuals(p, &c)?);
    let g = geninv::weighted_weak_group(p)?;
    out.extend(geninv::weighted_weak_group_residuals(p, &g)?);

    let x = wmwg::wmwg(p, m)?;
    for kind in ProjectorKind::ALL {
        out.extend(wmwg::projector_residuals_from(p, m, &x, kind)?);
    }
    if m >= 2 {
        let (a, w) = (p.a(), p.w());
        let prev = wmwg::wmwg(p, m - 1)?;
        let lhs = product(&[w, a, w, &x])?;
        let rhs = product(&[w, &prev, w, a])?;
        out.push(Residual::new("projector_shift", scaled_gap(&lhs, &rhs)?));
    }
    Ok(out)
}

/// Gaps between `A^{wm,W}` and the inverses it reduces to: the weighted weak
/// group inverse at `m = 1`, the weighted Drazin inverse when `k <= m`, and
/// the m-weak group inverse of `A` when `W = I`.
pub fn reduction_suite(p: &WeightedPair, m: usize) -> Result<Vec<Residual>> {
    let x = wmwg::wmwg(p, m)?;
    let mut out = Vec::new();
    if m == 1 {
        let y = geninv::weighted_weak_group(p)?;
        out.push(Residual::new("reduction.weighted_weak_group", scaled_gap(&x, &y)?));
    }
    if p.k() <= m {
        let y = geninv::weighted_drazin(p)?;
        out.push(Residual::new("reduction.weighted_drazin", scaled_gap(&x, &y)?));
    }
    if p.has_identity_weight() {
        let y = geninv::m_weak_group_with_index(p.a(), m, p.index_info().ind_aw, p.tol())?;
        out.push(Residual::new("reduction.m_weak_group", scaled_gap(&x, &y)?));
    }
    Ok(out)
}

/// Parameters of a seeded random pair with `max(Ind(AW), Ind(WA)) = target_index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub q: usize,
    pub n: usize,
    pub target_index: usize,
    pub magnitude: f64,
}

impl RandomSpec {
    pub fn new(seed: u64, q: usize, n: usize, target_index: usize) -> Self {
        Self {
            seed,
            q,
            n,
            target_index,
            magnitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.q.min(self.n);
        if s == 0 {
            return Err(Error::RandomSpec(format!("dimensions must be positive, got {}x{}", self.q, self.n)));
        }
        if self.target_index > s {
            return Err(Error::RandomSpec(format!(
                "target index {} exceeds min(q, n) = {s}",
                self.target_index
            )));
        }
        if self.target_index == 0 && self.q != self.n {
            return Err(Error::RandomSpec(format!(
                "index 0 needs q = n, got {}x{}",
                self.q, self.n
            )));
        }
        if !(self.magnitude.is_finite() && self.magnitude > 0.0) {
            return Err(Error::RandomSpec(format!("magnitude must be positive, got {}", self.magnitude)));
        }
        Ok(())
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-like random unitary: Gram-Schmidt (applied twice) on a complex Gaussian matrix.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= dot * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `N = P diag(J_t, D) P^{-1}`: an `s x s` matrix of index `t` whose nonzero
/// eigenvalues have modulus in `[0.5, 2]`, with `P` of condition number at most 2.
fn planted_core(rng: &mut ChaCha8Rng, s: usize, t: usize) -> Result<ComplexMatrix> {
    let q1 = random_unitary(rng, s);
    let q2 = random_unitary(rng, s);
    let scales: Vec<f64> = (0..s).map(|_| rng.gen_range(1.0..2.0)).collect();
    let middle = ComplexMatrix::from_fn(s, s, |i, j| {
        if i < t {
            // nilpotent Jordan block
            if j == i + 1 && j < t {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        } else if i == j {
            C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let inv_scales: Vec<f64> = scales.iter().map(|x| 1.0 / x).collect();
    let scale = ComplexMatrix::from_diag(s, s, &scales);
    let inv_scale = ComplexMatrix::from_diag(s, s, &inv_scales);
    let p = product(&[&q1, &scale, &q2])?;
    let p_inv = product(&[&q2.conj_transpose(), &inv_scale, &q1.conj_transpose()])?;
    product(&[&p, &middle, &p_inv])
}

fn max_abs(a: &ComplexMatrix) -> f64 {
    a.data().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deterministic random pair with the requested index.
///
/// `A = L N R` and `W = R^* L^*` where `L` (q x s) has orthonormal columns and
/// `R` (s x n) orthonormal rows, so `AW = L N L^*` and `WA = R^* N R` share the
/// index of `N`. `A` is scaled so its largest entry has modulus `magnitude`;
/// `W` is scaled by `magnitude`, which keeps its entries within that bound too.
pub fn random_weighted_pair(spec: &RandomSpec) -> Result<WeightedPair> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (q, n) = (spec.q, spec.n);
    let s = q.min(n);
    let core = planted_core(&mut rng, s, spec.target_index)?;
    let left = random_unitary(&mut rng, q).leading_columns(s);
    let right = random_unitary(&mut rng, n).leading_columns(s).conj_transpose();
    let a = product(&[&left, &core, &right])?;
    let a_peak = max_abs(&a);
    let a = if a_peak > 0.0 {
        a.scale(C64::new(spec.magnitude / a_peak, 0.0))
    } else {
        a
    };
    let w = right
        .conj_transpose()
        .matmul(&left.conj_transpose())?
        .scale(C64::new(spec.magnitude, 0.0));
    WeightedPair::new(a, w)
}

/// Square `A` of index `target_index` paired with `W = I_n`.
pub fn random_identity_weight_pair(seed: u64, n: usize, target_index: usize) -> Result<WeightedPair> {
    RandomSpec::new(seed, n, n, target_index).validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = planted_core(&mut rng, n, target_index)?;
    WeightedPair::new(a, ComplexMatrix::identity(n))
}
