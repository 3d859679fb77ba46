//! Property tests over seeded random pairs and small grid matrices.

use proptest::prelude::*;

use wmwg_core::geninv::{self, WeightedPair};
use wmwg_core::harness::{self, RandomSpec};
use wmwg_core::matrix::{product, ComplexMatrix, C64};
use wmwg_core::spectral::{self, ToleranceConfig};
use wmwg_core::wmwg::{self, ProjectorKind, ReprMethod};

const CHECK: f64 = 1e-10;
const RANDOM: f64 = 1e-8;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn entry() -> impl Strategy<Value = C64> {
    (-20i8..=20, -20i8..=20).prop_map(|(re, im)| C64::new(f64::from(re) / 10.0, f64::from(im) / 10.0))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(entry(), rows * cols)
        .prop_map(move |data| ComplexMatrix::from_row_major(rows, cols, data).unwrap())
}

fn conformable() -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1usize..=5, 1usize..=5, 1usize..=5).prop_flat_map(|(r, k, c)| (matrix(r, k), matrix(k, c)))
}

fn square() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=5).prop_flat_map(|n| matrix(n, n))
}

/// Valid generator input: `t <= min(q, n)` and `q = n` when `t = 0`.
fn random_spec() -> impl Strategy<Value = RandomSpec> {
    (any::<u64>(), 0usize..=3)
        .prop_flat_map(|(seed, t)| {
            let lo = t.max(1);
            (Just(seed), Just(t), lo..=6usize, lo..=6usize)
        })
        .prop_map(|(seed, t, q, n)| {
            let n = if t == 0 { q } else { n };
            RandomSpec::new(seed, q, n, t)
        })
}

fn random_pair() -> impl Strategy<Value = WeightedPair> {
    random_spec().prop_map(|spec| harness::random_weighted_pair(&spec).unwrap())
}

fn identity_weight_pair() -> impl Strategy<Value = WeightedPair> {
    (any::<u64>(), 1usize..=6, 0usize..=3)
        .prop_filter("index fits", |&(_, n, t)| t <= n)
        .prop_map(|(seed, n, t)| harness::random_identity_weight_pair(seed, n, t).unwrap())
}

fn rel_gap(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    x.distance(y).unwrap() / x.frobenius_norm().max(y.frobenius_norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_submultiplicative((a, b) in conformable()) {
        let ab = a.matmul(&b).unwrap();
        prop_assert!(ab.frobenius_norm() <= a.frobenius_norm() * b.frobenius_norm() * (1.0 + 1e-15) + 1e-300);
    }

    #[test]
    fn adjoint_reverses_products((a, b) in conformable()) {
        let lhs = a.matmul(&b).unwrap().conj_transpose();
        let rhs = b.conj_transpose().matmul(&a.conj_transpose()).unwrap();
        for (x, y) in lhs.data().iter().zip(rhs.data()) {
            prop_assert!((x - y).norm() <= 1e-14);
        }
    }

    #[test]
    fn powers_add(a in square(), p in 0usize..=4, q in 0usize..=4) {
        let norm = a.frobenius_norm();
        let a = if norm > 1.0 { a.scale(C64::new(1.0 / norm, 0.0)) } else { a };
        let whole = a.power(p + q).unwrap();
        let split = a.power(p).unwrap().matmul(&a.power(q).unwrap()).unwrap();
        prop_assert!(whole.distance(&split).unwrap() <= 1e-12 * whole.frobenius_norm().max(1e-300) + 1e-15);
    }

    #[test]
    fn rank_stabilizes_from_the_index(p in identity_weight_pair()) {
        let a = p.a();
        let ind = spectral::index(a, &tol()).unwrap();
        let base = spectral::spectral_norm(a).unwrap();
        let rank = |j: usize| {
            let scale = spectral::product_scale(&[(base, j)]);
            spectral::numerical_rank_scaled(&a.power(j).unwrap(), scale, &tol()).unwrap()
        };
        for j in ind..ind + 3 {
            prop_assert_eq!(rank(j.max(1)), rank(j + 1));
        }
    }

    #[test]
    fn powers_of_aw_and_wa_share_rank(p in random_pair()) {
        let k = p.k();
        let scale = spectral::product_scale(&[(p.norms().product(), k)]);
        let r_aw = spectral::numerical_rank_scaled(&p.star_power_w(k).unwrap(), scale, &tol()).unwrap();
        let r_wa = spectral::numerical_rank_scaled(&p.w_star_power(k).unwrap(), scale, &tol()).unwrap();
        prop_assert_eq!(r_aw, r_wa);
    }

    #[test]
    fn oblique_projector_is_idempotent(m in (2usize..=5).prop_flat_map(|n| (matrix(n, n), 1..n))) {
        let (full, split) = m;
        let n = full.rows();
        prop_assume!(spectral::numerical_rank(&full, &tol()).unwrap() == n);
        let t = spectral::range_basis(&full.block(0, n, 0, split), &tol()).unwrap();
        let s = spectral::range_basis(&full.block(0, n, split, n), &tol()).unwrap();
        let p = spectral::oblique_projector(&t, &s, &tol()).unwrap();
        let defect = p.matmul(&p).unwrap().distance(&p).unwrap();
        prop_assert!(defect <= CHECK * (1.0 + p.frobenius_norm()), "defect {defect:e}");
    }

    #[test]
    fn penrose_equations_hold(a in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let f = spectral::svd(&a).unwrap();
        let r = f.rank(&tol());
        prop_assume!(r == 0 || f.singular_values[r - 1] >= 1e-2 * f.sigma_max());
        let x = geninv::moore_penrose(&a, &tol()).unwrap();
        let ax = a.matmul(&x).unwrap();
        let xa = x.matmul(&a).unwrap();
        let bound = CHECK * (1.0 + a.frobenius_norm());
        prop_assert!(ax.matmul(&a).unwrap().distance(&a).unwrap() <= bound);
        prop_assert!(xa.matmul(&x).unwrap().distance(&x).unwrap() <= bound * (1.0 + x.frobenius_norm()));
        prop_assert!(ax.conj_transpose().distance(&ax).unwrap() <= bound);
        prop_assert!(xa.conj_transpose().distance(&xa).unwrap() <= bound);
    }

    #[test]
    fn drazin_commutes(p in identity_weight_pair()) {
        let a = p.a();
        let d = geninv::drazin(a, &tol()).unwrap();
        let gap = a.matmul(&d).unwrap().distance(&d.matmul(a).unwrap()).unwrap();
        prop_assert!(gap <= RANDOM * (1.0 + a.frobenius_norm() * d.frobenius_norm()), "gap {gap:e}");
    }

    #[test]
    fn weight_times_weighted_core_ep_is_core_ep_of_wa(p in random_pair()) {
        let lhs = p.w().matmul(&geninv::weighted_core_ep(&p).unwrap()).unwrap();
        let rhs = geninv::core_ep(&p.wa(), &tol()).unwrap();
        prop_assert!(rel_gap(&lhs, &rhs) <= RANDOM, "gap {:e}", rel_gap(&lhs, &rhs));
    }

    #[test]
    fn core_ep_of_power_is_power_of_core_ep(p in random_pair(), s in 2usize..=3) {
        let wa = p.wa();
        let wa_s = wa.power(s).unwrap();
        let bound = p.norms().product().powi(s as i32);
        let ind = spectral::index_bounded(&wa_s, bound, &tol()).unwrap();
        prop_assert_eq!(ind, p.index_info().ind_wa.div_ceil(s));
        let lhs = geninv::core_ep_bounded(&wa_s, ind, bound, &tol()).unwrap();
        let rhs = geninv::core_ep(&wa, &tol()).unwrap().power(s).unwrap();
        prop_assert!(rel_gap(&lhs, &rhs) <= RANDOM, "gap {:e}", rel_gap(&lhs, &rhs));
    }

    #[test]
    fn weighted_core_ep_commutes_with_star_powers(p in random_pair(), s in 1usize..=3) {
        let c = geninv::weighted_core_ep(&p).unwrap();
        let lhs = geninv::w_power(&c, p.w(), s).unwrap();
        let rhs = geninv::weighted_core_ep(&p.star_power_pair(s).unwrap()).unwrap();
        prop_assert!(rel_gap(&lhs, &rhs) <= RANDOM, "gap {:e}", rel_gap(&lhs, &rhs));
    }

    #[test]
    fn weighted_core_ep_projector(p in random_pair()) {
        let k = p.k();
        let c = geninv::weighted_core_ep(&p).unwrap();
        let (a, w) = (p.a(), p.w());
        let proj = product(&[&c, w, a, w]).unwrap();
        let scale = 1.0 + proj.frobenius_norm();
        prop_assert!(proj.matmul(&proj).unwrap().distance(&proj).unwrap() <= RANDOM * scale);
        let naw = p.norms().product();
        let range_scale = spectral::product_scale(&[(naw, k)]);
        let t = spectral::range_basis_scaled(&p.star_power_w(k).unwrap(), range_scale, &tol()).unwrap();
        prop_assert!(proj.matmul(&t).unwrap().distance(&t).unwrap() <= RANDOM * scale);
        let null_src = product(&[&p.w_star_power(k).unwrap().conj_transpose(), w, a, w]).unwrap();
        let null_scale = spectral::product_scale(&[(naw, k + 1), (p.norms().w, 1)]);
        let s = spectral::null_basis_scaled(&null_src, null_scale, &tol()).unwrap();
        prop_assert!(proj.matmul(&s).unwrap().frobenius_norm() <= RANDOM * scale);
    }

    #[test]
    fn representations_agree(p in random_pair(), m in 1usize..=3) {
        let x = wmwg::wmwg(&p, m).unwrap();
        for method in ReprMethod::ALL {
            match wmwg::represent(&p, m, method) {
                Ok(y) => {
                    let gap = y.distance(&x).unwrap();
                    prop_assert!(gap <= RANDOM * (1.0 + x.frobenius_norm()), "{method}: {gap:e}");
                }
                Err(wmwg_core::Error::InapplicableMethod { .. }) => {}
                Err(e) => prop_assert!(false, "{method}: {e}"),
            }
        }
    }

    #[test]
    fn canonical_form_agrees(p in random_pair(), m in 1usize..=3) {
        let x = wmwg::wmwg(&p, m).unwrap();
        let c = wmwg::canonical_wmwg(&p, m).unwrap();
        prop_assert!(c.distance(&x).unwrap() <= RANDOM * (1.0 + x.frobenius_norm()));
    }

    #[test]
    fn projector_kinds_hold(p in random_pair(), m in 1usize..=3) {
        for kind in ProjectorKind::ALL {
            for r in wmwg::projector_residuals(&p, m, kind).unwrap() {
                prop_assert!(r.value <= RANDOM, "{}: {:e}", r.name, r.value);
            }
        }
    }

    #[test]
    fn shift_identity_bound(p in random_pair(), m in 2usize..=4) {
        let x = wmwg::wmwg(&p, m).unwrap();
        let w = p.w().frobenius_norm();
        let bound = RANDOM * (1.0 + w * w * p.a().frobenius_norm() * x.frobenius_norm());
        let r = wmwg::projector_shift_residual(&p, m).unwrap();
        prop_assert!(r <= bound, "{r:e} > {bound:e}");
    }

    #[test]
    fn constant_once_m_reaches_k(p in random_pair()) {
        let k = p.k().max(1);
        let d = geninv::weighted_drazin(&p).unwrap();
        for m in k..k + 3 {
            let x = wmwg::wmwg(&p, m).unwrap();
            prop_assert!(rel_gap(&x, &d) <= RANDOM, "m={m}: {:e}", rel_gap(&x, &d));
        }
    }

    #[test]
    fn identity_weight_reductions(p in identity_weight_pair(), m in 1usize..=3) {
        let a = p.a();
        let x = wmwg::wmwg(&p, m).unwrap();
        let mwg = geninv::m_weak_group(a, m, &tol()).unwrap();
        prop_assert!(rel_gap(&x, &mwg) <= RANDOM);
        let squared = wmwg::represent(&p, m, ReprMethod::SquaredMwg).unwrap();
        prop_assert!(rel_gap(&x, &squared) <= RANDOM);
        let norm = p.norms().a;
        // A^{wm} = A^{m-1} (A^m)^{w}
        let am = a.power(m).unwrap();
        let am_bound = norm.powi(m as i32);
        let ind_m = spectral::index_bounded(&am, am_bound, &tol()).unwrap();
        let via_power = a.power(m - 1).unwrap()
            .matmul(&geninv::m_weak_group_bounded(&am, 1, ind_m, am_bound, &tol()).unwrap()).unwrap();
        prop_assert!(rel_gap(&x, &via_power) <= RANDOM, "{:e}", rel_gap(&x, &via_power));
        let k = p.k();
        if k > m {
            // A^{wm} = A^{k-m-1} (A^k)^{core} A^m; A^k has index 1, where core and core-EP coincide
            let ak = a.power(k).unwrap();
            let ak_bound = norm.powi(k as i32);
            prop_assert_eq!(spectral::index_bounded(&ak, ak_bound, &tol()).unwrap(), 1);
            let via_core = product(&[
                &a.power(k - m - 1).unwrap(),
                &geninv::core_ep_bounded(&ak, 1, ak_bound, &tol()).unwrap(),
                &a.power(m).unwrap(),
            ]).unwrap();
            prop_assert!(rel_gap(&x, &via_core) <= RANDOM, "{:e}", rel_gap(&x, &via_core));
        }
    }

    #[test]
    fn reports_are_deterministic(spec in random_spec()) {
        let first = harness::cross_check(&harness::random_weighted_pair(&spec).unwrap(), &[1, 2, 3]).unwrap();
        let second = harness::cross_check(&harness::random_weighted_pair(&spec).unwrap(), &[1, 2, 3]).unwrap();
        prop_assert_eq!(first.to_csv(), second.to_csv());
        prop_assert_eq!(first.to_json(), second.to_json());
    }
}
