//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmwg_core::fixtures::{self, FixtureName};
use wmwg_core::geninv::{self, Residual};
use wmwg_core::harness::{self, RandomSpec};
use wmwg_core::spectral::ToleranceConfig;
use wmwg_core::wmwg::{self, ReprMethod};
use wmwg_core::{ComplexMatrix, Error, WeightedPair, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture() -> WeightedPair {
    FixtureName::Ex41.pair().expect("fixture pair is valid")
}

fn max_entry_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x.re - y.re).abs().max((x.im - y.im).abs()))
        .fold(0.0, f64::max)
}

fn fixture_reproduction() -> Outcome {
    let p = fixture();
    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        let x = wmwg::wmwg(&p, m).map_err(|e| e.to_string())?;
        let printed = fixtures::ex41_printed_wmwg(m).unwrap();
        let gap = max_entry_gap(&x, &printed);
        ensure(gap <= 5e-5, || format!("m={m}: entry gap {gap:.3e} > 5e-5"))?;
        worst = worst.max(gap);
    }
    Ok(format!("max entry gap {worst:.2e}"))
}

fn table_reproduction() -> Outcome {
    let p = fixture();
    let report = harness::cross_check(&p, &[1, 2, 3]).map_err(|e| e.to_string())?;
    let applicable = report.applicable_count();
    ensure(applicable == 38, || format!("{applicable} applicable cells, expected 38"))?;
    let na = report.inapplicable();
    ensure(na == vec![("CoreK", 3)], || format!("inapplicable cells {na:?}"))?;
    let worst = report.max_error();
    ensure(worst < 1e-10, || format!("max cell {worst:.3e}"))?;
    Ok(format!("38 cells, max {worst:.2e}, NA at (CoreK, 3)"))
}

fn shift_identity() -> Outcome {
    let p = fixture();
    let mut vals = Vec::new();
    for m in [2, 3] {
        let r = wmwg::projector_shift_residual(&p, m).map_err(|e| e.to_string())?;
        ensure(r < 1e-10, || format!("m={m}: {r:.3e}"))?;
        vals.push(format!("m={m}: {r:.2e}"));
    }
    Ok(vals.join(", "))
}

fn canonical_form() -> Outcome {
    let p = fixture();
    let blocks = wmwg::canonical_blocks(&p).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        let c = wmwg::canonical_wmwg_from(&p, m, &blocks).map_err(|e| e.to_string())?;
        let x = wmwg::wmwg(&p, m).map_err(|e| e.to_string())?;
        let d = c.distance(&x).map_err(|e| e.to_string())?;
        ensure(d < 1e-10, || format!("m={m}: distance {d:.3e}"))?;
        worst = worst.max(d);
    }
    let lead = wmwg::sigma1_k1_leading(&blocks).ok_or("empty leading block")?;
    let gap = (lead - C64::new(2.5722, -1.0829)).norm();
    ensure(gap <= 5e-4, || format!("S1K1(1,1) = {lead}, off by {gap:.3e}"))?;
    Ok(format!("max distance {worst:.2e}, S1K1(1,1) = {:.4}{:+.4}i", lead.re, lead.im))
}

#[derive(Default)]
struct Tally {
    pairs: usize,
    cells: usize,
    worst_rel: f64,
    worst_equation: f64,
    worst_projector: f64,
    worst_reduction: f64,
}

fn spec_for(i: u64, rng: &mut ChaCha8Rng) -> (RandomSpec, bool) {
    let t = rng.gen_range(0..=3usize);
    let identity_weight = i.is_multiple_of(5);
    let lo = t.max(1);
    let (q, n) = if t == 0 || identity_weight {
        let d = rng.gen_range(lo..=8);
        (d, d)
    } else {
        (rng.gen_range(lo..=8), rng.gen_range(lo..=8))
    };
    (RandomSpec::new(1000 + i, q, n, t), identity_weight)
}

fn worst_of<'a>(rs: impl IntoIterator<Item = &'a Residual>) -> Option<&'a Residual> {
    rs.into_iter().max_by(|a, b| a.value.total_cmp(&b.value))
}

fn property_suite() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tally = Tally::default();
    for i in 0..200u64 {
        let (spec, identity_weight) = spec_for(i, &mut rng);
        let p = if identity_weight {
            harness::random_identity_weight_pair(spec.seed, spec.n, spec.target_index)
        } else {
            harness::random_weighted_pair(&spec)
        }
        .map_err(|e| format!("{spec:?}: {e}"))?;
        ensure(p.k() == spec.target_index, || {
            format!("{spec:?}: planted index {} realized as {}", spec.target_index, p.k())
        })?;
        tally.pairs += 1;

        let report = harness::cross_check(&p, &[1, 2, 3]).map_err(|e| format!("{spec:?}: {e}"))?;
        for (j, &m) in report.m_values.iter().enumerate() {
            let scale = wmwg::wmwg(&p, m).map_err(|e| e.to_string())?.frobenius_norm().max(1.0);
            for row in &report.rows {
                if let Some(v) = row.cells[j].value() {
                    let rel = v / scale;
                    ensure(rel <= TOL, || format!("{spec:?} m={m} {}: relative error {rel:.3e}", row.method))?;
                    tally.worst_rel = tally.worst_rel.max(rel);
                    tally.cells += 1;
                }
            }
        }

        for m in 1..=3 {
            let suite = harness::residual_suite(&p, m).map_err(|e| format!("{spec:?}: {e}"))?;
            let (proj, eqs): (Vec<&Residual>, Vec<&Residual>) = suite
                .iter()
                .filter(|r| r.name != "projector_shift")
                .partition(|r| r.name.starts_with("proj."));
            if let Some(r) = worst_of(eqs) {
                ensure(r.value <= TOL, || format!("{spec:?} m={m} {}: {:.3e}", r.name, r.value))?;
                tally.worst_equation = tally.worst_equation.max(r.value);
            }
            if let Some(r) = worst_of(proj) {
                ensure(r.value <= TOL, || format!("{spec:?} m={m} {}: {:.3e}", r.name, r.value))?;
                tally.worst_projector = tally.worst_projector.max(r.value);
            }
            let reductions = harness::reduction_suite(&p, m).map_err(|e| format!("{spec:?}: {e}"))?;
            if identity_weight {
                ensure(reductions.iter().any(|r| r.name == "reduction.m_weak_group"), || {
                    format!("{spec:?}: identity weight not detected")
                })?;
            }
            if let Some(r) = worst_of(&reductions) {
                ensure(r.value <= TOL, || format!("{spec:?} m={m} {}: {:.3e}", r.name, r.value))?;
                tally.worst_reduction = tally.worst_reduction.max(r.value);
            }
        }
    }
    Ok(format!(
        "{} pairs, {} cells; worst: consensus {:.1e}, equations {:.1e}, projectors {:.1e}, reductions {:.1e}",
        tally.pairs, tally.cells, tally.worst_rel, tally.worst_equation, tally.worst_projector, tally.worst_reduction
    ))
}

fn error_handling() -> Outcome {
    let tol = ToleranceConfig::default();
    let square = harness::random_identity_weight_pair(11, 4, 2).map_err(|e| e.to_string())?;
    let weighted = harness::random_weighted_pair(&RandomSpec::new(12, 5, 4, 2)).map_err(|e| e.to_string())?;
    ensure(square.k() == 2 && weighted.k() == 2, || "planted index 2 not realized".into())?;

    let nonexistent = |r: Result<ComplexMatrix, Error>, what: &str| {
        ensure(matches!(r, Err(Error::Nonexistent { index: 2, .. })), || {
            format!("{what} did not report nonexistence")
        })
    };
    nonexistent(geninv::group_inverse(square.a(), &tol), "group")?;
    nonexistent(geninv::core_inverse(square.a(), &tol), "core")?;
    nonexistent(geninv::weighted_group(&weighted), "weighted group")?;
    nonexistent(geninv::weighted_core(&weighted), "weighted core")?;

    let core_k = wmwg::represent(&weighted, 2, ReprMethod::CoreK);
    ensure(matches!(core_k, Err(Error::InapplicableMethod { .. })), || {
        "CoreK with k < m+1 was not rejected".into()
    })?;

    let zero_w = WeightedPair::new(fixtures::ex41_a(), ComplexMatrix::zeros(5, 6));
    ensure(matches!(zero_w, Err(Error::ZeroWeight)), || "zero W accepted".into())?;
    Ok("nonexistence x4, inapplicable CoreK, zero weight".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 fixture reproduction", fixture_reproduction, Duration::from_secs(1)),
        ("2 consensus table", table_reproduction, Duration::from_secs(5)),
        ("3 projector shift identity", shift_identity, Duration::from_secs(5)),
        ("4 canonical form", canonical_form, Duration::from_secs(5)),
        ("5 random property suite", property_suite, Duration::from_secs(60)),
        ("6 error handling", error_handling, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
