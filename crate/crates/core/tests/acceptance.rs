//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are evaluated in full and reported as FAIL;
//! the run only aborts if the set of failing criteria differs from that list,
//! so a regression or an unexpected pass both show up.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dlcodes::bundle_codes::{build_code_2a4_proxy, build_code_a2, CodeSpec, RankTwoBundleSpec};
use dlcodes::code::LinearCode;
use dlcodes::dl_surfaces::{divisor_data, z_points, FamilyTag, SurfaceFamily};
use dlcodes::mindist::{exact_min_distance, sampled_min_weight, DEFAULT_BUDGET};
use dlcodes::params::{
    corollary_2a4_params, corollary_a2_params, general_bound, hansen_bound, hansen_bound_uniform, BoundInputs,
    Branch,
};
use dlcodes::projgeom::{enumerate_projective, ProjPoint};
use dlcodes::rr_spaces::{
    eval_section, excellence_checks, h0_formula, plane_point_count, section_basis, taylor_coefficient,
    vanishing_matrix, LineBundleA2,
};
use dlcodes::{Fe, Field};

/// Example A2 has exhaustive minimum distance 6, below the claimed 42.
const KNOWN_RED: &[u32] = &[1];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if took > limit {
        out.passed = false;
        out.detail.push_str(&format!("; took {took:?}, limit {limit:?}"));
    } else {
        out.detail.push_str(&format!("; {took:.2?}"));
    }
    out
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(5), || {
        let f = Field::canonical(2, 1).unwrap();
        let v = LineBundleA2::with_leading(2, 3, &[1, 1, 1]).unwrap();
        let spec = CodeSpec::new(RankTwoBundleSpec::a2(2, v.clone(), v).unwrap(), 1);
        let code = match build_code_a2(&spec, &f) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("construction failed: {e}")),
        };
        let r = exact_min_distance(&code, DEFAULT_BUDGET, true).unwrap();
        let words: u128 = r.distribution.as_ref().unwrap().values().sum::<u128>() - 1;
        outcome(
            code.n() == 63 && code.k() == 14 && r.min_weight >= 42,
            format!(
                "n = {} (want 63), k = {} (want 14), exhaustive d = {} over {words} nonzero words (want >= 42)",
                code.n(),
                code.k(),
                r.min_weight
            ),
        )
    })
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = corollary_2a4_params(2, 2, 4, 4).unwrap();
    let took = start.elapsed();
    let triple = (r.n_value(), r.k.value.unwrap(), r.d_value());
    outcome(
        triple == (7425, 1107, 4455) && took < Duration::from_millis(1),
        format!("(n, k, d_lower) = {triple:?} (want (7425, 1107, 4455)); {took:.2?}, limit 1ms"),
    )
}

/// Multiplicity vectors supported on the first four canonical points, entries at most 2.
fn leading_profiles() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for code in 0..81u32 {
        let mut c = code;
        out.push(
            (0..4)
                .map(|_| {
                    let d = c % 3;
                    c /= 3;
                    d
                })
                .collect(),
        );
    }
    out
}

fn criterion_3() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut checked = 0;
        let mut mismatches = Vec::new();
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            for profile in leading_profiles() {
                for n in 0..=3 * (q as u32 - 1) {
                    let bundle = LineBundleA2::with_leading(q, n, &profile).unwrap();
                    if !excellence_checks(&bundle, q, &[]).iter().all(|c| c.passed) {
                        continue;
                    }
                    checked += 1;
                    let kernel = vanishing_matrix(&bundle, &f).unwrap().kernel().rows() as i64;
                    let formula = h0_formula(&bundle);
                    if kernel != formula {
                        mismatches.push(format!("q={q} n={n} m={profile:?}: formula {formula}, kernel {kernel}"));
                    }
                }
            }
        }
        outcome(
            checked > 0 && mismatches.is_empty(),
            format!("{checked} admissible bundles, {} mismatches {:?}", mismatches.len(), mismatches.iter().take(3).collect::<Vec<_>>()),
        )
    })
}

/// Same comparison with the four points chosen anywhere; not a criterion.
fn harbourne_any_position_note() -> String {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for q in [2u64, 3] {
        let f = Field::of_order(q).unwrap();
        let len = plane_point_count(q);
        let subsets: Vec<Vec<usize>> = (0u32..1 << len)
            .filter(|s| s.count_ones() <= 4)
            .map(|s| (0..len).filter(|i| s >> i & 1 == 1).collect())
            .collect();
        for pts in subsets {
            for mask in 0u32..1 << pts.len() {
                let mults: Vec<u32> = (0..pts.len()).map(|i| 1 + (mask >> i & 1)).collect();
                let mut order: Vec<usize> = (0..pts.len()).collect();
                order.sort_by_key(|&i| std::cmp::Reverse(mults[i]));
                let labels: Vec<usize> = order.iter().map(|&i| pts[i]).collect();
                for n in 0..=3 * (q as u32 - 1) {
                    let bundle = LineBundleA2::at_points(q, n, &pts, &mults).unwrap();
                    if !excellence_checks(&bundle, q, &labels).iter().all(|c| c.passed) {
                        continue;
                    }
                    checked += 1;
                    let kernel = vanishing_matrix(&bundle, &f).unwrap().kernel().rows() as i64;
                    if kernel != h0_formula(&bundle) {
                        mismatches.push(format!("q={q} n={n} points={pts:?} m={mults:?}: formula {}, kernel {kernel}", h0_formula(&bundle)));
                    }
                }
            }
        }
    }
    format!(
        "Harbourne formula with points in any position: {checked} admissible bundles, {} mismatches, e.g. {:?}",
        mismatches.len(),
        mismatches.first()
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for q in 2..=5u64 {
        if Field::of_order(q).is_err() {
            continue;
        }
        let s = (q * q + q + 1) * (q + 1);
        for b in 1..=q as u32 {
            count += 1;
            let n = (s * (q + 1)) as i64;
            let cor = n - (q * q + q + 1) as i64 * (q + 1) as i64 * b as i64;
            let general = general_bound(&BoundInputs::new(FamilyTag::A2, q, b)).unwrap();
            let hansen = hansen_bound(n, 0, q as i64 + 1, s as i64 * b as i64);
            let uniform = hansen_bound_uniform(n, 0, q as i64 + 1, s as i64, b as i64);
            let m = vec![0u32; 0];
            let a2 = corollary_a2_params(q, b, [1, 1], [&m, &m]).unwrap();
            let ok = general.d_value() == cor as i128
                && general.branch == Branch::Otherwise
                && hansen == cor
                && uniform == cor
                && a2.d_value() == cor as i128;
            if !ok {
                bad.push(format!("q={q} b={b}: corollary {cor}, general {}, hansen {hansen}, uniform {uniform}", general.d_value()));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} (q, b) pairs, disagreements {bad:?}"))
}

fn brute_projective_count(f: &Field, dim: usize) -> usize {
    let q = f.q();
    let total = (q as u64).pow(dim as u32 + 1);
    let mut seen = BTreeSet::new();
    for mut idx in 1..total {
        let coords: Vec<Fe> = (0..=dim)
            .map(|_| {
                let d = (idx % q as u64) as u32;
                idx /= q as u64;
                Fe(d)
            })
            .collect();
        seen.insert(ProjPoint::new(f, &coords).unwrap());
    }
    seen.len()
}

fn criterion_5() -> Outcome {
    timed(Duration::from_secs(10), || {
        let f2 = Field::of_order(2).unwrap();
        let f4 = Field::of_order(4).unwrap();
        let p2 = enumerate_projective(2, &f2).unwrap().len();
        let p1 = enumerate_projective(1, &f4).unwrap().len();
        let (p2_brute, p1_brute) = (brute_projective_count(&f2, 2), brute_projective_count(&f4, 1));

        // X0^3 + X1^3 + X2^3 + X3^3 = 0 over GF(4), by direct evaluation
        let mut hermitian = BTreeSet::new();
        for idx in 1..256u32 {
            let x: Vec<Fe> = (0..4).map(|i| Fe(idx >> (2 * i) & 3)).collect();
            let sum = x.iter().fold(Fe::ZERO, |acc, &c| f4.add(acc, f4.pow(c, 3)));
            if sum.is_zero() {
                hermitian.insert(ProjPoint::new(&f4, &x).unwrap());
            }
        }
        let z = z_points(&SurfaceFamily::new(FamilyTag::TwistedA3, 2).unwrap()).unwrap().len();

        let mut divisions = Vec::new();
        let mut div_ok = true;
        for (tag, q, count, comps) in [
            (FamilyTag::A2, 2, 21, 7),
            (FamilyTag::TwistedA4, 2, 1485, 297),
            (FamilyTag::A2, 3, 52, 13),
            (FamilyTag::TwistedA4, 3, 68320, 6832),
        ] {
            let fam = SurfaceFamily::new(tag, q).unwrap();
            match divisor_data(&fam) {
                Ok(d) => {
                    div_ok &= d.b_component_count * d.points_per_component == count && d.b_component_count == comps;
                    divisions.push(format!("{tag} q={q}: {count}/{} = {}", d.points_per_component, d.b_component_count));
                }
                Err(e) => {
                    div_ok = false;
                    divisions.push(format!("{tag} q={q}: {e}"));
                }
            }
        }
        outcome(
            p2 == 7 && p2_brute == 7 && p1 == 5 && p1_brute == 5 && hermitian.len() == 45 && z == 45 && div_ok,
            format!(
                "#P2(F2) = {p2}/{p2_brute}, #P1(F4) = {p1}/{p1_brute}, Hermitian surface {} brute / {z} enumerated, {}",
                hermitian.len(),
                divisions.join(", ")
            ),
        )
    })
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(600), || {
        let f = Field::canonical(2, 2).unwrap();
        let spec = CodeSpec::new(RankTwoBundleSpec::twisted_a4(2, 4, 4).unwrap(), 2);
        match build_code_2a4_proxy(&spec, &f) {
            Ok(p) => outcome(
                p.rank <= 1107,
                format!(
                    "proxy rank {} (bound 1107) from {} candidate rows, #Z(F4) = {}, proxy length {}",
                    p.rank,
                    p.candidate_rows,
                    p.z_point_count,
                    p.code.n()
                ),
            ),
            Err(e) => outcome(false, format!("proxy construction failed: {e}")),
        }
    })
}

const SMALL_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fn field_axioms() -> Result<(), String> {
    for q in SMALL_ORDERS {
        let f = Field::of_order(q).unwrap();
        let els: Vec<Fe> = f.elements().collect();
        for &a in &els {
            if !a.is_zero() && f.mul(a, f.inv(a).unwrap()) != Fe::ONE {
                return Err(format!("inverse fails in GF({q})"));
            }
            if f.add(a, f.neg(a)) != Fe::ZERO {
                return Err(format!("negation fails in GF({q})"));
            }
            for &b in &els {
                if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                    return Err(format!("commutativity fails in GF({q})"));
                }
                for &c in &els {
                    if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))
                        || f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))
                        || f.add(f.add(a, b), c) != f.add(a, f.add(b, c))
                    {
                        return Err(format!("associativity or distributivity fails in GF({q})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn frobenius() -> Result<(), String> {
    for q in SMALL_ORDERS {
        let f = Field::of_order(q).unwrap();
        let p = f.p() as u64;
        for e in 1..=f.m() {
            let q0 = p.pow(e);
            for a in f.elements() {
                for b in f.elements() {
                    let fr = |x| f.frobenius(x, q0).unwrap();
                    if fr(f.add(a, b)) != f.add(fr(a), fr(b)) || fr(f.mul(a, b)) != f.mul(fr(a), fr(b)) {
                        return Err(format!("x -> x^{q0} is not a homomorphism of GF({q})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn section_properties() -> Result<(), String> {
    for (q, degree, leading) in [(2u64, 3u32, vec![1u32, 1, 1]), (3, 3, vec![2, 1]), (3, 2, vec![1, 1, 1])] {
        let f = Field::of_order(q).unwrap();
        let bundle = LineBundleA2::with_leading(q, degree, &leading).unwrap();
        let basis = section_basis(&bundle, &f).unwrap();
        let points = dlcodes::dl_surfaces::a2_points(q, &f).unwrap();
        let plane = enumerate_projective(2, &f).unwrap();
        let scalars: Vec<Fe> = f.elements().collect();
        for (i, s) in basis.polys.iter().enumerate() {
            let t = &basis.polys[(i + 1) % basis.dim()];
            for &a in &scalars {
                for &b in &scalars {
                    let combo = s.scale(a).add(&t.scale(b)).unwrap();
                    for pt in &points {
                        let m = bundle.mult[pt.base_index];
                        let lhs = eval_section(&combo, pt, m).unwrap();
                        let rhs = f.add(
                            f.mul(a, eval_section(s, pt, m).unwrap()),
                            f.mul(b, eval_section(t, pt, m).unwrap()),
                        );
                        if lhs != rhs {
                            return Err(format!("eval_section is not linear at q={q}"));
                        }
                    }
                }
            }
            for pt in &points {
                let m = bundle.mult[pt.base_index];
                let zero = eval_section(s, pt, m).unwrap().is_zero();
                for &lam in scalars.iter().skip(1) {
                    let base: Vec<Fe> = pt.base.coords().iter().map(|&x| f.mul(lam, x)).collect();
                    for other in plane.iter().filter(|o| **o != pt.base && pt.line.dot(&f, o.coords()).is_zero()) {
                        for &mu in scalars.iter().skip(1) {
                            let dir: Vec<Fe> = other.coords().iter().map(|&x| f.mul(mu, x)).collect();
                            if taylor_coefficient(s, &base, &dir, m).unwrap().is_zero() != zero {
                                return Err(format!("zero status depends on representatives at q={q}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn singleton(codes: &[(&str, &LinearCode, Option<usize>)]) -> Result<(), String> {
    for (name, code, d) in codes {
        let (n, k) = (code.n(), code.k());
        // a row of the reduced echelon form is zero on the other k - 1 pivots
        let (rref, _) = code.generator().rref();
        let lightest = rref.row_iter().map(|r| r.iter().filter(|x| !x.is_zero()).count()).min().unwrap();
        if lightest > n - k + 1 {
            return Err(format!("{name}: echelon row of weight {lightest} > n - k + 1"));
        }
        if let Some(d) = d {
            if d + k > n + 1 {
                return Err(format!("{name}: d = {d} violates Singleton"));
            }
        }
    }
    Ok(())
}

fn seeded_sampling(code: &LinearCode) -> Result<(), String> {
    for seed in [0u64, 1, 0xdead_beef] {
        let a = sampled_min_weight(code, 3000, seed).unwrap();
        let b = sampled_min_weight(code, 3000, seed).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sampled_min_weight(code, 3000, seed).unwrap());
        if a != b || a != c {
            return Err(format!("seed {seed} gives different results"));
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let f2 = Field::of_order(2).unwrap();
    let f4 = Field::of_order(4).unwrap();
    let v1 = LineBundleA2::with_leading(2, 3, &[1, 1, 1]).unwrap();
    let v2 = LineBundleA2::with_leading(2, 2, &[1]).unwrap();
    let example = build_code_a2(&CodeSpec::new(RankTwoBundleSpec::a2(2, v1.clone(), v1.clone()).unwrap(), 1), &f2).unwrap();
    let mixed = build_code_a2(&CodeSpec::new(RankTwoBundleSpec::a2(2, v1, v2).unwrap(), 1), &f2).unwrap();
    let proxy = build_code_2a4_proxy(&CodeSpec::new(RankTwoBundleSpec::twisted_a4(2, 4, 4).unwrap(), 2), &f4).unwrap();
    let d_example = exact_min_distance(&example, DEFAULT_BUDGET, false).unwrap().min_weight;
    let d_mixed = exact_min_distance(&mixed, DEFAULT_BUDGET, false).unwrap().min_weight;

    let suites: [(&str, Result<(), String>); 5] = [
        ("field axioms", field_axioms()),
        ("Frobenius", frobenius()),
        ("section linearity and representatives", section_properties()),
        (
            "Singleton",
            singleton(&[
                ("example A2", &example, Some(d_example)),
                ("mixed A2", &mixed, Some(d_mixed)),
                ("2A4 proxy", &proxy.code, None),
            ]),
        ),
        ("seeded sampling", seeded_sampling(&proxy.code)),
    ];
    let failures: Vec<String> = suites
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} suites hold", suites.len())
        } else {
            failures.join("; ")
        },
    )
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        (1, "Example A2 reproduction", criterion_1),
        (2, "Example 2A4 formulas", criterion_2),
        (3, "Harbourne formula equals kernel dimension", criterion_3),
        (4, "bound engines agree with the A2 corollary", criterion_4),
        (5, "geometry oracles", criterion_5),
        (6, "2A4 proxy rank", criterion_6),
        (7, "property suites", criterion_7),
    ];
    let mut failed = BTreeSet::new();
    for (id, name, run) in criteria {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}): {}", out.detail);
        if !out.passed {
            failed.insert(id);
        }
    }
    println!("NOTE {}", harbourne_any_position_note());

    let expected: BTreeSet<u32> = KNOWN_RED.iter().copied().collect();
    let passed = 7 - failed.len();
    println!("acceptance: {passed} passed, {} failed (known red: {expected:?})", failed.len());
    for id in expected.difference(&failed) {
        println!("UNEXPECTED PASS criterion {id}: update KNOWN_RED");
    }
    for id in failed.difference(&expected) {
        println!("UNEXPECTED FAIL criterion {id}");
    }
    if failed == expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
