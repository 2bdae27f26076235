use std::collections::BTreeMap;

use proptest::prelude::*;

use dlcodes::bundle_codes::{build_code_a2_with, CodeSpec, HypothesisPolicy, RankTwoBundleSpec};
use dlcodes::code::LinearCode;
use dlcodes::dl_surfaces::a2_points;
use dlcodes::linalg::Matrix;
use dlcodes::mindist::{exact_min_distance, sampled_min_weight, DEFAULT_BUDGET};
use dlcodes::projgeom::{enumerate_projective, enumerate_variety, HomogPoly, monomial_basis, ProjPoint};
use dlcodes::rr_spaces::{eval_section, section_basis, taylor_coefficient, LineBundleA2};
use dlcodes::{Fe, Field};

const SMALL_ORDERS: [(u32, u32); 10] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)];

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(SMALL_ORDERS.to_vec()).prop_map(|(p, m)| Field::canonical(p, m).unwrap())
}

fn any_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 8), (3, 5), (251, 1), (2, 16)])
        .prop_map(|(p, m)| Field::canonical(p, m).unwrap())
}

#[test]
fn field_axioms_exhaustive() {
    for (p, m) in SMALL_ORDERS {
        let f = Field::canonical(p, m).unwrap();
        let els: Vec<Fe> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, Fe::ZERO), a);
            assert_eq!(f.mul(a, Fe::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE, "q={}", f.q());
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
    for (p, m) in SMALL_ORDERS {
        let f = Field::canonical(p, m).unwrap();
        let q = f.q() as u64;
        let has_generator = f.elements().skip(1).any(|g| {
            (1..q - 1).all(|e| f.pow(g, e) != Fe::ONE) && f.pow(g, q - 1) == Fe::ONE
        });
        assert!(has_generator, "q={q}");
    }
}

proptest! {
    #[test]
    fn field_axioms_sampled(f in any_field(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = f.q();
        let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism(f in any_field(), a in any::<u32>(), b in any::<u32>()) {
        let q = f.q();
        let (a, b) = (Fe(a % q), Fe(b % q));
        let p = f.p() as u64;
        let frob = |x| f.frobenius(x, p).unwrap();
        prop_assert_eq!(frob(f.add(a, b)), f.add(frob(a), frob(b)));
        prop_assert_eq!(frob(f.mul(a, b)), f.mul(frob(a), frob(b)));
        // m-fold composition of x -> x^p is the identity
        let mut x = a;
        for _ in 0..f.m() {
            x = frob(x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn digits_roundtrip(f in any_field(), a in any::<u32>()) {
        let a = Fe(a % f.q());
        prop_assert_eq!(f.parse_digits(&f.to_digits(a)).unwrap(), a);
        prop_assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
    }
}

fn random_poly(f: &Field, nvars: usize, degree: u32, seed: &[u32]) -> HomogPoly {
    let basis = monomial_basis(nvars, degree);
    let coeffs: Vec<Fe> = (0..basis.len()).map(|i| Fe(seed[i % seed.len()].wrapping_mul(i as u32 + 7) % f.q())).collect();
    HomogPoly::from_dense(f, nvars, degree, &coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_is_multiplicative(f in small_field(), d1 in 0u32..3, d2 in 0u32..3, seed in prop::collection::vec(any::<u32>(), 1..8)) {
        let g = random_poly(&f, 3, d1, &seed);
        let h = random_poly(&f, 3, d2, &seed[1..].iter().chain(&[5]).copied().collect::<Vec<_>>());
        let gh = g.mul(&h).unwrap();
        for pt in enumerate_projective(2, &f).unwrap().iter().take(40) {
            prop_assert_eq!(gh.eval(pt).unwrap(), f.mul(g.eval(pt).unwrap(), h.eval(pt).unwrap()));
        }
    }

    #[test]
    fn variety_of_two_equations_is_intersection(q in prop::sample::select(vec![2u64, 3, 4]), seed in prop::collection::vec(any::<u32>(), 1..6)) {
        let f = Field::of_order(q).unwrap();
        let g = random_poly(&f, 3, 2, &seed);
        let h = random_poly(&f, 3, 1, &seed.iter().map(|x| x ^ 0x55).collect::<Vec<_>>());
        let both = enumerate_variety(&[g.clone(), h.clone()], 2, &f).unwrap();
        let vg = enumerate_variety(&[g], 2, &f).unwrap();
        let vh = enumerate_variety(&[h], 2, &f).unwrap();
        let expected: Vec<ProjPoint> = vg.into_iter().filter(|p| vh.contains(p)).collect();
        prop_assert_eq!(both, expected);
    }

    #[test]
    fn section_evaluation_is_linear(q in prop::sample::select(vec![2u64, 3]), a in any::<u32>(), b in any::<u32>(), i in any::<usize>(), j in any::<usize>()) {
        let f = Field::of_order(q).unwrap();
        let bundle = LineBundleA2::with_leading(q, 3, &[2, 1, 1]).unwrap();
        let basis = section_basis(&bundle, &f).unwrap();
        let (s, t) = (&basis.polys[i % basis.dim()], &basis.polys[j % basis.dim()]);
        let (a, b) = (Fe(a % f.q()), Fe(b % f.q()));
        let combo = s.scale(a).add(&t.scale(b)).unwrap();
        for pt in a2_points(q, &f).unwrap() {
            let m = bundle.mult[pt.base_index];
            let lhs = eval_section(&combo, &pt, m).unwrap();
            let rhs = f.add(f.mul(a, eval_section(s, &pt, m).unwrap()), f.mul(b, eval_section(t, &pt, m).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_status_ignores_representatives(q in prop::sample::select(vec![2u64, 3]), lam in 1u32..3, mu in 1u32..3, i in any::<usize>()) {
        let f = Field::of_order(q).unwrap();
        let (lam, mu) = (Fe(lam % f.q()).max(Fe::ONE), Fe(mu % f.q()).max(Fe::ONE));
        let bundle = LineBundleA2::with_leading(q, 2, &[1, 1]).unwrap();
        let basis = section_basis(&bundle, &f).unwrap();
        let s = &basis.polys[i % basis.dim()];
        let plane = enumerate_projective(2, &f).unwrap();
        for pt in a2_points(q, &f).unwrap() {
            let m = bundle.mult[pt.base_index];
            let reference = eval_section(s, &pt, m).unwrap().is_zero();
            let base: Vec<Fe> = pt.base.coords().iter().map(|&x| f.mul(lam, x)).collect();
            // every other point of the line is an admissible direction
            for other in plane.iter().filter(|p| **p != pt.base && pt.line.dot(&f, p.coords()).is_zero()) {
                let dir: Vec<Fe> = other.coords().iter().map(|&x| f.mul(mu, x)).collect();
                let v = taylor_coefficient(s, &base, &dir, m).unwrap();
                prop_assert_eq!(v.is_zero(), reference);
            }
        }
    }
}

fn random_code(f: &Field, k: usize, n: usize, cells: &[u32]) -> Option<LinearCode> {
    let rows: Vec<Vec<Fe>> = (0..k).map(|r| (0..n).map(|c| Fe(cells[(r * n + c) % cells.len()] % f.q())).collect()).collect();
    LinearCode::new(Matrix::from_rows(f, n, rows), Vec::new(), BTreeMap::new()).ok()
}

/// Every message, no projective shortcut, no Gray code.
fn brute_distribution(code: &LinearCode) -> BTreeMap<usize, u128> {
    let f = code.field();
    let q = f.q();
    let mut out = BTreeMap::new();
    let total = (q as u64).pow(code.k() as u32);
    for mut idx in 0..total {
        let msg: Vec<Fe> = (0..code.k())
            .map(|_| {
                let d = (idx % q as u64) as u32;
                idx /= q as u64;
                Fe(d)
            })
            .collect();
        let w = code.encode(&msg).iter().filter(|x| !x.is_zero()).count();
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustive_search_matches_brute_force(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 8]),
        k in 1usize..4,
        extra in 0usize..5,
        cells in prop::collection::vec(any::<u32>(), 1..40),
    ) {
        let f = Field::of_order(q).unwrap();
        let n = k + extra;
        if let Some(code) = random_code(&f, k, n, &cells) {
            let r = exact_min_distance(&code, DEFAULT_BUDGET, true).unwrap();
            let brute = brute_distribution(&code);
            let d = brute.keys().copied().find(|&w| w > 0).unwrap();
            prop_assert_eq!(r.min_weight, d);
            prop_assert_eq!(r.distribution.unwrap(), brute);
            // Singleton
            prop_assert!(d <= n - k + 1);
        }
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>(), trials in 1u64..2000) {
        let f = Field::of_order(4).unwrap();
        let code = random_code(&f, 4, 12, &[1, 2, 3, 0, 1, 1, 2, 3, 3, 1, 0, 2, 2, 1, 3]).unwrap();
        let a = sampled_min_weight(&code, trials, seed).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = single.install(|| sampled_min_weight(&code, trials, seed).unwrap());
        prop_assert_eq!(&a, &b);
        let exact = exact_min_distance(&code, DEFAULT_BUDGET, false).unwrap().min_weight;
        prop_assert!(a.min_weight >= exact);
    }

    #[test]
    fn matrix_text_roundtrip(q in prop::sample::select(vec![2u64, 3, 4, 9]), cells in prop::collection::vec(any::<u32>(), 1..30)) {
        let f = Field::of_order(q).unwrap();
        if let Some(code) = random_code(&f, 3, 6, &cells) {
            let back = LinearCode::parse_matrix(&code.matrix_to_text()).unwrap();
            prop_assert_eq!(back.generator(), code.generator());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Small A2 bundles at q = 2: whenever a code is built it obeys the
    /// Singleton bound and its dimension is the sum of section-space dimensions.
    #[test]
    fn constructed_a2_codes_obey_singleton(
        n1 in 1u32..4, n2 in 1u32..4,
        m1 in prop::collection::vec(0u32..2, 0..4),
        m2 in prop::collection::vec(0u32..2, 0..4),
    ) {
        let q = 2;
        let f = Field::of_order(q).unwrap();
        let v1 = LineBundleA2::with_leading(q, n1, &m1).unwrap();
        let v2 = LineBundleA2::with_leading(q, n2, &m2).unwrap();
        let dims = section_basis(&v1, &f).unwrap().dim() + section_basis(&v2, &f).unwrap().dim();
        let spec = CodeSpec::new(RankTwoBundleSpec::a2(q, v1, v2).unwrap(), 1);
        if let Ok(code) = build_code_a2_with(&spec, &f, HypothesisPolicy::Record) {
            prop_assert_eq!(code.k(), dims);
            let d = exact_min_distance(&code, DEFAULT_BUDGET, false).unwrap().min_weight;
            prop_assert!(d + code.k() <= code.n() + 1);
        }
    }
}
