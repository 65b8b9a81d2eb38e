use proptest::prelude::*;

use lpcoh::asymptotics::{lemma_num_min, rate, LinearCondition, Relation, Solution};
use lpcoh::heis::{self, differentiate, weight_split, HeisForm};
use lpcoh::linalg::Matrix;
use lpcoh::poly::Poly;
use lpcoh::straight::{canonicalize, config_from_mu, p_alpha};
use lpcoh::strips::{classify, real_hyperbolic_table, strip_report};
use lpcoh::structure::{
    has_abelian_factor, matroid_components, npc, reducible, zero_in_convex_hull,
};
use lpcoh::{conjugate, dual_pair, EigProfile, Rat, Status, WeightConfig};

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| Rat::new(n, d))
}

fn exponent() -> impl Strategy<Value = Rat> {
    (1i64..=40, 1i64..=9).prop_map(|(n, d)| Rat::one() + Rat::new(n, d))
}

fn profile() -> impl Strategy<Value = EigProfile> {
    prop::collection::vec(0i64..=6, 1..=6)
        .prop_filter("positive trace", |v| v.iter().any(|&x| x > 0))
        .prop_map(|v| EigProfile::from_ints(&v).unwrap())
}

fn weights() -> impl Strategy<Value = WeightConfig> {
    (1usize..=3, 1usize..=5)
        .prop_flat_map(|(r, n)| prop::collection::vec(prop::collection::vec(-3i64..=3, r), n))
        .prop_filter("nonzero weights", |rows| {
            rows.iter().all(|w| w.iter().any(|&x| x != 0))
        })
        .prop_map(|rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            WeightConfig::from_ints(&refs).unwrap()
        })
}

fn gl2() -> impl Strategy<Value = Matrix> {
    prop::array::uniform4(-4i64..=4)
        .prop_filter("invertible", |e| e[0] * e[3] != e[1] * e[2])
        .prop_map(|e| {
            Matrix::from_rows(
                &[
                    vec![Rat::int(e[0]), Rat::int(e[1])],
                    vec![Rat::int(e[2]), Rat::int(e[3])],
                ],
                2,
            )
        })
}

/// Non-constant triple.
fn triple() -> impl Strategy<Value = [Rat; 3]> {
    prop::array::uniform3(rat()).prop_filter("not constant", |t| t[0] != t[1] || t[1] != t[2])
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, nvars), -5i64..=5), 0..=4).prop_map(
        move |terms| {
            let mut p = Poly::zero(nvars);
            for (e, c) in terms {
                p.add_term(e, Rat::int(c));
            }
            p
        },
    )
}

fn form(m: usize) -> impl Strategy<Value = HeisForm> {
    let dim = 2 * m - 1;
    prop::collection::vec((0u32..(1 << dim), poly(heis::nvars(m))), 1..=3).prop_map(move |parts| {
        parts.into_iter().fold(HeisForm::zero(m), |acc, (mask, f)| {
            acc.add(&HeisForm::monomial(m, mask, f))
        })
    })
}

fn homogeneous(m: usize) -> impl Strategy<Value = HeisForm> {
    let dim = 2 * m - 1;
    (0..=dim).prop_flat_map(move |k| {
        prop::collection::vec(
            (
                prop::sample::subsequence((0..dim).collect::<Vec<_>>(), k),
                poly(heis::nvars(m)),
            ),
            1..=2,
        )
        .prop_map(move |parts| {
            parts.into_iter().fold(HeisForm::zero(m), |acc, (fs, f)| {
                acc.add(&HeisForm::from_factors(m, &fs, f))
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugation_is_an_involution(p in exponent()) {
        let q = conjugate(&p).unwrap();
        prop_assert_eq!(Rat::one() / &p + Rat::one() / &q, Rat::one());
        prop_assert_eq!(conjugate(&q).unwrap(), p);
    }

    #[test]
    fn dual_pair_is_an_involution(p in exponent(), k in 0usize..=6, extra in 0usize..=3) {
        let dim = k + extra;
        let (q, l) = dual_pair(&p, k, dim).unwrap();
        prop_assert_eq!(dual_pair(&q, l, dim).unwrap(), (p, k));
    }

    #[test]
    fn profile_duality(prof in profile()) {
        let n = prof.n();
        for j in 0..=n {
            prop_assert_eq!(&(prof.w(j).unwrap() + prof.W(n - j).unwrap()), prof.h());
            prop_assert!(prof.w(j).unwrap() <= prof.W(j).unwrap());
        }
    }

    #[test]
    fn strip_report_agrees_with_pointwise_classifier(prof in profile(), k in 1usize..=6, p in exponent(), abelian: bool) {
        prop_assume!(k <= prof.n());
        let report = strip_report(&prof, k, abelian).unwrap();
        prop_assert!(report.regions.covers_domain());
        if report.regions.is_punctured_at(&p) {
            prop_assert_eq!(report.status_at(&p), Some(Status::Unknown));
        } else {
            let status = report.status_at(&p).unwrap();
            let flags = classify(&prof, k, &p, abelian).unwrap();
            prop_assert_eq!(status, flags.status());
            prop_assert_eq!(&report.regions.piece_at(&p).unwrap().flags, &flags.flag_set());
        }
    }

    #[test]
    fn classifier_dual_pair(prof in profile(), k in 1usize..=6, p in exponent()) {
        prop_assume!(k <= prof.n());
        let flags = classify(&prof, k, &p, false).unwrap();
        prop_assert_eq!(flags.dual.degree, prof.n() + 1 - k);
        prop_assert_eq!(Rat::one() / &p + Rat::one() / &flags.dual.q, Rat::one());
        prop_assert!(!(flags.vanishes && flags.hausdorff_iso_z));
    }

    #[test]
    fn constant_profile_matches_real_table(n in 2usize..=7, k in 1usize..=7, p in exponent()) {
        prop_assume!(k <= n);
        let table = real_hyperbolic_table(n, k).unwrap();
        let generic = strip_report(&EigProfile::constant(n), k, false).unwrap();
        if let Some(s) = table.status_at(&p) {
            let (nr, kr) = (Rat::int(n as i64), Rat::int(k as i64));
            let lo = &nr / &kr;
            let inside = p > lo && (k == 1 || p < &nr / &(kr - Rat::one()));
            prop_assert_eq!(s == Status::Nonzero, inside);
            let g = generic.status_at(&p).unwrap();
            prop_assert_eq!(g == Status::Zero, s == Status::Zero);
        }
    }

    #[test]
    fn straight_canonical_form_invariants(mu in triple(), g in gl2(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let cfg = config_from_mu(&mu);
        let c = canonicalize(&cfg).unwrap();
        prop_assert!(c.p_alpha >= Rat::int(2) && c.p_alpha <= Rat::int(3));
        prop_assert_eq!(c.mu.iter().sum::<Rat>(), Rat::zero());
        prop_assert_eq!(&c.mu[0] - &c.mu[1], Rat::one());
        let moved = cfg.precompose(&g).unwrap().permute(&perm).unwrap();
        prop_assert_eq!(&canonicalize(&moved).unwrap(), &c);
        prop_assert_eq!(&canonicalize(&config_from_mu(&c.mu)).unwrap(), &c);
        let scaled: [Rat; 3] = mu.clone().map(|v| &v * &Rat::int(3) + Rat::new(1, 2));
        prop_assert_eq!(p_alpha(&config_from_mu(&scaled)).unwrap(), c.p_alpha);
    }

    #[test]
    fn npc_matches_convex_hull_test(cfg in weights()) {
        let witness = npc(&cfg).unwrap();
        prop_assert_eq!(witness.is_some(), !zero_in_convex_hull(&cfg));
        if let Some(u) = witness {
            for i in 0..cfg.n() {
                prop_assert!(cfg.eval(i, &u) <= -Rat::one());
            }
        }
    }

    #[test]
    fn reducibility_matches_matroid_components(cfg in weights()) {
        let comps = matroid_components(&cfg);
        let mut all: Vec<usize> = comps.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (1..=cfg.n()).collect::<Vec<_>>());
        if !has_abelian_factor(&cfg) {
            let split = reducible(&cfg).unwrap();
            prop_assert_eq!(split.is_some(), comps.len() > 1);
        }
    }

    #[test]
    fn polynomial_ring_laws(a in poly(3), b in poly(3), c in poly(3), i in 0usize..3) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).partial(i), &(&a.partial(i) * &b) + &(&a * &b.partial(i)));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn d_squared_vanishes(f2 in form(2), f3 in form(3)) {
        prop_assert!(differentiate(&differentiate(&f2)).is_zero());
        prop_assert!(differentiate(&differentiate(&f3)).is_zero());
    }

    #[test]
    fn leibniz_rule(a in homogeneous(2), b in homogeneous(2)) {
        let sign = if a.degree().unwrap_or(0) % 2 == 0 { Rat::one() } else { -Rat::one() };
        let lhs = differentiate(&a.wedge(&b));
        let rhs = differentiate(&a).wedge(&b).add(&a.wedge(&differentiate(&b)).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_split_roundtrip(f in form(3)) {
        let (h, v) = weight_split(&f);
        prop_assert!(h.is_horizontal());
        prop_assert_eq!(heis::recombine(&h, &v), f);
    }

    #[test]
    fn heisenberg_bracket(f in poly(3)) {
        let xy = heis::x_op(2, 1, &heis::y_op(2, 1, &f));
        let yx = heis::y_op(2, 1, &heis::x_op(2, 1, &f));
        prop_assert_eq!(&xy - &yx, heis::z_op(2, &f));
    }

    #[test]
    fn closed_form_minimum_is_a_lower_bound(
        a in (1i64..=40).prop_map(|n| Rat::new(n, 8)),
        b in (1i64..=40).prop_map(|n| Rat::new(n, 8)),
        la in -4.0f64..4.0,
        lb in -4.0f64..4.0,
        t in -10.0f64..10.0,
    ) {
        let (big_a, big_b) = (la.exp(), lb.exp());
        let m = lemma_num_min(&a, &b, big_a, big_b).unwrap();
        let f = |t: f64| (-a.to_f64() * t).exp() * big_a + (b.to_f64() * t).exp() * big_b;
        prop_assert!(m.f_min <= f(t) * (1.0 + 1e-12));
        prop_assert!((f(m.t_min) - m.f_min).abs() <= 1e-12 * m.f_min);
    }

    #[test]
    fn rate_is_a_convex_combination(a in exponent(), b in exponent(), alpha in rat(), beta in rat()) {
        let r = rate(&a, &b, &alpha, &beta).unwrap();
        let (lo, hi) = if alpha <= beta { (&alpha, &beta) } else { (&beta, &alpha) };
        prop_assert!(lo <= &r && &r <= hi);
    }

    #[test]
    fn linear_condition_solution_is_exact(cp in rat(), c0 in rat(), gt: bool, p in rat()) {
        let cond = LinearCondition {
            coeff_p: cp,
            constant: c0,
            relation: if gt { Relation::Gt } else { Relation::Lt },
        };
        let inside = match cond.solve() {
            Solution::Above(r) => p > r,
            Solution::Below(r) => p < r,
            Solution::All => true,
            Solution::Empty => false,
        };
        prop_assert_eq!(inside, cond.holds(&p));
    }
}

#[test]
fn closed_tables_respect_generic_vanishing() {
    use lpcoh::straight::CanonicalMu;
    use lpcoh::strips::{complex_hyperbolic_table, s_alpha_degree2_mu, sl3_degree2};

    let grid: Vec<Rat> = (1..=400).map(|j| Rat::one() + Rat::new(j, 40)).collect();
    for m in 2..=6usize {
        let prof = EigProfile::heisenberg(m);
        for k in 1..2 * m {
            let table = complex_hyperbolic_table(m, k).unwrap();
            let generic = strip_report(&prof, k, false).unwrap();
            for p in &grid {
                if generic.status_at(p) == Some(Status::Zero) {
                    assert_ne!(
                        table.status_at(p),
                        Some(Status::Nonzero),
                        "m={m} k={k} p={p}"
                    );
                }
            }
        }
    }
    let sl3 = sl3_degree2();
    let generic = strip_report(&EigProfile::from_ints(&[0, 1, 1, 2]).unwrap(), 2, false).unwrap();
    let mu = CanonicalMu::from_pattern([Rat::int(4), Rat::int(-1), Rat::int(-3)]).unwrap();
    let straight = s_alpha_degree2_mu(&mu).unwrap();
    let generic_s = strip_report(&EigProfile::from_ints(&[0, 1, 1, 1]).unwrap(), 2, false).unwrap();
    for p in &grid {
        if generic.status_at(p) == Some(Status::Zero) {
            assert_eq!(sl3.status_at(p), Some(Status::Zero), "sl3 p={p}");
        }
        if generic_s.status_at(p) == Some(Status::Zero) {
            assert_eq!(straight.status_at(p), Some(Status::Zero), "straight p={p}");
        }
    }
}
