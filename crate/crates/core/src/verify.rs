//! Seeded randomized verification suites. Every check draws from its own
//! `ChaCha8` stream derived from the run seed, so a report is a pure function
//! of `(suite, seed, trials, m)`.

use std::fmt::Display;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    bracket_and_minimize, budget_identities, budget_nonvanishing, budget_vanishing,
    conjugate_identities, lemma_num_min, numeric_num_min, rate, sl3_decay, Direction,
    DualComponent, Sl3Pattern,
};
use crate::error::{Error, Result};
use crate::heis::{
    differentiate, duality_orthogonality, fdx_obstruction_formula, hdim, lefschetz_rank,
    nullclass_middle, nvars, sl3_pair_construct, vertical_construct, weight_split, HeisForm,
};
use crate::interval::Status;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::profile::EigProfile;
use crate::rational::Rat;
use crate::straight::{canonicalize, config_from_mu, p_alpha};
use crate::strips::s_alpha_degree2;
use crate::structure::{analyze, npc};
use crate::weights::WeightConfig;

const MAX_COUNTEREXAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Heis,
    Budget,
    Numlemma,
    Appendix,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "heis" => Suite::Heis,
            "budget" => Suite::Budget,
            "numlemma" => Suite::Numlemma,
            "appendix" => Suite::Appendix,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub m: usize,
    pub checks: Vec<CheckOutcome>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Verification: {:?} (seed {}, trials {})\n\n| check | passed | result |\n|---|---|---|\n",
            self.suite, self.seed, self.trials
        );
        for c in &self.checks {
            let metric = c
                .metric
                .map(|v| format!(" (metric {v:e})"))
                .unwrap_or_default();
            out.push_str(&format!(
                "| {} | {}/{}{} | {} |\n",
                c.name,
                c.passed,
                c.total,
                metric,
                if c.ok { "PASS" } else { "FAIL" }
            ));
        }
        for c in self.checks.iter().filter(|c| !c.counterexamples.is_empty()) {
            out.push_str(&format!("\n## {}\n\n", c.name));
            for ce in &c.counterexamples {
                out.push_str(&format!("- `{ce}`\n"));
            }
        }
        out
    }
}

/// Accumulates trial results for one named check.
struct Tally {
    name: String,
    passed: usize,
    total: usize,
    metric: Option<f64>,
    counterexamples: Vec<String>,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally {
            name: name.to_string(),
            passed: 0,
            total: 0,
            metric: None,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(witness());
        }
    }

    /// Records an `Err` as a failed trial.
    fn record_result<E: Display>(
        &mut self,
        r: std::result::Result<bool, E>,
        witness: impl FnOnce() -> String,
    ) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{}: {e}", witness())),
        }
    }

    fn track_max(&mut self, v: f64) {
        self.metric = Some(self.metric.map_or(v, |m| m.max(v)));
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            ok: self.passed == self.total,
            name: self.name,
            passed: self.passed,
            total: self.total,
            metric: self.metric,
            counterexamples: self.counterexamples,
        }
    }
}

fn stream(seed: u64, check: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(check);
    rng
}

/// Uniform rational `num/den` with `den ∈ 1..=max_den`, in `[lo, hi]`.
pub fn random_rat(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    Rat::new(rng.gen_range(lo * den..=hi * den), den)
}

/// Random polynomial in `nvars` variables with up to `max_terms` terms of
/// total degree `≤ max_deg` and small integer coefficients.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, max_deg: u32, max_terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut exps = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_deg) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let c = Rat::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        p.add_term(exps, c);
    }
    p
}

/// Random form on `Heis(2m−1)` with a few monomials of any degree.
pub fn random_form(rng: &mut impl Rng, m: usize, max_deg: u32) -> HeisForm {
    let dim = 2 * m - 1;
    let mut out = HeisForm::zero(m);
    for _ in 0..rng.gen_range(1..=3) {
        let mask = rng.gen_range(0..(1u32 << dim));
        out = out.add(&HeisForm::monomial(
            m,
            mask,
            random_poly(rng, nvars(m), max_deg, 3),
        ));
    }
    out
}

/// Random horizontal form of exact degree `k`.
pub fn random_horizontal(rng: &mut impl Rng, m: usize, k: usize, max_deg: u32) -> HeisForm {
    let mut out = HeisForm::zero(m);
    let mut factors: Vec<usize> = (0..hdim(m)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        factors.shuffle(rng);
        let mut chosen = factors[..k].to_vec();
        chosen.sort();
        out = out.add(&HeisForm::from_factors(
            m,
            &chosen,
            random_poly(rng, nvars(m), max_deg, 3),
        ));
    }
    out
}

/// A random straight configuration with its expected `p_α`, built from a
/// canonical gap `g = μ₂ − μ₃ ∈ [0, 1]` (so `p_α = 2 + g`), a random
/// rescaling and reflection, a random `GL₂(ℚ)` precomposition and a random
/// row permutation.
pub fn random_straight(rng: &mut impl Rng) -> (WeightConfig, Rat, [Rat; 3]) {
    let den = rng.gen_range(1..=12);
    let g = Rat::new(rng.gen_range(0..=den), den);
    let scale = random_rat(rng, 1, 5, 7);
    let shift = random_rat(rng, -3, 3, 5);
    let sign = if rng.gen_bool(0.5) {
        Rat::one()
    } else {
        -Rat::one()
    };
    let mu = [&g + Rat::one(), g.clone(), Rat::zero()].map(|v| &sign * &(&(&v * &scale) + &shift));
    let base = config_from_mu(&mu);
    let gmat = loop {
        let e: Vec<Rat> = (0..4).map(|_| random_rat(rng, -4, 4, 3)).collect();
        if !(&e[0] * &e[3] - &e[1] * &e[2]).is_zero() {
            break Matrix::from_rows(
                &[
                    vec![e[0].clone(), e[1].clone()],
                    vec![e[2].clone(), e[3].clone()],
                ],
                2,
            );
        }
    };
    let mut perm = vec![0, 1, 2];
    perm.shuffle(rng);
    let cfg = base
        .precompose(&gmat)
        .and_then(|c| c.permute(&perm))
        .expect("invertible change of basis keeps weights nonzero");
    (cfg, Rat::int(2) + g, mu)
}

fn check_heis(seed: u64, trials: usize, m: usize) -> Result<Vec<CheckOutcome>> {
    if !(2..=6).contains(&m) {
        return Err(Error::Domain(format!(
            "heis suite supports 2 <= m <= 6, got {m}"
        )));
    }
    let mut out = Vec::new();

    let mut t = Tally::new("lefschetz_injective_iff_k_le_m-2_surjective_iff_k_ge_m-2");
    for k in 0..=hdim(m) {
        t.record_result(
            lefschetz_rank(m, k).map(|r| {
                (r.dim_kernel == 0) == (k + 2 <= m)
                    && (r.dim_image == r.dim_codomain) == (k + 2 >= m)
            }),
            || format!("m={m} k={k}"),
        );
    }
    out.push(t.finish());

    let mut t = Tally::new("duality_orthogonality");
    for k in 2..=hdim(m) {
        t.record_result(duality_orthogonality(m, k), || format!("m={m} k={k}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("d_squared_zero");
    let mut rng = stream(seed, 1);
    for _ in 0..trials {
        let form = random_form(&mut rng, m, 3);
        let ok = differentiate(&differentiate(&form)).is_zero();
        t.record(ok, || form.to_json());
    }
    out.push(t.finish());

    let mut t = Tally::new("vertical_construct_has_vertical_differential");
    let mut rng = stream(seed, 2);
    for _ in 0..trials {
        let phi1 = random_horizontal(&mut rng, m, m - 1, 3);
        let r =
            vertical_construct(m, &phi1).map(|phi| weight_split(&differentiate(&phi)).0.is_zero());
        t.record_result(r, || phi1.to_json());
    }
    out.push(t.finish());

    let mut t = Tally::new("middle_obstruction_is_vertical");
    let mut rng = stream(seed, 3);
    for _ in 0..trials {
        let theta = random_horizontal(&mut rng, m, m - 1, 3);
        let r = nullclass_middle(m, &theta).map(|o| o.is_zero() || weight_split(&o).0.is_zero());
        t.record_result(r, || theta.to_json());
    }
    out.push(t.finish());

    let mut t = Tally::new("fdx_obstruction_formula");
    let mut rng = stream(seed, 4);
    for _ in 0..trials {
        let f = random_poly(&mut rng, nvars(2), 3, 4);
        let theta = HeisForm::from_factors(2, &[0], f.clone());
        let r = nullclass_middle(2, &theta).map(|o| o == fdx_obstruction_formula(&f));
        t.record_result(r, || format!("f = {f}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("sl3_pair_zero_obstruction");
    let mut rng = stream(seed, 5);
    for _ in 0..trials {
        let u = random_poly(&mut rng, nvars(2), 4, 4);
        t.record_result(
            sl3_pair_construct(&u).map(|c| c.certificate.is_zero()),
            || format!("u = {u}"),
        );
    }
    out.push(t.finish());
    Ok(out)
}

fn check_budget(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut oracle = Tally::new("p_alpha_matches_gap_oracle");
    let mut range = Tally::new("p_alpha_in_[2,3]");
    let mut invariant = Tally::new("p_alpha_invariant_under_gl2_and_permutation");
    let mut idempotent = Tally::new("canonicalize_idempotent");
    let mut zero_low = Tally::new("salpha_zero_on_(1,3/2)");
    let mut budget = Tally::new("budget_plus_threshold_equals_p_alpha");
    let mut implied = Tally::new("minus_threshold_le_3/2_lt_plus_threshold");
    let mut vanish = Tally::new("t3_certified_iff_p_below_p_alpha");
    let mut rng = stream(seed, 10);
    let three_halves = Rat::new(3, 2);
    for _ in 0..trials {
        let (cfg, expected, mu) = random_straight(&mut rng);
        let show = || cfg.to_json();
        let Ok(c) = canonicalize(&cfg) else {
            oracle.record(false, || format!("not straight: {}", show()));
            continue;
        };
        oracle.record(c.p_alpha == expected, || {
            format!("{} expected {expected}", show())
        });
        range.record(c.p_alpha >= Rat::int(2) && c.p_alpha <= Rat::int(3), show);
        let base = config_from_mu(&mu);
        invariant.record_result(p_alpha(&base).map(|p| p == c.p_alpha), show);
        idempotent.record_result(canonicalize(&config_from_mu(&c.mu)).map(|d| d == c), show);
        zero_low.record_result(
            s_alpha_degree2(&cfg).map(|rep| {
                let covered = rep.regions.pieces().iter().any(|p| {
                    p.status == Status::Zero && p.lo == Rat::one() && !p.hi.lt_rat(&three_halves)
                });
                let clean = rep.regions.puncture_points().all(|x| *x >= three_halves);
                covered && clean
            }),
            show,
        );
        match budget_nonvanishing(&c) {
            Ok(b) => {
                budget.record(b.plus_threshold == c.p_alpha, || {
                    format!("{} got {}", show(), b.plus_threshold)
                });
                implied.record(
                    b.minus_threshold <= three_halves && three_halves < b.plus_threshold,
                    show,
                );
            }
            Err(e) => {
                budget.record(false, || format!("{}: {e}", show()));
                implied.record(false, show);
            }
        }
        let p = loop {
            let p = random_rat(&mut rng, 1, 3, 20);
            if p > three_halves && p < Rat::int(3) {
                break p;
            }
        };
        vanish.record_result(
            budget_vanishing(&c, DualComponent::T3, &p).map(|v| v.certified == (p < c.p_alpha)),
            || format!("{} p={p}", show()),
        );
    }
    let mut idents = Tally::new("symbolic_identities");
    for check in budget_identities()
        .into_iter()
        .chain(conjugate_identities())
    {
        idents.record(check.holds, || {
            format!("{}: {} != {}", check.name, check.lhs, check.rhs)
        });
    }
    Ok([
        oracle, range, invariant, idempotent, zero_low, budget, implied, vanish, idents,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect())
}

fn log_sum_exp(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    m + ((x - m).exp() + (y - m).exp()).ln()
}

fn check_numlemma(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut closed = Tally::new("closed_form_vs_numeric_min_rel_err_le_1e-9");
    let mut rng = stream(seed, 20);
    for _ in 0..trials {
        let a = random_rat(&mut rng, 0, 4, 8) + Rat::new(1, 10);
        let b = random_rat(&mut rng, 0, 4, 8) + Rat::new(1, 10);
        let big_a = rng.gen_range(-5.0f64..5.0).exp();
        let big_b = rng.gen_range(-5.0f64..5.0).exp();
        let witness = || format!("a={a} b={b} A={big_a:e} B={big_b:e}");
        match lemma_num_min(&a, &b, big_a, big_b) {
            Ok(cf) => {
                let (_, f_num) = numeric_num_min(a.to_f64(), b.to_f64(), big_a, big_b);
                let err = (cf.f_min - f_num).abs() / f_num;
                closed.track_max(err);
                closed.record(err <= 1e-9 && cf.f_min <= f_num * (1.0 + 1e-12), witness);
            }
            Err(e) => closed.record(false, || format!("{}: {e}", witness())),
        }
    }

    let mut slope = Tally::new("log_min_slope_matches_rate_abs_err_le_1e-6");
    let mut rng = stream(seed, 21);
    for _ in 0..trials {
        let a = random_rat(&mut rng, 0, 3, 6) + Rat::new(1, 4);
        let b = random_rat(&mut rng, 0, 3, 6) + Rat::new(1, 4);
        let alpha = random_rat(&mut rng, -3, 3, 6);
        let beta = random_rat(&mut rng, -3, 3, 6);
        let (af, bf, al, be) = (a.to_f64(), b.to_f64(), alpha.to_f64(), beta.to_f64());
        // log of e^{−at}e^{αs} + e^{bt}e^{βs}, minimized numerically.
        let log_min =
            |s: f64| bracket_and_minimize(|t| log_sum_exp(-af * t + al * s, bf * t + be * s)).1;
        let measured = (log_min(40.0) - log_min(10.0)) / 30.0;
        let witness = || format!("a={a} b={b} alpha={alpha} beta={beta}");
        match rate(&a, &b, &alpha, &beta) {
            Ok(r) => {
                let err = (measured - r.to_f64()).abs();
                slope.track_max(err);
                slope.record(err <= 1e-6, || format!("{} measured {measured}", witness()));
            }
            Err(e) => slope.record(false, || format!("{}: {e}", witness())),
        }
    }

    let mut decay = Tally::new("sl3_decay_directions");
    let mut rng = stream(seed, 22);
    for _ in 0..trials {
        let p = loop {
            let p = random_rat(&mut rng, 2, 4, 30);
            if p > Rat::int(2) && p < Rat::int(4) {
                break p;
            }
        };
        let r = (|| -> Result<bool> {
            let f_minus = sl3_decay(Sl3Pattern::FDx, &p, Direction::Minus)?;
            let f_plus = sl3_decay(Sl3Pattern::FDx, &p, Direction::Plus)?;
            let g_plus = sl3_decay(Sl3Pattern::GDy, &p, Direction::Plus)?;
            let g_minus = sl3_decay(Sl3Pattern::GDy, &p, Direction::Minus)?;
            Ok(match (f_minus, g_plus) {
                (Some(f), Some(g)) => {
                    f_plus.is_none()
                        && g_minus.is_none()
                        && f.rates == g.rates
                        && f.rates.iter().all(Rat::is_positive)
                }
                _ => false,
            })
        })();
        decay.record_result(r, || format!("p={p}"));
    }
    Ok(vec![closed.finish(), slope.finish(), decay.finish()])
}

fn check_appendix(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let straight = WeightConfig::from_ints(&[&[-1, 1], &[-1, 0], &[-1, -1]])?;
    let mut t = Tally::new("straight_triple_irreducible_npc_hyperbolic");
    t.record_result(
        analyze(&straight)
            .map(|r| r.irreducible() && r.npc_witness.is_some() && r.hyperbolic_witness.is_some()),
        || straight.to_json(),
    );
    out.push(t.finish());

    let split = WeightConfig::from_ints(&[&[-1, 0], &[0, -1]])?;
    let mut t = Tally::new("split_pair_reducible");
    t.record_result(
        analyze(&split).map(|r| r.reducible_partition == Some((vec![1], vec![2]))),
        || split.to_json(),
    );
    out.push(t.finish());

    let mut t = Tally::new("sol_lambda_not_npc");
    let mut rng = stream(seed, 30);
    for i in 0..trials.max(1) {
        let lambda = if i == 0 {
            Rat::one()
        } else {
            Rat::one() + random_rat(&mut rng, 0, 10, 9)
        };
        let cfg = WeightConfig::new(1, 2, vec![vec![Rat::one()], vec![-&lambda]])?;
        t.record_result(npc(&cfg).map(|w| w.is_none()), || {
            format!("lambda={lambda}")
        });
    }
    out.push(t.finish());

    let mut t = Tally::new("profile_duality_w_j_plus_W_n-j_eq_h");
    let mut rng = stream(seed, 31);
    for _ in 0..trials {
        let n = rng.gen_range(1..=8);
        let mut lambdas: Vec<Rat> = (0..n).map(|_| random_rat(&mut rng, 0, 5, 6)).collect();
        if lambdas.iter().all(Rat::is_zero) {
            lambdas[0] = Rat::one();
        }
        let r = EigProfile::new(lambdas.clone()).and_then(|prof| {
            for j in 0..=n {
                if &(prof.w(j)? + prof.W(n - j)?) != prof.h() {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        t.record_result(r, || format!("{lambdas:?}"));
    }
    out.push(t.finish());
    Ok(out)
}

fn prefixed(prefix: &str, checks: Vec<CheckOutcome>) -> Vec<CheckOutcome> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}.{}", c.name);
            c
        })
        .collect()
}

/// Runs a suite. `m` only affects the Heisenberg checks.
pub fn run(suite: Suite, seed: u64, trials: usize, m: usize) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::Heis => check_heis(seed, trials, m)?,
        Suite::Budget => check_budget(seed, trials)?,
        Suite::Numlemma => check_numlemma(seed, trials)?,
        Suite::Appendix => check_appendix(seed, trials)?,
        Suite::All => {
            let mut all = prefixed("heis", check_heis(seed, trials, m)?);
            all.extend(prefixed("budget", check_budget(seed, trials)?));
            all.extend(prefixed("numlemma", check_numlemma(seed, trials)?));
            all.extend(prefixed("appendix", check_appendix(seed, trials)?));
            all
        }
    };
    Ok(VerifyReport {
        suite,
        seed,
        trials,
        m,
        all_passed: checks.iter().all(|c| c.ok),
        checks,
    })
}
