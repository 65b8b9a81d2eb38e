//! Exponent arithmetic for decay estimates: pullback exponents, the
//! two-term minimization `inf_t e^{−at}A + e^{bt}B`, the integrability
//! budget of straight groups, and decay of the `SL₃` patterns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Piece, PuncturedIntervalSet, Status};
use crate::poly::Poly;
use crate::profile::EigProfile;
use crate::rational::{Rat, XRat};
use crate::straight::CanonicalMu;

fn check_p(p: &Rat) -> Result<()> {
    if *p <= Rat::one() {
        return Err(Error::Domain(format!("exponent p={p} must exceed 1")));
    }
    Ok(())
}

/// Exponent `μ_I − tr(δ)/p` of the `I`-component of `(e^δ)^* ω` in `L^p`.
pub fn pullback_exponent(trace_delta: &Rat, mu_i: &Rat, p: &Rat) -> Result<Rat> {
    check_p(p)?;
    Ok(mu_i - trace_delta / p)
}

/// Same, with `δ` described by the profile of `−δ` (so `tr δ = −h`).
pub fn pullback_exponent_profile(profile: &EigProfile, mu_i: &Rat, p: &Rat) -> Result<Rat> {
    pullback_exponent(&-profile.h(), mu_i, p)
}

/// Exponents `(−(k − n/p), 1 − k + n/p)` multiplying `‖dθ‖` and `‖θ‖` in the
/// norm bound for real hyperbolic space; both are checked to have the signs
/// that make the infimum finite.
pub fn real_hyperbolic_bound_exponents(n: usize, k: usize, p: &Rat) -> Result<(Rat, Rat)> {
    check_p(p)?;
    if n < 1 || k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n (n={n}, k={k})")));
    }
    let (n, k) = (Rat::int(n as i64), Rat::int(k as i64));
    let first = -(&k - &n / p);
    let second = Rat::one() - &k + &n / p;
    if !first.is_negative() || !second.is_positive() {
        return Err(Error::Domain(format!(
            "p={p} is outside the strip (n/k, n/(k-1)) where both exponents have a sign"
        )));
    }
    Ok((first, second))
}

/// `min_{t ∈ candidates} Σ_j e^{r_j t} N_j` for `terms = [(r_j, N_j)]`.
/// Adding candidates can only lower the result.
pub fn norm_bound(terms: &[(Rat, f64)], candidates: &[f64]) -> f64 {
    let rates: Vec<(f64, f64)> = terms.iter().map(|(r, n)| (r.to_f64(), *n)).collect();
    candidates
        .iter()
        .map(|&t| rates.iter().map(|(r, n)| (r * t).exp() * n).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Minimizer of `f(t) = e^{−at} A + e^{bt} B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumMin {
    /// `ln(aA / (bB)) / (a + b)` written out with the given values.
    pub t_min_expr: String,
    pub t_min: f64,
    pub f_min: f64,
}

fn check_ab(a: &Rat, b: &Rat) -> Result<()> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain(format!(
            "a and b must be positive (a={a}, b={b})"
        )));
    }
    Ok(())
}

/// Closed-form minimum: `(aA/(bB)) = e^{(a+b) t_min}` and
/// `f(t_min) = B e^{b t_min} (b/a + 1)`.
#[allow(non_snake_case)]
pub fn lemma_num_min(a: &Rat, b: &Rat, A: f64, B: f64) -> Result<NumMin> {
    check_ab(a, b)?;
    if !(A > 0.0 && A.is_finite() && B > 0.0 && B.is_finite()) {
        return Err(Error::Domain(format!(
            "A and B must be positive and finite (A={A}, B={B})"
        )));
    }
    let (af, bf) = (a.to_f64(), b.to_f64());
    let (t_min, log_f) = log_num_min(af, bf, A.ln(), B.ln());
    Ok(NumMin {
        t_min_expr: format!("ln(({a})*{A:e}/(({b})*{B:e}))/({})", a + b),
        t_min,
        f_min: log_f.exp(),
    })
}

/// Log-space form for `A = e^{log_a}`, `B = e^{log_b}`: returns
/// `(t_min, ln f(t_min))` without forming `A` or `B`.
pub fn log_num_min(a: f64, b: f64, log_a: f64, log_b: f64) -> (f64, f64) {
    let t = ((a / b).ln() + log_a - log_b) / (a + b);
    let log_f = log_b + b * t + (b / a + 1.0).ln();
    (t, log_f)
}

/// `(aβ + bα) / (a + b)`.
pub fn rate(a: &Rat, b: &Rat, alpha: &Rat, beta: &Rat) -> Result<Rat> {
    check_ab(a, b)?;
    Ok((a * beta + b * alpha) / (a + b))
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    // Stop at the tolerance, relative for large brackets, or when the
    // bracket can no longer shrink in floating point.
    for _ in 0..400 {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Minimum of a convex `f` on `ℝ`: doubles a symmetric bracket around 0
/// until both ends rise above `f(0)`, then golden-section search.
pub fn bracket_and_minimize(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let f0 = f(0.0);
    let mut width = 1.0;
    while (f(-width) < f0 || f(width) < f0) && width < 1e9 {
        width *= 2.0;
    }
    golden_section_min(f, -width, width, 1e-13)
}

/// Numeric minimum of `e^{−at}A + e^{bt}B`.
#[allow(non_snake_case)]
pub fn numeric_num_min(a: f64, b: f64, A: f64, B: f64) -> (f64, f64) {
    bracket_and_minimize(|t| (-a * t).exp() * A + (b * t).exp() * B)
}

/// Affine exponent `t·T + s·S` in the acting parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineExponent {
    pub t: Rat,
    pub s: Rat,
}

impl AffineExponent {
    pub fn new(t: Rat, s: Rat) -> AffineExponent {
        AffineExponent { t, s }
    }

    /// Coefficient of `s` after substituting `t = κ s`.
    pub fn along(&self, kappa: &Rat) -> Rat {
        &self.t * kappa + &self.s
    }
}

/// Coordinates of `ℝ³` named in a straight-group pattern.
pub const COORDS: [&str; 3] = ["x", "y", "z"];

/// A form component `f dx_{i₁} ∧ …` on `ℝ³`, whose `D_μ` pullback exponent
/// is `Σ μ_i` over its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub coords: Vec<usize>,
}

impl Component {
    pub fn new(label: &str, coords: &[usize]) -> Component {
        Component {
            label: label.to_string(),
            coords: coords.to_vec(),
        }
    }

    pub fn exponent(&self, mu: &CanonicalMu) -> Rat {
        self.coords.iter().map(|&i| &mu.mu[i]).sum()
    }
}

/// Nonempty set of components present in a form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPattern {
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    PlusInfinity,
    MinusInfinity,
}

impl ComponentPattern {
    pub fn new(components: Vec<Component>) -> Result<ComponentPattern> {
        if components.is_empty() {
            return Err(Error::Domain("empty component pattern".into()));
        }
        Ok(ComponentPattern { components })
    }

    /// Exponent of the leading term: the maximum as `s → +∞`, the minimum as
    /// `s → −∞`.
    pub fn leading(&self, mu: &CanonicalMu, end: End) -> Rat {
        let exps = self.components.iter().map(|c| c.exponent(mu));
        match end {
            End::PlusInfinity => exps.max(),
            End::MinusInfinity => exps.min(),
        }
        .expect("pattern is nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

/// `coeff_p · p + constant  (< | >)  0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCondition {
    pub coeff_p: Rat,
    pub constant: Rat,
    pub relation: Relation,
}

/// Solution set of a linear condition in `p` over the reals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solution {
    Above(Rat),
    Below(Rat),
    All,
    Empty,
}

impl LinearCondition {
    pub fn eval(&self, p: &Rat) -> Rat {
        &self.coeff_p * p + &self.constant
    }

    pub fn holds(&self, p: &Rat) -> bool {
        let v = self.eval(p);
        match self.relation {
            Relation::Lt => v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }

    pub fn solve(&self) -> Solution {
        if self.coeff_p.is_zero() {
            return if self.holds(&Rat::zero()) {
                Solution::All
            } else {
                Solution::Empty
            };
        }
        let root = -&self.constant / &self.coeff_p;
        let upward = (self.relation == Relation::Gt) == self.coeff_p.is_positive();
        if upward {
            Solution::Above(root)
        } else {
            Solution::Below(root)
        }
    }
}

impl fmt::Display for LinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Lt => "<",
            Relation::Gt => ">",
        };
        write!(f, "({})*p + ({}) {rel} 0", self.coeff_p, self.constant)
    }
}

/// `(2p − 3)β + (3 − p)α  rel  0` as a linear condition in `p`.
fn budget_condition(beta: &Rat, alpha: &Rat, relation: Relation) -> LinearCondition {
    let two = Rat::int(2);
    let three = Rat::int(3);
    LinearCondition {
        coeff_p: &two * beta - alpha,
        constant: &three * alpha - &three * beta,
        relation,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingExponents {
    pub alpha_plus: Rat,
    pub alpha_minus: Rat,
    pub beta_plus: Rat,
    pub beta_minus: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetResult {
    pub exponents: LeadingExponents,
    pub plus_condition: LinearCondition,
    pub minus_condition: LinearCondition,
    pub plus_threshold: Rat,
    pub minus_threshold: Rat,
    /// Exponents in `(3/2, 3)` satisfying both conditions.
    pub feasible_p: PuncturedIntervalSet,
}

/// Patterns `θ = f dx`, `Θ = g dy + h dz` and `dθ = G dx∧dz + H dx∧dy`.
pub fn nonvanishing_patterns() -> (ComponentPattern, ComponentPattern, ComponentPattern) {
    let theta = ComponentPattern::new(vec![Component::new("f dx", &[0])]).unwrap();
    let big_theta = ComponentPattern::new(vec![
        Component::new("g dy", &[1]),
        Component::new("h dz", &[2]),
    ])
    .unwrap();
    let d_theta = ComponentPattern::new(vec![
        Component::new("G dx^dz", &[0, 2]),
        Component::new("H dx^dy", &[0, 1]),
    ])
    .unwrap();
    (theta, big_theta, d_theta)
}

fn threshold_of(cond: &LinearCondition) -> Result<Rat> {
    match cond.solve() {
        Solution::Above(r) => Ok(r),
        other => Err(Error::Contract(format!(
            "expected a lower bound on p from {cond}, found {other:?}"
        ))),
    }
}

/// Integrability conditions for the nonvanishing construction of a straight
/// group; the plus-condition threshold is `p_α`.
pub fn budget_nonvanishing(mu: &CanonicalMu) -> Result<BudgetResult> {
    let (theta, big_theta, d_theta) = nonvanishing_patterns();
    let exponents = LeadingExponents {
        alpha_plus: d_theta.leading(mu, End::PlusInfinity),
        alpha_minus: d_theta.leading(mu, End::MinusInfinity),
        beta_plus: big_theta.leading(mu, End::PlusInfinity),
        beta_minus: theta.leading(mu, End::MinusInfinity),
    };
    let plus_condition =
        budget_condition(&exponents.beta_plus, &exponents.alpha_plus, Relation::Lt);
    let minus_condition =
        budget_condition(&exponents.beta_minus, &exponents.alpha_minus, Relation::Gt);
    let plus_threshold = threshold_of(&plus_condition)?;
    let minus_threshold = threshold_of(&minus_condition)?;
    let lo = Rat::new(3, 2)
        .max(plus_threshold.clone())
        .max(minus_threshold.clone());
    let feasible_p = PuncturedIntervalSet::new(
        vec![Piece::new(lo, XRat::Finite(Rat::int(3)), Status::Nonzero)],
        Vec::new(),
    )?;
    Ok(BudgetResult {
        exponents,
        plus_condition,
        minus_condition,
        plus_threshold,
        minus_threshold,
        feasible_p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualComponent {
    T1,
    T3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub component: DualComponent,
    /// `p(aβ + bα)` with `a = 3/p − 1`, `b = 2 − 3/p`.
    pub value: Rat,
    pub end: End,
    pub certified: bool,
}

/// Sign of `p(aβ + bα)` for the test forms `f dx` (component `T₁`, `s → −∞`)
/// and `h dz` (component `T₃`, `s → +∞`). A positive value for `T₁`, or a
/// negative one for `T₃`, certifies that the dual norm blows up.
pub fn budget_vanishing(
    mu: &CanonicalMu,
    component: DualComponent,
    p: &Rat,
) -> Result<VanishingCertificate> {
    if *p <= Rat::new(3, 2) || *p >= Rat::int(3) {
        return Err(Error::Domain(format!("p={p} must lie in (3/2, 3)")));
    }
    let (theta, d_theta, end) = match component {
        DualComponent::T1 => (
            ComponentPattern::new(vec![Component::new("f dx", &[0])])?,
            ComponentPattern::new(vec![
                Component::new("dx^dy", &[0, 1]),
                Component::new("dx^dz", &[0, 2]),
            ])?,
            End::MinusInfinity,
        ),
        DualComponent::T3 => (
            ComponentPattern::new(vec![Component::new("h dz", &[2])])?,
            ComponentPattern::new(vec![
                Component::new("dx^dz", &[0, 2]),
                Component::new("dy^dz", &[1, 2]),
            ])?,
            End::PlusInfinity,
        ),
    };
    let beta = theta.leading(mu, end);
    let alpha = d_theta.leading(mu, end);
    let three = Rat::int(3);
    // p·a = 3 − p and p·b = 2p − 3.
    let value = (&three - p) * &beta + (Rat::int(2) * p - &three) * &alpha;
    let certified = match component {
        DualComponent::T1 => value.is_positive(),
        DualComponent::T3 => value.is_negative(),
    };
    Ok(VanishingCertificate {
        component,
        value,
        end,
        certified,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sl3Pattern {
    #[serde(rename = "f dx")]
    FDx,
    #[serde(rename = "g dy")]
    GDy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    /// `κ` in the substitution `t = κ s`.
    pub kappa: Rat,
    /// Decay rates: each term is `e^{−rate·|s|}`.
    pub rates: [Rat; 3],
}

/// Three-term bound `(e^{at} + e^{−ct}) e^{s} + e^{−bt}` for `θ = f dx`
/// (mirrored `s ↦ −s` for `g dy`), evaluated along `t = −ε s/(2a)`. Returns
/// the decay rates when every term tends to 0 in the requested direction.
pub fn sl3_decay(
    pattern: Sl3Pattern,
    p: &Rat,
    direction: Direction,
) -> Result<Option<DecayCertificate>> {
    if *p <= Rat::int(2) || *p >= Rat::int(4) {
        return Err(Error::Domain(format!("p={p} must lie in (2, 4)")));
    }
    let four_p = Rat::int(4) / p;
    let a = &four_p - Rat::one();
    let b = Rat::int(2) - &four_p;
    let c = Rat::int(3) - &four_p;
    let eps = match pattern {
        Sl3Pattern::FDx => Rat::one(),
        Sl3Pattern::GDy => -Rat::one(),
    };
    let terms = [
        AffineExponent::new(a.clone(), eps.clone()),
        AffineExponent::new(-&c, eps.clone()),
        AffineExponent::new(-&b, Rat::zero()),
    ];
    let kappa = -&eps / (Rat::int(2) * &a);
    let sigma = match direction {
        Direction::Plus => Rat::one(),
        Direction::Minus => -Rat::one(),
    };
    let coeffs: Vec<Rat> = terms.iter().map(|e| e.along(&kappa)).collect();
    // Term decays iff its s-coefficient has sign opposite to the direction.
    if !coeffs.iter().all(|k| (k * &sigma).is_negative()) {
        return Ok(None);
    }
    let rates: Vec<Rat> = coeffs.iter().map(Rat::abs).collect();
    Ok(Some(DecayCertificate {
        a,
        b,
        c,
        kappa,
        rates: rates.try_into().expect("three terms"),
    }))
}

/// Outcome of an exact polynomial identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

fn identity(name: &str, lhs: Poly, rhs: Poly) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        holds: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// The two simplifications of the budget conditions, as polynomials in
/// `(p, μ₁, μ₂)` with `μ₃ = −μ₁ − μ₂` substituted.
pub fn budget_identities() -> Vec<IdentityCheck> {
    let c = |v: i64| Poly::constant(3, Rat::int(v));
    let p = Poly::var(3, 0);
    let m1 = Poly::var(3, 1);
    let m2 = Poly::var(3, 2);
    let m3 = -&(&m1 + &m2);
    let two_p_3 = &(&c(2) * &p) - &c(3);
    let three_p = &c(3) - &p;
    vec![
        identity(
            "plus condition reduces to p(mu2 - mu1) + 3 mu1",
            &(&two_p_3 * &m2) - &(&three_p * &m3),
            &(&p * &(&m2 - &m1)) + &(&c(3) * &m1),
        ),
        identity(
            "minus condition reduces to -p(mu2 - mu3) - 3 mu3",
            &(&three_p * &m1) - &(&two_p_3 * &m2),
            &(-&(&p * &(&m2 - &m3))) - &(&c(3) * &m3),
        ),
    ]
}

/// Exponent bookkeeping between conjugate exponents, as polynomials in
/// `u = 1/p` with `1/q = 1 − u`.
pub fn conjugate_identities() -> Vec<IdentityCheck> {
    let c = |v: i64| Poly::constant(1, Rat::int(v));
    let u = Poly::var(1, 0);
    let inv_q = &c(1) - &u;
    vec![
        identity(
            "2 - 3/q = 3/p - 1",
            &c(2) - &(&c(3) * &inv_q),
            &(&c(3) * &u) - &c(1),
        ),
        identity(
            "-1 + 3/q = 2 - 3/p",
            &(&c(3) * &inv_q) - &c(1),
            &c(2) - &(&c(3) * &u),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn canonical(v: [i64; 3]) -> CanonicalMu {
        CanonicalMu::from_pattern(v.map(Rat::int)).unwrap()
    }

    #[test]
    fn pullback_examples() {
        // δ = −t·id on ℝ^n, t = 1: k-forms scale by e^{−k}.
        let (n, k, p) = (3, 2, r(2, 1));
        let e = pullback_exponent(&Rat::int(-n), &Rat::int(-k), &p).unwrap();
        assert_eq!(e, -(Rat::int(k) - Rat::int(n) / &p));
        assert_eq!(
            pullback_exponent(&Rat::zero(), &r(5, 7), &p).unwrap(),
            r(5, 7)
        );
        assert!(pullback_exponent(&Rat::int(-4), &r(-2, 1), &r(2, 1))
            .unwrap()
            .is_zero());
        let prof = EigProfile::constant(3);
        assert_eq!(
            pullback_exponent_profile(&prof, &Rat::int(-2), &p).unwrap(),
            e
        );
        assert!(pullback_exponent(&Rat::zero(), &Rat::zero(), &Rat::one()).is_err());
    }

    #[test]
    fn num_min_examples() {
        let m = lemma_num_min(&Rat::one(), &Rat::one(), 1.0, 1.0).unwrap();
        assert!(m.t_min.abs() < 1e-15);
        assert!((m.f_min - 2.0).abs() < 1e-15);
        let m = lemma_num_min(&Rat::one(), &Rat::int(2), 4.0, 1.0).unwrap();
        assert!((m.t_min - 2f64.ln() / 3.0).abs() < 1e-14);
        assert!((m.f_min - 3.0 * 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((m.f_min - 4.76220).abs() < 1e-5);
        assert!(lemma_num_min(&Rat::zero(), &Rat::one(), 1.0, 1.0).is_err());
        assert!(lemma_num_min(&Rat::one(), &Rat::one(), -1.0, 1.0).is_err());
    }

    #[test]
    fn numeric_minimizer_agrees() {
        let (t, f) = numeric_num_min(1.0, 2.0, 4.0, 1.0);
        assert!((t - 2f64.ln() / 3.0).abs() < 1e-8);
        assert!((f - 3.0 * 2f64.powf(2.0 / 3.0)).abs() / f < 1e-12);
    }

    #[test]
    fn rate_examples() {
        assert_eq!(
            rate(&r(1, 2), &r(3, 2), &r(7, 3), &r(7, 3)).unwrap(),
            r(7, 3)
        );
        let p = r(2, 1);
        let a = r(2, 1) - r(3, 1) / &p;
        let b = r(-1, 1) + r(3, 1) / &p;
        assert_eq!(
            rate(&a, &b, &Rat::one(), &-Rat::one()).unwrap(),
            Rat::zero()
        );
        assert!(rate(&Rat::zero(), &Rat::one(), &Rat::one(), &Rat::one()).is_err());
    }

    #[test]
    fn budget_examples() {
        let b = budget_nonvanishing(&canonical([1, 0, -1])).unwrap();
        assert_eq!(b.plus_threshold, Rat::int(3));
        assert!(b.feasible_p.is_empty());
        let b = budget_nonvanishing(&canonical([2, -1, -1])).unwrap();
        assert_eq!(b.plus_threshold, Rat::int(2));
        assert_eq!(b.minus_threshold, Rat::one());
        let piece = &b.feasible_p.pieces()[0];
        assert_eq!(
            (piece.lo.clone(), piece.hi.clone()),
            (Rat::int(2), XRat::Finite(Rat::int(3)))
        );
        assert_eq!(
            b.exponents.alpha_plus,
            Rat::zero() - canonical([2, -1, -1]).mu3()
        );
    }

    #[test]
    fn leading_exponents_match_pattern_choice() {
        let mu = canonical([4, -1, -3]);
        let b = budget_nonvanishing(&mu).unwrap();
        assert_eq!(b.exponents.alpha_plus, -mu.mu3());
        assert_eq!(b.exponents.alpha_minus, -mu.mu2());
        assert_eq!(b.exponents.beta_minus, mu.mu1().clone());
        assert_eq!(b.exponents.beta_plus, mu.mu2().clone());
        assert_eq!(b.plus_threshold, mu.p_alpha);
    }

    #[test]
    fn vanishing_examples() {
        let mu = canonical([1, 0, -1]);
        let c = budget_vanishing(&mu, DualComponent::T1, &Rat::int(2)).unwrap();
        assert_eq!(c.value, Rat::one());
        assert!(c.certified);
        let c = budget_vanishing(&mu, DualComponent::T3, &Rat::int(2)).unwrap();
        assert_eq!(c.value, Rat::int(-1));
        assert!(c.certified);
        let c = budget_vanishing(&mu, DualComponent::T3, &r(2999, 1000)).unwrap();
        assert!(c.certified);
        assert!(budget_vanishing(&mu, DualComponent::T3, &Rat::int(3)).is_err());
        let mu = canonical([2, -1, -1]);
        assert!(
            !budget_vanishing(&mu, DualComponent::T3, &r(5, 2))
                .unwrap()
                .certified
        );
    }

    #[test]
    fn sl3_decay_examples() {
        let c = sl3_decay(Sl3Pattern::FDx, &Rat::int(3), Direction::Minus)
            .unwrap()
            .unwrap();
        assert_eq!(
            (c.a.clone(), c.b.clone(), c.c.clone()),
            (r(1, 3), r(2, 3), r(5, 3))
        );
        assert_eq!(c.rates, [r(1, 2), r(7, 2), Rat::one()]);
        let g = sl3_decay(Sl3Pattern::GDy, &Rat::int(3), Direction::Plus)
            .unwrap()
            .unwrap();
        assert_eq!(g.rates, c.rates);
        assert!(sl3_decay(Sl3Pattern::FDx, &Rat::int(3), Direction::Plus)
            .unwrap()
            .is_none());
        assert!(sl3_decay(Sl3Pattern::FDx, &Rat::int(2), Direction::Minus).is_err());
        assert!(sl3_decay(Sl3Pattern::FDx, &Rat::int(4), Direction::Minus).is_err());
    }

    #[test]
    fn real_bound_exponents() {
        let (e1, e2) = real_hyperbolic_bound_exponents(3, 2, &Rat::int(2)).unwrap();
        assert_eq!((e1, e2), (r(-1, 2), r(1, 2)));
        assert!(real_hyperbolic_bound_exponents(3, 2, &Rat::int(4)).is_err());
    }

    #[test]
    fn symbolic_identities_hold() {
        assert!(budget_identities().iter().all(|c| c.holds));
        assert!(conjugate_identities().iter().all(|c| c.holds));
        // The variant with +1 on the left does not hold.
        let c = |v: i64| Poly::constant(1, Rat::int(v));
        let u = Poly::var(1, 0);
        let lhs = &c(1) + &(&c(3) * &(&c(1) - &u));
        assert_ne!(lhs, &c(2) - &(&c(3) * &u));
    }

    #[test]
    fn norm_bound_monotone() {
        let terms = [(r(-1, 2), 3.0), (r(1, 2), 0.5)];
        let few = norm_bound(&terms, &[0.0, 1.0]);
        let more = norm_bound(&terms, &[0.0, 1.0, 2.0, 3.0]);
        assert!(more <= few);
        assert_eq!(norm_bound(&terms, &[]), f64::INFINITY);
    }
}
