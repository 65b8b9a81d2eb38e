//! Structural decision procedures for `S_α = ℝ^r ⋉_α ℝ^n`: bracket, center,
//! derived subalgebra, abelian direct factors, reducibility, nonpositive
//! curvature and hyperbolic one-parameter subgroups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_of, Matrix};
use crate::rational::Rat;
use crate::weights::WeightConfig;

/// Largest `n` accepted by the exhaustive bipartition search.
pub const MAX_PARTITION_N: usize = 24;
/// Largest `r` accepted by the Fourier–Motzkin feasibility solver.
pub const MAX_FM_RANK: usize = 4;

/// Element `(U, X)` of `ℝ^r ⋉ ℝ^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub u: Vec<Rat>,
    pub x: Vec<Rat>,
}

impl AlgebraElement {
    pub fn new(u: Vec<Rat>, x: Vec<Rat>) -> AlgebraElement {
        AlgebraElement { u, x }
    }

    pub fn zero(r: usize, n: usize) -> AlgebraElement {
        AlgebraElement {
            u: vec![Rat::zero(); r],
            x: vec![Rat::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().chain(&self.x).all(Rat::is_zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            u: self.u.iter().map(|a| -a).collect(),
            x: self.x.iter().map(|a| -a).collect(),
        }
    }
}

/// `[(U,X), (V,Y)] = (0, Π(U)Y − Π(V)X)`.
pub fn bracket(
    cfg: &WeightConfig,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    for e in [a, b] {
        if e.u.len() != cfg.r() || e.x.len() != cfg.n() {
            return Err(Error::Domain(format!(
                "element dimensions ({}, {}) do not match (r, n) = ({}, {})",
                e.u.len(),
                e.x.len(),
                cfg.r(),
                cfg.n()
            )));
        }
    }
    let x = (0..cfg.n())
        .map(|i| cfg.eval(i, &a.u) * &b.x[i] - cfg.eval(i, &b.u) * &a.x[i])
        .collect();
    Ok(AlgebraElement {
        u: vec![Rat::zero(); cfg.r()],
        x,
    })
}

/// Basis of `∩_i Ker ϖ_i ⊂ ℝ^r`; the center is `{(U, 0)}` over this space.
pub fn center(cfg: &WeightConfig) -> Vec<Vec<Rat>> {
    cfg.matrix().kernel()
}

/// Dimension of the derived subalgebra, from the brackets of basis vectors
/// `[(e_j, 0), (0, e_i)] = (0, ϖ_i(e_j) e_i)`.
pub fn derived_dimension(cfg: &WeightConfig) -> usize {
    let mut gens = Vec::new();
    for j in 0..cfg.r() {
        for i in 0..cfg.n() {
            let mut v = vec![Rat::zero(); cfg.n()];
            v[i] = cfg.weight(i)[j].clone();
            gens.push(v);
        }
    }
    rank_of(&gens, cfg.n())
}

/// No abelian direct factor iff the weights span `(ℝ^r)^*`.
pub fn has_abelian_factor(cfg: &WeightConfig) -> bool {
    cfg.rank() < cfg.r()
}

fn subset_rank(cfg: &WeightConfig, idx: &[usize]) -> usize {
    let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| cfg.weight(i).to_vec()).collect();
    rank_of(&rows, cfg.r())
}

fn require_no_abelian_factor(cfg: &WeightConfig) -> Result<()> {
    if has_abelian_factor(cfg) {
        Err(Error::Contract(
            "reducibility criterion assumes no abelian direct factor (weights must span the dual space)"
                .into(),
        ))
    } else {
        Ok(())
    }
}

/// Nontrivial partition `I₁ ⊔ I₂ = {1..n}` (1-based) whose weight spans meet
/// only in 0, found by exhaustive search; `None` when irreducible.
pub fn reducible(cfg: &WeightConfig) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    require_no_abelian_factor(cfg)?;
    let n = cfg.n();
    if n > MAX_PARTITION_N {
        return Err(Error::Unsupported(format!(
            "exhaustive bipartition search is capped at n <= {MAX_PARTITION_N} (n = {n})"
        )));
    }
    if n < 2 {
        return Ok(None);
    }
    let total = cfg.rank();
    // Index 0 always sits in I₁; `mask` chooses which of 1..n join it.
    let full = (1u64 << (n - 1)) - 1;
    for mask in 0..full {
        let mut first = vec![0usize];
        let mut second = Vec::new();
        for i in 1..n {
            if mask >> (i - 1) & 1 == 1 {
                first.push(i);
            } else {
                second.push(i);
            }
        }
        if subset_rank(cfg, &first) + subset_rank(cfg, &second) == total {
            let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
            return Ok(Some((one_based(first), one_based(second))));
        }
    }
    Ok(None)
}

/// Connected components of the linear matroid of the weights (1-based
/// indices), computed from fundamental circuits relative to a greedy basis.
/// A second, polynomial route to the reducibility question.
pub fn matroid_components(cfg: &WeightConfig) -> Vec<Vec<usize>> {
    let n = cfg.n();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut trial = basis.clone();
        trial.push(i);
        if subset_rank(cfg, &trial) > basis.len() {
            basis = trial;
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    let columns: Vec<Vec<Rat>> = basis.iter().map(|&b| cfg.weight(b).to_vec()).collect();
    let b_mat = Matrix::from_columns(&columns, cfg.r());
    for e in (0..n).filter(|e| !basis.contains(e)) {
        let coeffs = b_mat
            .solve(cfg.weight(e))
            .expect("every weight lies in the span of a basis");
        for (slot, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let (a, b) = (find(&mut parent, e), find(&mut parent, basis[slot]));
                parent[a] = b;
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match roots.iter().position(|&r| r == root) {
            Some(k) => comps[k].push(i + 1),
            None => {
                roots.push(root);
                comps.push(vec![i + 1]);
            }
        }
    }
    comps
}

/// A linear inequality `coeffs · U ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<Rat>,
    bound: Rat,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Ineq {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Rat::abs) {
            let inv = lead.recip().expect("nonzero");
            for c in &mut self.coeffs {
                *c *= &inv;
            }
            self.bound *= &inv;
        }
        self
    }
}

fn eliminate(system: &[Ineq], var: usize) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::new();
    let mut push = |q: Ineq| {
        let q = q.normalized();
        if q.coeffs.iter().all(Rat::is_zero) && !q.bound.is_negative() {
            return;
        }
        if !out.contains(&q) {
            out.push(q);
        }
    };
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for q in system {
        match q.coeffs[var].signum() {
            0 => push(q.clone()),
            1 => pos.push(q),
            _ => neg.push(q),
        }
    }
    for p in &pos {
        for m in &neg {
            // p: a u_v + ... ≤ b (a > 0), m: c u_v + ... ≤ d (c < 0)
            let a = &p.coeffs[var];
            let c = -&m.coeffs[var];
            let coeffs = p
                .coeffs
                .iter()
                .zip(&m.coeffs)
                .map(|(x, y)| &c * x + a * y)
                .collect();
            push(Ineq {
                coeffs,
                bound: &c * &p.bound + a * &m.bound,
            });
        }
    }
    out
}

/// Picks a value in `[lo, hi]`, preferring 0, then the integer nearest 0.
fn pick_in(lo: Option<Rat>, hi: Option<Rat>) -> Rat {
    let zero = Rat::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l <= zero {
                zero
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h >= zero {
                zero
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            if l <= zero && zero <= h {
                zero
            } else if l > zero {
                let c = l.ceil();
                if c <= h {
                    c
                } else {
                    l
                }
            } else {
                let f = h.floor();
                if f >= l {
                    f
                } else {
                    h
                }
            }
        }
    }
}

/// Exact Fourier–Motzkin feasibility for `A U ≤ b`, returning a witness.
fn fourier_motzkin(system: Vec<Ineq>, dim: usize) -> Option<Vec<Rat>> {
    let mut stages = vec![system];
    for var in (0..dim).rev() {
        let next = eliminate(stages.last().unwrap(), var);
        stages.push(next);
    }
    if stages.last().unwrap().iter().any(|q| q.bound.is_negative()) {
        return None;
    }
    let mut u = vec![Rat::zero(); dim];
    for var in 0..dim {
        // Stage `dim - var - 1` still contains variables 0..=var.
        let system = &stages[dim - var - 1];
        let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
        for q in system {
            let a = &q.coeffs[var];
            if a.is_zero() {
                continue;
            }
            let rest: Rat = (0..var).map(|j| &q.coeffs[j] * &u[j]).sum();
            let v = (&q.bound - rest) / a;
            if a.is_positive() {
                hi = Some(match hi {
                    Some(h) => h.min(v),
                    None => v,
                });
            } else {
                lo = Some(match lo {
                    Some(l) => l.max(v),
                    None => v,
                });
            }
        }
        u[var] = pick_in(lo, hi);
    }
    Some(u)
}

/// Witness `U` with `ϖ_i(U) ≤ −1` for all `i`, or `None` when `0` lies in the
/// convex hull of the weights (no left-invariant nonpositively curved metric).
pub fn npc(cfg: &WeightConfig) -> Result<Option<Vec<Rat>>> {
    if cfg.r() > MAX_FM_RANK {
        return Err(Error::Unsupported(format!(
            "exact feasibility is limited to r <= {MAX_FM_RANK} (r = {})",
            cfg.r()
        )));
    }
    let system = cfg
        .weights()
        .iter()
        .map(|w| Ineq {
            coeffs: w.clone(),
            bound: -Rat::one(),
        })
        .collect();
    let witness = fourier_motzkin(system, cfg.r());
    if let Some(u) = &witness {
        debug_assert!((0..cfg.n()).all(|i| cfg.eval(i, u) <= -Rat::one()));
    }
    Ok(witness)
}

/// Decides `0 ∈ conv{ϖ_i}` by Carathéodory enumeration: some affinely
/// independent subset of at most `r + 1` weights carries `0` in its hull,
/// with uniquely determined barycentric coordinates.
pub fn zero_in_convex_hull(cfg: &WeightConfig) -> bool {
    let (n, r) = (cfg.n(), cfg.r());
    let max = n.min(r + 1);
    let mut subset = Vec::with_capacity(max);
    fn search(cfg: &WeightConfig, start: usize, left: usize, subset: &mut Vec<usize>) -> bool {
        if !subset.is_empty() && hull_contains_zero(cfg, subset) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..cfg.n() {
            subset.push(i);
            if search(cfg, i + 1, left - 1, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    search(cfg, 0, max, &mut subset)
}

fn hull_contains_zero(cfg: &WeightConfig, subset: &[usize]) -> bool {
    let r = cfg.r();
    let k = subset.len();
    // Columns: (ϖ_i, 1); right-hand side (0, 1).
    let mut m = Matrix::zeros(r + 1, k);
    for (col, &i) in subset.iter().enumerate() {
        for row in 0..r {
            m[(row, col)] = cfg.weight(i)[row].clone();
        }
        m[(r, col)] = Rat::one();
    }
    if m.rank() < k {
        return false;
    }
    let mut rhs = vec![Rat::zero(); r + 1];
    rhs[r] = Rat::one();
    match m.solve(&rhs) {
        Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// Solution `U` of `ϖ_i(U) = −1` for all `i` (free coordinates set to 0).
pub fn hyperbolic_direction(cfg: &WeightConfig) -> Option<Vec<Rat>> {
    let rhs = vec![-Rat::one(); cfg.n()];
    cfg.matrix().solve(&rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub r: usize,
    pub n: usize,
    pub center_basis: Vec<Vec<Rat>>,
    #[serde(rename = "derived_is_full_Rn")]
    pub derived_is_full_rn: bool,
    pub has_abelian_factor: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reducible_partition: Option<(Vec<usize>, Vec<usize>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub npc_witness: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperbolic_witness: Option<Vec<Rat>>,
}

impl StructureReport {
    pub fn irreducible(&self) -> bool {
        !self.has_abelian_factor && self.reducible_partition.is_none()
    }
}

/// Full structural report. Reducibility is only decided when there is no
/// abelian direct factor.
pub fn analyze(cfg: &WeightConfig) -> Result<StructureReport> {
    let abelian = has_abelian_factor(cfg);
    let reducible_partition = if abelian { None } else { reducible(cfg)? };
    Ok(StructureReport {
        r: cfg.r(),
        n: cfg.n(),
        center_basis: center(cfg),
        derived_is_full_rn: derived_dimension(cfg) == cfg.n(),
        has_abelian_factor: abelian,
        reducible_partition,
        npc_witness: npc(cfg)?,
        hyperbolic_witness: hyperbolic_direction(cfg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight() -> WeightConfig {
        WeightConfig::from_ints(&[&[-1, 1], &[-1, 0], &[-1, -1]]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn bracket_examples() {
        let cfg = straight();
        let a = AlgebraElement::new(ints(&[1, 0]), ints(&[0, 0, 0]));
        let b = AlgebraElement::new(ints(&[0, 0]), ints(&[1, 1, 1]));
        assert_eq!(bracket(&cfg, &a, &b).unwrap().x, ints(&[-1, -1, -1]));
        let c = AlgebraElement::new(ints(&[0, 1]), ints(&[0, 0, 0]));
        assert!(bracket(&cfg, &a, &c).unwrap().is_zero());
        let bad = AlgebraElement::new(ints(&[1]), ints(&[0, 0, 0]));
        assert!(bracket(&cfg, &bad, &a).is_err());
    }

    #[test]
    fn center_examples() {
        assert!(center(&straight()).is_empty());
        let dup = WeightConfig::from_ints(&[&[-1, 0], &[-1, 0], &[-1, 0]]).unwrap();
        let c = center(&dup);
        assert_eq!(c, vec![ints(&[0, 1])]);
        assert!(center(&WeightConfig::from_ints(&[&[-1]]).unwrap()).is_empty());
    }

    #[test]
    fn abelian_factor_examples() {
        assert!(!has_abelian_factor(&straight()));
        let multiples = WeightConfig::from_ints(&[&[-1, 0], &[-2, 0]]).unwrap();
        assert!(has_abelian_factor(&multiples));
        assert!(!has_abelian_factor(
            &WeightConfig::from_ints(&[&[3], &[-2]]).unwrap()
        ));
    }

    #[test]
    fn reducible_examples() {
        let product = WeightConfig::from_ints(&[&[-1, 0], &[0, -1]]).unwrap();
        assert_eq!(reducible(&product).unwrap(), Some((vec![1], vec![2])));
        assert_eq!(reducible(&straight()).unwrap(), None);
        assert_eq!(
            reducible(&WeightConfig::from_ints(&[&[-1]]).unwrap()).unwrap(),
            None
        );
        let abelian = WeightConfig::from_ints(&[&[-1, 0], &[-2, 0]]).unwrap();
        assert!(matches!(reducible(&abelian), Err(Error::Contract(_))));
    }

    #[test]
    fn matroid_components_match_examples() {
        let product = WeightConfig::from_ints(&[&[-1, 0], &[0, -1], &[-2, 0]]).unwrap();
        assert_eq!(matroid_components(&product), vec![vec![1, 3], vec![2]]);
        assert_eq!(matroid_components(&straight()), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn npc_examples() {
        assert_eq!(npc(&straight()).unwrap(), Some(ints(&[1, 0])));
        for lambda in 1..6 {
            let sol = WeightConfig::from_ints(&[&[1], &[-lambda]]).unwrap();
            assert_eq!(npc(&sol).unwrap(), None);
            assert!(zero_in_convex_hull(&sol));
        }
        assert_eq!(
            npc(&WeightConfig::from_ints(&[&[-1], &[-2]]).unwrap()).unwrap(),
            Some(ints(&[1]))
        );
    }

    #[test]
    fn npc_witness_is_valid_off_the_hyperplane() {
        let cfg = WeightConfig::from_ints(&[&[-3, 1], &[-1, -4], &[-2, 5]]).unwrap();
        let u = npc(&cfg).unwrap().unwrap();
        for i in 0..3 {
            assert!(cfg.eval(i, &u) <= -Rat::one());
        }
        assert!(!zero_in_convex_hull(&cfg));
    }

    #[test]
    fn hyperbolic_examples() {
        assert_eq!(hyperbolic_direction(&straight()), Some(ints(&[1, 0])));
        let complex = WeightConfig::from_ints(&[&[-1], &[-1], &[-2]]).unwrap();
        assert_eq!(hyperbolic_direction(&complex), None);
        let real = WeightConfig::from_ints(&[&[-1], &[-1], &[-1], &[-1]]).unwrap();
        assert_eq!(hyperbolic_direction(&real), Some(ints(&[1])));
    }

    #[test]
    fn report_omits_absent_fields() {
        let sol = WeightConfig::from_ints(&[&[1], &[-2]]).unwrap();
        let report = analyze(&sol).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(!json.contains("npc_witness"));
        assert!(!json.contains("hyperbolic_witness"));
        assert!(json.contains("\"derived_is_full_Rn\":true"));
        let s = analyze(&straight()).unwrap();
        assert!(s.irreducible());
        assert_eq!(s.npc_witness, Some(ints(&[1, 0])));
    }

    #[test]
    fn fm_rank_cap() {
        let rows: Vec<Vec<Rat>> = vec![ints(&[1, 0, 0, 0, 0])];
        let cfg = WeightConfig::new(5, 1, rows).unwrap();
        assert!(matches!(npc(&cfg), Err(Error::Unsupported(_))));
    }
}
