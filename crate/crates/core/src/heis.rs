//! Differential forms on `Heis(2m−1)` with polynomial coefficients over the
//! left-invariant coframe `dx₁, dy₁, …, dx_{m−1}, dy_{m−1}, τ`, where
//! `τ = dz − ½ Σ (x_i dy_i − y_i dx_i)` and `dτ = −Σ dx_i ∧ dy_i`.
//!
//! The dual frame is `X_i = ∂x_i − (y_i/2)∂z`, `Y_i = ∂y_i + (x_i/2)∂z`,
//! `Z = ∂z`, so that `[X_i, Y_i] = Z`.
//!
//! A wedge monomial is a bitmask over the coframe (bit `2(i−1)` is `dx_i`,
//! bit `2(i−1)+1` is `dy_i`, bit `2m−2` is `τ`), always read in increasing
//! bit order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::rational::Rat;

#[derive(Clone, PartialEq, Eq)]
pub struct HeisForm {
    m: usize,
    terms: BTreeMap<u32, Poly>,
}

/// Number of polynomial variables (`x_i, y_i, z`).
pub fn nvars(m: usize) -> usize {
    2 * m - 1
}

/// Dimension of the horizontal space.
pub fn hdim(m: usize) -> usize {
    2 * m - 2
}

pub fn tau_bit(m: usize) -> u32 {
    1 << (2 * m - 2)
}

fn check_m(m: usize) -> Result<()> {
    if !(2..=12).contains(&m) {
        return Err(Error::Domain(format!("m={m} out of range 2..=12")));
    }
    Ok(())
}

/// Sign of `e_a ∧ e_b` relative to `e_{a|b}`; `None` when they share a factor.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// `X_i`, `Y_i` or `Z` applied to `f`, indexed like the coframe.
pub fn frame_derivative(m: usize, g: usize, f: &Poly) -> Poly {
    let z = 2 * m - 2;
    if g == z {
        return f.partial(z);
    }
    let half = Rat::new(1, 2);
    let dz = f.partial(z);
    if g.is_multiple_of(2) {
        let y = Poly::var(nvars(m), g + 1);
        &f.partial(g) - &(&y * &dz).scale(&half)
    } else {
        let x = Poly::var(nvars(m), g - 1);
        &f.partial(g) + &(&x * &dz).scale(&half)
    }
}

/// `X_i · f` (1-based `i`).
pub fn x_op(m: usize, i: usize, f: &Poly) -> Poly {
    frame_derivative(m, 2 * (i - 1), f)
}

/// `Y_i · f` (1-based `i`).
pub fn y_op(m: usize, i: usize, f: &Poly) -> Poly {
    frame_derivative(m, 2 * (i - 1) + 1, f)
}

pub fn z_op(m: usize, f: &Poly) -> Poly {
    frame_derivative(m, 2 * m - 2, f)
}

pub fn monomial_name(m: usize, mask: u32) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for b in 0..(2 * m - 1) {
        if mask >> b & 1 == 1 {
            parts.push(if b == 2 * m - 2 {
                "tau".to_string()
            } else if b % 2 == 0 {
                format!("dx{}", b / 2 + 1)
            } else {
                format!("dy{}", b / 2 + 1)
            });
        }
    }
    parts.join("^")
}

impl HeisForm {
    pub fn zero(m: usize) -> HeisForm {
        HeisForm {
            m,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(m: usize, f: Poly) -> HeisForm {
        HeisForm::monomial(m, 0, f)
    }

    pub fn monomial(m: usize, mask: u32, f: Poly) -> HeisForm {
        assert_eq!(f.nvars(), nvars(m), "coefficient ring does not match m");
        assert!(mask < 1 << (2 * m - 1), "mask outside the coframe");
        let mut out = HeisForm::zero(m);
        out.add_monomial(mask, f);
        out
    }

    /// `f · e_{g₁} ∧ … ∧ e_{g_k}` for coframe indices in any order.
    pub fn from_factors(m: usize, factors: &[usize], f: Poly) -> HeisForm {
        let mut form = HeisForm::function(m, f);
        for &g in factors {
            form = form.wedge(&HeisForm::monomial(m, 1 << g, Poly::one(nvars(m))));
        }
        form
    }

    pub fn dx(m: usize, i: usize) -> HeisForm {
        HeisForm::monomial(m, 1 << (2 * (i - 1)), Poly::one(nvars(m)))
    }

    pub fn dy(m: usize, i: usize) -> HeisForm {
        HeisForm::monomial(m, 1 << (2 * (i - 1) + 1), Poly::one(nvars(m)))
    }

    pub fn tau(m: usize) -> HeisForm {
        HeisForm::monomial(m, tau_bit(m), Poly::one(nvars(m)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, mask: u32) -> Poly {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| Poly::zero(nvars(self.m)))
    }

    /// Common degree of all terms; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let degs: BTreeSet<u32> = self.terms.keys().map(|k| k.count_ones()).collect();
        (degs.len() == 1).then(|| *degs.iter().next().unwrap() as usize)
    }

    /// True for the zero form or a form of pure degree `k`.
    pub fn has_degree(&self, k: usize) -> bool {
        self.terms
            .keys()
            .all(|mask| mask.count_ones() as usize == k)
    }

    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(|mask| mask & tau_bit(self.m) == 0)
    }

    fn add_monomial(&mut self, mask: u32, f: Poly) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    fn check(&self, other: &HeisForm) {
        assert_eq!(self.m, other.m, "forms live on different groups");
    }

    pub fn add(&self, other: &HeisForm) -> HeisForm {
        self.check(other);
        let mut out = self.clone();
        for (mask, f) in &other.terms {
            out.add_monomial(*mask, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeisForm) -> HeisForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HeisForm {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> HeisForm {
        let mut out = HeisForm::zero(self.m);
        for (mask, f) in &self.terms {
            out.add_monomial(*mask, f.scale(c));
        }
        out
    }

    /// Pointwise product with a function.
    pub fn mul_poly(&self, g: &Poly) -> HeisForm {
        let mut out = HeisForm::zero(self.m);
        for (mask, f) in &self.terms {
            out.add_monomial(*mask, f * g);
        }
        out
    }

    pub fn wedge(&self, other: &HeisForm) -> HeisForm {
        self.check(other);
        let mut out = HeisForm::zero(self.m);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                if let Some(negative) = wedge_sign(*a, *b) {
                    let prod = f * g;
                    out.add_monomial(a | b, if negative { -&prod } else { prod });
                }
            }
        }
        out
    }

    /// Coefficient of `dx₁ ∧ dy₁ ∧ … ∧ τ`.
    pub fn top_coefficient(&self) -> Poly {
        self.coeff((1 << (2 * self.m - 1)) - 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for HeisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mask, c)| format!("({c}) {}", monomial_name(self.m, *mask)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeisForm[m={}]({self})", self.m)
    }
}

struct Term<'a> {
    m: usize,
    mask: u32,
    coeff: &'a Poly,
}

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("monomial", &monomial_name(self.m, self.mask))?;
        st.serialize_field("coeff", &self.coeff.to_string())?;
        st.end()
    }
}

impl Serialize for HeisForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (mask, coeff) in &self.terms {
            seq.serialize_element(&Term {
                m: self.m,
                mask: *mask,
                coeff,
            })?;
        }
        seq.end()
    }
}

/// `dτ = −Σ dx_i ∧ dy_i`.
pub fn d_tau(m: usize) -> HeisForm {
    let mut out = HeisForm::zero(m);
    for i in 0..m - 1 {
        let mask = (1 << (2 * i)) | (1 << (2 * i + 1));
        out.add_monomial(mask, Poly::constant(nvars(m), -Rat::one()));
    }
    out
}

/// Exterior derivative in the left-invariant coframe.
pub fn differentiate(form: &HeisForm) -> HeisForm {
    let m = form.m;
    let tb = tau_bit(m);
    let dtau = d_tau(m);
    let mut out = HeisForm::zero(m);
    for (&mask, f) in &form.terms {
        for g in 0..(2 * m - 1) {
            let bit = 1u32 << g;
            let Some(negative) = wedge_sign(bit, mask) else {
                continue;
            };
            let dg = frame_derivative(m, g, f);
            out.add_monomial(bit | mask, if negative { -&dg } else { dg });
        }
        if mask & tb != 0 {
            // d(f α∧τ) picks up (−1)^{deg α} f α∧dτ.
            let alpha = mask & !tb;
            let piece = HeisForm::monomial(m, alpha, f.clone()).wedge(&dtau);
            let piece = if alpha.count_ones() % 2 == 1 {
                piece.neg()
            } else {
                piece
            };
            out = out.add(&piece);
        }
    }
    out
}

/// `ω = ω₁ + ω₂ ∧ τ` with `ω₁`, `ω₂` horizontal.
pub fn weight_split(form: &HeisForm) -> (HeisForm, HeisForm) {
    let tb = tau_bit(form.m);
    let mut horizontal = HeisForm::zero(form.m);
    let mut vertical = HeisForm::zero(form.m);
    for (&mask, f) in &form.terms {
        if mask & tb == 0 {
            horizontal.add_monomial(mask, f.clone());
        } else {
            // τ is the last factor, so e_α ∧ τ needs no reordering.
            vertical.add_monomial(mask & !tb, f.clone());
        }
    }
    (horizontal, vertical)
}

pub fn recombine(horizontal: &HeisForm, vertical: &HeisForm) -> HeisForm {
    horizontal.add(&vertical.wedge(&HeisForm::tau(horizontal.m)))
}

/// Masks of `∧^k` of the horizontal space, ascending.
pub fn horizontal_basis(m: usize, k: usize) -> Vec<u32> {
    let h = hdim(m);
    (0u32..(1 << h))
        .filter(|mask| mask.count_ones() as usize == k)
        .collect()
}

/// Matrix of `L_k : ∧^k → ∧^{k+2}`, `α ↦ α ∧ dτ`, on constant forms.
pub fn lefschetz_matrix(m: usize, k: usize) -> Matrix {
    let domain = horizontal_basis(m, k);
    let codomain = horizontal_basis(m, k + 2);
    let dtau = d_tau(m);
    let mut mat = Matrix::zeros(codomain.len(), domain.len());
    for (col, &mask) in domain.iter().enumerate() {
        let image = HeisForm::monomial(m, mask, Poly::one(nvars(m))).wedge(&dtau);
        for (mk, f) in image.terms() {
            let row = codomain.binary_search(&mk).expect("horizontal image");
            mat[(row, col)] = f.coeff(&vec![0; nvars(m)]);
        }
    }
    mat
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LefschetzRank {
    pub dim_domain: usize,
    pub dim_kernel: usize,
    pub dim_image: usize,
    pub dim_codomain: usize,
}

pub fn lefschetz_rank(m: usize, k: usize) -> Result<LefschetzRank> {
    check_m(m)?;
    if k > hdim(m) {
        return Err(Error::Domain(format!("k={k} out of range 0..={}", hdim(m))));
    }
    let mat = lefschetz_matrix(m, k);
    let rank = mat.rank();
    Ok(LefschetzRank {
        dim_domain: mat.cols(),
        dim_kernel: mat.cols() - rank,
        dim_image: rank,
        dim_codomain: mat.rows(),
    })
}

/// Groups the coefficients of a horizontal form of degree `k` by polynomial
/// monomial: exponent vector ↦ coordinate vector in `∧^k`.
fn coefficient_vectors(form: &HeisForm, basis: &[u32]) -> BTreeMap<Vec<u32>, Vec<Rat>> {
    let mut out: BTreeMap<Vec<u32>, Vec<Rat>> = BTreeMap::new();
    for (mask, f) in form.terms() {
        let idx = basis.binary_search(&mask).expect("mask in basis");
        for (exps, c) in f.terms() {
            out.entry(exps.to_vec())
                .or_insert_with(|| vec![Rat::zero(); basis.len()])[idx] = c.clone();
        }
    }
    out
}

/// Some horizontal `β` of degree `j` with `β ∧ dτ = ω`, solved pointwise in
/// the polynomial coefficients; `None` when `ω ∉ Im L_j`.
pub fn lefschetz_preimage(form: &HeisForm, j: usize) -> Result<Option<HeisForm>> {
    let m = form.m;
    if !form.is_horizontal() || !form.has_degree(j + 2) {
        return Err(Error::Contract(format!(
            "expected a horizontal form of degree {}",
            j + 2
        )));
    }
    let mat = lefschetz_matrix(m, j);
    let domain = horizontal_basis(m, j);
    let codomain = horizontal_basis(m, j + 2);
    let mut out = HeisForm::zero(m);
    for (exps, rhs) in coefficient_vectors(form, &codomain) {
        let Some(sol) = mat.solve(&rhs) else {
            return Ok(None);
        };
        for (idx, c) in sol.into_iter().enumerate() {
            let mut p = Poly::zero(nvars(m));
            p.add_term(exps.clone(), c);
            out.add_monomial(domain[idx], p);
        }
    }
    Ok(Some(out))
}

/// `𝓛(ω)`: the unique horizontal `(m−2)`-form with `𝓛(ω) ∧ dτ = ω`.
pub fn lefschetz_inverse(m: usize, form: &HeisForm) -> Result<HeisForm> {
    check_m(m)?;
    if form.m != m {
        return Err(Error::Contract("form lives on a different group".into()));
    }
    Ok(lefschetz_preimage(form, m - 2)?.expect("L_(m-2) is an isomorphism"))
}

/// Whether `(dθ)₁ ∈ Im L_{k−2}` for `θ` of degree `k − 1`, `1 ≤ k < m`.
pub fn nullclass_generic(m: usize, theta: &HeisForm, k: usize) -> Result<bool> {
    check_m(m)?;
    if k == 0 || k >= m {
        return Err(Error::Domain(format!("need 1 <= k < m (k={k}, m={m})")));
    }
    if !theta.has_degree(k - 1) {
        return Err(Error::Domain(format!(
            "expected a form of degree {}",
            k - 1
        )));
    }
    let (h, _) = weight_split(&differentiate(theta));
    if k == 1 {
        return Ok(h.is_zero());
    }
    Ok(lefschetz_preimage(&h, k - 2)?.is_some())
}

fn sign_pow(m: usize) -> Rat {
    if m.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Obstruction `d(θ − (−1)^m 𝓛((dθ)₁) ∧ τ)` for `θ` of degree `m − 1`; the
/// class of `dθ` vanishes in the middle degree iff this is zero.
pub fn nullclass_middle(m: usize, theta: &HeisForm) -> Result<HeisForm> {
    check_m(m)?;
    if !theta.has_degree(m - 1) {
        return Err(Error::Domain(format!(
            "expected a form of degree {}",
            m - 1
        )));
    }
    let (h, _) = weight_split(&differentiate(theta));
    let correction = lefschetz_inverse(m, &h)?
        .wedge(&HeisForm::tau(m))
        .scale(&sign_pow(m));
    Ok(differentiate(&theta.sub(&correction)))
}

/// `φ = φ₁ + φ₂ ∧ τ` with `(dφ₁)₁ = −(−1)^m φ₂ ∧ dτ`, so that `dφ` is
/// vertical.
pub fn vertical_construct(m: usize, phi1: &HeisForm) -> Result<HeisForm> {
    check_m(m)?;
    if !phi1.is_horizontal() || !phi1.has_degree(m - 1) {
        return Err(Error::Contract(format!(
            "expected a horizontal form of degree {}",
            m - 1
        )));
    }
    let (h, _) = weight_split(&differentiate(phi1));
    let phi2 = lefschetz_inverse(m, &h)?.scale(&-sign_pow(m));
    Ok(phi1.add(&phi2.wedge(&HeisForm::tau(m))))
}

/// Whether the annihilator of `Ker L_{ℓ−2}` under `(u, v) ↦ u ∧ v` equals
/// `Im L_{k−2}`, with `k + ℓ = 2m` and `2 ≤ k ≤ 2m − 2`.
pub fn duality_orthogonality(m: usize, k: usize) -> Result<bool> {
    check_m(m)?;
    if k < 2 || k > hdim(m) {
        return Err(Error::Domain(format!("need 2 <= k <= {} (k={k})", hdim(m))));
    }
    let l = 2 * m - k;
    let ker = lefschetz_matrix(m, l - 2).kernel();
    let top = (1u32 << hdim(m)) - 1;
    let left = horizontal_basis(m, k);
    let right = horizontal_basis(m, l - 2);
    // pairing[v][u] = top coefficient of e_u ∧ v.
    let mut rows = Vec::with_capacity(ker.len());
    for v in &ker {
        let row: Vec<Rat> = left
            .iter()
            .map(|&u| {
                right
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .filter_map(|(&w, c)| {
                        (u | w == top)
                            .then(|| wedge_sign(u, w))
                            .flatten()
                            .map(|neg| if neg { -c } else { c.clone() })
                    })
                    .sum()
            })
            .collect();
        rows.push(row);
    }
    let pairing = Matrix::from_rows(&rows, left.len());
    let annihilator_dim = left.len() - pairing.rank();
    let image = lefschetz_matrix(m, k - 2);
    let image_rank = image.rank();
    let inside =
        (0..image.cols()).all(|c| pairing.mul_vec(&image.column(c)).iter().all(Rat::is_zero));
    Ok(inside && annihilator_dim == image_rank)
}

/// Top-degree identity `T ∧ θ = T₁ ∧ (θ₂ ∧ τ) + T₂ ∧ τ ∧ θ₁` for forms of
/// complementary degree.
pub fn weight_pairing_holds(t: &HeisForm, theta: &HeisForm) -> bool {
    let m = t.m;
    let tau = HeisForm::tau(m);
    let (t1, t2) = weight_split(t);
    let (th1, th2) = weight_split(theta);
    let lhs = t.wedge(theta).top_coefficient();
    let rhs = &t1.wedge(&th2.wedge(&tau)).top_coefficient()
        + &t2.wedge(&tau).wedge(&th1).top_coefficient();
    lhs == rhs
}

/// For `m = 2` and `θ = f dx`: the closed form
/// `−(Z·f + X·Y·f) dx∧τ − (Y²·f) dy∧τ` of the middle-degree obstruction.
pub fn fdx_obstruction_formula(f: &Poly) -> HeisForm {
    let m = 2;
    let yf = y_op(m, 1, f);
    let first = &z_op(m, f) + &x_op(m, 1, &yf);
    let second = y_op(m, 1, &yf);
    HeisForm::from_factors(m, &[0, 2], -&first).add(&HeisForm::from_factors(m, &[1, 2], -&second))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairConstruction {
    pub theta: HeisForm,
    pub big_theta: HeisForm,
    pub certificate: HeisForm,
}

/// On `Heis(3)`: `θ = (X·u) dx`, `Θ = −(Y·u) dy`, and the obstruction of
/// `θ − Θ` (always zero).
pub fn sl3_pair_construct(u: &Poly) -> Result<PairConstruction> {
    let m = 2;
    if u.nvars() != nvars(m) {
        return Err(Error::Domain("u must be a polynomial in x, y, z".into()));
    }
    let theta = HeisForm::from_factors(m, &[0], x_op(m, 1, u));
    let big_theta = HeisForm::from_factors(m, &[1], -&y_op(m, 1, u));
    let certificate = nullclass_middle(m, &theta.sub(&big_theta))?;
    Ok(PairConstruction {
        theta,
        big_theta,
        certificate,
    })
}
