//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are indexed; on `Heis(2m−1)` the layout is
//! `x₁, y₁, x₂, y₂, …, x_{m−1}, y_{m−1}, z`, matching the coframe order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::Rat;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        Poly::monomial(nvars, &[(i, 1)], Rat::one())
    }

    /// `c · Π x_i^{e_i}` from `(index, exponent)` pairs.
    pub fn monomial(nvars: usize, powers: &[(usize, u32)], c: Rat) -> Poly {
        let mut exps = vec![0; nvars];
        for &(i, e) in powers {
            exps[i] += e;
        }
        let mut p = Poly::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += &c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * Rat::int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k))
            })
            .sum()
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial rings differ");
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        self + &(-other)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| a.saturating_add(*b))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, other: Poly) -> Poly {
                (&self).$m(&other)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Variable names for the Heisenberg layout with `nvars = 2m − 1`.
pub fn heis_var_name(nvars: usize, i: usize) -> String {
    if i + 1 == nvars {
        "z".to_string()
    } else if i.is_multiple_of(2) {
        format!("x{}", i / 2 + 1)
    } else {
        format!("y{}", i / 2 + 1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first, then reverse lexicographic on exponents.
        let mut terms: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.0.iter().sum(), b.0.iter().sum());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = heis_var_name(self.nvars, i);
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_cancellation() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let s = &x + &y;
        let d = &x - &y;
        let prod = &s * &d;
        let expect = &(&x * &x) - &(&y * &y);
        assert_eq!(prod, expect);
        assert!((&x - &x).is_zero());
        assert_eq!(prod.degree(), Some(2));
        assert_eq!(Poly::zero(3).degree(), None);
    }

    #[test]
    fn partials() {
        let p = Poly::monomial(3, &[(0, 3), (2, 1)], Rat::new(1, 2));
        assert_eq!(
            p.partial(0),
            Poly::monomial(3, &[(0, 2), (2, 1)], Rat::new(3, 2))
        );
        assert!(p.partial(1).is_zero());
    }

    #[test]
    fn display() {
        let x = Poly::var(3, 0);
        let z = Poly::var(3, 2);
        let p = &(&(&x * &x).scale(&Rat::new(3, 2)) - &z) + &Poly::one(3);
        assert_eq!(p.to_string(), "3/2*x1^2 - z + 1");
        assert_eq!((-&p).to_string(), "-3/2*x1^2 + z - 1");
        assert_eq!(Poly::zero(3).to_string(), "0");
        assert_eq!(Poly::var(5, 3).to_string(), "y2");
    }

    #[test]
    fn evaluation() {
        let p = Poly::monomial(3, &[(0, 2), (1, 1)], Rat::int(2));
        assert_eq!(
            p.eval(&[Rat::int(3), Rat::new(1, 2), Rat::int(7)]),
            Rat::int(9)
        );
    }
}
