//! Exact multivariate polynomials and their canonical text form.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::jets::{self, Jet};
use crate::scalar::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Highest power of variable `i` that occurs.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derive(&self, i: usize) -> Poly {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut f = e.clone();
                f[i] -= 1;
                (f, c * scalar::int(e[i] as i64))
            }),
        )
    }

    /// Exact substitution of polynomials for the variables.
    pub fn compose(&self, inner: &[Poly]) -> Poly {
        assert_eq!(inner.len(), self.nvars);
        let nv = inner.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&inner[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates on jet arguments (constant terms allowed).
    pub fn eval_jets(&self, args: &[Jet]) -> Jet {
        assert_eq!(args.len(), self.nvars);
        let nv = args[0].num_vars();
        let order = jets::min_order(args);
        jets::eval_polynomial(self.terms.iter().map(|(e, c)| (&e[..], c)), args, nv, order)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(scalar::to_f64(c), |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum::<f64>()
            + 0.0
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (&k, xi) in e.iter().zip(x) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// Converts a one- or two-variable polynomial to a jet of order `order`.
    pub fn to_jet(&self, order: u32) -> Jet {
        assert!(self.nvars == 1 || self.nvars == 2);
        Jet::from_terms(
            self.nvars,
            order,
            self.terms.iter().map(|(e, c)| {
                let mut x = [0u32; 2];
                x[..self.nvars].copy_from_slice(e);
                (x, c.clone())
            }),
        )
        .expect("valid exponents")
    }

    pub fn from_jet(j: &Jet) -> Poly {
        let nv = j.num_vars();
        Poly::from_terms(nv, j.terms().map(|(e, c)| (e[..nv].to_vec(), c.clone())))
    }

    pub fn to_text(&self, names: &[&str]) -> String {
        format_terms(
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
            names,
        )
    }
}

/// Canonical polynomial text.
///
/// Terms ascend by total degree; within a degree, exponent vectors descend
/// lexicographically. Inside a monomial, variables are listed alphabetically.
pub fn format_terms(
    terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    names: &[&str],
) -> String {
    let mut terms: Vec<(Vec<u32>, Rational)> =
        terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), Reverse(e.clone())));
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| names[i]);

    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let mono: Vec<String> = order
            .iter()
            .filter(|&&i| e[i] > 0)
            .map(|&i| match e[i] {
                1 => names[i].to_string(),
                k => format!("{}^{}", names[i], k),
            })
            .collect();
        let neg = c.is_negative();
        let mag = c.abs();
        let body = if mono.is_empty() {
            scalar::fmt_rational(&mag)
        } else if mag.is_one() {
            mono.join("*")
        } else {
            format!("{}*{}", scalar::fmt_rational(&mag), mono.join("*"))
        };
        if neg {
            out.push('-');
        } else if idx > 0 {
            out.push('+');
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn t() -> Poly {
        Poly::var(2, 0)
    }
    fn s() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn canonical_order() {
        // t^3 + 3 s t^2 - t + 1/2
        let p = t()
            .pow(3)
            .add(&s().mul(&t().pow(2)).scale(&int(3)))
            .sub(&t())
            .add(&Poly::constant(2, rat(1, 2)));
        assert_eq!(p.to_text(&["t", "s"]), "1/2-t+t^3+3*s*t^2");
        let q = t()
            .pow(2)
            .add(&s().mul(&t()).scale(&int(2)))
            .add(&s().pow(2));
        assert_eq!(q.to_text(&["t", "s"]), "t^2+2*s*t+s^2");
    }

    #[test]
    fn composition_with_translation() {
        let sq = Poly::var(1, 0).pow(2);
        let shifted = sq.compose(&[Poly::var(1, 0).add(&Poly::constant(1, int(1)))]);
        assert_eq!(shifted.to_text(&["t"]), "1+2*t+t^2");
    }

    #[test]
    fn zero_text() {
        assert_eq!(Poly::zero(2).to_text(&["t", "s"]), "0");
    }
}
