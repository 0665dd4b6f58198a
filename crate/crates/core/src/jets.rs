//! Truncated power series in one or two variables with exact coefficients.
//!
//! A [`Jet`] of order `K` stores the Taylor coefficients of total degree
//! `<= K`, sparsely by exponent. Binary operations between jets of different
//! orders truncate to the smaller order, since nothing above it is known.
//! Variables are indexed `0` (`t`) and `1` (`s`).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{self, Rational};

/// Exponent of `t^e[0] s^e[1]`. Univariate jets keep `e[1] == 0`.
pub type Exponent = [u32; 2];

/// A vector-valued jet, one [`Jet`] per target coordinate.
pub type JetVector = Vec<Jet>;

fn degree(e: &Exponent) -> u32 {
    e[0] + e[1]
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    num_vars: usize,
    order: u32,
    coeffs: BTreeMap<Exponent, Rational>,
}

impl Jet {
    /// Panics unless `num_vars` is 1 or 2.
    pub fn zero(num_vars: usize, order: u32) -> Jet {
        assert!(
            num_vars == 1 || num_vars == 2,
            "jets have one or two variables"
        );
        Jet {
            num_vars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, order: u32, c: Rational) -> Jet {
        let mut j = Jet::zero(num_vars, order);
        j.add_term([0, 0], c);
        j
    }

    pub fn one(num_vars: usize, order: u32) -> Jet {
        Jet::constant(num_vars, order, Rational::one())
    }

    /// The coordinate function `x_var`.
    pub fn var(num_vars: usize, order: u32, var: usize) -> Jet {
        let mut e = [0, 0];
        e[var] = 1;
        Jet::monomial(num_vars, order, e, Rational::one())
    }

    pub fn monomial(num_vars: usize, order: u32, e: Exponent, c: Rational) -> Jet {
        assert!(
            num_vars == 2 || e[1] == 0,
            "univariate jet with an s exponent"
        );
        let mut j = Jet::zero(num_vars, order);
        j.add_term(e, c);
        j
    }

    /// Builds a jet from terms; terms above `order` are dropped.
    pub fn from_terms(
        num_vars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Exponent, Rational)>,
    ) -> Result<Jet> {
        if num_vars != 1 && num_vars != 2 {
            return Err(Error::usage("jets have one or two variables"));
        }
        let mut j = Jet::zero(num_vars, order);
        for (e, c) in terms {
            if num_vars == 1 && e[1] != 0 {
                return Err(Error::usage("univariate jet given an s exponent"));
            }
            j.add_term(e, c);
        }
        Ok(j)
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if degree(&e) > self.order || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero terms in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: Exponent) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `t^k` in a univariate jet.
    pub fn coeff1(&self, k: u32) -> Rational {
        self.coeff([k, 0])
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff([0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(degree).min()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(degree).max()
    }

    pub fn truncate(&self, order: u32) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            num_vars: self.num_vars,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| degree(e) <= order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the same coefficients at a larger order. Only sound when
    /// the jet is known to be an exact polynomial.
    pub fn extend_order(&self, order: u32) -> Jet {
        let mut j = self.clone();
        j.order = j.order.max(order);
        j
    }

    pub fn homogeneous_part(&self, d: u32) -> Vec<(Exponent, Rational)> {
        self.coeffs
            .iter()
            .filter(|(e, _)| degree(e) == d)
            .map(|(e, c)| (*e, c.clone()))
            .collect()
    }

    /// Embeds a univariate jet in `t` as a bivariate jet.
    pub fn to_bivariate(&self) -> Jet {
        Jet {
            num_vars: 2,
            order: self.order,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Coefficient of `x_var^k` as a univariate jet in the other variable.
    pub fn slice(&self, var: usize, k: u32) -> Jet {
        assert_eq!(self.num_vars, 2);
        let other = 1 - var;
        let mut out = Jet::zero(1, self.order.saturating_sub(k));
        for (e, c) in &self.coeffs {
            if e[var] == k {
                out.add_term([e[other], 0], c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.num_vars, self.order);
        }
        Jet {
            num_vars: self.num_vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn check_same_vars(&self, other: &Jet) {
        assert_eq!(
            self.num_vars, other.num_vars,
            "jets over different variable sets"
        );
    }

    fn mul_truncated(&self, other: &Jet, order: u32) -> Jet {
        let mut out = Jet::zero(self.num_vars, order);
        for (ea, ca) in &self.coeffs {
            if degree(ea) > order {
                continue;
            }
            for (eb, cb) in &other.coeffs {
                let e = [ea[0] + eb[0], ea[1] + eb[1]];
                if degree(&e) <= order {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    /// Strict product: both factors must share variables and order.
    pub fn mul_checked(&self, other: &Jet) -> Result<Jet> {
        if self.num_vars != other.num_vars || self.order != other.order {
            return Err(Error::usage("jet product needs equal num_vars and order"));
        }
        Ok(self * other)
    }

    pub fn pow(&self, n: u32) -> Jet {
        let mut acc = Jet::one(self.num_vars, self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative; the order drops by one.
    pub fn derive(&self, var: usize) -> Jet {
        assert!(var < self.num_vars, "derivative in a missing variable");
        let mut out = Jet::zero(self.num_vars, self.order.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            out.add_term(f, c * scalar::int(e[var] as i64));
        }
        out
    }

    /// Substitutes `inner` for the variables of `self`.
    ///
    /// Every inner jet must have zero constant term; the result has the
    /// smaller of the two orders.
    pub fn compose(&self, inner: &[Jet]) -> Result<Jet> {
        if inner.len() != self.num_vars {
            return Err(Error::usage(format!(
                "composition needs {} inner jets, got {}",
                self.num_vars,
                inner.len()
            )));
        }
        let nv = inner[0].num_vars;
        if inner.iter().any(|g| g.num_vars != nv) {
            return Err(Error::usage("inner jets over different variable sets"));
        }
        if inner.iter().any(|g| !g.constant_term().is_zero()) {
            return Err(Error::usage(
                "inner jet has a nonzero constant term; composition is not defined",
            ));
        }
        let order = inner
            .iter()
            .map(|g| g.order)
            .min()
            .unwrap_or(self.order)
            .min(self.order);
        let terms = self.coeffs.iter().map(|(e, c)| (&e[..self.num_vars], c));
        Ok(eval_polynomial(terms, inner, nv, order))
    }

    /// Graded exact division `self / d`.
    ///
    /// Works degree by degree against the initial form of `d`, so the
    /// quotient has order `min(orders) - val(d)`. Fails with
    /// [`Error::NotDivisible`] when a remainder appears.
    pub fn quotient(&self, d: &Jet) -> Result<Jet> {
        self.check_same_vars(d);
        let v = d
            .valuation()
            .ok_or_else(|| Error::NotDivisible("division by the zero jet".into()))?;
        let top = self.order.min(d.order);
        if v > top {
            return Err(Error::NotDivisible(
                "divisor valuation exceeds the known order".into(),
            ));
        }
        if let Some(va) = self.valuation() {
            if va < v {
                return Err(Error::NotDivisible(format!(
                    "dividend has valuation {va} below divisor valuation {v}"
                )));
            }
        }
        let q_order = top - v;
        let lead = d.homogeneous_part(v);
        let mut rem = self.truncate(top);
        let mut q = Jet::zero(self.num_vars, q_order);
        for k in 0..=q_order {
            let r = rem.homogeneous_part(k + v);
            if r.is_empty() {
                continue;
            }
            let qk = divide_forms(self.num_vars, &r, &lead, k)?;
            let qk = Jet::from_terms(self.num_vars, q_order, qk)?;
            rem = &rem - &d.mul_truncated(&qk, top);
            q = &q + &qk;
        }
        debug_assert!(rem.is_zero());
        Ok(q)
    }

    /// Univariate exact division.
    pub fn div_exact(&self, d: &Jet) -> Result<Jet> {
        if self.num_vars != 1 || d.num_vars != 1 {
            return Err(Error::usage("div_exact is defined for univariate jets"));
        }
        self.quotient(d)
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Jet> {
        if self.constant_term().is_zero() {
            return Err(Error::NotDivisible("jet is not a unit".into()));
        }
        Jet::one(self.num_vars, self.order).quotient(self)
    }

    /// Square root of a unit whose constant term is a rational square.
    pub fn sqrt_unit(&self) -> Result<Jet> {
        let c0 = self.constant_term();
        let r0 = scalar::exact_sqrt(&c0)
            .filter(|r| !r.is_zero())
            .ok_or_else(|| Error::usage("constant term is not a positive rational square"))?;
        let half = scalar::rat(1, 2);
        let mut r = Jet::constant(self.num_vars, self.order, r0);
        for _ in 0..=(self.order + 1) {
            let next = (&r + &self.quotient(&r)?).scale(&half);
            if next == r {
                return Ok(r);
            }
            r = next;
        }
        Ok(r)
    }

    /// Solves `self(t, s) = 0` for variable `solve_var` as a jet in the other.
    ///
    /// Chord iteration with the constant slope `d self / d x_solve (0)`; each
    /// step fixes at least one more coefficient.
    pub fn implicit_solve(&self, solve_var: usize) -> Result<Jet> {
        if self.num_vars != 2 || solve_var > 1 {
            return Err(Error::usage("implicit_solve needs a bivariate jet"));
        }
        if !self.constant_term().is_zero() {
            return Err(Error::NotNonDegenerate(
                "value at the base point is nonzero".into(),
            ));
        }
        let slope = self.derive(solve_var).constant_term();
        if slope.is_zero() {
            return Err(Error::NotNonDegenerate(
                "partial derivative in the solved variable vanishes".into(),
            ));
        }
        let k = self.order;
        let tau = Jet::var(1, k, 0);
        let mut c = Jet::zero(1, k);
        for _ in 0..=(k + 1) {
            let inner = if solve_var == 1 {
                [tau.clone(), c.clone()]
            } else {
                [c.clone(), tau.clone()]
            };
            let r = self.compose(&inner)?;
            if r.is_zero() {
                return Ok(c);
            }
            c = &c - &r.scale(&(Rational::one() / &slope));
        }
        Err(Error::NotNonDegenerate(
            "implicit iteration did not settle".into(),
        ))
    }

    /// Float evaluation at `x` (length `num_vars`).
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.to_float().eval(x)
    }

    pub fn to_float(&self) -> FloatJet {
        FloatJet {
            terms: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, scalar::to_f64(c)))
                .collect(),
        }
    }

    /// Canonical text using the given variable names.
    pub fn to_text(&self, names: &[&str]) -> String {
        poly::format_terms(
            self.coeffs
                .iter()
                .map(|(e, c)| (e[..self.num_vars].to_vec(), c.clone())),
            &names[..self.num_vars],
        )
    }
}

impl std::fmt::Display for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + O({})", self.to_text(&["t", "s"]), self.order + 1)
    }
}

/// Exact division of binary forms: `r` of degree `k + deg(lead)` by `lead`.
fn divide_forms(
    num_vars: usize,
    r: &[(Exponent, Rational)],
    lead: &[(Exponent, Rational)],
    k: u32,
) -> Result<Vec<(Exponent, Rational)>> {
    if num_vars == 1 {
        let (el, cl) = &lead[0];
        return Ok(r.iter().map(|(e, c)| ([e[0] - el[0], 0], c / cl)).collect());
    }
    // Dehomogenise at s = 1 and divide as polynomials in t.
    let mut num: BTreeMap<u32, Rational> = r.iter().map(|(e, c)| (e[0], c.clone())).collect();
    let den: BTreeMap<u32, Rational> = lead.iter().map(|(e, c)| (e[0], c.clone())).collect();
    let (&dd, dc) = den.iter().next_back().expect("nonzero initial form");
    let mut out = Vec::new();
    while let Some((&nd, nc)) = num.iter().next_back() {
        if nd < dd {
            return Err(Error::NotDivisible("nonzero remainder".into()));
        }
        let shift = nd - dd;
        if shift > k {
            return Err(Error::NotDivisible(
                "quotient would need a negative power".into(),
            ));
        }
        let qc = nc / dc;
        for (&e, c) in &den {
            let slot = num.entry(e + shift).or_insert_with(Rational::zero);
            *slot -= &qc * c;
            if slot.is_zero() {
                num.remove(&(e + shift));
            }
        }
        out.push(([shift, k - shift], qc));
    }
    Ok(out)
}

/// Evaluates a polynomial (exponent slice, coefficient) on jet arguments.
///
/// Arguments may carry constant terms, so every term is expanded.
pub fn eval_polynomial<'a>(
    terms: impl IntoIterator<Item = (&'a [u32], &'a Rational)>,
    args: &[Jet],
    num_vars: usize,
    order: u32,
) -> Jet {
    let args: Vec<Jet> = args.iter().map(|a| a.truncate(order)).collect();
    let mut powers: Vec<Vec<Jet>> = args
        .iter()
        .map(|_| vec![Jet::one(num_vars, order)])
        .collect();
    let mut out = Jet::zero(num_vars, order);
    for (e, c) in terms {
        let mut term = Jet::constant(num_vars, order, c.clone());
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k as usize {
                let next = &powers[i][powers[i].len() - 1] * &args[i];
                powers[i].push(next);
            }
            term = &term * &powers[i][k as usize];
        }
        out = &out + &term;
    }
    out
}

/// Float copy of a jet for grid sampling.
#[derive(Clone, Debug)]
pub struct FloatJet {
    terms: Vec<(Exponent, f64)>,
}

impl FloatJet {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let t = x[0];
        let s = x.get(1).copied().unwrap_or(0.0);
        self.terms
            .iter()
            .map(|(e, c)| c * t.powi(e[0] as i32) * s.powi(e[1] as i32))
            .sum()
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.check_same_vars(rhs);
        let mut out = self.truncate(self.order.min(rhs.order));
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.check_same_vars(rhs);
        let mut out = self.truncate(self.order.min(rhs.order));
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.check_same_vars(rhs);
        self.mul_truncated(rhs, self.order.min(rhs.order))
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(&-Rational::one())
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

// Vector helpers.

pub fn derive_vec(v: &[Jet], var: usize) -> JetVector {
    v.iter().map(|j| j.derive(var)).collect()
}

pub fn compose_vec(v: &[Jet], inner: &[Jet]) -> Result<JetVector> {
    v.iter().map(|j| j.compose(inner)).collect()
}

pub fn truncate_vec(v: &[Jet], order: u32) -> JetVector {
    v.iter().map(|j| j.truncate(order)).collect()
}

pub fn constants(v: &[Jet]) -> Vec<Rational> {
    v.iter().map(Jet::constant_term).collect()
}

pub fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    assert_eq!(a.len(), b.len());
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc = &acc + &(x * y);
    }
    acc
}

pub fn cross3(a: &[Jet], b: &[Jet]) -> JetVector {
    assert!(
        a.len() == 3 && b.len() == 3,
        "cross product needs 3-vectors"
    );
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn add_vec(a: &[Jet], b: &[Jet]) -> JetVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(v: &[Jet], f: &Jet) -> JetVector {
    v.iter().map(|x| x * f).collect()
}

pub fn min_order(v: &[Jet]) -> u32 {
    v.iter().map(Jet::order).min().unwrap_or(0)
}
