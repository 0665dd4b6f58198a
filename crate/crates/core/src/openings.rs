//! Jacobi and ramification modules over the truncated local ring.
//!
//! A germ `f` with `n` source variables is expanded at its base point to
//! order `K`. One-forms `Σ a_v dx_v` are coefficient vectors over monomials
//! of degree `<= K-1`, functions are vectors over monomials of degree
//! `<= K`. Columns are ordered by degree ascending, so echelon pivots sit
//! on leading (lowest-degree) terms.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::germs::{GermKind, MapGerm};
use crate::jets::{Exponent, Jet, JetVector};
use crate::linalg::{self, Echelon};
use crate::poly::Poly;
use crate::scalar::Rational;

pub const DEFAULT_CUTOFF: u32 = 12;

/// Monomials of degree `<= d` in `n` variables, by degree, then exponent
/// descending.
fn monomials(n: usize, d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for deg in 0..=d {
        if n == 1 {
            out.push([deg, 0]);
        } else {
            out.extend((0..=deg).rev().map(|a| [a, deg - a]));
        }
    }
    out
}

#[derive(Clone, Debug)]
struct MonomialIndex {
    n: usize,
    list: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialIndex {
    fn new(n: usize, d: u32) -> MonomialIndex {
        let list = monomials(n, d);
        let index = list.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        MonomialIndex { n, list, index }
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn vector(&self, j: &Jet) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for (e, c) in j.terms() {
            if let Some(&i) = self.index.get(e) {
                v[i] = c.clone();
            }
        }
        v
    }

    fn jet(&self, v: &[Rational], order: u32) -> Jet {
        Jet::from_terms(
            self.n,
            order,
            self.list.iter().zip(v).map(|(e, c)| (*e, c.clone())),
        )
        .expect("monomials match the variable count")
    }

    fn degree(&self, i: usize) -> u32 {
        self.list[i][0] + self.list[i][1]
    }
}

/// Echelon basis of `𝒥_f` modulo forms of degree `>= K`.
#[derive(Clone, Debug)]
pub struct TruncatedModuleBasis {
    cutoff: u32,
    coeffs: MonomialIndex,
    echelon: Echelon,
}

impl TruncatedModuleBasis {
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn source_dim(&self) -> usize {
        self.coeffs.n
    }

    /// Dimension of the truncated module.
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Dimension of the ambient space of truncated 1-forms.
    pub fn ambient_dim(&self) -> usize {
        self.echelon.dim()
    }

    /// Coefficient vector of `Σ a_v dx_v`; column `n * i + v` holds
    /// monomial `i` of `a_v`.
    fn form_vector(&self, a: &[Jet]) -> Vec<Rational> {
        let n = self.coeffs.n;
        let mut out = vec![Rational::zero(); self.ambient_dim()];
        for (v, av) in a.iter().enumerate() {
            for (i, c) in self.coeffs.vector(av).into_iter().enumerate() {
                out[n * i + v] = c;
            }
        }
        out
    }

    pub fn contains_form(&self, a: &[Jet]) -> bool {
        self.echelon.contains(&self.form_vector(a))
    }

    /// Whether `dh` lies in the module.
    pub fn contains_differential(&self, h: &Jet) -> bool {
        let dh: JetVector = (0..self.coeffs.n).map(|v| h.derive(v)).collect();
        self.contains_form(&dh)
    }

    fn residue_of_differential(&self, h: &Jet) -> Vec<Rational> {
        let dh: JetVector = (0..self.coeffs.n).map(|v| h.derive(v)).collect();
        self.echelon.reduce(&self.form_vector(&dh))
    }

    /// `dim(𝒥 ∩ {forms of coefficient degree <= d})` for `d = 0..K-1`.
    pub fn graded_dimensions(&self) -> Vec<usize> {
        let n = self.coeffs.n;
        let dim = self.ambient_dim();
        let mut high_first = Echelon::new(dim);
        for row in self.echelon.rows() {
            let rev: Vec<Rational> = row.iter().rev().cloned().collect();
            high_first.insert(&rev);
        }
        let top: Vec<u32> = high_first
            .pivots()
            .map(|p| self.coeffs.degree((dim - 1 - p) / n))
            .collect();
        (0..self.cutoff)
            .map(|d| top.iter().filter(|&&t| t <= d).count())
            .collect()
    }
}

fn check_cutoff(k: u32) -> Result<()> {
    if k == 0 || k > 40 {
        return Err(Error::usage("cutoff K must be between 1 and 40"));
    }
    Ok(())
}

fn centred_jets(f: &MapGerm, k: u32) -> JetVector {
    f.to_jets(k)
        .into_iter()
        .map(|j| {
            let c = Jet::constant(j.num_vars(), k, j.constant_term());
            &j - &c
        })
        .collect()
}

/// Span of `monomial * df^j` with coefficient degree `<= K-1`.
pub fn jacobi_basis_jets(f: &[Jet], k: u32) -> Result<TruncatedModuleBasis> {
    check_cutoff(k)?;
    let n = f
        .first()
        .map(Jet::num_vars)
        .ok_or_else(|| Error::usage("germ without components"))?;
    let coeffs = MonomialIndex::new(n, k - 1);
    let mut basis = TruncatedModuleBasis {
        cutoff: k,
        echelon: Echelon::new(n * coeffs.len()),
        coeffs,
    };
    for fj in f {
        let dfj: JetVector = (0..n).map(|v| fj.derive(v).truncate(k - 1)).collect();
        for e in basis.coeffs.list.clone() {
            let mono = Jet::monomial(n, k - 1, e, Rational::one());
            let form: JetVector = dfj.iter().map(|a| &mono * a).collect();
            let row = basis.form_vector(&form);
            basis.echelon.insert(&row);
        }
    }
    Ok(basis)
}

pub fn jacobi_basis(f: &MapGerm, k: u32) -> Result<TruncatedModuleBasis> {
    jacobi_basis_jets(&centred_jets(f, k), k)
}

fn poly_jet(h: &Poly, f: &MapGerm, k: u32) -> Result<Jet> {
    if h.nvars() != f.source_dim() {
        return Err(Error::usage(
            "function and germ have different source variables",
        ));
    }
    if h.degree() > k {
        return Err(Error::usage(format!(
            "function of degree {} exceeds the cutoff {k}",
            h.degree()
        )));
    }
    let g = MapGerm::new(f.kind(), vec![h.clone(); f.source_dim()])?
        .with_base_point(f.base_point().to_vec())?;
    Ok(g.to_jets(k).swap_remove(0))
}

/// `h ∈ ℛ_f` at cutoff `K`: `dh` reduces to zero against `𝒥_f`.
pub fn ramification_member(h: &Poly, f: &MapGerm, k: u32) -> Result<bool> {
    let hj = poly_jet(h, f, k)?;
    Ok(jacobi_basis(f, k)?.contains_differential(&hj))
}

/// Whether every component of `big` beyond those of `f` lies in `ℛ_f`.
pub fn is_opening(big: &MapGerm, f: &MapGerm, k: u32) -> Result<bool> {
    if big.kind() != f.kind() || big.base_point() != f.base_point() {
        return Err(Error::usage(
            "opening and closing must share source and base point",
        ));
    }
    let m = f.target_dim();
    if big.target_dim() < m || big.components()[..m] != *f.components() {
        return Err(Error::usage(
            "the first components of the opening must equal the closing germ",
        ));
    }
    let basis = jacobi_basis(f, k)?;
    for h in &big.components()[m..] {
        if !basis.contains_differential(&poly_jet(h, f, k)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truncated ramification module with generators over the pullback ring.
#[derive(Clone, Debug, PartialEq)]
pub struct RamificationBasis {
    pub cutoff: u32,
    /// Vector-space basis of `ℛ_f` modulo degree `> K`, in echelon form.
    pub elements: Vec<Poly>,
    /// Minimal generators over `f^* E`, lowest degree first; starts with 1.
    pub module_generators: Vec<Poly>,
}

impl RamificationBasis {
    pub fn generator_degrees(&self) -> Vec<u32> {
        self.module_generators.iter().map(Poly::degree).collect()
    }
}

/// Target monomials `y^α` pulled back by `f`, up to degree `K`.
fn pullback_monomials(f: &[Jet], k: u32) -> Vec<Jet> {
    let n = f[0].num_vars();
    let vals: Vec<Option<u32>> = f.iter().map(Jet::valuation).collect();
    let mut out = vec![Jet::one(n, k)];
    let mut frontier = vec![(Jet::one(n, k), 0u32, 0usize)];
    while let Some((p, w, start)) = frontier.pop() {
        for j in start..f.len() {
            let Some(v) = vals[j] else { continue };
            if v == 0 || w + v > k {
                continue;
            }
            let q = &p * &f[j];
            if q.is_zero() {
                continue;
            }
            out.push(q.clone());
            frontier.push((q, w + v, j));
        }
    }
    out
}

pub fn ramification_generators_jets(f: &[Jet], k: u32) -> Result<RamificationBasis> {
    let basis = jacobi_basis_jets(f, k)?;
    let n = basis.coeffs.n;
    let funcs = MonomialIndex::new(n, k);
    // Kernel of h -> residue(dh); constants map to zero.
    let residues: Vec<Vec<Rational>> = funcs
        .list
        .iter()
        .map(|e| basis.residue_of_differential(&Jet::monomial(n, k, *e, Rational::one())))
        .collect();
    let rows: Vec<Vec<Rational>> = (0..basis.ambient_dim())
        .map(|r| residues.iter().map(|col| col[r].clone()).collect())
        .collect();
    let mut module = Echelon::new(funcs.len());
    for v in linalg::nullspace(&rows, funcs.len()) {
        module.insert(&v);
    }
    let pulls = pullback_monomials(f, k);
    let mut span = Echelon::new(funcs.len());
    let mut gens: Vec<Jet> = Vec::new();
    let mut next = Some(Jet::one(n, k));
    while let Some(g) = next.take() {
        for p in &pulls {
            span.insert(&funcs.vector(&(p * &g)));
        }
        gens.push(g);
        let mut rest = Echelon::new(funcs.len());
        for row in module.rows() {
            rest.insert(&span.reduce(row));
        }
        next = rest.rows().next().map(|r| funcs.jet(r, k));
    }
    if gens.iter().any(|g| g.degree().unwrap_or(0) >= k) {
        return Err(Error::NotFiniteAtCutoff(k));
    }
    Ok(RamificationBasis {
        cutoff: k,
        elements: module
            .rows()
            .map(|r| Poly::from_jet(&funcs.jet(r, k)))
            .collect(),
        module_generators: gens.iter().map(Poly::from_jet).collect(),
    })
}

/// Greedy lowest-degree generators of `ℛ_f` over the pullback ring.
pub fn ramification_generators(f: &MapGerm, k: u32) -> Result<RamificationBasis> {
    ramification_generators_jets(&centred_jets(f, k), k)
}

/// `(f, h_1, ..., h_r)` with the non-constant generators of `ℛ_f`, in
/// coordinates centred at the base point.
pub fn versal_opening(f: &MapGerm, k: u32) -> Result<MapGerm> {
    let r = ramification_generators(f, k)?;
    let base = MapGerm::new(f.kind(), f.recentered_components())?;
    let mut comps = base.components().to_vec();
    comps.extend(r.module_generators.into_iter().filter(|g| g.degree() > 0));
    MapGerm::new(f.kind(), comps)
}

/// The curve germ `t^μ`.
pub fn monomial_curve(mu: u32) -> MapGerm {
    MapGerm::new(GermKind::Curve, vec![Poly::var(1, 0).pow(mu)])
        .expect("one component over one variable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{normal_form, parse_germ, parse_poly, NormalFormTag};

    fn t(text: &str) -> Poly {
        parse_poly(text, &["t"]).unwrap()
    }

    fn ts(text: &str) -> Poly {
        parse_poly(text, &["t", "s"]).unwrap()
    }

    fn texts(ps: &[Poly], names: &[&str]) -> Vec<String> {
        ps.iter().map(|p| p.to_text(names)).collect()
    }

    #[test]
    fn jacobi_of_monomials() {
        let b = jacobi_basis(&monomial_curve(3), 12).unwrap();
        // m^2 dt truncated: t^2 .. t^11
        assert_eq!(b.dim(), 10);
        let id = jacobi_basis(&monomial_curve(1), 12).unwrap();
        assert_eq!(id.dim(), id.ambient_dim());
        assert_eq!(b.graded_dimensions()[..4], [0, 0, 1, 2]);
    }

    #[test]
    fn fold_jacobi_membership() {
        let fold = parse_germ("surface R^2->R^2: t, s^2").unwrap();
        let b = jacobi_basis(&fold, 8).unwrap();
        let one = Jet::one(2, 7);
        let s = Jet::var(2, 7, 1);
        let zero = Jet::zero(2, 7);
        assert!(b.contains_form(&[one.clone(), zero.clone()]));
        assert!(b.contains_form(&[zero.clone(), s.clone()]));
        assert!(!b.contains_form(&[zero.clone(), one]));
        assert!(!b.contains_form(&[zero, &(&s * &s) + &Jet::var(2, 7, 0)]));
    }

    #[test]
    fn members() {
        let f = monomial_curve(3);
        assert!(ramification_member(&t("t^5"), &f, 12).unwrap());
        assert!(!ramification_member(&t("t^2"), &f, 12).unwrap());
        let fold = parse_germ("surface R^2->R^2: t, s^2").unwrap();
        assert!(ramification_member(&ts("s^3"), &fold, 12).unwrap());
        assert!(!ramification_member(&ts("s"), &fold, 12).unwrap());
        assert!(ramification_member(&t("t^13"), &f, 12).is_err());
    }

    #[test]
    fn openings() {
        let fold = parse_germ("surface R^2->R^2: t, s^2").unwrap();
        let ce = parse_germ("surface R^2->R^3: t, s^2, s^3").unwrap();
        let bad = parse_germ("surface R^2->R^3: t, s^2, s").unwrap();
        assert!(is_opening(&ce, &fold, 12).unwrap());
        assert!(!is_opening(&bad, &fold, 12).unwrap());
        let sw = normal_form(NormalFormTag::Swallowtail, 3).unwrap();
        let wc = normal_form(NormalFormTag::WhitneyCusp, 2).unwrap();
        assert!(is_opening(&sw, &wc, 12).unwrap());
        assert!(is_opening(&fold, &ce, 12).is_err());
    }

    #[test]
    fn generators() {
        for (mu, expected) in [
            (1, vec!["1"]),
            (2, vec!["1", "t^3"]),
            (3, vec!["1", "t^4", "t^5"]),
            (4, vec!["1", "t^5", "t^6", "t^7"]),
        ] {
            let r = ramification_generators(&monomial_curve(mu), 12).unwrap();
            assert_eq!(texts(&r.module_generators, &["t"]), expected);
        }
        let fold = parse_germ("surface R^2->R^2: t, s^2").unwrap();
        let r = ramification_generators(&fold, 12).unwrap();
        assert_eq!(texts(&r.module_generators, &["t", "s"]), ["1", "s^3"]);
    }

    #[test]
    fn versal() {
        assert_eq!(
            versal_opening(&monomial_curve(2), 12).unwrap().tuple_text(),
            "(t^2, t^3)"
        );
        assert_eq!(
            versal_opening(&monomial_curve(3), 12).unwrap().tuple_text(),
            "(t^3, t^4, t^5)"
        );
        let fold = parse_germ("surface R^2->R^2: t, s^2").unwrap();
        let v = versal_opening(&fold, 12).unwrap();
        assert_eq!(v.tuple_text(), "(t, s^2, s^3)");
        assert!(is_opening(&v, &fold, 12).unwrap());
    }

    #[test]
    fn cutoff_too_small() {
        assert!(matches!(
            ramification_generators(&monomial_curve(4), 6),
            Err(Error::NotFiniteAtCutoff(6))
        ));
    }

    #[test]
    fn base_point_shift() {
        // (t+1)^2 - 2(t+1) = t^2 - 1
        let f = MapGerm::curve(vec![t("t^2-2*t")])
            .unwrap()
            .with_base_point(vec![Rational::one()])
            .unwrap();
        let r = ramification_generators(&f, 8).unwrap();
        assert_eq!(texts(&r.module_generators, &["t"]), ["1", "t^3"]);
    }
}
