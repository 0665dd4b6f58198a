//! Curve invariants: order, type, osculating flag and direction frames.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::germs::{GermKind, MapGerm};
use crate::jets::{self, Jet, JetVector};
use crate::linalg::{self, Echelon};
use crate::scalar::{self, Rational};

/// Default truncation order for germ-level work.
pub const DEFAULT_ORDER: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveOrder {
    Finite(u32),
    /// Every derivative up to the cutoff vanishes.
    Infinite {
        cutoff: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveType {
    Finite(Vec<u32>),
    NotFiniteType { cutoff: u32 },
}

impl CurveType {
    pub fn tuple(&self) -> Option<&[u32]> {
        match self {
            CurveType::Finite(a) => Some(a),
            CurveType::NotFiniteType { .. } => None,
        }
    }
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveType::Finite(a) => {
                let parts: Vec<String> = a.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            CurveType::NotFiniteType { cutoff } => {
                write!(f, "not of finite type (cutoff {cutoff})")
            }
        }
    }
}

fn check_curve_jets(gamma: &[Jet]) -> Result<()> {
    if gamma.is_empty() || gamma.iter().any(|j| j.num_vars() != 1) {
        return Err(Error::usage("expected a curve (univariate jets)"));
    }
    Ok(())
}

fn curve_jets(gamma: &MapGerm, k: u32) -> Result<JetVector> {
    if gamma.kind() != GermKind::Curve {
        return Err(Error::usage("expected a curve germ"));
    }
    Ok(gamma.to_jets(k))
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * scalar::int(i))
}

/// `gamma^(k)(0)` from univariate jets.
pub fn derivative_at_zero(gamma: &[Jet], k: u32) -> Vec<Rational> {
    let f = factorial(k);
    gamma.iter().map(|j| j.coeff1(k) * &f).collect()
}

/// Order of a univariate jet curve: the first non-vanishing derivative.
pub fn order_of_jets(gamma: &[Jet]) -> Result<CurveOrder> {
    check_curve_jets(gamma)?;
    let cutoff = jets::min_order(gamma);
    let ord = gamma
        .iter()
        .filter_map(|j| j.terms().map(|(e, _)| e[0]).filter(|&e| e >= 1).min())
        .filter(|&e| e <= cutoff)
        .min();
    Ok(match ord {
        Some(d) => CurveOrder::Finite(d),
        None => CurveOrder::Infinite { cutoff },
    })
}

pub fn order(gamma: &MapGerm, k: u32) -> Result<CurveOrder> {
    order_of_jets(&curve_jets(gamma, k)?)
}

/// The `m x k` matrix with columns `gamma'(0), ..., gamma^(k)(0)`.
pub fn wk_matrix(gamma: &[Jet], k: u32) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = (1..=k).map(|j| derivative_at_zero(gamma, j)).collect();
    (0..gamma.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Type `(a_1, ..., a_m)`: `a_i` is the least `k` with `rank W_k = i`.
pub fn curve_type_of_jets(gamma: &[Jet], cutoff: u32) -> Result<CurveType> {
    check_curve_jets(gamma)?;
    let cutoff = cutoff.min(jets::min_order(gamma));
    let m = gamma.len();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut a = Vec::new();
    let mut rank = 0;
    for k in 1..=cutoff {
        cols.push(derivative_at_zero(gamma, k));
        let r = linalg::rank(&cols);
        if r > rank {
            rank = r;
            a.push(k);
            if rank == m {
                return Ok(CurveType::Finite(a));
            }
        }
    }
    Ok(CurveType::NotFiniteType { cutoff })
}

pub fn curve_type(gamma: &MapGerm, t0: &Rational, k: u32) -> Result<CurveType> {
    let g = gamma.clone().with_base_point(vec![t0.clone()])?;
    curve_type_of_jets(&curve_jets(&g, k)?, k)
}

/// Nested osculating subspaces, each given by an orthogonal spanning set.
#[derive(Clone, Debug, PartialEq)]
pub struct OsculatingFlag {
    pub subspaces: Vec<Vec<Vec<Rational>>>,
}

impl OsculatingFlag {
    /// Orthonormal float copy.
    pub fn orthonormal_f64(&self) -> Vec<Vec<Vec<f64>>> {
        self.subspaces
            .iter()
            .map(|basis| {
                basis
                    .iter()
                    .map(|v| {
                        let f: Vec<f64> = v.iter().map(scalar::to_f64).collect();
                        let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
                        f.iter().map(|x| x / n).collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Osculating flag at the base point, as far as the rank grows.
pub fn osculating_flag(gamma: &[Jet], cutoff: u32) -> Result<OsculatingFlag> {
    check_curve_jets(gamma)?;
    let cutoff = cutoff.min(jets::min_order(gamma));
    let mut span = Echelon::new(gamma.len());
    let mut ortho: Vec<Vec<Rational>> = Vec::new();
    let mut subspaces = Vec::new();
    for k in 1..=cutoff {
        let v = derivative_at_zero(gamma, k);
        if !span.insert(&v) {
            continue;
        }
        // Gram-Schmidt without normalisation keeps everything rational.
        let mut w = v.clone();
        for b in &ortho {
            let num: Rational = v.iter().zip(b).map(|(x, y)| x * y).sum();
            let den: Rational = b.iter().map(|y| y * y).sum();
            let f = num / den;
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= &f * bi;
            }
        }
        ortho.push(w);
        subspaces.push(ortho.clone());
    }
    Ok(OsculatingFlag { subspaces })
}

/// Smooth frame `u` along a directed curve with `gamma' = h u`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionFrame {
    pub u: JetVector,
    pub h: Jet,
    pub pivot: usize,
}

/// Divides `gamma'` by the leading monomial of its first component of
/// minimal valuation.
pub fn direction_frame(gamma: &[Jet]) -> Result<DirectionFrame> {
    check_curve_jets(gamma)?;
    let d = match order_of_jets(gamma)? {
        CurveOrder::Finite(d) => d,
        CurveOrder::Infinite { cutoff } => return Err(Error::NotFiniteType(cutoff)),
    };
    let dg = jets::derive_vec(gamma, 0);
    let pivot = (0..dg.len())
        .find(|&i| dg[i].valuation() == Some(d - 1))
        .expect("order fixes a component of valuation d-1");
    let lead = dg[pivot].coeff1(d - 1);
    let h = Jet::monomial(1, dg[pivot].order(), [d - 1, 0], lead);
    let u = dg
        .iter()
        .map(|c| c.div_exact(&h))
        .collect::<Result<JetVector>>()?;
    debug_assert!(u[pivot].constant_term().is_one());
    Ok(DirectionFrame { u, h, pivot })
}

/// Direction frame of a polynomial curve, exact.
pub fn direction_frame_germ(gamma: &MapGerm) -> Result<DirectionFrame> {
    direction_frame(&curve_jets(gamma, gamma.degree().max(1))?)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::parse_germ;
    use crate::scalar::int;

    fn curve(text: &str) -> MapGerm {
        parse_germ(text).unwrap()
    }

    #[test]
    fn orders() {
        let g = curve("curve R->R^2: t^2, t^3");
        assert_eq!(order(&g, 8).unwrap(), CurveOrder::Finite(2));
        let g = curve("curve R->R^3: t, t^2, t^3");
        assert_eq!(order(&g, 8).unwrap(), CurveOrder::Finite(1));
        let g = curve("curve R->R^2: 0, 1");
        assert_eq!(order(&g, 8).unwrap(), CurveOrder::Infinite { cutoff: 8 });
    }

    #[test]
    fn wk_matrices() {
        let g = curve("curve R->R^3: t, t^2, t^3").to_jets(8);
        let w = wk_matrix(&g, 3);
        let expect = vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(2), int(0)],
            vec![int(0), int(0), int(6)],
        ];
        assert_eq!(w, expect);
        let w2 = wk_matrix(&g, 2);
        assert_eq!(
            w2,
            expect.iter().map(|r| r[..2].to_vec()).collect::<Vec<_>>()
        );
        let g = curve("curve R->R^3: t^2, t^3, t^4").to_jets(8);
        assert!(wk_matrix(&g, 1).iter().all(|r| r[0].is_zero()));
    }

    #[test]
    fn types() {
        let cases = [
            ("curve R->R^3: t, t^2, t^3", vec![1, 2, 3]),
            ("curve R->R^3: t^2, t^3, t^4", vec![2, 3, 4]),
            ("curve R->R^3: t, t^3, t^4", vec![1, 3, 4]),
            ("curve R->R^4: t^2, t^3, t^4, t^5", vec![2, 3, 4, 5]),
        ];
        for (text, a) in cases {
            assert_eq!(
                curve_type(&curve(text), &int(0), 8).unwrap(),
                CurveType::Finite(a),
                "{text}"
            );
        }
        let line = curve("curve R->R^3: t, 2*t, 0");
        assert_eq!(
            curve_type(&line, &int(0), 8).unwrap(),
            CurveType::NotFiniteType { cutoff: 8 }
        );
        assert_eq!(CurveType::Finite(vec![2, 3, 4]).to_string(), "(2,3,4)");
    }

    #[test]
    fn type_at_shifted_base() {
        // t^2 at t = 1 is regular
        let g = curve("curve R->R^2: t^2, t^3");
        assert_eq!(
            curve_type(&g, &int(1), 8).unwrap(),
            CurveType::Finite(vec![1, 2])
        );
    }

    #[test]
    fn frames() {
        let f = direction_frame_germ(&curve("curve R->R^3: t^2, t^3, t^4")).unwrap();
        let text: Vec<String> = f.u.iter().map(|j| j.to_text(&["t"])).collect();
        assert_eq!(text, ["1", "3/2*t", "2*t^2"]);
        let f = direction_frame_germ(&curve("curve R->R^3: t, t^2, t^3")).unwrap();
        let text: Vec<String> = f.u.iter().map(|j| j.to_text(&["t"])).collect();
        assert_eq!(text, ["1", "2*t", "3*t^2"]);
        let f = direction_frame_germ(&curve("curve R->R^2: t^2, t^3+t^5")).unwrap();
        assert_eq!(f.u[1].to_text(&["t"]), "3/2*t+5/2*t^3");
        assert_eq!(f.h.to_text(&["t"]), "2*t");
    }

    #[test]
    fn frame_pivot_skips_higher_valuation_components() {
        let f = direction_frame_germ(&curve("curve R->R^2: t^3, 3*t^2")).unwrap();
        assert_eq!(f.pivot, 1);
        assert_eq!(f.u[1].constant_term(), int(1));
        assert_eq!(f.u[0].to_text(&["t"]), "1/2*t");
    }

    #[test]
    fn flags() {
        let g = curve("curve R->R^3: t+t^2, t^2, t^3").to_jets(8);
        let flag = osculating_flag(&g, 8).unwrap();
        assert_eq!(flag.subspaces.len(), 3);
        for (r, basis) in flag.subspaces.iter().enumerate() {
            assert_eq!(basis.len(), r + 1);
            for i in 0..basis.len() {
                for j in 0..i {
                    let d: Rational = basis[i].iter().zip(&basis[j]).map(|(x, y)| x * y).sum();
                    assert!(d.is_zero());
                }
            }
        }
    }
}
