//! Legendre duality: the sphere model for co-oriented frontal curves in
//! `S^2` and osculating duality for curves in projective 3-space.

use num_traits::{One, Zero};

use crate::classifier::{classify_by_curve_jets, SingularityClass};
use crate::curve_analysis::{curve_type_of_jets, CurveType};
use crate::error::{Error, Result};
use crate::germs::{GermKind, MapGerm};
use crate::jets::{self, Jet, JetVector};
use crate::scalar::{self, Rational};
use crate::tangent_surfaces::Connection;

/// Order used for homogeneous projective jets; large enough that the seed
/// curves and their duals stay exact polynomials.
pub const PROJECTIVE_ORDER: u32 = 32;

/// Curve `γ` on the unit sphere with unit normal `ν` tangent to the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalFrontalCurve {
    pub gamma: JetVector,
    pub nu: JetVector,
}

impl SphericalFrontalCurve {
    /// Checks `|γ|² = 1`, `|ν|² = 1`, `γ·ν = 0` and `γ'·ν = 0` as jets.
    pub fn new(gamma: JetVector, nu: JetVector) -> Result<SphericalFrontalCurve> {
        let bad = |msg: &str| Err(Error::InvalidSphericalCurve(msg.to_string()));
        if gamma.len() != 3 || nu.len() != 3 {
            return bad("curve and normal must lie in R^3");
        }
        if gamma.iter().chain(&nu).any(|j| j.num_vars() != 1) {
            return bad("curve and normal must be univariate jets");
        }
        let one = Jet::one(1, jets::min_order(&gamma));
        if !(&jets::dot(&gamma, &gamma) - &one).is_zero() {
            return bad("|gamma|^2 != 1");
        }
        let one = Jet::one(1, jets::min_order(&nu));
        if !(&jets::dot(&nu, &nu) - &one).is_zero() {
            return bad("|nu|^2 != 1");
        }
        if !jets::dot(&gamma, &nu).is_zero() {
            return bad("gamma . nu != 0");
        }
        if !jets::dot(&jets::derive_vec(&gamma, 0), &nu).is_zero() {
            return bad("gamma' . nu != 0");
        }
        Ok(SphericalFrontalCurve { gamma, nu })
    }

    /// Co-orients a spherical curve by `ν = γ × γ' / |γ × γ'|`, after
    /// removing the common zero of `γ × γ'` at the base point.
    pub fn from_curve(gamma: JetVector) -> Result<SphericalFrontalCurve> {
        if gamma.len() != 3 {
            return Err(Error::InvalidSphericalCurve("curve must lie in R^3".into()));
        }
        let w = jets::cross3(&gamma, &jets::derive_vec(&gamma, 0));
        let v = w
            .iter()
            .filter_map(Jet::valuation)
            .min()
            .ok_or_else(|| Error::InvalidSphericalCurve("gamma x gamma' vanishes".into()))?;
        let tv = Jet::monomial(1, jets::min_order(&w), [v, 0], Rational::one());
        let w: JetVector = w.iter().map(|c| c.quotient(&tv)).collect::<Result<_>>()?;
        let norm = jets::dot(&w, &w).sqrt_unit().map_err(|_| {
            Error::InvalidSphericalCurve("|gamma x gamma'| is not a rational unit".into())
        })?;
        let inv = norm.inverse()?;
        let nu = jets::scale_vec(&w, &inv);
        SphericalFrontalCurve::new(gamma, nu)
    }

    pub fn order(&self) -> u32 {
        jets::min_order(&self.gamma).min(jets::min_order(&self.nu))
    }
}

/// `(γ, ν) ↦ (ν, γ)`, an involution on valid inputs.
pub fn spherical_dual(c: &SphericalFrontalCurve) -> Result<SphericalFrontalCurve> {
    SphericalFrontalCurve::new(c.nu.clone(), c.gamma.clone())
}

/// Taylor jets of `cos` and `sin` at 0.
pub fn cos_sin_jets(order: u32) -> (Jet, Jet) {
    let mut cos = Jet::zero(1, order);
    let mut sin = Jet::zero(1, order);
    let mut fact = Rational::one();
    for k in 0..=order {
        if k > 0 {
            fact *= scalar::int(k as i64);
        }
        let sign = if (k / 2) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let term = Jet::monomial(1, order, [k, 0], sign / &fact);
        if k % 2 == 0 {
            cos = &cos + &term;
        } else {
            sin = &sin + &term;
        }
    }
    (cos, sin)
}

/// Small circle at height `z` (radius `r`, `r² + z² = 1`) with its
/// outward-latitude normal, reparametrised by `φ` (`φ(0) = 0`).
pub fn small_circle(r: &Rational, z: &Rational, phi: &Jet) -> Result<SphericalFrontalCurve> {
    if r * r + z * z != Rational::one() {
        return Err(Error::InvalidSphericalCurve("r^2 + z^2 != 1".into()));
    }
    let (cos, sin) = cos_sin_jets(phi.order());
    let c = cos.compose(std::slice::from_ref(phi))?;
    let s = sin.compose(std::slice::from_ref(phi))?;
    let k = c.order();
    let gamma = vec![c.scale(r), s.scale(r), Jet::constant(1, k, z.clone())];
    let nu = vec![
        c.scale(&-z.clone()),
        s.scale(&-z.clone()),
        Jet::constant(1, k, r.clone()),
    ];
    SphericalFrontalCurve::new(gamma, nu)
}

/// Rotation `(I - A)^{-1} (I + A)` for the skew matrix of `(a, b, c)`.
pub fn cayley_rotation(a: &Rational, b: &Rational, c: &Rational) -> [[Rational; 3]; 3] {
    let one = Rational::one();
    let n = &one + a * a + b * b + c * c;
    let two = scalar::int(2);
    let m = [
        [
            &one + a * a - b * b - c * c,
            &two * (a * b - c),
            &two * (a * c + b),
        ],
        [
            &two * (a * b + c),
            &one - a * a + b * b - c * c,
            &two * (b * c - a),
        ],
        [
            &two * (a * c - b),
            &two * (b * c + a),
            &one - a * a - b * b + c * c,
        ],
    ];
    m.map(|row| row.map(|x| x / &n))
}

pub fn rotate(rot: &[[Rational; 3]; 3], v: &[Jet]) -> JetVector {
    (0..3)
        .map(|i| {
            let mut acc = v[0].scale(&rot[i][0]);
            for j in 1..3 {
                acc = &acc + &v[j].scale(&rot[i][j]);
            }
            acc
        })
        .collect()
}

pub fn rotate_curve(
    rot: &[[Rational; 3]; 3],
    c: &SphericalFrontalCurve,
) -> Result<SphericalFrontalCurve> {
    SphericalFrontalCurve::new(rotate(rot, &c.gamma), rotate(rot, &c.nu))
}

/// Homogeneous jet curve in `R^4`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveCurve {
    pub homogeneous: JetVector,
}

impl ProjectiveCurve {
    pub fn new(homogeneous: JetVector) -> Result<ProjectiveCurve> {
        if homogeneous.len() != 4 || homogeneous.iter().any(|j| j.num_vars() != 1) {
            return Err(Error::usage("projective curves are univariate jets in R^4"));
        }
        if homogeneous.iter().all(|j| j.constant_term().is_zero()) {
            return Err(Error::usage(
                "homogeneous coordinates vanish at the base point",
            ));
        }
        Ok(ProjectiveCurve { homogeneous })
    }

    /// `(1, γ)` for an affine space curve.
    pub fn from_affine(gamma: &MapGerm) -> Result<ProjectiveCurve> {
        if gamma.kind() != GermKind::Curve || gamma.target_dim() != 3 {
            return Err(Error::usage("expected a curve in R^3"));
        }
        let mut h = vec![Jet::one(1, PROJECTIVE_ORDER)];
        h.extend(gamma.to_jets(PROJECTIVE_ORDER));
        ProjectiveCurve::new(h)
    }

    /// Index of the chart: the first component with nonzero constant term.
    pub fn pivot(&self) -> usize {
        self.homogeneous
            .iter()
            .position(|j| !j.constant_term().is_zero())
            .expect("validated on construction")
    }

    /// Affine curve in the pivot chart: the other three coordinates divided
    /// by the pivot one.
    pub fn affine(&self) -> Result<JetVector> {
        let p = self.pivot();
        let inv = self.homogeneous[p].inverse()?;
        Ok(self
            .homogeneous
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != p)
            .map(|(_, j)| j * &inv)
            .collect())
    }

    pub fn curve_type(&self) -> Result<CurveType> {
        let a = self.affine()?;
        let cutoff = jets::min_order(&a);
        curve_type_of_jets(&a, cutoff)
    }

    /// Equal affine representatives, compared to the common jet order.
    pub fn affine_equal(&self, other: &ProjectiveCurve) -> Result<bool> {
        let (a, b) = (self.affine()?, other.affine()?);
        let k = jets::min_order(&a).min(jets::min_order(&b));
        Ok(self.pivot() == other.pivot() && jets::truncate_vec(&a, k) == jets::truncate_vec(&b, k))
    }

    /// Same point of `P^3` along the curve: all 2x2 minors vanish.
    pub fn projectively_equal(&self, other: &ProjectiveCurve) -> bool {
        let (a, b) = (&self.homogeneous, &other.homogeneous);
        for i in 0..4 {
            for j in (i + 1)..4 {
                if !(&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Signed 3x3 minors of the rows `(a, b, c)` in `R^4`.
fn cross4(a: &[Jet], b: &[Jet], c: &[Jet]) -> JetVector {
    (0..4)
        .map(|skip| {
            let cols: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
            let m = |r: &[Jet], k: usize| r[cols[k]].clone();
            let det = &(&(&m(a, 0) * &(&(&m(b, 1) * &m(c, 2)) - &(&m(b, 2) * &m(c, 1))))
                - &(&m(a, 1) * &(&(&m(b, 0) * &m(c, 2)) - &(&m(b, 2) * &m(c, 0)))))
                + &(&m(a, 2) * &(&(&m(b, 0) * &m(c, 1)) - &(&m(b, 1) * &m(c, 0))));
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Annihilator of the osculating 3-space, divided by its common zero at the
/// base point and scaled so its pivot component has constant term 1.
pub fn projective_dual_curve(c: &ProjectiveCurve) -> Result<ProjectiveCurve> {
    let g = &c.homogeneous;
    let g1 = jets::derive_vec(g, 0);
    let g2 = jets::derive_vec(&g1, 0);
    let delta = cross4(g, &g1, &g2);
    let order = jets::min_order(&delta);
    let v = delta
        .iter()
        .filter_map(Jet::valuation)
        .min()
        .ok_or(Error::NotFiniteType(order))?;
    let tv = Jet::monomial(1, order, [v, 0], Rational::one());
    let delta: JetVector = delta
        .iter()
        .map(|d| d.quotient(&tv))
        .collect::<Result<_>>()?;
    let lead = delta
        .iter()
        .map(Jet::constant_term)
        .find(|x| !x.is_zero())
        .expect("valuation removed");
    let inv = Rational::one() / lead;
    let dual = ProjectiveCurve::new(delta.iter().map(|d| d.scale(&inv)).collect())?;
    if let CurveType::NotFiniteType { cutoff } = c.curve_type()? {
        return Err(Error::NotFiniteType(cutoff));
    }
    Ok(dual)
}

/// Type of the dual curve predicted from `(a_1, a_2, a_3)`.
pub fn dual_type(a: &[u32]) -> Option<Vec<u32>> {
    match a {
        [a1, a2, a3] => Some(vec![a3 - a2, a3 - a1, *a3]),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct A3Row {
    pub primal_type: CurveType,
    pub dual_type: CurveType,
    pub primal: SingularityClass,
    pub dual: SingularityClass,
}

/// Tangent-surface classes of a space curve and of its projective dual.
pub fn a3_table_row(c: &ProjectiveCurve) -> Result<A3Row> {
    let dual = projective_dual_curve(c)?;
    let flat = Connection::flat(3);
    let pa = c.affine()?;
    let da = dual.affine()?;
    Ok(A3Row {
        primal_type: c.curve_type()?,
        dual_type: dual.curve_type()?,
        primal: classify_by_curve_jets(&pa, &flat)?,
        dual: classify_by_curve_jets(&da, &flat)?,
    })
}

/// The four seed curves of the table: types (1,2,3), (2,3,4), (1,2,4), (1,3,4).
pub fn a3_seed_curves() -> Vec<MapGerm> {
    [
        "curve R->R^3: t, t^2, t^3",
        "curve R->R^3: t^2, t^3, t^4",
        "curve R->R^3: t, t^2, t^4",
        "curve R->R^3: t, t^3, t^4",
    ]
    .iter()
    .map(|s| crate::germs::parse_germ(s).expect("seed curves parse"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::SingularityTag;
    use crate::germs::parse_germ;
    use crate::scalar::{int, rat};

    fn texts(v: &[Jet]) -> Vec<String> {
        v.iter().map(|j| j.to_text(&["t"])).collect()
    }

    #[test]
    fn great_circle_collapses() {
        let (c, s) = cos_sin_jets(9);
        let z = Jet::zero(1, 9);
        let gamma = vec![c, s, z.clone()];
        let nu = vec![z.clone(), z, Jet::one(1, 9)];
        let curve = SphericalFrontalCurve::new(gamma, nu).unwrap();
        let d = spherical_dual(&curve).unwrap();
        assert_eq!(texts(&d.gamma), ["0", "0", "1"]);
        assert_eq!(spherical_dual(&d).unwrap(), curve);
    }

    #[test]
    fn polar_small_circle() {
        let phi = Jet::var(1, 10, 0);
        let c = small_circle(&rat(3, 5), &rat(4, 5), &phi).unwrap();
        let d = spherical_dual(&c).unwrap();
        // dual sits at height 3/5 with radius 4/5
        assert_eq!(d.gamma[2].to_text(&["t"]), "3/5");
        let rr = &(&d.gamma[0] * &d.gamma[0]) + &(&d.gamma[1] * &d.gamma[1]);
        assert_eq!(rr.to_text(&["t"]), "16/25");
        assert_eq!(spherical_dual(&d).unwrap(), c);
    }

    #[test]
    fn rotated_and_reparametrised() {
        let phi = Jet::from_terms(
            1,
            8,
            [([1, 0], int(1)), ([2, 0], rat(1, 2)), ([3, 0], int(-1))],
        )
        .unwrap();
        let c = small_circle(&rat(5, 13), &rat(12, 13), &phi).unwrap();
        let rot = cayley_rotation(&rat(1, 2), &int(-1), &rat(2, 3));
        let c = rotate_curve(&rot, &c).unwrap();
        assert_eq!(spherical_dual(&spherical_dual(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn invalid_spherical_curves() {
        let z = Jet::zero(1, 5);
        let t = Jet::var(1, 5, 0);
        let gamma = vec![Jet::one(1, 5), t, z.clone()];
        let nu = vec![z.clone(), z, Jet::one(1, 5)];
        assert!(matches!(
            SphericalFrontalCurve::new(gamma, nu),
            Err(Error::InvalidSphericalCurve(_))
        ));
    }

    #[test]
    fn co_orientation_from_curve() {
        let phi = Jet::var(1, 8, 0);
        let c = small_circle(&rat(3, 5), &rat(4, 5), &phi).unwrap();
        let d = SphericalFrontalCurve::from_curve(c.gamma.clone()).unwrap();
        let dot = jets::dot(&d.nu, &c.nu);
        assert!(dot.constant_term() == int(1) || dot.constant_term() == int(-1));
    }

    #[test]
    fn twisted_cubic_dual() {
        let c = ProjectiveCurve::from_affine(&parse_germ("curve R->R^3: t, t^2, t^3").unwrap())
            .unwrap();
        let d = projective_dual_curve(&c).unwrap();
        assert_eq!(texts(&d.homogeneous), ["-t^3", "3*t^2", "-3*t", "1"]);
        for k in 0..3u32 {
            let mut g = c.homogeneous.clone();
            for _ in 0..k {
                g = jets::derive_vec(&g, 0);
            }
            assert!(jets::dot(&d.homogeneous, &g).is_zero());
        }
        let dd = projective_dual_curve(&d).unwrap();
        assert!(dd.projectively_equal(&c));
        assert!(dd.affine_equal(&c).unwrap());
    }

    #[test]
    fn dual_types() {
        let c = ProjectiveCurve::from_affine(&parse_germ("curve R->R^3: t^2, t^3, t^4").unwrap())
            .unwrap();
        let d = projective_dual_curve(&c).unwrap();
        assert_eq!(d.curve_type().unwrap(), CurveType::Finite(vec![1, 2, 4]));
        assert_eq!(dual_type(&[2, 3, 4]), Some(vec![1, 2, 4]));
        assert_eq!(dual_type(&[1, 3, 4]), Some(vec![1, 3, 4]));
    }

    #[test]
    fn linear_curve_has_no_dual() {
        let c =
            ProjectiveCurve::from_affine(&parse_germ("curve R->R^3: t, 0, 0").unwrap()).unwrap();
        assert!(matches!(
            projective_dual_curve(&c),
            Err(Error::NotFiniteType(_))
        ));
    }

    #[test]
    fn table() {
        let expected = [
            (SingularityTag::CuspidalEdge, SingularityTag::CuspidalEdge),
            (SingularityTag::Swallowtail, SingularityTag::FoldedUmbrella),
            (SingularityTag::FoldedUmbrella, SingularityTag::Swallowtail),
            (SingularityTag::Unrecognized, SingularityTag::Unrecognized),
        ];
        for (g, (p, d)) in a3_seed_curves().iter().zip(expected) {
            let row = a3_table_row(&ProjectiveCurve::from_affine(g).unwrap()).unwrap();
            assert_eq!((row.primal.tag, row.dual.tag), (p, d), "{g}");
            let a = row.primal_type.tuple().unwrap();
            assert_eq!(row.dual_type.tuple().unwrap(), dual_type(a).unwrap());
        }
    }
}
