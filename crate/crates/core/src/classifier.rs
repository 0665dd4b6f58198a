//! Recognition of frontal surface singularities.
//!
//! Surfaces go through a decision tree on the density function, the
//! singular curve `γ = f∘c`, the characteristic function `ψ` and
//! independence of lift-plane vectors. Curves are classified through the
//! independence pattern of `∇γ, ..., ∇⁵γ` at the base point, which decides
//! the class of their tangent surface.

use std::fmt;

use num_traits::Zero;

use crate::curve_analysis::DEFAULT_ORDER;
use crate::error::{Error, Result};
use crate::frontal_core::{
    density_with_lift, frame_data, legendre_lift, push_forward, v2_transverse, Nondegeneracy,
};
use crate::germs::{GermKind, MapGerm, NormalFormTag};
use crate::jets::{self, Jet, JetVector};
use crate::linalg;
use crate::openings;
use crate::scalar::{fmt_rational, Rational};
use crate::tangent_surfaces::Connection;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityTag {
    Regular,
    Fold,
    CuspidalEdge,
    FoldedUmbrella,
    WhitneyCusp,
    Swallowtail,
    OpenSwallowtail,
    OpeningOfFold,
    OpeningOfWhitneyCusp,
    Degenerate,
    Unrecognized,
}

impl SingularityTag {
    pub const ALL: [SingularityTag; 11] = [
        SingularityTag::Regular,
        SingularityTag::Fold,
        SingularityTag::CuspidalEdge,
        SingularityTag::FoldedUmbrella,
        SingularityTag::WhitneyCusp,
        SingularityTag::Swallowtail,
        SingularityTag::OpenSwallowtail,
        SingularityTag::OpeningOfFold,
        SingularityTag::OpeningOfWhitneyCusp,
        SingularityTag::Degenerate,
        SingularityTag::Unrecognized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SingularityTag::Regular => "Regular",
            SingularityTag::Fold => "Fold",
            SingularityTag::CuspidalEdge => "CuspidalEdge",
            SingularityTag::FoldedUmbrella => "FoldedUmbrella",
            SingularityTag::WhitneyCusp => "WhitneyCusp",
            SingularityTag::Swallowtail => "Swallowtail",
            SingularityTag::OpenSwallowtail => "OpenSwallowtail",
            SingularityTag::OpeningOfFold => "OpeningOfFold",
            SingularityTag::OpeningOfWhitneyCusp => "OpeningOfWhitneyCusp",
            SingularityTag::Degenerate => "Degenerate",
            SingularityTag::Unrecognized => "Unrecognized",
        }
    }

    /// One of the six classes with a recognition criterion.
    pub fn is_recognized(self) -> bool {
        matches!(
            self,
            SingularityTag::Fold
                | SingularityTag::CuspidalEdge
                | SingularityTag::FoldedUmbrella
                | SingularityTag::WhitneyCusp
                | SingularityTag::Swallowtail
                | SingularityTag::OpenSwallowtail
        )
    }

    /// Class a catalog normal form is expected to land in.
    pub fn of_normal_form(tag: NormalFormTag) -> Option<SingularityTag> {
        match tag {
            NormalFormTag::CuspidalEdge => Some(SingularityTag::CuspidalEdge),
            NormalFormTag::Swallowtail => Some(SingularityTag::Swallowtail),
            NormalFormTag::FoldedUmbrella => Some(SingularityTag::FoldedUmbrella),
            NormalFormTag::OpenSwallowtail => Some(SingularityTag::OpenSwallowtail),
            NormalFormTag::WhitneyCusp => Some(SingularityTag::WhitneyCusp),
            NormalFormTag::Fold => Some(SingularityTag::Fold),
            NormalFormTag::OpenFoldedUmbrella | NormalFormTag::MondSurface => None,
        }
    }
}

impl fmt::Display for SingularityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A criterion and the exact values it was decided on.
#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub criterion: String,
    pub values: Vec<Rational>,
}

impl Evidence {
    fn new(criterion: &str, values: Vec<Rational>) -> Evidence {
        Evidence {
            criterion: criterion.to_string(),
            values,
        }
    }

    fn scalar(criterion: &str, v: Rational) -> Evidence {
        Evidence::new(criterion, vec![v])
    }

    pub fn value_strings(&self) -> Vec<String> {
        self.values.iter().map(fmt_rational).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityClass {
    pub tag: SingularityTag,
    pub evidence: Vec<Evidence>,
}

impl SingularityClass {
    fn new(tag: SingularityTag, evidence: Vec<Evidence>) -> SingularityClass {
        SingularityClass { tag, evidence }
    }

    pub fn witness(&self, criterion: &str) -> Option<&[Rational]> {
        self.evidence
            .iter()
            .find(|e| e.criterion == criterion)
            .map(|e| e.values.as_slice())
    }
}

/// `ψ(τ) = ⟨L(c(τ)), (∇^f_η V₂)(c(τ))⟩` with its ingredients along `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicFunction {
    pub psi: Jet,
    pub l_along_c: JetVector,
    pub nabla_v2_along_c: JetVector,
}

impl CharacteristicFunction {
    pub fn value(&self) -> Rational {
        self.psi.constant_term()
    }

    pub fn derivative(&self) -> Rational {
        self.psi.coeff1(1)
    }
}

/// `∇^f_η V = η¹ ∂_t V + η² ∂_s V + Γ(f)(f_* η, V)`.
pub fn nabla_eta(f: &[Jet], conn: &Connection, eta: &[Jet], v: &[Jet]) -> JetVector {
    let vt = jets::derive_vec(v, 0);
    let vs = jets::derive_vec(v, 1);
    let flat: JetVector = vt
        .iter()
        .zip(&vs)
        .map(|(a, b)| &(&eta[0] * a) + &(&eta[1] * b))
        .collect();
    if conn.is_flat() {
        return flat;
    }
    let fe = push_forward(f, eta);
    jets::add_vec(&flat, &conn.contract(f, &fe, v))
}

/// Covariant derivative along a curve: `W' + Γ(γ)(γ', W)`.
fn nabla_along(conn: &Connection, gamma: &[Jet], w: &[Jet]) -> JetVector {
    if conn.is_flat() {
        return jets::derive_vec(w, 0);
    }
    conn.covariant_derivative(gamma, w, 0)
}

fn check_surface(f: &[Jet], conn: &Connection) -> Result<()> {
    if f.is_empty() || f.iter().any(|j| j.num_vars() != 2) {
        return Err(Error::usage("expected a surface germ"));
    }
    if conn.dim() != f.len() {
        return Err(Error::usage(format!(
            "connection has dimension {}, germ lives in R^{}",
            conn.dim(),
            f.len()
        )));
    }
    Ok(())
}

struct SingularGeometry {
    gamma: JetVector,
    c: [Jet; 2],
    v1: JetVector,
    v2: JetVector,
    l: Option<JetVector>,
    eta: JetVector,
    nabla_v2: JetVector,
}

fn singular_geometry(
    f: &[Jet],
    conn: &Connection,
    eta_override: Option<&[Jet]>,
) -> Result<(Nondegeneracy, Vec<Evidence>, Option<SingularGeometry>)> {
    check_surface(f, conn)?;
    let lift = legendre_lift(f)?;
    let density = density_with_lift(f, &lift, None)?;
    let mut ev = vec![Evidence::scalar("sigma(p)", density.sigma.constant_term())];
    if density.status == Nondegeneracy::Regular {
        return Ok((density.status, ev, None));
    }
    ev.push(Evidence::new("dsigma(p)", density.dsigma().to_vec()));
    if density.status == Nondegeneracy::Degenerate {
        return Ok((density.status, ev, None));
    }
    let locus = density
        .singular_locus
        .expect("nondegenerate point has a locus");
    let data = frame_data(f, &lift)?;
    if !v2_transverse(f, &data.v2) {
        return Err(Error::V2NotTransverse);
    }
    let eta = eta_override.map_or(data.eta, <[Jet]>::to_vec);
    let c = locus.source_curve();
    let gamma = jets::compose_vec(f, &c)?;
    let nabla_v2 = nabla_eta(f, conn, &eta, &data.v2);
    Ok((
        density.status,
        ev,
        Some(SingularGeometry {
            gamma,
            c,
            v1: data.v1,
            v2: data.v2,
            l: data.l,
            eta,
            nabla_v2,
        }),
    ))
}

fn psi_of(geo: &SingularGeometry) -> Result<CharacteristicFunction> {
    let l = geo
        .l
        .as_ref()
        .ok_or_else(|| Error::usage("the characteristic function needs target dimension 3"))?;
    let l_c = jets::compose_vec(l, &geo.c)?;
    let w_c = jets::compose_vec(&geo.nabla_v2, &geo.c)?;
    Ok(CharacteristicFunction {
        psi: jets::dot(&l_c, &w_c),
        l_along_c: l_c,
        nabla_v2_along_c: w_c,
    })
}

/// Characteristic function at a nondegenerate singular point of a surface
/// in `R^3`.
pub fn characteristic_function(f: &[Jet], conn: &Connection) -> Result<CharacteristicFunction> {
    characteristic_function_with_eta(f, conn, None)
}

/// As [`characteristic_function`], with a caller-supplied extension of the
/// kernel field.
pub fn characteristic_function_with_eta(
    f: &[Jet],
    conn: &Connection,
    eta: Option<&[Jet]>,
) -> Result<CharacteristicFunction> {
    if f.len() != 3 {
        return Err(Error::usage(
            "the characteristic function needs target dimension 3",
        ));
    }
    match singular_geometry(f, conn, eta)? {
        (_, _, Some(geo)) => psi_of(&geo),
        (status, _, None) => Err(Error::NotNonDegenerate(format!(
            "base point is {}",
            status.name()
        ))),
    }
}

/// The kernel field used by the classifier.
pub fn classifier_kernel_field(f: &[Jet], conn: &Connection) -> Result<JetVector> {
    match singular_geometry(f, conn, None)? {
        (_, _, Some(geo)) => Ok(geo.eta),
        (status, _, None) => Err(Error::NotNonDegenerate(format!(
            "base point is {}",
            status.name()
        ))),
    }
}

/// Classifies a surface germ given as jets at the base point.
pub fn classify_surface_jets(f: &[Jet], conn: &Connection) -> Result<SingularityClass> {
    let (status, mut ev, geo) = singular_geometry(f, conn, None)?;
    let geo = match (status, geo) {
        (Nondegeneracy::Regular, _) => {
            return Ok(SingularityClass::new(SingularityTag::Regular, ev))
        }
        (Nondegeneracy::Degenerate, _) => {
            return Ok(SingularityClass::new(SingularityTag::Degenerate, ev))
        }
        (Nondegeneracy::Nondegenerate, Some(g)) => g,
        (Nondegeneracy::Nondegenerate, None) => {
            unreachable!("geometry is built at nondegenerate points")
        }
    };
    let m = f.len();
    let d1 = jets::derive_vec(&geo.gamma, 0);
    let fc = jets::constants(&d1);
    ev.push(Evidence::new("f_*c'(p)", fc.clone()));
    let at_p = |v: &[Jet]| jets::constants(v);

    if !fc.iter().all(Zero::is_zero) {
        let tag = match m {
            2 => SingularityTag::Fold,
            3 => {
                let psi = psi_of(&geo)?;
                ev.push(Evidence::scalar("psi(p)", psi.value()));
                if !psi.value().is_zero() {
                    SingularityTag::CuspidalEdge
                } else {
                    ev.push(Evidence::scalar("psi'(p)", psi.derivative()));
                    if !psi.derivative().is_zero() {
                        SingularityTag::FoldedUmbrella
                    } else {
                        SingularityTag::Unrecognized
                    }
                }
            }
            _ => {
                let r = linalg::rank(&[at_p(&geo.v1), at_p(&geo.v2), at_p(&geo.nabla_v2)]);
                ev.push(Evidence::scalar(
                    "rank(V1,V2,nabla_eta V2)(p)",
                    Rational::from_integer((r as i64).into()),
                ));
                if r == 3 {
                    SingularityTag::CuspidalEdge
                } else {
                    SingularityTag::OpeningOfFold
                }
            }
        };
        return Ok(SingularityClass::new(tag, ev));
    }

    let d2 = nabla_along(conn, &geo.gamma, &d1);
    let d2p = at_p(&d2);
    ev.push(Evidence::new("nabla^2 gamma(p)", d2p.clone()));
    if d2p.iter().all(Zero::is_zero) {
        return Ok(SingularityClass::new(SingularityTag::Unrecognized, ev));
    }
    let tag = match m {
        2 => SingularityTag::WhitneyCusp,
        3 => {
            let d = linalg::det(&[at_p(&geo.v1), at_p(&geo.v2), at_p(&geo.nabla_v2)]);
            ev.push(Evidence::scalar("det(V1,V2,nabla_eta V2)(p)", d.clone()));
            if d.is_zero() {
                SingularityTag::Unrecognized
            } else {
                SingularityTag::Swallowtail
            }
        }
        _ => {
            let w_c = jets::compose_vec(&geo.nabla_v2, &geo.c)?;
            let x = nabla_along(conn, &geo.gamma, &w_c);
            let r = linalg::rank(&[at_p(&geo.v1), at_p(&geo.v2), at_p(&geo.nabla_v2), at_p(&x)]);
            ev.push(Evidence::scalar(
                "rank(V1,V2,nabla_eta V2,nabla_t(nabla_eta V2))(p)",
                Rational::from_integer((r as i64).into()),
            ));
            if r == 4 {
                SingularityTag::OpenSwallowtail
            } else {
                SingularityTag::OpeningOfWhitneyCusp
            }
        }
    };
    Ok(SingularityClass::new(tag, ev))
}

/// Classifies a surface germ at its base point with jets of order 8.
pub fn classify_surface(f: &MapGerm, conn: &Connection) -> Result<SingularityClass> {
    if f.kind() != GermKind::Surface {
        return Err(Error::usage("classify_surface needs a surface germ"));
    }
    classify_surface_jets(&f.to_jets(DEFAULT_ORDER.max(f.degree())), conn)
}

/// `∇γ, ∇²γ, ..., ∇^k γ` along a curve.
pub fn covariant_derivatives(gamma: &[Jet], conn: &Connection, k: usize) -> Vec<JetVector> {
    let mut out = vec![jets::derive_vec(gamma, 0)];
    while out.len() < k {
        let next = nabla_along(conn, gamma, out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Class of `Tan(γ)` from the independence pattern of `∇^k γ` at the base
/// point.
pub fn classify_by_curve_jets(gamma: &[Jet], conn: &Connection) -> Result<SingularityClass> {
    if gamma.is_empty() || gamma.iter().any(|j| j.num_vars() != 1) {
        return Err(Error::usage("expected a curve"));
    }
    if conn.dim() != gamma.len() {
        return Err(Error::usage("connection and curve dimensions differ"));
    }
    let m = gamma.len();
    let d: Vec<Vec<Rational>> = covariant_derivatives(gamma, conn, 5)
        .iter()
        .map(|v| jets::constants(v))
        .collect();
    let mut ev = Vec::new();
    let mut test = |name: &str, idx: &[usize]| {
        let vs: Vec<Vec<Rational>> = idx.iter().map(|&i| d[i - 1].clone()).collect();
        let ok = linalg::independent(&vs);
        ev.push(Evidence::scalar(
            name,
            Rational::from_integer((linalg::rank(&vs) as i64).into()),
        ));
        ok
    };
    let first_zero = d[0].iter().all(Zero::is_zero);
    let tag = if m == 3 {
        if test("rank(nabla,nabla^2,nabla^3)", &[1, 2, 3]) {
            SingularityTag::CuspidalEdge
        } else if test("rank(nabla,nabla^2,nabla^4)", &[1, 2, 4]) {
            SingularityTag::FoldedUmbrella
        } else if first_zero && test("rank(nabla^2,nabla^3,nabla^4)", &[2, 3, 4]) {
            SingularityTag::Swallowtail
        } else {
            SingularityTag::Unrecognized
        }
    } else if m >= 4 {
        if test("rank(nabla,nabla^2,nabla^3)", &[1, 2, 3]) {
            SingularityTag::CuspidalEdge
        } else if first_zero && test("rank(nabla^2,...,nabla^5)", &[2, 3, 4, 5]) {
            SingularityTag::OpenSwallowtail
        } else {
            SingularityTag::Unrecognized
        }
    } else {
        SingularityTag::Unrecognized
    };
    ev.insert(0, Evidence::new("nabla gamma(a)", d[0].clone()));
    Ok(SingularityClass::new(tag, ev))
}

pub fn classify_by_curve(gamma: &MapGerm, conn: &Connection) -> Result<SingularityClass> {
    if gamma.kind() != GermKind::Curve {
        return Err(Error::usage("classify_by_curve needs a curve germ"));
    }
    classify_by_curve_jets(&gamma.to_jets(DEFAULT_ORDER.max(gamma.degree())), conn)
}

/// Graded dimensions `dim(𝒥_f ∩ {degree <= d})` for `d = 0..K-1`.
pub fn jacobi_module_signature(f: &MapGerm, k: u32) -> Result<Vec<usize>> {
    Ok(openings::jacobi_basis(f, k)?.graded_dimensions())
}
