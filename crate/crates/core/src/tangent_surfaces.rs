//! Tangent surfaces of directed curves: affine rulings and geodesic rulings
//! under a connection with polynomial Christoffel symbols.

use num_traits::Zero;
use serde_json::Value;

use crate::curve_analysis::direction_frame;
use crate::error::{Error, Result};
use crate::germs::{parse_poly, GermKind, MapGerm};
use crate::jets::{self, Jet, JetVector};
use crate::poly::Poly;
use crate::scalar::{self, Rational};

/// Affine connection on `R^m`; `christoffel[i][j][k]` is `Γ^i_{jk}` as a
/// polynomial in `x1..xm`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    christoffel: Vec<Vec<Vec<Poly>>>,
    torsion_free: bool,
}

impl Connection {
    pub fn new(christoffel: Vec<Vec<Vec<Poly>>>, torsion_free: bool) -> Result<Connection> {
        let m = christoffel.len();
        if m == 0 {
            return Err(Error::usage("connection of dimension 0"));
        }
        for row in &christoffel {
            if row.len() != m || row.iter().any(|r| r.len() != m) {
                return Err(Error::usage("Christoffel array must be m x m x m"));
            }
            if row.iter().flatten().any(|p| p.nvars() != m) {
                return Err(Error::usage(
                    "Christoffel symbols must be polynomials in x1..xm",
                ));
            }
        }
        if torsion_free {
            for (i, row) in christoffel.iter().enumerate() {
                for j in 0..m {
                    for k in (j + 1)..m {
                        if row[j][k] != row[k][j] {
                            return Err(Error::usage(format!(
                                "torsion-free connection with Γ^{}_{}{} != Γ^{}_{}{}",
                                i + 1,
                                j + 1,
                                k + 1,
                                i + 1,
                                k + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(Connection {
            dim: m,
            christoffel,
            torsion_free,
        })
    }

    pub fn flat(m: usize) -> Connection {
        Connection {
            dim: m,
            christoffel: vec![vec![vec![Poly::zero(m); m]; m]; m],
            torsion_free: true,
        }
    }

    /// `Γ^i_{jk} = x^i δ_{jk}`: geodesics through the unit sphere with
    /// tangent initial velocity are great circles.
    pub fn sphere_like(m: usize) -> Connection {
        let christoffel = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m)
                            .map(|k| {
                                if j == k {
                                    Poly::var(m, i)
                                } else {
                                    Poly::zero(m)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Connection {
            dim: m,
            christoffel,
            torsion_free: true,
        }
    }

    /// Reads `{"dimension": m, "torsion_free": bool, "christoffel": [[["x1", ..]]]}`
    /// or `{"dimension": m, "preset": "flat" | "sphere"}`.
    pub fn from_json(text: &str) -> Result<Connection> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::usage(format!("connection JSON: {e}")))?;
        let m = v
            .get("dimension")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::usage("connection JSON needs an integer \"dimension\""))?
            as usize;
        if m == 0 || m > 64 {
            return Err(Error::usage(
                "connection dimension must be between 1 and 64",
            ));
        }
        if let Some(preset) = v.get("preset") {
            return match preset.as_str() {
                Some("flat") => Ok(Connection::flat(m)),
                Some("sphere") => Ok(Connection::sphere_like(m)),
                _ => Err(Error::usage("unknown connection preset")),
            };
        }
        let torsion_free = v
            .get("torsion_free")
            .map(|t| {
                t.as_bool()
                    .ok_or_else(|| Error::usage("\"torsion_free\" must be a boolean"))
            })
            .transpose()?
            .unwrap_or(true);
        let Some(gamma) = v.get("christoffel") else {
            return Ok(Connection::flat(m));
        };
        let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let bad = || Error::usage("\"christoffel\" must be an m x m x m array of strings");
        let christoffel = gamma
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|a| {
                a.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|b| {
                        b.as_array()
                            .ok_or_else(bad)?
                            .iter()
                            .map(|c| match c {
                                Value::String(s) => parse_poly(s, &names),
                                Value::Number(n) if n.is_i64() => {
                                    Ok(Poly::constant(m, scalar::int(n.as_i64().unwrap())))
                                }
                                _ => Err(bad()),
                            })
                            .collect::<Result<Vec<Poly>>>()
                    })
                    .collect::<Result<Vec<Vec<Poly>>>>()
            })
            .collect::<Result<Vec<Vec<Vec<Poly>>>>>()?;
        if christoffel.len() != m {
            return Err(bad());
        }
        Connection::new(christoffel, torsion_free)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn torsion_free(&self) -> bool {
        self.torsion_free
    }

    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.christoffel[i][j][k]
    }

    pub fn is_flat(&self) -> bool {
        self.christoffel
            .iter()
            .flatten()
            .flatten()
            .all(Poly::is_zero)
    }

    /// `Γ(x)(a, b)^i = Σ Γ^i_{jk}(x) a^j b^k` for jets along a map `x`.
    pub fn contract(&self, x: &[Jet], a: &[Jet], b: &[Jet]) -> JetVector {
        let m = self.dim;
        assert!(x.len() == m && a.len() == m && b.len() == m);
        let nv = x[0].num_vars();
        let order = jets::min_order(x)
            .min(jets::min_order(a))
            .min(jets::min_order(b));
        (0..m)
            .map(|i| {
                let mut acc = Jet::zero(nv, order);
                for j in 0..m {
                    for k in 0..m {
                        let g = &self.christoffel[i][j][k];
                        if g.is_zero() || a[j].is_zero() || b[k].is_zero() {
                            continue;
                        }
                        let term = &(&g.eval_jets(x) * &a[j]) * &b[k];
                        acc = &acc + &term;
                    }
                }
                acc
            })
            .collect()
    }

    /// Covariant derivative `∂_v W + Γ(x)(∂_v x, W)` along a map `x` in source
    /// variable `var`.
    pub fn covariant_derivative(&self, x: &[Jet], w: &[Jet], var: usize) -> JetVector {
        let dx = jets::derive_vec(x, var);
        let dw = jets::derive_vec(w, var);
        jets::add_vec(&dw, &self.contract(x, &dx, w))
    }
}

/// `Tan(γ)(t, s) = γ(t) + s u(t)` with `u` from the direction frame,
/// centred at the curve's base point.
pub fn tangent_surface_affine(gamma: &MapGerm) -> Result<MapGerm> {
    if gamma.kind() != GermKind::Curve {
        return Err(Error::usage("tangent surfaces are built from curves"));
    }
    let g = gamma.to_exact_jets();
    let frame = direction_frame(&g)?;
    let comps = g
        .iter()
        .zip(&frame.u)
        .map(|(gi, ui)| lift_to_surface(gi).add(&lift_to_surface(ui).mul(&Poly::var(2, 1))))
        .collect();
    MapGerm::surface(comps)
}

fn lift_to_surface(j: &Jet) -> Poly {
    Poly::from_terms(2, j.terms().map(|(e, c)| (vec![e[0], 0], c.clone())))
}

/// Power-series geodesic through `p` with velocity `v`, to order `k` in `s`.
pub fn geodesic_jet(
    conn: &Connection,
    p: &[Rational],
    v: &[Rational],
    k: u32,
) -> Result<JetVector> {
    let m = conn.dim;
    if p.len() != m || v.len() != m {
        return Err(Error::usage(
            "point and direction must lie in the connection's space",
        ));
    }
    let mut x: JetVector = (0..m)
        .map(|i| {
            Jet::from_terms(1, k, [([0, 0], p[i].clone()), ([1, 0], v[i].clone())])
                .expect("univariate terms")
        })
        .collect();
    if conn.is_flat() {
        return Ok(x);
    }
    for n in 0..k.saturating_sub(1) {
        let dx = jets::derive_vec(&x, 0);
        let acc = conn.contract(&x, &dx, &dx);
        let denom = scalar::int(((n + 2) * (n + 1)) as i64);
        for i in 0..m {
            let c = -acc[i].coeff1(n) / &denom;
            if !c.is_zero() {
                x[i] = &x[i] + &Jet::monomial(1, k, [n + 2, 0], c);
            }
        }
    }
    Ok(x)
}

/// Residual `x'' + Γ(x)(x', x')` of a jet curve.
pub fn geodesic_residual(conn: &Connection, x: &[Jet]) -> JetVector {
    let dx = jets::derive_vec(x, 0);
    let ddx = jets::derive_vec(&dx, 0);
    let ddx_order = jets::min_order(&ddx);
    let acc = jets::truncate_vec(&conn.contract(x, &dx, &dx), ddx_order);
    jets::add_vec(&ddx, &acc)
}

/// Tangent surface ruled by geodesics: `X(t, 0) = γ(t)`, `∂_s X(t, 0) = u(t)`,
/// solved degree by degree in `s` as a jet of order `k` in `(t, s)`.
pub fn tangent_surface_geodesic(gamma: &MapGerm, conn: &Connection, k: u32) -> Result<JetVector> {
    if gamma.kind() != GermKind::Curve {
        return Err(Error::usage("tangent surfaces are built from curves"));
    }
    let m = gamma.target_dim();
    if conn.dim != m {
        return Err(Error::usage(format!(
            "connection has dimension {}, curve lives in R^{m}",
            conn.dim
        )));
    }
    let g = gamma.to_jets(k.max(gamma.degree()).max(1));
    let frame = direction_frame(&g)?;
    let s = Jet::var(2, k, 1);
    let mut x: JetVector = g
        .iter()
        .zip(&frame.u)
        .map(|(gi, ui)| {
            let gi = gi.to_bivariate().extend_order(k).truncate(k);
            let ui = ui.to_bivariate().extend_order(k).truncate(k);
            &gi + &(&ui * &s)
        })
        .collect();
    if conn.is_flat() {
        return Ok(x);
    }
    for n in 0..k.saturating_sub(1) {
        let xs = jets::derive_vec(&x, 1);
        let acc = conn.contract(&x, &xs, &xs);
        let denom = Rational::from_integer(((n + 2) * (n + 1)).into());
        for i in 0..m {
            let slice = acc[i].slice(1, n);
            let terms: Vec<_> = slice
                .terms()
                .map(|(e, c)| ([e[0], n + 2], -c / &denom))
                .collect();
            if !terms.is_empty() {
                x[i] = &x[i] + &Jet::from_terms(2, k, terms)?;
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{normal_form, parse_germ, NormalFormTag};
    use crate::scalar::{int, rat};

    fn curve(text: &str) -> MapGerm {
        parse_germ(text).unwrap()
    }

    #[test]
    fn affine_normal_forms() {
        let ce = tangent_surface_affine(&curve("curve R->R^3: t, t^2, t^3")).unwrap();
        assert_eq!(ce.tuple_text(), "(t+s, t^2+2*s*t, t^3+3*s*t^2)");
        assert_eq!(ce, normal_form(NormalFormTag::CuspidalEdge, 3).unwrap());

        let sw = tangent_surface_affine(&curve("curve R->R^3: t^2, t^3, t^4")).unwrap();
        assert_eq!(sw.tuple_text(), "(s+t^2, 3/2*s*t+t^3, 2*s*t^2+t^4)");

        let ofu = tangent_surface_affine(&curve("curve R->R^4: t, t^2, t^4, t^5")).unwrap();
        assert_eq!(
            ofu,
            normal_form(NormalFormTag::OpenFoldedUmbrella, 4).unwrap()
        );
    }

    #[test]
    fn ruling_restrictions() {
        let g = curve("curve R->R^3: t^2, t^3, t^5");
        let tan = tangent_surface_affine(&g).unwrap().to_exact_jets();
        let u = direction_frame(&g.to_exact_jets()).unwrap().u;
        for i in 0..3 {
            assert_eq!(
                tan[i].slice(1, 0),
                g.to_exact_jets()[i].extend_order(tan[i].order())
            );
            assert_eq!(tan[i].slice(1, 1), u[i].extend_order(tan[i].order() - 1));
        }
    }

    #[test]
    fn geodesics() {
        let flat = Connection::flat(3);
        let p = [int(1), int(2), int(3)];
        let v = [int(0), rat(1, 2), int(-1)];
        let x = geodesic_jet(&flat, &p, &v, 6).unwrap();
        assert_eq!(x[1].to_text(&["s"]), "2+1/2*s");

        let sphere = Connection::sphere_like(3);
        let zero = [int(0), int(0), int(0)];
        let x = geodesic_jet(&sphere, &p, &zero, 6).unwrap();
        assert!(x
            .iter()
            .zip(&p)
            .all(|(j, c)| *j == Jet::constant(1, 6, c.clone())));

        // p cos s + v sin s
        let p = [int(0), int(0), int(1)];
        let v = [rat(3, 5), rat(4, 5), int(0)];
        let x = geodesic_jet(&sphere, &p, &v, 7).unwrap();
        assert_eq!(x[2].to_text(&["s"]), "1-1/2*s^2+1/24*s^4-1/720*s^6");
        assert_eq!(x[0].to_text(&["s"]), "3/5*s-1/10*s^3+1/200*s^5-1/8400*s^7");
        assert!(geodesic_residual(&sphere, &x).iter().all(Jet::is_zero));
    }

    #[test]
    fn flat_geodesic_surface_is_tan() {
        for text in ["curve R->R^3: t, t^2, t^3", "curve R->R^3: t^2, t^3, t^4"] {
            let g = curve(text);
            let jets = tangent_surface_geodesic(&g, &Connection::flat(3), 8).unwrap();
            let from_jets = MapGerm::from_jets(GermKind::Surface, &jets).unwrap();
            assert_eq!(
                from_jets.tuple_text(),
                tangent_surface_affine(&g).unwrap().tuple_text()
            );
        }
    }

    #[test]
    fn sphere_rulings_are_geodesics() {
        // great-circle arc (t, 1 - t^2/2) to order 6 is enough for an s-ruling check
        let g = curve("curve R->R^3: t, 0, 1-1/2*t^2");
        let sphere = Connection::sphere_like(3);
        let x = tangent_surface_geodesic(&g, &sphere, 6).unwrap();
        let xs = jets::derive_vec(&x, 1);
        let xss = jets::derive_vec(&xs, 1);
        let acc = sphere.contract(&x, &xs, &xs);
        for (a, b) in xss.iter().zip(&acc) {
            assert!((a + b).is_zero());
        }
    }

    #[test]
    fn connection_json() {
        let c = Connection::from_json(r#"{"dimension": 2, "preset": "sphere"}"#).unwrap();
        assert_eq!(c, Connection::sphere_like(2));
        let c = Connection::from_json(
            r#"{"dimension": 2, "christoffel": [[["x1", 0], [0, "x1"]], [["x2", 0], [0, "x2"]]]}"#,
        )
        .unwrap();
        assert_eq!(c, Connection::sphere_like(2));
        assert!(Connection::from_json(r#"{"dimension": 2}"#)
            .unwrap()
            .is_flat());
        let asym = r#"{"dimension": 2, "christoffel": [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(Connection::from_json(asym).is_err());
        let asym = asym.replace(
            "{\"dimension\": 2,",
            "{\"dimension\": 2, \"torsion_free\": false,",
        );
        assert!(!Connection::from_json(&asym).unwrap().torsion_free());
        assert!(Connection::from_json("[").is_err());
    }
}
