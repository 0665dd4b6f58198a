//! Strategies and property checks shared by `properties` and `acceptance`.
#![allow(dead_code)]

use frontal_kit::frontal_core::{density_function, jacobian_rank_f64, legendre_lift};
use frontal_kit::germs::{parse_germ, MapGerm};
use frontal_kit::jets::{Jet, JetVector};
use frontal_kit::poly::Poly;
use frontal_kit::scalar::{int, rat, Rational};
use frontal_kit::tangent_surfaces::tangent_surface_affine;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const ORDER: u32 = 6;

type Check = std::result::Result<(), TestCaseError>;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn jet(nv: usize, order: u32) -> impl Strategy<Value = Jet> {
    let exps: Vec<[u32; 2]> = (0..=order)
        .flat_map(|d| (0..=d).map(move |i| [d - i, i]))
        .filter(|e| nv == 2 || e[1] == 0)
        .collect();
    prop::collection::vec(small_rational(), exps.len()).prop_map(move |cs| {
        let terms: Vec<_> = exps
            .iter()
            .copied()
            .zip(cs)
            .filter(|(_, c)| *c != int(0))
            .collect();
        Jet::from_terms(nv, order, terms).unwrap()
    })
}

pub fn unit_jet(nv: usize, order: u32) -> impl Strategy<Value = Jet> {
    (jet(nv, order), prop::sample::select(vec![-2i64, -1, 1, 3])).prop_map(move |(j, c)| {
        let shift = Jet::constant(nv, order, int(c) - j.constant_term());
        &j + &shift
    })
}

pub fn ring_axioms(a: &Jet, b: &Jet, c: &Jet) -> Check {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(&(a + b) - b, a.clone());
    prop_assert_eq!(a * &Jet::one(a.num_vars(), a.order()), a.clone());
    Ok(())
}

pub fn leibniz(a: &Jet, b: &Jet, var: usize) -> Check {
    let lhs = (a * b).derive(var);
    let rhs = &(&a.derive(var) * b) + &(a * &b.derive(var));
    prop_assert_eq!(lhs, rhs.truncate(a.order().min(b.order()) - 1));
    Ok(())
}

/// Divides `a * u * x_var^k` by `u * x_var^k`.
pub fn divide_multiply(a: &Jet, u: &Jet, k: u32, var: usize) -> Check {
    let n = a.num_vars();
    let order = a.order();
    let d = u * &Jet::var(n, order, var).pow(k);
    let q = (a * &d).quotient(&d).unwrap();
    prop_assert_eq!(q.order(), order - k);
    prop_assert_eq!(q, a.truncate(order - k));
    let inv = u.inverse().unwrap();
    prop_assert_eq!(&inv * u, Jet::one(n, order));
    Ok(())
}

/// `F = slope * x_var + (g minus its constant and x_var-linear terms)`.
pub fn implicit_solve(g: &Jet, slope: i64, var: usize) -> Check {
    let order = g.order();
    let mut e = [0u32; 2];
    e[var] = 1;
    let clean = &(g - &Jet::constant(2, order, g.constant_term()))
        - &Jet::monomial(2, order, e, g.coeff(e));
    let f = &clean + &Jet::monomial(2, order, e, int(slope));
    let c = f.implicit_solve(var).unwrap();
    let tau = Jet::var(1, order, 0);
    let inner = if var == 1 { [tau, c] } else { [c, tau] };
    prop_assert!(f.compose(&inner).unwrap().is_zero());
    Ok(())
}

/// Curves whose leading exponents follow a finite type, with random tails.
pub fn frontal_curve() -> impl Strategy<Value = MapGerm> {
    let types = vec![
        [1u32, 2, 3],
        [2, 3, 4],
        [1, 2, 4],
        [1, 3, 4],
        [1, 2, 5],
        [2, 3, 5],
    ];
    (
        prop::sample::select(types),
        prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 3),
    )
        .prop_map(|(a, tails)| {
            let comps = a
                .iter()
                .zip(tails)
                .map(|(&ai, tail)| {
                    Poly::from_terms(
                        1,
                        [
                            (vec![ai], int(1)),
                            (vec![ai + 1], int(tail[0])),
                            (vec![ai + 2], int(tail[1])),
                        ],
                    )
                })
                .collect();
            MapGerm::curve(comps).unwrap()
        })
}

/// Entries of a 2x2 jet matrix, invertible at the base point.
pub fn frame_matrix() -> impl Strategy<Value = [[Jet; 2]; 2]> {
    let inv = vec![
        [1i64, 0, 0, 1],
        [2, 1, 1, 1],
        [0, 1, -1, 0],
        [1, 2, 0, -1],
        [3, 1, 2, 1],
    ];
    (
        prop::sample::select(inv),
        prop::collection::vec(jet(2, 4), 4),
    )
        .prop_map(|(c, js)| {
            let entry = |k: usize| {
                let j = &js[k];
                &(j - &Jet::constant(2, 4, j.constant_term())) + &Jet::constant(2, 4, int(c[k]))
            };
            [[entry(0), entry(1)], [entry(2), entry(3)]]
        })
}

/// `h' = h A`.
fn change_frame(h: &[JetVector], a: &[[Jet; 2]; 2]) -> Vec<JetVector> {
    let m = h[0].len();
    (0..2)
        .map(|col| {
            (0..m)
                .map(|i| &(&h[0][i] * &a[0][col]) + &(&h[1][i] * &a[1][col]))
                .collect()
        })
        .collect()
}

/// Density in the lift frame and in a changed frame: same zero set, same verdict.
pub fn density_frame_equivalence(curve: &MapGerm, a: &[[Jet; 2]; 2]) -> Check {
    let f = tangent_surface_affine(curve).unwrap().to_jets(8);
    let d0 = density_function(&f, None).unwrap();
    let lift = legendre_lift(&f).unwrap();
    let d1 = density_function(&f, Some(&change_frame(&lift.frame(), a))).unwrap();
    prop_assert_eq!(d0.status, d1.status);
    prop_assert_eq!(d0.sigma.valuation(), d1.sigma.valuation());
    match (&d0.singular_locus, &d1.singular_locus) {
        (Some(l0), Some(l1)) => {
            prop_assert_eq!(l0.solved_var, l1.solved_var);
            let k = l0.c.order().min(l1.c.order());
            prop_assert_eq!(l0.c.truncate(k), l1.c.truncate(k));
        }
        (None, None) => {}
        _ => prop_assert!(false, "singular locus present in one frame only"),
    }
    Ok(())
}

/// Points on the sampled zero set of sigma drop rank; points off it do not.
pub fn sigma_zero_locus_is_rank_drop(curve: &MapGerm, tau: f64, off: f64) -> Check {
    let f = tangent_surface_affine(curve).unwrap().to_jets(8);
    let d = density_function(&f, None).unwrap();
    if let Some(l) = d.singular_locus {
        let c = l.c.eval_f64(&[tau]);
        let at = |dx: f64| {
            if l.solved_var == 1 {
                [tau, c + dx]
            } else {
                [c + dx, tau]
            }
        };
        prop_assert!(jacobian_rank_f64(&f, &at(0.0), 1e-9) < 2);
        let sig = d.sigma.eval_f64(&at(off));
        prop_assert_eq!(sig.abs() > 1e-9, jacobian_rank_f64(&f, &at(off), 1e-9) == 2);
    }
    Ok(())
}

pub fn token_soup() -> impl Strategy<Value = String> {
    let tokens = vec![
        "curve",
        "surface",
        "R",
        "R^2",
        "R^3",
        "->",
        "^",
        ":",
        ",",
        "t",
        "s",
        "u",
        "x",
        "(",
        ")",
        "+",
        "-",
        "*",
        "/",
        "0",
        "1",
        "2",
        "3/2",
        "64",
        "65",
        "999999999999",
        " ",
        "\n",
        "#c\n",
        "@",
        "2^",
        "t^",
        "s^3",
        ".",
        "1e5",
    ];
    prop::collection::vec(prop::sample::select(tokens), 0..40).prop_map(|t| t.join(" "))
}

/// Never panics; anything accepted round-trips through its canonical text.
pub fn parser_total(text: &str) -> Check {
    if let Ok(g) = parse_germ(text) {
        let canon = g.to_canonical();
        prop_assert_eq!(parse_germ(&canon).unwrap(), g);
    }
    Ok(())
}
