//! Frontal structure of a germ: Legendre lift in Grassmannian coordinates,
//! density function, singular locus, kernel field and lift-plane frames.
//!
//! Germs enter as jets centred at the base point (`n` source variables,
//! `m` target components). A chart is a choice of `n` target coordinates
//! `x^{c_1}, ..., x^{c_n}`; the lift plane is then spanned by
//! `h_j = e_{c_j} + sum_k a_j^k e_k` and the contact forms are
//! `theta^k = dx^k - sum_j a_j^k dx^{c_j}`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jets::{self, Jet, JetVector};
use crate::linalg;
use crate::scalar::Rational;

/// A Legendre lift in a Grassmannian chart.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannLift {
    /// Germ components.
    pub base: JetVector,
    /// Target coordinates: the `n` chart coordinates, then the rest ascending.
    pub chart: Vec<usize>,
    /// `slopes[i][j]` is `a_j^k` for `k = chart[n + i]`.
    pub slopes: Vec<Vec<Jet>>,
    /// The chart's `n x n` Jacobian minor.
    pub pivot_minor: Jet,
}

fn partials(f: &[Jet]) -> Vec<JetVector> {
    let n = f[0].num_vars();
    (0..n).map(|v| jets::derive_vec(f, v)).collect()
}

fn minor(p: &[JetVector], cols: &[usize]) -> Jet {
    match cols {
        [a] => p[0][*a].clone(),
        [a, b] => &(&p[0][*a] * &p[1][*b]) - &(&p[1][*a] * &p[0][*b]),
        _ => unreachable!("source dimension is 1 or 2"),
    }
}

fn subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    match n {
        1 => (0..m).map(|i| vec![i]).collect(),
        _ => (0..m)
            .flat_map(|i| ((i + 1)..m).map(move |j| vec![i, j]))
            .collect(),
    }
}

fn check_germ(f: &[Jet]) -> Result<usize> {
    let Some(first) = f.first() else {
        return Err(Error::usage("germ without components"));
    };
    let n = first.num_vars();
    if f.iter().any(|j| j.num_vars() != n) {
        return Err(Error::usage("components over different source variables"));
    }
    if f.len() < n {
        return Err(Error::usage("target dimension below source dimension"));
    }
    Ok(n)
}

/// Chart with the minimal-valuation Jacobian minor; ties go to the
/// lexicographically first coordinate set.
pub fn choose_chart(f: &[Jet]) -> Result<(Vec<usize>, Jet)> {
    let n = check_germ(f)?;
    let p = partials(f);
    let mut best: Option<(u32, Vec<usize>, Jet)> = None;
    for cols in subsets(f.len(), n) {
        let d = minor(&p, &cols);
        if let Some(v) = d.valuation() {
            if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                best = Some((v, cols, d));
            }
        }
    }
    best.map(|(_, c, d)| (c, d)).ok_or(Error::NoValidChart)
}

/// Legendre lift by exact division of the Cramer numerators by the chart minor.
pub fn legendre_lift(f: &[Jet]) -> Result<GrassmannLift> {
    let n = check_germ(f)?;
    let m = f.len();
    let (cols, d) = choose_chart(f)?;
    let p = partials(f);
    let rest: Vec<usize> = (0..m).filter(|k| !cols.contains(k)).collect();
    let mut slopes = Vec::with_capacity(rest.len());
    for &k in &rest {
        let numerators: Vec<Jet> = (0..n)
            .map(|j| {
                let mut c = cols.clone();
                c[j] = k;
                minor(&p, &c)
            })
            .collect();
        let row = numerators
            .iter()
            .map(|num| {
                num.quotient(&d).map_err(|e| {
                    Error::NotProperFrontal(format!(
                        "slope for coordinate {} is not a jet: {e}",
                        k + 1
                    ))
                })
            })
            .collect::<Result<Vec<Jet>>>()?;
        slopes.push(row);
    }
    let mut chart = cols;
    chart.extend(rest);
    Ok(GrassmannLift {
        base: f.to_vec(),
        chart,
        slopes,
        pivot_minor: d,
    })
}

impl GrassmannLift {
    pub fn source_dim(&self) -> usize {
        self.base[0].num_vars()
    }

    pub fn target_dim(&self) -> usize {
        self.base.len()
    }

    /// Order to which the slopes are known.
    pub fn order(&self) -> u32 {
        self.slopes
            .iter()
            .flatten()
            .map(Jet::order)
            .min()
            .unwrap_or_else(|| jets::min_order(&self.base).saturating_sub(1))
    }

    /// Lift-plane frame `h_1, ..., h_n`.
    pub fn frame(&self) -> Vec<JetVector> {
        let n = self.source_dim();
        let m = self.target_dim();
        let k = self.order();
        (0..n)
            .map(|j| {
                let mut h = vec![Jet::zero(n, k); m];
                h[self.chart[j]] = Jet::one(n, k);
                for (i, row) in self.slopes.iter().enumerate() {
                    h[self.chart[n + i]] = row[j].truncate(k);
                }
                h
            })
            .collect()
    }

    /// `theta^k(d f / d x_v)` for every non-chart `k` and source variable `v`.
    pub fn residual_jets(&self) -> Vec<Jet> {
        let n = self.source_dim();
        let p = partials(&self.base);
        let mut out = Vec::new();
        for (i, row) in self.slopes.iter().enumerate() {
            let k = self.chart[n + i];
            for pv in &p {
                let mut r = pv[k].clone();
                for (j, a) in row.iter().enumerate() {
                    r = &r - &(a * &pv[self.chart[j]]);
                }
                out.push(r);
            }
        }
        out
    }

    /// Whether every contact form annihilates the differential to jet order.
    pub fn is_integral(&self) -> bool {
        self.residual_jets().iter().all(Jet::is_zero)
    }

    /// Largest float residual `|theta^k(d f / d x_v)|` over the sample points.
    pub fn grid_residual(&self, grid: &[Vec<f64>]) -> f64 {
        let n = self.source_dim();
        let p: Vec<Vec<_>> = partials(&self.base)
            .iter()
            .map(|pv| pv.iter().map(Jet::to_float).collect())
            .collect();
        let slopes: Vec<Vec<_>> = self
            .slopes
            .iter()
            .map(|row| row.iter().map(Jet::to_float).collect())
            .collect();
        grid.par_iter()
            .map(|x| {
                let mut worst = 0.0f64;
                for (i, row) in slopes.iter().enumerate() {
                    let k = self.chart[n + i];
                    for pv in &p {
                        let mut r = pv[k].eval(x);
                        for (j, a) in row.iter().enumerate() {
                            r -= a.eval(x) * pv[self.chart[j]].eval(x);
                        }
                        worst = worst.max(r.abs());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Largest float integrality residual of `lift` over `grid`.
pub fn integrality_residual(lift: &GrassmannLift, grid: &[Vec<f64>]) -> f64 {
    lift.grid_residual(grid)
}

/// Uniform `samples x samples` grid on `[lo, hi]^n`.
pub fn square_grid(n: usize, samples: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let step = if samples > 1 {
        (hi - lo) / (samples - 1) as f64
    } else {
        0.0
    };
    let axis: Vec<f64> = (0..samples).map(|i| lo + step * i as f64).collect();
    match n {
        1 => axis.iter().map(|&t| vec![t]).collect(),
        _ => axis
            .iter()
            .flat_map(|&t| axis.iter().map(move |&s| vec![t, s]))
            .collect(),
    }
}

/// Lift of `G = (g, h)` from witnesses `dh_j = sum_i a_j^i dg_i`.
pub fn lift_from_opening(
    g: &[Jet],
    extra: &[Jet],
    witnesses: &[Vec<Jet>],
) -> Result<GrassmannLift> {
    let n = check_germ(g)?;
    if g.len() != n {
        return Err(Error::usage("the closing germ must be equidimensional"));
    }
    if extra.len() != witnesses.len() || witnesses.iter().any(|w| w.len() != n) {
        return Err(Error::usage(
            "one witness row of length n per extra component",
        ));
    }
    let mut base = g.to_vec();
    base.extend(extra.iter().cloned());
    let lift = GrassmannLift {
        base,
        chart: (0..n + extra.len()).collect(),
        slopes: witnesses.to_vec(),
        pivot_minor: minor(&partials(g), &(0..n).collect::<Vec<_>>()),
    };
    for (j, r) in lift.residual_jets().iter().enumerate() {
        if !r.is_zero() {
            return Err(Error::WitnessInvalid(format!(
                "component {} leaves residual {}",
                n + j / n + 1,
                r.to_text(&["t", "s"])
            )));
        }
    }
    Ok(lift)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nondegeneracy {
    Regular,
    Nondegenerate,
    Degenerate,
}

impl Nondegeneracy {
    pub fn name(self) -> &'static str {
        match self {
            Nondegeneracy::Regular => "regular",
            Nondegeneracy::Nondegenerate => "nondegenerate",
            Nondegeneracy::Degenerate => "degenerate",
        }
    }
}

/// Parametrisation of `S(f)` near the base point: `x_solved = c(x_free)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub solved_var: usize,
    pub c: Jet,
}

impl SingularLocus {
    /// Source point `(t(τ), s(τ))` as univariate jets in τ.
    pub fn source_curve(&self) -> [Jet; 2] {
        let tau = Jet::var(1, self.c.order(), 0);
        if self.solved_var == 1 {
            [tau, self.c.clone()]
        } else {
            [self.c.clone(), tau]
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityData {
    pub sigma: Jet,
    pub frame: Vec<JetVector>,
    pub status: Nondegeneracy,
    pub singular_locus: Option<SingularLocus>,
    /// Corank of the differential at the base point.
    pub corank: usize,
}

impl DensityData {
    pub fn nondegenerate(&self) -> bool {
        self.status == Nondegeneracy::Nondegenerate
    }

    /// `(d sigma / dt, d sigma / ds)` at the base point.
    pub fn dsigma(&self) -> [Rational; 2] {
        [
            self.sigma.derive(0).constant_term(),
            self.sigma.derive(1).constant_term(),
        ]
    }
}

fn wedge2(a: &[Jet], b: &[Jet]) -> Vec<Jet> {
    let m = a.len();
    subsets(m, 2)
        .into_iter()
        .map(|c| &(&a[c[0]] * &b[c[1]]) - &(&a[c[1]] * &b[c[0]]))
        .collect()
}

/// Signed area density `f_t ^ f_s = sigma (h_1 ^ h_2)`.
///
/// Without a frame the lift-plane frame is used and `sigma` is the chart
/// minor. With a frame, `sigma` is read off the first wedge component that
/// is a unit and every other component is checked against it.
pub fn density_function(f: &[Jet], frame: Option<&[JetVector]>) -> Result<DensityData> {
    let n = check_germ(f)?;
    if n != 2 {
        return Err(Error::usage("density function needs a surface germ"));
    }
    let lift = legendre_lift(f)?;
    density_with_lift(f, &lift, frame)
}

/// [`density_function`] for an already computed lift.
pub fn density_with_lift(
    f: &[Jet],
    lift: &GrassmannLift,
    frame: Option<&[JetVector]>,
) -> Result<DensityData> {
    if check_germ(f)? != 2 {
        return Err(Error::usage("density function needs a surface germ"));
    }
    let default_frame = frame.is_none();
    let frame: Vec<JetVector> = match frame {
        Some(fr) => {
            if fr.len() != 2 || fr.iter().any(|h| h.len() != f.len()) {
                return Err(Error::usage("frame needs two vectors in the target"));
            }
            fr.to_vec()
        }
        None => lift.frame(),
    };
    let p = partials(f);
    let wf = wedge2(&p[0], &p[1]);
    let wh = wedge2(&frame[0], &frame[1]);
    let Some(i) = wh.iter().position(|w| !w.constant_term().is_zero()) else {
        return Err(Error::FrameDegenerate);
    };
    let ratio = wf[i].quotient(&wh[i])?;
    for (a, b) in wf.iter().zip(&wh) {
        let rhs = &ratio * b;
        if a.truncate(rhs.order()) != rhs.truncate(a.order()) {
            return Err(Error::FrameMismatch(
                "wedge components disagree on the density".into(),
            ));
        }
    }
    // The chart minor carries one more order than the quotient.
    let sigma = if default_frame {
        lift.pivot_minor.clone()
    } else {
        ratio
    };
    let j0: Vec<Vec<Rational>> = p.iter().map(|pv| jets::constants(pv)).collect();
    let corank = 2 - linalg::rank(&j0);
    let mut data = DensityData {
        sigma,
        frame,
        status: Nondegeneracy::Regular,
        singular_locus: None,
        corank,
    };
    classify_density(&mut data)?;
    Ok(data)
}

fn classify_density(data: &mut DensityData) -> Result<()> {
    if !data.sigma.constant_term().is_zero() {
        data.status = Nondegeneracy::Regular;
        return Ok(());
    }
    let [dt, ds] = data.dsigma();
    if dt.is_zero() && ds.is_zero() {
        data.status = Nondegeneracy::Degenerate;
        return Ok(());
    }
    data.status = Nondegeneracy::Nondegenerate;
    let solved_var = if ds.is_zero() { 0 } else { 1 };
    let c = data.sigma.implicit_solve(solved_var)?;
    data.singular_locus = Some(SingularLocus { solved_var, c });
    if data.corank != 1 {
        return Err(Error::NotProperFrontal(format!(
            "non-degenerate density with corank {}",
            data.corank
        )));
    }
    Ok(())
}

pub fn nondegeneracy(f: &[Jet]) -> Result<Nondegeneracy> {
    Ok(density_function(f, None)?.status)
}

/// Vector field on the source restricting to a kernel field of `f_*` on
/// `S(f)`, scaled so its first unit component has constant term 1.
pub fn kernel_field(f: &[Jet], lift: &GrassmannLift) -> Result<JetVector> {
    let n = check_germ(f)?;
    if n != 2 {
        return Err(Error::usage("kernel field needs a surface germ"));
    }
    for &c in &lift.chart[..2] {
        let g = &f[c];
        let gt = g.derive(0);
        let gs = g.derive(1);
        if gt.constant_term().is_zero() && gs.constant_term().is_zero() {
            continue;
        }
        let eta = [gs, -gt];
        let lead = eta
            .iter()
            .map(Jet::constant_term)
            .find(|c| !c.is_zero())
            .expect("nonzero differential");
        let inv = Rational::one() / lead;
        return Ok(eta.iter().map(|j| j.scale(&inv)).collect());
    }
    Err(Error::NotNonDegenerate(
        "differential vanishes at the base point".into(),
    ))
}

/// `f_* eta` as target jets.
pub fn push_forward(f: &[Jet], eta: &[Jet]) -> JetVector {
    let p = partials(f);
    (0..f.len())
        .map(|i| &(&p[0][i] * &eta[0]) + &(&p[1][i] * &eta[1]))
        .collect()
}

/// `L = V_1 x V_2` for `m = 3`.
pub fn annihilator(v1: &[Jet], v2: &[Jet]) -> Result<JetVector> {
    if v1.len() != 3 || v2.len() != 3 {
        return Err(Error::usage(
            "annihilator is defined for target dimension 3",
        ));
    }
    Ok(jets::cross3(v1, v2))
}

/// Lift-plane data used by the recognition criteria.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontalFrameData {
    pub v1: JetVector,
    pub v2: JetVector,
    pub l: Option<JetVector>,
    pub eta: JetVector,
}

/// `V_1` spans the image of the differential at the base point, `V_2` is a
/// lift-frame vector transverse to it.
pub fn frame_data(f: &[Jet], lift: &GrassmannLift) -> Result<FrontalFrameData> {
    let h = lift.frame();
    let p = partials(f);
    let cols = &lift.chart[..2];
    // Image direction at 0 in the frame basis: the first nonzero column of
    // the chart Jacobian.
    let w = (0..2)
        .map(|v| [p[v][cols[0]].constant_term(), p[v][cols[1]].constant_term()])
        .find(|w| !(w[0].is_zero() && w[1].is_zero()))
        .ok_or_else(|| Error::NotNonDegenerate("differential vanishes at the base point".into()))?;
    let v1: JetVector = h[0]
        .iter()
        .zip(&h[1])
        .map(|(a, b)| &a.scale(&w[0]) + &b.scale(&w[1]))
        .collect();
    let v2 = if w[0].is_zero() {
        h[0].clone()
    } else {
        h[1].clone()
    };
    let l = if f.len() == 3 {
        Some(annihilator(&v1, &v2)?)
    } else {
        None
    };
    let eta = kernel_field(f, lift)?;
    Ok(FrontalFrameData { v1, v2, l, eta })
}

/// Whether `v2(0)` leaves the image of the differential at the base point.
pub fn v2_transverse(f: &[Jet], v2: &[Jet]) -> bool {
    let p = partials(f);
    let mut vs: Vec<Vec<Rational>> = p.iter().map(|pv| jets::constants(pv)).collect();
    let r = linalg::rank(&vs);
    vs.push(jets::constants(v2));
    linalg::rank(&vs) > r
}

/// Float evaluation of `sigma` and the Jacobian rank at a point.
pub fn jacobian_rank_f64(f: &[Jet], x: &[f64], tol: f64) -> usize {
    let p = partials(f);
    let a: Vec<f64> = p[0].iter().map(|j| j.eval_f64(x)).collect();
    let b: Vec<f64> = p[1].iter().map(|j| j.eval_f64(x)).collect();
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let wedge = subsets(a.len(), 2)
        .iter()
        .map(|c| (a[c[0]] * b[c[1]] - a[c[1]] * b[c[0]]).abs())
        .fold(0.0, f64::max);
    if wedge > tol * (na * nb).max(1.0) {
        2
    } else if na > tol || nb > tol {
        1
    } else {
        0
    }
}
