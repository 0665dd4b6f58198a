//! Float sampling of surface germs and Wavefront OBJ / CSV export.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frontal_core::{choose_chart, SingularLocus};
use crate::germs::MapGerm;
use crate::jets::Jet;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nt: usize,
    pub ns: usize,
    pub t: (f64, f64),
    pub s: (f64, f64),
}

impl Grid {
    /// `"AxB"` (or `"A×B"`) samples on the given range.
    pub fn parse(grid: &str, range: Option<&str>) -> Result<Grid> {
        let bad = || Error::usage(format!("grid must look like 100x100, got {grid:?}"));
        let (a, b) = grid.split_once(['x', '×', 'X']).ok_or_else(bad)?;
        let nt: usize = a.trim().parse().map_err(|_| bad())?;
        let ns: usize = b.trim().parse().map_err(|_| bad())?;
        if nt < 2 || ns < 2 || nt * ns > 4_000_000 {
            return Err(Error::usage("grid needs 2..2000 samples per side"));
        }
        let (t, s) = match range {
            None => ((-1.0, 1.0), (-1.0, 1.0)),
            Some(r) => {
                let v: Vec<f64> = r
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::usage(format!("bad range {r:?}")))?;
                match v[..] {
                    [lo, hi] => ((lo, hi), (lo, hi)),
                    [a, b, c, d] => ((a, b), (c, d)),
                    _ => return Err(Error::usage("range takes lo,hi or t0,t1,s0,s1")),
                }
            }
        };
        if !(t.0 < t.1 && s.0 < s.1) || [t.0, t.1, s.0, s.1].iter().any(|x| !x.is_finite()) {
            return Err(Error::usage("range bounds must be finite and increasing"));
        }
        Ok(Grid { nt, ns, t, s })
    }

    fn param(&self, i: usize, j: usize) -> [f64; 2] {
        let lerp =
            |(lo, hi): (f64, f64), k: usize, n: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        [lerp(self.t, i, self.nt), lerp(self.s, j, self.ns)]
    }
}

/// Samples in row-major order: `t` outer, `s` inner.
#[derive(Clone, Debug)]
pub struct Samples {
    pub grid: Grid,
    pub params: Vec<[f64; 2]>,
    pub points: Vec<Vec<f64>>,
    pub sigma: Vec<f64>,
}

/// Chart minor of the polynomial Jacobian, exact.
pub fn sigma_poly(f: &MapGerm) -> Poly {
    let comps = f.recentered_components();
    // minors have degree at most 2(deg - 1), so this order keeps them whole
    let k = 2 * f.degree().max(1);
    let jets: Vec<Jet> = comps.iter().map(|p| p.to_jet(k)).collect();
    let (a, b) = match choose_chart(&jets) {
        Ok((c, _)) => (c[0], c[1]),
        Err(_) => return Poly::zero(2),
    };
    let pa_t = comps[a].derive(0);
    let pa_s = comps[a].derive(1);
    let pb_t = comps[b].derive(0);
    let pb_s = comps[b].derive(1);
    pa_t.mul(&pb_s).sub(&pa_s.mul(&pb_t))
}

pub fn sample_surface(f: &MapGerm, grid: Grid) -> Samples {
    let comps = f.recentered_components();
    let sigma = sigma_poly(f);
    let params: Vec<[f64; 2]> = (0..grid.nt)
        .flat_map(|i| (0..grid.ns).map(move |j| (i, j)))
        .map(|(i, j)| grid.param(i, j))
        .collect();
    let points: Vec<Vec<f64>> = params
        .par_iter()
        .map(|x| comps.iter().map(|p| p.eval_f64(x)).collect())
        .collect();
    let sigma = params.par_iter().map(|x| sigma.eval_f64(x)).collect();
    Samples {
        grid,
        params,
        points,
        sigma,
    }
}

/// Image of the singular curve over the free variable's range.
pub fn singular_polyline(f: &MapGerm, locus: &SingularLocus, grid: Grid) -> Vec<Vec<f64>> {
    let comps = f.recentered_components();
    let (range, n) = if locus.solved_var == 1 {
        (grid.t, grid.nt)
    } else {
        (grid.s, grid.ns)
    };
    let c = locus.c.to_float();
    (0..n)
        .into_par_iter()
        .map(|k| {
            let tau = range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64;
            let other = c.eval(&[tau]);
            let x = if locus.solved_var == 1 {
                [tau, other]
            } else {
                [other, tau]
            };
            comps.iter().map(|p| p.eval_f64(&x)).collect()
        })
        .collect()
}

/// Coordinates written for each vertex: `project` (0-based) or the first
/// three, padding with zeros.
fn project_point(p: &[f64], project: &[usize]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let idx = project.get(k).copied().unwrap_or(k);
        *o = p.get(idx).copied().unwrap_or(0.0);
    }
    out
}

pub fn parse_projection(text: Option<&str>, m: usize) -> Result<Vec<usize>> {
    let Some(text) = text else {
        return Ok((0..m.min(3)).collect());
    };
    let idx: Vec<usize> = text
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::usage(format!("bad projection {text:?}")))?;
    if idx.len() != 3 || idx.iter().any(|&i| i == 0 || i > m) {
        return Err(Error::usage(format!(
            "projection needs three coordinate indices between 1 and {m}"
        )));
    }
    Ok(idx.into_iter().map(|i| i - 1).collect())
}

pub fn face_count(grid: Grid) -> usize {
    (grid.nt - 1) * (grid.ns - 1)
}

pub fn write_obj(samples: &Samples, project: &[usize], polyline: Option<&[Vec<f64>]>) -> String {
    let mut out = String::new();
    out.push_str("# frontal-kit mesh\no surface\n");
    for p in &samples.points {
        let [x, y, z] = project_point(p, project);
        let _ = writeln!(out, "v {x} {y} {z}");
    }
    let ns = samples.grid.ns;
    for i in 0..samples.grid.nt - 1 {
        for j in 0..ns - 1 {
            let a = i * ns + j + 1;
            let _ = writeln!(out, "f {} {} {} {}", a, a + ns, a + ns + 1, a + 1);
        }
    }
    if let Some(line) = polyline.filter(|l| l.len() >= 2) {
        let base = samples.points.len();
        out.push_str("o singular_locus\n");
        for p in line {
            let [x, y, z] = project_point(p, project);
            let _ = writeln!(out, "v {x} {y} {z}");
        }
        out.push('l');
        for k in 0..line.len() {
            let _ = write!(out, " {}", base + k + 1);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(samples: &Samples) -> String {
    let m = samples.points.first().map_or(0, Vec::len);
    let mut out = String::from("t,s");
    for i in 1..=m {
        let _ = write!(out, ",x{i}");
    }
    out.push_str(",sigma\n");
    for ((x, p), sg) in samples
        .params
        .iter()
        .zip(&samples.points)
        .zip(&samples.sigma)
    {
        let _ = write!(out, "{},{}", x[0], x[1]);
        for v in p {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{sg}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{normal_form, NormalFormTag};

    #[test]
    fn grid_parsing() {
        let g = Grid::parse("3x4", None).unwrap();
        assert_eq!((g.nt, g.ns), (3, 4));
        assert_eq!(g.param(2, 3), [1.0, 1.0]);
        let g = Grid::parse("2×2", Some("0,2,-1,1")).unwrap();
        assert_eq!(g.param(1, 0), [2.0, -1.0]);
        assert!(Grid::parse("1x5", None).is_err());
        assert!(Grid::parse("10", None).is_err());
        assert!(Grid::parse("4x4", Some("1,0")).is_err());
    }

    #[test]
    fn obj_counts_and_indices() {
        let f = normal_form(NormalFormTag::CuspidalEdge, 3).unwrap();
        let g = Grid::parse("5x4", None).unwrap();
        let s = sample_surface(&f, g);
        let line = vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]];
        let obj = write_obj(&s, &[0, 1, 2], Some(&line));
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 22);
        assert_eq!(
            obj.lines().filter(|l| l.starts_with("f ")).count(),
            face_count(g)
        );
        assert!(obj.contains("l 21 22\n"));
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            assert!(l[2..]
                .split(' ')
                .all(|i| (1..=20).contains(&i.parse::<usize>().unwrap())));
        }
    }

    #[test]
    fn csv_header() {
        let f = normal_form(NormalFormTag::Fold, 2).unwrap();
        let s = sample_surface(&f, Grid::parse("2x2", None).unwrap());
        let csv = write_csv(&s);
        assert_eq!(csv.lines().next(), Some("t,s,x1,x2,sigma"));
        assert_eq!(csv.lines().count(), 5);
        // sigma = s for the fold (t, s^2/2)
        assert!(csv.lines().nth(1).unwrap().ends_with(",-1"), "{csv}");
    }

    #[test]
    fn projections() {
        assert_eq!(parse_projection(None, 4).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_projection(Some("1,2,4"), 4).unwrap(), vec![0, 1, 3]);
        assert!(parse_projection(Some("1,2,5"), 4).is_err());
        assert_eq!(project_point(&[1.0, 2.0], &[0, 1]), [1.0, 2.0, 0.0]);
    }
}
