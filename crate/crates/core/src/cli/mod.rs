//! `frontal-kit {analyze|tangent|mesh|openings|duality}`.
//!
//! [`run`] returns the text destined for stdout and writes any requested
//! files itself. Exit codes follow [`Error::exit_code`]; the binary maps
//! panics to 4.

pub mod mesh;
pub mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classifier::{classify_surface, classify_surface_jets};
use crate::duality::{
    a3_seed_curves, a3_table_row, spherical_dual, ProjectiveCurve, SphericalFrontalCurve,
};
use crate::error::{Error, Result};
use crate::frontal_core::density_function;
use crate::germs::{parse_germ, parse_poly_list, GermKind, MapGerm};
use crate::openings::{jacobi_basis, ramification_member, versal_opening, DEFAULT_CUTOFF};
use crate::poly::Poly;
use crate::scalar::parse_rational;
use crate::tangent_surfaces::{tangent_surface_affine, tangent_surface_geodesic, Connection};

use report::{working_order, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "frontal-kit",
    version,
    about = "Exact analysis of frontal map-germs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, type and frame of a curve; density, lift and class of a surface.
    Analyze(AnalyzeArgs),
    /// Tangent surface of a curve.
    Tangent(TangentArgs),
    /// Sample a surface (or the tangent surface of a curve) to OBJ / CSV.
    Mesh(MeshArgs),
    /// Jacobi and ramification modules.
    #[command(subcommand)]
    Openings(OpeningsCommand),
    /// Spherical and projective duals.
    #[command(subcommand)]
    Duality(DualityCommand),
}

#[derive(Debug, Args)]
pub struct GermInput {
    /// Germ DSL file.
    pub path: PathBuf,
    /// Base point in source coordinates, e.g. `1/2` or `0,1`.
    #[arg(long)]
    pub at: Option<String>,
    /// Working jet order (default 8, raised to the germ degree).
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: GermInput,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include per-phase timings in milliseconds.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct TangentArgs {
    #[command(flatten)]
    pub input: GermInput,
    /// Also print the singularity class.
    #[arg(long)]
    pub classify: bool,
    /// `flat`, `sphere`, or a connection JSON file.
    #[arg(long)]
    pub connection: Option<String>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub input: GermInput,
    /// Samples per side, `AxB`.
    #[arg(long, default_value = "64x64")]
    pub grid: String,
    /// `lo,hi` or `t0,t1,s0,s1` (default -1,1).
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long)]
    pub obj: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Three 1-based target coordinates written to OBJ vertices.
    #[arg(long)]
    pub project: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Components of f, comma separated; variables t,s or u,w.
    #[arg(long = "f")]
    pub f: String,
    /// Truncation degree.
    #[arg(long = "K", default_value_t = DEFAULT_CUTOFF)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum OpeningsCommand {
    /// Graded dimensions of the truncated Jacobi module.
    Jacobi(ModuleArgs),
    /// Whether h lies in the ramification module of f.
    Member {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long = "h")]
        h: String,
    },
    /// Versal opening built from ramification generators.
    Versal(ModuleArgs),
}

#[derive(Debug, Subcommand)]
pub enum DualityCommand {
    /// Dual of a spherical frontal curve given as a jet in R^3.
    Sphere {
        #[arg(long)]
        curve: PathBuf,
        /// Unit normal as a germ file; derived from the curve when omitted.
        #[arg(long)]
        nu: Option<PathBuf>,
        /// Jet order of the curve (default: its degree).
        #[arg(long)]
        order: Option<u32>,
        /// Apply the dual twice.
        #[arg(long)]
        twice: bool,
    },
    /// Tangent-surface classes of the four seed curves and their duals.
    A3Table,
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Tangent(a) => cmd_tangent(a),
        Command::Mesh(a) => cmd_mesh(a),
        Command::Openings(c) => cmd_openings(c),
        Command::Duality(c) => cmd_duality(c),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_point(text: &str) -> Result<Vec<crate::scalar::Rational>> {
    text.split(',')
        .map(|x| {
            parse_rational(x.trim()).ok_or_else(|| Error::usage(format!("bad coordinate {x:?}")))
        })
        .collect()
}

fn load_germ(input: &GermInput) -> Result<MapGerm> {
    let g = parse_germ(&read_text(&input.path)?)?;
    // every command works on text that parses back to the same germ
    debug_assert_eq!(parse_germ(&g.to_canonical()).as_ref(), Ok(&g));
    match &input.at {
        Some(at) => g.with_base_point(parse_point(at)?),
        None => Ok(g),
    }
}

fn load_connection(spec: &str, m: usize) -> Result<Connection> {
    let conn = match spec {
        "flat" => Connection::flat(m),
        "sphere" => Connection::sphere_like(m),
        path => Connection::from_json(&read_text(Path::new(path))?)?,
    };
    if conn.dim() != m {
        return Err(Error::InvalidAmbient {
            class: format!("a connection of dimension {}", conn.dim()),
            dim: m,
        });
    }
    Ok(conn)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<String> {
    let g = load_germ(&a.input)?;
    let json = report::analyze(&g, a.input.order, a.timings)?.to_json();
    match &a.out {
        Some(p) => {
            write_text(p, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn require_curve(g: &MapGerm) -> Result<()> {
    if g.kind() != GermKind::Curve {
        return Err(Error::usage("expected a curve germ"));
    }
    Ok(())
}

fn cmd_tangent(a: &TangentArgs) -> Result<String> {
    let g = load_germ(&a.input)?;
    require_curve(&g)?;
    let m = g.target_dim();
    let (tan, class) = match &a.connection {
        None => {
            let tan = tangent_surface_affine(&g)?;
            let class = if a.classify {
                Some(classify_surface(&tan, &Connection::flat(m))?)
            } else {
                None
            };
            (tan, class)
        }
        Some(spec) => {
            let conn = load_connection(spec, m)?;
            let k = working_order(&g, a.input.order);
            let jets = tangent_surface_geodesic(&g, &conn, k)?;
            let class = if a.classify {
                Some(classify_surface_jets(&jets, &conn)?)
            } else {
                None
            };
            (MapGerm::from_jets(GermKind::Surface, &jets)?, class)
        }
    };
    let mut out = tan.tuple_text();
    out.push('\n');
    if let Some(c) = class {
        let _ = writeln!(out, "class: {}", c.tag.name());
    }
    Ok(out)
}

fn cmd_mesh(a: &MeshArgs) -> Result<String> {
    let g = load_germ(&a.input)?;
    let surf = match g.kind() {
        GermKind::Curve => tangent_surface_affine(&g)?,
        GermKind::Surface => g,
    };
    let grid = mesh::Grid::parse(&a.grid, a.range.as_deref())?;
    let project = mesh::parse_projection(a.project.as_deref(), surf.target_dim())?;
    let samples = mesh::sample_surface(&surf, grid);
    let jets = surf.to_jets(working_order(&surf, a.input.order));
    // the locus is only drawn when the density has a smooth zero set
    let polyline = match density_function(&jets, None) {
        Ok(d) if d.nondegenerate() => d
            .singular_locus
            .map(|l| mesh::singular_polyline(&surf, &l, grid)),
        _ => None,
    };
    if let Some(p) = &a.obj {
        write_text(p, &mesh::write_obj(&samples, &project, polyline.as_deref()))?;
    }
    if let Some(p) = &a.csv {
        write_text(p, &mesh::write_csv(&samples))?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", samples.points.len());
    let _ = writeln!(out, "faces: {}", mesh::face_count(grid));
    let _ = writeln!(out, "singular_locus: {}", polyline.map_or(0, |l| l.len()));
    Ok(out)
}

/// Parses module inputs over `t,s`, falling back to `u,w`. Returns the
/// polynomials in source dimension 1 or 2 and the names to print with.
fn parse_module_input(texts: &[&str]) -> Result<(Vec<Vec<Poly>>, [&'static str; 2])> {
    let attempt = |names: [&'static str; 2]| -> Result<Vec<Vec<Poly>>> {
        texts.iter().map(|t| parse_poly_list(t, &names)).collect()
    };
    let (polys, names) = match attempt(["t", "s"]) {
        Ok(p) => (p, ["t", "s"]),
        Err(first) => match attempt(["u", "w"]) {
            Ok(p) => (p, ["u", "w"]),
            Err(_) => return Err(first),
        },
    };
    let two = polys.iter().flatten().any(|p| p.degree_in(1) > 0);
    if two {
        return Ok((polys, names));
    }
    let one = texts
        .iter()
        .map(|t| parse_poly_list(t, &names[..1]))
        .collect::<Result<_>>()?;
    Ok((one, names))
}

fn module_germ(f: Vec<Poly>) -> Result<MapGerm> {
    match f.first().map(Poly::nvars) {
        Some(1) => MapGerm::curve(f),
        _ => MapGerm::surface(f),
    }
}

fn germ_text(g: &MapGerm, names: [&str; 2]) -> String {
    let names = &names[..g.source_dim()];
    let parts: Vec<String> = g.components().iter().map(|p| p.to_text(names)).collect();
    format!("({})", parts.join(", "))
}

#[derive(Serialize)]
struct JacobiReport {
    schema: u32,
    command: &'static str,
    f: String,
    #[serde(rename = "K")]
    k: u32,
    dim: usize,
    ambient_dim: usize,
    graded_dimensions: Vec<GradedRow>,
}

/// Dimension of the module part with coefficients of degree at most `max_degree`.
#[derive(Serialize)]
struct GradedRow {
    max_degree: usize,
    dim: usize,
}

#[derive(Serialize)]
struct MemberReport {
    schema: u32,
    command: &'static str,
    f: String,
    h: String,
    #[serde(rename = "K")]
    k: u32,
    member: bool,
}

#[derive(Serialize)]
struct VersalReport {
    schema: u32,
    command: &'static str,
    f: String,
    #[serde(rename = "K")]
    k: u32,
    generators: Vec<String>,
    generator_degrees: Vec<u32>,
    opening: String,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_openings(c: &OpeningsCommand) -> Result<String> {
    match c {
        OpeningsCommand::Jacobi(m) => {
            let (mut p, names) = parse_module_input(&[&m.f])?;
            let f = module_germ(p.remove(0))?;
            let basis = jacobi_basis(&f, m.k)?;
            Ok(to_json(&JacobiReport {
                schema: SCHEMA,
                command: "openings jacobi",
                f: germ_text(&f, names),
                k: m.k,
                dim: basis.dim(),
                ambient_dim: basis.ambient_dim(),
                graded_dimensions: basis
                    .graded_dimensions()
                    .into_iter()
                    .enumerate()
                    .map(|(max_degree, dim)| GradedRow { max_degree, dim })
                    .collect(),
            }))
        }
        OpeningsCommand::Member { module: m, h } => {
            let (mut p, names) = parse_module_input(&[&m.f, h])?;
            let hs = p.remove(1);
            let f = module_germ(p.remove(0))?;
            let [h] = <[Poly; 1]>::try_from(hs)
                .map_err(|_| Error::usage("--h takes a single function"))?;
            let member = ramification_member(&h, &f, m.k)?;
            Ok(to_json(&MemberReport {
                schema: SCHEMA,
                command: "openings member",
                f: germ_text(&f, names),
                h: h.to_text(&names[..f.source_dim()]),
                k: m.k,
                member,
            }))
        }
        OpeningsCommand::Versal(m) => {
            let (mut p, names) = parse_module_input(&[&m.f])?;
            let f = module_germ(p.remove(0))?;
            let big = versal_opening(&f, m.k)?;
            let gens = crate::openings::ramification_generators(&f, m.k)?;
            let src = &names[..f.source_dim()];
            Ok(to_json(&VersalReport {
                schema: SCHEMA,
                command: "openings versal",
                f: germ_text(&f, names),
                k: m.k,
                generators: gens
                    .module_generators
                    .iter()
                    .map(|p| p.to_text(src))
                    .collect(),
                generator_degrees: gens.generator_degrees(),
                opening: germ_text(&big, names),
            }))
        }
    }
}

fn cmd_duality(c: &DualityCommand) -> Result<String> {
    match c {
        DualityCommand::Sphere {
            curve,
            nu,
            order,
            twice,
        } => {
            let g = parse_germ(&read_text(curve)?)?;
            require_curve(&g)?;
            let k = order.unwrap_or(g.degree()).max(1);
            let gamma = g.to_jets(k);
            let c = match nu {
                Some(p) => {
                    let n = parse_germ(&read_text(p)?)?;
                    require_curve(&n)?;
                    SphericalFrontalCurve::new(gamma, n.to_jets(k))?
                }
                None => SphericalFrontalCurve::from_curve(gamma)?,
            };
            let mut d = spherical_dual(&c)?;
            if *twice {
                d = spherical_dual(&d)?;
            }
            let dual = MapGerm::from_jets(GermKind::Curve, &d.gamma)?;
            let normal = MapGerm::from_jets(GermKind::Curve, &d.nu)?;
            Ok(format!(
                "{}\nnormal: {}\n",
                dual.to_canonical(),
                normal.tuple_text()
            ))
        }
        DualityCommand::A3Table => a3_table(),
    }
}

fn a3_table() -> Result<String> {
    let mark = |tag: crate::classifier::SingularityTag| {
        if tag.is_recognized() {
            tag.name().to_string()
        } else {
            format!("{}*", tag.name())
        }
    };
    let mut rows = vec![[
        "type".to_string(),
        "tangent surface".to_string(),
        "dual type".to_string(),
        "dual tangent surface".to_string(),
    ]];
    for seed in a3_seed_curves() {
        let row = a3_table_row(&ProjectiveCurve::from_affine(&seed)?)?;
        rows.push([
            row.primal_type.to_string(),
            mark(row.primal.tag),
            row.dual_type.to_string(),
            mark(row.dual.tag),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", cells.join(" | ").trim_end());
    }
    out.push_str("* no recognition criterion applies\n");
    Ok(out)
}
