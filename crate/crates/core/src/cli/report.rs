//! JSON reports (schema 1). Exact values are fraction strings.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::classifier::{classify_by_curve_jets, classify_surface_jets, SingularityClass};
use crate::curve_analysis::{
    curve_type_of_jets, direction_frame, order_of_jets, CurveOrder, DEFAULT_ORDER,
};
use crate::error::Result;
use crate::frontal_core::{density_with_lift, legendre_lift, square_grid, DensityData};
use crate::germs::{GermKind, MapGerm};
use crate::jets::Jet;
use crate::scalar::fmt_rational;
use crate::tangent_surfaces::Connection;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceReport {
    pub criterion: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub class: String,
    pub evidence: Vec<EvidenceReport>,
}

impl From<&SingularityClass> for ClassReport {
    fn from(c: &SingularityClass) -> Self {
        ClassReport {
            class: c.tag.name().to_string(),
            evidence: c
                .evidence
                .iter()
                .map(|e| EvidenceReport {
                    criterion: e.criterion.clone(),
                    values: e.value_strings(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    pub u: Vec<String>,
    pub h: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    /// `null` when every derivative vanishes below the cutoff.
    pub order: Option<u32>,
    #[serde(rename = "type")]
    pub curve_type: String,
    pub frame: Option<FrameReport>,
    /// Class of the tangent surface for curves in dimension three or more.
    pub tangent_surface: Option<ClassReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusReport {
    pub solved: String,
    pub c: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub sigma: String,
    pub sigma_valuation: Option<u32>,
    pub dsigma: [String; 2],
    pub nondegeneracy: String,
    pub corank: usize,
    pub singular_locus: Option<LocusReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    /// 1-based target coordinates of the chart.
    pub chart: Vec<usize>,
    pub slopes: Vec<Vec<String>>,
    /// Exact residual jets of the contact identities, `"0"` when integral.
    pub residual: Vec<String>,
    pub integral: bool,
    /// Float maximum on a 16x16 grid over [-1/2,1/2]^2.
    pub grid_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub density: DensityReport,
    pub lift: LiftReport,
    #[serde(flatten)]
    pub class: ClassReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub command: String,
    pub input: String,
    pub base_point: Vec<String>,
    pub kind: String,
    pub order: u32,
    pub scalar_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

struct Timer {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Timer {
        Timer {
            enabled,
            last: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        if self.enabled {
            let ms = (now - self.last).as_secs_f64() * 1e3;
            self.laps.insert(name.to_string(), ms);
        }
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

fn jet_texts(v: &[Jet], names: &[&str]) -> Vec<String> {
    v.iter().map(|j| j.to_text(names)).collect()
}

/// Working order for a germ: at least `order`, and at least its degree.
pub fn working_order(g: &MapGerm, order: Option<u32>) -> u32 {
    order.unwrap_or(DEFAULT_ORDER).max(g.degree()).max(1)
}

pub fn analyze(g: &MapGerm, order: Option<u32>, timings: bool) -> Result<ClassificationReport> {
    let k = working_order(g, order);
    let mut timer = Timer::new(timings);
    let jets = g.to_jets(k);
    timer.lap("jets");
    let (curve, surface) = match g.kind() {
        GermKind::Curve => (Some(curve_report(&jets, k, &mut timer)?), None),
        GermKind::Surface => (None, Some(surface_report(&jets, &mut timer)?)),
    };
    Ok(ClassificationReport {
        schema: SCHEMA,
        command: "analyze".into(),
        input: g.to_canonical(),
        base_point: g.base_point().iter().map(fmt_rational).collect(),
        kind: match g.kind() {
            GermKind::Curve => "curve",
            GermKind::Surface => "surface",
        }
        .into(),
        order: k,
        scalar_mode: "exact".into(),
        curve,
        surface,
        timings_ms: timer.finish(),
    })
}

fn curve_report(jets: &[Jet], k: u32, timer: &mut Timer) -> Result<CurveReport> {
    let order = match order_of_jets(jets)? {
        CurveOrder::Finite(d) => Some(d),
        CurveOrder::Infinite { .. } => None,
    };
    let curve_type = curve_type_of_jets(jets, k)?;
    timer.lap("type");
    let frame = match order {
        Some(_) => {
            let fr = direction_frame(jets)?;
            Some(FrameReport {
                u: jet_texts(&fr.u, &["t"]),
                h: fr.h.to_text(&["t"]),
            })
        }
        None => None,
    };
    timer.lap("frame");
    let tangent_surface = if jets.len() >= 3 && curve_type.tuple().is_some() {
        let conn = Connection::flat(jets.len());
        Some(ClassReport::from(&classify_by_curve_jets(jets, &conn)?))
    } else {
        None
    };
    timer.lap("classify");
    Ok(CurveReport {
        order,
        curve_type: curve_type.to_string(),
        frame,
        tangent_surface,
    })
}

fn density_report(d: &DensityData) -> DensityReport {
    let names = ["t", "s"];
    let [dt, ds] = d.dsigma();
    DensityReport {
        sigma: d.sigma.to_text(&names),
        sigma_valuation: d.sigma.valuation(),
        dsigma: [fmt_rational(&dt), fmt_rational(&ds)],
        nondegeneracy: d.status.name().to_string(),
        corank: d.corank,
        singular_locus: d.singular_locus.as_ref().map(|l| LocusReport {
            solved: names[l.solved_var].to_string(),
            c: l.c.to_text(&[names[1 - l.solved_var]]),
        }),
    }
}

fn surface_report(jets: &[Jet], timer: &mut Timer) -> Result<SurfaceReport> {
    let names = ["t", "s"];
    let lift = legendre_lift(jets)?;
    timer.lap("lift");
    let residual = lift.residual_jets();
    let integral = residual.iter().all(Jet::is_zero);
    let grid_residual = lift.grid_residual(&square_grid(2, 16, -0.5, 0.5));
    let lift_report = LiftReport {
        chart: lift.chart.iter().map(|c| c + 1).collect(),
        slopes: lift
            .slopes
            .iter()
            .map(|row| jet_texts(row, &names))
            .collect(),
        residual: jet_texts(&residual, &names),
        integral,
        grid_residual,
    };
    timer.lap("residual");
    let density = density_with_lift(jets, &lift, None)?;
    timer.lap("density");
    let class = classify_surface_jets(jets, &Connection::flat(jets.len()))?;
    timer.lap("classify");
    Ok(SurfaceReport {
        density: density_report(&density),
        lift: lift_report,
        class: ClassReport::from(&class),
    })
}
