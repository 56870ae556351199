//! End-to-end search: candidate graphs, shift hypotheses, isolation,
//! certificates and atlas matching, with one fate per graph.

use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};
use std::time::Duration;

use rayon::prelude::*;

use crate::atlas::{known_entry, variant_count};
use crate::certify::{
    match_positions, match_to_atlas, uniqueness_certificate, verify_configuration,
    CertificateReport, Verdict,
};
use crate::enumerate::{enumerate_candidates, EnumerationSpec};
use crate::error::{Error, Result};
use crate::graph::{dart_sign, edge_of, format_graph, EmbeddedGraph};
use crate::solver::{free_point_search, solve, SearchRegion, SolutionBox, SolveParams};
use crate::system::{all_systems, shift_bound_d, to_coordinate_form, ConstraintSystem};
use crate::torus::{upper_bound_d, Configuration};

/// Atlas matching tolerance for boxes without a uniqueness certificate.
pub const NUMERIC_MATCH_TOL: f64 = 1e-2;

/// Subdivision depth of the free-disk search.
const FREE_DEPTH: u32 = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineParams {
    pub n: usize,
    pub region: SearchRegion,
    pub solve: SolveParams,
    /// Also run graphs on `N - 1` vertices plus a free disk.
    pub free_vertex: bool,
}

impl PipelineParams {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            region: SearchRegion::default_for(n).or_else(|_| {
                let d = crate::atlas::exact_d(n)?.0;
                SearchRegion::new(d - 1e-9, upper_bound_d(n).max(d))
            })?,
            solve: SolveParams::default(),
            free_vertex: true,
        })
    }

    pub fn with_budget(mut self, nodes: Option<u64>, time: Option<Duration>) -> Self {
        self.solve.budget_nodes = nodes;
        self.solve.budget_time = time;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// No shift hypothesis is admissible.
    Hypotheses,
    /// The linear part has no solution of the expected dimension.
    LinearPart,
    BranchAndBound,
    /// No room for the extra disk next to any solution.
    FreeDisk,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Hypotheses => "hypotheses",
            Stage::LinearPart => "linear-part",
            Stage::BranchAndBound => "branch-and-bound",
            Stage::FreeDisk => "free-disk",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fate {
    Eliminated {
        stage: Stage,
    },
    MatchedAtlas {
        variant: usize,
        certified: bool,
    },
    /// Every solution has an angle above pi, so an edge can be added.
    Reducible,
    UncertifiedSurvivor,
    BudgetExhausted,
}

impl Fate {
    pub fn is_resolved(&self) -> bool {
        matches!(
            self,
            Fate::Eliminated { .. }
                | Fate::Reducible
                | Fate::MatchedAtlas {
                    certified: true,
                    ..
                }
        )
    }
}

impl fmt::Display for Fate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fate::Eliminated { stage } => write!(f, "eliminated stage={stage}"),
            Fate::MatchedAtlas { variant, certified } => {
                write!(f, "matched-atlas variant={variant} certified={certified}")
            }
            Fate::Reducible => f.write_str("reducible"),
            Fate::UncertifiedSurvivor => f.write_str("uncertified-survivor"),
            Fate::BudgetExhausted => f.write_str("budget-exhausted"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterReport {
    pub cluster: SolutionBox,
    pub certificate: Option<CertificateReport>,
    /// Atlas variant and infinity distance.
    pub atlas: Option<(usize, f64)>,
    pub certified_match: bool,
    pub obtuse: bool,
    /// Area of the proven free region, for free-disk graphs.
    pub free_area: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub const1: [i64; 2],
    pub const2: [i64; 2],
    pub nodes: u64,
    pub boxes: usize,
    pub exhausted: bool,
    pub clusters: Vec<ClusterReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphReport {
    pub index: usize,
    pub graph: EmbeddedGraph,
    /// Graph on `N - 1` vertices completed by a free disk.
    pub free_vertex: bool,
    pub hypotheses: Vec<HypothesisReport>,
    pub fate: Fate,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct StageCounts {
    pub graphs: usize,
    pub systems: usize,
    pub boxes: usize,
    pub certificates: usize,
    pub eliminated: usize,
    pub matched: usize,
    pub reducible: usize,
    pub survivors: usize,
    pub exhausted: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub n: usize,
    pub region: SearchRegion,
    /// Set when the run used the atlas directly because the shift-set bound
    /// does not cover `N`.
    pub direct: Option<DirectCheck>,
    pub graphs: Vec<GraphReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectCheck {
    pub variants: usize,
    pub kkt_pass: bool,
}

impl PipelineReport {
    pub fn counts(&self) -> StageCounts {
        let mut c = StageCounts {
            graphs: self.graphs.len(),
            ..Default::default()
        };
        for g in &self.graphs {
            c.systems += g.hypotheses.len();
            for h in &g.hypotheses {
                c.boxes += h.boxes;
                c.certificates += h
                    .clusters
                    .iter()
                    .filter(|k| k.certificate.is_some())
                    .count();
            }
            match g.fate {
                Fate::Eliminated { .. } => c.eliminated += 1,
                Fate::MatchedAtlas { .. } => c.matched += 1,
                Fate::Reducible => c.reducible += 1,
                Fate::UncertifiedSurvivor => c.survivors += 1,
                Fate::BudgetExhausted => c.exhausted += 1,
            }
        }
        c
    }

    pub fn all_resolved(&self) -> bool {
        self.direct.as_ref().is_none_or(|d| d.kkt_pass)
            && self.graphs.iter().all(|g| g.fate.is_resolved())
    }
}

/// Whether some angle between consecutive out-darts provably exceeds pi.
///
/// The solution may realize the mirror image of the map, since the system
/// does not see orientation, so angles are measured in whichever sense makes
/// the angles at every vertex sum to one full turn.
pub fn has_obtuse_angle(g: &EmbeddedGraph, b: &SolutionBox) -> bool {
    let dir = |d: usize| {
        let e = &b.edges[edge_of(d)];
        let s = dart_sign(d) as f64;
        let m = [s * e[0].mid(), s * e[1].mid()];
        let r = 0.5 * e[0].width().hypot(e[1].width());
        let len = m[0].hypot(m[1]);
        let spread = if len > r { (r / len).asin() } else { PI };
        (m[1].atan2(m[0]), spread)
    };
    // Per orientation: (consistent, obtuse).
    let judge = |sense: f64| {
        let mut obtuse = false;
        for v in 0..g.n() {
            let rot = g.rotation(v);
            if rot.len() == 1 {
                obtuse = true;
            }
            if rot.len() < 2 {
                continue;
            }
            let mut total = 0.0;
            let mut slack = 0.0;
            for i in 0..rot.len() {
                let (a, ra) = dir(rot[i]);
                let (c, rc) = dir(rot[(i + 1) % rot.len()]);
                let gap = (sense * (a - c)).rem_euclid(TAU);
                total += gap;
                slack += ra + rc;
                obtuse |= gap - ra - rc > PI;
            }
            if (total - TAU).abs() > 1e-9 + 2.0 * slack {
                return (false, false);
            }
        }
        (true, obtuse)
    };
    let (cw, ccw) = (judge(1.0), judge(-1.0));
    match (cw.0, ccw.0) {
        (true, true) => cw.1 && ccw.1,
        (true, false) => cw.1,
        (false, true) => ccw.1,
        (false, false) => false,
    }
}

fn examine(s: &ConstraintSystem, b: &SolutionBox, n: usize, free_vertex: bool) -> ClusterReport {
    let obtuse = has_obtuse_angle(&s.graph, b);
    let certificate = to_coordinate_form(s, &b.edge_mid())
        .ok()
        .map(|cs| uniqueness_certificate(b, &cs));
    let unique = certificate
        .as_ref()
        .is_some_and(|c| c.verdict == Verdict::UniqueInBox);
    if free_vertex {
        // A point of the free region is at distance at least d - sqrt(2) r
        // from every box midpoint.
        let r = b
            .positions
            .iter()
            .flat_map(|p| [p[0].width(), p[1].width()])
            .fold(0.0, f64::max)
            * 0.5;
        let reach = b.d.lo() - 2f64.sqrt() * r;
        let mids = b.position_mid();
        let region = free_point_search(
            &Configuration::from_coords(&mids),
            reach.max(1e-9),
            FREE_DEPTH,
        );
        let atlas = region.boxes.first().and_then(|fb| {
            let mut pts = mids.clone();
            pts.push([fb.x.mid(), fb.y.mid()]);
            match_positions(&pts, n, NUMERIC_MATCH_TOL).map(|m| (m.variant, m.distance))
        });
        return ClusterReport {
            cluster: b.clone(),
            certified_match: false,
            certificate,
            atlas: if region.is_empty() { None } else { atlas },
            obtuse,
            free_area: Some(region.area()),
        };
    }
    let tol = match &certificate {
        Some(c) if unique => c.radius,
        _ => NUMERIC_MATCH_TOL,
    };
    let atlas = match_to_atlas(b, n, tol).map(|m| (m.variant, m.distance));
    ClusterReport {
        cluster: b.clone(),
        certified_match: unique && atlas.is_some(),
        certificate,
        atlas,
        obtuse,
        free_area: None,
    }
}

fn fate_of(hyps: &[HypothesisReport], linear_failure: bool, free_vertex: bool) -> Fate {
    if hyps.iter().any(|h| h.exhausted) {
        return Fate::BudgetExhausted;
    }
    let clusters: Vec<&ClusterReport> = hyps.iter().flat_map(|h| &h.clusters).collect();
    if linear_failure {
        return Fate::UncertifiedSurvivor;
    }
    if clusters.is_empty() {
        return Fate::Eliminated {
            stage: if hyps.is_empty() {
                Stage::Hypotheses
            } else {
                Stage::BranchAndBound
            },
        };
    }
    if free_vertex {
        if clusters
            .iter()
            .all(|c| c.free_area == Some(0.0) && c.atlas.is_none())
        {
            return Fate::Eliminated {
                stage: Stage::FreeDisk,
            };
        }
        if clusters
            .iter()
            .all(|c| c.obtuse || c.atlas.is_none() && c.free_area == Some(0.0))
        {
            return Fate::Reducible;
        }
        return match clusters.iter().find_map(|c| c.atlas) {
            Some((variant, _)) => Fate::MatchedAtlas {
                variant,
                certified: false,
            },
            None => Fate::UncertifiedSurvivor,
        };
    }
    if clusters.iter().all(|c| c.certified_match) {
        let variant = clusters[0].atlas.map_or(0, |a| a.0);
        return Fate::MatchedAtlas {
            variant,
            certified: true,
        };
    }
    if clusters.iter().all(|c| c.certified_match || c.obtuse) {
        return Fate::Reducible;
    }
    if let Some((variant, _)) = clusters.iter().filter(|c| !c.obtuse).find_map(|c| c.atlas) {
        if clusters.iter().all(|c| c.atlas.is_some() || c.obtuse) {
            return Fate::MatchedAtlas {
                variant,
                certified: false,
            };
        }
    }
    Fate::UncertifiedSurvivor
}

/// Run one graph through every admissible shift hypothesis.
pub fn run_graph(
    index: usize,
    g: &EmbeddedGraph,
    n: usize,
    params: &PipelineParams,
) -> Result<GraphReport> {
    let free_vertex = g.n() + 1 == n;
    let systems = all_systems(g, params.region.d.hi())?;
    let mut linear_failure = false;
    let mut hypotheses = Vec::new();
    for s in &systems {
        let r = match solve(s, &params.region, &params.solve) {
            Ok(r) => r,
            Err(Error::DegenerateLinearPart { .. }) => {
                linear_failure = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let clusters = r
            .clusters
            .iter()
            .map(|b| examine(s, b, n, free_vertex))
            .collect();
        hypotheses.push(HypothesisReport {
            const1: s.hypothesis.const1,
            const2: s.hypothesis.const2,
            nodes: r.nodes,
            boxes: r.boxes.len(),
            exhausted: r.budget_exhausted,
            clusters,
        });
    }
    let fate = if systems.is_empty() {
        Fate::Eliminated {
            stage: Stage::Hypotheses,
        }
    } else if hypotheses.is_empty() && !linear_failure {
        Fate::Eliminated {
            stage: Stage::LinearPart,
        }
    } else {
        fate_of(&hypotheses, linear_failure, free_vertex)
    };
    Ok(GraphReport {
        index,
        graph: g.clone(),
        free_vertex,
        hypotheses,
        fate,
    })
}

/// Run a given graph list. Graphs on `N - 1` vertices take the free-disk
/// path; any other vertex count is an error.
pub fn run_graphs(graphs: &[EmbeddedGraph], params: &PipelineParams) -> Result<PipelineReport> {
    let n = params.n;
    if let Some(g) = graphs.iter().find(|g| g.n() != n && g.n() + 1 != n) {
        return Err(Error::Dimension(format!(
            "graph on {} vertices in a run for N = {n}",
            g.n()
        )));
    }
    let reports = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| run_graph(i, g, n, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineReport {
        n,
        region: params.region,
        direct: None,
        graphs: reports,
    })
}

/// Full run: enumerate candidates on `N` vertices (and on `N - 1` when the
/// free-disk path is enabled), then `run_graphs`. When the atlas distance
/// exceeds the shift-set bound the atlas configurations are checked directly.
pub fn pipeline(params: &PipelineParams) -> Result<PipelineReport> {
    let n = params.n;
    if !(2..=8).contains(&n) {
        return Err(Error::InconsistentSpec(format!(
            "pipeline supports 2 <= N <= 8, got {n}"
        )));
    }
    if known_entry(n, 1)?.d > shift_bound_d() * (1.0 + 1e-12) {
        let mut kkt_pass = true;
        for v in 1..=variant_count(n) {
            let e = known_entry(n, v)?;
            kkt_pass &= verify_configuration(n, &e.config.coords(), e.d)?.pass;
        }
        return Ok(PipelineReport {
            n,
            region: params.region,
            direct: Some(DirectCheck {
                variants: variant_count(n),
                kkt_pass,
            }),
            graphs: Vec::new(),
        });
    }
    let mut graphs = enumerate_candidates(&EnumerationSpec::new(n))?;
    if params.free_vertex && n > 5 {
        graphs.extend(enumerate_candidates(&EnumerationSpec::new(n - 1))?);
    }
    run_graphs(&graphs, params)
}

fn iv(i: crate::interval::Interval) -> String {
    format!("[{:?}, {:?}]", i.lo(), i.hi())
}

/// Structured text body of a report; numbers are printed in shortest
/// round-trip form.
pub fn format_report(r: &PipelineReport) -> String {
    let mut s = String::new();
    let c = r.counts();
    writeln!(s, "pipeline n={} d={}", r.n, iv(r.region.d)).unwrap();
    if let Some(d) = &r.direct {
        writeln!(
            s,
            "direct atlas variants={} kkt={}",
            d.variants,
            if d.kkt_pass { "pass" } else { "fail" }
        )
        .unwrap();
    }
    for g in &r.graphs {
        writeln!(
            s,
            "graph {} free-vertex={} fate={}",
            g.index, g.free_vertex, g.fate
        )
        .unwrap();
        writeln!(s, "  map {}", format_graph(&g.graph)).unwrap();
        for h in &g.hypotheses {
            writeln!(
                s,
                "  hypothesis const1={},{} const2={},{} nodes={} boxes={} exhausted={}",
                h.const1[0], h.const1[1], h.const2[0], h.const2[1], h.nodes, h.boxes, h.exhausted
            )
            .unwrap();
            for k in &h.clusters {
                write!(
                    s,
                    "    cluster status={} d={} obtuse={}",
                    k.cluster.status,
                    iv(k.cluster.d),
                    k.obtuse
                )
                .unwrap();
                match &k.certificate {
                    Some(cert) => write!(
                        s,
                        " verdict={} delta={:?} epsilon={:?} h={:?} radius={:?}",
                        cert.verdict, cert.delta, cert.epsilon, cert.h, cert.radius
                    )
                    .unwrap(),
                    None => s.push_str(" verdict=none"),
                }
                match k.atlas {
                    Some((v, dist)) => write!(s, " atlas={v} distance={dist:?}").unwrap(),
                    None => s.push_str(" atlas=none"),
                }
                if let Some(a) = k.free_area {
                    write!(s, " free-area={a:?}").unwrap();
                }
                s.push('\n');
            }
        }
    }
    writeln!(
        s,
        "summary graphs={} systems={} boxes={} certificates={} eliminated={} matched={} reducible={} survivors={} exhausted={}",
        c.graphs, c.systems, c.boxes, c.certificates, c.eliminated, c.matched, c.reducible, c.survivors, c.exhausted
    )
    .unwrap();
    s
}
