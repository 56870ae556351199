//! Text records for solver output and certificate reports.
//!
//! A solve file is a sequence of blocks:
//!
//! ```text
//! record graph=0 status=solutions nodes=3810 boxes=1 clusters=1
//! map n=6 edges=0-1,0-2,... rotation=0,2,4,6|5,8,10|...
//! hypothesis c1=0,4,2 c2=6,10,8 const1=1,0 const2=0,1
//! box kind=cluster status=verified mode=angle
//! d 0.40040551 0.40040558
//! var -0.3 -0.29
//! edge 0.3466 0.3468 -0.2004 -0.2000
//! pos 0 0 0 0
//! end
//! ```
//!
//! Every bound is printed in shortest round-trip form, so parsing restores
//! the exact doubles.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::certify::{match_to_atlas, uniqueness_certificate, CertificateReport, Verdict};
use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use crate::interval::Interval;
use crate::pipeline::NUMERIC_MATCH_TOL;
use crate::solver::{solve, BoxStatus, Mode, SearchRegion, SolutionBox, SolveParams};
use crate::system::{all_systems, build_system, to_coordinate_form, ShiftHypothesis};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveRecord {
    pub graph_index: usize,
    pub graph: EmbeddedGraph,
    pub hypothesis: ShiftHypothesis,
    pub nodes: u64,
    pub exhausted: bool,
    pub boxes: Vec<SolutionBox>,
    pub clusters: Vec<SolutionBox>,
}

impl SolveRecord {
    pub fn status(&self) -> &'static str {
        if self.exhausted {
            "budget-exhausted"
        } else if self.boxes.is_empty() {
            "empty"
        } else {
            "solutions"
        }
    }
}

/// Solve every admissible hypothesis of every graph, in input order.
pub fn solve_graphs(
    graphs: &[EmbeddedGraph],
    region: &SearchRegion,
    params: &SolveParams,
) -> Result<Vec<SolveRecord>> {
    let per_graph = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<Vec<SolveRecord>> {
            let mut out = Vec::new();
            for s in all_systems(g, region.d.hi())? {
                let r = solve(&s, region, params)?;
                out.push(SolveRecord {
                    graph_index: i,
                    graph: g.clone(),
                    hypothesis: s.hypothesis.clone(),
                    nodes: r.nodes,
                    exhausted: r.budget_exhausted,
                    boxes: r.boxes,
                    clusters: r.clusters,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_graph.into_iter().flatten().collect())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn write_box(s: &mut String, kind: &str, b: &SolutionBox) {
    writeln!(s, "box kind={kind} status={} mode={}", b.status, b.mode).unwrap();
    writeln!(s, "d {:?} {:?}", b.d.lo(), b.d.hi()).unwrap();
    for v in &b.vars {
        writeln!(s, "var {:?} {:?}", v.lo(), v.hi()).unwrap();
    }
    for (tag, list) in [("edge", &b.edges), ("pos", &b.positions)] {
        for p in list {
            writeln!(
                s,
                "{tag} {:?} {:?} {:?} {:?}",
                p[0].lo(),
                p[0].hi(),
                p[1].lo(),
                p[1].hi()
            )
            .unwrap();
        }
    }
}

pub fn format_records(records: &[SolveRecord]) -> String {
    let mut s = String::new();
    for r in records {
        writeln!(
            s,
            "record graph={} status={} nodes={} boxes={} clusters={}",
            r.graph_index,
            r.status(),
            r.nodes,
            r.boxes.len(),
            r.clusters.len()
        )
        .unwrap();
        let g = &r.graph;
        let edges: Vec<String> = g
            .edges()
            .iter()
            .map(|e| format!("{}-{}", e[0], e[1]))
            .collect();
        let rot: Vec<String> = (0..g.n()).map(|v| join(g.rotation(v))).collect();
        writeln!(
            s,
            "map n={} edges={} rotation={}",
            g.n(),
            edges.join(","),
            rot.join("|")
        )
        .unwrap();
        let h = &r.hypothesis;
        writeln!(
            s,
            "hypothesis c1={} c2={} const1={} const2={}",
            join(&h.c1),
            join(&h.c2),
            join(&h.const1),
            join(&h.const2)
        )
        .unwrap();
        for b in &r.boxes {
            write_box(&mut s, "box", b);
        }
        for b in &r.clusters {
            write_box(&mut s, "cluster", b);
        }
        s.push_str("end\n");
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            let l = l.trim();
            if !l.is_empty() && !l.starts_with('#') {
                return Some((i + 1, l));
            }
        }
        None
    }

    fn expect(&mut self, tag: &str) -> Result<(usize, &'a str)> {
        match self.next() {
            Some((i, l)) if l.split_whitespace().next() == Some(tag) => {
                Ok((i, l[tag.len()..].trim()))
            }
            Some((i, l)) => Err(err(i, format!("expected '{tag}', found {l:?}"))),
            None => Err(err(0, format!("unexpected end of input, expected '{tag}'"))),
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn fields(line: usize, text: &str) -> Result<Vec<(&str, &str)>> {
    text.split_whitespace()
        .map(|t| {
            t.split_once('=')
                .ok_or_else(|| err(line, format!("expected key=value, found {t:?}")))
        })
        .collect()
}

fn field<'a>(line: usize, fs: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fs.iter()
        .find(|f| f.0 == key)
        .map(|f| f.1)
        .ok_or_else(|| err(line, format!("missing field {key}")))
}

fn num<T: std::str::FromStr>(line: usize, t: &str) -> Result<T> {
    t.parse()
        .map_err(|_| err(line, format!("bad number {t:?}")))
}

fn list<T: std::str::FromStr>(line: usize, t: &str) -> Result<Vec<T>> {
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(|x| num(line, x)).collect()
}

fn pair(line: usize, t: &str) -> Result<[i64; 2]> {
    let v: Vec<i64> = list(line, t)?;
    <[i64; 2]>::try_from(v).map_err(|_| err(line, format!("expected two integers, found {t:?}")))
}

fn interval(line: usize, lo: &str, hi: &str) -> Result<Interval> {
    let (lo, hi): (f64, f64) = (num(line, lo)?, num(line, hi)?);
    if !(lo <= hi) {
        return Err(err(line, format!("empty interval [{lo}, {hi}]")));
    }
    Ok(Interval::new(lo, hi))
}

fn floats<const K: usize>(line: usize, text: &str) -> Result<[Interval; K]> {
    let t: Vec<&str> = text.split_whitespace().collect();
    if t.len() != 2 * K {
        return Err(err(line, format!("expected {} numbers", 2 * K)));
    }
    let mut out = [Interval::ZERO; K];
    for (k, o) in out.iter_mut().enumerate() {
        *o = interval(line, t[2 * k], t[2 * k + 1])?;
    }
    Ok(out)
}

fn parse_map(line: usize, text: &str) -> Result<EmbeddedGraph> {
    let fs = fields(line, text)?;
    let n = num(line, field(line, &fs, "n")?)?;
    let edges = field(line, &fs, "edges")?
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once('-')
                .ok_or_else(|| err(line, format!("bad edge {t:?}")))?;
            Ok([num(line, a)?, num(line, b)?])
        })
        .collect::<Result<Vec<[usize; 2]>>>()?;
    let rotation = field(line, &fs, "rotation")?
        .split('|')
        .map(|t| list(line, t))
        .collect::<Result<Vec<Vec<usize>>>>()?;
    EmbeddedGraph::from_darts(n, edges, rotation).map_err(|e| err(line, e.to_string()))
}

fn parse_status(line: usize, t: &str) -> Result<BoxStatus> {
    match t {
        "verified" => Ok(BoxStatus::Verified),
        "possible" => Ok(BoxStatus::Possible),
        "empty" => Ok(BoxStatus::Empty),
        _ => Err(err(line, format!("unknown box status {t:?}"))),
    }
}

pub fn parse_records(text: &str) -> Result<Vec<SolveRecord>> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let mut out = Vec::new();
    while let Some((i, l)) = lines.next() {
        let Some(head) = l.strip_prefix("record") else {
            return Err(err(i, format!("expected 'record', found {l:?}")));
        };
        let fs = fields(i, head)?;
        let graph_index = num(i, field(i, &fs, "graph")?)?;
        let nodes = num(i, field(i, &fs, "nodes")?)?;
        let exhausted = field(i, &fs, "status")? == "budget-exhausted";
        let (nb, nc): (usize, usize) = (
            num(i, field(i, &fs, "boxes")?)?,
            num(i, field(i, &fs, "clusters")?)?,
        );
        let (mi, map) = lines.expect("map")?;
        let graph = parse_map(mi, map)?;
        let (hi, h) = lines.expect("hypothesis")?;
        let hf = fields(hi, h)?;
        let hypothesis = ShiftHypothesis {
            c1: list(hi, field(hi, &hf, "c1")?)?,
            c2: list(hi, field(hi, &hf, "c2")?)?,
            const1: pair(hi, field(hi, &hf, "const1")?)?,
            const2: pair(hi, field(hi, &hf, "const2")?)?,
        };
        let mut boxes = Vec::new();
        let mut clusters = Vec::new();
        for k in 0..nb + nc {
            let (bi, b) = lines.expect("box")?;
            let bf = fields(bi, b)?;
            let (di, d) = lines.expect("d")?;
            let [d] = floats::<1>(di, d)?;
            let mut bx = SolutionBox {
                mode: field(bi, &bf, "mode")?.parse::<Mode>()?,
                vars: Vec::new(),
                d,
                edges: Vec::new(),
                positions: Vec::new(),
                status: parse_status(bi, field(bi, &bf, "status")?)?,
            };
            loop {
                match lines.inner.peek() {
                    Some((_, l)) if l.trim_start().starts_with("var ") => {
                        let (vi, v) = lines.expect("var")?;
                        bx.vars.push(floats::<1>(vi, v)?[0]);
                    }
                    Some((_, l)) if l.trim_start().starts_with("edge ") => {
                        let (ei, e) = lines.expect("edge")?;
                        bx.edges.push(floats::<2>(ei, e)?);
                    }
                    Some((_, l)) if l.trim_start().starts_with("pos ") => {
                        let (pi, p) = lines.expect("pos")?;
                        bx.positions.push(floats::<2>(pi, p)?);
                    }
                    _ => break,
                }
            }
            if bx.edges.len() != graph.edge_count() || bx.positions.len() != graph.n() {
                return Err(err(bi, "box size does not match the map"));
            }
            if k < nb {
                boxes.push(bx);
            } else {
                clusters.push(bx);
            }
        }
        lines.expect("end")?;
        out.push(SolveRecord {
            graph_index,
            graph,
            hypothesis,
            nodes,
            exhausted,
            boxes,
            clusters,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedCluster {
    pub graph_index: usize,
    pub cluster: usize,
    pub d: Interval,
    pub certificate: Option<CertificateReport>,
    pub atlas: Option<(usize, f64)>,
    pub certified: bool,
}

/// Certificate and atlas match for every cluster of every record.
pub fn certify_records(records: &[SolveRecord], n: usize) -> Result<Vec<CertifiedCluster>> {
    let mut out = Vec::new();
    for r in records {
        let s = build_system(&r.graph, &r.hypothesis)?;
        for (k, b) in r.clusters.iter().enumerate() {
            let certificate = to_coordinate_form(&s, &b.edge_mid())
                .ok()
                .map(|cs| uniqueness_certificate(b, &cs));
            let unique = certificate
                .as_ref()
                .is_some_and(|c| c.verdict == Verdict::UniqueInBox);
            let tol = match &certificate {
                Some(c) if unique => c.radius,
                _ => NUMERIC_MATCH_TOL,
            };
            let atlas = if b.positions.len() == n {
                match_to_atlas(b, n, tol).map(|m| (m.variant, m.distance))
            } else {
                None
            };
            out.push(CertifiedCluster {
                graph_index: r.graph_index,
                cluster: k,
                d: b.d,
                certified: unique && atlas.is_some(),
                certificate,
                atlas,
            });
        }
    }
    Ok(out)
}

pub fn format_certificates(cs: &[CertifiedCluster]) -> String {
    let mut s = String::new();
    for c in cs {
        write!(
            s,
            "certificate graph={} cluster={} d=[{:?}, {:?}]",
            c.graph_index,
            c.cluster,
            c.d.lo(),
            c.d.hi()
        )
        .unwrap();
        match &c.certificate {
            Some(r) => {
                write!(
                    s,
                    " verdict={} delta={:?} epsilon={:?} h={:?} radius={:?}",
                    r.verdict, r.delta, r.epsilon, r.h, r.radius
                )
                .unwrap();
                match r.inv_norm_bound {
                    Some(b) => write!(s, " inv-norm-bound={b:?}").unwrap(),
                    None => s.push_str(" inv-norm-bound=none"),
                }
            }
            None => s.push_str(" verdict=none"),
        }
        match c.atlas {
            Some((v, dist)) => write!(s, " atlas={v} distance={dist:?}").unwrap(),
            None => s.push_str(" atlas=none"),
        }
        writeln!(s, " certified={}", c.certified).unwrap();
    }
    s
}
