mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use torus_packing::atlas::{known_entry, variant_count, Status};
use torus_packing::certify::{verify_configuration, KktVerdict};
use torus_packing::enumerate::{enumerate_candidates, EnumerationSpec};
use torus_packing::graph::{format_graph, parse_graphs};
use torus_packing::pipeline::{format_report, pipeline, run_graphs, PipelineParams};
use torus_packing::records::{
    certify_records, format_certificates, format_records, parse_records, solve_graphs,
};
use torus_packing::solver::{Mode, SearchRegion, SolveParams};
use torus_packing::svg::render_svg;
use torus_packing::system::build_system;
use torus_packing::torus::Configuration;

use manifest::Manifest;

#[derive(Parser)]
#[command(
    name = "torpack",
    version,
    about = "Optimal circle packings on the square flat torus"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "TORPACK_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List candidate contact graphs as toroidal maps.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isolate the solutions of every shift hypothesis of every graph.
    Solve {
        #[arg(long)]
        graphs: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value = "angle")]
        mode: Mode,
        /// Also write every constraint system to this file.
        #[arg(long)]
        dump_system: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniqueness certificates and atlas matches for solver clusters.
    Certify {
        #[arg(long)]
        boxes: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate, solve, certify and match; one fate per graph.
    Pipeline {
        #[arg(long)]
        n: usize,
        /// Use this graph list instead of enumerating.
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        /// Skip graphs on N - 1 vertices with a free disk.
        #[arg(long)]
        no_free_vertex: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance, contacts and first-order optimality of a configuration.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        source: Source,
        /// Defaults to the atlas value for N.
        #[arg(long)]
        expected: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Known optimal configurations.
    Atlas {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        variant: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a configuration as SVG.
    Render {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        source: Source,
        /// Disk diameter; defaults to the minimum distance.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dmin: Option<f64>,
    #[arg(long)]
    dmax: Option<f64>,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
}

#[derive(Args)]
struct Source {
    /// Atlas variant.
    #[arg(long, conflicts_with = "coords")]
    variant: Option<usize>,
    /// File of `x y` lines.
    #[arg(long)]
    coords: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

impl SearchArgs {
    fn region(&self, n: usize) -> Result<SearchRegion> {
        let default = PipelineParams::new(n)?.region;
        let lo = self.dmin.unwrap_or(default.d.lo());
        let hi = self.dmax.unwrap_or(default.d.hi());
        Ok(SearchRegion::new(lo, hi)?)
    }

    fn record(&self, m: &mut Manifest, region: &SearchRegion) {
        m.param("dmin", format!("{:?}", region.d.lo()));
        m.param("dmax", format!("{:?}", region.d.hi()));
        if let Some(b) = self.budget_nodes {
            m.param("budget-nodes", b);
        }
        if let Some(t) = self.budget_seconds {
            m.param("budget-seconds", t);
        }
    }

    fn budget_time(&self) -> Option<Duration> {
        self.budget_seconds.map(Duration::from_secs_f64)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_coords(m: &mut Manifest, path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = m.input(path)?;
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .with_context(|| format!("{}:{}: bad number {t:?}", path.display(), i + 1))
            })
            .collect::<Result<_>>()?;
        let [x, y] = v[..] else {
            bail!("{}:{}: expected two coordinates", path.display(), i + 1);
        };
        pts.push([x, y]);
    }
    Ok(pts)
}

/// Coordinates from a file or an atlas entry, plus the atlas diameter when
/// known.
fn load_source(
    m: &mut Manifest,
    n: Option<usize>,
    src: &Source,
) -> Result<(Vec<[f64; 2]>, Option<f64>)> {
    match (&src.coords, n) {
        (Some(path), _) => {
            m.param("coords", path.display());
            Ok((read_coords(m, path)?, None))
        }
        (None, Some(n)) => {
            let v = src.variant.unwrap_or(1);
            m.param("variant", v);
            let e = known_entry(n, v)?;
            Ok((e.config.coords(), Some(e.d)))
        }
        (None, None) => bail!("give --coords or --n"),
    }
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()?;
    }
    match cli.command {
        Command::Enumerate { n, edges, out } => {
            let mut spec = EnumerationSpec::new(n);
            if let Some(e) = edges {
                spec = spec.with_edges(e);
            }
            let graphs = enumerate_candidates(&spec)?;
            let mut m = Manifest::new("enumerate");
            m.param("n", n)
                .param("edges", spec.e)
                .count("graphs", graphs.len());
            let mut text = m.header();
            for g in &graphs {
                text.push_str(&format_graph(g));
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Solve {
            graphs,
            n,
            search,
            tol,
            mode,
            dump_system,
            out,
        } => {
            let mut m = Manifest::new("solve");
            let (list, warnings) = parse_graphs(&m.input(&graphs)?)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let region = search.region(n)?;
            m.param("n", n);
            search.record(&mut m, &region);
            m.param("tol", tol).param("mode", mode);
            let params = SolveParams {
                mode,
                tol,
                budget_nodes: search.budget_nodes,
                budget_time: search.budget_time(),
            };
            let records = solve_graphs(&list, &region, &params)?;
            m.count("graphs", list.len())
                .count("records", records.len())
                .count("boxes", records.iter().map(|r| r.boxes.len()).sum())
                .count("clusters", records.iter().map(|r| r.clusters.len()).sum())
                .count("exhausted", records.iter().filter(|r| r.exhausted).count());
            if let Some(path) = dump_system {
                let mut text = m.header();
                for r in &records {
                    text.push_str(&format!("graph {}\n", r.graph_index));
                    text.push_str(&build_system(&r.graph, &r.hypothesis)?.dump());
                }
                emit(Some(&path), &text)?;
            }
            emit(out.as_deref(), &(m.header() + &format_records(&records)))?;
            Ok(0)
        }
        Command::Certify { boxes, n, out } => {
            let mut m = Manifest::new("certify");
            let records = parse_records(&m.input(&boxes)?)?;
            let certs = certify_records(&records, n)?;
            let certified = certs.iter().filter(|c| c.certified).count();
            m.param("n", n)
                .count("records", records.len())
                .count("clusters", certs.len())
                .count("certified", certified);
            emit(out.as_deref(), &(m.header() + &format_certificates(&certs)))?;
            Ok(if certified == certs.len() { 0 } else { 2 })
        }
        Command::Pipeline {
            n,
            graphs,
            search,
            no_free_vertex,
            out,
        } => {
            let mut m = Manifest::new("pipeline");
            let mut params =
                PipelineParams::new(n)?.with_budget(search.budget_nodes, search.budget_time());
            params.region = search.region(n)?;
            params.free_vertex = !no_free_vertex;
            m.param("n", n);
            search.record(&mut m, &params.region);
            m.param("free-vertex", params.free_vertex);
            let report = match &graphs {
                Some(path) => {
                    let (list, warnings) = parse_graphs(&m.input(path)?)?;
                    for w in &warnings {
                        eprintln!("warning: {w}");
                    }
                    run_graphs(&list, &params)?
                }
                None => pipeline(&params)?,
            };
            let c = report.counts();
            m.count("graphs", c.graphs)
                .count("systems", c.systems)
                .count("boxes", c.boxes)
                .count("certificates", c.certificates)
                .count("eliminated", c.eliminated)
                .count("matched", c.matched)
                .count("reducible", c.reducible)
                .count("survivors", c.survivors)
                .count("exhausted", c.exhausted);
            emit(out.as_deref(), &(m.header() + &format_report(&report)))?;
            Ok(if report.all_resolved() { 0 } else { 2 })
        }
        Command::Verify {
            n,
            source,
            expected,
            out,
        } => {
            let mut m = Manifest::new("verify");
            m.param("n", n);
            let (pts, atlas_d) = load_source(&mut m, Some(n), &source)?;
            let expected = match expected.or(atlas_d) {
                Some(d) => d,
                None => known_entry(n, 1)?.d,
            };
            m.param("expected", format!("{expected:?}"));
            let r = verify_configuration(n, &pts, expected)?;
            m.count("contacts", r.contacts.len());
            let mut text = m.header();
            let status = match r.status {
                Some(Status::Proven) => "proven",
                Some(Status::Conjectured) => "conjectured",
                None => "unknown",
            };
            let kkt = match &r.kkt {
                KktVerdict::Satisfied { .. } => "satisfied",
                KktVerdict::Violated { .. } => "violated",
            };
            text.push_str(&format!(
                "verify n={} min-distance={:?} expected={:?} deviation={:?} density={:?} kkt={kkt} atlas-status={status} pass={}\n",
                r.n, r.min_distance, r.expected, r.deviation, r.density, r.pass
            ));
            for c in &r.contacts {
                text.push_str(&format!(
                    "contact {} {} shift={},{}\n",
                    c.i, c.j, c.shift[0], c.shift[1]
                ));
            }
            match &r.kkt {
                KktVerdict::Satisfied { stresses } => {
                    for (k, s) in stresses.iter().enumerate() {
                        text.push_str(&format!("stress {k} {s:?}\n"));
                    }
                }
                KktVerdict::Violated { direction } => {
                    for (i, v) in direction.iter().enumerate() {
                        text.push_str(&format!("direction {i} {:?} {:?}\n", v[0], v[1]));
                    }
                }
            }
            emit(out.as_deref(), &text)?;
            Ok(if r.pass { 0 } else { 2 })
        }
        Command::Atlas {
            n,
            variant,
            format,
            out,
        } => {
            let variants: Vec<usize> = match variant {
                Some(v) => vec![v],
                None => (1..=variant_count(n)).collect(),
            };
            let mut m = Manifest::new("atlas");
            m.param("n", n).param(
                "format",
                match format {
                    Format::Text => "text",
                    Format::Csv => "csv",
                },
            );
            if let Some(v) = variant {
                m.param("variant", v);
            }
            let entries = variants
                .iter()
                .map(|&v| known_entry(n, v))
                .collect::<Result<Vec<_>, _>>()?;
            m.count("variants", entries.len());
            let mut text = m.header();
            if let Format::Csv = format {
                text.push_str("n,variant,status,d,index,x,y,free\n");
            }
            for e in &entries {
                let status = match e.status {
                    Status::Proven => "proven",
                    Status::Conjectured => "conjectured",
                };
                if let Format::Text = format {
                    text.push_str(&format!(
                        "atlas n={} variant={} status={status} d={:?} expr={}\n",
                        e.n, e.variant, e.d, e.d_expr
                    ));
                }
                for (i, p) in e.config.coords().iter().enumerate() {
                    let free = e.free_vertex == Some(i);
                    match format {
                        Format::Text => text.push_str(&format!(
                            "point {i} {:?} {:?}{}\n",
                            p[0],
                            p[1],
                            if free { " free" } else { "" }
                        )),
                        Format::Csv => text.push_str(&format!(
                            "{},{},{status},{:?},{i},{:?},{:?},{free}\n",
                            e.n, e.variant, e.d, p[0], p[1]
                        )),
                    }
                }
            }
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Render { n, source, d, out } => {
            let mut m = Manifest::new("render");
            if let Some(n) = n {
                m.param("n", n);
            }
            let (pts, atlas_d) = load_source(&mut m, n, &source)?;
            let c = Configuration::from_coords(&pts);
            let d = match d.or(atlas_d) {
                Some(d) => d,
                None if pts.len() >= 2 => torus_packing::torus::min_pairwise_distance(&c)?,
                None => bail!("give --d for a single point"),
            };
            m.param("d", format!("{d:?}")).count("points", pts.len());
            let svg = render_svg(&c, d);
            let (decl, body) = svg.split_once('\n').unwrap_or(("", &svg));
            emit(Some(&out), &format!("{decl}\n{}{body}", m.xml_comment()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
