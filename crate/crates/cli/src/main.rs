use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use menger_knots::embed::{embed_grid, SPLICE_MARK};
use menger_knots::geom::{fmt_rat, Point3};
use menger_knots::grid::catalog;
use menger_knots::io::{self, Body, Check, Document, LedgerJson, PolylineJson, Report};
use menger_knots::necklace::{make_necklace, pearl_count};
use menger_knots::squareflake::{replaced_count, squareflake};
use menger_knots::ternary::{in_space, in_stage, refutation, witness, Space};
use menger_knots::wildknot::{approximant, parity_plan, wild_set_plan, BuildOptions, KnotAssignment, Summand};

#[derive(Parser, Debug)]
#[command(name = "menger-knots", version, about = "Exact knots in the Menger sponge")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for written artifacts.
    #[arg(long, global = true, env = "MENGER_KNOTS_OUT", default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide membership of a point in a fractal, with a certificate.
    #[command(group(ArgGroup::new("space").required(true)))]
    Predicate {
        #[arg(long, group = "space")]
        sponge: bool,
        #[arg(long, group = "space")]
        cantor: bool,
        #[arg(long, group = "space")]
        carpet_face: bool,
        #[arg(long, group = "space")]
        carpet2: bool,
        /// Test the stage-k prefractal instead of the limit set.
        #[arg(long)]
        stage: Option<usize>,
        /// Coordinates as rationals, e.g. 1/3.
        #[arg(required = true)]
        coords: Vec<String>,
    },
    /// Build an object, write it, and verify it.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Re-run all checks on a stored JSON artifact.
    Verify { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum BuildCmd {
    /// A catalog knot embedded in a sponge stage.
    Embed {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        stage: Option<u32>,
    },
    /// The squareflake curve S_m.
    Squareflake {
        #[arg(long)]
        stage: u32,
    },
    /// The connected-sum approximant K_m.
    Wildknot {
        #[arg(long)]
        stage: u32,
        /// `all:<knot>`, `parity:<knot>` or `trivial`; ignored with --targets.
        #[arg(long, default_value = "all:trefoil")]
        assign: String,
        /// Comma-separated Cantor-set heights on the right edge.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Knot placed next to each target.
        #[arg(long, default_value = "trefoil")]
        knot: String,
        /// Splice flat unknots at trivial sites.
        #[arg(long)]
        splice_trivial: bool,
        /// Compute the determinant even for large approximants.
        #[arg(long)]
        det: bool,
    },
    /// A pearl chain necklace and its generations.
    Necklace {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gen: usize,
        /// Catalog knot carrying the pearls.
        #[arg(long, default_value = "unknot")]
        knot: String,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Checks,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn parse_space(sponge: bool, cantor: bool, carpet_face: bool, carpet2: bool) -> Space {
    match (sponge, cantor, carpet_face, carpet2) {
        (true, ..) => Space::Sponge,
        (_, true, ..) => Space::Cantor,
        (_, _, true, _) => Space::CarpetFace,
        _ => Space::Carpet2,
    }
}

fn predicate(space: Space, stage: Option<usize>, coords: &[String]) -> anyhow::Result<Value> {
    if coords.len() != space.dim() {
        bail!("{} takes {} coordinates, got {}", space.name(), space.dim(), coords.len());
    }
    let c = coords.iter().map(|s| io::parse_rat(s)).collect::<Result<Vec<_>, _>>()?;
    let coords: Vec<String> = c.iter().map(fmt_rat).collect();
    if let Some(k) = stage {
        let verdict = in_stage(space, &c, k)?;
        return Ok(json!({"space": space.name(), "coords": coords, "stage": k, "verdict": verdict}));
    }
    let verdict = in_space(space, &c)?;
    let mut out = json!({"space": space.name(), "coords": coords, "verdict": verdict});
    if let Some(w) = witness(space, &c)? {
        out["witness"] = json!(w.iter().map(|e| e.to_string()).collect::<Vec<_>>());
    } else if let Some((k, cells)) = refutation(space, &c, 256)? {
        let cells: Vec<Vec<[String; 2]>> = cells
            .iter()
            .map(|cell| cell.iter().map(|(lo, hi)| [fmt_rat(lo), fmt_rat(hi)]).collect())
            .collect();
        out["refutation"] = json!({"stage": k, "removed_cells": cells});
    }
    Ok(out)
}

fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn report_json(report: &Report, extra: Value, files: &[PathBuf]) -> Value {
    let mut v = json!({
        "kind": report.kind,
        "pass": report.pass(),
        "checks": report.checks,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), extra) {
        obj.extend(extra);
    }
    if let Some(f) = report.first_failure() {
        v["first_failure"] = json!(f.name);
    }
    v
}

fn knot_det(name: &str) -> anyhow::Result<num_bigint::BigInt> {
    Ok(catalog(name)?.to_planar().knot_diagram()?.determinant()?)
}

fn build(cmd: &BuildCmd, out: &Path) -> anyhow::Result<(Report, Value, Vec<PathBuf>)> {
    match cmd {
        BuildCmd::Embed { knot, stage } => {
            let grid = catalog(knot)?;
            let (poly, rep) = embed_grid(&grid, *stage)?;
            let doc = Document::new(Body::Embed {
                knot: knot.clone(),
                grid: grid.clone(),
                stage: rep.stage,
                polyline: PolylineJson::from_polyline(&poly),
            });
            let files = vec![
                write(out, &format!("embed-{knot}.json"), &doc.to_json())?,
                write(out, &format!("embed-{knot}.obj"), &io::to_obj(&poly))?,
            ];
            let report = io::verify(&doc)?;
            let diagram = grid.to_planar().knot_diagram()?;
            let extra = json!({
                "knot": knot,
                "n": grid.n,
                "stage": rep.stage,
                "segments": poly.len(),
                "simple": rep.simple,
                "determinant": diagram.determinant()?.to_string(),
                "tricolorings": diagram.tricolorings().to_string(),
                "splice_mark": poly.mark(SPLICE_MARK),
            });
            Ok((report, extra, files))
        }
        BuildCmd::Squareflake { stage } => {
            let s = squareflake(*stage);
            let doc = Document::new(Body::Squareflake {
                m: *stage,
                polyline: PolylineJson::from_polyline(&s.polyline),
            });
            let files = vec![
                write(out, &format!("squareflake-m{stage}.json"), &doc.to_json())?,
                write(out, &format!("squareflake-m{stage}.obj"), &io::to_obj(&s.polyline))?,
            ];
            let mut report = io::verify(&doc)?;
            let counts: Vec<usize> = (1..=*stage).map(|q| s.detours_at(q).count()).collect();
            let ok = (1..=*stage).all(|q| counts[q as usize - 1] as u64 == replaced_count(q));
            report.checks.push(Check {
                name: "replaced count".into(),
                pass: ok,
                detail: format!("{counts:?}"),
            });
            Ok((report, json!({"m": stage, "vertices": s.polyline.len()}), files))
        }
        BuildCmd::Wildknot {
            stage,
            assign,
            targets,
            knot,
            splice_trivial,
            det,
        } => {
            let m = *stage;
            if m == 0 {
                bail!("--stage must be at least 1");
            }
            let plan: KnotAssignment = if !targets.is_empty() {
                let ys = targets.iter().map(|t| io::parse_rat(t)).collect::<Result<Vec<_>, _>>()?;
                wild_set_plan(&ys, &Summand::named(knot)?, m)?
            } else if assign == "trivial" {
                KnotAssignment::trivial(m)
            } else if let Some(k) = assign.strip_prefix("all:") {
                KnotAssignment::uniform(m, &Summand::named(k)?)
            } else if let Some(k) = assign.strip_prefix("parity:") {
                parity_plan(&Summand::named(k)?, m)
            } else {
                bail!("unknown assignment `{assign}`");
            };
            let opts = BuildOptions {
                splice_trivial: *splice_trivial,
            };
            let a = approximant(&plan, m, opts)?;
            let doc = Document::new(Body::Wildknot {
                m,
                stage: a.stage,
                ledger: a.ledger.iter().map(LedgerJson::from_record).collect(),
                polyline: PolylineJson::from_polyline(&a.polyline),
            });
            let files = vec![
                write(out, &format!("wildknot-m{m}.json"), &doc.to_json())?,
                write(out, &format!("wildknot-m{m}.obj"), &io::to_obj(&a.polyline))?,
            ];
            let mut report = io::verify(&doc)?;
            let mut extra = json!({
                "m": m,
                "stage": a.stage,
                "ledger_count": a.ledger.len(),
                "nontrivial": a.nontrivial_count(),
                "segments": a.polyline.len(),
            });
            if *det || a.nontrivial_count() <= 40 {
                let mut expect = num_bigint::BigInt::from(1);
                for r in a.ledger.iter().filter(|r| r.nontrivial) {
                    expect *= knot_det(r.knot.trim_end_matches('*'))?;
                }
                let dir = Point3::from_ratios([(0, 1), (0, 1), (1, 1)]);
                let got = menger_knots::invariants::project_collapsing(&a.polyline, &dir)?.determinant()?;
                report.checks.push(Check {
                    name: "determinant".into(),
                    pass: got == expect,
                    detail: format!("projection {got}, product of summands {expect}"),
                });
                extra["determinant"] = json!(got.to_string());
            }
            Ok((report, extra, files))
        }
        BuildCmd::Necklace { n, gen, knot } => {
            let (poly, _) = embed_grid(&catalog(knot)?, None)?;
            let t = make_necklace(&poly, *n)?;
            let levels = t.iterate(*gen)?;
            let doc = io::necklace_document(&t, &levels);
            let samples: Vec<Point3> = levels.last().into_iter().flatten().map(|p| p.center.clone()).collect();
            let files = vec![
                write(out, &format!("necklace-n{n}-g{gen}.json"), &doc.to_json())?,
                write(out, &format!("necklace-n{n}-g{gen}.ply"), &io::to_ply(&samples))?,
            ];
            let report = io::verify(&doc)?;
            let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
            let extra = json!({
                "n": n,
                "generation": gen,
                "pearls": counts.last(),
                "expected": pearl_count(*n as u64, *gen as u32),
                "per_generation": counts,
            });
            Ok((report, extra, files))
        }
    }
}

fn log(out: &Path, line: &str) {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    if fs::create_dir_all(out).is_ok() {
        if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(out.join("menger-knots.log")) {
            let _ = writeln!(f, "{secs} {line}");
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let (value, pass) = match &cli.cmd {
        Cmd::Predicate {
            sponge,
            cantor,
            carpet_face,
            carpet2,
            stage,
            coords,
        } => {
            let space = parse_space(*sponge, *cantor, *carpet_face, *carpet2);
            (predicate(space, *stage, coords)?, true)
        }
        Cmd::Build(b) => {
            let (report, extra, files) = build(b, &cli.out)?;
            let pass = report.pass();
            log(&cli.out, &format!("build {} pass={pass}", report.kind));
            (report_json(&report, extra, &files), pass)
        }
        Cmd::Verify { file } => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let doc = Document::from_json(&text).map_err(anyhow::Error::from)?;
            let report = io::verify(&doc).map_err(anyhow::Error::from)?;
            let pass = report.pass();
            log(&cli.out, &format!("verify {} pass={pass}", file.display()));
            (report_json(&report, json!({"file": file.display().to_string()}), &[]), pass)
        }
    };
    println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
