//! plankcheck: coverage checks, width-ratio sums, and peeling
//! certificates for planks over convex bodies.
//!
//! Exit codes are part of the interface: 0 for a positive verdict, 1 for
//! a negative domain verdict (uncovered scene, no peeling order, rejected
//! certificate), 2 for operational errors (unreadable or malformed input,
//! exhausted budgets, unsupported dimension).

use clap::{Parser, Subcommand, ValueEnum};
use plank_cli::{doc, svg};
use plank_core::certifier::{bang_sum, certify, find_peeling_order, verify_certificate, Certificate};
use plank_core::configurations::{hunter_triangle, random_peelable_scene, slab_partition, Scene};
use plank_core::coverage::{residual_cells, PlankSide, ResidualCell};
use plank_core::error::{CertifyError, SearchError};
use plank_core::geometry::{ConvexBody, Direction, Vector};
use plank_core::planks::bang_ratio;
use plank_core::{Params, Quad, Scalar};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plankcheck",
    version,
    about = "Coverage and peeling certificates for planks over convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Arithmetic backend: exact rationals over Q(sqrt 3) or f64.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Float)]
    backend: BackendArg,
    /// Comparison tolerance; the residual classification threshold scales
    /// with it. Defaults to the backend's native tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Budget on enumerated residual cells.
    #[arg(long, global = true)]
    cell_budget: Option<u64>,
    /// Budget on residual evaluations during order search.
    #[arg(long, global = true)]
    search_budget: Option<u64>,
    /// Seed for sampled certificate directions and random scenes.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the planks cover the body.
    Check { scene: PathBuf },
    /// Print each plank's width, the body width in its direction, and the
    /// sum of the ratios.
    Sum { scene: PathBuf },
    /// Produce a peeling certificate, searching for an order if none is
    /// given.
    Certify {
        scene: PathBuf,
        /// Comma-separated plank indices, e.g. 0,2,1.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Certificate output path; defaults to the scene path with a
        /// .cert.json extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored certificate against its scene.
    Verify {
        certificate: PathBuf,
        #[arg(long)]
        scene: PathBuf,
    },
    /// Draw a two-dimensional scene as SVG, optionally overlaying one
    /// certificate step.
    Render {
        scene: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Certificate step to overlay (0-based).
        #[arg(long, requires = "certificate")]
        step: Option<usize>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a scene document.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Three width-1/3 planks on the bisectors of an equilateral triangle:
    /// covered, ratio sum exactly one, and no peeling order.
    Hunter {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition of the unit square into k parallel slabs.
    Slabs {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Interior cut positions in (0,1), comma-separated, one fewer
        /// than k.
        #[arg(long, value_delimiter = ',')]
        cuts: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A random scene built to admit a peeling order.
    Random {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        planks: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.backend {
        BackendArg::Float => run::<f64>(&cli),
        BackendArg::Rational => run::<Quad>(&cli),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run<S: Scalar>(cli: &Cli) -> Result<u8, Failure> {
    let params = make_params::<S>(cli);
    match &cli.cmd {
        Cmd::Check { scene } => cmd_check::<S>(scene, &params),
        Cmd::Sum { scene } => cmd_sum::<S>(scene, &params),
        Cmd::Certify { scene, order, out } => {
            cmd_certify::<S>(scene, order.as_deref(), out.as_deref(), &params)
        }
        Cmd::Verify { certificate, scene } => cmd_verify::<S>(certificate, scene, &params),
        Cmd::Render {
            scene,
            certificate,
            step,
            out,
        } => cmd_render::<S>(scene, certificate.as_deref(), *step, out.as_deref(), &params),
        Cmd::Generate { kind } => cmd_generate::<S>(cli, kind),
    }
}

fn make_params<S: Scalar>(cli: &Cli) -> Params<S> {
    let mut p = Params::default();
    if let Some(t) = cli.tol {
        p.tol = S::from_f64(t);
        p.conv_tol = S::from_f64(t * 100.0);
    }
    if let Some(b) = cli.cell_budget {
        p.cell_budget = b;
    }
    if let Some(b) = cli.search_budget {
        p.search_budget = b;
    }
    if let Some(s) = cli.seed {
        p.seed = s;
    }
    p
}

fn backend_name<S: Scalar>() -> &'static str {
    if S::EXACT {
        "rational"
    } else {
        "float"
    }
}

fn load_scene<S: Scalar>(path: &Path) -> Result<(Scene<S>, Vec<u8>), Failure> {
    let raw = std::fs::read(path)
        .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
    let document: doc::SceneDocument = serde_json::from_slice(&raw)
        .map_err(|e| fail(format!("malformed scene document: {e}")))?;
    let scene = doc::doc_to_scene(&document).map_err(fail)?;
    Ok((scene, raw))
}

fn write_or_print(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| fail(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{}", String::from_utf8_lossy(bytes));
            Ok(())
        }
    }
}

fn sign_string(signs: &[PlankSide]) -> String {
    signs
        .iter()
        .map(|s| match s {
            PlankSide::Below => '-',
            PlankSide::Inside => '0',
            PlankSide::Above => '+',
        })
        .collect()
}

fn point_string<S: Scalar>(v: &Vector<S>) -> String {
    let coords: Vec<String> = v.coords.iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(", "))
}

fn cmd_check<S: Scalar>(path: &Path, params: &Params<S>) -> Result<u8, Failure> {
    let (scene, _) = load_scene::<S>(path)?;
    let cells = residual_cells(&scene.body, &scene.planks, params)
        .map_err(|e| fail(e.to_string()))?;
    let mut uncovered: Vec<&ResidualCell<S>> = Vec::new();
    for cell in &cells {
        if cell.strict_radius > params.tol {
            println!(
                "cell {}: uncovered, inner radius {}",
                sign_string(&cell.signs),
                cell.strict_radius
            );
            uncovered.push(cell);
        } else {
            println!("cell {}: covered", sign_string(&cell.signs));
        }
    }
    if uncovered.is_empty() {
        println!("covered");
        return Ok(0);
    }
    uncovered.sort_by(|a, b| {
        b.strict_radius
            .partial_cmp(&a.strict_radius)
            .expect("scalar order is total")
    });
    if let Some(w) = &uncovered[0].witness {
        println!("witness: {}", point_string(w));
    }
    println!("uncovered");
    Ok(1)
}

fn cmd_sum<S: Scalar>(path: &Path, _params: &Params<S>) -> Result<u8, Failure> {
    let (scene, _) = load_scene::<S>(path)?;
    for (i, plank) in scene.planks.iter().enumerate() {
        let w = plank.width();
        let wv = scene
            .body
            .width(plank.direction())
            .map_err(|e| fail(e.to_string()))?;
        let ratio = bang_ratio(plank, &scene.body).map_err(|e| fail(e.to_string()))?;
        println!("plank {i}: width = {w}, body width = {wv}, ratio = {ratio}");
    }
    let total = bang_sum(&scene.body, &scene.planks).map_err(|e| fail(e.to_string()))?;
    println!("bang sum = {total}");
    Ok(0)
}

fn cmd_certify<S: Scalar>(
    path: &Path,
    order: Option<&[usize]>,
    out: Option<&Path>,
    params: &Params<S>,
) -> Result<u8, Failure> {
    let (scene, raw) = load_scene::<S>(path)?;
    let order: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => match find_peeling_order(&scene.body, &scene.planks, params) {
            Ok(o) => o,
            Err(SearchError::NotCovered) => {
                println!("planks do not cover the body; nothing to certify");
                return Ok(1);
            }
            Err(SearchError::NoOrder) => {
                println!("no peeling order exists for this scene");
                return Ok(1);
            }
            Err(SearchError::BudgetExceeded(n)) => {
                return Err(fail(format!(
                    "order search exhausted its budget of {n} residual evaluations"
                )));
            }
            Err(SearchError::Coverage(e)) => return Err(fail(e.to_string())),
        },
    };
    let cert = match certify(&scene.body, &scene.planks, &order, params) {
        Ok(c) => c,
        Err(e @ CertifyError::NotCovered)
        | Err(e @ CertifyError::NotPermutation)
        | Err(e @ CertifyError::InvalidOrder { .. }) => {
            println!("{e}");
            return Ok(1);
        }
        Err(e) => return Err(fail(e.to_string())),
    };
    let digest = doc::sha256_hex(&raw);
    let document = doc::cert_to_doc(&cert, backend_name::<S>(), &params.tol, &digest);
    let out_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| path.with_extension("cert.json"));
    std::fs::write(&out_path, doc::to_json_bytes(&document))
        .map_err(|e| fail(format!("cannot write {}: {e}", out_path.display())))?;
    let order_text: Vec<String> = cert.order.iter().map(usize::to_string).collect();
    println!("order: {}", order_text.join(","));
    println!("bang sum = {}", cert.bang_sum);
    println!("chain bound = {}", cert.chain_bound);
    println!("certificate written to {}", out_path.display());
    if cert.verified {
        println!("verdict: verified");
        Ok(0)
    } else {
        Err(fail("certificate failed its own consistency checks"))
    }
}

fn cmd_verify<S: Scalar>(
    cert_path: &Path,
    scene_path: &Path,
    params: &Params<S>,
) -> Result<u8, Failure> {
    let (scene, raw) = load_scene::<S>(scene_path)?;
    let cert_raw = std::fs::read(cert_path)
        .map_err(|e| fail(format!("cannot read {}: {e}", cert_path.display())))?;
    let document: doc::CertificateDocument = serde_json::from_slice(&cert_raw)
        .map_err(|e| fail(format!("malformed certificate document: {e}")))?;
    let mut failures: Vec<String> = Vec::new();
    if document.scene_digest != doc::sha256_hex(&raw) {
        failures.push("scene digest does not match the certificate".into());
    }
    if document.backend != backend_name::<S>() {
        println!(
            "note: certificate was produced by the {} backend, verifying with {}",
            document.backend,
            backend_name::<S>()
        );
    }
    let cert: Certificate<S> =
        doc::doc_to_cert(&document, scene.body.dim()).map_err(fail)?;
    let verification = verify_certificate(&cert, &scene.body, &scene.planks, params);
    failures.extend(verification.diagnostics);
    for d in &failures {
        println!("check failed: {d}");
    }
    if failures.is_empty() {
        println!("certificate ok: chain bound = {}", cert.chain_bound);
        Ok(0)
    } else {
        println!("certificate rejected");
        Ok(1)
    }
}

fn cmd_render<S: Scalar>(
    scene_path: &Path,
    certificate: Option<&Path>,
    step: Option<usize>,
    out: Option<&Path>,
    params: &Params<S>,
) -> Result<u8, Failure> {
    let (scene, _) = load_scene::<S>(scene_path)?;
    if scene.body.dim() != 2 {
        return Err(fail(format!(
            "rendering requires dimension 2, got {}",
            scene.body.dim()
        )));
    }
    let cert: Option<Certificate<S>> = match certificate {
        None => None,
        Some(path) => {
            let raw = std::fs::read(path)
                .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
            let document: doc::CertificateDocument = serde_json::from_slice(&raw)
                .map_err(|e| fail(format!("malformed certificate document: {e}")))?;
            Some(doc::doc_to_cert(&document, 2).map_err(fail)?)
        }
    };
    let step_ref = match &cert {
        None => None,
        Some(c) => {
            let idx = step.unwrap_or(0);
            Some(c.steps.get(idx).ok_or_else(|| {
                fail(format!(
                    "certificate has {} steps, step {idx} does not exist",
                    c.steps.len()
                ))
            })?)
        }
    };
    let image = svg::render(&scene.body, &scene.planks, step_ref, params).map_err(fail)?;
    write_or_print(out, image.as_bytes())?;
    Ok(0)
}

fn cmd_generate<S: Scalar>(cli: &Cli, kind: &GenerateKind) -> Result<u8, Failure> {
    let (scene, out): (Scene<S>, Option<&Path>) = match kind {
        GenerateKind::Hunter { out } => (hunter_triangle(), out.as_deref()),
        GenerateKind::Slabs { k, cuts, out } => {
            if *k < 1 {
                return Err(fail("slab count must be at least 1"));
            }
            if cuts.len() + 1 != *k {
                return Err(fail(format!(
                    "{k} slabs need exactly {} interior cuts, got {}",
                    k - 1,
                    cuts.len()
                )));
            }
            let mut prev = 0.0f64;
            for &c in cuts {
                if !(c > prev && c < 1.0) {
                    return Err(fail(
                        "cuts must be strictly increasing and lie strictly between 0 and 1",
                    ));
                }
                prev = c;
            }
            let body = ConvexBody::from_box(&[S::zero(), S::zero()], &[S::one(), S::one()]);
            let direction =
                Direction::new(Vector::axis(2, 0)).expect("axis directions normalize");
            let cut_scalars: Vec<S> = cuts.iter().map(|&c| S::from_f64(c)).collect();
            let planks = slab_partition(&body, &direction, *k, &cut_scalars)
                .map_err(|e| fail(e.to_string()))?;
            (
                Scene {
                    body,
                    planks,
                    label: format!("slabs-k{k}"),
                },
                out.as_deref(),
            )
        }
        GenerateKind::Random { dim, planks, out } => {
            if *dim < 2 {
                return Err(fail("random scenes need dimension at least 2"));
            }
            if *planks < 1 {
                return Err(fail("random scenes need at least one plank"));
            }
            (
                random_peelable_scene(cli.seed.unwrap_or(7), *dim, *planks),
                out.as_deref(),
            )
        }
    };
    let bytes = doc::to_json_bytes(&doc::scene_to_doc(&scene));
    write_or_print(out, &bytes)?;
    Ok(0)
}
