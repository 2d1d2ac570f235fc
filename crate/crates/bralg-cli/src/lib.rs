//! Command-line interface over the algebra engine: declarative config
//! loading, one subcommand per public operation, deterministic text output
//! and a schema-stable JSON rendering behind `--json`.
//!
//! Exit codes: 0 success, 2 parse errors (config, expressions, module
//! files, flag values), 3 precondition failures, 4 verifier failures.

pub mod config;

use bralg::bralgebra::{parse_graded_element, BRAlgebra, BRError, Centrality};
use bralg::linalg::{format_vector, parse_matrix, parse_vector};
use bralg::polyring::{parse_polynomial, parse_scalar, Ideal, PolyError, RingAutomorphism};
use bralg::spectrum::{
    nonsimplicity_witness, orbit, parse_point, OrbitKind, OrbitView, SpectrumError,
};
use bralg::weightmod::{
    build_finite_simples, build_infinite_simples, read_module, theta_isomorphic, write_module,
    ClassifiedModule, SimplicityVerdict, ThetaModule, WeightError, WeightModule,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Classified command failure; the variant fixes the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input text: config, expression, point, matrix, module file.
    Parse(String),
    /// Structurally valid input that violates an operation's precondition.
    Precondition(String),
    /// A module failed the well-definedness verifier.
    Verification(String),
    /// Filesystem problems (missing config, unwritable output).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Precondition(_) => "precondition",
            CliError::Verification(_) => "verification",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Precondition(m)
            | CliError::Verification(m)
            | CliError::Io(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

fn classify_poly(e: PolyError) -> CliError {
    match e {
        PolyError::Parse { .. } => CliError::Parse(e.to_string()),
        other => CliError::Precondition(other.to_string()),
    }
}

fn classify_bralg(e: BRError) -> CliError {
    match e {
        BRError::Poly(p) => classify_poly(p),
        other => CliError::Precondition(other.to_string()),
    }
}

fn classify_spectrum(e: SpectrumError) -> CliError {
    match e {
        SpectrumError::Poly(p) => classify_poly(p),
        other => CliError::Precondition(other.to_string()),
    }
}

fn classify_weight(e: WeightError) -> CliError {
    match e {
        WeightError::Parse { .. } => CliError::Parse(e.to_string()),
        WeightError::VerificationFailed(_) => CliError::Verification(e.to_string()),
        WeightError::Poly(p) => classify_poly(p),
        WeightError::Algebra(b) => classify_bralg(b),
        WeightError::Spectrum(s) => classify_spectrum(s),
        other => CliError::Precondition(other.to_string()),
    }
}

/// Output of a successful command: human-readable text plus the JSON value
/// printed under `--json`. Both renderings are byte-identical across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub text: String,
    pub json: Value,
}

#[derive(Parser, Debug)]
#[command(
    name = "bralg",
    version,
    about = "Exact computation in Z-graded subalgebras of skew Laurent rings"
)]
pub struct Cli {
    /// Path to the algebra configuration file.
    #[arg(short, long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the machine-readable JSON rendering instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitArgs {
    /// Base point, comma-separated coordinates ("1,1").
    #[arg(short, long, allow_hyphen_values = true)]
    pub point: String,
    /// Half-width of the reported window when the orbit does not return.
    #[arg(long, default_value_t = 5)]
    pub window: u64,
    /// Number of steps to search for a finite orbit.
    #[arg(long, default_value_t = 64)]
    pub max_order: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize the configured algebra.
    Info,
    /// Print the reduced basis of the graded component I^(n).
    Component {
        #[arg(short, allow_hyphen_values = true)]
        n: i64,
    },
    /// Multiply two graded elements.
    Mul {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// Decide whether the algebra is a generalized Weyl algebra.
    IsGwa,
    /// Decide whether a graded element is central.
    IsCentral {
        #[arg(short, allow_hyphen_values = true)]
        u: String,
        /// Extra random elements tested beyond the exact generator check.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Lift a ring automorphism and scalar to a graded morphism.
    Lift {
        /// Forward images of the variables, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Backward images of the variables, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        phi_inverse: String,
        /// The grading scalar.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Print the Gelfand-Kirillov dimension.
    Gkdim,
    /// Compute the orbit view of a point.
    Orbit(OrbitArgs),
    /// Print the break positions of an orbit.
    Breaks(OrbitArgs),
    /// Build the non-simplicity witness module for S(B) points k apart.
    Witness {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(short)]
        k: u64,
        /// Write the module file here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the classified simple weight modules on an orbit.
    Simples {
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Theta matrix ("0,-1;1,-1") for break-free cyclic orbits.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        /// Position of the theta weight space.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        theta_base: i64,
        /// Write one module file per simple into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Verify a module file against the algebra.
    Verify {
        #[arg(short)]
        module: PathBuf,
    },
    /// Act with a graded element on a weight vector of a module.
    Act {
        #[arg(short)]
        module: PathBuf,
        /// The acting graded element.
        #[arg(short, allow_hyphen_values = true)]
        u: String,
        /// Source position.
        #[arg(short = 'i', long, allow_hyphen_values = true)]
        position: i64,
        /// Weight vector, comma-separated coordinates.
        #[arg(short, long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Decide simplicity of a module file.
    IsSimple {
        #[arg(short)]
        module: PathBuf,
    },
    /// Decide conjugacy of two theta matrices.
    ThetaIso {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

/// Loads, dispatches, renders. The caller chooses text or JSON.
pub fn run(cli: &Cli) -> Result<CommandResult, CliError> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Parse("missing --config <path>".to_string()))?;
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {}", config_path.display(), e)))?;
    let algebra = config::load_algebra(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let config_name = config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "algebra".to_string());
    match &cli.command {
        Command::Info => cmd_info(&algebra),
        Command::Component { n } => cmd_component(&algebra, *n),
        Command::Mul { a, b } => cmd_mul(&algebra, a, b),
        Command::IsGwa => cmd_is_gwa(&algebra),
        Command::IsCentral { u, samples } => cmd_is_central(&algebra, u, *samples),
        Command::Lift {
            phi,
            phi_inverse,
            gamma,
        } => cmd_lift(&algebra, phi, phi_inverse, gamma),
        Command::Gkdim => cmd_gkdim(&algebra),
        Command::Orbit(args) => cmd_orbit(&algebra, args),
        Command::Breaks(args) => cmd_breaks(&algebra, args),
        Command::Witness { orbit, k, out } => cmd_witness(&algebra, orbit, *k, out, &config_name),
        Command::Simples {
            orbit,
            theta,
            theta_base,
            out_dir,
        } => cmd_simples(&algebra, orbit, theta, *theta_base, out_dir, &config_name),
        Command::Verify { module } => cmd_verify(&algebra, module),
        Command::Act {
            module,
            u,
            position,
            vector,
        } => cmd_act(&algebra, module, u, *position, vector),
        Command::IsSimple { module } => cmd_is_simple(&algebra, module),
        Command::ThetaIso { a, b } => cmd_theta_iso(&algebra, a, b),
    }
}

fn ideal_string(ideal: &Ideal) -> String {
    let gens: Vec<String> = ideal.reduced_basis().iter().map(|g| g.to_string()).collect();
    format!("({})", gens.join(", "))
}

fn cmd_info(algebra: &Arc<BRAlgebra>) -> Result<CommandResult, CliError> {
    let ring = algebra.ring();
    let sigma_images: Vec<String> = ring
        .vars()
        .iter()
        .zip(algebra.sigma().forward_images())
        .map(|(v, img)| format!("{} -> {}", v, img))
        .collect();
    let j_hat: Vec<String> = algebra.j_hat().iter().map(|g| g.to_string()).collect();
    let h_hat: Vec<String> = algebra.h_hat().iter().map(|g| g.to_string()).collect();
    let gk = algebra.gk_dimension();
    let text = format!
        ("field: {}\nvariables: {}\nsigma: {}\nH: {}\nJ: {}\ndegree +1 generators: {}\ndegree -1 generators: {}\nGK dimension: {}\n",
        ring.field(),
        ring.vars().join(", "),
        sigma_images.join(", "),
        ideal_string(algebra.h_ideal()),
        ideal_string(algebra.j_ideal()),
        j_hat.join(", "),
        h_hat.join(", "),
        gk.map_or("unknown (non-affine sigma)".to_string(), |d| d.to_string()),
    );
    let json = json!({
        "field": ring.field().to_string(),
        "variables": ring.vars(),
        "sigma": sigma_images,
        "H": ideal_string(algebra.h_ideal()),
        "J": ideal_string(algebra.j_ideal()),
        "degree_plus_one_generators": j_hat,
        "degree_minus_one_generators": h_hat,
        "gk_dimension": gk,
    });
    Ok(CommandResult { text, json })
}

fn cmd_component(algebra: &Arc<BRAlgebra>, n: i64) -> Result<CommandResult, CliError> {
    let ideal = algebra.component(n);
    let text = format!("{}\n", ideal_string(&ideal));
    let gens: Vec<String> = ideal.reduced_basis().iter().map(|g| g.to_string()).collect();
    let json = json!({ "degree": n, "generators": gens });
    Ok(CommandResult { text, json })
}

fn cmd_mul(algebra: &Arc<BRAlgebra>, a: &str, b: &str) -> Result<CommandResult, CliError> {
    let a = parse_graded_element(algebra, a).map_err(classify_bralg)?;
    let b = parse_graded_element(algebra, b).map_err(classify_bralg)?;
    let product = a.multiply(&b).map_err(classify_bralg)?;
    let text = format!("{}\n", product);
    let parts: Vec<Value> = product
        .degrees()
        .iter()
        .map(|&n| json!({ "degree": n, "coefficient": product.part(n).unwrap().to_string() }))
        .collect();
    let json = json!({ "product": product.to_string(), "parts": parts });
    Ok(CommandResult { text, json })
}

fn cmd_is_gwa(algebra: &Arc<BRAlgebra>) -> Result<CommandResult, CliError> {
    match algebra.is_gwa() {
        Some(data) => {
            let text = format!(
                "GWA with a = {}\nx = {}\ny = {}\n",
                data.a, data.x_realization, data.y_realization
            );
            let json = json!({
                "gwa": true,
                "a": data.a.to_string(),
                "x": data.x_realization.to_string(),
                "y": data.y_realization.to_string(),
            });
            Ok(CommandResult { text, json })
        }
        None => Ok(CommandResult {
            text: "not a GWA\n".to_string(),
            json: json!({ "gwa": false }),
        }),
    }
}

fn cmd_is_central(
    algebra: &Arc<BRAlgebra>,
    u: &str,
    samples: usize,
) -> Result<CommandResult, CliError> {
    let u = parse_graded_element(algebra, u).map_err(classify_bralg)?;
    match algebra.is_central(&u, samples).map_err(classify_bralg)? {
        Centrality::Central => Ok(CommandResult {
            text: "central: true\n".to_string(),
            json: json!({ "central": true }),
        }),
        Centrality::NotCentral { witness } => Ok(CommandResult {
            text: format!("central: false\nwitness: {}\n", witness),
            json: json!({ "central": false, "witness": witness.to_string() }),
        }),
    }
}

fn cmd_lift(
    algebra: &Arc<BRAlgebra>,
    phi: &str,
    phi_inverse: &str,
    gamma: &str,
) -> Result<CommandResult, CliError> {
    let ring = algebra.ring();
    let parse_images = |s: &str| -> Result<Vec<bralg::polyring::Polynomial>, CliError> {
        let images: Vec<bralg::polyring::Polynomial> = s
            .split(',')
            .map(|p| parse_polynomial(ring, p).map_err(classify_poly))
            .collect::<Result<_, _>>()?;
        if images.len() != ring.num_vars() {
            return Err(CliError::Parse(format!(
                "expected {} images, got {}",
                ring.num_vars(),
                images.len()
            )));
        }
        Ok(images)
    };
    let forward = parse_images(phi)?;
    let backward = parse_images(phi_inverse)?;
    let phi = RingAutomorphism::new(ring, forward, backward).map_err(classify_poly)?;
    let gamma = parse_scalar(ring.field(), gamma).map_err(classify_poly)?;
    let lift = algebra
        .lift_automorphism(&phi, &gamma)
        .map_err(classify_bralg)?;
    let images: Vec<String> = ring
        .vars()
        .iter()
        .zip(lift.phi().forward_images())
        .map(|(v, img)| format!("{} -> {}", v, img))
        .collect();
    let text = format!("lifts: true\nphi: {}\ngamma: {}\n", images.join(", "), lift.gamma());
    let json = json!({ "lifts": true, "phi": images, "gamma": lift.gamma().to_string() });
    Ok(CommandResult { text, json })
}

fn cmd_gkdim(algebra: &Arc<BRAlgebra>) -> Result<CommandResult, CliError> {
    match algebra.gk_dimension() {
        Some(d) => Ok(CommandResult {
            text: format!("{}\n", d),
            json: json!({ "gk_dimension": d }),
        }),
        None => Ok(CommandResult {
            text: "unknown (non-affine sigma)\n".to_string(),
            json: json!({ "gk_dimension": null }),
        }),
    }
}

fn compute_orbit(algebra: &Arc<BRAlgebra>, args: &OrbitArgs) -> Result<OrbitView, CliError> {
    let p = parse_point(algebra.ring(), &args.point).map_err(classify_spectrum)?;
    orbit(algebra, &p, args.window, args.max_order).map_err(classify_spectrum)
}

fn kind_string(view: &OrbitView) -> String {
    match view.kind() {
        OrbitKind::Cyclic { size } => format!("cyclic {}", size),
        OrbitKind::Windowed { lo, hi } => format!("window {} {}", lo, hi),
    }
}

fn positions_string(set: impl IntoIterator<Item = i64>) -> String {
    let items: Vec<String> = set.into_iter().map(|i| i.to_string()).collect();
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

fn cmd_orbit(algebra: &Arc<BRAlgebra>, args: &OrbitArgs) -> Result<CommandResult, CliError> {
    let view = compute_orbit(algebra, args)?;
    let mut text = format!("kind: {}\n", kind_string(&view));
    for (i, pt) in view.points() {
        text.push_str(&format!("point {}: {}\n", i, pt));
    }
    text.push_str(&format!(
        "S(B) positions: {}\n",
        positions_string(view.in_sb().iter().copied())
    ));
    text.push_str(&format!(
        "breaks: {}\n",
        positions_string(view.breaks().iter().copied())
    ));
    if !view.complete_breaks() {
        text.push_str("note: break set restricted to the window\n");
    }
    if view.hypothesis_violated() {
        text.push_str("warning: the point returns but sigma^n is not the identity\n");
    }
    let points: Vec<Value> = view
        .points()
        .iter()
        .map(|(i, pt)| json!({ "position": i, "point": pt.to_string() }))
        .collect();
    let json = json!({
        "kind": kind_string(&view),
        "points": points,
        "sb_positions": view.in_sb().iter().copied().collect::<Vec<_>>(),
        "breaks": view.breaks().iter().copied().collect::<Vec<_>>(),
        "complete_breaks": view.complete_breaks(),
        "hypothesis_violated": view.hypothesis_violated(),
    });
    Ok(CommandResult { text, json })
}

fn cmd_breaks(algebra: &Arc<BRAlgebra>, args: &OrbitArgs) -> Result<CommandResult, CliError> {
    let view = compute_orbit(algebra, args)?;
    let mut text = format!(
        "breaks: {}\n",
        positions_string(view.breaks().iter().copied())
    );
    if !view.complete_breaks() {
        text.push_str("note: break set restricted to the window\n");
    }
    let json = json!({
        "breaks": view.breaks().iter().copied().collect::<Vec<_>>(),
        "complete_breaks": view.complete_breaks(),
    });
    Ok(CommandResult { text, json })
}

/// Shared module summary rendering: support, multiplicities and the nonzero
/// edge matrices.
fn module_summary(module: &WeightModule) -> (String, Value) {
    let mut text = String::new();
    let support = module.support();
    text.push_str(&format!(
        "support: {}\n",
        positions_string(support.iter().copied())
    ));
    let mults: Vec<String> = support
        .iter()
        .map(|&i| format!("{}:{}", i, module.mult_at(i)))
        .collect();
    text.push_str(&format!("multiplicities: {}\n", mults.join(", ")));
    let mut matrices = vec![];
    for i in module.edges() {
        for a in 0..module.algebra().j_hat().len() {
            let m = module.up_matrix(i, a);
            if !m.is_zero() {
                text.push_str(&format!("up {} {}: {}\n", i, a, m));
                matrices.push(json!({
                    "direction": "up", "edge": i, "generator": a, "matrix": m.to_string(),
                }));
            }
        }
        for b in 0..module.algebra().h_hat().len() {
            let m = module.down_matrix(i, b);
            if !m.is_zero() {
                text.push_str(&format!("down {} {}: {}\n", i, b, m));
                matrices.push(json!({
                    "direction": "down", "edge": i, "generator": b, "matrix": m.to_string(),
                }));
            }
        }
    }
    let json = json!({
        "support": support,
        "multiplicities": support.iter().map(|&i| module.mult_at(i)).collect::<Vec<_>>(),
        "matrices": matrices,
        "windowed_semantics": module.windowed_semantics(),
    });
    (text, json)
}

fn cmd_witness(
    algebra: &Arc<BRAlgebra>,
    args: &OrbitArgs,
    k: u64,
    out: &Option<PathBuf>,
    config_name: &str,
) -> Result<CommandResult, CliError> {
    let p = parse_point(algebra.ring(), &args.point).map_err(classify_spectrum)?;
    let module = nonsimplicity_witness(algebra, &p, k).map_err(classify_weight)?;
    let (summary, summary_json) = module_summary(&module);
    let mut text = format!("witness for k = {}\nverified: true\n{}", k, summary);
    if let Some(path) = out {
        std::fs::write(path, write_module(&module, config_name))
            .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e)))?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    let json = json!({
        "k": k,
        "verified": true,
        "module": summary_json,
        "file": write_module(&module, config_name),
    });
    Ok(CommandResult { text, json })
}

fn classified_result(
    modules: &[ClassifiedModule],
    out_dir: &Option<PathBuf>,
    config_name: &str,
) -> Result<CommandResult, CliError> {
    let mut text = format!("simple modules: {}\n", modules.len());
    let mut rendered = vec![];
    for (idx, m) in modules.iter().enumerate() {
        let (summary, summary_json) = module_summary(&m.module);
        text.push_str(&format!("\n[{}] {}\n{}", idx, m.label, summary));
        let file = write_module(&m.module, config_name);
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("cannot create {}: {}", dir.display(), e)))?;
            let path = dir.join(format!("module_{}.mod", idx));
            std::fs::write(&path, &file)
                .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e)))?;
            text.push_str(&format!("wrote {}\n", path.display()));
        }
        rendered.push(json!({
            "label": m.label,
            "module": summary_json,
            "file": file,
        }));
    }
    Ok(CommandResult {
        text,
        json: json!({ "count": modules.len(), "modules": rendered }),
    })
}

fn cmd_simples(
    algebra: &Arc<BRAlgebra>,
    args: &OrbitArgs,
    theta: &Option<String>,
    theta_base: i64,
    out_dir: &Option<PathBuf>,
    config_name: &str,
) -> Result<CommandResult, CliError> {
    let view = compute_orbit(algebra, args)?;
    let theta = theta
        .as_ref()
        .map(|s| -> Result<ThetaModule, CliError> {
            let m = parse_matrix(algebra.ring().field(), s).map_err(classify_poly)?;
            ThetaModule::new(theta_base, m).map_err(classify_weight)
        })
        .transpose()?;
    let modules = match view.kind() {
        OrbitKind::Cyclic { .. } => {
            build_finite_simples(algebra, &view, theta.as_ref()).map_err(classify_weight)?
        }
        OrbitKind::Windowed { .. } => {
            build_infinite_simples(algebra, &view).map_err(classify_weight)?
        }
    };
    classified_result(&modules, out_dir, config_name)
}

fn load_module(algebra: &Arc<BRAlgebra>, path: &Path) -> Result<WeightModule, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {}", path.display(), e)))?;
    read_module(algebra, &text).map_err(classify_weight)
}

fn cmd_verify(algebra: &Arc<BRAlgebra>, path: &Path) -> Result<CommandResult, CliError> {
    let module = load_module(algebra, path)?;
    let report = module.verify().map_err(classify_weight)?;
    if !report.ok {
        let failures: Vec<String> = report.failures.iter().map(|f| f.to_string()).collect();
        return Err(CliError::Verification(failures.join("; ")));
    }
    let mut text = "verified: true\n".to_string();
    for (pos, label) in &report.break_labels {
        text.push_str(&format!("break {}: {}\n", pos, label));
    }
    for caveat in &report.caveats {
        text.push_str(&format!("caveat: {}\n", caveat));
    }
    let labels: Vec<Value> = report
        .break_labels
        .iter()
        .map(|(pos, label)| {
            json!({
                "position": pos,
                "label": label.to_string(),
                "j_break": label.j_break,
                "h_break": label.h_break,
            })
        })
        .collect();
    let json = json!({
        "verified": true,
        "break_labels": labels,
        "caveats": report.caveats,
    });
    Ok(CommandResult { text, json })
}

fn cmd_act(
    algebra: &Arc<BRAlgebra>,
    path: &Path,
    u: &str,
    position: i64,
    vector: &str,
) -> Result<CommandResult, CliError> {
    let module = load_module(algebra, path)?;
    let u = parse_graded_element(algebra, u).map_err(classify_bralg)?;
    let v = parse_vector(algebra.ring().field(), vector).map_err(classify_poly)?;
    let (target, image) = module.act(&u, position, &v).map_err(classify_weight)?;
    let rendered = if image.is_empty() {
        "(zero space)".to_string()
    } else {
        format_vector(&image)
    };
    let text = format!("target: {}\nimage: {}\n", target, rendered);
    let json = json!({
        "target": target,
        "image": image.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    Ok(CommandResult { text, json })
}

fn cmd_is_simple(algebra: &Arc<BRAlgebra>, path: &Path) -> Result<CommandResult, CliError> {
    let module = load_module(algebra, path)?;
    match module.is_simple().map_err(classify_weight)? {
        SimplicityVerdict::Simple => Ok(CommandResult {
            text: "simple: true\n".to_string(),
            json: json!({ "simple": true }),
        }),
        SimplicityVerdict::NotSimple { witness } => {
            let mut text = "simple: false\n".to_string();
            let layout: Vec<String> = witness
                .layout
                .iter()
                .map(|(pos, dim)| format!("{}:{}", pos, dim))
                .collect();
            text.push_str(&format!("witness layout: {}\n", layout.join(", ")));
            for row in &witness.basis {
                text.push_str(&format!("witness row: {}\n", format_vector(row)));
            }
            let json = json!({
                "simple": false,
                "witness": {
                    "layout": witness.layout.iter().map(|(p, d)| json!([p, d])).collect::<Vec<_>>(),
                    "basis": witness
                        .basis
                        .iter()
                        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                },
            });
            Ok(CommandResult { text, json })
        }
        SimplicityVerdict::Unknown { reason } => Ok(CommandResult {
            text: format!("simple: unknown\nreason: {}\n", reason),
            json: json!({ "simple": "unknown", "reason": reason }),
        }),
    }
}

fn cmd_theta_iso(algebra: &Arc<BRAlgebra>, a: &str, b: &str) -> Result<CommandResult, CliError> {
    let spec = algebra.ring().field();
    let ma = parse_matrix(spec, a).map_err(classify_poly)?;
    let mb = parse_matrix(spec, b).map_err(classify_poly)?;
    let ta = ThetaModule::new(0, ma).map_err(classify_weight)?;
    let tb = ThetaModule::new(0, mb).map_err(classify_weight)?;
    let iso = theta_isomorphic(&ta, &tb);
    Ok(CommandResult {
        text: format!("isomorphic: {}\n", iso),
        json: json!({ "isomorphic": iso }),
    })
}
