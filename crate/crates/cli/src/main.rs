//! `brauer`: command-line front end to brauer-core.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brauer_core::arith::QZClass;
use brauer_core::bounds::{bound_report, quartic_threshold_check, QUARTIC_BR_ORDER};
use brauer_core::eval::{
    evaluation_image, is_constant_with_trivial_tau, prolific_check, zero_cycle_image, Constancy,
};
use brauer_core::model::{count_points, count_points_cached, PointCountCache};
use brauer_core::modelfile::ModelFile;
use brauer_core::sing::classify_model;
use brauer_core::torsor::KummerTorsor;
use brauer_core::verdict::{
    parse_coefficients, verdict_cone_cubic, verdict_custom, verdict_diagonal, Family, VerdictOptions,
    VerdictReport,
};
use brauer_core::{Error, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

const DEFAULT_CACHE: &str = "brauer-cache.txt";

#[derive(Parser)]
#[command(name = "brauer", version, about = "Brauer-Manin evaluation at a prime of bad reduction")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singular points of the special fibre, their ADE types and the Brauer table entry.
    Classify {
        model: PathBuf,
        /// Search singular points over F_{p^k} for k up to this bound.
        #[arg(long, default_value_t = 2)]
        max_ext: u32,
    },
    /// Number of F_{p^k}-points of the special fibre.
    Count {
        model: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        /// Count smooth points only.
        #[arg(long)]
        smooth_only: bool,
        /// Point-count cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Evaluation of the model file's algebras over smooth reduction points.
    Evaluate {
        model: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        /// Also test whether the joint evaluation is surjective.
        #[arg(long)]
        prolific: bool,
        /// Invariants of degree-0 zero-cycles on points of degree at most this.
        #[arg(long)]
        zero_cycles: Option<u32>,
        /// Search for a nonconstancy witness over degrees up to this.
        #[arg(long)]
        constancy: Option<u32>,
        /// List every evaluated point.
        #[arg(long)]
        points: bool,
    },
    /// Cone bound for a genus-g curve and Brauer classes of total order N.
    Bound {
        #[arg(long)]
        genus: Option<u64>,
        /// Total order N of the classes (degree of the cover).
        #[arg(long)]
        degree: Option<u64>,
        /// Field sizes to check against the bound.
        #[arg(long = "q", num_args = 1..)]
        q: Vec<String>,
        /// Check a prime against the diagonal quartic threshold.
        #[arg(long)]
        quartic: Option<String>,
        /// Brauer group order used with --quartic.
        #[arg(long, default_value_t = QUARTIC_BR_ORDER)]
        br_order: u64,
    },
    /// Verdict from one place of cone reduction.
    Verdict {
        #[arg(long)]
        family: String,
        /// Diagonal coefficients a0, a1, a2, a3 (comma separated; products allowed).
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        assume_br_order: Option<u64>,
        /// Model file whose algebras are used for the direct evaluation path.
        #[arg(long)]
        algebras: Option<PathBuf>,
        /// Certify that the supplied algebras have zero invariant at every other place.
        #[arg(long)]
        certify_other_places: bool,
        /// Cone cubic: f(X0, X1, X2).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Cone cubic: g(X0, X1, X2, X3).
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        /// Custom family: model file.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Inspect or clear the point-count cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Show {
        #[arg(long)]
        path: Option<PathBuf>,
    },
    Clear {
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

/// Text and JSON renderings of one command's result.
struct Output {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Classify { model, max_ext } => classify(model, *max_ext),
        Command::Count { model, k, smooth_only, cache } => count(model, *k, *smooth_only, cache.as_deref()),
        Command::Evaluate { model, k, prolific, zero_cycles, constancy, points } => {
            evaluate(model, *k, *prolific, *zero_cycles, *constancy, *points)
        }
        Command::Bound { genus, degree, q, quartic, br_order } => {
            bound(*genus, *degree, q, quartic.as_deref(), *br_order)
        }
        Command::Verdict { family, coeffs, p, assume_br_order, algebras, certify_other_places, f, g, model } => {
            let algebras = match algebras {
                Some(path) => ModelFile::load(path)?.algebras,
                None => Vec::new(),
            };
            let opts = VerdictOptions {
                prime: *p,
                assume_br_order: *assume_br_order,
                algebras,
                certified_elsewhere: *certify_other_places,
            };
            verdict(family, coeffs.as_deref(), f.as_deref(), g.as_deref(), model.as_deref(), opts)
        }
        Command::Cache { action } => cache(action),
    }
}

fn big(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn class_set(set: &BTreeSet<QZClass>) -> String {
    let parts: Vec<String> = set.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn class_list(set: &BTreeSet<QZClass>) -> Value {
    json!(set.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn field_name(p: u64, k: u32) -> String {
    if k == 1 {
        format!("F_{p}")
    } else {
        format!("F_{p}^{k}")
    }
}

fn classify(path: &Path, max_ext: u32) -> Result<Output> {
    let file = ModelFile::load(path)?;
    let model = &file.model;
    let r = classify_model(model, max_ext)?;
    let summary = match &r.table {
        _ if r.singularity_type.is_smooth() => "smooth; tables N/A".to_string(),
        None => format!("{}; tables N/A", r.singularity_type),
        Some(t) => format!(
            "{}; Br_bar={}; H1={}; Br_nr={}",
            r.singularity_type,
            t.br_bar,
            t.h1,
            t.br_nr.as_ref().map_or("unresolved".to_string(), |g| g.to_string())
        ),
    };
    let mut text = String::new();
    writeln!(text, "model: {}", model.label()).unwrap();
    writeln!(text, "prime: {}", model.prime()).unwrap();
    writeln!(
        text,
        "singular points: {} (searched up to F_{}^{max_ext}; {})",
        r.points.len(),
        model.prime(),
        if r.certified_complete { "complete" } else { "not certified complete" }
    )
    .unwrap();
    for pt in &r.points {
        let reg = match pt.regular {
            Some(true) => "regular",
            Some(false) => "not regular",
            None => "regularity unchecked",
        };
        writeln!(text, "  {}  {}  degree {}  {reg}", pt.point, pt.ade, pt.field_degree).unwrap();
    }
    if r.skipped_off_chart > 0 {
        writeln!(text, "off-chart points skipped: {}", r.skipped_off_chart).unwrap();
    }
    match r.del_pezzo_degree {
        Some(d) => writeln!(text, "del Pezzo degree: {d}").unwrap(),
        None => writeln!(text, "del Pezzo degree: n/a").unwrap(),
    }
    if let Some(t) = &r.table {
        if t.wildcard {
            writeln!(text, "table row: wildcard for degree {}", t.degree).unwrap();
        }
    }
    writeln!(text, "summary: {summary}").unwrap();

    let points: Vec<Value> = r
        .points
        .iter()
        .map(|pt| {
            json!({
                "point": pt.point.to_string(),
                "ade": pt.ade.to_string(),
                "field_degree": pt.field_degree,
                "regular": pt.regular,
            })
        })
        .collect();
    let table = r.table.as_ref().map(|t| {
        json!({
            "degree": t.degree,
            "label": t.label,
            "br_bar": t.br_bar.to_string(),
            "h1": t.h1.to_string(),
            "br_nr": t.br_nr.as_ref().map(|g| g.to_string()),
            "wildcard": t.wildcard,
        })
    });
    let json = json!({
        "model": model.label(),
        "prime": model.prime(),
        "singularity_type": r.singularity_type.to_string(),
        "points": points,
        "certified_complete": r.certified_complete,
        "skipped_off_chart": big(r.skipped_off_chart),
        "del_pezzo_degree": r.del_pezzo_degree,
        "table": table,
        "summary": summary,
    });
    Ok(Output { text, json })
}

fn count(path: &Path, k: u32, smooth_only: bool, cache: Option<&Path>) -> Result<Output> {
    let file = ModelFile::load(path)?;
    let model = &file.model;
    let (n, status) = match cache {
        Some(c) => {
            let (n, hit) = count_points_cached(model, k, smooth_only, &PointCountCache::new(c))?;
            (n, if hit { "hit" } else { "miss" })
        }
        None => (count_points(model, k, smooth_only)?, "off"),
    };
    let what = if smooth_only { "smooth points" } else { "points" };
    let mut text = String::new();
    writeln!(text, "model: {}", model.label()).unwrap();
    writeln!(text, "field: {}", field_name(model.prime(), k)).unwrap();
    writeln!(text, "{what}: {n}").unwrap();
    if cache.is_some() {
        writeln!(text, "cache: {status}").unwrap();
    }
    let json = json!({
        "model": model.label(),
        "p": model.prime(),
        "k": k,
        "smooth_only": smooth_only,
        "count": big(n),
        "cache": status,
    });
    Ok(Output { text, json })
}

fn evaluate(
    path: &Path,
    k: u32,
    prolific: bool,
    zero_cycles: Option<u32>,
    constancy: Option<u32>,
    list_points: bool,
) -> Result<Output> {
    let file = ModelFile::load(path)?;
    let model = &file.model;
    if file.algebras.is_empty() {
        return Err(Error::Domain(format!("{} declares no algebra", path.display())));
    }
    let mut text = String::new();
    writeln!(text, "model: {}", model.label()).unwrap();
    writeln!(text, "field: {}", field_name(model.prime(), k)).unwrap();
    let mut algebras = Vec::new();
    for alg in &file.algebras {
        let torsor = KummerTorsor::residue(alg, model)?;
        let r = evaluation_image(alg, model, k)?;
        writeln!(text, "algebra: {alg}").unwrap();
        writeln!(text, "  residue torsor: {torsor}").unwrap();
        let norm = r.normalization_point.as_ref().map(|p| p.to_string());
        writeln!(text, "  image: {}", class_set(&r.image)).unwrap();
        writeln!(text, "  normalized image: {}", class_set(&r.normalized_image())).unwrap();
        writeln!(text, "  normalization point: {}", norm.as_deref().unwrap_or("none")).unwrap();
        writeln!(text, "  constant: {}", r.constant).unwrap();
        writeln!(text, "  determinate points: {}", r.determinate_points()).unwrap();
        writeln!(text, "  indeterminate points: {}", r.indeterminate).unwrap();
        if r.skipped_off_chart > 0 {
            writeln!(text, "  off-chart points skipped: {}", r.skipped_off_chart).unwrap();
        }
        let mut entry = json!({
            "algebra": alg.to_string(),
            "residue": torsor.to_string(),
            "image": class_list(&r.image),
            "normalized_image": class_list(&r.normalized_image()),
            "normalization_point": norm,
            "constant": r.constant,
            "determinate_points": big(r.determinate_points()),
            "indeterminate_points": big(r.indeterminate),
            "skipped_off_chart": big(r.skipped_off_chart),
        });
        if list_points {
            let mut pts = Vec::new();
            for ep in &r.points {
                let c = ep.class.map_or("indeterminate".to_string(), |c| c.to_string());
                writeln!(text, "    {} x{} -> {c}", ep.point, ep.multiplicity).unwrap();
                pts.push(json!({"point": ep.point.to_string(), "multiplicity": big(ep.multiplicity), "class": c}));
            }
            entry["points"] = json!(pts);
        }
        if let Some(d) = zero_cycles {
            let z = zero_cycle_image(alg, model, d)?;
            writeln!(text, "  zero-cycle image (degree <= {d}): {}", class_set(&z)).unwrap();
            entry["zero_cycle_image"] = json!({"max_degree": d, "image": class_list(&z)});
        }
        if let Some(d) = constancy {
            let c = is_constant_with_trivial_tau(alg, model, d)?;
            let (line, value) = match &c {
                Constancy::ConstantCertified => {
                    ("constant residue".to_string(), json!({"status": "ConstantCertified"}))
                }
                Constancy::NonconstantWitness { degree, first, second } => (
                    format!(
                        "nonconstant at degree {degree}: {} -> {}, {} -> {}",
                        first.0, first.1, second.0, second.1
                    ),
                    json!({
                        "status": "NonconstantWitness",
                        "degree": degree,
                        "first": {"point": first.0.to_string(), "class": first.1.to_string()},
                        "second": {"point": second.0.to_string(), "class": second.1.to_string()},
                    }),
                ),
                Constancy::Unknown => ("unknown".to_string(), json!({"status": "Unknown"})),
            };
            writeln!(text, "  constancy (degree <= {d}): {line}").unwrap();
            entry["constancy"] = value;
        }
        algebras.push(entry);
    }
    let mut json = json!({
        "model": model.label(),
        "p": model.prime(),
        "k": k,
        "algebras": algebras,
    });
    if prolific {
        let ok = prolific_check(&file.algebras, model, k)?;
        writeln!(text, "prolific over {}: {ok}", field_name(model.prime(), k)).unwrap();
        json["prolific"] = json!(ok);
    }
    Ok(Output { text, json })
}

fn parse_big(s: &str) -> Result<BigInt> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let b: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
        let e: u32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
        return Ok(b.pow(e));
    }
    s.parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

fn bound(genus: Option<u64>, degree: Option<u64>, qs: &[String], quartic: Option<&str>, br_order: u64) -> Result<Output> {
    if let Some(p) = quartic {
        let p = parse_big(p)?;
        let r = quartic_threshold_check(&p, br_order)?;
        let mut text = String::new();
        writeln!(text, "p: {}", r.p).unwrap();
        writeln!(text, "Brauer group order bound N: {}", r.br_order_bound).unwrap();
        writeln!(text, "cover genus g': {}", r.computed.g_prime()).unwrap();
        writeln!(text, "stated threshold: {}", r.stated_threshold).unwrap();
        writeln!(text, "computed threshold: {}", r.computed).unwrap();
        writeln!(text, "computed ceiling: {}", r.computed.ceiling()).unwrap();
        writeln!(text, "difference: {}", r.difference).unwrap();
        writeln!(text, "passes stated threshold: {}", r.passes).unwrap();
        writeln!(text, "passes computed threshold: {}", r.passes_computed).unwrap();
        let json = json!({
            "p": r.p.to_string(),
            "br_order_bound": r.br_order_bound,
            "g_prime": r.computed.g_prime().to_string(),
            "stated_threshold": r.stated_threshold.to_string(),
            "computed_threshold": r.computed.expression(),
            "computed_decimal": r.computed.decimal(6),
            "computed_ceiling": r.computed.ceiling().to_string(),
            "difference": r.difference.to_string(),
            "passes": r.passes,
            "passes_computed": r.passes_computed,
        });
        return Ok(Output { text, json });
    }
    let (Some(g), Some(n)) = (genus, degree) else {
        return Err(Error::Parse("bound needs --genus and --degree, or --quartic".into()));
    };
    let qs = qs.iter().map(|q| parse_big(q)).collect::<Result<Vec<_>>>()?;
    let r = bound_report(g, n, &qs)?;
    let mut text = String::new();
    writeln!(text, "genus g: {g}").unwrap();
    writeln!(text, "degree N: {n}").unwrap();
    writeln!(text, "cover genus g': {}", r.g_prime).unwrap();
    writeln!(text, "threshold: {}", r.threshold).unwrap();
    writeln!(text, "least integer above: {}", r.threshold.strict_integer_threshold()).unwrap();
    if r.vacuous() {
        writeln!(text, "vacuous: every q > 1 passes").unwrap();
    }
    for (q, ok) in &r.checks {
        writeln!(text, "q = {q}: {}", if *ok { "above" } else { "not above" }).unwrap();
    }
    let checks: Vec<Value> = r.checks.iter().map(|(q, ok)| json!({"q": q.to_string(), "above": ok})).collect();
    let json = json!({
        "genus": g,
        "degree": n,
        "g_prime": r.g_prime.to_string(),
        "threshold": r.threshold.expression(),
        "decimal": r.threshold.decimal(6),
        "strict_integer_threshold": r.threshold.strict_integer_threshold().to_string(),
        "vacuous": r.vacuous(),
        "checks": checks,
    });
    Ok(Output { text, json })
}

fn verdict(
    family: &str,
    coeffs: Option<&str>,
    f: Option<&str>,
    g: Option<&str>,
    model: Option<&Path>,
    opts: VerdictOptions,
) -> Result<Output> {
    let family: Family = family.parse()?;
    let report = match family {
        Family::DiagonalQuartic | Family::DiagonalCubic => {
            let c = coeffs.ok_or_else(|| Error::Parse(format!("{} needs --coeffs", family.name())))?;
            verdict_diagonal(family, &parse_coefficients(c)?, &opts)?
        }
        Family::ConeCubic => {
            let (Some(f), Some(g), Some(p)) = (f, g, opts.prime) else {
                return Err(Error::Parse("cone-cubic needs --f, --g and --p".into()));
            };
            verdict_cone_cubic(f, g, p, &opts)?
        }
        Family::Custom => {
            let path = model.ok_or_else(|| Error::Parse("custom needs --model".into()))?;
            let file = ModelFile::load(path)?;
            let mut opts = opts;
            if opts.algebras.is_empty() {
                opts.algebras = file.algebras.clone();
            }
            verdict_custom(&file.model, &opts)?
        }
    };
    Ok(render_verdict(&report))
}

fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    }
}

fn render_verdict(r: &VerdictReport) -> Output {
    let mut text = String::new();
    writeln!(text, "family: {}", r.family.name()).unwrap();
    writeln!(text, "label: {}", r.label).unwrap();
    let cands: Vec<String> = r.candidates.iter().map(|c| c.to_string()).collect();
    writeln!(text, "candidate primes: {}", if cands.is_empty() { "none".into() } else { cands.join(", ") }).unwrap();
    if let Some(p) = r.prime {
        writeln!(text, "prime: {p}").unwrap();
    }
    if let Some(g) = r.genus {
        writeln!(text, "base curve genus: {g}").unwrap();
    }
    if let Some(b) = &r.br_order {
        writeln!(text, "Brauer group order N: {} ({}; {})", b.value, b.provenance.name(), b.note).unwrap();
    }
    if let Some(t) = &r.threshold {
        writeln!(text, "threshold: {t}").unwrap();
    }
    if !r.conditions.is_empty() {
        writeln!(text, "conditions:").unwrap();
    }
    for c in &r.conditions {
        writeln!(text, "  [{}] {} ({}; {}): {}", yes_no(c.holds), c.key, c.provenance.name(), c.reference, c.detail)
            .unwrap();
    }
    for e in &r.evaluations {
        let set: BTreeSet<QZClass> = e.image.iter().copied().collect();
        writeln!(
            text,
            "evaluation: {} image {} constant {} indeterminate {}",
            e.algebra,
            class_set(&set),
            e.constant,
            e.indeterminate
        )
        .unwrap();
    }
    if let Some(p) = r.prolific_direct {
        writeln!(text, "prolific (direct): {p}").unwrap();
    }
    for n in &r.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    writeln!(text, "verdict: {}", r.verdict).unwrap();

    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| {
            json!({
                "key": c.key,
                "holds": c.holds,
                "provenance": c.provenance.name(),
                "reference": c.reference,
                "detail": c.detail,
            })
        })
        .collect();
    let evaluations: Vec<Value> = r
        .evaluations
        .iter()
        .map(|e| {
            json!({
                "algebra": e.algebra,
                "image": e.image.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "constant": e.constant,
                "indeterminate": big(e.indeterminate),
            })
        })
        .collect();
    let json = json!({
        "family": r.family.name(),
        "label": r.label,
        "candidates": r.candidates,
        "prime": r.prime,
        "genus": r.genus,
        "br_order": r.br_order.as_ref().map(|b| json!({
            "value": b.value,
            "provenance": b.provenance.name(),
            "note": b.note,
        })),
        "threshold": r.threshold,
        "conditions": conditions,
        "evaluations": evaluations,
        "prolific_direct": r.prolific_direct,
        "notes": r.notes,
        "verdict": r.verdict.to_string(),
    });
    Output { text, json }
}

fn cache(action: &CacheAction) -> Result<Output> {
    let default = || PathBuf::from(std::env::var("BRAUER_CACHE").unwrap_or_else(|_| DEFAULT_CACHE.into()));
    match action {
        CacheAction::Show { path } => {
            let c = PointCountCache::new(path.clone().unwrap_or_else(default));
            let entries = c.entries()?;
            let mut text = String::new();
            writeln!(text, "cache: {} ({} records)", c.path().display(), entries.len()).unwrap();
            let mut records = Vec::new();
            for (k, n) in &entries {
                writeln!(text, "  {} q={} smooth_only={} count={n}", &k.model_hash[..16], k.q, k.smooth_only).unwrap();
                records.push(json!({
                    "model_hash": k.model_hash,
                    "q": k.q,
                    "smooth_only": k.smooth_only,
                    "count": big(*n),
                }));
            }
            Ok(Output { text, json: json!({"path": c.path().display().to_string(), "records": records}) })
        }
        CacheAction::Clear { path } => {
            let c = PointCountCache::new(path.clone().unwrap_or_else(default));
            c.clear()?;
            Ok(Output {
                text: format!("cleared {}\n", c.path().display()),
                json: json!({"path": c.path().display().to_string(), "cleared": true}),
            })
        }
    }
}
