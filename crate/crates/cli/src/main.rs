mod report;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use descent_kit::cosimplicial::{basic_fibration_with, validate_coherence};
use descent_kit::descent::{DescOptions, DescentClass, FinSetDescent};
use descent_kit::fincat::validate_category;
use descent_kit::monadic::benabou_roubaud_with;
use descent_kit::theorems::{
    generate_instances, mutation_suite, tally, GenParams, Harness, Kind, Outcome,
};
use descent_kit::{FinSetCat, Tamper};

use report::{describe, Case, Format, Report};
use spec::Spec;

#[derive(Parser)]
#[command(name = "descent-kit", version, about = "Decide descent for maps of finite sets")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the task map as NotAlmost, Almost, Descent or Effective.
    Classify(FileArgs),
    /// Compare descent data with Eilenberg–Moore algebras for the task map.
    Br(FileArgs),
    /// Check the declared tables, functors, transformations and the task
    /// map's basic fibration.
    Validate(FileArgs),
    /// Run a theorem harness: embedding, galois, pseudopullback, br or mutation.
    Harness(HarnessArgs),
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    /// Enumeration bound; defaults to the task's bound, else 4.
    #[arg(long)]
    bound: Option<usize>,
    /// Inject a corruption, e.g. broken-mu or dropped-cocycle.
    #[arg(long)]
    tamper: Option<String>,
}

#[derive(Args)]
struct HarnessArgs {
    kind: String,
    /// Largest carrier size of generated maps.
    #[arg(long, default_value_t = 3)]
    sizes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate every instance instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Instances drawn when not exhaustive.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 2)]
    bound: usize,
}

/// Coherence failures spelled out in a report; the rest are only counted.
const LISTED: usize = 5;

/// Bad input: exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn load(args: &FileArgs) -> Result<Spec> {
    let src = std::fs::read_to_string(&args.file)
        .map_err(|e| input(format!("{}: {e}", args.file.display())))?;
    spec::parse(&src).map_err(|e| input(format!("{}:{}: {}", args.file.display(), e.line, e.message)))
}

fn tamper(args: &FileArgs) -> Result<Option<Tamper>> {
    args.tamper
        .as_deref()
        .map(|t| {
            Tamper::parse(t).ok_or_else(|| {
                let names: Vec<_> = Tamper::ALL.iter().map(|t| t.name()).collect();
                input(format!("unknown tamper `{t}`; expected one of {}", names.join(", ")))
            })
        })
        .transpose()
}

fn bound(args: &FileArgs, spec: &Spec) -> usize {
    args.bound
        .or_else(|| spec.task.as_ref().and_then(|t| t.bound))
        .unwrap_or(4)
}

fn task_report(command: &str, args: &FileArgs, spec: &Spec) -> Result<(Report, descent_kit::FinFunction)> {
    let (name, p) = spec.task_map().map_err(input)?;
    let mut r = Report::new(command);
    r.task.insert("map".into(), name.to_owned());
    r.task.insert(name.to_owned(), describe(p));
    if let Some(t) = &args.tamper {
        r.task.insert("tamper".into(), t.clone());
    }
    r.bound = Some(bound(args, spec));
    Ok((r, p.clone()))
}

fn classify(args: &FileArgs) -> Result<Report> {
    let spec = load(args)?;
    let (mut r, p) = task_report("classify", args, &spec)?;
    let opts = DescOptions { tamper: tamper(args)? };
    let fd = FinSetDescent::with_options(p, opts)?;
    let c = fd.classify(r.bound.unwrap())?;
    r.verdict = c.class.to_string();
    r.exit_code = match c.class {
        DescentClass::Effective => 0,
        DescentClass::Descent => 3,
        DescentClass::Almost => 4,
        DescentClass::NotAlmost => 5,
    };
    r.within_bound = c.within_bound();
    r.detail("surjective", !c.partial);
    r.detail("level", format!("{:?}", c.report.level));
    r.witnesses = report::classification_witnesses(&fd, &c);
    Ok(r)
}

fn br(args: &FileArgs) -> Result<Report> {
    let spec = load(args)?;
    let (mut r, p) = task_report("br", args, &spec)?;
    let b = benabou_roubaud_with(&p, r.bound.unwrap(), tamper(args)?)?;
    let holds = b.holds();
    r.verdict = if holds { "Equivalence".into() } else { format!("{:?}", b.level) };
    r.exit_code = if holds { 0 } else { 1 };
    r.within_bound = b.report.within_bound();
    r.detail("desc_objects", b.desc_objects);
    r.detail("em_objects", b.em_objects);
    r.detail("em_iso_classes", b.em_iso_classes);
    r.detail("factorizations_agree", b.factorizations_agree);
    for (i, inc) in b.incidents.iter().enumerate() {
        r.detail(format!("incident.{i}"), inc);
    }
    if let Some(w) = &b.report.faithful.witness {
        r.detail("not_faithful", format!("{:?} and {:?} ↦ {:?}", w.f, w.g, w.image));
    }
    if let Some(w) = b.report.full.as_ref().and_then(|v| v.witness.as_ref()) {
        r.detail("not_full", format!("{:?} → {:?} misses {:?}", w.x, w.y, w.missed));
    }
    if let Some(w) = b.report.essentially_surjective.as_ref().and_then(|v| v.witness.as_ref()) {
        r.detail("not_essentially_surjective", format!("{:?}", w.object));
    }
    Ok(r)
}

fn validate(args: &FileArgs) -> Result<Report> {
    let spec = load(args)?;
    let bound = bound(args, &spec);
    let mut r = Report::new("validate");
    r.bound = Some(bound);
    r.detail(
        "declared",
        format!(
            "{} sets, {} functions, {} categories, {} functors, {} transformations",
            spec.sets.len(),
            spec.functions.len(),
            spec.categories.len(),
            spec.functors.len(),
            spec.transformations.len()
        ),
    );
    let mut structural = 0;
    for (name, cat) in &spec.categories {
        for (i, v) in validate_category(cat).iter().enumerate() {
            r.detail(format!("category.{name}.{i}"), v);
            structural += 1;
        }
    }
    for (name, f) in &spec.functors {
        for (i, v) in f.check_laws(bound).iter().enumerate() {
            r.detail(format!("functor.{name}.{i}"), format!("{v:?}"));
            structural += 1;
        }
    }
    for (name, t) in &spec.transformations {
        for (i, v) in t.check_naturality(bound).iter().enumerate() {
            r.detail(format!("transformation.{name}.{i}"), format!("{v:?}"));
            structural += 1;
        }
    }
    let mut incoherent = 0;
    if spec.task.as_ref().is_some_and(|t| t.map.is_some()) {
        let (name, p) = spec.task_map().map_err(input)?;
        r.task.insert("map".into(), name.to_owned());
        r.task.insert(name.to_owned(), describe(p));
        let fib = basic_fibration_with(Arc::new(FinSetCat), p.clone(), tamper(args)?)?;
        let coh = validate_coherence(&fib.diagram, bound);
        r.within_bound = coh.within_bound;
        r.detail("coherence.objects_checked", coh.objects_checked);
        for (i, f) in coh.failures.iter().take(LISTED).enumerate() {
            r.detail(format!("coherence.{i}"), format!("{f:?}"));
        }
        incoherent = coh.failures.len();
    }
    r.detail("structural_violations", structural);
    r.detail("coherence_failures", incoherent);
    (r.verdict, r.exit_code) = match (structural, incoherent) {
        (0, 0) => ("valid".into(), 0),
        (0, _) => ("incoherent".into(), 1),
        _ => ("invalid".into(), 2),
    };
    Ok(r)
}

fn harness(args: &HarnessArgs) -> Result<Report> {
    let mut r = Report::new("harness");
    r.task.insert("kind".into(), args.kind.clone());
    r.bound = Some(args.bound);
    if args.kind == "mutation" {
        let outcomes = mutation_suite(args.bound);
        let missed = outcomes.iter().filter(|o| !o.detected).count();
        for o in &outcomes {
            r.cases.push(Case {
                outcome: if o.detected { "PASS" } else { "FAIL" }.into(),
                instance: o.tamper.to_string(),
                detail: format!("detected by {}", o.detected_by),
                reason: if o.detected { String::new() } else { o.detail.clone() },
                within_bound: false,
            });
        }
        r.detail("detected", outcomes.len() - missed);
        r.detail("missed", missed);
        r.verdict = if missed == 0 { "PASS" } else { "FAIL" }.into();
        r.exit_code = if missed == 0 { 0 } else { 1 };
        return Ok(r);
    }
    let kind: Kind = args.kind.parse().map_err(|_| {
        input(format!(
            "unknown harness `{}`; expected embedding, galois, pseudopullback, br or mutation",
            args.kind
        ))
    })?;
    let params = GenParams {
        max_size: args.sizes,
        exhaustive: args.exhaustive,
        samples: args.samples,
        seed: args.seed,
    };
    r.task.insert("sizes".into(), args.sizes.to_string());
    r.task.insert("seed".into(), args.seed.to_string());
    r.task.insert("exhaustive".into(), args.exhaustive.to_string());
    let instances = generate_instances(kind, &params).map_err(|e| input(e.to_string()))?;
    let cases = Harness::new(args.bound).run(&instances);
    let t = tally(&cases);
    r.within_bound = cases.iter().any(|c| c.within_bound);
    r.detail("pass", t.pass);
    r.detail("fail", t.fail);
    r.detail("skip", t.skip);
    r.cases = cases
        .into_iter()
        .map(|c| Case {
            outcome: c.outcome.tag().into(),
            instance: c.instance.label(),
            reason: match c.outcome {
                Outcome::Pass => String::new(),
                Outcome::Fail(s) | Outcome::Skip(s) => s,
            },
            detail: c.detail,
            within_bound: c.within_bound,
        })
        .collect();
    r.verdict = if t.fail == 0 { "PASS" } else { "FAIL" }.into();
    r.exit_code = if t.fail == 0 { 0 } else { 1 };
    Ok(r)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("DESCENT_KIT_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| input(format!("DESCENT_KIT_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report> {
    configure_threads()?;
    let start = Instant::now();
    let mut r = match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Br(a) => br(a),
        Command::Validate(a) => validate(a),
        Command::Harness(a) => harness(a),
    }?;
    r.timing_ms = start.elapsed().as_millis();
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().write_all(r.render(cli.format).as_bytes());
            ExitCode::from(r.exit_code)
        }
        Err(e) if e.is::<InputError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
