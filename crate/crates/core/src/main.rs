use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nilreg::canon::{peel_canonical, Canon};
use nilreg::catalog::{self, Catalog};
use nilreg::critreg::{check_witness, crit_interval, negative_controls};
use nilreg::decimal::{decimalize, fmt, REPORT_DIGITS};
use nilreg::group::GroupSpec;
use nilreg::growth::{self, bass_guivarch, default_window, relative_degree, schreier_degree, Verdict};
use nilreg::manifest::{manifest_path_for, RunManifest, SeedRange};
use nilreg::process::{
    calibrate_critical, critical_trace, sample_path, sample_path_right, BallSampler, BlockSampler, CosetLengths,
    CosetLocator, CosetOrderAction, HeisenbergSampler, ProcessTrace,
};
use nilreg::realize::{auto_system_min_j, fit_cocycle_degree, holder_table, Realization, SystemFile};
use nilreg::reproduce;
use nilreg::wordmetric::{ball_with, cache_key, load_ball, save_ball, schreier_ball, BallOptions, BallRecord, GenSet};
use nilreg::{ratio, Error, Result};

#[derive(Parser, Serialize)]
#[command(name = "nilreg", version, about = "Growth, critical regularity and interval realizations of nilpotent groups")]
struct Cli {
    /// Group catalog JSON (defaults to the shipped catalog).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Wall-clock budget in seconds, recorded in the manifest.
    #[arg(long, global = true)]
    budget: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Cmd {
    /// Cumulative ball counts #B_n.
    Ball(BallArgs),
    /// Cumulative Schreier ball counts for G/K.
    Schreier(SchreierArgs),
    /// Growth degrees and fitted exponents.
    Growth(GrowthArgs),
    /// Canonical form of a word by exchange sort.
    Canon(CanonArgs),
    /// Check a stabilizer witness clause by clause.
    VerifyWitness(WitnessArgs),
    /// Critical regularity of a catalog group.
    Crit(GroupArgs),
    /// Sample random paths.
    Process(ProcessArgs),
    /// Build an interval realization and write its layout.
    Realize(RealizeArgs),
    /// Hölder constants of one generator over a saved realization.
    Holder(HolderArgs),
    /// Run acceptance recipes: AC-1 .. AC-8 or all.
    Reproduce(ReproduceArgs),
    /// Print or regenerate the group catalog.
    Catalog(CatalogArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Serialize)]
struct Out {
    /// Output file; stdout when absent. A manifest is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BallArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    radius: usize,
    /// Binary ball cache, read when present and written otherwise.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 5_000_000)]
    max_elements: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct SchreierArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    subgroup: String,
    #[arg(long)]
    radius: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct GrowthArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    subgroup: Option<String>,
    /// Enumeration radius; the largest radius within the element budget when absent.
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, default_value_t = 0.4)]
    tolerance: f64,
    #[arg(long, default_value_t = 3_000_000)]
    max_elements: usize,
    /// Also write the counts as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct CanonArgs {
    #[arg(long)]
    group: String,
    /// Space-separated letters, e.g. "b a b a^-1".
    #[arg(long)]
    word: String,
    #[arg(long)]
    trace_weights: bool,
    /// Scale n of the weight (default: word length).
    #[arg(long)]
    n: Option<u64>,
    /// Base A of the weight (default: 4 C_comm).
    #[arg(long)]
    a: Option<u64>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct WitnessArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    witness: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct GroupArgs {
    #[arg(long)]
    group: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Variant {
    Plain,
    Right,
    Critical,
}

#[derive(Args, Serialize)]
struct ProcessArgs {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "plain")]
    variant: Variant,
    #[arg(long)]
    steps: usize,
    /// Number of seeded paths.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    /// Subgroup K whose cosets carry the lengths (C0 + |v|)^-exponent.
    #[arg(long, default_value = "Zcenter")]
    subgroup: String,
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    #[arg(long, default_value_t = 1.0 / 0.45)]
    exponent: f64,
    /// Witness ordering the cosets for the right variant (default: the group's first).
    #[arg(long)]
    witness: Option<String>,
    /// Growth degree d used by the critical estimate.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value_t = 64)]
    calibrate_at: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 1_000_000)]
    calibration_seed: u64,
    #[arg(long, default_value_t = 20)]
    retries: usize,
    #[arg(long, default_value_t = 5_000_000)]
    max_elements: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct RealizeArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    witness: String,
    #[arg(long)]
    alpha: f64,
    /// Schreier radius R of the truncation.
    #[arg(long)]
    radius: usize,
    /// Minimum j range J; raised to ceil(max A_v) when smaller.
    #[arg(long, default_value_t = 0)]
    jrange: i64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct HolderArgs {
    #[arg(long)]
    system: PathBuf,
    /// Letter name, e.g. b or a^-1.
    #[arg(long)]
    generator: String,
    /// Hölder exponent (default: the system's alpha).
    #[arg(long)]
    alpha: Option<f64>,
    /// Largest coset norm (default: the safe radius).
    #[arg(long)]
    max_norm: Option<usize>,
    #[arg(long, default_value_t = 16)]
    nodes: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct ReproduceArgs {
    /// AC-1 .. AC-8 or all.
    which: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Serialize)]
struct CatalogArgs {
    /// Regenerate the catalog document from the builder and write it here.
    #[arg(long)]
    write: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

/// Result of a command that ran to completion.
enum Status {
    Pass,
    /// A check failed; exit code 2.
    CheckFailed,
    /// A budget stopped the computation; the outputs are partial. Exit code 1.
    Partial,
}

struct Ctx {
    catalog: &'static Catalog,
    manifest: RunManifest,
}

impl Ctx {
    fn group(&self, name: &str) -> Result<&'static GroupSpec> {
        Ok(self.catalog.group(name)?)
    }

    fn emit(&mut self, out: &Option<PathBuf>, text: &str) -> Result<()> {
        match out {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(p, text)?;
                self.manifest.outputs.push(p.display().to_string());
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&mut self, out: &Option<PathBuf>, value: &T) -> Result<()> {
        let v = decimalize(serde_json::to_value(value)?, REPORT_DIGITS);
        let mut s = serde_json::to_string_pretty(&v)?;
        s.push('\n');
        self.emit(out, &s)
    }

    fn side_file(&mut self, path: PathBuf, text: &str) -> Result<()> {
        std::fs::write(&path, text)?;
        self.manifest.outputs.push(path.display().to_string());
        Ok(())
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn counts_csv(counts: &[usize]) -> Result<String> {
    csv_text(&["n", "count"], counts.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.to_string()]))
}

/// Ball of the requested radius, or the largest completed radius when the element budget runs out.
fn ball_within_budget(letters: &GenSet, radius: usize, max_elements: usize) -> Result<(BallRecord, Option<String>)> {
    let opts = BallOptions {
        max_elements: Some(max_elements),
        workers: None,
    };
    match ball_with(letters, radius, &opts) {
        Ok(b) => Ok((b, None)),
        Err(Error::Budget { what, completed_radius }) => {
            let b = ball_with(letters, completed_radius, &opts)?;
            Ok((b, Some(format!("{what}; results cover radius {completed_radius} of {radius}"))))
        }
        Err(e) => Err(e),
    }
}

fn mark_partial(ctx: &mut Ctx, marker: Option<String>) -> Status {
    match marker {
        Some(m) => {
            eprintln!("partial: {m}");
            ctx.manifest.partial = Some(m);
            Status::Partial
        }
        None => Status::Pass,
    }
}

fn cmd_ball(ctx: &mut Ctx, a: &BallArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let letters = GenSet::from_spec(g)?;
    let key = cache_key(&g.name, &letters, a.radius);
    let (b, marker) = match &a.cache {
        Some(p) if p.exists() => (load_ball(p, &key, &letters)?, None),
        _ => ball_within_budget(&letters, a.radius, a.max_elements)?,
    };
    if let Some(p) = &a.cache {
        if !p.exists() && marker.is_none() {
            save_ball(p, &key, &b)?;
        }
    }
    ctx.emit(&a.out.out, &counts_csv(b.counts())?)?;
    Ok(mark_partial(ctx, marker))
}

fn cmd_schreier(ctx: &mut Ctx, a: &SchreierArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let s = schreier_ball(&GenSet::from_spec(g)?, g.subgroup(&a.subgroup)?, a.radius)?;
    ctx.emit(&a.out.out, &counts_csv(s.counts())?)?;
    Ok(Status::Pass)
}

fn cmd_growth(ctx: &mut Ctx, a: &GrowthArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let letters = GenSet::from_spec(g)?;
    let requested = a.radius.unwrap_or(24);
    let (b, marker) = ball_within_budget(&letters, requested, a.max_elements)?;
    let r = b.radius();
    let window = default_window(r);
    let mut reports = vec![growth::report("ball", bass_guivarch(g), b.counts(), window, a.tolerance)?];
    let mut columns: Vec<(&str, Vec<usize>)> = vec![("ball", b.counts().to_vec())];
    let mut degrees = json!({ "bass_guivarch": bass_guivarch(g) });
    if let Some(name) = &a.subgroup {
        let sub = g.subgroup(name)?;
        let rel = b.relative_count(sub);
        let sch = schreier_ball(&letters, sub, r)?;
        let (rd, sd) = (relative_degree(g, sub)?, schreier_degree(g, sub)?);
        degrees["relative"] = json!(rd);
        degrees["schreier"] = json!(sd);
        reports.push(growth::report("relative", rd, &rel, window, a.tolerance)?);
        reports.push(growth::report("schreier", sd, sch.counts(), window, a.tolerance)?);
        columns.push(("relative", rel));
        columns.push(("schreier", sch.counts().to_vec()));
    }
    if let Some(p) = &a.csv {
        let mut header = vec!["n"];
        header.extend(columns.iter().map(|c| c.0));
        let text = csv_text(
            &header,
            (0..=r).map(|n| std::iter::once(n.to_string()).chain(columns.iter().map(|c| c.1[n].to_string())).collect()),
        )?;
        ctx.side_file(p.clone(), &text)?;
    }
    let failed = reports.iter().any(|x| x.verdict == Verdict::Mismatch);
    let doc = json!({
        "group": g.name,
        "subgroup": a.subgroup,
        "radius": r,
        "requested_radius": requested,
        "partial": marker,
        "degrees": degrees,
        "reports": reports,
    });
    ctx.emit_json(&a.out.out, &doc)?;
    Ok(match (mark_partial(ctx, marker), failed) {
        (Status::Pass, false) => Status::Pass,
        (Status::Pass, true) => Status::CheckFailed,
        (other, _) => other,
    })
}

fn cmd_canon(ctx: &mut Ctx, a: &CanonArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let canon = Canon::new(g)?;
    let word = canon.parse_word(&a.word)?;
    let n = a.n.unwrap_or(word.len().max(1) as u64);
    let base = a.a.unwrap_or(4 * canon.c_comm().max(1) as u64);
    let sorted = canon.sort_normalize(&word, n, base, a.trace_weights)?;
    let peeled = peel_canonical(g, &canon.evaluate(&word))?;
    let ints = |e: &Vec<Vec<num_bigint::BigInt>>| -> Vec<Vec<String>> {
        e.iter().map(|l| l.iter().map(|x| x.to_string()).collect()).collect()
    };
    let agree = sorted.form == peeled;
    let doc = json!({
        "group": g.name,
        "word": a.word,
        "n": n,
        "A": base,
        "c_comm": canon.c_comm(),
        "exponents": ints(&sorted.form.exponents),
        "peel_exponents": ints(&peeled.exponents),
        "agree": agree,
        "steps": sorted.steps,
        "weights": sorted.weights.iter().map(ratio::to_string).collect::<Vec<_>>(),
    });
    ctx.emit_json(&a.out.out, &doc)?;
    Ok(if agree { Status::Pass } else { Status::CheckFailed })
}

fn cmd_verify(ctx: &mut Ctx, a: &WitnessArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let w = g.witness(&a.witness)?;
    let rep = check_witness(g, w)?;
    let mut controls = Vec::new();
    let mut controls_ok = true;
    for c in negative_controls(g, w) {
        let got = check_witness(g, &c.witness)?.first_failure().map(|f| f.name.clone());
        controls_ok &= got.as_deref() == Some(c.expected_clause.as_str());
        controls.push(json!({"description": c.description, "expected_clause": c.expected_clause, "rejected_at": got}));
    }
    let passed = rep.passed() && controls_ok;
    let doc = json!({
        "passed": passed,
        "report": rep,
        "negative_controls": controls,
    });
    ctx.emit_json(&a.out.out, &doc)?;
    if let Some(f) = rep.first_failure() {
        eprintln!("witness {} fails clause '{}': {}", w.name, f.name, f.detail);
    }
    Ok(if passed { Status::Pass } else { Status::CheckFailed })
}

fn cmd_crit(ctx: &mut Ctx, a: &GroupArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let r = crit_interval(g)?;
    ctx.emit_json(&a.out.out, &r)?;
    Ok(Status::Pass)
}

fn is_heisenberg(letters: &GenSet) -> bool {
    HeisenbergSampler::new(letters, []).is_ok()
}

fn make_sampler(g: &GroupSpec, letters: &GenSet, steps: usize, max_elements: usize) -> Result<Box<dyn BlockSampler>> {
    let top = steps.max(1).next_power_of_two();
    if is_heisenberg(letters) {
        let radii: Vec<usize> = (0..=top.trailing_zeros()).map(|k| 1usize << k).collect();
        return Ok(Box::new(HeisenbergSampler::new(letters, radii)?));
    }
    let opts = BallOptions {
        max_elements: Some(max_elements),
        workers: None,
    };
    let b = ball_with(letters, top, &opts).map_err(|e| match e {
        Error::Budget { what, completed_radius } => Error::Budget {
            what: format!("{what}; {} needs a ball of radius {top} for {steps} steps", g.name),
            completed_radius,
        },
        e => e,
    })?;
    Ok(Box::new(BallSampler::new(std::sync::Arc::new(b))))
}

fn make_lengths(g: &GroupSpec, letters: &GenSet, a: &ProcessArgs) -> Result<CosetLengths> {
    let locator = match CosetLocator::abelian(g, &a.subgroup) {
        Ok(l) => l,
        Err(Error::Config(_)) => {
            CosetLocator::Schreier(std::sync::Arc::new(schreier_ball(letters, g.subgroup(&a.subgroup)?, a.steps)?))
        }
        Err(e) => return Err(e),
    };
    Ok(CosetLengths {
        locator,
        c0: a.c0,
        exponent: a.exponent,
    })
}

fn trace_rows(t: &ProcessTrace, letters: &GenSet) -> Vec<Vec<String>> {
    let cosets = t.cosets.as_ref().expect("lengths attached");
    let lengths = t.lengths.as_ref().expect("lengths attached");
    (0..=t.steps())
        .map(|n| {
            vec![
                t.seed.to_string(),
                n.to_string(),
                if n == 0 { String::new() } else { letters.name(t.letters[n - 1]).to_string() },
                cosets[n].clone(),
                fmt(lengths[n], REPORT_DIGITS),
            ]
        })
        .collect()
}

fn cmd_process(ctx: &mut Ctx, a: &ProcessArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let letters = GenSet::from_spec(g)?;
    let lengths = make_lengths(g, &letters, a)?;
    let need = match a.variant {
        Variant::Critical => a.steps.max(a.calibrate_at),
        _ => a.steps,
    };
    let sampler = make_sampler(g, &letters, need, a.max_elements)?;
    ctx.manifest.seeds.push(SeedRange {
        start: a.seed_start,
        count: a.seeds,
    });
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    let seeds = a.seed_start..a.seed_start + a.seeds;
    match a.variant {
        Variant::Plain => {
            for s in seeds {
                let mut t = sample_path(sampler.as_ref(), a.steps, s)?;
                t.attach_lengths(&lengths)?;
                rows.extend(trace_rows(&t, &letters));
            }
        }
        Variant::Right => {
            let wname = match &a.witness {
                Some(w) => w.clone(),
                None => g.witnesses.keys().next().cloned().ok_or_else(|| {
                    Error::Config(format!("{} has no witness to order its cosets", g.name))
                })?,
            };
            let act = CosetOrderAction::new(g, &letters, g.witness(&wname)?)?;
            for s in seeds {
                let mut t = sample_path_right(sampler.as_ref(), &act, &g.identity(), a.steps, s)?;
                t.attach_lengths(&lengths)?;
                rows.extend(trace_rows(&t, &letters));
            }
        }
        Variant::Critical => {
            ctx.manifest.seeds.push(SeedRange {
                start: a.calibration_seed,
                count: a.samples as u64,
            });
            let constants = calibrate_critical(sampler.as_ref(), &lengths, a.degree, a.calibrate_at, a.samples, a.calibration_seed)?;
            let mut outcomes = Vec::new();
            let mut failures = Vec::new();
            for s in seeds {
                match critical_trace(sampler.as_ref(), &lengths, &constants, a.steps, a.retries, s) {
                    Ok(o) => {
                        let mut t = sample_path(sampler.as_ref(), a.steps, o.seed)?;
                        t.attach_lengths(&lengths)?;
                        rows.extend(trace_rows(&t, &letters));
                        outcomes.push(o);
                    }
                    Err(Error::Statistical(m)) => {
                        eprintln!("seed {s}: {m}");
                        failures.push(json!({"seed": s, "detail": m}));
                        status = Status::CheckFailed;
                    }
                    Err(e) => return Err(e),
                }
            }
            if let Some(out) = &a.out.out {
                let mut name = out.file_name().unwrap_or_default().to_os_string();
                name.push(".critical.json");
                let doc = decimalize(
                    serde_json::to_value(json!({"constants": constants, "outcomes": outcomes, "failures": failures}))?,
                    REPORT_DIGITS,
                );
                ctx.side_file(out.with_file_name(name), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            }
        }
    }
    ctx.emit(&a.out.out, &csv_text(&["seed", "n", "letter", "coset", "length"], rows)?)?;
    Ok(status)
}

fn cmd_realize(ctx: &mut Ctx, a: &RealizeArgs) -> Result<Status> {
    let g = ctx.group(&a.group)?;
    let sys = auto_system_min_j(g, &a.witness, a.radius, a.alpha, a.jrange)?;
    if sys.j_max() > a.jrange {
        eprintln!("note: J raised from {} to {} so that J >= max A_v", a.jrange, sys.j_max());
    }
    let degree = fit_cocycle_degree(sys.cocycle())?.degree;
    let file = sys.to_file(degree);
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    ctx.emit(&a.out.out, &s)?;
    Ok(Status::Pass)
}

fn load_system(ctx: &Ctx, path: &Path) -> Result<Realization> {
    let file: SystemFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Realization::from_file(ctx.group(&file.params.group)?, &file)
}

fn cmd_holder(ctx: &mut Ctx, a: &HolderArgs) -> Result<Status> {
    let sys = load_system(ctx, &a.system)?;
    let k = sys.letters().index_of(&a.generator).ok_or_else(|| {
        Error::Config(format!("unknown generator {}; available: {}", a.generator, sys.letters().names().join(", ")))
    })?;
    let alpha = a.alpha.unwrap_or(sys.params().alpha);
    let rows = holder_table(&sys, k, alpha, a.max_norm.unwrap_or(sys.safe_radius()), a.nodes)?;
    let text = csv_text(
        &["v", "‖v‖", "A_v", "kappa_alpha", "formula_bound"],
        rows.iter().map(|r| {
            vec![
                r.coset.clone(),
                r.norm.to_string(),
                fmt(r.a, REPORT_DIGITS),
                fmt(r.kappa_alpha, REPORT_DIGITS),
                fmt(r.formula_bound, REPORT_DIGITS),
            ]
        }),
    )?;
    ctx.emit(&a.out.out, &text)?;
    Ok(Status::Pass)
}

fn cmd_reproduce(ctx: &mut Ctx, a: &ReproduceArgs) -> Result<Status> {
    let ids: Vec<String> = if a.which.eq_ignore_ascii_case("all") {
        reproduce::CRITERIA.iter().map(|s| s.to_string()).collect()
    } else {
        vec![a.which.to_ascii_uppercase()]
    };
    let mut reports = Vec::new();
    for id in &ids {
        let r = reproduce::run(id)?;
        println!("{}", r.summary());
        reports.push(r);
    }
    if ctx.manifest.budget_seconds.is_none() {
        let total: f64 = reports.iter().map(|r| r.budget_seconds).sum();
        ctx.manifest.budget_seconds = Some(fmt(total, REPORT_DIGITS));
    }
    if a.out.out.is_some() {
        ctx.emit_json(&a.out.out, &reports)?;
    }
    Ok(if reports.iter().all(|r| r.passed) { Status::Pass } else { Status::CheckFailed })
}

fn cmd_catalog(ctx: &mut Ctx, a: &CatalogArgs) -> Result<Status> {
    match &a.write {
        Some(p) => {
            let text = catalog::render_catalog(&catalog::build_catalog());
            Catalog::from_json(&text)?;
            ctx.emit(&Some(p.clone()), &text)?;
        }
        None => {
            println!("catalog {}", ctx.catalog.content_hash());
            for g in ctx.catalog.groups() {
                println!(
                    "{}: D = {}, subgroups {}, witnesses {}",
                    g.name,
                    bass_guivarch(g),
                    g.subgroups.keys().cloned().collect::<Vec<_>>().join(" "),
                    g.witnesses.keys().cloned().collect::<Vec<_>>().join(" ")
                );
            }
        }
    }
    Ok(Status::Pass)
}

fn out_of(cmd: &Cmd) -> Option<&PathBuf> {
    match cmd {
        Cmd::Ball(a) => a.out.out.as_ref(),
        Cmd::Schreier(a) => a.out.out.as_ref(),
        Cmd::Growth(a) => a.out.out.as_ref(),
        Cmd::Canon(a) => a.out.out.as_ref(),
        Cmd::VerifyWitness(a) => a.out.out.as_ref(),
        Cmd::Crit(a) => a.out.out.as_ref(),
        Cmd::Process(a) => a.out.out.as_ref(),
        Cmd::Realize(a) => a.out.out.as_ref(),
        Cmd::Holder(a) => a.out.out.as_ref(),
        Cmd::Reproduce(a) => a.out.out.as_ref(),
        Cmd::Catalog(a) => a.write.as_ref(),
        Cmd::Replay(_) => None,
    }
}

fn load_catalog(path: &Option<PathBuf>) -> Result<&'static Catalog> {
    match path {
        None => Ok(catalog::builtin()),
        Some(p) => Ok(Box::leak(Box::new(Catalog::from_json(&std::fs::read_to_string(p)?)?))),
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<Status> {
    if let Cmd::Replay(r) = &cli.cmd {
        let m = RunManifest::load(&r.manifest)?;
        let again = Cli::try_parse_from(&m.argv).map_err(|e| Error::Config(format!("manifest argv does not parse: {e}")))?;
        if matches!(again.cmd, Cmd::Replay(_)) {
            return Err(Error::Config("a manifest cannot replay another replay".into()));
        }
        let hash = load_catalog(&again.catalog)?.content_hash().to_string();
        if hash != m.catalog_hash {
            return Err(Error::Config(format!("catalog hash {hash} differs from the manifest's {}", m.catalog_hash)));
        }
        return execute(again, m.argv);
    }
    let catalog = load_catalog(&cli.catalog)?;
    let name = serde_json::to_value(&cli.cmd)?
        .as_object()
        .and_then(|o| o.keys().next().cloned())
        .unwrap_or_default();
    let mut config = serde_json::to_value(&cli)?;
    if let Value::Object(o) = &mut config {
        o.remove("budget");
    }
    let mut ctx = Ctx {
        catalog,
        manifest: RunManifest::new(&name, argv, decimalize(config, 17), catalog.content_hash()),
    };
    ctx.manifest.budget_seconds = cli.budget.map(|b| fmt(b, REPORT_DIGITS));
    let status = match &cli.cmd {
        Cmd::Ball(a) => cmd_ball(&mut ctx, a),
        Cmd::Schreier(a) => cmd_schreier(&mut ctx, a),
        Cmd::Growth(a) => cmd_growth(&mut ctx, a),
        Cmd::Canon(a) => cmd_canon(&mut ctx, a),
        Cmd::VerifyWitness(a) => cmd_verify(&mut ctx, a),
        Cmd::Crit(a) => cmd_crit(&mut ctx, a),
        Cmd::Process(a) => cmd_process(&mut ctx, a),
        Cmd::Realize(a) => cmd_realize(&mut ctx, a),
        Cmd::Holder(a) => cmd_holder(&mut ctx, a),
        Cmd::Reproduce(a) => cmd_reproduce(&mut ctx, a),
        Cmd::Catalog(a) => cmd_catalog(&mut ctx, a),
        Cmd::Replay(_) => unreachable!("handled above"),
    }?;
    if let Some(out) = out_of(&cli.cmd) {
        ctx.manifest.save(&manifest_path_for(out))?;
    }
    Ok(status)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    match execute(cli, argv) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(2),
        Ok(Status::Partial) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
