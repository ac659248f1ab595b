use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brauer::canonical::{build_canonical, params_from_xy};
use brauer::classify::{self, Strategy};
use brauer::green::{self, GreenRelation};
use brauer::hd::{self, DReport};
use brauer::iso;
use brauer::section::{parse_section_text, verify_cross_section_with, CrossSectionDoc, VerifyMode};
use brauer::text;
use brauer::{BrauerDiagram, CrossSection, ParamTable, XYParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "brauer", version, about = "Brauer monoids and their R- and L-cross-sections")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "BRAUER_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose diagrams left to right.
    Mul {
        #[arg(long)]
        n: Option<usize>,
        #[arg(required = true, num_args = 2..)]
        elements: Vec<String>,
    },
    /// Rank, stable rank and Green's class keys of a diagram.
    Info {
        #[arg(long)]
        n: Option<usize>,
        element: String,
        /// Compare against a second diagram.
        #[arg(long)]
        with: Option<String>,
    },
    /// Build a canonical R-cross-section.
    Canonical(CanonicalArgs),
    /// Check that a file holds an R- or L-cross-section.
    Verify {
        file: PathBuf,
        #[arg(long)]
        fast: bool,
    },
    /// Count (and list) canonical or all R-cross-sections.
    Enumerate(EnumerateArgs),
    /// Orbits of the symmetric group on R-cross-sections.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = classify::DEFAULT_CANONICAL_LIMIT)]
        limit: usize,
    },
    /// Search for an isomorphism between two cross-sections.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        show_map: bool,
    },
    /// Existence of H-cross-sections.
    Hsection {
        #[arg(long)]
        n: usize,
        /// Largest n at which the idempotent closure is recomputed.
        #[arg(long, default_value_t = hd::DEFAULT_CLOSURE_LIMIT)]
        closure_limit: usize,
    },
    /// Lift a D-cross-section of IS_m to one of B_n.
    Dsection {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "chain", required_unless_present = "chain")]
        gamma: Option<PathBuf>,
        /// Use the chain of partial identities.
        #[arg(long)]
        chain: bool,
    },
    /// ASCII picture of a diagram.
    Render {
        #[arg(long)]
        n: Option<usize>,
        element: String,
    },
}

#[derive(Args, Debug)]
struct CanonicalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, conflicts_with = "params")]
    profile: Option<Profile>,
    /// Parameter table: an `x=.. y=..` line or one `(i,j,l)=0|1` line per slot.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
    #[arg(long, requires = "verify")]
    fast: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    Regular,
    Alternating,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, value_enum)]
    what: What,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Orbits)]
    strategy: StrategyArg,
    /// List the sections themselves (default below n=6).
    #[arg(long, conflicts_with = "counts_only")]
    sections: bool,
    #[arg(long)]
    counts_only: bool,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    Canonical,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Backtrack,
    Orbits,
}

enum Failure {
    Usage(String),
    Refuted(String),
}

impl From<brauer::Error> for Failure {
    fn from(e: brauer::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<(), Failure>;

struct Out {
    format: Format,
}

impl Out {
    fn emit<T: Serialize>(&self, text: impl FnOnce() -> String, value: &T) {
        let body = match self.format {
            Format::Text => text(),
            Format::Json => serde_json::to_string_pretty(value).expect("serializable report") + "\n",
        };
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn diagram(s: &str, n: Option<usize>) -> Result<BrauerDiagram, Failure> {
    text::parse(s, n).map_err(|e| Failure::Usage(format!("{s:?}: {e}")))
}

/// Raw contents of a section file, text or JSON.
fn load_raw(path: &Path) -> Result<(usize, brauer::SectionKind, Vec<BrauerDiagram>), Failure> {
    let body = read(path)?;
    if body.trim_start().starts_with('{') {
        let doc: CrossSectionDoc =
            serde_json::from_str(&body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok((doc.n, doc.kind, doc.elements));
    }
    parse_section_text(&body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_section(path: &Path) -> Result<CrossSection, Failure> {
    let (n, kind, elements) = load_raw(path)?;
    CrossSection::from_elements(n, kind, elements).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn mul(out: &Out, n: Option<usize>, elements: &[String]) -> Run {
    let ds = elements.iter().map(|s| diagram(s, n)).collect::<Result<Vec<_>, _>>()?;
    let mut acc = ds[0].clone();
    let mut circles = 0;
    for d in &ds[1..] {
        let r = acc.compose(d)?;
        circles += r.circles;
        acc = r.product;
    }
    out.emit(|| format!("{acc}\ncircles={circles}\n"), &json!({ "product": acc, "circles": circles }));
    Ok(())
}

fn info(out: &Out, n: Option<usize>, element: &str, with: Option<&str>) -> Run {
    let a = diagram(element, n)?;
    let lc = green::left_cups(&a);
    let rc = green::right_cups(&a);
    let e = a.idempotent_power();
    let mut v = json!({
        "element": a,
        "n": a.n(),
        "rank": a.rank(),
        "corank": a.corank(),
        "stable_rank": a.stable_rank(),
        "idempotent": a.is_idempotent(),
        "idempotent_power": e,
        "left_cups": lc,
        "right_cups": rc,
    });
    let mut t = format!(
        "element {a}\nn={}\nrank={}\ncorank={}\nstable_rank={}\nidempotent={}\nidempotent_power {e}\nR key (left cups) {lc}\nL key (right cups) {rc}\n",
        a.n(),
        a.rank(),
        a.corank(),
        a.stable_rank(),
        a.is_idempotent()
    );
    if let Some(w) = with {
        let b = diagram(w, Some(a.n()))?;
        let mut rel = serde_json::Map::new();
        for r in [GreenRelation::R, GreenRelation::L, GreenRelation::H, GreenRelation::D, GreenRelation::J] {
            let name = format!("{r:?}");
            let holds = green::related(&a, &b, r)?;
            t.push_str(&format!("{name}-related={holds}\n"));
            rel.insert(name, holds.into());
        }
        v["other"] = json!(b);
        v["related"] = rel.into();
    }
    out.emit(|| t, &v);
    Ok(())
}

fn canonical(out: &Out, args: &CanonicalArgs) -> Run {
    let n = args.n;
    let table = match (&args.params, args.profile) {
        (Some(p), _) => ParamTable::parse(n, &read(p)?)?,
        (None, Some(Profile::Alternating)) => params_from_xy(&XYParams::alternating(n)),
        (None, _) => params_from_xy(&XYParams::regular(n)),
    };
    let cs = match build_canonical(n, &table) {
        Ok(cs) => cs,
        Err(e @ brauer::Error::StratumMismatch { .. }) => {
            return Err(Failure::Refuted(format!("parameters do not give a cross-section: {e}")))
        }
        Err(e) => return Err(e.into()),
    };
    let report = args.verify.then(|| {
        let mode = if args.fast { VerifyMode::Fast } else { VerifyMode::Full };
        verify_cross_section_with(n, cs.elements(), cs.kind(), mode)
    });
    let ok = report.as_ref().is_none_or(|r| r.is_ok());
    out.emit(
        || {
            let mut s = cs.to_text();
            if let Some(r) = &report {
                s.push_str(&verdict_text(r));
            }
            s
        },
        &json!({ "params": table, "section": cs.to_doc(), "report": report }),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Refuted("verification failed".into()))
    }
}

fn verdict_text(r: &brauer::VerifyReport) -> String {
    if r.is_ok() {
        return format!("verified: {} cross-section of B_{} ({:?} check)\n", r.kind, r.n, r.mode);
    }
    let mut s = format!(
        "not a cross-section: {} wrong size, {} classes missed, {} hit twice, {} strata off, {} products outside\n",
        r.size_mismatches,
        r.missing.len(),
        r.duplicated.len(),
        r.stratum_errors.len(),
        r.closure_violation_count
    );
    for k in r.missing.iter().take(8) {
        s.push_str(&format!("  missing class {k}\n"));
    }
    for v in &r.closure_violations {
        s.push_str(&format!("  ({}) * ({}) = {}\n", v.left, v.right, v.product));
    }
    s
}

fn verify(out: &Out, file: &Path, fast: bool) -> Run {
    let (n, kind, elements) = load_raw(file)?;
    let mode = if fast { VerifyMode::Fast } else { VerifyMode::Full };
    let r = verify_cross_section_with(n, &elements, kind, mode);
    out.emit(|| verdict_text(&r), &r);
    if r.is_ok() {
        Ok(())
    } else {
        Err(Failure::Refuted("verification failed".into()))
    }
}

fn enumerate(out: &Out, args: &EnumerateArgs) -> Run {
    let n = args.n;
    let list = args.sections || (!args.counts_only && n < 6);
    let strategy = match args.strategy {
        StrategyArg::Backtrack => Strategy::Backtrack,
        StrategyArg::Orbits => Strategy::Orbits,
    };
    let (sections, count, orbits) = match args.what {
        What::Canonical => {
            let limit = args.limit.unwrap_or(classify::DEFAULT_CANONICAL_LIMIT);
            let c = classify::enumerate_canonical_with_limit(n, limit)?;
            let k = c.len() as u128;
            (c, k, None)
        }
        What::All if !list && matches!(strategy, Strategy::Orbits) => {
            let limit = args.limit.unwrap_or(classify::DEFAULT_CANONICAL_LIMIT);
            let canon = classify::enumerate_canonical_with_limit(n, limit)?;
            let r = classify::orbit_report_from(n, &canon)?;
            (Vec::new(), r.total, Some(r.orbits.len()))
        }
        What::All => {
            let limit = args.limit.unwrap_or(classify::DEFAULT_ALL_LIMIT);
            let (all, r) = classify::enumerate_all_with_limit(n, strategy, limit)?;
            let k = all.len() as u128;
            (all, k, Some(r.orbits.len()))
        }
    };
    let shown = if list { sections } else { Vec::new() };
    let docs: Vec<CrossSectionDoc> = shown.iter().map(CrossSection::to_doc).collect();
    out.emit(
        || {
            let mut s = format!("count={count}\n");
            if let Some(o) = orbits {
                s.push_str(&format!("orbits={o}\n"));
            }
            for cs in &shown {
                s.push('\n');
                s.push_str(&cs.to_text());
            }
            s
        },
        &json!({ "n": n, "count": count, "orbits": orbits, "sections": list.then_some(docs) }),
    );
    Ok(())
}

fn classify_cmd(out: &Out, n: usize, limit: usize) -> Run {
    let canon = classify::enumerate_canonical_with_limit(n, limit)?;
    let r = classify::orbit_report_from(n, &canon)?;
    out.emit(
        || {
            let mut s =
                format!("n={} canonical={} total={} orbits={}\n", r.n, r.canonical_count, r.total, r.orbits.len());
            for o in &r.orbits {
                let stab: Vec<String> = o.stabilizer.iter().map(ToString::to_string).collect();
                let rep = match &o.representative_xy {
                    Some(xy) => xy.to_string(),
                    None => o.representative.to_text().trim().replace('\n', " "),
                };
                s.push_str(&format!(
                    "orbit size={} canonical_members={} stabilizer={{{}}} representative {rep}\n",
                    o.size,
                    o.canonical_members,
                    stab.join(", ")
                ));
            }
            s
        },
        &r,
    );
    Ok(())
}

fn iso_cmd(out: &Out, a: &Path, b: &Path, show_map: bool) -> Run {
    let (x, y) = (load_section(a)?, load_section(b)?);
    let r = iso::find_isomorphism(&x, &y)?;
    out.emit(
        || {
            let mut s = format!("found={} nodes={}\n", r.found, r.nodes);
            if let (true, Some(m)) = (show_map, &r.mapping) {
                for (p, q) in m {
                    s.push_str(&format!("{p} -> {q}\n"));
                }
            }
            s
        },
        &r,
    );
    Ok(())
}

fn hsection(out: &Out, n: usize, closure_limit: usize) -> Run {
    let r = hd::h_cross_section_check_with_limit(n, closure_limit)?;
    out.emit(
        || {
            let mut s = format!("n={} exists={} method={:?}\n", r.n, r.exists, r.method);
            if let Some(u) = r.unique {
                s.push_str(&format!("unique={u}\n"));
            }
            if let Some(e) = r.idempotent_count {
                s.push_str(&format!("idempotents={e}\n"));
            }
            if let Some(c) = r.closure_size {
                s.push_str(&format!("closure_size={c}\n"));
            }
            if let Some(sec) = &r.section {
                for a in sec {
                    s.push_str(&format!("{a}\n"));
                }
            }
            if let Some(c) = &r.certificate {
                s.push_str(&format!("H-related pair:\n  {}\n  {}\n", c.first, c.second));
            }
            s.push_str(&format!("{}\n", r.note));
            s
        },
        &r,
    );
    Ok(())
}

fn d_text(r: &DReport) -> String {
    if r.is_ok() {
        return "verified: D-cross-section\n".into();
    }
    let mut s = format!(
        "not a D-cross-section: {} wrong size, strata missing {:?}, repeated {:?}, {} products outside\n",
        r.size_mismatches, r.missing, r.duplicated, r.closure_violations
    );
    for (x, y, p) in &r.examples {
        s.push_str(&format!("  ({x}) * ({y}) = {p}\n"));
    }
    s
}

fn dsection(out: &Out, n: usize, gamma: Option<&Path>, chain: bool) -> Run {
    let m = n / 2;
    let g = match gamma {
        Some(p) if !chain => hd::parse_gamma(&read(p)?, Some(m))?,
        _ => hd::chain_d_section(m),
    };
    let is_report = hd::verify_is_d_cross_section(m, &g);
    if !is_report.is_ok() {
        out.emit(
            || format!("input is not a D-cross-section of IS_{m}\n{}", d_text(&is_report)),
            &json!({ "gamma_report": is_report }),
        );
        return Err(Failure::Refuted(format!("input is not a D-cross-section of IS_{m}")));
    }
    let d = hd::d_from_is(&g, n)?;
    let r = d.verify();
    out.emit(
        || {
            let mut s = format!("n={n} m={m}\n");
            for f in &g {
                if let Ok(a) = hd::lift(f, n) {
                    s.push_str(&format!("corank {}: {a}    from {f}\n", a.corank()));
                }
            }
            s.push_str(&d_text(&r));
            s
        },
        &json!({ "section": d, "report": r }),
    );
    if r.is_ok() {
        Ok(())
    } else {
        Err(Failure::Refuted("lift is not a D-cross-section".into()))
    }
}

fn render(out: &Out, n: Option<usize>, element: &str) -> Run {
    let a = diagram(element, n)?;
    let pic = text::render_ascii(&a);
    out.emit(|| pic.clone(), &json!({ "element": a, "ascii": pic }));
    Ok(())
}

fn run(cli: &Cli) -> Run {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Mul { n, elements } => mul(&out, *n, elements),
        Command::Info { n, element, with } => info(&out, *n, element, with.as_deref()),
        Command::Canonical(args) => canonical(&out, args),
        Command::Verify { file, fast } => verify(&out, file, *fast),
        Command::Enumerate(args) => enumerate(&out, args),
        Command::Classify { n, limit } => classify_cmd(&out, *n, *limit),
        Command::Iso { a, b, show_map } => iso_cmd(&out, a, b, *show_map),
        Command::Hsection { n, closure_limit } => hsection(&out, *n, *closure_limit),
        Command::Dsection { n, gamma, chain } => dsection(&out, *n, gamma.as_deref(), *chain),
        Command::Render { n, element } => render(&out, *n, element),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Refuted(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
