//! The `pft` command line: parse, check, normalize and enumerate.
//!
//! [`run`] never touches the process; it returns the exit code and the text
//! for stdout and stderr, so transcripts can be compared byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use pft_core::{
    check_equation, check_hom, check_model, enumerate_homs, enumerate_models, eval_sorted, eval_structural, eval_term,
    finpar::FinPfn, finset, has_finite_limits, kt_totals, missing_limit, model::show_sorted_map, par_construction,
    parse_fincat, parse_model, parse_rcat, parse_theory, sort_of, theory::builtin_source, unit_embed, ConcreteRCat,
    EnumOptions, EqCheck, FinCat, HomCheck, Interpretation, ModelError, ParseError, PartialEquation, SortedMap,
    StructTarget, Term, Theory, BUILTIN_NAMES, DEFAULT_SEARCH_CAP,
};

/// Exit code for a successful run or an equation that holds.
pub const EXIT_OK: i32 = 0;
/// Exit code for a semantic failure, printed with its counterexample.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, input and parse errors.
pub const EXIT_USAGE: i32 = 2;

/// Output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "pft", version, about = "Partial equational theories and their finite models", color = clap::ColorChoice::Never)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a theory
    CheckTheory {
        /// Theory file, or `builtin:NAME`
        theory: String,
        /// Print the theory in normal form
        #[arg(long)]
        print: bool,
        /// Also list the derived structural equations
        #[arg(long)]
        derived: bool,
    },
    /// Print the structural normal form of a generator-free term
    Normalize {
        #[arg(long)]
        term: String,
        /// cm, cc, cam, frob or pf
        #[arg(long, default_value = "pf")]
        target: String,
        /// Theory whose sorts the term may mention
        #[arg(long)]
        theory: Option<String>,
    },
    /// Compare two terms
    Eq(EqArgs),
    /// Check every equation of a theory in a model
    CheckModel {
        theory: String,
        model: String,
        /// Also check the derived structural equations
        #[arg(long)]
        audit: bool,
    },
    /// List all models with the given carrier sizes
    EnumerateModels {
        theory: String,
        /// Carrier size of every sort
        #[arg(long, conflicts_with = "carriers")]
        size: Option<usize>,
        /// Carrier sizes in sort order, comma separated
        #[arg(long, value_delimiter = ',')]
        carriers: Option<Vec<usize>>,
        /// Keep one model per isomorphism class
        #[arg(long)]
        up_to_iso: bool,
        /// Print only the number of models
        #[arg(long)]
        count: bool,
    },
    /// List homomorphisms between two models, or check one map
    Hom {
        theory: String,
        source: String,
        target: String,
        /// Images per sort, `/` between sorts, e.g. "0 1 1" or "0 / 1 0"
        #[arg(long)]
        map: Option<String>,
    },
    /// Tabulate a term in a model
    Eval { theory: String, model: String, term: String },
    /// Finite category constructions
    Catkit {
        #[command(subcommand)]
        command: CatCommand,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct EqMode {
    /// Exact comparison of generator-free terms
    #[arg(long)]
    structural: bool,
    /// Kleene equality in one model file
    #[arg(long, value_name = "FILE")]
    in_model: Option<String>,
    /// Look for a counterexample in all models up to this size
    #[arg(long, value_name = "N")]
    model_search: Option<usize>,
}

#[derive(Args, Debug)]
struct EqArgs {
    theory: String,
    lhs: String,
    rhs: String,
    #[command(flatten)]
    mode: EqMode,
}

#[derive(Subcommand, Debug)]
enum CatCommand {
    /// Build the category of mono-legged spans
    Par {
        /// Category file, or `finset:0,1,2`
        category: String,
    },
    /// Totals of split restriction idempotents and the unit embedding
    Kt {
        /// Restriction category file, or `pfn:1,2`
        rcat: String,
    },
    /// Check for a terminal object, binary products and equalizers
    CheckLex {
        /// Category file, `finset:...`, or with `--kt` a restriction category
        category: String,
        /// Check the totals of split idempotents of a restriction category
        #[arg(long)]
        kt: bool,
    },
}

/// A failure carrying its exit code; the message is already located.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// Where a parsed text came from, for error locations.
struct Source {
    label: String,
    text: String,
}

impl Source {
    fn located(&self, e: &ParseError) -> Failure {
        Failure::usage(format!("{}:{}:{}: {}", self.label, e.line, e.col, e.message))
    }
}

fn read_source(arg: &str) -> Res<Source> {
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::usage(format!("{arg}: {e}")))?;
    Ok(Source {
        label: arg.to_string(),
        text,
    })
}

fn load_theory(arg: &str) -> Res<Theory> {
    let src = match arg.strip_prefix("builtin:") {
        Some(name) => match builtin_source(name) {
            Some(text) => Source {
                label: format!("{name}.th"),
                text: text.to_string(),
            },
            None => {
                return Err(Failure::usage(format!(
                    "unknown builtin theory `{name}`; known: {}",
                    BUILTIN_NAMES.join(", ")
                )))
            }
        },
        None => read_source(arg)?,
    };
    parse_theory(&src.text).map_err(|e| src.located(&e))
}

fn load_model(arg: &str, thy: &Theory) -> Res<Interpretation> {
    let src = read_source(arg)?;
    let file = parse_model(&src.text, thy).map_err(|e| src.located(&e))?;
    if file.theory != thy.name() {
        return Err(Failure::usage(format!(
            "{}:1:1: model `{}` is of theory `{}`, not `{}`",
            src.label,
            file.name,
            file.theory,
            thy.name()
        )));
    }
    Ok(file.model)
}

fn parse_arg_term(thy: &Theory, text: &str, label: &str) -> Res<Term> {
    thy.parse_term(text).map_err(|e| {
        Failure::usage(format!("<{label}>:{}:{}: {}", e.line, e.col, e.message))
    })
}

fn model_error(e: ModelError) -> Failure {
    Failure::usage(e.to_string())
}

fn search_cap() -> Res<u64> {
    match std::env::var("PFT_SEARCH_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("PFT_SEARCH_CAP: `{v}` is not a number"))),
        Err(_) => Ok(DEFAULT_SEARCH_CAP),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(code) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: out,
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Res<i32> {
    match cmd {
        Command::CheckTheory { theory, print, derived } => check_theory(&theory, print, derived, out),
        Command::Normalize { term, target, theory } => normalize(&term, &target, theory.as_deref(), out),
        Command::Eq(args) => eq(args, out),
        Command::CheckModel { theory, model, audit } => check_model_cmd(&theory, &model, audit, out),
        Command::EnumerateModels {
            theory,
            size,
            carriers,
            up_to_iso,
            count,
        } => enumerate(&theory, size, carriers, up_to_iso, count, out),
        Command::Hom {
            theory,
            source,
            target,
            map,
        } => hom(&theory, &source, &target, map.as_deref(), out),
        Command::Eval { theory, model, term } => eval(&theory, &model, &term, out),
        Command::Catkit { command } => catkit(command, out),
    }
}

fn check_theory(arg: &str, print: bool, derived: bool, out: &mut String) -> Res<i32> {
    let thy = load_theory(arg)?;
    if print {
        write!(out, "{thy}").unwrap();
    } else {
        let sig = thy.signature();
        writeln!(
            out,
            "theory {}: {} sorts, {} operations, {} equations",
            thy.name(),
            sig.sorts().len(),
            sig.gens().len(),
            thy.equations().len()
        )
        .unwrap();
    }
    if derived {
        for e in thy.derived() {
            writeln!(out, "derived {} : {} = {}", e.label(), thy.pretty(e.lhs()), thy.pretty(e.rhs())).unwrap();
        }
    }
    Ok(EXIT_OK)
}

fn normalize(term: &str, target: &str, theory: Option<&str>, out: &mut String) -> Res<i32> {
    let target = StructTarget::from_name(target)
        .ok_or_else(|| Failure::usage(format!("unknown target `{target}`; use cm, cc, cam, frob or pf")))?;
    let sig = match theory {
        Some(arg) => load_theory(arg)?.signature().clone(),
        None => pft_core::Signature::structural(),
    };
    let t = pft_core::parse_term(term, &sig)
        .map_err(|e| Failure::usage(format!("<term>:{}:{}: {}", e.line, e.col, e.message)))?;
    let ty = sort_of(&t, &sig).map_err(|e| Failure::usage(format!("<term>: {e}")))?;
    let single = ty.ins.iter().chain(&ty.outs).chain(t.annotated_sorts()).all(|s| *s == ty_default(&sig));
    if target == StructTarget::Pf && !single {
        let c = eval_sorted(&t).map_err(|e| Failure::usage(format!("<term>: {e}")))?;
        writeln!(out, "{c}").unwrap();
    } else {
        let v = eval_structural(&t, target).map_err(|e| Failure::usage(format!("<term>: {e}")))?;
        writeln!(out, "{v}").unwrap();
    }
    Ok(EXIT_OK)
}

fn ty_default(sig: &pft_core::Signature) -> pft_core::Sort {
    sig.default_sort().cloned().unwrap_or_else(pft_core::Sort::default_sort)
}

fn eq(args: EqArgs, out: &mut String) -> Res<i32> {
    let thy = load_theory(&args.theory)?;
    let lhs = parse_arg_term(&thy, &args.lhs, "lhs")?;
    let rhs = parse_arg_term(&thy, &args.rhs, "rhs")?;
    let equation = PartialEquation::new("query", lhs.clone(), rhs.clone(), thy.signature())
        .map_err(|e| Failure::usage(e.to_string()))?;
    if args.mode.structural {
        if !lhs.is_generator_free() || !rhs.is_generator_free() {
            return Err(Failure::usage("--structural compares generator-free terms only"));
        }
        let l = eval_sorted(&lhs).map_err(|e| Failure::usage(format!("<lhs>: {e}")))?;
        let r = eval_sorted(&rhs).map_err(|e| Failure::usage(format!("<rhs>: {e}")))?;
        if l == r {
            writeln!(out, "EQUAL").unwrap();
            return Ok(EXIT_OK);
        }
        writeln!(out, "NOT EQUAL").unwrap();
        writeln!(out, "lhs: {l}").unwrap();
        writeln!(out, "rhs: {r}").unwrap();
        return Ok(EXIT_FAIL);
    }
    if let Some(path) = &args.mode.in_model {
        let m = load_model(path, &thy)?;
        return match check_equation(&thy, &m, &equation).map_err(model_error)? {
            EqCheck::Holds => {
                writeln!(out, "HOLDS").unwrap();
                Ok(EXIT_OK)
            }
            c => {
                writeln!(out, "FAILS: {c}").unwrap();
                Ok(EXIT_FAIL)
            }
        };
    }
    let n = args.mode.model_search.expect("one mode is required");
    let opts = EnumOptions {
        dedup_up_to_iso: false,
        cap: search_cap()?,
    };
    let sorts = thy.signature().sorts().len();
    for carriers in size_vectors(sorts, n) {
        for m in enumerate_models(&thy, &carriers, opts).map_err(model_error)? {
            let c = check_equation(&thy, &m, &equation).map_err(model_error)?;
            if !c.holds() {
                writeln!(out, "COUNTEREXAMPLE").unwrap();
                writeln!(out, "model counterexample of {}", thy.name()).unwrap();
                out.push_str(&pft_core::model::print_tables(&m));
                writeln!(out, "{c}").unwrap();
                return Ok(EXIT_FAIL);
            }
        }
    }
    writeln!(out, "NO COUNTEREXAMPLE FOUND ≤ {n}").unwrap();
    Ok(EXIT_OK)
}

/// Carrier vectors with every size in `1..=n`, smallest total first.
fn size_vectors(sorts: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let space = pft_core::TupleSpace::uniform(n, sorts);
    let mut all: Vec<Vec<usize>> = space.tuples().map(|t| t.iter().map(|x| x + 1).collect()).collect();
    all.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    all
}

fn check_model_cmd(theory: &str, model: &str, audit: bool, out: &mut String) -> Res<i32> {
    let thy = load_theory(theory)?;
    let m = load_model(model, &thy)?;
    let report = check_model(&thy, &m, audit).map_err(model_error)?;
    if report.all_hold() {
        let n = thy.equations().len();
        let noun = if n == 1 { "equation" } else { "equations" };
        if audit {
            writeln!(out, "OK ({n} {noun}, {} derived)", thy.derived().len()).unwrap();
        } else {
            writeln!(out, "OK ({n} {noun})").unwrap();
        }
        return Ok(EXIT_OK);
    }
    for (label, c) in report.failures() {
        writeln!(out, "FAIL {label}: {c}").unwrap();
    }
    Ok(EXIT_FAIL)
}

fn enumerate(
    theory: &str,
    size: Option<usize>,
    carriers: Option<Vec<usize>>,
    up_to_iso: bool,
    count: bool,
    out: &mut String,
) -> Res<i32> {
    let thy = load_theory(theory)?;
    let sorts = thy.signature().sorts().len();
    let carriers = match (size, carriers) {
        (Some(n), _) => vec![n; sorts],
        (None, Some(c)) if c.len() == sorts => c,
        (None, Some(c)) => {
            return Err(Failure::usage(format!(
                "--carriers gives {} sizes but `{}` has {sorts} sorts",
                c.len(),
                thy.name()
            )))
        }
        (None, None) => return Err(Failure::usage("give --size or --carriers")),
    };
    let opts = EnumOptions {
        dedup_up_to_iso: up_to_iso,
        cap: search_cap()?,
    };
    let models = enumerate_models(&thy, &carriers, opts).map_err(model_error)?;
    if !count {
        for (i, m) in models.iter().enumerate() {
            writeln!(out, "model m{} of {}", i + 1, thy.name()).unwrap();
            out.push_str(&pft_core::model::print_tables(m));
            out.push('\n');
        }
    }
    let noun = if models.len() == 1 { "model" } else { "models" };
    writeln!(out, "# {} {noun}", models.len()).unwrap();
    Ok(EXIT_OK)
}

fn parse_map(text: &str, ma: &Interpretation, mb: &Interpretation) -> Res<SortedMap> {
    let groups: Vec<&str> = text.split('/').collect();
    if groups.len() != ma.carriers().len() {
        return Err(Failure::usage(format!(
            "--map gives {} sorts, expected {}",
            groups.len(),
            ma.carriers().len()
        )));
    }
    let mut images = Vec::new();
    for (g, &n) in groups.iter().zip(ma.carriers()) {
        let img: Vec<usize> = g
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Failure::usage(format!("--map: `{w}` is not an element"))))
            .collect::<Res<_>>()?;
        if img.len() != n {
            return Err(Failure::usage(format!("--map: expected {n} images, got {}", img.len())));
        }
        images.push(img);
    }
    SortedMap::from_images(&images, mb.carriers()).map_err(|e| Failure::usage(format!("--map: {e}")))
}

fn hom(theory: &str, source: &str, target: &str, map: Option<&str>, out: &mut String) -> Res<i32> {
    let thy = load_theory(theory)?;
    let ma = load_model(source, &thy)?;
    let mb = load_model(target, &thy)?;
    let sig = thy.signature();
    if let Some(text) = map {
        let f = parse_map(text, &ma, &mb)?;
        return match check_hom(&thy, &ma, &mb, &f).map_err(model_error)? {
            HomCheck::Ok => {
                writeln!(out, "HOMOMORPHISM").unwrap();
                Ok(EXIT_OK)
            }
            v => {
                writeln!(out, "NOT A HOMOMORPHISM: {v}").unwrap();
                Ok(EXIT_FAIL)
            }
        };
    }
    let homs = enumerate_homs(&thy, &ma, &mb, search_cap()?).map_err(model_error)?;
    for f in &homs {
        writeln!(out, "{}", show_sorted_map(sig, f)).unwrap();
    }
    let noun = if homs.len() == 1 { "homomorphism" } else { "homomorphisms" };
    writeln!(out, "# {} {noun}", homs.len()).unwrap();
    Ok(EXIT_OK)
}

fn eval(theory: &str, model: &str, term: &str, out: &mut String) -> Res<i32> {
    let thy = load_theory(theory)?;
    let m = load_model(model, &thy)?;
    let t = parse_arg_term(&thy, term, "term")?;
    let ty = sort_of(&t, thy.signature()).map_err(|e| Failure::usage(format!("<term>: {e}")))?;
    let f: FinPfn = eval_term(&thy, &m, &t).map_err(model_error)?;
    let ins = m.tuple_space(&ty.ins);
    let outs = m.tuple_space(&ty.outs);
    writeln!(out, "{} : {}", thy.pretty(&t), ty).unwrap();
    let row = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    for (i, v) in f.mapping().iter().enumerate() {
        let args = row(&ins.decode(i + 1));
        let value = match v {
            None => "undef".to_string(),
            Some(_) if ty.outs.is_empty() => "def".to_string(),
            Some(v) => row(&outs.decode(*v)),
        };
        let sep = if args.is_empty() { "" } else { " " };
        writeln!(out, "  {args}{sep}-> {value}").unwrap();
    }
    Ok(EXIT_OK)
}

fn load_category(arg: &str) -> Res<FinCat> {
    if let Some(sizes) = arg.strip_prefix("finset:") {
        return Ok(finset(&parse_sizes(sizes)?).cat);
    }
    let src = read_source(arg)?;
    parse_fincat(&src.text).map_err(|e| match e {
        pft_core::CatError::Parse(p) => src.located(&p),
        other => Failure::usage(format!("{}: {other}", src.label)),
    })
}

fn load_rcat(arg: &str) -> Res<ConcreteRCat> {
    if let Some(sizes) = arg.strip_prefix("pfn:") {
        return Ok(ConcreteRCat::all_partial(&parse_sizes(sizes)?));
    }
    let src = read_source(arg)?;
    parse_rcat(&src.text).map_err(|e| match e {
        pft_core::CatError::Parse(p) => src.located(&p),
        other => Failure::usage(format!("{}: {other}", src.label)),
    })
}

fn parse_sizes(text: &str) -> Res<Vec<usize>> {
    text.split(',')
        .map(|w| w.trim().parse().map_err(|_| Failure::usage(format!("`{w}` is not a size"))))
        .collect()
}

fn hom_table(c: &FinCat, out: &mut String) {
    for x in 0..c.object_count() {
        for y in 0..c.object_count() {
            writeln!(out, "  {} -> {}: {}", c.object_name(x), c.object_name(y), c.hom(x, y).len()).unwrap();
        }
    }
}

fn catkit(cmd: CatCommand, out: &mut String) -> Res<i32> {
    match cmd {
        CatCommand::Par { category } => {
            let c = load_category(&category)?;
            let p = par_construction(&c).map_err(|e| Failure {
                code: EXIT_FAIL,
                message: e.to_string(),
            })?;
            writeln!(out, "Par: {} objects, {} arrows", p.cat.object_count(), p.cat.arrow_count()).unwrap();
            hom_table(&p.cat, out);
            for f in 0..p.cat.arrow_count() {
                let s = p.spans[f];
                writeln!(
                    out,
                    "{} : {} -> {} via {}",
                    p.cat.arrow_name(f),
                    p.cat.object_name(p.cat.src(f)),
                    p.cat.object_name(p.cat.tgt(f)),
                    c.object_name(s.apex)
                )
                .unwrap();
            }
            Ok(EXIT_OK)
        }
        CatCommand::Kt { rcat } => {
            let x = load_rcat(&rcat)?;
            let u = unit_embed(&x).map_err(|e| Failure {
                code: EXIT_FAIL,
                message: e.to_string(),
            })?;
            let k = &u.kt.cat;
            writeln!(out, "Kt: {} objects, {} arrows", k.object_count(), k.arrow_count()).unwrap();
            hom_table(k, out);
            let yes = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "unit functorial: {}", yes(u.functorial)).unwrap();
            writeln!(out, "unit faithful: {}", yes(u.faithful)).unwrap();
            Ok(if u.functorial && u.faithful { EXIT_OK } else { EXIT_FAIL })
        }
        CatCommand::CheckLex { category, kt } => {
            let c = if kt {
                kt_totals(&load_rcat(&category)?).cat
            } else {
                load_category(&category)?
            };
            match missing_limit(&c) {
                None => {
                    debug_assert!(has_finite_limits(&c));
                    writeln!(out, "FINITE LIMITS").unwrap();
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    writeln!(out, "MISSING: {}", w.describe(&c)).unwrap();
                    Ok(EXIT_FAIL)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pft(args: &[&str]) -> Outcome {
        run(std::iter::once("pft").chain(args.iter().copied()))
    }

    #[test]
    fn normalize_spider() {
        let o = pft(&["normalize", "--term", "mu ; cp"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(o.stdout, "m=2 n=2 k=1 left=[1,1] right=[1,1]\n");
    }

    #[test]
    fn structural_equality() {
        let o = pft(&["eq", "builtin:setoid", "cp ; mu", "id", "--structural"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "EQUAL\n"));
        let o = pft(&["eq", "builtin:setoid", "mu ; cp", "id * id", "--structural"]);
        assert_eq!(o.code, 1);
        assert!(o.stdout.starts_with("NOT EQUAL\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(pft(&["eq", "builtin:setoid", "id", "id"]).code, 2);
        assert_eq!(pft(&["frobnicate"]).code, 2);
        let o = pft(&["check-theory", "builtin:nope"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("unknown builtin"));
    }

    #[test]
    fn term_errors_are_located() {
        let o = pft(&["normalize", "--term", "mu ; ; cp"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("error: <term>:1:6:"), "{}", o.stderr);
    }

    #[test]
    fn model_search_reports_bound() {
        let o = pft(&["eq", "builtin:setoid", "sw ; R", "R", "--model-search", "2"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "NO COUNTEREXAMPLE FOUND ≤ 2\n"));
        let o = pft(&["eq", "builtin:setoid", "R", "dl * dl", "--model-search", "2"]);
        assert_eq!(o.code, 1);
        assert!(o.stdout.starts_with("COUNTEREXAMPLE\n"));
    }

    #[test]
    fn size_vectors_smallest_first() {
        assert_eq!(size_vectors(2, 2), vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert!(size_vectors(1, 0).is_empty());
    }
}
