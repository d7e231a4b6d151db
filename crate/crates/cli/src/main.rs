use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use backbone_core::dimacs::{emit_dimacs_named, ParsedDimacs};
use backbone_core::generators::InstanceMeta;
use backbone_core::krom::ImplicationGraph;
use backbone_core::sat::SatResult;
use backbone_core::sus::{
    sus_search_with, sus_vo_search_with, SearchMode, SusOptions, WitnessSubset,
};
use backbone_core::{
    classify, full_backbones_with, is_k_backbone, iterative_k_backbones_with, local_backbones_with,
    parse_dimacs_with, r_level, solve, CnfFormula, Error, Exec, Literal, OrderDistributionReport,
    ParseOptions, Var, VarNames,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

mod generate;

/// Backbones, local backbones and small unsatisfiable subsets of CNF formulas.
#[derive(Parser)]
#[command(name = "backbone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Syntactic classes and size measures.
    Classify(Common),
    /// Satisfiability with a model.
    Solve(Common),
    /// All backbone literals (requires a satisfiable input).
    Backbones(Common),
    /// Unsatisfiable subset of at most k clauses.
    Sus {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        k: usize,
        /// Use the bounded-occurrence search with this occurrence bound.
        #[arg(long)]
        vo: Option<usize>,
        /// Report a smallest witness instead of the first one found.
        #[arg(long)]
        min: bool,
    },
    /// Local k-backbones, or a single variable with --var.
    Local {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        var: Option<String>,
    },
    /// Iterative k-backbones, or a single variable with --var.
    Iterative {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        var: Option<String>,
    },
    /// Literals forced by the r_k refutation hierarchy.
    Uc {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        k: usize,
    },
    /// Implication graph of a Krom formula in Graphviz format.
    Graph(Common),
    /// Generate an instance as DIMACS plus a JSON sidecar.
    Generate(generate::GenerateArgs),
    /// Backbone order and iterative order distribution.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

#[derive(Args)]
struct Common {
    /// DIMACS CNF input file.
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Reject tautological clauses (`false` drops them with a warning).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict_tautologies: bool,
    /// Worker threads; 1 runs sequentially. Defaults to the processor count.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Unsat(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnsatInput | Error::UnsatDetected => Failure::Unsat(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<Answer, Failure>;

/// Exit status of a successful run: decision subcommands answer no with 1.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Answer {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsat(msg)) => {
            eprintln!("unsat: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Classify(c) => cmd_classify(&c),
        Command::Solve(c) => cmd_solve(&c),
        Command::Backbones(c) => cmd_backbones(&c),
        Command::Sus { common, k, vo, min } => cmd_sus(&common, k, vo, min),
        Command::Local { common, k, var } => cmd_local(&common, k, var.as_deref()),
        Command::Iterative { common, k, var } => cmd_iterative(&common, k, var.as_deref()),
        Command::Uc { common, k } => cmd_uc(&common, k),
        Command::Graph(c) => cmd_graph(&c),
        Command::Generate(args) => generate::run(&args).map(|()| Answer::Yes),
        Command::Report { common, kmax } => cmd_report(&common, kmax),
    }
}

struct Loaded {
    name: String,
    parsed: ParsedDimacs,
    exec: Exec,
}

impl Loaded {
    fn formula(&self) -> &CnfFormula {
        &self.parsed.formula
    }

    fn names(&self) -> &VarNames {
        &self.parsed.names
    }

    fn show(&self, lit: Literal) -> String {
        match self.names().get(lit.var()) {
            Some(name) if lit.is_positive() => name.to_owned(),
            Some(name) => format!("-{name}"),
            None => lit.to_string(),
        }
    }

    fn resolve_var(&self, spec: &str) -> Result<Var, Failure> {
        let by_index = spec.parse::<u32>().ok().and_then(Var::try_new);
        let by_name = || {
            self.names()
                .0
                .iter()
                .find(|(_, n)| n.as_str() == spec)
                .map(|(&v, _)| v)
        };
        let var = by_index
            .or_else(by_name)
            .ok_or_else(|| Failure::Input(format!("unknown variable `{spec}`")))?;
        if !self.formula().contains_var(var) {
            return Err(Error::UnknownVariable(var).into());
        }
        Ok(var)
    }
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let text = fs::read_to_string(&c.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", c.input.display())))?;
    let opts = ParseOptions {
        lenient_tautologies: !c.strict_tautologies,
    };
    let parsed = parse_dimacs_with(&text, opts)
        .map_err(|e| Failure::Input(format!("{}: {e}", c.input.display())))?;
    for d in &parsed.diagnostics {
        eprintln!(
            "warning: {}: line {}: {}",
            c.input.display(),
            d.line,
            d.message
        );
    }
    let name = c.input.file_stem().map_or_else(
        || c.input.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok(Loaded {
        name,
        parsed,
        exec: configure_jobs(c.jobs)?,
    })
}

fn configure_jobs(jobs: Option<usize>) -> Result<Exec, Failure> {
    match jobs {
        Some(0) => Err(Failure::Input("--jobs must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // Only the first call can configure the global pool; a second call is harmless.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
            Ok(Exec::Parallel)
        }
        _ => Ok(Exec::Parallel),
    }
}

fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    write_output(c.output.as_deref(), text)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Input(format!("cannot write stdout: {e}")))
        }
    }
}

fn format_of(c: &Common, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = c.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Input(
            "this subcommand does not support the requested --format".into(),
        ))
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value");
    s.push('\n');
    s
}

fn lits_json(lits: &[Literal]) -> Vec<i32> {
    lits.iter().map(|l| l.to_dimacs()).collect()
}

fn lits_text(l: &Loaded, lits: &[Literal]) -> String {
    lits.iter()
        .map(|&x| l.show(x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn witness_text(l: &Loaded, w: &WitnessSubset) -> String {
    let ids: Vec<String> = w.clause_ids.iter().map(|id| format!("c{id}")).collect();
    let mut out = format!("witness: {}\n", ids.join(" "));
    for &id in &w.clause_ids {
        if let Some(c) = l.formula().get(id) {
            let body: Vec<String> = c.to_dimacs().iter().map(i32::to_string).collect();
            out.push_str(&format!("  c{id}: {} 0\n", body.join(" ")));
        }
    }
    out
}

fn cmd_classify(c: &Common) -> Outcome {
    let l = load(c)?;
    let phi = l.formula();
    let class = classify(phi);
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let text = if f == Format::Json {
        json_text(&json!({
            "n_vars": phi.vars().len(),
            "n_clauses": phi.len(),
            "length": phi.length(),
            "class": class,
        }))
    } else {
        format!(
            "vars: {}\nclauses: {}\nlength: {}\nmax clause width: {}\nmax occurrence: {}\n\
             krom: {}\nhorn: {}\ndefinite horn: {}\nunit-free horn: {}\nunit clauses: {}\nempty clause: {}\n",
            phi.vars().len(),
            phi.len(),
            phi.length(),
            class.max_clause_width,
            class.max_occurrence,
            class.krom,
            class.horn,
            class.definite_horn,
            class.nu_horn,
            class.unit_clauses,
            class.has_empty_clause,
        )
    };
    emit(c, &text)?;
    Ok(Answer::Yes)
}

fn cmd_solve(c: &Common) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let (text, answer) = match solve(l.formula()) {
        SatResult::Sat(model) => {
            let lits: Vec<Literal> = l
                .formula()
                .vars()
                .into_iter()
                .map(|v| v.literal(model.get(v).unwrap_or(false)))
                .collect();
            let text = if f == Format::Json {
                json_text(&json!({ "satisfiable": true, "model": lits_json(&lits) }))
            } else {
                format!("SAT\nmodel: {}\n", lits_text(&l, &lits))
            };
            (text, Answer::Yes)
        }
        SatResult::Unsat => {
            let text = if f == Format::Json {
                json_text(&json!({ "satisfiable": false }))
            } else {
                "UNSAT\n".to_owned()
            };
            (text, Answer::No)
        }
    };
    emit(c, &text)?;
    Ok(answer)
}

fn cmd_backbones(c: &Common) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let bb = full_backbones_with(l.formula(), l.exec)?;
    let text = if f == Format::Json {
        json_text(&json!({ "count": bb.len(), "backbones": lits_json(&bb) }))
    } else {
        format!("backbones ({}): {}\n", bb.len(), lits_text(&l, &bb))
    };
    emit(c, &text)?;
    Ok(Answer::Yes)
}

fn cmd_sus(c: &Common, k: usize, vo: Option<usize>, min: bool) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let found = match vo {
        Some(d) => sus_vo_search_with(l.formula(), k, d, l.exec)?,
        None => {
            let mode = if min {
                SearchMode::Minimum
            } else {
                SearchMode::First
            };
            sus_search_with(l.formula(), k, SusOptions { mode, exec: l.exec })
        }
    };
    let text = match (&found, f) {
        (Some(w), Format::Json) => json_text(&json!({ "k": k, "found": true, "witness": w })),
        (None, Format::Json) => json_text(&json!({ "k": k, "found": false })),
        (Some(w), _) => format!(
            "yes: unsatisfiable subset of {} clauses\n{}",
            w.len(),
            witness_text(&l, w)
        ),
        (None, _) => format!("no: every subset of at most {k} clauses is satisfiable\n"),
    };
    emit(c, &text)?;
    Ok(if found.is_some() {
        Answer::Yes
    } else {
        Answer::No
    })
}

fn cmd_local(c: &Common, k: usize, var: Option<&str>) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    if let Some(spec) = var {
        let x = l.resolve_var(spec)?;
        let r = is_k_backbone(l.formula(), x, k)?;
        let text = match (&r.forced, f) {
            (_, Format::Json) => json_text(&json!({ "variable": x, "k": k, "result": r })),
            (Some(lit), _) => {
                let sign = if lit.is_positive() { '+' } else { '-' };
                let w = r.witness.as_ref().expect("witness with a positive answer");
                format!("yes, polarity {sign}\n{}", witness_text(&l, w))
            }
            (None, _) => format!("no: {spec} is not a {k}-backbone\n"),
        };
        emit(c, &text)?;
        return Ok(if r.is_backbone {
            Answer::Yes
        } else {
            Answer::No
        });
    }
    let lits = local_backbones_with(l.formula(), k, l.exec);
    let text = if f == Format::Json {
        json_text(&json!({ "k": k, "count": lits.len(), "backbones": lits_json(&lits) }))
    } else {
        format!("{k}-backbones ({}): {}\n", lits.len(), lits_text(&l, &lits))
    };
    emit(c, &text)?;
    Ok(Answer::Yes)
}

fn cmd_iterative(c: &Common, k: usize, var: Option<&str>) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let target = var.map(|s| l.resolve_var(s)).transpose()?;
    let r = iterative_k_backbones_with(l.formula(), k, l.exec)?;
    if let Some(x) = target {
        let hit = r.forced.iter().find(|lit| lit.var() == x).copied();
        let text = match (hit, f) {
            (_, Format::Json) => json_text(&json!({ "variable": x, "k": k, "forced": hit })),
            (Some(lit), _) => format!(
                "yes, polarity {}\n",
                if lit.is_positive() { '+' } else { '-' }
            ),
            (None, _) => format!("no: {} is not an iterative {k}-backbone\n", var.unwrap()),
        };
        emit(c, &text)?;
        return Ok(if hit.is_some() {
            Answer::Yes
        } else {
            Answer::No
        });
    }
    let text = if f == Format::Json {
        json_text(&json!({ "k": k, "rounds": r.rounds, "forced": lits_json(&r.forced) }))
    } else {
        format!(
            "iterative {k}-backbones ({}, {} rounds): {}\n",
            r.forced.len(),
            r.rounds,
            lits_text(&l, &r.forced)
        )
    };
    emit(c, &text)?;
    Ok(Answer::Yes)
}

fn cmd_uc(c: &Common, k: usize) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Text, &[Format::Text, Format::Json])?;
    let r = r_level(l.formula(), k);
    let text = if f == Format::Json {
        json_text(
            &json!({ "k": k, "contradiction": r.contradiction, "forced": lits_json(&r.forced) }),
        )
    } else if r.contradiction {
        format!("r_{k} refutes the formula\n")
    } else {
        format!(
            "r_{k} forced ({}): {}\n",
            r.forced.len(),
            lits_text(&l, &r.forced)
        )
    };
    emit(c, &text)?;
    if r.contradiction {
        return Err(Failure::Unsat(format!("r_{k} derives the empty clause")));
    }
    Ok(Answer::Yes)
}

fn cmd_graph(c: &Common) -> Outcome {
    let l = load(c)?;
    let g = ImplicationGraph::new(l.formula())?;
    emit(c, &g.to_dot())?;
    Ok(Answer::Yes)
}

fn cmd_report(c: &Common, kmax: usize) -> Outcome {
    let l = load(c)?;
    let f = format_of(c, Format::Json, &[Format::Json, Format::Csv])?;
    let report =
        OrderDistributionReport::build_named(&l.name, l.formula(), l.names(), kmax, l.exec)?;
    let text = if f == Format::Csv {
        report.to_csv()
    } else {
        report.to_json()
    };
    emit(c, &text)?;
    Ok(Answer::Yes)
}

fn write_instance(
    out: Option<&Path>,
    formula: &CnfFormula,
    names: &VarNames,
    meta: &InstanceMeta,
) -> Result<(), Failure> {
    let dimacs = emit_dimacs_named(formula, names);
    write_output(out, &dimacs)?;
    if let Some(p) = out {
        let mut sidecar = p.as_os_str().to_owned();
        sidecar.push(".json");
        let text = json_text(&serde_json::to_value(meta).expect("metadata serializes"));
        write_output(Some(Path::new(&sidecar)), &text)?;
    }
    Ok(())
}
