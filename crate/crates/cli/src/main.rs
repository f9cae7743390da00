use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gfsynth::eval::{report_csv, run_corpus};
use gfsynth::exporter::{merge, render};
use gfsynth::gf::{grammar_from_sources, is_identifier, Grammar};
use gfsynth::ingest::{facts_to_text, parse_conllu, SentenceFacts};
use gfsynth::linearizer::{linearize_tree, AbsTree};
use gfsynth::pipeline::{analyze, encode};
use gfsynth::rule_engine::{derive, sentence_atoms, RuleFamily};
use gfsynth::verbalizer::{load_annotations, read_atoms, read_triples, verbalize_atoms, verbalize_triples};

#[derive(Parser)]
#[command(name = "gfsynth", version, about = "Grammar synthesis from dependency parses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fact program of every sentence in a CoNLL-U file.
    Ingest { conllu: PathBuf },
    /// Build one grammar fragment per sentence.
    Synthesize(SynthesizeArgs),
    /// Merge fragments and write Name.gf, NameEng.gf and Name.json.
    Export {
        /// Fragment JSON files or directories holding them.
        #[arg(required = true)]
        fragments: Vec<PathBuf>,
        /// Output path without extension; its file name is the module name.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Linearize functions or trees of a grammar.
    Linearize(LinearizeArgs),
    /// Describe atoms or triples with annotation-derived grammars.
    Verbalize(VerbalizeArgs),
    /// Round-trip a corpus and score the regenerated sentences.
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Per-sentence outcomes as JSON.
        #[arg(long)]
        details: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthesizeArgs {
    conllu: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Write structures.tsv: id, kind and i-value of each sentence, or UNRECOGNIZED.
    #[arg(long)]
    dump_structures: bool,
    /// Write components.json with roles and chunks.
    #[arg(long)]
    dump_components: bool,
    /// Write <id>.models.txt with the derived models of all rule families.
    #[arg(long)]
    dump_models: bool,
}

#[derive(Args)]
struct LinearizeArgs {
    /// An abstract and concrete .gf pair, or one grammar JSON file.
    #[arg(long, num_args = 1.., required = true)]
    grammar: Vec<PathBuf>,
    /// Abstract trees or constant function names; all Message functions if absent.
    #[arg(long = "fun")]
    trees: Vec<String>,
    /// Capitalize and end each output with a period.
    #[arg(long)]
    period: bool,
}

#[derive(Args)]
struct VerbalizeArgs {
    #[arg(long)]
    annotations: PathBuf,
    /// CoNLL-U parses of the annotation sentences.
    #[arg(long)]
    parses: Option<PathBuf>,
    #[arg(long, conflicts_with = "triples", required_unless_present = "triples")]
    atoms: Option<PathBuf>,
    #[arg(long)]
    triples: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_conllu(path: &Path) -> Result<Vec<SentenceFacts>> {
    parse_conllu(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn ingest(conllu: &Path) -> Result<()> {
    let sentences = read_conllu(conllu)?;
    let many = sentences.len() > 1;
    for (i, facts) in sentences.iter().enumerate() {
        if many {
            if i > 0 {
                println!();
            }
            println!("% {}", facts.sentence_id);
        }
        print!("{}", facts_to_text(facts));
    }
    Ok(())
}

fn synthesize(args: &SynthesizeArgs) -> Result<usize> {
    let sentences = read_conllu(&args.conllu)?;
    fs::create_dir_all(&args.output).with_context(|| format!("creating {}", args.output.display()))?;
    let mut failures = 0;
    let mut analyses = Vec::new();
    for facts in &sentences {
        let stem = file_stem(&facts.sentence_id);
        match encode(facts) {
            Ok(g) => write(&args.output.join(format!("{stem}.json")), &serde_json::to_string_pretty(&g)?)?,
            Err(e) => {
                eprintln!("{e}");
                failures += 1;
            }
        }
        if args.dump_structures || args.dump_components {
            analyses.push(analyze(facts));
        }
        if args.dump_models {
            let atoms = sentence_atoms(facts);
            let mut text = String::new();
            for family in [RuleFamily::Structure, RuleFamily::MainComponents, RuleFamily::Complements] {
                text.push_str(&format!("% {family:?}\n{}", derive(&atoms, family).to_fact_text()));
            }
            write(&args.output.join(format!("{stem}.models.txt")), &text)?;
        }
    }
    if args.dump_structures {
        let rows: String = analyses
            .iter()
            .map(|a| match a.structure {
                Some(r) => format!("{}\t{}\t{}\n", a.sentence_id, r.structure.kind.number(), r.structure.i_value),
                None => format!("{}\tUNRECOGNIZED\n", a.sentence_id),
            })
            .collect();
        write(&args.output.join("structures.tsv"), &rows)?;
    }
    if args.dump_components {
        write(&args.output.join("components.json"), &serde_json::to_string_pretty(&analyses)?)?;
    }
    eprintln!(
        "{} of {} sentences encoded into {}",
        sentences.len() - failures,
        sentences.len(),
        args.output.display()
    );
    Ok(failures)
}

fn fragment_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .with_context(|| format!("listing {}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.extension().is_some_and(|e| e == "json")
                        && p.file_name().and_then(|n| n.to_str()) != Some("components.json")
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn load_grammar_json(path: &Path) -> Result<Grammar> {
    let g: Grammar = serde_json::from_str(&read(path)?).with_context(|| format!("decoding {}", path.display()))?;
    g.check().with_context(|| format!("checking {}", path.display()))?;
    Ok(g)
}

fn export(fragments: &[PathBuf], output: &Path) -> Result<()> {
    let name = output
        .file_name()
        .and_then(|n| n.to_str())
        .filter(|n| is_identifier(n))
        .with_context(|| format!("{} does not end in a module name", output.display()))?
        .to_string();
    let grammars = fragment_files(fragments)?
        .iter()
        .map(|p| load_grammar_json(p))
        .collect::<Result<Vec<_>>>()?;
    let mut merged = merge(&grammars);
    merged.name = name.clone();
    merged.check().context("merged grammar")?;
    let (abs, conc) = render(&merged, &name);
    let dir = output.parent().unwrap_or(Path::new(""));
    write(&dir.join(format!("{name}.gf")), &abs)?;
    write(&dir.join(format!("{name}Eng.gf")), &conc)?;
    write(&dir.join(format!("{name}.json")), &serde_json::to_string_pretty(&merged)?)?;
    eprintln!("{} fragments merged into {name}", grammars.len());
    Ok(())
}

fn load_grammar(paths: &[PathBuf]) -> Result<Grammar> {
    if let [single] = paths {
        if single.extension().is_some_and(|e| e == "json") {
            return load_grammar_json(single);
        }
    }
    let sources = paths.iter().map(|p| read(p)).collect::<Result<Vec<_>>>()?;
    let g = grammar_from_sources(&sources)?;
    g.check()?;
    Ok(g)
}

fn sentence(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) => format!("{}{}.", c.to_uppercase(), chars.as_str()),
        None => String::new(),
    }
}

fn linearize(args: &LinearizeArgs) -> Result<()> {
    let g = load_grammar(&args.grammar)?;
    let trees: Vec<AbsTree> = if args.trees.is_empty() {
        g.ordered_functions()
            .iter()
            .filter(|f| f.arg_categories.is_empty() && f.result == g.start)
            .map(|f| AbsTree::leaf(f.name.clone()))
            .collect()
    } else {
        args.trees
            .iter()
            .map(|t| t.parse().with_context(|| format!("tree {t:?}")))
            .collect::<Result<_>>()?
    };
    for tree in &trees {
        let text = linearize_tree(&g, tree)?;
        println!("{}", if args.period { sentence(&text) } else { text });
    }
    Ok(())
}

fn verbalize(args: &VerbalizeArgs) -> Result<()> {
    let parses = match &args.parses {
        Some(p) => read_conllu(p)?,
        None => Vec::new(),
    };
    let annotations = load_annotations(&read(&args.annotations)?, &parses)?;
    if let Some(atoms) = &args.atoms {
        let atoms = read_atoms(&read(atoms)?)?;
        println!("{}", verbalize_atoms(&atoms, &annotations)?);
    } else if let Some(triples) = &args.triples {
        for line in verbalize_triples(&read_triples(&read(triples)?)?, &annotations)? {
            println!("{line}");
        }
    }
    Ok(())
}

fn eval(corpus: &Path, report: Option<&Path>, details: Option<&Path>) -> Result<()> {
    if !corpus.is_dir() {
        bail!("{} is not a directory", corpus.display());
    }
    let runs = run_corpus(corpus)?;
    let scores: Vec<_> = runs.iter().map(|r| r.scores.clone()).collect();
    let csv = report_csv(&scores)?;
    match report {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = details {
        let rows: serde_json::Map<_, _> = runs
            .iter()
            .map(|r| (r.scores.portal.clone(), serde_json::to_value(&r.sentences).unwrap_or_default()))
            .collect();
        write(path, &serde_json::to_string_pretty(&rows)?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest { conllu } => ingest(&conllu)?,
        Command::Synthesize(args) => {
            if synthesize(&args)? > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Export { fragments, output } => export(&fragments, &output)?,
        Command::Linearize(args) => linearize(&args)?,
        Command::Verbalize(args) => verbalize(&args)?,
        Command::Eval {
            corpus,
            report,
            details,
        } => eval(&corpus, report.as_deref(), details.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
