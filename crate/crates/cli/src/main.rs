//! Command-line front end: every pipeline of the library as a subcommand,
//! with text, JSON and DOT output.
//!
//! Exit codes: 0 on success, 1 on domain errors (e.g. a representative that
//! lies in the subgroup), 2 on parse errors. In JSON mode errors are emitted
//! as `{"error": {"code", "message"}}` objects.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coset_forge::automaton::Automaton;
use coset_forge::coset::{
    double_coset_automaton, essential_cosets, is_f_malnormal, membership,
    minimal_representative, normal_form, solve_equation, stabilizer,
    verify_k_reduced, CosetError, SolutionKind,
};
use coset_forge::nielsen::{piece_alphabet, SubgroupAnalysis};
use coset_forge::word::{Alphabet, ParseWordError, Word};
use coset_forge::SubgroupGraph;

mod demo;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum AutomatonKind {
    Subgroup,
    Coset,
    Cone,
}

#[derive(Parser, Debug)]
#[command(
    name = "coset-forge",
    about = "Double cosets of finitely generated subgroups of free groups",
    version
)]
struct Cli {
    /// Subgroup generators, comma-separated words (lowercase = generator,
    /// uppercase = inverse, caret powers accepted: a^-3 ≡ AAA)
    #[arg(long, global = true, value_delimiter = ',')]
    gens: Vec<String>,

    /// Alphabet rank; default is the smallest rank covering the input words
    /// (at least 2)
    #[arg(long, global = true)]
    rank: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// PRNG seed for randomized commands; COSET_FORGE_SEED overrides the
    /// default of 0
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fold the generators into the subgroup graph
    Fold,
    /// Membership: in the subgroup, or in the double coset CfC when --f is given
    Member {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: Option<String>,
    },
    /// Nielsen basis read off the geodesic spanning tree, with M, p, k
    Nielsen,
    /// The piece alphabet over the Nielsen basis
    Pieces,
    /// Graph of the stabilizer C ∩ f⁻¹Cf
    Stabilizer {
        #[arg(long)]
        f: String,
    },
    /// Whether the stabilizer of f is trivial
    Malnormal {
        #[arg(long)]
        f: String,
    },
    /// List all essential double cosets
    Essential,
    /// Solve x·g = f·y over the subgroup
    Solve {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        /// Parameter length bound for enumerating solutions
        #[arg(long, default_value_t = 4)]
        max_param_len: usize,
    },
    /// The unique presentation g = c·f·t over the relative transversal
    NormalForm {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// A shortest word in CfC
    Minrep {
        #[arg(long)]
        f: String,
    },
    /// Sample products c·f·d and report cancellation against k = 2pM
    VerifyK {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Build an automaton (printed in textual form, or DOT/JSON)
    Automaton {
        #[arg(value_enum)]
        kind: AutomatonKind,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
    },
    /// List accepted words up to a length bound, in shortlex order
    Enumerate {
        #[arg(long, value_enum)]
        automaton: AutomatonKind,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Run the built-in worked example and diff every derived value against
    /// the expected fixtures
    Demo {
        /// Directory for DOT output (with --format dot)
        #[arg(long, default_value = ".")]
        out_dir: String,
    },
}

/// Anything that can go wrong after argument parsing.
enum CliError {
    Parse(String),
    Domain { code: &'static str, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "ParseError",
            CliError::Domain { code, .. } => code,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) => m.clone(),
            CliError::Domain { message, .. } => message.clone(),
        }
    }
}

impl From<ParseWordError> for CliError {
    fn from(e: ParseWordError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<CosetError> for CliError {
    fn from(e: CosetError) -> Self {
        let code = match &e {
            CosetError::RepresentativeInSubgroup => "RepresentativeInSubgroup",
            CosetError::NotInCoset => "NotInCoset",
            CosetError::MinimalityViolated { .. } => "MinimalityViolated",
            CosetError::CentralLetterUnrespectable => "CentralLetterUnrespectable",
            CosetError::Nielsen(_) => "NielsenViolation",
            CosetError::Automaton(_) => "KBoundViolated",
        };
        CliError::Domain {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if format == Format::Json {
                let obj = serde_json::json!({
                    "error": {"code": err.code(), "message": err.message()}
                });
                println!("{obj}");
            } else {
                eprintln!("error: {}", err.message());
            }
            ExitCode::from(err.exit_code())
        }
    }
}

fn effective_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("COSET_FORGE_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0)
}

/// Smallest alphabet covering all words, with rank at least 2.
fn infer_alphabet(rank: Option<usize>, words: &[String]) -> Result<Alphabet, CliError> {
    if let Some(r) = rank {
        if r == 0 {
            return Err(CliError::Parse("rank must be positive".into()));
        }
        return Ok(Alphabet::with_rank(r));
    }
    let mut max_gen = 2usize;
    for w in words {
        for c in w.chars() {
            if c.is_ascii_alphabetic() {
                let idx = (c.to_ascii_lowercase() as u8 - b'a') as usize + 1;
                max_gen = max_gen.max(idx);
            }
        }
    }
    Ok(Alphabet::with_rank(max_gen))
}

struct Context {
    alphabet: Alphabet,
    graph: SubgroupGraph,
}

fn build_context(cli: &Cli, extra: &[&Option<String>]) -> Result<Context, CliError> {
    let mut all_words = cli.gens.clone();
    for w in extra.iter().copied().flatten() {
        all_words.push(w.clone());
    }
    let alphabet = infer_alphabet(cli.rank, &all_words)?;
    let mut generators = Vec::new();
    for raw in &cli.gens {
        generators.push(alphabet.parse_word(raw)?);
    }
    let graph = SubgroupGraph::fold(&alphabet, &generators);
    Ok(Context { alphabet, graph })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = cli.format;
    let seed = effective_seed(cli.seed);
    match &cli.command {
        Command::Fold => {
            let ctx = build_context(&cli, &[])?;
            match format {
                Format::Dot => print!("{}", ctx.graph.to_dot("subgroup")),
                Format::Json => println!("{}", ctx.graph.to_json()),
                Format::Text => {
                    println!(
                        "vertices {} edges {} rank {}",
                        ctx.graph.vertex_count(),
                        ctx.graph.edge_count(),
                        ctx.graph.rank()
                    );
                    for (u, g, v) in ctx.graph.edges() {
                        println!(
                            "{u} -{}-> {v}",
                            ctx.alphabet
                                .name(coset_forge::Letter::new(g, false))
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Member { g, f } => {
            let ctx = build_context(&cli, &[&Some(g.clone()), f])?;
            let g = ctx.alphabet.parse_word(g)?;
            let result = match f {
                None => ctx.graph.accepts(&g),
                Some(f) => {
                    let f = ctx.alphabet.parse_word(f)?;
                    membership(&ctx.graph, &f, &g)
                }
            };
            if format == Format::Json {
                println!("{}", serde_json::json!({ "member": result }));
            } else {
                println!("{result}");
            }
            Ok(())
        }
        Command::Nielsen => {
            let ctx = build_context(&cli, &[])?;
            let analysis = SubgroupAnalysis::from_graph(ctx.graph.clone())
                .map_err(CosetError::from)?;
            let basis = analysis.basis();
            if format == Format::Json {
                let gens: Vec<_> = basis
                    .generators()
                    .iter()
                    .map(|g| {
                        serde_json::json!({
                            "word": ctx.alphabet.format_word(&g.word),
                            "s1": ctx.alphabet.format_word(&g.s1),
                            "mu": ctx.alphabet.name(g.mu),
                            "s2": ctx.alphabet.format_word(&g.s2),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "generators": gens,
                        "M": basis.m_bound(),
                        "p": basis.ball(),
                        "k": basis.k_bound(),
                    })
                );
            } else {
                for (i, g) in basis.generators().iter().enumerate() {
                    println!(
                        "h{} = {} = {} . {} . ({})^-1",
                        i + 1,
                        ctx.alphabet.format_word(&g.word),
                        ctx.alphabet.format_word(&g.s1),
                        ctx.alphabet.name(g.mu),
                        ctx.alphabet.format_word(&g.s2),
                    );
                }
                println!(
                    "M {} p {} k {}",
                    basis.m_bound(),
                    basis.ball(),
                    basis.k_bound()
                );
            }
            Ok(())
        }
        Command::Pieces => {
            let ctx = build_context(&cli, &[])?;
            let analysis = SubgroupAnalysis::from_graph(ctx.graph.clone())
                .map_err(CosetError::from)?;
            let pieces = piece_alphabet(analysis.basis());
            if format == Format::Json {
                let a: Vec<_> = pieces
                    .initials()
                    .map(|(&(i, j), w)| {
                        serde_json::json!({"symbol": format!("a{i},{j}"), "word": ctx.alphabet.format_word(w)})
                    })
                    .collect();
                let b: Vec<_> = pieces
                    .terminals()
                    .map(|(&(i, j), w)| {
                        serde_json::json!({"symbol": format!("b{i},{j}"), "word": ctx.alphabet.format_word(w)})
                    })
                    .collect();
                let m: Vec<_> = pieces
                    .middles()
                    .map(|(&(i, j, k), piece)| {
                        serde_json::json!({
                            "symbol": format!("m{i},{j},{k}"),
                            "word": ctx.alphabet.format_word(&piece.word),
                            "alpha": ctx.alphabet.format_word(&piece.alpha),
                            "mu": ctx.alphabet.name(piece.mu),
                            "beta": ctx.alphabet.format_word(&piece.beta),
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({"a": a, "b": b, "m": m}));
            } else {
                for (&(i, j), w) in pieces.initials() {
                    println!("a{i},{j} {}", ctx.alphabet.format_word(w));
                }
                for (&(i, j), w) in pieces.terminals() {
                    println!("b{i},{j} {}", ctx.alphabet.format_word(w));
                }
                for (&(i, j, k), piece) in pieces.middles() {
                    println!(
                        "m{i},{j},{k} {} = {}|{}|{}",
                        ctx.alphabet.format_word(&piece.word),
                        ctx.alphabet.format_word(&piece.alpha),
                        ctx.alphabet.name(piece.mu),
                        ctx.alphabet.format_word(&piece.beta),
                    );
                }
            }
            Ok(())
        }
        Command::Stabilizer { f } => {
            let ctx = build_context(&cli, &[&Some(f.clone())])?;
            let f = ctx.alphabet.parse_word(f)?;
            let stab = stabilizer(&ctx.graph, &f);
            match format {
                Format::Dot => print!("{}", stab.to_dot("stabilizer")),
                Format::Json => {
                    let basis = SubgroupAnalysis::from_graph(stab.clone())
                        .map_err(CosetError::from)?;
                    let gens: Vec<String> = basis
                        .basis()
                        .generators()
                        .iter()
                        .map(|g| ctx.alphabet.format_word(&g.word))
                        .collect();
                    let mut obj = stab.to_json();
                    obj["generators"] = serde_json::json!(gens);
                    println!("{obj}");
                }
                Format::Text => {
                    let analysis = SubgroupAnalysis::from_graph(stab.clone())
                        .map_err(CosetError::from)?;
                    println!("rank {}", stab.rank());
                    for g in analysis.basis().generators() {
                        println!("{}", ctx.alphabet.format_word(&g.word));
                    }
                }
            }
            Ok(())
        }
        Command::Malnormal { f } => {
            let ctx = build_context(&cli, &[&Some(f.clone())])?;
            let f = ctx.alphabet.parse_word(f)?;
            let result = is_f_malnormal(&ctx.graph, &f)?;
            if format == Format::Json {
                println!("{}", serde_json::json!({ "malnormal": result }));
            } else {
                println!("{result}");
            }
            Ok(())
        }
        Command::Essential => {
            let ctx = build_context(&cli, &[])?;
            let cosets = essential_cosets(&ctx.graph)?;
            if format == Format::Json {
                let list: Vec<_> = cosets
                    .iter()
                    .map(|d| {
                        serde_json::json!({
                            "minimal_rep": ctx.alphabet.format_word(&d.minimal_rep),
                            "stabilizer_rank": d.stabilizer.rank(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "essential_cosets": list }));
            } else {
                for d in &cosets {
                    println!(
                        "{} stabilizer-rank {}",
                        ctx.alphabet.format_word(&d.minimal_rep),
                        d.stabilizer.rank()
                    );
                }
            }
            Ok(())
        }
        Command::Solve {
            g,
            f,
            max_param_len,
        } => {
            let ctx = build_context(&cli, &[&Some(g.clone()), &Some(f.clone())])?;
            let g = ctx.alphabet.parse_word(g)?;
            let f = ctx.alphabet.parse_word(f)?;
            let sols = solve_equation(&ctx.graph, &g, &f)?;
            let kind = match sols.kind {
                SolutionKind::Empty => "empty",
                SolutionKind::Singleton => "singleton",
                SolutionKind::Parametrized => "parametrized",
            };
            let pairs = sols.enumerate(*max_param_len);
            if format == Format::Json {
                let list: Vec<_> = pairs
                    .iter()
                    .map(|(x, y)| {
                        serde_json::json!([
                            ctx.alphabet.format_word(x),
                            ctx.alphabet.format_word(y)
                        ])
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({"kind": kind, "solutions": list})
                );
            } else {
                println!("{kind}");
                for (x, y) in pairs {
                    println!(
                        "{} {}",
                        ctx.alphabet.format_word(&x),
                        ctx.alphabet.format_word(&y)
                    );
                }
            }
            Ok(())
        }
        Command::NormalForm { g, f } => {
            let ctx = build_context(&cli, &[&Some(g.clone()), &Some(f.clone())])?;
            let g = ctx.alphabet.parse_word(g)?;
            let f = ctx.alphabet.parse_word(f)?;
            let (c, t) = normal_form(&ctx.graph, &f, &g)?;
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::json!({
                        "c": ctx.alphabet.format_word(&c),
                        "t": ctx.alphabet.format_word(&t),
                    })
                );
            } else {
                println!(
                    "{} {}",
                    ctx.alphabet.format_word(&c),
                    ctx.alphabet.format_word(&t)
                );
            }
            Ok(())
        }
        Command::Minrep { f } => {
            let ctx = build_context(&cli, &[&Some(f.clone())])?;
            let f = ctx.alphabet.parse_word(f)?;
            if ctx.graph.accepts(&f) {
                return Err(CosetError::RepresentativeInSubgroup.into());
            }
            let m = minimal_representative(&ctx.graph, &f);
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::json!({"minimal_rep": ctx.alphabet.format_word(&m)})
                );
            } else {
                println!("{}", ctx.alphabet.format_word(&m));
            }
            Ok(())
        }
        Command::VerifyK { f, samples } => {
            let ctx = build_context(&cli, &[&Some(f.clone())])?;
            let f = ctx.alphabet.parse_word(f)?;
            if format == Format::Json {
                eprintln!("# seed {seed}");
            } else {
                println!("# seed {seed}");
            }
            let report = verify_k_reduced(&ctx.graph, &f, *samples, seed)?;
            if format == Format::Json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!(
                    "M {} p {} k {} samples {} max_cn {} violation {}",
                    report.m, report.p, report.k, report.samples, report.max_cn, report.violation
                );
                println!("witness_c {}", report.witness_c);
                println!("witness_d {}", report.witness_d);
            }
            Ok(())
        }
        Command::Automaton { kind, f, w1, w2 } => {
            let ctx = build_context(&cli, &[f, w1, w2])?;
            let automaton = build_automaton(&ctx, *kind, f, w1, w2)?;
            match format {
                Format::Dot => print!("{}", automaton.to_dot("acceptor")),
                Format::Json => println!("{}", automaton_json(&ctx.alphabet, &automaton)),
                Format::Text => print!("{}", automaton.to_text()),
            }
            Ok(())
        }
        Command::Enumerate {
            automaton,
            f,
            w1,
            w2,
            max_len,
        } => {
            let ctx = build_context(&cli, &[f, w1, w2])?;
            let machine = build_automaton(&ctx, *automaton, f, w1, w2)?;
            let words = machine.enumerate(*max_len);
            if format == Format::Json {
                let list: Vec<String> =
                    words.iter().map(|u| ctx.alphabet.format_word(u)).collect();
                println!("{}", serde_json::json!({ "words": list }));
            } else {
                for u in words {
                    println!("{}", ctx.alphabet.format_word(&u));
                }
            }
            Ok(())
        }
        Command::Demo { out_dir } => demo::run(&cli.gens, cli.rank, format == Format::Json, format == Format::Dot, out_dir),
    }
}

fn build_automaton(
    ctx: &Context,
    kind: AutomatonKind,
    f: &Option<String>,
    w1: &Option<String>,
    w2: &Option<String>,
) -> Result<Automaton, CliError> {
    match kind {
        AutomatonKind::Subgroup => Ok(Automaton::subgroup_acceptor(&ctx.graph)),
        AutomatonKind::Coset => {
            let f = f
                .as_deref()
                .ok_or_else(|| CliError::Parse("--f is required for a coset automaton".into()))?;
            let f = ctx.alphabet.parse_word(f)?;
            Ok(double_coset_automaton(&ctx.graph, &f)?)
        }
        AutomatonKind::Cone => {
            let parse = |o: &Option<String>| -> Result<Word, CliError> {
                match o {
                    None => Ok(Word::identity()),
                    Some(s) => Ok(ctx.alphabet.parse_word(s)?),
                }
            };
            Ok(Automaton::cone(&ctx.alphabet, &parse(w1)?, &parse(w2)?))
        }
    }
}

fn automaton_json(alphabet: &Alphabet, a: &Automaton) -> serde_json::Value {
    let arrows: Vec<_> = a
        .arrows()
        .iter()
        .map(|&(s, l, t)| {
            let label = match l {
                None => "eps".to_string(),
                Some(l) => alphabet.name(l),
            };
            serde_json::json!({"src": s, "label": label, "dst": t})
        })
        .collect();
    let initial: Vec<usize> = a.initial().iter().copied().collect();
    let finals: Vec<usize> = a.finals().iter().copied().collect();
    serde_json::json!({
        "states": a.state_count(),
        "initial": initial,
        "final": finals,
        "arrows": arrows,
        "deterministic": a.is_deterministic(),
    })
}

// Re-exported for the demo module.
pub(crate) use coset_forge::nielsen::PieceRef;

pub(crate) fn piece_names(pieces: &[PieceRef]) -> String {
    pieces
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" . ")
}

pub(crate) fn sorted_words(alphabet: &Alphabet, words: &BTreeSet<Word>) -> Vec<String> {
    let mut list: Vec<&Word> = words.iter().collect();
    list.sort_by(|a, b| a.shortlex_cmp(b));
    list.into_iter().map(|w| alphabet.format_word(w)).collect()
}
