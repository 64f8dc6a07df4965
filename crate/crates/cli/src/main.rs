//! Command-line front end. Every subcommand prints a stable text format on
//! stdout (JSON behind `--json`) and encodes its verdict in the exit code:
//! 0 success, 1 a semantic "no" answer, 2 usage or input errors, 3 a hard
//! cap exceeded.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lmonoid::amalgam::{
    amalgamate, search_amalgam, verify_amalgam, Amalgam, IncompatibleSpan, Span, WordEmbedding,
};
use lmonoid::congruence::{all_congruences, has_cep, monolith};
use lmonoid::term::{failure_witness, gamma, sigma, sigma_dual, Equation};
use lmonoid::variety::{
    amalgamation_status, cid_axiom, cid_identify, count_comm, count_i, count_s, enumerate_words,
    member, AmalgamationStatus, WordFilter,
};
use lmonoid::word::witness_of_embedding;
use lmonoid::{compose, decompose, word_embeds, CapExceeded, ElementMap, FinOrdMonoid, SumWord};

#[derive(Parser)]
#[command(
    name = "lmonoid",
    version,
    about = "Finite idempotent ordered monoids as nested sums of four letters"
)]
struct Cli {
    /// Print one JSON object instead of the text format.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the multiplication table of a word's algebra.
    Compose {
        /// Word such as `G3+C2`; `0` is the empty word.
        word: String,
    },
    /// Print the word whose algebra matches the given table.
    Decompose {
        /// Algebra file; `-` reads stdin.
        algebra: String,
    },
    /// List all words of one algebra size, one per line.
    Enumerate {
        /// Algebra size the words must denote.
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
    },
    /// Tabulate word counts by size: all, subdirectly irreducible, commutative.
    Counts {
        /// Largest size to tabulate, at most 64.
        #[arg(long = "up-to")]
        up_to: usize,
    },
    /// Decide an equation on an algebra; print the first failing valuation.
    Check {
        /// Algebra file; `-` reads stdin.
        algebra: String,
        /// Equation over `x1, x2, …` and `e`, such as `x1*x2 = x2*x1`.
        equation: String,
    },
    /// Print a defining equation, by family and index or for a generated variety.
    Axiom {
        /// Equation family; requires the index N.
        #[arg(value_enum, requires = "n", conflicts_with = "gens")]
        family: Option<FamilyArg>,
        /// Family index: sigma and sigma-dual need n >= 2, gamma needs n >= 3.
        n: Option<u32>,
        /// Commutative generator words; prints the axiom of their variety.
        #[arg(long, value_delimiter = ',', conflicts_with = "family")]
        gens: Option<Vec<String>>,
    },
    /// Report whether an algebra is subdirectly irreducible; print its monolith.
    Sdi {
        /// Algebra file; `-` reads stdin.
        algebra: String,
    },
    /// List every congruence of an algebra, one block partition per line.
    Congruences {
        /// Algebra file; `-` reads stdin.
        algebra: String,
    },
    /// Report whether every congruence of every subalgebra extends.
    Cep {
        /// Algebra file; `-` reads stdin.
        algebra: String,
    },
    /// Print the leftmost embedding witness of one word into another.
    Embed { source: String, target: String },
    /// Report whether a word's algebra lies in the variety the generators generate.
    Member {
        word: String,
        /// Generator words, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
    },
    /// Merge a compatible span of two embeddings into one word.
    Amalgamate(SpanArgs),
    /// Exhaustively search for an amalgam of a span, smallest first.
    SearchAmalgam {
        #[command(flatten)]
        span: SpanArgs,
        /// Largest result size to try; the hard maximum is 8.
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Report whether a variety has the amalgamation property.
    VarietyStatus {
        /// Generator words, comma separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "symbolic")]
        gens: Option<Vec<String>>,
        /// A named variety with no finite generator set.
        #[arg(long, value_enum, conflicts_with = "gens")]
        symbolic: Option<SymbolicArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Sdi,
    Commutative,
    CommutativeSdi,
}

impl FilterArg {
    fn to_filter(self) -> WordFilter {
        match self {
            FilterArg::All => WordFilter::All,
            FilterArg::Sdi => WordFilter::Sdi,
            FilterArg::Commutative => WordFilter::Commutative,
            FilterArg::CommutativeSdi => WordFilter::CommutativeSdi,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FilterArg::All => "all",
            FilterArg::Sdi => "sdi",
            FilterArg::Commutative => "commutative",
            FilterArg::CommutativeSdi => "commutative-sdi",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sigma,
    SigmaDual,
    Gamma,
}

impl FamilyArg {
    fn token(self) -> &'static str {
        match self {
            FamilyArg::Sigma => "sigma",
            FamilyArg::SigmaDual => "sigma-dual",
            FamilyArg::Gamma => "gamma",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolicArg {
    /// All commutative chain algebras.
    Cid,
    /// Generated by the left-absorbing zig-zag chains of every size.
    GChains,
    /// Generated by the right-absorbing zig-zag chains of every size.
    DChains,
    /// All chain algebras.
    Full,
}

impl SymbolicArg {
    fn token(self) -> &'static str {
        match self {
            SymbolicArg::Cid => "cid",
            SymbolicArg::GChains => "g-chains",
            SymbolicArg::DChains => "d-chains",
            SymbolicArg::Full => "full",
        }
    }
}

#[derive(Args)]
struct SpanArgs {
    /// Base: a word, or an algebra file (`-` reads stdin).
    #[arg(long)]
    base: String,
    /// Left target: a word or an algebra file.
    #[arg(long)]
    left: String,
    /// Left witness: word positions `0,2`, or element images `e:1,2`.
    #[arg(long)]
    f: String,
    /// Right target: a word or an algebra file.
    #[arg(long)]
    right: String,
    /// Right witness, in the same two forms as --f.
    #[arg(long)]
    g: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Cap(CapExceeded),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Cap(e) => write!(f, "{e}"),
        }
    }
}

impl From<CapExceeded> for CliError {
    fn from(e: CapExceeded) -> Self {
        CliError::Cap(e)
    }
}

/// One finished command: exit code, text lines, JSON alternative.
struct Outcome {
    code: u8,
    /// `None` prints nothing at all; `Some` prints the string plus newline.
    text: Option<String>,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else if let Some(text) = out.text {
                println!("{text}");
            }
            ExitCode::from(out.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<Outcome, CliError> {
    match cmd {
        Cmd::Compose { word } => {
            let w = parse_word(&word)?;
            let m = compose(&w);
            Ok(Outcome {
                code: 0,
                text: Some(m.to_text().trim_end().to_string()),
                json: json!({
                    "word": w.to_string(),
                    "size": m.size(),
                    "unit": m.unit(),
                    "rows": rows_of(&m),
                }),
            })
        }
        Cmd::Decompose { algebra } => {
            let m = read_algebra(&algebra)?;
            let w = decompose(&m);
            let letters: Vec<&str> = w.letters().iter().map(|l| l.token()).collect();
            Ok(Outcome {
                code: 0,
                text: Some(w.to_string()),
                json: json!({"word": w.to_string(), "letters": letters, "size": m.size()}),
            })
        }
        Cmd::Enumerate { size, filter } => {
            let words = enumerate_words(size, filter.to_filter())?;
            let lines: Vec<String> = words.iter().map(SumWord::to_string).collect();
            let json = json!({
                "size": size,
                "filter": filter.token(),
                "count": lines.len(),
                "words": lines,
            });
            let text = if lines.is_empty() { None } else { Some(lines.join("\n")) };
            Ok(Outcome { code: 0, text, json })
        }
        Cmd::Counts { up_to } => {
            // u128 arithmetic stays exact through size 64; refuse beyond.
            if up_to == 0 || up_to > 64 {
                return Err(CliError::Usage("--up-to must be between 1 and 64".into()));
            }
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for n in 1..=up_to {
                let (i, s, c) = (count_i(n), count_s(n), count_comm(n));
                lines.push(format!("{n}\t{i}\t{s}\t{c}"));
                rows.push(json!({
                    "n": n,
                    "all": i.to_string(),
                    "sdi": s.to_string(),
                    "commutative": c.to_string(),
                }));
            }
            Ok(Outcome { code: 0, text: Some(lines.join("\n")), json: json!({"rows": rows}) })
        }
        Cmd::Check { algebra, equation } => {
            let m = read_algebra(&algebra)?;
            let eq: Equation = equation
                .parse()
                .map_err(|e| CliError::Usage(format!("invalid equation: {e}")))?;
            match failure_witness(&m, &eq)? {
                None => Ok(Outcome {
                    code: 0,
                    text: Some("holds".into()),
                    json: json!({"holds": true, "witness": Value::Null}),
                }),
                Some(valuation) => {
                    let parts: Vec<String> = valuation
                        .iter()
                        .enumerate()
                        .map(|(k, rank)| format!("x{}={rank}", k + 1))
                        .collect();
                    Ok(Outcome {
                        code: 1,
                        text: Some(parts.join(",")),
                        json: json!({"holds": false, "witness": valuation}),
                    })
                }
            }
        }
        Cmd::Axiom { family, n, gens } => run_axiom(family, n, gens),
        Cmd::Sdi { algebra } => {
            let m = read_algebra(&algebra)?;
            match monolith(&m) {
                Some(c) => Ok(Outcome {
                    code: 0,
                    text: Some(format!("yes {c}")),
                    json: json!({"sdi": true, "monolith": c.to_string()}),
                }),
                None => Ok(Outcome {
                    code: 1,
                    text: Some("no".into()),
                    json: json!({"sdi": false, "monolith": Value::Null}),
                }),
            }
        }
        Cmd::Congruences { algebra } => {
            let m = read_algebra(&algebra)?;
            let lines: Vec<String> =
                all_congruences(&m).iter().map(|c| c.to_string()).collect();
            Ok(Outcome {
                code: 0,
                text: Some(lines.join("\n")),
                json: json!({"count": lines.len(), "congruences": lines}),
            })
        }
        Cmd::Cep { algebra } => {
            let m = read_algebra(&algebra)?;
            let yes = has_cep(&m)?;
            Ok(yes_no(yes, json!({"cep": yes})))
        }
        Cmd::Embed { source, target } => {
            let w1 = parse_word(&source)?;
            let w2 = parse_word(&target)?;
            match word_embeds(&w1, &w2) {
                Some(positions) => Ok(Outcome {
                    code: 0,
                    text: Some(join_positions(&positions)),
                    json: json!({"embeds": true, "witness": positions}),
                }),
                None => Ok(Outcome {
                    code: 1,
                    text: Some("none".into()),
                    json: json!({"embeds": false, "witness": Value::Null}),
                }),
            }
        }
        Cmd::Member { word, gens } => {
            let w = parse_word(&word)?;
            let gens = parse_words(&gens)?;
            let yes = member(&w, &gens)?;
            Ok(yes_no(yes, json!({"member": yes})))
        }
        Cmd::Amalgamate(span_args) => {
            let span = build_span(&span_args)?;
            match amalgamate(&span) {
                Ok(am) => Ok(amalgam_outcome(&span, &am, "compatible")),
                Err(IncompatibleSpan(p)) => Ok(Outcome {
                    code: 1,
                    text: Some(format!("incompatible {p}")),
                    json: json!({"compatible": false, "base_position": p}),
                }),
            }
        }
        Cmd::SearchAmalgam { span: span_args, cap } => {
            let span = build_span(&span_args)?;
            match search_amalgam(&span, cap)? {
                Some(am) => Ok(amalgam_outcome(&span, &am, "found")),
                None => Ok(Outcome {
                    code: 1,
                    text: Some("none".into()),
                    json: json!({"found": false}),
                }),
            }
        }
        Cmd::VarietyStatus { gens, symbolic } => match (gens, symbolic) {
            (Some(gens), None) => {
                let words = parse_words(&gens)?;
                let status = amalgamation_status(&words)?;
                let names: Vec<String> = words.iter().map(SumWord::to_string).collect();
                Ok(Outcome {
                    code: u8::from(status != AmalgamationStatus::Yes),
                    text: Some(status.to_string()),
                    json: json!({"generators": names, "status": status.to_string()}),
                })
            }
            (None, Some(sym)) => {
                let status = match sym {
                    SymbolicArg::Full => AmalgamationStatus::No,
                    _ => AmalgamationStatus::OpenInPaper,
                };
                Ok(Outcome {
                    code: u8::from(status == AmalgamationStatus::No),
                    text: Some(status.to_string()),
                    json: json!({"variety": sym.token(), "status": status.to_string()}),
                })
            }
            _ => Err(CliError::Usage("variety-status needs either --gens or --symbolic".into())),
        },
    }
}

fn run_axiom(
    family: Option<FamilyArg>,
    n: Option<u32>,
    gens: Option<Vec<String>>,
) -> Result<Outcome, CliError> {
    match (family, gens) {
        (Some(fam), None) => {
            let n = n.ok_or_else(|| CliError::Usage("axiom FAMILY requires an index N".into()))?;
            let min = match fam {
                FamilyArg::Gamma => 3,
                _ => 2,
            };
            if n < min {
                return Err(CliError::Usage(format!(
                    "{} is defined for n >= {min}",
                    fam.token()
                )));
            }
            let eq = match fam {
                FamilyArg::Sigma => sigma(n),
                FamilyArg::SigmaDual => sigma_dual(n),
                FamilyArg::Gamma => gamma(n),
            };
            Ok(Outcome {
                code: 0,
                text: Some(eq.to_string()),
                json: json!({"family": fam.token(), "n": n, "equation": eq.to_string()}),
            })
        }
        (None, Some(gens)) => {
            let words = parse_words(&gens)?;
            let variety = cid_identify(&words).map_err(|e| CliError::Usage(e.to_string()))?;
            match cid_axiom(variety) {
                Ok(eq) => Ok(Outcome {
                    code: 0,
                    text: Some(eq.to_string()),
                    json: json!({"variety": variety.to_string(), "equation": eq.to_string()}),
                }),
                Err(_) => Ok(Outcome {
                    code: 1,
                    text: Some("none".into()),
                    json: json!({"variety": variety.to_string(), "equation": Value::Null}),
                }),
            }
        }
        _ => Err(CliError::Usage("axiom needs either FAMILY N or --gens".into())),
    }
}

/// A span side resolved to both views: the word and its composed algebra.
struct ResolvedSide {
    word: SumWord,
    algebra: FinOrdMonoid,
}

fn resolve_side(arg: &str, stdin_used: &mut bool) -> Result<ResolvedSide, CliError> {
    if arg == "-" {
        if *stdin_used {
            return Err(CliError::Usage("only one span argument may read stdin".into()));
        }
        *stdin_used = true;
        let algebra = read_algebra(arg)?;
        let word = decompose(&algebra);
        return Ok(ResolvedSide { word, algebra });
    }
    if let Ok(word) = arg.parse::<SumWord>() {
        let algebra = compose(&word);
        return Ok(ResolvedSide { word, algebra });
    }
    if Path::new(arg).exists() {
        let algebra = read_algebra(arg)?;
        let word = decompose(&algebra);
        return Ok(ResolvedSide { word, algebra });
    }
    Err(CliError::Usage(format!("`{arg}` is neither a word nor a readable file")))
}

fn parse_positions(arg: &str) -> Result<Vec<usize>, CliError> {
    if arg.trim().is_empty() {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid position list `{arg}`")))
        })
        .collect()
}

/// Witnesses come as word positions, or as `e:`-prefixed element images
/// which are converted through the canonical word of each algebra.
fn resolve_witness(
    arg: &str,
    base: &ResolvedSide,
    side: &ResolvedSide,
    which: &str,
) -> Result<WordEmbedding, CliError> {
    let positions = if let Some(images) = arg.strip_prefix("e:") {
        let image = parse_positions(images)?;
        if image.len() != base.algebra.size() {
            return Err(CliError::Usage(format!(
                "--{which} expects {} element images, got {}",
                base.algebra.size(),
                image.len()
            )));
        }
        if let Some(bad) = image.iter().find(|&&r| r >= side.algebra.size()) {
            return Err(CliError::Usage(format!(
                "--{which} image rank {bad} is outside the target of size {}",
                side.algebra.size()
            )));
        }
        let map = ElementMap::new(base.algebra.size(), side.algebra.size(), image);
        witness_of_embedding(&base.algebra, &side.algebra, &map).ok_or_else(|| {
            CliError::Usage(format!("--{which} element map is not an embedding of the base"))
        })?
    } else {
        parse_positions(arg)?
    };
    WordEmbedding::new(base.word.clone(), side.word.clone(), positions)
        .map_err(|e| CliError::Usage(format!("--{which}: {e}")))
}

fn build_span(args: &SpanArgs) -> Result<Span, CliError> {
    let mut stdin_used = false;
    let base = resolve_side(&args.base, &mut stdin_used)?;
    let left = resolve_side(&args.left, &mut stdin_used)?;
    let right = resolve_side(&args.right, &mut stdin_used)?;
    let f = resolve_witness(&args.f, &base, &left, "f")?;
    let g = resolve_witness(&args.g, &base, &right, "g")?;
    Span::new(f, g).map_err(|e| CliError::Usage(e.to_string()))
}

fn amalgam_outcome(span: &Span, am: &Amalgam, flag: &str) -> Outcome {
    let strong = verify_amalgam(span, am).strong;
    let mut json = json!({
        "result": am.result().to_string(),
        "left_positions": am.j1.positions.clone(),
        "right_positions": am.j2.positions.clone(),
        "strong": strong,
    });
    json[flag] = Value::Bool(true);
    let text = format!(
        "{}\n{}\n{}\nstrong: {}",
        am.result(),
        labeled("left", &am.j1.positions),
        labeled("right", &am.j2.positions),
        if strong { "yes" } else { "no" },
    );
    Outcome { code: 0, text: Some(text), json }
}

fn labeled(label: &str, positions: &[usize]) -> String {
    if positions.is_empty() {
        format!("{label}:")
    } else {
        format!("{label}: {}", join_positions(positions))
    }
}

fn join_positions(positions: &[usize]) -> String {
    positions.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn yes_no(yes: bool, json: Value) -> Outcome {
    Outcome {
        code: u8::from(!yes),
        text: Some(if yes { "yes" } else { "no" }.into()),
        json,
    }
}

fn rows_of(m: &FinOrdMonoid) -> Vec<Vec<usize>> {
    let n = m.size();
    (0..n).map(|a| m.table()[a * n..(a + 1) * n].to_vec()).collect()
}

fn read_algebra(arg: &str) -> Result<FinOrdMonoid, CliError> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read `{arg}`: {e}")))?
    };
    FinOrdMonoid::from_text(&text).map_err(|e| CliError::Usage(format!("invalid algebra: {e}")))
}

fn parse_word(arg: &str) -> Result<SumWord, CliError> {
    arg.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

fn parse_words(args: &[String]) -> Result<Vec<SumWord>, CliError> {
    args.iter().map(|a| parse_word(a)).collect()
}
