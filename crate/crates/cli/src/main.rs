//! Command-line front end: word arithmetic, double-coset membership,
//! witness construction, certificate verification, and graph file tooling.
//!
//! Exit codes: 0 success (including a `false` membership answer), 2 usage or
//! format errors, 3 when `separate`/`hall` is asked to separate a member,
//! 4 when `verify` rejects a certificate.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stallings::{
    complete, hall_witness, member, parse_word_list, separability_witness, verify_certificate,
    Alphabet, Certificate, Error, LabeledGraph, Subgroup, Word,
};

#[derive(Parser)]
#[command(name = "stallings", version, about = "Subgroup graphs for free groups: membership in double cosets HgK and finite-index separability certificates", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word and print it
    Reduce {
        /// Alphabet rank (inferred from the word when omitted)
        #[arg(long)]
        rank: Option<u32>,
        word: String,
    },
    /// Decide whether f belongs to the double coset H·g·K
    Member {
        #[arg(long)]
        rank: Option<u32>,
        /// Generators of H, comma-separated
        #[arg(short = 'H')]
        h: String,
        #[arg(short = 'g')]
        g: String,
        /// Generators of K, comma-separated
        #[arg(short = 'K')]
        k: String,
        #[arg(short = 'f')]
        f: String,
    },
    /// Write a finite-index cover containing H that excludes f
    Hall {
        #[arg(long)]
        rank: Option<u32>,
        #[arg(short = 'H')]
        h: String,
        #[arg(short = 'f')]
        f: String,
        /// Output file (cover JSON)
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Write a certificate that f lies outside H·g·K
    Separate {
        #[arg(long)]
        rank: Option<u32>,
        #[arg(short = 'H')]
        h: String,
        #[arg(short = 'g')]
        g: String,
        #[arg(short = 'K')]
        k: String,
        #[arg(short = 'f')]
        f: String,
        /// Output file (certificate JSON)
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Check a certificate file and print VALID or INVALID
    Verify { file: PathBuf },
    /// Print the subgroup index of a cover (its vertex count)
    Index { file: PathBuf },
    /// Print a free basis of the intersection of two subgroups
    Intersect {
        #[arg(long)]
        rank: Option<u32>,
        /// Generators of the first subgroup, comma-separated
        #[arg(short = 'A')]
        a: String,
        /// Generators of the second subgroup, comma-separated
        #[arg(short = 'B')]
        b: String,
    },
    /// Print a free basis of the subgroup a graph file recognizes
    Basis { file: PathBuf },
    /// Complete a folded graph file to a cover on the same vertices
    Complete {
        file: PathBuf,
        /// Output file (completion report JSON)
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Print a DOT rendering of a graph file
    Dot { file: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::MemberAlready | Error::IsMember => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Reduce { rank, word } => {
            let alphabet = resolve_rank(rank, &[&word])?;
            println!("{}", Word::parse(&word, alphabet)?);
        }
        Command::Member { rank, h, g, k, f } => {
            let alphabet = resolve_rank(rank, &[&h, &g, &k, &f])?;
            let (h, g, k, f) = parse_instance(alphabet, &h, &g, &k, &f)?;
            println!("{}", member(&h, &g, &k, &f));
        }
        Command::Hall { rank, h, f, out } => {
            let alphabet = resolve_rank(rank, &[&h, &f])?;
            let h = Subgroup::new(alphabet, parse_word_list(&h, alphabet)?);
            let f = Word::parse(&f, alphabet)?;
            let cover = hall_witness(&h, &f)?;
            write_output(&out, &cover.graph().to_json_string())?;
        }
        Command::Separate {
            rank,
            h,
            g,
            k,
            f,
            out,
        } => {
            let alphabet = resolve_rank(rank, &[&h, &g, &k, &f])?;
            let (h, g, k, f) = parse_instance(alphabet, &h, &g, &k, &f)?;
            let certificate = separability_witness(&h, &g, &k, &f)?;
            let mut bytes = certificate.encode();
            bytes.push(b'\n');
            fs::write(&out, bytes)
                .map_err(|e| usage_error(format!("cannot write {}: {e}", out.display())))?;
        }
        Command::Verify { file } => {
            let bytes = read_file(&file)?;
            let certificate = Certificate::decode(&bytes)?;
            if verify_certificate(&certificate)? {
                println!("VALID");
            } else {
                println!("INVALID");
                return Ok(ExitCode::from(4));
            }
        }
        Command::Index { file } => {
            let cover = load_cover(&file)?;
            println!("{}", cover.vertex_count());
        }
        Command::Intersect { rank, a, b } => {
            let alphabet = resolve_rank(rank, &[&a, &b])?;
            let a = Subgroup::new(alphabet, parse_word_list(&a, alphabet)?);
            let b = Subgroup::new(alphabet, parse_word_list(&b, alphabet)?);
            let product = a.core().pullback(b.core())?;
            let product = product.trimmed(&Default::default());
            print_basis(&product)?;
        }
        Command::Basis { file } => {
            let graph = load_graph(&file)?;
            print_basis(&graph)?;
        }
        Command::Complete { file, out } => {
            let graph = load_graph(&file)?;
            let report = complete(&graph)?;
            write_output(&out, &report.to_json_string())?;
        }
        Command::Dot { file } => {
            let graph = load_graph(&file)?;
            print!("{}", stallings::dot::to_dot(&graph));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Largest letter index mentioned by any argument; explicit `--rank` must
/// cover every mentioned letter (parsing enforces that).
fn resolve_rank(flag: Option<u32>, args: &[&str]) -> Result<Alphabet, Failure> {
    if let Some(rank) = flag {
        if !(1..=26).contains(&rank) {
            return Err(usage_error(format!("--rank {rank} outside 1..=26")));
        }
        return Ok(Alphabet::new(rank));
    }
    let inferred = args
        .iter()
        .flat_map(|s| s.chars())
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_lowercase() as u32 - 'a' as u32 + 1)
        .max()
        .unwrap_or(1);
    Ok(Alphabet::new(inferred))
}

fn parse_instance(
    alphabet: Alphabet,
    h: &str,
    g: &str,
    k: &str,
    f: &str,
) -> Result<(Subgroup, Word, Subgroup, Word), Failure> {
    Ok((
        Subgroup::new(alphabet, parse_word_list(h, alphabet)?),
        Word::parse(g, alphabet)?,
        Subgroup::new(alphabet, parse_word_list(k, alphabet)?),
        Word::parse(f, alphabet)?,
    ))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage_error(format!("cannot read {}: {e}", path.display())))
}

/// Accepts a graph JSON file, or any JSON object carrying a `"cover"`
/// field (completion reports, certificates).
fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    #[derive(serde::Deserialize)]
    struct Embedded {
        cover: LabeledGraph,
    }
    let text = String::from_utf8(read_file(path)?)
        .map_err(|_| usage_error(format!("{} is not UTF-8", path.display())))?;
    match LabeledGraph::from_json_str(&text) {
        Ok(graph) => Ok(graph),
        Err(direct) => match serde_json::from_str::<Embedded>(&text) {
            Ok(embedded) => Ok(embedded.cover),
            Err(_) => Err(direct.into()),
        },
    }
}

fn load_cover(path: &Path) -> Result<LabeledGraph, Failure> {
    let graph = load_graph(path)?;
    if !graph.is_folded() || !graph.is_complete() {
        return Err(usage_error("graph is not a cover (incomplete)"));
    }
    Ok(graph)
}

fn print_basis(graph: &LabeledGraph) -> Result<(), Failure> {
    let tree = graph.spanning_tree(graph.basepoint(), &Default::default())?;
    for word in graph.basis(&tree) {
        println!("{word}");
    }
    Ok(())
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n"))
        .map_err(|e| usage_error(format!("cannot write {}: {e}", path.display())))
}
