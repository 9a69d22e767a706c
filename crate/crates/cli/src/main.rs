//! Command-line front end: parse automaton spec files, dispatch the library
//! operations, and emit reports and DOT flow diagrams.
//!
//! Exit codes: 0 on success, 1 on domain failures (irreversible automaton,
//! non-doubly-stochastic matrix, unknown tokens, protocol refusals), 2 on
//! usage, I/O, and parse failures. Every command is deterministic: identical
//! inputs produce byte-identical outputs, and all numbers are rendered
//! exactly (integers and `p/q` rationals).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use revmealy::logic::PartitionLogic;
use revmealy::stochastic::format_rational;
use revmealy::{
    automaton_to_matrix, birkhoff_decompose, partitions_up_to, reversible_embedding,
    state_partition, BlackBoxSystem, Configuration, DoublyStochasticMatrix, MealyAutomaton,
    Partition, StateId, SymbolId,
};

#[derive(Parser)]
#[command(
    name = "revauto",
    version,
    about = "Reversible Mealy automata: permutation matrices, experiments, partition logics, and black-box measurement protocols",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one-to-one reversibility of an automaton spec file.
    Validate { file: String },
    /// Print the automaton's permutation matrix (row = source configuration).
    Matrix { file: String },
    /// Print the order of the automaton's permutation matrix.
    Order { file: String },
    /// Print the fed-back trajectory from a configuration.
    Evolve {
        file: String,
        /// Starting configuration, e.g. "(s1,1)".
        #[arg(long)]
        from: String,
        /// Number of evolution steps.
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Run one input-word experiment from every state.
    Experiment {
        file: String,
        /// Comma-separated input word, e.g. "2,2,2,2".
        #[arg(long)]
        word: String,
    },
    /// Build the partition logic of all words up to a length.
    Logic {
        file: String,
        /// Maximum word length.
        #[arg(long, default_value_t = 1)]
        maxlen: usize,
    },
    /// Emit the configuration flow as a DOT digraph.
    Dot {
        file: String,
        /// Draw the N-step evolution map (default: one step).
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
    /// Decompose a doubly stochastic rational matrix into permutations.
    Birkhoff { file: String },
    /// Embed an arbitrary automaton into a reversible one.
    Embed { file: String },
    /// Couple an inner and an outer automaton and run measurements.
    Blackbox {
        /// Spec file of the measured (inner) automaton.
        #[arg(long)]
        inner: String,
        /// Spec file of the apparatus (outer) automaton.
        #[arg(long)]
        outer: String,
        /// Comma-separated input word fed through the interface.
        #[arg(long)]
        inputs: String,
        /// Append each interface symbol to the classical record.
        #[arg(long)]
        copy: bool,
        /// Copy-and-reverse each measurement, keeping only the outcome.
        #[arg(long)]
        bennett: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<revmealy::ParseError> for Failure {
    fn from(e: revmealy::ParseError) -> Self {
        Failure {
            code: 2,
            message: format!("parse error: {e}"),
        }
    }
}

impl From<revmealy::Error> for Failure {
    fn from(e: revmealy::Error) -> Self {
        use revmealy::Error;
        let code = match e {
            Error::SizeLimit(_) | Error::BadArgument(_) | Error::EmptyWord => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("i/o error: {e}"),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure {
            code: 2,
            message: format!("i/o error: {path}: {e}"),
        })
    }
}

fn load_automaton(path: &str) -> Result<MealyAutomaton, Failure> {
    Ok(MealyAutomaton::parse(&read_input(path)?)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            let a = load_automaton(&file)?;
            match a.validate_reversible() {
                Ok(()) => {
                    println!("reversible");
                    Ok(())
                }
                Err(w) => Err(Failure {
                    code: 1,
                    message: format!("irreversible: {w}"),
                }),
            }
        }
        Command::Matrix { file } => {
            let a = load_automaton(&file)?;
            print!("{}", automaton_to_matrix(&a)?.render_matrix());
            Ok(())
        }
        Command::Order { file } => {
            let a = load_automaton(&file)?;
            println!("{}", automaton_to_matrix(&a)?.order());
            Ok(())
        }
        Command::Evolve { file, from, steps } => {
            let a = load_automaton(&file)?;
            let c0 = a.parse_configuration(&from)?;
            for c in a.run(c0, steps) {
                println!("{}", a.format_configuration(c));
            }
            Ok(())
        }
        Command::Experiment { file, word } => {
            let a = load_automaton(&file)?;
            let symbols = a.parse_word(&word)?;
            let partition = state_partition(&a, &symbols)?;
            let logic =
                PartitionLogic::build(a.state_tokens().to_vec(), std::slice::from_ref(&partition))?;
            println!("word: {word}");
            println!("partition: {}", partition.render(a.state_tokens()));
            println!(
                "class: {} ({} propositions)",
                logic.classification(),
                logic.num_propositions()
            );
            Ok(())
        }
        Command::Logic { file, maxlen } => {
            let a = load_automaton(&file)?;
            let family = partitions_up_to(&a, maxlen)?;
            println!("words: {}", family.len());
            let mut parts: Vec<Partition> = Vec::new();
            for (word, partition) in &family {
                let rendered: Vec<&str> = word.iter().map(|&s| a.symbol_token(s)).collect();
                println!(
                    "  {} -> {}",
                    rendered.join(","),
                    partition.render(a.state_tokens())
                );
                if !parts.contains(partition) {
                    parts.push(partition.clone());
                }
            }
            let logic = PartitionLogic::build(a.state_tokens().to_vec(), &parts)?;
            print!("{}", logic.report());
            Ok(())
        }
        Command::Dot { file, steps } => {
            let a = load_automaton(&file)?;
            let p = automaton_to_matrix(&a)?.pow(steps);
            println!("digraph configuration_flow {{");
            for c in a.configurations() {
                println!("  \"{}\";", a.format_configuration(c));
            }
            for c in a.configurations() {
                let img = a.configuration_at(p.image_of(a.linear_index(c)));
                println!(
                    "  \"{}\" -> \"{}\";",
                    a.format_configuration(c),
                    a.format_configuration(img)
                );
            }
            println!("}}");
            Ok(())
        }
        Command::Birkhoff { file } => {
            let entries = revmealy::parse_rational_matrix(&read_input(&file)?)?;
            let m = DoublyStochasticMatrix::new(entries)?;
            let decomposition = birkhoff_decompose(&m);
            println!("terms: {}", decomposition.terms.len());
            for term in &decomposition.terms {
                let target: Vec<String> =
                    term.perm.target().iter().map(|t| t.to_string()).collect();
                println!("{} [{}]", format_rational(&term.weight), target.join(" "));
            }
            Ok(())
        }
        Command::Embed { file } => {
            let a = load_automaton(&file)?;
            let e = reversible_embedding(&a);
            println!(
                "# reversible embedding: tags={} degree={}",
                e.tag_count(),
                e.automaton().degree()
            );
            print!("{}", e.automaton().to_spec_string());
            println!("# projection:");
            for (embedded, original) in e.projection_pairs(&a) {
                println!("# {embedded} -> {original}");
            }
            Ok(())
        }
        Command::Blackbox {
            inner,
            outer,
            inputs,
            copy,
            bennett,
        } => {
            let inner = load_automaton(&inner)?;
            let outer = load_automaton(&outer)?;
            let word = inner.parse_word(&inputs)?;
            // Both automata start at their first state with the first symbol.
            let start = Configuration {
                state: StateId(0),
                symbol: SymbolId(0),
            };
            let mut sys = BlackBoxSystem::new(inner.clone(), outer, start, start)?;
            for &symbol in &word {
                let token = inner.symbol_token(symbol).to_string();
                if bennett {
                    let before = sys.clone();
                    let (measured, lines) = sys.measure_traced(&token, true)?;
                    lines.iter().for_each(|l| println!("{l}"));
                    let outcome = measured.record().last().map(|o| o.to_string()).unwrap();
                    let (restored, lines) = measured.erase_last(1)?.undo_traced(1)?;
                    lines.iter().for_each(|l| println!("{l}"));
                    println!(
                        "bennett: outcome={outcome} restored={}",
                        if restored == before { "yes" } else { "no" }
                    );
                    sys = restored;
                } else {
                    let (next, lines) = sys.measure_traced(&token, copy)?;
                    lines.iter().for_each(|l| println!("{l}"));
                    sys = next;
                }
            }
            println!(
                "final: inner={} outer={} record=[{}]",
                sys.inner().format_configuration(sys.inner_config()),
                sys.outer().format_configuration(sys.outer_config()),
                sys.record().join(",")
            );
            Ok(())
        }
    }
}
