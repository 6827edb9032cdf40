use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tanglegram_core::enumeration::{
    enumerate_caterpillar_tanglegrams_with_ceiling, enumerate_tanglegrams_with_ceiling,
    DEFAULT_CEILING,
};
use tanglegram_core::reconstruction::{
    oracle_search_with_ceiling, verify_multideck_uniqueness_with_ceiling, DeckVariant,
};
use tanglegram_core::text::{
    format_tanglegram, parse_multideck, write_deck, write_multideck, write_tree_multideck, Item,
    MultideckFile,
};
use tanglegram_core::{enumerate_trees, reconstruct_with_ceiling, Error, Format, Tanglegram, Tree};

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  1  I/O or other failure
  2  usage error
  3  parse error
  4  inconsistent input (no tanglegram or tree has this multideck)
  5  verification failed
  6  ambiguous input (several tanglegrams or trees share this multideck)";

#[derive(Parser)]
#[command(name = "tanglegram", version, about = "Tanglegram decks, enumeration and reconstruction", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Tanglegram line format: `perm` or `labels`.
    #[arg(long, default_value = "perm")]
    format: Format,
}

#[derive(Args)]
struct Sized {
    #[arg(long)]
    size: usize,
    /// Largest size that may be enumerated exhaustively.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite every tree or tanglegram line in canonical form.
    Canon {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Print the deck (distinct cards) of one tanglegram.
    Deck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Print the multideck of one tree or tanglegram.
    Multideck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Recover a tanglegram, or a tree, from a multideck file.
    Reconstruct {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: usize,
    },
    /// List every tanglegram (or tree) of a given size, then the count.
    Enumerate {
        #[command(flatten)]
        sized: Sized,
        #[command(flatten)]
        output: Output,
        /// Only tanglegrams with a caterpillar side.
        #[arg(long)]
        caterpillar_only: bool,
        /// List trees instead of tanglegrams.
        #[arg(long, conflicts_with = "caterpillar_only")]
        trees: bool,
    },
    /// Check whether tanglegrams of a given size are determined by their multidecks.
    Verify {
        #[command(flatten)]
        sized: Sized,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        caterpillar_only: bool,
        /// Compare by `multideck` or by `deck`.
        #[arg(long, default_value = "multideck")]
        deck_variant: DeckVariant,
    },
    /// Reconstruct every caterpillar tanglegram of a size from its multideck,
    /// by case analysis and by exhaustive search, and compare.
    Roundtrip {
        #[command(flatten)]
        sized: Sized,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("expected exactly one {what}, found {found}")]
    Count { what: &'static str, found: usize },
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Count { .. } => 3,
            CliError::Verification(_) => 5,
            CliError::Core(e) => match e {
                Error::Parse { .. } => 3,
                Error::Inconsistent(_)
                | Error::InvalidMultideck(_)
                | Error::NoTreeMatches { .. } => 4,
                Error::Ambiguous { .. } | Error::MultipleTreesMatch { .. } => 6,
                _ => 1,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_input(input: &Input) -> Result<String> {
    match input.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn content(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn single_item(src: &str) -> Result<Item> {
    let lines: Vec<&str> = content(src).collect();
    match lines.as_slice() {
        [line] => Ok(Item::parse(line)?),
        _ => Err(CliError::Count {
            what: "tree or tanglegram line",
            found: lines.len(),
        }),
    }
}

fn format_item(item: &Item, format: Format) -> String {
    match item {
        Item::Tree(t) => t.to_string(),
        Item::Tanglegram(t) => format_tanglegram(t, format),
    }
}

fn run(command: Command) -> Result<String> {
    let mut out = String::new();
    match command {
        Command::Canon { input, output } => {
            for line in content(&read_input(&input)?) {
                out.push_str(&format_item(&Item::parse(line)?, output.format));
                out.push('\n');
            }
        }
        Command::Deck { input, output } => match single_item(&read_input(&input)?)? {
            Item::Tanglegram(t) => out = write_deck(t.size(), &t.deck()?, output.format),
            Item::Tree(t) => {
                let d = t.multideck()?;
                out = format!("n={}\n", t.size());
                for (card, _) in d.iter() {
                    out.push_str(&format!("{card}\n"));
                }
            }
        },
        Command::Multideck { input, output } => match single_item(&read_input(&input)?)? {
            Item::Tanglegram(t) => out = write_multideck(&t.multideck()?, output.format),
            Item::Tree(t) => out = write_tree_multideck(&t.multideck()?),
        },
        Command::Reconstruct {
            input,
            output,
            ceiling,
        } => match parse_multideck(&read_input(&input)?)? {
            MultideckFile::Tanglegrams(d) => {
                let r = reconstruct_with_ceiling(&d, ceiling)?;
                out = format!(
                    "{}\nmethod={}\n",
                    format_tanglegram(&r.tanglegram, output.format),
                    r.method
                );
            }
            MultideckFile::Trees(d) => out = format!("{}\n", Tree::from_multideck(&d)?),
        },
        Command::Enumerate {
            sized,
            output,
            caterpillar_only,
            trees,
        } => {
            let lines: Vec<String> = if trees {
                enumerate_trees(sized.size)?
                    .iter()
                    .map(Tree::to_string)
                    .collect()
            } else {
                let all = if caterpillar_only {
                    enumerate_caterpillar_tanglegrams_with_ceiling(sized.size, sized.ceiling)?
                } else {
                    enumerate_tanglegrams_with_ceiling(sized.size, sized.ceiling)?
                };
                all.iter()
                    .map(|t| format_tanglegram(t, output.format))
                    .collect()
            };
            for l in &lines {
                out.push_str(l);
                out.push('\n');
            }
            out.push_str(&format!("{}\n", lines.len()));
        }
        Command::Verify {
            sized,
            output,
            caterpillar_only,
            deck_variant,
        } => {
            let r = verify_multideck_uniqueness_with_ceiling(
                sized.size,
                caterpillar_only,
                deck_variant,
                sized.ceiling,
            )?;
            out.push_str(&format!(
                "size={} variant={} caterpillar_only={} examined={} classes={} collisions={}\n",
                r.size,
                match r.variant {
                    DeckVariant::Multideck => "multideck",
                    DeckVariant::Deck => "deck",
                },
                r.caterpillar_only,
                r.examined,
                r.classes,
                r.collisions.len()
            ));
            for (i, group) in r.collisions.iter().enumerate() {
                out.push_str(&format!("collision {}:\n", i + 1));
                for t in group {
                    out.push_str(&format!("  {}\n", format_tanglegram(t, output.format)));
                }
            }
            let expect_unique =
                caterpillar_only && deck_variant == DeckVariant::Multideck && sized.size >= 5;
            if expect_unique && !r.is_unique() {
                emit(&out)?;
                return Err(CliError::Verification(format!(
                    "{} caterpillar tanglegram groups of size {} share a multideck",
                    r.collisions.len(),
                    r.size
                )));
            }
        }
        Command::Roundtrip { sized, output } => {
            let all = enumerate_caterpillar_tanglegrams_with_ceiling(sized.size, sized.ceiling)?;
            let show = |t: &Tanglegram| format_tanglegram(t, output.format);
            let mut methods: BTreeMap<String, usize> = BTreeMap::new();
            let mut failures = Vec::new();
            let (mut recovered, mut oracle_recovered) = (0, 0);
            for t in &all {
                let d = t.multideck()?;
                let case =
                    reconstruct_with_ceiling(&d, sized.ceiling).map(|r| (r.tanglegram, r.method));
                let oracle = oracle_search_with_ceiling(&d, sized.ceiling);
                let case_ok = matches!(&case, Ok((got, _)) if got == t);
                let oracle_ok = matches!(&oracle, Ok(got) if got == t);
                recovered += usize::from(case_ok);
                oracle_recovered += usize::from(oracle_ok);
                if let Ok((_, m)) = &case {
                    *methods.entry(m.to_string()).or_default() += 1;
                }
                if !(case_ok && oracle_ok) {
                    let case = match &case {
                        Ok((got, _)) => show(got),
                        Err(e) => e.to_string(),
                    };
                    let oracle = match &oracle {
                        Ok(got) => show(got),
                        Err(e) => e.to_string(),
                    };
                    failures.push(format!(
                        "{}: case analysis {case}; oracle {oracle}",
                        show(t)
                    ));
                }
            }
            out.push_str(&format!(
                "size={} examined={} recovered={recovered} oracle_recovered={oracle_recovered} agree={} failed={}\n",
                sized.size,
                all.len(),
                all.len() - failures.len(),
                failures.len()
            ));
            for (m, c) in &methods {
                out.push_str(&format!("method={m} count={c}\n"));
            }
            for f in &failures {
                out.push_str(&format!("failed {f}\n"));
            }
            if !failures.is_empty() {
                emit(&out)?;
                return Err(CliError::Verification(format!(
                    "{} of {} tanglegrams were not recovered by both methods",
                    failures.len(),
                    all.len()
                )));
            }
        }
    }
    Ok(out)
}

fn emit(s: &str) -> Result<()> {
    let mut stdout = io::stdout().lock();
    stdout.write_all(s.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command).and_then(|s| emit(&s)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
