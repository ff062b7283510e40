//! Command-line front end: classify, run and calculate number programs,
//! evaluate schemes, build generators and walk the Snark enumeration.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arbatation::arbator::{arbate, compose_unary, CalcResult};
use arbatation::machine::{format_trace, run, run_traced, Budget, ExceededKind, RunOutcome};
use arbatation::numerals::{convert_dec_trig, convert_trig_dec, Nat, Numeral, RenderMode, TrigNumeral};
use arbatation::schemes::{evaluate, parse_pattern, Binding, Constants};
use arbatation::snark::{enumerate_from, snark};
use arbatation::stdlib::{builtin_corpus, gen_hicg, gen_hxpg, load_corpus, pair_decode, pair_encode, verify_corpus};
use arbatation::syntax::{classify_number, parse_program, program_metrics, Classification, FieldId};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "arbatation", version, about = "Number strings as loop programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Step limit.
    #[arg(long, default_value_t = Budget::DEFAULT_STEPS)]
    budget: u64,
    /// Largest value a field may hold, in bits.
    #[arg(long, default_value_t = Budget::DEFAULT_VALUE_BITS)]
    max_bits: u64,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget::new(self.budget, self.max_bits)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sort a numeral into herbum, primitive or complex.
    Classify { numeral: String },
    /// Run any arbor-number on the machine.
    Run {
        program: String,
        inputs: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Print one row per counted action.
        #[arg(long)]
        trace: bool,
        /// Fields shown in the trace, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        watch: Vec<String>,
    },
    /// Calculator value: 0 for anything that is not primitive.
    Arbate {
        program: String,
        inputs: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Evaluate a term or scheme.
    Eval {
        pattern: String,
        /// Variable binding such as N1=5.
        #[arg(long = "bind", value_name = "Nk=v")]
        binds: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Size and depth of a program.
    Metrics { program: String },
    /// Generator programs by degree.
    Gen {
        family: Family,
        degree: u64,
        #[arg(long, default_value = "braces-comma")]
        render: String,
    },
    /// Program computing outer(inner(x)).
    Compose { outer: String, inner: String },
    Pair { j: String, k: String },
    Unpair { n: String },
    /// Convert between decimal and base-35 numerals.
    Convert {
        numeral: String,
        #[arg(long)]
        to: Base,
    },
    Snark {
        n: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Base-35 strings in index order with their unary-scheme flag.
    Enum {
        #[arg(long, default_value_t = 1000)]
        limit: u64,
        #[arg(long, default_value = "0")]
        start: String,
        #[arg(long)]
        schemes_only: bool,
    },
    /// Corpus tools.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Check every entry against its oracle.
    Verify {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        unary_max: u64,
        #[arg(long, default_value_t = 12)]
        binary_max: u64,
        /// Step limit per run; unlimited when absent.
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hxpg,
    Hicg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Trig,
    Dec,
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn exceeded(kind: ExceededKind) -> Failure {
    Failure { code: EXIT_BUDGET, message: format!("budget exceeded ({kind})") }
}

fn numeral(text: &str) -> Result<Numeral, Failure> {
    Numeral::parse(text).map_err(|e| invalid(format!("{text:?}: {e}")))
}

fn nat(text: &str) -> Result<Nat, Failure> {
    numeral(text).map(|n| n.to_nat())
}

fn nats(texts: &[String]) -> Result<Vec<Nat>, Failure> {
    texts.iter().map(|t| nat(t)).collect()
}

fn calc(result: CalcResult) -> Result<String, Failure> {
    match result {
        CalcResult::Value(v) => Ok(v.to_string()),
        CalcResult::BudgetExceeded(k) => Err(exceeded(k)),
    }
}

fn parse_binding(text: &str) -> Result<(u32, Nat), Failure> {
    let bad = || invalid(format!("bad binding {text:?}, expected Nk=v"));
    let (var, value) = text.split_once('=').ok_or_else(bad)?;
    let k: u32 = var.strip_prefix('N').and_then(|k| k.parse().ok()).filter(|k| (1..=99).contains(k)).ok_or_else(bad)?;
    Ok((k, nat(value)?))
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    let mut say = |s: &str| writeln!(out, "{s}").map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() });
    match command {
        Command::Classify { numeral: text } => {
            let class = classify_number(&numeral(&text)?);
            match &class {
                Classification::PrimitiveArbor => say("primitive"),
                Classification::Herbum(r) => say(&format!("herbum\t{r}")),
                Classification::ComplexArbor(why) => say(&format!("complex\t{why}")),
            }
        }
        Command::Run { program, inputs, budget, trace, watch } => {
            let n = numeral(&program)?;
            let tree = parse_program(&n).map_err(|r| invalid(format!("herbum ({r}): the computer never halts")))?;
            let xs = nats(&inputs)?;
            let outcome = if trace {
                let fields = watch
                    .iter()
                    .map(|f| FieldId::parse(f).ok_or_else(|| invalid(format!("bad field {f:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let (rows, outcome) = run_traced(&tree, &xs, budget.budget(), &fields);
                say(format_trace(&rows, &fields).trim_end())?;
                outcome
            } else {
                run(&tree, &xs, budget.budget())
            };
            match outcome {
                RunOutcome::Value { value, steps } => say(&format!("{value}\t{steps}")),
                RunOutcome::BudgetExceeded { kind, snapshot } => Err(Failure {
                    code: EXIT_BUDGET,
                    message: format!("budget exceeded ({kind}) after {} steps", snapshot.steps),
                }),
            }
        }
        Command::Arbate { program, inputs, budget } => {
            say(&calc(arbate(&numeral(&program)?, &nats(&inputs)?, budget.budget()))?)
        }
        Command::Eval { pattern, binds, budget } => {
            let constants = Constants::from_corpus(&builtin_corpus());
            let p = parse_pattern(&pattern, &constants).map_err(|e| invalid(e.to_string()))?;
            let binding: Binding = binds.iter().map(|b| parse_binding(b)).collect::<Result<_, _>>()?;
            let result = evaluate(&p, &binding, budget.budget()).map_err(|e| invalid(e.to_string()))?;
            say(&calc(result)?)
        }
        Command::Metrics { program } => {
            let tree = parse_program(&numeral(&program)?).map_err(|r| invalid(format!("herbum: {r}")))?;
            let m = program_metrics(&tree);
            say(&format!("size\t{}\ndepth\t{}", m.size, m.depth))
        }
        Command::Gen { family, degree, render } => {
            let mode: RenderMode = render.parse().map_err(invalid)?;
            let p = match family {
                Family::Hxpg => gen_hxpg(degree),
                Family::Hicg => gen_hicg(degree),
            };
            say(&p.render(mode))
        }
        Command::Compose { outer, inner } => {
            let c = compose_unary(&numeral(&outer)?, &numeral(&inner)?).map_err(|e| invalid(e.to_string()))?;
            say(&c.render(RenderMode::BracesComma))
        }
        Command::Pair { j, k } => say(&pair_encode(&nat(&j)?, &nat(&k)?).to_string()),
        Command::Unpair { n } => {
            let (j, k) = pair_decode(&nat(&n)?);
            say(&format!("{j}\t{k}"))
        }
        Command::Convert { numeral: text, to } => match to {
            Base::Trig => say(convert_dec_trig(&numeral(&text)?).as_str()),
            Base::Dec => {
                let t = TrigNumeral::parse(&text).map_err(|e| invalid(format!("{text:?}: {e}")))?;
                say(convert_trig_dec(&t).digits())
            }
        },
        Command::Snark { n, budget } => {
            let v = snark(&nat(&n)?, budget.budget()).map_err(exceeded)?;
            say(&v.to_string())
        }
        Command::Enum { limit, start, schemes_only } => {
            let recs = enumerate_from(&nat(&start)?).take(usize::try_from(limit).unwrap_or(usize::MAX));
            for r in recs.filter(|r| r.is_unary_scheme || !schemes_only) {
                say(&format!("{}\t{}\t{}", r.index, r.trig, u8::from(r.is_unary_scheme)))?;
            }
            Ok(())
        }
        Command::Corpus { command: CorpusCommand::Verify { file, unary_max, binary_max, budget } } => {
            let corpus = match file {
                Some(path) => load_corpus(&path).map_err(|e| invalid(e.to_string()))?,
                None => builtin_corpus(),
            };
            let budget = Budget { max_steps: budget, ..Budget::default() };
            let report = verify_corpus(&corpus, unary_max, binary_max, budget);
            for e in &report.entries {
                say(&e.to_string())?;
            }
            let failed = report.failures().count();
            if failed > 0 {
                return Err(invalid(format!("{failed} of {} entries failed", report.entries.len())));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = dispatch(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
