use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crystal_core::export::{crystal_json, tensor_json, to_dot, weight_table};
use crystal_core::levi::{branch, d_gl_check, embeddings_shadow_check, lambda_sets, lambda_tilde, LambdaFilter};
use crystal_core::oracle::{branch_chars, freudenthal, is_weight, klimyk, weyl_dim};
use crystal_core::properties::{run_properties, PropertyConfig};
use crystal_core::root_datum::{parse_index_set, DatumSpec};
use crystal_core::tensor::closed_family_certificate;
use crystal_core::worked_examples::run_examples;
use crystal_core::{build_crystal, decompose, tensor, CrystalGraph, Error, LatticeQuotient, Report, RootDatum, Weight};

#[derive(Parser)]
#[command(name = "crystals", version, about = "Highest-weight crystals, tensor products and Levi branching")]
struct Cli {
    /// Upper bound on the number of crystal elements generated
    #[arg(long, global = true, env = "CRYSTALS_MAX_ELEMENTS", default_value_t = crystal_core::DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build B(λ) and print it
    Crystal {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also run the normal crystal axiom check
        #[arg(long)]
        check: bool,
    },
    /// Tensor product B(λ₁) ⊗ B(λ₂)
    Tensor {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw1: String,
        #[arg(long)]
        hw2: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Print the decomposition into highest-weight components instead
        #[arg(long)]
        decompose: bool,
        /// Check the retraction onto B(λ₁+λ₂) and its embedding
        #[arg(long)]
        certify: bool,
    },
    /// Restriction to the Levi subgroup on a subset of simple roots
    Branch {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
        /// 1-based simple-root indices, e.g. 1,3 (empty for the torus)
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long)]
        mu: Option<String>,
        /// Print μ + Σ_{i∈I_L} n_i α_i (needs --mu)
        #[arg(long)]
        lambda_tilde: bool,
        /// Print the L-highest weights, filtered by --mu or --theta
        #[arg(long)]
        sets: bool,
        /// Keep ν in the class of this weight modulo the Levi root lattice
        #[arg(long)]
        theta: Option<String>,
        /// Weight-space bijection check (needs --mu)
        #[arg(long)]
        d_gl: bool,
        /// Inclusion check for the Levi weight sets (needs --mu)
        #[arg(long)]
        shadow: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Character-formula computations
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Run check suites
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum OracleQuery {
    Dim {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
    },
    Char {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    Tensor {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw1: String,
        #[arg(long)]
        hw2: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    Branch {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
        #[arg(long, default_value = "")]
        levi: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    IsWeight {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        hw: String,
        #[arg(long)]
        mu: String,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// The worked examples
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Seeded randomized invariants
    Properties {
        #[arg(long, default_value_t = 4)]
        max_height: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Args)]
struct DatumArgs {
    /// Named datum (A2, G2, GL3, PGL3, GL2xGL2, …), inline JSON, or a JSON file
    #[arg(long)]
    datum: String,
    /// Read weights as pairings with the simple coroots
    #[arg(long)]
    fundamental: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Input {
    rd: Arc<RootDatum>,
    fundamental: bool,
}

impl Input {
    fn new(args: &DatumArgs) -> Result<Input, Failure> {
        let text = args.datum.trim();
        let rd = if text.starts_with('{') {
            from_json(text)?
        } else if std::path::Path::new(text).is_file() {
            let body = std::fs::read_to_string(text).map_err(|e| Failure::Usage(format!("{text}: {e}")))?;
            from_json(&body)?
        } else {
            RootDatum::parse(text)?
        };
        Ok(Input { rd: Arc::new(rd), fundamental: args.fundamental })
    }

    fn weight(&self, text: &str) -> Result<Weight, Failure> {
        let raw = Weight::parse(text)?;
        if self.fundamental {
            if raw.len() != self.rd.num_simple() {
                return Err(Error::RankMismatch { expected: self.rd.num_simple(), found: raw.len() }.into());
            }
            Ok(self.rd.weight_from_pairings(raw.coords())?)
        } else {
            self.rd.check_weight(&raw)?;
            Ok(raw)
        }
    }

    fn levi(&self, text: &str) -> Result<Vec<usize>, Failure> {
        let levi = parse_index_set(text)?;
        self.rd.check_indices(&levi)?;
        Ok(levi)
    }
}

fn from_json(text: &str) -> Result<RootDatum, Failure> {
    let spec: DatumSpec = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("datum JSON: {e}")))?;
    Ok(RootDatum::from_spec(&spec)?)
}

fn plain(w: &Weight) -> String {
    w.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn print_multiset(m: &BTreeMap<Weight, u64>, format: Format, key: &str) {
    if format == Format::Json {
        let rows: Vec<Value> = m.iter().map(|(w, n)| json!({key: w, "mult": n})).collect();
        print_json(&rows);
    } else {
        for (w, n) in m {
            println!("{w}\t{n}");
        }
    }
}

fn finish_report(report: &Report, format: Format) -> Outcome {
    if format == Format::Json {
        print_json(report);
    } else {
        print!("{report}");
        for (k, v) in &report.details {
            println!("  {k}: {v}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Outcome {
    let max = cli.max_elements;
    match cli.command {
        Command::Crystal { datum, hw, format, check } => {
            let input = Input::new(&datum)?;
            let c = build_crystal(&input.rd, &input.weight(&hw)?, max)?;
            match format {
                Format::Json => print_json(&crystal_json(&c)),
                Format::Dot => print!("{}", to_dot(&c, input.rd.name())),
                Format::Table => print!("{}", weight_table(&c)),
            }
            if check {
                let report = crystal_core::check_normal_crystal(&c);
                eprint!("{report}");
                if !report.passed() {
                    return Err(Failure::Check);
                }
            }
            Ok(())
        }
        Command::Tensor { datum, hw1, hw2, format, decompose: dec, certify } => {
            let input = Input::new(&datum)?;
            let (a, b) = (input.weight(&hw1)?, input.weight(&hw2)?);
            if certify {
                let cert = closed_family_certificate(&input.rd, &a, &b, max)?;
                return finish_report(&cert.report, format);
            }
            let ca = build_crystal(&input.rd, &a, max)?;
            let cb = build_crystal(&input.rd, &b, max)?;
            if ca.len().saturating_mul(cb.len()) > max {
                return Err(Error::GuardExceeded { lambda: &a + &b, limit: max }.into());
            }
            let t = tensor(&ca, &cb)?;
            if dec {
                print_multiset(&decompose(&t, &input.rd.full_index_set()), format, "nu");
                return Ok(());
            }
            match format {
                Format::Json => print_json(&tensor_json(&t)),
                Format::Dot => print!("{}", to_dot(&t, input.rd.name())),
                Format::Table => print!("{}", weight_table(&t)),
            }
            Ok(())
        }
        Command::Branch { datum, hw, levi, mu, lambda_tilde: tilde, sets, theta, d_gl, shadow, format } => {
            let input = Input::new(&datum)?;
            let lambda = input.weight(&hw)?;
            let levi = input.levi(&levi)?;
            let mu = mu.map(|m| input.weight(&m)).transpose()?;
            let need_mu = || mu.clone().ok_or_else(|| Failure::Usage("this mode needs --mu".into()));
            if tilde {
                let t = lambda_tilde(&input.rd, &lambda, &need_mu()?, &levi)?;
                if format == Format::Json {
                    print_json(&t);
                } else {
                    println!("{}", plain(&t));
                }
                return Ok(());
            }
            if d_gl {
                return finish_report(&d_gl_check(&input.rd, &lambda, &need_mu()?, &levi, max)?, format);
            }
            if shadow {
                return finish_report(&embeddings_shadow_check(&input.rd, &lambda, &need_mu()?, &levi, max)?, format);
            }
            if sets || theta.is_some() {
                let filter = match (&mu, theta) {
                    (Some(_), Some(_)) => return Err(Failure::Usage("--mu and --theta are exclusive".into())),
                    (Some(m), None) => LambdaFilter::Mu(m.clone()),
                    (None, Some(t)) => LambdaFilter::Theta(LatticeQuotient::new(&input.rd, &levi)?.class_of(&input.weight(&t)?)),
                    (None, None) => LambdaFilter::None,
                };
                let list = lambda_sets(&input.rd, &lambda, &levi, &filter, max)?;
                if format == Format::Json {
                    print_json(&list);
                } else {
                    for nu in list {
                        println!("{nu}");
                    }
                }
                return Ok(());
            }
            let table = branch(&input.rd, &lambda, &levi, max)?;
            if format == Format::Json {
                print_json(&table);
            } else {
                print_multiset(&table.table, format, "nu");
            }
            Ok(())
        }
        Command::Oracle { query } => run_oracle(query),
        Command::Verify { suite: Suite::Examples { format } } => {
            let report = run_examples();
            if format == Format::Json {
                print_json(&report);
            } else {
                print!("{}", report.table());
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Verify { suite: Suite::Properties { max_height, seed, samples } } => {
            let report = run_properties(&PropertyConfig { max_height, seed, samples })?;
            print_json(&report);
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn run_oracle(query: OracleQuery) -> Outcome {
    match query {
        OracleQuery::Dim { datum, hw } => {
            let input = Input::new(&datum)?;
            println!("{}", weyl_dim(&input.rd, &input.weight(&hw)?)?);
        }
        OracleQuery::Char { datum, hw, format } => {
            let input = Input::new(&datum)?;
            let table = freudenthal(&input.rd, &input.weight(&hw)?)?;
            if format == Format::Json {
                print_json(&table);
            } else {
                print_multiset(&table.mults, format, "nu");
            }
        }
        OracleQuery::Tensor { datum, hw1, hw2, format } => {
            let input = Input::new(&datum)?;
            let dec = klimyk(&input.rd, &input.weight(&hw1)?, &input.weight(&hw2)?)?;
            print_multiset(&dec, format, "nu");
        }
        OracleQuery::Branch { datum, hw, levi, format } => {
            let input = Input::new(&datum)?;
            let levi = input.levi(&levi)?;
            let table = branch_chars(&input.rd, &input.weight(&hw)?, &levi)?;
            if format == Format::Json {
                print_json(&table);
            } else {
                print_multiset(&table.table, format, "nu");
            }
        }
        OracleQuery::IsWeight { datum, hw, mu } => {
            let input = Input::new(&datum)?;
            println!("{}", is_weight(&input.rd, &input.weight(&hw)?, &input.weight(&mu)?)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
