//! `bsmonoid` command-line front end.
//!
//! Exit codes: 0 done and every verdict holds, 1 a violation or mismatch was
//! found, 2 usage or parse error, 3 capacity error.

use std::path::PathBuf;
use std::process::ExitCode;

use bsmonoid::element::{self, DEFAULT_MAX_B};
use bsmonoid::search::{self, ScanReport, SearchSpec};
use bsmonoid::structure;
use bsmonoid::theorems::{self, BoundVerdict, TheoremId};
use bsmonoid::{intset, Error, GroupParams, IntSet, MonoidSet};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bsmonoid",
    version,
    about = "Exact arithmetic in BS⁺(1,n), sums of dilates and bound verification"
)]
struct Cli {
    /// Base n of BS(1,n) [default: 3].
    #[arg(short = 'n', long = "base", global = true)]
    base: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Human)]
    output: Output,
    /// Largest b-exponent accepted in monoid literals and searched by scans.
    #[arg(long = "max-b", global = true)]
    max_b: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product of two elements, e.g. `mul "b^1*a^2" "b^2*a^5"`.
    Mul { left: String, right: String },
    /// S² for a monoid set literal `{b^0*a^0, b^1*a^0}`.
    Square { set: String },
    /// r·A + s·B.
    DilateSum {
        #[arg(allow_negative_numbers = true)]
        r: i64,
        a: String,
        #[arg(allow_negative_numbers = true)]
        s: i64,
        b: String,
    },
    /// Length, gcd, holes, normal form, residue classes and minimal progression.
    Analyze {
        set: String,
        /// Modulus for c_m(A); repeatable.
        #[arg(long = "mod")]
        moduli: Vec<u64>,
    },
    /// Extremal class of a set with at least three elements.
    Classify { set: String },
    /// Evaluate one statement on one input.
    Verify {
        #[arg(long)]
        theorem: String,
        /// Input literal; pass twice for the two-set bound.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        /// Dilation factor for cor1.6 (defaults to n).
        #[arg(long)]
        r: Option<i64>,
    },
    /// Exhaustive scan.
    Scan {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        spec: SpecArgs,
        /// Report every A with |A + n·A| = 4|A| - 4 instead.
        #[arg(long)]
        equality: bool,
    },
    /// Seeded random search.
    Hunt {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// TOML or JSON file with SearchSpec fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Largest value W.
    #[arg(long, allow_negative_numbers = true)]
    window: Option<i64>,
    /// Smallest value.
    #[arg(long = "value-min", allow_negative_numbers = true)]
    value_min: Option<i64>,
    /// Size range `a..b` (inclusive) or a single size.
    #[arg(long, value_parser = parse_k_range)]
    k: Option<(usize, usize)>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "max-slices")]
    max_slices: Option<usize>,
    /// Dilation factors for cor1.6, comma separated.
    #[arg(long, value_delimiter = ',')]
    dilations: Option<Vec<i64>>,
    #[arg(long = "bit-window")]
    bit_window: Option<usize>,
    #[arg(long = "require-zero")]
    require_zero: bool,
    #[arg(long = "require-d1")]
    require_d1: bool,
    #[arg(long)]
    dedup: bool,
    #[arg(long)]
    nonabelian: bool,
    #[arg(long)]
    singletons: bool,
}

fn parse_k_range(text: &str) -> Result<(usize, usize), String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((num(a)?, num(b)?))
        }
        None => {
            let k = num(text)?;
            Ok((k, k))
        }
    }
}

struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type Run = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(e)) => {
            eprintln!("error: {}: {}", e.kind(), e.detail());
            ExitCode::from(match e {
                Error::Capacity(_) => 3,
                _ => 2,
            })
        }
    }
}

impl Cli {
    fn n(&self) -> u32 {
        self.base.unwrap_or(3)
    }
}

fn params(cli: &Cli) -> Result<GroupParams, Error> {
    Ok(GroupParams::new(cli.n())?.with_max_b(cli.max_b.unwrap_or(DEFAULT_MAX_B)))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Mul { left, right } => {
            let p = params(cli)?;
            let (e, f) = (element::parse(left)?, element::parse(right)?);
            p.check(&e)?;
            p.check(&f)?;
            let prod = element::multiply(&e, &f, &p);
            p.check(&prod)?;
            match cli.output {
                Output::Human => println!("{prod}"),
                Output::Json => println!("{}", json(&prod)),
                Output::Csv => println!("m,x\n{},{}", prod.b_exp(), prod.a_exp()),
            }
            Ok(true)
        }
        Command::Square { set } => {
            let s = MonoidSet::parse(set, params(cli)?)?;
            let sq = s.square();
            match cli.output {
                Output::Human => println!("{sq} |.|={}", sq.len()),
                Output::Json => println!(
                    "{}",
                    json(&serde_json::json!({ "set": sq, "size": sq.len() }))
                ),
                Output::Csv => {
                    println!("m,x");
                    for e in sq.elements() {
                        println!("{},{}", e.b_exp(), e.a_exp());
                    }
                }
            }
            Ok(true)
        }
        Command::DilateSum { r, a, s, b } => {
            let (a, b) = (intset::parse(a)?, intset::parse(b)?);
            let out = intset::dilate_sum(*r, &a, *s, &b)?;
            print_set(cli.output, &out);
            Ok(true)
        }
        Command::Analyze { set, moduli } => {
            let a = intset::parse(set)?;
            let report = structure::analyze(&a, moduli)?;
            match cli.output {
                Output::Human => println!("{report}"),
                Output::Json => println!("{}", json(&report)),
                Output::Csv => {
                    let mods: Vec<String> =
                        report.classes.keys().map(|m| format!("c{m}")).collect();
                    let vals: Vec<String> =
                        report.classes.values().map(|c| c.to_string()).collect();
                    println!(
                        "size,length,d,holes,normalized_length,min_ap_size{}",
                        prefixed(&mods)
                    );
                    println!(
                        "{},{},{},{},{},{}{}",
                        report.size,
                        report.length,
                        report.gcd_diffs,
                        report.holes,
                        report.normalized_length,
                        report.min_ap_size,
                        prefixed(&vals)
                    );
                }
            }
            Ok(true)
        }
        Command::Classify { set } => {
            let a = intset::parse(set)?;
            let class = structure::classify_extremal(&a)?;
            match cli.output {
                Output::Human => match &class.witness_affine {
                    Some((u, v)) => println!("{} via x ↦ {u}·x + {v}", class.tag),
                    None => println!("{}", class.tag),
                },
                Output::Json => println!("{}", json(&class)),
                Output::Csv => {
                    let (u, v) = class
                        .witness_affine
                        .as_ref()
                        .map_or((String::new(), String::new()), |(u, v)| {
                            (u.to_string(), v.to_string())
                        });
                    println!("tag,u,v\n{},{u},{v}", class.tag);
                }
            }
            Ok(true)
        }
        Command::Verify { theorem, sets, r } => verify(cli, theorem, sets, *r),
        Command::Scan {
            theorem,
            spec,
            equality,
        } => {
            let spec = build_spec(cli, spec)?;
            let report = if *equality {
                search::find_equality_sets(spec.n, &spec)?
            } else {
                search::scan_bound(parse_theorem(theorem)?, &spec)?
            };
            print_report(cli.output, &report);
            Ok(report.is_clean())
        }
        Command::Hunt {
            theorem,
            spec,
            budget,
        } => {
            let spec = build_spec(cli, spec)?;
            let report = search::hunt(parse_theorem(theorem)?, &spec, *budget)?;
            print_report(cli.output, &report);
            Ok(report.is_clean())
        }
    }
}

fn prefixed(items: &[String]) -> String {
    items.iter().map(|s| format!(",{s}")).collect()
}

fn print_set(output: Output, set: &IntSet) {
    match output {
        Output::Human => println!("{set} |.|={}", set.len()),
        Output::Json => println!(
            "{}",
            json(&serde_json::json!({ "set": set, "size": set.len() }))
        ),
        Output::Csv => {
            println!("x");
            for x in set.iter() {
                println!("{x}");
            }
        }
    }
}

fn parse_theorem(name: &str) -> Result<TheoremId, Error> {
    name.parse()
}

fn one_set(sets: &[String], id: &str) -> Result<String, Error> {
    match sets {
        [s] => Ok(s.clone()),
        _ => Err(Error::Config(format!(
            "{id} takes exactly one --set, got {}",
            sets.len()
        ))),
    }
}

fn verify(cli: &Cli, theorem: &str, sets: &[String], r: Option<i64>) -> Run {
    let key = theorem.to_ascii_lowercase().replace(['-', '_', '.'], "");
    let verdicts: Vec<BoundVerdict> = if key == "lss" || key == "thm14" {
        two_sets(sets, theorem)?.to_vec()
    } else {
        let id = parse_theorem(theorem)?;
        match id {
            TheoremId::Lss1 | TheoremId::Lss2 => {
                let [first, second] = two_sets(sets, theorem)?;
                vec![if id == TheoremId::Lss1 { first } else { second }]
            }
            TheoremId::Cor1_6 => {
                let a = intset::parse(&one_set(sets, theorem)?)?;
                vec![theorems::verify_cor1(&a, r.unwrap_or(cli.n() as i64))?]
            }
            TheoremId::Thm1_3 => vec![theorems::verify_thm1(&intset::parse(&one_set(
                sets, theorem,
            )?)?)?],
            TheoremId::Thm1_5 => vec![theorems::verify_thm1_5(&intset::parse(&one_set(
                sets, theorem,
            )?)?)?],
            TheoremId::Bs12Direct | TheoremId::Bs12Inverse => {
                let (d, i) = theorems::verify_bs12(&intset::parse(&one_set(sets, theorem)?)?)?;
                vec![if id == TheoremId::Bs12Direct { d } else { i }]
            }
            TheoremId::Thm3Direct => {
                let s = MonoidSet::parse(&one_set(sets, theorem)?, params(cli)?)?;
                vec![theorems::verify_thm3_direct(&s)]
            }
            TheoremId::Thm3Inverse => {
                let s = MonoidSet::parse(&one_set(sets, theorem)?, params(cli)?)?;
                vec![theorems::verify_thm3_inverse(&s)?]
            }
            lemma => {
                let s = MonoidSet::parse(&one_set(sets, theorem)?, params(cli)?)?;
                vec![theorems::verify_lemma(&s, lemma)]
            }
        }
    };
    match cli.output {
        Output::Human => {
            for v in &verdicts {
                println!("{v}");
            }
        }
        Output::Json => match verdicts.as_slice() {
            [v] => println!("{}", json(v)),
            vs => println!("{}", json(&vs)),
        },
        Output::Csv => print!("{}", theorems::verdicts_to_csv(&verdicts)),
    }
    Ok(!verdicts.iter().any(BoundVerdict::is_violation))
}

fn two_sets(sets: &[String], id: &str) -> Result<[BoundVerdict; 2], Error> {
    let [a, b] = sets else {
        return Err(Error::Config(format!(
            "{id} takes exactly two --set, got {}",
            sets.len()
        )));
    };
    theorems::verify_lss(&intset::parse(a)?, &intset::parse(b)?)
}

fn build_spec(cli: &Cli, args: &SpecArgs) -> Result<SearchSpec, Error> {
    let mut spec = match &args.config {
        Some(path) => SearchSpec::load(path)?,
        None => SearchSpec::default(),
    };
    if let Some(n) = cli.base {
        spec.n = n;
    }
    if let Some(m) = cli.max_b {
        spec.max_b_exponent = m;
    }
    if let Some(w) = args.window {
        spec.window = w;
    }
    if let Some(v) = args.value_min {
        spec.value_min = v;
    }
    if let Some(k) = args.k {
        spec.k_range = k;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    if let Some(m) = args.max_slices {
        spec.max_slices = Some(m);
    }
    if let Some(d) = &args.dilations {
        spec.dilations = d.clone();
    }
    if let Some(b) = args.bit_window {
        spec.bit_window = b;
    }
    let c = &mut spec.constraints;
    c.require_zero |= args.require_zero;
    c.require_d1 |= args.require_d1;
    c.canonical_dedup |= args.dedup;
    c.require_nonabelian |= args.nonabelian;
    c.singleton_slices |= args.singletons;
    spec.validate()?;
    Ok(spec)
}

fn print_report(output: Output, report: &ScanReport) {
    match output {
        Output::Human => print!("{report}"),
        Output::Json => println!("{}", report.to_json()),
        Output::Csv => print!("{}", report.to_csv()),
    }
}
