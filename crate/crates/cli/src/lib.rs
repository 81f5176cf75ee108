//! Command-line front end for the `easyqg` partition calculus.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}", domain_message(.0))]
    Domain(#[from] easyqg::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `Kind: message`, without repeating a kind the message already names.
fn domain_message(e: &easyqg::Error) -> String {
    let text = e.to_string();
    let kind = e.kind();
    match text.strip_prefix(kind).and_then(|r| r.strip_prefix(": ")) {
        Some(rest) => format!("{kind}: {rest}"),
        None => format!("{kind}: {text}"),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "easyqg", version, about = "Exact partition calculus for easy quantum groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Configuration file of key=value lines.
    #[arg(long, global = true, env = "EASYQG_CONFIG")]
    pub config: Option<PathBuf>,
    /// Leg bound for enumeration, closure and verification.
    #[arg(long, global = true)]
    pub max_legs: Option<usize>,
    /// Largest number of tensor entries an operator may touch.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

fn parse_shape(s: &str) -> Result<(usize, usize), String> {
    let (k, l) = s.split_once(',').ok_or("expected k,l")?;
    let k = k.trim().parse().map_err(|_| format!("bad upper count '{k}'"))?;
    let l = l.trim().parse().map_err(|_| format!("bad lower count '{l}'"))?;
    Ok((k, l))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or count the partitions of one shape, optionally in a category.
    Enum {
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        count: bool,
    },
    /// Category membership of a partition.
    Member {
        #[arg(long)]
        category: String,
        partition: String,
    },
    /// Gram matrix of D_k at dimension n.
    Gram {
        #[arg(long)]
        category: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Compute inner products of the vectors T_p instead of the join formula.
        #[arg(long)]
        from_vectors: bool,
    },
    /// Weingarten matrix, the exact inverse of the Gram matrix.
    Weingarten {
        #[arg(long)]
        category: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Haar integral of u_{i1 j1} ... u_{ik jk}.
    Integrate {
        #[arg(long)]
        category: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        i: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        j: Vec<usize>,
    },
    /// Moment of the truncated character at finite n.
    Moments {
        #[arg(long)]
        category: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Number of diagonal entries summed.
        #[arg(long, conflicts_with = "t")]
        m: Option<usize>,
        /// Fraction t in (0,1]; m = floor(t n).
        #[arg(long)]
        t: Option<String>,
    },
    /// Large-n moment: sum of t^b(p) over D_k.
    Asymptotic {
        #[arg(long)]
        category: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        t: String,
    },
    /// Moments of a named law.
    Law {
        /// For example poisson(1/2) or squeezed(s_bessel(3,1)).
        law: String,
        #[arg(long)]
        k: usize,
        /// Add Monte Carlo estimates (squeezed s-Bessel laws with finite s).
        #[arg(long)]
        mc: bool,
    },
    /// Finite-n moments against a law, with a convergence verdict.
    LawCompare {
        #[arg(long)]
        category: String,
        #[arg(long)]
        law: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Balanced-partition counts from their recurrence.
    Recurrence {
        #[arg(long)]
        k: usize,
    },
    /// Bounded closure of generators over a base category.
    Closure {
        /// Generator partition; repeatable.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long)]
        base: Option<String>,
        /// Compare the closure with this category.
        #[arg(long)]
        equals: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Check the category axioms up to the leg bound.
    Axioms {
        #[arg(long)]
        category: String,
    },
    /// Bounded verification of a classification statement.
    Verify {
        /// One of 4.3, 5.2, 6.2, 6.3, 6.4.
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        case: Option<usize>,
        /// Category for 5.2.
        #[arg(long)]
        category: Option<String>,
        /// Sample partition for 6.3; repeatable, defaults to the fixed sample set.
        #[arg(long = "sample")]
        sample: Vec<String>,
        /// Leg bound of the partitions swept by 6.4.
        #[arg(long, default_value_t = 6)]
        sample_legs: usize,
        /// Largest k for 4.3.
        #[arg(long, default_value_t = 2)]
        k_max: usize,
    },
    /// Draw one group element.
    Sample {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
    },
    /// Dimension of the fixed space of the k-th tensor power.
    FixedDim {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Average over every element instead of sampling.
        #[arg(long)]
        exact: bool,
    },
    /// The operator T_p, one of its entries, or an intertwiner test.
    Operator {
        partition: String,
        #[arg(long)]
        n: usize,
        /// Entry delta_p(i, j) given as "i1,i2;j1,j2".
        #[arg(long, conflicts_with = "group")]
        delta: Option<String>,
        /// Test T_p against a sampled element of this group.
        #[arg(long)]
        group: Option<String>,
    },
    /// Partition operations.
    Partition {
        #[command(subcommand)]
        op: PartitionOp,
    },
    /// Apply a capping such as semicircle(1), singleton(2) or doubleton(1,3).
    Cap {
        partition: String,
        #[arg(long)]
        capping: String,
    },
    /// Block sizes occurring in a category up to the leg bound.
    Lambda {
        #[arg(long)]
        category: String,
    },
    /// The noncrossing family matching the noncrossing part of a category.
    Associated {
        #[arg(long)]
        category: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RowArg {
    #[value(alias = "upper")]
    Top,
    #[value(alias = "lower")]
    Bottom,
}

#[derive(Debug, Subcommand)]
pub enum PartitionOp {
    /// Canonical form with explicit shape.
    Parse { partition: String },
    Tensor { left: String, right: String },
    /// Places the second partition below the first.
    Compose { upper: String, lower: String },
    Involute { partition: String },
    /// Moves the extremal leg of a row to the other row.
    Rotate {
        partition: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_enum)]
        row: RowArg,
    },
    Join { left: String, right: String },
    Blocks { partition: String },
    Noncrossing { partition: String },
    Subpartitions { partition: String },
    /// A named partition such as half_commutation or k_cubic(2).
    Special { name: String },
}

/// Library operation and the subcommand that reaches it.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("parse", "partition parse"),
    ("tensor", "partition tensor"),
    ("compose", "partition compose"),
    ("involute", "partition involute"),
    ("rotate", "partition rotate"),
    ("join", "partition join"),
    ("block_count", "partition blocks"),
    ("is_noncrossing", "partition noncrossing"),
    ("enumerate", "enum"),
    ("subpartitions", "partition subpartitions"),
    ("member", "member"),
    ("axioms_hold", "axioms"),
    ("generate", "closure"),
    ("special_partition", "partition special"),
    ("delta", "operator"),
    ("build_operator", "operator"),
    ("sample", "sample"),
    ("intertwines", "operator"),
    ("mc_fixed_dim", "fixed-dim"),
    ("gram_from_vectors", "gram"),
    ("gram_matrix", "gram"),
    ("weingarten_matrix", "weingarten"),
    ("haar_integral", "integrate"),
    ("moment", "moments"),
    ("asymptotic_moment", "asymptotic"),
    ("law_moments", "law"),
    ("balanced_recurrence", "recurrence"),
    ("law_compare", "law-compare"),
    ("apply_capping", "cap"),
    ("lambda_set", "lambda"),
    ("associated_easy_group", "associated"),
    ("verify_lemma_5_2", "verify"),
    ("verify_lemma_6_2", "verify"),
    ("verify_lemma_6_3", "verify"),
    ("verify_lemma_6_4", "verify"),
    ("verify_prop_4_3", "verify"),
];

fn resolve(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &global.config {
        cfg.apply_file(path)?;
    }
    let flag = |name: &str, v: &dyn ToString, cfg: &mut RunConfig| cfg.set(name, &v.to_string());
    if let Some(v) = global.max_legs {
        flag("max_legs", &v, &mut cfg)?;
    }
    if let Some(v) = global.budget {
        flag("budget", &v, &mut cfg)?;
    }
    if let Some(v) = global.seed {
        cfg.seed = Some(v);
    }
    if let Some(v) = global.samples {
        flag("samples", &v, &mut cfg)?;
    }
    if let Some(v) = global.format {
        cfg.format = v;
    }
    if let Some(v) = &global.output {
        cfg.output = Some(v.clone());
    }
    if let Some(v) = global.jobs {
        flag("jobs", &v, &mut cfg)?;
    }
    Ok(cfg)
}

fn execute(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let cfg = resolve(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cfg.jobs.unwrap_or(0))))?;
    pool.install(|| match &cfg.output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            commands::dispatch(&cli.command, &cfg, &mut file)?;
            file.flush()?;
            Ok(())
        }
        None => commands::dispatch(&cli.command, &cfg, out),
    })
}

/// Runs one invocation and returns its exit code: 0 on success, 1 on a
/// domain error, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
