use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "yangeval", version, about = "Exact computations for gl(n) Yangian evaluations in Weyl algebras")]
#[command(args_override_self = true)]
pub struct Cli {
    /// key=value file with the same keys as the flags; flags given on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// write the result document on first run, compare against it afterwards
    #[arg(long, global = true, value_name = "DIR")]
    pub fixture_dir: Option<PathBuf>,
    /// add wall-clock time to the document (it is then no longer reproducible)
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an identity exactly on a truncated basis
    #[command(subcommand)]
    Verify(Verify),
    /// Second order gl(2) evaluations: classification and asymptotics
    #[command(subcommand)]
    Gl2(Gl2),
    /// Run a beta sequence of permutation operators on 1
    Betaseq(BetaseqArgs),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// RLL relation between two first order factors
    Rll(RllArgs),
    /// highest weight property of 1 for a Biedenharn monodromy
    Hw(MonodromyArgs),
    /// centrality and multiplicativity of the quantum determinant
    Qdet(MonodromyArgs),
    /// S T(u) = T'(u) S for a permutation operator sequence
    Intertwine(IntertwineArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelationArg {
    /// R12(u - v) with Jordan-Schwinger factors
    Rll,
    /// restricted factors, argument u - v
    UPlusU,
    /// restricted factors, argument u^- - v^-
    #[value(alias = "v-minus")]
    VPlusU,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct RllArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = RelationArg::VPlusU)]
    pub relation: RelationArg,
    #[arg(long, default_value_t = 3)]
    pub deg: u32,
    /// added to the argument fixed by the relation
    #[arg(long, default_value = "0")]
    pub shift: String,
    /// degrees 2l of the two restricted factors (rational or symbol)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub degrees: Option<Vec<String>>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct MonodromyArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// number of first order factors
    #[arg(long = "N", default_value_t = 1)]
    pub order: usize,
    /// 2l^I_a for I = 1..N, a = n..1 (rational or symbol), n*N entries
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<String>>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct IntertwineArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// 1 to 1 sequence exchanging 2l^1_i and 2l^2_i
    #[arg(long, conflicts_with = "step")]
    pub i: Option<usize>,
    /// single step: between, 1:k or 2:k
    #[arg(long)]
    pub step: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
}

#[derive(Subcommand, Debug)]
pub enum Gl2 {
    /// combinations, representation types, permutation coefficients
    Classify(ClassifyArgs),
    /// leading Laurent term of the permutation coefficient at u -> 0
    Asym(AsymArgs),
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ClassifyArgs {
    /// 2l^1_2,2l^1_1,2l^2_2,2l^2_1[,...] for N = 2 or 4 factors
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub params: Vec<String>,
    /// list degeneracy witnesses for exponents up to this bound
    #[arg(long)]
    pub witness_max: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    ShiftAll,
    ShiftSecond,
    FourFactor,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct AsymArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::FourFactor)]
    pub mode: ModeArg,
    /// base parameters; shift-all also takes a single factor
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "sweep")]
    pub params: Option<Vec<String>>,
    /// run the consistency sweep against the classification instead
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct BetaseqArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// 1 to 1 sequence exchanging 2l^1_i and 2l^2_i
    #[arg(long, conflicts_with_all = ["p", "swap_n"])]
    pub i: Option<usize>,
    /// block sequence exchanging position p of --site with the adjacent site
    #[arg(long, requires = "site")]
    pub p: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub site: Option<u8>,
    /// full exchange of 2l^1_n and 2l^2_n
    #[arg(long, conflicts_with = "p")]
    pub swap_n: bool,
    /// emit every intermediate state
    #[arg(long)]
    pub trace: bool,
}

/// Keys that take no value in a config file.
pub const FLAG_KEYS: [&str; 4] = ["timing", "sweep", "swap-n", "trace"];

