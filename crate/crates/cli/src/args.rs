use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "zerosum", version, about = "Zero-sum constants and product-one extraction over small finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Worker threads. Overrides ZEROSUM_WORKERS.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Master seed for randomized commands.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One JSON record per line.
    Structured,
}

/// Exactly one way of naming a group.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GroupArg {
    /// `cyclic N`, `abelian P E1,E2,...` or `heisenberg P`.
    #[arg(long, num_args = 1..=3, value_name = "SPEC")]
    pub group: Option<Vec<String>>,
    #[arg(long, value_name = "N")]
    pub cyclic: Option<u32>,
    #[arg(long, value_name = "P")]
    pub heisenberg: Option<u32>,
    /// Prime and exponent list, e.g. `--abelian 3 1,2`.
    #[arg(long, num_args = 2, value_names = ["P", "E1,E2,..."])]
    pub abelian: Option<Vec<String>>,
    /// A table written by `group export`.
    #[arg(long, value_name = "PATH")]
    pub group_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SearchArgs {
    /// Sub-multiset DP states allowed per node.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Accepted nodes allowed per shard.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Process at most this many pending shards, then stop.
    #[arg(long)]
    pub shard_limit: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,
    /// Skip shards already recorded in the checkpoint.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect or export a group table.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Compute a zero-sum constant by exhaustive search.
    Compute {
        #[arg(value_enum)]
        constant: Constant,
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Extract a product-one subsequence over H_27.
    #[command(subcommand)]
    Extract(ExtractCmd),
    /// EGZ certificates and reordering over H_{p^3}.
    #[command(subcommand)]
    Egz(EgzCmd),
    /// Seeded random campaigns.
    #[command(subcommand)]
    Fuzz(FuzzCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Structural counts.
    Info {
        #[command(flatten)]
        group: GroupArg,
    },
    /// The multiplication table in the versioned text format.
    Export {
        #[command(flatten)]
        group: GroupArg,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Constant {
    /// Small Davenport constant.
    #[value(name = "d")]
    SmallDavenport,
    /// Large Davenport constant.
    #[value(name = "D")]
    LargeDavenport,
    /// EGZ constant.
    #[value(name = "s")]
    Egz,
    /// Gao constant.
    #[value(name = "E")]
    Gao,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Search d(G) and compare with the known value where there is one.
    Davenport {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Zero-sum-free sequences over C_n with a term of multiplicity above n/2.
    CyclicMultiplicityBound {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Zero-sum-free sequences of length d(G)-1 reach every non-identity element.
    ExtremalCoverage {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Length-27 subsequences of random length-33 sequences over H_27.
    LongSubsequences {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Every C_3 multiset of length 27 and 28.
    C3Selection,
    /// Every pair of non-central short 3-sequences over H_27.
    TwinShort3,
    /// The explicit product-one tables for seven terms over H_27.
    CaseTables,
    /// Every length-7 sequence over H_27 under the three structural hypotheses.
    Structured {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Randomized search for a zero-sum-free sequence of length 3p-3 over H_{p^3}.
    ZeroSumFree {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1000)]
        attempts: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Pad a zero-sum-free sequence with identities into a lower bound for E(G).
    GaoLowerBound {
        #[command(flatten)]
        group: GroupArg,
        /// Zero-sum-free base; searched for when absent.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtractCmd {
    /// Shortest product-one subsequence of 7 terms.
    #[command(name = "7")]
    Seven {
        /// Inline sequence or a file holding one.
        #[arg(long)]
        seq: String,
    },
    /// Product-one subsequence of length 27 from 33 terms.
    #[command(name = "27")]
    TwentySeven {
        #[arg(long)]
        seq: String,
        /// Shuffled restarts before the exhaustive sweep.
        #[arg(long, default_value_t = 64)]
        restart_limit: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum EgzCmd {
    /// Find a principal part of a central-product sequence.
    Certify {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        seq: String,
    },
    /// Reorder an EGZ sequence to product 1.
    Reorder {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        seq: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FuzzCmd {
    /// Random length-33 inputs to the H_27 extractor.
    Extract27 {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Input families: `all`, `adversarial`, or family names.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        family: Vec<String>,
    },
    /// Random certified EGZ sequences over H_{p^3}.
    Egz {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Same campaign as `verify long-subsequences`.
    LongSubsequences {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}
