use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dimlab", version, about = "Exact dimensions, bounds and online games for finite hypothesis classes")]
pub struct Cli {
    /// Write the result here instead of stdout (a run manifest goes next to it)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Threads for independent grid points and trials
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Cap on memoized states in the agnostic game solver
    #[arg(long = "max-states", global = true, default_value_t = dimlab::games::DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a named class
    #[command(subcommand)]
    Gen(Gen),
    /// Build a derived class from existing ones
    #[command(subcommand)]
    Derive(Derive),
    /// Compute a dimension with its witness
    Dim(DimArgs),
    /// Widths, mean widths and covering numbers
    #[command(subcommand)]
    Width(Width),
    /// Evaluate a bound; numeric keys accept comma lists and are swept
    Bounds(BoundsArgs),
    /// Solve or simulate online-learning games
    #[command(subcommand)]
    Game(Game),
    /// Monte-Carlo PAC experiments
    #[command(subcommand)]
    Pac(Pac),
    /// Convert between witness kinds
    #[command(subcommand)]
    Convert(Convert),
    /// Check a witness against a class
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum Gen {
    Powerset { n: usize },
    Threshold { n: usize },
    Interval { n: usize },
    Rectangle { w: usize, h: usize },
    EvenInterval { n: usize },
    H0 { k: usize },
    /// Two-choice mixtures over the h0 class that hit 1/2 off their support
    H0TwoChoice { k: usize },
    /// Truncated tree class of depth d
    Tree {
        d: usize,
        /// Strictly decreasing scales, comma separated
        #[arg(long)]
        gammas: String,
    },
    RationalFn {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        xs: String,
        #[arg(long = "deg-p")]
        deg_p: usize,
        #[arg(long = "deg-q")]
        deg_q: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Derive {
    Dual { class: String },
    /// Compose with a piecewise-linear increasing map given as `a:b` breakpoints
    Compose {
        class: String,
        #[arg(long)]
        map: String,
    },
    /// Mixtures over hypotheses; the file holds a list of distributions over y
    Distribution {
        class: String,
        #[arg(long)]
        dists: String,
    },
    /// Mixtures over points; the file holds a list of distributions over x
    DualDistribution {
        class: String,
        #[arg(long)]
        dists: String,
    },
    /// Weighted average of a family file `{"weights": [...], "classes": [...]}`
    Expectation { family: String },
    /// Averages over point tuples, e.g. `0,1;1,2`
    Avg {
        class: String,
        #[arg(long)]
        tuples: String,
    },
    TwoChoice {
        class: String,
        #[arg(long)]
        lambdas: String,
        /// `y:y'` index pairs
        #[arg(long)]
        pairs: String,
    },
    RestrictX {
        class: String,
        #[arg(long)]
        keep: String,
    },
    RestrictY {
        class: String,
        #[arg(long)]
        keep: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DimKind {
    Vc,
    Littlestone,
    Fat,
    SeqFat,
    Graph,
    Threshold,
    Online,
}

#[derive(Args, Debug)]
pub struct DimArgs {
    pub kind: DimKind,
    pub class: String,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, default_value = "id")]
    pub loss: String,
}

#[derive(Subcommand, Debug)]
pub enum Width {
    /// Exact Rademacher mean width of a cloud (or of a class restricted to --xs)
    Rademacher {
        input: String,
        #[arg(long)]
        xs: Option<String>,
    },
    ClassRademacher {
        class: String,
        #[arg(long)]
        n: usize,
        /// Sample this many multisets instead of enumerating
        #[arg(long)]
        trials: Option<usize>,
    },
    SeqRademacher {
        class: String,
        #[arg(long)]
        n: usize,
    },
    SeqTree { class: String, tree: String },
    Gaussian {
        input: String,
        #[arg(long)]
        xs: Option<String>,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
    },
    Cover {
        input: String,
        #[arg(long)]
        xs: Option<String>,
        #[arg(long)]
        gamma: String,
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L2,
    Linf,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    pub name: String,
    /// `key=value` inputs
    pub params: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Ftl,
    Minimax,
}

#[derive(Args, Debug)]
pub struct GameCommon {
    pub class: String,
    #[arg(long, default_value = "id")]
    pub loss: String,
    #[arg(long = "T")]
    pub t: usize,
    /// Prediction grid; defaults to class values and their midpoints
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Game {
    Realizable(GameCommon),
    Agnostic {
        #[command(flatten)]
        common: GameCommon,
        /// Label grid; defaults to class values plus 0 and 1
        #[arg(long)]
        labels: Option<String>,
    },
    Simulate {
        #[command(flatten)]
        common: GameCommon,
        #[arg(long, value_enum, default_value_t = LearnerArg::Minimax)]
        learner: LearnerArg,
        /// `consistent:<h0>`, `worst`, or `scripted:<file>`
        #[arg(long, default_value = "worst")]
        adversary: String,
    },
    /// Worst case of the learner that plays 0 until a non-zero label appears
    PlayZero(GameCommon),
}

#[derive(Subcommand, Debug)]
pub enum Pac {
    Gc {
        class: String,
        /// Distribution over x
        #[arg(long)]
        dist: String,
        /// Sample sizes, comma separated
        #[arg(long)]
        m: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
    Trial {
        class: String,
        /// Distribution over labelled points
        #[arg(long)]
        sample: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
    Selectivity {
        base: String,
        #[arg(long)]
        hidden: String,
        #[arg(long)]
        candidates: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Convert {
    TreeFromRs { class: String, witness: String },
    GammaFromTree {
        class: String,
        witness: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    GammaFromSpread {
        class: String,
        witness: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    RsFromGamma {
        class: String,
        witness: String,
        #[arg(long)]
        delta: String,
    },
    ToSpread { witness: String },
    /// Monochromatic subtree of a colored tree
    Ramsey {
        tree: String,
        #[arg(long)]
        depths: String,
    },
    /// Full subtree of true nodes in a boolean tree
    OnesSubtree {
        tree: String,
        #[arg(long)]
        want: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Set,
    Graph,
    Seq,
    Threshold,
    Online,
    Spread,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub kind: VerifyKind,
    pub class: String,
    /// A witness, or the full output of `dim`
    pub witness: String,
    /// Overrides the scale stored in the witness
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub loss: Option<String>,
}
