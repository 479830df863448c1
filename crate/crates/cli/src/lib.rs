//! Batch front-end: each module operation reads JSON files and writes one JSON
//! document.
//!
//! Exit codes: 0 success, 1 invalid input or a failed check, 2 a
//! mathematical refusal (capacity exceeded, an `UNKNOWN` verdict, no
//! homotopy step), 3 internal error.

pub mod selftest;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use bighom_core::bigmaps::{self, CellMap, ReductionCheck, Witness};
use bighom_core::cardinal::{self, AxiomMode, CardinalExpr, Comparison, PerfectBound, Trivalent};
use bighom_core::embedding::{self, EmbedError, EmbeddingTrace, GridPolicy, InsertionOrder};
use bighom_core::finspace::{
    self, FinSpace, HomotopyCertificate, HomotopyLink, HomotopyRefusal, SpaceMap, Verification,
};
use bighom_core::lexint::{self, LexInterval, LexPoint, WedgePoint};
use bighom_core::orders::{self, FinOrder, MapDoc, MonotoneMap, Validation};
use bighom_core::quotient::{self, BreakpointSet, MixedInterval, MixedPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Invalid = 1,
    Refused = 2,
    Internal = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// A parsed and validated command line.
#[derive(Debug, Parser)]
#[command(
    name = "bighom",
    version,
    about = "Big-interval models, finite spaces and cardinal arithmetic over JSON"
)]
pub struct Manifest {
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print compact single-line JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symbolic cardinal arithmetic.
    Cardinal(CardinalArgs),
    /// Finite orders and the injection/surjection duality.
    #[command(subcommand)]
    Orders(OrdersOp),
    /// Points of the lexicographic cube. Input files hold lists of points.
    #[command(subcommand)]
    Lexint(LexintOp),
    /// Embed a finite order into the lexicographic cube.
    Embed(EmbedArgs),
    /// Quotient of the cube by a finite breakpoint set.
    Quotient(QuotientArgs),
    /// Finite topological spaces and homotopy certificates.
    #[command(subcommand)]
    Finspace(FinspaceOp),
    /// Cellwise-constant maps out of big intervals.
    #[command(subcommand)]
    Bigmaps(BigmapsOp),
    /// Run the built-in oracle suites and the fixture files.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Zfc,
    Gch,
}

impl From<Mode> for AxiomMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Zfc => AxiomMode::Zfc,
            Mode::Gch => AxiomMode::Gch,
        }
    }
}

#[derive(Debug, Args)]
pub struct CardinalArgs {
    #[command(subcommand)]
    pub op: CardinalOp,
    #[arg(long, value_enum, default_value_t = Mode::Zfc, global = true)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum CardinalOp {
    /// Normal form; in GCH mode every beth and power is rewritten to an aleph.
    Eval {
        expr: String,
    },
    Compare {
        left: String,
        right: String,
    },
    Hat {
        expr: String,
    },
    StrongLimit {
        expr: String,
    },
    /// Least cardinal of the form sup{2^b | b < g} above the argument.
    PerfectBound {
        expr: String,
    },
}

/// Orders commands read `{"domain":{..},"codomain":{..},"map":{..}}`.
#[derive(Debug, Subcommand)]
pub enum OrdersOp {
    Check {
        file: PathBuf,
    },
    Duality {
        file: PathBuf,
        #[arg(
            long,
            conflicts_with = "from_surjection",
            required_unless_present = "from_surjection"
        )]
        from_injection: bool,
        #[arg(long)]
        from_surjection: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum LexintOp {
    Sup {
        file: PathBuf,
    },
    /// Compares the two points in the file.
    Compare {
        file: PathBuf,
    },
    Sample {
        #[arg(long)]
        dims: usize,
        #[arg(long)]
        depth: u32,
    },
    /// Sends points into the wedge of two copies, or back with `--section`.
    Wedge {
        file: PathBuf,
        #[arg(long, requires = "dims")]
        section: bool,
        #[arg(long)]
        dims: Option<usize>,
    },
    Reverse {
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, required_unless_present = "replay")]
    pub dims: Option<usize>,
    /// `exact` or `dyadic:K`.
    #[arg(long, default_value = "exact", value_parser = parse_grid)]
    pub grid: GridPolicy,
    /// The order: `{"labels":[..]}`.
    #[arg(long, required_unless_present = "replay")]
    pub order: Option<PathBuf>,
    /// Insertion sequence as a list of labels; defaults to increasing order.
    #[arg(long)]
    pub insertion: Option<PathBuf>,
    /// Also write the embedding trace here.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Recompute the embedding from a trace.
    #[arg(long, conflicts_with_all = ["order", "insertion", "dims", "trace"])]
    pub replay: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<GridPolicy, String> {
    s.parse().map_err(|e: EmbedError| e.to_string())
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long)]
    pub ambient_dims: usize,
    /// Breakpoints as a list of points; the endpoints are added.
    #[arg(long)]
    pub atoms: PathBuf,
    /// Points of the cube to send to the quotient.
    #[arg(long)]
    pub eval: Option<PathBuf>,
    /// Points of the quotient to lift back.
    #[arg(long)]
    pub representative: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FinspaceOp {
    Nbhd {
        space: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    Classes {
        space: PathBuf,
    },
    T1 {
        space: PathBuf,
    },
    Weight {
        space: PathBuf,
    },
    Continuous {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Point assignment `{"x":"y",..}`.
        #[arg(long)]
        map: PathBuf,
    },
    /// Certifies a chain of maps, or verifies a certificate when the file has
    /// `links`.
    Homotopy {
        file: PathBuf,
        /// Require a single UP step between exactly two maps.
        #[arg(long)]
        step: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BigmapsOp {
    Check {
        map: PathBuf,
    },
    Concat {
        first: PathBuf,
        second: PathBuf,
    },
    Reverse {
        map: PathBuf,
    },
    /// Pushes the map down to the quotient by its own breakpoints.
    Reduce {
        map: PathBuf,
    },
    /// Checks `f ≅ g ∘ p` for `g` on the quotient by the atoms of `f`.
    Verify {
        map: PathBuf,
        reduced: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Module {
    Cardinal,
    Orders,
    Lexint,
    Embed,
    Quotient,
    Finspace,
    Bigmaps,
}

impl Module {
    pub const ALL: [Module; 7] = [
        Module::Cardinal,
        Module::Orders,
        Module::Lexint,
        Module::Embed,
        Module::Quotient,
        Module::Finspace,
        Module::Bigmaps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Module::Cardinal => "cardinal",
            Module::Orders => "orders",
            Module::Lexint => "lexint",
            Module::Embed => "embed",
            Module::Quotient => "quotient",
            Module::Finspace => "finspace",
            Module::Bigmaps => "bigmaps",
        }
    }
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum)]
    pub module: Option<Module>,
}

/// Input errors; anything unexpected becomes [`Failure::Internal`].
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Internal(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Reread = fn(&Value) -> Result<Value, String>;

fn reread<T: Serialize + DeserializeOwned>(v: &Value) -> Result<Value, String> {
    let t: T = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    serde_json::to_value(&t).map_err(|e| e.to_string())
}

/// The exit status and output document of one command.
#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub doc: Value,
    reread: Option<Reread>,
}

impl Outcome {
    fn emit<T: Serialize + DeserializeOwned>(exit: Exit, value: &T) -> Result<Outcome, Failure> {
        let doc = serde_json::to_value(value).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(Outcome {
            exit,
            doc,
            reread: Some(reread::<T>),
        })
    }

    pub fn error(exit: Exit, message: &str) -> Outcome {
        Outcome {
            exit,
            doc: json!({ "error": message }),
            reread: None,
        }
    }

    /// Parses the document with the reader for its type and checks that
    /// writing it again gives the same document.
    pub fn round_trip(&self) -> Result<(), String> {
        let Some(f) = self.reread else { return Ok(()) };
        let back = f(&self.doc)?;
        if back == self.doc {
            Ok(())
        } else {
            Err(format!("re-read document differs: {back}"))
        }
    }

    pub fn render(&self, compact: bool) -> String {
        if compact {
            self.doc.to_string()
        } else {
            serde_json::to_string_pretty(&self.doc).expect("values serialize")
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let name = path.display();
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{name}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{name}: {e}")))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// A refusal document for exit code 2.
#[derive(Debug, Serialize, Deserialize)]
pub struct Refusal {
    pub refusal: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

fn refuse(kind: &str, message: String, detail: Option<Value>) -> Result<Outcome, Failure> {
    Outcome::emit(
        Exit::Refused,
        &Refusal {
            refusal: kind.into(),
            message,
            detail,
        },
    )
}

fn status(ok: bool) -> Exit {
    if ok {
        Exit::Success
    } else {
        Exit::Invalid
    }
}

pub fn dispatch(m: &Manifest) -> Outcome {
    let result = match &m.command {
        Command::Cardinal(a) => run_cardinal(a),
        Command::Orders(op) => run_orders(op),
        Command::Lexint(op) => run_lexint(op),
        Command::Embed(a) => run_embed(a),
        Command::Quotient(a) => run_quotient(a),
        Command::Finspace(op) => run_finspace(op),
        Command::Bigmaps(op) => run_bigmaps(op),
        Command::Selftest(a) => selftest::run(a.module),
    };
    match result {
        Ok(o) => o,
        Err(Failure::Invalid(msg)) => Outcome::error(Exit::Invalid, &msg),
        Err(Failure::Internal(msg)) => Outcome::error(Exit::Internal, &msg),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CardinalValue {
    pub expr: CardinalExpr,
    pub mode: AxiomMode,
    pub value: CardinalExpr,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CardinalVerdict {
    pub left: CardinalExpr,
    pub right: CardinalExpr,
    pub mode: AxiomMode,
    pub verdict: Comparison,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CardinalPredicate {
    pub expr: CardinalExpr,
    pub mode: AxiomMode,
    pub verdict: Trivalent,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CardinalBound {
    pub expr: CardinalExpr,
    pub mode: AxiomMode,
    pub bound: Option<CardinalExpr>,
}

fn run_cardinal(a: &CardinalArgs) -> Result<Outcome, Failure> {
    let mode = AxiomMode::from(a.mode);
    let parse = |s: &str| s.parse::<CardinalExpr>();
    match &a.op {
        CardinalOp::Eval { expr } => {
            let e = parse(expr)?;
            let value = match mode {
                AxiomMode::Zfc => cardinal::normalize(&e)?,
                AxiomMode::Gch => cardinal::gch_normal_form(&e)?,
            };
            Outcome::emit(Exit::Success, &CardinalValue { expr: e, mode, value })
        }
        CardinalOp::Hat { expr } => {
            let e = parse(expr)?;
            let value = match mode {
                AxiomMode::Zfc => cardinal::hat(&e)?,
                AxiomMode::Gch => cardinal::gch_normal_form(&CardinalExpr::hat_of(e.clone()))?,
            };
            Outcome::emit(Exit::Success, &CardinalValue { expr: e, mode, value })
        }
        CardinalOp::Compare { left, right } => {
            let (l, r) = (parse(left)?, parse(right)?);
            let verdict = cardinal::compare(&l, &r, mode)?;
            let exit = if verdict.is_known() {
                Exit::Success
            } else {
                Exit::Refused
            };
            Outcome::emit(
                exit,
                &CardinalVerdict {
                    left: l,
                    right: r,
                    mode,
                    verdict,
                },
            )
        }
        CardinalOp::StrongLimit { expr } => {
            let e = parse(expr)?;
            let verdict = cardinal::is_strong_limit(&e, mode)?;
            let exit = if verdict == Trivalent::Unknown {
                Exit::Refused
            } else {
                Exit::Success
            };
            Outcome::emit(exit, &CardinalPredicate { expr: e, mode, verdict })
        }
        CardinalOp::PerfectBound { expr } => {
            let e = parse(expr)?;
            let (exit, bound) = match cardinal::least_perfect_bound(&e, mode)? {
                PerfectBound::Known(b) => (Exit::Success, Some(b)),
                PerfectBound::Unknown => (Exit::Refused, None),
            };
            Outcome::emit(exit, &CardinalBound { expr: e, mode, bound })
        }
    }
}

/// A map together with its domain and codomain.
#[derive(Debug, Serialize, Deserialize)]
pub struct OrderProblem {
    pub domain: FinOrder,
    pub codomain: FinOrder,
    pub map: MapDoc,
}

impl OrderProblem {
    fn from_map(m: &MonotoneMap) -> Self {
        OrderProblem {
            domain: m.domain().clone(),
            codomain: m.codomain().clone(),
            map: m.to_doc(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OrderCheck {
    #[serde(flatten)]
    pub validation: Validation,
    pub total: bool,
    pub injective: bool,
    pub surjective: bool,
}

fn run_orders(op: &OrdersOp) -> Result<Outcome, Failure> {
    let load = |file: &Path| -> Result<MonotoneMap, Failure> {
        let p: OrderProblem = read_json(file)?;
        Ok(MonotoneMap::from_graph_unchecked(
            p.domain,
            p.codomain,
            p.map.graph,
            p.map.extension,
        ))
    };
    match op {
        OrdersOp::Check { file } => {
            let m = load(file)?;
            let validation = m.validate();
            let valid = validation.valid;
            let check = OrderCheck {
                total: valid && m.is_total(),
                injective: valid && m.is_injective(),
                surjective: valid && m.is_surjective(),
                validation,
            };
            Outcome::emit(status(valid), &check)
        }
        OrdersOp::Duality {
            file, from_injection, ..
        } => {
            let m = load(file)?;
            if let Some(v) = m.validate().violation {
                return Err(Failure::Invalid(v.to_string()));
            }
            let dual = if *from_injection {
                orders::surjection_from_injection(&m)?
            } else {
                orders::injection_from_surjection(&m)?
            };
            Outcome::emit(Exit::Success, &OrderProblem::from_map(&dual))
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LexComparison {
    pub ordering: Comparison,
    pub first_difference: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Sample {
    pub dims: usize,
    pub depth: u32,
    pub count: u64,
    pub points: Vec<LexPoint>,
}

/// Largest sample written out.
const MAX_SAMPLE: u128 = 1 << 20;

fn run_lexint(op: &LexintOp) -> Result<Outcome, Failure> {
    match op {
        LexintOp::Sup { file } => {
            let points: Vec<LexPoint> = read_json(file)?;
            Outcome::emit(Exit::Success, &lexint::sup_finite(&points)?)
        }
        LexintOp::Compare { file } => {
            let points: Vec<LexPoint> = read_json(file)?;
            let [p, q] = points.as_slice() else {
                return Err(Failure::Invalid(format!("expected two points, got {}", points.len())));
            };
            let ordering = lexint::lex_compare(p, q)?.into();
            let first_difference = p.first_difference(q);
            Outcome::emit(
                Exit::Success,
                &LexComparison {
                    ordering,
                    first_difference,
                },
            )
        }
        LexintOp::Sample { dims, depth } => {
            let interval = LexInterval::new(*dims)?;
            let count = lexint::dense_sample_count(interval, *depth);
            if count > MAX_SAMPLE {
                return Err(Failure::Invalid(format!(
                    "sample has {count} points; the limit is {MAX_SAMPLE}"
                )));
            }
            let points = lexint::dense_sample(interval, *depth)?;
            let sample = Sample {
                dims: *dims,
                depth: *depth,
                count: count as u64,
                points,
            };
            Outcome::emit(Exit::Success, &sample)
        }
        LexintOp::Wedge { file, section, dims } => {
            if *section {
                let dims = dims.expect("clap requires dims");
                let points: Vec<WedgePoint> = read_json(file)?;
                let back = points
                    .iter()
                    .map(|w| lexint::wedge_section(w, dims))
                    .collect::<Result<Vec<_>, _>>()?;
                Outcome::emit(Exit::Success, &back)
            } else {
                let points: Vec<LexPoint> = read_json(file)?;
                let images: Vec<WedgePoint> = points.iter().map(lexint::wedge_map).collect();
                Outcome::emit(Exit::Success, &images)
            }
        }
        LexintOp::Reverse { file } => {
            let points: Vec<LexPoint> = read_json(file)?;
            let images: Vec<LexPoint> = points.iter().map(lexint::reverse_point).collect();
            Outcome::emit(Exit::Success, &images)
        }
    }
}

fn run_embed(a: &EmbedArgs) -> Result<Outcome, Failure> {
    if let Some(path) = &a.replay {
        let trace: EmbeddingTrace = read_json(path)?;
        return Outcome::emit(Exit::Success, &embedding::replay(&trace)?);
    }
    let (Some(dims), Some(order_path)) = (a.dims, &a.order) else {
        return Err(Failure::Invalid("--dims and --order are required".into()));
    };
    let base: FinOrder = read_json(order_path)?;
    let order = match &a.insertion {
        Some(p) => InsertionOrder::new(base, read_json(p)?)?,
        None => InsertionOrder::in_order(base),
    };
    match embedding::embed_order(&order, LexInterval::new(dims)?, a.grid) {
        Ok((emb, trace)) => {
            if let Some(p) = &a.trace {
                write_json(p, &trace)?;
            }
            Outcome::emit(Exit::Success, &emb)
        }
        Err(e @ EmbedError::CapacityExceeded { .. }) => {
            let EmbedError::CapacityExceeded { label, step, dims } = &e else {
                unreachable!()
            };
            let detail = json!({ "label": label, "step": step, "dims": dims, "grid": a.grid });
            refuse("capacity_exceeded", e.to_string(), Some(detail))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuotientReport {
    pub breakpoints: Vec<LexPoint>,
    pub target: MixedInterval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<MixedPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<LexPoint>>,
}

fn run_quotient(a: &QuotientArgs) -> Result<Outcome, Failure> {
    let atoms: Vec<LexPoint> = read_json(&a.atoms)?;
    let b = BreakpointSet::new(LexInterval::new(a.ambient_dims)?, atoms)?;
    let (target, p) = quotient::quotient_by_breakpoints(&b);
    let images = match &a.eval {
        Some(path) => {
            let points: Vec<LexPoint> = read_json(path)?;
            Some(points.iter().map(|t| p.eval(t)).collect::<Result<Vec<_>, _>>()?)
        }
        None => None,
    };
    let representatives = match &a.representative {
        Some(path) => {
            let points: Vec<MixedPoint> = read_json(path)?;
            Some(
                points
                    .iter()
                    .map(|q| p.representative(q))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    let report = QuotientReport {
        breakpoints: b.atoms().to_vec(),
        target,
        images,
        representatives,
    };
    Outcome::emit(Exit::Success, &report)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PointNbhd {
    pub point: String,
    pub min_nbhd: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Classes {
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Separation {
    pub t0: bool,
    pub t1: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Weight {
    pub weight: usize,
    pub points: usize,
}

/// `neighbour ∈ N_point` but its image leaves `N_{f(point)}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Discontinuity {
    pub point: String,
    pub neighbour: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapContinuity {
    pub continuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Discontinuity>,
}

/// Maps `X → Y` given as point assignments, with certificate links when
/// verifying.
#[derive(Debug, Serialize, Deserialize)]
pub struct HomotopyRequest {
    pub source: FinSpace,
    pub target: FinSpace,
    pub maps: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<Vec<HomotopyLink>>,
}

fn homotopy_refusal(r: HomotopyRefusal) -> Result<Outcome, Failure> {
    let (kind, detail) = match &r {
        HomotopyRefusal::Shape(e) => return Err(Failure::Invalid(e.to_string())),
        HomotopyRefusal::Discontinuous(which) => ("discontinuous", json!({ "map": which })),
        HomotopyRefusal::NotInNeighbourhood {
            point,
            f_value,
            g_value,
        } => (
            "not_in_neighbourhood",
            json!({ "point": point, "f_value": f_value, "g_value": g_value }),
        ),
        HomotopyRefusal::NoDirection { link } => ("no_direction", json!({ "link": link })),
    };
    refuse(kind, r.to_string(), Some(detail))
}

fn run_finspace(op: &FinspaceOp) -> Result<Outcome, Failure> {
    match op {
        FinspaceOp::Nbhd { space, point } => {
            let sp: FinSpace = read_json(space)?;
            match point {
                Some(x) => {
                    let min_nbhd = sp.min_nbhd(x)?;
                    Outcome::emit(
                        Exit::Success,
                        &PointNbhd {
                            point: x.clone(),
                            min_nbhd,
                        },
                    )
                }
                None => Outcome::emit(Exit::Success, &sp),
            }
        }
        FinspaceOp::Classes { space } => {
            let sp: FinSpace = read_json(space)?;
            Outcome::emit(
                Exit::Success,
                &Classes {
                    classes: sp.equiv_classes(),
                },
            )
        }
        FinspaceOp::T1 { space } => {
            let sp: FinSpace = read_json(space)?;
            Outcome::emit(
                Exit::Success,
                &Separation {
                    t0: sp.is_t0(),
                    t1: sp.is_t1(),
                },
            )
        }
        FinspaceOp::Weight { space } => {
            let sp: FinSpace = read_json(space)?;
            Outcome::emit(
                Exit::Success,
                &Weight {
                    weight: sp.weight(),
                    points: sp.len(),
                },
            )
        }
        FinspaceOp::Continuous { source, target, map } => {
            let (x, y): (FinSpace, FinSpace) = (read_json(source)?, read_json(target)?);
            let f = SpaceMap::from_assignment(x, y, &read_json(map)?)?;
            let witness = f.first_discontinuity().map(|(p, q)| Discontinuity {
                point: f.source().label(p).to_string(),
                neighbour: f.source().label(q).to_string(),
            });
            let report = MapContinuity {
                continuous: witness.is_none(),
                witness,
            };
            Outcome::emit(status(report.continuous), &report)
        }
        FinspaceOp::Homotopy { file, step } => {
            let req: HomotopyRequest = read_json(file)?;
            if let Some(links) = req.links {
                let cert = HomotopyCertificate::from_doc(finspace::CertificateDoc {
                    source: req.source,
                    target: req.target,
                    maps: req.maps,
                    links,
                })?;
                let v: Verification = finspace::verify_certificate(&cert);
                return Outcome::emit(status(v.valid), &v);
            }
            let maps = req
                .maps
                .iter()
                .map(|a| SpaceMap::from_assignment(req.source.clone(), req.target.clone(), a))
                .collect::<Result<Vec<_>, _>>()?;
            let result = if *step {
                let [f, g] = maps.as_slice() else {
                    return Err(Failure::Invalid(format!("--step needs two maps, got {}", maps.len())));
                };
                finspace::step_homotopy_check(f, g)
            } else {
                finspace::certify_chain(maps)
            };
            match result {
                Ok(cert) => Outcome::emit(Exit::Success, &certificate_request(&cert)),
                Err(r) => homotopy_refusal(r),
            }
        }
    }
}

fn certificate_request(c: &HomotopyCertificate) -> HomotopyRequest {
    let doc = c.to_doc();
    HomotopyRequest {
        source: doc.source,
        target: doc.target,
        maps: doc.maps,
        links: Some(doc.links),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CellMapCheck {
    pub continuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub endpoints_constant: bool,
    pub cells: usize,
}

fn run_bigmaps(op: &BigmapsOp) -> Result<Outcome, Failure> {
    match op {
        BigmapsOp::Check { map } => {
            let f: CellMap = read_json(map)?;
            let c = f.check_continuity();
            let report = CellMapCheck {
                continuous: c.continuous,
                witness: c.witness,
                endpoints_constant: f.endpoints_constant(),
                cells: f.cells(),
            };
            Outcome::emit(status(report.continuous), &report)
        }
        BigmapsOp::Concat { first, second } => {
            let (f, g): (CellMap, CellMap) = (read_json(first)?, read_json(second)?);
            Outcome::emit(Exit::Success, &bigmaps::concat(&f, &g)?)
        }
        BigmapsOp::Reverse { map } => {
            let f: CellMap = read_json(map)?;
            Outcome::emit(Exit::Success, &bigmaps::reverse(&f)?)
        }
        BigmapsOp::Reduce { map } => {
            let f: CellMap = read_json(map)?;
            Outcome::emit(Exit::Success, &bigmaps::density_reduce(&f)?.reduced)
        }
        BigmapsOp::Verify { map, reduced } => {
            let (f, g): (CellMap, CellMap) = (read_json(map)?, read_json(reduced)?);
            let (_, p) = quotient::quotient_by_breakpoints(f.domain().as_lex()?);
            let check: ReductionCheck = bigmaps::verify_reduction(&f, &g, &p)?;
            Outcome::emit(status(check.valid), &check)
        }
    }
}
