//! `qc`: polars, hulls, qc-density certificates and determination checks
//! from the command line. Every run prints one JSON report on stdout.
//!
//! Exit codes: 0 verified / computed, 1 property violated (counterexample in
//! the report), 2 usage, parse or precondition error.

mod report;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qcdense::determining::{
    build_determining_finite, build_determining_supersequence, check_near_characterization, determine_by_witness,
    determines_finite, model_supersequence, restriction_kernel, row_fraction, theorem1_experiment, PipelineBounds,
};
use qcdense::finite::{GroupElement, Homomorphism};
use qcdense::models::{
    constructive_witness, enumerate_characters_bounded, fan_finite, verify_qc_dense_up_to, CharBound, CompactModel,
    SuperSequence,
};
use qcdense::qc::{
    certify_qc_dense, check_three_space, min_sumset_qc_dense, polar_right, qc_density, qc_hull, sumset_k_n, w_set,
};
use qcdense::search::search_min_dense;
use qcdense::solenoid::{qhat_qc_sequence, verify_qhat_qc_dense, QhatParams};
use qcdense::{Arc, Error, FiniteGroup, Point, Result, Torus};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use report::{conventions, join, strings, to_value, Outcome, Report};

#[derive(Parser)]
#[command(name = "qc", version, about = "Quasi-convexity and qc-density toolkit")]
struct Cli {
    /// Worker threads for the parallel verifiers (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-convex hull E^▷◁ of a set in a finite group.
    Hull(GroupSet),
    /// Polar E^▷ of a set in a finite group.
    Polar(GroupSet),
    /// qc-density of a set, exactly in a finite group or up to a bound in a model.
    Dense(DenseArgs),
    /// W(X,U) for an open arc U.
    Wset(ArcArgs),
    /// The sumset K_n = (X ∪ {0}) + ... + (X ∪ {0}).
    Sumset(SumsetArgs),
    /// Least n with K_n qc-dense, given W(X,U) = {0}.
    MinSumset(ArcArgs),
    /// Verify the qc-dense sequences of T, Z_p, the solenoid and products.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Fan of per-factor subsets in a product of cyclic groups.
    Fan(FanArgs),
    /// Three-space check for a surjective homomorphism.
    ThreeSpace(ThreeSpaceArgs),
    /// W(X,U) = {0} for some U versus injectivity of restriction to X.
    NearChar(GroupSet),
    /// Whether a subgroup (finite) or a witness set (model) determines the group.
    Determine(DetermineArgs),
    /// Build and verify a qc-dense super-sequence converging to 0.
    BuildSeq(BuildSeqArgs),
    /// Searches over subsets of a finite group.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Numerical experiments on characters of Z^d.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Args)]
struct GroupSet {
    /// Finite group such as Z4 or Z2xZ4.
    #[arg(long)]
    group: String,
    /// Elements such as "(1,0),(0,3)"; bare integers for cyclic groups.
    #[arg(long, default_value = "")]
    set: String,
}

#[derive(Args)]
struct DenseArgs {
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    group: Option<String>,
    /// Compact model: T, Zp(p) or prod(...).
    #[arg(long)]
    model: Option<String>,
    #[arg(long, default_value = "")]
    set: String,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Args, Clone)]
struct BoundArgs {
    /// |m| bound on T, level bound on Z_p, per factor on products.
    #[arg(long)]
    char_bound: Option<u64>,
    /// Largest support of product characters.
    #[arg(long)]
    support: Option<usize>,
}

impl BoundArgs {
    fn resolve(&self, default: u64) -> CharBound {
        let b = CharBound::new(self.char_bound.unwrap_or(default));
        match self.support {
            Some(s) => b.with_support(s),
            None => b,
        }
    }
}

#[derive(Args)]
struct ArcArgs {
    #[command(flatten)]
    gs: GroupSet,
    /// Arc radius a/b with 0 < a/b <= 1/2.
    #[arg(long)]
    arc: String,
}

#[derive(Args)]
struct SumsetArgs {
    #[command(flatten)]
    gs: GroupSet,
    #[arg(long)]
    n: u64,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// {1/(2n)} in T.
    Torus {
        #[arg(long)]
        seq_len: u64,
        #[arg(long)]
        char_bound: u64,
    },
    /// {k p^j} in Z_p.
    Zp {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        levels: u32,
        /// Defaults to the number of levels.
        #[arg(long)]
        char_bound: Option<u64>,
    },
    /// The sequence in the dual of Q, checked on characters of bounded height.
    Qhat {
        #[arg(long)]
        seq_len: u64,
        #[arg(long)]
        prime_max: u64,
        #[arg(long)]
        levels: u32,
        #[arg(long)]
        height: u64,
    },
    /// Fan of the factor sequences in a product model.
    Fan {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        bound: BoundArgs,
    },
}

#[derive(Args, Clone)]
struct SeqArgs {
    #[arg(long, default_value_t = 100)]
    seq_len: u64,
    #[arg(long, default_value_t = 5)]
    levels: u32,
}

#[derive(Args)]
struct FanArgs {
    /// Product of cyclic groups; one --set per factor.
    #[arg(long)]
    group: String,
    #[arg(long)]
    set: Vec<String>,
}

#[derive(Args)]
struct ThreeSpaceArgs {
    /// {"source": "Z4", "target": "Z2", "matrix": [[1]]}, one row per target factor.
    #[arg(long)]
    hom: String,
    #[arg(long, default_value = "")]
    set: String,
}

#[derive(Args)]
struct DetermineArgs {
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    group: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Subgroup D (finite) or candidate witness X ⊆ <D> (model).
    #[arg(long, default_value = "")]
    set: String,
    /// Generators of D for models; defaults to the witness set.
    #[arg(long)]
    gens: Option<String>,
    /// Open arc for the K_n completion route.
    #[arg(long)]
    arc: Option<String>,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Args)]
struct BuildSeqArgs {
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    group: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[command(flatten)]
    seq: SeqArgs,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// All minimum-cardinality qc-dense subsets.
    MinDense {
        #[arg(long)]
        group: String,
        /// Beam search for groups beyond the exhaustive cap.
        #[arg(long)]
        heuristic: bool,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Count characters of Z^d in growing boxes that map X into U.
    Theorem1 {
        #[arg(long)]
        dim: usize,
        /// Points of T^d such as "(1/6,0),(0,1/10)".
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long, default_value = "1/4")]
        arc: String,
        /// Increasing box radii, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        schedule: Vec<u64>,
        /// Also write (M, count, fraction) rows here.
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("qc: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    let outcome = run(cli.command);
    let timing_ms = start.elapsed().as_millis() as u64;
    let (report, code) = match outcome {
        Ok(o) => {
            let code = if o.ok { 0 } else { 1 };
            let report = Report {
                command: name,
                inputs: Value::Object(o.inputs),
                conventions: conventions(),
                result: o.result,
                certificates: o.certificates,
                bound: o.bound,
                error: None,
                timing_ms,
            };
            (report, code)
        }
        Err(e) => {
            eprintln!("qc: {e}");
            // a proven statement failing is a violation, everything else is bad input
            let code = if matches!(e, Error::Invariant(_)) { 1 } else { 2 };
            let report = Report {
                command: name,
                inputs: Value::Object(Map::new()),
                conventions: conventions(),
                result: Value::Null,
                certificates: Vec::new(),
                bound: None,
                error: Some(e.to_string()),
                timing_ms,
            };
            (report, code)
        }
    };
    // one write, so a reader never sees a partial report; a closed pipe is not our error
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code)
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Hull(_) => "hull",
        Command::Polar(_) => "polar",
        Command::Dense(_) => "dense",
        Command::Wset(_) => "wset",
        Command::Sumset(_) => "sumset",
        Command::MinSumset(_) => "min-sumset",
        Command::Witness(WitnessCmd::Torus { .. }) => "witness torus",
        Command::Witness(WitnessCmd::Zp { .. }) => "witness zp",
        Command::Witness(WitnessCmd::Qhat { .. }) => "witness qhat",
        Command::Witness(WitnessCmd::Fan { .. }) => "witness fan",
        Command::Fan(_) => "fan",
        Command::ThreeSpace(_) => "three-space",
        Command::NearChar(_) => "near-char",
        Command::Determine(_) => "determine",
        Command::BuildSeq(_) => "build-seq",
        Command::Search(SearchCmd::MinDense { .. }) => "search min-dense",
        Command::Experiment(ExperimentCmd::Theorem1 { .. }) => "experiment theorem1",
    }
    .to_string()
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Hull(a) => hull(a),
        Command::Polar(a) => polar(a),
        Command::Dense(a) => dense(a),
        Command::Wset(a) => wset(a),
        Command::Sumset(a) => sumset(a),
        Command::MinSumset(a) => min_sumset(a),
        Command::Witness(w) => witness(w),
        Command::Fan(a) => fan(a),
        Command::ThreeSpace(a) => three_space(a),
        Command::NearChar(a) => near_char(a),
        Command::Determine(a) => determine(a),
        Command::BuildSeq(a) => build_seq(a),
        Command::Search(SearchCmd::MinDense { group, heuristic }) => search(&group, heuristic),
        Command::Experiment(ExperimentCmd::Theorem1 { dim, set, arc, schedule, csv }) => {
            theorem1(dim, &set, &arc, &schedule, csv.as_deref())
        }
    }
}

type ElementSet = BTreeSet<GroupElement<i64>>;

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parse_group_set(gs: &GroupSet) -> Result<(FiniteGroup, ElementSet, Map<String, Value>)> {
    let group: FiniteGroup = gs.group.parse()?;
    let set = group.parse_set(&gs.set)?;
    let echo = inputs(&[("group", json!(group.to_string())), ("set", json!(join(&set)))]);
    Ok((group, set, echo))
}

fn hull(a: GroupSet) -> Result<Outcome> {
    let (g, set, echo) = parse_group_set(&a)?;
    let h = qc_hull(&g, &set)?;
    let result = json!({ "hull": strings(&h), "quasi_convex": h == set });
    Ok(Outcome::new(echo, result, true))
}

fn polar(a: GroupSet) -> Result<Outcome> {
    let (g, set, echo) = parse_group_set(&a)?;
    let p = polar_right(&g, &set)?;
    let dense = p.iter().all(|c| c.is_zero());
    Ok(Outcome::new(echo, json!({ "polar": strings(&p), "dense": dense }), true))
}

fn dense(a: DenseArgs) -> Result<Outcome> {
    if let Some(group) = a.group {
        let (g, set, echo) = parse_group_set(&GroupSet { group, set: a.set })?;
        let verdict = qc_density(&g, &set)?;
        let points: Vec<_> = set.iter().cloned().collect();
        let report = certify_qc_dense(&g, &points)?;
        return Ok(Outcome::new(echo, to_value(&verdict), verdict.dense).with_certificates(&report.certificates));
    }
    let model: CompactModel = a.model.expect("clap requires group or model").parse()?;
    let points: Vec<Point> = model.parse_points(&a.set)?;
    let bound = a.bound.resolve(1);
    let report = verify_qc_dense_up_to(&model, &points, &bound)?;
    let echo = inputs(&[
        ("model", json!(model.to_string())),
        ("set", json!(join(&points))),
        ("char_bound", json!(bound.bound)),
        ("support", to_value(&a.bound.support)),
    ]);
    let result = json!({
        "dense": report.verified(),
        "counterexample": to_value(&report.counterexample),
        "characters_checked": report.characters_checked,
        "scope": to_value(&report.scope),
    });
    Ok(Outcome::new(echo, result, report.verified()).with_certificates(&report.certificates).with_bound(&bound))
}

fn with_arc(a: &ArcArgs) -> Result<(FiniteGroup, ElementSet, Arc, Map<String, Value>)> {
    let (g, set, mut echo) = parse_group_set(&a.gs)?;
    let arc: Arc = a.arc.parse()?;
    echo.insert("arc".into(), json!(arc.to_string()));
    Ok((g, set, arc, echo))
}

fn wset(a: ArcArgs) -> Result<Outcome> {
    let (g, set, arc, echo) = with_arc(&a)?;
    let w = w_set(&g, &set, &arc)?;
    let trivial = w.iter().all(|c| c.is_zero());
    Ok(Outcome::new(echo, json!({ "w": strings(&w), "trivial": trivial }), true))
}

fn sumset(a: SumsetArgs) -> Result<Outcome> {
    let (g, set, mut echo) = parse_group_set(&a.gs)?;
    echo.insert("n".into(), json!(a.n));
    let k = sumset_k_n(&g, &set, a.n)?;
    Ok(Outcome::new(echo, json!({ "sumset": strings(&k), "size": k.len() }), true))
}

fn min_sumset(a: ArcArgs) -> Result<Outcome> {
    let (g, set, arc, echo) = with_arc(&a)?;
    let cert = min_sumset_qc_dense(&g, &set, &arc)?;
    let points: Vec<_> = cert.sumset.iter().cloned().collect();
    let report = certify_qc_dense(&g, &points)?;
    let result = json!({
        "n": cert.n,
        "v_n_bound": cert.v_n_bound,
        "sumset": strings(&cert.sumset),
        "dense": report.verified(),
    });
    Ok(Outcome::new(echo, result, report.verified()).with_certificates(&report.certificates))
}

/// Verifies a model sequence exhaustively and cross-checks every character
/// against the closed-form witness.
fn model_witness(seq: &SuperSequence<i64>, bound: &CharBound, echo: Map<String, Value>) -> Result<Outcome> {
    let report = verify_qc_dense_up_to(&seq.model, &seq.with_limit(), bound)?;
    let mut constructive = 0usize;
    for chi in enumerate_characters_bounded::<i64>(&seq.model, bound) {
        if !chi.is_zero() {
            constructive_witness(&seq.model, &chi, seq)?;
            constructive += 1;
        }
    }
    let verified = report.verified() && constructive == report.characters_checked;
    let result = json!({
        "verified": verified,
        "points": seq.points.len() + 1,
        "characters_checked": report.characters_checked,
        "constructive_witnesses": constructive,
        "counterexample": to_value(&report.counterexample),
        "scope": to_value(&report.scope),
    });
    Ok(Outcome::new(echo, result, verified).with_certificates(&report.certificates).with_bound(bound))
}

fn witness(cmd: WitnessCmd) -> Result<Outcome> {
    match cmd {
        WitnessCmd::Torus { seq_len, char_bound } => {
            let seq = qcdense::models::torus_qc_sequence(seq_len);
            let echo = inputs(&[("seq_len", json!(seq_len)), ("char_bound", json!(char_bound))]);
            model_witness(&seq, &CharBound::new(char_bound), echo)
        }
        WitnessCmd::Zp { prime, levels, char_bound } => {
            let seq = qcdense::models::zp_qc_sequence(prime, levels)?;
            let bound = char_bound.unwrap_or(levels as u64);
            let echo =
                inputs(&[("prime", json!(prime)), ("levels", json!(levels)), ("char_bound", json!(bound))]);
            model_witness(&seq, &CharBound::new(bound), echo)
        }
        WitnessCmd::Qhat { seq_len, prime_max, levels, height } => {
            let params = QhatParams { seq_len, prime_max, levels };
            let seq = qhat_qc_sequence::<i64>(params)?;
            let report = verify_qhat_qc_dense(&seq, height)?;
            let echo = inputs(&[
                ("seq_len", json!(seq_len)),
                ("prime_max", json!(prime_max)),
                ("levels", json!(levels)),
                ("height", json!(height)),
            ]);
            let result = json!({
                "verified": report.verified(),
                "points": seq.points.len(),
                "characters_checked": report.characters_checked,
                "counterexample": to_value(&report.counterexample),
                "scope": to_value(&report.scope),
            });
            Ok(Outcome::new(echo, result, report.verified())
                .with_certificates(&report.certificates)
                .with_bound(format!("height {height}")))
        }
        WitnessCmd::Fan { model, seq, bound } => {
            let model: CompactModel = model.parse()?;
            if !matches!(model, CompactModel::Product(_)) {
                return Err(Error::Precondition(format!("{model} is not a product model")));
            }
            let cb = bound.resolve(seq.levels as u64);
            let pb = PipelineBounds { seq_len: seq.seq_len, levels: seq.levels, char_bound: cb.clone() };
            let s = model_supersequence::<i64>(&model, &pb)?;
            let echo = inputs(&[
                ("model", json!(model.to_string())),
                ("seq_len", json!(seq.seq_len)),
                ("levels", json!(seq.levels)),
                ("char_bound", json!(cb.bound)),
                ("support", to_value(&bound.support)),
            ]);
            model_witness(&s, &cb, echo)
        }
    }
}

fn fan(a: FanArgs) -> Result<Outcome> {
    let group: FiniteGroup = a.group.parse()?;
    if a.set.len() != group.rank() {
        return Err(Error::ShapeMismatch { expected: group.rank(), got: a.set.len() });
    }
    let factors = group.orders().iter().map(|n| FiniteGroup::new(vec![*n])).collect::<Result<Vec<_>>>()?;
    let subsets = factors.iter().zip(&a.set).map(|(g, s)| g.parse_set(s)).collect::<Result<Vec<_>>>()?;
    let (product, set) = fan_finite(&factors, &subsets)?;
    let verdict = qc_density(&product, &set)?;
    let points: Vec<_> = set.iter().cloned().collect();
    let report = certify_qc_dense(&product, &points)?;
    let echo = inputs(&[
        ("group", json!(group.to_string())),
        ("set", json!(subsets.iter().map(join).collect::<Vec<_>>())),
    ]);
    let result = json!({
        "fan": strings(&set),
        "dense": verdict.dense,
        "counterexample": to_value(&verdict.counterexample),
    });
    Ok(Outcome::new(echo, result, verdict.dense).with_certificates(&report.certificates))
}

#[derive(Deserialize)]
struct HomSpec {
    source: String,
    target: String,
    matrix: Vec<Vec<i64>>,
}

fn three_space(a: ThreeSpaceArgs) -> Result<Outcome> {
    let spec: HomSpec = serde_json::from_str(&a.hom).map_err(|e| Error::Parse(format!("--hom: {e}")))?;
    let source: FiniteGroup = spec.source.parse()?;
    let target: FiniteGroup = spec.target.parse()?;
    let f = Homomorphism::new(source.clone(), target.clone(), spec.matrix.clone())?;
    let set = source.parse_set(&a.set)?;
    let verdict = check_three_space(&f, &set)?;
    let echo = inputs(&[
        ("hom", json!({ "source": source.to_string(), "target": target.to_string(), "matrix": spec.matrix })),
        ("set", json!(join(&set))),
    ]);
    let points: Vec<_> = set.iter().cloned().collect();
    let report = certify_qc_dense(&source, &points)?;
    Ok(Outcome::new(echo, to_value(&verdict), verdict.holds).with_certificates(&report.certificates))
}

fn near_char(a: GroupSet) -> Result<Outcome> {
    let (g, set, echo) = parse_group_set(&a)?;
    let v = check_near_characterization(&g, &set)?;
    Ok(Outcome::new(echo, to_value(&v), v.equivalent))
}

fn determine(a: DetermineArgs) -> Result<Outcome> {
    if let Some(group) = a.group {
        let (g, sub, echo) = parse_group_set(&GroupSet { group, set: a.set })?;
        let determines = determines_finite(&g, &sub)?;
        let kernel = restriction_kernel(&g, &sub)?;
        let result = json!({
            "determines": determines,
            "subgroup_order": sub.len(),
            "group_order": g.checked_order()?,
            "restriction_kernel": strings(&kernel),
        });
        return Ok(Outcome::new(echo, result, determines));
    }
    let model: CompactModel = a.model.expect("clap requires group or model").parse()?;
    let witness: Vec<Point> = model.parse_points(&a.set)?;
    let gens: Vec<Point> = match &a.gens {
        Some(g) => model.parse_points(g)?,
        None => witness.clone(),
    };
    let arc: Option<Arc> = a.arc.as_deref().map(str::parse).transpose()?;
    let bound = a.bound.resolve(1);
    let v = determine_by_witness(&model, &gens, &witness, &bound, arc.as_ref())?;
    let echo = inputs(&[
        ("model", json!(model.to_string())),
        ("set", json!(join(&witness))),
        ("gens", json!(join(&gens))),
        ("arc", to_value(&arc)),
        ("char_bound", json!(bound.bound)),
        ("support", to_value(&a.bound.support)),
    ]);
    let result = json!({
        "positive": v.positive,
        "scope": to_value(&v.scope),
        "witness_set": strings(&v.witness_set),
        "kn_exponent": v.kn_exponent,
        "counterexample": to_value(&v.report.counterexample),
    });
    Ok(Outcome::new(echo, result, v.positive).with_certificates(&v.report.certificates).with_bound(&bound))
}

fn build_seq(a: BuildSeqArgs) -> Result<Outcome> {
    if let Some(group) = a.group {
        let g: FiniteGroup = group.parse()?;
        let out = build_determining_finite(&g)?;
        let echo = inputs(&[("group", json!(g.to_string()))]);
        let result = json!({
            "factor_sets": out.factor_sets.iter().map(join).collect::<Vec<_>>(),
            "sequence": strings(&out.set),
            "verified": out.report.verified(),
            "counterexample": to_value(&out.report.counterexample),
            "scope": to_value(&out.report.scope),
        });
        return Ok(Outcome::new(echo, result, out.report.verified()).with_certificates(&out.report.certificates));
    }
    let model: CompactModel = a.model.expect("clap requires group or model").parse()?;
    let cb = a.bound.resolve(match model {
        CompactModel::PAdic(_) => a.seq.levels as u64,
        _ => a.seq.seq_len.min(a.seq.levels as u64),
    });
    let pb = PipelineBounds { seq_len: a.seq.seq_len, levels: a.seq.levels, char_bound: cb.clone() };
    let (seq, report) = build_determining_supersequence::<i64>(&model, &pb)?;
    let echo = inputs(&[
        ("model", json!(model.to_string())),
        ("seq_len", json!(a.seq.seq_len)),
        ("levels", json!(a.seq.levels)),
        ("char_bound", json!(cb.bound)),
        ("support", to_value(&a.bound.support)),
    ]);
    let result = json!({
        "sequence": strings(&seq.points),
        "limit": seq.limit.to_string(),
        "verified": report.verified(),
        "characters_checked": report.characters_checked,
        "counterexample": to_value(&report.counterexample),
        "scope": to_value(&report.scope),
    });
    Ok(Outcome::new(echo, result, report.verified()).with_certificates(&report.certificates).with_bound(&cb))
}

fn search(group: &str, heuristic: bool) -> Result<Outcome> {
    let g: FiniteGroup = group.parse()?;
    let found = search_min_dense(&g, heuristic)?;
    let echo = inputs(&[("group", json!(g.to_string())), ("heuristic", json!(heuristic))]);
    let result = json!({
        "size": found.size,
        "subsets": found.subsets.iter().map(join).collect::<Vec<_>>(),
        "exhaustive": found.exhaustive,
    });
    Ok(Outcome::new(echo, result, true))
}

fn theorem1(dim: usize, set: &str, arc: &str, schedule: &[u64], csv: Option<&std::path::Path>) -> Result<Outcome> {
    let arc: Arc = arc.parse()?;
    let model = if dim == 1 {
        CompactModel::Torus
    } else {
        CompactModel::product(vec![CompactModel::Torus; dim])?
    };
    let parsed: Vec<Point> = model.parse_points(set)?;
    let points: Vec<Vec<Torus>> = parsed
        .iter()
        .map(|p| match p {
            Point::Torus(t) => vec![t.clone()],
            Point::Product(cs) => cs
                .iter()
                .map(|c| match c {
                    Point::Torus(t) => t.clone(),
                    _ => unreachable!("every factor is T"),
                })
                .collect(),
            Point::PAdic(_) => unreachable!("the model is a torus"),
        })
        .collect();
    let report = theorem1_experiment(dim, &points, &arc, schedule)?;
    if let Some(path) = csv {
        write_csv(path, &report).map_err(|e| Error::Parse(format!("--csv {}: {e}", path.display())))?;
    }
    let echo = inputs(&[
        ("dim", json!(dim)),
        ("set", json!(join(&parsed))),
        ("arc", json!(arc.to_string())),
        ("schedule", json!(schedule)),
    ]);
    let mut result = to_value(&report);
    result["exact_fractions"] = json!(report.rows.iter().map(row_fraction).collect::<Vec<_>>());
    let ok = report.stable && report.strictly_increasing;
    Ok(Outcome::new(echo, result, ok))
}

fn write_csv(path: &std::path::Path, report: &qcdense::determining::Theorem1Report) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["M", "count", "fraction"])?;
    for r in &report.rows {
        w.write_record([r.m.to_string(), r.count.to_string(), r.fraction.to_string()])?;
    }
    w.flush()
}
