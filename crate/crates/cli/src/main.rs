use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use walkdet::census::{build_census, is_dgs_bruteforce, load_census, save_census, write_census, Census};
use walkdet::family::{build_family, scan_starters};
use walkdet::graph::{enumerate_graph_classes, graph6_decode, graph6_encode, ENUM_MAX_ORDER};
use walkdet::sachs::{char_poly_via_sachs, enumerate_elementary_subgraphs, SACHS_MAX_ORDER};
use walkdet::walk::{
    analyze, check_singular_extension, is_controllable, verify_complement_det, verify_principal_minors,
    verify_union_join_det, WalkReport,
};
use walkdet::{Graph, IntMatrix};

#[derive(Parser)]
#[command(name = "walkdet", version, about = "Exact walk-matrix and generalized-spectrum tools for small graphs")]
struct Cli {
    /// Emit JSON lines instead of tables
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for scanning commands (default: available parallelism)
    #[arg(long, global = true, value_name = "K")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Walk-matrix determinant report for each input graph
    Analyze(GraphInput),
    /// Check a determinant identity over all classes up to --n-max, or over the given graphs
    Verify(VerifyArgs),
    /// Build the alternating union/join family of each input graph
    Family {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Family parameters of every class of order --n
    ScanStarters {
        #[arg(long)]
        n: usize,
        /// Only connected graphs
        #[arg(long)]
        connected: bool,
    },
    /// Group every class of order --n by generalized spectrum
    Census {
        #[arg(long)]
        n: usize,
        /// Also write the census (JSON lines) to this file
        #[arg(long, value_name = "PATH")]
        census_file: Option<PathBuf>,
    },
    /// Brute-force test whether each input graph is determined by its generalized spectrum
    DgsCheck {
        #[command(flatten)]
        input: GraphInput,
        /// Precomputed census to look mates up in
        #[arg(long, value_name = "PATH")]
        census_file: Option<PathBuf>,
    },
    /// Characteristic polynomial coefficients from elementary subgraphs
    Sachs(GraphInput),
}

#[derive(Args)]
struct GraphInput {
    /// Graphs in graph6
    graphs: Vec<String>,
    /// File with one graph6 string per line
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Edge list "n; u v; u v; ..."
    #[arg(long, value_name = "LIST")]
    edges: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    /// Largest order checked exhaustively
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Random labeled graphs per order above --n-max
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Largest order for random samples
    #[arg(long, default_value_t = 10)]
    sample_n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    input: GraphInput,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    /// det W(complement) = (-1)^(n(n-1)/2) det W
    #[value(name = "2.1")]
    Complement,
    /// the same on every leading principal minor
    #[value(name = "2.2")]
    Minors,
    /// union and join with one new vertex
    #[value(name = "2.3")]
    UnionJoin,
    /// controllability of complements and one-vertex extensions
    #[value(name = "2.5")]
    Extension,
    /// elementary-subgraph coefficients against the characteristic polynomial
    #[value(name = "3.1")]
    Sachs,
    /// 2^floor(n/2) divides det W for n >= 6
    #[value(name = "3.2-div")]
    Divisibility,
}

impl Theorem {
    fn label(self) -> &'static str {
        match self {
            Theorem::Complement => "2.1",
            Theorem::Minors => "2.2",
            Theorem::UnionJoin => "2.3",
            Theorem::Extension => "2.5",
            Theorem::Sachs => "3.1",
            Theorem::Divisibility => "3.2-div",
        }
    }

    fn max_order(self) -> usize {
        match self {
            Theorem::Sachs => SACHS_MAX_ORDER,
            Theorem::UnionJoin | Theorem::Extension => walkdet::graph::MAX_ORDER - 1,
            _ => walkdet::graph::MAX_ORDER,
        }
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.workers {
        if k == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = Output { json: cli.json };
    let result = match cli.command {
        Command::Analyze(input) => cmd_analyze(&mut out, &input),
        Command::Verify(args) => cmd_verify(&mut out, &args),
        Command::Family { input, steps } => cmd_family(&mut out, &input, steps),
        Command::ScanStarters { n, connected } => cmd_scan_starters(&mut out, n, connected),
        Command::Census { n, census_file } => cmd_census(&mut out, n, census_file),
        Command::DgsCheck { input, census_file } => cmd_dgs_check(&mut out, &input, census_file),
        Command::Sachs(input) => cmd_sachs(&mut out, &input),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn record(&mut self, v: Value) {
        println!("{v}");
    }

    fn line(&mut self, s: impl Display) {
        println!("{s}");
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt<T: Display>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), |v| v.to_string())
}

impl GraphInput {
    fn is_empty(&self) -> bool {
        self.graphs.is_empty() && self.file.is_none() && self.edges.is_empty()
    }

    fn load(&self) -> Result<Vec<Graph>, Failure> {
        let mut out = Vec::new();
        for (k, s) in self.graphs.iter().enumerate() {
            let g = graph6_decode(s.as_bytes()).map_err(|e| format!("graph6 argument {} ({s:?}): {e}", k + 1))?;
            out.push(g);
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            for (k, line) in text.lines().enumerate() {
                let line = line.trim_end_matches('\r');
                if line.trim().is_empty() {
                    continue;
                }
                let g = graph6_decode(line.as_bytes()).map_err(|e| format!("{}:{}: {e}", path.display(), k + 1))?;
                out.push(g);
            }
        }
        for s in &self.edges {
            out.push(Graph::parse_edge_list(s).map_err(|e| format!("edge list {s:?}: {e}"))?);
        }
        Ok(out)
    }

    fn require(&self) -> Result<Vec<Graph>, Failure> {
        let graphs = self.load()?;
        if graphs.is_empty() {
            return Err(Failure::Usage("no input graphs (give graph6 strings, --file or --edges)".into()));
        }
        Ok(graphs)
    }
}

fn report_json(g: &Graph, r: &WalkReport) -> Value {
    let mut v = serde_json::to_value(r).expect("serializable");
    v["graph6"] = json!(graph6_encode(g));
    v
}

fn cmd_analyze(out: &mut Output, input: &GraphInput) -> CliResult {
    let graphs = input.require()?;
    if !out.json {
        out.line(format!(
            "{:<12} {:>3} {:>24} {:>4} {:>20} {:>12} {:>11} {:>9}",
            "graph6", "n", "det W", "v2", "det W / 2^[n/2]", "controllable", "condition C", "applies"
        ));
    }
    for g in &graphs {
        let r = analyze(g)?;
        if out.json {
            out.record(report_json(g, &r));
        } else {
            out.line(format!(
                "{:<12} {:>3} {:>24} {:>4} {:>20} {:>12} {:>11} {:>9}",
                graph6_encode(g),
                r.n,
                r.det_signed,
                opt(&r.v2),
                opt(&r.quotient),
                yes(r.controllable),
                yes(r.condition_c),
                yes(r.criterion_applicable)
            ));
        }
    }
    Ok(true)
}

/// Outcome of one identity check on one graph.
struct Outcome {
    ok: bool,
    detail: String,
    join_factor: Option<i32>,
    applicable: bool,
}

fn check_one(theorem: Theorem, g: &Graph) -> walkdet::Result<Outcome> {
    let mut o = Outcome {
        ok: true,
        detail: String::new(),
        join_factor: None,
        applicable: true,
    };
    match theorem {
        Theorem::Complement => {
            let c = verify_complement_det(g)?;
            o.ok = c.holds;
            o.detail = format!("det W(complement) = {}, expected {}", c.lhs, c.rhs);
        }
        Theorem::Minors => {
            for (k, c) in verify_principal_minors(g)? {
                if !c.holds {
                    o.ok = false;
                    o.detail = format!("k = {k}: {} vs {}", c.lhs, c.rhs);
                    break;
                }
            }
        }
        Theorem::UnionJoin => {
            let c = verify_union_join_det(g)?;
            o.ok = c.union_holds && c.join_abs_holds;
            o.join_factor = c.join_sign_factor;
            o.detail = format!(
                "union {} vs {}, join {} vs +-{}",
                c.union_lhs, c.union_rhs, c.join_lhs, c.join_abs_rhs
            );
        }
        Theorem::Extension => {
            let own = is_controllable(g)?;
            let comp = is_controllable(&g.complement())?;
            let ext = check_singular_extension(g)?;
            o.ok = own == comp && ext.holds();
            o.detail = format!("controllable {own}, complement controllable {comp}, extensions {ext:?}");
        }
        Theorem::Sachs => {
            let via = char_poly_via_sachs(g)?;
            let direct = IntMatrix::adjacency(g).char_poly();
            o.ok = via == direct;
            o.detail = format!("elementary subgraphs give {via}, determinant gives {direct}");
        }
        Theorem::Divisibility => {
            let r = analyze(g)?;
            o.applicable = r.criterion_applicable;
            o.ok = !r.criterion_applicable || r.divisible();
            o.detail = format!("det W = {} not divisible by 2^{}", r.det_signed, r.n / 2);
        }
    }
    Ok(o)
}

struct Batch {
    label: String,
    n: Option<usize>,
    graphs: Vec<Graph>,
}

fn cmd_verify(out: &mut Output, args: &VerifyArgs) -> CliResult {
    let theorem = args.theorem;
    let mut batches = Vec::new();
    if !args.input.is_empty() {
        batches.push(Batch {
            label: "input graphs".into(),
            n: None,
            graphs: args.input.require()?,
        });
    } else {
        if args.n_max > ENUM_MAX_ORDER {
            return Err(Failure::Usage(format!("--n-max {} exceeds {ENUM_MAX_ORDER}", args.n_max)));
        }
        let lo = if theorem == Theorem::Divisibility { 6 } else { 1 };
        for n in lo..=args.n_max {
            batches.push(Batch {
                label: "classes".into(),
                n: Some(n),
                graphs: enumerate_graph_classes(n, false)?,
            });
        }
        if args.samples > 0 {
            if args.sample_n_max > theorem.max_order() {
                return Err(Failure::Usage(format!(
                    "--sample-n-max {} exceeds {} for this check",
                    args.sample_n_max,
                    theorem.max_order()
                )));
            }
            for n in (args.n_max + 1).max(lo)..=args.sample_n_max {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                let graphs = (0..args.samples).map(|_| Graph::random(n, &mut rng)).collect::<walkdet::Result<_>>()?;
                batches.push(Batch {
                    label: format!("random graphs (seed {})", args.seed),
                    n: Some(n),
                    graphs,
                });
            }
        }
    }

    let mut total_failures = 0usize;
    for batch in &batches {
        let outcomes = batch
            .graphs
            .par_iter()
            .map(|g| check_one(theorem, g))
            .collect::<walkdet::Result<Vec<_>>>()?;
        let failing: Vec<(String, &str)> = batch
            .graphs
            .iter()
            .zip(&outcomes)
            .filter(|(_, o)| !o.ok)
            .map(|(g, o)| (graph6_encode(g), o.detail.as_str()))
            .collect();
        let checked = outcomes.iter().filter(|o| o.applicable).count();
        let mut factors: Vec<i32> = outcomes.iter().filter_map(|o| o.join_factor).collect();
        factors.sort_unstable();
        factors.dedup();
        let expected_factor = batch.n.map(|n| if n % 2 == 0 { 1 } else { -1 });
        total_failures += failing.len();

        if out.json {
            let mut v = json!({
                "theorem": theorem.label(),
                "source": batch.label,
                "n": batch.n,
                "checked": checked,
                "failures": failing.len(),
                "failing": failing.iter().map(|(g, _)| g).collect::<Vec<_>>(),
            });
            if theorem == Theorem::UnionJoin {
                v["join_sign_factors"] = json!(factors);
            }
            out.record(v);
        } else {
            let n = batch.n.map_or(String::new(), |n| format!("n = {n}: "));
            let mut line = format!("{n}{} failures / {checked} {}", failing.len(), batch.label);
            if theorem == Theorem::UnionJoin && !factors.is_empty() {
                let fs: Vec<String> = factors.iter().map(|f| format!("{f:+}")).collect();
                line += &format!("; join sign factor {}", fs.join(","));
                if let Some(e) = expected_factor {
                    line += if factors == [e] { " = (-1)^n" } else { " (not (-1)^n)" };
                }
            }
            out.line(line);
            for (g, detail) in &failing {
                out.line(format!("  FAIL {g}: {detail}"));
            }
        }
    }
    if !out.json {
        out.line(format!("theorem {}: {total_failures} failures", theorem.label()));
    }
    Ok(total_failures == 0)
}

fn cmd_family(out: &mut Output, input: &GraphInput, steps: usize) -> CliResult {
    let graphs = input.require()?;
    for (k, g0) in graphs.iter().enumerate() {
        let family = build_family(g0, steps).map_err(|e| match e {
            walkdet::Error::Mismatch(m) => Failure::Check(m),
            e => Failure::Usage(e.to_string()),
        })?;
        if out.json {
            for s in &family {
                out.record(serde_json::to_value(s.record()).expect("serializable"));
            }
            continue;
        }
        if k > 0 {
            out.line("");
        }
        out.line(format!(
            "{:>3} {:>3} {:>5}  {:<14} {:>22} {:>22} {:>11}",
            "i", "n", "op", "graph6", "predicted |det W|", "actual |det W|", "condition C"
        ));
        for s in &family {
            let c = if s.walk_report.criterion_applicable {
                yes(s.walk_report.condition_c).to_string()
            } else {
                format!("({})", yes(s.walk_report.condition_c))
            };
            out.line(format!(
                "{:>3} {:>3} {:>5}  {:<14} {:>22} {:>22} {:>11}",
                s.i,
                s.graph.order(),
                s.op_applied.to_string(),
                graph6_encode(&s.graph),
                s.predicted_abs_det,
                s.actual_abs_det,
                c
            ));
        }
    }
    Ok(true)
}

fn cmd_scan_starters(out: &mut Output, n: usize, connected: bool) -> CliResult {
    let records = scan_starters(n, connected)?;
    let controllable = records.iter().filter(|r| r.report.controllable).count();
    let starters = records.iter().filter(|r| r.verdict.starter).count();
    if out.json {
        for r in &records {
            out.record(json!({
                "graph6": r.graph6,
                "params": r.params,
                "report": r.report,
                "starter": r.verdict.starter,
                "reasons": r.verdict.reasons,
            }));
        }
        out.record(json!({
            "summary": { "n": n, "connected_only": connected, "classes": records.len(),
                         "controllable": controllable, "starters": starters }
        }));
        return Ok(true);
    }
    out.line(format!(
        "{:<12} {:>5} {:>16} {:>8} {:>8} {:>8} {:>12} {:>7}  reasons",
        "graph6", "edges", "|det W|", "a", "b", "p", "controllable", "starter"
    ));
    for r in &records {
        out.line(format!(
            "{:<12} {:>5} {:>16} {:>8} {:>8} {:>8} {:>12} {:>7}  {}",
            r.graph6,
            r.graph.edge_count(),
            r.report.det_abs,
            r.params.a,
            r.params.b,
            r.params.p,
            yes(r.report.controllable),
            yes(r.verdict.starter),
            r.verdict.reasons.join("; ")
        ));
    }
    let mut dets: Vec<String> = records
        .iter()
        .filter(|r| r.report.controllable)
        .map(|r| r.report.det_abs.to_string())
        .collect();
    dets.dedup();
    let mut multiset = Vec::new();
    for d in dets {
        let c = records
            .iter()
            .filter(|r| r.report.controllable && r.report.det_abs.to_string() == d)
            .count();
        multiset.push(format!("{d}x{c}"));
    }
    out.line(format!(
        "{} classes, {controllable} controllable, {starters} starters; |det W| of controllable: {{{}}}",
        records.len(),
        multiset.join(", ")
    ));
    Ok(true)
}

fn cmd_census(out: &mut Output, n: usize, census_file: Option<PathBuf>) -> CliResult {
    let census = build_census(n)?;
    if let Some(path) = &census_file {
        save_census(&census, path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if out.json {
        let stdout = std::io::stdout();
        write_census(&census, stdout.lock())?;
        return Ok(true);
    }
    let condition_c = census.records().iter().filter(|r| r.condition_c).count();
    out.line(format!("order {n}: {} isomorphism classes", census.records().len()));
    out.line(format!("fingerprint classes: {}", census.class_count()));
    out.line(format!("DGS: {}", census.dgs_count()));
    out.line(format!("condition C: {condition_c}"));
    let hist: Vec<String> = census
        .class_size_histogram()
        .iter()
        .map(|(size, count)| format!("{size}:{count}"))
        .collect();
    out.line(format!("class sizes (size:count): {}", hist.join(" ")));
    for (_, members) in census.classes().filter(|(_, m)| m.len() > 1) {
        let names: Vec<&str> = members.iter().map(|r| r.graph6.as_str()).collect();
        out.line(format!("  class {}: {}", members[0].class_id, names.join(" ")));
    }
    if let Some(path) = census_file {
        out.line(format!("written to {}", path.display()));
    }
    Ok(true)
}

fn cmd_dgs_check(out: &mut Output, input: &GraphInput, census_file: Option<PathBuf>) -> CliResult {
    let graphs = input.require()?;
    let census: Option<Census> = match &census_file {
        Some(p) => Some(load_census(p).map_err(|e| format!("{}: {e}", p.display()))?),
        None => None,
    };
    for g in &graphs {
        let v = is_dgs_bruteforce(g, census.as_ref())?;
        let mates: Vec<String> = v.mates.iter().map(graph6_encode).collect();
        if out.json {
            out.record(json!({
                "graph6": graph6_encode(g),
                "n": g.order(),
                "dgs": v.dgs,
                "method": v.method,
                "mates": mates,
            }));
        } else {
            let method = serde_json::to_value(&v.method).expect("serializable");
            out.line(format!(
                "{}  n = {}  DGS: {}  ({})  mates: {}",
                graph6_encode(g),
                g.order(),
                yes(v.dgs),
                method.as_str().unwrap_or_default(),
                if mates.is_empty() { "-".into() } else { mates.join(" ") }
            ));
        }
    }
    Ok(true)
}

fn cmd_sachs(out: &mut Output, input: &GraphInput) -> CliResult {
    let graphs = input.require()?;
    let mut all_ok = true;
    for (k, g) in graphs.iter().enumerate() {
        let via = char_poly_via_sachs(g)?;
        let direct = IntMatrix::adjacency(g).char_poly();
        let ok = via == direct;
        all_ok &= ok;
        let counts = (0..=g.order())
            .map(|i| enumerate_elementary_subgraphs(g, i).map(|v| v.len()))
            .collect::<walkdet::Result<Vec<_>>>()?;
        if out.json {
            out.record(json!({
                "graph6": graph6_encode(g),
                "coefficients": via,
                "elementary_subgraphs": counts,
                "char_poly": direct,
                "matches": ok,
            }));
            continue;
        }
        if k > 0 {
            out.line("");
        }
        out.line(format!("{}  n = {}", graph6_encode(g), g.order()));
        out.line(format!("{:>3} {:>12} {:>20}", "i", "subgraphs", "c_i"));
        for (i, c) in via.coeffs().iter().enumerate() {
            out.line(format!("{i:>3} {:>12} {c:>20}", counts[i]));
        }
        out.line(format!("polynomial: {via}"));
        out.line(format!("matches det(xI - A): {}", yes(ok)));
        if !ok {
            out.line(format!("  FAIL {}: det(xI - A) = {direct}", graph6_encode(g)));
        }
    }
    Ok(all_ok)
}
