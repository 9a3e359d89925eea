//! `graphci`: coherent-information calculations for noisy graph
//! states across a bipartition. Data (CSV) goes to stdout or `--out`;
//! diagnostics go to stderr. Exit codes: 0 ok, 1 validation mismatch,
//! 2 input error, 3 resource cap.

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphci::{
    classify, closedform, coherent_information_with_caps, oracle, repcode, BipartiteGraphState,
    Caps, Method, NoiseModel, Side, StructureVariant,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "graphci", version, about = "coherent information of noisy graph states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute I_A, I_B for one graph and one noise value.
    Compute(ComputeArgs),
    /// CSV sweep over a noise grid.
    Sweep(SweepArgs),
    /// Print the structure class of each side.
    Classify(GraphArgs),
    /// Validate the engine against the dense oracle and closed forms.
    OracleCheck(OracleCheckArgs),
    /// Repetition-code Bell-pair distillation rates.
    Repcode(RepcodeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    General,
    Closedform,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
    Both,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file: line 1 `nA nB`, then `u v` edges, `#` comments.
    #[arg(long, conflicts_with = "family")]
    graph: Option<std::path::PathBuf>,
    /// Named family: star, complete, rank2type1, rank2type2.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 1)]
    n_a: usize,
    #[arg(long, default_value_t = 1)]
    n_b: usize,
    /// First row-class size (rank-2 families).
    #[arg(long, default_value_t = 1)]
    n1: usize,
    /// Second row-class size (rank-2 families).
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Third row-class size (rank2type2 only).
    #[arg(long, default_value_t = 1)]
    n3: usize,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    side: SideArg,
    /// Cap on enumeration width (nonzero J columns).
    #[arg(long, default_value_t = 30)]
    max_nu: usize,
    /// Cap on generator count K.
    #[arg(long, default_value_t = 26)]
    max_k: usize,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, default_value_t = 0.0)]
    p_start: f64,
    #[arg(long, default_value_t = 1.0)]
    p_end: f64,
    /// Number of grid intervals; steps+1 rows are emitted.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Exhaustive over all connected biadjacencies with n <= max-n.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Additional random graphs at size random-n.
    #[arg(long, default_value_t = 0)]
    random_samples: usize,
    #[arg(long, default_value_t = 8)]
    random_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    p_start: f64,
    #[arg(long, default_value_t = 0.9)]
    p_end: f64,
    #[arg(long, default_value_t = 4)]
    steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Perturb one engine entropy to prove the harness can fail.
    #[arg(long, hide = true, default_value_t = false)]
    inject_fault: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepcodeVariant {
    BobOnly,
    All,
}

#[derive(Args)]
struct RepcodeArgs {
    /// Comma-separated odd repetition lengths.
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = RepcodeVariant::BobOnly)]
    variant: RepcodeVariant,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    p_start: f64,
    #[arg(long, default_value_t = 1.0)]
    p_end: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

enum CliError {
    Mismatch(String),
    Input(String),
    Cap(String),
    Io(std::io::Error),
}

impl From<graphci::Error> for CliError {
    fn from(e: graphci::Error) -> Self {
        match e {
            graphci::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Compute(a) => cmd_compute(&a),
        Cmd::Sweep(a) => cmd_sweep(&a),
        Cmd::Classify(a) => cmd_classify(&a),
        Cmd::OracleCheck(a) => cmd_oracle_check(&a),
        Cmd::Repcode(a) => cmd_repcode(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, msg) = match e {
                CliError::Mismatch(m) => (1, m),
                CliError::Input(m) => (2, m),
                CliError::Cap(m) => (3, m),
                CliError::Io(m) => (2, m.to_string()),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load_graph(a: &GraphArgs) -> Result<BipartiteGraphState, CliError> {
    if let Some(path) = &a.graph {
        let text = std::fs::read_to_string(path)?;
        return Ok(BipartiteGraphState::parse(&text)?);
    }
    let family = a
        .family
        .as_deref()
        .ok_or_else(|| CliError::Input("either --graph or --family is required".into()))?;
    let g = match family {
        "star" => BipartiteGraphState::star(a.n_a, a.n_b)?,
        "complete" => BipartiteGraphState::complete_bipartite(a.n_a, a.n_b)?,
        "rank2type1" => {
            let rows = pattern_type1(a.n_b.max(2));
            let rows: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
            BipartiteGraphState::block_graph(&[a.n1, a.n2], &vec![1; a.n_b.max(2)], &rows)?
        }
        "rank2type2" => {
            let rows = pattern_type2(a.n_b.max(2));
            let rows: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
            BipartiteGraphState::block_graph(
                &[a.n1, a.n2, a.n3],
                &vec![1; a.n_b.max(2)],
                &rows,
            )?
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown family '{other}' (expected star, complete, rank2type1, rank2type2)"
            )))
        }
    };
    Ok(g)
}

/// Row classes (10) and (01), padded with zero columns on wider B sides.
fn pattern_type1(n_b: usize) -> Vec<Vec<u8>> {
    let mut rows = vec![vec![0u8; n_b]; 2];
    rows[0][0] = 1;
    rows[1][1] = 1;
    rows
}

/// Row classes (10), (01) and their XOR (11).
fn pattern_type2(n_b: usize) -> Vec<Vec<u8>> {
    let mut rows = vec![vec![0u8; n_b]; 3];
    rows[0][0] = 1;
    rows[1][1] = 1;
    rows[2][0] = 1;
    rows[2][1] = 1;
    rows
}

fn sink(out: &Option<std::path::PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

const CSV_HEADER: &str = "P,H_A,H_B,H_AB,I_A,I_B,method";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid(p_start: f64, p_end: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(0.0..=1.0).contains(&p_start) || !(0.0..=1.0).contains(&p_end) || p_start > p_end {
        return Err(CliError::Input(format!(
            "invalid grid [{p_start}, {p_end}]"
        )));
    }
    Ok((0..=steps)
        .map(|i| {
            if steps == 0 {
                p_start
            } else {
                p_start + (p_end - p_start) * i as f64 / steps as f64
            }
        })
        .collect())
}

fn one_row(
    g: &BipartiteGraphState,
    p: f64,
    engine: &EngineArgs,
) -> Result<String, CliError> {
    let noise = NoiseModel::new(p)?;
    let caps = Caps {
        max_nu: engine.max_nu,
        max_k: engine.max_k,
    };
    let r = match engine.method {
        MethodArg::Oracle => oracle::oracle_ci(g, &noise)?.ci,
        MethodArg::Closedform => {
            require_closed_form(g, engine.side)?;
            let method = match engine.side {
                SideArg::Both => Method::ClosedForm,
                // closed form demanded on one side only; the other side
                // may fall back to the general engine
                _ => Method::Auto,
            };
            coherent_information_with_caps(g, &noise, method, &caps)?
        }
        MethodArg::Auto => coherent_information_with_caps(g, &noise, Method::Auto, &caps)?,
        MethodArg::General => {
            coherent_information_with_caps(g, &noise, Method::General, &caps)?
        }
    };
    Ok(format!(
        "{},{},{},{},{},{},{}",
        fmt(p),
        fmt(r.h_a),
        fmt(r.h_b),
        fmt(r.h_ab),
        fmt(r.i_a),
        fmt(r.i_b),
        r.method
    ))
}

fn require_closed_form(g: &BipartiteGraphState, side: SideArg) -> Result<(), CliError> {
    let sides: &[Side] = match side {
        SideArg::A => &[Side::A],
        SideArg::B => &[Side::B],
        SideArg::Both => &[Side::A, Side::B],
    };
    let gab = g.biadjacency();
    for &s in sides {
        let c = classify(&gab, s);
        if matches!(c.variant, StructureVariant::General { .. }) {
            return Err(CliError::Input(format!(
                "side {s} has no closed form ({})",
                c
            )));
        }
    }
    Ok(())
}

fn cmd_compute(a: &ComputeArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let row = one_row(&g, a.p, &a.engine)?;
    let mut out = sink(&a.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{row}")?;
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let ps = grid(a.p_start, a.p_end, a.steps)?;
    // compute every point before emitting so a late cap error cannot
    // leave a partial table behind
    let rows = ps
        .iter()
        .map(|&p| one_row(&g, p, &a.engine))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = sink(&a.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn cmd_classify(a: &GraphArgs) -> Result<(), CliError> {
    let g = load_graph(a)?;
    let gab = g.biadjacency();
    let mut out = std::io::stdout().lock();
    writeln!(out, "rank = {}", gab.rank())?;
    for side in [Side::A, Side::B] {
        writeln!(out, "{}", classify(&gab, side))?;
    }
    Ok(())
}

fn cmd_oracle_check(a: &OracleCheckArgs) -> Result<(), CliError> {
    if a.max_n > 12 {
        return Err(CliError::Input("--max-n must be <= 12".into()));
    }
    let ps = grid(a.p_start, a.p_end, a.steps)?;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    let fault = if a.inject_fault { 1e-6 } else { 0.0 };

    let mut check = |g: &BipartiteGraphState| -> Result<(), CliError> {
        for &p in &ps {
            let noise = NoiseModel::new(p)?;
            let (da, db) = oracle::engine_oracle_deviation(g, &noise)?;
            worst = worst.max(da + fault).max(db + fault);
            worst = worst.max(closed_form_deviation(g, p)?);
        }
        checked += 1;
        Ok(())
    };

    for n_a in 1..a.max_n {
        for n_b in 1..=(a.max_n - n_a) {
            for bits in 0u64..1 << (n_a * n_b) {
                let edges = (0..n_a)
                    .flat_map(|u| (0..n_b).map(move |v| (u, n_a + v)))
                    .enumerate()
                    .filter(|&(i, _)| (bits >> i) & 1 == 1)
                    .map(|(_, e)| e)
                    .collect::<Vec<_>>();
                if edges.is_empty() {
                    continue;
                }
                let g = BipartiteGraphState::new(n_a, n_b, edges)?;
                if g.is_connected() {
                    check(&g)?;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for _ in 0..a.random_samples {
        let n = a.random_n.min(12).max(2);
        let n_a = rng.gen_range(1..n);
        let n_b = n - n_a;
        let g = loop {
            let edges = (0..n_a)
                .flat_map(|u| (0..n_b).map(move |v| (u, n_a + v)))
                .filter(|_| rng.gen_bool(0.5))
                .collect::<Vec<_>>();
            if !edges.is_empty() {
                break BipartiteGraphState::new(n_a, n_b, edges)?;
            }
        };
        check(&g)?;
    }

    eprintln!(
        "oracle-check: {checked} graphs x {} noise values, worst |deviation| = {worst:.3e}",
        ps.len()
    );
    if worst >= a.tolerance {
        return Err(CliError::Mismatch(format!(
            "worst deviation {worst:.3e} exceeds tolerance {:.3e}",
            a.tolerance
        )));
    }
    println!("oracle-check: PASS (worst deviation {worst:.3e})");
    Ok(())
}

/// Deviation between closed-form side entropies (where the classifier
/// finds one) and the general engine.
fn closed_form_deviation(g: &BipartiteGraphState, p: f64) -> Result<f64, CliError> {
    let noise = NoiseModel::new(p)?;
    let caps = Caps::default();
    let general = coherent_information_with_caps(g, &noise, Method::General, &caps)?;
    let gab = g.biadjacency();
    let mut worst = 0.0f64;
    for (side, h_general) in [(Side::A, general.h_a), (Side::B, general.h_b)] {
        let c = classify(&gab, side);
        let extra = c.disconnected as f64 * graphci::binary_entropy(p);
        let h = match c.variant {
            StructureVariant::Rank1 { n_connected } => closedform::f1(n_connected, p) + extra,
            StructureVariant::Rank2Type1 { n1, n2 } => {
                closedform::rank2_type1_entropy(n1, n2, p) + extra
            }
            StructureVariant::Rank2Type2 { n1, n2, n3 } => {
                closedform::f2(n1, n2, n3, p) + extra
            }
            StructureVariant::General { .. } => continue,
        };
        worst = worst.max((h - h_general).abs());
    }
    Ok(worst)
}

fn cmd_repcode(a: &RepcodeArgs) -> Result<(), CliError> {
    let ps = match a.p {
        Some(p) => vec![p],
        None => grid(a.p_start, a.p_end, a.steps)?,
    };
    eprintln!(
        "repcode: p is the probability a qubit keeps |+> (p = 1 means noiseless)"
    );
    let mut rows = Vec::new();
    for &n in &a.n {
        for &p in &ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Input(format!("p = {p} out of range")));
            }
            let (lambda_plus, ci) = match a.variant {
                RepcodeVariant::BobOnly => {
                    let s = repcode::rep_code_state_bob_noise(n, p)?;
                    (s.lambda_plus, repcode::ci_bell(&s))
                }
                RepcodeVariant::All => {
                    let r = repcode::rep_code_all_noise(n, p)?;
                    (r.lambda_plus, r.ci)
                }
            };
            rows.push(format!("{n},{},{},{}", fmt(p), fmt(lambda_plus), fmt(ci)));
        }
    }
    let mut out = sink(&a.out)?;
    writeln!(out, "n,p,lambda_plus,CI")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}
