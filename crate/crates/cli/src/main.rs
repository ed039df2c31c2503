//! `corona`: build, grow, profile and fit signed corona graphs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use corona_core::corona::{balance_of_corona, corona_product, predicted_stats};
use corona_core::growth::{
    algebraic_conflict, branch_spectrum, degree_distribution, grow, trace, BranchSpectrum,
    ConflictMethod, GrowthTrace, DEFAULT_NODE_BUDGET, DEFAULT_ORACLE_NODE_CAP,
};
use corona_core::ingest::{
    network_profile, parse_signed_edge_list, ConflictRule, NetworkProfile,
    DEFAULT_SPECTRAL_BUDGET,
};
use corona_core::seedfit::{recommend_seed, FitOptions, FitOutcome, FitTarget};
use corona_core::sgio;
use corona_core::spectra::{oracle_spectrum, MatrixKind, SpectrumReport};
use corona_core::{MarkingScheme, MarkingVector, SignedGraph};

#[derive(Parser)]
#[command(
    name = "corona",
    version,
    about = "Signed corona graphs: products, growth, spectra, profiles and seed fitting"
)]
struct Cli {
    /// Worker threads (default: all available). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MarkingArg {
    Canonical,
    Plurality,
}

impl MarkingArg {
    fn vector(self, g: &SignedGraph) -> MarkingVector {
        match self {
            MarkingArg::Canonical => MarkingVector::canonical(g),
            MarkingArg::Plurality => MarkingVector::plurality(g),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Adjacency,
    Laplacian,
    Signless,
}

impl From<KindArg> for MatrixKind {
    fn from(kind: KindArg) -> MatrixKind {
        match kind {
            KindArg::Adjacency => MatrixKind::Adjacency,
            KindArg::Laplacian => MatrixKind::Laplacian,
            KindArg::Signless => MatrixKind::Signless,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Snap,
    Sg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConflictArg {
    Neg,
    Pos,
    Drop,
}

impl From<ConflictArg> for ConflictRule {
    fn from(rule: ConflictArg) -> ConflictRule {
        match rule {
            ConflictArg::Neg => ConflictRule::Negative,
            ConflictArg::Pos => ConflictRule::Positive,
            ConflictArg::Drop => ConflictRule::Drop,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Corona product of two signed graphs.
    Product(ProductArgs),
    /// Grow a seed graph by iterated corona products.
    Grow(GrowArgs),
    /// Exact per-step counters and closed forms for a grown seed.
    Trace(TraceArgs),
    /// Eigenvalues by closed form or by the dense oracle.
    Spectrum(SpectrumArgs),
    /// Algebraic conflict (least signed Laplacian eigenvalue) of a grown seed.
    Conflict(ConflictCmdArgs),
    /// Profile a signed edge list: counts, triad census, balance.
    Census(CensusArgs),
    /// Search for seed graphs matching a target profile.
    Fit(FitArgs),
    /// Signed degree distribution of a grown seed.
    DegreeDist(DegreeDistArgs),
}

#[derive(Args)]
struct ProductArgs {
    /// First factor (.sg file).
    #[arg(long)]
    g1: PathBuf,
    /// Second factor (.sg file).
    #[arg(long)]
    g2: PathBuf,
    /// Marking scheme applied to both factors.
    #[arg(long, value_enum, default_value = "canonical")]
    marking: MarkingArg,
    /// Output .sg path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GrowArgs {
    /// Seed graph (.sg file); must be connected.
    #[arg(long)]
    seed: PathBuf,
    /// Number of corona steps.
    #[arg(long)]
    steps: usize,
    /// Write the grown graph to this .sg path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-step trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    seed: PathBuf,
    #[arg(long)]
    steps: usize,
    /// Write the trace as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["graph", "g1"]))]
struct SpectrumArgs {
    /// Single input graph: oracle target, or the seed for closed-form
    /// Laplacian spectra when --steps is given.
    #[arg(long, conflicts_with_all = ["g1", "g2"])]
    graph: Option<PathBuf>,
    /// First corona factor for two-graph closed forms.
    #[arg(long, requires = "g2")]
    g1: Option<PathBuf>,
    /// Second corona factor.
    #[arg(long, requires = "g1")]
    g2: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "oracle")]
    method: MethodArg,
    /// Growth steps for the single-graph closed form.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value = "canonical")]
    marking: MarkingArg,
    /// Write the spectrum as JSON ({value, multiplicity, provenance}).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ConflictCmdArgs {
    #[arg(long)]
    seed: PathBuf,
    #[arg(long)]
    steps: usize,
    /// Node cap for the dense-oracle fallback.
    #[arg(long, default_value_t = DEFAULT_ORACLE_NODE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    /// Edge-list file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "snap")]
    format: FormatArg,
    /// Resolution for pairs reported with both signs (snap format).
    #[arg(long, value_enum, default_value = "neg")]
    conflict: ConflictArg,
    /// Node cap for computing the algebraic conflict of the profile.
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_BUDGET)]
    spectral_budget: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Target profile JSON (as written by `corona census`).
    #[arg(long)]
    target: PathBuf,
    #[arg(long, default_value_t = 9)]
    n_max: usize,
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    /// Restrict the search to the constrained seed family.
    #[arg(long)]
    constrained: bool,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Componentwise tolerance for flagging candidates as within target.
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    /// Seed value for the randomized part of the search.
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
    /// Directory for the recommended seeds and the ranking JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DegreeDistArgs {
    #[arg(long)]
    seed: PathBuf,
    #[arg(long)]
    steps: usize,
    /// Write `d_plus,d_minus,count` rows.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_graph(path: &Path) -> Result<SignedGraph> {
    sgio::read_sg_path(path).with_context(|| format!("reading {}", path.display()))
}

fn node_budget() -> usize {
    std::env::var("CORONA_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value)?;
    Ok(())
}

fn trace_json(traced: &GrowthTrace) -> serde_json::Value {
    let steps: Vec<serde_json::Value> = traced
        .steps
        .iter()
        .map(|s| {
            serde_json::json!({
                "step": s.step,
                "nodes": s.nodes.to_string(),
                "n_plus": s.n_plus.to_string(),
                "n_minus": s.n_minus.to_string(),
                "edges": s.edges.to_string(),
                "e_plus": s.e_plus.to_string(),
                "e_minus": s.e_minus.to_string(),
                "t0": s.triads[0].to_string(),
                "t1": s.triads[1].to_string(),
                "t2": s.triads[2].to_string(),
                "t3": s.triads[3].to_string(),
            })
        })
        .collect();
    serde_json::json!({
        "n": traced.seed.n,
        "k": traced.seed.k,
        "m": traced.m,
        "k1": traced.k1.to_string(),
        "k2": traced.k2.to_string(),
        "k3": traced.k3.to_string(),
        "p_e_plus": traced.p_e_plus(),
        "p_t": traced.triad_fractions(),
        "steps": steps,
    })
}

fn report_json(report: &SpectrumReport) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = report
        .entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "value": e.value,
                "multiplicity": e.multiplicity,
                "provenance": e.provenance.to_string(),
            })
        })
        .collect();
    serde_json::json!({
        "kind": report.matrix_kind.to_string(),
        "order": report.order,
        "complete": report.complete,
        "residual_multiplicity": report.residual_multiplicity,
        "entries": entries,
        "warnings": report.warnings,
    })
}

fn branch_json(spectrum: &BranchSpectrum) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = spectrum
        .entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "value": e.value,
                "multiplicity": e.multiplicity.to_string(),
                "provenance": format!(
                    "{}[j={},word={}]",
                    match e.clause {
                        corona_core::growth::BranchClause::SeedEigenvalue => "seed-eigenvalue",
                        corona_core::growth::BranchClause::InjectedIterated => "injected-iterated",
                        corona_core::growth::BranchClause::Injected => "injected",
                    },
                    e.source,
                    if e.branch_word.is_empty() { "." } else { &e.branch_word },
                ),
            })
        })
        .collect();
    serde_json::json!({
        "kind": "laplacian",
        "order": spectrum.order.to_string(),
        "complete": true,
        "entries": entries,
    })
}

fn print_report_summary(report: &SpectrumReport) {
    println!(
        "{} spectrum: order {}, {} entries ({} of {} eigenvalues), complete: {}",
        report.matrix_kind,
        report.order,
        report.entries.len(),
        report.total_multiplicity(),
        report.order,
        report.complete
    );
    if let Some(min) = report.min_value() {
        println!("least value: {min:.9}");
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Product(args) => {
            let g1 = load_graph(&args.g1)?;
            let g2 = load_graph(&args.g2)?;
            let mu1 = args.marking.vector(&g1);
            let mu2 = args.marking.vector(&g2);
            let product = corona_product(&g1, &mu1, &g2, &mu2)?;
            let stats = predicted_stats(&g1, &mu1, &g2, &mu2)?;
            let classification = balance_of_corona(&g1, &mu1, &g2, &mu2)?;
            sgio::write_sg_path(&product, &args.out)?;
            println!(
                "product: {} nodes, {} edges ({} positive, {} negative), triads {:?}, {}",
                stats.nodes,
                stats.edges,
                stats.positive_edges,
                stats.negative_edges,
                stats.triads,
                if classification.is_balanced() {
                    "balanced"
                } else {
                    "unbalanced"
                },
            );
            println!("wrote {}", args.out.display());
        }
        Command::Grow(args) => {
            let seed = load_graph(&args.seed)?;
            let traced = trace(&seed, args.steps, MarkingScheme::Canonical)?;
            let last = traced.final_step();
            println!(
                "G^({}) from a {}-node seed: {} nodes, {} edges, p(E+) {:.4}, p(T) {:?}",
                args.steps,
                seed.node_count(),
                last.nodes,
                last.edges,
                traced.p_e_plus(),
                traced.triad_fractions(),
            );
            if let Some(path) = &args.trace {
                write_json(path, &trace_json(&traced))?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = &args.out {
                let grown = grow(&seed, args.steps, node_budget())?;
                sgio::write_sg_path(&grown.graph, path)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Trace(args) => {
            let seed = load_graph(&args.seed)?;
            let traced = trace(&seed, args.steps, MarkingScheme::Canonical)?;
            println!("step nodes edges e+ e- t0 t1 t2 t3");
            for s in &traced.steps {
                println!(
                    "{} {} {} {} {} {} {} {} {}",
                    s.step,
                    s.nodes,
                    s.edges,
                    s.e_plus,
                    s.e_minus,
                    s.triads[0],
                    s.triads[1],
                    s.triads[2],
                    s.triads[3]
                );
            }
            if let Some(path) = &args.json {
                write_json(path, &trace_json(&traced))?;
                println!("wrote {}", path.display());
            }
        }
        Command::Spectrum(args) => run_spectrum(args)?,
        Command::Conflict(args) => {
            let seed = load_graph(&args.seed)?;
            let report = algebraic_conflict(&seed, args.steps, args.oracle_cap)?;
            let method = match report.method {
                ConflictMethod::BranchSpectrum => "branch-spectrum".to_string(),
                ConflictMethod::Oracle { nodes } => format!("oracle({nodes} nodes)"),
            };
            println!(
                "algebraic conflict of G^({}) = {:.9} (seed {:.9}, method {method})",
                report.steps, report.conflict, report.seed_conflict
            );
            println!(
                "conflict(G^(m)) = conflict(seed) + 1 holds here: {}",
                report.conjecture_plus_one_holds
            );
            if let Some(path) = &args.json {
                write_json(
                    path,
                    &serde_json::json!({
                        "steps": report.steps,
                        "conflict": report.conflict,
                        "seed_conflict": report.seed_conflict,
                        "conjecture_plus_one_holds": report.conjecture_plus_one_holds,
                        "method": method,
                    }),
                )?;
                println!("wrote {}", path.display());
            }
        }
        Command::Census(args) => {
            let profile = match args.format {
                FormatArg::Snap => {
                    let file = File::open(&args.file)
                        .with_context(|| format!("opening {}", args.file.display()))?;
                    let report =
                        parse_signed_edge_list(BufReader::new(file), args.conflict.into())?;
                    if report.sign_conflicts > 0 {
                        eprintln!(
                            "note: {} pairs reported with both signs, {} duplicates collapsed, \
                             {} self-loops dropped",
                            report.sign_conflicts,
                            report.duplicates_collapsed,
                            report.self_loops_dropped
                        );
                    }
                    let label = args
                        .file
                        .file_stem()
                        .map(|s| s.to_string_lossy().to_string())
                        .unwrap_or_default();
                    network_profile(&report.graph, &label, args.spectral_budget)
                }
                FormatArg::Sg => {
                    let g = load_graph(&args.file)?;
                    let label = args
                        .file
                        .file_stem()
                        .map(|s| s.to_string_lossy().to_string())
                        .unwrap_or_default();
                    network_profile(&g, &label, args.spectral_budget)
                }
            };
            print_profile(&profile);
            if let Some(path) = &args.json {
                write_json(path, &serde_json::to_value(&profile)?)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Fit(args) => run_fit(args)?,
        Command::DegreeDist(args) => {
            let seed = load_graph(&args.seed)?;
            let classes = degree_distribution(&seed, args.steps)?;
            let mut out: Box<dyn Write> = match &args.csv {
                Some(path) => Box::new(BufWriter::new(
                    File::create(path).with_context(|| format!("creating {}", path.display()))?,
                )),
                None => Box::new(std::io::stdout().lock()),
            };
            writeln!(out, "d_plus,d_minus,count")?;
            for class in &classes {
                writeln!(out, "{},{},{}", class.d_plus, class.d_minus, class.count)?;
            }
            drop(out);
            if let Some(path) = &args.csv {
                println!("wrote {} classes to {}", classes.len(), path.display());
            }
        }
    }
    Ok(())
}

fn run_spectrum(args: SpectrumArgs) -> Result<()> {
    let kind: MatrixKind = args.kind.into();
    let json = match (args.method, &args.graph, &args.g1) {
        (MethodArg::Oracle, Some(path), _) => {
            let g = load_graph(path)?;
            let report = oracle_spectrum(&g, kind)?;
            print_report_summary(&report);
            report_json(&report)
        }
        (MethodArg::ClosedForm, Some(path), _) => {
            let Some(steps) = args.steps else {
                bail!("closed-form spectra of a single graph need --steps (the graph is the seed)");
            };
            if !matches!(kind, MatrixKind::Laplacian) {
                bail!("single-graph closed forms exist for --kind laplacian only");
            }
            let seed = load_graph(path)?;
            let spectrum = branch_spectrum(&seed, steps)?;
            println!(
                "laplacian spectrum of G^({steps}): order {}, {} entries, least value {:.9}",
                spectrum.order,
                spectrum.entries.len(),
                spectrum.min_value()
            );
            branch_json(&spectrum)
        }
        (method, None, Some(_)) => {
            let g1 = load_graph(args.g1.as_ref().unwrap())?;
            let g2 = load_graph(args.g2.as_ref().unwrap())?;
            let mu1 = args.marking.vector(&g1);
            let mu2 = args.marking.vector(&g2);
            let report = match method {
                MethodArg::Oracle => {
                    let product = corona_product(&g1, &mu1, &g2, &mu2)?;
                    oracle_spectrum(&product, kind)?
                }
                MethodArg::ClosedForm => closed_form_product_spectrum(kind, &g1, &mu1, &g2, &mu2)?,
            };
            print_report_summary(&report);
            report_json(&report)
        }
        _ => bail!("pass either --graph or both --g1 and --g2"),
    };
    if let Some(path) = &args.json {
        write_json(path, &json)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn closed_form_product_spectrum(
    kind: MatrixKind,
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport> {
    use corona_core::spectra::{
        adjacency_spectrum_corona, laplacian_equal_negdeg_spectrum, laplacian_secular_spectrum,
        signless_equal_posdeg_spectrum, signless_secular_spectrum,
    };
    let report = match kind {
        MatrixKind::Adjacency => adjacency_spectrum_corona(g1, mu1, g2, mu2)?,
        MatrixKind::Laplacian => {
            if g2.constant_negative_degree().is_some() {
                laplacian_equal_negdeg_spectrum(g1, mu1, g2, mu2)?
            } else {
                laplacian_secular_spectrum(g1, mu1, g2, mu2)?
            }
        }
        MatrixKind::Signless => {
            let flipped = g2.flip_signs();
            if flipped.constant_negative_degree().is_some() {
                signless_equal_posdeg_spectrum(g1, mu1, g2, mu2)?
            } else {
                signless_secular_spectrum(g1, mu1, g2, mu2)?
            }
        }
        MatrixKind::General => unreachable!(),
    };
    Ok(report)
}

fn print_profile(profile: &NetworkProfile) {
    println!(
        "{}: {} nodes, {} edges ({} positive), p(E+) {:.4}",
        profile.label, profile.nodes, profile.edges, profile.positive_edges, profile.p_e_plus
    );
    println!(
        "triads {:?}, p(T) [{:.4}, {:.4}, {:.4}, {:.4}], {}",
        profile.triads,
        profile.p_t[0],
        profile.p_t[1],
        profile.p_t[2],
        profile.p_t[3],
        if profile.balanced {
            "balanced"
        } else {
            "unbalanced"
        },
    );
    if let Some(conflict) = profile.algebraic_conflict {
        println!("algebraic conflict {conflict:.9}");
    }
}

fn run_fit(args: FitArgs) -> Result<()> {
    let file = File::open(&args.target)
        .with_context(|| format!("opening {}", args.target.display()))?;
    let profile: NetworkProfile = serde_json::from_reader(BufReader::new(file))
        .context("target must be a profile JSON as written by `corona census`")?;
    let target = FitTarget {
        desired_nodes: profile.nodes,
        p_e_plus: profile.p_e_plus,
        p_t: profile.p_t,
        tolerance: args.tolerance,
        n_max: args.n_max,
        m_max: args.m_max,
    };
    let opts = FitOptions {
        constrained: args.constrained,
        top: args.top,
        rng_seed: args.rng_seed,
        ..FitOptions::default()
    };
    match recommend_seed(&target, &opts)? {
        FitOutcome::Infeasible { nearest } => {
            let detail = nearest
                .map(|(n, m, d)| format!("closest is n={n}, m={m} at distance {d}"))
                .unwrap_or_default();
            bail!(
                "no (n, m) with n <= {} and m <= {} lands within 2x of {} nodes; {detail}",
                args.n_max,
                args.m_max,
                profile.nodes
            );
        }
        FitOutcome::Candidates(candidates) => {
            std::fs::create_dir_all(&args.out)
                .with_context(|| format!("creating {}", args.out.display()))?;
            let mut ranking = Vec::new();
            println!("rank  n  m  score     nodes      p(E+)   p(T)");
            for (idx, candidate) in candidates.iter().enumerate() {
                let file_name = format!("seed_{:02}.sg", idx + 1);
                sgio::write_sg_path(&candidate.seed, args.out.join(&file_name))?;
                println!(
                    "{:>4}  {}  {}  {:.5}  {:>9}  {:.4}  [{:.3}, {:.3}, {:.3}, {:.3}]",
                    idx + 1,
                    candidate.seed.node_count(),
                    candidate.m,
                    candidate.score,
                    candidate.profile.nodes,
                    candidate.profile.p_e_plus,
                    candidate.profile.p_t[0],
                    candidate.profile.p_t[1],
                    candidate.profile.p_t[2],
                    candidate.profile.p_t[3],
                );
                ranking.push(serde_json::json!({
                    "rank": idx + 1,
                    "file": file_name,
                    "seed_nodes": candidate.seed.node_count(),
                    "m": candidate.m,
                    "score": candidate.score,
                    "nodes": candidate.profile.nodes,
                    "edges": candidate.profile.edges,
                    "p_e_plus": candidate.profile.p_e_plus,
                    "p_t": candidate.profile.p_t,
                    "within_tolerance": candidate.within_tolerance,
                }));
            }
            write_json(&args.out.join("ranking.json"), &serde_json::json!(ranking))?;
            println!(
                "wrote {} seeds and ranking.json to {}",
                candidates.len(),
                args.out.display()
            );
        }
    }
    Ok(())
}
