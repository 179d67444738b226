use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use optitopo::generator::{generate_dataset, generate_position_matched_dataset, DatasetRecipe, Manifest, RecipeName, DEFAULT_THETA};
use optitopo::metrics::{metric_vector, read_metrics_csv, write_metrics_csv, MetricVector, NamedMetrics, NormalizationScheme};
use optitopo::selection::{
    pca_metric_correlation, pca_metric_correlation_csv, run_pipeline, select_subset, slice_csv, uniform_slice, wsd_slice,
    CandidatePools, KMeansConfig, Level, PipelineConfig, SvmConfig,
};
use optitopo::stats::{detect_outliers, diagnostics, pearson_matrix, summarize, validate_synthetic, StdConvention};
use optitopo::topology::io::{discover, read_topology_dir, write_topology_dir};
use optitopo::topology::{Provenance, Topology};
use rayon::prelude::*;

use crate::config::{pick, FileConfig, Format};
use crate::error::CliError;
use crate::output::{OutDir, Progress};
use crate::{Cli, Command};

struct Ctx {
    file: FileConfig,
    seed: u64,
    quiet: bool,
    force: bool,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let jobs = pick(cli.global.jobs, file.jobs, 0);
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let ctx = Ctx {
        seed: pick(cli.global.seed, file.seed, 0),
        quiet: cli.global.quiet || file.quiet.unwrap_or(false),
        force: cli.global.force,
        file,
    };
    match cli.command {
        Command::Ingest(a) => ingest(&ctx, &a.input, &a.out, a.audit_lengths),
        Command::Metrics(a) => metrics(&ctx, &a.input, &a.out, a.normalization, a.format),
        Command::Generate(a) => generate(&ctx, a),
        Command::Validate(a) => validate(&ctx, &a.real, &a.synthetic, &a.out, a.format),
        Command::Correlate(a) => correlate(&ctx, &a.select.input, &a.select.out, a.select.metrics, a.std_convention, a.format),
        Command::Outliers(a) => outliers(&ctx, &a.select.input, &a.select.out, a.select.metrics, a.format),
        Command::Cluster(a) => cluster(&ctx, a),
        Command::Select(a) => select(&ctx, &a.input, &a.out),
        Command::Slice(a) => slice(&ctx, a),
    }
}

fn require_dir(path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(CliError::input("cli::MissingInput", format!("{} is not a directory", path.display())))
    }
}

/// Generated trees carry a manifest; anything else is taken as real data.
fn provenance_of(root: &Path) -> Provenance {
    if root.join(Manifest::FILE_NAME).is_file() {
        Provenance::Synthetic
    } else {
        Provenance::Real
    }
}

/// Every topology under `root` with the directory it was found in.
fn load_corpus(root: &Path, progress: &Progress) -> Result<Vec<(PathBuf, Topology)>, CliError> {
    require_dir(root)?;
    let files = discover(root)?;
    if files.is_empty() {
        return Err(CliError::input("cli::EmptyCorpus", format!("no nodes_*/edges_* file pairs under {}", root.display())));
    }
    if let Some(w) = files.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(CliError::input(
            "cli::DuplicateTopology",
            format!("`{}` appears in both {} and {}", w[0].name, w[0].dir.display(), w[1].dir.display()),
        ));
    }
    let provenance = provenance_of(root);
    progress.note(&format!("loading={}", files.len()));
    files
        .par_iter()
        .map(|f| {
            let t = read_topology_dir(&f.dir, &f.name, provenance).map_err(|e| CliError {
                message: format!("{} ({}): {e}", f.name, f.dir.display()),
                ..e.into()
            })?;
            Ok((f.dir.clone(), t))
        })
        .collect()
}

fn topologies_only(corpus: Vec<(PathBuf, Topology)>) -> Vec<Topology> {
    corpus.into_iter().map(|(_, t)| t).collect()
}

fn load_metrics(path: &Path) -> Result<Vec<NamedMetrics>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut rows = read_metrics_csv(&bytes).map_err(|e| CliError {
        message: format!("{}: {e}", path.display()),
        ..e.into()
    })?;
    if rows.is_empty() {
        return Err(CliError::input("cli::EmptyCorpus", format!("{} has no rows", path.display())));
    }
    rows.sort_by(|a, b| a.topology.cmp(&b.topology));
    Ok(rows)
}

fn metric_names(flag: Option<Vec<String>>, file: &Option<Vec<String>>) -> Result<Vec<String>, CliError> {
    let names = flag
        .or_else(|| file.clone())
        .unwrap_or_else(|| MetricVector::FIELD_NAMES.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = names.iter().find(|n| !MetricVector::is_known_name(n)) {
        return Err(CliError::usage("UnknownMetric", format!("unknown metric `{bad}`")));
    }
    Ok(names)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn ingest(ctx: &Ctx, input: &Path, out: &Path, audit: bool) -> Result<(), CliError> {
    let progress = Progress::new("ingest", 0, ctx.quiet);
    let corpus = load_corpus(input, &progress)?;
    let out = OutDir::prepare_empty(out, ctx.force)?;
    let mut report = String::from("topology,nodes,edges,is_planar,has_bridge,is_biconnected,bridge_count");
    report.push_str(if audit { ",max_length_divergence\n" } else { "\n" });
    let mut audit_csv = String::from("topology,edge_id,stored_km,model_km,relative_divergence\n");
    let (mut planar, mut bridged, mut survivable) = (0, 0, 0);
    for (dir, t) in &corpus {
        let relative = dir.strip_prefix(input).unwrap_or(Path::new(""));
        write_topology_dir(&out.path().join(relative), t)?;
        let flags = t.structure_flags();
        planar += usize::from(flags.is_planar);
        bridged += usize::from(flags.has_bridge);
        survivable += usize::from(flags.is_biconnected);
        let _ = write!(
            report,
            "{},{},{},{},{},{},{}",
            t.name(),
            t.node_count(),
            t.edge_count(),
            flags.is_planar,
            flags.has_bridge,
            flags.is_biconnected,
            flags.bridge_count
        );
        if audit {
            let rows = t.length_audit();
            let worst = rows.iter().map(|r| r.relative_divergence).fold(0.0, f64::max);
            let _ = write!(report, ",{worst}");
            for r in rows {
                let _ = writeln!(audit_csv, "{},{},{},{},{}", t.name(), r.edge_id, r.stored_km, r.model_km, r.relative_divergence);
            }
        }
        report.push('\n');
    }
    out.write("ingest_report.csv", report.as_bytes())?;
    if audit {
        out.write("length_audit.csv", audit_csv.as_bytes())?;
    }
    println!("topologies={} planar={planar} with_bridge={bridged} biconnected={survivable}", corpus.len());
    Ok(())
}

fn metrics(ctx: &Ctx, input: &Path, out: &Path, scheme: Option<NormalizationScheme>, format: Option<Format>) -> Result<(), CliError> {
    let scheme = pick(scheme, ctx.file.normalization, NormalizationScheme::Standard);
    let format = pick(format, ctx.file.format, Format::Csv);
    let file = match format {
        Format::Csv => "metrics.csv",
        Format::Json => "metrics.json",
    };
    let out = OutDir::prepare(out, &[file], ctx.force)?;
    let loading = Progress::new("metrics", 0, ctx.quiet);
    let corpus = topologies_only(load_corpus(input, &loading)?);
    let progress = Progress::new("metrics", corpus.len(), ctx.quiet);
    let rows: Vec<NamedMetrics> = corpus
        .par_iter()
        .map(|t| {
            let m = metric_vector(t, scheme).map_err(|e| CliError {
                message: format!("{}: {e}", t.name()),
                ..e.into()
            });
            progress.tick();
            m.map(|metrics| NamedMetrics {
                topology: t.name().to_string(),
                metrics,
            })
        })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Csv => out.write(file, &write_metrics_csv(&rows))?,
        Format::Json => out.write_json(file, &rows)?,
    };
    println!("topologies={}", rows.len());
    Ok(())
}

fn generate(ctx: &Ctx, a: crate::GenerateArgs) -> Result<(), CliError> {
    let theta = pick(a.theta, ctx.file.theta, DEFAULT_THETA);
    if a.reference.is_some() != (a.recipe == RecipeName::PositionMatched) {
        return Err(CliError::usage("Reference", "--reference is required by, and only valid for, --recipe position-matched"));
    }
    let references = match &a.reference {
        Some(dir) => {
            let loading = Progress::new("generate", 0, ctx.quiet);
            let all = topologies_only(load_corpus(dir, &loading)?);
            let total = all.len();
            let kept: Vec<Topology> = all.into_iter().filter(|t| t.structure_flags().is_biconnected).collect();
            println!("references={} biconnected={}", total, kept.len());
            if kept.is_empty() {
                return Err(CliError::input("cli::NoBiconnectedReference", "no biconnected reference topology"));
            }
            kept
        }
        None => Vec::new(),
    };
    let out = OutDir::prepare_empty(&a.out, ctx.force)?;
    let manifest = match a.recipe {
        RecipeName::Small | RecipeName::Large => {
            let mut recipe = if a.recipe == RecipeName::Small { DatasetRecipe::small() } else { DatasetRecipe::large() };
            recipe.theta = theta;
            let progress = Progress::new("generate", recipe.cell_count(), ctx.quiet);
            generate_dataset(&recipe, out.path(), ctx.seed, &|_| progress.tick())
        }
        RecipeName::PositionMatched => {
            let replicates = pick(a.replicates, ctx.file.replicates, 100);
            let progress = Progress::new("generate", references.len() * replicates, ctx.quiet);
            generate_position_matched_dataset(&references, replicates, theta, out.path(), ctx.seed, &|_| progress.tick())
        }
    }
    .map_err(|e| CliError::io(out.path(), e))?;
    println!(
        "wrote {} topologies={} failed={}",
        out.path().join(Manifest::FILE_NAME).display(),
        manifest.entries.len() - manifest.failures(),
        manifest.failures()
    );
    if manifest.failures() > 0 {
        return Err(CliError::compute(
            "generator::CellFailures",
            format!("{} cells failed; see the manifest", manifest.failures()),
        ));
    }
    Ok(())
}

fn validate(ctx: &Ctx, real: &Path, synthetic: &Path, out: &Path, format: Option<Format>) -> Result<(), CliError> {
    let format = pick(format, ctx.file.format, Format::Csv);
    let file = match format {
        Format::Csv => "ks_validation.csv",
        Format::Json => "ks_validation.json",
    };
    let out = OutDir::prepare(out, &[file], ctx.force)?;
    let progress = Progress::new("validate", 0, ctx.quiet);
    let real = topologies_only(load_corpus(real, &progress)?);
    let synthetic = topologies_only(load_corpus(synthetic, &progress)?);
    let rows = validate_synthetic(&real, &synthetic)?;
    let mut csv = String::from("property,statistic,p_value,size_real,size_synthetic\n");
    for row in &rows {
        let r = row.result;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            row.property.label(),
            fmt_opt(r.map(|r| r.statistic)),
            fmt_opt(r.map(|r| r.p_value)),
            r.map_or(0, |r| r.size_a),
            r.map_or(0, |r| r.size_b)
        );
        println!(
            "{}: D={} p={}",
            row.property.label(),
            r.map_or("NA".into(), |r| r.statistic.to_string()),
            r.map_or("NA".into(), |r| r.p_value.to_string())
        );
    }
    match format {
        Format::Csv => out.write(file, csv.as_bytes())?,
        Format::Json => out.write_json(file, &rows)?,
    };
    Ok(())
}

fn correlate(
    ctx: &Ctx,
    input: &Path,
    out: &Path,
    names: Option<Vec<String>>,
    convention: Option<StdConvention>,
    format: Option<Format>,
) -> Result<(), CliError> {
    let names = metric_names(names, &ctx.file.metrics)?;
    let convention = pick(convention, ctx.file.std_convention, StdConvention::Population);
    let format = pick(format, ctx.file.format, Format::Csv);
    let files: &[&str] = match format {
        Format::Csv => &["summary.csv", "correlation_matrix.csv", "correlation_pairs.csv", "diagnostics.json"],
        Format::Json => &["summary.json", "correlation.json", "diagnostics.json"],
    };
    let out = OutDir::prepare(out, files, ctx.force)?;
    let corpus = load_metrics(input)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let summary = summarize(&corpus, &refs, convention)?;
    let report = pearson_matrix(&corpus, &refs)?;
    let diag = diagnostics(&corpus, &refs)?;
    match format {
        Format::Csv => {
            let mut csv = String::from("metric,mean,std,min,max\n");
            for r in &summary.rows {
                let _ = writeln!(csv, "{},{},{},{},{}", r.metric, r.mean, r.std, r.min, r.max);
            }
            out.write("summary.csv", csv.as_bytes())?;
            out.write("correlation_matrix.csv", &report.matrix_csv())?;
            out.write("correlation_pairs.csv", &report.long_csv())?;
        }
        Format::Json => {
            out.write_json("summary.json", &summary)?;
            out.write_json("correlation.json", &report)?;
        }
    }
    out.write_json("diagnostics.json", &diag)?;
    println!(
        "samples={} avg_abs_correlation={}",
        summary.samples,
        report.avg_abs_correlation.map_or("NA".into(), |v| v.to_string())
    );
    if !report.constant_metrics.is_empty() {
        println!("constant_metrics={}", report.constant_metrics.join(","));
    }
    Ok(())
}

fn outliers(ctx: &Ctx, input: &Path, out: &Path, names: Option<Vec<String>>, format: Option<Format>) -> Result<(), CliError> {
    let names = metric_names(names, &ctx.file.metrics)?;
    let format = pick(format, ctx.file.format, Format::Csv);
    let file = match format {
        Format::Csv => "outliers.csv",
        Format::Json => "outliers.json",
    };
    let out = OutDir::prepare(out, &[file], ctx.force)?;
    let corpus = load_metrics(input)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let report = detect_outliers(&corpus, &refs)?;
    match format {
        Format::Csv => out.write(file, &report.to_csv())?,
        Format::Json => out.write_json(file, &report)?,
    };
    println!("topologies={} outliers={}", report.rows.len(), report.outlier_count());
    Ok(())
}

fn pipeline_config(ctx: &Ctx, a: &crate::ClusterArgs) -> Result<PipelineConfig, CliError> {
    let f = &ctx.file;
    let base = PipelineConfig::default();
    let cfg = PipelineConfig {
        k_min: pick(a.k_min, f.k_min, base.k_min),
        k_max: pick(a.k_max, f.k_max, base.k_max),
        seed: ctx.seed,
        kmeans: KMeansConfig {
            restarts: pick(None, f.kmeans_restarts, base.kmeans.restarts),
            tolerance: pick(None, f.kmeans_tolerance, base.kmeans.tolerance),
            ..base.kmeans
        },
        svm: SvmConfig {
            c: pick(a.svm_c, f.svm_c, base.svm.c),
            aggregation: pick(a.margin_aggregation, f.margin_aggregation, base.svm.aggregation),
            duality_gap: pick(None, f.duality_gap, base.svm.duality_gap),
            ..base.svm
        },
        pools: CandidatePools::default(),
    };
    if cfg.k_min < 2 || cfg.k_min > cfg.k_max {
        return Err(CliError::usage("KRange", format!("need 2 <= k_min <= k_max, got {}..{}", cfg.k_min, cfg.k_max)));
    }
    if !(cfg.svm.c > 0.0 && cfg.svm.c.is_finite()) {
        return Err(CliError::usage("SvmC", format!("SVM C must be positive, got {}", cfg.svm.c)));
    }
    Ok(cfg)
}

fn cluster(ctx: &Ctx, a: crate::ClusterArgs) -> Result<(), CliError> {
    let cfg = pipeline_config(ctx, &a)?;
    let cluster_files: Vec<String> = Level::ALL.iter().map(|l| format!("clusters_{l}.csv")).collect();
    let mut files: Vec<&str> = cluster_files.iter().map(String::as_str).collect();
    files.extend([
        "pca_projection.csv",
        "margin_sweep.csv",
        "pca_metric_correlation.csv",
        "svc_boundaries.json",
        "selected_metrics.json",
    ]);
    let out = OutDir::prepare(&a.out, &files, ctx.force)?;
    let corpus = load_metrics(&a.input)?;
    let progress = Progress::new("cluster", 0, ctx.quiet);
    progress.note(&format!("topologies={} k={}..{}", corpus.len(), cfg.k_min, cfg.k_max));
    let report = run_pipeline(&corpus, &cfg)?;
    for level in Level::ALL {
        out.write(&format!("clusters_{level}.csv"), &report.clusters_csv(level))?;
    }
    out.write("pca_projection.csv", &report.projection_csv())?;
    out.write("margin_sweep.csv", &report.margin_sweep_csv())?;
    let combined = report.level(Level::Combined);
    let pc = pca_metric_correlation(&combined.projection, &corpus, MetricVector::FIELD_NAMES)?;
    out.write("pca_metric_correlation.csv", &pca_metric_correlation_csv(&pc))?;
    out.write_json("svc_boundaries.json", &report.boundaries_json())?;
    out.write_json("selected_metrics.json", &report.subsets)?;
    for level in &report.levels {
        let best = level.optimal();
        println!(
            "level={} metrics={} optimal_k={} accuracy={} margin={}",
            level.level,
            level.metrics.join("+"),
            best.k,
            best.svm_accuracy,
            best.svm_margin
        );
    }
    Ok(())
}

fn select(ctx: &Ctx, input: &Path, out: &Path) -> Result<(), CliError> {
    let out = OutDir::prepare(out, &["selected_metrics.json"], ctx.force)?;
    let corpus = load_metrics(input)?;
    let pools = CandidatePools::default();
    let choices = [Level::Structural, Level::Spatial, Level::Spectral]
        .into_iter()
        .map(|level| select_subset(&corpus, level, pools.pool(level).expect("category level")))
        .collect::<Result<Vec<_>, _>>()?;
    for c in &choices {
        println!(
            "level={} metrics={} pc12_ratio={} mean_abs_correlation={}",
            c.level,
            c.metrics.join("+"),
            c.two_component_ratio,
            c.mean_abs_correlation
        );
    }
    out.write_json("selected_metrics.json", &choices)?;
    Ok(())
}

fn slice(ctx: &Ctx, a: crate::SliceArgs) -> Result<(), CliError> {
    let f = &ctx.file;
    let clusters = pick(a.wsd_clusters, f.wsd_clusters, 3);
    let size_bins = pick(a.size_bins, f.size_bins, 3);
    let path_bins = pick(a.path_bins, f.path_bins, 3);
    if clusters == 0 || size_bins == 0 || path_bins == 0 {
        return Err(CliError::usage("SliceBins", "cluster and bin counts must be positive"));
    }
    let out = OutDir::prepare(&a.out, &["wsd_slice.csv", "uniform_slice.csv"], ctx.force)?;
    let corpus = load_metrics(&a.input)?;
    let rows = wsd_slice(&corpus, clusters, ctx.seed)?;
    let picked: Vec<_> = uniform_slice(&rows, size_bins, path_bins, ctx.seed).into_iter().map(|i| rows[i].clone()).collect();
    out.write("wsd_slice.csv", &slice_csv(&rows))?;
    out.write("uniform_slice.csv", &slice_csv(&picked))?;
    println!("topologies={} slice={}", rows.len(), picked.len());
    Ok(())
}

