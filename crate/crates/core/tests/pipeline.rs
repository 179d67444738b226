use optitopo::generator::{generate, GenerationSpec};
use optitopo::geodesy::RegionLabel;
use optitopo::metrics::{corpus_metrics, MetricVector, NamedMetrics, NormalizationScheme};
use optitopo::selection::{run_level, run_pipeline, Level, PipelineConfig};
use optitopo::stats::validate_synthetic;
use optitopo::topology::Topology;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synthetic_corpus(count: u64) -> Vec<Topology> {
    (0..count)
        .map(|i| {
            let n = 10 + (i as usize * 7) % 60;
            let d = [1.2, 2.0, 3.2, 4.4][i as usize % 4];
            let region = RegionLabel::ALL[i as usize % 3];
            generate(&format!("s{i:03}"), &GenerationSpec::new(n, d, region, i)).unwrap().0
        })
        .collect()
}

fn named(corpus: &[Topology]) -> Vec<NamedMetrics> {
    corpus_metrics(corpus, NormalizationScheme::Standard)
        .into_iter()
        .map(|(topology, m)| NamedMetrics {
            topology,
            metrics: m.unwrap(),
        })
        .collect()
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

#[test]
fn pipeline_shape_determinism_and_rescaling() {
    let corpus = named(&synthetic_corpus(45));
    let cfg = PipelineConfig::default();
    let report = run_pipeline(&corpus, &cfg).unwrap();
    assert_eq!(report.levels.len(), 4);
    for level in &report.levels {
        assert_eq!(level.sweep.iter().map(|r| r.k).collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        for r in &level.sweep {
            assert!(r.labels.iter().all(|&l| l < r.k));
            assert!((0.0..=1.0).contains(&r.svm_accuracy) && r.svm_margin.is_finite());
        }
        let best = level.optimal();
        assert!(level.sweep.iter().all(|r| r.svm_margin <= best.svm_margin));
        assert!((level.pca.explained_variance_ratio.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    assert_eq!(report.level(Level::Combined).metrics.len(), 9);
    assert_eq!(report, run_pipeline(&corpus, &cfg).unwrap());

    let sweep = String::from_utf8(report.margin_sweep_csv()).unwrap();
    assert_eq!(sweep.lines().count(), 1 + 5 * 4);
    let clusters = String::from_utf8(report.clusters_csv(Level::Combined)).unwrap();
    assert_eq!(clusters.lines().count(), 1 + corpus.len());

    // positive affine rescaling of every raw column
    let rescaled: Vec<NamedMetrics> = corpus
        .iter()
        .map(|r| {
            let values: Vec<f64> = r.metrics.values().iter().enumerate().map(|(j, v)| v * (j as f64 + 2.0) + 7.0).collect();
            NamedMetrics {
                topology: r.topology.clone(),
                metrics: MetricVector::from_values(&values).unwrap(),
            }
        })
        .collect();
    // derived ratios are not affine in the raw fields, so compare fixed sets
    for level in &report.levels {
        if level.metrics.iter().any(|m| !MetricVector::FIELD_NAMES.contains(&m.as_str())) {
            continue;
        }
        let again = run_level(&rescaled, level.level, &level.metrics, &cfg).unwrap();
        for (a, b) in level.sweep.iter().zip(&again.sweep) {
            assert!(same_partition(&a.labels, &b.labels), "{} k={}", level.level, a.k);
            assert_eq!(a.svm_accuracy, b.svm_accuracy);
        }
    }
}

#[test]
fn three_separated_groups_pick_three_clusters() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let centres = [[0.0, 0.0, 0.0], [10.0, 0.0, 5.0], [0.0, 10.0, -5.0]];
    let corpus: Vec<NamedMetrics> = (0..90)
        .map(|i| {
            let c = centres[i / 30];
            NamedMetrics {
                topology: format!("b{i:02}"),
                metrics: MetricVector {
                    normalized_spectral_radius: c[0] + rng.gen_range(-0.5..0.5),
                    normalized_algebraic_connectivity: c[1] + rng.gen_range(-0.5..0.5),
                    normalized_wsd: c[2] + rng.gen_range(-0.5..0.5),
                    ..Default::default()
                },
            }
        })
        .collect();
    let names: Vec<String> = ["normalized_spectral_radius", "normalized_algebraic_connectivity", "normalized_wsd"]
        .map(String::from)
        .to_vec();
    let level = run_level(&corpus, Level::Spectral, &names, &PipelineConfig::default()).unwrap();
    assert_eq!(level.optimal_k, 3);
    assert_eq!(level.optimal().svm_accuracy, 1.0);
    let truth: Vec<usize> = (0..90).map(|i| i / 30).collect();
    assert!(same_partition(&level.optimal().labels, &truth));
}

#[test]
fn corpus_validated_against_itself_is_indistinguishable() {
    let corpus = synthetic_corpus(12);
    let rows = validate_synthetic(&corpus, &corpus).unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        if let Some(r) = row.result {
            assert_eq!((r.statistic, r.p_value), (0.0, 1.0), "{:?}", row.property);
        }
    }
}
