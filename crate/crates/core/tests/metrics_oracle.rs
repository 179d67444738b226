mod common;

use std::path::Path;

use optitopo::metrics::{self, metric_vector, MetricVector, NormalizationScheme};
use optitopo::topology::io::read_topology_dir;
use optitopo::topology::Provenance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hop_metrics_agree_with_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for i in 0..500 {
        let n = rng.gen_range(2..=12);
        let t = common::random_topology("r", n, rng.gen_range(0.05..0.6), &mut rng);
        let err = common::worst_hop_metric_error(&t);
        assert!(err <= 1e-12, "graph {i}: {err}");
    }
}

#[test]
fn km_metrics_agree_with_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for _ in 0..200 {
        let n = rng.gen_range(3..=25);
        let t = common::random_topology("r", n, 0.15, &mut rng);
        let r = common::reference(&t);
        let v = metric_vector(&t, NormalizationScheme::Standard).unwrap();
        assert!(common::close(v.diameter_km, r.diameter_km, 1e-12));
        assert!(common::close(v.aspl_km, r.aspl_km, 1e-12));
    }
}

#[test]
fn golden_topology_matches_reference_values() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let t = read_topology_dir(&dir, "golden", Provenance::Synthetic).unwrap();
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("golden_metrics.json")).unwrap()).unwrap();
    let v = metric_vector(&t, NormalizationScheme::Standard).unwrap();
    for name in MetricVector::FIELD_NAMES {
        let want = expected[name].as_f64().unwrap();
        let got = v.get(name).unwrap();
        assert!(common::close(got, want, 1e-9), "{name}: {got} vs {want}");
    }
    let flags = t.structure_flags();
    assert_eq!(flags.is_planar, expected["is_planar"].as_bool().unwrap());
    assert_eq!(flags.has_bridge, expected["has_bridge"].as_bool().unwrap());
    assert_eq!(flags.is_biconnected, expected["is_biconnected"].as_bool().unwrap());
    let spectrum = metrics::graph_spectra(t.graph()).unwrap().normalized_laplacian;
    for (got, want) in spectrum.values().iter().zip(expected["normalized_laplacian_eigenvalues"].as_array().unwrap()) {
        assert!((got - want.as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn hundred_node_vector_is_fast() {
    use optitopo::generator::{generate, GenerationSpec};
    use optitopo::geodesy::RegionLabel;
    let (t, _) = generate("big", &GenerationSpec::new(100, 4.8, RegionLabel::Large, 3)).unwrap();
    let start = std::time::Instant::now();
    metric_vector(&t, NormalizationScheme::Standard).unwrap();
    // generous for unoptimised test builds
    assert!(start.elapsed().as_secs_f64() < 5.0, "{:?}", start.elapsed());
}
