use tops_core::harness::{
    emit, from_json_str, run_experiment, EnsembleSystem, ExperimentConfig, ExperimentKind, OutputFormat, SystemConfig,
    TopsSystem,
};
use tops_core::{Coupling, Symmetry};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn uncoupled_spacing_is_poissonian() {
    let mut c = ExperimentConfig::new(ExperimentKind::Spacing, SystemConfig::Tops(TopsSystem::new(20, 20)));
    c.epsilon_grid = Some(vec![0.0]);
    let r = run_experiment(&c).unwrap();
    let p = &r.points[0];
    assert!(p.get("ks_poisson").unwrap().value < 0.05);
    assert!(p.get("ks_wigner").unwrap().value > 0.1);
}

#[test]
fn rmt_validation_within_three_sigma() {
    let sys = EnsembleSystem { symmetry: Symmetry::Coe, coupling: Coupling::DiagonalPhases, n1: 8, n2: 8 };
    let mut c = ExperimentConfig::new(ExperimentKind::RmtValidation, SystemConfig::Ensemble(sys));
    c.epsilon_grid = Some(vec![0.3, 1.0]);
    c.realizations = 200;
    c.base_seed = 11;
    let r = run_experiment(&c).unwrap();
    for p in &r.points {
        let z = p.get("z_score").unwrap().value;
        assert!(z.abs() < 3.0, "epsilon {}: z = {z}", p.epsilon);
    }
}

#[test]
fn results_independent_of_thread_count() {
    let sys = EnsembleSystem { symmetry: Symmetry::Cue, coupling: Coupling::ProductPhases, n1: 5, n2: 7 };
    let mut omega = ExperimentConfig::new(ExperimentKind::OmegaDistribution, SystemConfig::Ensemble(sys));
    omega.epsilon_grid = Some(vec![0.4]);
    omega.realizations = 16;
    omega.omega_pairs = 10;
    let mut ent = ExperimentConfig::new(ExperimentKind::Entanglement, SystemConfig::Tops(TopsSystem::new(4, 6)));
    ent.lambda_grid = Some(vec![0.01, 0.5]);
    ent.realizations = 3;
    for c in [omega, ent] {
        let a = in_pool(1, || run_experiment(&c).unwrap());
        let b = in_pool(3, || run_experiment(&c).unwrap());
        assert_eq!(a.points, b.points);
        let again = run_experiment(&a.config).unwrap();
        assert_eq!(again.points, a.points);
    }
}

#[test]
fn emitted_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::new(ExperimentKind::SchmidtDistribution, SystemConfig::Tops(TopsSystem::new(5, 5)));
    c.epsilon_grid = Some(vec![0.5, 1.0, 2.0]);
    let r = run_experiment(&c).unwrap();

    let csv_path = dir.path().join("run.csv");
    let files = emit(&r, OutputFormat::Csv, &csv_path).unwrap();
    assert_eq!(files.len(), 2);
    let table = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(table.lines().count(), 4);

    let mut reader = csv::Reader::from_path(&files[1]).unwrap();
    let mut mass = [0.0f64; 3];
    for row in reader.records() {
        let row = row.unwrap();
        let idx: usize = row[0].parse().unwrap();
        let lo: f64 = row[1].parse().unwrap();
        let hi: f64 = row[2].parse().unwrap();
        let density: f64 = row[4].parse().unwrap();
        assert!(row[4].len() >= 17, "at least 15 significant digits: {}", &row[4]);
        mass[idx] += density * (hi - lo);
    }
    for m in mass {
        assert!((m - 1.0).abs() < 1e-12, "{m}");
    }

    let json_path = dir.path().join("run.json");
    emit(&r, OutputFormat::Json, &json_path).unwrap();
    let text = std::fs::read_to_string(&json_path).unwrap();
    let back = from_json_str(&text).unwrap();
    assert_eq!(back, r);
    let again = dir.path().join("again.json");
    emit(&back, OutputFormat::Json, &again).unwrap();
    assert_eq!(std::fs::read(&again).unwrap(), text.as_bytes());

    let err = emit(&r, OutputFormat::Json, &dir.path().join("missing/run.json")).unwrap_err();
    assert!(matches!(err, tops_core::Error::Io(_)), "{err}");
}
