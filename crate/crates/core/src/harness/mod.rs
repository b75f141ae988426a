//! Experiment configuration, execution and result files.
//!
//! A run resolves its configuration, walks the Λ or ε grid, and for every grid point
//! builds the operators, diagonalizes, measures and reduces. Results carry the resolved
//! configuration so a run can be repeated from its own output.

mod config;
mod output;
mod run;

pub use config::{
    BinSpec, EnsembleSystem, ExperimentConfig, ExperimentKind, OutputFormat, SystemConfig, TopsSystem, DEFAULT_MAX_DIM,
};
pub use output::{emit, from_json_str, histogram_csv, histogram_path, points_csv, to_json_string};
pub use run::{run_experiment, GridPoint, Observable, ResultRecord};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{Coupling, Symmetry};

    fn tops(kind: ExperimentKind, j: u32) -> ExperimentConfig {
        ExperimentConfig::new(kind, SystemConfig::Tops(TopsSystem::new(j, j)))
    }

    #[test]
    fn config_validation() {
        let mut c = tops(ExperimentKind::Spacing, 5);
        assert!(c.validate().is_err());
        c.lambda_grid = Some(vec![0.1, 0.2]);
        c.validate().unwrap();
        c.epsilon_grid = Some(vec![0.1]);
        assert!(c.validate().is_err());
        c.epsilon_grid = None;
        c.lambda_grid = Some(vec![0.2, 0.1]);
        assert!(c.validate().is_err());
        let mut big = tops(ExperimentKind::Spacing, 40);
        big.epsilon_grid = Some(vec![0.0]);
        let msg = big.validate().unwrap_err().to_string();
        assert!(msg.contains("max_dim"), "{msg}");
        let mut wrong = tops(ExperimentKind::RmtValidation, 3);
        wrong.epsilon_grid = Some(vec![0.0]);
        assert!(wrong.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
kind = "entanglement"
lambda_grid = [0.0, 0.01]
alphas = [1.0, 2.0]
base_seed = 3

[system]
type = "tops"
j1 = 4
j2 = 5
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        match c.system {
            SystemConfig::Tops(t) => assert_eq!((t.j1, t.j2, t.k1, t.alpha2), (4, 5, 12.0, 0.4)),
            _ => panic!("expected tops"),
        }
        let again = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, c);
        assert!(ExperimentConfig::from_toml_str("kind = \"spacing\"\nbogus = 1\n").is_err());
    }

    #[test]
    fn uncoupled_entanglement_vanishes() {
        let mut c = tops(ExperimentKind::Entanglement, 4);
        c.lambda_grid = Some(vec![0.0]);
        let r = run_experiment(&c).unwrap();
        let p = &r.points[0];
        for a in ["1", "2", "3", "4"] {
            assert!(p.get(&format!("s_{a}")).unwrap().value.abs() < 1e-10);
        }
        assert_eq!(p.epsilon, 0.0);
    }

    #[test]
    fn spacing_and_outputs() {
        let mut c = tops(ExperimentKind::Spacing, 6);
        c.epsilon_grid = Some(vec![0.0, 0.5]);
        c.realizations = 2;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.points.len(), 2);
        assert!(r.points[0].get("ks_poisson").is_some());
        let csv = points_csv(&r).unwrap();
        assert_eq!(csv.lines().count(), 3);
        let hist = histogram_csv(&r).unwrap().unwrap();
        assert_eq!(hist.lines().count(), 1 + 2 * 50);
        let json = to_json_string(&r).unwrap();
        assert_eq!(to_json_string(&from_json_str(&json).unwrap()).unwrap(), json);
        assert!(r.config.bins.is_some());
        let again = run_experiment(&r.config).unwrap();
        assert_eq!(again.points, r.points);
    }

    #[test]
    fn ensemble_kinds() {
        let sys = SystemConfig::Ensemble(EnsembleSystem {
            symmetry: Symmetry::Coe,
            coupling: Coupling::DiagonalPhases,
            n1: 4,
            n2: 4,
        });
        let mut c = ExperimentConfig::new(ExperimentKind::RmtValidation, sys);
        c.epsilon_grid = Some(vec![0.5]);
        c.realizations = 20;
        let r = run_experiment(&c).unwrap();
        assert!(r.points[0].get("z_score").unwrap().value.is_finite());
        c.kind = ExperimentKind::OmegaDistribution;
        c.omega_pairs = 5;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.points[0].get("samples").unwrap().value, 100.0);
        c.kind = ExperimentKind::LambdaScan;
        assert!(run_experiment(&c).is_ok());
    }

    #[test]
    fn stage_errors_name_parameters() {
        let mut c = tops(ExperimentKind::LambdaScan, 3);
        c.lambda_grid = Some(vec![1e6]);
        let msg = run_experiment(&c).unwrap_err().to_string();
        assert!(msg.contains("solve_epsilon") && msg.contains("lambda = 1000000"), "{msg}");
    }
}
