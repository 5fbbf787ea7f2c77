//! Convergence/quality trade-off on a fixed congested instance: pushing the
//! chain towards the optimum (larger theta) raises the expected potential of
//! the stationary law but slows the first visit to the maximizer.

use sgum::chain::DEFAULT_ENUMERATION_CAP;
use sgum::equilibrium::brute_force_optima;
use sgum_cli::config::{ExperimentConfig, SocialKind, Topology};
use sgum_cli::experiments::{build_graph, build_scenario, run_experiment};

fn tradeoff_config() -> ExperimentConfig {
    let mut cfg: ExperimentConfig = toml::from_str("kind = \"spectrum-theta-tradeoff\"").unwrap();
    cfg.seed = 0;
    cfg.replications = 30;
    cfg.spectrum.users = 4;
    cfg.spectrum.channels = 2;
    cfg.spectrum.topology = Topology::Uniform;
    cfg.spectrum.side = 2.0;
    cfg.spectrum.alpha = 2.0;
    cfg.spectrum.power_dbm = 30.0;
    cfg.spectrum.noise_dbm = (20.0, 27.0);
    cfg.spectrum.interference_radius = None;
    cfg.social.kind = SocialKind::Er;
    cfg.social.p_link = 0.6;
    cfg.social.tie_weight = 1.0;
    cfg.chain.events = 60_000;
    cfg.sweep.loss_grid = vec![0.0];
    cfg.sweep.dwell_window = 1;
    cfg
}

#[test]
fn first_hit_slows_and_quality_rises_with_theta() {
    let mut cfg = tradeoff_config();

    // Scale the temperature grid by the instance's potential range.
    let scenario = build_scenario(&cfg.spectrum, cfg.seed).unwrap();
    let graph = build_graph(
        &cfg,
        scenario.n_users(),
        cfg.seed.wrapping_add(1),
        scenario.positions(),
        None,
    )
    .unwrap();
    let optima = brute_force_optima(&scenario, &graph, DEFAULT_ENUMERATION_CAP).unwrap();
    let range = optima.phi_star - optima.phi_min;
    cfg.sweep.theta_grid = vec![0.0, 4.0 / range, 12.0 / range];

    let tmp = tempfile::tempdir().unwrap();
    run_experiment(&cfg, tmp.path(), None).unwrap();
    let csv = std::fs::read_to_string(tmp.path().join("theta_tradeoff.csv")).unwrap();

    let mut mean_events = Vec::new();
    let mut phi_theta = Vec::new();
    for row in csv.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        let censored: u64 = fields[3].parse().unwrap();
        assert_eq!(censored, 0, "run failed to reach the optimum: {row}");
        mean_events.push(fields[4].parse::<f64>().unwrap());
        phi_theta.push(fields[6].parse::<f64>().unwrap());
    }
    assert_eq!(mean_events.len(), 3);
    assert!(
        mean_events[0] < mean_events[1] && mean_events[1] < mean_events[2],
        "first-visit means not increasing with theta: {mean_events:?}"
    );
    assert!(
        phi_theta[0] <= phi_theta[1] && phi_theta[1] <= phi_theta[2],
        "stationary potential not increasing with theta: {phi_theta:?}"
    );
}
