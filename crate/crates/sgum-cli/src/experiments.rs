//! Experiment runners: build seeded scenarios, run the requested sweep or
//! chain, and emit CSV tables plus a replayable run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sgum::chain::{
    exact_chain, mixing_bounds, spectral_check, PotentialExtremes, StationaryLaw,
    DEFAULT_ENUMERATION_CAP, DEFAULT_MATRIX_CAP,
};
use sgum::equilibrium::{benchmark_profiles, brute_force_optima, gap_report, BenchmarkOptions};
use sgum::glauber::{simulate_observe, ChainConfig, Horizon};
use sgum::power::{power_welfare, solve_sne_iterative, two_user_sne, PowerProfile, PowerScenario};
use sgum::random_access::{
    access_welfare, sne_profile, social_optimal_profile, RandomAccessScenario,
};
use sgum::social::{SocialGraph, TieMode};
use sgum::spectrum::{dbm_to_watts, total_interference, InterferenceRange, SpectrumScenario};

use crate::config::{
    replication_seed, ExperimentConfig, ExperimentKind, SocialKind, SpectrumSection, Topology,
    CSV_SCHEMA_VERSION,
};

/// Files produced by a run, manifest included.
#[derive(Debug)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RunInfo<'a> {
    kind: &'a str,
    csv_schema: u32,
    master_seed: u64,
    /// Decimal strings: derived seeds span the full u64 range, which TOML
    /// integers (i64) cannot hold.
    replication_seeds: Vec<String>,
    seed_derivation: &'static str,
    warnings: &'a [String],
}

/// Build the spectrum scenario for one replication. The RNG stream is
/// consumed in a fixed order (positions, noise, vacant sets) so every field
/// is reproducible from the seed alone.
pub fn build_scenario(spec: &SpectrumSection, seed: u64) -> Result<SpectrumScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.users;
    let m = spec.channels;
    let positions: Vec<(f64, f64)> = match (&spec.positions, spec.topology) {
        (Some(explicit), _) => explicit.clone(),
        (None, Topology::Uniform) => {
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n);
            while pts.len() < n {
                let p = (rng.gen::<f64>() * spec.side, rng.gen::<f64>() * spec.side);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            pts
        }
        (None, Topology::Paired) => {
            if n % 2 != 0 {
                bail!("paired topology needs an even user count, got {n}");
            }
            let mut pts = Vec::with_capacity(n);
            let (lo, hi) = spec.pair_distance;
            for k in 0..n / 2 {
                let anchor = (spec.pair_spacing * k as f64, 0.0);
                let r = lo + rng.gen::<f64>() * (hi - lo);
                let angle = rng.gen::<f64>() * std::f64::consts::TAU;
                pts.push(anchor);
                pts.push((anchor.0 + r * angle.cos(), anchor.1 + r * angle.sin()));
            }
            pts
        }
    };
    let (noise_lo, noise_hi) = spec.noise_dbm;
    let noise = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| dbm_to_watts(noise_lo + rng.gen::<f64>() * (noise_hi - noise_lo)))
                .collect()
        })
        .collect();
    let vacant = (0..n)
        .map(|_| match spec.vacant_size {
            None => (0..m as u16).collect(),
            Some((lo, hi)) => {
                let size = rng.gen_range(lo..=hi.min(m));
                let mut all: Vec<u16> = (0..m as u16).collect();
                for i in 0..size {
                    let j = rng.gen_range(i..all.len());
                    all.swap(i, j);
                }
                all.truncate(size);
                all
            }
        })
        .collect();
    let range = match spec.interference_radius {
        None => InterferenceRange::Complete,
        Some(radius) => InterferenceRange::Radius(radius),
    };
    SpectrumScenario::new(
        positions,
        vec![dbm_to_watts(spec.power_dbm); n],
        spec.alpha,
        noise,
        vacant,
        range,
    )
    .map_err(|e| anyhow!(e))
}

/// Build the social graph for one replication (spectrum experiments).
pub fn build_graph(
    cfg: &ExperimentConfig,
    n: usize,
    seed: u64,
    positions: &[(f64, f64)],
    base_dir: Option<&Path>,
) -> Result<SocialGraph> {
    let social = &cfg.social;
    let mut g = match social.kind {
        SocialKind::Er => {
            SocialGraph::erdos_renyi(n, social.p_link, social.tie_weight, seed)
                .map_err(|e| anyhow!(e))?
        }
        SocialKind::Complete => {
            SocialGraph::complete(n, social.tie_weight).map_err(|e| anyhow!(e))?
        }
        SocialKind::Empty => SocialGraph::empty(n),
        SocialKind::EdgeList => {
            let rel = social
                .path
                .as_ref()
                .ok_or_else(|| anyhow!("edge-list graphs need social.path"))?;
            let path = match base_dir {
                Some(dir) => dir.join(rel),
                None => PathBuf::from(rel),
            };
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading edge list {}", path.display()))?;
            SocialGraph::from_edge_list(&text, n, TieMode::Standard, social.symmetrize)
                .map_err(|e| anyhow!(e))?
        }
    };
    if let Some(range) = social.detection_range {
        g = social_detection_filter(&g, positions, range).map_err(|e| anyhow!(e))?;
    }
    Ok(g)
}

/// Keep only the ties whose endpoints sit within `range` meters; models a
/// proximity-limited social discovery process.
pub fn social_detection_filter(
    g: &SocialGraph,
    positions: &[(f64, f64)],
    range: f64,
) -> sgum::Result<SocialGraph> {
    if positions.len() < g.n_users() {
        return Err(sgum::Error::Usage(format!(
            "{} positions for {} users",
            positions.len(),
            g.n_users()
        )));
    }
    let mut filtered = SocialGraph::empty_with_mode(g.n_users(), g.mode());
    for (i, j, w) in g.ties() {
        let d = ((positions[i].0 - positions[j].0).powi(2)
            + (positions[i].1 - positions[j].1).powi(2))
        .sqrt();
        if d <= range {
            filtered.add_tie(i, j, w)?;
        }
    }
    Ok(filtered)
}

fn write_file(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = out_dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Run the configured experiment, writing all outputs under `out_dir`.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    base_dir: Option<&Path>,
) -> Result<RunOutput> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut warnings = Vec::new();
    let mut files = match cfg.kind {
        ExperimentKind::SpectrumChain => run_spectrum_chain(cfg, out_dir, base_dir)?,
        ExperimentKind::SpectrumSweepPl => run_sweep_pl(cfg, out_dir, base_dir, &mut warnings)?,
        ExperimentKind::SpectrumThetaTradeoff => {
            run_theta_tradeoff(cfg, out_dir, base_dir, &mut warnings)?
        }
        ExperimentKind::PowerSweep => run_power_sweep(cfg, out_dir)?,
        ExperimentKind::RandomAccessSweep => run_random_access_sweep(cfg, out_dir)?,
        ExperimentKind::StationaryAnalysis => {
            run_stationary_analysis(cfg, out_dir, base_dir, &mut warnings)?
        }
    };

    let replication_seeds: Vec<String> = (0..cfg.replications)
        .map(|r| replication_seed(cfg.seed, r).to_string())
        .collect();
    let run = RunInfo {
        kind: cfg.kind.name(),
        csv_schema: CSV_SCHEMA_VERSION,
        master_seed: cfg.seed,
        replication_seeds,
        seed_derivation: "splitmix64(master ^ (index + 1) * 0x9E3779B97F4A7C15)",
        warnings: &warnings,
    };
    let manifest = format!(
        "{}\n[run]\n{}",
        cfg.to_toml(),
        toml::to_string_pretty(&run)?
    );
    files.push(write_file(out_dir, "run_manifest.toml", &manifest)?);
    Ok(RunOutput { files, warnings })
}

fn run_spectrum_chain(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    base_dir: Option<&Path>,
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for rep in 0..cfg.replications {
        let rep_seed = replication_seed(cfg.seed, rep);
        let scenario = build_scenario(&cfg.spectrum, rep_seed)?;
        let graph = build_graph(
            cfg,
            scenario.n_users(),
            rep_seed.wrapping_add(1),
            scenario.positions(),
            base_dir,
        )?;
        let chain_cfg = ChainConfig::uniform(
            cfg.chain.theta,
            cfg.chain.tau,
            scenario.n_users(),
            Horizon::Events(cfg.chain.events),
            rep_seed.wrapping_add(2),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(rep_seed.wrapping_add(3));
        let a0 = scenario.random_profile(&mut rng);
        let mut csv = String::from("time,user,old_channel,new_channel,accepted,potential,welfare\n");
        simulate_observe(&scenario, &graph, &chain_cfg, &a0, |event, _| {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                event.time,
                event.user,
                event.old_channel,
                event.new_channel,
                event.accepted as u8,
                event.potential,
                event.welfare
            );
        })
        .map_err(|e| anyhow!(e))?;
        files.push(write_file(out_dir, &format!("trace_rep{rep:03}.csv"), &csv)?);
    }
    Ok(files)
}

fn run_sweep_pl(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    base_dir: Option<&Path>,
    warnings: &mut Vec<String>,
) -> Result<Vec<PathBuf>> {
    let mut csv = String::from(
        "p_link,ncg_mean,ncg_std,sgum_mean,sgum_std,num_mean,num_std,\
         ncg_normalized,sgum_normalized,num_normalized,approximate_count\n",
    );
    let mut approx_total = 0u64;
    for &p_link in &cfg.sweep.p_link_grid {
        let mut ncg = Vec::new();
        let mut sgum = Vec::new();
        let mut num = Vec::new();
        let mut approx_count = 0u64;
        for rep in 0..cfg.replications {
            let rep_seed = replication_seed(cfg.seed, rep);
            let scenario = build_scenario(&cfg.spectrum, rep_seed)?;
            // Same graph seed across the grid: the edge sets nest in p_link.
            let mut graph_cfg = cfg.clone();
            graph_cfg.social.p_link = p_link;
            let graph = build_graph(
                &graph_cfg,
                scenario.n_users(),
                rep_seed.wrapping_add(1),
                scenario.positions(),
                base_dir,
            )?;
            let opts = BenchmarkOptions {
                cap: DEFAULT_ENUMERATION_CAP,
                fallback_seed: rep_seed.wrapping_add(4),
                fallback_events: cfg.chain.events,
            };
            let bench = benchmark_profiles(&scenario, &graph, &opts).map_err(|e| anyhow!(e))?;
            if bench.approximate {
                approx_count += 1;
            }
            ncg.push(total_interference(&scenario, &bench.ncg_sne));
            sgum.push(total_interference(&scenario, &bench.sgum_sne));
            num.push(total_interference(&scenario, &bench.num_opt));
        }
        approx_total += approx_count;
        let (ncg_mean, ncg_std) = mean_std(&ncg);
        let (sgum_mean, sgum_std) = mean_std(&sgum);
        let (num_mean, num_std) = mean_std(&num);
        let _ = writeln!(
            csv,
            "{p_link},{ncg_mean},{ncg_std},{sgum_mean},{sgum_std},{num_mean},{num_std},{},{},{},{approx_count}",
            ncg_mean / num_mean,
            sgum_mean / num_mean,
            // Normalized against itself by construction.
            1.0,
        );
    }
    if approx_total > 0 {
        warnings.push(format!(
            "{approx_total} replications exceeded the enumeration cap; long-run simulation profiles were used"
        ));
    }
    Ok(vec![write_file(out_dir, "sweep_pl.csv", &csv)?])
}

fn run_theta_tradeoff(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    base_dir: Option<&Path>,
    warnings: &mut Vec<String>,
) -> Result<Vec<PathBuf>> {
    // One fixed instance; the chains replicate over seeds.
    let scenario = build_scenario(&cfg.spectrum, cfg.seed)?;
    let graph = build_graph(
        cfg,
        scenario.n_users(),
        cfg.seed.wrapping_add(1),
        scenario.positions(),
        base_dir,
    )?;
    let optima =
        brute_force_optima(&scenario, &graph, DEFAULT_ENUMERATION_CAP).map_err(|e| anyhow!(e))?;
    let range = optima.phi_star - optima.phi_min;
    if range <= 0.0 {
        warnings.push("degenerate potential: all profiles score identically".into());
    }

    let mut csv = String::from(
        "theta,loss,replications,censored,mean_events,std_events,phi_theta,phi_star\n",
    );
    for &theta in &cfg.sweep.theta_grid {
        let law = StationaryLaw::new(&scenario, &graph, theta, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| anyhow!(e))?;
        let phi_theta = law.expected_potential();
        // Thresholds per allowed loss, tracked jointly over one run per seed.
        let thresholds: Vec<f64> = cfg
            .sweep
            .loss_grid
            .iter()
            .map(|loss| optima.phi_star - loss * range - 1e-9 * range)
            .collect();
        let mut hit_events: Vec<Vec<Option<u64>>> = vec![Vec::new(); thresholds.len()];
        for rep in 0..cfg.replications {
            let rep_seed = replication_seed(cfg.seed, rep);
            let chain_cfg = ChainConfig::uniform(
                theta,
                cfg.chain.tau,
                scenario.n_users(),
                Horizon::Events(cfg.chain.events),
                rep_seed,
            );
            let mut rng = ChaCha8Rng::seed_from_u64(rep_seed.wrapping_add(7));
            let a0 = scenario.random_profile(&mut rng);
            let window = cfg.sweep.dwell_window;
            let mut run_start = vec![None::<u64>; thresholds.len()];
            let mut hits = vec![None::<u64>; thresholds.len()];
            let mut idx = 0u64;
            simulate_observe(&scenario, &graph, &chain_cfg, &a0, |event, _| {
                for (k, &threshold) in thresholds.iter().enumerate() {
                    if hits[k].is_some() {
                        continue;
                    }
                    if event.potential >= threshold {
                        if run_start[k].is_none() {
                            run_start[k] = Some(idx);
                        }
                        if idx - run_start[k].unwrap() + 1 >= window {
                            hits[k] = run_start[k];
                        }
                    } else {
                        run_start[k] = None;
                    }
                }
                idx += 1;
            })
            .map_err(|e| anyhow!(e))?;
            for (k, hit) in hits.into_iter().enumerate() {
                hit_events[k].push(hit);
            }
        }
        for (k, loss) in cfg.sweep.loss_grid.iter().enumerate() {
            let censored = hit_events[k].iter().filter(|h| h.is_none()).count() as u64;
            // Censored runs count at the horizon, which understates the mean.
            let samples: Vec<f64> = hit_events[k]
                .iter()
                .map(|h| h.unwrap_or(cfg.chain.events) as f64)
                .collect();
            let (mean, std) = mean_std(&samples);
            let _ = writeln!(
                csv,
                "{theta},{loss},{},{censored},{mean},{std},{phi_theta},{}",
                cfg.replications, optima.phi_star
            );
        }
    }
    Ok(vec![write_file(out_dir, "theta_tradeoff.csv", &csv)?])
}

fn run_power_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let p = &cfg.power;
    if p.mode == "tie-grid" {
        let mut csv = String::from("w,p1,p2,welfare\n");
        for &w in &cfg.sweep.tie_grid {
            let mut ties = SocialGraph::empty(2);
            if w != 0.0 {
                ties.add_tie(0, 1, w).map_err(|e| anyhow!(e))?;
                ties.add_tie(1, 0, w).map_err(|e| anyhow!(e))?;
            }
            let mut sc = PowerScenario::new(
                p.direct_gain.clone(),
                vec![vec![0.0, p.cross_gain.0], vec![p.cross_gain.1, 0.0]],
                p.noise.clone(),
                p.cost.clone(),
                ties,
            )
            .map_err(|e| anyhow!(e))?;
            if let Some(cap) = p.cap {
                sc = sc.with_power_cap(cap).map_err(|e| anyhow!(e))?;
            }
            let sne = two_user_sne(&sc).map_err(|e| anyhow!(e))?;
            let v = power_welfare(&sc, &sne).map_err(|e| anyhow!(e))?;
            let _ = writeln!(csv, "{w},{},{},{v}", sne.power(0), sne.power(1));
        }
        return Ok(vec![write_file(out_dir, "power_tie_grid.csv", &csv)?]);
    }

    // Benchmark mode: random link geometry per replication; the altruistic
    // endpoint doubles as a numeric welfare-ascent heuristic.
    let mut csv = String::from("rep,welfare_ncg,welfare_sgum,welfare_num_heuristic\n");
    for rep in 0..cfg.replications {
        let rep_seed = replication_seed(cfg.seed, rep);
        let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);
        let n = p.users;
        let tx: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>() * p.side, rng.gen::<f64>() * p.side))
            .collect();
        let rx: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>() * p.side, rng.gen::<f64>() * p.side))
            .collect();
        let cost = if p.cost.len() == n {
            p.cost.clone()
        } else {
            vec![p.cost[0]; n]
        };
        let noise = if p.noise.len() == n {
            p.noise.clone()
        } else {
            vec![p.noise[0]; n]
        };
        let ties = SocialGraph::erdos_renyi(
            n,
            cfg.social.p_link,
            cfg.social.tie_weight,
            rep_seed.wrapping_add(1),
        )
        .map_err(|e| anyhow!(e))?;
        let build = |g: SocialGraph| -> Result<PowerScenario> {
            let sc = PowerScenario::from_path_loss(&tx, &rx, p.alpha, noise.clone(), cost.clone(), g)
                .map_err(|e| anyhow!(e))?;
            match p.cap {
                Some(cap) => sc.with_power_cap(cap).map_err(|e| anyhow!(e)),
                None => Ok(sc),
            }
        };
        let sc_sgum = build(ties)?;
        let sc_num = build(SocialGraph::complete(n, 1.0).map_err(|e| anyhow!(e))?)?;
        let ncg_profile = PowerProfile((0..n).map(|i| 1.0 / cost[i]).collect());
        let sgum_profile = solve_sne_iterative(&sc_sgum, 1e-9, 500)
            .map_err(|e| anyhow!(e))?
            .profile;
        let num_profile = solve_sne_iterative(&sc_num, 1e-9, 500)
            .map_err(|e| anyhow!(e))?
            .profile;
        let _ = writeln!(
            csv,
            "{rep},{},{},{}",
            power_welfare(&sc_sgum, &ncg_profile).map_err(|e| anyhow!(e))?,
            power_welfare(&sc_sgum, &sgum_profile).map_err(|e| anyhow!(e))?,
            power_welfare(&sc_sgum, &num_profile).map_err(|e| anyhow!(e))?,
        );
    }
    Ok(vec![write_file(out_dir, "power_benchmark.csv", &csv)?])
}

fn run_random_access_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ra = &cfg.random_access;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = ra.users;
    let tx: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>() * ra.side, rng.gen::<f64>() * ra.side))
        .collect();
    let rx: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>() * ra.side, rng.gen::<f64>() * ra.side))
        .collect();
    let mut header = String::from("w,welfare_sgum,welfare_ncg,welfare_so");
    for i in 0..n {
        let _ = write!(header, ",q_{i}");
    }
    header.push('\n');
    let mut csv = header;
    for &w in &cfg.sweep.tie_grid {
        let ties = if w == 0.0 {
            SocialGraph::empty(n)
        } else {
            SocialGraph::complete(n, w).map_err(|e| anyhow!(e))?
        };
        let sc = RandomAccessScenario::from_geometry(
            &tx,
            &rx,
            ra.radius,
            vec![ra.efficiency; n],
            vec![ra.cost; n],
            ties,
        )
        .map_err(|e| anyhow!(e))?;
        let sc_ncg = RandomAccessScenario::from_geometry(
            &tx,
            &rx,
            ra.radius,
            vec![ra.efficiency; n],
            vec![ra.cost; n],
            SocialGraph::empty(n),
        )
        .map_err(|e| anyhow!(e))?;
        let q = sne_profile(&sc);
        // Starved links (a saturated interferer) have no finite welfare; the
        // sweep records that explicitly instead of failing.
        let fmt_welfare = |value: sgum::Result<f64>| match value {
            Ok(v) => v.to_string(),
            Err(_) => "-inf".to_string(),
        };
        let v_sgum = fmt_welfare(access_welfare(&sc, &q));
        let v_ncg = fmt_welfare(access_welfare(&sc_ncg, &sne_profile(&sc_ncg)));
        let v_so = fmt_welfare(access_welfare(&sc, &social_optimal_profile(&sc)));
        let mut row = format!("{w},{v_sgum},{v_ncg},{v_so}");
        for i in 0..n {
            let _ = write!(row, ",{}", q.probability(i));
        }
        row.push('\n');
        csv.push_str(&row);
    }
    Ok(vec![write_file(out_dir, "random_access_tie_grid.csv", &csv)?])
}

fn run_stationary_analysis(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    base_dir: Option<&Path>,
    warnings: &mut Vec<String>,
) -> Result<Vec<PathBuf>> {
    let scenario = build_scenario(&cfg.spectrum, cfg.seed)?;
    let graph = build_graph(
        cfg,
        scenario.n_users(),
        cfg.seed.wrapping_add(1),
        scenario.positions(),
        base_dir,
    )?;
    let theta = cfg.chain.theta;
    if theta <= 0.0 {
        bail!("stationary analysis needs chain.theta > 0");
    }
    let law = StationaryLaw::new(&scenario, &graph, theta, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| anyhow!(e))?;

    let mut stationary_csv = String::from("profile,probability\n");
    for (idx, prob) in law.probs.iter().enumerate() {
        let _ = writeln!(stationary_csv, "{},{prob}", law.space.profile(idx).digits());
    }

    let report_struct = gap_report(&scenario, &graph, theta, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| anyhow!(e))?;
    let extremes = PotentialExtremes {
        max: law.phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        min: law.phi.iter().cloned().fold(f64::INFINITY, f64::min),
    };
    let tau = vec![cfg.chain.tau; scenario.n_users()];
    let bounds = mixing_bounds(
        &scenario,
        &graph,
        theta,
        &tau,
        0.01,
        Some(extremes),
        DEFAULT_ENUMERATION_CAP,
    )
    .map_err(|e| anyhow!(e))?;

    let mut report = String::new();
    let _ = writeln!(report, "theta = {theta}");
    let _ = writeln!(report, "states = {}", law.space.len());
    let _ = writeln!(report, "phi_star = {}", report_struct.phi_star);
    let _ = writeln!(report, "phi_theta = {}", report_struct.phi_theta);
    let _ = writeln!(report, "potential_gap = {}", report_struct.potential_gap);
    let _ = writeln!(report, "potential_gap_bound = {}", report_struct.potential_gap_bound);
    let _ = writeln!(report, "v_bar = {}", report_struct.v_bar);
    let _ = writeln!(report, "v_theta = {}", report_struct.v_theta);
    let _ = writeln!(report, "rho_theta = {}", report_struct.rho_theta);
    let _ = writeln!(report, "welfare_gap_bound = {}", report_struct.welfare_gap_bound);
    let _ = writeln!(report, "mixing_general_bound = {}", bounds.general);
    let _ = writeln!(
        report,
        "mixing_coupled_bound = {}",
        bounds
            .coupled
            .map(|b| b.to_string())
            .unwrap_or_else(|| "none".into())
    );
    let _ = writeln!(report, "theta_threshold = {}", bounds.theta_threshold);

    if law.space.len() <= DEFAULT_MATRIX_CAP {
        let chain =
            exact_chain(&scenario, &graph, theta, &tau, DEFAULT_MATRIX_CAP).map_err(|e| anyhow!(e))?;
        let _ = writeln!(report, "stationarity_residual = {}", chain.stationarity_residual());
        let _ = writeln!(
            report,
            "detailed_balance_residual = {}",
            chain.detailed_balance_residual()
        );
        let spec = spectral_check(&chain).map_err(|e| anyhow!(e))?;
        let _ = writeln!(report, "xi = {}", spec.xi);
        let _ = writeln!(report, "lambda2 = {}", spec.lambda2);
        let _ = writeln!(report, "cheeger_ok = {}", spec.cheeger_ok);
        if law.space.len() <= 512 {
            let measured = chain.measured_mixing_time(0.01).map_err(|e| anyhow!(e))?;
            let _ = writeln!(report, "measured_mixing_time_eps_0.01 = {measured}");
        }
    } else {
        warnings.push(format!(
            "state space has {} states; generator-based diagnostics skipped beyond {}",
            law.space.len(),
            DEFAULT_MATRIX_CAP
        ));
    }

    Ok(vec![
        write_file(out_dir, "stationary.csv", &stationary_csv)?,
        write_file(out_dir, "report.txt", &report)?,
    ])
}
