//! The randomized distributed spectrum-access chain: every user waits an
//! independent exponential timer, proposes a uniformly random vacant channel
//! (possibly its current one), and keeps it with probability
//! `exp(theta * min(0, dS))` where `dS` is the change in its social group
//! utility. Improving moves are always kept; the stable form never overflows
//! even at very large `theta`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::social::SocialGraph;
use crate::spectrum::{potential, welfare, ChannelProfile, SpectrumScenario};
use crate::{Error, Result};

/// Recompute running potential/welfare from scratch this often to stop
/// floating-point drift in the incremental updates.
const REANCHOR_INTERVAL: u64 = 8192;

/// Probability that a proposed move is kept.
pub fn acceptance_probability(s_new: f64, s_old: f64, theta: f64) -> f64 {
    debug_assert!(theta >= 0.0);
    (theta * (s_new - s_old).min(0.0)).exp()
}

/// When to stop a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Stop after this many timer events (self-proposals and rejections count).
    Events(u64),
    /// Stop once the next event would land past this simulated time.
    Time(f64),
}

/// Chain parameters: inverse temperature, per-user update rates, stopping
/// rule, and the RNG seed that makes the run reproducible.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub theta: f64,
    pub tau: Vec<f64>,
    pub horizon: Horizon,
    pub seed: u64,
}

impl ChainConfig {
    /// Uniform update rate `tau` for every user.
    pub fn uniform(theta: f64, tau: f64, n_users: usize, horizon: Horizon, seed: u64) -> Self {
        Self {
            theta,
            tau: vec![tau; n_users],
            horizon,
            seed,
        }
    }

    fn validate(&self, n_users: usize) -> Result<()> {
        if !self.theta.is_finite() || self.theta < 0.0 {
            return Err(Error::Validation(format!(
                "theta {} must be finite and nonnegative",
                self.theta
            )));
        }
        if self.tau.len() != n_users {
            return Err(Error::Validation(format!(
                "{} update rates for {} users",
                self.tau.len(),
                n_users
            )));
        }
        if let Some(t) = self.tau.iter().find(|&&t| !(t > 0.0)) {
            return Err(Error::Validation(format!("update rate {t} must be positive")));
        }
        if let Horizon::Time(t) = self.horizon {
            if !(t > 0.0) {
                return Err(Error::Validation(format!("time horizon {t} must be positive")));
            }
        }
        Ok(())
    }
}

/// One timer expiry: who woke up, what was proposed, whether it was kept,
/// and the potential/welfare right after.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEvent {
    pub time: f64,
    pub user: usize,
    pub old_channel: u16,
    pub new_channel: u16,
    pub accepted: bool,
    pub potential: f64,
    pub welfare: f64,
}

/// The realized event sequence of one simulation run.
#[derive(Debug, Clone)]
pub struct ChainTrace {
    pub initial: ChannelProfile,
    pub final_profile: ChannelProfile,
    pub events: Vec<ChainEvent>,
}

/// Incrementally maintained chain state; deltas are O(neighbors) per event.
struct RunningState<'a> {
    scenario: &'a SpectrumScenario,
    graph: &'a SocialGraph,
    /// Dense tie weights for O(1) lookup in the event loop.
    weights: Vec<Vec<f64>>,
    profile: ChannelProfile,
    phi: f64,
    v: f64,
    changes_since_anchor: u64,
}

impl<'a> RunningState<'a> {
    fn new(scenario: &'a SpectrumScenario, graph: &'a SocialGraph, a0: ChannelProfile) -> Self {
        let n = scenario.n_users();
        let mut weights = vec![vec![0.0; n]; n];
        for (i, j, w) in graph.ties() {
            weights[i][j] = w;
        }
        let phi = potential(scenario, graph, &a0).total();
        let v = welfare(scenario, &a0);
        Self {
            scenario,
            graph,
            weights,
            profile: a0,
            phi,
            v,
            changes_since_anchor: 0,
        }
    }

    /// Change in user `n`'s social group utility if it moved to `to`.
    fn group_utility_delta(&self, n: usize, to: u16) -> f64 {
        let s = self.scenario;
        let from = self.profile.channel(n);
        if from == to {
            return 0.0;
        }
        // Own term: new interference minus old.
        let mut d_gamma_n = s.noise(n, to) - s.noise(n, from);
        let mut delta = 0.0;
        for &m in s.interference_neighbors(n) {
            let ch = self.profile.channel(m);
            if ch == to {
                d_gamma_n += s.coupling(m, n);
            } else if ch == from {
                d_gamma_n -= s.coupling(m, n);
            }
            // Neighbor utilities move by the interference n adds or removes.
            let w = self.weights[n][m];
            if w != 0.0 {
                if ch == to {
                    delta -= w * s.coupling(n, m);
                } else if ch == from {
                    delta += w * s.coupling(n, m);
                }
            }
        }
        delta - d_gamma_n
    }

    /// Apply the move and update running potential and welfare.
    fn apply(&mut self, n: usize, to: u16) {
        let s = self.scenario;
        let from = self.profile.channel(n);
        if from == to {
            return;
        }
        let d_noise = s.noise(n, to) - s.noise(n, from);
        let mut d_gamma_n = d_noise;
        let mut d_phi_pair = 0.0;
        let mut d_phi_social = 0.0;
        let mut d_other = 0.0;
        for &m in s.interference_neighbors(n) {
            let ch = self.profile.channel(m);
            let sign = if ch == to {
                1.0
            } else if ch == from {
                -1.0
            } else {
                continue;
            };
            d_gamma_n += sign * s.coupling(m, n);
            d_other += sign * s.coupling(n, m);
            d_phi_pair += sign * (s.coupling(m, n) + s.coupling(n, m));
            d_phi_social += sign
                * (self.weights[n][m] * s.coupling(m, n) + self.weights[m][n] * s.coupling(n, m));
        }
        self.phi += -0.5 * d_phi_pair - 0.5 * d_phi_social - d_noise;
        self.v += -d_gamma_n - d_other;
        self.profile.set_channel(n, to);

        self.changes_since_anchor += 1;
        if self.changes_since_anchor >= REANCHOR_INTERVAL {
            self.phi = potential(s, self.graph, &self.profile).total();
            self.v = welfare(s, &self.profile);
            self.changes_since_anchor = 0;
        }
    }
}

/// Run the chain, streaming each event to `observer`; returns the final
/// profile. Identical inputs (including the seed) replay identical runs.
pub fn simulate_observe<F>(
    s: &SpectrumScenario,
    g: &SocialGraph,
    cfg: &ChainConfig,
    a0: &ChannelProfile,
    mut observer: F,
) -> Result<ChannelProfile>
where
    F: FnMut(&ChainEvent, &ChannelProfile),
{
    cfg.validate(s.n_users())?;
    if g.n_users() != s.n_users() {
        return Err(Error::Usage(format!(
            "social graph covers {} users, scenario has {}",
            g.n_users(),
            s.n_users()
        )));
    }
    let a0 = ChannelProfile::new(a0.channels().to_vec(), s)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total_rate: f64 = cfg.tau.iter().sum();
    let mut state = RunningState::new(s, g, a0);
    let mut time = 0.0f64;
    let mut event_count = 0u64;

    loop {
        match cfg.horizon {
            Horizon::Events(k) if event_count >= k => break,
            _ => {}
        }
        let dt = -(1.0 - rng.gen::<f64>()).ln() / total_rate;
        let mut next_time = time + dt;
        if next_time <= time {
            next_time = time.next_up();
        }
        if let Horizon::Time(t_end) = cfg.horizon {
            if next_time > t_end {
                break;
            }
        }
        time = next_time;

        // Pick the user whose timer expired, weighted by update rate.
        let mut pick = rng.gen::<f64>() * total_rate;
        let mut user = s.n_users() - 1;
        for (n, &t) in cfg.tau.iter().enumerate() {
            if pick < t {
                user = n;
                break;
            }
            pick -= t;
        }

        let vacant = s.vacant(user);
        let proposal = vacant[rng.gen_range(0..vacant.len())];
        let old = state.profile.channel(user);
        let accepted = if proposal == old {
            true
        } else {
            let delta = state.group_utility_delta(user, proposal);
            delta >= 0.0 || rng.gen::<f64>() < (cfg.theta * delta).exp()
        };
        if accepted {
            state.apply(user, proposal);
        }
        let event = ChainEvent {
            time,
            user,
            old_channel: old,
            new_channel: proposal,
            accepted,
            potential: state.phi,
            welfare: state.v,
        };
        observer(&event, &state.profile);
        event_count += 1;
    }
    Ok(state.profile)
}

/// Run the chain and record every event.
pub fn simulate(
    s: &SpectrumScenario,
    g: &SocialGraph,
    cfg: &ChainConfig,
    a0: &ChannelProfile,
) -> Result<ChainTrace> {
    let mut events = match cfg.horizon {
        Horizon::Events(k) => Vec::with_capacity(k.min(1 << 22) as usize),
        Horizon::Time(_) => Vec::new(),
    };
    let final_profile = simulate_observe(s, g, cfg, a0, |event, _| events.push(*event))?;
    Ok(ChainTrace {
        initial: a0.clone(),
        final_profile,
        events,
    })
}
