//! Brute-force equilibrium oracles and optimality-gap machinery for the
//! spectrum game: SNE verification, potential/welfare maximizers over the
//! enumerated space, the expected stationary potential, and the closed-form
//! bounds on how far a finite-theta chain sits from the optima.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{StateSpace, StationaryLaw};
use crate::glauber::{simulate_observe, ChainConfig, Horizon};
use crate::social::SocialGraph;
use crate::spectrum::{
    individual_utility, potential, social_group_utility, welfare, ChannelProfile,
    SpectrumScenario,
};
use crate::{Error, Result};

/// Default deviation tolerance: 1e-6 relative to the largest utility
/// magnitude at the profile, since raw utilities live at watt scale.
pub fn default_sne_tolerance(s: &SpectrumScenario, a: &ChannelProfile) -> f64 {
    let scale = (0..s.n_users())
        .map(|n| individual_utility(s, a, n).abs())
        .fold(0.0, f64::max);
    1e-6 * scale
}

/// True when no user can raise its social group utility more than `tol` by a
/// unilateral channel change.
pub fn is_sne_with_tolerance(
    s: &SpectrumScenario,
    g: &SocialGraph,
    a: &ChannelProfile,
    tol: f64,
) -> bool {
    for n in 0..s.n_users() {
        let here = social_group_utility(s, g, a, n);
        for &ch in s.vacant(n) {
            if ch == a.channel(n) {
                continue;
            }
            let mut b = a.clone();
            b.set_channel(n, ch);
            if social_group_utility(s, g, &b, n) > here + tol {
                return false;
            }
        }
    }
    true
}

pub fn is_sne(s: &SpectrumScenario, g: &SocialGraph, a: &ChannelProfile) -> bool {
    is_sne_with_tolerance(s, g, a, default_sne_tolerance(s, a))
}

/// Exhaustive optima over the enumerated profile space. Ties break towards
/// the lexicographically smallest profile (the enumeration order).
#[derive(Debug, Clone)]
pub struct BruteForceOptima {
    pub argmax_phi: ChannelProfile,
    pub phi_star: f64,
    pub argmax_welfare: ChannelProfile,
    pub v_bar: f64,
    pub phi_min: f64,
}

pub fn brute_force_optima(
    s: &SpectrumScenario,
    g: &SocialGraph,
    cap: usize,
) -> Result<BruteForceOptima> {
    let space = StateSpace::new(s, cap)?;
    let mut best_phi = f64::NEG_INFINITY;
    let mut best_phi_idx = 0;
    let mut best_v = f64::NEG_INFINITY;
    let mut best_v_idx = 0;
    let mut phi_min = f64::INFINITY;
    for (i, a) in space.iter().enumerate() {
        let phi = potential(s, g, &a).total();
        let v = welfare(s, &a);
        if phi > best_phi {
            best_phi = phi;
            best_phi_idx = i;
        }
        if v > best_v {
            best_v = v;
            best_v_idx = i;
        }
        phi_min = phi_min.min(phi);
    }
    Ok(BruteForceOptima {
        argmax_phi: space.profile(best_phi_idx),
        phi_star: best_phi,
        argmax_welfare: space.profile(best_v_idx),
        v_bar: best_v,
        phi_min,
    })
}

/// Expected potential under a stationary law.
pub fn expected_potential(law: &StationaryLaw) -> f64 {
    law.expected_potential()
}

/// Finite-theta optimality report. The gaps are accumulated as nonnegative
/// combinations `sum_a q*_a (max - value_a)`, so they can never go negative
/// through rounding.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub theta: f64,
    pub phi_star: f64,
    pub phi_theta: f64,
    /// `phi_star - phi_theta`.
    pub potential_gap: f64,
    /// Entropy bound on the potential gap: `(1/theta) sum_n ln |M_n|`.
    pub potential_gap_bound: f64,
    pub v_bar: f64,
    pub v_theta: f64,
    /// Welfare gap `rho_theta = v_bar - v_theta`.
    pub rho_theta: f64,
    /// Closed-form bound on `rho_theta`: the entropy term plus the structural
    /// interference deficits of partial and missing social coverage.
    pub welfare_gap_bound: f64,
    pub potential_bound_holds: bool,
    pub welfare_bound_holds: bool,
}

pub fn gap_report(
    s: &SpectrumScenario,
    g: &SocialGraph,
    theta: f64,
    cap: usize,
) -> Result<GapReport> {
    if !(theta > 0.0) {
        return Err(Error::Validation(format!("theta {theta} must be positive")));
    }
    let law = StationaryLaw::new(s, g, theta, cap)?;
    let phi_star = law.phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v_bar = law.welfare.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let potential_gap: f64 = law
        .phi
        .iter()
        .zip(&law.probs)
        .map(|(&p, &q)| q * (phi_star - p))
        .sum();
    let rho_theta: f64 = law
        .welfare
        .iter()
        .zip(&law.probs)
        .map(|(&v, &q)| q * (v_bar - v))
        .sum();

    let entropy_cap: f64 = (0..s.n_users())
        .map(|n| (s.vacant(n).len() as f64).ln())
        .sum();
    let potential_gap_bound = entropy_cap / theta;

    // Structural terms: co-channel couplings discounted by tie strength for
    // covered pairs, full strength for physically coupled but untied pairs.
    let mut structural = 0.0;
    for n in 0..s.n_users() {
        for &m in s.interference_neighbors(n) {
            let w = g.tie(n, m);
            structural += (1.0 - w) * s.coupling(m, n);
        }
    }
    let welfare_gap_bound = potential_gap_bound + 0.5 * structural;

    Ok(GapReport {
        theta,
        phi_star,
        phi_theta: phi_star - potential_gap,
        potential_gap,
        potential_gap_bound,
        v_bar,
        v_theta: v_bar - rho_theta,
        rho_theta,
        welfare_gap_bound,
        potential_bound_holds: potential_gap <= potential_gap_bound,
        welfare_bound_holds: rho_theta <= welfare_gap_bound,
    })
}

/// The three benchmark channel profiles: selfish play, socially-aware play,
/// and the welfare optimum.
#[derive(Debug, Clone)]
pub struct BenchmarkProfiles {
    /// Potential maximizer with all ties removed (non-cooperative game).
    pub ncg_sne: ChannelProfile,
    /// Potential maximizer under the given social graph.
    pub sgum_sne: ChannelProfile,
    /// Welfare maximizer (network utility maximization).
    pub num_opt: ChannelProfile,
    /// True when the profiles came from the long-run simulation fallback
    /// rather than exhaustive enumeration.
    pub approximate: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchmarkOptions {
    pub cap: usize,
    /// Seed for the simulation fallback on instances past the cap.
    pub fallback_seed: u64,
    /// Events per objective in the fallback.
    pub fallback_events: u64,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        Self {
            cap: crate::chain::DEFAULT_ENUMERATION_CAP,
            fallback_seed: 0,
            fallback_events: 200_000,
        }
    }
}

pub fn benchmark_profiles(
    s: &SpectrumScenario,
    g: &SocialGraph,
    opts: &BenchmarkOptions,
) -> Result<BenchmarkProfiles> {
    let empty = SocialGraph::empty(s.n_users());
    match brute_force_optima(s, g, opts.cap) {
        Ok(sgum) => {
            let ncg = brute_force_optima(s, &empty, opts.cap)?;
            Ok(BenchmarkProfiles {
                ncg_sne: ncg.argmax_phi,
                sgum_sne: sgum.argmax_phi,
                num_opt: sgum.argmax_welfare,
                approximate: false,
            })
        }
        Err(Error::CapacityExceeded { .. }) => {
            let full = SocialGraph::complete(s.n_users(), 1.0)?;
            let ncg_sne = anneal_best_potential(s, &empty, opts, 0)?;
            let sgum_sne = anneal_best_potential(s, g, opts, 1)?;
            let num_opt = anneal_best_potential(s, &full, opts, 2)?;
            Ok(BenchmarkProfiles {
                ncg_sne,
                sgum_sne,
                num_opt,
                approximate: true,
            })
        }
        Err(e) => Err(e),
    }
}

/// Long-run chain at a temperature scaled to the observed potential spread;
/// returns the best-potential profile visited.
fn anneal_best_potential(
    s: &SpectrumScenario,
    g: &SocialGraph,
    opts: &BenchmarkOptions,
    stream: u64,
) -> Result<ChannelProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.fallback_seed.wrapping_add(stream));
    let mut sample = Vec::new();
    for _ in 0..32 {
        let a = s.random_profile(&mut rng);
        sample.push(potential(s, g, &a).total());
    }
    let max = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = sample.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let theta = if spread > 0.0 { 20.0 / spread } else { 1.0 };

    let a0 = s.random_profile(&mut rng);
    let cfg = ChainConfig::uniform(
        theta,
        1.0,
        s.n_users(),
        Horizon::Events(opts.fallback_events),
        rng.gen(),
    );
    let mut best = (potential(s, g, &a0).total(), a0.clone());
    simulate_observe(s, g, &cfg, &a0, |event, profile| {
        if event.potential > best.0 {
            best = (event.potential, profile.clone());
        }
    })?;
    Ok(best.1)
}
