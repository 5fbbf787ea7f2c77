//! Physical spectrum-access scenarios and the SGUM objective functions:
//! received interference, individual and social group utilities, the
//! potential function with its physical/social decomposition, and welfare.
//!
//! All internal powers are watts; dBm appears only at the configuration
//! boundary because interference sums raw powers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::social::SocialGraph;
use crate::{Error, Result};

/// Which users can interfere with each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterferenceRange {
    /// Every pair of users interferes (the default for spectrum access).
    Complete,
    /// Only pairs within `delta` meters interfere.
    Radius(f64),
}

/// Convert a dBm level to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Convert watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// An immutable spectrum-access world: user positions and powers, path loss,
/// per-(user, channel) noise floors, vacant channel sets, and the
/// interference range. Pairwise interference couplings are precomputed.
#[derive(Debug, Clone)]
pub struct SpectrumScenario {
    n_users: usize,
    n_channels: usize,
    positions: Vec<(f64, f64)>,
    powers: Vec<f64>,
    alpha: f64,
    noise: Vec<Vec<f64>>,
    vacant: Vec<Vec<u16>>,
    range: InterferenceRange,
    /// coupling[m][n]: interference power m inflicts on n when co-channel.
    coupling: Vec<Vec<f64>>,
    neighbors: Vec<Vec<usize>>,
}

impl SpectrumScenario {
    pub fn new(
        positions: Vec<(f64, f64)>,
        powers: Vec<f64>,
        alpha: f64,
        noise: Vec<Vec<f64>>,
        vacant: Vec<Vec<u16>>,
        range: InterferenceRange,
    ) -> Result<Self> {
        let n_users = positions.len();
        if n_users == 0 {
            return Err(Error::Validation("scenario needs at least one user".into()));
        }
        if powers.len() != n_users || noise.len() != n_users || vacant.len() != n_users {
            return Err(Error::Validation(
                "positions, powers, noise and vacant sets must agree on the user count".into(),
            ));
        }
        if alpha <= 0.0 {
            return Err(Error::Validation(format!("path loss exponent {alpha} must be positive")));
        }
        if let Some(p) = powers.iter().find(|&&p| !(p > 0.0)) {
            return Err(Error::Validation(format!("transmit power {p} must be positive")));
        }
        let n_channels = noise.first().map_or(0, Vec::len);
        if n_channels == 0 {
            return Err(Error::Validation("scenario needs at least one channel".into()));
        }
        for (n, row) in noise.iter().enumerate() {
            if row.len() != n_channels {
                return Err(Error::Validation(format!(
                    "noise row for user {n} has {} channels, expected {n_channels}",
                    row.len()
                )));
            }
            if let Some(w) = row.iter().find(|&&w| !(w > 0.0)) {
                return Err(Error::Validation(format!("noise power {w} must be positive")));
            }
        }
        let mut vacant_sorted = Vec::with_capacity(n_users);
        for (n, set) in vacant.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::Validation(format!("user {n} has an empty vacant set")));
            }
            if let Some(&ch) = set.iter().find(|&&ch| ch as usize >= n_channels) {
                return Err(Error::Validation(format!(
                    "user {n} lists vacant channel {ch} outside 0..{n_channels}"
                )));
            }
            vacant_sorted.push(set);
        }
        if let InterferenceRange::Radius(delta) = range {
            if !(delta >= 0.0) {
                return Err(Error::Validation(format!(
                    "interference radius {delta} must be nonnegative"
                )));
            }
        }

        // Distances and couplings; coincident users would blow up d^-alpha.
        let mut coupling = vec![vec![0.0; n_users]; n_users];
        let mut neighbors = vec![Vec::new(); n_users];
        for n in 0..n_users {
            for m in 0..n_users {
                if m == n {
                    continue;
                }
                let dx = positions[m].0 - positions[n].0;
                let dy = positions[m].1 - positions[n].1;
                let d = (dx * dx + dy * dy).sqrt();
                if d == 0.0 {
                    return Err(Error::Validation(format!(
                        "users {m} and {n} share the position ({}, {})",
                        positions[m].0, positions[m].1
                    )));
                }
                let linked = match range {
                    InterferenceRange::Complete => true,
                    InterferenceRange::Radius(delta) => d <= delta,
                };
                if linked {
                    coupling[m][n] = powers[m] * d.powf(-alpha);
                    neighbors[n].push(m);
                }
            }
        }

        Ok(Self {
            n_users,
            n_channels,
            positions,
            powers,
            alpha,
            noise,
            vacant: vacant_sorted,
            range,
            coupling,
            neighbors,
        })
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn range(&self) -> InterferenceRange {
        self.range
    }

    pub fn noise(&self, user: usize, channel: u16) -> f64 {
        self.noise[user][channel as usize]
    }

    /// Sorted vacant channel set of `user`.
    pub fn vacant(&self, user: usize) -> &[u16] {
        &self.vacant[user]
    }

    pub fn vacant_sets(&self) -> &[Vec<u16>] {
        &self.vacant
    }

    /// Interference power `m` inflicts on `n` when they share a channel
    /// (zero when they are not interference neighbors).
    pub fn coupling(&self, m: usize, n: usize) -> f64 {
        self.coupling[m][n]
    }

    /// Users that can interfere with `n`.
    pub fn interference_neighbors(&self, n: usize) -> &[usize] {
        &self.neighbors[n]
    }

    /// A uniformly random valid channel profile.
    pub fn random_profile<R: Rng>(&self, rng: &mut R) -> ChannelProfile {
        let channels = self
            .vacant
            .iter()
            .map(|set| set[rng.gen_range(0..set.len())])
            .collect();
        ChannelProfile { channels }
    }
}

/// Parameters for a randomly generated scenario: users scattered uniformly in
/// a square, equal powers, per-(user, channel) noise drawn uniformly in a dBm
/// interval, and vacant sets of random size.
#[derive(Debug, Clone)]
pub struct RandomScenarioParams {
    pub n_users: usize,
    pub n_channels: usize,
    pub side: f64,
    pub power_watts: f64,
    pub alpha: f64,
    pub noise_dbm: (f64, f64),
    pub range: InterferenceRange,
    /// Inclusive bounds on the vacant-set size; `None` keeps all channels vacant.
    pub vacant_size: Option<(usize, usize)>,
}

impl Default for RandomScenarioParams {
    fn default() -> Self {
        Self {
            n_users: 8,
            n_channels: 5,
            side: 500.0,
            power_watts: 0.1,
            alpha: 4.0,
            noise_dbm: (-100.0, -90.0),
            range: InterferenceRange::Complete,
            vacant_size: None,
        }
    }
}

/// Generate a scenario from `params`, deterministically in `seed`.
pub fn random_scenario(params: &RandomScenarioParams, seed: u64) -> Result<SpectrumScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n_users;
    let m = params.n_channels;
    let mut positions = Vec::with_capacity(n);
    while positions.len() < n {
        let p = (
            rng.gen::<f64>() * params.side,
            rng.gen::<f64>() * params.side,
        );
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    let (lo, hi) = params.noise_dbm;
    let noise = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| dbm_to_watts(lo + rng.gen::<f64>() * (hi - lo)))
                .collect()
        })
        .collect();
    let vacant = (0..n)
        .map(|_| match params.vacant_size {
            None => (0..m as u16).collect(),
            Some((min, max)) => {
                let size = rng.gen_range(min..=max.min(m));
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
    SpectrumScenario::new(
        positions,
        vec![params.power_watts; n],
        params.alpha,
        noise,
        vacant,
        params.range,
    )
}

/// A joint channel selection, one channel per user.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelProfile {
    channels: Vec<u16>,
}

impl ChannelProfile {
    /// Validate `channels` against the scenario's vacant sets.
    pub fn new(channels: Vec<u16>, scenario: &SpectrumScenario) -> Result<Self> {
        if channels.len() != scenario.n_users() {
            return Err(Error::Validation(format!(
                "profile has {} entries for {} users",
                channels.len(),
                scenario.n_users()
            )));
        }
        for (n, &ch) in channels.iter().enumerate() {
            if !scenario.vacant(n).contains(&ch) {
                return Err(Error::Validation(format!(
                    "channel {ch} is not vacant for user {n}"
                )));
            }
        }
        Ok(Self { channels })
    }

    /// Wrap raw channels without validating against a scenario.
    pub fn from_raw(channels: Vec<u16>) -> Self {
        Self { channels }
    }

    pub fn channel(&self, user: usize) -> u16 {
        self.channels[user]
    }

    pub fn channels(&self) -> &[u16] {
        &self.channels
    }

    pub fn set_channel(&mut self, user: usize, channel: u16) {
        self.channels[user] = channel;
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Compact text form: one digit per user for up to ten channels,
    /// dash-separated otherwise.
    pub fn digits(&self) -> String {
        if self.channels.iter().all(|&c| c < 10) {
            self.channels.iter().map(|c| c.to_string()).collect()
        } else {
            let parts: Vec<String> = self.channels.iter().map(|c| c.to_string()).collect();
            parts.join("-")
        }
    }
}

/// Total interference received by user `n`: co-channel neighbor powers plus
/// the noise floor of its chosen channel.
pub fn received_interference(s: &SpectrumScenario, a: &ChannelProfile, n: usize) -> f64 {
    let ch = a.channel(n);
    let mut total = s.noise(n, ch);
    for &m in s.interference_neighbors(n) {
        if a.channel(m) == ch {
            total += s.coupling(m, n);
        }
    }
    total
}

/// Individual utility: the negative of the received interference.
pub fn individual_utility(s: &SpectrumScenario, a: &ChannelProfile, n: usize) -> f64 {
    -received_interference(s, a, n)
}

/// All individual utilities at once.
pub fn utilities(s: &SpectrumScenario, a: &ChannelProfile) -> Vec<f64> {
    (0..s.n_users()).map(|n| individual_utility(s, a, n)).collect()
}

/// Social group utility of user `n`: its own utility plus the tie-weighted
/// utilities of its social group.
pub fn social_group_utility(
    s: &SpectrumScenario,
    g: &SocialGraph,
    a: &ChannelProfile,
    n: usize,
) -> f64 {
    let mut total = individual_utility(s, a, n);
    for (_, m, w) in g.ties().filter(|&(i, _, _)| i == n) {
        total += w * individual_utility(s, a, m);
    }
    total
}

/// The potential function split into its physical and social parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParts {
    /// System-wide interference level including noise (physical coupling).
    pub physical: f64,
    /// Tie-weighted co-channel interdependence (social coupling).
    pub social: f64,
}

impl PotentialParts {
    pub fn total(&self) -> f64 {
        self.physical + self.social
    }
}

/// Evaluate the potential at `a`. The decomposition is always computable;
/// the change-equivalence with social group utilities additionally needs the
/// symmetry preconditions checked by [`check_exact_potential_preconditions`].
pub fn potential(s: &SpectrumScenario, g: &SocialGraph, a: &ChannelProfile) -> PotentialParts {
    let mut pairwise = 0.0;
    let mut noise_sum = 0.0;
    let mut social = 0.0;
    for n in 0..s.n_users() {
        let ch = a.channel(n);
        noise_sum += s.noise(n, ch);
        for &m in s.interference_neighbors(n) {
            if a.channel(m) == ch {
                pairwise += s.coupling(m, n);
                let w = g.tie(n, m);
                if w != 0.0 {
                    social += w * s.coupling(m, n);
                }
            }
        }
    }
    PotentialParts {
        physical: -0.5 * pairwise - noise_sum,
        social: -0.5 * social,
    }
}

/// Welfare: the sum of all individual utilities.
pub fn welfare(s: &SpectrumScenario, a: &ChannelProfile) -> f64 {
    (0..s.n_users()).map(|n| individual_utility(s, a, n)).sum()
}

/// System-wide interference including noise floors; the negative of welfare.
pub fn total_interference(s: &SpectrumScenario, a: &ChannelProfile) -> f64 {
    (0..s.n_users()).map(|n| received_interference(s, a, n)).sum()
}

/// The physical/social coupling view: interference neighbors and the subset
/// of them that are also social neighbors.
#[derive(Debug, Clone)]
pub struct PhysicalSocialCoupling {
    pub physical: Vec<Vec<usize>>,
    pub social_physical: Vec<Vec<usize>>,
}

impl PhysicalSocialCoupling {
    pub fn new(s: &SpectrumScenario, g: &SocialGraph) -> Self {
        let physical: Vec<Vec<usize>> = (0..s.n_users())
            .map(|n| s.interference_neighbors(n).to_vec())
            .collect();
        let social_physical = (0..s.n_users())
            .map(|n| {
                physical[n]
                    .iter()
                    .copied()
                    .filter(|&m| g.tie(n, m) != 0.0)
                    .collect()
            })
            .collect();
        Self {
            physical,
            social_physical,
        }
    }
}

/// Check the preconditions under which unilateral social-group-utility changes
/// equal potential changes: equal transmit powers and symmetric ties. The
/// interference relation is symmetric by construction (shared distance metric).
pub fn check_exact_potential_preconditions(s: &SpectrumScenario, g: &SocialGraph) -> Result<()> {
    if g.n_users() != s.n_users() {
        return Err(Error::Usage(format!(
            "social graph covers {} users, scenario has {}",
            g.n_users(),
            s.n_users()
        )));
    }
    let p0 = s.powers()[0];
    if s.powers().iter().any(|&p| p != p0) {
        return Err(Error::Validation(
            "transmit powers differ across users".into(),
        ));
    }
    if !g.is_symmetric() {
        return Err(Error::Validation("social ties are not symmetric".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_scenario(range: InterferenceRange) -> SpectrumScenario {
        // Three users on a line at 0, 300, 700 m; one channel.
        SpectrumScenario::new(
            vec![(0.0, 0.0), (300.0, 0.0), (700.0, 0.0)],
            vec![0.1; 3],
            4.0,
            vec![vec![1e-13]; 3],
            vec![vec![0]; 3],
            range,
        )
        .unwrap()
    }

    fn two_user_scenario(distance: f64, noise: Vec<Vec<f64>>) -> SpectrumScenario {
        let n_channels = noise[0].len() as u16;
        SpectrumScenario::new(
            vec![(0.0, 0.0), (distance, 0.0)],
            vec![0.1; 2],
            4.0,
            noise,
            vec![(0..n_channels).collect(); 2],
            InterferenceRange::Complete,
        )
        .unwrap()
    }

    #[test]
    fn far_users_are_not_neighbors_in_radius_mode() {
        let s = SpectrumScenario::new(
            vec![(0.0, 0.0), (600.0, 0.0)],
            vec![0.1; 2],
            4.0,
            vec![vec![1e-13]; 2],
            vec![vec![0]; 2],
            InterferenceRange::Radius(500.0),
        )
        .unwrap();
        assert!(s.interference_neighbors(0).is_empty());
        assert!(s.interference_neighbors(1).is_empty());
    }

    #[test]
    fn close_users_are_neighbors_in_radius_mode() {
        let s = SpectrumScenario::new(
            vec![(0.0, 0.0), (400.0, 0.0)],
            vec![0.1; 2],
            4.0,
            vec![vec![1e-13]; 2],
            vec![vec![0]; 2],
            InterferenceRange::Radius(500.0),
        )
        .unwrap();
        assert_eq!(s.interference_neighbors(0), &[1]);
        assert_eq!(s.interference_neighbors(1), &[0]);
    }

    #[test]
    fn collinear_neighbors_follow_pairwise_distances() {
        let s = line_scenario(InterferenceRange::Radius(500.0));
        assert_eq!(s.interference_neighbors(0), &[1]);
        assert_eq!(s.interference_neighbors(1), &[0, 2]);
        assert_eq!(s.interference_neighbors(2), &[1]);
    }

    #[test]
    fn interference_without_co_channel_neighbor_is_noise_only() {
        let s = two_user_scenario(100.0, vec![vec![1e-13, 2e-13]; 2]);
        let a = ChannelProfile::new(vec![0, 1], &s).unwrap();
        assert_eq!(received_interference(&s, &a, 0), 1e-13);
        assert_eq!(received_interference(&s, &a, 1), 2e-13);
    }

    #[test]
    fn single_co_channel_neighbor_adds_path_loss_term() {
        // P d^-alpha = 0.1 * 100^-4 = 1e-9 on top of the 1e-13 noise floor.
        let s = two_user_scenario(100.0, vec![vec![1e-13]; 2]);
        let a = ChannelProfile::new(vec![0, 0], &s).unwrap();
        let got = received_interference(&s, &a, 0);
        assert!((got - (1e-9 + 1e-13)).abs() < 1e-22);
    }

    #[test]
    fn two_co_channel_neighbors_accumulate() {
        // Terms: 0.1*100^-4 = 1e-9 and 0.1*200^-4 = 6.25e-11.
        let s = SpectrumScenario::new(
            vec![(0.0, 0.0), (100.0, 0.0), (200.0, 0.0)],
            vec![0.1; 3],
            4.0,
            vec![vec![1e-13]; 3],
            vec![vec![0]; 3],
            InterferenceRange::Complete,
        )
        .unwrap();
        let a = ChannelProfile::new(vec![0, 0, 0], &s).unwrap();
        let got = received_interference(&s, &a, 0);
        assert!((got - (1e-9 + 6.25e-11 + 1e-13)).abs() < 1e-22);
    }

    #[test]
    fn utility_is_negated_interference_and_always_negative() {
        let s = two_user_scenario(100.0, vec![vec![1e-13]; 2]);
        let a = ChannelProfile::new(vec![0, 0], &s).unwrap();
        for n in 0..2 {
            assert_eq!(individual_utility(&s, &a, n), -received_interference(&s, &a, n));
            assert!(individual_utility(&s, &a, n) < 0.0);
        }
    }

    #[test]
    fn empty_graph_makes_group_utility_individual() {
        let s = line_scenario(InterferenceRange::Complete);
        let g = SocialGraph::empty(3);
        let a = ChannelProfile::new(vec![0, 0, 0], &s).unwrap();
        for n in 0..3 {
            assert_eq!(
                social_group_utility(&s, &g, &a, n),
                individual_utility(&s, &a, n)
            );
        }
    }

    #[test]
    fn complete_unit_graph_makes_group_utility_welfare() {
        let s = line_scenario(InterferenceRange::Complete);
        let g = SocialGraph::complete(3, 1.0).unwrap();
        let a = ChannelProfile::new(vec![0, 0, 0], &s).unwrap();
        let v = welfare(&s, &a);
        for n in 0..3 {
            assert!((social_group_utility(&s, &g, &a, n) - v).abs() <= 1e-24);
        }
    }

    #[test]
    fn half_tie_weights_one_term() {
        let s = two_user_scenario(100.0, vec![vec![1e-13]; 2]);
        let mut g = SocialGraph::empty(2);
        g.add_tie(0, 1, 0.5).unwrap();
        let a = ChannelProfile::new(vec![0, 0], &s).unwrap();
        let expect = individual_utility(&s, &a, 0) + 0.5 * individual_utility(&s, &a, 1);
        assert_eq!(social_group_utility(&s, &g, &a, 0), expect);
    }

    #[test]
    fn empty_graph_zeroes_social_part() {
        let s = line_scenario(InterferenceRange::Complete);
        let g = SocialGraph::empty(3);
        let a = ChannelProfile::new(vec![0, 0, 0], &s).unwrap();
        let parts = potential(&s, &g, &a);
        assert_eq!(parts.social, 0.0);
        assert_eq!(parts.total(), parts.physical);
    }

    #[test]
    fn distinct_channels_leave_only_noise() {
        let s = SpectrumScenario::new(
            vec![(0.0, 0.0), (100.0, 0.0), (200.0, 0.0)],
            vec![0.1; 3],
            4.0,
            vec![vec![1e-13, 2e-13, 3e-13]; 3],
            vec![vec![0, 1, 2]; 3],
            InterferenceRange::Complete,
        )
        .unwrap();
        let g = SocialGraph::complete(3, 1.0).unwrap();
        let a = ChannelProfile::new(vec![0, 1, 2], &s).unwrap();
        let parts = potential(&s, &g, &a);
        assert_eq!(parts.total(), -(1e-13 + 2e-13 + 3e-13));
        assert_eq!(welfare(&s, &a), -(1e-13 + 2e-13 + 3e-13));
    }

    #[test]
    fn complete_unit_graph_identifies_potential_with_welfare() {
        // Exhaustive comparison on small instances.
        for (n, m) in [(2usize, 2u16), (3, 3), (4, 2), (4, 3)] {
            let params = RandomScenarioParams {
                n_users: n,
                n_channels: m as usize,
                ..RandomScenarioParams::default()
            };
            let s = random_scenario(&params, 1000 + n as u64).unwrap();
            let g = SocialGraph::complete(n, 1.0).unwrap();
            let total = (m as usize).pow(n as u32);
            for idx in 0..total {
                let mut rest = idx;
                let mut profile = vec![0u16; n];
                for slot in profile.iter_mut().rev() {
                    *slot = (rest % m as usize) as u16;
                    rest /= m as usize;
                }
                let a = ChannelProfile::from_raw(profile);
                let phi = potential(&s, &g, &a).total();
                let v = welfare(&s, &a);
                assert!(
                    (phi - v).abs() <= 1e-9 * v.abs(),
                    "potential {phi} != welfare {v}"
                );
            }
        }
    }

    #[test]
    fn moving_to_quiet_channel_never_hurts() {
        let s = two_user_scenario(100.0, vec![vec![1e-13, 1e-13]; 2]);
        let shared = ChannelProfile::new(vec![0, 0], &s).unwrap();
        let split = ChannelProfile::new(vec![1, 0], &s).unwrap();
        assert!(individual_utility(&s, &split, 0) >= individual_utility(&s, &shared, 0));
    }

    #[test]
    fn co_channel_contributions_symmetric_under_equal_power() {
        let s = line_scenario(InterferenceRange::Complete);
        for n in 0..3 {
            for &m in s.interference_neighbors(n) {
                assert_eq!(s.coupling(m, n), s.coupling(n, m));
            }
        }
    }

    #[test]
    fn coupling_view_intersects_social_and_physical() {
        let s = line_scenario(InterferenceRange::Radius(500.0));
        let mut g = SocialGraph::empty(3);
        g.add_tie(0, 2, 1.0).unwrap();
        g.add_tie(2, 0, 1.0).unwrap();
        g.add_tie(0, 1, 0.5).unwrap();
        g.add_tie(1, 0, 0.5).unwrap();
        let view = PhysicalSocialCoupling::new(&s, &g);
        // 0 and 2 are socially tied but out of interference range.
        assert_eq!(view.social_physical[0], vec![1]);
        assert_eq!(view.social_physical[2], Vec::<usize>::new());
        for n in 0..3 {
            for m in &view.social_physical[n] {
                assert!(view.physical[n].contains(m));
            }
        }
    }

    #[test]
    fn precondition_check_rejects_unequal_powers_and_asymmetric_ties() {
        let s = SpectrumScenario::new(
            vec![(0.0, 0.0), (100.0, 0.0)],
            vec![0.1, 0.2],
            4.0,
            vec![vec![1e-13]; 2],
            vec![vec![0]; 2],
            InterferenceRange::Complete,
        )
        .unwrap();
        let g = SocialGraph::empty(2);
        assert!(check_exact_potential_preconditions(&s, &g).is_err());

        let s_eq = two_user_scenario(100.0, vec![vec![1e-13]; 2]);
        let mut asym = SocialGraph::empty(2);
        asym.add_tie(0, 1, 0.5).unwrap();
        assert!(check_exact_potential_preconditions(&s_eq, &asym).is_err());
        assert!(check_exact_potential_preconditions(&s_eq, &g).is_ok());
    }

    #[test]
    fn coincident_positions_rejected() {
        let err = SpectrumScenario::new(
            vec![(1.0, 1.0), (1.0, 1.0)],
            vec![0.1; 2],
            4.0,
            vec![vec![1e-13]; 2],
            vec![vec![0]; 2],
            InterferenceRange::Complete,
        );
        assert!(err.is_err());
    }

    #[test]
    fn dbm_round_trip() {
        assert!((dbm_to_watts(20.0) - 0.1).abs() < 1e-15);
        assert!((watts_to_dbm(dbm_to_watts(-95.0)) + 95.0).abs() < 1e-9);
    }

    #[test]
    fn random_scenario_is_deterministic() {
        let params = RandomScenarioParams {
            vacant_size: Some((2, 4)),
            ..RandomScenarioParams::default()
        };
        let a = random_scenario(&params, 11).unwrap();
        let b = random_scenario(&params, 11).unwrap();
        assert_eq!(a.positions(), b.positions());
        assert_eq!(a.vacant_sets(), b.vacant_sets());
    }
}
