//! Exact chain analytics on enumerable channel-profile spaces: the transition
//! rate matrix, the Gibbs stationary law, total-variation distance, transient
//! laws through the matrix exponential, closed-form mixing-time bounds, and
//! the uniformized spectral/conductance diagnostics.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::glauber::acceptance_probability;
use crate::social::SocialGraph;
use crate::spectrum::{potential, social_group_utility, welfare, ChannelProfile, SpectrumScenario};
use crate::{Error, Result};

/// Default cap on the number of enumerable states.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;
/// Dense-matrix operations (generator, matrix exponential, eigenvalues) are
/// restricted to this many states.
pub const DEFAULT_MATRIX_CAP: usize = 4096;

/// The enumerated joint channel space: the mixed-radix product of all vacant
/// sets, with user 0 as the most significant digit.
#[derive(Debug, Clone)]
pub struct StateSpace {
    sets: Vec<Vec<u16>>,
    strides: Vec<usize>,
    len: usize,
}

impl StateSpace {
    pub fn new(s: &SpectrumScenario, cap: usize) -> Result<Self> {
        let sets: Vec<Vec<u16>> = s.vacant_sets().to_vec();
        let mut size: u128 = 1;
        for set in &sets {
            size = size.saturating_mul(set.len() as u128);
        }
        if size > cap as u128 {
            return Err(Error::CapacityExceeded {
                size,
                cap: cap as u128,
            });
        }
        let len = size as usize;
        let mut strides = vec![1usize; sets.len()];
        for n in (0..sets.len().saturating_sub(1)).rev() {
            strides[n] = strides[n + 1] * sets[n + 1].len();
        }
        Ok(Self { sets, strides, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn n_users(&self) -> usize {
        self.sets.len()
    }

    /// Channels user `user` can pick from.
    pub fn choices(&self, user: usize) -> &[u16] {
        &self.sets[user]
    }

    pub fn profile(&self, mut index: usize) -> ChannelProfile {
        debug_assert!(index < self.len);
        let mut channels = vec![0u16; self.sets.len()];
        for (n, set) in self.sets.iter().enumerate() {
            channels[n] = set[index / self.strides[n]];
            index %= self.strides[n];
        }
        ChannelProfile::from_raw(channels)
    }

    pub fn index(&self, a: &ChannelProfile) -> usize {
        let mut idx = 0;
        for (n, set) in self.sets.iter().enumerate() {
            let pos = set
                .binary_search(&a.channel(n))
                .expect("profile channel outside the vacant set");
            idx += pos * self.strides[n];
        }
        idx
    }

    pub fn iter(&self) -> impl Iterator<Item = ChannelProfile> + '_ {
        (0..self.len).map(|i| self.profile(i))
    }
}

/// The Gibbs stationary law `q*(a) ~ exp(theta * phi(a))` over an enumerated
/// space, with the potential and welfare tables kept alongside.
#[derive(Debug, Clone)]
pub struct StationaryLaw {
    pub space: StateSpace,
    pub theta: f64,
    pub phi: Vec<f64>,
    pub welfare: Vec<f64>,
    pub probs: Vec<f64>,
}

impl StationaryLaw {
    pub fn new(s: &SpectrumScenario, g: &SocialGraph, theta: f64, cap: usize) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::Validation(format!(
                "theta {theta} must be finite and nonnegative"
            )));
        }
        let space = StateSpace::new(s, cap)?;
        let mut phi = Vec::with_capacity(space.len());
        let mut welfare_tab = Vec::with_capacity(space.len());
        for a in space.iter() {
            phi.push(potential(s, g, &a).total());
            welfare_tab.push(welfare(s, &a));
        }
        // Softmax anchored at the maximum so huge theta cannot overflow.
        let phi_max = phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut probs: Vec<f64> = phi.iter().map(|&p| (theta * (p - phi_max)).exp()).collect();
        let z: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= z;
        }
        Ok(Self {
            space,
            theta,
            phi,
            welfare: welfare_tab,
            probs,
        })
    }

    /// Expected potential under the stationary law.
    pub fn expected_potential(&self) -> f64 {
        self.phi.iter().zip(&self.probs).map(|(p, q)| p * q).sum()
    }

    /// Expected welfare under the stationary law.
    pub fn expected_welfare(&self) -> f64 {
        self.welfare.iter().zip(&self.probs).map(|(v, q)| v * q).sum()
    }
}

/// An enumerable chain with its dense transition rate matrix.
#[derive(Debug, Clone)]
pub struct ExactChain {
    pub law: StationaryLaw,
    pub tau: Vec<f64>,
    /// Rate matrix: `generator[(i, j)]` is the rate from state i to state j;
    /// rows sum to zero.
    pub generator: DMatrix<f64>,
}

/// Build the exact chain. The rate from `a` to the single-coordinate
/// deviation `a'` (user n moving within its vacant set) is
/// `tau_n / |M_n| * exp(theta * min(0, S_n(a') - S_n(a)))`; every other
/// off-diagonal rate is zero.
pub fn exact_chain(
    s: &SpectrumScenario,
    g: &SocialGraph,
    theta: f64,
    tau: &[f64],
    cap: usize,
) -> Result<ExactChain> {
    if tau.len() != s.n_users() {
        return Err(Error::Validation(format!(
            "{} update rates for {} users",
            tau.len(),
            s.n_users()
        )));
    }
    if let Some(t) = tau.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::Validation(format!("update rate {t} must be positive")));
    }
    let law = StationaryLaw::new(s, g, theta, cap)?;
    let size = law.space.len();
    let mut generator = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        let a = law.space.profile(i);
        let mut exit = 0.0;
        for n in 0..s.n_users() {
            let vacant = s.vacant(n);
            let s_old = social_group_utility(s, g, &a, n);
            for &ch in vacant {
                if ch == a.channel(n) {
                    continue;
                }
                let mut b = a.clone();
                b.set_channel(n, ch);
                let s_new = social_group_utility(s, g, &b, n);
                let rate = tau[n] / vacant.len() as f64
                    * acceptance_probability(s_new, s_old, theta);
                let j = law.space.index(&b);
                generator[(i, j)] = rate;
                exit += rate;
            }
        }
        generator[(i, i)] = -exit;
    }
    Ok(ExactChain {
        law,
        tau: tau.to_vec(),
        generator,
    })
}

impl ExactChain {
    /// `max_j |sum_i q*_i Q_ij|`: how far the stationary vector is from the
    /// null space of the generator.
    pub fn stationarity_residual(&self) -> f64 {
        let size = self.law.space.len();
        let mut worst: f64 = 0.0;
        for j in 0..size {
            let mut acc = 0.0;
            for i in 0..size {
                acc += self.law.probs[i] * self.generator[(i, j)];
            }
            worst = worst.max(acc.abs());
        }
        worst
    }

    /// Operator infinity norm of the generator (max absolute row sum).
    pub fn generator_norm_inf(&self) -> f64 {
        let size = self.law.space.len();
        (0..size)
            .map(|i| (0..size).map(|j| self.generator[(i, j)].abs()).sum())
            .fold(0.0, f64::max)
    }

    /// Largest relative detailed-balance violation over all transitions:
    /// compares `q*_a q_{a,a'}` with `q*_{a'} q_{a',a}`.
    pub fn detailed_balance_residual(&self) -> f64 {
        let size = self.law.space.len();
        let mut worst: f64 = 0.0;
        for i in 0..size {
            for j in (i + 1)..size {
                let fwd = self.law.probs[i] * self.generator[(i, j)];
                let bwd = self.law.probs[j] * self.generator[(j, i)];
                let scale = fwd.abs().max(bwd.abs());
                if scale > 0.0 {
                    worst = worst.max((fwd - bwd).abs() / scale);
                }
            }
        }
        worst
    }

    /// Distribution at time `t` started from the state `initial`, through the
    /// matrix exponential of the generator (scaling-and-squaring).
    pub fn transient_distribution(&self, initial: usize, t: f64) -> Vec<f64> {
        let p_t = (self.generator.clone() * t).exp();
        (0..self.law.space.len()).map(|j| p_t[(initial, j)]).collect()
    }

    /// Worst-case (over initial states) total variation to stationarity at `t`.
    pub fn max_tv_at(&self, t: f64) -> f64 {
        let p_t = (self.generator.clone() * t).exp();
        let size = self.law.space.len();
        let mut worst: f64 = 0.0;
        for i in 0..size {
            let mut acc = 0.0;
            for j in 0..size {
                acc += (p_t[(i, j)] - self.law.probs[j]).abs();
            }
            worst = worst.max(0.5 * acc);
        }
        worst
    }

    /// First time the worst-case total variation drops to `epsilon`, located
    /// by doubling and bisection; the returned time is on the converged side.
    pub fn measured_mixing_time(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Validation(format!(
                "epsilon {epsilon} outside (0, 0.5)"
            )));
        }
        if self.max_tv_at(0.0) <= epsilon {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        let mut grow = 0;
        while self.max_tv_at(hi) > epsilon {
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return Err(Error::Domain(
                    "chain failed to mix within the search budget".into(),
                ));
            }
        }
        let mut lo = if grow == 0 { 0.0 } else { hi / 2.0 };
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.max_tv_at(mid) <= epsilon {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Total variation distance between two distributions on the same enumeration.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Usage(format!(
            "distributions have different supports: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    debug_assert!((q.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Extremes of the potential over the state space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialExtremes {
    pub max: f64,
    pub min: f64,
}

pub fn potential_extremes(
    s: &SpectrumScenario,
    g: &SocialGraph,
    cap: usize,
) -> Result<PotentialExtremes> {
    let space = StateSpace::new(s, cap)?;
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for a in space.iter() {
        let p = potential(s, g, &a).total();
        max = max.max(p);
        min = min.min(p);
    }
    Ok(PotentialExtremes { max, min })
}

/// Closed-form upper bounds on the epsilon-mixing time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingBounds {
    /// Spectral-analysis bound, valid for every theta.
    pub general: f64,
    /// Path-coupling bound; present only in the contractive regime
    /// (`theta < theta_threshold`, equivalently a positive contraction rate).
    pub coupled: Option<f64>,
    /// Threshold temperature below which the coupled bound applies.
    pub theta_threshold: f64,
}

/// Evaluate both closed-form mixing bounds.
///
/// With `delta = phi_max - phi_min`, `N` users, vacant-set sizes in
/// `[m_min, m_max]` and rates in `[tau_min, tau_max]`:
///
/// * general bound:
///   `N m_max^(2N+3) tau_max / (m_min tau_min^2) * exp(4 theta delta)
///    * (2 ln(1/(2 eps)) + N ln(m_max) + theta delta)`
/// * threshold: `theta_th = ln(N m_min^2 tau_min / ((N-1) m_max tau_max)) / delta`
/// * coupled bound: `ln(N/eps) m_min / (m_max tau_max L)` with the contraction
///   rate `L = (N m_min^2 tau_min / (m_max tau_max) exp(-theta delta) + 1 - N) / N`.
pub fn mixing_bounds(
    s: &SpectrumScenario,
    g: &SocialGraph,
    theta: f64,
    tau: &[f64],
    epsilon: f64,
    extremes: Option<PotentialExtremes>,
    cap: usize,
) -> Result<MixingBounds> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Validation(format!(
            "epsilon {epsilon} outside (0, 0.5)"
        )));
    }
    if tau.len() != s.n_users() {
        return Err(Error::Validation(format!(
            "{} update rates for {} users",
            tau.len(),
            s.n_users()
        )));
    }
    let extremes = match extremes {
        Some(e) => e,
        None => potential_extremes(s, g, cap)?,
    };
    let delta = (extremes.max - extremes.min).max(0.0);
    let n = s.n_users() as f64;
    let m_max = s.vacant_sets().iter().map(Vec::len).max().unwrap() as f64;
    let m_min = s.vacant_sets().iter().map(Vec::len).min().unwrap() as f64;
    let tau_max = tau.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tau_min = tau.iter().cloned().fold(f64::INFINITY, f64::min);

    let general = n * m_max.powi(2 * s.n_users() as i32 + 3) * tau_max / (m_min * tau_min * tau_min)
        * (4.0 * theta * delta).exp()
        * (2.0 * (1.0 / (2.0 * epsilon)).ln() + n * m_max.ln() + theta * delta);

    let ratio = n * m_min * m_min * tau_min / ((n - 1.0) * m_max * tau_max);
    let theta_threshold = if delta == 0.0 {
        if ratio > 1.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        ratio.ln() / delta
    };
    let contraction =
        (n * m_min * m_min * tau_min / (m_max * tau_max) * (-theta * delta).exp() + 1.0 - n) / n;
    let coupled = if contraction > 0.0 {
        Some((n / epsilon).ln() * m_min / (m_max * tau_max * contraction))
    } else {
        None
    };
    Ok(MixingBounds {
        general,
        coupled,
        theta_threshold,
    })
}

/// Spectral diagnostics of the uniformized chain `P = I + Q/xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCheck {
    /// Uniformization rate `xi = m_max tau_max N / m_min`.
    pub xi: f64,
    /// Second largest eigenvalue of the reversible uniformized matrix.
    pub lambda2: f64,
    /// Conductance floor: the minimum of `q*_a q_{a,a'} / xi` over transitions.
    pub min_edge_flow: f64,
    /// Whether the spectral gap respects `1 - lambda2 >= min_edge_flow^2 / 2`.
    pub cheeger_ok: bool,
}

pub fn spectral_check(chain: &ExactChain) -> Result<SpectralCheck> {
    let size = chain.law.space.len();
    if size < 2 {
        return Err(Error::Usage(
            "spectral diagnostics need at least two states".into(),
        ));
    }
    let n = chain.law.space.n_users() as f64;
    let m_max = (0..chain.law.space.n_users())
        .map(|u| chain.law.space.choices(u).len())
        .max()
        .unwrap() as f64;
    let m_min = (0..chain.law.space.n_users())
        .map(|u| chain.law.space.choices(u).len())
        .min()
        .unwrap() as f64;
    let tau_max = chain.tau.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let xi = m_max * tau_max / m_min * n;

    // Uniformized stochastic matrix; xi bounds every exit rate by construction.
    let mut p = chain.generator.clone() / xi;
    for i in 0..size {
        p[(i, i)] += 1.0;
        debug_assert!(p[(i, i)] >= 0.0, "xi too small for uniformization");
    }

    // Reversible chains diagonalize after the q*-similarity transform
    // s_ij = sqrt(q_i/q_j) p_ij; symmetrize the residual rounding away.
    let q = &chain.law.probs;
    let mut sym = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            sym[(i, j)] = (q[i] / q[j]).sqrt() * p[(i, j)];
        }
    }
    let sym = (sym.clone() + sym.transpose()) * 0.5;
    let mut eigen: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect();
    eigen.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let lambda2 = eigen[1];

    let mut min_edge_flow = f64::INFINITY;
    for i in 0..size {
        for j in 0..size {
            if i != j && chain.generator[(i, j)] > 0.0 {
                min_edge_flow = min_edge_flow.min(q[i] * chain.generator[(i, j)] / xi);
            }
        }
    }
    let cheeger_ok = 1.0 - lambda2 >= min_edge_flow * min_edge_flow / 2.0;
    Ok(SpectralCheck {
        xi,
        lambda2,
        min_edge_flow,
        cheeger_ok,
    })
}
