//! The SGUM power-control game: SINR log-utilities with linear power costs,
//! the closed-form two-user equilibrium, the two-user social optimum, and an
//! asynchronous best-response iteration for many users (the game is
//! supermodular, so sweeps from the zero profile climb to the least SNE).
//!
//! Logarithms are natural throughout, matching the first-order conditions.

use crate::social::SocialGraph;
use crate::{Error, Result};

/// A power-control world: direct gains, cross gains, receiver noise, power
/// costs, and the social ties among the links.
#[derive(Debug, Clone)]
pub struct PowerScenario {
    n_users: usize,
    /// Direct channel gain of each link.
    h: Vec<f64>,
    /// Cross gain `g[i][j]`: transmitter i into receiver j; `g[i][i]` unused.
    g: Vec<Vec<f64>>,
    /// Noise at each receiver, watts.
    noise: Vec<f64>,
    /// Cost per watt of transmit power.
    cost: Vec<f64>,
    ties: SocialGraph,
    /// Optional box constraint on every transmit power. The game itself is
    /// unconstrained; this is an opt-in scenario parameter.
    power_cap: Option<f64>,
}

impl PowerScenario {
    pub fn new(
        h: Vec<f64>,
        g: Vec<Vec<f64>>,
        noise: Vec<f64>,
        cost: Vec<f64>,
        ties: SocialGraph,
    ) -> Result<Self> {
        let n_users = h.len();
        if n_users == 0 {
            return Err(Error::Validation("scenario needs at least one link".into()));
        }
        if g.len() != n_users
            || g.iter().any(|row| row.len() != n_users)
            || noise.len() != n_users
            || cost.len() != n_users
        {
            return Err(Error::Validation(
                "gain matrix, noise and cost must agree on the link count".into(),
            ));
        }
        if ties.n_users() != n_users {
            return Err(Error::Validation(format!(
                "social graph covers {} users, scenario has {n_users}",
                ties.n_users()
            )));
        }
        if let Some(v) = h.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Validation(format!("direct gain {v} must be positive")));
        }
        if let Some(v) = g.iter().flatten().find(|&&v| !(v >= 0.0)) {
            return Err(Error::Validation(format!("cross gain {v} must be nonnegative")));
        }
        if let Some(v) = noise.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Validation(format!("noise {v} must be positive")));
        }
        if let Some(v) = cost.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Validation(format!("power cost {v} must be positive")));
        }
        Ok(Self {
            n_users,
            h,
            g,
            noise,
            cost,
            ties,
            power_cap: None,
        })
    }

    /// Constrain every transmit power to `cap` watts.
    pub fn with_power_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::Validation(format!("power cap {cap} must be positive")));
        }
        self.power_cap = Some(cap);
        Ok(self)
    }

    /// Gains from link geometry: `h_i = d(T_i, R_i)^-alpha` and
    /// `g_ij = d(T_i, R_j)^-alpha`.
    pub fn from_path_loss(
        tx: &[(f64, f64)],
        rx: &[(f64, f64)],
        alpha: f64,
        noise: Vec<f64>,
        cost: Vec<f64>,
        ties: SocialGraph,
    ) -> Result<Self> {
        let n = tx.len();
        if rx.len() != n {
            return Err(Error::Validation(
                "every link needs one transmitter and one receiver".into(),
            ));
        }
        let gain = |a: (f64, f64), b: (f64, f64)| -> Result<f64> {
            let d = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
            if d == 0.0 {
                return Err(Error::Validation(
                    "coincident transmitter and receiver".into(),
                ));
            }
            Ok(d.powf(-alpha))
        };
        let mut h = Vec::with_capacity(n);
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            h.push(gain(tx[i], rx[i])?);
            for j in 0..n {
                if i != j {
                    g[i][j] = gain(tx[i], rx[j])?;
                }
            }
        }
        Self::new(h, g, noise, cost, ties)
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn direct_gain(&self, i: usize) -> f64 {
        self.h[i]
    }

    pub fn cross_gain(&self, from: usize, to: usize) -> f64 {
        self.g[from][to]
    }

    pub fn noise(&self, i: usize) -> f64 {
        self.noise[i]
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.cost[i]
    }

    pub fn ties(&self) -> &SocialGraph {
        &self.ties
    }

    pub fn power_cap(&self) -> Option<f64> {
        self.power_cap
    }

    /// Clamp a power to the box constraint, when one is set.
    fn clamp(&self, p: f64) -> f64 {
        match self.power_cap {
            Some(cap) => p.min(cap),
            None => p,
        }
    }
}

/// Transmit powers, one per link.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile(pub Vec<f64>);

impl PowerProfile {
    pub fn power(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Signal to interference and noise ratio of link `i`; the self term is not
/// part of the interference sum.
pub fn sinr(sc: &PowerScenario, p: &PowerProfile, i: usize) -> f64 {
    let mut den = sc.noise(i);
    for j in 0..sc.n_users() {
        if j != i {
            den += sc.cross_gain(j, i) * p.power(j);
        }
    }
    sc.direct_gain(i) * p.power(i) / den
}

/// Individual utility `ln(sinr_i) - c_i p_i`; the log blows up at zero power.
pub fn power_utility(sc: &PowerScenario, p: &PowerProfile, i: usize) -> Result<f64> {
    if !(p.power(i) > 0.0) {
        return Err(Error::Domain(format!(
            "utility of link {i} undefined at power {}",
            p.power(i)
        )));
    }
    Ok(sinr(sc, p, i).ln() - sc.cost(i) * p.power(i))
}

/// Sum of all individual utilities.
pub fn power_welfare(sc: &PowerScenario, p: &PowerProfile) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..sc.n_users() {
        total += power_utility(sc, p, i)?;
    }
    Ok(total)
}

/// Social group utility of link `i` under the scenario's ties.
pub fn power_group_utility(sc: &PowerScenario, p: &PowerProfile, i: usize) -> Result<f64> {
    let mut total = power_utility(sc, p, i)?;
    for (_, k, w) in sc.ties().ties().filter(|&(a, _, _)| a == i) {
        total += w * power_utility(sc, p, k)?;
    }
    Ok(total)
}

/// Positive root of the stationarity condition
/// `1/p - w g / (n + g p) - c = 0`, which is
/// `sqrt(alpha^2 + beta) - alpha` with `alpha = (w g + c n - g) / (2 c g)`
/// and `beta = n / (c g)`. Decoupled cases (`w = 0` or `g = 0`) reduce to the
/// cost-only optimum `1/c`.
fn own_power_root(g: f64, n_other: f64, c: f64, w: f64) -> f64 {
    if w == 0.0 || g == 0.0 {
        return 1.0 / c;
    }
    let alpha = (w * g + c * n_other - g) / (2.0 * c * g);
    let beta = n_other / (c * g);
    let disc = (alpha * alpha + beta).sqrt();
    if alpha > 0.0 {
        // Equivalent form that avoids cancellation for large positive alpha.
        beta / (alpha + disc)
    } else {
        disc - alpha
    }
}

/// Closed-form two-user SNE. Each power is independent of the other link's
/// strategy, so the pair is the unique equilibrium.
pub fn two_user_sne(sc: &PowerScenario) -> Result<PowerProfile> {
    if sc.n_users() != 2 {
        return Err(Error::Usage(format!(
            "closed form covers exactly two links, scenario has {}",
            sc.n_users()
        )));
    }
    let p0 = own_power_root(
        sc.cross_gain(0, 1),
        sc.noise(1),
        sc.cost(0),
        sc.ties().tie(0, 1),
    );
    let p1 = own_power_root(
        sc.cross_gain(1, 0),
        sc.noise(0),
        sc.cost(1),
        sc.ties().tie(1, 0),
    );
    Ok(PowerProfile(vec![sc.clamp(p0), sc.clamp(p1)]))
}

/// Two-user socially optimal power of link `i`: the unique positive root of
/// `1/p - g/(n + g p) - c = 0` (the equilibrium condition at full altruism).
pub fn social_optimal_power(sc: &PowerScenario, i: usize) -> Result<f64> {
    if sc.n_users() != 2 {
        return Err(Error::Usage(format!(
            "closed form covers exactly two links, scenario has {}",
            sc.n_users()
        )));
    }
    let other = 1 - i;
    Ok(sc.clamp(own_power_root(
        sc.cross_gain(i, other),
        sc.noise(other),
        sc.cost(i),
        1.0,
    )))
}

/// Best response of link `i` to the other links' powers: the root of
/// `1/p - sum_k w_ik g_ik / (n_k + sum_{j != k} g_jk p_j) - c_i = 0`,
/// located by bisection on `(0, 1/c_i]`. Own power appears inside the
/// neighbors' denominators, and the derivative is positive near zero and
/// nonpositive at `1/c_i`, so the bracket always holds a root.
pub fn best_response(sc: &PowerScenario, p: &PowerProfile, i: usize) -> Result<f64> {
    let n = sc.n_users();
    if p.0.len() != n {
        return Err(Error::Validation(format!(
            "profile has {} entries for {n} links",
            p.0.len()
        )));
    }
    if let Some(v) = p.0.iter().enumerate().find(|&(j, &v)| j != i && !(v >= 0.0)) {
        return Err(Error::Validation(format!(
            "other links' powers must be nonnegative, got {}",
            v.1
        )));
    }
    // Tied neighbors and the constant part of each denominator.
    let mut terms: Vec<(f64, f64, f64)> = Vec::new(); // (w_ik, g_ik, base_k)
    for (_, k, w) in sc.ties().ties().filter(|&(a, _, _)| a == i) {
        let mut base = sc.noise(k);
        for j in 0..n {
            if j != k && j != i {
                base += sc.cross_gain(j, k) * p.power(j);
            }
        }
        terms.push((w, sc.cross_gain(i, k), base));
    }
    if terms.iter().all(|&(w, g, _)| w * g == 0.0) {
        return Ok(sc.clamp(1.0 / sc.cost(i)));
    }
    let foc = |power: f64| -> f64 {
        let mut value = 1.0 / power - sc.cost(i);
        for &(w, g, base) in &terms {
            value -= w * g / (base + g * power);
        }
        value
    };
    let mut lo = 0.0;
    let mut hi = 1.0 / sc.cost(i);
    // Nonnegative ties put the root at or below 1/c; negative (generalized)
    // ties can push it further out, so widen until the condition flips sign.
    while foc(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if foc(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    // Group utility rises up to the stationary point, so the boxed optimum
    // is the clamped root.
    Ok(sc.clamp(0.5 * (lo + hi)))
}

/// Result of the round-robin best-response iteration.
#[derive(Debug, Clone)]
pub struct IterativeSolve {
    pub profile: PowerProfile,
    pub converged: bool,
    pub rounds: usize,
    /// Profile after every sweep, for monotonicity inspection.
    pub sweeps: Vec<Vec<f64>>,
}

/// Asynchronous best-response sweeps from the zero profile. Supermodularity
/// drives the iterates upward coordinatewise until they settle at the least
/// SNE; stop when a whole sweep moves no coordinate more than `tol`.
pub fn solve_sne_iterative(
    sc: &PowerScenario,
    tol: f64,
    max_rounds: usize,
) -> Result<IterativeSolve> {
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tolerance {tol} must be positive")));
    }
    let n = sc.n_users();
    let mut profile = PowerProfile(vec![0.0; n]);
    let mut sweeps = Vec::new();
    for round in 1..=max_rounds {
        let mut largest_move = 0.0f64;
        for i in 0..n {
            let next = best_response(sc, &profile, i)?;
            largest_move = largest_move.max((next - profile.0[i]).abs());
            profile.0[i] = next;
        }
        sweeps.push(profile.0.clone());
        if largest_move < tol {
            return Ok(IterativeSolve {
                profile,
                converged: true,
                rounds: round,
                sweeps,
            });
        }
    }
    Ok(IterativeSolve {
        profile,
        converged: false,
        rounds: max_rounds,
        sweeps,
    })
}
