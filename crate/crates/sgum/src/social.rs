//! Weighted social graphs: who cares about whom, and how much.
//!
//! Ties are stored as a sparse directed map; an absent pair means weight zero,
//! and explicit zeros are rejected so the sparse form stays canonical.
//! Symmetry is a property checked on demand, not a storage constraint, since
//! the power and random-access games permit asymmetric ties.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Admissible tie-weight range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieMode {
    /// Weights in (0, 1]: plain social affinity.
    Standard,
    /// Weights in (-inf, 1] \ {0}: negative ties model adversarial intent.
    Generalized,
}

/// A sparse directed graph of tie strengths among `n_users` users.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    n_users: usize,
    mode: TieMode,
    ties: BTreeMap<(usize, usize), f64>,
}

impl SocialGraph {
    /// An empty graph (no ties) over `n_users` users.
    pub fn empty(n_users: usize) -> Self {
        Self {
            n_users,
            mode: TieMode::Standard,
            ties: BTreeMap::new(),
        }
    }

    pub fn empty_with_mode(n_users: usize, mode: TieMode) -> Self {
        Self {
            n_users,
            mode,
            ties: BTreeMap::new(),
        }
    }

    /// Complete symmetric graph with every tie set to `weight`.
    pub fn complete(n_users: usize, weight: f64) -> Result<Self> {
        let mut g = Self::empty(n_users);
        for i in 0..n_users {
            for j in 0..n_users {
                if i != j {
                    g.add_tie(i, j, weight)?;
                }
            }
        }
        Ok(g)
    }

    /// Erdos-Renyi graph: each unordered pair is tied (in both directions,
    /// weight `tie_weight`) independently with probability `p_link`.
    ///
    /// Pairs are visited in lexicographic order with one uniform draw each, so
    /// the same seed yields nested edge sets as `p_link` grows.
    pub fn erdos_renyi(n_users: usize, p_link: f64, tie_weight: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_link) {
            return Err(Error::Validation(format!(
                "link probability {p_link} outside [0, 1]"
            )));
        }
        if !(tie_weight > 0.0 && tie_weight <= 1.0) {
            return Err(Error::Validation(format!(
                "tie weight {tie_weight} outside (0, 1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty(n_users);
        for i in 0..n_users {
            for j in (i + 1)..n_users {
                if rng.gen::<f64>() < p_link {
                    g.add_tie(i, j, tie_weight)?;
                    g.add_tie(j, i, tie_weight)?;
                }
            }
        }
        Ok(g)
    }

    /// Insert the directed tie `i -> j`. Rejects self-ties, out-of-range
    /// indices, weights outside the mode's range, and duplicates.
    pub fn add_tie(&mut self, i: usize, j: usize, weight: f64) -> Result<()> {
        if i == j {
            return Err(Error::Validation(format!("self-tie on user {i}")));
        }
        if i >= self.n_users || j >= self.n_users {
            return Err(Error::Validation(format!(
                "tie ({i}, {j}) outside user range 0..{}",
                self.n_users
            )));
        }
        self.check_weight(weight)
            .map_err(|msg| Error::Validation(format!("tie ({i}, {j}): {msg}")))?;
        if self.ties.insert((i, j), weight).is_some() {
            return Err(Error::Validation(format!("duplicate tie ({i}, {j})")));
        }
        Ok(())
    }

    fn check_weight(&self, weight: f64) -> std::result::Result<(), String> {
        if !weight.is_finite() {
            return Err(format!("weight {weight} is not finite"));
        }
        match self.mode {
            TieMode::Standard if !(weight > 0.0 && weight <= 1.0) => {
                Err(format!("weight {weight} outside (0, 1]"))
            }
            TieMode::Generalized if weight == 0.0 || weight > 1.0 => {
                Err(format!("weight {weight} outside (-inf, 1] \\ {{0}}"))
            }
            _ => Ok(()),
        }
    }

    /// Parse edge-list text: one `i j w` triple per line, `#` starts a
    /// comment. With `symmetrize`, each line also inserts the mirror tie.
    pub fn from_edge_list(
        text: &str,
        n_users: usize,
        mode: TieMode,
        symmetrize: bool,
    ) -> Result<Self> {
        let mut g = Self::empty_with_mode(n_users, mode);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `i j w`, got {} fields", fields.len()),
                });
            }
            let i: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad user index `{}`", fields[0]),
            })?;
            let j: usize = fields[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad user index `{}`", fields[1]),
            })?;
            let w: f64 = fields[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad weight `{}`", fields[2]),
            })?;
            g.add_tie(i, j, w).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if symmetrize {
                g.add_tie(j, i, w).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
            }
        }
        Ok(g)
    }

    /// Canonical serialization: ties sorted by `(i, j)`, weights printed with
    /// 17 significant digits so a reload is bit-exact.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (&(i, j), &w) in &self.ties {
            out.push_str(&format!("{i} {j} {w:.16e}\n"));
        }
        out
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn mode(&self) -> TieMode {
        self.mode
    }

    /// Tie strength `i -> j`; zero when absent.
    pub fn tie(&self, i: usize, j: usize) -> f64 {
        self.ties.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn n_ties(&self) -> usize {
        self.ties.len()
    }

    /// Directed ties in `(i, j)` order.
    pub fn ties(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.ties.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    /// The social group of user `i`: everyone `i` has a tie towards.
    pub fn social_group(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.n_users {
            return Err(Error::Validation(format!(
                "user {i} outside range 0..{}",
                self.n_users
            )));
        }
        Ok(self
            .ties
            .range((i, 0)..(i, usize::MAX))
            .map(|(&(_, j), _)| j)
            .collect())
    }

    /// True when every stored tie has an equal mirror.
    pub fn is_symmetric(&self) -> bool {
        self.ties
            .iter()
            .all(|(&(i, j), &w)| self.tie(j, i) == w)
    }

    /// Zero-sum condition for generalized graphs: the incoming tie weights of
    /// every user sum to -1 (within 1e-12), which makes the social group
    /// utilities sum to zero for any utility vector.
    pub fn is_zero_sum(&self) -> Result<bool> {
        if self.mode != TieMode::Generalized {
            return Err(Error::Usage(
                "zero-sum check is defined for generalized-mode graphs".into(),
            ));
        }
        let mut incoming = vec![0.0; self.n_users];
        for (&(_, j), &w) in &self.ties {
            incoming[j] += w;
        }
        Ok(incoming.iter().all(|&s| (s + 1.0).abs() <= 1e-12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn er_with_zero_probability_is_empty() {
        let g = SocialGraph::erdos_renyi(5, 0.0, 1.0, 7).unwrap();
        assert_eq!(g.n_ties(), 0);
    }

    #[test]
    fn er_with_unit_probability_is_complete() {
        let g = SocialGraph::erdos_renyi(5, 1.0, 1.0, 7).unwrap();
        assert_eq!(g.n_ties(), 20); // 10 unordered pairs, both directions
        assert!(g.is_symmetric());
    }

    #[test]
    fn er_rejects_bad_tie_weight() {
        assert!(SocialGraph::erdos_renyi(5, 0.5, 0.0, 7).is_err());
        assert!(SocialGraph::erdos_renyi(5, 0.5, 1.5, 7).is_err());
    }

    #[test]
    fn er_is_deterministic_given_seed() {
        let a = SocialGraph::erdos_renyi(20, 0.3, 0.5, 99).unwrap();
        let b = SocialGraph::erdos_renyi(20, 0.3, 0.5, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn er_edge_sets_nest_as_probability_grows() {
        let sparse = SocialGraph::erdos_renyi(15, 0.3, 1.0, 4).unwrap();
        let dense = SocialGraph::erdos_renyi(15, 0.7, 1.0, 4).unwrap();
        for (i, j, _) in sparse.ties() {
            assert!(dense.tie(i, j) != 0.0);
        }
    }

    #[test]
    fn er_edge_count_matches_binomial_mean() {
        // Unordered-pair count over 1000 seeds vs Binomial(4950, 0.5):
        // per-seed variance 1237.5, so the mean of 1000 draws has sigma
        // sqrt(1237.5 / 1000) ~ 1.1124.
        let mut total = 0usize;
        for seed in 0..1000 {
            total += SocialGraph::erdos_renyi(100, 0.5, 1.0, seed).unwrap().n_ties() / 2;
        }
        let mean = total as f64 / 1000.0;
        let sigma_mean = (4950.0 * 0.25 / 1000.0_f64).sqrt();
        assert!(
            (mean - 2475.0).abs() <= 3.0 * sigma_mean,
            "mean edge count {mean} drifted from 2475"
        );
    }

    #[test]
    fn empty_edge_list_gives_empty_graph() {
        let g = SocialGraph::from_edge_list("", 4, TieMode::Standard, false).unwrap();
        assert_eq!(g.n_users(), 4);
        assert_eq!(g.n_ties(), 0);
    }

    #[test]
    fn symmetrize_mirrors_each_line() {
        let g = SocialGraph::from_edge_list("0 1 0.5", 2, TieMode::Standard, true).unwrap();
        assert_eq!(g.tie(0, 1), 0.5);
        assert_eq!(g.tie(1, 0), 0.5);
    }

    #[test]
    fn out_of_range_weight_names_the_line() {
        let err = SocialGraph::from_edge_list("0 1 1.5", 2, TieMode::Standard, false).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_directed_pair_rejected() {
        let text = "0 1 0.5\n0 1 0.25";
        let err = SocialGraph::from_edge_list(text, 2, TieMode::Standard, false).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let text = "# header\n\n0 1 0.5 # trailing note\n";
        let g = SocialGraph::from_edge_list(text, 2, TieMode::Standard, false).unwrap();
        assert_eq!(g.tie(0, 1), 0.5);
    }

    #[test]
    fn explicit_zero_weight_rejected() {
        let err = SocialGraph::from_edge_list("0 1 0.0", 2, TieMode::Generalized, false);
        assert!(err.is_err());
    }

    #[test]
    fn social_group_of_isolated_user_is_empty() {
        let g = SocialGraph::empty(3);
        assert!(g.social_group(0).unwrap().is_empty());
    }

    #[test]
    fn social_group_follows_outgoing_ties() {
        let g = SocialGraph::from_edge_list("0 1 0.5", 2, TieMode::Standard, true).unwrap();
        assert_eq!(g.social_group(1).unwrap(), vec![0]);
        let c = SocialGraph::complete(4, 1.0).unwrap();
        assert_eq!(c.social_group(2).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn social_group_rejects_out_of_range_index() {
        assert!(SocialGraph::empty(3).social_group(3).is_err());
    }

    #[test]
    fn zero_sum_two_user_mutual_minus_one() {
        let mut g = SocialGraph::empty_with_mode(2, TieMode::Generalized);
        g.add_tie(0, 1, -1.0).unwrap();
        g.add_tie(1, 0, -1.0).unwrap();
        assert!(g.is_zero_sum().unwrap());
    }

    #[test]
    fn zero_sum_fails_with_missing_mirror() {
        let mut g = SocialGraph::empty_with_mode(2, TieMode::Generalized);
        g.add_tie(0, 1, -1.0).unwrap();
        // user 0 has no incoming tie, so its incoming sum is 0, not -1
        assert!(!g.is_zero_sum().unwrap());
    }

    #[test]
    fn zero_sum_three_user_split_weights() {
        // Incoming sums, checked by hand: each user receives two -0.5 ties.
        let mut g = SocialGraph::empty_with_mode(3, TieMode::Generalized);
        g.add_tie(1, 0, -0.5).unwrap();
        g.add_tie(2, 0, -0.5).unwrap();
        g.add_tie(0, 1, -0.5).unwrap();
        g.add_tie(2, 1, -0.5).unwrap();
        g.add_tie(0, 2, -0.5).unwrap();
        g.add_tie(1, 2, -0.5).unwrap();
        assert!(g.is_zero_sum().unwrap());
    }

    #[test]
    fn zero_sum_rejects_standard_mode() {
        assert!(SocialGraph::empty(2).is_zero_sum().is_err());
    }

    #[test]
    fn zero_sum_graphs_cancel_group_utilities() {
        // With incoming weights summing to -1, the group utilities
        // S_i = U_i + sum_j w_ij U_j cancel for any utility vector.
        let mut g = SocialGraph::empty_with_mode(3, TieMode::Generalized);
        g.add_tie(1, 0, -0.25).unwrap();
        g.add_tie(2, 0, -0.75).unwrap();
        g.add_tie(0, 1, -0.5).unwrap();
        g.add_tie(2, 1, -0.5).unwrap();
        g.add_tie(0, 2, -1.0).unwrap();
        assert!(g.is_zero_sum().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let u: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 10.0 - 5.0).collect();
            let total: f64 = (0..3)
                .map(|i| u[i] + (0..3).map(|j| g.tie(i, j) * u[j]).sum::<f64>())
                .sum();
            assert!(total.abs() <= 1e-9, "group utilities sum to {total}");
        }
    }

    #[test]
    fn membership_matches_nonzero_weight_exhaustively() {
        for n in 1..=8 {
            let g = SocialGraph::erdos_renyi(n, 0.4, 0.7, n as u64).unwrap();
            for i in 0..n {
                let group = g.social_group(i).unwrap();
                for j in 0..n {
                    assert_eq!(group.contains(&j), g.tie(i, j) != 0.0);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn edge_list_round_trips_exactly(n in 2usize..10, p in 0.0f64..1.0, seed in 0u64..500) {
            let g = SocialGraph::erdos_renyi(n, p, 0.371, seed).unwrap();
            let text = g.to_edge_list();
            let back = SocialGraph::from_edge_list(&text, n, TieMode::Standard, false).unwrap();
            prop_assert_eq!(g, back);
        }
    }
}
