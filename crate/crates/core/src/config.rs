//! Every free numeric constant of the embedding machinery lives here as an
//! overridable field. The `paper` profile keeps the true values (under which
//! the pipelines are assertions, not practical runs); the `desk` profile
//! scales them coherently so every branch can be exercised on graphs of
//! 10^2..10^3 vertices.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub profile: String,

    // Expansion verification and extraction.
    /// Small-set expansion factor (the Delta of the expansion quadruple).
    pub delta: i64,
    /// Medium-set clause divisor coefficient: sets must expand by
    /// |S| / (expansion_divisor * ln k).
    pub expansion_divisor: f64,
    /// beta = M / beta_divisor, floored at beta_min.
    pub beta_divisor: i64,
    pub beta_min: i64,
    /// Slack term coefficient in the sparse-cut threshold (the m*Delta*beta
    /// additive slack is multiplied by this).
    pub cut_slack_coeff: f64,
    /// Extraction size coefficient: target order is M*m*k*ln k with
    /// M = extract_m_coeff * k * ln k * (2m/m') in paper mode, or M fitted to
    /// the graph order when `fit_m_to_graph` is set.
    pub extract_m_coeff: f64,
    pub fit_m_to_graph: bool,

    // Exhaustive/heuristic search caps.
    /// Subset size checked exhaustively by the expansion verifier.
    pub subset_cap: usize,
    /// Node budget for the branch-and-bound subset search.
    pub bnb_node_budget: u64,
    /// Restarts and step count for the greedy sweep above the cap.
    pub sweep_restarts: u32,
    pub sweep_steps: u32,
    /// Node budget for complement-containment checks inside pipelines.
    pub csp_node_budget: u64,
    /// Node budget for cycle searches inside pipelines.
    pub cycle_search_budget: u64,

    // Adjuster construction.
    /// Short cycles are capped at cycle_cap_coeff * ln(k) * ln(k*m).
    pub cycle_cap_coeff: f64,
    /// Chaining stops once the structure exceeds adjuster_size_coeff * m * k
    /// vertices.
    pub adjuster_size_coeff: f64,
    /// Wing sets never take more than this fraction of the available region.
    pub wing_avail_frac: f64,

    // Merging and the folding drivers.
    /// Disjoint-path demand q = max(q_min, q_coeff * ln^4 k).
    pub q_coeff: f64,
    pub q_min: usize,
    /// Adjuster collection target: total r >= max(r_total_min,
    /// r_total_coeff * m * k).
    pub r_total_coeff: f64,
    pub r_total_min: usize,
    /// Connector paths between merged structures are shortcut to at most
    /// |H'| + chi(H') + path_cap_slack edges.
    pub path_cap_slack: usize,

    // Long-cycle windows.
    /// Paper window floor n / (long_lo_denom_coeff * ln^2 k); when
    /// long_lo_frac > 0 the floor is long_lo_frac * n instead.
    pub long_lo_denom_coeff: f64,
    pub long_lo_frac: f64,
    /// Window width long_slack_coeff * m * k, at least long_slack_min.
    pub long_slack_coeff: f64,
    pub long_slack_min: usize,

    // Length windows as fractions of n.
    pub adj_len_lo: f64,
    pub adj_len_hi: f64,
    pub cyc_sum_lo_s2: f64,
    pub cyc_sum_hi_s2: f64,
    pub cyc_sum_lo_s1: f64,
    pub cyc_sum_hi_s1: f64,
    pub final_lo_s2: f64,
    /// Stability blocks must have at least this fraction of n vertices.
    pub stability_min_frac: f64,
    /// Order slack (the n/10 terms) as a fraction of n.
    pub order_slack_frac: f64,

    // Stability decomposition.
    /// Separator size cap: max(sep_size_min, sep_size_coeff * ln^4 k).
    pub sep_size_coeff: f64,
    pub sep_size_min: usize,
    /// Candidate pool size for the budgeted separator enumeration.
    pub sep_pool: usize,
    /// Connectivity certificates sample this many set pairs per block.
    pub cert_samples: u32,

    // Embedding driver.
    /// Budget for the exact-length path fallback search.
    pub fallback_path_budget: u64,
}

impl ConstantsLedger {
    /// The true constants. Not intended for actual runs at desk scale; the
    /// values document the regime the guarantees are stated in.
    pub fn paper() -> Self {
        ConstantsLedger {
            profile: "paper".into(),
            delta: 10,
            expansion_divisor: 10.0,
            beta_divisor: 200,
            beta_min: 0,
            cut_slack_coeff: 1.0,
            extract_m_coeff: 1.0e4,
            fit_m_to_graph: false,
            subset_cap: 8,
            bnb_node_budget: 500_000,
            sweep_restarts: 8,
            sweep_steps: 400,
            csp_node_budget: 2_000_000,
            cycle_search_budget: 5_000_000,
            cycle_cap_coeff: 2000.0,
            adjuster_size_coeff: 1.0,
            wing_avail_frac: 0.25,
            q_coeff: 4.1e18,
            q_min: 17,
            r_total_coeff: 2.0,
            r_total_min: 0,
            path_cap_slack: 0,
            long_lo_denom_coeff: 8.0e5,
            long_lo_frac: 0.0,
            long_slack_coeff: 2.0,
            long_slack_min: 0,
            adj_len_lo: 0.6,
            adj_len_hi: 0.7,
            cyc_sum_lo_s2: 4.0 / 3.0,
            cyc_sum_hi_s2: 1.5,
            cyc_sum_lo_s1: 2.0 / 3.0,
            cyc_sum_hi_s1: 0.75,
            final_lo_s2: 1.25,
            stability_min_frac: 0.95,
            order_slack_frac: 0.1,
            sep_size_coeff: 4.1e18,
            sep_size_min: 1,
            sep_pool: 64,
            cert_samples: 3,
            fallback_path_budget: 2_000_000,
        }
    }

    /// Coherently scaled-down constants for runs on 10^2..10^3 vertices.
    pub fn desk() -> Self {
        ConstantsLedger {
            profile: "desk".into(),
            beta_min: 8,
            fit_m_to_graph: true,
            q_coeff: 0.0,
            q_min: 20,
            r_total_min: 8,
            path_cap_slack: 8,
            long_lo_frac: 0.1,
            long_slack_min: 16,
            sep_size_coeff: 0.0,
            sep_size_min: 3,
            adjuster_size_coeff: 3.0,
            ..ConstantsLedger::paper()
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "paper" => Ok(ConstantsLedger::paper()),
            "desk" => Ok(ConstantsLedger::desk()),
            other => Err(Error::invalid(format!("unknown profile '{}'", other))),
        }
    }

    /// Parses a `key = value` config file ('#' starts a comment). Missing
    /// keys keep the value from the base profile named by the optional
    /// `profile = ...` line (default desk); unknown keys are errors.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut base = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if key == "profile" {
                base = Some(ConstantsLedger::by_name(value)?);
            } else {
                pairs.push((key.to_string(), value.to_string(), lineno + 1));
            }
        }
        let mut cfg = base.unwrap_or_else(ConstantsLedger::desk);
        for (key, value, lineno) in pairs {
            cfg.set_field(&key, &value)
                .map_err(|e| Error::parse(format!("line {}: {}", lineno, e)))?;
        }
        Ok(cfg)
    }

    fn set_field(&mut self, key: &str, value: &str) -> Result<()> {
        fn f64_of(v: &str) -> Result<f64> {
            let x: f64 =
                v.parse().map_err(|_| Error::parse(format!("bad number '{}'", v)))?;
            if !x.is_finite() {
                return Err(Error::parse(format!("non-finite value '{}'", v)));
            }
            Ok(x)
        }
        fn u64_of(v: &str) -> Result<u64> {
            v.parse().map_err(|_| Error::parse(format!("bad integer '{}'", v)))
        }
        match key {
            "delta" => self.delta = u64_of(value)? as i64,
            "expansion_divisor" => self.expansion_divisor = f64_of(value)?,
            "beta_divisor" => self.beta_divisor = u64_of(value)?.max(1) as i64,
            "beta_min" => self.beta_min = u64_of(value)? as i64,
            "cut_slack_coeff" => self.cut_slack_coeff = f64_of(value)?,
            "extract_m_coeff" => self.extract_m_coeff = f64_of(value)?,
            "fit_m_to_graph" => {
                self.fit_m_to_graph =
                    value.parse().map_err(|_| Error::parse("expected true/false"))?
            }
            "subset_cap" => self.subset_cap = u64_of(value)? as usize,
            "bnb_node_budget" => self.bnb_node_budget = u64_of(value)?,
            "sweep_restarts" => self.sweep_restarts = u64_of(value)? as u32,
            "sweep_steps" => self.sweep_steps = u64_of(value)? as u32,
            "csp_node_budget" => self.csp_node_budget = u64_of(value)?,
            "cycle_search_budget" => self.cycle_search_budget = u64_of(value)?,
            "cycle_cap_coeff" => self.cycle_cap_coeff = f64_of(value)?,
            "adjuster_size_coeff" => self.adjuster_size_coeff = f64_of(value)?,
            "wing_avail_frac" => self.wing_avail_frac = f64_of(value)?,
            "q_coeff" => self.q_coeff = f64_of(value)?,
            "q_min" => self.q_min = u64_of(value)? as usize,
            "r_total_coeff" => self.r_total_coeff = f64_of(value)?,
            "r_total_min" => self.r_total_min = u64_of(value)? as usize,
            "path_cap_slack" => self.path_cap_slack = u64_of(value)? as usize,
            "long_lo_denom_coeff" => self.long_lo_denom_coeff = f64_of(value)?,
            "long_lo_frac" => self.long_lo_frac = f64_of(value)?,
            "long_slack_coeff" => self.long_slack_coeff = f64_of(value)?,
            "long_slack_min" => self.long_slack_min = u64_of(value)? as usize,
            "adj_len_lo" => self.adj_len_lo = f64_of(value)?,
            "adj_len_hi" => self.adj_len_hi = f64_of(value)?,
            "cyc_sum_lo_s2" => self.cyc_sum_lo_s2 = f64_of(value)?,
            "cyc_sum_hi_s2" => self.cyc_sum_hi_s2 = f64_of(value)?,
            "cyc_sum_lo_s1" => self.cyc_sum_lo_s1 = f64_of(value)?,
            "cyc_sum_hi_s1" => self.cyc_sum_hi_s1 = f64_of(value)?,
            "final_lo_s2" => self.final_lo_s2 = f64_of(value)?,
            "stability_min_frac" => self.stability_min_frac = f64_of(value)?,
            "order_slack_frac" => self.order_slack_frac = f64_of(value)?,
            "sep_size_coeff" => self.sep_size_coeff = f64_of(value)?,
            "sep_size_min" => self.sep_size_min = u64_of(value)? as usize,
            "sep_pool" => self.sep_pool = u64_of(value)? as usize,
            "cert_samples" => self.cert_samples = u64_of(value)? as u32,
            "fallback_path_budget" => self.fallback_path_budget = u64_of(value)?,
            other => return Err(Error::parse(format!("unknown key '{}'", other))),
        }
        Ok(())
    }

    // Derived quantities. k is always clamped to >= 2 before taking logs.

    pub fn q(&self, k: usize) -> usize {
        let lk = ln_k(k);
        let formula = self.q_coeff * lk.powi(4);
        let v = if formula.is_finite() && formula < 1e12 { formula.ceil() as usize } else { usize::MAX };
        v.max(self.q_min)
    }

    pub fn cycle_cap(&self, m: usize, k: usize) -> usize {
        let lk = ln_k(k);
        let lkm = ((k * m.max(1)) as f64).ln().max(ln_k(2));
        ((self.cycle_cap_coeff * lk * lkm).ceil() as usize).max(9)
    }

    pub fn r_total_target(&self, m: usize, k: usize) -> usize {
        (((self.r_total_coeff * (m * k) as f64).ceil()) as usize).max(self.r_total_min).max(1)
    }

    pub fn sep_size(&self, k: usize) -> usize {
        let lk = ln_k(k);
        let formula = self.sep_size_coeff * lk.powi(4);
        let v = if formula.is_finite() && formula < 1e12 { formula.ceil() as usize } else { usize::MAX };
        v.max(self.sep_size_min)
    }

    /// Connector-path length cap for a structure kept free of `spec`:
    /// |spec| + chi(spec) plus the configured slack.
    pub fn path_cap(&self, order: usize, chi: usize) -> usize {
        order + chi + self.path_cap_slack
    }

    pub fn long_cycle_window(&self, n: usize, m: usize, k: usize) -> (usize, usize) {
        let lk = ln_k(k);
        let lo = if self.long_lo_frac > 0.0 {
            (self.long_lo_frac * n as f64).floor() as usize
        } else {
            (n as f64 / (self.long_lo_denom_coeff * lk * lk)).floor() as usize
        };
        let lo = lo.max(3);
        let slack =
            ((self.long_slack_coeff * (m * k) as f64).ceil() as usize).max(self.long_slack_min);
        (lo, lo + slack)
    }
}

pub(crate) fn ln_k(k: usize) -> f64 {
    (k.max(2) as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_differ() {
        let p = ConstantsLedger::paper();
        let d = ConstantsLedger::desk();
        assert_eq!(p.q_min, 17);
        assert!(d.q(2) >= 17);
        assert_eq!(p.delta, d.delta);
        assert!(d.fit_m_to_graph && !p.fit_m_to_graph);
    }

    #[test]
    fn parse_config() {
        let cfg = ConstantsLedger::from_config_str(
            "# comment\nprofile = desk\nq_min = 24\nsubset_cap=6\n",
        )
        .unwrap();
        assert_eq!(cfg.q_min, 24);
        assert_eq!(cfg.subset_cap, 6);
        assert!(cfg.fit_m_to_graph);

        assert!(ConstantsLedger::from_config_str("nonsense_key = 2").is_err());
        assert!(ConstantsLedger::from_config_str("q_min").is_err());
        assert!(ConstantsLedger::from_config_str("delta = frog").is_err());
    }

    #[test]
    fn derived_values() {
        let d = ConstantsLedger::desk();
        assert!(d.cycle_cap(1, 2) >= 9);
        assert_eq!(d.path_cap(4, 2), 4 + 2 + d.path_cap_slack);
        let (lo, hi) = d.long_cycle_window(100, 1, 2);
        assert!(lo >= 3 && hi > lo);
        // Paper q at k = 2 is astronomically large and must saturate.
        assert_eq!(ConstantsLedger::paper().q(2), usize::MAX);
    }
}
