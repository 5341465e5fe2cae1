//! Run configuration and its flat `key = value` file format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::apd::PenaltyMode;
use crate::behavior::StrategyKind;
use crate::error::{Error, Result};
use crate::protocol::{BlacklistRule, DelayRule};
use crate::NodeId;

/// How malicious nodes pick their strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaliciousStrategy {
    /// Each draws uniformly among the five attack kinds.
    #[default]
    Random,
    /// All use the same kind.
    Fixed(StrategyKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PactMode {
    /// Colluders are paired up in id order.
    #[default]
    Pairwise,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub paper_profile: bool,
    pub node_count: usize,
    pub malicious_count: usize,
    pub area_width: f64,
    pub area_height: f64,
    pub min_radio: f64,
    pub max_radio: f64,
    pub v_max: f64,
    pub pause_max: f64,
    pub hello_min: f64,
    pub hello_max: f64,
    pub tau_prime: f64,
    pub eta: u32,
    pub packet_size: u32,
    pub bandwidth: f64,
    pub sim_time: f64,
    pub runs: usize,
    pub seed: u64,
    pub alpha: f64,
    pub max_suspicions: u32,
    pub tau: f64,
    pub queue_size: u32,
    pub hop_limit: usize,
    pub sigma: f64,
    pub blacklist_rule: BlacklistRule,
    pub delay_rule: DelayRule,
    pub penalty_mode: PenaltyMode,
    /// Poisson messages per second per selfish node.
    pub traffic_rate: f64,
    /// Share of selfish nodes that volunteer as witnesses.
    pub supportive_fraction: f64,
    pub malicious_strategy: MaliciousStrategy,
    /// Exact counts per attack kind; overrides `malicious_strategy` for that many nodes.
    pub strategy_counts: Vec<(StrategyKind, usize)>,
    /// Node ids forced to a strategy.
    pub pins: Vec<(NodeId, StrategyKind)>,
    pub pact: PactMode,
    /// Extra hold of a delay attacker; `None` means twice the attack threshold.
    pub delay_extra: Option<f64>,
    /// `None` means `2η`.
    pub flood_rate: Option<f64>,
    pub flood_start: f64,
    pub slander_interval: f64,
    pub mobility_step: f64,
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::desk()
    }
}

impl SimConfig {
    /// 60 nodes in 600 m × 300 m for 600 s.
    pub fn desk() -> Self {
        Self {
            paper_profile: false,
            node_count: 60,
            malicious_count: 0,
            area_width: 600.0,
            area_height: 300.0,
            min_radio: 150.0,
            max_radio: 250.0,
            v_max: 50.0,
            pause_max: 20.0,
            hello_min: 6.0,
            hello_max: 10.0,
            tau_prime: 10.0,
            eta: 5,
            packet_size: 512,
            bandwidth: 1e6,
            sim_time: 600.0,
            runs: 6,
            seed: 1,
            alpha: 2.0,
            max_suspicions: 5,
            tau: 0.05,
            queue_size: 10,
            hop_limit: 10,
            sigma: 1.0,
            blacklist_rule: BlacklistRule::Pseudocode,
            delay_rule: DelayRule::Prose,
            penalty_mode: PenaltyMode::Literal,
            traffic_rate: 0.05,
            supportive_fraction: 0.5,
            malicious_strategy: MaliciousStrategy::Random,
            strategy_counts: Vec::new(),
            pins: Vec::new(),
            pact: PactMode::Pairwise,
            delay_extra: None,
            flood_rate: None,
            flood_start: 5.0,
            slander_interval: 30.0,
            mobility_step: 1.0,
            trace: false,
        }
    }

    /// The published large-scale scenario.
    pub fn full_scale() -> Self {
        Self {
            paper_profile: true,
            node_count: 500,
            area_width: 2000.0,
            area_height: 1000.0,
            sim_time: 3600.0,
            runs: 6,
            ..Self::desk()
        }
    }

    pub fn delay_extra(&self) -> f64 {
        self.delay_extra.unwrap_or_else(|| {
            2.0 * ((self.queue_size.max(1) - 1) as f64 * self.tau + 3.0 * self.tau_prime)
        })
    }

    pub fn flood_rate(&self) -> f64 {
        self.flood_rate.unwrap_or(2.0 * self.eta as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |f: &str, r: String| Error::config(f, r);
        if self.node_count <= 3 {
            return Err(err("node_count", "must exceed 3".into()));
        }
        if self.malicious_count > self.node_count {
            return Err(err("malicious_count", "exceeds node_count".into()));
        }
        let positive = [
            ("area_width", self.area_width),
            ("area_height", self.area_height),
            ("min_radio", self.min_radio),
            ("max_radio", self.max_radio),
            ("hello_min", self.hello_min),
            ("hello_max", self.hello_max),
            ("tau_prime", self.tau_prime),
            ("bandwidth", self.bandwidth),
            ("sim_time", self.sim_time),
            ("tau", self.tau),
            ("sigma", self.sigma),
            ("slander_interval", self.slander_interval),
            ("mobility_step", self.mobility_step),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(err(name, format!("must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("v_max", self.v_max),
            ("pause_max", self.pause_max),
            ("traffic_rate", self.traffic_rate),
            ("flood_start", self.flood_start),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(err(name, format!("must be non-negative, got {v}")));
            }
        }
        if self.min_radio > self.max_radio {
            return Err(err("min_radio", "exceeds max_radio".into()));
        }
        if self.hello_min > self.hello_max {
            return Err(err("hello_min", "exceeds hello_max".into()));
        }
        if self.alpha <= 1.0 || !self.alpha.is_finite() {
            return Err(err("alpha", "must exceed 1".into()));
        }
        if !(0.0..=1.0).contains(&self.supportive_fraction) {
            return Err(err("supportive_fraction", "must lie in [0, 1]".into()));
        }
        if self.eta == 0 {
            return Err(err("eta", "must be positive".into()));
        }
        if self.max_suspicions == 0 {
            return Err(err("max_suspicions", "must be positive".into()));
        }
        if self.queue_size == 0 {
            return Err(err("queue_size", "must be positive".into()));
        }
        if self.hop_limit < 2 {
            return Err(err("hop_limit", "must be at least 2".into()));
        }
        if self.runs == 0 {
            return Err(err("runs", "must be positive".into()));
        }
        if self.packet_size == 0 {
            return Err(err("packet_size", "must be positive".into()));
        }
        if let Some(d) = self.delay_extra {
            if !(d.is_finite() && d >= 0.0) {
                return Err(err("delay_extra", "must be non-negative".into()));
            }
        }
        if let Some(r) = self.flood_rate {
            if !(r.is_finite() && r > 0.0) {
                return Err(err("flood_rate", "must be positive".into()));
            }
        }
        let counted: usize = self.strategy_counts.iter().map(|(_, n)| n).sum();
        if self.strategy_counts.iter().any(|(k, _)| !k.is_malicious()) {
            return Err(err(
                "strategy_counts",
                "only attack strategies may be counted".into(),
            ));
        }
        let mut pinned_mal = 0;
        for (id, kind) in &self.pins {
            if id.index() >= self.node_count {
                return Err(err("pins", format!("node {} out of range", id.0)));
            }
            if kind.is_malicious() {
                pinned_mal += 1;
            }
        }
        let mut ids: Vec<_> = self.pins.iter().map(|(id, _)| *id).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.pins.len() {
            return Err(err("pins", "node pinned twice".into()));
        }
        if pinned_mal + counted > self.malicious_count {
            return Err(err(
                "malicious_count",
                "smaller than pinned plus counted attackers".into(),
            ));
        }
        if self.paper_profile {
            self.validate_full_scale_ranges()?;
        }
        Ok(())
    }

    fn validate_full_scale_ranges(&self) -> Result<()> {
        let err = |f: &str, r: String| Error::config(f, r);
        if !(500..=5000).contains(&self.node_count) {
            return Err(err(
                "node_count",
                "full-scale profile requires 500..=5000".into(),
            ));
        }
        if self.malicious_count > 500 {
            return Err(err(
                "malicious_count",
                "full-scale profile allows at most 500".into(),
            ));
        }
        if self.area_width != 2000.0 || self.area_height != 1000.0 {
            return Err(err(
                "area_width",
                "full-scale profile requires 2000 m x 1000 m".into(),
            ));
        }
        if self.max_radio > 250.0 {
            return Err(err(
                "max_radio",
                "full-scale profile allows at most 250 m".into(),
            ));
        }
        if self.v_max > 50.0 {
            return Err(err(
                "v_max",
                "full-scale profile allows at most 50 m/s".into(),
            ));
        }
        if self.hello_min < 6.0 || self.hello_max > 10.0 {
            return Err(err(
                "hello_min",
                "full-scale profile requires intervals within [6, 10] s".into(),
            ));
        }
        let fixed: [(&str, f64, f64); 5] = [
            ("tau_prime", self.tau_prime, 10.0),
            ("eta", self.eta as f64, 5.0),
            ("packet_size", self.packet_size as f64, 512.0),
            ("bandwidth", self.bandwidth, 1e6),
            ("sim_time", self.sim_time, 3600.0),
        ];
        for (name, v, want) in fixed {
            if v != want {
                return Err(err(name, format!("full-scale profile requires {want}")));
            }
        }
        if self.runs != 6 {
            return Err(err("runs", "full-scale profile requires 6".into()));
        }
        Ok(())
    }

    /// Parses the flat config format. `paper_profile = true` switches the
    /// base defaults before the other keys apply.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut order = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    reason: "expected key = value".into(),
                });
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    reason: "empty key".into(),
                });
            }
            if pairs
                .insert(key.clone(), (line_no, v.trim().to_string()))
                .is_some()
            {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    reason: format!("duplicate key `{key}`"),
                });
            }
            order.push(key);
        }
        let full_scale = match pairs.get("paper_profile") {
            Some((_, v)) => parse_bool("paper_profile", v)?,
            None => false,
        };
        let mut cfg = if full_scale {
            Self::full_scale()
        } else {
            Self::desk()
        };
        for key in order {
            let (_, value) = &pairs[&key];
            cfg.set(&key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::config(key, format!("cannot parse `{v}`")))
        }
        fn parsed<T: std::str::FromStr<Err = String>>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|e: String| Error::config(key, e))
        }
        fn auto(key: &str, v: &str) -> Result<Option<f64>> {
            if v == "auto" {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        }
        match key {
            "paper_profile" => self.paper_profile = parse_bool(key, value)?,
            "node_count" => self.node_count = num(key, value)?,
            "malicious_count" => self.malicious_count = num(key, value)?,
            "area_width" => self.area_width = num(key, value)?,
            "area_height" => self.area_height = num(key, value)?,
            "min_radio" => self.min_radio = num(key, value)?,
            "max_radio" => self.max_radio = num(key, value)?,
            "v_max" => self.v_max = num(key, value)?,
            "pause_max" => self.pause_max = num(key, value)?,
            "hello_min" => self.hello_min = num(key, value)?,
            "hello_max" => self.hello_max = num(key, value)?,
            "tau_prime" => self.tau_prime = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "packet_size" => self.packet_size = num(key, value)?,
            "bandwidth" => self.bandwidth = num(key, value)?,
            "sim_time" => self.sim_time = num(key, value)?,
            "runs" => self.runs = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "max_suspicions" => self.max_suspicions = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "queue_size" => self.queue_size = num(key, value)?,
            "hop_limit" => self.hop_limit = num(key, value)?,
            "sigma" => self.sigma = num(key, value)?,
            "blacklist_rule" => self.blacklist_rule = parsed(key, value)?,
            "delay_rule" => self.delay_rule = parsed(key, value)?,
            "penalty_mode" => self.penalty_mode = parsed(key, value)?,
            "traffic_rate" => self.traffic_rate = num(key, value)?,
            "supportive_fraction" => self.supportive_fraction = num(key, value)?,
            "malicious_strategy" => {
                self.malicious_strategy = if value == "random" {
                    MaliciousStrategy::Random
                } else {
                    let k: StrategyKind = parsed(key, value)?;
                    if !k.is_malicious() {
                        return Err(Error::config(key, "not an attack strategy"));
                    }
                    MaliciousStrategy::Fixed(k)
                }
            }
            "strategy_counts" => {
                self.strategy_counts = parse_list(key, value, |a, b| {
                    Ok((parsed::<StrategyKind>(key, a)?, num::<usize>(key, b)?))
                })?
            }
            "pins" => {
                self.pins = parse_list(key, value, |a, b| {
                    Ok((NodeId(num(key, a)?), parsed::<StrategyKind>(key, b)?))
                })?
            }
            "pact" => {
                self.pact = match value {
                    "pairwise" => PactMode::Pairwise,
                    "none" => PactMode::None,
                    _ => return Err(Error::config(key, "expected pairwise|none")),
                }
            }
            "delay_extra" => self.delay_extra = auto(key, value)?,
            "flood_rate" => self.flood_rate = auto(key, value)?,
            "flood_start" => self.flood_start = num(key, value)?,
            "slander_interval" => self.slander_interval = num(key, value)?,
            "mobility_step" => self.mobility_step = num(key, value)?,
            "trace" => self.trace = parse_bool(key, value)?,
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Renders the config in the file format; `parse(to_text())` restores it.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<f64>| v.map_or("auto".to_string(), |x| x.to_string());
        let strategy = match self.malicious_strategy {
            MaliciousStrategy::Random => "random".to_string(),
            MaliciousStrategy::Fixed(k) => k.to_string(),
        };
        let counts: Vec<String> = self
            .strategy_counts
            .iter()
            .map(|(k, n)| format!("{k}:{n}"))
            .collect();
        let pins: Vec<String> = self
            .pins
            .iter()
            .map(|(id, k)| format!("{}:{k}", id.0))
            .collect();
        let rows: Vec<(&str, String)> = vec![
            ("paper_profile", self.paper_profile.to_string()),
            ("node_count", self.node_count.to_string()),
            ("malicious_count", self.malicious_count.to_string()),
            ("area_width", self.area_width.to_string()),
            ("area_height", self.area_height.to_string()),
            ("min_radio", self.min_radio.to_string()),
            ("max_radio", self.max_radio.to_string()),
            ("v_max", self.v_max.to_string()),
            ("pause_max", self.pause_max.to_string()),
            ("hello_min", self.hello_min.to_string()),
            ("hello_max", self.hello_max.to_string()),
            ("tau_prime", self.tau_prime.to_string()),
            ("eta", self.eta.to_string()),
            ("packet_size", self.packet_size.to_string()),
            ("bandwidth", self.bandwidth.to_string()),
            ("sim_time", self.sim_time.to_string()),
            ("runs", self.runs.to_string()),
            ("seed", self.seed.to_string()),
            ("alpha", self.alpha.to_string()),
            ("max_suspicions", self.max_suspicions.to_string()),
            ("tau", self.tau.to_string()),
            ("queue_size", self.queue_size.to_string()),
            ("hop_limit", self.hop_limit.to_string()),
            ("sigma", self.sigma.to_string()),
            (
                "blacklist_rule",
                match self.blacklist_rule {
                    BlacklistRule::Pseudocode => "pseudocode".into(),
                    BlacklistRule::Prose => "prose".into(),
                },
            ),
            (
                "delay_rule",
                match self.delay_rule {
                    DelayRule::Prose => "prose".into(),
                    DelayRule::Pseudocode => "pseudocode".into(),
                },
            ),
            (
                "penalty_mode",
                match self.penalty_mode {
                    PenaltyMode::Literal => "literal".into(),
                    PenaltyMode::Magnitude => "magnitude".into(),
                },
            ),
            ("traffic_rate", self.traffic_rate.to_string()),
            ("supportive_fraction", self.supportive_fraction.to_string()),
            ("malicious_strategy", strategy),
            ("strategy_counts", counts.join(",")),
            ("pins", pins.join(",")),
            (
                "pact",
                match self.pact {
                    PactMode::Pairwise => "pairwise".into(),
                    PactMode::None => "none".into(),
                },
            ),
            ("delay_extra", opt(self.delay_extra)),
            ("flood_rate", opt(self.flood_rate)),
            ("flood_start", self.flood_start.to_string()),
            ("slander_interval", self.slander_interval.to_string()),
            ("mobility_step", self.mobility_step.to_string()),
            ("trace", self.trace.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::config(key, format!("expected a boolean, got `{v}`"))),
    }
}

/// `a:b,c:d`; an empty value is an empty list.
fn parse_list<T>(key: &str, v: &str, item: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::config(key, format!("expected a:b, got `{part}`")))?;
            item(a.trim(), b.trim())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_defaults_valid() {
        let c = SimConfig::desk();
        c.validate().unwrap();
        assert_eq!(
            (c.node_count, c.area_width, c.area_height, c.sim_time),
            (60, 600.0, 300.0, 600.0)
        );
        assert_eq!(c.flood_rate(), 10.0);
        // 2 × ((10-1)·0.05 + 30)
        assert!((c.delay_extra() - 60.9).abs() < 1e-12);
    }

    #[test]
    fn full_scale_flag_restores_large_values() {
        let c = SimConfig::parse("paper_profile = true\n").unwrap();
        assert_eq!(
            (
                c.node_count,
                c.area_width,
                c.area_height,
                c.sim_time,
                c.runs
            ),
            (500, 2000.0, 1000.0, 3600.0, 6)
        );
        let e = SimConfig::parse("paper_profile = true\nnode_count = 60\n").unwrap_err();
        assert!(matches!(e, Error::InvalidConfig { ref field, .. } if field == "node_count"));
    }

    #[test]
    fn unknown_key_rejected() {
        let e = SimConfig::parse("nodes = 5\n").unwrap_err();
        assert!(matches!(e, Error::InvalidConfig { ref field, .. } if field == "nodes"));
    }

    #[test]
    fn syntax_errors_name_line() {
        let e = SimConfig::parse("# c\nnode_count 5\n").unwrap_err();
        assert_eq!(
            e,
            Error::ConfigSyntax {
                line: 2,
                reason: "expected key = value".into()
            }
        );
        let e = SimConfig::parse("seed = 1\nseed = 2\n").unwrap_err();
        assert!(matches!(e, Error::ConfigSyntax { line: 2, .. }));
    }

    #[test]
    fn invariants_checked() {
        assert!(SimConfig::parse("node_count = 3").is_err());
        assert!(SimConfig::parse("malicious_count = 61").is_err());
        assert!(SimConfig::parse("malicious_count = 1\nstrategy_counts = flood:2").is_err());
        assert!(SimConfig::parse("malicious_count = 2\npins = 3:flood,3:delay").is_err());
        assert!(SimConfig::parse("strategy_counts = supportive:1").is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = SimConfig::desk();
        c.malicious_count = 4;
        c.strategy_counts = vec![(StrategyKind::Flood, 2)];
        c.pins = vec![(NodeId(7), StrategyKind::Delay)];
        c.delay_extra = Some(40.0);
        c.blacklist_rule = BlacklistRule::Prose;
        c.malicious_strategy = MaliciousStrategy::Fixed(StrategyKind::Slander);
        assert_eq!(SimConfig::parse(&c.to_text()).unwrap(), c);
        assert_eq!(
            SimConfig::parse(&SimConfig::desk().to_text()).unwrap(),
            SimConfig::desk()
        );
    }
}
