//! Experiment configuration: TOML sections per module, literal system values
//! plus a scale profile.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{dbm_to_watts, RadioParams};
use crate::correlation::TrackingSize;
use crate::error::{Error, Result};
use crate::learning::{AgentSettings, Algorithm, EsnParams, Exploration, LearningRate};
use crate::sim::ScenarioParams;

/// Size scaling applied on top of the literal system values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Content and tracking sizes ×1e-3, backhaul ×1e-2.
    #[default]
    Desk,
    /// Unscaled values. Every slot misses the 20 ms deadline here.
    PaperLiteral,
}

impl Profile {
    pub fn size_scale(self) -> f64 {
        match self {
            Profile::Desk => 1e-3,
            Profile::PaperLiteral => 1.0,
        }
    }

    pub fn backhaul_scale(self) -> f64 {
        match self {
            Profile::Desk => 1e-2,
            Profile::PaperLiteral => 1.0,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Desk => "desk",
            Profile::PaperLiteral => "paper-literal",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper-literal" | "paper_literal" => Ok(Profile::PaperLiteral),
            _ => Err(Error::config("profile", format!("unknown profile `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologySection {
    pub num_sbs: usize,
    pub num_users: usize,
    /// Meters.
    pub area_radius: f64,
}

impl Default for TopologySection {
    fn default() -> Self {
        TopologySection {
            num_sbs: 5,
            num_users: 25,
            area_radius: 500.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub pathloss_exponent: f64,
    pub noise_power_dbm: f64,
    /// Hz.
    pub rb_bandwidth: f64,
    pub sbs_power_dbm: f64,
    pub user_power_dbm: f64,
    /// Meters.
    pub min_distance: f64,
    pub downlink_rbs: usize,
    pub uplink_rbs: usize,
    /// Total cloud backhaul, bits/s, before profile scaling.
    pub backhaul_rate: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            pathloss_exponent: 3.0,
            noise_power_dbm: -105.0,
            rb_bandwidth: 1.8e6,
            sbs_power_dbm: 30.0,
            user_power_dbm: 20.0,
            min_distance: 1.0,
            downlink_rbs: 5,
            uplink_rbs: 5,
            backhaul_rate: 10e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrelationSection {
    pub alpha: f64,
    pub kappa: f64,
    pub user_sigma: f64,
    /// Bits, before profile scaling.
    pub k_min: f64,
    pub k_max: f64,
    pub sigma_ref: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_max_override: Option<f64>,
    /// Degrees.
    pub view_width: f64,
    pub num_contents: usize,
    pub view_concentration: f64,
}

impl Default for CorrelationSection {
    fn default() -> Self {
        CorrelationSection {
            alpha: 2.0,
            kappa: 5.0,
            user_sigma: 1.0,
            k_min: 0.1e6,
            k_max: 1e6,
            sigma_ref: 1.0,
            sigma_max_override: None,
            view_width: 120.0,
            num_contents: 10,
            view_concentration: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QosSection {
    /// Visible content size, bits, before profile scaling.
    pub g120: f64,
    /// Panorama size, bits, before profile scaling.
    pub g360: f64,
    /// Seconds.
    pub deadline: f64,
    /// Slots in each period's evaluation batch.
    pub eval_slots: usize,
}

impl Default for QosSection {
    fn default() -> Self {
        QosSection {
            g120: 12e6,
            g360: 50e6,
            deadline: 0.02,
            eval_slots: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    #[default]
    Constant,
    RobbinsMonro,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearningSection {
    pub neurons: usize,
    pub recurrent_weight: f64,
    pub input_scale: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub schedule: Schedule,
    /// τ of the decaying schedule, in row updates.
    pub schedule_tau: f64,
    pub epsilon: f64,
    pub epsilon_decay: f64,
    pub epsilon_floor: f64,
    pub zeta: f64,
    pub action_cap: usize,
}

impl Default for LearningSection {
    fn default() -> Self {
        LearningSection {
            neurons: 100,
            recurrent_weight: 0.9,
            input_scale: 0.12,
            lambda: 0.3,
            lambda_prime: 0.03,
            schedule: Schedule::Constant,
            schedule_tau: 100.0,
            epsilon: 0.1,
            epsilon_decay: 1.0,
            epsilon_floor: 0.0,
            zeta: 0.3,
            action_cap: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessSection {
    /// Learning iterations per period.
    pub iterations: usize,
    pub periods: usize,
    pub profile: Profile,
    pub seed: u64,
    /// Keep per-iteration traces in run records.
    pub record_traces: bool,
    /// Keep final agent weights in run records.
    pub record_checkpoints: bool,
}

impl Default for HarnessSection {
    fn default() -> Self {
        HarnessSection {
            iterations: 1000,
            periods: 100,
            profile: Profile::Desk,
            seed: 0,
            record_traces: true,
            record_checkpoints: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub topology: TopologySection,
    pub channel: ChannelSection,
    pub correlation: CorrelationSection,
    pub qos: QosSection,
    pub learning: LearningSection,
    pub harness: HarnessSection,
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            key,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn non_negative(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            key,
            format!("must be non-negative and finite, got {v}"),
        ))
    }
}

fn in_unit(key: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::config(key, format!("must lie in [0, 1], got {v}")))
    }
}

fn at_least_one(key: &str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::config(key, "must be at least 1"))
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be finite, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::parse(text, Path::new("<inline>"))
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.topology;
        at_least_one("num_sbs", t.num_sbs)?;
        at_least_one("num_users", t.num_users)?;
        positive("area_radius", t.area_radius)?;

        let c = &self.channel;
        positive("pathloss_exponent", c.pathloss_exponent)?;
        finite("noise_power_dbm", c.noise_power_dbm)?;
        positive("rb_bandwidth", c.rb_bandwidth)?;
        finite("sbs_power_dbm", c.sbs_power_dbm)?;
        finite("user_power_dbm", c.user_power_dbm)?;
        positive("min_distance", c.min_distance)?;
        at_least_one("downlink_rbs", c.downlink_rbs)?;
        at_least_one("uplink_rbs", c.uplink_rbs)?;
        positive("backhaul_rate", c.backhaul_rate)?;

        let r = &self.correlation;
        positive("alpha", r.alpha)?;
        positive("kappa", r.kappa)?;
        positive("user_sigma", r.user_sigma)?;
        non_negative("k_min", r.k_min)?;
        non_negative("k_max", r.k_max)?;
        if r.k_max < r.k_min {
            return Err(Error::config("k_max", "must not be below k_min"));
        }
        positive("sigma_ref", r.sigma_ref)?;
        if let Some(s) = r.sigma_max_override {
            non_negative("sigma_max_override", s)?;
        }
        positive("view_width", r.view_width)?;
        if r.view_width > 360.0 {
            return Err(Error::config("view_width", "must not exceed 360 degrees"));
        }
        at_least_one("num_contents", r.num_contents)?;
        non_negative("view_concentration", r.view_concentration)?;

        let q = &self.qos;
        positive("g120", q.g120)?;
        positive("g360", q.g360)?;
        positive("deadline", q.deadline)?;
        at_least_one("eval_slots", q.eval_slots)?;

        let l = &self.learning;
        at_least_one("neurons", l.neurons)?;
        in_unit("recurrent_weight", l.recurrent_weight)?;
        non_negative("input_scale", l.input_scale)?;
        non_negative("lambda", l.lambda)?;
        non_negative("lambda_prime", l.lambda_prime)?;
        positive("schedule_tau", l.schedule_tau)?;
        in_unit("epsilon", l.epsilon)?;
        positive("epsilon_decay", l.epsilon_decay)?;
        in_unit("epsilon_floor", l.epsilon_floor)?;
        if !(l.zeta > 0.0 && l.zeta <= 1.0) {
            return Err(Error::config(
                "zeta",
                format!("must lie in (0, 1], got {}", l.zeta),
            ));
        }
        at_least_one("action_cap", l.action_cap)?;

        at_least_one("periods", self.harness.periods)?;
        Ok(())
    }

    /// Physical parameters after profile scaling and dBm conversion.
    pub fn scenario(&self, correlation_aware: bool) -> ScenarioParams {
        let size = self.harness.profile.size_scale();
        let c = &self.channel;
        let r = &self.correlation;
        ScenarioParams {
            radio: RadioParams {
                pathloss_exponent: c.pathloss_exponent,
                noise_power: dbm_to_watts(c.noise_power_dbm),
                rb_bandwidth: c.rb_bandwidth,
                sbs_power: dbm_to_watts(c.sbs_power_dbm),
                user_power: dbm_to_watts(c.user_power_dbm),
                min_distance: c.min_distance,
            },
            downlink_rbs: c.downlink_rbs,
            uplink_rbs: c.uplink_rbs,
            visible_bits: self.qos.g120 * size,
            full_bits: self.qos.g360 * size,
            deadline: self.qos.deadline,
            backhaul_total: c.backhaul_rate * self.harness.profile.backhaul_scale(),
            tracking: TrackingSize {
                k_min: r.k_min * size,
                k_max: r.k_max * size,
                sigma_ref: r.sigma_ref,
            },
            user_sigma: r.user_sigma,
            alpha: r.alpha,
            kappa: r.kappa,
            sigma_max_override: r.sigma_max_override,
            view_width: r.view_width,
            num_contents: r.num_contents,
            view_concentration: r.view_concentration,
            eval_slots: self.qos.eval_slots,
            correlation_aware,
        }
    }

    pub fn scenario_for(&self, algorithm: Algorithm) -> ScenarioParams {
        self.scenario(algorithm.correlation_aware())
    }

    pub fn agent_settings(&self) -> AgentSettings {
        let l = &self.learning;
        let rate = |r: f64| match l.schedule {
            Schedule::Constant => LearningRate::Constant { rate: r },
            Schedule::RobbinsMonro => LearningRate::RobbinsMonro {
                initial: r,
                tau: l.schedule_tau,
            },
        };
        AgentSettings {
            esn: EsnParams {
                neurons: l.neurons,
                recurrent_weight: l.recurrent_weight,
                input_scale: l.input_scale,
                utility_rate: rate(l.lambda),
                delta_rate: rate(l.lambda_prime),
            },
            exploration: Exploration {
                epsilon: l.epsilon,
                decay: l.epsilon_decay,
                floor: l.epsilon_floor,
            },
            zeta: l.zeta,
            action_cap: l.action_cap,
        }
    }

    /// SHA-256 of the canonical TOML rendering, lowercase hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Read, parse and validate a config file. Missing keys take defaults.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::parse(&text, path)
}
