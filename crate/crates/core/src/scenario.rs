//! The vector-space scenario data model: schema types, JSONL
//! ingestion/serialization with canonical formatting, validation, and a
//! deterministic synthetic scenario generator.
//!
//! All coordinates are stored in a scenario-local frame with the ego's
//! initial pose at the origin heading +x. Units are meters, radians, m/s
//! and seconds throughout.

pub mod synthetic;

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polyline, Pose2};

/// Category of a surrounding agent; drives collision penalties and motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Vehicle,
    Pedestrian,
    Cone,
}

/// Half extents of a footprint rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDims {
    pub half_length: f64,
    pub half_width: f64,
}

impl BoxDims {
    pub fn new(half_length: f64, half_width: f64) -> Self {
        Self {
            half_length,
            half_width,
        }
    }

    pub fn obb(self, pose: Pose2) -> crate::geometry::OrientedBox {
        crate::geometry::OrientedBox::new(pose, self.half_length, self.half_width)
    }
}

/// A timestamped position sequence at a declared frequency (2 or 10 Hz).
/// `origin_time` is the timestamp of the first point; point `k` sits at
/// `origin_time + k / frequency_hz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub frequency_hz: u32,
    pub origin_time: f64,
    pub points: Vec<Point2>,
}

impl Trajectory {
    pub fn new(frequency_hz: u32, origin_time: f64, points: Vec<Point2>) -> Self {
        Self {
            frequency_hz,
            origin_time,
            points,
        }
    }

    pub fn dt(&self) -> f64 {
        1.0 / f64::from(self.frequency_hz)
    }

    pub fn validate(&self) -> Result<()> {
        if self.frequency_hz != 2 && self.frequency_hz != 10 {
            return Err(Error::Validation(format!(
                "trajectory frequency must be 2 or 10 Hz, got {}",
                self.frequency_hz
            )));
        }
        if self.points.is_empty() {
            return Err(Error::Validation("trajectory has no points".into()));
        }
        if !self.origin_time.is_finite() || self.points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Validation("trajectory contains non-finite values".into()));
        }
        Ok(())
    }
}

/// One past observation of an agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryFrame {
    pub pose: Pose2,
    pub speed: f64,
}

/// Number of 2 Hz history frames per agent (oldest first, last = current).
pub const HISTORY_LEN: usize = 4;
/// Ground-truth future length at 2 Hz (3 s).
pub const FUTURE_LEN: usize = 6;
/// Ego ground-truth trajectory length at 10 Hz (2 s).
pub const EGO_TRAJ_LEN: usize = 20;
/// Ego ground-truth path waypoint count (2 m spacing).
pub const PATH_LEN: usize = 6;
/// Maximum agents per scenario.
pub const MAX_AGENTS: usize = 16;

/// A surrounding agent: footprint, short history, and ground-truth future.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTrack {
    pub id: u32,
    pub kind: AgentKind,
    #[serde(rename = "box")]
    pub dims: BoxDims,
    pub history: Vec<HistoryFrame>,
    pub gt_future: Trajectory,
}

impl AgentTrack {
    pub fn current(&self) -> HistoryFrame {
        *self.history.last().expect("validated history")
    }

    fn validate(&self) -> Result<()> {
        if self.history.len() != HISTORY_LEN {
            return Err(Error::Validation(format!(
                "agent {}: history length {} != {HISTORY_LEN}",
                self.id,
                self.history.len()
            )));
        }
        if self.dims.half_length <= 0.0 || self.dims.half_width <= 0.0 {
            return Err(Error::Validation(format!("agent {}: non-positive box", self.id)));
        }
        self.gt_future.validate()?;
        if self.gt_future.frequency_hz != 2 || self.gt_future.points.len() != FUTURE_LEN {
            return Err(Error::Validation(format!(
                "agent {}: gt_future must be {FUTURE_LEN} points at 2 Hz",
                self.id
            )));
        }
        Ok(())
    }
}

/// Route-level driving command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Follow,
    Left,
    Right,
    Straight,
    ChangeLeft,
    ChangeRight,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Follow,
        Command::Left,
        Command::Right,
        Command::Straight,
        Command::ChangeLeft,
        Command::ChangeRight,
    ];

    pub fn one_hot(self) -> [f64; 6] {
        let mut v = [0.0; 6];
        let idx = Command::ALL.iter().position(|c| *c == self).unwrap();
        v[idx] = 1.0;
        v
    }
}

/// Navigation input: a target point plus a discrete command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Navigation {
    pub target_point: Point2,
    pub command: Command,
}

/// Ego initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgoInit {
    pub pose: Pose2,
    pub speed: f64,
    #[serde(rename = "box")]
    pub dims: BoxDims,
}

/// One vector-space snapshot with ground truth, the unit of training and
/// evaluation data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub ego_init: EgoInit,
    pub ego_gt_path: Vec<Point2>,
    pub ego_gt_traj: Trajectory,
    pub ego_gt_speed: f64,
    pub agents: Vec<AgentTrack>,
    pub map: Vec<Polyline>,
    pub nav: Navigation,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let ctx = |field: &str, msg: String| {
            Error::Validation(format!("scenario {}: {field}: {msg}", self.id))
        };
        if self.ego_gt_path.len() != PATH_LEN {
            return Err(ctx(
                "ego_gt_path",
                format!("expected {PATH_LEN} points, got {}", self.ego_gt_path.len()),
            ));
        }
        if self.ego_gt_path.iter().any(|p| !p.is_finite()) {
            return Err(ctx("ego_gt_path", "non-finite point".into()));
        }
        self.ego_gt_traj
            .validate()
            .map_err(|e| ctx("ego_gt_traj", e.to_string()))?;
        if self.ego_gt_traj.frequency_hz != 10 || self.ego_gt_traj.points.len() != EGO_TRAJ_LEN {
            return Err(ctx(
                "ego_gt_traj",
                format!("expected {EGO_TRAJ_LEN} points at 10 Hz"),
            ));
        }
        if !self.ego_gt_speed.is_finite() || !(0.0..=12.0).contains(&self.ego_gt_speed) {
            return Err(ctx("ego_gt_speed", format!("{} out of [0, 12]", self.ego_gt_speed)));
        }
        if !self.ego_init.speed.is_finite() || self.ego_init.speed < 0.0 {
            return Err(ctx("ego_init", "negative or non-finite speed".into()));
        }
        if self.agents.len() > MAX_AGENTS {
            return Err(ctx("agents", format!("{} agents > {MAX_AGENTS}", self.agents.len())));
        }
        let mut ids: Vec<u32> = self.agents.iter().map(|a| a.id).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.agents.len() {
            return Err(ctx("agents", "duplicate agent ids".into()));
        }
        for a in &self.agents {
            a.validate()
                .map_err(|e| ctx(&format!("agents[{}]", a.id), e.to_string()))?;
        }
        for (i, line) in self.map.iter().enumerate() {
            line.validate()
                .map_err(|e| ctx(&format!("map[{i}]"), e.to_string()))?;
        }
        if !self.nav.target_point.is_finite() {
            return Err(ctx("nav", "non-finite target point".into()));
        }
        Ok(())
    }
}

/// Write a JSON value with sorted keys and all floats formatted to 6
/// decimals, so identical data always produces identical bytes.
fn write_canonical(value: &serde_json::Value, out: &mut String) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().expect("finite float");
                let f = if f == 0.0 { 0.0 } else { f }; // drop negative zero
                out.push_str(&format!("{f:.6}"));
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string"));
        }
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(v, out);
            }
            out.push(']');
        }
        // serde_json's default map is ordered by key.
        serde_json::Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                write_canonical(v, out);
            }
            out.push('}');
        }
    }
}

/// Canonical single-line JSON encoding of one scenario.
pub fn scenario_to_canonical_json(s: &Scenario) -> Result<String> {
    let value = serde_json::to_value(s)?;
    let mut out = String::new();
    write_canonical(&value, &mut out);
    Ok(out)
}

/// Load scenarios from a JSONL file, validating each line.
pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let scenario: Scenario = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        scenario.validate()?;
        out.push(scenario);
    }
    Ok(out)
}

/// Save scenarios as canonical JSONL. Identical input produces
/// byte-identical files.
pub fn save_scenarios(scenarios: &[Scenario], path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for s in scenarios {
        let line = scenario_to_canonical_json(s)?;
        file.write_all(line.as_bytes())?;
        file.write_all(b"\n")?;
    }
    file.flush()?;
    Ok(())
}
