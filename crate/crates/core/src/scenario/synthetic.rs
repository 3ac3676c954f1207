//! Deterministic synthetic scenario generator.
//!
//! Each family builds a two-lane straight road and scripts a privileged
//! driver for the ego plus IDM-style surrounding agents. Agents that follow
//! the ego react to the scripted ego motion, so their ground-truth futures
//! carry the ego-conditioned behavior the reactive predictor is trained on.
//! Generation is a pure function of `(family, count, seed)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{path_length, point_at_arclength, tangent_at_arclength, MarkingKind, Point2, Polyline, Pose2};
use crate::scenario::{
    AgentKind, AgentTrack, BoxDims, Command, EgoInit, HistoryFrame, Navigation, Scenario,
    Trajectory, EGO_TRAJ_LEN, FUTURE_LEN, HISTORY_LEN, PATH_LEN,
};
use crate::util::mix_seed;

/// Synthetic scenario family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Lead vehicle decelerating to a stop ahead of a fast ego.
    LeadBrake,
    /// Steady cruising behind a lead, with a trailing follower.
    CarFollow,
    /// Adjacent-lane vehicle merging into the ego lane ahead.
    CutIn,
    /// Stop line across the ego lane; the ego brakes to a standstill.
    StopLine,
    /// Stationary ego with an adjacent-lane agent; lane-change intent.
    LaneChange,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::LeadBrake,
        Family::CarFollow,
        Family::CutIn,
        Family::StopLine,
        Family::LaneChange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::LeadBrake => "lead_brake",
            Family::CarFollow => "car_follow",
            Family::CutIn => "cut_in",
            Family::StopLine => "stop_line",
            Family::LaneChange => "lane_change",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown scenario family: {s}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Lane width of the synthetic road.
pub const LANE_WIDTH: f64 = 3.5;
/// Default ego footprint (4.6 m x 1.9 m).
pub const EGO_DIMS: BoxDims = BoxDims {
    half_length: 2.3,
    half_width: 0.95,
};

// Timeline: 0.1 s steps from t = -1.5 s (history) to t = +3.0 s (future).
const STEPS: usize = 46;
const T0: usize = 15; // index of t = 0
const HIST_IDX: [usize; HISTORY_LEN] = [0, 5, 10, 15];
const FUT_IDX: [usize; FUTURE_LEN] = [20, 25, 30, 35, 40, 45];
const DT: f64 = 0.1;

/// Longitudinal speed script for one actor.
#[derive(Debug, Clone, Copy)]
enum Profile {
    Constant,
    /// Brake at `rate` toward `target` starting at `from_t`.
    DecelTo { rate: f64, target: f64, from_t: f64 },
    /// Accelerate at `rate` toward `target` starting at `from_t`.
    AccelTo { rate: f64, target: f64, from_t: f64 },
    /// IDM-style gap keeping behind the ego, active from `from_t`.
    FollowEgo { desired: f64, from_t: f64 },
    Static,
}

struct Actor {
    kind: AgentKind,
    dims: BoxDims,
    route: Vec<Point2>,
    start_arclength: f64,
    speed: f64,
    profile: Profile,
}

fn idm_accel(v: f64, v_lead: f64, net_gap: f64, desired: f64) -> f64 {
    let a_max = 2.5;
    let b = 4.0;
    let s_star = 2.0 + v * 1.0 + v * (v - v_lead) / (2.0 * (a_max * b as f64).sqrt());
    let a = a_max * (1.0 - (v / desired.max(0.1)).powi(4) - (s_star / net_gap.max(0.1)).powi(2));
    a.clamp(-6.0, a_max)
}

/// Integrate an actor's speed profile over the full timeline. History
/// (t < 0) extrapolates backwards at the initial speed. Returns per-step
/// (arclength, speed).
fn integrate(
    actor: &Actor,
    ego_positions: Option<&[(f64, f64)]>, // (arclength on shared axis, speed)
    ego_half_length: f64,
) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); STEPS];
    for (k, slot) in out.iter_mut().enumerate().take(T0 + 1) {
        let t = (k as f64 - T0 as f64) * DT;
        *slot = (actor.start_arclength + actor.speed * t, actor.speed);
    }
    let mut s = actor.start_arclength;
    let mut v = actor.speed;
    for k in (T0 + 1)..STEPS {
        let t = (k as f64 - T0 as f64) * DT;
        let a = match actor.profile {
            Profile::Constant => 0.0,
            Profile::Static => {
                out[k] = (s, 0.0);
                continue;
            }
            Profile::DecelTo { rate, target, from_t } => {
                if t > from_t && v > target {
                    -rate
                } else {
                    0.0
                }
            }
            Profile::AccelTo { rate, target, from_t } => {
                if t > from_t && v < target {
                    rate
                } else {
                    0.0
                }
            }
            Profile::FollowEgo { desired, from_t } => {
                let ego = ego_positions.expect("follower needs ego track");
                if t > from_t {
                    let (ego_s, ego_v) = ego[k - 1];
                    let gap = ego_s - s - actor.dims.half_length - ego_half_length;
                    idm_accel(v, ego_v, gap, desired)
                } else {
                    0.0
                }
            }
        };
        v = (v + a * DT).max(0.0);
        s += v * DT;
        out[k] = (s, v);
    }
    out
}

fn pose_on_route(route: &[Point2], s: f64) -> Pose2 {
    let p = point_at_arclength(route, s);
    let tan = tangent_at_arclength(route, s);
    Pose2::new(p.x, p.y, tan.y.atan2(tan.x))
}

fn straight_route(y: f64) -> Vec<Point2> {
    vec![Point2::new(-60.0, y), Point2::new(120.0, y)]
}

/// Dense lane-change route: straight in the source lane, a raised-cosine
/// lateral transition of length `transition`, then straight in the target.
fn lane_change_route(y_from: f64, y_to: f64, x_start: f64, transition: f64) -> Vec<Point2> {
    let mut pts = vec![Point2::new(-60.0, y_from)];
    let mut x = -59.75;
    while x < 120.0 {
        let y = if x <= x_start {
            y_from
        } else if x >= x_start + transition {
            y_to
        } else {
            let u = (x - x_start) / transition;
            y_from + (y_to - y_from) * 0.5 * (1.0 - (std::f64::consts::PI * u).cos())
        };
        pts.push(Point2::new(x, y));
        x += 0.25;
    }
    pts
}

fn road_map(rng: &mut ChaCha8Rng, stop_line_x: Option<f64>) -> Vec<Polyline> {
    let left_kind = if rng.random_bool(0.35) {
        MarkingKind::SolidDouble
    } else {
        MarkingKind::SolidSingle
    };
    let mut map = vec![
        Polyline::new(
            vec![Point2::new(-60.0, -0.5 * LANE_WIDTH), Point2::new(120.0, -0.5 * LANE_WIDTH)],
            MarkingKind::SolidSingle,
        )
        .unwrap(),
        Polyline::new(
            vec![Point2::new(-60.0, 0.5 * LANE_WIDTH), Point2::new(120.0, 0.5 * LANE_WIDTH)],
            MarkingKind::Broken,
        )
        .unwrap(),
        Polyline::new(
            vec![Point2::new(-60.0, 1.5 * LANE_WIDTH), Point2::new(120.0, 1.5 * LANE_WIDTH)],
            left_kind,
        )
        .unwrap(),
    ];
    if let Some(x) = stop_line_x {
        map.push(
            Polyline::new(
                vec![Point2::new(x, -0.5 * LANE_WIDTH), Point2::new(x, 0.5 * LANE_WIDTH)],
                MarkingKind::SolidSingle,
            )
            .unwrap(),
        );
    }
    map
}

struct Builder {
    rng: ChaCha8Rng,
    id: String,
    ego_route: Vec<Point2>,
    ego_start: f64,
    ego_speed: f64,
    ego_profile: Profile,
    actors: Vec<Actor>,
    map: Vec<Polyline>,
    nav: Navigation,
}

impl Builder {
    fn vehicle_dims(&mut self) -> BoxDims {
        BoxDims::new(
            self.rng.random_range(2.1..2.5),
            self.rng.random_range(0.85..1.0),
        )
    }

    fn maybe_roadside_props(&mut self) {
        if self.rng.random_bool(0.3) {
            let x = self.rng.random_range(5.0..40.0);
            self.actors.push(Actor {
                kind: AgentKind::Cone,
                dims: BoxDims::new(0.2, 0.2),
                route: straight_route(-0.5 * LANE_WIDTH - 0.45),
                start_arclength: 60.0 + x,
                speed: 0.0,
                profile: Profile::Static,
            });
        }
        if self.rng.random_bool(0.25) {
            let x = self.rng.random_range(-10.0..30.0);
            self.actors.push(Actor {
                kind: AgentKind::Pedestrian,
                dims: BoxDims::new(0.4, 0.4),
                route: straight_route(2.0 * LANE_WIDTH),
                start_arclength: 60.0 + x,
                speed: self.rng.random_range(0.8..1.5),
                profile: Profile::Constant,
            });
        }
    }

    fn trailing_follower(&mut self, gap: f64, speed: f64, desired: f64, from_t: f64) {
        let dims = self.vehicle_dims();
        self.actors.push(Actor {
            kind: AgentKind::Vehicle,
            dims,
            route: straight_route(0.0),
            start_arclength: self.ego_start - gap,
            speed,
            profile: Profile::FollowEgo { desired, from_t },
        });
    }

    fn finish(self) -> Scenario {
        let Builder {
            rng: _,
            id,
            ego_route,
            ego_start,
            ego_speed,
            ego_profile,
            actors,
            map,
            nav,
        } = self;

        let ego_actor = Actor {
            kind: AgentKind::Vehicle,
            dims: EGO_DIMS,
            route: ego_route.clone(),
            start_arclength: ego_start,
            speed: ego_speed,
            profile: ego_profile,
        };
        let ego_track = integrate(&ego_actor, None, 0.0);

        // Scenario-local frame: ego initial pose at origin heading +x. The
        // synthetic roads are built along +x with the ego starting at the
        // route point that maps to the origin, so translation suffices.
        let ego_pose0 = pose_on_route(&ego_route, ego_start);
        let to_local = |p: Point2| ego_pose0.to_local(p);

        let ego_traj_pts: Vec<Point2> = (T0 + 1..=T0 + EGO_TRAJ_LEN)
            .map(|k| to_local(point_at_arclength(&ego_route, ego_track[k].0)))
            .collect();
        let travelled: f64 = std::iter::once(Point2::new(0.0, 0.0))
            .chain(ego_traj_pts.iter().copied())
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| w[0].dist(w[1]))
            .sum();
        let mean_speed = travelled / (EGO_TRAJ_LEN as f64 * DT);
        let ego_gt_speed = mean_speed.round().clamp(0.0, 12.0);

        let ego_gt_path: Vec<Point2> = (1..=PATH_LEN)
            .map(|i| to_local(point_at_arclength(&ego_route, ego_start + 2.0 * i as f64)))
            .collect();

        let mut agents = Vec::new();
        for (i, actor) in actors.iter().enumerate() {
            let track = integrate(actor, Some(&ego_track), EGO_DIMS.half_length);
            let history: Vec<HistoryFrame> = HIST_IDX
                .iter()
                .map(|&k| {
                    let pose = pose_on_route(&actor.route, track[k].0);
                    let p = to_local(pose.position);
                    HistoryFrame {
                        pose: Pose2::new(p.x, p.y, pose.heading - ego_pose0.heading),
                        speed: track[k].1,
                    }
                })
                .collect();
            let future: Vec<Point2> = FUT_IDX
                .iter()
                .map(|&k| to_local(point_at_arclength(&actor.route, track[k].0)))
                .collect();
            agents.push(AgentTrack {
                id: i as u32,
                kind: actor.kind,
                dims: actor.dims,
                history,
                gt_future: Trajectory::new(2, 0.5, future),
            });
        }

        let scenario = Scenario {
            id,
            ego_init: EgoInit {
                pose: Pose2::new(0.0, 0.0, 0.0),
                speed: ego_speed,
                dims: EGO_DIMS,
            },
            ego_gt_path,
            ego_gt_traj: Trajectory::new(10, DT, ego_traj_pts),
            ego_gt_speed,
            agents,
            map: map
                .into_iter()
                .map(|line| Polyline {
                    points: line.points.into_iter().map(to_local).collect(),
                    kind: line.kind,
                })
                .collect(),
            nav: Navigation {
                target_point: to_local(nav.target_point),
                command: nav.command,
            },
        };
        debug_assert!(scenario.validate().is_ok());
        scenario
    }
}

/// Route arclength at which the ego starts on the synthetic roads.
const EGO_START: f64 = 60.0;

fn base_builder(family: Family, index: usize, seed: u64) -> Builder {
    let rng = ChaCha8Rng::seed_from_u64(mix_seed(&[
        seed,
        Family::ALL.iter().position(|f| *f == family).unwrap() as u64,
        index as u64,
    ]));
    Builder {
        rng,
        id: format!("{}-{seed}-{index:05}", family.name()),
        ego_route: straight_route(0.0),
        ego_start: EGO_START,
        ego_speed: 0.0,
        ego_profile: Profile::Constant,
        actors: Vec::new(),
        map: Vec::new(),
        nav: Navigation {
            target_point: Point2::new(EGO_START + 12.0, 0.0),
            command: Command::Follow,
        },
    }
}

fn build_lead_brake(index: usize, seed: u64) -> Scenario {
    let mut b = base_builder(Family::LeadBrake, index, seed);
    let v0 = b.rng.random_range(7.5..11.0);
    let lead_speed = b.rng.random_range(1.0..7.0);
    let lead_decel = b.rng.random_range(2.5..5.0);
    let brake_dist = lead_speed * lead_speed / (2.0 * lead_decel);
    // The privileged driver brakes hard whenever the lead will stop within
    // 26 m; otherwise the stop is beyond twice the route length and it
    // cruises through.
    let close = b.rng.random_bool(0.2);
    let stop_at = if close {
        b.rng.random_range(18.0..26.0)
    } else {
        b.rng.random_range((2.0 * v0 + 8.6).max(27.0)..45.0)
    };
    let gap = (stop_at - brake_dist).max(10.0);
    b.ego_speed = v0;
    b.ego_profile = if stop_at <= 26.0 {
        Profile::DecelTo {
            rate: v0 / 1.9,
            target: 0.0,
            from_t: 0.0,
        }
    } else {
        Profile::Constant
    };
    let dims = b.vehicle_dims();
    b.actors.push(Actor {
        kind: AgentKind::Vehicle,
        dims,
        route: straight_route(0.0),
        start_arclength: EGO_START + gap,
        speed: lead_speed,
        profile: Profile::DecelTo {
            rate: lead_decel,
            target: 0.0,
            from_t: 0.0,
        },
    });
    if b.rng.random_bool(0.8) {
        let tgap = b.rng.random_range(8.0..14.0);
        let tspeed = v0 * b.rng.random_range(0.9..1.05);
        b.trailing_follower(tgap, tspeed, tspeed, 0.0);
    }
    b.maybe_roadside_props();
    b.map = road_map(&mut b.rng, None);
    b.finish()
}

fn build_car_follow(index: usize, seed: u64) -> Scenario {
    let mut b = base_builder(Family::CarFollow, index, seed);
    let v0 = b.rng.random_range(6.5..11.5);
    let gap = b.rng.random_range(18.0..35.0);
    let lead_speed = (v0 + b.rng.random_range(-1.0..2.0)).max(3.0);
    b.ego_speed = v0;
    b.ego_profile = Profile::Constant;
    let dims = b.vehicle_dims();
    b.actors.push(Actor {
        kind: AgentKind::Vehicle,
        dims,
        route: straight_route(0.0),
        start_arclength: EGO_START + gap,
        speed: lead_speed,
        profile: Profile::Constant,
    });
    if b.rng.random_bool(0.9) {
        let tgap = b.rng.random_range(7.0..13.0);
        let tspeed = v0 * b.rng.random_range(0.92..1.05);
        b.trailing_follower(tgap, tspeed, tspeed, 0.0);
    }
    b.maybe_roadside_props();
    b.map = road_map(&mut b.rng, None);
    b.finish()
}

fn build_cut_in(index: usize, seed: u64) -> Scenario {
    let mut b = base_builder(Family::CutIn, index, seed);
    let v0 = b.rng.random_range(6.0..10.0);
    let cut_speed = v0 * b.rng.random_range(0.7..0.9);
    let cut_x = b.rng.random_range(11.0..16.0);
    let merge_start = b.rng.random_range(0.0..0.4);
    b.ego_speed = v0;
    b.ego_profile = Profile::DecelTo {
        rate: 3.0,
        target: cut_speed * 0.85,
        from_t: merge_start,
    };
    let dims = b.vehicle_dims();
    // The cutting agent transitions from the left lane into the ego lane
    // over ~10 m starting slightly ahead of its current position.
    let route = lane_change_route(LANE_WIDTH, 0.0, EGO_START + cut_x + 1.0, 10.0);
    b.actors.push(Actor {
        kind: AgentKind::Vehicle,
        dims,
        route,
        start_arclength: EGO_START + cut_x,
        speed: cut_speed,
        profile: Profile::Constant,
    });
    if b.rng.random_bool(0.5) {
        let tgap = b.rng.random_range(9.0..14.0);
        let tspeed = v0 * b.rng.random_range(0.9..1.0);
        b.trailing_follower(tgap, tspeed, tspeed, 0.0);
    }
    b.map = road_map(&mut b.rng, None);
    b.finish()
}

fn build_stop_line(index: usize, seed: u64) -> Scenario {
    let mut b = base_builder(Family::StopLine, index, seed);
    let v0 = b.rng.random_range(4.5..8.0);
    // Stop point chosen so the ego reaches standstill within the 2 s
    // ground-truth window, leaving a zero-speed tail at the line.
    let stop_dist = v0 * b.rng.random_range(0.65..0.9);
    let line_x = EGO_START + stop_dist + EGO_DIMS.half_length + 0.3;
    b.ego_speed = v0;
    b.ego_profile = Profile::DecelTo {
        rate: v0 * v0 / (2.0 * stop_dist),
        target: 0.0,
        from_t: 0.0,
    };
    if b.rng.random_bool(0.85) {
        let tgap = b.rng.random_range(8.0..13.0);
        let tspeed = v0 * b.rng.random_range(0.85..1.0);
        b.trailing_follower(tgap, tspeed, tspeed, 0.0);
    }
    b.maybe_roadside_props();
    b.map = road_map(&mut b.rng, Some(line_x));
    b.nav.target_point = Point2::new(EGO_START + stop_dist, 0.0);
    b.finish()
}

fn build_lane_change(index: usize, seed: u64) -> Scenario {
    let mut b = base_builder(Family::LaneChange, index, seed);
    b.ego_speed = 0.0;
    b.ego_route = lane_change_route(0.0, LANE_WIDTH, EGO_START, 10.0);
    b.nav = Navigation {
        target_point: Point2::new(EGO_START + 12.0, LANE_WIDTH),
        command: Command::ChangeLeft,
    };
    let dims = b.vehicle_dims();
    // Three co-evolved variants: the ego waits for a slow far approacher,
    // waits for a close fast passer, or asserts while a mid-range
    // approacher yields.
    let variant = b.rng.random_range(0..3u32);
    match variant {
        0 => {
            let x0 = b.rng.random_range(-40.0..-25.0);
            let v = b.rng.random_range(2.2..3.2);
            b.actors.push(Actor {
                kind: AgentKind::Vehicle,
                dims,
                route: straight_route(LANE_WIDTH),
                start_arclength: EGO_START + x0,
                speed: v,
                profile: Profile::Constant,
            });
        }
        1 => {
            let x0 = b.rng.random_range(-12.0..-7.0);
            let v = b.rng.random_range(5.0..7.5);
            b.actors.push(Actor {
                kind: AgentKind::Vehicle,
                dims,
                route: straight_route(LANE_WIDTH),
                start_arclength: EGO_START + x0,
                speed: v,
                profile: Profile::Constant,
            });
        }
        _ => {
            let t_go = b.rng.random_range(0.2..0.5);
            b.ego_profile = Profile::AccelTo {
                rate: b.rng.random_range(2.2..3.0),
                target: 6.0,
                from_t: t_go,
            };
            let x0 = b.rng.random_range(-16.0..-11.0);
            let v = b.rng.random_range(4.5..6.0);
            b.actors.push(Actor {
                kind: AgentKind::Vehicle,
                dims,
                route: straight_route(LANE_WIDTH),
                start_arclength: EGO_START + x0,
                speed: v,
                profile: Profile::FollowEgo {
                    desired: v,
                    from_t: t_go,
                },
            });
        }
    }
    if b.rng.random_bool(0.3) {
        b.actors.push(Actor {
            kind: AgentKind::Cone,
            dims: BoxDims::new(0.2, 0.2),
            route: straight_route(-0.5 * LANE_WIDTH - 0.45),
            start_arclength: EGO_START + b.rng.random_range(4.0..20.0),
            speed: 0.0,
            profile: Profile::Static,
        });
    }
    b.map = road_map(&mut b.rng, None);
    b.finish()
}

/// Generate `count` scenarios of one family, deterministically per seed.
pub fn generate_synthetic(family: Family, count: usize, seed: u64) -> Vec<Scenario> {
    (0..count)
        .map(|i| match family {
            Family::LeadBrake => build_lead_brake(i, seed),
            Family::CarFollow => build_car_follow(i, seed),
            Family::CutIn => build_cut_in(i, seed),
            Family::StopLine => build_stop_line(i, seed),
            Family::LaneChange => build_lane_change(i, seed),
        })
        .collect()
}

/// Convenience: a seeded mixed dataset with the given family proportions.
pub fn generate_mixed(spec: &[(Family, usize)], seed: u64) -> Vec<Scenario> {
    let mut out = Vec::new();
    for (family, count) in spec {
        out.extend(generate_synthetic(*family, *count, seed));
    }
    out
}
