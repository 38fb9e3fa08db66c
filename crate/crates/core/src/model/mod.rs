//! Problem definition: film plans, flight paths and their verification.

mod measure;
mod verify;

pub use measure::{filming_time, interval_union_length, FilmingTime};
pub use verify::{
    check_realizable, check_realizable_with_tolerance, verify, Infeasibility, Realizability,
    VerificationReport,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid time interval [{start}, {end}]")]
    InvalidInterval { start: f64, end: f64 },
    #[error("scene ids must be 1..n in order: position {position} holds id {id}")]
    SceneIdOrder { position: usize, id: usize },
    #[error("scene {0} has a non-finite location")]
    BadLocation(usize),
    #[error("unknown scene id {0}")]
    UnknownScene(usize),
    #[error("plan has {paths} paths but only {k} drones are available")]
    TooManyPaths { paths: usize, k: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("path {path}: {violation}")]
    Structural {
        path: usize,
        violation: PathViolation,
    },
}

/// First structural invariant a flight path breaks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathViolation {
    #[error("flight path is empty")]
    Empty,
    #[error("flight path must start at the base")]
    StartNotBase,
    #[error("flight path must end at the base")]
    EndNotBase,
    #[error("entry {entry}: invalid interval [{start}, {end}]")]
    BadInterval { entry: usize, start: f64, end: f64 },
    #[error("entry {entry}: unknown scene id {scene}")]
    UnknownScene { entry: usize, scene: usize },
    #[error("entry {entry}: interval [{start}, {end}] is outside the window of scene {scene}")]
    OutsideWindow {
        entry: usize,
        scene: usize,
        start: f64,
        end: f64,
    },
    #[error("entries ({0}, {1}) are not in chronological order")]
    NotChronological(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: f64,
    pub end: f64,
}

impl TimeInterval {
    pub fn new(start: f64, end: f64) -> Result<Self, ModelError> {
        let iv = Self { start, end };
        if iv.is_valid() {
            Ok(iv)
        } else {
            Err(ModelError::InvalidInterval { start, end })
        }
    }

    /// Zero-length interval at `t`.
    pub fn instant(t: f64) -> Self {
        Self { start: t, end: t }
    }

    pub fn is_valid(&self) -> bool {
        self.start.is_finite() && self.end.is_finite() && self.start <= self.end
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).max(0.0)
    }

    pub fn intersect(&self, other: &TimeInterval) -> Option<TimeInterval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(TimeInterval { start, end })
    }

    /// Measure of the overlap with `other`.
    pub fn overlap(&self, other: &TimeInterval) -> f64 {
        self.intersect(other).map_or(0.0, |iv| iv.length())
    }

    pub fn contains(&self, other: &TimeInterval, tol: f64) -> bool {
        other.start >= self.start - tol && other.end <= self.end + tol
    }

    pub fn shifted(&self, dt: f64) -> TimeInterval {
        TimeInterval {
            start: self.start + dt,
            end: self.end + dt,
        }
    }
}

/// Role of a scene in the hardness construction; `Generic` for hand-made input.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SceneKind {
    W,
    #[serde(rename = "BASE_PARK")]
    BaseParking,
    Literal,
    Y,
    #[serde(rename = "LITERAL_PARK")]
    LiteralParking,
    Travelling,
    Clause,
    #[default]
    Generic,
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SceneKind::W => "W",
            SceneKind::BaseParking => "BASE_PARK",
            SceneKind::Literal => "LITERAL",
            SceneKind::Y => "Y",
            SceneKind::LiteralParking => "LITERAL_PARK",
            SceneKind::Travelling => "TRAVELLING",
            SceneKind::Clause => "CLAUSE",
            SceneKind::Generic => "GENERIC",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub id: usize,
    pub location: Point,
    pub window: TimeInterval,
    #[serde(default)]
    pub kind: SceneKind,
}

/// The scenes to be filmed plus the base. Scene ids are `1..=n` in order;
/// id 0 is reserved for the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilmPlan {
    pub base: Point,
    pub scenes: Vec<Scene>,
}

impl FilmPlan {
    pub fn new(base: Point, scenes: Vec<Scene>) -> Result<Self, ModelError> {
        let plan = Self { base, scenes };
        plan.validate()?;
        Ok(plan)
    }

    /// Builds a plan of generic scenes from `(location, window)` pairs,
    /// numbering them from 1.
    pub fn from_windows(
        base: Point,
        scenes: impl IntoIterator<Item = (Point, TimeInterval)>,
    ) -> Result<Self, ModelError> {
        let scenes = scenes
            .into_iter()
            .enumerate()
            .map(|(i, (location, window))| Scene {
                id: i + 1,
                location,
                window,
                kind: SceneKind::Generic,
            })
            .collect();
        Self::new(base, scenes)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.base.is_finite() {
            return Err(ModelError::BadLocation(0));
        }
        for (position, scene) in self.scenes.iter().enumerate() {
            if scene.id != position + 1 {
                return Err(ModelError::SceneIdOrder {
                    position,
                    id: scene.id,
                });
            }
            if !scene.location.is_finite() {
                return Err(ModelError::BadLocation(scene.id));
            }
            if !scene.window.is_valid() {
                return Err(ModelError::InvalidInterval {
                    start: scene.window.start,
                    end: scene.window.end,
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.scenes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenes.is_empty()
    }

    pub fn scene(&self, id: usize) -> Option<&Scene> {
        id.checked_sub(1).and_then(|i| self.scenes.get(i))
    }

    /// Location of a path reference: the base for [`SceneRef::Base`].
    pub fn location(&self, r: SceneRef) -> Option<Point> {
        match r {
            SceneRef::Base => Some(self.base),
            SceneRef::Scene(id) => self.scene(id).map(|s| s.location),
        }
    }

    /// Largest absolute time appearing in any window.
    pub fn time_scale(&self) -> f64 {
        self.scenes
            .iter()
            .map(|s| s.window.start.abs().max(s.window.end.abs()))
            .fold(0.0, f64::max)
    }

    /// Sum of all window lengths; an upper bound on any filming time.
    pub fn total_window_length(&self) -> f64 {
        self.scenes.iter().map(|s| s.window.length()).sum()
    }
}

/// Either the base (serialized as 0) or a scene id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "usize", into = "usize")]
pub enum SceneRef {
    Base,
    Scene(usize),
}

impl From<usize> for SceneRef {
    fn from(v: usize) -> Self {
        if v == 0 {
            SceneRef::Base
        } else {
            SceneRef::Scene(v)
        }
    }
}

impl From<SceneRef> for usize {
    fn from(r: SceneRef) -> usize {
        match r {
            SceneRef::Base => 0,
            SceneRef::Scene(id) => id,
        }
    }
}

impl SceneRef {
    pub fn is_base(self) -> bool {
        self == SceneRef::Base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub scene: SceneRef,
    pub interval: TimeInterval,
}

impl PathEntry {
    pub fn base(start: f64, end: f64) -> Self {
        Self {
            scene: SceneRef::Base,
            interval: TimeInterval { start, end },
        }
    }

    pub fn scene(id: usize, start: f64, end: f64) -> Self {
        Self {
            scene: SceneRef::Scene(id),
            interval: TimeInterval { start, end },
        }
    }
}

/// One drone's schedule: base, scene visits with filming intervals, base.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FlightPath {
    pub entries: Vec<PathEntry>,
}

impl FlightPath {
    pub fn new(entries: Vec<PathEntry>) -> Self {
        Self { entries }
    }

    pub fn max_time(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.interval.start.abs().max(e.interval.end.abs()))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FlightPlan {
    pub paths: Vec<FlightPath>,
}

impl FlightPlan {
    pub fn new(paths: Vec<FlightPath>) -> Self {
        Self { paths }
    }

    pub fn max_time(&self) -> f64 {
        self.paths.iter().map(FlightPath::max_time).fold(0.0, f64::max)
    }
}

/// The decision problem `(film plan, k, L, T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtlbInstance {
    pub film_plan: FilmPlan,
    pub k: usize,
    /// Battery endurance `L`, in seconds of flight.
    pub battery: f64,
    /// Target filming time `T`.
    pub target: f64,
}

impl FtlbInstance {
    pub fn new(film_plan: FilmPlan, k: usize, battery: f64, target: f64) -> Result<Self, ModelError> {
        let inst = Self {
            film_plan,
            k,
            battery,
            target,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.film_plan.validate()?;
        if self.k == 0 {
            return Err(ModelError::InvalidInstance("k must be at least 1".into()));
        }
        if !(self.battery > 0.0 && self.battery.is_finite()) {
            return Err(ModelError::InvalidInstance(format!(
                "battery endurance must be positive, got {}",
                self.battery
            )));
        }
        if !(self.target >= 0.0 && self.target.is_finite()) {
            return Err(ModelError::InvalidInstance(format!(
                "target filming time must be non-negative, got {}",
                self.target
            )));
        }
        Ok(())
    }

    /// Largest time value in the instance, used to scale tolerances.
    pub fn time_scale(&self) -> f64 {
        self.film_plan
            .time_scale()
            .max(self.battery)
            .max(self.target)
    }
}
