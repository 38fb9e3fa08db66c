use serde::{Deserialize, Serialize};

use super::IoError;
use crate::geometry::Point;
use crate::model::{FilmPlan, FlightPath, FlightPlan, PathEntry, Scene, SceneKind, SceneRef, TimeInterval, VerificationReport};
use crate::reduction::{
    rebuild, BalancedCnf, ConstructionParams, ReducedInstance, ReductionCertificate,
    ReductionError,
};
use crate::FtlbInstance;

pub const INSTANCE_SCHEMA: &str = "ftlb-instance/1";
pub const PLAN_SCHEMA: &str = "ftlb-plan/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub start: f64,
    pub end: f64,
    #[serde(default)]
    pub kind: SceneKind,
}

/// The reduction data needed to rebuild the layout and witness plans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionBlock {
    pub balanced: BalancedCnf,
    pub params: ConstructionParams,
    pub certificate: ReductionCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub schema: String,
    pub base: Point,
    pub scenes: Vec<SceneRecord>,
    pub k: usize,
    pub battery: f64,
    pub target: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionBlock>,
}

impl InstanceDocument {
    pub fn from_instance(instance: &FtlbInstance) -> Self {
        let scenes = instance
            .film_plan
            .scenes
            .iter()
            .map(|s| SceneRecord {
                id: s.id,
                x: s.location.x,
                y: s.location.y,
                start: s.window.start,
                end: s.window.end,
                kind: s.kind,
            })
            .collect();
        Self {
            schema: INSTANCE_SCHEMA.into(),
            base: instance.film_plan.base,
            scenes,
            k: instance.k,
            battery: instance.battery,
            target: instance.target,
            construction: None,
        }
    }

    pub fn from_reduced(reduced: &ReducedInstance) -> Self {
        Self {
            construction: Some(ConstructionBlock {
                balanced: reduced.balanced.clone(),
                params: reduced.params.clone(),
                certificate: reduced.certificate.clone(),
            }),
            ..Self::from_instance(&reduced.instance)
        }
    }

    pub fn instance(&self) -> Result<FtlbInstance, IoError> {
        let scenes = self
            .scenes
            .iter()
            .map(|s| Scene {
                id: s.id,
                location: Point::new(s.x, s.y),
                window: TimeInterval {
                    start: s.start,
                    end: s.end,
                },
                kind: s.kind,
            })
            .collect();
        let film_plan = FilmPlan::new(self.base, scenes)?;
        Ok(FtlbInstance::new(film_plan, self.k, self.battery, self.target)?)
    }

    /// Rebuilds the layout and schedule index from the stored parameters and
    /// checks that they reproduce the stored scenes exactly.
    pub fn reduced(&self) -> Result<Option<ReducedInstance>, IoError> {
        let Some(block) = &self.construction else {
            return Ok(None);
        };
        let instance = self.instance()?;
        let (layout, schedule) = rebuild(&block.balanced, &block.params)?;
        if schedule.film_plan != instance.film_plan {
            return Err(ReductionError::LayoutMismatch(
                "stored scenes differ from the scenes rebuilt from the parameters".into(),
            )
            .into());
        }
        Ok(Some(ReducedInstance {
            instance,
            balanced: block.balanced.clone(),
            params: block.params.clone(),
            layout,
            index: schedule.index,
            certificate: block.certificate.clone(),
        }))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: Self = serde_json::from_str(text)?;
        check_schema(&doc.schema, INSTANCE_SCHEMA)?;
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    /// 0 for the base, otherwise a scene id.
    pub scene: usize,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub all_realizable: bool,
    pub meets_target: bool,
    pub total_filming_time: f64,
    pub target: f64,
    pub battery: f64,
    pub max_away_time: f64,
}

impl From<&VerificationReport> for VerificationSummary {
    fn from(r: &VerificationReport) -> Self {
        Self {
            all_realizable: r.all_realizable(),
            meets_target: r.meets_target,
            total_filming_time: r.total_filming_time,
            target: r.target,
            battery: r.battery,
            max_away_time: r.max_away_time(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema: String,
    /// Producer of the plan: `witness`, `dp`, `greedy` or `exact`.
    pub method: String,
    pub paths: Vec<Vec<EntryRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
}

impl PlanDocument {
    pub fn new(plan: &FlightPlan, method: impl Into<String>) -> Self {
        let paths = plan
            .paths
            .iter()
            .map(|p| {
                p.entries
                    .iter()
                    .map(|e| EntryRecord {
                        scene: e.scene.into(),
                        start: e.interval.start,
                        end: e.interval.end,
                    })
                    .collect()
            })
            .collect();
        Self {
            schema: PLAN_SCHEMA.into(),
            method: method.into(),
            paths,
            objective: None,
            step: None,
            verification: None,
        }
    }

    pub fn with_verification(mut self, report: &VerificationReport) -> Self {
        self.verification = Some(report.into());
        self
    }

    pub fn plan(&self) -> FlightPlan {
        FlightPlan::new(
            self.paths
                .iter()
                .map(|entries| {
                    FlightPath::new(
                        entries
                            .iter()
                            .map(|e| PathEntry {
                                scene: SceneRef::from(e.scene),
                                interval: TimeInterval {
                                    start: e.start,
                                    end: e.end,
                                },
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: Self = serde_json::from_str(text)?;
        check_schema(&doc.schema, PLAN_SCHEMA)?;
        Ok(doc)
    }
}

fn check_schema(found: &str, expected: &'static str) -> Result<(), IoError> {
    if found == expected {
        Ok(())
    } else {
        Err(IoError::Schema {
            expected,
            found: found.into(),
        })
    }
}
