//! JSON instance files.

use std::fmt;

use latesched_core::{
    validate_instance, Error, Instance, Job, JobId, ScenarioSpec, Timeline, Window,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub jobs: Vec<JobRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobRecord {
    pub id: u32,
    pub p: i64,
    pub r: i64,
    pub q: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Mna,
    Ona,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowRecord {
    pub kind: WindowKind,
    pub t1: i64,
    pub t2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A file that does not follow the instance schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    /// 1-based position for syntax and type errors.
    pub position: Option<(usize, usize)>,
    /// Offending field, e.g. `jobs[2].p`.
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((line, column)) = self.position {
            write!(f, "line {line}, column {column}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for SchemaError {}

impl SchemaError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            position: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

/// A parsed and validated instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub spec: ScenarioSpec,
    pub window_kind: Option<WindowKind>,
    pub file: InstanceFile,
}

impl ParsedInstance {
    pub fn name(&self) -> Option<&str> {
        self.file.metadata.as_ref().and_then(|m| m.name.as_deref())
    }
}

/// Parses and validates instance text.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, SchemaError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| SchemaError {
        position: Some((e.line(), e.column())),
        field: None,
        message: e.to_string(),
    })?;
    file.to_parsed()
}

impl InstanceFile {
    pub fn to_parsed(&self) -> Result<ParsedInstance, SchemaError> {
        let (instance, spec) = self.to_model()?;
        Ok(ParsedInstance {
            instance,
            spec,
            window_kind: self.window.map(|w| w.kind),
            file: self.clone(),
        })
    }

    fn to_model(&self) -> Result<(Instance, ScenarioSpec), SchemaError> {
        let jobs: Vec<Job> = self
            .jobs
            .iter()
            .map(|j| Job::new(j.id, j.p, j.r, j.q))
            .collect();
        let position = |id: JobId, nth: usize| {
            self.jobs
                .iter()
                .enumerate()
                .filter(|(_, j)| j.id == id.0)
                .nth(nth)
                .map_or(0, |(i, _)| i)
        };
        let instance = Instance::new(jobs).map_err(|e| match e {
            Error::EmptyInstance => SchemaError::field("jobs", "at least one job is required"),
            Error::DuplicateId(id) => SchemaError::field(
                format!("jobs[{}].id", position(id, 1)),
                format!("duplicate id {id}"),
            ),
            Error::NonPositiveProcessing(id) => SchemaError::field(
                format!("jobs[{}].p", position(id, 0)),
                "processing time must be at least 1",
            ),
            Error::NegativeTime(id) => {
                let i = position(id, 0);
                let which = if self.jobs[i].r < 0 { "r" } else { "q" };
                SchemaError::field(format!("jobs[{i}].{which}"), "must be nonnegative")
            }
            other => SchemaError::field("jobs", other.to_string()),
        })?;
        let timeline = match self.window {
            None => Timeline::Unrestricted,
            Some(w) => {
                if w.t1 < 0 || w.t1 > w.t2 {
                    return Err(SchemaError::field(
                        "window",
                        format!("need 0 <= t1 <= t2, got t1={} t2={}", w.t1, w.t2),
                    ));
                }
                let window = Window::from_ints(w.t1, w.t2).expect("checked above");
                match w.kind {
                    WindowKind::Mna => Timeline::Machine(window),
                    WindowKind::Ona => Timeline::Operator(window),
                }
            }
        };
        if self.deadline.is_some_and(|d| d < 0) {
            return Err(SchemaError::field("deadline", "must be nonnegative"));
        }
        let spec = ScenarioSpec {
            timeline,
            deadline: self.deadline.map(latesched_core::time::int),
        };
        validate_instance(&instance, &spec)
            .map_err(|e| SchemaError::field("instance", e.to_string()))?;
        Ok((instance, spec))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }
}
