//! Team controllers: the scripted built-ins and external processes.

pub mod nav;
pub mod scripted;
pub mod subprocess;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::action::TeamActions;
use crate::sim::observe::TeamObservation;

pub use scripted::{specialty, Scripted, Style};
pub use subprocess::{serve, SubprocessPolicy};

/// Controls all eight members of one team.
pub trait Policy: Send {
    fn name(&self) -> &str;

    /// One action per member, in member order. Dead members are ignored.
    fn act(&mut self, obs: &TeamObservation) -> TeamActions;

    /// Whether identical observations always produce identical actions.
    fn deterministic(&self) -> bool {
        true
    }
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("unknown policy `{0}`")]
    Unknown(String),
    #[error("failed to start `{command}`: {source}")]
    Spawn { command: String, source: std::io::Error },
}

/// A resolvable policy identifier: a built-in style name or `cmd:<command line>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PolicyId {
    Builtin(Style),
    Command(String),
}

impl PolicyId {
    pub fn instantiate(&self) -> Result<Box<dyn Policy>, PolicyError> {
        match self {
            PolicyId::Builtin(style) => Ok(Box::new(Scripted::new(*style))),
            PolicyId::Command(cmd) => Ok(Box::new(SubprocessPolicy::spawn(cmd)?)),
        }
    }
}

impl FromStr for PolicyId {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(cmd) = s.strip_prefix("cmd:") {
            if cmd.trim().is_empty() {
                return Err(PolicyError::Unknown(s.to_string()));
            }
            return Ok(PolicyId::Command(cmd.trim().to_string()));
        }
        Style::parse(s).map(PolicyId::Builtin).ok_or_else(|| PolicyError::Unknown(s.to_string()))
    }
}

impl TryFrom<String> for PolicyId {
    type Error = PolicyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PolicyId> for String {
    fn from(p: PolicyId) -> String {
        p.to_string()
    }
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyId::Builtin(s) => f.write_str(s.name()),
            PolicyId::Command(c) => write!(f, "cmd:{c}"),
        }
    }
}
