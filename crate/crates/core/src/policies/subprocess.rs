//! Line protocol for policies running in another process.
//!
//! Each tick the engine writes one line holding the team's observation as
//! JSON. The process answers with one line `{"tick": N, "actions": [...]}`.
//! A reply that does not arrive within the timeout counts as all-Stay; late
//! replies are discarded by tick number.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Policy, PolicyError};
use crate::sim::action::{AgentAction, TeamActions};
use crate::sim::observe::TeamObservation;
use crate::worldgen::TEAM_SIZE;

pub const REPLY_TIMEOUT: Duration = Duration::from_millis(100);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reply {
    pub tick: u32,
    pub actions: TeamActions,
}

pub struct SubprocessPolicy {
    name: String,
    child: Child,
    stdin: Option<ChildStdin>,
    replies: Receiver<String>,
    timeout: Duration,
    pub timeouts: u32,
}

impl SubprocessPolicy {
    pub fn spawn(command: &str) -> Result<Self, PolicyError> {
        let mut parts = command.split_whitespace();
        let program = parts.next().ok_or_else(|| PolicyError::Unknown(command.to_string()))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| PolicyError::Spawn { command: command.to_string(), source })?;
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(SubprocessPolicy {
            name: format!("cmd:{command}"),
            stdin: child.stdin.take(),
            child,
            replies: rx,
            timeout: REPLY_TIMEOUT,
            timeouts: 0,
        })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn exchange(&mut self, obs: &TeamObservation) -> Option<TeamActions> {
        let stdin = self.stdin.as_mut()?;
        let mut line = serde_json::to_string(obs).ok()?;
        line.push('\n');
        stdin.write_all(line.as_bytes()).ok()?;
        stdin.flush().ok()?;
        let deadline = Instant::now() + self.timeout;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            match self.replies.recv_timeout(left) {
                Ok(text) => match serde_json::from_str::<Reply>(&text) {
                    Ok(r) if r.tick == obs.tick => return Some(r.actions),
                    _ => continue,
                },
                Err(RecvTimeoutError::Timeout) | Err(RecvTimeoutError::Disconnected) => return None,
            }
        }
    }
}

impl Policy for SubprocessPolicy {
    fn name(&self) -> &str {
        &self.name
    }

    fn act(&mut self, obs: &TeamObservation) -> TeamActions {
        match self.exchange(obs) {
            Some(mut actions) => {
                actions.resize(TEAM_SIZE, AgentAction::stay());
                actions
            }
            None => {
                self.timeouts += 1;
                vec![AgentAction::stay(); TEAM_SIZE]
            }
        }
    }

    fn deterministic(&self) -> bool {
        false
    }
}

impl Drop for SubprocessPolicy {
    fn drop(&mut self) {
        self.stdin.take();
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Answer observations from `input` with `policy` until end of input.
pub fn serve(policy: &mut dyn Policy, input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obs: TeamObservation =
            serde_json::from_str(&line).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        let reply = Reply { tick: obs.tick, actions: policy.act(&obs) };
        serde_json::to_writer(&mut output, &reply)?;
        output.write_all(b"\n")?;
        output.flush()?;
    }
    Ok(())
}
