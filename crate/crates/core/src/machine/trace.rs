use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ImplFree,
    Nnfc,
    Cnfc,
    Distr,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::ImplFree => "impl_free",
            Stage::Nnfc => "nnfc",
            Stage::Cnfc => "cnfc",
            Stage::Distr => "distr",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Descend,
    Apply,
}

/// One stack frame as text: constructor name and printed payloads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDescriptor {
    pub frame: String,
    pub payload: Vec<String>,
}

impl FrameDescriptor {
    pub(crate) fn new(frame: &str, payload: Vec<String>) -> FrameDescriptor {
        FrameDescriptor {
            frame: frame.to_owned(),
            payload,
        }
    }
}

/// A rendered machine state. `stack` lists frames top first and ends with
/// the identity frame of the running stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub stage: Stage,
    pub mode: Mode,
    pub focus: String,
    pub stack: Vec<FrameDescriptor>,
}

/// One line of a trace.
///
/// In `distr` descend states the focus is the pair of operands printed as
/// their disjunction `phi1 | phi2`, which reparses to exactly that pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: u64,
    pub stage: Stage,
    pub mode: Mode,
    pub focus: String,
    pub stack: Vec<FrameDescriptor>,
    pub depth: usize,
}

pub trait TraceSink {
    fn record(&mut self, event: TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// Writes one JSON object per event, LF-terminated. The first write error
/// is kept and reported by [`JsonLines::finish`]; later events are dropped.
pub struct JsonLines<W: Write> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write> JsonLines<W> {
    pub fn new(out: W) -> JsonLines<W> {
        JsonLines { out, error: None }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> TraceSink for JsonLines<W> {
    fn record(&mut self, event: TraceEvent) {
        if self.error.is_some() {
            return;
        }
        let written = serde_json::to_writer(&mut self.out, &event)
            .map_err(io::Error::from)
            .and_then(|()| self.out.write_all(b"\n"));
        if let Err(e) = written {
            self.error = Some(e);
        }
    }
}

pub fn read_json_lines(input: impl BufRead) -> io::Result<Vec<TraceEvent>> {
    let mut events = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        events.push(serde_json::from_str(&line).map_err(io::Error::from)?);
    }
    Ok(events)
}
