use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub id: String,
    pub verdict: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// Summary of one command run. `status` is ok iff every verdict is positive.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub items: Vec<Item>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            status: Status::Ok,
            items: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        verdict: bool,
        detail: impl Into<String>,
        started: Option<Instant>,
    ) {
        if !verdict && self.status == Status::Ok {
            self.status = Status::Failed;
        }
        self.items.push(Item {
            id: id.into(),
            verdict,
            detail: detail.into(),
            timing_ms: started.map(|t| t.elapsed().as_secs_f64() * 1e3),
        });
    }

    pub fn text_summary(&self) -> String {
        let status = match self.status {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::BudgetExceeded => "budget-exceeded",
        };
        let passed = self.items.iter().filter(|i| i.verdict).count();
        let mut out = format!(
            "{}: {status} ({passed}/{} passed)\n",
            self.command,
            self.items.len()
        );
        for i in &self.items {
            if !i.verdict || i.timing_ms.is_some() {
                out.push_str(&format!("  {}: {}", i.id, i.detail));
                if let Some(ms) = i.timing_ms {
                    out.push_str(&format!(" [{ms:.1} ms]"));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Writes the primary payload to `--out` or stdout.
pub fn emit(out: &Option<PathBuf>, payload: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, payload),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
            stdout.flush()
        }
    }
}
