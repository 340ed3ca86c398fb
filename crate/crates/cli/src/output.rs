use std::io::Write;

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Partial,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Partial => "partial",
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const MUTATION: i32 = 3;
    pub const COMPLEXITY: i32 = 4;
}

/// What every subcommand produces.
#[derive(Debug, Clone)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    pub text: String,
    pub code: i32,
}

impl CommandResult {
    pub fn ok(payload: Value, text: impl Into<String>) -> Self {
        CommandResult { status: Status::Ok, payload, diagnostics: Vec::new(), text: text.into(), code: exit::OK }
    }

    pub fn fail(code: i32, payload: Value, text: impl Into<String>) -> Self {
        CommandResult { status: Status::Fail, payload, diagnostics: Vec::new(), text: text.into(), code }
    }

    pub fn error(code: i32, msg: impl Into<String>) -> Self {
        let msg = msg.into();
        CommandResult { status: Status::Fail, payload: Value::Null, diagnostics: vec![msg.clone()], text: msg, code }
    }

    pub fn note(mut self, d: impl Into<String>) -> Self {
        self.diagnostics.push(d.into());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        })
    }
}

pub fn print(result: &CommandResult, as_json: bool) {
    let mut out = std::io::stdout().lock();
    if as_json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&result.to_json()).expect("json"));
        return;
    }
    if result.payload == Value::Null {
        for d in &result.diagnostics {
            eprintln!("error: {d}");
        }
        return;
    }
    let _ = writeln!(out, "{}", result.text);
    for d in &result.diagnostics {
        eprintln!("{d}");
    }
}
