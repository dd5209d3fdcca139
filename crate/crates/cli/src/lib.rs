//! Command-line driver: instance parsing, per-command payloads and the
//! report envelope.

pub mod commands;
pub mod instance;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use toric_bridge::Error;

pub const DEFAULT_PRIME: u64 = 10007;
pub const DEFAULT_SAMPLES: usize = 100;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_STRICT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn exit_code(err: &Error) -> u8 {
    if err.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    }
}

/// The report envelope. Object keys serialize in sorted order.
pub fn envelope(command: Value, input_digest: Option<String>, result: Value, warnings: &[String]) -> Value {
    json!({
        "command": command,
        "input_digest": input_digest,
        "result": result,
        "warnings": warnings,
    })
}

pub fn render(v: &Value, pretty: bool) -> String {
    let mut s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }
        .expect("JSON values always serialize");
    s.push('\n');
    s
}
