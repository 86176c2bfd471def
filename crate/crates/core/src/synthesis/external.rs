//! Adapter for external synthesis tools.
//!
//! The tool is started as `<command…> <spec file>`, where the command
//! string is split at whitespace and the file holds the specification in
//! the text format of [`crate::ltl::spec_file`]. It must print a result in
//! the [`json`](super::json) format on stdout and exit with status 0.
//! Returned machines are model checked before they are accepted.

use std::io::Write;
use std::process::Command;

use super::json::from_json;
use super::{verify, verify_counterstrategy, SynthesisError, SynthesisResult};
use crate::ltl::spec_file::write_spec;
use crate::ltl::SpecContext;

pub fn synthesize_external(ctx: &SpecContext, command: &str) -> Result<SynthesisResult, SynthesisError> {
    let mut words = command.split_whitespace();
    let program = words.next().ok_or_else(|| SynthesisError::Process("empty tool command".into()))?;
    let mut file = tempfile::Builder::new()
        .prefix("modsynth-")
        .suffix(".spec")
        .tempfile()
        .map_err(|e| SynthesisError::Process(format!("cannot create spec file: {e}")))?;
    file.write_all(write_spec(ctx).as_bytes())
        .and_then(|_| file.flush())
        .map_err(|e| SynthesisError::Process(format!("cannot write spec file: {e}")))?;

    let output = Command::new(program)
        .args(words)
        .arg(file.path())
        .output()
        .map_err(|e| SynthesisError::Process(format!("cannot run `{program}`: {e}")))?;
    if !output.status.success() {
        let stderr = String::from_utf8_lossy(&output.stderr);
        return Err(SynthesisError::Process(format!("`{program}` exited with {}: {}", output.status, stderr.trim())));
    }
    let stdout = String::from_utf8(output.stdout).map_err(|_| SynthesisError::Format("output is not UTF-8".into()))?;
    let result = from_json(&stdout)?;

    let inputs: Vec<String> = ctx.inputs.iter().cloned().collect();
    let outputs: Vec<String> = ctx.outputs.iter().cloned().collect();
    match result {
        SynthesisResult::Realizable(s) => {
            let s = s.over(&inputs, &outputs)?;
            if let Some(w) = verify(&s, &ctx.formula)? {
                return Err(SynthesisError::Verification(format!("strategy admits the violating word {w}")));
            }
            Ok(SynthesisResult::Realizable(s))
        }
        SynthesisResult::Unrealizable(c) => {
            let c = c.over(&inputs, &outputs)?;
            if let Some(w) = verify_counterstrategy(&c, &ctx.formula)? {
                return Err(SynthesisError::Verification(format!("counterstrategy admits the satisfying word {w}")));
            }
            Ok(SynthesisResult::Unrealizable(c))
        }
        unknown => Ok(unknown),
    }
}
