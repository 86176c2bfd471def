//! The plain-text specification format.
//!
//! ```text
//! # comment
//! INPUTS: i1, i2;
//! OUTPUTS: o1, o2;
//! ASSUME: G F i1;
//! GUARANTEE: G (i1 -> F o1);
//! CONJUNCT: G !(o1 && o2);
//! ```
//!
//! `FORMULA:` statements are conjoined with `CONJUNCT:` statements. As soon
//! as an `ASSUME:` or `GUARANTEE:` statement is present the file is read in
//! assume-guarantee form.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{parse_ltl_declared, AgStructure, ContextError, LtlFormula, ParseError, SpecContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    /// Byte positions inside `source` are relative to the trimmed statement body.
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Body of a specification file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecBody {
    Formula(LtlFormula),
    AssumeGuarantee(AgStructure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub body: SpecBody,
}

impl SpecFile {
    pub fn formula(&self) -> LtlFormula {
        match &self.body {
            SpecBody::Formula(f) => f.clone(),
            SpecBody::AssumeGuarantee(ag) => ag.to_formula(),
        }
    }

    pub fn context(&self) -> SpecContext {
        SpecContext { formula: self.formula(), inputs: self.inputs.clone(), outputs: self.outputs.clone() }
    }

    /// The assume-guarantee view of the body; formula bodies are split with
    /// [`AgStructure::from_formula`].
    pub fn ag_structure(&self) -> AgStructure {
        match &self.body {
            SpecBody::Formula(f) => AgStructure::from_formula(f),
            SpecBody::AssumeGuarantee(ag) => ag.clone(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecFileError> {
    let mut inputs: Option<BTreeSet<String>> = None;
    let mut outputs: Option<BTreeSet<String>> = None;
    // (keyword, body, line)
    let mut statements: Vec<(String, String, usize)> = Vec::new();

    let mut pending = String::new();
    let mut pending_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        for (k, chunk) in line.split(';').enumerate() {
            if k > 0 {
                // a `;` closed the pending statement
                let stmt = std::mem::take(&mut pending);
                if !stmt.trim().is_empty() {
                    statements.push(split_statement(&stmt, pending_line)?);
                } else {
                    return Err(SpecFileError::Syntax { line: line_no, message: "empty statement".into() });
                }
            }
            if pending.trim().is_empty() && !chunk.trim().is_empty() {
                pending_line = line_no;
            }
            pending.push_str(chunk);
            pending.push(' ');
        }
    }
    if !pending.trim().is_empty() {
        return Err(SpecFileError::Syntax { line: pending_line, message: "statement is missing its `;`".into() });
    }

    let mut assumptions = Vec::new();
    let mut guarantees = Vec::new();
    let mut conjuncts = Vec::new();
    let mut ag_form = false;
    let mut formulas = Vec::new();
    for (key, body, line) in statements {
        match key.as_str() {
            "INPUTS" | "OUTPUTS" => {
                let names = parse_names(&body, line)?;
                let slot = if key == "INPUTS" { &mut inputs } else { &mut outputs };
                if slot.is_some() {
                    return Err(SpecFileError::Syntax { line, message: format!("duplicate {key} declaration") });
                }
                *slot = Some(names);
            }
            "FORMULA" | "CONJUNCT" | "ASSUME" | "GUARANTEE" => formulas.push((key, body, line)),
            other => {
                return Err(SpecFileError::Syntax { line, message: format!("unknown statement `{other}`") });
            }
        }
    }
    let inputs = inputs.ok_or(SpecFileError::Syntax { line: 1, message: "missing INPUTS declaration".into() })?;
    let outputs = outputs.ok_or(SpecFileError::Syntax { line: 1, message: "missing OUTPUTS declaration".into() })?;
    if let Some(p) = inputs.intersection(&outputs).next() {
        return Err(ContextError::Overlap(p.clone()).into());
    }
    let declared: BTreeSet<String> = inputs.union(&outputs).cloned().collect();

    for (key, body, line) in formulas {
        let f = parse_ltl_declared(&body, &declared).map_err(|source| SpecFileError::Formula { line, source })?;
        match key.as_str() {
            "ASSUME" => {
                ag_form = true;
                assumptions.push(f);
            }
            "GUARANTEE" => {
                ag_form = true;
                guarantees.push(f);
            }
            _ => conjuncts.push(f),
        }
    }

    let body = if ag_form {
        SpecBody::AssumeGuarantee(AgStructure { assumptions, guarantees, side_conjuncts: conjuncts })
    } else {
        SpecBody::Formula(LtlFormula::and(conjuncts))
    };
    Ok(SpecFile { inputs, outputs, body })
}

fn split_statement(stmt: &str, line: usize) -> Result<(String, String, usize), SpecFileError> {
    let (key, body) = stmt
        .split_once(':')
        .ok_or_else(|| SpecFileError::Syntax { line, message: format!("expected `KEY: value`, found `{}`", stmt.trim()) })?;
    Ok((key.trim().to_string(), body.trim().to_string(), line))
}

fn parse_names(body: &str, line: usize) -> Result<BTreeSet<String>, SpecFileError> {
    let mut out = BTreeSet::new();
    for name in body.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(SpecFileError::Syntax { line, message: format!("invalid proposition name `{name}`") });
        }
        if !out.insert(name.to_string()) {
            return Err(SpecFileError::Syntax { line, message: format!("`{name}` declared twice") });
        }
    }
    Ok(out)
}

fn header(inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> String {
    let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
    format!("INPUTS: {};\nOUTPUTS: {};\n", join(inputs), join(outputs))
}

/// Renders a context as a `FORMULA:` specification.
pub fn write_spec(ctx: &SpecContext) -> String {
    let mut out = header(&ctx.inputs, &ctx.outputs);
    writeln!(out, "FORMULA: {};", ctx.formula).unwrap();
    out
}

/// Renders an assume-guarantee specification.
pub fn write_ag_spec(inputs: &BTreeSet<String>, outputs: &BTreeSet<String>, ag: &AgStructure) -> String {
    let mut out = header(inputs, outputs);
    for a in &ag.assumptions {
        writeln!(out, "ASSUME: {a};").unwrap();
    }
    for g in &ag.guarantees {
        writeln!(out, "GUARANTEE: {g};").unwrap();
    }
    for c in &ag.side_conjuncts {
        writeln!(out, "CONJUNCT: {c};").unwrap();
    }
    out
}
