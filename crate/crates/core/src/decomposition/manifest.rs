//! Line-oriented description of a decomposition result.
//!
//! ```text
//! modsynth-manifest 1
//! mode ltl
//! inputs i
//! outputs o1 o2
//! unused-outputs
//! part 0 part_0.spec inputs=i outputs=o1 origin=0
//! part 1 part_1.spec inputs=i outputs=o2 origin=1
//! ```
//!
//! Lists inside `part` lines are comma separated and may be empty.

use std::collections::BTreeSet;
use std::fmt::Write;

const HEADER: &str = "modsynth-manifest 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestPart {
    pub file: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub origin: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub mode: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    /// Declared outputs the specification never mentions; no part owns them.
    pub unused_outputs: BTreeSet<String>,
    pub parts: Vec<ManifestPart>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("manifest line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

impl ManifestPart {
    /// Entry for subspecification number `index`, stored as
    /// `part_<index>.<extension>`.
    pub fn for_subspec(index: usize, sub: &super::Subspecification, extension: &str) -> ManifestPart {
        ManifestPart {
            file: format!("part_{index}.{extension}"),
            inputs: sub.ctx.inputs.clone(),
            outputs: sub.ctx.outputs.clone(),
            origin: sub.origin.clone(),
        }
    }
}

impl Manifest {
    /// A manifest over the declared variables; declared outputs owned by no
    /// part are listed as unused.
    pub fn new(mode: impl Into<String>, inputs: BTreeSet<String>, outputs: BTreeSet<String>, parts: Vec<ManifestPart>) -> Manifest {
        let owned: BTreeSet<&String> = parts.iter().flat_map(|p| &p.outputs).collect();
        let unused_outputs = outputs.iter().filter(|o| !owned.contains(o)).cloned().collect();
        Manifest { mode: mode.into(), inputs, outputs, unused_outputs, parts }
    }

    pub fn render(&self) -> String {
        let words = |s: &BTreeSet<String>| s.iter().map(|x| format!(" {x}")).collect::<String>();
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "mode {}", self.mode).unwrap();
        writeln!(out, "inputs{}", words(&self.inputs)).unwrap();
        writeln!(out, "outputs{}", words(&self.outputs)).unwrap();
        writeln!(out, "unused-outputs{}", words(&self.unused_outputs)).unwrap();
        for (k, p) in self.parts.iter().enumerate() {
            let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(",");
            let origin = p.origin.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",");
            writeln!(
                out,
                "part {k} {} inputs={} outputs={} origin={origin}",
                p.file,
                join(&p.inputs),
                join(&p.outputs)
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Manifest, ManifestError> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim_end())).filter(|(_, l)| !l.is_empty());
        let err = |line: usize, message: &str| ManifestError { line, message: message.to_string() };
        match lines.next() {
            Some((_, l)) if l == HEADER => {}
            Some((n, _)) => return Err(err(n, "missing manifest header")),
            None => return Err(err(0, "empty manifest")),
        }
        let mut keyed = |key: &str| -> Result<(usize, Vec<String>), ManifestError> {
            let (n, l) = lines.next().ok_or_else(|| err(0, &format!("missing `{key}` line")))?;
            let mut words = l.split_whitespace();
            if words.next() != Some(key) {
                return Err(err(n, &format!("expected `{key}`")));
            }
            Ok((n, words.map(String::from).collect()))
        };
        let (n, mode) = keyed("mode")?;
        let [mode] = <[String; 1]>::try_from(mode).map_err(|_| err(n, "expected a single mode"))?;
        let inputs = keyed("inputs")?.1.into_iter().collect();
        let outputs = keyed("outputs")?.1.into_iter().collect();
        let unused_outputs = keyed("unused-outputs")?.1.into_iter().collect();
        let mut parts = Vec::new();
        while let Ok((n, words)) = keyed("part") {
            let [index, file, ins, outs, origin] =
                <[String; 5]>::try_from(words).map_err(|_| err(n, "malformed part line"))?;
            if index.parse::<usize>().ok() != Some(parts.len()) {
                return Err(err(n, "parts must be numbered consecutively from 0"));
            }
            let list = |field: &str, key: &str| -> Result<Vec<String>, ManifestError> {
                let rest = field.strip_prefix(key).ok_or_else(|| err(n, &format!("expected `{key}`")))?;
                Ok(rest.split(',').filter(|s| !s.is_empty()).map(String::from).collect())
            };
            let origin = list(&origin, "origin=")?
                .iter()
                .map(|o| o.parse::<usize>().map_err(|_| err(n, "origin entries must be numbers")))
                .collect::<Result<Vec<_>, _>>()?;
            parts.push(ManifestPart {
                file,
                inputs: list(&ins, "inputs=")?.into_iter().collect(),
                outputs: list(&outs, "outputs=")?.into_iter().collect(),
                origin,
            });
        }
        Ok(Manifest { mode, inputs, outputs, unused_outputs, parts })
    }
}
