//! A subset of the Hanoi Omega-Automata format: state-based Büchi
//! acceptance, explicit edge labels, plus a `controllable-AP:` header
//! listing the indices of output propositions.
//!
//! ```text
//! HOA: v1
//! States: 2
//! Start: 0
//! AP: 2 "i" "o"
//! acc-name: Buchi
//! Acceptance: 1 Inf(0)
//! controllable-AP: 1
//! --BODY--
//! State: 0
//! [!1] 0
//! [1] 1
//! State: 1 {0}
//! [t] 1
//! --END--
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Cube, Label, Nba};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("HOA line {line}: {message}")]
pub struct HoaError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, HoaError> {
    Err(HoaError { line, message: message.into() })
}

/// Renders an automaton. Output is deterministic for equal automata.
pub fn write_hoa(a: &Nba) -> String {
    let mut out = String::new();
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {}", a.num_states()).unwrap();
    for q in a.initial() {
        writeln!(out, "Start: {q}").unwrap();
    }
    write!(out, "AP: {}", a.aps().len()).unwrap();
    for p in a.aps() {
        write!(out, " \"{p}\"").unwrap();
    }
    out.push('\n');
    writeln!(out, "acc-name: Buchi").unwrap();
    writeln!(out, "Acceptance: 1 Inf(0)").unwrap();
    let ctrl: Vec<String> = a
        .aps()
        .iter()
        .enumerate()
        .filter(|(_, p)| a.outputs().contains(*p))
        .map(|(k, _)| k.to_string())
        .collect();
    if !ctrl.is_empty() {
        writeln!(out, "controllable-AP: {}", ctrl.join(" ")).unwrap();
    }
    writeln!(out, "--BODY--").unwrap();
    for q in 0..a.num_states() {
        if a.is_accepting(q) {
            writeln!(out, "State: {q} {{0}}").unwrap();
        } else {
            writeln!(out, "State: {q}").unwrap();
        }
        for (d, l) in a.edges(q) {
            writeln!(out, "[{}] {d}", label_expr(l)).unwrap();
        }
    }
    writeln!(out, "--END--").unwrap();
    out
}

fn label_expr(l: &Label) -> String {
    if l.is_true() {
        return "t".into();
    }
    if l.is_false() {
        return "f".into();
    }
    let cubes: Vec<String> = l
        .cubes()
        .iter()
        .map(|c| {
            let lits: Vec<String> = (0..64)
                .filter(|i| c.support() >> i & 1 == 1)
                .map(|i| if c.neg >> i & 1 == 1 { format!("!{i}") } else { i.to_string() })
                .collect();
            lits.join("&")
        })
        .collect();
    if cubes.len() == 1 {
        cubes.into_iter().next().unwrap()
    } else {
        cubes.iter().map(|c| if c.contains('&') { format!("({c})") } else { c.clone() }).collect::<Vec<_>>().join(" | ")
    }
}

/// Parses the supported HOA subset.
pub fn parse_hoa(text: &str) -> Result<Nba, HoaError> {
    let mut states: Option<usize> = None;
    let mut starts = Vec::new();
    let mut aps: Option<Vec<String>> = None;
    let mut controllable: Vec<usize> = Vec::new();
    let mut seen_version = false;
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty());

    // header
    let mut body_line = 0;
    for (no, line) in lines.by_ref() {
        if line == "--BODY--" {
            body_line = no;
            break;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => return err(no, format!("expected a header item, found `{line}`")),
        };
        match key {
            "HOA" => {
                if value != "v1" {
                    return err(no, format!("unsupported version `{value}`"));
                }
                seen_version = true;
            }
            "States" => states = Some(value.parse().or_else(|_| err(no, "bad state count"))?),
            "Start" => {
                if value.contains('&') {
                    return err(no, "conjunctive start states are not supported");
                }
                starts.push(value.parse::<usize>().or_else(|_| err(no, "bad start state"))?);
            }
            "AP" => aps = Some(parse_ap_list(value, no)?),
            "acc-name" => {
                if value.split_whitespace().next() != Some("Buchi") {
                    return err(no, format!("only Buchi acceptance is supported, found `{value}`"));
                }
            }
            "Acceptance" => {
                let compact: String = value.chars().filter(|c| !c.is_whitespace()).collect();
                if compact != "1Inf(0)" {
                    return err(no, format!("only `1 Inf(0)` acceptance is supported, found `{value}`"));
                }
            }
            "controllable-AP" => {
                for tok in value.split_whitespace() {
                    controllable.push(tok.parse().or_else(|_| err(no, format!("bad proposition index `{tok}`")))?);
                }
            }
            "properties" | "name" | "tool" => {}
            other => return err(no, format!("unsupported header item `{other}`")),
        }
    }
    if body_line == 0 {
        return err(text.lines().count().max(1), "missing --BODY--");
    }
    if !seen_version {
        return err(1, "missing `HOA: v1`");
    }
    let aps = aps.ok_or(HoaError { line: 1, message: "missing AP header".into() })?;
    let mut outputs = BTreeSet::new();
    for k in controllable {
        let name = aps.get(k).ok_or(HoaError { line: 1, message: format!("controllable index {k} out of range") })?;
        outputs.insert(name.clone());
    }
    let mut a = Nba::new(aps.clone(), outputs).map_err(|e| HoaError { line: 1, message: e.to_string() })?;
    let n = states.ok_or(HoaError { line: 1, message: "missing States header".into() })?;
    for _ in 0..n {
        a.add_state();
    }
    for q in starts {
        if q >= n {
            return err(1, format!("start state {q} out of range"));
        }
        a.set_initial(q);
    }

    // body
    let mut current: Option<usize> = None;
    let mut ended = false;
    for (no, line) in lines {
        if ended {
            return err(no, "content after --END--");
        }
        if line == "--END--" {
            ended = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("State:") {
            let mut rest = rest.trim();
            let id_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let q: usize = rest[..id_end].parse().or_else(|_| err(no, "bad state id"))?;
            if q >= n {
                return err(no, format!("state {q} out of range"));
            }
            rest = rest[id_end..].trim();
            if rest.starts_with('"') {
                // optional state name
                let close = rest[1..].find('"').ok_or(HoaError { line: no, message: "unterminated name".into() })?;
                rest = rest[close + 2..].trim();
            }
            if !rest.is_empty() {
                let inner = rest
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or(HoaError { line: no, message: format!("bad acceptance marks `{rest}`") })?;
                for mark in inner.split_whitespace() {
                    if mark != "0" {
                        return err(no, format!("unknown acceptance set {mark}"));
                    }
                    a.set_accepting(q, true);
                }
            }
            current = Some(q);
            continue;
        }
        let q = current.ok_or(HoaError { line: no, message: "edge before any State:".into() })?;
        let rest = line.strip_prefix('[').ok_or(HoaError { line: no, message: "edges must carry a label".into() })?;
        let close = rest.find(']').ok_or(HoaError { line: no, message: "unterminated label".into() })?;
        let label = parse_label(&rest[..close], aps.len()).map_err(|m| HoaError { line: no, message: m })?;
        let target_text = rest[close + 1..].trim();
        if target_text.contains('{') {
            return err(no, "transition-based acceptance is not supported");
        }
        let d: usize = target_text.parse().or_else(|_| err(no, format!("bad target `{target_text}`")))?;
        if d >= n {
            return err(no, format!("target {d} out of range"));
        }
        a.add_edge(q, label, d);
    }
    if !ended {
        return err(text.lines().count(), "missing --END--");
    }
    Ok(a)
}

fn parse_ap_list(value: &str, line: usize) -> Result<Vec<String>, HoaError> {
    let (count, mut rest) = match value.split_once(char::is_whitespace) {
        Some((c, r)) => (c, r.trim()),
        None => (value, ""),
    };
    let count: usize = count.parse().or_else(|_| err(line, "bad AP count"))?;
    let mut names = Vec::new();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('"').ok_or(HoaError { line, message: "AP names must be quoted".into() })?;
        let close = inner.find('"').ok_or(HoaError { line, message: "unterminated AP name".into() })?;
        names.push(inner[..close].to_string());
        rest = inner[close + 1..].trim();
    }
    if names.len() != count {
        return err(line, format!("AP count {count} does not match {} names", names.len()));
    }
    Ok(names)
}

/// Label expressions: `t`, `f`, proposition indices, `!`, `&`, `|` and
/// parentheses.
fn parse_label(text: &str, aps: usize) -> Result<Label, String> {
    let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = LabelParser { tokens, pos: 0, aps };
    let l = p.disj()?;
    if p.pos != p.tokens.len() {
        return Err(format!("unexpected `{}` in label", p.tokens[p.pos]));
    }
    Ok(l)
}

struct LabelParser {
    tokens: Vec<char>,
    pos: usize,
    aps: usize,
}

impl LabelParser {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn disj(&mut self) -> Result<Label, String> {
        let mut l = self.conj()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            l = l.or(&self.conj()?);
        }
        Ok(l)
    }

    fn conj(&mut self) -> Result<Label, String> {
        let mut l = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            l = l.and(&self.unary()?);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Label, String> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Some('(') => {
                self.pos += 1;
                let l = self.disj()?;
                if self.peek() != Some(')') {
                    return Err("missing `)` in label".into());
                }
                self.pos += 1;
                Ok(l)
            }
            Some('t') => {
                self.pos += 1;
                Ok(Label::tt())
            }
            Some('f') => {
                self.pos += 1;
                Ok(Label::ff())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.tokens[start..self.pos].iter().collect();
                let k: usize = s.parse().map_err(|_| format!("bad proposition index `{s}`"))?;
                if k >= self.aps {
                    return Err(format!("proposition index {k} out of range"));
                }
                Ok(Label::from_cube(Cube { pos: 1 << k, neg: 0 }))
            }
            Some(c) => Err(format!("unexpected `{c}` in label")),
            None => Err("empty label".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "HOA: v1\nStates: 2\nStart: 0\nAP: 2 \"i\" \"o\"\nacc-name: Buchi\nAcceptance: 1 Inf(0)\ncontrollable-AP: 1\n--BODY--\nState: 0\n[!1] 0\n[1] 1\nState: 1 {0}\n[t] 1\n--END--\n";

    #[test]
    fn parse_and_write_round_trip() {
        let a = parse_hoa(SAMPLE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.outputs(), &BTreeSet::from(["o".to_string()]));
        assert!(a.is_accepting(1));
        assert_eq!(write_hoa(&a), SAMPLE);
        assert_eq!(parse_hoa(&write_hoa(&a)).unwrap(), a);
    }

    #[test]
    fn complex_labels() {
        let text = SAMPLE.replace("[!1] 0", "[(0 & !1) | !(0 | 1)] 0");
        let a = parse_hoa(&text).unwrap();
        let (_, l) = a.edges(0).next().unwrap();
        // admits letters {} and {i}, i.e. exactly !o
        assert_eq!(*l, Label::literal(1, false));
    }

    #[test]
    fn errors_have_lines() {
        assert_eq!(parse_hoa("HOA: v1\nStates: 1\n").unwrap_err().message, "missing --BODY--");
        let bad_acc = SAMPLE.replace("Acceptance: 1 Inf(0)", "Acceptance: 2 Inf(0)&Inf(1)");
        assert_eq!(parse_hoa(&bad_acc).unwrap_err().line, 6);
        let bad_target = SAMPLE.replace("[t] 1", "[t] 7");
        assert_eq!(parse_hoa(&bad_target).unwrap_err().line, 13);
        let bad_label = SAMPLE.replace("[t] 1", "[2] 1");
        assert!(parse_hoa(&bad_label).unwrap_err().message.contains("out of range"));
    }
}
