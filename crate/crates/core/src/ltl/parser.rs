use std::collections::BTreeSet;

use super::LtlFormula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("undeclared proposition `{name}` at byte {pos}")]
    Undeclared { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::End => "end of input".to_string(),
        other => format!("{other:?}").to_lowercase(),
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "true" | "TRUE" | "True" => Tok::True,
        "false" | "FALSE" | "False" => Tok::False,
        "X" | "next" => Tok::Next,
        "F" | "eventually" => Tok::Eventually,
        "G" | "always" | "globally" => Tok::Globally,
        "U" | "until" => Tok::Until,
        "R" | "release" | "releases" => Tok::Release,
        "and" => Tok::And,
        "or" => Tok::Or,
        "not" => Tok::Not,
        "implies" => Tok::Implies,
        "iff" => Tok::Iff,
        _ => return None,
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_alphanumeric() || c == b'_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..len];
            (keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string())), len)
        } else if rest.starts_with("<->") || rest.starts_with("<=>") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") || rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("&&") || rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("||") || rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'!' | b'~' => (Tok::Not, 1),
                b'&' => (Tok::And, 1),
                b'|' => (Tok::Or, 1),
                _ => {
                    let ch = rest.chars().next().unwrap();
                    return Err(ParseError::Syntax {
                        pos: start,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    declared: Option<&'a BTreeSet<String>>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn implication(&mut self) -> Result<LtlFormula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Implies => {
                self.bump();
                Ok(LtlFormula::implies(lhs, self.implication()?))
            }
            Tok::Iff => {
                self.bump();
                Ok(LtlFormula::iff(lhs, self.implication()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<LtlFormula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(LtlFormula::Or(parts).normalize_top())
    }

    fn conjunction(&mut self) -> Result<LtlFormula, ParseError> {
        let mut parts = vec![self.binary_temporal()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.binary_temporal()?);
        }
        Ok(LtlFormula::And(parts).normalize_top())
    }

    fn binary_temporal(&mut self) -> Result<LtlFormula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                Ok(LtlFormula::until(lhs, self.binary_temporal()?))
            }
            Tok::Release => {
                self.bump();
                Ok(LtlFormula::release(lhs, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<LtlFormula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(LtlFormula::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(LtlFormula::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(LtlFormula::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.bump();
                Ok(LtlFormula::globally(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<LtlFormula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::True => Ok(LtlFormula::True),
            Tok::False => Ok(LtlFormula::False),
            Tok::Ident(name) => {
                if let Some(declared) = self.declared {
                    if !declared.contains(&name) {
                        return Err(ParseError::Undeclared { pos, name });
                    }
                }
                Ok(LtlFormula::Ap(name))
            }
            Tok::LParen => {
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return self.error(format!("expected `)`, found {}", describe(self.peek())));
                }
                self.bump();
                Ok(inner)
            }
            other => {
                self.at -= usize::from(other != Tok::End);
                self.error(format!("expected a formula, found {}", describe(&other)))
            }
        }
    }
}

impl LtlFormula {
    /// Flattens one level of `And`/`Or` nesting and collapses singletons.
    fn normalize_top(self) -> LtlFormula {
        match self {
            LtlFormula::And(parts) => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p {
                        LtlFormula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                LtlFormula::and(flat)
            }
            LtlFormula::Or(parts) => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p {
                        LtlFormula::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                LtlFormula::or(flat)
            }
            other => other,
        }
    }
}

fn parse_with(text: &str, declared: Option<&BTreeSet<String>>) -> Result<LtlFormula, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, declared };
    let f = parser.implication()?;
    if *parser.peek() != Tok::End {
        return parser.error(format!("unexpected {}", describe(parser.peek())));
    }
    Ok(f)
}

/// Parses an LTL formula.
///
/// Precedence from loosest to tightest: `->`/`<->` (right-associative),
/// `||`, `&&`, `U`/`R` (right-associative), unary `!`, `X`, `F`, `G`.
/// Word forms (`and`, `or`, `not`, `implies`, `iff`, `next`, `eventually`,
/// `always`, `until`, `release`) are accepted as well.
pub fn parse_ltl(text: &str) -> Result<LtlFormula, ParseError> {
    parse_with(text, None)
}

/// Like [`parse_ltl`] but rejects propositions outside `declared`.
pub fn parse_ltl_declared(text: &str, declared: &BTreeSet<String>) -> Result<LtlFormula, ParseError> {
    parse_with(text, Some(declared))
}
