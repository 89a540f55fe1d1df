//! Line-oriented phrase files.
//!
//! ```text
//! # comment
//! alphabet a b c        # optional, default `1 -1`
//! inv a b               # τ pairs; `inv c c` for a fixed point
//! inv c c
//! letter A a
//! letter B b
//! phrase AB|BA          # `_` is the empty word, `EMPTY0` the length-0 phrase
//! ```

use thiserror::Error;

use crate::phrase::{Alphabet, Nanophrase, PhraseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Phrase(#[from] PhraseError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

/// Parses a phrase file into a validated nanophrase.
pub fn parse_phrase(text: &str) -> Result<Nanophrase, ParseError> {
    let mut symbols: Option<Vec<String>> = None;
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut letters: Vec<(String, String)> = Vec::new();
    let mut phrase: Option<Option<Vec<Vec<String>>>> = None;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + keyword.len() + 1;
        let args: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "alphabet" => {
                if symbols.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate `alphabet` line"));
                }
                symbols = Some(args.iter().map(|s| s.to_string()).collect());
            }
            "inv" => {
                if args.len() != 2 {
                    return Err(syntax(line_no, rest_col, "`inv` takes exactly two symbols"));
                }
                pairs.push((args[0].to_string(), args[1].to_string()));
            }
            "letter" => {
                if args.len() != 2 {
                    return Err(syntax(line_no, rest_col, "`letter` takes a name and a symbol"));
                }
                let name = args[0];
                if name.len() != 1 || !name.chars().all(|c| c.is_ascii_uppercase()) {
                    let col = indent + keyword.len() + rest.find(name).unwrap_or(0) + 1;
                    return Err(syntax(line_no, col, format!("letter name `{name}` must be one uppercase ASCII character")));
                }
                letters.push((name.to_string(), args[1].to_string()));
            }
            "phrase" => {
                if phrase.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate `phrase` line"));
                }
                phrase = Some(parse_components(rest, line_no, indent + keyword.len())?);
            }
            other => {
                return Err(syntax(line_no, indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }

    let phrase = phrase.ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing `phrase` line"))?;
    let alphabet = match symbols {
        None if pairs.is_empty() => Alphabet::pseudolink(),
        None => Alphabet::new(&["1".to_string(), "-1".to_string()], &pairs).map_err(PhraseError::from)?,
        Some(symbols) => Alphabet::new(&symbols, &pairs).map_err(PhraseError::from)?,
    };
    match phrase {
        None => {
            if let Some((name, _)) = letters.first() {
                return Err(PhraseError::Invalid(vec![crate::phrase::Violation::OccurrenceCount {
                    letter: name.clone(),
                    count: 0,
                }])
                .into());
            }
            Ok(Nanophrase::length_zero(alphabet))
        }
        Some(words) => Ok(Nanophrase::from_names(alphabet, &letters, &words)?),
    }
}

/// `None` stands for the length-0 phrase.
fn parse_components(rest: &str, line: usize, offset: usize) -> Result<Option<Vec<Vec<String>>>, ParseError> {
    if rest.trim() == "EMPTY0" {
        return Ok(None);
    }
    let mut words = vec![Vec::new()];
    let mut explicit_empty = vec![false];
    for (i, c) in rest.char_indices() {
        let col = offset + i + 1;
        match c {
            c if c.is_whitespace() => {}
            '|' => {
                words.push(Vec::new());
                explicit_empty.push(false);
            }
            '_' => {
                let last = words.len() - 1;
                if !words[last].is_empty() || explicit_empty[last] {
                    return Err(syntax(line, col, "`_` must stand alone as a component"));
                }
                explicit_empty[last] = true;
            }
            c if c.is_ascii_uppercase() => {
                let last = words.len() - 1;
                if explicit_empty[last] {
                    return Err(syntax(line, col, "`_` must stand alone as a component"));
                }
                words[last].push(c.to_string());
            }
            c => return Err(syntax(line, col, format!("unexpected character `{c}`"))),
        }
    }
    for (w, e) in words.iter().zip(&explicit_empty) {
        if w.is_empty() && !e {
            return Err(syntax(line, offset + 1, "empty component must be written `_`"));
        }
    }
    Ok(Some(words))
}
