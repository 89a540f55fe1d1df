//! Alphabets with involution, α-alphabets and nanophrases.
//!
//! A nanophrase is a sequence of words over a set of letters, every letter
//! occurring exactly twice in the concatenation of all words (the Gauss
//! condition). Each letter carries a projection into an alphabet `α` that is
//! equipped with an involution `τ`. Pseudolinks are nanophrases over
//! `α₁ = {1, -1}` with `τ` swapping the two symbols.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Index of a symbol inside its [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub usize);

/// Index of a letter inside a [`Nanophrase`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub usize);

/// One of the two occurrences of a letter, numbered 1 or 2 in reading order
/// of the whole phrase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub letter: LetterId,
    pub index: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("involution not involutive at `{0}`")]
    NotInvolutive(String),
    #[error("involution undefined at `{0}`")]
    Undefined(String),
}

/// A finite ordered set of symbols with an involution `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
    tau: Vec<SymbolId>,
}

impl Alphabet {
    /// Builds an alphabet from its symbols and the `τ` pairs. A pair `(a, a)`
    /// declares a fixed point; every symbol must appear in exactly one pair.
    pub fn new<S: AsRef<str>>(symbols: &[S], pairs: &[(S, S)]) -> Result<Self, AlphabetError> {
        let mut names: Vec<String> = Vec::with_capacity(symbols.len());
        for s in symbols {
            let s = s.as_ref();
            if names.iter().any(|n| n == s) {
                return Err(AlphabetError::DuplicateSymbol(s.to_string()));
            }
            names.push(s.to_string());
        }
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| AlphabetError::UnknownSymbol(s.to_string()))
        };
        let mut tau: Vec<Option<usize>> = vec![None; names.len()];
        for (a, b) in pairs {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            for (x, y) in [(a, b), (b, a)] {
                match tau[x] {
                    Some(prev) if prev != y => {
                        return Err(AlphabetError::NotInvolutive(names[x].clone()))
                    }
                    _ => tau[x] = Some(y),
                }
            }
        }
        let tau = tau
            .iter()
            .enumerate()
            .map(|(i, t)| t.map(SymbolId).ok_or_else(|| AlphabetError::Undefined(names[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { symbols: names, tau })
    }

    /// `α₁ = {1, -1}` with `τ` swapping the two symbols.
    pub fn pseudolink() -> Self {
        Self::new(&["1", "-1"], &[("1", "-1")]).expect("static alphabet")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len()).map(SymbolId)
    }

    pub fn name(&self, s: SymbolId) -> &str {
        &self.symbols[s.0]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|n| n == name).map(SymbolId)
    }

    pub fn tau(&self, s: SymbolId) -> SymbolId {
        self.tau[s.0]
    }

    /// True for the pseudolink alphabet `{1, -1}` (in either order).
    pub fn is_pseudolink(&self) -> bool {
        match (self.lookup("1"), self.lookup("-1")) {
            (Some(p), Some(m)) => self.len() == 2 && self.tau(p) == m,
            _ => false,
        }
    }

    /// The `±1` value of a symbol of the pseudolink alphabet.
    pub fn sign_of(&self, s: SymbolId) -> Option<i8> {
        match self.name(s) {
            "1" => Some(1),
            "-1" => Some(-1),
            _ => None,
        }
    }
}

/// A letter together with its projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphaLetter {
    pub name: String,
    pub projection: SymbolId,
}

/// A violated nanophrase invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{letter} occurs {count} time(s)")]
    OccurrenceCount { letter: String, count: usize },
    #[error("undeclared letter `{0}`")]
    Undeclared(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("projection `{symbol}` of {letter} not in alphabet")]
    ProjectionNotInAlphabet { letter: String, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhraseError {
    #[error("invalid nanophrase: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("not a pseudolink: projections must lie in {{1, -1}}")]
    NotPseudolink,
    #[error("{0}")]
    Alphabet(#[from] AlphabetError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A nanophrase: an α-alphabet and a Gauss phrase in its letters.
///
/// `words` is empty for the nanophrase of length 0, which is a different
/// value from the length-1 phrase with one empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nanophrase {
    alphabet: Alphabet,
    letters: Vec<AlphaLetter>,
    words: Vec<Vec<LetterId>>,
}

impl Nanophrase {
    /// Builds and validates a phrase from letter names.
    pub fn from_names<S: AsRef<str>>(
        alphabet: Alphabet,
        letters: &[(S, S)],
        words: &[Vec<S>],
    ) -> Result<Self, PhraseError> {
        let mut violations = Vec::new();
        let mut declared: Vec<AlphaLetter> = Vec::new();
        for (name, sym) in letters {
            let (name, sym) = (name.as_ref(), sym.as_ref());
            if declared.iter().any(|l| l.name == name) {
                violations.push(Violation::DuplicateLetter(name.to_string()));
                continue;
            }
            match alphabet.lookup(sym) {
                Some(projection) => declared.push(AlphaLetter { name: name.to_string(), projection }),
                None => violations.push(Violation::ProjectionNotInAlphabet {
                    letter: name.to_string(),
                    symbol: sym.to_string(),
                }),
            }
        }
        let mut ids = Vec::with_capacity(words.len());
        for w in words {
            let mut word = Vec::with_capacity(w.len());
            for name in w {
                let name = name.as_ref();
                match declared.iter().position(|l| l.name == name) {
                    Some(i) => word.push(LetterId(i)),
                    None => {
                        let v = Violation::Undeclared(name.to_string());
                        if !violations.contains(&v) {
                            violations.push(v);
                        }
                    }
                }
            }
            ids.push(word);
        }
        if !violations.is_empty() {
            return Err(PhraseError::Invalid(violations));
        }
        Self::new(alphabet, declared, ids)
    }

    /// Builds a phrase from already resolved parts, checking the Gauss condition.
    pub fn new(
        alphabet: Alphabet,
        letters: Vec<AlphaLetter>,
        words: Vec<Vec<LetterId>>,
    ) -> Result<Self, PhraseError> {
        let p = Self { alphabet, letters, words };
        p.validate().map_err(PhraseError::Invalid)?;
        Ok(p)
    }

    /// Checks every nanophrase invariant, listing each violation.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let mut counts = vec![0usize; self.letters.len()];
        for w in &self.words {
            for &l in w {
                match counts.get_mut(l.0) {
                    Some(c) => *c += 1,
                    None => violations.push(Violation::Undeclared(format!("#{}", l.0))),
                }
            }
        }
        for (i, l) in self.letters.iter().enumerate() {
            if l.projection.0 >= self.alphabet.len() {
                violations.push(Violation::ProjectionNotInAlphabet {
                    letter: l.name.clone(),
                    symbol: format!("#{}", l.projection.0),
                });
            }
            if self.letters[..i].iter().any(|m| m.name == l.name) {
                violations.push(Violation::DuplicateLetter(l.name.clone()));
            }
            if counts[i] != 2 {
                violations.push(Violation::OccurrenceCount { letter: l.name.clone(), count: counts[i] });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// The unique nanophrase of length 0.
    pub fn length_zero(alphabet: Alphabet) -> Self {
        Self { alphabet, letters: Vec::new(), words: Vec::new() }
    }

    /// `∅|⋯|∅` with `k` empty words.
    pub fn empty_words(alphabet: Alphabet, k: usize) -> Self {
        Self { alphabet, letters: Vec::new(), words: vec![Vec::new(); k] }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[AlphaLetter] {
        &self.letters
    }

    pub fn letter(&self, l: LetterId) -> &AlphaLetter {
        &self.letters[l.0]
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_by_name(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l.name == name).map(LetterId)
    }

    pub fn words(&self) -> &[Vec<LetterId>] {
        &self.words
    }

    /// Number of components `k`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn projection(&self, l: LetterId) -> SymbolId {
        self.letters[l.0].projection
    }

    pub fn is_pseudolink(&self) -> bool {
        self.alphabet.is_pseudolink()
    }

    /// The `±1` projection of every letter of a pseudolink.
    pub fn signs(&self) -> Result<Vec<i8>, PhraseError> {
        if !self.is_pseudolink() {
            return Err(PhraseError::NotPseudolink);
        }
        Ok(self
            .letters
            .iter()
            .map(|l| self.alphabet.sign_of(l.projection).expect("pseudolink symbol"))
            .collect())
    }

    /// Sum of the projections of a pseudolink, each letter counted once.
    pub fn writhe(&self) -> Result<i32, PhraseError> {
        Ok(self.signs()?.iter().map(|&s| s as i32).sum())
    }

    /// Letters in order of their first occurrence in the phrase.
    pub fn first_occurrence_order(&self) -> Vec<LetterId> {
        let mut seen = vec![false; self.letters.len()];
        let mut order = Vec::with_capacity(self.letters.len());
        for &l in self.words.iter().flatten() {
            if !std::mem::replace(&mut seen[l.0], true) {
                order.push(l);
            }
        }
        order
    }

    /// Every position of the phrase paired with its occurrence identity.
    pub fn occurrences(&self) -> Vec<Vec<Occurrence>> {
        let mut seen = vec![0u8; self.letters.len()];
        self.words
            .iter()
            .map(|w| {
                w.iter()
                    .map(|&l| {
                        seen[l.0] += 1;
                        Occurrence { letter: l, index: seen[l.0] }
                    })
                    .collect()
            })
            .collect()
    }

    /// Replaces the projection of every letter occurring exactly once in `x`
    /// by its `τ` image. Letters occurring twice keep their projection (the
    /// shift involution is the identity here).
    pub fn flip_projections(&self, x: &[LetterId]) -> Self {
        let mut counts = vec![0usize; self.letters.len()];
        for &l in x {
            counts[l.0] += 1;
        }
        let mut out = self.clone();
        for (l, c) in out.letters.iter_mut().zip(counts) {
            if c == 1 {
                l.projection = self.alphabet.tau(l.projection);
            }
        }
        out
    }

    /// Renames letters to `A, B, C, …` in first-occurrence order. Two phrases
    /// over the same alphabet are isomorphic iff their canonical forms are
    /// equal.
    pub fn canonical_form(&self) -> Self {
        let order = self.first_occurrence_order();
        let mut remap = vec![LetterId(usize::MAX); self.letters.len()];
        let letters = order
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                remap[old.0] = LetterId(new);
                AlphaLetter { name: letter_name(new), projection: self.letters[old.0].projection }
            })
            .collect();
        let words = self.words.iter().map(|w| w.iter().map(|l| remap[l.0]).collect()).collect();
        Self { alphabet: self.alphabet.clone(), letters, words }
    }

    /// Same phrase with a different projection assignment; used by rewrites.
    pub(crate) fn with_parts(&self, letters: Vec<AlphaLetter>, words: Vec<Vec<LetterId>>) -> Self {
        Self { alphabet: self.alphabet.clone(), letters, words }
    }

    /// Drops letters not occurring in `words` and renumbers the rest, keeping
    /// their relative order.
    pub(crate) fn compact(alphabet: Alphabet, letters: &[AlphaLetter], words: Vec<Vec<LetterId>>) -> Self {
        let mut used = vec![false; letters.len()];
        for &l in words.iter().flatten() {
            used[l.0] = true;
        }
        let mut remap = vec![usize::MAX; letters.len()];
        let mut kept = Vec::new();
        for (i, l) in letters.iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(l.clone());
            }
        }
        let words = words.into_iter().map(|w| w.into_iter().map(|l| LetterId(remap[l.0])).collect()).collect();
        Self { alphabet, letters: kept, words }
    }

    /// Word rendering with letter names and `_` for empty words.
    pub fn phrase_string(&self) -> String {
        if self.words.is_empty() {
            return "EMPTY0".to_string();
        }
        self.words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "_".to_string()
                } else {
                    w.iter().map(|l| self.letters[l.0].name.as_str()).collect::<String>()
                }
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Letter name → projection symbol, for diagnostics.
    pub fn projection_table(&self) -> BTreeMap<&str, &str> {
        self.letters
            .iter()
            .map(|l| (l.name.as_str(), self.alphabet.name(l.projection)))
            .collect()
    }
}

/// `A`…`Z`, then `L26`, `L27`, … beyond the single-character range.
pub fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("L{i}")
    }
}

/// The word read backwards.
pub fn opposite_word<T: Clone>(w: &[T]) -> Vec<T> {
    w.iter().rev().cloned().collect()
}

impl fmt::Display for Nanophrase {
    /// Renders the phrase in the line-oriented input format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_pseudolink() {
            write!(f, "alphabet")?;
            for s in self.alphabet.symbols() {
                write!(f, " {}", self.alphabet.name(s))?;
            }
            writeln!(f)?;
            for s in self.alphabet.symbols() {
                let t = self.alphabet.tau(s);
                if s <= t {
                    writeln!(f, "inv {} {}", self.alphabet.name(s), self.alphabet.name(t))?;
                }
            }
        }
        for l in &self.letters {
            writeln!(f, "letter {} {}", l.name, self.alphabet.name(l.projection))?;
        }
        writeln!(f, "phrase {}", self.phrase_string())
    }
}
