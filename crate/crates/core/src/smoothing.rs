//! Resolution of a pseudolink under a marker state.
//!
//! Letters are deleted one at a time by rewriting the phrase. For a letter
//! `A` whose two occurrences are brought to the front of their words (words
//! are cyclic, the shift involution being the identity):
//!
//! ```text
//! AxAy  ->  ax|ay        if mark(A) =  |A|
//! AxAy  ->  (ax⁻ay)_x    if mark(A) = -|A|
//! Ax|Ay ->  axay         if mark(A) =  |A|
//! Ax|Ay ->  (ax⁻ay)_x    if mark(A) = -|A|
//! ```
//!
//! where `a` is a reminder left in place of `A` and `(…)_x` flips the
//! projection of every letter occurring exactly once in `x`. When no letter
//! is left, every word is one resolved component.
//!
//! Besides letters and reminders the working words carry one hidden arc
//! token per stretch of the original phrase between consecutive occurrences
//! (the arc leaving occurrence `(A, k)`), plus one closed arc per empty
//! word. Rewrites only cut at letters, so each arc stays whole and the arcs
//! of a final word are exactly the pieces of the original phrase forming
//! that component. An occurrence belongs to the component holding the arc
//! that leaves it. This makes component identity independent of the
//! deletion order, unlike reminder placement alone.

use std::fmt;

use thiserror::Error;

use crate::phrase::{LetterId, Nanophrase, Occurrence, PhraseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmoothingError {
    #[error("{0}")]
    Phrase(#[from] PhraseError),
    #[error("letter {0} is not present twice in the working phrase")]
    NotPresent(String),
    #[error("state covers {state} letters but the phrase has {phrase}")]
    StateMismatch { state: usize, phrase: usize },
    #[error("at most 64 letters are supported by a marker state, got {0}")]
    TooManyLetters(usize),
    #[error("resolution depends on deletion order (internal invariant violated)")]
    OrderDependence,
}

/// A `±1` marker on every letter, stored as a bit mask (bit set = `+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    plus: u64,
    len: usize,
}

impl State {
    pub fn from_mask(plus: u64, len: usize) -> Result<Self, SmoothingError> {
        if len > 64 {
            return Err(SmoothingError::TooManyLetters(len));
        }
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Ok(Self { plus: plus & mask, len })
    }

    pub fn from_markers(markers: &[i8]) -> Result<Self, SmoothingError> {
        let plus = markers.iter().enumerate().filter(|(_, &m)| m > 0).fold(0u64, |acc, (i, _)| acc | 1 << i);
        Self::from_mask(plus, markers.len())
    }

    pub fn all_plus(len: usize) -> Self {
        Self::from_mask(u64::MAX, len).expect("len <= 64")
    }

    /// Every state of a phrase with `len` letters, in mask order.
    pub fn all(len: usize) -> impl Iterator<Item = State> {
        assert!(len < 64, "state enumeration limited to 63 letters");
        (0..1u64 << len).map(move |plus| State { plus, len })
    }

    pub fn mask(&self) -> u64 {
        self.plus
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn marker(&self, l: LetterId) -> i8 {
        if self.plus >> l.0 & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn with_marker(&self, l: LetterId, m: i8) -> Self {
        let plus = if m > 0 { self.plus | 1 << l.0 } else { self.plus & !(1 << l.0) };
        Self { plus, len: self.len }
    }

    pub fn positive_count(&self) -> u32 {
        self.plus.count_ones()
    }

    pub fn negative_count(&self) -> u32 {
        self.len as u32 - self.plus.count_ones()
    }
}

/// `#{+1 markers} − #{−1 markers}`.
pub fn sigma(s: &State) -> i32 {
    s.positive_count() as i32 - s.negative_count() as i32
}

/// Owner of an arc of the original phrase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcOwner {
    /// The stretch leaving this occurrence.
    Leaving(Occurrence),
    /// The closed loop of an empty word.
    Loop(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Letter(Occurrence),
    Reminder(Occurrence),
    Arc(usize),
}

/// A phrase part-way through resolution.
#[derive(Clone, Debug)]
pub struct WorkingPhrase<'a> {
    phrase: &'a Nanophrase,
    state: State,
    words: Vec<Vec<Token>>,
    projections: Vec<i8>,
    arcs: Vec<ArcOwner>,
}

impl<'a> WorkingPhrase<'a> {
    pub fn new(phrase: &'a Nanophrase, state: State) -> Result<Self, SmoothingError> {
        let projections = phrase.signs()?;
        if state.len() != phrase.letter_count() {
            return Err(SmoothingError::StateMismatch { state: state.len(), phrase: phrase.letter_count() });
        }
        let mut arcs = Vec::new();
        let mut words = Vec::with_capacity(phrase.len());
        for (i, w) in phrase.occurrences().into_iter().enumerate() {
            let mut tokens = Vec::with_capacity(2 * w.len() + 1);
            if w.is_empty() {
                tokens.push(Token::Arc(arcs.len()));
                arcs.push(ArcOwner::Loop(i));
            }
            for occ in w {
                tokens.push(Token::Letter(occ));
                tokens.push(Token::Arc(arcs.len()));
                arcs.push(ArcOwner::Leaving(occ));
            }
            words.push(tokens);
        }
        Ok(Self { phrase, state, words, projections, arcs })
    }

    /// Current projection of a letter (after the flips applied so far).
    pub fn projection(&self, l: LetterId) -> i8 {
        self.projections[l.0]
    }

    pub fn is_resolved(&self) -> bool {
        !self.words.iter().flatten().any(|t| matches!(t, Token::Letter(_)))
    }

    fn locate(&self, a: LetterId) -> Vec<(usize, usize)> {
        let mut found = Vec::with_capacity(2);
        for (w, word) in self.words.iter().enumerate() {
            for (i, t) in word.iter().enumerate() {
                if matches!(t, Token::Letter(o) if o.letter == a) {
                    found.push((w, i));
                }
            }
        }
        found
    }

    /// Flips the letters occurring once in `x`; a letter seen twice is
    /// flipped back.
    fn flip_once_in(&mut self, x: &[Token]) {
        for t in x {
            if let Token::Letter(o) = t {
                self.projections[o.letter.0] = -self.projections[o.letter.0];
            }
        }
    }

    /// Deletes one letter under its marker, applying the rewrite above.
    pub fn resolve_step(&mut self, a: LetterId) -> Result<(), SmoothingError> {
        let pos = self.locate(a);
        if pos.len() != 2 {
            return Err(SmoothingError::NotPresent(self.phrase.letter(a).name.clone()));
        }
        let oriented = self.state.marker(a) == self.projections[a.0];
        let occ_at = |word: &[Token]| match word[0] {
            Token::Letter(o) => o,
            _ => unreachable!("rotated to a letter"),
        };
        let (w1, p1) = pos[0];
        let (w2, p2) = pos[1];
        if w1 == w2 {
            let mut word = std::mem::take(&mut self.words[w1]);
            word.rotate_left(p1);
            let q = p2 - p1;
            let first = occ_at(&word);
            let second = match word[q] {
                Token::Letter(o) => o,
                _ => unreachable!(),
            };
            let x = word[1..q].to_vec();
            let y = word[q + 1..].to_vec();
            if oriented {
                self.words[w1] = std::iter::once(Token::Reminder(first)).chain(x).collect();
                self.words.insert(w1 + 1, std::iter::once(Token::Reminder(second)).chain(y).collect());
            } else {
                self.flip_once_in(&x);
                self.words[w1] = reversed_join(first, &x, second, y);
            }
        } else {
            let mut u = std::mem::take(&mut self.words[w1]);
            let mut v = self.words.remove(w2);
            u.rotate_left(p1);
            v.rotate_left(p2);
            let (first, second) = (occ_at(&u), occ_at(&v));
            let x = u[1..].to_vec();
            let y = v[1..].to_vec();
            if oriented {
                let mut merged = Vec::with_capacity(x.len() + y.len() + 2);
                merged.push(Token::Reminder(first));
                merged.extend(x);
                merged.push(Token::Reminder(second));
                merged.extend(y);
                self.words[w1] = merged;
            } else {
                self.flip_once_in(&x);
                self.words[w1] = reversed_join(first, &x, second, y);
            }
        }
        Ok(())
    }

    /// `∅^{…}` per word in current word order, from the arcs each word holds.
    fn describe_words(&self) -> String {
        self.words
            .iter()
            .map(|w| {
                let mut letters: Vec<LetterId> = w
                    .iter()
                    .filter_map(|t| match t {
                        Token::Arc(a) => match self.arcs[*a] {
                            ArcOwner::Leaving(o) => Some(o.letter),
                            ArcOwner::Loop(_) => None,
                        },
                        _ => None,
                    })
                    .collect();
                letters.sort_unstable();
                letters.dedup();
                let names: String = letters.iter().map(|&l| self.phrase.letter(l).name.as_str()).collect();
                if names.is_empty() {
                    "∅".to_string()
                } else {
                    format!("∅^{{{names}}}")
                }
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Collects the components once every letter is deleted.
    fn finish(self) -> ResolvedDiagram {
        debug_assert!(self.is_resolved());
        let mut components: Vec<Component> = self
            .words
            .iter()
            .map(|w| {
                let mut arcs: Vec<usize> =
                    w.iter().filter_map(|t| if let Token::Arc(a) = t { Some(*a) } else { None }).collect();
                arcs.sort_unstable();
                let mut occurrences: Vec<Occurrence> = arcs
                    .iter()
                    .filter_map(|&a| match self.arcs[a] {
                        ArcOwner::Leaving(o) => Some(o),
                        ArcOwner::Loop(_) => None,
                    })
                    .collect();
                occurrences.sort_unstable();
                Component { arcs, occurrences }
            })
            .collect();
        components.sort_by_key(|c| c.arcs[0]);
        ResolvedDiagram { components }
    }
}

fn reversed_join(first: Occurrence, x: &[Token], second: Occurrence, y: Vec<Token>) -> Vec<Token> {
    let mut out = Vec::with_capacity(x.len() + y.len() + 2);
    out.push(Token::Reminder(first));
    out.extend(x.iter().rev().copied());
    out.push(Token::Reminder(second));
    out.extend(y);
    out
}

impl fmt::Display for WorkingPhrase<'_> {
    /// Letters as `A₊`, `Ā₋` (bar when the projection is `-1`), reminders in
    /// lower case, empty words as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .words
            .iter()
            .map(|w| {
                let mut s = String::new();
                for t in w {
                    match t {
                        Token::Letter(o) => {
                            s.push_str(&self.phrase.letter(o.letter).name);
                            if self.projections[o.letter.0] < 0 {
                                s.push('\u{0304}');
                            }
                            s.push(if self.state.marker(o.letter) > 0 { '₊' } else { '₋' });
                        }
                        Token::Reminder(o) => s.push_str(&self.phrase.letter(o.letter).name.to_lowercase()),
                        Token::Arc(_) => {}
                    }
                }
                if s.is_empty() {
                    s.push('∅');
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join("|"))
    }
}

/// One resolved component: the original arcs it consists of and the
/// occurrences whose leaving arc it holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    arcs: Vec<usize>,
    occurrences: Vec<Occurrence>,
}

impl Component {
    /// Sorted arc ids; the first one identifies the component.
    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn key(&self) -> usize {
        self.arcs[0]
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    /// Distinct letters touching the component, sorted.
    pub fn letters(&self) -> Vec<LetterId> {
        let mut l: Vec<LetterId> = self.occurrences.iter().map(|o| o.letter).collect();
        l.dedup();
        l
    }

    pub fn touches(&self, l: LetterId) -> bool {
        self.occurrences.iter().any(|o| o.letter == l)
    }

    pub fn contains_arc(&self, arc: usize) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }
}

/// The components `∅|⋯|∅` of a fully resolved state, ordered by key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolvedDiagram {
    components: Vec<Component>,
}

impl ResolvedDiagram {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `|s|`.
    pub fn count(&self) -> usize {
        self.components.len()
    }

    /// Indices of the components passing through a crossing, given its
    /// four arcs from [`crossing_arcs`].
    pub fn components_at(&self, arcs: &[usize; 4]) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&k| arcs.iter().any(|&a| self.components[k].contains_arc(a)))
            .collect()
    }

    /// Renders as `∅^{AC}|∅^{ABC}`.
    pub fn describe(&self, phrase: &Nanophrase) -> String {
        self.components
            .iter()
            .map(|c| {
                let names: String = c.letters().iter().map(|&l| phrase.letter(l).name.as_str()).collect();
                if names.is_empty() {
                    "∅".to_string()
                } else {
                    format!("∅^{{{names}}}")
                }
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// For every letter, the arcs leaving and entering its two occurrences, in
/// the arc numbering used by resolved components.
pub fn crossing_arcs(phrase: &Nanophrase) -> Vec<[usize; 4]> {
    let mut out = vec![[usize::MAX; 4]; phrase.letter_count()];
    let mut next = 0;
    for w in phrase.occurrences() {
        if w.is_empty() {
            next += 1;
            continue;
        }
        let n = w.len();
        for (k, occ) in w.iter().enumerate() {
            let slot = 2 * (occ.index as usize - 1);
            out[occ.letter.0][slot] = next + k;
            out[occ.letter.0][slot + 1] = next + (k + n - 1) % n;
        }
        next += n;
    }
    out
}

/// Resolves `phrase` under `state` deleting letters in the given order.
pub fn resolve_in_order(
    phrase: &Nanophrase,
    state: State,
    order: &[LetterId],
) -> Result<ResolvedDiagram, SmoothingError> {
    let mut wp = WorkingPhrase::new(phrase, state)?;
    for &a in order {
        wp.resolve_step(a)?;
    }
    if !wp.is_resolved() {
        return Err(SmoothingError::NotPresent("(order does not cover every letter)".into()));
    }
    Ok(wp.finish())
}

/// Resolves in first-occurrence order.
pub fn resolve(phrase: &Nanophrase, state: State) -> Result<ResolvedDiagram, SmoothingError> {
    Resolver::new(phrase)?.resolve(state)
}

/// Resolves many states of one phrase, sharing the initial working phrase
/// and the deletion order.
#[derive(Clone, Debug)]
pub struct Resolver<'a> {
    start: WorkingPhrase<'a>,
    order: Vec<LetterId>,
}

impl<'a> Resolver<'a> {
    pub fn new(phrase: &'a Nanophrase) -> Result<Self, SmoothingError> {
        let start = WorkingPhrase::new(phrase, State::all_plus(phrase.letter_count()))?;
        Ok(Self { start, order: phrase.first_occurrence_order() })
    }

    pub fn resolve(&self, state: State) -> Result<ResolvedDiagram, SmoothingError> {
        if state.len() != self.order.len() {
            return Err(SmoothingError::StateMismatch { state: state.len(), phrase: self.order.len() });
        }
        let mut wp = self.start.clone();
        wp.state = state;
        for &a in &self.order {
            wp.resolve_step(a)?;
        }
        Ok(wp.finish())
    }
}

/// Resolves in first-occurrence order and in the reversed order, failing
/// if the two disagree.
pub fn resolve_checked(phrase: &Nanophrase, state: State) -> Result<ResolvedDiagram, SmoothingError> {
    let order = phrase.first_occurrence_order();
    let out = resolve_in_order(phrase, state, &order)?;
    let rev: Vec<LetterId> = order.iter().rev().copied().collect();
    if resolve_in_order(phrase, state, &rev)? != out {
        return Err(SmoothingError::OrderDependence);
    }
    Ok(out)
}

/// Every intermediate working phrase, starting with the input, in
/// first-occurrence deletion order.
pub fn trace(phrase: &Nanophrase, state: State) -> Result<Vec<String>, SmoothingError> {
    let mut wp = WorkingPhrase::new(phrase, state)?;
    let mut lines = vec![wp.to_string()];
    for a in phrase.first_occurrence_order() {
        wp.resolve_step(a)?;
        lines.push(wp.to_string());
    }
    lines.push(wp.describe_words());
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_phrase;

    fn phrase(text: &str) -> Nanophrase {
        parse_phrase(text).unwrap()
    }

    fn state(p: &Nanophrase, markers: &[(&str, i8)]) -> State {
        let mut m = vec![1i8; p.letter_count()];
        for (n, s) in markers {
            m[p.letter_by_name(n).unwrap().0] = *s;
        }
        State::from_markers(&m).unwrap()
    }

    fn letter_sets(p: &Nanophrase, d: &ResolvedDiagram) -> Vec<String> {
        let mut v: Vec<String> = d
            .components()
            .iter()
            .map(|c| c.letters().iter().map(|&l| p.letter(l).name.clone()).collect())
            .collect();
        v.sort();
        v
    }

    const THREE: &str = "letter A 1\nletter B -1\nletter C 1\nphrase ABACBC";

    #[test]
    fn abab_mixed_markers() {
        let p = phrase("letter A 1\nletter B 1\nphrase ABAB");
        let s = state(&p, &[("A", 1), ("B", -1)]);
        assert_eq!(resolve(&p, s).unwrap().count(), 1);
        assert_eq!(trace(&p, s).unwrap()[..3], ["A₊B₋A₊B₋", "aB₋|aB₋", "baba"]);
    }

    #[test]
    fn three_letter_oriented_trace() {
        let p = phrase(THREE);
        let s = state(&p, &[]);
        let t = trace(&p, s).unwrap();
        assert_eq!(t[0], "A₊B\u{304}₊A₊C₊B\u{304}₊C₊");
        assert_eq!(t[1], "aB\u{304}₊|aC₊B\u{304}₊C₊");
        assert_eq!(t[2], "babC₊aC₊");
        assert_eq!(t[3], "ca|cbab");
        assert_eq!(t[4], "∅^{AC}|∅^{ABC}");
        let d = resolve(&p, s).unwrap();
        assert_eq!(d.count(), 2);
        assert_eq!(letter_sets(&p, &d), ["ABC", "AC"]);
    }

    #[test]
    fn three_letter_reversing_trace() {
        let p = phrase(THREE);
        let s = state(&p, &[("A", -1), ("B", -1)]);
        let t = trace(&p, s).unwrap();
        assert_eq!(t[1], "aB₋aC₊B₋C₊");
        assert_eq!(t[2], "bC\u{304}₊abC\u{304}₊a");
        assert_eq!(t[3], "cbacab");
        let d = resolve(&p, s).unwrap();
        assert_eq!(d.count(), 1);
        assert_eq!(letter_sets(&p, &d), ["ABC"]);
    }

    #[test]
    fn single_kink() {
        let p = phrase("letter A 1\nphrase AA");
        let plus = resolve(&p, state(&p, &[])).unwrap();
        assert_eq!(plus.count(), 2);
        assert_eq!(trace(&p, state(&p, &[])).unwrap()[1], "a|a");
        assert_eq!(resolve(&p, state(&p, &[("A", -1)])).unwrap().count(), 1);
    }

    #[test]
    fn step_requires_two_occurrences() {
        let p = phrase("letter A 1\nphrase AA");
        let mut wp = WorkingPhrase::new(&p, State::all_plus(1)).unwrap();
        wp.resolve_step(LetterId(0)).unwrap();
        assert!(matches!(wp.resolve_step(LetterId(0)), Err(SmoothingError::NotPresent(_))));
    }

    #[test]
    fn empty_words_are_components() {
        let p = phrase("phrase _|_");
        let d = resolve(&p, State::all_plus(0)).unwrap();
        assert_eq!(d.count(), 2);
        assert!(d.components().iter().all(|c| c.occurrences().is_empty()));
    }

    #[test]
    fn sigma_counts() {
        assert_eq!(sigma(&State::all_plus(5)), 5);
        assert_eq!(sigma(&State::from_markers(&[1, -1]).unwrap()), 0);
        assert_eq!(sigma(&State::all_plus(0)), 0);
    }

    #[test]
    fn rejects_non_pseudolink() {
        let p = phrase("alphabet a b\ninv a b\nletter A a\nphrase AA");
        assert!(matches!(
            WorkingPhrase::new(&p, State::all_plus(1)),
            Err(SmoothingError::Phrase(PhraseError::NotPseudolink))
        ));
    }
}
