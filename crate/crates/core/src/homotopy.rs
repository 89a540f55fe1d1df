//! Homotopy moves on nanophrases, shifts and permutations of words, and a
//! seeded random walk over them.
//!
//! Sites are 0-based positions in the concatenation of all words. Patterns
//! may straddle word boundaries except inside an adjacent pair such as the
//! `AB` of `xAByBAz`, which must sit in one word.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::phrase::{letter_name, AlphaLetter, Alphabet, LetterId, Nanophrase, SymbolId};

pub const DEFAULT_LETTER_BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move `{0}` does not apply to this phrase")]
    NotApplicable(String),
    #[error("component {0} is empty")]
    EmptyComponent(usize),
    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("letter name `{0}` is already in use")]
    NameTaken(String),
    #[error("cannot parse move `{0}`")]
    Parse(String),
}

/// `(α, τ, S)` together with the shift involution `ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyData {
    alphabet: Alphabet,
    triples: BTreeSet<[SymbolId; 3]>,
    nu: Vec<SymbolId>,
}

impl HomotopyData {
    pub fn new(alphabet: Alphabet, triples: impl IntoIterator<Item = [SymbolId; 3]>) -> Self {
        let nu = alphabet.symbols().collect();
        let triples = triples.into_iter().filter(|t| t.iter().all(|s| s.0 < alphabet.len())).collect();
        Self { alphabet, triples, nu }
    }

    fn pseudolink(signs: &[[i8; 3]]) -> Self {
        let a = Alphabet::pseudolink();
        let sym = |s: i8| a.lookup(if s > 0 { "1" } else { "-1" }).expect("pseudolink symbol");
        let triples: Vec<[SymbolId; 3]> = signs.iter().map(|t| [sym(t[0]), sym(t[1]), sym(t[2])]).collect();
        Self::new(a, triples)
    }

    pub fn s1() -> Self {
        Self::pseudolink(&[[1, 1, 1], [1, 1, -1], [-1, 1, 1], [-1, -1, -1], [-1, -1, 1], [1, -1, -1]])
    }

    pub fn s0() -> Self {
        Self::pseudolink(&[[1, 1, 1], [-1, -1, -1]])
    }

    /// `Δ_α = {(a, a, a)}`.
    pub fn diagonal(alphabet: Alphabet) -> Self {
        let triples: Vec<[SymbolId; 3]> = alphabet.symbols().map(|s| [s, s, s]).collect();
        Self::new(alphabet, triples)
    }

    /// Replaces the identity shift involution.
    pub fn with_nu(mut self, nu: Vec<SymbolId>) -> Self {
        assert_eq!(nu.len(), self.alphabet.len());
        self.nu = nu;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, t: [SymbolId; 3]) -> bool {
        self.triples.contains(&t)
    }

    pub fn triples(&self) -> impl Iterator<Item = &[SymbolId; 3]> {
        self.triples.iter()
    }

    pub fn nu(&self, s: SymbolId) -> SymbolId {
        self.nu[s.0]
    }

    /// Every `b` has some `(·, b, b)` in `S`.
    pub fn allows_cancel(&self) -> bool {
        self.alphabet.symbols().all(|b| self.triples.iter().any(|t| t[1] == b && t[2] == b))
    }
}

/// The eight ways of swapping three adjacent pairs: the third move, the
/// three twisted variants, and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripleKind {
    H3,
    H3Inv,
    V1,
    V1Inv,
    V2,
    V2Inv,
    V3,
    V3Inv,
}

impl TripleKind {
    pub const ALL: [TripleKind; 8] = [
        TripleKind::H3,
        TripleKind::H3Inv,
        TripleKind::V1,
        TripleKind::V1Inv,
        TripleKind::V2,
        TripleKind::V2Inv,
        TripleKind::V3,
        TripleKind::V3Inv,
    ];

    /// Letters of the three pairs on the left-hand side, `0, 1, 2` standing
    /// for `A, B, C`.
    fn template(self) -> [[usize; 2]; 3] {
        use TripleKind::*;
        match self {
            H3 => [[0, 1], [0, 2], [1, 2]],
            H3Inv => [[1, 0], [2, 0], [2, 1]],
            V1 => [[0, 1], [2, 0], [1, 2]],
            V1Inv => [[1, 0], [0, 2], [2, 1]],
            V2 => [[0, 1], [2, 0], [2, 1]],
            V2Inv => [[1, 0], [0, 2], [1, 2]],
            V3 => [[0, 1], [0, 2], [2, 1]],
            V3Inv => [[1, 0], [2, 0], [1, 2]],
        }
    }

    /// Whether `τ` is applied to `|A|` and `|B|` before the lookup in `S`.
    fn twist(self) -> (bool, bool) {
        use TripleKind::*;
        match self {
            H3 | H3Inv => (false, false),
            V1 | V1Inv => (false, true),
            V2 | V2Inv => (true, true),
            V3 | V3Inv => (true, false),
        }
    }

    pub fn inverse(self) -> Self {
        use TripleKind::*;
        match self {
            H3 => H3Inv,
            H3Inv => H3,
            V1 => V1Inv,
            V1Inv => V1,
            V2 => V2Inv,
            V2Inv => V2,
            V3 => V3Inv,
            V3Inv => V3,
        }
    }

    fn token(self) -> &'static str {
        use TripleKind::*;
        match self {
            H3 => "H3",
            H3Inv => "H3inv",
            V1 => "H3v1",
            V1Inv => "H3v1inv",
            V2 => "H3v2",
            V2Inv => "H3v2inv",
            V3 => "H3v3",
            V3Inv => "H3v3inv",
        }
    }
}

/// A gap inside a word: `component` is 1-based, `offset` counts letters
/// before the gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InsertPoint {
    pub component: usize,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// `xAAy → xy` with `AA` at `at, at+1`.
    H1 { at: usize },
    /// `xy → xAAy` with `|A| = projection`.
    H1Inv { point: InsertPoint, projection: String, name: String },
    /// `xAByBAz → xyz` with `AB` at `first` and `BA` at `second`.
    H2 { first: usize, second: usize },
    /// `xyz → xAByBAz`, `|A| = projection`, `|B| = τ(|A|)`; `first ≤ second`.
    H2Inv { first: InsertPoint, second: InsertPoint, projection: String, names: [String; 2] },
    /// Swaps the pairs starting at the three positions.
    Triple { kind: TripleKind, pairs: [usize; 3] },
    /// `xAByABz → xyz` with `|B| = τ(|A|)`.
    Cancel { first: usize, second: usize },
    /// ν-shift of a 1-based component.
    Shift { component: usize },
    /// ν-permutation of 1-based components `index` and `index + 1`.
    Permute { index: usize },
    Rename { from: String, to: String },
}

impl Move {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Move::H1 { .. } => "H1",
            Move::H1Inv { .. } => "H1inv",
            Move::H2 { .. } => "H2",
            Move::H2Inv { .. } => "H2inv",
            Move::Triple { kind, .. } => kind.token(),
            Move::Cancel { .. } => "ABAB",
            Move::Shift { .. } => "SHIFT",
            Move::Permute { .. } => "PERM",
            Move::Rename { .. } => "RENAME",
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for InsertPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.offset)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kind_name();
        match self {
            Move::H1 { at } => write!(f, "{k} @ {}", join(&[*at, at + 1])),
            Move::H1Inv { point, projection, name } => write!(f, "{k} @ {point} {projection} {name}"),
            Move::H2 { first, second } | Move::Cancel { first, second } => {
                write!(f, "{k} @ {}", join(&[*first, first + 1, *second, second + 1]))
            }
            Move::H2Inv { first, second, projection, names } => {
                write!(f, "{k} @ {first},{second} {projection} {},{}", names[0], names[1])
            }
            Move::Triple { pairs, .. } => {
                let six: Vec<usize> = pairs.iter().flat_map(|&p| [p, p + 1]).collect();
                write!(f, "{k} @ {}", join(&six))
            }
            Move::Shift { component } => write!(f, "{k} {component}"),
            Move::Permute { index } => write!(f, "{k} {index}"),
            Move::Rename { from, to } => write!(f, "{k} {from} {to}"),
        }
    }
}

impl FromStr for Move {
    type Err = MoveError;

    /// Parses the text form written by `Display`.
    fn from_str(line: &str) -> Result<Self, MoveError> {
        let err = || MoveError::Parse(line.to_string());
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (&kind, rest) = tokens.split_first().ok_or_else(err)?;
        let number = |s: &str| s.parse::<usize>().map_err(|_| err());
        let positions = |s: &str, n: usize| -> Result<Vec<usize>, MoveError> {
            let v = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            let paired = v.len() == n && v.chunks(2).all(|c| c.len() < 2 || c[1] == c[0] + 1);
            paired.then_some(v).ok_or_else(err)
        };
        let point = |s: &str| -> Result<InsertPoint, MoveError> {
            let (c, o) = s.split_once(':').ok_or_else(err)?;
            Ok(InsertPoint { component: number(c)?, offset: number(o)? })
        };
        let sited = |n: usize| -> Result<Vec<usize>, MoveError> {
            match rest {
                ["@", s] => positions(s, n),
                _ => Err(err()),
            }
        };
        if let Some(&t) = TripleKind::ALL.iter().find(|t| t.token() == kind) {
            let v = sited(6)?;
            return Ok(Move::Triple { kind: t, pairs: [v[0], v[2], v[4]] });
        }
        Ok(match kind {
            "H1" => Move::H1 { at: sited(2)?[0] },
            "H2" => {
                let v = sited(4)?;
                Move::H2 { first: v[0], second: v[2] }
            }
            "ABAB" => {
                let v = sited(4)?;
                Move::Cancel { first: v[0], second: v[2] }
            }
            "H1inv" => match rest {
                ["@", p, sym, name] => {
                    Move::H1Inv { point: point(p)?, projection: sym.to_string(), name: name.to_string() }
                }
                _ => return Err(err()),
            },
            "H2inv" => match rest {
                ["@", pts, sym, names] => {
                    let (a, b) = pts.split_once(',').ok_or_else(err)?;
                    let (n1, n2) = names.split_once(',').ok_or_else(err)?;
                    Move::H2Inv {
                        first: point(a)?,
                        second: point(b)?,
                        projection: sym.to_string(),
                        names: [n1.to_string(), n2.to_string()],
                    }
                }
                _ => return Err(err()),
            },
            "SHIFT" => match rest {
                [c] => Move::Shift { component: number(c)? },
                _ => return Err(err()),
            },
            "PERM" => match rest {
                [i] => Move::Permute { index: number(i)? },
                _ => return Err(err()),
            },
            "RENAME" => match rest {
                [a, b] => Move::Rename { from: a.to_string(), to: b.to_string() },
                _ => return Err(err()),
            },
            _ => return Err(err()),
        })
    }
}

/// Parses a move log, one move per line; blank lines and `#` comments are
/// skipped.
pub fn parse_log(text: &str) -> Result<Vec<Move>, MoveError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

/// `(word, offset)` of every position of the concatenated phrase.
fn locations(p: &Nanophrase) -> Vec<(usize, usize)> {
    p.words().iter().enumerate().flat_map(|(w, word)| (0..word.len()).map(move |o| (w, o))).collect()
}

fn flat(p: &Nanophrase) -> Vec<LetterId> {
    p.words().iter().flatten().copied().collect()
}

/// Positions `i` such that `i` and `i + 1` lie in the same word.
fn adjacent_pairs(p: &Nanophrase) -> Vec<usize> {
    let loc = locations(p);
    (0..loc.len().saturating_sub(1)).filter(|&i| loc[i].0 == loc[i + 1].0).collect()
}

fn is_pair(loc: &[(usize, usize)], at: usize) -> bool {
    at + 1 < loc.len() && loc[at].0 == loc[at + 1].0
}

/// Rebuilds the phrase after editing the flat letter sequence; `lens` gives
/// the new word lengths.
fn rebuild(p: &Nanophrase, letters: Vec<AlphaLetter>, seq: Vec<LetterId>, lens: &[usize]) -> Nanophrase {
    let mut words = Vec::with_capacity(lens.len());
    let mut it = seq.into_iter();
    for &n in lens {
        words.push(it.by_ref().take(n).collect());
    }
    Nanophrase::compact(p.alphabet().clone(), &letters, words)
}

/// Deletes the positions in `drop` (all distinct).
fn delete_positions(p: &Nanophrase, drop: &[usize]) -> Nanophrase {
    let loc = locations(p);
    let mut lens: Vec<usize> = p.words().iter().map(Vec::len).collect();
    for &d in drop {
        lens[loc[d].0] -= 1;
    }
    let seq = flat(p).into_iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, l)| l).collect();
    rebuild(p, p.letters().to_vec(), seq, &lens)
}

fn fresh_names(p: &Nanophrase, n: usize) -> Vec<String> {
    (0..).map(letter_name).filter(|name| p.letter_by_name(name).is_none()).take(n).collect()
}

fn tau_if(a: &Alphabet, s: SymbolId, flip: bool) -> SymbolId {
    if flip {
        a.tau(s)
    } else {
        s
    }
}

/// Letters `[A, B, C]` if the three pairs match the kind's left-hand side.
fn match_triple(p: &Nanophrase, h: &HomotopyData, kind: TripleKind, pairs: [usize; 3]) -> Option<[LetterId; 3]> {
    let loc = locations(p);
    if !(pairs[0] + 2 <= pairs[1] && pairs[1] + 2 <= pairs[2]) || !pairs.iter().all(|&q| is_pair(&loc, q)) {
        return None;
    }
    let seq = flat(p);
    let mut names: [Option<LetterId>; 3] = [None; 3];
    for (slot, &q) in kind.template().iter().zip(&pairs) {
        for (k, &role) in slot.iter().enumerate() {
            let l = seq[q + k];
            match names[role] {
                None => names[role] = Some(l),
                Some(m) if m != l => return None,
                _ => {}
            }
        }
    }
    let [a, b, c] = names.map(|n| n.expect("template covers A, B, C"));
    if a == b || b == c || a == c {
        return None;
    }
    let al = p.alphabet();
    let (ta, tb) = kind.twist();
    let triple = [tau_if(al, p.projection(a), ta), tau_if(al, p.projection(b), tb), p.projection(c)];
    h.contains(triple).then_some([a, b, c])
}

fn pair_letters(seq: &[LetterId], at: usize) -> (LetterId, LetterId) {
    (seq[at], seq[at + 1])
}

/// Every forward move applicable to `p`, plus every insertion (one per gap
/// or pair of gaps and per symbol), shifts of nonempty words and
/// permutations. Insertions use the lowest unused letter names.
pub fn applicable_moves(p: &Nanophrase, h: &HomotopyData) -> Vec<Move> {
    let mut out = removal_moves(p, h);
    out.extend(triple_moves(p, h));
    out.extend(insertion_moves(p, h, true, true));
    out.extend(word_moves(p));
    out
}

fn removal_moves(p: &Nanophrase, h: &HomotopyData) -> Vec<Move> {
    let seq = flat(p);
    let pairs = adjacent_pairs(p);
    let al = p.alphabet();
    let mut out = Vec::new();
    for &i in &pairs {
        let (a, b) = pair_letters(&seq, i);
        if a == b {
            out.push(Move::H1 { at: i });
            continue;
        }
        for &j in pairs.iter().filter(|&&j| j >= i + 2) {
            let (c, d) = pair_letters(&seq, j);
            if al.tau(p.projection(a)) != p.projection(b) {
                continue;
            }
            if (c, d) == (b, a) {
                out.push(Move::H2 { first: i, second: j });
            } else if (c, d) == (a, b) && h.allows_cancel() {
                out.push(Move::Cancel { first: i, second: j });
            }
        }
    }
    out
}

fn triple_moves(p: &Nanophrase, h: &HomotopyData) -> Vec<Move> {
    let pairs = adjacent_pairs(p);
    let mut out = Vec::new();
    for (x, &i) in pairs.iter().enumerate() {
        for (y, &j) in pairs.iter().enumerate().skip(x + 1).filter(|(_, &j)| j >= i + 2) {
            for &k in pairs.iter().skip(y + 1).filter(|&&k| k >= j + 2) {
                for kind in TripleKind::ALL {
                    if match_triple(p, h, kind, [i, j, k]).is_some() {
                        out.push(Move::Triple { kind, pairs: [i, j, k] });
                    }
                }
            }
        }
    }
    out
}

fn insert_points(p: &Nanophrase) -> Vec<InsertPoint> {
    p.words()
        .iter()
        .enumerate()
        .flat_map(|(w, word)| (0..=word.len()).map(move |o| InsertPoint { component: w + 1, offset: o }))
        .collect()
}

fn insertion_moves(p: &Nanophrase, h: &HomotopyData, one: bool, two: bool) -> Vec<Move> {
    let names = fresh_names(p, 2);
    let points = insert_points(p);
    let mut out = Vec::new();
    for sym in h.alphabet().symbols() {
        let projection = h.alphabet().name(sym).to_string();
        if one {
            for &point in &points {
                out.push(Move::H1Inv { point, projection: projection.clone(), name: names[0].clone() });
            }
        }
        if two {
            for (x, &first) in points.iter().enumerate() {
                for &second in &points[x..] {
                    out.push(Move::H2Inv {
                        first,
                        second,
                        projection: projection.clone(),
                        names: [names[0].clone(), names[1].clone()],
                    });
                }
            }
        }
    }
    out
}

fn word_moves(p: &Nanophrase) -> Vec<Move> {
    let mut out: Vec<Move> = (0..p.len())
        .filter(|&w| !p.words()[w].is_empty())
        .map(|w| Move::Shift { component: w + 1 })
        .collect();
    out.extend((1..p.len()).map(|index| Move::Permute { index }));
    out
}

/// The ν-shift of a 1-based component.
pub fn shift(p: &Nanophrase, component: usize, h: &HomotopyData) -> Result<Nanophrase, MoveError> {
    if component == 0 || component > p.len() {
        return Err(MoveError::OutOfRange { index: component, max: p.len() });
    }
    let w = &p.words()[component - 1];
    let Some((&first, rest)) = w.split_first() else {
        return Err(MoveError::EmptyComponent(component));
    };
    let mut letters = p.letters().to_vec();
    if rest.contains(&first) {
        letters[first.0].projection = h.nu(letters[first.0].projection);
    }
    let mut words = p.words().to_vec();
    words[component - 1] = rest.iter().copied().chain([first]).collect();
    Ok(p.with_parts(letters, words))
}

/// The ν-permutation of 1-based components `index` and `index + 1`.
pub fn permute(p: &Nanophrase, index: usize, h: &HomotopyData) -> Result<Nanophrase, MoveError> {
    if index == 0 || index >= p.len() {
        return Err(MoveError::OutOfRange { index, max: p.len().saturating_sub(1) });
    }
    let (u, v) = (&p.words()[index - 1], &p.words()[index]);
    let mut letters = p.letters().to_vec();
    for (i, l) in letters.iter_mut().enumerate() {
        if u.contains(&LetterId(i)) && v.contains(&LetterId(i)) {
            l.projection = h.nu(l.projection);
        }
    }
    let mut words = p.words().to_vec();
    words.swap(index - 1, index);
    Ok(p.with_parts(letters, words))
}

fn check_point(p: &Nanophrase, pt: InsertPoint) -> bool {
    pt.component >= 1 && pt.component <= p.len() && pt.offset <= p.words()[pt.component - 1].len()
}

fn symbol(p: &Nanophrase, name: &str) -> Result<SymbolId, MoveError> {
    p.alphabet().lookup(name).ok_or_else(|| MoveError::UnknownSymbol(name.to_string()))
}

fn new_letter(p: &Nanophrase, letters: &mut Vec<AlphaLetter>, name: &str, projection: SymbolId) -> Result<LetterId, MoveError> {
    if name.is_empty() || letters.iter().any(|l| l.name == name) || p.letter_by_name(name).is_some() {
        return Err(MoveError::NameTaken(name.to_string()));
    }
    letters.push(AlphaLetter { name: name.to_string(), projection });
    Ok(LetterId(letters.len() - 1))
}

/// Inserts runs of letters at gaps given in original coordinates; runs at
/// the same gap keep their order.
fn insert_runs(p: &Nanophrase, letters: Vec<AlphaLetter>, runs: &[(InsertPoint, Vec<LetterId>)]) -> Nanophrase {
    let mut words = p.words().to_vec();
    let mut sorted: Vec<(usize, &(InsertPoint, Vec<LetterId>))> = runs.iter().enumerate().collect();
    sorted.sort_by_key(|(i, (pt, _))| (std::cmp::Reverse(*pt), std::cmp::Reverse(*i)));
    for (_, (pt, run)) in sorted {
        let w = &mut words[pt.component - 1];
        w.splice(pt.offset..pt.offset, run.iter().copied());
    }
    p.with_parts(letters, words)
}

/// Applies a move, failing when its pattern or condition does not hold.
pub fn apply_move(p: &Nanophrase, m: &Move, h: &HomotopyData) -> Result<Nanophrase, MoveError> {
    let not = || MoveError::NotApplicable(m.to_string());
    let loc = locations(p);
    let seq = flat(p);
    let al = p.alphabet();
    match m {
        Move::H1 { at } => {
            if !is_pair(&loc, *at) || seq[*at] != seq[at + 1] {
                return Err(not());
            }
            Ok(delete_positions(p, &[*at, at + 1]))
        }
        Move::H2 { first, second } | Move::Cancel { first, second } => {
            if !is_pair(&loc, *first) || !is_pair(&loc, *second) || *second < first + 2 {
                return Err(not());
            }
            let (a, b) = pair_letters(&seq, *first);
            let want = if matches!(m, Move::H2 { .. }) { (b, a) } else { (a, b) };
            if a == b || pair_letters(&seq, *second) != want || al.tau(p.projection(a)) != p.projection(b) {
                return Err(not());
            }
            if matches!(m, Move::Cancel { .. }) && !h.allows_cancel() {
                return Err(not());
            }
            Ok(delete_positions(p, &[*first, first + 1, *second, second + 1]))
        }
        Move::Triple { kind, pairs } => {
            match_triple(p, h, *kind, *pairs).ok_or_else(not)?;
            let mut words = p.words().to_vec();
            for &q in pairs {
                let (w, o) = loc[q];
                words[w].swap(o, o + 1);
            }
            Ok(p.with_parts(p.letters().to_vec(), words))
        }
        Move::H1Inv { point, projection, name } => {
            if !check_point(p, *point) {
                return Err(not());
            }
            let sym = symbol(p, projection)?;
            let mut letters = p.letters().to_vec();
            let a = new_letter(p, &mut letters, name, sym)?;
            Ok(insert_runs(p, letters, &[(*point, vec![a, a])]))
        }
        Move::H2Inv { first, second, projection, names } => {
            if !check_point(p, *first) || !check_point(p, *second) || first > second || names[0] == names[1] {
                return Err(not());
            }
            let sym = symbol(p, projection)?;
            let mut letters = p.letters().to_vec();
            let a = new_letter(p, &mut letters, &names[0], sym)?;
            let b = new_letter(p, &mut letters, &names[1], al.tau(sym))?;
            Ok(insert_runs(p, letters, &[(*first, vec![a, b]), (*second, vec![b, a])]))
        }
        Move::Shift { component } => shift(p, *component, h),
        Move::Permute { index } => permute(p, *index, h),
        Move::Rename { from, to } => {
            let l = p.letter_by_name(from).ok_or_else(not)?;
            if p.letter_by_name(to).is_some() || to.is_empty() {
                return Err(MoveError::NameTaken(to.clone()));
            }
            let mut letters = p.letters().to_vec();
            letters[l.0].name = to.clone();
            Ok(p.with_parts(letters, p.words().to_vec()))
        }
    }
}

/// Applies a log of moves in order, returning every intermediate phrase
/// (the input first).
pub fn replay(p: &Nanophrase, log: &[Move], h: &HomotopyData) -> Result<Vec<Nanophrase>, (usize, MoveError)> {
    let mut out = vec![p.clone()];
    for (i, m) in log.iter().enumerate() {
        let next = apply_move(out.last().expect("nonempty"), m, h).map_err(|e| (i, e))?;
        out.push(next);
    }
    Ok(out)
}

/// Options for [`random_walk`].
#[derive(Clone, Copy, Debug)]
pub struct WalkOptions {
    pub steps: usize,
    pub seed: u64,
    pub allow_shifts: bool,
    /// Insertions are only offered while the result stays within this many
    /// letters.
    pub letter_budget: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self { steps: 0, seed: 0, allow_shifts: true, letter_budget: DEFAULT_LETTER_BUDGET }
    }
}

/// Seeded walk: each step picks a move family uniformly among those with a
/// site available, then a site uniformly within it. Steps with no
/// available move are skipped. Returns the final phrase and the move log.
pub fn random_walk(p: &Nanophrase, h: &HomotopyData, opts: WalkOptions) -> (Nanophrase, Vec<Move>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cur = p.clone();
    let mut log = Vec::new();
    for _ in 0..opts.steps {
        let n = cur.letter_count();
        let mut families: Vec<Vec<Move>> = Vec::new();
        let removals = removal_moves(&cur, h);
        for kind in ["H1", "H2", "ABAB"] {
            families.push(removals.iter().filter(|m| m.kind_name() == kind).cloned().collect());
        }
        families.push(triple_moves(&cur, h));
        families.push(insertion_moves(&cur, h, n < opts.letter_budget, false));
        families.push(insertion_moves(&cur, h, false, n + 2 <= opts.letter_budget));
        if opts.allow_shifts {
            families.push(word_moves(&cur));
        }
        families.retain(|f| !f.is_empty());
        let Some(family) = families.choose(&mut rng) else {
            continue;
        };
        let m = family[rng.gen_range(0..family.len())].clone();
        cur = apply_move(&cur, &m, h).expect("enumerated moves apply");
        log.push(m);
    }
    (cur, log)
}
