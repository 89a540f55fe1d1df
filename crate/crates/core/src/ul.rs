//! Reduction of nanophrases over an arbitrary alphabet to pseudolinks.
//!
//! A subset `L` of a complete residue system of `α/τ` signs each letter:
//! `+1` if its projection lies in `L`, `−1` if it lies in `τ(L)`, both only
//! for free orbits, and `0` otherwise. `U_L` drops the letters signed `0`
//! and keeps the rest with their sign as projection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::phrase::{AlphaLetter, Alphabet, Nanophrase, SymbolId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UlError {
    #[error("L must be a nonempty subset of the residue system")]
    EmptySubset,
    #[error("symbol `{0}` is not in the residue system")]
    NotRepresentative(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` and `{1}` lie in the same orbit")]
    SameOrbit(String, String),
    #[error("the phrase is not over the residue system's alphabet")]
    AlphabetMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    members: Vec<SymbolId>,
}

impl Orbit {
    pub fn members(&self) -> &[SymbolId] {
        &self.members
    }

    pub fn is_free(&self) -> bool {
        self.members.len() == 2
    }

    pub fn contains(&self, s: SymbolId) -> bool {
        self.members.contains(&s)
    }
}

/// Orbits of `τ` in symbol order.
pub fn orbits(a: &Alphabet) -> Vec<Orbit> {
    let mut out = Vec::new();
    for s in a.symbols() {
        let t = a.tau(s);
        if t == s {
            out.push(Orbit { members: vec![s] });
        } else if s < t {
            out.push(Orbit { members: vec![s, t] });
        }
    }
    out
}

/// One chosen symbol per orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crs {
    alphabet: Alphabet,
    reps: Vec<SymbolId>,
}

impl Crs {
    /// The lexicographically smaller name of each free orbit, and the sole
    /// member of each fixed one.
    pub fn default_for(a: &Alphabet) -> Self {
        let reps = orbits(a)
            .iter()
            .map(|o| *o.members().iter().min_by_key(|&&s| a.name(s)).expect("orbit is nonempty"))
            .collect();
        Self { alphabet: a.clone(), reps }
    }

    /// The default system with the orbits of the given symbols represented
    /// by them instead.
    pub fn with_choices<S: AsRef<str>>(a: &Alphabet, choices: &[S]) -> Result<Self, UlError> {
        let mut crs = Self::default_for(a);
        let orbs = orbits(a);
        let mut chosen: Vec<Option<SymbolId>> = vec![None; orbs.len()];
        for name in choices {
            let name = name.as_ref();
            let s = a.lookup(name).ok_or_else(|| UlError::UnknownSymbol(name.to_string()))?;
            let k = orbs.iter().position(|o| o.contains(s)).expect("orbits partition the alphabet");
            if let Some(prev) = chosen[k] {
                return Err(UlError::SameOrbit(a.name(prev).to_string(), name.to_string()));
            }
            chosen[k] = Some(s);
            crs.reps[k] = s;
        }
        Ok(crs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn representatives(&self) -> &[SymbolId] {
        &self.reps
    }

    /// Resolves symbol names into a subset of the system.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<SymbolId>, UlError> {
        if names.is_empty() {
            return Err(UlError::EmptySubset);
        }
        let mut out = Vec::new();
        for name in names {
            let name = name.as_ref();
            let s = self.alphabet.lookup(name).ok_or_else(|| UlError::UnknownSymbol(name.to_string()))?;
            if !self.reps.contains(&s) {
                return Err(UlError::NotRepresentative(name.to_string()));
            }
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Every nonempty subset, each sorted, in binary-counter order.
    pub fn nonempty_subsets(&self) -> Vec<Vec<SymbolId>> {
        let mut reps = self.reps.clone();
        reps.sort();
        (1u64..1 << reps.len())
            .map(|m| reps.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &s)| s).collect())
            .collect()
    }

    pub fn names(&self, l: &[SymbolId]) -> Vec<String> {
        l.iter().map(|&s| self.alphabet.name(s).to_string()).collect()
    }
}

pub fn sign_l(a: &Alphabet, projection: SymbolId, l: &[SymbolId]) -> Result<i8, UlError> {
    if l.is_empty() {
        return Err(UlError::EmptySubset);
    }
    let t = a.tau(projection);
    Ok(if t == projection {
        0
    } else if l.contains(&projection) {
        1
    } else if l.contains(&t) {
        -1
    } else {
        0
    })
}

/// `U_L(P)`: a pseudolink of the same length, letters keeping their names.
pub fn u_l(p: &Nanophrase, l: &[SymbolId], crs: &Crs) -> Result<Nanophrase, UlError> {
    if p.alphabet() != crs.alphabet() {
        return Err(UlError::AlphabetMismatch);
    }
    if l.is_empty() {
        return Err(UlError::EmptySubset);
    }
    if let Some(&s) = l.iter().find(|s| !crs.reps.contains(s)) {
        return Err(UlError::NotRepresentative(p.alphabet().name(s).to_string()));
    }
    let target = Alphabet::pseudolink();
    let plus = target.lookup("1").expect("pseudolink symbol");
    let minus = target.lookup("-1").expect("pseudolink symbol");
    let mut letters = Vec::with_capacity(p.letter_count());
    for l_ in p.letters() {
        let sign = sign_l(p.alphabet(), l_.projection, l)?;
        let projection = if sign < 0 { minus } else { plus };
        letters.push((sign, AlphaLetter { name: l_.name.clone(), projection }));
    }
    let words = p
        .words()
        .iter()
        .map(|w| w.iter().copied().filter(|x| letters[x.0].0 != 0).collect())
        .collect();
    let letters: Vec<AlphaLetter> = letters.into_iter().map(|(_, l)| l).collect();
    Ok(Nanophrase::compact(target, &letters, words))
}

/// `{ I(U_L(P)) }` over every nonempty `L ⊆ crs`, keyed by sorted symbol
/// names.
pub fn invariant_bundle<T, F>(p: &Nanophrase, crs: &Crs, invariant: F) -> Result<BTreeMap<Vec<String>, T>, UlError>
where
    T: Send,
    F: Fn(&Nanophrase) -> T + Sync,
{
    let subsets = crs.nonempty_subsets();
    let values: Vec<(Vec<String>, T)> = subsets
        .par_iter()
        .map(|l| Ok((crs.names(l), invariant(&u_l(p, l, crs)?))))
        .collect::<Result<_, UlError>>()?;
    let mut out = BTreeMap::new();
    for (mut k, v) in values {
        k.sort();
        out.insert(k, v);
    }
    Ok(out)
}

/// `L = {a,c}`.
pub fn subset_label(names: &[String]) -> String {
    format!("L = {{{}}}", names.join(","))
}
