//! State sums: the three-variable bracket, its specialization, `J` and `Ĵ`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::phrase::Nanophrase;
use crate::poly::{LaurentPoly, Var};
use crate::smoothing::{Resolver, SmoothingError, State};

/// Hard ceiling on state enumeration; `2^n` resolutions are performed.
pub const MAX_STATE_LETTERS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("{0}")]
    Smoothing(#[from] SmoothingError),
    #[error("the length-0 phrase has no states with a component")]
    LengthZero,
    #[error("{0} letters exceed the state-sum limit of {MAX_STATE_LETTERS}")]
    TooManyLetters(usize),
    #[error("odd t-exponent {0} in Ĵ cannot be rewritten in q")]
    OddExponent(i32),
}

/// Number of states with a given `(#+, |s|)`.
pub type StateCounts = BTreeMap<(u32, usize), i64>;

pub fn state_counts(p: &Nanophrase) -> Result<StateCounts, BracketError> {
    if p.is_empty() {
        return Err(BracketError::LengthZero);
    }
    p.signs().map_err(SmoothingError::from)?;
    let n = p.letter_count();
    if n > MAX_STATE_LETTERS {
        return Err(BracketError::TooManyLetters(n));
    }
    let resolver = Resolver::new(p)?;
    (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let s = State::from_mask(mask, n)?;
            Ok((s.positive_count(), resolver.resolve(s)?.count()))
        })
        .try_fold(StateCounts::new, |mut acc, key: Result<_, BracketError>| {
            *acc.entry(key?).or_default() += 1;
            Ok(acc)
        })
        .try_reduce(StateCounts::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })
}

/// `Σ_s t^{#+} u^{#−} d^{|s|−1}` in `Z[t, u, d]`.
pub fn bracket_general(p: &Nanophrase) -> Result<LaurentPoly, BracketError> {
    let n = p.letter_count() as i32;
    let vars = [Var::T, Var::U, Var::D];
    let mut out = LaurentPoly::zero(&vars);
    for (&(plus, comps), &count) in &state_counts(p)? {
        let plus = plus as i32;
        out.add_term(vec![plus, n - plus, comps as i32 - 1], count);
    }
    Ok(out)
}

/// `−t² − t⁻²`.
pub fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms(Var::T, &[(2, -1), (-2, -1)])
}

/// Substitutes `u ↦ t⁻¹`, `d ↦ −t² − t⁻²`.
pub fn specialize(general: &LaurentPoly) -> LaurentPoly {
    assert_eq!(general.vars(), [Var::T, Var::U, Var::D]);
    let d = loop_value();
    let mut out = LaurentPoly::zero(&[Var::T]);
    let mut powers: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
    for (e, c) in general.terms() {
        assert!(e[2] >= 0, "negative loop power");
        let dp = powers.entry(e[2]).or_insert_with(|| d.pow(e[2] as u32));
        out += &dp.shift(e[0] - e[1], c);
    }
    out
}

/// `[P] = Σ_s t^{σ(s)} (−t² − t⁻²)^{|s|−1}`.
pub fn bracket(p: &Nanophrase) -> Result<LaurentPoly, BracketError> {
    Ok(specialize(&bracket_general(p)?))
}

/// `J(P) = (−t)^{−3w(P)} [P]`.
pub fn jones(p: &Nanophrase) -> Result<LaurentPoly, BracketError> {
    let w = p.writhe().map_err(SmoothingError::from)?;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(bracket(p)?.shift(-3 * w, sign))
}

/// `Ĵ(P) = (−t² − t⁻²) J(P)`.
pub fn jhat(p: &Nanophrase) -> Result<LaurentPoly, BracketError> {
    Ok(&loop_value() * &jones(p)?)
}

/// Rewrites a polynomial in `t` with only even exponents through `q = −t⁻²`.
pub fn t_to_q(p: &LaurentPoly) -> Result<LaurentPoly, BracketError> {
    let mut out = LaurentPoly::zero(&[Var::Q]);
    for (e, c) in p.terms() {
        if e[0] % 2 != 0 {
            return Err(BracketError::OddExponent(e[0]));
        }
        let m = -e[0] / 2;
        out.add_term(vec![m], if m % 2 == 0 { c } else { -c });
    }
    Ok(out)
}

pub fn jhat_q(p: &Nanophrase) -> Result<LaurentPoly, BracketError> {
    t_to_q(&jhat(p)?)
}
