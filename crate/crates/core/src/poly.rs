//! Sparse Laurent polynomials with integer coefficients in up to three
//! variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    U,
    D,
    Q,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
            Var::D => "d",
            Var::Q => "q",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "t" => Var::T,
            "u" => Var::U,
            "d" => Var::D,
            "q" => Var::Q,
            _ => return None,
        })
    }
}

/// `Σ c·v₁^{e₁}⋯v_k^{e_k}` over a fixed ordered variable list. Zero
/// coefficients are never stored, so equality is term-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<i32>, i64>,
}

impl LaurentPoly {
    pub fn zero(vars: &[Var]) -> Self {
        Self { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[Var], c: i64) -> Self {
        Self::monomial(vars, c, &vec![0; vars.len()])
    }

    pub fn monomial(vars: &[Var], coef: i64, exps: &[i32]) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(exps.to_vec(), coef);
        p
    }

    /// Univariate helper: `Σ c·v^e` from `(e, c)` pairs.
    pub fn from_terms(var: Var, terms: &[(i32, i64)]) -> Self {
        let mut p = Self::zero(&[var]);
        for &(e, c) in terms {
            p.add_term(vec![e], c);
        }
        p
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[i32]) -> i64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<i32>, coef: i64) {
        if coef == 0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "mismatched polynomial variables");
    }

    /// Non-negative power.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(&self.vars, 1);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiplies by a monomial `c·v^e` in a univariate polynomial.
    pub fn shift(&self, exp: i32, coef: i64) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, &c) in &self.terms {
            let mut e = e.clone();
            e[0] += exp;
            out.add_term(e, c * coef);
        }
        out
    }

    /// Degree bounds of a univariate polynomial.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|e| e[0]).min()?;
        let hi = self.terms.keys().map(|e| e[0]).max()?;
        Some((lo, hi))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.check_vars(rhs);
        for (e, &c) in &rhs.terms {
            self.add_term(e.clone(), c);
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_vars(rhs);
        let mut out = LaurentPoly::zero(&self.vars);
        for (a, &x) in &self.terms {
            for (b, &y) in &rhs.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending (lexicographic) exponent order, `<coef>*<var>^<exp>`
    /// joined by ` + `; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = c.to_string();
                for (v, &x) in self.vars.iter().zip(e) {
                    if x != 0 {
                        s.push_str(&format!("*{}^{}", v.name(), x));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term `{0}`")]
pub struct PolyParseError(pub String);

impl LaurentPoly {
    /// Parses the text form produced by `Display` over the given variables.
    pub fn parse(text: &str, vars: &[Var]) -> Result<Self, PolyParseError> {
        let mut p = Self::zero(vars);
        let text = text.trim();
        if text == "0" {
            return Ok(p);
        }
        for term in text.split(" + ") {
            let err = || PolyParseError(term.to_string());
            let mut parts = term.split('*');
            let coef: i64 = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
            let mut exps = vec![0; vars.len()];
            for factor in parts {
                let (v, e) = factor.split_once('^').ok_or_else(err)?;
                let v = Var::from_name(v.trim()).ok_or_else(err)?;
                let slot = vars.iter().position(|&w| w == v).ok_or_else(err)?;
                exps[slot] += e.trim().parse::<i32>().map_err(|_| err())?;
            }
            p.add_term(exps, coef);
        }
        Ok(p)
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyParseError;

    /// Parses a univariate polynomial in `t` or `q` (whichever appears; `t`
    /// when only a constant is given).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let var = if s.contains('q') { Var::Q } else { Var::T };
        Self::parse(s, &[var])
    }
}
