//! Enhanced states, the bigraded complex over GF(2), and `KH^{i,j}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf2::{BitMatrix, SparseMatrix};
use crate::phrase::Nanophrase;
use crate::poly::{LaurentPoly, Var};
use crate::smoothing::{crossing_arcs, sigma, ResolvedDiagram, Resolver, SmoothingError, State};

pub const DEFAULT_MAX_LETTERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhError {
    #[error("{0}")]
    Smoothing(#[from] SmoothingError),
    #[error("the length-0 phrase has no enhanced states")]
    LengthZero,
    #[error("{letters} letters exceed the configured cap of {cap}")]
    CapExceeded { letters: usize, cap: usize },
    #[error("enhanced states belong to different phrases")]
    DifferentPhrase,
    #[error("grading is not integral (internal invariant violated)")]
    NonIntegral,
    #[error("differential does not have bidegree (1, 0) (internal invariant violated)")]
    Bidegree,
    #[error("d∘d ≠ 0 from C^{{{i},{j}}} (internal invariant violated)")]
    SquareNonZero { i: i32, j: i32 },
}

/// A state together with a sign on each of its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhancedState {
    pub state: State,
    /// Indexed like `resolved.components()`.
    pub signs: Vec<i8>,
    pub resolved: ResolvedDiagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    pub i: i32,
    pub j: i32,
    pub sigma: i32,
    pub tau_count: i32,
}

fn grading(w: i32, sigma: i32, tau: i32) -> Result<Grading, KhError> {
    let twice_j = -(sigma + 2 * tau - 3 * w);
    if (w - sigma) % 2 != 0 || twice_j % 2 != 0 {
        return Err(KhError::NonIntegral);
    }
    Ok(Grading { i: (w - sigma) / 2, j: twice_j / 2, sigma, tau_count: tau })
}

pub fn grade(s: &EnhancedState, p: &Nanophrase) -> Result<Grading, KhError> {
    if s.state.len() != p.letter_count() || s.signs.len() != s.resolved.count() {
        return Err(KhError::DifferentPhrase);
    }
    let w = p.writhe().map_err(SmoothingError::from)?;
    let tau = s.signs.iter().map(|&x| x as i32).sum();
    grading(w, sigma(&s.state), tau)
}

fn check_input(p: &Nanophrase, cap: usize) -> Result<(), KhError> {
    if p.is_empty() {
        return Err(KhError::LengthZero);
    }
    p.signs().map_err(SmoothingError::from)?;
    if p.letter_count() > cap {
        return Err(KhError::CapExceeded { letters: p.letter_count(), cap });
    }
    Ok(())
}

/// Every enhanced state: states in mask order, sign assignments in binary
/// order with bit `k` set meaning component `k` is `+`.
pub fn enumerate_enhanced(p: &Nanophrase, cap: usize) -> Result<Vec<EnhancedState>, KhError> {
    check_input(p, cap)?;
    let n = p.letter_count();
    let resolver = Resolver::new(p)?;
    let mut out = Vec::new();
    for state in State::all(n) {
        let resolved = resolver.resolve(state)?;
        let k = resolved.count();
        for m in 0u64..1 << k {
            let signs = (0..k).map(|c| if m >> c & 1 == 1 { 1 } else { -1 }).collect();
            out.push(EnhancedState { state, signs, resolved: resolved.clone() });
        }
    }
    Ok(out)
}

/// `(S : T)` read directly off the two enhanced states. A component takes
/// part in the change at `A` when it runs through the crossing, i.e. holds
/// one of the four arcs meeting there.
pub fn incidence(p: &Nanophrase, s: &EnhancedState, t: &EnhancedState) -> Result<u8, KhError> {
    let n = p.letter_count();
    if s.state.len() != n || t.state.len() != n {
        return Err(KhError::DifferentPhrase);
    }
    let diff = s.state.mask() ^ t.state.mask();
    if diff.count_ones() != 1 || s.state.mask() & diff == 0 {
        return Ok(0);
    }
    let at = crossing_arcs(p)[diff.trailing_zeros() as usize];
    let side = |e: &EnhancedState| {
        let involved = e.resolved.components_at(&at);
        let mut with_a = Vec::new();
        let mut rest = Vec::new();
        for (k, (c, &sg)) in e.resolved.components().iter().zip(&e.signs).enumerate() {
            if involved.contains(&k) {
                with_a.push(sg);
            } else {
                rest.push((c.arcs().to_vec(), sg));
            }
        }
        rest.sort();
        (with_a, rest)
    };
    let (sa, srest) = side(s);
    let (ta, trest) = side(t);
    if srest != trest {
        return Ok(0);
    }
    let hit = match (sa.as_slice(), ta.as_slice()) {
        ([-1, -1], [-1]) | ([-1, 1], [1]) | ([1, -1], [1]) => true,
        ([1], [1, 1]) | ([-1], [1, -1]) | ([-1], [-1, 1]) => true,
        _ => false,
    };
    Ok(hit as u8)
}

/// A basis element: state mask and sign mask (bit `k` = component `k` is `+`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Generator {
    state: u64,
    signs: u64,
}

/// How a single `+ → −` marker change acts on components.
enum Transition {
    Zero,
    Merge { from: [usize; 2], to: usize, keep: Vec<(usize, usize)> },
    Split { from: usize, to: [usize; 2], keep: Vec<(usize, usize)> },
}

fn transition(src: &ResolvedDiagram, dst: &ResolvedDiagram, at: &[usize; 4]) -> Transition {
    let (from, to) = (src.components_at(at), dst.components_at(at));
    let mut keep = Vec::new();
    for (k, c) in src.components().iter().enumerate() {
        if from.contains(&k) {
            continue;
        }
        match dst.components().binary_search_by_key(&c.key(), |d| d.key()) {
            Ok(m) if dst.components()[m].arcs() == c.arcs() => keep.push((k, m)),
            _ => return Transition::Zero,
        }
    }
    match (from.as_slice(), to.as_slice()) {
        (&[x, y], &[z]) => Transition::Merge { from: [x, y], to: z, keep },
        (&[x], &[y, z]) => Transition::Split { from: x, to: [y, z], keep },
        _ => Transition::Zero,
    }
}

/// Images of one generator's sign mask under a transition: up to two
/// masks, the used prefix of the array.
fn images(tr: &Transition, signs: u64) -> ([u64; 2], usize) {
    let bit = |k: usize| signs >> k & 1 == 1;
    let carry = |keep: &[(usize, usize)]| keep.iter().fold(0u64, |acc, &(k, m)| acc | (bit(k) as u64) << m);
    match tr {
        Transition::Zero => ([0; 2], 0),
        Transition::Merge { from, to, keep } => match (bit(from[0]), bit(from[1])) {
            (false, false) => ([carry(keep), 0], 1),
            (true, true) => ([0; 2], 0),
            _ => ([carry(keep) | 1 << to, 0], 1),
        },
        Transition::Split { from, to, keep } => {
            let base = carry(keep);
            if bit(*from) {
                ([base | 1 << to[0] | 1 << to[1], 0], 1)
            } else {
                ([base | 1 << to[0], base | 1 << to[1]], 2)
            }
        }
    }
}

/// Bases of every `C^{i,j}` and the differentials between them.
pub struct ChainComplex {
    letters: usize,
    writhe: i32,
    resolutions: Vec<ResolvedDiagram>,
    bases: BTreeMap<(i32, i32), Vec<Generator>>,
    differentials: BTreeMap<(i32, i32), SparseMatrix>,
}

impl ChainComplex {
    pub fn build(p: &Nanophrase, cap: usize) -> Result<Self, KhError> {
        check_input(p, cap)?;
        let n = p.letter_count();
        let writhe = p.writhe().map_err(SmoothingError::from)?;
        let crossings = crossing_arcs(p);
        let resolver = Resolver::new(p)?;
        let resolutions: Vec<ResolvedDiagram> = (0..1u64 << n)
            .into_par_iter()
            .map(|m| resolver.resolve(State::from_mask(m, n)?))
            .collect::<Result<_, _>>()?;

        let mut bases: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
        // index[state][signs]: position of the generator inside its block.
        let mut index: Vec<Vec<u32>> = Vec::with_capacity(resolutions.len());
        for (state, r) in resolutions.iter().enumerate() {
            let state = state as u64;
            let sg = 2 * state.count_ones() as i32 - n as i32;
            let k = r.count() as u32;
            let mut local = Vec::with_capacity(1 << k);
            for signs in 0u64..1 << k {
                let g = grading(writhe, sg, 2 * signs.count_ones() as i32 - k as i32)?;
                let block = bases.entry((g.i, g.j)).or_default();
                local.push(block.len() as u32);
                block.push(Generator { state, signs });
            }
            index.push(local);
        }

        let grade_of = |g: &Generator| -> Result<(i32, i32), KhError> {
            let k = resolutions[g.state as usize].count() as i32;
            let gr = grading(writhe, 2 * g.state.count_ones() as i32 - n as i32, 2 * g.signs.count_ones() as i32 - k)?;
            Ok((gr.i, gr.j))
        };

        // Per state, in state order: each generator's block and image
        // columns, packed. A block's rows are its generators in state order,
        // so appending in this order fills every block row by row.
        struct StateImages {
            keys: Vec<(i32, i32)>,
            offsets: Vec<usize>,
            cols: Vec<u32>,
        }
        let per_state: Vec<StateImages> = (0..resolutions.len())
            .into_par_iter()
            .map(|state| -> Result<StateImages, KhError> {
                let state = state as u64;
                let src = &resolutions[state as usize];
                let moves: Vec<(u64, Transition)> = (0..n)
                    .filter(|&a| state >> a & 1 == 1)
                    .map(|a| {
                        let target = state & !(1 << a);
                        (target, transition(src, &resolutions[target as usize], &crossings[a]))
                    })
                    .collect();
                let gens = 1usize << src.count();
                let mut out = StateImages {
                    keys: Vec::with_capacity(gens),
                    offsets: Vec::with_capacity(gens + 1),
                    cols: Vec::new(),
                };
                out.offsets.push(0);
                for signs in 0u64..gens as u64 {
                    let (i, j) = grade_of(&Generator { state, signs })?;
                    for (target, tr) in &moves {
                        let (imgs, count) = images(tr, signs);
                        for &t_signs in &imgs[..count] {
                            if grade_of(&Generator { state: *target, signs: t_signs })? != (i + 1, j) {
                                return Err(KhError::Bidegree);
                            }
                            out.cols.push(index[*target as usize][t_signs as usize]);
                        }
                    }
                    out.keys.push((i, j));
                    out.offsets.push(out.cols.len());
                }
                Ok(out)
            })
            .collect::<Result<_, _>>()?;

        let mut differentials: BTreeMap<(i32, i32), SparseMatrix> = bases
            .keys()
            .map(|&(i, j)| ((i, j), SparseMatrix::new(bases.get(&(i + 1, j)).map_or(0, Vec::len))))
            .collect();
        for s in &per_state {
            for (k, key) in s.keys.iter().enumerate() {
                differentials.get_mut(key).expect("block exists").push_row(&s.cols[s.offsets[k]..s.offsets[k + 1]]);
            }
        }
        Ok(Self { letters: n, writhe, resolutions, bases, differentials })
    }

    pub fn writhe(&self) -> i32 {
        self.writhe
    }

    /// Bidegrees with a nonempty basis.
    pub fn bidegrees(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.bases.keys().copied()
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.bases.get(&(i, j)).map_or(0, Vec::len)
    }

    /// The basis of `C^{i,j}`, ordered by (state mask, sign mask).
    pub fn basis(&self, i: i32, j: i32) -> Vec<EnhancedState> {
        self.bases
            .get(&(i, j))
            .into_iter()
            .flatten()
            .map(|g| {
                let resolved = self.resolutions[g.state as usize].clone();
                let signs = (0..resolved.count()).map(|c| if g.signs >> c & 1 == 1 { 1 } else { -1 }).collect();
                EnhancedState { state: State::from_mask(g.state, self.letters).expect("fits"), signs, resolved }
            })
            .collect()
    }

    /// `d: C^{i,j} → C^{i+1,j}` with rows indexing the source basis.
    pub fn differential(&self, i: i32, j: i32) -> BitMatrix {
        match self.differentials.get(&(i, j)) {
            Some(m) => m.to_dense(),
            None => BitMatrix::zeros(0, self.dim(i + 1, j)),
        }
    }

    pub fn sparse_differential(&self, i: i32, j: i32) -> Option<&SparseMatrix> {
        self.differentials.get(&(i, j))
    }

    pub fn check_square_zero(&self) -> Result<(), KhError> {
        for (&(i, j), d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(i + 1, j)) {
                if !d.product_is_zero(next) {
                    return Err(KhError::SquareNonZero { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> KhTable {
        let ranks: BTreeMap<(i32, i32), usize> =
            self.differentials.par_iter().map(|(&k, d)| (k, d.rank())).collect::<Vec<_>>().into_iter().collect();
        let mut entries = BTreeMap::new();
        for (&(i, j), basis) in &self.bases {
            let out = ranks.get(&(i, j)).copied().unwrap_or(0);
            let inc = ranks.get(&(i - 1, j)).copied().unwrap_or(0);
            let dim = basis.len() - out - inc;
            if dim > 0 {
                entries.insert((i, j), dim);
            }
        }
        KhTable { entries }
    }

    /// `Σ (−1)^i dim C^{i,j} q^j`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&[Var::Q]);
        for (&(i, j), b) in &self.bases {
            out.add_term(vec![j], if i % 2 == 0 { 1 } else { -1 } * b.len() as i64);
        }
        out
    }
}

/// Nonzero `dim KH^{i,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KhTable {
    entries: BTreeMap<(i32, i32), usize>,
}

impl KhTable {
    pub fn from_entries(entries: impl IntoIterator<Item = ((i32, i32), usize)>) -> Self {
        Self { entries: entries.into_iter().filter(|&(_, d)| d > 0).collect() }
    }

    pub fn get(&self, i: i32, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(i32, i32), usize> {
        &self.entries
    }

    /// Entries ordered by `(j, i)`.
    pub fn rows(&self) -> Vec<(i32, i32, usize)> {
        let mut v: Vec<_> = self.entries.iter().map(|(&(i, j), &d)| (i, j, d)).collect();
        v.sort_by_key(|&(i, j, _)| (j, i));
        v
    }

    /// `Σ (−1)^i dim KH^{i,j} q^j`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&[Var::Q]);
        for (&(i, j), &d) in &self.entries {
            out.add_term(vec![j], if i % 2 == 0 { 1 } else { -1 } * d as i64);
        }
        out
    }

    /// First `(i, j)` in `(j, i)` order where the two tables differ.
    pub fn first_difference(&self, other: &KhTable) -> Option<(i32, i32, usize, usize)> {
        let mut keys: Vec<(i32, i32)> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.sort_by_key(|&(i, j)| (j, i));
        keys.dedup();
        keys.into_iter().map(|(i, j)| (i, j, self.get(i, j), other.get(i, j))).find(|&(_, _, a, b)| a != b)
    }
}

impl fmt::Display for KhTable {
    /// Tab-separated `i j dim` with a header row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "i\tj\tdim")?;
        for (i, j, d) in self.rows() {
            writeln!(f, "{i}\t{j}\t{d}")?;
        }
        Ok(())
    }
}

/// Builds the complex, checks `d∘d = 0` and returns the homology table.
pub fn homology_with_cap(p: &Nanophrase, cap: usize) -> Result<KhTable, KhError> {
    let c = ChainComplex::build(p, cap)?;
    c.check_square_zero()?;
    Ok(c.homology())
}

pub fn homology(p: &Nanophrase) -> Result<KhTable, KhError> {
    homology_with_cap(p, DEFAULT_MAX_LETTERS)
}

pub fn euler_characteristic(p: &Nanophrase) -> Result<LaurentPoly, KhError> {
    Ok(ChainComplex::build(p, DEFAULT_MAX_LETTERS)?.euler_characteristic())
}
