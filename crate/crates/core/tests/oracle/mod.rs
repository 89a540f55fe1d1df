//! Brute-force reference computations, independent of the word-rewriting
//! resolution: crossings are smoothed directly on arcs with a union-find,
//! and homology is taken from dense matrices.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nanokh::{LaurentPoly, Nanophrase, Var};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }
}

/// Arcs are numbered along the phrase: one per position (the arc leaving
/// it) and one closed arc per empty word. Returns, per letter, the arcs
/// `[out1, in1, out2, in2]`, and the arc count.
pub fn crossings(p: &Nanophrase) -> (Vec<[usize; 4]>, usize) {
    let mut out = vec![Vec::new(); p.letter_count()];
    let mut next = 0;
    for w in p.words() {
        if w.is_empty() {
            next += 1;
            continue;
        }
        let n = w.len();
        for (k, l) in w.iter().enumerate() {
            out[l.0].push(next + k);
            out[l.0].push(next + (k + n - 1) % n);
        }
        next += n;
    }
    (out.into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect(), next)
}

/// Components of the smoothing where `plus` has bit `a` set for marker
/// `+1` at letter `a`. Same-sign marker joins `in1–out2` and `in2–out1`,
/// opposite sign joins `in1–in2` and `out1–out2`.
pub fn components(p: &Nanophrase, plus: u64) -> Vec<Vec<usize>> {
    let signs = p.signs().unwrap();
    let (cr, arcs) = crossings(p);
    let mut uf = UnionFind::new(arcs);
    for (a, &[o1, i1, o2, i2]) in cr.iter().enumerate() {
        let mark = if plus >> a & 1 == 1 { 1 } else { -1 };
        if mark == signs[a] {
            uf.union(i1, o2);
            uf.union(i2, o1);
        } else {
            uf.union(i1, i2);
            uf.union(o1, o2);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..arcs {
        let r = uf.find(x);
        groups.entry(r).or_default().push(x);
    }
    let mut v: Vec<Vec<usize>> = groups.into_values().collect();
    v.sort();
    v
}

pub fn bracket_t(p: &Nanophrase) -> LaurentPoly {
    let n = p.letter_count();
    let d = LaurentPoly::from_terms(Var::T, &[(2, -1), (-2, -1)]);
    let mut out = LaurentPoly::zero(&[Var::T]);
    for plus in 0u64..1 << n {
        let sigma = 2 * plus.count_ones() as i32 - n as i32;
        let k = components(p, plus).len() as u32;
        out += &d.pow(k - 1).shift(sigma, 1);
    }
    out
}

#[derive(Clone, Debug)]
pub struct Enhanced {
    pub plus: u64,
    pub comps: Vec<Vec<usize>>,
    pub signs: Vec<i8>,
    pub i: i32,
    pub j: i32,
}

pub fn enhanced(p: &Nanophrase) -> Vec<Enhanced> {
    let n = p.letter_count();
    let w = p.writhe().unwrap();
    let mut out = Vec::new();
    for plus in 0u64..1 << n {
        let comps = components(p, plus);
        let sigma = 2 * plus.count_ones() as i32 - n as i32;
        for m in 0u64..1 << comps.len() {
            let signs: Vec<i8> = (0..comps.len()).map(|k| if m >> k & 1 == 1 { 1 } else { -1 }).collect();
            let tau: i32 = signs.iter().map(|&s| s as i32).sum();
            assert_eq!((w - sigma) % 2, 0);
            out.push(Enhanced {
                plus,
                comps: comps.clone(),
                signs,
                i: (w - sigma) / 2,
                j: -(sigma + 2 * tau - 3 * w) / 2,
            });
        }
    }
    out
}

/// Mod-2 incidence: one `+ → −` change, untouched circles carried with
/// their signs, and the merge/split sign rules on the circles through the
/// changed crossing.
pub fn incidence(p: &Nanophrase, s: &Enhanced, t: &Enhanced) -> bool {
    let diff = s.plus ^ t.plus;
    if diff.count_ones() != 1 || s.plus & diff == 0 {
        return false;
    }
    let (cr, _) = crossings(p);
    let at = cr[diff.trailing_zeros() as usize];
    let split = |e: &Enhanced| {
        let mut near = Vec::new();
        let mut far = Vec::new();
        for (c, &sg) in e.comps.iter().zip(&e.signs) {
            if at.iter().any(|a| c.contains(a)) {
                near.push(sg);
            } else {
                far.push((c.clone(), sg));
            }
        }
        far.sort();
        (near, far)
    };
    let (sn, sf) = split(s);
    let (tn, tf) = split(t);
    if sf != tf {
        return false;
    }
    let count = |v: &[i8]| v.iter().filter(|&&x| x > 0).count();
    match (sn.len(), tn.len()) {
        (2, 1) => match count(&sn) {
            0 => tn[0] < 0,
            1 => tn[0] > 0,
            _ => false,
        },
        (1, 2) => {
            if sn[0] > 0 {
                count(&tn) == 2
            } else {
                count(&tn) == 1
            }
        }
        _ => false,
    }
}

fn dense_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] == 1) {
            rows.swap(rank, piv);
            for r in 0..rows.len() {
                if r != rank && rows[r][c] == 1 {
                    for k in 0..cols {
                        rows[r][k] ^= rows[rank][k];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

pub struct Homology {
    pub table: BTreeMap<(i32, i32), usize>,
    pub square_zero: bool,
}

pub fn homology(p: &Nanophrase) -> Homology {
    let all = enhanced(p);
    let mut blocks: BTreeMap<(i32, i32), Vec<&Enhanced>> = BTreeMap::new();
    for e in &all {
        blocks.entry((e.i, e.j)).or_default().push(e);
    }
    let matrix = |(i, j): (i32, i32)| -> Vec<Vec<u8>> {
        let src = blocks.get(&(i, j)).cloned().unwrap_or_default();
        let dst = blocks.get(&(i + 1, j)).cloned().unwrap_or_default();
        src.iter().map(|s| dst.iter().map(|t| incidence(p, s, t) as u8).collect()).collect()
    };
    let mut square_zero = true;
    let mut table = BTreeMap::new();
    for (&(i, j), b) in &blocks {
        let d = matrix((i, j));
        let e = matrix((i + 1, j));
        for row in &d {
            for k in 0..e.first().map_or(0, Vec::len) {
                let v = row.iter().zip(&e).fold(0u8, |acc, (&x, r)| acc ^ (x & r[k]));
                square_zero &= v == 0;
            }
        }
        let dim = b.len() - dense_rank(d) - dense_rank(matrix((i - 1, j)));
        if dim > 0 {
            table.insert((i, j), dim);
        }
    }
    Homology { table, square_zero }
}
