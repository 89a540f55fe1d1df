//! Matrices over the two-element field, rows packed 64 bits per word.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// Adds 1 at `(r, c)` modulo 2.
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r * self.words_per_row + c / 64] ^= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Column indices of the set bits of a row.
    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Row-vector convention: `(self · other)[r] = Σ_{c ∈ row r} other[c]`.
    /// Requires `self.cols() == other.rows()`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let start = r * out.words_per_row;
            for c in self.row_ones(r) {
                for (dst, src) in out.data[start..start + out.words_per_row].iter_mut().zip(other.row(c)) {
                    *dst ^= src;
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination, pivoting on the lowest available column.
    /// Rank over GF(2), see [`sparse_rank`].
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<u32>> = (0..self.rows).rev().map(|r| self.row_ones(r).map(|c| c as u32).collect()).collect();
        sparse_rank(rows.iter().map(Vec::as_slice), self.cols)
    }
}

/// Rank of the rows given as strictly increasing column lists below `cols`.
/// Each row is reduced by the pivot row owning its lowest column until it
/// vanishes or claims that column.
pub fn sparse_rank<'a>(rows: impl IntoIterator<Item = &'a [u32]>, cols: usize) -> usize {
    let mut pivots: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let mut rank = 0;
    let (mut row, mut scratch) = (Vec::new(), Vec::new());
    for r in rows {
        row.clear();
        row.extend_from_slice(r);
        while let Some(&low) = row.first() {
            let p = &pivots[low as usize];
            if p.is_empty() {
                pivots[low as usize] = std::mem::take(&mut row);
                rank += 1;
                break;
            }
            xor_into(&row, p, &mut scratch);
            std::mem::swap(&mut row, &mut scratch);
        }
    }
    rank
}

/// A matrix stored row by row as sorted column indices of its ones,
/// packed into one array with row offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    offsets: Vec<usize>,
    entries: Vec<u32>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        Self { cols, offsets: vec![0], entries: Vec::new() }
    }

    /// Builds from unsorted entry lists; repeated entries cancel in pairs.
    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::new(cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    /// Appends a row given as unsorted column indices; repeated entries
    /// cancel in pairs.
    pub fn push_row(&mut self, row: &[u32]) {
        let start = self.entries.len();
        self.entries.extend_from_slice(row);
        self.entries[start..].sort_unstable();
        let mut w = start;
        for k in start..self.entries.len() {
            let c = self.entries[k];
            assert!((c as usize) < self.cols, "column {c} out of range");
            if w > start && self.entries[w - 1] == c {
                w -= 1;
            } else {
                self.entries[w] = c;
                w += 1;
            }
        }
        self.entries.truncate(w);
        self.offsets.push(w);
    }

    pub fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[self.offsets[r]..self.offsets[r + 1]]
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        sparse_rank((0..self.rows()).rev().map(|r| self.row(r)), self.cols)
    }

    /// Whether `self · next` vanishes (row-vector convention).
    pub fn product_is_zero(&self, next: &SparseMatrix) -> bool {
        assert_eq!(self.cols, next.rows(), "dimension mismatch");
        let mut acc = vec![0u64; next.cols.div_ceil(64)];
        (0..self.rows()).all(|r| {
            acc.iter_mut().for_each(|w| *w = 0);
            for &k in self.row(r) {
                for &c in next.row(k as usize) {
                    acc[c as usize / 64] ^= 1 << (c % 64);
                }
            }
            acc.iter().all(|&w| w == 0)
        })
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows(), self.cols);
        for r in 0..self.rows() {
            for &c in self.row(r) {
                m.set(r, c as usize, true);
            }
        }
        m
    }
}

fn xor_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
