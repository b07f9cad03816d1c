//! Dense linear algebra over GF(2).
//!
//! Vectors are packed into `u64` blocks, bit `k` living in block `k / 64`
//! at position `k % 64`. Bits past `len` are always zero, so equality,
//! hashing and popcounts never see stale data.
//!
//! [`Gf2Basis`] keeps its rows in reduced row echelon form and grows one
//! vector at a time. Pivots are the lowest set bit of each row. Every row
//! also carries its expression over the accepted originals, which is what
//! makes [`Gf2Basis::coords`] and dependency certificates cheap.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

const BLOCK_BITS: usize = 64;

#[inline]
fn blocks_for(len: usize) -> usize {
    len.div_ceil(BLOCK_BITS)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    blocks: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            blocks: vec![0; blocks_for(len)],
        }
    }

    /// Vector of length `len` with every bit set.
    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            blocks: vec![u64::MAX; blocks_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Unit vector `e_bit`.
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    /// Builds a vector from the positions of its set bits.
    ///
    /// Repeated positions toggle, matching addition over GF(2).
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for k in ones {
            v.toggle(k);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b {
                v.set(k, true);
            }
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len, "bit {k} out of range for length {}", self.len);
        (self.blocks[k / BLOCK_BITS] >> (k % BLOCK_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, value: bool) {
        assert!(k < self.len, "bit {k} out of range for length {}", self.len);
        let mask = 1u64 << (k % BLOCK_BITS);
        if value {
            self.blocks[k / BLOCK_BITS] |= mask;
        } else {
            self.blocks[k / BLOCK_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, k: usize) {
        assert!(k < self.len, "bit {k} out of range for length {}", self.len);
        self.blocks[k / BLOCK_BITS] ^= 1u64 << (k % BLOCK_BITS);
    }

    /// `self ^= other`. Panics on a length mismatch.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(w, b)| w * BLOCK_BITS + b.trailing_zeros() as usize)
    }

    /// Iterates the positions of set bits in increasing order.
    pub fn iter_ones(&self) -> Ones<'_> {
        Ones {
            blocks: &self.blocks,
            word: 0,
            current: self.blocks.first().copied().unwrap_or(0),
        }
    }

    /// Parity of the bits in `start..end`.
    pub fn parity_range(&self, start: usize, end: usize) -> bool {
        assert!(
            start <= end && end <= self.len,
            "range {start}..{end} out of bounds"
        );
        if start == end {
            return false;
        }
        let (first, last) = (start / BLOCK_BITS, (end - 1) / BLOCK_BITS);
        let mut acc = 0u32;
        for w in first..=last {
            let mut b = self.blocks[w];
            if w == first {
                b &= u64::MAX << (start % BLOCK_BITS);
            }
            if w == last {
                let top = end - w * BLOCK_BITS;
                if top < BLOCK_BITS {
                    b &= (1u64 << top) - 1;
                }
            }
            acc ^= b.count_ones() & 1;
        }
        acc == 1
    }

    /// Whether any bit in `start..end` is set.
    pub fn any_in_range(&self, start: usize, end: usize) -> bool {
        assert!(
            start <= end && end <= self.len,
            "range {start}..{end} out of bounds"
        );
        if start == end {
            return false;
        }
        let (first, last) = (start / BLOCK_BITS, (end - 1) / BLOCK_BITS);
        (first..=last).any(|w| {
            let mut b = self.blocks[w];
            if w == first {
                b &= u64::MAX << (start % BLOCK_BITS);
            }
            if w == last {
                let top = end - w * BLOCK_BITS;
                if top < BLOCK_BITS {
                    b &= (1u64 << top) - 1;
                }
            }
            b != 0
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let mut acc = 0u64;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Copies bits `start..start + len` into a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of bounds");
        let mut out = BitVec::zeros(len);
        if start.is_multiple_of(BLOCK_BITS) {
            let w0 = start / BLOCK_BITS;
            out.blocks
                .copy_from_slice(&self.blocks[w0..w0 + blocks_for(len)]);
            out.clear_tail();
        } else {
            for k in self.range_ones(start, start + len) {
                out.set(k - start, true);
            }
        }
        out
    }

    /// Set bits within `start..end`, increasing.
    pub fn range_ones(&self, start: usize, end: usize) -> impl Iterator<Item = usize> + '_ {
        self.iter_ones()
            .skip_while(move |&k| k < start)
            .take_while(move |&k| k < end)
    }

    /// Appends `extra` zero bits.
    pub fn grow(&mut self, extra: usize) {
        self.len += extra;
        self.blocks.resize(blocks_for(self.len), 0);
    }

    /// Vector of length `len + 1` with `bit` appended at the end.
    pub fn with_appended(&self, bit: bool) -> BitVec {
        let mut out = self.clone();
        out.grow(1);
        if bit {
            out.set(self.len, true);
        }
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % BLOCK_BITS;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}; ", self.len)?;
        for k in 0..self.len {
            f.write_str(if self.get(k) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

pub struct Ones<'a> {
    blocks: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * BLOCK_BITS + bit);
            }
            self.word += 1;
            self.current = *self.blocks.get(self.word)?;
        }
    }
}

/// Outcome of [`Gf2Basis::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent and is now original number `index`.
    Extended { index: usize },
    /// The vector is the xor of the originals selected by the coefficients.
    Dependent(BitVec),
}

const NO_ROW: usize = usize::MAX;

/// Incrementally grown basis of a subspace of `B^dim`.
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    dim: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the row whose pivot is column `c`, or `NO_ROW`.
    pivot_row: Vec<usize>,
    /// `combos[k]` expresses `rows[k]` over `originals`.
    combos: Vec<BitVec>,
    originals: Vec<BitVec>,
}

impl Gf2Basis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NO_ROW; dim],
            combos: Vec::new(),
            originals: Vec::new(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The accepted (linearly independent) vectors in insertion order.
    pub fn originals(&self) -> &[BitVec] {
        &self.originals
    }

    /// Reduced echelon rows, in insertion order.
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Pivot column of each row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &BitVec) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Reduces `v` against the rows in place, returning the combination of
    /// originals that was subtracted.
    fn reduce(&self, v: &mut BitVec) -> BitVec {
        let mut combo = BitVec::zeros(self.originals.len());
        for (k, row) in self.rows.iter().enumerate() {
            if v.get(self.pivots[k]) {
                v.xor_assign(row);
                combo.xor_assign(&self.combos[k]);
            }
        }
        combo
    }

    /// Adds `v` to the basis if it extends the span.
    pub fn insert(&mut self, v: BitVec) -> Result<Insertion> {
        self.check_len(&v)?;
        let mut reduced = v.clone();
        let mut combo = self.reduce(&mut reduced);
        let Some(pivot) = reduced.first_one() else {
            return Ok(Insertion::Dependent(combo));
        };

        // reduced = v ^ (rows picked by combo), so its expression is combo + new original.
        let index = self.originals.len();
        self.originals.push(v);
        for c in &mut self.combos {
            c.grow(1);
        }
        combo.grow(1);
        combo.set(index, true);

        for k in 0..self.rows.len() {
            if self.rows[k].get(pivot) {
                self.rows[k].xor_assign(&reduced);
                self.combos[k].xor_assign(&combo);
            }
        }
        self.pivot_row[pivot] = self.rows.len();
        self.rows.push(reduced);
        self.pivots.push(pivot);
        self.combos.push(combo);
        Ok(Insertion::Extended { index })
    }

    /// Coefficients over the originals reproducing `v`, or `None` when `v` is
    /// outside the span.
    pub fn coords(&self, v: &BitVec) -> Result<Option<BitVec>> {
        self.check_len(v)?;
        let mut reduced = v.clone();
        let combo = self.reduce(&mut reduced);
        Ok(reduced.is_zero().then_some(combo))
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        self.check_len(v)?;
        let mut reduced = v.clone();
        self.reduce(&mut reduced);
        Ok(reduced.is_zero())
    }

    /// Xor of the originals selected by `coeffs`.
    pub fn combine(&self, coeffs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim);
        for k in coeffs.iter_ones() {
            out.xor_assign(&self.originals[k]);
        }
        out
    }

    /// Row with pivot `column`, if one exists.
    pub fn row_for_pivot(&self, column: usize) -> Option<&BitVec> {
        match self.pivot_row.get(column) {
            Some(&k) if k != NO_ROW => Some(&self.rows[k]),
            _ => None,
        }
    }
}

/// Rank of a list of equal-length vectors.
pub fn rank(vs: &[BitVec]) -> Result<usize> {
    let Some(first) = vs.first() else {
        return Ok(0);
    };
    let mut basis = Gf2Basis::new(first.len());
    for v in vs {
        basis.insert(v.clone())?;
    }
    Ok(basis.rank())
}

/// Solution set of a consistent linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// One solution, with every free variable set to zero.
    pub particular: BitVec,
    /// Basis of the homogeneous solution space.
    pub nullspace: Vec<BitVec>,
    /// Rank of the coefficient matrix.
    pub rank: usize,
}

/// Solves `A x = b` where `rows[r]` is row `r` of `A` over `num_vars`
/// variables and `rhs[r]` is `b_r`. Returns `None` when inconsistent.
pub fn solve(num_vars: usize, rows: &[BitVec], rhs: &BitVec) -> Result<Option<Solution>> {
    if rhs.len() != rows.len() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            found: rhs.len(),
        });
    }
    let mut echelon = Gf2Basis::new(num_vars + 1);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != num_vars {
            return Err(Error::LengthMismatch {
                expected: num_vars,
                found: row.len(),
            });
        }
        echelon.insert(row.with_appended(rhs.get(r)))?;
        // Pivot in the rhs column means a reduced row 0 = 1.
        if echelon.row_for_pivot(num_vars).is_some() {
            return Ok(None);
        }
    }
    Ok(Some(solution_from_echelon(&echelon, num_vars)))
}

fn solution_from_echelon(echelon: &Gf2Basis, num_vars: usize) -> Solution {
    let mut particular = BitVec::zeros(num_vars);
    let mut is_pivot = vec![false; num_vars];
    for (row, &p) in echelon.rows().iter().zip(echelon.pivots()) {
        is_pivot[p] = true;
        if row.get(num_vars) {
            particular.set(p, true);
        }
    }
    let mut nullspace = Vec::new();
    for free in (0..num_vars).filter(|&c| !is_pivot[c]) {
        let mut x = BitVec::unit(num_vars, free);
        for (row, &p) in echelon.rows().iter().zip(echelon.pivots()) {
            if row.get(free) {
                x.set(p, true);
            }
        }
        nullspace.push(x);
    }
    Solution {
        particular,
        nullspace,
        rank: echelon.rank(),
    }
}

/// `A x` for `A` given by rows.
pub fn mul_rows(rows: &[BitVec], x: &BitVec) -> BitVec {
    BitVec::from_bools(&rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
}
