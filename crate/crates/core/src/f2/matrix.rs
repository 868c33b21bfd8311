use std::fmt;

/// Dense bit matrix over GF(2), row-major. Column `c` of a row is bit `c % 64`
/// of word `c / 64`.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Rows written as strings of `0`/`1`, column 0 first.
    pub fn from_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, s) in rows.iter().enumerate() {
            assert_eq!(s.len(), cols, "ragged row {r}");
            for (c, ch) in s.chars().enumerate() {
                m.set(r, c, ch == '1');
            }
        }
        m
    }

    /// A `4 x w` (or `n x w`) matrix whose rows are `w`-bit words,
    /// column 0 = most significant bit.
    pub fn from_words_msb_first(words: &[u32], w: u32) -> Self {
        let w = w as usize;
        let mut m = Self::zeros(words.len(), w);
        for (r, &x) in words.iter().enumerate() {
            for c in 0..w {
                m.set(r, c, (x >> (w - 1 - c)) & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// `rows[dst] ^= rows[src]`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src);
        for k in 0..self.stride {
            let s = self.bits[src * self.stride + k];
            self.bits[dst * self.stride + k] ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    /// `self * x` for a column vector `x` of `cols` bits.
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| x[c] && self.get(r, c)).count() % 2 == 1)
            .collect()
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        out
    }

    /// Rank over GF(2) by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        let mut rank = 0;
        let mut row = vec![0u64; self.stride];
        for r in 0..self.rows {
            row.copy_from_slice(self.row(r));
            if basis.insert(&mut row) {
                rank += 1;
            }
        }
        rank
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Row-echelon basis grown one row at a time.
///
/// Each stored row has a distinct pivot (its lowest set column) and no bits
/// below it, so reducing a new row touches only the words at or after each pivot.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    stride: usize,
    rows: Vec<u64>,
    pivot_row: Vec<u32>,
}

const NO_PIVOT: u32 = u32::MAX;

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        Self { stride: cols.div_ceil(64), rows: Vec::new(), pivot_row: vec![NO_PIVOT; cols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len() / self.stride.max(1)
    }

    /// Reduce `row` against the basis; if it stays nonzero, add it and return true.
    /// `row` is left in its reduced form either way.
    pub fn insert(&mut self, row: &mut [u64]) -> bool {
        assert_eq!(row.len(), self.stride);
        let s = self.stride;
        let mut wi = 0;
        while wi < s {
            let w = row[wi];
            if w == 0 {
                wi += 1;
                continue;
            }
            let c = wi * 64 + w.trailing_zeros() as usize;
            let pr = self.pivot_row[c];
            if pr == NO_PIVOT {
                self.pivot_row[c] = (self.rows.len() / s) as u32;
                self.rows.extend_from_slice(row);
                return true;
            }
            let base = pr as usize * s;
            for (d, b) in row[wi..].iter_mut().zip(&self.rows[base + wi..base + s]) {
                *d ^= b;
            }
        }
        false
    }
}
