//! Dense complex frame matrix (subcarriers × symbols) and its file formats.
//!
//! Storage is column-major: each OFDM symbol is one contiguous column.
//!
//! CSV layout: header `row,col,re,im`, then one line per entry in row-major
//! order. Binary layout (little endian): the 8-byte magic `PCSNSCMX`, `u32`
//! format version (1), `u64` rows, `u64` cols, then `rows·cols` pairs of
//! `f64` (re, im) in row-major order.

use std::io::{Read, Write};
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MATRIX_MAGIC: &[u8; 8] = b"PCSNSCMX";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl SymbolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn filled(rows: usize, cols: usize, value: Complex64) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds a matrix from `f(row, col)` with 0-based indices.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn col(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [Complex64] {
        let rows = self.rows;
        &mut self.data[c * rows..(c + 1) * rows]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.data.iter()
    }

    pub(crate) fn ensure_dims(&self, rows: usize, cols: usize) -> Result<()> {
        if self.dims() != (rows, cols) {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols}"),
                actual: format!("{}x{}", self.rows, self.cols),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        other.ensure_dims(self.rows, self.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Element-wise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Element-wise quotient, without any guard on the divisor.
    pub fn hadamard_div(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * k).collect() }
    }

    /// Rows `start..start + len` as a new matrix.
    pub fn row_block(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.rows, "row block out of bounds");
        let mut data = Vec::with_capacity(len * self.cols);
        for c in 0..self.cols {
            data.extend_from_slice(&self.col(c)[start..start + len]);
        }
        Self { rows: len, cols: self.cols, data }
    }

    /// Stacks blocks vertically, first block on top.
    pub fn vstack(blocks: &[SymbolMatrix]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let cols = first.cols;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    actual: format!("{} columns", b.cols),
                });
            }
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for b in blocks {
                data.extend_from_slice(b.col(c));
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// ‖self − other‖_F / ‖other‖_F.
    pub fn relative_error(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?.frobenius_norm();
        let norm = other.frobenius_norm();
        Ok(if norm == 0.0 { diff } else { diff / norm })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        other.ensure_dims(self.rows, self.cols)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Smallest entry magnitude with its (row, col), or `None` when empty.
    pub fn min_abs(&self) -> Option<(usize, usize, f64)> {
        self.data
            .iter()
            .enumerate()
            .map(|(i, z)| (i % self.rows.max(1), i / self.rows.max(1), z.norm()))
            .min_by(|a, b| a.2.total_cmp(&b.2))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self[(r, c)];
                writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
            }
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MATRIX_MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.cols as u64).to_le_bytes())?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self[(r, c)];
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic)?;
        if &magic != MATRIX_MAGIC {
            return Err(Error::Format("bad matrix magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported matrix format version {version}")));
        }
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let mut m = Self::zeros(rows, cols);
        for row in 0..rows {
            for col in 0..cols {
                let re = read_f64(&mut r)?;
                let im = read_f64(&mut r)?;
                m[(row, col)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }
}

impl Index<(usize, usize)> for SymbolMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[c * self.rows + r]
    }
}

impl IndexMut<(usize, usize)> for SymbolMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[c * self.rows + r]
    }
}

pub(crate) fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| Error::Format(format!("truncated input: {e}")))
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}
