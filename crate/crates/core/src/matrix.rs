//! Dense real matrices and the three ensemble builders.
//!
//! Binary layout written by [`write_binary`] (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic b"RMTM"
//! 4       4     format version, u32 = 1
//! 8       8     rows, u64
//! 16      8     cols, u64
//! 24      8*r*c entries, f64 row-major
//! ```

use std::io::{Read, Write};

use crate::error::{invalid, Error, Result};
use crate::field::{FieldSample, FieldShape};

const MAGIC: &[u8; 4] = b"RMTM";
const FORMAT_VERSION: u32 = 1;

/// Symmetric matrix, full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Builds from the lower triangle `f(i, j)`, `j <= i`, 0-based.
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Full row-major data; rejects asymmetric input.
    pub fn from_full(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} matrix needs {} entries",
                n * n
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return invalid(format!("matrix not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and its mirror, 0-based.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Lower triangle in lex order, scaled back by `sqrt(n)`: the entry
    /// vector `x` with `A_n(x) = self`.
    pub fn to_entry_vector(&self) -> Vec<f64> {
        let s = (self.n as f64).sqrt();
        let mut v = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in 0..=i {
                v.push(self.get(i, j) * s);
            }
        }
        v
    }

    pub fn write_binary(&self, w: impl Write) -> Result<()> {
        write_binary(w, self.n, self.n, &self.data)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        write_csv(w, self.n, &self.data)
    }
}

/// `p x n` real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RectMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return invalid("matrix entries must be finite");
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_field(field: &FieldSample) -> Result<Self> {
        match field.shape {
            FieldShape::Rectangular { p, n } => Self::new(p, n, field.entries.clone()),
            FieldShape::Triangular { .. } => invalid("covariance ensembles need a rectangular panel"),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> RectMatrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        RectMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn write_binary(&self, w: impl Write) -> Result<()> {
        write_binary(w, self.rows, self.cols, &self.data)
    }
}

/// `X_n / sqrt(n)` with `(X_n)_ij = X_ij` for `i >= j`, mirrored above.
pub fn build_wigner(field: &FieldSample) -> Result<SymMatrix> {
    let n = match field.shape {
        FieldShape::Triangular { n } => n,
        FieldShape::Rectangular { .. } => return invalid("Wigner ensemble needs a triangular field"),
    };
    let scale = 1.0 / (n as f64).sqrt();
    let mut it = field.entries.iter();
    Ok(SymMatrix::from_lower(n, |_, _| {
        it.next().copied().unwrap_or(0.0) * scale
    }))
}

/// Sample covariance `A = X X^T / n`, order `p`.
pub fn build_cov(x: &RectMatrix) -> SymMatrix {
    let (p, n) = (x.rows, x.cols);
    let inv = 1.0 / n as f64;
    let mut a = SymMatrix::zeros(p);
    for i in 0..p {
        let ri = &x.data[i * n..(i + 1) * n];
        for j in 0..=i {
            let rj = &x.data[j * n..(j + 1) * n];
            let dot: f64 = ri.iter().zip(rj).map(|(u, v)| u * v).sum();
            a.set(i, j, dot * inv);
        }
    }
    a
}

/// Symmetrized block matrix `n^{-1/2} [[0, X^T], [X, 0]]` of order `n + p`.
pub fn build_sym_bn(x: &RectMatrix) -> SymMatrix {
    let (p, n) = (x.rows, x.cols);
    let scale = 1.0 / (n as f64).sqrt();
    let mut b = SymMatrix::zeros(n + p);
    for i in 0..p {
        for j in 0..n {
            b.set(n + i, j, x.get(i, j) * scale);
        }
    }
    b
}

fn write_binary(mut w: impl Write, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(rows as u64).to_le_bytes())?;
    w.write_all(&(cols as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads the binary layout back as `(rows, cols, row-major data)`.
pub fn read_binary(mut r: impl Read) -> Result<(usize, usize, Vec<f64>)> {
    let mut head = [0u8; 24];
    r.read_exact(&mut head)?;
    if &head[0..4] != MAGIC {
        return invalid("not an RMTM matrix file");
    }
    let version = u32::from_le_bytes(head[4..8].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return invalid(format!("unsupported matrix format version {version}"));
    }
    let rows = u64::from_le_bytes(head[8..16].try_into().expect("8 bytes")) as usize;
    let cols = u64::from_le_bytes(head[16..24].try_into().expect("8 bytes")) as usize;
    let mut data = vec![0.0; rows * cols];
    let mut buf = [0u8; 8];
    for v in data.iter_mut() {
        r.read_exact(&mut buf)?;
        *v = f64::from_le_bytes(buf);
    }
    Ok((rows, cols, data))
}

fn write_csv(mut w: impl Write, cols: usize, data: &[f64]) -> Result<()> {
    for row in data.chunks(cols) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: usize, entries: Vec<f64>) -> FieldSample {
        FieldSample::from_lex(n, entries, None).unwrap()
    }

    #[test]
    fn wigner_order_one() {
        let m = build_wigner(&field(1, vec![2.0])).unwrap();
        assert_eq!(m.as_slice(), &[2.0]);
    }

    #[test]
    fn wigner_single_offdiagonal() {
        let mut e = vec![0.0; 10];
        e[1] = 3.0; // (2,1)
        let m = build_wigner(&field(4, e)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (1, 0) || (i, j) == (0, 1) { 1.5 } else { 0.0 };
                assert_eq!(m.get(i, j), expect);
            }
        }
    }

    #[test]
    fn wigner_frobenius_identity_and_symmetry() {
        let n = 7;
        let e: Vec<f64> = (0..28).map(|k| ((k * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let f = field(n, e.clone());
        let m = build_wigner(&f).unwrap();
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 1..=n {
            for j in 1..=i {
                let x = f.get(i, j);
                if i == j {
                    diag += x * x;
                } else {
                    off += x * x;
                }
            }
        }
        let expect = (diag + 2.0 * off) / n as f64;
        assert!((m.frobenius_sq() - expect).abs() < 1e-12);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(m.get(i, j).to_bits(), m.get(j, i).to_bits());
            }
        }
        assert_eq!(m.to_entry_vector().len(), e.len());
    }

    #[test]
    fn wigner_rejects_panel() {
        let f = FieldSample::from_panel(2, 3, vec![0.0; 6]).unwrap();
        assert!(build_wigner(&f).is_err());
    }

    #[test]
    fn cov_of_identity() {
        let x = RectMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let a = build_cov(&x);
        assert_eq!(a.as_slice(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn sym_bn_layout() {
        let x = RectMatrix::new(1, 2, vec![2.0, 4.0]).unwrap();
        let b = build_sym_bn(&x);
        let s = 1.0 / 2f64.sqrt();
        assert_eq!(b.order(), 3);
        assert_eq!(b.get(2, 0), 2.0 * s);
        assert_eq!(b.get(0, 2), 2.0 * s);
        assert_eq!(b.get(2, 1), 4.0 * s);
        assert_eq!(b.get(0, 1), 0.0);
        assert_eq!(b.get(2, 2), 0.0);
    }

    #[test]
    fn binary_roundtrip() {
        let m = SymMatrix::from_lower(3, |i, j| (i * 3 + j) as f64 - 2.5);
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 9 * 8);
        let (r, c, data) = read_binary(buf.as_slice()).unwrap();
        assert_eq!((r, c), (3, 3));
        assert_eq!(SymMatrix::from_full(3, data).unwrap(), m);
        assert!(read_binary(&b"XXXX\0\0\0\0"[..]).is_err());
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        SymMatrix::identity(2).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1e0,0e0\n0e0,1e0\n");
    }
}
