//! Dense matrices over a finite field.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Felt, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[{}]", self.rows, self.cols, self)
    }
}

impl fmt::Display for Matrix {
    /// Rows separated by `;`, entries by `,`, in the field's element format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(";")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.field.format(self.get(r, c)))?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Felt::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Felt::ONE);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Felt,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Felt>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        let q = field.order();
        if rows.iter().flatten().any(|e| e.index() >= q) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Builds a matrix from small integers (reduced into the prime subfield).
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<Matrix> {
        let rows: Vec<Vec<Felt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
            .collect();
        Matrix::from_rows(field, &rows)
    }

    /// Parses the `a,b;c,d` text format.
    pub fn parse(field: &Field, text: &str) -> Result<Matrix> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Matrix::zeros(field, 0, 0));
        }
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| field.parse(e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, &rows)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Felt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Felt) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Felt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Felt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Felt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(t, c));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum shape mismatch".into()));
        }
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: Felt) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(Felt::ONE))
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: &Field, diag: &[Felt]) -> Matrix {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        Ok(Matrix::from_fn(
            &self.field,
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self.get(r, c)
                } else {
                    other.get(r, c - self.cols)
                }
            },
        ))
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Felt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut buf = self.data.clone();
        Ok(det_in_place(&self.field, &mut buf, self.rows))
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv_nonzero(m.get(r, c));
            for j in c..self.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let red = aug.rref();
        if red.pivots.iter().take(n).copied().ne(0..n) {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(&self.field, n, n, |r, c| {
            red.matrix.get(r, n + c)
        }))
    }

    /// Classical adjugate. Cofactors are used up to size 4 and for singular
    /// inputs; larger invertible matrices go through `det * inverse`.
    pub fn adjugate(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n > 4 {
            let d = self.det()?;
            if !d.is_zero() {
                return Ok(self.inverse()?.scale(d));
            }
        }
        Ok(self.adjugate_by_cofactors())
    }

    pub(crate) fn adjugate_by_cofactors(&self) -> Matrix {
        let n = self.rows;
        let f = &self.field;
        if n == 1 {
            return Matrix::identity(f, 1);
        }
        let mut adj = Matrix::zeros(f, n, n);
        let mut buf = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            for j in 0..n {
                buf.clear();
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        buf.push(self.get(r, c));
                    }
                }
                let minor = det_in_place(f, &mut buf, n - 1);
                let cof = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
                // adj = transpose of the cofactor matrix
                adj.set(j, i, cof);
            }
        }
        adj
    }

    /// `rows x points.len()` matrix with entry `(i, j) = points[j]^i`.
    pub fn vandermonde(field: &Field, points: &[Felt], rows: usize) -> Matrix {
        let mut m = Matrix::zeros(field, rows, points.len());
        for (j, &a) in points.iter().enumerate() {
            let mut pw = Felt::ONE;
            for i in 0..rows {
                m.set(i, j, pw);
                pw = field.mul(pw, a);
            }
        }
        m
    }

    fn check_indices(idx: &[usize], bound: usize, what: &str) -> Result<()> {
        if let Some(&i) = idx.iter().find(|&&i| i >= bound) {
            return Err(Error::Index(format!("{what} index {i} out of range {bound}")));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Index(format!(
                "{what} indices must be strictly increasing"
            )));
        }
        Ok(())
    }

    /// Column submatrix for strictly increasing indices.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Matrix> {
        Self::check_indices(idx, self.cols, "column")?;
        Ok(Matrix::from_fn(&self.field, self.rows, idx.len(), |r, c| {
            self.get(r, idx[c])
        }))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Matrix> {
        Self::check_indices(idx, self.rows, "row")?;
        Ok(Matrix::from_fn(&self.field, idx.len(), self.cols, |r, c| {
            self.get(idx[r], c)
        }))
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Felt> {
        if rows.len() != cols.len() {
            return Err(Error::Dimension("minor needs equally many rows and columns".into()));
        }
        self.select_rows(rows)?.select_columns(cols)?.det()
    }

    /// Rows of a basis of the right null space `{x : self * x = 0}`.
    pub fn null_space(&self) -> Matrix {
        let f = &self.field;
        let red = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, Felt::ONE);
            for (r, &pc) in red.pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(red.matrix.get(r, fc)));
            }
        }
        basis
    }

    /// Nonzero rows of the reduced echelon form: a canonical row-space basis.
    pub fn row_space_basis(&self) -> Matrix {
        let red = self.rref();
        Matrix::from_fn(&self.field, red.rank, self.cols, |r, c| {
            red.matrix.get(r, c)
        })
    }
}

/// Determinant of the row-major `n x n` matrix in `buf`, destroying it.
///
/// Allocation-free kernel shared by [`Matrix::det`] and the census loops.
pub fn det_in_place(f: &Field, buf: &mut [Felt], n: usize) -> Felt {
    debug_assert_eq!(buf.len(), n * n);
    match n {
        0 => return Felt::ONE,
        1 => return buf[0],
        2 => return f.sub(f.mul(buf[0], buf[3]), f.mul(buf[1], buf[2])),
        _ => {}
    }
    let mut det = Felt::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&r| !buf[r * n + c].is_zero()) else {
            return Felt::ZERO;
        };
        if pr != c {
            for j in c..n {
                buf.swap(pr * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let pivot = buf[c * n + c];
        det = f.mul(det, pivot);
        let inv = f.inv_nonzero(pivot);
        for r in c + 1..n {
            let factor = buf[r * n + c];
            if factor.is_zero() {
                continue;
            }
            let factor = f.mul(factor, inv);
            for j in c + 1..n {
                buf[r * n + j] = f.sub(buf[r * n + j], f.mul(factor, buf[c * n + j]));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(f, rows, cols, |_, _| Felt(rng.gen_range(0..f.order())))
    }

    // Rank oracle: order of the largest nonvanishing minor.
    fn minor_rank(m: &Matrix) -> usize {
        for s in (1..=m.rows().min(m.cols())).rev() {
            for rs in (0..m.rows()).combinations(s) {
                for cs in (0..m.cols()).combinations(s) {
                    if !m.minor(&rs, &cs).unwrap().is_zero() {
                        return s;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn det_examples() {
        let f = Field::prime(7).unwrap();
        assert_eq!(Matrix::identity(&f, 5).det().unwrap(), Felt::ONE);
        let pts: Vec<Felt> = [1, 2, 3].iter().map(|&v| f.from_int(v)).collect();
        let v = Matrix::vandermonde(&f, &pts, 3);
        assert_eq!(v, Matrix::from_ints(&f, &[&[1, 1, 1], &[1, 2, 3], &[1, 4, 2]]).unwrap());
        assert_eq!(v.det().unwrap(), Felt(2));
        let rep = Matrix::from_ints(&f, &[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).unwrap();
        assert_eq!(rep.det().unwrap(), Felt::ZERO);
        assert!(matches!(
            Matrix::zeros(&f, 2, 3).det(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn rref_examples() {
        let f = Field::prime(7).unwrap();
        let z = Matrix::zeros(&f, 3, 4).rref();
        assert_eq!((z.rank, z.pivots.len()), (0, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random(&f, 3, 5, &mut rng);
            let red = m.rref();
            assert_eq!(red.rank, minor_rank(&m));
            assert_eq!(red.rank, m.transpose().rank());
        }
    }

    #[test]
    fn adjugate_examples() {
        let f = Field::prime(17).unwrap();
        let one = Matrix::from_ints(&f, &[&[5]]).unwrap();
        assert_eq!(one.adjugate().unwrap(), Matrix::identity(&f, 1));
        assert_eq!(
            Matrix::identity(&f, 3).adjugate().unwrap(),
            Matrix::identity(&f, 3)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 20 {
            let m = random(&f, 3, 3, &mut rng);
            let d = m.det().unwrap();
            if d.is_zero() {
                continue;
            }
            assert_eq!(m.adjugate().unwrap(), m.inverse().unwrap().scale(d));
            checked += 1;
        }
        // size > 4, singular and invertible
        for _ in 0..10 {
            let mut m = random(&f, 6, 6, &mut rng);
            let adj = m.adjugate().unwrap();
            let d = m.det().unwrap();
            assert_eq!(m.mul(&adj).unwrap(), Matrix::identity(&f, 6).scale(d));
            for c in 0..6 {
                let v = m.get(0, c);
                m.set(1, c, v);
            }
            assert_eq!(m.adjugate().unwrap(), m.adjugate_by_cofactors());
        }
    }

    #[test]
    fn selection() {
        let f = Field::prime(7).unwrap();
        let m = Matrix::from_ints(&f, &[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert_eq!(m.select_columns(&[0, 1, 2]).unwrap(), m);
        let e = m.select_columns(&[]).unwrap();
        assert_eq!((e.rows(), e.cols()), (2, 0));
        assert_eq!(
            m.select_columns(&[0, 2]).unwrap(),
            Matrix::from_ints(&f, &[&[1, 3], &[4, 6]]).unwrap()
        );
        assert!(m.select_columns(&[3]).is_err());
        assert!(m.select_columns(&[1, 1]).is_err());
        assert!(m.select_columns(&[2, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = Field::new(3, 2, None).unwrap();
        let m = Matrix::parse(&f, "1,z^3;0,2").unwrap();
        assert_eq!(m.to_string(), "z^0,z^3;0,z^4");
        assert_eq!(Matrix::parse(&f, &m.to_string()).unwrap(), m);
        assert!(Matrix::parse(&f, "1,2;3").is_err());
    }

    #[test]
    fn null_space_is_orthogonal() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let m = random(&f, 3, 6, &mut rng);
            let ns = m.null_space();
            assert_eq!(ns.rows() + m.rank(), 6);
            assert!(m.mul(&ns.transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn field_mismatch() {
        let a = Matrix::identity(&Field::prime(5).unwrap(), 2);
        let b = Matrix::identity(&Field::prime(7).unwrap(), 2);
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
    }
}
