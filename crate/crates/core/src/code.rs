//! (L,P)-twisted generalized Reed-Solomon codes.
//!
//! The twist set and position set are always the full ranges
//! `{0..n-k-1}` and `{0..k-1}`; narrower twists are expressed by zero
//! entries of the coefficient matrix `B`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::matrix::Matrix;

/// Upper bound on the number of codewords enumerated by brute force.
pub const DISTANCE_GUARD: u128 = 10_000_000;

/// Evaluation points and column multipliers of a (twisted) GRS code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalParams {
    field: Field,
    n: usize,
    k: usize,
    alpha: Vec<Felt>,
    nu: Vec<Felt>,
}

impl EvalParams {
    /// Validates `0 < k < n <= q`, distinct `alpha` and nonzero `nu`
    /// (all ones when omitted).
    pub fn new(field: &Field, k: usize, alpha: Vec<Felt>, nu: Option<Vec<Felt>>) -> Result<Self> {
        let n = alpha.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!(
                "need 0 < k < n, got n={n}, k={k}"
            )));
        }
        if n as u64 > field.order() as u64 {
            return Err(Error::InvalidParams(format!(
                "length {n} exceeds field order {}",
                field.order()
            )));
        }
        let q = field.order();
        if alpha.iter().any(|a| a.index() >= q) {
            return Err(Error::FieldMismatch);
        }
        let mut seen = HashSet::new();
        for (i, a) in alpha.iter().enumerate() {
            if !seen.insert(*a) {
                return Err(Error::InvalidParams(format!(
                    "evaluation point {} repeated (position {i})",
                    field.format(*a)
                )));
            }
        }
        let nu = nu.unwrap_or_else(|| vec![Felt::ONE; n]);
        if nu.len() != n {
            return Err(Error::InvalidParams(format!(
                "column multipliers have length {}, expected {n}",
                nu.len()
            )));
        }
        if nu.iter().any(|v| v.index() >= q) {
            return Err(Error::FieldMismatch);
        }
        if let Some(i) = nu.iter().position(|v| v.is_zero()) {
            return Err(Error::InvalidParams(format!(
                "column multiplier at position {i} is zero"
            )));
        }
        Ok(EvalParams {
            field: field.clone(),
            n,
            k,
            alpha,
            nu,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn alpha(&self) -> &[Felt] {
        &self.alpha
    }
    pub fn nu(&self) -> &[Felt] {
        &self.nu
    }

    /// Same points with different multipliers.
    pub fn with_nu(&self, nu: Vec<Felt>) -> Result<Self> {
        EvalParams::new(&self.field, self.k, self.alpha.clone(), Some(nu))
    }

    /// Same points and multipliers, different dimension.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        EvalParams::new(&self.field, k, self.alpha.clone(), Some(self.nu.clone()))
    }
}

/// The `k x (n-k)` coefficient matrix `B` plus a mask of free positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistMatrix {
    entries: Matrix,
    mask: Vec<bool>,
}

impl TwistMatrix {
    /// Mask = nonzero positions of `entries`.
    pub fn new(entries: Matrix) -> Self {
        let mask = entries.data().iter().map(|e| !e.is_zero()).collect();
        TwistMatrix { entries, mask }
    }

    /// Explicit mask (row-major); entries must vanish outside it.
    pub fn with_mask(entries: Matrix, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != entries.rows() * entries.cols() {
            return Err(Error::Dimension("mask size does not match B".into()));
        }
        if let Some(i) = entries
            .data()
            .iter()
            .zip(&mask)
            .position(|(e, &m)| !m && !e.is_zero())
        {
            return Err(Error::InvalidParams(format!(
                "B[{}][{}] is nonzero outside the mask",
                i / entries.cols(),
                i % entries.cols()
            )));
        }
        Ok(TwistMatrix { entries, mask })
    }

    pub fn zero(field: &Field, k: usize, n: usize) -> Self {
        TwistMatrix::new(Matrix::zeros(field, k, n - k))
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.entries.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }
}

/// Which construction [`TgrsCode::generator`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Row `i`, column `j` is `nu_j * g_i(a_j)`.
    Direct,
    /// `[I_k | B] * V_n * diag(nu)`.
    Factored,
}

/// An (L,P)-TGRS code with full twist and position sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TgrsCode {
    params: EvalParams,
    twist: TwistMatrix,
}

impl TgrsCode {
    pub fn new(params: EvalParams, twist: TwistMatrix) -> Result<Self> {
        let b = twist.entries();
        if b.rows() != params.k || b.cols() != params.n - params.k {
            return Err(Error::Dimension(format!(
                "B must be {}x{}, got {}x{}",
                params.k,
                params.n - params.k,
                b.rows(),
                b.cols()
            )));
        }
        if b.field() != params.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(TgrsCode { params, twist })
    }

    pub fn from_b(params: EvalParams, b: Matrix) -> Result<Self> {
        TgrsCode::new(params, TwistMatrix::new(b))
    }

    /// The untwisted GRS code on the same parameters.
    pub fn grs(params: EvalParams) -> Self {
        let twist = TwistMatrix::zero(params.field(), params.k, params.n);
        TgrsCode { params, twist }
    }

    pub fn params(&self) -> &EvalParams {
        &self.params
    }
    pub fn twist(&self) -> &TwistMatrix {
        &self.twist
    }
    pub fn b(&self) -> &Matrix {
        self.twist.entries()
    }
    pub fn field(&self) -> &Field {
        self.params.field()
    }
    pub fn n(&self) -> usize {
        self.params.n
    }
    pub fn k(&self) -> usize {
        self.params.k
    }

    /// Coefficient vectors (degrees `0..n`) of the basis polynomials
    /// `g_i(x) = x^i + sum_j b_{i,j} x^{k+j}`.
    pub fn twisted_basis(&self) -> Vec<Vec<Felt>> {
        let (n, k) = (self.n(), self.k());
        (0..k)
            .map(|i| {
                let mut g = vec![Felt::ZERO; n];
                g[i] = Felt::ONE;
                for j in 0..n - k {
                    g[k + j] = self.twist.get(i, j);
                }
                g
            })
            .collect()
    }

    pub fn generator(&self, mode: GeneratorMode) -> Matrix {
        let f = self.field();
        let (n, k) = (self.n(), self.k());
        let alpha = self.params.alpha();
        let nu = self.params.nu();
        match mode {
            GeneratorMode::Direct => {
                let basis = self.twisted_basis();
                Matrix::from_fn(f, k, n, |i, j| {
                    f.mul(nu[j], eval_poly(f, &basis[i], alpha[j]))
                })
            }
            GeneratorMode::Factored => {
                let left = Matrix::identity(f, k)
                    .hstack(self.b())
                    .expect("shapes validated at construction");
                let vn = Matrix::vandermonde(f, alpha, n);
                let v0 = Matrix::diagonal(f, nu);
                left.mul(&vn)
                    .and_then(|m| m.mul(&v0))
                    .expect("shapes validated at construction")
            }
        }
    }

    /// The generator matrix (direct construction).
    pub fn generator_matrix(&self) -> Matrix {
        self.generator(GeneratorMode::Direct)
    }

    /// `message * G`.
    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>> {
        if message.len() != self.k() {
            return Err(Error::Dimension(format!(
                "message length {} != k = {}",
                message.len(),
                self.k()
            )));
        }
        let g = self.generator_matrix();
        let row = Matrix::from_rows(self.field(), &[message.to_vec()])?;
        Ok(row.mul(&g)?.row(0).to_vec())
    }

    /// Minimum distance and Singleton defect by enumerating every codeword.
    pub fn brute_min_distance(&self) -> Result<Distance> {
        let d = min_distance(&self.generator_matrix())?;
        Ok(Distance {
            d,
            defect: self.n() + 1 - self.k() - d,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Distance {
    pub d: usize,
    pub defect: usize,
}

/// Horner evaluation of a coefficient vector (constant first).
pub fn eval_poly(f: &Field, coeffs: &[Felt], x: Felt) -> Felt {
    coeffs
        .iter()
        .rev()
        .fold(Felt::ZERO, |acc, &c| f.mul_add(c, acc, x))
}

/// Minimum Hamming weight of the nonzero codewords spanned by the rows of
/// a full-rank generator `g`.
///
/// Only messages whose first nonzero coordinate is one are visited, since
/// weight is invariant under scaling.
pub fn min_distance(g: &Matrix) -> Result<usize> {
    let f = g.field();
    let (k, n) = (g.rows(), g.cols());
    let q = f.order() as u128;
    let total = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > DISTANCE_GUARD {
        return Err(Error::guard("brute-force minimum distance", total, DISTANCE_GUARD));
    }
    if k == 0 {
        return Err(Error::InvalidParams("code has dimension 0".into()));
    }
    let elems: Vec<Felt> = f.elements().collect();
    let mut best = usize::MAX;
    let mut word = vec![Felt::ZERO; n];
    let mut digits = vec![0usize; k];
    for lead in 0..k {
        // message = (0,..,0, 1, x_{lead+1}, .., x_{k-1})
        let tail = k - lead - 1;
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            for (c, w) in word.iter_mut().enumerate() {
                let mut acc = g.get(lead, c);
                for t in 0..tail {
                    acc = f.mul_add(acc, elems[digits[t]], g.get(lead + 1 + t, c));
                }
                *w = acc;
            }
            let wt = word.iter().filter(|e| !e.is_zero()).count();
            if wt == 0 {
                return Err(Error::Precondition("generator rows are dependent".into()));
            }
            best = best.min(wt);
            // odometer over the tail
            let mut pos = 0;
            while pos < tail {
                digits[pos] += 1;
                if digits[pos] < elems.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == tail {
                break;
            }
        }
    }
    Ok(best)
}

/// Maps each row `c` to `(scale_0 c_{perm(0)}, ..., scale_{n-1} c_{perm(n-1)})`.
pub fn apply_equivalence(words: &Matrix, perm: &[usize], scale: &[Felt]) -> Result<Matrix> {
    let n = words.cols();
    if perm.len() != n || scale.len() != n {
        return Err(Error::Dimension("permutation/scale length must equal n".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParams("not a permutation".into()));
        }
    }
    if scale.iter().any(|s| s.is_zero()) {
        return Err(Error::InvalidParams("zero scale entry".into()));
    }
    let f = words.field();
    Ok(Matrix::from_fn(f, words.rows(), n, |r, j| {
        f.mul(scale[j], words.get(r, perm[j]))
    }))
}

/// Whether two generator matrices span the same code.
pub fn code_equal(g1: &Matrix, g2: &Matrix) -> Result<bool> {
    if g1.field() != g2.field() {
        return Err(Error::FieldMismatch);
    }
    if g1.cols() != g2.cols() {
        return Err(Error::Dimension("codes have different lengths".into()));
    }
    Ok(g1.row_space_basis() == g2.row_space_basis())
}
