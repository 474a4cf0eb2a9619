//! MDS, NMDS and self-duality tests for TGRS codes.
//!
//! The MDS test works per k-subset `T` of the evaluation points: with
//! `prod_{i in T}(x - a_i) = sum_j c_j x^{k-j}` and the inverse sequence
//! `e` of the band matrix of `c`, each power `a^{k+t}` (for `a` in `T`)
//! reduces to `sum_s f_{t,s} a^s` with
//! `f_{t,s} = -sum_{i=0}^{min(t,s)} c_{i+k-s} e_{t-i}`. The code is MDS iff
//! `det(I_k + B F_T) != 0` for every `T`.

use itertools::Itertools;

use crate::code::TgrsCode;
use crate::code::EvalParams;
use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::matrix::{det_in_place, Matrix};

/// Upper bound on the number of subsets visited by the minor-based oracles.
pub const SUBSET_GUARD: u128 = 1_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Per-subset reduction data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetData {
    pub subset: Vec<usize>,
    /// Coefficients of `prod (x - a_i)`, leading first (`c[0] = 1`), length k+1.
    pub c: Vec<Felt>,
    /// Inverse band sequence, length n-k.
    pub e: Vec<Felt>,
    /// The `(n-k) x k` reduction matrix `F_T`.
    pub f: Matrix,
}

/// Coefficients (leading first) of `prod_{a in roots} (x - a)`.
pub fn root_product(field: &Field, roots: &[Felt]) -> Vec<Felt> {
    let mut c = vec![Felt::ONE];
    for &a in roots {
        let neg_a = field.neg(a);
        c.push(Felt::ZERO);
        for j in (1..c.len()).rev() {
            c[j] = field.mul_add(c[j], neg_a, c[j - 1]);
        }
    }
    c
}

/// `e_0 = 1`, `e_i = -sum_{j<i} e_j c_{i-j}` with `c` treated as zero past its end.
pub fn inverse_band(field: &Field, c: &[Felt], len: usize) -> Vec<Felt> {
    let mut e: Vec<Felt> = Vec::with_capacity(len);
    for i in 0..len {
        if i == 0 {
            e.push(Felt::ONE);
            continue;
        }
        let mut acc = Felt::ZERO;
        for (j, &ej) in e.iter().enumerate() {
            if let Some(&cc) = c.get(i - j) {
                acc = field.mul_add(acc, ej, cc);
            }
        }
        e.push(field.neg(acc));
    }
    e
}

pub fn subset_data(params: &EvalParams, subset: &[usize]) -> Result<SubsetData> {
    let (n, k) = (params.n(), params.k());
    if subset.len() != k {
        return Err(Error::Index(format!(
            "subset has {} elements, expected {k}",
            subset.len()
        )));
    }
    if subset.iter().any(|&i| i >= n) || subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Index(
            "subset indices must be strictly increasing and below n".into(),
        ));
    }
    Ok(subset_data_unchecked(params, subset))
}

fn subset_data_unchecked(params: &EvalParams, subset: &[usize]) -> SubsetData {
    let f = params.field();
    let (n, k) = (params.n(), params.k());
    let roots: Vec<Felt> = subset.iter().map(|&i| params.alpha()[i]).collect();
    let c = root_product(f, &roots);
    let e = inverse_band(f, &c, n - k);
    let fm = Matrix::from_fn(f, n - k, k, |t, s| {
        let mut acc = Felt::ZERO;
        for i in 0..=t.min(s) {
            acc = f.mul_add(acc, c[i + k - s], e[t - i]);
        }
        f.neg(acc)
    });
    SubsetData {
        subset: subset.to_vec(),
        c,
        e,
        f: fm,
    }
}

/// `det(I_k + B F)` computed in a scratch buffer.
pub(crate) fn twisted_det(b: &Matrix, fm: &Matrix, buf: &mut Vec<Felt>) -> Felt {
    let f = b.field();
    let k = b.rows();
    let nk = b.cols();
    buf.clear();
    for i in 0..k {
        for s in 0..k {
            let mut acc = if i == s { Felt::ONE } else { Felt::ZERO };
            for j in 0..nk {
                let bij = b.get(i, j);
                if !bij.is_zero() {
                    acc = f.mul_add(acc, bij, fm.get(j, s));
                }
            }
            buf.push(acc);
        }
    }
    det_in_place(f, buf, k)
}

/// Verdict of an MDS test with the first failing subset in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsVerdict {
    pub is_mds: bool,
    pub witness: Option<Vec<usize>>,
}

impl MdsVerdict {
    fn from_witness(witness: Option<Vec<usize>>) -> Self {
        MdsVerdict {
            is_mds: witness.is_none(),
            witness,
        }
    }
}

/// MDS test via `det(I_k + B F_T) != 0` over all k-subsets.
pub fn mds_fast(code: &TgrsCode) -> MdsVerdict {
    let params = code.params();
    let mut buf = Vec::new();
    let witness = (0..params.n()).combinations(params.k()).find(|t| {
        let sd = subset_data_unchecked(params, t);
        twisted_det(code.b(), &sd.f, &mut buf).is_zero()
    });
    MdsVerdict::from_witness(witness)
}

/// MDS test via all `k x k` minors of the generator matrix.
pub fn mds_oracle(code: &TgrsCode) -> Result<MdsVerdict> {
    mds_by_minors(&code.generator_matrix())
}

/// MDS test for any `k x n` generator: every `k x k` minor is nonzero.
pub fn mds_by_minors(g: &Matrix) -> Result<MdsVerdict> {
    let (k, n) = (g.rows(), g.cols());
    let count = binomial(n, k);
    if count > SUBSET_GUARD {
        return Err(Error::guard("k x k minors", count, SUBSET_GUARD));
    }
    let f = g.field();
    let mut buf = Vec::with_capacity(k * k);
    let witness = (0..n).combinations(k).find(|cols| {
        buf.clear();
        for r in 0..k {
            buf.extend(cols.iter().map(|&c| g.get(r, c)));
        }
        det_in_place(f, &mut buf, k).is_zero()
    });
    Ok(MdsVerdict::from_witness(witness))
}

/// Coefficient-matrix shapes with a closed-form MDS condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistShape {
    /// Only `b_{0,0}` may be nonzero.
    Corner,
    /// Only `b_{k-1,0}` may be nonzero.
    LastRowFirstColumn,
    /// Diagonal `l x l` block in rows `k-l..k`, columns `0..l`.
    DiagonalBlock { ell: usize },
    /// Full `l x l` block in rows `k-l..k`, columns `0..l`.
    FullBlock { ell: usize },
}

impl TwistShape {
    /// Whether cell `(i, j)` may be nonzero under this shape.
    pub fn allows(&self, k: usize, i: usize, j: usize) -> bool {
        match *self {
            TwistShape::Corner => i == 0 && j == 0,
            TwistShape::LastRowFirstColumn => i == k - 1 && j == 0,
            TwistShape::DiagonalBlock { ell } => i + ell >= k && j < ell && i - (k - ell) == j,
            TwistShape::FullBlock { ell } => i + ell >= k && j < ell,
        }
    }
}

/// Evaluates a shape's closed-form MDS condition over all k-subsets.
pub fn specialized_mds(code: &TgrsCode, shape: TwistShape) -> Result<bool> {
    let params = code.params();
    let f = params.field();
    let (n, k) = (params.n(), params.k());
    let b = code.b();
    if let TwistShape::DiagonalBlock { ell } | TwistShape::FullBlock { ell } = shape {
        if ell == 0 || ell >= k.min(n - k) {
            return Err(Error::Precondition(format!(
                "block size {ell} must satisfy 0 < l < min(k, n-k) = {}",
                k.min(n - k)
            )));
        }
    }
    for i in 0..k {
        for j in 0..n - k {
            if !b.get(i, j).is_zero() && !shape.allows(k, i, j) {
                return Err(Error::Precondition(format!(
                    "B[{i}][{j}] is nonzero outside the {shape:?} shape"
                )));
            }
        }
    }
    let alpha = params.alpha();
    let ok = match shape {
        TwistShape::Corner => {
            // b00 (-1)^k prod a_i != 1
            let b00 = b.get(0, 0);
            let sign = if k % 2 == 0 { Felt::ONE } else { f.neg(Felt::ONE) };
            (0..n).combinations(k).all(|t| {
                let prod = t.iter().fold(Felt::ONE, |acc, &i| f.mul(acc, alpha[i]));
                f.mul(f.mul(b00, sign), prod) != Felt::ONE
            })
        }
        TwistShape::LastRowFirstColumn => {
            // b_{k-1,0} sum a_i != -1
            let bl = b.get(k - 1, 0);
            let minus_one = f.neg(Felt::ONE);
            (0..n).combinations(k).all(|t| {
                let sum = t.iter().fold(Felt::ZERO, |acc, &i| f.add(acc, alpha[i]));
                f.mul(bl, sum) != minus_one
            })
        }
        TwistShape::DiagonalBlock { ell } | TwistShape::FullBlock { ell } => {
            // Rows above k-l of I + B F_T are unit rows, so the determinant
            // is that of the trailing l x l block.
            let off = k - ell;
            let mut buf = Vec::with_capacity(ell * ell);
            (0..n).combinations(k).all(|t| {
                let sd = subset_data_unchecked(params, &t);
                buf.clear();
                for r in 0..ell {
                    for c in 0..ell {
                        let mut acc = if r == c { Felt::ONE } else { Felt::ZERO };
                        for i in 0..ell {
                            if shape.allows(k, off + r, i) {
                                acc = f.mul_add(acc, b.get(off + r, i), sd.f.get(i, off + c));
                            }
                        }
                        buf.push(acc);
                    }
                }
                !det_in_place(f, &mut buf, ell).is_zero()
            })
        }
    };
    Ok(ok)
}

/// Column-rank conditions characterizing near-MDS codes, with the exact
/// Singleton defects of the code and its dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NmdsVerdict {
    pub is_nmds: bool,
    /// Some k columns of G are dependent.
    pub some_k_dependent: bool,
    /// Every k+1 columns of G have rank k.
    pub all_k_plus_1_full: bool,
    /// Every k-1 columns of G are independent.
    pub all_k_minus_1_independent: bool,
    pub defect: usize,
    pub dual_defect: usize,
}

fn subset_rank(g: &Matrix, cols: &[usize]) -> usize {
    g.select_columns(cols).expect("valid subset").rank()
}

pub fn nmds_check(code: &TgrsCode) -> Result<NmdsVerdict> {
    nmds_check_generator(&code.generator_matrix())
}

/// Near-MDS test on any full-rank `k x n` generator.
pub fn nmds_check_generator(g: &Matrix) -> Result<NmdsVerdict> {
    let (k, n) = (g.rows(), g.cols());
    let budget = binomial(n, k + 1);
    if budget > SUBSET_GUARD {
        return Err(Error::guard("(k+1)-column subsets", budget, SUBSET_GUARD));
    }
    let some_k_dependent = (0..n).combinations(k).any(|t| subset_rank(g, &t) < k);
    let all_k_plus_1_full = k + 1 > n || (0..n).combinations(k + 1).all(|t| subset_rank(g, &t) == k);
    let all_k_minus_1_independent =
        k == 0 || (0..n).combinations(k - 1).all(|t| subset_rank(g, &t) == k - 1);
    let (defect, dual_defect) = defects_by_rank(g)?;
    let is_nmds = some_k_dependent && all_k_plus_1_full && all_k_minus_1_independent;
    if is_nmds != (defect == 1 && dual_defect == 1) {
        return Err(Error::Invariant(
            "column-rank conditions disagree with computed defects".into(),
        ));
    }
    Ok(NmdsVerdict {
        is_nmds,
        some_k_dependent,
        all_k_plus_1_full,
        all_k_minus_1_independent,
        defect,
        dual_defect,
    })
}

/// `(S(C), S(C^perp))` from column subset ranks of a generator.
///
/// `d(C) >= n - m + 1` iff every `m` columns have rank `k`, and
/// `d(C^perp)` is the size of the smallest dependent column set.
fn defects_by_rank(g: &Matrix) -> Result<(usize, usize)> {
    let (k, n) = (g.rows(), g.cols());
    let work: u128 = (1..=n).map(|m| binomial(n, m)).sum();
    if work > 16 * SUBSET_GUARD {
        return Err(Error::guard("column subsets", work, 16 * SUBSET_GUARD));
    }
    // smallest m such that every m columns have rank k
    let m = (k..=n)
        .find(|&m| (0..n).combinations(m).all(|t| subset_rank(g, &t) == k))
        .ok_or_else(|| Error::Precondition("generator is not full rank".into()))?;
    let d = n - m + 1;
    let dual_d = (1..=n)
        .find(|&s| (0..n).combinations(s).any(|t| subset_rank(g, &t) < s))
        .unwrap_or(n + 1);
    Ok((n - k + 1 - d, (k + 1).saturating_sub(dual_d)))
}

/// Near-MDS criterion for self-dual codes outside the MDS set: every
/// (k+1)-subset contains a k-subset with `det(I_k + B F_T) != 0`.
pub fn nmds_selfdual(code: &TgrsCode) -> Result<bool> {
    if !selfdual_direct(code) {
        return Err(Error::Precondition("code is not self-dual".into()));
    }
    if mds_fast(code).is_mds {
        return Err(Error::Precondition("code is MDS".into()));
    }
    let params = code.params();
    let (n, k) = (params.n(), params.k());
    let dets: std::collections::HashMap<Vec<usize>, bool> = (0..n)
        .combinations(k)
        .map(|t| {
            let sd = subset_data_unchecked(params, &t);
            let nz = !twisted_det(code.b(), &sd.f, &mut Vec::new()).is_zero();
            (t, nz)
        })
        .collect();
    Ok((0..n).combinations(k + 1).all(|j| {
        j.iter()
            .combinations(k)
            .any(|t| dets[&t.into_iter().copied().collect::<Vec<_>>()])
    }))
}

/// Data of the full evaluation set used by the parity-check construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullProductData {
    /// Coefficients of `prod_{i}(x - a_i)`, leading first, length n+1.
    pub c_full: Vec<Felt>,
    /// `u_i = prod_{j != i} (a_i - a_j)^{-1}`.
    pub u: Vec<Felt>,
}

pub fn full_product_data(params: &EvalParams) -> FullProductData {
    let f = params.field();
    let alpha = params.alpha();
    let c_full = root_product(f, alpha);
    let u: Vec<Felt> = alpha
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let prod = alpha
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Felt::ONE, |acc, (_, &aj)| f.mul(acc, f.sub(ai, aj)));
            f.inv_nonzero(prod)
        })
        .collect();
    debug_assert!({
        let n = alpha.len();
        (0..n).all(|i| {
            let s = alpha
                .iter()
                .zip(&u)
                .fold(Felt::ZERO, |acc, (&a, &ut)| f.mul_add(acc, ut, f.pow_u(a, i as u64)));
            s == if i == n - 1 { Felt::ONE } else { Felt::ZERO }
        })
    });
    FullProductData { c_full, u }
}

/// `c_j` with `c_j = 0` for `j < 0` or `j > n`.
fn coef(c: &[Felt], j: isize) -> Felt {
    if j < 0 {
        Felt::ZERO
    } else {
        c.get(j as usize).copied().unwrap_or(Felt::ZERO)
    }
}

/// Parity-check matrix `H = [-J B^T | J] C V_n U` with `J` the reversal,
/// `C[i][j] = c_{n-1-i-j}` and `U = diag(u_i / v_i)`.
pub fn parity_check(code: &TgrsCode) -> Matrix {
    let params = code.params();
    let f = params.field();
    let (n, k) = (params.n(), params.k());
    let r = n - k;
    let fpd = full_product_data(params);
    let b = code.b();
    // [-J B^T | J]: row t of J B^T is row r-1-t of B^T, i.e. column r-1-t of B.
    let left = Matrix::from_fn(f, r, n, |t, c| {
        if c < k {
            f.neg(b.get(c, r - 1 - t))
        } else if c - k == r - 1 - t {
            Felt::ONE
        } else {
            Felt::ZERO
        }
    });
    let cm = Matrix::from_fn(f, n, n, |i, j| {
        coef(&fpd.c_full, n as isize - 1 - i as isize - j as isize)
    });
    let vn = Matrix::vandermonde(f, params.alpha(), n);
    let diag: Vec<Felt> = fpd
        .u
        .iter()
        .zip(params.nu())
        .map(|(&u, &v)| f.mul(u, f.inv_nonzero(v)))
        .collect();
    let um = Matrix::diagonal(f, &diag);
    left.mul(&cm)
        .and_then(|m| m.mul(&vn))
        .and_then(|m| m.mul(&um))
        .expect("shapes are consistent")
}

/// Result of the two-condition sufficient self-duality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualCheck {
    pub holds: bool,
    /// `lambda = v_1^2 / u_1` when `v_i^2 = lambda u_i` holds for all i.
    pub lambda: Option<Felt>,
    pub multipliers_ok: bool,
    pub matrix_identity_ok: bool,
}

/// Sufficient self-duality conditions for `n = 2k`: `v_i^2 = lambda u_i`
/// for all `i`, and `B^T D B = N B + B^T N` with `D[i][j] = c_{n-1-i-j}`,
/// `N[i][j] = c_{k-1-i-j}`.
pub fn selfdual_sufficient(code: &TgrsCode) -> Result<SelfDualCheck> {
    let params = code.params();
    let (n, k) = (params.n(), params.k());
    if n != 2 * k {
        return Err(Error::Precondition(format!("self-duality needs n = 2k, got n={n}, k={k}")));
    }
    let f = params.field();
    let fpd = full_product_data(params);
    let nu = params.nu();
    let lambda = f.mul(f.mul(nu[0], nu[0]), f.inv_nonzero(fpd.u[0]));
    let multipliers_ok = nu
        .iter()
        .zip(&fpd.u)
        .all(|(&v, &u)| f.mul(v, v) == f.mul(lambda, u));
    let c = &fpd.c_full;
    let dm = Matrix::from_fn(f, k, k, |i, j| coef(c, n as isize - 1 - i as isize - j as isize));
    let nm = Matrix::from_fn(f, k, k, |i, j| coef(c, k as isize - 1 - i as isize - j as isize));
    let b = code.b();
    let bt = b.transpose();
    let lhs = bt.mul(&dm).and_then(|m| m.mul(b)).expect("k x k shapes");
    let rhs = nm
        .mul(b)
        .and_then(|m| m.add(&bt.mul(&nm).expect("k x k shapes")))
        .expect("k x k shapes");
    let matrix_identity_ok = lhs == rhs;
    Ok(SelfDualCheck {
        holds: multipliers_ok && matrix_identity_ok,
        lambda: multipliers_ok.then_some(lambda),
        multipliers_ok,
        matrix_identity_ok,
    })
}

/// `n = 2k` and `G G^T = 0`.
pub fn selfdual_direct(code: &TgrsCode) -> bool {
    if code.n() != 2 * code.k() {
        return false;
    }
    let g = code.generator_matrix();
    g.mul(&g.transpose()).expect("square product").is_zero()
}
