//! GRS membership: systematic forms, Schur squares and the entrywise-inverse
//! minor criterion.

use itertools::Itertools;
use serde::Serialize;

use crate::classify::mds_fast;
use crate::code::TgrsCode;
use crate::error::{Error, Result};
use crate::ff::Felt;
use crate::matrix::{det_in_place, Matrix};

/// `G ~ [I_k | M]`, plus the entrywise inverse of `M` when it has no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystematicForm {
    pub m: Matrix,
    pub m_prime: Option<Matrix>,
}

/// Systematic form pivoting on the first `k` columns.
pub fn systematic_form(g: &Matrix) -> Result<SystematicForm> {
    let k = g.rows();
    let n = g.cols();
    if k > n {
        return Err(Error::Dimension(format!("{k} x {n} generator has more rows than columns")));
    }
    let lead: Vec<usize> = (0..k).collect();
    let tail: Vec<usize> = (k..n).collect();
    let q = g.select_columns(&lead)?;
    let q_inv = q.inverse()?;
    let m = q_inv.mul(&g.select_columns(&tail)?)?;
    let m_prime = entrywise_inverse(&m);
    Ok(SystematicForm { m, m_prime })
}

fn entrywise_inverse(m: &Matrix) -> Option<Matrix> {
    let f = m.field();
    if m.data().iter().any(|v| v.is_zero()) {
        return None;
    }
    Some(Matrix::from_fn(f, m.rows(), m.cols(), |i, j| f.inv_nonzero(m.get(i, j))))
}

/// Dimension of the span of all componentwise products of row pairs of `g`.
pub fn schur_square_dim(g: &Matrix) -> usize {
    let f = g.field();
    let (k, n) = (g.rows(), g.cols());
    let mut rows = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            rows.push((0..n).map(|c| f.mul(g.get(i, c), g.get(j, c))).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(f, &rows).expect("uniform rows").rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrsStatus {
    NotMds,
    Grs,
    NonGrsMds,
}

impl std::fmt::Display for GrsStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GrsStatus::NotMds => "not-mds",
            GrsStatus::Grs => "grs",
            GrsStatus::NonGrsMds => "non-grs-mds",
        })
    }
}

/// Classifies a TGRS code as not MDS, GRS, or MDS but not GRS.
pub fn grs_classify(code: &TgrsCode) -> GrsStatus {
    if !mds_fast(code).is_mds {
        return GrsStatus::NotMds;
    }
    let (n, k) = (code.n(), code.k());
    if k.min(n - k) < 3 {
        return GrsStatus::Grs;
    }
    let sf = systematic_form(&code.generator_matrix()).expect("MDS leading block is invertible");
    classify_systematic(&sf)
}

/// Minor test on a systematic form of an MDS code.
pub fn classify_systematic(sf: &SystematicForm) -> GrsStatus {
    let Some(mp) = &sf.m_prime else {
        return GrsStatus::NotMds;
    };
    let (r, c) = (mp.rows(), mp.cols());
    let mut buf = Vec::with_capacity(9);
    let minor = |rs: &[usize], cs: &[usize], buf: &mut Vec<Felt>| {
        buf.clear();
        for &i in rs {
            buf.extend(cs.iter().map(|&j| mp.get(i, j)));
        }
        det_in_place(mp.field(), buf, rs.len())
    };
    for rs in (0..r).combinations(2) {
        for cs in (0..c).combinations(2) {
            if minor(&rs, &cs, &mut buf).is_zero() {
                return GrsStatus::NonGrsMds;
            }
        }
    }
    for rs in (0..r).combinations(3) {
        for cs in (0..c).combinations(3) {
            if !minor(&rs, &cs, &mut buf).is_zero() {
                return GrsStatus::NonGrsMds;
            }
        }
    }
    GrsStatus::Grs
}

/// Lexicographically first `(rows, cols)` 3x3 selection with a nonzero minor.
pub fn first_nonzero_3x3_minor(m_prime: &Matrix) -> Option<([usize; 3], [usize; 3])> {
    let mut buf = Vec::with_capacity(9);
    for rs in (0..m_prime.rows()).combinations(3) {
        for cs in (0..m_prime.cols()).combinations(3) {
            buf.clear();
            for &i in &rs {
                buf.extend(cs.iter().map(|&j| m_prime.get(i, j)));
            }
            if !det_in_place(m_prime.field(), &mut buf, 3).is_zero() {
                return Some(([rs[0], rs[1], rs[2]], [cs[0], cs[1], cs[2]]));
            }
        }
    }
    None
}

/// Smallest `l >= 1` such that the nonzero cells of `b` lie in the
/// lower-triangular `l x l` block at rows `k-l..k`, columns `0..l`, subject
/// to `l < min(k, n-2k+1)`. Such codes are non-GRS whenever they are MDS.
pub fn triangular_twist_shape(b: &Matrix, n: usize, k: usize) -> Option<usize> {
    if b.is_zero() || n < 2 * k {
        return None;
    }
    let bound = k.min(n - 2 * k + 1);
    (1..bound).find(|&ell| {
        (0..b.rows()).all(|i| {
            (0..b.cols()).all(|j| {
                let inside = i + ell >= k && j < ell && j <= i + ell - k;
                inside || b.get(i, j).is_zero()
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::EvalParams;
    use crate::ff::Field;

    fn params(q: u64, n: usize, k: usize) -> EvalParams {
        let f = Field::prime(q).unwrap();
        EvalParams::new(&f, k, (1..=n as i64).map(|v| f.from_int(v)).collect(), None).unwrap()
    }

    #[test]
    fn systematic_of_systematic() {
        let f = Field::prime(7).unwrap();
        let g = Matrix::from_ints(&f, &[&[1, 0, 3, 4], &[0, 1, 5, 6]]).unwrap();
        let sf = systematic_form(&g).unwrap();
        assert_eq!(sf.m, Matrix::from_ints(&f, &[&[3, 4], &[5, 6]]).unwrap());
        let scaled = Matrix::from_ints(&f, &[&[2, 0, 6, 1], &[0, 3, 1, 4]]).unwrap();
        assert_eq!(systematic_form(&scaled).unwrap().m, sf.m);
        let singular = Matrix::from_ints(&f, &[&[1, 1, 3, 4], &[2, 2, 5, 6]]).unwrap();
        assert!(systematic_form(&singular).is_err());
    }

    #[test]
    fn grs_schur_dimension() {
        let code = TgrsCode::grs(params(17, 6, 3));
        assert_eq!(schur_square_dim(&code.generator_matrix()), 5);
        assert_eq!(grs_classify(&code), GrsStatus::Grs);
        let k1 = TgrsCode::grs(params(7, 5, 1));
        assert_eq!(schur_square_dim(&k1.generator_matrix()), 1);
    }

    #[test]
    fn shape_examples() {
        let f = Field::prime(17).unwrap();
        let mut b = Matrix::zeros(&f, 3, 5);
        assert_eq!(triangular_twist_shape(&b, 8, 3), None);
        b.set(2, 1, Felt(1));
        assert_eq!(triangular_twist_shape(&b, 8, 3), Some(2));
        b.set(2, 1, Felt::ZERO);
        b.set(2, 0, Felt(1));
        assert_eq!(triangular_twist_shape(&b, 8, 3), Some(1));
        b.set(1, 0, Felt(1));
        assert_eq!(triangular_twist_shape(&b, 8, 3), Some(2));
        let b7 = Matrix::from_ints(&f, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap();
        assert_eq!(triangular_twist_shape(&b7, 7, 3), None);
        b.set(0, 0, Felt(1));
        assert_eq!(triangular_twist_shape(&b, 8, 3), None);
    }
}
