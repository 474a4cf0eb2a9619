//! Symbolic systematic form of a TGRS code with free coefficient cells.
//!
//! With one variable per wildcard of `B` (row-major), the leading block `Q`
//! and trailing block `T` of the generator have polynomial entries. Then
//! `p = det(Q)` and `p_ij = (adj(Q) T)_ij` give the systematic entries
//! `M_ij = p_ij / p`. For a 3x3 selection of `M' = (1/M_ij)`, clearing
//! denominators from its minor yields the polynomial `P`, which vanishes at
//! every assignment producing a GRS code.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::census::BPattern;
use crate::classify::mds_fast;
use crate::code::{EvalParams, TgrsCode};
use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::grs::{classify_systematic, first_nonzero_3x3_minor, systematic_form, GrsStatus};
use crate::poly::MultiPoly;

/// Maximum number of symbolic variables.
pub const MAX_VARS: usize = 12;
/// Maximum number of assignments visited when counting.
pub const GRID_GUARD: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSystem {
    pub params: EvalParams,
    pub pattern: BPattern,
    pub p: MultiPoly,
    /// `k x (n-k)` numerators of the systematic entries.
    pub pij: Vec<Vec<MultiPoly>>,
    /// Wildcard cell of each variable.
    pub vars: Vec<(usize, usize)>,
}

pub type Selection = ([usize; 3], [usize; 3]);

/// Builds `p` and the `p_ij` grid for `pattern`.
pub fn symbolic_system(params: &EvalParams, pattern: &BPattern) -> Result<SymbolicSystem> {
    let f = params.field();
    let (n, k) = (params.n(), params.k());
    if pattern.rows() != k || pattern.cols() != n - k || pattern.field() != f {
        return Err(Error::Dimension(format!(
            "pattern must be {k} x {} over the code's field",
            n - k
        )));
    }
    let vars = pattern.wildcards();
    let nv = vars.len();
    if nv > MAX_VARS {
        return Err(Error::guard("symbolic variables", nv as u128, MAX_VARS as u128));
    }
    let var_of: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(v, &c)| (c, v)).collect();

    // g_{i,j} = v_j (a_j^i + sum_s b_{i,s} a_j^{k+s})
    let alpha = params.alpha();
    let nu = params.nu();
    let cell = |i: usize, j: usize| -> MultiPoly {
        let a = alpha[j];
        let mut terms: Vec<(Vec<u8>, Felt)> = vec![(vec![0; nv], f.pow_u(a, i as u64))];
        for s in 0..n - k {
            let pw = f.pow_u(a, (k + s) as u64);
            match var_of.get(&(i, s)) {
                Some(&v) => {
                    let mut mono = vec![0; nv];
                    mono[v] = 1;
                    terms.push((mono, pw));
                }
                None => {
                    let b = pattern.cell(i, s).expect("fixed cell");
                    terms.push((vec![0; nv], f.mul(b, pw)));
                }
            }
        }
        MultiPoly::from_terms(f, nv, terms).expect("well-formed").scale(nu[j])
    };
    let g: Vec<Vec<MultiPoly>> = (0..k).map(|i| (0..n).map(|j| cell(i, j)).collect()).collect();

    let q_cols: Vec<usize> = (0..k).collect();
    let p = laplace_det(&g, &q_cols, f, nv)?;
    // (adj(Q) T)_ij is det(Q) with column i replaced by column k+j.
    let mut pij = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(n - k);
        for j in 0..n - k {
            let mut cols = q_cols.clone();
            cols[i] = k + j;
            row.push(laplace_det(&g, &cols, f, nv)?);
        }
        pij.push(row);
    }
    for poly in std::iter::once(&p).chain(pij.iter().flatten()) {
        if poly.max_var_degree() > 1 {
            return Err(Error::Invariant("symbolic entry has a variable of degree above 1".into()));
        }
    }
    Ok(SymbolicSystem { params: params.clone(), pattern: pattern.clone(), p, pij, vars })
}

/// Determinant of the `k x k` matrix formed by columns `cols` of `g`,
/// by first-row cofactor expansion memoized over column subsets.
fn laplace_det(g: &[Vec<MultiPoly>], cols: &[usize], f: &Field, nv: usize) -> Result<MultiPoly> {
    let k = cols.len();
    if k > 16 {
        return Err(Error::guard("symbolic determinant size", k as u128, 16));
    }
    // memo[mask] = det of rows (k - popcount(mask))..k restricted to columns in mask
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    memo.insert(0, MultiPoly::constant(f, nv, Felt::ONE));
    for size in 1..=k {
        let row = k - size;
        for subset in (0..k).combinations(size) {
            let mask: u32 = subset.iter().map(|&c| 1u32 << c).sum();
            let mut acc = MultiPoly::zero(f, nv);
            for (pos, &c) in subset.iter().enumerate() {
                let minor = &memo[&(mask & !(1 << c))];
                let term = g[row][cols[c]].mul(minor)?;
                acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            memo.insert(mask, acc);
        }
    }
    Ok(memo.remove(&((1u32 << k) - 1)).expect("full mask"))
}

/// `P = sum_sigma sgn(sigma) prod_{cells off sigma} p_ij` over a 3x3 selection.
pub fn big_p(system: &SymbolicSystem, sel: &Selection) -> Result<MultiPoly> {
    let (k, r) = (system.pij.len(), system.pij.first().map_or(0, Vec::len));
    if k.min(r) < 3 {
        return Err(Error::Precondition(format!("3x3 minors need min(k, n-k) >= 3, got {}", k.min(r))));
    }
    let (rows, cols) = sel;
    let ok = |v: &[usize; 3], bound: usize| v[0] < v[1] && v[1] < v[2] && v[2] < bound;
    if !ok(rows, k) || !ok(cols, r) {
        return Err(Error::Index(format!("bad minor selection rows {rows:?} cols {cols:?}")));
    }
    let f = system.p.field();
    let nv = system.p.nvars();
    let mut total = MultiPoly::zero(f, nv);
    for perm in (0..3).permutations(3) {
        let inversions = (0..3).flat_map(|a| (a + 1..3).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        let mut term = MultiPoly::constant(f, nv, Felt::ONE);
        for a in 0..3 {
            for c in 0..3 {
                if perm[a] != c {
                    term = term.mul(&system.pij[rows[a]][cols[c]])?;
                }
            }
        }
        total = if inversions % 2 == 0 { total.add(&term)? } else { total.sub(&term)? };
    }
    if total.max_var_degree() > 6 {
        return Err(Error::Invariant("minor polynomial has a variable of degree above 6".into()));
    }
    Ok(total)
}

fn grid_guard(f: &Field, nvars: usize) -> Result<u128> {
    let total = (f.order() as u128).saturating_pow(nvars as u32);
    if total > GRID_GUARD {
        return Err(Error::guard("assignment grid", total, GRID_GUARD));
    }
    Ok(total)
}

/// Calls `visit` on every assignment of `nvars` values in odometer order.
fn for_each_assignment(f: &Field, nvars: usize, mut visit: impl FnMut(&[Felt]) -> Result<()>) -> Result<()> {
    let elems: Vec<Felt> = f.elements().collect();
    let mut digits = vec![0usize; nvars];
    let mut vals = vec![elems[0]; nvars];
    loop {
        visit(&vals)?;
        let mut p = nvars;
        loop {
            if p == 0 {
                return Ok(());
            }
            p -= 1;
            digits[p] += 1;
            if digits[p] < elems.len() {
                vals[p] = elems[digits[p]];
                break;
            }
            digits[p] = 0;
            vals[p] = elems[0];
        }
    }
}

/// Number of points of the full grid where `poly` vanishes.
pub fn count_zeros(poly: &MultiPoly) -> Result<u64> {
    grid_guard(poly.field(), poly.nvars())?;
    let mut zeros = 0u64;
    for_each_assignment(poly.field(), poly.nvars(), |v| {
        if poly.eval_unchecked(v).is_zero() {
            zeros += 1;
        }
        Ok(())
    })?;
    Ok(zeros)
}

fn code_at(system: &SymbolicSystem, values: &[Felt]) -> Result<TgrsCode> {
    TgrsCode::from_b(system.params.clone(), system.pattern.instantiate(values)?)
}

/// First 3x3 selection whose minor of `M'` is nonzero at `reference`.
pub fn default_selection(system: &SymbolicSystem, reference: &[Felt]) -> Result<Selection> {
    let code = code_at(system, reference)?;
    if !mds_fast(&code).is_mds {
        return Err(Error::Precondition("reference assignment does not give an MDS code".into()));
    }
    let sf = systematic_form(&code.generator_matrix())?;
    let mp = sf
        .m_prime
        .ok_or_else(|| Error::Invariant("MDS systematic form has a zero entry".into()))?;
    first_nonzero_3x3_minor(&mp).ok_or_else(|| {
        Error::Precondition(
            "reference assignment is GRS: every 3x3 minor of the inverted systematic block vanishes".into(),
        )
    })
}

/// First non-GRS MDS assignment in odometer order, if any.
pub fn find_reference(system: &SymbolicSystem) -> Result<Option<Vec<Felt>>> {
    let f = system.p.field().clone();
    grid_guard(&f, system.vars.len())?;
    let mut found = None;
    let res = for_each_assignment(&f, system.vars.len(), |v| {
        let code = code_at(system, v)?;
        if crate::grs::grs_classify(&code) == GrsStatus::NonGrsMds {
            found = Some(v.to_vec());
            return Err(Error::Interrupted);
        }
        Ok(())
    });
    match res {
        Ok(()) | Err(Error::Interrupted) => Ok(found),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PolyCensus {
    pub mds: u64,
    pub grs: u64,
    pub nongrs: u64,
    pub pzeros: u64,
}

/// Classifies every assignment and counts the zeros of `big`.
///
/// Checks along the way that `p` and every `p_ij` are nonzero at MDS points,
/// that `p_ij / p` reproduces the numeric systematic form, and that every GRS
/// point is a zero of `big`.
pub fn census_classify(system: &SymbolicSystem, big: &MultiPoly) -> Result<PolyCensus> {
    let f = system.p.field().clone();
    let nv = system.vars.len();
    if big.nvars() != nv || big.field() != &f {
        return Err(Error::Dimension("minor polynomial does not match the system".into()));
    }
    grid_guard(&f, nv)?;
    let (n, k) = (system.params.n(), system.params.k());
    let mut out = PolyCensus::default();
    for_each_assignment(&f, nv, |v| {
        let zero = big.eval_unchecked(v).is_zero();
        if zero {
            out.pzeros += 1;
        }
        let code = code_at(system, v)?;
        if !mds_fast(&code).is_mds {
            return Ok(());
        }
        out.mds += 1;
        let pv = system.p.eval_unchecked(v);
        if pv.is_zero() {
            return Err(Error::Invariant(format!("p vanishes at MDS point {v:?}")));
        }
        let sf = systematic_form(&code.generator_matrix())?;
        let pinv = f.inv_nonzero(pv);
        for (i, row) in system.pij.iter().enumerate() {
            for (j, pij) in row.iter().enumerate() {
                let e = pij.eval_unchecked(v);
                if e.is_zero() || f.mul(e, pinv) != sf.m.get(i, j) {
                    return Err(Error::Invariant(format!("p_{i}{j}/p disagrees with M at {v:?}")));
                }
            }
        }
        let status = if k.min(n - k) < 3 { GrsStatus::Grs } else { classify_systematic(&sf) };
        match status {
            GrsStatus::Grs => {
                out.grs += 1;
                if !zero {
                    return Err(Error::Invariant(format!("GRS point {v:?} is not a zero of P")));
                }
            }
            GrsStatus::NonGrsMds => out.nongrs += 1,
            GrsStatus::NotMds => return Err(Error::Invariant("MDS code with zero systematic entry".into())),
        }
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    #[test]
    fn no_variables_matches_systematic_form() {
        let f = Field::prime(17).unwrap();
        let params = EvalParams::new(&f, 3, (1..=6).map(|v| f.from_int(v)).collect(), None).unwrap();
        let pat = BPattern::fixed(&Matrix::zeros(&f, 3, 3));
        let sys = symbolic_system(&params, &pat).unwrap();
        let sf = systematic_form(&TgrsCode::grs(params).generator_matrix()).unwrap();
        let pv = sys.p.eval(&[]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(f.div(sys.pij[i][j].eval(&[]).unwrap(), pv).unwrap(), sf.m.get(i, j));
            }
        }
    }

    #[test]
    fn constant_grid_gives_zero_minor() {
        let f = Field::prime(7).unwrap();
        let params = EvalParams::new(&f, 3, (1..=6).map(|v| f.from_int(v)).collect(), None).unwrap();
        let mut sys = symbolic_system(&params, &BPattern::from_mask(&f, 3, 3, &[(0, 0)]).unwrap()).unwrap();
        let c = MultiPoly::constant(&f, 1, Felt(3));
        sys.pij = vec![vec![c.clone(); 3]; 3];
        assert!(big_p(&sys, &([0, 1, 2], [0, 1, 2])).unwrap().is_zero());
        assert!(big_p(&sys, &([0, 2, 1], [0, 1, 2])).is_err());
    }

    #[test]
    fn zero_counts() {
        let f = Field::prime(17).unwrap();
        assert_eq!(count_zeros(&MultiPoly::zero(&f, 2)).unwrap(), 289);
        assert_eq!(count_zeros(&MultiPoly::parse(&f, 1, "3*x0+5").unwrap()).unwrap(), 1);
        assert!(count_zeros(&MultiPoly::zero(&f, 7)).is_err());
    }
}
