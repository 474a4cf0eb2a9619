//! Exhaustive enumeration of coefficient matrices that yield MDS codes.
//!
//! Wildcard cells are enumerated in odometer order (row-major, last cell
//! fastest). `det(I_k + B F_T)` is affine in each row of `B`, so for the last
//! row `r` holding wildcards it splits as `const_T + sum_j x_j w_T[j]`, where
//! both parts depend only on the other rows. The kernel computes these once
//! per prefix (assignment of the wildcards outside row `r`) and then sweeps
//! the row-`r` wildcards cheaply.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{binomial, subset_data};
use crate::code::EvalParams;
use crate::error::{Error, Result};
use crate::ff::{Felt, Field};
use crate::matrix::{det_in_place, Matrix};

/// Coefficient matrix with some cells left free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPattern {
    field: Field,
    rows: usize,
    cols: usize,
    /// `None` marks a wildcard.
    cells: Vec<Option<Felt>>,
}

impl BPattern {
    pub fn new(field: &Field, rows: usize, cols: usize, cells: Vec<Option<Felt>>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} cells for a {rows} x {cols} pattern",
                cells.len()
            )));
        }
        if cells.iter().flatten().any(|v| v.index() >= field.order()) {
            return Err(Error::FieldMismatch);
        }
        Ok(BPattern { field: field.clone(), rows, cols, cells })
    }

    /// Every cell free.
    pub fn all_free(field: &Field, rows: usize, cols: usize) -> Self {
        BPattern { field: field.clone(), rows, cols, cells: vec![None; rows * cols] }
    }

    /// Cells in `mask` free, all others zero.
    pub fn from_mask(field: &Field, rows: usize, cols: usize, mask: &[(usize, usize)]) -> Result<Self> {
        let mut cells = vec![Some(Felt::ZERO); rows * cols];
        for &(i, j) in mask {
            if i >= rows || j >= cols {
                return Err(Error::Index(format!("mask cell ({i},{j}) outside {rows} x {cols}")));
            }
            cells[i * cols + j] = None;
        }
        Ok(BPattern { field: field.clone(), rows, cols, cells })
    }

    pub fn fixed(b: &Matrix) -> Self {
        BPattern {
            field: b.field().clone(),
            rows: b.rows(),
            cols: b.cols(),
            cells: b.data().iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Parses `a,b;c,*` style text, with `*` marking a wildcard.
    pub fn parse(field: &Field, text: &str) -> Result<Self> {
        let rows: Vec<Vec<Option<Felt>>> = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|tok| {
                        let tok = tok.trim();
                        if tok == "*" {
                            Ok(None)
                        } else {
                            field.parse(tok).map(Some)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(field, rows)
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Option<Felt>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::Dimension(format!(
                "row {i} of B has {} entries, expected {c}",
                row.len()
            )));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<Felt> {
        self.cells[i * self.cols + j]
    }

    /// Wildcard cells in row-major order.
    pub fn wildcards(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .cartesian_product(0..self.cols)
            .filter(|&(i, j)| self.cell(i, j).is_none())
            .collect()
    }

    pub fn has_wildcards(&self) -> bool {
        self.cells.iter().any(Option::is_none)
    }

    /// The matrix with wildcards filled from `values` in row-major order.
    pub fn instantiate(&self, values: &[Felt]) -> Result<Matrix> {
        let wild = self.wildcards();
        if values.len() != wild.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} wildcards",
                values.len(),
                wild.len()
            )));
        }
        let mut it = values.iter();
        let data: Vec<Vec<Felt>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.cell(i, j).unwrap_or_else(|| *it.next().expect("counted")))
                    .collect()
            })
            .collect();
        Matrix::from_rows(&self.field, &data)
    }

    /// `q^w` for `w` wildcards.
    pub fn candidate_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.wildcards().len() as u32)
    }
}

impl std::fmt::Display for BPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.cell(i, j).map_or("*".to_string(), |v| self.field.format(v)))
                    .join(",")
            })
            .collect();
        f.write_str(&rows.join(";"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Quick,
    Standard,
    Long,
}

impl Tier {
    pub fn limit(self) -> u128 {
        match self {
            Tier::Quick => 1_000_000,
            Tier::Standard => 100_000_000,
            Tier::Long => 10_000_000_000,
        }
    }
}

impl std::str::FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Tier::Quick),
            "standard" => Ok(Tier::Standard),
            "long" => Ok(Tier::Long),
            _ => Err(Error::Parse(format!("unknown tier '{s}'"))),
        }
    }
}

/// How each candidate is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Per prefix, eliminate the forbidden values of the last wildcard for
    /// each subset at once.
    #[default]
    Sieve,
    /// Per candidate, test subsets in lexicographic order until one fails.
    EarlyExit,
    /// Per candidate, test every subset.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    /// Maximum number of member matrices retained.
    pub limit: usize,
    pub strategy: Strategy,
    pub tier: Tier,
    /// First prefix index to process, for resuming a partial run.
    pub start_prefix: u64,
    pub stop: Option<Arc<AtomicBool>>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            threads: 0,
            limit: 0,
            strategy: Strategy::Sieve,
            tier: Tier::Quick,
            start_prefix: 0,
            stop: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub total: u64,
    pub omega_count: u64,
    pub sample_members: Vec<String>,
    /// Candidates examined in this run.
    pub processed: u64,
    pub completed: bool,
    /// Prefix index from which an interrupted run can resume.
    pub resume_prefix: Option<u64>,
    pub prefix_count: u64,
}

/// Precomputed `F_T` for every k-subset, shared read-only by all workers.
struct SubsetTable {
    k: usize,
    r: usize,
    /// Row-major `(n-k) x k` blocks, one per subset in lexicographic order.
    f: Vec<Felt>,
    count: usize,
}

impl SubsetTable {
    fn new(params: &EvalParams) -> Self {
        let (n, k) = (params.n(), params.k());
        let mut f = Vec::new();
        let mut count = 0;
        for t in (0..n).combinations(k) {
            let sd = subset_data(params, &t).expect("valid subset");
            f.extend_from_slice(sd.f.data());
            count += 1;
        }
        SubsetTable { k, r: n - k, f, count }
    }

    fn block(&self, t: usize) -> &[Felt] {
        let sz = self.r * self.k;
        &self.f[t * sz..(t + 1) * sz]
    }
}

struct Kernel<'a> {
    field: &'a Field,
    table: &'a SubsetTable,
    pattern: &'a BPattern,
    elems: Vec<Felt>,
    /// Row whose wildcards form the inner sweep.
    inner_row: usize,
    /// Columns of the inner wildcards.
    inner_cols: Vec<usize>,
    /// Wildcard cells outside the inner row, row-major.
    prefix_cells: Vec<(usize, usize)>,
    strategy: Strategy,
}

#[derive(Default)]
struct ChunkResult {
    count: u64,
    processed: u64,
    samples: Vec<Vec<Felt>>,
}

impl<'a> Kernel<'a> {
    fn q(&self) -> u64 {
        self.elems.len() as u64
    }

    /// Decodes a prefix index into wildcard values (odometer, last fastest).
    fn prefix_values(&self, mut idx: u64) -> Vec<Felt> {
        let q = self.q();
        let mut vals = vec![Felt::ZERO; self.prefix_cells.len()];
        for v in vals.iter_mut().rev() {
            *v = self.elems[(idx % q) as usize];
            idx /= q;
        }
        vals
    }

    /// For each subset: the constant part and the coefficients of the inner
    /// wildcards in `det(I + B F_T)`.
    fn affine_forms(&self, b: &Matrix, consts: &mut Vec<Felt>, coeffs: &mut Vec<Felt>, scratch: &mut Vec<Felt>) {
        let f = self.field;
        let (k, r) = (self.table.k, self.table.r);
        let row = self.inner_row;
        let nin = self.inner_cols.len();
        consts.clear();
        coeffs.clear();
        let mut m = vec![Felt::ZERO; k * k];
        let mut cof = vec![Felt::ZERO; k];
        for t in 0..self.table.count {
            let fb = self.table.block(t);
            // rows of I + B F_T except the inner row
            for i in 0..k {
                if i == row {
                    continue;
                }
                for s in 0..k {
                    let mut acc = if i == s { Felt::ONE } else { Felt::ZERO };
                    for j in 0..r {
                        let bij = b.get(i, j);
                        if !bij.is_zero() {
                            acc = f.mul_add(acc, bij, fb[j * k + s]);
                        }
                    }
                    m[i * k + s] = acc;
                }
            }
            // cofactors along the inner row
            for (s, c) in cof.iter_mut().enumerate() {
                scratch.clear();
                for i in (0..k).filter(|&i| i != row) {
                    scratch.extend((0..k).filter(|&col| col != s).map(|col| m[i * k + col]));
                }
                let d = det_in_place(f, scratch, k - 1);
                *c = if (row + s).is_multiple_of(2) { d } else { f.neg(d) };
            }
            // w[j] = sum_s F_T[j][s] cof[s]
            let w = |j: usize| {
                (0..k).fold(Felt::ZERO, |acc, s| f.mul_add(acc, fb[j * k + s], cof[s]))
            };
            let mut c0 = cof[row];
            for j in 0..r {
                if let Some(v) = self.pattern.cell(row, j) {
                    if !v.is_zero() {
                        c0 = f.mul_add(c0, v, w(j));
                    }
                }
            }
            consts.push(c0);
            coeffs.extend(self.inner_cols.iter().map(|&j| w(j)));
        }
        debug_assert_eq!(coeffs.len(), self.table.count * nin);
    }

    fn run_prefix(&self, idx: u64, limit: usize, out: &mut ChunkResult) {
        let f = self.field;
        let pvals = self.prefix_values(idx);
        let mut b = Matrix::zeros(f, self.pattern.rows(), self.pattern.cols());
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                if let Some(v) = self.pattern.cell(i, j) {
                    b.set(i, j, v);
                }
            }
        }
        for (&(i, j), &v) in self.prefix_cells.iter().zip(&pvals) {
            b.set(i, j, v);
        }
        let mut consts = Vec::new();
        let mut coeffs = Vec::new();
        let mut scratch = Vec::new();
        self.affine_forms(&b, &mut consts, &mut coeffs, &mut scratch);

        let nin = self.inner_cols.len();
        let q = self.elems.len();
        let tcount = self.table.count;
        let record = |out: &mut ChunkResult, inner: &[Felt]| {
            out.count += 1;
            if out.samples.len() < limit {
                let mut v = pvals.clone();
                v.extend_from_slice(inner);
                out.samples.push(v);
            }
        };
        let inner_total = (q as u64).pow(nin as u32);
        out.processed += inner_total;

        if nin == 0 {
            if consts.iter().all(|c| !c.is_zero()) {
                record(out, &[]);
            }
            return;
        }

        let mut digits = vec![0usize; nin];
        let mut vals = vec![Felt::ZERO; nin];
        match self.strategy {
            Strategy::Sieve => {
                // sweep all but the last inner wildcard; the last is sieved
                let outer = nin - 1;
                let mut base = vec![Felt::ZERO; tcount];
                let mut forbidden = vec![false; q];
                loop {
                    for t in 0..tcount {
                        let mut acc = consts[t];
                        for v in 0..outer {
                            acc = f.mul_add(acc, vals[v], coeffs[t * nin + v]);
                        }
                        base[t] = acc;
                    }
                    forbidden.iter_mut().for_each(|x| *x = false);
                    let mut all = false;
                    for t in 0..tcount {
                        let w = coeffs[t * nin + outer];
                        if w.is_zero() {
                            if base[t].is_zero() {
                                all = true;
                                break;
                            }
                        } else {
                            // base + x w = 0  <=>  x = -base / w
                            let x = f.neg(f.div(base[t], w).expect("nonzero"));
                            forbidden[x.index() as usize] = true;
                        }
                    }
                    if !all {
                        for (d, &e) in self.elems.iter().enumerate() {
                            if !forbidden[e.index() as usize] {
                                vals[outer] = self.elems[d];
                                record(out, &vals);
                            }
                        }
                    }
                    if !advance(&mut digits[..outer], &mut vals[..outer], &self.elems) {
                        break;
                    }
                }
            }
            Strategy::EarlyExit | Strategy::Exhaustive => {
                let exhaustive = self.strategy == Strategy::Exhaustive;
                loop {
                    let mut member = true;
                    for t in 0..tcount {
                        let mut acc = consts[t];
                        for v in 0..nin {
                            acc = f.mul_add(acc, vals[v], coeffs[t * nin + v]);
                        }
                        if acc.is_zero() {
                            member = false;
                            if !exhaustive {
                                break;
                            }
                        }
                    }
                    if member {
                        record(out, &vals);
                    }
                    if !advance(&mut digits, &mut vals, &self.elems) {
                        break;
                    }
                }
            }
        }
    }
}

/// Odometer step, last position fastest. Returns false after wrapping.
fn advance(digits: &mut [usize], vals: &mut [Felt], elems: &[Felt]) -> bool {
    for p in (0..digits.len()).rev() {
        digits[p] += 1;
        if digits[p] < elems.len() {
            vals[p] = elems[digits[p]];
            return true;
        }
        digits[p] = 0;
        vals[p] = elems[0];
    }
    false
}

/// Counts the assignments of the wildcards of `pattern` for which the TGRS
/// code is MDS.
pub fn census(params: &EvalParams, pattern: &BPattern, opts: &CensusOptions) -> Result<CensusReport> {
    let f = params.field();
    let (n, k) = (params.n(), params.k());
    if pattern.rows() != k || pattern.cols() != n - k {
        return Err(Error::Dimension(format!(
            "pattern is {} x {}, expected {k} x {}",
            pattern.rows(),
            pattern.cols(),
            n - k
        )));
    }
    if pattern.field() != f {
        return Err(Error::FieldMismatch);
    }
    let total = pattern.candidate_count();
    let limit = opts.tier.limit();
    if total > limit {
        return Err(Error::guard(format!("{:?} tier candidates", opts.tier), total, limit));
    }
    let subsets = binomial(n, k);
    if subsets > crate::classify::SUBSET_GUARD {
        return Err(Error::guard("k-subsets", subsets, crate::classify::SUBSET_GUARD));
    }

    let wild = pattern.wildcards();
    let inner_row = wild.last().map_or(k - 1, |&(i, _)| i);
    let inner_cols: Vec<usize> = wild.iter().filter(|c| c.0 == inner_row).map(|c| c.1).collect();
    let prefix_cells: Vec<(usize, usize)> = wild.iter().copied().filter(|c| c.0 != inner_row).collect();
    let table = SubsetTable::new(params);
    let kernel = Kernel {
        field: f,
        table: &table,
        pattern,
        elems: f.elements().collect(),
        inner_row,
        inner_cols,
        prefix_cells,
        strategy: opts.strategy,
    };
    let q = f.order() as u64;
    let prefix_count = q.pow(kernel.prefix_cells.len() as u32);
    if opts.start_prefix > prefix_count {
        return Err(Error::InvalidParams(format!(
            "resume prefix {} beyond {prefix_count} prefixes",
            opts.start_prefix
        )));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    // Fixed chunking keeps results independent of the thread count.
    let inner_per_prefix = (total / prefix_count as u128).max(1) as u64;
    let chunk = (65_536 / inner_per_prefix).clamp(1, 4096);
    let wave = chunk * 64;

    let mut count = 0u64;
    let mut processed = 0u64;
    let mut samples: Vec<Vec<Felt>> = Vec::new();
    let mut next = opts.start_prefix;
    let stopped = |o: &CensusOptions| o.stop.as_ref().is_some_and(|s| s.load(Ordering::Relaxed));
    while next < prefix_count {
        if stopped(opts) {
            break;
        }
        let end = (next + wave).min(prefix_count);
        let starts: Vec<u64> = (next..end).step_by(chunk as usize).collect();
        let results: Vec<ChunkResult> = pool.install(|| {
            starts
                .par_iter()
                .map(|&s| {
                    let mut res = ChunkResult::default();
                    for idx in s..(s + chunk).min(end) {
                        kernel.run_prefix(idx, opts.limit, &mut res);
                    }
                    res
                })
                .collect()
        });
        for r in results {
            count += r.count;
            processed += r.processed;
            let room = opts.limit.saturating_sub(samples.len());
            samples.extend(r.samples.into_iter().take(room));
        }
        next = end;
    }
    let completed = next >= prefix_count;
    let sample_members = samples
        .iter()
        .map(|v| pattern.instantiate(v).map(|m| m.to_string()))
        .collect::<Result<_>>()?;
    Ok(CensusReport {
        total: total as u64,
        omega_count: count,
        sample_members,
        processed,
        completed,
        resume_prefix: (!completed).then_some(next),
        prefix_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::mds_fast;
    use crate::code::TgrsCode;

    fn gf(q: u64, n: usize, k: usize) -> EvalParams {
        let f = Field::prime(q).unwrap();
        EvalParams::new(&f, k, (1..=n as i64).map(|v| f.from_int(v)).collect(), None).unwrap()
    }

    fn brute(params: &EvalParams, pattern: &BPattern) -> (u64, Vec<String>) {
        let f = params.field();
        let w = pattern.wildcards().len();
        let elems: Vec<Felt> = f.elements().collect();
        let mut members = Vec::new();
        let mut count = 0;
        for vals in (0..w).map(|_| elems.iter().copied()).multi_cartesian_product() {
            let b = pattern.instantiate(&vals).unwrap();
            if mds_fast(&TgrsCode::from_b(params.clone(), b.clone()).unwrap()).is_mds {
                count += 1;
                members.push(b.to_string());
            }
        }
        if w == 0 {
            let b = pattern.instantiate(&[]).unwrap();
            if mds_fast(&TgrsCode::from_b(params.clone(), b.clone()).unwrap()).is_mds {
                count += 1;
                members.push(b.to_string());
            }
        }
        (count, members)
    }

    #[test]
    fn strategies_match_brute_force() {
        let params = gf(5, 5, 2);
        let f = params.field().clone();
        let patterns = [
            BPattern::all_free(&f, 2, 3),
            BPattern::parse(&f, "*,0,1;2,*,*").unwrap(),
            BPattern::parse(&f, "*,*,*;1,0,2").unwrap(),
            BPattern::parse(&f, "1,0,0;0,0,*").unwrap(),
            BPattern::parse(&f, "1,0,0;0,0,3").unwrap(),
        ];
        for pat in &patterns {
            let (count, members) = brute(&params, pat);
            for strategy in [Strategy::Sieve, Strategy::EarlyExit, Strategy::Exhaustive] {
                let opts = CensusOptions { strategy, limit: usize::MAX, threads: 1, ..Default::default() };
                let rep = census(&params, pat, &opts).unwrap();
                assert_eq!(rep.omega_count, count, "{pat} {strategy:?}");
                assert_eq!(rep.sample_members, members, "{pat} {strategy:?}");
                assert!(rep.completed);
            }
        }
    }

    #[test]
    fn pattern_parse_and_guard() {
        let f = Field::prime(7).unwrap();
        let p = BPattern::parse(&f, "*, 1; 0, *").unwrap();
        assert_eq!(p.wildcards(), vec![(0, 0), (1, 1)]);
        assert_eq!(p.to_string(), "*,1;0,*");
        assert!(BPattern::parse(&f, "*,1;0").is_err());
        let params = gf(7, 6, 3);
        let big = BPattern::all_free(&f, 3, 3);
        assert!(matches!(
            census(&params, &big, &CensusOptions::default()),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(census(&params, &p, &CensusOptions::default()).is_err());
    }

    #[test]
    fn stop_flag_reports_partial() {
        let params = gf(7, 6, 3);
        let f = params.field().clone();
        let pat = BPattern::parse(&f, "*,*,0;*,*,0;*,*,0").unwrap();
        let stop = Arc::new(AtomicBool::new(true));
        let opts = CensusOptions { stop: Some(stop), ..Default::default() };
        let rep = census(&params, &pat, &opts).unwrap();
        assert!(!rep.completed);
        assert_eq!(rep.resume_prefix, Some(0));
        assert_eq!(rep.omega_count, 0);
    }
}
