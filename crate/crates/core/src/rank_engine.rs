//! Rank, maxRank and minRank of ACI-matrices and the full-rank predicates.
//!
//! Every minor of an ACI-matrix is multilinear: an indeterminate lives in
//! one column, and a determinant is linear in each column. Hence the rank
//! over the fraction field equals maxRank over any field, and a witness can
//! be found one indeterminate at a time from two candidate values.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aci_core::{complete, AciMatrix, Completion, VarId};
use crate::error::{Error, Result};
use crate::poly::{bareiss_rank, Poly};
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest number of completions an exhaustive search may visit.
    pub max_completions: u64,
    pub rng_seed: u64,
    pub random_tries: u32,
    /// Largest column count for which all column subsets are examined.
    pub column_limit: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_completions: 1 << 20,
            rng_seed: 42,
            random_tries: 512,
            column_limit: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    Exhaustive,
    SymbolicWitness,
    SymbolicOnly,
}

impl RankMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankMethod::Exhaustive => "exhaustive",
            RankMethod::SymbolicWitness => "symbolic+witness",
            RankMethod::SymbolicOnly => "symbolic-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    /// Present only when every completion was examined.
    pub rank_set: Option<BTreeSet<usize>>,
    pub max_rank: usize,
    pub min_rank: Option<usize>,
    pub max_witness: Option<Completion>,
    pub min_witness: Option<Completion>,
    /// Lexicographically first completion of each attained rank.
    pub witnesses: BTreeMap<usize, Completion>,
    pub method: RankMethod,
}

impl RankReport {
    pub fn is_constant_rank(&self) -> Option<bool> {
        self.min_rank.map(|lo| lo == self.max_rank)
    }
}

/// Number of completions over the active indeterminates, if finite.
pub fn completion_count(m: &AciMatrix) -> Option<u128> {
    let p = m.field().size()? as u128;
    let k = m.active_vars().len() as u32;
    Some(p.checked_pow(k).unwrap_or(u128::MAX))
}

pub fn rank_of_completion(m: &AciMatrix, c: &Completion) -> Result<usize> {
    Ok(complete(m, c)?.rank())
}

/// Rank over the fraction field `F(x_1, ..., x_k)`.
pub fn symbolic_rank(m: &AciMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if m.is_constant() {
        return complete(m, &m.zero_completion())
            .expect("constant matrix")
            .rank();
    }
    let nvars = m.vars().len();
    let a = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| Poly::from_affine(e, nvars))
                .collect()
        })
        .collect();
    bareiss_rank(a, m.field(), nvars)
}

/// The matrix compiled to residues mod `p` over its active indeterminates.
struct ModP {
    p: u32,
    rows: usize,
    cols: usize,
    vars: Vec<VarId>,
    base: Vec<u32>,
    terms: Vec<Vec<(usize, u32)>>,
}

impl ModP {
    fn new(m: &AciMatrix) -> Result<Self> {
        let FieldSpec::Prime(p) = m.field() else {
            return Err(Error::InfiniteField);
        };
        let vars = m.active_vars();
        let slot: BTreeMap<VarId, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut base = Vec::with_capacity(m.rows() * m.cols());
        let mut terms = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for e in m.row(i) {
                base.push(e.constant_term().residue().expect("prime field"));
                terms.push(
                    e.terms()
                        .map(|(id, c)| (slot[&id], c.residue().expect("prime field")))
                        .collect(),
                );
            }
        }
        Ok(Self {
            p,
            rows: m.rows(),
            cols: m.cols(),
            vars,
            base,
            terms,
        })
    }

    fn rank_at(&self, values: &[u32], scratch: &mut Vec<u32>) -> usize {
        let p = self.p as u64;
        scratch.clear();
        for (b, ts) in self.base.iter().zip(&self.terms) {
            let mut v = *b as u64;
            for &(k, c) in ts {
                v += c as u64 * values[k] as u64;
            }
            scratch.push((v % p) as u32);
        }
        if self.p == 2 && self.cols <= 64 {
            gf2_rank(scratch, self.rows, self.cols)
        } else {
            modp_rank(scratch, self.rows, self.cols, self.p)
        }
    }

    fn completion(&self, m: &AciMatrix, values: &[u32]) -> Completion {
        let mut c = m.zero_completion();
        for (id, &v) in self.vars.iter().zip(values) {
            c.set(*id, m.field().from_i64(v as i64));
        }
        c
    }
}

fn gf2_rank(a: &[u32], rows: usize, cols: usize) -> usize {
    let mut packed: Vec<u64> = (0..rows)
        .map(|i| (0..cols).fold(0u64, |acc, j| acc | ((a[i * cols + j] as u64 & 1) << j)))
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let bit = 1u64 << col;
        let Some(p) = (rank..rows).find(|&i| packed[i] & bit != 0) else {
            continue;
        };
        packed.swap(rank, p);
        let pivot = packed[rank];
        for row in packed.iter_mut().skip(rank + 1) {
            if *row & bit != 0 {
                *row ^= pivot;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn modp_rank(a: &mut [u32], rows: usize, cols: usize, p: u32) -> usize {
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = crate::scalars::inv_mod(a[rank * cols + col], p) as u64;
        for i in rank + 1..rows {
            let f = a[i * cols + col] as u64 * inv % p64;
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let sub = f * a[rank * cols + j] as u64 % p64;
                a[i * cols + j] = ((a[i * cols + j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// Visits every completion over the active indeterminates, in
/// lexicographic order of values by id (the last id varies fastest).
/// The visitor returns `false` to stop early.
pub fn for_each_completion(
    m: &AciMatrix,
    budget: &SearchBudget,
    mut visit: impl FnMut(&[u32], usize) -> bool,
) -> Result<()> {
    let compiled = ModP::new(m)?;
    let count = completion_count(m).expect("finite field");
    if count > budget.max_completions as u128 {
        return Err(Error::BudgetExceeded {
            needed: format!("{}^{}", compiled.p, compiled.vars.len()),
            budget: budget.max_completions,
        });
    }
    let k = compiled.vars.len();
    let mut values = vec![0u32; k];
    let mut scratch = Vec::with_capacity(m.rows() * m.cols());
    loop {
        let r = compiled.rank_at(&values, &mut scratch);
        if !visit(&values, r) {
            return Ok(());
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < compiled.p {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// The exact Rank set over a finite field by enumerating all completions.
pub fn rank_set_exhaustive(m: &AciMatrix, budget: &SearchBudget) -> Result<RankReport> {
    let compiled = ModP::new(m)?;
    let mut firsts: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let cap = m.rows().min(m.cols());
    for_each_completion(m, budget, |values, r| {
        firsts.entry(r).or_insert_with(|| values.to_vec());
        // Every rank 0..=min{m,n} seen: nothing left to learn.
        firsts.len() < cap + 1
    })?;
    let witnesses: BTreeMap<usize, Completion> = firsts
        .iter()
        .map(|(r, v)| (*r, compiled.completion(m, v)))
        .collect();
    let rank_set: BTreeSet<usize> = witnesses.keys().copied().collect();
    let max_rank = *rank_set.last().expect("at least one completion");
    let min_rank = *rank_set.first().expect("at least one completion");
    Ok(RankReport {
        max_witness: witnesses.get(&max_rank).cloned(),
        min_witness: witnesses.get(&min_rank).cloned(),
        rank_set: Some(rank_set),
        max_rank,
        min_rank: Some(min_rank),
        witnesses,
        method: RankMethod::Exhaustive,
    })
}

/// maxRank with a witness completion.
pub fn max_rank(m: &AciMatrix, budget: &SearchBudget) -> Result<(usize, Option<Completion>)> {
    let u = symbolic_rank(m);
    let field = m.field();
    if u == 0 {
        return Ok((0, Some(m.zero_completion())));
    }
    if let FieldSpec::Prime(p) = field {
        if p as usize > m.rows().min(m.cols()) {
            let compiled = ModP::new(m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.rng_seed);
            let mut values = vec![0u32; compiled.vars.len()];
            let mut scratch = Vec::new();
            for _ in 0..budget.random_tries {
                values.iter_mut().for_each(|v| *v = rng.gen_range(0..p));
                if compiled.rank_at(&values, &mut scratch) == u {
                    return Ok((u, Some(compiled.completion(m, &values))));
                }
            }
        }
    }
    let witness = greedy_witness(m, u)?;
    Ok((u, Some(witness)))
}

/// Fixes the active indeterminates in id order to the first value of
/// 0, 1, -1, 2, ... that keeps the symbolic rank at `target`.
fn greedy_witness(m: &AciMatrix, target: usize) -> Result<Completion> {
    let mut current = m.clone();
    let mut witness = m.zero_completion();
    let candidates: Vec<Scalar> = m.field().small_values(2);
    for id in m.active_vars() {
        let mut fixed = false;
        for v in &candidates {
            let next = current.substitute(id, v);
            if symbolic_rank(&next) == target {
                current = next;
                witness.set(id, v.clone());
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::InternalAssertionFailed(format!(
                "no value keeps rank {target} at indeterminate #{}",
                id.0
            )));
        }
    }
    let r = rank_of_completion(m, &witness)?;
    if r != target {
        return Err(Error::InternalAssertionFailed(format!(
            "witness has rank {r}, expected {target}"
        )));
    }
    Ok(witness)
}

pub fn min_rank_exhaustive(m: &AciMatrix, budget: &SearchBudget) -> Result<(usize, Completion)> {
    let report = rank_set_exhaustive(m, budget)?;
    Ok((
        report.min_rank.expect("exhaustive"),
        report.min_witness.expect("exhaustive"),
    ))
}

/// Exhaustive when the field is finite and the budget allows it, otherwise
/// maxRank with a witness and no minimum.
pub fn rank_report(m: &AciMatrix, budget: &SearchBudget) -> Result<RankReport> {
    let fits = completion_count(m).is_some_and(|c| c <= budget.max_completions as u128);
    if fits {
        return rank_set_exhaustive(m, budget);
    }
    let (max_rank, max_witness) = max_rank(m, budget)?;
    let method = if max_witness.is_some() {
        RankMethod::SymbolicWitness
    } else {
        RankMethod::SymbolicOnly
    };
    let mut witnesses = BTreeMap::new();
    if let Some(w) = &max_witness {
        witnesses.insert(max_rank, w.clone());
    }
    Ok(RankReport {
        rank_set: None,
        max_rank,
        min_rank: None,
        max_witness,
        min_witness: None,
        witnesses,
        method,
    })
}

/// Searches for a completion whose rank satisfies `pred`: exhaustively over
/// a finite field, or over the grid of small values over the rationals
/// (bounded by the budget). Returns the first hit.
pub fn find_completion(
    m: &AciMatrix,
    budget: &SearchBudget,
    pred: impl Fn(usize) -> bool,
) -> Result<Option<(Completion, usize)>> {
    if m.field().is_finite() {
        let compiled = ModP::new(m)?;
        let mut hit = None;
        for_each_completion(m, budget, |values, r| {
            if pred(r) {
                hit = Some((values.to_vec(), r));
                return false;
            }
            true
        })?;
        return Ok(hit.map(|(v, r)| (compiled.completion(m, &v), r)));
    }
    let vars = m.active_vars();
    if vars.is_empty() {
        let r = rank_of_completion(m, &m.zero_completion())?;
        return Ok(pred(r).then(|| (m.zero_completion(), r)));
    }
    let per_var = m.rows().min(m.cols()) + 1;
    let grid = m.field().small_values(per_var);
    let mut visited: u64 = 0;
    let mut idx = vec![0usize; vars.len()];
    loop {
        let mut c = m.zero_completion();
        for (id, &k) in vars.iter().zip(&idx) {
            c.set(*id, grid[k].clone());
        }
        let r = rank_of_completion(m, &c)?;
        if pred(r) {
            return Ok(Some((c, r)));
        }
        visited += 1;
        if visited >= budget.max_completions {
            return Ok(None);
        }
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Full Row maxRank. A tall degenerate matrix counts as FRmR.
pub fn is_frmr(m: &AciMatrix) -> bool {
    m.cols() == 0 || symbolic_rank(m) == m.rows()
}

/// Full Column maxRank. A wide degenerate matrix counts as FCmR.
pub fn is_fcmr(m: &AciMatrix) -> bool {
    m.rows() == 0 || symbolic_rank(m) == m.cols()
}

pub fn is_fmr(m: &AciMatrix) -> bool {
    symbolic_rank(m) == m.rows().min(m.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix;

    const Q: FieldSpec = FieldSpec::Rational;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::Prime(p)
    }

    fn remark(f: FieldSpec) -> AciMatrix {
        parse_matrix(f, "1, 1, 1, 1; 1, 1, 1, x; 1, 1, 1, y").unwrap()
    }

    #[test]
    fn exhaustive_small() {
        let b = SearchBudget::default();
        let m = parse_matrix(gf(2), "x, 1; 1, y").unwrap();
        let r = rank_set_exhaustive(&m, &b).unwrap();
        assert_eq!(r.rank_set, Some(BTreeSet::from([1, 2])));
        assert_eq!(r.min_rank, Some(1));
        let w = r.min_witness.unwrap();
        assert_eq!(rank_of_completion(&m, &w).unwrap(), 1);
        // x = y = 1 is the first rank-1 completion in lexicographic order.
        assert!(w.iter().all(|(_, v)| v.is_one()));

        let id = parse_matrix(gf(3), "1, 0; 0, 1").unwrap();
        assert_eq!(
            rank_set_exhaustive(&id, &b).unwrap().rank_set,
            Some(BTreeSet::from([2]))
        );
        assert!(matches!(
            rank_set_exhaustive(&parse_matrix(Q, "x").unwrap(), &b),
            Err(Error::InfiniteField)
        ));
        let tiny = SearchBudget {
            max_completions: 3,
            ..b
        };
        assert!(matches!(
            rank_set_exhaustive(&m, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn remark_matrix_ranks() {
        let b = SearchBudget::default();
        for f in [Q, gf(5)] {
            let m = remark(f);
            assert_eq!(symbolic_rank(&m), 2);
            let (r, w) = max_rank(&m, &b).unwrap();
            assert_eq!(r, 2);
            assert_eq!(rank_of_completion(&m, &w.unwrap()).unwrap(), 2);
            assert!(!is_frmr(&m));
        }
        let (lo, w) = min_rank_exhaustive(&remark(gf(5)), &b).unwrap();
        assert_eq!(lo, 1);
        assert_eq!(rank_of_completion(&remark(gf(5)), &w).unwrap(), 1);
    }

    #[test]
    fn degenerate_conventions() {
        for (m, n) in [(0, 0), (3, 0), (0, 2)] {
            let z = AciMatrix::zeros(Q, m, n);
            assert!(is_frmr(&z) && is_fcmr(&z) && is_fmr(&z));
            assert_eq!(max_rank(&z, &SearchBudget::default()).unwrap().0, 0);
        }
        let w = parse_matrix(Q, "1, x").unwrap();
        assert!(is_frmr(&w));
        assert!(!is_fcmr(&w));
    }

    #[test]
    fn greedy_works_over_gf2() {
        // Needs x = 1 and y = 1 simultaneously for full rank over GF(2).
        let m = parse_matrix(gf(2), "x, 1, 0; 0, y, 1; 1, 0, 1").unwrap();
        let u = symbolic_rank(&m);
        let w = greedy_witness(&m, u).unwrap();
        assert_eq!(rank_of_completion(&m, &w).unwrap(), u);
        let exact = rank_set_exhaustive(&m, &SearchBudget::default()).unwrap();
        assert_eq!(exact.max_rank, u);
    }

    #[test]
    fn rational_grid_search() {
        let m = parse_matrix(Q, "x, 1; 1, y").unwrap();
        let (c, r) = find_completion(&m, &SearchBudget::default(), |r| r < 2)
            .unwrap()
            .unwrap();
        assert_eq!(r, 1);
        assert_eq!(rank_of_completion(&m, &c).unwrap(), 1);
    }

    #[test]
    fn gf2_bitset_matches_generic() {
        let a = [1, 1, 0, 0, 1, 1, 1, 0, 1];
        let mut b = a;
        assert_eq!(gf2_rank(&a, 3, 3), modp_rank(&mut b, 3, 3, 2));
        assert_eq!(gf2_rank(&a, 3, 3), 2);
    }
}
