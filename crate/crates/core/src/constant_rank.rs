//! constantRank detection and canonical forms.
//!
//! A constantRank matrix over a field with at least `max{m, n+1}` elements
//! is equivalent to a unit-triangular template. Each WST block is reduced
//! separately by searching pivot columns: row `k` of the row operation must
//! send pivot `k` to exactly `1` and the earlier pivots to exactly `0`,
//! which is a linear system on the coefficient blocks of those columns.

use std::collections::HashSet;
use std::fmt;

use crate::aci_core::{left_multiply, row_coefficient_matrix, AciMatrix, ColumnSelector};
use crate::decomposition::{wst_decompose, WstDecomposition};
use crate::error::{Error, RankWitnessPair, Result};
use crate::linalg::ConstMatrix;
use crate::rank_engine::{
    completion_count, find_completion, max_rank, rank_set_exhaustive, SearchBudget,
};
use crate::scalars::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormTag {
    /// `ρ = m < n`: `[U | *]`.
    WideI,
    /// `ρ = m = n`: `U`.
    SquareIi,
    /// `ρ = n < m`: `[*; U]`.
    TallIii,
    /// `ρ < min{m, n}`: a zero `r × s` block with `r + s = m + n - ρ`.
    DeficientIv,
}

impl FormTag {
    pub fn for_dims(m: usize, n: usize, rho: usize) -> FormTag {
        if rho == m && m < n {
            FormTag::WideI
        } else if rho == m && m == n {
            FormTag::SquareIi
        } else if rho == n && n < m {
            FormTag::TallIii
        } else {
            FormTag::DeficientIv
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FormTag::WideI => "wide-i",
            FormTag::SquareIi => "square-ii",
            FormTag::TallIii => "tall-iii",
            FormTag::DeficientIv => "deficient-iv",
        }
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The block-refined arrangement
/// `[[U_W | *] * *; 0 U_S *; 0 0 [*; U_T]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedForm {
    pub r: ConstMatrix,
    pub column_order: Vec<usize>,
    pub arranged: AciMatrix,
    pub w_dims: (usize, usize),
    pub s_size: usize,
    pub t_dims: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub tag: FormTag,
    pub rho: usize,
    /// The zero block `r × s` of the template; `(0, n)` for tags i and ii,
    /// `(m, 0)` for tag iii.
    pub zero_rows: usize,
    pub zero_cols: usize,
    pub r: ConstMatrix,
    pub column_order: Vec<usize>,
    pub arranged: AciMatrix,
    pub refined: RefinedForm,
    /// Set for the zero-rank case, which the characterization excludes.
    pub outside_characterization: bool,
}

/// Pivot rows for `x`: `rows[k] · x` is `1` at `pivots[k]` and `0` at the
/// earlier pivots. `count` pivots are sought.
struct Pivots {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

fn column_blocks(x: &AciMatrix) -> Vec<ConstMatrix> {
    (0..x.cols())
        .map(|c| {
            let sel = ColumnSelector::new(x.cols(), [c]).expect("in range");
            row_coefficient_matrix(x, Some(&sel))
        })
        .collect()
}

fn pivot_row(
    blocks: &[ConstMatrix],
    earlier: &[usize],
    c: usize,
    rows: usize,
) -> Option<Vec<Scalar>> {
    let field = blocks[c].field();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    let mut target = Vec::new();
    for &e in earlier {
        for j in 0..blocks[e].cols() {
            cols.push((0..rows).map(|i| blocks[e].get(i, j).clone()).collect());
            target.push(field.zero());
        }
    }
    for j in 0..blocks[c].cols() {
        cols.push((0..rows).map(|i| blocks[c].get(i, j).clone()).collect());
        target.push(if j == 0 { field.one() } else { field.zero() });
    }
    let system = ConstMatrix::from_rows(field, cols).ok()?.transpose();
    system.solve_left(&target)
}

fn find_pivots(x: &AciMatrix, count: usize) -> Option<Pivots> {
    if count == 0 {
        return Some(Pivots {
            rows: Vec::new(),
            pivots: Vec::new(),
        });
    }
    let blocks = column_blocks(x);
    let mut failed: HashSet<u64> = HashSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    if search(x, &blocks, count, &mut chosen, &mut rows, &mut failed) {
        Some(Pivots {
            rows,
            pivots: chosen,
        })
    } else {
        None
    }
}

fn search(
    x: &AciMatrix,
    blocks: &[ConstMatrix],
    count: usize,
    chosen: &mut Vec<usize>,
    rows: &mut Vec<Vec<Scalar>>,
    failed: &mut HashSet<u64>,
) -> bool {
    if chosen.len() == count {
        return true;
    }
    let mask: u64 = chosen.iter().map(|&c| 1u64 << c).sum();
    if failed.contains(&mask) {
        return false;
    }
    for c in 0..x.cols() {
        if chosen.contains(&c) {
            continue;
        }
        let Some(y) = pivot_row(blocks, chosen, c, x.rows()) else {
            continue;
        };
        chosen.push(c);
        rows.push(y);
        if search(x, blocks, count, chosen, rows, failed) {
            return true;
        }
        chosen.pop();
        rows.pop();
    }
    failed.insert(mask);
    false
}

/// Row operation and column order putting a block into its template.
struct Reduced {
    r: ConstMatrix,
    order: Vec<usize>,
}

/// `[U | *]` for wide blocks and `U` for square ones.
fn reduce_upper(x: &AciMatrix) -> Option<Reduced> {
    let p = x.rows();
    let piv = find_pivots(x, p)?;
    let mut order = piv.pivots.clone();
    order.extend((0..x.cols()).filter(|c| !piv.pivots.contains(c)));
    let r = if p == 0 {
        ConstMatrix::zeros(x.field(), 0, 0)
    } else {
        ConstMatrix::from_rows(x.field(), piv.rows).ok()?
    };
    Some(Reduced { r, order })
}

/// `[*; U]` for tall blocks: the pivot rows go to the bottom and unit
/// vectors complete them to a basis on top.
fn reduce_lower(x: &AciMatrix) -> Option<Reduced> {
    let (p, q) = x.dims();
    let field = x.field();
    let piv = find_pivots(x, q)?;
    let mut basis = piv.rows.clone();
    let mut free = Vec::new();
    for i in 0..p {
        if free.len() + q == p {
            break;
        }
        let mut e = vec![field.zero(); p];
        e[i] = field.one();
        let mut trial = basis.clone();
        trial.push(e.clone());
        if ConstMatrix::from_rows(field, trial).ok()?.rank() == basis.len() + 1 {
            basis.push(e.clone());
            free.push(e);
        }
    }
    free.extend(piv.rows);
    let r = if p == 0 {
        ConstMatrix::zeros(field, 0, 0)
    } else {
        ConstMatrix::from_rows(field, free).ok()?
    };
    Some(Reduced {
        r,
        order: piv.pivots,
    })
}

fn block_diag(blocks: &[&ConstMatrix], field: crate::scalars::FieldSpec) -> ConstMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ConstMatrix::zeros(field, n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    out
}

fn unit_upper(a: &AciMatrix, row0: usize, col0: usize, size: usize) -> bool {
    let f = a.field();
    (0..size).all(|i| {
        (0..=i).all(|j| {
            let e = a.entry(row0 + i, col0 + j);
            if i == j {
                e.is_constant_value(&f.one())
            } else {
                e.is_zero()
            }
        })
    })
}

fn zero_block(a: &AciMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> bool {
    rows.into_iter()
        .all(|i| cols.clone().all(|j| a.entry(i, j).is_zero()))
}

/// Does `a` match the template with zero block `r × s`: a unit upper
/// triangle of order `m - r` at the top left and one of order `n - s` at
/// the bottom right?
pub fn matches_template(a: &AciMatrix, r: usize, s: usize) -> bool {
    let (m, n) = a.dims();
    if r > m || s > n {
        return false;
    }
    let (top, bottom) = (m - r, n - s);
    top <= s
        && bottom <= r
        && unit_upper(a, 0, 0, top)
        && zero_block(a, top..m, 0..s)
        && unit_upper(a, m - bottom, s, bottom)
}

/// Does `a` match the refined block template?
pub fn matches_refined(a: &AciMatrix, w: (usize, usize), s: usize, t: (usize, usize)) -> bool {
    let (m, n) = a.dims();
    if w.0 + s + t.0 != m || w.1 + s + t.1 != n || w.0 > w.1 || t.1 > t.0 {
        return false;
    }
    let (h, k) = (w.1, w.1 + s);
    unit_upper(a, 0, 0, w.0)
        && zero_block(a, w.0..m, 0..h)
        && unit_upper(a, w.0, h, s)
        && zero_block(a, w.0 + s..m, 0..k)
        && unit_upper(a, m - t.1, k, t.1)
}

fn arrange(m: &AciMatrix, r: &ConstMatrix, order: &[usize]) -> Result<AciMatrix> {
    left_multiply(r, &m.reorder_columns(order)?)
}

fn witness_pair(m: &AciMatrix, budget: &SearchBudget) -> Result<Option<RankWitnessPair>> {
    let (high_rank, high) = max_rank(m, budget)?;
    let Some(high) = high else {
        return Ok(None);
    };
    match find_completion(m, budget, |r| r < high_rank) {
        Ok(Some((low, low_rank))) => Ok(Some(RankWitnessPair {
            low,
            low_rank,
            high,
            high_rank,
        })),
        Ok(None) | Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn not_constant(m: &AciMatrix, budget: &SearchBudget) -> Error {
    match witness_pair(m, budget) {
        Ok(Some(pair)) => Error::NotConstantRank(Some(Box::new(pair))),
        Ok(None) => {
            let searched_all = m.field().is_finite()
                && completion_count(m).is_some_and(|c| c <= budget.max_completions as u128);
            if searched_all {
                Error::ReductionFailed("every completion has the same rank".into())
            } else {
                Error::NotConstantRank(None)
            }
        }
        Err(e) => e,
    }
}

pub fn canonical_form(m: &AciMatrix, budget: &SearchBudget) -> Result<CanonicalForm> {
    let field = m.field();
    let (rows, cols) = m.dims();
    let required = rows.max(cols + 1) as u64;
    if !field.has_at_least(required) {
        return Err(Error::FieldTooSmall {
            size: field.size().unwrap_or(u64::MAX),
            required,
        });
    }
    let d = wst_decompose(m, budget)?;
    let (Some(rw), Some(rs), Some(rt)) =
        (reduce_upper(&d.w), reduce_upper(&d.s), reduce_lower(&d.t))
    else {
        return Err(not_constant(m, budget));
    };
    assemble(m, &d, rw, rs, rt)
}

fn assemble(
    m: &AciMatrix,
    d: &WstDecomposition,
    rw: Reduced,
    rs: Reduced,
    rt: Reduced,
) -> Result<CanonicalForm> {
    let field = m.field();
    let (rows, cols) = m.dims();
    let (w, h) = d.w.dims();
    let sz = d.s.rows();
    let (t, tq) = d.t.dims();
    let k = h + sz;
    let rho = w + sz + tq;

    let diag = block_diag(&[&rw.r, &rs.r, &rt.r], field);
    let r_ref = diag.mul(&d.r)?;
    let mut local: Vec<usize> = rw.order.clone();
    local.extend(rs.order.iter().map(|c| c + h));
    local.extend(rt.order.iter().map(|c| c + k));
    let order_ref: Vec<usize> = local.iter().map(|&c| d.column_order[c]).collect();
    let arranged_ref = arrange(m, &r_ref, &order_ref)?;
    if !matches_refined(&arranged_ref, (w, h), sz, (t, tq)) {
        return Err(Error::InternalAssertionFailed(
            "refined template mismatch".into(),
        ));
    }
    let refined = RefinedForm {
        r: r_ref.clone(),
        column_order: order_ref.clone(),
        arranged: arranged_ref,
        w_dims: (w, h),
        s_size: sz,
        t_dims: (t, tq),
    };

    let tag = FormTag::for_dims(rows, cols, rho);
    // Columns: W pivots, S, the rest of W, T.
    let mut cols_hz: Vec<usize> = (0..w).collect();
    cols_hz.extend(h..k);
    cols_hz.extend(w..h);
    cols_hz.extend(k..cols);
    let order_hz: Vec<usize> = cols_hz.iter().map(|&c| order_ref[c]).collect();
    let rows_hz: Vec<usize> = if tag == FormTag::TallIii {
        let t0 = w + sz;
        let mut v: Vec<usize> = (t0..t0 + (t - tq)).collect();
        v.extend(0..t0);
        v.extend(t0 + (t - tq)..rows);
        v
    } else {
        (0..rows).collect()
    };
    let r_hz = ConstMatrix::row_permutation(field, &rows_hz).mul(&r_ref)?;
    let arranged = arrange(m, &r_hz, &order_hz)?;
    let (zero_rows, zero_cols) = match tag {
        FormTag::WideI | FormTag::SquareIi => (0, cols),
        FormTag::TallIii => (rows, 0),
        FormTag::DeficientIv if rho == 0 => (rows, cols),
        FormTag::DeficientIv => (t, k),
    };
    if !matches_template(&arranged, zero_rows, zero_cols) {
        return Err(Error::InternalAssertionFailed(format!(
            "{tag} template mismatch"
        )));
    }
    Ok(CanonicalForm {
        tag,
        rho,
        zero_rows,
        zero_cols,
        r: r_hz,
        column_order: order_hz,
        arranged,
        refined,
        outside_characterization: rho == 0,
    })
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order
            .iter()
            .all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
}

/// Recomputes both arrangements and matches them against their templates.
pub fn verify_canonical_form(m: &AciMatrix, c: &CanonicalForm) -> bool {
    let (rows, cols) = m.dims();
    let check = |r: &ConstMatrix, order: &[usize], arranged: &AciMatrix| {
        r.rows() == rows
            && r.is_invertible()
            && is_permutation(order, cols)
            && arrange(m, r, order).is_ok_and(|a| a.same_entries(arranged))
    };
    if !check(&c.r, &c.column_order, &c.arranged) {
        return false;
    }
    let f = &c.refined;
    if !check(&f.r, &f.column_order, &f.arranged)
        || !matches_refined(&f.arranged, f.w_dims, f.s_size, f.t_dims)
        || f.w_dims.0 + f.s_size + f.t_dims.1 != c.rho
    {
        return false;
    }
    if c.tag != FormTag::for_dims(rows, cols, c.rho) {
        return false;
    }
    let dims_ok = match c.tag {
        FormTag::WideI | FormTag::SquareIi => (c.zero_rows, c.zero_cols) == (0, cols),
        FormTag::TallIii => (c.zero_rows, c.zero_cols) == (rows, 0),
        FormTag::DeficientIv if c.outside_characterization => {
            c.rho == 0 && (c.zero_rows, c.zero_cols) == (rows, cols)
        }
        FormTag::DeficientIv => {
            c.zero_rows >= 1 && c.zero_cols >= 1 && c.zero_rows + c.zero_cols + c.rho == rows + cols
        }
    };
    dims_ok && matches_template(&c.arranged, c.zero_rows, c.zero_cols)
}

/// Whether every completion has the same rank, and that rank if so.
pub fn is_constant_rank(m: &AciMatrix, budget: &SearchBudget) -> Result<(bool, Option<usize>)> {
    let fits = completion_count(m).is_some_and(|c| c <= budget.max_completions as u128);
    if fits {
        let report = rank_set_exhaustive(m, budget)?;
        let constant = report.min_rank == Some(report.max_rank);
        return Ok((constant, constant.then_some(report.max_rank)));
    }
    match canonical_form(m, budget) {
        Ok(c) => Ok((true, Some(c.rho))),
        Err(Error::NotConstantRank(_)) => Ok((false, None)),
        Err(Error::FieldTooSmall { .. }) => Err(Error::BudgetExceeded {
            needed: format!("{} completions", completion_count(m).unwrap_or(u128::MAX)),
            budget: budget.max_completions,
        }),
        Err(e) => Err(e),
    }
}
