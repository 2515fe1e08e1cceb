//! Sweeps, factor and semifactor sets, zero-block witnesses and the
//! WST-decomposition.

use std::fmt;

use crate::aci_core::{
    classify_zero_block, left_multiply, row_coefficient_matrix, shape_of, AciMatrix,
    ColumnSelector, ShapeTag, ZeroBlockClass,
};
use crate::error::{Error, Result};
use crate::linalg::ConstMatrix;
use crate::rank_engine::{is_fcmr, is_fmr, is_frmr, max_rank, symbolic_rank, SearchBudget};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Accumulated row operations: `swept = r · M`.
    pub r: ConstMatrix,
    pub swept: AciMatrix,
    /// Rows of `swept` that vanish on the scope columns, ascending.
    pub zero_rows: Vec<usize>,
}

/// Sweep from bottom to top: for `i = 1, ..., m-1`, row `m-i` is cleared on
/// the scope columns when its restriction lies in the span of the rows
/// below it; the combination is applied to the whole row.
pub fn sweep_bottom_to_top(m: &AciMatrix, scope: Option<&ColumnSelector>) -> SweepResult {
    let field = m.field();
    let rows = m.rows();
    let mut coef = row_coefficient_matrix(m, scope);
    let mut r = ConstMatrix::identity(field, rows);
    let zero_row = |c: &ConstMatrix, i: usize| c.row(i).iter().all(|x| x.is_zero());
    for i in (0..rows.saturating_sub(1)).rev() {
        if zero_row(&coef, i) {
            continue;
        }
        let below: Vec<usize> = (i + 1..rows).filter(|&k| !zero_row(&coef, k)).collect();
        if below.is_empty() {
            continue;
        }
        let basis =
            ConstMatrix::from_rows(field, below.iter().map(|&k| coef.row(k).to_vec()).collect())
                .expect("rectangular");
        let Some(comb) = basis.solve_left(coef.row(i)) else {
            continue;
        };
        for (c, &k) in comb.iter().zip(&below) {
            if c.is_zero() {
                continue;
            }
            for target in [&mut coef, &mut r] {
                for j in 0..target.cols() {
                    let v = target.get(i, j) - &(c * target.get(k, j));
                    target.set(i, j, v);
                }
            }
        }
    }
    let swept = left_multiply(&r, m).expect("square row operations");
    let zero_rows = (0..rows).filter(|&i| zero_row(&coef, i)).collect();
    SweepResult {
        r,
        swept,
        zero_rows,
    }
}

/// Stable ordering of rows by class (smaller classes first).
fn stable_order(classes: &[u8]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| classes[i]);
    order
}

fn zero_on(m: &AciMatrix, i: usize, cols: std::ops::Range<usize>) -> bool {
    cols.into_iter().all(|j| m.entry(i, j).is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetKind {
    Factor,
    Semifactor,
}

impl SetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SetKind::Factor => "factor",
            SetKind::Semifactor => "semifactor",
        }
    }

    fn zero_block(&self) -> ZeroBlockClass {
        match self {
            SetKind::Factor => ZeroBlockClass::Big,
            SetKind::Semifactor => ZeroBlockClass::Medium,
        }
    }
}

impl std::str::FromStr for SetKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "factor" => Ok(SetKind::Factor),
            "semifactor" => Ok(SetKind::Semifactor),
            other => Err(format!("unknown set kind `{other}`")),
        }
    }
}

/// `R · M · Q_F = [A B; 0 C]` with an `r × s` zero block, `s = #F`.
#[derive(Debug, Clone, PartialEq)]
pub struct FDecomposition {
    pub f: Vec<usize>,
    pub r: ConstMatrix,
    /// Column `k` of the arrangement is column `column_order[k]` of `M`.
    pub column_order: Vec<usize>,
    pub arranged: AciMatrix,
    pub a: AciMatrix,
    pub b: AciMatrix,
    pub c: AciMatrix,
    pub zero_rows: usize,
    pub zero_cols: usize,
    pub kind: SetKind,
}

/// Why a column set is not a factor (semifactor) set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetRefusal {
    ZeroBlock {
        r: usize,
        s: usize,
        class: ZeroBlockClass,
    },
    ANotFullRowMaxRank,
    CNotFullColumnMaxRank,
}

impl fmt::Display for SetRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRefusal::ZeroBlock { r, s, class } => {
                write!(f, "the {r}x{s} zero block is {class:?}")
            }
            SetRefusal::ANotFullRowMaxRank => write!(f, "block A is not FRmR"),
            SetRefusal::CNotFullColumnMaxRank => write!(f, "block C is not FCmR"),
        }
    }
}

/// The F-arrangement: permute F to the front, sweep on those columns and
/// sink the cleared rows, keeping relative order.
fn f_arrangement(m: &AciMatrix, sel: &ColumnSelector, kind: SetKind) -> FDecomposition {
    let field = m.field();
    let s = sel.len();
    let order = sel.order().to_vec();
    let mq = m
        .reorder_columns(&order)
        .expect("selector order is a permutation");
    let scope = ColumnSelector::new(m.cols(), 0..s).expect("in range");
    let sw = sweep_bottom_to_top(&mq, Some(&scope));
    let classes: Vec<u8> = (0..m.rows())
        .map(|i| u8::from(sw.zero_rows.binary_search(&i).is_ok()))
        .collect();
    let p = ConstMatrix::row_permutation(field, &stable_order(&classes));
    let r = p.mul(&sw.r).expect("square");
    let arranged = sw.swept.permute_rows(&stable_order(&classes));
    let zr = sw.zero_rows.len();
    let top = m.rows() - zr;
    FDecomposition {
        f: sel.members().to_vec(),
        a: arranged.submatrix(0..top, 0..s),
        b: arranged.submatrix(0..top, s..m.cols()),
        c: arranged.submatrix(top..m.rows(), s..m.cols()),
        r,
        column_order: order,
        arranged,
        zero_rows: zr,
        zero_cols: s,
        kind,
    }
}

pub fn f_decomposition(
    m: &AciMatrix,
    sel: &ColumnSelector,
    kind: SetKind,
) -> std::result::Result<FDecomposition, SetRefusal> {
    let d = f_arrangement(m, sel, kind);
    let class = classify_zero_block(&d.arranged, d.zero_rows, d.zero_cols).expect("block fits");
    if class != kind.zero_block() {
        return Err(SetRefusal::ZeroBlock {
            r: d.zero_rows,
            s: d.zero_cols,
            class,
        });
    }
    if !is_frmr(&d.a) {
        return Err(SetRefusal::ANotFullRowMaxRank);
    }
    if !is_fcmr(&d.c) {
        return Err(SetRefusal::CNotFullColumnMaxRank);
    }
    Ok(d)
}

pub fn is_factor_set(
    m: &AciMatrix,
    sel: &ColumnSelector,
) -> std::result::Result<FDecomposition, SetRefusal> {
    f_decomposition(m, sel, SetKind::Factor)
}

pub fn is_semifactor_set(
    m: &AciMatrix,
    sel: &ColumnSelector,
) -> std::result::Result<FDecomposition, SetRefusal> {
    f_decomposition(m, sel, SetKind::Semifactor)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLattice {
    pub kind: SetKind,
    /// Accepted subsets, sorted by size and then lexicographically.
    pub members: Vec<Vec<usize>>,
    pub f_bot: Option<Vec<usize>>,
    pub f_top: Option<Vec<usize>>,
    /// Whether `members` is nonempty exactly when it should be: factor sets
    /// for matrices that are not FmR, semifactor sets for FmR ones.
    pub consistent: bool,
}

fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (0u64..1 << n)
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
}

fn check_columns(m: &AciMatrix, budget: &SearchBudget) -> Result<()> {
    if m.cols() > budget.column_limit || m.cols() >= 63 {
        return Err(Error::TooManyColumns {
            n: m.cols(),
            limit: budget.column_limit,
        });
    }
    Ok(())
}

pub fn enumerate_sets(
    m: &AciMatrix,
    kind: SetKind,
    budget: &SearchBudget,
) -> Result<FactorLattice> {
    check_columns(m, budget)?;
    let n = m.cols();
    let members: Vec<Vec<usize>> = all_subsets(n)
        .into_iter()
        .filter(|f| {
            let sel = ColumnSelector::new(n, f.iter().copied()).expect("in range");
            f_decomposition(m, &sel, kind).is_ok()
        })
        .collect();
    let f_bot = members.first().map(|first| {
        first
            .iter()
            .copied()
            .filter(|j| members.iter().all(|f| f.contains(j)))
            .collect()
    });
    let f_top = (!members.is_empty()).then(|| {
        (0..n)
            .filter(|j| members.iter().any(|f| f.contains(j)))
            .collect()
    });
    let fmr = is_fmr(m);
    let expected = match kind {
        SetKind::Factor => !fmr,
        SetKind::Semifactor => fmr,
    };
    Ok(FactorLattice {
        kind,
        consistent: members.is_empty() != expected,
        members,
        f_bot,
        f_top,
    })
}

/// `R · M · Q` with a zero bottom-left `r × s` block and
/// `ρ = (m - r) + (n - s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroBlockWitness {
    pub r_matrix: ConstMatrix,
    pub column_order: Vec<usize>,
    pub arranged: AciMatrix,
    pub r: usize,
    pub s: usize,
    pub factor_set: Vec<usize>,
}

/// A zero block certifying `maxRank(M) ≤ rho`, or `None` when there is none.
pub fn zero_block_witness(
    m: &AciMatrix,
    rho: usize,
    budget: &SearchBudget,
) -> Result<Option<ZeroBlockWitness>> {
    let (rows, cols) = m.dims();
    if rho >= rows.min(cols) {
        return Err(Error::IndexOutOfRange(format!(
            "rho = {rho} needs to be below min{{{rows}, {cols}}}"
        )));
    }
    check_columns(m, budget)?;
    let target = rows + cols - rho;
    for f in all_subsets(cols) {
        let sel = ColumnSelector::new(cols, f.iter().copied()).expect("in range");
        let Ok(d) = is_factor_set(m, &sel) else {
            continue;
        };
        if d.zero_rows + d.zero_cols < target {
            continue;
        }
        let s = d.zero_cols.min(target - 1);
        let r = target - s;
        return Ok(Some(ZeroBlockWitness {
            r_matrix: d.r,
            column_order: d.column_order,
            arranged: d.arranged,
            r,
            s,
            factor_set: f,
        }));
    }
    Ok(None)
}

/// Which branch of the construction produced a WST-decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WstCase {
    /// FmR and tall; subcase `a`, `b` or `c`.
    FmrTall(char),
    FmrWide(char),
    FmrSquare,
    /// Not FmR; `case` 1 to 4 compares `#F⊥`, `#F⊤` and `n`, and
    /// `zero_bottom` records whether the `F⊥` columns vanish.
    NotFmr {
        case: u8,
        zero_bottom: bool,
    },
}

impl fmt::Display for WstCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WstCase::FmrTall(c) => write!(f, "fmr-tall-{c}"),
            WstCase::FmrWide(c) => write!(f, "fmr-wide-{c}"),
            WstCase::FmrSquare => write!(f, "fmr-square"),
            WstCase::NotFmr { case, zero_bottom } => {
                write!(f, "not-fmr-{case}{}", if *zero_bottom { 'b' } else { 'a' })
            }
        }
    }
}

/// `R · M · Q = [W * *; 0 S *; 0 0 T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WstDecomposition {
    pub r: ConstMatrix,
    pub column_order: Vec<usize>,
    pub arranged: AciMatrix,
    pub w: AciMatrix,
    pub s: AciMatrix,
    pub t: AciMatrix,
    /// The blocks right of `W` (over `S`), right of `W` (over `T`), and
    /// right of `S`.
    pub star_ws: AciMatrix,
    pub star_wt: AciMatrix,
    pub star_st: AciMatrix,
    pub f_bot: Vec<usize>,
    pub f_top: Vec<usize>,
    pub case: WstCase,
}

impl WstDecomposition {
    pub fn block_dims(&self) -> [(usize, usize); 3] {
        [self.w.dims(), self.s.dims(), self.t.dims()]
    }

    /// `rows(W) + rows(S) + cols(T)`.
    pub fn max_rank(&self) -> usize {
        self.w.rows() + self.s.rows() + self.t.cols()
    }
}

fn split_blocks(arranged: &AciMatrix, w: usize, sz: usize, h: usize, k: usize) -> [AciMatrix; 6] {
    let (m, n) = arranged.dims();
    [
        arranged.submatrix(0..w, 0..h),
        arranged.submatrix(w..w + sz, h..k),
        arranged.submatrix(w + sz..m, k..n),
        arranged.submatrix(0..w, h..k),
        arranged.submatrix(0..w, k..n),
        arranged.submatrix(w..w + sz, k..n),
    ]
}

fn block_zero(m: &AciMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> bool {
    rows.into_iter().all(|i| zero_on(m, i, cols.clone()))
}

/// Checks the shape and rank conditions on the three diagonal blocks.
fn blocks_ok(w: &AciMatrix, s: &AciMatrix, t: &AciMatrix) -> std::result::Result<(), String> {
    let ws = shape_of(w);
    if !(ws.void || ws.tag == ShapeTag::Wide) || !is_frmr(w) {
        return Err(format!(
            "W ({}x{}) is not wide FRmR or void",
            w.rows(),
            w.cols()
        ));
    }
    if s.rows() != s.cols() || !is_fmr(s) {
        return Err(format!(
            "S ({}x{}) is not square FmR or void",
            s.rows(),
            s.cols()
        ));
    }
    let ts = shape_of(t);
    if !(ts.void || ts.tag == ShapeTag::Tall) || !is_fcmr(t) {
        return Err(format!(
            "T ({}x{}) is not tall FCmR or void",
            t.rows(),
            t.cols()
        ));
    }
    Ok(())
}

pub fn wst_decompose(m: &AciMatrix, budget: &SearchBudget) -> Result<WstDecomposition> {
    let field = m.field();
    let (rows, cols) = m.dims();
    let fmr = is_fmr(m);
    let kind = if fmr {
        SetKind::Semifactor
    } else {
        SetKind::Factor
    };
    let lattice = enumerate_sets(m, kind, budget)?;
    let (Some(f_bot), Some(f_top)) = (lattice.f_bot.clone(), lattice.f_top.clone()) else {
        return Err(Error::InternalAssertionFailed(format!(
            "no {} sets found",
            kind.as_str()
        )));
    };
    let (h, k) = (f_bot.len(), f_top.len());
    let mut order = f_bot.clone();
    order.extend(f_top.iter().filter(|j| !f_bot.contains(j)));
    order.extend((0..cols).filter(|j| !f_top.contains(j)));
    let mq = m.reorder_columns(&order)?;
    let zero_bottom = (0..h).all(|j| mq.column_is_zero(j));

    let mut r = ConstMatrix::identity(field, rows);
    let mut current = mq.clone();
    if k > 0 {
        let sw = sweep_bottom_to_top(&current, Some(&ColumnSelector::new(cols, 0..k)?));
        let classes: Vec<u8> = (0..rows)
            .map(|i| u8::from(zero_on(&sw.swept, i, 0..k)))
            .collect();
        let order = stable_order(&classes);
        r = ConstMatrix::row_permutation(field, &order)
            .mul(&sw.r)?
            .mul(&r)?;
        current = sw.swept.permute_rows(&order);
    }
    if h > 0 && !zero_bottom {
        let sw = sweep_bottom_to_top(&current, Some(&ColumnSelector::new(cols, 0..h)?));
        r = sw.r.mul(&r)?;
        current = sw.swept;
    }
    let classes: Vec<u8> = (0..rows)
        .map(|i| {
            if !zero_on(&current, i, 0..h) {
                0
            } else if !zero_on(&current, i, h..k) {
                1
            } else {
                2
            }
        })
        .collect();
    let order_rows = stable_order(&classes);
    r = ConstMatrix::row_permutation(field, &order_rows).mul(&r)?;
    let arranged = left_multiply(&r, &mq)?;
    let w_rows = classes.iter().filter(|&&c| c == 0).count();
    let s_rows = classes.iter().filter(|&&c| c == 1).count();

    let case = if fmr {
        match shape_of(m).tag {
            ShapeTag::Square => WstCase::FmrSquare,
            ShapeTag::Tall => WstCase::FmrTall(match k {
                0 => 'a',
                _ if k < cols => 'b',
                _ => 'c',
            }),
            ShapeTag::Wide => WstCase::FmrWide(if h == cols {
                'a'
            } else if zero_bottom {
                'b'
            } else {
                'c'
            }),
        }
    } else {
        let case = match (h < k, k < cols) {
            (true, true) => 1,
            (true, false) => 2,
            (false, true) => 3,
            (false, false) => 4,
        };
        WstCase::NotFmr { case, zero_bottom }
    };

    if s_rows != k - h {
        return Err(Error::InternalAssertionFailed(format!(
            "S has {s_rows} rows but {} columns",
            k - h
        )));
    }
    if !block_zero(&arranged, w_rows..rows, 0..h)
        || !block_zero(&arranged, w_rows + s_rows..rows, 0..k)
    {
        return Err(Error::InternalAssertionFailed(
            "nonzero entry below the diagonal blocks".into(),
        ));
    }
    let [w, s, t, star_ws, star_wt, star_st] = split_blocks(&arranged, w_rows, s_rows, h, k);
    blocks_ok(&w, &s, &t).map_err(Error::InternalAssertionFailed)?;
    let d = WstDecomposition {
        r,
        column_order: order,
        arranged,
        w,
        s,
        t,
        star_ws,
        star_wt,
        star_st,
        f_bot,
        f_top,
        case,
    };
    let u = symbolic_rank(m);
    if d.max_rank() != u {
        return Err(Error::InternalAssertionFailed(format!(
            "block formula gives {} but maxRank is {u}",
            d.max_rank()
        )));
    }
    Ok(d)
}

/// Recomputes `R · M · Q` and checks the block structure, the block
/// predicates and the maxRank formula.
pub fn verify_wst(m: &AciMatrix, d: &WstDecomposition, budget: &SearchBudget) -> bool {
    let (rows, cols) = m.dims();
    if d.r.rows() != rows || !d.r.is_invertible() {
        return false;
    }
    let Ok(mq) = m.reorder_columns(&d.column_order) else {
        return false;
    };
    let Ok(arranged) = left_multiply(&d.r, &mq) else {
        return false;
    };
    if !arranged.same_entries(&d.arranged) {
        return false;
    }
    let (w, sz, t) = (d.w.rows(), d.s.rows(), d.t.rows());
    let (h, k) = (d.w.cols(), d.w.cols() + d.s.cols());
    if w + sz + t != rows || k + d.t.cols() != cols {
        return false;
    }
    let blocks = split_blocks(&arranged, w, sz, h, k);
    let given = [&d.w, &d.s, &d.t, &d.star_ws, &d.star_wt, &d.star_st];
    if !blocks.iter().zip(given).all(|(a, b)| a.same_entries(b)) {
        return false;
    }
    if !block_zero(&arranged, w..rows, 0..h) || !block_zero(&arranged, w + sz..rows, 0..k) {
        return false;
    }
    if blocks_ok(&d.w, &d.s, &d.t).is_err() {
        return false;
    }
    max_rank(m, budget).is_ok_and(|(u, _)| u == d.max_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix;
    use crate::scalars::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rational;

    fn m5() -> AciMatrix {
        parse_matrix(
            Q,
            "1, x1, y1, z1, 1; 0, 0, y2, z2, t1; 0, 0, 0, z3, t2; 0, 0, 0, 0, t3; 0, 0, 0, 0, 1",
        )
        .unwrap()
    }

    fn sweep_example() -> AciMatrix {
        parse_matrix(Q, "x+2, 1, z; x+1, 8y, 3z-5; x, 4y, z-2; 1, 4y, 2z-3").unwrap()
    }

    #[test]
    fn sweep_full_scope() {
        let m = sweep_example();
        let sw = sweep_bottom_to_top(&m, None);
        assert_eq!(left_multiply(&sw.r, &m).unwrap(), sw.swept);
        assert!(sw.r.is_invertible());
        assert_eq!(sw.zero_rows, vec![1]);
        let expected = parse_matrix(Q, "x+2, 1, z; 0, 0, 0; x, 4y, z-2; 1, 4y, 2z-3").unwrap();
        assert!(sw.swept.same_entries(&expected));
    }

    #[test]
    fn sweep_second_column() {
        let m = sweep_example();
        let sw = sweep_bottom_to_top(&m, Some(&ColumnSelector::new(3, [1]).unwrap()));
        assert_eq!(sw.zero_rows, vec![1, 2]);
        let expected =
            parse_matrix(Q, "x+2, 1, z; x-1, 0, -z+1; x-1, 0, -z+1; 1, 4y, 2z-3").unwrap();
        assert!(sw.swept.same_entries(&expected));
    }

    #[test]
    fn independent_rows_untouched() {
        let m = m5();
        let sw = sweep_bottom_to_top(&m, None);
        assert!(sw.zero_rows.is_empty());
        assert_eq!(sw.r, ConstMatrix::identity(Q, 5));
    }

    #[test]
    fn example_factor_sets() {
        let m = m5();
        let d = is_factor_set(&m, &ColumnSelector::new(5, [0, 1]).unwrap()).unwrap();
        assert_eq!((d.zero_rows, d.zero_cols), (4, 2));
        assert!(d.a.same_entries(&parse_matrix(Q, "1, x1").unwrap()));
        assert_eq!(d.c.dims(), (4, 3));
        assert!(is_factor_set(&m, &ColumnSelector::new(5, [4]).unwrap()).is_err());
        let lattice = enumerate_sets(&m, SetKind::Factor, &SearchBudget::default()).unwrap();
        assert_eq!(lattice.f_bot, Some(vec![0, 1]));
        assert_eq!(lattice.f_top, Some(vec![0, 1, 2, 3]));
        assert!(lattice.consistent);
    }

    #[test]
    fn identity_sets() {
        let id = parse_matrix(Q, "1, 0; 0, 1").unwrap();
        let b = SearchBudget::default();
        let factor = enumerate_sets(&id, SetKind::Factor, &b).unwrap();
        assert!(factor.members.is_empty() && factor.consistent);
        assert!(is_semifactor_set(&id, &ColumnSelector::all(2)).is_ok());
        assert!(is_semifactor_set(&id, &ColumnSelector::new(2, []).unwrap()).is_ok());
    }

    #[test]
    fn disjoint_semifactor_sets() {
        let m = parse_matrix(Q, "1, 0, x; 0, 1, y; 0, 0, 1; 0, 0, 1").unwrap();
        assert!(is_semifactor_set(&m, &ColumnSelector::new(3, [0]).unwrap()).is_ok());
        assert!(is_semifactor_set(&m, &ColumnSelector::new(3, [1]).unwrap()).is_ok());
    }

    #[test]
    fn zero_matrix_lattice() {
        let z = AciMatrix::zeros(Q, 1, 1);
        let l = enumerate_sets(&z, SetKind::Factor, &SearchBudget::default()).unwrap();
        assert_eq!(l.members, vec![vec![0]]);
    }

    #[test]
    fn zero_block_witness_example() {
        let m = m5();
        let b = SearchBudget::default();
        let w = zero_block_witness(&m, 4, &b).unwrap().unwrap();
        assert_eq!(w.r + w.s, 6);
        assert!(block_zero(&w.arranged, 5 - w.r..5, 0..w.s));
        assert!(zero_block_witness(&m, 3, &b).unwrap().is_none());
        let id = parse_matrix(Q, "1, 0; 0, 1").unwrap();
        assert!(zero_block_witness(&id, 1, &b).unwrap().is_none());
        assert!(zero_block_witness(&id, 2, &b).is_err());
    }

    #[test]
    fn wst_examples() {
        let b = SearchBudget::default();
        let m = m5();
        let d = wst_decompose(&m, &b).unwrap();
        assert_eq!(d.block_dims(), [(1, 2), (2, 2), (2, 1)]);
        assert_eq!(
            d.case,
            WstCase::NotFmr {
                case: 1,
                zero_bottom: false
            }
        );
        assert_eq!(d.r, ConstMatrix::identity(Q, 5));
        assert!(d.w.same_entries(&parse_matrix(Q, "1, x1").unwrap()));
        assert!(d.s.same_entries(&parse_matrix(Q, "y2, z2; 0, z3").unwrap()));
        assert!(d.t.same_entries(&parse_matrix(Q, "t3; 1").unwrap()));
        assert!(verify_wst(&m, &d, &b));

        let mut swapped = d.clone();
        std::mem::swap(&mut swapped.s, &mut swapped.t);
        assert!(!verify_wst(&m, &swapped, &b));

        let id3 = parse_matrix(Q, "1, 0, 0; 0, 1, 0; 0, 0, 1").unwrap();
        let d = wst_decompose(&id3, &b).unwrap();
        assert_eq!(d.block_dims(), [(0, 0), (3, 3), (0, 0)]);

        let z = AciMatrix::zeros(Q, 1, 1);
        let d = wst_decompose(&z, &b).unwrap();
        assert_eq!(d.block_dims(), [(0, 1), (0, 0), (1, 0)]);
        assert_eq!(
            d.case,
            WstCase::NotFmr {
                case: 4,
                zero_bottom: true
            }
        );
        assert!(verify_wst(&z, &d, &b));
    }

    #[test]
    fn wst_degenerate_inputs() {
        let b = SearchBudget::default();
        for (m, n) in [(0, 0), (2, 0), (0, 3)] {
            let z = AciMatrix::zeros(Q, m, n);
            let d = wst_decompose(&z, &b).unwrap();
            assert!(verify_wst(&z, &d, &b), "{m}x{n}");
        }
    }
}
