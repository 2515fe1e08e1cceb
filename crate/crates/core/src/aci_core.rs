//! The ACI-matrix model: affine entries over a field, with every
//! indeterminate owned by exactly one column.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::ConstMatrix;
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indeterminate {
    pub id: VarId,
    pub name: String,
    pub owner_column: usize,
}

/// `constant + Σ coefficient·x`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    constant: Scalar,
    terms: BTreeMap<VarId, Scalar>,
}

impl AffineForm {
    pub fn zero(field: FieldSpec) -> Self {
        Self::constant(field.zero())
    }

    pub fn constant(c: Scalar) -> Self {
        Self {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(field: FieldSpec, id: VarId) -> Self {
        Self::term(field.zero(), id, field.one())
    }

    pub fn term(constant: Scalar, id: VarId, coefficient: Scalar) -> Self {
        let mut f = Self::constant(constant);
        f.add_term(id, &coefficient);
        f
    }

    pub fn field(&self) -> FieldSpec {
        self.constant.field()
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.constant
    }

    pub fn coefficient(&self, id: VarId) -> Option<&Scalar> {
        self.terms.get(&id)
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Scalar)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the form is exactly the constant `c`.
    pub fn is_constant_value(&self, c: &Scalar) -> bool {
        self.terms.is_empty() && &self.constant == c
    }

    pub fn add_term(&mut self, id: VarId, coefficient: &Scalar) {
        if coefficient.is_zero() {
            return;
        }
        let sum = match self.terms.get(&id) {
            Some(c) => c + coefficient,
            None => coefficient.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&id);
        } else {
            self.terms.insert(id, sum);
        }
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.add_scaled(other, &other.field().one());
        out
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.add_scaled(other, &-&other.field().one());
        out
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &AffineForm, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        self.constant = &self.constant + &(factor * &other.constant);
        for (id, c) in &other.terms {
            self.add_term(*id, &(factor * c));
        }
    }

    pub fn scale(&self, factor: &Scalar) -> AffineForm {
        let mut out = AffineForm::zero(self.field());
        out.add_scaled(self, factor);
        out
    }

    pub fn eval(&self, values: &Completion) -> Option<Scalar> {
        let mut acc = self.constant.clone();
        for (id, c) in &self.terms {
            acc = &acc + &(c * values.get(*id)?);
        }
        Some(acc)
    }

    pub fn substitute(&self, id: VarId, value: &Scalar) -> AffineForm {
        let mut out = self.clone();
        if let Some(c) = out.terms.remove(&id) {
            out.constant = &out.constant + &(&c * value);
        }
        out
    }

    fn remap(&self, map: &HashMap<VarId, VarId>) -> AffineForm {
        let mut out = AffineForm::constant(self.constant.clone());
        for (id, c) in &self.terms {
            out.add_term(map[id], c);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeTag {
    Wide,
    Tall,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub tag: ShapeTag,
    pub degenerate: bool,
    pub void: bool,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.void {
            return write!(f, "void");
        }
        let tag = match self.tag {
            ShapeTag::Wide => "wide",
            ShapeTag::Tall => "tall",
            ShapeTag::Square => "square",
        };
        if self.degenerate {
            write!(f, "{tag} degenerate")
        } else {
            write!(f, "{tag}")
        }
    }
}

pub fn shape_of_dims(m: usize, n: usize) -> Shape {
    let tag = match m.cmp(&n) {
        std::cmp::Ordering::Less => ShapeTag::Wide,
        std::cmp::Ordering::Greater => ShapeTag::Tall,
        std::cmp::Ordering::Equal => ShapeTag::Square,
    };
    Shape {
        tag,
        degenerate: m == 0 || n == 0,
        void: m == 0 && n == 0,
    }
}

pub fn shape_of(m: &AciMatrix) -> Shape {
    shape_of_dims(m.rows(), m.cols())
}

/// A total assignment of field values to indeterminate ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Completion {
    values: BTreeMap<VarId, Scalar>,
}

impl Completion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = (VarId, Scalar)>) -> Self {
        Self {
            values: values.into_iter().collect(),
        }
    }

    pub fn set(&mut self, id: VarId, value: Scalar) {
        self.values.insert(id, value);
    }

    pub fn get(&self, id: VarId) -> Option<&Scalar> {
        self.values.get(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Scalar)> + '_ {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(name, value)` pairs in id order.
    pub fn named(&self, m: &AciMatrix) -> Vec<(String, Scalar)> {
        self.values
            .iter()
            .filter_map(|(id, v)| m.var(*id).map(|x| (x.name.clone(), v.clone())))
            .collect()
    }
}

/// A column subset `F` together with the permutation `σ_F` that moves the
/// members of `F` to the front, keeping relative order inside both groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSelector {
    n: usize,
    members: Vec<usize>,
    order: Vec<usize>,
    sigma: Vec<usize>,
}

impl ColumnSelector {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange(format!("column {bad} of {n}")));
        }
        let mut order = members.clone();
        order.extend((0..n).filter(|j| members.binary_search(j).is_err()));
        let mut sigma = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            sigma[old] = new;
        }
        Ok(Self {
            n,
            members,
            order,
            sigma,
        })
    }

    pub fn all(n: usize) -> Self {
        Self::new(n, 0..n).expect("in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.binary_search(&j).is_ok()
    }

    /// Column `k` of `M Q_F` is column `order()[k]` of `M`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `σ_F(j)`: the position of original column `j` in `M Q_F`.
    pub fn sigma(&self, j: usize) -> usize {
        self.sigma[j]
    }

    /// The permutation matrix `Q_F`.
    pub fn q_matrix(&self, field: FieldSpec) -> ConstMatrix {
        let mut q = ConstMatrix::zeros(field, self.n, self.n);
        for j in 0..self.n {
            q.set(j, self.sigma[j], field.one());
        }
        q
    }
}

/// One monomial of a raw (not yet validated) entry: `coefficient · Π vars`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub coefficient: Scalar,
    pub vars: Vec<String>,
}

/// A candidate entry as a sum of monomials of any degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RawExpr {
    pub text: String,
    pub terms: Vec<RawTerm>,
}

/// An unvalidated grid of entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGrid {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<RawExpr>>,
    /// When present, every indeterminate must be declared here.
    pub declared: Option<Vec<String>>,
}

/// Checks degree, declaration and column-disjointness, interning
/// indeterminates in first-appearance order (row-major).
pub fn validate_aci(candidate: &CandidateGrid) -> Result<AciMatrix> {
    let (m, n) = (candidate.rows, candidate.cols);
    if candidate.entries.len() != m || candidate.entries.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "declared {m}x{n} but grid has a different shape"
        )));
    }
    let field = candidate.field;
    let mut vars: Vec<Indeterminate> = Vec::new();
    let mut by_name: HashMap<String, VarId> = HashMap::new();
    let mut entries = Vec::with_capacity(m * n);
    for row in &candidate.entries {
        for (j, raw) in row.iter().enumerate() {
            let mut form = AffineForm::zero(field);
            for t in &raw.terms {
                if t.coefficient.field() != field {
                    return Err(Error::MixedFields);
                }
                match t.vars.as_slice() {
                    [] => form.add_scaled(&AffineForm::constant(field.one()), &t.coefficient),
                    [name] => {
                        if let Some(decl) = &candidate.declared {
                            if !decl.contains(name) {
                                return Err(Error::UnknownIndeterminate(name.clone()));
                            }
                        }
                        let id = match by_name.get(name) {
                            Some(&id) => {
                                let owner = vars[id.index()].owner_column;
                                if owner != j {
                                    return Err(Error::ColumnSharing {
                                        name: name.clone(),
                                        first: owner,
                                        second: j,
                                    });
                                }
                                id
                            }
                            None => {
                                let id = VarId(vars.len() as u32);
                                vars.push(Indeterminate {
                                    id,
                                    name: name.clone(),
                                    owner_column: j,
                                });
                                by_name.insert(name.clone(), id);
                                id
                            }
                        };
                        form.add_term(id, &t.coefficient);
                    }
                    _ if t.coefficient.is_zero() => {}
                    more => {
                        return Err(Error::NonAffine {
                            entry: raw.text.clone(),
                            detail: format!("degree-{} term {}", more.len(), more.join("*")),
                        })
                    }
                }
            }
            entries.push(form);
        }
    }
    AciMatrix::new(field, m, n, entries, vars)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroBlockClass {
    Big,
    Medium,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AciMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<AffineForm>,
    vars: Vec<Indeterminate>,
}

impl AciMatrix {
    /// Builds a matrix from row-major entries and a registry whose ids are
    /// `0..vars.len()` in order.
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<AffineForm>,
        vars: Vec<Indeterminate>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for (k, v) in vars.iter().enumerate() {
            if v.id.index() != k {
                return Err(Error::InternalAssertionFailed(format!(
                    "registry id {} at position {k}",
                    v.id.0
                )));
            }
            if v.owner_column >= cols {
                return Err(Error::IndexOutOfRange(format!(
                    "`{}` owned by column {} of {cols}",
                    v.name, v.owner_column
                )));
            }
            if vars[..k].iter().any(|w| w.name == v.name) {
                return Err(Error::InternalAssertionFailed(format!(
                    "duplicate indeterminate name `{}`",
                    v.name
                )));
            }
        }
        for (idx, e) in entries.iter().enumerate() {
            if e.field() != field {
                return Err(Error::MixedFields);
            }
            let j = idx % cols.max(1);
            for (id, _) in e.terms() {
                let Some(v) = vars.get(id.index()) else {
                    return Err(Error::UnknownIndeterminate(format!("#{}", id.0)));
                };
                if v.owner_column != j {
                    return Err(Error::ColumnSharing {
                        name: v.name.clone(),
                        first: v.owner_column,
                        second: j,
                    });
                }
            }
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries,
            vars,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![AffineForm::zero(field); rows * cols],
            vars: Vec::new(),
        }
    }

    pub fn from_constant(c: &ConstMatrix) -> Self {
        let entries = (0..c.rows())
            .flat_map(|i| (0..c.cols()).map(move |j| (i, j)))
            .map(|(i, j)| AffineForm::constant(c.get(i, j).clone()))
            .collect();
        Self {
            field: c.field(),
            rows: c.rows(),
            cols: c.cols(),
            entries,
            vars: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineForm {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[AffineForm] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn vars(&self) -> &[Indeterminate] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> Option<&Indeterminate> {
        self.vars.get(id.index())
    }

    pub fn var_by_name(&self, name: &str) -> Option<&Indeterminate> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    /// Indeterminates that occur in at least one entry, in id order.
    pub fn active_vars(&self) -> Vec<VarId> {
        let mut seen = vec![false; self.vars.len()];
        for e in &self.entries {
            for (id, _) in e.terms() {
                seen[id.index()] = true;
            }
        }
        (0..self.vars.len())
            .filter(|&k| seen[k])
            .map(|k| VarId(k as u32))
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(AffineForm::is_constant)
    }

    /// True when every entry is a constant or a lone indeterminate used once.
    pub fn is_partial_matrix(&self) -> bool {
        let mut uses = vec![0usize; self.vars.len()];
        for e in &self.entries {
            if e.is_constant() {
                continue;
            }
            let mut terms = e.terms();
            let (id, c) = terms.next().expect("non-constant");
            if terms.next().is_some() || !c.is_one() || !e.constant_term().is_zero() {
                return false;
            }
            uses[id.index()] += 1;
        }
        uses.iter().all(|&u| u <= 1)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(AffineForm::is_zero)
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.entry(i, j).is_zero())
    }

    /// Entry-wise equality up to indeterminate naming (ids may differ).
    pub fn same_entries(&self, other: &AciMatrix) -> bool {
        if self.dims() != other.dims() || self.field != other.field {
            return false;
        }
        let named = |m: &AciMatrix, e: &AffineForm| -> (Scalar, BTreeMap<String, Scalar>) {
            (
                e.constant_term().clone(),
                e.terms()
                    .map(|(id, c)| (m.vars[id.index()].name.clone(), c.clone()))
                    .collect(),
            )
        };
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| named(self, a) == named(other, b))
    }

    /// The all-zero completion of the whole registry.
    pub fn zero_completion(&self) -> Completion {
        Completion::from_values(self.vars.iter().map(|v| (v.id, self.field.zero())))
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> AciMatrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        self.select(&rows.collect::<Vec<_>>(), &cols.collect::<Vec<_>>())
    }

    /// The submatrix on the given rows and columns (in the given order);
    /// the registry keeps only indeterminates owned by selected columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> AciMatrix {
        let mut map = HashMap::new();
        let mut vars = Vec::new();
        for v in &self.vars {
            if let Some(new_col) = cols.iter().position(|&c| c == v.owner_column) {
                let id = VarId(vars.len() as u32);
                map.insert(v.id, id);
                vars.push(Indeterminate {
                    id,
                    name: v.name.clone(),
                    owner_column: new_col,
                });
            }
        }
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.entry(i, j).remap(&map))
            .collect();
        AciMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            entries,
            vars,
        }
    }

    pub fn permute_rows(&self, order: &[usize]) -> AciMatrix {
        assert_eq!(order.len(), self.rows);
        let entries = order
            .iter()
            .flat_map(|&i| self.row(i).iter().cloned())
            .collect();
        AciMatrix {
            entries,
            ..self.clone()
        }
    }

    /// Column `k` of the result is column `order[k]` of `self`.
    pub fn reorder_columns(&self, order: &[usize]) -> Result<AciMatrix> {
        let mut seen = vec![false; self.cols];
        if order.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for {} columns",
                order.len(),
                self.cols
            )));
        }
        for &j in order {
            if j >= self.cols || std::mem::replace(&mut seen[j], true) {
                return Err(Error::IndexOutOfRange(format!(
                    "{order:?} is not a permutation"
                )));
            }
        }
        let mut new_pos = vec![0; self.cols];
        for (k, &j) in order.iter().enumerate() {
            new_pos[j] = k;
        }
        let vars = self
            .vars
            .iter()
            .map(|v| Indeterminate {
                owner_column: new_pos[v.owner_column],
                ..v.clone()
            })
            .collect();
        let entries = (0..self.rows)
            .flat_map(|i| order.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Ok(AciMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
            vars,
        })
    }

    pub fn substitute(&self, id: VarId, value: &Scalar) -> AciMatrix {
        AciMatrix {
            entries: self
                .entries
                .iter()
                .map(|e| e.substitute(id, value))
                .collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for AciMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return writeln!(f, "[{}x{}]", self.rows, self.cols);
        }
        let names = self.var_names();
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|e| crate::parse::format_affine(e, &names))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn complete(m: &AciMatrix, c: &Completion) -> Result<ConstMatrix> {
    if let Some(missing) = m.vars.iter().find(|v| c.get(v.id).is_none()) {
        return Err(Error::MissingAssignment(missing.name.clone()));
    }
    let rows = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| e.eval(c).expect("assignment covers registry"))
                .collect()
        })
        .collect();
    if m.rows == 0 || m.cols == 0 {
        return Ok(ConstMatrix::zeros(m.field, m.rows, m.cols));
    }
    ConstMatrix::from_rows(m.field, rows)
}

/// `R · M` for a constant square `R`.
pub fn left_multiply(r: &ConstMatrix, m: &AciMatrix) -> Result<AciMatrix> {
    if r.rows() != m.rows || r.cols() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            r.rows(),
            r.cols(),
            m.rows,
            m.cols
        )));
    }
    if r.field() != m.field {
        return Err(Error::MixedFields);
    }
    let mut entries = Vec::with_capacity(m.entries.len());
    for i in 0..m.rows {
        for j in 0..m.cols {
            let mut acc = AffineForm::zero(m.field);
            for k in 0..m.rows {
                acc.add_scaled(m.entry(k, j), r.get(i, k));
            }
            entries.push(acc);
        }
    }
    Ok(AciMatrix {
        entries,
        ..m.clone()
    })
}

/// `M · Q_F`.
pub fn permute_columns(m: &AciMatrix, sel: &ColumnSelector) -> Result<AciMatrix> {
    if sel.n() != m.cols {
        return Err(Error::IndexOutOfRange(format!(
            "selector for {} columns applied to {}",
            sel.n(),
            m.cols
        )));
    }
    m.reorder_columns(sel.order())
}

/// Assembles `[A B; 0 C]`. Indeterminates are identified by name; a name
/// that lands in two different columns is rejected.
pub fn compose_block(a: &AciMatrix, b: &AciMatrix, c: &AciMatrix) -> Result<AciMatrix> {
    if a.rows != b.rows || b.cols != c.cols {
        return Err(Error::DimensionMismatch(format!(
            "A {}x{}, B {}x{}, C {}x{}",
            a.rows, a.cols, b.rows, b.cols, c.rows, c.cols
        )));
    }
    let field = a.field;
    if b.field != field || c.field != field {
        return Err(Error::MixedFields);
    }
    let (m, n) = (a.rows + c.rows, a.cols + b.cols);
    let mut vars: Vec<Indeterminate> = Vec::new();
    let mut intern = |name: &str, col: usize| -> Result<VarId> {
        if let Some(v) = vars.iter().find(|v| v.name == name) {
            if v.owner_column != col {
                return Err(Error::ColumnSharing {
                    name: name.to_string(),
                    first: v.owner_column,
                    second: col,
                });
            }
            return Ok(v.id);
        }
        let id = VarId(vars.len() as u32);
        vars.push(Indeterminate {
            id,
            name: name.to_string(),
            owner_column: col,
        });
        Ok(id)
    };
    let mut translate = |src: &AciMatrix, e: &AffineForm, col: usize| -> Result<AffineForm> {
        let mut out = AffineForm::constant(e.constant_term().clone());
        for (id, coef) in e.terms() {
            let new_id = intern(&src.vars[id.index()].name, col)?;
            out.add_term(new_id, coef);
        }
        Ok(out)
    };
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let e = match (i < a.rows, j < a.cols) {
                (true, true) => translate(a, a.entry(i, j), j)?,
                (true, false) => translate(b, b.entry(i, j - a.cols), j)?,
                (false, true) => AffineForm::zero(field),
                (false, false) => translate(c, c.entry(i - a.rows, j - a.cols), j)?,
            };
            entries.push(e);
        }
    }
    AciMatrix::new(field, m, n, entries, vars)
}

/// Classifies the bottom-left `r×s` block: `Neither` unless it is
/// identically zero and `r + s ≥ max{m, n}`.
pub fn classify_zero_block(m: &AciMatrix, r: usize, s: usize) -> Result<ZeroBlockClass> {
    if r > m.rows || s > m.cols {
        return Err(Error::IndexOutOfRange(format!(
            "{r}x{s} block in a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let zero = (m.rows - r..m.rows).all(|i| (0..s).all(|j| m.entry(i, j).is_zero()));
    if !zero {
        return Ok(ZeroBlockClass::Neither);
    }
    let bound = m.rows.max(m.cols);
    Ok(match (r + s).cmp(&bound) {
        std::cmp::Ordering::Greater => ZeroBlockClass::Big,
        std::cmp::Ordering::Equal => ZeroBlockClass::Medium,
        std::cmp::Ordering::Less => ZeroBlockClass::Neither,
    })
}

/// Coordinates of each row in the space `Π_j (F + Σ F·x)`, columns of scope
/// in ascending order, constant coordinate first then owned indeterminates
/// by ascending id.
pub fn row_coefficient_matrix(m: &AciMatrix, restrict_to: Option<&ColumnSelector>) -> ConstMatrix {
    let scope: Vec<usize> = match restrict_to {
        Some(sel) => sel.members().to_vec(),
        None => (0..m.cols).collect(),
    };
    let mut basis: Vec<(usize, Option<VarId>)> = Vec::new();
    for &j in &scope {
        basis.push((j, None));
        basis.extend(
            m.vars
                .iter()
                .filter(|v| v.owner_column == j)
                .map(|v| (j, Some(v.id))),
        );
    }
    let mut out = ConstMatrix::zeros(m.field, m.rows, basis.len());
    for i in 0..m.rows {
        for (k, (j, var)) in basis.iter().enumerate() {
            let e = m.entry(i, *j);
            let v = match var {
                None => e.constant_term().clone(),
                Some(id) => match e.coefficient(*id) {
                    Some(c) => c.clone(),
                    None => continue,
                },
            };
            out.set(i, k, v);
        }
    }
    out
}

pub fn rows_linearly_independent(m: &AciMatrix, restrict_to: Option<&ColumnSelector>) -> bool {
    row_coefficient_matrix(m, restrict_to).rank() == m.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix;

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
    fn validation_examples() {
        let m = m5();
        assert_eq!(m.dims(), (5, 5));
        assert!(m.is_partial_matrix());
        assert_eq!(m.vars().len(), 9);

        assert!(matches!(
            parse_matrix(Q, "x, x"),
            Err(Error::ColumnSharing { .. })
        ));
        assert!(matches!(
            parse_matrix(Q, "x*y"),
            Err(Error::NonAffine { .. })
        ));
    }

    #[test]
    fn validate_rejects_undeclared() {
        let q = Q;
        let cand = CandidateGrid {
            field: q,
            rows: 1,
            cols: 1,
            entries: vec![vec![RawExpr {
                text: "w".into(),
                terms: vec![RawTerm {
                    coefficient: q.one(),
                    vars: vec!["w".into()],
                }],
            }]],
            declared: Some(vec!["x".into()]),
        };
        assert_eq!(
            validate_aci(&cand),
            Err(Error::UnknownIndeterminate("w".into()))
        );
    }

    #[test]
    fn shapes() {
        let s = shape_of_dims(1, 2);
        assert_eq!(
            (s.tag, s.degenerate, s.void),
            (ShapeTag::Wide, false, false)
        );
        let s = shape_of_dims(0, 3);
        assert_eq!((s.tag, s.degenerate, s.void), (ShapeTag::Wide, true, false));
        let s = shape_of_dims(4, 0);
        assert_eq!((s.tag, s.degenerate, s.void), (ShapeTag::Tall, true, false));
        let s = shape_of_dims(0, 0);
        assert_eq!(
            (s.tag, s.degenerate, s.void),
            (ShapeTag::Square, true, true)
        );
    }

    #[test]
    fn completion_examples() {
        let gf2 = FieldSpec::Prime(2);
        let m = parse_matrix(gf2, "x, 1; 1, y").unwrap();
        let c = Completion::from_values([(VarId(0), gf2.one()), (VarId(1), gf2.one())]);
        assert_eq!(
            complete(&m, &c).unwrap(),
            ConstMatrix::from_i64(gf2, &[vec![1, 1], vec![1, 1]])
        );
        let only_x = Completion::from_values([(VarId(0), gf2.one())]);
        assert_eq!(
            complete(&m, &only_x),
            Err(Error::MissingAssignment("y".into()))
        );

        let k = ConstMatrix::from_i64(gf2, &[vec![1, 0], vec![1, 1]]);
        let constant = AciMatrix::from_constant(&k);
        assert_eq!(complete(&constant, &Completion::new()).unwrap(), k);
    }

    #[test]
    fn left_multiply_examples() {
        let m = sweep_example();
        assert_eq!(left_multiply(&ConstMatrix::identity(Q, 4), &m).unwrap(), m);

        let swap = ConstMatrix::row_permutation(Q, &[0, 1, 3, 2]);
        let swapped = left_multiply(&swap, &m).unwrap();
        assert_eq!(swapped.row(2), m.row(3));
        assert_eq!(swapped.row(3), m.row(2));

        let mut r = ConstMatrix::identity(Q, 4);
        r.set(2, 3, Q.from_i64(-1));
        let stepped = left_multiply(&r, &m).unwrap();
        let expected =
            parse_matrix(Q, "x+2, 1, z; x+1, 8y, 3z-5; x-1, 0, -z+1; 1, 4y, 2z-3").unwrap();
        assert!(stepped.same_entries(&expected));

        assert!(matches!(
            left_multiply(&ConstMatrix::identity(Q, 3), &m),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn permute_columns_examples() {
        let m = m5();
        assert_eq!(permute_columns(&m, &ColumnSelector::all(5)).unwrap(), m);
        assert_eq!(
            permute_columns(&m, &ColumnSelector::new(5, []).unwrap()).unwrap(),
            m
        );
        let sel = ColumnSelector::new(5, [2, 3]).unwrap();
        assert_eq!(sel.order(), &[2, 3, 0, 1, 4]);
        assert_eq!(sel.sigma(2), 0);
        assert_eq!(sel.sigma(0), 2);
        let p = permute_columns(&m, &sel).unwrap();
        for i in 0..5 {
            for (k, &j) in sel.order().iter().enumerate() {
                let names = m.var_names();
                let pnames = p.var_names();
                assert_eq!(
                    crate::parse::format_affine(p.entry(i, k), &pnames),
                    crate::parse::format_affine(m.entry(i, j), &names)
                );
            }
        }
        assert_eq!(p.var_by_name("y1").unwrap().owner_column, 0);
        assert_eq!(p.var_by_name("x1").unwrap().owner_column, 3);
        assert!(matches!(
            ColumnSelector::new(5, [5]),
            Err(Error::IndexOutOfRange(_))
        ));
        // Q_F maps column k of M to column σ_F(k) of M·Q_F.
        let qm = sel.q_matrix(Q);
        for k in 0..5 {
            assert!(qm.get(k, sel.sigma(k)).is_one());
        }
    }

    #[test]
    fn compose_block_examples() {
        let a = parse_matrix(Q, "1, x").unwrap();
        let c = parse_matrix(Q, "t; 1").unwrap();
        let b = AciMatrix::zeros(Q, 1, 1);
        let m = compose_block(&a, &b, &c).unwrap();
        let expected = parse_matrix(Q, "1, x, 0; 0, 0, t; 0, 0, 1").unwrap();
        assert!(m.same_entries(&expected));

        let full = m5();
        let void = AciMatrix::zeros(Q, 0, 0);
        let b0 = AciMatrix::zeros(Q, 0, 5);
        assert!(compose_block(&void, &b0, &full)
            .unwrap()
            .same_entries(&full));

        let one = parse_matrix(Q, "1").unwrap();
        let zero = parse_matrix(Q, "0").unwrap();
        let id2 = compose_block(&one, &zero, &one).unwrap();
        assert!(id2.same_entries(&parse_matrix(Q, "1, 0; 0, 1").unwrap()));

        let shared = parse_matrix(Q, "x").unwrap();
        assert!(matches!(
            compose_block(&shared, &shared, &shared),
            Err(Error::ColumnSharing { .. })
        ));
        assert!(matches!(
            compose_block(&a, &AciMatrix::zeros(Q, 2, 1), &c),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn zero_block_examples() {
        let m = m5();
        assert_eq!(classify_zero_block(&m, 4, 2).unwrap(), ZeroBlockClass::Big);
        let disjoint = parse_matrix(Q, "1, 0, x; 0, 1, y; 0, 0, 1; 0, 0, 1").unwrap();
        assert_eq!(
            classify_zero_block(&disjoint, 2, 2).unwrap(),
            ZeroBlockClass::Medium
        );
        let id2 = parse_matrix(Q, "1, 0; 0, 1").unwrap();
        assert_eq!(
            classify_zero_block(&id2, 1, 1).unwrap(),
            ZeroBlockClass::Medium
        );
        assert_eq!(
            classify_zero_block(&id2, 2, 2).unwrap(),
            ZeroBlockClass::Neither
        );
        assert_eq!(
            classify_zero_block(&id2, 0, 2).unwrap(),
            ZeroBlockClass::Medium
        );
        assert!(classify_zero_block(&id2, 3, 0).is_err());
    }

    #[test]
    fn coefficient_matrix_examples() {
        let single = parse_matrix(Q, "x+2").unwrap();
        let c = row_coefficient_matrix(&single, None);
        assert_eq!(c, ConstMatrix::from_i64(Q, &[vec![2, 1]]));

        let sweep = sweep_example();
        let c = row_coefficient_matrix(&sweep, None);
        assert_eq!((c.rows(), c.cols()), (4, 6));

        let k = ConstMatrix::from_i64(Q, &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(
            row_coefficient_matrix(&AciMatrix::from_constant(&k), None),
            k
        );
    }

    #[test]
    fn independence_examples() {
        assert!(!rows_linearly_independent(&sweep_example(), None));
        let remark = parse_matrix(Q, "1,1,1,1; 1,1,1,x; 1,1,1,y").unwrap();
        assert!(rows_linearly_independent(&remark, None));
        let zero_row = parse_matrix(Q, "1, x; 0, 0").unwrap();
        assert!(!rows_linearly_independent(&zero_row, None));
    }
}
