//! Sparse multivariate polynomials in graded-lex order, just enough for
//! fraction-free elimination over the polynomial ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::aci_core::AffineForm;
use crate::scalars::{FieldSpec, Scalar};

/// Dense exponent vector; compared by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// Variable `k` of the polynomial is `VarId(k)` of the form.
    pub fn from_affine(form: &AffineForm, nvars: usize) -> Self {
        let mut p = Self::constant(form.constant_term().clone(), nvars);
        for (id, c) in form.terms() {
            p.add_term(Monomial::var(nvars, id.index()), c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map_or(0, |(m, _)| m.degree())
    }

    /// Largest exponent of variable `k` over all terms.
    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Quotient of an exact division; `None` if `d` does not divide `self`
    /// or `d` is zero.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inverse().ok()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.field, self.nvars);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Evaluates at `values[k]` for variable `k`.
    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &values[k];
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

/// Rank over the field of fractions, by Bareiss elimination that skips
/// columns without a pivot. `rows[i][j]` all share `nvars`.
pub fn bareiss_rank(mut a: Vec<Vec<Poly>>, field: FieldSpec, nvars: usize) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Poly::constant(field.one(), nvars);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let pivot = (row..rows)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| (a[i][col].len(), i));
        let Some(p) = pivot else {
            continue;
        };
        a.swap(row, p);
        let (top, bottom) = a.split_at_mut(row + 1);
        let pr = &top[row];
        for r in bottom.iter_mut() {
            if r[col].is_zero() {
                for x in r.iter_mut().skip(col + 1) {
                    *x = x
                        .mul(&pr[col])
                        .div_exact(&prev)
                        .expect("exact Bareiss division");
                }
                continue;
            }
            for j in col + 1..cols {
                let num = pr[col].mul(&r[j]).sub(&r[col].mul(&pr[j]));
                r[j] = num.div_exact(&prev).expect("exact Bareiss division");
            }
            r[col] = Poly::zero(field, nvars);
        }
        prev = top[row][col].clone();
        row += 1;
    }
    row
}
