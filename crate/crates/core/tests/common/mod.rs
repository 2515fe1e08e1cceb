//! Independent oracles and random generators for the integration suites.
//!
//! Matrices are modelled here as plain residue tables mod `p`; ranks come
//! from a separate Gaussian elimination over `u64` and every completion is
//! enumerated explicitly. Nothing below calls into the rank code of the
//! library.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use aci::aci_core::{AciMatrix, Completion};
use aci::linalg::ConstMatrix;
use aci::parse::parse_matrix;
use aci::scalars::{FieldSpec, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An affine matrix over GF(p): `constant[i][j] + Σ_v coef[i][j][v]·x_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub owner: Vec<usize>,
    pub constant: Vec<Vec<u32>>,
    pub coef: Vec<Vec<Vec<u32>>>,
}

impl Model {
    pub fn zeros(p: u32, m: usize, n: usize) -> Self {
        Model {
            p,
            m,
            n,
            owner: Vec::new(),
            constant: vec![vec![0; n]; m],
            coef: vec![vec![Vec::new(); n]; m],
        }
    }

    pub fn nvars(&self) -> usize {
        self.owner.len()
    }

    pub fn add_var(&mut self, column: usize) -> usize {
        self.owner.push(column);
        for row in &mut self.coef {
            for cell in row.iter_mut() {
                cell.push(0);
            }
        }
        self.owner.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    pub fn entry_text(&self, i: usize, j: usize) -> String {
        self.entry_text_named(i, j, "v")
    }

    fn entry_text_named(&self, i: usize, j: usize, prefix: &str) -> String {
        let mut parts: Vec<String> = self.coef[i][j]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| {
                if c == 1 {
                    format!("{prefix}{v}")
                } else {
                    format!("{c}*{prefix}{v}")
                }
            })
            .collect();
        if self.constant[i][j] != 0 || parts.is_empty() {
            parts.push(self.constant[i][j].to_string());
        }
        parts.join(" + ")
    }

    pub fn text(&self) -> String {
        self.text_named("v")
    }

    /// Entries with indeterminates named `{prefix}0`, `{prefix}1`, ...
    pub fn text_named(&self, prefix: &str) -> String {
        (0..self.m)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entry_text_named(i, j, prefix))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn to_aci(&self) -> AciMatrix {
        self.to_aci_named("v")
    }

    pub fn to_aci_named(&self, prefix: &str) -> AciMatrix {
        if self.m == 0 || self.n == 0 {
            return AciMatrix::zeros(self.field(), self.m, self.n);
        }
        parse_matrix(self.field(), &self.text_named(prefix)).expect("generated matrix is ACI")
    }

    /// Reads a library matrix back into a table, one variable per
    /// indeterminate of `a`.
    pub fn from_aci(a: &AciMatrix) -> Self {
        let p = match a.field() {
            FieldSpec::Prime(p) => p,
            FieldSpec::Rational => panic!("oracle models are finite"),
        };
        let (m, n) = a.dims();
        let k = a.vars().len();
        let mut model = Model::zeros(p, m, n);
        model.owner = vec![0; k];
        for v in a.vars() {
            model.owner[v.id.index()] = v.owner_column;
        }
        for i in 0..m {
            for j in 0..n {
                let e = a.entry(i, j);
                model.constant[i][j] = residue(e.constant_term());
                let mut c = vec![0; k];
                for (id, s) in e.terms() {
                    c[id.index()] = residue(s);
                }
                model.coef[i][j] = c;
            }
        }
        model
    }

    pub fn eval(&self, values: &[u32]) -> Vec<Vec<u32>> {
        let p = self.p as u64;
        (0..self.m)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = self.constant[i][j] as u64;
                        for (v, &c) in self.coef[i][j].iter().enumerate() {
                            acc = (acc + c as u64 * values[v] as u64) % p;
                        }
                        acc as u32
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank of every completion, by enumeration.
    pub fn rank_set(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let k = self.nvars();
        let mut values = vec![0u32; k];
        loop {
            out.insert(rank_mod(self.eval(&values), self.p));
            let mut v = 0;
            while v < k {
                values[v] += 1;
                if values[v] < self.p {
                    break;
                }
                values[v] = 0;
                v += 1;
            }
            if v == k {
                break;
            }
        }
        out
    }

    pub fn max_rank(&self) -> usize {
        *self.rank_set().iter().next_back().unwrap()
    }

    /// Rank at a library completion; variable `v` of the table must be the
    /// indeterminate with id `v`, as produced by [`Model::from_aci`].
    pub fn rank_at(&self, c: &Completion) -> usize {
        let mut values = vec![0u32; self.nvars()];
        for (id, s) in c.iter() {
            values[id.index()] = residue(s);
        }
        rank_mod(self.eval(&values), self.p)
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Model {
        Model {
            p: self.p,
            m: rows.len(),
            n: cols.len(),
            owner: self.owner.clone(),
            constant: rows
                .clone()
                .map(|i| cols.clone().map(|j| self.constant[i][j]).collect())
                .collect(),
            coef: rows
                .map(|i| cols.clone().map(|j| self.coef[i][j].clone()).collect())
                .collect(),
        }
    }
}

pub fn residue(s: &Scalar) -> u32 {
    s.residue().expect("finite field scalar")
}

/// Rank of a residue matrix mod `p`.
pub fn rank_mod(mut a: Vec<Vec<u32>>, p: u32) -> usize {
    let p = p as u64;
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = pow_mod(a[rank][c] as u64, p - 2, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] as u64 * inv % p;
                for cc in c..cols {
                    let sub = f * a[rank][cc] as u64 % p;
                    a[r][cc] = ((a[r][cc] as u64 + p - sub) % p) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// A random ACI-matrix: each of `nvars` indeterminates gets a random home
/// column and shows up in some of its entries.
pub fn random_model(r: &mut ChaCha8Rng, p: u32, m: usize, n: usize, nvars: usize) -> Model {
    let mut model = Model::zeros(p, m, n);
    for _ in 0..nvars {
        if n > 0 {
            model.add_var(r.gen_range(0..n));
        }
    }
    for i in 0..m {
        for j in 0..n {
            if r.gen_bool(0.5) {
                model.constant[i][j] = r.gen_range(0..p);
            }
            for v in 0..model.nvars() {
                if model.owner[v] == j && r.gen_bool(0.4) {
                    model.coef[i][j][v] = r.gen_range(1..p);
                }
            }
        }
    }
    model
}

/// Random fixture with dims in `1..=max_m`, `1..=max_n`.
pub fn random_fixture(
    r: &mut ChaCha8Rng,
    primes: &[u32],
    max_m: usize,
    max_n: usize,
    max_vars: usize,
) -> Model {
    let p = *primes.choose(r).unwrap();
    let m = r.gen_range(1..=max_m);
    let n = r.gen_range(1..=max_n);
    let k = r.gen_range(0..=max_vars);
    random_model(r, p, m, n, k)
}

pub fn random_invertible(r: &mut ChaCha8Rng, p: u32, n: usize) -> ConstMatrix {
    loop {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..n).map(|_| r.gen_range(0..p)).collect())
            .collect();
        if rank_mod(rows.clone(), p) == n {
            let f = FieldSpec::Prime(p);
            let rows = rows
                .iter()
                .map(|row| row.iter().map(|&v| f.from_i64(v as i64)).collect())
                .collect();
            return ConstMatrix::from_rows(f, rows).unwrap();
        }
    }
}

pub fn random_permutation(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(r);
    v
}

/// `R·M·Q` computed directly on the table.
pub fn equivalent(model: &Model, rmat: &[Vec<u32>], order: &[usize]) -> Model {
    let p = model.p as u64;
    let mut out = Model::zeros(model.p, model.m, model.n);
    let mut pos = vec![0; model.n];
    for (k, &j) in order.iter().enumerate() {
        pos[j] = k;
    }
    out.owner = model.owner.iter().map(|&c| pos[c]).collect();
    let k = model.nvars();
    for i in 0..model.m {
        for (jj, &j) in order.iter().enumerate() {
            let mut c = 0u64;
            let mut coef = vec![0u64; k];
            for l in 0..model.m {
                let f = rmat[i][l] as u64;
                c = (c + f * model.constant[l][j] as u64) % p;
                for v in 0..k {
                    coef[v] = (coef[v] + f * model.coef[l][j][v] as u64) % p;
                }
            }
            out.constant[i][jj] = c as u32;
            out.coef[i][jj] = coef.into_iter().map(|x| x as u32).collect();
        }
    }
    out
}

pub fn const_rows(c: &ConstMatrix) -> Vec<Vec<u32>> {
    c.to_rows()
        .iter()
        .map(|r| r.iter().map(residue).collect())
        .collect()
}

pub fn block_is_zero(
    a: &AciMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> bool {
    rows.into_iter()
        .all(|i| cols.clone().all(|j| a.entry(i, j).is_zero()))
}

/// Every nonsingular `m×m` matrix over GF(p), for tiny `m` and `p`.
pub fn all_invertible(p: u32, m: usize) -> Vec<Vec<Vec<u32>>> {
    let total = (p as usize).pow((m * m) as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut rows = vec![vec![0u32; m]; m];
            for row in rows.iter_mut() {
                for v in row.iter_mut() {
                    *v = (code % p as usize) as u32;
                    code /= p as usize;
                }
            }
            (rank_mod(rows.clone(), p) == m).then_some(rows)
        })
        .collect()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Number of completions, saturating.
pub fn completions(model: &Model) -> u64 {
    (0..model.nvars()).fold(1u64, |acc, _| acc.saturating_mul(model.p as u64))
}

/// Brute force: is there an equivalent matrix with an all-zero bottom-left
/// `r×s` block, `r + s ≥ target`?
pub fn brute_force_zero_block(model: &Model, target: usize) -> bool {
    let (m, n) = (model.m, model.n);
    let perms = all_permutations(n);
    for rmat in all_invertible(model.p, m) {
        for order in &perms {
            let e = equivalent(model, &rmat, order);
            let zero =
                |i: usize, j: usize| e.constant[i][j] == 0 && e.coef[i][j].iter().all(|&c| c == 0);
            for r in 1..=m {
                for s in 1..=n {
                    if r + s >= target && (m - r..m).all(|i| (0..s).all(|j| zero(i, j))) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// A template of the constant-rank characterization with zero block
/// `r × s`, scrambled by a random equivalence. Every star is `a·x + b`
/// with a fresh `x`, which keeps `(r, s)` the unique maximal zero block.
/// Returns the scrambled table and the unscrambled one.
pub fn template(
    r_: &mut ChaCha8Rng,
    p: u32,
    m: usize,
    n: usize,
    r: usize,
    s: usize,
) -> (Model, Model) {
    let (top, bottom) = (m - r, n - s);
    assert!(top <= s && bottom <= r);
    let mut t = Model::zeros(p, m, n);
    let mut stars: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let in_zero = i >= top && j < s;
            let top_unit = i < top && j < top;
            let bottom_unit = i >= m - bottom && j >= s;
            if in_zero {
                continue;
            }
            if top_unit {
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => t.constant[i][j] = 1,
                    std::cmp::Ordering::Less => stars.push((i, j)),
                    std::cmp::Ordering::Greater => {}
                }
            } else if bottom_unit {
                let (bi, bj) = (i - (m - bottom), j - s);
                match bi.cmp(&bj) {
                    std::cmp::Ordering::Equal => t.constant[i][j] = 1,
                    std::cmp::Ordering::Less => stars.push((i, j)),
                    std::cmp::Ordering::Greater => {}
                }
            } else {
                stars.push((i, j));
            }
        }
    }
    for (i, j) in stars {
        let v = t.add_var(j);
        t.coef[i][j][v] = r_.gen_range(1..p);
        t.constant[i][j] = r_.gen_range(0..p);
    }
    let rmat = const_rows(&random_invertible(r_, p, m));
    let order = random_permutation(r_, n);
    (equivalent(&t, &rmat, &order), t)
}
