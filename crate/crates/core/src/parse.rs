//! Entry expressions: `expression := term (('+'|'-') term)*`,
//! `term := coefficient | coefficient? ['*'] identifier`.
//!
//! The parser accepts products and powers of identifiers (`x*y`, `x^2`) so
//! that they can be reported as non-affine rather than as syntax errors.

use num_bigint::BigInt;

use crate::aci_core::{
    validate_aci, AciMatrix, AffineForm, CandidateGrid, RawExpr, RawTerm, VarId,
};
use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Scalar};

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    field: FieldSpec,
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, field: FieldSpec) -> Self {
        Self {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            field,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.text.len(), |&(i, _)| i)
    }

    fn error(&self, expected: &str) -> Error {
        Error::SyntaxError {
            position: self.offset(),
            expected: expected.to_string(),
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let digits: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        Some(digits.parse().expect("ascii digits"))
    }

    fn identifier(&mut self) -> Option<String> {
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        Some(
            self.chars[start..self.pos]
                .iter()
                .map(|&(_, c)| c)
                .collect(),
        )
    }

    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        let Some(num) = self.integer() else {
            return Ok(None);
        };
        let den = if self.peek() == Some('/') {
            if self.field != FieldSpec::Rational {
                return Err(
                    self.error("'+', '-' or an identifier (fractions need the rational field)")
                );
            }
            self.pos += 1;
            self.integer()
                .ok_or_else(|| self.error("integer denominator"))?
        } else {
            BigInt::from(1)
        };
        self.field.from_ratio(&num, &den).map(Some)
    }

    /// `identifier ('^' integer)?`, repeated for each factor.
    fn factor(&mut self, vars: &mut Vec<String>) -> Result<bool> {
        let Some(name) = self.identifier() else {
            return Ok(false);
        };
        let mut power = 1usize;
        if self.peek() == Some('^') {
            self.pos += 1;
            let p = self
                .integer()
                .ok_or_else(|| self.error("integer exponent"))?;
            power = p.try_into().map_err(|_| self.error("small exponent"))?;
        }
        vars.extend(std::iter::repeat_n(name, power));
        Ok(true)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let coefficient = self.coefficient()?;
        let mut vars = Vec::new();
        if coefficient.is_some() && self.peek() == Some('*') {
            self.pos += 1;
            if !self.factor(&mut vars)? {
                return Err(self.error("identifier after '*'"));
            }
        } else if !self.factor(&mut vars)? && coefficient.is_none() {
            return Err(self.error("integer or identifier"));
        }
        while !vars.is_empty() {
            let checkpoint = self.pos;
            if self.peek() == Some('*') {
                self.pos += 1;
            }
            if !self.factor(&mut vars)? {
                self.pos = checkpoint;
                break;
            }
        }
        Ok(RawTerm {
            coefficient: coefficient.unwrap_or_else(|| self.field.one()),
            vars,
        })
    }

    fn expression(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coefficient = -&t.coefficient;
            }
            terms.push(t);
            match self.peek() {
                None => return Ok(terms),
                Some('+') => negate = false,
                Some('-') => negate = true,
                Some(_) => return Err(self.error("'+', '-' or end of entry")),
            }
            self.pos += 1;
        }
    }
}

/// Parses an entry into raw monomials (any degree).
pub fn parse_raw(text: &str, field: FieldSpec) -> Result<RawExpr> {
    let mut lexer = Lexer::new(text, field);
    let terms = lexer.expression()?;
    Ok(RawExpr {
        text: text.trim().to_string(),
        terms,
    })
}

/// An affine entry with its own registry: `VarId(k)` names `names[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEntry {
    pub form: AffineForm,
    pub names: Vec<String>,
}

pub fn parse_entry(text: &str, field: FieldSpec) -> Result<ParsedEntry> {
    let raw = parse_raw(text, field)?;
    let mut names: Vec<String> = Vec::new();
    let mut form = AffineForm::zero(field);
    for t in &raw.terms {
        match t.vars.as_slice() {
            [] => form.add_scaled(&AffineForm::constant(field.one()), &t.coefficient),
            [name] => {
                let k = names.iter().position(|n| n == name).unwrap_or_else(|| {
                    names.push(name.clone());
                    names.len() - 1
                });
                form.add_term(VarId(k as u32), &t.coefficient);
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
    Ok(ParsedEntry { form, names })
}

fn format_coefficient(c: &Scalar) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("{c}*")
    }
}

/// Prints an entry so that [`parse_entry`] reads it back unchanged.
/// `names[k]` is the display name of `VarId(k)`.
pub fn format_affine(form: &AffineForm, names: &[String]) -> String {
    let mut out = String::new();
    for (id, c) in form.terms() {
        let name = &names[id.index()];
        let mag = c.abs();
        let body = if mag.is_one() {
            name.clone()
        } else {
            format!("{}{name}", format_coefficient(&mag))
        };
        push_signed(&mut out, c.is_negative(), &body);
    }
    let k = form.constant_term();
    if !k.is_zero() || out.is_empty() {
        push_signed(&mut out, k.is_negative(), &k.abs().to_string());
    }
    out
}

fn push_signed(out: &mut String, negative: bool, body: &str) {
    match (out.is_empty(), negative) {
        (true, false) => out.push_str(body),
        (true, true) => {
            out.push('-');
            out.push_str(body);
        }
        (false, false) => {
            out.push_str(" + ");
            out.push_str(body);
        }
        (false, true) => {
            out.push_str(" - ");
            out.push_str(body);
        }
    }
}

/// Builds a matrix from `;`- or newline-separated rows of comma-separated
/// entries.
pub fn parse_matrix(field: FieldSpec, text: &str) -> Result<AciMatrix> {
    let rows: Vec<&str> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .collect();
    let entries = rows
        .iter()
        .map(|r| {
            r.split(',')
                .map(|e| parse_raw(e, field))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let cols = entries.first().map_or(0, Vec::len);
    validate_aci(&CandidateGrid {
        field,
        rows: entries.len(),
        cols,
        entries,
        declared: None,
    })
}

/// The entries of `m` as printable strings.
pub fn entry_grid(m: &AciMatrix) -> Vec<Vec<String>> {
    let names = m.var_names();
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| format_affine(e, &names)).collect())
        .collect()
}
