//! The `.aci` matrix file format.
//!
//! ```text
//! field: rational        # or gf(p)
//! name: example          # optional
//! x + 2, 1, z
//! x + 1, 8y, 3z - 5
//! ```
//!
//! Matrices without rows or columns use a `dims: m x n` header and no
//! entry lines.

use crate::aci_core::{validate_aci, AciMatrix, CandidateGrid};
use crate::error::{Error, Result};
use crate::parse::{entry_grid, parse_raw};
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub field: FieldSpec,
    pub name: Option<String>,
    pub rows: Vec<Vec<String>>,
    /// Set by a `dims:` header; otherwise the grid shape.
    pub dims: (usize, usize),
}

fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let (k, v) = line.split_once(':')?;
    (k.trim() == key).then(|| v.trim())
}

fn parse_dims(text: &str, offset: usize) -> Result<(usize, usize)> {
    let bad = || Error::SyntaxError {
        position: offset,
        expected: "dims of the form `m x n`".into(),
    };
    let (m, n) = text.split_once('x').ok_or_else(bad)?;
    Ok((
        m.trim().parse().map_err(|_| bad())?,
        n.trim().parse().map_err(|_| bad())?,
    ))
}

impl MatrixDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut field = None;
        let mut name = None;
        let mut dims = None;
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut offset = 0;
        for raw_line in text.split_inclusive('\n') {
            let line_start = offset;
            offset += raw_line.len();
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if field.is_none() {
                let value = header(line, "field").ok_or_else(|| Error::SyntaxError {
                    position: line_start,
                    expected: "a `field:` header".into(),
                })?;
                field = Some(value.parse::<FieldSpec>()?);
                continue;
            }
            if rows.is_empty() {
                if let Some(v) = header(line, "name") {
                    name = Some(v.to_string());
                    continue;
                }
                if let Some(v) = header(line, "dims") {
                    dims = Some(parse_dims(v, line_start)?);
                    continue;
                }
            }
            rows.push(line.split(',').map(|e| e.trim().to_string()).collect());
        }
        let field = field.ok_or_else(|| Error::SyntaxError {
            position: offset,
            expected: "a `field:` header".into(),
        })?;
        let width = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, row 1 has {width}",
                bad + 1,
                rows[bad].len()
            )));
        }
        let grid = (rows.len(), width);
        let dims = match dims {
            Some(d) if !rows.is_empty() && d != grid => {
                return Err(Error::DimensionMismatch(format!(
                    "header says {}x{} but the grid is {}x{}",
                    d.0, d.1, grid.0, grid.1
                )))
            }
            Some((m, n)) if rows.is_empty() && m > 0 && n > 0 => {
                return Err(Error::DimensionMismatch(format!(
                    "{m}x{n} matrix without entry lines"
                )))
            }
            Some(d) => d,
            None => grid,
        };
        Ok(Self {
            field,
            name,
            rows,
            dims,
        })
    }

    /// Reinterprets the entries over another field.
    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn to_matrix(&self) -> Result<AciMatrix> {
        let entries = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| parse_raw(e, self.field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Ok(AciMatrix::zeros(self.field, self.dims.0, self.dims.1));
        }
        validate_aci(&CandidateGrid {
            field: self.field,
            rows: self.dims.0,
            cols: self.dims.1,
            entries,
            declared: None,
        })
    }

    pub fn from_matrix(m: &AciMatrix, name: Option<String>) -> Self {
        Self {
            field: m.field(),
            name,
            rows: if m.rows() == 0 || m.cols() == 0 {
                Vec::new()
            } else {
                entry_grid(m)
            },
            dims: m.dims(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("field: {}\n", self.field);
        if let Some(n) = &self.name {
            out.push_str(&format!("name: {n}\n"));
        }
        if self.rows.is_empty() {
            out.push_str(&format!("dims: {} x {}\n", self.dims.0, self.dims.1));
        }
        for r in &self.rows {
            out.push_str(&r.join(", "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headers_comments_and_rows() {
        let doc = MatrixDocument::parse(
            "# leading comment\nfield: rational\nname: demo\n1, x # first row\n0, 1\n",
        )
        .unwrap();
        assert_eq!(doc.name.as_deref(), Some("demo"));
        assert_eq!(doc.dims, (2, 2));
        let m = doc.to_matrix().unwrap();
        assert_eq!(m.var_names(), vec!["x".to_string()]);
        let again = MatrixDocument::parse(&doc.render()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn degenerate_dims() {
        let doc = MatrixDocument::parse("field: gf(3)\ndims: 2 x 0\n").unwrap();
        assert_eq!(doc.to_matrix().unwrap().dims(), (2, 0));
        assert!(MatrixDocument::parse("field: gf(3)\ndims: 2 x 2\n").is_err());
        let round = MatrixDocument::from_matrix(&AciMatrix::zeros(FieldSpec::Prime(3), 0, 4), None);
        assert_eq!(MatrixDocument::parse(&round.render()).unwrap(), round);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            MatrixDocument::parse("1, 2\n"),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(
            MatrixDocument::parse("field: gf(4)\n1\n"),
            Err(Error::NotPrime(4))
        ));
        assert!(matches!(
            MatrixDocument::parse("field: reals\n1\n"),
            Err(Error::UnknownField(_))
        ));
        assert!(matches!(
            MatrixDocument::parse("field: rational\n1, 2\n3\n"),
            Err(Error::DimensionMismatch(_))
        ));
        let sharing = MatrixDocument::parse("field: rational\nx, 1\n1, x\n").unwrap();
        assert!(matches!(
            sharing.to_matrix(),
            Err(Error::ColumnSharing { .. })
        ));
    }

    #[test]
    fn field_override_reparses() {
        let doc = MatrixDocument::parse("field: rational\n-x + 1, 2\n").unwrap();
        let m = doc.with_field(FieldSpec::Prime(5)).to_matrix().unwrap();
        assert_eq!(
            entry_grid(&m),
            vec![vec!["4x + 1".to_string(), "2".to_string()]]
        );
    }
}
