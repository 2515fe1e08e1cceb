//! JSON reports. Keys come out sorted and column indices are 1-based.

use serde_json::{json, Map, Value};

use crate::aci_core::{AciMatrix, Completion};
use crate::constant_rank::CanonicalForm;
use crate::decomposition::{FactorLattice, WstDecomposition, ZeroBlockWitness};
use crate::error::RankWitnessPair;
use crate::linalg::ConstMatrix;
use crate::parse::entry_grid;
use crate::rank_engine::RankReport;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_name: String,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "input_name": self.input_name,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain JSON values")
    }
}

pub fn one_based(cols: &[usize]) -> Value {
    json!(cols.iter().map(|c| c + 1).collect::<Vec<_>>())
}

pub fn matrix_json(m: &AciMatrix) -> Value {
    json!({
        "dims": [m.rows(), m.cols()],
        "entries": if m.rows() == 0 || m.cols() == 0 { Vec::new() } else { entry_grid(m) },
    })
}

pub fn const_matrix_json(c: &ConstMatrix) -> Value {
    json!(c
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn completion_json(m: &AciMatrix, c: &Completion) -> Value {
    let map: Map<String, Value> = c
        .named(m)
        .into_iter()
        .map(|(k, v)| (k, Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

pub fn rank_json(m: &AciMatrix, r: &RankReport, symbolic: usize) -> Value {
    let witness =
        |w: &Option<Completion>| w.as_ref().map_or(Value::Null, |c| completion_json(m, c));
    json!({
        "dims": [m.rows(), m.cols()],
        "field": m.field().to_string(),
        "rank_set": r.rank_set.as_ref().map(|s| s.iter().copied().collect::<Vec<_>>()),
        "max_rank": r.max_rank,
        "min_rank": r.min_rank,
        "max_witness": witness(&r.max_witness),
        "min_witness": witness(&r.min_witness),
        "method": r.method.as_str(),
        "symbolic_rank": symbolic,
    })
}

pub fn lattice_json(l: &FactorLattice) -> Value {
    json!({
        "kind": l.kind.as_str(),
        "members": l.members.iter().map(|f| one_based(f)).collect::<Vec<_>>(),
        "f_bot": l.f_bot.as_ref().map(|f| one_based(f)),
        "f_top": l.f_top.as_ref().map(|f| one_based(f)),
        "consistent": l.consistent,
    })
}

pub fn wst_json(d: &WstDecomposition) -> Value {
    json!({
        "case": d.case.to_string(),
        "f_bot": one_based(&d.f_bot),
        "f_top": one_based(&d.f_top),
        "R": const_matrix_json(&d.r),
        "column_order": one_based(&d.column_order),
        "arranged": matrix_json(&d.arranged),
        "blocks": {
            "W": matrix_json(&d.w),
            "S": matrix_json(&d.s),
            "T": matrix_json(&d.t),
        },
        "stars": {
            "WS": matrix_json(&d.star_ws),
            "WT": matrix_json(&d.star_wt),
            "ST": matrix_json(&d.star_st),
        },
        "max_rank": d.max_rank(),
    })
}

pub fn zero_block_json(w: &ZeroBlockWitness) -> Value {
    json!({
        "r": w.r,
        "s": w.s,
        "R": const_matrix_json(&w.r_matrix),
        "column_order": one_based(&w.column_order),
        "arranged": matrix_json(&w.arranged),
        "factor_set": one_based(&w.factor_set),
    })
}

pub fn canonical_json(c: &CanonicalForm) -> Value {
    json!({
        "tag": c.tag.as_str(),
        "rho": c.rho,
        "zero_block": [c.zero_rows, c.zero_cols],
        "R": const_matrix_json(&c.r),
        "column_order": one_based(&c.column_order),
        "arranged": matrix_json(&c.arranged),
        "outside_characterization": c.outside_characterization,
        "refined": {
            "R": const_matrix_json(&c.refined.r),
            "column_order": one_based(&c.refined.column_order),
            "arranged": matrix_json(&c.refined.arranged),
            "W": [c.refined.w_dims.0, c.refined.w_dims.1],
            "S": [c.refined.s_size, c.refined.s_size],
            "T": [c.refined.t_dims.0, c.refined.t_dims.1],
        },
    })
}

pub fn witness_pair_json(m: &AciMatrix, p: &RankWitnessPair) -> Value {
    json!({
        "low": { "rank": p.low_rank, "assignment": completion_json(m, &p.low) },
        "high": { "rank": p.high_rank, "assignment": completion_json(m, &p.high) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix;
    use crate::rank_engine::{rank_set_exhaustive, SearchBudget};
    use crate::scalars::FieldSpec;

    #[test]
    fn keys_sorted_and_stable() {
        let m = parse_matrix(FieldSpec::Prime(2), "x, 1; 1, y").unwrap();
        let r = rank_set_exhaustive(&m, &SearchBudget::default()).unwrap();
        let report = Report {
            command: "rank".into(),
            input_name: "t".into(),
            payload: rank_json(&m, &r, 2),
            diagnostics: vec![],
        };
        let text = report.to_json_string();
        assert_eq!(text, report.to_json_string());
        let cmd = text.find("\"command\"").unwrap();
        let schema = text.find("\"schema\"").unwrap();
        assert!(cmd < schema);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["payload"]["rank_set"], json!([1, 2]));
        assert_eq!(v["payload"]["min_witness"], json!({"x": "1", "y": "1"}));
    }
}
