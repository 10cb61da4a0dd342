//! Serialization of leaf tables: deterministic JSON (primary) and a CSV
//! flattening, plus parsing of conjugacy-class representative files.

use serde::{Deserialize, Serialize};
use tleaf_core::exactlin::{format_rational, parse_rational, Matrix};
use tleaf_core::series::{LeafDescriptor, SeriesTag};
use tleaf_core::sl_oracle::GroupElement;
use tleaf_core::weyl::WeylGroup;

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct TableMeta {
    pub series: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub n: usize,
    pub normalization: String,
    pub version: String,
    pub seed: u64,
    pub count: usize,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct LeafRow {
    pub u: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_dim: Option<usize>,
    pub leaf_dim: usize,
    pub rank: usize,
    pub stab_dim: usize,
    pub stab_basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct LeafTable {
    pub meta: TableMeta,
    pub leaves: Vec<LeafRow>,
}

impl LeafTable {
    pub fn new(
        series: SeriesTag,
        type_label: &str,
        n: usize,
        seed: u64,
        wg: &WeylGroup,
        leaves: &[LeafDescriptor],
    ) -> LeafTable {
        let rows = leaves
            .iter()
            .map(|l| LeafRow {
                u: l.u.iter().map(|&x| wg.render(x)).collect(),
                v: if l.v.is_empty() {
                    None
                } else {
                    Some(l.v.iter().map(|&x| wg.render(x)).collect())
                },
                w: l.w.map(|x| wg.render(x)),
                class_dim: l.class_dim,
                leaf_dim: l.leaf_dim,
                rank: l.symplectic_rank,
                stab_dim: l.stabilizer.dim(),
                stab_basis: l
                    .stabilizer
                    .basis_rows()
                    .iter()
                    .map(|row| row.iter().map(format_rational).collect())
                    .collect(),
            })
            .collect();
        LeafTable {
            meta: TableMeta {
                series: series.as_str().to_string(),
                type_label: type_label.to_string(),
                n,
                normalization: "short-root-square-length-2".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
                count: leaves.len(),
            },
            leaves: rows,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_json(s: &str) -> Result<LeafTable, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,type,n,u,v,w,class_dim,leaf_dim,rank,stab_dim,stab_basis\n");
        for row in &self.leaves {
            let basis = row
                .stab_basis
                .iter()
                .map(|v| format!("({})", v.join(" ")))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{},\"{}\",\"{}\",\"{}\",{},{},{},{},\"{}\"\n",
                self.meta.series,
                self.meta.type_label,
                self.meta.n,
                row.u.join(","),
                row.v.as_ref().map(|v| v.join(",")).unwrap_or_default(),
                row.w.clone().unwrap_or_default(),
                row.class_dim.map(|d| d.to_string()).unwrap_or_default(),
                row.leaf_dim,
                row.rank,
                row.stab_dim,
                basis,
            ));
        }
        out
    }
}


/// Parses a conjugacy-class representative: a JSON array of rows of rational
/// strings, e.g. [["2","0"],["0","1/2"]]. The determinant must be one.
pub fn parse_class_rep(text: &str) -> Result<GroupElement, String> {
    let rows: Vec<Vec<String>> =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let m = rows.len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err("representative must be a nonempty square matrix".into());
    }
    let mut mat = Matrix::zero(m, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let v = parse_rational(entry).ok_or_else(|| format!("bad rational `{entry}`"))?;
            mat.set(i, j, v);
        }
    }
    GroupElement::new(mat).map_err(|e| e.to_string())
}
