//! CSV relation files: one column per attribute plus a final `#annotation`
//! column parsed by the monoid codec.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{AttrSet, Attribute, KRel};
use crate::error::{Error, Result};
use crate::monoid::MonoidRef;

pub const ANNOTATION: &str = "#annotation";

impl KRel {
    /// Rows in tuple order; the header lists the attributes sorted by name.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = self.attrs.names();
        header.push(ANNOTATION);
        w.write_record(&header).expect("in-memory write");
        for (t, e) in &self.entries {
            let mut row = self.attrs.format_tuple(t);
            row.push(self.monoid.format_elem(e));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }

    /// Parses a CSV relation. Columns are looked up in `universe` by name;
    /// columns not found there get a domain inferred from the file's values.
    pub fn from_csv(m: &MonoidRef, universe: Option<&AttrSet>, text: &str) -> Result<KRel> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let Some((last, names)) = header.split_last() else {
            return Err(Error::Parse { line: 1, message: "empty header".into() });
        };
        if last != ANNOTATION {
            return Err(Error::Parse {
                line: 1,
                message: format!("last column must be {ANNOTATION}, found {last:?}"),
            });
        }
        let mut rows: Vec<(usize, Vec<String>, String)> = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", header.len(), rec.len()),
                });
            }
            let vals: Vec<String> = rec.iter().map(str::to_string).collect();
            let (ann, vals) = vals.split_last().unwrap();
            rows.push((line, vals.to_vec(), ann.clone()));
        }
        let mut attrs = Vec::with_capacity(names.len());
        for (col, name) in names.iter().enumerate() {
            match universe.and_then(|u| u.get(name)) {
                Some(a) => attrs.push(a.clone()),
                None => {
                    let domain: BTreeSet<&str> = rows.iter().map(|r| r.1[col].as_str()).collect();
                    if domain.is_empty() {
                        return Err(Error::Attribute(format!(
                            "no domain known for attribute {name} and the file has no rows"
                        )));
                    }
                    attrs.push(Attribute::new(name, &domain.into_iter().collect::<Vec<_>>()));
                }
            }
        }
        let set = AttrSet::new(attrs)?;
        // Column order in the file may differ from the sorted attribute order.
        let order: Vec<usize> = set
            .names()
            .iter()
            .map(|n| names.iter().position(|h| h == n).unwrap())
            .collect();
        let mut r = KRel::new(m.clone(), set.clone());
        for (line, vals, ann) in rows {
            let at = |e: Error| Error::Parse { line, message: e.to_string() };
            let ordered: Vec<&str> = order.iter().map(|&c| vals[c].as_str()).collect();
            let t = set.tuple(&ordered).map_err(at)?;
            let e = m.parse_elem(&ann).map_err(at)?;
            if r.entries.contains_key(&t) {
                return Err(Error::Parse { line, message: "duplicate tuple".into() });
            }
            r.set(t, e).map_err(at)?;
        }
        Ok(r)
    }

    pub fn from_csv_file(
        m: &MonoidRef,
        universe: Option<&AttrSet>,
        path: impl AsRef<std::path::Path>,
    ) -> Result<KRel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        KRel::from_csv(m, universe, &text)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    /// Embedded form used in traces: attribute names and CSV-equivalent rows.
    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|(t, e)| {
                let mut row = self.attrs.format_tuple(t);
                row.push(self.monoid.format_elem(e));
                row
            })
            .collect();
        json!({ "attrs": self.attrs.names(), "rows": rows })
    }

    /// Inverse of [`to_json_value`](Self::to_json_value); attribute domains come from `universe`.
    pub fn from_json_value(m: &MonoidRef, universe: &AttrSet, v: &Value) -> Result<KRel> {
        let bad = |msg: &str| Error::Format(format!("embedded relation: {msg}"));
        let names: Vec<&str> = v["attrs"]
            .as_array()
            .ok_or_else(|| bad("missing attrs"))?
            .iter()
            .map(|n| n.as_str().ok_or_else(|| bad("attribute names must be strings")))
            .collect::<Result<_>>()?;
        let attrs = universe.restrict(&names)?;
        let mut r = KRel::new(m.clone(), attrs.clone());
        for row in v["rows"].as_array().ok_or_else(|| bad("missing rows"))? {
            let cells: Vec<&str> = row
                .as_array()
                .ok_or_else(|| bad("rows must be arrays"))?
                .iter()
                .map(|c| c.as_str().ok_or_else(|| bad("cells must be strings")))
                .collect::<Result<_>>()?;
            let (ann, vals) = cells.split_last().ok_or_else(|| bad("empty row"))?;
            r.set(attrs.tuple(vals)?, m.parse_elem(ann)?)?;
        }
        Ok(r)
    }
}
