use std::fmt::Write;

use orbring_core::hkr::HkrReport;
use orbring_core::rational::format_rational;
use orbring_core::stringy::age;
use orbring_core::verify::{self, CheckReport};
use orbring_core::{OrbifoldDatum, ProductTable, Rational};
use serde_json::{json, Value};

/// Left-aligned columns separated by two spaces; no trailing blanks.
fn columns(rows: &[Vec<String>]) -> String {
    let n = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..n)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn check_text(d: &OrbifoldDatum, reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(out, "{r}").unwrap();
    }
    let (passed, failed) = verify::summary(reports);
    writeln!(out, "{}: {passed} passed, {failed} failed", d.name).unwrap();
    out
}

pub fn check_json(d: &OrbifoldDatum, reports: &[CheckReport]) -> String {
    let (passed, failed) = verify::summary(reports);
    let v = json!({
        "datum": d.name,
        "passed": passed,
        "failed": failed,
        "reports": reports,
    });
    serde_json::to_string_pretty(&v).unwrap()
}

fn nonzero(v: &[Rational]) -> Vec<(usize, String)> {
    let zero = Rational::from_integer(0.into());
    v.iter()
        .enumerate()
        .filter(|(_, c)| **c != zero)
        .map(|(k, c)| (k, format_rational(c)))
        .collect()
}

pub fn table_text(title: &str, t: &ProductTable) -> String {
    let mut out = format!("# {title}, dimension {}\n\nbasis\n", t.dim());
    let rows: Vec<Vec<String>> = (0..t.dim())
        .map(|i| {
            vec![
                format!("  {i}"),
                t.labels[i].clone(),
                t.degrees[i].to_string(),
                if t.odd[i] { "odd".into() } else { String::new() },
            ]
        })
        .collect();
    out.push_str(&columns(&rows));
    out.push_str("\nproducts\n");
    let mut rows = Vec::new();
    for i in 0..t.dim() {
        for j in 0..t.dim() {
            let v = t.product(i, j);
            if nonzero(v).is_empty() {
                continue;
            }
            rows.push(vec![
                format!("  {}", t.labels[i]),
                "*".into(),
                t.labels[j].clone(),
                "=".into(),
                t.format_vector(v),
            ]);
        }
    }
    out.push_str(&columns(&rows));
    out
}

pub fn table_json(title: &str, t: &ProductTable) -> String {
    let basis: Vec<Value> = (0..t.dim())
        .map(|i| {
            json!({
                "label": t.labels[i],
                "p": format_rational(&t.degrees[i].p),
                "n": t.degrees[i].n,
                "odd": t.odd[i],
            })
        })
        .collect();
    let mut products = Vec::new();
    for i in 0..t.dim() {
        for j in 0..t.dim() {
            let terms: Vec<Value> = nonzero(t.product(i, j))
                .into_iter()
                .map(|(k, c)| json!([t.labels[k], c]))
                .collect();
            if !terms.is_empty() {
                products.push(json!({"left": t.labels[i], "right": t.labels[j], "value": terms}));
            }
        }
    }
    let v = json!({"title": title, "dimension": t.dim(), "basis": basis, "products": products});
    serde_json::to_string_pretty(&v).unwrap()
}

pub struct AgeRow {
    pub sector: String,
    pub element: String,
    pub component: usize,
    pub dim: u32,
    pub age: Rational,
}

pub fn age_rows(d: &OrbifoldDatum) -> orbring_core::Result<Vec<AgeRow>> {
    d.single_sectors()
        .map(|(key, alg)| {
            Ok(AgeRow {
                sector: d.key_name(key),
                element: d.group.name(key.g()).to_string(),
                component: key.component,
                dim: alg.dim(),
                age: age(d, key)?,
            })
        })
        .collect()
}

pub fn ages_text(rows: &[AgeRow]) -> String {
    let mut table = vec![vec!["sector".to_string(), "dim".into(), "age".into()]];
    for r in rows {
        table.push(vec![r.sector.clone(), r.dim.to_string(), format_rational(&r.age)]);
    }
    columns(&table)
}

pub fn ages_json(d: &OrbifoldDatum, rows: &[AgeRow]) -> String {
    let sectors: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "element": r.element,
                "component": r.component,
                "dim": r.dim,
                "age": format_rational(&r.age),
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({"datum": d.name, "sectors": sectors})).unwrap()
}

pub fn compare_text(name: &str, r: &HkrReport) -> String {
    let mut out = format!("# {name}: orbifold ring against resolution\n\n{}\n", r.dims);
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    if r.pairs_checked > 0 {
        writeln!(out, "basis pairs checked: {}", r.pairs_checked).unwrap();
    }
    out
}

pub fn compare_json(name: &str, r: &HkrReport) -> String {
    let dims = |m: &std::collections::BTreeMap<orbring_core::StringyDegree, usize>| -> Vec<Value> {
        m.iter()
            .map(|(d, n)| json!({"p": format_rational(&d.p), "n": d.n, "dim": n}))
            .collect()
    };
    let v = json!({
        "datum": name,
        "orbifold_dims": dims(&r.dims.left),
        "resolution_dims": dims(&r.dims.right),
        "verdict": r.verdict,
        "summary": r.verdict.to_string(),
        "pairs_checked": r.pairs_checked,
    });
    serde_json::to_string_pretty(&v).unwrap()
}
