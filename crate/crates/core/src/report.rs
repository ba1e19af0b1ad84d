//! Row types and emitters for the CLI: JSON lines, CSV and plain text.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{bound, bound_h31, reference_bounds, BoundResult, Functional, Reference};
use crate::caratheodory::{CaratheodoryCoeffs, HerglotzMeasure};
use crate::coeffs::{rational_string, ClassKind, ClassSpec};
use crate::error::{Error, Result};
use crate::polyid::IdentityReport;
use crate::search::SearchReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidConfig(format!("unknown format `{s}`"))),
        }
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows of strings with a header, emitted as CSV or an aligned table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain(std::iter::once(self.headers[j].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let mut line = |cells: &mut dyn Iterator<Item = &str>| {
            let parts: Vec<String> = cells
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut self.headers.iter().copied());
        for row in &self.rows {
            line(&mut row.iter().map(String::as_str));
        }
        out
    }
}

/// One serialized value per line.
pub fn json_lines<T: Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| serde_json::to_string(i).expect("serializable row") + "\n")
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub form: crate::polyid::Form,
    pub holds: bool,
    pub holds_up_to_sign: bool,
    pub residual_term_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl From<&IdentityReport> for IdentityRow {
    fn from(r: &IdentityReport) -> Self {
        Self {
            name: r.name.to_string(),
            form: r.form,
            holds: r.holds,
            holds_up_to_sign: r.holds_up_to_sign,
            residual_term_count: r.residual_term_count(),
            residual: (!r.holds).then(|| r.residual.to_string()),
        }
    }
}

pub fn identity_table(rows: &[IdentityRow]) -> Table {
    let mut t = Table::new(vec!["name", "form", "holds", "holds_up_to_sign", "residual_term_count"]);
    for r in rows {
        t.push(vec![
            r.name.clone(),
            format!("{:?}", r.form).to_lowercase(),
            r.holds.to_string(),
            r.holds_up_to_sign.to_string(),
            r.residual_term_count.to_string(),
        ]);
    }
    t
}

/// A bound or a literature reference value at one α.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub class: ClassKind,
    pub alpha: f64,
    pub alpha_exact: String,
    pub kind: &'static str,
    pub functional: String,
    pub bound: f64,
    pub bound_exact: Option<String>,
    pub source: &'static str,
}

impl BoundRow {
    fn new(b: &BoundResult, kind: &'static str) -> Self {
        Self {
            class: b.class.kind(),
            alpha: b.class.alpha_f64(),
            alpha_exact: rational_string(b.class.alpha()),
            kind,
            functional: b.functional.to_string(),
            bound: b.value.to_f64(),
            bound_exact: b.value.exact().map(rational_string),
            source: b.source,
        }
    }
}

/// Every bound available for `class`: `H_{3,1}` (both parts for `M(α)`),
/// then `J_2`, `J_3` where known, then literature values at the same order.
pub fn bound_rows(class: &ClassSpec) -> Vec<BoundRow> {
    let mut rows: Vec<BoundRow> = bound_h31(class).iter().map(|b| BoundRow::new(b, "bound")).collect();
    for f in [Functional::J2, Functional::J3] {
        if let Ok(b) = bound(class, f) {
            rows.push(BoundRow::new(&b, "bound"));
        }
    }
    let references = [
        Reference::Babalola2010,
        Reference::Zaprawa2017,
        Reference::Bansal2015,
        Reference::VamsheeKrishna2015(class.alpha().clone()),
    ];
    for r in &references {
        for b in reference_bounds(r).unwrap_or_default() {
            if b.class == *class {
                rows.push(BoundRow::new(&b, "reference"));
            }
        }
    }
    rows
}

pub fn bound_table(rows: &[BoundRow]) -> Table {
    let mut t = Table::new(vec![
        "class",
        "alpha",
        "alpha_exact",
        "kind",
        "functional",
        "bound",
        "bound_exact",
        "source",
    ]);
    for r in rows {
        t.push(vec![
            r.class.to_string(),
            real(r.alpha),
            r.alpha_exact.clone(),
            r.kind.to_string(),
            r.functional.clone(),
            real(r.bound),
            r.bound_exact.clone().unwrap_or_default(),
            r.source.to_string(),
        ]);
    }
    t
}

/// `weight@angle` pairs separated by `;`.
pub fn measure_string(m: &HerglotzMeasure) -> String {
    m.atoms()
        .iter()
        .map(|a| format!("{}@{}", real(a.weight), real(a.angle)))
        .collect::<Vec<_>>()
        .join(";")
}

/// `re+im*i` entries separated by `;`.
pub fn coeffs_string(p: &CaratheodoryCoeffs) -> String {
    p.as_slice()
        .iter()
        .map(|z| format!("{}{:+.16e}i", real(z.re), z.im))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn search_table(reports: &[SearchReport]) -> Table {
    let mut t = Table::new(vec![
        "class",
        "alpha",
        "alpha_exact",
        "functional",
        "best_magnitude",
        "bound",
        "bound_exact",
        "gap",
        "evaluations",
        "best_restart",
        "best_measure",
        "best_p",
    ]);
    for r in reports {
        t.push(vec![
            r.class.kind().to_string(),
            real(r.class.alpha_f64()),
            rational_string(r.class.alpha()),
            r.functional.to_string(),
            real(r.best_magnitude),
            real(r.bound),
            r.bound_exact.clone().unwrap_or_default(),
            real(r.gap),
            r.evaluations.to_string(),
            r.best_restart.to_string(),
            measure_string(&r.best_measure),
            coeffs_string(&r.best_p),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::parse_rational;

    fn class(kind: ClassKind, a: &str) -> ClassSpec {
        ClassSpec::new(kind, parse_rational(a).unwrap()).unwrap()
    }

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 49.0 / 540.0, -2.5e-17] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec!["x,y".into(), "1/2".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1/2\n");
    }

    #[test]
    fn text_table_aligns_columns() {
        let mut t = Table::new(vec!["name", "v"]);
        t.push(vec!["long-name".into(), "1".into()]);
        assert_eq!(t.to_text(), "name       v\nlong-name  1\n");
    }

    #[test]
    fn starlike_order_zero_rows() {
        let rows = bound_rows(&class(ClassKind::Starlike, "0"));
        assert_eq!(rows[0].bound_exact.as_deref(), Some("1"));
        assert_eq!(rows[1].functional, "j2");
        assert!(rows.iter().any(|r| r.kind == "reference" && r.bound_exact.as_deref() == Some("16")));
    }

    #[test]
    fn harmonic_minus_half_rows() {
        let rows = bound_rows(&class(ClassKind::HarmonicM, "-1/2"));
        let exact: Vec<_> = rows.iter().filter_map(|r| r.bound_exact.as_deref()).collect();
        assert_eq!(exact, ["97/320", "1/20"]); // 291/960 in lowest terms
    }
}
