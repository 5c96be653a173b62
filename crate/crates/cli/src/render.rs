use std::collections::BTreeSet;
use std::fmt::Write;

use arrcoh::covers::{E2State, E2Support};
use arrcoh::linalg::{format_rational, Coefficients, CohomologyReport, FieldTag, Rational};
use serde::Serialize;
use serde_json::Value;

/// Canonical JSON: keys sorted (the default `serde_json` map is ordered),
/// two-space indent, trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Prime-field scalars as integers in `[0, p)`, rationals as `"p/q"`.
pub fn scalar(field: FieldTag, x: &Rational) -> Value {
    match field {
        FieldTag::Prime(p) => {
            let r = field.reduce(x).expect("reduced weights");
            let n: u64 = r.numer().try_into().expect("below p");
            debug_assert!(n < p);
            Value::from(n)
        }
        FieldTag::Rational => Value::from(format_rational(x)),
    }
}

pub fn field_name(f: FieldTag) -> String {
    match f {
        FieldTag::Rational => "Q".into(),
        FieldTag::Prime(p) => format!("F{p}"),
    }
}

pub fn coeffs_name(c: Coefficients) -> String {
    match c {
        Coefficients::Integers => "Z".into(),
        Coefficients::Rational => "Q".into(),
        Coefficients::Prime { p } => format!("F{p}"),
    }
}

/// Left-aligned text table with a rule under the header.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    writeln!(out, "{}", line(&mut header.iter().copied())).unwrap();
    writeln!(out, "{}", widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  ")).unwrap();
    for row in rows {
        writeln!(out, "{}", line(&mut row.iter().map(String::as_str))).unwrap();
    }
    out
}

fn torsion_text(t: &[u64]) -> String {
    if t.is_empty() {
        "-".into()
    } else {
        t.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

/// One row per degree of the complex.
pub fn cohomology_table(r: &CohomologyReport) -> String {
    let rows: Vec<Vec<String>> =
        r.groups.iter().map(|g| vec![g.degree.to_string(), g.rank.to_string(), torsion_text(&g.torsion)]).collect();
    format!("coefficients: {}\n{}", coeffs_name(r.coeffs), table(&["degree", "rank", "torsion"], &rows))
}

/// The E2 page as a grid, `q` decreasing downwards and `p` increasing to the
/// right. Exact dimensions are printed as numbers, possibly nonzero entries
/// as `*`, everything else as `0`.
pub fn e2_grid(s: &E2Support) -> String {
    let ps: BTreeSet<i64> = s.entries.iter().map(|e| e.p).collect();
    let qs: BTreeSet<i64> = s.entries.iter().map(|e| e.q).collect();
    let (p0, p1) = (ps.first().copied().unwrap_or(0), ps.last().copied().unwrap_or(0));
    let (q0, q1) = (qs.first().copied().unwrap_or(0), qs.last().copied().unwrap_or(0));
    let mut header = vec!["q\\p".to_string()];
    header.extend((p0..=p1).map(|p| p.to_string()));
    let rows: Vec<Vec<String>> = (q0..=q1)
        .rev()
        .map(|q| {
            let mut row = vec![q.to_string()];
            row.extend((p0..=p1).map(|p| match s.state(p, q) {
                E2State::Zero => "0".to_string(),
                E2State::PossiblyNonzero => "*".to_string(),
                E2State::Dim(d) => d.to_string(),
            }));
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = table(&header, &rows);
    if let Some(b) = s.bound {
        writeln!(out, "abutment vanishes above total degree {b}").unwrap();
    }
    match &s.concentration {
        Some(c) => writeln!(out, "concentrated on p + q = {} ({})", c.line, c.justification).unwrap(),
        None if s.vanishing => writeln!(out, "no surviving entries: the abutment vanishes").unwrap(),
        None => writeln!(out, "no concentration claimed").unwrap(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use arrcoh::linalg::CohomologyGroup;

    #[test]
    fn empty_support_is_a_zero_grid() {
        let g = e2_grid(&E2Support::from_entries([], None));
        let lines: Vec<&str> = g.lines().collect();
        assert_eq!(lines[0], "q\\p  0");
        assert_eq!(lines[2], "0    0");
    }

    #[test]
    fn three_degree_report_has_three_rows() {
        let r = CohomologyReport {
            coeffs: Coefficients::Rational,
            start_degree: 0,
            groups: (0..3).map(|d| CohomologyGroup { degree: d, rank: usize::from(d == 2), torsion: vec![] }).collect(),
        };
        let t = cohomology_table(&r);
        assert_eq!(t.lines().filter(|l| l.starts_with(char::is_numeric)).count(), 3);
        assert!(t.ends_with("2       1     -\n"));
    }

    #[test]
    fn json_is_byte_stable() {
        let v = serde_json::json!({"b": 1, "a": {"z": "1/2", "y": [3, 2]}});
        let text = json_text(&v);
        assert_eq!(text, json_text(&serde_json::from_str(&text).unwrap()));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }

    #[test]
    fn prime_scalars_are_integers() {
        assert_eq!(scalar(FieldTag::Prime(7), &Rational::new((-1).into(), 2.into())), Value::from(3));
        assert_eq!(scalar(FieldTag::Rational, &Rational::new(2.into(), 4.into())), Value::from("1/2"));
    }
}
