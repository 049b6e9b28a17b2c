use std::collections::BTreeMap;
use std::io::{self, Write};

use seqfam::float_check::FloatReport;
use seqfam::oeis::{Axis, CrossCheck};
use seqfam::{IdentityCheck, IdentityId, SequenceWindow, SweepReport};
use serde::Serialize;

use crate::Format;

const SHOWN_FAILURES: usize = 20;

fn json(value: &impl Serialize, out: &mut impl Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Label column left-aligned, the rest right-aligned, with a rule under the
/// header and a bar after the label column.
fn grid(header: &[String], rows: &[Vec<String>], out: &mut impl Write) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        let mut s = format!("{:<w$} |", cells[0], w = widths[0]);
        for (cell, w) in cells[1..].iter().zip(&widths[1..]) {
            s.push_str(&format!(" {cell:>w$}"));
        }
        s
    };
    writeln!(out, "{}", line(header))?;
    let rule_len = widths[1..].iter().map(|w| w + 1).sum::<usize>();
    writeln!(out, "{}-+{}", "-".repeat(widths[0]), "-".repeat(rule_len))?;
    for row in rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

pub fn table(w: &SequenceWindow, format: Format, out: &mut impl Write) -> io::Result<()> {
    let header: Vec<String> = std::iter::once("n\\m".to_owned())
        .chain(w.m_range.iter().map(|m| m.to_string()))
        .collect();
    let rows: Vec<Vec<String>> = w
        .n_range
        .iter()
        .zip(&w.values)
        .map(|(n, vals)| std::iter::once(n.to_string()).chain(vals.iter().map(ToString::to_string)).collect())
        .collect();
    match format {
        Format::Json => json(w, out),
        Format::Csv => {
            for row in std::iter::once(&header).chain(&rows) {
                writeln!(out, "{}", row.join(","))?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "X(n, m) for {}", w.family)?;
            grid(&header, &rows, out)
        }
    }
}

fn failure_line(c: &IdentityCheck) -> String {
    format!(
        "FAIL {} {} {}: lhs={} rhs={} residual={}",
        c.identity, c.family, c.params, c.lhs, c.rhs, c.residual
    )
}

pub fn sweep(r: &SweepReport, format: Format, out: &mut impl Write) -> io::Result<()> {
    if format == Format::Json {
        return json(r, out);
    }
    let mut failed: BTreeMap<IdentityId, usize> = BTreeMap::new();
    for f in &r.failures {
        *failed.entry(f.identity).or_default() += 1;
    }
    let rows: Vec<Vec<String>> = r
        .checks_per_identity
        .iter()
        .map(|(id, &k)| {
            let bad = failed.get(id).copied().unwrap_or(0);
            vec![id.to_string(), k.to_string(), (k - bad).to_string(), bad.to_string()]
        })
        .collect();
    if format == Format::Csv {
        writeln!(out, "identity,checks,passed,failed")?;
        for row in &rows {
            writeln!(out, "{}", row.join(","))?;
        }
        writeln!(out, "total,{},{},{}", r.total, r.passed, r.failures.len())?;
        for f in r.failures.iter().take(SHOWN_FAILURES) {
            eprintln!("{}", failure_line(f));
        }
        return Ok(());
    }
    let families: Vec<String> = r.grid.families.iter().map(ToString::to_string).collect();
    writeln!(out, "families: {}", families.join(", "))?;
    let mut ranges = format!("n {}, m {}", r.grid.n, r.grid.m);
    if let Some(p) = r.grid.p {
        ranges.push_str(&format!(", p {p}"));
    }
    if let Some(q) = r.grid.q {
        ranges.push_str(&format!(", q {q}"));
    }
    writeln!(out, "ranges: {ranges}")?;
    writeln!(out)?;
    let header: Vec<String> = ["identity", "checks", "passed", "failed"].map(String::from).to_vec();
    grid(&header, &rows, out)?;
    writeln!(out)?;
    for f in r.failures.iter().take(SHOWN_FAILURES) {
        writeln!(out, "{}", failure_line(f))?;
    }
    if r.failures.len() > SHOWN_FAILURES {
        writeln!(out, "... {} more failures", r.failures.len() - SHOWN_FAILURES)?;
    }
    let verdict = if r.all_passed() { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{verdict}: {} checks, {} passed, {} failed in {:.0} ms",
        r.total,
        r.passed,
        r.failures.len(),
        r.wall_time_ms
    )
}

pub fn float(r: &FloatReport, format: Format, out: &mut impl Write) -> io::Result<()> {
    let fail_row = |f: &seqfam::FloatCompareResult| {
        vec![
            f.family.to_string(),
            f.n.to_string(),
            f.m.to_string(),
            f.exact.to_string(),
            format!("{:e}", f.float_product.re),
            format!("{:e}", f.float_product.im),
            format!("{:e}", f.relative_error),
        ]
    };
    match format {
        Format::Json => json(r, out),
        Format::Csv => {
            writeln!(out, "family,n,m,exact,re,im,relative_error")?;
            for f in &r.failures {
                writeln!(out, "{}", fail_row(f).join(","))?;
            }
            Ok(())
        }
        Format::Text => {
            let families: Vec<String> = r.families.iter().map(ToString::to_string).collect();
            writeln!(out, "families: {}", families.join(", "))?;
            writeln!(out, "ranges: n {}, m {}, tolerance {:e}", r.n, r.m, r.tolerance)?;
            writeln!(out, "max relative error: {:e}", r.max_relative_error)?;
            writeln!(out, "max imaginary part (scaled): {:e}", r.max_imaginary_ratio)?;
            if !r.failures.is_empty() {
                let header: Vec<String> = ["family", "n", "m", "exact", "re", "im", "rel err"]
                    .map(String::from)
                    .to_vec();
                let rows: Vec<Vec<String>> = r.failures.iter().take(SHOWN_FAILURES).map(fail_row).collect();
                grid(&header, &rows, out)?;
            }
            let verdict = if r.all_passed() { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{verdict}: {} products, {} within tolerance, {} outside in {:.0} ms",
                r.total,
                r.passed,
                r.failures.len(),
                r.wall_time_ms
            )
        }
    }
}

pub fn oeis(c: &CrossCheck, format: Format, out: &mut impl Write) -> io::Result<()> {
    let (axis, fixed, var) = match c.axis {
        Axis::Row(n) => ("row", n.to_string(), "m"),
        Axis::Column(m) => ("column", m.to_string(), "n"),
    };
    let terms: Vec<String> = c.matched.terms.iter().map(ToString::to_string).collect();
    match format {
        Format::Json => json(c, out),
        Format::Csv => {
            writeln!(out, "family,axis,fixed,range,source,ambiguous,verdict,ids")?;
            writeln!(
                out,
                "{},{axis},{fixed},{},{},{},{},{}",
                c.family,
                c.range,
                c.matched.source,
                c.matched.ambiguous,
                c.verdict,
                c.matched.ids.join(" ")
            )
        }
        Format::Text => {
            writeln!(out, "{} {}, {var} {}: {}", c.family, c.axis, c.range, terms.join(", "))?;
            writeln!(out, "source: {}", c.matched.source)?;
            if c.matched.ambiguous {
                writeln!(out, "ambiguous: constant sequence")?;
            }
            if c.verdict {
                writeln!(out, "matched: {}", c.matched.ids.join(", "))
            } else {
                writeln!(out, "no match")
            }
        }
    }
}
