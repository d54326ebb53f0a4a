use std::fmt::Write as _;

use directfem::assembly::convergence_rates;

use crate::study::LevelResult;

/// Rates between consecutive levels, one list per norm.
pub fn rates(levels: &[LevelResult], n_norms: usize) -> Vec<Vec<f64>> {
    let h: Vec<f64> = levels.iter().map(|l| l.stats.h_max).collect();
    (0..n_norms)
        .map(|k| {
            let e: Vec<f64> = levels.iter().map(|l| l.errors[k]).collect();
            convergence_rates(&e, &h).expect("one h per level")
        })
        .collect()
}

fn rate_cell(rates: &[Vec<f64>], k: usize, level: usize) -> String {
    if level == 0 {
        String::new()
    } else {
        let r = rates[k][level - 1];
        if r.is_finite() {
            format!("{r:.2}")
        } else {
            "-".into()
        }
    }
}

pub fn csv_table(levels: &[LevelResult], names: &[&str]) -> csv::Result<String> {
    let rates = rates(levels, names.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["level".to_string(), "cells".into(), "dofs".into(), "h".into()];
    for n in names {
        header.push(format!("{n}_error"));
        header.push(format!("{n}_rate"));
    }
    header.extend(["sigma_min", "sigma_max", "sigma_avg"].map(String::from));
    w.write_record(&header)?;
    for (i, l) in levels.iter().enumerate() {
        let mut row = vec![
            l.label.clone(),
            l.stats.n_cells.to_string(),
            l.dofs.to_string(),
            format!("{:.6e}", l.stats.h_max),
        ];
        for k in 0..names.len() {
            row.push(format!("{:.6e}", l.errors[k]));
            row.push(rate_cell(&rates, k, i));
        }
        for v in [l.stats.sigma_min, l.stats.sigma_max, l.stats.sigma_avg] {
            row.push(format!("{v:.6}"));
        }
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Aligned markdown table with an error and a rate column per norm.
pub fn markdown_table(levels: &[LevelResult], names: &[&str]) -> String {
    let rates = rates(levels, names.len());
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["n".to_string()];
    for n in names {
        header.push(format!("{n} error"));
        header.push("rate".into());
    }
    rows.push(header);
    for (i, l) in levels.iter().enumerate() {
        let mut row = vec![l.label.clone()];
        for k in 0..names.len() {
            row.push(format!("{:.3e}", l.errors[k]));
            row.push(rate_cell(&rates, k, i));
        }
        rows.push(row);
    }
    render(&rows)
}

pub fn render(rows: &[Vec<String>]) -> String {
    let cols = rows[0].len();
    let width: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0).max(3))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, r: &[String]| {
        out.push('|');
        for (c, cell) in r.iter().enumerate() {
            let _ = write!(out, " {:>w$} |", cell, w = width[c]);
        }
        out.push('\n');
    };
    line(&mut out, &rows[0]);
    out.push('|');
    for w in &width {
        let _ = write!(out, "{}:|", "-".repeat(w + 1));
    }
    out.push('\n');
    for r in &rows[1..] {
        line(&mut out, r);
    }
    out
}
