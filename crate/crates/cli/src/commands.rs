use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use directfem::assembly::write_cell_errors_csv;
use directfem::mesh::{collapse_short_edges, export_mesh, import_mesh, Mesh, MeshStats};

use crate::args::{ConvergenceArgs, GenArgs, MeshCommand, SolveArgs};
use crate::study::{config_err, norm_names, run_level, validate, LevelResult, LevelMesh};
use crate::table::{csv_table, markdown_table, render};

fn stats_table(rows: &[(&str, &MeshStats)]) -> String {
    let mut t = vec![["mesh", "cells", "edges", "vertices", "h_max", "sigma_min", "sigma_max", "sigma_avg"]
        .map(String::from)
        .to_vec()];
    for (name, s) in rows {
        t.push(vec![
            name.to_string(),
            s.n_cells.to_string(),
            s.n_edges.to_string(),
            s.n_vertices.to_string(),
            format!("{:.4e}", s.h_max),
            format!("{:.4e}", s.sigma_min),
            format!("{:.4}", s.sigma_max),
            format!("{:.4}", s.sigma_avg),
        ]);
    }
    render(&t)
}

fn census(m: &Mesh<f64>) -> String {
    m.ngon_census()
        .iter()
        .map(|(n, c)| format!("{n}-gons: {c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn mesh(cmd: MeshCommand, out: &mut impl Write) -> Result<()> {
    match cmd {
        MeshCommand::Gen(GenArgs { source, n, out: path }) => {
            let m = crate::study::generate(&source, n)?;
            export_mesh(&m, &path).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "wrote {} ({} cells; {})", path.display(), m.num_cells(), census(&m))?;
            write!(out, "{}", stats_table(&[("generated", &m.stats())]))?;
        }
        MeshCommand::Audit { mesh, out: json } => {
            let m: Mesh<f64> = import_mesh(&mesh)?;
            let s = m.stats();
            writeln!(out, "{}", census(&m))?;
            write!(out, "{}", stats_table(&[(&mesh.display().to_string(), &s)]))?;
            if let Some(p) = json {
                fs::write(&p, serde_json::to_string_pretty(&s)? + "\n")?;
            }
        }
        MeshCommand::Collapse { mesh, rel_tol, out: path } => {
            if !(rel_tol > 0.0 && rel_tol < 1.0) {
                return Err(config_err(format!("--rel-tol must lie in (0, 1), got {rel_tol}")));
            }
            let m: Mesh<f64> = import_mesh(&mesh)?;
            let c = collapse_short_edges(&m, rel_tol)?;
            export_mesh(&c, &path)?;
            let removed = m.num_vertices() - c.num_vertices();
            writeln!(out, "collapsed {removed} short edge(s); wrote {}", path.display())?;
            write!(out, "{}", stats_table(&[("before", &m.stats()), ("after", &c.stats())]))?;
        }
    }
    Ok(())
}

pub fn solve(args: SolveArgs, out: &mut impl Write) -> Result<()> {
    validate(&args.problem)?;
    let level_mesh = match &args.mesh {
        Some(p) => LevelMesh::File(p.clone()),
        None => LevelMesh::Generated { source: args.source.clone(), n: args.n },
    };
    let (mesh, level) = run_level(&args.problem, &level_mesh)?;
    let names = norm_names(args.problem.method);
    let mut rows = vec![vec!["norm".to_string(), "error".into()]];
    for (n, e) in names.iter().zip(&level.errors) {
        rows.push(vec![n.to_string(), format!("{e:.6e}")]);
    }
    writeln!(out, "cells {}, dofs {}, h {:.4e}", level.stats.n_cells, level.dofs, level.stats.h_max)?;
    write!(out, "{}", render(&rows))?;
    if let Some(p) = &args.dump_element_errors {
        write_cell_errors_csv(&mesh, &level.cell_errors, p)?;
    }
    if let Some(p) = &args.out {
        fs::write(p, csv_table(std::slice::from_ref(&level), names)?)?;
    }
    Ok(())
}

fn timing_table(levels: &[LevelResult]) -> String {
    let mut rows = vec![["n", "mesh_s", "solve_s", "errors_s"].map(String::from).to_vec()];
    for l in levels {
        rows.push(vec![
            l.label.clone(),
            format!("{:.3}", l.mesh_time.as_secs_f64()),
            format!("{:.3}", l.solve_time.as_secs_f64()),
            format!("{:.3}", l.error_time.as_secs_f64()),
        ]);
    }
    render(&rows)
}

pub fn convergence(args: ConvergenceArgs, out: &mut impl Write) -> Result<()> {
    validate(&args.problem)?;
    let meshes: Vec<LevelMesh> = if args.mesh.is_empty() {
        if args.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("--levels must be strictly increasing"));
        }
        args.levels
            .iter()
            .map(|&n| LevelMesh::Generated { source: args.source.clone(), n })
            .collect()
    } else {
        args.mesh.iter().cloned().map(LevelMesh::File).collect()
    };
    if meshes.len() < 2 {
        return Err(config_err("a convergence study needs at least two levels"));
    }
    let mut levels = Vec::new();
    for s in &meshes {
        let (_, l) = run_level(&args.problem, s)?;
        log::info!("level {} done", l.label);
        levels.push(l);
    }
    let names = norm_names(args.problem.method);
    write!(out, "{}", markdown_table(&levels, names))?;
    writeln!(out)?;
    write!(out, "{}", timing_table(&levels))?;
    if let Some(p) = &args.out {
        fs::write(p, csv_table(&levels, names)?)?;
    }
    Ok(())
}
