use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::Result;
use directfem::assembly::{
    mixed_errors, primal_errors, solve_mixed, solve_primal, ExactSolution, SolverOptions,
};
use directfem::mesh::{
    gen_hex_dominant_mesh, gen_perturbed_quad_mesh, gen_square_mesh, gen_trapezoid_mesh,
    import_mesh, Mesh, MeshStats,
};

use crate::args::{Exact, Family, MeshSource, Method, ProblemArgs};

/// Invalid user input; exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Clone, Debug)]
pub enum LevelMesh {
    Generated { source: MeshSource, n: usize },
    File(PathBuf),
}

impl LevelMesh {
    pub fn label(&self) -> String {
        match self {
            LevelMesh::Generated { n, .. } => n.to_string(),
            LevelMesh::File(p) => p.display().to_string(),
        }
    }

    pub fn build(&self) -> Result<Mesh<f64>> {
        match self {
            LevelMesh::Generated { source, n } => generate(source, *n),
            LevelMesh::File(p) => Ok(import_mesh(p)?),
        }
    }
}

pub fn generate(source: &MeshSource, n: usize) -> Result<Mesh<f64>> {
    Ok(match source.family {
        Family::Square => gen_square_mesh(n)?,
        Family::Trapezoid => gen_trapezoid_mesh(n)?,
        Family::PerturbedQuad => gen_perturbed_quad_mesh(n, source.noise, source.seed)?,
        Family::Hex => gen_hex_dominant_mesh(n)?,
    })
}

/// Flux and divergence orders `(r, s)` for the mixed methods.
pub fn mixed_orders(method: Method, r: usize) -> Option<(usize, usize)> {
    match method {
        Method::Primal => None,
        Method::MixedFull => Some((r, r)),
        Method::MixedReduced => Some((r, r.wrapping_sub(1))),
    }
}

pub fn validate(p: &ProblemArgs) -> Result<()> {
    match p.method {
        Method::Primal if p.r == 0 => Err(config_err("primal method needs r >= 1")),
        Method::MixedReduced if p.r == 0 => {
            Err(config_err("mixed-reduced needs r >= 1 (s = r - 1 >= 0)"))
        }
        _ => Ok(()),
    }
}

pub fn exact_solution(e: Exact) -> ExactSolution<f64> {
    match e {
        Exact::OneHump => ExactSolution::OneHump,
        Exact::FourHump => ExactSolution::FourHump,
        Exact::Zero => ExactSolution::Zero,
    }
}

/// Names of the reported norms for a method.
pub fn norm_names(method: Method) -> &'static [&'static str] {
    match method {
        Method::Primal => &["L2_p", "H1_p"],
        _ => &["L2_p", "L2_u", "L2_div"],
    }
}

#[derive(Clone, Debug)]
pub struct LevelResult {
    pub label: String,
    pub stats: MeshStats,
    pub dofs: usize,
    pub errors: Vec<f64>,
    pub cell_errors: Vec<f64>,
    pub mesh_time: Duration,
    pub solve_time: Duration,
    pub error_time: Duration,
}

/// Solves one level and measures the errors.
pub fn run_level(p: &ProblemArgs, level_mesh: &LevelMesh) -> Result<(Mesh<f64>, LevelResult)> {
    validate(p)?;
    let t0 = Instant::now();
    let mesh = level_mesh.build()?;
    let mesh_time = t0.elapsed();
    let ex = exact_solution(p.exact);
    let f = |x| ex.f(x);
    let g = |x| ex.p(x);
    let opts = SolverOptions::default();
    let t1 = Instant::now();
    let (dofs, errors, cell_errors, solve_time, error_time);
    match mixed_orders(p.method, p.r) {
        None => {
            let sol = solve_primal(&mesh, p.r, &f, Some(&g), p.quad_degree, &opts)?;
            solve_time = t1.elapsed();
            let t2 = Instant::now();
            let e = primal_errors(&mesh, &sol.assembly, &sol.coeffs, &ex, p.quad_degree.map(|q| q + 2))?;
            error_time = t2.elapsed();
            dofs = sol.assembly.dofmap.n_dofs;
            errors = vec![e.l2, e.h1_semi];
            cell_errors = e.cell_l2;
        }
        Some((r, s)) => {
            let sol = solve_mixed(&mesh, r, s, &f, Some(&g), p.quad_degree, &opts)?;
            solve_time = t1.elapsed();
            let t2 = Instant::now();
            let e = mixed_errors(&mesh, &sol.assembly, &sol.coeffs, &ex, p.quad_degree.map(|q| q + 2))?;
            error_time = t2.elapsed();
            dofs = sol.assembly.dofmap.n_dofs();
            errors = vec![e.l2_p, e.l2_u, e.l2_div];
            cell_errors = e.cell_l2;
        }
    }
    if let Some(bad) = errors.iter().find(|e| !e.is_finite()) {
        return Err(directfem::FemError::NonConvergence { iterations: 0, residual: *bad }.into());
    }
    let result = LevelResult {
        label: level_mesh.label(),
        stats: mesh.stats(),
        dofs,
        errors,
        cell_errors,
        mesh_time,
        solve_time,
        error_time,
    };
    Ok((mesh, result))
}
