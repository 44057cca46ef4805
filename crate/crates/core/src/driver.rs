//! Time integration of a resolved run: initial condition, RK stepping with
//! optional adaptive filtering after every step, snapshots and the final
//! error and conservation report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::config::{ResolvedFilter, ResolvedRun};
use crate::dg::{cfl_timestep, CartesianMesh, DgOperator, LowStorageRk, SolutionField};
use crate::diagnostics::{conservation_error, conservation_error_exact, integrate, linf_error};
use crate::error::{Error, Result};
use crate::filter::{AdaptiveFilter, FieldFilter, MultiElementFilter};
use crate::kernel::DeltaKernel;
use crate::output::{compare_with_reference, extract_slice, load_reference_slice, slice_csv, write_vtk};
use crate::cases::PhysicsKind;
use crate::physics::{Euler, IdealMhd, PhysicsSystem, MAX_VARS};
use crate::reference::ReferenceElement;

/// State handed to a step observer after the optional initial filter (step 0) and
/// after every completed time step.
#[derive(Debug)]
pub struct StepInfo<'a> {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub field: &'a SolutionField,
    /// Blending weight per element; `None` when filtering is disabled.
    pub lambda: Option<&'a [f64]>,
    pub sigma: Option<&'a [f64]>,
}

/// Summary of a finished run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub case: String,
    pub degree: usize,
    pub nx: usize,
    pub ny: usize,
    pub time: f64,
    pub steps: usize,
    /// Nodal maximum error per variable against the exact solution.
    pub linf: BTreeMap<String, f64>,
    /// Conservation error per conserved variable, against the exact
    /// solution when one exists and against the initial integral otherwise.
    pub conservation: BTreeMap<String, f64>,
    pub min_density: f64,
    pub min_pressure: f64,
    /// Largest blending weight seen during the run.
    pub max_lambda: f64,
    /// Largest fraction of elements with a non-zero weight in any step.
    pub max_filtered_fraction: f64,
    /// Maximum deviation of each configured slice from its reference profile.
    pub slice_deviation: BTreeMap<String, f64>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn density_linf(&self) -> Option<f64> {
        self.linf.get("rho").copied()
    }

    pub fn density_conservation(&self) -> Option<f64> {
        self.conservation.get("rho").copied()
    }
}

/// Result of [`run`]: summary, final field and final blending weights.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub field: SolutionField,
    pub lambda: Option<Vec<f64>>,
}

pub fn run(config: &ResolvedRun) -> Result<RunOutcome> {
    run_observed(config, &mut |_| {})
}

/// Like [`run`], calling `observer` after the optional initial filter and every step.
pub fn run_observed(config: &ResolvedRun, observer: &mut dyn FnMut(&StepInfo)) -> Result<RunOutcome> {
    match config.case.physics {
        PhysicsKind::Euler => Runner::new(config, Euler::new(config.case.gamma))?.run(observer),
        PhysicsKind::Mhd => Runner::new(config, IdealMhd::new(config.case.gamma, config.glm))?.run(observer),
    }
}

/// Builds the filter pipeline for a mesh and field layout.
pub fn build_adaptive_filter(
    filter: &ResolvedFilter,
    reference: &ReferenceElement,
    mesh: CartesianMesh,
    num_vars: usize,
    boundaries: crate::dg::Boundaries,
) -> Result<AdaptiveFilter> {
    let kernel = DeltaKernel::build(filter.m, filter.k)?.with_epsilon(filter.epsilon)?;
    let element_filter = MultiElementFilter::build(reference, kernel)?;
    let field_filter = FieldFilter::new(element_filter, mesh, reference.nodes(), num_vars, boundaries)?;
    AdaptiveFilter::new(field_filter, filter.settings, mesh.num_elements())
}

struct Runner<'c, P: PhysicsSystem> {
    config: &'c ResolvedRun,
    physics: P,
    field: SolutionField,
    operator: DgOperator,
    filter: Option<AdaptiveFilter>,
    output_dir: Option<PathBuf>,
    files: Vec<PathBuf>,
}

impl<'c, P: PhysicsSystem> Runner<'c, P> {
    fn new(config: &'c ResolvedRun, physics: P) -> Result<Self> {
        let case = &config.case;
        let mesh = CartesianMesh::new(case.x_bounds, case.y_bounds, config.nx, config.ny)?;
        let reference = Arc::new(ReferenceElement::new(config.degree)?);
        let nv = case.num_vars();
        let field = SolutionField::from_fn(mesh, Arc::clone(&reference), nv, |x, y, out| {
            case.initial_conservative(x, y, out)
        });
        let operator = DgOperator::new(&field, case.boundaries.clone(), config.flux)?;
        let filter = config
            .filter
            .as_ref()
            .map(|f| build_adaptive_filter(f, &reference, mesh, nv, case.boundaries.clone()))
            .transpose()?;
        let output_dir = config.output.directory.clone();
        if let Some(dir) = &output_dir {
            fs::create_dir_all(dir)?;
        }
        Ok(Self { config, physics, field, operator, filter, output_dir, files: Vec::new() })
    }

    fn run(mut self, observer: &mut dyn FnMut(&StepInfo)) -> Result<RunOutcome> {
        let config = self.config;
        let nv = self.field.num_vars();
        let filter_ic = config.filter.as_ref().is_some_and(|f| f.filter_initial_condition);
        let initial_totals: Vec<f64> = (0..nv).map(|q| integrate(&self.field, q)).collect();
        let num_elements = self.field.mesh().num_elements() as f64;
        let mut max_lambda = 0.0_f64;
        let mut max_fraction = 0.0_f64;
        let mut track = |filter: &Option<AdaptiveFilter>| {
            if let Some(f) = filter {
                let active = f.lambda().iter().filter(|&&l| l > 0.0).count() as f64;
                max_fraction = max_fraction.max(active / num_elements);
                max_lambda = f.lambda().iter().fold(max_lambda, |a, &l| a.max(l));
            }
        };

        let mut t = 0.0;
        let mut step = 0;
        let wrap = |e: Error, time: f64, step: usize| {
            if e.is_numerical() {
                Error::Run { time, step, source: Box::new(e) }
            } else {
                e
            }
        };
        if let (Some(f), true) = (&mut self.filter, filter_ic) {
            f.apply(&self.physics, self.field.data_mut(), 0.0).map_err(|e| wrap(e, 0.0, 0))?;
        }
        track(&self.filter);
        self.observe(observer, step, t, 0.0);

        let interval = config.output.snapshot_interval.filter(|&s| s > 0.0);
        let mut snapshot_index = 0;
        if interval.is_some() {
            self.snapshot(snapshot_index, t)?;
            snapshot_index += 1;
        }
        let mut next_snapshot = interval.unwrap_or(f64::INFINITY);

        let mesh = *self.field.mesh();
        let elem_len = self.field.element_len();
        let mut rk = LowStorageRk::new(self.field.data().len());
        while t < config.t_end {
            if let Some(limit) = config.max_steps {
                if step >= limit {
                    return Err(Error::StepLimit { limit, time: t });
                }
            }
            self.physics.prepare_step(self.field.data());
            let mut dt = cfl_timestep(&self.physics, self.field.data(), &mesh, config.degree, config.cfl)
                .map_err(|e| wrap(e, t, step))?;
            let stop = config.t_end.min(next_snapshot);
            let last = t + dt >= stop;
            if last {
                dt = stop - t;
            }
            let physics = &self.physics;
            let operator = &mut self.operator;
            rk.step(self.field.data_mut(), t, dt, elem_len, |u, time, du| operator.rhs(physics, u, time, du))
                .map_err(|e| wrap(e, t, step))?;
            self.physics.post_step(self.field.data_mut(), dt);
            t = if last { stop } else { t + dt };
            step += 1;
            if let Some(f) = &mut self.filter {
                f.apply(&self.physics, self.field.data_mut(), t).map_err(|e| wrap(e, t, step))?;
            }
            if let Some(pos) = self.field.data().iter().position(|v| !v.is_finite()) {
                return Err(wrap(Error::NonFinite { stage: 5, element: pos / elem_len }, t, step));
            }
            track(&self.filter);
            self.observe(observer, step, t, dt);
            log::debug!("step {step}: t = {t:.6e}, dt = {dt:.3e}");
            if t >= next_snapshot {
                if t < config.t_end {
                    self.snapshot(snapshot_index, t)?;
                    snapshot_index += 1;
                }
                next_snapshot += interval.unwrap_or(f64::INFINITY);
            }
        }

        let mut summary = RunSummary {
            case: config.case.name.clone(),
            degree: config.degree,
            nx: config.nx,
            ny: config.ny,
            time: t,
            steps: step,
            max_lambda,
            max_filtered_fraction: max_fraction,
            ..Default::default()
        };
        self.report(&mut summary, &initial_totals, t)?;
        self.write_final(&mut summary, t)?;
        summary.files = std::mem::take(&mut self.files);
        log::info!("{} finished: t = {t:.6}, {step} steps", summary.case);
        let lambda = self.filter.as_ref().map(|f| f.lambda().to_vec());
        Ok(RunOutcome { summary, field: self.field, lambda })
    }

    fn observe(&self, observer: &mut dyn FnMut(&StepInfo), step: usize, time: f64, dt: f64) {
        observer(&StepInfo {
            step,
            time,
            dt,
            field: &self.field,
            lambda: self.filter.as_ref().map(|f| f.lambda()),
            sigma: self.filter.as_ref().map(|f| f.sigma()),
        });
    }

    fn report(&self, summary: &mut RunSummary, initial_totals: &[f64], t: f64) -> Result<()> {
        let names = self.physics.var_names();
        if let Some(exact) = &self.config.case.exact {
            for (q, name) in names.iter().enumerate() {
                summary.linf.insert(name.to_string(), linf_error(&self.field, exact.as_ref(), t, q));
                if self.physics.is_conserved(q) {
                    let e = conservation_error_exact(&self.field, exact.as_ref(), t, q)?;
                    summary.conservation.insert(name.to_string(), e);
                }
            }
        } else {
            for (q, name) in names.iter().enumerate().filter(|(q, _)| self.physics.is_conserved(*q)) {
                let e = conservation_error(initial_totals[q], &self.field, q);
                summary.conservation.insert(name.to_string(), e);
            }
        }
        let (mut min_rho, mut min_p) = (f64::INFINITY, f64::INFINITY);
        for u in self.field.data().chunks_exact(self.field.num_vars()) {
            min_rho = min_rho.min(self.physics.density(u));
            min_p = min_p.min(self.physics.pressure(u));
        }
        summary.min_density = min_rho;
        summary.min_pressure = min_p;
        Ok(())
    }

    fn snapshot(&mut self, index: usize, t: f64) -> Result<()> {
        let Some(dir) = &self.output_dir else { return Ok(()) };
        if !self.config.output.vtk {
            return Ok(());
        }
        let path = dir.join(format!("{}_{index:04}.vtk", self.config.case.name));
        self.write_snapshot(&path, t)?;
        self.files.push(path);
        Ok(())
    }

    fn write_snapshot(&self, path: &Path, t: f64) -> Result<()> {
        let title = format!("case={} N={} t={t:?}", self.config.case.name, self.config.degree);
        let lambda = self.filter.as_ref().map(|f| f.lambda());
        write_vtk(path, &self.field, &self.physics, lambda, &title)
    }

    fn write_final(&mut self, summary: &mut RunSummary, t: f64) -> Result<()> {
        let output = &self.config.output;
        let name = &self.config.case.name;
        let mut files = Vec::new();
        for (k, spec) in output.slices.iter().enumerate() {
            let slice = extract_slice(&self.field, &self.physics, spec.kind, spec.y, &spec.variable, output.samples)?;
            let label = format!("slice{k}_{}", spec.variable);
            if let Some(reference) = &spec.reference {
                let profile = load_reference_slice(reference)?;
                let use_x = matches!(spec.kind, crate::config::SliceKind::Horizontal);
                summary.slice_deviation.insert(label.clone(), compare_with_reference(&slice, &profile, use_x));
            }
            if let Some(dir) = &self.output_dir {
                let path = dir.join(format!("{name}_{label}.csv"));
                fs::write(&path, slice_csv(&slice, &spec.variable))?;
                files.push(path);
            }
        }
        if let Some(dir) = self.output_dir.clone() {
            if output.vtk {
                let path = dir.join(format!("{name}_final.vtk"));
                self.write_snapshot(&path, t)?;
                files.push(path);
            }
            let path = dir.join(format!("{name}_summary.toml"));
            let mut s = summary.clone();
            s.files.clear();
            s.min_density = finite_or_zero(s.min_density);
            s.min_pressure = finite_or_zero(s.min_pressure);
            let text = toml::to_string(&s).map_err(|e| Error::config(format!("cannot serialize summary: {e}")))?;
            fs::write(&path, text)?;
            files.push(path);
        }
        self.files.extend(files);
        Ok(())
    }
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Evaluates the initial condition of `config` in conservative variables at
/// `(x, y)` (used by tests and bindings).
pub fn initial_state(config: &ResolvedRun, x: f64, y: f64) -> Vec<f64> {
    let mut out = [0.0; MAX_VARS];
    let nv = config.case.num_vars();
    config.case.initial_conservative(x, y, &mut out[..nv]);
    out[..nv].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::filter::{filter_field_2d, FilterMode};

    fn resolved(text: &str) -> ResolvedRun {
        RunConfig::from_toml_str(text, &[]).unwrap().resolve().unwrap()
    }

    #[test]
    fn zero_end_time_returns_initial_condition() {
        let cfg = resolved("case = 'explosion'\ndegree = 3\nnx = 4\nny = 4\nt_end = 0.0\nfilter.enabled = false\n");
        let out = run(&cfg).unwrap();
        assert_eq!(out.summary.steps, 0);
        let x = out.field.node_position(5, 1, 2);
        assert_eq!(out.field.node(5, 1, 2), initial_state(&cfg, x.0, x.1).as_slice());
    }

    #[test]
    fn always_on_at_zero_time_returns_filtered_initial_condition() {
        let cfg = resolved(
            "case = 'explosion-m3'\ndegree = 6\nnx = 4\nny = 4\nt_end = 0.0\nfilter.mode = 'always-on'\nfilter.initial_condition = true\n",
        );
        let out = run(&cfg).unwrap();
        let f = cfg.filter.unwrap();
        assert_eq!(f.settings.mode, FilterMode::AlwaysOn);
        let mesh = CartesianMesh::new(cfg.case.x_bounds, cfg.case.y_bounds, 4, 4).unwrap();
        let re = Arc::new(ReferenceElement::new(6).unwrap());
        let ic = SolutionField::from_fn(mesh, Arc::clone(&re), 4, |x, y, o| cfg.case.initial_conservative(x, y, o));
        let kernel = DeltaKernel::build(f.m, f.k).unwrap().with_epsilon(f.epsilon).unwrap();
        let mef = MultiElementFilter::build(&re, kernel).unwrap();
        let expected = filter_field_2d(&mef, &ic, &cfg.case.boundaries, 0.0).unwrap();
        let diff = expected.data().iter().zip(out.field.data()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(diff < 1e-13, "{diff}");
        assert!(out.lambda.unwrap().iter().all(|&l| l == 1.0));
    }

    #[test]
    fn short_explosion_run_conserves_and_writes_output() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            "case = 'explosion'\ndegree = 3\nnx = 6\nny = 6\nt_end = 0.01\n\
             filter.enabled = false\n\
             [output]\ndirectory = '{}'\nsnapshot_interval = 0.005\n\
             [[output.slices]]\nkind = 'diagonal'\n\
             [[output.slices]]\nkind = 'horizontal'\ny = 0.0\nvariable = 'p'\n",
            dir.path().display()
        );
        let cfg = resolved(&text);
        let mut times = Vec::new();
        let out = run_observed(&cfg, &mut |s| times.push(s.time)).unwrap();
        assert_eq!(out.summary.time, 0.01);
        assert_eq!(*times.last().unwrap(), 0.01);
        assert!(times.contains(&0.005));
        assert!(out.summary.min_density > 0.0 && out.summary.min_pressure > 0.0);
        // Without filtering, only the small tails carried by the neighbour
        // coupling of every RK stage have reached the outflow boundaries.
        let cons = out.summary.density_conservation().unwrap();
        assert!(cons < 1e-6, "{cons}");
        let names: Vec<String> =
            out.summary.files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
        for expected in [
            "explosion_0000.vtk",
            "explosion_0001.vtk",
            "explosion_final.vtk",
            "explosion_slice0_rho.csv",
            "explosion_slice1_p.csv",
            "explosion_summary.toml",
        ] {
            assert!(names.iter().any(|n| n == expected), "{expected} missing from {names:?}");
        }
        let csv = fs::read_to_string(dir.path().join("explosion_slice0_rho.csv")).unwrap();
        assert_eq!(csv.lines().count(), 513);
    }

    #[test]
    fn step_limit_is_a_numerical_failure() {
        let cfg = resolved("case = 'convergence'\ndegree = 2\nnx = 2\nny = 2\nt_end = 1.0\nmax_steps = 3\n");
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, Error::StepLimit { limit: 3, .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn convergence_case_reports_exact_errors() {
        let cfg = resolved("case = 'convergence'\ndegree = 7\nnx = 2\nny = 2\nt_end = 0.1\n");
        let out = run(&cfg).unwrap();
        assert!(out.summary.density_linf().unwrap() < 1e-2);
        assert!(out.summary.density_conservation().unwrap() < 1e-12);
        assert_eq!(out.summary.linf.len(), 4);
    }
}
