//! The smooth-solution convergence study: one unfiltered and three
//! always-on filtered sweeps of the convergence case at `N = 7`,
//! `CFL = 0.1`, `T = 0.4`.
//!
//! The published error levels are reproduced on the unit periodic box
//! ([`ConvergenceDomain::Unit`]), which is the default for the suite.

use crate::cases::ConvergenceDomain;
use crate::config::RunConfig;
use crate::diagnostics::{eoc_table, EocRow};
use crate::driver::run;
use crate::error::{Error, Result};
use crate::filter::FilterMode;

/// Filter of a convergence sweep: `(m, k)` and the bandwidth parameter `N_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFilter {
    pub m: usize,
    pub k: usize,
    pub n_d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSweep {
    /// Short identifier, e.g. `table3`.
    pub id: &'static str,
    pub title: &'static str,
    pub filter: Option<SweepFilter>,
    /// Elements per direction of every level.
    pub levels: &'static [usize],
}

impl ConvergenceSweep {
    /// Run configuration of one level.
    pub fn config(&self, elements: usize, domain: ConvergenceDomain) -> RunConfig {
        let mut c = RunConfig::for_case("convergence");
        c.convergence_domain = domain;
        c.degree = Some(7);
        c.cfl = Some(0.1);
        c.t_end = Some(0.4);
        c.nx = Some(elements);
        c.ny = Some(elements);
        match self.filter {
            None => c.filter.enabled = Some(false),
            Some(f) => {
                c.filter.enabled = Some(true);
                c.filter.m = Some(f.m);
                c.filter.k = Some(f.k);
                c.filter.n_d = Some(f.n_d);
                c.filter.mode = Some(FilterMode::AlwaysOn);
            }
        }
        c
    }

    /// Runs the levels in `levels` (a subset of, or replacement for, the
    /// default sequence) and returns the table rows with density errors.
    pub fn run_levels(&self, levels: &[usize], domain: ConvergenceDomain) -> Result<Vec<EocRow>> {
        let mut rows = Vec::with_capacity(levels.len());
        for &n in levels {
            let outcome = run(&self.config(n, domain).resolve()?)?;
            let s = &outcome.summary;
            let error = s.density_linf().ok_or_else(|| Error::config("convergence case lacks an exact solution"))?;
            let cons = s.density_conservation().unwrap_or(f64::NAN);
            log::info!("{} {n}^2: eps_inf = {error:.3e}, eps_cons = {cons:.3e}", self.id);
            rows.push((n, error, cons));
        }
        eoc_table(&rows)
    }

    /// Default levels capped at `max_elements` per direction.
    pub fn levels_up_to(&self, max_elements: usize) -> Vec<usize> {
        self.levels.iter().copied().filter(|&n| n <= max_elements).collect()
    }
}

/// The four sweeps in publication order.
pub fn convergence_suite() -> [ConvergenceSweep; 4] {
    [
        ConvergenceSweep {
            id: "table1",
            title: "Euler convergence, N = 7, CFL = 0.1, T = 0.4, no filtering",
            filter: None,
            levels: &[1, 2, 4, 8, 16],
        },
        ConvergenceSweep {
            id: "table2",
            title: "Euler convergence, N = 7, CFL = 0.1, T = 0.4, filter (m,k) = (1,6), N_d = 0.8",
            filter: Some(SweepFilter { m: 1, k: 6, n_d: 0.8 }),
            levels: &[10, 20, 40, 80],
        },
        ConvergenceSweep {
            id: "table3",
            title: "Euler convergence, N = 7, CFL = 0.1, T = 0.4, filter (m,k) = (3,6), N_d = 2.5",
            filter: Some(SweepFilter { m: 3, k: 6, n_d: 2.5 }),
            levels: &[2, 4, 8, 16],
        },
        ConvergenceSweep {
            id: "table4",
            title: "Euler convergence, N = 7, CFL = 0.1, T = 0.4, filter (m,k) = (5,7), N_d = 4.5",
            filter: Some(SweepFilter { m: 5, k: 7, n_d: 4.5 }),
            levels: &[1, 2, 4, 8],
        },
    ]
}
