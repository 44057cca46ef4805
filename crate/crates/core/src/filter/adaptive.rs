use serde::{Deserialize, Serialize};

use super::FieldFilter;
use crate::error::{Error, Result};
use crate::physics::PhysicsSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// No filtering.
    Off,
    /// Every element is replaced by its filtered solution.
    AlwaysOn,
    /// Convex blending driven by the shock indicator.
    #[default]
    Adaptive,
    /// Binary switch on the normalized indicator `eps_n / ((N+1) N_Q) > 10^sigma_max`.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorVariable {
    #[default]
    Density,
    Pressure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaFormula {
    /// `1/2 [1 + sin(pi (sigma - sigma_mid) / (sigma_max - sigma_min))]`.
    #[default]
    Ramp,
    /// `1/2 [1 + sin(pi (sigma - sigma_mid / (sigma_max - sigma_min)))]`,
    /// the literal grouping of the published formula, clamped to [0, 1].
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptiveFilterSettings {
    pub mode: FilterMode,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub indicator: IndicatorVariable,
    pub lambda_formula: LambdaFormula,
}

impl Default for AdaptiveFilterSettings {
    fn default() -> Self {
        Self {
            mode: FilterMode::Adaptive,
            sigma_min: -8.0,
            sigma_max: -5.0,
            indicator: IndicatorVariable::Density,
            lambda_formula: LambdaFormula::Ramp,
        }
    }
}

impl AdaptiveFilterSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_min.is_finite() && self.sigma_max.is_finite()) {
            return Err(Error::config("sigma_min and sigma_max must be finite"));
        }
        if self.sigma_min > self.sigma_max {
            return Err(Error::config(format!(
                "sigma_min = {} exceeds sigma_max = {}",
                self.sigma_min, self.sigma_max
            )));
        }
        Ok(())
    }
}

/// `(eps_n, sigma_n)` with `eps_n = max |u - u~|` over the element's
/// indicator values and `sigma_n = log10(eps_n)`; `eps_n = 0` gives `-inf`.
pub fn shock_indicator(values: &[f64], filtered: &[f64]) -> (f64, f64) {
    let eps = values.iter().zip(filtered).fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
    let sigma = if eps > 0.0 { eps.log10() } else { f64::NEG_INFINITY };
    (eps, sigma)
}

/// Blending weight `lambda` in [0, 1] for indicator `sigma`.
pub fn blend_factor(sigma: f64, settings: &AdaptiveFilterSettings) -> f64 {
    let (lo, hi) = (settings.sigma_min, settings.sigma_max);
    if sigma.is_nan() || sigma < lo {
        return 0.0;
    }
    if sigma > hi {
        return 1.0;
    }
    if hi == lo {
        // sigma == threshold: not above it
        return 0.0;
    }
    let mid = 0.5 * (hi + lo);
    let arg = match settings.lambda_formula {
        LambdaFormula::Ramp => std::f64::consts::PI * (sigma - mid) / (hi - lo),
        LambdaFormula::Printed => std::f64::consts::PI * (sigma - mid / (hi - lo)),
    };
    (0.5 * (1.0 + arg.sin())).clamp(0.0, 1.0)
}

/// `lambda u~ + (1 - lambda) u`, returned with `lambda`.
pub fn blend(u: &[f64], filtered: &[f64], sigma: f64, settings: &AdaptiveFilterSettings) -> (Vec<f64>, f64) {
    let lambda = blend_factor(sigma, settings);
    let out = u.iter().zip(filtered).map(|(a, b)| mix(*a, *b, lambda)).collect();
    (out, lambda)
}

#[inline]
fn mix(u: f64, filtered: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        u
    } else if lambda == 1.0 {
        filtered
    } else {
        lambda * filtered + (1.0 - lambda) * u
    }
}

/// `eps_n / ((N + 1) N_Q) > tol`, with `N_Q` the total number of elements.
pub fn normalized_threshold_check(eps_n: f64, degree: usize, num_elements: usize, tol: f64) -> bool {
    eps_n / ((degree + 1) as f64 * num_elements as f64) > tol
}

/// Field filter plus per-element indicator and blending.
#[derive(Debug, Clone)]
pub struct AdaptiveFilter {
    field_filter: FieldFilter,
    settings: AdaptiveFilterSettings,
    filtered: Vec<f64>,
    lambda: Vec<f64>,
    sigma: Vec<f64>,
}

impl AdaptiveFilter {
    pub fn new(field_filter: FieldFilter, settings: AdaptiveFilterSettings, num_elements: usize) -> Result<Self> {
        settings.validate()?;
        Ok(Self {
            field_filter,
            settings,
            filtered: Vec::new(),
            lambda: vec![0.0; num_elements],
            sigma: vec![f64::NEG_INFINITY; num_elements],
        })
    }

    pub fn settings(&self) -> &AdaptiveFilterSettings {
        &self.settings
    }

    pub fn field_filter(&self) -> &FieldFilter {
        &self.field_filter
    }

    /// Blending weight of every element from the last application.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Indicator `sigma_n` of every element from the last application.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Filters `data` in place according to the configured mode.
    pub fn apply<P: PhysicsSystem + ?Sized>(&mut self, physics: &P, data: &mut [f64], t: f64) -> Result<()> {
        if self.settings.mode == FilterMode::Off {
            self.lambda.fill(0.0);
            return Ok(());
        }
        self.filtered.resize(data.len(), 0.0);
        let mut filtered = std::mem::take(&mut self.filtered);
        self.field_filter.apply(data, t, &mut filtered)?;
        let num_elements = self.lambda.len();
        let elem_len = data.len() / num_elements;
        let nv = physics.num_vars();
        let np = self.field_filter.filter().num_nodes();
        let indicator = |s: &[f64]| match self.settings.indicator {
            IndicatorVariable::Density => physics.density(s),
            IndicatorVariable::Pressure => physics.pressure(s),
        };
        let mut a = Vec::with_capacity(elem_len / nv);
        let mut b = Vec::with_capacity(elem_len / nv);
        for n in 0..num_elements {
            let u = &mut data[n * elem_len..(n + 1) * elem_len];
            let uf = &filtered[n * elem_len..(n + 1) * elem_len];
            a.clear();
            b.clear();
            a.extend(u.chunks_exact(nv).map(indicator));
            b.extend(uf.chunks_exact(nv).map(indicator));
            let (eps_n, sigma_n) = shock_indicator(&a, &b);
            self.sigma[n] = sigma_n;
            let lambda = match self.settings.mode {
                FilterMode::AlwaysOn => 1.0,
                FilterMode::Adaptive => blend_factor(sigma_n, &self.settings),
                FilterMode::Threshold => {
                    let tol = 10f64.powf(self.settings.sigma_max);
                    if normalized_threshold_check(eps_n, np - 1, num_elements, tol) {
                        1.0
                    } else {
                        0.0
                    }
                }
                FilterMode::Off => 0.0,
            };
            self.lambda[n] = lambda;
            if lambda > 0.0 {
                u.iter_mut().zip(uf).for_each(|(x, y)| *x = mix(*x, *y, lambda));
            }
        }
        self.filtered = filtered;
        Ok(())
    }
}
