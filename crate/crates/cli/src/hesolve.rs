//! Source description and report for the torus Hermite-Einstein solver.
//!
//! A source file lists Fourier modes with amplitudes:
//!
//! ```toml
//! n = 64
//! constant = 0.0
//!
//! [[modes]]
//! kx = 1
//! ky = 0
//! amplitude = 1.0
//! phase = 0.0    # source += amplitude · cos(2π(kx·x + ky·y) + phase)
//! ```

use serde::Deserialize;
use std::f64::consts::PI;

use stromcheck_core::hesolver::{degree_check, solve_he, GridField};

use crate::model::ModelError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub modes: Vec<ModeSpec>,
}

fn default_n() -> usize {
    64
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub kx: i64,
    pub ky: i64,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

pub struct HesolveOutcome {
    pub n: usize,
    pub mean: f64,
    pub residual: f64,
    pub max_abs: f64,
    pub solution: Vec<f64>,
}

impl SourceSpec {
    pub fn parse(src: &str) -> Result<Self, ModelError> {
        Ok(toml::from_str(src)?)
    }

    pub fn sample(&self) -> Result<GridField, stromcheck_core::Error> {
        let modes = self.modes.clone();
        let constant = self.constant;
        GridField::from_fn(self.n, |x, y| {
            let mut acc = constant;
            for m in &modes {
                acc += m.amplitude
                    * (2.0 * PI * (m.kx as f64 * x + m.ky as f64 * y) + m.phase).cos();
            }
            acc
        })
    }
}

pub fn run_hesolve(spec: &SourceSpec) -> Result<HesolveOutcome, stromcheck_core::Error> {
    let source = spec.sample()?;
    let mean = degree_check(&source);
    let (solution, residual) = solve_he(&source)?;
    Ok(HesolveOutcome {
        n: spec.n,
        mean,
        residual,
        max_abs: solution.norm_sup(),
        solution: solution.values().to_vec(),
    })
}

impl HesolveOutcome {
    /// Deterministic machine rendering matching the report conventions.
    pub fn to_machine(&self) -> String {
        let fmt = |x: f64| -> String {
            if x == 0.0 {
                "0.0000000000000000e0".into()
            } else {
                format!("{x:.16e}")
            }
        };
        let samples: Vec<String> = self.solution.iter().map(|&v| fmt(v)).collect();
        format!(
            "{{\"kind\":\"hesolve\",\"max_abs\":{},\"mean\":{},\"n\":{},\"residual\":{},\"schema_version\":\"1\",\"solution\":[{}]}}",
            fmt(self.max_abs),
            fmt(self.mean),
            self.n,
            fmt(self.residual),
            samples.join(",")
        )
    }

    pub fn to_text(&self) -> String {
        format!(
            "grid {0}x{0}: source mean {1:.3e}, solution max |f| {2:.8e}, residual {3:.3e}\n",
            self.n, self.mean, self.max_abs, self.residual
        )
    }
}
