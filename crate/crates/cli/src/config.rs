//! Experiment configuration: strict JSON, unknown or repeated keys rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use toeplitz_core::flat::FlatSymbol;
use toeplitz_core::sphere::{SpherePoint, SphereSymbol};
use toeplitz_core::C64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_symbol: Option<FlatSymbolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_symbol: Option<SphereSymbolSpec>,
    /// Candidate well points on the sphere.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wells: Vec<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Truncation degree `D` of the Fock basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    /// Number of eigenvalues kept per `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<usize>,
    /// Window constant `C`: eigenvalues in `[0, C / N]` are matched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Geodesic radius of the caps used for Husimi masses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_radius: Option<f64>,
    /// Exponents `delta` of the shrinking caps `N^{-delta}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    /// Cap center for concentration profiles; defaults to the lowest well.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<PointSpec>,
    /// Expected limit of `N (lambda_{upper} - lambda_1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_gap: Option<f64>,
    /// Zero-based index of the upper eigenvalue in the gap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Tolerances::is_empty")]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "OutputPaths::is_empty")]
    pub output: OutputPaths,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatSymbolSpec {
    pub n: usize,
    pub terms: Vec<FlatTermSpec>,
}

/// `(re + i im) z^a zbar^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatTermSpec {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSymbolSpec {
    pub terms: Vec<SphereTermSpec>,
}

/// `c X^i Y^j Z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereTermSpec {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Optional overrides; unset entries take the defaults in [`Tolerances::effective`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balance: Option<f64>,
}

/// Tolerances with every default filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveTolerances {
    pub theorem_b: f64,
    pub gap: f64,
    pub weyl: f64,
    pub other_mass: f64,
    pub selected_mass: f64,
    pub balance: f64,
}

impl Tolerances {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn effective(&self) -> EffectiveTolerances {
        let sel = toeplitz_core::asymptotics::SelectionThresholds::default();
        EffectiveTolerances {
            theorem_b: self.theorem_b.unwrap_or(0.05),
            gap: self.gap.unwrap_or(0.15),
            weyl: self.weyl.unwrap_or(toeplitz_core::flat::WEYL_TOL),
            other_mass: self.other_mass.unwrap_or(sel.other_mass),
            selected_mass: self.selected_mass.unwrap_or(sel.selected_mass),
            balance: self.balance.unwrap_or(sel.balance),
        }
    }
}

/// Report file names, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

impl OutputPaths {
    fn is_empty(&self) -> bool {
        self.json.is_none() && self.csv.is_none()
    }
}

impl FlatSymbolSpec {
    pub fn build(&self) -> CliResult<FlatSymbol> {
        let terms = self
            .terms
            .iter()
            .map(|t| (t.a.clone(), t.b.clone(), C64::new(t.re, t.im)));
        Ok(FlatSymbol::from_terms(self.n, terms)?)
    }
}

impl SphereSymbolSpec {
    pub fn build(&self) -> CliResult<SphereSymbol> {
        Ok(SphereSymbol::from_terms(
            self.terms.iter().map(|t| ((t.i, t.j, t.k), t.c)),
        )?)
    }
}

impl PointSpec {
    pub fn build(&self) -> CliResult<SpherePoint> {
        Ok(SpherePoint::new(self.x, self.y, self.z)?)
    }
}

impl From<&SpherePoint> for PointSpec {
    fn from(p: &SpherePoint) -> Self {
        Self {
            x: p.x(),
            y: p.y(),
            z: p.z(),
        }
    }
}

impl ExperimentConfig {
    /// Checks everything that does not depend on the command.
    pub fn validate(&self) -> Result<(), String> {
        match (&self.flat_symbol, &self.sphere_symbol) {
            (Some(_), Some(_)) => return Err("give exactly one of flat_symbol and sphere_symbol, not both".into()),
            (None, None) => return Err("missing symbol: give flat_symbol or sphere_symbol".into()),
            _ => {}
        }
        if let Some(f) = &self.flat_symbol {
            f.build().map_err(|e| format!("flat_symbol: {e}"))?;
        }
        if let Some(s) = &self.sphere_symbol {
            s.build().map_err(|e| format!("sphere_symbol: {e}"))?;
        }
        for (i, w) in self.wells.iter().enumerate() {
            w.build().map_err(|e| format!("wells[{i}]: {e}"))?;
        }
        if let Some(c) = &self.center {
            c.build().map_err(|e| format!("center: {e}"))?;
        }
        if let Some(ns) = &self.n_list {
            if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
                return Err("n_list must be a nonempty, strictly increasing list of positive integers".into());
            }
        }
        if self.eigenvalues == Some(0) {
            return Err("eigenvalues must be at least 1".into());
        }
        if self.cutoff == Some(0) {
            return Err("cutoff must be at least 1".into());
        }
        if let Some(d) = self.deltas.iter().flatten().find(|d| !(0.0..0.5).contains(*d)) {
            return Err(format!("delta {d} outside [0, 1/2)"));
        }
        if let Some(r) = self.cap_radius {
            if !(r > 0.0 && r < std::f64::consts::PI) {
                return Err(format!("cap_radius {r} outside (0, pi)"));
            }
        }
        if let Some(c) = self.window {
            if !(c > 0.0 && c.is_finite()) {
                return Err(format!("window {c} must be positive"));
            }
        }
        if let Some(g) = self.predicted_gap {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(format!("predicted_gap {g} must be nonnegative"));
            }
        }
        if self.upper_index == Some(0) {
            return Err("upper_index must be at least 1".into());
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("theorem_b", t.theorem_b),
            ("gap", t.gap),
            ("balance", t.balance),
            ("selected_mass", t.selected_mass),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v < 1.0) {
                    return Err(format!("tolerances.{name} = {v} outside (0, 1)"));
                }
            }
        }
        for (name, v) in [("weyl", t.weyl), ("other_mass", t.other_mass)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(format!("tolerances.{name} = {v} must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json_string(self)
    }
}

/// Parses and validates a config held in memory; `origin` labels messages.
pub fn parse_config_str(text: &str, origin: &str) -> CliResult<ExperimentConfig> {
    let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    config.validate().map_err(|message| CliError::Config {
        path: origin.to_string(),
        message,
    })?;
    Ok(config)
}

pub fn parse_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text, &path.display().to_string())
}
