//! JSON design and optimizer configuration files.
//!
//! Quantities are SI. Lengths may instead be given in millimetres with an
//! `_mm` suffix and the frequency in GHz with `frequency_ghz`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{build_model, wavelength, ArrayDesign, DEFAULT_SEGMENTS};
use crate::{Error, Result};

pub const DEFAULT_REFERENCE_IMPEDANCE: f64 = 50.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    lx_m: Option<f64>,
    lx_mm: Option<f64>,
    ly_m: Option<f64>,
    ly_mm: Option<f64>,
    wx_m: Option<f64>,
    wx_mm: Option<f64>,
    wy_m: Option<f64>,
    wy_mm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    frequency_hz: Option<f64>,
    frequency_ghz: Option<f64>,
    spacing_m: Option<f64>,
    spacing_mm: Option<f64>,
    spacing_lambda: Option<f64>,
    driven: RawElement,
    parasitic: RawElement,
    load_reactance_ohm: f64,
    segments_per_dipole: Option<usize>,
    reference_impedance_ohm: Option<f64>,
}

fn one_of(path: &str, options: &[(&str, Option<f64>, f64)]) -> Result<f64> {
    let given: Vec<_> = options.iter().filter(|(_, v, _)| v.is_some()).collect();
    match given.as_slice() {
        [(_, Some(v), scale)] => Ok(v * scale),
        [] => Err(Error::Config(format!(
            "{path}: missing, expected one of {}",
            options.iter().map(|o| o.0).collect::<Vec<_>>().join(", ")
        ))),
        _ => Err(Error::Config(format!(
            "{path}: give exactly one of {}",
            given.iter().map(|o| o.0).collect::<Vec<_>>().join(", ")
        ))),
    }
}

impl RawElement {
    fn resolve(&self, name: &str) -> Result<[f64; 4]> {
        let f = |key: &str, m: Option<f64>, mm: Option<f64>| {
            one_of(&format!("{name}.{key}"), &[(&format!("{key}_m"), m, 1.0), (&format!("{key}_mm"), mm, 1e-3)])
        };
        Ok([
            f("lx", self.lx_m, self.lx_mm)?,
            f("ly", self.ly_m, self.ly_mm)?,
            f("wx", self.wx_m, self.wx_mm)?,
            f("wy", self.wy_m, self.wy_mm)?,
        ])
    }
}

/// A validated design file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConfig {
    pub design: ArrayDesign,
    pub segments_per_dipole: usize,
    pub reference_impedance: f64,
}

impl DesignConfig {
    pub fn new(design: ArrayDesign) -> Self {
        Self { design, segments_per_dipole: DEFAULT_SEGMENTS, reference_impedance: DEFAULT_REFERENCE_IMPEDANCE }
    }

    /// Parses and validates a design document, including that it meshes.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let frequency = one_of("frequency", &[("frequency_hz", raw.frequency_hz, 1.0), ("frequency_ghz", raw.frequency_ghz, 1e9)])?;
        if !(frequency > 0.0) {
            return Err(Error::Config(format!("frequency: must be positive, got {frequency}")));
        }
        let lambda = wavelength(frequency)?;
        let spacing = one_of(
            "spacing",
            &[
                ("spacing_m", raw.spacing_m, 1.0),
                ("spacing_mm", raw.spacing_mm, 1e-3),
                ("spacing_lambda", raw.spacing_lambda, lambda),
            ],
        )?;
        let [lx1, ly1, wx1, wy1] = raw.driven.resolve("driven")?;
        let [lx2, ly2, wx2, wy2] = raw.parasitic.resolve("parasitic")?;
        let cfg = Self {
            design: ArrayDesign {
                lx1,
                lx2,
                ly1,
                ly2,
                wx1,
                wx2,
                wy1,
                wy2,
                spacing_d: spacing,
                load_reactance: raw.load_reactance_ohm,
                frequency,
            },
            segments_per_dipole: raw.segments_per_dipole.unwrap_or(DEFAULT_SEGMENTS),
            reference_impedance: raw.reference_impedance_ohm.unwrap_or(DEFAULT_REFERENCE_IMPEDANCE),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reference_impedance > 0.0) {
            return Err(Error::Config(format!(
                "reference_impedance_ohm: must be positive, got {}",
                self.reference_impedance
            )));
        }
        self.design.validate().map_err(|e| Error::Config(e.to_string()))?;
        build_model(&self.design, self.segments_per_dipole).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// The document in SI keys; parses back to the same design.
    pub fn to_document(&self) -> DesignDocument {
        let d = &self.design;
        DesignDocument {
            frequency_hz: d.frequency,
            spacing_m: d.spacing_d,
            driven: ElementDocument { lx_m: d.lx1, ly_m: d.ly1, wx_m: d.wx1, wy_m: d.wy1 },
            parasitic: ElementDocument { lx_m: d.lx2, ly_m: d.ly2, wx_m: d.wx2, wy_m: d.wy2 },
            load_reactance_ohm: d.load_reactance,
            segments_per_dipole: self.segments_per_dipole,
            reference_impedance_ohm: self.reference_impedance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementDocument {
    pub lx_m: f64,
    pub ly_m: f64,
    pub wx_m: f64,
    pub wy_m: f64,
}

/// Serialized form of [`DesignConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignDocument {
    pub frequency_hz: f64,
    pub spacing_m: f64,
    pub driven: ElementDocument,
    pub parasitic: ElementDocument,
    pub load_reactance_ohm: f64,
    pub segments_per_dipole: usize,
    pub reference_impedance_ohm: f64,
}

/// Optimizer settings file. Absent keys take the defaults of
/// [`crate::optimizer::GaConfig`] and a 3.5 GHz design frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaFile {
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub seed: Option<u64>,
    pub f0_hz: Option<f64>,
    pub search_spacing: Option<bool>,
}

impl GaFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}
