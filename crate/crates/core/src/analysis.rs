//! Single-frequency analysis shared by the CLI, sweeps and the optimizer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::em::{solve_design, SolveResult};
use crate::farfield::{axial_ratio, build_pattern, realized_gain, PatternGrid, RadiationSource, Sense};
use crate::geometry::{build_model, min_enclosing_sphere, ArrayDesign, WireModel};
use crate::metrics::{harrington_limit, load_capacitance, s11};
use crate::{db10, Result};

/// Port and +z quantities of one solve; needs no pattern grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boresight {
    pub zin: Complex64,
    pub gamma_mag: f64,
    pub s11_db: f64,
    pub g_lhcp_db: f64,
    pub g_rhcp_db: f64,
    pub ar_db: f64,
}

/// Reflection and partial realized gains toward `+z`.
pub fn boresight(model: &WireModel, result: &SolveResult, reference_impedance: f64) -> Result<Boresight> {
    let refl = s11(result.input_impedance, reference_impedance)?;
    let sample = RadiationSource::new(model, result).field(0.0, 0.0);
    let gamma_mag = refl.gamma.norm();
    let gain = |sense| {
        let u = sample.sense_power(sense) / (2.0 * crate::ETA0);
        db10(realized_gain(u, gamma_mag, result.input_power))
    };
    Ok(Boresight {
        zin: result.input_impedance,
        gamma_mag,
        s11_db: refl.s11_db,
        g_lhcp_db: gain(Sense::Lhcp),
        g_rhcp_db: gain(Sense::Rhcp),
        ar_db: axial_ratio(&sample).db,
    })
}

/// Boresight figures plus the full pattern at one frequency.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub boresight: Boresight,
    pub d_boresight_dbi: f64,
    pub pattern: PatternGrid,
    pub solve: SolveResult,
}

/// Solves `design` on `model` at `frequency` and samples its pattern.
pub fn analyze_at(
    design: &ArrayDesign,
    model: &WireModel,
    frequency: f64,
    reference_impedance: f64,
) -> Result<PointAnalysis> {
    let solve = solve_design(design, model, frequency)?;
    let boresight = boresight(model, &solve, reference_impedance)?;
    let pattern = build_pattern(model, &solve, frequency, reference_impedance)?;
    let d_boresight_dbi = pattern.directivity_dbi(0.0, 0.0);
    Ok(PointAnalysis { boresight, d_boresight_dbi, pattern, solve })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceOut {
    pub re: f64,
    pub im: f64,
}

/// Report written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub zin: ImpedanceOut,
    pub s11_db: f64,
    pub ar_boresight_db: f64,
    pub g_lhcp_db: f64,
    pub g_rhcp_db: f64,
    pub d_dbi: f64,
    pub ka: f64,
    pub harrington_dbi: f64,
    /// `None` for inductive or zero loads.
    pub load_capacitance_pf: Option<f64>,
}

/// Full analysis of a design at its design frequency.
pub fn analyze(design: &ArrayDesign, segments_per_dipole: usize, reference_impedance: f64) -> Result<(Report, PointAnalysis)> {
    let model = build_model(design, segments_per_dipole)?;
    let point = analyze_at(design, &model, design.frequency, reference_impedance)?;
    let sphere = min_enclosing_sphere(&model);
    let b = point.boresight;
    let report = Report {
        zin: ImpedanceOut { re: b.zin.re, im: b.zin.im },
        s11_db: b.s11_db,
        ar_boresight_db: b.ar_db,
        g_lhcp_db: b.g_lhcp_db,
        g_rhcp_db: b.g_rhcp_db,
        d_dbi: point.d_boresight_dbi,
        ka: sphere.ka,
        harrington_dbi: harrington_limit(sphere.ka)?,
        load_capacitance_pf: load_capacitance(design.load_reactance, design.frequency).ok().map(|c| c * 1e12),
    };
    Ok((report, point))
}
