//! Far-zone fields, circular decomposition, directivity and realized gain.
//!
//! Fields are normalized: the `exp(-jkr) / r` factor is removed, so
//! radiation intensity is `U = (|E_theta|^2 + |E_phi|^2) / (2 eta0)`.
//! Circular components use `E_R = (E_theta - j E_phi) / sqrt(2)` and
//! `E_L = (E_theta + j E_phi) / sqrt(2)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::{self, Write};

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em::{wavenumber, SolveResult};
use crate::geometry::WireModel;
use crate::quadrature::{gauss_legendre, UnitRule};
use crate::{db10, Complex64, Error, Result, ETA0, MU0};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Gauss–Legendre nodes in `cos(theta)`.
pub const THETA_NODES: usize = 64;
/// Uniform azimuth samples.
pub const PHI_NODES: usize = 128;
/// Axial ratio reported for linear polarization or a null field.
pub const AR_SATURATION_DB: f64 = 60.0;

const SEGMENT_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sense {
    Lhcp,
    Rhcp,
}

/// Field in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub theta: f64,
    pub phi: f64,
    pub e_theta: Complex64,
    pub e_phi: Complex64,
    pub e_rhcp: Complex64,
    pub e_lhcp: Complex64,
}

impl FieldSample {
    pub fn from_components(theta: f64, phi: f64, e_theta: Complex64, e_phi: Complex64) -> Self {
        Self {
            theta,
            phi,
            e_theta,
            e_phi,
            e_rhcp: (e_theta - J * e_phi) * FRAC_1_SQRT_2,
            e_lhcp: (e_theta + J * e_phi) * FRAC_1_SQRT_2,
        }
    }

    /// `|E_theta|^2 + |E_phi|^2`
    pub fn power(&self) -> f64 {
        self.e_theta.norm_sqr() + self.e_phi.norm_sqr()
    }

    pub fn sense_power(&self, sense: Sense) -> f64 {
        match sense {
            Sense::Lhcp => self.e_lhcp.norm_sqr(),
            Sense::Rhcp => self.e_rhcp.norm_sqr(),
        }
    }

    /// Radiation intensity in W/sr.
    pub fn intensity(&self) -> f64 {
        self.power() / (2.0 * ETA0)
    }
}

/// Piecewise-linear current on one straight segment.
#[derive(Debug, Clone, Copy)]
struct CurrentSegment {
    start: Vector3<f64>,
    tangent: Vector3<f64>,
    length: f64,
    i_start: Complex64,
    i_end: Complex64,
}

/// Solved currents in a form that can be radiated in any direction.
#[derive(Debug, Clone)]
pub struct RadiationSource {
    segments: Vec<CurrentSegment>,
    k: f64,
    omega: f64,
    rule: UnitRule,
}

impl RadiationSource {
    pub fn new(model: &WireModel, result: &SolveResult) -> Self {
        let mut segments: Vec<CurrentSegment> = model
            .segments
            .iter()
            .map(|s| CurrentSegment {
                start: s.start,
                tangent: s.tangent,
                length: s.length,
                i_start: Complex64::new(0.0, 0.0),
                i_end: Complex64::new(0.0, 0.0),
            })
            .collect();
        for (basis, &current) in model.bases.iter().zip(&result.currents) {
            let [(rise, _), (fall, _)] = basis.halves;
            segments[rise].i_end += current;
            segments[fall].i_start += current;
        }
        Self {
            segments,
            k: wavenumber(result.frequency),
            omega: 2.0 * PI * result.frequency,
            rule: UnitRule::new(SEGMENT_ORDER),
        }
    }

    /// `(E_theta, E_phi)` with the spherical-wave factor removed.
    pub fn field(&self, theta: f64, phi: f64) -> FieldSample {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let r_hat = Vector3::new(st * cp, st * sp, ct);
        let mut n = Vector3::<Complex64>::zeros();
        for seg in &self.segments {
            let mut acc = Complex64::new(0.0, 0.0);
            let phase0 = self.k * r_hat.dot(&seg.start);
            let dphase = self.k * r_hat.dot(&seg.tangent) * seg.length;
            for (&s, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                let i = seg.i_start * (1.0 - s) + seg.i_end * s;
                acc += i * Complex64::from_polar(w, phase0 + dphase * s);
            }
            acc *= seg.length;
            n += seg.tangent.map(|t| acc * t);
        }
        let theta_hat = Vector3::new(ct * cp, ct * sp, -st);
        let phi_hat = Vector3::new(-sp, cp, 0.0);
        let coef = -J * self.omega * MU0 / (4.0 * PI);
        let e_theta = coef * (n.x * theta_hat.x + n.y * theta_hat.y + n.z * theta_hat.z);
        let e_phi = coef * (n.x * phi_hat.x + n.y * phi_hat.y);
        FieldSample::from_components(theta, phi, e_theta, e_phi)
    }
}

/// Far field of solved currents in direction `(theta, phi)`.
pub fn radiate(model: &WireModel, result: &SolveResult, theta: f64, phi: f64) -> FieldSample {
    RadiationSource::new(model, result).field(theta, phi)
}

/// Far field sampled on a product grid, Gauss in `cos(theta)` and uniform in
/// `phi`, with the powers needed for gain normalization.
#[derive(Debug, Clone)]
pub struct PatternGrid {
    pub theta_nodes: Vec<f64>,
    /// Gauss weights in `cos(theta)`, aligned with `theta_nodes`.
    pub theta_weights: Vec<f64>,
    pub phi_nodes: Vec<f64>,
    /// Row-major, `theta` outer.
    pub samples: Vec<FieldSample>,
    pub p_rad: f64,
    pub p_in: f64,
    pub gamma_mag: f64,
    pub input_impedance: Complex64,
    pub reference_impedance: f64,
    pub frequency: f64,
    source: RadiationSource,
}

/// Samples the far field on the quadrature grid and integrates the
/// radiated power.
pub fn build_pattern(
    model: &WireModel,
    result: &SolveResult,
    frequency: f64,
    reference_impedance: f64,
) -> Result<PatternGrid> {
    if !(reference_impedance > 0.0) {
        return Err(Error::Domain(format!(
            "reference impedance must be positive, got {reference_impedance}"
        )));
    }
    let mut solved = result.clone();
    solved.frequency = frequency;
    let source = RadiationSource::new(model, &solved);
    let (u, w) = gauss_legendre(THETA_NODES);
    // descending cos(theta) gives ascending theta
    let theta_nodes: Vec<f64> = u.iter().rev().map(|c| c.acos()).collect();
    let theta_weights: Vec<f64> = w.iter().rev().copied().collect();
    let phi_nodes: Vec<f64> = (0..PHI_NODES).map(|j| 2.0 * PI * j as f64 / PHI_NODES as f64).collect();
    let samples: Vec<FieldSample> = theta_nodes
        .par_iter()
        .flat_map_iter(|&t| phi_nodes.iter().map(move |&p| (t, p)).collect::<Vec<_>>())
        .map(|(t, p)| source.field(t, p))
        .collect();
    let dphi = 2.0 * PI / PHI_NODES as f64;
    let mut p_rad = 0.0;
    for (i, wt) in theta_weights.iter().enumerate() {
        let row: f64 = samples[i * PHI_NODES..(i + 1) * PHI_NODES].iter().map(|s| s.intensity()).sum();
        p_rad += wt * dphi * row;
    }
    let z = result.input_impedance;
    let gamma_mag = ((z - reference_impedance) / (z + reference_impedance)).norm();
    Ok(PatternGrid {
        theta_nodes,
        theta_weights,
        phi_nodes,
        samples,
        p_rad,
        p_in: result.input_power,
        gamma_mag,
        input_impedance: z,
        reference_impedance,
        frequency,
        source,
    })
}

impl PatternGrid {
    /// Exact field in any direction, not restricted to grid nodes.
    pub fn field(&self, theta: f64, phi: f64) -> FieldSample {
        self.source.field(theta, phi)
    }

    /// Directivity (linear) of a sample.
    pub fn directivity_of(&self, sample: &FieldSample) -> f64 {
        4.0 * PI * sample.intensity() / self.p_rad
    }

    pub fn directivity(&self, theta: f64, phi: f64) -> f64 {
        self.directivity_of(&self.field(theta, phi))
    }

    pub fn directivity_dbi(&self, theta: f64, phi: f64) -> f64 {
        db10(self.directivity(theta, phi))
    }

    /// Peak directivity over the grid samples, linear.
    pub fn peak_directivity(&self) -> (f64, &FieldSample) {
        self.samples
            .iter()
            .map(|s| (self.directivity_of(s), s))
            .fold((f64::NEG_INFINITY, &self.samples[0]), |a, b| if b.0 > a.0 { b } else { a })
    }

    /// `(1/4 pi) * integral of D over the sphere`; one by construction up to
    /// rounding.
    pub fn mean_directivity(&self) -> f64 {
        let dphi = 2.0 * PI / PHI_NODES as f64;
        let mut acc = 0.0;
        for (i, wt) in self.theta_weights.iter().enumerate() {
            let row: f64 = self.samples[i * PHI_NODES..(i + 1) * PHI_NODES]
                .iter()
                .map(|s| self.directivity_of(s))
                .sum();
            acc += wt * dphi * row;
        }
        acc / (4.0 * PI)
    }

    /// Partial realized gain of a sample, linear.
    pub fn realized_gain_of(&self, sample: &FieldSample, sense: Sense) -> f64 {
        realized_gain(sample.sense_power(sense) / (2.0 * ETA0), self.gamma_mag, self.p_in)
    }

    /// Realized gain in both senses of a sample, linear.
    pub fn total_realized_gain_of(&self, sample: &FieldSample) -> f64 {
        realized_gain(sample.intensity(), self.gamma_mag, self.p_in)
    }

    /// `P_rad / P_in`; one for lossless wires up to discretization error.
    pub fn efficiency(&self) -> f64 {
        self.p_rad / self.p_in
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "theta_deg,phi_deg,e_theta_re,e_theta_im,e_phi_re,e_phi_im,d_dbi,g_lhcp_realized_db,g_rhcp_realized_db,ar_db"
        )?;
        for s in &self.samples {
            let row = [
                s.theta.to_degrees(),
                s.phi.to_degrees(),
                s.e_theta.re,
                s.e_theta.im,
                s.e_phi.re,
                s.e_phi.im,
                db10(self.directivity_of(s)),
                db10(self.realized_gain_of(s, Sense::Lhcp)),
                db10(self.realized_gain_of(s, Sense::Rhcp)),
                axial_ratio(s).db,
            ];
            let cells: Vec<String> = row.iter().map(|v| sig6(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// `(1 - |Gamma|^2) * 4 pi U / P_in`. Equal to `(1 - |Gamma|^2) * 4 pi U /
/// P_rad * (P_rad / P_in)`.
pub fn realized_gain(intensity: f64, gamma_mag: f64, p_in: f64) -> f64 {
    if !(p_in > 0.0) {
        return 0.0;
    }
    (1.0 - gamma_mag * gamma_mag) * 4.0 * PI * intensity / p_in
}

/// Partial realized gain in dB toward `(theta, phi)`, evaluated from the
/// currents directly rather than interpolated from the grid.
pub fn partial_realized_gain(grid: &PatternGrid, theta: f64, phi: f64, sense: Sense) -> f64 {
    db10(grid.realized_gain_of(&grid.field(theta, phi), sense))
}

/// Axial ratio of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialRatio {
    pub db: f64,
    /// True when the value was clamped to [`AR_SATURATION_DB`].
    pub saturated: bool,
    /// True when both circular components vanish.
    pub zero_field: bool,
}

pub fn axial_ratio(sample: &FieldSample) -> AxialRatio {
    let r = sample.e_rhcp.norm();
    let l = sample.e_lhcp.norm();
    let sum = r + l;
    if sum == 0.0 {
        return AxialRatio { db: AR_SATURATION_DB, saturated: true, zero_field: true };
    }
    let diff = (r - l).abs();
    let db = if diff == 0.0 { f64::INFINITY } else { 20.0 * (sum / diff).log10() };
    if db >= AR_SATURATION_DB {
        AxialRatio { db: AR_SATURATION_DB, saturated: true, zero_field: false }
    } else {
        AxialRatio { db, saturated: false, zero_field: false }
    }
}

/// Six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}
