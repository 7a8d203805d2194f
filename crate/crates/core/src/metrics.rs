//! Figures of merit: reflection, bands, Harrington's bound, load capacitance,
//! and frequency sweeps.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::analyze_at;
use crate::geometry::{build_model, ArrayDesign};
use crate::{Complex64, Error, Result};

/// Reported in place of `-inf` for a perfect match.
pub const S11_FLOOR_DB: f64 = -100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub gamma: Complex64,
    pub s11_db: f64,
    /// False when `Re(zin) <= 0`.
    pub passive: bool,
}

/// Reflection coefficient of `zin` against a real reference `z0`.
pub fn s11(zin: Complex64, z0: f64) -> Result<Reflection> {
    if !(z0 > 0.0) {
        return Err(Error::Domain(format!("reference impedance must be positive, got {z0}")));
    }
    let den = zin + z0;
    if den.norm() == 0.0 {
        return Err(Error::Domain("input impedance equals -Z0".into()));
    }
    let gamma = (zin - z0) / den;
    let mag = gamma.norm();
    let s11_db = if mag > 0.0 { (20.0 * mag.log10()).max(S11_FLOOR_DB) } else { S11_FLOOR_DB };
    Ok(Reflection { gamma, s11_db, passive: zin.re > 0.0 })
}

/// One frequency point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub frequency: f64,
    pub zin: Complex64,
    pub s11_db: f64,
    pub ar_boresight_db: f64,
    pub g_lhcp_db: f64,
    pub g_rhcp_db: f64,
    pub d_boresight_dbi: f64,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(frequency: f64, err: &Error) -> Self {
        Self {
            frequency,
            zin: Complex64::new(f64::NAN, f64::NAN),
            s11_db: f64::NAN,
            ar_boresight_db: f64::NAN,
            g_lhcp_db: f64::NAN,
            g_rhcp_db: f64::NAN,
            d_boresight_dbi: f64::NAN,
            ok: false,
            error: Some(err.to_string()),
        }
    }

    pub const CSV_HEADER: &'static str = "freq_hz,re_zin_ohm,im_zin_ohm,s11_db,ar_db,g_lhcp_db,g_rhcp_db,d_dbi,ok_flag";

    pub fn csv_row(&self) -> String {
        use crate::farfield::sig6;
        let vals = [
            self.frequency,
            self.zin.re,
            self.zin.im,
            self.s11_db,
            self.ar_boresight_db,
            self.g_lhcp_db,
            self.g_rhcp_db,
            self.d_boresight_dbi,
        ];
        let mut cells: Vec<String> = vals.iter().map(|v| sig6(*v)).collect();
        cells.push(if self.ok { "1".into() } else { "0".into() });
        cells.join(",")
    }
}

/// Solves the design at `n_points` evenly spaced frequencies. The wire mesh
/// is built once and reused at every point.
pub fn sweep(
    design: &ArrayDesign,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
    segments_per_dipole: usize,
    reference_impedance: f64,
) -> Result<Vec<SweepRecord>> {
    if !(f_start > 0.0) || !(f_stop > f_start) {
        return Err(Error::Domain(format!("need 0 < f_start < f_stop, got {f_start} .. {f_stop}")));
    }
    if n_points < 2 {
        return Err(Error::Domain(format!("a sweep needs at least 2 points, got {n_points}")));
    }
    let model = build_model(design, segments_per_dipole)?;
    let step = (f_stop - f_start) / (n_points - 1) as f64;
    let records = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let f = if i == n_points - 1 { f_stop } else { f_start + step * i as f64 };
            match analyze_at(design, &model, f, reference_impedance) {
                Ok(a) => SweepRecord {
                    frequency: f,
                    zin: a.boresight.zin,
                    s11_db: a.boresight.s11_db,
                    ar_boresight_db: a.boresight.ar_db,
                    g_lhcp_db: a.boresight.g_lhcp_db,
                    g_rhcp_db: a.boresight.g_rhcp_db,
                    d_boresight_dbi: a.d_boresight_dbi,
                    ok: true,
                    error: None,
                },
                Err(e) => SweepRecord::failed(f, &e),
            }
        })
        .collect();
    Ok(records)
}

/// A contiguous frequency range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    #[serde(rename = "f_low_hz")]
    pub f_low: f64,
    #[serde(rename = "f_high_hz")]
    pub f_high: f64,
    pub fractional: f64,
}

impl Band {
    pub fn new(f_low: f64, f_high: f64) -> Result<Self> {
        if !(f_low < f_high) || !(f_low > 0.0) {
            return Err(Error::Domain(format!("invalid band {f_low} .. {f_high}")));
        }
        Ok(Self { f_low, f_high, fractional: (f_high - f_low) / ((f_low + f_high) / 2.0) })
    }

    pub fn center(&self) -> f64 {
        (self.f_low + self.f_high) / 2.0
    }

    pub fn contains(&self, f: f64) -> bool {
        self.f_low <= f && f <= self.f_high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandKey {
    S11,
    Ar,
}

impl BandKey {
    fn value(self, r: &SweepRecord) -> Option<f64> {
        if !r.ok {
            return None;
        }
        let v = match self {
            BandKey::S11 => r.s11_db,
            BandKey::Ar => r.ar_boresight_db,
        };
        v.is_finite().then_some(v)
    }
}

/// Contiguous ranges where the keyed metric is at or below `threshold`.
///
/// Edges are placed by linear interpolation in dB between the bracketing
/// samples; a band touching either end of the sweep is cut there. Failed
/// records count as outside.
pub fn extract_band(records: &[SweepRecord], key: BandKey, threshold: f64) -> Result<Vec<Band>> {
    if records.len() < 2 {
        return Err(Error::Domain("band extraction needs at least 2 records".into()));
    }
    if !threshold.is_finite() {
        return Err(Error::Domain("threshold must be finite".into()));
    }
    let vals: Vec<Option<f64>> = records.iter().map(|r| key.value(r)).collect();
    let inside = |i: usize| vals[i].is_some_and(|v| v <= threshold);
    let crossing = |i: usize, j: usize| -> f64 {
        // i outside, j inside (or the reverse); both values present
        match (vals[i], vals[j]) {
            (Some(a), Some(b)) if a != b => {
                let t = (threshold - a) / (b - a);
                records[i].frequency + t * (records[j].frequency - records[i].frequency)
            }
            // a failed neighbour leaves no bracket; cut at the good sample
            _ => records[if inside(i) { i } else { j }].frequency,
        }
    };
    let mut bands = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..records.len() {
        match (inside(i), start) {
            (true, None) => {
                start = Some(if i == 0 { records[0].frequency } else { crossing(i - 1, i) });
            }
            (false, Some(lo)) => {
                let hi = crossing(i - 1, i);
                if hi > lo {
                    bands.push(Band::new(lo, hi)?);
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(lo) = start {
        let hi = records[records.len() - 1].frequency;
        if hi > lo {
            bands.push(Band::new(lo, hi)?);
        }
    }
    Ok(bands)
}

/// Pairwise intersection of two sorted, internally disjoint band lists.
pub fn common_band(a: &[Band], b: &[Band]) -> Vec<Band> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].f_low.max(b[j].f_low);
        let hi = a[i].f_high.min(b[j].f_high);
        if lo < hi {
            out.push(Band::new(lo, hi).expect("non-empty intersection"));
        }
        if a[i].f_high < b[j].f_high {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Harrington's normal-gain bound `(ka)^2 + 2 ka`, in dBi.
pub fn harrington_limit(ka: f64) -> Result<f64> {
    if !(ka > 0.0) || !ka.is_finite() {
        return Err(Error::Domain(format!("ka must be positive, got {ka}")));
    }
    Ok(10.0 * (ka * ka + 2.0 * ka).log10())
}

/// Capacitance with reactance `x_l` at `frequency`.
pub fn load_capacitance(x_l: f64, frequency: f64) -> Result<f64> {
    if !(x_l < 0.0) {
        return Err(Error::Domain(format!("load reactance {x_l} ohm is not capacitive")));
    }
    if !(frequency > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {frequency}")));
    }
    Ok(1.0 / (2.0 * PI * frequency * x_l.abs()))
}

/// Band-report document written next to a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub key: String,
    /// `None` for an intersection of other reports.
    pub threshold_db: Option<f64>,
    pub bands: Vec<Band>,
}
