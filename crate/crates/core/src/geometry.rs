//! Wire model of the two-element crossed-dipole array.
//!
//! Each element is a pair of orthogonal centre-fed dipoles lying in a plane
//! normal to `z`. The driven element sits at `z = +d/2`, the parasitic one at
//! `z = -d/2`. Flat strips are replaced by round wires of equivalent radius.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C0};

pub type Point = Vector3<f64>;

/// Default number of segments per dipole.
pub const DEFAULT_SEGMENTS: usize = 20;

/// Free-space wavelength in meters.
pub fn wavelength(frequency: f64) -> Result<f64> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {frequency}")));
    }
    Ok(C0 / frequency)
}

/// Equivalent round-wire radius of a flat strip of width `width`.
pub fn strip_to_radius(width: f64) -> Result<f64> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Domain(format!("strip width must be positive, got {width}")));
    }
    Ok(width / 4.0)
}

/// The design vector of the array plus its design frequency.
///
/// Index 1 is the driven (upper) element, index 2 the parasitic (lower) one.
/// Lengths are tip-to-tip dipole lengths, widths are strip widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayDesign {
    pub lx1: f64,
    pub lx2: f64,
    pub ly1: f64,
    pub ly2: f64,
    pub wx1: f64,
    pub wx2: f64,
    pub wy1: f64,
    pub wy2: f64,
    pub spacing_d: f64,
    /// `X_L` of the parasitic load `Z_L = j X_L`.
    pub load_reactance: f64,
    pub frequency: f64,
}

impl ArrayDesign {
    /// Strip-optimized reference array at 3.5 GHz with spacing 0.15
    /// wavelength and `Z_L = -j74.96` ohm.
    pub fn reference() -> Self {
        let f = 3.5e9;
        Self {
            lx1: 35.21e-3,
            lx2: 43.83e-3,
            ly1: 40.17e-3,
            ly2: 44.64e-3,
            wx1: 2.95e-3,
            wx2: 4.14e-3,
            wy1: 3.30e-3,
            wy2: 3.29e-3,
            spacing_d: 0.15 * C0 / f,
            load_reactance: -74.96,
            frequency: f,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("lx1", self.lx1),
            ("lx2", self.lx2),
            ("ly1", self.ly1),
            ("ly2", self.ly2),
            ("wx1", self.wx1),
            ("wx2", self.wx2),
            ("wy1", self.wy1),
            ("wy2", self.wy2),
            ("spacing_d", self.spacing_d),
            ("frequency", self.frequency),
        ];
        for (name, v) in all {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !self.load_reactance.is_finite() {
            return Err(Error::Domain("load reactance must be finite".into()));
        }
        for (arm, l, w) in [
            ("x1", self.lx1, self.wx1),
            ("x2", self.lx2, self.wx2),
            ("y1", self.ly1, self.wy1),
            ("y2", self.ly2, self.wy2),
        ] {
            if w >= l {
                return Err(Error::Domain(format!("arm {arm}: width {w} must be below length {l}")));
            }
        }
        Ok(())
    }

    /// The design reflected through the `x = y` plane.
    pub fn mirrored(&self) -> Self {
        Self {
            lx1: self.ly1,
            ly1: self.lx1,
            lx2: self.ly2,
            ly2: self.lx2,
            wx1: self.wy1,
            wy1: self.wx1,
            wx2: self.wy2,
            wy2: self.wx2,
            ..*self
        }
    }

    /// Exchanges the driven and parasitic element dimensions.
    pub fn swapped_elements(&self) -> Self {
        Self {
            lx1: self.lx2,
            lx2: self.lx1,
            ly1: self.ly2,
            ly2: self.ly1,
            wx1: self.wx2,
            wx2: self.wx1,
            wy1: self.wy2,
            wy2: self.wy1,
            ..*self
        }
    }

    /// All dimensions multiplied by `s`, frequency divided by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            lx1: self.lx1 * s,
            lx2: self.lx2 * s,
            ly1: self.ly1 * s,
            ly2: self.ly2 * s,
            wx1: self.wx1 * s,
            wx2: self.wx2 * s,
            wy1: self.wy1 * s,
            wy2: self.wy2 * s,
            spacing_d: self.spacing_d * s,
            frequency: self.frequency / s,
            ..*self
        }
    }
}

/// A straight wire, optionally fed or loaded at its centre.
#[derive(Debug, Clone, PartialEq)]
pub struct Wire {
    pub start: Point,
    pub end: Point,
    pub radius: f64,
    pub has_center_port: bool,
    pub port_id: Option<PortId>,
}

impl Wire {
    pub fn new(start: Point, end: Point, radius: f64, port_id: Option<PortId>) -> Result<Self> {
        let length = (end - start).norm();
        if !(length > 0.0) {
            return Err(Error::Mesh("wire start and end coincide".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::Mesh(format!("wire radius must be positive, got {radius}")));
        }
        if radius >= 0.1 * length {
            return Err(Error::Mesh(format!(
                "wire radius {radius} is not small against its length {length}"
            )));
        }
        Ok(Self { start, end, radius, has_center_port: port_id.is_some(), port_id })
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// Centre ports of the four dipoles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortId {
    DrivenX,
    DrivenY,
    ParasiticX,
    ParasiticY,
}

impl fmt::Display for PortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PortId::DrivenX => "driven_x",
            PortId::DrivenY => "driven_y",
            PortId::ParasiticX => "parasitic_x",
            PortId::ParasiticY => "parasitic_y",
        })
    }
}

/// One straight piece of a wire.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
    pub tangent: Point,
    pub length: f64,
    pub radius: f64,
    pub wire: usize,
}

impl Segment {
    pub fn point_at(&self, s: f64) -> Point {
        self.start + self.tangent * (s * self.length)
    }
}

/// Which half of a triangle basis a segment carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    /// Amplitude rises from 0 at the segment start to 1 at its end.
    Rising,
    /// Amplitude falls from 1 at the segment start to 0 at its end.
    Falling,
}

impl Half {
    #[inline]
    pub fn shape(self, s: f64) -> f64 {
        match self {
            Half::Rising => s,
            Half::Falling => 1.0 - s,
        }
    }

    /// Sign of the shape derivative along the segment tangent.
    #[inline]
    pub fn slope_sign(self) -> f64 {
        match self {
            Half::Rising => 1.0,
            Half::Falling => -1.0,
        }
    }
}

/// Triangle basis function centred on an interior wire node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    pub halves: [(usize, Half); 2],
    pub node: Point,
    pub wire: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Port {
    pub id: PortId,
    pub basis: usize,
}

/// Segmented wires, their triangle bases, and port placement.
#[derive(Debug, Clone)]
pub struct WireModel {
    pub wires: Vec<Wire>,
    pub segments_per_dipole: usize,
    pub basis_count: usize,
    pub segments: Vec<Segment>,
    pub bases: Vec<Basis>,
    pub port_map: Vec<Port>,
    pub driven_port_ids: [PortId; 2],
    pub parasitic_port_ids: [PortId; 2],
    /// Design frequency, used for electrical-size metrics.
    pub frequency: f64,
}

impl WireModel {
    /// Segments an arbitrary set of wires. Every wire gets
    /// `segments_per_wire` equal segments and `segments_per_wire - 1` bases.
    pub fn from_wires(wires: Vec<Wire>, segments_per_wire: usize, frequency: f64) -> Result<Self> {
        if segments_per_wire < 8 || segments_per_wire % 2 != 0 {
            return Err(Error::Mesh(format!(
                "segments per dipole must be even and at least 8, got {segments_per_wire}"
            )));
        }
        if wires.is_empty() {
            return Err(Error::Mesh("model has no wires".into()));
        }
        let mut segments = Vec::with_capacity(wires.len() * segments_per_wire);
        let mut bases = Vec::with_capacity(wires.len() * (segments_per_wire - 1));
        let mut port_map = Vec::new();
        for (w, wire) in wires.iter().enumerate() {
            let len = wire.length();
            let seg_len = len / segments_per_wire as f64;
            if seg_len < 2.0 * wire.radius {
                return Err(Error::Mesh(format!(
                    "wire {w}: segment length {seg_len:.4e} m is below twice the radius {:.4e} m",
                    wire.radius
                )));
            }
            let tangent = (wire.end - wire.start) / len;
            let first = segments.len();
            for i in 0..segments_per_wire {
                let a = i as f64 / segments_per_wire as f64;
                let b = (i + 1) as f64 / segments_per_wire as f64;
                let start = wire.start + (wire.end - wire.start) * a;
                let end = wire.start + (wire.end - wire.start) * b;
                segments.push(Segment { start, end, tangent, length: seg_len, radius: wire.radius, wire: w });
            }
            for node in 1..segments_per_wire {
                if node == segments_per_wire / 2 {
                    if let Some(id) = wire.port_id {
                        port_map.push(Port { id, basis: bases.len() });
                    }
                }
                bases.push(Basis {
                    halves: [(first + node - 1, Half::Rising), (first + node, Half::Falling)],
                    node: segments[first + node].start,
                    wire: w,
                });
            }
        }
        let basis_count = bases.len();
        Ok(Self {
            wires,
            segments_per_dipole: segments_per_wire,
            basis_count,
            segments,
            bases,
            port_map,
            driven_port_ids: [PortId::DrivenX, PortId::DrivenY],
            parasitic_port_ids: [PortId::ParasiticX, PortId::ParasiticY],
            frequency,
        })
    }

    /// Basis index of a port's gap basis.
    pub fn port_basis(&self, id: PortId) -> Option<usize> {
        self.port_map.iter().find(|p| p.id == id).map(|p| p.basis)
    }

    /// Every wire endpoint, i.e. all arm tips.
    pub fn endpoints(&self) -> Vec<Point> {
        self.wires.iter().flat_map(|w| [w.start, w.end]).collect()
    }
}

/// Builds the four-wire model of a design.
///
/// Within each element the longer dipole sits at the element centre and the
/// shorter one is lifted along `+z` by twice the larger arm radius so the two
/// wires do not intersect. Ties put the x-dipole at the centre.
pub fn build_model(design: &ArrayDesign, segments_per_dipole: usize) -> Result<WireModel> {
    design.validate()?;
    if segments_per_dipole < 8 || segments_per_dipole % 2 != 0 {
        return Err(Error::Mesh(format!(
            "segments per dipole must be even and at least 8, got {segments_per_dipole}"
        )));
    }
    let half_d = design.spacing_d / 2.0;
    let mut wires = Vec::with_capacity(4);
    let elements = [
        (half_d, design.lx1, design.wx1, design.ly1, design.wy1, PortId::DrivenX, PortId::DrivenY),
        (-half_d, design.lx2, design.wx2, design.ly2, design.wy2, PortId::ParasiticX, PortId::ParasiticY),
    ];
    for (zc, lx, wx, ly, wy, px, py) in elements {
        let ax = strip_to_radius(wx)?;
        let ay = strip_to_radius(wy)?;
        let delta = 2.0 * ax.max(ay);
        let (zx, zy) = if ly > lx { (zc + delta, zc) } else { (zc, zc + delta) };
        wires.push(Wire::new(
            Point::new(-lx / 2.0, 0.0, zx),
            Point::new(lx / 2.0, 0.0, zx),
            ax,
            Some(px),
        )?);
        wires.push(Wire::new(
            Point::new(0.0, -ly / 2.0, zy),
            Point::new(0.0, ly / 2.0, zy),
            ay,
            Some(py),
        )?);
    }
    WireModel::from_wires(wires, segments_per_dipole, design.frequency)
}

/// Smallest sphere enclosing a model, with its electrical size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereMetric {
    pub center: [f64; 3],
    pub radius_a: f64,
    pub ka: f64,
}

/// A sphere and the points that determine it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
    /// Indices into the input point set lying on the boundary of the sphere
    /// that was selected.
    pub support: Vec<usize>,
}

/// Minimum enclosing sphere over all wire endpoints, with `ka` at the
/// model's design frequency.
pub fn min_enclosing_sphere(model: &WireModel) -> SphereMetric {
    let pts = model.endpoints();
    let s = smallest_enclosing_sphere(&pts).expect("model has at least one wire");
    let k = 2.0 * PI * model.frequency / C0;
    SphereMetric { center: [s.center.x, s.center.y, s.center.z], radius_a: s.radius, ka: k * s.radius }
}

/// Exact minimum enclosing sphere of a small point set.
///
/// The optimum is fixed by at most four boundary points, so every sphere
/// determined by a 1-, 2-, 3- or 4-point subset is tried and the smallest one
/// containing all points wins. Cost is `O(n^5)`; meant for tens of points.
pub fn smallest_enclosing_sphere(points: &[Point]) -> Option<Sphere> {
    if points.is_empty() {
        return None;
    }
    let n = points.len();
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let mut best: Option<Sphere> = None;
    let mut consider = |center: Point, radius: f64, support: Vec<usize>| {
        if best.as_ref().is_some_and(|b| radius >= b.radius) {
            return;
        }
        if points.iter().all(|p| (p - center).norm() <= radius + tol) {
            best = Some(Sphere { center, radius, support });
        }
    };
    for i in 0..n {
        consider(points[i], 0.0, vec![i]);
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = (points[i] + points[j]) / 2.0;
            consider(c, (points[i] - c).norm(), vec![i, j]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(c) = circumcenter3(&points[i], &points[j], &points[k]) {
                    consider(c, (points[i] - c).norm(), vec![i, j, k]);
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if let Some(c) = circumcenter4(&points[i], &points[j], &points[k], &points[l]) {
                        consider(c, (points[i] - c).norm(), vec![i, j, k, l]);
                    }
                }
            }
        }
    }
    best
}

/// Centre of the circle through three points, `None` when collinear.
fn circumcenter3(a: &Point, b: &Point, c: &Point) -> Option<Point> {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(&ac);
    let n2 = n.norm_squared();
    if n2 <= 1e-24 * ab.norm_squared() * ac.norm_squared() {
        return None;
    }
    let offset = (n.cross(&ab) * ac.norm_squared() + ac.cross(&n) * ab.norm_squared()) / (2.0 * n2);
    Some(a + offset)
}

/// Centre of the sphere through four points, `None` when coplanar.
fn circumcenter4(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let rows = [b - a, c - a, d - a];
    let m = Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
    let scale = rows.iter().map(|r| r.norm()).product::<f64>();
    if m.determinant().abs() <= 1e-12 * scale {
        return None;
    }
    let rhs = Vector3::new(rows[0].norm_squared(), rows[1].norm_squared(), rows[2].norm_squared()) / 2.0;
    m.lu().solve(&rhs).map(|x| a + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_radius_is_quarter_width() {
        assert!((strip_to_radius(2.95e-3).unwrap() - 0.7375e-3).abs() < 1e-15);
        assert!((strip_to_radius(4.14e-3).unwrap() - 1.035e-3).abs() < 1e-15);
        assert!(matches!(strip_to_radius(0.0), Err(Error::Domain(_))));
        assert!(strip_to_radius(-1.0).is_err());
    }

    #[test]
    fn wavelength_values() {
        assert!((wavelength(3.5e9).unwrap() - 85.655e-3).abs() < 1e-6);
        assert!((wavelength(1e9).unwrap() - 299.79e-3).abs() < 1e-5);
        assert!((0.15 * wavelength(3.5e9).unwrap() - 12.848e-3).abs() < 1e-6);
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-3.0).is_err());
    }

    #[test]
    fn reference_model_structure() {
        let m = build_model(&ArrayDesign::reference(), 20).unwrap();
        assert_eq!(m.wires.len(), 4);
        assert_eq!(m.basis_count, 76);
        assert_eq!(m.port_map.len(), 4);
        assert_eq!(m.segments.len(), 80);
        let mut b: Vec<_> = m.port_map.iter().map(|p| p.basis).collect();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 4);
        // gap basis sits at the centre node of its wire
        for p in &m.port_map {
            let basis = &m.bases[p.basis];
            let w = &m.wires[basis.wire];
            assert!((basis.node - (w.start + w.end) / 2.0).norm() < 1e-15);
        }
        for id in m.driven_port_ids {
            assert!(!m.parasitic_port_ids.contains(&id));
        }
    }

    #[test]
    fn element_centres_on_axis() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        // the longer arm of each element sits at the element centre
        assert_eq!(m.wires[1].start.z, d.spacing_d / 2.0);
        assert_eq!(m.wires[3].start.z, -d.spacing_d / 2.0);
        let delta1 = 2.0 * strip_to_radius(d.wx1.max(d.wy1)).unwrap();
        assert!((m.wires[0].start.z - (d.spacing_d / 2.0 + delta1)).abs() < 1e-15);
        for w in &m.wires {
            let c = (w.start + w.end) / 2.0;
            assert_eq!(c.x, 0.0);
            assert_eq!(c.y, 0.0);
        }
    }

    #[test]
    fn odd_or_small_segment_counts_rejected() {
        let d = ArrayDesign::reference();
        assert!(matches!(build_model(&d, 7), Err(Error::Mesh(_))));
        assert!(matches!(build_model(&d, 6), Err(Error::Mesh(_))));
    }

    #[test]
    fn coarse_segments_against_radius_rejected() {
        // 40 segments on the 43.83 mm arm gives 1.1 mm pieces against a
        // 1.035 mm radius.
        assert!(matches!(build_model(&ArrayDesign::reference(), 40), Err(Error::Mesh(_))));
    }

    #[test]
    fn invalid_designs_rejected() {
        let mut d = ArrayDesign::reference();
        d.wx1 = d.lx1;
        assert!(d.validate().is_err());
        let mut d = ArrayDesign::reference();
        d.spacing_d = 0.0;
        assert!(build_model(&d, 20).is_err());
        let mut d = ArrayDesign::reference();
        d.frequency = -1.0;
        assert!(d.validate().is_err());
    }

    #[test]
    fn mirrored_design_gives_mirrored_model() {
        let d = ArrayDesign::reference();
        let a = build_model(&d, 20).unwrap();
        let b = build_model(&d.mirrored(), 20).unwrap();
        let swap = |p: &Point| Point::new(p.y, p.x, p.z);
        // wire order is [x1, y1, x2, y2]; mirroring exchanges x and y wires
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(swap(&a.wires[i].start), b.wires[j].start);
            assert_eq!(swap(&a.wires[i].end), b.wires[j].end);
            assert_eq!(a.wires[i].radius, b.wires[j].radius);
        }
    }

    #[test]
    fn symmetric_design_is_symmetric_up_to_relabeling() {
        let mut d = ArrayDesign::reference();
        d.lx2 = d.lx1;
        d.ly1 = d.lx1;
        d.ly2 = d.lx1;
        d.wx2 = d.wx1;
        d.wy1 = d.wx1;
        d.wy2 = d.wx1;
        let m = build_model(&d, 20).unwrap();
        let swap = |p: &Point| Point::new(p.y, p.x, p.z);
        for (x, y) in [(0, 1), (2, 3)] {
            // same in-plane footprint after swapping axes, separated only
            // by the anti-intersection lift
            let (wx, wy) = (&m.wires[x], &m.wires[y]);
            assert_eq!(wx.radius, wy.radius);
            assert_eq!(wx.length(), wy.length());
            let lift = wy.start.z - wx.start.z;
            assert!((lift - 2.0 * wx.radius).abs() < 1e-15);
            let moved = swap(&wx.start) + Point::new(0.0, 0.0, lift);
            assert!((moved - wy.start).norm() < 1e-15);
        }
        // relabelled ports still cover the same gap bases
        let mut ports: Vec<_> = m.port_map.iter().map(|p| p.basis).collect();
        ports.sort_unstable();
        assert_eq!(ports, vec![9, 28, 47, 66]);
    }

    #[test]
    fn swapped_elements_exchange_roles() {
        let d = ArrayDesign::reference();
        let s = d.swapped_elements();
        assert_eq!((s.lx1, s.lx2, s.ly1, s.ly2), (d.lx2, d.lx1, d.ly2, d.ly1));
        assert_eq!((s.wx1, s.wx2, s.wy1, s.wy2), (d.wx2, d.wx1, d.wy2, d.wy1));
        assert_eq!(s.swapped_elements(), d);
    }

    #[test]
    fn sphere_trivial_cases() {
        let p = Point::new(1.0, 2.0, 3.0);
        let s = smallest_enclosing_sphere(&[p]).unwrap();
        assert_eq!(s.radius, 0.0);
        assert_eq!(s.center, p);
        let q = p + Point::new(0.0, 10e-3, 0.0);
        let s = smallest_enclosing_sphere(&[p, q]).unwrap();
        assert!((s.radius - 5e-3).abs() < 1e-15);
        assert!((s.center - (p + q) / 2.0).norm() < 1e-15);
        assert!(smallest_enclosing_sphere(&[]).is_none());
    }

    #[test]
    fn sphere_of_regular_tetrahedron() {
        let pts = [
            Point::new(1.0, 1.0, 1.0),
            Point::new(1.0, -1.0, -1.0),
            Point::new(-1.0, 1.0, -1.0),
            Point::new(-1.0, -1.0, 1.0),
        ];
        let s = smallest_enclosing_sphere(&pts).unwrap();
        assert!((s.radius - 3f64.sqrt()).abs() < 1e-12);
        assert!(s.center.norm() < 1e-12);
        assert_eq!(s.support.len(), 4);
    }

    #[test]
    fn equilateral_triangle_uses_circumcircle() {
        let pts = [
            Point::new(1.0, 0.0, 0.0),
            Point::new(-0.5, 3f64.sqrt() / 2.0, 0.0),
            Point::new(-0.5, -(3f64.sqrt()) / 2.0, 0.0),
        ];
        let s = smallest_enclosing_sphere(&pts).unwrap();
        assert!((s.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_electrical_size() {
        let m = build_model(&ArrayDesign::reference(), 20).unwrap();
        let s = min_enclosing_sphere(&m);
        // every tip inside
        let c = Point::new(s.center[0], s.center[1], s.center[2]);
        for p in m.endpoints() {
            assert!((p - c).norm() <= s.radius_a + 1e-12);
        }
        let k = 2.0 * PI * 3.5e9 / C0;
        assert!((s.ka - k * s.radius_a).abs() < 1e-12);
    }
}
