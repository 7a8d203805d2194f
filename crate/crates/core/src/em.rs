//! Mixed-potential EFIE on thin wires.
//!
//! Triangle bases on interior nodes, Galerkin testing, and the reduced
//! kernel `G(R) = exp(-jkR) / (4 pi R)` with `R = sqrt(|r - r'|^2 + a^2)`.
//! Time convention `exp(+j omega t)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::geometry::{ArrayDesign, Basis, Half, Segment, WireModel};
use crate::quadrature::UnitRule;
use crate::{Complex64, Error, Result, C0, EPS0, MU0};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Gauss points per segment for well-separated segment pairs.
pub const FAR_ORDER: usize = 4;
/// Gauss points per segment for pairs inside overlapping or touching
/// basis supports.
pub const NEAR_ORDER: usize = 16;
/// Condition-number estimate above which a solve is refused.
pub const MAX_CONDITION: f64 = 1e12;
/// Relative residual a solve must reach.
pub const MAX_RESIDUAL: f64 = 1e-9;

/// Impedance system of a wire model at one frequency.
#[derive(Debug, Clone)]
pub struct MomSystem {
    pub z_matrix: DMatrix<Complex64>,
    pub excitation: DVector<Complex64>,
    pub segments: Vec<Segment>,
    pub bases: Vec<Basis>,
    pub frequency: f64,
}

impl MomSystem {
    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    /// `max |Z_mn - Z_nm| / max |Z_mn|`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.basis_count();
        let mut max_diff: f64 = 0.0;
        let mut max_abs: f64 = 0.0;
        for m in 0..n {
            for k in 0..n {
                max_diff = max_diff.max((self.z_matrix[(m, k)] - self.z_matrix[(k, m)]).norm());
                max_abs = max_abs.max(self.z_matrix[(m, k)].norm());
            }
        }
        max_diff / max_abs
    }
}

/// Feed and load attached to the gap bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortNetwork {
    pub driven_bases: [usize; 2],
    pub parasitic_bases: [usize; 2],
    pub source_voltage: Complex64,
    pub load_impedance: Complex64,
}

impl PortNetwork {
    /// Unit source on the driven pair and `Z_L = j X_L` across the
    /// parasitic pair.
    pub fn for_design(model: &WireModel, design: &ArrayDesign) -> Result<Self> {
        let find = |id| {
            model
                .port_basis(id)
                .ok_or_else(|| Error::Config(format!("model has no port {id}")))
        };
        Ok(Self {
            driven_bases: [find(model.driven_port_ids[0])?, find(model.driven_port_ids[1])?],
            parasitic_bases: [find(model.parasitic_port_ids[0])?, find(model.parasitic_port_ids[1])?],
            source_voltage: Complex64::new(1.0, 0.0),
            load_impedance: Complex64::new(0.0, design.load_reactance),
        })
    }

    fn validate(&self, n: usize) -> Result<()> {
        let all = [self.driven_bases[0], self.driven_bases[1], self.parasitic_bases[0], self.parasitic_bases[1]];
        if let Some(bad) = all.iter().find(|&&i| i >= n) {
            return Err(Error::Config(format!("port basis {bad} out of range for {n} bases")));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if all[i] == all[j] {
                    return Err(Error::Config(format!("port basis {} used twice", all[i])));
                }
            }
        }
        Ok(())
    }
}

/// Solved currents and the port quantities derived from them.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub currents: Vec<Complex64>,
    pub source_voltage: Complex64,
    pub driven_port_current: Complex64,
    /// `NaN` when the port current vanishes (zero source).
    pub input_impedance: Complex64,
    pub input_power: f64,
    pub load_current: Complex64,
    pub load_voltage: Complex64,
    pub frequency: f64,
}

/// Wavenumber at `frequency`.
pub fn wavenumber(frequency: f64) -> f64 {
    2.0 * PI * frequency / C0
}

/// Double integrals of the kernel over one pair of segments, in normalized
/// arc length `s, s' in [0, 1]`.
#[derive(Debug, Clone, Copy, Default)]
struct PairIntegrals {
    /// `int int G`
    scalar: Complex64,
    /// `int int h_a(s) h_b(s') G` for halves `a, b` in (rising, falling) order.
    shaped: [[Complex64; 2]; 2],
}

fn half_index(h: Half) -> usize {
    match h {
        Half::Rising => 0,
        Half::Falling => 1,
    }
}

fn is_near(p: &Segment, q: &Segment) -> bool {
    let mid_p = (p.start + p.end) / 2.0;
    let mid_q = (q.start + q.end) / 2.0;
    // On one wire this covers every segment pair of two bases whose
    // supports overlap or touch.
    (mid_p - mid_q).norm() < 1.5 * (p.length + q.length) + 1e-12 * (p.length + q.length)
}

fn pair_integrals(p: &Segment, q: &Segment, k: f64, near: &UnitRule, far: &UnitRule) -> PairIntegrals {
    let rule = if is_near(p, q) { near } else { far };
    let a2 = 0.5 * (p.radius * p.radius + q.radius * q.radius);
    let mut out = PairIntegrals::default();
    for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
        let r = p.point_at(s);
        let hs = [s, 1.0 - s];
        let mut inner = Complex64::new(0.0, 0.0);
        let mut inner_rise = Complex64::new(0.0, 0.0);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let rp = q.point_at(t);
            let big_r = ((r - rp).norm_squared() + a2).sqrt();
            let g = Complex64::from_polar(1.0 / (4.0 * PI * big_r), -k * big_r) * wt;
            inner += g;
            inner_rise += g * t;
        }
        let inner_fall = inner - inner_rise;
        out.scalar += inner * ws;
        for (a, h) in hs.iter().enumerate() {
            out.shaped[a][0] += inner_rise * (ws * h);
            out.shaped[a][1] += inner_fall * (ws * h);
        }
    }
    out
}

/// Fills the Galerkin impedance matrix of `model` at `frequency`.
///
/// `Z_mn = j w mu0 <f_m, G f_n> + <f_m', G f_n'> / (j w eps0)`, summed over
/// the two halves of each basis. Every entry is computed independently, so
/// the result does not depend on thread scheduling.
pub fn fill_matrix(model: &WireModel, frequency: f64) -> Result<MomSystem> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {frequency}")));
    }
    let k = wavenumber(frequency);
    let omega = 2.0 * PI * frequency;
    let near = UnitRule::new(NEAR_ORDER);
    let far = UnitRule::new(FAR_ORDER);
    let segs = &model.segments;
    let ns = segs.len();

    let pairs: Vec<PairIntegrals> = (0..ns * ns)
        .into_par_iter()
        .map(|idx| pair_integrals(&segs[idx / ns], &segs[idx % ns], k, &near, &far))
        .collect();

    let vector_coef = J * omega * MU0;
    let scalar_coef = 1.0 / (J * omega * EPS0);
    let n = model.basis_count;
    let bases = &model.bases;
    let entries: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (bm, bn) = (&bases[idx / n], &bases[idx % n]);
            let mut z = Complex64::new(0.0, 0.0);
            for &(p, hp) in &bm.halves {
                for &(q, hq) in &bn.halves {
                    let (sp, sq) = (&segs[p], &segs[q]);
                    let pi = &pairs[p * ns + q];
                    let dot = sp.tangent.dot(&sq.tangent);
                    z += vector_coef * (dot * sp.length * sq.length) * pi.shaped[half_index(hp)][half_index(hq)];
                    z += scalar_coef * (hp.slope_sign() * hq.slope_sign()) * pi.scalar;
                }
            }
            z
        })
        .collect();

    Ok(MomSystem {
        z_matrix: DMatrix::from_row_slice(n, n, &entries),
        excitation: DVector::zeros(n),
        segments: model.segments.clone(),
        bases: model.bases.clone(),
        frequency,
    })
}

/// Imposes the feed and the load.
///
/// The source voltage is impressed across both driven gaps (parallel feed)
/// and the load is a single impedance across both parasitic gaps, folded in
/// as `Z += Z_L c c^T` with `c` the indicator of the parasitic gap bases.
pub fn apply_ports(mut system: MomSystem, ports: &PortNetwork) -> Result<MomSystem> {
    ports.validate(system.basis_count())?;
    system.excitation.fill(Complex64::new(0.0, 0.0));
    for &i in &ports.driven_bases {
        system.excitation[i] = ports.source_voltage;
    }
    for &i in &ports.parasitic_bases {
        for &j in &ports.parasitic_bases {
            system.z_matrix[(i, j)] += ports.load_impedance;
        }
    }
    Ok(system)
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves a ported system for the basis currents.
pub fn solve(system: &MomSystem, ports: &PortNetwork) -> Result<SolveResult> {
    ports.validate(system.basis_count())?;
    let z = &system.z_matrix;
    let lu = z.clone().lu();
    let inv = lu
        .try_inverse()
        .ok_or_else(|| Error::Numerical("impedance matrix is singular".into()))?;
    let cond = one_norm(z) * one_norm(&inv);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::Numerical(format!(
            "impedance matrix is ill-conditioned (1-norm condition estimate {cond:.3e})"
        )));
    }
    let b = &system.excitation;
    let x = z
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Numerical("LU solve failed".into()))?;
    let b_norm = b.norm();
    if b_norm > 0.0 {
        let residual = (z * &x - b).norm() / b_norm;
        if !(residual < MAX_RESIDUAL) {
            return Err(Error::Numerical(format!("solve residual {residual:.3e} exceeds {MAX_RESIDUAL:.0e}")));
        }
    }
    let currents: Vec<Complex64> = x.iter().copied().collect();
    let driven_port_current = currents[ports.driven_bases[0]] + currents[ports.driven_bases[1]];
    let load_current = currents[ports.parasitic_bases[0]] + currents[ports.parasitic_bases[1]];
    let v0 = ports.source_voltage;
    let input_impedance = if driven_port_current.norm() > 0.0 {
        v0 / driven_port_current
    } else {
        Complex64::new(f64::NAN, f64::NAN)
    };
    let mut result = SolveResult {
        currents,
        source_voltage: v0,
        driven_port_current,
        input_impedance,
        input_power: 0.0,
        load_current,
        load_voltage: -ports.load_impedance * load_current,
        frequency: system.frequency,
    };
    result.input_power = input_power(&result);
    Ok(result)
}

/// Time-averaged power delivered by the source, `Re(V0 conj(I)) / 2`.
pub fn input_power(result: &SolveResult) -> f64 {
    0.5 * (result.source_voltage * result.driven_port_current.conj()).re
}

/// Short-circuit admittance matrix of the two port groups (driven pair,
/// parasitic pair), each group connected in parallel. Any load already in
/// the matrix stays in place.
pub fn port_admittance(system: &MomSystem, ports: &PortNetwork) -> Result<[[Complex64; 2]; 2]> {
    ports.validate(system.basis_count())?;
    let lu = system.z_matrix.clone().lu();
    let groups = [ports.driven_bases, ports.parasitic_bases];
    let mut y = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (col, g) in groups.iter().enumerate() {
        let mut rhs = DVector::zeros(system.basis_count());
        for &i in g {
            rhs[i] = Complex64::new(1.0, 0.0);
        }
        let x = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("impedance matrix is singular".into()))?;
        for (row, h) in groups.iter().enumerate() {
            y[row][col] = x[h[0]] + x[h[1]];
        }
    }
    Ok(y)
}

/// Builds, fills, ports and solves a design in one go.
pub fn solve_design(design: &ArrayDesign, model: &WireModel, frequency: f64) -> Result<SolveResult> {
    let ports = PortNetwork::for_design(model, design)?;
    let system = apply_ports(fill_matrix(model, frequency)?, &ports)?;
    solve(&system, &ports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_model, Point, PortId, Wire, WireModel};

    /// Centre-fed z-directed dipole with a port on the driven gap.
    pub(crate) fn dipole(length: f64, radius: f64, segments: usize, frequency: f64) -> WireModel {
        let w = Wire::new(
            Point::new(0.0, 0.0, -length / 2.0),
            Point::new(0.0, 0.0, length / 2.0),
            radius,
            Some(PortId::DrivenX),
        )
        .unwrap();
        WireModel::from_wires(vec![w], segments, frequency).unwrap()
    }

    fn single_port_zin(model: &WireModel, f: f64) -> Complex64 {
        let sys = fill_matrix(model, f).unwrap();
        let gap = model.port_basis(PortId::DrivenX).unwrap();
        let mut b = DVector::zeros(model.basis_count);
        b[gap] = Complex64::new(1.0, 0.0);
        let x = sys.z_matrix.clone().lu().solve(&b).unwrap();
        1.0 / x[gap]
    }

    #[test]
    fn matrix_is_symmetric() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        for f in [3.0e9, 3.5e9, 4.5e9] {
            let s = fill_matrix(&m, f).unwrap();
            assert!(s.symmetry_residual() < 1e-10, "residual {}", s.symmetry_residual());
        }
    }

    #[test]
    fn nonpositive_frequency_rejected() {
        let m = build_model(&ArrayDesign::reference(), 20).unwrap();
        assert!(matches!(fill_matrix(&m, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn near_half_wave_dipole_impedance() {
        let f = 1e9;
        let lambda = C0 / f;
        let m = dipole(0.47 * lambda, 0.005 * lambda, 20, f);
        let z = single_port_zin(&m, f);
        assert!((z.re - 73.0).abs() < 15.0 && z.im.abs() < 20.0, "Zin = {z}");
    }

    #[test]
    fn distant_dipoles_decouple() {
        let f = 1e9;
        let lambda = C0 / f;
        let (l, a) = (0.47 * lambda, 0.005 * lambda);
        let gap = 10.0 * lambda;
        let w1 = Wire::new(Point::new(0.0, 0.0, -l / 2.0), Point::new(0.0, 0.0, l / 2.0), a, Some(PortId::DrivenX)).unwrap();
        let z0 = l / 2.0 + gap;
        let w2 = Wire::new(Point::new(0.0, 0.0, z0), Point::new(0.0, 0.0, z0 + l), a, Some(PortId::ParasiticX)).unwrap();
        let m = WireModel::from_wires(vec![w1, w2], 20, f).unwrap();
        let sys = fill_matrix(&m, f).unwrap();
        let (p1, p2) = (m.port_basis(PortId::DrivenX).unwrap(), m.port_basis(PortId::ParasiticX).unwrap());
        // open-circuit port impedances from the inverse admittance
        let inv = sys.z_matrix.clone().try_inverse().unwrap();
        let y = nalgebra::Matrix2::new(inv[(p1, p1)], inv[(p1, p2)], inv[(p2, p1)], inv[(p2, p2)]);
        let zp = y.try_inverse().unwrap();
        assert!(zp[(1, 0)].norm() / zp[(0, 0)].norm() < 0.01);
    }

    #[test]
    fn zero_load_leaves_matrix_unchanged() {
        let mut d = ArrayDesign::reference();
        d.load_reactance = 0.0;
        let m = build_model(&d, 20).unwrap();
        let ports = PortNetwork::for_design(&m, &d).unwrap();
        let raw = fill_matrix(&m, d.frequency).unwrap();
        let ported = apply_ports(raw.clone(), &ports).unwrap();
        assert_eq!(raw.z_matrix, ported.z_matrix);
        assert_eq!(ported.excitation.iter().filter(|v| v.norm() > 0.0).count(), 2);
    }

    #[test]
    fn reactive_load_shifts_parasitic_block() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let ports = PortNetwork::for_design(&m, &d).unwrap();
        let raw = fill_matrix(&m, d.frequency).unwrap();
        let ported = apply_ports(raw.clone(), &ports).unwrap();
        let diff = &ported.z_matrix - &raw.z_matrix;
        let [a, b] = ports.parasitic_bases;
        for (i, j) in [(a, a), (a, b), (b, a), (b, b)] {
            assert!((diff[(i, j)] - Complex64::new(0.0, -74.96)).norm() < 1e-12);
        }
        let touched = diff.iter().filter(|v| v.norm() > 1e-12).count();
        assert_eq!(touched, 4);
    }

    #[test]
    fn colliding_ports_rejected() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let mut ports = PortNetwork::for_design(&m, &d).unwrap();
        ports.parasitic_bases[0] = ports.driven_bases[1];
        let sys = fill_matrix(&m, d.frequency).unwrap();
        assert!(matches!(apply_ports(sys, &ports), Err(Error::Config(_))));
    }

    #[test]
    fn zero_source_gives_zero_currents() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let mut ports = PortNetwork::for_design(&m, &d).unwrap();
        ports.source_voltage = Complex64::new(0.0, 0.0);
        let sys = apply_ports(fill_matrix(&m, d.frequency).unwrap(), &ports).unwrap();
        let r = solve(&sys, &ports).unwrap();
        assert!(r.currents.iter().all(|c| c.norm() == 0.0));
        assert_eq!(r.input_power, 0.0);
    }

    #[test]
    fn linear_in_source_voltage() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let mut ports = PortNetwork::for_design(&m, &d).unwrap();
        let sys = fill_matrix(&m, d.frequency).unwrap();
        let r1 = solve(&apply_ports(sys.clone(), &ports).unwrap(), &ports).unwrap();
        ports.source_voltage = Complex64::new(2.0, 0.0);
        let r2 = solve(&apply_ports(sys, &ports).unwrap(), &ports).unwrap();
        for (a, b) in r1.currents.iter().zip(&r2.currents) {
            assert!((b - a * 2.0).norm() <= 1e-12 * b.norm().max(1e-30));
        }
        assert!((r1.input_impedance - r2.input_impedance).norm() < 1e-9 * r1.input_impedance.norm());
    }

    #[test]
    fn port_quantities_are_consistent() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let r = solve_design(&d, &m, d.frequency).unwrap();
        assert!((r.input_impedance * r.driven_port_current - r.source_voltage).norm() < 1e-12);
        assert!((r.load_voltage + Complex64::new(0.0, d.load_reactance) * r.load_current).norm() < 1e-15);
        assert!(r.input_power > 0.0);
        assert!(r.input_impedance.re > 0.0);
    }

    #[test]
    fn input_power_arithmetic() {
        let mut r = SolveResult {
            currents: vec![],
            source_voltage: Complex64::new(1.0, 0.0),
            driven_port_current: Complex64::new(0.01, 0.0),
            input_impedance: Complex64::new(100.0, 0.0),
            input_power: 0.0,
            load_current: Complex64::new(0.0, 0.0),
            load_voltage: Complex64::new(0.0, 0.0),
            frequency: 1.0,
        };
        assert!((input_power(&r) - 5e-3).abs() < 1e-15);
        // purely reactive input impedance draws no real power
        r.driven_port_current = Complex64::new(0.0, 0.01);
        assert_eq!(input_power(&r), 0.0);
    }

    #[test]
    fn two_port_reciprocity() {
        let d = ArrayDesign::reference();
        let m = build_model(&d, 20).unwrap();
        let ports = PortNetwork::for_design(&m, &d).unwrap();
        for f in [3.2e9, 3.5e9, 4.0e9] {
            let sys = fill_matrix(&m, f).unwrap();
            let y = port_admittance(&sys, &ports).unwrap();
            let rel = (y[0][1] - y[1][0]).norm() / y[0][1].norm();
            assert!(rel < 1e-8, "f={f} rel={rel}");
        }
    }

    #[test]
    fn passive_for_reactive_loads() {
        let base = ArrayDesign::reference();
        let m = build_model(&base, 20).unwrap();
        for x in [-5000.0, -500.0, -74.96, 0.0, 40.0, 800.0, 5000.0] {
            let d = ArrayDesign { load_reactance: x, ..base };
            let r = solve_design(&d, &m, d.frequency).unwrap();
            assert!(r.input_impedance.re > 0.0, "X_L={x}: Zin={}", r.input_impedance);
        }
    }

    #[test]
    fn scale_invariance_of_input_impedance() {
        let d = ArrayDesign::reference();
        let big = d.scaled(2.0);
        let z1 = solve_design(&d, &build_model(&d, 20).unwrap(), d.frequency).unwrap().input_impedance;
        let z2 = solve_design(&big, &build_model(&big, 20).unwrap(), big.frequency).unwrap().input_impedance;
        assert!((z1 - z2).norm() / z1.norm() < 5e-7, "{z1} vs {z2}");
    }
}
