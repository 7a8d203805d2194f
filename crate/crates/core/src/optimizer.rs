//! Real-coded genetic algorithm over the array design vector.
//!
//! The objective is the boresight LHCP realized gain at the design
//! frequency. Genes are ordered `lx1, lx2, ly1, ly2, wx1, wx2, wy1, wy2,
//! X_L`, followed by the element spacing when it is searched.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::boresight;
use crate::em::solve_design;
use crate::geometry::{build_model, wavelength, ArrayDesign, DEFAULT_SEGMENTS};
use crate::{Error, Result};

/// Fitness given to candidates that cannot be meshed or solved.
pub const PENALTY_DB: f64 = -100.0;

/// Box bounds of the design vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub f0: f64,
    pub length_bounds: (f64, f64),
    pub width_bounds: (f64, f64),
    pub reactance_bounds: (f64, f64),
    /// Spacing used when it is not searched.
    pub spacing: f64,
    /// Present when the spacing is a gene.
    pub spacing_bounds: Option<(f64, f64)>,
}

impl SearchSpace {
    /// Lengths in `[0.3, 0.6]` and widths in `[0.005, 0.05]` wavelengths,
    /// reactance in `[-5000, 5000]` ohm, spacing fixed at 0.15 wavelength.
    pub fn new(f0: f64) -> Result<Self> {
        let lambda = wavelength(f0)?;
        Ok(Self {
            f0,
            length_bounds: (0.3 * lambda, 0.6 * lambda),
            width_bounds: (0.005 * lambda, 0.05 * lambda),
            reactance_bounds: (-5000.0, 5000.0),
            spacing: 0.15 * lambda,
            spacing_bounds: None,
        })
    }

    /// Adds the element spacing as a tenth gene, searched over
    /// `[0.05, 0.3]` wavelengths.
    pub fn with_spacing_search(mut self) -> Self {
        let lambda = wavelength(self.f0).expect("validated at construction");
        self.spacing_bounds = Some((0.05 * lambda, 0.3 * lambda));
        self
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        let mut b = vec![self.length_bounds; 4];
        b.extend([self.width_bounds; 4]);
        b.push(self.reactance_bounds);
        if let Some(s) = self.spacing_bounds {
            b.push(s);
        }
        b
    }

    pub fn dimension(&self) -> usize {
        if self.spacing_bounds.is_some() {
            10
        } else {
            9
        }
    }

    pub fn contains(&self, genes: &[f64]) -> bool {
        genes.len() == self.dimension()
            && genes.iter().zip(self.bounds()).all(|(g, (lo, hi))| *g >= lo && *g <= hi)
    }

    pub fn design(&self, genes: &[f64]) -> Result<ArrayDesign> {
        if !self.contains(genes) {
            return Err(Error::Domain(format!("candidate {genes:?} is outside the search space")));
        }
        Ok(ArrayDesign {
            lx1: genes[0],
            lx2: genes[1],
            ly1: genes[2],
            ly2: genes[3],
            wx1: genes[4],
            wx2: genes[5],
            wy1: genes[6],
            wy2: genes[7],
            load_reactance: genes[8],
            spacing_d: genes.get(9).copied().unwrap_or(self.spacing),
            frequency: self.f0,
        })
    }

    pub fn genes(&self, design: &ArrayDesign) -> Vec<f64> {
        let d = design;
        let mut g = vec![d.lx1, d.lx2, d.ly1, d.ly2, d.wx1, d.wx2, d.wy1, d.wy2, d.load_reactance];
        if self.spacing_bounds.is_some() {
            g.push(d.spacing_d);
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability; `None` means one over the gene count.
    pub mutation_prob: Option<f64>,
    /// Mutation standard deviation as a fraction of each bound range.
    pub mutation_sigma: f64,
    pub elitism: usize,
    pub rng_seed: u64,
    pub segments_per_dipole: usize,
    pub reference_impedance: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 40,
            generations: 60,
            tournament_size: 2,
            crossover_prob: 0.9,
            mutation_prob: None,
            mutation_sigma: 0.05,
            elitism: 1,
            rng_seed: 1,
            segments_per_dipole: DEFAULT_SEGMENTS,
            reference_impedance: 50.0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 || self.population % 2 != 0 {
            return Err(Error::Config(format!("population must be even and at least 4, got {}", self.population)));
        }
        if self.generations < 1 {
            return Err(Error::Config("generations must be at least 1".into()));
        }
        if self.tournament_size < 1 {
            return Err(Error::Config("tournament size must be at least 1".into()));
        }
        if self.elitism >= self.population {
            return Err(Error::Config("elitism must leave room for offspring".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(Error::Config("crossover probability must lie in [0, 1]".into()));
        }
        if let Some(p) = self.mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config("mutation probability must lie in [0, 1]".into()));
            }
        }
        if !(self.mutation_sigma >= 0.0) {
            return Err(Error::Config("mutation sigma must be non-negative".into()));
        }
        if !(self.reference_impedance > 0.0) {
            return Err(Error::Config("reference impedance must be positive".into()));
        }
        Ok(())
    }
}

/// Boresight LHCP realized gain (dB) of a candidate at the design frequency.
///
/// Out-of-bounds candidates are an error; candidates that fail to mesh or
/// solve score [`PENALTY_DB`].
pub fn evaluate(space: &SearchSpace, genes: &[f64], segments_per_dipole: usize, reference_impedance: f64) -> Result<f64> {
    let design = space.design(genes)?;
    Ok(design_fitness(&design, segments_per_dipole, reference_impedance).unwrap_or(PENALTY_DB))
}

/// The objective for a concrete design; shares its path with `analyze`.
pub fn design_fitness(design: &ArrayDesign, segments_per_dipole: usize, reference_impedance: f64) -> Result<f64> {
    let model = build_model(design, segments_per_dipole)?;
    let solve = solve_design(design, &model, design.frequency)?;
    Ok(boresight(&model, &solve, reference_impedance)?.g_lhcp_db)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub genes: Vec<f64>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaRun {
    /// Best individual after initialization and after each generation.
    pub best_per_generation: Vec<Candidate>,
    pub final_best: Candidate,
    pub final_design: ArrayDesign,
    /// Fitness of every member of the initial population.
    pub initial_fitness: Vec<f64>,
    pub evaluations: usize,
    pub seed: u64,
}

fn best_of(pop: &[Candidate]) -> &Candidate {
    // first maximum wins, so ties resolve deterministically
    pop.iter().fold(&pop[0], |b, c| if c.fitness > b.fitness { c } else { b })
}

fn evaluate_all(space: &SearchSpace, config: &GaConfig, genomes: Vec<Vec<f64>>) -> Result<Vec<Candidate>> {
    genomes
        .into_par_iter()
        .map(|genes| {
            assert!(space.contains(&genes), "candidate escaped the search space: {genes:?}");
            let fitness = evaluate(space, &genes, config.segments_per_dipole, config.reference_impedance)?;
            Ok(Candidate { genes, fitness })
        })
        .collect()
}

fn tournament<'a>(pop: &'a [Candidate], size: usize, rng: &mut ChaCha8Rng) -> &'a Candidate {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..size {
        let c = &pop[rng.random_range(0..pop.len())];
        if c.fitness > best.fitness {
            best = c;
        }
    }
    best
}

/// Runs the generational loop. Selection, crossover and mutation draw from
/// one seeded stream on the calling thread; only fitness evaluation is
/// parallel, so the trajectory does not depend on scheduling.
pub fn run_ga(space: &SearchSpace, config: &GaConfig) -> Result<GaRun> {
    config.validate()?;
    let bounds = space.bounds();
    let dim = bounds.len();
    let mutation_prob = config.mutation_prob.unwrap_or(1.0 / dim as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let initial: Vec<Vec<f64>> = (0..config.population)
        .map(|_| bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect())
        .collect();
    let mut pop = evaluate_all(space, config, initial)?;
    let mut evaluations = pop.len();
    let initial_fitness = pop.iter().map(|c| c.fitness).collect();
    let mut trace = vec![best_of(&pop).clone()];

    for _ in 0..config.generations {
        let mut ranked: Vec<&Candidate> = pop.iter().collect();
        ranked.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
        let elites: Vec<Candidate> = ranked[..config.elitism].iter().map(|c| (*c).clone()).collect();

        let n_children = config.population - config.elitism;
        let mut children = Vec::with_capacity(n_children + 1);
        while children.len() < n_children {
            let a = tournament(&pop, config.tournament_size, &mut rng);
            let b = tournament(&pop, config.tournament_size, &mut rng);
            let (mut c1, mut c2) = (a.genes.clone(), b.genes.clone());
            if rng.random::<f64>() < config.crossover_prob {
                for g in 0..dim {
                    let (lo, hi) = bounds[g];
                    let r1: f64 = rng.random_range(-0.25..=1.25);
                    let r2: f64 = rng.random_range(-0.25..=1.25);
                    c1[g] = (a.genes[g] + r1 * (b.genes[g] - a.genes[g])).clamp(lo, hi);
                    c2[g] = (b.genes[g] + r2 * (a.genes[g] - b.genes[g])).clamp(lo, hi);
                }
            }
            for child in [&mut c1, &mut c2] {
                for g in 0..dim {
                    if rng.random::<f64>() < mutation_prob {
                        let (lo, hi) = bounds[g];
                        let step = unit.sample(&mut rng) * config.mutation_sigma * (hi - lo);
                        child[g] = (child[g] + step).clamp(lo, hi);
                    }
                }
            }
            children.push(c1);
            children.push(c2);
        }
        children.truncate(n_children);
        let offspring = evaluate_all(space, config, children)?;
        evaluations += offspring.len();
        pop = elites.into_iter().chain(offspring).collect();
        trace.push(best_of(&pop).clone());
    }

    let final_best = trace.last().expect("trace is never empty").clone();
    Ok(GaRun {
        final_design: space.design(&final_best.genes)?,
        best_per_generation: trace,
        final_best,
        initial_fitness,
        evaluations,
        seed: config.rng_seed,
    })
}
