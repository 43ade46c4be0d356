//! Social spider optimization over `(yaw, pitch, roll)`.
//!
//! The yaw circle is searched as four independent quarter-turn quadrants.
//! Each quadrant runs a fixed number of iterations of: weight assignment,
//! female and male movement, fitness evaluation, and mating. The best spider
//! of each quadrant becomes a [`Candidate`]; [`select_final`] then picks one
//! using light-intensity sector ratios.
//!
//! All random draws come from one ChaCha8 stream per quadrant, consumed in a
//! fixed order (females, then males, then mating groups), so results do not
//! depend on how fitness evaluations are scheduled across threads.

mod fitness;
mod operators;
mod population;
mod select;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use fitness::{template_fitness, Objective, TemplateMatcher};
pub use operators::{
    degree_distance, distance, dominant_male_step, dominant_males, female_step, follower_male_step,
    mating_broods, median, move_population, offset, roulette, vibration, weighted_mean_offset,
    DistanceMode, FemaleDraws, MaleDraws, MoveParams, Pull, RandomFactors,
};
pub use population::{assign_weights, init_counts, Bounds, Gender, Population, Spider};
pub use select::{select_final, Candidate};

use crate::error::{Error, Result};
use crate::geometry::Attitude;
use crate::imager::{CameraModel, ImageSet, Imager};
use crate::scalar::Real;
use crate::skymodel::{SkyConfig, SkyModel, SkyParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsoConfig<T> {
    /// Population size `N` (per quadrant unless `split_population`).
    pub population: usize,
    /// Iterations `k_max`; the only stop criterion.
    pub iterations: usize,
    /// Attraction threshold `PF`.
    pub pf: T,
    /// Weight of the AOP term in the fitness.
    pub theta: T,
    /// Camera field of view, degrees.
    pub fov: T,
    pub seed: u64,
    pub distance: DistanceMode,
    pub factors: RandomFactors,
    /// Give each quadrant `N/4` spiders (at least 4) instead of `N`.
    pub split_population: bool,
}

impl<T: Real> Default for SsoConfig<T> {
    fn default() -> Self {
        Self {
            population: 200,
            iterations: 1000,
            pf: T::lit(0.7),
            theta: T::lit(1.5),
            fov: T::lit(crate::imager::REFERENCE_FOV),
            seed: 0,
            distance: DistanceMode::default(),
            factors: RandomFactors::default(),
            split_population: false,
        }
    }
}

impl<T: Real> SsoConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Parameter(format!(
                "population must be at least 4, got {}",
                self.population
            )));
        }
        if !(self.pf >= T::zero() && self.pf <= T::one()) {
            return Err(Error::domain("PF", self.pf.as_f64(), "[0, 1]"));
        }
        if !(self.theta > T::zero()) {
            return Err(Error::domain("theta", self.theta.as_f64(), "(0, inf)"));
        }
        if !(self.fov > T::zero() && self.fov < T::lit(180.0)) {
            return Err(Error::domain("FOV", self.fov.as_f64(), "(0, 180) deg"));
        }
        Ok(())
    }

    /// Spiders per quadrant.
    pub fn quadrant_population(&self) -> usize {
        if self.split_population {
            (self.population / 4).max(4)
        } else {
            self.population
        }
    }

    fn move_params(&self) -> MoveParams<T> {
        MoveParams {
            pf: self.pf,
            distance: self.distance,
            factors: self.factors,
        }
    }
}

/// State after one iteration. Weights are those assigned at the start of
/// the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord<T> {
    pub iteration: usize,
    /// Best fitness seen so far.
    pub best_fitness: T,
    pub best: Attitude<T>,
    pub max_weight: T,
    pub min_weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<T> {
    pub best: Attitude<T>,
    pub fitness: T,
    pub trace: Vec<TraceRecord<T>>,
}

fn evaluate_all<T: Real, O: Objective<T> + ?Sized>(objective: &O, at: &[Attitude<T>]) -> Result<Vec<T>> {
    at.par_iter().map(|a| objective.evaluate(a)).collect()
}

/// Maximize `objective` within `bounds`.
pub fn optimize<T, O>(objective: &O, bounds: &Bounds<T>, cfg: &SsoConfig<T>, rng: &mut ChaCha8Rng) -> Result<SearchResult<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
{
    cfg.validate()?;
    let params = cfg.move_params();
    let radius = Bounds::full(cfg.fov).mating_radius();
    let mut pop = Population::random(cfg.quadrant_population(), bounds, rng);
    let start: Vec<_> = pop.spiders.iter().map(|s| s.position).collect();
    for (s, j) in pop.spiders.iter_mut().zip(evaluate_all(objective, &start)?) {
        s.fitness = j;
    }
    let b = pop.best();
    let (mut best, mut best_j) = (pop.spiders[b].position, pop.spiders[b].fitness);
    let mut trace = Vec::with_capacity(cfg.iterations);

    for iteration in 1..=cfg.iterations {
        pop.assign_weights();
        let (min_w, max_w) = pop
            .spiders
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), s| {
                (lo.min(s.weight), hi.max(s.weight))
            });

        let moved = move_population(&pop, bounds, &params, rng);
        let fit = evaluate_all(objective, &moved)?;
        for ((s, p), j) in pop.spiders.iter_mut().zip(moved).zip(fit) {
            s.position = p;
            s.fitness = j;
        }

        pop.assign_weights();
        let broods = mating_broods(&pop, bounds, radius, rng);
        let brood_fit = evaluate_all(objective, &broods)?;
        for (p, j) in broods.into_iter().zip(brood_fit) {
            let w = pop.worst();
            if j > pop.spiders[w].fitness {
                pop.spiders[w].position = p;
                pop.spiders[w].fitness = j;
            }
        }

        let b = pop.best();
        if pop.spiders[b].fitness > best_j {
            best = pop.spiders[b].position;
            best_j = pop.spiders[b].fitness;
        }
        trace.push(TraceRecord {
            iteration,
            best_fitness: best_j,
            best,
            max_weight: max_w,
            min_weight: min_w,
        });
    }
    Ok(SearchResult {
        best,
        fitness: best_j,
        trace,
    })
}

/// Generator for quadrant `q`: the config seed with stream `q`.
pub fn quadrant_rng(seed: u64, q: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(q as u64);
    rng
}

/// Search the yaw sub-range of quadrant `q` in `1..=4`.
pub fn run_quadrant<T, O>(q: usize, objective: &O, cfg: &SsoConfig<T>) -> Result<(Candidate<T>, Vec<TraceRecord<T>>)>
where
    T: Real,
    O: Objective<T> + ?Sized,
{
    if !(1..=4).contains(&q) {
        return Err(Error::Parameter(format!("quadrant must be 1..=4, got {q}")));
    }
    let bounds = Bounds::quadrant(cfg.fov, q);
    let r = optimize(objective, &bounds, cfg, &mut quadrant_rng(cfg.seed, q))?;
    let cand = Candidate {
        attitude: r.best,
        fitness: r.fitness,
        quadrant: q,
        com: None,
    };
    Ok((cand, r.trace))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<T> {
    pub attitude: Attitude<T>,
    pub fitness: T,
    /// One per quadrant, in quadrant order.
    pub candidates: Vec<Candidate<T>>,
    /// Index into `candidates` of the chosen one.
    pub chosen: usize,
    pub traces: Vec<Vec<TraceRecord<T>>>,
}

/// Run the four quadrant searches against `objective` and choose among them
/// with the light-intensity test rendered by `imager`.
pub fn estimate_with<T, O>(objective: &O, given: &ImageSet<T>, imager: &Imager<T>, cfg: &SsoConfig<T>) -> Result<Estimate<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
{
    cfg.validate()?;
    let mut candidates = Vec::with_capacity(4);
    let mut traces = Vec::with_capacity(4);
    for q in 1..=4 {
        let (c, t) = run_quadrant(q, objective, cfg)?;
        log::debug!("quadrant {q}: J = {} at {:?}", c.fitness, c.attitude);
        candidates.push(c);
        traces.push(t);
    }
    let chosen = select_final(&mut candidates, given, imager)?;
    Ok(Estimate {
        attitude: candidates[chosen].attitude,
        fitness: candidates[chosen].fitness,
        candidates,
        chosen,
        traces,
    })
}

/// Estimate the camera attitude from a given image set captured under
/// `params`, using the sky model built from `sky`.
pub fn estimate_attitude<T: Real>(
    given: &ImageSet<T>,
    params: &SkyParams<T>,
    cfg: &SsoConfig<T>,
    camera: &CameraModel<T>,
    sky: &SkyConfig<T>,
) -> Result<Estimate<T>> {
    cfg.validate()?;
    if (camera.fov() - cfg.fov).abs() > T::lit(1e-9) {
        return Err(Error::Parameter(format!(
            "camera FOV {} differs from the search FOV {}",
            camera.fov(),
            cfg.fov
        )));
    }
    let imager = Imager::new(*camera, SkyModel::new(*params, sky)?);
    let matcher = TemplateMatcher::new(imager.clone(), given, cfg.theta)?;
    estimate_with(&matcher, given, &imager, cfg)
}
