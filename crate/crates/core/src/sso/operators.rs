//! Vibrations, the female and male movement rules, and mating.

use rand::Rng;

use super::population::{Bounds, Gender, Population};
use crate::geometry::{wrap_signed_yaw, Attitude};
use crate::scalar::Real;

/// How the inter-spider distance inside the vibration term is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// Each coordinate difference divided by its active bound range.
    #[default]
    Normalized,
    /// Raw degrees (vibrations vanish beyond a few degrees).
    Degrees,
}

/// Whether the random factors of the movement rules are one scalar per spider
/// or one value per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomFactors {
    #[default]
    PerSpider,
    PerDimension,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveParams<T> {
    pub pf: T,
    pub distance: DistanceMode,
    pub factors: RandomFactors,
}

/// `to - from` per coordinate, yaw taken as the signed shortest turn.
#[inline]
pub fn offset<T: Real>(from: &Attitude<T>, to: &Attitude<T>) -> [T; 3] {
    [
        wrap_signed_yaw(to.yaw - from.yaw),
        to.pitch - from.pitch,
        to.roll - from.roll,
    ]
}

pub fn distance<T: Real>(
    a: &Attitude<T>,
    b: &Attitude<T>,
    bounds: &Bounds<T>,
    mode: DistanceMode,
) -> T {
    let d = offset(a, b);
    let mut s = T::zero();
    for (j, v) in d.iter().enumerate() {
        let v = match mode {
            DistanceMode::Normalized => *v / bounds.range(j),
            DistanceMode::Degrees => *v,
        };
        s += v * v;
    }
    s.sqrt()
}

/// Raw-degree distance with the yaw difference wrapped.
pub fn degree_distance<T: Real>(a: &Attitude<T>, b: &Attitude<T>) -> T {
    let d = offset(a, b);
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// `w e^{-d^2}`.
#[inline]
pub fn vibration<T: Real>(weight: T, d: T) -> T {
    weight * (-(d * d)).exp()
}

/// Uniform draws consumed by one female move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemaleDraws<T> {
    pub r_m: T,
    pub zeta: [T; 3],
    pub tau: [T; 3],
    pub delta: [T; 3],
    pub jitter: [T; 3],
}

/// Uniform draws consumed by one male move. Drawn for every male so the
/// stream does not depend on dominance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaleDraws<T> {
    pub zeta: [T; 3],
    pub delta: [T; 3],
    pub jitter: [T; 3],
}

fn factor<T: Real, R: Rng + ?Sized>(rng: &mut R, mode: RandomFactors) -> [T; 3] {
    match mode {
        RandomFactors::PerSpider => [T::lit(rng.random::<f64>()); 3],
        RandomFactors::PerDimension => std::array::from_fn(|_| T::lit(rng.random::<f64>())),
    }
}

fn uniform3<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 3] {
    std::array::from_fn(|_| T::lit(rng.random::<f64>()))
}

impl<T: Real> FemaleDraws<T> {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, mode: RandomFactors) -> Self {
        let r_m = T::lit(rng.random::<f64>());
        let zeta = factor(rng, mode);
        let tau = factor(rng, mode);
        let delta = factor(rng, mode);
        Self {
            r_m,
            zeta,
            tau,
            delta,
            jitter: uniform3(rng),
        }
    }
}

impl<T: Real> MaleDraws<T> {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, mode: RandomFactors) -> Self {
        let zeta = factor(rng, mode);
        let delta = factor(rng, mode);
        Self {
            zeta,
            delta,
            jitter: uniform3(rng),
        }
    }
}

/// A target position and the vibration it sends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pull<T> {
    pub target: Attitude<T>,
    pub vib: T,
}

/// Female rule: attraction (`r_m < pf`) or repulsion relative to the nearest
/// heavier spider `c` and the best spider `b`, plus a jitter
/// `delta (u - 1/2)`. Returns the unrepaired position.
pub fn female_step<T: Real>(
    pos: &Attitude<T>,
    c: Option<Pull<T>>,
    b: Pull<T>,
    d: &FemaleDraws<T>,
    pf: T,
) -> Attitude<T> {
    let sign = if d.r_m < pf { T::one() } else { -T::one() };
    let dc = c.map(|c| (offset(pos, &c.target), c.vib));
    let db = offset(pos, &b.target);
    let half = T::lit(0.5);
    let mut p = pos.to_array();
    for j in 0..3 {
        let mut step = d.tau[j] * b.vib * db[j];
        if let Some((dc, vib)) = dc {
            step += d.zeta[j] * vib * dc[j];
        }
        p[j] += sign * step + d.delta[j] * (d.jitter[j] - half);
    }
    Attitude::from_array(p)
}

/// Dominant male rule: move toward the nearest female `f` plus a jitter.
pub fn dominant_male_step<T: Real>(
    pos: &Attitude<T>,
    f: Option<Pull<T>>,
    d: &MaleDraws<T>,
) -> Attitude<T> {
    let df = f.map(|f| (offset(pos, &f.target), f.vib));
    let half = T::lit(0.5);
    let mut p = pos.to_array();
    for j in 0..3 {
        if let Some((df, vib)) = df {
            p[j] += d.zeta[j] * vib * df[j];
        }
        p[j] += d.delta[j] * (d.jitter[j] - half);
    }
    Attitude::from_array(p)
}

/// Non-dominant male rule: `m + zeta (mean - m)`, where `mean - m` is given
/// directly as a wrap-aware offset.
pub fn follower_male_step<T: Real>(pos: &Attitude<T>, to_mean: [T; 3], d: &MaleDraws<T>) -> Attitude<T> {
    let mut p = pos.to_array();
    for j in 0..3 {
        p[j] += d.zeta[j] * to_mean[j];
    }
    Attitude::from_array(p)
}

/// Offset from `pos` to the weighted mean of `members`, with yaw averaged as
/// signed turns relative to `pos`. Falls back to equal weights when all
/// weights are zero.
pub fn weighted_mean_offset<T: Real>(pos: &Attitude<T>, members: &[(Attitude<T>, T)]) -> [T; 3] {
    let total: T = members.iter().map(|m| m.1).sum();
    let uniform = !(total > T::zero());
    let norm = if uniform {
        T::from_usize_lossy(members.len())
    } else {
        total
    };
    let mut acc = [T::zero(); 3];
    for (a, w) in members {
        let w = if uniform { T::one() } else { *w };
        let d = offset(pos, a);
        for j in 0..3 {
            acc[j] += w * d[j];
        }
    }
    acc.map(|v| v / norm)
}

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median<T: Real>(values: &[T]) -> T {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::lit(2.0)
    }
}

/// Male indices (into the population) whose weight is at least the male median.
pub fn dominant_males<T: Real>(pop: &Population<T>) -> Vec<usize> {
    let males = pop.males();
    if males.is_empty() {
        return Vec::new();
    }
    let m = median(&males.iter().map(|s| s.weight).collect::<Vec<_>>());
    let nf = pop.n_females();
    (0..males.len())
        .filter(|&i| males[i].weight >= m)
        .map(|i| nf + i)
        .collect()
}

fn nearest<T: Real>(
    pop: &Population<T>,
    i: usize,
    candidates: impl Iterator<Item = usize>,
    bounds: &Bounds<T>,
    mode: DistanceMode,
) -> Option<(usize, T)> {
    let me = &pop.spiders[i].position;
    let mut best: Option<(usize, T)> = None;
    for j in candidates {
        if j == i {
            continue;
        }
        let d = distance(me, &pop.spiders[j].position, bounds, mode);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((j, d));
        }
    }
    best
}

/// One synchronous movement phase: every female, then every male, moves from
/// the current positions. Weights must be assigned. Returns repaired positions
/// in population order.
pub fn move_population<T: Real, R: Rng + ?Sized>(
    pop: &Population<T>,
    bounds: &Bounds<T>,
    params: &MoveParams<T>,
    rng: &mut R,
) -> Vec<Attitude<T>> {
    let n = pop.len();
    let nf = pop.n_females();
    let mode = params.distance;
    let b = pop.best();
    let pull = |j: usize, d: T| Pull {
        target: pop.spiders[j].position,
        vib: vibration(pop.spiders[j].weight, d),
    };
    let mut out = Vec::with_capacity(n);

    for i in 0..nf {
        let me = &pop.spiders[i];
        let w = me.weight;
        let heavier = (0..n).filter(|&j| pop.spiders[j].weight > w);
        let c = nearest(pop, i, heavier, bounds, mode).map(|(j, d)| pull(j, d));
        let db = distance(&me.position, &pop.spiders[b].position, bounds, mode);
        let draws = FemaleDraws::draw(rng, params.factors);
        let p = female_step(&me.position, c, pull(b, db), &draws, params.pf);
        out.push(bounds.repair(p));
    }

    let dominant = dominant_males(pop);
    let males: Vec<(Attitude<T>, T)> = pop.males().iter().map(|s| (s.position, s.weight)).collect();
    for i in nf..n {
        let me = &pop.spiders[i];
        let draws = MaleDraws::draw(rng, params.factors);
        let p = if dominant.binary_search(&i).is_ok() {
            let f = nearest(pop, i, 0..nf, bounds, mode).map(|(j, d)| pull(j, d));
            dominant_male_step(&me.position, f, &draws)
        } else {
            follower_male_step(&me.position, weighted_mean_offset(&me.position, &males), &draws)
        };
        out.push(bounds.repair(p));
    }
    out
}

/// Pick an index by weight-proportional roulette from a uniform `u` in
/// `[0, 1)`; uniform choice when all weights are zero.
pub fn roulette<T: Real>(weights: &[T], u: f64) -> usize {
    let total: T = weights.iter().copied().sum();
    if !(total > T::zero()) {
        return ((u * weights.len() as f64) as usize).min(weights.len() - 1);
    }
    let target = T::lit(u) * total;
    let mut acc = T::zero();
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w > T::zero() {
            acc += w;
            last = k;
            if target < acc {
                return k;
            }
        }
    }
    last
}

/// For each dominant male, in male order, the group of females within
/// `radius` degrees forms a brood whose coordinates are each copied from a
/// roulette-selected group member. Groups without a female produce nothing.
/// Returns repaired brood positions.
pub fn mating_broods<T: Real, R: Rng + ?Sized>(
    pop: &Population<T>,
    bounds: &Bounds<T>,
    radius: T,
    rng: &mut R,
) -> Vec<Attitude<T>> {
    let mut broods = Vec::new();
    for m in dominant_males(pop) {
        let male = &pop.spiders[m];
        debug_assert_eq!(male.gender, Gender::Male);
        let mut group = vec![m];
        group.extend(
            pop.females()
                .iter()
                .enumerate()
                .filter(|(_, f)| degree_distance(&male.position, &f.position) <= radius)
                .map(|(k, _)| k),
        );
        if group.len() < 2 {
            continue;
        }
        let weights: Vec<T> = group.iter().map(|&k| pop.spiders[k].weight).collect();
        let p: [T; 3] = std::array::from_fn(|j| {
            let k = group[roulette(&weights, rng.random::<f64>())];
            pop.spiders[k].position.to_array()[j]
        });
        broods.push(bounds.repair(Attitude::from_array(p)));
    }
    broods
}
