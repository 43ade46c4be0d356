//! Spider population: gender split, search bounds, feasibility repair and
//! weight assignment.

use rand::Rng;

use crate::geometry::{wrap_signed_yaw, Attitude};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gender {
    Female,
    Male,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spider<T> {
    pub position: Attitude<T>,
    pub gender: Gender,
    pub weight: T,
    pub fitness: T,
}

/// Box bounds on `(yaw, pitch, roll)` plus the tilt constraint
/// `|pitch| + |roll| <= tilt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds<T> {
    pub low: [T; 3],
    pub high: [T; 3],
    pub tilt: T,
}

impl<T: Real> Bounds<T> {
    /// Yaw over the whole circle, pitch and roll within `±(90 - fov/2)`.
    pub fn full(fov: T) -> Self {
        let t = Attitude::tilt_limit(fov);
        let h = T::lit(180.0);
        Self {
            low: [-h, -t, -t],
            high: [h, t, t],
            tilt: t,
        }
    }

    /// Yaw restricted to quadrant `q` in `1..=4`: `[-180,-90]`, `[-90,0]`,
    /// `[0,90]`, `[90,180]`.
    pub fn quadrant(fov: T, q: usize) -> Self {
        assert!((1..=4).contains(&q), "quadrant must be 1..=4, got {q}");
        let mut b = Self::full(fov);
        let lo = T::lit(-180.0 + 90.0 * (q - 1) as f64);
        b.low[0] = lo;
        b.high[0] = lo + T::lit(90.0);
        b
    }

    pub fn range(&self, j: usize) -> T {
        self.high[j] - self.low[j]
    }

    pub fn spans_full_turn(&self) -> bool {
        self.range(0) >= T::lit(360.0)
    }

    pub fn contains(&self, a: &Attitude<T>) -> bool {
        let p = a.to_array();
        let eps = T::lit(1e-9);
        (0..3).all(|j| p[j] >= self.low[j] - eps && p[j] <= self.high[j] + eps)
            && a.pitch.abs() + a.roll.abs() <= self.tilt + eps
    }

    /// Mating radius: mean half-range over the three dimensions.
    pub fn mating_radius(&self) -> T {
        (0..3).map(|j| self.range(j)).sum::<T>() / T::lit(6.0)
    }

    /// Bring a position back into the feasible set: yaw is wrapped when the
    /// bounds span the full turn, every coordinate is clamped to the box, and
    /// a tilt violation is scaled radially in the `(pitch, roll)` plane onto
    /// the constraint boundary.
    pub fn repair(&self, a: Attitude<T>) -> Attitude<T> {
        let mut p = a.to_array();
        if self.spans_full_turn() {
            p[0] = wrap_signed_yaw(p[0]);
        }
        for ((x, lo), hi) in p.iter_mut().zip(self.low).zip(self.high) {
            *x = x.max(lo).min(hi);
        }
        let l1 = p[1].abs() + p[2].abs();
        if l1 > self.tilt {
            let s = self.tilt / l1;
            p[1] *= s;
            p[2] *= s;
        }
        Attitude::from_array(p)
    }

    /// Uniform draw in the box, resampled until the tilt constraint holds.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Attitude<T> {
        loop {
            let mut p = [T::zero(); 3];
            for (j, v) in p.iter_mut().enumerate() {
                let u = T::lit(rng.random::<f64>());
                *v = self.low[j] + u * self.range(j);
            }
            if p[1].abs() + p[2].abs() <= self.tilt {
                return Attitude::from_array(p);
            }
        }
    }
}

/// `N_f = floor((0.9 - u 0.25) N)`, `N_m = N - N_f` for a uniform `u`.
pub fn init_counts(n: usize, u: f64) -> (usize, usize) {
    let nf = ((0.9 - u * 0.25) * n as f64).floor() as usize;
    (nf, n - nf)
}

/// Females first, then males. Spiders start with fitness `-inf` and weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub spiders: Vec<Spider<T>>,
    n_females: usize,
}

impl<T: Real> Population<T> {
    pub fn new(spiders: Vec<Spider<T>>) -> Self {
        let n_females = spiders
            .iter()
            .take_while(|s| s.gender == Gender::Female)
            .count();
        assert!(
            spiders[n_females..].iter().all(|s| s.gender == Gender::Male),
            "females must precede males"
        );
        Self { spiders, n_females }
    }

    /// Gender split and uniform feasible positions.
    pub fn random<R: Rng + ?Sized>(n: usize, bounds: &Bounds<T>, rng: &mut R) -> Self {
        let (nf, _) = init_counts(n, rng.random::<f64>());
        let spiders = (0..n)
            .map(|i| Spider {
                position: bounds.sample(rng),
                gender: if i < nf { Gender::Female } else { Gender::Male },
                weight: T::zero(),
                fitness: T::neg_infinity(),
            })
            .collect();
        Self::new(spiders)
    }

    pub fn len(&self) -> usize {
        self.spiders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spiders.is_empty()
    }

    pub fn n_females(&self) -> usize {
        self.n_females
    }

    pub fn females(&self) -> &[Spider<T>] {
        &self.spiders[..self.n_females]
    }

    pub fn males(&self) -> &[Spider<T>] {
        &self.spiders[self.n_females..]
    }

    /// Index of the highest fitness (first on ties).
    pub fn best(&self) -> usize {
        let mut b = 0;
        for (i, s) in self.spiders.iter().enumerate() {
            if s.fitness > self.spiders[b].fitness {
                b = i;
            }
        }
        b
    }

    /// Index of the lowest fitness (first on ties).
    pub fn worst(&self) -> usize {
        let mut w = 0;
        for (i, s) in self.spiders.iter().enumerate() {
            if s.fitness < self.spiders[w].fitness {
                w = i;
            }
        }
        w
    }

    /// Affine fitness-to-weight map, best to 1 and worst to 0.
    pub fn assign_weights(&mut self) {
        let fit: Vec<T> = self.spiders.iter().map(|s| s.fitness).collect();
        for (s, w) in self.spiders.iter_mut().zip(assign_weights(&fit)) {
            s.weight = w;
        }
    }
}

/// `w_i = (J_i - worst) / (best - worst)`; all 1 when every `J` is equal.
pub fn assign_weights<T: Real>(fitness: &[T]) -> Vec<T> {
    let Some(&first) = fitness.first() else {
        return Vec::new();
    };
    let (lo, hi) = fitness
        .iter()
        .fold((first, first), |(lo, hi), &j| (lo.min(j), hi.max(j)));
    let span = hi - lo;
    if !(span > T::zero()) {
        return vec![T::one(); fitness.len()];
    }
    fitness
        .iter()
        .map(|&j| ((j - lo) / span).max(T::zero()).min(T::one()))
        .collect()
}
