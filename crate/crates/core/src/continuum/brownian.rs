use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::rng::{rng_for, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Time(f64);

impl Eq for Time {}

impl PartialOrd for Time {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Time {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Two-sided Brownian motion with `β(0) = 0`, revealed lazily.
///
/// New times are filled by Brownian-bridge interpolation between the nearest
/// revealed neighbours, so the revealed values always form an exact sample of
/// the finite-dimensional law.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    points: BTreeMap<Time, f64>,
    rng: Rng,
}

impl BrownianPath {
    pub fn new(seed: u64) -> Self {
        let mut points = BTreeMap::new();
        points.insert(Time(0.0), 0.0);
        Self {
            points,
            rng: rng_for(seed, &[]),
        }
    }

    /// Starts from prescribed values on a set of times (which must include 0).
    pub fn from_points(seed: u64, pts: &[(f64, f64)]) -> Self {
        let mut path = Self::new(seed);
        for &(t, v) in pts {
            path.points.insert(Time(t), v);
        }
        path
    }

    pub fn revealed(&self) -> usize {
        self.points.len()
    }

    pub fn value(&mut self, s: f64) -> f64 {
        if let Some(&v) = self.points.get(&Time(s)) {
            return v;
        }
        let before = self.points.range(..Time(s)).next_back().map(|(k, v)| (k.0, *v));
        let after = self.points.range(Time(s)..).next().map(|(k, v)| (k.0, *v));
        let z: f64 = self.rng.sample(StandardNormal);
        let v = match (before, after) {
            (Some((t1, v1)), Some((t2, v2))) => {
                let w = (s - t1) / (t2 - t1);
                let var = (s - t1) * (t2 - s) / (t2 - t1);
                v1 + w * (v2 - v1) + var.sqrt() * z
            }
            (Some((t1, v1)), None) => v1 + (s - t1).sqrt() * z,
            (None, Some((t2, v2))) => v2 + (t2 - s).sqrt() * z,
            (None, None) => unreachable!("origin is always revealed"),
        };
        self.points.insert(Time(s), v);
        v
    }

    pub fn increment(&mut self, a: f64, b: f64) -> f64 {
        let va = self.value(a);
        self.value(b) - va
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_statistics() {
        // Reveal endpoints first, then the midpoint: increments must still be
        // independent with variance equal to the time step.
        let reps = 20_000;
        let (mut s1, mut s2, mut s12) = (0.0, 0.0, 0.0);
        for r in 0..reps {
            let mut b = BrownianPath::new(r);
            let _ = b.value(2.0);
            let _ = b.value(-1.0);
            let x = b.increment(0.0, 1.0);
            let y = b.increment(1.0, 2.0);
            s1 += x * x;
            s2 += y * y;
            s12 += x * y;
        }
        let n = reps as f64;
        assert!(
            (s1 / n - 1.0).abs() < 0.04 && (s2 / n - 1.0).abs() < 0.04,
            "{} {}",
            s1 / n,
            s2 / n
        );
        assert!((s12 / n).abs() < 0.03);
    }

    #[test]
    fn values_are_cached() {
        let mut b = BrownianPath::new(3);
        let v = b.value(0.7);
        let _ = b.value(0.3);
        assert_eq!(b.value(0.7), v);
        assert_eq!(b.value(0.0), 0.0);
        let c = BrownianPath::from_points(1, &[(1.0, 2.0)]);
        assert_eq!(c.revealed(), 2);
    }
}
