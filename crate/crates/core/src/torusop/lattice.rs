use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid_param, Result};

/// Integer frequencies `k ∈ Z^d` with `|k| ≤ R`, ordered by `|k|²` and then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    d: usize,
    cutoff: f64,
    /// Flattened points, `d` coordinates each.
    coords: Vec<i64>,
}

impl LatticeBasis {
    pub fn new(d: usize, cutoff: f64) -> Result<Self> {
        check_dim(d)?;
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(invalid_param(format!("cutoff {cutoff} must be positive and finite")));
        }
        let r = cutoff.floor() as i64;
        let r2 = cutoff * cutoff;
        let mut pts: Vec<Vec<i64>> = Vec::new();
        let mut k = vec![-r; d];
        loop {
            if (norm2(&k) as f64) <= r2 {
                pts.push(k.clone());
            }
            let mut axis = d;
            loop {
                if axis == 0 {
                    pts.sort_by(|a, b| norm2(a).cmp(&norm2(b)).then_with(|| a.cmp(b)));
                    return Ok(Self {
                        d,
                        cutoff,
                        coords: pts.concat(),
                    });
                }
                axis -= 1;
                if k[axis] < r {
                    k[axis] += 1;
                    break;
                }
                k[axis] = -r;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        self.coords.chunks(self.d)
    }

    pub fn norm2(&self, i: usize) -> i64 {
        norm2(self.point(i))
    }

    /// Largest coordinate magnitude of any difference `k − l`.
    pub fn max_difference(&self) -> i64 {
        2 * self.cutoff.floor() as i64
    }

    /// `(1 + |k|²)^{−s}` for each basis vector.
    pub fn bessel_weights(&self, s: f64) -> Vec<f64> {
        (0..self.len()).map(|i| (1.0 + self.norm2(i) as f64).powf(-s)).collect()
    }

    /// The weight `(1 + |k|²)^{−d/4}`.
    pub fn weights(&self) -> Vec<f64> {
        self.bessel_weights(self.d as f64 / 4.0)
    }
}

fn norm2(k: &[i64]) -> i64 {
    k.iter().map(|x| x * x).sum()
}

/// Size of the basis with the given cutoff, without building it.
pub fn lattice_count(d: usize, cutoff: f64) -> usize {
    let r = cutoff.floor() as i64;
    let r2 = cutoff * cutoff;
    let per_line = |rest: f64| -> usize {
        if rest < 0.0 {
            0
        } else {
            2 * rest.sqrt().floor() as usize + 1
        }
    };
    match d {
        1 => per_line(r2),
        2 => (-r..=r).map(|a| per_line(r2 - (a * a) as f64)).sum(),
        _ => (-r..=r)
            .flat_map(|a| (-r..=r).map(move |b| (a, b)))
            .map(|(a, b)| per_line(r2 - (a * a + b * b) as f64))
            .sum(),
    }
}

/// Smallest cutoff whose basis has at least `n` vectors.
pub fn cutoff_for_size(d: usize, n: usize) -> f64 {
    let mut r = 1usize;
    while lattice_count(d, r as f64) < n {
        r += 1;
    }
    r as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_counts() {
        let b = LatticeBasis::new(1, 2.0).unwrap();
        let pts: Vec<i64> = b.points().map(|p| p[0]).collect();
        assert_eq!(pts, vec![0, -1, 1, -2, 2]);
        for (d, r) in [(1, 7.5), (2, 10.0), (2, 48.0), (3, 6.3)] {
            let b = LatticeBasis::new(d, r).unwrap();
            assert_eq!(b.len(), lattice_count(d, r));
            for i in 1..b.len() {
                let (p, q) = (b.point(i - 1), b.point(i));
                assert!((norm2(p), p) < (norm2(q), q));
            }
        }
        assert_eq!(lattice_count(2, 48.0), 7213);
        assert_eq!(lattice_count(2, 24.0), 1793);
    }

    #[test]
    fn rejects_bad_cutoff() {
        assert!(LatticeBasis::new(2, 0.0).is_err());
        assert!(LatticeBasis::new(4, 3.0).is_err());
    }
}
