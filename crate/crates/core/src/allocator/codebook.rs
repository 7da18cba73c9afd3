use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Half-open azimuth interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AzimuthSector {
    pub lo: f64,
    pub hi: f64,
}

impl AzimuthSector {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn full() -> Self {
        Self::new(-PI, PI)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, phi: f64) -> bool {
        phi > self.lo && phi <= self.hi
    }

    /// Closed search interval inside the sector: the open end is nudged up
    /// by one ulp.
    pub fn search_bounds(&self) -> (f64, f64) {
        (self.lo.next_up().min(self.hi), self.hi)
    }
}

/// `n_beams` equal azimuth sectors partitioning (-pi, pi]; beam `n` may
/// only scan inside sector `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamCodebook {
    pub n_beams: usize,
}

impl Default for BeamCodebook {
    fn default() -> Self {
        Self { n_beams: 16 }
    }
}

impl BeamCodebook {
    pub fn new(n_beams: usize) -> Self {
        Self { n_beams }
    }

    pub fn sector(&self, n: usize) -> AzimuthSector {
        assert!(n < self.n_beams, "beam {n} out of range 0..{}", self.n_beams);
        let w = 2.0 * PI / self.n_beams as f64;
        let lo = -PI + n as f64 * w;
        let hi = if n + 1 == self.n_beams {
            PI
        } else {
            -PI + (n + 1) as f64 * w
        };
        AzimuthSector::new(lo, hi)
    }

    pub fn sectors(&self) -> impl Iterator<Item = AzimuthSector> + '_ {
        (0..self.n_beams).map(|n| self.sector(n))
    }

    /// Beam whose sector holds `phi` (already wrapped to (-pi, pi]).
    pub fn beam_of(&self, phi: f64) -> usize {
        (0..self.n_beams)
            .find(|&n| self.sector(n).contains(phi))
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_partition_the_circle() {
        let cb = BeamCodebook::new(16);
        let s: Vec<_> = cb.sectors().collect();
        assert_eq!(s[0].lo, -PI);
        assert_eq!(s[15].hi, PI);
        for w in s.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert!((w[0].width() - 22.5f64.to_radians()).abs() < 1e-12);
        }
        assert_eq!(cb.beam_of(PI), 15);
        assert_eq!(cb.beam_of(-PI + 1e-9), 0);
        assert_eq!(cb.beam_of(0.0), 7);
        assert_eq!(cb.beam_of(1e-12), 8);
    }

    #[test]
    fn search_bounds_exclude_open_end() {
        let s = BeamCodebook::new(4).sector(1);
        let (lo, hi) = s.search_bounds();
        assert!(s.contains(lo) && s.contains(hi));
    }
}
