use crate::error::{Error, Result};

/// `m` uniformly spaced points from `start` to `end`, endpoints exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    spacing: f64,
}

impl Grid {
    pub fn uniform(start: f64, end: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid("grid points", format!("{m} must be >= 2")));
        }
        if !(start < end) {
            return Err(Error::invalid(
                "grid range",
                format!("start {start} must be before end {end}"),
            ));
        }
        let steps = (m - 1) as f64;
        let span = end - start;
        let mut points: Vec<f64> = (0..m).map(|i| start + span * (i as f64) / steps).collect();
        points[m - 1] = end;
        Ok(Self {
            points,
            spacing: span / steps,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Grid points merged with extra anchor positions (sensor locations),
    /// sorted and without duplicates. Anchors closer than `1e-9` of the
    /// spacing to a grid point collapse onto the grid point.
    pub fn with_anchors(&self, anchors: &[f64]) -> Vec<f64> {
        let eps = 1e-9 * self.spacing;
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        let mut merged = self.points.clone();
        for &a in anchors {
            if a < first || a > last {
                continue;
            }
            let near = merged.iter().any(|&p| (p - a).abs() <= eps);
            if !near {
                merged.push(a);
            }
        }
        merged.sort_by(f64::total_cmp);
        merged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_is_exact_at_ends() {
        let g = Grid::uniform(0.0, 10_000.0, 201).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(g.points()[200], 10_000.0);
        assert_eq!(g.spacing(), 50.0);
        for w in g.points().windows(2) {
            assert!(((w[1] - w[0]) / 50.0 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_grid_contains_origin() {
        let g = Grid::uniform(-5000.0, 5000.0, 201).unwrap();
        assert_eq!(g.points()[100], 0.0);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Grid::uniform(0.0, 1.0, 1).is_err());
        assert!(Grid::uniform(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn anchors_merge_and_dedup() {
        let g = Grid::uniform(0.0, 100.0, 5).unwrap();
        let p = g.with_anchors(&[25.0, 30.0, 30.0, 150.0]);
        assert_eq!(p, vec![0.0, 25.0, 30.0, 50.0, 75.0, 100.0]);
    }

    #[test]
    fn doubling_nests_points() {
        let coarse = Grid::uniform(0.0, 10_000.0, 21).unwrap();
        let fine = Grid::uniform(0.0, 10_000.0, 41).unwrap();
        for (i, p) in coarse.points().iter().enumerate() {
            assert_eq!(*p, fine.points()[2 * i]);
        }
    }
}
