use std::f64::consts::TAU;

use super::NumericsError;

/// Uniform time grid starting at zero.
///
/// Sample `i` sits at exactly `i * step`; the grid never accumulates the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    step: f64,
    points: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, step: f64) -> Result<Self, NumericsError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(NumericsError::InvalidGrid(format!(
                "step must be positive and finite, got {step}"
            )));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(NumericsError::InvalidGrid(format!(
                "t_end must be non-negative and finite, got {t_end}"
            )));
        }
        let intervals = (t_end / step).round();
        if intervals > 1e9 {
            return Err(NumericsError::InvalidGrid(format!(
                "{intervals} intervals is too many"
            )));
        }
        Ok(Self {
            t_end,
            step,
            points: intervals as usize + 1,
        })
    }

    /// Grid covering `periods` system periods (2π in units of 1/ω₀) with
    /// `steps_per_period` steps each.
    pub fn from_periods(periods: f64, steps_per_period: usize) -> Result<Self, NumericsError> {
        if steps_per_period == 0 {
            return Err(NumericsError::InvalidGrid(
                "steps_per_period must be at least 1".into(),
            ));
        }
        Self::new(periods * TAU, TAU / steps_per_period as f64)
    }

    pub fn t_start(&self) -> f64 {
        0.0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.time(i))
    }

    /// Index of the grid point at `t`, if `t` lies on the grid (to within a
    /// millionth of a step).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        if !t.is_finite() || t < -1e-6 * self.step {
            return None;
        }
        let k = (t / self.step).round();
        if k as usize >= self.points {
            return None;
        }
        ((t - k * self.step).abs() <= 1e-6 * self.step).then_some(k as usize)
    }

    /// The same span with half the step.
    pub fn refined(&self) -> Self {
        Self {
            t_end: self.t_end,
            step: self.step / 2.0,
            points: 2 * (self.points - 1) + 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_count_rounds() {
        let grid = TimeGrid::new(1.0, 0.01).unwrap();
        assert_eq!(grid.points(), 101);
        assert_eq!(grid.time(0), 0.0);
        assert!((grid.time(100) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn periods_grid() {
        let grid = TimeGrid::from_periods(30.0, 200).unwrap();
        assert_eq!(grid.points(), 6001);
        assert!((grid.step() - TAU / 200.0).abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(TimeGrid::new(1.0, 0.0).is_err());
        assert!(TimeGrid::new(1.0, -0.1).is_err());
        assert!(TimeGrid::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn index_lookup() {
        let grid = TimeGrid::new(1.0, 0.1).unwrap();
        assert_eq!(grid.index_of(0.3), Some(3));
        assert_eq!(grid.index_of(0.0), Some(0));
        assert_eq!(grid.index_of(0.35), None);
        assert_eq!(grid.index_of(1.1), None);
    }

    #[test]
    fn refinement_doubles_intervals() {
        let grid = TimeGrid::new(2.0, 0.1).unwrap();
        let fine = grid.refined();
        assert_eq!(fine.points(), 41);
        assert_eq!(fine.time(2 * 7), grid.time(7));
    }
}
