use super::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Rising,
    Falling,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Rising => Direction::Falling,
            Direction::Falling => Direction::Rising,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub time: f64,
    pub direction: Direction,
}

/// Times at which the sampled `series` crosses `level`.
///
/// Crossings between two samples are placed by linear interpolation. A run of
/// samples sitting exactly on `level` is a single crossing, located at the
/// first sample of the run, and only if the samples on either side of the run
/// lie on opposite sides of `level`.
pub fn find_crossings(grid: &TimeGrid, series: &[f64], level: f64) -> Vec<Crossing> {
    let n = series.len().min(grid.points());
    let mut out = Vec::new();
    // last sample strictly off the level: (index, offset)
    let mut prev: Option<(usize, f64)> = None;

    for (i, &x) in series[..n].iter().enumerate() {
        let d = x - level;
        if d == 0.0 || d.is_nan() {
            continue;
        }
        if let Some((j, dp)) = prev {
            if (dp < 0.0) != (d < 0.0) {
                let direction = if d > 0.0 {
                    Direction::Rising
                } else {
                    Direction::Falling
                };
                let time = if i == j + 1 {
                    let (t0, t1) = (grid.time(j), grid.time(i));
                    t0 + (t1 - t0) * dp / (dp - d)
                } else {
                    grid.time(j + 1)
                };
                out.push(Crossing { time, direction });
            }
        }
        prev = Some((i, d));
    }
    out
}
