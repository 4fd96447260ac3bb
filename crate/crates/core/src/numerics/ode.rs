use super::{NumericsError, TimeGrid};

/// Fixed-step classical RK4 over `grid`, returning the state at every grid
/// point (the first entry is `y0`).
///
/// `rhs` is `FnMut` so callers can cache expensive evaluations; it is called
/// at `t`, `t + h/2` (twice) and `t + h` for each step, in that order.
pub fn ode_path<const N: usize, F>(
    mut rhs: F,
    y0: [f64; N],
    grid: &TimeGrid,
) -> Result<Vec<[f64; N]>, NumericsError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let h = grid.step();
    let mut path = Vec::with_capacity(grid.points());
    path.push(y0);

    let mut eval = |t: f64, y: &[f64; N]| {
        let dy = rhs(t, y);
        if dy.iter().all(|v| v.is_finite()) {
            Ok(dy)
        } else {
            Err(NumericsError::NonFiniteRhs { at: t })
        }
    };

    let mut y = y0;
    for i in 0..grid.points() - 1 {
        let t = grid.time(i);
        let k1 = eval(t, &y)?;
        let k2 = eval(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let k3 = eval(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let k4 = eval(grid.time(i + 1), &axpy(&y, h, &k3))?;
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        path.push(y);
    }
    Ok(path)
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for (o, d) in out.iter_mut().zip(k) {
        *o += h * d;
    }
    out
}
