/// Classic fourth-order Runge-Kutta for a scalar ODE `y' = f(t, y)`.
///
/// Takes `ceil((t_end - t0) / dt)` equal steps so the last one ends exactly
/// on `t_end`. Returns `y0` when `t_end <= t0`.
pub fn rk4(f: impl Fn(f64, f64) -> f64, t0: f64, y0: f64, t_end: f64, dt: f64) -> f64 {
    let span = t_end - t0;
    if !(span > 0.0) {
        return y0;
    }
    let steps = (span / dt).ceil().max(1.0) as u64;
    let h = span / steps as f64;
    let mut y = y0;
    for n in 0..steps {
        let t = t0 + n as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}
