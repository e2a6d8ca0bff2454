pub mod cavity;
pub mod circuit;
pub mod integrals;
pub mod pendulum;
pub mod points;
pub mod twolevel;

/// Simpson average of `f` over `[c - h/2, c + h/2]`.
pub(crate) fn bin_average(f: impl Fn(f64) -> f64, c: f64, h: f64) -> f64 {
    (f(c - 0.5 * h) + 4.0 * f(c) + f(c + 0.5 * h)) / 6.0
}
