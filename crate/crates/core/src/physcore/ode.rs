use crate::error::{domain, PhysicsError, Result};
use crate::scalar::{lit, Real};

/// Samples `(l, y)` of a scalar trajectory, including both end points.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub samples: Vec<(T, T)>,
}

impl<T: Real> Trajectory<T> {
    pub fn final_value(&self) -> T {
        self.samples.last().map(|s| s.1).unwrap_or_else(T::nan)
    }
}

/// Classic fourth-order Runge-Kutta for `dy/dl = rhs(l, y)` with a fixed
/// step over `[span.0, span.1]`.
pub fn integrate_ode<T, F>(rhs: F, y0: T, span: (T, T), steps: usize) -> Result<Trajectory<T>>
where
    T: Real,
    F: Fn(T, T) -> T,
{
    if steps == 0 {
        return domain("ODE integration needs at least one step");
    }
    let (l0, l1) = span;
    let h = (l1 - l0) / T::from_usize(steps).unwrap();
    let half = lit::<T>(0.5);
    let sixth = T::one() / lit(6.0);
    let two = lit::<T>(2.0);

    let eval = |l: T, y: T| -> Result<T> {
        let v = rhs(l, y);
        if v.is_nan() {
            Err(PhysicsError::Numeric(format!("rhs is NaN at l = {l}, y = {y}")))
        } else {
            Ok(v)
        }
    };

    let mut samples = Vec::with_capacity(steps + 1);
    let mut y = y0;
    samples.push((l0, y));
    for i in 0..steps {
        let l = l0 + h * T::from_usize(i).unwrap();
        let k1 = eval(l, y)?;
        let k2 = eval(l + h * half, y + h * half * k1)?;
        let k3 = eval(l + h * half, y + h * half * k2)?;
        let k4 = eval(l + h, y + h * k3)?;
        y = y + h * sixth * (k1 + two * k2 + two * k3 + k4);
        let l_next = if i + 1 == steps { l1 } else { l0 + h * T::from_usize(i + 1).unwrap() };
        samples.push((l_next, y));
    }
    Ok(Trajectory { samples })
}
