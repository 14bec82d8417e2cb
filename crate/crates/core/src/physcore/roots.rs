use crate::error::{domain, PhysicsError, Result};
use crate::scalar::{as_f64, lit, Real};

const MAX_ITERATIONS: usize = 500;

/// Closed interval `[lo, hi]` expected to contain a sign change, plus the
/// relative width at which the search stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket<T> {
    lo: T,
    hi: T,
    tol: T,
}

impl<T: Real> RootBracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        Self::with_tolerance(lo, hi, lit(1e-12))
    }

    pub fn with_tolerance(lo: T, hi: T, tol: T) -> Result<Self> {
        if !(lo < hi) {
            return domain(format!("root bracket needs lo < hi, got [{lo}, {hi}]"));
        }
        if !(tol > T::zero()) {
            return domain(format!("root tolerance must be positive, got {tol}"));
        }
        Ok(Self { lo, hi, tol })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn tol(&self) -> T {
        self.tol
    }
}

/// Finds a zero of `f` inside `bracket`.
///
/// False-position steps are taken while they shrink the bracket by at least
/// half per step; otherwise the next step bisects. Deterministic for a given
/// function and bracket.
pub fn find_root<T, F>(mut f: F, bracket: &RootBracket<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(PhysicsError::Numeric("function is NaN at bracket end".into()));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(PhysicsError::Bracket {
            lo: as_f64(a),
            hi: as_f64(b),
            f_lo: as_f64(fa),
            f_hi: as_f64(fb),
        });
    }

    let half = lit::<T>(0.5);
    let mut width = b - a;
    let mut bisect = false;
    for _ in 0..MAX_ITERATIONS {
        let mid = a + (b - a) * half;
        let secant = a - fa * (b - a) / (fb - fa);
        let x = if bisect || !(secant > a && secant < b) { mid } else { secant };
        let fx = f(x);
        if fx.is_nan() {
            return Err(PhysicsError::Numeric(format!("function is NaN at x = {x}")));
        }
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        let new_width = b - a;
        bisect = new_width > width * half;
        width = new_width;
        let scale = a.abs().max(b.abs()).max(T::min_positive_value());
        if width <= bracket.tol * scale {
            break;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = find_root(|x: f64| x * x - 4.0, &RootBracket::new(0.0, 3.0).unwrap()).unwrap();
        assert!((r - 2.0).abs() < 1e-11);
        let r = find_root(|x: f64| x, &RootBracket::new(-1.0, 1.0).unwrap()).unwrap();
        assert_eq!(r, 0.0);
        let r = find_root(f64::cos, &RootBracket::new(1.0, 2.0).unwrap()).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_bracketing_interval() {
        let err = find_root(|x: f64| x * x + 1.0, &RootBracket::new(-1.0, 1.0).unwrap());
        assert!(matches!(err, Err(PhysicsError::Bracket { .. })));
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(RootBracket::new(1.0, 1.0).is_err());
        assert!(RootBracket::with_tolerance(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn tight_tolerance_on_stiff_function() {
        let b = RootBracket::with_tolerance(0.0, 10.0, 1e-15).unwrap();
        let r = find_root(|x: f64| (x - 3.3).powi(5), &b).unwrap();
        assert!((r - 3.3).abs() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let b = RootBracket::new(0.5, 7.0).unwrap();
        let f = |x: f64| x.ln() - 1.0;
        assert_eq!(find_root(f, &b).unwrap().to_bits(), find_root(f, &b).unwrap().to_bits());
    }
}
