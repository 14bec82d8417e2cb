use crate::error::{domain, Result};
use crate::scalar::{lit, Real};

/// Largest `|x|` accepted by [`bessel_jn`].
pub const BESSEL_MAX_ARGUMENT: f64 = 1e6;

/// Switch-over between the ascending series and Miller's recurrence.
const SERIES_LIMIT: f64 = 12.0;
const SERIES_MAX_TERMS: usize = 400;

/// Bessel function of the first kind `J_n(x)` for integer order.
///
/// Ascending power series for `|x| <= 12`, normalised downward (Miller)
/// recurrence beyond. Negative orders and arguments go through
/// `J_{-n}(x) = (-1)^n J_n(x)` and `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_jn<T: Real>(order: i32, x: T) -> Result<T> {
    if x.is_nan() {
        return domain("Bessel argument is NaN");
    }
    if x.abs() >= lit(BESSEL_MAX_ARGUMENT) {
        return domain(format!(
            "Bessel argument |x| = {} beyond supported range {BESSEL_MAX_ARGUMENT:e}",
            x.abs()
        ));
    }
    let n = order.unsigned_abs() as usize;
    // (-1)^n from the order reflection and again from the argument reflection
    let mut negate = order < 0 && n % 2 == 1;
    if x < T::zero() && n % 2 == 1 {
        negate = !negate;
    }
    let ax = x.abs();
    let value = if ax <= lit(SERIES_LIMIT) {
        ascending_series(n, ax)
    } else {
        miller(n, ax)
    };
    Ok(if negate { -value } else { value })
}

fn ascending_series<T: Real>(n: usize, x: T) -> T {
    if x == T::zero() {
        return if n == 0 { T::one() } else { T::zero() };
    }
    let half = x * lit(0.5);
    // (x/2)^n / n!, built incrementally so large orders underflow to zero
    // instead of overflowing an intermediate factorial
    let mut term = T::one();
    for j in 1..=n {
        term = term * half / T::from_usize(j).unwrap();
        if term == T::zero() {
            return T::zero();
        }
    }
    let q = -(half * half);
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        let kk = T::from_usize(k).unwrap();
        let kn = T::from_usize(k + n).unwrap();
        term = term * q / (kk * kn);
        sum = sum + term;
        if term.abs() <= T::epsilon() * lit(0.25) * sum.abs() {
            break;
        }
    }
    sum
}

fn miller<T: Real>(n: usize, x: T) -> T {
    let big = T::max_value().sqrt();
    let rescale = T::one() / big;
    let ax = x.to_f64().unwrap();
    let top = (n as f64).max(ax);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()) as usize;
    start += start % 2;

    let two_over_x = lit::<T>(2.0) / x;
    let mut j_next = T::zero();
    let mut j_cur = T::one();
    let mut sum = T::zero();
    let mut answer = T::zero();
    for j in (1..=start).rev() {
        // J_{j-1} = (2j/x) J_j - J_{j+1}
        let j_prev = T::from_usize(j).unwrap() * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let idx = j - 1;
        if idx == n {
            answer = j_cur;
        }
        if idx > 0 && idx % 2 == 0 {
            sum = sum + j_cur + j_cur;
        }
        if j_cur.abs() > big {
            j_cur = j_cur * rescale;
            j_next = j_next * rescale;
            sum = sum * rescale;
            answer = answer * rescale;
        }
    }
    // J_0 + 2 sum_k J_{2k} = 1
    sum = sum + j_cur;
    answer / sum
}
