//! Bessel functions of the first kind for the Chebyshev expansion of the
//! propagator.

/// `J_0(x), ..., J_{order}(x)` for `x >= 0` by Miller's backward recurrence,
/// normalized with `J_0 + 2 sum_k J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, order: usize) -> Vec<f64> {
    assert!(
        x >= 0.0 && x.is_finite(),
        "Bessel argument must be finite and non-negative"
    );
    let mut out = vec![0.0; order + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = order.max(x.ceil() as usize);
    let mut start = top + (40.0 * top as f64).sqrt() as usize + 20;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k, unnormalized
    let mut even_sum = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        // `current` now holds J_{k-1}.
        if k - 1 <= order {
            out[k - 1] = current;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            even_sum += current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = current + 2.0 * even_sum;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
