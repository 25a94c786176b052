//! Integer-order Bessel functions `J_n`, `I_n` and the logarithmic-derivative
//! multipliers used by the Helmholtz Dirichlet-to-Neumann map on the disk.
//!
//! Values come from the ascending series for |x| <= 12 (J) and for all x (I,
//! whose series has no cancellation). Beyond 12, `J_n` is evaluated by Miller's
//! downward recurrence normalised with `J_0 + 2 sum J_2k = 1`.

const SERIES_LIMIT: f64 = 12.0;

/// Ascending series sum_k (∓1)^k (x/2)^{2k+n} / (k! (n+k)!).
fn series(n: u32, x: f64, alternating: bool) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = half * half;
    let sign = if alternating { -1.0 } else { 1.0 };
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= sign * q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() || k > 500 {
            break;
        }
    }
    sum
}

fn miller_j(n: u32, x: f64) -> f64 {
    let start = 2 * ((n.max(x as u32) + 40 + (x.sqrt() * 8.0) as u32) / 2);
    let mut above = 0.0f64;
    let mut current = 1e-300f64;
    let mut wanted = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        // `current` now holds the unnormalised J_{k-1}
        let order = k - 1;
        if order == n {
            wanted = current;
        }
        if order % 2 == 0 {
            norm += if order == 0 { current } else { 2.0 * current };
        }
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            wanted *= 1e-250;
            norm *= 1e-250;
        }
    }
    wanted / norm
}

/// Bessel function of the first kind, integer order.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    let parity = if n < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let (ax, xsign) = if x < 0.0 { (-x, if order % 2 == 1 { -1.0 } else { 1.0 }) } else { (x, 1.0) };
    if ax == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let v = if ax <= SERIES_LIMIT { series(order, ax, true) } else { miller_j(order, ax) };
    parity * xsign * v
}

/// Modified Bessel function of the first kind, integer order.
pub fn bessel_i(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    let (ax, xsign) = if x < 0.0 { (-x, if order % 2 == 1 { -1.0 } else { 1.0 }) } else { (x, 1.0) };
    if ax == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    xsign * series(order, ax, false)
}

/// Ratios `J_{n+1}(x)/J_n(x)` for n = 0..=n_max by backward recurrence
/// (the continued fraction for consecutive ratios).
fn j_ratios(n_max: usize, x: f64) -> Vec<f64> {
    let top = n_max + 60 + x.ceil() as usize;
    // r holds J_{k}/J_{k-1} while descending
    let mut r = 0.0;
    let mut out = vec![0.0; n_max + 1];
    for k in (1..=top).rev() {
        r = 1.0 / (2.0 * k as f64 / x - r);
        if k - 1 <= n_max {
            out[k - 1] = r;
        }
    }
    out
}

fn i_ratios(n_max: usize, x: f64) -> Vec<f64> {
    let top = n_max + 60 + x.ceil() as usize;
    let mut r = 0.0;
    let mut out = vec![0.0; n_max + 1];
    for k in (1..=top).rev() {
        r = 1.0 / (2.0 * k as f64 / x + r);
        if k - 1 <= n_max {
            out[k - 1] = r;
        }
    }
    out
}

/// Radial DtN multipliers `R'_n(1)/R_n(1)` for modes n = 0..=n_max, where
/// `R_n` solves the radial Helmholtz equation `-Δ(R_n e^{inθ}) = s R_n e^{inθ}`
/// regular at the origin:
/// `|n|` for s = 0, `k J_n'(k)/J_n(k)` for s = k² > 0, `k I_n'(k)/I_n(k)` for s = -k² < 0.
pub fn dtn_multipliers(n_max: usize, s: f64) -> Vec<f64> {
    if s == 0.0 {
        return (0..=n_max).map(|n| n as f64).collect();
    }
    let k = s.abs().sqrt();
    if s > 0.0 {
        // J_n' = (n/k) J_n - J_{n+1}
        j_ratios(n_max, k)
            .into_iter()
            .enumerate()
            .map(|(n, ratio)| n as f64 - k * ratio)
            .collect()
    } else {
        // I_n' = (n/k) I_n + I_{n+1}
        i_ratios(n_max, k)
            .into_iter()
            .enumerate()
            .map(|(n, ratio)| n as f64 + k * ratio)
            .collect()
    }
}

/// Radial profile `R_n(ρ)/R_n(1)` of the regular Helmholtz solution of mode n.
pub fn radial_profile(n: usize, s: f64, rho: f64) -> f64 {
    if s == 0.0 {
        return rho.powi(n as i32);
    }
    let k = s.abs().sqrt();
    if s > 0.0 {
        bessel_j(n as i32, k * rho) / bessel_j(n as i32, k)
    } else {
        bessel_i(n as i32, k * rho) / bessel_i(n as i32, k)
    }
}

/// Derivative in ρ of [`radial_profile`].
pub fn radial_profile_derivative(n: usize, s: f64, rho: f64) -> f64 {
    if s == 0.0 {
        return if n == 0 { 0.0 } else { n as f64 * rho.powi(n as i32 - 1) };
    }
    let k = s.abs().sqrt();
    let x = k * rho;
    let ni = n as i32;
    if s > 0.0 {
        let d = if n == 0 {
            -bessel_j(1, x)
        } else {
            0.5 * (bessel_j(ni - 1, x) - bessel_j(ni + 1, x))
        };
        k * d / bessel_j(ni, k)
    } else {
        let d = if n == 0 {
            bessel_i(1, x)
        } else {
            0.5 * (bessel_i(ni - 1, x) + bessel_i(ni + 1, x))
        };
        k * d / bessel_i(ni, k)
    }
}

/// First zero of `J_0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tabulated_values() {
        assert_relative_eq!(bessel_j(0, 1.0), 0.765_197_686_557_966_6, max_relative = 1e-14);
        assert_relative_eq!(bessel_j(1, 1.0), 0.440_050_585_744_933_5, max_relative = 1e-14);
        assert_relative_eq!(bessel_j(5, 3.0), 0.043_028_434_877_047_58, max_relative = 1e-12);
        assert_relative_eq!(bessel_j(0, 10.0), -0.245_935_764_451_348_3, max_relative = 1e-11);
        assert_relative_eq!(bessel_j(0, 15.0), -0.014_224_472_826_780_745, max_relative = 1e-9);
        assert_relative_eq!(bessel_j(3, 20.0), -0.098_901_394_560_449_58, max_relative = 1e-9);
        assert_relative_eq!(bessel_i(0, 1.0), 1.266_065_877_752_008_4, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(1, 1.0), 0.565_159_103_992_485_1, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(2, 5.0), 17.505_614_966_624_236, max_relative = 1e-13);
        assert!(bessel_j(0, J0_FIRST_ZERO).abs() < 1e-15);
    }

    #[test]
    fn negative_orders_and_arguments() {
        assert_relative_eq!(bessel_j(-3, 2.0), -bessel_j(3, 2.0));
        assert_relative_eq!(bessel_j(3, -2.0), -bessel_j(3, 2.0));
        assert_relative_eq!(bessel_i(2, -1.5), bessel_i(2, 1.5));
    }

    #[test]
    fn multipliers_match_direct_ratios() {
        for &s in &[0.3, 2.0, 5.0, -0.7, -9.0, -400.0] {
            let m = dtn_multipliers(12, s);
            let k = f64::abs(s).sqrt();
            for n in 0..=6usize {
                let direct = if s > 0.0 {
                    k * (n as f64 / k * bessel_j(n as i32, k) - bessel_j(n as i32 + 1, k))
                        / bessel_j(n as i32, k)
                } else {
                    k * (n as f64 / k * bessel_i(n as i32, k) + bessel_i(n as i32 + 1, k))
                        / bessel_i(n as i32, k)
                };
                assert_relative_eq!(m[n], direct, max_relative = 1e-11, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn multipliers_tend_to_mode_number() {
        let m = dtn_multipliers(40, 1e-9);
        for (n, v) in m.iter().enumerate() {
            assert!((v - n as f64).abs() < 1e-8, "n={n} v={v}");
        }
    }

    #[test]
    fn profile_derivative_matches_difference() {
        for &s in &[0.0, 1.7, -3.0] {
            for n in [0usize, 1, 4] {
                let h = 1e-6;
                let fd = (radial_profile(n, s, 0.6 + h) - radial_profile(n, s, 0.6 - h)) / (2.0 * h);
                assert_relative_eq!(radial_profile_derivative(n, s, 0.6), fd, max_relative = 1e-7);
            }
        }
    }
}
