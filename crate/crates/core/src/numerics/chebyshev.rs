/// Chebyshev polynomial of the first kind, `T_n(cos θ) = cos(nθ)`.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Chebyshev polynomial of the second kind, `P_n(cos θ)·sin θ = sin((n+1)θ)`.
///
/// `P_{-1}` is the zero polynomial, which is what the recurrence gives when
/// stepped back from `P_0 = 1`, `P_1 = 2x`.
pub fn chebyshev_p(n: isize, x: f64) -> f64 {
    match n {
        n if n < 0 => 0.0,
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 * x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_orders() {
        assert_eq!(chebyshev_t(0, 0.3), 1.0);
        assert_eq!(chebyshev_p(0, 0.3), 1.0);
        assert!((chebyshev_t(3, 0.5) + 1.0).abs() < 1e-15);
        assert_eq!(chebyshev_p(1, 0.25), 0.5);
        assert_eq!(chebyshev_p(-1, 0.25), 0.0);
    }

    #[test]
    fn match_trigonometric_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let x = theta.cos();
            for n in 0..=64usize {
                let t = chebyshev_t(n, x);
                assert!((t - (n as f64 * theta).cos()).abs() < 1e-12, "T_{n}");
                let p = chebyshev_p(n as isize, x) * theta.sin();
                assert!(
                    (p - ((n + 1) as f64 * theta).sin()).abs() < 1e-12,
                    "P_{n} at θ={theta}"
                );
            }
        }
    }
}
