//! Small numeric helpers shared by the state constructors and the optics.

/// Cumulative table of `ln n!` for `n = 0..=max`.
#[derive(Debug, Clone)]
pub struct LogFactorial {
    table: Vec<f64>,
}

impl LogFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut acc = 0.0_f64;
        table.push(0.0);
        for k in 1..=max {
            acc += (k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    #[inline]
    pub fn ln(&self, n: usize) -> f64 {
        self.table[n]
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }
}

/// Binomial coefficient as a float. Exact for every value that fits in 53 bits.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_integral()
}

trait RoundIfIntegral {
    fn round_if_integral(self) -> Self;
}

impl RoundIfIntegral for f64 {
    // products of the form acc*(n-i)/(i+1) are integers at every step, so
    // rounding only removes representation error below 2^53
    fn round_if_integral(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// `P(k | m)` for k survivors out of m trials with survival probability `eta`.
pub fn binomial_pmf(m: usize, k: usize, eta: f64) -> f64 {
    if k > m {
        return 0.0;
    }
    binomial(m, k) * eta.powi(k as i32) * (1.0 - eta).powi((m - k) as i32)
}

/// Uniform grid of `count` samples from `start` to `end`, both included.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (count - 1) as f64;
            (0..count).map(|i| start + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factorial_matches_direct_products() {
        let lf = LogFactorial::new(20);
        let mut fact = 1.0_f64;
        for n in 1..=20 {
            fact *= n as f64;
            assert!((lf.ln(n) - fact.ln()).abs() < 1e-12, "n = {n}");
        }
        assert_eq!(lf.ln(0), 0.0);
    }

    #[test]
    fn log_factorial_survives_large_arguments() {
        // 180! overflows f64; its log does not
        let lf = LogFactorial::new(400);
        assert!(lf.ln(400).is_finite());
        assert!(lf.ln(180) > 700.0);
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert!((binomial(60, 30) / 1.182_645_815_648_614_2e17 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn binomial_pmf_edges() {
        assert_eq!(binomial_pmf(3, 3, 1.0), 1.0);
        assert_eq!(binomial_pmf(3, 2, 1.0), 0.0);
        assert_eq!(binomial_pmf(3, 0, 0.0), 1.0);
        assert!((binomial_pmf(2, 1, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linspace_includes_endpoints() {
        let g = linspace(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
