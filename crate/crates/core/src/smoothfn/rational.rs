//! Rational factors `P(u) / (u² − 1)^m` that appear in derivatives of the
//! bump template `exp(1/(u² − 1))`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    /// Numerator coefficients in ascending powers of `u`.
    pub num: Vec<f64>,
    /// Power of `(u² − 1)` in the denominator.
    pub den_pow: u32,
}

impl Rational {
    pub fn one() -> Self {
        Self {
            num: vec![1.0],
            den_pow: 0,
        }
    }

    /// `d/du exp(1/(u²−1)) = −2u/(u²−1)² · exp(1/(u²−1))`.
    pub fn bump_log_derivative() -> Self {
        Self {
            num: vec![0.0, -2.0],
            den_pow: 2,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut num = vec![0.0; self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            for (j, b) in other.num.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        Self {
            num,
            den_pow: self.den_pow + other.den_pow,
        }
    }

    /// Derivative with respect to `u`:
    /// `(P'(u)(u²−1) − 2muP(u)) / (u²−1)^{m+1}`.
    pub fn derivative(&self) -> Self {
        let m = f64::from(self.den_pow);
        let len = self.num.len() + 2;
        let mut num = vec![0.0; len];
        // P'(u)·(u² − 1)
        for (k, c) in self.num.iter().enumerate().skip(1) {
            let d = c * k as f64;
            num[k - 1] -= d;
            num[k + 1] += d;
        }
        // −2m·u·P(u)
        for (k, c) in self.num.iter().enumerate() {
            num[k + 1] -= 2.0 * m * c;
        }
        while num.len() > 1 && num[num.len() - 1] == 0.0 {
            num.pop();
        }
        Self {
            num,
            den_pow: self.den_pow + 1,
        }
    }

    pub fn is_one(&self) -> bool {
        self.den_pow == 0 && self.num == [1.0]
    }

    /// Value at `u` with `|u| < 1`.
    pub fn eval(&self, u: f64) -> f64 {
        let p = self.num.iter().rev().fold(0.0, |acc, c| acc * u + c);
        p / (u * u - 1.0).powi(self.den_pow as i32)
    }
}
