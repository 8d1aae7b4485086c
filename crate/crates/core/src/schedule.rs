//! Parameter schedules of the form `x_i = 1 - c / 2^i` and certified lower
//! bounds on their infinite products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::words::{frac_text, Frac};

/// Terms `1 - c / 2^i` for `i >= first`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(with = "frac_text")]
    pub c: Frac,
    pub first: u32,
}

/// `delta_k = 1 - 1/(40 * 2^k)`, `k >= 1`.
pub const DELTA: Schedule = Schedule {
    c: Frac::new_raw(1, 40),
    first: 1,
};

/// `alpha_i = 1 - 1/(20 * 2^i)`, `i >= 1`.
pub const ALPHA: Schedule = Schedule {
    c: Frac::new_raw(1, 20),
    first: 1,
};

/// `1 - eps_i` with `eps_i = 1/(200 * 2^i)`, `i >= 1`.
pub const ONE_MINUS_EPS: Schedule = Schedule {
    c: Frac::new_raw(1, 200),
    first: 1,
};

pub fn big(f: Frac) -> BigRational {
    BigRational::new(BigInt::from(*f.numer()), BigInt::from(*f.denom()))
}

/// `c / 2^i` as an exact fraction.
///
/// Panics when the denominator `den(c) 2^i` leaves `u64`.
pub fn defect(c: Frac, i: u32) -> Frac {
    let den = 1u64
        .checked_shl(i)
        .and_then(|p| c.denom().checked_mul(p))
        .unwrap_or_else(|| panic!("defect denominator {} * 2^{i} overflows", c.denom()));
    Frac::new(*c.numer(), den)
}

impl Schedule {
    pub fn term(&self, i: u32) -> Frac {
        assert!(i >= self.first, "schedule starts at {}", self.first);
        Frac::from_integer(1) - defect(self.c, i)
    }

    /// Lower bound `prod_{i < first + k} x_i * (1 - sum_{i >= first + k} c/2^i)`
    /// compared against `target`.
    pub fn certify(&self, exact_terms: u32, target: Frac) -> ProductCertificate {
        let mut partial = BigRational::one();
        for i in self.first..self.first + exact_terms {
            partial *= big(self.term(i));
        }
        let last = self.first + exact_terms;
        // sum_{i >= last} c / 2^i = c / 2^(last - 1)
        let tail = big(self.c) / BigRational::from_integer(BigInt::one() << (last - 1));
        let lower = &partial * (BigRational::one() - &tail);
        let target_big = big(target);
        ProductCertificate {
            exact_terms,
            partial: partial.to_string(),
            tail_sum: tail.to_string(),
            lower_bound: lower.to_string(),
            target: target_big.to_string(),
            holds: lower > target_big && !lower.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCertificate {
    pub exact_terms: u32,
    pub partial: String,
    pub tail_sum: String,
    pub lower_bound: String,
    pub target: String,
    pub holds: bool,
}
