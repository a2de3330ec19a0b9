use serde::Serialize;

use super::SL2Residue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticCount {
    pub brute: u64,
    pub closed_form: u64,
}

impl QuadraticCount {
    pub fn matches(&self) -> bool {
        self.brute == self.closed_form
    }
}

fn lemme4_closed(c: i64, n: u32) -> u64 {
    if c.rem_euclid(2) == 0 {
        1 << (n - 1)
    } else {
        3 << (n - 1)
    }
}

fn lemme2_closed(a: i64, b: i64, c: i64, d: i64, n: u32) -> u64 {
    let delta = a * c - b * b;
    let ad = a * d;
    if n == 1 {
        return 2;
    }
    if n == 2 {
        return if matches!(delta.rem_euclid(4), 2 | 3) {
            4
        } else if ad.rem_euclid(4) == 1 {
            8
        } else {
            0
        };
    }
    let ad8 = ad.rem_euclid(8);
    match delta.rem_euclid(8) {
        0 => {
            if ad8 == 1 {
                1 << (n + 2)
            } else {
                0
            }
        }
        2 | 4 | 6 => {
            if ad8 == 1 || ad8 == (1 + delta).rem_euclid(8) {
                1 << (n + 1)
            } else {
                0
            }
        }
        1 | 5 => {
            if ad8 == 1 || ad8 == 5 {
                1 << (n + 1)
            } else {
                0
            }
        }
        _ => 1 << n,
    }
}

/// Solutions (x, y) mod 2ⁿ of Ax² + Bxy + Cy² ≡ D, or of Ax² + 2Bxy + Cy² ≡ D
/// when `even_cross`, counted directly and by the closed form.
pub fn count_quadratic_solutions(a: i64, b: i64, c: i64, d: i64, n: u32, even_cross: bool) -> Result<QuadraticCount> {
    if !(1..=10).contains(&n) {
        return Err(Error::Argument(format!("exponent {} outside 1..=10", n)));
    }
    let odd = |v: i64| v.rem_euclid(2) == 1;
    if even_cross {
        if !(odd(a) && odd(d)) {
            return Err(Error::Argument("A and D must be odd".into()));
        }
    } else if !(odd(a) && odd(b) && odd(d)) {
        return Err(Error::Argument("A, B and D must be odd".into()));
    }
    let big = 1i64 << n;
    let bb = if even_cross { 2 * b } else { b };
    let mut brute = 0u64;
    for x in 0..big {
        for y in 0..big {
            if (a * x * x + bb * x * y + c * y * y - d).rem_euclid(big) == 0 {
                brute += 1;
            }
        }
    }
    let closed_form = if even_cross { lemme2_closed(a, b, c, d, n) } else { lemme4_closed(c, n) };
    Ok(QuadraticCount { brute, closed_form })
}

/// Number of elements of SL₂(Z/2^{n+1}Z) reducing to M mod 2ⁿ.
pub fn hensel_lift_count(m: &SL2Residue, max_modulus: u64) -> Result<u64> {
    let q = m.modulus;
    if !q.is_power_of_two() {
        return Err(Error::Argument(format!("modulus {} is not a power of 2", q)));
    }
    if 2 * q > max_modulus {
        return Err(Error::Resource(format!("lift modulus {} exceeds the bound {}", 2 * q, max_modulus)));
    }
    let big = 2 * q;
    let mut count = 0;
    for mask in 0..16u32 {
        let pick = |v: u64, bit: u32| v + if mask >> bit & 1 == 1 { q } else { 0 };
        let (a, b, c, d) = (pick(m.a, 0), pick(m.b, 1), pick(m.c, 2), pick(m.d, 3));
        if (a * d + big * big - (b * c) % big) % big == 1 % big {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = count_quadratic_solutions(1, 1, 1, 1, 1, false).unwrap();
        assert_eq!((r.brute, r.closed_form), (3, 3));
        let r = count_quadratic_solutions(1, 1, 2, 1, 2, false).unwrap();
        assert_eq!((r.brute, r.closed_form), (2, 2));
        let r = count_quadratic_solutions(1, 1, 1, 1, 1, true).unwrap();
        assert_eq!((r.brute, r.closed_form), (2, 2));
        assert!(count_quadratic_solutions(2, 1, 1, 1, 2, false).is_err());
    }

    #[test]
    fn lifts() {
        assert_eq!(hensel_lift_count(&SL2Residue::identity(2), 64).unwrap(), 8);
        assert_eq!(hensel_lift_count(&SL2Residue::s(4), 64).unwrap(), 8);
    }
}
