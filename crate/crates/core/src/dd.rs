//! Double-double floating point, enough to take fractional parts of large
//! irrational angles without losing the digits that matter.

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for `|x| < 2^106`.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let rest = x - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        Self { hi, lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    /// `√m` to about 32 significant digits.
    pub fn sqrt_u64(m: u64) -> Dd {
        let x = Dd::from_i128(m as i128);
        let hi = (m as f64).sqrt();
        // one Newton step: hi + (m - hi²) / (2 hi)
        let (p, e) = two_prod(hi, hi);
        let resid = x.sub(Dd { hi: p, lo: e });
        let corr = resid.hi / (2.0 * hi);
        let (hi, lo) = quick_two_sum(hi, corr);
        Dd { hi, lo }
    }

    /// The fractional part, in `[0, 1)`.
    pub fn frac(self) -> Dd {
        let f = self.hi.floor();
        let mut r = self.sub(Dd::from_f64(f));
        if r.hi < 0.0 {
            r = r.add(Dd::from_f64(1.0));
        }
        if r.hi >= 1.0 {
            r = r.sub(Dd::from_f64(1.0));
        }
        r
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_digits() {
        let r = Dd::sqrt_u64(2);
        let sq = r.mul(r).sub(Dd::from_f64(2.0));
        assert!(sq.to_f64().abs() < 1e-30);
    }

    #[test]
    fn fractional_part_of_large_multiple() {
        // 10^6 · √2 = 1414213.5623730950488016887…
        let x = Dd::sqrt_u64(2).mul(Dd::from_i128(1_000_000)).frac();
        assert!((x.to_f64() - 0.562_373_095_048_801_7).abs() < 1e-15);
    }

    #[test]
    fn division() {
        let third = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let back = third.mul(Dd::from_f64(3.0)).sub(Dd::from_f64(1.0));
        assert!(back.to_f64().abs() < 1e-31);
    }
}
