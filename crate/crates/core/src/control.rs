//! Control functions for the classes `C_f`, in exact rational arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Rule {
    /// `f(k) = n + scale * H_{k-1}` for `k >= 1`.
    Harmonic { scale: BigRational },
    /// Tabulated values, continued with `f(k) = f(k-1) + 1/(k-1)`.
    Table(Vec<BigRational>),
}

/// A control function `f` with `f(0) = 0` and `f(1) = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlFunction {
    n: u32,
    name: String,
    rule: Rule,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ControlFunction {
    /// `f(k) = n + H_{k-1}`: `f(1) = n`, `f(k) = f(k-1) + 1/(k-1)`.
    pub fn harmonic(n: u32) -> Self {
        ControlFunction {
            n,
            name: "harmonic".into(),
            rule: Rule::Harmonic {
                scale: BigRational::one(),
            },
        }
    }

    /// `f(k) = n + (p/q) H_{k-1}` with `0 < p/q <= 1`.
    pub fn scaled_harmonic(n: u32, p: i64, q: i64) -> Result<Self> {
        if p <= 0 || q <= 0 || p > q {
            return input(format!("harmonic scale {p}/{q} must lie in (0, 1]"));
        }
        let scale = ratio(p, q);
        let name = if scale.is_one() {
            "harmonic".to_string()
        } else {
            format!("harmonic*{scale}")
        };
        Ok(ControlFunction {
            n,
            name,
            rule: Rule::Harmonic { scale },
        })
    }

    /// Tabulated `f(0), f(1), ...`; must start `0, n`.
    pub fn table(n: u32, name: &str, values: Vec<BigRational>) -> Result<Self> {
        if values.len() < 2 || !values[0].is_zero() || values[1] != BigRational::from_integer(n.into()) {
            return input("a control table must start with f(0) = 0, f(1) = n");
        }
        let f = ControlFunction {
            n,
            name: name.into(),
            rule: Rule::Table(values),
        };
        f.check_good(f.tabulated_len().max(8))?;
        Ok(f)
    }

    /// Parses `harmonic` or `harmonic*p/q`.
    pub fn parse(name: &str, n: u32) -> Result<Self> {
        match name.strip_prefix("harmonic") {
            Some("") => Ok(Self::harmonic(n)),
            Some(rest) => {
                let frac = rest
                    .strip_prefix('*')
                    .ok_or_else(|| crate::Error::Input(format!("unknown control function {name}")))?;
                let (p, q) = frac.split_once('/').unwrap_or((frac, "1"));
                let p: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Input(format!("bad scale in {name}")))?;
                let q: i64 = q
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Input(format!("bad scale in {name}")))?;
                Self::scaled_harmonic(n, p, q)
            }
            None => input(format!("unknown control function {name}")),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn tabulated_len(&self) -> usize {
        match &self.rule {
            Rule::Harmonic { .. } => 0,
            Rule::Table(v) => v.len(),
        }
    }

    /// Exact value `f(k)`.
    pub fn eval(&self, k: usize) -> BigRational {
        if k == 0 {
            return BigRational::zero();
        }
        match &self.rule {
            Rule::Harmonic { scale } => {
                let mut h = BigRational::zero();
                for j in 1..k {
                    h += ratio(1, j as i64);
                }
                BigRational::from_integer(self.n.into()) + scale * h
            }
            Rule::Table(values) => {
                if k < values.len() {
                    return values[k].clone();
                }
                let mut v = values.last().expect("non-empty").clone();
                for j in values.len()..=k {
                    v += ratio(1, j as i64 - 1);
                }
                v
            }
        }
    }

    /// `f(0..=max)`.
    pub fn values(&self, max: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(max + 1);
        for k in 0..=max {
            if k >= 2 && self.tabulated_len() <= k {
                let step = self.increment(k);
                let prev: &BigRational = &out[k - 1];
                out.push(prev + step);
            } else {
                out.push(self.eval(k));
            }
        }
        out
    }

    /// `f(k) - f(k-1)` for `k >= 1`.
    pub fn increment(&self, k: usize) -> BigRational {
        match &self.rule {
            Rule::Harmonic { scale } if k >= 2 => scale * ratio(1, k as i64 - 1),
            Rule::Table(v) if k >= v.len() && k >= 2 => ratio(1, k as i64 - 1),
            _ => self.eval(k) - self.eval(k - 1),
        }
    }

    /// `ceil(f(k))` for `k` in `0..=max`. An integer predimension `d`
    /// satisfies `d >= f(k)` exactly when `d >= ceil(f(k))`.
    pub fn ceilings(&self, max: usize) -> Vec<i64> {
        self.values(max)
            .iter()
            .map(|v| v.ceil().to_integer().to_i64().expect("control value fits i64"))
            .collect()
    }

    /// Checks the discrete goodness conditions on `0..=max`: positive,
    /// non-increasing increments from `k = 2` on, increment at `k` at most
    /// `1/(k-1)`, and `f(x+y) <= f(x) + y (f(x+1) - f(x))`.
    pub fn check_good(&self, max: usize) -> Result<()> {
        let v = self.values(max + 1);
        let inc = |k: usize| &v[k] - &v[k - 1];
        if !v[0].is_zero() || v[1] != BigRational::from_integer(self.n.into()) {
            return input("control function must have f(0) = 0 and f(1) = n");
        }
        for k in 2..=max {
            let d = inc(k);
            if !d.is_positive() {
                return input(format!("{}: increment at {k} is not positive", self.name));
            }
            if d > ratio(1, k as i64 - 1) {
                return input(format!("{}: increment at {k} exceeds 1/{}", self.name, k - 1));
            }
            if k >= 3 && d > inc(k - 1) {
                return input(format!("{}: increments increase at {k}", self.name));
            }
        }
        for x in 0..max {
            let slope = inc(x + 1);
            for y in 1..=max - x {
                if v[x + y] > &v[x] + &slope * BigRational::from_integer(BigInt::from(y)) {
                    return input(format!("{}: concavity fails at x = {x}, y = {y}", self.name));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ControlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.name, self.n)
    }
}

/// `num/den` in lowest terms, as text.
pub fn show(q: &BigRational) -> String {
    let g = q.numer().gcd(q.denom());
    let (n, d) = (q.numer() / &g, q.denom() / &g);
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        let f = ControlFunction::harmonic(2);
        assert_eq!(f.eval(0), ratio(0, 1));
        assert_eq!(f.eval(1), ratio(2, 1));
        assert_eq!(f.eval(2), ratio(3, 1));
        assert_eq!(f.eval(3), ratio(7, 2));
        assert_eq!(f.eval(4), ratio(23, 6));
        assert_eq!(f.values(4), (0..=4).map(|k| f.eval(k)).collect::<Vec<_>>());
        assert_eq!(f.ceilings(4), vec![0, 2, 3, 4, 4]);
    }

    #[test]
    fn harmonic_families_are_good() {
        for n in 1..4 {
            ControlFunction::harmonic(n).check_good(40).unwrap();
            ControlFunction::scaled_harmonic(n, 1, 2)
                .unwrap()
                .check_good(40)
                .unwrap();
        }
    }

    #[test]
    fn tables_extend_and_reject_bad_values() {
        let t = ControlFunction::table(2, "t", vec![ratio(0, 1), ratio(2, 1), ratio(5, 2)]).unwrap();
        assert_eq!(t.eval(3), ratio(3, 1));
        assert_eq!(t.eval(4), ratio(10, 3));
        assert!(ControlFunction::table(2, "steep", vec![ratio(0, 1), ratio(2, 1), ratio(4, 1)]).is_err());
        assert!(ControlFunction::table(2, "off", vec![ratio(0, 1), ratio(1, 1)]).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            ControlFunction::parse("harmonic", 2).unwrap(),
            ControlFunction::harmonic(2)
        );
        let half = ControlFunction::parse("harmonic*1/2", 1).unwrap();
        assert_eq!(half.eval(3), ratio(7, 4));
        assert!(ControlFunction::parse("linear", 1).is_err());
        assert!(ControlFunction::parse("harmonic*3/2", 1).is_err());
        assert_eq!(show(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn harmonic_is_subadditive() {
        let f = ControlFunction::harmonic(1);
        let v = f.values(30);
        for a in 1..15 {
            for b in 1..15 {
                assert!(v[a + b] <= &v[a] + &v[b]);
            }
        }
    }
}
