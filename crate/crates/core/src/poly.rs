//! Exact univariate polynomials over the rationals, rational functions,
//! and real-root isolation by Sturm sequences.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial with coefficients stored lowest power first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Poly {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Positive rational multiple of `self` with coprime integer coefficients.
    pub fn primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let seq = self.sturm();
        let changes = |x: &Q| {
            let signs: Vec<bool> =
                seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(a).saturating_sub(changes(b))
    }

    /// Distinct real roots strictly inside `(a, b)`.
    pub fn count_roots_open(&self, a: &Q, b: &Q) -> usize {
        let n = self.count_roots(a, b);
        n - usize::from(self.eval(b).is_zero())
    }

    /// Isolates every distinct root in `(a, b)` to intervals of width at most `tol`.
    pub fn isolate_roots(&self, a: &Q, b: &Q, tol: &Q) -> Vec<(Q, Q)> {
        let mut out = Vec::new();
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count_roots_open(&lo, &hi);
            if n == 0 {
                continue;
            }
            let mid = (&lo + &hi) / q(2, 1);
            if self.eval(&mid).is_zero() {
                out.push((mid.clone(), mid.clone()));
            }
            if n == 1 && &hi - &lo <= *tol {
                if !self.eval(&mid).is_zero() {
                    out.push((lo, hi));
                }
                continue;
            }
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out.dedup();
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                    a + o.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o.clone())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show = i == 0 || !a.is_one();
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "f")?,
                _ => write!(f, "f^{i}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of two polynomials, kept in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lead = den.leading();
        RatFn { num: num.scale(&(Q::one() / &lead)), den: den.scale(&(Q::one() / lead)) }
    }

    pub fn poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn zero() -> RatFn {
        RatFn::poly(Poly::zero())
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone());
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFn {
        RatFn::new(&self.num * p, self.den.clone())
    }

    pub fn div_poly(&self, p: &Poly) -> RatFn {
        RatFn::new(self.num.clone(), &self.den * p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let p = Poly::from_ints(&[-1, 1, 2]);
        let r = Poly::from_ints(&[1, 1]);
        assert_eq!(&p * &r, Poly::from_ints(&[-1, 0, 3, 2]));
        assert_eq!((&p * &r).div_rem(&r), (p.clone(), Poly::zero()));
        assert_eq!(p.to_string(), "2f^2 + f - 1");
        assert_eq!(p.eval(&q(1, 2)), q(0, 1));
    }

    #[test]
    fn primitive_is_positive_multiple() {
        let p = Poly::new(vec![q(-1, 1), q(1, 1), q(2, 1), q(-1, 2)]);
        let ints: Vec<i64> = p.primitive().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![-2, 2, 4, -1]);
    }

    #[test]
    fn sturm_counts_roots() {
        // (x - 1/4)(x - 1/2)(x - 2)
        let p = &(&Poly::new(vec![q(-1, 4), q(1, 1)]) * &Poly::new(vec![q(-1, 2), q(1, 1)]))
            * &Poly::new(vec![q(-2, 1), q(1, 1)]);
        assert_eq!(p.count_roots_open(&q(0, 1), &q(1, 1)), 2);
        assert_eq!(p.count_roots_open(&q(0, 1), &q(1, 2)), 1);
        let roots = p.isolate_roots(&q(0, 1), &q(1, 1), &q(1, 1_000_000));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], (q(1, 4), q(1, 4)));
    }

    #[test]
    fn isolates_irrational_root() {
        let p = Poly::new(vec![q(-1, 1), q(1, 1), q(2, 1), q(-1, 2)]);
        let roots = p.isolate_roots(&q(0, 1), &q(1, 1), &q(1, 1_000_000));
        assert_eq!(roots.len(), 1);
        let mid = ((&roots[0].0 + &roots[0].1) / q(2, 1)).to_f64().unwrap();
        assert!((mid - 0.52355).abs() < 1e-4, "{mid}");
    }

    #[test]
    fn ratfn_reduces() {
        let a = RatFn::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 1]));
        let b = RatFn::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 2]));
        let s = a.add(&b);
        assert_eq!(s.eval(&q(1, 1)), Some(q(3, 2)));
        assert_eq!(s.den, Poly::x());
    }
}
