//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are stored as rational coefficient vectors reduced modulo the
//! cyclotomic polynomial `Φ_N`, so equality and zero tests are exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type GaussianRational = Complex<BigRational>;

#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: usize,
    /// Reduced form of `x^j` for `j < order`.
    powers: Vec<Vec<BigRational>>,
}

impl CyclotomicField {
    pub fn new(order: usize) -> Arc<Self> {
        assert!(order >= 1, "order must be positive");
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut current = vec![BigRational::zero(); degree];
        current[0] = BigRational::from_integer(1.into());
        for _ in 0..order {
            powers.push(current.clone());
            // multiply by x, then fold the overflow coefficient back with phi
            let top = current[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            next[1..degree].clone_from_slice(&current[..(degree - 1)]);
            if !top.is_zero() {
                for (j, c) in phi[..degree].iter().enumerate() {
                    next[j] -= &top * BigRational::from_integer(BigInt::from(*c));
                }
            }
            current = next;
        }
        Arc::new(CyclotomicField { order, powers })
    }

    /// The smallest field holding both the `k`-th roots of unity and `i`.
    pub fn for_modulus(k: u32) -> Arc<Self> {
        Self::new((k as usize).lcm(&4))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let mut numerator = vec![0i64; n + 1];
    numerator[0] = -1;
    numerator[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            numerator = divide_monic(&numerator, &cyclotomic_polynomial(d));
        }
    }
    numerator
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: BigRational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = q;
        z
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, BigRational::from_integer(1.into()))
    }

    /// `ζ_N^j` for any integer `j`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, j: i64) -> Self {
        let idx = j.rem_euclid(field.order as i64) as usize;
        Cyclotomic {
            field: field.clone(),
            coeffs: field.powers[idx].clone(),
        }
    }

    /// `exp(2πi·m/k)`; requires `k | N`.
    pub fn character(field: &Arc<CyclotomicField>, m: i64, k: u32) -> Self {
        assert_eq!(field.order % k as usize, 0, "k must divide the field order");
        Self::root_of_unity(field, m * (field.order / k as usize) as i64)
    }

    pub fn from_gaussian(field: &Arc<CyclotomicField>, z: &GaussianRational) -> Self {
        assert_eq!(field.order % 4, 0, "field must contain i");
        let i = Self::root_of_unity(field, (field.order / 4) as i64);
        Self::from_rational(field, z.re.clone()) + i.scale(&z.im)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Complex conjugate, `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(&self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out + Self::root_of_unity(&self.field, -(j as i64)).scale(c);
            }
        }
        out
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
                Complex::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Exact rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: Cyclotomic) -> Cyclotomic {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(mut self, rhs: Cyclotomic) -> Cyclotomic {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for a in self.coeffs.iter_mut() {
            *a = -a.clone();
        }
        self
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let deg = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut out = vec![BigRational::zero(); deg];
        for (p, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if p < deg {
                out[p] += c;
            } else {
                for (o, q) in out.iter_mut().zip(&self.field.powers[p % self.field.order]) {
                    if !q.is_zero() {
                        *o += &c * q;
                    }
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let z = self.to_complex();
        write!(f, "{}{:+}i", z.re, z.im)
    }
}
