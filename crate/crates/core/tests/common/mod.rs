//! Explicit matrix oracle for crossed-product elements.
#![allow(dead_code)]

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use tglab::cyclotomic::GaussianRational;
use tglab::lattice::CrossedElement;

pub type Matrix = Vec<Vec<GaussianRational>>;

pub fn zero(n: usize) -> Matrix {
    vec![vec![Complex::new(BigRational::zero(), BigRational::zero()); n]; n]
}

/// `(aλ_g ξ)(y) = a(y) ξ(y − g)` on functions of the configurations.
pub fn matrix(x: &CrossedElement) -> Matrix {
    let group = x.group();
    let n = x.leaves();
    let size = group.points(n).unwrap();
    let mut m = zero(size);
    for (g, a) in x.terms() {
        for (yi, coeff) in a.iter().enumerate() {
            let y = group.decode(yi, n);
            let shifted: Vec<u32> = y.iter().zip(g).map(|(&y, &g)| group.sub(y, g)).collect();
            m[yi][group.encode(&shifted)] += coeff.clone();
        }
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zero(n);
    for i in 0..n {
        for (l, ail) in a[i].iter().enumerate() {
            if ail.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] += ail.clone() * b[l][j].clone();
                }
            }
        }
    }
    out
}

pub fn dagger(a: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zero(n);
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}
