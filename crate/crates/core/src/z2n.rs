//! Arithmetic on the group Z2^n, its characters, and the unnormalized
//! Walsh-Hadamard transform.
//!
//! Elements are bit patterns in a `u64`; bit `j` holds coordinate `j + 1`.
//! The forward transform is `v̂(a) = Σ_x v(x)·(-1)^{a·x}` with no scaling and
//! the inverse carries the full `2^-n` factor, so transforms of Boolean
//! functions stay integral.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: u32 = 30;

/// An element of Z2^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    bits: u64,
    n: u32,
}

impl GroupElement {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        check_dim(n)?;
        if bits >> n != 0 {
            return Err(Error::ElementOutOfRange { bits, n });
        }
        Ok(Self { bits, n })
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    /// The unit vector `e_{j+1}` (bit `j` set).
    pub fn unit(j: u32, n: u32) -> Result<Self> {
        if j >= n {
            return Err(Error::ElementOutOfRange { bits: 1u64 << j.min(63), n });
        }
        Self::new(1 << j, n)
    }

    /// Parses a bit string whose leftmost character is coordinate `n`.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let n = s.len() as u32;
        if n == 0 || !s.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(Error::InvalidGraph(format!("not a bit string: {s:?}")));
        }
        check_dim(n)?;
        let bits = u64::from_str_radix(s, 2).expect("validated bit string");
        Self::new(bits, n)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn dim(self) -> u32 {
        self.n
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn xor(self, other: Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self { bits: self.bits ^ other.bits, n: self.n })
    }

    pub fn dot(self, other: Self) -> Result<u8> {
        same_dim(self, other)?;
        Ok(parity(self.bits & other.bits))
    }

    pub fn character(self, x: Self) -> Result<i8> {
        Ok(sign(self.dot(x)?))
    }

    pub fn to_bit_string(self) -> String {
        bit_string(self.bits, self.n)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

fn check_dim(n: u32) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::InvalidGraph(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    Ok(())
}

fn same_dim(a: GroupElement, b: GroupElement) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

/// Parity of the population count.
#[inline]
pub fn parity(x: u64) -> u8 {
    (x.count_ones() & 1) as u8
}

#[inline]
fn sign(bit: u8) -> i8 {
    1 - 2 * bit as i8
}

/// Renders the low `n` bits, most significant first.
pub fn bit_string(bits: u64, n: u32) -> String {
    (0..n).rev().map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect()
}

/// `|x|`
pub fn hamming_weight(x: GroupElement) -> u32 {
    x.weight()
}

/// `a·b mod 2`
pub fn dot_mod2(a: GroupElement, b: GroupElement) -> Result<u8> {
    a.dot(b)
}

/// `χ_a(x) = (-1)^{a·x}`
pub fn character(a: GroupElement, x: GroupElement) -> Result<i8> {
    a.character(x)
}

/// Returns `log2(len)` or an error when `len` is not a power of two.
pub fn log2_len(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros())
}

/// In-place radix-2 butterfly computing `v̂(a) = Σ_x v(x)(-1)^{a·x}`.
pub fn fwht_in_place<T>(v: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    log2_len(v.len())?;
    let len = v.len();
    let mut half = 1;
    while half < len {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// In-place inverse: forward butterfly followed by a `2^-n` scale.
pub fn inverse_fwht_in_place<T>(v: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    fwht_in_place(v)?;
    let scale = 1.0 / v.len() as f64;
    for x in v.iter_mut() {
        *x = *x * scale;
    }
    Ok(())
}

pub fn fwht<T>(v: &[T]) -> Result<Vec<T>>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let mut out = v.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

pub fn inverse_fwht<T>(v: &[T]) -> Result<Vec<T>>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let mut out = v.to_vec();
    inverse_fwht_in_place(&mut out)?;
    Ok(out)
}

/// A {0,1}-valued function on Z2^n, stored by its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFunction {
    n: u32,
    support: Vec<u64>,
}

impl BooleanFunction {
    pub fn new(n: u32, support: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_dim(n)?;
        let mut support: Vec<u64> = support.into_iter().collect();
        if let Some(&bad) = support.iter().find(|&&x| x >> n != 0) {
            return Err(Error::ElementOutOfRange { bits: bad, n });
        }
        support.sort_unstable();
        support.dedup();
        Ok(Self { n, support })
    }

    /// `⟦x = 0_n⟧`, the identity connection.
    pub fn delta0(n: u32) -> Result<Self> {
        Self::new(n, [0])
    }

    /// `f ≡ 1`, the all-ones connection.
    pub fn all_ones(n: u32) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, 0..1u64 << n)
    }

    /// `⟦|x| = 1⟧`, the hypercube generators.
    pub fn unit_shell(n: u32) -> Result<Self> {
        Self::new(n, (0..n).map(|j| 1u64 << j))
    }

    /// `⟦x ∈ {0_n, η}⟧`
    pub fn matching(n: u32, eta: u64) -> Result<Self> {
        Self::new(n, [0, eta])
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.support.binary_search(&x).is_ok()
    }

    pub fn eval(&self, x: u64) -> u8 {
        self.contains(x) as u8
    }

    pub fn domain_size(&self) -> usize {
        1usize << self.n
    }

    pub fn to_vec_i64(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.domain_size()];
        for &x in &self.support {
            v[x as usize] = 1;
        }
        v
    }

    pub fn to_vec_f64(&self) -> Vec<f64> {
        self.to_vec_i64().into_iter().map(|x| x as f64).collect()
    }

    /// Exact integer transform `f̂`.
    pub fn fourier(&self) -> Vec<i64> {
        let mut v = self.to_vec_i64();
        fwht_in_place(&mut v).expect("power-of-two domain");
        v
    }

    /// `|supp(f̂)|`, counted without floating point.
    pub fn fourier_support_size(&self) -> usize {
        self.fourier().iter().filter(|&&x| x != 0).count()
    }

    pub fn with_element(&self, x: u64) -> Result<Self> {
        Self::new(self.n, self.support.iter().copied().chain([x]))
    }
}

/// Eigenvalues of a Z2^n-circulant indexed by character label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumZ2 {
    n: u32,
    values: Vec<f64>,
}

impl SpectrumZ2 {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1usize << n {
            return Err(Error::InvalidGraph(format!(
                "spectrum of length {} for dimension {n}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    /// `λ_a = scale · f̂(a)`
    pub fn of_circulant(f: &BooleanFunction, scale: f64) -> Self {
        let values = f.fourier().into_iter().map(|x| scale * x as f64).collect();
        Self { n: f.dim(), values }
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: u64) -> f64 {
        self.values[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupElement {
        GroupElement::from_bit_str(s).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(g("000")), 0);
        assert_eq!(hamming_weight(g("101")), 2);
        assert_eq!(hamming_weight(g("111")), 3);
    }

    #[test]
    fn dot_products() {
        assert_eq!(dot_mod2(g("110"), g("101")).unwrap(), 1);
        assert_eq!(dot_mod2(g("110"), g("000")).unwrap(), 0);
        assert_eq!(dot_mod2(g("111"), g("110")).unwrap(), 0);
        assert!(matches!(
            dot_mod2(g("11"), g("110")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn characters() {
        for x in 0..8 {
            assert_eq!(character(g("000"), GroupElement::new(x, 3).unwrap()).unwrap(), 1);
        }
        assert_eq!(character(g("11"), g("10")).unwrap(), -1);
        for n in 1..6u32 {
            for a in 0..1u64 << n {
                let a = GroupElement::new(a, n).unwrap();
                let sum: i64 = (0..1u64 << n)
                    .map(|x| character(a, GroupElement::new(x, n).unwrap()).unwrap() as i64)
                    .sum();
                assert_eq!(sum, if a.is_zero() { 1 << n } else { 0 });
            }
        }
    }

    #[test]
    fn element_validation() {
        assert!(GroupElement::new(8, 3).is_err());
        assert!(GroupElement::from_bit_str("10a").is_err());
        assert!(GroupElement::from_bit_str("").is_err());
        assert_eq!(g("110").bits(), 6);
        assert_eq!(g("110").to_string(), "110");
        assert_eq!(GroupElement::unit(2, 3).unwrap(), g("100"));
        let x = g("101");
        assert!(x.xor(x).unwrap().is_zero());
    }

    #[test]
    fn transform_examples() {
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        assert_eq!(fwht(&delta).unwrap(), vec![1.0; 8]);

        let shell = BooleanFunction::unit_shell(3).unwrap().fourier();
        for (a, &v) in shell.iter().enumerate() {
            assert_eq!(v, 3 - 2 * (a as u64).count_ones() as i64);
        }

        assert_eq!(BooleanFunction::new(2, [0, 3]).unwrap().fourier(), vec![2, 0, 0, 2]);
        assert_eq!(fwht(&[1i64; 4]).unwrap(), vec![4, 0, 0, 0]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            inverse_fwht(&[1.0; 8]).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(inverse_fwht(&[2.0, 0.0, 0.0, 2.0]).unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
        let v: Vec<f64> = (0..16).map(|i| ((i * 37 % 11) as f64).sin()).collect();
        let back = inverse_fwht(&fwht(&v).unwrap()).unwrap();
        for (x, y) in v.iter().zip(&back) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert_eq!(fwht(&[1.0; 6]), Err(Error::NotPowerOfTwo(6)));
        assert_eq!(inverse_fwht::<f64>(&[]), Err(Error::NotPowerOfTwo(0)));
    }

    #[test]
    fn named_functions() {
        assert_eq!(BooleanFunction::all_ones(3).unwrap().fourier_support_size(), 1);
        assert_eq!(BooleanFunction::delta0(3).unwrap().fourier(), vec![1; 8]);
        let m = BooleanFunction::matching(3, 0b101).unwrap();
        assert_eq!(m.fourier_support_size(), 4);
        assert!(BooleanFunction::new(2, [4]).is_err());
        assert_eq!(BooleanFunction::new(3, [5, 1, 5]).unwrap().support(), &[1, 5]);
    }
}
