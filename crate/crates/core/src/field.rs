//! Exact arithmetic in a real quadratic field.
//!
//! Elements are stored as `(p + q*sqrt(D)) / r` with arbitrary-precision
//! integer coordinates, normalized so that `r >= 1` and `gcd(p, q, r) = 1`.
//! Every comparison in the crate reduces to [`QElem::signum`], which decides
//! the sign of `p + q*sqrt(D)` by comparing `p^2` against `q^2 * D`; no
//! floating point is involved in any decision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("discriminant must be positive, got {0}")]
    NonPositiveDisc(Int),
    #[error("discriminant {0} is a perfect square")]
    SquareDisc(Int),
    #[error("discriminant {0} is not congruent to 0 or 1 mod 4")]
    BadResidue(Int),
    #[error("division by the zero element")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    CtxMismatch,
}

#[derive(Debug)]
struct CtxInner {
    disc: Int,
    sqrt_floor: Int,
}

/// A real quadratic field fixed by its discriminant `D`: positive,
/// not a perfect square, and `D = 0 or 1 (mod 4)`.
///
/// Cheap to clone; every [`QElem`] carries one.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<CtxInner>,
}

impl FieldCtx {
    pub fn new(disc: impl Into<Int>) -> Result<Self, FieldError> {
        let disc: Int = disc.into();
        if !disc.is_positive() {
            return Err(FieldError::NonPositiveDisc(disc));
        }
        let m4 = (&disc % 4u8).to_u8().unwrap();
        if m4 != 0 && m4 != 1 {
            return Err(FieldError::BadResidue(disc));
        }
        let sqrt_floor = disc.sqrt();
        if &sqrt_floor * &sqrt_floor == disc {
            return Err(FieldError::SquareDisc(disc));
        }
        Ok(FieldCtx {
            inner: Arc::new(CtxInner { disc, sqrt_floor }),
        })
    }

    pub fn disc(&self) -> &Int {
        &self.inner.disc
    }

    /// `floor(sqrt(D))`.
    pub fn sqrt_disc_floor(&self) -> &Int {
        &self.inner.sqrt_floor
    }

    /// The element `sqrt(D)`.
    pub fn sqrt_disc(&self) -> QElem {
        self.elem(0, 1, 1)
    }

    /// Builds `(p + q*sqrt(D)) / r`, normalizing. Panics if `r = 0`.
    pub fn elem(&self, p: impl Into<Int>, q: impl Into<Int>, r: impl Into<Int>) -> QElem {
        QElem::new(self.clone(), p.into(), q.into(), r.into())
    }

    pub fn from_int(&self, n: impl Into<Int>) -> QElem {
        self.elem(n, 0, 1)
    }

    pub fn from_rat(&self, x: &Rat) -> QElem {
        self.elem(x.numer().clone(), 0, x.denom().clone())
    }

    pub fn zero(&self) -> QElem {
        self.from_int(0)
    }

    pub fn one(&self) -> QElem {
        self.from_int(1)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.disc == other.inner.disc
    }
}
impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(disc={})", self.inner.disc)
    }
}

/// An exact field element `(p + q*sqrt(D)) / r`.
///
/// Invariants: `r >= 1`, `gcd(p, q, r) = 1`, zero is `(0, 0, 1)`.
/// Equality is structural, which after normalization coincides with equality
/// of real values.
#[derive(Clone, PartialEq, Eq)]
pub struct QElem {
    ctx: FieldCtx,
    p: Int,
    q: Int,
    r: Int,
}

impl QElem {
    pub fn new(ctx: FieldCtx, p: Int, q: Int, mut r: Int) -> Self {
        assert!(!r.is_zero(), "denominator must be nonzero");
        let (mut p, mut q) = (p, q);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one_like() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QElem { ctx, p, q, r }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn p(&self) -> &Int {
        &self.p
    }
    pub fn q(&self) -> &Int {
        &self.q
    }
    pub fn r(&self) -> &Int {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// The image under the nontrivial embedding: `q` changes sign.
    pub fn conj(&self) -> QElem {
        QElem {
            ctx: self.ctx.clone(),
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
        }
    }

    /// `(p^2 - q^2 D) / r^2`, the product of the two embeddings.
    pub fn norm(&self) -> Rat {
        let num = &self.p * &self.p - &self.q * &self.q * self.ctx.disc();
        Rat::new(num, &self.r * &self.r)
    }

    /// `2p / r`, the sum of the two embeddings.
    pub fn trace(&self) -> Rat {
        Rat::new(2 * &self.p, self.r.clone())
    }

    /// Exact sign of the real value `(p + q*sqrt(D)) / r`.
    ///
    /// When `p` and `q` disagree in sign the tie is settled by comparing
    /// `p^2` with `q^2 D`; equality is impossible since `D` is not a square.
    pub fn signum(&self) -> i32 {
        let sp = int_sign(&self.p);
        let sq = int_sign(&self.q);
        match (sp, sq) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            (sp, _) => {
                let p2 = &self.p * &self.p;
                let q2d = &self.q * &self.q * self.ctx.disc();
                if p2 > q2d {
                    sp
                } else {
                    -sp
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn inv(&self) -> Result<QElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // 1/x = conj(x) / N(x) = r(p - q sqrt(D)) / (p^2 - q^2 D)
        let n = &self.p * &self.p - &self.q * &self.q * self.ctx.disc();
        Ok(QElem::new(
            self.ctx.clone(),
            &self.r * &self.p,
            -(&self.r * &self.q),
            n,
        ))
    }

    pub fn checked_div(&self, rhs: &QElem) -> Result<QElem, FieldError> {
        if self.ctx != rhs.ctx {
            return Err(FieldError::CtxMismatch);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> QElem {
        self * self
    }

    /// Exact `floor` of the real value.
    pub fn floor(&self) -> Int {
        if self.q.is_zero() {
            return self.p.div_floor(&self.r);
        }
        // floor(q sqrt(D)) via the integer square root of q^2 D; the value is
        // irrational, so p + q sqrt(D) lies strictly between A and A + 1.
        let q2d = &self.q * &self.q * self.ctx.disc();
        let s = q2d.sqrt();
        let fl = if self.q.is_positive() { s } else { -s - 1 };
        (&self.p + fl).div_floor(&self.r)
    }

    /// Nearest integer, halves rounding up (`floor(x + 1/2)`).
    pub fn round_nearest(&self) -> Int {
        let half_up = QElem::new(
            self.ctx.clone(),
            2 * &self.p + &self.r,
            2 * &self.q,
            2 * &self.r,
        );
        half_up.floor()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.q.is_zero() {
            Some(Rat::new(self.p.clone(), self.r.clone()))
        } else {
            None
        }
    }

    /// Floating approximation, for display and diagnostics only.
    pub fn approx(&self) -> f64 {
        let d = self.ctx.disc().to_f64().unwrap_or(f64::INFINITY);
        let p = self.p.to_f64().unwrap_or(f64::INFINITY);
        let q = self.q.to_f64().unwrap_or(f64::INFINITY);
        let r = self.r.to_f64().unwrap_or(f64::INFINITY);
        (p + q * d.sqrt()) / r
    }

    /// Approximation of the conjugate embedding.
    pub fn approx_conj(&self) -> f64 {
        self.conj().approx()
    }

    fn assert_ctx(&self, other: &QElem) {
        assert!(self.ctx == other.ctx, "elements from different fields");
    }
}

trait IsOneLike {
    fn is_one_like(&self) -> bool;
}
impl IsOneLike for Int {
    fn is_one_like(&self) -> bool {
        self.to_u8().map(|v| v == 1).unwrap_or(false)
    }
}

fn int_sign(x: &Int) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Debug for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.p, self.q, self.ctx.disc(), self.r)
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}√{})/{}", self.p, self.q, self.ctx.disc(), self.r)
    }
}

impl PartialOrd for QElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.assert_ctx(other);
        Some((self - other).signum().cmp(&0))
    }
}

impl Add for &QElem {
    type Output = QElem;
    fn add(self, rhs: &QElem) -> QElem {
        self.assert_ctx(rhs);
        QElem::new(
            self.ctx.clone(),
            &self.p * &rhs.r + &rhs.p * &self.r,
            &self.q * &rhs.r + &rhs.q * &self.r,
            &self.r * &rhs.r,
        )
    }
}

impl Sub for &QElem {
    type Output = QElem;
    fn sub(self, rhs: &QElem) -> QElem {
        self + &(-rhs)
    }
}

impl Mul for &QElem {
    type Output = QElem;
    fn mul(self, rhs: &QElem) -> QElem {
        self.assert_ctx(rhs);
        QElem::new(
            self.ctx.clone(),
            &self.p * &rhs.p + &self.q * &rhs.q * self.ctx.disc(),
            &self.p * &rhs.q + &self.q * &rhs.p,
            &self.r * &rhs.r,
        )
    }
}

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem {
            ctx: self.ctx.clone(),
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
        }
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> FieldCtx {
        FieldCtx::new(d).unwrap()
    }

    #[test]
    fn ctx_validation() {
        assert!(FieldCtx::new(73).is_ok());
        assert!(FieldCtx::new(12).is_ok());
        assert_eq!(FieldCtx::new(16), Err(FieldError::SquareDisc(Int::from(16))));
        assert_eq!(FieldCtx::new(7), Err(FieldError::BadResidue(Int::from(7))));
        assert_eq!(
            FieldCtx::new(-3),
            Err(FieldError::NonPositiveDisc(Int::from(-3)))
        );
        assert!(FieldCtx::new(0).is_err());
    }

    #[test]
    fn conj_flips_q() {
        let x = ctx(12).elem(1, 1, 2);
        let c = x.conj();
        assert_eq!(c, ctx(12).elem(1, -1, 2));
    }

    #[test]
    fn normalization() {
        // gcd(2,1,4)=1 stays as-is
        let x = ctx(12).elem(2, 1, 4);
        assert_eq!((x.p(), x.q(), x.r()), (&Int::from(2), &Int::from(1), &Int::from(4)));
        // negative denominator flips signs
        let y = ctx(12).elem(2, -4, -6);
        assert_eq!((y.p(), y.q(), y.r()), (&Int::from(-1), &Int::from(2), &Int::from(3)));
        // zero element
        let z = ctx(12).elem(0, 0, 5);
        assert_eq!((z.p(), z.q(), z.r()), (&Int::from(0), &Int::from(0), &Int::from(1)));
    }

    #[test]
    fn norm_via_conj_product() {
        // Q(sqrt(511)), disc 2044: N(f - 1/2) = -3/4 for f = (19+sqrt(511))/25
        let c = ctx(2044);
        let x = c.elem(13, 1, 50);
        let prod = &x * &x.conj();
        assert_eq!(prod.as_rat().unwrap(), Rat::new(Int::from(-3), Int::from(4)));
        assert_eq!(x.norm(), Rat::new(Int::from(-3), Int::from(4)));
    }

    #[test]
    fn sign_cases() {
        let c = ctx(73);
        assert_eq!(c.zero().signum(), 0);
        assert_eq!(c.elem(-7, 1, 1).signum(), 1); // 49 < 73
        assert_eq!(c.elem(7, -1, 2).signum(), -1);
        assert_eq!(c.elem(9, -1, 1).signum(), 1); // 81 > 73
        assert_eq!(c.elem(-9, 1, 1).signum(), -1);
    }

    #[test]
    fn norm_and_trace() {
        let c = ctx(12);
        let x = c.elem(0, 1, 2); // sqrt(12)/2
        assert_eq!(x.norm(), Rat::new(Int::from(-3), Int::from(1)));
        let one = c.one();
        assert_eq!(one.norm(), Rat::new(Int::from(1), Int::from(1)));
        assert_eq!(one.trace(), Rat::new(Int::from(2), Int::from(1)));
    }

    #[test]
    fn inverse_and_division() {
        let c = ctx(73);
        let f = c.elem(7, 1, 2);
        let inv = f.inv().unwrap();
        assert_eq!(&f * &inv, c.one());
        assert_eq!(c.zero().inv(), Err(FieldError::DivisionByZero));
        let other = ctx(12).one();
        assert_eq!(f.checked_div(&other), Err(FieldError::CtxMismatch));
    }

    #[test]
    fn floor_exact() {
        let c = ctx(73); // sqrt(73) = 8.544...
        assert_eq!(c.sqrt_disc().floor(), Int::from(8));
        assert_eq!((-&c.sqrt_disc()).floor(), Int::from(-9));
        assert_eq!(c.elem(7, 1, 2).floor(), Int::from(7)); // (7+8.544)/2 = 7.77
        assert_eq!(c.elem(-7, -1, 2).floor(), Int::from(-8));
        assert_eq!(c.elem(7, 0, 2).floor(), Int::from(3));
        assert_eq!(c.elem(-7, 0, 2).floor(), Int::from(-4));
    }

    #[test]
    fn round_nearest_exact() {
        let c = ctx(73);
        assert_eq!(c.sqrt_disc().round_nearest(), Int::from(9)); // 8.544
        assert_eq!(c.elem(0, -1, 1).round_nearest(), Int::from(-9));
        assert_eq!(c.elem(1, 0, 2).round_nearest(), Int::from(1)); // half rounds up
    }

    #[test]
    fn ordering() {
        let c = ctx(73);
        assert!(c.elem(8, 0, 1) < c.sqrt_disc());
        assert!(c.elem(9, 0, 1) > c.sqrt_disc());
    }
}
