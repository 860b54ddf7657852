//! Reduced fractional ideals `I = Z + f Z` in canonical `(a, b)` form, plus
//! general rank-2 modules and their canonicalization.
//!
//! Every reduced ideal has a unique generator `f = (b + sqrt(D)) / (2a)` with
//! `|sqrt(D) - 2a| < b < sqrt(D)` and `4a | b^2 - D`; conversely any pair
//! `(a, b)` passing those exact checks describes a reduced ideal with
//! `N(I^{-1}) = a`. Arbitrary two-generator modules are brought to a Hermite
//! canonical basis `(k, k*h)` by integer row reduction on their coordinates in
//! the basis `{1, sqrt(D)}`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{FieldCtx, Int, QElem, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("a must be positive, got {0}")]
    NonPositiveA(Int),
    #[error("4a does not divide b^2 - D for a={a}, b={b}")]
    NotIntegralC { a: Int, b: Int },
    #[error("form a={a}, b={b} violates the reduced-ideal inequalities")]
    NotReduced { a: Int, b: Int },
    #[error("module generators are linearly dependent")]
    DegenerateModule,
    #[error("1 does not lie in the module")]
    OneNotInModule,
    #[error("cannot scale a module by zero")]
    ZeroScale,
    #[error("generators belong to different field contexts")]
    CtxMismatch,
}

/// A reduced fractional ideal in canonical form: `I = Z + f Z` with
/// `f = (b + sqrt(D)) / (2a)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealForm {
    ctx: FieldCtx,
    a: Int,
    b: Int,
}

impl IdealForm {
    /// Validates `(a, b)` exactly: `a >= 1`, `4a | b^2 - D`, and the chain
    /// `|sqrt(D) - 2a| < b < sqrt(D)`.
    pub fn new(
        ctx: &FieldCtx,
        a: impl Into<Int>,
        b: impl Into<Int>,
    ) -> Result<Self, IdealError> {
        let a: Int = a.into();
        let b: Int = b.into();
        if !a.is_positive() {
            return Err(IdealError::NonPositiveA(a));
        }
        let disc = ctx.disc();
        let num = &b * &b - disc;
        if !(&num % (Int::from(4) * &a)).is_zero() {
            return Err(IdealError::NotIntegralC { a, b });
        }
        // b < sqrt(D), with b > 0 forced by the absolute-value lower bound
        let reduced = b.is_positive() && &(&b * &b) < disc && {
            let t = Int::from(2) * &a - &b; // sqrt(D) > 2a - b
            (!t.is_positive() || &(&t * &t) < disc) && {
                let u = Int::from(2) * &a + &b; // sqrt(D) < 2a + b
                &(&u * &u) > disc
            }
        };
        if !reduced {
            return Err(IdealError::NotReduced { a, b });
        }
        Ok(IdealForm { ctx: ctx.clone(), a, b })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn a(&self) -> &Int {
        &self.a
    }
    pub fn b(&self) -> &Int {
        &self.b
    }

    /// `c = (b^2 - D) / (4a)`, so that `D = b^2 - 4ac`.
    pub fn c(&self) -> Int {
        (&self.b * &self.b - self.ctx.disc()) / (4 * &self.a)
    }

    /// The canonical generator `f = (b + sqrt(D)) / (2a)`.
    pub fn f(&self) -> QElem {
        self.ctx.elem(self.b.clone(), 1, 2 * &self.a)
    }

    /// The ideal as the module `Z * 1 + Z * f`.
    pub fn module(&self) -> Module2 {
        Module2 {
            g: self.ctx.one(),
            h: self.f(),
        }
    }
}

/// All reduced ideals of the field, sorted by `(a, b)`.
///
/// Direct scan of the `(a, b)` grid from the canonical-form inequalities:
/// `1 <= a <= floor(sqrt(D))`, `b = D (mod 2)`,
/// `max(sqrt(D) - 2a, 2a - sqrt(D)) < b < sqrt(D)`, `4a | b^2 - D`.
pub fn enumerate_reduced(ctx: &FieldCtx) -> Vec<IdealForm> {
    let s = ctx.sqrt_disc_floor().clone();
    let disc = ctx.disc();
    let mut out = Vec::new();
    let mut a = Int::one();
    while a <= s {
        let lo1 = &s + Int::one() - Int::from(2) * &a;
        let lo2 = Int::from(2) * &a - &s;
        let mut b = lo1.max(lo2).max(Int::one());
        if b.is_even() != disc.is_even() {
            b += 1;
        }
        let four_a = Int::from(4) * &a;
        while b <= s {
            if ((&b * &b - disc) % &four_a).is_zero() {
                if let Ok(ideal) = IdealForm::new(ctx, a.clone(), b.clone()) {
                    out.push(ideal);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

/// The rank-2 module `Z g + Z h`; the generators must be independent over
/// the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Module2 {
    g: QElem,
    h: QElem,
}

impl Module2 {
    pub fn new(g: QElem, h: QElem) -> Result<Self, IdealError> {
        if g.ctx() != h.ctx() {
            return Err(IdealError::CtxMismatch);
        }
        // determinant of the {1, sqrt(D)} coordinates
        if (g.p() * h.q() - h.p() * g.q()).is_zero() {
            return Err(IdealError::DegenerateModule);
        }
        Ok(Module2 { g, h })
    }

    pub fn g(&self) -> &QElem {
        &self.g
    }
    pub fn h(&self) -> &QElem {
        &self.h
    }
    pub fn ctx(&self) -> &FieldCtx {
        self.g.ctx()
    }

    /// `x * (Z g + Z h) = Z (xg) + Z (xh)`.
    pub fn scale(&self, x: &QElem) -> Result<Module2, IdealError> {
        if x.is_zero() {
            return Err(IdealError::ZeroScale);
        }
        Ok(Module2 {
            g: x * &self.g,
            h: x * &self.h,
        })
    }
}

/// Hermite canonical data: the module equals `(d/R) * (Z + Z * (x + q sqrt(D))/d)`
/// with `d, q >= 1` and `0 <= x < d`.
fn hermite_basis(m: &Module2) -> Result<(Int, Int, Int, Int), IdealError> {
    let (g, h) = (&m.g, &m.h);
    let r_lcm = g.r().lcm(h.r());
    let m1 = &r_lcm / g.r();
    let m2 = &r_lcm / h.r();
    let (cp1, cq1) = (g.p() * &m1, g.q() * &m1);
    let (cp2, cq2) = (h.p() * &m2, h.q() * &m2);
    let det = &cp1 * &cq2 - &cp2 * &cq1;
    if det.is_zero() {
        return Err(IdealError::DegenerateModule);
    }
    let eg = cq1.extended_gcd(&cq2);
    let q = eg.gcd; // positive: det != 0 rules out q1 = q2 = 0
    let w0 = &eg.x * &cp1 + &eg.y * &cp2;
    let d = det.abs() / &q;
    let x = w0.mod_floor(&d);
    Ok((r_lcm, d, x, q))
}

/// The canonical shape of a module after scaling its first generator to 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CanonicalForm {
    /// The scaled module is a reduced ideal in `(a, b)` form.
    Ideal(IdealForm),
    /// `Z + Z h` with no reduced `(a, b)` description in this field context.
    Raw(RawForm),
}

/// `Z + Z h` with `h` shifted into `[0, 1)` in its rational part and its
/// `sqrt(D)` coefficient positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RawForm {
    second: QElem,
}

impl RawForm {
    pub fn second(&self) -> &QElem {
        &self.second
    }

    /// Rebuilds the module as an ideal form over the discriminant `4 q^2 D`,
    /// where `q/r` is the `sqrt(D)` coefficient of the second generator.
    /// `Z + Z sqrt(D)` for example is the canonical ideal of disc `4D`.
    pub fn reinterpret(&self) -> Result<IdealForm, IdealError> {
        let h = &self.second;
        let d2 = 4 * h.q() * h.q() * h.ctx().disc();
        let ctx2 = FieldCtx::new(d2).expect("4 q^2 D is a valid discriminant");
        let a = h.r().clone();
        let s2 = ctx2.sqrt_disc_floor();
        let two_a = Int::from(2) * &a;
        let lo = s2 + Int::one() - &two_a;
        let b = &lo + (Int::from(2) * h.p() - &lo).mod_floor(&two_a);
        IdealForm::new(&ctx2, a, b)
    }
}

/// Canonicalizes `m` as `scale * (Z + Z h)` and tries to recognize the scaled
/// module as a reduced ideal. The scale makes the first canonical generator
/// exactly 1; the `(a, b)` extraction fails only when the module is not a
/// reduced ideal of this field context.
pub fn normalize_module(m: &Module2) -> Result<(Rat, CanonicalForm), IdealError> {
    let ctx = m.ctx();
    let (r_lcm, d, x, q) = hermite_basis(m)?;
    let scale = Rat::new(d.clone(), r_lcm);
    let h = QElem::new(ctx.clone(), x, q, d);
    Ok((scale, extract_form(ctx, h)))
}

fn extract_form(ctx: &FieldCtx, h: QElem) -> CanonicalForm {
    // h has positive sqrt(D) coefficient by construction
    if h.q().is_one() && h.r().is_even() {
        let a = h.r() / 2;
        let s = ctx.sqrt_disc_floor();
        let lo = s + Int::one() - h.r();
        let b = &lo + (h.p() - &lo).mod_floor(h.r());
        if let Ok(ideal) = IdealForm::new(ctx, a, b) {
            return CanonicalForm::Ideal(ideal);
        }
    }
    let shifted = QElem::new(
        ctx.clone(),
        h.p().mod_floor(h.r()),
        h.q().clone(),
        h.r().clone(),
    );
    CanonicalForm::Raw(RawForm { second: shifted })
}

/// True iff 1 lies in `m` and is not divisible there by any integer `d >= 2`;
/// equivalently, the canonical scale is exactly 1.
pub fn one_is_primitive(m: &Module2) -> Result<bool, IdealError> {
    let (scale, _) = normalize_module(m)?;
    if !scale.numer().is_one() {
        return Err(IdealError::OneNotInModule);
    }
    Ok(scale.denom().is_one())
}

/// True iff no nonzero element of `m` has both embeddings in `(-1, 1)`.
///
/// The canonical basis `(k, k h)` bounds the search: an element
/// `k (m1 + m2 h)` inside the open unit box has its embedding difference and
/// sum below 2, which pins `m2` to finitely many values and then `m1` to a
/// short interval. Each candidate is checked with exact sign tests.
pub fn is_one_minimal(m: &Module2) -> Result<bool, IdealError> {
    let ctx = m.ctx();
    let (scale, form) = normalize_module(m)?;
    let h = match form {
        CanonicalForm::Ideal(i) => i.f(),
        CanonicalForm::Raw(raw) => raw.second.clone(),
    };
    let (ku, kv) = (scale.numer().clone(), scale.denom().clone());
    // |m2| < r kv / (ku q sqrt(D))
    let num = h.r() * &kv;
    let den_sq = (&ku * h.q()).pow(2) * ctx.disc();
    let m2_bound: Int = ((&num * &num) / den_sq).sqrt() + 1;
    let one = ctx.one();
    let inv_k = Rat::new(kv.clone(), ku.clone());
    let mut m2 = -m2_bound.clone();
    while m2 <= m2_bound {
        // |m1 + m2 p/r| < 1/k
        let center = -Rat::new(&m2 * h.p(), h.r().clone());
        let lo = (&center - &inv_k).floor().to_integer();
        let hi = (&center + &inv_k).floor().to_integer() + 1;
        let mut m1 = lo;
        while m1 <= hi {
            if !(m1.is_zero() && m2.is_zero()) {
                let base = &ctx.from_int(m1.clone()) + &(&ctx.from_int(m2.clone()) * &h);
                let g = &ctx.from_rat(&scale) * &base;
                let inside = g < one
                    && -&one < g
                    && g.conj() < one
                    && -&one < g.conj();
                if inside {
                    return Ok(false);
                }
            }
            m1 += 1;
        }
        m2 += 1;
    }
    Ok(true)
}
