//! Rank-2 metric lattices over a real quadratic field.
//!
//! A field element `g` maps to the plane point `(u1 σ(g), u2 σ'(g))` for a
//! positive weight pair `u`. Squared lengths and inner products stay inside
//! the field (a rational when the weights come from `|σ(y)|, |σ'(y)|`), so
//! Lagrange–Gauss reduction and shortest-vector selection run on exact sign
//! tests alone.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{QElem, Rat};
use crate::ideal::Module2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,
    #[error("metric weights must be positive")]
    NonPositiveMetric,
}

/// Positive weights `(u1, u2)` for the length form, given exactly either as
/// rational squares `u1^2 = s, u2^2 = w` or as `(|σ(y)|, |σ'(y)|)` for a
/// nonzero field element `y`.
#[derive(Clone, PartialEq, Debug)]
pub enum Metric {
    RationalSquares { s: Rat, w: Rat },
    FieldAbs { y: QElem },
}

impl Metric {
    pub fn unit() -> Metric {
        let one = Rat::from_integer(1.into());
        Metric::RationalSquares { s: one.clone(), w: one }
    }

    pub fn rational(s: Rat, w: Rat) -> Result<Metric, LatticeError> {
        if !s.is_positive() || !w.is_positive() {
            return Err(LatticeError::NonPositiveMetric);
        }
        Ok(Metric::RationalSquares { s, w })
    }

    pub fn field_abs(y: QElem) -> Result<Metric, LatticeError> {
        if y.is_zero() {
            return Err(LatticeError::NonPositiveMetric);
        }
        Ok(Metric::FieldAbs { y })
    }

    /// `N(u)^2 = (u1 u2)^2`, always rational.
    pub fn norm_sq(&self) -> Rat {
        match self {
            Metric::RationalSquares { s, w } => s * w,
            Metric::FieldAbs { y } => {
                let n = y.norm();
                &n * &n
            }
        }
    }

    /// `(u1^2, u2^2)` as floats, for the distance diagnostic only.
    pub fn weights_sq_approx(&self) -> (f64, f64) {
        match self {
            Metric::RationalSquares { s, w } => (rat_f64(s), rat_f64(w)),
            Metric::FieldAbs { y } => {
                let sq = y.square();
                (sq.approx(), sq.approx_conj())
            }
        }
    }
}

fn rat_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// `u1^2 σ(g) σ(h) + u2^2 σ'(g) σ'(h)` as an exact field element.
pub fn inner(g: &QElem, h: &QElem, u: &Metric) -> QElem {
    let gh = g * h;
    match u {
        Metric::RationalSquares { s, w } => {
            let ctx = g.ctx();
            &(&ctx.from_rat(s) * &gh) + &(&ctx.from_rat(w) * &gh.conj())
        }
        Metric::FieldAbs { y } => {
            let t = &y.square() * &gh;
            &t + &t.conj()
        }
    }
}

/// Exact squared length `u1^2 σ(g)^2 + u2^2 σ'(g)^2`.
pub fn sqlen(g: &QElem, u: &Metric) -> QElem {
    inner(g, g, u)
}

/// An ordered basis of a rank-2 lattice under a metric.
#[derive(Clone, PartialEq, Debug)]
pub struct Basis2 {
    pub v1: QElem,
    pub v2: QElem,
    pub metric: Metric,
}

impl Basis2 {
    pub fn new(v1: QElem, v2: QElem, metric: Metric) -> Result<Basis2, LatticeError> {
        if (v1.p() * v2.q() - v2.p() * v1.q()).is_zero() {
            return Err(LatticeError::DegenerateBasis);
        }
        Ok(Basis2 { v1, v2, metric })
    }

    /// `⟨v1, v2⟩ / ‖v1‖^2`.
    pub fn mu(&self) -> QElem {
        let ip = inner(&self.v1, &self.v2, &self.metric);
        ip.checked_div(&sqlen(&self.v1, &self.metric))
            .expect("independent basis vector has nonzero length")
    }
}

/// Lagrange–Gauss reduction: on return `‖v1‖ <= ‖v2‖` and `|mu| <= 1/2`,
/// so `v1` is a shortest nonzero lattice vector. Exact comparisons only.
pub fn gauss_reduce(basis: Basis2) -> Basis2 {
    let Basis2 { mut v1, mut v2, metric } = basis;
    loop {
        if sqlen(&v1, &metric) > sqlen(&v2, &metric) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let mu = inner(&v2, &v1, &metric)
            .checked_div(&sqlen(&v1, &metric))
            .expect("nonzero v1");
        let t = mu.round_nearest();
        if !t.is_zero() {
            v2 = &v2 - &(&v1.ctx().from_int(t) * &v1);
        }
        if sqlen(&v2, &metric) >= sqlen(&v1, &metric) {
            return Basis2 { v1, v2, metric };
        }
    }
}

/// Size-reduction plus the rank-2 Lovász (Lagrange) ordering, checked exactly.
pub fn is_lll_reduced(basis: &Basis2) -> bool {
    let l1 = sqlen(&basis.v1, &basis.metric);
    let l2 = sqlen(&basis.v2, &basis.metric);
    if l1 > l2 {
        return false;
    }
    // |mu| <= 1/2  <=>  2 |<v1,v2>| <= ||v1||^2
    let ip2 = {
        let ip = inner(&basis.v1, &basis.v2, &basis.metric);
        &ip + &ip
    };
    &l1 - &ip2 >= basis.v1.ctx().zero() && &l1 + &ip2 >= basis.v1.ctx().zero()
}

/// Deterministic choice among equal-length minima: positive trace first,
/// then smaller |q|, then smaller |p|, finally positive q / p.
fn prefer(cand: &QElem, best: &QElem) -> bool {
    let ct = cand.trace();
    let bt = best.trace();
    let cpos = ct.is_positive();
    let bpos = bt.is_positive();
    if cpos != bpos {
        return cpos;
    }
    let key = |x: &QElem| (x.q().abs(), x.p().abs());
    match key(cand).cmp(&key(best)) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => (cand.q(), cand.p()) > (best.q(), best.p()),
    }
}

fn pick_min<I: IntoIterator<Item = QElem>>(cands: I, u: &Metric) -> Option<QElem> {
    let mut best: Option<(QElem, QElem)> = None;
    for c in cands {
        if c.is_zero() {
            continue;
        }
        let l = sqlen(&c, u);
        best = Some(match best {
            None => (c, l),
            Some((b, bl)) => {
                if l < bl || (l == bl && prefer(&c, &b)) {
                    (c, l)
                } else {
                    (b, bl)
                }
            }
        });
    }
    best.map(|(b, _)| b)
}

/// A shortest nonzero vector of the module under the metric, with the
/// deterministic tie-break above.
pub fn shortest_vector(m: &Module2, u: &Metric) -> Result<QElem, LatticeError> {
    let b = Basis2::new(m.g().clone(), m.h().clone(), u.clone())?;
    let red = gauss_reduce(b);
    // after reduction every minimal vector lies among these combinations
    let cands = [
        red.v1.clone(),
        red.v2.clone(),
        &red.v1 + &red.v2,
        &red.v1 - &red.v2,
    ];
    let all = cands.iter().flat_map(|c| [c.clone(), -c]);
    Ok(pick_min(all, u).expect("independent basis yields nonzero candidates"))
}

/// Exhaustive minimum over coefficients in `[-coeff_bound, coeff_bound]^2`;
/// the independent oracle for [`shortest_vector`].
pub fn brute_shortest(m: &Module2, u: &Metric, coeff_bound: u32) -> Result<QElem, LatticeError> {
    assert!(coeff_bound >= 1);
    if (m.g().p() * m.h().q() - m.h().p() * m.g().q()).is_zero() {
        return Err(LatticeError::DegenerateBasis);
    }
    let ctx = m.ctx();
    let bound = coeff_bound as i64;
    let cands = (-bound..=bound).flat_map(|c1| {
        let m = m.clone();
        let ctx = ctx.clone();
        (-bound..=bound).map(move |c2| {
            &(&ctx.from_int(c1) * m.g()) + &(&ctx.from_int(c2) * m.h())
        })
    });
    Ok(pick_min(cands, u).expect("grid contains nonzero vectors"))
}

/// Squared covolume `|det|^2 = N(u)^2 N(I)^2 D`; rational for every metric.
pub fn covolume_sq(m: &Module2, u: &Metric) -> Rat {
    let t = m.g() * &m.h().conj();
    let diff = &t - &t.conj(); // σ(g)σ'(h) - σ'(g)σ(h)
    let diff_sq = diff.square().as_rat().expect("difference squared is rational");
    u.norm_sq() * diff_sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, Int};
    use crate::ideal::IdealForm;

    fn ctx(d: i64) -> FieldCtx {
        FieldCtx::new(d).unwrap()
    }
    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn sqlen_examples() {
        let c = ctx(73);
        assert_eq!(sqlen(&c.one(), &Metric::unit()), c.from_int(2));
        let f = IdealForm::new(&c, 1, 7).unwrap().f();
        // eq. of lengths with m=0, n=1, a=1, b=7: 2(49+73)/4 = 61
        assert_eq!(sqlen(&f, &Metric::unit()), c.from_int(61));
        let u = Metric::field_abs(f.inv().unwrap()).unwrap();
        assert_eq!(sqlen(&f, &u), c.from_int(2));
    }

    #[test]
    fn gauss_reduce_finds_unit() {
        let c = ctx(73);
        let b = Basis2::new(c.one(), c.elem(7, 1, 2), Metric::unit()).unwrap();
        let red = gauss_reduce(b);
        assert_eq!(sqlen(&red.v1, &Metric::unit()), c.from_int(2));
        assert!(red.v1 == c.one() || red.v1 == c.from_int(-1));
        // idempotent up to sign convention
        let again = gauss_reduce(red.clone());
        assert_eq!(sqlen(&again.v1, &again.metric), sqlen(&red.v1, &red.metric));
    }

    #[test]
    fn gauss_reduce_beats_unit_on_6_5() {
        let c = ctx(73);
        let i = IdealForm::new(&c, 6, 5).unwrap();
        let b = Basis2::new(c.one(), i.f(), Metric::unit()).unwrap();
        let red = gauss_reduce(b);
        let l = sqlen(&red.v1, &Metric::unit());
        assert!(l < c.from_int(2));
        assert_eq!(l, sqlen(&brute_shortest(&i.module(), &Metric::unit(), 25).unwrap(), &Metric::unit()));
    }

    #[test]
    fn shortest_vector_examples() {
        let c = ctx(73);
        let i = IdealForm::new(&c, 1, 7).unwrap();
        let sv = shortest_vector(&i.module(), &Metric::unit()).unwrap();
        assert_eq!(sv, c.one());
        let c5 = ctx(5);
        let i5 = IdealForm::new(&c5, 1, 1).unwrap();
        assert_eq!(
            shortest_vector(&i5.module(), &Metric::unit()).unwrap(),
            c5.one()
        );
        let b = brute_shortest(&i5.module(), &Metric::unit(), 25).unwrap();
        assert_eq!(b, c5.one());
    }

    #[test]
    fn shortest_ties_disc_12() {
        // (12, 2, 2): ||1||, ||f||, ||f-1|| are all exactly 2
        let c = ctx(12);
        let i = IdealForm::new(&c, 2, 2).unwrap();
        let u = Metric::unit();
        let f = i.f();
        let fm1 = &f - &c.one();
        assert_eq!(sqlen(&f, &u), c.from_int(2));
        assert_eq!(sqlen(&fm1, &u), c.from_int(2));
        let sv = shortest_vector(&i.module(), &u).unwrap();
        assert_eq!(sqlen(&sv, &u), c.from_int(2));
        // tie-break is deterministic
        assert_eq!(sv, shortest_vector(&i.module(), &u).unwrap());
    }

    #[test]
    fn lll_case3_mu_closed_form() {
        // (28, 3, 2) is in the f-shortest region; mu = 2ab/(b^2 + D) = 3/8
        let c = ctx(28);
        let i = IdealForm::new(&c, 3, 2).unwrap();
        let basis = Basis2::new(i.f(), c.one(), Metric::unit()).unwrap();
        assert!(is_lll_reduced(&basis));
        assert_eq!(basis.mu().as_rat().unwrap(), rat(12, 32));
        // and f is shortest
        let sv = shortest_vector(&i.module(), &Metric::unit()).unwrap();
        assert_eq!(sqlen(&sv, &Metric::unit()), sqlen(&i.f(), &Metric::unit()));
    }

    #[test]
    fn lll_case4_mu_closed_form() {
        // (2044, 25, 38): basis (f-1, 1), |mu| = 2a(2a-b)/((2a-b)^2 + D);
        // mu itself is negative since trace(f) < 2
        let c = ctx(2044);
        let i = IdealForm::new(&c, 25, 38).unwrap();
        let fm1 = &i.f() - &c.one();
        let basis = Basis2::new(fm1.clone(), c.one(), Metric::unit()).unwrap();
        assert!(is_lll_reduced(&basis));
        assert_eq!(basis.mu().as_rat().unwrap(), -rat(600, 2188));
        let sv = shortest_vector(&i.module(), &Metric::unit()).unwrap();
        assert_eq!(sqlen(&sv, &Metric::unit()), sqlen(&fm1, &Metric::unit()));
    }

    #[test]
    fn not_size_reduced() {
        let c = ctx(73);
        let f = IdealForm::new(&c, 1, 7).unwrap().f();
        let b = Basis2::new(c.one(), &c.from_int(10) + &f, Metric::unit()).unwrap();
        assert!(!is_lll_reduced(&b));
    }

    #[test]
    fn covolume_examples() {
        let c = ctx(73);
        let i = IdealForm::new(&c, 1, 7).unwrap();
        assert_eq!(covolume_sq(&i.module(), &Metric::unit()), rat(73, 1));
        let i = IdealForm::new(&c, 6, 5).unwrap();
        assert_eq!(covolume_sq(&i.module(), &Metric::unit()), rat(73, 36));
        // scaling the metric multiplies co^2 by N(u)^2
        let u = Metric::rational(rat(4, 1), rat(9, 1)).unwrap();
        assert_eq!(covolume_sq(&i.module(), &u), rat(36 * 73, 36));
    }

    #[test]
    fn isometry_field_abs() {
        let c = ctx(73);
        let y = c.elem(3, 1, 5);
        let g = c.elem(2, 1, 3);
        let u = Metric::field_abs(y.clone()).unwrap();
        assert_eq!(sqlen(&g, &u), sqlen(&(&y * &g), &Metric::unit()));
    }

    #[test]
    fn degenerate_rejected() {
        let c = ctx(73);
        assert_eq!(
            Basis2::new(c.one(), c.from_int(3), Metric::unit()).unwrap_err(),
            LatticeError::DegenerateBasis
        );
        assert_eq!(
            Metric::rational(rat(0, 1), rat(1, 1)).unwrap_err(),
            LatticeError::NonPositiveMetric
        );
    }
}
